//! Independent oracles shared by the integration tests. Nothing here calls
//! into the generators or stores under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use tway::ca_model::Value;

/// `C(n, r)` from Pascal's triangle, keeping only columns `0..=r`.
pub fn pascal(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=r).rev() {
            row[j] += row[j - 1];
        }
    }
    row[r]
}

/// All t-subsets of `0..k` by filtering every subset of a bitmask, sorted.
pub fn subsets_by_popcount(k: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..1 << k)
        .filter(|m| m.count_ones() as usize == t)
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Every interaction element of a spec, as (combination, values).
pub fn all_elements(t: usize, domains: &[Value]) -> BTreeSet<(Vec<usize>, Vec<Value>)> {
    let mut out = BTreeSet::new();
    for combo in subsets_by_popcount(domains.len(), t) {
        let mut tuples: Vec<Vec<Value>> = vec![vec![]];
        for &i in &combo {
            tuples = tuples
                .into_iter()
                .flat_map(|prefix| {
                    (0..domains[i]).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        for values in tuples {
            out.insert((combo.clone(), values));
        }
    }
    out
}

/// Elements of `t`-way interactions that `row` covers.
pub fn row_elements(t: usize, row: &[Value]) -> BTreeSet<(Vec<usize>, Vec<Value>)> {
    subsets_by_popcount(row.len(), t)
        .into_iter()
        .map(|combo| {
            let values = combo.iter().map(|&i| row[i]).collect();
            (combo, values)
        })
        .collect()
}

/// Every row over `domains`.
pub fn exhaustive_rows(domains: &[Value]) -> Vec<Vec<Value>> {
    let mut rows: Vec<Vec<Value>> = vec![vec![]];
    for &v in domains {
        rows = rows
            .into_iter()
            .flat_map(|prefix| {
                (0..v).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    rows
}

/// Finds a 9-row array over 4 ternary parameters in which every pair of
/// columns shows every value pair exactly once, by depth-first search over
/// the 81 candidate rows in increasing order.
pub fn orthogonal_array_9_2_4_3() -> Vec<Vec<Value>> {
    fn extend(
        candidates: &[Vec<Value>],
        from: usize,
        chosen: &mut Vec<usize>,
        used: &mut [[bool; 9]; 6],
    ) -> bool {
        if chosen.len() == 9 {
            return true;
        }
        for c in from..candidates.len() {
            let row = &candidates[c];
            let slots: Vec<(usize, usize)> = pairs()
                .enumerate()
                .map(|(p, (a, b))| (p, (row[a] * 3 + row[b]) as usize))
                .collect();
            if slots.iter().any(|&(p, s)| used[p][s]) {
                continue;
            }
            for &(p, s) in &slots {
                used[p][s] = true;
            }
            chosen.push(c);
            if extend(candidates, c + 1, chosen, used) {
                return true;
            }
            chosen.pop();
            for &(p, s) in &slots {
                used[p][s] = false;
            }
        }
        false
    }
    fn pairs() -> impl Iterator<Item = (usize, usize)> {
        (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b)))
    }

    let candidates = exhaustive_rows(&[3, 3, 3, 3]);
    let mut chosen = Vec::new();
    let mut used = [[false; 9]; 6];
    assert!(extend(&candidates, 0, &mut chosen, &mut used), "no OA(9;2,4,3) found");
    let rows: Vec<Vec<Value>> = chosen.into_iter().map(|c| candidates[c].clone()).collect();

    // every pair of columns holds each of the 9 value pairs exactly once
    for (a, b) in pairs() {
        let mut seen = [0; 9];
        for r in &rows {
            seen[(r[a] * 3 + r[b]) as usize] += 1;
        }
        assert!(seen.iter().all(|&n| n == 1));
    }
    rows
}
