//! Generation of all t-combinations of `k` parameter indices.
//!
//! [`StackCombinations`] is the primary generator: an iterative search over
//! an explicit stack of candidate values, one stack slot per position of the
//! combination being built. [`generate_nbit`] is the bitmask baseline that
//! enumerates every `k`-bit integer and keeps those with `t` set bits.
//! Both produce combinations in lexicographic order.

use crate::ca_model::Combination;
use crate::error::{Error, Result};

/// Widest `k` the n-bit enumerator accepts: masks live in a `u64` and the
/// loop bound `1 << k` must itself be representable.
pub const NBIT_MAX_K: usize = (u64::BITS - 1) as usize;

fn check_args(k: usize, t: usize) -> Result<()> {
    if k == 0 || t == 0 || t > k {
        return Err(Error::InvalidArguments(format!(
            "need 1 <= t <= k, got k = {k}, t = {t}"
        )));
    }
    Ok(())
}

/// All t-combinations of `0..k`, lexicographically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationList {
    k: usize,
    t: usize,
    combos: Vec<Combination>,
}

impl CombinationList {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn combos(&self) -> &[Combination] {
        &self.combos
    }

    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Combination> {
        self.combos.iter()
    }

    pub fn into_vec(self) -> Vec<Combination> {
        self.combos
    }
}

impl IntoIterator for CombinationList {
    type Item = Combination;
    type IntoIter = std::vec::IntoIter<Combination>;

    fn into_iter(self) -> Self::IntoIter {
        self.combos.into_iter()
    }
}

impl<'a> IntoIterator for &'a CombinationList {
    type Item = &'a Combination;
    type IntoIter = std::slice::Iter<'a, Combination>;

    fn into_iter(self) -> Self::IntoIter {
        self.combos.iter()
    }
}

/// Streaming stack-based generator.
///
/// `stack[j]` holds the next value to try at position `j`; the stack is as
/// deep as the prefix currently being extended. Each step pops the top
/// candidate, writes it into the working combination and pushes successors
/// until the combination is full, at which point it is emitted. Exhausted
/// positions are popped without pushing, which backtracks to the previous
/// position's next candidate. Generation ends when the stack is empty.
#[derive(Debug, Clone)]
pub struct StackCombinations {
    k: usize,
    t: usize,
    stack: Vec<usize>,
    comb: Vec<usize>,
}

impl StackCombinations {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        check_args(k, t)?;
        let mut stack = Vec::with_capacity(t);
        stack.push(0);
        Ok(Self {
            k,
            t,
            stack,
            comb: vec![0; t],
        })
    }

    fn advance(&mut self) -> bool {
        while let Some(mut v) = self.stack.pop() {
            let mut i = self.stack.len();
            // v can sit at position i only if t - i values remain for i..t
            while v + (self.t - i) <= self.k {
                self.comb[i] = v;
                i += 1;
                v += 1;
                self.stack.push(v);
                if i == self.t {
                    return true;
                }
            }
        }
        false
    }

    /// Next combination, borrowed from the generator's working buffer.
    pub fn next_slice(&mut self) -> Option<&[usize]> {
        if self.advance() {
            Some(&self.comb)
        } else {
            None
        }
    }

    /// Drains the generator, counting combinations without allocating.
    pub fn count_remaining(mut self) -> u64 {
        let mut n = 0u64;
        while self.advance() {
            n += 1;
        }
        n
    }
}

impl Iterator for StackCombinations {
    type Item = Combination;

    fn next(&mut self) -> Option<Combination> {
        self.next_slice()
            .map(|c| Combination::from_sorted(c.to_vec()))
    }
}

impl std::iter::FusedIterator for StackCombinations {}

/// Materialises every t-combination of `0..k` with the stack generator.
pub fn generate_stack(k: usize, t: usize) -> Result<CombinationList> {
    let combos = StackCombinations::new(k, t)?.collect();
    Ok(CombinationList { k, t, combos })
}

/// Baseline: enumerate `0..2^k`, keep masks with exactly `t` set bits and
/// sort the resulting index lists lexicographically. Fails with
/// [`Error::UnsupportedSize`] when `k > NBIT_MAX_K`.
pub fn generate_nbit(k: usize, t: usize) -> Result<CombinationList> {
    check_args(k, t)?;
    if k > NBIT_MAX_K {
        return Err(Error::UnsupportedSize {
            k,
            limit: NBIT_MAX_K,
        });
    }
    let mut combos = Vec::new();
    for mask in 0..(1u64 << k) {
        if mask.count_ones() as usize == t {
            combos.push(mask_indices(mask));
        }
    }
    combos.sort_unstable();
    Ok(CombinationList { k, t, combos })
}

fn mask_indices(mut mask: u64) -> Combination {
    let mut indices = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        indices.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    Combination::from_sorted(indices)
}

/// Binomial coefficient `C(k, t)`, exact in `u64`.
pub fn count_combinations(k: usize, t: usize) -> Result<u64> {
    check_args(k, t)?;
    binomial(k as u64, t as u64)
        .ok_or_else(|| Error::Overflow(format!("C({k}, {t})")))
}

/// `C(n, r)`, zero when `r > n`, `None` on `u64` overflow.
fn binomial(n: u64, r: u64) -> Option<u64> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc == C(n, i), so this is C(n, i + 1) with no remainder
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Lexicographic rank of t-combinations of `0..k` via the combinatorial
/// number system: `rank(c) = C(k,t) - 1 - sum_i C(k-1-c_i, t-i)`.
#[derive(Debug, Clone)]
pub struct CombinationRanker {
    k: usize,
    t: usize,
    total: u64,
    // table[n * (t + 1) + r] = C(n, r) for n < k, r <= t
    table: Vec<u64>,
}

impl CombinationRanker {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        let total = count_combinations(k, t)?;
        let mut table = Vec::with_capacity(k * (t + 1));
        for n in 0..k {
            for r in 0..=t {
                table.push(
                    binomial(n as u64, r as u64)
                        .ok_or_else(|| Error::Overflow(format!("C({n}, {r})")))?,
                );
            }
        }
        Ok(Self { k, t, total, table })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Rank of a strictly increasing index slice of length `t`.
    pub fn rank(&self, indices: &[usize]) -> u64 {
        debug_assert_eq!(indices.len(), self.t);
        let stride = self.t + 1;
        let tail: u64 = indices
            .iter()
            .enumerate()
            .map(|(i, &c)| self.table[(self.k - 1 - c) * stride + (self.t - i)])
            .sum();
        self.total - 1 - tail
    }
}
