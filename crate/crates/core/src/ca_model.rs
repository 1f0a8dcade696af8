//! Covering-array domain types and the coverage verification oracle.
//!
//! A [`CoveringArraySpec`] fixes the interaction strength `t`, the number of
//! parameters `k` and the value-domain size of every parameter. Values are
//! 0-based integers `0..v_i`. A [`TestSuite`] is an `N x k` array of rows
//! over those domains; it is a covering array of strength `t` when every
//! [`InteractionElement`] of the spec occurs in at least one row.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parameter value, always in `0..domain`.
pub type Value = u32;

/// Strength, parameter count and per-parameter domain sizes of a covering
/// array. Serialised as `t=<t>;k=<k>;v=<v1>,<v2>,...` where any list item may
/// be written `x^n` for `n` repeats of `x` (so `v=10^10` is ten parameters
/// with ten values each).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoveringArraySpec {
    strength: usize,
    domains: Vec<Value>,
}

impl CoveringArraySpec {
    pub fn new(strength: usize, domains: Vec<Value>) -> Result<Self> {
        let k = domains.len();
        if k == 0 {
            return Err(Error::InvalidArguments("k must be at least 1".into()));
        }
        if strength == 0 || strength > k {
            return Err(Error::InvalidArguments(format!(
                "strength t = {strength} must satisfy 1 <= t <= k = {k}"
            )));
        }
        if let Some(i) = domains.iter().position(|&v| v == 0) {
            return Err(Error::InvalidArguments(format!(
                "parameter {i} has an empty value domain"
            )));
        }
        Ok(Self { strength, domains })
    }

    /// `k` parameters sharing the same domain size `v`.
    pub fn uniform(strength: usize, k: usize, v: Value) -> Result<Self> {
        Self::new(strength, vec![v; k])
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn k(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Value] {
        &self.domains
    }

    pub fn domain(&self, parameter: usize) -> Value {
        self.domains[parameter]
    }

    /// Number of values the parameters of `combo` can jointly take.
    pub fn tuple_count(&self, combo: &Combination) -> u128 {
        combo
            .indices()
            .iter()
            .map(|&i| u128::from(self.domains[i]))
            .product()
    }

    /// Total number of interaction elements: the sum over all t-subsets of
    /// parameters of the product of their domain sizes. Computed as the
    /// elementary symmetric polynomial of degree `t` over the domain sizes,
    /// so it does not enumerate combinations.
    pub fn interaction_count(&self) -> Result<u128> {
        let t = self.strength;
        // e[j] = elementary symmetric polynomial of degree j over the prefix seen so far
        let mut e = vec![0u128; t + 1];
        e[0] = 1;
        for &v in &self.domains {
            for j in (1..=t).rev() {
                let term = e[j - 1]
                    .checked_mul(u128::from(v))
                    .and_then(|x| x.checked_add(e[j]))
                    .ok_or_else(|| Error::Overflow(format!("interaction count of {self}")))?;
                e[j] = term;
            }
        }
        Ok(e[t])
    }

    /// Checks that `row` has `k` entries, each inside its domain.
    pub fn check_row(&self, row: &TestCase) -> Result<()> {
        if row.values().len() != self.k() {
            return Err(Error::InvalidTestCase(format!(
                "row has {} values, spec has k = {}",
                row.values().len(),
                self.k()
            )));
        }
        for (i, (&value, &domain)) in row.values().iter().zip(&self.domains).enumerate() {
            if value >= domain {
                return Err(Error::InvalidTestCase(format!(
                    "value {value} of parameter {i} is outside its domain 0..{domain}"
                )));
            }
        }
        Ok(())
    }

    pub fn check_combination(&self, combo: &Combination) -> Result<()> {
        if combo.len() != self.strength {
            return Err(Error::InvalidCombination(format!(
                "{combo} has {} indices, strength is {}",
                combo.len(),
                self.strength
            )));
        }
        match combo.indices().last() {
            Some(&last) if last >= self.k() => Err(Error::InvalidCombination(format!(
                "{combo} refers to parameter {last}, k = {}",
                self.k()
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CoveringArraySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={};k={};v=", self.strength, self.k())?;
        let mut first = true;
        let mut rest = self.domains.as_slice();
        while let Some(&v) = rest.first() {
            let run = rest.iter().take_while(|&&x| x == v).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{v}^{run}")?;
            } else {
                write!(f, "{v}")?;
            }
            rest = &rest[run..];
        }
        Ok(())
    }
}

impl FromStr for CoveringArraySpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| Error::SpecParse {
            input: input.to_owned(),
            reason,
        };
        let parse_count = |key: &str, raw: &str| -> Result<usize> {
            raw.trim()
                .parse::<usize>()
                .map_err(|e| fail(format!("{key}: {e}")))
        };

        let (mut t, mut k, mut v) = (None, None, None);
        for part in input.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| fail(format!("expected key=value, found {part:?}")))?;
            let slot = match key.trim() {
                "t" => &mut t,
                "k" => &mut k,
                "v" => &mut v,
                other => return Err(fail(format!("unknown key {other:?}"))),
            };
            if slot.replace(value.trim()).is_some() {
                return Err(fail(format!("duplicate key {:?}", key.trim())));
            }
        }
        let t = parse_count("t", t.ok_or_else(|| fail("missing t".into()))?)?;
        let k = parse_count("k", k.ok_or_else(|| fail("missing k".into()))?)?;
        let v = v.ok_or_else(|| fail("missing v".into()))?;

        let mut domains = Vec::with_capacity(k);
        for item in v.split(',').map(str::trim) {
            let (value, repeat) = match item.split_once('^') {
                Some((value, repeat)) => (value, parse_count("v repeat", repeat)?),
                None => (item, 1),
            };
            let value: Value = value
                .trim()
                .parse()
                .map_err(|e| fail(format!("v item {item:?}: {e}")))?;
            if domains.len().saturating_add(repeat) > k {
                return Err(fail(format!("v lists more than k = {k} domain sizes")));
            }
            domains.extend(std::iter::repeat_n(value, repeat));
        }
        if domains.len() != k {
            return Err(fail(format!(
                "k = {k} but v lists {} domain sizes",
                domains.len()
            )));
        }
        Self::new(t, domains).map_err(|e| fail(e.to_string()))
    }
}

/// A strictly increasing selection of parameter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Combination(Vec<usize>);

impl Combination {
    /// Validates that `indices` are strictly increasing and below `k`.
    pub fn new(indices: Vec<usize>, k: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCombination(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= k {
                return Err(Error::InvalidCombination(format!(
                    "index {last} out of range for k = {k}"
                )));
            }
        }
        Ok(Self(indices))
    }

    /// Caller guarantees the indices are strictly increasing.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// A combination together with one value per selected parameter: a single
/// t-tuple coverage obligation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InteractionElement {
    pub combo: Combination,
    pub values: Vec<Value>,
}

impl InteractionElement {
    pub fn new(spec: &CoveringArraySpec, combo: Combination, values: Vec<Value>) -> Result<Self> {
        spec.check_combination(&combo)?;
        if values.len() != combo.len() {
            return Err(Error::InvalidArguments(format!(
                "{} values for combination {combo}",
                values.len()
            )));
        }
        for (&i, &value) in combo.indices().iter().zip(&values) {
            if value >= spec.domain(i) {
                return Err(Error::InvalidArguments(format!(
                    "value {value} outside domain of parameter {i}"
                )));
            }
        }
        Ok(Self { combo, values })
    }
}

impl fmt::Display for InteractionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, (i, v)) in self.combo.indices().iter().zip(&self.values).enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}:{v}")?;
        }
        f.write_str(")")
    }
}

/// One value per parameter: a row of the array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestCase(Vec<Value>);

impl TestCase {
    pub fn new(values: Vec<Value>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Value> {
        self.0
    }
}

impl From<Vec<Value>> for TestCase {
    fn from(values: Vec<Value>) -> Self {
        Self(values)
    }
}

/// Projects `row` onto the parameters of `combo`.
pub fn extract_element(row: &TestCase, combo: &Combination) -> Result<InteractionElement> {
    let values = combo
        .indices()
        .iter()
        .map(|&i| {
            row.values().get(i).copied().ok_or_else(|| {
                Error::InvalidCombination(format!(
                    "index {i} of {combo} is out of range for a row of length {}",
                    row.values().len()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InteractionElement {
        combo: combo.clone(),
        values,
    })
}

/// An `N x k` array of rows valid against a spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSuite {
    spec: CoveringArraySpec,
    rows: Vec<TestCase>,
}

impl TestSuite {
    pub fn new(spec: CoveringArraySpec, rows: Vec<TestCase>) -> Result<Self> {
        for (n, row) in rows.iter().enumerate() {
            spec.check_row(row)
                .map_err(|e| Error::InvalidTestCase(format!("row {n}: {e}")))?;
        }
        Ok(Self { spec, rows })
    }

    pub fn empty(spec: CoveringArraySpec) -> Self {
        Self {
            spec,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: TestCase) -> Result<()> {
        self.spec.check_row(&row)?;
        self.rows.push(row);
        Ok(())
    }

    pub fn spec(&self) -> &CoveringArraySpec {
        &self.spec
    }

    pub fn rows(&self) -> &[TestCase] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Writes one row per line as comma-separated integers, no header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for row in &self.rows {
            writer.write_record(row.values().iter().map(|v| v.to_string()))?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads rows written by [`TestSuite::write_csv`] and validates them
    /// against `spec`. An empty input is an empty suite.
    pub fn read_csv<R: Read>(spec: CoveringArraySpec, input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut rows = Vec::new();
        for (n, record) in reader.records().enumerate() {
            let record = record?;
            let values = record
                .iter()
                .map(|field| {
                    field.parse::<Value>().map_err(|e| {
                        Error::InvalidTestCase(format!("row {n}: field {field:?}: {e}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(TestCase::new(values));
        }
        Self::new(spec, rows)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// Interaction elements present in at least one row.
    pub covered: u64,
    /// Every interaction element of the spec absent from all rows, ordered by
    /// combination (lexicographic) and then by value tuple (odometer order).
    pub missing: Vec<InteractionElement>,
}

impl VerificationReport {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Checks strength-`t` coverage (each t-tuple at least once) of `suite`.
///
/// This is a self-contained oracle: it enumerates combinations and value
/// tuples on its own rather than going through [`crate::combgen`] or
/// [`crate::store`], so it can be used to check both.
pub fn verify_coverage(suite: &TestSuite) -> VerificationReport {
    let spec = suite.spec();
    let t = spec.strength();
    let k = spec.k();

    let mut covered = 0u64;
    let mut missing = Vec::new();
    let mut indices: Vec<usize> = (0..t).collect();
    loop {
        let seen: HashSet<Vec<Value>> = suite
            .rows()
            .iter()
            .map(|row| indices.iter().map(|&i| row.values()[i]).collect())
            .collect();

        let domains: Vec<Value> = indices.iter().map(|&i| spec.domain(i)).collect();
        let mut values = vec![0; t];
        'tuples: loop {
            if seen.contains(&values) {
                covered += 1;
            } else {
                missing.push(InteractionElement {
                    combo: Combination::from_sorted(indices.clone()),
                    values: values.clone(),
                });
            }
            // odometer step, last position fastest
            for pos in (0..t).rev() {
                values[pos] += 1;
                if values[pos] < domains[pos] {
                    continue 'tuples;
                }
                values[pos] = 0;
            }
            break;
        }

        // next combination: bump the rightmost index that still has room
        let Some(pos) = (0..t).rev().find(|&p| indices[p] < k - t + p) else {
            break;
        };
        indices[pos] += 1;
        for p in pos + 1..t {
            indices[p] = indices[p - 1] + 1;
        }
    }
    VerificationReport { covered, missing }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combo(indices: &[usize]) -> Combination {
        Combination::new(indices.to_vec(), usize::MAX).unwrap()
    }

    #[test]
    fn extract_projects_row_onto_columns() {
        let row = TestCase::new(vec![2, 0, 1, 2]);
        let e = extract_element(&row, &combo(&[0, 3])).unwrap();
        assert_eq!(e.combo.indices(), &[0, 3]);
        assert_eq!(e.values, vec![2, 2]);

        let e = extract_element(&TestCase::new(vec![0, 0, 0]), &combo(&[1, 2])).unwrap();
        assert_eq!(e.values, vec![0, 0]);

        let row = TestCase::new(vec![1, 2, 0]);
        let e = extract_element(&row, &combo(&[0, 1, 2])).unwrap();
        assert_eq!(e.values, row.values());
    }

    #[test]
    fn extract_rejects_out_of_range_index() {
        let err = extract_element(&TestCase::new(vec![0, 1]), &combo(&[0, 2])).unwrap_err();
        assert!(matches!(err, Error::InvalidCombination(_)));
    }

    #[test]
    fn combination_must_be_strictly_increasing() {
        assert!(Combination::new(vec![0, 2, 2], 5).is_err());
        assert!(Combination::new(vec![3, 1], 5).is_err());
        assert!(Combination::new(vec![0, 5], 5).is_err());
        assert!(Combination::new(vec![0, 4], 5).is_ok());
    }

    #[test]
    fn spec_rejects_bad_shapes() {
        assert!(CoveringArraySpec::uniform(0, 5, 2).is_err());
        assert!(CoveringArraySpec::uniform(3, 2, 2).is_err());
        assert!(CoveringArraySpec::new(1, vec![]).is_err());
        assert!(CoveringArraySpec::new(1, vec![2, 0]).is_err());
    }

    #[test]
    fn spec_string_round_trips() {
        let spec: CoveringArraySpec = "t=2;k=10;v=10^10".parse().unwrap();
        assert_eq!(spec, CoveringArraySpec::uniform(2, 10, 10).unwrap());
        assert_eq!(spec.to_string(), "t=2;k=10;v=10^10");

        let mixed: CoveringArraySpec = "t=2; k=5; v=3^2,2,4^2".parse().unwrap();
        assert_eq!(mixed.domains(), &[3, 3, 2, 4, 4]);
        assert_eq!(mixed.to_string(), "t=2;k=5;v=3^2,2,4^2");
        assert_eq!(mixed.to_string().parse::<CoveringArraySpec>().unwrap(), mixed);
    }

    #[test]
    fn spec_string_errors() {
        for bad in [
            "t=0;k=5;v=2^5",
            "t=2;k=3;v=2,2",
            "t=2;k=3",
            "t=2;k=3;v=2^3;t=2",
            "t=x;k=3;v=2^3",
            "t=2;k=3;v=2^3;w=1",
            "garbage",
        ] {
            let err = bad.parse::<CoveringArraySpec>().unwrap_err();
            assert!(matches!(err, Error::SpecParse { .. }), "{bad}: {err}");
        }
    }

    #[test]
    fn interaction_count_matches_product_sum() {
        let spec = CoveringArraySpec::uniform(2, 10, 10).unwrap();
        assert_eq!(spec.interaction_count().unwrap(), 4500);
        let spec = CoveringArraySpec::uniform(3, 20, 10).unwrap();
        assert_eq!(spec.interaction_count().unwrap(), 1_140_000);
        // (0,1):6 (0,2):8 (1,2):12
        let spec = CoveringArraySpec::new(2, vec![2, 3, 4]).unwrap();
        assert_eq!(spec.interaction_count().unwrap(), 26);
    }

    #[test]
    fn empty_suite_misses_everything() {
        let spec = CoveringArraySpec::uniform(2, 2, 2).unwrap();
        let report = verify_coverage(&TestSuite::empty(spec));
        assert_eq!(report.covered, 0);
        assert_eq!(report.missing.len(), 4);
        assert_eq!(report.missing[1].values, vec![0, 1]);
    }

    #[test]
    fn exhaustive_suite_is_complete() {
        let spec = CoveringArraySpec::uniform(2, 3, 3).unwrap();
        let mut rows = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    rows.push(TestCase::new(vec![a, b, c]));
                }
            }
        }
        let report = verify_coverage(&TestSuite::new(spec, rows).unwrap());
        assert!(report.is_complete());
        assert_eq!(report.covered, 27);
    }

    #[test]
    fn suite_rejects_out_of_domain_rows() {
        let spec = CoveringArraySpec::uniform(2, 3, 2).unwrap();
        let err = TestSuite::new(spec.clone(), vec![TestCase::new(vec![0, 2, 0])]).unwrap_err();
        assert!(matches!(err, Error::InvalidTestCase(_)));
        let err = TestSuite::new(spec, vec![TestCase::new(vec![0, 1])]).unwrap_err();
        assert!(matches!(err, Error::InvalidTestCase(_)));
    }

    #[test]
    fn csv_round_trip_and_empty_input() {
        let spec = CoveringArraySpec::uniform(2, 3, 2).unwrap();
        let suite = TestSuite::new(
            spec.clone(),
            vec![TestCase::new(vec![0, 1, 1]), TestCase::new(vec![1, 0, 1])],
        )
        .unwrap();
        let mut buf = Vec::new();
        suite.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0,1,1\n1,0,1\n");
        assert_eq!(TestSuite::read_csv(spec.clone(), buf.as_slice()).unwrap(), suite);

        let empty = TestSuite::read_csv(spec, &b""[..]).unwrap();
        assert!(empty.is_empty());
    }
}
