//! Golden tables embedded in the binary and the `verify` suites that
//! compare them with freshly computed values.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use waring_core::arith::{gcd, prime_powers_up_to};
use waring_core::gamma::{default_uncoverable_bound, gamma_max, uncoverable_fields};
use waring_core::{gamma, Result, WaringError};

const UNCOVERABLE: &str = include_str!("../fixtures/uncoverable_fields.json");
const GAMMA_SMALL_K: &str = include_str!("../fixtures/gamma_three_to_six_k4_to_19.json");
const GAMMA_LARGE_K: &str = include_str!("../fixtures/gamma_three_to_six_k20_to_37.json");
const GAMMA_AT_LEAST_SEVEN: &str = include_str!("../fixtures/gamma_at_least_seven.json");
const GAMMA_MAX: &str = include_str!("../fixtures/gamma_max.json");

#[derive(Clone, Debug, Deserialize)]
pub struct UncoverableRow {
    pub k: u64,
    pub fields: Vec<u64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GammaClassRow {
    pub k: u64,
    pub gamma3: Vec<u64>,
    pub gamma4: Vec<u64>,
    pub gamma5: Vec<u64>,
    pub gamma6: Vec<u64>,
    /// When set, `gamma3` only lists fields up to this order.
    pub gamma3_listed_up_to: Option<u64>,
}

impl GammaClassRow {
    pub fn class(&self, g: u32) -> &[u64] {
        match g {
            3 => &self.gamma3,
            4 => &self.gamma4,
            5 => &self.gamma5,
            6 => &self.gamma6,
            _ => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct GammaPoint {
    pub k: u64,
    pub q: u64,
    pub gamma: u32,
}

#[derive(Clone, Copy, Debug, Deserialize)]
pub struct GammaMaxRow {
    pub k: u64,
    pub gamma_max: u32,
}

#[derive(Deserialize)]
struct Rows<T> {
    rows: Vec<T>,
}

#[derive(Deserialize)]
struct PointRows {
    k_range: [u64; 2],
    rows: Vec<GammaPoint>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Vec<T> {
    serde_json::from_str::<Rows<T>>(text).expect("embedded fixture parses").rows
}

pub fn uncoverable_rows() -> Vec<UncoverableRow> {
    parse(UNCOVERABLE)
}

pub fn gamma_class_rows() -> Vec<GammaClassRow> {
    let mut rows: Vec<GammaClassRow> = parse(GAMMA_SMALL_K);
    rows.extend(parse::<GammaClassRow>(GAMMA_LARGE_K));
    rows
}

pub fn gamma_at_least_seven() -> (std::ops::RangeInclusive<u64>, Vec<GammaPoint>) {
    let p: PointRows = serde_json::from_str(GAMMA_AT_LEAST_SEVEN).expect("embedded fixture parses");
    (p.k_range[0]..=p.k_range[1], p.rows)
}

pub fn gamma_max_rows() -> Vec<GammaMaxRow> {
    parse(GAMMA_MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Uncoverable fields per k.
    Table1,
    /// Fields with γ in 3..6, k from 4 to 19.
    Table2,
    /// Fields with γ in 3..6, k from 20 to 37.
    Table3,
    /// Every field with γ at least 7.
    Gamma7,
    /// The maximum γ(k) over all coverable fields.
    Table5,
}

impl Suite {
    /// Default k-range: the part of the table that checks in seconds to minutes.
    pub fn default_ks(self) -> (u64, u64) {
        match self {
            Suite::Table1 => (4, 12),
            Suite::Table2 => (4, 8),
            Suite::Table3 => (20, 21),
            Suite::Gamma7 => (4, 20),
            Suite::Table5 => (1, 13),
        }
    }

    fn fixture_ks(self) -> (u64, u64) {
        match self {
            Suite::Table1 => (4, 37),
            Suite::Table2 => (4, 19),
            Suite::Table3 => (20, 37),
            Suite::Gamma7 => {
                let r = gamma_at_least_seven().0;
                (*r.start(), *r.end())
            }
            Suite::Table5 => (1, 37),
        }
    }
}

/// One compared value: a set of field orders (or `(q, γ)` codes) or a number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diff {
    pub label: String,
    pub missing: Vec<u64>,
    pub unexpected: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KReport {
    pub k: u64,
    pub pass: bool,
    pub diffs: Vec<Diff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub kmin: u64,
    pub kmax: u64,
    pub qmax: Option<u64>,
    pub pass: bool,
    pub results: Vec<KReport>,
}

fn diff(label: impl Into<String>, expected: &BTreeSet<u64>, actual: &BTreeSet<u64>) -> Option<Diff> {
    let missing: Vec<u64> = expected.difference(actual).copied().collect();
    let unexpected: Vec<u64> = actual.difference(expected).copied().collect();
    (!missing.is_empty() || !unexpected.is_empty()).then(|| Diff {
        label: label.into(),
        missing,
        unexpected,
    })
}

/// Prime powers `q <= bound` with `gcd(k, q-1) >= min_d`; `γ(k,q) <= gcd(k, q-1)`
/// so no other field can have `γ >= min_d`.
fn candidates(k: u64, bound: u64, min_d: u64) -> Vec<u64> {
    prime_powers_up_to(bound)
        .into_iter()
        .map(|t| t.0)
        .filter(|&q| gcd(k, q - 1) >= min_d)
        .collect()
}

fn gammas(k: u64, qs: &[u64]) -> Result<Vec<(u64, Option<u32>)>> {
    qs.par_iter().map(|&q| Ok((q, gamma(k, q)?.gamma()))).collect()
}

/// Runs `suite` for `kmin..=kmax`. `qmax` caps the scanned field orders of
/// the classification suites; fixture entries above it are not compared.
pub fn run_suite(suite: Suite, kmin: u64, kmax: u64, qmax: Option<u64>) -> Result<SuiteReport> {
    let (lo, hi) = suite.fixture_ks();
    if kmin > kmax || kmin < lo || kmax > hi {
        return Err(WaringError::InvalidInput(format!(
            "k range {kmin}..{kmax} is outside the fixture range {lo}..{hi}"
        )));
    }
    let mut results = Vec::new();
    for k in kmin..=kmax {
        let diffs = match suite {
            Suite::Table1 => check_uncoverable(k)?,
            Suite::Table2 | Suite::Table3 => check_classes(k, qmax)?,
            Suite::Gamma7 => check_at_least_seven(k)?,
            Suite::Table5 => check_gamma_max(k)?,
        };
        results.push(KReport {
            k,
            pass: diffs.is_empty(),
            diffs,
        });
    }
    Ok(SuiteReport {
        suite: format!("{suite:?}").to_lowercase(),
        kmin,
        kmax,
        qmax,
        pass: results.iter().all(|r| r.pass),
        results,
    })
}

fn check_uncoverable(k: u64) -> Result<Vec<Diff>> {
    let row = uncoverable_rows().into_iter().find(|r| r.k == k);
    let expected: BTreeSet<u64> = row.map(|r| r.fields).unwrap_or_default().into_iter().collect();
    let actual: BTreeSet<u64> = uncoverable_fields(k, default_uncoverable_bound(k))?.into_iter().collect();
    Ok(diff("uncoverable", &expected, &actual).into_iter().collect())
}

fn check_classes(k: u64, qmax: Option<u64>) -> Result<Vec<Diff>> {
    let row = gamma_class_rows()
        .into_iter()
        .find(|r| r.k == k)
        .ok_or_else(|| WaringError::InvalidInput(format!("no classification row for k={k}")))?;
    // Fields above k^4 need at most two k-th powers.
    let bound = qmax.unwrap_or(u64::MAX).min(k.pow(4));
    let computed = gammas(k, &candidates(k, bound, 3))?;
    let mut out = Vec::new();
    for g in 3..=6u32 {
        let limit = match (g, row.gamma3_listed_up_to) {
            (3, Some(cap)) => bound.min(cap),
            _ => bound,
        };
        let expected: BTreeSet<u64> = row.class(g).iter().copied().filter(|&q| q <= limit).collect();
        let actual: BTreeSet<u64> = computed
            .iter()
            .filter(|(q, got)| *q <= limit && *got == Some(g))
            .map(|(q, _)| *q)
            .collect();
        out.extend(diff(format!("gamma={g}"), &expected, &actual));
    }
    Ok(out)
}

fn check_at_least_seven(k: u64) -> Result<Vec<Diff>> {
    // Encode (q, γ) as q * 1000 + γ so that a wrong value shows as a
    // missing/unexpected pair.
    let encode = |q: u64, g: u32| q * 1000 + g as u64;
    let expected: BTreeSet<u64> = gamma_at_least_seven()
        .1
        .into_iter()
        .filter(|p| p.k == k)
        .map(|p| encode(p.q, p.gamma))
        .collect();
    let actual: BTreeSet<u64> = gammas(k, &candidates(k, k.pow(4), 7))?
        .into_iter()
        .filter_map(|(q, g)| g.filter(|&g| g >= 7).map(|g| encode(q, g)))
        .collect();
    Ok(diff("q*1000+gamma", &expected, &actual).into_iter().collect())
}

fn check_gamma_max(k: u64) -> Result<Vec<Diff>> {
    let expected = gamma_max_rows()
        .into_iter()
        .find(|r| r.k == k)
        .map(|r| r.gamma_max)
        .ok_or_else(|| WaringError::InvalidInput(format!("no gamma_max row for k={k}")))?;
    let actual = gamma_max(k)?;
    Ok(diff(
        "gamma_max",
        &BTreeSet::from([expected as u64]),
        &BTreeSet::from([actual as u64]),
    )
    .into_iter()
    .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_and_cover_their_ranges() {
        let unc = uncoverable_rows();
        assert_eq!(unc.first().unwrap().k, 4);
        assert_eq!(unc.last().unwrap().k, 37);
        assert_eq!(unc.iter().find(|r| r.k == 12).unwrap().fields, vec![4, 9, 25, 121]);
        assert!(unc.iter().find(|r| r.k == 11).unwrap().fields.is_empty());

        let classes = gamma_class_rows();
        assert_eq!(classes.len(), 34);
        let six = classes.iter().find(|r| r.k == 6).unwrap();
        assert_eq!(six.gamma6, vec![7, 13]);

        let (ks, pts) = gamma_at_least_seven();
        assert_eq!(ks, 4..=37);
        assert!(pts.iter().any(|p| p.k == 18 && p.q == 73 && p.gamma == 7));
        assert_eq!(gamma_max_rows().len(), 37);
    }

    #[test]
    fn fixture_self_consistency() {
        // Every listed γ is at most gcd(k, q-1) and at most k.
        for row in gamma_class_rows() {
            for g in 3..=6u32 {
                for &q in row.class(g) {
                    assert!(g as u64 <= gcd(row.k, q - 1), "k={} q={q} g={g}", row.k);
                }
            }
        }
        for p in gamma_at_least_seven().1 {
            assert!(p.gamma as u64 <= gcd(p.k, p.q - 1).min(p.k));
        }
    }

    #[test]
    fn small_suites_pass() {
        assert!(run_suite(Suite::Table1, 4, 6, None).unwrap().pass);
        assert!(run_suite(Suite::Table2, 4, 5, None).unwrap().pass);
        assert!(run_suite(Suite::Table5, 1, 7, None).unwrap().pass);
        assert!(run_suite(Suite::Gamma7, 8, 9, None).unwrap().pass);
        assert!(run_suite(Suite::Table1, 2, 6, None).is_err());
    }
}
