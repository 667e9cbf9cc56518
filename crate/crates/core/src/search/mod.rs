//! Exhaustive searches for integration lattices of minimal dispersion and
//! the distortion threshold of Fibonacci lattices.

mod verify;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{periodic_dispersion_2d, periodic_dispersion_nd};
use crate::error::{domain, Error, Result};
use crate::numeric::{fib_u64, fibonacci_position, Rational};
use crate::pointset::{gen_distorted_fibonacci, gen_integration_lattice, DistortedFibSpec, LatticeSpec};
use crate::splitting::{lattice_dispersion_2d, lattice_dispersion_3d};

pub use verify::{verify_theorems, Check, Profile, Status, VerificationReport};

/// Past this size hits are trusted to the lattice fast paths alone.
const REVALIDATE_MAX_N: u64 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OptimalClass {
    Fibonacci,
    TwiceFibonacci,
    Unclassified,
}

impl OptimalClass {
    pub fn tag(self) -> &'static str {
        match self {
            OptimalClass::Fibonacci => "fibonacci",
            OptimalClass::TwiceFibonacci => "twiceFibonacci",
            OptimalClass::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for OptimalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A generator tuple together with the dispersion of its lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub generators: Vec<u64>,
    pub dispersion: Rational,
    pub optimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub generators: Vec<u64>,
    pub dispersion: Rational,
    pub class: OptimalClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub dim: usize,
    pub n: u64,
    /// Sorted by generators.
    pub hits: Vec<Hit>,
    /// Every generator tuple, sorted.
    pub rows: Vec<Row>,
    pub candidates_examined: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    /// Class of a row's generators if it is a hit.
    pub fn class_of(&self, generators: &[u64]) -> Option<OptimalClass> {
        self.hits.iter().find(|h| h.generators == generators).map(|h| h.class)
    }
}

/// Equality ignoring the elapsed time.
impl PartialEq for SearchReport {
    fn eq(&self, other: &Self) -> bool {
        (self.dim, self.n, &self.hits, &self.rows, self.candidates_examined)
            == (other.dim, other.n, &other.hits, &other.rows, other.candidates_examined)
    }
}

/// Which family an optimal planar lattice `(n, q)` belongs to.
pub fn classify_optimal(n: u64, q: u64) -> OptimalClass {
    if let Some(m) = fibonacci_position(n) {
        let base = fib_u64(m - 2) % n;
        if q == base || q == n - base {
            return OptimalClass::Fibonacci;
        }
    }
    if n.is_multiple_of(2) {
        if let Some(j) = fibonacci_position(n / 2) {
            let base = (2 * fib_u64(j - 2)) % n;
            if q == base || q == n - base {
                return OptimalClass::TwiceFibonacci;
            }
        }
    }
    OptimalClass::Unclassified
}

fn lattice_value_2d(n: u64, q: u64) -> Result<Rational> {
    Ok(lattice_dispersion_2d(n, q)?.value)
}

fn revalidate(n: u64, generators: &[u64], fast: &Rational) -> Result<()> {
    let p = gen_integration_lattice(&LatticeSpec::new(n, generators.to_vec())?)?;
    let generic = if generators.len() == 1 { periodic_dispersion_2d(&p)? } else { periodic_dispersion_nd(&p)? };
    if generic.value != *fast {
        return Err(Error::Invariant(format!(
            "lattice {n}, {generators:?}: fast path gives {fast}, generic solver {}",
            generic.value
        )));
    }
    Ok(())
}

/// All generators `q` in `1..n` whose lattice has dispersion `2/n`.
///
/// Only `q <= n/2` is computed; `n - q` gives a mirrored lattice with the
/// same dispersion and is reported explicitly.
pub fn search_optimal_2d(n: u64) -> Result<SearchReport> {
    if n < 2 {
        return domain(format!("search needs n >= 2, got {n}"));
    }
    let start = Instant::now();
    let target = Rational::ratio(2, n as u128);
    let half: Vec<(u64, Rational)> =
        (1..=n / 2).into_par_iter().map(|q| Ok((q, lattice_value_2d(n, q)?))).collect::<Result<_>>()?;

    let mut rows: Vec<Row> = Vec::with_capacity(n as usize - 1);
    for (q, value) in &half {
        for g in [*q, n - *q] {
            if rows.iter().all(|r| r.generators[0] != g) {
                rows.push(Row { generators: vec![g], dispersion: value.clone(), optimal: *value == target });
            }
        }
    }
    rows.sort_by(|a, b| a.generators.cmp(&b.generators));

    let hits: Vec<Hit> = rows
        .iter()
        .filter(|r| r.optimal)
        .map(|r| Hit { generators: r.generators.clone(), dispersion: r.dispersion.clone(), class: classify_optimal(n, r.generators[0]) })
        .collect();
    if n <= REVALIDATE_MAX_N {
        for h in &hits {
            revalidate(n, &h.generators, &h.dispersion)?;
        }
    }
    Ok(SearchReport { dim: 2, n, hits, rows, candidates_examined: half.len() as u64, elapsed: start.elapsed() })
}

pub fn search_range_2d(n_lo: u64, n_hi: u64) -> Result<Vec<SearchReport>> {
    if n_lo < 2 || n_lo > n_hi {
        return domain(format!("bad search range {n_lo}..{n_hi}"));
    }
    (n_lo..=n_hi).into_par_iter().map(search_optimal_2d).collect()
}

/// `n` is a Fibonacci number or twice one.
pub fn in_optimal_family(n: u64) -> bool {
    fibonacci_position(n).is_some() || (n.is_multiple_of(2) && (n == 2 || fibonacci_position(n / 2).is_some()))
}

/// Cross-check of a range of planar searches against the two lattice families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RangeSummary {
    pub nonempty: Vec<u64>,
    pub expected: Vec<u64>,
    pub unclassified: Vec<(u64, u64)>,
    /// `(n, missing generators)` where a family member was not found optimal.
    pub missing: Vec<(u64, Vec<u64>)>,
}

impl RangeSummary {
    pub fn consistent(&self) -> bool {
        self.nonempty == self.expected && self.unclassified.is_empty() && self.missing.is_empty()
    }
}

/// The generators the two families predict for `n` (empty outside them).
pub fn family_generators(n: u64) -> Vec<u64> {
    let mut g = Vec::new();
    if let Some(m) = fibonacci_position(n) {
        let base = fib_u64(m - 2) % n;
        g.extend([base, n - base]);
    }
    if n.is_multiple_of(2) {
        if let Some(j) = fibonacci_position(n / 2) {
            let base = (2 * fib_u64(j - 2)) % n;
            g.extend([base, n - base]);
        }
    }
    g.retain(|&q| q != 0 && q != n);
    g.sort_unstable();
    g.dedup();
    g
}

pub fn summarize_range(reports: &[SearchReport]) -> RangeSummary {
    let mut summary = RangeSummary { nonempty: vec![], expected: vec![], unclassified: vec![], missing: vec![] };
    for r in reports {
        if !r.hits.is_empty() {
            summary.nonempty.push(r.n);
        }
        if in_optimal_family(r.n) {
            summary.expected.push(r.n);
        }
        for h in &r.hits {
            if h.class == OptimalClass::Unclassified {
                summary.unclassified.push((r.n, h.generators[0]));
            }
        }
        let found: Vec<u64> = r.hits.iter().map(|h| h.generators[0]).collect();
        let missing: Vec<u64> = family_generators(r.n).into_iter().filter(|q| !found.contains(q)).collect();
        if !missing.is_empty() {
            summary.missing.push((r.n, missing));
        }
    }
    summary
}

/// The images of `(a, b)` under `q_i -> n - q_i` and swapping, sorted.
fn images_3d(n: u64, a: u64, b: u64) -> Vec<[u64; 2]> {
    let mut out = Vec::with_capacity(8);
    for x in [a, (n - a) % n] {
        for y in [b, (n - b) % n] {
            out.push([x, y]);
            out.push([y, x]);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All generator pairs `(q1, q2)` in `[0, n)^2` whose three-dimensional
/// lattice has dispersion `3/n`. One representative per symmetry class is
/// computed.
pub fn search_optimal_3d(n: u64) -> Result<SearchReport> {
    if n < 2 {
        return domain(format!("search needs n >= 2, got {n}"));
    }
    let start = Instant::now();
    let target = Rational::ratio(3, n as u128);
    let canonical: Vec<(u64, u64)> = (0..=n / 2).flat_map(|a| (a..=n / 2).map(move |b| (a, b))).collect();
    let values: Vec<(u64, u64, Rational)> = canonical
        .par_iter()
        .map(|&(a, b)| Ok((a, b, lattice_dispersion_3d(n, a, b)?.value)))
        .collect::<Result<_>>()?;

    let mut rows: Vec<Row> = values
        .iter()
        .flat_map(|(a, b, v)| {
            let optimal = *v == target;
            images_3d(n, *a, *b)
                .into_iter()
                .map(move |g| Row { generators: g.to_vec(), dispersion: v.clone(), optimal })
        })
        .collect();
    rows.sort_by(|a, b| a.generators.cmp(&b.generators));
    rows.dedup_by(|a, b| a.generators == b.generators);

    let hits: Vec<Hit> = rows
        .iter()
        .filter(|r| r.optimal)
        .map(|r| Hit { generators: r.generators.clone(), dispersion: r.dispersion.clone(), class: OptimalClass::Unclassified })
        .collect();
    if n <= REVALIDATE_MAX_N {
        for h in &hits {
            revalidate(n, &h.generators, &h.dispersion)?;
        }
    }
    Ok(SearchReport { dim: 3, n, hits, rows, candidates_examined: canonical.len() as u64, elapsed: start.elapsed() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Evaluate the predicted threshold and probe it with the solver.
    Exact,
    /// Scan multiples of the step with the solver.
    Sweep,
}

impl FromStr for ThresholdMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ThresholdMode::Exact),
            "sweep" => Ok(ThresholdMode::Sweep),
            _ => domain(format!("unknown threshold mode {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub m: u32,
    pub threshold: Rational,
    pub predicted: Rational,
    /// Exact mode: the distorted lattice at the threshold still has dispersion `2/F_m`.
    pub holds_at_threshold: bool,
    /// Exact mode: one step past the threshold the dispersion is larger.
    pub fails_past_threshold: bool,
}

/// `min_{4 <= k <= m-1} (F_3 F_m - F_k F_{m-k+3}) / F_{m-k+3}`.
pub fn predicted_threshold(m: u32) -> Result<Rational> {
    if !(5..=90).contains(&m) {
        return domain(format!("m = {m} outside 5..=90"));
    }
    let fm = fib_u64(m) as u128;
    (4..m)
        .map(|k| {
            let other = fib_u64(m - k + 3) as i128;
            let num = 2 * fm as i128 - fib_u64(k) as i128 * other;
            Rational::new(num, other)
        })
        .try_fold(None::<Rational>, |acc, r| {
            let r = r?;
            Ok(Some(match acc {
                Some(a) if a <= r => a,
                _ => r,
            }))
        })
        .map(|v| v.expect("at least one k"))
}

fn distorted_dispersion(m: u32, xi: &Rational) -> Result<Rational> {
    let p = gen_distorted_fibonacci(&DistortedFibSpec { m, xi: xi.clone(), eta: Rational::zero() })?;
    Ok(periodic_dispersion_2d(&p)?.value)
}

/// Largest horizontal distortion `xi` of every other Fibonacci lattice
/// point that keeps the dispersion at `2/F_m`.
///
/// In sweep mode the result is the last multiple of `step` before the
/// first one that breaks optimality.
pub fn distortion_threshold(m: u32, mode: ThresholdMode, step: &Rational) -> Result<ThresholdReport> {
    if !(6..=90).contains(&m) {
        return domain(format!("m = {m} outside 6..=90"));
    }
    if !fib_u64(m).is_multiple_of(2) {
        return domain(format!("F_{m} = {} is odd", fib_u64(m)));
    }
    if !(Rational::zero() < *step && *step < Rational::one()) {
        return domain(format!("step {step} outside (0, 1)"));
    }
    let predicted = predicted_threshold(m)?;
    let optimal = Rational::ratio(2, fib_u64(m) as u128);
    match mode {
        ThresholdMode::Exact => {
            let holds = distorted_dispersion(m, &predicted)? == optimal;
            let past = &predicted + step;
            let fails = past >= Rational::one() || distorted_dispersion(m, &past)? > optimal;
            Ok(ThresholdReport { m, threshold: predicted.clone(), predicted, holds_at_threshold: holds, fails_past_threshold: fails })
        }
        ThresholdMode::Sweep => {
            let mut last = Rational::zero();
            let mut xi = step.clone();
            while xi < Rational::one() && distorted_dispersion(m, &xi)? == optimal {
                last = xi.clone();
                xi = &xi + step;
            }
            let holds = distorted_dispersion(m, &last)? == optimal;
            let fails = xi >= Rational::one() || distorted_dispersion(m, &xi)? > optimal;
            Ok(ThresholdReport { m, threshold: last, predicted, holds_at_threshold: holds, fails_past_threshold: fails })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generators(r: &SearchReport) -> Vec<Vec<u64>> {
        r.hits.iter().map(|h| h.generators.clone()).collect()
    }

    #[test]
    fn planar_examples() {
        assert_eq!(generators(&search_optimal_2d(13).unwrap()), vec![vec![5], vec![8]]);
        assert!(search_optimal_2d(7).unwrap().hits.is_empty());
        let r = search_optimal_2d(10).unwrap();
        assert_eq!(generators(&r), vec![vec![4], vec![6]]);
        assert!(r.hits.iter().all(|h| h.class == OptimalClass::TwiceFibonacci));
        assert_eq!(r.rows.len(), 9);
        assert_eq!(r.candidates_examined, 5);
        let r = search_range_2d(89, 89).unwrap();
        assert_eq!(generators(&r[0]), vec![vec![34], vec![55]]);
    }

    #[test]
    fn small_n_golden() {
        assert_eq!(generators(&search_optimal_2d(2).unwrap()), vec![vec![1]]);
        assert_eq!(generators(&search_optimal_2d(3).unwrap()), vec![vec![1], vec![2]]);
        assert_eq!(generators(&search_optimal_2d(4).unwrap()), vec![vec![2]]);
    }

    #[test]
    fn classes() {
        assert_eq!(classify_optimal(13, 8), OptimalClass::Fibonacci);
        assert_eq!(classify_optimal(16, 6), OptimalClass::TwiceFibonacci);
        assert_eq!(classify_optimal(10, 6), OptimalClass::TwiceFibonacci);
        assert_eq!(classify_optimal(13, 4), OptimalClass::Unclassified);
        assert_eq!(family_generators(8), vec![3, 5]);
        assert_eq!(family_generators(16), vec![6, 10]);
        assert_eq!(family_generators(4), vec![2]);
    }

    #[test]
    fn three_dimensional() {
        assert!(search_optimal_3d(7).unwrap().hits.is_empty());
        let r = search_optimal_3d(5).unwrap();
        assert_eq!(r.rows.len(), 25);
        assert!(r.hits.is_empty());
        assert_eq!(images_3d(6, 1, 3), vec![[1, 3], [3, 1], [3, 5], [5, 3]]);
    }

    #[test]
    fn thresholds() {
        assert_eq!(predicted_threshold(6).unwrap(), Rational::ratio(1, 5));
        let r = distortion_threshold(6, ThresholdMode::Exact, &Rational::ratio(1, 100)).unwrap();
        assert_eq!(r.threshold, Rational::ratio(1, 5));
        assert!(r.holds_at_threshold && r.fails_past_threshold);
        let s = distortion_threshold(6, ThresholdMode::Sweep, &Rational::ratio(1, 20)).unwrap();
        assert_eq!(s.threshold, Rational::ratio(1, 5));
        assert_eq!(distorted_dispersion(6, &Rational::zero()).unwrap(), Rational::ratio(2, 8));
        assert!(distortion_threshold(7, ThresholdMode::Exact, &Rational::ratio(1, 100)).is_err());
    }
}
