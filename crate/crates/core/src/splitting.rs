//! Gap structure of `y(k) = k q mod n` on the circle scaled to length `n`,
//! and the closed-form dispersion of integration lattices built on it.
//!
//! Gaps are always taken between *distinct* values of `Y_l = (y(0), ..., y(l-1))`;
//! when `gcd(q, n) > 1` repeated values do not create zero-length gaps.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{best_empty_box_2d, grid_box, Algorithm, DispersionResult, GridBox2};
use crate::error::{domain, Result};
use crate::gaps::CyclicGaps;
use crate::numeric::{fib_checked, fib_index, fib_u64, Rational};

/// `n = a_1 d_1 + a_2 d_2 + a_3 d_3` with `d_1 > d_2 > d_3`, stored as
/// `(distance, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    entries: Vec<(u64, u64)>,
}

impl Splitting {
    fn from_gaps(gaps: &CyclicGaps) -> Splitting {
        if gaps.is_empty() {
            return Splitting { entries: vec![(gaps.modulus(), 1)] };
        }
        Splitting { entries: gaps.histogram() }
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(d, a)| d * a).sum()
    }

    pub fn largest(&self) -> u64 {
        self.entries[0].0
    }

    /// At most three distances, and `d_1 = d_2 + d_3` when three occur.
    pub fn is_three_gap(&self, n: u64) -> bool {
        let e = &self.entries;
        self.total() == n
            && (1..=3).contains(&e.len())
            && e.windows(2).all(|w| w[0].0 > w[1].0)
            && (e.len() < 3 || e[0].0 == e[1].0 + e[2].0)
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.total())?;
        for (i, (d, a)) in self.entries.iter().enumerate() {
            let sep = if i == 0 { " " } else { " + " };
            write!(f, "{sep}{a}·{d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSequence {
    pub n: u64,
    pub q: u64,
    pub len: u64,
    pub values: Vec<u64>,
    pub distinct_sorted: Vec<u64>,
}

#[inline]
fn y(k: u64, q: u64, n: u64) -> u64 {
    ((k as u128 * q as u128) % n as u128) as u64
}

fn check_nq(n: u64, q: u64) -> Result<()> {
    if n < 2 {
        return domain(format!("need n >= 2, got {n}"));
    }
    if q >= n {
        return domain(format!("need 0 <= q < n, got q = {q}, n = {n}"));
    }
    Ok(())
}

fn check_len(n: u64, len: u64, min: u64) -> Result<()> {
    if len < min || len > n {
        return domain(format!("sequence length {len} outside {min}..={n}"));
    }
    Ok(())
}

pub fn y_sequence(n: u64, q: u64, len: u64) -> Result<YSequence> {
    check_nq(n, q)?;
    check_len(n, len, 1)?;
    let values: Vec<u64> = (0..len).map(|k| y(k, q, n)).collect();
    let mut distinct_sorted = values.clone();
    distinct_sorted.sort_unstable();
    distinct_sorted.dedup();
    Ok(YSequence { n, q, len, values, distinct_sorted })
}

fn gaps_of_prefix(n: u64, q: u64, len: u64) -> CyclicGaps {
    let mut gaps = CyclicGaps::new(n);
    for k in 0..len {
        gaps.insert(y(k, q, n));
    }
    gaps
}

pub fn splitting_of(n: u64, q: u64, len: u64) -> Result<Splitting> {
    check_nq(n, q)?;
    check_len(n, len, 1)?;
    Ok(Splitting::from_gaps(&gaps_of_prefix(n, q, len)))
}

/// Largest gap of `Y_len`; `n` for the empty prefix.
pub fn max_gap(n: u64, q: u64, len: u64) -> Result<u64> {
    check_nq(n, q)?;
    check_len(n, len, 0)?;
    Ok(gaps_of_prefix(n, q, len).max_gap())
}

/// Every prefix `Y_1, ..., Y_n` has at most three gap lengths, the largest
/// being the sum of the other two when there are three.
pub fn verify_three_gap(n: u64, q: u64) -> bool {
    if check_nq(n, q).is_err() {
        return false;
    }
    let mut gaps = CyclicGaps::new(n);
    (0..n).all(|k| {
        gaps.insert(y(k, q, n));
        Splitting::from_gaps(&gaps).is_three_gap(n)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LargestSplitReport {
    pub holds: bool,
    /// Steps that inserted a new value.
    pub checked: u64,
    /// Steps whose value was already present.
    pub skipped: u64,
}

/// Going from `Y_l` to `Y_{l+1}` always splits a gap of maximal length.
pub fn verify_largest_split(n: u64, q: u64) -> Result<LargestSplitReport> {
    check_nq(n, q)?;
    if q == 0 {
        return domain("generator must be positive");
    }
    let mut report = LargestSplitReport { holds: true, checked: 0, skipped: 0 };
    let mut gaps = CyclicGaps::new(n);
    gaps.insert(0);
    for l in 1..n {
        let v = y(l, q, n);
        if gaps.contains(v) {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        if gaps.gap_around(v).len != gaps.max_gap() {
            report.holds = false;
        }
        gaps.insert(v);
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedEntry {
    pub distance: i128,
    pub multiplicity: i128,
}

/// Closed-form splitting of `Y_{F_k - j}`, entries in formula order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedSplitting {
    pub entries: Vec<PredictedEntry>,
    /// Whether the kept distances are non-increasing.
    pub sorted: bool,
}

impl PredictedSplitting {
    pub fn len(&self) -> u64 {
        let f: i128 = self.entries.iter().map(|e| e.multiplicity).sum();
        f as u64
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same gap multiset as an actual splitting.
    pub fn matches(&self, actual: &Splitting) -> bool {
        let mut merged: Vec<(i128, i128)> = Vec::new();
        let mut sorted: Vec<PredictedEntry> = self.entries.clone();
        sorted.sort_by_key(|e| std::cmp::Reverse(e.distance));
        for e in sorted {
            match merged.last_mut() {
                Some((d, a)) if *d == e.distance => *a += e.multiplicity,
                _ => merged.push((e.distance, e.multiplicity)),
            }
        }
        merged.len() == actual.entries().len()
            && merged
                .iter()
                .zip(actual.entries())
                .all(|(&(d, a), &(ad, aa))| d == ad as i128 && a == aa as i128)
    }
}

fn f(k: i64) -> i128 {
    fib_checked(k).expect("fibonacci index in range")
}

/// Predicted splitting of `Y_{F_k - j}` for a lattice with `2q <= n`:
///
/// - odd `k`:  `j (F_{k-3} q - F_{k-5} n) + (F_{k-1} - j)(F_{k-4} n - F_{k-2} q) + (F_{k-2} - j)(F_{k-1} q - F_{k-3} n)`
/// - even `k`: the same with every distance negated.
///
/// Entries with zero multiplicity or zero distance are dropped.
pub fn predicted_splitting(n: u64, q: u64, k: u32, j: u64) -> Result<PredictedSplitting> {
    check_nq(n, q)?;
    if q == 0 || 2 * q > n {
        return domain(format!("need 1 <= q and 2q <= n, got q = {q}, n = {n}"));
    }
    let m = fib_index(n)?;
    if k < 3 || k > m {
        return domain(format!("k = {k} outside 3..={m}"));
    }
    let k = k as i64;
    if j < 1 || j as i128 > f(k - 2) {
        return domain(format!("j = {j} outside 1..=F_{}", k - 2));
    }
    let (n, q, j) = (n as i128, q as i128, j as i128);
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let raw = [
        (j, f(k - 3) * q - f(k - 5) * n),
        (f(k - 1) - j, f(k - 4) * n - f(k - 2) * q),
        (f(k - 2) - j, f(k - 1) * q - f(k - 3) * n),
    ];
    let entries: Vec<PredictedEntry> = raw
        .iter()
        .map(|&(a, d)| PredictedEntry { distance: sign * d, multiplicity: a })
        .filter(|e| e.multiplicity != 0 && e.distance != 0)
        .collect();
    let sorted = entries.windows(2).all(|w| w[0].distance >= w[1].distance);
    Ok(PredictedSplitting { entries, sorted })
}

/// `(k, j)` pairs, `3 <= k <= fib_index(n)`, where the predicted splitting
/// disagrees with the actual one or is out of order.
pub fn predicted_splitting_mismatches(n: u64, q: u64) -> Result<Vec<(u32, u64)>> {
    let m = fib_index(n)?;
    let mut bad = Vec::new();
    for k in 3..=m {
        for j in 1..=fib_u64(k - 2) {
            let p = predicted_splitting(n, q, k, j)?;
            let len = fib_u64(k) - j;
            let actual = splitting_of(n, q, len)?;
            if !(p.sorted && p.matches(&actual)) {
                bad.push((k, j));
            }
        }
    }
    Ok(bad)
}

/// The nested ratio windows for `n/q`, `3 <= k <= fib_index(n)`:
/// `F_k/F_{k-2} <= n/q <= F_{k-1}/F_{k-3}` for odd `k`, reversed for even `k`.
/// `F_0 = 0` in a denominator reads as `+inf`.
pub fn ratio_window_check(n: u64, q: u64) -> bool {
    if n < 2 || q == 0 || 2 * q > n {
        return false;
    }
    let Ok(m) = fib_index(n) else { return false };
    let (n, q) = (n as i128, q as i128);
    // a/b <= n/q  <=>  a q <= b n
    let le = |a: i128, b: i128| a * q <= b * n;
    let ge = |a: i128, b: i128| n * b <= a * q;
    (3..=m as i64).all(|k| {
        let (hi_a, hi_b, lo_a, lo_b) = if k % 2 == 1 {
            (f(k - 1), f(k - 3), f(k), f(k - 2))
        } else {
            (f(k), f(k - 2), f(k - 1), f(k - 3))
        };
        le(lo_a, lo_b) && ge(hi_a, hi_b)
    })
}

/// Some gap of maximal length `d_1` sits next to a gap of length `>= d_2`.
pub fn adjacency_check(n: u64, q: u64, len: u64) -> Result<bool> {
    check_nq(n, q)?;
    check_len(n, len, 1)?;
    let gaps = gaps_of_prefix(n, q, len);
    let hist = gaps.histogram();
    if hist.len() < 2 {
        return domain("splitting has a single distance");
    }
    let (d1, d2) = (hist[0].0, hist[1].0);
    let order: Vec<u64> = gaps.gaps_in_order().iter().map(|g| g.len).collect();
    let k = order.len();
    Ok((0..k).any(|i| {
        let (a, b) = (order[i], order[(i + 1) % k]);
        (a == d1 && b >= d2) || (b == d1 && a >= d2)
    }))
}

/// Dispersion of the integration lattice with generator `q` in `O(n log n)`.
///
/// A maximal box spans a window of `l` consecutive columns (`0 <= l <= n`)
/// between two lattice columns, so in grid units the dispersion is the
/// maximum of `min(l + 1, n) * max_gap(l)`. Every window of `l` columns has
/// the same gap structure, so only the windows right of column 0 are built.
pub fn lattice_dispersion_2d(n: u64, q: u64) -> Result<DispersionResult> {
    check_nq(n, q)?;
    if q == 0 {
        return domain("generator must be positive");
    }
    // interior of the window right of column 0: {k q : k = 1..l}
    let mut gaps = CyclicGaps::new(n);
    let mut best = GridBox2::NONE;
    for l in 0..=n {
        let width = (l + 1).min(n);
        // l = n: full turn with the seam between columns, every point interior
        let lo_x2 = if l == n { 1 } else { 0 };
        best = best.better(GridBox2::with_gap(lo_x2, width, &gaps));
        if l < n {
            gaps.insert(y(l + 1, q, n));
        }
    }
    Ok(DispersionResult {
        value: Rational::ratio(best.area, n as u128 * n as u128),
        witness: grid_box(n, &best.lo2, &best.len),
        algorithm: Algorithm::LatticeFast2d,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Box3 {
    volume: u128,
    lo2: [u64; 3],
    len: [u64; 3],
}

impl Box3 {
    fn better(self, other: Box3) -> Box3 {
        let key = |b: &Box3| (b.lo2, b.len[0], b.len[1]);
        match self.volume.cmp(&other.volume) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal if key(&self) <= key(&other) => self,
            std::cmp::Ordering::Equal => other,
        }
    }
}

/// Dispersion of the 3D lattice `{(k, k q1, k q2) / n}`.
///
/// Cutting along the first axis reduces to the planar problem: a window of
/// `l` consecutive columns contributes `min(l + 1, n)` times the largest
/// empty periodic box of the projected points `{(k q1, k q2) : k = 1..l}`.
pub fn lattice_dispersion_3d(n: u64, q1: u64, q2: u64) -> Result<DispersionResult> {
    check_nq(n, q1)?;
    check_nq(n, q2)?;
    if n >= 1 << 40 {
        return domain("n too large for the three-dimensional lattice solver");
    }
    let projected: Vec<(u64, u64)> = (1..=n).map(|k| (y(k, q1, n), y(k, q2, n))).collect();
    let window = |l: u64| -> Box3 {
        let b = best_empty_box_2d(&projected[..l as usize], n);
        if cfg!(debug_assertions) && n <= 12 && l < n {
            // same window shifted by one column
            let shifted: Vec<(u64, u64)> = (2..=l + 1).map(|k| (y(k, q1, n), y(k, q2, n))).collect();
            debug_assert_eq!(best_empty_box_2d(&shifted, n).area, b.area, "window structure depends on position");
        }
        let width = (l + 1).min(n);
        let lo_x2 = if l == n { 1 } else { 0 };
        Box3 {
            volume: width as u128 * b.area,
            lo2: [lo_x2, b.lo2[0], b.lo2[1]],
            len: [width, b.len[0], b.len[1]],
        }
    };
    let none = Box3 { volume: 0, lo2: [u64::MAX; 3], len: [u64::MAX; 3] };
    let best = if n >= 64 {
        (0..=n).into_par_iter().map(window).reduce(|| none.clone(), Box3::better)
    } else {
        (0..=n).map(window).fold(none, Box3::better)
    };
    Ok(DispersionResult {
        value: Rational::ratio(best.volume, (n as u128).pow(3)),
        witness: grid_box(n, &best.lo2, &best.len),
        algorithm: Algorithm::Lattice3d,
    })
}

/// `max_{3 <= k <= m} F_k F_{m-k+3} / F_m^2`.
pub fn fib_dispersion_formula(m: u32) -> Result<Rational> {
    if !(3..=90).contains(&m) {
        return domain(format!("m = {m} outside 3..=90"));
    }
    let best = (3..=m).map(|k| fib_u64(k) as u128 * fib_u64(m - k + 3) as u128).max().unwrap();
    let fm = fib_u64(m) as u128;
    Ok(Rational::ratio(best, fm * fm))
}

/// `max{ 2(F_m - 1), max_{4 <= j <= m-1} F_j F_{m+3-j} } / F_m^2`.
pub fn fib_nonperiodic_formula(m: u32) -> Result<Rational> {
    if !(5..=90).contains(&m) {
        return domain(format!("m = {m} outside 5..=90"));
    }
    let fm = fib_u64(m) as u128;
    let inner = (4..m).map(|j| fib_u64(j) as u128 * fib_u64(m + 3 - j) as u128).max().unwrap_or(0);
    Ok(Rational::ratio(inner.max(2 * (fm - 1)), fm * fm))
}

/// One row of the consecutive-splittings table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingRow {
    pub len: u64,
    pub splitting: Splitting,
    /// `y(len)`, the value inserted next.
    pub new_value: Option<u64>,
    /// Length of the gap of `Y_len` that `y(len)` falls into (absent for repeats).
    pub split_gap_len: Option<u64>,
}

pub fn splitting_table(n: u64, q: u64, len_max: u64) -> Result<Vec<SplittingRow>> {
    check_nq(n, q)?;
    check_len(n, len_max, 1)?;
    let mut gaps = CyclicGaps::new(n);
    let mut rows = Vec::with_capacity(len_max as usize);
    for l in 1..=len_max {
        gaps.insert(y(l - 1, q, n));
        let new_value = (l < n).then(|| y(l, q, n));
        let split_gap_len = new_value.filter(|&v| !gaps.contains(v)).map(|v| gaps.gap_around(v).len);
        rows.push(SplittingRow { len: l, splitting: Splitting::from_gaps(&gaps), new_value, split_gap_len });
    }
    Ok(rows)
}

/// `gcd(q, n)`, the single gap length of the full sequence `Y_n`.
pub fn full_period_gap(n: u64, q: u64) -> u64 {
    q.gcd(&n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{periodic_dispersion_2d, periodic_dispersion_nd};
    use crate::pointset::{gen_integration_lattice, LatticeSpec};

    #[test]
    fn y_sequences() {
        assert_eq!(y_sequence(13, 5, 4).unwrap().values, vec![0, 5, 10, 2]);
        assert_eq!(y_sequence(13, 5, 2).unwrap().values, vec![0, 5]);
        let s = y_sequence(10, 4, 6).unwrap();
        assert_eq!(s.values, vec![0, 4, 8, 2, 6, 0]);
        assert_eq!(s.distinct_sorted, vec![0, 2, 4, 6, 8]);
        assert!(y_sequence(13, 13, 2).is_err());
        assert!(y_sequence(13, 5, 0).is_err());
        assert!(y_sequence(1, 0, 1).is_err());
    }

    #[test]
    fn splittings() {
        assert_eq!(splitting_of(13, 5, 2).unwrap().entries(), &[(8, 1), (5, 1)]);
        assert_eq!(splitting_of(13, 5, 3).unwrap().entries(), &[(5, 2), (3, 1)]);
        assert_eq!(splitting_of(13, 5, 5).unwrap().entries(), &[(3, 3), (2, 2)]);
        assert_eq!(splitting_of(13, 5, 5).unwrap().to_string(), "13 = 3·3 + 2·2");
        assert_eq!(splitting_of(13, 5, 1).unwrap().entries(), &[(13, 1)]);
        assert_eq!(splitting_of(10, 4, 10).unwrap().entries(), &[(2, 5)]);
    }

    #[test]
    fn max_gaps() {
        assert_eq!(max_gap(13, 5, 0).unwrap(), 13);
        assert_eq!(max_gap(13, 5, 4).unwrap(), 5);
        assert_eq!(max_gap(13, 5, 13).unwrap(), 1);
    }

    #[test]
    fn three_gap_and_largest_split() {
        assert!(verify_three_gap(13, 5));
        assert!(verify_three_gap(12, 5));
        assert!(verify_three_gap(10, 4));
        assert!(verify_largest_split(13, 5).unwrap().holds);
        assert!(verify_largest_split(100, 37).unwrap().holds);
        let r = verify_largest_split(10, 4).unwrap();
        assert_eq!(r, LargestSplitReport { holds: true, checked: 4, skipped: 5 });
    }

    #[test]
    fn predictions() {
        let p = predicted_splitting(13, 5, 7, 1).unwrap();
        let pairs: Vec<(i128, i128)> = p.entries.iter().map(|e| (e.multiplicity, e.distance)).collect();
        assert_eq!(pairs, vec![(1, 2), (7, 1), (4, 1)]);
        assert!(p.sorted);
        assert_eq!(p.len(), 12);

        let base = predicted_splitting(13, 5, 3, 1).unwrap();
        assert_eq!(base.entries, vec![PredictedEntry { distance: 13, multiplicity: 1 }]);

        let two = predicted_splitting(13, 5, 4, 1).unwrap();
        let pairs: Vec<(i128, i128)> = two.entries.iter().map(|e| (e.multiplicity, e.distance)).collect();
        assert_eq!(pairs, vec![(1, 8), (1, 5)]);

        assert!(predicted_splitting(13, 7, 4, 1).is_err());
        assert!(predicted_splitting(13, 5, 8, 1).is_err());
        assert!(predicted_splitting(13, 5, 5, 3).is_err());
        assert!(predicted_splitting_mismatches(13, 5).unwrap().is_empty());
        assert!(predicted_splitting_mismatches(10, 4).unwrap().is_empty());
    }

    #[test]
    fn ratio_windows() {
        assert!(ratio_window_check(13, 5));
        assert!(!ratio_window_check(13, 4));
        assert!(ratio_window_check(10, 4));
        assert!(lattice_dispersion_2d(13, 4).unwrap().value > Rational::ratio(2, 13));
    }

    #[test]
    fn adjacency() {
        assert!(adjacency_check(13, 5, 4).unwrap());
        assert!(adjacency_check(13, 5, 7).unwrap());
        assert!(adjacency_check(21, 8, 6).unwrap());
        assert!(adjacency_check(13, 5, 1).is_err());
        assert!(adjacency_check(13, 5, 13).is_err());
    }

    #[test]
    fn lattice_fast_path() {
        assert_eq!(lattice_dispersion_2d(13, 5).unwrap().value, Rational::ratio(2, 13));
        assert_eq!(lattice_dispersion_2d(10, 4).unwrap().value, Rational::ratio(1, 5));
        assert_eq!(lattice_dispersion_2d(4, 1).unwrap().value, Rational::ratio(9, 16));
        for (n, q) in [(13, 5), (10, 4), (4, 1), (12, 6), (7, 3)] {
            let p = gen_integration_lattice(&LatticeSpec::new(n, vec![q]).unwrap()).unwrap();
            let fast = lattice_dispersion_2d(n, q).unwrap();
            let slow = periodic_dispersion_2d(&p).unwrap();
            assert_eq!(fast.value, slow.value);
            assert_eq!(fast.witness, slow.witness, "({n}, {q})");
        }
    }

    #[test]
    fn fibonacci_maximizers() {
        // windows of 1 and 12 columns both give area 2n in grid units
        let n = 13;
        let attaining: Vec<u64> = (0..=n)
            .filter(|&l| (l + 1).min(n) * max_gap(n, 5, l).unwrap() == 2 * n)
            .collect();
        assert_eq!(attaining, vec![1, 12]);
    }

    #[test]
    fn lattice_3d_small() {
        let p = gen_integration_lattice(&LatticeSpec::new(4, vec![1, 3]).unwrap()).unwrap();
        assert_eq!(lattice_dispersion_3d(4, 1, 3).unwrap().value, periodic_dispersion_nd(&p).unwrap().value);
        for q2 in 0..7 {
            assert!(lattice_dispersion_3d(7, 2, q2).unwrap().value > Rational::ratio(3, 7));
        }
    }

    #[test]
    fn formulas() {
        assert_eq!(fib_dispersion_formula(7).unwrap(), Rational::ratio(2, 13));
        assert_eq!(fib_dispersion_formula(3).unwrap(), Rational::one());
        assert_eq!(fib_dispersion_formula(5).unwrap(), Rational::ratio(2, 5));
        assert_eq!(fib_nonperiodic_formula(8).unwrap(), Rational::ratio(40, 441));
        assert_eq!(fib_nonperiodic_formula(9).unwrap(), Rational::ratio(66, 1156));
        assert_eq!(fib_nonperiodic_formula(7).unwrap(), Rational::ratio(25, 169));
        assert_eq!(fib_nonperiodic_formula(6).unwrap(), Rational::ratio(15, 64));
        assert!(fib_nonperiodic_formula(4).is_err());
    }

    #[test]
    fn table_thirteen_five() {
        let rows = splitting_table(13, 5, 13).unwrap();
        assert_eq!(rows[0].new_value, Some(5));
        assert_eq!(rows[0].split_gap_len, Some(13));
        assert_eq!(rows[1].split_gap_len, Some(8));
        assert_eq!(rows[12].new_value, None);
        assert!(rows.iter().all(|r| r.split_gap_len.is_none_or(|g| g == r.splitting.largest())));
    }

    #[test]
    fn full_period() {
        for n in 2..40 {
            for q in 0..n {
                assert_eq!(splitting_of(n, q, n).unwrap().entries(), &[(full_period_gap(n, q), n / full_period_gap(n, q))]);
            }
        }
    }
}
