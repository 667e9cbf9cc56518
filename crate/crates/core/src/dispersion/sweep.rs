use std::cmp::Ordering;

use rayon::prelude::*;

use super::{grid_box, off_grid_corner, require_nonempty, Algorithm, DispersionResult};
use crate::error::{domain, Result};
use crate::gaps::CyclicGaps;
use crate::numeric::{cyclic_distance, Rational};
use crate::pointset::GridPointSet;

// Below this many columns the left-edge loop runs sequentially.
const PAR_COLUMNS: usize = 256;

// Recomputing the gap multiset from scratch after every insertion is O(k);
// debug builds audit only windows up to this size.
#[cfg(debug_assertions)]
const AUDIT_LIMIT: usize = 48;

/// Candidate box on a 2D grid; `lo2` holds doubled corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct GridBox2 {
    pub area: u128,
    pub lo2: [u64; 2],
    pub len: [u64; 2],
}

impl GridBox2 {
    pub const NONE: GridBox2 = GridBox2 { area: 0, lo2: [u64::MAX; 2], len: [u64::MAX; 2] };

    fn key(&self) -> (u64, u64, u64) {
        (self.lo2[0], self.lo2[1], self.len[0])
    }

    /// Larger area wins; ties go to the smaller `(lo_1, lo_2, len_1)`.
    pub fn better(self, other: GridBox2) -> GridBox2 {
        match self.area.cmp(&other.area) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal if self.key() <= other.key() => self,
            Ordering::Equal => other,
        }
    }

    pub fn with_gap(lo_x2: u64, width: u64, gaps: &CyclicGaps) -> GridBox2 {
        let g = gaps.leftmost_max_gap();
        GridBox2 {
            area: width as u128 * g.len as u128,
            lo2: [lo_x2, 2 * g.start],
            len: [width, g.len],
        }
    }
}

/// Sorted distinct x-coordinates with the y-values of each column.
fn columns(points: &[(u64, u64)]) -> Vec<(u64, Vec<u64>)> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let mut cols: Vec<(u64, Vec<u64>)> = Vec::new();
    for (x, y) in sorted {
        match cols.last_mut() {
            Some((cx, ys)) if *cx == x => ys.push(y),
            _ => cols.push((x, vec![y])),
        }
    }
    cols
}

#[cfg(debug_assertions)]
fn audit(gaps: &CyclicGaps) {
    if gaps.len() <= AUDIT_LIMIT {
        let pts: Vec<u64> = gaps.points().collect();
        let fresh = crate::gaps::gaps_of_sorted(&pts, gaps.modulus())
            .iter()
            .map(|g| g.len)
            .max()
            .unwrap_or(gaps.modulus());
        debug_assert_eq!(gaps.max_gap(), fresh, "gap multiset out of sync");
    }
}

/// Largest empty periodic box among grid points `(x, y)` with coordinates
/// in `[0, den)`. Duplicated points are harmless. With no points the whole
/// torus is empty.
pub(crate) fn best_empty_box_2d(points: &[(u64, u64)], den: u64) -> GridBox2 {
    let cols = columns(points);
    let c = cols.len();
    if c == 0 {
        return GridBox2 { area: den as u128 * den as u128, lo2: [0, 0], len: [den, den] };
    }

    // Left edge at column i; the right edge walks once around the circle.
    // Before reaching column j, the window holds columns i+1 .. j-1.
    let from_left = |i: usize| -> GridBox2 {
        let x0 = cols[i].0;
        let mut gaps = CyclicGaps::new(den);
        let mut best = GridBox2::NONE;
        for step in 1..=c {
            let j = (i + step) % c;
            let width = if step == c { den } else { cyclic_distance(x0, cols[j].0, den) };
            best = best.better(GridBox2::with_gap(2 * x0, width, &gaps));
            if step < c {
                for &y in &cols[j].1 {
                    gaps.insert(y);
                }
                #[cfg(debug_assertions)]
                audit(&gaps);
            }
        }
        best
    };

    let swept = if c >= PAR_COLUMNS {
        (0..c).into_par_iter().map(from_left).reduce(|| GridBox2::NONE, GridBox2::better)
    } else {
        (0..c).map(from_left).fold(GridBox2::NONE, GridBox2::better)
    };

    // Full turn in x with the seam off every column: all points are interior.
    let xs: Vec<u64> = cols.iter().map(|(x, _)| *x).collect();
    let mut all = CyclicGaps::new(den);
    for &(_, y) in points {
        all.insert(y);
    }
    swept.better(GridBox2::with_gap(off_grid_corner(&xs, den), den, &all))
}

pub(crate) fn grid_points_2d(p: &GridPointSet) -> Vec<(u64, u64)> {
    p.points().map(|pt| (pt[0], pt[1])).collect()
}

pub(crate) fn to_result(b: GridBox2, den: u64, algorithm: Algorithm) -> DispersionResult {
    DispersionResult {
        value: Rational::ratio(b.area, den as u128 * den as u128),
        witness: grid_box(den, &b.lo2, &b.len),
        algorithm,
    }
}

/// Periodic dispersion of a planar set by sweeping the right edge around
/// the torus from every left edge, in `O(n^2 log n)`. Other dimensions go
/// to [`super::periodic_dispersion_nd`].
pub fn periodic_dispersion_2d(p: &GridPointSet) -> Result<DispersionResult> {
    if p.dim() != 2 {
        return super::periodic_dispersion_nd(p);
    }
    require_nonempty(p)?;
    let best = best_empty_box_2d(&grid_points_2d(p), p.den());
    Ok(to_result(best, p.den(), Algorithm::Generic2d))
}

/// Dispersion over boxes inside `[0,1]^2` that do not wrap.
pub fn nonperiodic_dispersion_2d(p: &GridPointSet) -> Result<DispersionResult> {
    if p.dim() != 2 {
        return domain(format!("nonperiodic solver is planar, got dimension {}", p.dim()));
    }
    require_nonempty(p)?;
    let den = p.den();
    let cols = columns(&grid_points_2d(p));

    // Candidate x-edges: 0, every column, and 1. Column contents by edge index.
    let mut edges: Vec<(u64, &[u64])> = Vec::with_capacity(cols.len() + 2);
    if cols[0].0 != 0 {
        edges.push((0, &[]));
    }
    edges.extend(cols.iter().map(|(x, ys)| (*x, ys.as_slice())));
    edges.push((den, &[]));

    let from_left = |i: usize| -> GridBox2 {
        let x0 = edges[i].0;
        // The fixed point 0 turns cyclic gaps into gaps of [0, den] with both ends.
        let mut gaps = CyclicGaps::new(den);
        gaps.insert(0);
        let mut best = GridBox2::NONE;
        for &(x, ys) in &edges[i + 1..] {
            best = best.better(GridBox2::with_gap(2 * x0, x - x0, &gaps));
            for &y in ys {
                gaps.insert(y);
            }
        }
        best
    };
    let n_left = edges.len() - 1;
    let best = if n_left >= PAR_COLUMNS {
        (0..n_left).into_par_iter().map(from_left).reduce(|| GridBox2::NONE, GridBox2::better)
    } else {
        (0..n_left).map(from_left).fold(GridBox2::NONE, GridBox2::better)
    };
    Ok(to_result(best, den, Algorithm::Nonperiodic2d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::box_is_empty;
    use crate::pointset::{gen_fibonacci_lattice, gen_integration_lattice, LatticeSpec};

    fn lattice(n: u64, q: u64) -> GridPointSet {
        gen_integration_lattice(&LatticeSpec::new(n, vec![q]).unwrap()).unwrap()
    }

    #[test]
    fn periodic_examples() {
        let r = periodic_dispersion_2d(&gen_fibonacci_lattice(7).unwrap()).unwrap();
        assert_eq!(r.value, Rational::ratio(2, 13));
        assert_eq!(r.algorithm, Algorithm::Generic2d);

        let single = GridPointSet::new(2, 7, vec![vec![0, 0]]).unwrap();
        let r = periodic_dispersion_2d(&single).unwrap();
        assert_eq!(r.value, Rational::one());
        assert!(r.witness.extents().iter().all(|e| e.len == Rational::one()));

        assert_eq!(periodic_dispersion_2d(&lattice(4, 1)).unwrap().value, Rational::ratio(9, 16));
        assert_eq!(periodic_dispersion_2d(&lattice(10, 4)).unwrap().value, Rational::ratio(2, 10));
        assert_eq!(periodic_dispersion_2d(&gen_fibonacci_lattice(6).unwrap()).unwrap().value, Rational::ratio(2, 8));
    }

    #[test]
    fn empty_set_rejected() {
        let empty = GridPointSet::new(2, 3, vec![]).unwrap();
        assert!(periodic_dispersion_2d(&empty).is_err());
        assert!(nonperiodic_dispersion_2d(&empty).is_err());
    }

    #[test]
    fn nonperiodic_examples() {
        let half = GridPointSet::new(2, 2, vec![vec![1, 1]]).unwrap();
        let r = nonperiodic_dispersion_2d(&half).unwrap();
        assert_eq!(r.value, Rational::ratio(1, 2));
        assert!(r.witness.extents().iter().all(|e| !e.wraps()));

        let f8 = gen_fibonacci_lattice(8).unwrap().without_origin();
        let r = nonperiodic_dispersion_2d(&f8).unwrap();
        assert_eq!(r.value, Rational::ratio(40, 441));
        assert!(box_is_empty(&f8, &r.witness));

        let f9 = gen_fibonacci_lattice(9).unwrap().without_origin();
        assert_eq!(nonperiodic_dispersion_2d(&f9).unwrap().value, Rational::ratio(66, 1156));
    }

    #[test]
    fn duplicates_in_window_are_single_endpoints() {
        // gcd(4, 10) = 2: every y-value occurs twice.
        let pts = grid_points_2d(&lattice(10, 4));
        let mut doubled = pts.clone();
        doubled.extend_from_slice(&pts);
        assert_eq!(best_empty_box_2d(&pts, 10), best_empty_box_2d(&doubled, 10));
    }
}
