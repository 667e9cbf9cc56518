//! Straightforward `O(n^3 log n)` periodic solver kept as an oracle for the
//! sweep and the lattice fast paths. Every window is rebuilt from scratch.

use super::sweep::{grid_points_2d, to_result, GridBox2};
use super::{off_grid_corner, require_nonempty, Algorithm, DispersionResult};
use crate::error::{domain, Result};
use crate::pointset::GridPointSet;

/// Leftmost largest cyclic gap of `ys` on a circle of length `den`.
fn largest_gap(mut ys: Vec<u64>, den: u64) -> (u64, u64) {
    ys.sort_unstable();
    ys.dedup();
    if ys.len() <= 1 {
        return (ys.first().copied().unwrap_or(0), den);
    }
    let mut best = (0, 0);
    for i in 0..ys.len() {
        let next = if i + 1 < ys.len() { ys[i + 1] } else { ys[0] + den };
        let len = next - ys[i];
        if len > best.1 {
            best = (ys[i], len);
        }
    }
    best
}

pub fn periodic_dispersion_2d_reference(p: &GridPointSet) -> Result<DispersionResult> {
    if p.dim() != 2 {
        return domain("reference solver is planar");
    }
    require_nonempty(p)?;
    let den = p.den();
    let pts = grid_points_2d(p);
    let mut xs: Vec<u64> = pts.iter().map(|&(x, _)| x).collect();
    xs.sort_unstable();
    xs.dedup();

    let candidate = |lo_x2: u64, width: u64, ys: Vec<u64>| {
        let (start, len) = largest_gap(ys, den);
        GridBox2 { area: width as u128 * len as u128, lo2: [lo_x2, 2 * start], len: [width, len] }
    };

    let mut best = GridBox2::NONE;
    for &a in &xs {
        for &b in &xs {
            // open window (a, a + width) on the circle; a == b is a full turn
            let width = if b > a { b - a } else { den - a + b };
            let ys = pts
                .iter()
                .filter(|&&(x, _)| {
                    let t = (x + den - a) % den;
                    t > 0 && t < width
                })
                .map(|&(_, y)| y)
                .collect();
            best = best.better(candidate(2 * a, width, ys));
        }
    }
    let all = pts.iter().map(|&(_, y)| y).collect();
    best = best.better(candidate(off_grid_corner(&xs, den), den, all));
    Ok(to_result(best, den, Algorithm::Reference2d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Rational;
    use crate::pointset::{gen_integration_lattice, LatticeSpec};

    #[test]
    fn four_one() {
        let p = gen_integration_lattice(&LatticeSpec::new(4, vec![1]).unwrap()).unwrap();
        let r = periodic_dispersion_2d_reference(&p).unwrap();
        assert_eq!(r.value, Rational::ratio(9, 16));
        let lens: Vec<_> = r.witness.extents().iter().map(|e| e.len.clone()).collect();
        assert_eq!(lens, vec![Rational::ratio(3, 4), Rational::ratio(3, 4)]);
    }
}
