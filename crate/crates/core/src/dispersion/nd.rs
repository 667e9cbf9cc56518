//! Brute-force periodic solver for any dimension.
//!
//! Axes are fixed one at a time. On each axis the box edges run over the
//! coordinates of the points still inside the box on all earlier axes (only
//! those can block growth), plus a full turn with an unoccupied seam. On the
//! last axis the best extent is the largest cyclic gap of the survivors.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use super::{grid_box, off_grid_corner, require_nonempty, Algorithm, DispersionResult};
use crate::error::Result;
use crate::numeric::{cyclic_distance, Rational};
use crate::pointset::GridPointSet;

/// Box volume in grid units. `u128` unless `den^dim` could overflow it.
trait Volume: Ord + Clone + Send {
    fn of(lens: &[u64]) -> Self;
    fn into_big(self) -> BigUint;
}

impl Volume for u128 {
    fn of(lens: &[u64]) -> Self {
        lens.iter().map(|&l| l as u128).product()
    }
    fn into_big(self) -> BigUint {
        self.into()
    }
}

impl Volume for BigUint {
    fn of(lens: &[u64]) -> Self {
        lens.iter().fold(BigUint::one(), |acc, &l| acc * l)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

#[derive(Clone, Debug)]
struct Candidate<V> {
    volume: V,
    lo2: Vec<u64>,
    lens: Vec<u64>,
}

impl<V: Volume> Candidate<V> {
    fn key(&self) -> impl Ord + '_ {
        (&self.lo2[..], &self.lens[..self.lens.len() - 1])
    }

    fn better(self, other: Option<Self>) -> Self {
        match other {
            None => self,
            Some(o) => match self.volume.cmp(&o.volume) {
                Ordering::Greater => self,
                Ordering::Less => o,
                Ordering::Equal if self.key() <= o.key() => self,
                Ordering::Equal => o,
            },
        }
    }
}

fn merge<V: Volume>(a: Option<Candidate<V>>, b: Option<Candidate<V>>) -> Option<Candidate<V>> {
    match (a, b) {
        (Some(a), b) => Some(a.better(b)),
        (None, b) => b,
    }
}

struct Solver<'a> {
    p: &'a GridPointSet,
    den: u64,
    dim: usize,
}

impl Solver<'_> {
    /// Sorted distinct coordinates of `members` on `axis`, each with the members there.
    fn columns(&self, members: &[usize], axis: usize) -> Vec<(u64, Vec<usize>)> {
        let mut keyed: Vec<(u64, usize)> = members.iter().map(|&i| (self.p.point(i)[axis], i)).collect();
        keyed.sort_unstable();
        let mut cols: Vec<(u64, Vec<usize>)> = Vec::new();
        for (c, i) in keyed {
            match cols.last_mut() {
                Some((x, v)) if *x == c => v.push(i),
                _ => cols.push((c, vec![i])),
            }
        }
        cols
    }

    fn last_axis<V: Volume>(&self, members: &[usize], lo2: &mut Vec<u64>, lens: &mut Vec<u64>) -> Candidate<V> {
        let axis = self.dim - 1;
        let mut ys: Vec<u64> = members.iter().map(|&i| self.p.point(i)[axis]).collect();
        ys.sort_unstable();
        ys.dedup();
        let (start, len) = match ys.len() {
            0 => (0, self.den),
            1 => (ys[0], self.den),
            k => {
                let mut best = (0, 0);
                for i in 0..k {
                    let len = cyclic_distance(ys[i], ys[(i + 1) % k], self.den);
                    if len > best.1 {
                        best = (ys[i], len);
                    }
                }
                best
            }
        };
        lo2.push(2 * start);
        lens.push(len);
        let cand = Candidate { volume: V::of(lens), lo2: lo2.clone(), lens: lens.clone() };
        lo2.pop();
        lens.pop();
        cand
    }

    /// Every extent on `axis` starting at column `i`, recursing into the next axis.
    fn extents_from<V: Volume>(
        &self,
        axis: usize,
        cols: &[(u64, Vec<usize>)],
        i: usize,
        lo2: &mut Vec<u64>,
        lens: &mut Vec<u64>,
    ) -> Option<Candidate<V>> {
        let c = cols.len();
        let x0 = cols[i].0;
        let mut inside: Vec<usize> = Vec::new();
        let mut best = None;
        for step in 1..=c {
            let j = (i + step) % c;
            let width = if step == c { self.den } else { cyclic_distance(x0, cols[j].0, self.den) };
            lo2.push(2 * x0);
            lens.push(width);
            best = merge(best, self.descend(axis + 1, &inside, lo2, lens));
            lo2.pop();
            lens.pop();
            if step < c {
                inside.extend_from_slice(&cols[j].1);
            }
        }
        best
    }

    fn full_turn<V: Volume>(
        &self,
        axis: usize,
        cols: &[(u64, Vec<usize>)],
        members: &[usize],
        lo2: &mut Vec<u64>,
        lens: &mut Vec<u64>,
    ) -> Option<Candidate<V>> {
        let xs: Vec<u64> = cols.iter().map(|(x, _)| *x).collect();
        lo2.push(off_grid_corner(&xs, self.den));
        lens.push(self.den);
        let r = self.descend(axis + 1, members, lo2, lens);
        lo2.pop();
        lens.pop();
        r
    }

    fn descend<V: Volume>(&self, axis: usize, members: &[usize], lo2: &mut Vec<u64>, lens: &mut Vec<u64>) -> Option<Candidate<V>> {
        if axis == self.dim - 1 {
            return Some(self.last_axis(members, lo2, lens));
        }
        let cols = self.columns(members, axis);
        let mut best = self.full_turn(axis, &cols, members, lo2, lens);
        for i in 0..cols.len() {
            best = merge(best, self.extents_from(axis, &cols, i, lo2, lens));
        }
        best
    }

    fn solve<V: Volume>(&self) -> Candidate<V> {
        let all: Vec<usize> = (0..self.p.len()).collect();
        if self.dim == 1 {
            return self.last_axis(&all, &mut Vec::new(), &mut Vec::new());
        }
        let cols = self.columns(&all, 0);
        let top = (0..cols.len())
            .into_par_iter()
            .map(|i| self.extents_from::<V>(0, &cols, i, &mut Vec::new(), &mut Vec::new()))
            .reduce(|| None, merge);
        let seam = self.full_turn(0, &cols, &all, &mut Vec::new(), &mut Vec::new());
        merge(top, seam).expect("at least one candidate box")
    }
}

/// Periodic dispersion in any dimension by exhaustive enumeration of
/// maximal boxes. Agrees with the planar sweep for `d = 2`.
pub fn periodic_dispersion_nd(p: &GridPointSet) -> Result<DispersionResult> {
    require_nonempty(p)?;
    let solver = Solver { p, den: p.den(), dim: p.dim() };
    let fits = (p.den() as u128).checked_pow(p.dim() as u32).is_some();
    let (volume, lo2, lens) = if fits {
        let c = solver.solve::<u128>();
        (c.volume.into_big(), c.lo2, c.lens)
    } else {
        let c = solver.solve::<BigUint>();
        (c.volume, c.lo2, c.lens)
    };
    let full = num_traits::pow(BigUint::from(p.den()), p.dim());
    Ok(DispersionResult {
        value: Rational::new(volume, full)?,
        witness: grid_box(p.den(), &lo2, &lens),
        algorithm: Algorithm::GenericNd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{box_is_empty, periodic_dispersion_2d};
    use crate::pointset::{gen_fibonacci_lattice, gen_integration_lattice, LatticeSpec};

    #[test]
    fn examples() {
        let one = GridPointSet::new(3, 5, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(periodic_dispersion_nd(&one).unwrap().value, Rational::one());

        let f6 = gen_fibonacci_lattice(6).unwrap();
        let r = periodic_dispersion_nd(&f6).unwrap();
        assert_eq!(r.value, Rational::ratio(2, 8));
        assert_eq!(r.witness, periodic_dispersion_2d(&f6).unwrap().witness);

        let l = gen_integration_lattice(&LatticeSpec::new(4, vec![1, 3]).unwrap()).unwrap();
        let r = periodic_dispersion_nd(&l).unwrap();
        assert!(r.value >= Rational::ratio(3, 4));
        assert!(box_is_empty(&l, &r.witness));
        assert_eq!(r.witness.area(), r.value);
    }

    #[test]
    fn one_dimension() {
        let p = GridPointSet::new(1, 10, vec![vec![1], vec![3], vec![4]]).unwrap();
        assert_eq!(periodic_dispersion_nd(&p).unwrap().value, Rational::ratio(7, 10));
    }

    #[test]
    fn big_volume_fallback() {
        // den^3 overflows u128
        let den = 1u64 << 50;
        let p = GridPointSet::new(3, den, vec![vec![0, 0, 0], vec![den / 2, den / 2, den / 2]]).unwrap();
        let r = periodic_dispersion_nd(&p).unwrap();
        assert_eq!(r.value, Rational::one());
    }
}
