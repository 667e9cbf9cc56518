//! Diagnostics for the column structure that sets of minimal dispersion must have.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::numeric::Rational;
use crate::pointset::GridPointSet;

/// Minimum and maximum over `t` in `[0, 1)` of the number of points whose
/// first coordinate lies in the periodic window `[t, t + w)`.
pub fn column_count_profile(p: &GridPointSet, w: &Rational) -> Result<(usize, usize)> {
    if !(Rational::zero() < *w && *w <= Rational::one()) {
        return domain(format!("window width {w} outside (0, 1]"));
    }
    let n = p.len();
    if n == 0 {
        return Ok((0, 0));
    }
    if *w == Rational::one() {
        return Ok((n, n));
    }
    // Work on a grid fine enough for every breakpoint and every midpoint.
    let modulus: BigInt = BigInt::from(p.den()).lcm(w.denom()) * 2;
    let width: BigInt = w.numer() * (&modulus / w.denom());
    let scale: BigInt = &modulus / BigInt::from(p.den());
    let xs: Vec<BigInt> = p.axis(0).map(|x| BigInt::from(x) * &scale).collect();

    // Point i is counted for t in (x_i - w, x_i].
    let mut breaks: Vec<BigInt> = xs
        .iter()
        .flat_map(|x: &BigInt| { let shifted: BigInt = x - &width; [x.clone(), shifted.mod_floor(&modulus)] })
        .collect();
    breaks.sort();
    breaks.dedup();
    let mut probes = breaks.clone();
    for i in 0..breaks.len() {
        let next: BigInt = if i + 1 < breaks.len() { breaks[i + 1].clone() } else { &breaks[0] + &modulus };
        let mid: BigInt = (&breaks[i] + next) / 2;
        probes.push(mid.mod_floor(&modulus));
    }

    let count = |t: &BigInt| xs.iter().filter(|x| (*x - t).mod_floor(&modulus) < width).count();
    let (mut lo, mut hi) = (usize::MAX, 0);
    for t in &probes {
        let k = count(t);
        lo = lo.min(k);
        hi = hi.max(k);
    }
    Ok((lo, hi))
}

/// Shape of the multiset of coordinates along one axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum AxisStructure {
    /// `{offset + k/n : k = 0..n-1}`
    RegularGrid { offset: Rational },
    /// Union of `{offsets[i] + 2k/n : k = 0..n/2-1}` for `i = 0, 1`.
    Interleaved { offsets: [Rational; 2] },
    Irregular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub x: AxisStructure,
    pub y: AxisStructure,
    /// When both axes are regular grids: the point in column `k` sits in row `permutation[k]`.
    pub permutation: Option<Vec<u64>>,
}

fn classify(values: &[u64], den: u64) -> AxisStructure {
    let n = values.len() as u128;
    if n == 0 {
        return AxisStructure::Irregular;
    }
    let den = den as u128;
    let mut v: Vec<u128> = values.iter().map(|&x| x as u128).collect();
    v.sort_unstable();

    let regular = v[0] * n < den && v.iter().enumerate().all(|(i, &x)| x * n == v[0] * n + i as u128 * den);
    if regular {
        return AxisStructure::RegularGrid { offset: Rational::ratio(v[0], den) };
    }
    if !n.is_multiple_of(2) {
        return AxisStructure::Irregular;
    }
    // residue of x mod 2/n, in units of 1/(n den)
    let mut classes: BTreeMap<u128, Vec<u128>> = BTreeMap::new();
    for &x in &v {
        classes.entry((x * n) % (2 * den)).or_default().push(x);
    }
    let half = (n / 2) as usize;
    let distinct = |xs: &Vec<u128>| xs.windows(2).all(|w| w[0] != w[1]);
    let offset = |r: u128| Rational::ratio(r, n * den);
    match classes.len() {
        2 if classes.values().all(|xs| xs.len() == half && distinct(xs)) => {
            let mut keys = classes.keys().copied();
            let (a, b) = (keys.next().unwrap(), keys.next().unwrap());
            AxisStructure::Interleaved { offsets: [offset(a), offset(b)] }
        }
        1 => {
            let (&r, xs) = classes.iter().next().unwrap();
            let twice = xs.chunks(2).all(|c| c.len() == 2 && c[0] == c[1]) && distinct(&xs.iter().step_by(2).copied().collect());
            if twice {
                AxisStructure::Interleaved { offsets: [offset(r), offset(r)] }
            } else {
                AxisStructure::Irregular
            }
        }
        _ => AxisStructure::Irregular,
    }
}

/// Classifies both coordinate multisets of a planar set; when both are
/// regular grids the set has the permutation form and `pi` is extracted.
pub fn structure_check(p: &GridPointSet) -> Result<StructureReport> {
    if p.dim() != 2 {
        return domain("structure check is planar");
    }
    let xs: Vec<u64> = p.axis(0).collect();
    let ys: Vec<u64> = p.axis(1).collect();
    let x = classify(&xs, p.den());
    let y = classify(&ys, p.den());
    let permutation = match (&x, &y) {
        (AxisStructure::RegularGrid { offset: ox }, AxisStructure::RegularGrid { offset: oy }) => {
            let n = BigInt::from(p.len());
            let den = Rational::from_integer(p.den());
            let index = |c: u64, o: &Rational| {
                let k = (Rational::from_integer(c) / &den - o) * Rational::from_integer(n.clone());
                debug_assert!(k.denom() == &BigInt::from(1) && !k.is_negative());
                k.numer().to_u64().expect("grid index")
            };
            let mut pi = vec![0u64; p.len()];
            for pt in p.points() {
                pi[index(pt[0], ox) as usize] = index(pt[1], oy);
            }
            Some(pi)
        }
        _ => None,
    };
    Ok(StructureReport { x, y, permutation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::{gen_distorted_fibonacci, gen_fibonacci_lattice, parse_points, DistortedFibSpec};

    #[test]
    fn profiles() {
        let f7 = gen_fibonacci_lattice(7).unwrap();
        assert_eq!(column_count_profile(&f7, &Rational::ratio(2, 13)).unwrap(), (2, 2));
        assert_eq!(column_count_profile(&f7, &Rational::ratio(1, 13)).unwrap(), (1, 1));
        assert_eq!(column_count_profile(&f7, &Rational::ratio(3, 26)).unwrap(), (1, 2));
        assert_eq!(column_count_profile(&f7, &Rational::one()).unwrap(), (13, 13));
        let single = GridPointSet::new(2, 1, vec![vec![0, 0]]).unwrap();
        assert_eq!(column_count_profile(&single, &Rational::ratio(1, 2)).unwrap(), (0, 1));
        assert!(column_count_profile(&f7, &Rational::zero()).is_err());
        assert!(column_count_profile(&f7, &Rational::ratio(3, 2)).is_err());
    }

    #[test]
    fn fibonacci_permutation() {
        let r = structure_check(&gen_fibonacci_lattice(7).unwrap()).unwrap();
        assert_eq!(r.x, AxisStructure::RegularGrid { offset: Rational::zero() });
        assert_eq!(r.permutation.unwrap(), (0..13).map(|k| k * 5 % 13).collect::<Vec<u64>>());
    }

    #[test]
    fn distorted_is_interleaved() {
        let d = gen_distorted_fibonacci(&DistortedFibSpec { m: 6, xi: Rational::ratio(1, 5), eta: Rational::zero() }).unwrap();
        let r = structure_check(&d).unwrap();
        let second = Rational::ratio(6, 5) / Rational::from_integer(8);
        assert_eq!(r.x, AxisStructure::Interleaved { offsets: [Rational::zero(), second] });
        assert_eq!(r.permutation, None);
    }

    #[test]
    fn irregular() {
        let p = parse_points("0 0\n1/3 1/2\n1/2 1/4\n").unwrap();
        let r = structure_check(&p).unwrap();
        assert_eq!(r.x, AxisStructure::Irregular);
        assert_eq!(r.permutation, None);
    }

    #[test]
    fn doubled_columns() {
        // two points per column, columns 2/n apart
        let p = parse_points("0 0\n0 1/2\n1/2 1/4\n1/2 3/4\n").unwrap();
        let r = structure_check(&p).unwrap();
        assert_eq!(r.x, AxisStructure::Interleaved { offsets: [Rational::zero(), Rational::zero()] });
    }
}
