//! Exact largest-empty-box solvers.
//!
//! Boxes are closed; a box is empty when no point lies in its open interior,
//! so points on the boundary are allowed. All solvers work on the integer
//! grid of a [`GridPointSet`] and only build rationals for the final result.
//!
//! When several boxes attain the maximum, the witness is the one with the
//! lexicographically smallest `(lo_1, ..., lo_d, len_1, ..., len_{d-1})`.

mod nd;
mod reference;
mod structure;
mod sweep;

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::numeric::Rational;
use crate::pointset::GridPointSet;

pub use nd::periodic_dispersion_nd;
pub use reference::periodic_dispersion_2d_reference;
pub use structure::{column_count_profile, structure_check, AxisStructure, StructureReport};
pub use sweep::{nonperiodic_dispersion_2d, periodic_dispersion_2d};
pub(crate) use sweep::{best_empty_box_2d, GridBox2};

/// One axis of a box: the cyclic interval `[lo, lo + len]` on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extent {
    pub lo: Rational,
    pub len: Rational,
}

impl Extent {
    /// Whether the extent runs past 1 and continues from 0.
    pub fn wraps(&self) -> bool {
        &self.lo + &self.len > Rational::one()
    }
}

/// Axis-parallel box on the torus. `len = 1` is a full turn whose interior
/// is the whole circle except `lo`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TorusBox {
    extents: Vec<Extent>,
}

impl TorusBox {
    pub fn new(extents: Vec<Extent>) -> Result<Self> {
        for e in &extents {
            if e.lo.is_negative() || e.lo >= Rational::one() {
                return domain(format!("box corner {} outside [0, 1)", e.lo));
            }
            if e.len.is_negative() || e.len > Rational::one() {
                return domain(format!("box side {} outside [0, 1]", e.len));
            }
        }
        Ok(TorusBox { extents })
    }

    pub fn extents(&self) -> &[Extent] {
        &self.extents
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn area(&self) -> Rational {
        self.extents.iter().fold(Rational::one(), |acc, e| acc * &e.len)
    }

    /// The same box with every side grown by `delta` (capped at a full turn).
    pub fn inflated(&self, delta: &Rational) -> TorusBox {
        let extents = self
            .extents
            .iter()
            .map(|e| {
                let len = (&e.len + delta).min(Rational::one());
                Extent { lo: (&e.lo - delta).fract(), len }
            })
            .collect();
        TorusBox { extents }
    }
}

impl fmt::Display for TorusBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.extents.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}+{}", e.lo, e.len)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Algorithm {
    Generic2d,
    Nonperiodic2d,
    GenericNd,
    LatticeFast2d,
    Lattice3d,
    Reference2d,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Generic2d => "generic2d",
            Algorithm::Nonperiodic2d => "nonperiodic2d",
            Algorithm::GenericNd => "genericNd",
            Algorithm::LatticeFast2d => "latticeFast2d",
            Algorithm::Lattice3d => "lattice3d",
            Algorithm::Reference2d => "reference2d",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Exact dispersion together with an empty box attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DispersionResult {
    pub value: Rational,
    pub witness: TorusBox,
    pub algorithm: Algorithm,
}

impl DispersionResult {
    /// `{"value": .., "witness": [{"lo": .., "len": ..}, ..], "algorithm": ..}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

/// Single-line record: `value=<p/q> witness=<lo+len,...> algorithm=<tag>`.
impl fmt::Display for DispersionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "value={} witness={} algorithm={}", self.value, self.witness, self.algorithm)
    }
}

/// True iff no point of `p` lies in the open interior of `b`.
pub fn box_is_empty(p: &GridPointSet, b: &TorusBox) -> bool {
    if b.dim() != p.dim() {
        return false;
    }
    let den = Rational::from_integer(p.den());
    let inside = |coord: u64, e: &Extent| {
        let t = (Rational::from_integer(coord) / &den - &e.lo).fract();
        !t.is_zero() && t < e.len
    };
    !p.points()
        .any(|pt| pt.iter().zip(b.extents()).all(|(&c, e)| inside(c, e)))
}

/// Periodic dispersion for any dimension: the sweep for `d = 2`, brute force otherwise.
pub fn periodic_dispersion(p: &GridPointSet) -> Result<DispersionResult> {
    periodic_dispersion_2d(p)
}

pub(crate) fn require_nonempty(p: &GridPointSet) -> Result<()> {
    if p.is_empty() {
        return domain("dispersion of an empty point set is undefined");
    }
    Ok(())
}

/// Rational box from grid data: corners are given doubled (`lo2 = 2 * lo * D`)
/// so that off-grid corners at half steps stay integral.
pub(crate) fn grid_box(den: u64, lo2: &[u64], lens: &[u64]) -> TorusBox {
    let extents = lo2
        .iter()
        .zip(lens)
        .map(|(&lo, &len)| Extent {
            lo: Rational::ratio(lo as u128, 2 * den as u128),
            len: Rational::ratio(len as u128, den as u128),
        })
        .collect();
    TorusBox::new(extents).expect("grid boxes are valid")
}

/// Smallest doubled grid position not occupied by any of the sorted `coords`.
pub(crate) fn off_grid_corner(coords: &[u64], den: u64) -> u64 {
    match (0..den).zip(coords.iter().copied().chain(std::iter::repeat(u64::MAX))).find(|(k, c)| k != c) {
        Some((k, _)) => 2 * k,
        None => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::gen_fibonacci_lattice;

    #[test]
    fn emptiness() {
        let f7 = gen_fibonacci_lattice(7).unwrap();
        let r = periodic_dispersion_2d(&f7).unwrap();
        assert!(box_is_empty(&f7, &r.witness));
        assert_eq!(r.witness.area(), r.value);
        let bigger = r.witness.inflated(&Rational::ratio(1, 1000));
        assert!(!box_is_empty(&f7, &bigger));

        let flat = TorusBox::new(vec![
            Extent { lo: Rational::zero(), len: Rational::one() },
            Extent { lo: Rational::ratio(1, 3), len: Rational::zero() },
        ])
        .unwrap();
        assert!(box_is_empty(&f7, &flat));
    }

    #[test]
    fn corners() {
        assert_eq!(off_grid_corner(&[0, 1, 3], 5), 4);
        assert_eq!(off_grid_corner(&[1, 2], 5), 0);
        assert_eq!(off_grid_corner(&[0, 1, 2], 3), 1);
        assert_eq!(off_grid_corner(&[], 3), 0);
    }

    #[test]
    fn record_format() {
        let p = GridPointSet::new(2, 1, vec![vec![0, 0]]).unwrap();
        let r = periodic_dispersion_2d(&p).unwrap();
        assert_eq!(r.to_string(), "value=1 witness=0+1,0+1 algorithm=generic2d");
        assert_eq!(
            r.to_json(),
            r#"{"value":"1","witness":[{"lo":"0","len":"1"},{"lo":"0","len":"1"}],"algorithm":"generic2d"}"#
        );
    }
}
