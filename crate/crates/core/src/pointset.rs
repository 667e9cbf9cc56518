//! Point sets on the torus stored on a common integer grid, the lattice
//! generators, torus symmetries, and the plain-text point file format.
//!
//! A point `(u_1, ..., u_d)` of a [`GridPointSet`] with denominator `D`
//! stands for `(u_1/D, ..., u_d/D)` in `[0, 1)^d`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{domain, Error, Result};
use crate::numeric::{fib_u64, lcm_u64, to_u64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPointSet {
    dim: usize,
    den: u64,
    coords: Vec<u64>,
    labels: Option<Vec<u64>>,
}

impl GridPointSet {
    pub fn new(dim: usize, den: u64, points: Vec<Vec<u64>>) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::Invariant(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, den, coords)
    }

    /// Builds a set from row-major coordinates (`dim` values per point).
    pub fn from_flat(dim: usize, den: u64, coords: Vec<u64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invariant("dimension must be positive".into()));
        }
        if den == 0 {
            return Err(Error::Invariant("denominator must be positive".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Invariant("coordinate count not a multiple of dim".into()));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= den) {
            return Err(Error::Invariant(format!("coordinate {c} not below denominator {den}")));
        }
        let mut seen = HashSet::with_capacity(coords.len() / dim);
        for p in coords.chunks_exact(dim) {
            if !seen.insert(p) {
                return Err(Error::Invariant(format!("duplicate point {p:?}")));
            }
        }
        Ok(GridPointSet { dim, den, coords, labels: None })
    }

    /// Attaches one label per point (generators use the lattice index `k`).
    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Invariant("label count differs from point count".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, u64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    /// Coordinates of all points along one axis, in point order.
    pub fn axis(&self, axis: usize) -> impl Iterator<Item = u64> + '_ {
        self.points().map(move |p| p[axis])
    }

    pub fn coordinate(&self, i: usize, axis: usize) -> Rational {
        Rational::ratio(self.point(i)[axis] as u128, self.den as u128)
    }

    fn retain(&self, keep: impl Fn(usize) -> bool) -> GridPointSet {
        let mut coords = Vec::new();
        let mut labels = self.labels.as_ref().map(|_| Vec::new());
        for i in 0..self.len() {
            if keep(i) {
                coords.extend_from_slice(self.point(i));
                if let (Some(out), Some(src)) = (labels.as_mut(), self.labels.as_ref()) {
                    out.push(src[i]);
                }
            }
        }
        GridPointSet { dim: self.dim, den: self.den, coords, labels }
    }

    /// Removes the point at the given (rational) position, if present.
    pub fn without_point(&self, p: &[Rational]) -> GridPointSet {
        let target: Option<Vec<u64>> = p
            .iter()
            .map(|c| c.scaled_to(self.den).and_then(|v| v.to_u64()))
            .collect();
        match target {
            Some(t) if t.len() == self.dim => self.retain(|i| self.point(i) != t.as_slice()),
            _ => self.clone(),
        }
    }

    pub fn without_origin(&self) -> GridPointSet {
        self.retain(|i| self.point(i).iter().any(|&c| c != 0))
    }

    pub fn without_label(&self, label: u64) -> GridPointSet {
        match &self.labels {
            Some(l) => self.retain(|i| l[i] != label),
            None => self.clone(),
        }
    }

    /// Same points over the denominator `den`, which must be a multiple of the current one.
    pub fn rescale(&self, den: u64) -> Result<GridPointSet> {
        if den == 0 || !den.is_multiple_of(self.den) {
            return domain(format!("{den} is not a multiple of {}", self.den));
        }
        let f = den / self.den;
        Ok(GridPointSet {
            dim: self.dim,
            den,
            coords: self.coords.iter().map(|c| c * f).collect(),
            labels: self.labels.clone(),
        })
    }

    /// Smallest denominator, points sorted, labels dropped.
    pub fn canonical(&self) -> GridPointSet {
        let g = self.coords.iter().fold(self.den, |g, &c| g.gcd(&c));
        let mut pts: Vec<Vec<u64>> = self.points().map(|p| p.iter().map(|c| c / g).collect()).collect();
        pts.sort_unstable();
        GridPointSet {
            dim: self.dim,
            den: self.den / g,
            coords: pts.concat(),
            labels: None,
        }
    }

    /// Equality as sets of points in `[0,1)^d`.
    pub fn set_eq(&self, other: &GridPointSet) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Parameters of an integration lattice `{(k/n, {k q_1/n}, ...)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    pub n: u64,
    pub generators: Vec<u64>,
}

impl LatticeSpec {
    pub fn new(n: u64, generators: Vec<u64>) -> Result<Self> {
        let spec = LatticeSpec { n, generators };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return domain(format!("lattice needs n >= 2, got {}", self.n));
        }
        if self.generators.is_empty() {
            return domain("lattice needs at least one generator");
        }
        if let Some(q) = self.generators.iter().find(|&&q| q >= self.n) {
            return domain(format!("generator {q} not below n = {}", self.n));
        }
        if self.generators.len() == 1 && self.generators[0] == 0 {
            return domain("two-dimensional generator must lie in 1..n-1");
        }
        Ok(())
    }
}

/// Fibonacci lattice with every odd-indexed point shifted by `(xi, eta) / F_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortedFibSpec {
    pub m: u32,
    pub xi: Rational,
    pub eta: Rational,
}

pub fn gen_fibonacci_lattice(m: u32) -> Result<GridPointSet> {
    if !(3..=93).contains(&m) {
        return domain(format!("fibonacci lattice index {m} outside 3..=93"));
    }
    gen_integration_lattice(&LatticeSpec {
        n: fib_u64(m),
        generators: vec![fib_u64(m - 2)],
    })
}

pub fn gen_integration_lattice(spec: &LatticeSpec) -> Result<GridPointSet> {
    spec.validate()?;
    let n = spec.n;
    let dim = spec.generators.len() + 1;
    let mut coords = Vec::with_capacity(n as usize * dim);
    for k in 0..n {
        coords.push(k);
        for &q in &spec.generators {
            coords.push(((k as u128 * q as u128) % n as u128) as u64);
        }
    }
    GridPointSet::from_flat(dim, n, coords)?.with_labels((0..n).collect())
}

pub fn gen_distorted_fibonacci(spec: &DistortedFibSpec) -> Result<GridPointSet> {
    let in_unit = |r: &Rational| !r.is_negative() && *r < Rational::one();
    if !in_unit(&spec.xi) || !in_unit(&spec.eta) {
        return domain("distortion must lie in [0, 1)");
    }
    if !(3..=93).contains(&spec.m) {
        return domain(format!("fibonacci index {} outside 3..=93", spec.m));
    }
    let fm = fib_u64(spec.m);
    if !fm.is_multiple_of(2) {
        return Err(Error::Invariant(format!("F_{} = {fm} is odd; alternating shift undefined", spec.m)));
    }
    let scale = lcm_u64(
        to_u64(spec.xi.denom(), "denominator")?,
        to_u64(spec.eta.denom(), "denominator")?,
    )?;
    let den = fm
        .checked_mul(scale)
        .ok_or_else(|| Error::Domain("grid denominator overflows".into()))?;
    let shift = |r: &Rational| -> Result<u64> { to_u64(&r.scaled_to(scale).expect("scale is a common multiple"), "shift") };
    let (sx, sy) = (shift(&spec.xi)?, shift(&spec.eta)?);
    let q = fib_u64(spec.m - 2);
    let mut coords = Vec::with_capacity(2 * fm as usize);
    for k in 0..fm {
        let y = ((k as u128 * q as u128) % fm as u128) as u64;
        let (mut x, mut y) = (k * scale, y * scale);
        if k % 2 == 1 {
            x = (x + sx) % den;
            y = (y + sy) % den;
        }
        coords.push(x);
        coords.push(y);
    }
    GridPointSet::from_flat(2, den, coords)?.with_labels((0..fm).collect())
}

/// Torus symmetries; all of them preserve periodic dispersion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// Translation by a rational vector, taken mod 1.
    Translate(Vec<Rational>),
    /// Output axis `i` takes input axis `perm[i]`.
    Permute(Vec<usize>),
    /// `x -> 1 - x` (mod 1) along one axis.
    Reflect(usize),
}

pub fn transform(p: &GridPointSet, t: &Symmetry) -> Result<GridPointSet> {
    let dim = p.dim();
    let mut out = match t {
        Symmetry::Translate(v) => {
            if v.len() != dim {
                return domain("translation vector has wrong dimension");
            }
            let mut den = p.den();
            for c in v {
                den = lcm_u64(den, to_u64(c.denom(), "denominator")?)?;
            }
            let base = p.rescale(den)?;
            let shifts: Vec<u64> = v
                .iter()
                .map(|c| {
                    let s = c.fract().scaled_to(den).expect("den is a common multiple");
                    to_u64(&s, "shift")
                })
                .collect::<Result<_>>()?;
            let coords = base
                .points()
                .flat_map(|pt| pt.iter().zip(&shifts).map(|(&a, &s)| ((a as u128 + s as u128) % den as u128) as u64))
                .collect();
            GridPointSet::from_flat(dim, den, coords)?
        }
        Symmetry::Permute(perm) => {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != (0..dim).collect::<Vec<_>>() {
                return domain(format!("{perm:?} is not a permutation of the axes"));
            }
            let coords = p.points().flat_map(|pt| perm.iter().map(|&a| pt[a])).collect();
            GridPointSet::from_flat(dim, p.den(), coords)?
        }
        Symmetry::Reflect(axis) => {
            if *axis >= dim {
                return domain(format!("axis {axis} out of range"));
            }
            let den = p.den();
            let coords = p
                .points()
                .flat_map(|pt| {
                    pt.iter()
                        .enumerate()
                        .map(|(a, &c)| if a == *axis { (den - c) % den } else { c })
                        .collect::<Vec<_>>()
                })
                .collect();
            GridPointSet::from_flat(dim, den, coords)?
        }
    };
    if let Some(l) = p.labels() {
        out = out.with_labels(l.to_vec())?;
    }
    Ok(out)
}

/// Parses the point file format: one point per line, whitespace-separated
/// rational coordinates in `[0, 1)`, `#` comments, blank lines ignored.
pub fn parse_points(text: &str) -> Result<GridPointSet> {
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut dim = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let v: Rational = tok.parse().map_err(|_| err(format!("bad coordinate {tok:?}")))?;
            if v.is_negative() || v >= Rational::one() {
                return Err(err(format!("coordinate {tok} outside [0, 1)")));
            }
            row.push(v);
        }
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(err(format!("expected {d} coordinates, found {}", row.len())));
            }
            _ => {}
        }
        rows.push((line_no, row));
    }
    let Some(dim) = dim else {
        return Err(Error::Parse { line: text.lines().count(), message: "no points".into() });
    };
    let mut den = BigInt::from(1u8);
    for (_, row) in &rows {
        for c in row {
            den = den.lcm(c.denom());
        }
    }
    let den = den
        .to_u64()
        .ok_or_else(|| Error::Parse { line: 0, message: "common denominator exceeds 64 bits".into() })?;
    let mut coords = Vec::with_capacity(rows.len() * dim);
    let mut seen = HashSet::new();
    for (line, row) in &rows {
        let start = coords.len();
        for c in row {
            let v = c.scaled_to(den).expect("common denominator");
            coords.push(v.to_u64().unwrap_or(0));
        }
        if !seen.insert(coords[start..].to_vec()) {
            return Err(Error::Parse { line: *line, message: "duplicate point".into() });
        }
    }
    GridPointSet::from_flat(dim, den, coords)
}

pub fn format_points(p: &GridPointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# dim={} n={} den={}", p.dim(), p.len(), p.den());
    for i in 0..p.len() {
        let line: Vec<String> = (0..p.dim()).map(|a| p.coordinate(i, a).to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn load(path: impl AsRef<Path>) -> Result<GridPointSet> {
    parse_points(&fs::read_to_string(path)?)
}

pub fn save(p: &GridPointSet, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_points(p).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(den: u64, pts: &[[u64; 2]]) -> GridPointSet {
        GridPointSet::new(2, den, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn fibonacci_lattice_small() {
        let f5 = gen_fibonacci_lattice(5).unwrap();
        assert_eq!(f5.den(), 5);
        assert_eq!(f5, set(5, &[[0, 0], [1, 2], [2, 4], [3, 1], [4, 3]]).with_labels((0..5).collect()).unwrap());
        let f3 = gen_fibonacci_lattice(3).unwrap();
        assert!(f3.set_eq(&set(2, &[[0, 0], [1, 1]])));
        let f7 = gen_fibonacci_lattice(7).unwrap();
        assert_eq!(f7.len(), 13);
        assert_eq!(f7.point(1), &[1, 5]);
        assert!(gen_fibonacci_lattice(2).is_err());
    }

    #[test]
    fn fibonacci_is_integration_lattice() {
        for m in 3..=16 {
            let a = gen_fibonacci_lattice(m).unwrap();
            let b = gen_integration_lattice(&LatticeSpec::new(fib_u64(m), vec![fib_u64(m - 2)]).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn integration_lattices() {
        let p = gen_integration_lattice(&LatticeSpec::new(10, vec![4]).unwrap()).unwrap();
        let ys: Vec<u64> = p.axis(1).collect();
        assert_eq!(ys, vec![0, 4, 8, 2, 6, 0, 4, 8, 2, 6]);
        assert_eq!(p.len(), 10);
        let p3 = gen_integration_lattice(&LatticeSpec::new(4, vec![1, 3]).unwrap()).unwrap();
        assert_eq!(p3, GridPointSet::new(3, 4, vec![vec![0, 0, 0], vec![1, 1, 3], vec![2, 2, 2], vec![3, 3, 1]]).unwrap().with_labels(vec![0, 1, 2, 3]).unwrap());
        assert!(LatticeSpec::new(1, vec![0]).is_err());
        assert!(LatticeSpec::new(5, vec![0]).is_err());
        assert!(LatticeSpec::new(5, vec![5]).is_err());
        assert!(LatticeSpec::new(5, vec![0, 0]).is_ok());
    }

    #[test]
    fn distorted() {
        let zero = Rational::zero();
        let d = gen_distorted_fibonacci(&DistortedFibSpec { m: 6, xi: zero.clone(), eta: zero.clone() }).unwrap();
        assert!(d.set_eq(&gen_fibonacci_lattice(6).unwrap()));

        let d = gen_distorted_fibonacci(&DistortedFibSpec { m: 6, xi: Rational::ratio(1, 5), eta: zero.clone() }).unwrap();
        assert_eq!(d.den(), 40);
        let f = gen_fibonacci_lattice(6).unwrap();
        for k in 0..8 {
            let (x, y) = (d.point(k)[0], d.point(k)[1]);
            let shift = if k % 2 == 1 { 1 } else { 0 };
            assert_eq!(x, 5 * f.point(k)[0] + shift);
            assert_eq!(y, 5 * f.point(k)[1]);
        }

        let d = gen_distorted_fibonacci(&DistortedFibSpec { m: 9, xi: Rational::ratio(1, 10), eta: Rational::ratio(1, 10) }).unwrap();
        assert_eq!((d.len(), d.den()), (34, 340));

        let odd = gen_distorted_fibonacci(&DistortedFibSpec { m: 7, xi: zero.clone(), eta: zero });
        assert!(matches!(odd, Err(Error::Invariant(_))));
    }

    #[test]
    fn symmetries() {
        let p = set(5, &[[0, 0], [1, 2]]);
        assert_eq!(transform(&p, &Symmetry::Reflect(0)).unwrap(), set(5, &[[0, 0], [4, 2]]));

        let l13_5 = gen_integration_lattice(&LatticeSpec::new(13, vec![5]).unwrap()).unwrap();
        let l13_8 = gen_integration_lattice(&LatticeSpec::new(13, vec![8]).unwrap()).unwrap();
        let swapped = transform(&l13_5, &Symmetry::Permute(vec![1, 0])).unwrap();
        // brute-force set comparison
        let a: HashSet<Vec<u64>> = swapped.points().map(|p| p.to_vec()).collect();
        let b: HashSet<Vec<u64>> = l13_8.points().map(|p| p.to_vec()).collect();
        assert_eq!(a, b);

        let t = transform(&l13_5, &Symmetry::Translate(vec![Rational::ratio(1, 13), Rational::zero()])).unwrap();
        for (orig, moved) in l13_5.points().zip(t.points()) {
            assert_eq!(moved[0], (orig[0] + 1) % 13);
            assert_eq!(moved[1], orig[1]);
        }
        let t = transform(&p, &Symmetry::Translate(vec![Rational::ratio(1, 2), Rational::zero()])).unwrap();
        assert_eq!(t.den(), 10);
        assert!(transform(&p, &Symmetry::Permute(vec![0, 0])).is_err());
    }

    #[test]
    fn drop_origin() {
        let f = gen_fibonacci_lattice(8).unwrap();
        let a = f.without_origin();
        let b = f.without_point(&[Rational::zero(), Rational::zero()]);
        let c = f.without_label(0);
        assert_eq!(a.len(), 20);
        assert!(a.set_eq(&b) && a.set_eq(&c));
    }

    #[test]
    fn file_round_trip() {
        let f = gen_fibonacci_lattice(7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fib7.txt");
        save(&f, &path).unwrap();
        assert!(load(&path).unwrap().set_eq(&f));
    }

    #[test]
    fn parse_cases() {
        let p = parse_points("1/2 1/2\n").unwrap();
        assert_eq!((p.len(), p.den()), (1, 2));
        let p = parse_points("# header\n0.25 0\n\n1/3 0.5 # trailing\n").unwrap();
        assert_eq!(p.den(), 12);
        assert_eq!(p.point(1), &[4, 6]);
        for (text, line) in [("0 0\n0 0\n", 2), ("0 0\n1 0\n", 2), ("0 0\n0\n", 2), ("0 x\n", 1), ("\n\n0.5 -1/2\n", 3)] {
            match parse_points(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_points("# nothing\n").is_err());
    }

    #[test]
    fn invariants() {
        assert!(GridPointSet::new(2, 5, vec![vec![0, 5]]).is_err());
        assert!(GridPointSet::new(2, 5, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(GridPointSet::new(2, 0, vec![]).is_err());
        let c = set(10, &[[4, 2], [0, 6]]).canonical();
        assert_eq!(c, set(5, &[[0, 3], [2, 1]]));
    }
}
