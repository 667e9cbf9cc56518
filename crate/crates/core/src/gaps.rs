//! Ordered set of points on a circle of integer circumference together with
//! the multiset of gaps between circularly consecutive points.
//!
//! Inserting a point replaces one gap by two, so the largest gap (and the
//! leftmost gap attaining it) stays available in `O(log n)` after every
//! insertion. Duplicate insertions are ignored; zero-length gaps never exist.

use std::collections::{BTreeMap, BTreeSet};

use crate::numeric::cyclic_distance;

#[derive(Clone, Debug)]
pub struct CyclicGaps {
    modulus: u64,
    points: BTreeSet<u64>,
    // gap length -> start positions of gaps with that length
    gaps: BTreeMap<u64, BTreeSet<u64>>,
}

/// A gap `(start, start + len)` on the circle, `len` in `(0, modulus]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gap {
    pub start: u64,
    pub len: u64,
}

impl CyclicGaps {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus > 0, "circle circumference must be positive");
        CyclicGaps {
            modulus,
            points: BTreeSet::new(),
            gaps: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, y: u64) -> bool {
        self.points.contains(&y)
    }

    pub fn points(&self) -> impl Iterator<Item = u64> + '_ {
        self.points.iter().copied()
    }

    /// Inserts `y` (reduced mod the circumference). Returns whether it was new.
    pub fn insert(&mut self, y: u64) -> bool {
        let y = y % self.modulus;
        if self.points.contains(&y) {
            return false;
        }
        if self.points.is_empty() {
            self.points.insert(y);
            self.add_gap(y, self.modulus);
            return true;
        }
        let containing = self.gap_around(y);
        self.remove_gap(containing);
        let left = cyclic_distance(containing.start, y, self.modulus);
        self.add_gap(containing.start, left);
        self.add_gap(y, containing.len - left);
        self.points.insert(y);
        true
    }

    /// The gap whose open interior contains `y`; `y` must not be a point.
    /// On an empty circle this is the full gap starting at 0.
    pub fn gap_around(&self, y: u64) -> Gap {
        let y = y % self.modulus;
        debug_assert!(!self.points.contains(&y));
        let pred = self
            .points
            .range(..y)
            .next_back()
            .or_else(|| self.points.iter().next_back());
        let Some(&start) = pred else {
            return Gap { start: 0, len: self.modulus };
        };
        let succ = self
            .points
            .range(y..)
            .next()
            .or_else(|| self.points.iter().next())
            .copied()
            .unwrap_or(start);
        Gap {
            start,
            len: cyclic_distance(start, succ, self.modulus),
        }
    }

    /// Largest gap length; the full circumference when at most one point is present.
    pub fn max_gap(&self) -> u64 {
        self.gaps
            .last_key_value()
            .map_or(self.modulus, |(&len, _)| len)
    }

    /// The largest gap with the smallest start. With no points this is the
    /// full circle starting at 0.
    pub fn leftmost_max_gap(&self) -> Gap {
        match self.gaps.last_key_value() {
            Some((&len, starts)) => Gap {
                start: *starts.first().expect("gap bucket never empty"),
                len,
            },
            None => Gap { start: 0, len: self.modulus },
        }
    }

    /// `(length, multiplicity)` pairs in decreasing length order.
    pub fn histogram(&self) -> Vec<(u64, u64)> {
        self.gaps
            .iter()
            .rev()
            .map(|(&len, starts)| (len, starts.len() as u64))
            .collect()
    }

    /// Gaps in circular order starting from the smallest point.
    pub fn gaps_in_order(&self) -> Vec<Gap> {
        let pts: Vec<u64> = self.points.iter().copied().collect();
        gaps_of_sorted(&pts, self.modulus)
    }

    fn add_gap(&mut self, start: u64, len: u64) {
        debug_assert!(len > 0);
        self.gaps.entry(len).or_default().insert(start);
    }

    fn remove_gap(&mut self, gap: Gap) {
        let bucket = self.gaps.get_mut(&gap.len).expect("gap present");
        let removed = bucket.remove(&gap.start);
        debug_assert!(removed, "gap {gap:?} missing");
        if bucket.is_empty() {
            self.gaps.remove(&gap.len);
        }
    }
}

/// Cyclic gaps of sorted, distinct points on a circle of circumference `modulus`.
pub fn gaps_of_sorted(points: &[u64], modulus: u64) -> Vec<Gap> {
    match points.len() {
        0 => vec![],
        1 => vec![Gap { start: points[0], len: modulus }],
        k => (0..k)
            .map(|i| Gap {
                start: points[i],
                len: cyclic_distance(points[i], points[(i + 1) % k], modulus),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn recompute(values: &[u64], modulus: u64) -> Gap {
        let mut v: Vec<u64> = values.iter().map(|y| y % modulus).collect();
        v.sort_unstable();
        v.dedup();
        let gaps = gaps_of_sorted(&v, modulus);
        gaps.into_iter()
            .min_by(|a, b| b.len.cmp(&a.len).then(a.start.cmp(&b.start)))
            .unwrap_or(Gap { start: 0, len: modulus })
    }

    #[test]
    fn thirteen_five() {
        let mut g = CyclicGaps::new(13);
        assert_eq!(g.max_gap(), 13);
        for (k, expect) in [(0, 13), (5, 8), (10, 5), (2, 5)] {
            g.insert(k);
            assert_eq!(g.max_gap(), expect);
        }
        assert_eq!(g.histogram(), vec![(5, 1), (3, 2), (2, 1)]);
        assert_eq!(g.gap_around(7), Gap { start: 5, len: 5 });
        assert!(!g.insert(15));
    }

    #[test]
    fn single_point_is_full_circle() {
        let mut g = CyclicGaps::new(7);
        g.insert(3);
        assert_eq!(g.leftmost_max_gap(), Gap { start: 3, len: 7 });
        assert_eq!(g.gap_around(1), Gap { start: 3, len: 7 });
    }

    proptest! {
        #[test]
        fn matches_recomputation(modulus in 1u64..60, ys in proptest::collection::vec(0u64..200, 0..40)) {
            let mut g = CyclicGaps::new(modulus);
            for i in 0..ys.len() {
                g.insert(ys[i]);
                prop_assert_eq!(g.leftmost_max_gap(), recompute(&ys[..=i], modulus));
                let total: u64 = g.histogram().iter().map(|(d, a)| d * a).sum();
                prop_assert_eq!(total, modulus);
            }
        }
    }
}
