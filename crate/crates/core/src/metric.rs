//! Exact finite metric spaces and the subset calculus built on them:
//! diameters, set distances, r-disjointness, balls, outer and inner
//! neighborhoods, and Lebesgue numbers of covers.
//!
//! All distances are exact non-negative integers. Infinity (the distance to
//! an empty set) is an explicit marker, never a sentinel integer.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Distance involving subsets: an exact finite value, or infinite when one
/// side is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SetDistance {
    Finite(u32),
    Infinite,
}

impl SetDistance {
    /// True when the distance is at least `r` (infinity passes every bound).
    pub fn at_least(self, r: u32) -> bool {
        match self {
            SetDistance::Finite(d) => d >= r,
            SetDistance::Infinite => true,
        }
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            SetDistance::Finite(d) => Some(d),
            SetDistance::Infinite => None,
        }
    }
}

impl fmt::Display for SetDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetDistance::Finite(d) => write!(f, "{d}"),
            SetDistance::Infinite => write!(f, "inf"),
        }
    }
}

/// Dense bitset over the point indices of one carrier space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IdxSet {
    universe: usize,
    blocks: Vec<u64>,
}

impl IdxSet {
    pub fn new(universe: usize) -> Self {
        IdxSet {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.universe);
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &IdxSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &IdxSet) -> IdxSet {
        debug_assert_eq!(self.universe, other.universe);
        IdxSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &IdxSet) -> IdxSet {
        debug_assert_eq!(self.universe, other.universe);
        IdxSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &IdxSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &IdxSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let tz = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + tz)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for IdxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

type MetricFn = Box<dyn Fn(usize, usize) -> u32 + Send + Sync>;

/// A finite point set with an exact integer-valued metric.
///
/// Distance rows are computed lazily and cached; the fill is idempotent, so
/// shared spaces may be queried concurrently.
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    rows: Vec<OnceLock<Box<[u32]>>>,
    metric: MetricFn,
}

impl FiniteMetricSpace {
    /// Builds a space over `labels.len()` points with distances given by `f`.
    ///
    /// `f` must be total, symmetric and satisfy the metric axioms; nothing is
    /// computed up front. Use [`FiniteMetricSpace::check_axioms`] to sweep
    /// the axioms exhaustively.
    pub fn from_fn<F>(labels: Vec<String>, f: F) -> Arc<Self>
    where
        F: Fn(usize, usize) -> u32 + Send + Sync + 'static,
    {
        let n = labels.len();
        Arc::new(FiniteMetricSpace {
            labels,
            rows: (0..n).map(|_| OnceLock::new()).collect(),
            metric: Box::new(f),
        })
    }

    /// Builds a space from an explicit distance matrix.
    pub fn from_matrix(labels: Vec<String>, matrix: Vec<Vec<u32>>) -> Result<Arc<Self>> {
        let n = labels.len();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!(
                "distance matrix must be {n}x{n} to match the point count"
            )));
        }
        let shared = Arc::new(matrix);
        let m = Arc::clone(&shared);
        Ok(Self::from_fn(labels, move |i, j| m[i][j]))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// The cached distance row of point `i`.
    pub fn row(&self, i: usize) -> &[u32] {
        self.rows[i].get_or_init(|| (0..self.len()).map(|j| (self.metric)(i, j)).collect())
    }

    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.row(i)[j]
    }

    /// Indices of rows already materialized (used by persistent caches).
    pub fn materialized_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.rows[i].get().is_some()).collect()
    }

    /// Pre-fills row `i` from an external source. Returns false if the row
    /// was already materialized or the length does not match.
    pub fn prime_row(&self, i: usize, row: Vec<u32>) -> bool {
        row.len() == self.len() && self.rows[i].set(row.into_boxed_slice()).is_ok()
    }

    /// Exhaustive metric-axiom sweep: identity, positivity, symmetry and the
    /// triangle inequality over every triple. Exact, no sampling.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.dist(i, i) != 0 {
                return Err(Error::MetricAxiom {
                    axiom: "d(p,p)=0".into(),
                    witness: format!("point {}", self.labels[i]),
                });
            }
        }
        for i in 0..n {
            let ri = self.row(i);
            for j in (i + 1)..n {
                if ri[j] == 0 {
                    return Err(Error::MetricAxiom {
                        axiom: "d(p,q)=0 implies p=q".into(),
                        witness: format!("({}, {})", self.labels[i], self.labels[j]),
                    });
                }
                if ri[j] != self.dist(j, i) {
                    return Err(Error::MetricAxiom {
                        axiom: "symmetry".into(),
                        witness: format!("({}, {})", self.labels[i], self.labels[j]),
                    });
                }
            }
        }
        // Triangle sweep; saturating addition keeps the inner loop free of
        // overflow branches so it vectorizes, and saturation cannot flip the
        // comparison (a saturated sum dominates every u32 distance).
        for k in 0..n {
            let rk = self.row(k);
            for i in 0..n {
                let ri = self.row(i);
                let a = ri[k];
                let mut bad = 0u32;
                for j in 0..n {
                    bad |= u32::from(ri[j] > a.saturating_add(rk[j]));
                }
                if bad != 0 {
                    let j = (0..n).find(|&j| ri[j] > a.saturating_add(rk[j])).unwrap();
                    return Err(Error::MetricAxiom {
                        axiom: "triangle inequality".into(),
                        witness: format!(
                            "d({p},{q})={} > d({p},{r})+d({r},{q})={}",
                            ri[j],
                            a + rk[j],
                            p = self.labels[i],
                            q = self.labels[j],
                            r = self.labels[k],
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMetricSpace({} points)", self.len())
    }
}

/// Shared handle to a carrier space.
pub type Space = Arc<FiniteMetricSpace>;

/// True when two subsets (or a subset and a family) live on the same space.
pub fn same_space(a: &Space, b: &Space) -> bool {
    Arc::ptr_eq(a, b)
}

/// A subset of one carrier space, stored as an index bitset.
#[derive(Clone)]
pub struct PointSubset {
    space: Space,
    bits: IdxSet,
}

impl PartialEq for PointSubset {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.bits == other.bits
    }
}
impl Eq for PointSubset {}

impl fmt::Debug for PointSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.bits.iter().map(|i| self.space.label(i)))
            .finish()
    }
}

impl PointSubset {
    pub fn empty(space: &Space) -> Self {
        PointSubset {
            bits: IdxSet::new(space.len()),
            space: Arc::clone(space),
        }
    }

    pub fn full(space: &Space) -> Self {
        PointSubset {
            bits: IdxSet::full(space.len()),
            space: Arc::clone(space),
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(space: &Space, indices: I) -> Self {
        let mut bits = IdxSet::new(space.len());
        for i in indices {
            assert!(i < space.len(), "point index out of range");
            bits.insert(i);
        }
        PointSubset {
            bits,
            space: Arc::clone(space),
        }
    }

    pub fn from_bits(space: &Space, bits: IdxSet) -> Self {
        assert_eq!(bits.universe(), space.len());
        PointSubset {
            bits,
            space: Arc::clone(space),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn bits(&self) -> &IdxSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn union(&self, other: &PointSubset) -> PointSubset {
        debug_assert!(same_space(&self.space, &other.space));
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        PointSubset {
            bits,
            space: Arc::clone(&self.space),
        }
    }

    pub fn intersection(&self, other: &PointSubset) -> PointSubset {
        debug_assert!(same_space(&self.space, &other.space));
        PointSubset {
            bits: self.bits.intersection(&other.bits),
            space: Arc::clone(&self.space),
        }
    }

    pub fn difference(&self, other: &PointSubset) -> PointSubset {
        debug_assert!(same_space(&self.space, &other.space));
        PointSubset {
            bits: self.bits.difference(&other.bits),
            space: Arc::clone(&self.space),
        }
    }

    pub fn is_subset(&self, other: &PointSubset) -> bool {
        same_space(&self.space, &other.space) && self.bits.is_subset(&other.bits)
    }

    /// Max pairwise distance; 0 for the empty set and singletons.
    pub fn diameter(&self) -> u32 {
        let members = self.bits.to_vec();
        let mut diam = 0;
        for (a, &i) in members.iter().enumerate() {
            let row = self.space.row(i);
            for &j in &members[a + 1..] {
                diam = diam.max(row[j]);
            }
        }
        diam
    }

    /// Distance from point `x` to this subset; infinite when empty.
    pub fn distance_from_point(&self, x: usize) -> SetDistance {
        let row = self.space.row(x);
        self.bits
            .iter()
            .map(|j| row[j])
            .min()
            .map_or(SetDistance::Infinite, SetDistance::Finite)
    }

    /// Min over cross pairs; infinite if either subset is empty.
    pub fn set_distance(&self, other: &PointSubset) -> Result<SetDistance> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::CarrierMismatch);
        }
        let mut best: Option<u32> = None;
        for i in self.bits.iter() {
            let row = self.space.row(i);
            for j in other.bits.iter() {
                best = Some(best.map_or(row[j], |b| b.min(row[j])));
            }
        }
        Ok(best.map_or(SetDistance::Infinite, SetDistance::Finite))
    }

    /// Points of the carrier at distance < R from this subset. The empty
    /// subset is returned unchanged.
    pub fn outer_neighborhood(&self, r: u32) -> PointSubset {
        if self.is_empty() {
            return self.clone();
        }
        let members = self.bits.to_vec();
        let mut bits = IdxSet::new(self.space.len());
        for x in 0..self.space.len() {
            let row = self.space.row(x);
            if members.iter().any(|&j| row[j] < r) {
                bits.insert(x);
            }
        }
        PointSubset {
            bits,
            space: Arc::clone(&self.space),
        }
    }

    /// Points of this subset at distance >= R from its complement in the
    /// carrier. The whole carrier maps to itself (empty complement).
    pub fn inner_neighborhood(&self, r: u32) -> PointSubset {
        let complement = IdxSet::full(self.space.len()).difference(&self.bits);
        let comp_members = complement.to_vec();
        if comp_members.is_empty() {
            return self.clone();
        }
        let mut bits = IdxSet::new(self.space.len());
        for x in self.bits.iter() {
            let row = self.space.row(x);
            if comp_members.iter().all(|&j| row[j] >= r) {
                bits.insert(x);
            }
        }
        PointSubset {
            bits,
            space: Arc::clone(&self.space),
        }
    }
}

/// The open ball {p : d(center, p) < R}.
pub fn open_ball(space: &Space, center: usize, r: u32) -> PointSubset {
    assert!(center < space.len(), "ball center out of range");
    let row = space.row(center);
    PointSubset::from_indices(space, (0..space.len()).filter(|&p| row[p] < r))
}

/// A finite list of subsets of one carrier space. Duplicates are permitted.
#[derive(Clone)]
pub struct SubsetFamily {
    space: Space,
    pieces: Vec<PointSubset>,
}

/// Outcome of an r-disjointness check, with one violating pair on failure.
#[derive(Debug, Clone)]
pub struct DisjointVerdict {
    pub ok: bool,
    /// (piece index, piece index, their set distance) for a violating pair.
    pub witness: Option<(usize, usize, u32)>,
}

impl SubsetFamily {
    pub fn new(space: &Space, pieces: Vec<PointSubset>) -> Result<Self> {
        if pieces.iter().any(|p| !same_space(p.space(), space)) {
            return Err(Error::CarrierMismatch);
        }
        Ok(SubsetFamily {
            space: Arc::clone(space),
            pieces,
        })
    }

    pub fn empty(space: &Space) -> Self {
        SubsetFamily {
            space: Arc::clone(space),
            pieces: Vec::new(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn pieces(&self) -> &[PointSubset] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn push(&mut self, piece: PointSubset) -> Result<()> {
        if !same_space(piece.space(), &self.space) {
            return Err(Error::CarrierMismatch);
        }
        self.pieces.push(piece);
        Ok(())
    }

    /// Union of all pieces.
    pub fn union(&self) -> PointSubset {
        let mut bits = IdxSet::new(self.space.len());
        for p in &self.pieces {
            bits.union_with(p.bits());
        }
        PointSubset::from_bits(&self.space, bits)
    }

    /// Max piece diameter; 0 for an empty family.
    pub fn max_diameter(&self) -> u32 {
        self.pieces.iter().map(|p| p.diameter()).max().unwrap_or(0)
    }

    /// Pairwise distance >= r for all pieces that differ as sets. Pairs that
    /// are equal as sets count as the same piece and are skipped.
    pub fn is_r_disjoint(&self, r: u32) -> DisjointVerdict {
        for i in 0..self.pieces.len() {
            for j in (i + 1)..self.pieces.len() {
                if self.pieces[i].bits() == self.pieces[j].bits() {
                    continue;
                }
                let d = self.pieces[i]
                    .set_distance(&self.pieces[j])
                    .expect("family pieces share a carrier");
                if !d.at_least(r) {
                    let v = d.finite().expect("a violating distance is finite");
                    return DisjointVerdict {
                        ok: false,
                        witness: Some((i, j, v)),
                    };
                }
            }
        }
        DisjointVerdict { ok: true, witness: None }
    }

    /// Largest integer r such that for every x in `region` some piece
    /// contains the open ball of radius r around x, intersected with the
    /// region. Capped at diameter(region)+1, which any piece covering the
    /// whole region attains.
    ///
    /// Errors if the pieces do not cover the region.
    pub fn lebesgue_number(&self, region: &PointSubset) -> Result<u32> {
        if !same_space(region.space(), &self.space) {
            return Err(Error::CarrierMismatch);
        }
        let covered = self.union();
        let missing = region.difference(&covered);
        if !missing.is_empty() {
            let first = missing.iter().next().unwrap();
            return Err(Error::NotACover {
                missing: missing.len(),
                first: self.space.label(first).to_string(),
            });
        }
        let cap = region.diameter() + 1;
        // Per piece, the region points outside it; a point x can use piece U
        // at radius d(x, region minus U).
        let complements: Vec<Vec<usize>> = self
            .pieces
            .iter()
            .map(|u| region.difference(u).bits().to_vec())
            .collect();
        let mut lebesgue = cap;
        for x in region.iter() {
            let row = self.space.row(x);
            let mut best = 0u32;
            for comp in &complements {
                let r_x = comp.iter().map(|&j| row[j]).min().map_or(cap, |d| d.min(cap));
                best = best.max(r_x);
                if best == cap {
                    break;
                }
            }
            lebesgue = lebesgue.min(best);
            if lebesgue == 0 {
                break;
            }
        }
        Ok(lebesgue)
    }
}

impl fmt::Debug for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pieces.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z restricted to [lo, hi] with the word metric |a - b|.
    fn z_window(lo: i64, hi: i64) -> Space {
        let labels = (lo..=hi).map(|v| v.to_string()).collect();
        FiniteMetricSpace::from_fn(labels, move |i, j| {
            (i as i64 - j as i64).unsigned_abs() as u32
        })
    }

    /// Z/mZ with the quotient word metric min(k, m-k).
    fn z_mod(m: u32) -> Space {
        let labels = (0..m).map(|v| v.to_string()).collect();
        FiniteMetricSpace::from_fn(labels, move |i, j| {
            let d = (i as i64 - j as i64).unsigned_abs() as u32 % m;
            d.min(m - d)
        })
    }

    fn interval(space: &Space, lo: i64, a: i64, b: i64) -> PointSubset {
        PointSubset::from_indices(space, (a..=b).map(|v| (v - lo) as usize))
    }

    #[test]
    fn diameter_examples() {
        let z = z_window(-10, 10);
        let s = interval(&z, -10, -2, 2);
        assert_eq!(s.diameter(), 4);
        assert_eq!(PointSubset::empty(&z).diameter(), 0);
        // All six points of Z/6Z (the closed ball of radius 3): diameter 3.
        let q = z_mod(6);
        assert_eq!(PointSubset::full(&q).diameter(), 3);
    }

    #[test]
    fn set_distance_examples() {
        let z = z_window(0, 10);
        let a = interval(&z, 0, 0, 1);
        let b = interval(&z, 0, 5, 6);
        assert_eq!(a.set_distance(&b).unwrap(), SetDistance::Finite(4));
        assert_eq!(a.set_distance(&a).unwrap(), SetDistance::Finite(0));
        let q = z_mod(5);
        let x = PointSubset::from_indices(&q, [0]);
        let y = PointSubset::from_indices(&q, [3]);
        assert_eq!(x.set_distance(&y).unwrap(), SetDistance::Finite(2));
        assert_eq!(
            x.set_distance(&PointSubset::empty(&q)).unwrap(),
            SetDistance::Infinite
        );
    }

    #[test]
    fn set_distance_carrier_mismatch() {
        let a = z_window(0, 3);
        let b = z_window(0, 3);
        let x = PointSubset::full(&a);
        let y = PointSubset::full(&b);
        assert!(matches!(x.set_distance(&y), Err(Error::CarrierMismatch)));
    }

    #[test]
    fn r_disjoint_examples() {
        let z = z_window(0, 10);
        let fam = SubsetFamily::new(
            &z,
            vec![interval(&z, 0, 0, 1), interval(&z, 0, 5, 6)],
        )
        .unwrap();
        assert!(fam.is_r_disjoint(4).ok);
        let v = fam.is_r_disjoint(5);
        assert!(!v.ok);
        assert_eq!(v.witness, Some((0, 1, 4)));
        let single = SubsetFamily::new(&z, vec![interval(&z, 0, 0, 1)]).unwrap();
        assert!(single.is_r_disjoint(1_000).ok);
    }

    #[test]
    fn r_disjoint_skips_duplicate_pieces() {
        let z = z_window(0, 10);
        let p = interval(&z, 0, 2, 4);
        let fam = SubsetFamily::new(&z, vec![p.clone(), p]).unwrap();
        assert!(fam.is_r_disjoint(7).ok);
    }

    #[test]
    fn open_ball_examples() {
        let z = z_window(-10, 10);
        let b = open_ball(&z, 10, 4); // center 0 sits at index 10
        assert_eq!(b, interval(&z, -10, -3, 3));
        assert_eq!(open_ball(&z, 10, 1).len(), 1);
        let q = z_mod(6);
        let b = open_ball(&q, 0, 3);
        assert_eq!(b, PointSubset::from_indices(&q, [0, 1, 2, 4, 5]));
    }

    #[test]
    fn outer_neighborhood_examples() {
        let z = z_window(-5, 5);
        let s = PointSubset::from_indices(&z, [5]); // the point 0
        assert_eq!(s.outer_neighborhood(2), interval(&z, -5, -1, 1));
        assert_eq!(s.outer_neighborhood(1), s);
        let z2 = z_window(0, 11);
        let s = interval(&z2, 0, 0, 5);
        assert_eq!(s.outer_neighborhood(3), interval(&z2, 0, 0, 7));
        let empty = PointSubset::empty(&z2);
        assert_eq!(empty.outer_neighborhood(4), empty);
    }

    #[test]
    fn inner_neighborhood_examples() {
        let z = z_window(0, 10);
        let s = interval(&z, 0, 0, 5);
        assert_eq!(s.inner_neighborhood(2), interval(&z, 0, 0, 4));
        let whole = PointSubset::full(&z);
        assert_eq!(whole.inner_neighborhood(100), whole);
        let z2 = z_window(0, 11);
        let s = interval(&z2, 0, 0, 7);
        assert_eq!(s.inner_neighborhood(3), interval(&z2, 0, 0, 5));
    }

    #[test]
    fn lebesgue_examples() {
        let z = z_window(0, 9);
        let region = PointSubset::full(&z);
        let cover = SubsetFamily::new(
            &z,
            vec![interval(&z, 0, 0, 5), interval(&z, 0, 4, 9)],
        )
        .unwrap();
        assert_eq!(cover.lebesgue_number(&region).unwrap(), 2);

        let whole = SubsetFamily::new(&z, vec![region.clone()]).unwrap();
        assert_eq!(whole.lebesgue_number(&region).unwrap(), region.diameter() + 1);

        let z2 = z_window(0, 11);
        let region2 = PointSubset::full(&z2);
        let cover2 = SubsetFamily::new(
            &z2,
            vec![interval(&z2, 0, 0, 7), interval(&z2, 0, 4, 11)],
        )
        .unwrap();
        assert_eq!(cover2.lebesgue_number(&region2).unwrap(), 3);
    }

    #[test]
    fn lebesgue_rejects_non_cover() {
        let z = z_window(0, 9);
        let region = PointSubset::full(&z);
        let partial = SubsetFamily::new(&z, vec![interval(&z, 0, 0, 5)]).unwrap();
        assert!(matches!(
            partial.lebesgue_number(&region),
            Err(Error::NotACover { .. })
        ));
    }

    #[test]
    fn axioms_pass_on_honest_spaces() {
        z_window(-20, 20).check_axioms().unwrap();
        z_mod(17).check_axioms().unwrap();
    }

    #[test]
    fn axioms_catch_violations() {
        let bad = FiniteMetricSpace::from_matrix(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 1, 0]],
        )
        .unwrap();
        assert!(matches!(
            bad.check_axioms(),
            Err(Error::MetricAxiom { axiom, .. }) if axiom == "triangle inequality"
        ));
        let asym = FiniteMetricSpace::from_matrix(
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![2, 0]],
        )
        .unwrap();
        assert!(matches!(asym.check_axioms(), Err(Error::MetricAxiom { .. })));
    }
}
