//! Group models with proper word-length functions: integer lattices with a
//! BFS window, finite table/permutation groups, subgroups, and the
//! element-indexed metric spaces they induce.

pub mod finite;
pub mod hnf;
pub mod lattice;
pub mod quotient;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, PointSubset, Space};

pub use finite::FiniteGroup;
pub use hnf::LatticeBasis;
pub use lattice::LatticeGroup;
pub use quotient::{associated_family, AssociatedFamily, QuotientModel, Subquotient};

/// A group element: a lattice vector or an index into a finite group.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Vector(Vec<i64>),
    Idx(usize),
}

impl Elem {
    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            Elem::Vector(v) => Some(v),
            Elem::Idx(_) => None,
        }
    }

    pub fn as_idx(&self) -> Option<usize> {
        match self {
            Elem::Idx(i) => Some(*i),
            Elem::Vector(_) => None,
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Vector(v) => {
                let coords: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", coords.join(","))
            }
            Elem::Idx(i) => write!(f, "#{i}"),
        }
    }
}

/// A group with designated generators and a word-length oracle.
#[derive(Clone)]
pub enum GroupModel {
    Lattice(Arc<LatticeGroup>),
    Finite(Arc<FiniteGroup>),
}

impl fmt::Debug for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupModel({})", self.name())
    }
}

impl GroupModel {
    pub fn name(&self) -> &str {
        match self {
            GroupModel::Lattice(g) => g.name(),
            GroupModel::Finite(g) => g.name(),
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            GroupModel::Lattice(g) => Elem::Vector(vec![0; g.rank()]),
            GroupModel::Finite(g) => Elem::Idx(g.identity()),
        }
    }

    pub fn is_identity(&self, e: &Elem) -> bool {
        *e == self.identity()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (GroupModel::Lattice(_), Elem::Vector(x), Elem::Vector(y)) => {
                Elem::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            (GroupModel::Finite(g), Elem::Idx(x), Elem::Idx(y)) => Elem::Idx(g.mul(*x, *y)),
            _ => panic!("element kind does not match the group model"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (self, a) {
            (GroupModel::Lattice(_), Elem::Vector(x)) => {
                Elem::Vector(x.iter().map(|p| -p).collect())
            }
            (GroupModel::Finite(g), Elem::Idx(x)) => Elem::Idx(g.inv(*x)),
            _ => panic!("element kind does not match the group model"),
        }
    }

    /// d(a, b) = l(a^{-1} b), the left-invariant word metric.
    pub fn distance(&self, a: &Elem, b: &Elem) -> Result<u32> {
        self.word_length(&self.mul(&self.inv(a), b))
    }

    pub fn generators(&self) -> Vec<Elem> {
        match self {
            GroupModel::Lattice(g) => g.generators().iter().cloned().map(Elem::Vector).collect(),
            GroupModel::Finite(g) => g.generators().iter().map(|&i| Elem::Idx(i)).collect(),
        }
    }

    /// The BFS budget. Finite models are always fully enumerable.
    pub fn window(&self) -> u32 {
        match self {
            GroupModel::Lattice(g) => g.window(),
            GroupModel::Finite(_) => u32::MAX / 4,
        }
    }

    pub fn label(&self, e: &Elem) -> String {
        match (self, e) {
            (GroupModel::Finite(g), Elem::Idx(i)) => g.label(*i).to_string(),
            _ => format!("{e:?}"),
        }
    }

    /// Length of the shortest generator word for `e`; 0 iff identity.
    pub fn word_length(&self, e: &Elem) -> Result<u32> {
        match (self, e) {
            (GroupModel::Lattice(g), Elem::Vector(v)) => g.word_length(v),
            (GroupModel::Finite(g), Elem::Idx(i)) => Ok(g.length(*i)),
            _ => panic!("element kind does not match the group model"),
        }
    }

    /// All elements of length <= bound, sorted by (length, element order).
    pub fn elements_up_to(&self, bound: u32) -> Result<Vec<(u32, Elem)>> {
        match self {
            GroupModel::Lattice(g) => Ok(g
                .elements_up_to(bound)?
                .into_iter()
                .map(|(d, v)| (d, Elem::Vector(v)))
                .collect()),
            GroupModel::Finite(g) => {
                let mut out: Vec<(u32, Elem)> = (0..g.order())
                    .filter(|&i| g.length(i) <= bound)
                    .map(|i| (g.length(i), Elem::Idx(i)))
                    .collect();
                out.sort();
                Ok(out)
            }
        }
    }

    /// The open ball {e : l(e) < R} at the identity.
    pub fn ball(&self, r: u32) -> Result<Vec<Elem>> {
        if r == 0 {
            return Ok(Vec::new());
        }
        Ok(self
            .elements_up_to(r - 1)?
            .into_iter()
            .map(|(_, e)| e)
            .collect())
    }

    /// The metric space on an explicit element window, with the restricted
    /// (subspace) word metric. Fails loudly when the window budget cannot
    /// resolve some pairwise distance.
    pub fn space_over(&self, elems: Vec<Elem>) -> Result<GroupSpace> {
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            self.validate_elem(e)?;
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate element {} in space window",
                    self.label(e)
                )));
            }
        }
        let labels: Vec<String> = elems.iter().map(|e| self.label(e)).collect();
        let elems = Arc::new(elems);
        let space: Space = match self {
            GroupModel::Lattice(g) if g.has_standard_generators() => {
                let elems = Arc::clone(&elems);
                FiniteMetricSpace::from_fn(labels, move |i, j| {
                    let (a, b) = (&elems[i], &elems[j]);
                    match (a, b) {
                        (Elem::Vector(x), Elem::Vector(y)) => x
                            .iter()
                            .zip(y)
                            .map(|(p, q)| (p - q).unsigned_abs() as u32)
                            .sum(),
                        _ => unreachable!("lattice space holds vectors"),
                    }
                })
            }
            GroupModel::Lattice(_) => {
                // BFS-backed lengths: materialize the matrix eagerly so any
                // window exhaustion surfaces here, not mid-query.
                let n = elems.len();
                let mut matrix = vec![vec![0u32; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let d = self.distance(&elems[i], &elems[j])?;
                        matrix[i][j] = d;
                        matrix[j][i] = d;
                    }
                }
                FiniteMetricSpace::from_matrix(labels, matrix)?
            }
            GroupModel::Finite(g) => {
                let g = Arc::clone(g);
                let elems = Arc::clone(&elems);
                FiniteMetricSpace::from_fn(labels, move |i, j| {
                    match (&elems[i], &elems[j]) {
                        (Elem::Idx(a), Elem::Idx(b)) => g.length(g.mul(g.inv(*a), *b)),
                        _ => unreachable!("finite space holds indices"),
                    }
                })
            }
        };
        Ok(GroupSpace {
            model: self.clone(),
            space,
            index: Arc::new(index),
            elems,
        })
    }

    /// The metric space on the open ball of the given radius.
    pub fn induced_space(&self, radius: u32) -> Result<GroupSpace> {
        self.space_over(self.ball(radius)?)
    }

    fn validate_elem(&self, e: &Elem) -> Result<()> {
        let ok = match (self, e) {
            (GroupModel::Lattice(g), Elem::Vector(v)) => v.len() == g.rank(),
            (GroupModel::Finite(g), Elem::Idx(i)) => *i < g.order(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "element {e:?} does not belong to {}",
                self.name()
            )))
        }
    }
}

/// True when two model handles point at the same underlying group.
pub fn same_model(a: &GroupModel, b: &GroupModel) -> bool {
    match (a, b) {
        (GroupModel::Lattice(x), GroupModel::Lattice(y)) => Arc::ptr_eq(x, y),
        (GroupModel::Finite(x), GroupModel::Finite(y)) => Arc::ptr_eq(x, y),
        _ => false,
    }
}

/// A metric space whose points are group elements, remembering the
/// correspondence in both directions.
#[derive(Clone)]
pub struct GroupSpace {
    model: GroupModel,
    space: Space,
    elems: Arc<Vec<Elem>>,
    index: Arc<HashMap<Elem, usize>>,
}

impl fmt::Debug for GroupSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpace({}, {} points)", self.model.name(), self.elems.len())
    }
}

impl GroupSpace {
    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elems[i]
    }

    pub fn elems(&self) -> &[Elem] {
        &self.elems
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Subset from explicit elements; any element outside the window is an
    /// error.
    pub fn subset_from_elems<'a, I: IntoIterator<Item = &'a Elem>>(
        &self,
        elems: I,
    ) -> Result<PointSubset> {
        let mut indices = Vec::new();
        for e in elems {
            match self.index_of(e) {
                Some(i) => indices.push(i),
                None => {
                    return Err(Error::Invalid(format!(
                        "element {} is outside the space window",
                        self.model.label(e)
                    )))
                }
            }
        }
        Ok(PointSubset::from_indices(&self.space, indices))
    }

    /// Right-translates a subset by `h`. Returns the translated points that
    /// stay inside the window and whether any escaped it.
    pub fn translate_right(&self, subset: &PointSubset, h: &Elem) -> (PointSubset, bool) {
        let mut indices = Vec::new();
        let mut escaped = false;
        for i in subset.iter() {
            let moved = self.model.mul(&self.elems[i], h);
            match self.index_of(&moved) {
                Some(j) => indices.push(j),
                None => escaped = true,
            }
        }
        (PointSubset::from_indices(&self.space, indices), escaped)
    }
}

/// How a subgroup of a model is presented.
#[derive(Clone)]
pub enum SubgroupRepr {
    /// Sublattice of Z^n via a triangular basis.
    Sublattice(Arc<LatticeBasis>),
    /// Sorted element indices inside a finite parent.
    Members(Arc<Vec<usize>>),
}

/// A subgroup of a [`GroupModel`]: a decidable membership predicate plus an
/// enumerator for members within a word-length radius.
#[derive(Clone)]
pub struct Subgroup {
    parent: GroupModel,
    repr: SubgroupRepr,
    name: String,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({} <= {})", self.name, self.parent.name())
    }
}

impl Subgroup {
    /// Sublattice of a lattice parent, given by basis rows.
    pub fn sublattice(parent: &GroupModel, rows: Vec<Vec<i64>>, name: &str) -> Result<Subgroup> {
        let GroupModel::Lattice(g) = parent else {
            return Err(Error::Invalid("sublattice subgroups need a lattice parent".into()));
        };
        let basis = LatticeBasis::new(g.rank(), rows)?;
        Ok(Subgroup {
            parent: parent.clone(),
            repr: SubgroupRepr::Sublattice(Arc::new(basis)),
            name: name.to_string(),
        })
    }

    /// Explicit member list inside a finite parent; must be closed.
    pub fn members(parent: &GroupModel, members: Vec<usize>, name: &str) -> Result<Subgroup> {
        let GroupModel::Finite(g) = parent else {
            return Err(Error::Invalid("member-list subgroups need a finite parent".into()));
        };
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        if !g.is_subgroup(&members) {
            return Err(Error::Invalid(format!(
                "{name}: member list is not a subgroup of {}",
                g.name()
            )));
        }
        Ok(Subgroup {
            parent: parent.clone(),
            repr: SubgroupRepr::Members(Arc::new(members)),
            name: name.to_string(),
        })
    }

    /// The whole parent as a subgroup of itself.
    pub fn whole(parent: &GroupModel, name: &str) -> Result<Subgroup> {
        match parent {
            GroupModel::Lattice(g) => {
                let rows = (0..g.rank())
                    .map(|i| {
                        let mut e = vec![0i64; g.rank()];
                        e[i] = 1;
                        e
                    })
                    .collect();
                Self::sublattice(parent, rows, name)
            }
            GroupModel::Finite(g) => Self::members(parent, (0..g.order()).collect(), name),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parent(&self) -> &GroupModel {
        &self.parent
    }

    pub fn repr(&self) -> &SubgroupRepr {
        &self.repr
    }

    pub fn as_sublattice(&self) -> Option<&LatticeBasis> {
        match &self.repr {
            SubgroupRepr::Sublattice(b) => Some(b),
            SubgroupRepr::Members(_) => None,
        }
    }

    pub fn as_members(&self) -> Option<&[usize]> {
        match &self.repr {
            SubgroupRepr::Members(m) => Some(m),
            SubgroupRepr::Sublattice(_) => None,
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (&self.repr, e) {
            (SubgroupRepr::Sublattice(b), Elem::Vector(v)) => b.contains(v),
            (SubgroupRepr::Members(m), Elem::Idx(i)) => m.binary_search(i).is_ok(),
            _ => false,
        }
    }

    /// Members with word length <= bound, sorted by (length, element order).
    pub fn enumerate_within(&self, bound: u32) -> Result<Vec<Elem>> {
        Ok(self
            .parent
            .elements_up_to(bound)?
            .into_iter()
            .map(|(_, e)| e)
            .filter(|e| self.contains(e))
            .collect())
    }

    /// Index in the parent, when finite.
    pub fn index(&self) -> Option<u64> {
        match &self.repr {
            SubgroupRepr::Sublattice(b) => b.index(),
            SubgroupRepr::Members(m) => {
                let GroupModel::Finite(g) = &self.parent else { unreachable!() };
                Some((g.order() / m.len()) as u64)
            }
        }
    }

    /// Normality of the subgroup in its parent. Lattices are abelian, so
    /// the check is immediate; finite parents are swept exactly.
    pub fn check_normal(&self) -> Result<()> {
        match (&self.repr, &self.parent) {
            (SubgroupRepr::Sublattice(_), _) => Ok(()),
            (SubgroupRepr::Members(m), GroupModel::Finite(g)) => {
                for x in 0..g.order() {
                    for &n in m.iter() {
                        let conj = g.mul(g.mul(x, n), g.inv(x));
                        if m.binary_search(&conj).is_err() {
                            return Err(Error::NotNormal {
                                witness: format!("{}^{}", g.label(n), g.label(x)),
                            });
                        }
                    }
                }
                Ok(())
            }
            _ => unreachable!("representation matches the parent kind"),
        }
    }

    /// True when every member of `inner` (as far as representable) lies in
    /// this subgroup. For sublattices this is exact via basis rows.
    pub fn contains_subgroup(&self, inner: &Subgroup) -> bool {
        match (&self.repr, &inner.repr) {
            (SubgroupRepr::Sublattice(_), SubgroupRepr::Sublattice(inner_b)) => inner_b
                .rows()
                .iter()
                .all(|row| self.contains(&Elem::Vector(row.clone()))),
            (SubgroupRepr::Members(_), SubgroupRepr::Members(inner_m)) => inner_m
                .iter()
                .all(|&i| self.contains(&Elem::Idx(i))),
            _ => false,
        }
    }
}

/// A homomorphism between two group models, given by a total map.
pub struct Homomorphism {
    pub domain: GroupModel,
    pub codomain: GroupModel,
    map: Box<dyn Fn(&Elem) -> Elem + Send + Sync>,
    pub name: String,
}

impl Homomorphism {
    pub fn new<F>(domain: GroupModel, codomain: GroupModel, name: &str, map: F) -> Self
    where
        F: Fn(&Elem) -> Elem + Send + Sync + 'static,
    {
        Homomorphism {
            domain,
            codomain,
            map: Box::new(map),
            name: name.to_string(),
        }
    }

    pub fn apply(&self, e: &Elem) -> Elem {
        (self.map)(e)
    }
}

/// Outcome of a bornologous-criterion check, with a witness on failure.
#[derive(Debug, Clone)]
pub struct BornologousVerdict {
    pub ok: bool,
    /// (radius R, offending element) with l(phi(g)) >= rho_plus(R).
    pub witness: Option<(u32, Elem)>,
}

/// Checks phi(B(1,R)) inside B(1, rho_plus(R)) for every R <= r_max.
pub fn bornologous_check(
    phi: &Homomorphism,
    rho_plus: &dyn Fn(u32) -> u32,
    r_max: u32,
) -> Result<BornologousVerdict> {
    let elems = phi.domain.elements_up_to(r_max.saturating_sub(1))?;
    for r in 1..=r_max {
        for (len, g) in &elems {
            if *len >= r {
                break;
            }
            let image_len = phi.codomain.word_length(&phi.apply(g))?;
            if image_len >= rho_plus(r) {
                return Ok(BornologousVerdict {
                    ok: false,
                    witness: Some((r, g.clone())),
                });
            }
        }
    }
    Ok(BornologousVerdict { ok: true, witness: None })
}
