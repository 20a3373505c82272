//! Quotient models G/N with the quotient word metric, materialized as
//! finite coset groups.
//!
//! The quotient length is computed on two independent routes: BFS on the
//! quotient Cayley graph over generator images, and the brute-force coset
//! minimum of the parent length. For parents whose metric is the native
//! word length the two must agree and construction fails if they do not;
//! the coset minimum stays available afterwards as `coset_min_oracle`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupModel, GroupSpace, LatticeBasis, Subgroup};

/// Materialization cap for quotient orders.
const QUOTIENT_CAP: u64 = 65_536;

/// A finite quotient of a group model by a normal subgroup.
pub struct QuotientModel {
    parent: GroupModel,
    normal: Subgroup,
    group: Arc<FiniteGroup>,
    reps: Vec<Elem>,
    proj: Projection,
}

enum Projection {
    Lattice {
        basis: Arc<LatticeBasis>,
        residue_to_coset: HashMap<Vec<i64>, usize>,
    },
    Finite {
        coset_of: Vec<usize>,
    },
}

impl std::fmt::Debug for QuotientModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuotientModel({})", self.group.name())
    }
}

/// Outcome of a ball-pushforward comparison, with the symmetric difference
/// as witness on failure.
#[derive(Debug, Clone)]
pub struct BallPushforwardVerdict {
    pub ok: bool,
    /// Cosets in the quotient ball missing from the projected parent ball.
    pub missing_from_image: Vec<usize>,
    /// Projected cosets that are not in the quotient ball.
    pub extra_in_image: Vec<usize>,
}

impl QuotientModel {
    /// Builds the quotient of `parent` by `normal`, checking normality and
    /// finiteness of the index, enumerating all cosets, and cross-checking
    /// the two quotient-length routes.
    pub fn new(parent: &GroupModel, normal: &Subgroup) -> Result<Self> {
        normal.check_normal()?;
        match parent {
            GroupModel::Lattice(_) => Self::new_lattice(parent, normal),
            GroupModel::Finite(_) => Self::new_finite(parent, normal),
        }
    }

    fn new_lattice(parent: &GroupModel, normal: &Subgroup) -> Result<Self> {
        let basis = normal
            .as_sublattice()
            .ok_or_else(|| Error::Invalid("lattice quotient needs a sublattice".into()))?;
        let index = basis.index().ok_or_else(|| Error::InfiniteIndex {
            context: format!("{} / {}", parent.name(), normal.name()),
        })?;
        if index > QUOTIENT_CAP {
            return Err(Error::CapExceeded {
                what: format!("quotient {} / {}", parent.name(), normal.name()),
                cap: QUOTIENT_CAP as usize,
                actual: index as usize,
            });
        }
        let index = index as usize;
        let basis = Arc::new(basis.clone());

        // Route (a): BFS on the quotient Cayley graph over residues.
        let gen_elems = parent.generators();
        let identity_residue = basis.reduce(match &parent.identity() {
            Elem::Vector(v) => v,
            _ => unreachable!(),
        });
        let mut bfs_len: HashMap<Vec<i64>, u32> = HashMap::new();
        bfs_len.insert(identity_residue.clone(), 0);
        let mut frontier = vec![identity_residue];
        let mut depth = 0;
        while !frontier.is_empty() && bfs_len.len() < index {
            depth += 1;
            let mut next = Vec::new();
            for r in &frontier {
                for g in &gen_elems {
                    let Elem::Vector(gv) = g else { unreachable!() };
                    let moved: Vec<i64> = r.iter().zip(gv).map(|(a, b)| a + b).collect();
                    let moved = basis.reduce(&moved);
                    if !bfs_len.contains_key(&moved) {
                        bfs_len.insert(moved.clone(), depth);
                        next.push(moved);
                    }
                }
            }
            frontier = next;
        }
        if bfs_len.len() < index {
            return Err(Error::NotGenerating {
                witness: format!(
                    "only {} of {} cosets reachable from the generator images",
                    bfs_len.len(),
                    index
                ),
            });
        }

        // Route (b): sweep the parent ball in length order; the first visit
        // of each residue is its BFS-minimal representative and realizes the
        // coset minimum length.
        let mut oracle: HashMap<Vec<i64>, (u32, Vec<i64>)> = HashMap::new();
        let mut bound = 4u32.min(parent.window());
        loop {
            oracle.clear();
            for (len, e) in parent.elements_up_to(bound)? {
                let Elem::Vector(v) = &e else { unreachable!() };
                let residue = basis.reduce(v);
                oracle.entry(residue).or_insert((len, v.clone()));
            }
            if oracle.len() == index {
                break;
            }
            if bound >= parent.window() {
                return Err(Error::OutOfWindow {
                    needed: bound + 1,
                    window: parent.window(),
                    context: format!(
                        "sweeping coset minima of {} / {}: {} of {index} cosets met",
                        parent.name(),
                        normal.name(),
                        oracle.len()
                    ),
                });
            }
            bound = (bound * 2).min(parent.window());
        }

        for (residue, &(olen, _)) in &oracle {
            let blen = bfs_len[residue];
            if olen != blen {
                return Err(Error::CrossCheckFailed {
                    context: format!("quotient length in {} / {}", parent.name(), normal.name()),
                    witness: format!(
                        "coset of {residue:?}: Cayley BFS gives {blen}, coset minimum gives {olen}"
                    ),
                });
            }
        }

        // Canonical coset order: by (length, representative).
        let mut order: Vec<(u32, Vec<i64>, Vec<i64>)> = oracle
            .into_iter()
            .map(|(residue, (len, rep))| (len, rep, residue))
            .collect();
        order.sort();
        let mut residue_to_coset = HashMap::new();
        let mut reps = Vec::new();
        let mut lengths = Vec::new();
        for (c, (len, rep, residue)) in order.into_iter().enumerate() {
            residue_to_coset.insert(residue, c);
            reps.push(Elem::Vector(rep));
            lengths.push(len);
        }

        let coset_of_vec = |v: &[i64]| residue_to_coset[&basis.reduce(v)];
        let labels: Vec<String> = reps
            .iter()
            .map(|r| format!("[{}]", parent.label(r)))
            .collect();
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|a| {
                reps.iter()
                    .map(|b| {
                        let (Elem::Vector(x), Elem::Vector(y)) = (a, b) else { unreachable!() };
                        let sum: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                        coset_of_vec(&sum)
                    })
                    .collect()
            })
            .collect();
        let image_gens: Vec<usize> = gen_elems
            .iter()
            .map(|g| {
                let Elem::Vector(v) = g else { unreachable!() };
                coset_of_vec(v)
            })
            .collect();
        let name = format!("{}/{}", parent.name(), normal.name());
        let group = FiniteGroup::from_table(&name, labels, table, image_gens)?;
        // from_table recomputed route (a) over the coset table; it must
        // agree with the sweep.
        if group.lengths() != lengths.as_slice() {
            return Err(Error::CrossCheckFailed {
                context: format!("quotient table lengths of {name}"),
                witness: "table BFS disagrees with the coset sweep".into(),
            });
        }
        Ok(QuotientModel {
            parent: parent.clone(),
            normal: normal.clone(),
            group,
            reps,
            proj: Projection::Lattice {
                basis,
                residue_to_coset,
            },
        })
    }

    fn new_finite(parent: &GroupModel, normal: &Subgroup) -> Result<Self> {
        let GroupModel::Finite(g) = parent else { unreachable!() };
        let members = normal
            .as_members()
            .ok_or_else(|| Error::Invalid("finite quotient needs a member-list subgroup".into()))?;
        let n = g.order();
        // Partition into left cosets xK.
        let mut temp_id = vec![usize::MAX; n];
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if temp_id[x] != usize::MAX {
                continue;
            }
            let id = cosets.len();
            let mut coset: Vec<usize> = members.iter().map(|&k| g.mul(x, k)).collect();
            coset.sort_unstable();
            for &y in &coset {
                temp_id[y] = id;
            }
            cosets.push(coset);
        }
        // Quotient length = coset minimum of the parent length (route (b));
        // representative = the minimizer, ties broken by element order.
        let mut summary: Vec<(u32, usize, usize)> = cosets
            .iter()
            .enumerate()
            .map(|(id, coset)| {
                let &rep = coset
                    .iter()
                    .min_by_key(|&&y| (g.length(y), y))
                    .expect("cosets are nonempty");
                (g.length(rep), rep, id)
            })
            .collect();
        summary.sort();
        let mut final_of_temp = vec![usize::MAX; cosets.len()];
        let mut reps = Vec::new();
        let mut lengths = Vec::new();
        for (c, &(len, rep, temp)) in summary.iter().enumerate() {
            final_of_temp[temp] = c;
            reps.push(Elem::Idx(rep));
            lengths.push(len);
        }
        let coset_of: Vec<usize> = (0..n).map(|x| final_of_temp[temp_id[x]]).collect();

        let labels: Vec<String> = reps
            .iter()
            .map(|r| format!("[{}]", parent.label(r)))
            .collect();
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|a| {
                reps.iter()
                    .map(|b| {
                        let (Elem::Idx(x), Elem::Idx(y)) = (a, b) else { unreachable!() };
                        coset_of[g.mul(*x, *y)]
                    })
                    .collect()
            })
            .collect();
        let image_gens: Vec<usize> = g.generators().iter().map(|&x| coset_of[x]).collect();
        let name = format!("{}/{}", parent.name(), normal.name());
        let table_group = FiniteGroup::from_table(&name, labels, table, image_gens)?;
        let group = if g.has_native_word_length() {
            // Route (a) vs route (b).
            if table_group.lengths() != lengths.as_slice() {
                return Err(Error::CrossCheckFailed {
                    context: format!("quotient length in {name}"),
                    witness: "Cayley BFS over generator images disagrees with coset minima".into(),
                });
            }
            table_group
        } else {
            table_group.with_lengths(lengths, &name)?
        };
        Ok(QuotientModel {
            parent: parent.clone(),
            normal: normal.clone(),
            group,
            reps,
            proj: Projection::Finite { coset_of },
        })
    }

    pub fn parent(&self) -> &GroupModel {
        &self.parent
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    /// The derived group structure on cosets, with the quotient metric as
    /// its length function.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Canonical (BFS-minimal) representative of coset `c`.
    pub fn rep(&self, c: usize) -> &Elem {
        &self.reps[c]
    }

    /// Coset index of a parent element. Total for valid elements.
    pub fn project(&self, e: &Elem) -> Result<usize> {
        match (&self.proj, e) {
            (Projection::Lattice { basis, residue_to_coset }, Elem::Vector(v)) => residue_to_coset
                .get(&basis.reduce(v))
                .copied()
                .ok_or_else(|| Error::Invalid(format!("element {e:?} has no coset"))),
            (Projection::Finite { coset_of }, Elem::Idx(i)) if *i < coset_of.len() => {
                Ok(coset_of[*i])
            }
            _ => Err(Error::Invalid(format!(
                "element {e:?} does not belong to {}",
                self.parent.name()
            ))),
        }
    }

    /// Quotient length of [e], from the stored metric.
    pub fn quotient_length(&self, e: &Elem) -> Result<u32> {
        Ok(self.group.length(self.project(e)?))
    }

    /// Independent brute-force route: the minimum parent length over the
    /// coset of `e`, recomputed from scratch.
    pub fn coset_min_oracle(&self, e: &Elem) -> Result<u32> {
        match &self.proj {
            Projection::Finite { coset_of } => {
                let Elem::Idx(i) = e else {
                    return Err(Error::Invalid("expected a finite element".into()));
                };
                let GroupModel::Finite(g) = &self.parent else { unreachable!() };
                let c = coset_of[*i];
                Ok((0..g.order())
                    .filter(|&x| coset_of[x] == c)
                    .map(|x| g.length(x))
                    .min()
                    .expect("cosets are nonempty"))
            }
            Projection::Lattice { basis, .. } => {
                let Elem::Vector(v) = e else {
                    return Err(Error::Invalid("expected a lattice element".into()));
                };
                let target = basis.reduce(v);
                let mut bound = 1u32;
                loop {
                    for (len, cand) in self.parent.elements_up_to(bound)? {
                        let Elem::Vector(w) = &cand else { unreachable!() };
                        if basis.reduce(w) == target {
                            return Ok(len);
                        }
                    }
                    if bound >= self.parent.window() {
                        return Err(Error::OutOfWindow {
                            needed: bound + 1,
                            window: self.parent.window(),
                            context: format!("coset minimum of {e:?}"),
                        });
                    }
                    bound = (bound * 2).min(self.parent.window());
                }
            }
        }
    }

    /// Compares the image of the parent open R-ball with the quotient open
    /// R-ball. Must hold for every R on correct models.
    pub fn check_ball_pushforward(&self, r: u32) -> Result<BallPushforwardVerdict> {
        let mut image = vec![false; self.order()];
        for e in self.parent.ball(r)? {
            image[self.project(&e)?] = true;
        }
        let mut missing = Vec::new();
        let mut extra = Vec::new();
        for c in 0..self.order() {
            let in_ball = self.group.length(c) < r;
            if in_ball && !image[c] {
                missing.push(c);
            }
            if !in_ball && image[c] {
                extra.push(c);
            }
        }
        Ok(BallPushforwardVerdict {
            ok: missing.is_empty() && extra.is_empty(),
            missing_from_image: missing,
            extra_in_image: extra,
        })
    }

    /// The whole quotient as an element-indexed metric space.
    pub fn quotient_space(&self) -> Result<GroupSpace> {
        let model = GroupModel::Finite(Arc::clone(&self.group));
        model.space_over((0..self.order()).map(Elem::Idx).collect())
    }
}

/// One member of the family associated with a finite group: a quotient H/K
/// of a subgroup, carrying the induced-then-quotient metric.
pub struct Subquotient {
    /// H, as sorted element indices of the ambient group.
    pub subgroup: Vec<usize>,
    /// K, normal in H, as sorted element indices of the ambient group.
    pub normal: Vec<usize>,
    /// H/K with the quotient of the induced length.
    pub quotient: QuotientModel,
}

/// The family {H/K : K normal in H <= G} of a finite group.
pub struct AssociatedFamily {
    pub group_name: String,
    pub entries: Vec<Subquotient>,
}

/// Enumerates the family associated with `g`: every subgroup H, every
/// normal subgroup K of H, and the quotient H/K where H carries the induced
/// length from `g` and H/K the quotient length.
///
/// Groups larger than `cap` are refused; raise the cap to enumerate them.
pub fn associated_family(g: &Arc<FiniteGroup>, cap: usize) -> Result<AssociatedFamily> {
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: format!("group {}", g.name()),
            cap,
            actual: g.order(),
        });
    }
    let subgroups = g.all_subgroups();
    let mut entries = Vec::new();
    for (hi, h) in subgroups.iter().enumerate() {
        let h_group = g.subgroup_as_group(h, &format!("{}:H{hi}", g.name()))?;
        let h_model = GroupModel::Finite(h_group);
        let to_local = |x: usize| h.binary_search(&x).expect("K is inside H");
        for (ki, k) in subgroups.iter().enumerate() {
            if !k.iter().all(|x| h.binary_search(x).is_ok()) || !g.is_normal_in(k, h) {
                continue;
            }
            let k_local: Vec<usize> = k.iter().map(|&x| to_local(x)).collect();
            let n = Subgroup::members(&h_model, k_local, &format!("K{ki}"))?;
            let quotient = QuotientModel::new(&h_model, &n)?;
            entries.push(Subquotient {
                subgroup: h.clone(),
                normal: k.clone(),
                quotient,
            });
        }
    }
    Ok(AssociatedFamily {
        group_name: g.name().to_string(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::LatticeGroup;

    fn z(window: u32) -> GroupModel {
        GroupModel::Lattice(Arc::new(LatticeGroup::z(window)))
    }

    fn z_mod(m: i64, window: u32) -> QuotientModel {
        let parent = z(window);
        let n = Subgroup::sublattice(&parent, vec![vec![m]], &format!("{m}Z")).unwrap();
        QuotientModel::new(&parent, &n).unwrap()
    }

    #[test]
    fn quotient_length_examples() {
        let q = z_mod(6, 50);
        assert_eq!(q.quotient_length(&Elem::Vector(vec![4])).unwrap(), 2);
        assert_eq!(q.quotient_length(&Elem::Vector(vec![12])).unwrap(), 0);
        assert_eq!(q.quotient_length(&Elem::Vector(vec![-1])).unwrap(), 1);
    }

    #[test]
    fn oracle_agrees_on_z2_quotient() {
        let parent = GroupModel::Lattice(Arc::new(LatticeGroup::zn(2, 60)));
        let n = Subgroup::sublattice(&parent, vec![vec![2, 2], vec![4, -4]], "L").unwrap();
        let q = QuotientModel::new(&parent, &n).unwrap();
        assert_eq!(q.order(), 16);
        // every coset: stored metric equals the independent oracle
        for c in 0..q.order() {
            let rep = q.rep(c).clone();
            assert_eq!(
                q.quotient_length(&rep).unwrap(),
                q.coset_min_oracle(&rep).unwrap()
            );
        }
        // the spec's sample element
        let e = Elem::Vector(vec![3, 1]);
        assert_eq!(
            q.quotient_length(&e).unwrap(),
            q.coset_min_oracle(&e).unwrap()
        );
    }

    #[test]
    fn ball_pushforward_examples() {
        let q5 = z_mod(5, 50);
        assert!(q5.check_ball_pushforward(4).unwrap().ok);
        assert!(q5.check_ball_pushforward(1).unwrap().ok);
        let q6 = z_mod(6, 50);
        for r in 1..=12 {
            assert!(q6.check_ball_pushforward(r).unwrap().ok, "R={r}");
        }
        // the image of the parent 3-ball is {0,1,2,4,5}
        let mut image: Vec<usize> = q6
            .parent()
            .ball(3)
            .unwrap()
            .iter()
            .map(|e| q6.project(e).unwrap())
            .collect();
        image.sort_unstable();
        image.dedup();
        let mut labels: Vec<String> = image
            .iter()
            .map(|&c| q6.group().label(c).to_string())
            .collect();
        labels.sort();
        assert_eq!(labels.len(), 5);
    }

    #[test]
    fn finite_parent_quotient() {
        let g = GroupModel::Finite(FiniteGroup::cyclic(12));
        let n = Subgroup::members(&g, vec![0, 4, 8], "<4>").unwrap();
        let q = QuotientModel::new(&g, &n).unwrap();
        assert_eq!(q.order(), 4);
        // cosets are ordered by (length, representative): [0], [1], [11], [2]
        assert_eq!(q.group().lengths(), &[0, 1, 1, 2]);
        assert_eq!(q.quotient_length(&Elem::Idx(4)).unwrap(), 0);
        assert_eq!(q.quotient_length(&Elem::Idx(7)).unwrap(), 1);
        assert_eq!(q.quotient_length(&Elem::Idx(2)).unwrap(), 2);
    }

    #[test]
    fn s3_mod_a3_is_z2() {
        let s3 = FiniteGroup::symmetric(3);
        let g = GroupModel::Finite(Arc::clone(&s3));
        let a3: Vec<usize> = s3
            .all_subgroups()
            .into_iter()
            .find(|h| h.len() == 3)
            .unwrap();
        let n = Subgroup::members(&g, a3, "A3").unwrap();
        let q = QuotientModel::new(&g, &n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.group().lengths(), &[0, 1]);
    }

    #[test]
    fn non_normal_subgroup_is_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        let g = GroupModel::Finite(Arc::clone(&s3));
        let z2: Vec<usize> = s3
            .all_subgroups()
            .into_iter()
            .find(|h| h.len() == 2)
            .unwrap();
        let n = Subgroup::members(&g, z2, "Z2").unwrap();
        assert!(matches!(
            QuotientModel::new(&g, &n),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn infinite_index_is_rejected() {
        let parent = GroupModel::Lattice(Arc::new(LatticeGroup::zn(2, 20)));
        let n = Subgroup::sublattice(&parent, vec![vec![2, 0]], "2Zx0").unwrap();
        assert!(matches!(
            QuotientModel::new(&parent, &n),
            Err(Error::InfiniteIndex { .. })
        ));
    }

    #[test]
    fn associated_family_of_z4() {
        let fam = associated_family(&FiniteGroup::cyclic(4), 64).unwrap();
        assert_eq!(fam.entries.len(), 6);
        let mut orders: Vec<usize> = fam.entries.iter().map(|e| e.quotient.order()).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 1, 1, 2, 2, 4]);
    }

    #[test]
    fn associated_family_of_trivial_group() {
        let fam = associated_family(&FiniteGroup::cyclic(1), 64).unwrap();
        assert_eq!(fam.entries.len(), 1);
        assert_eq!(fam.entries[0].quotient.order(), 1);
    }

    #[test]
    fn associated_family_of_s3_subquotient_orders() {
        let fam = associated_family(&FiniteGroup::symmetric(3), 64).unwrap();
        let orders: std::collections::BTreeSet<usize> =
            fam.entries.iter().map(|e| e.quotient.order()).collect();
        // includes S3 itself, Z/3, Z/2 and the trivial group
        assert_eq!(orders, [1, 2, 3, 6].into_iter().collect());
    }

    #[test]
    fn associated_family_cap() {
        assert!(matches!(
            associated_family(&FiniteGroup::cyclic(12), 8),
            Err(Error::CapExceeded { .. })
        ));
    }
}
