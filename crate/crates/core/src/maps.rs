//! Empirical moduli for maps of metric families: expansion (rho_1) and
//! properness (rho_2) tables with monotone envelopes, coarse-equivalence
//! checks with displacement bounds, and the metric verification of the
//! canonical subquotient isomorphism (H/N_0)/(K/N_0) = H/K.
//!
//! Verdicts on finite windows never claim more than the window shows: a
//! properness check passes "with the supplied floor on the tested window".

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupModel, QuotientModel, Subgroup};
use crate::metric::{same_space, Space};

/// One member of a map family: a total map between two finite spaces,
/// stored pointwise.
#[derive(Clone)]
pub struct MapMember {
    pub domain: Space,
    pub codomain: Space,
    /// point index in the domain -> point index in the codomain
    pub map: Vec<usize>,
}

impl MapMember {
    pub fn new(domain: &Space, codomain: &Space, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.len() || map.iter().any(|&y| y >= codomain.len()) {
            return Err(Error::Invalid("map is not total on its domain".into()));
        }
        Ok(MapMember {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            map,
        })
    }
}

/// A map of families: one function per member.
#[derive(Clone)]
pub struct MapFamily {
    pub name: String,
    pub members: Vec<MapMember>,
}

impl MapFamily {
    pub fn new(name: &str, members: Vec<MapMember>) -> Self {
        MapFamily {
            name: name.to_string(),
            members,
        }
    }
}

/// Exact expansion/properness tables over the occurring input distances,
/// with their monotone envelopes.
#[derive(Debug, Clone)]
pub struct ModulusReport {
    /// input distance -> (max image distance, min image distance)
    pub table: BTreeMap<u32, (u32, u32)>,
}

impl ModulusReport {
    /// Least nondecreasing majorant of the max-image table, at the
    /// occurring points.
    pub fn rho1_envelope(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.table.len());
        let mut running = 0;
        for (&t, &(hi, _)) in &self.table {
            running = running.max(hi);
            out.push((t, running));
        }
        out
    }

    /// Greatest nondecreasing minorant of the min-image table, at the
    /// occurring points.
    pub fn rho2_envelope(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(self.table.len());
        let mut running = u32::MAX;
        for (&t, &(_, lo)) in self.table.iter().rev() {
            running = running.min(lo);
            out.push((t, running));
        }
        out.reverse();
        out
    }

    /// Step extension of the rho_1 envelope: value at the largest occurring
    /// point <= t (0 when none).
    pub fn rho1_env_at(&self, t: u32) -> u32 {
        let mut value = 0;
        for &(point, env) in &self.rho1_envelope() {
            if point > t {
                break;
            }
            value = env;
        }
        value
    }

    /// Step extension of the rho_2 envelope: value at the smallest occurring
    /// point >= t (infinite when none, reported as u32::MAX).
    pub fn rho2_env_at(&self, t: u32) -> u32 {
        self.rho2_envelope()
            .iter()
            .find(|&&(point, _)| point >= t)
            .map(|&(_, env)| env)
            .unwrap_or(u32::MAX)
    }
}

/// Exact modulus tables of a map family, from a full pair scan.
pub fn modulus_profile(family: &MapFamily) -> ModulusReport {
    let mut table: BTreeMap<u32, (u32, u32)> = BTreeMap::new();
    for member in &family.members {
        let n = member.domain.len();
        for x in 0..n {
            let drow = member.domain.row(x);
            for y in (x + 1)..n {
                let input = drow[y];
                let image = member.codomain.dist(member.map[x], member.map[y]);
                table
                    .entry(input)
                    .and_modify(|(hi, lo)| {
                        *hi = (*hi).max(image);
                        *lo = (*lo).min(image);
                    })
                    .or_insert((image, image));
            }
        }
    }
    ModulusReport { table }
}

/// Outcome of a coarse-equivalence check on a finite window.
#[derive(Debug, Clone)]
pub struct CoarseEquivalenceVerdict {
    pub pass: bool,
    pub forward_profile: ModulusReport,
    pub backward_profile: ModulusReport,
    /// (member, point, displacement) exceeding the bound, if any.
    pub displacement_witness: Option<(usize, usize, u32)>,
    /// (direction name, input distance) where the rho_2 envelope fell below
    /// the floor, if any.
    pub floor_witness: Option<(String, u32)>,
}

/// Checks a coarse equivalence on the tested windows: both directions must
/// be effectively proper at the supplied floor, and the two displacement
/// bounds d(x, g f x) <= C and d(y, f g y) <= C must hold everywhere.
///
/// The backward family must pair with the forward one member by member
/// (swapped domains and codomains).
pub fn check_coarse_equivalence(
    forward: &MapFamily,
    backward: &MapFamily,
    c: u32,
    floor: &dyn Fn(u32) -> u32,
) -> Result<CoarseEquivalenceVerdict> {
    if forward.members.len() != backward.members.len() {
        return Err(Error::Invalid(
            "forward and backward families must pair member by member".into(),
        ));
    }
    for (f, g) in forward.members.iter().zip(&backward.members) {
        if !same_space(&f.domain, &g.codomain) || !same_space(&f.codomain, &g.domain) {
            return Err(Error::CarrierMismatch);
        }
    }
    let forward_profile = modulus_profile(forward);
    let backward_profile = modulus_profile(backward);

    let mut displacement_witness = None;
    'outer: for (mi, (f, g)) in forward.members.iter().zip(&backward.members).enumerate() {
        for x in 0..f.domain.len() {
            let disp = f.domain.dist(x, g.map[f.map[x]]);
            if disp > c {
                displacement_witness = Some((mi, x, disp));
                break 'outer;
            }
        }
        for y in 0..g.domain.len() {
            let disp = g.domain.dist(y, f.map[g.map[y]]);
            if disp > c {
                displacement_witness = Some((mi, y, disp));
                break 'outer;
            }
        }
    }

    let mut floor_witness = None;
    for (name, profile) in [
        (&forward.name, &forward_profile),
        (&backward.name, &backward_profile),
    ] {
        for (&t, _) in &profile.table {
            if profile.rho2_env_at(t) < floor(t) {
                floor_witness = Some((name.clone(), t));
                break;
            }
        }
        if floor_witness.is_some() {
            break;
        }
    }

    Ok(CoarseEquivalenceVerdict {
        pass: displacement_witness.is_none() && floor_witness.is_none(),
        forward_profile,
        backward_profile,
        displacement_witness,
        floor_witness,
    })
}

/// Outcome of the subquotient-isomorphism metric check for one (H, K) pair.
#[derive(Debug, Clone)]
pub struct QuotientIsoVerdict {
    pub pass: bool,
    /// Orders of (H/N_0)/(K/N_0) and H/K.
    pub orders: (usize, usize),
    /// A coset of (H/N_0)/(K/N_0) whose length disagrees with its image, if
    /// any; lengths agreeing at every coset is ball-to-ball at every R.
    pub length_witness: Option<(usize, u32, u32)>,
    /// A pair where psi fails multiplicativity, if any.
    pub homomorphism_witness: Option<(usize, usize)>,
}

/// Verifies that the canonical isomorphism (H/N_0)/(K/N_0) -> H/K maps the
/// R-ball onto the R-ball for every R, by checking it is a bijective
/// homomorphism preserving the quotient lengths exactly.
///
/// `h` and `k` are sorted element lists of the ambient group with
/// N_0 <= K <= H; `n0` must be normal in the ambient group.
pub fn check_quotient_iso_metric(
    ambient: &Arc<FiniteGroup>,
    n0: &[usize],
    h: &[usize],
    k: &[usize],
) -> Result<QuotientIsoVerdict> {
    let g_model = GroupModel::Finite(Arc::clone(ambient));
    // side A: H with the induced length, then H/K
    let h_group = ambient.subgroup_as_group(h, &format!("{}|H", ambient.name()))?;
    let h_model = GroupModel::Finite(Arc::clone(&h_group));
    let find_in = |list: &[usize], x: usize| list.binary_search(&x).expect("element is present");
    let k_in_h: Vec<usize> = k.iter().map(|&x| find_in(h, x)).collect();
    let qa = QuotientModel::new(&h_model, &Subgroup::members(&h_model, k_in_h, "K")?)?;

    // side B: G/N_0, the image subgroup H/N_0 with its induced length, then
    // the quotient by K/N_0
    let q0 = QuotientModel::new(&g_model, &Subgroup::members(&g_model, n0.to_vec(), "N0")?)?;
    let mut h_image: Vec<usize> = h
        .iter()
        .map(|&x| q0.project(&crate::group::Elem::Idx(x)))
        .collect::<Result<_>>()?;
    h_image.sort_unstable();
    h_image.dedup();
    let hb_group = q0
        .group()
        .subgroup_as_group(&h_image, &format!("{}|H/N0", ambient.name()))?;
    let hb_model = GroupModel::Finite(Arc::clone(&hb_group));
    let mut k_image: Vec<usize> = k
        .iter()
        .map(|&x| q0.project(&crate::group::Elem::Idx(x)))
        .collect::<Result<_>>()?;
    k_image.sort_unstable();
    k_image.dedup();
    let k_image_local: Vec<usize> = k_image.iter().map(|&c| find_in(&h_image, c)).collect();
    let qb = QuotientModel::new(&hb_model, &Subgroup::members(&hb_model, k_image_local, "K/N0")?)?;

    let orders = (qb.order(), qa.order());

    // psi: a coset of (H/N_0)/(K/N_0), represented by a coset of N_0 inside
    // H, lifts to an element of H and maps to its K-coset.
    let mut psi = Vec::with_capacity(qb.order());
    for cb in 0..qb.order() {
        let hb_local = qb.rep(cb).as_idx().expect("finite rep");
        let g_n0_coset = h_image[hb_local];
        let lift_in_g = q0.rep(g_n0_coset).as_idx().expect("finite rep");
        // N_0 <= H makes the whole N_0-coset of an H element lie in H
        let lift_in_h = find_in(h, lift_in_g);
        psi.push(qa.project(&crate::group::Elem::Idx(lift_in_h))?);
    }

    // bijectivity
    let mut seen = vec![false; qa.order()];
    let bijective =
        orders.0 == orders.1 && psi.iter().all(|&img| !std::mem::replace(&mut seen[img], true));

    // homomorphism property
    let mut homomorphism_witness = None;
    if bijective {
        'pairs: for a in 0..qb.order() {
            for b in 0..qb.order() {
                let lhs = psi[qb.group().mul(a, b)];
                let rhs = qa.group().mul(psi[a], psi[b]);
                if lhs != rhs {
                    homomorphism_witness = Some((a, b));
                    break 'pairs;
                }
            }
        }
    }

    // exact length preservation (equivalent to ball-to-ball at every R)
    let mut length_witness = None;
    for cb in 0..qb.order() {
        let lb = qb.group().length(cb);
        let la = qa.group().length(psi[cb]);
        if lb != la {
            length_witness = Some((cb, lb, la));
            break;
        }
    }

    Ok(QuotientIsoVerdict {
        pass: bijective && homomorphism_witness.is_none() && length_witness.is_none(),
        orders,
        length_witness,
        homomorphism_witness,
    })
}

/// All (H, K) pairs with N_0 <= K, K normal in H, over a precomputed
/// subgroup list (use `FiniteGroup::all_subgroups`).
pub fn admissible_pairs(
    ambient: &FiniteGroup,
    n0: &[usize],
    subgroups: &[Vec<usize>],
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let contains_n0 =
        |h: &Vec<usize>| n0.iter().all(|x| h.binary_search(x).is_ok());
    let mut out = Vec::new();
    for h in subgroups.iter().filter(|h| contains_n0(h)) {
        for k in subgroups {
            if contains_n0(k)
                && k.iter().all(|x| h.binary_search(x).is_ok())
                && ambient.is_normal_in(k, h)
            {
                out.push((h.clone(), k.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Elem, LatticeGroup};

    fn z_spaces(window: u32, radius: u32, gens: Vec<Vec<i64>>) -> (GroupModel, crate::group::GroupSpace) {
        let model = GroupModel::Lattice(Arc::new(
            LatticeGroup::new("Z*", 1, gens, window).unwrap(),
        ));
        let ws = model
            .space_over((-(radius as i64)..=radius as i64).map(|v| Elem::Vector(vec![v])).collect())
            .unwrap();
        (model, ws)
    }

    #[test]
    fn identity_profile() {
        let (_m, ws) = z_spaces(100, 10, vec![vec![1]]);
        let ident = MapMember::new(ws.space(), ws.space(), (0..ws.len()).collect()).unwrap();
        let profile = modulus_profile(&MapFamily::new("id", vec![ident]));
        for (&t, &(hi, lo)) in &profile.table {
            assert_eq!(hi, t);
            assert_eq!(lo, t);
        }
    }

    #[test]
    fn doubling_profile() {
        let (model, ws) = z_spaces(200, 10, vec![vec![1]]);
        let big = model
            .space_over((-20..=20).map(|v| Elem::Vector(vec![v])).collect())
            .unwrap();
        let map: Vec<usize> = (0..ws.len())
            .map(|i| {
                let Elem::Vector(v) = ws.elem(i) else { unreachable!() };
                big.index_of(&Elem::Vector(vec![2 * v[0]])).unwrap()
            })
            .collect();
        let member = MapMember::new(ws.space(), big.space(), map).unwrap();
        let profile = modulus_profile(&MapFamily::new("x2", vec![member]));
        for (&t, &(hi, lo)) in &profile.table {
            assert_eq!(hi, 2 * t);
            assert_eq!(lo, 2 * t);
        }
    }

    #[test]
    fn projection_profile_contracts_and_drops() {
        let parent = GroupModel::Lattice(Arc::new(LatticeGroup::z(100)));
        let n = Subgroup::sublattice(&parent, vec![vec![6]], "6Z").unwrap();
        let q = QuotientModel::new(&parent, &n).unwrap();
        let window = parent
            .space_over((-12..=12).map(|v| Elem::Vector(vec![v])).collect())
            .unwrap();
        let qspace = q.quotient_space().unwrap();
        let map: Vec<usize> = (0..window.len())
            .map(|i| {
                let c = q.project(window.elem(i)).unwrap();
                qspace.index_of(&Elem::Idx(c)).unwrap()
            })
            .collect();
        let member = MapMember::new(window.space(), qspace.space(), map).unwrap();
        let profile = modulus_profile(&MapFamily::new("pi", vec![member]));
        // contraction: never expands any pair
        for (&t, &(hi, _)) in &profile.table {
            assert!(hi <= t);
        }
        // pairs at distance 6 collapse: the rho_2 table hits zero there
        assert_eq!(profile.table[&6].1, 0);
        assert_eq!(profile.rho2_env_at(1), 0);
    }

    #[test]
    fn coarse_equivalence_of_two_generating_sets() {
        // Z with generators {1} vs {2, 3}: identity maps both ways on the
        // window [-30, 30], displacement 0, floors roughly t/3.
        let (_m1, ws1) = z_spaces(200, 30, vec![vec![1]]);
        let (_m2, ws2) = z_spaces(200, 30, vec![vec![2], vec![3]]);
        let fwd = MapMember::new(ws1.space(), ws2.space(), (0..ws1.len()).collect()).unwrap();
        let bwd = MapMember::new(ws2.space(), ws1.space(), (0..ws2.len()).collect()).unwrap();
        let verdict = check_coarse_equivalence(
            &MapFamily::new("1->2", vec![fwd]),
            &MapFamily::new("2->1", vec![bwd]),
            2,
            &|t| (t.saturating_sub(2)) / 3,
        )
        .unwrap();
        assert!(verdict.pass, "witnesses: {:?} {:?}", verdict.displacement_witness, verdict.floor_witness);
    }

    #[test]
    fn inclusion_with_rounding_is_coarse_equivalence() {
        // 2Z -> Z inclusion vs rounding down to even, C = 1
        let model = GroupModel::Lattice(Arc::new(LatticeGroup::z(200)));
        let evens = model
            .space_over((-20..=20).map(|v| Elem::Vector(vec![2 * v])).collect())
            .unwrap();
        let all = model
            .space_over((-40..=40).map(|v| Elem::Vector(vec![v])).collect())
            .unwrap();
        let include = MapMember::new(
            evens.space(),
            all.space(),
            (0..evens.len())
                .map(|i| all.index_of(evens.elem(i)).unwrap())
                .collect(),
        )
        .unwrap();
        let round = MapMember::new(
            all.space(),
            evens.space(),
            (0..all.len())
                .map(|i| {
                    let Elem::Vector(v) = all.elem(i) else { unreachable!() };
                    let even = 2 * v[0].div_euclid(2);
                    evens.index_of(&Elem::Vector(vec![even])).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let verdict = check_coarse_equivalence(
            &MapFamily::new("incl", vec![include]),
            &MapFamily::new("round", vec![round]),
            1,
            &|t| t.saturating_sub(2),
        )
        .unwrap();
        assert!(verdict.pass);
    }

    #[test]
    fn quotient_iso_z8_example() {
        // G = Z/8, N0 = {0,4}, H = G, K = {0,2,4,6}: both routes give Z/2
        // with matching lengths at every coset.
        let g = FiniteGroup::cyclic(8);
        let v = check_quotient_iso_metric(&g, &[0, 4], &(0..8).collect::<Vec<_>>(), &[0, 2, 4, 6])
            .unwrap();
        assert!(v.pass);
        assert_eq!(v.orders, (2, 2));
    }

    #[test]
    fn quotient_iso_trivial_cases() {
        let g = FiniteGroup::cyclic(8);
        let all: Vec<usize> = (0..8).collect();
        // K = H: both sides trivial
        let v = check_quotient_iso_metric(&g, &[0, 4], &all, &all).unwrap();
        assert!(v.pass);
        assert_eq!(v.orders, (1, 1));
        // N0 trivial: psi is the identity situation
        let v = check_quotient_iso_metric(&g, &[0], &all, &[0, 2, 4, 6]).unwrap();
        assert!(v.pass);
    }

    #[test]
    fn admissible_pairs_of_s3() {
        let s3 = crate::group::FiniteGroup::symmetric(3);
        let subs = s3.all_subgroups();
        let a3: Vec<usize> = subs.iter().find(|h| h.len() == 3).unwrap().clone();
        let pairs = admissible_pairs(&s3, &a3, &subs);
        // H must contain A3: H is A3 or S3; K likewise, normal in H
        assert_eq!(pairs.len(), 2 + 1); // (A3,A3), (S3,A3), (S3,S3)
        for (h, k) in &pairs {
            let v = check_quotient_iso_metric(&s3, &a3, h, k).unwrap();
            assert!(v.pass);
        }
    }
}
