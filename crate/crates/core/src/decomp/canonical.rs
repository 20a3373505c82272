//! Canonical decompositions: length annuli for Z-like models and coset
//! decompositions along a subgroup containing a ball.
//!
//! The annulus decomposition colors A_j = {(4j-4)R <= l <= (4j-2)R} against
//! B_j = {(4j-2)R <= l <= 4jR}, intersected with the region; each annulus is
//! split into its metrically connected components so every piece has
//! diameter at most 4R (the central piece A_1 attains it). The coset
//! decomposition requires the open R-ball to sit inside the subgroup, which
//! makes distinct cosets R-separated.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{Elem, GroupModel, GroupSpace, Subgroup};
use crate::metric::{DisjointVerdict, PointSubset, SubsetFamily};

use super::Decomposition;

/// Splits a subset into connected components under "distance exactly 1"
/// adjacency, ordered by least point.
fn components(ctx: &GroupSpace, subset: &PointSubset) -> Vec<PointSubset> {
    let mut remaining: Vec<usize> = subset.bits().to_vec();
    let mut out = Vec::new();
    while let Some(seed) = remaining.pop() {
        let mut comp = vec![seed];
        let mut frontier = vec![seed];
        while let Some(x) = frontier.pop() {
            let row = ctx.space().row(x);
            let mut keep = Vec::new();
            for &y in &remaining {
                if row[y] == 1 {
                    comp.push(y);
                    frontier.push(y);
                } else {
                    keep.push(y);
                }
            }
            remaining = keep;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out.into_iter()
        .map(|comp| PointSubset::from_indices(ctx.space(), comp))
        .collect()
}

/// The annulus decomposition of a region in a Z or Z-quotient model, at
/// gap R. Color 0 holds the components of the annuli A_j, color 1 those of
/// the B_j; every piece has diameter at most 4R and the same-color families
/// are R-disjoint (certify with the ordinary verifier).
pub fn interval_decomposition_z(
    ctx: &GroupSpace,
    region: &PointSubset,
    r: u32,
) -> Result<Decomposition> {
    match ctx.model() {
        GroupModel::Lattice(g) if g.rank() == 1 => {}
        GroupModel::Finite(_) => {}
        GroupModel::Lattice(g) => {
            return Err(Error::Invalid(format!(
                "interval decomposition needs a Z or Z-quotient model, not rank {}",
                g.rank()
            )))
        }
    }
    let lengths: Vec<(usize, u32)> = region
        .iter()
        .map(|p| Ok((p, ctx.model().word_length(ctx.elem(p))?)))
        .collect::<Result<_>>()?;
    let max_len = lengths.iter().map(|&(_, l)| l).max().unwrap_or(0);
    let mut color0 = Vec::new();
    let mut color1 = Vec::new();
    let mut j = 1u32;
    loop {
        let lo_a = (4 * j - 4) * r;
        if lo_a > max_len {
            break;
        }
        let hi_a = (4 * j - 2) * r;
        let hi_b = 4 * j * r;
        let annulus_a: Vec<usize> = lengths
            .iter()
            .filter(|&&(_, l)| lo_a <= l && l <= hi_a)
            .map(|&(p, _)| p)
            .collect();
        let annulus_b: Vec<usize> = lengths
            .iter()
            .filter(|&&(_, l)| hi_a <= l && l <= hi_b)
            .map(|&(p, _)| p)
            .collect();
        if !annulus_a.is_empty() {
            let subset = PointSubset::from_indices(ctx.space(), annulus_a);
            color0.extend(components(ctx, &subset));
        }
        if !annulus_b.is_empty() {
            let subset = PointSubset::from_indices(ctx.space(), annulus_b);
            color1.extend(components(ctx, &subset));
        }
        j += 1;
    }
    Decomposition::new(region.clone(), color0, color1)
}

/// The coset decomposition of a region along a subgroup, at gap R. Requires
/// the open R-ball at the identity to lie inside the subgroup; the pieces
/// are the left-coset classes met by the region, as a single family,
/// together with their R-disjointness verdict.
pub fn coset_decomposition(
    ctx: &GroupSpace,
    region: &PointSubset,
    sub: &Subgroup,
    r: u32,
) -> Result<(Decomposition, DisjointVerdict)> {
    for e in ctx.model().ball(r)? {
        if !sub.contains(&e) {
            return Err(Error::BallEscapesSubgroup {
                element: ctx.model().label(&e),
                radius: r,
            });
        }
    }
    let mut cosets: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
    for p in region.iter() {
        let key = coset_key(ctx.model(), sub, ctx.elem(p))?;
        cosets.entry(key).or_default().push(p);
    }
    let pieces: Vec<PointSubset> = cosets
        .into_values()
        .map(|points| PointSubset::from_indices(ctx.space(), points))
        .collect();
    let family = SubsetFamily::new(ctx.space(), pieces.clone())?;
    let verdict = family.is_r_disjoint(r);
    let d = Decomposition::new(region.clone(), pieces, Vec::new())?;
    Ok((d, verdict))
}

/// A canonical label for the left coset x.H.
fn coset_key(model: &GroupModel, sub: &Subgroup, x: &Elem) -> Result<Elem> {
    match (model, x) {
        (GroupModel::Lattice(_), Elem::Vector(v)) => {
            let basis = sub
                .as_sublattice()
                .ok_or_else(|| Error::Invalid("lattice model needs a sublattice subgroup".into()))?;
            Ok(Elem::Vector(basis.reduce(v)))
        }
        (GroupModel::Finite(g), Elem::Idx(i)) => {
            let members = sub
                .as_members()
                .ok_or_else(|| Error::Invalid("finite model needs a member-list subgroup".into()))?;
            let min = members
                .iter()
                .map(|&h| g.mul(*i, h))
                .min()
                .expect("subgroups are nonempty");
            Ok(Elem::Idx(min))
        }
        _ => Err(Error::Invalid("element does not match the model".into())),
    }
}
