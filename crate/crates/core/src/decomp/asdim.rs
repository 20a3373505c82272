//! Fixed-scale asymptotic dimension: the minimal n such that a region is
//! covered by n+1 families, each r-disjoint with pieces of diameter at most
//! B.
//!
//! Assigning every point a color and splitting each color class into its
//! connected components under the "closer than r" relation is lossless:
//! components of one class are automatically r-disjoint, and any valid
//! cover restricts to such a coloring. So the solver searches colorings
//! exactly, by backtracking with fail-first ordering (conflict degree
//! descending, ties by carrier order) and diameter pruning, falling back to
//! a greedy bound when the region or node budget is exceeded.

use crate::metric::{PointSubset, SubsetFamily};

/// Solver mode: exact backtracking within caps, or the greedy bound.
#[derive(Debug, Clone, Copy)]
pub enum SolverMode {
    Exact { max_points: usize, node_budget: u64 },
    Greedy,
}

impl Default for SolverMode {
    fn default() -> Self {
        SolverMode::Exact {
            max_points: 96,
            node_budget: 2_000_000,
        }
    }
}

/// Result of the fixed-scale dimension search.
#[derive(Debug, Clone)]
pub struct AsdimOutcome {
    /// Number of families minus one.
    pub n: u32,
    /// True when the value is the exact minimum; false for a greedy upper
    /// bound (region too large or search budget exhausted).
    pub exact: bool,
    /// Witness cover: n+1 families, each r-disjoint and B-bounded.
    pub families: Vec<SubsetFamily>,
}

struct Instance {
    points: Vec<usize>,
    dist: Vec<Vec<u32>>,
    order: Vec<usize>,
    r: u32,
    bound: u32,
}

impl Instance {
    fn new(region: &PointSubset, r: u32, bound: u32) -> Self {
        let points = region.bits().to_vec();
        let m = points.len();
        let space = region.space();
        let dist: Vec<Vec<u32>> = points
            .iter()
            .map(|&a| {
                let row = space.row(a);
                points.iter().map(|&b| row[b]).collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        let degree: Vec<usize> = (0..m)
            .map(|i| (0..m).filter(|&j| j != i && dist[i][j] < r).count())
            .collect();
        order.sort_by(|&a, &b| (std::cmp::Reverse(degree[a]), points[a]).cmp(&(std::cmp::Reverse(degree[b]), points[b])));
        Instance {
            points,
            dist,
            order,
            r,
            bound,
        }
    }

    fn len(&self) -> usize {
        self.points.len()
    }
}

#[derive(Clone)]
struct Component {
    members: Vec<usize>,
    diameter: u32,
}

/// Adds `p` to the components of one color: merges every component within
/// distance < r of p and returns the merged component's diameter, or None
/// when the merge would exceed the bound.
fn try_place(inst: &Instance, comps: &[Component], p: usize) -> Option<(Vec<usize>, Component)> {
    let mut merged_idx = Vec::new();
    let mut diameter = 0u32;
    let mut members = vec![p];
    for (ci, comp) in comps.iter().enumerate() {
        let touches = comp.members.iter().any(|&m| inst.dist[p][m] < inst.r);
        if touches {
            merged_idx.push(ci);
            diameter = diameter.max(comp.diameter);
            members.extend_from_slice(&comp.members);
        }
    }
    for &m in &members {
        diameter = diameter.max(inst.dist[p][m]);
    }
    // cross distances between previously separate components
    for (a, &ma) in members.iter().enumerate() {
        for &mb in members.iter().skip(a + 1) {
            diameter = diameter.max(inst.dist[ma][mb]);
        }
    }
    if diameter > inst.bound {
        None
    } else {
        Some((merged_idx, Component { members, diameter }))
    }
}

fn search(
    inst: &Instance,
    colors: usize,
    pos: usize,
    state: &mut Vec<Vec<Component>>,
    assignment: &mut Vec<usize>,
    budget: &mut u64,
) -> Result<bool, ()> {
    if pos == inst.len() {
        return Ok(true);
    }
    if *budget == 0 {
        return Err(());
    }
    *budget -= 1;
    let p = inst.order[pos];
    let used = state.iter().take_while(|c| !c.is_empty()).count();
    let limit = colors.min(used + 1);
    for color in 0..limit {
        if let Some((merged_idx, merged)) = try_place(inst, &state[color], p) {
            let saved = state[color].clone();
            let mut rest: Vec<Component> = state[color]
                .iter()
                .enumerate()
                .filter(|(i, _)| !merged_idx.contains(i))
                .map(|(_, c)| c.clone())
                .collect();
            rest.push(merged);
            state[color] = rest;
            assignment[p] = color;
            if search(inst, colors, pos + 1, state, assignment, budget)? {
                return Ok(true);
            }
            state[color] = saved;
        }
    }
    Ok(false)
}

fn greedy(inst: &Instance) -> Vec<usize> {
    let mut state: Vec<Vec<Component>> = Vec::new();
    let mut assignment = vec![0usize; inst.len()];
    for &p in &inst.order {
        let mut placed = false;
        for color in 0..state.len() {
            if let Some((merged_idx, merged)) = try_place(inst, &state[color], p) {
                let mut rest: Vec<Component> = state[color]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !merged_idx.contains(i))
                    .map(|(_, c)| c.clone())
                    .collect();
                rest.push(merged);
                state[color] = rest;
                assignment[p] = color;
                placed = true;
                break;
            }
        }
        if !placed {
            state.push(vec![Component {
                members: vec![p],
                diameter: 0,
            }]);
            assignment[p] = state.len() - 1;
        }
    }
    assignment
}

/// Splits the points of one color class into its connected components under
/// the closer-than-r relation; these are the family's pieces.
fn color_components(inst: &Instance, members: &[usize]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = members.to_vec();
    let mut out = Vec::new();
    while let Some(seed) = remaining.pop() {
        let mut comp = vec![seed];
        let mut frontier = vec![seed];
        while let Some(x) = frontier.pop() {
            let mut keep = Vec::new();
            for &y in &remaining {
                if inst.dist[x][y] < inst.r {
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
    out
}

fn families_from_assignment(
    region: &PointSubset,
    inst: &Instance,
    assignment: &[usize],
    colors: usize,
) -> Vec<SubsetFamily> {
    let space = region.space();
    (0..colors)
        .map(|color| {
            let members: Vec<usize> = (0..inst.len()).filter(|&i| assignment[i] == color).collect();
            let pieces = color_components(inst, &members)
                .into_iter()
                .map(|comp| {
                    PointSubset::from_indices(space, comp.into_iter().map(|i| inst.points[i]))
                })
                .collect();
            SubsetFamily::new(space, pieces).expect("pieces live on the region's carrier")
        })
        .collect()
}

/// Minimal n such that the region splits into n+1 r-disjoint B-bounded
/// families, with the witness cover. Exact within the mode's caps;
/// otherwise a greedy upper bound flagged non-exact.
pub fn asdim_at_scale(
    region: &PointSubset,
    r: u32,
    piece_bound: u32,
    mode: SolverMode,
) -> AsdimOutcome {
    let inst = Instance::new(region, r, piece_bound);
    if inst.len() == 0 {
        return AsdimOutcome {
            n: 0,
            exact: true,
            families: vec![SubsetFamily::empty(region.space())],
        };
    }
    let (max_points, mut budget) = match mode {
        SolverMode::Exact {
            max_points,
            node_budget,
        } => (max_points, node_budget),
        SolverMode::Greedy => (0, 0),
    };
    if inst.len() <= max_points {
        let mut exhausted = false;
        for colors in 1..=inst.len() {
            let mut state = vec![Vec::new(); colors];
            let mut assignment = vec![usize::MAX; inst.len()];
            match search(&inst, colors, 0, &mut state, &mut assignment, &mut budget) {
                Ok(true) => {
                    return AsdimOutcome {
                        n: (colors - 1) as u32,
                        exact: true,
                        families: families_from_assignment(region, &inst, &assignment, colors),
                    };
                }
                Ok(false) => {}
                Err(()) => {
                    exhausted = true;
                    break;
                }
            }
        }
        debug_assert!(exhausted, "every point its own color is always feasible");
    }
    let assignment = greedy(&inst);
    let colors = assignment.iter().max().copied().unwrap_or(0) + 1;
    AsdimOutcome {
        n: (colors - 1) as u32,
        exact: false,
        families: families_from_assignment(region, &inst, &assignment, colors),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{FiniteMetricSpace, Space};

    fn z_window(lo: i64, hi: i64) -> Space {
        let labels = (lo..=hi).map(|v| v.to_string()).collect();
        FiniteMetricSpace::from_fn(labels, move |i, j| {
            (i as i64 - j as i64).unsigned_abs() as u32
        })
    }

    fn check_witness(out: &AsdimOutcome, region: &PointSubset, r: u32, bound: u32) {
        assert_eq!(out.families.len(), out.n as usize + 1);
        let mut union = PointSubset::empty(region.space());
        for fam in &out.families {
            assert!(fam.is_r_disjoint(r).ok);
            assert!(fam.max_diameter() <= bound);
            union = union.union(&fam.union());
        }
        assert!(region.is_subset(&union));
    }

    #[test]
    fn bounded_region_needs_one_family() {
        let z = z_window(0, 8);
        let region = PointSubset::full(&z);
        let out = asdim_at_scale(&region, 3, 10, SolverMode::default());
        assert_eq!(out.n, 0);
        assert!(out.exact);
        check_witness(&out, &region, 3, 10);
    }

    #[test]
    fn long_interval_needs_two_families() {
        let z = z_window(0, 63);
        let region = PointSubset::full(&z);
        let out = asdim_at_scale(&region, 5, 10, SolverMode::default());
        assert_eq!(out.n, 1);
        assert!(out.exact);
        check_witness(&out, &region, 5, 10);
    }

    #[test]
    fn greedy_gives_a_valid_bound() {
        let z = z_window(0, 63);
        let region = PointSubset::full(&z);
        let out = asdim_at_scale(&region, 5, 10, SolverMode::Greedy);
        assert!(!out.exact);
        assert!(out.n >= 1);
        check_witness(&out, &region, 5, 10);
    }

    #[test]
    fn empty_region() {
        let z = z_window(0, 5);
        let region = PointSubset::empty(&z);
        let out = asdim_at_scale(&region, 2, 3, SolverMode::default());
        assert_eq!(out.n, 0);
        assert!(out.exact);
    }

    #[test]
    fn monotone_in_r_and_antitone_in_bound() {
        let z = z_window(0, 40);
        let region = PointSubset::full(&z);
        let at = |r: u32, b: u32| asdim_at_scale(&region, r, b, SolverMode::default()).n;
        assert!(at(3, 8) <= at(6, 8));
        assert!(at(3, 12) <= at(3, 6));
    }
}
