//! Integer lattice groups Z^n with a declared symmetric generating set and a
//! windowed breadth-first word-length oracle.
//!
//! The standard generating set gets a closed-form l1 fast path; any other
//! generating set is resolved by BFS on the Cayley graph, with the window
//! radius as the budget. The BFS cache is filled idempotently behind a lock,
//! so shared models can be queried concurrently.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};

/// Z^n with declared generators and a BFS window.
pub struct LatticeGroup {
    name: String,
    rank: usize,
    generators: Vec<Vec<i64>>,
    window: u32,
    standard: bool,
    bfs: Mutex<BfsCache>,
}

struct BfsCache {
    dist: HashMap<Vec<i64>, u32>,
    frontier: Vec<Vec<i64>>,
    depth: u32,
}

impl LatticeGroup {
    /// Builds Z^`rank` generated by `generators` (inverses are added
    /// automatically), with BFS budget `window`.
    pub fn new(name: &str, rank: usize, generators: Vec<Vec<i64>>, window: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("lattice rank must be positive".into()));
        }
        if generators.is_empty() {
            return Err(Error::Invalid("lattice needs at least one generator".into()));
        }
        if generators.iter().any(|g| g.len() != rank) {
            return Err(Error::Invalid(format!(
                "lattice generators must have {rank} coordinates"
            )));
        }
        if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::Invalid("the identity is not a generator".into()));
        }
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for g in generators {
            let neg: Vec<i64> = g.iter().map(|&x| -x).collect();
            if !gens.contains(&g) {
                gens.push(g);
            }
            if !gens.contains(&neg) {
                gens.push(neg);
            }
        }
        gens.sort();
        let standard = {
            let mut expected: Vec<Vec<i64>> = Vec::new();
            for i in 0..rank {
                let mut e = vec![0i64; rank];
                e[i] = 1;
                expected.push(e.clone());
                e[i] = -1;
                expected.push(e);
            }
            expected.sort();
            gens == expected
        };
        let identity = vec![0i64; rank];
        let mut dist = HashMap::new();
        dist.insert(identity.clone(), 0);
        Ok(LatticeGroup {
            name: name.to_string(),
            rank,
            generators: gens,
            window,
            standard,
            bfs: Mutex::new(BfsCache {
                dist,
                frontier: vec![identity],
                depth: 0,
            }),
        })
    }

    /// Z with the standard generators.
    pub fn z(window: u32) -> Self {
        Self::new("Z", 1, vec![vec![1]], window).expect("standard Z is valid")
    }

    /// Z^n with the standard generators.
    pub fn zn(rank: usize, window: u32) -> Self {
        let gens = (0..rank)
            .map(|i| {
                let mut e = vec![0i64; rank];
                e[i] = 1;
                e
            })
            .collect();
        Self::new(&format!("Z^{rank}"), rank, gens, window).expect("standard Z^n is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// True when the declared generators are exactly the standard ones.
    pub fn has_standard_generators(&self) -> bool {
        self.standard
    }

    /// Word length of `v`. Closed-form l1 for standard generators,
    /// otherwise BFS bounded by the window.
    pub fn word_length(&self, v: &[i64]) -> Result<u32> {
        debug_assert_eq!(v.len(), self.rank);
        if self.standard {
            return Ok(l1(v));
        }
        {
            let cache = self.bfs.lock().unwrap();
            if let Some(&d) = cache.dist.get(v) {
                return Ok(d);
            }
        }
        for depth in 1..=self.window {
            self.extend_bfs(depth);
            let cache = self.bfs.lock().unwrap();
            if let Some(&d) = cache.dist.get(v) {
                return Ok(d);
            }
            if cache.frontier.is_empty() {
                break;
            }
        }
        Err(Error::OutOfWindow {
            needed: self.window + 1,
            window: self.window,
            context: format!("computing word length of {v:?} in {}", self.name),
        })
    }

    fn extend_bfs(&self, depth: u32) {
        let mut cache = self.bfs.lock().unwrap();
        while cache.depth < depth && !cache.frontier.is_empty() {
            let frontier = std::mem::take(&mut cache.frontier);
            let next_depth = cache.depth + 1;
            let mut next = Vec::new();
            for e in &frontier {
                for g in &self.generators {
                    let w: Vec<i64> = e.iter().zip(g).map(|(a, b)| a + b).collect();
                    if !cache.dist.contains_key(&w) {
                        cache.dist.insert(w.clone(), next_depth);
                        next.push(w);
                    }
                }
            }
            cache.frontier = next;
            cache.depth = next_depth;
        }
    }

    /// All vectors of word length <= `bound`, sorted by (length, lex order).
    pub fn elements_up_to(&self, bound: u32) -> Result<Vec<(u32, Vec<i64>)>> {
        if bound > self.window {
            return Err(Error::OutOfWindow {
                needed: bound,
                window: self.window,
                context: format!("enumerating a ball in {}", self.name),
            });
        }
        let mut out: Vec<(u32, Vec<i64>)> = if self.standard {
            let mut acc = Vec::new();
            let mut v = vec![0i64; self.rank];
            enumerate_l1(&mut acc, &mut v, 0, bound as i64);
            acc.into_iter().map(|v| (l1(&v), v)).collect()
        } else {
            self.extend_bfs(bound);
            let cache = self.bfs.lock().unwrap();
            cache
                .dist
                .iter()
                .filter(|&(_, &d)| d <= bound)
                .map(|(v, &d)| (d, v.clone()))
                .collect()
        };
        out.sort();
        Ok(out)
    }
}

fn l1(v: &[i64]) -> u32 {
    v.iter().map(|&x| x.unsigned_abs() as u32).sum()
}

fn enumerate_l1(acc: &mut Vec<Vec<i64>>, v: &mut Vec<i64>, coord: usize, budget: i64) {
    if coord == v.len() {
        acc.push(v.clone());
        return;
    }
    for x in -budget..=budget {
        v[coord] = x;
        enumerate_l1(acc, v, coord + 1, budget - x.abs());
        v[coord] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_z2_word_length_is_l1() {
        let g = LatticeGroup::zn(2, 50);
        assert_eq!(g.word_length(&[2, -3]).unwrap(), 5);
        assert_eq!(g.word_length(&[0, 0]).unwrap(), 0);
    }

    #[test]
    fn l1_fast_path_matches_bfs() {
        // Same group, one copy forced through BFS via a redundant listing of
        // the standard generators plus (1,1), which changes the metric; so
        // instead compare the standard model against a BFS-only clone by
        // listing the standard generators in a non-standard order. The
        // constructor canonicalizes order, so force BFS by using generators
        // {±1, ±3} on Z and checking against a direct computation.
        let g = LatticeGroup::new("Z(1,3)", 1, vec![vec![1], vec![3]], 40).unwrap();
        // l(n) = min(a + b) with a + 3b = n over signed words; brute force it.
        let brute = |n: i64| -> u32 {
            let mut best = u32::MAX;
            for a in -15i64..=15 {
                for b in -15i64..=15 {
                    if a + 3 * b == n {
                        best = best.min((a.unsigned_abs() + b.unsigned_abs()) as u32);
                    }
                }
            }
            best
        };
        for n in -12..=12 {
            assert_eq!(g.word_length(&[n]).unwrap(), brute(n), "n={n}");
        }
    }

    #[test]
    fn ball_sizes() {
        let g = LatticeGroup::zn(2, 10);
        // l1 ball of radius 2 in Z^2 has 13 points.
        assert_eq!(g.elements_up_to(2).unwrap().len(), 13);
        let z = LatticeGroup::z(10);
        assert_eq!(z.elements_up_to(3).unwrap().len(), 7);
    }

    #[test]
    fn window_is_enforced() {
        let g = LatticeGroup::new("Z(2,3)", 1, vec![vec![2], vec![3]], 4).unwrap();
        assert!(g.word_length(&[1]).is_ok()); // 1 = 3 - 2, length 2
        assert!(matches!(
            g.word_length(&[100]),
            Err(Error::OutOfWindow { .. })
        ));
        assert!(matches!(g.elements_up_to(9), Err(Error::OutOfWindow { .. })));
    }

    #[test]
    fn generators_are_symmetrized() {
        let g = LatticeGroup::new("Z(2,3)", 1, vec![vec![2], vec![3]], 10).unwrap();
        assert_eq!(g.generators().len(), 4);
        assert_eq!(g.word_length(&[-2]).unwrap(), 1);
    }
}
