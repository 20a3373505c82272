//! Finite groups with an explicit multiplication table, a designated proper
//! length function, and subgroup-lattice enumeration.
//!
//! The stored `lengths` vector is the authoritative length function of the
//! model. For groups built from generators it is the BFS word length and
//! `native_word_length` is true; induced and quotient constructions install
//! their own lengths (restriction, coset minimum) and clear the flag.

use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite group backed by a multiplication table.
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    generators: Vec<usize>,
    lengths: Vec<u32>,
    native_word_length: bool,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table. The table is
    /// validated (closure, identity, inverses, associativity), the generator
    /// list is symmetrized, and word lengths are computed by BFS.
    pub fn from_table(
        name: &str,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Arc<Self>> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Invalid("a group has at least the identity".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("multiplication table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Invalid("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Invalid("table has no identity element".into()))?;
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let ix = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {} has no inverse", labels[x])))?;
            inv[x] = ix as u32;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(format!(
                            "table is not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return Err(Error::Invalid("generator index out of range".into()));
        }
        let mut gens: Vec<usize> = Vec::new();
        for g in generators {
            if g == identity {
                continue;
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
            let gi = inv[g] as usize;
            if gi != identity && !gens.contains(&gi) {
                gens.push(gi);
            }
        }
        gens.sort_unstable();
        let mul: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let mut group = FiniteGroup {
            name: name.to_string(),
            labels,
            mul,
            inv,
            identity,
            generators: gens,
            lengths: Vec::new(),
            native_word_length: true,
        };
        group.lengths = group.bfs_word_lengths(&group.generators)?;
        Ok(Arc::new(group))
    }

    /// The cyclic group Z/mZ with generators {1, m-1}.
    pub fn cyclic(m: usize) -> Arc<Self> {
        assert!(m > 0, "cyclic group order must be positive");
        let labels = (0..m).map(|i| i.to_string()).collect();
        let table = (0..m).map(|i| (0..m).map(|j| (i + j) % m).collect()).collect();
        let gens = if m == 1 { vec![] } else { vec![1] };
        Self::from_table(&format!("Z/{m}"), labels, table, gens).expect("cyclic table is valid")
    }

    /// The direct product, generated by the factors' generators embedded on
    /// each side (so word length is the sum of factor lengths).
    pub fn direct_product(a: &Arc<Self>, b: &Arc<Self>) -> Arc<Self> {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let idx = |x: usize, y: usize| x * nb + y;
        let labels = (0..n)
            .map(|i| format!("({},{})", a.labels[i / nb], b.labels[i % nb]))
            .collect();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        idx(
                            a.mul(i / nb, j / nb),
                            b.mul(i % nb, j % nb),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut gens = Vec::new();
        for &g in &a.generators {
            gens.push(idx(g, b.identity));
        }
        for &h in &b.generators {
            gens.push(idx(a.identity, h));
        }
        Self::from_table(&format!("{}x{}", a.name, b.name), labels, table, gens)
            .expect("product table is valid")
    }

    /// The subgroup of permutations of {0..degree-1} generated by the given
    /// one-line permutations, materialized by closure (capped).
    pub fn from_permutations(
        name: &str,
        degree: usize,
        gens: Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<Arc<Self>> {
        for g in &gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Invalid(format!(
                    "not a permutation of {degree} points: {g:?}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> {
            // apply p first, then q
            p.iter().map(|&x| q[x]).collect()
        };
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut frontier = vec![id.clone()];
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let w = compose(&e, g);
                if !elems.contains(&w) {
                    if elems.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: format!("permutation group {name}"),
                            cap,
                            actual: elems.len() + 1,
                        });
                    }
                    elems.push(w.clone());
                    frontier.push(w);
                }
            }
        }
        elems.sort();
        let index_of = |p: &[usize]| elems.binary_search_by(|e| e.as_slice().cmp(p)).unwrap();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        let table = elems
            .iter()
            .map(|p| elems.iter().map(|q| index_of(&compose(p, q))).collect())
            .collect();
        let gen_indices = gens.iter().map(|g| index_of(g)).collect();
        Self::from_table(name, labels, table, gen_indices)
    }

    /// The symmetric group on `degree` points, generated by the adjacent
    /// transposition and the full cycle.
    pub fn symmetric(degree: usize) -> Arc<Self> {
        let mut t: Vec<usize> = (0..degree).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (1..degree).chain([0]).collect();
        Self::from_permutations(&format!("S{degree}"), degree, vec![t, c], 50_000)
            .expect("symmetric group generators are valid")
    }

    /// The dihedral group of order 2n acting on n points.
    pub fn dihedral(n: usize) -> Arc<Self> {
        let r: Vec<usize> = (1..n).chain([0]).collect();
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&format!("D{n}"), n, vec![r, s], 50_000)
            .expect("dihedral generators are valid")
    }

    /// The alternating group A4.
    pub fn alternating4() -> Arc<Self> {
        Self::from_permutations("A4", 4, vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]], 50_000)
            .expect("A4 generators are valid")
    }

    /// The quaternion group of order 8.
    pub fn quaternion() -> Arc<Self> {
        // Elements i < 8 encode sign (i % 2) and symbol (i / 2) in 1, i, j, k.
        let symbol_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (symbol, extra sign) for the four symbols 0=1,1=i,2=j,3=k
            match (a, b) {
                (0, s) => (s, 0),
                (s, 0) => (s, 0),
                (1, 1) | (2, 2) | (3, 3) => (0, 1),
                (1, 2) => (3, 0),
                (2, 3) => (1, 0),
                (3, 1) => (2, 0),
                (2, 1) => (3, 1),
                (3, 2) => (1, 1),
                (1, 3) => (2, 1),
                _ => unreachable!(),
            }
        };
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let table = (0..8usize)
            .map(|x| {
                (0..8usize)
                    .map(|y| {
                        let (sym, extra) = symbol_mul(x / 2, y / 2);
                        let sign = (x % 2 + y % 2 + extra) % 2;
                        sym * 2 + sign
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Q8", labels, table, vec![2, 4]).expect("quaternion table is valid")
    }

    /// Same group with a different designated length function (for induced
    /// and quotient metrics). The lengths must be a proper length function:
    /// zero exactly at the identity and symmetric under inversion.
    pub fn with_lengths(self: &Arc<Self>, lengths: Vec<u32>, name: &str) -> Result<Arc<Self>> {
        if lengths.len() != self.order() {
            return Err(Error::Invalid("length vector size mismatch".into()));
        }
        if lengths[self.identity] != 0 {
            return Err(Error::Invalid("length of the identity must be 0".into()));
        }
        for x in 0..self.order() {
            if x != self.identity && lengths[x] == 0 {
                return Err(Error::Invalid(format!(
                    "length of non-identity {} must be positive",
                    self.labels[x]
                )));
            }
            if lengths[self.inv(x)] != lengths[x] {
                return Err(Error::Invalid(format!(
                    "length must be symmetric under inversion at {}",
                    self.labels[x]
                )));
            }
        }
        Ok(Arc::new(FiniteGroup {
            name: name.to_string(),
            labels: self.labels.clone(),
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            identity: self.identity,
            generators: self.generators.clone(),
            lengths,
            native_word_length: false,
        }))
    }

    /// A subgroup re-indexed as a standalone group carrying the induced
    /// (restricted) length function.
    pub fn subgroup_as_group(self: &Arc<Self>, members: &[usize], name: &str) -> Result<Arc<Self>> {
        let mut members: Vec<usize> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if !self.is_subgroup(&members) {
            return Err(Error::Invalid(format!(
                "{name}: the given members do not form a subgroup"
            )));
        }
        let pos = |x: usize| members.binary_search(&x).expect("closed under products");
        let labels = members.iter().map(|&x| self.labels[x].clone()).collect();
        let mul = members
            .iter()
            .flat_map(|&a| members.iter().map(move |&b| (a, b)))
            .map(|(a, b)| pos(self.mul(a, b)) as u32)
            .collect();
        let inv = members.iter().map(|&x| pos(self.inv(x)) as u32).collect();
        let identity = pos(self.identity);
        let lengths = members.iter().map(|&x| self.lengths[x]).collect();
        // Every non-identity member is listed as a generator; the induced
        // length is not the word length of any declared set.
        let generators = (0..members.len()).filter(|&i| i != identity).collect();
        Ok(Arc::new(FiniteGroup {
            name: name.to_string(),
            labels,
            mul,
            inv,
            identity,
            generators,
            lengths,
            native_word_length: false,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn length(&self, x: usize) -> u32 {
        self.lengths[x]
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// True when `lengths` is the BFS word length of the declared generators.
    pub fn has_native_word_length(&self) -> bool {
        self.native_word_length
    }

    /// Max length over the group: the diameter of the left-invariant metric.
    pub fn diameter(&self) -> u32 {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// BFS word lengths over a generator index set.
    pub fn bfs_word_lengths(&self, gens: &[usize]) -> Result<Vec<u32>> {
        let n = self.order();
        let mut dist = vec![u32::MAX; n];
        dist[self.identity] = 0;
        let mut frontier = vec![self.identity];
        let mut depth = 0;
        while !frontier.is_empty() {
            depth += 1;
            let mut next = Vec::new();
            for &e in &frontier {
                for &g in gens {
                    let w = self.mul(e, g);
                    if dist[w] == u32::MAX {
                        dist[w] = depth;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        if let Some(x) = (0..n).find(|&x| dist[x] == u32::MAX) {
            return Err(Error::NotGenerating {
                witness: self.labels[x].clone(),
            });
        }
        Ok(dist)
    }

    /// Closure of a seed set under multiplication.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut in_set = vec![false; n];
        in_set[self.identity] = true;
        let mut members = vec![self.identity];
        let mut frontier: Vec<usize> = Vec::new();
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                members.push(s);
                frontier.push(s);
            }
        }
        while let Some(x) = frontier.pop() {
            // products with every current member, both sides
            let snapshot: Vec<usize> = members.clone();
            for &m in &snapshot {
                for w in [self.mul(x, m), self.mul(m, x)] {
                    if !in_set[w] {
                        in_set[w] = true;
                        members.push(w);
                        frontier.push(w);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// True when the sorted index list is closed and contains the identity.
    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        if members.binary_search(&self.identity).is_err() {
            return false;
        }
        members.iter().all(|&a| {
            members
                .iter()
                .all(|&b| members.binary_search(&self.mul(a, b)).is_ok())
        })
    }

    /// Every subgroup, as sorted member lists, ordered by (order, members).
    ///
    /// Enumerated by closing each known subgroup with one extra element;
    /// every subgroup arises this way from the trivial one.
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let mut seen = std::collections::BTreeSet::new();
        let trivial = vec![self.identity];
        seen.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let closed = self.closure(&seed);
                if seen.insert(closed.clone()) {
                    frontier.push(closed);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Is `k` (sorted) normal inside `h` (sorted)?
    pub fn is_normal_in(&self, k: &[usize], h: &[usize]) -> bool {
        h.iter().all(|&x| {
            k.iter().all(|&n| {
                let conj = self.mul(self.mul(x, n), self.inv(x));
                k.binary_search(&conj).is_ok()
            })
        })
    }

    /// Sorted member lists of the normal subgroups of `h`, drawn from
    /// `candidates` (typically `all_subgroups()`).
    pub fn normal_subgroups_in<'a>(
        &self,
        h: &[usize],
        candidates: &'a [Vec<usize>],
    ) -> Vec<&'a Vec<usize>> {
        candidates
            .iter()
            .filter(|k| is_sorted_subset(k, h) && self.is_normal_in(k, h))
            .collect()
    }
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        loop {
            seen[x] = true;
            out.push_str(&x.to_string());
            x = p[x];
            if x == start {
                break;
            }
            out.push(' ');
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}
