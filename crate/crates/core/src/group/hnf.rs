//! Triangular integer bases for sublattices of Z^n: exact membership tests,
//! canonical coset residues, and index computation.
//!
//! The basis rows are brought to an upper-triangular form with positive
//! pivots by integer row reduction. With that shape, successive floor
//! division yields one canonical residue per coset, and exact division
//! decides membership.

use crate::error::{Error, Result};

/// A sublattice of Z^n given by a triangularized basis.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    rank: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    /// Reduces arbitrary generating rows to triangular form.
    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        if generators.iter().any(|r| r.len() != rank) {
            return Err(Error::Invalid(format!(
                "sublattice basis rows must have {rank} coordinates"
            )));
        }
        let mut work: Vec<Vec<i128>> = generators
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..rank {
            loop {
                let mut live: Vec<usize> = (0..work.len()).filter(|&i| work[i][col] != 0).collect();
                if live.is_empty() {
                    break;
                }
                if live.len() == 1 {
                    let mut row = work.remove(live[0]);
                    if row[col] < 0 {
                        for x in row.iter_mut() {
                            *x = -*x;
                        }
                    }
                    rows.push(row);
                    pivots.push(col);
                    break;
                }
                live.sort_by_key(|&i| work[i][col].unsigned_abs());
                let base = work[live[0]].clone();
                for &i in &live[1..] {
                    let q = work[i][col].div_euclid(base[col]);
                    for c in col..rank {
                        work[i][c] -= q * base[c];
                    }
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| {
                        i64::try_from(x).map_err(|_| {
                            Error::Invalid("sublattice basis reduction overflowed i64".into())
                        })
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeBasis { rank, rows, pivots })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Index of the sublattice in Z^n, when finite (full rank).
    pub fn index(&self) -> Option<u64> {
        if self.pivots.len() == self.rank {
            let mut idx: u64 = 1;
            for (k, &p) in self.pivots.iter().enumerate() {
                idx = idx.checked_mul(self.rows[k][p] as u64)?;
            }
            Some(idx)
        } else {
            None
        }
    }

    /// The canonical residue of `v` modulo this sublattice. Residues are
    /// unique per coset when the basis has full rank.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.rank);
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (k, &p) in self.pivots.iter().enumerate() {
            let q = w[p].div_euclid(self.rows[k][p] as i128);
            if q != 0 {
                for c in p..self.rank {
                    w[c] -= q * self.rows[k][c] as i128;
                }
            }
        }
        w.into_iter().map(|x| x as i64).collect()
    }

    /// Exact membership of `v` in the sublattice.
    pub fn contains(&self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.rank);
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (k, &p) in self.pivots.iter().enumerate() {
            let pivot = self.rows[k][p] as i128;
            if w[p] % pivot != 0 {
                return false;
            }
            let q = w[p] / pivot;
            if q != 0 {
                for c in p..self.rank {
                    w[c] -= q * self.rows[k][c] as i128;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_sublattice_of_z() {
        let b = LatticeBasis::new(1, vec![vec![6]]).unwrap();
        assert_eq!(b.index(), Some(6));
        assert!(b.contains(&[12]));
        assert!(b.contains(&[-6]));
        assert!(!b.contains(&[4]));
        assert_eq!(b.reduce(&[4]), vec![4]);
        assert_eq!(b.reduce(&[-1]), vec![5]);
        assert_eq!(b.reduce(&[13]), vec![1]);
    }

    #[test]
    fn rank_two_full_rank() {
        let b = LatticeBasis::new(2, vec![vec![2, 2], vec![4, -4]]).unwrap();
        assert_eq!(b.index(), Some(16));
        assert!(b.contains(&[2, 2]));
        assert!(b.contains(&[6, -2]));
        assert!(!b.contains(&[1, 1]));
        // Residues are canonical: any two lattice-equivalent vectors agree.
        let r1 = b.reduce(&[3, 1]);
        let r2 = b.reduce(&[5, 3]);
        assert_eq!(r1, r2);
        // Count distinct residues over a window: must equal the index.
        let mut seen = std::collections::HashSet::new();
        for x in -8..8 {
            for y in -8..8 {
                seen.insert(b.reduce(&[x, y]));
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn diagonal_basis() {
        let b = LatticeBasis::new(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(b.index(), Some(6));
        assert_eq!(b.reduce(&[-1, -1]), vec![1, 2]);
    }

    #[test]
    fn not_full_rank_has_no_index() {
        let b = LatticeBasis::new(2, vec![vec![2, 0]]).unwrap();
        assert_eq!(b.index(), None);
        assert!(b.contains(&[4, 0]));
        assert!(!b.contains(&[0, 2]));
        assert!(!b.contains(&[1, 0]));
    }

    #[test]
    fn redundant_generators_collapse() {
        let b = LatticeBasis::new(1, vec![vec![4], vec![6]]).unwrap();
        assert_eq!(b.index(), Some(2));
        assert!(b.contains(&[2]));
        assert!(!b.contains(&[3]));
    }
}
