//! Sparse matrices and incremental echelon forms over 𝔽_p.

use std::collections::HashMap;

use super::Barrett;

/// Row-major sparse integer matrix; each row sorted by column with no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Accumulates `v` at (r, c).
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                row[i].1 += v;
                if row[i].1 == 0 {
                    row.remove(i);
                }
            }
            Err(i) => {
                if v != 0 {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.ncols, self.nrows);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                t.rows[c].push((r, v));
            }
        }
        t
    }

    pub fn rank_mod_p(&self, p: u64) -> usize {
        let mut e = SparseEchelon::new(p);
        for row in &self.rows {
            e.insert_i64(row);
        }
        e.rank()
    }
}

/// Row echelon basis over 𝔽_p keyed by leading column, leading entries 1.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    b: Barrett,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

impl SparseEchelon {
    pub fn new(p: u64) -> Self {
        SparseEchelon { b: Barrett::new(p), pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn insert_i64(&mut self, row: &[(usize, i64)]) -> bool {
        let r = row.iter().map(|&(c, v)| (c, self.b.from_i64(v))).filter(|e| e.1 != 0).collect();
        self.insert(r)
    }

    /// Reduces `row` against the basis; keeps it if independent.
    pub fn insert(&mut self, mut row: Vec<(usize, u64)>) -> bool {
        let p = self.b.modulus();
        loop {
            let Some(&(lead, lv)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(piv) => {
                    let f = p - lv;
                    let mut out = Vec::with_capacity(row.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < piv.len() {
                        let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
                        let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
                        if take_row {
                            out.push(row[i]);
                            i += 1;
                        } else if take_piv {
                            out.push((piv[j].0, self.b.mul(f, piv[j].1)));
                            j += 1;
                        } else {
                            let v = self.b.reduce(row[i].1 + self.b.mul(f, piv[j].1));
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let inv = self.b.inv(lv);
                    for e in row.iter_mut() {
                        e.1 = self.b.mul(e.1, inv);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}
