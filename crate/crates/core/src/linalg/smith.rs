//! Smith invariants of integer matrices: sparse elimination on unit pivots,
//! then a dense reduction of the remaining core.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseMatrix;

/// Nonzero invariant factors d₁ | d₂ | … of `m`; their count is the rank.
pub fn smith_invariants(m: &SparseMatrix) -> Vec<BigInt> {
    let mut rows: Vec<Option<BTreeMap<usize, BigInt>>> =
        m.rows.iter().map(|r| Some(r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.ncols];
    for (r, row) in m.rows.iter().enumerate() {
        for &(c, _) in row {
            col_rows[c].insert(r);
        }
    }
    let mut ones = 0usize;
    while let Some((pr, pc)) = unit_pivot(&rows, &col_rows) {
        let prow = rows[pr].take().expect("live pivot row");
        let pv = prow[&pc].clone();
        for &c in prow.keys() {
            col_rows[c].remove(&pr);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let row = rows[r].as_mut().expect("live row");
            let f = &row[&pc] * &pv;
            for (c, v) in &prow {
                let e = row.entry(*c).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(c);
                    col_rows[*c].remove(&r);
                } else {
                    col_rows[*c].insert(r);
                }
            }
        }
        ones += 1;
    }
    let live: Vec<&BTreeMap<usize, BigInt>> = rows.iter().flatten().filter(|r| !r.is_empty()).collect();
    let cols: Vec<usize> = col_rows.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(c, _)| c).collect();
    let index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense: Vec<Vec<BigInt>> = live
        .iter()
        .map(|r| {
            let mut v = vec![BigInt::zero(); cols.len()];
            for (c, x) in r.iter() {
                v[index[c]] = x.clone();
            }
            v
        })
        .collect();
    let mut inv = vec![BigInt::one(); ones];
    inv.extend(dense_diagonal(&mut dense));
    normalize(inv)
}

/// A ±1 entry with small Markowitz cost, or None.
fn unit_pivot(rows: &[Option<BTreeMap<usize, BigInt>>], col_rows: &[BTreeSet<usize>]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    let mut seen = 0;
    let mut order: Vec<(usize, usize)> = rows.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|r| (r.len(), i))).filter(|x| x.0 > 0).collect();
    order.sort_unstable();
    for (len, r) in order {
        let row = rows[r].as_ref().expect("live");
        for (c, v) in row {
            if v.abs().is_one() {
                let cost = (len - 1) * (col_rows[*c].len() - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, r, *c));
                }
                seen += 1;
            }
        }
        if seen >= 64 || best.is_some_and(|b| b.0 == 0) {
            break;
        }
    }
    best.map(|b| (b.1, b.2))
}

fn dense_diagonal(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        let Some((r, c)) = min_entry(a, t, t..nr, t..nc) else {
            break;
        };
        a.swap(t, r);
        for row in a.iter_mut() {
            row.swap(t, c);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..nc {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            let (r, c) = min_entry(a, t, t..nr, t..t + 1)
                .into_iter()
                .chain(min_entry(a, t, t..t + 1, t..nc))
                .min_by_key(|&(r, c)| a[r][c].abs())
                .expect("nonzero entry");
            a.swap(t, r);
            for row in a.iter_mut() {
                row.swap(t, c);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(a: &[Vec<BigInt>], _t: usize, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            if !a[r][c].is_zero() && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Turns a diagonal into the divisibility chain with the same cokernel.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(v: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(v.len(), v[0].len());
        for (r, row) in v.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                m.add(r, c, x);
            }
        }
        m
    }

    #[test]
    fn known_forms() {
        let m = from_dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(smith_invariants(&m), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let m = from_dense(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(smith_invariants(&m), vec![BigInt::from(1), BigInt::from(2)]);
        let m = from_dense(&[&[0, 0], &[0, 0]]);
        assert!(smith_invariants(&m).is_empty());
    }

    #[test]
    fn product_is_abs_det() {
        let m = from_dense(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let p: BigInt = smith_invariants(&m).iter().product();
        assert_eq!(p, BigInt::from(90));
    }
}
