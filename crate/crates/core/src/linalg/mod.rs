//! Exact linear algebra over ℤ and 𝔽_p: modular determinants and solves,
//! CRT reconstruction, sparse ranks and Smith invariants.

mod smith;
mod sparse;

pub use smith::smith_invariants;
pub use sparse::{SparseEchelon, SparseMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::field::is_prime;

/// Barrett reduction for a fixed modulus p < 2³¹.
#[derive(Clone, Copy, Debug)]
pub struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 31));
        Barrett { p, m: ((1u128 << 64) / p as u128) as u64 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let mut r = x - q.wrapping_mul(self.p);
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

/// `count` primes below 2³⁰ in decreasing order, skipping those for which `avoid` holds.
pub fn primes_30bit(count: usize, avoid: impl Fn(u64) -> bool) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 30) - 1;
    while out.len() < count {
        if is_prime(c) && !avoid(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn scaled(&self, k: i64) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    /// log₂ of min(Π row norms, Π column norms), rounded up per factor.
    pub fn hadamard_log2(&self) -> f64 {
        let mut rows = vec![0f64; self.rows];
        let mut cols = vec![0f64; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c) as f64;
                rows[r] += v * v;
                cols[c] += v * v;
            }
        }
        let lg = |v: &[f64]| v.iter().map(|s| if *s > 0.0 { 0.5 * s.log2() } else { 0.0 }).sum::<f64>();
        lg(&rows).min(lg(&cols))
    }

    /// log₂ of Π column norms; bounds every Cramer numerator for a unit right-hand side.
    pub fn column_hadamard_log2(&self) -> f64 {
        let mut cols = vec![0f64; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c) as f64;
                cols[c] += v * v;
            }
        }
        cols.iter().map(|s| if *s > 0.0 { 0.5 * s.log2() } else { 0.0 }).sum()
    }

    fn reduced(&self, b: &Barrett) -> Vec<u64> {
        self.data.iter().map(|&v| b.from_i64(v)).collect()
    }
}

/// Determinant modulo p by Gaussian elimination.
pub fn det_mod_p(m: &IntMatrix, p: u64) -> u64 {
    assert_eq!(m.rows, m.cols);
    let b = Barrett::new(p);
    let n = m.rows;
    let mut a = m.reduced(&b);
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| a[r * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = (p - det) % p;
        }
        let pv = a[k * n + k];
        det = b.mul(det, pv);
        let inv = b.inv(pv);
        let (head, tail) = a.split_at_mut((k + 1) * n);
        let prow = &head[k * n..(k + 1) * n];
        for row in tail.chunks_exact_mut(n) {
            let f = row[k];
            if f == 0 {
                continue;
            }
            let f = p - b.mul(f, inv);
            for c in k..n {
                row[c] = b.reduce(row[c] + f * prow[c]);
            }
        }
    }
    det
}

/// Rank of a dense matrix over 𝔽_P for a small prime P.
pub fn rank_small_prime<const P: u32>(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<u32> = m.data.iter().map(|&v| v.rem_euclid(P as i64) as u32).collect();
    let inv = |x: u32| (1..P).find(|y| x * y % P == 1).expect("unit");
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if piv != rank {
            for j in 0..cols {
                a.swap(rank * cols + j, piv * cols + j);
            }
        }
        let iv = inv(a[rank * cols + c]);
        for j in c..cols {
            a[rank * cols + j] = a[rank * cols + j] * iv % P;
        }
        let (head, tail) = a.split_at_mut((rank + 1) * cols);
        let prow = &head[rank * cols..(rank + 1) * cols];
        for row in tail.chunks_exact_mut(cols) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let f = P - f;
            for j in c..cols {
                row[j] = (row[j] + f * prow[j]) % P;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over 𝔽₂ with packed rows.
pub fn rank_gf2(m: &IntMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            let mut w = vec![0u64; words];
            for c in 0..m.cols {
                if m.get(r, c) & 1 != 0 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let (wi, bit) = (c / 64, 1u64 << (c % 64));
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let prow = rows[rank].clone();
        for row in rows[rank + 1..].iter_mut() {
            if row[wi] & bit != 0 {
                for (x, y) in row[wi..].iter_mut().zip(&prow[wi..]) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves A x = b modulo p for square nonsingular A; None if singular mod p.
pub fn solve_mod_p(m: &IntMatrix, rhs: &[i64], p: u64) -> Option<Vec<u64>> {
    assert_eq!(m.rows, m.cols);
    let b = Barrett::new(p);
    let n = m.rows;
    let w = n + 1;
    let mut a = vec![0u64; n * w];
    for r in 0..n {
        for c in 0..n {
            a[r * w + c] = b.from_i64(m.get(r, c));
        }
        a[r * w + n] = b.from_i64(rhs[r]);
    }
    for k in 0..n {
        let piv = (k..n).find(|&r| a[r * w + k] != 0)?;
        if piv != k {
            for c in 0..w {
                a.swap(k * w + c, piv * w + c);
            }
        }
        let inv = b.inv(a[k * w + k]);
        for c in k..w {
            a[k * w + c] = b.mul(a[k * w + c], inv);
        }
        let (head, tail) = a.split_at_mut((k + 1) * w);
        let prow = &head[k * w..(k + 1) * w];
        for row in tail.chunks_exact_mut(w) {
            let f = row[k];
            if f == 0 {
                continue;
            }
            let f = p - f;
            for c in k..w {
                row[c] = b.reduce(row[c] + f * prow[c]);
            }
        }
    }
    let mut x = vec![0u64; n];
    for k in (0..n).rev() {
        let mut s = a[k * w + n];
        for c in k + 1..n {
            s = b.reduce(s + (p - b.mul(a[k * w + c], x[c])));
        }
        x[k] = s;
    }
    Some(x)
}

/// Incremental Chinese remaindering with symmetric lift.
#[derive(Clone, Debug)]
pub struct Crt {
    value: BigInt,
    modulus: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Crt { value: BigInt::zero(), modulus: BigInt::one() }
    }
}

impl Crt {
    pub fn push(&mut self, r: u64, p: u64) {
        let pb = BigInt::from(p);
        let cur = (&self.value).mod_floor(&pb);
        let cur = u64::try_from(cur).expect("reduced");
        let br = Barrett::new(p);
        let minv = br.inv(u64::try_from(self.modulus.mod_floor(&pb)).expect("reduced"));
        let t = br.mul((r + p - cur) % p, minv);
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= pb;
    }

    pub fn modulus_log2(&self) -> f64 {
        self.modulus.bits() as f64 - 1.0
    }

    /// Representative in (−M/2, M/2].
    pub fn symmetric(&self) -> BigInt {
        let half = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

/// Number of 30-bit primes whose product exceeds 2^(bits + 1).
pub fn primes_needed(bits: f64) -> usize {
    ((bits + 2.0) / 29.0).ceil().max(1.0) as usize
}

#[derive(Clone, Debug)]
pub struct ExactDet {
    pub det: BigInt,
    pub primes: Vec<u64>,
    pub hadamard_log2: f64,
}

/// Exact determinant by multi-modular CRT under the Hadamard bound.
pub fn det_exact(m: &IntMatrix) -> ExactDet {
    if m.rows != m.cols || has_zero_line(m) {
        return ExactDet { det: BigInt::zero(), primes: Vec::new(), hadamard_log2: f64::NEG_INFINITY };
    }
    let hadamard_log2 = m.hadamard_log2();
    let primes = primes_30bit(primes_needed(hadamard_log2), |_| false);
    let residues: Vec<u64> = primes.par_iter().map(|&p| det_mod_p(m, p)).collect();
    let mut crt = Crt::default();
    for (&r, &p) in residues.iter().zip(&primes) {
        crt.push(r, p);
    }
    ExactDet { det: crt.symmetric(), primes, hadamard_log2 }
}

fn has_zero_line(m: &IntMatrix) -> bool {
    let mut col_used = vec![false; m.cols];
    for r in 0..m.rows {
        let row = &m.data[r * m.cols..(r + 1) * m.cols];
        if row.iter().all(|&v| v == 0) {
            return true;
        }
        for (c, &v) in row.iter().enumerate() {
            col_used[c] |= v != 0;
        }
    }
    col_used.iter().any(|u| !u)
}

/// Exact solution of A x = e_j for square nonsingular A, as (d, y) with
/// x = y / d and d = det A. Numerators come from Cramer's rule, bounded by
/// the column Hadamard bound.
pub fn solve_unit_exact(m: &IntMatrix, j: usize, det: &ExactDet) -> Option<Vec<BigInt>> {
    if det.det.is_zero() {
        return None;
    }
    let n = m.rows;
    let bits = m.column_hadamard_log2().max(det.hadamard_log2);
    let need = primes_needed(bits);
    let mut rhs = vec![0i64; n];
    rhs[j] = 1;
    let mut primes = Vec::with_capacity(need);
    let mut c = (1u64 << 30) - 1;
    while primes.len() < need {
        if is_prime(c) && !(&det.det % BigInt::from(c)).is_zero() {
            primes.push(c);
        }
        c -= 2;
    }
    let sols: Vec<(u64, Vec<u64>)> = primes
        .par_iter()
        .map(|&p| {
            let b = Barrett::new(p);
            let d = u64::try_from(det.det.mod_floor(&BigInt::from(p))).expect("reduced");
            let x = solve_mod_p(m, &rhs, p).expect("nonsingular mod p");
            (p, x.into_iter().map(|v| b.mul(v, d)).collect())
        })
        .collect();
    let mut crts = vec![Crt::default(); n];
    for (p, x) in &sols {
        for (c, v) in crts.iter_mut().zip(x) {
            c.push(*v, *p);
        }
    }
    Some(crts.iter().map(|c| c.symmetric()).collect())
}

/// Sum of |x| bits over a vector, for diagnostics.
pub fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.abs().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bareiss(m: &IntMatrix) -> BigInt {
        let n = m.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| BigInt::from(m.get(r, c))).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn random(n: usize, seed: u64) -> IntMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        IntMatrix { rows: n, cols: n, data: (0..n * n).map(|_| rng.random_range(-3..=3)).collect() }
    }

    #[test]
    fn det_matches_bareiss() {
        for seed in 0..10 {
            let m = random(12, seed);
            assert_eq!(det_exact(&m).det, bareiss(&m));
        }
    }

    #[test]
    fn small_prime_ranks() {
        for seed in 0..5 {
            let m = random(20, seed);
            let d = bareiss(&m);
            let full = |p: i64| !(&d % BigInt::from(p)).is_zero();
            assert_eq!(rank_gf2(&m) == 20, full(2));
            assert_eq!(rank_small_prime::<3>(&m) == 20, full(3));
            assert_eq!(rank_small_prime::<7>(&m) == 20, full(7));
        }
    }

    #[test]
    fn cramer_solution() {
        let m = random(10, 99);
        let det = det_exact(&m);
        let y = solve_unit_exact(&m, 3, &det).unwrap();
        for r in 0..10 {
            let s: BigInt = (0..10).map(|c| BigInt::from(m.get(r, c)) * &y[c]).sum();
            assert_eq!(s, if r == 3 { det.det.clone() } else { BigInt::zero() });
        }
    }

    #[test]
    fn crt_negative() {
        let mut c = Crt::default();
        for p in primes_30bit(3, |_| false) {
            c.push(BigInt::from(-123456789i64).mod_floor(&BigInt::from(p)).try_into().unwrap(), p);
        }
        assert_eq!(c.symmetric(), BigInt::from(-123456789i64));
    }
}
