//! Numerical unitary toolkit: eigenprojectors, diagonalizers, commutants and
//! the simultaneous block diagonalization used for the centralizer bound.

pub mod groups;

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Group;
use crate::cyclotomic::{cyclo, CycloNum};
use crate::error::{Error, Result};
pub use groups::{ExactMat, Irrep, TestGroup};

pub type C64 = Complex<f64>;
pub type UMatrix = DMatrix<C64>;

pub const PROJECTOR_TOL: f64 = 1e-8;
pub const GRAM_SCHMIDT_TOL: f64 = 1e-10;
pub const DIAGONAL_TOL: f64 = 1e-8;
pub const COMMUTE_TOL: f64 = 1e-8;
pub const NULLSPACE_TOL: f64 = 1e-8;

fn max_abs(m: &UMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// max |M*M − I|.
pub fn unitarity_residual(m: &UMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - UMatrix::identity(n, n)))
}

pub fn off_diagonal_residual(m: &UMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                r = r.max(m[(i, j)].norm());
            }
        }
    }
    r
}

fn zeta(n: u64, k: i64) -> C64 {
    let t = std::f64::consts::TAU * (k.rem_euclid(n as i64)) as f64 / n as f64;
    Complex::new(t.cos(), t.sin())
}

/// P_j = (1/n) Σ_k ζ_n^{−jk} M^k for j = 0..n, given M^n = I.
///
/// Checks M^n = I, P_j² = P_j, P_j* = P_j, Σ P_j = I and M P_j = ζ^j P_j.
pub fn eigenprojectors(m: &UMatrix, n: u64) -> Result<Vec<UMatrix>> {
    let d = m.nrows();
    let id = UMatrix::identity(d, d);
    let mut powers = Vec::with_capacity(n as usize);
    let mut p = id.clone();
    for _ in 0..n {
        powers.push(p.clone());
        p = &p * m;
    }
    if max_abs(&(&p - &id)) > PROJECTOR_TOL {
        return Err(Error::Tolerance(format!("M^{n} differs from I")));
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut total = UMatrix::zeros(d, d);
    for j in 0..n as i64 {
        let mut pj = UMatrix::zeros(d, d);
        for (k, mk) in powers.iter().enumerate() {
            pj += mk * zeta(n, -j * k as i64);
        }
        pj /= Complex::new(n as f64, 0.0);
        let idem = max_abs(&(&pj * &pj - &pj));
        let herm = max_abs(&(pj.adjoint() - &pj));
        let eig = max_abs(&(m * &pj - &pj * zeta(n, j)));
        if idem.max(herm).max(eig) > PROJECTOR_TOL {
            return Err(Error::Tolerance(format!("eigenprojector {j}: residual {:.3e}", idem.max(herm).max(eig))));
        }
        total += &pj;
        out.push(pj);
    }
    if max_abs(&(&total - &id)) > PROJECTOR_TOL {
        return Err(Error::Tolerance("eigenprojectors do not sum to I".into()));
    }
    Ok(out)
}

/// Orthonormal basis of the column space of `p`, by modified Gram–Schmidt
/// with column pivoting.
pub fn orthonormal_basis(p: &UMatrix) -> UMatrix {
    let mut cols: Vec<nalgebra::DVector<C64>> = (0..p.ncols()).map(|j| p.column(j).into_owned()).collect();
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::new();
    loop {
        let (best, norm) = cols
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == usize::MAX || norm <= GRAM_SCHMIDT_TOL {
            break;
        }
        let v = cols.swap_remove(best) / Complex::new(norm, 0.0);
        for c in cols.iter_mut() {
            let proj = v.dotc(c);
            *c -= &v * proj;
        }
        basis.push(v);
    }
    if basis.is_empty() {
        return UMatrix::zeros(p.nrows(), 0);
    }
    UMatrix::from_columns(&basis)
}

/// A random complex matrix with entries uniform in the unit square.
pub fn random_mixing(n: usize, rng: &mut impl Rng) -> UMatrix {
    UMatrix::from_fn(n, n, |_, _| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Unitary D with D M D* diagonal; also returns the eigenvalue exponent j
/// (eigenvalue ζ_n^j) of every diagonal slot. With a seed the eigenspace
/// bases are reseeded by a random right factor.
pub fn diagonalizer(m: &UMatrix, n: u64, seed: Option<u64>) -> Result<(UMatrix, Vec<u32>)> {
    let d = m.nrows();
    let projectors = eigenprojectors(m, n)?;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut columns = Vec::with_capacity(d);
    let mut exps = Vec::with_capacity(d);
    for (j, pj) in projectors.iter().enumerate() {
        let src = match rng.as_mut() {
            Some(r) => pj * random_mixing(d, r),
            None => pj.clone(),
        };
        let v = orthonormal_basis(&src);
        for c in 0..v.ncols() {
            columns.push(v.column(c).into_owned());
            exps.push(j as u32);
        }
    }
    if columns.len() != d {
        return Err(Error::Tolerance(format!("eigenspace bases span {} of {d} dimensions", columns.len())));
    }
    let v = UMatrix::from_columns(&columns);
    let dm = v.adjoint();
    if unitarity_residual(&dm) > DIAGONAL_TOL {
        return Err(Error::Tolerance("diagonalizer is not unitary".into()));
    }
    Ok((dm, exps))
}

fn commutator_operator(set: &[UMatrix]) -> UMatrix {
    let m = set[0].nrows();
    let id = UMatrix::identity(m, m);
    let mut k = UMatrix::zeros(set.len() * m * m, m * m);
    for (s_idx, s) in set.iter().enumerate() {
        let block = id.kronecker(s) - s.transpose().kronecker(&id);
        k.view_mut((s_idx * m * m, 0), (m * m, m * m)).copy_from(&block);
    }
    k
}

/// Basis of {X : XS = SX for all S in `set`}, from the SVD nullspace of the
/// stacked commutator operator.
pub fn commutant_basis(set: &[UMatrix]) -> Vec<UMatrix> {
    let m = set[0].nrows();
    let k = commutator_operator(set);
    let svd = k.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    // a numerically scalar set has an operator made of roundoff; scale by the inputs too
    let scale = set.iter().map(max_abs).fold(0.0, f64::max);
    let smax = svd.singular_values.iter().cloned().fold(scale, f64::max);
    let cut = NULLSPACE_TOL * smax;
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            let row = vt.row(i);
            out.push(UMatrix::from_fn(m, m, |r, c| row[c * m + r].conj()));
        }
    }
    out
}

pub fn commutant_dim(set: &[UMatrix]) -> usize {
    commutant_basis(set).len()
}

/// Whether conjugation by the unitary M fixes every matrix unit E_jk.
pub fn ad_central_trivial(m: &UMatrix) -> bool {
    let d = m.nrows();
    let inv = m.adjoint();
    (0..d * d).all(|k| {
        let mut e = UMatrix::zeros(d, d);
        e[(k / d, k % d)] = Complex::new(1.0, 0.0);
        max_abs(&(m * &e * &inv - &e)) <= COMMUTE_TOL
    })
}

/// Direct sum of irreducibles of a test group, with repeated blocks allowed.
#[derive(Clone, Debug)]
pub struct BlockRep {
    pub group: Arc<TestGroup>,
    pub blocks: Vec<usize>,
    pub dim: usize,
    images: Vec<UMatrix>,
}

impl BlockRep {
    pub fn new(group: Arc<TestGroup>, blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() || blocks.iter().any(|&b| b >= group.irreps.len()) {
            return Err(Error::Precondition("block index out of range".into()));
        }
        let dim = blocks.iter().map(|&b| group.irreps[b].dim).sum();
        let images = (0..group.order())
            .map(|g| {
                let mut m = UMatrix::zeros(dim, dim);
                let mut off = 0;
                for &b in &blocks {
                    let img = &group.irreps[b].images[g];
                    m.view_mut((off, off), img.shape()).copy_from(img);
                    off += img.nrows();
                }
                m
            })
            .collect();
        Ok(BlockRep { group, blocks, dim, images })
    }

    /// Every irreducible once, plus one extra copy of the largest one (the
    /// first nontrivial one if all are linear).
    pub fn standard(group: Arc<TestGroup>) -> Result<Self> {
        let mut blocks: Vec<usize> = (0..group.irreps.len()).collect();
        let largest = (0..group.irreps.len()).rev().max_by_key(|&b| group.irreps[b].dim).unwrap_or(0);
        blocks.push(if group.irreps[largest].dim > 1 { largest } else { 1.min(group.irreps.len() - 1) });
        Self::new(group, blocks)
    }

    /// Images of the group generators.
    pub fn generator_images(&self) -> Vec<UMatrix> {
        self.group.generators.iter().map(|&g| self.images[g].clone()).collect()
    }

    pub fn image(&self, g: usize) -> &UMatrix {
        &self.images[g]
    }

    pub fn images(&self) -> &[UMatrix] {
        &self.images
    }

    /// Exact character of the whole representation.
    pub fn character(&self, g: usize) -> CycloNum {
        self.blocks.iter().fold(CycloNum::zero(), |acc, &b| &acc + &self.group.irreps[b].character[g])
    }

    /// Multiplicity of ζ_n^j as an eigenvalue of ρ(g), n = ord(g), from the
    /// exact character by Fourier inversion over ⟨g⟩.
    pub fn exact_multiplicities(&self, g: usize) -> Result<Vec<u64>> {
        let n = self.group.element_order(g);
        let t = &self.group.table;
        let mut chis = Vec::with_capacity(n as usize);
        let mut x = t.identity();
        for _ in 0..n {
            chis.push(self.character(x));
            x = t.mul(x, g);
        }
        (0..n as i64)
            .map(|j| {
                let s = chis.iter().enumerate().fold(CycloNum::zero(), |acc, (k, c)| &acc + &(c * &cyclo(n as u32, -j * k as i64)));
                let v = s.as_integer()?;
                let n_big = num_bigint::BigInt::from(n);
                if &v % &n_big != num_bigint::BigInt::from(0) || v < num_bigint::BigInt::from(0) {
                    return Err(Error::NotInteger(format!("{v}/{n}")));
                }
                Ok((v / n_big).try_into().expect("small"))
            })
            .collect()
    }

    /// Exact dim of the commutant of ρ(H) for the subgroup H = `elems`:
    /// (1/|H|) Σ_h |χ(h)|².
    pub fn exact_commutant_dim(&self, elems: &[usize]) -> Result<u64> {
        let s = elems.iter().fold(CycloNum::zero(), |acc, &h| {
            let c = self.character(h);
            &acc + &(&c * &c.conj())
        });
        let v = s.as_integer()?;
        let h = num_bigint::BigInt::from(elems.len());
        if &v % &h != num_bigint::BigInt::from(0) {
            return Err(Error::NotInteger(format!("{v}/{h}")));
        }
        Ok((v / h).try_into().expect("small"))
    }

    /// Elements of the cyclic subgroup ⟨g⟩.
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let t = &self.group.table;
        let mut out = vec![t.identity()];
        let mut x = g;
        while x != t.identity() {
            out.push(x);
            x = t.mul(x, g);
        }
        out
    }
}

/// Block diagonal unitary whose blocks diagonalize ρ(g) one irreducible at a
/// time; identical blocks reuse the same diagonalizer.
fn block_diagonalizer(rep: &BlockRep, g: usize, seed: Option<u64>) -> Result<(UMatrix, Vec<u32>)> {
    let n = rep.group.element_order(g);
    let mut cache: BTreeMap<usize, (UMatrix, Vec<u32>)> = BTreeMap::new();
    let mut a = UMatrix::zeros(rep.dim, rep.dim);
    let mut exps = Vec::with_capacity(rep.dim);
    let mut off = 0;
    for &b in &rep.blocks {
        if !cache.contains_key(&b) {
            let s = seed.map(|s| s.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(b as u64));
            cache.insert(b, diagonalizer(&rep.group.irreps[b].images[g], n, s)?);
        }
        let (d, e) = &cache[&b];
        a.view_mut((off, off), d.shape()).copy_from(d);
        exps.extend(e);
        off += d.nrows();
    }
    Ok((a, exps))
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma21Outcome {
    pub g1: usize,
    pub g2: usize,
    pub m: usize,
    pub k1: usize,
    pub k2: usize,
    /// Nullspace dimension of the joint commutant of the two diagonalized images.
    pub intersection_dim: usize,
    /// Σ n(λ₁, λ₂)² read off the diagonals.
    pub pair_count_dim: usize,
    pub diag_residual: f64,
    pub commute_residual: f64,
    #[serde(skip)]
    pub a1: UMatrix,
    #[serde(skip)]
    pub a2: UMatrix,
}

impl Lemma21Outcome {
    pub fn bound(&self) -> usize {
        (self.m * self.m).div_ceil(self.k1 * self.k2)
    }

    pub fn holds(&self) -> bool {
        self.diag_residual <= DIAGONAL_TOL
            && self.commute_residual <= COMMUTE_TOL
            && self.intersection_dim == self.pair_count_dim
            && self.intersection_dim >= self.bound()
    }
}

/// Unitaries A₁, A₂ with A_i ρ(g_i) A_i⁻¹ diagonal and A₁⁻¹A₂ in the
/// commutant of ρ(G), plus the dimension of the intersection of the two
/// conjugated centralizers. `commutant` is a basis of the commutant of ρ(G).
pub fn lemma21_construct(rep: &BlockRep, g1: usize, g2: usize, commutant: &[UMatrix], seed: Option<u64>) -> Result<Lemma21Outcome> {
    let (a1, e1) = block_diagonalizer(rep, g1, seed)?;
    let (a2, e2) = block_diagonalizer(rep, g2, seed.map(|s| s ^ 0x5555))?;
    let d1 = &a1 * rep.image(g1) * a1.adjoint();
    let d2 = &a2 * rep.image(g2) * a2.adjoint();
    let diag_residual = off_diagonal_residual(&d1).max(off_diagonal_residual(&d2));
    if diag_residual > DIAGONAL_TOL {
        return Err(Error::Tolerance(format!("diagonalization residual {diag_residual:.3e}")));
    }
    let u = a1.adjoint() * &a2;
    let commute_residual = commutant.iter().map(|c| max_abs(&(&u * c - c * &u))).fold(0.0, f64::max);
    let mut pairs: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (x, y) in e1.iter().zip(&e2) {
        *pairs.entry((*x, *y)).or_default() += 1;
    }
    let pair_count_dim = pairs.values().map(|n| n * n).sum();
    let k1 = e1.iter().collect::<std::collections::BTreeSet<_>>().len();
    let k2 = e2.iter().collect::<std::collections::BTreeSet<_>>().len();
    let intersection_dim = commutant_dim(&[d1, d2]);
    Ok(Lemma21Outcome { g1, g2, m: rep.dim, k1, k2, intersection_dim, pair_count_dim, diag_residual, commute_residual, a1, a2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma21Sweep {
    pub group: String,
    pub m: usize,
    pub pairs: usize,
    pub failures: Vec<String>,
    pub min_slack: i64,
    pub max_diag_residual: f64,
    pub max_commute_residual: f64,
}

impl Lemma21Sweep {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pairs > 0
    }
}

/// Runs the construction over all ordered pairs of group elements.
pub fn lemma21_sweep(rep: &BlockRep, seed: Option<u64>) -> Result<Lemma21Sweep> {
    let commutant = commutant_basis(&rep.generator_images());
    let n = rep.group.order();
    let results: Vec<std::result::Result<Lemma21Outcome, String>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (g1, g2) = (k / n, k % n);
            lemma21_construct(rep, g1, g2, &commutant, seed.map(|s| s.wrapping_add(k as u64))).map_err(|e| format!("({g1},{g2}): {e}"))
        })
        .collect();
    let mut sweep = Lemma21Sweep {
        group: rep.group.name.clone(),
        m: rep.dim,
        pairs: results.len(),
        failures: Vec::new(),
        min_slack: i64::MAX,
        max_diag_residual: 0.0,
        max_commute_residual: 0.0,
    };
    for r in results {
        match r {
            Ok(o) => {
                sweep.max_diag_residual = sweep.max_diag_residual.max(o.diag_residual);
                sweep.max_commute_residual = sweep.max_commute_residual.max(o.commute_residual);
                sweep.min_slack = sweep.min_slack.min(o.intersection_dim as i64 - o.bound() as i64);
                if !o.holds() {
                    sweep.failures.push(format!(
                        "({},{}): dim {} (pairs {}), bound {}, residuals {:.2e}/{:.2e}",
                        o.g1, o.g2, o.intersection_dim, o.pair_count_dim, o.bound(), o.diag_residual, o.commute_residual
                    ));
                }
            }
            Err(e) => sweep.failures.push(e),
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q8() -> Arc<TestGroup> {
        Arc::new(TestGroup::q8().unwrap())
    }

    #[test]
    fn projectors_of_diagonal() {
        let m = UMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![zeta(4, 1), zeta(4, 1), zeta(4, 3)]));
        let ps = eigenprojectors(&m, 4).unwrap();
        let ranks: Vec<usize> = ps.iter().map(|p| orthonormal_basis(p).ncols()).collect();
        assert_eq!(ranks, vec![0, 2, 0, 1]);
    }

    #[test]
    fn regular_rep_of_q8_with_z() {
        let g = q8();
        let rep = BlockRep::new(g.clone(), vec![0, 1, 2, 3, 4, 4]).unwrap();
        let z = (0..8).find(|&x| g.element_order(x) == 2).unwrap();
        let comm = commutant_basis(rep.images());
        assert_eq!(comm.len(), 4 + 4);
        let o = lemma21_construct(&rep, z, z, &comm, None).unwrap();
        assert_eq!((o.k1, o.k2), (2, 2));
        assert_eq!(o.bound(), 16);
        assert_eq!(o.intersection_dim, 32);
        assert!(o.holds());
    }

    #[test]
    fn two_dim_irrep_with_i_and_j() {
        let g = q8();
        let rep = BlockRep::new(g.clone(), vec![4]).unwrap();
        let (i, j) = (g.generators[0], g.generators[1]);
        let comm = commutant_basis(rep.images());
        let o = lemma21_construct(&rep, i, j, &comm, None).unwrap();
        // ρ(i), ρ(j) have eigenvalues {i, −i}; the diagonal pairs are distinct
        assert_eq!((o.k1, o.k2), (2, 2));
        assert_eq!(o.pair_count_dim, 2);
        assert_eq!(o.intersection_dim, 2);
        // the joint commutant of ρ(i), ρ(j) themselves is scalar
        assert_eq!(commutant_dim(&[rep.image(i).clone(), rep.image(j).clone()]), 1);
        assert_eq!(o.bound(), 1);
        assert!(o.holds());
    }

    #[test]
    fn identity_pair_gives_full_algebra() {
        let g = Arc::new(TestGroup::sl2_3().unwrap());
        let rep = BlockRep::standard(g).unwrap();
        let comm = commutant_basis(rep.images());
        let o = lemma21_construct(&rep, 0, 0, &comm, Some(3)).unwrap();
        assert_eq!(o.intersection_dim, rep.dim * rep.dim);
    }

    #[test]
    fn eigenprojector_ranks_match_exact() {
        for g in TestGroup::all().unwrap() {
            let g = Arc::new(g);
            let rep = BlockRep::standard(g.clone()).unwrap();
            for x in 0..g.order() {
                let n = g.element_order(x);
                let ranks: Vec<u64> = eigenprojectors(rep.image(x), n).unwrap().iter().map(|p| orthonormal_basis(p).ncols() as u64).collect();
                assert_eq!(ranks, rep.exact_multiplicities(x).unwrap(), "{} element {x}", g.name);
            }
        }
    }

    #[test]
    fn commutant_dims_match_characters() {
        for g in TestGroup::all().unwrap() {
            let g = Arc::new(g);
            let rep = BlockRep::standard(g.clone()).unwrap();
            assert_eq!(commutant_dim(rep.images()) as u64, rep.exact_commutant_dim(&(0..g.order()).collect::<Vec<_>>()).unwrap());
            for x in 0..g.order() {
                let h = rep.cyclic_subgroup(x);
                let imgs: Vec<UMatrix> = h.iter().map(|&y| rep.image(y).clone()).collect();
                assert_eq!(commutant_dim(&imgs) as u64, rep.exact_commutant_dim(&h).unwrap());
            }
        }
    }

    #[test]
    fn scalar_conjugation() {
        assert!(ad_central_trivial(&(UMatrix::identity(6, 6) * Complex::new(-1.0, 0.0))));
        assert!(ad_central_trivial(&UMatrix::identity(3, 3)));
        let g = q8();
        let z = (0..8).find(|&x| g.element_order(x) == 2).unwrap();
        assert!(ad_central_trivial(BlockRep::new(g.clone(), vec![4]).unwrap().image(z)));
        assert!(!ad_central_trivial(BlockRep::standard(g).unwrap().image(z)));
        let flip = UMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![zeta(2, 0), zeta(2, 1)]));
        assert!(!ad_central_trivial(&flip));
    }
}
