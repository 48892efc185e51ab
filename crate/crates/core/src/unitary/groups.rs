//! Small test groups with explicit irreducible unitary representations.
//!
//! Every group is generated from exact matrices over ℚ(ζ₁₂); each irreducible
//! representation is given by exact generator images and extended along the
//! BFS tree of the Cayley graph, then checked to be a homomorphism.

use std::collections::HashMap;

use num_complex::Complex;
use num_rational::BigRational;

use super::{UMatrix, C64};
use crate::algebra::{CayleyTable, Group};
use crate::cyclotomic::{cyclo, CycloNum};
use crate::error::{Error, Result};

/// Square matrix over ℚ(ζ_N), row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMat {
    pub dim: usize,
    pub entries: Vec<CycloNum>,
}

impl ExactMat {
    pub fn identity(dim: usize) -> Self {
        let entries = (0..dim * dim).map(|k| if k / dim == k % dim { CycloNum::one() } else { CycloNum::zero() }).collect();
        ExactMat { dim, entries }
    }

    pub fn from_ints(dim: usize, v: &[i64]) -> Self {
        ExactMat { dim, entries: v.iter().map(|&x| CycloNum::from_int(x)).collect() }
    }

    pub fn scalar(x: CycloNum) -> Self {
        ExactMat { dim: 1, entries: vec![x] }
    }

    pub fn mul(&self, o: &ExactMat) -> ExactMat {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = CycloNum::zero();
                for k in 0..d {
                    let (x, y) = (&self.entries[i * d + k], &o.entries[k * d + j]);
                    if !x.is_zero() && !y.is_zero() {
                        acc = &acc + &(x * y);
                    }
                }
                entries.push(acc);
            }
        }
        ExactMat { dim: d, entries }
    }

    pub fn scale(&self, s: &CycloNum) -> ExactMat {
        ExactMat { dim: self.dim, entries: self.entries.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> CycloNum {
        (0..self.dim).fold(CycloNum::zero(), |acc, i| &acc + &self.entries[i * self.dim + i])
    }

    fn key(&self) -> String {
        self.entries.iter().map(|e| e.promote(lcm_all(e.conductor())).to_text()).collect::<Vec<_>>().join(";")
    }

    pub fn to_float(&self) -> UMatrix {
        UMatrix::from_fn(self.dim, self.dim, |i, j| {
            let (re, im) = self.entries[i * self.dim + j].to_complex();
            Complex::new(re, im)
        })
    }
}

fn lcm_all(n: u32) -> u32 {
    crate::cyclotomic::lcm(n, 12)
}

/// An irreducible representation: exact images, float images and exact character.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub name: String,
    pub dim: usize,
    pub exact: Vec<ExactMat>,
    pub images: Vec<UMatrix>,
    pub character: Vec<CycloNum>,
}

#[derive(Clone, Debug)]
pub struct TestGroup {
    pub name: String,
    pub table: CayleyTable,
    pub generators: Vec<usize>,
    /// (parent, generator slot) of each element in BFS order; identity is element 0
    tree: Vec<(usize, usize)>,
    pub irreps: Vec<Irrep>,
}

impl TestGroup {
    /// Closure of exact generator matrices; elements in BFS order.
    fn generate(name: &str, gens: Vec<ExactMat>) -> Result<Self> {
        let dim = gens[0].dim;
        let mut elems = vec![ExactMat::identity(dim)];
        let mut index: HashMap<String, usize> = HashMap::new();
        index.insert(elems[0].key(), 0);
        let mut tree = vec![(0, usize::MAX)];
        let mut head = 0;
        while head < elems.len() {
            for (gi, g) in gens.iter().enumerate() {
                let y = elems[head].mul(g);
                let k = y.key();
                if !index.contains_key(&k) {
                    index.insert(k, elems.len());
                    elems.push(y);
                    tree.push((head, gi));
                }
            }
            head += 1;
            if elems.len() > 1000 {
                return Err(Error::Precondition(format!("{name}: generated group too large")));
            }
        }
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(index[&a.mul(b).key()] as u32);
            }
        }
        let table = CayleyTable::from_table(n, table).ok_or_else(|| Error::Precondition(format!("{name}: not a group")))?;
        let generators = (0..gens.len()).map(|gi| index[&gens[gi].key()]).collect();
        Ok(TestGroup { name: name.into(), table, generators, tree, irreps: Vec::new() })
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// Adds an irreducible representation given by generator images.
    fn add_irrep(&mut self, name: &str, gen_images: Vec<ExactMat>) -> Result<()> {
        let dim = gen_images[0].dim;
        let mut exact = vec![ExactMat::identity(dim)];
        for &(parent, gi) in &self.tree[1..] {
            exact.push(exact[parent].mul(&gen_images[gi]));
        }
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                if exact[self.table.mul(a, b)] != exact[a].mul(&exact[b]) {
                    return Err(Error::Precondition(format!("{}: {name} is not a homomorphism", self.name)));
                }
            }
        }
        let character: Vec<CycloNum> = exact.iter().map(|m| m.trace()).collect();
        // ⟨χ, χ⟩ = 1 certifies irreducibility
        let norm = character.iter().fold(CycloNum::zero(), |acc, c| &acc + &(c * &c.conj()));
        if norm.as_rational().ok() != Some(BigRational::from_integer((n as i64).into())) {
            return Err(Error::Precondition(format!("{}: {name} is not irreducible", self.name)));
        }
        let images = exact.iter().map(|m| m.to_float()).collect();
        self.irreps.push(Irrep { name: name.into(), dim, exact, images, character });
        Ok(())
    }

    fn check_complete(&self) -> Result<()> {
        let s: usize = self.irreps.iter().map(|r| r.dim * r.dim).sum();
        if s != self.order() {
            return Err(Error::Precondition(format!("{}: irreps incomplete ({s} != {})", self.name, self.order())));
        }
        for (i, a) in self.irreps.iter().enumerate() {
            for b in &self.irreps[i + 1..] {
                let ip = a.character.iter().zip(&b.character).fold(CycloNum::zero(), |acc, (x, y)| &acc + &(x * &y.conj()));
                if !ip.is_zero() {
                    return Err(Error::Precondition(format!("{}: {} and {} are isomorphic", self.name, a.name, b.name)));
                }
            }
        }
        Ok(())
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut x = g;
        let mut n = 1;
        while x != self.table.identity() {
            x = self.table.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn q8() -> Result<Self> {
        let i = cyclo(4, 1);
        let mi = cyclo(4, 3);
        let z = CycloNum::zero();
        let gi = ExactMat { dim: 2, entries: vec![i.clone(), z.clone(), z.clone(), mi] };
        let gj = ExactMat::from_ints(2, &[0, 1, -1, 0]);
        let mut g = Self::generate("Q8", vec![gi.clone(), gj.clone()])?;
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            g.add_irrep(&format!("1[{a},{b}]"), vec![ExactMat::from_ints(1, &[a]), ExactMat::from_ints(1, &[b])])?;
        }
        g.add_irrep("2", vec![gi, gj])?;
        g.check_complete()?;
        Ok(g)
    }

    pub fn d4() -> Result<Self> {
        let r = ExactMat::from_ints(2, &[0, -1, 1, 0]);
        let s = ExactMat::from_ints(2, &[1, 0, 0, -1]);
        let mut g = Self::generate("D4", vec![r.clone(), s.clone()])?;
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            g.add_irrep(&format!("1[{a},{b}]"), vec![ExactMat::from_ints(1, &[a]), ExactMat::from_ints(1, &[b])])?;
        }
        g.add_irrep("2", vec![r, s])?;
        g.check_complete()?;
        Ok(g)
    }

    pub fn c12() -> Result<Self> {
        let mut g = Self::generate("C12", vec![ExactMat::scalar(cyclo(12, 1))])?;
        for j in 0..12 {
            g.add_irrep(&format!("1[{j}]"), vec![ExactMat::scalar(cyclo(12, j))])?;
        }
        g.check_complete()?;
        Ok(g)
    }

    /// The 24 Hurwitz unit quaternions, generated by i and ω = (−1 + i + j + k)/2.
    pub fn sl2_3() -> Result<Self> {
        let gi = su2([0.0, 1.0, 0.0, 0.0]);
        let gw = su2([-0.5, 0.5, 0.5, 0.5]);
        let mut g = Self::generate("SL2(3)", vec![gi.clone(), gw.clone()])?;
        for k in 0..3 {
            g.add_irrep(&format!("1[{k}]"), vec![ExactMat::scalar(CycloNum::one()), ExactMat::scalar(cyclo(3, k))])?;
        }
        for k in 0..3 {
            g.add_irrep(&format!("2[{k}]"), vec![gi.clone(), gw.scale(&cyclo(3, k))])?;
        }
        g.add_irrep("3", vec![rotation([0.0, 1.0, 0.0, 0.0]), rotation([-0.5, 0.5, 0.5, 0.5])])?;
        g.check_complete()?;
        Ok(g)
    }

    pub fn all() -> Result<Vec<Self>> {
        Ok(vec![Self::q8()?, Self::sl2_3()?, Self::d4()?, Self::c12()?])
    }
}

fn half_int(x: f64) -> CycloNum {
    let twice = (2.0 * x).round() as i64;
    CycloNum::from_rational(&BigRational::new(twice.into(), 2.into()))
}

/// a + bi + cj + dk ↦ [[a + bi, c + di], [−c + di, a − bi]].
fn su2(q: [f64; 4]) -> ExactMat {
    let i = cyclo(4, 1);
    let [a, b, c, d] = q.map(half_int);
    let e = |re: &CycloNum, im: &CycloNum| re + &(im * &i);
    ExactMat { dim: 2, entries: vec![e(&a, &b), e(&c, &d), e(&-&c, &d), e(&a, &-&b)] }
}

fn qmul(x: [f64; 4], y: [f64; 4]) -> [f64; 4] {
    let [a1, b1, c1, d1] = x;
    let [a2, b2, c2, d2] = y;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Matrix of v ↦ u v u⁻¹ on the pure quaternions, for a unit u.
fn rotation(u: [f64; 4]) -> ExactMat {
    let conj = [u[0], -u[1], -u[2], -u[3]];
    let mut m = vec![0i64; 9];
    for col in 0..3 {
        let mut e = [0.0; 4];
        e[col + 1] = 1.0;
        let img = qmul(qmul(u, e), conj);
        for row in 0..3 {
            m[row * 3 + col] = img[row + 1].round() as i64;
        }
    }
    ExactMat::from_ints(3, &m)
}

/// Complex value helper used by tests.
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_irreps() {
        let q8 = TestGroup::q8().unwrap();
        assert_eq!(q8.order(), 8);
        assert_eq!(q8.irreps.len(), 5);
        let sl = TestGroup::sl2_3().unwrap();
        assert_eq!(sl.order(), 24);
        assert_eq!(sl.irreps.len(), 7);
        assert_eq!(TestGroup::d4().unwrap().order(), 8);
        assert_eq!(TestGroup::c12().unwrap().irreps.len(), 12);
    }

    #[test]
    fn q8_and_d4_differ() {
        let count = |g: &TestGroup| (0..g.order()).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(count(&TestGroup::q8().unwrap()), 1);
        assert_eq!(count(&TestGroup::d4().unwrap()), 5);
    }
}
