//! Character table of SL₂(q) for q ≡ 1 (mod 4), restrictions and multiplicities.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{cyclo, CycloNum, CycloSum};
use crate::error::{Error, Result};
use crate::group::{ClassLabel, Mat2, Sl2, SubgroupHandle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharName {
    Trivial,
    Steinberg,
    Principal(u32),
    Discrete(u32),
    Xi1,
    Xi2,
    Eta1,
    Eta2,
}

impl fmt::Display for CharName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharName::Trivial => write!(f, "1"),
            CharName::Steinberg => write!(f, "psi"),
            CharName::Principal(i) => write!(f, "chi_{i}"),
            CharName::Discrete(j) => write!(f, "theta_{j}"),
            CharName::Xi1 => write!(f, "xi_1"),
            CharName::Xi2 => write!(f, "xi_2"),
            CharName::Eta1 => write!(f, "eta_1"),
            CharName::Eta2 => write!(f, "eta_2"),
        }
    }
}

/// Values on the q + 4 class labels, in [`ClassLabel::all`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    q: u32,
    values: Vec<CycloNum>,
}

impl ClassFunction {
    pub fn from_fn(q: u32, f: impl Fn(ClassLabel) -> CycloNum) -> Self {
        ClassFunction { q, values: ClassLabel::all(q).into_iter().map(f).collect() }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn value(&self, l: ClassLabel) -> &CycloNum {
        &self.values[l.position(self.q)]
    }

    pub fn values(&self) -> &[CycloNum] {
        &self.values
    }

    pub fn degree(&self) -> BigInt {
        self.value(ClassLabel::One).as_integer().expect("degree is an integer")
    }

    /// χ(g) for a matrix g.
    pub fn at(&self, sl: &Sl2, g: &Mat2) -> &CycloNum {
        self.value(sl.classify(g))
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    pub name: CharName,
    pub values: ClassFunction,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    q: u32,
    labels: Vec<ClassLabel>,
    class_sizes: Vec<u64>,
    chars: Vec<Character>,
}

/// The Gauss sum Σ_x (x/q) ζ_q^x, equal to +√q for q ≡ 1 (mod 4).
pub fn sqrt_q(sl: &Sl2) -> CycloNum {
    let q = sl.q();
    CycloNum::from_exponents(q, (1..q).map(|x| (x as i64, sl.field().legendre(x) as i64)))
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn half(x: &CycloNum) -> CycloNum {
    x.scale(&BigRational::new(1.into(), 2.into()))
}

/// One irreducible character in closed form.
pub fn character(sl: &Sl2, name: CharName) -> Result<ClassFunction> {
    let q = sl.q();
    if q % 4 != 1 {
        return Err(Error::Precondition(format!("character table needs q = 1 mod 4, got {q}")));
    }
    let qi = q as i64;
    let int = CycloNum::from_int;
    let root = |x: &CycloNum| x.clone();
    let s = sqrt_q(sl);
    let plus = half(&(&int(1) + &s));
    let minus = half(&(&int(1) - &s));
    let eplus = half(&(&int(-1) + &s));
    let eminus = half(&(&int(-1) - &s));
    let f = |l: ClassLabel| -> CycloNum {
        use ClassLabel::*;
        match name {
            CharName::Trivial => int(1),
            CharName::Steinberg => match l {
                One | Z => int(qi),
                C | D | ZC | ZD => int(0),
                A(_) => int(1),
                B(_) => int(-1),
            },
            CharName::Principal(i) => match l {
                One => int(qi + 1),
                Z => int(sign(i) * (qi + 1)),
                C | D => int(1),
                ZC | ZD => int(sign(i)),
                A(k) => CycloNum::from_exponents(q - 1, [((i * k) as i64, 1), (-((i * k) as i64), 1)]),
                B(_) => int(0),
            },
            CharName::Discrete(j) => match l {
                One => int(qi - 1),
                Z => int(sign(j) * (qi - 1)),
                C | D => int(-1),
                ZC | ZD => int(-sign(j)),
                A(_) => int(0),
                B(m) => CycloNum::from_exponents(q + 1, [((j * m) as i64, -1), (-((j * m) as i64), -1)]),
            },
            CharName::Xi1 | CharName::Xi2 => {
                let (vc, vd) = if name == CharName::Xi1 { (&plus, &minus) } else { (&minus, &plus) };
                match l {
                    One | Z => int((qi + 1) / 2),
                    C | ZC => root(vc),
                    D | ZD => root(vd),
                    A(k) => int(sign(k)),
                    B(_) => int(0),
                }
            }
            CharName::Eta1 | CharName::Eta2 => {
                let (vc, vd) = if name == CharName::Eta1 { (&eplus, &eminus) } else { (&eminus, &eplus) };
                match l {
                    One => int((qi - 1) / 2),
                    Z => int(-(qi - 1) / 2),
                    C => root(vc),
                    D => root(vd),
                    ZC => -vc,
                    ZD => -vd,
                    A(_) => int(0),
                    B(m) => int(-sign(m)),
                }
            }
        }
    };
    Ok(ClassFunction::from_fn(q, f))
}

/// The degree-(q−1)/2 character with central value −(q−1)/2 and η₁(c) = (−1 + √q)/2.
pub fn eta1(sl: &Sl2) -> Result<ClassFunction> {
    character(sl, CharName::Eta1)
}

impl CharTable {
    /// Builds the full table and checks both orthogonality relations and Σ deg² = |G|.
    pub fn build(sl: &Sl2) -> Result<Self> {
        let t = Self::build_unchecked(sl)?;
        t.check_first_orthogonality()?;
        t.check_second_orthogonality()?;
        t.check_degree_sum()?;
        Ok(t)
    }

    pub fn build_unchecked(sl: &Sl2) -> Result<Self> {
        let q = sl.q();
        let mut names = vec![CharName::Trivial, CharName::Steinberg];
        names.extend((1..=(q - 3) / 2).map(CharName::Principal));
        names.extend((1..=(q - 1) / 2).map(CharName::Discrete));
        names.extend([CharName::Xi1, CharName::Xi2, CharName::Eta1, CharName::Eta2]);
        let chars = names
            .into_iter()
            .map(|name| Ok(Character { name, values: character(sl, name)? }))
            .collect::<Result<Vec<_>>>()?;
        let labels = ClassLabel::all(q);
        let class_sizes = labels.iter().map(|l| l.class_size(q)).collect();
        Ok(CharTable { q, labels, class_sizes, chars })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn get(&self, name: CharName) -> Option<&ClassFunction> {
        self.chars.iter().find(|c| c.name == name).map(|c| &c.values)
    }

    pub fn group_order(&self) -> u64 {
        self.class_sizes.iter().sum()
    }

    /// ⟨χ, ψ⟩ over the whole group.
    pub fn inner_product(&self, x: &ClassFunction, y: &ClassFunction) -> Result<BigRational> {
        let mut acc = CycloSum::new();
        for (k, size) in self.class_sizes.iter().enumerate() {
            let v = &x.values[k] * &y.values[k].conj();
            acc.add(&v.scale(&BigRational::from_integer(BigInt::from(*size))));
        }
        let total = acc.finish().as_rational()?;
        Ok(total / BigRational::from_integer(BigInt::from(self.group_order())))
    }

    pub fn check_first_orthogonality(&self) -> Result<()> {
        for (i, x) in self.chars.iter().enumerate() {
            for y in &self.chars[i..] {
                let ip = self.inner_product(&x.values, &y.values)?;
                let expect = if x.name == y.name { 1 } else { 0 };
                if ip != BigRational::from_integer(expect.into()) {
                    return Err(Error::Orthogonality(format!("<{}, {}> = {ip}", x.name, y.name)));
                }
            }
        }
        Ok(())
    }

    pub fn check_second_orthogonality(&self) -> Result<()> {
        let order = self.group_order();
        for s in 0..self.labels.len() {
            for t in s..self.labels.len() {
                let mut acc = CycloSum::new();
                for c in &self.chars {
                    acc.add(&(&c.values.values[s] * &c.values.values[t].conj()));
                }
                let v = acc.finish().as_rational()?;
                let expect = if s == t { order / self.class_sizes[s] } else { 0 };
                if v != BigRational::from_integer(expect.into()) {
                    return Err(Error::Orthogonality(format!("column ({}, {}) sums to {v}", self.labels[s], self.labels[t])));
                }
            }
        }
        Ok(())
    }

    pub fn check_degree_sum(&self) -> Result<()> {
        let s: BigInt = self.chars.iter().map(|c| c.values.degree().pow(2)).sum();
        if s != BigInt::from(self.group_order()) {
            return Err(Error::Orthogonality(format!("sum of squared degrees {s}")));
        }
        Ok(())
    }

    /// One line per irreducible: name then values in cyclotomic text form.
    pub fn write_dump(&self, w: &mut impl Write) -> std::io::Result<()> {
        for c in &self.chars {
            let vals: Vec<String> = c.values.values.iter().map(|v| v.to_text()).collect();
            writeln!(w, "{} {}", c.name, vals.join(" "))?;
        }
        Ok(())
    }
}

fn to_nonneg_integer(v: CycloNum, what: &str) -> Result<u64> {
    let n = v.as_integer().map_err(|e| match e {
        Error::NotRational => Error::NotInteger(format!("{what}: irrational value {v}")),
        e => e,
    })?;
    if n.is_negative() {
        return Err(Error::NotInteger(format!("{what}: negative value {n}")));
    }
    n.to_u64().ok_or_else(|| Error::NotInteger(format!("{what}: overflow")))
}

/// (1/|H|) Σ_{h∈H} χ(h)·conj χ(h), by direct element loop.
pub fn centralizer_dim(chi: &ClassFunction, h: &SubgroupHandle, sl: &Sl2) -> Result<u64> {
    let mut counts = std::collections::BTreeMap::new();
    for x in h.elements() {
        *counts.entry(sl.classify(x)).or_insert(0u64) += 1;
    }
    let mut acc = CycloSum::new();
    for x in h.elements() {
        let v = chi.at(sl, x);
        acc.add(&(v * &v.conj()));
    }
    let total = acc.finish().scale(&BigRational::new(1.into(), BigInt::from(h.order())));
    to_nonneg_integer(total, "centralizer dimension")
}

/// Same inner product from a per-label census.
pub fn centralizer_dim_from_census(
    chi: &ClassFunction,
    census: &std::collections::BTreeMap<ClassLabel, u64>,
) -> Result<u64> {
    let order: u64 = census.values().sum();
    let mut acc = CycloSum::new();
    for (l, n) in census {
        let v = chi.value(*l);
        acc.add(&(v * &v.conj()).scale(&BigRational::from_integer(BigInt::from(*n))));
    }
    let total = acc.finish().scale(&BigRational::new(1.into(), BigInt::from(order)));
    to_nonneg_integer(total, "centralizer dimension")
}

/// mult(ζ_n^j) for j = 0..n, where n is the order of g.
pub fn eigenvalue_multiplicities(chi: &ClassFunction, g: &Mat2, n: u64, sl: &Sl2) -> Result<Vec<u64>> {
    if sl.pow(g, n) != sl.identity() {
        return Err(Error::Precondition(format!("g^{n} is not the identity")));
    }
    let mut powers = Vec::with_capacity(n as usize);
    let mut x = sl.identity();
    for _ in 0..n {
        powers.push(chi.at(sl, &x).clone());
        x = sl.mul(&x, g);
    }
    let mut out = Vec::with_capacity(n as usize);
    for j in 0..n {
        let mut acc = CycloSum::new();
        for (k, v) in powers.iter().enumerate() {
            acc.add(&(v * &cyclo(n as u32, -((j * k as u64) as i64))));
        }
        let m = acc.finish().scale(&BigRational::new(1.into(), BigInt::from(n)));
        out.push(to_nonneg_integer(m, "eigenvalue multiplicity")?);
    }
    let deg = chi.degree();
    if BigInt::from(out.iter().sum::<u64>()) != deg {
        return Err(Error::NotInteger(format!("multiplicities do not sum to the degree {deg}")));
    }
    Ok(out)
}

/// Exponents j with nonzero multiplicity.
pub fn support(mults: &[u64]) -> Vec<u32> {
    mults.iter().enumerate().filter(|(_, m)| **m != 0).map(|(j, _)| j as u32).collect()
}

/// Real (or complex) value for reports.
pub fn approx(v: &CycloNum) -> (f64, f64) {
    let (re, im) = v.to_complex();
    (if re.abs() < 1e-15 { 0.0 } else { re }, if im.abs() < 1e-15 { 0.0 } else { im })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{edge_generators, standard_subgroup, SubgroupName};

    #[test]
    fn gauss_sum_squares_to_q() {
        let sl = Sl2::new(13).unwrap();
        let s = sqrt_q(&sl);
        assert_eq!(&s * &s, CycloNum::from_int(13));
        let (re, im) = s.to_complex();
        assert!((re - 13f64.sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
    }

    #[test]
    fn table_q13() {
        let sl = Sl2::new(13).unwrap();
        let t = CharTable::build(&sl).unwrap();
        assert_eq!(t.characters().len(), 17);
        let mut degs: Vec<i64> = t.characters().iter().map(|c| c.values.degree().try_into().unwrap()).collect();
        degs.sort();
        assert_eq!(degs.iter().filter(|&&d| d == 6).count(), 2);
        assert_eq!(degs.iter().filter(|&&d| d == 7).count(), 2);
    }

    #[test]
    fn eta1_centralizers_q13() {
        let sl = Sl2::new(13).unwrap();
        let e = eta1(&sl).unwrap();
        let b = standard_subgroup(SubgroupName::B, &sl).unwrap();
        assert_eq!(centralizer_dim(&e, &b, &sl).unwrap(), 1);
        let c4 = standard_subgroup(SubgroupName::C4, &sl).unwrap();
        assert_eq!(centralizer_dim(&e, &c4, &sl).unwrap(), 18);
        let (g1, _) = edge_generators(&sl);
        assert_eq!(eigenvalue_multiplicities(&e, &g1, 4, &sl).unwrap(), vec![0, 3, 0, 3]);
    }
}
