//! Abstract finite groups by index, Cayley tables, and the rational group algebra.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A finite group whose elements are the indices `0..order()`.
pub trait Group: Send + Sync + std::fmt::Debug {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
}

/// Dense multiplication table.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    n: usize,
    identity: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl CayleyTable {
    pub fn from_group(g: &dyn Group) -> Self {
        let n = g.order();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(g.mul(a, b) as u32);
            }
        }
        let inverse = (0..n).map(|a| g.inv(a) as u32).collect();
        CayleyTable { n, identity: g.identity(), table, inverse }
    }

    /// Builds from an explicit table; checks the group axioms.
    pub fn from_table(n: usize, table: Vec<u32>) -> Option<Self> {
        if table.len() != n * n || table.iter().any(|&x| x as usize >= n) {
            return None;
        }
        let identity = (0..n).find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))?;
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] as usize == identity)? as u32;
        }
        let t = CayleyTable { n, identity, table, inverse };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)) {
                        return None;
                    }
                }
            }
        }
        Some(t)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        Self::from_table(n, table).expect("cyclic group")
    }
}

impl Group for CayleyTable {
    fn order(&self) -> usize {
        self.n
    }
    fn identity(&self) -> usize {
        self.identity
    }
    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }
    fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }
}

/// Sparse element of ℚ[G], keyed by group index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupAlgElt {
    coeffs: BTreeMap<usize, BigRational>,
}

impl GroupAlgElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(g: usize) -> Self {
        Self::term(g, BigRational::one())
    }

    pub fn term(g: usize, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(g, c);
        e
    }

    /// N(H) = Σ_{h∈H} h.
    pub fn norm_element(h: &[usize]) -> Self {
        let mut e = Self::zero();
        for &x in h {
            e.add_term(x, BigRational::one());
        }
        e
    }

    pub fn add_term(&mut self, g: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(g).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    pub fn coeff(&self, g: usize) -> BigRational {
        self.coeffs.get(&g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, c) in o.iter() {
            r.add_term(g, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, c) in o.iter() {
            r.add_term(g, -c.clone());
        }
        r
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut r = Self::zero();
        if s.is_zero() {
            return r;
        }
        for (g, c) in self.iter() {
            r.coeffs.insert(g, c * s);
        }
        r
    }

    pub fn mul(&self, o: &Self, grp: &dyn Group) -> Self {
        let mut r = Self::zero();
        for (x, a) in self.iter() {
            for (y, b) in o.iter() {
                r.add_term(grp.mul(x, y), a * b);
            }
        }
        r
    }

    /// Left multiplication by a group element.
    pub fn left_translate(&self, g: usize, grp: &dyn Group) -> Self {
        let mut r = Self::zero();
        for (x, a) in self.iter() {
            r.coeffs.insert(grp.mul(g, x), a.clone());
        }
        r
    }

    /// Image under a map of index sets (e.g. a projection Ĝ → G).
    pub fn push_forward(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut r = Self::zero();
        for (x, a) in self.iter() {
            r.add_term(f(x), a.clone());
        }
        r
    }

    pub fn is_one(&self, grp: &dyn Group) -> bool {
        self.coeffs.len() == 1 && self.coeff(grp.identity()).is_one()
    }

    /// `element_index numerator/denominator` lines.
    pub fn write_dump(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (g, c) in self.iter() {
            writeln!(w, "{g} {}/{}", c.numer(), c.denom())?;
        }
        Ok(())
    }

    pub fn parse_dump(text: &str) -> Option<Self> {
        let mut e = Self::zero();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (g, frac) = line.trim().split_once(' ')?;
            let (n, d) = frac.split_once('/')?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            e.add_term(g.parse().ok()?, BigRational::new(n.parse().ok()?, d));
        }
        Some(e)
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_element_square() {
        let g = CayleyTable::cyclic(6);
        let h = [0usize, 2, 4];
        let n = GroupAlgElt::norm_element(&h);
        assert_eq!(n.mul(&n, &g), n.scale(&rat(3)));
    }

    #[test]
    fn dump_roundtrip() {
        let mut e = GroupAlgElt::zero();
        e.add_term(3, BigRational::new(BigInt::from(-2), BigInt::from(7)));
        e.add_term(0, rat(5));
        let mut buf = Vec::new();
        e.write_dump(&mut buf).unwrap();
        assert_eq!(GroupAlgElt::parse_dump(std::str::from_utf8(&buf).unwrap()).unwrap(), e);
    }

    #[test]
    fn table_rejects_nonassociative() {
        // a Latin square that is not a group
        let t = vec![0, 1, 2, 1, 2, 0, 2, 0, 1];
        assert!(CayleyTable::from_table(3, t).is_some());
        let bad = vec![0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0];
        assert!(CayleyTable::from_table(5, bad).is_none());
    }
}
