use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{cache, ClassLabel, Mat2, Sl2};
use crate::algebra::Group;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Sl,
    Psl,
}

/// Fully enumerated SL₂(q) or PSL₂(q), indexed in increasing encoding order.
///
/// PSL elements are stored by the representative of {M, −M} with least encoding.
#[derive(Clone, Debug)]
pub struct GroupTable {
    sl: Arc<Sl2>,
    flavor: Flavor,
    elements: Vec<Mat2>,
    codes: Vec<u64>,
    labels: Vec<ClassLabel>,
    identity: usize,
}

impl GroupTable {
    pub fn enumerate(q: u32, flavor: Flavor) -> Result<Self> {
        Ok(Self::from_context(Arc::new(Sl2::new(q)?), flavor))
    }

    pub fn from_context(sl: Arc<Sl2>, flavor: Flavor) -> Self {
        let elements: Vec<Mat2> = match flavor {
            Flavor::Sl => sl.elements_in_order().collect(),
            Flavor::Psl => sl.elements_in_order().filter(|m| sl.psl_rep(m) == *m).collect(),
        };
        Self::from_elements(sl, flavor, elements)
    }

    /// Uses the binary cache in `dir` when present and valid, writing it otherwise.
    pub fn load_or_build(q: u32, flavor: Flavor, dir: Option<&Path>) -> Result<Self> {
        let sl = Arc::new(Sl2::new(q)?);
        let Some(dir) = dir else {
            return Ok(Self::from_context(sl, flavor));
        };
        if let Some(elements) = cache::load(dir, &sl, flavor) {
            return Ok(Self::from_elements(sl, flavor, elements));
        }
        let t = Self::from_context(sl, flavor);
        cache::store(dir, t.q(), flavor, &t.codes)?;
        Ok(t)
    }

    fn from_elements(sl: Arc<Sl2>, flavor: Flavor, elements: Vec<Mat2>) -> Self {
        let codes: Vec<u64> = elements.iter().map(|m| sl.encode(m)).collect();
        let labels = elements.iter().map(|m| sl.classify(m)).collect();
        let identity = codes.binary_search(&sl.encode(&sl.identity())).expect("identity present");
        GroupTable { sl, flavor, elements, codes, labels, identity }
    }

    pub fn sl(&self) -> &Arc<Sl2> {
        &self.sl
    }

    pub fn q(&self) -> u32 {
        self.sl.q()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> Mat2 {
        self.elements[i]
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> ClassLabel {
        self.labels[i]
    }

    /// Index of a matrix (any lift, for PSL).
    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        let m = match self.flavor {
            Flavor::Sl => *m,
            Flavor::Psl => self.sl.psl_rep(m),
        };
        self.codes.binary_search(&self.sl.encode(&m)).ok()
    }

    pub fn a(&self) -> Mat2 {
        self.sl.a()
    }

    pub fn b(&self) -> Mat2 {
        self.sl.b()
    }

    pub fn alpha(&self) -> Mat2 {
        self.sl.alpha()
    }

    pub fn classify(&self, m: &Mat2) -> ClassLabel {
        self.sl.classify(m)
    }

    /// `index a b c d` lines.
    pub fn write_dump(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (i, m) in self.elements.iter().enumerate() {
            writeln!(w, "{i} {} {} {} {}", m.0[0], m.0[1], m.0[2], m.0[3])?;
        }
        Ok(())
    }

    /// `index label` lines.
    pub fn write_class_map(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(w, "{i} {l}")?;
        }
        Ok(())
    }
}

impl Group for GroupTable {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn identity(&self) -> usize {
        self.identity
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let m = self.sl.mul(&self.elements[a], &self.elements[b]);
        self.index_of(&m).expect("closed under multiplication")
    }

    fn inv(&self, a: usize) -> usize {
        self.index_of(&self.sl.inv(&self.elements[a])).expect("closed under inverse")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(GroupTable::enumerate(13, Flavor::Sl).unwrap().len(), 2184);
        assert_eq!(GroupTable::enumerate(13, Flavor::Psl).unwrap().len(), 1092);
        assert_eq!(GroupTable::enumerate(29, Flavor::Sl).unwrap().len(), 24360);
    }

    #[test]
    fn brute_force_count() {
        // all 13⁴ matrices, filtered by determinant
        let sl = Sl2::new(13).unwrap();
        let n = (0..13u64.pow(4)).filter(|&c| sl.is_member(&Mat2::decode(c, 13))).count();
        assert_eq!(n, 2184);
    }

    #[test]
    fn rejects_bad_q() {
        assert!(GroupTable::enumerate(15, Flavor::Sl).is_err());
        assert!(GroupTable::enumerate(17, Flavor::Sl).is_err());
    }
}
