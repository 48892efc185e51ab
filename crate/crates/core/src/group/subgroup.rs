use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{GroupTable, Mat2, Sl2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupName {
    B,
    CqMinus1,
    TwoDqMinus1,
    TwoDqPlus1,
    C4,
    Q8,
    C6,
    Sl23,
    Z,
}

impl SubgroupName {
    pub const ALL: [SubgroupName; 9] = [
        SubgroupName::B,
        SubgroupName::CqMinus1,
        SubgroupName::TwoDqMinus1,
        SubgroupName::TwoDqPlus1,
        SubgroupName::C4,
        SubgroupName::Q8,
        SubgroupName::C6,
        SubgroupName::Sl23,
        SubgroupName::Z,
    ];

    pub fn expected_order(&self, q: u32) -> usize {
        let q = q as usize;
        match self {
            SubgroupName::B => q * (q - 1),
            SubgroupName::CqMinus1 => q - 1,
            SubgroupName::TwoDqMinus1 => 2 * (q - 1),
            SubgroupName::TwoDqPlus1 => 2 * (q + 1),
            SubgroupName::C4 => 4,
            SubgroupName::Q8 => 8,
            SubgroupName::C6 => 6,
            SubgroupName::Sl23 => 24,
            SubgroupName::Z => 2,
        }
    }
}

impl fmt::Display for SubgroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgroupName::B => "B",
            SubgroupName::CqMinus1 => "C_{q-1}",
            SubgroupName::TwoDqMinus1 => "2D_{q-1}",
            SubgroupName::TwoDqPlus1 => "2D_{q+1}",
            SubgroupName::C4 => "C_4",
            SubgroupName::Q8 => "Q_8",
            SubgroupName::C6 => "C_6",
            SubgroupName::Sl23 => "SL_2(3)",
            SubgroupName::Z => "Z",
        })
    }
}

/// A subgroup of SL₂(q), stored as matrices sorted by encoding.
#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub name: SubgroupName,
    elements: Vec<Mat2>,
    codes: Vec<u64>,
    generators: Vec<Mat2>,
}

impl SubgroupHandle {
    fn from_elements(sl: &Sl2, name: SubgroupName, mut elements: Vec<Mat2>, generators: Vec<Mat2>) -> Self {
        elements.sort_by_key(|m| sl.encode(m));
        let codes = elements.iter().map(|m| sl.encode(m)).collect();
        SubgroupHandle { name, elements, codes, generators }
    }

    /// Subgroup generated by `generators`, by closure.
    pub fn generated(sl: &Sl2, name: SubgroupName, generators: Vec<Mat2>) -> Self {
        let mut seen: HashSet<Mat2> = HashSet::new();
        let id = sl.identity();
        seen.insert(id);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = sl.mul(&x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Self::from_elements(sl, name, seen.into_iter().collect(), generators)
    }

    /// c H c⁻¹.
    pub fn conjugate(&self, sl: &Sl2, c: &Mat2) -> Self {
        let els = self.elements.iter().map(|h| sl.conj(c, h)).collect();
        let gens = self.generators.iter().map(|h| sl.conj(c, h)).collect();
        Self::from_elements(sl, self.name, els, gens)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn contains(&self, sl: &Sl2, m: &Mat2) -> bool {
        self.codes.binary_search(&sl.encode(m)).is_ok()
    }

    pub fn is_subgroup_of(&self, sl: &Sl2, other: &SubgroupHandle) -> bool {
        self.generators.iter().all(|g| other.contains(sl, g))
    }

    /// Sorted indices in an enumerated table (deduplicated for PSL).
    pub fn indices(&self, t: &GroupTable) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|m| t.index_of(m).expect("element of table")).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn generator_indices(&self, t: &GroupTable) -> Vec<usize> {
        self.generators.iter().map(|m| t.index_of(m).expect("element of table")).collect()
    }

    /// Exhaustive closure check: H·H ⊆ H and H⁻¹ = H.
    pub fn is_closed(&self, sl: &Sl2) -> bool {
        self.elements.iter().all(|x| {
            self.contains(sl, &sl.inv(x)) && self.elements.iter().all(|y| self.contains(sl, &sl.mul(x, y)))
        })
    }
}

/// The named subgroups of SL₂(q) under the fixed generator choices.
pub fn standard_subgroup(name: SubgroupName, sl: &Sl2) -> Result<SubgroupHandle> {
    let q = sl.q();
    let a = sl.a();
    let h = match name {
        SubgroupName::B => {
            let f = sl.field();
            let mut els = Vec::with_capacity((q * (q - 1)) as usize);
            for x in 1..q {
                for y in 0..q {
                    els.push(Mat2([x, y, 0, f.inv(x)]));
                }
            }
            let gens = vec![a, Mat2([1, 1, 0, 1])];
            SubgroupHandle::from_elements(sl, name, els, gens)
        }
        SubgroupName::CqMinus1 => SubgroupHandle::generated(sl, name, vec![a]),
        SubgroupName::TwoDqMinus1 => SubgroupHandle::generated(sl, name, vec![a, sl.alpha()]),
        SubgroupName::TwoDqPlus1 => SubgroupHandle::generated(sl, name, vec![sl.b(), sl.beta()]),
        SubgroupName::C4 => SubgroupHandle::generated(sl, name, vec![sl.pow(&a, (q as u64 - 1) / 4)]),
        SubgroupName::Q8 => SubgroupHandle::generated(sl, name, vec![sl.pow(&a, (q as u64 - 1) / 4), sl.alpha()]),
        SubgroupName::C6 => SubgroupHandle::generated(sl, name, vec![c6_generator(sl)]),
        SubgroupName::Sl23 => {
            let q8 = standard_subgroup(SubgroupName::Q8, sl)?;
            let t = find_q8_normalizing_order3(sl, &q8)?;
            let mut gens = q8.generators.clone();
            gens.push(t);
            SubgroupHandle::generated(sl, name, gens)
        }
        SubgroupName::Z => SubgroupHandle::generated(sl, name, vec![sl.z()]),
    };
    if h.order() != name.expected_order(q) {
        return Err(Error::SearchFailed(format!("{name} has order {} (expected {})", h.order(), name.expected_order(q))));
    }
    Ok(h)
}

fn c6_generator(sl: &Sl2) -> Mat2 {
    let q = sl.q() as u64;
    if q % 3 == 1 {
        sl.pow(&sl.a(), (q - 1) / 6)
    } else {
        sl.pow(&sl.b(), (q + 1) / 6)
    }
}

/// First order-3 element in encoding order normalizing `q8`.
fn find_q8_normalizing_order3(sl: &Sl2, q8: &SubgroupHandle) -> Result<Mat2> {
    let minus_one = sl.q() - 1;
    sl.elements_in_order()
        .filter(|m| m.trace(sl.field()) == minus_one)
        .find(|t| q8.generators.iter().all(|g| q8.contains(sl, &sl.conj(t, g))))
        .ok_or_else(|| Error::SearchFailed("order-3 element normalizing Q8".into()))
}

/// (ĝ₁, ĝ₃): generators of the C₄ and C₆ handles.
pub fn edge_generators(sl: &Sl2) -> (Mat2, Mat2) {
    (sl.pow(&sl.a(), (sl.q() as u64 - 1) / 4), c6_generator(sl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ClassLabel;

    #[test]
    fn orders_and_closure_q13() {
        let sl = Sl2::new(13).unwrap();
        for name in SubgroupName::ALL {
            let h = standard_subgroup(name, &sl).unwrap();
            assert_eq!(h.order(), name.expected_order(13), "{name}");
            assert!(h.is_closed(&sl), "{name}");
        }
    }

    #[test]
    fn q8_at_29() {
        let sl = Sl2::new(29).unwrap();
        let h = standard_subgroup(SubgroupName::Q8, &sl).unwrap();
        assert_eq!(h.order(), 8);
        let z = sl.z();
        let order4 = h.elements().iter().filter(|m| **m != z && **m != sl.identity()).filter(|m| sl.element_order(m) == 4).count();
        assert_eq!(order4, 6);
    }

    #[test]
    fn edge_generator_classes() {
        let sl = Sl2::new(13).unwrap();
        let (g1, g3) = edge_generators(&sl);
        assert_eq!(g1, sl.pow(&sl.a(), 3));
        assert_eq!(sl.mul(&g1, &g1), sl.z());
        assert_eq!(sl.element_order(&g3), 6);
        assert_eq!(sl.pow(&g3, 3), sl.z());
        assert_eq!(sl.classify(&sl.mul(&g3, &g3)), ClassLabel::A(4));
        let sl = Sl2::new(29).unwrap();
        let (_, g3) = edge_generators(&sl);
        assert_eq!(sl.classify(&g3), ClassLabel::B(5));
    }
}
