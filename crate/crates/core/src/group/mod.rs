//! SL₂(q) and PSL₂(q): matrices, fixed generators, class labels, enumerated tables.

mod cache;
mod subgroup;
mod table;

pub use subgroup::{edge_generators, standard_subgroup, SubgroupHandle, SubgroupName};
pub use table::{Flavor, GroupTable};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{validate_q, PrimeField};

/// A 2×2 matrix over 𝔽_q, entries row-major and reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [u32; 4]);

impl Mat2 {
    pub fn encode(&self, q: u32) -> u64 {
        let q = q as u64;
        let [a, b, c, d] = self.0.map(|x| x as u64);
        ((a * q + b) * q + c) * q + d
    }

    pub fn decode(mut code: u64, q: u32) -> Mat2 {
        let q64 = q as u64;
        let mut e = [0u32; 4];
        for slot in e.iter_mut().rev() {
            *slot = (code % q64) as u32;
            code /= q64;
        }
        Mat2(e)
    }

    pub fn trace(&self, f: &PrimeField) -> u32 {
        f.add(self.0[0], self.0[3])
    }

    pub fn det(&self, f: &PrimeField) -> u32 {
        f.sub(f.mul(self.0[0], self.0[3]), f.mul(self.0[1], self.0[2]))
    }
}

/// Conjugacy class label of SL₂(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    One,
    Z,
    C,
    D,
    ZC,
    ZD,
    A(u32),
    B(u32),
}

impl ClassLabel {
    /// All q + 4 labels in table order.
    pub fn all(q: u32) -> Vec<ClassLabel> {
        let mut v = vec![ClassLabel::One, ClassLabel::Z, ClassLabel::C, ClassLabel::D, ClassLabel::ZC, ClassLabel::ZD];
        v.extend((1..=(q - 3) / 2).map(ClassLabel::A));
        v.extend((1..=(q - 1) / 2).map(ClassLabel::B));
        v
    }

    /// Position of the label in [`ClassLabel::all`].
    pub fn position(&self, q: u32) -> usize {
        match *self {
            ClassLabel::One => 0,
            ClassLabel::Z => 1,
            ClassLabel::C => 2,
            ClassLabel::D => 3,
            ClassLabel::ZC => 4,
            ClassLabel::ZD => 5,
            ClassLabel::A(l) => 5 + l as usize,
            ClassLabel::B(m) => 5 + (q as usize - 3) / 2 + m as usize,
        }
    }

    /// Class size in SL₂(q).
    pub fn class_size(&self, q: u32) -> u64 {
        let q = q as u64;
        match self {
            ClassLabel::One | ClassLabel::Z => 1,
            ClassLabel::C | ClassLabel::D | ClassLabel::ZC | ClassLabel::ZD => (q * q - 1) / 2,
            ClassLabel::A(_) => q * (q + 1),
            ClassLabel::B(_) => q * (q - 1),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::One => write!(f, "1"),
            ClassLabel::Z => write!(f, "z"),
            ClassLabel::C => write!(f, "c"),
            ClassLabel::D => write!(f, "d"),
            ClassLabel::ZC => write!(f, "zc"),
            ClassLabel::ZD => write!(f, "zd"),
            ClassLabel::A(l) => write!(f, "a^{l}"),
            ClassLabel::B(m) => write!(f, "b^{m}"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("class label {s:?}"));
        Ok(match s {
            "1" => ClassLabel::One,
            "z" => ClassLabel::Z,
            "c" => ClassLabel::C,
            "d" => ClassLabel::D,
            "zc" => ClassLabel::ZC,
            "zd" => ClassLabel::ZD,
            _ => {
                let (kind, exp) = s.split_once('^').ok_or_else(bad)?;
                let e: u32 = exp.parse().map_err(|_| bad())?;
                match kind {
                    "a" => ClassLabel::A(e),
                    "b" => ClassLabel::B(e),
                    _ => return Err(bad()),
                }
            }
        })
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// SL₂(q) without enumeration: field, fixed generators and the class-label table.
#[derive(Clone, Debug)]
pub struct Sl2 {
    field: PrimeField,
    a: Mat2,
    b: Mat2,
    alpha: Mat2,
    beta: Mat2,
    /// trace → semisimple label, for traces other than ±2
    trace_label: Vec<Option<ClassLabel>>,
}

impl Sl2 {
    pub fn new(q: u32) -> Result<Self> {
        validate_q(q)?;
        Self::new_unchecked(q)
    }

    /// Any odd prime q ≥ 5; the residue restriction is not enforced.
    pub fn new_unchecked(q: u32) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let eps = field.epsilon();
        let a = Mat2([eps, 0, 0, field.inv(eps)]);
        let alpha = Mat2([0, 1, q - 1, 0]);
        let identity = Mat2([1, 0, 0, 1]);
        let mut s = Sl2 { field, a, b: identity, alpha, beta: identity, trace_label: vec![None; q as usize] };
        s.b = s.find_b()?;
        s.beta = s.find_beta()?;
        s.build_trace_table()?;
        Ok(s)
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn order(&self) -> u64 {
        let q = self.q() as u64;
        q * (q - 1) * (q + 1)
    }

    /// Split torus generator diag(ε, ε⁻¹), order q − 1.
    pub fn a(&self) -> Mat2 {
        self.a
    }

    /// Non-split torus generator, order q + 1.
    pub fn b(&self) -> Mat2 {
        self.b
    }

    /// [[0, 1], [−1, 0]].
    pub fn alpha(&self) -> Mat2 {
        self.alpha
    }

    /// Order 4 with β² = z and b^β = b⁻¹.
    pub fn beta(&self) -> Mat2 {
        self.beta
    }

    pub fn identity(&self) -> Mat2 {
        Mat2([1, 0, 0, 1])
    }

    pub fn z(&self) -> Mat2 {
        let m = self.q() - 1;
        Mat2([m, 0, 0, m])
    }

    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let f = &self.field;
        let [a, b, c, d] = x.0;
        let [e, g, h, k] = y.0;
        Mat2([
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ])
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inv(&self, x: &Mat2) -> Mat2 {
        let f = &self.field;
        let [a, b, c, d] = x.0;
        Mat2([d, f.neg(b), f.neg(c), a])
    }

    pub fn neg(&self, x: &Mat2) -> Mat2 {
        Mat2(x.0.map(|v| self.field.neg(v)))
    }

    pub fn pow(&self, x: &Mat2, mut e: u64) -> Mat2 {
        let mut acc = self.identity();
        let mut base = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// x y x⁻¹.
    pub fn conj(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        self.mul(&self.mul(x, y), &self.inv(x))
    }

    pub fn element_order(&self, x: &Mat2) -> u64 {
        let id = self.identity();
        let mut acc = *x;
        let mut n = 1;
        while acc != id {
            acc = self.mul(&acc, x);
            n += 1;
        }
        n
    }

    pub fn is_member(&self, x: &Mat2) -> bool {
        x.0.iter().all(|&v| v < self.q()) && x.det(&self.field) == 1
    }

    pub fn encode(&self, x: &Mat2) -> u64 {
        x.encode(self.q())
    }

    /// Least encoding of {M, −M}.
    pub fn psl_rep(&self, x: &Mat2) -> Mat2 {
        let n = self.neg(x);
        if self.encode(&n) < self.encode(x) {
            n
        } else {
            *x
        }
    }

    /// All of SL₂(q) in increasing encoding order.
    pub fn elements_in_order(&self) -> impl Iterator<Item = Mat2> + '_ {
        let q = self.q();
        let f = &self.field;
        (0..q).flat_map(move |a| {
            (0..q).flat_map(move |b| {
                (0..q).flat_map(move |c| {
                    let bc1 = f.add(f.mul(b, c), 1);
                    let ds: Vec<u32> = if a != 0 {
                        vec![f.mul(bc1, f.inv(a))]
                    } else if bc1 == 0 {
                        (0..q).collect()
                    } else {
                        Vec::new()
                    };
                    ds.into_iter().map(move |d| Mat2([a, b, c, d]))
                })
            })
        })
    }

    /// Class label of an element of SL₂(q).
    pub fn classify(&self, m: &Mat2) -> ClassLabel {
        let q = self.q();
        let f = &self.field;
        let tr = m.trace(f);
        if tr == 2 || tr == q - 2 {
            let central = if tr == 2 { self.identity() } else { self.z() };
            if *m == central {
                return if tr == 2 { ClassLabel::One } else { ClassLabel::Z };
            }
            // N = M − 1 or −M − 1 is nilpotent of rank one
            let s = if tr == 2 { *m } else { self.neg(m) };
            let n = [f.sub(s.0[0], 1), s.0[1], s.0[2], f.sub(s.0[3], 1)];
            let v = if n[0] != 0 || n[2] != 0 { [1, 0] } else { [0, 1] };
            let nv = [f.add(f.mul(n[0], v[0]), f.mul(n[1], v[1])), f.add(f.mul(n[2], v[0]), f.mul(n[3], v[1]))];
            let det = f.sub(f.mul(nv[0], v[1]), f.mul(v[0], nv[1]));
            let square = f.legendre(det) == 1;
            return match (tr == 2, square) {
                (true, true) => ClassLabel::C,
                (true, false) => ClassLabel::D,
                (false, true) => ClassLabel::ZC,
                (false, false) => ClassLabel::ZD,
            };
        }
        self.trace_label[tr as usize].expect("trace table covers every semisimple trace")
    }

    fn find_b(&self) -> Result<Mat2> {
        let q = self.q();
        let f = &self.field;
        let delta = f.delta();
        let mut best: Option<(u64, Mat2)> = None;
        for x in 0..q {
            for y in 0..q {
                let m = Mat2([x, f.mul(delta, y), y, x]);
                if m.det(f) != 1 || self.element_order(&m) != q as u64 + 1 {
                    continue;
                }
                let code = self.encode(&m);
                if best.is_none_or(|(c, _)| code < c) {
                    best = Some((code, m));
                }
            }
        }
        best.map(|(_, m)| m).ok_or_else(|| Error::SearchFailed("non-split torus generator".into()))
    }

    fn find_beta(&self) -> Result<Mat2> {
        let z = self.z();
        let b_inv = self.inv(&self.b);
        let tr0 = |m: &Mat2| m.trace(&self.field) == 0;
        self.elements_in_order()
            .find(|m| tr0(m) && self.mul(m, m) == z && self.conj(m, &self.b) == b_inv)
            .ok_or_else(|| Error::SearchFailed("normalizing element beta".into()))
    }

    fn build_trace_table(&mut self) -> Result<()> {
        let q = self.q();
        let put = |s: &mut Self, m: Mat2, label: ClassLabel| -> Result<()> {
            let t = m.trace(&s.field) as usize;
            if t == 2 || t == q as usize - 2 || s.trace_label[t].is_some() {
                return Err(Error::SearchFailed(format!("trace collision at {label}")));
            }
            s.trace_label[t] = Some(label);
            Ok(())
        };
        for l in 1..=(q - 3) / 2 {
            let m = self.pow(&self.a, l as u64);
            put(self, m, ClassLabel::A(l))?;
        }
        for m in 1..=(q - 1) / 2 {
            let x = self.pow(&self.b, m as u64);
            put(self, x, ClassLabel::B(m))?;
        }
        Ok(())
    }
}
