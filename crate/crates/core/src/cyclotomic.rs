//! Exact arithmetic in ℚ(ζ_N), power basis reduced modulo Φ_N.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n % d == 0) {
        let phi_d = cyclotomic_polynomial(d);
        p = exact_div(&p, &phi_d);
    }
    let out: Vec<i64> = p.iter().map(|&c| i64::try_from(c).expect("cyclotomic coefficient fits i64")).collect();
    let out = Arc::new(out);
    phi_cache().lock().unwrap().insert(n, out.clone());
    out
}

fn exact_div(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i128; num.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn];
        quo[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj as i128;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quo
}

pub fn euler_phi(n: u32) -> u32 {
    cyclotomic_polynomial(n).len() as u32 - 1
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Element of ℚ(ζ_n): Σ num[k] ζ_n^k / den, with deg < φ(n), gcd(num, den) = 1, den > 0.
#[derive(Clone, Debug)]
pub struct CycloNum {
    n: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

/// ζ_n^k.
pub fn cyclo(n: u32, k: i64) -> CycloNum {
    CycloNum::root_of_unity(n, k)
}

impl CycloNum {
    pub fn zero() -> Self {
        CycloNum { n: 1, num: vec![BigInt::zero()], den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        CycloNum { n: 1, num: vec![BigInt::from(v)], den: BigInt::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        CycloNum { n: 1, num: vec![r.numer().clone()], den: r.denom().clone() }.normalized()
    }

    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let mut p = vec![BigInt::zero(); n as usize];
        p[k.rem_euclid(n as i64) as usize] = BigInt::one();
        Self::from_poly_mod_xn(n, p, BigInt::one())
    }

    /// Σ_k coeffs[k] ζ_n^k with exponents taken mod n.
    pub fn from_exponents(n: u32, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = vec![BigInt::zero(); n as usize];
        for (k, c) in terms {
            p[k.rem_euclid(n as i64) as usize] += c;
        }
        Self::from_poly_mod_xn(n, p, BigInt::one())
    }

    fn from_poly_mod_xn(n: u32, mut p: Vec<BigInt>, den: BigInt) -> Self {
        let phi = cyclotomic_polynomial(n);
        reduce(&mut p, &phi);
        CycloNum { n, num: p, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in self.num.iter_mut() {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
        } else if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                *c /= &g;
            }
        }
        self
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Rational coefficients in the power basis 1, ζ, …, ζ^{φ(n)−1}.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    /// The same number written over ζ_m, for n | m.
    pub fn promote(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "conductor {} does not divide {m}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut p = vec![BigInt::zero(); m as usize];
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                p[k * step] = c.clone();
            }
        }
        Self::from_poly_mod_xn(m, p, self.den.clone())
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let m = lcm(self.n, o.n);
        (self.promote(m), o.promote(m))
    }

    /// Complex conjugate: ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut p = vec![BigInt::zero(); n];
        for (k, c) in self.num.iter().enumerate() {
            if !c.is_zero() {
                p[(n - k) % n] = c.clone();
            }
        }
        Self::from_poly_mod_xn(self.n, p, self.den.clone())
    }

    pub fn as_rational(&self) -> Result<BigRational> {
        if self.num.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(Error::NotRational);
        }
        Ok(BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Result<BigInt> {
        let r = self.as_rational()?;
        if !r.is_integer() {
            return Err(Error::NotInteger(r.to_string()));
        }
        Ok(r.to_integer())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloNum {
            n: self.n,
            num: self.num.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        }
        .normalized()
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / self.n as f64;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re / den, im / den)
    }

    /// `N:c0/d0,c1/d1,...`
    pub fn to_text(&self) -> String {
        let coeffs: Vec<String> = self
            .coefficients()
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect();
        format!("{}:{}", self.n, coeffs.join(","))
    }
}

fn reduce(p: &mut Vec<BigInt>, phi: &[i64]) {
    let d = phi.len() - 1;
    let terms: Vec<(usize, i64)> = phi[..d].iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, *c)).collect();
    for k in (d..p.len()).rev() {
        if p[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut p[k]);
        for &(j, pj) in &terms {
            p[k - d + j] -= &c * pj;
        }
    }
    p.truncate(d.max(1));
    p.resize(d.max(1), BigInt::zero());
}

impl PartialEq for CycloNum {
    fn eq(&self, o: &Self) -> bool {
        if self.n == o.n {
            return self.den == o.den && self.num == o.num;
        }
        let (a, b) = self.aligned(o);
        a.den == b.den && a.num == b.num
    }
}

impl Eq for CycloNum {}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, o: &CycloNum) -> CycloNum {
        let (a, b) = self.aligned(o);
        let num = a.num.iter().zip(&b.num).map(|(x, y)| x * &b.den + y * &a.den).collect();
        CycloNum { n: a.n, num, den: &a.den * &b.den }.normalized()
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, o: &CycloNum) -> CycloNum {
        self + &(-o)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { n: self.n, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, o: &CycloNum) -> CycloNum {
        let (a, b) = self.aligned(o);
        let len = a.num.len() + b.num.len() - 1;
        let mut p = vec![BigInt::zero(); len];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        reduce(&mut p, &cyclotomic_polynomial(a.n));
        CycloNum { n: a.n, num: p, den: &a.den * &b.den }.normalized()
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $f(self, o: CycloNum) -> CycloNum { (&self).$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        f.write_str(&self.to_text())
    }
}

impl FromStr for CycloNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cyclotomic text {s:?}"));
        let (n, body) = s.split_once(':').ok_or_else(bad)?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let mut acc = CycloNum::zero();
        for (k, part) in body.split(',').enumerate() {
            let (a, b) = part.trim().split_once('/').ok_or_else(bad)?;
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            let term = CycloNum::root_of_unity(n, k as i64).scale(&BigRational::new(a, b));
            acc = &acc + &term;
        }
        Ok(acc.promote(n))
    }
}

/// Sum accumulator that groups terms by conductor and merges once at the end.
#[derive(Default)]
pub struct CycloSum {
    parts: BTreeMap<u32, CycloNum>,
}

impl CycloSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: &CycloNum) {
        match self.parts.get_mut(&x.n) {
            Some(p) => *p = &*p + x,
            None => {
                self.parts.insert(x.n, x.clone());
            }
        }
    }

    pub fn finish(self) -> CycloNum {
        self.parts.into_values().fold(CycloNum::zero(), |acc, x| &acc + &x)
    }
}
