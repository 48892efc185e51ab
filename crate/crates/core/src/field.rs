//! Prime field arithmetic over 𝔽_q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Error;

/// Primes below 200 in the two admissible residue classes (q > 5).
pub const VALID_PRIMES_BELOW_200: [u32; 12] = [13, 29, 37, 53, 61, 101, 109, 149, 157, 173, 181, 197];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that q is a prime with q ≡ 5 or 13 (mod 24) and q > 5.
pub fn validate_q(q: u32) -> Result<(), Error> {
    if !is_prime(q as u64) {
        return Err(Error::InvalidModulus { q, reason: "not prime" });
    }
    if q <= 5 {
        return Err(Error::InvalidModulus { q, reason: "must exceed 5" });
    }
    if q % 24 != 5 && q % 24 != 13 {
        return Err(Error::InvalidModulus { q, reason: "not 5 or 13 mod 24" });
    }
    Ok(())
}

/// Context for 𝔽_q with the fixed primitive root and non-square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
    epsilon: u32,
    delta: u32,
}

impl PrimeField {
    /// Builds the field context for any odd prime (no residue restriction).
    pub fn new(q: u32) -> Result<Self, Error> {
        if q < 3 || !is_prime(q as u64) {
            return Err(Error::InvalidModulus { q, reason: "not an odd prime" });
        }
        let mut f = PrimeField { q, epsilon: 0, delta: 0 };
        f.epsilon = (2..q).find(|&g| f.is_primitive_root(g)).expect("primitive root");
        f.delta = (2..q).find(|&x| f.legendre(x) == -1).expect("non-square");
        Ok(f)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Least primitive root ε.
    pub fn epsilon(&self) -> u32 {
        self.epsilon
    }

    /// Least non-square δ.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.q;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.q != 0, "inverse of zero");
        self.pow(a, (self.q - 2) as u64)
    }

    /// Quadratic character: 0, +1 or −1.
    pub fn legendre(&self, a: u32) -> i8 {
        let a = a % self.q;
        if a == 0 {
            return 0;
        }
        if self.pow(a, ((self.q - 1) / 2) as u64) == 1 {
            1
        } else {
            -1
        }
    }

    fn is_primitive_root(&self, g: u32) -> bool {
        let n = self.q - 1;
        prime_factors(n as u64).into_iter().all(|p| self.pow(g, n as u64 / p) != 1)
    }

    /// Discrete log base ε, for nonzero x.
    pub fn log(&self, x: u32) -> u32 {
        let mut acc = 1;
        for k in 0..self.q - 1 {
            if acc == x {
                return k;
            }
            acc = self.mul(acc, self.epsilon);
        }
        panic!("log of zero");
    }

    pub fn elt(&self, v: i64) -> FqElt {
        FqElt::new(v, self.q)
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of 𝔽_q carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElt {
    value: u32,
    modulus: u32,
}

impl FqElt {
    pub fn new(v: i64, q: u32) -> Self {
        FqElt { value: v.rem_euclid(q as i64) as u32, modulus: q }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut acc = FqElt { value: 1 % self.modulus, modulus: self.modulus };
        let mut b = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| self.pow(self.modulus as u64 - 2))
    }

    pub fn legendre(self) -> i8 {
        legendre(self)
    }
}

/// Quadratic character of x in its own field.
pub fn legendre(x: FqElt) -> i8 {
    if x.value == 0 {
        0
    } else if x.pow((x.modulus as u64 - 1) / 2).value == 1 {
        1
    } else {
        -1
    }
}

impl Add for FqElt {
    type Output = FqElt;
    fn add(self, o: FqElt) -> FqElt {
        debug_assert_eq!(self.modulus, o.modulus);
        FqElt::new(self.value as i64 + o.value as i64, self.modulus)
    }
}

impl Sub for FqElt {
    type Output = FqElt;
    fn sub(self, o: FqElt) -> FqElt {
        debug_assert_eq!(self.modulus, o.modulus);
        FqElt::new(self.value as i64 - o.value as i64, self.modulus)
    }
}

impl Mul for FqElt {
    type Output = FqElt;
    fn mul(self, o: FqElt) -> FqElt {
        debug_assert_eq!(self.modulus, o.modulus);
        FqElt { value: ((self.value as u64 * o.value as u64) % self.modulus as u64) as u32, modulus: self.modulus }
    }
}

impl Neg for FqElt {
    type Output = FqElt;
    fn neg(self) -> FqElt {
        FqElt::new(-(self.value as i64), self.modulus)
    }
}

impl fmt::Display for FqElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
