//! Exact coefficient arithmetic over the rationals and over prime fields.
//!
//! A [`Field`] is a lightweight tag describing the coefficient domain; the
//! actual coefficient values are [`Coeff`]. Rational coefficients are
//! arbitrary precision and always stored fully reduced with positive
//! denominator (enforced by `num_rational`). Prime-field coefficients are
//! stored as canonical representatives `0..p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient domain tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    /// Prime field with word-sized modulus; primality is verified at
    /// construction.
    Prime(u64),
}

/// A single coefficient. Which variant is valid depends on the ambient
/// [`Field`]; all arithmetic goes through the field so the invariants
/// (reduced fraction, canonical residue) hold everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Rat(BigRational),
    Mod(u64),
}

impl Field {
    /// Prime field constructor; rejects non-prime moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime_u64(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::zero()),
            Field::Prime(_) => Coeff::Mod(0),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::one()),
            Field::Prime(_) => Coeff::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::from(BigInt::from(n))),
            Field::Prime(p) => {
                let m = n.rem_euclid(*p as i64);
                Coeff::Mod(m as u64)
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coeff {
        match self {
            Field::Rationals => Coeff::Rat(BigRational::from(n.clone())),
            Field::Prime(p) => {
                let p_big = BigInt::from(*p);
                let mut m = n % &p_big;
                if m.is_negative() {
                    m += &p_big;
                }
                let digits = m.to_u64_digits().1;
                Coeff::Mod(digits.first().copied().unwrap_or(0))
            }
        }
    }

    /// Quotient of two integer literals. Over a prime field this is
    /// multiplication by the inverse of the denominator, which must not
    /// vanish mod p.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Coeff> {
        if den.is_zero() {
            return Err(Error::Validation("zero denominator".into()));
        }
        match self {
            Field::Rationals => Ok(Coeff::Rat(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let d = self.from_bigint(den);
                if self.is_zero(&d) {
                    return Err(Error::Validation(format!(
                        "denominator vanishes mod {p}"
                    )));
                }
                let n = self.from_bigint(num);
                Ok(self.mul(&n, &self.inv(&d)))
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Mod(m) => *m == 0,
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Mod(m) => *m == 1,
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (Field::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(addmod(*x, *y, *p)),
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Rationals, Coeff::Rat(x)) => Coeff::Rat(-x),
            (Field::Prime(p), Coeff::Mod(x)) => Coeff::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Rationals, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (Field::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => Coeff::Mod(mulmod(*x, *y, *p)),
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    /// Multiplicative inverse. Panics on zero: callers must test first.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Rationals, Coeff::Rat(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coeff::Rat(x.recip())
            }
            (Field::Prime(p), Coeff::Mod(x)) => {
                assert!(*x != 0, "inverse of zero");
                Coeff::Mod(powmod(*x, p - 2, *p))
            }
            _ => panic!("coefficient does not belong to the field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    pub fn format(&self, a: &Coeff) -> String {
        match a {
            Coeff::Rat(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Mod(m) => format!("{m}"),
        }
    }

    /// True when the coefficient prints with a leading minus sign.
    pub fn is_display_negative(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_negative(),
            Coeff::Mod(_) => false,
        }
    }

    /// Absolute value for display purposes; identity over prime fields.
    pub fn display_abs(&self, a: &Coeff) -> Coeff {
        match a {
            Coeff::Rat(r) => Coeff::Rat(r.abs()),
            Coeff::Mod(m) => Coeff::Mod(*m),
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for u64 moduli.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
