//! Exact base fields: the rationals and prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which exact field the entries of a matrix live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Validated prime field constructor.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Number of elements, or `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p as u64),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let p = *p as i64;
                Scalar::Residue(Residue {
                    value: v.rem_euclid(p) as u32,
                    modulus: p as u32,
                })
            }
        }
    }

    pub fn from_rational(&self, q: BigRational) -> Result<Scalar> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q)),
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(*p);
                let num = ((q.numer() % &m) + &m) % &m;
                let den = ((q.denom() % &m) + &m) % &m;
                let num = self.from_i64(num.to_i64().unwrap_or(0));
                let den = self.from_i64(den.to_i64().unwrap_or(0));
                let inv = den.inv().ok_or_else(|| Error::InvalidLiteral(q.to_string()))?;
                Ok(&num * &inv)
            }
        }
    }

    /// Elements of a finite field in the order `0, 1, ..., p-1`.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            FieldSpec::Rationals => Err(Error::InfiniteField),
            FieldSpec::PrimeField(p) => Ok((0..*p as i64).map(|v| self.from_i64(v)).collect()),
        }
    }

    /// Parses a literal: `"a"` or `"a/b"` over the rationals, a non-negative
    /// decimal over a prime field.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::InvalidLiteral(text.to_string());
        let t = text.trim();
        match self {
            FieldSpec::Rationals => {
                let q = match t.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                        if b.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
                };
                Ok(Scalar::Rational(q))
            }
            FieldSpec::PrimeField(p) => {
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let v: BigInt = t.parse().map_err(|_| bad())?;
                let r = (v % BigInt::from(*p)).to_i64().ok_or_else(bad)?;
                Ok(self.from_i64(r))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// A residue class modulo a prime, stored as its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Residue {
    pub fn value(&self) -> u32 {
        self.value
    }

    fn inv(&self) -> Option<Residue> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let p = self.modulus as u64;
        let mut base = self.value as u64;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Some(Residue {
            value: acc as u32,
            modulus: self.modulus,
        })
    }
}

/// An element of a [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(Residue),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => r.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
            Scalar::Residue(r) => r.inv().map(Scalar::Residue),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue(r) => FieldSpec::PrimeField(r.modulus),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue(_) => None,
        }
    }

    /// Sort key used for deterministic orderings: residues by value,
    /// rationals by (is-negative, |num|, den).
    pub(crate) fn order_key(&self) -> (bool, BigInt, BigInt) {
        match self {
            Scalar::Rational(q) => (q.is_negative(), q.numer().abs(), q.denom().clone()),
            Scalar::Residue(r) => (false, BigInt::from(r.value), BigInt::one()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue(r) => write!(f, "{}", r.value),
        }
    }
}

fn same_modulus(a: &Residue, b: &Residue) -> u64 {
    assert_eq!(a.modulus, b.modulus, "mixed prime fields");
    a.modulus as u64
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue(a), Scalar::Residue(b)) => {
                let p = same_modulus(a, b);
                Scalar::Residue(Residue {
                    value: ((a.value as u64 + b.value as u64) % p) as u32,
                    modulus: a.modulus,
                })
            }
            _ => panic!("mixed field arithmetic"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue(a), Scalar::Residue(b)) => {
                let p = same_modulus(a, b);
                Scalar::Residue(Residue {
                    value: ((a.value as u64 + p - b.value as u64) % p) as u32,
                    modulus: a.modulus,
                })
            }
            _ => panic!("mixed field arithmetic"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue(a), Scalar::Residue(b)) => {
                let p = same_modulus(a, b);
                Scalar::Residue(Residue {
                    value: ((a.value as u64 * b.value as u64) % p) as u32,
                    modulus: a.modulus,
                })
            }
            _ => panic!("mixed field arithmetic"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue(a) => Scalar::Residue(Residue {
                value: (a.modulus - a.value) % a.modulus,
                modulus: a.modulus,
            }),
        }
    }
}
