//! Exact scalar arithmetic over Q and over prime fields GF(p).
//!
//! Every value is exact: rationals are arbitrary-precision fractions in
//! lowest terms, GF(p) elements are canonical residues in `[0, p)`.
//! There is no floating point anywhere in this crate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The active coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    /// GF(p); the modulus is checked to be prime at construction.
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= p) {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// GF(p) with a primality check.
    pub fn prime_field(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Mod { p: *p, val: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::PrimeField(p) => Scalar::Mod { p: *p, val: 1 % *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from(BigInt::from(v))),
            FieldSpec::PrimeField(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Mod { p: *p, val: m }
            }
        }
    }

    /// Number of elements, `None` for Q.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Deterministic element stream: `0, 1, 2, ...`.
    ///
    /// For GF(p) this enumerates the whole field and stops; for Q it is the
    /// unbounded stream of nonnegative integers. Callers that search the
    /// stream rely on this fixed order for reproducible outputs.
    pub fn element_stream(&self) -> Box<dyn Iterator<Item = Scalar>> {
        match *self {
            FieldSpec::Rationals => {
                Box::new((0i64..).map(|v| Scalar::Rat(BigRational::from(BigInt::from(v)))))
            }
            FieldSpec::PrimeField(p) => Box::new((0..p).map(move |v| Scalar::Mod { p, val: v })),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::PrimeField(p) => write!(f, "gf({p})"),
        }
    }
}

/// An exact field element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u64, val: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Mod { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { val, .. } => *val == 1,
        }
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Mod { p, val } => {
                if *val == 0 {
                    None
                } else {
                    // Fermat: val^(p-2) mod p.
                    let mut base = *val as u128;
                    let mut exp = *p - 2;
                    let m = *p as u128;
                    let mut acc: u128 = 1;
                    while exp > 0 {
                        if exp & 1 == 1 {
                            acc = acc * base % m;
                        }
                        base = base * base % m;
                        exp >>= 1;
                    }
                    Some(Scalar::Mod {
                        p: *p,
                        val: acc as u64,
                    })
                }
            }
        }
    }

    fn check_same_field(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Rat(_), Scalar::Rat(_)) => {}
            (Scalar::Mod { p: a, .. }, Scalar::Mod { p: b, .. }) if a == b => {}
            _ => panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                p: *p,
                val: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                p: *p,
                val: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, val } => Scalar::Mod {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }
}

// Canonical text form used by the JSON formats: GF(p) residues print as
// bare integers, rationals as `num` or `num/den`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { val, .. } => write!(f, "{val}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Text form accepted by the JSON formats: `"3"`, `"-2/5"`, or (over GF(p))
/// a canonical residue.
pub fn scalar_from_str(field: FieldSpec, s: &str) -> Result<Scalar> {
    let s = s.trim();
    match field {
        FieldSpec::Rationals => {
            let (num, den) = match s.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (s, "1"),
            };
            let n: BigInt = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational numerator `{num}`")))?;
            let d: BigInt = den
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational denominator `{den}`")))?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Scalar::Rat(BigRational::new(n, d)))
        }
        FieldSpec::PrimeField(p) => {
            let v: i64 = s
                .parse()
                .map_err(|_| Error::Parse(format!("bad GF({p}) residue `{s}`")))?;
            Ok(FieldSpec::PrimeField(p).from_i64(v))
        }
    }
}

/// A point of the projective line `F ∪ {∞}` used for spectra and
/// partial multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SpecPoint {
    Finite(Scalar),
    Infinity,
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecPoint::Finite(c) => write!(f, "{c}"),
            SpecPoint::Infinity => write!(f, "inf"),
        }
    }
}
