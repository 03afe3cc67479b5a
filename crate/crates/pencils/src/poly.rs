//! Dense univariate polynomials over the active field.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so
//! structural equality is mathematical equality. The zero polynomial has an
//! empty coefficient vector and degree `None`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldSpec) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// The monomial `s`.
    pub fn x(field: FieldSpec) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// `s - root`.
    pub fn linear(root: &Scalar) -> Poly {
        Poly::new(root.field(), vec![-root, root.field().one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Splits into `(leading coefficient, monic part)`. Zero stays zero with
    /// multiplier one.
    pub fn monic(&self) -> (Scalar, Poly) {
        match self.leading() {
            None => (self.field.one(), self.clone()),
            Some(l) => {
                let l = l.clone();
                let inv = l.inv().expect("nonzero leading coefficient");
                (l, self.scale(&inv))
            }
        }
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        let lead_inv = div.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = &rem[rem.len() - 1] * &lead_inv;
            if !factor.is_zero() {
                for (i, dc) in div.coeffs.iter().enumerate() {
                    let t = &factor * dc;
                    rem[k + i] = &rem[k + i] - &t;
                }
                quot[k] = factor;
            }
            rem.pop();
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn exact_div(&self, div: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(div);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// Monic greatest common divisor. Errors when both inputs are zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.divrem(&y).1;
            x = y;
            y = r;
        }
        Ok(x.monic().1)
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Result<Poly> {
        let g = Poly::gcd(a, b)?;
        let q = a.exact_div(&g).expect("gcd divides");
        Ok((&q * b).monic().1)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicity of `s - root` as a factor.
    pub fn root_multiplicity(&self, root: &Scalar) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::linear(root);
        let mut m = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(&lin) {
            m += 1;
            cur = q;
        }
        m
    }

    /// Multiplicity of the factor `s`.
    pub fn order_at_zero(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Roots lying in the coefficient field itself (not its closure),
    /// sorted, without multiplicities. Over GF(p) this scans the field;
    /// over Q it uses the rational root bound on the primitive integer
    /// form, which needs the outer coefficients to fit in `u128`.
    pub fn roots_in_field(&self) -> Result<Vec<Scalar>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "roots of the zero polynomial".into(),
            ));
        }
        match self.field {
            FieldSpec::PrimeField(p) => {
                let mut out = Vec::new();
                for v in 0..p {
                    let c = self.field.from_i64(v as i64);
                    if self.eval(&c).is_zero() {
                        out.push(c);
                    }
                }
                Ok(out)
            }
            FieldSpec::Rationals => self.rational_roots(),
        }
    }

    fn rational_roots(&self) -> Result<Vec<Scalar>> {
        use num_bigint::BigInt;
        use num_traits::Signed;

        let mut out = Vec::new();
        let shifted = self.order_at_zero();
        if shifted > 0 {
            out.push(self.field.zero());
        }
        let reduced = Poly::new(self.field, self.coeffs[shifted..].to_vec());
        if reduced.is_constant() {
            out.sort();
            return Ok(out);
        }
        // clear denominators, then divide by the content
        let mut den_lcm = BigInt::from(1);
        for c in reduced.coeffs() {
            let Scalar::Rat(r) = c else { unreachable!() };
            den_lcm = num_integer::lcm(den_lcm, r.denom().clone());
        }
        let ints: Vec<BigInt> = reduced
            .coeffs()
            .iter()
            .map(|c| {
                let Scalar::Rat(r) = c else { unreachable!() };
                r.numer() * (&den_lcm / r.denom())
            })
            .collect();
        let mut content = BigInt::from(0);
        for v in &ints {
            content = num_integer::gcd(content, v.clone());
        }
        let ints: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();
        let a0: u128 = ints.first().unwrap().abs().try_into().map_err(|_| {
            Error::BudgetExceeded("constant coefficient too large for root isolation".into())
        })?;
        let an: u128 = ints.last().unwrap().abs().try_into().map_err(|_| {
            Error::BudgetExceeded("leading coefficient too large for root isolation".into())
        })?;
        for p in divisors(a0) {
            for q in divisors(an) {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = Scalar::Rat(num_rational::BigRational::new(
                        BigInt::from(sign) * BigInt::from(p),
                        BigInt::from(q),
                    ));
                    if reduced.eval(&cand).is_zero() && !out.contains(&cand) {
                        out.push(cand);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

fn divisors(n: u128) -> Vec<u128> {
    if n == 0 {
        return vec![1];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // print rationals with a leading minus as subtraction
            let (c_abs, negative) = match c {
                Scalar::Rat(r)
                    if r < &num_rational::BigRational::from(num_bigint::BigInt::from(0)) =>
                {
                    (-c, true)
                }
                _ => (c.clone(), false),
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c_abs}")?,
                _ => {
                    if !c_abs.is_one() {
                        write!(f, "{c_abs}*")?;
                    }
                    if i == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field(p).unwrap()
    }

    /// Exhaustive monic divisors over a finite field, used as an
    /// independent oracle for gcd tests.
    fn monic_divisors(f: &Poly) -> Vec<Poly> {
        let field = f.field();
        let p = field.size().expect("finite field") as i64;
        let deg = f.degree().unwrap();
        let mut out = Vec::new();
        for d in 0..=deg {
            // all monic candidates of degree d
            let mut idx = vec![0i64; d];
            loop {
                let mut coeffs: Vec<Scalar> = idx.iter().map(|&c| field.from_i64(c)).collect();
                coeffs.push(field.one());
                let cand = Poly::new(field, coeffs);
                if cand.divides(f) {
                    out.push(cand);
                }
                // odometer
                let mut k = 0;
                loop {
                    if k == d {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < p {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == d {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn gcd_common_factor() {
        let a = Poly::from_i64(q(), &[-1, 0, 1]); // s^2 - 1
        let b = Poly::from_i64(q(), &[-1, 1]); // s - 1
        assert_eq!(Poly::gcd(&a, &b).unwrap(), b);
    }

    #[test]
    fn gcd_unit_argument() {
        let a = Poly::x(q());
        let b = Poly::one(q());
        assert_eq!(Poly::gcd(&a, &b).unwrap(), Poly::one(q()));
    }

    #[test]
    fn gcd_gf2_matches_divisor_enumeration() {
        let f2 = gf(2);
        let a = Poly::from_i64(f2, &[0, 1, 1]); // s^2 + s
        let b = Poly::from_i64(f2, &[1, 0, 1]); // s^2 + 1
        let g = Poly::gcd(&a, &b).unwrap();
        assert_eq!(g, Poly::from_i64(f2, &[1, 1])); // s + 1

        // oracle: maximal common element of the divisor sets
        let da = monic_divisors(&a);
        let db = monic_divisors(&b);
        let common: Vec<&Poly> = da.iter().filter(|d| db.contains(d)).collect();
        let best = common.iter().max_by_key(|d| d.degree().unwrap()).unwrap();
        assert_eq!(&g, *best);
        for d in &common {
            assert!(d.divides(&g));
        }
    }

    #[test]
    fn gcd_of_zeros_is_error() {
        let z = Poly::zero(q());
        assert!(Poly::gcd(&z, &z).is_err());
    }

    #[test]
    fn divrem_round_trip() {
        let a = Poly::from_i64(q(), &[3, -2, 0, 5, 1]);
        let b = Poly::from_i64(q(), &[1, 2, 3]);
        let (quot, rem) = a.divrem(&b);
        assert_eq!(&(&quot * &b) + &rem, a);
        assert!(rem.degree() < b.degree());
    }

    #[test]
    fn gcd_commutative_and_associative() {
        let f3 = gf(3);
        let polys = [
            Poly::from_i64(f3, &[1, 1]),
            Poly::from_i64(f3, &[0, 2, 1]),
            Poly::from_i64(f3, &[2, 0, 0, 1]),
            Poly::from_i64(f3, &[1]),
        ];
        for a in &polys {
            for b in &polys {
                assert_eq!(Poly::gcd(a, b).unwrap(), Poly::gcd(b, a).unwrap());
                for c in &polys {
                    let l = Poly::gcd(&Poly::gcd(a, b).unwrap(), c).unwrap();
                    let r = Poly::gcd(a, &Poly::gcd(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn roots_in_field_q_and_gf() {
        // (s - 1/2)(s + 3) s, scaled by 4
        let f = q();
        let p = &(&Poly::linear(&Scalar::rational(1, 2)) * &Poly::linear(&Scalar::rational(-3, 1)))
            * &Poly::x(f);
        let p = p.scale(&Scalar::rational(4, 1));
        let roots = p.roots_in_field().unwrap();
        assert_eq!(
            roots,
            vec![Scalar::rational(-3, 1), f.zero(), Scalar::rational(1, 2)]
        );

        let f3 = gf(3);
        let p = Poly::from_i64(f3, &[0, 2, 1]); // s(s+2) = s(s-1)
        assert_eq!(p.roots_in_field().unwrap(), vec![f3.zero(), f3.one()]);

        // irreducible over Q: no rational roots
        let p = Poly::from_i64(q(), &[1, 0, 1]);
        assert!(p.roots_in_field().unwrap().is_empty());
    }

    #[test]
    fn root_multiplicity_counts() {
        let one = q().one();
        let f = &Poly::linear(&one).pow(3) * &Poly::x(q());
        assert_eq!(f.root_multiplicity(&one), 3);
        assert_eq!(f.root_multiplicity(&q().zero()), 1);
        assert_eq!(f.order_at_zero(), 1);
    }
}
