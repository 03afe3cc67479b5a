//! Homogeneous bivariate polynomials in factored canonical form.
//!
//! A nonzero homogeneous polynomial monic in `s` factors uniquely as
//! `t^m * t^(deg f) * f(s/t)` with `f` monic; we store the pair `(m, f)`
//! instead of a coefficient grid. Divisibility, infinity multiplicities and
//! the substitution action of a `MobiusMap` all become exact structural
//! operations on the pair. The zero polynomial is a distinguished sentinel
//! (it stands in for invariant factors past the normal rank).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar, SpecPoint};
use crate::mobius::MobiusMap;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomogPoly {
    Zero(FieldSpec),
    Val {
        inf_mult: usize,
        /// Monic and nonzero.
        finite: Poly,
    },
}

impl HomogPoly {
    pub fn zero(field: FieldSpec) -> HomogPoly {
        HomogPoly::Zero(field)
    }

    pub fn one(field: FieldSpec) -> HomogPoly {
        HomogPoly::Val {
            inf_mult: 0,
            finite: Poly::one(field),
        }
    }

    /// Builds `(m, f)` from any nonzero `f`, returning the extracted leading
    /// coefficient alongside the monic-normalized value.
    pub fn from_parts(inf_mult: usize, finite: Poly) -> (Scalar, HomogPoly) {
        if finite.is_zero() {
            return (finite.field().one(), HomogPoly::Zero(finite.field()));
        }
        let (k, monic) = finite.monic();
        (
            k,
            HomogPoly::Val {
                inf_mult,
                finite: monic,
            },
        )
    }

    /// `t^m` as a homogeneous polynomial.
    pub fn t_power(field: FieldSpec, m: usize) -> HomogPoly {
        HomogPoly::Val {
            inf_mult: m,
            finite: Poly::one(field),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            HomogPoly::Zero(f) => *f,
            HomogPoly::Val { finite, .. } => finite.field(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HomogPoly::Zero(_))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, HomogPoly::Val { inf_mult: 0, finite } if finite.is_one())
    }

    pub fn parts(&self) -> Option<(usize, &Poly)> {
        match self {
            HomogPoly::Zero(_) => None,
            HomogPoly::Val { inf_mult, finite } => Some((*inf_mult, finite)),
        }
    }

    /// Total homogeneous degree `m + deg f`; `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.parts().map(|(m, f)| m + f.degree().expect("nonzero"))
    }

    /// Divisibility with the sentinel conventions: everything divides zero,
    /// zero divides only zero, one divides everything.
    pub fn divides(&self, other: &HomogPoly) -> bool {
        match (self.parts(), other.parts()) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((ma, fa)), Some((mb, fb))) => ma <= mb && fa.divides(fb),
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        match (self.parts(), other.parts()) {
            (Some((ma, fa)), Some((mb, fb))) => HomogPoly::Val {
                inf_mult: ma + mb,
                finite: fa * fb,
            },
            _ => HomogPoly::Zero(self.field()),
        }
    }

    /// Exact quotient `other / self`; `None` when `self` does not divide.
    pub fn exact_div_into(&self, other: &HomogPoly) -> Option<HomogPoly> {
        match (self.parts(), other.parts()) {
            (Some(_), None) => Some(HomogPoly::Zero(self.field())),
            (None, _) => None,
            (Some((ma, fa)), Some((mb, fb))) => {
                if ma > mb {
                    return None;
                }
                let q = fb.exact_div(fa)?;
                Some(HomogPoly::Val {
                    inf_mult: mb - ma,
                    finite: q,
                })
            }
        }
    }

    /// Value at a projective point: `Γ(λ, 1)` for finite `λ`, `Γ(1, 0)` at
    /// infinity.
    pub fn eval_point(&self, at: &SpecPoint) -> Scalar {
        let field = self.field();
        match self.parts() {
            None => field.zero(),
            Some((m, f)) => match at {
                SpecPoint::Finite(c) => f.eval(c),
                SpecPoint::Infinity => {
                    if m > 0 {
                        field.zero()
                    } else {
                        field.one()
                    }
                }
            },
        }
    }

    /// Multiplicity of the point as a projective root; `None` means the zero
    /// polynomial (conventionally infinite multiplicity).
    pub fn mult_at(&self, at: &SpecPoint) -> Option<usize> {
        self.parts().map(|(m, f)| match at {
            SpecPoint::Infinity => m,
            SpecPoint::Finite(c) => f.root_multiplicity(c),
        })
    }

    /// Substitution `Γ(sx + ty, sz + tw)`, returned as `(k, monic image)`
    /// with the stripped scalar `k`. Total degree is preserved.
    pub fn mobius(&self, map: &MobiusMap) -> (Scalar, HomogPoly) {
        let field = self.field();
        let (m, f) = match self.parts() {
            None => return (field.one(), HomogPoly::Zero(field)),
            Some(p) => p,
        };
        let total = m + f.degree().expect("nonzero");
        // Dehomogenize at t = 1: the image of s^j t^(total-j) is
        // (sx + y)^j (sz + w)^(total-j); the original coefficient of that
        // monomial is coeff_j(f) (shifted by nothing since t^m only pads).
        let num = Poly::new(field, vec![map.y.clone(), map.x.clone()]);
        let den = Poly::new(field, vec![map.w.clone(), map.z.clone()]);
        let mut num_pows = Vec::with_capacity(total + 1);
        let mut den_pows = Vec::with_capacity(total + 1);
        let mut acc = Poly::one(field);
        for _ in 0..=total {
            num_pows.push(acc.clone());
            acc = &acc * &num;
        }
        acc = Poly::one(field);
        for _ in 0..=total {
            den_pows.push(acc.clone());
            acc = &acc * &den;
        }
        let mut g = Poly::zero(field);
        for (j, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &num_pows[j] * &den_pows[total - j];
            g = &g + &term.scale(c);
        }
        debug_assert!(
            !g.is_zero(),
            "invertible substitution of a nonzero polynomial"
        );
        let deg_g = g.degree().expect("nonzero image");
        let (k, monic) = g.monic();
        (
            k,
            HomogPoly::Val {
                inf_mult: total - deg_g,
                finite: monic,
            },
        )
    }
}

/// Homogenizes `q` to total degree `total`: the infinity multiplicity is
/// `total - deg q` and the finite part is the monic normalization of `q`,
/// whose leading coefficient is returned alongside.
pub fn homogenize(q: &Poly, total: usize) -> Result<(Scalar, HomogPoly)> {
    if q.is_zero() {
        return Ok((q.field().one(), HomogPoly::Zero(q.field())));
    }
    let deg = q.degree().expect("nonzero");
    if deg > total {
        return Err(Error::DegreeTooLarge { deg, total });
    }
    let (k, monic) = q.monic();
    Ok((
        k,
        HomogPoly::Val {
            inf_mult: total - deg,
            finite: monic,
        },
    ))
}

/// `Γ(s, 1)`: the finite part (monic), or zero for the zero sentinel.
pub fn dehomogenize(h: &HomogPoly) -> Poly {
    match h.parts() {
        None => Poly::zero(h.field()),
        Some((_, f)) => f.clone(),
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts() {
            None => write!(f, "0"),
            Some((0, poly)) => write!(f, "{poly}"),
            Some((m, poly)) if poly.is_one() => write!(f, "t^{m}"),
            Some((m, poly)) => write!(f, "t^{m}*({poly})~"),
        }
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
