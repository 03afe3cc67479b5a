//! Weierstrass structure: the complete strict-equivalence invariant of a
//! regular pencil.
//!
//! The structure of an `n x n` regular pencil is the chain of `n`
//! homogeneous invariant factors `Γ_1 | ... | Γ_n` with total degrees
//! summing to `n`. The finite parts are the invariant factors of the pencil
//! as a polynomial matrix; the infinity multiplicities are read off the
//! reversed pencil `G1 + s G0`, whose factor `s` plays the role of `t`.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, SpecPoint};
use crate::homog::HomogPoly;
use crate::mat::{Mat, ScalarMat};
use crate::pencil::Pencil;
use crate::poly::Poly;
use crate::smith::invariant_factors;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeierstrassStructure {
    hfactors: Vec<HomogPoly>,
}

impl WeierstrassStructure {
    /// Validates chain divisibility, nonzero factors, and that total degrees
    /// sum to the chain length.
    pub fn new(hfactors: Vec<HomogPoly>) -> Result<WeierstrassStructure> {
        if hfactors.is_empty() {
            return Err(Error::InvalidStructure("empty factor chain".into()));
        }
        let n = hfactors.len();
        let mut total = 0usize;
        for h in &hfactors {
            total += h
                .total_degree()
                .ok_or_else(|| Error::InvalidStructure("zero factor in a regular chain".into()))?;
        }
        if total != n {
            return Err(Error::InvalidStructure(format!(
                "total degree {total} of {n} factors must equal {n}"
            )));
        }
        for w in hfactors.windows(2) {
            if !w[0].divides(&w[1]) {
                return Err(Error::InvalidStructure("divisibility chain broken".into()));
            }
        }
        Ok(WeierstrassStructure { hfactors })
    }

    /// Builds a chain from `(inf_mult, finite coefficients)` pairs; test and
    /// construction convenience.
    pub fn from_parts(field: FieldSpec, parts: &[(usize, &[i64])]) -> Result<WeierstrassStructure> {
        let hf = parts
            .iter()
            .map(|(m, coeffs)| HomogPoly::from_parts(*m, Poly::from_i64(field, coeffs)).1)
            .collect();
        WeierstrassStructure::new(hf)
    }

    pub fn n(&self) -> usize {
        self.hfactors.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.hfactors[0].field()
    }

    pub fn hfactors(&self) -> &[HomogPoly] {
        &self.hfactors
    }

    /// 1-based access with the sentinel conventions `Γ_i = 1` for `i < 1`
    /// and `Γ_i = 0` for `i > n`.
    pub fn at(&self, i: isize) -> HomogPoly {
        if i < 1 {
            HomogPoly::one(self.field())
        } else if i as usize > self.n() {
            HomogPoly::zero(self.field())
        } else {
            self.hfactors[i as usize - 1].clone()
        }
    }

    pub fn finite_parts(&self) -> Vec<Poly> {
        self.hfactors
            .iter()
            .map(crate::homog::dehomogenize)
            .collect()
    }

    pub fn inf_mults(&self) -> Vec<usize> {
        self.hfactors.iter().map(|h| h.parts().unwrap().0).collect()
    }

    /// Partial multiplicities `m_1(λ), ..., m_n(λ)` at a projective point.
    pub fn mult_seq(&self, at: &SpecPoint) -> Vec<usize> {
        self.hfactors
            .iter()
            .map(|h| h.mult_at(at).expect("valid chains have no zero factor"))
            .collect()
    }

    /// Algebraic multiplicity `μ_a(λ) = Σ_i m_i(λ)`.
    pub fn mu_a(&self, at: &SpecPoint) -> usize {
        self.mult_seq(at).iter().sum()
    }

    /// Whether the point is an eigenvalue (the top factor carries every
    /// eigenvalue).
    pub fn is_eigenvalue(&self, at: &SpecPoint) -> bool {
        self.hfactors[self.n() - 1].mult_at(at).unwrap() > 0
    }

    /// Eigenvalues lying in `F ∪ {∞}` (the base field, not its closure),
    /// infinity first then ascending.
    pub fn spectrum_in_field(&self) -> Result<Vec<SpecPoint>> {
        let mut out = Vec::new();
        if self.mu_a(&SpecPoint::Infinity) > 0 {
            out.push(SpecPoint::Infinity);
        }
        let mut product = Poly::one(self.field());
        for f in self.finite_parts() {
            product = &product * &f;
        }
        for root in product.roots_in_field()? {
            out.push(SpecPoint::Finite(root));
        }
        Ok(out)
    }

    /// The product `Γ_1 ... Γ_n`, i.e. the homogeneous determinant up to a
    /// nonzero scalar.
    pub fn product(&self) -> HomogPoly {
        let mut acc = HomogPoly::one(self.field());
        for h in &self.hfactors {
            acc = acc.mul(h);
        }
        acc
    }

    /// Monic-normalized Möbius image of the whole chain.
    pub fn mobius(&self, map: &crate::mobius::MobiusMap) -> WeierstrassStructure {
        let hf = self.hfactors.iter().map(|h| h.mobius(map).1).collect();
        WeierstrassStructure::new(hf).expect("Mobius images preserve chains and degrees")
    }

    /// Splits off the primary part at a point: returns the multiplicities
    /// `m_i(λ) > 0` (ascending) and the reduced chain of length
    /// `n - μ_a(λ)` with the point's primary components removed.
    pub fn split_at(&self, at: &SpecPoint) -> Result<(Vec<usize>, Option<WeierstrassStructure>)> {
        let mults = self.mult_seq(at);
        let mu: usize = mults.iter().sum();
        let n_rest = self.n() - mu;
        let mut stripped = Vec::with_capacity(self.n());
        for (h, m) in self.hfactors.iter().zip(&mults) {
            let (inf, fin) = h.parts().unwrap();
            let reduced = match at {
                SpecPoint::Infinity => HomogPoly::Val {
                    inf_mult: inf - m,
                    finite: fin.clone(),
                },
                SpecPoint::Finite(c) => {
                    let lin = Poly::linear(c).pow(*m);
                    let q = fin.exact_div(&lin).expect("multiplicity divides");
                    HomogPoly::Val {
                        inf_mult: inf,
                        finite: q,
                    }
                }
            };
            stripped.push(reduced);
        }
        // the first n - n_rest reduced factors are forced trivial by degree
        // counting; assert and slice
        for h in stripped.iter().take(self.n() - n_rest) {
            if !h.is_one() {
                return Err(Error::InternalCheck(
                    "primary split left a nontrivial prefix".into(),
                ));
            }
        }
        let rest = if n_rest == 0 {
            None
        } else {
            Some(WeierstrassStructure::new(
                stripped[self.n() - n_rest..].to_vec(),
            )?)
        };
        let nonzero: Vec<usize> = mults.into_iter().filter(|&m| m > 0).collect();
        Ok((nonzero, rest))
    }

    /// Re-inserts a primary part at a point (inverse of `split_at` up to
    /// chain merging): used to rebuild a target chain after deflation.
    pub fn merge_primary(&self, at: &SpecPoint, mults: &[usize]) -> Result<WeierstrassStructure> {
        let field = self.field();
        let extra: usize = mults.iter().sum();
        let n_total = self.n() + extra;
        // per-point exponent view: align both multiplicity tails at the top
        let mut merged = Vec::with_capacity(n_total);
        let pad = n_total - self.n();
        for i in 0..n_total {
            let base = if i < pad {
                HomogPoly::one(field)
            } else {
                self.hfactors[i - pad].clone()
            };
            merged.push(base);
        }
        let mpad = n_total - mults.len();
        for (k, m) in mults.iter().enumerate() {
            let i = mpad + k;
            let (inf, fin) = merged[i].parts().unwrap();
            merged[i] = match at {
                SpecPoint::Infinity => HomogPoly::Val {
                    inf_mult: inf + m,
                    finite: fin.clone(),
                },
                SpecPoint::Finite(c) => HomogPoly::Val {
                    inf_mult: inf,
                    finite: &Poly::linear(c).pow(*m) * fin,
                },
            };
        }
        WeierstrassStructure::new(merged)
    }
}

impl std::fmt::Display for WeierstrassStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, h) in self.hfactors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, ")")
    }
}

/// Companion matrix of a monic polynomial: subdiagonal ones, last column
/// the negated coefficients, so that `sI - C(f)` has invariant factors
/// `(1, ..., 1, f)`.
pub fn companion(f: &Poly) -> ScalarMat {
    assert!(f.is_monic(), "companion matrix of a non-monic polynomial");
    let d = f.degree().expect("nonzero");
    assert!(d >= 1);
    let field = f.field();
    Mat::from_fn(d, d, field, |i, j| {
        if j + 1 == d {
            -&f.coeff(i)
        } else if i == j + 1 {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// Nilpotent single-block shift with ones on the superdiagonal.
pub fn nilpotent_shift(m: usize, field: FieldSpec) -> ScalarMat {
    Mat::from_fn(m, m, field, |i, j| {
        if j == i + 1 {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// The Weierstrass structure of a regular pencil.
///
/// ```
/// use pencils::{FieldSpec, Mat, Pencil, SpecPoint};
/// use pencils::weier::weierstrass_structure;
///
/// // diag(1, s-1): the constant entry contributes an infinite
/// // elementary divisor
/// let f = FieldSpec::Rationals;
/// let mut g0 = Mat::zeros(2, 2, f);
/// let mut g1 = Mat::zeros(2, 2, f);
/// g0.set(0, 0, f.one());
/// g0.set(1, 1, f.from_i64(-1));
/// g1.set(1, 1, f.one());
/// let s = weierstrass_structure(&Pencil::new(g0, g1)?)?;
/// assert_eq!(s.inf_mults(), vec![0, 1]);
/// assert_eq!(s.mu_a(&SpecPoint::Infinity), 1);
/// # Ok::<(), pencils::Error>(())
/// ```
pub fn weierstrass_structure(a: &Pencil) -> Result<WeierstrassStructure> {
    if !a.is_square() {
        return Err(Error::NotRegular("pencil is not square".into()));
    }
    let n = a.rows();
    if a.det_poly()?.is_zero() {
        return Err(Error::NotRegular("determinant vanishes identically".into()));
    }
    let finite = invariant_factors(&a.to_poly_matrix());
    if finite.len() != n {
        return Err(Error::InternalCheck(
            "regular pencil with deficient Smith rank".into(),
        ));
    }
    // infinity multiplicities: order of the factor s in the invariant
    // factors of the reversed pencil
    let rev = invariant_factors(&a.reverse().to_poly_matrix());
    if rev.len() != n {
        return Err(Error::InternalCheck(
            "reversed pencil with deficient Smith rank".into(),
        ));
    }
    let hf: Vec<HomogPoly> = finite
        .into_iter()
        .zip(rev)
        .map(|(f, r)| HomogPoly::Val {
            inf_mult: r.order_at_zero(),
            finite: f,
        })
        .collect();
    WeierstrassStructure::new(hf)
}

/// Block-diagonal canonical realization of a structure: for each factor, a
/// companion block `sI - C(γ_i)` for the finite part (ascending `i`), then
/// a block `I_m + s N_m` per infinity multiplicity (ascending `i`).
/// The output is re-analyzed before returning; a mismatch is an internal
/// error.
pub fn canonical_pencil(target: &WeierstrassStructure) -> Result<Pencil> {
    let field = target.field();
    let mut blocks = Vec::new();
    for h in target.hfactors() {
        let (_, fin) = h.parts().unwrap();
        if fin.degree().unwrap() >= 1 {
            let c = companion(fin);
            let d = c.rows();
            blocks.push(Pencil::new(c.neg(), Mat::identity(d, field))?);
        }
    }
    for h in target.hfactors() {
        let (m, _) = h.parts().unwrap();
        if m > 0 {
            blocks.push(Pencil::new(
                Mat::identity(m, field),
                nilpotent_shift(m, field),
            )?);
        }
    }
    let out = if blocks.is_empty() {
        return Err(Error::InvalidStructure("empty realization".into()));
    } else {
        Pencil::block_diag(&blocks, field)
    };
    let achieved = weierstrass_structure(&out)?;
    if &achieved != target {
        return Err(Error::InternalCheck(format!(
            "canonical realization produced {achieved} instead of {target}"
        )));
    }
    Ok(out)
}
