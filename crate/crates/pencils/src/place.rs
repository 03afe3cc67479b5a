//! Fixed-rank determinant placement.
//!
//! Decides and constructs a perturbation `P(s)` of rank exactly `r` such
//! that the homogeneous determinant of `A + P` equals `k Ψ(s, t)` for some
//! nonzero scalar `k`. Feasibility is the single divisibility
//! `φ_1 ... φ_{n-r} | Ψ`; for a polynomial target `q` the equivalent pair of
//! conditions is `α_1 ... α_{n-r} | q` together with the degree bound
//! `Σ_{i <= n-r} m_i(∞) <= n - deg q`.

use crate::error::{Error, Refusal, Result};
use crate::field::{Scalar, SpecPoint};
use crate::homog::{homogenize, HomogPoly};
use crate::pencil::{candidate_points, Pencil};
use crate::poly::Poly;
use crate::synth::{synthesize, SynthCertificate, SynthOptions, SynthRequest, SynthTarget};
use crate::weier::{weierstrass_structure, WeierstrassStructure};

#[derive(Clone, Debug)]
pub enum PlacementTarget {
    /// Homogeneous target of total degree `n`, monic in `s`.
    Homogeneous(HomogPoly),
    /// Monic polynomial of degree at most `n`, homogenized to degree `n`.
    Determinant(Poly),
}

#[derive(Clone, Debug)]
pub struct PlacementRequest {
    pub a: Pencil,
    pub rank: usize,
    pub target: PlacementTarget,
}

#[derive(Clone, Debug)]
pub struct PlacementCertificate {
    pub synth: SynthCertificate,
    /// The nonzero scalar with `det (A + P)(s, t) = k Ψ(s, t)`.
    pub k: Scalar,
    pub psi: HomogPoly,
}

fn product_prefix(phi: &WeierstrassStructure, count: usize) -> HomogPoly {
    let mut acc = HomogPoly::one(phi.field());
    for h in phi.hfactors().iter().take(count) {
        acc = acc.mul(h);
    }
    acc
}

/// The homogeneous feasibility test `φ_1 ... φ_{n-r} | Ψ`.
pub fn placeable(a: &Pencil, r: usize, psi: &HomogPoly) -> Result<bool> {
    let phi = weierstrass_structure(a)?;
    let n = phi.n();
    if psi.total_degree() != Some(n) {
        return Err(Error::InvalidArgument(format!(
            "target must be homogeneous of total degree {n}"
        )));
    }
    if r > n {
        return Err(Error::Refused(Refusal::RankTooLarge { rank: r, n }));
    }
    Ok(product_prefix(&phi, n - r).divides(psi))
}

/// The polynomial form of the feasibility test.
pub fn placeable_poly(a: &Pencil, r: usize, q: &Poly) -> Result<bool> {
    let phi = weierstrass_structure(a)?;
    let n = phi.n();
    if q.is_zero() || !q.is_monic() || q.degree().is_none_or(|d| d > n) {
        return Err(Error::InvalidArgument(
            "target must be monic of degree at most n".into(),
        ));
    }
    if r > n {
        return Err(Error::Refused(Refusal::RankTooLarge { rank: r, n }));
    }
    let count = n - r;
    let mut alpha_prod = Poly::one(a.field());
    for f in phi.finite_parts().iter().take(count) {
        alpha_prod = &alpha_prod * f;
    }
    let inf_sum: usize = phi.inf_mults().iter().take(count).sum();
    Ok(alpha_prod.divides(q) && inf_sum <= n - q.degree().unwrap())
}

/// Whether some point of `F ∪ {∞}` avoids both the pencil's spectrum and
/// the target's projective roots; reported alongside placement.
pub fn placement_witness(a: &Pencil, psi: &HomogPoly) -> Result<Option<SpecPoint>> {
    let phi = weierstrass_structure(a)?;
    let det = phi.product();
    Ok(candidate_points(a.field(), 2 * phi.n() + 1)
        .into_iter()
        .find(|c| !det.eval_point(c).is_zero() && !psi.eval_point(c).is_zero()))
}

/// Constructs a rank-`r` perturbation placing the homogeneous determinant.
///
/// The target chain is the proof recipe: `ψ_i = φ_{i-r}` for `i < n` and
/// `ψ_n = φ_{n-r} γ` with `γ = Ψ / (φ_1 ... φ_{n-r})`.
pub fn place(req: &PlacementRequest, opts: &SynthOptions) -> Result<PlacementCertificate> {
    let a = &req.a;
    let r = req.rank;
    let phi = weierstrass_structure(a)?;
    let n = phi.n();
    let _field = a.field();
    let psi_target = match &req.target {
        PlacementTarget::Homogeneous(h) => {
            if h.total_degree() != Some(n) {
                return Err(Error::InvalidArgument(format!(
                    "target must have total degree {n}"
                )));
            }
            h.clone()
        }
        PlacementTarget::Determinant(q) => {
            if q.is_zero() || !q.is_monic() {
                return Err(Error::InvalidArgument(
                    "target determinant must be monic".into(),
                ));
            }
            let inf_budget: usize = phi.inf_mults().iter().take(n.saturating_sub(r)).sum();
            let avail = n - q.degree().map_or(0, |d| d.min(n));
            if q.degree().is_none_or(|d| d > n) {
                return Err(Error::InvalidArgument("target degree exceeds n".into()));
            }
            if inf_budget > avail {
                return Err(Error::Refused(Refusal::PlacementDegree {
                    needed: inf_budget,
                    available: avail,
                }));
            }
            homogenize(q, n)?.1
        }
    };
    if r > n {
        return Err(Error::Refused(Refusal::RankTooLarge { rank: r, n }));
    }
    let prefix = product_prefix(&phi, n - r);
    let Some(gamma) = prefix.exact_div_into(&psi_target) else {
        return Err(Error::Refused(Refusal::PlacementDivisibility));
    };

    // shift-by-r chain absorbing gamma into the top factor
    let mut chain: Vec<HomogPoly> = Vec::with_capacity(n);
    for i in 1..n {
        chain.push(phi.at(i as isize - r as isize));
    }
    chain.push(phi.at(n as isize - r as isize).mul(&gamma));
    let target = WeierstrassStructure::new(chain)?;

    let synth_cert = synthesize(
        &SynthRequest {
            a: a.clone(),
            target: SynthTarget::Structure(target),
            rank: r,
        },
        opts,
    )?;

    // determinant check: the homogeneous determinant of A + P is k Ψ
    let sum = a.add(&synth_cert.p);
    let det = sum.det_poly()?;
    let achieved_struct = weierstrass_structure(&sum)?;
    let inf_total = achieved_struct.mu_a(&SpecPoint::Infinity);
    if det.degree() != Some(n - inf_total) {
        return Err(Error::InternalCheck(
            "determinant degree inconsistent".into(),
        ));
    }
    let (k, hdet) = homogenize(&det, n)?;
    if hdet != psi_target {
        return Err(Error::InternalCheck(format!(
            "placed determinant {hdet} differs from target {psi_target}"
        )));
    }
    if k.is_zero() {
        return Err(Error::InternalCheck("zero determinant scalar".into()));
    }
    Ok(PlacementCertificate {
        synth: synth_cert,
        k,
        psi: psi_target,
    })
}
