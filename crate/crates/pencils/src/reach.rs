//! Decision predicates for fixed-rank reachability.
//!
//! The reachability criterion is the interlacing condition between the two
//! chains: `φ_{i-r} | ψ_i | φ_{i+r}` for all `i` (with the usual sentinels
//! past the ends). `min_rank` is the smallest rank at which it holds, and
//! every rank from there up to `n` is achievable. The applicability report
//! records which constructive path is open for a pair of pencils.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, SpecPoint};
use crate::pencil::{candidate_points, Pencil};
use crate::poly::Poly;
use crate::weier::{weierstrass_structure, WeierstrassStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `φ_{i-r} | ψ_i` failed.
    Lower,
    /// `ψ_i | φ_{i+r}` failed.
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterlaceReport {
    pub r: usize,
    pub holds: bool,
    /// 1-based index and side of the first failed divisibility.
    pub first_violation: Option<(usize, Side)>,
}

/// Checks `φ_{i-r} | ψ_i | φ_{i+r}` for `1 <= i <= n`.
pub fn interlace(
    phi: &WeierstrassStructure,
    psi: &WeierstrassStructure,
    r: usize,
) -> Result<InterlaceReport> {
    if phi.n() != psi.n() {
        return Err(Error::DimensionMismatch(format!(
            "chains of lengths {} and {}",
            phi.n(),
            psi.n()
        )));
    }
    let n = phi.n() as isize;
    let ri = r as isize;
    for i in 1..=n {
        if !phi.at(i - ri).divides(&psi.at(i)) {
            return Ok(InterlaceReport {
                r,
                holds: false,
                first_violation: Some((i as usize, Side::Lower)),
            });
        }
        if !psi.at(i).divides(&phi.at(i + ri)) {
            return Ok(InterlaceReport {
                r,
                holds: false,
                first_violation: Some((i as usize, Side::Upper)),
            });
        }
    }
    Ok(InterlaceReport {
        r,
        holds: true,
        first_violation: None,
    })
}

/// Smallest rank at which the interlacing holds. A linear scan from zero;
/// `r = n` always passes, and the predicate is monotone in `r`.
pub fn min_rank(phi: &WeierstrassStructure, psi: &WeierstrassStructure) -> Result<usize> {
    for r in 0..=phi.n() {
        if interlace(phi, psi, r)?.holds {
            return Ok(r);
        }
    }
    unreachable!("interlacing holds at r = n")
}

/// The constant-perturbation rank bound `min over λ in F of
/// rank A(λ) + rank B(λ)`, truncated at `n`.
///
/// Both pencils must have identity leading coefficient. The stated bound
/// concerns constant-matrix perturbations over the algebraic closure; over
/// a non-closed field only the points of `F` are examined, so the value is
/// informational there.
pub fn const_rank_bound(a: &Pencil, b: &Pencil) -> Result<usize> {
    if !a.has_identity_leading() || !b.has_identity_leading() {
        return Err(Error::NotMonicLeading);
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch("pencil sizes differ".into()));
    }
    let n = a.rows();
    let mut candidates: Vec<SpecPoint> = Vec::new();
    for pencil in [a, b] {
        let det = pencil.det_poly()?;
        for root in det.roots_in_field()? {
            let pt = SpecPoint::Finite(root);
            if !candidates.contains(&pt) {
                candidates.push(pt);
            }
        }
    }
    let mut best = 2 * n;
    for c in &candidates {
        let v = a.eval(c).rank() + b.eval(c).rank();
        best = best.min(v);
    }
    Ok(best.min(n))
}

/// Which constructive hypotheses hold for the pair `(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApplicabilityReport {
    /// `F ∪ {∞} ⊆ Λ(A) ∪ Λ(B)` (can only happen over a finite field).
    pub joint_spectrum_covers_field: bool,
    /// First point of `(∞, 0, 1, 2, ...)` that is an eigenvalue of neither.
    pub witness_c: Option<SpecPoint>,
    /// First tested point at which the full partial-multiplicity sequences
    /// of `A` and `B` agree (infinity first, then ascending field roots of
    /// `det A * det B`).
    pub shared_multiplicity_lambda0: Option<SpecPoint>,
    /// `n = 1` over GF(2): rank-1 feasibility degenerates to `a != b`.
    pub scalar_exception: bool,
}

fn witness_candidates(field: FieldSpec, n: usize) -> Vec<SpecPoint> {
    // Over Q there are at most 2n eigenvalues in total, so scanning
    // (∞, 0, 1, ..., 2n) always finds a witness.
    candidate_points(field, 2 * n + 1)
}

/// Joint witness and shared-multiplicity scan for a pair of structures,
/// evaluated through the chains rather than the pencils.
pub fn applicability_of_structures(
    phi: &WeierstrassStructure,
    psi: &WeierstrassStructure,
) -> Result<ApplicabilityReport> {
    let field = phi.field();
    let n = phi.n();
    let prod_a = phi.product();
    let prod_b = psi.product();
    let witness_c = witness_candidates(field, n)
        .into_iter()
        .find(|c| !prod_a.eval_point(c).is_zero() && !prod_b.eval_point(c).is_zero());

    let mut tested = vec![SpecPoint::Infinity];
    let det_prod = &crate::homog::dehomogenize(&prod_a) * &crate::homog::dehomogenize(&prod_b);
    if det_prod.is_zero() {
        return Err(Error::InternalCheck(
            "regular chains with zero product".into(),
        ));
    }
    for root in det_prod.roots_in_field()? {
        let pt = SpecPoint::Finite(root);
        if !tested.contains(&pt) {
            tested.push(pt);
        }
    }
    let shared = tested
        .into_iter()
        .find(|pt| phi.mult_seq(pt) == psi.mult_seq(pt));

    Ok(ApplicabilityReport {
        joint_spectrum_covers_field: witness_c.is_none(),
        witness_c,
        shared_multiplicity_lambda0: shared,
        scalar_exception: n == 1 && field.size() == Some(2),
    })
}

/// Applicability for a pair of regular pencils.
pub fn applicability(a: &Pencil, b: &Pencil) -> Result<ApplicabilityReport> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch("pencil sizes differ".into()));
    }
    let phi = weierstrass_structure(a)?;
    let psi = weierstrass_structure(b)?;
    applicability_of_structures(&phi, &psi)
}

/// The multiplicity form of the reachability conditions at one point:
/// `m_{i-r}(λ, A) <= m_i(λ, B) <= m_{i+r}(λ, A)`, with `m_i = 0` below the
/// chain and `+∞` above it.
pub fn interlace_multiplicities_at(
    phi: &WeierstrassStructure,
    psi: &WeierstrassStructure,
    r: usize,
    at: &SpecPoint,
) -> bool {
    let n = phi.n() as isize;
    let ri = r as isize;
    let m_phi = |i: isize| -> Option<usize> {
        if i < 1 {
            Some(0)
        } else if i > n {
            None // +infinity
        } else {
            phi.at(i).mult_at(at)
        }
    };
    let m_psi = |i: isize| phi_like(psi, i, at);
    fn phi_like(s: &WeierstrassStructure, i: isize, at: &SpecPoint) -> Option<usize> {
        if i < 1 {
            Some(0)
        } else if i > s.n() as isize {
            None
        } else {
            s.at(i).mult_at(at)
        }
    }
    let le = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    };
    for i in 1..=n {
        if !le(m_phi(i - ri), m_psi(i)) || !le(m_psi(i), m_phi(i + ri)) {
            return false;
        }
    }
    true
}

/// Divisibility interlacing restricted to one point's primary parts.
pub fn interlace_primary_at(
    phi: &WeierstrassStructure,
    psi: &WeierstrassStructure,
    r: usize,
    at: &SpecPoint,
) -> bool {
    let n = phi.n() as isize;
    let ri = r as isize;
    let part = |s: &WeierstrassStructure, i: isize| -> Option<usize> {
        // primary component exponent, None = the zero sentinel
        if i < 1 {
            Some(0)
        } else if i > s.n() as isize {
            None
        } else {
            s.at(i).mult_at(at)
        }
    };
    let divides = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    };
    for i in 1..=n {
        if !divides(part(phi, i - ri), part(psi, i)) || !divides(part(psi, i), part(phi, i + ri)) {
            return false;
        }
    }
    true
}

/// Dehomogenized interlacing `β_{i-r}(s) | α_i(s) | β_{i+r}(s)` on the
/// finite parts only; the precondition of the constant-core construction.
pub fn interlace_finite(alpha: &[Poly], beta: &[Poly], r: usize) -> bool {
    let n = alpha.len() as isize;
    let ri = r as isize;
    let get = |v: &[Poly], i: isize| -> Option<Poly> {
        if i < 1 {
            Some(Poly::one(v[0].field()))
        } else if i > n {
            None // zero sentinel: everything divides it
        } else {
            Some(v[i as usize - 1].clone())
        }
    };
    let div = |a: Option<Poly>, b: Option<Poly>| match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x.divides(&y),
    };
    for i in 1..=n {
        if !div(get(beta, i - ri), get(alpha, i)) || !div(get(alpha, i), get(beta, i + ri)) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::mat::Mat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field(p).unwrap()
    }

    fn ws(field: FieldSpec, parts: &[(usize, &[i64])]) -> WeierstrassStructure {
        WeierstrassStructure::from_parts(field, parts).unwrap()
    }

    fn three_by_three_pair(field: FieldSpec) -> (WeierstrassStructure, WeierstrassStructure) {
        // φ = (s-t, s-t, s-t), ψ = (1, s-t, s(s-t))
        let phi = ws(field, &[(0, &[-1, 1]), (0, &[-1, 1]), (0, &[-1, 1])]);
        let psi = ws(field, &[(0, &[1]), (0, &[-1, 1]), (0, &[0, -1, 1])]);
        (phi, psi)
    }

    #[test]
    fn interlace_examples() {
        let (phi, psi) = three_by_three_pair(q());
        assert!(interlace(&phi, &psi, 2).unwrap().holds);
        assert!(interlace(&phi, &psi, 3).unwrap().holds);
        assert!(interlace(&phi, &psi, 1).unwrap().holds);
        let at0 = interlace(&phi, &psi, 0).unwrap();
        assert!(!at0.holds);
        assert_eq!(at0.first_violation, Some((1, Side::Lower)));
        assert!(interlace(&phi, &phi, 0).unwrap().holds);
    }

    #[test]
    fn min_rank_examples() {
        let (phi, psi) = three_by_three_pair(q());
        assert_eq!(min_rank(&phi, &psi).unwrap(), 1);
        assert_eq!(min_rank(&phi, &phi).unwrap(), 0);

        // the n = 5 instance: φ = (1,1,t,t²,t²), ψ = (1,1,s-t,s-t,(s-t)³)
        let phi5 = ws(
            q(),
            &[(0, &[1]), (0, &[1]), (1, &[1]), (2, &[1]), (2, &[1])],
        );
        let psi5 = ws(
            q(),
            &[
                (0, &[1]),
                (0, &[1]),
                (0, &[-1, 1]),
                (0, &[-1, 1]),
                (0, &[-1, 3, -3, 1]),
            ],
        );
        assert_eq!(min_rank(&phi5, &psi5).unwrap(), 3);
    }

    #[test]
    fn interlace_monotone_and_symmetric() {
        let mut rng = StdRng::seed_from_u64(17);
        let f = gf(3);
        for _ in 0..40 {
            let (a, b) = (
                random_structure(f, 4, &mut rng),
                random_structure(f, 4, &mut rng),
            );
            let r0 = min_rank(&a, &b).unwrap();
            for r in 0..=4usize {
                let holds = interlace(&a, &b, r).unwrap().holds;
                assert_eq!(holds, r >= r0, "monotonicity");
                assert_eq!(holds, interlace(&b, &a, r).unwrap().holds, "symmetry");
            }
        }
    }

    pub(crate) fn random_structure(
        field: FieldSpec,
        n: usize,
        rng: &mut StdRng,
    ) -> WeierstrassStructure {
        // random multiset of elementary blocks merged into a chain
        use crate::homog::HomogPoly;
        use std::collections::BTreeMap;
        loop {
            let mut budget = n;
            let mut blocks: Vec<(i64, usize)> = Vec::new(); // (root index, power); -1 = infinity
            while budget > 0 {
                let size = rng.gen_range(1..=budget);
                let root = rng.gen_range(-1..=2i64);
                blocks.push((root, size));
                budget -= size;
            }
            // per-root exponent lists, ascending, padded to n
            let mut per_root: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for (root, size) in blocks {
                per_root.entry(root).or_default().push(size);
            }
            let mut hf = vec![HomogPoly::one(field); n];
            for (root, mut exps) in per_root {
                exps.sort_unstable();
                let pad = n - exps.len();
                for (k, e) in exps.into_iter().enumerate() {
                    let i = pad + k;
                    let (m, fin) = hf[i].parts().map(|(m, f)| (m, f.clone())).unwrap();
                    hf[i] = if root == -1 {
                        HomogPoly::Val {
                            inf_mult: m + e,
                            finite: fin,
                        }
                    } else {
                        let lin = Poly::linear(&field.from_i64(root)).pow(e);
                        HomogPoly::Val {
                            inf_mult: m,
                            finite: &fin * &lin,
                        }
                    };
                }
            }
            if let Ok(s) = WeierstrassStructure::new(hf) {
                return s;
            }
        }
    }

    #[test]
    fn const_rank_bound_examples() {
        let f = q();
        // A = B = sI + diag(-c): bound 0
        let c = f.from_i64(2);
        let a = Pencil::monic(Mat::from_fn(
            3,
            3,
            f,
            |i, j| {
                if i == j {
                    -&c
                } else {
                    f.zero()
                }
            },
        ));
        assert_eq!(const_rank_bound(&a, &a).unwrap(), 0);

        // diag(s-1,s-1,s-1) vs diag(s-1,s-1,s): bound 1
        let a1 = Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
            if i == j {
                f.from_i64(-1)
            } else {
                f.zero()
            }
        }));
        let b1 = Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
            if i == j && i < 2 {
                f.from_i64(-1)
            } else {
                f.zero()
            }
        }));
        assert_eq!(const_rank_bound(&a1, &b1).unwrap(), 1);

        // disjoint spectra: inactive bound, truncated to n
        let b2 = Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
            if i == j {
                f.from_i64(-5)
            } else {
                f.zero()
            }
        }));
        assert_eq!(const_rank_bound(&a1, &b2).unwrap(), 3);

        let nonmonic = Pencil::constant(Mat::identity(3, f));
        assert!(const_rank_bound(&a1, &nonmonic).is_err());
    }

    #[test]
    fn applicability_shared_infinity_gf2() {
        let f = gf(2);
        // diag(1, s-1, s-1, s-1) and diag(1, s-1, s-1, s)
        let phi = ws(f, &[(0, &[1]), (0, &[-1, 1]), (0, &[-1, 1]), (1, &[-1, 1])]);
        let psi = ws(f, &[(0, &[1]), (0, &[1]), (0, &[-1, 1]), (1, &[0, -1, 1])]);
        let rep = applicability_of_structures(&phi, &psi).unwrap();
        assert!(rep.joint_spectrum_covers_field);
        assert_eq!(rep.witness_c, None);
        assert_eq!(rep.shared_multiplicity_lambda0, Some(SpecPoint::Infinity));
        assert_eq!(phi.mult_seq(&SpecPoint::Infinity), vec![0, 0, 0, 1]);
        assert_eq!(psi.mult_seq(&SpecPoint::Infinity), vec![0, 0, 0, 1]);
        assert!(!rep.scalar_exception);
    }

    #[test]
    fn applicability_witness_infinity_gf2() {
        let f = gf(2);
        let (phi, psi) = three_by_three_pair(f);
        let rep = applicability_of_structures(&phi, &psi).unwrap();
        assert_eq!(rep.witness_c, Some(SpecPoint::Infinity));
        assert!(!rep.joint_spectrum_covers_field);
    }

    #[test]
    fn applicability_always_found_over_q() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..20 {
            let a = random_structure(q(), 4, &mut rng);
            let b = random_structure(q(), 4, &mut rng);
            let rep = applicability_of_structures(&a, &b).unwrap();
            assert!(rep.witness_c.is_some());
        }
    }

    #[test]
    fn multiplicity_form_matches_divisibility_form() {
        let mut rng = StdRng::seed_from_u64(21);
        let f = gf(3);
        for _ in 0..60 {
            let a = random_structure(f, 4, &mut rng);
            let b = random_structure(f, 4, &mut rng);
            for r in 0..=4usize {
                let full = interlace(&a, &b, r).unwrap().holds;
                // over the base-field points plus infinity, the divisibility
                // form restricted to primary parts must match the
                // multiplicity inequalities
                let mut points = vec![SpecPoint::Infinity];
                points.extend((0..3).map(|v| SpecPoint::Finite(f.from_i64(v))));
                let mut all_mult = true;
                for pt in &points {
                    let m = interlace_multiplicities_at(&a, &b, r, pt);
                    assert_eq!(
                        m,
                        interlace_primary_at(&a, &b, r, pt),
                        "forms agree at {pt}"
                    );
                    all_mult &= m;
                }
                // the random structures only use roots in GF(3) and ∞,
                // so the pointwise conditions are jointly equivalent to the
                // divisibility interlacing
                assert_eq!(full, all_mult);
            }
        }
    }
}
