//! Exhaustive ground truth over small prime fields.
//!
//! Enumerates every perturbation pencil `P = P0 + s P1` over GF(p), buckets
//! them by normal rank, and collects the Weierstrass structures of the
//! regular sums `A + P`. Comparing the reachable set against the
//! interlacing predicate set checks both directions of the reachability
//! characterization: an `extra` entry (reachable but predicate-failing)
//! falsifies necessity unconditionally; a `missing` entry is only legal
//! when no constructive hypothesis applies.

use std::collections::BTreeSet;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::homog::HomogPoly;
use crate::mat::Mat;
use crate::pencil::Pencil;
use crate::poly::Poly;
use crate::reach::{applicability_of_structures, interlace, ApplicabilityReport};
use crate::weier::{weierstrass_structure, WeierstrassStructure};

/// Decodes enumeration index `idx` into a perturbation pencil: base-p
/// digits, `P0` row-major first, then `P1`.
pub fn decode_pencil(field: FieldSpec, n: usize, idx: u64) -> Pencil {
    let p = field.size().expect("finite field enumeration");
    let total = 2 * n * n;
    let mut digits = idx;
    let mut vals = Vec::with_capacity(total);
    for _ in 0..total {
        vals.push(field.from_i64((digits % p) as i64));
        digits /= p;
    }
    let g0 = Mat::from_fn(n, n, field, |i, j| vals[i * n + j].clone());
    let g1 = Mat::from_fn(n, n, field, |i, j| vals[n * n + i * n + j].clone());
    Pencil::new(g0, g1).expect("shapes agree")
}

/// Size of the enumeration space `p^(2 n^2)`, if it fits the budget.
pub fn enumeration_space(field: FieldSpec, n: usize, budget_log2: u32) -> Result<u64> {
    let p = field.size().ok_or_else(|| {
        Error::InvalidArgument("exhaustive enumeration needs a finite field".into())
    })?;
    let space = p
        .checked_pow((2 * n * n) as u32)
        .filter(|&v| v <= 1u64 << budget_log2)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "p^(2n^2) with p={p}, n={n} exceeds 2^{budget_log2}"
            ))
        })?;
    Ok(space)
}

/// Processes one contiguous index range; the unit of checkpointing and of
/// parallel partitioning. Returns per-rank structure sets.
fn pencil_rank(p: &Pencil) -> usize {
    // evaluation ranks bound the normal rank from below; a full-rank
    // evaluation settles it without elimination over F[s]
    let n = p.rows();
    let field = p.field();
    let mut best = p.g1().rank();
    if best == n {
        return n;
    }
    let points = [field.zero(), field.one()];
    for c in points {
        best = best.max(p.eval(&crate::field::SpecPoint::Finite(c)).rank());
        if best == n {
            return n;
        }
    }
    crate::smith::invariant_factors(&p.to_poly_matrix()).len()
}

pub fn reachable_in_range(a: &Pencil, range: Range<u64>) -> Vec<BTreeSet<WeierstrassStructure>> {
    let n = a.rows();
    let field = a.field();
    let mut buckets: Vec<BTreeSet<WeierstrassStructure>> = vec![BTreeSet::new(); n + 1];
    for idx in range {
        let p = decode_pencil(field, n, idx);
        let rank = pencil_rank(&p);
        let sum = a.add(&p);
        if let Ok(s) = weierstrass_structure(&sum) {
            buckets[rank].insert(s);
        }
    }
    buckets
}

/// All reachable structures, bucketed by exact perturbation rank, by a
/// parallel sweep of the whole space.
pub fn reachable_by_rank(
    a: &Pencil,
    budget_log2: u32,
) -> Result<Vec<BTreeSet<WeierstrassStructure>>> {
    let n = a.rows();
    if !a.is_regular()? {
        return Err(Error::NotRegular("oracle base pencil".into()));
    }
    let space = enumeration_space(a.field(), n, budget_log2)?;
    let chunk = 1u64 << 12;
    let starts: Vec<u64> = (0..space).step_by(chunk as usize).collect();
    let merged = starts
        .par_iter()
        .map(|&start| reachable_in_range(a, start..(start + chunk).min(space)))
        .reduce(
            || vec![BTreeSet::new(); n + 1],
            |mut acc, part| {
                for (dst, src) in acc.iter_mut().zip(part) {
                    dst.extend(src);
                }
                acc
            },
        );
    Ok(merged)
}

pub fn enumerate_reachable(
    a: &Pencil,
    r: usize,
    budget_log2: u32,
) -> Result<BTreeSet<WeierstrassStructure>> {
    let mut by_rank = reachable_by_rank(a, budget_log2)?;
    if r >= by_rank.len() {
        return Ok(BTreeSet::new());
    }
    Ok(std::mem::take(&mut by_rank[r]))
}

fn monic_polys(field: FieldSpec, degree: usize) -> Vec<Poly> {
    let p = field.size().expect("finite field") as i64;
    let mut out = Vec::new();
    let mut counters = vec![0i64; degree];
    loop {
        let mut coeffs: Vec<_> = counters.iter().map(|&c| field.from_i64(c)).collect();
        coeffs.push(field.one());
        out.push(Poly::new(field, coeffs));
        let mut i = 0;
        loop {
            if i == degree {
                return out;
            }
            counters[i] += 1;
            if counters[i] < p {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

fn homog_divisors(h: &HomogPoly) -> Vec<HomogPoly> {
    let (m, f) = h.parts().expect("nonzero");
    let field = h.field();
    let mut out = Vec::new();
    for mm in 0..=m {
        for d in 0..=f.degree().unwrap() {
            for g in monic_polys(field, d) {
                if g.divides(f) {
                    out.push(HomogPoly::from_parts(mm, g).1);
                }
            }
        }
    }
    out
}

/// Every valid Weierstrass structure of size `n` over a finite field:
/// divisibility chains of `n` homogeneous factors with total degree `n`.
pub fn all_structures(field: FieldSpec, n: usize) -> Vec<WeierstrassStructure> {
    let mut out = Vec::new();
    // top factor: any (m, f) with m + deg f between 1 and n
    let mut tops = Vec::new();
    for total in 1..=n {
        for m in 0..=total {
            for f in monic_polys(field, total - m) {
                tops.push(HomogPoly::from_parts(m, f).1);
            }
        }
    }
    fn rec(
        chain: &mut Vec<HomogPoly>,
        slots_left: usize,
        deg_left: usize,
        out: &mut Vec<WeierstrassStructure>,
    ) {
        if slots_left == 0 {
            if deg_left == 0 {
                let mut hf = chain.clone();
                hf.reverse();
                out.push(WeierstrassStructure::new(hf).expect("valid by construction"));
            }
            return;
        }
        let last = chain.last().unwrap().clone();
        // next factor divides the previous (descending construction)
        for d in homog_divisors(&last) {
            let dd = d.total_degree().unwrap();
            if dd > deg_left {
                continue;
            }
            // remaining slots can absorb the remaining degree only if each
            // is at most dd
            if deg_left - dd > dd * (slots_left - 1) {
                continue;
            }
            chain.push(d);
            rec(chain, slots_left - 1, deg_left - dd, out);
            chain.pop();
        }
    }
    for top in tops {
        let dd = top.total_degree().unwrap();
        if dd > n || (n - dd) > dd * (n - 1) {
            continue;
        }
        let mut chain = vec![top];
        rec(&mut chain, n - 1, n - dd, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// The structures passing the interlacing predicate at rank `r`.
pub fn predicate_set(
    phi: &WeierstrassStructure,
    r: usize,
    universe: &[WeierstrassStructure],
) -> BTreeSet<WeierstrassStructure> {
    universe
        .iter()
        .filter(|psi| interlace(phi, psi, r).map(|rep| rep.holds).unwrap_or(false))
        .cloned()
        .collect()
}

#[derive(Debug)]
pub struct OracleReport {
    pub rank: usize,
    pub reachable: BTreeSet<WeierstrassStructure>,
    pub predicate: BTreeSet<WeierstrassStructure>,
    /// Predicate-passing but unreachable, with their applicability
    /// diagnostics.
    pub missing: Vec<(WeierstrassStructure, ApplicabilityReport)>,
    /// Reachable but predicate-failing; always empty (necessity).
    pub extra: Vec<WeierstrassStructure>,
}

/// Compares the enumerated reachable set against the predicate set.
pub fn compare(a: &Pencil, r: usize, budget_log2: u32) -> Result<OracleReport> {
    let phi = weierstrass_structure(a)?;
    let universe = all_structures(a.field(), a.rows());
    let reachable = enumerate_reachable(a, r, budget_log2)?;
    let predicate = predicate_set(&phi, r, &universe);
    let mut missing = Vec::new();
    for psi in predicate.difference(&reachable) {
        missing.push((psi.clone(), applicability_of_structures(&phi, psi)?));
    }
    let extra: Vec<WeierstrassStructure> = reachable.difference(&predicate).cloned().collect();
    Ok(OracleReport {
        rank: r,
        reachable,
        predicate,
        missing,
        extra,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpecPoint;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field(p).unwrap()
    }

    #[test]
    fn scalar_field_reachability() {
        // a(s) = s over GF(2): at rank 1 exactly the other structures are
        // reachable
        let f = gf(2);
        let a = Pencil::new(Mat::zeros(1, 1, f), Mat::identity(1, f)).unwrap();
        let by_rank = reachable_by_rank(&a, 20).unwrap();
        let phi = weierstrass_structure(&a).unwrap();
        assert_eq!(by_rank[0].len(), 1);
        assert!(by_rank[0].contains(&phi));
        assert!(
            !by_rank[1].contains(&phi),
            "rank-1 cannot reproduce a(s) over GF(2)"
        );
        assert_eq!(by_rank[1].len(), 2);
    }

    #[test]
    fn zero_rank_reaches_only_itself() {
        let f = gf(2);
        let a = Pencil::monic(Mat::zeros(2, 2, f));
        let by_rank = reachable_by_rank(&a, 20).unwrap();
        assert_eq!(by_rank[0].len(), 1);
        assert!(by_rank[0].contains(&weierstrass_structure(&a).unwrap()));
    }

    #[test]
    fn full_rank_matches_predicate_gf2_n2() {
        let f = gf(2);
        let a = Pencil::monic(Mat::zeros(2, 2, f));
        let report = compare(&a, 2, 20).unwrap();
        assert!(report.extra.is_empty());
        // at r = n the interlacing is trivially satisfied; everything with
        // an applicability path must be reachable
        for (_, app) in &report.missing {
            assert!(app.witness_c.is_none() && app.shared_multiplicity_lambda0.is_none());
        }
    }

    #[test]
    fn universe_counts_are_consistent() {
        // every enumerated structure is valid and unique, and every regular
        // pencil's structure lies in the universe
        let f = gf(2);
        for n in 1..=3usize {
            let universe = all_structures(f, n);
            for s in &universe {
                let total: usize = s.hfactors().iter().map(|h| h.total_degree().unwrap()).sum();
                assert_eq!(total, n);
            }
            let as_set: BTreeSet<_> = universe.iter().cloned().collect();
            assert_eq!(as_set.len(), universe.len());
        }
        let universe3 = all_structures(f, 3);
        // spot checks: the all-ones-infinite chain and a mixed chain
        assert!(universe3.iter().any(|s| s.mu_a(&SpecPoint::Infinity) == 3));
    }

    #[test]
    fn necessity_on_a_sample() {
        let f = gf(3);
        let a = Pencil::monic(Mat::from_fn(2, 2, f, |i, j| {
            if i == j {
                f.from_i64(i as i64)
            } else {
                f.one()
            }
        }));
        if !a.is_regular().unwrap() {
            return;
        }
        for r in 0..=2usize {
            let report = compare(&a, r, 20).unwrap();
            assert!(report.extra.is_empty(), "necessity violated at rank {r}");
        }
    }
}
