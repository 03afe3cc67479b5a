//! Smith normal form of polynomial matrices over `F[s]`.
//!
//! Two independent routes are provided. The elimination engine performs
//! elementary row/column operations over the Euclidean ring `F[s]`, picking
//! the nonzero entry of minimal degree as pivot (ties row-major), fixing the
//! divisibility chain afterwards, and optionally tracking unimodular
//! witnesses. The minors route computes determinantal divisors as gcds of
//! all k-minors; it is exponential and serves as the cross-checking oracle
//! on small matrices.

use crate::error::{Error, Result};
use crate::mat::{Mat, PolyMat};
use crate::poly::Poly;

/// Invariant factors plus optional unimodular witnesses satisfying
/// `u * G * v = diag(factors)` (padded with zeros).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub factors: Vec<Poly>,
    pub rank: usize,
    pub u: Option<PolyMat>,
    pub v: Option<PolyMat>,
}

struct Work {
    m: PolyMat,
    u: Option<PolyMat>,
    v: Option<PolyMat>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols() {
            let t = self.m.at(a, j).clone();
            self.m.set(a, j, self.m.at(b, j).clone());
            self.m.set(b, j, t);
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let t = u.at(a, j).clone();
                u.set(a, j, u.at(b, j).clone());
                u.set(b, j, t);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows() {
            let t = self.m.at(i, a).clone();
            self.m.set(i, a, self.m.at(i, b).clone());
            self.m.set(i, b, t);
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows() {
                let t = v.at(i, a).clone();
                v.set(i, a, v.at(i, b).clone());
                v.set(i, b, t);
            }
        }
    }

    /// row_a -= q * row_b
    fn row_submul(&mut self, a: usize, b: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.m.cols() {
            let t = self.m.at(a, j) - &(q * self.m.at(b, j));
            self.m.set(a, j, t);
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let t = u.at(a, j) - &(q * u.at(b, j));
                u.set(a, j, t);
            }
        }
    }

    /// col_a -= q * col_b
    fn col_submul(&mut self, a: usize, b: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.m.rows() {
            let t = self.m.at(i, a) - &(q * self.m.at(i, b));
            self.m.set(i, a, t);
        }
        if let Some(v) = &mut self.v {
            for i in 0..v.rows() {
                let t = v.at(i, a) - &(q * v.at(i, b));
                v.set(i, a, t);
            }
        }
    }

    /// col_a += col_b
    fn col_add(&mut self, a: usize, b: usize) {
        let minus_one = Poly::constant(-&self.m.field().one());
        self.col_submul(a, b, &minus_one);
    }

    fn scale_row(&mut self, a: usize, k: &Poly) {
        for j in 0..self.m.cols() {
            let t = self.m.at(a, j) * k;
            self.m.set(a, j, t);
        }
        if let Some(u) = &mut self.u {
            for j in 0..u.cols() {
                let t = u.at(a, j) * k;
                u.set(a, j, t);
            }
        }
    }
}

fn find_pivot(m: &PolyMat, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let e = m.at(i, j);
            if e.is_zero() {
                continue;
            }
            let d = e.degree().unwrap();
            if best.is_none_or(|(bd, _, _)| d < bd) {
                best = Some((d, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn diagonalize(w: &mut Work) -> usize {
    let dim = w.m.rows().min(w.m.cols());
    let mut k = 0;
    while k < dim {
        let Some((pi, pj)) = find_pivot(&w.m, k) else {
            break;
        };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        let mut clean = true;
        for i in k + 1..w.m.rows() {
            if !w.m.at(i, k).is_zero() {
                let (q, r) = w.m.at(i, k).divrem(w.m.at(k, k));
                w.row_submul(i, k, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
        }
        for j in k + 1..w.m.cols() {
            if !w.m.at(k, j).is_zero() {
                let (q, r) = w.m.at(k, j).divrem(w.m.at(k, k));
                w.col_submul(j, k, &q);
                if !r.is_zero() {
                    clean = false;
                }
            }
        }
        if clean {
            k += 1;
        }
        // otherwise a remainder of smaller degree exists in row/column k and
        // the next pivot pick strictly decreases the minimal degree
    }
    k
}

/// Smith normal form by elementary operations.
pub fn smith_form(g: &PolyMat, want_witnesses: bool) -> SmithForm {
    let field = g.field();
    let mut w = Work {
        m: g.clone(),
        u: want_witnesses.then(|| Mat::identity(g.rows(), field)),
        v: want_witnesses.then(|| Mat::identity(g.cols(), field)),
    };
    let mut rank = diagonalize(&mut w);

    // Fix the divisibility chain by gcd absorption: pulling column j onto
    // column i puts d_j next to d_i, and re-running the elimination replaces
    // the pair by (gcd, lcm) while keeping the witnesses in sync.
    let mut guard = 0usize;
    loop {
        let mut violated = None;
        'outer: for i in 0..rank {
            for j in i + 1..rank {
                if !w.m.at(i, i).divides(w.m.at(j, j)) {
                    violated = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = violated else { break };
        guard += 1;
        assert!(
            guard <= g.rows() * g.cols() * 64,
            "divisibility absorption failed to converge"
        );
        w.col_add(i, j);
        rank = diagonalize(&mut w);
    }

    // monic normalization by constant row scalings
    for i in 0..rank {
        let lead = w.m.at(i, i).leading().cloned().expect("nonzero diagonal");
        if !lead.is_one() {
            let inv = Poly::constant(lead.inv().unwrap());
            w.scale_row(i, &inv);
        }
    }

    let factors: Vec<Poly> = (0..rank).map(|i| w.m.at(i, i).clone()).collect();
    for win in factors.windows(2) {
        assert!(win[0].divides(&win[1]), "invariant factor chain broken");
    }
    if let (Some(u), Some(v)) = (&w.u, &w.v) {
        debug_assert!(witnesses_check(g, u, v, &factors));
    }
    SmithForm {
        factors,
        rank,
        u: w.u,
        v: w.v,
    }
}

/// Checks `u * G * v == diag(factors)` and that both witnesses are
/// unimodular.
pub fn witnesses_check(g: &PolyMat, u: &PolyMat, v: &PolyMat, factors: &[Poly]) -> bool {
    let du = u.det_bareiss();
    let dv = v.det_bareiss();
    if du.is_zero() || du.degree() != Some(0) || dv.is_zero() || dv.degree() != Some(0) {
        return false;
    }
    let prod = u.matmul(g).matmul(v);
    for i in 0..prod.rows() {
        for j in 0..prod.cols() {
            let expect = if i == j && i < factors.len() {
                factors[i].clone()
            } else {
                Poly::zero(g.field())
            };
            if prod.at(i, j) != &expect {
                return false;
            }
        }
    }
    true
}

/// Invariant factors only (no witnesses).
pub fn invariant_factors(g: &PolyMat) -> Vec<Poly> {
    smith_form(g, false).factors
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinantal divisors `D_1, ..., D_rank` as monic gcds of all k-minors.
/// Exponential in the matrix size; intended for cross-checking on small
/// inputs.
pub fn determinantal_divisors(g: &PolyMat) -> Result<Vec<Poly>> {
    let n = g.rows().max(g.cols());
    if n > 6 {
        return Err(Error::BudgetExceeded(format!(
            "determinantal divisors by minors on a {}x{} matrix",
            g.rows(),
            g.cols()
        )));
    }
    let mut out = Vec::new();
    for k in 1..=g.rows().min(g.cols()) {
        let mut gcd: Option<Poly> = None;
        for rows in combinations(g.rows(), k) {
            for cols in combinations(g.cols(), k) {
                let minor = g.submatrix(&rows, &cols).det_laplace();
                if minor.is_zero() {
                    continue;
                }
                gcd = Some(match gcd {
                    None => minor.monic().1,
                    Some(cur) => Poly::gcd(&cur, &minor)?,
                });
            }
        }
        match gcd {
            Some(d) => out.push(d),
            None => break, // all k-minors vanish: rank is k-1
        }
    }
    Ok(out)
}

/// Invariant factors via the determinantal-divisor quotients
/// `γ_k = D_k / D_{k-1}`; the independent oracle route.
pub fn invariant_factors_by_minors(g: &PolyMat) -> Result<Vec<Poly>> {
    let divisors = determinantal_divisors(g)?;
    let mut out = Vec::with_capacity(divisors.len());
    let mut prev = Poly::one(g.field());
    for d in &divisors {
        let q = d
            .exact_div(&prev)
            .ok_or_else(|| Error::InternalCheck("D_{k-1} does not divide D_k".into()))?;
        out.push(q);
        prev = d.clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime_field(p).unwrap()
    }

    fn poly_diag(field: FieldSpec, entries: &[&[i64]]) -> PolyMat {
        let n = entries.len();
        Mat::from_fn(n, n, field, |i, j| {
            if i == j {
                Poly::from_i64(field, entries[i])
            } else {
                Poly::zero(field)
            }
        })
    }

    fn rand_poly_mat(
        field: FieldSpec,
        r: usize,
        c: usize,
        maxdeg: usize,
        rng: &mut StdRng,
    ) -> PolyMat {
        Mat::from_fn(r, c, field, |_, _| {
            let d = rng.gen_range(0..=maxdeg);
            Poly::new(
                field,
                (0..=d)
                    .map(|_| field.from_i64(rng.gen_range(-3..=3)))
                    .collect(),
            )
        })
    }

    #[test]
    fn diag_repeated_factor() {
        let g = poly_diag(q(), &[&[-1, 1], &[-1, 1], &[-1, 1]]);
        let sf = smith_form(&g, false);
        assert_eq!(sf.rank, 3);
        let lin = Poly::from_i64(q(), &[-1, 1]);
        assert_eq!(sf.factors, vec![lin.clone(), lin.clone(), lin]);
    }

    #[test]
    fn companion_is_nonderogatory() {
        // sI - C(f) for f = s^3 + 1 over GF(2): invariant factors (1, 1, f)
        let f2 = gf(2);
        let zero = Poly::zero(f2);
        let one = Poly::one(f2);
        let s = Poly::x(f2);
        // companion with subdiagonal ones and last column the coefficients
        let g = Mat::from_rows(
            f2,
            vec![
                vec![s.clone(), zero.clone(), one.clone()],
                vec![-&one, s.clone(), zero.clone()],
                vec![zero.clone(), -&one, s.clone()],
            ],
        );
        let sf = smith_form(&g, false);
        assert_eq!(
            sf.factors,
            vec![one.clone(), one.clone(), Poly::from_i64(f2, &[1, 0, 0, 1])]
        );
    }

    #[test]
    fn matches_minor_oracle_random_gf3() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let g = rand_poly_mat(gf(3), 3, 3, 1, &mut rng);
            let a = invariant_factors(&g);
            let b = invariant_factors_by_minors(&g).unwrap();
            assert_eq!(a, b, "on {g:?}");
        }
    }

    #[test]
    fn matches_minor_oracle_random_q_rect() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..15 {
            let g = rand_poly_mat(q(), 3, 4, 1, &mut rng);
            let a = invariant_factors(&g);
            let b = invariant_factors_by_minors(&g).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witnesses_are_unimodular_and_exact() {
        let mut rng = StdRng::seed_from_u64(31);
        for field in [q(), gf(2), gf(5)] {
            for _ in 0..10 {
                let g = rand_poly_mat(field, 3, 3, 1, &mut rng);
                let sf = smith_form(&g, true);
                assert!(witnesses_check(
                    &g,
                    sf.u.as_ref().unwrap(),
                    sf.v.as_ref().unwrap(),
                    &sf.factors
                ));
            }
        }
    }

    #[test]
    fn unimodular_invariance() {
        let mut rng = StdRng::seed_from_u64(37);
        let f = gf(3);
        for _ in 0..20 {
            let g = rand_poly_mat(f, 3, 3, 1, &mut rng);
            let base = invariant_factors(&g);
            // random product of elementary operations
            let mut h = g.clone();
            let mut w = Work {
                m: h.clone(),
                u: None,
                v: None,
            };
            for _ in 0..8 {
                let a = rng.gen_range(0..3);
                let b = rng.gen_range(0..3);
                if a == b {
                    continue;
                }
                let qp = Poly::new(
                    f,
                    vec![
                        f.from_i64(rng.gen_range(0..3)),
                        f.from_i64(rng.gen_range(0..3)),
                    ],
                );
                if rng.gen_bool(0.5) {
                    w.row_submul(a, b, &qp);
                } else {
                    w.col_submul(a, b, &qp);
                }
            }
            h = w.m;
            assert_eq!(invariant_factors(&h), base);
        }
    }

    #[test]
    fn chain_divisibility_of_determinantal_divisors() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..25 {
            let g = rand_poly_mat(gf(2), 3, 3, 1, &mut rng);
            let ds = determinantal_divisors(&g).unwrap();
            for win in ds.windows(2) {
                assert!(win[0].divides(&win[1]));
            }
        }
    }
}

#[cfg(test)]
mod envelope_tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Witness-producing Smith forms at the upper end of the design
    /// envelope (n = 8): chain, unimodularity, and the exact product
    /// identity all hold, over GF(2) and Q.
    #[test]
    fn witnesses_at_envelope_size() {
        let mut rng = StdRng::seed_from_u64(2024);
        for field in [FieldSpec::prime_field(2).unwrap(), FieldSpec::Rationals] {
            for _ in 0..3 {
                let g: PolyMat = Mat::from_fn(8, 8, field, |_, _| {
                    let c0 = field.from_i64(rng.gen_range(-2..=2));
                    let c1 = field.from_i64(rng.gen_range(-2..=2));
                    Poly::new(field, vec![c0, c1])
                });
                let sf = smith_form(&g, true);
                assert!(witnesses_check(
                    &g,
                    sf.u.as_ref().unwrap(),
                    sf.v.as_ref().unwrap(),
                    &sf.factors
                ));
            }
        }
    }
}
