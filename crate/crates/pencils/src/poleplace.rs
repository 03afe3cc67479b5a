//! Invariant-factor assignment by state feedback.
//!
//! Given a controllable pair `(A, B)` and a target chain of monic
//! polynomials, this module constructs `K` such that `sI - (A + B K)` has
//! exactly the target invariant factors, when the classical degree
//! conditions (controllability indices majorized by the target degrees)
//! admit a block-diagonal realization. The route is: controllability
//! staircase -> controller canonical coordinates -> Brunovsky form by an
//! input transform and a preliminary feedback -> a column-proper polynomial
//! matrix with the prescribed Smith form and column degrees, read off as the
//! feedback coefficients.
//!
//! Every produced `K` is verified against the Smith form of the closed-loop
//! pencil before being returned, so a `Some` answer is always correct; a
//! `None` only means this constructive route did not apply.

use crate::field::FieldSpec;
use crate::mat::{Mat, ScalarMat};
use crate::pencil::Pencil;
use crate::poly::Poly;
use crate::smith::invariant_factors;

/// One chain of the controllability staircase.
struct Chain {
    input: usize,
    length: usize,
}

/// Young-diagram selection of `A^k b_j`: returns the chains (sorted by
/// length descending, input ascending) when the pair is controllable.
fn staircase(a: &ScalarMat, b: &ScalarMat) -> Option<Vec<Chain>> {
    let n = a.rows();
    let m = b.cols();
    let field = a.field();
    let mut span: ScalarMat = Mat::zeros(n, 0, field);
    let mut lengths = vec![0usize; m];
    let mut powers: Vec<ScalarMat> = (0..m)
        .map(|j| b.submatrix(&(0..n).collect::<Vec<_>>(), &[j]))
        .collect();
    let mut selected = 0usize;
    for k in 0..n {
        if selected == n {
            break;
        }
        let mut progressed = false;
        for j in 0..m {
            if lengths[j] < k {
                continue; // chain j already terminated
            }
            let w = &powers[j];
            let cand = span.hconcat(w);
            if cand.rank() > span.rank() {
                span = cand;
                lengths[j] = k + 1;
                selected += 1;
                progressed = true;
                powers[j] = a.matmul(w);
            }
        }
        if !progressed {
            break;
        }
    }
    if selected != n {
        return None;
    }
    let mut chains: Vec<Chain> = (0..m)
        .filter(|&j| lengths[j] > 0)
        .map(|j| Chain {
            input: j,
            length: lengths[j],
        })
        .collect();
    chains.sort_by(|a, b| b.length.cmp(&a.length).then(a.input.cmp(&b.input)));
    Some(chains)
}

struct ControllerForm {
    /// Similarity `T` with `T A T^{-1} = Ac`, `T B = Bc`.
    t: ScalarMat,
    /// Input transform making the chain-end rows of `T B G` the identity.
    g: ScalarMat,
    /// Preliminary feedback rows: `K0[j] = -Ac(end_j, :)`.
    k0: ScalarMat,
    /// Chain lengths mu_1 >= mu_2 >= ...
    mu: Vec<usize>,
    /// Global state index of position `i` (0-based) in chain `l`.
    state_pos: Vec<Vec<usize>>,
}

fn controller_form(a: &ScalarMat, b: &ScalarMat) -> Option<ControllerForm> {
    let n = a.rows();
    let field = a.field();
    let chains = staircase(a, b)?;
    let m = chains.len();
    if m != b.cols() {
        // an input contributed nothing: B was column-deficient for selection
        return None;
    }

    // chain-grouped Krylov basis
    let mut cols: Vec<ScalarMat> = Vec::with_capacity(n);
    for ch in &chains {
        let mut v = b.submatrix(&(0..n).collect::<Vec<_>>(), &[ch.input]);
        for _ in 0..ch.length {
            cols.push(v.clone());
            v = a.matmul(&v);
        }
    }
    let mut s_mat = Mat::zeros(n, n, field);
    for (c, col) in cols.iter().enumerate() {
        for i in 0..n {
            s_mat.set(i, c, col.at(i, 0).clone());
        }
    }
    let s_inv = s_mat.inverse()?;

    // dual rows: last row of each chain group in S^{-1}
    let mut t = Mat::zeros(n, n, field);
    let mut row = 0usize;
    let mut group_end = 0usize;
    for ch in &chains {
        group_end += ch.length;
        let q: Vec<_> = (0..n).map(|j| s_inv.at(group_end - 1, j).clone()).collect();
        let mut q_mat = Mat::zeros(1, n, field);
        for (j, v) in q.iter().enumerate() {
            q_mat.set(0, j, v.clone());
        }
        for _ in 0..ch.length {
            for j in 0..n {
                t.set(row, j, q_mat.at(0, j).clone());
            }
            q_mat = q_mat.matmul(a);
            row += 1;
        }
    }
    let t_inv = t.inverse()?;
    let bc = t.matmul(b);

    // chain-end rows of Bc must be invertible, all other rows zero
    let mu: Vec<usize> = chains.iter().map(|c| c.length).collect();
    let mut state_pos = Vec::with_capacity(m);
    let mut pos = 0usize;
    for &len in &mu {
        state_pos.push((pos..pos + len).collect::<Vec<usize>>());
        pos += len;
    }
    let end_rows: Vec<usize> = state_pos.iter().map(|p| *p.last().unwrap()).collect();
    for i in 0..n {
        let is_end = end_rows.contains(&i);
        for j in 0..m {
            if !is_end && !bc.at(i, j).is_zero() {
                return None;
            }
        }
    }
    // reorder Bc's end rows by input index of each chain
    let bm = bc.submatrix(&end_rows, &(0..m).collect::<Vec<_>>());
    // columns of Bm correspond to original inputs; we want G with
    // (T B G)(end_l, j) = delta_{l j} in chain order
    let g = bm.inverse()?;

    let ac = t.matmul(a).matmul(&t_inv);
    let mut k0 = Mat::zeros(m, n, field);
    for (l, &er) in end_rows.iter().enumerate() {
        for j in 0..n {
            k0.set(l, j, -ac.at(er, j));
        }
    }

    Some(ControllerForm {
        t,
        g,
        k0,
        mu,
        state_pos,
    })
}

/// Partition of the reduced column degrees into groups realizing each
/// nontrivial factor, with zero-degree columns as trivial singletons.
/// Columns are picked in ascending index order by backtracking.
#[allow(clippy::too_many_arguments)]
fn partition_columns(nu: &[usize], degrees: &[usize]) -> Option<Vec<Vec<usize>>> {
    let usable: Vec<usize> = (0..nu.len()).filter(|&i| nu[i] >= 1).collect();
    let mut assignment: Vec<Vec<usize>> = vec![Vec::new(); degrees.len()];
    let mut used = vec![false; nu.len()];
    fn go(
        f: usize,
        degrees: &[usize],
        usable: &[usize],
        nu: &[usize],
        used: &mut [bool],
        assignment: &mut [Vec<usize>],
    ) -> bool {
        if f == degrees.len() {
            return usable.iter().all(|&c| used[c]);
        }
        // choose a subset of unused usable columns summing to degrees[f]
        fn choose(
            start: usize,
            remaining: usize,
            f: usize,
            degrees: &[usize],
            usable: &[usize],
            nu: &[usize],
            used: &mut [bool],
            assignment: &mut [Vec<usize>],
        ) -> bool {
            if remaining == 0 {
                return go(f + 1, degrees, usable, nu, used, assignment);
            }
            for idx in start..usable.len() {
                let c = usable[idx];
                if used[c] || nu[c] > remaining {
                    continue;
                }
                used[c] = true;
                assignment[f].push(c);
                if choose(
                    idx + 1,
                    remaining - nu[c],
                    f,
                    degrees,
                    usable,
                    nu,
                    used,
                    assignment,
                ) {
                    return true;
                }
                assignment[f].pop();
                used[c] = false;
            }
            false
        }
        choose(0, degrees[f], f, degrees, usable, nu, used, assignment)
    }
    if go(0, degrees, &usable, nu, &mut used, &mut assignment) {
        Some(assignment)
    } else {
        None
    }
}

/// Column-proper `m x m` polynomial matrix with column degrees `mu`,
/// leading column-coefficient matrix the identity, and Smith chain `g`
/// (ascending). Returns `None` when the block-diagonal construction does
/// not fit the degree profile.
fn build_poly_matrix(mu: &[usize], g: &[Poly], field: FieldSpec) -> Option<Mat<Poly>> {
    let m = mu.len();
    assert_eq!(g.len(), m);
    let g1 = &g[0];
    let d1 = g1.degree()?;
    if mu.iter().any(|&x| x < d1) {
        return None;
    }
    let nu: Vec<usize> = mu.iter().map(|&x| x - d1).collect();
    let chi: Vec<Poly> = g
        .iter()
        .map(|gi| gi.exact_div(g1).expect("chain"))
        .collect();
    let nontrivial: Vec<Poly> = chi.iter().filter(|c| !c.is_one()).cloned().collect();
    let degrees: Vec<usize> = nontrivial.iter().map(|c| c.degree().unwrap()).collect();
    let groups = partition_columns(&nu, &degrees)?;

    let mut d_tilde: Mat<Poly> = Mat::zeros(m, m, field);
    for (i, &ni) in nu.iter().enumerate() {
        if ni == 0 {
            d_tilde.set(i, i, Poly::one(field));
        }
    }
    for (eta, cols) in nontrivial.iter().zip(&groups) {
        // generalized base-s^nu digits of eta along the block columns
        let k = cols.len();
        let mut tail: Vec<usize> = vec![0; k + 1];
        for j in (0..k).rev() {
            tail[j] = tail[j + 1] + nu[cols[j]];
        }
        let mut r = eta.clone();
        for j in 0..k {
            let modulus = Poly::x(field).pow(tail[j + 1]);
            let (quot, rem) = r.divrem(&modulus);
            d_tilde.set(cols[0], cols[j], quot);
            r = rem;
        }
        if !r.is_zero() {
            return None;
        }
        for j in 1..k {
            let minus_one = Poly::constant(-&field.one());
            d_tilde.set(cols[j], cols[j - 1], minus_one);
            let diag = Poly::x(field).pow(nu[cols[j]]);
            d_tilde.set(cols[j], cols[j], diag);
        }
    }
    let g1_poly = g1.clone();
    let d = d_tilde.map(|p| p * &g1_poly);

    // column-properness sanity: diagonal monic of degree mu_l, the rest
    // strictly below
    for (l, &col_deg) in mu.iter().enumerate() {
        let diag = d.at(l, l);
        if diag.degree() != Some(col_deg) || !diag.is_monic() {
            return None;
        }
        for i in 0..m {
            if i != l {
                if let Some(deg) = d.at(i, l).degree() {
                    if deg >= col_deg {
                        return None;
                    }
                }
            }
        }
    }
    Some(d)
}

/// Feedback `K` with `sI - (A + B K)` having the invariant-factor chain
/// `target` (ascending, length `n`, degree sum `n`). `None` when the pair is
/// uncontrollable or the degree combinatorics do not admit the
/// block-diagonal realization.
pub fn place_invariant_factors(a: &ScalarMat, b: &ScalarMat, target: &[Poly]) -> Option<ScalarMat> {
    let n = a.rows();
    let m = b.cols();
    let field = a.field();
    if m == 0 || n == 0 {
        return None;
    }
    // a controllable closed loop forces triviality below the top m factors
    if n > m && target[..n - m].iter().any(|f| !f.is_one()) {
        return None;
    }
    let cf = controller_form(a, b)?;
    let g_chain: Vec<Poly> = target[n.saturating_sub(m)..].to_vec();
    let d = build_poly_matrix(&cf.mu, &g_chain, field)?;

    // K-bar coefficients from E(s) = D(s) - diag(s^mu)
    let mut kbar = Mat::zeros(m, n, field);
    for (l, positions) in cf.state_pos.iter().enumerate() {
        for j in 0..m {
            let mut e = d.at(j, l).clone();
            if j == l {
                e = &e - &Poly::x(field).pow(cf.mu[l]);
            }
            for (i, &pos) in positions.iter().enumerate() {
                kbar.set(j, pos, -&e.coeff(i));
            }
        }
    }
    let total = cf.g.matmul(&cf.k0.add(&kbar)).matmul(&cf.t);

    // verification: the closed-loop pencil has exactly the target factors
    let closed = a.add(&b.matmul(&total));
    let pencil = Pencil::new(closed.neg(), Mat::identity(n, field)).ok()?;
    let achieved = invariant_factors(&pencil.to_poly_matrix());
    if achieved.len() == n && achieved == target[..] {
        Some(total)
    } else {
        None
    }
}
