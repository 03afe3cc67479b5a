//! Spectral splitting of a regular pencil at the eigenvalue zero.
//!
//! `split_at_zero` produces constant invertible `Q`, `R` with
//! `Q G(s) R = blockdiag(P0(s), Rest(s))` where `P0` carries exactly the
//! zero-eigenvalue structure and `Rest` has no eigenvalue at zero. Combined
//! with a change of projective variable this splits off the primary block
//! at any point, which is what the shared-eigenvalue synthesis path needs.
//! The subspaces are computed by kernel/preimage chains, with no requirement
//! that a non-eigenvalue exist in the base field.

use crate::error::{Error, Result};
use crate::mat::{Mat, ScalarMat};
use crate::pencil::Pencil;

/// Column-space basis of `[a | b]`.
fn space_sum(a: &ScalarMat, b: &ScalarMat) -> ScalarMat {
    a.hconcat(b).column_space_basis()
}

/// `{v : m v ∈ col(w)}` as a column basis.
fn preimage(m: &ScalarMat, w: &ScalarMat) -> ScalarMat {
    let stacked = m.hconcat(&w.neg());
    let k = stacked.kernel_basis();
    let rows: Vec<usize> = (0..m.cols()).collect();
    let cols: Vec<usize> = (0..k.cols()).collect();
    k.submatrix(&rows, &cols).column_space_basis()
}

fn same_space(a: &ScalarMat, b: &ScalarMat) -> bool {
    a.rank() == b.rank() && a.hconcat(b).rank() == a.rank()
}

/// Splitting result: `q * G * r` is block diagonal with the zero-primary
/// block of size `n0` leading.
pub struct ZeroSplit {
    pub q: ScalarMat,
    pub r: ScalarMat,
    pub q_inv: ScalarMat,
    pub r_inv: ScalarMat,
    pub n0: usize,
}

pub fn split_at_zero(g: &Pencil) -> Result<ZeroSplit> {
    if !g.is_regular()? {
        return Err(Error::NotRegular("splitting a singular pencil".into()));
    }
    let n = g.rows();
    let field = g.field();
    let g0 = g.g0();
    let g1 = g.g1();

    // right chains: X0 grows from ker G0 by preimages, Xc shrinks from
    // im G0 by push-forwards
    let mut x0 = g0.kernel_basis().column_space_basis();
    loop {
        let next = preimage(g0, &g1.matmul(&x0));
        // ker G0 is contained in every iterate, so the chain only grows
        let merged = space_sum(&x0, &next);
        if same_space(&merged, &x0) {
            break;
        }
        x0 = merged;
    }
    let mut xc = g0.column_space_basis();
    // xc is a subspace of the codomain here; iterate G0 * preimage_{G1}(xc)
    loop {
        let next = g0.matmul(&preimage(g1, &xc)).column_space_basis();
        if same_space(&next, &xc) {
            xc = next;
            break;
        }
        xc = next;
    }
    // pull the codomain chain back to the domain: Xc-domain = preimage of
    // the stabilized image under G0, intersected through G1... the
    // stabilized set already satisfies xc = G0 * preimage_{G1}(xc); the
    // domain-side complement is preimage_{G1}(xc) by regularity.
    let xc_dom = preimage(g1, &xc);

    let n0 = x0.rank();
    if n0 + xc_dom.rank() != n || !same_space(&space_sum(&x0, &xc_dom), &Mat::identity(n, field)) {
        return Err(Error::InternalCheck(
            "zero-splitting subspaces do not decompose".into(),
        ));
    }

    // assemble R = [X0 | Xc], Q^{-1} = [G(X0) | G(Xc)] span bases
    let r_mat = x0.hconcat(&xc_dom);
    let y0 = space_sum(&g0.matmul(&x0), &g1.matmul(&x0));
    let yc = space_sum(&g0.matmul(&xc_dom), &g1.matmul(&xc_dom));
    if y0.rank() != n0 || yc.rank() != n - n0 {
        return Err(Error::InternalCheck(
            "zero-splitting image spaces have wrong dimension".into(),
        ));
    }
    let q_inv = y0.hconcat(&yc);
    let q_mat = q_inv.inverse().ok_or_else(|| {
        Error::InternalCheck("zero-splitting image basis is not invertible".into())
    })?;
    let r_inv = r_mat.inverse().ok_or_else(|| {
        Error::InternalCheck("zero-splitting domain basis is not invertible".into())
    })?;

    // block-diagonality check
    let split = g.conjugate(&q_mat, &r_mat);
    for mat in [split.g0(), split.g1()] {
        for i in 0..n {
            for j in 0..n {
                let off = (i < n0) != (j < n0);
                if off && !mat.at(i, j).is_zero() {
                    return Err(Error::InternalCheck(
                        "zero-splitting off-diagonal residue".into(),
                    ));
                }
            }
        }
    }
    Ok(ZeroSplit {
        q: q_mat,
        r: r_mat,
        q_inv,
        r_inv,
        n0,
    })
}

/// Jordan basis of a nilpotent matrix: returns `s` with `s^{-1} N s` block
/// diagonal of superdiagonal shift blocks, sizes ascending.
pub fn nilpotent_jordan(n_mat: &ScalarMat) -> Result<(ScalarMat, Vec<usize>)> {
    let n = n_mat.rows();
    let field = n_mat.field();
    if n == 0 {
        return Ok((Mat::identity(0, field), Vec::new()));
    }
    // nilpotency index
    let mut power = Mat::identity(n, field);
    let mut index = 0;
    while !power.is_zero() {
        power = power.matmul(n_mat);
        index += 1;
        if index > n {
            return Err(Error::InvalidArgument("matrix is not nilpotent".into()));
        }
    }
    // kernel filtration K_i = ker N^i
    let mut kernels: Vec<ScalarMat> = Vec::with_capacity(index + 1);
    kernels.push(Mat::zeros(n, 0, field));
    let mut pw = n_mat.clone();
    for _ in 0..index {
        kernels.push(pw.kernel_basis().column_space_basis());
        pw = pw.matmul(n_mat);
    }

    // chain tops from the highest level down
    let mut chains: Vec<Vec<ScalarMat>> = Vec::new();
    let mut carried: Vec<ScalarMat> = Vec::new();
    for level in (1..=index).rev() {
        let lower = &kernels[level - 1];
        let mut span = lower.clone();
        for c in &carried {
            span = space_sum(&span, c);
        }
        let mut new_tops = Vec::new();
        let upper = &kernels[level];
        for c in 0..upper.cols() {
            let cand = upper.submatrix(&(0..n).collect::<Vec<_>>(), &[c]);
            let merged = space_sum(&span, &cand);
            if merged.rank() > span.rank() {
                span = merged;
                new_tops.push(cand);
            }
        }
        for top in &new_tops {
            let mut chain = Vec::with_capacity(level);
            let mut v = top.clone();
            for _ in 0..level {
                chain.push(v.clone());
                v = n_mat.matmul(&v);
            }
            chain.reverse(); // bottom (kernel vector) first
            chains.push(chain);
        }
        carried = carried
            .iter()
            .chain(new_tops.iter())
            .map(|v| n_mat.matmul(v))
            .collect();
    }
    chains.sort_by_key(Vec::len);
    let sizes: Vec<usize> = chains.iter().map(Vec::len).collect();
    let mut s = Mat::zeros(n, n, field);
    let mut col = 0;
    for chain in &chains {
        for v in chain {
            for i in 0..n {
                s.set(i, col, v.at(i, 0).clone());
            }
            col += 1;
        }
    }
    // verify
    let s_inv = s
        .inverse()
        .ok_or_else(|| Error::InternalCheck("Jordan chain basis is singular".into()))?;
    let jordan = s_inv.matmul(n_mat).matmul(&s);
    let mut expect = Mat::zeros(n, n, field);
    let mut pos = 0;
    for &sz in &sizes {
        for i in 0..sz.saturating_sub(1) {
            expect.set(pos + i, pos + i + 1, field.one());
        }
        pos += sz;
    }
    if jordan != expect {
        return Err(Error::InternalCheck(
            "nilpotent Jordan reduction failed".into(),
        ));
    }
    Ok((s, sizes))
}
