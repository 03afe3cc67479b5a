//! Matrix pencils `G(s) = G0 + s*G1` over an exact field.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, SpecPoint};
use crate::mat::{normal_rank, Mat, PolyMat, ScalarMat};
use crate::mobius::MobiusMap;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pencil {
    g0: ScalarMat,
    g1: ScalarMat,
}

impl Pencil {
    pub fn new(g0: ScalarMat, g1: ScalarMat) -> Result<Pencil> {
        if g0.rows() != g1.rows() || g0.cols() != g1.cols() {
            return Err(Error::DimensionMismatch(
                "pencil coefficient shapes differ".into(),
            ));
        }
        if g0.field() != g1.field() {
            return Err(Error::FieldMismatch(
                "pencil coefficient fields differ".into(),
            ));
        }
        Ok(Pencil { g0, g1 })
    }

    /// `sI + a` (invertible leading coefficient, the working form of the
    /// synthesis routines).
    pub fn monic(a: ScalarMat) -> Pencil {
        let id = Mat::identity(a.rows(), a.field());
        Pencil { g0: a, g1: id }
    }

    /// A constant pencil (`G1 = 0`).
    pub fn constant(p: ScalarMat) -> Pencil {
        let z = Mat::zeros(p.rows(), p.cols(), p.field());
        Pencil { g0: p, g1: z }
    }

    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Pencil {
        Pencil {
            g0: Mat::zeros(rows, cols, field),
            g1: Mat::zeros(rows, cols, field),
        }
    }

    pub fn g0(&self) -> &ScalarMat {
        &self.g0
    }

    pub fn g1(&self) -> &ScalarMat {
        &self.g1
    }

    pub fn rows(&self) -> usize {
        self.g0.rows()
    }

    pub fn cols(&self) -> usize {
        self.g0.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.g0.field()
    }

    pub fn is_square(&self) -> bool {
        self.g0.is_square()
    }

    pub fn is_constant(&self) -> bool {
        self.g1.is_zero()
    }

    /// True when `G1` is exactly the identity.
    pub fn has_identity_leading(&self) -> bool {
        self.is_square() && self.g1 == Mat::identity(self.rows(), self.field())
    }

    pub fn to_poly_matrix(&self) -> PolyMat {
        Mat::from_fn(self.rows(), self.cols(), self.field(), |i, j| {
            Poly::new(
                self.field(),
                vec![self.g0.at(i, j).clone(), self.g1.at(i, j).clone()],
            )
        })
    }

    /// Evaluation on the projective line; `G(∞) = G1`.
    pub fn eval(&self, at: &SpecPoint) -> ScalarMat {
        match at {
            SpecPoint::Infinity => self.g1.clone(),
            SpecPoint::Finite(c) => self.g0.add(&self.g1.scale(c)),
        }
    }

    pub fn det_poly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotRegular("pencil is not square".into()));
        }
        Ok(self.to_poly_matrix().det_bareiss())
    }

    pub fn is_regular(&self) -> Result<bool> {
        Ok(self.is_square() && !self.det_poly()?.is_zero())
    }

    /// Normal rank over the fraction field.
    pub fn normal_rank(&self) -> usize {
        normal_rank(&self.to_poly_matrix())
    }

    pub fn add(&self, rhs: &Pencil) -> Pencil {
        Pencil {
            g0: self.g0.add(&rhs.g0),
            g1: self.g1.add(&rhs.g1),
        }
    }

    pub fn sub(&self, rhs: &Pencil) -> Pencil {
        Pencil {
            g0: self.g0.sub(&rhs.g0),
            g1: self.g1.sub(&rhs.g1),
        }
    }

    pub fn neg(&self) -> Pencil {
        Pencil {
            g0: self.g0.neg(),
            g1: self.g1.neg(),
        }
    }

    /// Constant left multiplication `Q * G(s)`.
    pub fn left_mul(&self, q: &ScalarMat) -> Pencil {
        Pencil {
            g0: q.matmul(&self.g0),
            g1: q.matmul(&self.g1),
        }
    }

    /// Constant right multiplication `G(s) * R`.
    pub fn right_mul(&self, r: &ScalarMat) -> Pencil {
        Pencil {
            g0: self.g0.matmul(r),
            g1: self.g1.matmul(r),
        }
    }

    pub fn conjugate(&self, q: &ScalarMat, r: &ScalarMat) -> Pencil {
        self.left_mul(q).right_mul(r)
    }

    /// The change of variable `P_X`: for `X = [x y; z w]`,
    /// `s G1 + G0  ->  s (x G1 + z G0) + (y G1 + w G0)`.
    /// Rank-preserving and inverted exactly by the inverse map.
    pub fn mobius(&self, map: &MobiusMap) -> Pencil {
        let g1 = self.g1.scale(&map.x).add(&self.g0.scale(&map.z));
        let g0 = self.g1.scale(&map.y).add(&self.g0.scale(&map.w));
        Pencil { g0, g1 }
    }

    /// `rev(G) = G1 + s G0`: the image under the swap map, exchanging the
    /// roles of zero and infinity.
    pub fn reverse(&self) -> Pencil {
        Pencil {
            g0: self.g1.clone(),
            g1: self.g0.clone(),
        }
    }

    pub fn block_diag(blocks: &[Pencil], field: FieldSpec) -> Pencil {
        let g0s: Vec<ScalarMat> = blocks.iter().map(|b| b.g0.clone()).collect();
        let g1s: Vec<ScalarMat> = blocks.iter().map(|b| b.g1.clone()).collect();
        Pencil {
            g0: Mat::block_diag(&g0s, field),
            g1: Mat::block_diag(&g1s, field),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Pencil {
        Pencil {
            g0: self.g0.submatrix(rows, cols),
            g1: self.g1.submatrix(rows, cols),
        }
    }
}

/// First candidate at which the pencil evaluates to an invertible matrix,
/// or `None` if every candidate fails.
pub fn spectrum_witness(a: &Pencil, candidates: &[SpecPoint]) -> Option<SpecPoint> {
    assert!(a.is_square(), "witness search needs a square pencil");
    candidates
        .iter()
        .find(|c| !a.eval(c).det().is_zero())
        .cloned()
}

/// The default candidate order `(∞, 0, 1, 2, ...)`; for a finite field the
/// stream is the whole projective line.
pub fn candidate_points(field: FieldSpec, limit: usize) -> Vec<SpecPoint> {
    let mut out = vec![SpecPoint::Infinity];
    match field.size() {
        Some(p) => out.extend((0..p).map(|v| SpecPoint::Finite(field.from_i64(v as i64)))),
        None => out.extend((0..limit as i64).map(|v| SpecPoint::Finite(field.from_i64(v)))),
    }
    out
}
