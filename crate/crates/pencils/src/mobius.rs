//! Invertible changes of projective variable.
//!
//! A map is a matrix `X = [x y; z w]` in `Gl_2(F)`. It acts on pencils
//! (`crate::pencil::Pencil::mobius`) and on homogeneous polynomials
//! (`crate::homog::HomogPoly::mobius`), moving eigenvalues around the
//! projective line; the main use is moving a non-eigenvalue to infinity so
//! that a pencil acquires an invertible leading coefficient.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
    pub w: Scalar,
}

impl MobiusMap {
    pub fn new(x: Scalar, y: Scalar, z: Scalar, w: Scalar) -> Result<MobiusMap> {
        let f = x.field();
        if y.field() != f || z.field() != f || w.field() != f {
            return Err(Error::FieldMismatch("mobius map entries".into()));
        }
        let m = MobiusMap { x, y, z, w };
        if m.det().is_zero() {
            return Err(Error::InvalidArgument(
                "mobius map must be invertible".into(),
            ));
        }
        Ok(m)
    }

    pub fn field(&self) -> FieldSpec {
        self.x.field()
    }

    pub fn det(&self) -> Scalar {
        &(&self.x * &self.w) - &(&self.y * &self.z)
    }

    pub fn identity(field: FieldSpec) -> MobiusMap {
        MobiusMap {
            x: field.one(),
            y: field.zero(),
            z: field.zero(),
            w: field.one(),
        }
    }

    /// `[0 1; 1 0]`: swaps the roles of zero and infinity.
    pub fn swap(field: FieldSpec) -> MobiusMap {
        MobiusMap {
            x: field.zero(),
            y: field.one(),
            z: field.one(),
            w: field.zero(),
        }
    }

    /// `[c 1; 1 0]`: sends the finite point `c` to infinity.
    pub fn to_infinity(c: Scalar) -> MobiusMap {
        let f = c.field();
        MobiusMap {
            x: c,
            y: f.one(),
            z: f.one(),
            w: f.zero(),
        }
    }

    /// `[1 c; 0 1]`: translates eigenvalues, sending `c` to zero.
    pub fn shift_to_zero(c: Scalar) -> MobiusMap {
        let f = c.field();
        MobiusMap {
            x: f.one(),
            y: c,
            z: f.zero(),
            w: f.one(),
        }
    }

    /// The true matrix inverse, so that the induced pencil and polynomial
    /// actions invert exactly rather than up to a scalar.
    pub fn inverse(&self) -> MobiusMap {
        let d = self.det().inv().expect("invertible by construction");
        MobiusMap {
            x: &self.w * &d,
            y: &(-&self.y) * &d,
            z: &(-&self.z) * &d,
            w: &self.x * &d,
        }
    }
}
