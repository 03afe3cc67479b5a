//! Exact analysis of regular matrix pencils.
//!
//! The crate computes the complete strict-equivalence invariant of a regular
//! pencil (its homogeneous invariant factors), decides which invariants are
//! reachable by a perturbation pencil of fixed rank, constructs certifying
//! perturbations, and solves the fixed-rank determinant placement problem.
//! All arithmetic is exact, over Q or GF(p).
//!
//! Start with [`pencil::Pencil`] and [`weier::weierstrass_structure`], then
//! [`reach`] for the decision predicates and [`synth::synthesize`] for
//! constructive certificates. The `examples/` directory walks through each
//! capability; a thin `pencils` binary exposes the same operations on JSON
//! files.
//!
//! ```
//! use pencils::{FieldSpec, Mat, Pencil};
//! use pencils::reach::min_rank;
//! use pencils::synth::{synthesize, SynthOptions, SynthRequest, SynthTarget};
//! use pencils::weier::weierstrass_structure;
//!
//! // diag(s-1, s-1, s-1) and diag(s-1, s-1, s)
//! let f = FieldSpec::Rationals;
//! let diag = |c: [i64; 3]| {
//!     Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
//!         if i == j { f.from_i64(c[i]) } else { f.zero() }
//!     }))
//! };
//! let a = diag([-1, -1, -1]);
//! let b = diag([-1, -1, 0]);
//!
//! let phi = weierstrass_structure(&a)?;
//! let psi = weierstrass_structure(&b)?;
//! assert_eq!(min_rank(&phi, &psi)?, 1);
//!
//! // a certified perturbation of rank exactly 2
//! let cert = synthesize(
//!     &SynthRequest { a: a.clone(), target: SynthTarget::Pencil(b), rank: 2 },
//!     &SynthOptions::default(),
//! )?;
//! assert_eq!(cert.p.normal_rank(), 2);
//! assert_eq!(weierstrass_structure(&a.add(&cert.p))?, psi);
//! # Ok::<(), pencils::Error>(())
//! ```

pub mod error;
pub mod field;
pub mod homog;
pub mod io;
pub mod mat;
pub mod mobius;
pub mod oracle;
pub mod pencil;
pub mod place;
pub mod poleplace;
pub mod poly;
pub mod reach;
pub mod smith;
pub mod split;
pub mod synth;
pub mod weier;

pub use error::{Error, Refusal, Result};
pub use field::{FieldSpec, Scalar, SpecPoint};
pub use homog::HomogPoly;
pub use mat::{Mat, PolyMat, ScalarMat};
pub use mobius::MobiusMap;
pub use pencil::Pencil;
pub use poly::Poly;
pub use synth::{SynthCertificate, SynthOptions, SynthRequest, SynthStep, SynthTarget};
pub use weier::WeierstrassStructure;
