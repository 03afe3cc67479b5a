//! When every point of the field is an eigenvalue.
//!
//! Over GF(2) the projective line has only three points, so a pair of
//! pencils can jointly cover all of them and no change of variable
//! produces an invertible leading coefficient. If some point carries the
//! same partial multiplicities in both chains, that block is split off,
//! the smaller problem is solved, and the common block absorbs any
//! remaining rank by a structure-preserving perturbation.
//!
//! ```bash
//! cargo run --example small_field_shared_point
//! ```

use pencils::field::{FieldSpec, SpecPoint};
use pencils::mat::Mat;
use pencils::reach::applicability_of_structures;
use pencils::synth::{synthesize, SynthOptions, SynthRequest, SynthTarget};
use pencils::weier::weierstrass_structure;
use pencils::Pencil;

fn main() {
    let f = FieldSpec::prime_field(2).unwrap();
    // diag(1, s-1, s-1, s-1) and diag(1, s-1, s-1, s)
    let diag = |consts: &[(i64, i64)]| {
        let n = consts.len();
        let mut g0 = Mat::zeros(n, n, f);
        let mut g1 = Mat::zeros(n, n, f);
        for (i, (c0, c1)) in consts.iter().enumerate() {
            g0.set(i, i, f.from_i64(*c0));
            g1.set(i, i, f.from_i64(*c1));
        }
        Pencil::new(g0, g1).unwrap()
    };
    let a = diag(&[(1, 0), (-1, 1), (-1, 1), (-1, 1)]);
    let b = diag(&[(1, 0), (-1, 1), (-1, 1), (0, 1)]);

    let phi = weierstrass_structure(&a).unwrap();
    let psi = weierstrass_structure(&b).unwrap();
    println!("phi = {phi}");
    println!("psi = {psi}");

    let app = applicability_of_structures(&phi, &psi).unwrap();
    println!(
        "joint spectrum covers GF(2) u {{inf}}: {}",
        app.joint_spectrum_covers_field
    );
    println!(
        "shared-multiplicity point: {}",
        app.shared_multiplicity_lambda0.as_ref().unwrap()
    );
    println!(
        "multiplicities at infinity: {:?} vs {:?}",
        phi.mult_seq(&SpecPoint::Infinity),
        psi.mult_seq(&SpecPoint::Infinity)
    );

    let cert = synthesize(
        &SynthRequest {
            a: a.clone(),
            target: SynthTarget::Pencil(b),
            rank: 2,
        },
        &SynthOptions::default(),
    )
    .unwrap();
    println!("\nrank 2 certificate, path {:?}", cert.path);
    println!("achieved: {}", cert.achieved);
    assert_eq!(weierstrass_structure(&a.add(&cert.p)).unwrap(), psi);
}
