//! Perturbing a pencil whose structure lives at infinity.
//!
//! The base pencil has chain (1, 1, t, t^2, t^2) - all of its spectrum sits
//! at infinity - and the target (1, 1, s-t, s-t, (s-t)^3) sits at 1. The
//! smallest feasible rank is 3; the construction moves a joint
//! non-eigenvalue (here 0) to infinity first, works in `sI + A`
//! coordinates, and maps the answer back.
//!
//! ```bash
//! cargo run --example infinite_structure
//! ```

use pencils::field::FieldSpec;
use pencils::reach::min_rank;
use pencils::synth::{synthesize, SynthOptions, SynthRequest, SynthTarget};
use pencils::weier::{canonical_pencil, WeierstrassStructure};

fn main() {
    let f = FieldSpec::prime_field(3).unwrap();
    let phi = WeierstrassStructure::from_parts(
        f,
        &[(0, &[1]), (0, &[1]), (1, &[1]), (2, &[1]), (2, &[1])],
    )
    .unwrap();
    let psi = WeierstrassStructure::from_parts(
        f,
        &[
            (0, &[1]),
            (0, &[1]),
            (0, &[-1, 1]),
            (0, &[-1, 1]),
            (0, &[-1, 3, -3, 1]),
        ],
    )
    .unwrap();
    println!("phi = {phi}");
    println!("psi = {psi}");
    println!("min rank: {}", min_rank(&phi, &psi).unwrap());

    let a = canonical_pencil(&phi).unwrap();
    for rank in 0..=5usize {
        let res = synthesize(
            &SynthRequest {
                a: a.clone(),
                target: SynthTarget::Structure(psi.clone()),
                rank,
            },
            &SynthOptions::default(),
        );
        match res {
            Ok(cert) => println!(
                "rank {rank}: certificate found, path {:?}, achieved {}",
                cert.path, cert.achieved
            ),
            Err(e) => println!("rank {rank}: {e}"),
        }
    }
}
