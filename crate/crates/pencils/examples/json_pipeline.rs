//! The JSON formats used by the `pencils` binary, driven from the library.
//!
//! Writes a pencil file, synthesizes a certificate, serializes it, and
//! re-verifies the parsed copy from scratch - the same pipeline as
//! `pencils synth` followed by `pencils verify`.
//!
//! ```bash
//! cargo run --example json_pipeline
//! ```

use pencils::field::FieldSpec;
use pencils::io;
use pencils::mat::Mat;
use pencils::synth::{synthesize, verify_certificate, SynthOptions, SynthRequest, SynthTarget};
use pencils::weier::weierstrass_structure;
use pencils::Pencil;

fn main() {
    let f = FieldSpec::prime_field(5).unwrap();
    let a = Pencil::monic(Mat::from_fn(2, 2, f, |i, j| {
        if i == j {
            f.from_i64(1 + i as i64)
        } else {
            f.zero()
        }
    }));
    let b = Pencil::monic(Mat::from_fn(2, 2, f, |i, j| {
        if i == j {
            f.from_i64(3)
        } else {
            f.one()
        }
    }));

    let a_text = io::to_canonical_string(&io::pencil_to_dto(&a)).unwrap();
    println!("pencil file:\n{a_text}");
    let parsed = io::pencil_from_dto(&serde_json::from_str(&a_text).unwrap()).unwrap();
    assert_eq!(parsed, a, "bit-exact round trip");

    let psi = weierstrass_structure(&b).unwrap();
    let cert = synthesize(
        &SynthRequest {
            a: a.clone(),
            target: SynthTarget::Pencil(b),
            rank: 2,
        },
        &SynthOptions::default(),
    )
    .unwrap();
    let cert_text = io::to_canonical_string(&io::certificate_to_dto(&cert, &psi, None)).unwrap();
    println!("certificate file:\n{cert_text}");

    // independent re-verification of the parsed certificate
    verify_certificate(&a, &psi, &cert).unwrap();
    println!("verification: pass");
}
