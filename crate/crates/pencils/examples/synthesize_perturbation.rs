//! Construct a perturbation pencil of exact rank with a verified
//! certificate.
//!
//! ```bash
//! cargo run --example synthesize_perturbation
//! ```

use pencils::field::FieldSpec;
use pencils::mat::Mat;
use pencils::synth::{synthesize, SynthOptions, SynthRequest, SynthTarget};
use pencils::weier::weierstrass_structure;
use pencils::Pencil;

fn main() {
    let f = FieldSpec::Rationals;
    let a = Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
        if i == j {
            f.from_i64(-1)
        } else {
            f.zero()
        }
    }));
    let b = Pencil::monic(Mat::from_fn(3, 3, f, |i, j| {
        if i == j && i < 2 {
            f.from_i64(-1)
        } else {
            f.zero()
        }
    }));
    println!("A = diag(s-1, s-1, s-1), B = diag(s-1, s-1, s)");

    for rank in [1usize, 2] {
        let cert = synthesize(
            &SynthRequest {
                a: a.clone(),
                target: SynthTarget::Pencil(b.clone()),
                rank,
            },
            &SynthOptions::default(),
        )
        .unwrap();
        println!("\nrank {rank} certificate (path {:?}):", cert.path);
        for i in 0..3 {
            let row: Vec<String> = (0..3)
                .map(|j| {
                    let e = pencils::Poly::new(
                        f,
                        vec![cert.p.g0().at(i, j).clone(), cert.p.g1().at(i, j).clone()],
                    );
                    format!("{e}")
                })
                .collect();
            println!("  [{}]", row.join(", "));
        }
        let achieved = weierstrass_structure(&a.add(&cert.p)).unwrap();
        println!("  normal rank: {}", cert.p.normal_rank());
        println!("  achieved structure: {achieved}");
    }

    // rank 0 is provably impossible: the structures differ
    let refused = synthesize(
        &SynthRequest {
            a,
            target: SynthTarget::Pencil(b),
            rank: 0,
        },
        &SynthOptions::default(),
    );
    println!("\nrank 0: {}", refused.err().unwrap());
}
