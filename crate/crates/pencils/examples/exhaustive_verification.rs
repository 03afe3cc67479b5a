//! Brute-force ground truth on a small field.
//!
//! Enumerates all 2^8 perturbation pencils of a 2x2 base over GF(2),
//! buckets them by exact rank, and compares the reachable structure sets
//! against the interlacing predicate. Reachable-but-predicate-failing
//! entries would falsify the necessity direction and never appear;
//! predicate-passing-but-unreachable entries can only occur when no
//! constructive hypothesis applies.
//!
//! ```bash
//! cargo run --release --example exhaustive_verification
//! ```

use pencils::field::FieldSpec;
use pencils::mat::Mat;
use pencils::oracle::{all_structures, compare};
use pencils::Pencil;

fn main() {
    let f = FieldSpec::prime_field(2).unwrap();
    let a = Pencil::monic(Mat::from_fn(2, 2, f, |i, j| {
        if i == j && i == 0 {
            f.one()
        } else {
            f.zero()
        }
    }));
    println!("base pencil: diag(s+1, s) over GF(2)");
    println!(
        "universe: {} valid structures of size 2",
        all_structures(f, 2).len()
    );

    for r in 0..=2usize {
        let report = compare(&a, r, 24).unwrap();
        println!(
            "\nrank {r}: reachable {}, predicate {}, missing {}, extra {}",
            report.reachable.len(),
            report.predicate.len(),
            report.missing.len(),
            report.extra.len()
        );
        assert!(report.extra.is_empty(), "necessity is unconditional");
        for (s, app) in &report.missing {
            println!(
                "  unreachable {s}: witness {:?}, shared point {:?}",
                app.witness_c.as_ref().map(ToString::to_string),
                app.shared_multiplicity_lambda0
                    .as_ref()
                    .map(ToString::to_string),
            );
        }
        for s in &report.reachable {
            println!("  reachable: {s}");
        }
    }
}
