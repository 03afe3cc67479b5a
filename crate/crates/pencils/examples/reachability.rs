//! Decide which ranks can turn one pencil into another.
//!
//! The reachability criterion for a rank-r perturbation is the interlacing
//! `φ_{i-r} | ψ_i | φ_{i+r}` between the homogeneous invariant factor
//! chains; the feasible ranks are exactly `min_rank ..= n`.
//!
//! ```bash
//! cargo run --example reachability
//! ```

use pencils::field::FieldSpec;
use pencils::mat::Mat;
use pencils::reach::{applicability_of_structures, const_rank_bound, interlace, min_rank};
use pencils::weier::weierstrass_structure;
use pencils::Pencil;

fn diag_monic(f: FieldSpec, consts: &[i64]) -> Pencil {
    let n = consts.len();
    Pencil::monic(Mat::from_fn(n, n, f, |i, j| {
        if i == j {
            f.from_i64(consts[i])
        } else {
            f.zero()
        }
    }))
}

fn main() {
    let f = FieldSpec::Rationals;
    let a = diag_monic(f, &[-1, -1, -1]); // diag(s-1, s-1, s-1)
    let b = diag_monic(f, &[-1, -1, 0]); // diag(s-1, s-1, s)

    let phi = weierstrass_structure(&a).unwrap();
    let psi = weierstrass_structure(&b).unwrap();
    println!("phi = {phi}");
    println!("psi = {psi}");

    for r in 0..=3 {
        let rep = interlace(&phi, &psi, r).unwrap();
        match rep.first_violation {
            None => println!("rank {r}: interlacing holds"),
            Some((i, side)) => {
                println!("rank {r}: fails at index {i} ({side:?})")
            }
        }
    }
    println!("min rank: {}", min_rank(&phi, &psi).unwrap());

    // the constant-matrix bound is strictly smaller here: a constant
    // perturbation of rank 2 cannot do the job, a pencil one can
    println!(
        "constant-perturbation bound (informational): {}",
        const_rank_bound(&a, &b).unwrap()
    );

    let app = applicability_of_structures(&phi, &psi).unwrap();
    println!(
        "joint non-eigenvalue: {:?}",
        app.witness_c.map(|c| c.to_string())
    );
}
