//! Place the determinant of a perturbed pencil at fixed rank.
//!
//! ```bash
//! cargo run --example determinant_placement
//! ```

use pencils::field::FieldSpec;
use pencils::mat::Mat;
use pencils::place::{place, placeable_poly, PlacementRequest, PlacementTarget};
use pencils::poly::Poly;
use pencils::synth::SynthOptions;
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
    println!("A = diag(s-1, s-1, s-1), det A = (s-1)^3");

    // reachable determinant at rank 1: q = s (s-1)^2
    let q = Poly::from_i64(f, &[0, 1, -2, 1]);
    println!("\ntarget det q = {q}, rank 1");
    println!("feasible: {}", placeable_poly(&a, 1, &q).unwrap());
    let cert = place(
        &PlacementRequest {
            a: a.clone(),
            rank: 1,
            target: PlacementTarget::Determinant(q.clone()),
        },
        &SynthOptions::default(),
    )
    .unwrap();
    let det = a.add(&cert.synth.p).det_poly().unwrap();
    println!("achieved det = {det} = {} * ({q})", cert.k);

    // infeasible at rank 0: the first n - r invariant factors must divide
    let q2 = Poly::from_i64(f, &[0, 0, 0, 1]); // s^3
    println!("\ntarget det q = {q2}, rank 2");
    println!("feasible: {}", placeable_poly(&a, 2, &q2).unwrap());
    match place(
        &PlacementRequest {
            a,
            rank: 2,
            target: PlacementTarget::Determinant(q2),
        },
        &SynthOptions::default(),
    ) {
        Err(e) => println!("refused: {e}"),
        Ok(_) => unreachable!("the divisibility condition fails"),
    }
}
