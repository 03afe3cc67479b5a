//! Compute the complete strict-equivalence invariant of a regular pencil.
//!
//! ```bash
//! cargo run --example analyze_structure
//! ```

use pencils::field::{FieldSpec, SpecPoint};
use pencils::mat::Mat;
use pencils::weier::weierstrass_structure;
use pencils::Pencil;

fn main() {
    let f = FieldSpec::Rationals;

    // diag(s-1, s-1, s): two eigenvalues, no infinite part
    let g0 = Mat::from_rows(
        f,
        vec![
            vec![f.from_i64(-1), f.zero(), f.zero()],
            vec![f.zero(), f.from_i64(-1), f.zero()],
            vec![f.zero(), f.zero(), f.zero()],
        ],
    );
    let a = Pencil::new(g0, Mat::identity(3, f)).unwrap();

    println!("pencil: diag(s-1, s-1, s) over {}", a.field());
    println!("regular: {}", a.is_regular().unwrap());
    println!("det: {}", a.det_poly().unwrap());

    let s = weierstrass_structure(&a).unwrap();
    println!("homogeneous invariant factors: {s}");
    for pt in s.spectrum_in_field().unwrap() {
        println!(
            "eigenvalue {pt}: algebraic multiplicity {}, per-factor {:?}",
            s.mu_a(&pt),
            s.mult_seq(&pt)
        );
    }

    // a pencil with infinite elementary divisors: diag(1, s-1) has a
    // rank-deficient leading coefficient
    let b = Pencil::new(
        Mat::from_rows(
            f,
            vec![vec![f.one(), f.zero()], vec![f.zero(), f.from_i64(-1)]],
        ),
        Mat::from_rows(f, vec![vec![f.zero(), f.zero()], vec![f.zero(), f.one()]]),
    )
    .unwrap();
    let sb = weierstrass_structure(&b).unwrap();
    println!("\npencil: diag(1, s-1)");
    println!("homogeneous invariant factors: {sb}");
    println!(
        "multiplicity at infinity: {}",
        sb.mu_a(&SpecPoint::Infinity)
    );
}
