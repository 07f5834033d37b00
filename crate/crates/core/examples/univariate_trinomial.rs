//! Roots of c1 x^b1 + c2 x^b2 = 1 through sign-characteristic functions.
//!
//! cargo run --example univariate_trinomial

use fewnomial::signchar::{sc_extremum, trinomial_solve, SignCharParams};

fn main() -> fewnomial::Result<()> {
    let cases = [
        (2.0, 1.0, 1.0, 1.0),
        (2.0, -1.0, 1.0, 0.3),
        (2.0, -1.0, 1.0, 1.0),
        (1.0, -1.0, 0.25, 0.25),
        (0.5, -1.5, 1.0, 1.0),
    ];
    for (b1, b2, c1, c2) in cases {
        let s = trinomial_solve(b1, b2, c1, c2)?;
        let roots: Vec<String> = s
            .roots
            .iter()
            .map(|r| format!("{:.10} (m={})", r.x, r.multiplicity))
            .collect();
        println!(
            "{c1} x^{b1} + {c2} x^{b2} = 1: discriminant {:?}, roots [{}]",
            s.discriminant,
            roots.join(", ")
        );
    }

    // extrema that decide the mixed-sign case
    for (a, b) in [(1.0, 2.0), (-1.0, -2.0), (1.0, -2.0)] {
        let e = sc_extremum(SignCharParams::new(a, b));
        println!("s_{{{a},{b}}}: {:?} at {:.6?} value {:.6?}", e.kind, e.lambda_star, e.value);
    }
    Ok(())
}
