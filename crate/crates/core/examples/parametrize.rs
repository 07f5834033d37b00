//! Dependency zero: the two-component system is solved by an explicit
//! parametrization over the coefficient polytope and L-perp.
//!
//! cargo run --example parametrize

use fewnomial::fixtures::fixture;
use fewnomial::framework::{residual, solution_set_d0};
use fewnomial::io::parse_problem;

fn main() -> fewnomial::Result<()> {
    let p = parse_problem(fixture("two_component").unwrap().text)?;
    let sp = solution_set_d0(&p)?;
    for line in sp.formulas() {
        println!("{line}");
    }
    println!("L-perp basis: {:?}", sp.l_perp);

    for lambda in [0.1, 0.5, 0.9] {
        for tau in [0.5_f64, 1.0, 2.0] {
            let w = sp.weights_from_free(&[lambda])?;
            let x = sp.evaluate(&w, &[tau.ln()])?;
            println!("lambda={lambda:.1} tau={tau:.1}  x={x:.6?}  residual={:.1e}", residual(&p, &x));
        }
    }
    Ok(())
}
