//! Five positive solutions of two trinomials in two variables.
//!
//! cargo run --release --example two_trinomials

use fewnomial::fixtures::fixture;
use fewnomial::framework::residual;
use fewnomial::io::parse_problem;
use fewnomial::trinomials::{two_trinomial_bound, two_trinomial_solve, two_trinomial_standardize};

fn main() -> fewnomial::Result<()> {
    let p = parse_problem(fixture("haas_like").unwrap().text)?;
    let tp = two_trinomial_standardize(&p)?;
    println!("exponents {:?}, gamma {:?}", tp.exponents, tp.gamma);
    println!("bound {}", two_trinomial_bound(&tp)?);
    for r in two_trinomial_solve(&tp)? {
        println!("lambda = {:.12}  x = {:.12?}  residual {:.1e}", r.lambda, r.x, residual(&p, &r.x));
    }
    Ok(())
}
