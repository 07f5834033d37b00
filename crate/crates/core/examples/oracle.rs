//! Multistart Newton as an independent count of positive solutions.
//!
//! cargo run --release --example oracle

use fewnomial::fixtures::fixture;
use fewnomial::io::parse_problem;
use fewnomial::oracle::{grid_count, multistart_solve, OracleConfig};

fn main() -> fewnomial::Result<()> {
    for name in ["trinomial", "trinomial_mixed", "bihan", "haas_like"] {
        let p = parse_problem(fixture(name).unwrap().text)?;
        let xs = multistart_solve(&p, &OracleConfig::default().with_seed(7))?;
        println!("{name:<16} {} solution(s)", xs.len());
        for x in xs {
            println!("    {x:.10?}");
        }
    }

    // (x - 1/2)^2 (x - 3/4) on (0, 1): one tangential and one simple root
    let g = grid_count(|x| (x - 0.5) * (x - 0.5) * (x - 0.75), 0.0, 1.0, 1e-4);
    println!("grid: {} sign changes, tangential roots at {:.6?}", g.sign_changes, g.tangential);
    Ok(())
}
