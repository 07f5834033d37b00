//! Classification and coefficient geometry of every bundled fixture.
//!
//! cargo run --example classify

use fewnomial::fixtures::FIXTURES;
use fewnomial::framework::classify;
use fewnomial::io::parse_problem;
use fewnomial::linalg::format_rational;

fn main() -> fewnomial::Result<()> {
    for f in FIXTURES {
        let p = parse_problem(f.text)?;
        let c = classify(&p)?;
        println!(
            "{:<16} m={} n={} classes={} d={} dim L={} dim P={} {}",
            f.name,
            c.m,
            c.n,
            c.l,
            c.d,
            c.dim_l,
            c.dim_p,
            c.case.label()
        );
        for (k, class) in p.geometry()?.classes.iter().enumerate() {
            let rays: Vec<String> = class
                .rays
                .iter()
                .map(|r| format!("({})", r.iter().map(format_rational).collect::<Vec<_>>().join(",")))
                .collect();
            println!("    class {}: rays {}", k + 1, rays.join(" "));
        }
    }
    Ok(())
}
