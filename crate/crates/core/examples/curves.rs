//! Solution curves of two trinomials in three variables.
//!
//! cargo run --example curves

use fewnomial::fixtures::fixture;
use fewnomial::io::parse_problem;
use fewnomial::trinomials::{curve_from_instance, curve_parametrize_d1};

fn main() -> fewnomial::Result<()> {
    for (b, c_star) in [((1.0, 2.0, -2.0), 2.0), ((1.0, 2.0, 2.0), 2.0), ((-1.0, -2.0, -2.0), 1.01 * 6.75 * 6.75)] {
        let curve = curve_parametrize_d1(b.0, b.1, b.2, c_star)?;
        println!(
            "b={b:?} c*={c_star:.4}: {} component(s), threshold {:?}",
            curve.components.len(),
            curve.threshold
        );
        for (k, comp) in curve.components.iter().enumerate() {
            let first = comp.points.first().unwrap().lambda;
            let last = comp.points.last().unwrap().lambda;
            println!("    {k}: {} points from {first:.4?} to {last:.4?}, closed={}", comp.points.len(), comp.closed);
        }
    }
    match curve_parametrize_d1(-1.0, -2.0, -2.0, 0.99 * 6.75 * 6.75) {
        Err(e) => println!("below the threshold: {e}"),
        Ok(c) => println!("unexpected: {} components", c.components.len()),
    }

    let p = parse_problem(fixture("tri3d").unwrap().text)?;
    let ic = curve_from_instance(&p)?;
    let csv = ic.to_csv();
    println!("tri3d curve: {} csv rows, header {}", csv.lines().count() - 1, csv.lines().next().unwrap());
    Ok(())
}
