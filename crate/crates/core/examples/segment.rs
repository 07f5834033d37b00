//! Overlapping trinomials: solutions on the segment and the rule of signs.
//!
//! cargo run --example segment

use fewnomial::fixtures::fixture;
use fewnomial::framework::residual;
use fewnomial::io::parse_problem;
use fewnomial::trinomials::{segment_rule_of_signs, segment_solve, SegmentProblem};

fn main() -> fewnomial::Result<()> {
    let p = parse_problem(fixture("bihan").unwrap().text)?;
    let sp = SegmentProblem::new(&p)?;
    println!("q = {:?}", sp.q_tilde.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    println!("b = {:?}, partial sums {:?}", sp.b, sp.partial_sums);
    println!("bound 1 + sgnvar = {}", segment_rule_of_signs(&sp));
    for r in segment_solve(&sp)? {
        println!("t = {:+.10}  x = {:.10?}  residual {:.1e}", r.t, r.x, residual(&p, &r.x));
    }
    Ok(())
}
