//! Wronskians of sign-characteristic functions and the bounds built on them.
//!
//! cargo run --example wronskian

use fewnomial::linalg::ratio;
use fewnomial::signchar::{koiran_bound, rolle_refined_bound, wronskian_exact};
use fewnomial::trinomials::tnomial_table_row;

fn main() -> fewnomial::Result<()> {
    let one = (ratio(0, 1), ratio(0, 1));
    let families = [
        vec![one.clone(), (ratio(1, 1), ratio(2, 1))],
        vec![one.clone(), (ratio(-1, 5), ratio(24, 5)), (ratio(1, 5), ratio(1, 5))],
        vec![one, (ratio(2, 1), ratio(0, 1)), (ratio(0, 1), ratio(2, 1))],
    ];
    let mut zeros = Vec::new();
    for f in &families {
        let w = wronskian_exact(f)?;
        let z = w.zeros().unwrap_or(0);
        println!("W{:?}: {} zero(s) in (0,1) at {:.6?}", f.iter().map(|(a, b)| format!("s_{{{a},{b}}}")).collect::<Vec<_>>(), z, w.zero_locations());
        zeros.push(z);
    }
    println!("Koiran-style bound from Wronskian zeros {:?}: {}", zeros, koiran_bound(&zeros));
    println!("Rolle bound with 2 zeros of f': {}", rolle_refined_bound(2, None));

    println!("t  bound  2^t-2  (2/3)t^3+5t");
    for t in [3, 4, 5, 6, 10] {
        let row = tnomial_table_row(t)?;
        println!("{t:<2} {:<6} {:<6} {}", row.bound, row.exponential, row.cubic);
    }
    Ok(())
}
