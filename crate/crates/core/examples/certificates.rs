//! Sign-vector certificates for uniqueness and unique existence.
//!
//! cargo run --example certificates

use fewnomial::fixtures::FIXTURES;
use fewnomial::framework::{certify_unique_existence, certify_uniqueness};
use fewnomial::io::parse_problem;

fn main() -> fewnomial::Result<()> {
    for f in FIXTURES {
        let p = parse_problem(f.text)?;
        let u = certify_uniqueness(&p)?;
        let e = certify_unique_existence(&p)?;
        let witness = |w: &Option<_>| match w {
            Some(w) => format!(" {w}"),
            None => String::new(),
        };
        println!(
            "{:<16} uniqueness {}{}  unique existence {}{}",
            f.name,
            u.holds,
            witness(&u.witness),
            e.holds,
            witness(&e.witness)
        );
    }
    Ok(())
}
