//! Problem documents bundled with the crate.

use std::path::Path;

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "two_component",
        text: include_str!("../examples/two_component.json"),
    },
    Fixture {
        name: "trinomial",
        text: include_str!("../examples/trinomial.json"),
    },
    Fixture {
        name: "trinomial_mixed",
        text: include_str!("../examples/trinomial_mixed.json"),
    },
    Fixture {
        name: "tri3d",
        text: include_str!("../examples/tri3d.json"),
    },
    Fixture {
        name: "bihan",
        text: include_str!("../examples/bihan.json"),
    },
    Fixture {
        name: "haas_like",
        text: include_str!("../examples/haas_like.json"),
    },
];

/// Looks a fixture up by name or by the stem of a path such as
/// `examples/haas_like.json`.
pub fn fixture(name_or_path: &str) -> Option<&'static Fixture> {
    let stem = Path::new(name_or_path).file_stem()?.to_str()?;
    FIXTURES.iter().find(|f| f.name == stem)
}
