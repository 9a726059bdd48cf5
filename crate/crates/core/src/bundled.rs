//! Systems and problem files shipped with the crate.

use crate::error::Result;
use crate::parse::{parse_system, SystemFile};

pub const PRENEX: &str = include_str!("../systems/prenex.nrs");
pub const EX22: &str = include_str!("../systems/ex22.nrs");
pub const EXAMPLE21: &str = include_str!("../systems/example21.nrs");
pub const EXAMPLE22: &str = include_str!("../systems/example22.nrs");
pub const EXAMPLE32: &str = include_str!("../systems/example32.nrs");
pub const EXAMPLE33: &str = include_str!("../systems/example33.nrs");
pub const EXAMPLE41: &str = include_str!("../systems/example41.nrs");

/// `(file name, contents)` of every bundled file.
pub const ALL: [(&str, &str); 7] = [
    ("prenex.nrs", PRENEX),
    ("ex22.nrs", EX22),
    ("example21.nrs", EXAMPLE21),
    ("example22.nrs", EXAMPLE22),
    ("example32.nrs", EXAMPLE32),
    ("example33.nrs", EXAMPLE33),
    ("example41.nrs", EXAMPLE41),
];

/// Looks a bundled file up by name, with or without the `.nrs` suffix.
pub fn lookup(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".nrs").unwrap_or(name);
    ALL.iter().find(|(n, _)| n.strip_suffix(".nrs") == Some(stem)).map(|(_, text)| *text)
}

pub fn prenex() -> SystemFile {
    parse_system(PRENEX).expect("bundled file parses")
}

pub fn ex22() -> SystemFile {
    parse_system(EX22).expect("bundled file parses")
}

pub fn load(name: &str) -> Option<Result<SystemFile>> {
    lookup(name).map(parse_system)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_file_parses() {
        for (name, text) in ALL {
            assert!(parse_system(text).is_ok(), "{name}");
        }
        assert_eq!(prenex().system.rules().len(), 6);
        assert_eq!(prenex().system.signature.commutative_symbols().len(), 2);
    }
}
