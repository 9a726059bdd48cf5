use std::fmt;
use std::sync::Arc;

/// An object-level name. Distinct names denote distinct atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

/// A meta-level unknown (`X`, `Y`, `Z`, ...).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

/// A term former. The commutative flag is fixed by the signature the term was
/// built against; two symbols with the same name always agree on it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    commutative: bool,
}

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Atom {
        Atom(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl Var {
    pub fn new(name: impl AsRef<str>) -> Var {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// The distinguished variable used as the hole of a position.
    pub fn hole() -> Var {
        Var::new("_")
    }

    pub fn is_hole(&self) -> bool {
        &*self.0 == "_"
    }
}

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Symbol {
        Symbol { name: Arc::from(name.as_ref()), commutative: false }
    }

    pub fn commutative(name: impl AsRef<str>) -> Symbol {
        Symbol { name: Arc::from(name.as_ref()), commutative: true }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.commutative {
            write!(f, "{}^C", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}
