use std::collections::BTreeMap;
use std::fmt;

use super::{Symbol, Term};
use crate::error::Error;

/// Declared term formers with their arities. Commutative symbols are binary.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Signature {
    entries: BTreeMap<String, (usize, bool)>,
    order: Vec<String>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn declare(&mut self, name: &str, arity: usize, commutative: bool) -> Result<Symbol, Error> {
        if commutative && arity != 2 {
            return Err(Error::Signature(format!("commutative symbol `{name}` must have arity 2, not {arity}")));
        }
        if let Some(&(a, c)) = self.entries.get(name) {
            if (a, c) != (arity, commutative) {
                return Err(Error::Signature(format!("symbol `{name}` declared twice with different shapes")));
            }
        } else {
            self.entries.insert(name.to_string(), (arity, commutative));
            self.order.push(name.to_string());
        }
        Ok(self.symbol(name).expect("just declared"))
    }

    /// Builder form of [`Signature::declare`] for fixed, known-good signatures.
    pub fn with(mut self, name: &str, arity: usize, commutative: bool) -> Signature {
        self.declare(name, arity, commutative).expect("valid declaration");
        self
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.entries.get(name).map(|&(_, c)| if c { Symbol::commutative(name) } else { Symbol::new(name) })
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.entries.get(name).map(|&(a, _)| a)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Symbols in declaration order.
    pub fn symbols(&self) -> Vec<(Symbol, usize)> {
        self.order
            .iter()
            .map(|n| (self.symbol(n).expect("declared"), self.entries[n].0))
            .collect()
    }

    pub fn commutative_symbols(&self) -> Vec<Symbol> {
        self.symbols().into_iter().filter(|(s, _)| s.is_commutative()).map(|(s, _)| s).collect()
    }

    /// Checks that every application in `t` uses a declared symbol with the
    /// declared arity and commutativity.
    pub fn check_term(&self, t: &Term) -> Result<(), Error> {
        match t {
            Term::Atom(_) | Term::Susp(..) => Ok(()),
            Term::Abs(_, body) => self.check_term(body),
            Term::App(f, args) => {
                let Some(&(arity, comm)) = self.entries.get(f.name()) else {
                    return Err(Error::Signature(format!("undeclared symbol `{}`", f.name())));
                };
                if arity != args.len() {
                    return Err(Error::Arity { symbol: f.name().to_string(), expected: arity, found: args.len() });
                }
                if comm != f.is_commutative() {
                    return Err(Error::Signature(format!("symbol `{}` used with the wrong commutativity", f.name())));
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in &self.order {
            let (arity, comm) = self.entries[name];
            if comm {
                writeln!(f, "  {name} : {arity} comm")?;
            } else {
                writeln!(f, "  {name} : {arity}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.order.iter().map(|n| (n, self.entries[n]))).finish()
    }
}
