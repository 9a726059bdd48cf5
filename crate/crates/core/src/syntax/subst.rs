use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Term, Var};

/// A finite map from variables to terms. Application is homomorphic and
/// possibly capturing: `([a]t)θ = [a](tθ)` and `(π·X)θ = π·(Xθ)`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn id() -> Substitution {
        Substitution::default()
    }

    pub fn single(x: Var, t: Term) -> Substitution {
        let mut s = Substitution::id();
        s.insert(x, t);
        s
    }

    /// Binds `x`. Trivial bindings `X ↦ X` are dropped.
    pub fn insert(&mut self, x: Var, t: Term) {
        if matches!(&t, Term::Susp(p, y) if p.is_id() && *y == x) {
            self.map.remove(&x);
        } else {
            self.map.insert(x, t);
        }
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn is_id(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    /// Variables occurring in the images.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// `Xθ`.
    pub fn lookup(&self, x: &Var) -> Term {
        self.map.get(x).cloned().unwrap_or_else(|| Term::Susp(Default::default(), x.clone()))
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Atom(_) => t.clone(),
            Term::Susp(p, x) => match self.map.get(x) {
                Some(image) => image.permute(p),
                None => t.clone(),
            },
            Term::Abs(a, body) => Term::Abs(a.clone(), Box::new(self.apply(body))),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|u| self.apply(u)).collect()),
        }
    }

    /// The substitution `self` followed by `then`: `t(self.then(then)) = (t self) then`.
    pub fn then(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::id();
        for (x, t) in &self.map {
            out.insert(x.clone(), then.apply(t));
        }
        for (x, t) in &then.map {
            if !self.map.contains_key(x) {
                out.insert(x.clone(), t.clone());
            }
        }
        out
    }

    /// Restriction to the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self.map.iter().filter(|(x, _)| vars.contains(*x)).map(|(x, t)| (x.clone(), t.clone())).collect(),
        }
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::id();
        for (x, t) in iter {
            s.insert(x, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
