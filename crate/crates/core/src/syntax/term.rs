use std::collections::BTreeSet;
use std::fmt;

use super::{Atom, Perm, Symbol, Var};

/// Nominal terms: atoms, suspensions `π·X`, abstractions `[a]t` and
/// applications `f(t1, ..., tn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(Atom),
    Susp(Perm, Var),
    Abs(Atom, Box<Term>),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    /// The bare variable `X`, i.e. `id·X`.
    pub fn var(name: &str) -> Term {
        Term::Susp(Perm::id(), Var::new(name))
    }

    pub fn susp(perm: Perm, var: Var) -> Term {
        Term::Susp(perm, var)
    }

    pub fn abs(a: &str, body: Term) -> Term {
        Term::Abs(Atom::new(a), Box::new(body))
    }

    pub fn app(sym: Symbol, args: Vec<Term>) -> Term {
        Term::App(sym, args)
    }

    pub fn hole() -> Term {
        Term::Susp(Perm::id(), Var::hole())
    }

    /// The variable of a suspension.
    pub fn as_susp(&self) -> Option<(&Perm, &Var)> {
        match self {
            Term::Susp(p, x) => Some((p, x)),
            _ => None,
        }
    }

    pub fn is_susp(&self) -> bool {
        matches!(self, Term::Susp(..))
    }

    /// Applies the permutation action: atoms are mapped, suspensions compose,
    /// binders are permuted and applications are mapped argument-wise.
    pub fn permute(&self, pi: &Perm) -> Term {
        if pi.is_id() {
            return self.clone();
        }
        match self {
            Term::Atom(a) => Term::Atom(pi.apply(a)),
            Term::Susp(p, x) => Term::Susp(pi.compose(p), x.clone()),
            Term::Abs(a, body) => Term::Abs(pi.apply(a), Box::new(body.permute(pi))),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|t| t.permute(pi)).collect()),
        }
    }

    /// Swaps two atoms throughout the term.
    pub fn swap(&self, a: &Atom, b: &Atom) -> Term {
        self.permute(&Perm::swap(a.clone(), b.clone()))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Atom(_) => {}
            Term::Susp(_, x) => {
                out.insert(x.clone());
            }
            Term::Abs(_, body) => body.collect_vars(out),
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, x: &Var) -> bool {
        match self {
            Term::Atom(_) => false,
            Term::Susp(_, y) => x == y,
            Term::Abs(_, body) => body.contains_var(x),
            Term::App(_, args) => args.iter().any(|t| t.contains_var(x)),
        }
    }

    /// Every atom mentioned anywhere, including binders and permutations.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                out.insert(a.clone());
            }
            Term::Susp(p, _) => out.extend(p.support()),
            Term::Abs(a, body) => {
                out.insert(a.clone());
                body.collect_atoms(out);
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_atoms(out)),
        }
    }

    /// Symbols used in the term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<Symbol>) {
            match t {
                Term::Abs(_, body) => go(body, out),
                Term::App(f, args) => {
                    out.insert(f.clone());
                    args.iter().for_each(|t| go(t, out));
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Atom(_) => true,
            Term::Susp(..) => false,
            Term::Abs(_, body) => body.is_ground(),
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Height of the syntax tree; atoms and suspensions have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 0,
            Term::Abs(_, body) => 1 + body.depth(),
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 1,
            Term::Abs(_, body) => 1 + body.size(),
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Number of commutative application nodes.
    pub fn commutative_nodes(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 0,
            Term::Abs(_, body) => body.commutative_nodes(),
            Term::App(f, args) => {
                usize::from(f.is_commutative()) + args.iter().map(Term::commutative_nodes).sum::<usize>()
            }
        }
    }

    pub fn subterm_at(&self, path: &[usize]) -> Option<&Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        match self {
            Term::Abs(_, body) if i == 0 => body.subterm_at(rest),
            Term::App(_, args) => args.get(i)?.subterm_at(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path`. Returns `None` when the path does not
    /// address a subterm.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        match self {
            Term::Abs(a, body) if i == 0 => Some(Term::Abs(a.clone(), Box::new(body.replace_at(rest, new)?))),
            Term::App(f, args) if i < args.len() => {
                let mut args = args.clone();
                args[i] = args[i].replace_at(rest, new)?;
                Some(Term::App(f.clone(), args))
            }
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Susp(p, x) if p.is_id() => write!(f, "{x}"),
            Term::Susp(p, x) => write!(f, "{p}.{x}"),
            Term::Abs(a, body) => write!(f, "[{a}]{body}"),
            Term::App(sym, args) => {
                write!(f, "{sym}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Atom {
        Atom::new(s)
    }

    #[test]
    fn permute_abstraction_moves_binder() {
        let t = Term::abs("a", Term::var("X"));
        let ab = Perm::swap(at("a"), at("b"));
        assert_eq!(t.permute(&ab), Term::Abs(at("b"), Box::new(Term::Susp(ab.clone(), Var::new("X")))));
    }

    #[test]
    fn permute_suspension_composes() {
        let ab = Perm::swap(at("a"), at("b"));
        let ac = Perm::swap(at("a"), at("c"));
        let t = Term::Susp(ac.clone(), Var::new("X"));
        assert_eq!(t.permute(&ab), Term::Susp(ab.compose(&ac), Var::new("X")));
    }

    #[test]
    fn permute_identity_is_noop() {
        let t = Term::app(Symbol::new("f"), vec![Term::atom("a"), Term::var("X")]);
        assert_eq!(t.permute(&Perm::id()), t);
    }

    #[test]
    fn display_forms() {
        let ab = Perm::swap(at("a"), at("b"));
        let t = Term::app(
            Symbol::commutative("fC"),
            vec![Term::abs("b", Term::abs("a", Term::var("X"))), Term::Susp(ab, Var::new("X"))],
        );
        assert_eq!(t.to_string(), "fC([b][a]X, (a b).X)");
        assert_eq!(Term::app(Symbol::new("e"), vec![]).to_string(), "e()");
    }

    #[test]
    fn replace_and_lookup() {
        let t = Term::app(Symbol::new("f"), vec![Term::atom("a"), Term::abs("b", Term::atom("c"))]);
        assert_eq!(t.subterm_at(&[1, 0]), Some(&Term::atom("c")));
        let u = t.replace_at(&[1, 0], Term::atom("d")).unwrap();
        assert_eq!(u.to_string(), "f(a, [b]d)");
        assert!(t.subterm_at(&[2]).is_none());
        assert!(t.replace_at(&[0, 0], Term::atom("d")).is_none());
    }
}
