use std::fmt;

use super::{Substitution, Term, Var};

/// A position in a term: the context obtained by replacing one subterm with
/// the hole `_`, together with the path (argument indices, `0` for an
/// abstraction body) leading to the hole.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    path: Vec<usize>,
    context: Term,
}

impl Position {
    pub fn root() -> Position {
        Position { path: Vec::new(), context: Term::hole() }
    }

    /// The position of `path` inside `t`, or `None` if the path is invalid.
    pub fn in_term(t: &Term, path: &[usize]) -> Option<Position> {
        let context = t.replace_at(path, Term::hole())?;
        Some(Position { path: path.to_vec(), context })
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn context(&self) -> &Term {
        &self.context
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    /// `C[s]`.
    pub fn plug(&self, s: &Term) -> Term {
        Substitution::single(Var::hole(), s.clone()).apply(&self.context)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.context)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {:?}", self.context, self.path)
    }
}

/// Every decomposition `t ≡ C[s]`, leftmost-outermost and root first.
pub fn subterms_with_positions(t: &Term) -> Vec<(Position, Term)> {
    let mut paths = Vec::new();
    collect_paths(t, &mut Vec::new(), &mut paths);
    paths
        .into_iter()
        .map(|path| {
            let sub = t.subterm_at(&path).expect("collected path").clone();
            let pos = Position::in_term(t, &path).expect("collected path");
            (pos, sub)
        })
        .collect()
}

/// Paths of all subterms in the same order as [`subterms_with_positions`].
pub fn paths(t: &Term) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    collect_paths(t, &mut Vec::new(), &mut out);
    out
}

fn collect_paths(t: &Term, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(prefix.clone());
    match t {
        Term::Abs(_, body) => {
            prefix.push(0);
            collect_paths(body, prefix, out);
            prefix.pop();
        }
        Term::App(_, args) => {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                collect_paths(a, prefix, out);
                prefix.pop();
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Symbol;

    #[test]
    fn atom_has_only_root() {
        let got = subterms_with_positions(&Term::atom("a"));
        assert_eq!(got.len(), 1);
        assert!(got[0].0.is_root());
        assert_eq!(got[0].0.context(), &Term::hole());
    }

    #[test]
    fn application_order() {
        let f = Symbol::new("f");
        let t = Term::app(f, vec![Term::atom("a"), Term::atom("b")]);
        let got: Vec<String> = subterms_with_positions(&t)
            .iter()
            .map(|(p, s)| format!("{p} | {s}"))
            .collect();
        assert_eq!(got, vec!["_ | f(a, b)", "f(_, b) | a", "f(a, _) | b"]);
    }

    #[test]
    fn abstraction_body_is_a_position() {
        let t = Term::abs("a", Term::var("X"));
        let got: Vec<String> = subterms_with_positions(&t)
            .iter()
            .map(|(p, s)| format!("{p} | {s}"))
            .collect();
        assert_eq!(got, vec!["_ | [a]X", "[a]_ | X"]);
    }
}
