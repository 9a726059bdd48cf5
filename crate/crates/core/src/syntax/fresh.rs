use std::collections::BTreeSet;

use super::{Atom, Var};

// Generated names carry an `_n` suffix on the base name, so a name that was
// itself generated gets a new suffix rather than a nested one.
fn base_of(name: &str) -> &str {
    match name.rfind('_') {
        Some(i) if i > 0 && name[i + 1..].chars().all(|c| c.is_ascii_digit()) && i + 1 < name.len() => &name[..i],
        _ => name,
    }
}

/// A variable not in `avoid`: the first of `X_0`, `X_1`, ...
pub fn fresh_variable(avoid: &BTreeSet<Var>) -> Var {
    fresh_variable_from(avoid, "X")
}

/// The first of `base_0`, `base_1`, ... not in `avoid`.
pub fn fresh_variable_from(avoid: &BTreeSet<Var>, base: &str) -> Var {
    let base = base_of(base);
    (0..)
        .map(|n| Var::new(format!("{base}_{n}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded counter")
}

/// `base` itself when unused, otherwise a suffixed variant.
pub fn fresh_variable_like(avoid: &BTreeSet<Var>, base: &Var) -> Var {
    if avoid.contains(base) {
        fresh_variable_from(avoid, base.name())
    } else {
        base.clone()
    }
}

/// The first of `base_0`, `base_1`, ... not in `avoid`.
pub fn fresh_atom_from(avoid: &BTreeSet<Atom>, base: &str) -> Atom {
    let base = base_of(base);
    (0..)
        .map(|n| Atom::new(format!("{base}_{n}")))
        .find(|a| !avoid.contains(a))
        .expect("unbounded counter")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn avoids_given_names() {
        let avoid: BTreeSet<Var> = [Var::new("X")].into_iter().collect();
        assert_eq!(fresh_variable(&avoid), Var::new("X_0"));
        let avoid: BTreeSet<Var> = [Var::new("X_0")].into_iter().collect();
        assert_eq!(fresh_variable(&avoid), Var::new("X_1"));
    }

    #[test]
    fn deterministic_on_empty_avoid() {
        assert_eq!(fresh_variable(&BTreeSet::new()), fresh_variable(&BTreeSet::new()));
    }

    #[test]
    fn successive_calls_differ() {
        let mut avoid = BTreeSet::new();
        let first = fresh_variable(&avoid);
        avoid.insert(first.clone());
        let second = fresh_variable(&avoid);
        assert_ne!(first, second);
    }

    #[test]
    fn generated_names_are_not_nested() {
        let avoid: BTreeSet<Var> = [Var::new("Q_0")].into_iter().collect();
        assert_eq!(fresh_variable_like(&avoid, &Var::new("Q_0")), Var::new("Q_1"));
        assert_eq!(fresh_variable_like(&avoid, &Var::new("Q")), Var::new("Q"));
    }
}
