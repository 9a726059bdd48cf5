use std::collections::BTreeSet;

use super::{check_solution, UnificationState};
use crate::alpha::{Constraint, FreshnessContext};
use crate::syntax::{Perm, Signature, Substitution, Term, Var};

/// Bounded generator of solutions to `π·X ≈ X`: first `(ds(π, id)#X, Id)`,
/// then `X ↦ t` for commutative terms `t` over the atoms moved by `π`, by
/// increasing depth up to `depth`. Every element is checked before emission.
pub fn enumerate_fixpoint_solutions(
    pi: &Perm,
    x: &Var,
    sig: &Signature,
    depth: usize,
) -> Vec<(FreshnessContext, Substitution)> {
    let problem = UnificationState::new(
        FreshnessContext::new(),
        vec![Constraint::Equal(Term::Susp(pi.clone(), x.clone()), Term::Susp(Perm::id(), x.clone()))],
    );
    let mut out = Vec::new();
    let mut fresh = FreshnessContext::new();
    for a in pi.support() {
        fresh.insert(a, x.clone());
    }
    if check_solution((&fresh, &Substitution::id()), &problem) {
        out.push((fresh, Substitution::id()));
    }

    let symbols = sig.commutative_symbols();
    // Terms by exact depth; arguments kept in order so that C-variants are
    // generated once.
    let mut levels: Vec<Vec<Term>> = vec![pi.support().into_iter().map(Term::Atom).collect()];
    let empty = FreshnessContext::new();
    for d in 1..=depth {
        let below: Vec<&Term> = levels.iter().flatten().collect();
        let mut level = BTreeSet::new();
        for f in &symbols {
            for (i, s) in below.iter().enumerate() {
                for t in &below[i..] {
                    if s.depth().max(t.depth()) + 1 == d {
                        level.insert(Term::app(f.clone(), vec![(*s).clone(), (*t).clone()]));
                    }
                }
            }
        }
        let level: Vec<Term> = level.into_iter().collect();
        for t in &level {
            let theta = Substitution::single(x.clone(), t.clone());
            if check_solution((&empty, &theta), &problem) {
                out.push((empty.clone(), theta));
            }
        }
        levels.push(level);
    }
    out
}
