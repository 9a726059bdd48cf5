//! Nominal terms, permutations, substitutions and positions.

mod fresh;
mod names;
mod perm;
mod position;
mod signature;
mod subst;
mod term;

pub use fresh::{fresh_atom_from, fresh_variable, fresh_variable_from, fresh_variable_like};
pub use names::{Atom, Symbol, Var};
pub use perm::Perm;
pub use position::{paths, subterms_with_positions, Position};
pub use signature::Signature;
pub use subst::Substitution;
pub use term::Term;

/// `π·a`.
pub fn permute_atom(pi: &Perm, a: &Atom) -> Atom {
    pi.apply(a)
}

/// `π·t`.
pub fn permute_term(pi: &Perm, t: &Term) -> Term {
    t.permute(pi)
}

/// `ds(π, π′)`.
pub fn difference_set(pi: &Perm, rho: &Perm) -> std::collections::BTreeSet<Atom> {
    pi.difference_set(rho)
}

/// `tθ`.
pub fn apply_subst(theta: &Substitution, t: &Term) -> Term {
    theta.apply(t)
}
