use std::collections::BTreeSet;

use super::{solve_state, ProtectedVars, UnificationState};
use crate::alpha::{derive_alpha_c, entails_instance, Constraint, FreshnessContext};
use crate::syntax::{fresh_atom_from, fresh_variable_like, Substitution, Term, Var};

/// Outcome of comparing two solutions under `≤_C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generality {
    /// The general side instantiates to the specific one via this witness.
    MoreGeneral(Substitution),
    NotMoreGeneral,
    /// The bounded search could not decide.
    Unknown,
}

const CAP: usize = 20_000;

/// Is `(Δ₁, θ₁)` more general than `(Δ₂, θ₂)` on `vars`? Looks for `θ′` with
/// `Δ₂ ⊢ Xθ₁θ′ ≈ Xθ₂` for `X ∈ vars` and `Δ₂ ⊢ Δ₁θ′` by matching.
pub fn instance_of(
    general: (&FreshnessContext, &Substitution),
    specific: (&FreshnessContext, &Substitution),
    vars: &BTreeSet<Var>,
) -> Generality {
    let (d1, t1) = general;
    let (d2, t2) = specific;

    let mut general_vars = d1.vars();
    for x in vars {
        t1.lookup(x).collect_vars(&mut general_vars);
    }
    let mut protected = d2.vars();
    for x in vars {
        t2.lookup(x).collect_vars(&mut protected);
    }

    // Rename the general side apart so matching never confuses the two.
    let mut avoid: BTreeSet<Var> = general_vars.union(&protected).cloned().collect();
    avoid.extend(vars.iter().cloned());
    let mut renaming = Substitution::id();
    let mut back: Vec<(Var, Var)> = Vec::new();
    for y in &general_vars {
        let y2 = fresh_variable_like(&avoid, y);
        avoid.insert(y2.clone());
        renaming.insert(y.clone(), Term::var(y2.name()));
        back.push((y.clone(), y2));
    }

    let goals = vars
        .iter()
        .map(|x| Constraint::Equal(renaming.apply(&t1.lookup(x)), t2.lookup(x)))
        .collect();
    let mut ctx = FreshnessContext::new();
    for c in d1.iter() {
        ctx.insert(c.atom.clone(), back.iter().find(|(y, _)| *y == c.var).map(|(_, y2)| y2.clone()).expect("renamed"));
    }

    let init = UnificationState::new(ctx, goals);
    let sols = match solve_state(init, &ProtectedVars::from(protected), CAP) {
        Ok(s) => s,
        Err(_) => return Generality::Unknown,
    };

    let mut atoms = d1.atoms();
    atoms.extend(d2.atoms());
    for x in vars {
        atoms.extend(t1.lookup(x).atoms());
        atoms.extend(t2.lookup(x).atoms());
    }

    let mut undecided = false;
    for sol in sols {
        if !sol.residual.is_empty() {
            undecided = true;
            continue;
        }
        let mut witness = Substitution::id();
        for (y, y2) in &back {
            let image = match sol.subst.get(y2) {
                Some(t) => t.clone(),
                // A constrained variable left free can take a fresh atom.
                None if d1.iter().any(|c| c.var == *y) => Term::Atom(fresh_atom_from(&atoms, "c")),
                None => Term::var(y2.name()),
            };
            witness.insert(y.clone(), image);
        }
        let ok = vars.iter().all(|x| derive_alpha_c(d2, &witness.apply(&t1.lookup(x)), &t2.lookup(x)))
            && entails_instance(d2, d1, &witness);
        if ok {
            return Generality::MoreGeneral(witness);
        }
        if !sol.discharged.is_empty() {
            undecided = true;
        }
    }
    if undecided {
        Generality::Unknown
    } else {
        Generality::NotMoreGeneral
    }
}
