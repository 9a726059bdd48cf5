//! Rule-based nominal C-unification over triples `(Δ, θ, Pr)`.

mod fixpoint;
mod generality;
mod rules;

use std::collections::BTreeSet;

use crate::alpha::{check_problem, entails_instance, Constraint, FreshnessContext};
use crate::error::{Error, Result};
use crate::syntax::{Perm, Substitution, Term, Var};

pub use fixpoint::enumerate_fixpoint_solutions;
pub use generality::{instance_of, Generality};
pub use rules::{simplify_step, ProtectedVars, StepOutcome, UnificationState};

pub const DEFAULT_STATE_CAP: usize = 100_000;

/// A leaf of the branch tree: context, substitution and the fixed-point
/// equations `π·X ≈ X` left unsolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSolution {
    pub context: FreshnessContext,
    pub subst: Substitution,
    pub residual: Vec<(Perm, Var)>,
    /// Protected fixed points closed by adding `ds(π, id)#X` to the context.
    pub discharged: Vec<(Perm, Var)>,
}

impl CSolution {
    pub fn is_closed(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Explores the branch tree depth-first, aligned pairings first.
pub fn solve_state(init: UnificationState, protected: &ProtectedVars, cap: usize) -> Result<Vec<CSolution>> {
    let mut stack = vec![init];
    let mut seen = 0usize;
    let mut out: Vec<CSolution> = Vec::new();
    while let Some(state) = stack.pop() {
        seen += 1;
        if seen > cap {
            return Err(Error::StateCap { cap });
        }
        match simplify_step(&state, protected) {
            StepOutcome::Next(next) => stack.extend(next.into_iter().rev()),
            StepOutcome::Fail(_) => {}
            StepOutcome::Solved => push_unique(&mut out, leaf(state, protected)),
            StepOutcome::Stuck => push_unique(&mut out, leaf(state, protected)),
        }
    }
    Ok(out)
}

fn push_unique(out: &mut Vec<CSolution>, sol: CSolution) {
    if !out.contains(&sol) {
        out.push(sol);
    }
}

fn leaf(state: UnificationState, protected: &ProtectedVars) -> CSolution {
    let fixpoints = state.fixpoints().expect("leaf holds only fixed points");
    let mut context = state.context;
    let mut residual = Vec::new();
    let mut discharged = Vec::new();
    for (pi, x) in fixpoints {
        if protected.contains(&x) {
            for a in pi.support() {
                context.insert(a, x.clone());
            }
            discharged.push((pi, x));
        } else {
            residual.push((pi, x));
        }
    }
    residual.sort();
    residual.dedup();
    discharged.sort();
    discharged.dedup();
    CSolution { context, subst: state.subst, residual, discharged }
}

/// `(∇ ⊢ l) ≈? (Δ ⊢ s)` from the initial triple `(∇ ∪ Δ, Id, {l ≈ s})`.
pub fn solve(
    delta: &FreshnessContext,
    s: &Term,
    nabla: &FreshnessContext,
    l: &Term,
    protected: &ProtectedVars,
) -> Result<Vec<CSolution>> {
    solve_capped(delta, s, nabla, l, protected, DEFAULT_STATE_CAP)
}

pub fn solve_capped(
    delta: &FreshnessContext,
    s: &Term,
    nabla: &FreshnessContext,
    l: &Term,
    protected: &ProtectedVars,
    cap: usize,
) -> Result<Vec<CSolution>> {
    let init = UnificationState::new(nabla.union(delta), vec![Constraint::Equal(l.clone(), s.clone())]);
    solve_state(init, protected, cap)
}

/// Solves a whole problem `Pr` under `Δ` with nothing protected.
pub fn solve_problem(delta: &FreshnessContext, goals: Vec<Constraint>) -> Result<Vec<CSolution>> {
    solve_state(UnificationState::new(delta.clone(), goals), &ProtectedVars::none(), DEFAULT_STATE_CAP)
}

/// C-matching: only the variables of `l` and `∇` may be instantiated.
/// The caller renames `l` apart from `s`.
pub fn c_match(nabla: &FreshnessContext, l: &Term, delta: &FreshnessContext, s: &Term) -> Result<Vec<CSolution>> {
    let mut protected = s.vars();
    protected.extend(delta.vars());
    solve(delta, s, nabla, l, &ProtectedVars::from(protected))
}

/// Conditions (1)–(3) of a C-solution: `Δ′ ⊢ Δθ` and `Δ′ ⊢ Prθ`. The
/// accumulated substitution of `problem` is compared through [`instance_of`]
/// when it is not the identity.
pub fn check_solution(candidate: (&FreshnessContext, &Substitution), problem: &UnificationState) -> bool {
    let (ctx, theta) = candidate;
    if !entails_instance(ctx, &problem.context, theta) {
        return false;
    }
    let goals: Vec<Constraint> = problem.goals.iter().map(|g| g.apply(theta)).collect();
    if !check_problem(ctx, &goals) {
        return false;
    }
    if problem.subst.is_id() {
        return true;
    }
    let vars: BTreeSet<Var> = problem.subst.domain().chain(theta.domain()).cloned().collect();
    matches!(
        instance_of((&FreshnessContext::new(), &problem.subst), (ctx, theta), &vars),
        Generality::MoreGeneral(_)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Atom, Symbol};

    fn h(t: Term) -> Term {
        Term::app(Symbol::new("h"), vec![t])
    }

    fn fc(s: Term, t: Term) -> Term {
        Term::app(Symbol::commutative("fC"), vec![s, t])
    }

    fn oplus(s: Term, t: Term) -> Term {
        Term::app(Symbol::commutative("oplus"), vec![s, t])
    }

    fn ba_x() -> Term {
        fc(Term::abs("b", Term::abs("a", Term::var("X"))), Term::var("X"))
    }

    fn empty() -> FreshnessContext {
        FreshnessContext::new()
    }

    #[test]
    fn first_problem_has_one_solution() {
        let sols = solve(&empty(), &h(ba_x()), &empty(), &h(Term::var("Y")), &ProtectedVars::none()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].subst, Substitution::single(Var::new("Y"), ba_x()));
        assert!(sols[0].context.is_empty() && sols[0].is_closed());
    }

    #[test]
    fn second_problem_leaves_fixpoint() {
        let l = fc(Term::abs("a", Term::abs("b", Term::var("Z"))), Term::var("Z"));
        let sols = solve(&empty(), &ba_x(), &empty(), &l, &ProtectedVars::none()).unwrap();
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let hit = sols.iter().find(|s| s.subst == Substitution::single(Var::new("Z"), Term::var("X")));
        let hit = hit.expect("aligned branch");
        assert_eq!(hit.residual, vec![(ab, Var::new("X"))]);
    }

    #[test]
    fn atom_clash_is_unsolvable() {
        let sols = solve(&empty(), &Term::atom("a"), &empty(), &Term::atom("b"), &ProtectedVars::none()).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn matching_examples() {
        let f = |t| Term::app(Symbol::new("f"), vec![t]);
        let sols = c_match(&empty(), &Term::var("X"), &empty(), &f(Term::atom("a"))).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].subst, Substitution::single(Var::new("X"), f(Term::atom("a"))));
        assert!(c_match(&empty(), &f(Term::atom("a")), &empty(), &f(Term::atom("b"))).unwrap().is_empty());
    }

    #[test]
    fn protected_fixpoint_is_discharged() {
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let g = |s, t| Term::app(Symbol::new("g"), vec![s, t]);
        let l = g(Term::var("Z"), Term::var("Z"));
        let s = g(Term::Susp(ab.clone(), Var::new("X")), Term::var("X"));
        let sols = c_match(&empty(), &l, &empty(), &s).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].context, empty().with("a", "X").with("b", "X"));
        assert_eq!(sols[0].discharged, vec![(ab, Var::new("X"))]);
        assert!(sols[0].is_closed());
    }

    #[test]
    fn state_cap_is_reported() {
        let s = Term::abs("b", Term::var("X"));
        let l = Term::abs("a", Term::var("P"));
        let cap = solve_capped(&empty(), &s, &empty(), &l, &ProtectedVars::none(), 1);
        assert_eq!(cap, Err(Error::StateCap { cap: 1 }));
    }

    #[test]
    fn checks_listed_fixpoint_solutions() {
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let problem = UnificationState::new(
            empty(),
            vec![Constraint::Equal(Term::Susp(ab, Var::new("X")), Term::var("X"))],
        );
        let x = Var::new("X");
        let g = Term::app(Symbol::new("g"), vec![Term::app(Symbol::new("e"), vec![])]);
        let ab_ctx = empty().with("a", "X").with("b", "X");
        assert!(check_solution((&ab_ctx, &Substitution::single(x.clone(), g)), &problem));
        let sum = oplus(Term::atom("a"), Term::atom("b"));
        assert!(check_solution((&empty(), &Substitution::single(x.clone(), sum.clone())), &problem));
        let double = oplus(sum.clone(), sum);
        assert!(check_solution((&empty(), &Substitution::single(x.clone(), double)), &problem));
        assert!(!check_solution((&empty(), &Substitution::single(x, Term::atom("a"))), &problem));
    }
}
