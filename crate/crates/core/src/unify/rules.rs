use std::collections::BTreeSet;
use std::fmt;

use crate::alpha::{Constraint, FreshnessContext};
use crate::syntax::{Perm, Substitution, Term, Var};

/// A triple `(Δ, θ, Pr)` of the rule-based algorithm.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnificationState {
    pub context: FreshnessContext,
    pub subst: Substitution,
    pub goals: Vec<Constraint>,
}

impl UnificationState {
    pub fn new(context: FreshnessContext, goals: Vec<Constraint>) -> Self {
        UnificationState { context, subst: Substitution::id(), goals }
    }

    /// Residual fixed-point goals `π·X ≈ X`, if these are the only goals left.
    pub fn fixpoints(&self) -> Option<Vec<(Perm, Var)>> {
        self.goals.iter().map(as_fixpoint).collect()
    }
}

impl fmt::Debug for UnificationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {:?})", self.context, self.subst, self.goals)
    }
}

/// Variables the algorithm must not instantiate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProtectedVars(BTreeSet<Var>);

impl ProtectedVars {
    pub fn none() -> Self {
        ProtectedVars::default()
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.contains(x)
    }

    pub fn vars(&self) -> &BTreeSet<Var> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<BTreeSet<Var>> for ProtectedVars {
    fn from(vars: BTreeSet<Var>) -> Self {
        ProtectedVars(vars)
    }
}

/// Result of one simplification step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// The selected rule fired; the commutativity rule yields two states.
    Next(Vec<UnificationState>),
    /// Some goal is unsatisfiable on this branch.
    Fail(String),
    /// Only fixed-point goals `π·X ≈ X` remain.
    Stuck,
    /// No goals remain.
    Solved,
}

// Rules in priority order, after the freshness rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EqRule {
    Refl,
    App,
    Comm,
    AbsSame,
    AbsDiff,
    Inv,
    Inst,
}

enum Kind {
    Fresh,
    Eq(EqRule),
    Fixpoint,
    Clash(String),
}

fn as_fixpoint(c: &Constraint) -> Option<(Perm, Var)> {
    match c {
        Constraint::Equal(Term::Susp(p, x), Term::Susp(q, y)) if x == y && q.is_id() && !p.is_id() => {
            Some((p.clone(), x.clone()))
        }
        _ => None,
    }
}

fn classify(goal: &Constraint, protected: &ProtectedVars) -> Kind {
    let (s, t) = match goal {
        Constraint::Fresh(a, Term::Atom(b)) if a == b => return Kind::Clash(format!("{a} # {b}")),
        Constraint::Fresh(..) => return Kind::Fresh,
        Constraint::Equal(s, t) => (s, t),
    };
    if s == t {
        return Kind::Eq(EqRule::Refl);
    }
    match (s, t) {
        (Term::Susp(_, x), Term::Susp(q, y)) if x == y => {
            if q.is_id() {
                Kind::Fixpoint
            } else {
                Kind::Eq(EqRule::Inv)
            }
        }
        (Term::Susp(..), _) | (_, Term::Susp(..)) => match inst_side(s, t, protected) {
            Some(_) => Kind::Eq(EqRule::Inst),
            None => Kind::Clash(format!("{s} =ac {t}")),
        },
        (Term::App(f, ss), Term::App(g, ts)) => {
            if f != g || ss.len() != ts.len() {
                Kind::Clash(format!("{f} vs {g}"))
            } else if f.is_commutative() && ss.len() == 2 {
                Kind::Eq(EqRule::Comm)
            } else {
                Kind::Eq(EqRule::App)
            }
        }
        (Term::Abs(a, _), Term::Abs(b, _)) => Kind::Eq(if a == b { EqRule::AbsSame } else { EqRule::AbsDiff }),
        _ => Kind::Clash(format!("{s} =ac {t}")),
    }
}

/// Which side of `s ≈ t` can be eliminated: the left one if it is an
/// unprotected suspension passing the occurs check, else the right one.
/// An occurs-check failure makes the goal unsolvable.
fn inst_side(s: &Term, t: &Term, protected: &ProtectedVars) -> Option<bool> {
    let eliminable = |side: &Term, other: &Term| match side {
        Term::Susp(_, x) => !protected.contains(x) && !other.contains_var(x),
        _ => false,
    };
    if eliminable(s, t) {
        Some(true)
    } else if eliminable(t, s) {
        Some(false)
    } else {
        None
    }
}

/// Applies the first applicable rule under the fixed priority: freshness
/// rules, then refl, app, C, `[aa]`, `[ab]`, inv, inst. The rewritten goal is
/// removed and the goals it produces are appended.
pub fn simplify_step(state: &UnificationState, protected: &ProtectedVars) -> StepOutcome {
    let kinds: Vec<Kind> = state.goals.iter().map(|g| classify(g, protected)).collect();
    if let Some(Kind::Clash(why)) = kinds.iter().find(|k| matches!(k, Kind::Clash(_))) {
        return StepOutcome::Fail(why.clone());
    }
    if let Some(i) = kinds.iter().position(|k| matches!(k, Kind::Fresh)) {
        return StepOutcome::Next(vec![fresh_rule(state, i)]);
    }
    let chosen = kinds
        .iter()
        .enumerate()
        .filter_map(|(i, k)| match k {
            Kind::Eq(r) => Some((*r, i)),
            _ => None,
        })
        .min();
    let Some((rule, i)) = chosen else {
        return if state.goals.is_empty() { StepOutcome::Solved } else { StepOutcome::Stuck };
    };
    let mut rest = state.clone();
    let Constraint::Equal(s, t) = rest.goals.remove(i) else { unreachable!("equality rule on freshness goal") };
    match rule {
        EqRule::Refl => {}
        EqRule::App | EqRule::AbsSame => rest.goals.extend(decompose(&s, &t)),
        EqRule::Comm => {
            let (Term::App(_, ss), Term::App(_, ts)) = (&s, &t) else { unreachable!() };
            let mut aligned = rest.clone();
            aligned.goals.push(Constraint::Equal(ss[0].clone(), ts[0].clone()));
            aligned.goals.push(Constraint::Equal(ss[1].clone(), ts[1].clone()));
            let mut crossed = rest;
            crossed.goals.push(Constraint::Equal(ss[0].clone(), ts[1].clone()));
            crossed.goals.push(Constraint::Equal(ss[1].clone(), ts[0].clone()));
            return StepOutcome::Next(vec![aligned, crossed]);
        }
        EqRule::AbsDiff => {
            let (Term::Abs(a, s1), Term::Abs(b, t1)) = (&s, &t) else { unreachable!() };
            rest.goals.push(Constraint::Equal((**s1).clone(), t1.swap(a, b)));
            rest.goals.push(Constraint::Fresh(a.clone(), (**t1).clone()));
        }
        EqRule::Inv => {
            let (Term::Susp(p, x), Term::Susp(q, _)) = (&s, &t) else { unreachable!() };
            let merged = q.inverse().compose(p);
            rest.goals.push(Constraint::Equal(Term::Susp(merged, x.clone()), Term::Susp(Perm::id(), x.clone())));
        }
        EqRule::Inst => {
            let left = inst_side(&s, &t, protected).expect("classified as inst");
            let (var_side, other) = if left { (&s, &t) } else { (&t, &s) };
            let Term::Susp(p, x) = var_side else { unreachable!() };
            instantiate(&mut rest, x.clone(), other.permute(&p.inverse()));
        }
    }
    StepOutcome::Next(vec![rest])
}

fn decompose(s: &Term, t: &Term) -> Vec<Constraint> {
    match (s, t) {
        (Term::App(_, ss), Term::App(_, ts)) => {
            ss.iter().zip(ts).map(|(a, b)| Constraint::Equal(a.clone(), b.clone())).collect()
        }
        (Term::Abs(_, s1), Term::Abs(_, t1)) => vec![Constraint::Equal((**s1).clone(), (**t1).clone())],
        _ => unreachable!("decompose on non-decomposable pair"),
    }
}

fn fresh_rule(state: &UnificationState, i: usize) -> UnificationState {
    let mut next = state.clone();
    let Constraint::Fresh(a, t) = next.goals.remove(i) else { unreachable!() };
    match t {
        Term::Atom(_) => {}
        Term::App(_, args) => next.goals.extend(args.into_iter().map(|u| Constraint::Fresh(a.clone(), u))),
        Term::Abs(b, _) if b == a => {}
        Term::Abs(_, body) => next.goals.push(Constraint::Fresh(a, *body)),
        Term::Susp(p, x) => next.context.insert(p.inverse().apply(&a), x),
    }
    next
}

/// `X ↦ u`: substitutes into the goals, extends `θ`, and turns the context's
/// constraints on `X` into freshness goals on `u`.
fn instantiate(state: &mut UnificationState, x: Var, u: Term) {
    let sigma = Substitution::single(x.clone(), u.clone());
    for g in state.goals.iter_mut() {
        *g = g.apply(&sigma);
    }
    state.subst = state.subst.then(&sigma);
    for a in state.context.take_var(&x) {
        state.goals.push(Constraint::Fresh(a, u.clone()));
    }
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

    fn state(goals: Vec<Constraint>) -> UnificationState {
        UnificationState::new(FreshnessContext::new(), goals)
    }

    #[test]
    fn application_decomposes() {
        let rhs = fc(Term::abs("b", Term::abs("a", Term::var("X"))), Term::var("X"));
        let st = state(vec![Constraint::Equal(h(Term::var("Y")), h(rhs.clone()))]);
        let StepOutcome::Next(next) = simplify_step(&st, &ProtectedVars::none()) else { panic!() };
        assert_eq!(next.len(), 1);
        assert_eq!(next[0].goals, vec![Constraint::Equal(Term::var("Y"), rhs)]);
    }

    #[test]
    fn commutative_application_branches() {
        let (s0, s1, t0, t1) = (Term::atom("a"), Term::var("X"), Term::var("Y"), Term::atom("b"));
        let st = state(vec![Constraint::Equal(fc(s0.clone(), s1.clone()), fc(t0.clone(), t1.clone()))]);
        let StepOutcome::Next(next) = simplify_step(&st, &ProtectedVars::none()) else { panic!() };
        assert_eq!(next.len(), 2);
        assert_eq!(
            next[0].goals,
            vec![Constraint::Equal(s0.clone(), t0.clone()), Constraint::Equal(s1.clone(), t1.clone())]
        );
        assert_eq!(next[1].goals, vec![Constraint::Equal(s0, t1), Constraint::Equal(s1, t0)]);
    }

    #[test]
    fn freshness_under_other_binder() {
        let body = Term::var("X");
        let st = state(vec![Constraint::Fresh(Atom::new("a"), Term::abs("b", body.clone()))]);
        let StepOutcome::Next(next) = simplify_step(&st, &ProtectedVars::none()) else { panic!() };
        assert_eq!(next[0].goals, vec![Constraint::Fresh(Atom::new("a"), body)]);
    }

    #[test]
    fn clashes_fail() {
        let st = state(vec![Constraint::Equal(Term::atom("a"), Term::atom("b"))]);
        assert!(matches!(simplify_step(&st, &ProtectedVars::none()), StepOutcome::Fail(_)));
        let st = state(vec![Constraint::Fresh(Atom::new("a"), Term::atom("a"))]);
        assert!(matches!(simplify_step(&st, &ProtectedVars::none()), StepOutcome::Fail(_)));
        let st = state(vec![Constraint::Equal(Term::var("X"), h(Term::var("X")))]);
        assert!(matches!(simplify_step(&st, &ProtectedVars::none()), StepOutcome::Fail(_)));
    }

    #[test]
    fn protected_variable_is_not_instantiated() {
        let st = state(vec![Constraint::Equal(Term::var("X"), Term::atom("a"))]);
        let protected = ProtectedVars::from([Var::new("X")].into_iter().collect::<BTreeSet<_>>());
        assert!(matches!(simplify_step(&st, &protected), StepOutcome::Fail(_)));
    }

    #[test]
    fn fixpoints_are_stuck() {
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let st = state(vec![Constraint::Equal(Term::Susp(ab, Var::new("X")), Term::var("X"))]);
        assert_eq!(simplify_step(&st, &ProtectedVars::none()), StepOutcome::Stuck);
        assert_eq!(simplify_step(&state(vec![]), &ProtectedVars::none()), StepOutcome::Solved);
    }

    #[test]
    fn inverse_rule_normalises_to_fixpoint() {
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let st = state(vec![Constraint::Equal(Term::var("X"), Term::Susp(ab.clone(), Var::new("X")))]);
        let StepOutcome::Next(next) = simplify_step(&st, &ProtectedVars::none()) else { panic!() };
        assert_eq!(next[0].fixpoints(), Some(vec![(ab, Var::new("X"))]));
    }
}
