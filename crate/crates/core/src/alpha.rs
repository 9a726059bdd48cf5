//! Freshness and α-equivalence modulo commutativity.
//!
//! Both judgements are syntax-directed, so deciding them is a direct
//! recursive walk over the rules; the only search is the choice of pairing
//! at commutative applications.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Atom, Substitution, Term, Var};

/// A primitive freshness constraint `a#X`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreshnessConstraint {
    pub atom: Atom,
    pub var: Var,
}

impl FreshnessConstraint {
    pub fn new(atom: Atom, var: Var) -> Self {
        FreshnessConstraint { atom, var }
    }
}

impl fmt::Display for FreshnessConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.atom, self.var)
    }
}

impl fmt::Debug for FreshnessConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set of primitive freshness constraints.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreshnessContext {
    constraints: BTreeSet<FreshnessConstraint>,
}

impl FreshnessContext {
    pub fn new() -> Self {
        FreshnessContext::default()
    }

    pub fn insert(&mut self, atom: Atom, var: Var) {
        self.constraints.insert(FreshnessConstraint { atom, var });
    }

    pub fn with(mut self, atom: &str, var: &str) -> Self {
        self.insert(Atom::new(atom), Var::new(var));
        self
    }

    pub fn contains(&self, atom: &Atom, var: &Var) -> bool {
        self.constraints.contains(&FreshnessConstraint::new(atom.clone(), var.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FreshnessConstraint> {
        self.constraints.iter()
    }

    pub fn union(&self, other: &FreshnessContext) -> FreshnessContext {
        FreshnessContext { constraints: self.constraints.union(&other.constraints).cloned().collect() }
    }

    pub fn extend(&mut self, other: &FreshnessContext) {
        self.constraints.extend(other.constraints.iter().cloned());
    }

    /// Set inclusion. For primitive contexts this is entailment.
    pub fn is_subset(&self, other: &FreshnessContext) -> bool {
        self.constraints.is_subset(&other.constraints)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.constraints.iter().map(|c| c.var.clone()).collect()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.constraints.iter().map(|c| c.atom.clone()).collect()
    }

    /// Constraints on `x`, removed from the context.
    pub fn take_var(&mut self, x: &Var) -> Vec<Atom> {
        let (taken, kept): (BTreeSet<_>, BTreeSet<_>) =
            std::mem::take(&mut self.constraints).into_iter().partition(|c| c.var == *x);
        self.constraints = kept;
        taken.into_iter().map(|c| c.atom).collect()
    }

    /// Constraints whose variable is in `vars`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> FreshnessContext {
        FreshnessContext { constraints: self.constraints.iter().filter(|c| vars.contains(&c.var)).cloned().collect() }
    }
}

impl FromIterator<FreshnessConstraint> for FreshnessContext {
    fn from_iter<I: IntoIterator<Item = FreshnessConstraint>>(iter: I) -> Self {
        FreshnessContext { constraints: iter.into_iter().collect() }
    }
}

impl fmt::Display for FreshnessContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.constraints.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FreshnessContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A freshness goal `a#t` or an equality goal `s ≈α,C t`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    Fresh(Atom, Term),
    Equal(Term, Term),
}

impl Constraint {
    pub fn apply(&self, theta: &Substitution) -> Constraint {
        match self {
            Constraint::Fresh(a, t) => Constraint::Fresh(a.clone(), theta.apply(t)),
            Constraint::Equal(s, t) => Constraint::Equal(theta.apply(s), theta.apply(t)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        match self {
            Constraint::Fresh(_, t) => t.vars(),
            Constraint::Equal(s, t) => {
                let mut v = s.vars();
                t.collect_vars(&mut v);
                v
            }
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Fresh(a, t) => write!(f, "{a} # {t}"),
            Constraint::Equal(s, t) => write!(f, "{s} =ac {t}"),
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A problem `Pr`: a finite collection of constraints.
pub type ConstraintProblem = Vec<Constraint>;

/// Reduction of a freshness goal reached `a#a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    pub atom: Atom,
}

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inconsistent: {0}#{0}", self.atom)
    }
}

/// Reduces `a#t` bottom-up with the freshness rules, collecting the primitive
/// constraints it leaves behind.
pub fn reduce_freshness(a: &Atom, t: &Term, out: &mut FreshnessContext) -> Result<(), Inconsistent> {
    match t {
        Term::Atom(b) if b == a => Err(Inconsistent { atom: a.clone() }),
        Term::Atom(_) => Ok(()),
        Term::Susp(pi, x) => {
            out.insert(pi.inverse().apply(a), x.clone());
            Ok(())
        }
        Term::Abs(b, _) if b == a => Ok(()),
        Term::Abs(_, body) => reduce_freshness(a, body, out),
        Term::App(_, args) => args.iter().try_for_each(|u| reduce_freshness(a, u, out)),
    }
}

/// `Δ ⊢ a#t`.
pub fn derive_freshness(delta: &FreshnessContext, a: &Atom, t: &Term) -> bool {
    match t {
        Term::Atom(b) => a != b,
        Term::Susp(pi, x) => delta.contains(&pi.inverse().apply(a), x),
        Term::Abs(b, body) => a == b || derive_freshness(delta, a, body),
        Term::App(_, args) => args.iter().all(|u| derive_freshness(delta, a, u)),
    }
}

/// `Δ ⊢ s ≈α,C t`.
pub fn derive_alpha_c(delta: &FreshnessContext, s: &Term, t: &Term) -> bool {
    derive_eq(delta, s, t, true)
}

/// `Δ ⊢ s ≈α t`, treating every symbol as free.
pub fn derive_alpha(delta: &FreshnessContext, s: &Term, t: &Term) -> bool {
    derive_eq(delta, s, t, false)
}

fn derive_eq(delta: &FreshnessContext, s: &Term, t: &Term, modulo_c: bool) -> bool {
    match (s, t) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Susp(p, x), Term::Susp(q, y)) => {
            x == y && p.difference_set(q).iter().all(|a| delta.contains(a, x))
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) if a == b => derive_eq(delta, s1, t1, modulo_c),
        (Term::Abs(a, s1), Term::Abs(b, t1)) => {
            derive_freshness(delta, a, t1) && derive_eq(delta, s1, &t1.swap(a, b), modulo_c)
        }
        (Term::App(f, ss), Term::App(g, ts)) => {
            if f != g || ss.len() != ts.len() {
                return false;
            }
            if modulo_c && f.is_commutative() && ss.len() == 2 {
                (derive_eq(delta, &ss[0], &ts[0], true) && derive_eq(delta, &ss[1], &ts[1], true))
                    || (derive_eq(delta, &ss[0], &ts[1], true) && derive_eq(delta, &ss[1], &ts[0], true))
            } else {
                ss.iter().zip(ts).all(|(a, b)| derive_eq(delta, a, b, modulo_c))
            }
        }
        _ => false,
    }
}

/// `⟨Δθ⟩_nf`: instantiates each `a#X ∈ Δ` with `θ` and reduces to primitive
/// constraints.
pub fn freshness_context_nf(delta: &FreshnessContext, theta: &Substitution) -> Result<FreshnessContext, Inconsistent> {
    let mut out = FreshnessContext::new();
    for c in delta.iter() {
        reduce_freshness(&c.atom, &theta.lookup(&c.var), &mut out)?;
    }
    Ok(out)
}

/// `Δ ⊢ ∇θ`: `θ` satisfies `∇` under hypotheses `Δ`.
pub fn entails_instance(delta: &FreshnessContext, nabla: &FreshnessContext, theta: &Substitution) -> bool {
    matches!(freshness_context_nf(nabla, theta), Ok(nf) if nf.is_subset(delta))
}

/// `Δ ⊢ Pr`.
pub fn check_problem(delta: &FreshnessContext, problem: &[Constraint]) -> bool {
    problem.iter().all(|c| match c {
        Constraint::Fresh(a, t) => derive_freshness(delta, a, t),
        Constraint::Equal(s, t) => derive_alpha_c(delta, s, t),
    })
}
