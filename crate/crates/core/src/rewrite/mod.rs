//! Nominal rewriting modulo commutativity.

mod coherence;
mod engine;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use crate::alpha::FreshnessContext;
use crate::error::{Error, Result};
use crate::syntax::{fresh_atom_from, fresh_variable_like, Atom, Perm, Signature, Substitution, Term, Var};

pub use coherence::{coherence_check, CoherenceReport, CoherenceVerdict};
pub use engine::{normalize, one_step_rewrites, replay_step, RewriteStep};
pub use oracle::{
    alpha_variants, c_class_enumerate, c_variants, normal_form_equal_check, r_over_e_normalize, r_over_e_one_step,
};

/// `∇ ⊢ l → r`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub name: String,
    pub context: FreshnessContext,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    /// Checks `vars(r) ∪ vars(∇) ⊆ vars(l)` and that `l` is not a suspension.
    pub fn new(name: impl Into<String>, context: FreshnessContext, lhs: Term, rhs: Term) -> Result<RewriteRule> {
        let rule = RewriteRule { name: name.into(), context, lhs, rhs };
        let ill = |reason: String| Error::IllFormedRule { rule: rule.name.clone(), reason };
        if rule.lhs.is_susp() {
            return Err(ill("left-hand side is a variable".into()));
        }
        let lvars = rule.lhs.vars();
        if let Some(x) = rule.rhs.vars().difference(&lvars).next() {
            return Err(ill(format!("variable {x} of the right-hand side does not occur on the left")));
        }
        if let Some(x) = rule.context.vars().difference(&lvars).next() {
            return Err(ill(format!("context variable {x} does not occur on the left")));
        }
        Ok(rule)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.vars();
        self.rhs.collect_vars(&mut v);
        v.extend(self.context.vars());
        v
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut a = self.lhs.atoms();
        a.extend(self.rhs.atoms());
        a.extend(self.context.atoms());
        a
    }

    /// A variant whose variables avoid `avoid`; names are kept when free.
    pub fn rename_apart(&self, avoid: &BTreeSet<Var>) -> RewriteRule {
        let mut used = avoid.clone();
        let mut ren = Substitution::id();
        let mut ctx = FreshnessContext::new();
        let mut map = Vec::new();
        for x in self.vars() {
            let y = fresh_variable_like(&used, &x);
            used.insert(y.clone());
            ren.insert(x.clone(), Term::var(y.name()));
            map.push((x, y));
        }
        for c in self.context.iter() {
            let y = map.iter().find(|(x, _)| *x == c.var).map(|(_, y)| y.clone()).expect("rule variable");
            ctx.insert(c.atom.clone(), y);
        }
        RewriteRule { name: self.name.clone(), context: ctx, lhs: ren.apply(&self.lhs), rhs: ren.apply(&self.rhs) }
    }

    /// Is `self` obtained from `other` by an injective renaming of variables?
    pub fn is_renaming_of(&self, other: &RewriteRule) -> bool {
        let mut pairs: Vec<(Var, Var)> = Vec::new();
        fn walk(s: &Term, t: &Term, pairs: &mut Vec<(Var, Var)>) -> bool {
            match (s, t) {
                (Term::Atom(a), Term::Atom(b)) => a == b,
                (Term::Susp(p, x), Term::Susp(q, y)) => p == q && bind(x, y, pairs),
                (Term::Abs(a, s1), Term::Abs(b, t1)) => a == b && walk(s1, t1, pairs),
                (Term::App(f, ss), Term::App(g, ts)) => {
                    f == g && ss.len() == ts.len() && ss.iter().zip(ts).all(|(a, b)| walk(a, b, pairs))
                }
                _ => false,
            }
        }
        fn bind(x: &Var, y: &Var, pairs: &mut Vec<(Var, Var)>) -> bool {
            match pairs.iter().find(|(a, b)| a == x || b == y) {
                Some((a, b)) => a == x && b == y,
                None => {
                    pairs.push((x.clone(), y.clone()));
                    true
                }
            }
        }
        if !(walk(&self.lhs, &other.lhs, &mut pairs) && walk(&self.rhs, &other.rhs, &mut pairs)) {
            return false;
        }
        let renamed: Option<FreshnessContext> = other
            .context
            .iter()
            .map(|c| {
                pairs.iter().find(|(_, b)| *b == c.var).map(|(a, _)| crate::alpha::FreshnessConstraint::new(c.atom.clone(), a.clone()))
            })
            .collect();
        renamed.as_ref() == Some(&self.context)
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.name)?;
        if !self.context.is_empty() {
            let cs: Vec<String> = self.context.iter().map(|c| c.to_string()).collect();
            write!(f, "{} |- ", cs.join(", "))?;
        }
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rules over a signature; the commutative symbols of the signature give `C`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    pub signature: Signature,
    rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    pub fn new(signature: Signature, rules: Vec<RewriteRule>) -> Result<RewriteSystem> {
        for r in &rules {
            for side in [&r.lhs, &r.rhs] {
                signature.check_term(side).map_err(|e| Error::IllFormedRule { rule: r.name.clone(), reason: e.to_string() })?;
            }
        }
        let mut names = BTreeSet::new();
        for r in &rules {
            if !names.insert(r.name.as_str()) {
                return Err(Error::IllFormedRule { rule: r.name.clone(), reason: "duplicate rule name".into() });
            }
        }
        Ok(RewriteSystem { signature, rules })
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(RewriteRule::atoms).collect()
    }
}

/// Candidate permutations for applying a rule with atoms `rule_atoms` to a
/// redex mentioning `targets`: the identity, then every other injective
/// renaming of the rule's atoms into `targets`, the rule's atoms, and one new
/// atom per rule atom.
pub(crate) fn perm_choices(rule_atoms: &BTreeSet<Atom>, targets: &BTreeSet<Atom>) -> Vec<Perm> {
    let mut pool: BTreeSet<Atom> = targets.union(rule_atoms).cloned().collect();
    for _ in rule_atoms {
        let a = fresh_atom_from(&pool, "c");
        pool.insert(a);
    }
    let sources: Vec<&Atom> = rule_atoms.iter().collect();
    let pool: Vec<&Atom> = pool.iter().collect();
    let mut out = vec![Perm::id()];
    let mut chosen: Vec<&Atom> = Vec::new();
    fn go<'a>(sources: &[&'a Atom], pool: &[&'a Atom], chosen: &mut Vec<&'a Atom>, out: &mut Vec<Perm>) {
        if chosen.len() == sources.len() {
            let pairs: Vec<(Atom, Atom)> =
                sources.iter().zip(chosen.iter()).map(|(a, b)| ((*a).clone(), (*b).clone())).collect();
            let p = Perm::from_injection(&pairs);
            if !out.contains(&p) {
                out.push(p);
            }
            return;
        }
        for b in pool {
            if !chosen.contains(b) {
                chosen.push(b);
                go(sources, pool, chosen, out);
                chosen.pop();
            }
        }
    }
    go(&sources, &pool, &mut chosen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Symbol;

    #[test]
    fn ill_formed_rules_are_rejected() {
        let f = |t| Term::app(Symbol::new("f"), vec![t]);
        let e = FreshnessContext::new();
        assert!(RewriteRule::new("r", e.clone(), f(Term::var("X")), Term::var("Y")).is_err());
        assert!(RewriteRule::new("r", e.clone(), Term::var("X"), Term::atom("a")).is_err());
        assert!(RewriteRule::new("r", e.clone().with("a", "Y"), f(Term::var("X")), Term::var("X")).is_err());
        assert!(RewriteRule::new("r", e.with("a", "X"), f(Term::var("X")), Term::var("X")).is_ok());
    }

    #[test]
    fn renaming_keeps_free_names() {
        let f = |t| Term::app(Symbol::new("f"), vec![t]);
        let r = RewriteRule::new("r", FreshnessContext::new().with("a", "X"), f(Term::var("X")), Term::var("X")).unwrap();
        let avoid: BTreeSet<Var> = [Var::new("X")].into_iter().collect();
        let r2 = r.rename_apart(&avoid);
        assert_eq!(r2.lhs, f(Term::var("X_0")));
        assert!(r2.context.contains(&Atom::new("a"), &Var::new("X_0")));
        assert!(r2.is_renaming_of(&r));
        assert_eq!(r.rename_apart(&BTreeSet::new()), r);
    }

    #[test]
    fn permutation_choices_start_with_identity() {
        let ra: BTreeSet<Atom> = [Atom::new("a")].into_iter().collect();
        let ts: BTreeSet<Atom> = [Atom::new("a"), Atom::new("b")].into_iter().collect();
        let ps = perm_choices(&ra, &ts);
        assert!(ps[0].is_id());
        assert_eq!(ps.len(), 3);
    }
}
