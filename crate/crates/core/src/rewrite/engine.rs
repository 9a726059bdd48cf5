use std::collections::BTreeSet;

use super::{perm_choices, RewriteRule, RewriteSystem};
use crate::alpha::{derive_alpha, derive_alpha_c, entails_instance, FreshnessContext};
use crate::error::{Error, Result};
use crate::syntax::{subterms_with_positions, Perm, Position, Substitution, Term, Var};
use crate::unify::c_match;

/// One step `Δ ⊢ s →R,C t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: String,
    /// The renamed rule the step was computed with.
    pub instance: RewriteRule,
    pub position: Position,
    pub perm: Perm,
    pub subst: Substitution,
    pub result: Term,
}

/// Every one-step reduct of `s` under `Δ`, deduplicated modulo `≈α`, in
/// position, rule, permutation and solver order.
pub fn one_step_rewrites(delta: &FreshnessContext, s: &Term, system: &RewriteSystem) -> Result<Vec<RewriteStep>> {
    collect(delta, s, system, false)
}

fn collect(delta: &FreshnessContext, s: &Term, system: &RewriteSystem, first_only: bool) -> Result<Vec<RewriteStep>> {
    let mut avoid: BTreeSet<Var> = s.vars();
    avoid.extend(delta.vars());
    let renamed: Vec<RewriteRule> = system.rules().iter().map(|r| r.rename_apart(&avoid)).collect();
    let mut out: Vec<RewriteStep> = Vec::new();
    for (pos, sub) in subterms_with_positions(s) {
        if sub.is_susp() {
            continue;
        }
        let mut targets = sub.atoms();
        targets.extend(delta.atoms());
        for rule in &renamed {
            if !same_head(&rule.lhs, &sub) {
                continue;
            }
            for pi in perm_choices(&rule.atoms(), &targets) {
                for step in steps_with(delta, &pos, &sub, rule, &pi)? {
                    if !out.iter().any(|o| derive_alpha(delta, &o.result, &step.result)) {
                        out.push(step);
                        if first_only {
                            return Ok(out);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn same_head(l: &Term, s: &Term) -> bool {
    match (l, s) {
        (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.len() == ys.len(),
        (Term::Abs(..), Term::Abs(..)) => true,
        (Term::Atom(_), Term::Atom(_)) => true,
        _ => false,
    }
}

fn steps_with(
    delta: &FreshnessContext,
    pos: &Position,
    sub: &Term,
    rule: &RewriteRule,
    pi: &Perm,
) -> Result<Vec<RewriteStep>> {
    let lhs = rule.lhs.permute(pi);
    let rhs = rule.rhs.permute(pi);
    let rule_vars = rule.vars();
    let mut out = Vec::new();
    for sol in c_match(&rule.context, &lhs, delta, sub)? {
        // Constraints the match needs beyond Δ make the step inapplicable.
        if !sol.is_closed() || !sol.context.is_subset(delta) {
            continue;
        }
        let theta = sol.subst.restrict(&rule_vars);
        if !entails_instance(delta, &rule.context, &theta) || !derive_alpha_c(delta, sub, &theta.apply(&lhs)) {
            continue;
        }
        out.push(RewriteStep {
            rule: rule.name.clone(),
            instance: rule.clone(),
            position: pos.clone(),
            perm: pi.clone(),
            subst: theta.clone(),
            result: pos.plug(&theta.apply(&rhs)),
        });
    }
    Ok(out)
}

/// Rewrites with the first available step until none applies.
pub fn normalize(
    delta: &FreshnessContext,
    s: &Term,
    system: &RewriteSystem,
    max_steps: usize,
) -> Result<(Term, Vec<RewriteStep>)> {
    let mut current = s.clone();
    let mut trace = Vec::new();
    loop {
        let Some(step) = collect(delta, &current, system, true)?.into_iter().next() else {
            return Ok((current, trace));
        };
        if trace.len() == max_steps {
            return Err(Error::StepLimit { max_steps });
        }
        current = step.result.clone();
        trace.push(step);
    }
}

/// Re-derives the premises of a step from `s` under `Δ`: `Δ ⊢ ∇θ`,
/// `Δ ⊢ s′ ≈α,C π·(lθ)` at the recorded position, and the result `≈α`
/// `C[π·(rθ)]`.
pub fn replay_step(delta: &FreshnessContext, s: &Term, step: &RewriteStep) -> bool {
    let rule = &step.instance;
    let Some(sub) = s.subterm_at(step.position.path()) else {
        return false;
    };
    let Some(pos) = Position::in_term(s, step.position.path()) else {
        return false;
    };
    let lhs = step.subst.apply(&rule.lhs).permute(&step.perm);
    let rhs = step.subst.apply(&rule.rhs).permute(&step.perm);
    entails_instance(delta, &rule.context, &step.subst)
        && derive_alpha_c(delta, sub, &lhs)
        && derive_alpha(delta, &pos.plug(&rhs), &step.result)
}
