use std::collections::BTreeSet;

use super::{expand, narrowing_to_rewriting, NarrowingNode, NarrowingStep};
use crate::alpha::{derive_alpha_c, entails_instance, freshness_context_nf, Constraint, FreshnessContext};
use crate::error::Result;
use crate::rewrite::{one_step_rewrites, replay_step, RewriteStep, RewriteSystem};
use crate::syntax::{Position, Substitution, Term, Var};
use crate::unify::{solve_state, ProtectedVars, UnificationState, DEFAULT_STATE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForwardOutcome {
    /// Every step lifts; `rhos[i]` is `ρᵢ = θᵢ…θₙ₋₁ρ`, the last one is `ρ`.
    Valid { rhos: Vec<Substitution> },
    Invalid { step: usize, reason: String },
    /// `ρ` does not satisfy the last context under `Δ`.
    PreconditionFail(String),
}

/// Given narrowing steps from `root` and `ρ` satisfying the last context
/// with `Δ`, checks `Δ ⊢ sᵢρᵢ → sᵢ₊₁ρᵢ₊₁` and `Δ ⊢ Δᵢρᵢ` for every `i`.
pub fn lifting_forward_check(
    root: &NarrowingNode,
    steps: &[NarrowingStep],
    rho: &Substitution,
    delta: &FreshnessContext,
) -> ForwardOutcome {
    let last = steps.last().map_or(root, |s| &s.child);
    match freshness_context_nf(&last.context, rho) {
        Err(e) => return ForwardOutcome::PreconditionFail(format!("{}: {e}", last.context)),
        Ok(nf) if !nf.is_subset(delta) => {
            return ForwardOutcome::PreconditionFail(format!("{delta} does not entail {nf}"));
        }
        Ok(_) => {}
    }
    let n = steps.len();
    let mut rhos = vec![rho.clone(); n + 1];
    for i in (0..n).rev() {
        rhos[i] = steps[i].step_subst.then(&rhos[i + 1]);
    }
    let node = |i: usize| if i == 0 { root } else { &steps[i - 1].child };
    for (i, step) in steps.iter().enumerate() {
        let (from, to) = (node(i), node(i + 1));
        if !entails_instance(delta, &from.context, &rhos[i]) {
            return ForwardOutcome::Invalid { step: i, reason: format!("Δ does not entail Δ{i}ρ{i}") };
        }
        let source = rhos[i].apply(&from.term);
        let target = rhos[i + 1].apply(&to.term);
        let Some(position) = Position::in_term(&source, step.position.path()) else {
            return ForwardOutcome::Invalid { step: i, reason: "position vanished under ρ".into() };
        };
        let witness = RewriteStep {
            rule: step.rule.clone(),
            instance: step.instance.clone(),
            position,
            perm: step.perm.clone(),
            subst: rhos[i].restrict(&step.instance.vars()),
            result: target,
        };
        if !replay_step(delta, &source, &witness) {
            return ForwardOutcome::Invalid { step: i, reason: format!("{source} does not rewrite as recorded") };
        }
    }
    ForwardOutcome::Valid { rhos }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackwardOutcome {
    /// Narrowing steps from the root, with `ρ₀…ρₙ`.
    Found { root: NarrowingNode, steps: Vec<NarrowingStep>, rhos: Vec<Substitution> },
    NotFound { step: usize, reason: String },
    PreconditionFail(String),
}

/// Rebuilds a narrowing derivation from `Δ₀ ⊢ s₀` that covers a rewriting
/// trace starting at `s₀ρ₀` under `Δ`. At each step the candidates use the
/// trace's rule, the recorded position first; `ρᵢ₊₁` is found by matching
/// `{Xθ ≈ Xρᵢ | X ∈ Vᵢ} ∪ {sᵢ₊₁ ≈ tᵢ₊₁}`.
pub fn lifting_backward_construct(
    delta0: &FreshnessContext,
    s0: &Term,
    rho0: &Substitution,
    delta: &FreshnessContext,
    trace: &[RewriteStep],
    system: &RewriteSystem,
    fixpoint_depth: usize,
) -> Result<BackwardOutcome> {
    let root = NarrowingNode::root(delta0.clone(), s0.clone());
    let mut v0 = s0.vars();
    v0.extend(delta0.vars());
    let mut outside: BTreeSet<Var> = delta.vars();
    for x in &v0 {
        rho0.lookup(x).collect_vars(&mut outside);
    }
    for step in trace {
        step.result.collect_vars(&mut outside);
    }
    if let Some(x) = v0.intersection(&outside).next() {
        return Ok(BackwardOutcome::PreconditionFail(format!("variable {x} occurs on both sides of ρ₀")));
    }
    if !entails_instance(delta, delta0, rho0) {
        return Ok(BackwardOutcome::PreconditionFail("ρ₀ does not satisfy Δ₀ with Δ".into()));
    }
    for x in &v0 {
        if !one_step_rewrites(delta, &rho0.lookup(x), system)?.is_empty() {
            return Ok(BackwardOutcome::PreconditionFail(format!("ρ₀ is not normalised at {x}")));
        }
    }

    let mut node = root.clone();
    let mut rho = rho0.restrict(&v0);
    let mut current = rho.apply(s0);
    let mut steps = Vec::new();
    let mut rhos = vec![rho.clone()];
    for (i, rstep) in trace.iter().enumerate() {
        if !replay_step(delta, &current, rstep) {
            return Ok(BackwardOutcome::NotFound { step: i, reason: "trace step does not replay".into() });
        }
        let target = &rstep.result;
        let mut candidates =
            expand(&node, system, fixpoint_depth, usize::MAX, &outside)?.steps;
        candidates.retain(|c| c.rule == rstep.rule);
        candidates.sort_by_key(|c| c.position.path() != rstep.position.path());
        let vi: BTreeSet<Var> = {
            let mut v = node.term.vars();
            v.extend(node.context.vars());
            v
        };
        let found = candidates.into_iter().find_map(|cand| {
            lift_candidate(&cand, &node, &vi, &rho, delta, target, &outside, system).map(|r| (cand, r))
        });
        let Some((cand, next_rho)) = found else {
            return Ok(BackwardOutcome::NotFound { step: i, reason: format!("no narrowing step covers {target}") });
        };
        node = cand.child.clone();
        rho = next_rho;
        current = target.clone();
        rhos.push(rho.clone());
        steps.push(cand);
    }
    Ok(BackwardOutcome::Found { root, steps, rhos })
}

#[allow(clippy::too_many_arguments)]
fn lift_candidate(
    cand: &NarrowingStep,
    parent: &NarrowingNode,
    vi: &BTreeSet<Var>,
    rho: &Substitution,
    delta: &FreshnessContext,
    target: &Term,
    outside: &BTreeSet<Var>,
    system: &RewriteSystem,
) -> Option<Substitution> {
    if !narrowing_to_rewriting(cand, parent, system) {
        return None;
    }
    let theta = &cand.step_subst;
    let child = &cand.child;
    let mut goals: Vec<Constraint> =
        vi.iter().map(|x| Constraint::Equal(theta.apply(&Term::var(x.name())), rho.lookup(x))).collect();
    goals.push(Constraint::Equal(child.term.clone(), target.clone()));
    let init = UnificationState::new(child.context.union(delta), goals);
    let sols = solve_state(init, &ProtectedVars::from(outside.clone()), DEFAULT_STATE_CAP).ok()?;

    let mut v1 = child.term.vars();
    v1.extend(child.context.vars());
    for x in vi {
        theta.lookup(x).collect_vars(&mut v1);
    }
    sols.into_iter().find_map(|sol| {
        if !sol.is_closed() || !sol.context.is_subset(delta) {
            return None;
        }
        let next = sol.subst.restrict(&v1);
        let covers = derive_alpha_c(delta, &next.apply(&child.term), target)
            && vi.iter().all(|x| derive_alpha_c(delta, &rho.lookup(x), &next.apply(&theta.lookup(x))))
            && entails_instance(delta, &child.context, &next)
            && next.domain().all(|x| v1.contains(x));
        covers.then_some(next)
    })
}
