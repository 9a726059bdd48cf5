use super::{normalize, one_step_rewrites, RewriteSystem};
use crate::alpha::{derive_alpha, derive_alpha_c, FreshnessContext};
use crate::error::Result;
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    Witnessed,
    NotWitnessedWithinBound,
    /// The sample's two terms are not `≈α,C` under its context.
    Rejected,
}

/// Verdict for one sample, with the first reduct of `t₁` that could not be
/// closed when there is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    pub verdict: CoherenceVerdict,
    pub unclosed: Option<Term>,
}

// Caps the terms kept per side by the bounded search.
const REACH_CAP: usize = 2_000;

/// For each sample `(Δ, t₁, t₂)` and each reduct `t₃` of `t₁`, looks for
/// `t₃ →* t₄` and `t₂ → t₅ →* t₆` with `Δ ⊢ t₄ ≈α,C t₆`, within `max_steps`.
pub fn coherence_check(
    system: &RewriteSystem,
    samples: &[(FreshnessContext, Term, Term)],
    max_steps: usize,
) -> Result<Vec<CoherenceReport>> {
    samples.iter().map(|(delta, t1, t2)| check_sample(system, delta, t1, t2, max_steps)).collect()
}

fn check_sample(
    system: &RewriteSystem,
    delta: &FreshnessContext,
    t1: &Term,
    t2: &Term,
    max_steps: usize,
) -> Result<CoherenceReport> {
    if !derive_alpha_c(delta, t1, t2) {
        return Ok(CoherenceReport { verdict: CoherenceVerdict::Rejected, unclosed: None });
    }
    let t5s: Vec<Term> = one_step_rewrites(delta, t2, system)?.into_iter().map(|s| s.result).collect();
    let mut t6s: Option<Vec<Term>> = None;
    for step in one_step_rewrites(delta, t1, system)? {
        let t3 = step.result;
        if closes_by_normal_forms(system, delta, &t3, &t5s, max_steps)? {
            continue;
        }
        let right = match &t6s {
            Some(r) => r,
            None => t6s.insert(reach(system, delta, &t5s, max_steps.saturating_sub(1))?),
        };
        let left = reach(system, delta, std::slice::from_ref(&t3), max_steps)?;
        if !left.iter().any(|t4| right.iter().any(|t6| derive_alpha_c(delta, t4, t6))) {
            return Ok(CoherenceReport { verdict: CoherenceVerdict::NotWitnessedWithinBound, unclosed: Some(t3) });
        }
    }
    Ok(CoherenceReport { verdict: CoherenceVerdict::Witnessed, unclosed: None })
}

fn closes_by_normal_forms(
    system: &RewriteSystem,
    delta: &FreshnessContext,
    t3: &Term,
    t5s: &[Term],
    max_steps: usize,
) -> Result<bool> {
    let Ok((t4, _)) = normalize(delta, t3, system, max_steps) else {
        return Ok(false);
    };
    for t5 in t5s {
        if let Ok((t6, _)) = normalize(delta, t5, system, max_steps.saturating_sub(1)) {
            if derive_alpha_c(delta, &t4, &t6) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

// Terms reachable from `start` in at most `steps` steps, modulo ≈α.
fn reach(system: &RewriteSystem, delta: &FreshnessContext, start: &[Term], steps: usize) -> Result<Vec<Term>> {
    let mut all: Vec<Term> = Vec::new();
    let mut frontier: Vec<Term> = Vec::new();
    for t in start {
        if !all.iter().any(|u| derive_alpha(delta, u, t)) {
            all.push(t.clone());
            frontier.push(t.clone());
        }
    }
    for _ in 0..steps {
        let mut next = Vec::new();
        for t in &frontier {
            for step in one_step_rewrites(delta, t, system)? {
                if all.len() >= REACH_CAP {
                    return Ok(all);
                }
                if !all.iter().any(|u| derive_alpha(delta, u, &step.result)) {
                    all.push(step.result.clone());
                    next.push(step.result);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(all)
}
