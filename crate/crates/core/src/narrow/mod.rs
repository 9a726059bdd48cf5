//! Nominal C-narrowing and the lifting correspondence with rewriting.

mod lifting;

use std::collections::BTreeSet;

use crate::alpha::{derive_alpha, derive_alpha_c, entails_instance, freshness_context_nf, Constraint, FreshnessContext};
use crate::error::Result;
use crate::rewrite::{perm_choices, replay_step, RewriteRule, RewriteStep, RewriteSystem};
use crate::syntax::{subterms_with_positions, Perm, Position, Substitution, Term, Var};
use crate::unify::{
    check_solution, enumerate_fixpoint_solutions, solve, CSolution, ProtectedVars, UnificationState,
};

pub use lifting::{lifting_backward_construct, lifting_forward_check, BackwardOutcome, ForwardOutcome};

/// `Δᵢ ⊢ sᵢ` with the composed substitution that led to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowingNode {
    pub context: FreshnessContext,
    pub term: Term,
    pub accumulated: Substitution,
    pub depth: usize,
}

impl NarrowingNode {
    pub fn root(context: FreshnessContext, term: Term) -> NarrowingNode {
        NarrowingNode { context, term, accumulated: Substitution::id(), depth: 0 }
    }

    /// Variables on the path to this node.
    pub fn path_vars(&self) -> BTreeSet<Var> {
        let mut v = self.term.vars();
        v.extend(self.context.vars());
        v.extend(self.accumulated.domain().cloned());
        v.extend(self.accumulated.range_vars());
        v
    }
}

/// `(Δ ⊢ s) ⤳θ (Δ′ ⊢ t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowingStep {
    pub rule: String,
    pub instance: RewriteRule,
    pub position: Position,
    pub perm: Perm,
    pub step_subst: Substitution,
    pub used_fixpoint_enumeration: bool,
    pub child: NarrowingNode,
}

/// Children of one node, and how many were cut by the unifier bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub steps: Vec<NarrowingStep>,
    pub dropped: usize,
}

/// Every one-step narrowing at a non-variable position, at most
/// `max_unifiers` of them. Solutions with fixed-point residuals are expanded
/// through [`enumerate_fixpoint_solutions`] up to `fixpoint_depth`.
pub fn one_step_narrowings(
    node: &NarrowingNode,
    system: &RewriteSystem,
    fixpoint_depth: usize,
    max_unifiers: usize,
) -> Result<Vec<NarrowingStep>> {
    Ok(expand(node, system, fixpoint_depth, max_unifiers, &BTreeSet::new())?.steps)
}

/// [`one_step_narrowings`] with rule variables also kept apart from `avoid`.
pub fn expand(
    node: &NarrowingNode,
    system: &RewriteSystem,
    fixpoint_depth: usize,
    max_unifiers: usize,
    avoid: &BTreeSet<Var>,
) -> Result<Expansion> {
    let mut avoid_vars = node.path_vars();
    avoid_vars.extend(avoid.iter().cloned());
    let renamed: Vec<RewriteRule> = system.rules().iter().map(|r| r.rename_apart(&avoid_vars)).collect();

    let mut closed: Vec<NarrowingStep> = Vec::new();
    // Enumerated children, keyed by the deepest enumerated term they use so
    // that raising the enumeration depth only appends.
    let mut enumerated: Vec<(usize, NarrowingStep)> = Vec::new();
    for (pos, sub) in subterms_with_positions(&node.term) {
        if sub.is_susp() {
            continue;
        }
        let mut targets = sub.atoms();
        targets.extend(node.context.atoms());
        for rule in &renamed {
            for pi in perm_choices(&rule.atoms(), &targets) {
                let lhs = rule.lhs.permute(&pi);
                for sol in solve(&node.context, &sub, &rule.context, &lhs, &ProtectedVars::none())? {
                    let problem = UnificationState::new(
                        rule.context.union(&node.context),
                        vec![Constraint::Equal(lhs.clone(), sub.clone())],
                    );
                    let make = |ctx: FreshnessContext, theta: Substitution, flagged: bool| {
                        child_step(node, &pos, rule, &pi, ctx, theta, flagged)
                    };
                    if sol.is_closed() {
                        closed.push(make(sol.context.clone(), sol.subst.clone(), false));
                        continue;
                    }
                    for (level, ctx, theta) in fixpoint_instances(&sol, system, fixpoint_depth) {
                        if check_solution((&ctx, &theta), &problem) {
                            enumerated.push((level, make(ctx, theta, true)));
                        }
                    }
                }
            }
        }
    }
    enumerated.sort_by_key(|(level, _)| *level);
    let mut steps: Vec<NarrowingStep> = closed;
    steps.extend(enumerated.into_iter().map(|(_, s)| s));
    let dropped = steps.len().saturating_sub(max_unifiers);
    steps.truncate(max_unifiers);
    Ok(Expansion { steps, dropped })
}

fn child_step(
    node: &NarrowingNode,
    pos: &Position,
    rule: &RewriteRule,
    pi: &Perm,
    context: FreshnessContext,
    theta: Substitution,
    flagged: bool,
) -> NarrowingStep {
    let term = theta.apply(&pos.plug(&rule.rhs.permute(pi)));
    NarrowingStep {
        rule: rule.name.clone(),
        instance: rule.clone(),
        position: pos.clone(),
        perm: pi.clone(),
        step_subst: theta.clone(),
        used_fixpoint_enumeration: flagged,
        child: NarrowingNode { context, term, accumulated: node.accumulated.then(&theta), depth: node.depth + 1 },
    }
}

// Closes every residual of `sol` with an enumerated solution; the level is the
// deepest enumerated term used.
fn fixpoint_instances(
    sol: &CSolution,
    system: &RewriteSystem,
    depth: usize,
) -> Vec<(usize, FreshnessContext, Substitution)> {
    let lists: Vec<Vec<(usize, FreshnessContext, Substitution)>> = sol
        .residual
        .iter()
        .map(|(pi, x)| {
            enumerate_fixpoint_solutions(pi, x, &system.signature, depth)
                .into_iter()
                .map(|(c, s)| {
                    let level = s.get(x).map_or(0, Term::depth);
                    (level, c, s)
                })
                .collect()
        })
        .collect();
    let mut combos: Vec<(usize, FreshnessContext, Substitution)> =
        vec![(0, FreshnessContext::new(), Substitution::id())];
    for list in &lists {
        let mut next = Vec::new();
        for (l1, c1, s1) in &combos {
            for (l2, c2, s2) in list {
                next.push(((*l1).max(*l2), c1.union(c2), s1.then(s2)));
            }
        }
        combos = next;
    }
    combos
        .into_iter()
        .filter_map(|(level, ctx_e, sigma)| {
            let base = freshness_context_nf(&sol.context, &sigma).ok()?;
            let ctx = base.union(&ctx_e);
            Some((level, ctx, sol.subst.then(&sigma)))
        })
        .collect()
}

/// Where the search stopped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Truncation {
    pub depth: usize,
    pub max_unifiers: usize,
    pub fixpoint_depth: usize,
    /// Nodes at the depth bound, left unexpanded.
    pub frontier: usize,
    /// `(node, children dropped)` for nodes that hit the unifier bound.
    pub dropped: Vec<(usize, usize)>,
    /// Edges whose unifier came from fixed-point enumeration.
    pub enumerated_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub step: NarrowingStep,
}

/// A finite prefix of the narrowing tree; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowingTree {
    pub nodes: Vec<NarrowingNode>,
    pub edges: Vec<TreeEdge>,
    pub truncation: Truncation,
}

impl NarrowingTree {
    pub fn root(&self) -> &NarrowingNode {
        &self.nodes[0]
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = &TreeEdge> {
        self.edges.iter().filter(move |e| e.parent == node)
    }

    /// Steps from the root to `node`.
    pub fn path_to(&self, node: usize) -> Vec<NarrowingStep> {
        let mut out = Vec::new();
        let mut cur = node;
        while let Some(e) = self.edges.iter().find(|e| e.child == cur) {
            out.push(e.step.clone());
            cur = e.parent;
        }
        out.reverse();
        out
    }
}

/// Breadth-first expansion to `depth`.
pub fn narrow_search(
    delta: &FreshnessContext,
    s: &Term,
    system: &RewriteSystem,
    depth: usize,
    fixpoint_depth: usize,
    max_unifiers: usize,
) -> Result<NarrowingTree> {
    let mut tree = NarrowingTree {
        nodes: vec![NarrowingNode::root(delta.clone(), s.clone())],
        edges: Vec::new(),
        truncation: Truncation { depth, max_unifiers, fixpoint_depth, ..Truncation::default() },
    };
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &id in &frontier {
            let node = tree.nodes[id].clone();
            let exp = expand(&node, system, fixpoint_depth, max_unifiers, &BTreeSet::new())?;
            if exp.dropped > 0 {
                tree.truncation.dropped.push((id, exp.dropped));
            }
            for step in exp.steps {
                let child = tree.nodes.len();
                tree.nodes.push(step.child.clone());
                if step.used_fixpoint_enumeration {
                    tree.truncation.enumerated_edges += 1;
                }
                tree.edges.push(TreeEdge { parent: id, child, step });
                next.push(child);
            }
        }
        frontier = next;
    }
    tree.truncation.frontier = frontier.len();
    Ok(tree)
}

/// Re-derives a narrowing step with the alpha-C judgements and checks that it
/// gives the rewriting step `Δ′ ⊢ s₀θ → s₁` with the same rule and position.
pub fn narrowing_to_rewriting(step: &NarrowingStep, parent: &NarrowingNode, system: &RewriteSystem) -> bool {
    let Some(original) = system.rule(&step.rule) else {
        return false;
    };
    let rule = &step.instance;
    if !rule.is_renaming_of(original) {
        return false;
    }
    let path = step.position.path();
    let Some(sub) = parent.term.subterm_at(path) else {
        return false;
    };
    if sub.is_susp() {
        return false;
    }
    let theta = &step.step_subst;
    let delta1 = &step.child.context;
    let Some(pos) = Position::in_term(&parent.term, path) else {
        return false;
    };
    let premises = entails_instance(delta1, &rule.context, theta)
        && entails_instance(delta1, &parent.context, theta)
        && derive_alpha_c(delta1, &theta.apply(sub), &theta.apply(&rule.lhs.permute(&step.perm)))
        && derive_alpha(delta1, &theta.apply(&pos.plug(&rule.rhs.permute(&step.perm))), &step.child.term);
    if !premises {
        return false;
    }
    let instantiated = theta.apply(&parent.term);
    let Some(position) = Position::in_term(&instantiated, path) else {
        return false;
    };
    let rewrite = RewriteStep {
        rule: step.rule.clone(),
        instance: rule.clone(),
        position,
        perm: step.perm.clone(),
        subst: theta.restrict(&rule.vars()),
        result: step.child.term.clone(),
    };
    replay_step(delta1, &instantiated, &rewrite)
}
