//! Command-line front end. [`run_command`] returns the exit code and the
//! report text so it can be driven from tests as well as from `main`.

use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::alpha::{derive_alpha_c, derive_freshness, Constraint, FreshnessContext};
use crate::bundled;
use crate::error::{Error, Result};
use crate::narrow::{
    lifting_backward_construct, lifting_forward_check, narrow_search, BackwardOutcome, ForwardOutcome,
    NarrowingNode, NarrowingStep, NarrowingTree,
};
use crate::parse::{parse_context, parse_judgement, parse_problem, parse_subst, parse_system, SystemFile};
use crate::rewrite::{coherence_check, normalize, one_step_rewrites, CoherenceVerdict, RewriteStep, RewriteSystem};
use crate::syntax::{Signature, Substitution, Term};
use crate::unify::{c_match, solve, CSolution, ProtectedVars};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USER: i32 = 1;
pub const EXIT_BOUND: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nomc", version, about = "Nominal rewriting and narrowing modulo commutativity")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// System file, or the name of a bundled one (e.g. `prenex.nrs`).
    #[arg(long, global = true)]
    system: Option<String>,
    /// Freshness context of the input, e.g. "a#X,b#Y".
    #[arg(long, global = true)]
    context: Option<String>,
    #[arg(long, global = true, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,
    #[arg(long, global = true, default_value_t = 2)]
    fixpoint_depth: usize,
    #[arg(long, global = true, default_value_t = 100)]
    max_unifiers: usize,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide `a # t` or `s =ac t`.
    Check { judgement: String },
    /// C-unify two terms, or one `s =? t` problem.
    Unify { left: String, right: Option<String> },
    /// C-match a pattern against a term whose variables stay fixed.
    Match { pattern: String, term: String },
    /// All one-step rewrites.
    Rewrite { term: String },
    Normalize { term: String },
    /// Coherence diagram for two alpha-C equal terms.
    Coherence { left: String, right: String },
    /// Narrowing tree up to `--depth`.
    Narrow { term: String },
    /// Lift a narrowing derivation through `--rho`.
    LiftForward {
        term: String,
        /// Rule names of the derivation, e.g. "R6,R3".
        #[arg(long)]
        rules: String,
        #[arg(long)]
        rho: String,
        /// Ambient context for the instances.
        #[arg(long, default_value = "")]
        delta: String,
    },
    /// Cover the normalisation of `term·rho` by narrowing from `term`.
    LiftBackward {
        term: String,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value = "")]
        delta: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Unify { .. } => "unify",
            Command::Match { .. } => "match",
            Command::Rewrite { .. } => "rewrite",
            Command::Normalize { .. } => "normalize",
            Command::Coherence { .. } => "coherence",
            Command::Narrow { .. } => "narrow",
            Command::LiftForward { .. } => "lift-forward",
            Command::LiftBackward { .. } => "lift-backward",
        }
    }
}

/// A finished command: structured result, human text and exit code.
struct Outcome {
    result: Value,
    truncation: Value,
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(result: Value, text: String) -> Outcome {
        Outcome { result, truncation: Value::Null, text, code: EXIT_OK }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<S: AsRef<str>>(argv: &[S]) -> (i32, String) {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USER } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let start = Instant::now();
    let outcome = dispatch(&cli).unwrap_or_else(|e| Outcome {
        result: json!({ "error": error_kind(&e), "message": e.to_string() }),
        truncation: Value::Null,
        text: format!("error: {e}\n"),
        code: if e.is_bound_exhausted() { EXIT_BOUND } else { EXIT_USER },
    });
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    if cli.common.json {
        let report = json!({
            "command": { "name": cli.command.name(), "argv": argv.get(1..).unwrap_or(&[]) },
            "result": outcome.result,
            "truncation": outcome.truncation,
            "timing_ms": elapsed,
        });
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        (outcome.code, text + "\n")
    } else {
        (outcome.code, outcome.text)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Arity { .. } => "arity",
        Error::Signature(_) => "signature",
        Error::IllFormedRule { .. } => "ill_formed_rule",
        Error::NonGround(_) => "non_ground",
        Error::StateCap { .. } => "state_cap",
        Error::StepLimit { .. } => "step_limit",
        Error::Usage(_) => "usage",
    }
}

struct Env {
    file: SystemFile,
    declared: bool,
    context: FreshnessContext,
}

impl Env {
    fn load(common: &Common) -> Result<Env> {
        let (file, declared) = match &common.system {
            None => (SystemFile { system: RewriteSystem::default(), problems: Vec::new() }, false),
            Some(name) => {
                let text = if Path::new(name).is_file() {
                    std::fs::read_to_string(name).map_err(|e| Error::Usage(format!("cannot read {name}: {e}")))?
                } else {
                    bundled::lookup(name).ok_or_else(|| Error::Usage(format!("no system file `{name}`")))?.to_string()
                };
                (parse_system(&text)?, true)
            }
        };
        let context = match &common.context {
            Some(c) => parse_context(c)?,
            None => FreshnessContext::new(),
        };
        Ok(Env { file, declared, context })
    }

    fn sig(&self) -> Option<&Signature> {
        self.declared.then_some(&self.file.system.signature)
    }

    fn system(&self) -> &RewriteSystem {
        &self.file.system
    }

    // `@name` stands for a problem of the system file.
    fn resolve<'a>(&'a self, arg: &'a str) -> Result<&'a str> {
        match arg.strip_prefix('@') {
            Some(name) => self.file.problem(name).ok_or_else(|| Error::Usage(format!("no problem named `{name}`"))),
            None => Ok(arg),
        }
    }

    /// A term with an optional leading context, which joins `--context`.
    fn term(&self, arg: &str) -> Result<(FreshnessContext, Term)> {
        let (ctx, s, t) = parse_problem(self.resolve(arg)?, self.sig())?;
        if t.is_some() {
            return Err(Error::Usage(format!("expected a single term in `{arg}`")));
        }
        Ok((ctx.union(&self.context), s))
    }

    fn subst(&self, arg: &str) -> Result<Substitution> {
        parse_subst(self.resolve(arg)?, self.sig())
    }

    fn ctx(&self, arg: &str) -> Result<FreshnessContext> {
        parse_context(self.resolve(arg)?)
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let env = Env::load(&cli.common)?;
    let c = &cli.common;
    match &cli.command {
        Command::Check { judgement } => check(&env, judgement),
        Command::Unify { left, right } => unify(&env, left, right.as_deref()),
        Command::Match { pattern, term } => matching(&env, pattern, term),
        Command::Rewrite { term } => rewrite(&env, term),
        Command::Normalize { term } => normal_form(&env, term, c.max_steps),
        Command::Coherence { left, right } => coherence(&env, left, right, c.max_steps),
        Command::Narrow { term } => narrow(&env, term, c),
        Command::LiftForward { term, rules, rho, delta } => lift_forward(&env, term, rules, rho, delta, c),
        Command::LiftBackward { term, rho, delta } => lift_backward(&env, term, rho, delta, c),
    }
}

fn check(env: &Env, judgement: &str) -> Result<Outcome> {
    let (ctx, j) = parse_judgement(env.resolve(judgement)?, env.sig())?;
    let delta = ctx.union(&env.context);
    let derivable = match &j {
        Constraint::Fresh(a, t) => derive_freshness(&delta, a, t),
        Constraint::Equal(s, t) => derive_alpha_c(&delta, s, t),
    };
    let verdict = if derivable { "derivable" } else { "not derivable" };
    Ok(Outcome::ok(
        json!({ "context": delta.to_string(), "judgement": j.to_string(), "derivable": derivable }),
        format!("{delta} |- {j}: {verdict}\n"),
    ))
}

fn solution_json(s: &CSolution) -> Value {
    json!({
        "context": s.context.to_string(),
        "subst": s.subst.to_string(),
        "residual": s.residual.iter().map(|(p, x)| format!("{} =ac {x}", Term::susp(p.clone(), x.clone()))).collect::<Vec<_>>(),
        "discharged": s.discharged.iter().map(|(p, x)| format!("{} =ac {x}", Term::susp(p.clone(), x.clone()))).collect::<Vec<_>>(),
    })
}

fn solutions_text(sols: &[CSolution]) -> String {
    let mut out = format!("{} solution(s)\n", sols.len());
    for (i, s) in sols.iter().enumerate() {
        out.push_str(&format!("  {i}: ({}, {})", s.context, s.subst));
        for (p, x) in &s.residual {
            out.push_str(&format!(" residual {} =ac {x}", Term::susp(p.clone(), x.clone())));
        }
        out.push('\n');
    }
    out
}

fn unify(env: &Env, left: &str, right: Option<&str>) -> Result<Outcome> {
    let (delta, s, t) = match right {
        Some(r) => {
            let (c1, s) = env.term(left)?;
            let (c2, t) = env.term(r)?;
            (c1.union(&c2), s, t)
        }
        None => {
            let (ctx, s, t) = parse_problem(env.resolve(left)?, env.sig())?;
            let t = t.ok_or_else(|| Error::Usage("expected `s =? t` or two terms".into()))?;
            (ctx.union(&env.context), s, t)
        }
    };
    // The left-hand term plays the role of the pattern side, as for rules.
    let sols = solve(&delta, &t, &FreshnessContext::new(), &s, &ProtectedVars::none())?;
    Ok(Outcome::ok(
        json!({ "solutions": sols.iter().map(solution_json).collect::<Vec<_>>() }),
        solutions_text(&sols),
    ))
}

fn matching(env: &Env, pattern: &str, term: &str) -> Result<Outcome> {
    let (nabla, l) = parse_problem(env.resolve(pattern)?, env.sig()).and_then(|(c, l, t)| match t {
        None => Ok((c, l)),
        Some(_) => Err(Error::Usage("pattern must be a single term".into())),
    })?;
    let (delta, s) = env.term(term)?;
    let sols = c_match(&nabla, &l, &delta, &s)?;
    Ok(Outcome::ok(
        json!({ "solutions": sols.iter().map(solution_json).collect::<Vec<_>>() }),
        solutions_text(&sols),
    ))
}

fn step_json(step: &RewriteStep) -> Value {
    json!({
        "rule": step.rule,
        "instance": step.instance.to_string(),
        "position": step.position.path(),
        "perm": step.perm.to_string(),
        "subst": step.subst.to_string(),
        "result": step.result.to_string(),
    })
}

fn step_text(step: &RewriteStep) -> String {
    format!("{} at {:?} with {} {}: {}\n", step.rule, step.position.path(), step.perm, step.subst, step.result)
}

fn rewrite(env: &Env, term: &str) -> Result<Outcome> {
    let (delta, s) = env.term(term)?;
    let steps = one_step_rewrites(&delta, &s, env.system())?;
    let mut text = format!("{} result(s)\n", steps.len());
    for st in &steps {
        text.push_str("  ");
        text.push_str(&step_text(st));
    }
    Ok(Outcome::ok(json!({ "context": delta.to_string(), "steps": steps.iter().map(step_json).collect::<Vec<_>>() }), text))
}

fn normal_form(env: &Env, term: &str, max_steps: usize) -> Result<Outcome> {
    let (delta, s) = env.term(term)?;
    let (nf, trace) = normalize(&delta, &s, env.system(), max_steps)?;
    let mut text = format!("{nf}\n{} step(s)\n", trace.len());
    for st in &trace {
        text.push_str("  ");
        text.push_str(&step_text(st));
    }
    let mut out = Outcome::ok(
        json!({ "normal_form": nf.to_string(), "steps": trace.len(), "trace": trace.iter().map(step_json).collect::<Vec<_>>() }),
        text,
    );
    out.truncation = json!({ "max_steps": max_steps });
    Ok(out)
}

fn coherence(env: &Env, left: &str, right: &str, max_steps: usize) -> Result<Outcome> {
    let (c1, t1) = env.term(left)?;
    let (c2, t2) = env.term(right)?;
    let delta = c1.union(&c2);
    let report = coherence_check(env.system(), &[(delta, t1, t2)], max_steps)?.remove(0);
    let (verdict, code) = match report.verdict {
        CoherenceVerdict::Witnessed => ("witnessed", EXIT_OK),
        CoherenceVerdict::Rejected => ("rejected", EXIT_OK),
        CoherenceVerdict::NotWitnessedWithinBound => ("not_witnessed_within_bound", EXIT_BOUND),
    };
    let unclosed = report.unclosed.as_ref().map(Term::to_string);
    let mut text = format!("{verdict}\n");
    if let Some(u) = &unclosed {
        text.push_str(&format!("  unclosed reduct: {u}\n"));
    }
    Ok(Outcome {
        result: json!({ "verdict": verdict, "unclosed": unclosed }),
        truncation: json!({ "max_steps": max_steps }),
        text,
        code,
    })
}

fn node_json(id: usize, n: &NarrowingNode) -> Value {
    json!({
        "id": id,
        "depth": n.depth,
        "context": n.context.to_string(),
        "term": n.term.to_string(),
        "accumulated": n.accumulated.to_string(),
    })
}

fn narrowing_step_json(s: &NarrowingStep) -> Value {
    json!({
        "rule": s.rule,
        "instance": s.instance.to_string(),
        "position": s.position.path(),
        "perm": s.perm.to_string(),
        "subst": s.step_subst.to_string(),
        "fixpoint_enumerated": s.used_fixpoint_enumeration,
        "context": s.child.context.to_string(),
        "term": s.child.term.to_string(),
    })
}

fn truncation_json(tree: &NarrowingTree) -> Value {
    let t = &tree.truncation;
    json!({
        "depth": t.depth,
        "max_unifiers": t.max_unifiers,
        "fixpoint_depth": t.fixpoint_depth,
        "frontier": t.frontier,
        "dropped": t.dropped.iter().map(|(n, k)| json!({ "node": n, "dropped": k })).collect::<Vec<_>>(),
        "enumerated_edges": t.enumerated_edges,
    })
}

fn narrow(env: &Env, term: &str, c: &Common) -> Result<Outcome> {
    let (delta, s) = env.term(term)?;
    let tree = narrow_search(&delta, &s, env.system(), c.depth, c.fixpoint_depth, c.max_unifiers)?;
    let mut text = format!("{} node(s), {} edge(s)\n", tree.nodes.len(), tree.edges.len());
    for e in &tree.edges {
        let st = &e.step;
        text.push_str(&format!(
            "  {} -> {}: {} {} {}{} | {} |- {}\n",
            e.parent,
            e.child,
            st.rule,
            st.perm,
            st.step_subst,
            if st.used_fixpoint_enumeration { " (fixpoint)" } else { "" },
            st.child.context,
            st.child.term
        ));
    }
    let t = &tree.truncation;
    text.push_str(&format!("truncated at depth {}, {} frontier node(s)\n", t.depth, t.frontier));
    Ok(Outcome {
        result: json!({
            "nodes": tree.nodes.iter().enumerate().map(|(i, n)| node_json(i, n)).collect::<Vec<_>>(),
            "edges": tree.edges.iter().map(|e| json!({ "parent": e.parent, "child": e.child, "step": narrowing_step_json(&e.step) })).collect::<Vec<_>>(),
        }),
        truncation: truncation_json(&tree),
        text,
        code: EXIT_OK,
    })
}

/// The first derivation, in enumeration order, whose rules follow `rules`.
fn first_derivation(
    env: &Env,
    node: &NarrowingNode,
    rules: &[&str],
    c: &Common,
) -> Result<Option<Vec<NarrowingStep>>> {
    let Some((first, rest)) = rules.split_first() else {
        return Ok(Some(Vec::new()));
    };
    let exp = crate::narrow::expand(node, env.system(), c.fixpoint_depth, c.max_unifiers, &Default::default())?;
    for step in exp.steps.into_iter().filter(|s| s.rule == *first) {
        if let Some(tail) = first_derivation(env, &step.child, rest, c)? {
            let mut steps = vec![step];
            steps.extend(tail);
            return Ok(Some(steps));
        }
    }
    Ok(None)
}

fn lift_forward(env: &Env, term: &str, rules: &str, rho: &str, delta: &str, c: &Common) -> Result<Outcome> {
    let (ctx0, s0) = env.term(term)?;
    let rho = env.subst(rho)?;
    let delta = env.ctx(delta)?;
    let names: Vec<&str> = rules.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    for n in &names {
        if env.system().rule(n).is_none() {
            return Err(Error::Usage(format!("no rule named `{n}`")));
        }
    }
    let root = NarrowingNode::root(ctx0, s0);
    let Some(steps) = first_derivation(env, &root, &names, c)? else {
        return Ok(Outcome::ok(
            json!({ "outcome": "no_derivation" }),
            format!("no narrowing derivation uses {rules}\n"),
        ));
    };
    let steps_json: Vec<Value> = steps.iter().map(narrowing_step_json).collect();
    let (result, text) = match lifting_forward_check(&root, &steps, &rho, &delta) {
        ForwardOutcome::Valid { rhos } => {
            let mut text = String::from("valid\n");
            for (i, r) in rhos.iter().enumerate() {
                text.push_str(&format!("  rho{i} = {r}\n"));
            }
            (json!({ "outcome": "valid", "steps": steps_json, "rhos": rhos.iter().map(|r| r.to_string()).collect::<Vec<_>>() }), text)
        }
        ForwardOutcome::Invalid { step, reason } => (
            json!({ "outcome": "invalid", "steps": steps_json, "step": step, "reason": reason }),
            format!("invalid at step {step}: {reason}\n"),
        ),
        ForwardOutcome::PreconditionFail(reason) => (
            json!({ "outcome": "precondition_fail", "steps": steps_json, "reason": reason }),
            format!("precondition fails: {reason}\n"),
        ),
    };
    Ok(Outcome::ok(result, text))
}

fn lift_backward(env: &Env, term: &str, rho: &str, delta: &str, c: &Common) -> Result<Outcome> {
    let (ctx0, s0) = env.term(term)?;
    let rho0 = env.subst(rho)?;
    let delta = env.ctx(delta)?;
    let (nf, trace) = normalize(&delta, &rho0.apply(&s0), env.system(), c.max_steps)?;
    let outcome = lifting_backward_construct(&ctx0, &s0, &rho0, &delta, &trace, env.system(), c.fixpoint_depth)?;
    let trace_json: Vec<Value> = trace.iter().map(step_json).collect();
    let (result, text) = match outcome {
        BackwardOutcome::Found { root, steps, rhos } => {
            let forward = lifting_forward_check(&root, &steps, rhos.last().expect("rho_n"), &delta);
            let validated = matches!(forward, ForwardOutcome::Valid { .. });
            let mut text = format!("found {} narrowing step(s) to {nf}; forward check {}\n", steps.len(), if validated { "valid" } else { "fails" });
            for s in &steps {
                text.push_str(&format!("  {} {} {} | {} |- {}\n", s.rule, s.perm, s.step_subst, s.child.context, s.child.term));
            }
            (
                json!({
                    "outcome": "found",
                    "normal_form": nf.to_string(),
                    "trace": trace_json,
                    "steps": steps.iter().map(narrowing_step_json).collect::<Vec<_>>(),
                    "rhos": rhos.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "forward_valid": validated,
                }),
                text,
            )
        }
        BackwardOutcome::NotFound { step, reason } => (
            json!({ "outcome": "not_found", "trace": trace_json, "step": step, "reason": reason }),
            format!("not found at step {step}: {reason}\n"),
        ),
        BackwardOutcome::PreconditionFail(reason) => (
            json!({ "outcome": "precondition_fail", "reason": reason }),
            format!("precondition fails: {reason}\n"),
        ),
    };
    let mut out = Outcome::ok(result, text);
    out.truncation = json!({ "max_steps": c.max_steps, "fixpoint_depth": c.fixpoint_depth });
    Ok(out)
}
