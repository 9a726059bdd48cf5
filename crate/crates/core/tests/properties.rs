mod common;

use common::{c_class_forms, nameless};
use nomc::alpha::{derive_alpha, derive_alpha_c, derive_freshness, freshness_context_nf, FreshnessContext};
use nomc::bundled;
use nomc::narrow::{narrow_search, narrowing_to_rewriting, one_step_narrowings, NarrowingNode};
use nomc::parse::{parse_system, parse_term, print_system};
use nomc::rewrite::{one_step_rewrites, r_over_e_one_step, replay_step};
use nomc::syntax::{Atom, Perm, Signature, Substitution, Term, Var};
use nomc::unify::{c_match, enumerate_fixpoint_solutions, solve, ProtectedVars};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ATOMS: [&str; 3] = ["a", "b", "c"];

fn atom() -> impl Strategy<Value = Atom> {
    proptest::sample::select(&ATOMS[..]).prop_map(Atom::new)
}

fn perm() -> impl Strategy<Value = Perm> {
    proptest::collection::vec((atom(), atom()), 0..3)
        .prop_map(|swaps| Perm::from_swaps(swaps.into_iter().filter(|(a, b)| a != b).collect()))
}

fn leaf(vars: &'static [&'static str]) -> BoxedStrategy<Term> {
    let atoms = atom().prop_map(Term::Atom);
    if vars.is_empty() {
        return atoms.boxed();
    }
    let susp = (perm(), proptest::sample::select(vars)).prop_map(|(p, x)| Term::susp(p, Var::new(x)));
    prop_oneof![atoms, susp].boxed()
}

/// Terms over the signature of `sig`, with abstractions over three atoms.
fn term_over(sig: Signature, vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
    let symbols = sig.symbols();
    leaf(vars)
        .prop_recursive(depth, 24, 2, move |inner| {
            let syms = symbols.clone();
            let app = (proptest::sample::select(syms), proptest::collection::vec(inner.clone(), 2))
                .prop_map(|((f, arity), mut args)| {
                    args.truncate(arity);
                    Term::app(f, args)
                });
            let abs = (atom(), inner).prop_map(|(a, t)| Term::Abs(a, Box::new(t)));
            prop_oneof![app, abs]
        })
        .boxed()
}

fn ex22_sig() -> Signature {
    bundled::ex22().system.signature
}

fn prenex_sig() -> Signature {
    bundled::prenex().system.signature
}

fn context(vars: &'static [&'static str]) -> impl Strategy<Value = FreshnessContext> {
    proptest::collection::vec((atom(), proptest::sample::select(vars)), 0..4).prop_map(|cs| {
        let mut ctx = FreshnessContext::new();
        for (a, x) in cs {
            ctx.insert(a, Var::new(x));
        }
        ctx
    })
}

fn ground_subst(vars: &'static [&'static str]) -> impl Strategy<Value = Substitution> {
    proptest::collection::vec(term_over(ex22_sig(), &[], 2), vars.len())
        .prop_map(move |ts| vars.iter().zip(ts).map(|(x, t)| (Var::new(x), t)).collect())
}

/// Commutative swaps and binder renamings valid under `delta`.
fn perturb(rng: &mut StdRng, delta: &FreshnessContext, t: &Term) -> Term {
    match t {
        Term::Atom(_) | Term::Susp(..) => t.clone(),
        Term::Abs(a, body) => {
            let body = perturb(rng, delta, body);
            let b = Atom::new(["a", "b", "c", "d"][rng.gen_range(0..4)]);
            let abs = Term::Abs(a.clone(), Box::new(body.clone()));
            if rng.gen_bool(0.5) && derive_freshness(delta, &b, &abs) {
                Term::Abs(b.clone(), Box::new(body.swap(a, &b)))
            } else {
                abs
            }
        }
        Term::App(f, args) => {
            let mut args: Vec<Term> = args.iter().map(|a| perturb(rng, delta, a)).collect();
            if f.is_commutative() && rng.gen_bool(0.5) {
                args.reverse();
            }
            Term::App(f.clone(), args)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_terms_parse_back(t in term_over(ex22_sig(), &["X", "Y"], 4)) {
        prop_assert_eq!(parse_term(&t.to_string(), Some(&ex22_sig())).unwrap(), t);
    }

    #[test]
    fn alpha_c_agrees_with_ground_oracle(s in term_over(ex22_sig(), &[], 3), seed in any::<u64>()) {
        let t = perturb(&mut StdRng::seed_from_u64(seed), &FreshnessContext::new(), &s);
        prop_assert!(derive_alpha_c(&FreshnessContext::new(), &s, &t));
        prop_assert!(c_class_forms(&s).contains(&nameless(&t)));
    }

    #[test]
    fn alpha_c_is_symmetric(s in term_over(ex22_sig(), &["X"], 3), t in term_over(ex22_sig(), &["X"], 3), d in context(&["X"])) {
        prop_assert_eq!(derive_alpha_c(&d, &s, &t), derive_alpha_c(&d, &t, &s));
    }

    #[test]
    fn substitution_preserves_alpha_c(
        s in term_over(ex22_sig(), &["X", "Y"], 3),
        delta in context(&["X", "Y"]),
        theta in ground_subst(&["X", "Y"]),
        seed in any::<u64>(),
    ) {
        let t = perturb(&mut StdRng::seed_from_u64(seed), &delta, &s);
        prop_assume!(derive_alpha_c(&delta, &s, &t));
        if let Ok(nf) = freshness_context_nf(&delta, &theta) {
            prop_assert!(derive_alpha_c(&nf, &theta.apply(&s), &theta.apply(&t)));
        }
    }

    #[test]
    fn unifiers_solve_the_problem(s in term_over(ex22_sig(), &["X", "Y"], 3), t in term_over(ex22_sig(), &["X", "Z"], 3)) {
        if let Ok(sols) = solve(&FreshnessContext::new(), &s, &FreshnessContext::new(), &t, &ProtectedVars::none()) {
            for sol in sols.iter().filter(|s| s.is_closed()) {
                prop_assert!(derive_alpha_c(&sol.context, &sol.subst.apply(&s), &sol.subst.apply(&t)), "{:?}", sol);
            }
        }
    }

    #[test]
    fn ground_instances_are_unified(s in term_over(ex22_sig(), &["X", "Y"], 3), theta in ground_subst(&["X", "Y"])) {
        let target = theta.apply(&s);
        let sols = solve(&FreshnessContext::new(), &target, &FreshnessContext::new(), &s, &ProtectedVars::none()).unwrap();
        let covered = sols.iter().any(|sol| {
            sol.is_closed() && sol.context.is_empty() && c_class_forms(&sol.subst.apply(&s)).contains(&nameless(&target))
        });
        prop_assert!(covered, "{} against {}: {:?}", s, target, sols);
    }

    #[test]
    fn matching_leaves_the_term_alone(
        l in term_over(ex22_sig(), &["X"], 3),
        s in term_over(ex22_sig(), &["Y"], 3),
        delta in context(&["Y"]),
    ) {
        if let Ok(sols) = c_match(&FreshnessContext::new(), &l, &delta, &s) {
            for sol in sols {
                prop_assert!(sol.subst.domain().all(|x| x.name() == "X"), "{}", sol.subst);
                // Extra freshness may be required of `s`; it is never bound.
                prop_assert!(derive_alpha_c(&delta.union(&sol.context), &sol.subst.apply(&l), &s));
            }
        }
    }

    #[test]
    fn enumerated_fixpoints_are_solutions(p in perm()) {
        prop_assume!(!p.is_id());
        let x = Var::new("X");
        let sols = enumerate_fixpoint_solutions(&p, &x, &ex22_sig(), 2);
        prop_assert!(!sols.is_empty());
        for (ctx, sigma) in sols {
            let image = sigma.apply(&Term::var("X"));
            prop_assert!(derive_alpha_c(&ctx, &image.permute(&p), &image));
            if image.is_ground() {
                prop_assert!(c_class_forms(&image).contains(&nameless(&image.permute(&p))));
            }
        }
    }

    #[test]
    fn rewrite_steps_replay(s in term_over(prenex_sig(), &["P", "Q"], 4), delta in context(&["P", "Q"])) {
        let sys = bundled::prenex().system;
        for step in one_step_rewrites(&delta, &s, &sys).unwrap() {
            prop_assert!(replay_step(&delta, &s, &step), "{} by {}", s, step.rule);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ground_engine_steps_are_oracle_steps(s in term_over(prenex_sig(), &[], 3)) {
        let sys = bundled::prenex().system;
        let empty = FreshnessContext::new();
        let oracle = r_over_e_one_step(&s, &sys).unwrap();
        for step in one_step_rewrites(&empty, &s, &sys).unwrap() {
            prop_assert!(oracle.iter().any(|o| derive_alpha_c(&empty, o, &step.result)), "{} -> {}", s, step.result);
        }
    }

    #[test]
    fn narrowing_steps_are_rewriting_steps(s in term_over(ex22_sig(), &["X", "W"], 3), delta in context(&["X", "W"])) {
        let sys = bundled::ex22().system;
        let node = NarrowingNode::root(delta, s);
        for step in one_step_narrowings(&node, &sys, 1, 20).unwrap() {
            prop_assert!(narrowing_to_rewriting(&step, &node, &sys), "{} by {}", node.term, step.rule);
        }
    }

    #[test]
    fn deeper_search_extends_shallower(s in term_over(prenex_sig(), &["P"], 3)) {
        let sys = bundled::prenex().system;
        let empty = FreshnessContext::new();
        let t1 = narrow_search(&empty, &s, &sys, 1, 1, 10).unwrap();
        let t2 = narrow_search(&empty, &s, &sys, 2, 1, 10).unwrap();
        prop_assert_eq!(&t2.edges[..t1.edges.len()], &t1.edges[..]);
        let narrow = narrow_search(&empty, &s, &sys, 1, 1, 3).unwrap();
        let kids = |t: &nomc::narrow::NarrowingTree| t.children(0).map(|e| e.step.clone()).collect::<Vec<_>>();
        let (few, many) = (kids(&narrow), kids(&t1));
        prop_assert_eq!(&many[..few.len()], &few[..]);
    }
}

#[test]
fn bundled_files_round_trip() {
    for (name, text) in bundled::ALL {
        let file = parse_system(text).unwrap();
        let again = parse_system(&print_system(&file)).unwrap();
        assert_eq!(again, file, "{name}");
    }
}

#[test]
fn alpha_without_c_is_finer() {
    let f = nomc::syntax::Symbol::commutative("f");
    let terms = common::all_ground_terms(&ATOMS, &f, 2);
    let empty = FreshnessContext::new();
    let mut strict = 0;
    for s in &terms {
        for t in &terms {
            if derive_alpha(&empty, s, t) {
                assert!(derive_alpha_c(&empty, s, t));
            } else if derive_alpha_c(&empty, s, t) {
                strict += 1;
            }
        }
    }
    assert!(strict > 0);
}
