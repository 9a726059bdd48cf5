#![allow(dead_code)]

use std::collections::BTreeSet;

use nomc::alpha::FreshnessContext;
use nomc::syntax::{Atom, Perm, Signature, Symbol, Term, Var};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

fn sym(sig: &Signature, name: &str) -> Symbol {
    sig.symbol(name).expect("declared symbol")
}

pub fn random_perm(rng: &mut StdRng, atoms: &[&str]) -> Perm {
    let n = rng.gen_range(0..=2);
    let swaps = (0..n)
        .filter_map(|_| {
            let a = *atoms.choose(rng).unwrap();
            let b = *atoms.choose(rng).unwrap();
            (a != b).then(|| (Atom::new(a), Atom::new(b)))
        })
        .collect();
    Perm::from_swaps(swaps)
}

/// A formula over `and`, `or`, `not`, `forall`, `exists`; a quantifier with
/// its binder counts as one level. Leaves come from `leaf`.
pub fn prenex_formula(
    rng: &mut StdRng,
    sig: &Signature,
    depth: usize,
    leaf: &mut dyn FnMut(&mut StdRng) -> Term,
) -> Term {
    if depth == 0 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    match rng.gen_range(0..5) {
        0 | 1 => {
            let f = sym(sig, if rng.gen_bool(0.5) { "and" } else { "or" });
            let l = prenex_formula(rng, sig, depth - 1, leaf);
            let r = prenex_formula(rng, sig, depth - 1, leaf);
            Term::app(f, vec![l, r])
        }
        2 => Term::app(sym(sig, "not"), vec![prenex_formula(rng, sig, depth - 1, leaf)]),
        _ => {
            let q = sym(sig, if rng.gen_bool(0.5) { "forall" } else { "exists" });
            let a = *ATOMS.choose(rng).unwrap();
            Term::app(q, vec![Term::abs(a, prenex_formula(rng, sig, depth - 1, leaf))])
        }
    }
}

pub fn ground_leaf(rng: &mut StdRng) -> Term {
    Term::atom(ATOMS.choose(rng).unwrap())
}

/// Atoms, or suspensions over `vars`.
pub fn open_leaf<'a>(vars: &'a [&'a str]) -> impl FnMut(&mut StdRng) -> Term + 'a {
    move |rng| {
        if rng.gen_bool(0.3) {
            ground_leaf(rng)
        } else {
            Term::susp(random_perm(rng, &ATOMS), Var::new(vars.choose(rng).unwrap()))
        }
    }
}

/// A term over `h`, `fC`, `oplus` and abstractions.
pub fn ex22_term(rng: &mut StdRng, sig: &Signature, depth: usize, leaf: &mut dyn FnMut(&mut StdRng) -> Term) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    match rng.gen_range(0..4) {
        0 => Term::app(sym(sig, "h"), vec![ex22_term(rng, sig, depth - 1, leaf)]),
        1 => Term::abs(ATOMS.choose(rng).unwrap(), ex22_term(rng, sig, depth - 1, leaf)),
        k => {
            let f = sym(sig, if k == 2 { "fC" } else { "oplus" });
            let l = ex22_term(rng, sig, depth - 1, leaf);
            let r = ex22_term(rng, sig, depth - 1, leaf);
            Term::app(f, vec![l, r])
        }
    }
}

pub fn random_context(rng: &mut StdRng, vars: &[&str], density: f64) -> FreshnessContext {
    let mut ctx = FreshnessContext::new();
    for x in vars {
        for a in ATOMS {
            if rng.gen_bool(density) {
                ctx.insert(Atom::new(a), Var::new(x));
            }
        }
    }
    ctx
}

/// Every ground term of height at most `height` (atoms have height 1) over
/// `atoms`, abstraction and the binary symbol `f`.
pub fn all_ground_terms(atoms: &[&str], f: &Symbol, height: usize) -> Vec<Term> {
    let leaves: Vec<Term> = atoms.iter().map(|a| Term::atom(a)).collect();
    let mut terms = leaves.clone();
    for _ in 1..height {
        let mut next = leaves.clone();
        for a in atoms {
            next.extend(terms.iter().map(|t| Term::abs(a, t.clone())));
        }
        for l in &terms {
            for r in &terms {
                next.push(Term::app(f.clone(), vec![l.clone(), r.clone()]));
            }
        }
        terms = next;
    }
    terms
}

/// Locally nameless form of a ground term: bound atoms become indices, so
/// two ground terms are alpha-equivalent exactly when their forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nameless {
    Free(String),
    Bound(usize),
    Abs(Box<Nameless>),
    App(String, Vec<Nameless>),
}

pub fn nameless(t: &Term) -> Nameless {
    fn go(t: &Term, binders: &mut Vec<Atom>) -> Nameless {
        match t {
            Term::Atom(a) => match binders.iter().rev().position(|b| b == a) {
                Some(i) => Nameless::Bound(i),
                None => Nameless::Free(a.name().to_string()),
            },
            Term::Abs(a, body) => {
                binders.push(a.clone());
                let n = go(body, binders);
                binders.pop();
                Nameless::Abs(Box::new(n))
            }
            Term::App(f, args) => Nameless::App(f.name().to_string(), args.iter().map(|a| go(a, binders)).collect()),
            Term::Susp(..) => panic!("nameless form of a non-ground term"),
        }
    }
    go(t, &mut Vec::new())
}

/// Nameless forms of the whole C-class of a ground term, obtained by
/// swapping the arguments of commutative nodes in every combination.
pub fn c_class_forms(t: &Term) -> BTreeSet<Nameless> {
    fn variants(t: &Term) -> Vec<Term> {
        match t {
            Term::Atom(_) | Term::Susp(..) => vec![t.clone()],
            Term::Abs(a, body) => variants(body).into_iter().map(|b| Term::Abs(a.clone(), Box::new(b))).collect(),
            Term::App(f, args) => {
                let mut out: Vec<Vec<Term>> = vec![Vec::new()];
                for arg in args {
                    let vs = variants(arg);
                    out = out.iter().flat_map(|p| vs.iter().map(move |v| [p.clone(), vec![v.clone()]].concat())).collect();
                }
                let mut terms: Vec<Term> = out.iter().map(|c| Term::App(f.clone(), c.clone())).collect();
                if f.is_commutative() {
                    terms.extend(out.into_iter().map(|mut c| {
                        c.reverse();
                        Term::App(f.clone(), c)
                    }));
                }
                terms
            }
        }
    }
    variants(t).iter().map(nameless).collect()
}

pub fn vars_of(names: &[&str]) -> BTreeSet<Var> {
    names.iter().map(Var::new).collect()
}
