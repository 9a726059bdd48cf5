//! Brute-force rewriting on the whole C-class of a ground term.

use std::collections::BTreeSet;

use super::{normalize, RewriteSystem};
use crate::alpha::{derive_alpha, derive_alpha_c, derive_freshness, FreshnessContext};
use crate::error::{Error, Result};
use crate::syntax::{fresh_atom_from, paths, Atom, Perm, Substitution, Term};

/// All terms obtained by swapping or not swapping the arguments of each
/// commutative node, without repetitions. The unswapped term comes first and
/// outer swaps vary slowest.
pub fn c_variants(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    for v in variants(t) {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn variants(t: &Term) -> Vec<Term> {
    match t {
        Term::Atom(_) | Term::Susp(..) => vec![t.clone()],
        Term::Abs(a, body) => variants(body).into_iter().map(|b| Term::Abs(a.clone(), Box::new(b))).collect(),
        Term::App(f, args) => {
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for arg in args {
                let vs = variants(arg);
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        vs.iter().map(move |v| {
                            let mut c = c.clone();
                            c.push(v.clone());
                            c
                        })
                    })
                    .collect();
            }
            let mut out: Vec<Term> = combos.iter().map(|c| Term::App(f.clone(), c.clone())).collect();
            if f.is_commutative() && args.len() == 2 {
                out.extend(combos.into_iter().map(|c| Term::App(f.clone(), vec![c[1].clone(), c[0].clone()])));
            }
            out
        }
    }
}

/// The finite C-skeleton of the class of a ground term.
pub fn c_class_enumerate(t: &Term) -> Result<Vec<Term>> {
    if !t.is_ground() {
        return Err(Error::NonGround(t.to_string()));
    }
    Ok(c_variants(t))
}

/// Renamings of the binders of a ground term into `pool`, down to `depth`
/// abstraction/application levels. Below that depth the term is kept.
pub fn alpha_variants(t: &Term, pool: &BTreeSet<Atom>, depth: usize) -> Vec<Term> {
    if depth == 0 {
        return vec![t.clone()];
    }
    match t {
        Term::Atom(_) | Term::Susp(..) => vec![t.clone()],
        Term::Abs(a, body) => {
            let free = free_atoms(body);
            let mut names = pool.clone();
            names.insert(a.clone());
            let mut out = Vec::new();
            for b in &names {
                if b != a && free.contains(b) {
                    continue;
                }
                for v in alpha_variants(&body.swap(a, b), pool, depth - 1) {
                    out.push(Term::Abs(b.clone(), Box::new(v)));
                }
            }
            out
        }
        Term::App(f, args) => {
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for arg in args {
                let vs = alpha_variants(arg, pool, depth - 1);
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        vs.iter().map(move |v| {
                            let mut c = c.clone();
                            c.push(v.clone());
                            c
                        })
                    })
                    .collect();
            }
            combos.into_iter().map(|c| Term::App(f.clone(), c)).collect()
        }
    }
}

fn free_atoms(t: &Term) -> BTreeSet<Atom> {
    match t {
        Term::Atom(a) => [a.clone()].into_iter().collect(),
        Term::Susp(..) => BTreeSet::new(),
        Term::Abs(a, body) => {
            let mut s = free_atoms(body);
            s.remove(a);
            s
        }
        Term::App(_, args) => args.iter().flat_map(free_atoms).collect(),
    }
}

// First-order matching of a pattern whose variables occur as suspensions
// against a ground term; repeated variables are compared modulo α.
fn syntactic_match(pat: &Term, t: &Term, theta: &mut Substitution) -> bool {
    match (pat, t) {
        (Term::Susp(p, x), _) => {
            let u = t.permute(&p.inverse());
            match theta.get(x) {
                Some(prev) => derive_alpha(&FreshnessContext::new(), prev, &u),
                None => {
                    theta.insert(x.clone(), u);
                    true
                }
            }
        }
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Abs(a, p), Term::Abs(b, u)) => a == b && syntactic_match(p, u, theta),
        (Term::App(f, ps), Term::App(g, us)) => {
            f == g && ps.len() == us.len() && ps.iter().zip(us).all(|(p, u)| syntactic_match(p, u, theta))
        }
        _ => false,
    }
}

fn injections(sources: &[Atom], pool: &[Atom]) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut chosen: Vec<Atom> = Vec::new();
    fn go(sources: &[Atom], pool: &[Atom], chosen: &mut Vec<Atom>, out: &mut Vec<Perm>) {
        if chosen.len() == sources.len() {
            let pairs: Vec<(Atom, Atom)> = sources.iter().cloned().zip(chosen.iter().cloned()).collect();
            out.push(Perm::from_injection(&pairs));
            return;
        }
        for b in pool {
            if !chosen.contains(b) {
                chosen.push(b.clone());
                go(sources, pool, chosen, out);
                chosen.pop();
            }
        }
    }
    go(sources, pool, &mut chosen, &mut out);
    out
}

/// One `→R/C` step from a ground term: plain nominal rewriting applied to
/// every C-variant and binder renaming of each subterm. Results are returned
/// modulo `≈α`.
pub fn r_over_e_one_step(s: &Term, system: &RewriteSystem) -> Result<Vec<Term>> {
    oracle_steps(s, system, false)
}

fn oracle_steps(s: &Term, system: &RewriteSystem, first_only: bool) -> Result<Vec<Term>> {
    if !s.is_ground() {
        return Err(Error::NonGround(s.to_string()));
    }
    let mut pool: BTreeSet<Atom> = s.atoms();
    pool.extend(system.atoms());
    pool.insert(fresh_atom_from(&pool, "c"));
    let pool_vec: Vec<Atom> = pool.iter().cloned().collect();
    let empty = FreshnessContext::new();
    let mut out: Vec<Term> = Vec::new();
    for path in paths(s) {
        let sub = s.subterm_at(&path).expect("enumerated path");
        for rule in system.rules() {
            let sources: Vec<Atom> = rule.atoms().into_iter().collect();
            let perms = injections(&sources, &pool_vec);
            let depth = rule.lhs.depth();
            for cv in c_variants(sub) {
                for av in alpha_variants(&cv, &pool, depth) {
                    for pi in &perms {
                        let lhs = rule.lhs.permute(pi);
                        let mut theta = Substitution::id();
                        if !syntactic_match(&lhs, &av, &mut theta) {
                            continue;
                        }
                        let fresh_ok = rule.context.iter().all(|c| {
                            derive_freshness(&empty, &c.atom, &theta.lookup(&c.var))
                        });
                        if !fresh_ok {
                            continue;
                        }
                        let reduct = theta.apply(&rule.rhs.permute(pi));
                        let result = s.replace_at(&path, reduct).expect("enumerated path");
                        if !out.iter().any(|o| derive_alpha(&empty, o, &result)) {
                            out.push(result);
                            if first_only {
                                return Ok(out);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Iterates the first `→R/C` result until none exists.
pub fn r_over_e_normalize(s: &Term, system: &RewriteSystem, max_steps: usize) -> Result<(Term, usize)> {
    let mut current = s.clone();
    for n in 0..=max_steps {
        match oracle_steps(&current, system, true)?.into_iter().next() {
            None => return Ok((current, n)),
            Some(_) if n == max_steps => break,
            Some(next) => current = next,
        }
    }
    Err(Error::StepLimit { max_steps })
}

/// Compares the `R,C`-normal form from [`normalize`] with the `R/C`-normal
/// form from the oracle, modulo `≈α,C`.
pub fn normal_form_equal_check(
    delta: &FreshnessContext,
    t: &Term,
    system: &RewriteSystem,
    max_steps: usize,
) -> Result<bool> {
    let (nf1, _) = normalize(delta, t, system, max_steps)?;
    let (nf2, _) = r_over_e_normalize(t, system, max_steps)?;
    Ok(derive_alpha_c(delta, &nf1, &nf2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Symbol;

    fn oplus(s: Term, t: Term) -> Term {
        Term::app(Symbol::commutative("oplus"), vec![s, t])
    }

    #[test]
    fn one_commutative_node() {
        let t = oplus(Term::atom("a"), Term::atom("b"));
        assert_eq!(c_class_enumerate(&t).unwrap(), vec![t.clone(), oplus(Term::atom("b"), Term::atom("a"))]);
    }

    #[test]
    fn nested_commutative_nodes() {
        let ab = oplus(Term::atom("a"), Term::atom("b"));
        let ba = oplus(Term::atom("b"), Term::atom("a"));
        let t = oplus(ab.clone(), ab.clone());
        // Eight swap choices, four distinct terms.
        assert_eq!(variants(&t).len(), 8);
        let got: BTreeSet<Term> = c_variants(&t).into_iter().collect();
        let want: BTreeSet<Term> = [
            oplus(ab.clone(), ab.clone()),
            oplus(ab.clone(), ba.clone()),
            oplus(ba.clone(), ab),
            oplus(ba.clone(), ba),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn free_symbols_and_non_ground() {
        let t = Term::app(Symbol::new("f"), vec![Term::atom("a")]);
        assert_eq!(c_class_enumerate(&t).unwrap(), vec![t]);
        assert!(matches!(c_class_enumerate(&Term::var("X")), Err(Error::NonGround(_))));
    }

    #[test]
    fn binder_renamings() {
        let t = Term::abs("a", Term::app(Symbol::new("f"), vec![Term::atom("a"), Term::atom("b")]));
        let pool: BTreeSet<Atom> = ["a", "b", "c"].into_iter().map(Atom::new).collect();
        let vs = alpha_variants(&t, &pool, 3);
        // b is free in the body, so only a and c can bind.
        assert_eq!(vs.len(), 2);
        assert!(vs.iter().all(|v| derive_alpha(&FreshnessContext::new(), v, &t)));
    }
}
