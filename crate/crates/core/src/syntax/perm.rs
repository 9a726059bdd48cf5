use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::Atom;

/// A finite permutation of atoms, stored as a sequence of swappings applied
/// right to left: `(a b)(c d)` first swaps `c` and `d`, then `a` and `b`.
///
/// The sequence is kept in a canonical form derived from the cycle
/// decomposition, so two permutations are `==` exactly when they act the
/// same on every atom. Each cycle `a1 -> a2 -> ... -> ak` (with `a1` its
/// least atom) is written `(a1 ak)...(a1 a2)`, cycles ordered by least atom.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    swaps: Vec<(Atom, Atom)>,
}

impl Perm {
    pub fn id() -> Perm {
        Perm { swaps: Vec::new() }
    }

    pub fn swap(a: Atom, b: Atom) -> Perm {
        Perm::from_swaps(vec![(a, b)])
    }

    /// Builds the permutation denoted by a swapping sequence (rightmost first).
    pub fn from_swaps(swaps: Vec<(Atom, Atom)>) -> Perm {
        let mut support: BTreeSet<Atom> = BTreeSet::new();
        for (a, b) in &swaps {
            support.insert(a.clone());
            support.insert(b.clone());
        }
        let raw = Perm { swaps };
        let mapping: BTreeMap<Atom, Atom> = support
            .into_iter()
            .map(|a| {
                let image = raw.apply_raw(&a);
                (a, image)
            })
            .filter(|(a, b)| a != b)
            .collect();
        Perm::from_mapping(&mapping)
    }

    /// Builds a permutation from its graph on the moved atoms. The map must be
    /// a bijection on its key set.
    fn from_mapping(mapping: &BTreeMap<Atom, Atom>) -> Perm {
        let mut seen: BTreeSet<&Atom> = BTreeSet::new();
        let mut swaps = Vec::new();
        for start in mapping.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            seen.insert(start);
            let mut next = &mapping[start];
            while next != start {
                seen.insert(next);
                cycle.push(next.clone());
                next = &mapping[next];
            }
            for later in cycle[1..].iter().rev() {
                swaps.push((cycle[0].clone(), later.clone()));
            }
        }
        Perm { swaps }
    }

    /// The permutation sending each `from` atom to its `to` atom, extended to a
    /// bijection on the atoms involved. `from` atoms must be pairwise distinct,
    /// as must `to` atoms.
    pub fn from_injection(pairs: &[(Atom, Atom)]) -> Perm {
        let mut mapping: BTreeMap<Atom, Atom> = pairs.iter().cloned().collect();
        let domain: BTreeSet<Atom> = mapping.keys().cloned().collect();
        let image: BTreeSet<Atom> = mapping.values().cloned().collect();
        let spare_sources = image.difference(&domain).cloned();
        let spare_targets: Vec<Atom> = domain.difference(&image).cloned().collect();
        for (src, dst) in spare_sources.zip(spare_targets) {
            mapping.insert(src, dst);
        }
        mapping.retain(|a, b| a != b);
        Perm::from_mapping(&mapping)
    }

    fn apply_raw(&self, a: &Atom) -> Atom {
        let mut cur = a.clone();
        for (x, y) in self.swaps.iter().rev() {
            if cur == *x {
                cur = y.clone();
            } else if cur == *y {
                cur = x.clone();
            }
        }
        cur
    }

    /// The image of `a`.
    pub fn apply(&self, a: &Atom) -> Atom {
        self.apply_raw(a)
    }

    pub fn swaps(&self) -> &[(Atom, Atom)] {
        &self.swaps
    }

    pub fn is_id(&self) -> bool {
        self.swaps.is_empty()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut swaps = self.swaps.clone();
        swaps.extend(other.swaps.iter().cloned());
        Perm::from_swaps(swaps)
    }

    pub fn inverse(&self) -> Perm {
        Perm::from_swaps(self.swaps.iter().rev().cloned().collect())
    }

    /// Atoms moved by the permutation.
    pub fn support(&self) -> BTreeSet<Atom> {
        self.swaps
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect()
    }

    /// Atoms on which `self` and `other` disagree.
    pub fn difference_set(&self, other: &Perm) -> BTreeSet<Atom> {
        self.support()
            .union(&other.support())
            .filter(|a| self.apply(a) != other.apply(a))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swaps.is_empty() {
            return f.write_str("id");
        }
        for (a, b) in &self.swaps {
            write!(f, "({a} {b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Atom {
        Atom::new(s)
    }

    fn sw(a: &str, b: &str) -> (Atom, Atom) {
        (at(a), at(b))
    }

    #[test]
    fn single_swap_exchanges() {
        let p = Perm::swap(at("a"), at("b"));
        assert_eq!(p.apply(&at("a")), at("b"));
        assert_eq!(p.apply(&at("b")), at("a"));
        assert_eq!(p.apply(&at("c")), at("c"));
    }

    #[test]
    fn identity_fixes_everything() {
        assert_eq!(Perm::id().apply(&at("c")), at("c"));
    }

    #[test]
    fn swaps_apply_right_to_left() {
        let p = Perm::from_swaps(vec![sw("a", "b"), sw("c", "d")]);
        assert_eq!(p.apply(&at("c")), at("d"));
        // (a b)(a c): c -> a -> b
        let q = Perm::from_swaps(vec![sw("a", "b"), sw("a", "c")]);
        assert_eq!(q.apply(&at("c")), at("b"));
        assert_eq!(q.apply(&at("a")), at("c"));
        assert_eq!(q.apply(&at("b")), at("a"));
    }

    #[test]
    fn cancelling_swaps_collapse_to_identity() {
        let p = Perm::from_swaps(vec![sw("a", "b"), sw("b", "a")]);
        assert!(p.is_id());
        assert_eq!(p, Perm::id());
    }

    #[test]
    fn disjoint_swaps_keep_their_written_form() {
        let p = Perm::from_swaps(vec![sw("a", "b"), sw("c", "d")]);
        assert_eq!(p.to_string(), "(a b)(c d)");
    }

    #[test]
    fn difference_set_examples() {
        let p = Perm::from_swaps(vec![sw("a", "b"), sw("c", "d")]);
        let q = Perm::swap(at("c"), at("b"));
        let ds: Vec<_> = p.difference_set(&q).into_iter().collect();
        assert_eq!(ds, vec![at("a"), at("b"), at("c"), at("d")]);
        assert!(p.difference_set(&p).is_empty());
        let ab = Perm::swap(at("a"), at("b"));
        let ds: Vec<_> = ab.difference_set(&Perm::id()).into_iter().collect();
        assert_eq!(ds, vec![at("a"), at("b")]);
    }

    #[test]
    fn injection_is_realised() {
        let p = Perm::from_injection(&[sw("a", "c")]);
        assert_eq!(p.apply(&at("a")), at("c"));
        assert_eq!(p.apply(&at("c")), at("a"));
        let q = Perm::from_injection(&[sw("a", "b"), sw("b", "c")]);
        assert_eq!(q.apply(&at("a")), at("b"));
        assert_eq!(q.apply(&at("b")), at("c"));
        assert_eq!(q.apply(&at("c")), at("a"));
    }
}
