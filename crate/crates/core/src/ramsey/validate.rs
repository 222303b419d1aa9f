//! Brute-force re-checks of certificates.
//!
//! Nothing here calls the search code or the hom-set enumerators used to
//! produce certificates: hom-sets are rebuilt from raw operation tables and
//! colorings are compared directly.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{coloring_count, ArrowCertificate, Category, Coloring, Direction, Object, Verdict};
use crate::algebras::FiniteAlgebra;
use crate::chains::{index_tuple, tuple_index, ChainMap};
use crate::ordered::OrderedAlgebra;

/// Colorings enumerated when revalidating a universal claim.
pub const BRUTE_FORCE_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validation {
    Confirmed,
    Rejected(String),
    Unverifiable(String),
}

impl Validation {
    pub fn confirmed(&self) -> bool {
        *self == Validation::Confirmed
    }
}

fn first_occurrences_increase(images: &[usize], k: usize) -> bool {
    let mut next = 0;
    for &y in images {
        if y == next {
            next += 1;
        } else if y > next {
            return false;
        }
    }
    next == k
}

fn chain_maps(n: usize, k: usize) -> Vec<ChainMap> {
    let total = match coloring_count(k, n) {
        Some(t) => t,
        None => return Vec::new(),
    };
    (0..total)
        .map(|i| index_tuple(i, k, n))
        .filter(|t| first_occurrences_increase(t, k))
        .map(|t| ChainMap { n, k, table: t })
        .collect()
}

/// Homomorphisms `a → b` found by assigning elements in index order and
/// checking every table entry as soon as it is fully assigned.
fn algebra_maps(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    // entries fully inside the assigned prefix that involve the newest element
    fn consistent(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize], newest: usize) -> bool {
        let known = map.len();
        (0..a.signature().len()).all(|s| {
            let arity = a.signature().arity(s);
            (0..known.pow(arity as u32)).all(|i| {
                let args = index_tuple(i, known, arity);
                let r = a.table(s)[tuple_index(&args, a.size())];
                if r >= known || !(r == newest || args.contains(&newest)) {
                    return true;
                }
                let imgs: Vec<usize> = args.iter().map(|&x| map[x]).collect();
                map[r] == b.table(s)[tuple_index(&imgs, b.size())]
            })
        })
    }
    fn go(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if map.len() == a.size() {
            out.push(map.clone());
            return;
        }
        for y in 0..b.size() {
            map.push(y);
            if consistent(a, b, map, map.len() - 1) {
                go(a, b, map, out);
            }
            map.pop();
        }
    }
    let mut out = Vec::new();
    if a.signature() == b.signature() {
        go(a, b, &mut Vec::with_capacity(a.size()), &mut out);
    }
    out
}

fn onto(table: &[usize], k: usize) -> bool {
    let mut hit = vec![false; k];
    table.iter().for_each(|&y| hit[y] = true);
    hit.into_iter().all(|h| h)
}

fn ordered_maps(a: &OrderedAlgebra, b: &OrderedAlgebra) -> Vec<Vec<usize>> {
    algebra_maps(a.algebra(), b.algebra())
        .into_iter()
        .filter(|t| {
            let positions: Vec<usize> = a.order().iter().map(|&x| b.rank(t[x])).collect();
            first_occurrences_increase(&positions, b.size())
        })
        .collect()
}

/// The morphisms `from → to`, rebuilt independently and sorted.
pub fn brute_hom(category: Category, from: &Object, to: &Object) -> Option<Vec<ChainMap>> {
    let mut maps: Vec<ChainMap> = match (category, from, to) {
        (Category::ChainsRs, Object::Chain(n), Object::Chain(k)) => chain_maps(*n, *k),
        (Category::OrderedAlgebrasRe, Object::Ordered(a), Object::Ordered(b)) => ordered_maps(a, b)
            .into_iter()
            .map(|t| ChainMap { n: a.size(), k: b.size(), table: t })
            .collect(),
        (Category::AlgebrasEpi, Object::Algebra(a), Object::Algebra(b)) => algebra_maps(a, b)
            .into_iter()
            .filter(|t| onto(t, b.size()))
            .map(|t| ChainMap { n: a.size(), k: b.size(), table: t })
            .collect(),
        _ => return None,
    };
    maps.sort();
    Some(maps)
}

struct Homs {
    colored: Vec<ChainMap>,
    witnesses: Vec<ChainMap>,
    connecting: Vec<ChainMap>,
    direction: Direction,
}

impl Homs {
    fn build(category: Category, direction: Direction, (c, b, a): (&Object, &Object, &Object)) -> Option<Homs> {
        let (colored, witnesses, connecting) = match direction {
            Direction::Dual => (brute_hom(category, c, a)?, brute_hom(category, c, b)?, brute_hom(category, b, a)?),
            Direction::Direct => (brute_hom(category, a, c)?, brute_hom(category, b, c)?, brute_hom(category, a, b)?),
        };
        Some(Homs {
            colored,
            witnesses,
            connecting,
            direction,
        })
    }

    fn composite(&self, w: &ChainMap, f: &ChainMap) -> ChainMap {
        let (first, second) = match self.direction {
            Direction::Dual => (w, f),
            Direction::Direct => (f, w),
        };
        ChainMap {
            n: first.n,
            k: second.k,
            table: first.table.iter().map(|&x| second.table[x]).collect(),
        }
    }

    fn colors_met(&self, w: &ChainMap, color: impl Fn(&ChainMap) -> Option<usize>) -> Option<usize> {
        let mut seen: Vec<usize> = Vec::new();
        for f in &self.connecting {
            let c = color(&self.composite(w, f))?;
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        Some(seen.len())
    }
}

/// Whether `witness` meets at most `t` colors of `coloring`.
pub fn validate_witness(
    category: Category,
    direction: Direction,
    objects: (&Object, &Object, &Object),
    coloring: &Coloring,
    witness: &ChainMap,
    t: usize,
) -> Validation {
    let Some(homs) = Homs::build(category, direction, objects) else {
        return Validation::Rejected("objects do not match the category".into());
    };
    if coloring.domain != homs.colored {
        return Validation::Rejected("coloring domain differs from the recomputed hom-set".into());
    }
    if !homs.witnesses.contains(witness) {
        return Validation::Rejected("witness is not a morphism of the category".into());
    }
    match homs.colors_met(witness, |f| coloring.color_of(f)) {
        Some(n) if n <= t => Validation::Confirmed,
        Some(n) => Validation::Rejected(format!("witness meets {n} colors")),
        None => Validation::Rejected("composite outside the coloring".into()),
    }
}

/// Whether `coloring` defeats every witness.
pub fn validate_refutation(category: Category, direction: Direction, objects: (&Object, &Object, &Object), coloring: &Coloring, t: usize) -> Validation {
    let Some(homs) = Homs::build(category, direction, objects) else {
        return Validation::Rejected("objects do not match the category".into());
    };
    if coloring.domain != homs.colored {
        return Validation::Rejected("coloring domain differs from the recomputed hom-set".into());
    }
    for w in &homs.witnesses {
        match homs.colors_met(w, |f| coloring.color_of(f)) {
            Some(n) if n > t => {}
            _ => return Validation::Rejected("some witness meets at most t colors".into()),
        }
    }
    Validation::Confirmed
}

/// Re-derives a certificate's verdict from scratch. Universal claims are
/// rechecked by listing every coloring when there are at most
/// [`BRUTE_FORCE_LIMIT`] of them.
pub fn validate_certificate(objects: (&Object, &Object, &Object), cert: &ArrowCertificate) -> Validation {
    let q = &cert.query;
    if (objects.0.size(), objects.1.size(), objects.2.size()) != (q.c, q.b, q.a) {
        return Validation::Rejected("objects do not match the query".into());
    }
    match &cert.verdict {
        Verdict::Fails { coloring } => validate_refutation(q.category, q.direction, objects, coloring, q.t),
        Verdict::Unknown { .. } => Validation::Unverifiable("undecided".into()),
        Verdict::Holds { witness, colors } => {
            let Some(homs) = Homs::build(q.category, q.direction, objects) else {
                return Validation::Rejected("objects do not match the category".into());
            };
            if let (Some(w), None) = (witness, colors) {
                // a witness claimed good for every coloring
                let mut composites: Vec<ChainMap> = homs.connecting.iter().map(|f| homs.composite(w, f)).collect();
                composites.sort();
                composites.dedup();
                if homs.witnesses.contains(w) && composites.len().min(q.k) <= q.t {
                    return Validation::Confirmed;
                }
            }
            let m = homs.colored.len();
            match coloring_count(q.k, m) {
                Some(total) if total <= BRUTE_FORCE_LIMIT => {
                    for i in 0..total {
                        let colors = index_tuple(i, q.k, m);
                        let color = |f: &ChainMap| homs.colored.binary_search(f).ok().map(|j| colors[j]);
                        let ok = homs
                            .witnesses
                            .iter()
                            .any(|w| homs.colors_met(w, color).is_some_and(|n| n <= q.t));
                        if !ok {
                            return Validation::Rejected(format!("coloring {colors:?} has no witness"));
                        }
                    }
                    Validation::Confirmed
                }
                _ => naive_search(&homs, q.k, q.t),
            }
        }
    }
}

/// Looks for a refuting coloring by assigning colors in index order, with
/// the first color fixed, rejecting a branch as soon as some witness has all
/// its composites colored with at most `t` colors.
fn naive_search(homs: &Homs, k: usize, t: usize) -> Validation {
    let m = homs.colored.len();
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m];
    for w in &homs.witnesses {
        let mut items: Vec<usize> = Vec::new();
        for f in &homs.connecting {
            match homs.colored.binary_search(&homs.composite(w, f)) {
                Ok(i) => items.push(i),
                Err(_) => return Validation::Rejected("composite outside the colored hom-set".into()),
            }
        }
        match items.iter().max() {
            Some(&last) => closing[last].push(items),
            None => return Validation::Confirmed,
        }
    }
    if homs.witnesses.is_empty() {
        return Validation::Rejected("no witnesses at all".into());
    }
    let mut colors = vec![0usize; m];
    let mut nodes = 0u64;
    // Some(true): refutation found; Some(false): none; None: out of nodes
    fn go(i: usize, colors: &mut Vec<usize>, closing: &[Vec<Vec<usize>>], k: usize, t: usize, nodes: &mut u64) -> Option<bool> {
        if i == colors.len() {
            return Some(true);
        }
        let choices = if i == 0 { 1 } else { k };
        for c in 0..choices {
            *nodes += 1;
            if *nodes > NAIVE_NODE_LIMIT {
                return None;
            }
            colors[i] = c;
            let alive = closing[i].iter().all(|items| {
                let mut seen: Vec<usize> = items.iter().map(|&j| colors[j]).collect();
                seen.sort_unstable();
                seen.dedup();
                seen.len() > t
            });
            if alive && go(i + 1, colors, closing, k, t, nodes)? {
                return Some(true);
            }
        }
        Some(false)
    }
    match go(0, &mut colors, &closing, k, t, &mut nodes) {
        Some(false) => Validation::Confirmed,
        Some(true) => Validation::Rejected(format!("coloring {colors:?} has no witness")),
        None => Validation::Unverifiable(format!("no decision within {NAIVE_NODE_LIMIT} nodes")),
    }
}

/// Nodes visited by the fallback search before giving up.
pub const NAIVE_NODE_LIMIT: u64 = 200_000_000;

/// Whether a carrier map is a rigid epimorphism, checked from raw tables.
pub fn is_rigid_epi_raw(a: &OrderedAlgebra, b: &OrderedAlgebra, table: &[usize]) -> bool {
    if a.signature() != b.signature() || table.len() != a.size() || table.iter().any(|&y| y >= b.size()) {
        return false;
    }
    let sig = a.signature();
    let hom = (0..sig.len()).all(|s| {
        let arity = sig.arity(s);
        (0..a.size().pow(arity as u32)).all(|i| {
            let args = index_tuple(i, a.size(), arity);
            let imgs: Vec<usize> = args.iter().map(|&x| table[x]).collect();
            table[a.algebra().table(s)[i]] == b.algebra().table(s)[tuple_index(&imgs, b.size())]
        })
    });
    let positions: Vec<usize> = a.order().iter().map(|&x| b.rank(table[x])).collect();
    hom && first_occurrences_increase(&positions, b.size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::enumerate_rigid_surjections;
    use crate::ramsey::{check_arrow, hom, SearchConfig};
    use crate::terms::Signature;

    #[test]
    fn brute_homs_agree() {
        for n in 1..=5 {
            for k in 1..=n {
                let brute = brute_hom(Category::ChainsRs, &Object::Chain(n), &Object::Chain(k)).unwrap();
                assert_eq!(brute, enumerate_rigid_surjections(n, k));
            }
        }
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        let a = FiniteAlgebra::from_fn(sig.clone(), 4, |_, x| x[0] & x[1]).unwrap();
        let b = FiniteAlgebra::from_fn(sig, 2, |_, x| x[0].min(x[1])).unwrap();
        let (oa, ob) = (Object::Algebra(a.clone()), Object::Algebra(b.clone()));
        assert_eq!(brute_hom(Category::AlgebrasEpi, &oa, &ob), Some(hom(Category::AlgebrasEpi, &oa, &ob).unwrap()));
        let (pa, pb) = (Object::Ordered(OrderedAlgebra::natural(a)), Object::Ordered(OrderedAlgebra::natural(b)));
        assert_eq!(
            brute_hom(Category::OrderedAlgebrasRe, &pa, &pb),
            Some(hom(Category::OrderedAlgebrasRe, &pa, &pb).unwrap())
        );
    }

    #[test]
    fn certificates_revalidate() {
        let cfg = SearchConfig::default();
        for (c, b, a) in [(3, 2, 2), (3, 3, 2), (4, 3, 2), (5, 3, 2), (4, 2, 1)] {
            let objs = (&Object::Chain(c), &Object::Chain(b), &Object::Chain(a));
            let cert = check_arrow(Category::ChainsRs, Direction::Dual, objs.0, objs.1, objs.2, 2, 1, &cfg).unwrap();
            assert!(validate_certificate(objs, &cert).confirmed(), "{c} {b} {a}");
        }
    }
}
