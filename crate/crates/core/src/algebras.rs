//! Finite algebras given by operation tables, and free algebras of the
//! varieties they generate.
//!
//! A variety is presented by finitely many finite generator algebras; two
//! terms are identified in the variety exactly when they agree under every
//! assignment in every generator. The free algebra on `n` generators is then
//! the subalgebra of a power of the generators spanned by the projection
//! tuples, which keeps it finite and computable.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::chains::{index_tuple, tuple_index};
use crate::terms::{Signature, Term};
use crate::{Error, Result};

/// An algebra on the carrier `0..size`. Each operation is a flat table
/// indexed by the argument tuple, first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(signature: Signature, size: usize, tables: Vec<Vec<usize>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (s, table) in tables.iter().enumerate() {
            let expected = size.pow(signature.arity(s) as u32);
            if table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {expected}",
                    signature.name(s),
                    table.len()
                )));
            }
            if table.iter().any(|&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` leaves the carrier",
                    signature.name(s)
                )));
            }
        }
        Ok(FiniteAlgebra {
            signature,
            size,
            tables,
        })
    }

    /// Builds every table from `op(symbol, args)`.
    pub fn from_fn(signature: Signature, size: usize, op: impl Fn(usize, &[usize]) -> usize) -> Result<Self> {
        let tables = (0..signature.len())
            .map(|s| {
                let arity = signature.arity(s);
                (0..size.pow(arity as u32))
                    .map(|i| op(s, &index_tuple(i, size, arity)))
                    .collect()
            })
            .collect();
        FiniteAlgebra::new(signature, size, tables)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self, symbol: usize) -> &[usize] {
        &self.tables[symbol]
    }

    pub fn apply(&self, symbol: usize, args: &[usize]) -> usize {
        self.tables[symbol][tuple_index(args, self.size)]
    }

    /// Value of `t` with variable `x_i` bound to `assignment[i]`.
    pub fn evaluate(&self, t: &Term, assignment: &[usize]) -> Result<usize> {
        match t {
            Term::Var(x) => assignment.get(*x).copied().ok_or(Error::UnboundVariable(*x)),
            Term::App(s, args) => {
                if *s >= self.signature.len() || self.signature.arity(*s) != args.len() {
                    return Err(Error::InvalidTerm(format!("symbol index {s} with {} arguments", args.len())));
                }
                let vals = args
                    .iter()
                    .map(|a| self.evaluate(a, assignment))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.apply(*s, &vals))
            }
        }
    }

    /// Whether `t1 ≈ t2` holds under every assignment.
    pub fn satisfies_identity(&self, t1: &Term, t2: &Term) -> bool {
        let nvars = t1.max_var().max(t2.max_var()).map_or(0, |m| m + 1);
        (0..self.size.pow(nvars as u32)).all(|i| {
            let a = index_tuple(i, self.size, nvars);
            self.evaluate(t1, &a).ok() == self.evaluate(t2, &a).ok()
        })
    }

    /// Elements reachable from `seeds` (and the constants), seeds first, the
    /// rest in order of discovery.
    pub fn closure(&self, seeds: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.size];
        let mut list = Vec::new();
        for &s in seeds {
            if !members[s] {
                members[s] = true;
                list.push(s);
            }
        }
        let mut frontier = 0;
        loop {
            let before = list.len();
            for s in 0..self.signature.len() {
                let arity = self.signature.arity(s);
                for_each_new_tuple(before, frontier, arity, |idx| {
                    let args: Vec<usize> = idx.iter().map(|&i| list[i]).collect();
                    let r = self.apply(s, &args);
                    if !members[r] {
                        members[r] = true;
                        list.push(r);
                    }
                });
            }
            if list.len() == before {
                return list;
            }
            frontier = before;
        }
    }

    /// A generating set picked greedily in carrier order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = vec![false; self.size];
        for r in self.closure(&[]) {
            reached[r] = true;
        }
        for e in 0..self.size {
            if !reached[e] {
                gens.push(e);
                for r in self.closure(&gens) {
                    reached[r] = true;
                }
            }
        }
        if gens.is_empty() {
            gens.push(0);
        }
        gens
    }

    /// The subalgebra generated by `gens` with its inclusion map.
    pub fn generated_subalgebra(&self, gens: &[usize]) -> Result<(FiniteAlgebra, Vec<usize>)> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.size) {
            return Err(Error::InvalidAlgebra(format!("generator {g} outside the carrier")));
        }
        let inclusion = self.closure(gens);
        if inclusion.is_empty() {
            return Err(Error::InvalidAlgebra("empty subalgebra".into()));
        }
        let position: BTreeMap<usize, usize> = inclusion.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let sub = FiniteAlgebra::from_fn(self.signature.clone(), inclusion.len(), |s, args| {
            let lifted: Vec<usize> = args.iter().map(|&a| inclusion[a]).collect();
            position[&self.apply(s, &lifted)]
        })?;
        Ok((sub, inclusion))
    }
}

/// Calls `f` on every index tuple over `0..len` that uses at least one index
/// `>= frontier`.
fn for_each_new_tuple(len: usize, frontier: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if arity == 0 {
        if frontier == 0 {
            f(&[]);
        }
        return;
    }
    if len == 0 {
        return;
    }
    let mut idx = vec![0; arity];
    loop {
        if idx.iter().any(|&i| i >= frontier) {
            f(&idx);
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < len {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Whether `table` commutes with every operation.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, table: &[usize]) -> bool {
    if a.signature != b.signature || table.len() != a.size || table.iter().any(|&x| x >= b.size) {
        return false;
    }
    (0..a.signature.len()).all(|s| {
        let arity = a.signature.arity(s);
        (0..a.size.pow(arity as u32)).all(|i| {
            let args = index_tuple(i, a.size, arity);
            let mapped: Vec<usize> = args.iter().map(|&x| table[x]).collect();
            table[a.apply(s, &args)] == b.apply(s, &mapped)
        })
    })
}

/// A carrier map between two algebras that commutes with every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homomorphism {
    pub table: Vec<usize>,
}

impl Homomorphism {
    pub fn new(a: &FiniteAlgebra, b: &FiniteAlgebra, table: Vec<usize>) -> Result<Self> {
        if a.signature != b.signature {
            return Err(Error::SignatureMismatch);
        }
        if !is_homomorphism(a, b, &table) {
            return Err(Error::NotHomomorphism);
        }
        Ok(Homomorphism { table })
    }

    pub fn is_surjective(&self, codomain_size: usize) -> bool {
        let mut hit = vec![false; codomain_size];
        self.table.iter().for_each(|&x| hit[x] = true);
        hit.into_iter().all(|h| h)
    }
}

/// The homomorphism `a → b` sending `gens[i]` to `images[i]`, if one exists
/// and `gens` generate `a`.
pub fn extend_from_generators(a: &FiniteAlgebra, b: &FiniteAlgebra, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map: Vec<Option<usize>> = vec![None; a.size];
    let mut list: Vec<usize> = Vec::new();
    for (&g, &img) in gens.iter().zip(images) {
        match map[g] {
            Some(prev) if prev != img => return None,
            Some(_) => {}
            None => {
                map[g] = Some(img);
                list.push(g);
            }
        }
    }
    let mut frontier = 0;
    loop {
        let before = list.len();
        let mut conflict = false;
        for s in 0..a.signature.len() {
            let arity = a.signature.arity(s);
            for_each_new_tuple(before, frontier, arity, |idx| {
                if conflict {
                    return;
                }
                let args: Vec<usize> = idx.iter().map(|&i| list[i]).collect();
                let imgs: Vec<usize> = args.iter().map(|&x| map[x].unwrap()).collect();
                let r = a.apply(s, &args);
                let v = b.apply(s, &imgs);
                match map[r] {
                    Some(prev) => conflict |= prev != v,
                    None => {
                        map[r] = Some(v);
                        list.push(r);
                    }
                }
            });
            if conflict {
                return None;
            }
        }
        if list.len() == before {
            break;
        }
        frontier = before;
    }
    map.into_iter().collect()
}

/// All homomorphisms `a → b`, by backtracking over images of a generating set.
pub fn hom_set(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch);
    }
    let gens = a.generating_set();
    let mut out = Vec::new();
    for i in 0..b.size.pow(gens.len() as u32) {
        let images = index_tuple(i, b.size, gens.len());
        if let Some(table) = extend_from_generators(a, b, &gens, &images) {
            out.push(Homomorphism { table });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All surjective homomorphisms `a → b`.
pub fn epi_set(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    Ok(hom_set(a, b)?
        .into_iter()
        .filter(|h| h.is_surjective(b.size))
        .collect())
}

/// The direct product; the pair `(x, y)` is element `x * |b| + y`.
pub fn product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch);
    }
    let nb = b.size;
    FiniteAlgebra::from_fn(a.signature.clone(), a.size * nb, |s, args| {
        let xs: Vec<usize> = args.iter().map(|&p| p / nb).collect();
        let ys: Vec<usize> = args.iter().map(|&p| p % nb).collect();
        a.apply(s, &xs) * nb + b.apply(s, &ys)
    })
}

/// The variety generated by finitely many finite algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variety {
    signature: Signature,
    generators: Vec<FiniteAlgebra>,
}

impl Variety {
    pub fn new(generators: Vec<FiniteAlgebra>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyVariety)?;
        let signature = first.signature.clone();
        if generators.iter().any(|g| g.signature != signature) {
            return Err(Error::SignatureMismatch);
        }
        Ok(Variety {
            signature,
            generators,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn generators(&self) -> &[FiniteAlgebra] {
        &self.generators
    }

    /// Some member has at least two elements.
    pub fn is_nontrivial(&self) -> bool {
        self.generators.iter().any(|g| g.size >= 2)
    }

    /// Whether `t1 ≈ t2` is an identity of the variety.
    pub fn satisfies_identity(&self, t1: &Term, t2: &Term) -> bool {
        self.generators.iter().all(|g| g.satisfies_identity(t1, t2))
    }

    /// Exact membership test for a finite algebra: it lies in the variety iff
    /// it is a homomorphic image of the free algebra on one of its
    /// generating sets.
    pub fn contains(&self, a: &FiniteAlgebra) -> Result<bool> {
        if a.signature != self.signature {
            return Ok(false);
        }
        let gens = a.generating_set();
        let free = free_algebra(self, gens.len())?;
        Ok(extend_from_generators(&free.algebra, a, &free.generator_elements, &gens).is_some())
    }
}

/// A free algebra of a variety together with the data realizing the natural
/// map from terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    pub algebra: FiniteAlgebra,
    pub n_generators: usize,
    /// Element standing for the free generator `x_{i+1}`.
    pub generator_elements: Vec<usize>,
    /// For each element, its value at every evaluation point.
    pub coordinates: Vec<Vec<usize>>,
    /// Evaluation points: (generator algebra, assignment of the variables).
    pub points: Vec<(usize, Vec<usize>)>,
}

impl FreeAlgebra {
    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    /// The natural epimorphism from terms onto the free algebra.
    pub fn nu(&self, t: &Term) -> Result<usize> {
        self.algebra.evaluate(t, &self.generator_elements)
    }

    /// Whether two terms are identified by the variety.
    pub fn theta_equiv(&self, t1: &Term, t2: &Term) -> Result<bool> {
        Ok(self.nu(t1)? == self.nu(t2)?)
    }
}

/// The free algebra of `variety` on `n` generators.
pub fn free_algebra(variety: &Variety, n: usize) -> Result<FreeAlgebra> {
    let mut points = Vec::new();
    for (j, g) in variety.generators.iter().enumerate() {
        for i in 0..g.size.pow(n as u32) {
            points.push((j, index_tuple(i, g.size, n)));
        }
    }
    let gens = variety.generators();
    let apply = |s: usize, args: &[&Vec<usize>]| -> Vec<usize> {
        points
            .iter()
            .enumerate()
            .map(|(p, (j, _))| {
                let vals: Vec<usize> = args.iter().map(|c| c[p]).collect();
                gens[*j].apply(s, &vals)
            })
            .collect()
    };

    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut coordinates: Vec<Vec<usize>> = Vec::new();
    let mut generator_elements = Vec::with_capacity(n);
    for i in 0..n {
        let c: Vec<usize> = points.iter().map(|(_, a)| a[i]).collect();
        let e = *index.entry(c.clone()).or_insert_with(|| {
            coordinates.push(c);
            coordinates.len() - 1
        });
        generator_elements.push(e);
    }
    let sig = variety.signature.clone();
    let mut frontier = 0;
    loop {
        let before = coordinates.len();
        for s in 0..sig.len() {
            let arity = sig.arity(s);
            let mut fresh = Vec::new();
            for_each_new_tuple(before, frontier, arity, |idx| {
                let args: Vec<&Vec<usize>> = idx.iter().map(|&i| &coordinates[i]).collect();
                fresh.push(apply(s, &args));
            });
            for c in fresh {
                if !index.contains_key(&c) {
                    index.insert(c.clone(), coordinates.len());
                    coordinates.push(c);
                }
            }
        }
        if coordinates.len() == before {
            break;
        }
        frontier = before;
    }
    if coordinates.is_empty() {
        return Err(Error::InvalidAlgebra("free algebra on no generators and no constants".into()));
    }
    let algebra = FiniteAlgebra::from_fn(sig, coordinates.len(), |s, args| {
        let cs: Vec<&Vec<usize>> = args.iter().map(|&a| &coordinates[a]).collect();
        index[&apply(s, &cs)]
    })?;
    Ok(FreeAlgebra {
        algebra,
        n_generators: n,
        generator_elements,
        coordinates,
        points,
    })
}

/// `ν(t)` in the free algebra of `variety` on `n` generators.
pub fn nu(variety: &Variety, n: usize, t: &Term) -> Result<usize> {
    free_algebra(variety, n)?.nu(t)
}

/// Whether `(t1, t2)` lies in the fully invariant congruence of the variety.
pub fn theta_equiv(variety: &Variety, n: usize, t1: &Term, t2: &Term) -> Result<bool> {
    free_algebra(variety, n)?.theta_equiv(t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn meet2() -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        FiniteAlgebra::from_fn(sig, 2, |_, a| a[0].min(a[1])).unwrap()
    }

    fn left_zero2() -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        FiniteAlgebra::from_fn(sig, 2, |_, a| a[0]).unwrap()
    }

    fn z2() -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("e", 0), ("inv", 1), ("mul", 2)]).unwrap();
        FiniteAlgebra::from_fn(sig, 2, |s, a| match s {
            0 => 0,
            1 => a[0],
            _ => a[0] ^ a[1],
        })
        .unwrap()
    }

    fn g(a: Term, b: Term) -> Term {
        Term::app(0, vec![a, b])
    }

    #[test]
    fn evaluation() {
        let a = meet2();
        assert_eq!(a.evaluate(&g(Term::Var(0), Term::Var(1)), &[1, 0]).unwrap(), 0);
        assert_eq!(a.evaluate(&Term::Var(2), &[1, 0]), Err(Error::UnboundVariable(2)));
        assert_eq!(z2().evaluate(&Term::constant(0), &[]).unwrap(), 0);
    }

    #[test]
    fn identities() {
        let comm = (g(Term::Var(0), Term::Var(1)), g(Term::Var(1), Term::Var(0)));
        assert!(meet2().satisfies_identity(&comm.0, &comm.0));
        assert!(meet2().satisfies_identity(&comm.0, &comm.1));
        assert!(!left_zero2().satisfies_identity(&comm.0, &comm.1));
    }

    #[test]
    fn homs_and_epis() {
        let a = meet2();
        let epis = epi_set(&a, &a).unwrap();
        assert_eq!(epis, vec![Homomorphism { table: vec![0, 1] }]);
        let trivial = FiniteAlgebra::from_fn(a.signature().clone(), 1, |_, _| 0).unwrap();
        assert_eq!(hom_set(&a, &trivial).unwrap().len(), 1);
        let v = Variety::new(vec![a.clone()]).unwrap();
        let f2 = free_algebra(&v, 2).unwrap();
        assert_eq!(epi_set(&f2.algebra, &a).unwrap().len(), 2);
        assert!(Homomorphism::new(&a, &a, vec![1, 0]).is_err());
    }

    #[test]
    fn products_and_subalgebras() {
        let a = meet2();
        let p = product(&a, &a).unwrap();
        assert_eq!(p.size(), 4);
        // (0,1) = 1 and (1,0) = 2
        let (sub, inc) = p.generated_subalgebra(&[1, 2]).unwrap();
        assert_eq!(sub.size(), 3);
        assert_eq!(inc, vec![1, 2, 0]);
        let (full, _) = a.generated_subalgebra(&[0, 1]).unwrap();
        assert_eq!(full, a);
    }

    #[test]
    fn free_algebra_sizes() {
        let sl = Variety::new(vec![meet2()]).unwrap();
        let sizes: Vec<usize> = (1..=3).map(|n| free_algebra(&sl, n).unwrap().size()).collect();
        assert_eq!(sizes, vec![1, 3, 7]);
        let grp = Variety::new(vec![z2()]).unwrap();
        assert_eq!(free_algebra(&grp, 1).unwrap().size(), 2);
        assert_eq!(free_algebra(&grp, 2).unwrap().size(), 4);
    }

    #[test]
    fn theta_and_nu() {
        let sl = Variety::new(vec![meet2()]).unwrap();
        let x = |i| Term::Var(i);
        assert!(theta_equiv(&sl, 2, &g(x(0), x(1)), &g(x(1), x(0))).unwrap());
        assert!(!theta_equiv(&sl, 2, &x(0), &x(1)).unwrap());
        let f = free_algebra(&sl, 3).unwrap();
        for i in 0..3 {
            assert_eq!(f.nu(&x(i)).unwrap(), f.generator_elements[i]);
        }
    }

    #[test]
    fn nontriviality_and_membership() {
        let a = meet2();
        let one = FiniteAlgebra::from_fn(a.signature().clone(), 1, |_, _| 0).unwrap();
        assert!(Variety::new(vec![a.clone()]).unwrap().is_nontrivial());
        assert!(!Variety::new(vec![one.clone()]).unwrap().is_nontrivial());
        assert!(Variety::new(vec![one.clone(), a.clone()]).unwrap().is_nontrivial());
        let sl = Variety::new(vec![a.clone()]).unwrap();
        assert!(sl.contains(&product(&a, &a).unwrap()).unwrap());
        assert!(!sl.contains(&left_zero2()).unwrap());
        assert!(Variety::new(vec![]).is_err());
    }

    #[test]
    fn generating_sets() {
        let a = meet2();
        let p = product(&a, &a).unwrap();
        let gens = p.generating_set();
        let (sub, _) = p.generated_subalgebra(&gens).unwrap();
        assert_eq!(sub.size(), p.size());
    }
}
