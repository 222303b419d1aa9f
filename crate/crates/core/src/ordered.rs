//! Linearly ordered finite algebras and rigid epimorphisms between them.
//!
//! A free algebra of a variety is ordered by the neat order of its minimal
//! preimage terms: this is the unique order making `ν` a rigid surjection
//! from the term chain. Free generators come first, so a map out of a free
//! algebra is a rigid epimorphism as soon as it is onto and rigid on the
//! generator block extended homomorphically.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use serde::Serialize;

use crate::algebras::{epi_set, extend_from_generators, free_algebra, is_homomorphism, FiniteAlgebra, FreeAlgebra, Variety};
use crate::chains::{enumerate_rigid_surjections, induced_order, Chain, ChainMap};
use crate::terms::{enumerate_neat, flatten_preimages, flatten, Signature, ShapeTable, Term};
use crate::{Error, Result};

/// Default bound on the shape length explored when ordering a free algebra.
pub const DEFAULT_COVER_CAP: usize = 64;

/// A finite algebra with a linear order on its carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedAlgebra {
    algebra: FiniteAlgebra,
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl OrderedAlgebra {
    /// `order` lists the carrier from least to greatest.
    pub fn new(algebra: FiniteAlgebra, order: Vec<usize>) -> Result<Self> {
        let n = algebra.size();
        if order.len() != n {
            return Err(Error::InvalidOrder(format!("{} entries for a carrier of {n}", order.len())));
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &e) in order.iter().enumerate() {
            if e >= n || rank[e] != usize::MAX {
                return Err(Error::InvalidOrder(format!("entry {e} repeated or outside the carrier")));
            }
            rank[e] = pos;
        }
        Ok(OrderedAlgebra { algebra, order, rank })
    }

    /// Orders the carrier by index.
    pub fn natural(algebra: FiniteAlgebra) -> Self {
        let n = algebra.size();
        OrderedAlgebra {
            algebra,
            order: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn signature(&self) -> &Signature {
        self.algebra.signature()
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of element `e` in the order.
    pub fn rank(&self, e: usize) -> usize {
        self.rank[e]
    }

    pub fn chain(&self) -> Chain {
        Chain::new(self.size())
    }

    /// The same structure relabelled so that the order is `0 < 1 < …`.
    pub fn canonical(&self) -> OrderedAlgebra {
        let alg = FiniteAlgebra::from_fn(self.signature().clone(), self.size(), |s, args| {
            let lifted: Vec<usize> = args.iter().map(|&p| self.order[p]).collect();
            self.rank[self.algebra.apply(s, &lifted)]
        })
        .expect("relabelling preserves validity");
        OrderedAlgebra::natural(alg)
    }

    /// A carrier map out of this algebra read as a map of chain positions.
    pub fn chain_map_to(&self, target: &OrderedAlgebra, table: &[usize]) -> Result<ChainMap> {
        if table.len() != self.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                found: table.len(),
            });
        }
        if let Some(&e) = table.iter().find(|&&e| e >= target.size()) {
            return Err(Error::OutOfRange {
                position: 0,
                value: e,
                bound: target.size(),
            });
        }
        let positions = self.order.iter().map(|&e| target.rank[table[e]]).collect();
        ChainMap::new(self.size(), target.size(), positions)
    }

    /// A chain map of positions read back as a carrier map.
    pub fn carrier_map_from(&self, target: &OrderedAlgebra, map: &ChainMap) -> Vec<usize> {
        (0..self.size()).map(|e| target.order[map.apply(self.rank[e])]).collect()
    }
}

/// Verdicts of the three checks defining a rigid epimorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EpiChecks {
    pub homomorphism: bool,
    pub surjective: bool,
    pub rigid: bool,
}

impl EpiChecks {
    pub fn run(a: &OrderedAlgebra, b: &OrderedAlgebra, table: &[usize]) -> EpiChecks {
        let homomorphism = is_homomorphism(&a.algebra, &b.algebra, table);
        let chain = a.chain_map_to(b, table).ok();
        EpiChecks {
            homomorphism,
            surjective: chain.as_ref().is_some_and(ChainMap::is_surjective),
            rigid: chain.as_ref().is_some_and(ChainMap::is_rigid_surjection),
        }
    }

    pub fn all(&self) -> bool {
        self.homomorphism && self.surjective && self.rigid
    }
}

/// A surjective homomorphism that is also a rigid surjection of the orders.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RigidEpimorphism {
    pub table: Vec<usize>,
}

impl RigidEpimorphism {
    pub fn new(a: &OrderedAlgebra, b: &OrderedAlgebra, table: Vec<usize>) -> Result<Self> {
        if a.signature() != b.signature() {
            return Err(Error::SignatureMismatch);
        }
        let checks = EpiChecks::run(a, b, &table);
        if !checks.homomorphism {
            return Err(Error::NotHomomorphism);
        }
        if !checks.surjective {
            return Err(Error::NotSurjective);
        }
        if !checks.rigid {
            return Err(Error::NotRigid);
        }
        Ok(RigidEpimorphism { table })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RigidEpimorphism) -> RigidEpimorphism {
        RigidEpimorphism {
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        }
    }
}

pub fn is_rigid_epi(a: &OrderedAlgebra, b: &OrderedAlgebra, table: &[usize]) -> bool {
    a.signature() == b.signature() && EpiChecks::run(a, b, table).all()
}

/// All rigid epimorphisms `a → b`, sorted by table.
pub fn rigid_epi_set(a: &OrderedAlgebra, b: &OrderedAlgebra) -> Result<Vec<RigidEpimorphism>> {
    Ok(epi_set(&a.algebra, &b.algebra)?
        .into_iter()
        .filter(|h| EpiChecks::run(a, b, &h.table).rigid)
        .map(|h| RigidEpimorphism { table: h.table })
        .collect())
}

/// Rigid epimorphisms from an algebra to itself.
pub fn automorphisms(a: &OrderedAlgebra) -> Result<Vec<RigidEpimorphism>> {
    rigid_epi_set(a, a)
}

/// A free algebra relabelled so that element `i` is the `i`-th in neat order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedFreeAlgebra {
    pub free: FreeAlgebra,
    pub ordered: OrderedAlgebra,
    /// Neat-least term denoting each element.
    pub min_terms: Vec<Term>,
    /// Shape length at which every element had been reached.
    pub cover_length: usize,
}

impl OrderedFreeAlgebra {
    pub fn size(&self) -> usize {
        self.ordered.size()
    }

    pub fn n_generators(&self) -> usize {
        self.free.n_generators
    }

    pub fn nu(&self, t: &Term) -> Result<usize> {
        self.free.nu(t)
    }

    /// `ν` on the neat chain truncated at `max_len`, as a chain map.
    pub fn nu_chain_map(&self, max_len: usize) -> Result<ChainMap> {
        let terms = enumerate_neat(self.ordered.signature(), self.n_generators(), max_len);
        let table = terms.iter().map(|t| self.nu(t)).collect::<Result<Vec<_>>>()?;
        ChainMap::new(terms.len(), self.size(), table)
    }
}

/// The free algebra of `variety` on `n` generators in its neat order.
pub fn ordered_free(variety: &Variety, n: usize) -> Result<OrderedFreeAlgebra> {
    ordered_free_capped(variety, n, DEFAULT_COVER_CAP)
}

pub fn ordered_free_capped(variety: &Variety, n: usize, cap: usize) -> Result<OrderedFreeAlgebra> {
    if !variety.is_nontrivial() {
        return Err(Error::TrivialVariety);
    }
    let free = free_algebra(variety, n)?;
    let size = free.size();
    let mut first: Vec<Option<Term>> = vec![None; size];
    let mut discovered = Vec::with_capacity(size);
    let mut shapes = ShapeTable::new(variety.signature());
    let mut len = 0;
    while discovered.len() < size {
        len += 1;
        if len > cap {
            return Err(Error::CoverNotFound(cap));
        }
        for t in shapes.block(n, len) {
            let e = free.nu(&t)?;
            if first[e].is_none() {
                first[e] = Some(t);
                discovered.push(e);
            }
        }
    }
    let mut rank = vec![0; size];
    for (pos, &e) in discovered.iter().enumerate() {
        rank[e] = pos;
    }
    let algebra = FiniteAlgebra::from_fn(variety.signature().clone(), size, |s, args| {
        let lifted: Vec<usize> = args.iter().map(|&p| discovered[p]).collect();
        rank[free.algebra.apply(s, &lifted)]
    })?;
    let generator_elements: Vec<usize> = free.generator_elements.iter().map(|&g| rank[g]).collect();
    if generator_elements != (0..n).collect::<Vec<_>>() {
        return Err(Error::TrivialVariety);
    }
    let relabelled = FreeAlgebra {
        algebra: algebra.clone(),
        n_generators: n,
        generator_elements,
        coordinates: discovered.iter().map(|&e| free.coordinates[e].clone()).collect(),
        points: free.points.clone(),
    };
    let min_terms = discovered.iter().map(|&e| first[e].take().unwrap()).collect();
    Ok(OrderedFreeAlgebra {
        free: relabelled,
        ordered: OrderedAlgebra::natural(algebra),
        min_terms,
        cover_length: len,
    })
}

/// The rigid epimorphism between ordered free algebras induced by the rigid
/// surjection `f` of their generator chains.
pub fn hat_t_v_between(dom: &OrderedFreeAlgebra, cod: &OrderedFreeAlgebra, f: &ChainMap) -> Result<RigidEpimorphism> {
    if !f.is_rigid_surjection() {
        return Err(Error::NotRigid);
    }
    if f.n != dom.n_generators() || f.k != cod.n_generators() {
        return Err(Error::SizeMismatch {
            expected: dom.n_generators(),
            found: f.n,
        });
    }
    let images: Vec<usize> = f.table.iter().map(|&j| cod.free.generator_elements[j]).collect();
    let table = extend_from_generators(dom.ordered.algebra(), cod.ordered.algebra(), &dom.free.generator_elements, &images)
        .ok_or(Error::NotHomomorphism)?;
    RigidEpimorphism::new(&dom.ordered, &cod.ordered, table)
}

pub fn hat_t_v(variety: &Variety, f: &ChainMap) -> Result<(OrderedFreeAlgebra, OrderedFreeAlgebra, RigidEpimorphism)> {
    let dom = ordered_free(variety, f.n)?;
    let cod = ordered_free(variety, f.k)?;
    let epi = hat_t_v_between(&dom, &cod, f)?;
    Ok((dom, cod, epi))
}

/// The unique `g` with `g ∘ ν = f`, where `f` is the homomorphism from terms
/// to `target` sending `x_i` to `generator_images[i]`.
pub fn factor_reflection(free: &OrderedFreeAlgebra, target: &OrderedAlgebra, generator_images: &[usize]) -> Result<RigidEpimorphism> {
    if free.ordered.signature() != target.signature() {
        return Err(Error::SignatureMismatch);
    }
    if generator_images.len() != free.n_generators() {
        return Err(Error::SizeMismatch {
            expected: free.n_generators(),
            found: generator_images.len(),
        });
    }
    if let Some(&e) = generator_images.iter().find(|&&e| e >= target.size()) {
        return Err(Error::OutOfRange {
            position: 0,
            value: e,
            bound: target.size(),
        });
    }
    let table = extend_from_generators(free.ordered.algebra(), target.algebra(), &free.free.generator_elements, generator_images)
        .ok_or(Error::NotInVariety)?;
    RigidEpimorphism::new(&free.ordered, target, table)
}

/// Factorization of two rigid epimorphisms with a common domain through the
/// image of their pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointFactor {
    pub d: OrderedAlgebra,
    /// Element `i` of `d` is the pair `pairs[i]` of `a × b`.
    pub pairs: Vec<(usize, usize)>,
    pub h: RigidEpimorphism,
    pub p1: RigidEpimorphism,
    pub p2: RigidEpimorphism,
}

pub fn joint_factor(
    f_dom: &OrderedAlgebra,
    a: &OrderedAlgebra,
    b: &OrderedAlgebra,
    f: &RigidEpimorphism,
    g: &RigidEpimorphism,
) -> Result<JointFactor> {
    RigidEpimorphism::new(f_dom, a, f.table.clone())?;
    RigidEpimorphism::new(f_dom, b, g.table.clone())?;
    let along_order: Vec<(usize, usize)> = f_dom.order().iter().map(|&x| (f.apply(x), g.apply(x))).collect();
    let pairs = induced_order(&along_order);
    let index_of = |p: (usize, usize)| pairs.iter().position(|&q| q == p);
    let closed = core::cell::Cell::new(true);
    let algebra = FiniteAlgebra::from_fn(a.signature().clone(), pairs.len(), |s, args| {
        let xs: Vec<usize> = args.iter().map(|&i| pairs[i].0).collect();
        let ys: Vec<usize> = args.iter().map(|&i| pairs[i].1).collect();
        index_of((a.algebra().apply(s, &xs), b.algebra().apply(s, &ys))).unwrap_or_else(|| {
            closed.set(false);
            0
        })
    })?;
    if !closed.get() {
        return Err(Error::NotHomomorphism);
    }
    let d = OrderedAlgebra::natural(algebra);
    let h_table = (0..f_dom.size())
        .map(|x| index_of((f.apply(x), g.apply(x))).unwrap())
        .collect();
    let h = RigidEpimorphism::new(f_dom, &d, h_table)?;
    let p1 = RigidEpimorphism::new(&d, a, pairs.iter().map(|p| p.0).collect())?;
    let p2 = RigidEpimorphism::new(&d, b, pairs.iter().map(|p| p.1).collect())?;
    Ok(JointFactor { d, pairs, h, p1, p2 })
}

/// A rigid epimorphism from the ordered free algebra on `n` generators onto
/// `target`, if one is found. Without `exhaustive`, only maps that are rigid
/// on the generator block are tried; with it, every epimorphism is examined.
pub fn exists_rigid_epi_from_free(
    variety: &Variety,
    n: usize,
    target: &OrderedAlgebra,
    exhaustive: bool,
) -> Result<Option<(OrderedFreeAlgebra, RigidEpimorphism)>> {
    if !variety.contains(target.algebra())? {
        return Err(Error::NotInVariety);
    }
    if !exhaustive && n < target.size() {
        return Ok(None);
    }
    let free = ordered_free(variety, n)?;
    if n >= target.size() {
        for r in enumerate_rigid_surjections(n, target.size()) {
            let images: Vec<usize> = r.table.iter().map(|&p| target.order()[p]).collect();
            if let Ok(epi) = factor_reflection(&free, target, &images) {
                return Ok(Some((free, epi)));
            }
        }
    }
    if exhaustive {
        if let Some(epi) = rigid_epi_set(&free.ordered, target)?.into_iter().next() {
            return Ok(Some((free, epi)));
        }
    }
    Ok(None)
}

/// Every linear order on the carrier, in lexicographic order of the lists.
pub fn expansions(a: &FiniteAlgebra) -> Vec<OrderedAlgebra> {
    (0..a.size())
        .permutations(a.size())
        .map(|order| OrderedAlgebra::new(a.clone(), order).expect("permutation"))
        .collect()
}

/// The unique order on the codomain of the epimorphism `e` making `e` rigid
/// with respect to `order_b` on its domain.
pub fn unique_restriction(e: &[usize], order_b: &[usize], codomain_size: usize) -> Result<Vec<usize>> {
    let images: Vec<usize> = order_b.iter().map(|&x| e[x]).collect();
    let order = induced_order(&images);
    if order.len() != codomain_size || order.iter().any(|&a| a >= codomain_size) {
        return Err(Error::NotSurjective);
    }
    Ok(order)
}

/// Whether evaluation from the neat chain of terms over the carrier chain of
/// `a` (variable `x_i` standing for the `i`-th element) is a rigid surjection
/// onto `a`, up to shape length `max_len`.
pub fn eval_map_rigid(a: &OrderedAlgebra, max_len: usize) -> Result<bool> {
    let terms = enumerate_neat(a.signature(), a.size(), max_len);
    let table = terms
        .iter()
        .map(|t| Ok(a.rank(a.algebra().evaluate(t, a.order())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainMap::new(terms.len(), a.size(), table)?.is_rigid_surjection())
}

/// Whether a structure map `alpha` on terms over `0..n` satisfies
/// `alpha ∘ flatten = alpha ∘ T(alpha)` on double terms flattening to terms
/// of shape length at most `max_len`.
pub fn multiplication_law(sig: &Signature, n: usize, max_len: usize, alpha: impl Fn(&Term) -> usize) -> bool {
    enumerate_neat(sig, n, max_len).iter().all(|t| {
        flatten_preimages(t).iter().all(|tt| {
            let inner: Term = tt.map_vars(&mut |s| alpha(s));
            alpha(&flatten(tt)) == alpha(&inner)
        })
    })
}

/// Whether `alpha(x_i) = i` for every variable.
pub fn unit_law(n: usize, alpha: impl Fn(&Term) -> usize) -> bool {
    (0..n).all(|i| alpha(&Term::Var(i)) == i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meet2() -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        FiniteAlgebra::from_fn(sig, 2, |_, a| a[0].min(a[1])).unwrap()
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

    fn sl() -> Variety {
        Variety::new(vec![meet2()]).unwrap()
    }

    #[test]
    fn semilattice_free_order() {
        let f = ordered_free(&sl(), 2).unwrap();
        let sig = f.ordered.signature().clone();
        let names: Vec<_> = f.min_terms.iter().map(|t| crate::terms::render(t, &sig)).collect();
        assert_eq!(names, ["x1", "x2", "meet(x1,x2)"]);
        let lens: Vec<_> = f.min_terms.iter().map(Term::shape_length).collect();
        assert_eq!(lens, [1, 1, 6]);
        assert!(f.nu_chain_map(f.cover_length + 5).unwrap().is_rigid_surjection());
        assert_eq!(ordered_free(&sl(), 1).unwrap().size(), 1);
    }

    #[test]
    fn group_free_order() {
        let v = Variety::new(vec![z2()]).unwrap();
        let f = ordered_free(&v, 1).unwrap();
        assert_eq!(f.min_terms, vec![Term::Var(0), Term::constant(0)]);
        assert_eq!(f.cover_length, 1);
    }

    #[test]
    fn trivial_variety_rejected() {
        let one = FiniteAlgebra::from_fn(meet2().signature().clone(), 1, |_, _| 0).unwrap();
        let v = Variety::new(vec![one]).unwrap();
        assert_eq!(ordered_free(&v, 2).unwrap_err(), Error::TrivialVariety);
    }

    #[test]
    fn hat_t_on_semilattices() {
        let f = ChainMap::new(3, 2, vec![0, 1, 0]).unwrap();
        let (dom, cod, epi) = hat_t_v(&sl(), &f).unwrap();
        assert_eq!((dom.size(), cod.size()), (7, 3));
        assert_eq!(epi.apply(2), 0);
        assert!(is_rigid_epi(&dom.ordered, &cod.ordered, &epi.table));
        for t in enumerate_neat(dom.ordered.signature(), 3, 8) {
            let lhs = epi.apply(dom.nu(&t).unwrap());
            let rhs = cod.nu(&crate::terms::substitute(&f, &t).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let id = hat_t_v(&sl(), &ChainMap::identity(2)).unwrap().2;
        assert_eq!(id.table, vec![0, 1, 2]);
        assert_eq!(hat_t_v(&sl(), &ChainMap::new(2, 2, vec![1, 0]).unwrap()).unwrap_err(), Error::NotRigid);
    }

    #[test]
    fn reflections() {
        let f = ordered_free(&sl(), 2).unwrap();
        let same = factor_reflection(&f, &f.ordered, &[0, 1]).unwrap();
        assert_eq!(same.table, vec![0, 1, 2]);
        // the 2-element semilattice ordered top first
        let a = OrderedAlgebra::new(meet2(), vec![1, 0]).unwrap();
        let g = factor_reflection(&f, &a, &[1, 0]).unwrap();
        assert_eq!(g.table, vec![1, 0, 0]);
        let lz = FiniteAlgebra::from_fn(meet2().signature().clone(), 2, |_, a| a[0]).unwrap();
        let bad = OrderedAlgebra::natural(lz);
        assert_eq!(factor_reflection(&f, &bad, &[0, 1]).unwrap_err(), Error::NotInVariety);
    }

    #[test]
    fn joint_factoring() {
        let f3 = ordered_free(&sl(), 3).unwrap();
        let a = OrderedAlgebra::new(meet2(), vec![1, 0]).unwrap();
        let epis = rigid_epi_set(&f3.ordered, &a).unwrap();
        assert!(epis.len() >= 2);
        let jf = joint_factor(&f3.ordered, &a, &a, &epis[0], &epis[1]).unwrap();
        assert!(jf.d.size() <= 4);
        assert_eq!(jf.p1.after(&jf.h), epis[0]);
        assert_eq!(jf.p2.after(&jf.h), epis[1]);
        let same = joint_factor(&f3.ordered, &a, &a, &epis[0], &epis[0]).unwrap();
        assert_eq!(same.d.size(), 2);
    }

    #[test]
    fn epis_from_free() {
        let a = OrderedAlgebra::new(meet2(), vec![1, 0]).unwrap();
        let (_, w) = exists_rigid_epi_from_free(&sl(), 2, &a, false).unwrap().unwrap();
        assert_eq!(w.table, vec![1, 0, 0]);
        assert!(exists_rigid_epi_from_free(&sl(), 1, &a, false).unwrap().is_none());
    }

    #[test]
    fn expansions_and_restrictions() {
        assert_eq!(expansions(&meet2()).len(), 2);
        assert_eq!(unique_restriction(&[0, 1], &[1, 0], 2).unwrap(), vec![1, 0]);
        assert_eq!(unique_restriction(&[0, 0], &[1, 0], 2).unwrap_err(), Error::NotSurjective);
    }

    #[test]
    fn rigidity_of_automorphisms_and_eval() {
        for a in expansions(&meet2()) {
            assert_eq!(automorphisms(&a).unwrap().len(), 1);
            assert!(eval_map_rigid(&a, 8).unwrap());
        }
    }

    #[test]
    fn weak_structure_maps() {
        let a = meet2();
        let sig = a.signature().clone();
        let eval = |t: &Term| a.evaluate(t, &[0, 1]).unwrap();
        assert!(multiplication_law(&sig, 2, 8, eval));
        assert!(unit_law(2, eval));
        let constant = |_: &Term| 0;
        assert!(multiplication_law(&sig, 2, 8, constant));
        assert!(!unit_law(2, constant));
    }
}
