//! Moving arrows from chains to ordered free algebras.
//!
//! A rigid surjection `u: n → B` of chains gives the map
//! `Φ_B(u)(t) = eval_B(t[x_i := u(i)])` on terms over `n` variables. Through
//! the reflection of the term algebra into the variety it becomes a rigid
//! epimorphism `g_u` out of the ordered free algebra on `n` generators, and
//! `f ∘ Φ_B(u) = Φ_A(f ∘ u)` for every rigid epimorphism `f: B → A`. A
//! coloring of rigid epimorphisms onto `A` therefore pulls back to a coloring
//! of rigid surjections onto the chain of `A`, and a chain witness pushes
//! forward to an algebra witness.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::validate::{brute_hom, is_rigid_epi_raw};
use super::{
    coloring_count, hom, ArrowCertificate, ArrowInstance, ArrowQuery, Category, Coloring, Direction, HomSizes, Method, Object,
    SearchStats, Verdict,
};
use crate::algebras::Variety;
use crate::chains::{compose, ChainMap};
use crate::ordered::{factor_reflection, ordered_free, OrderedAlgebra, OrderedFreeAlgebra, RigidEpimorphism};
use crate::terms::{enumerate_neat, substitute, Term};
use crate::{Error, Result};

/// Colorings enumerated by [`ColoringMode::All`].
pub const ALL_COLORINGS_LIMIT: usize = 1 << 12;

/// `Φ_B(u)` for a rigid surjection `u` onto the chain of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    pub u: ChainMap,
    b: OrderedAlgebra,
}

pub fn transport_phi(u: &ChainMap, b: &OrderedAlgebra) -> Result<PhiMap> {
    if u.k != b.size() {
        return Err(Error::SizeMismatch {
            expected: b.size(),
            found: u.k,
        });
    }
    if !u.is_rigid_surjection() {
        return Err(Error::NotRigid);
    }
    Ok(PhiMap { u: u.clone(), b: b.clone() })
}

impl PhiMap {
    /// The element of `B` denoted by `t`.
    pub fn apply(&self, t: &Term) -> Result<usize> {
        self.b.algebra().evaluate(&substitute(&self.u, t)?, self.b.order())
    }

    /// Position of `apply(t)` in the order of `B`.
    pub fn apply_rank(&self, t: &Term) -> Result<usize> {
        Ok(self.b.rank(self.apply(t)?))
    }

    /// `Φ_B(u)` on the neat chain truncated at `max_len`.
    pub fn chain_map(&self, max_len: usize) -> Result<ChainMap> {
        let terms = enumerate_neat(self.b.signature(), self.u.n, max_len);
        let table = terms.iter().map(|t| self.apply_rank(t)).collect::<Result<Vec<_>>>()?;
        ChainMap::new(terms.len(), self.b.size(), table)
    }

    /// Whether `Φ_B(u)` commutes with the operations on every compound term
    /// of shape length at most `max_len`.
    pub fn is_homomorphic(&self, max_len: usize) -> Result<bool> {
        for t in enumerate_neat(self.b.signature(), self.u.n, max_len) {
            if let Term::App(s, args) = &t {
                let vals = args.iter().map(|x| self.apply(x)).collect::<Result<Vec<_>>>()?;
                if self.apply(&t)? != self.b.algebra().apply(*s, &vals) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Checks `f ∘ Φ_B(u) = Φ_A(f ∘ u)` on every term of shape length at most
/// `depth`.
pub fn check_pa_instance(u: &ChainMap, b: &OrderedAlgebra, a: &OrderedAlgebra, f: &RigidEpimorphism, depth: usize) -> Result<bool> {
    RigidEpimorphism::new(b, a, f.table.clone())?;
    let phi_b = transport_phi(u, b)?;
    let v = compose(&b.chain_map_to(a, &f.table)?, u)?;
    let phi_a = transport_phi(&v, a)?;
    for t in enumerate_neat(b.signature(), u.n, depth) {
        if f.apply(phi_b.apply(&t)?) != phi_a.apply(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which colorings of `hom(F, A)` the transport is run on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColoringMode {
    /// Every coloring, when there are at most [`ALL_COLORINGS_LIMIT`].
    All,
    Given(Vec<Coloring>),
    Random { count: usize, seed: u64 },
}

/// One coloring pushed through the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportTrace {
    pub coloring: Coloring,
    /// Color of `g_u` for each chain morphism `u`, in the order of
    /// [`TransportReport::chain_morphisms`].
    pub pulled_back: Vec<usize>,
    pub chain_witness: ChainMap,
    /// The algebra witness `F → B`.
    pub witness: Vec<usize>,
    /// Colors met by `f ∘ witness` over every `f: B → A`.
    pub colors: Vec<usize>,
    pub validated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportReport {
    pub n: usize,
    pub free_size: usize,
    /// Rigid surjections `n → |A|`.
    pub chain_morphisms: Vec<ChainMap>,
    /// The reflected map `g_u: F → A` for each chain morphism.
    pub reflections: Vec<Vec<usize>>,
    pub certificate: ArrowCertificate,
    pub traces: Vec<TransportTrace>,
}

/// Transports a chain certificate `n ⟵ (|B|)^{|A|}_{k,t}` to the ordered
/// free algebra of `variety` on `n` generators and validates the resulting
/// witnesses directly for every coloring selected by `mode`.
pub fn transport_arrow(
    chain_cert: &ArrowCertificate,
    a: &OrderedAlgebra,
    b: &OrderedAlgebra,
    variety: &Variety,
    mode: &ColoringMode,
) -> Result<TransportReport> {
    let q = &chain_cert.query;
    if q.category != Category::ChainsRs || q.direction != Direction::Dual {
        return Err(Error::Precondition("expected a dual chain certificate".into()));
    }
    if !chain_cert.verdict.holds() {
        return Err(Error::Precondition("the chain certificate does not hold".into()));
    }
    if (q.b, q.a) != (b.size(), a.size()) {
        return Err(Error::Precondition(format!(
            "certificate is about chains {} and {}, algebras have {} and {} elements",
            q.b,
            q.a,
            b.size(),
            a.size()
        )));
    }
    if !variety.contains(a.algebra())? || !variety.contains(b.algebra())? {
        return Err(Error::NotInVariety);
    }
    let (n, k, t) = (q.c, q.k, q.t);
    let free = ordered_free(variety, n)?;
    transport_into(&free, a, b, k, t, mode)
}

/// The transport step once the free algebra is built. The chain arrow is
/// not re-derived here; a chain coloring without a witness is an error.
pub fn transport_into(free: &OrderedFreeAlgebra, a: &OrderedAlgebra, b: &OrderedAlgebra, k: usize, t: usize, mode: &ColoringMode) -> Result<TransportReport> {
    let n = free.n_generators();
    let chains = ArrowInstance::new(Category::ChainsRs, Direction::Dual, &Object::Chain(n), &Object::Chain(b.size()), &Object::Chain(a.size()))?;
    let reflect = |target: &OrderedAlgebra, u: &ChainMap| -> Result<RigidEpimorphism> {
        let images: Vec<usize> = u.table.iter().map(|&p| target.order()[p]).collect();
        factor_reflection(free, target, &images)
    };
    let reflections = chains
        .colored
        .iter()
        .map(|u| reflect(a, u).map(|g| g.table))
        .collect::<Result<Vec<_>>>()?;

    let f_obj = Object::Ordered(free.ordered.clone());
    let (a_obj, b_obj) = (Object::Ordered(a.clone()), Object::Ordered(b.clone()));
    let domain = hom(Category::OrderedAlgebrasRe, &f_obj, &a_obj)?;
    let colorings: Vec<Coloring> = match mode {
        ColoringMode::All => match coloring_count(k, domain.len()) {
            Some(total) if total <= ALL_COLORINGS_LIMIT => Coloring::all(k, &domain).collect(),
            _ => return Err(Error::Precondition(format!("{k}^{} colorings are too many to list", domain.len()))),
        },
        ColoringMode::Given(cs) => cs.clone(),
        ColoringMode::Random { count, seed } => (0..*count as u64)
            .map(|i| Coloring::random(k, domain.clone(), seed.wrapping_add(i)))
            .collect::<Result<Vec<_>>>()?,
    };

    // the independent side of the validation
    let connecting = brute_hom(Category::OrderedAlgebrasRe, &b_obj, &a_obj).ok_or(Error::WrongObject("ordered-algebras-re"))?;

    let mut traces = Vec::with_capacity(colorings.len());
    for coloring in colorings {
        if coloring.domain != domain || coloring.k != k {
            return Err(Error::InvalidColoring("coloring is not over the rigid epimorphisms onto A".into()));
        }
        let pulled_back = reflections
            .iter()
            .map(|g| {
                coloring
                    .color_of(&ChainMap::new(free.size(), a.size(), g.clone())?)
                    .ok_or_else(|| Error::InvalidColoring("reflected map missing from the coloring".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let (wi, _) = chains
            .find_witness(&pulled_back, t)
            .ok_or_else(|| Error::Precondition("no chain witness for the pulled-back coloring".into()))?;
        let chain_witness = chains.witnesses[wi].clone();
        let witness = reflect(b, &chain_witness)?.table;

        let mut colors: Vec<usize> = Vec::new();
        let mut complete = true;
        for f in &connecting {
            let composite: Vec<usize> = witness.iter().map(|&x| f.table[x]).collect();
            match coloring.color_of(&ChainMap::new(free.size(), a.size(), composite)?) {
                Some(c) => colors.push(c),
                None => complete = false,
            }
        }
        colors.sort_unstable();
        colors.dedup();
        let validated = complete && colors.len() <= t && is_rigid_epi_raw(&free.ordered, b, &witness);
        traces.push(TransportTrace {
            coloring,
            pulled_back,
            chain_witness,
            witness,
            colors,
            validated,
        });
    }

    let witnesses = hom(Category::OrderedAlgebrasRe, &f_obj, &b_obj)?.len();
    let verdict = if traces.iter().all(|tr| tr.validated) {
        match traces.as_slice() {
            [only] => Verdict::Holds {
                witness: Some(ChainMap::new(free.size(), b.size(), only.witness.clone())?),
                colors: Some(only.colors.clone()),
            },
            _ => Verdict::Holds {
                witness: None,
                colors: None,
            },
        }
    } else {
        Verdict::Unknown {
            reason: "a transported witness failed direct validation".into(),
        }
    };
    let certificate = ArrowCertificate {
        query: ArrowQuery {
            category: Category::OrderedAlgebrasRe,
            direction: Direction::Dual,
            c: free.size(),
            b: b.size(),
            a: a.size(),
            k,
            t,
        },
        hom_sizes: HomSizes {
            colored: domain.len(),
            witnesses,
            connecting: connecting.len(),
        },
        verdict,
        stats: SearchStats {
            method: Method::Transported,
            nodes: traces.len() as u64,
            random_steps: 0,
            seed: match mode {
                ColoringMode::Random { seed, .. } => Some(*seed),
                _ => None,
            },
        },
    };
    Ok(TransportReport {
        n,
        free_size: free.size(),
        chain_morphisms: chains.colored.clone(),
        reflections,
        certificate,
        traces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::FiniteAlgebra;
    use crate::ordered::rigid_epi_set;
    use crate::ramsey::{check_arrow, SearchConfig};
    use crate::terms::Signature;
    use alloc::vec;

    fn sl(n: usize) -> FiniteAlgebra {
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        FiniteAlgebra::from_fn(sig, n, |_, x| x[0].min(x[1])).unwrap()
    }

    #[test]
    fn phi_basics() {
        let b = OrderedAlgebra::natural(sl(3));
        let id = transport_phi(&ChainMap::identity(3), &b).unwrap();
        for t in enumerate_neat(b.signature(), 3, 6) {
            assert_eq!(id.apply(&t).unwrap(), b.algebra().evaluate(&t, &[0, 1, 2]).unwrap());
        }
        let u = ChainMap::new(4, 3, vec![0, 1, 0, 2]).unwrap();
        let phi = transport_phi(&u, &b).unwrap();
        for i in 0..4 {
            assert_eq!(phi.apply_rank(&Term::Var(i)).unwrap(), u.table[i]);
        }
        assert!(phi.is_homomorphic(8).unwrap());
        assert!(phi.chain_map(8).unwrap().is_rigid_surjection());
        assert!(transport_phi(&ChainMap::new(2, 2, vec![1, 0]).unwrap(), &OrderedAlgebra::natural(sl(2))).is_err());
    }

    #[test]
    fn pa_law_small() {
        let b = OrderedAlgebra::natural(sl(3));
        let a = OrderedAlgebra::natural(sl(2));
        let epis = rigid_epi_set(&b, &a).unwrap();
        assert!(!epis.is_empty());
        let u = ChainMap::new(4, 3, vec![0, 1, 2, 1]).unwrap();
        for f in &epis {
            assert!(check_pa_instance(&u, &b, &a, f, 8).unwrap());
        }
        let id = RigidEpimorphism::new(&b, &b, vec![0, 1, 2]).unwrap();
        assert!(check_pa_instance(&u, &b, &b, &id, 8).unwrap());
    }

    #[test]
    fn trivial_transport() {
        let v = Variety::new(vec![sl(2)]).unwrap();
        let a = OrderedAlgebra::natural(sl(2));
        let cert = check_arrow(Category::ChainsRs, Direction::Dual, &Object::Chain(2), &Object::Chain(2), &Object::Chain(2), 2, 1, &SearchConfig::default()).unwrap();
        let report = transport_arrow(&cert, &a, &a, &v, &ColoringMode::All).unwrap();
        assert!(report.certificate.verdict.holds());
        assert!(report.traces.iter().all(|t| t.validated));
    }
}
