//! Dual partition arrows and the machinery that transports them.
//!
//! `C ⟵ (B)^A_{k,t}` holds when every `k`-coloring of `hom(C, A)` admits
//! some `w ∈ hom(C, B)` such that `{f ∘ w : f ∈ hom(B, A)}` meets at most
//! `t` colors. Morphisms of every category are stored as [`ChainMap`]
//! tables: chain positions for rigid surjections, carrier indices for
//! (ordered) algebra morphisms. The triple `(n, k, table)` is the canonical
//! key used by colorings and certificates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebras::{epi_set, FiniteAlgebra};
use crate::chains::{compose, enumerate_rigid_surjections, ChainMap};
use crate::ordered::{expansions, rigid_epi_set, OrderedAlgebra};
use crate::{Error, Result};

mod search;
pub mod segments;
pub mod transport;
pub mod validate;

pub use segments::{plan_segments, segment_induction, SegmentCertificate, SegmentOutcome, SegmentStep};
pub use transport::{check_pa_instance, transport_arrow, transport_phi, ColoringMode, PhiMap, TransportReport, TransportTrace};

/// The categories in which arrows are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// Finite chains with rigid surjections.
    #[serde(rename = "chains-rs")]
    ChainsRs,
    /// Ordered algebras with rigid epimorphisms.
    #[serde(rename = "ordered-algebras-re")]
    OrderedAlgebrasRe,
    /// Algebras with surjective homomorphisms.
    #[serde(rename = "algebras-epi")]
    AlgebrasEpi,
}

impl Category {
    pub fn tag(&self) -> &'static str {
        match self {
            Category::ChainsRs => "chains-rs",
            Category::OrderedAlgebrasRe => "ordered-algebras-re",
            Category::AlgebrasEpi => "algebras-epi",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chains-rs" => Ok(Category::ChainsRs),
            "ordered-algebras-re" => Ok(Category::OrderedAlgebrasRe),
            "algebras-epi" => Ok(Category::AlgebrasEpi),
            other => Err(Error::UnknownCategory(other.to_string())),
        }
    }
}

/// Dual arrows color `hom(C, A)`; direct arrows color `hom(A, C)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Dual,
    Direct,
}

/// An object of one of the categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Chain(usize),
    Ordered(OrderedAlgebra),
    Algebra(FiniteAlgebra),
}

impl Object {
    pub fn size(&self) -> usize {
        match self {
            Object::Chain(n) => *n,
            Object::Ordered(a) => a.size(),
            Object::Algebra(a) => a.size(),
        }
    }
}

/// The morphisms `from → to`, sorted.
pub fn hom(category: Category, from: &Object, to: &Object) -> Result<Vec<ChainMap>> {
    let tables: Vec<Vec<usize>> = match (category, from, to) {
        (Category::ChainsRs, Object::Chain(n), Object::Chain(k)) => {
            return Ok(enumerate_rigid_surjections(*n, *k));
        }
        (Category::OrderedAlgebrasRe, Object::Ordered(a), Object::Ordered(b)) => {
            rigid_epi_set(a, b)?.into_iter().map(|e| e.table).collect()
        }
        (Category::AlgebrasEpi, Object::Algebra(a), Object::Algebra(b)) => {
            epi_set(a, b)?.into_iter().map(|e| e.table).collect()
        }
        (c, _, _) => return Err(Error::WrongObject(c.tag())),
    };
    let mut maps = tables
        .into_iter()
        .map(|t| ChainMap::new(from.size(), to.size(), t))
        .collect::<Result<Vec<_>>>()?;
    maps.sort();
    Ok(maps)
}

/// A `k`-coloring of an explicit finite set of morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub k: usize,
    pub domain: Vec<ChainMap>,
    pub colors: Vec<usize>,
}

impl Coloring {
    /// Sorts `domain` (carrying the colors along) and validates.
    pub fn new(k: usize, domain: Vec<ChainMap>, colors: Vec<usize>) -> Result<Self> {
        if domain.len() != colors.len() {
            return Err(Error::InvalidColoring(format!(
                "{} colors for {} morphisms",
                colors.len(),
                domain.len()
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidColoring(format!("color {c} with k = {k}")));
        }
        let mut pairs: Vec<(ChainMap, usize)> = domain.into_iter().zip(colors).collect();
        pairs.sort();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidColoring("repeated morphism".into()));
        }
        let (domain, colors) = pairs.into_iter().unzip();
        Ok(Coloring { k, domain, colors })
    }

    pub fn constant(k: usize, domain: Vec<ChainMap>, color: usize) -> Result<Self> {
        let n = domain.len();
        Coloring::new(k, domain, vec![color; n])
    }

    /// A uniformly random coloring.
    pub fn random(k: usize, domain: Vec<ChainMap>, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColoring("k = 0".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors = (0..domain.len()).map(|_| rng.random_range(0..k)).collect();
        Coloring::new(k, domain, colors)
    }

    pub fn color_of(&self, f: &ChainMap) -> Option<usize> {
        self.domain.binary_search(f).ok().map(|i| self.colors[i])
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// Every coloring of `domain` with `k` colors, in lexicographic order of
    /// the color vectors. Callers bound the count with [`coloring_count`].
    pub fn all(k: usize, domain: &[ChainMap]) -> impl Iterator<Item = Coloring> + '_ {
        let total = coloring_count(k, domain.len()).expect("too many colorings to list");
        (0..total).map(move |i| {
            let colors = crate::chains::index_tuple(i, k, domain.len());
            Coloring {
                k,
                domain: domain.to_vec(),
                colors,
            }
        })
    }
}

/// `k^m`, if it fits in a `usize`.
pub fn coloring_count(k: usize, m: usize) -> Option<usize> {
    k.checked_pow(u32::try_from(m).ok()?)
}

/// Hom-sets of an arrow query together with the composite sets of every
/// candidate witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowInstance {
    pub direction: Direction,
    /// Morphisms being colored.
    pub colored: Vec<ChainMap>,
    /// Candidate witnesses.
    pub witnesses: Vec<ChainMap>,
    /// Morphisms between `B` and `A` composed with each witness.
    pub connecting: Vec<ChainMap>,
    /// For each witness, the indices into `colored` of its composites.
    pub sets: Vec<Vec<usize>>,
}

impl ArrowInstance {
    pub fn new(category: Category, direction: Direction, c: &Object, b: &Object, a: &Object) -> Result<Self> {
        match direction {
            Direction::Dual => ArrowInstance::from_homs(direction, hom(category, c, a)?, hom(category, c, b)?, hom(category, b, a)?),
            Direction::Direct => ArrowInstance::from_homs(direction, hom(category, a, c)?, hom(category, b, c)?, hom(category, a, b)?),
        }
    }

    pub fn from_homs(direction: Direction, mut colored: Vec<ChainMap>, witnesses: Vec<ChainMap>, connecting: Vec<ChainMap>) -> Result<Self> {
        colored.sort();
        let sets = witnesses
            .iter()
            .map(|w| {
                let mut set = connecting
                    .iter()
                    .map(|f| {
                        let composite = match direction {
                            Direction::Dual => compose(f, w)?,
                            Direction::Direct => compose(w, f)?,
                        };
                        colored
                            .binary_search(&composite)
                            .map_err(|_| Error::Precondition("composite outside the colored hom-set".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                set.sort_unstable();
                set.dedup();
                Ok(set)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ArrowInstance {
            direction,
            colored,
            witnesses,
            connecting,
            sets,
        })
    }

    /// Distinct colors met by witness `w` under `colors` (indexed like
    /// `colored`).
    pub fn colors_of(&self, w: usize, colors: &[usize]) -> Vec<usize> {
        let mut cs: Vec<usize> = self.sets[w].iter().map(|&i| colors[i]).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    /// The first witness meeting at most `t` colors.
    pub fn find_witness(&self, colors: &[usize], t: usize) -> Option<(usize, Vec<usize>)> {
        (0..self.witnesses.len())
            .map(|w| (w, self.colors_of(w, colors)))
            .find(|(_, cs)| cs.len() <= t)
    }

    /// Colors of a [`Coloring`] listed in the order of `colored`.
    pub fn colors_for(&self, coloring: &Coloring) -> Result<Vec<usize>> {
        if coloring.domain != self.colored {
            return Err(Error::InvalidColoring("domain differs from the colored hom-set".into()));
        }
        Ok(coloring.colors.clone())
    }
}

/// Limits for arrow searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest colored hom-set searched exhaustively without an explicit
    /// node budget.
    pub exhaustive_limit: usize,
    /// Explicit node budget; enables exhaustive search at any size.
    pub node_budget: Option<u64>,
    /// Steps of randomized refutation search.
    pub random_steps: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            exhaustive_limit: 22,
            node_budget: None,
            random_steps: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowQuery {
    pub category: Category,
    pub direction: Direction,
    pub c: usize,
    pub b: usize,
    pub a: usize,
    pub k: usize,
    pub t: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictKind {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum Verdict {
    /// No coloring escapes. `witness` is set when a single morphism works
    /// for every coloring, or when a specific coloring was checked.
    Holds {
        witness: Option<ChainMap>,
        colors: Option<Vec<usize>>,
    },
    Fails { coloring: Coloring },
    Unknown { reason: String },
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Holds { .. } => VerdictKind::Holds,
            Verdict::Fails { .. } => VerdictKind::Fails,
            Verdict::Unknown { .. } => VerdictKind::Unknown,
        }
    }

    pub fn holds(&self) -> bool {
        self.kind() == VerdictKind::Holds
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Some witness meets at most `t` morphisms, or no witness exists.
    Trivial,
    Exhaustive,
    Randomized,
    /// A single given coloring was checked.
    GivenColoring,
    /// Obtained by transporting a chain-level certificate.
    Transported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub method: Method,
    pub nodes: u64,
    pub random_steps: u64,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomSizes {
    pub colored: usize,
    pub witnesses: usize,
    pub connecting: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowCertificate {
    pub query: ArrowQuery,
    pub hom_sizes: HomSizes,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl ArrowCertificate {
    pub fn kind(&self) -> VerdictKind {
        self.verdict.kind()
    }
}

/// Decides an arrow instance for all `k`-colorings.
pub fn decide(instance: &ArrowInstance, k: usize, t: usize, config: &SearchConfig) -> Result<(Verdict, SearchStats)> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let m = instance.colored.len();
    let stats = |method, nodes, random_steps, seed| SearchStats {
        method,
        nodes,
        random_steps,
        seed,
    };
    if let Some(w) = instance.sets.iter().position(|s| s.len().min(k) <= t) {
        return Ok((
            Verdict::Holds {
                witness: Some(instance.witnesses[w].clone()),
                colors: None,
            },
            stats(Method::Trivial, 0, 0, None),
        ));
    }
    if instance.witnesses.is_empty() {
        let coloring = Coloring::constant(k, instance.colored.clone(), 0)?;
        return Ok((Verdict::Fails { coloring }, stats(Method::Trivial, 0, 0, None)));
    }
    let mut nodes = 0;
    if m <= config.exhaustive_limit || config.node_budget.is_some() {
        let budget = config.node_budget.unwrap_or(u64::MAX);
        let (outcome, visited) = search::exhaustive(m, &instance.sets, k, t, budget);
        nodes = visited;
        match outcome {
            search::Outcome::Refuted(colors) => {
                let coloring = Coloring::new(k, instance.colored.clone(), colors)?;
                return Ok((Verdict::Fails { coloring }, stats(Method::Exhaustive, nodes, 0, None)));
            }
            search::Outcome::NoRefutation => {
                return Ok((
                    Verdict::Holds {
                        witness: None,
                        colors: None,
                    },
                    stats(Method::Exhaustive, nodes, 0, None),
                ));
            }
            search::Outcome::OutOfBudget => {}
        }
    }
    let (found, steps) = search::randomized(m, &instance.sets, k, t, config.random_steps, config.seed);
    let st = stats(Method::Randomized, nodes, steps, Some(config.seed));
    match found {
        Some(colors) => Ok((
            Verdict::Fails {
                coloring: Coloring::new(k, instance.colored.clone(), colors)?,
            },
            st,
        )),
        None => {
            let reason = if config.node_budget.is_some() {
                format!("node budget of {} exhausted and {steps} random steps found no refutation", nodes)
            } else {
                format!(
                    "{m} colored morphisms exceed the exhaustive limit of {}; {steps} random steps found no refutation; pass a node budget for exhaustive search",
                    config.exhaustive_limit
                )
            };
            Ok((Verdict::Unknown { reason }, st))
        }
    }
}

/// Checks `C ⟵ (B)^A_{k,t}` in `category`.
#[allow(clippy::too_many_arguments)]
pub fn check_arrow(
    category: Category,
    direction: Direction,
    c: &Object,
    b: &Object,
    a: &Object,
    k: usize,
    t: usize,
    config: &SearchConfig,
) -> Result<ArrowCertificate> {
    let instance = ArrowInstance::new(category, direction, c, b, a)?;
    let (verdict, stats) = decide(&instance, k, t, config)?;
    Ok(certificate(category, direction, (c, b, a), &instance, k, t, verdict, stats))
}

#[allow(clippy::too_many_arguments)]
fn certificate(
    category: Category,
    direction: Direction,
    (c, b, a): (&Object, &Object, &Object),
    instance: &ArrowInstance,
    k: usize,
    t: usize,
    verdict: Verdict,
    stats: SearchStats,
) -> ArrowCertificate {
    ArrowCertificate {
        query: ArrowQuery {
            category,
            direction,
            c: c.size(),
            b: b.size(),
            a: a.size(),
            k,
            t,
        },
        hom_sizes: HomSizes {
            colored: instance.colored.len(),
            witnesses: instance.witnesses.len(),
            connecting: instance.connecting.len(),
        },
        verdict,
        stats,
    }
}

/// Checks the arrow for one specific coloring.
pub fn check_coloring(
    category: Category,
    direction: Direction,
    (c, b, a): (&Object, &Object, &Object),
    coloring: &Coloring,
    t: usize,
) -> Result<ArrowCertificate> {
    let instance = ArrowInstance::new(category, direction, c, b, a)?;
    let colors = instance.colors_for(coloring)?;
    let verdict = match instance.find_witness(&colors, t) {
        Some((w, cs)) => Verdict::Holds {
            witness: Some(instance.witnesses[w].clone()),
            colors: Some(cs),
        },
        None => Verdict::Fails {
            coloring: coloring.clone(),
        },
    };
    let stats = SearchStats {
        method: Method::GivenColoring,
        nodes: instance.witnesses.len() as u64,
        random_steps: 0,
        seed: None,
    };
    Ok(certificate(category, direction, (c, b, a), &instance, coloring.k, t, verdict, stats))
}

/// Outcome of the search for the least `n` with `n ⟵ (b)^a_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrSearch {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub n: Option<usize>,
    pub certificate: Option<ArrowCertificate>,
    /// Verdict at every size tried, smallest first.
    pub history: Vec<(usize, VerdictKind)>,
}

/// Finds the least `n ≤ max_n` with `n ⟵ (b)^a_k` among finite chains.
/// Stops without an answer at the first undecided size, since a larger
/// answer would then not be known to be least.
pub fn gr_witness_search(a: usize, b: usize, k: usize, max_n: usize, config: &SearchConfig) -> Result<GrSearch> {
    if a > b || k < 2 || a == 0 {
        return Err(Error::Precondition(format!("need 1 ≤ a ≤ b and k ≥ 2, got a={a}, b={b}, k={k}")));
    }
    let mut history = Vec::new();
    for n in b..=max_n {
        let cert = check_arrow(Category::ChainsRs, Direction::Dual, &Object::Chain(n), &Object::Chain(b), &Object::Chain(a), k, 1, config)?;
        history.push((n, cert.kind()));
        match cert.kind() {
            VerdictKind::Holds => {
                return Ok(GrSearch {
                    a,
                    b,
                    k,
                    n: Some(n),
                    certificate: Some(cert),
                    history,
                })
            }
            VerdictKind::Fails => {}
            VerdictKind::Unknown => break,
        }
    }
    Ok(GrSearch {
        a,
        b,
        k,
        n: None,
        certificate: None,
        history,
    })
}

/// Given a coloring of `hom(D, A)` and a connecting morphism `r: D → C`,
/// pulls the coloring back to `hom(C, A)`, finds a witness `w` there and
/// returns `w ∘ r`, a witness at `D`.
pub fn lift_witness(at_c: &ArrowInstance, at_d: &ArrowInstance, r: &ChainMap, colors_d: &[usize], t: usize) -> Result<Option<ChainMap>> {
    let pulled = at_c
        .colored
        .iter()
        .map(|g| {
            let composite = compose(g, r)?;
            at_d.colored
                .binary_search(&composite)
                .map(|i| colors_d[i])
                .map_err(|_| Error::Precondition("pulled-back morphism outside hom(D, A)".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    match at_c.find_witness(&pulled, t) {
        Some((w, _)) => Ok(Some(compose(&at_c.witnesses[w], r)?)),
        None => Ok(None),
    }
}

/// Re-derives the arrow at `d` from the arrow at `c` along a morphism
/// `d → c` and compares with a direct check at `d`. When `hom(D, A)` is
/// small, every coloring at `d` is also handled by an explicitly lifted
/// witness.
#[allow(clippy::too_many_arguments)]
pub fn going_up_check(
    category: Category,
    c: &Object,
    d: &Object,
    b: &Object,
    a: &Object,
    k: usize,
    t: usize,
    config: &SearchConfig,
) -> Result<bool> {
    let connecting = hom(category, d, c)?;
    let r = connecting.first().ok_or(Error::NoConnectingMorphism)?;
    let at_c = ArrowInstance::new(category, Direction::Dual, c, b, a)?;
    let (verdict_c, _) = decide(&at_c, k, t, config)?;
    if !verdict_c.holds() {
        return Err(Error::Precondition("the arrow does not hold at the larger object".into()));
    }
    let at_d = ArrowInstance::new(category, Direction::Dual, d, b, a)?;
    let (verdict_d, _) = decide(&at_d, k, t, config)?;
    if !verdict_d.holds() {
        return Ok(false);
    }
    const LIFT_LIMIT: usize = 1 << 16;
    if coloring_count(k, at_d.colored.len()).is_some_and(|n| n <= LIFT_LIMIT) {
        for coloring in Coloring::all(k, &at_d.colored) {
            let Some(w) = lift_witness(&at_c, &at_d, r, &coloring.colors, t)? else {
                return Ok(false);
            };
            let Ok(wi) = at_d.witnesses.binary_search(&w) else {
                return Ok(false);
            };
            if at_d.colors_of(wi, &coloring.colors).len() > t {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sum of per-expansion degrees over every order of `a`. Keys are orders
/// listed from least to greatest.
pub fn expansion_sum_bound(a: &FiniteAlgebra, degrees: &BTreeMap<Vec<usize>, usize>) -> Result<usize> {
    expansions(a)
        .iter()
        .map(|e| {
            degrees
                .get(e.order())
                .copied()
                .ok_or_else(|| Error::MissingExpansion(format!("{:?}", e.order())))
        })
        .sum()
}

/// Bounds on a small degree relative to finite candidate lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBounds {
    pub lower: usize,
    pub upper: Option<usize>,
    /// Always true: the bounds only speak about the supplied candidates.
    pub catalog_relative: bool,
    /// `(k, index of B, t)` for which every candidate `C` failed.
    pub refutations: Vec<(usize, usize, usize)>,
    /// Number of checks that ended undecided.
    pub undecided: usize,
}

/// Catalog-relative bounds on the small degree of `a`.
///
/// The lower bound is raised past `t` when, for some `k ≤ k_max` and some
/// candidate `B`, every candidate `C` fails at `t`. The upper bound is the
/// least `t ≤ t_max` at which every `(k, B)` is met by some candidate `C`.
#[allow(clippy::too_many_arguments)]
pub fn small_degree_bounds(
    category: Category,
    direction: Direction,
    a: &Object,
    b_candidates: &[Object],
    c_candidates: &[Object],
    k_max: usize,
    t_max: usize,
    config: &SearchConfig,
) -> Result<DegreeBounds> {
    let relevant: Vec<usize> = (0..b_candidates.len())
        .map(|i| {
            let h = match direction {
                Direction::Dual => hom(category, &b_candidates[i], a)?,
                Direction::Direct => hom(category, a, &b_candidates[i])?,
            };
            Ok((i, !h.is_empty()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(i, keep)| keep.then_some(i))
        .collect();
    let mut bounds = DegreeBounds {
        lower: 1,
        upper: None,
        catalog_relative: true,
        refutations: Vec::new(),
        undecided: 0,
    };
    let mut instances: BTreeMap<(usize, usize), ArrowInstance> = BTreeMap::new();
    for t in 1..=t_max {
        let mut covered = true;
        for k in 1..=k_max {
            for &bi in &relevant {
                let mut met = false;
                let mut all_fail = true;
                for (ci, c) in c_candidates.iter().enumerate() {
                    if !instances.contains_key(&(bi, ci)) {
                        instances.insert((bi, ci), ArrowInstance::new(category, direction, c, &b_candidates[bi], a)?);
                    }
                    let (verdict, _) = decide(&instances[&(bi, ci)], k, t, config)?;
                    match verdict.kind() {
                        VerdictKind::Holds => {
                            met = true;
                            all_fail = false;
                            break;
                        }
                        VerdictKind::Fails => {}
                        VerdictKind::Unknown => {
                            bounds.undecided += 1;
                            all_fail = false;
                        }
                    }
                }
                covered &= met;
                if all_fail {
                    bounds.refutations.push((k, bi, t));
                    bounds.lower = bounds.lower.max(t + 1);
                }
            }
        }
        if covered {
            bounds.upper = Some(t);
            break;
        }
    }
    Ok(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(n: usize) -> Object {
        Object::Chain(n)
    }

    #[test]
    fn categories_parse() {
        for c in [Category::ChainsRs, Category::OrderedAlgebrasRe, Category::AlgebrasEpi] {
            assert_eq!(c.tag().parse::<Category>().unwrap(), c);
        }
        assert!(matches!("posets".parse::<Category>(), Err(Error::UnknownCategory(_))));
    }

    #[test]
    fn arrow_examples() {
        let cfg = SearchConfig::default();
        let same = check_arrow(Category::ChainsRs, Direction::Dual, &ch(3), &ch(2), &ch(2), 2, 1, &cfg).unwrap();
        assert_eq!(same.kind(), VerdictKind::Holds);
        let refuted = check_arrow(Category::ChainsRs, Direction::Dual, &ch(3), &ch(3), &ch(2), 2, 1, &cfg).unwrap();
        let Verdict::Fails { coloring } = &refuted.verdict else {
            panic!("{refuted:?}")
        };
        assert_eq!(coloring.len(), 3);
        let colors: Vec<usize> = coloring.colors.clone();
        assert!(colors.contains(&0) && colors.contains(&1));
    }

    #[test]
    fn gr_trivial_cases() {
        let cfg = SearchConfig::default();
        assert_eq!(gr_witness_search(2, 2, 2, 6, &cfg).unwrap().n, Some(2));
        assert_eq!(gr_witness_search(1, 2, 2, 6, &cfg).unwrap().n, Some(2));
        assert!(gr_witness_search(3, 2, 2, 6, &cfg).is_err());
    }

    #[test]
    fn going_up_on_chains() {
        let cfg = SearchConfig::default();
        let g = gr_witness_search(1, 2, 2, 6, &cfg).unwrap();
        let n = g.n.unwrap();
        assert!(going_up_check(Category::ChainsRs, &ch(n), &ch(n + 1), &ch(2), &ch(1), 2, 1, &cfg).unwrap());
        assert!(going_up_check(Category::ChainsRs, &ch(3), &ch(3), &ch(2), &ch(2), 2, 1, &cfg).unwrap());
        assert_eq!(
            going_up_check(Category::ChainsRs, &ch(3), &ch(2), &ch(2), &ch(2), 2, 1, &cfg).unwrap_err(),
            Error::NoConnectingMorphism
        );
    }

    #[test]
    fn expansion_sums() {
        let sig = crate::terms::Signature::from_pairs(&[("meet", 2)]).unwrap();
        for n in 1..=3 {
            let a = FiniteAlgebra::from_fn(sig.clone(), n, |_, x| x[0].min(x[1])).unwrap();
            let degrees = expansions(&a).into_iter().map(|e| (e.order().to_vec(), 1)).collect();
            assert_eq!(expansion_sum_bound(&a, &degrees).unwrap(), [1, 2, 6][n - 1]);
        }
        let a = FiniteAlgebra::from_fn(sig, 2, |_, x| x[0].min(x[1])).unwrap();
        assert!(matches!(expansion_sum_bound(&a, &BTreeMap::new()), Err(Error::MissingExpansion(_))));
    }

    #[test]
    fn degree_bounds_for_chains() {
        let cfg = SearchConfig::default();
        let b: Vec<Object> = (1..=3).map(ch).collect();
        let c: Vec<Object> = (1..=6).map(ch).collect();
        let bounds = small_degree_bounds(Category::ChainsRs, Direction::Dual, &ch(2), &b, &c, 2, 2, &cfg).unwrap();
        assert_eq!(bounds.lower, 1);
        assert!(bounds.catalog_relative);
    }
}
