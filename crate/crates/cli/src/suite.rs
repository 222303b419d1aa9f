//! Property battery replaying the rigidity, term, free-algebra and arrow
//! lemmas at finite sizes.

use std::collections::BTreeSet;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use dualram_core::algebras::{extend_from_generators, free_algebra, product, FiniteAlgebra, Variety};
use dualram_core::chains::{compose, enumerate_rigid_surjections, index_tuple, lex_product_map, tuple_index, ChainMap};
use dualram_core::ordered::{automorphisms, factor_reflection, hat_t_v, ordered_free, rigid_epi_set, OrderedAlgebra};
use dualram_core::ramsey::segments::{segment_induction, SegmentOutcome};
use dualram_core::ramsey::transport::{transport_arrow, ColoringMode};
use dualram_core::ramsey::validate::validate_certificate;
use dualram_core::ramsey::{check_arrow, expansion_sum_bound, gr_witness_search, hom, Category, Coloring, Direction, Object, SearchConfig};
use dualram_core::terms::{check_mu_rigid, check_subst_minima, check_subst_rigid, enumerate_neat, render, shape_of, Signature, Term};

use crate::catalog::Catalog;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Chains,
    Terms,
    Algebras,
    Ordered,
    Ramsey,
    All,
}

/// Deliberate defects for checking that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    /// Treat every surjection as rigid.
    RigidIsSurjective,
    /// Reverse the neat order on terms.
    ReversedNeatOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Largest chain in the exhaustive chain checks.
    pub max_chain: usize,
    /// Longest shape in the term checks.
    pub max_term_len: usize,
    /// Most generators for free algebras.
    pub max_generators: usize,
    pub mutant: Option<Mutant>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_chain: 6,
            max_term_len: 8,
            max_generators: 3,
            mutant: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub scope: Scope,
    /// The lemma or theorem the check replays.
    pub property: String,
    pub cases: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

struct Ctx<'a> {
    config: &'a SuiteConfig,
    catalog: &'a Catalog,
    checks: Vec<CheckResult>,
}

/// Outcome of one check: number of cases, or the first counterexample.
type Outcome = std::result::Result<u64, String>;

impl Ctx<'_> {
    fn rigid(&self, f: &ChainMap) -> bool {
        match self.config.mutant {
            Some(Mutant::RigidIsSurjective) => f.is_surjective(),
            _ => f.is_rigid_surjection(),
        }
    }

    fn neat_lt(&self, a: &Term, b: &Term) -> bool {
        match self.config.mutant {
            Some(Mutant::ReversedNeatOrder) => a > b,
            _ => a < b,
        }
    }

    fn record(&mut self, scope: Scope, property: &str, outcome: Result<Outcome>) {
        let (cases, passed, failure) = match outcome {
            Ok(Ok(cases)) => (cases, true, None),
            Ok(Err(why)) => (0, false, Some(why)),
            Err(e) => (0, false, Some(format!("error: {e:#}"))),
        };
        self.checks.push(CheckResult {
            scope,
            property: property.to_string(),
            cases,
            passed,
            failure,
        });
    }
}

fn all_maps(n: usize, k: usize) -> impl Iterator<Item = ChainMap> {
    let total = if n == 0 { 1 } else { k.pow(n as u32) };
    (0..total).map(move |i| ChainMap::new(n, k, index_tuple(i, k, n)).expect("in range"))
}

fn surjections(n: usize, k: usize) -> impl Iterator<Item = ChainMap> {
    all_maps(n, k).filter(ChainMap::is_surjective)
}

fn stirling(n: usize, k: usize) -> u64 {
    let mut s = vec![vec![0u64; k + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

/// Runs every check in `scope`.
pub fn run(scope: Scope, config: &SuiteConfig, catalog: &Catalog) -> SuiteReport {
    let mut ctx = Ctx {
        config,
        catalog,
        checks: Vec::new(),
    };
    let wants = |s: Scope| scope == Scope::All || scope == s;
    if wants(Scope::Chains) {
        chain_checks(&mut ctx);
    }
    if wants(Scope::Terms) {
        term_checks(&mut ctx);
    }
    if wants(Scope::Algebras) {
        algebra_checks(&mut ctx);
    }
    if wants(Scope::Ordered) {
        ordered_checks(&mut ctx);
    }
    if wants(Scope::Ramsey) {
        ramsey_checks(&mut ctx);
    }
    let passed = ctx.checks.iter().all(|c| c.passed);
    SuiteReport {
        config: config.clone(),
        checks: ctx.checks,
        passed,
    }
}

fn chain_checks(ctx: &mut Ctx) {
    let cap = ctx.config.max_chain;

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for n in 1..=cap {
            for k in 1..=n {
                let counted = all_maps(n, k).filter(|f| ctx.rigid(f)).count() as u64;
                let listed = enumerate_rigid_surjections(n, k).len() as u64;
                let expected = stirling(n, k);
                if counted != expected || listed != expected {
                    return Ok(Err(format!("n={n}, k={k}: {counted} counted, {listed} listed, S(n,k)={expected}")));
                }
                cases += 1;
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Chains, "rigid surjections are counted by Stirling numbers", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for n in 1..=cap {
            for k in 1..=n {
                for f in surjections(n, k) {
                    if ctx.rigid(&f) != f.initial_segment_criterion()? {
                        return Ok(Err(format!("{:?}", f.table)));
                    }
                    cases += 1;
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Chains, "initial-segment criterion for rigidity", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for n in 1..=cap {
            for m in 1..=n {
                let fs: Vec<ChainMap> = surjections(n, m).collect();
                for k in 1..=m {
                    let gs: Vec<ChainMap> = surjections(m, k).collect();
                    for f in &fs {
                        for g in &gs {
                            let gf = compose(g, f)?;
                            let closed = !(ctx.rigid(f) && ctx.rigid(g)) || ctx.rigid(&gf);
                            let cancels = !(ctx.rigid(f) && ctx.rigid(&gf)) || ctx.rigid(g);
                            if !closed || !cancels {
                                return Ok(Err(format!("f={:?}, g={:?}", f.table, g.table)));
                            }
                            cases += 1;
                        }
                    }
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Chains, "composition and cancellation of rigid surjections", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for n in 1..=cap {
            for k in 1..=n {
                for f in surjections(n, k) {
                    let d = f.dual_embedding()?;
                    let section = compose(&f, &d)? == ChainMap::identity(k);
                    if !section || ctx.rigid(&f) != d.is_strictly_increasing() {
                        return Ok(Err(format!("{:?}", f.table)));
                    }
                    cases += 1;
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Chains, "minimal-preimage characterization of rigidity", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for n in 1..=cap.min(4) {
            for k in 1..=n {
                for f in enumerate_rigid_surjections(n, k) {
                    let minima = f.dual_embedding()?;
                    for power in 1..=3 {
                        let lf = lex_product_map(&f, power)?;
                        let expected: Vec<usize> = (0..lf.k)
                            .map(|i| {
                                let t: Vec<usize> = index_tuple(i, k, power).into_iter().map(|b| minima.table[b]).collect();
                                tuple_index(&t, n)
                            })
                            .collect();
                        if !ctx.rigid(&lf) || lf.dual_embedding()?.table != expected {
                            return Ok(Err(format!("f={:?}, power {power}", f.table)));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Chains, "lexicographic powers of rigid surjections", out);
}

/// Every signature with at most two symbols of arity at most two. Symbol
/// order matters to the neat order, so `(p/0, q/1)` and `(p/1, q/0)` both
/// appear.
pub fn small_signatures() -> Vec<Signature> {
    let mut out = vec![Signature::from_pairs(&[]).expect("valid")];
    for a in 0..=2 {
        out.push(Signature::from_pairs(&[("p", a)]).expect("valid"));
    }
    for a in 0..=2 {
        for b in 0..=2 {
            out.push(Signature::from_pairs(&[("p", a), ("q", b)]).expect("valid"));
        }
    }
    out
}

fn term_checks(ctx: &mut Ctx) {
    let len = ctx.config.max_term_len;

    let out = (|| -> Result<Outcome> {
        let sig = Signature::from_pairs(&[("c", 0), ("f", 3), ("g", 2)])?;
        let (x1, x2) = (Term::Var(0), Term::Var(1));
        let t = Term::app(1, vec![Term::app(2, vec![x2, x1.clone()]), Term::constant(0), x1]);
        if shape_of(&t).render(&sig) != "f(g(ξ,ξ),c,ξ)" {
            return Ok(Err(format!("shape of {} is {}", render(&t, &sig), shape_of(&t).render(&sig))));
        }
        let terms = enumerate_neat(&sig, 2, len);
        for w in terms.windows(2) {
            if !ctx.neat_lt(&w[0], &w[1]) {
                return Ok(Err(format!("{} listed before {}", render(&w[0], &sig), render(&w[1], &sig))));
            }
        }
        let rank = |t: &Term| match t {
            Term::Var(_) => 0,
            Term::App(_, args) if args.is_empty() => 1,
            Term::App(..) => 2,
        };
        if terms.windows(2).any(|w| rank(&w[0]) > rank(&w[1])) {
            return Ok(Err("variables, constants and compound terms are interleaved".into()));
        }
        Ok(Ok(terms.len() as u64))
    })();
    ctx.record(Scope::Terms, "neat well-order on terms", out);

    let sigs = small_signatures();
    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for sig in &sigs {
            for n in 1..=4 {
                for k in 1..=n {
                    for f in enumerate_rigid_surjections(n, k) {
                        if !check_subst_rigid(&f, sig, len)? || !check_subst_minima(&f, sig, len)? {
                            return Ok(Err(format!("{:?} over {:?}", f.table, sig)));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Terms, "substitution along a rigid surjection is rigid", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for sig in &sigs {
            for n in 1..=3 {
                if !check_mu_rigid(sig, n, len) {
                    return Ok(Err(format!("{n} variables over {sig:?}")));
                }
                cases += 1;
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Terms, "flattening of nested terms is rigid", out);
}

fn algebra_checks(ctx: &mut Ctx) {
    let gens = ctx.config.max_generators;

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        let known: [(&str, fn(usize) -> usize); 2] = [("semilattices", |n| (1 << n) - 1), ("exp2-groups", |n| 1 << n)];
        for (name, size) in known {
            let Ok(v) = ctx.catalog.variety(name) else { continue };
            for n in 1..=gens.min(3) {
                let got = free_algebra(v, n)?.size();
                if got != size(n) {
                    return Ok(Err(format!("{name} on {n} generators has {got} elements, expected {}", size(n))));
                }
                cases += 1;
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Algebras, "free algebra sizes", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, v) in &ctx.catalog.varieties {
            for n in 1..=gens.min(2) {
                let free = free_algebra(v, n)?;
                for a in v.generators() {
                    for i in 0..a.size().pow(n as u32) {
                        let images = index_tuple(i, a.size(), n);
                        if extend_from_generators(&free.algebra, a, &free.generator_elements, &images).is_none() {
                            return Ok(Err(format!("{name}: assignment {images:?} does not extend")));
                        }
                        cases += 1;
                    }
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Algebras, "universal property of free algebras", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, v) in &ctx.catalog.varieties {
            let g = &v.generators()[0];
            let square = product(g, g)?;
            if !v.contains(g)? || !v.contains(&square)? {
                return Ok(Err(format!("{name} does not contain its generator or its square")));
            }
            cases += 2;
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Algebras, "varieties are closed under products", out);
}

fn catalog_variety_of<'c>(catalog: &'c Catalog, a: &OrderedAlgebra) -> Option<&'c Variety> {
    catalog
        .varieties
        .values()
        .find(|v| v.signature() == a.signature() && v.contains(a.algebra()).unwrap_or(false))
}

fn ordered_checks(ctx: &mut Ctx) {
    let gens = ctx.config.max_generators;

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, v) in &ctx.catalog.varieties {
            if !v.is_nontrivial() {
                continue;
            }
            for n in 1..=gens.min(3) {
                let free = ordered_free(v, n)?;
                for (e, t) in free.min_terms.iter().enumerate() {
                    if free.nu(t)? != e {
                        return Ok(Err(format!("{name}({n}): element {e} is not the value of its least term")));
                    }
                }
                if free.min_terms.windows(2).any(|w| w[0] >= w[1]) {
                    return Ok(Err(format!("{name}({n}): least terms out of neat order")));
                }
                if (0..n).any(|i| free.min_terms[i] != Term::Var(i)) {
                    return Ok(Err(format!("{name}({n}): generators do not come first")));
                }
                cases += 1;
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ordered, "ordered free algebras follow the neat order of least terms", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, a) in &ctx.catalog.ordered {
            let auts = automorphisms(a)?;
            let identity: Vec<usize> = (0..a.size()).collect();
            if auts.len() != 1 || auts[0].table != identity {
                return Ok(Err(format!("{name} has {} automorphisms", auts.len())));
            }
            cases += 1;
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ordered, "rigidity theorem: only the identity automorphism", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, a) in &ctx.catalog.ordered {
            if a.size() > 4 {
                continue;
            }
            let Some(v) = catalog_variety_of(ctx.catalog, a) else { continue };
            for n in a.size()..=gens.min(3).max(a.size()) {
                let free = ordered_free(v, n)?;
                let mut restrictions = BTreeSet::new();
                for h in rigid_epi_set(&free.ordered, a)? {
                    let images = h.table[..n].to_vec();
                    if factor_reflection(&free, a, &images)? != h || !restrictions.insert(images) {
                        return Ok(Err(format!("{name}: reflection through F({n}) is not unique")));
                    }
                    cases += 1;
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ordered, "uniqueness of the reflection into the variety", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, v) in &ctx.catalog.varieties {
            if !v.is_nontrivial() {
                continue;
            }
            for n in 1..=gens.min(3) {
                for m in 1..=n {
                    for f in enumerate_rigid_surjections(n, m) {
                        let (_, _, tf) = hat_t_v(v, &f)?;
                        for l in 1..=m {
                            for g in enumerate_rigid_surjections(m, l) {
                                let (_, _, tg) = hat_t_v(v, &g)?;
                                let (_, _, tgf) = hat_t_v(v, &compose(&g, &f)?)?;
                                if tg.after(&tf) != tgf {
                                    return Ok(Err(format!("{name}: f={:?}, g={:?}", f.table, g.table)));
                                }
                                cases += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ordered, "substitution functor on ordered free algebras", out);

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (name, a) in &ctx.catalog.algebras {
            if a.size() > 3 {
                continue;
            }
            let ones = dualram_core::ordered::expansions(a).into_iter().map(|e| (e.order().to_vec(), 1)).collect();
            let factorial: usize = (1..=a.size()).product();
            let bound = expansion_sum_bound(a, &ones)?;
            if bound != factorial {
                return Ok(Err(format!("{name}: bound {bound}, expected {factorial}")));
            }
            cases += 1;
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ordered, "expansion bound for unordered degrees", out);
}

fn sl(n: usize) -> Result<FiniteAlgebra> {
    Ok(FiniteAlgebra::from_fn(Signature::from_pairs(&[("meet", 2)])?, n, |_, x| x[0].min(x[1]))?)
}

fn ramsey_checks(ctx: &mut Ctx) {
    let cfg = SearchConfig {
        seed: ctx.config.seed,
        ..SearchConfig::default()
    };

    let out = (|| -> Result<Outcome> {
        let mut cases = 0;
        for (a, b, expected) in [(2, 2, 2), (1, 3, 3)] {
            let found = gr_witness_search(a, b, 2, 8, &cfg)?;
            let Some(cert) = found.certificate else {
                return Ok(Err(format!("no n found for a={a}, b={b}")));
            };
            let objects = (Object::Chain(cert.query.c), Object::Chain(b), Object::Chain(a));
            if found.n != Some(expected) || !validate_certificate((&objects.0, &objects.1, &objects.2), &cert).confirmed() {
                return Ok(Err(format!("a={a}, b={b}: n={:?}", found.n)));
            }
            cases += 1;
        }
        Ok(Ok(cases))
    })();
    ctx.record(Scope::Ramsey, "finite dual Ramsey theorem for chains", out);

    let out = (|| -> Result<Outcome> {
        let (c, b, a) = (Object::Chain(3), Object::Chain(3), Object::Chain(2));
        let cert = check_arrow(Category::ChainsRs, Direction::Dual, &c, &b, &a, 2, 1, &cfg)?;
        if cert.verdict.holds() || !validate_certificate((&c, &b, &a), &cert).confirmed() {
            return Ok(Err("the refuting coloring of 3 ⟵ (3)^2_2 did not revalidate".into()));
        }
        Ok(Ok(1))
    })();
    ctx.record(Scope::Ramsey, "refuting colorings revalidate", out);

    let out = (|| -> Result<Outcome> {
        let two = OrderedAlgebra::natural(sl(2)?);
        let v = Variety::new(vec![sl(2)?])?;
        let chain = gr_witness_search(2, 2, 2, 6, &cfg)?;
        let Some(cert) = chain.certificate else {
            return Ok(Err("no chain certificate".into()));
        };
        let report = transport_arrow(&cert, &two, &two, &v, &ColoringMode::All)?;
        if !report.certificate.verdict.holds() || !report.traces.iter().all(|t| t.validated) {
            return Ok(Err("a transported witness failed validation".into()));
        }
        Ok(Ok(report.traces.len() as u64))
    })();
    ctx.record(Scope::Ramsey, "transport of chain arrows to ordered free algebras", out);

    let out = (|| -> Result<Outcome> {
        let two = OrderedAlgebra::natural(sl(2)?);
        let v = Variety::new(vec![sl(2)?])?;
        let sizes = [3, 3, 6];
        let (big, small) = (ordered_free(&v, sizes[2])?, ordered_free(&v, sizes[0])?);
        let domain = hom(Category::OrderedAlgebrasRe, &Object::Ordered(big.ordered.clone()), &Object::Ordered(two.clone()))?;
        let mut colorings = vec![Coloring::constant(2, domain.clone(), 0)?];
        for i in 0..3 {
            colorings.push(Coloring::random(2, domain.clone(), ctx.config.seed.wrapping_add(i))?);
        }
        for chi in &colorings {
            match segment_induction(&two, &sizes, &big, &small, chi, 1_000_000)? {
                SegmentOutcome::Certified(c) if c.colors_used.len() <= two.size() => {}
                other => return Ok(Err(format!("{other:?}"))),
            }
        }
        Ok(Ok(colorings.len() as u64))
    })();
    ctx.record(Scope::Ramsey, "segment-by-segment induction on colorings", out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_values() {
        assert_eq!(stirling(4, 2), 7);
        assert_eq!(stirling(7, 3), 301);
        assert_eq!(stirling(0, 0), 1);
        assert_eq!(stirling(3, 0), 0);
    }

    #[test]
    fn small_signature_sweep() {
        assert_eq!(small_signatures().len(), 13);
    }
}
