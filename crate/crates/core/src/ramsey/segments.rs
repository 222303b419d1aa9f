//! Segment-by-segment coloring reduction for ordered free algebras.
//!
//! A rigid epimorphism `h` from an ordered free algebra onto `A` is fixed by
//! its restriction to the generators, which is a rigid surjection onto an
//! initial segment `A_i` of `A`. Colorings of `hom(F̂_N, A)` therefore split
//! into colorings `γ_i` of chain morphisms `N → i`, one per segment. Working
//! from the last segment down, each `γ_i` is made constant by a chain witness
//! `w_i: P_i → P_{i-1}`; the composite `u = w_1 ∘ ⋯ ∘ w_s: N → M` then
//! leaves at most one color per segment on `hom(F̂_M, A) ∘ T̂(u)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{gr_witness_search, hom, Category, Coloring, Object, SearchConfig};
use crate::chains::{compose, ChainMap};
use crate::ordered::{hat_t_v_between, rigid_epi_set, OrderedAlgebra, OrderedFreeAlgebra};
use crate::{Error, Result};

/// Chain sizes `P_0 = m < … ≤ P_s` with `P_i ⟵ (P_{i-1})^i_k` for each `i`,
/// each chosen least by search. `None` if some size exceeds `max_n`.
pub fn plan_segments(s: usize, k: usize, m: usize, max_n: usize, config: &SearchConfig) -> Result<Option<Vec<usize>>> {
    if m < s {
        return Err(Error::Precondition(format!("starting size {m} is below the number of segments {s}")));
    }
    let mut sizes = alloc::vec![m];
    for i in 1..=s {
        let prev = sizes[i - 1];
        match gr_witness_search(i, prev, k.max(2), max_n, config)?.n {
            Some(n) => sizes.push(n),
            None => return Ok(None),
        }
    }
    Ok(Some(sizes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentStep {
    /// Segment index `i`: this step handles restrictions onto `A_i`.
    pub segment: usize,
    pub witness: ChainMap,
    /// The single color left on this segment, if any morphism lands there.
    pub color: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCertificate {
    pub sizes: Vec<usize>,
    /// Steps in the order they were taken, last segment first.
    pub steps: Vec<SegmentStep>,
    /// `u = w_1 ∘ ⋯ ∘ w_s` from `N` generators to `M`.
    pub u: ChainMap,
    /// `T̂(u)` as a carrier map `F̂_N → F̂_M`.
    pub witness: Vec<usize>,
    /// Colors of `hom(F̂_M, A) ∘ T̂(u)`.
    pub colors_used: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "UPPERCASE")]
pub enum SegmentOutcome {
    Certified(SegmentCertificate),
    Unknown { step: usize, reason: String },
}

/// Runs the reduction for a coloring `chi` of `hom(big, a)` where `big` and
/// `small` are the ordered free algebras on `sizes[s]` and `sizes[0]`
/// generators and `s = |A|`. `budget` bounds the composites examined per
/// step.
pub fn segment_induction(
    a: &OrderedAlgebra,
    sizes: &[usize],
    big: &OrderedFreeAlgebra,
    small: &OrderedFreeAlgebra,
    chi: &Coloring,
    budget: u64,
) -> Result<SegmentOutcome> {
    let s = a.size();
    if sizes.len() != s + 1 {
        return Err(Error::Precondition(format!("{} chain sizes for {s} segments", sizes.len())));
    }
    let (n, m) = (sizes[s], sizes[0]);
    if big.n_generators() != n || small.n_generators() != m {
        return Err(Error::Precondition("free algebras do not match the planned sizes".into()));
    }
    let a_obj = Object::Ordered(a.clone());
    let domain = hom(Category::OrderedAlgebrasRe, &Object::Ordered(big.ordered.clone()), &a_obj)?;
    if chi.domain != domain {
        return Err(Error::InvalidColoring("coloring is not over hom(F̂_N, A)".into()));
    }

    // restriction to the generators, as positions in A
    let mut by_restriction: BTreeMap<ChainMap, usize> = BTreeMap::new();
    for (h, &color) in chi.domain.iter().zip(&chi.colors) {
        let positions: Vec<usize> = (0..n).map(|g| a.rank(h.table[g])).collect();
        let top = positions.iter().max().map_or(0, |&p| p + 1);
        let r = ChainMap::new(n, top, positions)?;
        if !r.is_rigid_surjection() {
            return Err(Error::Precondition("restriction to the generators is not rigid".into()));
        }
        by_restriction.insert(r, color);
    }
    let gamma = |v: &ChainMap| by_restriction.get(v).copied().unwrap_or(0);

    let mut suffix = ChainMap::identity(n);
    let mut steps = Vec::with_capacity(s);
    let mut spent = 0u64;
    for i in (1..=s).rev() {
        let (dom, cod) = (sizes[i], sizes[i - 1]);
        let candidates = hom(Category::ChainsRs, &Object::Chain(dom), &Object::Chain(cod))?;
        let onto_segment = hom(Category::ChainsRs, &Object::Chain(cod), &Object::Chain(i))?;
        let mut found = None;
        'witness: for w in &candidates {
            let mut color = None;
            for g in &onto_segment {
                spent += 1;
                if spent > budget {
                    return Ok(SegmentOutcome::Unknown {
                        step: i,
                        reason: format!("budget of {budget} composites exhausted at segment {i}"),
                    });
                }
                let c = gamma(&compose(&compose(g, w)?, &suffix)?);
                match color {
                    None => color = Some(c),
                    Some(prev) if prev != c => continue 'witness,
                    Some(_) => {}
                }
            }
            found = Some((w.clone(), color));
            break;
        }
        let Some((w, color)) = found else {
            return Ok(SegmentOutcome::Unknown {
                step: i,
                reason: format!("no rigid surjection {dom} → {cod} makes segment {i} monochromatic"),
            });
        };
        suffix = compose(&w, &suffix)?;
        steps.push(SegmentStep { segment: i, witness: w, color });
    }

    let u = suffix;
    let lift = hat_t_v_between(big, small, &u)?;
    let mut colors_used = Vec::new();
    for h in rigid_epi_set(&small.ordered, a)? {
        let composite: Vec<usize> = lift.table.iter().map(|&x| h.table[x]).collect();
        let c = chi
            .color_of(&ChainMap::new(big.size(), a.size(), composite)?)
            .ok_or_else(|| Error::InvalidColoring("composite missing from the coloring".into()))?;
        colors_used.push(c);
    }
    colors_used.sort_unstable();
    colors_used.dedup();
    if colors_used.len() > s {
        return Ok(SegmentOutcome::Unknown {
            step: 0,
            reason: format!("{} colors survive, more than {s}", colors_used.len()),
        });
    }
    Ok(SegmentOutcome::Certified(SegmentCertificate {
        sizes: sizes.to_vec(),
        steps,
        u,
        witness: lift.table,
        colors_used,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{FiniteAlgebra, Variety};
    use crate::ordered::ordered_free;
    use crate::terms::Signature;
    use alloc::vec;

    #[test]
    fn one_element_target() {
        let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
        let two = FiniteAlgebra::from_fn(sig.clone(), 2, |_, x| x[0].min(x[1])).unwrap();
        let one = OrderedAlgebra::natural(FiniteAlgebra::from_fn(sig, 1, |_, _| 0).unwrap());
        let v = Variety::new(vec![two]).unwrap();
        let cfg = SearchConfig::default();
        let sizes = plan_segments(1, 2, 2, 6, &cfg).unwrap().unwrap();
        assert_eq!(sizes, vec![2, 2]);
        let big = ordered_free(&v, sizes[1]).unwrap();
        let small = ordered_free(&v, sizes[0]).unwrap();
        let domain = hom(Category::OrderedAlgebrasRe, &Object::Ordered(big.ordered.clone()), &Object::Ordered(one.clone())).unwrap();
        let chi = Coloring::random(2, domain, 3).unwrap();
        let SegmentOutcome::Certified(cert) = segment_induction(&one, &sizes, &big, &small, &chi, 10_000).unwrap() else {
            panic!()
        };
        assert_eq!(cert.colors_used.len(), 1);
    }
}
