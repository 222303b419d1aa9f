//! Finite well-ordered chains and rigid surjections between them.
//!
//! A chain of size `n` is canonically `0 < 1 < … < n-1`. A [`ChainMap`] is an
//! arbitrary map between canonical chains; surjectivity and rigidity are
//! predicates on it rather than construction invariants, so enumeration
//! pipelines can filter instead of failing.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite chain, optionally carrying element labels listed in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Chain {
    /// The canonical chain `0 < 1 < … < size-1`.
    pub fn new(size: usize) -> Self {
        Chain { size, labels: None }
    }

    /// A chain whose elements are `labels`, listed in increasing order.
    pub fn labeled(labels: Vec<String>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidLabels(alloc::format!("duplicate label `{l}`")));
            }
        }
        Ok(Chain {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Position of a labelled element.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Drops labels; positions are the canonical representation.
    pub fn canonical(&self) -> Chain {
        Chain::new(self.size)
    }

    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        a.cmp(&b)
    }
}

/// Ordinal sum: the chains laid end to end.
pub fn ordinal_sum(chains: &[Chain]) -> Chain {
    let size = chains.iter().map(Chain::size).sum();
    if chains.iter().all(|c| c.labels.is_some()) && !chains.is_empty() {
        let labels: Vec<String> = chains
            .iter()
            .flat_map(|c| c.labels.as_ref().unwrap().iter().cloned())
            .collect();
        if let Ok(c) = Chain::labeled(labels) {
            return c;
        }
    }
    Chain::new(size)
}

/// The `n`-th lexicographic power of `c`; tuples are indexed most
/// significant coordinate first.
pub fn lex_power(c: &Chain, n: usize) -> Chain {
    Chain::new(c.size.pow(n as u32))
}

/// Index of `tuple` in the lexicographic power of a chain of size `base`.
pub fn tuple_index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &d| acc * base + d)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

/// A map from the canonical chain `n` to the canonical chain `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainMap {
    pub n: usize,
    pub k: usize,
    pub table: Vec<usize>,
}

impl ChainMap {
    pub fn new(n: usize, k: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: table.len(),
            });
        }
        if let Some((position, &value)) = table.iter().enumerate().find(|(_, &v)| v >= k) {
            return Err(Error::OutOfRange {
                position,
                value,
                bound: k,
            });
        }
        Ok(ChainMap { n, k, table })
    }

    pub fn identity(n: usize) -> Self {
        ChainMap {
            n,
            k: n,
            table: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.k];
        for &b in &self.table {
            hit[b] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.k];
        self.table.iter().all(|&b| !core::mem::replace(&mut hit[b], true))
    }

    /// `min f⁻¹(b)` for every `b`, `None` for points outside the image.
    pub fn fiber_minima(&self) -> Vec<Option<usize>> {
        let mut minima = vec![None; self.k];
        for (a, &b) in self.table.iter().enumerate() {
            minima[b].get_or_insert(a);
        }
        minima
    }

    /// Surjective with increasing fiber minima.
    pub fn is_rigid_surjection(&self) -> bool {
        // Scanning the domain in order, each new image point must be the
        // next unused codomain point.
        let mut next = 0;
        for &b in &self.table {
            match b.cmp(&next) {
                Ordering::Equal => next += 1,
                Ordering::Greater => return false,
                Ordering::Less => {}
            }
        }
        next == self.k
    }

    /// Whether every initial segment of the domain is sent onto an initial
    /// segment of the codomain.
    pub fn initial_segment_criterion(&self) -> Result<bool> {
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let mut image = vec![false; self.k];
        let mut count = 0;
        for &b in &self.table {
            if !image[b] {
                image[b] = true;
                count += 1;
            }
            // image of {0..=a} is initial iff it is exactly {0..count}
            if image[..count].iter().any(|&h| !h) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `f^∂(b) = min f⁻¹(b)`, a map from the codomain back to the domain.
    pub fn dual_embedding(&self) -> Result<ChainMap> {
        let table = self
            .fiber_minima()
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::NotSurjective)?;
        Ok(ChainMap {
            n: self.k,
            k: self.n,
            table,
        })
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.table.windows(2).all(|w| w[0] < w[1])
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &ChainMap) -> Result<ChainMap> {
        compose(self, f)
    }
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose(g: &ChainMap, f: &ChainMap) -> Result<ChainMap> {
    if f.k != g.n {
        return Err(Error::SizeMismatch {
            expected: g.n,
            found: f.k,
        });
    }
    Ok(ChainMap {
        n: f.n,
        k: g.k,
        table: f.table.iter().map(|&x| g.table[x]).collect(),
    })
}

/// Distinct values of `table` ordered by first occurrence: the unique order
/// on the image that makes the map a rigid surjection.
pub fn induced_order<T: PartialEq + Clone>(table: &[T]) -> Vec<T> {
    let mut order: Vec<T> = Vec::new();
    for v in table {
        if !order.contains(v) {
            order.push(v.clone());
        }
    }
    order
}

/// All rigid surjections from the chain `n` onto the chain `k`, in
/// lexicographic order of their tables.
///
/// These are exactly the restricted growth strings with `k` blocks.
pub fn enumerate_rigid_surjections(n: usize, k: usize) -> Vec<ChainMap> {
    let mut out = Vec::new();
    if n < k || (k == 0 && n > 0) {
        return out;
    }
    let mut table = Vec::with_capacity(n);
    grow(n, k, 0, &mut table, &mut out);
    out
}

fn grow(n: usize, k: usize, used: usize, table: &mut Vec<usize>, out: &mut Vec<ChainMap>) {
    let pos = table.len();
    if pos == n {
        if used == k {
            out.push(ChainMap {
                n,
                k,
                table: table.clone(),
            });
        }
        return;
    }
    // every still-unused block needs a position of its own
    let remaining = n - pos;
    let upper = if used < k { used } else { k - 1 };
    for b in 0..=upper {
        let used_after = if b == used { used + 1 } else { used };
        if k - used_after > remaining - 1 {
            continue;
        }
        table.push(b);
        grow(n, k, used_after, table, out);
        table.pop();
    }
}

/// The coordinatewise map `(a_1, …, a_m) ↦ (f(a_1), …, f(a_m))` between lex powers.
pub fn lex_product_map(f: &ChainMap, power: usize) -> Result<ChainMap> {
    if !f.is_rigid_surjection() {
        return Err(Error::NotRigid);
    }
    let n = f.n.pow(power as u32);
    let k = f.k.pow(power as u32);
    let table = (0..n)
        .map(|i| {
            let t: Vec<usize> = index_tuple(i, f.n, power).into_iter().map(|a| f.table[a]).collect();
            tuple_index(&t, f.k)
        })
        .collect();
    Ok(ChainMap { n, k, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(n: usize, k: usize, t: &[usize]) -> ChainMap {
        ChainMap::new(n, k, t.to_vec()).unwrap()
    }

    #[test]
    fn rigid_examples() {
        assert!(ChainMap::identity(3).is_rigid_surjection());
        assert!(map(3, 2, &[0, 1, 0]).is_rigid_surjection());
        assert!(!map(3, 2, &[1, 0, 0]).is_rigid_surjection());
        assert!(!map(3, 3, &[0, 1, 1]).is_rigid_surjection());
    }

    #[test]
    fn initial_segments() {
        assert!(ChainMap::identity(4).initial_segment_criterion().unwrap());
        assert!(map(3, 2, &[0, 1, 0]).initial_segment_criterion().unwrap());
        assert!(!map(3, 2, &[1, 0, 0]).initial_segment_criterion().unwrap());
        assert_eq!(
            map(3, 3, &[0, 1, 1]).initial_segment_criterion(),
            Err(Error::NotSurjective)
        );
    }

    #[test]
    fn dual_embeddings() {
        assert_eq!(map(3, 2, &[0, 1, 0]).dual_embedding().unwrap().table, vec![0, 1]);
        assert_eq!(ChainMap::identity(3).dual_embedding().unwrap(), ChainMap::identity(3));
        assert_eq!(map(4, 2, &[0, 0, 1, 0]).dual_embedding().unwrap().table, vec![0, 2]);
        assert!(map(2, 3, &[0, 1]).dual_embedding().is_err());
    }

    #[test]
    fn induced_orders() {
        assert_eq!(induced_order(&['q', 'p', 'q']), vec!['q', 'p']);
        assert_eq!(induced_order(&["b", "c", "a", "a"]), vec!["b", "c", "a"]);
        assert_eq!(induced_order(&[2, 0, 1]), vec![2, 0, 1]);
    }

    #[test]
    fn enumerations() {
        let tables: Vec<_> = enumerate_rigid_surjections(3, 2).into_iter().map(|f| f.table).collect();
        assert_eq!(tables, vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
        assert_eq!(enumerate_rigid_surjections(4, 4), vec![ChainMap::identity(4)]);
        assert_eq!(enumerate_rigid_surjections(4, 2).len(), 7);
        assert!(enumerate_rigid_surjections(2, 3).is_empty());
    }

    #[test]
    fn composition() {
        let f = map(3, 2, &[0, 1, 0]);
        assert_eq!(compose(&ChainMap::identity(2), &f).unwrap(), f);
        let h = map(4, 3, &[0, 1, 1, 2]);
        assert_eq!(compose(&f, &h).unwrap().table, vec![0, 1, 1, 0]);
        assert!(compose(&h, &f).is_err());
    }

    #[test]
    fn lex_products() {
        let f = map(3, 2, &[0, 1, 0]);
        assert_eq!(lex_product_map(&f, 1).unwrap(), f);
        let g = lex_product_map(&f, 2).unwrap();
        assert_eq!((g.n, g.k), (9, 4));
        // (1,1) has index 3 in the codomain; its minimal preimage is (1,1) = index 4
        assert_eq!(g.dual_embedding().unwrap().table[3], 4);
        assert_eq!(lex_product_map(&ChainMap::identity(3), 2).unwrap(), ChainMap::identity(9));
        assert_eq!(lex_product_map(&map(3, 2, &[1, 0, 0]), 2), Err(Error::NotRigid));
    }

    #[test]
    fn sums_and_powers() {
        assert_eq!(ordinal_sum(&[Chain::new(2), Chain::new(3)]).size(), 5);
        assert_eq!(ordinal_sum(&[]).size(), 0);
        assert_eq!(lex_power(&Chain::new(2), 3).size(), 8);
        assert_eq!(index_tuple(5, 2, 3), vec![1, 0, 1]);
        assert_eq!(tuple_index(&[1, 0, 1], 2), 5);
    }

    #[test]
    fn labeled_chains() {
        let c = Chain::labeled(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(c.position("b"), Some(1));
        assert!(Chain::labeled(vec!["a".into(), "a".into()]).is_err());
        let s = ordinal_sum(&[c.clone(), Chain::labeled(vec!["z".into()]).unwrap()]);
        assert_eq!(s.labels().unwrap().len(), 3);
        assert_eq!(c.canonical(), Chain::new(2));
    }
}
