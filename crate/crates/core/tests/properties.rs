use proptest::prelude::*;

use dualram_core::algebras::{FiniteAlgebra, Variety};
use dualram_core::chains::{compose, enumerate_rigid_surjections, induced_order, ChainMap};
use dualram_core::ordered::{hat_t_v, ordered_free, rigid_epi_set, OrderedAlgebra};
use dualram_core::ramsey::validate::{validate_certificate, Validation};
use dualram_core::ramsey::{check_arrow, check_pa_instance, Category, Direction, Object, SearchConfig, Verdict, VerdictKind};
use dualram_core::terms::{enumerate_neat, shape_of, substitute, Signature, Term};

/// Restricted growth strings built directly: position `i` may take any
/// value up to one more than the largest value so far.
fn rgs(choices: Vec<u8>) -> ChainMap {
    let mut table = Vec::with_capacity(choices.len());
    let mut top = 0usize;
    for (i, c) in choices.into_iter().enumerate() {
        let v = if i == 0 { 0 } else { c as usize % (top + 2) };
        top = top.max(v);
        table.push(v);
    }
    let k = table.iter().max().map_or(0, |&m| m + 1);
    ChainMap::new(table.len(), k, table).unwrap()
}

fn rigid_map(max_len: usize) -> impl Strategy<Value = ChainMap> {
    prop::collection::vec(any::<u8>(), 1..=max_len).prop_map(rgs)
}

fn surjection(max_len: usize) -> impl Strategy<Value = ChainMap> {
    (1..=max_len)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, k)| prop::collection::vec(0..k, n).prop_map(move |t| (k, t)))
        .prop_filter_map("not onto", |(k, table)| {
            let f = ChainMap::new(table.len(), k, table).ok()?;
            f.is_surjective().then_some(f)
        })
}

fn oracle_rigid(f: &ChainMap) -> bool {
    let mut minima = vec![usize::MAX; f.k];
    for (a, &b) in f.table.iter().enumerate() {
        minima[b] = minima[b].min(a);
    }
    minima.iter().all(|&m| m != usize::MAX) && minima.windows(2).all(|w| w[0] < w[1])
}

fn semilattice(n: usize) -> FiniteAlgebra {
    let sig = Signature::from_pairs(&[("meet", 2)]).unwrap();
    FiniteAlgebra::from_fn(sig, n, |_, x| x[0].min(x[1])).unwrap()
}

proptest! {
    #[test]
    fn rigidity_criteria_agree(f in surjection(7)) {
        let rigid = f.is_rigid_surjection();
        prop_assert_eq!(rigid, oracle_rigid(&f));
        prop_assert_eq!(rigid, f.initial_segment_criterion().unwrap());
        prop_assert_eq!(rigid, f.dual_embedding().unwrap().is_strictly_increasing());
    }

    #[test]
    fn induced_order_makes_the_map_rigid(f in surjection(7)) {
        let order = induced_order(&f.table);
        let relabelled: Vec<usize> = f.table.iter().map(|b| order.iter().position(|o| o == b).unwrap()).collect();
        prop_assert!(ChainMap::new(f.n, f.k, relabelled).unwrap().is_rigid_surjection());
    }

    #[test]
    fn composition_and_cancellation(f in rigid_map(7), g_choices in prop::collection::vec(any::<u8>(), 0..7)) {
        let mut choices = g_choices;
        choices.resize(f.k, 0);
        let g = rgs(choices);
        let gf = compose(&g, &f).unwrap();
        prop_assert!(gf.is_rigid_surjection());
        // a non-rigid g stays non-rigid after precomposition with a rigid f
        let mut swapped = g.table.clone();
        if g.k >= 2 {
            for v in swapped.iter_mut() {
                *v = match *v { 0 => 1, 1 => 0, x => x };
            }
            let bad = ChainMap::new(g.n, g.k, swapped).unwrap();
            prop_assert!(!bad.is_rigid_surjection());
            prop_assert!(!compose(&bad, &f).unwrap().is_rigid_surjection());
        }
    }

    #[test]
    fn substitution_preserves_shape(f in rigid_map(4), len in 1usize..=9) {
        let sig = Signature::from_pairs(&[("c", 0), ("g", 2)]).unwrap();
        let terms = enumerate_neat(&sig, f.n, len);
        for w in terms.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for t in &terms {
            let s = substitute(&f, t).unwrap();
            prop_assert_eq!(shape_of(&s), shape_of(t));
        }
    }

    #[test]
    fn neat_order_is_by_shape_length_first(a in rigid_map(3), len in 1usize..=8) {
        let sig = Signature::from_pairs(&[("u", 1), ("m", 2)]).unwrap();
        let terms: Vec<Term> = enumerate_neat(&sig, a.n, len);
        for w in terms.windows(2) {
            prop_assert!(w[0].shape_length() <= w[1].shape_length());
        }
    }

    #[test]
    fn substitution_functor_on_free_semilattices(f in rigid_map(3), g_choices in prop::collection::vec(any::<u8>(), 0..3)) {
        let v = Variety::new(vec![semilattice(2)]).unwrap();
        let mut choices = g_choices;
        choices.resize(f.k, 0);
        let g = rgs(choices);
        let (_, _, tf) = hat_t_v(&v, &f).unwrap();
        let (_, _, tg) = hat_t_v(&v, &g).unwrap();
        let (_, _, tgf) = hat_t_v(&v, &compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(tg.after(&tf), tgf);
        let (_, _, id) = hat_t_v(&v, &ChainMap::identity(f.n)).unwrap();
        let identity: Vec<usize> = (0..id.table.len()).collect();
        prop_assert_eq!(id.table, identity);
    }

    #[test]
    fn pre_adjunction_law(u in rigid_map(4), pick in any::<prop::sample::Index>()) {
        let b = OrderedAlgebra::natural(semilattice(u.k));
        let targets: Vec<OrderedAlgebra> = (1..=u.k).map(|k| OrderedAlgebra::natural(semilattice(k))).collect();
        let a = &targets[pick.index(targets.len())];
        for f in rigid_epi_set(&b, a).unwrap() {
            prop_assert!(check_pa_instance(&u, &b, a, &f, 8).unwrap());
        }
    }

    #[test]
    fn chain_certificates_revalidate(c in 1usize..=5, b in 1usize..=4, a in 1usize..=3, k in 1usize..=3, t in 1usize..=2) {
        prop_assume!(stirling(c, a) <= SearchConfig::default().exhaustive_limit);
        let (co, bo, ao) = (Object::Chain(c), Object::Chain(b), Object::Chain(a));
        let cert = check_arrow(Category::ChainsRs, Direction::Dual, &co, &bo, &ao, k, t, &SearchConfig::default()).unwrap();
        let decided = !matches!(cert.verdict, Verdict::Unknown { .. });
        prop_assert!(decided);
        prop_assert_eq!(validate_certificate((&co, &bo, &ao), &cert), Validation::Confirmed);
    }

    #[test]
    fn exhaustive_and_randomized_agree_on_refutations(c in 2usize..=5, b in 2usize..=3, seed in any::<u64>()) {
        let (co, bo, ao) = (Object::Chain(c), Object::Chain(b), Object::Chain(2));
        let exhaustive = check_arrow(Category::ChainsRs, Direction::Dual, &co, &bo, &ao, 2, 1, &SearchConfig::default()).unwrap();
        let randomized_only = SearchConfig { exhaustive_limit: 0, seed, ..SearchConfig::default() };
        let randomized = check_arrow(Category::ChainsRs, Direction::Dual, &co, &bo, &ao, 2, 1, &randomized_only).unwrap();
        let exhaustive_fails = matches!(exhaustive.verdict, Verdict::Fails { .. });
        prop_assert!(exhaustive.verdict.kind() != VerdictKind::Unknown);
        match randomized.verdict {
            // a random refutation must be genuine, and exhaustive search must agree
            Verdict::Fails { .. } => {
                prop_assert!(exhaustive_fails);
                prop_assert_eq!(validate_certificate((&co, &bo, &ao), &randomized), Validation::Confirmed);
            }
            Verdict::Holds { .. } => prop_assert!(exhaustive.verdict.holds()),
            Verdict::Unknown { .. } => {}
        }
    }
}

fn stirling(n: usize, k: usize) -> usize {
    match (n, k) {
        (0, 0) => 1,
        (_, 0) | (0, _) => 0,
        _ => k * stirling(n - 1, k) + stirling(n - 1, k - 1),
    }
}

#[test]
fn rigid_surjections_are_restricted_growth_strings() {
    for n in 1..=7 {
        for k in 1..=n {
            let maps = enumerate_rigid_surjections(n, k);
            assert_eq!(maps.len(), stirling(n, k), "n={n}, k={k}");
            assert!(maps.windows(2).all(|w| w[0].table < w[1].table));
            assert!(maps.iter().all(oracle_rigid));
        }
    }
}

#[test]
fn ordered_free_semilattice_on_two_generators() {
    let v = Variety::new(vec![semilattice(2)]).unwrap();
    let f = ordered_free(&v, 2).unwrap();
    let meet = Term::app(0, vec![Term::Var(0), Term::Var(1)]);
    assert_eq!(f.min_terms, vec![Term::Var(0), Term::Var(1), meet]);
    assert_eq!(f.ordered.order(), &[0, 1, 2]);
}
