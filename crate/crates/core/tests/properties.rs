//! Cross-module invariants checked on random instances.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use satedge_core::constructions::{
    base_graph, blow_up, h0, h1, h2, turan_graph, turan_number, BlowupSpec,
};
use satedge_core::formulas::{eval_poly, margin_f, margin_f_coefficients, margin_g, margin_g_coefficients};
use satedge_core::graph::io::{graph6_decode, graph6_encode};
use satedge_core::graph::{contains_clique, enumerate_cliques};
use satedge_core::packing::{
    admissible_switches, analyze, certify_remainder_exhaustive, check_switch_inequality, ell_split, max_packing,
    refine_packing, switch, PackingOptions,
};
use satedge_core::saturation::{count_saturating, count_saturating_blowup, is_saturating};
use satedge_core::verify::{random_clique_free, EXHAUSTIVE_LIMIT};
use satedge_core::{Graph, VertexSet};

fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn clique_free(n: usize, p: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_clique_free(n, p, 1.0, &mut rng)
}

/// The K_p's of `g` that contain both `u` and `v`, by brute force.
fn cliques_through(g: &Graph, p: usize, u: usize, v: usize) -> Vec<Vec<usize>> {
    enumerate_cliques(g, p).filter(|c| c.contains(&u) && c.contains(&v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_loop_free(n in 0usize..40, d in 0.0f64..1.0, seed in any::<u64>()) {
        let g = random_graph(n, d, seed);
        let h = graph6_decode(&graph6_encode(&g)).unwrap();
        for g in [&g, &h] {
            for u in 0..n {
                prop_assert!(!g.has_edge(u, u));
                for v in 0..n {
                    prop_assert_eq!(g.has_edge(u, v), g.has_edge(v, u));
                }
            }
        }
    }

    #[test]
    fn clique_existence_agrees_with_enumeration(n in 1usize..14, d in 0.2f64..0.9, p in 2usize..6, seed in any::<u64>()) {
        let g = random_graph(n, d, seed);
        let found = contains_clique(&g, p);
        prop_assert_eq!(found.is_some(), enumerate_cliques(&g, p).next().is_some());
        if let Some(c) = found {
            prop_assert!(g.is_clique(&c) && c.len() == p);
        }
    }

    #[test]
    fn blow_up_edge_count_is_weighted_base_edges(sizes in prop::collection::vec(0usize..9, 5)) {
        let base = base_graph(3).unwrap();
        let want: usize = base.edges().iter().map(|&(a, b)| sizes[a] * sizes[b]).sum();
        let spec = BlowupSpec::new(base, sizes).unwrap();
        let b = blow_up(&spec).unwrap();
        prop_assert_eq!(b.graph.size(), want);
        prop_assert_eq!(spec.size(), want);
    }

    #[test]
    fn blowup_count_matches_brute_force(sizes in prop::collection::vec(0usize..12, 7)) {
        let spec = BlowupSpec::new(base_graph(4).unwrap(), sizes).unwrap();
        let g = blow_up(&spec).unwrap().graph;
        prop_assert_eq!(count_saturating_blowup(&spec, 4).unwrap(), count_saturating(&g, 5).unwrap().total);
    }

    #[test]
    fn saturation_is_symmetric(n in 2usize..16, p in 3usize..6, seed in any::<u64>()) {
        let g = clique_free(n, p, seed);
        for (u, v) in g.non_edges() {
            prop_assert_eq!(is_saturating(&g, p, u, v).unwrap(), is_saturating(&g, p, v, u).unwrap());
        }
    }

    /// A saturating pair of G − e whose witness K_{p+1} avoids e stays
    /// saturating in G.
    #[test]
    fn witnesses_avoiding_the_removed_edge_survive(n in 4usize..13, p in 3usize..5, pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let g = clique_free(n, p + 1, seed);
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let (a, b) = edges[pick.index(edges.len())];
        let h = g.without_edge(a, b);
        for (u, v) in h.non_edges() {
            if (u, v) == (a, b) {
                continue;
            }
            let plus = h.with_edge(u, v).unwrap();
            let avoids = cliques_through(&plus, p + 1, u, v)
                .iter()
                .any(|c| !(c.contains(&a) && c.contains(&b)));
            if avoids {
                prop_assert!(is_saturating(&g, p + 1, u, v).unwrap());
            }
        }
    }

    #[test]
    fn packing_identities_on_random_hosts(n in 6usize..41, p in 3usize..6, keep in 0.4f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_clique_free(n, p + 1, keep, &mut rng);
        let pk = refine_packing(&g, &max_packing(&g, p).unwrap()).unwrap();
        let total = count_saturating(&g, p + 1).unwrap().total;
        let (l1, l2) = ell_split(&g, &pk).unwrap();
        prop_assert_eq!(l1 + l2, total);
        for i in 0..pk.len() {
            let a = analyze(&g, &pk, i).unwrap();
            prop_assert!(a.all_hold(), "{:?}", a);
        }
    }

    #[test]
    fn refinement_keeps_size_and_never_loses_remainder_edges(n in 4usize..20, seed in any::<u64>()) {
        let g = clique_free(n, 4, seed);
        let pk = max_packing(&g, 3).unwrap();
        let refined = refine_packing(&g, &pk).unwrap();
        prop_assert_eq!(refined.len(), pk.len());
        prop_assert!(g.edges_within(&refined.remainder) >= g.edges_within(&pk.remainder));
    }

    #[test]
    fn switch_inequality_under_exhaustive_certification(n in 4usize..=EXHAUSTIVE_LIMIT, seed in any::<u64>()) {
        let g = clique_free(n, 4, seed);
        let pk = certify_remainder_exhaustive(&g, 3, PackingOptions::default()).unwrap();
        for i in 0..pk.len() {
            for sw in admissible_switches(&g, &pk, i).unwrap() {
                let c = check_switch_inequality(&g, &pk, &sw).unwrap();
                prop_assert!(c.holds, "{:?} {:?}", sw, c);
                // oracle: recount both sides from the switched packing
                let after = switch(&g, &pk, &sw).unwrap();
                let r_new = VertexSet::from_vertices(n, after.cliques[i].iter().copied());
                let r_old = VertexSet::from_vertices(n, pk.cliques[i].iter().copied());
                prop_assert_eq!(c.lhs, g.edges_between(&r_new, &after.remainder).unwrap());
                prop_assert_eq!(c.rhs, g.edges_between(&r_old, &pk.remainder).unwrap());
            }
        }
    }

    #[test]
    fn margin_polynomials_expand_correctly(p in -10_000i64..=10_000) {
        prop_assert_eq!(margin_f(p), eval_poly(&margin_f_coefficients(), p));
        prop_assert_eq!(margin_g(p), eval_poly(&margin_g_coefficients(), p));
    }
}

/// `T_{p−1}(n)` with one edge added inside a part and one other edge removed:
/// `K_{p+1}`-free with exactly `ex(n, K_p)` edges.
fn perturbed_turan(n: usize, p: usize, seed: u64) -> Graph {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = turan_graph(n, p - 1).unwrap();
    let inner = *t.non_edges().choose(&mut rng).unwrap();
    let g = t.with_edge(inner.0, inner.1).unwrap();
    let edges: Vec<_> = g.edges().into_iter().filter(|&e| e != inner).collect();
    let (u, v) = *edges.choose(&mut rng).unwrap();
    g.without_edge(u, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ell1_bound_holds_at_turan_edge_count(n in 7usize..30, p in 3usize..5, seed in any::<u64>()) {
        use satedge_core::constructions::delta;
        use satedge_core::formulas::{ell1_lower_bound, int};
        let g = perturbed_turan(n, p, seed);
        prop_assert_eq!(g.size() as u64, turan_number(n as u64, p as u64));
        prop_assert!(contains_clique(&g, p + 1).is_none());
        let pk = refine_packing(&g, &max_packing(&g, p).unwrap()).unwrap();
        prop_assume!(!pk.is_empty());
        let (l1, _) = ell_split(&g, &pk).unwrap();
        let bound = ell1_lower_bound(n as u64, p as u64, &pk.density(), &delta(n as u64, p as u64)).unwrap();
        prop_assert!(int(l1) >= bound, "l1 = {} bound = {}", l1, bound);
    }
}

#[test]
fn h1_with_no_shift_is_h0() {
    for p in 3..=5 {
        for x in 1..=2 {
            assert_eq!(h1(p, x, 0).unwrap(), h0(p, x).unwrap());
        }
    }
}

#[test]
fn blowup_count_matches_on_constructions() {
    for p in 3..=4u64 {
        for y in 0..=3 {
            for b in [h1(p, 1, y), h2(p, 1, y)].into_iter().flatten() {
                if b.graph.order() > 200 {
                    continue;
                }
                assert_eq!(
                    count_saturating_blowup(&b.spec, p).unwrap(),
                    count_saturating(&b.graph, p as usize + 1).unwrap().total
                );
            }
        }
    }
}
