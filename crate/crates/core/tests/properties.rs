use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sepprofile::cuts::{
    cut_brute, cut_exact, cut_heuristic, is_cut_set, treewidth_upper, BoundKind, CutOutcome,
};
use sepprofile::graphs::{
    annulus, bfs_distances, connected_components, neighborhood, random_connected_graph, Graph,
    VertexSet, UNREACHABLE,
};
use sepprofile::groups::{catalog_group, cayley_ball, growth_table, DehnGroup, ElementKey};
use sepprofile::hyperbolicity::{
    bigon_fatness_scan, cycle_distortion, find_distorted_cycle, scan_ball, verify_witness,
    WitnessOptions, WitnessSearch,
};
use sepprofile::profiles::{sep_profile, ProfileOptions};
use sepprofile::groups::Source;

fn connected_graph() -> impl Strategy<Value = Graph> {
    (1usize..=12, 0.0f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| {
        random_connected_graph(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

/// Possibly disconnected graphs, including isolated vertices.
fn any_graph() -> impl Strategy<Value = Graph> {
    (1usize..=12).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..2 * n).prop_map(move |pairs| {
            let edges = pairs.into_iter().filter(|(u, v)| u != v);
            let mut seen = std::collections::BTreeSet::new();
            let edges: Vec<_> = edges.filter(|&(u, v)| seen.insert((u.min(v), u.max(v)))).collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|mask| VertexSet::from_mask(&mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_sandwich(g in any_graph(), seed in any::<u64>()) {
        let brute = cut_brute(&g).unwrap();
        let exact = cut_exact(&g, 30_000).unwrap();
        let heuristic = cut_heuristic(&g, seed);
        prop_assert!(exact.is_exact());
        prop_assert_eq!(exact.upper_value(), brute.value);
        prop_assert!(brute.value <= heuristic.value);
        if let CutOutcome::Bracketed { lower, .. } = &exact {
            prop_assert!(lower.value <= brute.value);
        }
    }

    #[test]
    fn emitted_separators_are_cut_sets(g in any_graph(), seed in any::<u64>()) {
        for cert in [cut_brute(&g).unwrap(), cut_exact(&g, 30_000).unwrap().upper().clone(), cut_heuristic(&g, seed)] {
            prop_assert!(matches!(cert.bound_kind, BoundKind::Exact | BoundKind::Upper));
            let s = cert.separator.clone().unwrap();
            prop_assert!(is_cut_set(&g, &s));
            prop_assert!(cert.verify(&g));
        }
    }

    #[test]
    fn supersets_of_cut_sets_are_cut_sets(g in connected_graph(), extra in subset(12)) {
        let s = cut_brute(&g).unwrap().separator.unwrap();
        let extra: Vec<usize> = extra.iter().filter(|&v| v < g.vertex_count()).collect();
        let bigger = VertexSet::new(s.iter().chain(extra).collect());
        prop_assert!(is_cut_set(&g, &bigger));
    }

    #[test]
    fn cut_within_treewidth_bound(g in any_graph()) {
        prop_assert!(cut_brute(&g).unwrap().value <= treewidth_upper(&g) + 1);
    }

    #[test]
    fn heuristic_is_deterministic(g in connected_graph(), seed in any::<u64>()) {
        prop_assert_eq!(cut_heuristic(&g, seed), cut_heuristic(&g, seed));
        let run = |threads| {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
                .install(|| {
                    let mut out = cut_exact(&g, 30_000).unwrap();
                    if let CutOutcome::Exact(c) = &mut out { c.stats.elapsed_ms = 0; }
                    out
                })
        };
        prop_assert_eq!(run(1), run(3));
    }

    #[test]
    fn neighbourhoods_and_annuli(g in any_graph(), picks in subset(12), r in 0u32..4, extra in 0u32..3) {
        let set = VertexSet::new(picks.iter().filter(|&v| v < g.vertex_count()).collect());
        let open = neighborhood(&g, &set, r, false).unwrap();
        let closed = neighborhood(&g, &set, r, true).unwrap();
        prop_assert!(closed.is_superset(&open));
        let ring = annulus(&g, &set, r, r + extra).unwrap();
        prop_assert!(ring.intersection(&open).is_empty());
    }

    #[test]
    fn distances_satisfy_triangle_inequality(g in connected_graph(), a in 0usize..12, b in 0usize..12, c in 0usize..12) {
        let n = g.vertex_count();
        let (a, b, c) = (a % n, b % n, c % n);
        let da = bfs_distances(&g, &VertexSet::singleton(a)).unwrap();
        let db = bfs_distances(&g, &VertexSet::singleton(b)).unwrap();
        prop_assert!(da[c] <= da[b] + db[c]);
    }

    #[test]
    fn component_sizes_add_up(g in any_graph(), removed in subset(12)) {
        let removed = VertexSet::new(removed.iter().filter(|&v| v < g.vertex_count()).collect());
        let total: usize = connected_components(&g, &removed).iter().map(VertexSet::len).sum();
        prop_assert_eq!(total, g.vertex_count() - removed.len());
    }
}

const MODELS: &[&str] = &["zd:1", "zd:2", "zd:3", "free:2", "free:3", "heis", "lamplighter", "bs:1:2", "surface:2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_cancel(model in 0..MODELS.len(), word in proptest::collection::vec(0usize..64, 0..=6), last in 0usize..64) {
        let m = catalog_group(MODELS[model]).unwrap();
        let alphabet = m.alphabet();
        let word: Vec<usize> = word.into_iter().map(|s| s % alphabet.len()).collect();
        let key = m.apply_word(&m.identity(), &word);
        let g = last % alphabet.len();
        let back = m.multiply(&m.multiply(&key, g), alphabet.inverse(g));
        prop_assert!(m.same_element(&back, &key));
    }

    #[test]
    fn dehn_normalize_is_idempotent(word in proptest::collection::vec(0usize..8, 0..24)) {
        let surface = DehnGroup::genus_two();
        let once = surface.normalize(&word);
        prop_assert_eq!(surface.normalize(&once), once.clone());
    }

    #[test]
    fn profiles_are_monotone(model in 0usize..3, n_max in 5usize..150, seed in any::<u64>()) {
        let spec = ["zd:2", "heis", "free:2"][model];
        let opts = ProfileOptions {
            budget_ms: 200,
            seed,
            strategies: sepprofile::profiles::Strategy::ALL.to_vec(),
            ..ProfileOptions::new(n_max)
        };
        let p = sep_profile(&Source::parse(spec).unwrap(), &opts).unwrap();
        for w in p.points.windows(2) {
            prop_assert!(w[0].n < w[1].n);
            prop_assert!(w[0].best_cut_lower <= w[1].best_cut_lower);
        }
        for point in &p.points {
            prop_assert!(point.best_cut_lower <= point.best_cut_upper);
        }
        if spec == "free:2" {
            for c in p.candidates.iter().filter(|c| c.candidate.radius.is_some() && c.candidate.thickness.is_none()) {
                prop_assert_eq!(c.outcome.upper_value(), 1);
                prop_assert!(c.outcome.is_exact());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn witnesses_verify(model in 0usize..3, target in 3usize..24) {
        let spec = ["zd:2", "heis", "lamplighter"][model];
        let m = catalog_group(spec).unwrap();
        let opts = WitnessOptions::default();
        if let WitnessSearch::Found(w) = find_distorted_cycle(m.as_ref(), target, &opts).unwrap() {
            prop_assert!(w.length >= target);
            prop_assert!(w.distortion <= opts.k);
            prop_assert_eq!(verify_witness(m.as_ref(), &w).unwrap(), w.distortion);
            let ball = cayley_ball(m.as_ref(), w.ambient_radius_used).unwrap();
            prop_assert_eq!(cycle_distortion(&ball.graph, &w.cycle, None).unwrap(), w.distortion);
        }
    }

    #[test]
    fn free_groups_have_no_witnesses(rank in 2usize..=3, target in 3usize..40) {
        let m = catalog_group(&format!("free:{rank}")).unwrap();
        let out = find_distorted_cycle(m.as_ref(), target, &WitnessOptions::default()).unwrap();
        prop_assert_eq!(out.summary(), "none (exhausted)");
    }
}

#[test]
fn free_bigons_are_thin() {
    for spec in ["free:2", "free:3"] {
        let m = catalog_group(spec).unwrap();
        for radius in 0..=3 {
            assert!(bigon_fatness_scan(m.as_ref(), radius, None)
                .unwrap()
                .iter()
                .all(|r| r.max_layer_diameter == 0));
        }
    }
}

#[test]
fn lattice_fatness_grows_with_distance() {
    let z2 = catalog_group("zd:2").unwrap();
    let ball = cayley_ball(z2.as_ref(), 10).unwrap();
    let reports = scan_ball(&ball, 5, usize::MAX).unwrap();
    let mut by_distance = vec![0u32; 11];
    for r in &reports {
        let d = r.geodesic_length as usize;
        by_distance[d] = by_distance[d].max(r.max_layer_diameter);
    }
    for d in 4..=10 {
        assert!(by_distance[d] >= by_distance[d - 1], "{by_distance:?}");
        if d % 2 == 0 {
            assert!(by_distance[d] as usize >= d / 2, "{by_distance:?}");
        }
    }
}

#[test]
fn ball_counts_match_growth_table() {
    for spec in MODELS {
        let m = catalog_group(spec).unwrap();
        let table = growth_table(m.as_ref(), 4).unwrap();
        for r in 0..=4u32 {
            assert_eq!(cayley_ball(m.as_ref(), r).unwrap().vertex_count(), table[r as usize], "{spec} r={r}");
        }
    }
}

#[test]
fn lattice_balls_are_l1_balls() {
    for d in 1..=3usize {
        let m = catalog_group(&format!("zd:{d}")).unwrap();
        for r in 0..=4i64 {
            let ball = cayley_ball(m.as_ref(), r as u32).unwrap();
            let mut points: Vec<Vec<i64>> = vec![vec![]];
            for _ in 0..d {
                points = points
                    .into_iter()
                    .flat_map(|p| (-r..=r).map(move |x| [p.clone(), vec![x]].concat()))
                    .collect();
            }
            points.retain(|p| p.iter().map(|x| x.abs()).sum::<i64>() <= r);
            assert_eq!(ball.vertex_count(), points.len());
            for p in &points {
                let v = ball.vertex_of(&ElementKey(p.clone())).expect("every lattice point is a vertex");
                assert_eq!(ball.dist[v] as i64, p.iter().map(|x| x.abs()).sum::<i64>());
            }
            let l1 = |a: &ElementKey, b: &ElementKey| a.0.iter().zip(&b.0).map(|(x, y)| (x - y).abs()).sum::<i64>();
            for u in 0..ball.vertex_count() {
                for w in u + 1..ball.vertex_count() {
                    assert_eq!(ball.graph.has_edge(u, w), l1(&ball.keys[u], &ball.keys[w]) == 1);
                }
            }
        }
    }
}

#[test]
fn free_balls_are_trees() {
    for spec in ["free:1", "free:2", "free:3"] {
        let m = catalog_group(spec).unwrap();
        for r in 0..=5 {
            let ball = cayley_ball(m.as_ref(), r).unwrap();
            assert_eq!(ball.graph.edge_count() + 1, ball.vertex_count());
            assert!(ball.graph.is_connected());
            assert!(ball.dist.iter().all(|&d| d != UNREACHABLE));
        }
    }
}
