//! Property tests for the model, STN, and io layers.

use proptest::prelude::*;

use tempnet::gen::{self, HytnParams, RdtnParams};
use tempnet::io;
use tempnet::model::{canonicalize_t2, satisfies, Interval, Network, Schedule, Verdict, Weight};
use tempnet::stn::{self, Dist, StnArc, StnGraph};

fn interval_strategy() -> impl Strategy<Value = Interval> {
    (-10i64..=10, 0i64..=6).prop_map(|(lo, len)| Interval::new(lo, lo + len).unwrap())
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(raw in prop::collection::vec(interval_strategy(), 1..8)) {
        let once = canonicalize_t2(&raw).unwrap();
        let twice = canonicalize_t2(&once).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn canonicalize_preserves_point_set(raw in prop::collection::vec(interval_strategy(), 1..8)) {
        let canon = canonicalize_t2(&raw).unwrap();
        for p in -20..=20 {
            let in_raw = raw.iter().any(|iv| iv.contains(p));
            let in_canon = canon.iter().any(|iv| iv.contains(p));
            prop_assert_eq!(in_raw, in_canon, "point {}", p);
        }
        // Nominal ordering: strictly ascending endpoints, disjoint.
        for w in canon.windows(2) {
            prop_assert!(w[0].lo < w[1].lo && w[0].hi < w[1].hi && w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn satisfies_ignores_unmentioned_time_points(seed in any::<u64>(), bump in -20i64..=20) {
        // One spare time-point beyond anything the constraints mention.
        let p = RdtnParams { n: 4, ..RdtnParams::default() };
        let net = gen::random_rdtn(seed, &p);
        let mentioned: std::collections::BTreeSet<usize> = net
            .c1()
            .iter()
            .flat_map(|c| [c.x.0, c.y.0])
            .chain(net.c2().iter().map(|c| c.x.0))
            .chain(net.c3().iter().flat_map(|c| [c.first.0 .0, c.second.0 .0]))
            .collect();
        let net = tempnet::Rdtn::new(
            5,
            net.c1().to_vec(),
            net.c2().to_vec(),
            net.c3().to_vec(),
        )
        .unwrap();
        let free = (0..5).find(|v| !mentioned.contains(v));
        prop_assume!(free.is_some());
        let free = free.unwrap();
        let base = Schedule::zero(5);
        let mut bumped = base.clone();
        bumped.set(free, bump);
        prop_assert_eq!(satisfies(&base, &net), satisfies(&bumped, &net));
    }

    #[test]
    fn instance_round_trip_rdtn(seed in any::<u64>()) {
        let net = gen::random_rdtn(seed, &RdtnParams::default());
        let doc = io::InstanceDocument::from_network(Network::Rdtn(net));
        let text = io::emit_instance(&doc);
        prop_assert_eq!(io::parse_instance(&text).unwrap(), doc);
    }

    #[test]
    fn instance_round_trip_hytn(seed in any::<u64>(), blend in any::<bool>(), tail in any::<bool>()) {
        let p = HytnParams {
            t2_count: if blend { 2 } else { 0 },
            orientation: if tail {
                tempnet::hytn::Orientation::MultiTail
            } else {
                tempnet::hytn::Orientation::MultiHead
            },
            ..HytnParams::default()
        };
        let net = gen::random_hytn(seed, &p);
        let doc = io::InstanceDocument::from_network(Network::Hytn(net));
        let text = io::emit_instance(&doc);
        prop_assert_eq!(io::parse_instance(&text).unwrap(), doc);
    }

    #[test]
    fn parse_rejects_mutated_indices(seed in any::<u64>(), line_pick in any::<prop::sample::Index>()) {
        // Bumping any single node index beyond `tp` must fail parsing.
        let net = gen::random_rdtn(seed, &RdtnParams::default());
        let n = net.time_point_count();
        let doc = io::InstanceDocument::from_network(Network::Rdtn(net));
        let text = io::emit_instance(&doc);
        let lines: Vec<&str> = text.lines().collect();
        let constraint_lines: Vec<usize> = (0..lines.len())
            .filter(|&i| {
                lines[i].starts_with("t1") || lines[i].starts_with("t2") || lines[i].starts_with("t3")
            })
            .collect();
        prop_assume!(!constraint_lines.is_empty());
        let target = constraint_lines[line_pick.index(constraint_lines.len())];
        let mut mutated: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        let mut toks: Vec<String> = lines[target].split_whitespace().map(str::to_string).collect();
        toks[1] = n.to_string(); // first field is a node index in all three records
        mutated[target] = toks.join(" ");
        let mutated = mutated.join("\n");
        prop_assert!(io::parse_instance(&mutated).is_err());
    }
}

/// Bellman-Ford single-target distances, as an independent oracle for
/// Dijkstra.
fn bf_to_target(g: &StnGraph, target: usize) -> Vec<Dist> {
    let mut dist = vec![None::<Weight>; g.n];
    dist[target] = Some(0);
    for _ in 0..g.n {
        let mut changed = false;
        for a in &g.arcs {
            if let Some(dh) = dist[a.head] {
                let cand = dh + a.weight;
                if dist[a.tail].is_none_or(|d| cand < d) {
                    dist[a.tail] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist.into_iter()
        .map(|d| d.map_or(Dist::Infinite, Dist::Finite))
        .collect()
}

fn arcs_strategy(n: usize) -> impl Strategy<Value = Vec<StnArc>> {
    prop::collection::vec(
        (0..n, 0..n, -8i64..=8).prop_map(|(t, h, w)| StnArc::new(t, h, w)),
        0..12,
    )
    .prop_map(|arcs| {
        arcs.into_iter()
            .filter(|a| a.tail != a.head || a.weight >= 0)
            .collect()
    })
}

proptest! {
    #[test]
    fn dijkstra_matches_bellman_ford(arcs in arcs_strategy(5), target in 0usize..5) {
        let nonneg: Vec<StnArc> = arcs
            .iter()
            .map(|a| StnArc::new(a.tail, a.head, a.weight.abs()))
            .collect();
        let g = StnGraph::new(5, nonneg);
        let row = stn::dijkstra_to_target(&g, target).unwrap();
        prop_assert_eq!(row.dist, bf_to_target(&g, target));
    }

    #[test]
    fn warm_from_zero_equals_cold(arcs in arcs_strategy(5)) {
        let g = StnGraph::new(5, arcs);
        let cold = stn::solve_stn(&g).unwrap();
        let warm = stn::solve_stn_warm(&g, &Schedule::zero(5)).unwrap();
        match (&cold, &warm) {
            (Verdict::Consistent(a), Verdict::Consistent(b)) => prop_assert_eq!(a, b),
            (Verdict::Inconsistent(_), Verdict::Inconsistent(_)) => {}
            other => prop_assert!(false, "warm/cold disagree: {:?}", other),
        }
    }

    #[test]
    fn reduced_costs_nonnegative_under_feasible_schedule(arcs in arcs_strategy(5), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let g = StnGraph::new(5, arcs);
        prop_assume!(stn::solve_stn(&g).unwrap().is_consistent());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let start = Schedule::from_values((0..5).map(|_| rng.gen_range(0..=6)).collect());
        let Verdict::Consistent(phi) = stn::solve_stn_warm(&g, &start).unwrap() else {
            unreachable!("consistent graph");
        };
        let rw = stn::reduced_costs(&g, &phi).unwrap();
        prop_assert!(rw.arcs.iter().all(|a| a.weight >= 0));
    }

    #[test]
    fn relaxation_budget_on_consistent_inputs(arcs in arcs_strategy(6)) {
        let g = StnGraph::new(6, arcs);
        let (verdict, stats) = stn::solve_stn_traced(&g).unwrap();
        if verdict.is_consistent() {
            let bound = (g.n as u64) * (g.arcs.len() as u64);
            prop_assert!(stats.relaxations <= bound.max(1));
        }
    }

    #[test]
    fn least_schedule_dominated_by_warm_solutions(arcs in arcs_strategy(5), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let g = StnGraph::new(5, arcs);
        prop_assume!(stn::solve_stn(&g).unwrap().is_consistent());
        let Verdict::Consistent(least) = stn::solve_stn(&g).unwrap() else { unreachable!() };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let start = Schedule::from_values((0..5).map(|_| rng.gen_range(0..=6)).collect());
        let Verdict::Consistent(other) = stn::solve_stn_warm(&g, &start).unwrap() else {
            unreachable!("consistent graph");
        };
        prop_assert!(other.dominates(&least));
    }
}
