use proptest::prelude::*;
use rand::{Rng, RngCore};

use super::*;
use crate::graph::{
    ball, eccentricity, path, random_tree, regular_bipartite, ring, BipartiteSpec, Graph,
    IdAssignment,
};
use crate::lcl::{coloring_problem, sinkless_coloring_problem};

fn values(t: &RunTrace) -> Vec<u64> {
    t.labels.labels.iter().map(|l| l.value().unwrap()).collect()
}

#[test]
fn own_id_is_zero_rounds() {
    let g = random_tree(30, 5).unwrap();
    let ids = IdAssignment::random_unique(30, 20, 9).unwrap();
    let t = run_det(&g, &ids, &OwnId, &SimConfig::with_max_rounds(1)).unwrap();
    assert_eq!(t.rounds_used, 0);
    assert_eq!(values(&t), ids.ids);
    assert_eq!(t.messages_sent, 0);
}

#[test]
fn copy_max_neighbor_on_six_cycle() {
    let g = ring(6).unwrap();
    let ids = IdAssignment {
        bits: 3,
        ids: vec![1, 2, 3, 4, 5, 6],
        distinct_radius: None,
    };
    let t = run_det(&g, &ids, &CopyMaxNeighbor, &SimConfig::default()).unwrap();
    assert_eq!(t.rounds_used, 1);
    assert_eq!(values(&t), vec![6, 3, 4, 5, 6, 5]);
    assert_eq!(t.messages_sent, 12);
}

#[test]
fn flood_max_takes_diameter_rounds() {
    let g = path(5).unwrap();
    let ids = IdAssignment {
        bits: 8,
        ids: vec![17, 200, 3, 91, 44],
        distinct_radius: None,
    };
    let diameter = (0..5).map(|v| eccentricity(&g, v)).max().unwrap();
    assert_eq!(diameter, 4);
    let t = run_det(&g, &ids, &FloodMax { rounds: diameter }, &SimConfig::with_max_rounds(10)).unwrap();
    assert_eq!(t.rounds_used, 4);
    assert!(values(&t).iter().all(|&x| x == 200));
    assert_eq!(t.per_round_active, vec![5; 4]);
}

#[test]
fn cap_is_a_distinct_error() {
    let g = path(5).unwrap();
    let ids = IdAssignment::sequential(5);
    match run_det(&g, &ids, &FloodMax { rounds: 4 }, &SimConfig::with_max_rounds(2)) {
        Err(SimError::CapExceeded { cap, active, trace }) => {
            assert_eq!((cap, active, trace.rounds_used), (2, 5, 2));
        }
        other => panic!("expected cap error, got {other:?}"),
    }
}

#[test]
fn oversized_and_misaddressed_messages_are_rejected() {
    let g = path(3).unwrap();
    let ids = IdAssignment::sequential(3);
    let cfg = SimConfig {
        max_message_bytes: 4,
        ..SimConfig::default()
    };
    assert!(matches!(
        run_det(&g, &ids, &CopyMaxNeighbor, &cfg),
        Err(SimError::MessageTooLarge { vertex: 0, round: 0, bytes: 8, cap: 4 })
    ));
    struct BadArity;
    impl Algorithm for BadArity {
        type State = ();
        fn name(&self) -> String {
            "bad".into()
        }
        fn init(&self, _: &VertexContext, _: Option<&mut VertexRng>) -> ((), Step) {
            ((), Step::send_and_halt(Outbox::PerPort(vec![None; 7])))
        }
        fn step(&self, _: &mut (), _: &VertexContext, _: usize, _: &[Option<&[u8]>], _: Option<&mut VertexRng>) -> Step {
            Step::halt()
        }
        fn output(&self, _: &()) -> crate::lcl::Label {
            crate::lcl::Label::Value(0)
        }
    }
    assert!(matches!(
        run_det(&g, &ids, &BadArity, &SimConfig::default()),
        Err(SimError::OutboxArity { vertex: 0, expected: 1, found: 7, .. })
    ));
}

#[test]
fn radius_limited_ids_need_a_compatible_algorithm() {
    let g = path(4).unwrap();
    let ids = IdAssignment {
        bits: 2,
        ids: vec![0, 1, 2, 0],
        distinct_radius: Some(2),
    };
    assert!(matches!(
        run_det(&g, &ids, &OwnId, &SimConfig::default()),
        Err(SimError::IdRadius { .. })
    ));
}

#[test]
fn random_bit_matches_stream() {
    let g = Graph::from_edges(1, &[]).unwrap();
    for seed in 0..20 {
        let t = run_rand(&g, &RandomBit, &RandomSource::keyed(seed), &SimConfig::default()).unwrap();
        assert_eq!(values(&t), vec![stream(seed, 0, 0).take_bits(1)]);
        assert_eq!(t.seed, Some(seed));
    }
}

#[test]
fn rand_runs_are_reproducible() {
    let g = random_tree(500, 3).unwrap();
    let src = RandomSource::keyed(42);
    let a = run_rand(&g, &FloodMax { rounds: 3 }, &src, &SimConfig::default()).unwrap();
    let b = run_rand(&g, &FloodMax { rounds: 3 }, &src, &SimConfig::default()).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn ring_flood_max_matches_sequential_oracle() {
    let g = ring(16).unwrap();
    let seed = 1234;
    let t = run_rand(&g, &FloodMax { rounds: 3 }, &RandomSource::keyed(seed), &SimConfig::default()).unwrap();
    let mut x: Vec<u64> = (0..16).map(|v| stream(seed, v as u64, 0).next_u64()).collect();
    for _ in 0..3 {
        x = (0..16)
            .map(|v| g.neighbors(v).iter().map(|&u| x[u]).fold(x[v], u64::max))
            .collect();
    }
    assert_eq!(values(&t), x);
    assert_eq!(t.rounds_used, 3);
}

/// Mixes degree, ID or randomness, per-port traffic and round number so the
/// final state depends on everything the model lets a vertex see.
struct Mixer {
    rounds: usize,
}

fn mix(a: u64, b: u64) -> u64 {
    (a ^ b.rotate_left(17)).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29)
}

impl Algorithm for Mixer {
    type State = u64;
    fn name(&self) -> String {
        "mixer".into()
    }
    fn init(&self, ctx: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
        let mut s = mix(ctx.degree as u64, ctx.params.n ^ ctx.params.delta << 32);
        if let Some(id) = ctx.id {
            s = mix(s, id);
        }
        if let Some(r) = rng {
            s = mix(s, r.next_u64());
        }
        if self.rounds == 0 {
            return (s, Step::halt());
        }
        let out = (0..ctx.degree).map(|p| Some(mix(s, p as u64).to_le_bytes().to_vec())).collect();
        (s, Step::send(Outbox::PerPort(out)))
    }
    fn step(&self, s: &mut u64, ctx: &VertexContext, round: usize, inbox: &[Option<&[u8]>], rng: Option<&mut VertexRng>) -> Step {
        for (p, m) in inbox.iter().enumerate() {
            let x = m.map_or(0, |m| u64::from_le_bytes(m.try_into().unwrap()));
            *s = mix(*s, x ^ p as u64);
        }
        *s = mix(*s, round as u64);
        if let Some(r) = rng {
            *s = mix(*s, r.gen::<u64>());
        }
        if round >= self.rounds {
            return Step::halt();
        }
        let out = (0..ctx.degree).map(|p| Some(mix(*s, p as u64).to_le_bytes().to_vec())).collect();
        Step::send(Outbox::PerPort(out))
    }
    fn output(&self, s: &u64) -> crate::lcl::Label {
        crate::lcl::Label::Value(*s)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn state_depends_only_on_the_ball(n in 2usize..80, seed in any::<u64>(), t in 0usize..4, vpick in any::<usize>()) {
        let g = random_tree(n, seed).unwrap();
        let v = vpick % n;
        let alg = Mixer { rounds: t };
        let b = ball(&g, v, t + 1);
        let params = ParamTable::new(n as u64, g.delta() as u64);
        let full = run_rand(&g, &alg, &RandomSource::keyed(seed), &SimConfig::default()).unwrap();
        let cfg = SimConfig {
            params: Some(params.clone()),
            stream_keys: Some(b.embedding.iter().map(|&u| u as u64).collect()),
            ..SimConfig::default()
        };
        let local = run_rand(&b.graph, &alg, &RandomSource::keyed(seed), &cfg).unwrap();
        prop_assert_eq!(&full.labels.labels[v], &local.labels.labels[b.center]);

        let ids = IdAssignment::random_unique(n, 32, seed ^ 1).unwrap();
        let ball_ids = IdAssignment {
            bits: 32,
            ids: b.embedding.iter().map(|&u| ids.ids[u]).collect(),
            distinct_radius: None,
        };
        let cfg = SimConfig { params: Some(params), ..SimConfig::default() };
        let full = run_det(&g, &ids, &alg, &SimConfig::default()).unwrap();
        let local = run_det(&b.graph, &ball_ids, &alg, &cfg).unwrap();
        prop_assert_eq!(&full.labels.labels[v], &local.labels.labels[b.center]);
    }

    #[test]
    fn inbox_totals_match_outbox_totals(n in 1usize..200, seed in any::<u64>(), rounds in 1usize..5) {
        // every vertex counts the messages it receives; nobody halts before
        // the last round and the last round sends nothing
        struct Chatter { rounds: usize }
        impl Algorithm for Chatter {
            type State = u64;
            fn name(&self) -> String { "chatter".into() }
            fn init(&self, ctx: &VertexContext, rng: Option<&mut VertexRng>) -> (u64, Step) {
                let r = rng.unwrap();
                let out = (0..ctx.degree).map(|_| r.gen_bool(0.5).then(|| vec![0u8; r.gen_range(0..5)])).collect();
                (0, Step::send(Outbox::PerPort(out)))
            }
            fn step(&self, s: &mut u64, ctx: &VertexContext, round: usize, inbox: &[Option<&[u8]>], rng: Option<&mut VertexRng>) -> Step {
                *s += inbox.iter().flatten().count() as u64;
                if round == self.rounds { return Step::halt(); }
                let r = rng.unwrap();
                if r.gen_bool(0.3) {
                    return Step::send(Outbox::Broadcast(vec![1]));
                }
                let out = (0..ctx.degree).map(|_| r.gen_bool(0.5).then(|| vec![2u8])).collect();
                Step::send(Outbox::PerPort(out))
            }
            fn output(&self, s: &u64) -> crate::lcl::Label { crate::lcl::Label::Value(*s) }
        }
        let g = random_tree(n, seed).unwrap();
        let t = run_rand(&g, &Chatter { rounds }, &RandomSource::keyed(seed), &SimConfig::default()).unwrap();
        prop_assert_eq!(values(&t).iter().sum::<u64>(), t.messages_sent);
        prop_assert!(t.rounds_used <= rounds);
    }
}

#[test]
fn worker_count_does_not_change_traces() {
    let g = random_tree(3000, 8).unwrap();
    let alg = Mixer { rounds: 5 };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_rand(&g, &alg, &RandomSource::keyed(77), &SimConfig::default()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn monte_carlo_examples() {
    let single = Graph::from_edges(1, &[]).unwrap();
    let s = monte_carlo(
        &GraphRecipe::Fixed(&single),
        &ConstantLabel(1),
        &coloring_problem(1).unwrap(),
        100,
        5,
        &SimConfig::default(),
    )
    .unwrap();
    assert_eq!((s.trials, s.failures), (100, 0));
    assert_eq!(s.trial_seeds.len(), 100);

    let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let s = monte_carlo(
        &GraphRecipe::Fixed(&edge),
        &UniformColoring { k: 2 },
        &coloring_problem(2).unwrap(),
        10_000,
        6,
        &SimConfig::default(),
    )
    .unwrap();
    let frac = s.failures as f64 / s.trials as f64;
    assert!((frac - 0.5).abs() <= 0.02, "{frac}");
    assert_eq!(s.failure_kinds["monochromatic-edge"], 2 * s.failures);
    assert_eq!(s.component_size_max, Some(2));
}

#[test]
fn zero_round_sinkless_rate_is_one_over_delta_squared() {
    let delta = 4;
    let g = regular_bipartite(BipartiteSpec {
        delta,
        side: 40,
        min_girth: 4,
        seed: 3,
        max_attempts: 1000,
    })
    .unwrap();
    let trials = 300;
    let s = monte_carlo(
        &GraphRecipe::Fixed(&g),
        &UniformColoring { k: delta as u64 },
        &sinkless_coloring_problem(&g).unwrap(),
        trials,
        11,
        &SimConfig::default(),
    )
    .unwrap();
    // each forbidden edge makes both endpoints violate
    let edges = (g.m() * trials) as f64;
    let rate = s.violations as f64 / 2.0 / edges;
    let p = 1.0 / (delta * delta) as f64;
    let sigma = (p * (1.0 - p) / edges).sqrt();
    assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate} vs {p} ± {}", 3.0 * sigma);
}

#[test]
fn monte_carlo_replays_from_trial_seeds() {
    let recipe = GraphRecipe::Generate(Box::new(|s| random_tree(60, s)));
    let p = coloring_problem(3).unwrap();
    let cfg = SimConfig::default();
    let a = monte_carlo(&recipe, &UniformColoring { k: 3 }, &p, 50, 9, &cfg).unwrap();
    assert_eq!(a, monte_carlo(&recipe, &UniformColoring { k: 3 }, &p, 50, 9, &cfg).unwrap());
    let i = a.failed_trials[0];
    let g = random_tree(60, a.trial_seeds[i]).unwrap();
    let t = run_rand(
        &g,
        &UniformColoring { k: 3 },
        &RandomSource::keyed(execution_seed(a.trial_seeds[i])),
        &cfg,
    )
    .unwrap();
    assert!(!crate::lcl::verify(&g, &p, &t.labels).unwrap().is_empty());
}
