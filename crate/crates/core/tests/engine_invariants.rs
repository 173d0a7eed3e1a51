mod support;

use std::sync::atomic::{AtomicUsize, Ordering};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rumor_core::engine::Simulation;
use rumor_core::{generate, simulate, GraphSpec, Model, OverflowPolicy, Protocol, RunConfig, TieBreak};

static ROUNDS_CHECKED: AtomicUsize = AtomicUsize::new(0);

fn protocol() -> impl Strategy<Value = Protocol> {
    prop_oneof![Just(Protocol::Push), Just(Protocol::Pull), Just(Protocol::PushPull)]
}

fn tie_break() -> impl Strategy<Value = TieBreak> {
    prop_oneof![Just(TieBreak::UniformRandom), Just(TieBreak::PortOrder)]
}

fn overflow() -> impl Strategy<Value = OverflowPolicy> {
    prop_oneof![Just(OverflowPolicy::DropTail), Just(OverflowPolicy::DropHead)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn every_round_respects_the_buffer_model(
        graph_seed in any::<u64>(),
        n in 2usize..24,
        density in 0.0f64..0.5,
        protocol in protocol(),
        tie_break in tie_break(),
        capacity in prop_oneof![Just(None), (0usize..4).prop_map(Some)],
        overflow in overflow(),
        seed in any::<u64>(),
        source_pick in any::<usize>(),
        rounds in 1u64..60,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
        let g = support::random_connected(&mut rng, n, density);
        let config = RunConfig::new(protocol, Model::Buffered, source_pick % n, seed)
            .with_tie_break(tie_break)
            .with_capacity(capacity)
            .with_overflow(overflow);
        let mut sim = Simulation::new(&g, config).unwrap();
        sim.record_reads();
        for _ in 0..rounds {
            if let Err(e) = support::audited_step(&mut sim, protocol, capacity, overflow) {
                prop_assert!(false, "{}", e);
            }
            ROUNDS_CHECKED.fetch_add(1, Ordering::Relaxed);
        }
    }

    #[test]
    fn identical_configs_give_identical_traces(
        graph_seed in any::<u64>(),
        n in 2usize..20,
        protocol in protocol(),
        model in prop_oneof![Just(Model::Buffered), Just(Model::Classical)],
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
        let g = support::random_connected(&mut rng, n, 0.2);
        let config = RunConfig::new(protocol, model, 0, seed).with_max_rounds(5_000);
        let a = simulate(&g, &config).unwrap();
        let b = simulate(&g, &config).unwrap();
        prop_assert_eq!(a.to_jsonl(), b.to_jsonl());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trace_counts_are_monotone_and_complete(
        graph_seed in any::<u64>(),
        n in 1usize..20,
        protocol in protocol(),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(graph_seed);
        let g = support::random_connected(&mut rng, n, 0.1);
        let t = simulate(&g, &RunConfig::new(protocol, Model::Buffered, 0, seed)).unwrap();
        prop_assert!(t.rounds.windows(2).all(|w| w[0].informed <= w[1].informed));
        let done = t.completion_round.expect("unbounded buffers on small graphs complete");
        prop_assert_eq!(t.rounds_run(), done);
        prop_assert!(t.rounds.iter().filter(|r| r.informed == n).count() <= 1);
        prop_assert_eq!(t.informed_round.iter().flatten().max().copied(), Some(done));
        prop_assert_eq!(t.informed_round[0], Some(0));
    }
}

#[test]
fn micro_round_budget_is_met() {
    // the property above must have covered at least 10^4 rounds
    every_round_respects_the_buffer_model();
    assert!(
        ROUNDS_CHECKED.load(Ordering::Relaxed) >= 10_000,
        "{}",
        ROUNDS_CHECKED.load(Ordering::Relaxed)
    );
}

#[test]
fn star_pull_is_exactly_delta_for_both_tie_breaks() {
    for delta in [1, 2, 4, 16] {
        let g = generate(&GraphSpec::Star { delta }).unwrap();
        for tie_break in [TieBreak::UniformRandom, TieBreak::PortOrder] {
            for seed in 0..30 {
                let config = RunConfig::new(Protocol::Pull, Model::Buffered, 0, seed).with_tie_break(tie_break);
                assert_eq!(simulate(&g, &config).unwrap().completion_round, Some(delta as u64));
            }
        }
    }
}
