use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use graphcov::blll::{blll_step, BlllState};
use graphcov::cfcm::{experiment_path, CfcmSimulation, GlobalState};
use graphcov::graph::random_geometric;
use graphcov::stability::brute_force_max_coverage;
use graphcov::{ActionProfile, NeighborhoodTable, NoiseParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance() -> graphcov::Graph {
    random_geometric(50, 0.2, 1).expect("connected instance")
}

fn steps(c: &mut Criterion) {
    let g = instance();
    let table = NeighborhoodTable::connected(&g, 1).unwrap();
    let params = NoiseParams::new(0.015, 1.5).unwrap();

    c.bench_function("cfcm_tick_13_agents", |b| {
        let mut sim =
            CfcmSimulation::new(&table, GlobalState::stationary(&[0; 13]), params, 7).unwrap();
        b.iter(|| black_box(sim.step().step))
    });

    c.bench_function("blll_step_13_agents", |b| {
        let mut state = BlllState::new(ActionProfile::all_at(0, 13, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        b.iter(|| {
            state = blll_step(&state, &table, &params, &mut rng).unwrap();
            black_box(state.step)
        })
    });
}

fn paths(c: &mut Criterion) {
    let g = instance();
    let pairs: Vec<_> = g.edges().collect();
    for delta in [1, 2] {
        c.bench_function(&format!("experiment_paths_delta_{delta}"), |b| {
            b.iter(|| {
                for &(u, v) in &pairs {
                    black_box(experiment_path(&g, u, v, delta).unwrap());
                }
            })
        });
    }
}

fn brute_force(c: &mut Criterion) {
    let g = random_geometric(20, 0.35, 3).unwrap();
    c.bench_function("brute_force_20_nodes_3_agents", |b| {
        b.iter(|| black_box(brute_force_max_coverage(&g, 3, 1).unwrap().value))
    });
}

criterion_group!(benches, steps, paths, brute_force);
criterion_main!(benches);
