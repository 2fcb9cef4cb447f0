use rand::rngs::mock::StepRng;

use super::*;
use crate::game::utility;
use crate::graph::{path, random_geometric, star};

fn never_start() -> StepRng {
    // Every f64 draw is just below 1, above any ε^r.
    StepRng::new(u64::MAX, 0)
}

fn quiet(epsilon: f64) -> NoiseParams {
    // ε^r underflows to 0: nobody starts an experiment.
    NoiseParams::new(epsilon, 1e4).unwrap()
}

#[test]
fn views() {
    let g = path(5).unwrap();
    let t = NeighborhoodTable::new(&g, 1);
    assert!(local_view(&t, &[2, 2], 0).unwrap().occupied_within_delta);
    // Distance 2δ: coverage overlaps at node 1 but neither agent senses it.
    let v0 = local_view(&t, &[0, 2], 0).unwrap();
    let v1 = local_view(&t, &[0, 2], 1).unwrap();
    assert!(!v0.occupied_within_delta && !v1.occupied_within_delta);
    assert!(!local_view(&t, &[3], 0).unwrap().occupied_within_delta);
    assert!(local_view(&t, &[3], 1).is_err());

    let sub = v1.visible_subgraph(&g).unwrap();
    assert_eq!(sub.original, vec![1, 2, 3]);
    assert_eq!(sub.graph.edge_count(), 2);
}

#[test]
fn stationary_agent_stays_when_draw_fails() {
    let g = star(5).unwrap();
    let t = NeighborhoodTable::new(&g, 1);
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    let a = AgentState::stationary(3);
    let view = local_view(&t, &[3], 0).unwrap();
    assert_eq!(
        cfcm_agent_step(&a, &view, &params, &t, &mut never_start()),
        a
    );

    // A zero draw starts an experiment toward the first closed neighbor.
    let started = cfcm_agent_step(&a, &view, &params, &t, &mut StepRng::new(0, 0));
    assert_eq!(started.first_candidate(), 3);
    assert_eq!(started.second_candidate(), 0);
    assert_eq!((started.index, started.est1, started.est2), (0, 0, 0));
    assert_eq!(started.sequence, experiment_path(&g, 3, 0, 1).unwrap());
}

#[test]
fn revisited_node_is_not_sampled_yet() {
    let g = path(5).unwrap();
    let t = NeighborhoodTable::new(&g, 1);
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    // Walk 2,1,2,3,4,3: node 2 at index 0 recurs at index 2.
    let a = AgentState::experimenting(experiment_path(&g, 2, 3, 1).unwrap());
    let view = local_view(&t, &[2], 0).unwrap();
    let next = cfcm_agent_step(&a, &view, &params, &t, &mut never_start());
    assert_eq!((next.est1, next.est2, next.index), (0, 0, 1));
    // Index 1 (node 1) is its only visit.
    let view = local_view(&t, &[1], 0).unwrap();
    let next = cfcm_agent_step(&next, &view, &params, &t, &mut never_start());
    assert_eq!((next.est1, next.est2, next.index), (1, 0, 2));
}

#[test]
fn end_of_walk_choice_odds() {
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    assert_eq!(params.choice_probability(0, 0), 0.5);
    assert!((params.choice_probability(3, 1) - 0.999775).abs() < 1e-6);

    // Empirical check of the tie on a finished self-walk of P2 with δ=0.
    let g = path(2).unwrap();
    let t = NeighborhoodTable::new(&g, 0);
    let mut agent = AgentState::experimenting(vec![0, 1]);
    agent.index = 1;
    let view = local_view(&t, &[1, 0], 0).unwrap();
    // Sample at node 1 is 1 and lands in est2 only; force a tie by
    // pre-loading est1.
    agent.est1 = 1;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 20_000;
    let firsts = (0..trials)
        .filter(|_| cfcm_agent_step(&agent, &view, &params, &t, &mut rng).position() == 0)
        .count();
    let frac = firsts as f64 / trials as f64;
    assert!((frac - 0.5).abs() < 0.02, "{frac}");
}

#[test]
fn quiet_tick_only_advances_the_clock() {
    let g = path(5).unwrap();
    let t = NeighborhoodTable::connected(&g, 1).unwrap();
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    let s = GlobalState::stationary(&[0, 2, 4]);
    let next = cfcm_step(&s, &t, &params, &mut never_start()).unwrap();
    assert_eq!(next.agents, s.agents);
    assert_eq!(next.step, 1);
}

#[test]
fn rejects_disconnected_graph() {
    let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    let t = NeighborhoodTable::new(&g, 1);
    let params = NoiseParams::new(0.1, 1.0).unwrap();
    let s = GlobalState::stationary(&[0, 2]);
    assert!(matches!(
        cfcm_step(&s, &t, &params, &mut never_start()),
        Err(Error::Disconnected)
    ));
    let init = ActionProfile::all_at(0, 2, 1).unwrap();
    assert!(run_cfcm(&g, &init, &params, 10, 1).is_err());
}

/// Walks agent 0 along `walk` while the others stay put and returns its
/// estimates as used for the final choice.
fn lone_experiment(
    g: &Graph,
    delta: usize,
    walk: Vec<NodeId>,
    others: &[NodeId],
) -> (usize, usize) {
    let t = NeighborhoodTable::connected(g, delta).unwrap();
    let mut state = GlobalState::stationary(others);
    state.agents.insert(0, AgentState::experimenting(walk));
    let params = quiet(0.015);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    while !state.agents[0].at_walk_end() {
        state = cfcm_step(&state, &t, &params, &mut rng).unwrap();
    }
    let view = local_view(&t, &state.positions(), 0).unwrap();
    let done = observe(&state.agents[0], &view, &t);
    (done.est1, done.est2)
}

#[test]
fn lone_experimenter_measures_true_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..60u64 {
        let n = rng.gen_range(4..18);
        let g = random_geometric(n, 0.45, trial).unwrap();
        let delta = rng.gen_range(0..3);
        let m = rng.gen_range(1..5);
        let others: Vec<NodeId> = (1..m).map(|_| rng.gen_range(0..n)).collect();
        let a1 = rng.gen_range(0..n);
        let a2 = closed_neighbor(&g, a1, rng.gen_range(0..=g.degree(a1)));
        let walk = experiment_path(&g, a1, a2, delta).unwrap();
        if walk.len() == 1 {
            // Same state as standing still: no choice is ever made.
            continue;
        }
        let (e1, e2) = lone_experiment(&g, delta, walk, &others);

        let mut pos = vec![a1];
        pos.extend(&others);
        let p = ActionProfile::new(pos, delta).unwrap();
        assert_eq!(e1, utility(&g, 0, &p).unwrap());
        assert_eq!(e2, utility(&g, 0, &p.with_position(0, a2)).unwrap());
    }
}

#[test]
fn simultaneous_experiments_can_mislead() {
    // Two agents on a path with frequent experiments: look for a finisher
    // whose estimates disagree with its true utilities at decision time.
    let g = path(8).unwrap();
    let t = NeighborhoodTable::connected(&g, 1).unwrap();
    let params = NoiseParams::new(0.3, 0.5).unwrap();
    let mut sim = CfcmSimulation::new(&t, GlobalState::stationary(&[2, 5]), params, 17).unwrap();
    let mut wrong = 0;
    for _ in 0..20_000 {
        let state = sim.state().clone();
        let pos = state.positions();
        for (i, a) in state.agents.iter().enumerate() {
            if !a.is_stationary() && a.at_walk_end() {
                let view = local_view(&t, &pos, i).unwrap();
                let done = observe(a, &view, &t);
                let mut p = pos.clone();
                p[i] = a.first_candidate();
                let u1 = t.utility_at(&p, i, p[i]);
                let u2 = t.utility_at(&p, i, a.second_candidate());
                if (done.est1, done.est2) != (u1, u2) {
                    wrong += 1;
                }
            }
        }
        sim.step();
    }
    assert!(wrong > 0);
}

#[test]
fn run_contract() {
    let g = path(5).unwrap();
    let init = ActionProfile::all_at(0, 2, 1).unwrap();
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    assert_eq!(run_cfcm(&g, &init, &params, 0, 1).unwrap().len(), 1);
    let a = run_cfcm(&g, &init, &params, 3000, 1).unwrap();
    assert_eq!(a, run_cfcm(&g, &init, &params, 3000, 1).unwrap());
    for w in a.windows(2) {
        assert_eq!(w[1].tick, w[0].tick + 1);
        for (u, v) in w[0].positions.iter().zip(&w[1].positions) {
            assert!(u == v || g.has_edge(*u, *v));
        }
    }
}

#[test]
fn long_run_on_p5() {
    let g = path(5).unwrap();
    let init = ActionProfile::all_at(0, 2, 1).unwrap();
    let params = NoiseParams::new(0.015, 1.5).unwrap();
    let trace = run_cfcm(&g, &init, &params, 20_000, 2024).unwrap();
    let tail = &trace[trace.len() - 5000..];
    let mean = tail.iter().map(|r| r.covered as f64).sum::<f64>() / tail.len() as f64;
    assert!(mean >= 4.7, "mean {mean}");
}
