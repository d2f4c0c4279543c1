use proptest::prelude::*;
use samtpso::adaptation::{MemoryWindow, SourcePool};
use samtpso::benchmarks::{generate_problem, make_task, BaseFn, SuiteId};
use samtpso::metrics::transfer_rates;
use samtpso::optimizer::{evaluate_and_update, GbestRecord, Particle, SubpopState};
use samtpso::problem::Objective;
use samtpso::{run, Algorithm, Error, RunConfig, SwarmState};

/// Fitness is the first coordinate.
struct FirstCoord;

impl Objective for FirstCoord {
    fn dim(&self) -> usize {
        1
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        x[0]
    }
}

fn small_config(alg: Algorithm, seed: u64, gens: usize) -> RunConfig {
    let mut cfg = RunConfig::new(alg).with_seed(seed).with_max_gens(gens);
    cfg.pop_per_task = 12;
    cfg.lp = 3;
    cfg
}

#[test]
fn init_state() {
    let problem = generate_problem(SuiteId::Suite1, 1, 5).unwrap();
    let cfg = RunConfig::new(Algorithm::SaMtpsoS1).with_seed(11);
    let state = SwarmState::init(problem.objectives(), problem.unified_dim, cfg).unwrap();
    assert_eq!(state.generation, 0);
    assert_eq!(state.subpops.len(), 2);
    for (t, sub) in state.subpops.iter().enumerate() {
        assert_eq!(sub.particles.len(), 50);
        assert_eq!(sub.pool.p, vec![0.5, 0.5]);
        assert!(!sub.pool.is_focus);
        assert_eq!(sub.mem.filled(), 0);
        let mut min = f64::INFINITY;
        for p in &sub.particles {
            assert_eq!(p.x.len(), 50);
            assert!(p.x.iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert!(p.v.iter().all(|&v| v == 0.0));
            assert_eq!(p.pbest, p.x);
            assert_eq!(p.f_pbest, problem.tasks[t].evaluate(&p.x));
            min = min.min(p.f_pbest);
        }
        assert_eq!(sub.gbest.fitness, min);
    }
    assert!(state.last_choices().is_none());
}

#[test]
fn init_rejects_short_unified_space() {
    let task = make_task(BaseFn::Sphere, 4, 1);
    let cfg = small_config(Algorithm::Pso, 0, 5);
    assert!(matches!(
        SwarmState::init(vec![&task], 3, cfg),
        Err(Error::DimensionMismatch { expected: 4, got: 3 })
    ));
}

#[test]
fn runs_are_deterministic_in_the_seed() {
    let problem = generate_problem(SuiteId::Suite1, 5, 3).unwrap();
    for alg in [Algorithm::SaMtpsoS1, Algorithm::SaMtpsoS2, Algorithm::Pso] {
        let a = run(&problem, &small_config(alg, 9, 30)).unwrap();
        let b = run(&problem, &small_config(alg, 9, 30)).unwrap();
        let c = run(&problem, &small_config(alg, 10, 30)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.best_fev_trace, c.best_fev_trace);
    }
}

#[test]
fn single_generation_trace() {
    let problem = generate_problem(SuiteId::Suite1, 2, 1).unwrap();
    let res = run(&problem, &small_config(Algorithm::SaMtpsoS1, 1, 1)).unwrap();
    assert_eq!(res.best_fev_trace.len(), 1);
    assert_eq!(res.best_fev_trace[0].len(), 2);
    assert_eq!(res.source_counts.as_ref().unwrap().len(), 1);
    assert_eq!(res.final_fev, res.best_fev_trace[0]);
}

#[test]
fn traces_are_monotone_and_choices_conserved() {
    let problem = generate_problem(SuiteId::Suite1, 4, 2).unwrap();
    let cfg = small_config(Algorithm::SaMtpsoS2, 4, 60);
    let res = run(&problem, &cfg).unwrap();
    assert_eq!(res.best_fev_trace.len(), 60);
    for w in res.best_fev_trace.windows(2) {
        assert!(w[1].iter().zip(&w[0]).all(|(a, b)| a <= b));
    }
    for row in res.source_counts.as_ref().unwrap() {
        for t in 0..2 {
            assert_eq!(row[t * 2] + row[t * 2 + 1], cfg.pop_per_task as u32);
        }
    }
    for (t, pos) in res.best_positions.iter().enumerate() {
        assert_eq!(problem.tasks[t].evaluate(pos), res.final_fev[t]);
    }
}

#[test]
fn baseline_records_no_choices() {
    let problem = generate_problem(SuiteId::Suite1, 1, 2).unwrap();
    let res = run(&problem, &small_config(Algorithm::Pso, 4, 5)).unwrap();
    assert!(res.source_counts.is_none());
    assert!(matches!(transfer_rates(&res), Err(Error::NoSourceChoices)));
}

fn hand_subpop(xs: &[f64], pbest_f: &[f64], sources: &[usize]) -> SubpopState {
    let particles = xs
        .iter()
        .zip(pbest_f)
        .zip(sources)
        .map(|((&x, &f), &s)| Particle {
            x: vec![x],
            v: vec![0.0],
            pbest: vec![f],
            f_pbest: f,
            last_source: s,
        })
        .collect();
    SubpopState {
        particles,
        gbest: GbestRecord {
            position: vec![0.5],
            fitness: 0.5,
        },
        pool: SourcePool::uniform(2),
        mem: MemoryWindow::new(4, 2),
        task_index: 0,
    }
}

#[test]
fn evaluate_and_update_counts_outcomes() {
    // two improvements via source 0 and 1, one failure via source 1
    let mut sub = hand_subpop(&[0.3, 0.6, 0.9], &[0.4, 0.7, 0.8], &[0, 1, 1]);
    evaluate_and_update(&mut sub, &FirstCoord).unwrap();
    let (ns, nf) = sub.mem.columns().next().unwrap();
    assert_eq!(ns, &[1, 1]);
    assert_eq!(nf, &[0, 1]);
    assert_eq!(sub.mem.filled(), 1);
    assert_eq!(sub.particles[0].f_pbest, 0.3);
    assert_eq!(sub.particles[1].pbest, vec![0.6]);
    assert_eq!(sub.particles[2].f_pbest, 0.8);
    assert_eq!(sub.gbest.fitness, 0.3);
    assert_eq!(sub.gbest.position, vec![0.3]);
}

#[test]
fn ties_count_as_failures() {
    let mut sub = hand_subpop(&[0.4, 0.5], &[0.4, 0.6], &[0, 0]);
    evaluate_and_update(&mut sub, &FirstCoord).unwrap();
    let (ns, nf) = sub.mem.columns().next().unwrap();
    assert_eq!(ns, &[1, 0]);
    assert_eq!(nf, &[1, 0]);
    // the improving particle ties the gbest, which therefore keeps its position
    assert_eq!(sub.gbest.fitness, 0.5);
    assert_eq!(sub.particles[1].f_pbest, 0.5);
}

#[test]
fn invalid_source_is_reported() {
    let mut sub = hand_subpop(&[0.1], &[0.2], &[2]);
    assert!(matches!(
        evaluate_and_update(&mut sub, &FirstCoord),
        Err(Error::SourceOutOfRange { index: 2, count: 2 })
    ));
}

fn check_invariants(state: &SwarmState, tasks: &[&dyn Objective]) {
    let n = state.config.pop_per_task as u32;
    for (t, sub) in state.subpops.iter().enumerate() {
        let sum: f64 = sub.pool.p.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
        assert!(sub.pool.p.iter().all(|&p| p > 0.0));
        for (ns, nf) in sub.mem.columns() {
            assert_eq!(ns.iter().sum::<u32>() + nf.iter().sum::<u32>(), n);
        }
        let mut min = f64::INFINITY;
        for p in &sub.particles {
            assert!(p.x.iter().all(|&x| (0.0..=1.0).contains(&x)));
            assert_eq!(p.f_pbest, tasks[t].evaluate(&p.pbest));
            min = min.min(p.f_pbest);
        }
        assert_eq!(sub.gbest.fitness, min);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn state_invariants_hold(
        seed in any::<u64>(),
        alg in prop_oneof![Just(Algorithm::SaMtpsoS1), Just(Algorithm::SaMtpsoS2), Just(Algorithm::Pso)],
        dims in (1usize..6, 1usize..6),
        lp in 1usize..5,
    ) {
        let a = make_task(BaseFn::Rastrigin, dims.0, seed);
        let b = make_task(BaseFn::Griewank, dims.1, seed ^ 1);
        let tasks: Vec<&dyn Objective> = vec![&a, &b];
        let mut cfg = small_config(alg, seed, 25);
        cfg.lp = lp;
        let mut state = SwarmState::init(tasks.clone(), dims.0.max(dims.1), cfg).unwrap();
        let mut prev = state.best_fevs();
        while !state.is_finished() {
            state.run_generation().unwrap();
            check_invariants(&state, &tasks);
            let now = state.best_fevs();
            prop_assert!(now.iter().zip(&prev).all(|(n, p)| n <= p));
            prev = now;
        }
    }
}
