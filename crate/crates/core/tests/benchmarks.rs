use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use samtpso::benchmarks::{build_suite, BaseFn, DataSource, SuiteId};
use samtpso::problem::Objective;

#[test]
fn every_suite_task_is_nonnegative_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for suite in [SuiteId::Suite1, SuiteId::Suite2] {
        let spec = build_suite(suite, DataSource::GeneratedSeeded(77)).unwrap();
        for (p, problem) in spec.problems.iter().enumerate() {
            for (t, task) in problem.tasks.iter().enumerate() {
                assert_eq!(task.evaluate(&task.unified_optimum()), 0.0, "{suite} problem {} task {t}", p + 1);
                let mut x = vec![0.0; problem.unified_dim];
                for _ in 0..10_000 {
                    x.iter_mut().for_each(|v| *v = rng.random());
                    let f = task.evaluate(&x);
                    assert!(f.is_finite() && f >= 0.0, "{suite} problem {} task {t}: {f}", p + 1);
                    if task.base_fn == BaseFn::Sphere {
                        assert!(f > 0.0);
                    }
                }
            }
        }
    }
}
