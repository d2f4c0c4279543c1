//! Base functions, shifted/rotated tasks and the two benchmark suites.

mod functions;
mod rotation;
mod suite;

pub use functions::{
    ackley, base_eval, griewank, rastrigin, rosenbrock, schwefel, sphere, weierstrass, BaseFn,
    SCHWEFEL_OPTIMUM,
};
pub use rotation::Rotation;
pub use suite::{
    build_suite, generate_problem, load_problem_file, make_task, make_task_at, parse_problem,
    problem_to_json, suite1_intersection, DataSource, Intersection, SuiteId, SuiteSpec,
};
