//! Fixed inputs for the benchmarks.

use pa2_core::games::{Game, ParamScope};
use pa2_core::gen;
use pa2_core::logic::{Formula, Registry, Sequent};
use pa2_core::parser::render_formula;
use pa2_core::semantics::interpret_sequent;
use pa2_core::suites::forall_instances;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 7;

/// Interpreted sequents of closed quantifier-free formulas.
pub fn tarski_games(count: usize) -> Vec<Game> {
    let reg = Registry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count)
        .map(|_| {
            let a = gen::random_closed_qf(&mut rng, 6, 20);
            interpret_sequent(&Sequent::new(vec![a]), &reg).expect("closed")
        })
        .collect()
}

pub fn forall_cases(count: usize) -> Vec<(Vec<Game>, ParamScope)> {
    forall_instances(SEED, count)
}

/// Rendered random formulas of size at most 40.
pub fn formula_texts(count: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count).map(|_| render_formula(&random_formula(&mut rng))).collect()
}

/// Runs `f` on every case, keeping each result observable.
pub fn for_each_case<T, R>(cases: &[T], mut f: impl FnMut(&T) -> R) {
    for c in cases {
        std::hint::black_box(f(c));
    }
}

fn random_formula(rng: &mut ChaCha8Rng) -> Formula {
    gen::random_formula(rng, 40)
}
