//! The eight acceptance criteria, one test and one report line each.

use pa2_core::suites::Suite;

const SEED: u64 = 2024;

fn criterion(s: Suite) {
    let r = s.run(SEED, s.default_count());
    println!("{r}");
    assert!(r.passed(), "{r}");
}

macro_rules! criteria {
    ($($name:ident => $suite:ident),* $(,)?) => {
        $(#[test]
        fn $name() {
            criterion(Suite::$suite);
        })*
    };
}

criteria! {
    criterion_1_duality => Duality,
    criterion_2_tarski => Tarski,
    criterion_3_exh_traces => ExhTraces,
    criterion_4_theorem_forall => TheoremForall,
    criterion_5_exhaustive => Exhaustive,
    criterion_6_sigma01 => Sigma01,
    criterion_7_roundtrip => RoundTrip,
    criterion_8_determinacy => Determinacy,
}
