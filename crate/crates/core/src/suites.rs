//! The acceptance properties as seeded suites, shared by the `acceptance`
//! test target and `pa2 verify`.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{
    exh_verdict, minimax_winner, run_play, theorem_forall_check, Budget, EngineError,
    ScriptedOracle, StallPolicy, Verdict,
};
use crate::forall::{forall_game, PlayOutcome, Reason};
use crate::games::{end_game, Game, Move, ParamAssignment, ParamScope, Parameter, Player};
use crate::gen;
use crate::logic::{Formula, Registry, SecondOrderVar, Sequent};
use crate::parser::{parse_formula, render_formula};
use crate::semantics::{eval_truth, interpret_formula, interpret_sequent, Environment, TruthValue};
use crate::strategy::{validate_strategy, ExhStrategy, StrategyKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Duality,
    Tarski,
    ExhTraces,
    TheoremForall,
    Exhaustive,
    Sigma01,
    RoundTrip,
    Determinacy,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Duality,
        Suite::Tarski,
        Suite::ExhTraces,
        Suite::TheoremForall,
        Suite::Exhaustive,
        Suite::Sigma01,
        Suite::RoundTrip,
        Suite::Determinacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Tarski => "tarski",
            Suite::ExhTraces => "exh-traces",
            Suite::TheoremForall => "theorem-forall",
            Suite::Exhaustive => "exhaustive",
            Suite::Sigma01 => "sigma01",
            Suite::RoundTrip => "roundtrip",
            Suite::Determinacy => "determinacy",
        }
    }

    pub fn number(self) -> usize {
        Suite::ALL.iter().position(|s| *s == self).expect("listed") + 1
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Number of random cases run by default; fixed suites ignore it.
    pub fn default_count(self) -> usize {
        match self {
            Suite::Duality | Suite::RoundTrip => 1000,
            Suite::Tarski => 200,
            Suite::TheoremForall | Suite::Exhaustive | Suite::Determinacy => 100,
            Suite::ExhTraces | Suite::Sigma01 => 1,
        }
    }

    /// Wall-clock limit, where the property has one.
    pub fn time_limit(self) -> Option<Duration> {
        match self {
            Suite::Duality | Suite::RoundTrip => Some(Duration::from_secs(2)),
            Suite::Tarski => Some(Duration::from_secs(10)),
            Suite::ExhTraces => Some(Duration::from_secs(1)),
            Suite::TheoremForall => Some(Duration::from_secs(60)),
            _ => None,
        }
    }

    pub fn run(self, seed: u64, count: usize) -> SuiteReport {
        let start = Instant::now();
        let mut r = Recorder::default();
        match self {
            Suite::Duality => duality(&mut r, seed, count),
            Suite::Tarski => tarski(&mut r, seed, count),
            Suite::ExhTraces => exh_traces(&mut r),
            Suite::TheoremForall => theorem(&mut r, seed, count),
            Suite::Exhaustive => exhaustive(&mut r, seed, count),
            Suite::Sigma01 => sigma01(&mut r),
            Suite::RoundTrip => round_trip(&mut r, seed, count),
            Suite::Determinacy => determinacy(&mut r, seed, count),
        }
        SuiteReport {
            suite: self,
            checks: r.checks,
            failures: r.failures,
            failure_count: r.failure_count,
            elapsed: start.elapsed(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failure_count: usize,
    /// The first few failures, described.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn within_time(&self) -> bool {
        self.suite.time_limit().is_none_or(|t| self.elapsed < t)
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.checks > 0 && self.within_time()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {}: {} ({}/{} checks passed, {:.3} s",
            self.suite.number(),
            self.suite.name(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks - self.failure_count,
            self.checks,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(t) = self.suite.time_limit() {
            write!(f, ", limit {} s", t.as_secs())?;
        }
        f.write_str(")")?;
        for fail in &self.failures {
            write!(f, "\n  {fail}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Recorder {
    checks: usize,
    failure_count: usize,
    failures: Vec<String>,
}

impl Recorder {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }
}

fn case_rng(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn duality(r: &mut Recorder, seed: u64, count: usize) {
    for k in 0..count {
        let mut rng = case_rng(seed, k);
        let a = gen::random_formula(&mut rng, 40);
        r.check(a.dual().dual() == a, || format!("dual is not involutive on {}", render_formula(&a)));
        let vars = gen::second_order_vars();
        let v: SecondOrderVar = vars[rng.gen_range(0..vars.len())].clone();
        let p = gen::random_predicate(&mut rng, v.arity, 8);
        let left = a.dual().substitute_predicates(std::slice::from_ref(&p), std::slice::from_ref(&v));
        let right = a.substitute_predicates(&[p], &[v]).map(|b| b.dual());
        r.check(left.is_ok() && left == right, || {
            format!("second-order substitution does not commute with dual on {}", render_formula(&a))
        });
        let t = gen::random_term(&mut rng, 2, &["x", "y", "z"], 10);
        let x = ["x", "y", "z", "w"][rng.gen_range(0..4)].to_string();
        let left = a.dual().substitute_terms(std::slice::from_ref(&t), std::slice::from_ref(&x));
        let right = a.substitute_terms(&[t], &[x]).map(|b| b.dual());
        r.check(left.is_ok() && left == right, || {
            format!("term substitution does not commute with dual on {}", render_formula(&a))
        });
    }
}

fn tarski(r: &mut Recorder, seed: u64, count: usize) {
    let reg = Registry::standard();
    let rho = ParamAssignment::empty();
    for k in 0..count {
        let mut rng = case_rng(seed, k);
        let a = gen::random_closed_qf(&mut rng, 6, 20);
        let truth = eval_truth(&a, &Environment::empty(), 0, &reg).ok().and_then(TruthValue::player);
        let game = interpret_sequent(&Sequent::new(vec![a.clone()]), &reg);
        let verdict = game.map(|g| minimax_winner(&g, &rho, Budget::default()));
        r.check(truth.is_some() && verdict.as_ref().ok().and_then(Verdict::winner) == truth, || {
            format!("{}: truth {truth:?}, game {verdict:?}", render_formula(&a))
        });
    }
}

fn exh_transcript(game: &Game) -> Result<(Vec<Move>, PlayOutcome), EngineError> {
    let mut p = ExhStrategy::new(game).map_err(|e| EngineError::Usage(e.to_string()))?;
    let mut o = ScriptedOracle::new(vec![]);
    let t = run_play(game, &mut p, &mut o, &ParamAssignment::empty(), Budget::default(), StallPolicy::Error)?;
    Ok((t.moves(), t.outcome))
}

fn exh_traces(r: &mut Recorder) {
    let reg = Registry::standard();
    let x = SecondOrderVar::new("X", 1);
    let a = Parameter::positive("X", vec![0]);
    let em = parse_formula("X(0) | ~X(0)", &reg)
        .ok()
        .and_then(|f| interpret_formula(&f, &reg).ok())
        .expect("fixed formula");
    let cases = [
        (
            "∀Game Var(X).(⟦X(0) | ~X(0)⟧)",
            forall_game(ParamScope::var(x.clone()), vec![em]),
            vec![Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(2), Move::Em(1, 2)],
            PlayOutcome::PlayerWins(Reason::Em),
        ),
        (
            "∀Game Var(X).(END(X(0)))",
            forall_game(ParamScope::var(x), vec![end_game(a)]),
            vec![Move::Drop(1)],
            PlayOutcome::OpponentWins(Reason::Drop),
        ),
        (
            "∀Game ∅.(END(P))",
            forall_game(ParamScope::empty(), vec![end_game(Player::P)]),
            vec![Move::Stop(0)],
            PlayOutcome::PlayerWins(Reason::Stop),
        ),
    ];
    for (name, game, moves, outcome) in cases {
        let got = exh_transcript(&game);
        let ok = matches!(&got, Ok((m, o)) if *m == moves && *o == outcome);
        r.check(ok, || format!("{name}: expected {moves:?} {outcome}, got {got:?}"));
    }
}

/// The random ∀Game instances shared by the theorem, exhaustiveness and
/// determinacy suites.
pub fn forall_instances(seed: u64, count: usize) -> Vec<(Vec<Game>, ParamScope)> {
    (0..count)
        .map(|k| gen::random_forall_instance(&mut case_rng(seed, k), 3, 3, 3, 2))
        .collect()
}

fn theorem(r: &mut Recorder, seed: u64, count: usize) {
    for (k, (gamma, bound)) in forall_instances(seed, count).into_iter().enumerate() {
        let report = theorem_forall_check(&format!("seed {seed} case {k}"), &gamma, &bound, Budget::default());
        r.check(matches!(&report, Ok(rep) if rep.matches), || match report {
            Ok(rep) => rep.to_json_line(),
            Err(e) => format!("case {k}: {e}"),
        });
    }
}

fn exhaustive(r: &mut Recorder, seed: u64, count: usize) {
    for (k, (gamma, bound)) in forall_instances(seed, count).into_iter().enumerate() {
        let host = forall_game(bound, gamma.clone());
        let report = match exh_verdict(&host, Budget::default()) {
            Ok(rep) => rep,
            Err(e) => {
                r.check(false, || format!("case {k}: {e}"));
                continue;
            }
        };
        for play in report.drop_plays() {
            let pos = &play.position;
            let h = || format!("case {k}, play {:?}", pos.history());
            r.check(pos.is_non_repeating(), || format!("{}: repeats a move", h()));
            r.check(pos.is_em_forbidding(), || format!("{}: not EM-forbidding", h()));
            let Ok(eta) = pos.worst_case_assignment() else {
                r.check(false, || format!("{}: no worst-case assignment", h()));
                continue;
            };
            for (i, g) in gamma.iter().enumerate() {
                let ok = pos.counter_strategy(i).ok().is_some_and(|tau| {
                    [StrategyKind::Total, StrategyKind::PartiallyWinning]
                        .iter()
                        .all(|kind| validate_strategy(&tau, g, Player::O, *kind, &eta) == Ok(true))
                });
                r.check(ok, || format!("{}: counter-strategy on local {i} fails", h()));
            }
        }
    }
}

fn sigma01(r: &mut Recorder) {
    let reg = Registry::standard();
    let sequent = |src: &str| -> Game {
        let f = parse_formula(src, &reg).expect("fixed formula");
        interpret_sequent(&Sequent::new(vec![f]), &reg).expect("closed formula")
    };
    let witness = exh_verdict(&sequent("exists x. x + 2 = 5"), Budget::default().with_moves(20));
    let ok = matches!(&witness, Ok(rep) if rep.verdict == Verdict::PlayerWinning
        && rep.plays.len() == 1
        && rep.plays[0].history().len() <= 20
        && matches!(rep.plays[0].history().last(), Some(Move::Stop(_))));
    r.check(ok, || format!("exists x. x + 2 = 5: {:?}", witness.map(|w| w.verdict)));
    let none = exh_verdict(&sequent("exists x. x + x = 5"), Budget::default().with_moves(200));
    r.check(
        matches!(&none, Ok(rep) if rep.verdict == Verdict::Undetermined(crate::engine::Resource::Moves)),
        || format!("exists x. x + x = 5: {:?}", none.map(|w| w.verdict)),
    );
    let f = parse_formula("exists x. x + x = 5", &reg).expect("fixed formula");
    let truth = eval_truth(&f, &Environment::empty(), 100, &reg);
    r.check(truth == Ok(TruthValue::Unknown), || format!("eval_truth at budget 100: {truth:?}"));
    let Formula::Exists(x, body) = &f else { unreachable!("parsed an existential") };
    let all_false = (0..=100).all(|n| {
        eval_truth(&body.instantiate(x, n), &Environment::empty(), 0, &reg) == Ok(TruthValue::False)
    });
    r.check(all_false, || "some instance of x + x = 5 is not False".into());
}

fn round_trip(r: &mut Recorder, seed: u64, count: usize) {
    let reg = Registry::standard();
    for k in 0..count {
        let a = gen::random_formula(&mut case_rng(seed, k), 40);
        let text = render_formula(&a);
        let back = parse_formula(&text, &reg);
        r.check(back.as_ref() == Ok(&a), || format!("{text}: {back:?}"));
    }
}

fn determinacy(r: &mut Recorder, seed: u64, count: usize) {
    let budget = Budget::default();
    for (k, (gamma, bound)) in forall_instances(seed, count).into_iter().enumerate() {
        let host = forall_game(bound.clone(), gamma.clone());
        let lhs = theorem_forall_check("determinacy", &gamma, &bound, budget);
        let search = minimax_winner(&host, &ParamAssignment::empty(), budget);
        let ok = matches!(&lhs, Ok(rep) if rep.lhs.is_definite() && rep.rhs.is_definite() && rep.lhs == search);
        r.check(ok, || format!("case {k}: {lhs:?}, host search {search}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::Determinacy.number(), 8);
    }

    #[test]
    fn fixed_suites_pass() {
        assert!(Suite::ExhTraces.run(0, 1).passed());
        assert!(Suite::Sigma01.run(0, 1).passed());
    }
}
