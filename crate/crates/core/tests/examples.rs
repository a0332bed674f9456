//! Small worked instances across the public surface, with frozen answers.

use pa2_core::engine::{
    exh_verdict, minimax_winner, run_play, theorem_forall_check, Budget, EngineError, ScriptedOracle,
    StallPolicy, Verdict,
};
use pa2_core::forall::{forall_game, PlayOutcome, Reason};
use pa2_core::games::{
    apply_assignment, conjunction, disjunction, dual_game, end_game, games_equivalent, subgame,
    Label, Move, NodeKind, ParamAssignment, ParamScope, Parameter, Player,
};
use pa2_core::logic::{Formula, Registry, SecondOrderVar, Sequent};
use pa2_core::parser::{parse_formula, parse_sequent, render_formula, render_sequent};
use pa2_core::semantics::{
    corresponding_param_assignment, eval_truth, interpret_formula, interpret_sequent, Environment,
    TruthValue,
};
use pa2_core::strategy::{validate_strategy, ExhStrategy, StrategyKind, StrategyTree};

fn reg() -> Registry {
    Registry::standard()
}

fn formula(src: &str) -> Formula {
    parse_formula(src, &reg()).unwrap()
}

fn a() -> Parameter {
    Parameter::positive("X", vec![0])
}

fn pair() -> ParamScope {
    ParamScope::atoms([a()])
}

fn exh(game: &pa2_core::games::Game) -> (Vec<Move>, PlayOutcome) {
    let mut p = ExhStrategy::new(game).unwrap();
    let mut o = ScriptedOracle::new(vec![]);
    let t = run_play(game, &mut p, &mut o, &ParamAssignment::empty(), Budget::default(), StallPolicy::Error)
        .unwrap();
    (t.moves(), t.outcome)
}

#[test]
fn implication_is_sugar() {
    assert_eq!(formula("0 = 1 -> 1 < 2"), formula("~0 = 1 | 1 < 2"));
    assert_eq!(render_formula(&formula("True").dual()), "False");
}

#[test]
fn sequents_of_one_formula_are_not_the_formula() {
    let s = parse_sequent("Forall X:1. X(0)", &reg()).unwrap();
    assert_eq!(s.formulas.len(), 1);
    assert_eq!(render_sequent(&parse_sequent("", &reg()).unwrap()), "");
    let f = interpret_formula(&s.formulas[0], &reg()).unwrap();
    let g = interpret_sequent(&s, &reg()).unwrap();
    assert!(!games_equivalent(&f, &g, 3, 3));
}

#[test]
fn evaluation() {
    let r = reg();
    let e = Environment::empty();
    assert_eq!(eval_truth(&formula("2 + 2 = 5"), &e, 7, &r).unwrap(), TruthValue::False);
    assert_eq!(eval_truth(&formula("exists x. x + 2 = 5"), &e, 10, &r).unwrap(), TruthValue::True);
    assert_eq!(eval_truth(&formula("forall x. x + 0 = x"), &e, 10, &r).unwrap(), TruthValue::Unknown);
}

#[test]
fn even_numbers_as_an_assignment() {
    let x = SecondOrderVar::new("X", 1);
    let theta = Environment::empty().with_set(x, |n| n[0] % 2 == 0);
    let rho = corresponding_param_assignment(&theta, &formula("X(4)")).unwrap();
    let four = Parameter::positive("X", vec![4]);
    assert_eq!(rho.lookup(&four), Some(Player::P));
    assert_eq!(rho.lookup(&four.dual()), Some(Player::O));
    assert_eq!(rho.lookup(&Parameter::positive("X", vec![3])), Some(Player::O));
}

#[test]
fn interpreting_atoms_and_connectives() {
    let r = reg();
    assert_eq!(interpret_formula(&formula("True"), &r).unwrap().label(), Some(Label::Player(Player::P)));
    assert_eq!(interpret_formula(&formula("X(0)"), &r).unwrap().label(), Some(Label::Param(a())));
    let g = interpret_formula(&formula("2 < 3 | 5 = 4"), &r).unwrap();
    let expected = disjunction(vec![end_game(Player::P), end_game(Player::O)]);
    assert!(games_equivalent(&g, &expected, 3, 3));
}

#[test]
fn sequent_games_at_the_root() {
    let r = reg();
    let empty = interpret_sequent(&Sequent::default(), &r).unwrap();
    assert_eq!(empty.moves().collect::<Vec<_>>(), vec![Move::Drop(0)]);
    let truth = interpret_sequent(&Sequent::new(vec![formula("True")]), &r).unwrap();
    let won = truth.play(&Move::Stop(0)).unwrap();
    assert_eq!(won.label(), Some(Label::Player(Player::P)));
}

#[test]
fn game_constructors() {
    assert_eq!(disjunction(vec![]).label(), Some(Label::Player(Player::O)));
    assert_eq!(conjunction(vec![]).label(), Some(Label::Player(Player::P)));
    assert_eq!(dual_game(&end_game(a())).label(), Some(Label::Param(a().dual())));
    let g = disjunction(vec![end_game(Player::O), end_game(a())]);
    assert!(games_equivalent(&subgame(&g, &[]).unwrap(), &g, 3, 3));
    assert_eq!(subgame(&g, &[Move::Nth(1)]).unwrap().label(), Some(Label::Player(Player::O)));
    assert!(subgame(&g, &[Move::Nth(3)]).is_err());
    let rho = ParamAssignment::empty().with(&a(), Player::P);
    assert_eq!(apply_assignment(&rho, &end_game(a())).unwrap().label(), Some(Label::Player(Player::P)));
}

#[test]
fn forall_game_roots() {
    let empty = forall_game(ParamScope::empty(), vec![]);
    assert_eq!(empty.moves().collect::<Vec<_>>(), vec![Move::Drop(0)]);
    assert_eq!(empty.play(&Move::Drop(0)).unwrap().label(), Some(Label::Player(Player::O)));
    let em = forall_game(pair(), vec![end_game(a()), end_game(a().dual())]);
    assert_eq!(em.play(&Move::Em(0, 1)).unwrap().label(), Some(Label::Player(Player::P)));
}

#[test]
fn justified_moves_extend_the_locals() {
    let ab = disjunction(vec![end_game(Player::P), end_game(Player::O)]);
    let g = forall_game(ParamScope::empty(), vec![ab]);
    let pos = g.forall_position().unwrap().replay(&[Move::Just(0, 1), Move::Nth(1)]).unwrap();
    assert_eq!(pos.local_count(), 2);
    assert_eq!(pos.local(1).unwrap().label(), Some(Label::Player(Player::P)));
}

#[test]
fn repetition_and_em_forbidding() {
    let g = forall_game(ParamScope::empty(), vec![conjunction(vec![end_game(Player::P), end_game(Player::O)])]);
    let root = g.forall_position().unwrap();
    let rep = root.replay(&[Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(1)]).unwrap();
    assert!(!rep.is_non_repeating());
    let fresh = root.replay(&[Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(2)]).unwrap();
    assert!(fresh.is_non_repeating());

    let dual_pair = forall_game(pair(), vec![end_game(a()), end_game(a().dual())]);
    assert!(!dual_pair.forall_position().unwrap().is_em_forbidding());
    let b = Parameter::positive("X", vec![1]);
    let apart = forall_game(ParamScope::atoms([a(), b.clone()]), vec![end_game(a()), end_game(b)]);
    assert!(apart.forall_position().unwrap().is_em_forbidding());
}

#[test]
fn worst_case_assignment_gives_everything_to_opponent() {
    let g = forall_game(ParamScope::atoms([a(), Parameter::positive("X", vec![1])]), vec![end_game(a())]);
    let eta = g.forall_position().unwrap().worst_case_assignment().unwrap();
    assert_eq!(eta.lookup(&a()), Some(Player::O));
    assert_eq!(eta.lookup(&a().dual()), Some(Player::P));
    assert_eq!(eta.lookup(&Parameter::positive("X", vec![1])), Some(Player::O));
}

#[test]
fn validating_small_strategies() {
    let rho = ParamAssignment::empty();
    let nil = StrategyTree::atomic();
    let pw = StrategyKind::PartiallyWinning;
    assert_eq!(validate_strategy(&nil, &end_game(Player::P), Player::P, pw, &rho), Ok(true));
    assert_eq!(validate_strategy(&nil, &end_game(Player::O), Player::P, pw, &rho), Ok(false));
    let g = disjunction(vec![end_game(Player::O), end_game(Player::P)]);
    let sigma = StrategyTree::from_paths([vec![], vec![Move::Nth(2)]]).unwrap();
    assert_eq!(validate_strategy(&sigma, &g, Player::P, StrategyKind::Winning, &rho), Ok(true));
}

#[test]
fn exh_hand_traces() {
    let x = SecondOrderVar::new("X", 1);
    let em = interpret_formula(&formula("X(0) | ~X(0)"), &reg()).unwrap();
    assert_eq!(
        exh(&forall_game(ParamScope::var(x.clone()), vec![em])),
        (
            vec![Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(2), Move::Em(1, 2)],
            PlayOutcome::PlayerWins(Reason::Em)
        )
    );
    assert_eq!(
        exh(&forall_game(pair(), vec![end_game(a())])),
        (vec![Move::Drop(1)], PlayOutcome::OpponentWins(Reason::Drop))
    );
    assert_eq!(
        exh(&forall_game(ParamScope::empty(), vec![end_game(Player::P)])),
        (vec![Move::Stop(0)], PlayOutcome::PlayerWins(Reason::Stop))
    );
    assert_eq!(
        exh(&forall_game(ParamScope::empty(), vec![])),
        (vec![Move::Drop(0)], PlayOutcome::OpponentWins(Reason::Drop))
    );
}

#[test]
fn exh_enters_a_true_disjunction() {
    let s = Sequent::new(vec![formula("2 < 3 | 5 = 4")]);
    let (moves, outcome) = exh(&interpret_sequent(&s, &reg()).unwrap());
    // Local 1 is only inspected on the next cycle, after NTH(2) has been tried on local 0.
    assert_eq!(moves, vec![Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(2), Move::Stop(1)]);
    assert_eq!(outcome, PlayOutcome::PlayerWins(Reason::Stop));
}

#[test]
fn stalled_opponent_follows_the_policy() {
    let g = forall_game(ParamScope::empty(), vec![conjunction(vec![end_game(Player::P)])]);
    let rho = ParamAssignment::empty();
    let mut o = ScriptedOracle::new(vec![]);
    let err = run_play(&g, &mut ExhStrategy::new(&g).unwrap(), &mut o, &rho, Budget::default(), StallPolicy::Error);
    assert!(matches!(err, Err(EngineError::Stalled { player: Player::O, moves: 1, .. })));
    let mut o = ScriptedOracle::new(vec![]);
    let t = run_play(&g, &mut ExhStrategy::new(&g).unwrap(), &mut o, &rho, Budget::default(), StallPolicy::BudgetExhausted)
        .unwrap();
    assert_eq!(t.outcome, PlayOutcome::BudgetExhausted);
}

#[test]
fn solving_small_instances() {
    let rho = ParamAssignment::empty();
    let b = Budget::default();
    assert_eq!(minimax_winner(&end_game(Player::O), &rho, b), Verdict::OpponentWinning);
    let em = forall_game(pair(), vec![end_game(a()), end_game(a().dual())]);
    let drop = forall_game(pair(), vec![end_game(a())]);
    assert_eq!(minimax_winner(&em, &rho, b), Verdict::PlayerWinning);
    assert_eq!(minimax_winner(&drop, &rho, b), Verdict::OpponentWinning);
    assert_eq!(exh_verdict(&em, b).unwrap().verdict, Verdict::PlayerWinning);
    assert_eq!(exh_verdict(&drop, b).unwrap().verdict, Verdict::OpponentWinning);
    assert!(matches!(run_play(&end_game(Player::P), &mut ScriptedOracle::new(vec![]), &mut ScriptedOracle::new(vec![]), &rho, b, StallPolicy::Error),
        Ok(t) if t.outcome == PlayOutcome::PlayerWins(Reason::Leaf)));
}

#[test]
fn theorem_on_fixed_instances() {
    let b = Budget::default();
    let cases = [
        (vec![end_game(a()), end_game(a().dual())], pair(), Verdict::PlayerWinning),
        (vec![end_game(a())], pair(), Verdict::OpponentWinning),
        (vec![conjunction(vec![end_game(Player::P), end_game(Player::O)])], ParamScope::empty(), Verdict::OpponentWinning),
    ];
    for (gamma, bound, expected) in cases {
        let r = theorem_forall_check("fixed", &gamma, &bound, b).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.matches), (expected.clone(), expected, true));
    }
    let r = theorem_forall_check("drop", &[end_game(a())], &pair(), b).unwrap();
    let eta = r.counterexample.unwrap();
    assert_eq!(eta.get("X(0)").map(String::as_str), Some("O"));
}

#[test]
fn leaves_and_inner_nodes() {
    assert!(matches!(end_game(Player::P).kind(), NodeKind::Leaf(_)));
    assert!(matches!(conjunction(vec![end_game(Player::P)]).kind(), NodeKind::Inner(Player::O)));
}
