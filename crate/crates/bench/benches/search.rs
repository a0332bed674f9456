use criterion::{criterion_group, criterion_main, Criterion};

use pa2_bench::{for_each_case, forall_cases, formula_texts, tarski_games};
use pa2_core::engine::{exh_verdict, minimax_winner, theorem_forall_check, Budget};
use pa2_core::forall::forall_game;
use pa2_core::games::ParamAssignment;
use pa2_core::logic::Registry;
use pa2_core::parser::parse_formula;

fn tarski(c: &mut Criterion) {
    let games = tarski_games(50);
    let rho = ParamAssignment::empty();
    c.bench_function("minimax/tarski-50", |b| {
        b.iter(|| for_each_case(&games, |g| minimax_winner(g, &rho, Budget::default())))
    });
}

fn forall(c: &mut Criterion) {
    let cases = forall_cases(20);
    let hosts: Vec<_> = cases.iter().map(|(g, i)| forall_game(i.clone(), g.clone())).collect();
    let rho = ParamAssignment::empty();
    c.bench_function("exh_verdict/forall-20", |b| {
        b.iter(|| for_each_case(&hosts, |h| exh_verdict(h, Budget::default()).map(|r| r.verdict)))
    });
    c.bench_function("theorem_check/forall-20", |b| {
        b.iter(|| for_each_case(&cases, |(g, i)| theorem_forall_check("bench", g, i, Budget::default()).is_ok()))
    });
    let mut group = c.benchmark_group("minimax/host");
    group.sample_size(10);
    group.bench_function("forall-20", |b| {
        b.iter(|| for_each_case(&hosts, |h| minimax_winner(h, &rho, Budget::default())))
    });
    group.finish();
}

fn parse(c: &mut Criterion) {
    let texts = formula_texts(200);
    let reg = Registry::standard();
    c.bench_function("parse/random-200", |b| {
        b.iter(|| for_each_case(&texts, |t| parse_formula(t, &reg).is_ok()))
    });
}

criterion_group!(benches, tarski, forall, parse);
criterion_main!(benches);
