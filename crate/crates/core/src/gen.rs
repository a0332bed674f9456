//! Seeded random formulas and finite games.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::games::{conjunction, disjunction, end_game, Game, ParamScope, Parameter, Player};
use crate::logic::{Formula, Predicate, SecondOrderVar, Sign, Term, ADD, EQ, LE, LT, MUL, SUB, SUCC};

const FIRST_ORDER: [&str; 4] = ["x", "y", "z", "w"];

/// The second-order variables used by the generators, one arity per name.
pub fn second_order_vars() -> [SecondOrderVar; 2] {
    [SecondOrderVar::new("X", 1), SecondOrderVar::new("Y", 2)]
}

pub fn random_term<R: Rng>(rng: &mut R, depth: usize, vars: &[&str], max_const: u64) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.45);
    if leaf {
        if !vars.is_empty() && rng.gen_bool(0.5) {
            return Term::var(*vars.choose(rng).expect("nonempty"));
        }
        return Term::Const(rng.gen_range(0..max_const));
    }
    let sub = |rng: &mut R| random_term(rng, depth - 1, vars, max_const);
    match rng.gen_range(0..4) {
        0 => Term::add(sub(rng), sub(rng)),
        1 => Term::mul(sub(rng), sub(rng)),
        2 => Term::apply(SUCC, vec![sub(rng)]),
        _ => Term::apply(SUB, vec![sub(rng), sub(rng)]),
    }
}

fn sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

fn random_atom<R: Rng>(rng: &mut R, vars: &[&str]) -> Formula {
    let t = |rng: &mut R| random_term(rng, 2, vars, 10);
    match rng.gen_range(0..6) {
        0 => Formula::Pred { symbol: EQ.into(), sign: sign(rng), args: vec![t(rng), t(rng)] },
        1 => Formula::Pred { symbol: LT.into(), sign: sign(rng), args: vec![t(rng), t(rng)] },
        2 => Formula::Pred { symbol: LE.into(), sign: sign(rng), args: vec![t(rng), t(rng)] },
        3 => {
            if rng.gen_bool(0.5) {
                Formula::truth()
            } else {
                Formula::falsity()
            }
        }
        4 => Formula::Var { var: "X".into(), sign: sign(rng), args: vec![t(rng)] },
        _ => Formula::Var { var: "Y".into(), sign: sign(rng), args: vec![t(rng), t(rng)] },
    }
}

/// A random formula with at most `max_size` nodes, over the first-order
/// variables `x, y, z, w` and the second-order variables `X:1`, `Y:2`.
pub fn random_formula<R: Rng>(rng: &mut R, max_size: usize) -> Formula {
    let budget = rng.gen_range(1..=max_size.max(1));
    formula_of_size(rng, budget, &FIRST_ORDER)
}

fn formula_of_size<R: Rng>(rng: &mut R, size: usize, vars: &[&str]) -> Formula {
    if size <= 1 {
        return random_atom(rng, vars);
    }
    match rng.gen_range(0..8) {
        0 | 1 if size >= 3 => {
            let l = rng.gen_range(1..size - 1);
            let a = formula_of_size(rng, l, vars);
            let b = formula_of_size(rng, size - 1 - l, vars);
            Formula::and(a, b)
        }
        2 | 3 if size >= 3 => {
            let l = rng.gen_range(1..size - 1);
            let a = formula_of_size(rng, l, vars);
            let b = formula_of_size(rng, size - 1 - l, vars);
            Formula::or(a, b)
        }
        4 => Formula::forall(*vars.choose(rng).expect("nonempty"), formula_of_size(rng, size - 1, vars)),
        5 => Formula::exists(*vars.choose(rng).expect("nonempty"), formula_of_size(rng, size - 1, vars)),
        6 => {
            let v = second_order_vars().choose(rng).expect("nonempty").clone();
            Formula::forall2(v, formula_of_size(rng, size - 1, vars))
        }
        7 => {
            let v = second_order_vars().choose(rng).expect("nonempty").clone();
            Formula::exists2(v, formula_of_size(rng, size - 1, vars))
        }
        _ => random_atom(rng, vars),
    }
}

/// A random predicate `λx⃗.B` of the given arity. Its body may mention
/// free first-order variables, which substitution must not capture.
pub fn random_predicate<R: Rng>(rng: &mut R, arity: usize, max_size: usize) -> Predicate {
    let mut vars: Vec<&str> = ["u", "v"].into_iter().take(arity).collect();
    let params: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    vars.extend(["x", "y"]);
    let size = rng.gen_range(1..=max_size.max(1));
    Predicate::new(params, formula_of_size(rng, size, &vars))
}

/// A closed quantifier-free formula over `+`, `×`, `=`, `<` with
/// constants below `max_const` and at most `max_atoms` atoms.
pub fn random_closed_qf<R: Rng>(rng: &mut R, max_atoms: usize, max_const: u64) -> Formula {
    let atoms = rng.gen_range(1..=max_atoms.max(1));
    qf_of(rng, atoms, max_const)
}

fn qf_term<R: Rng>(rng: &mut R, depth: usize, max_const: u64) -> Term {
    if depth == 0 || rng.gen_bool(0.5) {
        return Term::Const(rng.gen_range(0..max_const));
    }
    let a = qf_term(rng, depth - 1, max_const);
    let b = qf_term(rng, depth - 1, max_const);
    if rng.gen_bool(0.5) {
        Term::apply(ADD, vec![a, b])
    } else {
        Term::apply(MUL, vec![a, b])
    }
}

fn qf_of<R: Rng>(rng: &mut R, atoms: usize, max_const: u64) -> Formula {
    if atoms == 1 {
        let symbol = if rng.gen_bool(0.5) { EQ } else { LT };
        let args = vec![qf_term(rng, 2, max_const), qf_term(rng, 2, max_const)];
        return Formula::Pred { symbol: symbol.into(), sign: sign(rng), args };
    }
    let l = rng.gen_range(1..atoms);
    let a = qf_of(rng, l, max_const);
    let b = qf_of(rng, atoms - l, max_const);
    if rng.gen_bool(0.5) {
        Formula::and(a, b)
    } else {
        Formula::or(a, b)
    }
}

/// A random finite game of depth at most `depth` whose inner nodes have
/// between 1 and `branching` children. Leaves are labelled by players or
/// by the given parameters in either orientation.
pub fn random_game<R: Rng>(rng: &mut R, depth: usize, branching: usize, params: &[Parameter]) -> Game {
    if depth == 0 || rng.gen_bool(0.35) {
        let k = rng.gen_range(0..2 + 2 * params.len());
        return match k {
            0 => end_game(Player::P),
            1 => end_game(Player::O),
            k => {
                let a = &params[(k - 2) / 2];
                end_game(if k % 2 == 0 { a.clone() } else { a.dual() })
            }
        };
    }
    let n = rng.gen_range(1..=branching.max(1));
    let children = (0..n).map(|_| random_game(rng, depth - 1, branching, params)).collect();
    if rng.gen_bool(0.5) {
        disjunction(children)
    } else {
        conjunction(children)
    }
}

/// A random instance `(Γ, I)` with at most `max_games` components and at
/// most `max_pairs` pairs `a, a⊥` in `I`.
pub fn random_forall_instance<R: Rng>(
    rng: &mut R,
    max_games: usize,
    depth: usize,
    branching: usize,
    max_pairs: usize,
) -> (Vec<Game>, ParamScope) {
    let pairs = rng.gen_range(0..=max_pairs);
    let params: Vec<Parameter> = (0..pairs as u64).map(|k| Parameter::positive("X", vec![k])).collect();
    let n = rng.gen_range(0..=max_games);
    let gamma = (0..n).map(|_| random_game(rng, depth, branching, &params)).collect();
    (gamma, ParamScope::atoms(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic() {
        let a = random_formula(&mut ChaCha8Rng::seed_from_u64(7), 40);
        let b = random_formula(&mut ChaCha8Rng::seed_from_u64(7), 40);
        assert_eq!(a, b);
    }

    #[test]
    fn sizes_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            assert!(random_formula(&mut rng, 40).size() <= 40);
            let qf = random_closed_qf(&mut rng, 6, 20);
            assert!(qf.is_quantifier_free() && qf.free_variables().first_order.is_empty());
        }
    }
}
