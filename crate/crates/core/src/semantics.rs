//! Budgeted Tarski truth, the game interpretation `⟦·⟧`, and the
//! correspondence between environments and parameter assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::forall::forall_game;
use crate::games::{
    conjunction, conjunction_over_naturals, dual_game, end_game, Coverage, Game, ParamAssignment,
    ParamScope, Parameter, Player,
};
use crate::logic::{Formula, LogicError, Registry, SecondOrderVar, Sequent, Sign, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error("formula has free first-order variable(s): {0}")]
    NotOneClosed(String),
}

type SetEval = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;

/// `θ`: values for first-order variables and characteristic functions for
/// second-order variables. Only positive orientations are stored.
#[derive(Clone, Default)]
pub struct Environment {
    first: BTreeMap<String, u64>,
    second: BTreeMap<SecondOrderVar, SetEval>,
}

impl fmt::Debug for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Environment")
            .field("first", &self.first)
            .field("second", &self.second.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Environment {
    pub fn empty() -> Self {
        Environment::default()
    }

    pub fn with(mut self, x: impl Into<String>, n: u64) -> Self {
        self.first.insert(x.into(), n);
        self
    }

    pub fn with_set(
        mut self,
        var: SecondOrderVar,
        eval: impl Fn(&[u64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.second.insert(var, Arc::new(eval));
        self
    }

    pub fn value(&self, x: &str) -> Option<u64> {
        self.first.get(x).copied()
    }

    /// `θ(X)(n⃗)`, or `θ(X⊥)(n⃗)` for a negative sign.
    pub fn holds(&self, var: &SecondOrderVar, sign: Sign, args: &[u64]) -> Option<bool> {
        let v = (self.second.get(var)?)(args);
        Some(match sign {
            Sign::Pos => v,
            Sign::Neg => !v,
        })
    }

    /// Over-writing `(θ, ψ)`: `other` wins wherever it is defined.
    pub fn overwrite(&self, other: &Environment) -> Environment {
        let mut out = self.clone();
        out.first.extend(other.first.iter().map(|(k, v)| (k.clone(), *v)));
        out.second.extend(other.second.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    fn missing(&self, a: &Formula) -> Option<LogicError> {
        let fv = a.free_variables();
        if let Some(x) = fv.first_order.iter().find(|x| !self.first.contains_key(*x)) {
            return Some(LogicError::UnboundVariable(x.clone()));
        }
        fv.second_order
            .iter()
            .find(|v| !self.second.contains_key(*v))
            .map(|v| LogicError::UnboundSecondOrder(v.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl TruthValue {
    pub fn dual(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        match (self, other) {
            (TruthValue::False, _) | (_, TruthValue::False) => TruthValue::False,
            (TruthValue::True, TruthValue::True) => TruthValue::True,
            _ => TruthValue::Unknown,
        }
    }

    pub fn from_bool(b: bool) -> TruthValue {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    /// `True ↦ P`, `False ↦ O`.
    pub fn player(self) -> Option<Player> {
        match self {
            TruthValue::True => Some(Player::P),
            TruthValue::False => Some(Player::O),
            TruthValue::Unknown => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "True",
            TruthValue::False => "False",
            TruthValue::Unknown => "Unknown",
        })
    }
}

pub fn eval_term(t: &Term, theta: &Environment, registry: &Registry) -> Result<u64, SemanticsError> {
    Ok(registry.eval_term_with(t, &|x| {
        theta.value(x).ok_or_else(|| LogicError::UnboundVariable(x.to_string()))
    })?)
}

/// `[A]_θ` approximated with `budget`: a first-order quantifier is decided
/// only by a counterexample (for `∀`) or a witness (for `∃`) among
/// `c_0 … c_budget`, and otherwise is `Unknown`.
pub fn eval_truth(
    a: &Formula,
    theta: &Environment,
    budget: u64,
    registry: &Registry,
) -> Result<TruthValue, SemanticsError> {
    if let Some(e) = theta.missing(a) {
        return Err(e.into());
    }
    truth(a, theta, budget, registry)
}

fn truth(
    a: &Formula,
    theta: &Environment,
    budget: u64,
    registry: &Registry,
) -> Result<TruthValue, SemanticsError> {
    if a.is_disjunctive() {
        return Ok(truth(&a.dual(), theta, budget, registry)?.dual());
    }
    Ok(match a {
        Formula::Pred { symbol, sign, args } => {
            let vals = eval_args(args, theta, registry)?;
            TruthValue::from_bool(registry.eval_predicate(symbol, *sign, &vals)?)
        }
        Formula::Var { var, sign, args } => {
            let vals = eval_args(args, theta, registry)?;
            let v = SecondOrderVar::new(var.clone(), args.len());
            let b = theta
                .holds(&v, *sign, &vals)
                .ok_or_else(|| LogicError::UnboundSecondOrder(v.to_string()))?;
            TruthValue::from_bool(b)
        }
        Formula::And(l, r) => {
            let lv = truth(l, theta, budget, registry)?;
            if lv == TruthValue::False {
                return Ok(lv);
            }
            lv.and(truth(r, theta, budget, registry)?)
        }
        Formula::Forall(x, body) => {
            if !body.free_variables().first_order.contains(x) {
                return truth(body, theta, budget, registry);
            }
            for n in 0..=budget {
                let v = truth(body, &theta.clone().with(x.clone(), n), budget, registry)?;
                if v == TruthValue::False {
                    return Ok(TruthValue::False);
                }
            }
            TruthValue::Unknown
        }
        Formula::Forall2(v, body) => {
            if !body.free_variables().second_order.contains(v) {
                return truth(body, theta, budget, registry);
            }
            TruthValue::Unknown
        }
        Formula::Or(..) | Formula::Exists(..) | Formula::Exists2(..) => {
            unreachable!("disjunctive formulas are evaluated through their dual")
        }
    })
}

fn eval_args(args: &[Term], theta: &Environment, registry: &Registry) -> Result<Vec<u64>, SemanticsError> {
    args.iter().map(|t| eval_term(t, theta, registry)).collect()
}

/// The parameter assignment `ρ` with `ρ(X(c⃗_n)) = P` iff `θ(X)(n⃗)` holds,
/// for every second-order variable free in `a`.
pub fn corresponding_param_assignment(
    theta: &Environment,
    a: &Formula,
) -> Result<ParamAssignment, SemanticsError> {
    let mut rho = ParamAssignment::empty();
    for v in a.free_variables().second_order {
        let eval = theta
            .second
            .get(&v)
            .cloned()
            .ok_or_else(|| LogicError::UnboundSecondOrder(v.to_string()))?;
        rho = rho.with_rule(Coverage::Vars(BTreeSet::from([v])), move |p: &Parameter| {
            if eval(&p.args) {
                Player::P
            } else {
                Player::O
            }
        });
    }
    Ok(rho)
}

/// `⟦A⟧`, for a formula without free first-order variables.
///
/// # Panics
///
/// Sub-games of quantifiers are built on demand; an arithmetic overflow
/// in one of them panics when that sub-game is reached. Overflows outside
/// quantifier bodies are reported as errors.
pub fn interpret_formula(a: &Formula, registry: &Registry) -> Result<Game, SemanticsError> {
    let fv = a.free_variables().first_order;
    if !fv.is_empty() {
        return Err(SemanticsError::NotOneClosed(fv.into_iter().collect::<Vec<_>>().join(", ")));
    }
    interpret(a, &Arc::new(registry.clone()))
}

fn interpret(a: &Formula, registry: &Arc<Registry>) -> Result<Game, SemanticsError> {
    if a.is_disjunctive() {
        return Ok(dual_game(&interpret(&a.dual(), registry)?));
    }
    Ok(match a {
        Formula::Var { var, sign, args } => {
            let vals = args.iter().map(|t| registry.eval_closed(t)).collect::<Result<Vec<_>, _>>()?;
            end_game(Parameter::new(var.clone(), vals, *sign))
        }
        Formula::Pred { symbol, sign, args } => {
            let vals = args.iter().map(|t| registry.eval_closed(t)).collect::<Result<Vec<_>, _>>()?;
            let holds = registry.eval_predicate(symbol, *sign, &vals)?;
            end_game(if holds { Player::P } else { Player::O })
        }
        Formula::And(l, r) => conjunction(vec![interpret(l, registry)?, interpret(r, registry)?]),
        Formula::Forall(x, body) => {
            // Instantiate once to surface symbol errors eagerly.
            interpret(&body.instantiate(x, 0), registry)?;
            let scope = ParamScope::vars(body.free_variables().second_order);
            let (x, body, registry) = (x.clone(), (**body).clone(), registry.clone());
            conjunction_over_naturals(
                move |n| {
                    interpret(&body.instantiate(&x, n), &registry)
                        .unwrap_or_else(|e| panic!("instance {n} of `{x}`: {e}"))
                },
                scope,
            )
        }
        Formula::Forall2(v, body) => {
            forall_game(ParamScope::var(v.clone()), vec![interpret(body, registry)?])
        }
        Formula::Or(..) | Formula::Exists(..) | Formula::Exists2(..) => {
            unreachable!("disjunctive formulas are interpreted through their dual")
        }
    })
}

/// `⟦Γ⟧ = ∀Game Var(FV(Γ)).(⟦A_0⟧, …, ⟦A_{n-1}⟧)`.
pub fn interpret_sequent(gamma: &Sequent, registry: &Registry) -> Result<Game, SemanticsError> {
    let games = gamma
        .formulas
        .iter()
        .map(|a| interpret_formula(a, registry))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(forall_game(ParamScope::vars(gamma.free_second_order()), games))
}
