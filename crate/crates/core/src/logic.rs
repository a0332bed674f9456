//! Abstract syntax of second-order arithmetic: terms, formulas, predicates
//! and sequents, together with duality, free variables, substitution and
//! head/order classification.
//!
//! The syntax is negation-free. Every atom carries a [`Sign`], and the dual
//! of a formula flips signs, swaps `&`/`|` and swaps the quantifiers of both
//! orders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Orientation of an atom: `p` versus `p⊥`, `X` versus `X⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// A second-order variable. Variables of different arity are different
/// variables even when they share a name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SecondOrderVar {
    pub name: String,
    pub arity: usize,
}

impl SecondOrderVar {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        SecondOrderVar { name: name.into(), arity }
    }
}

impl fmt::Display for SecondOrderVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// The constant `c_n`.
    Const(u64),
    /// A registered function symbol applied to arguments.
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn apply(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Apply(symbol.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Term, b: Term) -> Term {
        Term::apply(ADD, vec![a, b])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Term, b: Term) -> Term {
        Term::apply(MUL, vec![a, b])
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Apply(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::Apply(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::Apply(f, args) => {
                Term::Apply(f.clone(), args.iter().map(|t| t.substitute(map)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// A registered predicate constant, e.g. `=`, `<` or the 0-ary truth constant.
    Pred {
        symbol: String,
        sign: Sign,
        args: Vec<Term>,
    },
    /// A second-order variable applied to terms; its arity is `args.len()`.
    Var {
        var: String,
        sign: Sign,
        args: Vec<Term>,
    },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall2(SecondOrderVar, Box<Formula>),
    Exists2(SecondOrderVar, Box<Formula>),
}

/// Names of the built-in symbols of [`Registry::standard`].
pub const TRUE: &str = "true";
pub const EQ: &str = "eq";
pub const LE: &str = "le";
pub const LT: &str = "lt";
pub const SUCC: &str = "succ";
pub const ADD: &str = "add";
pub const MUL: &str = "mul";
pub const SUB: &str = "sub";

impl Formula {
    pub fn truth() -> Formula {
        Formula::Pred { symbol: TRUE.into(), sign: Sign::Pos, args: vec![] }
    }

    pub fn falsity() -> Formula {
        Formula::Pred { symbol: TRUE.into(), sign: Sign::Neg, args: vec![] }
    }

    pub fn pred(symbol: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred { symbol: symbol.into(), sign: Sign::Pos, args }
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::pred(EQ, vec![a, b])
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::pred(LT, vec![a, b])
    }

    pub fn var_atom(var: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Var { var: var.into(), sign: Sign::Pos, args }
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall2(var: SecondOrderVar, body: Formula) -> Formula {
        Formula::Forall2(var, Box::new(body))
    }

    pub fn exists2(var: SecondOrderVar, body: Formula) -> Formula {
        Formula::Exists2(var, Box::new(body))
    }

    /// `A ⇒ B`, defined as `A⊥ ∨ B`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(a.dual(), b)
    }

    /// The involutive negation: flips atom signs, swaps `∧`/`∨`, `∀`/`∃`
    /// and `∀²`/`∃²`.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::Pred { symbol, sign, args } => Formula::Pred {
                symbol: symbol.clone(),
                sign: sign.flip(),
                args: args.clone(),
            },
            Formula::Var { var, sign, args } => Formula::Var {
                var: var.clone(),
                sign: sign.flip(),
                args: args.clone(),
            },
            Formula::And(a, b) => Formula::Or(Box::new(a.dual()), Box::new(b.dual())),
            Formula::Or(a, b) => Formula::And(Box::new(a.dual()), Box::new(b.dual())),
            Formula::Forall(x, a) => Formula::Exists(x.clone(), Box::new(a.dual())),
            Formula::Exists(x, a) => Formula::Forall(x.clone(), Box::new(a.dual())),
            Formula::Forall2(v, a) => Formula::Exists2(v.clone(), Box::new(a.dual())),
            Formula::Exists2(v, a) => Formula::Forall2(v.clone(), Box::new(a.dual())),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred { .. } | Formula::Var { .. })
    }

    pub fn is_disjunctive(&self) -> bool {
        matches!(self, Formula::Or(..) | Formula::Exists(..) | Formula::Exists2(..))
    }

    pub fn is_conjunctive(&self) -> bool {
        matches!(self, Formula::And(..) | Formula::Forall(..) | Formula::Forall2(..))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Pred { .. } | Formula::Var { .. } => true,
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            _ => false,
        }
    }

    /// Number of nodes in the syntax tree (atoms and connectives; terms excluded).
    pub fn size(&self) -> usize {
        match self {
            Formula::Pred { .. } | Formula::Var { .. } => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::Forall2(_, a)
            | Formula::Exists2(_, a) => 1 + a.size(),
        }
    }

    pub fn free_variables(&self) -> FreeVars {
        let mut fv = FreeVars::default();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut fv);
        fv
    }

    pub fn is_one_closed(&self) -> bool {
        self.free_variables().first_order.is_empty()
    }

    fn collect_free<'a>(
        &'a self,
        bound1: &mut Vec<&'a str>,
        bound2: &mut Vec<&'a SecondOrderVar>,
        out: &mut FreeVars,
    ) {
        let terms = |args: &[Term], bound1: &[&str], out: &mut FreeVars| {
            for t in args {
                for x in t.vars() {
                    if !bound1.contains(&x.as_str()) {
                        out.first_order.insert(x);
                    }
                }
            }
        };
        match self {
            Formula::Pred { args, .. } => terms(args, bound1, out),
            Formula::Var { var, args, .. } => {
                terms(args, bound1, out);
                let v = SecondOrderVar::new(var.clone(), args.len());
                if !bound2.iter().any(|b| **b == v) {
                    out.second_order.insert(v);
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound1, bound2, out);
                b.collect_free(bound1, bound2, out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                bound1.push(x);
                a.collect_free(bound1, bound2, out);
                bound1.pop();
            }
            Formula::Forall2(v, a) | Formula::Exists2(v, a) => {
                bound2.push(v);
                a.collect_free(bound1, bound2, out);
                bound2.pop();
            }
        }
    }

    /// Every first-order name occurring in the formula, free or bound.
    fn first_order_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred { args, .. } | Formula::Var { args, .. } => {
                args.iter().for_each(|t| t.collect_vars(out))
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.first_order_names(out);
                b.first_order_names(out);
            }
            Formula::Forall(x, a) | Formula::Exists(x, a) => {
                out.insert(x.clone());
                a.first_order_names(out);
            }
            Formula::Forall2(_, a) | Formula::Exists2(_, a) => a.first_order_names(out),
        }
    }

    /// Every second-order name occurring in the formula, free or bound.
    fn second_order_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred { .. } => {}
            Formula::Var { var, .. } => {
                out.insert(var.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.second_order_names(out);
                b.second_order_names(out);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.second_order_names(out),
            Formula::Forall2(v, a) | Formula::Exists2(v, a) => {
                out.insert(v.name.clone());
                a.second_order_names(out);
            }
        }
    }

    pub fn classify(&self) -> Classification {
        let (head, order, polarity) = match self {
            Formula::Pred { symbol, sign, .. } => {
                (Head::Pred(symbol.clone(), *sign), 0, Polarity::Atomic)
            }
            Formula::Var { var, sign, .. } => (Head::Var(var.clone(), *sign), 0, Polarity::Atomic),
            Formula::And(..) => (Head::And, 0, Polarity::Conjunctive),
            Formula::Or(..) => (Head::Or, 0, Polarity::Disjunctive),
            Formula::Forall(..) => (Head::Forall, 1, Polarity::Conjunctive),
            Formula::Exists(..) => (Head::Exists, 1, Polarity::Disjunctive),
            Formula::Forall2(..) => (Head::Forall2, 2, Polarity::Conjunctive),
            Formula::Exists2(..) => (Head::Exists2, 2, Polarity::Disjunctive),
        };
        Classification { head, order, polarity }
    }

    /// Capture-avoiding simultaneous substitution `A[t⃗/x⃗]`.
    pub fn substitute_terms(&self, terms: &[Term], vars: &[String]) -> Result<Formula, LogicError> {
        if terms.len() != vars.len() {
            return Err(LogicError::LengthMismatch { left: terms.len(), right: vars.len() });
        }
        let map: BTreeMap<String, Term> =
            vars.iter().cloned().zip(terms.iter().cloned()).collect();
        Ok(self.subst1(&map))
    }

    /// `A[c_n/x]`.
    pub fn instantiate(&self, x: &str, n: u64) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(x.to_string(), Term::Const(n));
        self.subst1(&map)
    }

    fn subst1(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Pred { symbol, sign, args } => Formula::Pred {
                symbol: symbol.clone(),
                sign: *sign,
                args: args.iter().map(|t| t.substitute(map)).collect(),
            },
            Formula::Var { var, sign, args } => Formula::Var {
                var: var.clone(),
                sign: *sign,
                args: args.iter().map(|t| t.substitute(map)).collect(),
            },
            Formula::And(a, b) => Formula::and(a.subst1(map), b.subst1(map)),
            Formula::Or(a, b) => Formula::or(a.subst1(map), b.subst1(map)),
            Formula::Forall(x, a) => {
                let (x, a) = subst1_binder(x, a, map);
                Formula::Forall(x, Box::new(a))
            }
            Formula::Exists(x, a) => {
                let (x, a) = subst1_binder(x, a, map);
                Formula::Exists(x, Box::new(a))
            }
            Formula::Forall2(v, a) => Formula::Forall2(v.clone(), Box::new(a.subst1(map))),
            Formula::Exists2(v, a) => Formula::Exists2(v.clone(), Box::new(a.subst1(map))),
        }
    }

    /// Capture-avoiding simultaneous second-order substitution `A[P⃗/X⃗]`.
    pub fn substitute_predicates(
        &self,
        preds: &[Predicate],
        vars: &[SecondOrderVar],
    ) -> Result<Formula, LogicError> {
        if preds.len() != vars.len() {
            return Err(LogicError::LengthMismatch { left: preds.len(), right: vars.len() });
        }
        let mut map = BTreeMap::new();
        for (p, v) in preds.iter().zip(vars) {
            if p.arity() != v.arity {
                return Err(LogicError::ArityMismatch {
                    symbol: v.name.clone(),
                    expected: v.arity,
                    found: p.arity(),
                });
            }
            map.insert(v.clone(), p.clone());
        }
        Ok(self.subst2(&map))
    }

    fn subst2(&self, map: &BTreeMap<SecondOrderVar, Predicate>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Pred { .. } => self.clone(),
            Formula::Var { var, sign, args } => {
                let key = SecondOrderVar::new(var.clone(), args.len());
                match map.get(&key) {
                    None => self.clone(),
                    Some(p) => {
                        let body = match sign {
                            Sign::Pos => p.body.clone(),
                            Sign::Neg => p.body.dual(),
                        };
                        let subst: BTreeMap<String, Term> =
                            p.params.iter().cloned().zip(args.iter().cloned()).collect();
                        body.subst1(&subst)
                    }
                }
            }
            Formula::And(a, b) => Formula::and(a.subst2(map), b.subst2(map)),
            Formula::Or(a, b) => Formula::or(a.subst2(map), b.subst2(map)),
            Formula::Forall(x, a) => {
                let (x, a) = subst2_binder1(x, a, map);
                Formula::Forall(x, Box::new(a))
            }
            Formula::Exists(x, a) => {
                let (x, a) = subst2_binder1(x, a, map);
                Formula::Exists(x, Box::new(a))
            }
            Formula::Forall2(v, a) => {
                let (v, a) = subst2_binder2(v, a, map);
                Formula::Forall2(v, Box::new(a))
            }
            Formula::Exists2(v, a) => {
                let (v, a) = subst2_binder2(v, a, map);
                Formula::Exists2(v, Box::new(a))
            }
        }
    }

    /// Renames free occurrences of the second-order variable `from` to `to`
    /// (same arity).
    fn rename2(&self, from: &SecondOrderVar, to: &str) -> Formula {
        match self {
            Formula::Var { var, sign, args } if *var == from.name && args.len() == from.arity => {
                Formula::Var { var: to.to_string(), sign: *sign, args: args.clone() }
            }
            Formula::Pred { .. } | Formula::Var { .. } => self.clone(),
            Formula::And(a, b) => Formula::and(a.rename2(from, to), b.rename2(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename2(from, to), b.rename2(from, to)),
            Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(a.rename2(from, to))),
            Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(a.rename2(from, to))),
            Formula::Forall2(v, _) | Formula::Exists2(v, _) if v == from => self.clone(),
            Formula::Forall2(v, a) => Formula::Forall2(v.clone(), Box::new(a.rename2(from, to))),
            Formula::Exists2(v, a) => Formula::Exists2(v.clone(), Box::new(a.rename2(from, to))),
        }
    }
}

/// Least `base{n}`, `n ≥ 1`, not in `avoid`.
fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1u64..)
        .map(|n| format!("{base}{n}"))
        .find(|name| !avoid.contains(name))
        .expect("unbounded suffix search")
}

fn subst1_binder(
    x: &str,
    body: &Formula,
    map: &BTreeMap<String, Term>,
) -> (String, Formula) {
    let free = body.free_variables().first_order;
    let relevant: BTreeMap<String, Term> = map
        .iter()
        .filter(|(k, _)| k.as_str() != x && free.contains(k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if relevant.is_empty() {
        return (x.to_string(), body.clone());
    }
    let captured = relevant.values().any(|t| t.vars().contains(x));
    if !captured {
        return (x.to_string(), body.subst1(&relevant));
    }
    let mut avoid = BTreeSet::new();
    body.first_order_names(&mut avoid);
    avoid.insert(x.to_string());
    relevant.values().for_each(|t| t.collect_vars(&mut avoid));
    let fresh = fresh_name(x, &avoid);
    let mut renamed = relevant;
    renamed.insert(x.to_string(), Term::Var(fresh.clone()));
    (fresh, body.subst1(&renamed))
}

fn relevant_preds(
    body: &Formula,
    map: &BTreeMap<SecondOrderVar, Predicate>,
) -> BTreeMap<SecondOrderVar, Predicate> {
    let free = body.free_variables().second_order;
    map.iter()
        .filter(|(k, _)| free.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

fn subst2_binder1(
    x: &str,
    body: &Formula,
    map: &BTreeMap<SecondOrderVar, Predicate>,
) -> (String, Formula) {
    let relevant = relevant_preds(body, map);
    if relevant.is_empty() {
        return (x.to_string(), body.clone());
    }
    let captured = relevant.values().any(|p| p.free_variables().first_order.contains(x));
    if !captured {
        return (x.to_string(), body.subst2(&relevant));
    }
    let mut avoid = BTreeSet::new();
    body.first_order_names(&mut avoid);
    avoid.insert(x.to_string());
    for p in relevant.values() {
        p.body.first_order_names(&mut avoid);
        avoid.extend(p.params.iter().cloned());
    }
    let fresh = fresh_name(x, &avoid);
    let mut rename = BTreeMap::new();
    rename.insert(x.to_string(), Term::Var(fresh.clone()));
    (fresh, body.subst1(&rename).subst2(&relevant))
}

fn subst2_binder2(
    v: &SecondOrderVar,
    body: &Formula,
    map: &BTreeMap<SecondOrderVar, Predicate>,
) -> (SecondOrderVar, Formula) {
    let mut inner = map.clone();
    inner.remove(v);
    let relevant = relevant_preds(body, &inner);
    if relevant.is_empty() {
        return (v.clone(), body.clone());
    }
    let captured = relevant.values().any(|p| p.free_variables().second_order.contains(v));
    if !captured {
        return (v.clone(), body.subst2(&relevant));
    }
    let mut avoid = BTreeSet::new();
    body.second_order_names(&mut avoid);
    avoid.insert(v.name.clone());
    for p in relevant.values() {
        p.body.second_order_names(&mut avoid);
    }
    let fresh = SecondOrderVar::new(fresh_name(&v.name, &avoid), v.arity);
    (fresh.clone(), body.rename2(v, &fresh.name).subst2(&relevant))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub first_order: BTreeSet<String>,
    /// `X` and `X⊥` count as the same variable.
    pub second_order: BTreeSet<SecondOrderVar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Head {
    Pred(String, Sign),
    Var(String, Sign),
    And,
    Or,
    Forall,
    Exists,
    Forall2,
    Exists2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Atomic,
    Conjunctive,
    Disjunctive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub head: Head,
    pub order: u8,
    pub polarity: Polarity,
}

/// `λx⃗.A`; a 0-ary predicate is just a formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub params: Vec<String>,
    pub body: Formula,
}

impl Predicate {
    pub fn new(params: Vec<String>, body: Formula) -> Self {
        Predicate { params, body }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Free variables of the body, minus the abstracted parameters.
    pub fn free_variables(&self) -> FreeVars {
        let mut fv = self.body.free_variables();
        for p in &self.params {
            fv.first_order.remove(p);
        }
        fv
    }
}

/// A one-sided sequent. `(A)` and `A` are distinct objects.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub formulas: Vec<Formula>,
}

impl Sequent {
    pub fn new(formulas: Vec<Formula>) -> Self {
        Sequent { formulas }
    }

    pub fn free_second_order(&self) -> BTreeSet<SecondOrderVar> {
        self.formulas
            .iter()
            .flat_map(|a| a.free_variables().second_order)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("substitution lists differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound first-order variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound second-order variable `{0}`")]
    UnboundSecondOrder(String),
    #[error("arithmetic overflow evaluating `{0}`")]
    Overflow(String),
}

pub type FunctionEval = Arc<dyn Fn(&[u64]) -> Option<u64> + Send + Sync>;
pub type PredicateEval = Arc<dyn Fn(&[u64]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct FunctionSymbol {
    pub arity: usize,
    pub eval: FunctionEval,
}

#[derive(Clone)]
pub struct PredicateSymbol {
    pub arity: usize,
    pub eval: PredicateEval,
}

/// Function and predicate symbols of the language with their evaluators.
#[derive(Clone, Default)]
pub struct Registry {
    functions: BTreeMap<String, FunctionSymbol>,
    predicates: BTreeMap<String, PredicateSymbol>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("functions", &self.functions.keys().collect::<Vec<_>>())
            .field("predicates", &self.predicates.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// Successor, addition, multiplication, truncated subtraction; `=`, `≤`,
    /// `<` and the truth constant.
    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register_function(SUCC, 1, |a| a[0].checked_add(1));
        r.register_function(ADD, 2, |a| a[0].checked_add(a[1]));
        r.register_function(MUL, 2, |a| a[0].checked_mul(a[1]));
        r.register_function(SUB, 2, |a| Some(a[0].saturating_sub(a[1])));
        r.register_predicate(TRUE, 0, |_| true);
        r.register_predicate(EQ, 2, |a| a[0] == a[1]);
        r.register_predicate(LE, 2, |a| a[0] <= a[1]);
        r.register_predicate(LT, 2, |a| a[0] < a[1]);
        r
    }

    pub fn register_function(
        &mut self,
        name: impl Into<String>,
        arity: usize,
        eval: impl Fn(&[u64]) -> Option<u64> + Send + Sync + 'static,
    ) -> &mut Self {
        self.functions.insert(name.into(), FunctionSymbol { arity, eval: Arc::new(eval) });
        self
    }

    pub fn register_predicate(
        &mut self,
        name: impl Into<String>,
        arity: usize,
        eval: impl Fn(&[u64]) -> bool + Send + Sync + 'static,
    ) -> &mut Self {
        self.predicates.insert(name.into(), PredicateSymbol { arity, eval: Arc::new(eval) });
        self
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateSymbol> {
        self.predicates.get(name)
    }

    pub fn function_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(k, v)| (k.as_str(), v.arity))
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, v)| (k.as_str(), v.arity))
    }

    /// Evaluates a closed term.
    pub fn eval_closed(&self, t: &Term) -> Result<u64, LogicError> {
        self.eval_term_with(t, &|x| Err(LogicError::UnboundVariable(x.to_string())))
    }

    pub fn eval_term_with(
        &self,
        t: &Term,
        lookup: &dyn Fn(&str) -> Result<u64, LogicError>,
    ) -> Result<u64, LogicError> {
        match t {
            Term::Var(x) => lookup(x),
            Term::Const(n) => Ok(*n),
            Term::Apply(f, args) => {
                let sym = self.function(f).ok_or_else(|| LogicError::UnknownSymbol(f.clone()))?;
                if sym.arity != args.len() {
                    return Err(LogicError::ArityMismatch {
                        symbol: f.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval_term_with(a, lookup))
                    .collect::<Result<Vec<_>, _>>()?;
                (sym.eval)(&vals).ok_or_else(|| LogicError::Overflow(f.clone()))
            }
        }
    }

    /// Truth of a signed predicate atom on evaluated arguments.
    pub fn eval_predicate(&self, symbol: &str, sign: Sign, args: &[u64]) -> Result<bool, LogicError> {
        let sym = self
            .predicate(symbol)
            .ok_or_else(|| LogicError::UnknownSymbol(symbol.to_string()))?;
        if sym.arity != args.len() {
            return Err(LogicError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: sym.arity,
                found: args.len(),
            });
        }
        let v = (sym.eval)(args);
        Ok(match sign {
            Sign::Pos => v,
            Sign::Neg => !v,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u64) -> Term {
        Term::Const(n)
    }

    fn x(name: &str) -> Term {
        Term::var(name)
    }

    #[test]
    fn dual_of_truth_is_falsity() {
        assert_eq!(Formula::truth().dual(), Formula::falsity());
        assert_eq!(Formula::falsity().dual(), Formula::truth());
    }

    #[test]
    fn dual_switches_connectives_and_signs() {
        let a = Formula::and(
            Formula::var_atom("X", vec![c(1)]),
            Formula::pred("p", vec![c(2)]),
        );
        let expected = Formula::or(
            Formula::Var { var: "X".into(), sign: Sign::Neg, args: vec![c(1)] },
            Formula::Pred { symbol: "p".into(), sign: Sign::Neg, args: vec![c(2)] },
        );
        assert_eq!(a.dual(), expected);
        assert_eq!(a.dual().dual(), a);
    }

    #[test]
    fn first_order_substitution_replaces() {
        let a = Formula::eq(Term::add(x("x"), c(0)), x("x"));
        let b = a.substitute_terms(&[c(3)], &["x".into()]).unwrap();
        assert_eq!(b, Formula::eq(Term::add(c(3), c(0)), c(3)));
    }

    #[test]
    fn first_order_substitution_avoids_capture() {
        // (∀x. x = y)[x/y] renames the binder.
        let a = Formula::forall("x", Formula::eq(x("x"), x("y")));
        let b = a.substitute_terms(&[x("x")], &["y".into()]).unwrap();
        assert_eq!(b, Formula::forall("x1", Formula::eq(x("x1"), x("x"))));
    }

    #[test]
    fn fresh_suffix_skips_names_in_use() {
        let a = Formula::forall(
            "x",
            Formula::and(Formula::eq(x("x"), x("y")), Formula::eq(x("x1"), x("x1"))),
        );
        let b = a.substitute_terms(&[x("x")], &["y".into()]).unwrap();
        let Formula::Forall(binder, _) = &b else { panic!("expected a quantifier") };
        assert_eq!(binder, "x2");
    }

    #[test]
    fn substitution_respects_shadowing() {
        let a = Formula::forall("x", Formula::eq(x("x"), c(1)));
        assert_eq!(a.substitute_terms(&[c(5)], &["x".into()]).unwrap(), a);
    }

    #[test]
    fn substitution_length_mismatch_is_an_error() {
        let a = Formula::truth();
        assert!(matches!(
            a.substitute_terms(&[c(1)], &[]),
            Err(LogicError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn second_order_substitution_unfolds_both_orientations() {
        let p = Predicate::new(vec!["x".into()], Formula::eq(x("x"), x("x")));
        let v = SecondOrderVar::new("X", 1);
        let pos = Formula::var_atom("X", vec![c(2)]);
        assert_eq!(
            pos.substitute_predicates(std::slice::from_ref(&p), std::slice::from_ref(&v)).unwrap(),
            Formula::eq(c(2), c(2))
        );
        assert_eq!(
            pos.dual().substitute_predicates(&[p], &[v]).unwrap(),
            Formula::eq(c(2), c(2)).dual()
        );
    }

    #[test]
    fn second_order_substitution_checks_arity() {
        let p = Predicate::new(vec![], Formula::truth());
        let err = Formula::truth()
            .substitute_predicates(&[p], &[SecondOrderVar::new("X", 1)])
            .unwrap_err();
        assert!(matches!(err, LogicError::ArityMismatch { .. }));
    }

    #[test]
    fn second_order_substitution_avoids_first_order_capture() {
        // (∀y. X(y))[λx.(x = y)/X]: the binder y must not capture the free y.
        let a = Formula::forall("y", Formula::var_atom("X", vec![x("y")]));
        let p = Predicate::new(vec!["x".into()], Formula::eq(x("x"), x("y")));
        let b = a.substitute_predicates(&[p], &[SecondOrderVar::new("X", 1)]).unwrap();
        assert_eq!(b, Formula::forall("y1", Formula::eq(x("y1"), x("y"))));
    }

    #[test]
    fn second_order_substitution_avoids_second_order_capture() {
        // (∀Y:0. X ∧ Y)[λ.Y/X] renames the bound Y.
        let y0 = SecondOrderVar::new("Y", 0);
        let a = Formula::forall2(
            y0.clone(),
            Formula::and(Formula::var_atom("X", vec![]), Formula::var_atom("Y", vec![])),
        );
        let p = Predicate::new(vec![], Formula::var_atom("Y", vec![]));
        let b = a.substitute_predicates(&[p], &[SecondOrderVar::new("X", 0)]).unwrap();
        assert_eq!(
            b,
            Formula::forall2(
                SecondOrderVar::new("Y1", 0),
                Formula::and(Formula::var_atom("Y", vec![]), Formula::var_atom("Y1", vec![]))
            )
        );
    }

    #[test]
    fn free_variable_examples() {
        let fv = Formula::forall("x", Formula::var_atom("X", vec![x("x")])).free_variables();
        assert!(fv.first_order.is_empty());
        assert_eq!(fv.second_order, BTreeSet::from([SecondOrderVar::new("X", 1)]));

        let fv = Formula::forall2(SecondOrderVar::new("X", 1), Formula::var_atom("X", vec![x("y")]))
            .free_variables();
        assert_eq!(fv.first_order, BTreeSet::from(["y".to_string()]));
        assert!(fv.second_order.is_empty());

        let fv = Formula::var_atom("X", vec![c(0)]).dual().free_variables();
        assert_eq!(fv.second_order, BTreeSet::from([SecondOrderVar::new("X", 1)]));
    }

    #[test]
    fn classification_examples() {
        let a = Formula::forall2(SecondOrderVar::new("X", 1), Formula::var_atom("X", vec![c(0)]));
        assert_eq!(
            a.classify(),
            Classification { head: Head::Forall2, order: 2, polarity: Polarity::Conjunctive }
        );
        let b = Formula::or(Formula::pred("p", vec![c(1)]), Formula::pred("q", vec![c(2)]));
        assert_eq!(
            b.classify(),
            Classification { head: Head::Or, order: 0, polarity: Polarity::Disjunctive }
        );
        let e = Formula::exists("x", Formula::eq(x("x"), x("x")));
        assert_eq!(
            e.classify(),
            Classification { head: Head::Exists, order: 1, polarity: Polarity::Disjunctive }
        );
    }

    #[test]
    fn standard_registry_arithmetic() {
        let r = Registry::standard();
        assert_eq!(r.eval_closed(&Term::add(c(2), c(3))).unwrap(), 5);
        assert_eq!(r.eval_closed(&Term::apply(SUB, vec![c(2), c(3)])).unwrap(), 0);
        assert_eq!(r.eval_closed(&Term::apply(SUCC, vec![c(9)])).unwrap(), 10);
        assert!(matches!(
            r.eval_closed(&Term::mul(c(u64::MAX), c(2))),
            Err(LogicError::Overflow(_))
        ));
        assert!(r.eval_predicate(EQ, Sign::Neg, &[2, 3]).unwrap());
    }
}
