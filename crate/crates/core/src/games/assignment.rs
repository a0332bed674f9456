use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Parameter, Player};
use crate::logic::{SecondOrderVar, Sign};

/// A self-dual set of parameters, described by the second-order variables
/// whose instances it contains plus finitely many explicit atoms. Only
/// positive orientations are stored; membership ignores the sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamScope {
    vars: BTreeSet<SecondOrderVar>,
    atoms: BTreeSet<Parameter>,
}

impl ParamScope {
    pub fn empty() -> Self {
        ParamScope::default()
    }

    /// `Var(X)`: every instance `X(c⃗)`, `X⊥(c⃗)`.
    pub fn var(v: SecondOrderVar) -> Self {
        ParamScope { vars: BTreeSet::from([v]), atoms: BTreeSet::new() }
    }

    pub fn vars(vars: impl IntoIterator<Item = SecondOrderVar>) -> Self {
        ParamScope { vars: vars.into_iter().collect(), atoms: BTreeSet::new() }
    }

    /// The finite self-dual closure of the given parameters.
    pub fn atoms(atoms: impl IntoIterator<Item = Parameter>) -> Self {
        ParamScope {
            vars: BTreeSet::new(),
            atoms: atoms.into_iter().map(|a| a.positive_form()).collect(),
        }
    }

    pub fn contains(&self, a: &Parameter) -> bool {
        self.vars.iter().any(|v| v.name == a.var && v.arity == a.arity())
            || self.atoms.contains(&a.positive_form())
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.atoms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_set(&self) -> &BTreeSet<SecondOrderVar> {
        &self.vars
    }

    /// Explicit atoms, positive orientation, in lexicographic order on `(var, args)`.
    pub fn atom_set(&self) -> &BTreeSet<Parameter> {
        &self.atoms
    }

    pub fn union(&self, other: &ParamScope) -> ParamScope {
        let vars: BTreeSet<_> = self.vars.union(&other.vars).cloned().collect();
        let atoms = self
            .atoms
            .union(&other.atoms)
            .filter(|a| !vars.iter().any(|v| v.name == a.var && v.arity == a.arity()))
            .cloned()
            .collect();
        ParamScope { vars, atoms }
    }

    /// `self ∖ bound`, over-approximated where a variable of `self` is only
    /// partially bound by explicit atoms (the variable is kept).
    pub fn minus(&self, bound: &ParamScope) -> ParamScope {
        ParamScope {
            vars: self.vars.difference(&bound.vars).cloned().collect(),
            atoms: self.atoms.iter().filter(|a| !bound.contains(a)).cloned().collect(),
        }
    }

    /// Whether every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &ParamScope) -> bool {
        self.vars.iter().all(|v| other.vars.contains(v)) && self.atoms.iter().all(|a| other.contains(a))
    }
}

impl fmt::Display for ParamScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.vars.iter().map(|v| format!("Var({v})")).collect();
        parts.extend(self.atoms.iter().map(|a| a.to_string()));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Which parameters a default rule answers for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    All,
    Vars(BTreeSet<SecondOrderVar>),
}

impl Coverage {
    fn covers(&self, a: &Parameter) -> bool {
        match self {
            Coverage::All => true,
            Coverage::Vars(vs) => vs.iter().any(|v| v.name == a.var && v.arity == a.arity()),
        }
    }
}

type Rule = Arc<dyn Fn(&Parameter) -> Player + Send + Sync>;

/// A dual-preserving map from parameters to players: a finite table on
/// positive parameters plus an optional default rule. Negative
/// orientations are always computed as `ρ(a⊥) = ρ(a)⊥`.
#[derive(Clone, Default)]
pub struct ParamAssignment {
    table: BTreeMap<Parameter, Player>,
    defaults: Vec<(Coverage, Rule)>,
}

impl fmt::Debug for ParamAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamAssignment")
            .field("table", &self.table)
            .field("defaults", &self.defaults.iter().map(|(c, _)| c).collect::<Vec<_>>())
            .finish()
    }
}

impl ParamAssignment {
    /// The empty assignment; it covers no parameter.
    pub fn empty() -> Self {
        ParamAssignment::default()
    }

    pub fn constant(g: Player) -> Self {
        ParamAssignment::empty().with_rule(Coverage::All, move |_| g)
    }

    /// Adds a default rule, consulted (for positive parameters it covers)
    /// after the table and after rules added earlier.
    pub fn with_rule(
        mut self,
        coverage: Coverage,
        rule: impl Fn(&Parameter) -> Player + Send + Sync + 'static,
    ) -> Self {
        self.defaults.push((coverage, Arc::new(rule)));
        self
    }

    /// Assigns `g` to `a` (and `g⊥` to `a⊥`).
    pub fn set(&mut self, a: &Parameter, g: Player) {
        match a.sign {
            Sign::Pos => self.table.insert(a.clone(), g),
            Sign::Neg => self.table.insert(a.positive_form(), g.dual()),
        };
    }

    pub fn with(mut self, a: &Parameter, g: Player) -> Self {
        self.set(a, g);
        self
    }

    pub fn lookup(&self, a: &Parameter) -> Option<Player> {
        let pos = a.positive_form();
        let g = self.table.get(&pos).copied().or_else(|| {
            self.defaults
                .iter()
                .find(|(c, _)| c.covers(&pos))
                .map(|(_, rule)| rule(&pos))
        })?;
        Some(match a.sign {
            Sign::Pos => g,
            Sign::Neg => g.dual(),
        })
    }

    pub fn covers(&self, a: &Parameter) -> bool {
        self.table.contains_key(&a.positive_form())
            || self.defaults.iter().any(|(c, _)| c.covers(a))
    }

    /// The first member of `scope` this assignment does not cover, if any.
    /// A variable of the scope counts as covered only through a rule.
    pub fn uncovered_in(&self, scope: &ParamScope) -> Option<String> {
        for v in scope.var_set() {
            let ok = self.defaults.iter().any(|(c, _)| match c {
                Coverage::All => true,
                Coverage::Vars(vs) => vs.contains(v),
            });
            if !ok {
                return Some(format!("Var({v})"));
            }
        }
        scope.atom_set().iter().find(|a| !self.covers(a)).map(|a| a.to_string())
    }

    /// Over-writing `(self, other)`: `other` wins wherever it is defined.
    pub fn overwrite(&self, other: &ParamAssignment) -> ParamAssignment {
        let mut table = self.table.clone();
        let mut out_defaults = other.defaults.clone();
        // Table entries of `self` shadowed by a rule of `other` must yield to it.
        table.retain(|a, _| !other.defaults.iter().any(|(c, _)| c.covers(a)));
        table.extend(other.table.iter().map(|(a, g)| (a.clone(), *g)));
        out_defaults.extend(self.defaults.iter().cloned());
        ParamAssignment { table, defaults: out_defaults }
    }

    /// The explicit table, positive orientations only.
    pub fn table(&self) -> &BTreeMap<Parameter, Player> {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u64) -> Parameter {
        Parameter::positive("X", vec![n])
    }

    #[test]
    fn lookup_is_dual_preserving() {
        let rho = ParamAssignment::empty().with(&a(0), Player::P).with(&a(1).dual(), Player::P);
        assert_eq!(rho.lookup(&a(0)), Some(Player::P));
        assert_eq!(rho.lookup(&a(0).dual()), Some(Player::O));
        assert_eq!(rho.lookup(&a(1)), Some(Player::O));
        assert_eq!(rho.lookup(&a(2)), None);
    }

    #[test]
    fn rules_cover_by_variable() {
        let x = SecondOrderVar::new("X", 1);
        let rho = ParamAssignment::empty().with_rule(Coverage::Vars(BTreeSet::from([x.clone()])), |p| {
            if p.args[0] % 2 == 0 { Player::P } else { Player::O }
        });
        assert_eq!(rho.lookup(&a(4)), Some(Player::P));
        assert_eq!(rho.lookup(&a(4).dual()), Some(Player::O));
        assert_eq!(rho.lookup(&Parameter::positive("Y", vec![0])), None);
        assert_eq!(rho.uncovered_in(&ParamScope::var(x)), None);
        assert!(rho.uncovered_in(&ParamScope::var(SecondOrderVar::new("Y", 1))).is_some());
    }

    #[test]
    fn overwrite_prefers_the_right_operand() {
        let left = ParamAssignment::constant(Player::P).with(&a(0), Player::P);
        let right = ParamAssignment::empty().with(&a(0), Player::O);
        let both = left.overwrite(&right);
        assert_eq!(both.lookup(&a(0)), Some(Player::O));
        assert_eq!(both.lookup(&a(7)), Some(Player::P));
        let shadowing = ParamAssignment::empty().with(&a(1), Player::P).overwrite(&ParamAssignment::constant(Player::O));
        assert_eq!(shadowing.lookup(&a(1)), Some(Player::O));
    }

    #[test]
    fn scope_membership_ignores_sign() {
        let s = ParamScope::atoms([a(0).dual()]);
        assert!(s.contains(&a(0)));
        assert!(s.contains(&a(0).dual()));
        assert!(!s.contains(&a(1)));
        let v = ParamScope::var(SecondOrderVar::new("X", 1));
        assert!(v.contains(&a(99).dual()));
        assert!(s.minus(&v).is_empty());
        assert!(s.is_subset(&v));
    }
}
