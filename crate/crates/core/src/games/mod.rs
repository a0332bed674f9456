//! Parametric games as lazy arenas.
//!
//! A [`Game`] is never materialised as a tree. It answers three questions
//! about its root: what kind of node it is, which moves are legal (as a
//! countable stream, in ascending code order), and which sub-game a legal
//! move leads to.

mod arena;
mod assignment;
mod moves;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use arena::{
    apply_assignment, conjunction, conjunction_over_naturals, disjunction,
    disjunction_over_naturals, dual_game, end_game, games_equivalent, subgame, Arena, Branching,
    DumpEdge, DumpNode, Game, GameError, NodeKind, Violation,
};
pub use assignment::{Coverage, ParamAssignment, ParamScope};
pub use moves::{
    cantor_pair, cantor_unpair, decode_move, encode_move, Move, MoveSyntaxError, TAG_DROP,
    TAG_EM, TAG_JUST, TAG_NTH, TAG_STOP,
};

use crate::logic::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    P,
    O,
}

impl Player {
    pub fn dual(self) -> Player {
        match self {
            Player::P => Player::O,
            Player::O => Player::P,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::P => "P",
            Player::O => "O",
        })
    }
}

/// A signed atom `X(c_n⃗)` with evaluated arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parameter {
    pub var: String,
    pub args: Vec<u64>,
    pub sign: Sign,
}

impl Parameter {
    pub fn new(var: impl Into<String>, args: Vec<u64>, sign: Sign) -> Self {
        Parameter { var: var.into(), args, sign }
    }

    pub fn positive(var: impl Into<String>, args: Vec<u64>) -> Self {
        Parameter::new(var, args, Sign::Pos)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn dual(&self) -> Parameter {
        Parameter { var: self.var.clone(), args: self.args.clone(), sign: self.sign.flip() }
    }

    /// The positive orientation of this parameter.
    pub fn positive_form(&self) -> Parameter {
        Parameter { sign: Sign::Pos, ..self.clone() }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Neg {
            f.write_str("~")?;
        }
        f.write_str(&self.var)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(u64::to_string).collect();
            write!(f, "({})", args.join(", "))?;
        }
        Ok(())
    }
}

/// The label of a leaf: a settled winner or a parameter awaiting an assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Player(Player),
    Param(Parameter),
}

impl Label {
    pub fn dual(&self) -> Label {
        match self {
            Label::Player(g) => Label::Player(g.dual()),
            Label::Param(a) => Label::Param(a.dual()),
        }
    }
}

impl From<Player> for Label {
    fn from(g: Player) -> Self {
        Label::Player(g)
    }
}

impl From<Parameter> for Label {
    fn from(a: Parameter) -> Self {
        Label::Param(a)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Player(g) => g.fmt(f),
            Label::Param(a) => a.fmt(f),
        }
    }
}
