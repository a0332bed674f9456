//! Strategies as finite tree supports, and the exhaustive strategy `EXH`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::forall::{ForallPosition, Justification};
use crate::games::{
    decode_move, encode_move, subgame, Branching, Game, GameError, Label, Move, NodeKind,
    ParamAssignment, Player,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy node is not a position of the game: {0}")]
    NotInGame(GameError),
    #[error("paths are not closed under prefix: {0} is missing")]
    NotPrefixClosed(String),
    #[error("cannot read strategy line `{0}`")]
    Syntax(String),
    #[error("leaf {0} has no winner under the assignment")]
    Unresolved(String),
    #[error("EXH needs a ∀Game with no free parameters")]
    NotClosedForall,
    #[error("EXH state does not match the position: {0}")]
    Inconsistent(String),
}

/// A finite, prefix-closed set of move lists containing `nil`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTree {
    paths: BTreeSet<Vec<Move>>,
}

fn render_path(p: &[Move]) -> String {
    if p.is_empty() {
        return "nil".into();
    }
    p.iter().map(|m| encode_move(m).to_string()).collect::<Vec<_>>().join(" ")
}

impl StrategyTree {
    /// `{nil}`.
    pub fn atomic() -> Self {
        StrategyTree { paths: BTreeSet::from([Vec::new()]) }
    }

    pub fn from_paths(paths: impl IntoIterator<Item = Vec<Move>>) -> Result<Self, StrategyError> {
        let mut set: BTreeSet<Vec<Move>> = paths.into_iter().collect();
        set.insert(Vec::new());
        for p in &set {
            if !p.is_empty() && !set.contains(&p[..p.len() - 1]) {
                return Err(StrategyError::NotPrefixClosed(render_path(&p[..p.len() - 1])));
            }
        }
        Ok(StrategyTree { paths: set })
    }

    /// The prefix closure of `paths`.
    pub fn closure(paths: impl IntoIterator<Item = Vec<Move>>) -> Self {
        let mut set = BTreeSet::from([Vec::new()]);
        for p in paths {
            for k in 1..=p.len() {
                set.insert(p[..k].to_vec());
            }
        }
        StrategyTree { paths: set }
    }

    pub fn paths(&self) -> impl Iterator<Item = &Vec<Move>> {
        self.paths.iter()
    }

    pub fn contains(&self, p: &[Move]) -> bool {
        self.paths.contains(p)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn children<'a>(&'a self, p: &'a [Move]) -> impl Iterator<Item = Move> + 'a {
        self.paths
            .range(p.to_vec()..)
            .take_while(move |q| q.starts_with(p))
            .filter(move |q| q.len() == p.len() + 1)
            .map(|q| q[p.len()])
    }

    pub fn is_leaf(&self, p: &[Move]) -> bool {
        self.children(p).next().is_none()
    }
}

/// One path per line, moves as space-separated codes, `nil` for the root.
impl fmt::Display for StrategyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paths {
            writeln!(f, "{}", render_path(p))?;
        }
        Ok(())
    }
}

impl FromStr for StrategyTree {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut paths = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "nil" {
                paths.push(Vec::new());
                continue;
            }
            let p = line
                .split_whitespace()
                .map(|w| w.parse::<u64>().map(decode_move))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| StrategyError::Syntax(line.to_string()))?;
            paths.push(p);
        }
        StrategyTree::from_paths(paths)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    /// Contains every reply of the other player.
    Strategy,
    /// A strategy suggesting a move wherever its owner must move.
    Total,
    /// Total, and every maximal play ending in a leaf of the game is won.
    PartiallyWinning,
    /// Partially winning with no infinite branch left open. For a finite
    /// tree this holds exactly when every maximal play ends in a leaf.
    Winning,
}

/// Checks whether `sigma` is a `g`-strategy of the given kind for `rho(game)`.
pub fn validate_strategy(
    sigma: &StrategyTree,
    game: &Game,
    g: Player,
    kind: StrategyKind,
    rho: &ParamAssignment,
) -> Result<bool, StrategyError> {
    for p in sigma.paths() {
        let node = subgame(game, p).map_err(StrategyError::NotInGame)?;
        match node.kind() {
            NodeKind::Leaf(label) => {
                if kind == StrategyKind::PartiallyWinning || kind == StrategyKind::Winning {
                    let winner = match label {
                        Label::Player(w) => w,
                        Label::Param(a) => rho
                            .lookup(&a)
                            .ok_or_else(|| StrategyError::Unresolved(a.to_string()))?,
                    };
                    if winner != g {
                        return Ok(false);
                    }
                }
            }
            NodeKind::Inner(mover) if mover == g => {
                if kind != StrategyKind::Strategy && sigma.is_leaf(p) {
                    return Ok(false);
                }
            }
            NodeKind::Inner(_) => {
                if node.branching() == Branching::Infinite {
                    return Ok(false);
                }
                let replies: BTreeSet<Move> = sigma.children(p).collect();
                if node.moves().any(|m| !replies.contains(&m)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A source of moves for one side of a play.
pub trait MoveOracle {
    fn name(&self) -> String;

    /// The move to play at `game`, reached from the root by `history`.
    /// `Ok(None)` means the oracle has nothing to offer.
    fn choose(&mut self, game: &Game, history: &[Move]) -> Result<Option<Move>, StrategyError>;
}

/// `(i, p, q, ⊢)`: the next local position to look at, the end of the
/// current cycle, the number of local positions, and the justifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhState {
    pub i: usize,
    pub p: usize,
    pub q: usize,
    pub justification: Vec<Justification>,
}

impl ExhState {
    /// `(0, n, n, ∅)`.
    pub fn initial(n: usize) -> Self {
        ExhState { i: 0, p: n, q: n, justification: Vec::new() }
    }

    fn advanced(&self, m: Move) -> ExhState {
        let mut justification = self.justification.clone();
        justification.push(Justification { from: self.i, mv: m, to: self.q });
        ExhState { i: self.i + 1, p: self.p, q: self.q + 1, justification }
    }

    /// The state after Opponent answered `m` to a probe of local `i`.
    pub fn after_reply(&self, m: Move) -> ExhState {
        self.advanced(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhAction {
    /// `DROP`, `EM` or `STOP`: the play ends.
    Finish(Move),
    /// `JUST(i,q)` followed by Player's own move `reply` in local `i`.
    Advance { just: Move, reply: Move, next: ExhState },
    /// `JUST(i,q)` on an Opponent-rooted local `i`; continue from
    /// `state.after_reply(m)` once Opponent answers `m`.
    Await { just: Move, local: usize, state: ExhState },
}

/// The next action of `EXH` at `pos`, trying its clauses in order:
/// REPEAT, DROP, EM, STOP, SKIP, TRYALL.
pub fn exh_next(state: &ExhState, pos: &ForallPosition) -> Result<ExhAction, StrategyError> {
    if state.q != pos.local_count()
        || state.justification != pos.justification()
        || pos.pending().is_some()
        || pos.is_finished()
        || state.i > state.p
        || state.p > state.q
    {
        return Err(StrategyError::Inconsistent(format!(
            "state ({}, {}, {}) at a position with {} locals",
            state.i,
            state.p,
            state.q,
            pos.local_count()
        )));
    }
    let mut s = state.clone();
    loop {
        if s.i == s.p {
            if s.p < s.q {
                s = ExhState { i: 0, p: s.q, q: s.q, justification: s.justification };
                continue;
            }
            return Ok(ExhAction::Finish(Move::Drop(s.q as u64)));
        }
        let gi = pos.local(s.i).expect("i < p <= q locals");
        if let Some(j) = (0..s.p).find(|&j| pos.em_allowed(s.i, j)) {
            return Ok(ExhAction::Finish(Move::Em(s.i as u64, j as u64)));
        }
        match gi.kind() {
            NodeKind::Leaf(Label::Player(Player::P)) => {
                return Ok(ExhAction::Finish(Move::Stop(s.i as u64)));
            }
            NodeKind::Leaf(_) => s.i += 1,
            NodeKind::Inner(Player::P) => {
                let used = pos.used_moves(s.i);
                match gi.moves().find(|m| !used.contains(m)) {
                    Some(m) => {
                        return Ok(ExhAction::Advance {
                            just: Move::Just(s.i as u64, s.q as u64),
                            reply: m,
                            next: s.advanced(m),
                        });
                    }
                    None => s.i += 1,
                }
            }
            NodeKind::Inner(Player::O) => {
                if pos.used_moves(s.i).is_empty() {
                    return Ok(ExhAction::Await {
                        just: Move::Just(s.i as u64, s.q as u64),
                        local: s.i,
                        state: s,
                    });
                }
                s.i += 1;
            }
        }
    }
}

/// `EXH` as a move oracle for Player. It follows the play through the
/// history it is shown, so it can be reused across plays.
#[derive(Clone, Debug)]
pub struct ExhStrategy {
    n: usize,
    state: ExhState,
    planned: VecDeque<Move>,
    awaiting: Option<ExhState>,
    seen: Vec<Move>,
}

impl ExhStrategy {
    pub fn new(game: &Game) -> Result<Self, StrategyError> {
        let pos = game.forall_position().ok_or(StrategyError::NotClosedForall)?;
        if !pos.history().is_empty() || !game.scope().is_empty() || game.mover() != Some(Player::P) {
            return Err(StrategyError::NotClosedForall);
        }
        let n = pos.gamma().len();
        Ok(ExhStrategy {
            n,
            state: ExhState::initial(n),
            planned: VecDeque::new(),
            awaiting: None,
            seen: Vec::new(),
        })
    }

    pub fn state(&self) -> &ExhState {
        &self.state
    }

    fn reset(&mut self) {
        self.state = ExhState::initial(self.n);
        self.planned.clear();
        self.awaiting = None;
        self.seen.clear();
    }

    fn observe(&mut self, m: Move) -> Result<(), StrategyError> {
        if self.planned.front() == Some(&m) {
            self.planned.pop_front();
        } else if let (true, Some(st)) = (self.planned.is_empty(), self.awaiting.take()) {
            self.state = st.after_reply(m);
        } else {
            return Err(StrategyError::Inconsistent(format!("unexpected move {m} in the history")));
        }
        self.seen.push(m);
        Ok(())
    }
}

impl MoveOracle for ExhStrategy {
    fn name(&self) -> String {
        "EXH".into()
    }

    fn choose(&mut self, game: &Game, history: &[Move]) -> Result<Option<Move>, StrategyError> {
        if !history.starts_with(&self.seen) {
            self.reset();
        }
        for &m in &history[self.seen.len()..] {
            self.observe(m)?;
        }
        let pos = game
            .forall_position()
            .ok_or_else(|| StrategyError::Inconsistent("not a ∀Game position".into()))?;
        if pos.mover() != Some(Player::P) {
            return Err(StrategyError::Inconsistent("EXH only moves for Player".into()));
        }
        if self.planned.is_empty() {
            if self.awaiting.is_some() {
                return Err(StrategyError::Inconsistent("an Opponent reply is awaited".into()));
            }
            match exh_next(&self.state, pos)? {
                ExhAction::Finish(m) => self.planned.push_back(m),
                ExhAction::Advance { just, reply, next } => {
                    self.planned.extend([just, reply]);
                    self.state = next;
                }
                ExhAction::Await { just, state, .. } => {
                    self.planned.push_back(just);
                    self.awaiting = Some(state);
                }
            }
        }
        Ok(self.planned.front().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{disjunction, end_game};

    #[test]
    fn serialisation_round_trip() {
        let t = StrategyTree::closure([vec![Move::Nth(2), Move::Just(0, 1)], vec![Move::Nth(1)]]);
        let text = t.to_string();
        assert_eq!(text, "nil\n9\n14\n14 13\n");
        assert_eq!(text.parse::<StrategyTree>().unwrap(), t);
        assert!("14 13\n".parse::<StrategyTree>().is_err());
        assert!("x".parse::<StrategyTree>().is_err());
    }

    #[test]
    fn children_of_a_node() {
        let t = StrategyTree::closure([
            vec![Move::Nth(1), Move::Nth(1)],
            vec![Move::Nth(1), Move::Nth(2)],
            vec![Move::Nth(2)],
        ]);
        assert_eq!(t.children(&[]).collect::<Vec<_>>(), vec![Move::Nth(1), Move::Nth(2)]);
        assert_eq!(t.children(&[Move::Nth(1)]).count(), 2);
        assert!(t.is_leaf(&[Move::Nth(2)]));
    }

    #[test]
    fn trivial_strategies_on_leaves() {
        let rho = ParamAssignment::empty();
        let nil = StrategyTree::atomic();
        let pw = StrategyKind::PartiallyWinning;
        assert!(validate_strategy(&nil, &end_game(Player::P), Player::P, pw, &rho).unwrap());
        assert!(!validate_strategy(&nil, &end_game(Player::O), Player::P, pw, &rho).unwrap());
    }

    #[test]
    fn choosing_the_winning_disjunct() {
        let rho = ParamAssignment::empty();
        let g = disjunction(vec![end_game(Player::O), end_game(Player::P)]);
        let good = StrategyTree::closure([vec![Move::Nth(2)]]);
        let bad = StrategyTree::closure([vec![Move::Nth(1)]]);
        assert!(validate_strategy(&good, &g, Player::P, StrategyKind::Winning, &rho).unwrap());
        assert!(!validate_strategy(&bad, &g, Player::P, StrategyKind::Winning, &rho).unwrap());
        assert!(!validate_strategy(&StrategyTree::atomic(), &g, Player::P, StrategyKind::Total, &rho).unwrap());
        assert!(validate_strategy(&StrategyTree::atomic(), &g, Player::P, StrategyKind::Strategy, &rho).unwrap());
        // Opponent must account for both of Player's moves.
        assert!(!validate_strategy(&good, &g, Player::O, StrategyKind::Strategy, &rho).unwrap());
        let both = StrategyTree::closure([vec![Move::Nth(1)], vec![Move::Nth(2)]]);
        assert!(validate_strategy(&both, &g, Player::O, StrategyKind::Total, &rho).unwrap());
        assert!(!validate_strategy(&both, &g, Player::O, StrategyKind::PartiallyWinning, &rho).unwrap());
        let outside = StrategyTree::closure([vec![Move::Nth(3)]]);
        assert!(validate_strategy(&outside, &g, Player::P, StrategyKind::Strategy, &rho).is_err());
    }
}
