//! Running plays, solving finite games, exploring `EXH`, and checking the
//! ∀Game theorem on finite instances.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::forall::{forall_game, ForallPosition, PlayOutcome, Reason, SearchKey};
use crate::games::{
    apply_assignment, Branching, Game, GameError, Label, Move, NodeKind, ParamAssignment,
    ParamScope, Player,
};
use crate::strategy::{exh_next, ExhAction, ExhState, MoveOracle, StrategyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Moves per play.
    pub max_moves: usize,
    /// Children enumerated per node.
    pub max_branch: usize,
    /// Positions visited by a whole search.
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_moves: 200, max_branch: 16, max_nodes: 2_000_000 }
    }
}

impl Budget {
    pub fn with_moves(self, max_moves: usize) -> Self {
        Budget { max_moves, ..self }
    }

    pub fn with_branch(self, max_branch: usize) -> Self {
        Budget { max_branch, ..self }
    }

    pub fn with_nodes(self, max_nodes: usize) -> Self {
        Budget { max_nodes, ..self }
    }
}

/// The limit that kept a search from reaching a definite answer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Resource {
    Moves,
    Branch,
    Nodes,
    /// A leaf labelled by a parameter the assignment leaves open.
    Parameter(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    PlayerWinning,
    OpponentWinning,
    Undetermined(Resource),
}

impl Verdict {
    pub fn winning(g: Player) -> Verdict {
        match g {
            Player::P => Verdict::PlayerWinning,
            Player::O => Verdict::OpponentWinning,
        }
    }

    pub fn winner(&self) -> Option<Player> {
        match self {
            Verdict::PlayerWinning => Some(Player::P),
            Verdict::OpponentWinning => Some(Player::O),
            Verdict::Undetermined(_) => None,
        }
    }

    pub fn is_definite(&self) -> bool {
        self.winner().is_some()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::PlayerWinning => f.write_str("PlayerWinning"),
            Verdict::OpponentWinning => f.write_str("OpponentWinning"),
            Verdict::Undetermined(Resource::Moves) => f.write_str("Undetermined(moves)"),
            Verdict::Undetermined(Resource::Branch) => f.write_str("Undetermined(branch)"),
            Verdict::Undetermined(Resource::Nodes) => f.write_str("Undetermined(nodes)"),
            Verdict::Undetermined(Resource::Parameter(a)) => write!(f, "Undetermined({a})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("{oracle} (moving for {player}) proposed an illegal move: {error}")]
    IllegalMove { oracle: String, player: Player, error: GameError },
    #[error("{oracle} (moving for {player}) stalled after {moves} moves")]
    Stalled { oracle: String, player: Player, moves: usize },
    #[error("{oracle}: {error}")]
    Oracle { oracle: String, error: StrategyError },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// What `run_play` does when an oracle offers no move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StallPolicy {
    #[default]
    Error,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub mover: Player,
    pub mv: Move,
    /// For a move inside a local position of a ∀Game: `(i, j)`, the
    /// justifying and the created local position.
    pub link: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    pub outcome: PlayOutcome,
}

impl Transcript {
    pub fn moves(&self) -> Vec<Move> {
        self.entries.iter().map(|e| e.mv).collect()
    }
}

/// `k. <P|O> <move> [local i → j]`, one line per move, then the outcome.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.entries.iter().enumerate() {
            write!(f, "{}. {} {}", k + 1, e.mover, e.mv)?;
            if let Some((i, j)) = e.link {
                write!(f, " [local {i} → {j}]")?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", self.outcome)
    }
}

fn link_of(game: &Game) -> Option<(usize, usize)> {
    let pos = game.forall_position()?;
    pos.pending().map(|i| (i, pos.local_count()))
}

/// The outcome at a leaf, with parameters settled by `rho`.
fn leaf_outcome(game: &Game, label: &Label, rho: &ParamAssignment) -> PlayOutcome {
    let reason = game
        .forall_position()
        .map(|p| match p.outcome() {
            PlayOutcome::PlayerWins(r) | PlayOutcome::OpponentWins(r) => r,
            _ => Reason::Stop,
        })
        .unwrap_or(Reason::Leaf);
    match label {
        Label::Player(g) => PlayOutcome::won_by(*g, reason),
        Label::Param(a) => match rho.lookup(a) {
            Some(g) => PlayOutcome::won_by(g, reason),
            None => PlayOutcome::Deferred(a.clone()),
        },
    }
}

/// Replays `history` on `game`, recording movers and local links.
pub fn transcript_of(
    game: &Game,
    history: &[Move],
    rho: &ParamAssignment,
) -> Result<Transcript, GameError> {
    let mut cur = game.clone();
    let mut entries = Vec::with_capacity(history.len());
    for (step, m) in history.iter().enumerate() {
        let mover = cur.mover().ok_or(GameError::IllegalPath {
            step,
            mv: *m,
            violation: crate::games::Violation::Finished,
        })?;
        let link = link_of(&cur);
        cur = cur.play(m).map_err(|e| match e {
            GameError::Illegal { mv, violation } => GameError::IllegalPath { step, mv, violation },
            other => other,
        })?;
        entries.push(TranscriptEntry { mover, mv: *m, link });
    }
    let outcome = match cur.label() {
        Some(l) => leaf_outcome(&cur, &l, rho),
        None => PlayOutcome::Ongoing,
    };
    Ok(Transcript { entries, outcome })
}

/// Plays `game` with `player` moving for P and `opponent` moving for O.
pub fn run_play(
    game: &Game,
    player: &mut dyn MoveOracle,
    opponent: &mut dyn MoveOracle,
    rho: &ParamAssignment,
    budget: Budget,
    on_stall: StallPolicy,
) -> Result<Transcript, EngineError> {
    apply_assignment(rho, game)?;
    let mut cur = game.clone();
    let mut history = Vec::new();
    let mut entries = Vec::new();
    loop {
        let mover = match cur.kind() {
            NodeKind::Leaf(l) => {
                return Ok(Transcript { entries, outcome: leaf_outcome(&cur, &l, rho) });
            }
            NodeKind::Inner(g) => g,
        };
        if history.len() >= budget.max_moves {
            return Ok(Transcript { entries, outcome: PlayOutcome::BudgetExhausted });
        }
        let oracle: &mut dyn MoveOracle = match mover {
            Player::P => &mut *player,
            Player::O => &mut *opponent,
        };
        let choice = oracle
            .choose(&cur, &history)
            .map_err(|error| EngineError::Oracle { oracle: oracle.name(), error })?;
        let Some(m) = choice else {
            return match on_stall {
                StallPolicy::Error => Err(EngineError::Stalled {
                    oracle: oracle.name(),
                    player: mover,
                    moves: history.len(),
                }),
                StallPolicy::BudgetExhausted => {
                    Ok(Transcript { entries, outcome: PlayOutcome::BudgetExhausted })
                }
            };
        };
        let link = link_of(&cur);
        cur = cur
            .play(&m)
            .map_err(|error| EngineError::IllegalMove { oracle: oracle.name(), player: mover, error })?;
        history.push(m);
        entries.push(TranscriptEntry { mover, mv: m, link });
    }
}

/// Plays a uniformly random move among the first `max_branch` legal ones.
#[derive(Clone, Debug)]
pub struct RandomOracle {
    rng: ChaCha8Rng,
    max_branch: usize,
}

impl RandomOracle {
    pub fn new(seed: u64, max_branch: usize) -> Self {
        RandomOracle { rng: ChaCha8Rng::seed_from_u64(seed), max_branch: max_branch.max(1) }
    }
}

impl MoveOracle for RandomOracle {
    fn name(&self) -> String {
        "random".into()
    }

    fn choose(&mut self, game: &Game, _history: &[Move]) -> Result<Option<Move>, StrategyError> {
        let options: Vec<Move> = game.moves().take(self.max_branch).collect();
        if options.is_empty() {
            return Ok(None);
        }
        Ok(Some(options[self.rng.gen_range(0..options.len())]))
    }
}

/// Plays a fixed list of moves, then stalls.
#[derive(Clone, Debug)]
pub struct ScriptedOracle {
    moves: Vec<Move>,
    next: usize,
}

impl ScriptedOracle {
    pub fn new(moves: Vec<Move>) -> Self {
        ScriptedOracle { moves, next: 0 }
    }
}

impl MoveOracle for ScriptedOracle {
    fn name(&self) -> String {
        "script".into()
    }

    fn choose(&mut self, _game: &Game, _history: &[Move]) -> Result<Option<Move>, StrategyError> {
        let m = self.moves.get(self.next).copied();
        self.next += 1;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaxReport {
    pub verdict: Verdict,
    pub nodes: usize,
}

struct Minimax<'a> {
    rho: &'a ParamAssignment,
    budget: Budget,
    nodes: usize,
    memo: HashMap<SearchKey, Verdict>,
}

impl Minimax<'_> {
    fn value(&mut self, g: &Game, depth: usize) -> Verdict {
        if self.nodes >= self.budget.max_nodes {
            return Verdict::Undetermined(Resource::Nodes);
        }
        self.nodes += 1;
        let mover = match g.kind() {
            NodeKind::Leaf(Label::Player(w)) => return Verdict::winning(w),
            NodeKind::Leaf(Label::Param(a)) => {
                return match self.rho.lookup(&a) {
                    Some(w) => Verdict::winning(w),
                    None => Verdict::Undetermined(Resource::Parameter(a.to_string())),
                };
            }
            NodeKind::Inner(m) => m,
        };
        if depth >= self.budget.max_moves {
            return Verdict::Undetermined(Resource::Moves);
        }
        let key = g.search_key();
        if let Some(v) = key.as_ref().and_then(|k| self.memo.get(k)) {
            return v.clone();
        }
        let mut open: Option<Resource> = None;
        let mut decided = None;
        let mut k = 0;
        while let Some(m) = g.move_at(k) {
            if k >= self.budget.max_branch {
                open.get_or_insert(Resource::Branch);
                break;
            }
            k += 1;
            if mover == Player::P && g.is_superfluous(&m) {
                continue;
            }
            let child = g.play(&m).expect("enumerated moves are legal");
            match self.value(&child, depth + 1) {
                Verdict::Undetermined(r) => {
                    open.get_or_insert(r);
                }
                v if v.winner() == Some(mover) => {
                    decided = Some(v);
                    break;
                }
                _ => {}
            }
        }
        let verdict = match (decided, open) {
            (Some(v), _) => v,
            (None, Some(r)) => Verdict::Undetermined(r),
            (None, None) => Verdict::winning(mover.dual()),
        };
        if let Some(k) = key {
            if verdict != Verdict::Undetermined(Resource::Nodes) {
                self.memo.insert(k, verdict.clone());
            }
        }
        verdict
    }
}

/// Solves `rho(game)` by exhaustive search. On ∀Game positions Player
/// never repeats a move of a local position and probes each
/// Opponent-rooted local position at most once.
pub fn minimax(game: &Game, rho: &ParamAssignment, budget: Budget) -> MinimaxReport {
    let mut search = Minimax { rho, budget, nodes: 0, memo: HashMap::new() };
    let verdict = search.value(game, 0);
    MinimaxReport { verdict, nodes: search.nodes }
}

pub fn minimax_winner(game: &Game, rho: &ParamAssignment, budget: Budget) -> Verdict {
    minimax(game, rho, budget).verdict
}

/// A maximal play of the `EXH` tree, or a play cut by the budget.
#[derive(Clone, Debug)]
pub struct ExploredPlay {
    pub position: ForallPosition,
    pub outcome: PlayOutcome,
}

impl ExploredPlay {
    pub fn history(&self) -> &[Move] {
        self.position.history()
    }
}

#[derive(Clone, Debug)]
pub struct ExhReport {
    pub verdict: Verdict,
    pub plays: Vec<ExploredPlay>,
    pub nodes: usize,
}

impl ExhReport {
    /// An Opponent-won play if there is one, otherwise the first play explored.
    pub fn representative(&self) -> Option<&ExploredPlay> {
        self.plays
            .iter()
            .find(|p| p.outcome.winner() == Some(Player::O))
            .or_else(|| self.plays.first())
    }

    pub fn drop_plays(&self) -> impl Iterator<Item = &ExploredPlay> {
        self.plays.iter().filter(|p| p.outcome == PlayOutcome::OpponentWins(Reason::Drop))
    }
}

struct ExhSearch {
    budget: Budget,
    nodes: usize,
    plays: Vec<ExploredPlay>,
    open: Option<Resource>,
}

impl ExhSearch {
    fn step(&mut self, pos: &ForallPosition, m: Move) -> Result<ForallPosition, EngineError> {
        self.nodes += 1;
        let (next, _) = pos
            .apply_move(&m)
            .map_err(|e| EngineError::Internal(format!("EXH proposed an illegal move: {e}")))?;
        Ok(next)
    }

    fn cut(&mut self, pos: ForallPosition, r: Resource) {
        self.open.get_or_insert(r);
        self.plays.push(ExploredPlay { position: pos, outcome: PlayOutcome::BudgetExhausted });
    }

    fn explore(&mut self, pos: ForallPosition, state: ExhState) -> Result<(), EngineError> {
        if !pos.is_non_repeating() {
            return Err(EngineError::Internal("EXH repeated a move".into()));
        }
        if self.nodes >= self.budget.max_nodes {
            self.cut(pos, Resource::Nodes);
            return Ok(());
        }
        if pos.history().len() >= self.budget.max_moves {
            self.cut(pos, Resource::Moves);
            return Ok(());
        }
        let action = exh_next(&state, &pos)
            .map_err(|e| EngineError::Internal(e.to_string()))?;
        match action {
            ExhAction::Finish(m) => {
                let end = self.step(&pos, m)?;
                let outcome = end.outcome();
                self.plays.push(ExploredPlay { position: end, outcome });
            }
            ExhAction::Advance { just, reply, next } => {
                let mid = self.step(&pos, just)?;
                let after = self.step(&mid, reply)?;
                self.explore(after, next)?;
            }
            ExhAction::Await { just, local, state } => {
                let mid = self.step(&pos, just)?;
                let g = mid.local(local).expect("awaited local exists").clone();
                for (k, reply) in g.moves().enumerate() {
                    if k >= self.budget.max_branch {
                        self.cut(mid.clone(), Resource::Branch);
                        break;
                    }
                    let after = self.step(&mid, reply)?;
                    self.explore(after, state.after_reply(reply))?;
                }
            }
        }
        Ok(())
    }
}

/// Explores every play of `EXH` against all Opponent replies (the first
/// `max_branch` of them at each node).
///
/// `OpponentWinning` as soon as one explored play is lost, since `EXH` is
/// deterministic; `PlayerWinning` only if every play was explored to its
/// end and won.
pub fn exh_verdict(game: &Game, budget: Budget) -> Result<ExhReport, EngineError> {
    let root = match game.forall_position() {
        Some(p) if game.mover() == Some(Player::P) && p.history().is_empty() => p.clone(),
        _ => return Err(EngineError::Usage("EXH needs the root of a ∀Game".into())),
    };
    if !game.scope().is_empty() {
        return Err(EngineError::Usage(format!(
            "EXH needs a game without free parameters, found {}",
            game.scope()
        )));
    }
    let mut search = ExhSearch { budget, nodes: 0, plays: Vec::new(), open: None };
    let state = ExhState::initial(root.local_count());
    search.explore(root, state)?;
    let lost = search.plays.iter().any(|p| p.outcome.winner() == Some(Player::O));
    let verdict = if lost {
        Verdict::OpponentWinning
    } else if let Some(r) = search.open.clone() {
        Verdict::Undetermined(r)
    } else if search.plays.iter().all(|p| p.outcome.winner() == Some(Player::P)) {
        Verdict::PlayerWinning
    } else {
        return Err(EngineError::Internal("EXH play ended without a winner".into()));
    };
    Ok(ExhReport { verdict, plays: search.plays, nodes: search.nodes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub instance: String,
    pub lhs: Verdict,
    pub rhs: Verdict,
    #[serde(rename = "match")]
    pub matches: bool,
    /// An assignment under which no component is Player-winning, when the
    /// right-hand side is `OpponentWinning`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<BTreeMap<String, String>>,
}

impl TheoremReport {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

fn count_finite(g: &Game, budget: &mut usize) -> Result<(), EngineError> {
    if *budget == 0 {
        return Err(EngineError::Usage("component game exceeds the node budget".into()));
    }
    *budget -= 1;
    if g.branching() == Branching::Infinite {
        return Err(EngineError::Usage("component game has infinite branching".into()));
    }
    for m in g.moves() {
        count_finite(&g.play(&m)?, budget)?;
    }
    Ok(())
}

/// Compares `EXH` on `∀Game I.Γ` with "for every assignment `η` on `I`,
/// some `η(G_i)` is Player-winning", for finite `Γ` and finite `I`.
pub fn theorem_forall_check(
    instance: &str,
    gamma: &[Game],
    bound: &ParamScope,
    budget: Budget,
) -> Result<TheoremReport, EngineError> {
    if !bound.is_finite() {
        return Err(EngineError::Usage("the bound scope must be finite".into()));
    }
    let mut left = budget.max_nodes;
    for g in gamma {
        if !g.scope().is_subset(bound) {
            return Err(EngineError::Usage(format!(
                "free parameters {} are not all bound by {}",
                g.scope(),
                bound
            )));
        }
        count_finite(g, &mut left)?;
    }
    let lhs = exh_verdict(&forall_game(bound.clone(), gamma.to_vec()), budget)?.verdict;
    let atoms: Vec<_> = bound.atom_set().iter().cloned().collect();
    if atoms.len() >= 63 {
        return Err(EngineError::Usage("too many parameters to enumerate assignments".into()));
    }
    let mut rhs = Verdict::PlayerWinning;
    let mut counterexample = None;
    for bits in 0u64..(1u64 << atoms.len()) {
        let mut eta = ParamAssignment::empty();
        for (k, a) in atoms.iter().enumerate() {
            eta.set(a, if bits >> k & 1 == 1 { Player::P } else { Player::O });
        }
        let mut some = false;
        let mut open = None;
        for g in gamma {
            match minimax_winner(g, &eta, budget) {
                Verdict::PlayerWinning => {
                    some = true;
                    break;
                }
                Verdict::OpponentWinning => {}
                Verdict::Undetermined(r) => open = Some(r),
            }
        }
        if some {
            continue;
        }
        if let Some(r) = open {
            rhs = Verdict::Undetermined(r);
            continue;
        }
        rhs = Verdict::OpponentWinning;
        counterexample = Some(
            eta.table().iter().map(|(a, g)| (a.to_string(), g.to_string())).collect(),
        );
        break;
    }
    Ok(TheoremReport { instance: instance.to_string(), matches: lhs == rhs, lhs, rhs, counterexample })
}
