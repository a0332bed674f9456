//! The backtracking game `∀Game I.Γ` and its dual `∃Game I.Γ`.
//!
//! A play keeps a growing list of local positions `G_0 … G_{q-1}`, one
//! per move ever played in a component, starting from the `n` games of
//! `Γ`. On Player's turn the legal moves are `DROP(q)`, `EM(i,j)`,
//! `STOP(i)` and `JUST(i,q)`. After `JUST(i,q)` the root mover of `G_i`
//! plays a move `m` of `G_i`, creating `G_q = (G_i)_m`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::games::{
    dual_game, Arena, Branching, Game, GameError, Label, Move, NodeKind, ParamAssignment,
    ParamScope, Parameter, Player, Violation,
};
use crate::strategy::StrategyTree;

static NEXT_INSTANCE: AtomicU64 = AtomicU64::new(0);

struct Setup {
    id: u64,
    bound: ParamScope,
    gamma: Vec<Game>,
    free: ParamScope,
}

/// `from ⊢_mv to`: local position `to` was created from `from` by `mv`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Justification {
    pub from: usize,
    pub mv: Move,
    pub to: usize,
}

/// A local position together with its node in the component tree.
#[derive(Clone, Debug)]
pub struct Local {
    pub game: Game,
    /// Index of the component of `Γ` this local position lies in.
    pub root: usize,
    /// Path from the root of that component.
    pub path: Vec<Move>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    Drop,
    Em,
    Stop,
    Leaf,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlayOutcome {
    PlayerWins(Reason),
    OpponentWins(Reason),
    /// `STOP` on a free parameter; the winner is whatever an assignment gives it.
    Deferred(Parameter),
    Ongoing,
    BudgetExhausted,
}

impl PlayOutcome {
    pub fn winner(&self) -> Option<Player> {
        match self {
            PlayOutcome::PlayerWins(_) => Some(Player::P),
            PlayOutcome::OpponentWins(_) => Some(Player::O),
            _ => None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(
            self,
            PlayOutcome::PlayerWins(_) | PlayOutcome::OpponentWins(_) | PlayOutcome::Deferred(_)
        )
    }

    /// Settles a deferred outcome with `rho`; other outcomes are unchanged.
    pub fn resolve(&self, rho: &ParamAssignment) -> PlayOutcome {
        match self {
            PlayOutcome::Deferred(a) => match rho.lookup(a) {
                Some(Player::P) => PlayOutcome::PlayerWins(Reason::Stop),
                Some(Player::O) => PlayOutcome::OpponentWins(Reason::Stop),
                None => self.clone(),
            },
            other => other.clone(),
        }
    }

    pub fn won_by(g: Player, reason: Reason) -> PlayOutcome {
        match g {
            Player::P => PlayOutcome::PlayerWins(reason),
            Player::O => PlayOutcome::OpponentWins(reason),
        }
    }

    pub fn dual(&self) -> PlayOutcome {
        match self {
            PlayOutcome::PlayerWins(r) => PlayOutcome::OpponentWins(*r),
            PlayOutcome::OpponentWins(r) => PlayOutcome::PlayerWins(*r),
            PlayOutcome::Deferred(a) => PlayOutcome::Deferred(a.dual()),
            other => other.clone(),
        }
    }
}

impl fmt::Display for PlayOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlayOutcome::PlayerWins(r) => write!(f, "PlayerWins({r:?})"),
            PlayOutcome::OpponentWins(r) => write!(f, "OpponentWins({r:?})"),
            PlayOutcome::Deferred(a) => write!(f, "Deferred({a})"),
            PlayOutcome::Ongoing => f.write_str("Ongoing"),
            PlayOutcome::BudgetExhausted => f.write_str("BudgetExhausted"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ending {
    Drop,
    Em,
    Stop(usize),
}

/// Memo key for ∀Game positions: the multiset of component nodes of the
/// local positions plus the node awaiting a component move. Positions with
/// equal keys have equal sub-games up to renaming of local indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchKey {
    pub instance: u64,
    pub dual: bool,
    pub nodes: Vec<(usize, Vec<Move>)>,
    pub pending: Option<(usize, Vec<Move>)>,
}

#[derive(Clone)]
pub struct ForallPosition {
    setup: Arc<Setup>,
    locals: Vec<Arc<Local>>,
    justification: Vec<Justification>,
    pending: Option<usize>,
    history: Vec<Move>,
    ending: Option<Ending>,
    player_moves: OnceLock<Vec<Move>>,
}

impl fmt::Debug for ForallPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ForallPosition")
            .field("bound", &self.setup.bound.to_string())
            .field("locals", &self.locals.iter().map(|l| (l.root, &l.path)).collect::<Vec<_>>())
            .field("pending", &self.pending)
            .field("history", &self.history)
            .finish()
    }
}

/// `∀Game I.Γ`.
pub fn forall_game(bound: ParamScope, gamma: Vec<Game>) -> Game {
    Game::new(ForallPosition::new(bound, gamma))
}

/// `∃Game I.Γ = (∀Game I.Γ⊥)⊥`.
pub fn exists_game(bound: ParamScope, gamma: Vec<Game>) -> Game {
    dual_game(&forall_game(bound, gamma.iter().map(dual_game).collect()))
}

fn idx(n: u64) -> usize {
    usize::try_from(n).unwrap_or(usize::MAX)
}

impl ForallPosition {
    /// The root position of `∀Game I.Γ`.
    pub fn new(bound: ParamScope, gamma: Vec<Game>) -> Self {
        let free = gamma
            .iter()
            .fold(ParamScope::empty(), |s, g| s.union(&g.scope()))
            .minus(&bound);
        let locals = gamma
            .iter()
            .enumerate()
            .map(|(root, g)| Arc::new(Local { game: g.clone(), root, path: Vec::new() }))
            .collect();
        let id = NEXT_INSTANCE.fetch_add(1, Ordering::Relaxed);
        ForallPosition {
            setup: Arc::new(Setup { id, bound, gamma, free }),
            locals,
            justification: Vec::new(),
            pending: None,
            history: Vec::new(),
            ending: None,
            player_moves: OnceLock::new(),
        }
    }

    /// Replays `history` from the root of `∀Game I.Γ`.
    pub fn replay_from(
        bound: ParamScope,
        gamma: Vec<Game>,
        history: &[Move],
    ) -> Result<Self, GameError> {
        ForallPosition::new(bound, gamma).replay(history)
    }

    /// Replays `moves` from this position.
    pub fn replay(&self, moves: &[Move]) -> Result<Self, GameError> {
        let mut pos = self.clone();
        for (step, m) in moves.iter().enumerate() {
            pos = pos.apply_move(m).map_err(|e| match e {
                GameError::Illegal { mv, violation } => {
                    GameError::IllegalPath { step, mv, violation }
                }
                other => other,
            })?.0;
        }
        Ok(pos)
    }

    /// The root position of the same game.
    pub fn root(&self) -> ForallPosition {
        ForallPosition {
            setup: self.setup.clone(),
            locals: self.locals[..self.setup.gamma.len()].to_vec(),
            justification: Vec::new(),
            pending: None,
            history: Vec::new(),
            ending: None,
            player_moves: OnceLock::new(),
        }
    }

    pub fn bound(&self) -> &ParamScope {
        &self.setup.bound
    }

    pub fn gamma(&self) -> &[Game] {
        &self.setup.gamma
    }

    /// `FV(Γ) ∖ I`, as a cover.
    pub fn free_scope(&self) -> &ParamScope {
        &self.setup.free
    }

    pub fn locals(&self) -> &[Arc<Local>] {
        &self.locals
    }

    pub fn local(&self, i: usize) -> Option<&Game> {
        self.locals.get(i).map(|l| &l.game)
    }

    pub fn local_count(&self) -> usize {
        self.locals.len()
    }

    pub fn justification(&self) -> &[Justification] {
        &self.justification
    }

    pub fn pending(&self) -> Option<usize> {
        self.pending
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn is_finished(&self) -> bool {
        self.ending.is_some()
    }

    pub fn outcome(&self) -> PlayOutcome {
        match self.ending {
            None => PlayOutcome::Ongoing,
            Some(Ending::Drop) => PlayOutcome::OpponentWins(Reason::Drop),
            Some(Ending::Em) => PlayOutcome::PlayerWins(Reason::Em),
            Some(Ending::Stop(i)) => match self.locals[i].game.label() {
                Some(Label::Player(g)) => PlayOutcome::won_by(g, Reason::Stop),
                Some(Label::Param(a)) => PlayOutcome::Deferred(a),
                None => unreachable!("STOP is only legal on leaves"),
            },
        }
    }

    /// The player to move, `None` once the play is over.
    pub fn mover(&self) -> Option<Player> {
        if self.ending.is_some() {
            return None;
        }
        match self.pending {
            None => Some(Player::P),
            Some(i) => self.locals[i].game.mover(),
        }
    }

    fn is_bound(&self, a: &Parameter) -> bool {
        self.setup.bound.contains(a)
    }

    fn leaf_param(&self, i: usize) -> Option<Parameter> {
        match self.locals.get(i)?.game.label()? {
            Label::Param(a) => Some(a),
            Label::Player(_) => None,
        }
    }

    /// Whether `EM(i,j)` is legal on the local positions `i`, `j`.
    pub fn em_allowed(&self, i: usize, j: usize) -> bool {
        match (self.leaf_param(i), self.leaf_param(j)) {
            (Some(a), Some(b)) => self.is_bound(&a) && b == a.dual(),
            _ => false,
        }
    }

    fn stop_allowed(&self, i: usize) -> bool {
        match self.locals.get(i).and_then(|l| l.game.label()) {
            Some(Label::Player(_)) => true,
            Some(Label::Param(a)) => !self.is_bound(&a),
            None => false,
        }
    }

    fn compute_player_moves(&self) -> Vec<Move> {
        let q = self.locals.len() as u64;
        let mut out = vec![Move::Drop(q)];
        let mut by_param: HashMap<Parameter, Vec<usize>> = HashMap::new();
        for (i, l) in self.locals.iter().enumerate() {
            match l.game.label() {
                Some(Label::Param(a)) => {
                    if !self.is_bound(&a) {
                        out.push(Move::Stop(i as u64));
                    }
                    by_param.entry(a).or_default().push(i);
                }
                Some(Label::Player(_)) => out.push(Move::Stop(i as u64)),
                None => out.push(Move::Just(i as u64, q)),
            }
        }
        for (a, is) in &by_param {
            if !self.is_bound(a) {
                continue;
            }
            if let Some(js) = by_param.get(&a.dual()) {
                for &i in is {
                    out.extend(js.iter().map(|&j| Move::Em(i as u64, j as u64)));
                }
            }
        }
        out.sort();
        out
    }

    /// The legal moves, in ascending code order.
    pub fn legal_moves(&self) -> Box<dyn Iterator<Item = Move> + '_> {
        if self.ending.is_some() {
            return Box::new(std::iter::empty());
        }
        match self.pending {
            Some(i) => Box::new(self.locals[i].game.moves()),
            None => Box::new(self.player_moves().iter().copied()),
        }
    }

    fn player_moves(&self) -> &[Move] {
        self.player_moves.get_or_init(|| self.compute_player_moves())
    }

    fn check(&self, m: &Move) -> Result<(), Violation> {
        if self.ending.is_some() {
            return Err(Violation::Finished);
        }
        if self.pending.is_some() {
            return Ok(());
        }
        let q = self.locals.len() as u64;
        let exists = |i: u64| {
            if idx(i) < self.locals.len() {
                Ok(idx(i))
            } else {
                Err(Violation::NoSuchLocal { i })
            }
        };
        match *m {
            Move::Drop(n) if n == q => Ok(()),
            Move::Drop(_) => Err(Violation::DropCount { expected: q }),
            Move::Em(i, j) => {
                let (a, b) = (exists(i)?, exists(j)?);
                if self.em_allowed(a, b) {
                    Ok(())
                } else {
                    Err(Violation::EmNotDual { i, j })
                }
            }
            Move::Stop(i) => {
                if self.stop_allowed(exists(i)?) {
                    Ok(())
                } else {
                    Err(Violation::StopNotAllowed { i })
                }
            }
            Move::Just(i, n) => {
                let a = exists(i)?;
                if n != q {
                    Err(Violation::JustTarget { i, n, expected: q })
                } else if self.locals[a].game.is_leaf() {
                    Err(Violation::JustAtomic { i })
                } else {
                    Ok(())
                }
            }
            Move::Nth(_) => Err(Violation::NoPendingLocal),
        }
    }

    /// Plays `m`, returning the new position and its outcome.
    pub fn apply_move(&self, m: &Move) -> Result<(ForallPosition, PlayOutcome), GameError> {
        self.check(m).map_err(|v| GameError::illegal(*m, v))?;
        let mut next = ForallPosition {
            setup: self.setup.clone(),
            locals: self.locals.clone(),
            justification: self.justification.clone(),
            pending: None,
            history: self.history.clone(),
            ending: None,
            player_moves: OnceLock::new(),
        };
        next.history.push(*m);
        match (self.pending, *m) {
            (Some(i), _) => {
                let parent = &self.locals[i];
                let child = parent.game.play(m).map_err(|e| {
                    let inner = e.violation().cloned().unwrap_or(Violation::Finished);
                    GameError::illegal(*m, Violation::Component { i: i as u64, inner: Box::new(inner) })
                })?;
                let mut path = parent.path.clone();
                path.push(*m);
                let to = next.locals.len();
                next.locals.push(Arc::new(Local { game: child, root: parent.root, path }));
                next.justification.push(Justification { from: i, mv: *m, to });
            }
            (None, Move::Drop(_)) => next.ending = Some(Ending::Drop),
            (None, Move::Em(..)) => next.ending = Some(Ending::Em),
            (None, Move::Stop(i)) => next.ending = Some(Ending::Stop(idx(i))),
            (None, Move::Just(i, _)) => next.pending = Some(idx(i)),
            (None, Move::Nth(_)) => unreachable!("rejected by check"),
        }
        let outcome = next.outcome();
        Ok((next, outcome))
    }

    /// Moves already played from local position `i`.
    pub fn used_moves(&self, i: usize) -> BTreeSet<Move> {
        self.justification.iter().filter(|t| t.from == i).map(|t| t.mv).collect()
    }

    /// Whether `i ⊢_m j` holds for at most one `j`, for every `(i, m)`.
    pub fn is_non_repeating(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.justification.iter().all(|t| seen.insert((t.from, t.mv)))
    }

    /// Whether no two local positions are `END(a)`, `END(a⊥)` with `a` bound.
    /// Local positions only accumulate, so checking the last prefix suffices.
    pub fn is_em_forbidding(&self) -> bool {
        let leaves: BTreeSet<Parameter> =
            (0..self.locals.len()).filter_map(|i| self.leaf_param(i)).collect();
        !leaves.iter().any(|a| self.is_bound(a) && leaves.contains(&a.dual()))
    }

    /// The assignment giving Opponent every generic local position, and
    /// Opponent the positive orientation of every untouched parameter.
    pub fn worst_case_assignment(&self) -> Result<ParamAssignment, GameError> {
        if !self.is_em_forbidding() {
            return Err(GameError::Precondition(
                "the worst-case assignment is only defined on EM-forbidding plays".into(),
            ));
        }
        let mut eta = ParamAssignment::constant(Player::O);
        for i in 0..self.locals.len() {
            if let Some(a) = self.leaf_param(i) {
                eta.set(&a, Player::O);
            }
        }
        Ok(eta)
    }

    /// The counter-strategy `τ_i`: every local play on `G_i`, found by
    /// chasing justification chains from `i`.
    pub fn counter_strategy(&self, i: usize) -> Result<StrategyTree, GameError> {
        if i >= self.locals.len() {
            return Err(GameError::illegal(Move::Stop(i as u64), Violation::NoSuchLocal { i: i as u64 }));
        }
        let mut children: BTreeMap<usize, Vec<(Move, usize)>> = BTreeMap::new();
        for t in &self.justification {
            children.entry(t.from).or_default().push((t.mv, t.to));
        }
        let mut paths = BTreeSet::from([Vec::new()]);
        let mut stack = vec![(i, Vec::new())];
        while let Some((j, path)) = stack.pop() {
            for &(m, k) in children.get(&j).into_iter().flatten() {
                let mut p: Vec<Move> = path.clone();
                p.push(m);
                paths.insert(p.clone());
                stack.push((k, p));
            }
        }
        Ok(StrategyTree::from_paths(paths).expect("justification chains are prefix-closed"))
    }

    fn search_key_value(&self) -> SearchKey {
        let mut nodes: Vec<(usize, Vec<Move>)> =
            self.locals.iter().map(|l| (l.root, l.path.clone())).collect();
        nodes.sort();
        SearchKey {
            instance: self.setup.id,
            dual: false,
            nodes,
            pending: self.pending.map(|i| (self.locals[i].root, self.locals[i].path.clone())),
        }
    }

    fn superfluous(&self, m: &Move) -> bool {
        match (self.pending, *m) {
            (Some(i), _) => {
                self.locals[i].game.mover() == Some(Player::P)
                    && self.justification.iter().any(|t| t.from == i && t.mv == *m)
            }
            (None, Move::Just(i, _)) => {
                let i = idx(i);
                let Some(g) = self.local(i) else { return false };
                let used = self.justification.iter().filter(|t| t.from == i).count();
                match (g.mover(), g.branching()) {
                    (Some(Player::O), _) => used > 0,
                    (Some(Player::P), Branching::Finite(k)) => used >= k,
                    _ => false,
                }
            }
            _ => false,
        }
    }

    /// The position as a game whose root is this position.
    pub fn to_game(&self) -> Game {
        Game::new(self.clone())
    }
}

impl Arena for ForallPosition {
    fn kind(&self) -> NodeKind {
        match self.ending {
            Some(Ending::Drop) => NodeKind::Leaf(Label::Player(Player::O)),
            Some(Ending::Em) => NodeKind::Leaf(Label::Player(Player::P)),
            Some(Ending::Stop(i)) => {
                NodeKind::Leaf(self.locals[i].game.label().expect("STOP is only legal on leaves"))
            }
            None => NodeKind::Inner(self.mover().expect("ongoing play has a mover")),
        }
    }

    fn branching(&self) -> Branching {
        if self.ending.is_some() {
            return Branching::Finite(0);
        }
        match self.pending {
            Some(i) => self.locals[i].game.branching(),
            None => Branching::Finite(self.player_moves().len()),
        }
    }

    fn move_at(&self, k: usize) -> Option<Move> {
        if self.ending.is_some() {
            return None;
        }
        match self.pending {
            Some(i) => self.locals[i].game.move_at(k),
            None => self.player_moves().get(k).copied(),
        }
    }

    fn play(&self, m: &Move) -> Result<Game, GameError> {
        self.apply_move(m).map(|(p, _)| Game::new(p))
    }

    fn scope(&self) -> ParamScope {
        self.setup.free.clone()
    }

    fn forall_position(&self) -> Option<&ForallPosition> {
        Some(self)
    }

    fn search_key(&self) -> Option<SearchKey> {
        Some(self.search_key_value())
    }

    fn is_superfluous(&self, m: &Move) -> bool {
        self.superfluous(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{disjunction, end_game};
    use crate::logic::SecondOrderVar;

    fn a() -> Parameter {
        Parameter::positive("X", vec![0])
    }

    fn bound() -> ParamScope {
        ParamScope::atoms([a()])
    }

    #[test]
    fn empty_sequent_only_drops() {
        let pos = ForallPosition::new(ParamScope::empty(), vec![]);
        assert_eq!(pos.legal_moves().collect::<Vec<_>>(), vec![Move::Drop(0)]);
        let (_, out) = pos.apply_move(&Move::Drop(0)).unwrap();
        assert_eq!(out, PlayOutcome::OpponentWins(Reason::Drop));
    }

    #[test]
    fn em_on_dual_generic_games() {
        let pos = ForallPosition::new(bound(), vec![end_game(a()), end_game(a().dual())]);
        let legal: Vec<_> = pos.legal_moves().collect();
        assert!(legal.contains(&Move::Em(0, 1)));
        assert!(!legal.contains(&Move::Stop(0)));
        let (_, out) = pos.apply_move(&Move::Em(0, 1)).unwrap();
        assert_eq!(out, PlayOutcome::PlayerWins(Reason::Em));
    }

    #[test]
    fn bound_generic_leaf_only_drops() {
        let pos = ForallPosition::new(bound(), vec![end_game(a())]);
        assert_eq!(pos.legal_moves().collect::<Vec<_>>(), vec![Move::Drop(1)]);
        let err = pos.apply_move(&Move::Stop(0)).unwrap_err();
        assert_eq!(err.violation(), Some(&Violation::StopNotAllowed { i: 0 }));
    }

    #[test]
    fn stop_on_free_parameter_defers() {
        let pos = ForallPosition::new(ParamScope::empty(), vec![end_game(a())]);
        let (_, out) = pos.apply_move(&Move::Stop(0)).unwrap();
        assert_eq!(out, PlayOutcome::Deferred(a()));
        let rho = ParamAssignment::empty().with(&a(), Player::P);
        assert_eq!(out.resolve(&rho), PlayOutcome::PlayerWins(Reason::Stop));
    }

    #[test]
    fn stop_on_player_leaf() {
        let pos = ForallPosition::new(ParamScope::empty(), vec![end_game(Player::P)]);
        assert!(pos.legal_moves().any(|m| m == Move::Stop(0)));
    }

    #[test]
    fn just_then_component_move_adds_a_local() {
        let ab = disjunction(vec![end_game(Player::O), end_game(Player::P)]);
        let pos = ForallPosition::new(ParamScope::empty(), vec![ab]);
        let (p1, _) = pos.apply_move(&Move::Just(0, 1)).unwrap();
        assert_eq!(p1.pending(), Some(0));
        assert_eq!(p1.legal_moves().collect::<Vec<_>>(), vec![Move::Nth(1), Move::Nth(2)]);
        let (p2, out) = p1.apply_move(&Move::Nth(1)).unwrap();
        assert_eq!(out, PlayOutcome::Ongoing);
        assert_eq!(p2.local_count(), 2);
        assert_eq!(p2.local(1).unwrap().label(), Some(Player::O.into()));
        assert_eq!(p2.justification(), &[Justification { from: 0, mv: Move::Nth(1), to: 1 }]);
        let tau = p2.counter_strategy(0).unwrap();
        assert_eq!(tau.paths().cloned().collect::<Vec<_>>(), vec![vec![], vec![Move::Nth(1)]]);
        assert_eq!(pos.counter_strategy(0).unwrap().len(), 1);
    }

    #[test]
    fn illegal_moves_name_their_clause() {
        let ab = disjunction(vec![end_game(Player::O), end_game(Player::P)]);
        let pos = ForallPosition::new(ParamScope::empty(), vec![ab, end_game(Player::O)]);
        let v = |m: Move| pos.apply_move(&m).unwrap_err().violation().cloned().unwrap();
        assert_eq!(v(Move::Drop(0)), Violation::DropCount { expected: 2 });
        assert_eq!(v(Move::Just(0, 5)), Violation::JustTarget { i: 0, n: 5, expected: 2 });
        assert_eq!(v(Move::Just(1, 2)), Violation::JustAtomic { i: 1 });
        assert_eq!(v(Move::Stop(7)), Violation::NoSuchLocal { i: 7 });
        assert_eq!(v(Move::Nth(1)), Violation::NoPendingLocal);
        let (p1, _) = pos.apply_move(&Move::Just(0, 2)).unwrap();
        assert!(matches!(
            p1.apply_move(&Move::Nth(3)).unwrap_err().violation(),
            Some(Violation::Component { i: 0, .. })
        ));
    }

    #[test]
    fn repetition_and_em_forbidding() {
        let x = SecondOrderVar::new("X", 1);
        let g = disjunction(vec![end_game(a()), end_game(a().dual())]);
        let root = ForallPosition::new(ParamScope::var(x), vec![g]);
        let rep = root
            .replay(&[Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(1)])
            .unwrap();
        assert!(!rep.is_non_repeating());
        assert!(rep.is_em_forbidding());
        let fine = root
            .replay(&[Move::Just(0, 1), Move::Nth(1), Move::Just(0, 2), Move::Nth(2)])
            .unwrap();
        assert!(fine.is_non_repeating());
        assert!(!fine.is_em_forbidding());
        assert!(fine.worst_case_assignment().is_err());
        let eta = rep.worst_case_assignment().unwrap();
        assert_eq!(eta.lookup(&a()), Some(Player::O));
        assert_eq!(eta.lookup(&a().dual()), Some(Player::P));
        assert_eq!(eta.lookup(&Parameter::positive("Y", vec![3])), Some(Player::O));
    }

    #[test]
    fn existential_is_the_dual_construction() {
        let g = exists_game(bound(), vec![end_game(a())]);
        assert_eq!(g.mover(), Some(Player::O));
        let after = g.play(&Move::Drop(1)).unwrap();
        assert_eq!(after.label(), Some(Player::P.into()));
    }
}
