use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{encode_move, Label, Move, ParamAssignment, ParamScope, Player};
use crate::forall::{ForallPosition, SearchKey};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(Label),
    Inner(Player),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    Finite(usize),
    Infinite,
}

/// The clause a rejected move violates.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("the game is over")]
    Finished,
    #[error("only NTH moves select a component here")]
    NotNth,
    #[error("NTH({n}) is outside the {available} available components")]
    NthOutOfRange { n: u64, available: String },
    #[error("DROP must name the current number of local positions ({expected})")]
    DropCount { expected: u64 },
    #[error("EM({i},{j}) needs END(a) at {i} and END(a⊥) at {j} with a bound")]
    EmNotDual { i: u64, j: u64 },
    #[error("STOP({i}) needs a leaf labelled by a player or a free parameter")]
    StopNotAllowed { i: u64 },
    #[error("JUST({i},{n}) must create local position {expected}")]
    JustTarget { i: u64, n: u64, expected: u64 },
    #[error("JUST({i},_) needs an existing non-atomic local position")]
    JustAtomic { i: u64 },
    #[error("local position {i} does not exist")]
    NoSuchLocal { i: u64 },
    #[error("no local position awaits a component move (play JUST first)")]
    NoPendingLocal,
    #[error("not a move of local position {i}: {inner}")]
    Component { i: u64, inner: Box<Violation> },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("illegal move {mv}: {violation}")]
    Illegal { mv: Move, violation: Violation },
    #[error("illegal path at step {step} ({mv}): {violation}")]
    IllegalPath { step: usize, mv: Move, violation: Violation },
    #[error("parameter {0} is not covered by the assignment")]
    Uncovered(String),
    #[error("{0}")]
    Precondition(String),
}

impl GameError {
    pub fn illegal(mv: Move, violation: Violation) -> Self {
        GameError::Illegal { mv, violation }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            GameError::Illegal { violation, .. } | GameError::IllegalPath { violation, .. } => {
                Some(violation)
            }
            GameError::Uncovered(_) | GameError::Precondition(_) => None,
        }
    }
}

/// A node of a lazily explored game tree.
///
/// `move_at(k)` enumerates the legal moves in ascending code order and
/// must return `None` exactly from the first index past the last move.
pub trait Arena: Send + Sync {
    fn kind(&self) -> NodeKind;
    fn branching(&self) -> Branching;
    fn move_at(&self, k: usize) -> Option<Move>;
    fn play(&self, m: &Move) -> Result<Game, GameError>;
    /// A cover of the parameters reachable at leaves.
    fn scope(&self) -> ParamScope;

    /// A cheap structural dual, when the arena has one.
    fn dual(&self) -> Option<Game> {
        None
    }

    fn forall_position(&self) -> Option<&ForallPosition> {
        None
    }

    /// Identifies positions whose sub-games coincide, for memoised search.
    fn search_key(&self) -> Option<SearchKey> {
        None
    }

    /// Whether playing `m` here leads to a position Player never needs to
    /// consider. Search procedures may skip such moves.
    fn is_superfluous(&self, _m: &Move) -> bool {
        false
    }
}

#[derive(Clone)]
pub struct Game(Arc<dyn Arena>);

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            NodeKind::Leaf(l) => write!(f, "END({l})"),
            NodeKind::Inner(g) => write!(f, "Game({g} to move, {:?})", self.branching()),
        }
    }
}

impl Game {
    pub fn new(arena: impl Arena + 'static) -> Self {
        Game(Arc::new(arena))
    }

    pub fn kind(&self) -> NodeKind {
        self.0.kind()
    }

    pub fn branching(&self) -> Branching {
        self.0.branching()
    }

    pub fn move_at(&self, k: usize) -> Option<Move> {
        self.0.move_at(k)
    }

    pub fn moves(&self) -> impl Iterator<Item = Move> + '_ {
        (0..).map_while(move |k| self.move_at(k))
    }

    pub fn play(&self, m: &Move) -> Result<Game, GameError> {
        self.0.play(m)
    }

    pub fn scope(&self) -> ParamScope {
        self.0.scope()
    }

    pub fn forall_position(&self) -> Option<&ForallPosition> {
        self.0.forall_position()
    }

    pub fn is_superfluous(&self, m: &Move) -> bool {
        self.0.is_superfluous(m)
    }

    pub fn search_key(&self) -> Option<SearchKey> {
        self.0.search_key()
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind(), NodeKind::Leaf(_))
    }

    pub fn label(&self) -> Option<Label> {
        match self.kind() {
            NodeKind::Leaf(l) => Some(l),
            NodeKind::Inner(_) => None,
        }
    }

    /// The player moving at the root, `None` at a leaf.
    pub fn mover(&self) -> Option<Player> {
        match self.kind() {
            NodeKind::Leaf(_) => None,
            NodeKind::Inner(g) => Some(g),
        }
    }

    /// Whether `self` and `other` are the same shared arena value.
    pub fn ptr_eq(&self, other: &Game) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The tree truncated at `depth` with at most `branch` children per node.
    pub fn dump(&self, depth: usize, branch: usize) -> DumpNode {
        match self.kind() {
            NodeKind::Leaf(l) => DumpNode::Leaf { label: l.to_string() },
            NodeKind::Inner(g) => {
                let children = if depth == 0 {
                    Vec::new()
                } else {
                    self.moves()
                        .take(branch)
                        .map(|m| DumpEdge {
                            mv: encode_move(&m),
                            node: self
                                .play(&m)
                                .expect("enumerated moves are legal")
                                .dump(depth - 1, branch),
                        })
                        .collect()
                };
                DumpNode::Inner { mover: g.to_string(), children }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DumpNode {
    Leaf { label: String },
    Inner { mover: String, children: Vec<DumpEdge> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpEdge {
    #[serde(rename = "move")]
    pub mv: u64,
    pub node: DumpNode,
}

/// Whether two games agree on node kinds and move streams down to `depth`,
/// looking at the first `branch` moves of every node.
pub fn games_equivalent(a: &Game, b: &Game, depth: usize, branch: usize) -> bool {
    if a.kind() != b.kind() {
        return false;
    }
    if depth == 0 || a.is_leaf() {
        return true;
    }
    let ma: Vec<Move> = a.moves().take(branch).collect();
    let mb: Vec<Move> = b.moves().take(branch).collect();
    ma == mb
        && ma.iter().all(|m| match (a.play(m), b.play(m)) {
            (Ok(ca), Ok(cb)) => games_equivalent(&ca, &cb, depth - 1, branch),
            _ => false,
        })
}

struct End(Label);

impl Arena for End {
    fn kind(&self) -> NodeKind {
        NodeKind::Leaf(self.0.clone())
    }

    fn branching(&self) -> Branching {
        Branching::Finite(0)
    }

    fn move_at(&self, _k: usize) -> Option<Move> {
        None
    }

    fn play(&self, m: &Move) -> Result<Game, GameError> {
        Err(GameError::illegal(*m, Violation::Finished))
    }

    fn scope(&self) -> ParamScope {
        match &self.0 {
            Label::Param(a) => ParamScope::atoms([a.clone()]),
            Label::Player(_) => ParamScope::empty(),
        }
    }

    fn dual(&self) -> Option<Game> {
        Some(end_game(self.0.dual()))
    }
}

pub fn end_game(label: impl Into<Label>) -> Game {
    Game::new(End(label.into()))
}

type ChildFn = Arc<dyn Fn(u64) -> Game + Send + Sync>;

#[derive(Clone)]
enum Children {
    /// Selected by `NTH(1)` … `NTH(n)`.
    Finite(Arc<[Game]>),
    /// Selected by `NTH(0)`, `NTH(1)`, ….
    Naturals(ChildFn),
}

struct Indexed {
    mover: Player,
    children: Children,
    scope: ParamScope,
}

impl Arena for Indexed {
    fn kind(&self) -> NodeKind {
        NodeKind::Inner(self.mover)
    }

    fn branching(&self) -> Branching {
        match &self.children {
            Children::Finite(cs) => Branching::Finite(cs.len()),
            Children::Naturals(_) => Branching::Infinite,
        }
    }

    fn move_at(&self, k: usize) -> Option<Move> {
        match &self.children {
            Children::Finite(cs) => (k < cs.len()).then(|| Move::Nth(k as u64 + 1)),
            Children::Naturals(_) => Some(Move::Nth(k as u64)),
        }
    }

    fn play(&self, m: &Move) -> Result<Game, GameError> {
        let Move::Nth(n) = *m else {
            return Err(GameError::illegal(*m, Violation::NotNth));
        };
        match &self.children {
            Children::Finite(cs) => match usize::try_from(n) {
                Ok(k) if (1..=cs.len()).contains(&k) => Ok(cs[k - 1].clone()),
                _ => Err(GameError::illegal(
                    *m,
                    Violation::NthOutOfRange { n, available: format!("NTH(1)..NTH({})", cs.len()) },
                )),
            },
            Children::Naturals(f) => Ok(f(n)),
        }
    }

    fn scope(&self) -> ParamScope {
        self.scope.clone()
    }

    fn dual(&self) -> Option<Game> {
        let children = match &self.children {
            Children::Finite(cs) => Children::Finite(cs.iter().map(dual_game).collect()),
            Children::Naturals(f) => {
                let f = f.clone();
                Children::Naturals(Arc::new(move |n| dual_game(&f(n))))
            }
        };
        Some(Game::new(Indexed { mover: self.mover.dual(), children, scope: self.scope.clone() }))
    }
}

fn indexed_finite(mover: Player, children: Vec<Game>) -> Game {
    if children.is_empty() {
        return end_game(mover.dual());
    }
    let scope = children.iter().fold(ParamScope::empty(), |s, g| s.union(&g.scope()));
    Game::new(Indexed { mover, children: Children::Finite(children.into()), scope })
}

fn indexed_naturals(
    mover: Player,
    child: impl Fn(u64) -> Game + Send + Sync + 'static,
    scope: ParamScope,
) -> Game {
    Game::new(Indexed { mover, children: Children::Naturals(Arc::new(child)), scope })
}

/// `∨` over a finite list; `NTH(k)` selects the `k`-th child, counting from 1.
pub fn disjunction(children: Vec<Game>) -> Game {
    indexed_finite(Player::P, children)
}

pub fn conjunction(children: Vec<Game>) -> Game {
    indexed_finite(Player::O, children)
}

/// `∨` over `ℕ`; `NTH(n)` selects `child(n)`. `scope` must cover every child.
pub fn disjunction_over_naturals(
    child: impl Fn(u64) -> Game + Send + Sync + 'static,
    scope: ParamScope,
) -> Game {
    indexed_naturals(Player::P, child, scope)
}

pub fn conjunction_over_naturals(
    child: impl Fn(u64) -> Game + Send + Sync + 'static,
    scope: ParamScope,
) -> Game {
    indexed_naturals(Player::O, child, scope)
}

struct Dual(Game);

impl Arena for Dual {
    fn kind(&self) -> NodeKind {
        match self.0.kind() {
            NodeKind::Leaf(l) => NodeKind::Leaf(l.dual()),
            NodeKind::Inner(g) => NodeKind::Inner(g.dual()),
        }
    }

    fn branching(&self) -> Branching {
        self.0.branching()
    }

    fn move_at(&self, k: usize) -> Option<Move> {
        self.0.move_at(k)
    }

    fn play(&self, m: &Move) -> Result<Game, GameError> {
        self.0.play(m).map(|g| dual_game(&g))
    }

    fn scope(&self) -> ParamScope {
        self.0.scope()
    }

    fn dual(&self) -> Option<Game> {
        Some(self.0.clone())
    }

    fn forall_position(&self) -> Option<&ForallPosition> {
        self.0.forall_position()
    }

    fn search_key(&self) -> Option<SearchKey> {
        self.0.search_key().map(|k| SearchKey { dual: !k.dual, ..k })
    }

    fn is_superfluous(&self, m: &Move) -> bool {
        self.0.is_superfluous(m)
    }
}

/// `G⊥`: the same tree with the roles of the players swapped.
pub fn dual_game(g: &Game) -> Game {
    g.0.dual().unwrap_or_else(|| Game::new(Dual(g.clone())))
}

/// The sub-game reached by `path`.
pub fn subgame(g: &Game, path: &[Move]) -> Result<Game, GameError> {
    let mut cur = g.clone();
    for (step, m) in path.iter().enumerate() {
        cur = cur.play(m).map_err(|e| match e {
            GameError::Illegal { mv, violation } => GameError::IllegalPath { step, mv, violation },
            other => other,
        })?;
    }
    Ok(cur)
}

struct Assigned {
    rho: Arc<ParamAssignment>,
    inner: Game,
}

impl Arena for Assigned {
    fn kind(&self) -> NodeKind {
        match self.inner.kind() {
            NodeKind::Leaf(Label::Param(a)) => match self.rho.lookup(&a) {
                Some(g) => NodeKind::Leaf(Label::Player(g)),
                None => NodeKind::Leaf(Label::Param(a)),
            },
            k => k,
        }
    }

    fn branching(&self) -> Branching {
        self.inner.branching()
    }

    fn move_at(&self, k: usize) -> Option<Move> {
        self.inner.move_at(k)
    }

    fn play(&self, m: &Move) -> Result<Game, GameError> {
        let child = self.inner.play(m)?;
        Ok(Game::new(Assigned { rho: self.rho.clone(), inner: child }))
    }

    fn scope(&self) -> ParamScope {
        ParamScope::empty()
    }

    fn forall_position(&self) -> Option<&ForallPosition> {
        self.inner.forall_position()
    }

    fn search_key(&self) -> Option<SearchKey> {
        self.inner.search_key()
    }

    fn is_superfluous(&self, m: &Move) -> bool {
        self.inner.is_superfluous(m)
    }
}

/// `ρ(G)`: the same tree with every parameter leaf `a` relabelled `ρ(a)`.
///
/// Fails if the declared scope of `g` is not covered by `rho`.
pub fn apply_assignment(rho: &ParamAssignment, g: &Game) -> Result<Game, GameError> {
    let scope = g.scope();
    if scope.is_empty() {
        return Ok(g.clone());
    }
    if let Some(missing) = rho.uncovered_in(&scope) {
        return Err(GameError::Uncovered(missing));
    }
    Ok(Game::new(Assigned { rho: Arc::new(rho.clone()), inner: g.clone() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::Parameter;

    fn a() -> Parameter {
        Parameter::positive("X", vec![0])
    }

    #[test]
    fn empty_connectives() {
        assert_eq!(disjunction(vec![]).kind(), NodeKind::Leaf(Player::O.into()));
        assert_eq!(conjunction(vec![]).kind(), NodeKind::Leaf(Player::P.into()));
    }

    #[test]
    fn nth_selects_children_from_one() {
        let g = disjunction(vec![end_game(Player::O), end_game(Player::P)]);
        assert_eq!(g.moves().collect::<Vec<_>>(), vec![Move::Nth(1), Move::Nth(2)]);
        assert_eq!(g.play(&Move::Nth(2)).unwrap().label(), Some(Player::P.into()));
        assert!(matches!(
            g.play(&Move::Nth(3)),
            Err(GameError::Illegal { violation: Violation::NthOutOfRange { n: 3, .. }, .. })
        ));
        assert!(g.play(&Move::Nth(0)).is_err());
        assert!(g.play(&Move::Stop(1)).is_err());
    }

    #[test]
    fn naturals_select_from_zero() {
        let g = disjunction_over_naturals(
            |n| end_game(if n == 3 { Player::P } else { Player::O }),
            ParamScope::empty(),
        );
        assert_eq!(g.branching(), Branching::Infinite);
        assert_eq!(g.move_at(0), Some(Move::Nth(0)));
        assert_eq!(g.play(&Move::Nth(3)).unwrap().label(), Some(Player::P.into()));
    }

    #[test]
    fn duals_of_leaves_and_connectives() {
        let leaf = end_game(a());
        assert_eq!(dual_game(&leaf).label(), Some(a().dual().into()));
        let d = disjunction(vec![end_game(a()), end_game(Player::P)]);
        let c = conjunction(vec![end_game(a().dual()), end_game(Player::O)]);
        assert!(games_equivalent(&dual_game(&d), &c, 5, 5));
        assert!(games_equivalent(&dual_game(&dual_game(&d)), &d, 5, 5));
    }

    #[test]
    fn subgame_reports_the_offending_step() {
        let inner = disjunction(vec![end_game(Player::P)]);
        let g = conjunction(vec![inner.clone(), end_game(Player::P)]);
        assert!(subgame(&g, &[]).unwrap().ptr_eq(&g));
        assert!(subgame(&g, &[Move::Nth(1)]).unwrap().ptr_eq(&inner));
        let err = subgame(&g, &[Move::Nth(1), Move::Nth(5)]).unwrap_err();
        assert!(matches!(err, GameError::IllegalPath { step: 1, mv: Move::Nth(5), .. }));
    }

    #[test]
    fn assignments_relabel_leaves_only() {
        let g = disjunction(vec![end_game(a()), end_game(a().dual())]);
        let rho = ParamAssignment::empty().with(&a(), Player::O);
        let rg = apply_assignment(&rho, &g).unwrap();
        assert_eq!(rg.play(&Move::Nth(1)).unwrap().label(), Some(Player::O.into()));
        assert_eq!(rg.play(&Move::Nth(2)).unwrap().label(), Some(Player::P.into()));
        assert_eq!(rg.moves().collect::<Vec<_>>(), g.moves().collect::<Vec<_>>());
        assert!(matches!(
            apply_assignment(&ParamAssignment::empty(), &g),
            Err(GameError::Uncovered(_))
        ));
        let closed = end_game(Player::P);
        assert!(apply_assignment(&ParamAssignment::empty(), &closed).unwrap().ptr_eq(&closed));
    }

    #[test]
    fn dump_shape() {
        let g = disjunction(vec![end_game(Player::O), end_game(a())]);
        let json = serde_json::to_value(g.dump(3, 8)).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "kind": "inner", "mover": "P", "children": [
                    {"move": 9, "node": {"kind": "leaf", "label": "O"}},
                    {"move": 14, "node": {"kind": "leaf", "label": "X(0)"}}
                ]
            })
        );
    }
}
