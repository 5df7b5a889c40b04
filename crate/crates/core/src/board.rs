//! Boards, winning families, ownership state and the stage-reduction rules of the
//! multistage game.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, SimpleGraph};

/// Element id. Ids are dense `0..ground` on the initial board and keep their
/// meaning on every later (reduced) board.
pub type Element = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "Maker",
            Player::Breaker => "Breaker",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    Free,
    Maker,
    Breaker,
}

impl From<Player> for Owner {
    fn from(p: Player) -> Owner {
        match p {
            Player::Maker => Owner::Maker,
            Player::Breaker => Owner::Breaker,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Standard,
    /// A stage ends as soon as Maker owns a winning set; the next board keeps
    /// Maker's and the still-free elements.
    Stop,
}

/// A stage board: a subset of the ground set, optionally labelled as `E(K_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Board {
    ground: usize,
    /// Vertex count when the ground set is `E(K_n)`, else 0.
    n: usize,
    elements: Vec<Element>,
}

/// `E(K_n)` with edges numbered in lexicographic pair order.
pub fn complete_graph_board(n: usize) -> Result<Board> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "complete graph board needs n >= 2, got {n}"
        )));
    }
    if n > graph::simple::MAX_VERTICES {
        return Err(Error::SizeLimit {
            what: "board vertices",
            limit: graph::simple::MAX_VERTICES,
            got: n,
        });
    }
    let ground = graph::simple::edge_count_complete(n);
    Ok(Board {
        ground,
        n,
        elements: (0..ground).collect(),
    })
}

impl Board {
    /// Unlabelled board with elements `0..size`.
    pub fn abstract_board(size: usize) -> Board {
        Board {
            ground: size,
            n: 0,
            elements: (0..size).collect(),
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_labeled(&self) -> bool {
        self.n > 0
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// Vertex pair of an element on a labelled board.
    pub fn label(&self, e: Element) -> Option<(usize, usize)> {
        (self.is_labeled() && e < self.ground).then(|| graph::edge_endpoints(self.n, e))
    }

    pub fn to_bitset(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.ground);
        for &e in &self.elements {
            s.insert(e);
        }
        s
    }

    /// Sub-board on the given elements of the same ground set.
    pub fn restrict(&self, keep: &FixedBitSet) -> Board {
        Board {
            ground: self.ground,
            n: self.n,
            elements: self
                .elements
                .iter()
                .copied()
                .filter(|&e| keep.contains(e))
                .collect(),
        }
    }

    /// The board's elements read as a graph on `n` vertices.
    pub fn as_graph(&self, elems: &FixedBitSet) -> Result<SimpleGraph> {
        if !self.is_labeled() {
            return Err(Error::InvalidArgument("board is not E(K_n)".into()));
        }
        SimpleGraph::from_edge_ids(self.n, elems.ones())
    }
}

/// One sub-family `F_j` of winning sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub name: String,
    pub sets: Vec<Vec<Element>>,
}

/// `F = F_1 ∪ ... ∪ F_s`. Sets are sorted and nonempty, with no duplicates inside a
/// group; the same set may appear in several groups.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct Family {
    groups: Vec<Group>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    groups: Vec<Group>,
}

impl TryFrom<FamilyRepr> for Family {
    type Error = Error;
    fn try_from(r: FamilyRepr) -> Result<Family> {
        Family::new(r.groups)
    }
}

impl From<Family> for FamilyRepr {
    fn from(f: Family) -> FamilyRepr {
        FamilyRepr { groups: f.groups }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStats {
    /// Minimum winning-set size in the group.
    pub k: usize,
    pub count: usize,
}

impl Family {
    pub fn new(groups: Vec<Group>) -> Result<Family> {
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let mut seen = HashSet::with_capacity(g.sets.len());
            let mut sets = Vec::with_capacity(g.sets.len());
            for mut s in g.sets {
                s.sort_unstable();
                s.dedup();
                if s.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "group {:?} contains an empty winning set",
                        g.name
                    )));
                }
                if !seen.insert(s.clone()) {
                    return Err(Error::InvalidArgument(format!(
                        "group {:?} contains duplicate set {s:?}",
                        g.name
                    )));
                }
                sets.push(s);
            }
            out.push(Group { name: g.name, sets });
        }
        Ok(Family { groups: out })
    }

    pub fn single(name: &str, sets: Vec<Vec<Element>>) -> Result<Family> {
        Family::new(vec![Group {
            name: name.to_string(),
            sets,
        }])
    }

    /// Leftover family without validation; used for stage reductions, whose input
    /// was already valid.
    fn from_filtered(groups: Vec<Group>) -> Family {
        Family { groups }
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn set_count(&self) -> usize {
        self.groups.iter().map(|g| g.sets.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.set_count() == 0
    }

    pub fn sets(&self) -> impl Iterator<Item = &[Element]> {
        self.groups
            .iter()
            .flat_map(|g| g.sets.iter().map(Vec::as_slice))
    }

    pub fn max_element(&self) -> Option<Element> {
        self.sets().filter_map(|s| s.last().copied()).max()
    }

    /// Errors if a winning set reaches outside `0..ground`.
    pub fn check_ground(&self, ground: usize) -> Result<()> {
        match self.max_element() {
            Some(m) if m >= ground => Err(Error::InvalidArgument(format!(
                "winning set element {m} outside board of size {ground}"
            ))),
            _ => Ok(()),
        }
    }

    /// Sets fully inside `keep`, group by group.
    pub fn restrict(&self, keep: &FixedBitSet) -> Family {
        Family::from_filtered(
            self.groups
                .iter()
                .map(|g| Group {
                    name: g.name.clone(),
                    sets: g
                        .sets
                        .iter()
                        .filter(|s| s.iter().all(|&e| keep.contains(e)))
                        .cloned()
                        .collect(),
                })
                .collect(),
        )
    }
}

/// Per-group `(k_j, |F_j|)`.
pub fn family_stats(family: &Family) -> Result<Vec<GroupStats>> {
    family
        .groups
        .iter()
        .map(|g| {
            let k =
                g.sets.iter().map(Vec::len).min().ok_or_else(|| {
                    Error::InvalidArgument(format!("group {:?} is empty", g.name))
                })?;
            Ok(GroupStats {
                k,
                count: g.sets.len(),
            })
        })
        .collect()
}

/// Monotone graph properties used as implicit winning families on `E(K_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum GraphProperty {
    /// Spanning trees of `K_n`.
    Connected,
    /// Hamilton cycles of `K_n`.
    Hamiltonian,
    /// Subgraphs with chromatic number larger than `k`.
    NonColorable { k: usize },
    /// Copies of a fixed graph.
    ContainsCopy { pattern: SimpleGraph },
    /// Pancyclic spanning subgraphs.
    Pancyclic,
}

impl GraphProperty {
    pub fn holds(&self, g: &SimpleGraph) -> Result<bool> {
        Ok(match self {
            GraphProperty::Connected => g.n() >= 1 && graph::is_connected(g),
            GraphProperty::Hamiltonian => graph::is_hamiltonian(g)?,
            GraphProperty::NonColorable { k } => !graph::chromatic_number_at_most(g, *k)?,
            GraphProperty::ContainsCopy { pattern } => graph::contains_copy(pattern, g)?.is_some(),
            GraphProperty::Pancyclic => graph::is_pancyclic(g)?,
        })
    }

    pub fn name(&self) -> String {
        match self {
            GraphProperty::Connected => "connectivity".into(),
            GraphProperty::Hamiltonian => "hamiltonicity".into(),
            GraphProperty::NonColorable { k } => format!("non-{k}-colorability"),
            GraphProperty::ContainsCopy { pattern } => {
                format!("H-game(v={},e={})", pattern.n(), pattern.edge_count())
            }
            GraphProperty::Pancyclic => "pancyclicity".into(),
        }
    }
}

/// The winning family of a game: either materialised, or the (monotone) family of
/// all edge sets of `K_n` with a graph property. For monotone properties the
/// reduced family `{F : F ⊆ X_i}` is nonempty exactly when `X_i` has the property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Objective {
    Explicit { family: Family },
    Graph { n: usize, property: GraphProperty },
}

impl Objective {
    pub fn explicit(family: Family) -> Objective {
        Objective::Explicit { family }
    }

    pub fn graph(n: usize, property: GraphProperty) -> Objective {
        Objective::Graph { n, property }
    }

    pub fn name(&self) -> String {
        match self {
            Objective::Explicit { family } => format!("explicit({} sets)", family.set_count()),
            Objective::Graph { property, .. } => property.name(),
        }
    }

    pub fn family(&self) -> Option<&Family> {
        match self {
            Objective::Explicit { family } => Some(family),
            Objective::Graph { .. } => None,
        }
    }

    /// Whether `elems` contains a winning set.
    pub fn is_won_by(&self, elems: &FixedBitSet) -> Result<bool> {
        match self {
            Objective::Explicit { family } => {
                Ok(family.sets().any(|s| s.iter().all(|&e| elems.contains(e))))
            }
            Objective::Graph { n, property } => {
                property.holds(&SimpleGraph::from_edge_ids(*n, elems.ones())?)
            }
        }
    }

    /// Family restricted to sets inside `keep`, and surviving counts per group.
    pub fn restrict(&self, keep: &FixedBitSet) -> Result<(Objective, Vec<usize>)> {
        match self {
            Objective::Explicit { family } => {
                let next = family.restrict(keep);
                let counts = next.groups().iter().map(|g| g.sets.len()).collect();
                Ok((Objective::Explicit { family: next }, counts))
            }
            Objective::Graph { .. } => {
                let alive = self.is_won_by(keep)?;
                Ok((self.clone(), vec![alive as usize]))
            }
        }
    }

    /// Whether any winning set lies inside the board.
    pub fn is_alive_on(&self, board: &Board) -> Result<bool> {
        match self {
            Objective::Explicit { family } => {
                let b = board.to_bitset();
                Ok(family.sets().any(|s| s.iter().all(|&e| b.contains(e))))
            }
            Objective::Graph { .. } => self.is_won_by(&board.to_bitset()),
        }
    }

    pub fn check_board(&self, board: &Board) -> Result<()> {
        match self {
            Objective::Explicit { family } => family.check_ground(board.ground()),
            Objective::Graph { n, .. } => {
                if board.n() != *n {
                    Err(Error::InvalidArgument(format!(
                        "graph objective on K_{n} needs a K_{n} board"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub player: Player,
    pub elements: Vec<Element>,
}

impl Move {
    pub fn maker(e: Element) -> Move {
        Move {
            player: Player::Maker,
            elements: vec![e],
        }
    }

    pub fn breaker(elements: Vec<Element>) -> Move {
        Move {
            player: Player::Breaker,
            elements,
        }
    }
}

/// Ownership of every element of one stage board.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    board: Board,
    /// Indexed by ground id; `None` for elements off this stage's board.
    owner: Vec<Option<Owner>>,
    free: usize,
    stage: usize,
    bias: usize,
    history: Vec<Move>,
}

impl GameState {
    pub fn new(board: Board, bias: usize, stage: usize) -> Result<GameState> {
        if bias == 0 {
            return Err(Error::InvalidArgument("bias must be >= 1".into()));
        }
        if stage == 0 {
            return Err(Error::InvalidArgument("stages are numbered from 1".into()));
        }
        let mut owner = vec![None; board.ground()];
        for &e in board.elements() {
            owner[e] = Some(Owner::Free);
        }
        Ok(GameState {
            free: board.len(),
            board,
            owner,
            stage,
            bias,
            history: Vec::new(),
        })
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn bias(&self) -> usize {
        self.bias
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn history(&self) -> &[Move] {
        &self.history
    }

    pub fn owner(&self, e: Element) -> Option<Owner> {
        self.owner.get(e).copied().flatten()
    }

    pub fn is_free(&self, e: Element) -> bool {
        self.owner(e) == Some(Owner::Free)
    }

    pub fn free_count(&self) -> usize {
        self.free
    }

    pub fn free_elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.board
            .elements()
            .iter()
            .copied()
            .filter(|&e| self.is_free(e))
    }

    pub fn owned_by(&self, who: Owner) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.board.ground());
        for &e in self.board.elements() {
            if self.owner[e] == Some(who) {
                s.insert(e);
            }
        }
        s
    }

    pub fn maker_set(&self) -> FixedBitSet {
        self.owned_by(Owner::Maker)
    }

    /// Checks a move against the per-turn quota; does not check turn order.
    pub fn validate_move(&self, mv: &Move) -> Result<()> {
        let p = mv.player;
        let mut seen = HashSet::with_capacity(mv.elements.len());
        for &e in &mv.elements {
            if !seen.insert(e) {
                return Err(Error::illegal(p, format!("element {e} listed twice")));
            }
            if !self.is_free(e) {
                return Err(Error::not_free(p, e));
            }
        }
        match p {
            Player::Maker if mv.elements.len() != 1 => Err(Error::illegal(
                p,
                format!(
                    "Maker must claim exactly one element, got {}",
                    mv.elements.len()
                ),
            )),
            Player::Breaker if mv.elements.is_empty() && self.free > 0 => Err(Error::illegal(
                p,
                "Breaker must claim at least one element while free elements remain",
            )),
            Player::Breaker if mv.elements.len() > self.bias => Err(Error::illegal(
                p,
                format!(
                    "Breaker may claim at most b={} elements, got {}",
                    self.bias,
                    mv.elements.len()
                ),
            )),
            _ => Ok(()),
        }
    }

    pub fn apply_move_mut(&mut self, mv: Move) -> Result<()> {
        self.validate_move(&mv)?;
        let who = Owner::from(mv.player);
        for &e in &mv.elements {
            self.owner[e] = Some(who);
        }
        self.free -= mv.elements.len();
        self.history.push(mv);
        Ok(())
    }

    /// Returns the state after `mv`; `self` is left untouched.
    pub fn apply_move(&self, mv: Move) -> Result<GameState> {
        let mut next = self.clone();
        next.apply_move_mut(mv)?;
        Ok(next)
    }
}

/// The board and family handed to the next stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageReduction {
    pub next_board: Board,
    pub next_objective: Objective,
    pub survivors_per_group: Vec<usize>,
}

impl StageReduction {
    pub fn is_alive(&self) -> bool {
        self.survivors_per_group.iter().any(|&c| c > 0)
    }

    pub fn next_family(&self) -> Option<&Family> {
        self.next_objective.family()
    }
}

pub fn reduce_stage(
    state: &GameState,
    objective: &Objective,
    variant: Variant,
) -> Result<StageReduction> {
    let maker = state.maker_set();
    let keep = match variant {
        Variant::Standard => {
            if state.free_count() > 0 {
                return Err(Error::InvalidState(format!(
                    "standard stage reduced with {} free elements",
                    state.free_count()
                )));
            }
            maker
        }
        Variant::Stop => {
            if state.free_count() > 0 && !objective.is_won_by(&maker)? {
                return Err(Error::InvalidState(
                    "stop stage reduced before Maker owns a winning set".into(),
                ));
            }
            let mut keep = maker;
            keep.union_with(&state.owned_by(Owner::Free));
            keep
        }
    };
    let next_board = state.board().restrict(&keep);
    let (next_objective, survivors_per_group) = objective.restrict(&keep)?;
    Ok(StageReduction {
        next_board,
        next_objective,
        survivors_per_group,
    })
}
