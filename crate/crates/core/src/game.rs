//! Finite extensive-form games: an immutable node arena in depth-first
//! preorder plus the information-set partition.

use std::collections::HashMap;
use std::fmt;

use crate::scalar::Scalar;

pub type NodeId = usize;
pub type InfoSetId = usize;
pub type PlayerId = usize;

/// Serde adapter writing player indices 1-based, as Gambit numbers them.
pub mod one_based {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(*p as u64 + 1)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        let v = u64::deserialize(d)?;
        v.checked_sub(1).map(|p| p as usize).ok_or_else(|| serde::de::Error::custom("players are numbered from 1"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("player index {0} out of range")]
    BadPlayer(usize),
    #[error("node {0} does not exist")]
    BadNode(NodeId),
    #[error("info set {0} does not exist")]
    BadInfoSet(InfoSetId),
    #[error("action {action} out of range at info set {infoset}")]
    BadAction { infoset: InfoSetId, action: usize },
    #[error("refusing to remove the last action at info set {0}")]
    LastAction(InfoSetId),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind<T> {
    Chance {
        /// `.efg` bookkeeping for chance "info sets".
        number: usize,
        name: String,
        actions: Vec<String>,
        probs: Vec<T>,
    },
    Decision {
        player: PlayerId,
        infoset: InfoSetId,
        actions: Vec<String>,
    },
    Terminal {
        outcome: usize,
        name: String,
        payoffs: Vec<T>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<T> {
    pub label: String,
    /// Parent node and the index of the edge leading here.
    pub parent: Option<(NodeId, usize)>,
    pub children: Vec<NodeId>,
    pub depth: usize,
    pub kind: NodeKind<T>,
}

impl<T> Node<T> {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, NodeKind::Terminal { .. })
    }

    pub fn actions(&self) -> &[String] {
        match &self.kind {
            NodeKind::Chance { actions, .. } | NodeKind::Decision { actions, .. } => actions,
            NodeKind::Terminal { .. } => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfoSet {
    pub id: InfoSetId,
    pub player: PlayerId,
    /// Number used by the `.efg` format; unique per player.
    pub number: usize,
    pub name: String,
    pub actions: Vec<String>,
    /// Member nodes in preorder.
    pub members: Vec<NodeId>,
}

/// Recursive description of a game, used to build a [`GameTree`].
#[derive(Clone, Debug, PartialEq)]
pub enum NodeSpec<T> {
    Chance {
        label: String,
        number: usize,
        name: String,
        branches: Vec<(String, T, NodeSpec<T>)>,
    },
    Decision {
        label: String,
        player: PlayerId,
        number: usize,
        name: String,
        branches: Vec<(String, NodeSpec<T>)>,
    },
    Terminal {
        label: String,
        outcome: usize,
        name: String,
        payoffs: Vec<T>,
    },
}

impl<T> NodeSpec<T> {
    pub fn leaf(payoffs: Vec<T>) -> Self {
        NodeSpec::Terminal { label: String::new(), outcome: 0, name: String::new(), payoffs }
    }

    pub fn decision(player: PlayerId, number: usize, name: &str, branches: Vec<(&str, NodeSpec<T>)>) -> Self {
        NodeSpec::Decision {
            label: String::new(),
            player,
            number,
            name: name.to_string(),
            branches: branches.into_iter().map(|(a, s)| (a.to_string(), s)).collect(),
        }
    }

    pub fn chance(branches: Vec<(&str, T, NodeSpec<T>)>) -> Self {
        NodeSpec::Chance {
            label: String::new(),
            number: 1,
            name: String::new(),
            branches: branches.into_iter().map(|(a, p, s)| (a.to_string(), p, s)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameTree<T> {
    pub title: String,
    pub comment: Option<String>,
    players: Vec<String>,
    nodes: Vec<Node<T>>,
    infosets: Vec<InfoSet>,
}

/// Mixed action per info set, indexed by info-set id.
pub type BehavioralProfile<T> = Vec<Vec<T>>;

impl<T: Scalar> GameTree<T> {
    pub fn new(title: &str, players: Vec<String>, root: NodeSpec<T>) -> Result<Self, GameError> {
        let mut game = GameTree {
            title: title.to_string(),
            comment: None,
            players,
            nodes: Vec::new(),
            infosets: Vec::new(),
        };
        let mut lookup = HashMap::new();
        // explicit stack keeps deep generated trees off the call stack
        enum Work<T> {
            Visit(NodeSpec<T>, Option<(NodeId, usize)>, usize),
        }
        let mut stack = vec![Work::Visit(root, None, 0)];
        while let Some(Work::Visit(spec, parent, depth)) = stack.pop() {
            let id = game.nodes.len();
            if let Some((p, _)) = parent {
                game.nodes[p].children.push(id);
            }
            let (label, kind, kids): (String, NodeKind<T>, Vec<NodeSpec<T>>) = match spec {
                NodeSpec::Terminal { label, outcome, name, payoffs } => {
                    (label, NodeKind::Terminal { outcome, name, payoffs }, Vec::new())
                }
                NodeSpec::Chance { label, number, name, branches } => {
                    let mut actions = Vec::new();
                    let mut probs = Vec::new();
                    let mut kids = Vec::new();
                    for (a, p, s) in branches {
                        actions.push(a);
                        probs.push(p);
                        kids.push(s);
                    }
                    (label, NodeKind::Chance { number, name, actions, probs }, kids)
                }
                NodeSpec::Decision { label, player, number, name, branches } => {
                    if player >= game.players.len() {
                        return Err(GameError::BadPlayer(player));
                    }
                    let (actions, kids): (Vec<String>, Vec<NodeSpec<T>>) = branches.into_iter().unzip();
                    let iset = *lookup.entry((player, number)).or_insert_with(|| {
                        game.infosets.push(InfoSet {
                            id: game.infosets.len(),
                            player,
                            number,
                            name: name.clone(),
                            actions: actions.clone(),
                            members: Vec::new(),
                        });
                        game.infosets.len() - 1
                    });
                    game.infosets[iset].members.push(id);
                    (label, NodeKind::Decision { player, infoset: iset, actions }, kids)
                }
            };
            game.nodes.push(Node { label, parent, children: Vec::with_capacity(kids.len()), depth, kind });
            for (k, child) in kids.into_iter().enumerate().rev() {
                stack.push(Work::Visit(child, Some((id, k)), depth + 1));
            }
        }
        Ok(game)
    }

    pub fn with_comment(mut self, comment: Option<String>) -> Self {
        self.comment = comment;
        self
    }

    pub fn to_spec(&self) -> NodeSpec<T> {
        self.spec_of(0, &|_, _| true)
    }

    /// Rebuilds the subtree at `node`, keeping only edges accepted by `keep`.
    fn spec_of(&self, node: NodeId, keep: &dyn Fn(NodeId, usize) -> bool) -> NodeSpec<T> {
        let n = &self.nodes[node];
        match &n.kind {
            NodeKind::Terminal { outcome, name, payoffs } => NodeSpec::Terminal {
                label: n.label.clone(),
                outcome: *outcome,
                name: name.clone(),
                payoffs: payoffs.clone(),
            },
            NodeKind::Chance { number, name, actions, probs } => NodeSpec::Chance {
                label: n.label.clone(),
                number: *number,
                name: name.clone(),
                branches: (0..actions.len())
                    .filter(|&k| keep(node, k))
                    .map(|k| (actions[k].clone(), probs[k].clone(), self.spec_of(n.children[k], keep)))
                    .collect(),
            },
            NodeKind::Decision { player, infoset, actions } => NodeSpec::Decision {
                label: n.label.clone(),
                player: *player,
                number: self.infosets[*infoset].number,
                name: self.infosets[*infoset].name.clone(),
                branches: (0..actions.len())
                    .filter(|&k| keep(node, k))
                    .map(|k| (actions[k].clone(), self.spec_of(n.children[k], keep)))
                    .collect(),
            },
        }
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node<T> {
        &self.nodes[id]
    }

    pub fn infosets(&self) -> &[InfoSet] {
        &self.infosets
    }

    pub fn infoset(&self, id: InfoSetId) -> &InfoSet {
        &self.infosets[id]
    }

    pub fn player_infosets(&self, player: PlayerId) -> impl Iterator<Item = &InfoSet> {
        self.infosets.iter().filter(move |i| i.player == player)
    }

    pub fn find_infoset(&self, player: PlayerId, name: &str) -> Option<&InfoSet> {
        self.player_infosets(player).find(|i| i.name == name)
    }

    pub fn find_infoset_by_number(&self, player: PlayerId, number: usize) -> Option<&InfoSet> {
        self.player_infosets(player).find(|i| i.number == number)
    }

    /// Deepest member depth; the reducer's traversal key.
    pub fn infoset_depth(&self, id: InfoSetId) -> usize {
        self.infosets[id].members.iter().map(|&m| self.nodes[m].depth).max().unwrap_or(0)
    }

    pub fn total_actions(&self) -> usize {
        self.infosets.iter().map(|i| i.actions.len()).sum()
    }

    /// Removes action `action` at every member of `infoset`. Info sets left
    /// without members disappear; everything else is preserved.
    pub fn remove_action(&self, infoset: InfoSetId, action: usize) -> Result<Self, GameError> {
        self.remove_actions(&[(infoset, action)])
    }

    /// Simultaneous removal of several actions.
    pub fn remove_actions(&self, removals: &[(InfoSetId, usize)]) -> Result<Self, GameError> {
        let mut drop: HashMap<InfoSetId, Vec<usize>> = HashMap::new();
        for &(iset, a) in removals {
            let info = self.infosets.get(iset).ok_or(GameError::BadInfoSet(iset))?;
            if a >= info.actions.len() {
                return Err(GameError::BadAction { infoset: iset, action: a });
            }
            drop.entry(iset).or_default().push(a);
        }
        for (&iset, acts) in &mut drop {
            acts.sort_unstable();
            acts.dedup();
            if acts.len() >= self.infosets[iset].actions.len() {
                return Err(GameError::LastAction(iset));
            }
        }
        let keep = |node: NodeId, k: usize| match &self.nodes[node].kind {
            NodeKind::Decision { infoset, .. } => drop.get(infoset).map_or(true, |d| !d.contains(&k)),
            _ => true,
        };
        let spec = self.spec_of(0, &keep);
        Ok(GameTree::new(&self.title, self.players.clone(), spec)?.with_comment(self.comment.clone()))
    }

    /// Chance probability of reaching each node.
    pub fn chance_reach(&self) -> Vec<T> {
        let mut reach = vec![T::zero(); self.nodes.len()];
        reach[0] = T::one();
        for id in 0..self.nodes.len() {
            if let NodeKind::Chance { probs, .. } = &self.nodes[id].kind {
                for (k, &c) in self.nodes[id].children.iter().enumerate() {
                    reach[c] = reach[id].clone() * probs[k].clone();
                }
            } else {
                for &c in &self.nodes[id].children {
                    reach[c] = reach[id].clone();
                }
            }
        }
        reach
    }

    /// Leaves below `node` (inclusive).
    pub fn leaves_under(&self, node: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            if self.nodes[n].is_terminal() {
                out.push(n);
            }
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    pub fn is_zero_sum(&self) -> bool {
        let tol = T::from_f64_lossy(1e-12);
        self.nodes.iter().all(|n| match &n.kind {
            NodeKind::Terminal { payoffs, .. } => {
                payoffs.iter().fold(T::zero(), |a, b| a + b.clone()).abs() <= tol
            }
            _ => true,
        })
    }

    /// Expected utility of every player under a behavioral profile.
    pub fn expected_utility(&self, profile: &BehavioralProfile<T>) -> Result<Vec<T>, GameError> {
        if profile.len() != self.infosets.len() {
            return Err(GameError::InvalidProfile(format!(
                "{} distributions for {} info sets",
                profile.len(),
                self.infosets.len()
            )));
        }
        let tol = if T::EXACT { T::zero() } else { T::from_f64_lossy(1e-9) };
        for (info, dist) in self.infosets.iter().zip(profile) {
            if dist.len() != info.actions.len() {
                return Err(GameError::InvalidProfile(format!("info set '{}' has {} actions", info.name, info.actions.len())));
            }
            let sum = dist.iter().fold(T::zero(), |a, b| a + b.clone());
            if (sum.clone() - T::one()).abs() > tol || dist.iter().any(|p| p.is_negative()) {
                return Err(GameError::InvalidProfile(format!("distribution at '{}' sums to {}", info.name, sum)));
            }
        }
        let mut total = vec![T::zero(); self.players.len()];
        let mut stack = vec![(0usize, T::one())];
        while let Some((id, w)) = stack.pop() {
            let node = &self.nodes[id];
            match &node.kind {
                NodeKind::Terminal { payoffs, .. } => {
                    for (t, u) in total.iter_mut().zip(payoffs) {
                        *t = t.clone() + w.clone() * u.clone();
                    }
                }
                NodeKind::Chance { probs, .. } => {
                    for (c, p) in node.children.iter().zip(probs) {
                        stack.push((*c, w.clone() * p.clone()));
                    }
                }
                NodeKind::Decision { infoset, .. } => {
                    for (c, p) in node.children.iter().zip(&profile[*infoset]) {
                        if !p.is_zero() {
                            stack.push((*c, w.clone() * p.clone()));
                        }
                    }
                }
            }
        }
        Ok(total)
    }

    /// Every well-formedness problem, as data.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let tol = T::probability_tolerance();
        for (id, node) in self.nodes.iter().enumerate() {
            match &node.kind {
                NodeKind::Chance { probs, actions, .. } => {
                    if actions.is_empty() {
                        violations.push(Violation::new(id, "chance node without outcomes"));
                    }
                    if probs.iter().any(|p| p.is_negative()) {
                        violations.push(Violation::new(id, "negative probability"));
                    }
                    let sum = probs.iter().fold(T::zero(), |a, b| a + b.clone());
                    if (sum.clone() - T::one()).abs() > tol {
                        violations.push(Violation::new(id, format!("probabilities sum {}", sum)));
                    }
                }
                NodeKind::Decision { actions, infoset, player } => {
                    if actions.is_empty() {
                        violations.push(Violation::new(id, "decision node without actions"));
                    }
                    let info = &self.infosets[*infoset];
                    if info.player != *player {
                        violations.push(Violation::new(id, "info set spans several players"));
                    }
                    if actions.len() != info.actions.len() {
                        violations.push(Violation::new(id, "action-count mismatch"));
                    } else if *actions != info.actions {
                        violations.push(Violation::new(id, "action-label mismatch"));
                    }
                }
                NodeKind::Terminal { payoffs, .. } => {
                    if payoffs.len() != self.players.len() {
                        violations.push(Violation::new(
                            id,
                            format!("{} payoffs for {} players", payoffs.len(), self.players.len()),
                        ));
                    }
                }
            }
            if node.children.len() != node.actions().len() {
                violations.push(Violation::new(id, "child count differs from action count"));
            }
        }
        ValidationReport { violations }
    }

    /// Own-action history of `player` at each node: (info set, action) pairs.
    pub fn own_histories(&self, player: PlayerId) -> Vec<Vec<(InfoSetId, usize)>> {
        let mut hist: Vec<Vec<(InfoSetId, usize)>> = vec![Vec::new(); self.nodes.len()];
        for id in 1..self.nodes.len() {
            let (p, k) = self.nodes[id].parent.expect("non-root has parent");
            let mut h = hist[p].clone();
            if let NodeKind::Decision { player: q, infoset, .. } = &self.nodes[p].kind {
                if *q == player {
                    h.push((*infoset, k));
                }
            }
            hist[id] = h;
        }
        hist
    }

    pub fn check_perfect_recall(&self, player: PlayerId) -> PerfectRecallReport {
        let hist = self.own_histories(player);
        let mut violations = Vec::new();
        for info in self.player_infosets(player) {
            let first = &hist[info.members[0]];
            if let Some(&bad) = info.members.iter().find(|&&m| hist[m] != *first) {
                violations.push(RecallViolation {
                    infoset: info.id,
                    name: info.name.clone(),
                    node: bad,
                });
            }
        }
        PerfectRecallReport { violations }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub node: NodeId,
    pub message: String,
}

impl Violation {
    fn new(node: NodeId, message: impl Into<String>) -> Self {
        Violation { node, message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}", self.node, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecallViolation {
    pub infoset: InfoSetId,
    pub name: String,
    /// A member whose own history differs from the first member's.
    pub node: NodeId,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PerfectRecallReport {
    pub violations: Vec<RecallViolation>,
}

impl PerfectRecallReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}
