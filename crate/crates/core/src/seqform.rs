//! Sequence-form construction: per-player sequence indexing, flow constraints
//! `E x = e`, chance-weighted payoff matrices, reach sets for a target info
//! set, the opponent merge and the merged single-agent game.

use std::collections::HashMap;

use serde::Serialize;

use crate::game::{GameError, GameTree, InfoSetId, NodeId, NodeKind, NodeSpec, PlayerId};
use crate::lp::{self, Bound, LpProblem, LpStatus, Sense};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeqFormError {
    #[error("player {player} lacks perfect recall at info set '{infoset}'")]
    ImperfectRecall { player: PlayerId, infoset: String },
    #[error("operation needs a two-player game, found {0} players")]
    NotTwoPlayer(usize),
    #[error("game is not zero-sum")]
    NotZeroSum,
    #[error("structural LP failure: {0:?}")]
    Lp(LpStatus),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Coordinate-list matrix; duplicate coordinates are summed on read.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn push(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries.push((i, j, v));
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, j, v) in &self.entries {
            out[*i][*j] = out[*i][*j].clone() + v.clone();
        }
        out
    }

    /// Merges duplicates and drops zeros; entries sorted by (row, col).
    pub fn compact(&self) -> Self {
        let mut map: HashMap<(usize, usize), T> = HashMap::new();
        for (i, j, v) in &self.entries {
            let e = map.entry((*i, *j)).or_insert_with(T::zero);
            *e = e.clone() + v.clone();
        }
        let mut entries: Vec<(usize, usize, T)> =
            map.into_iter().filter(|(_, v)| !v.is_zero()).map(|((i, j), v)| (i, j, v)).collect();
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries.iter().filter(|e| e.0 == i && e.1 == j).fold(T::zero(), |a, e| a + e.2.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeqEntry {
    pub parent: usize,
    pub infoset: InfoSetId,
    pub action: usize,
}

/// Sequences of one player (or of a group of players treated as one).
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceIndex {
    pub players: Vec<PlayerId>,
    /// `entries[0]` is `None` (the empty sequence).
    pub entries: Vec<Option<SeqEntry>>,
    /// Info sets of the group in preorder.
    pub infosets: Vec<InfoSetId>,
    /// Sequence leading to each info set.
    pub parent_of: HashMap<InfoSetId, usize>,
    /// Index of the sequence for action 0 at each info set.
    pub first_of: HashMap<InfoSetId, usize>,
    /// Group's sequence at every node (last own action above it).
    pub node_seq: Vec<usize>,
}

impl SequenceIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn seq(&self, infoset: InfoSetId, action: usize) -> usize {
        self.first_of[&infoset] + action
    }

    pub fn label<T: Scalar>(&self, game: &GameTree<T>, k: usize) -> String {
        match &self.entries[k] {
            None => "∅".to_string(),
            Some(e) => {
                let info = game.infoset(e.infoset);
                format!("{}:{}", info.name, info.actions[e.action])
            }
        }
    }

    /// Whether `ancestor` is a (non-strict) prefix of `k`.
    pub fn is_prefix(&self, ancestor: usize, mut k: usize) -> bool {
        loop {
            if k == ancestor {
                return true;
            }
            match &self.entries[k] {
                None => return false,
                Some(e) => k = e.parent,
            }
        }
    }
}

/// Sequence index of a single player.
pub fn build_sequences<T: Scalar>(game: &GameTree<T>, player: PlayerId) -> Result<SequenceIndex, SeqFormError> {
    build_group_sequences(game, &[player])
}

/// Sequence index of several players acting as one.
pub fn build_group_sequences<T: Scalar>(game: &GameTree<T>, players: &[PlayerId]) -> Result<SequenceIndex, SeqFormError> {
    let nodes = game.nodes();
    let mut idx = SequenceIndex {
        players: players.to_vec(),
        entries: vec![None],
        infosets: Vec::new(),
        parent_of: HashMap::new(),
        first_of: HashMap::new(),
        node_seq: vec![0; nodes.len()],
    };
    for id in 0..nodes.len() {
        let here = match nodes[id].parent {
            None => 0,
            Some((p, k)) => match &nodes[p].kind {
                NodeKind::Decision { player, infoset, .. } if players.contains(player) => idx.seq(*infoset, k),
                _ => idx.node_seq[p],
            },
        };
        idx.node_seq[id] = here;
        if let NodeKind::Decision { player, infoset, .. } = &nodes[id].kind {
            if !players.contains(player) {
                continue;
            }
            match idx.parent_of.get(infoset) {
                Some(&prev) if prev != here => {
                    return Err(SeqFormError::ImperfectRecall {
                        player: *player,
                        infoset: game.infoset(*infoset).name.clone(),
                    });
                }
                Some(_) => {}
                None => {
                    idx.parent_of.insert(*infoset, here);
                    idx.first_of.insert(*infoset, idx.entries.len());
                    idx.infosets.push(*infoset);
                    for a in 0..game.infoset(*infoset).actions.len() {
                        idx.entries.push(Some(SeqEntry { parent: here, infoset: *infoset, action: a }));
                    }
                }
            }
        }
    }
    Ok(idx)
}

/// Flow constraints: row 0 selects the empty sequence; each info-set row has
/// −1 on its parent sequence and +1 on its actions.
pub fn constraints_of<T: Scalar>(idx: &SequenceIndex) -> (SparseMatrix<T>, Vec<T>) {
    let mut m = SparseMatrix::new(1 + idx.infosets.len(), idx.len());
    m.push(0, 0, T::one());
    for (r, iset) in idx.infosets.iter().enumerate() {
        m.push(r + 1, idx.parent_of[iset], -T::one());
        let first = idx.first_of[iset];
        let mut k = first;
        while k < idx.len() && matches!(&idx.entries[k], Some(e) if e.infoset == *iset) {
            m.push(r + 1, k, T::one());
            k += 1;
        }
    }
    let mut rhs = vec![T::zero(); m.rows];
    rhs[0] = T::one();
    (m, rhs)
}

pub fn build_constraints<T: Scalar>(game: &GameTree<T>, player: PlayerId) -> Result<(SparseMatrix<T>, Vec<T>), SeqFormError> {
    Ok(constraints_of(&build_sequences(game, player)?))
}

/// `d1 x d2` matrix of `for_player`'s chance-weighted utilities.
pub fn payoffs_of<T: Scalar>(
    game: &GameTree<T>,
    rows: &SequenceIndex,
    cols: &SequenceIndex,
    for_player: PlayerId,
    reach: &[T],
) -> SparseMatrix<T> {
    let mut m = SparseMatrix::new(rows.len(), cols.len());
    for (id, node) in game.nodes().iter().enumerate() {
        if let NodeKind::Terminal { payoffs, .. } = &node.kind {
            let w = reach[id].clone() * payoffs[for_player].clone();
            if !w.is_zero() {
                m.push(rows.node_seq[id], cols.node_seq[id], w);
            }
        }
    }
    m.compact()
}

pub fn build_payoffs<T: Scalar>(game: &GameTree<T>, for_player: PlayerId) -> Result<SparseMatrix<T>, SeqFormError> {
    if game.num_players() != 2 {
        return Err(SeqFormError::NotTwoPlayer(game.num_players()));
    }
    let s1 = build_sequences(game, 0)?;
    let s2 = build_sequences(game, 1)?;
    Ok(payoffs_of(game, &s1, &s2, for_player, &game.chance_reach()))
}

/// All sequence-form objects of a two-player game.
#[derive(Clone, Debug)]
pub struct SequenceForm<T> {
    pub seqs: [SequenceIndex; 2],
    pub e: SparseMatrix<T>,
    pub e_rhs: Vec<T>,
    pub f: SparseMatrix<T>,
    pub f_rhs: Vec<T>,
    pub a: SparseMatrix<T>,
    pub b: SparseMatrix<T>,
}

impl<T: Scalar> SequenceForm<T> {
    pub fn build(game: &GameTree<T>) -> Result<Self, SeqFormError> {
        if game.num_players() != 2 {
            return Err(SeqFormError::NotTwoPlayer(game.num_players()));
        }
        let s1 = build_sequences(game, 0)?;
        let s2 = build_sequences(game, 1)?;
        let reach = game.chance_reach();
        let (e, e_rhs) = constraints_of(&s1);
        let (f, f_rhs) = constraints_of(&s2);
        let a = payoffs_of(game, &s1, &s2, 0, &reach);
        let b = payoffs_of(game, &s1, &s2, 1, &reach);
        Ok(SequenceForm { seqs: [s1, s2], e, e_rhs, f, f_rhs, a, b })
    }
}

/// Realization plan induced by a behavioral strategy.
pub fn realization_plan<T: Scalar>(game: &GameTree<T>, idx: &SequenceIndex, profile: &[Vec<T>]) -> Vec<T> {
    let mut x = vec![T::zero(); idx.len()];
    x[0] = T::one();
    for k in 1..idx.len() {
        let e = idx.entries[k].as_ref().expect("non-empty");
        x[k] = x[e.parent].clone() * profile[e.infoset][e.action].clone();
        let _ = game;
    }
    x
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSumSolution<T> {
    /// Value for player 1.
    pub value: T,
    pub x: Vec<T>,
    pub y: Vec<T>,
}

/// Value and maxmin realization plans of a two-player zero-sum game, one LP
/// per player.
pub fn solve_zero_sum<T: Scalar>(game: &GameTree<T>) -> Result<ZeroSumSolution<T>, SeqFormError> {
    let sf = SequenceForm::build(game)?;
    if !game.is_zero_sum() {
        return Err(SeqFormError::NotZeroSum);
    }
    let (v1, x) = maxmin(&sf.a, false, (&sf.e, &sf.e_rhs), (&sf.f, &sf.f_rhs))?;
    let (_, y) = maxmin(&sf.b, true, (&sf.f, &sf.f_rhs), (&sf.e, &sf.e_rhs))?;
    Ok(ZeroSumSolution { value: v1, x, y })
}

/// max_x min_y of a bilinear payoff over realization plans:
/// max fᵀq s.t. Fᵀq ≤ Mᵀx, Ex = e, x ≥ 0. `m` is indexed (own, opp) unless
/// `transposed`, in which case it is (opp, own).
fn maxmin<T: Scalar>(
    m: &SparseMatrix<T>,
    transposed: bool,
    (e, e_rhs): (&SparseMatrix<T>, &[T]),
    (f, f_rhs): (&SparseMatrix<T>, &[T]),
) -> Result<(T, Vec<T>), SeqFormError> {
    let (own, opp) = (e.cols, f.cols);
    let mut lp = LpProblem::new(true);
    let x: Vec<usize> = (0..own).map(|_| lp.var(T::zero(), Bound::NonNeg)).collect();
    let q: Vec<usize> = (0..f.rows).map(|r| lp.var(f_rhs[r].clone(), Bound::Free)).collect();
    let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); opp];
    for (i, j, v) in &m.entries {
        let (s, k) = if transposed { (*j, *i) } else { (*i, *j) };
        rows[k].push((x[s], v.clone()));
    }
    for (r, k, v) in &f.entries {
        rows[*k].push((q[*r], -v.clone()));
    }
    for row in rows {
        lp.row(row, Sense::Ge, T::zero());
    }
    let mut erows: Vec<Vec<(usize, T)>> = vec![Vec::new(); e.rows];
    for (r, j, v) in &e.entries {
        erows[*r].push((x[*j], v.clone()));
    }
    for (r, row) in erows.into_iter().enumerate() {
        lp.row(row, Sense::Eq, e_rhs[r].clone());
    }
    let sol = lp::solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(SeqFormError::Lp(sol.status));
    }
    Ok((sol.objective, x.iter().map(|&k| sol.primal[k].clone()).collect()))
}

/// Reach-I index sets for one target info set and tested action.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReachSets {
    /// Protagonist sequences on the path to I (excluding the empty one).
    pub own: Vec<usize>,
    /// Opponent sequences branching away from I at info sets above it.
    pub opp_zero: Vec<usize>,
    /// Sequence of the tested action at I.
    pub target: usize,
}

/// Reach sets for `(infoset, action)` in a two-player game (merge first
/// otherwise). `own`/`opp` are the protagonist's and opponent's indexes.
pub fn reach_sets_with<T: Scalar>(
    game: &GameTree<T>,
    own: &SequenceIndex,
    opp: &SequenceIndex,
    infoset: InfoSetId,
    action: usize,
) -> ReachSets {
    let nodes = game.nodes();
    let members = &game.infoset(infoset).members;
    let mut own_path = Vec::new();
    let mut k = own.parent_of[&infoset];
    while k != 0 {
        own_path.push(k);
        k = own.entries[k].as_ref().expect("non-empty").parent;
    }
    own_path.reverse();
    // opponent info sets above I and the actions that lead toward it
    let mut toward: HashMap<InfoSetId, Vec<bool>> = HashMap::new();
    for &m in members {
        let mut cur = m;
        while let Some((p, k)) = nodes[cur].parent {
            if let NodeKind::Decision { player, infoset: j, actions } = &nodes[p].kind {
                if opp.players.contains(player) {
                    toward.entry(*j).or_insert_with(|| vec![false; actions.len()])[k] = true;
                }
            }
            cur = p;
        }
    }
    let mut opp_zero: Vec<usize> = toward
        .iter()
        .flat_map(|(j, t)| t.iter().enumerate().filter(|(_, &on)| !on).map(move |(a, _)| opp.seq(*j, a)))
        .collect();
    opp_zero.sort_unstable();
    ReachSets { own: own_path, opp_zero, target: own.seq(infoset, action) }
}

pub fn reach_sets<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: InfoSetId, action: usize) -> Result<ReachSets, SeqFormError> {
    let own = build_sequences(game, player)?;
    let others: Vec<PlayerId> = (0..game.num_players()).filter(|&p| p != player).collect();
    let opp = build_group_sequences(game, &others)?;
    Ok(reach_sets_with(game, &own, &opp, infoset, action))
}

/// Two-player game where every non-protagonist decision belongs to one merged
/// opponent. The merged player's utilities are zero.
pub fn merge_opponents<T: Scalar>(game: &GameTree<T>, protagonist: PlayerId) -> Result<GameTree<T>, SeqFormError> {
    if protagonist >= game.num_players() {
        return Err(GameError::BadPlayer(protagonist).into());
    }
    let mut numbers: HashMap<(PlayerId, usize), usize> = HashMap::new();
    for info in game.infosets() {
        if info.player != protagonist {
            let next = numbers.len() + 1;
            numbers.entry((info.player, info.number)).or_insert(next);
        }
    }
    fn relabel<T: Scalar>(spec: NodeSpec<T>, prot: PlayerId, numbers: &HashMap<(PlayerId, usize), usize>) -> NodeSpec<T> {
        match spec {
            NodeSpec::Terminal { label, outcome, name, payoffs } => NodeSpec::Terminal {
                label,
                outcome,
                name,
                payoffs: vec![payoffs[prot].clone(), T::zero()],
            },
            NodeSpec::Chance { label, number, name, branches } => NodeSpec::Chance {
                label,
                number,
                name,
                branches: branches.into_iter().map(|(a, p, s)| (a, p, relabel(s, prot, numbers))).collect(),
            },
            NodeSpec::Decision { label, player, number, name, branches } => {
                let (player, number) = if player == prot { (0, number) } else { (1, numbers[&(player, number)]) };
                NodeSpec::Decision {
                    label,
                    player,
                    number,
                    name,
                    branches: branches.into_iter().map(|(a, s)| (a, relabel(s, prot, numbers))).collect(),
                }
            }
        }
    }
    let players = vec![game.players()[protagonist].clone(), "opponents".to_string()];
    let spec = relabel(game.to_spec(), protagonist, &numbers);
    Ok(GameTree::new(&game.title, players, spec)?.with_comment(game.comment.clone()))
}

/// Info set of the merged single agent: an original info set restricted to
/// members sharing one combined action history.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedInfoSet {
    pub infoset: InfoSetId,
    pub player: PlayerId,
    pub parent: usize,
    pub first: usize,
    pub actions: usize,
    pub nodes: Vec<NodeId>,
}

/// Single agent controlling every decision node (of all players) in a region.
#[derive(Clone, Debug, PartialEq)]
pub struct MergedAgent<T> {
    pub protagonist: PlayerId,
    /// Entry k > 0: (parent sequence, refined info set, action).
    pub seqs: Vec<(usize, usize, usize)>,
    pub refined: Vec<RefinedInfoSet>,
    /// Combined sequence at each node; `usize::MAX` outside the region.
    pub node_seq: Vec<usize>,
    /// Chance-weighted protagonist utility per combined sequence.
    pub payoff: Vec<T>,
    /// False when some original info set had to be split.
    pub perfect_recall: bool,
}

impl<T: Scalar> MergedAgent<T> {
    /// Builds the agent over nodes with `region[n]` (all nodes when `None`).
    /// Regions must be closed under taking parents.
    pub fn build(game: &GameTree<T>, protagonist: PlayerId, region: Option<&[bool]>, reach: &[T]) -> Self {
        let nodes = game.nodes();
        let inside = |n: NodeId| region.map_or(true, |r| r[n]);
        let mut agent = MergedAgent {
            protagonist,
            seqs: vec![(0, usize::MAX, 0)],
            refined: Vec::new(),
            node_seq: vec![usize::MAX; nodes.len()],
            payoff: Vec::new(),
            perfect_recall: true,
        };
        let mut lookup: HashMap<(InfoSetId, usize), usize> = HashMap::new();
        let mut node_refined: HashMap<NodeId, usize> = HashMap::new();
        let mut splits: HashMap<InfoSetId, usize> = HashMap::new();
        for id in 0..nodes.len() {
            if !inside(id) {
                continue;
            }
            let here = match nodes[id].parent {
                None => 0,
                Some((p, k)) => match &nodes[p].kind {
                    NodeKind::Decision { .. } => {
                        let r = &agent.refined[node_refined[&p]];
                        r.first + k
                    }
                    _ => agent.node_seq[p],
                },
            };
            agent.node_seq[id] = here;
            if let NodeKind::Decision { player, infoset, actions } = &nodes[id].kind {
                let key = (*infoset, here);
                let r = match lookup.get(&key) {
                    Some(&r) => r,
                    None => {
                        let r = agent.refined.len();
                        *splits.entry(*infoset).or_insert(0) += 1;
                        agent.refined.push(RefinedInfoSet {
                            infoset: *infoset,
                            player: *player,
                            parent: here,
                            first: agent.seqs.len(),
                            actions: actions.len(),
                            nodes: Vec::new(),
                        });
                        for a in 0..actions.len() {
                            agent.seqs.push((here, r, a));
                        }
                        lookup.insert(key, r);
                        r
                    }
                };
                agent.refined[r].nodes.push(id);
                node_refined.insert(id, r);
            }
        }
        agent.perfect_recall = splits.values().all(|&c| c == 1);
        agent.payoff = vec![T::zero(); agent.seqs.len()];
        for (id, node) in nodes.iter().enumerate() {
            if let (true, NodeKind::Terminal { payoffs, .. }) = (inside(id), &node.kind) {
                let s = agent.node_seq[id];
                agent.payoff[s] = agent.payoff[s].clone() + reach[id].clone() * payoffs[protagonist].clone();
            }
        }
        agent
    }

    /// Original info sets that had to be split, ascending.
    pub fn split_infosets(&self) -> Vec<InfoSetId> {
        let mut seen: Vec<InfoSetId> = self.refined.iter().map(|r| r.infoset).collect();
        seen.sort_unstable();
        let mut out: Vec<InfoSetId> = seen.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
        out.dedup();
        out
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn constraints(&self) -> (SparseMatrix<T>, Vec<T>) {
        let mut m = SparseMatrix::new(1 + self.refined.len(), self.seqs.len());
        m.push(0, 0, T::one());
        for (r, info) in self.refined.iter().enumerate() {
            m.push(r + 1, info.parent, -T::one());
            for a in 0..info.actions {
                m.push(r + 1, info.first + a, T::one());
            }
        }
        let mut rhs = vec![T::zero(); m.rows];
        rhs[0] = T::one();
        (m, rhs)
    }
}

/// Merged single agent for a target `(infoset, action)` of `protagonist`.
#[derive(Clone, Debug)]
pub struct MergedSingleAgent<T> {
    pub agent: MergedAgent<T>,
    pub e: SparseMatrix<T>,
    pub e_rhs: Vec<T>,
    /// Combined sequences ending with the tested action (one per refined
    /// part of the target info set).
    pub targets: Vec<usize>,
    /// Combined sequences lying on a path to the target.
    pub toward: Vec<usize>,
    /// Combined sequences branching away from the target above it.
    pub away: Vec<usize>,
}

pub fn build_merged_single_agent<T: Scalar>(
    game: &GameTree<T>,
    protagonist: PlayerId,
    infoset: InfoSetId,
    action: usize,
) -> MergedSingleAgent<T> {
    let reach = game.chance_reach();
    let agent = MergedAgent::build(game, protagonist, None, &reach);
    let (e, e_rhs) = agent.constraints();
    let nodes = game.nodes();
    let members = &game.infoset(infoset).members;
    let mut targets = Vec::new();
    let mut toward = std::collections::BTreeSet::new();
    let mut above: HashMap<usize, Vec<bool>> = HashMap::new();
    for &m in members {
        let r = agent.refined.iter().position(|r| r.nodes.contains(&m)).expect("member in agent");
        let t = agent.refined[r].first + action;
        if !targets.contains(&t) {
            targets.push(t);
        }
        let mut cur = m;
        while let Some((p, k)) = nodes[cur].parent {
            if let NodeKind::Decision { .. } = nodes[p].kind {
                let s = agent.node_seq[cur];
                toward.insert(s);
                let (_, rp, _) = agent.seqs[s];
                above.entry(rp).or_insert_with(|| vec![false; agent.refined[rp].actions])[k] = true;
            }
            cur = p;
        }
    }
    let mut away: Vec<usize> = above
        .iter()
        .flat_map(|(r, on)| {
            let first = agent.refined[*r].first;
            on.iter().enumerate().filter(|(_, &b)| !b).map(move |(a, _)| first + a)
        })
        .collect();
    away.sort_unstable();
    MergedSingleAgent { agent, e, e_rhs, targets, toward: toward.into_iter().collect(), away }
}

/// Exchanges the two players of a two-player game.
pub fn swap_players<T: Scalar>(game: &GameTree<T>) -> Result<GameTree<T>, SeqFormError> {
    if game.num_players() != 2 {
        return Err(SeqFormError::NotTwoPlayer(game.num_players()));
    }
    fn swap<T: Scalar>(spec: NodeSpec<T>) -> NodeSpec<T> {
        match spec {
            NodeSpec::Terminal { label, outcome, name, mut payoffs } => {
                payoffs.swap(0, 1);
                NodeSpec::Terminal { label, outcome, name, payoffs }
            }
            NodeSpec::Chance { label, number, name, branches } => NodeSpec::Chance {
                label,
                number,
                name,
                branches: branches.into_iter().map(|(a, p, s)| (a, p, swap(s))).collect(),
            },
            NodeSpec::Decision { label, player, number, name, branches } => NodeSpec::Decision {
                label,
                player: 1 - player,
                number,
                name,
                branches: branches.into_iter().map(|(a, s)| (a, swap(s))).collect(),
            },
        }
    }
    let players = vec![game.players()[1].clone(), game.players()[0].clone()];
    Ok(GameTree::new(&game.title, players, swap(game.to_spec()))?.with_comment(game.comment.clone()))
}
