//! Dominated-action detection.
//!
//! `strong_scan` is the leaf-wise sufficient test. `check_action` solves the
//! LP pair (u2: maxmin of avoiding the action; u1: cooperative best case of
//! playing it) and, on ties, the weak pair (u3, u4).
//!
//! All values are expected utilities conditional on reaching the target info
//! set I: payoffs come from leaves below I and the opponent's plan is
//! normalized by its chance-weighted probability of reaching I (a
//! Charnes–Cooper scaling, so every problem stays linear).

use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::game::{GameError, GameTree, InfoSetId, NodeId, NodeKind, PlayerId};
use crate::lp::{self, Bound, LpProblem, LpStatus, Sense};
use crate::scalar::Scalar;
use crate::seqform::{self, reach_sets_with, MergedAgent, ReachSets, SeqFormError, SequenceIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DominanceError {
    #[error("info set '{0}' has a single action; nothing to check")]
    NotCheckable(String),
    #[error("LP '{problem}' ended with status {status:?}")]
    Lp { problem: &'static str, status: LpStatus },
    #[error("no info set '{name}' for player {}", player + 1)]
    UnknownInfoSet { player: PlayerId, name: String },
    #[error("no action '{action}' at info set '{infoset}'")]
    UnknownAction { infoset: String, action: String },
    #[error(transparent)]
    SeqForm(#[from] SeqFormError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    StrictlyDominated,
    WeaklyDominated,
    NotDominated,
    StronglyStrict,
    StronglyWeak,
}

impl Verdict {
    pub fn is_dominated(self) -> bool {
        !matches!(self, Verdict::NotDominated)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Verdict::StrictlyDominated | Verdict::StronglyStrict)
    }

    pub fn mode_name(self) -> &'static str {
        match self {
            Verdict::StrictlyDominated => "strict",
            Verdict::WeaklyDominated => "weak",
            Verdict::NotDominated => "none",
            Verdict::StronglyStrict => "strong-strict",
            Verdict::StronglyWeak => "strong-weak",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckMode {
    StrictOnly,
    StrictThenWeak,
}

/// How opponents are restricted to strategies that reach I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OpponentReach {
    /// Any opponent plan with positive probability of reaching I, values
    /// conditioned on reaching it.
    Conditional,
    /// Additionally forbid opponent actions that branch away from I.
    Forced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Relative equality tolerance: ε = scale · (1 + max(|u1|, |u2|)).
    pub eps_scale: f64,
    pub mode: CheckMode,
    pub strong_first: bool,
    pub reach: OpponentReach,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { eps_scale: 1e-7, mode: CheckMode::StrictOnly, strong_first: true, reach: OpponentReach::Conditional }
    }
}

impl CheckConfig {
    pub fn weak() -> Self {
        CheckConfig { mode: CheckMode::StrictThenWeak, ..Self::default() }
    }

    pub fn eps<T: Scalar>(&self, u1: &T, u2: &T) -> T {
        T::from_f64_lossy(self.eps_scale) * (T::one() + u1.abs().max_of(u2.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceVerdict<T> {
    #[serde(with = "crate::game::one_based")]
    pub player: PlayerId,
    pub infoset: String,
    pub action: String,
    pub action_index: usize,
    pub result: Verdict,
    pub u1: T,
    pub u2: T,
    pub u3: Option<T>,
    pub u4: Option<T>,
    /// Realization plan of the dominating strategy below I, by sequence label.
    pub witness: Option<Vec<(String, T)>>,
    /// The merged single agent needed refined info sets.
    pub merged_recall_warning: bool,
    /// u3 < u4 − ε on a tie, which the decision rule rules out.
    pub anomaly: Option<String>,
}

/// `(dominated action, dominating action, strict)` from the leaf-wise test.
pub fn strong_scan<T: Scalar>(game: &GameTree<T>, infoset: InfoSetId) -> Vec<(usize, usize, bool)> {
    let info = game.infoset(infoset);
    let player = info.player;
    let k = info.actions.len();
    let mut lo: Vec<Option<T>> = vec![None; k];
    let mut hi: Vec<Option<T>> = vec![None; k];
    for &m in &info.members {
        for (a, &child) in game.node(m).children.iter().enumerate() {
            for leaf in game.leaves_under(child) {
                if let NodeKind::Terminal { payoffs, .. } = &game.node(leaf).kind {
                    let u = &payoffs[player];
                    if lo[a].as_ref().map_or(true, |v| u < v) {
                        lo[a] = Some(u.clone());
                    }
                    if hi[a].as_ref().map_or(true, |v| u > v) {
                        hi[a] = Some(u.clone());
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let (Some(max_a), Some(min_b), Some(min_a), Some(max_b)) = (&hi[a], &lo[b], &lo[a], &hi[b]) else {
                continue;
            };
            if min_b > max_a {
                out.push((a, b, true));
            } else if min_b >= max_a && max_b > min_a {
                out.push((a, b, false));
            }
        }
    }
    out
}

/// Two-player view of a game for one protagonist, with everything that is
/// shared between checks precomputed.
pub struct DominanceContext<'g, T: Scalar> {
    game: Cow<'g, GameTree<T>>,
    /// Protagonist in the original game.
    pub player: PlayerId,
    prot: PlayerId,
    reach: Vec<T>,
    own: SequenceIndex,
    opp: SequenceIndex,
    /// Original info-set id → id in the working view (protagonist only).
    view_of: HashMap<InfoSetId, InfoSetId>,
}

/// Per-check local data: nodes above and below I.
struct Local {
    region: Vec<bool>,
    members: Vec<NodeId>,
    leaves: Vec<NodeId>,
    own_isets: Vec<InfoSetId>,
    opp_isets: Vec<InfoSetId>,
}

struct U2Problem<T> {
    lp: LpProblem<T>,
    x: BTreeMap<usize, usize>,
    gamma: usize,
}

struct MergedProblem {
    agent_seqs: usize,
    z: Vec<usize>,
}

impl<'g, T: Scalar> DominanceContext<'g, T> {
    pub fn new(game: &'g GameTree<T>, player: PlayerId) -> Result<Self, DominanceError> {
        if player >= game.num_players() {
            return Err(GameError::BadPlayer(player).into());
        }
        let (view, prot): (Cow<'g, GameTree<T>>, PlayerId) = if game.num_players() == 2 {
            (Cow::Borrowed(game), player)
        } else {
            (Cow::Owned(seqform::merge_opponents(game, player)?), 0)
        };
        let own = seqform::build_sequences(&view, prot)?;
        let others: Vec<PlayerId> = (0..view.num_players()).filter(|&p| p != prot).collect();
        let opp = seqform::build_group_sequences(&view, &others)?;
        let reach = view.chance_reach();
        let view_of = game
            .player_infosets(player)
            .filter_map(|i| view.find_infoset_by_number(prot, i.number).map(|v| (i.id, v.id)))
            .collect();
        Ok(DominanceContext { game: view, player, prot, reach, own, opp, view_of })
    }

    pub fn game(&self) -> &GameTree<T> {
        &self.game
    }

    /// Info set of the protagonist in the working view, by name.
    pub fn infoset_by_name(&self, name: &str) -> Result<InfoSetId, DominanceError> {
        self.game
            .find_infoset(self.prot, name)
            .map(|i| i.id)
            .ok_or_else(|| DominanceError::UnknownInfoSet { player: self.player, name: name.to_string() })
    }

    /// Protagonist info sets of the working view.
    pub fn infosets(&self) -> Vec<InfoSetId> {
        self.own.infosets.clone()
    }

    pub fn reach_sets(&self, infoset: InfoSetId, action: usize) -> ReachSets {
        reach_sets_with(&self.game, &self.own, &self.opp, infoset, action)
    }

    fn local(&self, infoset: InfoSetId) -> Local {
        let g = &*self.game;
        let nodes = g.nodes();
        let members = g.infoset(infoset).members.clone();
        let mut region = vec![false; nodes.len()];
        let mut below = vec![false; nodes.len()];
        let mut leaves = Vec::new();
        for &m in &members {
            let mut cur = m;
            while let Some((p, _)) = nodes[cur].parent {
                if region[p] {
                    break;
                }
                region[p] = true;
                cur = p;
            }
        }
        for &m in &members {
            let mut stack = vec![m];
            while let Some(n) = stack.pop() {
                region[n] = true;
                below[n] = true;
                if nodes[n].is_terminal() {
                    leaves.push(n);
                }
                stack.extend(nodes[n].children.iter().copied());
            }
        }
        leaves.sort_unstable();
        let own_isets = self
            .own
            .infosets
            .iter()
            .copied()
            .filter(|&j| g.infoset(j).members.iter().any(|&n| below[n]))
            .collect();
        let mut opp_mark: HashMap<InfoSetId, bool> = HashMap::new();
        for (id, n) in nodes.iter().enumerate() {
            if region[id] {
                if let NodeKind::Decision { player, infoset: j, .. } = &n.kind {
                    if *player != self.prot {
                        opp_mark.insert(*j, true);
                    }
                }
            }
        }
        let opp_isets = self.opp.infosets.iter().copied().filter(|j| opp_mark.contains_key(j)).collect();
        Local { region, members, leaves, own_isets, opp_isets }
    }

    fn actions_of(&self, j: InfoSetId) -> usize {
        self.game.infoset(j).actions.len()
    }

    /// Local sequences of the protagonist: σ_I, then actions of I and below.
    fn own_local(&self, loc: &Local, infoset: InfoSetId) -> Vec<usize> {
        let mut out = vec![self.own.parent_of[&infoset]];
        for &j in &loc.own_isets {
            for a in 0..self.actions_of(j) {
                out.push(self.own.seq(j, a));
            }
        }
        out
    }

    fn opp_local(&self, loc: &Local) -> Vec<usize> {
        let mut out = vec![0];
        for &j in &loc.opp_isets {
            for a in 0..self.actions_of(j) {
                out.push(self.opp.seq(j, a));
            }
        }
        out
    }

    /// u2 LP: max γ s.t. A_Iᵀx − Fᵀλ − γ g ≥ 0 over the local opponent
    /// sequences, λ_root ≥ 0, x a local plan with x[σ_I] = 1, x[c] = 0.
    fn u2_problem(&self, loc: &Local, infoset: InfoSetId, target: usize, rs: &ReachSets, forced: bool) -> U2Problem<T> {
        let mut lp = LpProblem::new(true);
        let own_seqs = self.own_local(loc, infoset);
        let mut x = BTreeMap::new();
        for &s in &own_seqs {
            x.insert(s, lp.var(T::zero(), Bound::NonNeg));
        }
        lp.fix(x[&own_seqs[0]], T::one());
        lp.fix(x[&target], T::zero());
        for &j in &loc.own_isets {
            let mut row = vec![(x[&self.own.parent_of[&j]], -T::one())];
            for a in 0..self.actions_of(j) {
                row.push((x[&self.own.seq(j, a)], T::one()));
            }
            lp.row(row, Sense::Eq, T::zero());
        }
        let opp_seqs = self.opp_local(loc);
        let mut lambda = vec![lp.var(T::zero(), Bound::NonNeg)];
        for _ in &loc.opp_isets {
            lambda.push(lp.var(T::zero(), Bound::Free));
        }
        let gamma = lp.var(T::one(), Bound::Free);
        let col: HashMap<usize, usize> = opp_seqs.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); opp_seqs.len()];
        for &leaf in &loc.leaves {
            if let NodeKind::Terminal { payoffs, .. } = &self.game.node(leaf).kind {
                let w = self.reach[leaf].clone() * payoffs[self.prot].clone();
                if !w.is_zero() {
                    rows[col[&self.opp.node_seq[leaf]]].push((x[&self.own.node_seq[leaf]], w));
                }
            }
        }
        // −Fᵀλ
        rows[0].push((lambda[0], -T::one()));
        for (r, &j) in loc.opp_isets.iter().enumerate() {
            rows[col[&self.opp.parent_of[&j]]].push((lambda[r + 1], T::one()));
            for a in 0..self.actions_of(j) {
                rows[col[&self.opp.seq(j, a)]].push((lambda[r + 1], -T::one()));
            }
        }
        // −γ g
        let mut g = vec![T::zero(); opp_seqs.len()];
        for &m in &loc.members {
            let c = col[&self.opp.node_seq[m]];
            g[c] = g[c].clone() + self.reach[m].clone();
        }
        for (c, gv) in g.into_iter().enumerate() {
            if !gv.is_zero() {
                rows[c].push((gamma, -gv));
            }
        }
        for (c, row) in rows.into_iter().enumerate() {
            if forced && rs.opp_zero.binary_search(&opp_seqs[c]).is_ok() {
                continue;
            }
            lp.row(row, Sense::Ge, T::zero());
        }
        U2Problem { lp, x, gamma }
    }

    /// Adds merged-agent variables over the region to `lp`: flow, the
    /// normalization Σ_{n∈I} π(n) z[σ̄(n)] = 1, and the action restriction
    /// at I (`play` = only that action; `avoid` = never that action).
    fn add_merged(
        &self,
        lp: &mut LpProblem<T>,
        agent: &MergedAgent<T>,
        loc: &Local,
        infoset: InfoSetId,
        action: usize,
        play: bool,
        forced: bool,
    ) -> MergedProblem {
        let z: Vec<usize> = (0..agent.len()).map(|_| lp.var(T::zero(), Bound::NonNeg)).collect();
        for info in &agent.refined {
            let mut row = vec![(z[info.parent], -T::one())];
            for a in 0..info.actions {
                row.push((z[info.first + a], T::one()));
            }
            lp.row(row, Sense::Eq, T::zero());
            if info.infoset == infoset {
                for a in 0..info.actions {
                    if (play && a != action) || (!play && a == action) {
                        lp.fix(z[info.first + a], T::zero());
                    }
                }
            }
        }
        let mut norm: BTreeMap<usize, T> = BTreeMap::new();
        for &m in &loc.members {
            let e = norm.entry(agent.node_seq[m]).or_insert_with(T::zero);
            *e = e.clone() + self.reach[m].clone();
        }
        lp.row(norm.into_iter().map(|(s, w)| (z[s], w)).collect(), Sense::Eq, T::one());
        if forced {
            let nodes = self.game.nodes();
            let mut above: HashMap<usize, Vec<bool>> = HashMap::new();
            for &m in &loc.members {
                let mut cur = m;
                while let Some((p, k)) = nodes[cur].parent {
                    if let NodeKind::Decision { player, .. } = &nodes[p].kind {
                        if *player != self.prot {
                            let (_, r, _) = agent.seqs[agent.node_seq[cur]];
                            above.entry(r).or_insert_with(|| vec![false; agent.refined[r].actions])[k] = true;
                        }
                    }
                    cur = p;
                }
            }
            for (r, on) in above {
                for (a, _) in on.iter().enumerate().filter(|(_, &b)| !b) {
                    lp.fix(z[agent.refined[r].first + a], T::zero());
                }
            }
        }
        MergedProblem { agent_seqs: agent.len(), z }
    }

    fn merged_objective(&self, lp: &mut LpProblem<T>, agent: &MergedAgent<T>, loc: &Local, mp: &MergedProblem) {
        debug_assert_eq!(mp.agent_seqs, agent.len());
        for &leaf in &loc.leaves {
            if let NodeKind::Terminal { payoffs, .. } = &self.game.node(leaf).kind {
                let v = mp.z[agent.node_seq[leaf]];
                lp.objective[v] = lp.objective[v].clone() + self.reach[leaf].clone() * payoffs[self.prot].clone();
            }
        }
    }

    fn solve_checked(lp: &LpProblem<T>, problem: &'static str) -> Result<lp::LpSolution<T>, DominanceError> {
        let sol = lp::solve(lp);
        if sol.status != LpStatus::Optimal {
            return Err(DominanceError::Lp { problem, status: sol.status });
        }
        Ok(sol)
    }

    /// Best (`maximize`) or worst case of playing `action`, cooperatively.
    fn u1_or_u4(&self, loc: &Local, agent: &MergedAgent<T>, infoset: InfoSetId, action: usize, maximize: bool, forced: bool) -> Result<T, DominanceError> {
        let mut lp = LpProblem::new(maximize);
        let mp = self.add_merged(&mut lp, agent, loc, infoset, action, true, forced);
        self.merged_objective(&mut lp, agent, loc, &mp);
        let name = if maximize { "u1" } else { "u4" };
        Ok(Self::solve_checked(&lp, name)?.objective)
    }

    /// u3: best cooperative value of an avoider that still attains u2.
    fn u3(&self, loc: &Local, agent: &MergedAgent<T>, infoset: InfoSetId, action: usize, rs: &ReachSets, u2: &T, forced: bool) -> Result<T, DominanceError> {
        let mut p = self.u2_problem(loc, infoset, rs.target, rs, forced);
        p.lp.maximize = true;
        for c in p.lp.objective.iter_mut() {
            *c = T::zero();
        }
        let slack = if T::EXACT { T::zero() } else { T::from_f64_lossy(1e-9) * (T::one() + u2.abs()) };
        p.lp.row(vec![(p.gamma, T::one())], Sense::Ge, u2.clone() - slack);
        let mp = self.add_merged(&mut p.lp, agent, loc, infoset, action, false, forced);
        self.merged_objective(&mut p.lp, agent, loc, &mp);
        // the avoider's mix at I matches x
        for a in 0..self.actions_of(infoset) {
            let mut row: BTreeMap<usize, T> = BTreeMap::new();
            for info in agent.refined.iter().filter(|r| r.infoset == infoset) {
                let w = info.nodes.iter().fold(T::zero(), |acc, &n| acc + self.reach[n].clone());
                let e = row.entry(mp.z[info.first + a]).or_insert_with(T::zero);
                *e = e.clone() + w;
            }
            let mut coeffs: Vec<(usize, T)> = row.into_iter().collect();
            coeffs.push((p.x[&self.own.seq(infoset, a)], -T::one()));
            p.lp.row(coeffs, Sense::Eq, T::zero());
        }
        Ok(Self::solve_checked(&p.lp, "u3")?.objective)
    }

    /// `check` addressed by the original game's info-set id.
    pub fn check_original(&self, infoset: InfoSetId, action: usize, config: &CheckConfig) -> Result<DominanceVerdict<T>, DominanceError> {
        let local = *self.view_of.get(&infoset).ok_or(GameError::BadInfoSet(infoset))?;
        self.check(local, action, config)
    }

    /// Full decision procedure for one action; `infoset` is a view id.
    pub fn check(&self, infoset: InfoSetId, action: usize, config: &CheckConfig) -> Result<DominanceVerdict<T>, DominanceError> {
        let info = self.game.infoset(infoset);
        if info.player != self.prot {
            return Err(DominanceError::UnknownInfoSet { player: self.player, name: info.name.clone() });
        }
        if info.actions.len() < 2 {
            return Err(DominanceError::NotCheckable(info.name.clone()));
        }
        let mut verdict = DominanceVerdict {
            player: self.player,
            infoset: info.name.clone(),
            action: info.actions[action].clone(),
            action_index: action,
            result: Verdict::NotDominated,
            u1: T::zero(),
            u2: T::zero(),
            u3: None,
            u4: None,
            witness: None,
            merged_recall_warning: false,
            anomaly: None,
        };
        let loc = self.local(infoset);
        let rs = self.reach_sets(infoset, action);
        if config.strong_first {
            let weak_ok = config.mode == CheckMode::StrictThenWeak;
            if let Some(&(_, b, strict)) =
                strong_scan(&self.game, infoset).iter().find(|(a, _, s)| *a == action && (*s || weak_ok))
            {
                let (max_a, min_b) = self.leaf_bounds(infoset, action, b);
                verdict.result = if strict { Verdict::StronglyStrict } else { Verdict::StronglyWeak };
                verdict.u1 = max_a;
                verdict.u2 = min_b;
                verdict.witness = Some(self.pure_witness(&loc, infoset, b));
                return Ok(verdict);
            }
        }
        let forced = config.reach == OpponentReach::Forced;
        let p2 = self.u2_problem(&loc, infoset, rs.target, &rs, forced);
        let s2 = Self::solve_checked(&p2.lp, "u2")?;
        let agent = MergedAgent::build(&self.game, self.prot, Some(&loc.region), &self.reach);
        // a split target is harmless: its action is pinned in every part
        verdict.merged_recall_warning = agent.split_infosets().iter().any(|&j| j != infoset);
        let u1 = self.u1_or_u4(&loc, &agent, infoset, action, true, forced)?;
        let u2 = s2.objective.clone();
        let eps = config.eps(&u1, &u2);
        verdict.u1 = u1.clone();
        verdict.u2 = u2.clone();
        if u2 > u1.clone() + eps.clone() {
            verdict.result = Verdict::StrictlyDominated;
            verdict.witness = Some(p2.x.iter().map(|(&s, &v)| (self.own.label(&self.game, s), s2.primal[v].clone())).collect());
        } else if u2 >= u1.clone() - eps.clone() && config.mode == CheckMode::StrictThenWeak {
            let u3 = self.u3(&loc, &agent, infoset, action, &rs, &u2, forced)?;
            let u4 = self.u1_or_u4(&loc, &agent, infoset, action, false, forced)?;
            if u3 > u4.clone() + eps.clone() {
                verdict.result = Verdict::WeaklyDominated;
                verdict.witness = Some(p2.x.iter().map(|(&s, &v)| (self.own.label(&self.game, s), s2.primal[v].clone())).collect());
            } else if u3 < u4.clone() - eps {
                verdict.anomaly = Some(format!("u3 = {} < u4 = {}", u3, u4));
            }
            verdict.u3 = Some(u3);
            verdict.u4 = Some(u4);
        }
        Ok(verdict)
    }

    /// Worst leaf after `a` and best... (max over `a`, min over `b`).
    fn leaf_bounds(&self, infoset: InfoSetId, a: usize, b: usize) -> (T, T) {
        let info = self.game.infoset(infoset);
        let mut max_a: Option<T> = None;
        let mut min_b: Option<T> = None;
        for &m in &info.members {
            let node = self.game.node(m);
            for leaf in self.game.leaves_under(node.children[a]) {
                if let NodeKind::Terminal { payoffs, .. } = &self.game.node(leaf).kind {
                    let u = payoffs[self.prot].clone();
                    max_a = Some(max_a.map_or(u.clone(), |v| v.max_of(u)));
                }
            }
            for leaf in self.game.leaves_under(node.children[b]) {
                if let NodeKind::Terminal { payoffs, .. } = &self.game.node(leaf).kind {
                    let u = payoffs[self.prot].clone();
                    min_b = Some(min_b.map_or(u.clone(), |v| v.min_of(u)));
                }
            }
        }
        (max_a.unwrap_or_else(T::zero), min_b.unwrap_or_else(T::zero))
    }

    /// Pure local plan playing `b` at I and the first action below.
    fn pure_witness(&self, loc: &Local, infoset: InfoSetId, b: usize) -> Vec<(String, T)> {
        let sigma = self.own.parent_of[&infoset];
        let mut on: Vec<usize> = vec![sigma, self.own.seq(infoset, b)];
        for &j in &loc.own_isets {
            if j != infoset && on.contains(&self.own.parent_of[&j]) {
                on.push(self.own.seq(j, 0));
            }
        }
        self.own_local(loc, infoset)
            .into_iter()
            .map(|s| (self.own.label(&self.game, s), if on.contains(&s) { T::one() } else { T::zero() }))
            .collect()
    }
}

/// One-off check of `(player, infoset, action)` on `game`.
pub fn check_action<T: Scalar>(
    game: &GameTree<T>,
    player: PlayerId,
    infoset: InfoSetId,
    action: usize,
    config: &CheckConfig,
) -> Result<DominanceVerdict<T>, DominanceError> {
    DominanceContext::new(game, player)?.check_original(infoset, action, config)
}

/// Looks an action up by info-set name and action label.
pub fn resolve<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: &str, action: &str) -> Result<(InfoSetId, usize), DominanceError> {
    let info = game
        .find_infoset(player, infoset)
        .ok_or_else(|| DominanceError::UnknownInfoSet { player, name: infoset.to_string() })?;
    let a = info
        .actions
        .iter()
        .position(|x| x == action)
        .ok_or_else(|| DominanceError::UnknownAction { infoset: infoset.to_string(), action: action.to_string() })?;
    Ok((info.id, a))
}

/// Values of the individual problems, for callers that want them directly.
pub fn u2_maxmin<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: InfoSetId, action: usize) -> Result<T, DominanceError> {
    let cfg = CheckConfig { strong_first: false, ..CheckConfig::default() };
    check_action(game, player, infoset, action, &cfg).map(|v| v.u2)
}

pub fn u1_bestcase<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: InfoSetId, action: usize) -> Result<T, DominanceError> {
    let cfg = CheckConfig { strong_first: false, ..CheckConfig::default() };
    check_action(game, player, infoset, action, &cfg).map(|v| v.u1)
}

pub fn u4_worstcase<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: InfoSetId, action: usize) -> Result<T, DominanceError> {
    let ctx = DominanceContext::new(game, player)?;
    let infoset = *ctx.view_of.get(&infoset).ok_or(GameError::BadInfoSet(infoset))?;
    let loc = ctx.local(infoset);
    let agent = MergedAgent::build(ctx.game(), ctx.prot, Some(&loc.region), &ctx.reach);
    ctx.u1_or_u4(&loc, &agent, infoset, action, false, false)
}

pub fn u3_weak<T: Scalar>(game: &GameTree<T>, player: PlayerId, infoset: InfoSetId, action: usize, u2: &T) -> Result<T, DominanceError> {
    let ctx = DominanceContext::new(game, player)?;
    let infoset = *ctx.view_of.get(&infoset).ok_or(GameError::BadInfoSet(infoset))?;
    let loc = ctx.local(infoset);
    let rs = ctx.reach_sets(infoset, action);
    let agent = MergedAgent::build(ctx.game(), ctx.prot, Some(&loc.region), &ctx.reach);
    ctx.u3(&loc, &agent, infoset, action, &rs, u2, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::NodeSpec as S;

    fn players() -> Vec<String> {
        vec!["P1".into(), "P2".into()]
    }

    #[test]
    fn single_decision_values() {
        let g: GameTree<f64> = GameTree::new("g", players(), S::decision(0, 1, "I", vec![("c", S::leaf(vec![1.0, 0.0])), ("d", S::leaf(vec![5.0, 0.0]))])).unwrap();
        let cfg = CheckConfig { strong_first: false, ..CheckConfig::weak() };
        let v = check_action(&g, 0, 0, 0, &cfg).unwrap();
        assert_eq!(v.result, Verdict::StrictlyDominated);
        assert!((v.u2 - 5.0).abs() < 1e-9 && (v.u1 - 1.0).abs() < 1e-9);
        let w = check_action(&g, 0, 0, 1, &cfg).unwrap();
        assert_eq!(w.result, Verdict::NotDominated);
    }

    #[test]
    fn identical_actions_are_not_dominated() {
        let g: GameTree<f64> = GameTree::new("g", players(), S::decision(0, 1, "I", vec![("c", S::leaf(vec![2.0, 0.0])), ("d", S::leaf(vec![2.0, 0.0]))])).unwrap();
        let v = check_action(&g, 0, 0, 0, &CheckConfig::weak()).unwrap();
        assert_eq!(v.result, Verdict::NotDominated);
        assert_eq!((v.u1, v.u2, v.u3, v.u4), (2.0, 2.0, Some(2.0), Some(2.0)));
    }

    #[test]
    fn single_action_is_not_checkable() {
        let g: GameTree<f64> = GameTree::new("g", players(), S::decision(0, 1, "I", vec![("c", S::leaf(vec![2.0, 0.0]))])).unwrap();
        assert!(matches!(check_action(&g, 0, 0, 0, &CheckConfig::default()), Err(DominanceError::NotCheckable(_))));
    }
}
