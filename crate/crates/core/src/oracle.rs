//! Brute-force reference for dominance on small games, and the fixture corpus.
//!
//! Strategies are enumerated over the info sets that matter for a target I:
//! the protagonist's info sets at or below I (everything above is pinned to
//! the path into I) and the opponents' info sets whose members lie on a path
//! into I or below it. Values are conditional on reaching I.
//!
//! Pure opponent profiles suffice on both sides of the quantifiers: a mixed
//! opponent strategy reaching I is a convex combination of pure ones after
//! conditioning, and the dominance inequalities are linear in it. The
//! protagonist's mixtures over avoiding strategies are the LP variables.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dominance::{check_action, CheckConfig, DominanceError, CheckMode, DominanceVerdict, OpponentReach, Verdict};
use crate::efg::{parse_efg, EfgError};
use crate::game::{GameTree, InfoSetId, NodeId, NodeKind, NodeSpec, PlayerId};
use crate::lp::{self, Bound, LpProblem, LpStatus, Sense};
use crate::scalar::Scalar;

pub const DEFAULT_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{count} pure strategies exceed the limit of {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("info set '{0}' has a single action; nothing to check")]
    NotCheckable(String),
    #[error("no opponent profile reaches info set '{0}'")]
    Unreachable(String),
    #[error("oracle LP ended with status {0:?}")]
    Lp(LpStatus),
    #[error("pipeline check failed: {0}")]
    Pipeline(#[from] DominanceError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureStrategySet {
    pub player: PlayerId,
    pub infosets: Vec<InfoSetId>,
    /// One action index per entry of `infosets`.
    pub strategies: Vec<Vec<usize>>,
    pub reduced: bool,
}

fn product(arities: &[usize], limit: u128) -> Result<Vec<Vec<usize>>, OracleError> {
    let count = arities.iter().fold(1u128, |acc, &k| acc.saturating_mul(k as u128));
    if count > limit {
        return Err(OracleError::LimitExceeded { count, limit });
    }
    let mut out = vec![Vec::with_capacity(arities.len())];
    for &k in arities {
        out = out.into_iter().flat_map(|s| (0..k).map(move |a| [s.clone(), vec![a]].concat())).collect();
    }
    Ok(out)
}

/// Every pure strategy of `player`, info sets in id order, lexicographic.
pub fn enumerate_pure<T: Scalar>(game: &GameTree<T>, player: PlayerId, limit: u128) -> Result<PureStrategySet, OracleError> {
    let infosets: Vec<InfoSetId> = game.player_infosets(player).map(|i| i.id).collect();
    let arities: Vec<usize> = infosets.iter().map(|&i| game.infoset(i).actions.len()).collect();
    Ok(PureStrategySet { player, strategies: product(&arities, limit)?, infosets, reduced: false })
}

struct Target<'g, T> {
    game: &'g GameTree<T>,
    player: PlayerId,
    infoset: InfoSetId,
    region: Vec<bool>,
    /// Action toward I at region nodes above it.
    toward: HashMap<NodeId, Vec<usize>>,
    below: Vec<bool>,
    reach: Vec<T>,
}

impl<'g, T: Scalar> Target<'g, T> {
    fn new(game: &'g GameTree<T>, player: PlayerId, infoset: InfoSetId) -> Self {
        let nodes = game.nodes();
        let mut region = vec![false; nodes.len()];
        let mut below = vec![false; nodes.len()];
        let mut toward: HashMap<NodeId, Vec<usize>> = HashMap::new();
        for &m in &game.infoset(infoset).members {
            let mut cur = m;
            while let Some((p, k)) = nodes[cur].parent {
                region[p] = true;
                let t = toward.entry(p).or_default();
                if !t.contains(&k) {
                    t.push(k);
                }
                cur = p;
            }
            let mut stack = vec![m];
            while let Some(n) = stack.pop() {
                region[n] = true;
                below[n] = true;
                stack.extend(nodes[n].children.iter().copied());
            }
        }
        Target { game, player, infoset, region, toward, below, reach: game.chance_reach() }
    }

    /// Decision info sets with a member in the region, split by owner.
    fn relevant(&self) -> (Vec<InfoSetId>, Vec<InfoSetId>) {
        let mut own = Vec::new();
        let mut opp = Vec::new();
        for info in self.game.infosets() {
            let in_region = info.members.iter().any(|&m| self.region[m]);
            if !in_region {
                continue;
            }
            if info.player == self.player {
                if info.members.iter().any(|&m| self.below[m]) {
                    own.push(info.id);
                }
            } else {
                opp.push(info.id);
            }
        }
        (own, opp)
    }

    /// (Σ_{ℓ below I} π u, Σ_{n∈I} π) for one pure profile.
    fn evaluate(&self, choice: &HashMap<InfoSetId, usize>) -> (T, T) {
        let nodes = self.game.nodes();
        let mut num = T::zero();
        let mut den = T::zero();
        let mut stack = vec![self.game.root()];
        while let Some(n) = stack.pop() {
            if !self.region[n] {
                continue;
            }
            match &nodes[n].kind {
                NodeKind::Terminal { payoffs, .. } => {
                    if self.below[n] {
                        num = num + self.reach[n].clone() * payoffs[self.player].clone();
                    }
                }
                NodeKind::Chance { .. } => stack.extend(nodes[n].children.iter().copied()),
                NodeKind::Decision { infoset, .. } => {
                    if *infoset == self.infoset {
                        den = den + self.reach[n].clone();
                    }
                    let a = match choice.get(infoset) {
                        Some(&a) => a,
                        // own info set above I: the unique action toward it
                        None => self.toward[&n][0],
                    };
                    stack.push(nodes[n].children[a]);
                }
            }
        }
        (num, den)
    }

    fn opponent_allowed(&self, info: InfoSetId, action: usize) -> bool {
        let mut toward_any = false;
        for &m in &self.game.infoset(info).members {
            if let Some(t) = self.toward.get(&m) {
                if !self.below[m] {
                    toward_any = true;
                    if t.contains(&action) {
                        return true;
                    }
                }
            }
        }
        !toward_any
    }
}

/// Payoff table u[p][q] over the protagonist's and opponents' relevant pure
/// strategies, with the protagonist strategies split by their action at I.
struct Table<T> {
    plays: Vec<Vec<T>>,
    avoids: Vec<Vec<T>>,
}

fn table<T: Scalar>(t: &Target<'_, T>, action: usize, reach: OpponentReach, limit: u128) -> Result<Table<T>, OracleError> {
    let (own, opp) = t.relevant();
    let arity = |i: &InfoSetId| t.game.infoset(*i).actions.len();
    let own_pure = product(&own.iter().map(arity).collect::<Vec<_>>(), limit)?;
    let mut opp_pure = product(&opp.iter().map(arity).collect::<Vec<_>>(), limit)?;
    if reach == OpponentReach::Forced {
        opp_pure.retain(|q| opp.iter().zip(q).all(|(&i, &a)| t.opponent_allowed(i, a)));
    }
    if (own_pure.len() as u128) * (opp_pure.len() as u128) > limit {
        return Err(OracleError::LimitExceeded { count: own_pure.len() as u128 * opp_pure.len() as u128, limit });
    }
    let at_i = own.iter().position(|&i| i == t.infoset).expect("I is relevant");
    let mut plays = Vec::new();
    let mut avoids = Vec::new();
    let mut columns: Vec<Vec<(T, T)>> = Vec::new();
    for p in &own_pure {
        let mut row = Vec::with_capacity(opp_pure.len());
        for q in &opp_pure {
            let choice: HashMap<InfoSetId, usize> =
                own.iter().copied().zip(p.iter().copied()).chain(opp.iter().copied().zip(q.iter().copied())).collect();
            row.push(t.evaluate(&choice));
        }
        columns.push(row);
    }
    // keep opponent profiles that reach I
    let keep: Vec<usize> = (0..opp_pure.len()).filter(|&q| !columns[0][q].1.is_zero()).collect();
    if keep.is_empty() {
        return Err(OracleError::Unreachable(t.game.infoset(t.infoset).name.clone()));
    }
    for (p, row) in own_pure.iter().zip(columns) {
        let vals: Vec<T> = keep.iter().map(|&q| row[q].0.clone() / row[q].1.clone()).collect();
        if p[at_i] == action {
            plays.push(vals);
        } else {
            avoids.push(vals);
        }
    }
    Ok(Table { plays, avoids })
}

fn solve<T: Scalar>(problem: &LpProblem<T>) -> Result<Option<T>, OracleError> {
    let sol = lp::solve(problem);
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.objective)),
        LpStatus::Infeasible => Ok(None),
        s => Err(OracleError::Lp(s)),
    }
}

/// Mixture over avoiding strategies: variables μ, simplex row.
fn mixture<T: Scalar>(lp: &mut LpProblem<T>, n: usize) -> Vec<usize> {
    let mu: Vec<usize> = (0..n).map(|_| lp.var(T::zero(), Bound::NonNeg)).collect();
    lp.row(mu.iter().map(|&v| (v, T::one())).collect(), Sense::Eq, T::one());
    mu
}

/// Reference verdict for `(player, infoset, action)`.
pub fn oracle_check<T: Scalar>(
    game: &GameTree<T>,
    player: PlayerId,
    infoset: InfoSetId,
    action: usize,
    config: &CheckConfig,
) -> Result<DominanceVerdict<T>, OracleError> {
    let info = game.infoset(infoset);
    if info.actions.len() < 2 {
        return Err(OracleError::NotCheckable(info.name.clone()));
    }
    let target = Target::new(game, player, infoset);
    let tab = table(&target, action, config.reach, DEFAULT_LIMIT)?;
    let nq = tab.plays[0].len();
    let best: Vec<T> = (0..nq).map(|q| tab.plays.iter().map(|r| r[q].clone()).reduce(T::max_of).expect("nonempty")).collect();
    let u1 = best.iter().cloned().reduce(T::max_of).expect("nonempty");
    let u4 = (0..nq).map(|q| tab.plays.iter().map(|r| r[q].clone()).reduce(T::min_of).expect("nonempty")).reduce(T::min_of).expect("nonempty");

    // u2 = max_μ min_q u(μ, q)
    let mut lp2 = LpProblem::new(true);
    let mu = mixture(&mut lp2, tab.avoids.len());
    let v = lp2.var(T::one(), Bound::Free);
    for q in 0..nq {
        let mut row: Vec<(usize, T)> = mu.iter().enumerate().map(|(p, &m)| (m, tab.avoids[p][q].clone())).collect();
        row.push((v, -T::one()));
        lp2.row(row, Sense::Ge, T::zero());
    }
    let u2 = solve(&lp2)?.ok_or(OracleError::Lp(LpStatus::Infeasible))?;

    // strict: max δ with u(μ, q) ≥ best(q) + δ for all q
    let mut lpd = LpProblem::new(true);
    let mu = mixture(&mut lpd, tab.avoids.len());
    let delta = lpd.var(T::one(), Bound::Free);
    for q in 0..nq {
        let mut row: Vec<(usize, T)> = mu.iter().enumerate().map(|(p, &m)| (m, tab.avoids[p][q].clone())).collect();
        row.push((delta, -T::one()));
        lpd.row(row, Sense::Ge, best[q].clone());
    }
    let delta = solve(&lpd)?.ok_or(OracleError::Lp(LpStatus::Infeasible))?;
    let eps = config.eps(&u1, &u2);
    let mut result = Verdict::NotDominated;
    if delta > eps {
        result = Verdict::StrictlyDominated;
    } else if config.mode == CheckMode::StrictThenWeak && weakly_dominated(&tab, &best, &eps)? {
        result = Verdict::WeaklyDominated;
    }
    Ok(DominanceVerdict {
        player,
        infoset: info.name.clone(),
        action: info.actions[action].clone(),
        action_index: action,
        result,
        u1,
        u2,
        u3: None,
        u4: Some(u4),
        witness: None,
        merged_recall_warning: false,
        anomaly: None,
    })
}

/// Some μ never does worse than any playing strategy and, against each of
/// them, does strictly better somewhere. The feasible μ form a convex set, so
/// strictness can be tested per playing strategy and then averaged.
fn weakly_dominated<T: Scalar>(tab: &Table<T>, best: &[T], eps: &T) -> Result<bool, OracleError> {
    for p in &tab.plays {
        let mut lpw = LpProblem::new(true);
        let mu = mixture(&mut lpw, tab.avoids.len());
        for (q, b) in best.iter().enumerate() {
            let row: Vec<(usize, T)> = mu.iter().enumerate().map(|(k, &m)| (m, tab.avoids[k][q].clone())).collect();
            lpw.row(row, Sense::Ge, b.clone());
        }
        for (k, &m) in mu.iter().enumerate() {
            let gain = (0..best.len()).fold(T::zero(), |acc, q| acc + tab.avoids[k][q].clone() - p[q].clone());
            lpw.objective[m] = gain;
        }
        match solve(&lpw)? {
            Some(total) if total > *eps => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// A named game of the test corpus.
#[derive(Clone, Debug)]
pub struct Fixture<T> {
    pub name: String,
    pub game: GameTree<T>,
}

pub const FIG1: &str = include_str!("../../../fixtures/fig1.efg");
pub const FIG2: &str = include_str!("../../../fixtures/fig2.efg");
pub const FIG3: &str = include_str!("../../../fixtures/fig3.efg");
pub const WEAK_TIE: &str = include_str!("../../../fixtures/weak_tie.efg");

pub const CORPUS_SEED: u64 = 20_160_212;
pub const CORPUS_SIZE: usize = 20;

/// The hand-built fixtures followed by the seeded random corpus.
pub fn fixtures<T: Scalar>() -> Result<Vec<Fixture<T>>, EfgError> {
    let mut out = Vec::new();
    for (name, text) in [("fig1", FIG1), ("fig2", FIG2), ("fig3", FIG3), ("weak_tie", WEAK_TIE)] {
        out.push(Fixture { name: name.to_string(), game: parse_efg(text)? });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    for k in 0..CORPUS_SIZE {
        out.push(Fixture { name: format!("random_{:02}", k), game: random_action_observable(&mut rng, 4)? });
    }
    Ok(out)
}

/// Random two-player game in which an info set groups exactly the nodes that
/// share the complete sequence of player actions so far (they differ only in
/// chance outcomes). Depth ≤ `depth`, at most two actions per node, integer
/// payoffs in [−3, 3].
pub fn random_action_observable<T: Scalar, R: Rng>(rng: &mut R, depth: usize) -> Result<GameTree<T>, EfgError> {
    struct Gen<'r, R> {
        rng: &'r mut R,
        arity: BTreeMap<(usize, String), usize>,
        numbers: BTreeMap<(usize, String), usize>,
        outcomes: usize,
    }
    impl<R: Rng> Gen<'_, R> {
        fn node<T: Scalar>(&mut self, depth: usize, left: usize, history: &str) -> NodeSpec<T> {
            let roll: f64 = self.rng.gen();
            if left == 0 || (depth > 0 && roll < 0.2) {
                self.outcomes += 1;
                let u: Vec<T> = (0..2).map(|_| T::from_ratio(self.rng.gen_range(-3i64..=3), 1)).collect();
                return NodeSpec::Terminal { label: String::new(), outcome: self.outcomes, name: String::new(), payoffs: u };
            }
            if roll < 0.4 {
                let probs = if self.rng.gen_bool(0.5) { [(1, 2), (1, 2)] } else { [(1, 3), (2, 3)] };
                let branches = probs
                    .iter()
                    .enumerate()
                    .map(|(k, &(n, d))| (format!("c{}", k), T::from_ratio(n, d), self.node(depth + 1, left - 1, history)))
                    .collect();
                return NodeSpec::Chance { label: String::new(), number: 0, name: String::new(), branches };
            }
            let player = if roll < 0.7 { 0 } else { 1 };
            let key = (player, history.to_string());
            let k = *self.arity.entry(key.clone()).or_insert_with(|| if self.rng.gen_bool(0.85) { 2 } else { 1 });
            let next = self.numbers.keys().filter(|(p, _)| *p == player).count() + 1;
            let number = *self.numbers.entry(key).or_insert(next);
            let name = format!("P{}[{}]", player + 1, history);
            let branches = (0..k)
                .map(|a| {
                    let act = format!("{}{}", if player == 0 { 'a' } else { 'b' }, a);
                    let h = format!("{}{}", history, act);
                    (act, self.node(depth + 1, left - 1, &h))
                })
                .collect();
            NodeSpec::Decision { label: String::new(), player, number, name, branches }
        }
    }
    let mut g = Gen { rng, arity: BTreeMap::new(), numbers: BTreeMap::new(), outcomes: 0 };
    let spec = g.node::<T>(0, depth, "");
    Ok(GameTree::new("random", vec!["P1".into(), "P2".into()], spec)?)
}

/// Tag carried by comparisons whose disagreement is a documented open question.
pub const OPEN_QUESTION: &str = "open-question";

/// A known pipeline/oracle disagreement in weak mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Annotation {
    pub fixture: &'static str,
    pub infoset: &'static str,
    pub action: &'static str,
    pub tag: &'static str,
    pub note: &'static str,
}

/// u4 minimises over the protagonist's own continuation after c, while the
/// oracle asks the dominating strategy to beat every continuation; here the
/// best continuation ties.
pub const ANNOTATIONS: &[Annotation] = &[Annotation {
    fixture: "random_18",
    infoset: "P2[a0]",
    action: "b0",
    tag: OPEN_QUESTION,
    note: "u3 > u4 but the best continuation after the action ties the dominating strategy",
}];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Strict,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusRow {
    pub fixture: String,
    #[serde(with = "crate::game::one_based")]
    pub player: PlayerId,
    pub infoset: String,
    pub action: String,
    pub mode: CompareMode,
    pub pipeline: Verdict,
    pub oracle: Verdict,
    pub agree: bool,
    pub tag: Option<&'static str>,
    pub u1: f64,
    pub u2: f64,
    pub u3: Option<f64>,
    pub u4: Option<f64>,
    pub anomaly: Option<String>,
}

/// Pipeline vs. oracle on every checkable action of a corpus, in both modes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CorpusReport {
    pub rows: Vec<CorpusRow>,
}

impl CorpusReport {
    pub fn disagreements(&self, mode: CompareMode) -> impl Iterator<Item = &CorpusRow> {
        self.rows.iter().filter(move |r| r.mode == mode && !r.agree)
    }

    /// Disagreements not covered by an annotation; these fail the suite.
    pub fn unexplained(&self) -> Vec<&CorpusRow> {
        self.rows.iter().filter(|r| !r.agree && r.tag.is_none()).collect()
    }

    /// Annotations that no longer match a disagreement.
    pub fn stale_annotations(&self) -> Vec<&'static Annotation> {
        ANNOTATIONS
            .iter()
            .filter(|a| {
                !self.rows.iter().any(|r| !r.agree && r.fixture == a.fixture && r.infoset == a.infoset && r.action == a.action)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn annotation_for(fixture: &str, infoset: &str, action: &str) -> Option<&'static Annotation> {
    ANNOTATIONS.iter().find(|a| a.fixture == fixture && a.infoset == infoset && a.action == action)
}

pub fn corpus_report(corpus: &[Fixture<f64>]) -> Result<CorpusReport, OracleError> {
    let mut report = CorpusReport::default();
    for f in corpus {
        for info in f.game.infosets().iter().filter(|i| i.actions.len() > 1) {
            for a in 0..info.actions.len() {
                for mode in [CompareMode::Strict, CompareMode::Weak] {
                    let cfg = match mode {
                        CompareMode::Strict => CheckConfig { strong_first: false, ..CheckConfig::default() },
                        CompareMode::Weak => CheckConfig { strong_first: false, ..CheckConfig::weak() },
                    };
                    let o = oracle_check(&f.game, info.player, info.id, a, &cfg)?;
                    let p = check_action(&f.game, info.player, info.id, a, &cfg)?;
                    let agree = o.result == p.result;
                    let tag = if agree { None } else { annotation_for(&f.name, &info.name, &info.actions[a]).map(|n| n.tag) };
                    report.rows.push(CorpusRow {
                        fixture: f.name.clone(),
                        player: info.player,
                        infoset: info.name.clone(),
                        action: info.actions[a].clone(),
                        mode,
                        pipeline: p.result,
                        oracle: o.result,
                        agree,
                        tag,
                        u1: p.u1,
                        u2: p.u2,
                        u3: p.u3,
                        u4: p.u4,
                        anomaly: p.anomaly,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> GameTree<f64> {
        fixtures::<f64>().unwrap().into_iter().find(|f| f.name == name).unwrap().game
    }

    #[test]
    fn enumerate_counts() {
        let g = fixture("weak_tie");
        assert_eq!(enumerate_pure(&g, 1, DEFAULT_LIMIT).unwrap().strategies.len(), 4);
        assert_eq!(enumerate_pure(&g, 0, DEFAULT_LIMIT).unwrap().strategies.len(), 2);
        assert!(matches!(enumerate_pure(&g, 1, 3), Err(OracleError::LimitExceeded { count: 4, limit: 3 })));
    }

    #[test]
    fn fig2_player1_action2() {
        let g = fixture("fig2");
        let v = oracle_check(&g, 0, 0, 1, &CheckConfig::default()).unwrap();
        assert_eq!(v.result, Verdict::StrictlyDominated);
        assert!(v.u2.abs() < 1e-12 && (v.u1 + 50.0).abs() < 1e-12);
    }

    #[test]
    fn fig3_player2_action2_restricted() {
        let g = fixture("fig3");
        let i = g.find_infoset(1, "P2").unwrap().id;
        let v = oracle_check(&g, 1, i, 1, &CheckConfig::default()).unwrap();
        assert_eq!(v.result, Verdict::StrictlyDominated);
        assert_eq!((v.u1, v.u2), (1.0, 2.0));
    }

    #[test]
    fn weak_tie_is_weak() {
        let g = fixture("weak_tie");
        let v = oracle_check(&g, 0, 0, 0, &CheckConfig::weak()).unwrap();
        assert_eq!(v.result, Verdict::WeaklyDominated);
        let d = oracle_check(&g, 0, 0, 1, &CheckConfig::weak()).unwrap();
        assert_eq!(d.result, Verdict::NotDominated);
    }

    #[test]
    fn random_corpus_has_checkable_actions() {
        let all = fixtures::<f64>().unwrap();
        assert_eq!(all.len(), 4 + CORPUS_SIZE);
        let checkable: usize = all.iter().map(|f| f.game.infosets().iter().filter(|i| i.actions.len() > 1).count()).sum();
        assert!(checkable > 40, "{}", checkable);
    }

    #[test]
    fn pipeline_agrees_on_corpus_strict() {
        let cfg = CheckConfig { strong_first: false, ..CheckConfig::default() };
        for f in fixtures::<f64>().unwrap() {
            for info in f.game.infosets().iter().filter(|i| i.actions.len() > 1) {
                for a in 0..info.actions.len() {
                    let o = oracle_check(&f.game, info.player, info.id, a, &cfg).unwrap();
                    let p = check_action(&f.game, info.player, info.id, a, &cfg).unwrap();
                    assert_eq!(o.result, p.result, "{} {} {}", f.name, info.name, a);
                    assert!((o.u1 - p.u1).abs() < 1e-7 && (o.u2 - p.u2).abs() < 1e-7, "{} {} {}: {:?} {:?}", f.name, info.name, a, o, p);
                }
            }
        }
    }
}
