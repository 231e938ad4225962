//! Iterated removal of dominated actions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dominance::{CheckConfig, CheckMode, DominanceContext, DominanceError, DominanceVerdict, OpponentReach};
use crate::game::{GameError, GameTree, InfoSetId, PlayerId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReduceError {
    #[error(transparent)]
    Dominance(#[from] DominanceError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("max_rounds must be at least 1")]
    ZeroRounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    /// Deepest info sets first (depth = deepest member), ties by id.
    DepthDescending,
    Declaration,
}

/// How the players' passes within a round see each other's removals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Schedule {
    /// Every player is checked against the round-start game.
    Simultaneous,
    /// Player 1 is checked and reduced, then player 2 on the result, etc.
    PlayerByPlayer,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReduceConfig {
    pub mode: CheckMode,
    pub max_rounds: Option<usize>,
    pub order: Order,
    pub strong_first: bool,
    pub eps_scale: f64,
    pub reach: OpponentReach,
    pub schedule: Schedule,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            mode: CheckMode::StrictOnly,
            max_rounds: None,
            order: Order::DepthDescending,
            strong_first: true,
            eps_scale: 1e-7,
            reach: OpponentReach::Conditional,
            schedule: Schedule::PlayerByPlayer,
        }
    }
}

impl ReduceConfig {
    pub fn check_config(&self) -> CheckConfig {
        CheckConfig { eps_scale: self.eps_scale, mode: self.mode, strong_first: self.strong_first, reach: self.reach }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    #[serde(with = "crate::game::one_based")]
    pub player: PlayerId,
    pub infoset: String,
    pub action: String,
    pub mode: String,
    pub u1: f64,
    pub u2: f64,
    pub u3: Option<f64>,
    pub u4: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub round: usize,
    pub removals: Vec<Removal>,
}

impl Round {
    pub fn count(&self, player: PlayerId) -> usize {
        self.removals.iter().filter(|r| r.player == player).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    #[serde(rename = "fixed-point")]
    FixedPoint,
    #[serde(rename = "max-rounds")]
    MaxRounds,
    #[serde(rename = "fully-solved")]
    FullySolved,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub rounds: Vec<Round>,
    pub terminated: Termination,
    /// Tie checks where u3 < u4 − ε (never expected).
    #[serde(skip)]
    pub anomalies: Vec<String>,
    /// Number of tie checks (|u2 − u1| ≤ ε) that computed u3 and u4.
    #[serde(skip)]
    pub ties: usize,
}

impl ReductionLog {
    /// Per-round `(player 1, player 2, …)` removal counts.
    pub fn counts(&self, players: usize) -> Vec<Vec<usize>> {
        self.rounds.iter().map(|r| (0..players).map(|p| r.count(p)).collect()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serializes")
    }
}

fn ordered<T: Scalar>(game: &GameTree<T>, player: PlayerId, order: Order) -> Vec<InfoSetId> {
    let mut ids: Vec<InfoSetId> = game.player_infosets(player).filter(|i| i.actions.len() > 1).map(|i| i.id).collect();
    if order == Order::DepthDescending {
        ids.sort_by_key(|&i| (std::cmp::Reverse(game.infoset_depth(i)), i));
    }
    ids
}

/// Verdicts for every checkable action of `player`, in traversal order.
pub fn check_player<T: Scalar>(
    game: &GameTree<T>,
    player: PlayerId,
    config: &ReduceConfig,
) -> Result<Vec<(InfoSetId, DominanceVerdict<T>)>, ReduceError> {
    let ctx = DominanceContext::new(game, player)?;
    let cfg = config.check_config();
    let jobs: Vec<(InfoSetId, usize)> = ordered(game, player, config.order)
        .into_iter()
        .flat_map(|i| (0..game.infoset(i).actions.len()).map(move |a| (i, a)))
        .collect();
    let verdicts: Result<Vec<_>, DominanceError> =
        jobs.par_iter().map(|&(i, a)| ctx.check_original(i, a, &cfg).map(|v| (i, v))).collect();
    Ok(verdicts?)
}

/// Drops flagged actions, never emptying an info set: if every action of an
/// info set is flagged, the one listed last survives.
fn removable<T: Scalar>(game: &GameTree<T>, flagged: &[(InfoSetId, DominanceVerdict<T>)]) -> Vec<usize> {
    let mut keep = Vec::new();
    for (k, (i, _)) in flagged.iter().enumerate() {
        let total = game.infoset(*i).actions.len();
        let before = keep.iter().filter(|&&j: &&usize| flagged[j].0 == *i).count();
        if before + 1 < total {
            keep.push(k);
        }
    }
    keep
}

fn record<T: Scalar>(v: &DominanceVerdict<T>) -> Removal {
    Removal {
        player: v.player,
        infoset: v.infoset.clone(),
        action: v.action.clone(),
        mode: v.result.mode_name().to_string(),
        u1: v.u1.to_f64_lossy(),
        u2: v.u2.to_f64_lossy(),
        u3: v.u3.as_ref().map(|x| x.to_f64_lossy()),
        u4: v.u4.as_ref().map(|x| x.to_f64_lossy()),
    }
}

fn fully_solved<T: Scalar>(game: &GameTree<T>) -> bool {
    game.infosets().iter().all(|i| i.actions.len() == 1)
}

/// One pass over `players` against `game`; returns the removals in order.
fn pass<T: Scalar>(
    game: &GameTree<T>,
    players: &[PlayerId],
    config: &ReduceConfig,
    log: &mut ReductionLog,
) -> Result<(GameTree<T>, Vec<Removal>), ReduceError> {
    let mut flagged = Vec::new();
    for &p in players {
        for (i, v) in check_player(game, p, config)? {
            if v.u3.is_some() {
                log.ties += 1;
            }
            if let Some(a) = &v.anomaly {
                log.anomalies.push(format!("{} {} {}: {}", v.player, v.infoset, v.action, a));
            }
            if v.result.is_dominated() {
                flagged.push((i, v));
            }
        }
    }
    let keep = removable(game, &flagged);
    let ids: Vec<(InfoSetId, usize)> = keep.iter().map(|&k| (flagged[k].0, flagged[k].1.action_index)).collect();
    let removals = keep.iter().map(|&k| record(&flagged[k].1)).collect();
    Ok((game.remove_actions(&ids)?, removals))
}

/// Iterates rounds of removal to a fixed point (or the configured limit).
pub fn reduce_iteratively<T: Scalar>(game: &GameTree<T>, config: &ReduceConfig) -> Result<(GameTree<T>, ReductionLog), ReduceError> {
    if config.max_rounds == Some(0) {
        return Err(ReduceError::ZeroRounds);
    }
    let mut log = ReductionLog { rounds: Vec::new(), terminated: Termination::FixedPoint, anomalies: Vec::new(), ties: 0 };
    let mut current = game.clone();
    loop {
        if fully_solved(&current) {
            log.terminated = Termination::FullySolved;
            break;
        }
        if config.max_rounds.is_some_and(|m| log.rounds.len() >= m) {
            log.terminated = Termination::MaxRounds;
            break;
        }
        let mut removals = Vec::new();
        match config.schedule {
            Schedule::Simultaneous => {
                let players: Vec<PlayerId> = (0..current.num_players()).collect();
                let (next, r) = pass(&current, &players, config, &mut log)?;
                current = next;
                removals.extend(r);
            }
            Schedule::PlayerByPlayer => {
                for p in 0..current.num_players() {
                    let (next, r) = pass(&current, &[p], config, &mut log)?;
                    current = next;
                    removals.extend(r);
                }
            }
        }
        let done = removals.is_empty();
        log.rounds.push(Round { round: log.rounds.len() + 1, removals });
        if done {
            log.terminated = Termination::FixedPoint;
            break;
        }
    }
    Ok((current, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::parse_efg;
    use crate::oracle::{FIG1, FIG2};

    #[test]
    fn fig1_reduces_to_fig2_then_solves() {
        let g: GameTree<f64> = parse_efg(FIG1).unwrap();
        let top = g.find_infoset(1, "P2 top").unwrap().id;
        let bottom = g.find_infoset(1, "P2 bottom").unwrap().id;
        let r = g.remove_actions(&[(top, 1), (bottom, 0)]).unwrap();
        let fig2: GameTree<f64> = parse_efg(FIG2).unwrap();
        assert_eq!(r.to_spec(), fig2.to_spec());
        // a1 guarantees 0 against an observing player 2, a2 gets -50
        let (solved, full) = reduce_iteratively(&g, &ReduceConfig::default()).unwrap();
        assert_eq!(full.terminated, Termination::FullySolved);
        assert_eq!(full.counts(2), vec![vec![1, 2]]);
        assert!(solved.infosets().iter().all(|i| i.actions.len() == 1));
    }

    #[test]
    fn log_json_shape() {
        let g: GameTree<f64> = parse_efg(FIG2).unwrap();
        let (_, log) = reduce_iteratively(&g, &ReduceConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&log.to_json()).unwrap();
        assert_eq!(v["terminated"], "fully-solved");
        let r = &v["rounds"][0]["removals"][0];
        assert_eq!(r["infoset"], "P1");
        assert_eq!(r["action"], "2");
        assert_eq!(r["mode"], "strict");
        assert_eq!(r["u2"], 0.0);
        assert_eq!(r["u1"], -50.0);
        assert!(r["u3"].is_null());
    }

    #[test]
    fn simultaneous_matches_on_fig1() {
        let g: GameTree<f64> = parse_efg(FIG1).unwrap();
        let cfg = ReduceConfig { schedule: Schedule::Simultaneous, ..ReduceConfig::default() };
        let (_, log) = reduce_iteratively(&g, &cfg).unwrap();
        assert_eq!(log.counts(2), vec![vec![1, 2]]);
    }
}
