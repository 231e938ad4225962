mod common;

use efgdom::dominance::{strong_scan, CheckConfig, Verdict};
use efgdom::game::{NodeKind, NodeSpec};
use efgdom::oracle::oracle_check;
use efgdom::{check_action, GameF64, GameTree};
use proptest::prelude::*;

use common::{aof, fixture, random_game};

fn no_strong() -> CheckConfig {
    CheckConfig { strong_first: false, ..CheckConfig::default() }
}

fn weak() -> CheckConfig {
    CheckConfig { strong_first: false, ..CheckConfig::weak() }
}

/// Every (player, infoset, action) with at least two actions at the info set.
fn checkable(g: &GameF64) -> Vec<(usize, usize, usize)> {
    g.infosets()
        .iter()
        .filter(|i| i.actions.len() > 1)
        .flat_map(|i| (0..i.actions.len()).map(move |a| (i.player, i.id, a)))
        .collect()
}

fn map_payoffs(g: &GameF64, f: &dyn Fn(&[f64]) -> Vec<f64>) -> GameF64 {
    fn go(spec: NodeSpec<f64>, f: &dyn Fn(&[f64]) -> Vec<f64>) -> NodeSpec<f64> {
        match spec {
            NodeSpec::Terminal { label, outcome, name, payoffs } => NodeSpec::Terminal { label, outcome, name, payoffs: f(&payoffs) },
            NodeSpec::Chance { label, number, name, branches } => {
                NodeSpec::Chance { label, number, name, branches: branches.into_iter().map(|(a, p, s)| (a, p, go(s, f))).collect() }
            }
            NodeSpec::Decision { label, player, number, name, branches } => {
                NodeSpec::Decision { label, player, number, name, branches: branches.into_iter().map(|(a, s)| (a, go(s, f))).collect() }
            }
        }
    }
    GameTree::new(&g.title, g.players().to_vec(), go(g.to_spec(), f)).unwrap()
}

/// Copies action `a` of the info set named `target` (whose `a` children are
/// all leaves) as an extra last action.
fn duplicate_leaf_action(g: &GameF64, target: &str, a: usize) -> GameF64 {
    fn go(spec: NodeSpec<f64>, target: &str, a: usize) -> NodeSpec<f64> {
        match spec {
            NodeSpec::Decision { label, player, number, name, branches } => {
                let mut branches: Vec<(String, NodeSpec<f64>)> = branches.into_iter().map(|(x, s)| (x, go(s, target, a))).collect();
                if name == target {
                    let (x, s) = branches[a].clone();
                    branches.push((format!("{}'", x), s));
                }
                NodeSpec::Decision { label, player, number, name, branches }
            }
            NodeSpec::Chance { label, number, name, branches } => {
                NodeSpec::Chance { label, number, name, branches: branches.into_iter().map(|(x, p, s)| (x, p, go(s, target, a))).collect() }
            }
            leaf => leaf,
        }
    }
    GameTree::new(&g.title, g.players().to_vec(), go(g.to_spec(), target, a)).unwrap()
}

#[test]
fn identical_actions_tie_everywhere() {
    let leaf = |u: f64| NodeSpec::leaf(vec![u, -u]);
    let g: GameF64 = GameTree::new(
        "g",
        vec!["A".into(), "B".into()],
        NodeSpec::decision(0, 1, "I", vec![("a", leaf(2.0)), ("b", leaf(2.0))]),
    )
    .unwrap();
    let v = check_action(&g, 0, 0, 0, &weak()).unwrap();
    assert_eq!(v.result, Verdict::NotDominated);
    assert_eq!((v.u1, v.u2, v.u3, v.u4), (2.0, 2.0, Some(2.0), Some(2.0)));
    assert_eq!(oracle_check(&g, 0, 0, 0, &weak()).unwrap().result, Verdict::NotDominated);
}

#[test]
fn figure_examples() {
    let fig1 = fixture("fig1");
    assert!(strong_scan(&fig1, 0).is_empty(), "player 1's action 2 is not leaf-wise dominated");

    let fig3 = fixture("fig3");
    let p2 = fig3.find_infoset(1, "P2").unwrap().id;
    let v = check_action(&fig3, 1, p2, 1, &no_strong()).unwrap();
    assert_eq!(v.result, Verdict::StrictlyDominated);
    assert_eq!((v.u1, v.u2), (1.0, 2.0));
    let w = v.witness.unwrap();
    assert!(w.iter().any(|(l, x)| l == "P2:2" && *x == 0.0), "{:?}", w);
}

#[test]
fn aof_5bb_aces_never_fold() {
    let g = aof(5);
    let aa = g.find_infoset(0, "AA").unwrap().id;
    let v = check_action(&g, 0, aa, 1, &no_strong()).unwrap();
    assert_eq!(v.result, Verdict::StrictlyDominated);
    assert!(v.u2 > v.u1);
    // with equity-valued leaves the leaf scan already catches it
    assert_eq!(check_action(&g, 0, aa, 1, &CheckConfig::default()).unwrap().result, Verdict::StronglyStrict);
    let shove = check_action(&g, 0, aa, 0, &CheckConfig::default()).unwrap();
    assert_eq!(shove.result, Verdict::NotDominated);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shifting_own_payoffs_keeps_verdicts(seed in any::<u64>(), shift in -50i32..50) {
        let g = random_game(seed, 4);
        let s = shift as f64;
        for p in 0..2 {
            let h = map_payoffs(&g, &|u: &[f64]| { let mut v = u.to_vec(); v[p] += s; v });
            for (q, i, a) in checkable(&g).into_iter().filter(|t| t.0 == p) {
                let x = check_action(&g, q, i, a, &weak()).unwrap();
                let y = check_action(&h, q, i, a, &weak()).unwrap();
                prop_assert_eq!(x.result, y.result);
                let eps = 1e-6 * (1.0 + x.u1.abs().max(x.u2.abs()) + s.abs());
                prop_assert!((x.u1 + s - y.u1).abs() <= eps && (x.u2 + s - y.u2).abs() <= eps);
            }
        }
    }

    #[test]
    fn strong_scan_is_sound(seed in any::<u64>()) {
        let g = random_game(seed, 4);
        for info in g.infosets() {
            for (a, _, strict) in strong_scan(&g, info.id) {
                let v = check_action(&g, info.player, info.id, a, &weak()).unwrap();
                if strict {
                    prop_assert_eq!(v.result, Verdict::StrictlyDominated);
                } else {
                    prop_assert!(v.result.is_dominated());
                }
            }
        }
    }

    #[test]
    fn witnesses_avoid_the_action(seed in any::<u64>()) {
        let g = random_game(seed, 4);
        for (p, i, a) in checkable(&g) {
            let v = check_action(&g, p, i, a, &no_strong()).unwrap();
            if let Some(w) = &v.witness {
                let info = g.infoset(i);
                let target = format!("{}:{}", info.name, info.actions[a]);
                prop_assert!(w.iter().all(|(_, x)| *x >= -1e-8));
                prop_assert!(w.iter().filter(|(l, _)| *l == target).all(|(_, x)| x.abs() <= 1e-8));
                // flow at I: the avoiding actions carry all of I's weight
                let at_i: f64 = w.iter().filter(|(l, _)| l.starts_with(&format!("{}:", info.name))).map(|(_, x)| x).sum();
                prop_assert!((at_i - 1.0).abs() <= 1e-8, "{:?}", w);
            }
        }
    }

    #[test]
    fn ties_never_invert(seed in any::<u64>()) {
        let g = random_game(seed, 5);
        for (p, i, a) in checkable(&g) {
            let v = check_action(&g, p, i, a, &weak()).unwrap();
            prop_assert!(v.anomaly.is_none(), "{:?}", v);
            if let (Some(u3), Some(u4)) = (v.u3, v.u4) {
                let eps = CheckConfig::default().eps(&v.u1, &v.u2);
                prop_assert!(u3 >= u4 - eps);
            }
        }
    }

    #[test]
    fn oracle_ignores_duplicated_actions(seed in any::<u64>()) {
        let g = random_game(seed, 4);
        let candidate = g.infosets().iter().find_map(|info| {
            (0..info.actions.len()).find(|&a| {
                info.members.iter().all(|&m| matches!(g.node(g.node(m).children[a]).kind, NodeKind::Terminal { .. }))
            }).map(|a| (info.name.clone(), a))
        });
        prop_assume!(candidate.is_some());
        let (name, dup) = candidate.unwrap();
        let h = duplicate_leaf_action(&g, &name, dup);
        for (p, i, a) in checkable(&g) {
            let info = g.infoset(i);
            if info.name == name && a == dup {
                continue;
            }
            let j = h.find_infoset(p, &info.name).unwrap().id;
            let before = oracle_check(&g, p, i, a, &weak()).unwrap();
            let after = oracle_check(&h, p, j, a, &weak()).unwrap();
            prop_assert_eq!(before.result, after.result, "{} {}", info.name, a);
        }
    }
}
