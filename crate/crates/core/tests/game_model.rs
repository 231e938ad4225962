mod common;

use efgdom::game::NodeSpec;
use efgdom::{GameExact, GameF64, GameTree, Rational};
use proptest::prelude::*;

use common::{aof, fixture, random_game, random_profile, zero_sum};

fn players() -> Vec<String> {
    vec!["P1".into(), "P2".into()]
}

fn leaf(a: f64, b: f64) -> NodeSpec<f64> {
    NodeSpec::leaf(vec![a, b])
}

#[test]
fn validation_reports() {
    let g: GameF64 = GameTree::new("g", players(), leaf(0.0, 0.0)).unwrap();
    assert!(g.validate().is_ok());
    assert_eq!(g.expected_utility(&vec![]).unwrap(), vec![0.0, 0.0]);

    let g: GameF64 = GameTree::new("g", players(), NodeSpec::chance(vec![("a", 0.6, leaf(1.0, 0.0)), ("b", 0.5, leaf(0.0, 1.0))])).unwrap();
    let report = g.validate();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].node, 0);

    // two members of one info set with different action counts
    let g: GameF64 = GameTree::new(
        "g",
        players(),
        NodeSpec::chance(vec![
            ("x", 0.5, NodeSpec::decision(0, 1, "I", vec![("a", leaf(0.0, 0.0)), ("b", leaf(1.0, 0.0))])),
            ("y", 0.5, NodeSpec::decision(0, 1, "I", vec![("a", leaf(0.0, 0.0))])),
        ]),
    )
    .unwrap();
    let report = g.validate();
    assert!(report.violations.iter().any(|v| v.message.contains("action-count")), "{:?}", report);

    assert!(GameTree::new("g", players(), NodeSpec::decision(2, 1, "I", vec![("a", leaf(0.0, 0.0))])).is_err());
}

#[test]
fn perfect_recall() {
    let g: GameF64 = GameTree::new("g", players(), NodeSpec::decision(0, 1, "I", vec![("a", leaf(0.0, 0.0))])).unwrap();
    assert!(g.check_perfect_recall(0).is_ok() && g.check_perfect_recall(1).is_ok());

    // player 1 forgets their first move
    let second = |u: f64| NodeSpec::decision(0, 2, "J", vec![("c", leaf(u, 0.0)), ("d", leaf(0.0, u))]);
    let g: GameF64 = GameTree::new("g", players(), NodeSpec::decision(0, 1, "I", vec![("a", second(1.0)), ("b", second(2.0))])).unwrap();
    let report = g.check_perfect_recall(0);
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].name, "J");
    assert!(g.check_perfect_recall(1).is_ok());

    let poker = aof(8);
    assert!(poker.validate().is_ok());
    assert!(poker.check_perfect_recall(0).is_ok() && poker.check_perfect_recall(1).is_ok());
    for name in ["fig1", "fig2", "fig3", "weak_tie"] {
        let g = fixture(name);
        assert!(g.validate().is_ok(), "{}", name);
        assert!((0..2).all(|p| g.check_perfect_recall(p).is_ok()), "{}", name);
    }
}

#[test]
fn fig2_values() {
    let g = fixture("fig2");
    let p1 = g.find_infoset(0, "P1").unwrap().id;
    for (action, expected) in [(0, 0.0), (1, -50.0)] {
        let mut profile: Vec<Vec<f64>> = g.infosets().iter().map(|i| vec![1.0 / i.actions.len() as f64; i.actions.len()]).collect();
        profile[p1] = vec![0.0, 0.0];
        profile[p1][action] = 1.0;
        assert_eq!(g.expected_utility(&profile).unwrap()[0], expected);
    }
    let bad = vec![vec![0.5, 0.4]; g.infosets().len()];
    assert!(g.expected_utility(&bad).is_err());
}

#[test]
fn removing_actions() {
    let g = fixture("fig1");
    let before = g.total_actions();
    let p1 = g.find_infoset(0, "P1").unwrap().id;
    let r = g.remove_action(p1, 1).unwrap();
    assert_eq!(r.total_actions(), before - 1);
    assert!(r.validate().is_ok());
    assert!(r.remove_action(p1, 0).is_err(), "last action stays");
    assert!(g.remove_action(p1, 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Expected utility is linear in the mixture at any single info set.
    #[test]
    fn utility_is_multilinear(seed in any::<u64>(), t in 0.0f64..1.0) {
        let g = random_game(seed, 4);
        prop_assume!(!g.infosets().is_empty());
        let base = random_profile(&g, seed ^ 3);
        let other = random_profile(&g, seed ^ 5);
        let i = (seed as usize) % g.infosets().len();
        let mut a = base.clone();
        a[i] = other[i].clone();
        let mut mix = base.clone();
        mix[i] = base[i].iter().zip(&other[i]).map(|(x, y)| (1.0 - t) * x + t * y).collect();
        let (u0, u1, um) = (g.expected_utility(&base).unwrap(), g.expected_utility(&a).unwrap(), g.expected_utility(&mix).unwrap());
        for p in 0..2 {
            prop_assert!(((1.0 - t) * u0[p] + t * u1[p] - um[p]).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_sum_utilities_cancel(seed in any::<u64>()) {
        let g = zero_sum(&random_game(seed, 4));
        prop_assert!(g.is_zero_sum());
        let u = g.expected_utility(&random_profile(&g, seed)).unwrap();
        prop_assert!((u[0] + u[1]).abs() < 1e-9);
    }

    #[test]
    fn exact_utilities_match_floats(seed in any::<u64>()) {
        let g = random_game(seed, 3);
        let exact: GameExact = efgdom::parse_efg(&efgdom::write_efg(&g)).unwrap();
        let uniform_f: Vec<Vec<f64>> = g.infosets().iter().map(|i| vec![1.0 / i.actions.len() as f64; i.actions.len()]).collect();
        let uniform_q: Vec<Vec<Rational>> = exact
            .infosets()
            .iter()
            .map(|i| vec![Rational::new(1.into(), (i.actions.len() as i64).into()); i.actions.len()])
            .collect();
        let (uf, uq) = (g.expected_utility(&uniform_f).unwrap(), exact.expected_utility(&uniform_q).unwrap());
        for (a, b) in uf.iter().zip(&uq) {
            let b = efgdom::Scalar::to_f64_lossy(b);
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }
}
