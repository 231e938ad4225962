mod common;

use std::collections::HashMap;

use efgdom::game::NodeKind;
use efgdom::poker::aof::{CALL, FOLD, SHOVE};
use efgdom::poker::equity::{equity_exact, equity_monte_carlo, BOARDS, DEALS};
use efgdom::poker::eval::{evaluate7, FLUSH, FULL_HOUSE, HIGH_CARD, STRAIGHT, STRAIGHT_FLUSH, TWO_PAIR};
use efgdom::poker::{gen_aof_game, gen_aof_game_with, grid_report, AofConfig, CanonicalHand, Card, Cell, Combo, Showdown};
use efgdom::reducer::{Removal, Round, Termination};
use efgdom::{GameExact, GameF64, Rational, ReductionLog, Scalar};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::table;

fn combo(s: &str) -> Combo {
    s.parse().unwrap()
}

fn hand(s: &str) -> CanonicalHand {
    s.parse().unwrap()
}

fn cards(s: &str) -> [Card; 7] {
    let v: Vec<Card> = s.split_whitespace().map(|c| c.parse().unwrap()).collect();
    v.try_into().unwrap()
}

#[test]
fn canonical_hands() {
    let all = CanonicalHand::all();
    assert_eq!(all.len(), 169);
    assert_eq!(all.iter().filter(|h| h.is_pair()).count(), 13);
    assert_eq!(all.iter().filter(|h| h.suited).count(), 78);
    assert_eq!(all.iter().filter(|h| !h.suited && !h.is_pair()).count(), 78);
    assert_eq!(all.iter().map(|h| h.multiplicity()).sum::<u32>(), 1326);
    for (i, h) in all.iter().enumerate() {
        assert_eq!(h.index(), i);
        assert_eq!(h.to_string().parse::<CanonicalHand>().unwrap(), *h);
        let (r, c) = h.grid_cell();
        assert_eq!(CanonicalHand::from_grid_cell(r, c), *h);
        assert!(h.combos().iter().all(|&c| CanonicalHand::of(c) == *h));
    }
    assert_eq!(hand("AKs").grid_cell(), (0, 1));
    assert_eq!(hand("AKo").grid_cell(), (1, 0));
    for bad in ["AA s", "AAs", "KKo", "A", "X2o", "AK"] {
        assert!(bad.parse::<CanonicalHand>().is_err(), "{}", bad);
    }
}

#[test]
fn evaluator_categories() {
    let cases = [
        ("Ah Kh Qh Jh Th 2c 3d", STRAIGHT_FLUSH),
        ("Ah 2h 3h 4h 5h Kc Kd", STRAIGHT_FLUSH),
        ("Ac Ad Ah Kc Kd 2s 3s", FULL_HOUSE),
        ("Ac 9c 7c 4c 2c Kd Qd", FLUSH),
        ("Ac 2d 3h 4s 5c 9d Jd", STRAIGHT),
        ("Ac Ad Kc Kd Qc Qd 2s", TWO_PAIR),
        ("Ac Kd 9h 7s 5c 3d 2h", HIGH_CARD),
    ];
    for (text, category) in cases {
        assert_eq!(evaluate7(&cards(text)).unwrap().category(), category, "{}", text);
    }
    // the wheel loses to a six-high straight
    assert!(evaluate7(&cards("Ac 2d 3h 4s 5c Kd Kh")).unwrap() < evaluate7(&cards("6c 2d 3h 4s 5c Kd Qh")).unwrap());
    // two pair: the kicker plays
    assert!(evaluate7(&cards("Ac Ad Kc Kd Qc 2d 3s")).unwrap() > evaluate7(&cards("Ac Ad Kc Kd Jc 2d 3s")).unwrap());
    assert!(evaluate7(&cards("Ac Ac Kc Kd Qc 2d 3s")).is_err());
}

#[test]
fn exact_equities() {
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(equity_exact(combo("AcAd"), combo("AhAs")).unwrap(), half);
    let aa_kk = equity_exact(combo("AcAd"), combo("KcKd")).unwrap();
    let kk_aa = equity_exact(combo("KcKd"), combo("AcAd")).unwrap();
    assert_eq!(&aa_kk + &kk_aa, Rational::one());
    assert_eq!((aa_kk.clone() * Rational::from_integer((2 * BOARDS as i64).into())).denom(), &1.into());

    let n = 1_000_000u64;
    let mc = equity_monte_carlo(combo("AcAd"), combo("KcKd"), n, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let p = aa_kk.to_f64_lossy();
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((mc - p).abs() < 3.0 * se, "{} vs {} (se {})", mc, p, se);
    assert!(equity_exact(combo("AcAd"), combo("AcKd")).is_err());
}

#[test]
fn table_weights_match_direct_enumeration() {
    let t = table();
    assert!(t.is_exact());
    assert_eq!(t.total_weight(), DEALS);
    let combos = Combo::all();
    assert_eq!(combos.len(), 1326);
    let mut weight: HashMap<(usize, usize), u64> = HashMap::new();
    let mut sample = 0u64;
    for &h in &combos {
        for &v in &combos {
            if h.overlaps(v) {
                continue;
            }
            *weight.entry((CanonicalHand::of(h).index(), CanonicalHand::of(v).index())).or_default() += 1;
            sample += 1;
            // a thinned sweep keeps lookup cost down while hitting every kind of pair
            if sample % 97 == 0 {
                assert_eq!(t.equity(h, v).unwrap() + t.equity(v, h).unwrap(), Rational::one());
            }
        }
    }
    assert_eq!(sample, DEALS);
    let pairs = t.hand_pairs();
    assert_eq!(pairs.len(), 169 * 169);
    for p in &pairs {
        assert_eq!(p.weight, weight.get(&(p.hero.index(), p.villain.index())).copied().unwrap_or(0), "{} {}", p.hero, p.villain);
        if p.hero == p.villain && p.weight > 0 {
            assert_eq!(p.equity, Rational::new(1.into(), 2.into()), "{}", p.hero);
        }
    }
    let aa = pairs.iter().find(|p| p.hero == hand("AA") && p.villain == hand("AA")).unwrap();
    assert_eq!(aa.weight, 6);
    let aks = pairs.iter().find(|p| p.hero == hand("AKs") && p.villain == hand("AKs")).unwrap();
    assert_eq!(aks.weight, 4 * 3);
}

#[test]
fn generated_game_structure() {
    let g: GameF64 = gen_aof_game(&AofConfig::with_stack_bb(8).unwrap(), table()).unwrap();
    assert!(g.validate().is_ok());
    assert!(g.is_zero_sum());
    assert_eq!(g.player_infosets(0).count(), 169);
    assert_eq!(g.player_infosets(1).count(), 169);
    for info in g.infosets() {
        let expected = if info.player == 0 { [SHOVE, FOLD] } else { [CALL, FOLD] };
        assert_eq!(info.actions, expected);
    }
    let mut folds = 0;
    for n in g.nodes() {
        if let NodeKind::Terminal { name, payoffs, .. } = &n.kind {
            match name.as_str() {
                "fold" => {
                    folds += 1;
                    assert_eq!(payoffs, &vec![-100.0, 100.0]);
                }
                "steal" => assert_eq!(payoffs, &vec![200.0, -200.0]),
                _ => assert!(payoffs[0].abs() <= 1600.0),
            }
        }
    }
    // every pair of canonical hands can be dealt
    assert_eq!(folds, 169 * 169);
    assert!(AofConfig::new(200, 100, 1000).is_err());
    assert!(AofConfig::with_stack_bb(0).is_err());
}

#[test]
fn exact_game_probabilities_sum_to_one() {
    let g: GameExact = gen_aof_game(&AofConfig::with_stack_bb(4).unwrap(), table()).unwrap();
    assert!(g.validate().is_ok());
    match &g.node(g.root()).kind {
        NodeKind::Chance { probs, .. } => {
            let total = probs.iter().fold(Rational::zero(), |a, b| a + b);
            assert_eq!(total, Rational::one());
        }
        other => panic!("{:?}", other),
    }
}

/// Called-shove payoffs are affine in the stack with slope 2·equity − 1.
#[test]
fn showdown_is_affine_in_the_stack() {
    let games: Vec<GameExact> = [3u64, 4, 5]
        .iter()
        .map(|&bb| gen_aof_game(&AofConfig::with_stack_bb(bb).unwrap(), table()).unwrap())
        .collect();
    let pairs: HashMap<String, Rational> =
        table().hand_pairs().into_iter().map(|p| (format!("{} calls {}", p.villain, p.hero), p.equity)).collect();
    let calls = |g: &GameExact| -> Vec<(String, Rational)> {
        g.nodes()
            .iter()
            .filter_map(|n| match &n.kind {
                NodeKind::Terminal { name, payoffs, .. } if name.contains(" calls ") => Some((name.clone(), payoffs[0].clone())),
                _ => None,
            })
            .collect()
    };
    let (a, b, c) = (calls(&games[0]), calls(&games[1]), calls(&games[2]));
    assert_eq!(a.len(), b.len());
    let step = Rational::from_integer(200.into());
    for ((x, y), z) in a.iter().zip(&b).zip(&c) {
        assert_eq!(x.0, y.0);
        let slope = pairs[&x.0].clone() * Rational::from_integer(2.into()) - Rational::one();
        assert_eq!(&y.1 - &x.1, &slope * &step, "{}", x.0);
        assert_eq!(&z.1 - &y.1, &slope * &step, "{}", x.0);
    }
}

#[test]
fn outcome_showdowns_keep_expected_payoffs() {
    let cfg = AofConfig::with_stack_bb(5).unwrap();
    let eq: GameExact = gen_aof_game(&cfg, table()).unwrap();
    let out: GameExact = gen_aof_game_with(&cfg, table(), Showdown::Outcomes).unwrap();
    assert!(out.validate().is_ok() && out.is_zero_sum());
    assert_eq!(eq.infosets().len(), out.infosets().len());
    for (a, b) in eq.infosets().iter().zip(out.infosets()) {
        assert_eq!((&a.name, &a.actions), (&b.name, &b.actions));
    }
    let stack = Rational::from_integer(1000.into());
    for n in out.nodes() {
        if let NodeKind::Terminal { name, payoffs, .. } = &n.kind {
            if name == "win" || name == "lose" {
                assert_eq!(payoffs[0].abs(), stack);
            }
        }
    }
    // a profile that always shoves and calls reaches every showdown
    let always = |g: &GameExact| -> Vec<Vec<Rational>> { g.infosets().iter().map(|_| vec![Rational::one(), Rational::zero()]).collect() };
    assert_eq!(eq.expected_utility(&always(&eq)).unwrap(), out.expected_utility(&always(&out)).unwrap());
}

fn removal(player: usize, infoset: &str, action: &str) -> Removal {
    Removal { player, infoset: infoset.into(), action: action.into(), mode: "strict".into(), u1: 0.0, u2: 1.0, u3: None, u4: None }
}

#[test]
fn grid_from_a_log() {
    let log = ReductionLog {
        rounds: vec![
            Round { round: 1, removals: vec![removal(0, "AA", FOLD), removal(1, "72o", CALL)] },
            Round { round: 2, removals: vec![removal(0, "AKs", SHOVE)] },
        ],
        terminated: Termination::FixedPoint,
        anomalies: vec![],
        ties: 0,
    };
    let [p1, p2] = grid_report(&log).unwrap();
    assert_eq!(p1.get(hand("AA")), Cell::Shove(1));
    assert_eq!(p1.get(hand("AKs")), Cell::Fold(2));
    assert_eq!(p1.get(hand("AKo")), Cell::Undecided);
    assert_eq!(p2.get(hand("72o")), Cell::Fold(1));
    assert_eq!((p1.undecided(), p2.undecided()), (167, 168));
    let text = p1.to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 14);
    assert!(lines[1].trim_start().starts_with("A") && lines[1].contains("S(1)") && lines[1].contains("F(2)"));
    assert_eq!(p2.to_json()["player"], 2);
    assert_eq!(p2.to_json()["cells"][12][7], "F(1)");

    let mut bad = log.clone();
    bad.rounds[0].removals.push(removal(0, "AA", "raise"));
    assert!(grid_report(&bad).is_err());
    let mut bad = log;
    bad.rounds[0].removals.push(removal(2, "AA", FOLD));
    assert!(grid_report(&bad).is_err());
}
