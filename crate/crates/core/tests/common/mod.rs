#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;
use std::sync::OnceLock;

use efgdom::poker::{gen_aof_game, AofConfig, EquityTable};
use efgdom::game::NodeSpec;
use efgdom::oracle::random_action_observable;
use efgdom::{parse_efg, GameF64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{}.efg", name));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path.display(), e))
}

pub fn fixture(name: &str) -> GameF64 {
    parse_efg(&fixture_text(name)).unwrap()
}

pub fn fixture_names() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "efg"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

pub fn equity_path() -> PathBuf {
    std::env::var_os("EFG_EQUITY_TABLE")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/aof_equity.csv"))
}

pub fn table() -> &'static EquityTable {
    static TABLE: OnceLock<EquityTable> = OnceLock::new();
    TABLE.get_or_init(|| EquityTable::load_or_build(&equity_path(), None).expect("equity table"))
}

pub fn aof(stack_bb: u64) -> GameF64 {
    gen_aof_game(&AofConfig::with_stack_bb(stack_bb).unwrap(), table()).unwrap()
}

/// One line per criterion, written past the test harness's output capture.
pub fn report(criterion: usize, ok: bool, detail: &str) {
    let line = format!("acceptance {:>2}: {} — {}\n", criterion, if ok { "PASS" } else { "FAIL" }, detail);
    let _ = std::io::stderr().write_all(line.as_bytes());
}

pub fn random_game(seed: u64, depth: usize) -> GameF64 {
    random_action_observable(&mut ChaCha8Rng::seed_from_u64(seed), depth).unwrap()
}

/// Same tree with player 2's payoffs replaced by the negation of player 1's.
pub fn zero_sum(game: &GameF64) -> GameF64 {
    fn go(spec: NodeSpec<f64>) -> NodeSpec<f64> {
        match spec {
            NodeSpec::Terminal { label, outcome, name, payoffs } => {
                NodeSpec::Terminal { label, outcome, name, payoffs: vec![payoffs[0], -payoffs[0]] }
            }
            NodeSpec::Chance { label, number, name, branches } => {
                NodeSpec::Chance { label, number, name, branches: branches.into_iter().map(|(a, p, s)| (a, p, go(s))).collect() }
            }
            NodeSpec::Decision { label, player, number, name, branches } => {
                NodeSpec::Decision { label, player, number, name, branches: branches.into_iter().map(|(a, s)| (a, go(s))).collect() }
            }
        }
    }
    efgdom::GameTree::new(&game.title, game.players().to_vec(), go(game.to_spec())).unwrap()
}

/// Random fully mixed behavioral profile.
pub fn random_profile(game: &GameF64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    game.infosets()
        .iter()
        .map(|i| {
            let w: Vec<f64> = (0..i.actions.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect()
        })
        .collect()
}
