use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use efgdom::dominance::{check_action, resolve, CheckConfig, CheckMode, OpponentReach};
use efgdom::efg::{from_json, parse_efg, to_json, write_efg};
use efgdom::poker::{gen_aof_game_with, grid_report, AofConfig, EquityTable, Showdown};
use efgdom::reducer::{reduce_iteratively, Order, ReduceConfig, ReductionLog, Schedule};
use efgdom::seqform::{solve_zero_sum, SequenceForm, SparseMatrix};
use efgdom::GameF64;
use serde_json::json;

const EQUITY_ENV: &str = "EFG_EQUITY_TABLE";

#[derive(Parser)]
#[command(name = "efgdom", version, about = "Find and remove dominated actions in extensive-form games")]
struct Cli {
    /// Worker threads for per-action checks (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a game for structural problems.
    Validate {
        game: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the sequence-form matrices of a two-player game.
    SequenceForm {
        game: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Test one action for dominance.
    Check(CheckArgs),
    /// Iteratively remove dominated actions.
    Reduce(ReduceArgs),
    /// Generate a game.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Summarize a reduction log.
    #[command(subcommand)]
    Report(ReportCommand),
    /// Value and equilibrium of a two-player zero-sum game.
    Solve {
        game: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reach {
    Conditional,
    Forced,
}

impl From<Reach> for OpponentReach {
    fn from(r: Reach) -> Self {
        match r {
            Reach::Conditional => OpponentReach::Conditional,
            Reach::Forced => OpponentReach::Forced,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    game: PathBuf,
    /// Player number, starting at 1.
    #[arg(long)]
    player: usize,
    /// Info-set name.
    #[arg(long)]
    infoset: String,
    /// Action label.
    #[arg(long)]
    action: String,
    /// Also test weak dominance on a tie.
    #[arg(long)]
    weak: bool,
    /// Relative tolerance scale for the u2 vs u1 comparison.
    #[arg(long, default_value_t = 1e-7)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Reach::Conditional)]
    reach: Reach,
    /// Skip the leaf-wise strong-dominance shortcut.
    #[arg(long)]
    no_strong: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Depth,
    Declaration,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    PlayerByPlayer,
    Simultaneous,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    log: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    mode: Mode,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, value_enum, default_value_t = OrderArg::Depth)]
    order: OrderArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::PlayerByPlayer)]
    schedule: ScheduleArg,
    #[arg(long, value_enum, default_value_t = Reach::Conditional)]
    reach: Reach,
    #[arg(long, default_value_t = 1e-7)]
    eps: f64,
    #[arg(long)]
    no_strong: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Two-player all-in-or-fold hold'em.
    PokerAof {
        #[arg(long)]
        stack_bb: u64,
        #[arg(long, default_value_t = 100)]
        sb: u64,
        #[arg(long, default_value_t = 200)]
        bb: u64,
        /// Equity table CSV (falls back to $EFG_EQUITY_TABLE, then the shipped table).
        #[arg(long)]
        equity: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Use Monte-Carlo equities with this many boards per matchup instead.
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Called shoves end in one equity-valued leaf, or in a win/lose chance node.
        #[arg(long, value_enum, default_value = "equity")]
        showdown: ShowdownArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShowdownArg {
    Equity,
    Outcomes,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// 13x13 shove/fold grids from an all-in-or-fold reduction log.
    Grid {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool set once");
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

/// `.json` paths use the JSON mirror, everything else `.efg` text.
fn load(path: &Path) -> Result<GameF64, Failure> {
    let text = read(path)?;
    let game = if is_json(path) { from_json(&text) } else { parse_efg(&text) };
    game.map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn save(path: &Path, game: &GameF64) -> Result<(), Failure> {
    let text = if is_json(path) { to_json(game) + "\n" } else { write_efg(game) };
    write(path, &text)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn run(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Validate { game, json } => validate(&game, json),
        Command::SequenceForm { game, json } => sequence_form(&load(&game)?, json),
        Command::Check(args) => check(args),
        Command::Reduce(args) => reduce(args),
        Command::Gen(GenCommand::PokerAof { stack_bb, sb, bb, equity, out, mc_samples, seed, showdown }) => {
            let config = AofConfig::new(sb, bb, stack_bb * bb).map_err(|e| Failure::Usage(e.to_string()))?;
            let table = equity_table(equity, mc_samples, seed)?;
            let showdown = match showdown {
                ShowdownArg::Equity => Showdown::Equity,
                ShowdownArg::Outcomes => Showdown::Outcomes,
            };
            let game: GameF64 = gen_aof_game_with(&config, &table, showdown).map_err(domain)?;
            save(&out, &game)?;
            Ok(format!("wrote {} ({} nodes, {} info sets)\n", out.display(), game.nodes().len(), game.infosets().len()))
        }
        Command::Report(ReportCommand::Grid { log, json }) => {
            let log: ReductionLog = serde_json::from_str(&read(&log)?).map_err(|e| Failure::Domain(format!("bad log: {e}")))?;
            let grids = grid_report(&log).map_err(domain)?;
            if json {
                Ok(pretty(&json!({ "player1": grids[0].to_json(), "player2": grids[1].to_json() })))
            } else {
                Ok(format!(
                    "Player 1 ({} undecided)\n{}\nPlayer 2 ({} undecided)\n{}",
                    grids[0].undecided(),
                    grids[0],
                    grids[1].undecided(),
                    grids[1]
                ))
            }
        }
        Command::Solve { game, json } => {
            let g = load(&game)?;
            let sol = solve_zero_sum(&g).map_err(domain)?;
            if json {
                Ok(pretty(&json!({ "value": sol.value, "x": sol.x, "y": sol.y })))
            } else {
                Ok(format!("value (player 1): {}\n", sol.value))
            }
        }
    }
}

fn validate(path: &Path, json: bool) -> Result<String, Failure> {
    let g = load(path)?;
    let mut problems: Vec<String> = g.validate().violations.iter().map(|v| v.to_string()).collect();
    for p in 0..g.num_players() {
        for v in g.check_perfect_recall(p).violations {
            problems.push(format!("player {} forgets at info set '{}' (node {})", p + 1, v.name, v.node));
        }
    }
    if json {
        return Ok(pretty(&json!({ "violations": problems })));
    }
    if problems.is_empty() {
        Ok(format!("ok: {} nodes, {} info sets, {} players\n", g.nodes().len(), g.infosets().len(), g.num_players()))
    } else {
        Ok(problems.iter().map(|p| format!("{p}\n")).collect())
    }
}

fn matrix_json(m: &SparseMatrix<f64>) -> serde_json::Value {
    let entries: Vec<_> = m.entries.iter().map(|(i, j, v)| json!([i, j, v])).collect();
    json!({ "rows": m.rows, "cols": m.cols, "entries": entries })
}

fn sequence_form(g: &GameF64, json: bool) -> Result<String, Failure> {
    let sf = SequenceForm::build(g).map_err(domain)?;
    let labels: Vec<Vec<String>> = sf.seqs.iter().map(|s| (0..s.len()).map(|k| s.label(g, k)).collect()).collect();
    if json {
        return Ok(pretty(&json!({
            "sequences": labels,
            "E": matrix_json(&sf.e),
            "e": sf.e_rhs,
            "F": matrix_json(&sf.f),
            "f": sf.f_rhs,
            "A": matrix_json(&sf.a),
            "B": matrix_json(&sf.b),
        })));
    }
    let mut out = String::new();
    for (p, l) in labels.iter().enumerate() {
        out += &format!("player {} sequences ({}): {}\n", p + 1, l.len(), l.join(", "));
    }
    out += &format!("E: {}x{}, F: {}x{}\n", sf.e.rows, sf.e.cols, sf.f.rows, sf.f.cols);
    out += &format!("A: {}x{} with {} nonzeros\n", sf.a.rows, sf.a.cols, sf.a.entries.len());
    for (i, j, v) in &sf.a.entries {
        out += &format!("  A[{}, {}] = {}\n", labels[0][*i], labels[1][*j], v);
    }
    Ok(out)
}

fn check(args: CheckArgs) -> Result<String, Failure> {
    let g = load(&args.game)?;
    if args.player == 0 || args.player > g.num_players() {
        return Err(Failure::Usage(format!("--player must be between 1 and {}", g.num_players())));
    }
    let player = args.player - 1;
    let (infoset, action) = resolve(&g, player, &args.infoset, &args.action).map_err(domain)?;
    let config = CheckConfig {
        eps_scale: args.eps,
        mode: if args.weak { CheckMode::StrictThenWeak } else { CheckMode::StrictOnly },
        strong_first: !args.no_strong,
        reach: args.reach.into(),
    };
    let verdict = check_action(&g, player, infoset, action, &config).map_err(domain)?;
    Ok(pretty(&serde_json::to_value(&verdict).expect("verdict serializes")))
}

fn reduce(args: ReduceArgs) -> Result<String, Failure> {
    if args.max_rounds == Some(0) {
        return Err(Failure::Usage("--max-rounds must be at least 1".into()));
    }
    let g = load(&args.input)?;
    let config = ReduceConfig {
        mode: match args.mode {
            Mode::Strict => CheckMode::StrictOnly,
            Mode::Weak => CheckMode::StrictThenWeak,
        },
        max_rounds: args.max_rounds,
        order: match args.order {
            OrderArg::Depth => Order::DepthDescending,
            OrderArg::Declaration => Order::Declaration,
        },
        strong_first: !args.no_strong,
        eps_scale: args.eps,
        reach: args.reach.into(),
        schedule: match args.schedule {
            ScheduleArg::PlayerByPlayer => Schedule::PlayerByPlayer,
            ScheduleArg::Simultaneous => Schedule::Simultaneous,
        },
    };
    let (reduced, log) = reduce_iteratively(&g, &config).map_err(domain)?;
    save(&args.out, &reduced)?;
    write(&args.log, &(log.to_json() + "\n"))?;
    for a in &log.anomalies {
        eprintln!("warning: {a}");
    }
    let mut out = String::new();
    for r in &log.rounds {
        let counts: Vec<String> = (0..g.num_players()).map(|p| r.count(p).to_string()).collect();
        out += &format!("round {}: removed {}\n", r.round, counts.join(" / "));
    }
    let terminated = serde_json::to_value(log.terminated).expect("termination serializes");
    out += &format!("terminated: {}\n", terminated.as_str().unwrap_or_default());
    Ok(out)
}

fn shipped_table() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/aof_equity.csv")
}

fn equity_table(flag: Option<PathBuf>, mc_samples: Option<u64>, seed: u64) -> Result<EquityTable, Failure> {
    if let Some(n) = mc_samples {
        if n == 0 {
            return Err(Failure::Usage("--mc-samples must be positive".into()));
        }
        eprintln!("note: Monte-Carlo equities can flip borderline dominance verdicts");
        return Ok(EquityTable::build_monte_carlo(n, seed));
    }
    let path = flag
        .or_else(|| std::env::var_os(EQUITY_ENV).map(PathBuf::from))
        .unwrap_or_else(shipped_table);
    let progress = |done: usize, total: usize| {
        if done % 1000 == 0 {
            eprintln!("equity classes {done}/{total}");
        }
    };
    EquityTable::load_or_build(&path, Some(&progress)).map_err(domain)
}
