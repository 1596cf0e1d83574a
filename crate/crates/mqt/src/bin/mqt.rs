//! Command-line front end: build, check, resolve and classify possibility
//! tables, inspect states and channels, and replay the standard demos.
//!
//! Exit codes: 0 = decided affirmative / success, 1 = decided negative
//! (not no-signalling, infeasible, game lost, ...), 2 = error or malformed
//! input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqt::channels::{
    apply_type_l, dilate, extend_to_joint, kraus_from_extension, maps_agree, verify_type_e,
    TypeLMap,
};
use mqt::field::FieldSpec;
use mqt::hvgames::{
    joint_assignment_survivors, noncontextual_search, play_game, ContextFamily, GameStrategy,
};
use mqt::json::{
    ket_from_json, ket_to_json, kraus_from_json, measurement_from_json, possibility_from_json,
    possibility_to_json, probability_to_json, KetJson, KrausJson, MeasurementJson, StrategyJson,
    TableJson,
};
use mqt::lp::format_ratio;
use mqt::render::{render_possibility, render_probability};
use mqt::resolve::{
    classify, resolution_unique, strong_resolution, weak_resolution, MqtSearchBounds, MqtVerdict,
    WeakResolution,
};
use mqt::states::{
    conditional_state, purify, reduce, schmidt, Measurement, StateSpace, Subspace, Variance,
    Vector, DEFAULT_ENUM_BUDGET,
};
use mqt::tables::{
    build_table, check_modal_ns, prbox_table, singlet_table, table_n, PossibilityTable,
};

#[derive(Parser)]
#[command(name = "mqt", about = "Exact modal quantum theory toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a standard fixture with its analysis.
    Demo {
        #[arg(value_enum)]
        which: DemoName,
    },
    /// Possibility-table operations (JSON in, JSON out).
    Table {
        #[command(subcommand)]
        command: TableCommand,
    },
    /// State calculus on JSON-encoded kets.
    State {
        #[command(subcommand)]
        command: StateCommand,
    },
    /// Channel representation round trips.
    Channel {
        #[command(subcommand)]
        command: ChannelCommand,
    },
    /// Hidden-variable searches.
    Hv {
        #[command(subcommand)]
        command: HvCommand,
    },
    /// The cooperative table game.
    Game {
        #[command(subcommand)]
        command: GameCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Singlet,
    Prbox,
    TableN,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Build the table of a state with given measurement menus.
    Build(BuildArgs),
    /// Check modal no-signalling; exit 0 iff it holds.
    CheckNs { table: String },
    /// Find a probabilistic resolution; exit 1 with a certificate if none.
    Resolve(ResolveArgs),
    /// Place the table in the LHV/SPR/WPR/NSP hierarchy.
    Classify {
        table: String,
        /// Candidate budget per (p, dim) configuration of the realizability search.
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    field: u64,
    /// JSON ket (inline or @file) on a two-factor composite.
    #[arg(long)]
    state: String,
    /// JSON list of labeled measurements for system 1.
    #[arg(long)]
    meas1: String,
    /// JSON list of labeled measurements for system 2.
    #[arg(long)]
    meas2: String,
}

#[derive(Args)]
struct ResolveArgs {
    table: String,
    /// Any resolution that is zero on blanks.
    #[arg(long, conflicts_with = "strong")]
    weak: bool,
    /// A resolution positive on every mark.
    #[arg(long)]
    strong: bool,
}

#[derive(Subcommand)]
enum StateCommand {
    /// Schmidt decomposition of a bipartite ket.
    Schmidt {
        #[arg(long)]
        state: String,
    },
    /// Reduction (partial trace analogue) of a bipartite ket.
    Reduce {
        #[arg(long)]
        state: String,
        /// Which factor to trace out (0 or 1).
        #[arg(long, default_value_t = 0)]
        factor: usize,
    },
    /// Conditional state given an effect on one factor.
    Conditional {
        #[arg(long)]
        state: String,
        /// JSON bra for the conditioning effect.
        #[arg(long)]
        effect: String,
        #[arg(long, default_value_t = 0)]
        factor: usize,
    },
    /// Purify a mixed state given by basis rows.
    Purify {
        #[arg(long)]
        field: u64,
        /// JSON array of basis rows spanning the mixed state.
        #[arg(long)]
        basis: String,
    },
}

#[derive(Subcommand)]
enum ChannelCommand {
    /// Dilate, extend, extract, and compare with the original channel.
    Roundtrip {
        #[arg(long)]
        field: u64,
        #[arg(long)]
        dim: usize,
        /// JSON Kraus family; omit to use seeded random channels.
        #[arg(long)]
        kraus: Option<String>,
        /// Number of random channels when --kraus is omitted.
        #[arg(long, default_value_t = 10)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also verify the conditioning diagram exhaustively.
        #[arg(long)]
        diagram: bool,
    },
}

#[derive(Subcommand)]
enum HvCommand {
    /// Kochen-Specker-style search on the mobit context family; exit 0 iff
    /// no noncontextual assignment exists.
    Ks {
        #[arg(long, default_value_t = 2)]
        field: u64,
    },
    /// Joint-assignment elimination; exit 0 iff every assignment is ruled out.
    Survivors { table: String },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Play every question pair; exit 0 iff the strategy always wins.
    Play {
        #[arg(long)]
        table: String,
        /// JSON strategy: {"classical": ...} or {"shared_state": ...}.
        #[arg(long)]
        strategy: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Fetch JSON text: `@path` reads a file, anything else is inline.
fn json_text(arg: &str) -> Result<(String, String), String> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("{path}: {e}"))?;
        Ok((text, path.to_string()))
    } else {
        Ok((arg.to_string(), "<inline>".to_string()))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, String> {
    let (text, source) = json_text(arg)?;
    serde_json::from_str(&text).map_err(|e| format!("{source}: invalid {what} JSON: {e}"))
}

fn load_table(arg: &str) -> Result<PossibilityTable, String> {
    let json: TableJson = parse_json(arg, "table")?;
    possibility_from_json(&json).map_err(|e| e.to_string())
}

fn field_spec(p: u64) -> Result<FieldSpec, String> {
    FieldSpec::new(p).map_err(|e| e.to_string())
}

fn load_menu(
    arg: &str,
    dim: usize,
    field: FieldSpec,
) -> Result<Vec<(String, Measurement)>, String> {
    let json: Vec<MeasurementJson> = parse_json(arg, "measurement list")?;
    json.iter()
        .map(|m| measurement_from_json(m, dim, field).map_err(|e| e.to_string()))
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Demo { which } => demo(which),
        Command::Table { command } => table_command(command),
        Command::State { command } => state_command(command),
        Command::Channel { command } => channel_command(command),
        Command::Hv { command } => hv_command(command),
        Command::Game { command } => game_command(command),
    }
}

fn demo(which: DemoName) -> Result<ExitCode, String> {
    let (name, t) = match which {
        DemoName::Singlet => ("singlet table", singlet_table()),
        DemoName::Prbox => ("PR box", prbox_table()),
        DemoName::TableN => ("no-resolution table", table_n()),
    };
    println!("{name}:");
    println!("{}", render_possibility(&t));
    println!("modal no-signalling: {}", if check_modal_ns(&t) { "yes" } else { "no" });
    match weak_resolution(&t) {
        WeakResolution::Table(pt) => {
            let strong = strong_resolution(&t).is_some();
            let unique = resolution_unique(&t).map_err(|e| e.to_string())?;
            println!(
                "resolution ({}{}):",
                if strong { "strong" } else { "weak only" },
                if unique { ", unique" } else { "" }
            );
            println!("{}", render_probability(&pt));
        }
        WeakResolution::Infeasible { certificate } => {
            println!("no probabilistic resolution; contradictory constraints:");
            for (label, weight) in certificate {
                println!("  {:>6} x {label}", format_ratio(&weight));
            }
        }
    }
    let c = classify(&t, &MqtSearchBounds::default());
    let flag = |b: bool| if b { "yes" } else { "no" };
    println!(
        "classification: ns={} wpr={} spr={} lhv={} mqt={}",
        flag(c.ns),
        flag(c.wpr),
        flag(c.spr),
        flag(c.lhv),
        match &c.mqt {
            MqtVerdict::Yes { p, dim, .. } => format!("yes (p={p}, dim={dim})"),
            MqtVerdict::No { reason } => format!("no ({reason})"),
            MqtVerdict::Unknown { reason } => format!("unknown ({reason})"),
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn table_command(command: TableCommand) -> Result<ExitCode, String> {
    match command {
        TableCommand::Build(args) => {
            let field = field_spec(args.field)?;
            let ket_json: KetJson = parse_json(&args.state, "ket")?;
            let psi = ket_from_json(&ket_json, Variance::Primal).map_err(|e| e.to_string())?;
            let Some([d1, d2]) = psi.space().factor_dims() else {
                return Err("state must carry two factor dimensions".into());
            };
            let (d1, d2) = (*d1, *d2);
            let meas1 = load_menu(&args.meas1, d1, field)?;
            let meas2 = load_menu(&args.meas2, d2, field)?;
            let state = Subspace::line(&psi).map_err(|e| e.to_string())?;
            let t = build_table(&state, &meas1, &meas2).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&possibility_to_json(&t)).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
        TableCommand::CheckNs { table } => {
            let t = load_table(&table)?;
            if check_modal_ns(&t) {
                println!("no-signalling: yes");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("no-signalling: no");
                Ok(ExitCode::from(1))
            }
        }
        TableCommand::Resolve(args) => {
            let t = load_table(&args.table)?;
            if args.strong {
                match strong_resolution(&t) {
                    Some(pt) => {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&probability_to_json(&pt))
                                .expect("serializable")
                        );
                        Ok(ExitCode::SUCCESS)
                    }
                    None => {
                        eprintln!("no strong resolution (max-min mark probability is 0 or infeasible)");
                        Ok(ExitCode::from(1))
                    }
                }
            } else {
                match weak_resolution(&t) {
                    WeakResolution::Table(pt) => {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&probability_to_json(&pt))
                                .expect("serializable")
                        );
                        Ok(ExitCode::SUCCESS)
                    }
                    WeakResolution::Infeasible { certificate } => {
                        eprintln!("infeasible; contradictory constraint combination:");
                        for (label, weight) in certificate {
                            eprintln!("  {:>6} x {label}", format_ratio(&weight));
                        }
                        Ok(ExitCode::from(1))
                    }
                }
            }
        }
        TableCommand::Classify { table, budget } => {
            let t = load_table(&table)?;
            let bounds = MqtSearchBounds { max_candidates: budget, ..Default::default() };
            let c = classify(&t, &bounds);
            let mqt_json = match &c.mqt {
                MqtVerdict::Yes { p, dim, state, .. } => serde_json::json!({
                    "verdict": "yes", "p": p, "dim": dim, "witness_state": state,
                }),
                MqtVerdict::No { reason } => serde_json::json!({
                    "verdict": "no", "reason": reason,
                }),
                MqtVerdict::Unknown { reason } => serde_json::json!({
                    "verdict": "unknown", "reason": reason,
                }),
            };
            let payload = serde_json::json!({
                "ns": c.ns, "wpr": c.wpr, "spr": c.spr, "lhv": c.lhv, "mqt": mqt_json,
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_bipartite_ket(arg: &str) -> Result<Vector, String> {
    let json: KetJson = parse_json(arg, "ket")?;
    let psi = ket_from_json(&json, Variance::Primal).map_err(|e| e.to_string())?;
    if psi.space().factor_dims().map_or(true, |f| f.len() != 2) {
        return Err("state must carry two factor dimensions".into());
    }
    Ok(psi)
}

fn state_command(command: StateCommand) -> Result<ExitCode, String> {
    match command {
        StateCommand::Schmidt { state } => {
            let psi = load_bipartite_ket(&state)?;
            let d = schmidt(&psi).map_err(|e| e.to_string())?;
            let payload = serde_json::json!({
                "schmidt_number": d.schmidt_number,
                "left_basis": d.left_basis.rows_raw(),
                "right_basis": d.right_basis.rows_raw(),
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        StateCommand::Reduce { state, factor } => {
            let psi = load_bipartite_ket(&state)?;
            if factor > 1 {
                return Err("factor must be 0 or 1".into());
            }
            let line = Subspace::line(&psi).map_err(|e| e.to_string())?;
            let reduced = reduce(&line, factor).map_err(|e| e.to_string())?;
            let payload = serde_json::json!({
                "dim": reduced.dim(),
                "basis": reduced.basis().rows_raw(),
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        StateCommand::Conditional { state, effect, factor } => {
            let psi = load_bipartite_ket(&state)?;
            if factor > 1 {
                return Err("factor must be 0 or 1".into());
            }
            let effect_json: KetJson = parse_json(&effect, "bra")?;
            let bra = ket_from_json(&effect_json, Variance::Dual).map_err(|e| e.to_string())?;
            let line = Subspace::line(&psi).map_err(|e| e.to_string())?;
            let eff = Subspace::line(&bra).map_err(|e| e.to_string())?;
            let cond = conditional_state(&line, &eff, factor).map_err(|e| e.to_string())?;
            let payload = serde_json::json!({
                "possible": !cond.is_null(),
                "dim": cond.dim(),
                "basis": cond.basis().rows_raw(),
            });
            println!("{}", serde_json::to_string_pretty(&payload).expect("serializable"));
            Ok(if cond.is_null() { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        StateCommand::Purify { field, basis } => {
            let field = field_spec(field)?;
            let rows: Vec<Vec<u64>> = parse_json(&basis, "basis")?;
            let dim = rows.first().map(|r| r.len()).ok_or("basis must be nonempty")?;
            let space = StateSpace::new(dim, field);
            let m = mqt::linalg::Matrix::from_rows(&rows, dim, field)
                .map_err(|e| e.to_string())?;
            let sub = Subspace::from_basis(m, &space, Variance::Primal)
                .map_err(|e| e.to_string())?;
            let psi = purify(&sub).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&ket_to_json(&psi)).expect("serializable")
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn roundtrip_once(map: &TypeLMap, diagram: bool) -> Result<bool, String> {
    let dim = map.input_dim();
    let joint = extend_to_joint(&dilate(map).map_err(|e| e.to_string())?, dim)
        .map_err(|e| e.to_string())?;
    let extracted = kraus_from_extension(|m| joint.apply(m), dim, map.field())
        .map_err(|e| e.to_string())?;
    let space = StateSpace::new(dim, map.field());
    let agree = maps_agree(
        |l| apply_type_l(&extracted, l),
        |l| apply_type_l(map, l),
        &space,
        DEFAULT_ENUM_BUDGET,
    )
    .map_err(|e| e.to_string())?;
    if diagram {
        let commutes =
            verify_type_e(map, dim, DEFAULT_ENUM_BUDGET).map_err(|e| e.to_string())?;
        return Ok(agree && commutes);
    }
    Ok(agree)
}

fn channel_command(command: ChannelCommand) -> Result<ExitCode, String> {
    let ChannelCommand::Roundtrip { field, dim, kraus, random, seed, diagram } = command;
    let field = field_spec(field)?;
    match kraus {
        Some(arg) => {
            let json: KrausJson = parse_json(&arg, "kraus")?;
            if json.field != field.modulus() {
                return Err("kraus field does not match --field".into());
            }
            let matrices = kraus_from_json(&json).map_err(|e| e.to_string())?;
            if matrices.iter().any(|m| m.row_count() != dim || m.col_count() != dim) {
                return Err(format!("kraus matrices must be {dim}x{dim}"));
            }
            let map = TypeLMap::new(matrices).map_err(|e| e.to_string())?;
            if !map.is_unconditional() {
                return Err("channel is conditional (common kernel nonzero); no dilation".into());
            }
            let ok = roundtrip_once(&map, diagram)?;
            println!("round trip {}", if ok { "agrees" } else { "DISAGREES" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..random {
                let k = 1 + (i % 3);
                let map = mqt::sample::random_unconditional_map(&mut rng, dim, k, field);
                if !roundtrip_once(&map, diagram)? {
                    println!("round trip DISAGREES at sample {i}");
                    return Ok(ExitCode::from(1));
                }
            }
            println!("round trip agrees on {random} seeded random channels");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn hv_command(command: HvCommand) -> Result<ExitCode, String> {
    match command {
        HvCommand::Ks { field } => {
            let field = field_spec(field)?;
            let family = ContextFamily::mobit_pairs(field);
            let total = 1u64 << family.effects().len();
            match noncontextual_search(&family, 1 << 20).map_err(|e| e.to_string())? {
                None => {
                    println!(
                        "no noncontextual assignment: all {total} assignments over {} effects rejected",
                        family.effects().len()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Some(assignment) => {
                    println!("noncontextual assignment exists: {assignment:?}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        HvCommand::Survivors { table } => {
            let t = load_table(&table)?;
            let survivors =
                joint_assignment_survivors(&t, 1 << 20).map_err(|e| e.to_string())?;
            println!("surviving joint assignments: {}", survivors.len());
            for s in &survivors {
                println!("  f1={:?} f2={:?}", s.f1, s.f2);
            }
            Ok(if survivors.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn game_command(command: GameCommand) -> Result<ExitCode, String> {
    let GameCommand::Play { table, strategy } = command;
    let t = load_table(&table)?;
    let json: StrategyJson = parse_json(&strategy, "strategy")?;
    let strategy = match json {
        StrategyJson::Classical { f1, f2 } => GameStrategy::Classical(
            mqt::tables::DeterministicLocalStrategy { f1, f2 },
        ),
        StrategyJson::SharedState { state, meas1, meas2 } => {
            let psi = ket_from_json(&state, Variance::Primal).map_err(|e| e.to_string())?;
            let Some([d1, d2]) = psi.space().factor_dims() else {
                return Err("shared state must carry two factor dimensions".into());
            };
            let (d1, d2) = (*d1, *d2);
            let field = psi.space().field();
            let meas1 = meas1
                .iter()
                .map(|m| measurement_from_json(m, d1, field).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let meas2 = meas2
                .iter()
                .map(|m| measurement_from_json(m, d2, field).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            GameStrategy::SharedState {
                state: Subspace::line(&psi).map_err(|e| e.to_string())?,
                meas1,
                meas2,
            }
        }
    };
    let outcome = play_game(&t, &strategy).map_err(|e| e.to_string())?;
    if outcome.wins_all {
        println!("wins every question pair");
        Ok(ExitCode::SUCCESS)
    } else {
        let (i, j) = outcome.losing_pair.expect("losing pair accompanies a loss");
        println!("loses on question pair ({i}, {j})");
        Ok(ExitCode::from(1))
    }
}
