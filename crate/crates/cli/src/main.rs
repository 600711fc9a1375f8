use clap::{Args, Parser, Subcommand, ValueEnum};
use gapforge::genlab::{frustrate, gen_label_cover, GenSpec};
use gapforge::instances::{
    LabelCoverInstance, Labeling, LhpSystem, NcpInstance, SisInstance, SsatInstance,
};
use gapforge::io::{self, Document};
use gapforge::numeric::{format_rational, int, parse_rational, Rational};
use gapforge::oracles::{
    default_lhp_grid, solve_lc_max, solve_lhp_min, solve_ncp_min, solve_sis_min,
    solve_ssat_min_norm, Mode, SearchBudget, DEFAULT_MAX_STATES, MAX_STATES_ENV,
};
use gapforge::pipeline::{check_chain, ChainParams, Status};
use gapforge::reductions::{lc_to_ssat, sis_to_lhp, sis_to_ncp, ssat_to_sis};
use gapforge::soundness::{
    agreeing_fraction, agreement_soundness_exact, check_list_soundness_bound, list_construction,
    list_construction_linf, verify_defeats_list_soundness, ListConstructionParams,
};
use gapforge::superassign::{
    check_claim1, classify_test, is_consistent, norm_l1, zero_all_bad_arrays, SuperAssignment,
};
use gapforge::{Error, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gapforge",
    version,
    about = "Label Cover → SSAT → SIS → {NCP, LHP} reductions and exact oracles"
)]
struct Cli {
    /// Print plain text instead of JSON (matrices in solver-friendly form).
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Apply one reduction stage.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Run an exact oracle.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Check properties of instances and super-assignments.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Gap table for the full chain on a Label Cover instance.
    Report(ChainArgs),
}

#[derive(Subcommand)]
enum GenCmd {
    /// Label Cover instance (planted or random), optionally frustrated.
    Lc(GenArgs),
}

#[derive(Args)]
struct GenArgs {
    /// JSON file with the generator spec; overrides the shape flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    num_a: usize,
    #[arg(long, default_value_t = 1)]
    num_b: usize,
    #[arg(long, default_value_t = 2)]
    d_b: usize,
    #[arg(long, default_value_t = 2)]
    sigma_a: usize,
    #[arg(long, default_value_t = 2)]
    sigma_b: usize,
    #[arg(long, default_value_t = 1)]
    arity: usize,
    #[arg(long)]
    planted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Twist this many edge tables after generation.
    #[arg(long, default_value_t = 0)]
    flips: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in", alias = "input")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long, default_value_t = 1)]
    g: u64,
}

#[derive(Subcommand)]
enum ReduceCmd {
    Lc2ssat(InOut),
    Ssat2sis(InOut),
    Sis2ncp {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        gap: GapArgs,
        #[arg(long)]
        d_rep: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
    },
    Sis2lhp {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        gap: GapArgs,
        #[arg(long)]
        u: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    L1,
    Linf,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::L1 => Mode::L1,
            ModeArg::Linf => Mode::Linf,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in", alias = "input")]
    input: PathBuf,
    /// Coefficient box K.
    #[arg(long = "box", default_value_t = 1)]
    coeff_box: i64,
    #[arg(long, value_enum, default_value = "l1")]
    mode: ModeArg,
}

#[derive(Subcommand)]
enum SolveCmd {
    Lc(SolveArgs),
    Ssat(SolveArgs),
    Sis(SolveArgs),
    Ncp {
        #[command(flatten)]
        args: SolveArgs,
        /// Search all of F_q instead of the box.
        #[arg(long)]
        full_field: bool,
    },
    Lhp(SolveArgs),
}

#[derive(Args)]
struct WithAssignment {
    /// SSAT instance.
    #[arg(long = "in", alias = "input")]
    input: PathBuf,
    /// Super-assignment document.
    #[arg(long)]
    assignment: PathBuf,
}

#[derive(Args)]
struct ChainArgs {
    /// Label Cover instance.
    #[arg(long = "in", alias = "input")]
    input: PathBuf,
    /// Labeling document to embed instead of an optimal labeling.
    #[arg(long)]
    labeling: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    g: u64,
    #[arg(long, default_value = "1/4")]
    s_list: String,
    #[arg(long)]
    u: Option<u64>,
    #[arg(long)]
    d_rep: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long = "box", default_value_t = 1)]
    coeff_box: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the oracle searches.
    #[arg(long)]
    no_oracles: bool,
    /// Also write the pipeline manifest here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCmd {
    Consistency(WithAssignment),
    /// Array zeroing, bad-coordinate sums and test classification.
    Claims(WithAssignment),
    Agreement {
        /// Label Cover instance.
        #[arg(long = "in", alias = "input")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        labeling: Option<PathBuf>,
    },
    Lists {
        #[command(flatten)]
        target: WithAssignment,
        #[arg(long, default_value_t = 1)]
        g: u64,
        #[arg(long, default_value = "1/4")]
        s_list: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "l1")]
        mode: ModeArg,
        /// Include every candidate label (inclusion probability 1).
        #[arg(long)]
        derandomize: bool,
        /// Label Cover instance the lists are checked against.
        #[arg(long)]
        lc: Option<PathBuf>,
    },
    Chain(ChainArgs),
}

/// What a command produced: a JSON value, optional text rendering, and
/// whether the checked property held.
struct Outcome {
    value: Value,
    text: Option<String>,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Self {
            value,
            text: None,
            ok: true,
        }
    }
}

fn max_states() -> u64 {
    std::env::var(MAX_STATES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

fn budget(args: &SolveArgs) -> SearchBudget {
    SearchBudget::new(args.coeff_box, args.mode.into()).with_env_cap()
}

fn rational_arg(raw: &str) -> Result<Rational> {
    parse_rational(raw).ok_or_else(|| Error::BadParameters(format!("not a rational: {raw:?}")))
}

fn read<T: Document>(path: &Path) -> Result<T> {
    io::read_instance(path)
}

/// SIS inputs may also be in the plain-text matrix format.
fn read_sis(path: &Path) -> Result<SisInstance> {
    let text = io::read_text(path)?;
    if text.trim_start().starts_with('{') {
        io::from_json_str(&text)
    } else {
        io::sis_from_text(&text)
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Writes `doc` to `--out` (or returns it for stdout) and summarizes it.
fn emit<T: Document>(doc: &T, out: Option<&Path>, text: Option<String>) -> Result<Outcome> {
    match out {
        Some(path) => {
            match &text {
                Some(t) => io::write_text(path, t)?,
                None => io::write_instance(path, doc)?,
            }
            Ok(Outcome::ok(json!({
                "kind": T::KIND,
                "out": path.display().to_string(),
                "hash": io::content_hash(doc),
            })))
        }
        None => Ok(Outcome {
            value: io::to_document(doc),
            text,
            ok: true,
        }),
    }
}

fn run_gen(args: &GenArgs) -> Result<Outcome> {
    let spec = match &args.spec {
        Some(p) => serde_json::from_str::<GenSpec>(&io::read_text(p)?).map_err(|e| {
            Error::SchemaViolation {
                pointer: String::new(),
                message: e.to_string(),
            }
        })?,
        None => GenSpec {
            num_a: args.num_a,
            num_b: args.num_b,
            d_b: args.d_b,
            sigma_a_size: args.sigma_a,
            sigma_b_size: args.sigma_b,
            arity_p: args.arity,
            planted: args.planted,
            seed: args.seed,
        },
    };
    let mut g = gen_label_cover(&spec)?;
    if args.flips > 0 {
        g.instance = frustrate(&g.instance, args.flips, spec.seed)?;
        g.planted = None;
    }
    if let Ok(r) = solve_lc_max(&g.instance, max_states()) {
        g.metadata.oracle_value = Some(r.optimum.to_string());
    }
    let meta = json!({
        "metadata": to_value(&g.metadata),
        "planted_labeling": to_value(&g.planted),
        "flips": args.flips,
    });
    match &args.out {
        Some(path) => {
            io::write_instance(path, &g.instance)?;
            let sidecar = path.with_extension("meta.json");
            io::write_text(&sidecar, &io::canonical_string(&meta))?;
            Ok(Outcome::ok(json!({
                "out": path.display().to_string(),
                "metadata_out": sidecar.display().to_string(),
                "hash": io::content_hash(&g.instance),
                "metadata": meta,
            })))
        }
        None => Ok(Outcome::ok(json!({
            "instance": io::to_document(&g.instance),
            "metadata": meta,
        }))),
    }
}

fn run_reduce(cmd: &ReduceCmd, text: bool) -> Result<Outcome> {
    match cmd {
        ReduceCmd::Lc2ssat(a) => {
            let lc: LabelCoverInstance = read(&a.input)?;
            emit(&lc_to_ssat(&lc)?, a.out.as_deref(), None)
        }
        ReduceCmd::Ssat2sis(a) => {
            let ssat: SsatInstance = read(&a.input)?;
            let sis = ssat_to_sis(&ssat);
            let t = text.then(|| io::sis_to_text(&sis));
            emit(&sis, a.out.as_deref(), t)
        }
        ReduceCmd::Sis2ncp {
            io: a,
            gap,
            d_rep,
            q,
        } => {
            let sis = read_sis(&a.input)?;
            let ncp = sis_to_ncp(&sis, gap.g, *d_rep, *q)?;
            let t = text.then(|| io::ncp_to_text(&ncp));
            emit::<NcpInstance>(&ncp, a.out.as_deref(), t)
        }
        ReduceCmd::Sis2lhp { io: a, gap, u } => {
            let sis = read_sis(&a.input)?;
            emit::<LhpSystem>(&sis_to_lhp(&sis, gap.g, *u)?, a.out.as_deref(), None)
        }
    }
}

fn run_solve(cmd: &SolveCmd) -> Result<Outcome> {
    let value = match cmd {
        SolveCmd::Lc(a) => to_value(&solve_lc_max(&read(&a.input)?, max_states())?),
        SolveCmd::Ssat(a) => to_value(&solve_ssat_min_norm(&read(&a.input)?, &budget(a))?),
        SolveCmd::Sis(a) => to_value(&solve_sis_min(&read_sis(&a.input)?, &budget(a))?),
        SolveCmd::Ncp { args, full_field } => {
            let ncp: NcpInstance = read(&args.input)?;
            to_value(&solve_ncp_min(&ncp, &budget(args), *full_field)?)
        }
        SolveCmd::Lhp(a) => {
            let lhp: LhpSystem = read(&a.input)?;
            let grid = default_lhp_grid(lhp.num_x(), max_states())?;
            to_value(&solve_lhp_min(&lhp, &grid)?)
        }
    };
    Ok(Outcome::ok(value))
}

fn chain_params(a: &ChainArgs) -> Result<ChainParams> {
    Ok(ChainParams {
        g: a.g,
        s_list: rational_arg(&a.s_list)?,
        u_param: a.u,
        d_rep: a.d_rep,
        q: a.q,
        k: a.coeff_box,
        max_states: max_states(),
        run_oracles: !a.no_oracles,
        seed: a.seed,
    })
}

fn run_chain(a: &ChainArgs, gap_only: bool) -> Result<Outcome> {
    let lc: LabelCoverInstance = read(&a.input)?;
    let labeling: Option<Labeling> = a.labeling.as_deref().map(read).transpose()?;
    let report = check_chain(&lc, labeling.as_ref(), &chain_params(a)?)?;
    if let Some(path) = &a.out {
        io::write_instance(path, &report.manifest)?;
    }
    let ok = report.completeness != Status::Fail;
    let value = if gap_only {
        to_value(&report.gap)
    } else {
        to_value(&report)
    };
    Ok(Outcome {
        value,
        text: None,
        ok,
    })
}

fn run_check(cmd: &CheckCmd) -> Result<Outcome> {
    match cmd {
        CheckCmd::Consistency(a) => {
            let ssat: SsatInstance = read(&a.input)?;
            let s: SuperAssignment = read(&a.assignment)?;
            s.check_shape(&ssat)?;
            let c = is_consistent(&ssat, &s);
            Ok(Outcome {
                ok: c.consistent,
                value: to_value(&c),
                text: None,
            })
        }
        CheckCmd::Claims(a) => {
            let ssat: SsatInstance = read(&a.input)?;
            let s: SuperAssignment = read(&a.assignment)?;
            let violations = check_claim1(&ssat, &s)?;
            let zeroed = zero_all_bad_arrays(&ssat, &s)?;
            let classes = (0..ssat.num_tests())
                .map(|psi| classify_test(&ssat, &s, psi).map(|c| to_value(&c)))
                .map(|r| {
                    r.unwrap_or_else(|e| json!({ "error": e.kind(), "message": e.to_string() }))
                })
                .collect::<Vec<_>>();
            let consistent_after = is_consistent(&ssat, &zeroed).consistent;
            let norm_ok = norm_l1(&zeroed) <= norm_l1(&s);
            let classified = classes.iter().all(|c| c.get("error").is_none());
            Ok(Outcome {
                ok: violations.is_empty() && consistent_after && norm_ok && classified,
                value: json!({
                    "claim1_violations": violations,
                    "zeroed": io::to_document(&zeroed),
                    "consistent_after_zeroing": consistent_after,
                    "norm_l1_before": format_rational(&norm_l1(&s)),
                    "norm_l1_after": format_rational(&norm_l1(&zeroed)),
                    "classification": classes,
                }),
                text: None,
            })
        }
        CheckCmd::Agreement { input, l, labeling } => {
            let lc: LabelCoverInstance = read(input)?;
            let cap = max_states();
            let s_agr = agreement_soundness_exact(&lc, cap)?;
            let bound = check_list_soundness_bound(&lc, *l, cap)?;
            let fraction = match labeling {
                Some(p) => {
                    let lab: Labeling = read(p)?;
                    if lab.phi_a.len() != lc.num_a()
                        || lab.phi_a.iter().any(|&x| x >= lc.sigma_a().len())
                    {
                        return Err(Error::PartialLabeling(
                            "φ_A does not label every A-vertex".into(),
                        ));
                    }
                    let lists: Vec<_> = lab
                        .phi_a
                        .iter()
                        .map(|&x| [x].into_iter().collect())
                        .collect();
                    Some(format_rational(&agreeing_fraction(&lc, &lists)))
                }
                None => None,
            };
            Ok(Outcome {
                ok: bound.holds,
                value: json!({
                    "l": l,
                    "s_agr": format_rational(&s_agr),
                    "s_list_exact": format_rational(&bound.lhs),
                    "bound_rhs": format_rational(&bound.rhs),
                    "bound_holds": bound.holds,
                    "fraction": fraction,
                }),
                text: None,
            })
        }
        CheckCmd::Lists {
            target,
            g,
            s_list,
            seed,
            mode,
            derandomize,
            lc,
        } => {
            let ssat: SsatInstance = read(&target.input)?;
            let s: SuperAssignment = read(&target.assignment)?;
            let s_list = rational_arg(s_list)?;
            let lists = match mode {
                ModeArg::L1 => {
                    let mut p = ListConstructionParams::new(
                        int(*g as i64),
                        s_list.clone(),
                        ssat.max_variable_degree(),
                        *seed,
                    )?;
                    if *derandomize {
                        p = p.derandomized();
                    }
                    list_construction(&ssat, &s, &p)?
                }
                ModeArg::Linf => list_construction_linf(&ssat, &s, *g, *seed)?,
            };
            let mut value = json!({ "lists": to_value(&lists) });
            let mut ok = true;
            if let Some(p) = lc {
                let lc: LabelCoverInstance = read(p)?;
                let d = verify_defeats_list_soundness(&lc, &lists.lists, &s_list);
                ok = d.defeats;
                value["defeat"] = to_value(&d);
            }
            Ok(Outcome {
                value,
                text: None,
                ok,
            })
        }
        CheckCmd::Chain(a) => run_chain(a, false),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gen(GenCmd::Lc(a)) => run_gen(a),
        Command::Reduce(c) => run_reduce(c, cli.text),
        Command::Solve(c) => run_solve(c),
        Command::Check(c) => run_check(c),
        Command::Report(a) => run_chain(a, true),
    }
}

/// Top-level `key: value` lines for `--text` on non-matrix outputs.
fn plain(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", serde_json::to_string(v).expect("json")))
            .collect(),
        other => format!("{}\n", serde_json::to_string(other).expect("json")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match (&out.text, cli.text) {
                (Some(t), true) => print!("{t}"),
                (None, true) => print!("{}", plain(&out.value)),
                _ => print!("{}", io::canonical_string(&out.value)),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let mut diag = json!({ "error": e.kind(), "message": e.to_string() });
            if let Error::SchemaViolation { pointer, .. } = &e {
                diag["pointer"] = json!(pointer);
            }
            print!("{}", io::canonical_string(&diag));
            ExitCode::from(1)
        }
    }
}
