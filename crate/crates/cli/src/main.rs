mod export;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use untangle::geom3::Point3;
use untangle::invariants::{
    linking_matrix, model_a_word, model_b_index, model_c_band_diagram, scene_diagram, tricolor_count, Diagram,
    Direction, InvariantError, DEFAULT_DIRECTION,
};
use untangle::moves::MoveScript;
use untangle::par::Exec;
use untangle::scenes::{
    build_model_a, build_model_b, build_model_c, is_legal, ModelAParams, ModelBParams, ModelCParams, Scene, SceneError,
};
use untangle::search::{fuzz, replay, search, Audit, AuditStatus, FuzzConfig, ReplayError, SearchConfig, SearchError, SearchOutcome};

/// Build, check and explore rope-and-hoop disentanglement puzzles.
///
/// Exit status: 0 on success, 1 when an invariant is violated, the input
/// scene is illegal or a replay fails, 2 on usage or parse errors.
#[derive(Parser)]
#[command(name = "untangle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a canonical puzzle and write its scene file.
    Scene(SceneArgs),
    /// Evaluate an obstruction invariant of a scene.
    Invariant(InvariantArgs),
    /// Apply seeded random legal moves and audit invariants after each.
    Fuzz(FuzzArgs),
    /// Bounded breadth-first search for a move script reaching the goal.
    Search(SearchArgs),
    /// Check a move script against a scene and report whether it reaches the goal.
    Replay(ReplayArgs),
    /// Draw a scene as SVG (projection with over/under gaps) or OBJ (meshes).
    Export(ExportArgs),
    /// Exploratory experiments; not checks of any claim.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    #[value(name = "modelA")]
    ModelA,
    #[value(name = "modelB")]
    ModelB,
    #[value(name = "modelC")]
    ModelC,
}

#[derive(clap::Args)]
struct SceneArgs {
    model: Model,
    /// Model A hoop radius.
    #[arg(long, default_value_t = 1.5)]
    r: f64,
    /// Model B left end-circle radius.
    #[arg(long, default_value_t = 1.0)]
    r_left: f64,
    /// Model B right end-circle radius.
    #[arg(long, default_value_t = 1.0)]
    r_right: f64,
    /// Hoop radius (Models B and C).
    #[arg(long, default_value_t = 1.0)]
    r_hoop: f64,
    /// Model B extra distance of each end circle beyond the hoop.
    #[arg(long, default_value_t = 1.0)]
    slack: f64,
    /// Model C tube radius of the hoops.
    #[arg(long, default_value_t = 0.05)]
    tube: f64,
    /// Model C rope length (the obstruction needs it ≤ the hoop radius).
    #[arg(long, default_value_t = 1.0)]
    rope_length: f64,
    /// Output file; the scene JSON goes to standard output otherwise.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvariantKind {
    Word,
    Index,
    Linking,
    Tricolor,
}

#[derive(Clone, Copy, ValueEnum)]
enum BandSum {
    Canonical,
}

/// Choice of projection direction.
#[derive(clap::Args)]
struct ViewArgs {
    /// Projection direction as `x,y,z` (towards the viewer); a fixed
    /// generic direction by default.
    #[arg(long, value_parser = parse_point)]
    direction: Option<Point3>,
    /// Seed for random directions tried when the first is not generic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail instead of retrying with random directions.
    #[arg(long)]
    no_auto_retry: bool,
}

#[derive(clap::Args)]
struct InvariantArgs {
    kind: InvariantKind,
    scene: PathBuf,
    /// Join the Model C ropes by the canonical band before projecting.
    #[arg(long)]
    band_sum: Option<BandSum>,
    #[command(flatten)]
    view: ViewArgs,
}

#[derive(clap::Args)]
struct ExecArgs {
    /// Run without data parallelism (results are identical).
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }
}

#[derive(clap::Args)]
struct FuzzArgs {
    scene: PathBuf,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Invariants to audit: word, index, linking, legality, budget.
    #[arg(long = "audit", value_delimiter = ',', required = true)]
    audits: Vec<Audit>,
    /// Report file; the report JSON goes to standard output otherwise.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(clap::Args)]
struct SearchArgs {
    scene: PathBuf,
    #[arg(long, default_value_t = 12)]
    max_depth: usize,
    #[arg(long, default_value_t = 2000)]
    max_states: usize,
    /// Grid size used to identify visited states.
    #[arg(long, default_value_t = 0.05)]
    resolution: f64,
    /// Script file for a found solution; standard output otherwise.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Report each finished depth on standard error.
    #[arg(long)]
    progress: bool,
    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(clap::Args)]
struct ReplayArgs {
    scene: PathBuf,
    script: PathBuf,
    /// Write the final scene here.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Svg,
    Obj,
}

#[derive(clap::Args)]
struct ExportArgs {
    scene: PathBuf,
    #[arg(long)]
    format: Format,
    /// Output file; standard output otherwise.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    view: ViewArgs,
}

#[derive(Subcommand)]
enum Experiment {
    /// Bounded search on Model C for a range of rope lengths.
    ///
    /// Writes CSV with columns `length,outcome,states`: outcome is `found`,
    /// `exhausted` or `infeasible` (no legal scene at that length), and
    /// states counts the distinct states the search kept.
    #[command(name = "modelC-length-scan")]
    ModelCLengthScan(ScanArgs),
}

#[derive(clap::Args)]
struct ScanArgs {
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    step: f64,
    #[arg(long, default_value_t = 1.0)]
    r_hoop: f64,
    #[arg(long, default_value_t = 0.05)]
    tube: f64,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    #[arg(long, default_value_t = 100)]
    max_states: usize,
    /// CSV file; standard output otherwise.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<Point3, String> {
    let xs: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match xs[..] {
        [x, y, z] => Ok(Point3::new(x, y, z)),
        _ => Err("expected three comma-separated numbers".into()),
    }
}

/// A failed command and its exit status.
enum Failure {
    /// Invariant violation, illegal input scene, failed replay: status 1.
    Rejected(String),
    /// Usage or parse error: status 2.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn rejected(e: impl std::fmt::Display) -> Failure {
    Failure::Rejected(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    Scene::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_legal_scene(path: &Path) -> Result<Scene, Failure> {
    let s = load_scene(path)?;
    let report = is_legal(&s);
    if !report.legal {
        return Err(rejected(format!("{}: illegal scene: {report}", path.display())));
    }
    Ok(s)
}

fn cmd_scene(a: SceneArgs) -> CmdResult {
    let built = match a.model {
        Model::ModelA => build_model_a(ModelAParams { r: a.r }),
        Model::ModelB => build_model_b(ModelBParams {
            r_left: a.r_left,
            r_right: a.r_right,
            r_hoop: a.r_hoop,
            rope_slack: a.slack,
        }),
        Model::ModelC => build_model_c(ModelCParams { r_hoop: a.r_hoop, tube: a.tube, rope_length: a.rope_length }),
    };
    let s = built.map_err(usage)?;
    let tags = if s.regime_tags.is_empty() { "none".to_string() } else { s.regime_tags.join(", ") };
    write_or_print(a.output.as_deref(), &s.to_json())?;
    if a.output.is_some() {
        println!("regime: {tags}");
    } else {
        eprintln!("regime: {tags}");
    }
    Ok(())
}

/// Projects with the requested direction, falling back to seeded random
/// directions when it is not generic (unless disabled).
fn project(
    view: &ViewArgs,
    default: Point3,
    f: impl Fn(Direction) -> Result<Diagram, InvariantError>,
) -> Result<Diagram, Failure> {
    match f(Direction::Fixed(view.direction.unwrap_or(default))) {
        Err(InvariantError::GenericityFailure(m)) if !view.no_auto_retry => {
            eprintln!("direction not generic ({m}); trying random directions from seed {}", view.seed);
            f(Direction::Auto { seed: view.seed }).map_err(rejected)
        }
        r => r.map_err(rejected),
    }
}

fn cmd_invariant(a: InvariantArgs) -> CmdResult {
    let s = load_legal_scene(&a.scene)?;
    let diagram = |s: &Scene| {
        project(&a.view, DEFAULT_DIRECTION, |dir| match a.band_sum {
            Some(BandSum::Canonical) => model_c_band_diagram(s, dir),
            None => scene_diagram(s, dir),
        })
    };
    if a.band_sum.is_some() && matches!(a.kind, InvariantKind::Word | InvariantKind::Index) {
        return Err(usage("--band-sum applies to linking and tricolor only"));
    }
    match a.kind {
        InvariantKind::Word => println!("word: {}", model_a_word(&s).map_err(rejected)?),
        InvariantKind::Index => println!("index: {}", model_b_index(&s).map_err(rejected)?),
        InvariantKind::Linking => {
            for (x, y, lk) in linking_matrix(&diagram(&s)?).map_err(rejected)? {
                println!("linking {x} {y}: {lk}");
            }
        }
        InvariantKind::Tricolor => {
            let count = tricolor_count(&diagram(&s)?).map_err(rejected)?;
            println!("count: {count}, tricolorable: {}", count > 3);
        }
    }
    Ok(())
}

fn cmd_fuzz(a: FuzzArgs) -> CmdResult {
    let s = load_legal_scene(&a.scene)?;
    let cfg = FuzzConfig { exec: a.exec.exec(), ..FuzzConfig::default() };
    let report = fuzz(&s, a.seed, a.steps, &a.audits, &cfg).map_err(|e| match e {
        SearchError::IllegalStart(_) => rejected(e),
        SearchError::Config(_) => usage(e),
    })?;
    write_or_print(a.output.as_deref(), &report.to_json())?;
    eprintln!(
        "applied {}/{} steps: {} conserved, {} skipped, {} violated",
        report.steps_applied,
        report.steps_attempted,
        report.count(AuditStatus::Conserved),
        report.count(AuditStatus::Skipped),
        report.count(AuditStatus::Violated)
    );
    if report.violated() {
        return Err(rejected("an audited invariant was violated"));
    }
    Ok(())
}

fn search_error(e: SearchError) -> Failure {
    match e {
        SearchError::IllegalStart(_) => rejected(e),
        SearchError::Config(_) => usage(e),
    }
}

fn cmd_search(a: SearchArgs) -> CmdResult {
    let s = load_legal_scene(&a.scene)?;
    let cfg = SearchConfig {
        max_depth: a.max_depth,
        max_states: a.max_states,
        state_key_resolution: a.resolution,
        exec: a.exec.exec(),
        progress: a.progress,
        ..SearchConfig::default()
    };
    match search(&s, &cfg).map_err(search_error)? {
        SearchOutcome::Found(script) => {
            write_or_print(a.output.as_deref(), &script.to_json())?;
            eprintln!("found: {} moves", script.moves.len());
        }
        SearchOutcome::Exhausted { states, depth } => {
            eprintln!("exhausted: {states} states, depth {depth}");
        }
    }
    Ok(())
}

fn cmd_replay(a: ReplayArgs) -> CmdResult {
    let s = load_scene(&a.scene)?;
    let script = MoveScript::from_json(&read(&a.script)?).map_err(|e| usage(format!("{}: {e}", a.script.display())))?;
    let out = replay(&s, &script).map_err(|e| match e {
        ReplayError::HashMismatch { .. } => rejected(format!("hash mismatch: {e}")),
        _ => rejected(e),
    })?;
    if let Some(p) = &a.output {
        write_or_print(Some(p), &out.scene.to_json())?;
    }
    println!("goal: {}", if out.goal_reached { "reached" } else { "not reached" });
    Ok(())
}

fn cmd_export(a: ExportArgs) -> CmdResult {
    let s = load_scene(&a.scene)?;
    let text = match a.format {
        Format::Obj => export::obj(&s),
        Format::Svg => {
            // Validate genericity through the same fallback as invariants,
            // then draw along the direction that worked.
            let d = project(&a.view, export::VIEW, |dir| export::scene_projection(&s, dir))?;
            let u = d.source.as_ref().expect("projected diagram keeps its source").direction;
            export::svg(&s, Direction::Fixed(u)).map_err(rejected)?
        }
    };
    write_or_print(a.output.as_deref(), &text)
}

fn cmd_length_scan(a: ScanArgs) -> CmdResult {
    if !(a.step > 0.0 && a.from.is_finite() && a.to.is_finite()) {
        return Err(usage("--step must be positive and the range finite"));
    }
    let cfg = SearchConfig { max_depth: a.max_depth, max_states: a.max_states, ..SearchConfig::default() };
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| usage(e);
    w.write_record(["length", "outcome", "states"]).map_err(csv_err)?;
    let count = ((a.to - a.from) / a.step + 1e-9).floor() as i64 + 1;
    for k in 0..count.max(0) {
        let length = ((a.from + k as f64 * a.step) * 1e9).round() / 1e9;
        let (outcome, states) = match build_model_c(ModelCParams { r_hoop: a.r_hoop, tube: a.tube, rope_length: length }) {
            Err(SceneError::Infeasible(_) | SceneError::ParameterOutOfRange(_)) => ("infeasible", 0),
            Err(e) => return Err(rejected(e)),
            Ok(s) => match search(&s, &cfg).map_err(search_error)? {
                SearchOutcome::Found(_) => ("found", 0),
                SearchOutcome::Exhausted { states, .. } => ("exhausted", states),
            },
        };
        eprintln!("length {length}: {outcome}");
        w.write_record([length.to_string(), outcome.to_string(), states.to_string()]).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    write_or_print(a.output.as_deref(), &String::from_utf8(bytes).expect("CSV is UTF-8"))
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Scene(a) => cmd_scene(a),
        Command::Invariant(a) => cmd_invariant(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Search(a) => cmd_search(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Export(a) => cmd_export(a),
        Command::Experiment(Experiment::ModelCLengthScan(a)) => cmd_length_scan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
