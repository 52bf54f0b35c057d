//! `bratteli` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check ran and failed, 2 when the input
//! could not be checked at all.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bratteli::catalog;
use bratteli::diagram::{BratteliDiagram, Simplicity};
use bratteli::invariants::{reduction_pipeline, PipelineParams, Verdict};
use bratteli::io::DiagramDocument;
use bratteli::matrix::IncidenceMatrix;
use bratteli::ordering::{skau_order, OrderedBratteliDiagram, OrderingError};
use bratteli::real::{CertifiedReal, DEFAULT_PRECISION_CAP};
use bratteli::rotation::algebra::{density_set, ReturnAlgebraSpec};
use bratteli::rotation::interval::CircleIntervalSet;
use bratteli::rotation::qtree::BinaryPath;
use bratteli::rotation::returns::{return_set_from, window_density};
use bratteli::vershik::{vershik_orbit, FinitePath, Step};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bratteli",
    version,
    about = "Bratteli-Vershik systems and rotation return-times algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write here (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a diagram.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[command(flatten)]
        output: Output,
    },
    /// Telescope a diagram along cut levels; ordered inputs get the lexicographic order.
    Telescope {
        input: PathBuf,
        /// Comma-separated levels starting at 0 and ending at the depth.
        #[arg(long, value_delimiter = ',', required = true)]
        cuts: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Telescope to positive matrices and order each fiber by source, then edge index.
    Order {
        input: PathBuf,
        /// Levels searched for a simplicity witness; defaults to the depth.
        #[arg(long)]
        horizon: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Check simplicity or proper order within a horizon.
    Check {
        input: PathBuf,
        #[arg(long, conflicts_with = "proper")]
        simple: bool,
        #[arg(long)]
        proper: bool,
        #[arg(long)]
        horizon: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Iterate the Vershik successor from a path.
    Orbit {
        input: PathBuf,
        /// Dotted edge indices, e.g. `0.1.0`.
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Follow the fiber maximum with the fiber minimum.
        #[arg(long)]
        wrap: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Return times of a rotation to a finite union of intervals.
    Retset {
        #[command(flatten)]
        rot: Rotation,
        /// `a,b` or `a,b;c,d` for `[a,b)∪[c,d)`.
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value = "0")]
        base: String,
        #[command(flatten)]
        output: Output,
    },
    /// Density set of the finite algebra generated by shifts of `[0, alpha)`.
    Density {
        #[command(flatten)]
        rot: Rotation,
        #[arg(long, required = true, num_args = 1..)]
        alpha: Vec<String>,
        #[arg(long, default_value_t = 1)]
        shift_range: u32,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the density sets built from two sets of tree branches.
    Reduce {
        #[arg(long = "S", required = true, num_args = 1..)]
        s: Vec<BinaryPath>,
        #[arg(long = "Sprime", required = true, num_args = 1..)]
        s_prime: Vec<BinaryPath>,
        /// Branch whose real is the rotation number; defaults to all ones, one
        /// longer than the longest input.
        #[arg(long)]
        gamma_path: Option<BinaryPath>,
        #[arg(long, default_value_t = 1)]
        shift_range: u32,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, default_value_t = 300)]
        precision: u32,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-render a diagram file as json, text or dot.
    Export {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Clone)]
struct Rotation {
    /// `sqrt2m1`, `golden`, `quad:a,b,c` or a rational.
    #[arg(long, default_value = "sqrt2m1")]
    gamma: String,
    #[arg(long, default_value_t = 16)]
    window: u64,
    #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
    precision: u32,
}

#[derive(Subcommand)]
enum GenKind {
    /// Odometer with the given radices.
    Odometer {
        #[arg(required = true)]
        radices: Vec<usize>,
    },
    /// `depth` copies of an incidence matrix such as `[[2,3],[1,3]]`.
    Stationary {
        matrix: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Seeded random diagram, simple within its depth.
    RandomSimple {
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Distinguished,
    Indistinguishable,
}

enum Failure {
    /// The check ran and failed; the report is still written.
    Check(String, Rendered),
    Error(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.to_string())
    }
}

struct Rendered {
    json: String,
    text: String,
    dot: Option<String>,
}

impl Rendered {
    fn plain(json: Value, text: String) -> Self {
        let mut s = serde_json::to_string_pretty(&json).expect("plain data");
        s.push('\n');
        Rendered {
            json: s,
            text,
            dot: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.command.output().clone();
    let (code, rendered) = match run(cli.command) {
        Ok(r) => (0, Some(r)),
        Err(Failure::Check(msg, r)) => {
            eprintln!("check failed: {msg}");
            (1, Some(r))
        }
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            (2, None)
        }
    };
    if let Some(r) = rendered {
        if let Err(e) = emit(&r, &output) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Gen { output, .. }
            | Command::Telescope { output, .. }
            | Command::Order { output, .. }
            | Command::Check { output, .. }
            | Command::Orbit { output, .. }
            | Command::Retset { output, .. }
            | Command::Density { output, .. }
            | Command::Reduce { output, .. }
            | Command::Export { output, .. } => output,
        }
    }
}

fn emit(r: &Rendered, out: &Output) -> Result<(), String> {
    let body = match out.format {
        Format::Json => r.json.clone(),
        Format::Text => r.text.clone(),
        Format::Dot => r
            .dot
            .clone()
            .ok_or("dot output is only available for diagrams")?,
    };
    match &out.out {
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| e.to_string()),
        Some(path) => write_atomic(path, body.as_bytes()),
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path.file_name().ok_or("output path has no file name")?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes).map_err(|e| format!("{}: {e}", tmp.display()))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        format!("{}: {e}", path.display())
    })
}

fn run(cmd: Command) -> Result<Rendered, Failure> {
    match cmd {
        Command::Gen { kind, .. } => gen(kind),
        Command::Telescope { input, cuts, .. } => {
            let doc = load(&input)?;
            let out = match doc.ordered()? {
                Some(od) => DiagramDocument::from_ordered(&od.lex_telescope(&cuts)?),
                None => DiagramDocument::from_diagram(&doc.diagram()?.telescope(&cuts)?),
            };
            Ok(render_doc(out.with_meta("cuts", json!(cuts)))?)
        }
        Command::Order { input, horizon, .. } => {
            let d = load(&input)?.diagram()?;
            let h = horizon.unwrap_or(d.depth());
            match skau_order(&d, h) {
                Ok(od) => Ok(render_doc(DiagramDocument::from_ordered(&od))?),
                Err(e @ OrderingError::NoWitnessWithinHorizon(_)) => {
                    let r = Rendered::plain(json!({ "error": e.to_string() }), format!("{e}\n"));
                    Err(Failure::Check(e.to_string(), r))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Check {
            input,
            simple,
            proper,
            horizon,
            ..
        } => check(&input, simple || !proper, horizon),
        Command::Orbit {
            input,
            path,
            steps,
            wrap,
            ..
        } => {
            let od = load_ordered(&input)?;
            let p: FinitePath = path.parse()?;
            p.validate(&od)?;
            let orbit = vershik_orbit(&od, &p, steps, wrap);
            let paths: Vec<String> = orbit.paths.iter().map(ToString::to_string).collect();
            let stopped = orbit.stopped_at.map(|s| match s {
                Step::FiberMinimum => "fiber-minimum",
                _ => "fiber-maximum",
            });
            let mut text = paths.join("\n");
            text.push('\n');
            if let Some(s) = stopped {
                writeln!(text, "stopped at {s}").expect("string");
            }
            Ok(Rendered::plain(
                json!({ "paths": paths, "stopped_at": stopped }),
                text,
            ))
        }
        Command::Retset {
            rot,
            interval,
            base,
            ..
        } => {
            let gamma = CertifiedReal::parse(&rot.gamma)?;
            let u = CircleIntervalSet::parse(&interval, rot.precision)?;
            let x = CertifiedReal::parse(&base)?;
            let members = return_set_from(&u, &gamma, &x, rot.window, rot.precision)?;
            let density = window_density(&members, rot.window);
            let list: Vec<String> = members.iter().map(ToString::to_string).collect();
            let json = json!({
                "gamma": gamma.to_string(),
                "interval": u.symbolic(),
                "window": rot.window,
                "members": members,
                "density": density.to_string(),
                "measure": u.measure().to_string(),
            });
            Ok(Rendered::plain(json, format!("{{{}}}\n", list.join(","))))
        }
        Command::Density {
            rot,
            alpha,
            shift_range,
            depth,
            ..
        } => {
            let gamma = CertifiedReal::parse(&rot.gamma)?;
            let alphas = alpha
                .iter()
                .map(|a| CertifiedReal::parse(a))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = ReturnAlgebraSpec::new(gamma, alphas, shift_range, depth);
            let dens = density_set(&spec, rot.precision)?;
            let values: Vec<Value> = dens
                .iter()
                .map(|x| json!({ "symbolic": x.to_string(), "decimal": x.to_decimal(20) }))
                .collect();
            let text = dens
                .iter()
                .map(|x| format!("{}\t{}\n", x.to_decimal(20), x))
                .collect();
            Ok(Rendered::plain(json!({ "densities": values }), text))
        }
        Command::Reduce {
            s,
            s_prime,
            gamma_path,
            shift_range,
            depth,
            precision,
            expect,
            ..
        } => {
            let gamma_path = gamma_path.unwrap_or_else(|| {
                let len = s
                    .iter()
                    .chain(&s_prime)
                    .map(|p| p.0.len())
                    .max()
                    .unwrap_or(0);
                BinaryPath(vec![true; len + 1])
            });
            let mut params = PipelineParams::new(gamma_path);
            params.shift_range = shift_range;
            params.boolean_depth = depth;
            params.precision_cap = precision;
            let report = reduction_pipeline(&s, &s_prime, &params)?;
            let verdict = match report.verdict {
                Verdict::Distinguished => "Distinguished",
                Verdict::IndistinguishableAtDepth => "IndistinguishableAtDepth",
            };
            let mut text = format!("{verdict}\n");
            if let Some(w) = &report.witness {
                writeln!(text, "witness {} ({})", w.value.decimal, w.value.symbolic)
                    .expect("string");
            }
            let r = Rendered::plain(serde_json::to_value(&report)?, text);
            let matches = match expect {
                None => true,
                Some(Expect::Distinguished) => report.verdict == Verdict::Distinguished,
                Some(Expect::Indistinguishable) => {
                    report.verdict == Verdict::IndistinguishableAtDepth
                }
            };
            if matches {
                Ok(r)
            } else {
                Err(Failure::Check(
                    format!("verdict {verdict} differs from the expected one"),
                    r,
                ))
            }
        }
        Command::Export { input, .. } => Ok(render_doc(load(&input)?)?),
    }
}

fn gen(kind: GenKind) -> Result<Rendered, Failure> {
    let doc = match kind {
        GenKind::Odometer { radices } => {
            if radices.contains(&0) {
                return Err(Failure::Error("radices must be positive".into()));
            }
            DiagramDocument::from_ordered(&catalog::odometer(&radices))
                .with_meta("kind", json!("odometer"))
        }
        GenKind::Stationary { matrix, depth } => {
            let rows: Vec<Vec<u64>> = serde_json::from_str(&matrix)
                .map_err(|e| Failure::Error(format!("matrix {matrix:?}: {e}")))?;
            let m = IncidenceMatrix::from_rows(&rows)?;
            DiagramDocument::from_diagram(&catalog::stationary(&m, depth)?)
                .with_meta("kind", json!("stationary"))
                .with_meta("matrix", json!(rows))
        }
        GenKind::RandomSimple { depth, width, seed } => {
            if depth < 2 || width < 2 {
                return Err(Failure::Error(
                    "random-simple needs --depth >= 2 and --width >= 2".into(),
                ));
            }
            let d = catalog::random_simple(&mut ChaCha8Rng::seed_from_u64(seed), depth, width);
            DiagramDocument::from_diagram(&d)
                .with_meta("kind", json!("random-simple"))
                .with_meta("seed", json!(seed))
        }
    };
    render_doc(doc)
}

fn check(input: &Path, simple: bool, horizon: Option<usize>) -> Result<Rendered, Failure> {
    let doc = load(input)?;
    if simple {
        let d = doc.diagram()?;
        let h = horizon.unwrap_or(d.depth());
        let (json, ok) = match d.is_simple_within(h)? {
            Simplicity::SimpleWitness { cuts } => (
                json!({ "check": "simple", "verdict": "simple-witness", "cuts": cuts }),
                true,
            ),
            Simplicity::NoWitnessWithinHorizon => (
                json!({ "check": "simple", "verdict": "no-witness-within-horizon", "horizon": h }),
                false,
            ),
        };
        let r = Rendered::plain(
            json.clone(),
            format!("{}\n", json["verdict"].as_str().unwrap_or("")),
        );
        return if ok {
            Ok(r)
        } else {
            Err(Failure::Check(
                format!("no simplicity witness within {h}"),
                r,
            ))
        };
    }
    let od = doc
        .ordered()?
        .ok_or_else(|| Failure::Error("--proper needs an ordered diagram (ranks)".into()))?;
    let h = horizon.unwrap_or(od.depth());
    let verdict = od.properly_ordered_within(h)?;
    let mut json = serde_json::to_value(&verdict)?;
    json["check"] = json!("proper");
    let r = Rendered::plain(
        json.clone(),
        format!("{}\n", json["verdict"].as_str().unwrap_or("")),
    );
    if verdict.is_proper() {
        Ok(r)
    } else {
        Err(Failure::Check(
            format!("not properly ordered within {h}"),
            r,
        ))
    }
}

fn load(path: &Path) -> Result<DiagramDocument, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
    Ok(DiagramDocument::from_json(&text)?)
}

fn load_ordered(path: &Path) -> Result<OrderedBratteliDiagram, Failure> {
    load(path)?
        .ordered()?
        .ok_or_else(|| Failure::Error(format!("{} carries no ranks", path.display())))
}

fn render_doc(doc: DiagramDocument) -> Result<Rendered, Failure> {
    let d = doc.diagram()?;
    let od = doc.ordered()?;
    let dot = match &od {
        Some(od) => od.to_dot(),
        None => d.to_dot(),
    };
    Ok(Rendered {
        json: doc.to_json(),
        text: diagram_text(&d),
        dot: Some(dot),
    })
}

fn diagram_text(d: &BratteliDiagram) -> String {
    let counts: Vec<String> = d.vertex_counts().iter().map(ToString::to_string).collect();
    let mut s = format!("levels {}\n", counts.join(" "));
    for n in 1..=d.depth() {
        let m = d.incidence_matrix(n).expect("level in range");
        writeln!(s, "M_{n} {m}").expect("string");
    }
    s
}
