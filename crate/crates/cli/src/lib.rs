//! Command-line front end: argument parsing, JSON output and exit codes.
//!
//! Exit status is 0 for positive or true verdicts and for plain
//! computations, 1 for negative or false verdicts, 2 for input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use orbit_incidence::germ::{
    euler_class, germ_incidence_verdict, germ_normal_data, ideal_equal_at_jet, incidence_i,
    infer_weights, monomial_model, normal_space_weights, parse_germ, sigma2_restriction,
    sigma_index, unfolding_basis, JetGerm, SourceWeights,
};
use orbit_incidence::quiver::{
    enumerate_orbits, ext_order, ext_table, hom_order_edges, orbit_incidence_verdict, root_label,
    OrbitSpec, QuiverSpec,
};
use orbit_incidence::report::{run_corpus, CorpusConfig, VerdictReport};
use orbit_incidence::schubert::{incidence_verdict, PartialPermutation};
use orbit_incidence::weights::WeightSystem;

pub const SEED_VAR: &str = "ORBIT_INCIDENCE_SEED";

#[derive(Parser, Debug)]
#[command(name = "orbit-incidence", version, about = "Incidence verdicts for orbit closures")]
struct Cli {
    /// Suppress JSON output; only the exit status reports the verdict.
    #[arg(long, global = true)]
    quiet: bool,
    /// Render tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide positivity of a weight system given as JSON (or @file).
    Positivity {
        #[arg(long)]
        weights: String,
    },
    /// Double-Borel orbits of n x n matrices.
    Schubert {
        #[arg(long)]
        n: usize,
        /// Partial permutation rows, e.g. "010;100;000".
        #[arg(long, conflicts_with = "all")]
        matrix: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Orbits of representations of a Dynkin quiver.
    Quiver {
        #[arg(long)]
        diagram: String,
        /// Arrows such as "1>2,3<2"; defaults to arrows from smaller labels.
        #[arg(long)]
        orientation: Option<String>,
        /// Multiplicities such as "10:1,11:2".
        #[arg(long, conflicts_with = "all")]
        orbit: Option<String>,
        #[arg(long, requires = "dim_bound")]
        all: bool,
        #[arg(long)]
        dim_bound: Option<u32>,
    },
    /// Contact orbits of map germs.
    Germ(GermArgs),
    /// Sweep the families listed in a JSON configuration file.
    Corpus {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct GermArgs {
    #[command(subcommand)]
    sub: Option<GermCommand>,
    /// Components separated by commas, e.g. "x^2, x*y".
    #[arg(long)]
    f: Option<String>,
    /// Jet order; defaults to the largest degree present.
    #[arg(long)]
    jet: Option<u32>,
    #[arg(long, value_enum)]
    task: Option<Task>,
    /// Leave the source weights out of the normal space.
    #[arg(long)]
    exclude_source_weights: bool,
}

#[derive(Subcommand, Debug)]
enum GermCommand {
    /// Leading coefficient of the restricted class of I_{a,b} at III_{c,d}.
    #[command(name = "incidence-I")]
    IncidenceI {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Task {
    Weights,
    Unfolding,
    Normal,
    Euler,
    Verdict,
    Sigma2,
    Monomialize,
}

type Outcome = Result<(Value, i32), String>;

fn verdict_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A verdict report with the family's own fields added alongside.
fn merged(report: &VerdictReport, native: Value) -> Value {
    let mut v = serde_json::to_value(report).expect("serializable");
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, native) {
        for (k, val) in extra {
            out.entry(k).or_insert(val);
        }
    }
    v
}

fn quiver_seed() -> Result<u64, String> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_VAR} must be an unsigned integer, got {s:?}")),
        Err(_) => Ok(1),
    }
}

fn positivity_cmd(weights: &str) -> Outcome {
    let text = match weights.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => weights.to_string(),
    };
    let ws: WeightSystem = serde_json::from_str(&text).map_err(|e| format!("bad weight system: {e}"))?;
    let report = VerdictReport::raw(ws);
    let code = verdict_code(report.certificate.is_positive());
    Ok((serde_json::to_value(&report).expect("serializable"), code))
}

fn schubert_cmd(n: usize, matrix: Option<&str>, _all: bool) -> Outcome {
    let orbits = match matrix {
        Some(m) => vec![PartialPermutation::parse(n, m).map_err(err)?],
        None => {
            if n == 0 {
                return Err("--n must be positive".into());
            }
            PartialPermutation::all(n)
        }
    };
    let mut all_true = true;
    let reports: Vec<Value> = orbits
        .iter()
        .map(|a| {
            let r = incidence_verdict(a);
            all_true &= r.incidence;
            merged(&VerdictReport::from_schubert(&r), serde_json::to_value(&r).expect("serializable"))
        })
        .collect();
    let out = if matrix.is_some() {
        reports.into_iter().next().expect("one orbit")
    } else {
        json!({ "n": n, "orbits": reports })
    };
    Ok((out, verdict_code(all_true)))
}

fn quiver_cmd(
    diagram: &str,
    orientation: Option<&str>,
    orbit: Option<&str>,
    dim_bound: Option<u32>,
) -> Outcome {
    let q = QuiverSpec::from_diagram(diagram, orientation).map_err(err)?;
    let table = ext_table(&q, quiver_seed()?).map_err(err)?;
    let orbits: Vec<OrbitSpec> = match (orbit, dim_bound) {
        (Some(text), _) => vec![OrbitSpec::parse(text, q.vertex_count()).map_err(err)?],
        (None, Some(bound)) => enumerate_orbits(&table, bound),
        (None, None) => Vec::new(),
    };
    let mut all_true = true;
    let mut reports = Vec::with_capacity(orbits.len());
    for mu in &orbits {
        let r = orbit_incidence_verdict(&table, mu).map_err(err)?;
        all_true &= r.incidence;
        let mut native = serde_json::to_value(&r).expect("serializable");
        native["orbit"] = json!(mu.label());
        reports.push(merged(&VerdictReport::from_orbit(&q, &r), native));
    }
    let hom_order: Vec<Value> = hom_order_edges(&table, &orbits)
        .into_iter()
        .map(|(upper, lower)| json!({ "upper": orbits[upper].label(), "lower": orbits[lower].label() }))
        .collect();
    let out = json!({
        "diagram": q.kind().to_string(),
        "orientation": q.orientation_string(),
        "roots": table.roots.iter().map(|r| root_label(r)).collect::<Vec<_>>(),
        "extTable": table,
        "extAcyclic": ext_order(&table).is_some(),
        "orbits": reports,
        "homOrder": hom_order,
    });
    Ok((out, verdict_code(all_true)))
}

fn germ_input(f: &JetGerm) -> Value {
    json!({ "germ": f.to_string(), "jet": f.k() })
}

fn with_input(f: &JetGerm, rest: Value) -> Value {
    let mut v = germ_input(f);
    if let (Value::Object(out), Value::Object(extra)) = (&mut v, rest) {
        out.extend(extra);
    }
    v
}

fn germ_task(f: &JetGerm, task: Task, sources: SourceWeights) -> Outcome {
    match task {
        Task::Weights => {
            let lattice = infer_weights(f);
            let sources: Vec<Vec<i64>> = (0..f.n()).map(|l| lattice.source(l)).collect();
            let targets: Vec<Vec<i64>> = (0..f.p()).map(|j| lattice.target(j)).collect();
            let out = json!({
                "variables": f.variables(),
                "characters": lattice.characters(),
                "lattice": lattice.rows,
                "sourceWeights": sources,
                "targetWeights": targets,
                "sigmaIndex": sigma_index(f),
            });
            Ok((with_input(f, out), 0))
        }
        Task::Unfolding => {
            let u = unfolding_basis(f);
            let out = json!({
                "dim": u.dim(),
                "elements": u.element_strings(),
                "weights": u.weights,
            });
            Ok((with_input(f, out), 0))
        }
        Task::Normal => {
            let data = germ_normal_data(f, sources).map_err(err)?;
            let direct = normal_space_weights(f).map_err(err)?;
            let out = json!({
                "weightSystem": data.weights.sorted(),
                "unfolding": data.unfolding.element_strings(),
                "sourceWeights": data.source_weights,
                "codim": data.codim,
                "directNormalDim": direct.1,
                "diagnostics": data.diagnostics,
            });
            Ok((with_input(f, out), 0))
        }
        Task::Euler => {
            let data = germ_normal_data(f, sources).map_err(err)?;
            let e = euler_class(f, sources).map_err(err)?;
            let out = json!({
                "weightSystem": data.weights.sorted(),
                "euler": e,
                "eulerText": e.to_string(),
                "zero": e.is_zero(),
                "diagnostics": data.diagnostics,
            });
            Ok((with_input(f, out), verdict_code(!e.is_zero())))
        }
        Task::Verdict => {
            let r = germ_incidence_verdict(f, sources).map_err(err)?;
            let out = merged(&VerdictReport::from_germ(&r), serde_json::to_value(&r).expect("serializable"));
            Ok((out, verdict_code(r.incidence)))
        }
        Task::Sigma2 => {
            let r = sigma2_restriction(f).map_err(err)?;
            let model = r.monomial_model.as_ref().map(|m| {
                json!({ "germ": m.germ.to_string(), "case": m.case, "weighting": m.weighting })
            });
            let out = json!({
                "sigmaIndex": sigma_index(f),
                "characters": r.lattice.characters(),
                "lattice": r.lattice.rows,
                "polynomial": r.polynomial,
                "polynomialText": r.polynomial.to_string(),
                "zero": r.polynomial.is_zero(),
                "monomialModel": model,
                "diagnostics": r.diagnostics,
            });
            Ok((with_input(f, out), verdict_code(!r.polynomial.is_zero())))
        }
        Task::Monomialize => {
            let m = monomial_model(f).map_err(err)?;
            let equal = ideal_equal_at_jet(f, &m.germ, f.k()).map_err(err)?;
            let out = json!({
                "model": m.germ.to_string(),
                "case": m.case,
                "weighting": m.weighting,
                "idealEqual": equal,
            });
            Ok((with_input(f, out), verdict_code(equal)))
        }
    }
}

fn germ_cmd(args: &GermArgs) -> Outcome {
    if let Some(GermCommand::IncidenceI { a, b, c, d }) = &args.sub {
        let r = incidence_i(*a, *b, *c, *d).map_err(err)?;
        let mut out = serde_json::to_value(&r).expect("serializable");
        out["input"] = json!({ "a": a, "b": b, "c": c, "d": d });
        return Ok((out, 0));
    }
    let text = args.f.as_deref().ok_or("germ needs --f (or the incidence-I subcommand)")?;
    let task = args.task.ok_or("germ needs --task")?;
    let mut f = parse_germ(text).map_err(err)?;
    if let Some(k) = args.jet {
        f = f.with_jet(k).map_err(err)?;
    }
    let sources = if args.exclude_source_weights {
        SourceWeights::Exclude
    } else {
        SourceWeights::Include
    };
    germ_task(&f, task, sources)
}

fn corpus_cmd(path: &PathBuf) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let config = CorpusConfig::from_json(&text).map_err(err)?;
    let outcome = run_corpus(&config, quiver_seed()?).map_err(err)?;
    Ok((outcome.aggregate, verdict_code(outcome.violations == 0)))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_table(rows: &[Value], out: &mut String) {
    let Some(Value::Object(first)) = rows.first() else {
        out.push_str(&format!("  {}\n", Value::Array(rows.to_vec())));
        return;
    };
    let keys: Vec<&String> = first
        .iter()
        .filter(|(_, v)| !v.is_object())
        .map(|(k, _)| k)
        .collect();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| keys.iter().map(|k| cell(&r[k.as_str()])).collect())
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| table.iter().map(|r| r[i].len()).fold(k.len(), usize::max))
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    out.push_str(&format!("  {}\n", line(keys.iter().map(|k| k.as_str()).collect()).trim_end()));
    for r in &table {
        out.push_str(&format!("  {}\n", line(r.iter().map(String::as_str).collect()).trim_end()));
    }
}

fn render(v: &Value, out: &mut String, prefix: &str) {
    let Value::Object(map) = v else {
        out.push_str(&format!("{}\n", cell(v)));
        return;
    };
    let scalars: Map<String, Value> = map
        .iter()
        .filter(|(_, v)| !v.is_object() && !matches!(v, Value::Array(a) if a.first().is_some_and(Value::is_object)))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let width = scalars.keys().map(|k| prefix.len() + k.len()).max().unwrap_or(0);
    for (k, v) in &scalars {
        let key = format!("{prefix}{k}");
        out.push_str(&format!("{key:<width$}  {}\n", cell(v)));
    }
    for (k, v) in map {
        match v {
            Value::Object(_) => render(v, out, &format!("{prefix}{k}.")),
            Value::Array(rows) if rows.first().is_some_and(Value::is_object) => {
                out.push_str(&format!("{prefix}{k}:\n"));
                render_table(rows, out);
            }
            _ => {}
        }
    }
}

/// Text rendering of a JSON result: scalar fields as `key value` lines and
/// arrays of objects as aligned tables.
pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    render(v, &mut out, "");
    out
}

/// Runs the command line `argv` (including the program name), writing the
/// result to `stdout` and diagnostics to `stderr`. Returns the exit status.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Positivity { weights } => positivity_cmd(weights),
        Command::Schubert { n, matrix, all } => schubert_cmd(*n, matrix.as_deref(), *all),
        Command::Quiver {
            diagram,
            orientation,
            orbit,
            dim_bound,
            ..
        } => quiver_cmd(diagram, orientation.as_deref(), orbit.as_deref(), *dim_bound),
        Command::Germ(args) => germ_cmd(args),
        Command::Corpus { config } => corpus_cmd(config),
    };
    match outcome {
        Ok((value, code)) => {
            if !cli.quiet {
                let text = if cli.pretty {
                    pretty(&value)
                } else {
                    serde_json::to_string_pretty(&value).expect("serializable") + "\n"
                };
                if stdout.write_all(text.as_bytes()).is_err() {
                    return 2;
                }
            }
            code
        }
        Err(message) => {
            let _ = writeln!(stderr, "error: {message}");
            2
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
