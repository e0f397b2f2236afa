//! Argument parsing and command execution for the `charvar` binary.
//!
//! [`dispatch`] never prints and never exits; it returns the exit code and the
//! document to emit, so the whole front end can be tested in-process.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use torus_charvar::families::{FamilyError, Route};
use torus_charvar::numeric::{self, batch_seeds, membership_check, sample_representation};
use torus_charvar::trace::check_odd_m;
use torus_charvar::variety::{self, sig12, verify_line_structure, verify_variety_range};
use torus_charvar::{
    CurveDescription, Families, FamilyReport, FreeWord, Identity, Kind, MPoly, TraceEngine, Var,
};

/// Scaled tolerance for polynomial roots in the verification sweeps.
const ROOT_TOL: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Json(Value),
    Csv(String),
    /// Help, version or error text.
    Text(String),
}

impl Payload {
    /// Exact bytes written by the binary, always newline-terminated.
    pub fn render(&self) -> String {
        let mut out = match self {
            Payload::Json(v) => serde_json::to_string(v).expect("JSON values serialize"),
            Payload::Csv(s) | Payload::Text(s) => s.clone(),
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: Payload,
}

impl CommandResult {
    fn json(passed: bool, v: Value) -> Self {
        Self {
            exit_code: if passed { EXIT_OK } else { EXIT_FAILED },
            payload: Payload::Json(v),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_USAGE,
            payload: Payload::Text(format!("error: {}", msg.into())),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "charvar",
    version,
    about = "Trace polynomials and torus knot character varieties"
)]
struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV for tabular outputs.
    #[arg(long, global = true)]
    csv: bool,
    /// Parallelism hint; accepted for compatibility, work runs on one thread.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The polynomial families p_n, q_n and g_n.
    Families {
        #[arg(value_enum)]
        family: FamilyKind,
        #[arg(long)]
        n: u64,
        /// Construction of q_n; only valid for `q`.
        #[arg(long, value_enum)]
        route: Option<RouteArg>,
    },
    /// Trace polynomials of words.
    Trace {
        #[command(subcommand)]
        command: TraceCommand,
    },
    /// The character variety of H_m.
    Variety {
        #[command(subcommand)]
        command: VarietyCommand,
    },
    /// Exact verification sweeps.
    Verify(VerifyArgs),
    /// Sample representations and check them against the variety.
    Sample(SampleArgs),
    /// Points on the parabola and on the horizontal lines.
    PlotData {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        xmin: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        xmax: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyKind {
    P,
    Q,
    G,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteArg {
    Recursive,
    ViaCyclotomic,
    Both,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Recursive => Route::Recursive,
            RouteArg::ViaCyclotomic => Route::ViaCyclotomic,
            RouteArg::Both => Route::Both,
        }
    }
}

#[derive(Debug, Subcommand)]
enum TraceCommand {
    /// Reduce a word such as `xyXY` or `(xy)^5` to a polynomial in X, Y, Z.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Debug, Subcommand)]
enum VarietyCommand {
    /// The defining polynomial f_{(m-1)/2}(X, Z).
    Defining {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value = "closed")]
        form: Form,
    },
    /// Parabola and line levels.
    Lines {
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Form {
    Direct,
    Closed,
    Trace,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    scope: Scope,
    /// Largest odd m for the variety checks.
    #[arg(long, default_value_t = 99)]
    max_m: u64,
    /// Largest index for the family identities and q_n routes.
    #[arg(long, default_value_t = 200)]
    max_n: u64,
    /// Largest m for the trace-route check (defaults to --max-m).
    #[arg(long)]
    max_trace_m: Option<u64>,
    /// Largest m for the divisibility check (defaults to --max-m).
    #[arg(long)]
    max_div_m: Option<u64>,
    /// JSON file `{"q": {"<n>": <polynomial>}}` replacing the listed q_n.
    #[arg(long)]
    fixture: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scope {
    Families,
    Variety,
    All,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for matrix relations and for the parabola distance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Tolerance for the scaled defining residual and the line distance.
    #[arg(long, default_value_t = 1e-6)]
    poly_tol: f64,
    #[arg(long, value_enum, default_value = "both")]
    kind: KindArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Abelian,
    Irreducible,
    Both,
}

impl KindArg {
    fn kinds(self) -> &'static [Kind] {
        match self {
            KindArg::Abelian => &[Kind::Abelian],
            KindArg::Irreducible => &[Kind::IrreducibleCandidate],
            KindArg::Both => &[Kind::Abelian, Kind::IrreducibleCandidate],
        }
    }
}

#[derive(Debug, Deserialize)]
struct Fixture {
    #[serde(default)]
    q: BTreeMap<u64, MPoly>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandResult {
                exit_code,
                payload: Payload::Text(e.render().to_string()),
            };
        }
    };
    let csv = cli.csv;
    match cli.command {
        Command::Families { family, n, route } => families(family, n, route),
        Command::Trace {
            command: TraceCommand::Reduce { word },
        } => trace_reduce(&word),
        Command::Variety { command } => match command {
            VarietyCommand::Defining { m, form } => defining(m, form),
            VarietyCommand::Lines { m } => lines(m, csv),
        },
        Command::Verify(args) => verify(&args, csv),
        Command::Sample(args) => sample(&args, csv),
        Command::PlotData {
            m,
            xmin,
            xmax,
            samples,
        } => plot(m, xmin, xmax, samples, csv),
    }
}

fn poly_json(p: &MPoly) -> Value {
    serde_json::to_value(p).expect("polynomials serialize")
}

fn families(family: FamilyKind, n: u64, route: Option<RouteArg>) -> CommandResult {
    let mut fam = Families::new();
    let (name, poly, route_name) = match family {
        FamilyKind::P | FamilyKind::G if route.is_some() => {
            return CommandResult::usage("--route only applies to the q family");
        }
        FamilyKind::P => ("p", Ok(fam.p(n as usize).clone()), None),
        FamilyKind::G => ("g", fam.cyclotomic(n), None),
        FamilyKind::Q => {
            let route = route.unwrap_or(RouteArg::Recursive);
            let name = route.to_possible_value().expect("no skipped variants");
            (
                "q",
                fam.half_cyclotomic(n, route.into()),
                Some(name.get_name().to_owned()),
            )
        }
    };
    match poly {
        Ok(poly) => {
            let mut out = json!({"family": name, "n": n, "poly": poly_json(&poly)});
            if let Some(r) = route_name {
                out["route"] = json!(r);
            }
            CommandResult::json(true, out)
        }
        Err(e @ FamilyError::RouteDisagreement(_)) => CommandResult::json(
            false,
            json!({"family": name, "n": n, "error": e.to_string()}),
        ),
        Err(e) => CommandResult::usage(e.to_string()),
    }
}

fn trace_reduce(text: &str) -> CommandResult {
    let word: FreeWord = match text.parse() {
        Ok(w) => w,
        Err(e) => return CommandResult::usage(format!("bad word {text:?}: {e}")),
    };
    let poly = TraceEngine::new().trace(&word);
    CommandResult::json(
        true,
        json!({
            "word": word.to_string(),
            "reduced": word.reduced().to_string(),
            "poly": poly_json(&poly),
        }),
    )
}

fn defining(m: u64, form: Form) -> CommandResult {
    let mut fam = Families::new();
    let result = match form {
        Form::Direct => check_odd_m(m)
            .map(|_| variety::f_direct(&mut fam, ((m - 1) / 2) as usize))
            .map_err(Into::into),
        Form::Closed => variety::closed_form(&mut fam, m),
        Form::Trace => TraceEngine::new()
            .f_trace(m)
            .map(|f| f.substitute(Var::Y, &MPoly::var(Var::X)))
            .map_err(Into::into),
    };
    match result {
        Ok(poly) => CommandResult::json(true, json!({"m": m, "poly": poly_json(&poly)})),
        Err(e) => CommandResult::usage(e.to_string()),
    }
}

fn lines(m: u64, csv: bool) -> CommandResult {
    let curve = match CurveDescription::new(&mut Families::new(), m) {
        Ok(c) => c,
        Err(e) => return CommandResult::usage(e.to_string()),
    };
    if csv {
        let mut out = String::from("k,z\n");
        for (k, l) in curve.line_levels.iter().enumerate() {
            let _ = writeln!(out, "{},{}", k + 1, sig12(*l));
        }
        return CommandResult {
            exit_code: EXIT_OK,
            payload: Payload::Csv(out),
        };
    }
    CommandResult::json(
        true,
        serde_json::to_value(&curve).expect("curve serializes"),
    )
}

fn load_fixture(path: &PathBuf) -> Result<Families, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let fixture: Fixture =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Families::with_q_overrides(fixture.q))
}

fn verify(args: &VerifyArgs, csv: bool) -> CommandResult {
    let mut fam = match &args.fixture {
        Some(path) => match load_fixture(path) {
            Ok(f) => f,
            Err(e) => return CommandResult::usage(e),
        },
        None => Families::new(),
    };
    if args.max_m < 3 || args.max_n < 1 {
        return CommandResult::usage("need --max-m >= 3 and --max-n >= 1");
    }
    let mut reports: Vec<FamilyReport> = Vec::new();
    if args.scope != Scope::Variety {
        for id in Identity::ALL {
            reports.push(fam.verify_family_identity(id, args.max_n.max(2)));
        }
        reports.push(fam.verify_q_routes(args.max_n.max(3)));
        reports.push(fam.verify_q_roots(args.max_n, ROOT_TOL));
    }
    if args.scope != Scope::Families {
        let mut engine = TraceEngine::new();
        reports.extend(verify_variety_range(
            &mut fam,
            &mut engine,
            args.max_m,
            args.max_trace_m.unwrap_or(args.max_m),
            args.max_div_m.unwrap_or(args.max_m),
        ));
        reports.push(verify_line_structure(&mut fam, args.max_m, ROOT_TOL));
    }
    let passed = reports.iter().all(|r| r.passed);
    if csv {
        let mut out = String::from("identity,lo,hi,passed,first_failure\n");
        for r in &reports {
            let failure = r.first_failure.map(|f| f.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{failure}",
                r.identity, r.range[0], r.range[1], r.passed
            );
        }
        return CommandResult {
            exit_code: if passed { EXIT_OK } else { EXIT_FAILED },
            payload: Payload::Csv(out),
        };
    }
    CommandResult::json(passed, json!({"passed": passed, "reports": reports}))
}

#[derive(Debug, Serialize)]
struct SampleRow {
    #[serde(flatten)]
    membership: numeric::MembershipReport,
    toro: numeric::ToroReport,
    passed: bool,
}

#[derive(Debug, Default, Serialize)]
struct KindSummary {
    count: usize,
    failures: usize,
    max_residual_defining: f64,
    max_residual_relation: f64,
    max_component_distance: f64,
    max_toro: f64,
    /// Distinct line levels reached, for irreducible candidates.
    #[serde(skip_serializing_if = "Option::is_none")]
    lines_hit: Option<usize>,
}

fn sample(args: &SampleArgs, csv: bool) -> CommandResult {
    let curve = match CurveDescription::new(&mut Families::new(), args.m) {
        Ok(c) => c,
        Err(e) => return CommandResult::usage(e.to_string()),
    };
    let mut rows = Vec::new();
    let mut summaries = BTreeMap::new();
    for &kind in args.kind.kinds() {
        let mut summary = KindSummary::default();
        let mut hit = BTreeSet::new();
        for seed in batch_seeds(args.seed, args.count) {
            let row = match sample_row(&curve, kind, seed, args) {
                Ok(row) => row,
                Err(e) => return CommandResult::usage(e.to_string()),
            };
            summary.count += 1;
            summary.failures += usize::from(!row.passed);
            let mem = &row.membership;
            summary.max_residual_defining =
                summary.max_residual_defining.max(mem.residual_defining);
            summary.max_residual_relation =
                summary.max_residual_relation.max(mem.residual_relation);
            summary.max_component_distance =
                summary.max_component_distance.max(mem.component_distance);
            let toro = row
                .toro
                .relation
                .max(row.toro.psi_phi)
                .max(row.toro.phi_psi);
            summary.max_toro = summary.max_toro.max(toro);
            if let Some(l) = mem.nearest_line {
                hit.insert(l.to_bits());
            }
            rows.push(row);
        }
        if kind == Kind::IrreducibleCandidate {
            summary.lines_hit = Some(hit.len());
        }
        for v in [
            &mut summary.max_residual_defining,
            &mut summary.max_residual_relation,
            &mut summary.max_component_distance,
            &mut summary.max_toro,
        ] {
            *v = sig12(*v);
        }
        summaries.insert(kind.name(), summary);
    }
    let passed = rows.iter().all(|r| r.passed);
    if csv {
        let mut out = String::from(
            "m,kind,seed,x_re,x_im,z_re,z_im,residual_defining,residual_relation,nearest_line,passed\n",
        );
        for r in &rows {
            let mem = &r.membership;
            let line = mem
                .nearest_line
                .map(|l| sig12(l).to_string())
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{line},{}",
                mem.m,
                mem.kind.name(),
                mem.seed,
                sig12(mem.x.re),
                sig12(mem.x.im),
                sig12(mem.z.re),
                sig12(mem.z.im),
                sig12(mem.residual_defining),
                sig12(mem.residual_relation),
                r.passed
            );
        }
        return CommandResult {
            exit_code: if passed { EXIT_OK } else { EXIT_FAILED },
            payload: Payload::Csv(out),
        };
    }
    CommandResult::json(
        passed,
        json!({
            "m": args.m,
            "seed": args.seed,
            "count": args.count,
            "passed": passed,
            "line_count": curve.line_levels.len(),
            "summary": summaries,
            "samples": rows,
        }),
    )
}

fn sample_row(
    curve: &CurveDescription,
    kind: Kind,
    seed: u64,
    args: &SampleArgs,
) -> Result<SampleRow, numeric::NumericError> {
    let rep = sample_representation(curve.m, kind, seed)?;
    let toro = numeric::check_toro_isomorphism(curve.m, &rep, args.tol)?;
    let mut membership = membership_check(curve, &rep, args.tol)?;
    let component_tol = match kind {
        Kind::Abelian => args.tol,
        Kind::IrreducibleCandidate => args.poly_tol,
    };
    let passed = toro.passed
        && membership.residual_defining <= args.poly_tol
        && membership.component_distance <= component_tol;
    membership.residual_defining = sig12(membership.residual_defining);
    membership.residual_relation = sig12(membership.residual_relation);
    membership.nearest_line = membership.nearest_line.map(sig12);
    let toro = numeric::ToroReport {
        relation: sig12(toro.relation),
        psi_phi: sig12(toro.psi_phi),
        phi_psi: sig12(toro.phi_psi),
        ..toro
    };
    Ok(SampleRow {
        membership,
        toro,
        passed,
    })
}

fn plot(m: u64, xmin: f64, xmax: f64, samples: usize, csv: bool) -> CommandResult {
    let points = match variety::plot_data(m, xmin, xmax, samples) {
        Ok(p) => p,
        Err(e) => return CommandResult::usage(e.to_string()),
    };
    if csv {
        return CommandResult {
            exit_code: EXIT_OK,
            payload: Payload::Csv(variety::plot_csv(&points)),
        };
    }
    let points: Vec<Value> = points
        .iter()
        .map(|p| json!({"component": p.component, "x": sig12(p.x), "z": sig12(p.z)}))
        .collect();
    CommandResult::json(true, json!({"m": m, "points": points}))
}
