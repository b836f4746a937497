//! `hypergeom`: command-line front end for building, invariantizing,
//! solving and classifying hypergeometric systems.
//!
//! Exit codes: 0 on success, 1 when a computation fails (an error object is
//! printed as JSON), 2 on invalid input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hypergeom::classify::{andean_arrangement_prime_level, candidate_pairs, resonance_and_pyramid, toral_parameter_tests};
use hypergeom::discriminant::{
    cubic_discriminant, dehomogenize_discriminant, quadratic_discriminant, vanish_check, SAMPLE_SEED,
};
use hypergeom::fixtures::{self, factored_row};
use hypergeom::invariant::{pi_presentation, shorn_decomposition};
use hypergeom::lattice::{build_gale_context_with, solve_parameter, GaleContext, GaleOptions, ParameterMode};
use hypergeom::poly::Poly;
use hypergeom::rational::{fmt_q, parse_q, parse_qvec};
use hypergeom::series::{annihilation_check, gkz_series, horn_series, start_exponents, TruncatedSeries};
use hypergeom::systems::{
    gkz_system, homogenize_rho, horn_generators, lattice_basis_ideal, lattice_basis_system, SystemKind, SystemSpec,
};
use hypergeom::weyl::WeylOp;
use hypergeom::{Error, IntMat, Q};

#[derive(Parser)]
#[command(name = "hypergeom", version, about = "Exact hypergeometric D-module computations")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    Gkz,
    Latticebasis,
    Horn,
    Nhorn,
    Rho,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gale context (C, B, K, SNF of K) from A and optional B, Atilde.
    Context {
        /// Problem file (JSON or TOML).
        #[arg(long, conflicts_with = "a")]
        problem: Option<PathBuf>,
        /// JSON matrix file for A.
        #[arg(long = "A", id = "a")]
        a: Option<PathBuf>,
        #[arg(long = "B")]
        b: Option<PathBuf>,
        #[arg(long = "Atilde")]
        atilde: Option<PathBuf>,
    },
    /// Build a system from a problem file.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(long)]
        problem: PathBuf,
    },
    /// Presentation of the invariantized system.
    Pi {
        /// A system file written by `build gkz|latticebasis`, or a problem file
        /// (then the lattice basis system is used).
        #[arg(long, required_unless_present = "golden")]
        system: Option<PathBuf>,
        /// Also compare the bundled presentation fixtures.
        #[arg(long)]
        golden: bool,
    },
    /// Decomposition of the invariantized lattice basis system into Horn summands.
    Shorn {
        #[arg(long)]
        problem: PathBuf,
    },
    /// Truncated series solutions.
    Series {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        order: Option<i64>,
        /// Start exponent: JSON file with a list of rationals, or an inline list.
        #[arg(long)]
        start: Option<String>,
    },
    /// Termwise residuals of operators applied to a series.
    Check {
        /// A system file or a JSON list of operators.
        #[arg(long)]
        ops: PathBuf,
        #[arg(long)]
        series: PathBuf,
        /// Largest grading checked (default: order - 3).
        #[arg(long)]
        safe: Option<i64>,
    },
    /// Toral/Andean classification and resonance for a parameter.
    Classify {
        /// A context file written by `context`, or a problem file.
        #[arg(long)]
        context: PathBuf,
        /// Parameter beta, e.g. "2,0,0,0" (default: from the problem file).
        #[arg(long)]
        beta: Option<String>,
    },
    /// Horn-Kapranov uniformization check of a discriminant.
    Hk {
        /// JSON matrix file for B, or a problem file.
        #[arg(long = "B")]
        b: PathBuf,
        /// Polynomial file, or `quadratic` / `cubic` for a bundled one.
        #[arg(long)]
        disc: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Recompute every bundled worked example and compare.
    Golden,
}

/// Rational entry given as a string or an integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum QIn {
    S(String),
    I(i64),
}

impl QIn {
    fn value(&self) -> Result<Q, Error> {
        match self {
            QIn::S(s) => parse_q(s),
            QIn::I(i) => Ok(Q::from_integer((*i).into())),
        }
    }
}

fn qs(v: &Option<Vec<QIn>>) -> Result<Option<Vec<Q>>, Error> {
    v.as_ref().map(|v| v.iter().map(QIn::value).collect()).transpose()
}

#[derive(Deserialize, Default)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Bounds {
    toric_degree: Option<i64>,
    series_order: Option<i64>,
    samples: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    #[serde(rename = "A")]
    a: IntMat,
    #[serde(rename = "B", default)]
    b: Option<IntMat>,
    #[serde(rename = "Atilde", default)]
    atilde: Option<IntMat>,
    #[serde(default)]
    beta: Option<Vec<QIn>>,
    #[serde(default)]
    kappa: Option<Vec<QIn>>,
    /// Extra degree parameter for `build rho`.
    #[serde(default)]
    beta0: Option<QIn>,
    /// Require the columns of A to span a pointed cone (default true).
    #[serde(default)]
    pointed: Option<bool>,
    #[serde(default)]
    bounds: Bounds,
}

const DEFAULT_TORIC_DEGREE: i64 = 2;
const DEFAULT_ORDER: i64 = 8;
const DEFAULT_SAMPLES: usize = 20;

enum Failure {
    Input(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Input(m),
            e => Failure::Compute(e),
        }
    }
}

type Out = Result<(Value, String), Failure>;

fn input<E: std::fmt::Display>(what: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", what.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(input(path))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(input(path))
}

fn is_toml(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "toml")
}

fn read_problem(path: &Path) -> Result<ProblemFile, Failure> {
    let text = read(path)?;
    if is_toml(path) {
        toml::from_str(&text).map_err(input(path))
    } else {
        serde_json::from_str(&text).map_err(input(path))
    }
}

struct Problem {
    file: ProblemFile,
    ctx: GaleContext,
    kappa: Vec<Q>,
    beta: Vec<Q>,
}

fn load_problem(path: &Path) -> Result<Problem, Failure> {
    let file = read_problem(path)?;
    let opts = GaleOptions { require_pointed: file.pointed.unwrap_or(true) };
    let ctx = build_gale_context_with(&file.a, file.b.as_ref(), file.atilde.as_ref(), opts)?;
    let (kappa, beta) = match (qs(&file.kappa)?, qs(&file.beta)?) {
        (Some(k), Some(b)) => {
            if file.a.mul_qvec(&k) != b {
                return Err(Failure::Input("beta must equal A kappa".into()));
            }
            (k, b)
        }
        (Some(k), None) => {
            if k.len() != file.a.cols() {
                return Err(Failure::Input(format!("kappa must have {} entries", file.a.cols())));
            }
            let b = file.a.mul_qvec(&k);
            (k, b)
        }
        (None, Some(b)) => (solve_parameter(&file.a, &b, ParameterMode::Any)?, b),
        (None, None) => {
            let k = vec![Q::from_integer(0.into()); file.a.cols()];
            (k, vec![Q::from_integer(0.into()); file.a.rows()])
        }
    };
    Ok(Problem { file, ctx, kappa, beta })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn qv(v: &[Q]) -> String {
    format!("({})", v.iter().map(fmt_q).collect::<Vec<_>>().join(", "))
}

/// ` + c`, ` - c` or nothing.
fn signed(c: &Q) -> String {
    let zero = Q::from_integer(0.into());
    if *c == zero {
        String::new()
    } else if *c < zero {
        format!(" - {}", fmt_q(&-c.clone()))
    } else {
        format!(" + {}", fmt_q(c))
    }
}

fn mat(name: &str, m: &IntMat) -> String {
    let rows: Vec<String> = m.row_vecs().iter().map(|r| format!("{r:?}")).collect();
    format!("{name} = [{}]\n", rows.join(", "))
}

fn context_pretty(ctx: &GaleContext) -> String {
    let mut s = String::new();
    for (n, m) in [("A", &ctx.a), ("Atilde", &ctx.atilde), ("C", &ctx.c), ("B", &ctx.b), ("K", &ctx.k)] {
        s.push_str(&mat(n, m));
    }
    s.push_str(&format!("SNF(K) divisors = {:?}\n", ctx.varkappa));
    s.push_str(&format!("epsC = {:?}\n", ctx.eps_c));
    s.push_str(&format!("latticeIndex = {}\n", ctx.lattice_index));
    s
}

fn cmd_context(problem: Option<PathBuf>, a: Option<PathBuf>, b: Option<PathBuf>, atilde: Option<PathBuf>) -> Out {
    let ctx = match (problem, a) {
        (Some(p), _) => load_problem(&p)?.ctx,
        (None, Some(a)) => {
            let a: IntMat = read_json(&a)?;
            let b: Option<IntMat> = b.as_deref().map(read_json).transpose()?;
            let t: Option<IntMat> = atilde.as_deref().map(read_json).transpose()?;
            build_gale_context_with(&a, b.as_ref(), t.as_ref(), GaleOptions::default())?
        }
        (None, None) => return Err(Failure::Input("either --problem or --A is required".into())),
    };
    Ok((to_value(&ctx), context_pretty(&ctx)))
}

fn cmd_build(kind: BuildKind, problem: &Path) -> Out {
    let p = load_problem(problem)?;
    let sys = match kind {
        BuildKind::Gkz => {
            gkz_system(&p.ctx, &p.kappa, p.file.bounds.toric_degree.unwrap_or(DEFAULT_TORIC_DEGREE))?
        }
        BuildKind::Latticebasis => lattice_basis_system(&p.ctx, &p.kappa)?,
        BuildKind::Horn => horn_generators(&p.ctx.b, &p.kappa, false)?,
        BuildKind::Nhorn => horn_generators(&p.ctx.b, &p.kappa, true)?,
        BuildKind::Rho => {
            let beta0 = p.file.beta0.as_ref().map(QIn::value).transpose()?.unwrap_or_default();
            homogenize_rho(&p.ctx.a, &lattice_basis_ideal(&p.ctx.b)?, &p.beta, &beta0)?
        }
    };
    let mut pretty = sys.pretty();
    if let Some(f) = &sys.factored {
        for h in f {
            let show = |fs: &[hypergeom::systems::LinFactor]| {
                if fs.is_empty() {
                    "1".to_string()
                } else {
                    fs.iter()
                        .map(|l| format!("(B{}.eta{})", l.row + 1, signed(&(&sys.kappa[l.row] + &l.shift))))
                        .collect::<Vec<_>>()
                        .join("*")
                }
            };
            pretty.push_str(&format!("  q{} = {}\n  p{} = {}\n", h.k + 1, show(&h.q), h.k + 1, show(&h.p)));
        }
    }
    Ok((to_value(&sys), pretty))
}

/// A system file, or a problem file (then its lattice basis system and
/// series order).
fn load_system_with_order(path: &Path) -> Result<(SystemSpec, Option<i64>), Failure> {
    let text = read(path)?;
    if !is_toml(path) {
        if let Ok(sys) = serde_json::from_str::<SystemSpec>(&text) {
            return Ok((sys, None));
        }
    }
    let p = load_problem(path)?;
    Ok((lattice_basis_system(&p.ctx, &p.kappa)?, p.file.bounds.series_order))
}

fn load_system(path: &Path) -> Result<SystemSpec, Failure> {
    Ok(load_system_with_order(path)?.0)
}

fn cmd_pi(system: Option<PathBuf>, golden: bool) -> Out {
    let mut out = json!({});
    let mut pretty = String::new();
    if let Some(path) = system {
        let sys = load_system(&path)?;
        let pres = pi_presentation(&sys)?;
        let ctx = sys.ctx.as_ref().expect("checked by pi_presentation");
        let mut factored = Vec::new();
        for r in &pres.rows {
            factored.push(factored_row(ctx, &sys.kappa, &r.lifted, &r.image)?.map(|e| e.to_string()));
        }
        pretty.push_str(&pres.pretty());
        for (r, f) in pres.rows.iter().zip(&factored) {
            if let Some(f) = f {
                pretty.push_str(&format!("  row {} factored: {f}\n", r.generator + 1));
            }
        }
        out["presentation"] = to_value(&pres);
        out["factored"] = to_value(&factored);
    }
    if golden {
        let mut reports = Vec::new();
        for f in fixtures::all()? {
            if matches!(
                f.kind,
                fixtures::FixtureKind::Gkz | fixtures::FixtureKind::LatticeBasis | fixtures::FixtureKind::Module
            ) {
                let r = f.run(true)?;
                pretty.push_str(&r.pretty());
                reports.push(r);
            }
        }
        out["golden"] = to_value(&reports);
    }
    Ok((out, pretty))
}

fn cmd_shorn(problem: &Path) -> Out {
    let p = load_problem(problem)?;
    let summands = shorn_decomposition(&p.ctx, &p.kappa)?;
    let mut pretty = format!("{} summands\n", summands.len());
    for s in &summands {
        pretty.push_str(&format!(
            "  residue {:?}: z^{} . sHorn(B, kappa + {:?}), rows match Horn: {}\n",
            s.residue,
            qv(&s.label),
            s.shift,
            s.rows_match
        ));
        for g in &s.system.generators {
            pretty.push_str(&format!("    {}\n", g.display_theta()));
        }
    }
    Ok((json!({ "kappa": p.kappa.iter().map(fmt_q).collect::<Vec<_>>(), "summands": summands }), pretty))
}

fn parse_start(s: &str) -> Result<Vec<Q>, Failure> {
    let p = Path::new(s);
    if p.exists() {
        let v: Vec<QIn> = read_json(p)?;
        Ok(v.iter().map(QIn::value).collect::<Result<_, _>>()?)
    } else {
        Ok(parse_qvec(s)?)
    }
}

fn cmd_series(system: &Path, order: Option<i64>, start: Option<String>) -> Out {
    let (sys, file_order) = load_system_with_order(system)?;
    let order = order.or(file_order).unwrap_or(DEFAULT_ORDER);
    let start = start.as_deref().map(parse_start).transpose()?;
    if matches!(sys.kind, SystemKind::Horn | SystemKind::NormalizedHorn) {
        let m = sys.b.as_ref().map_or(0, |b| b.cols());
        let v = start.unwrap_or_else(|| vec![Q::from_integer(0.into()); m]);
        let s = horn_series(&sys, &v, order)?;
        return Ok((to_value(&s), s.pretty()));
    }
    if let Some(v) = start {
        let s = gkz_series(&sys, &v, order)?;
        return Ok((to_value(&s), s.pretty()));
    }
    let a = sys.a.as_ref().ok_or_else(|| Failure::Input("system has no grading matrix".into()))?;
    let mut series = Vec::new();
    let mut warnings = Vec::new();
    let mut pretty = String::new();
    for st in start_exponents(a, &sys.beta)? {
        match gkz_series(&sys, &st.v, order) {
            Ok(s) => {
                pretty.push_str(&format!("start {} (simplex {:?})\n{}", qv(&st.v), st.simplex, s.pretty()));
                series.push(s);
            }
            Err(e) => warnings.push(format!("start {}: {e}", qv(&st.v))),
        }
    }
    for w in &warnings {
        pretty.push_str(&format!("warning: {w}\n"));
    }
    Ok((json!({ "series": series, "warnings": warnings }), pretty))
}

fn cmd_check(ops: &Path, series: &Path, safe: Option<i64>) -> Out {
    let text = read(ops)?;
    let ops: Vec<WeylOp> = match serde_json::from_str::<SystemSpec>(&text) {
        Ok(sys) => sys.all_ops(),
        Err(_) => serde_json::from_str(&text).map_err(input(ops))?,
    };
    let s: TruncatedSeries = read_json(series)?;
    let rep = annihilation_check(&ops, &s, safe.unwrap_or(s.order - 3));
    Ok((to_value(&rep), rep.pretty()))
}

fn cmd_classify(context: &Path, beta: Option<String>) -> Out {
    let text = read(context)?;
    let (ctx, default_beta) = match serde_json::from_str::<GaleContext>(&text) {
        Ok(ctx) => {
            ctx.verify()?;
            (ctx, None)
        }
        Err(_) => {
            let p = load_problem(context)?;
            let b = p.beta.clone();
            (p.ctx, Some(b))
        }
    };
    let beta = match (beta, default_beta) {
        (Some(b), _) => parse_qvec(&b)?,
        (None, Some(b)) => b,
        (None, None) => return Err(Failure::Input("--beta is required for a context file".into())),
    };
    if beta.len() != ctx.d() {
        return Err(Failure::Input(format!("beta must have {} entries", ctx.d())));
    }
    let candidates = candidate_pairs(&ctx)?;
    let arrangement = andean_arrangement_prime_level(&ctx)?;
    let rep = toral_parameter_tests(&ctx, &beta)?;
    let (resonance, resonance_note) = match resonance_and_pyramid(&ctx.a, &beta) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut pretty = format!("beta = {}\n{} candidate primes\n", qv(&beta), candidates.len());
    for c in &candidates {
        pretty.push_str(&format!(
            "  sigma {:?} omega {:?}: {}\n",
            c.sigma,
            c.omega,
            if c.toral { "toral" } else if c.mixed { "Andean" } else { "not containing I(B)" }
        ));
    }
    pretty.push_str(&format!("toral flag: {:?}\ncompletely toral flag: {:?}\n", rep.toral_flag, rep.completely_toral_flag));
    for c in &rep.certificates {
        pretty.push_str(&format!("certificate: {c}\n"));
    }
    match (&resonance, &resonance_note) {
        (Some(r), _) => pretty.push_str(&format!(
            "resonance centers: {:?}; pyramid: {}; irreducible: {}\n",
            r.centers.iter().map(|f| f.column_indices.clone()).collect::<Vec<_>>(),
            r.pyramid,
            r.irreducible
        )),
        (None, Some(n)) => pretty.push_str(&format!("resonance not computed: {n}\n")),
        _ => {}
    }
    let out = json!({
        "beta": beta.iter().map(fmt_q).collect::<Vec<_>>(),
        "candidates": candidates,
        "arrangement": arrangement,
        "flags": { "toral": rep.toral_flag, "completelyToral": rep.completely_toral_flag },
        "perGamma": rep.per_gamma,
        "certificates": rep.certificates,
        "resonance": resonance,
        "resonanceNote": resonance_note,
    });
    Ok((out, pretty))
}

fn cmd_hk(b: &Path, disc: Option<String>, samples: Option<usize>) -> Out {
    let (b, file_samples) = match serde_json::from_str::<IntMat>(&read(b)?) {
        Ok(m) => (m, None),
        Err(_) => {
            let p = load_problem(b)?;
            (p.ctx.b, p.file.bounds.samples)
        }
    };
    let samples = samples.or(file_samples).unwrap_or(DEFAULT_SAMPLES);
    let nabla = match disc.as_deref() {
        Some("quadratic") => quadratic_discriminant(),
        Some("cubic") => cubic_discriminant(),
        Some(path) => read_json::<Poly>(Path::new(path))?,
        None => match b.rows() {
            3 => quadratic_discriminant(),
            4 => cubic_discriminant(),
            n => return Err(Failure::Input(format!("no bundled discriminant in {n} variables; pass --disc"))),
        },
    };
    let f = dehomogenize_discriminant(&nabla, &b)?;
    let rep = vanish_check(&f, &b, samples)?;
    let pretty = format!(
        "seed = {SAMPLE_SEED:#x}\nreduced discriminant = {}\n{}/{} samples vanish: {}\n",
        f.display(&hypergeom::poly::var_names("z", b.cols())),
        rep.zeros,
        rep.samples,
        if rep.passed { "pass" } else { "FAIL" }
    );
    Ok((json!({ "seed": SAMPLE_SEED, "reduced": f, "report": rep }), pretty))
}

fn cmd_golden() -> Result<(Value, String, bool), Failure> {
    let reports = fixtures::golden_all()?;
    let passed = reports.iter().all(|r| r.passed);
    let pretty: String = reports.iter().map(|r| r.pretty()).collect();
    Ok((json!({ "passed": passed, "fixtures": reports }), pretty, passed))
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ']).next().unwrap_or("Error").to_string()
}

fn emit(format: Format, value: &Value, pretty: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json")),
        Format::Pretty => print!("{pretty}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut ok_code = 0;
    let result = match cli.cmd {
        Cmd::Context { problem, a, b, atilde } => cmd_context(problem, a, b, atilde),
        Cmd::Build { kind, problem } => cmd_build(kind, &problem),
        Cmd::Pi { system, golden } => cmd_pi(system, golden),
        Cmd::Shorn { problem } => cmd_shorn(&problem),
        Cmd::Series { system, order, start } => cmd_series(&system, order, start),
        Cmd::Check { ops, series, safe } => cmd_check(&ops, &series, safe),
        Cmd::Classify { context, beta } => cmd_classify(&context, beta),
        Cmd::Hk { b, disc, samples } => cmd_hk(&b, disc, samples),
        Cmd::Golden => cmd_golden().map(|(v, p, passed)| {
            if !passed {
                ok_code = 1;
            }
            (v, p)
        }),
    };
    match result {
        Ok((value, pretty)) => {
            emit(cli.format, &value, &pretty);
            ExitCode::from(ok_code)
        }
        Err(Failure::Input(msg)) => {
            println!("{}", json!({ "error": { "kind": "InvalidInput", "message": msg } }));
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            println!("{}", json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }));
            ExitCode::from(1)
        }
    }
}
