use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use galois_ext::comodule::GaloisDegree;
use galois_ext::fixtures::{self, Fixture, FixtureError};
use galois_ext::format::{self, ParseError};
use galois_ext::graded::{AlgebraPresentation, GradedAlgebra, GradedModule};
use galois_ext::harness::{self, HarnessError, Mode, Status, VerificationReport};
use galois_ext::homological::{is_n_koszul, Ext, HomologicalError, Resolution};
use galois_ext::hopf::{GradedHopf, HopfReport};
use galois_ext::linalg::Field;
use galois_ext::par;

/// Exact computations with Hopf-Galois extensions, Ext algebras and Koszulity.
#[derive(Parser)]
#[command(name = "galois-ext", version)]
struct Cli {
    /// `q` for the rationals, `fp:<p>` for a prime field
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,
    /// machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms read from a `.hopf` or `.alg` file
    Check {
        what: CheckKind,
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        max_deg: usize,
    },
    /// Minimal resolution and `Ext_A(M, M)` table
    Ext(ExtArgs),
    /// Run one of the verification procedures
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Hopf,
    Comodule,
    Galois,
}

#[derive(Args)]
struct ExtArgs {
    /// fixture id, `truncated:<n>` for k[x]/(x^n), or a path to an `.alg` file
    source: String,
    #[arg(long, default_value = "A0")]
    module: String,
    #[arg(long)]
    max_deg: Option<usize>,
    #[arg(long, default_value_t = 4)]
    hmax: usize,
    /// also test N-Koszulity for this N
    #[arg(long = "koszul")]
    koszul: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Statement {
    Thm1,
    Cor1,
    Thm3,
    Thm4,
    Lem1,
    Lem2,
    Lem4,
    Invariants,
}

#[derive(Args)]
struct VerifyArgs {
    statement: Statement,
    /// fixture id or a path to an `.alg` file
    #[arg(long, default_value = "paper-quiver")]
    fixture: String,
    #[arg(long)]
    module: Option<String>,
    #[arg(long = "N", default_value_t = 2)]
    big_n: usize,
    #[arg(long, default_value_t = 4)]
    hmax: usize,
    #[arg(long)]
    max_deg: Option<usize>,
    #[arg(long, default_value = "map")]
    mode: Mode,
    /// random samples per cell for sampled identities
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "q" | "Q" => Ok(Field::Rationals),
        _ => {
            let p = s
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("expected 'q' or 'fp:<p>', got '{s}'"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

/// Failure category, mapped to the process exit code.
enum Failure {
    Math(String),
    Input(String),
    Hypothesis(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Input(_) => 2,
            Failure::Hypothesis(_) => 3,
        }
    }
}

impl From<FixtureError> for Failure {
    fn from(e: FixtureError) -> Self {
        match e {
            FixtureError::Axioms(_) | FixtureError::Comodule(_) | FixtureError::Hopf(_) => Failure::Math(e.to_string()),
            FixtureError::Algebra(_) | FixtureError::Format(_) => Failure::Input(e.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::NoModule(_) | HarnessError::NoGalois => Failure::Input(e.to_string()),
            HarnessError::Fixture(f) => f.into(),
            HarnessError::Homological(HomologicalError::DegreeZeroNotSemisimple(_)) => Failure::Hypothesis(e.to_string()),
            e => Failure::Math(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    Failure::Input(format!("{}:{}:{}: {}", path.display(), e.line, e.col, e.msg))
}

fn default_max_deg(id: &str) -> usize {
    match id {
        "cubic-smash" => 7,
        "polynomial-smash" => 4,
        "kz2" | "kz2-trivial-module" => 0,
        _ => 5,
    }
}

fn load_fixture(id: &str, field: Field, max_deg: Option<usize>) -> Result<Fixture, Failure> {
    let top = max_deg.unwrap_or_else(|| default_max_deg(id));
    let mut fx = match id {
        "paper-quiver" => fixtures::paper_quiver(field, top)?,
        "kz2" | "kz2-trivial-module" => fixtures::group_algebra(2, field)?,
        "cubic-smash" => fixtures::truncated_cubic_smash(field, top)?,
        "polynomial-smash" => fixtures::polynomial_smash(field, top)?,
        path if path.ends_with(".alg") => {
            let p = Path::new(path);
            let file = format::parse_alg(&read(p)?).map_err(|e| parse_failure(p, e))?;
            return Ok(fixtures::from_alg(path, &file, field, top)?);
        }
        other => {
            return Err(Failure::Input(format!(
                "unknown fixture '{other}' (expected paper-quiver, kz2, kz2-trivial-module, cubic-smash, polynomial-smash or an .alg file)"
            )))
        }
    };
    fx.id = id.to_string();
    Ok(fx)
}

fn default_module(fixture: &str) -> &'static str {
    if fixture == "kz2-trivial-module" {
        "k"
    } else {
        "A"
    }
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn galois_rows(degrees: &[GaloisDegree]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["degree".into(), "A(x)_B A".into(), "A(x)H".into(), "rank".into(), "bijective".into()]];
    for g in degrees {
        rows.push(vec![
            g.degree.to_string(),
            g.source_dim.to_string(),
            g.target_dim.to_string(),
            g.rank.to_string(),
            g.bijective().to_string(),
        ]);
    }
    rows
}

fn axiom_rows(r: &HopfReport) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["axiom".into(), "result".into(), "witness".into()]];
    for c in &r.checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        rows.push(vec![c.axiom.clone(), verdict.into(), c.witness.clone().unwrap_or_default()]);
    }
    rows
}

fn check(kind: CheckKind, path: &Path, field: Field, max_deg: usize, json_out: bool) -> Result<(), Failure> {
    let text = read(path)?;
    let is_hopf_file = path.extension().is_some_and(|e| e == "hopf");
    if is_hopf_file {
        if !matches!(kind, CheckKind::Hopf) {
            return Err(Failure::Input("a .hopf file supports only 'check hopf'".into()));
        }
        let h = format::parse_hopf(&text, field).map_err(|e| parse_failure(path, e))?;
        let r = h.verify_axioms();
        let semisimple = h.is_semisimple().ok();
        let cosemisimple = h.is_cosemisimple().ok();
        if json_out {
            let v = json!({"file": path, "field": field.to_string(), "dim": h.dim(), "report": r,
                "semisimple": semisimple, "cosemisimple": cosemisimple});
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        } else {
            println!("hopf algebra {}  field {field}  dim {}", path.display(), h.dim());
            print!("{}", table(&axiom_rows(&r)));
            println!("semisimple: {semisimple:?}  cosemisimple: {cosemisimple:?}");
        }
        return if r.passed() { Ok(()) } else { Err(Failure::Math("Hopf axioms fail".into())) };
    }

    let file = format::parse_alg(&text).map_err(|e| parse_failure(path, e))?;
    let Some(hopf) = &file.hopf else {
        return Err(Failure::Input(format!("{}: no Hopf sections", path.display())));
    };
    let images = hopf.images(field).map_err(Failure::Input)?;
    let rp = file.presentation.realize_full(field, max_deg).map_err(|e| Failure::Input(e.to_string()))?;
    let gh = GradedHopf::from_generators(&rp, &images).map_err(|e| Failure::Math(e.to_string()))?;
    let r = gh.verify_axioms();
    let dims = gh.algebra().dims().to_vec();
    if matches!(kind, CheckKind::Hopf) || !r.passed() {
        if json_out {
            let v = json!({"file": path, "field": field.to_string(), "max_deg": max_deg, "dims": dims, "report": r});
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        } else {
            println!("graded hopf algebra {}  field {field}  degrees <= {max_deg}  dims {dims:?}", path.display());
            print!("{}", table(&axiom_rows(&r)));
        }
        return if r.passed() { Ok(()) } else { Err(Failure::Math("Hopf axioms fail".into())) };
    }
    let fx = fixtures::from_alg(&path.display().to_string(), &file, field, max_deg)?;
    let gd = fx.galois();
    let b_dims = gd.b.algebra.dims().to_vec();
    let degrees = gd.galois_degrees();
    let identities = gd.verify_translation_identities();
    let galois_ok = degrees.iter().all(GaloisDegree::bijective) && identities.passed();
    if json_out {
        let mut v = json!({"file": path, "field": field.to_string(), "max_deg": max_deg, "a_dims": dims,
            "h_dim": fx.hopf().dim(), "b_dims": b_dims, "b_commutative": gd.b.algebra.is_commutative()});
        if matches!(kind, CheckKind::Galois) {
            v["galois"] = json!(degrees);
            v["translation_identities"] = json!(identities);
        }
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("comodule algebra {}  field {field}  degrees <= {max_deg}", path.display());
        println!("A dims {dims:?}  H dim {}  B = A^coH dims {b_dims:?}", fx.hopf().dim());
        if matches!(kind, CheckKind::Galois) {
            print!("{}", table(&galois_rows(&degrees)));
            for c in &identities.checks {
                println!("{}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
            }
        }
    }
    if matches!(kind, CheckKind::Galois) && !galois_ok {
        return Err(Failure::Math("not Galois in the window".into()));
    }
    Ok(())
}

/// Ring and module for `ext`: a fixture module, `k[x]/(x^n)` or an `.alg` presentation.
fn ext_input(args: &ExtArgs, field: Field) -> Result<(String, GradedAlgebra, GradedModule), Failure> {
    let from_algebra = |a: GradedAlgebra| -> Result<(GradedAlgebra, GradedModule), Failure> {
        let m = match args.module.as_str() {
            "A0" => a.degree_zero_module(),
            "A" => a.regular_module(),
            other => return Err(Failure::Input(format!("module '{other}' unavailable here (use A or A0)"))),
        };
        Ok((a, m))
    };
    if let Some(n) = args.source.strip_prefix("truncated:") {
        let n: usize = n.parse().map_err(|_| Failure::Input(format!("bad exponent in '{}'", args.source)))?;
        let top = args.max_deg.unwrap_or(3 * n);
        let a = AlgebraPresentation::truncated_polynomial(n)
            .realize(field, top)
            .map_err(|e| Failure::Input(e.to_string()))?;
        let (a, m) = from_algebra(a)?;
        return Ok((format!("k[x]/(x^{n})"), a, m));
    }
    if args.source.ends_with(".alg") {
        let p = Path::new(&args.source);
        let file = format::parse_alg(&read(p)?).map_err(|e| parse_failure(p, e))?;
        let a = file
            .presentation
            .realize(field, args.max_deg.unwrap_or(5))
            .map_err(|e| Failure::Input(e.to_string()))?;
        let (a, m) = from_algebra(a)?;
        return Ok((args.source.clone(), a, m));
    }
    let fx = load_fixture(&args.source, field, args.max_deg)?;
    let m = fx
        .module(&args.module)
        .ok_or_else(|| Failure::Input(format!("fixture has no module named {}", args.module)))?
        .clone();
    Ok((args.source.clone(), fx.algebra().clone(), m))
}

fn ext(args: &ExtArgs, field: Field, json_out: bool) -> Result<(), Failure> {
    let (name, a, m) = ext_input(args, field)?;
    let math = |e: HomologicalError| Failure::Math(e.to_string());
    let top = a.top() as i64;
    let res = Resolution::new(&a, &m, args.hmax + 1).map_err(math)?;
    let ext = Ext::compute(&res, &m, args.hmax, 0, top).map_err(math)?;
    let t = ext.table();
    let generators: Vec<Vec<usize>> = (0..=args.hmax).map(|n| res.generator_degrees(n)).collect();
    let koszul = args.koszul.map(|big_n| is_n_koszul(&a, big_n, args.hmax)).transpose().map_err(math)?;
    if json_out {
        let v = json!({"algebra": name, "module": args.module, "field": field.to_string(),
            "window": {"n_max": args.hmax, "d_max": a.top()}, "algebra_dims": a.dims(),
            "ext": t, "generator_degrees": generators, "koszul": koszul});
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("Ext_A(M, M)  A = {name}  M = {}  field {field}  window n <= {}, d <= {top}", args.module, args.hmax);
        let mut rows = vec![std::iter::once("n \\ d".to_string()).chain((0..=top).map(|d| d.to_string())).collect::<Vec<_>>()];
        for n in 0..=args.hmax {
            let mut row = vec![n.to_string()];
            row.extend((0..=top).map(|d| t.get(n, d).map_or("?".to_string(), |x| x.to_string())));
            rows.push(row);
        }
        print!("{}", table(&rows));
        println!("'?' marks cells outside the certified window");
        println!("generator degrees of the minimal resolution (only degrees <= {top} are visible):");
        for (n, g) in generators.iter().enumerate() {
            println!("  P_{n}: {g:?}");
        }
        if let Some(c) = &koszul {
            println!(
                "{}-Koszul: {:?}  expected degrees {:?}  witness {:?}",
                c.n_koszul, c.verdict, c.expected_degrees, c.witness
            );
            for v in &c.hypothesis_violations {
                println!("  hypothesis: {v}");
            }
        }
    }
    Ok(())
}

fn print_report(r: &VerificationReport) {
    let module = r.module.as_deref().map(|m| format!("  module {m}")).unwrap_or_default();
    let mode = r.mode.as_deref().map(|m| format!("  mode {m}")).unwrap_or_default();
    println!(
        "{}  fixture {}{module}  field {}  window n <= {}, d <= {}{mode}",
        r.tag, r.fixture, r.field, r.window.n_max, r.window.d_max
    );
    let mut rows = vec![vec!["check".into(), "result".into(), "detail".into()]];
    for c in &r.checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        rows.push(vec![c.name.clone(), verdict.into(), c.detail.clone().unwrap_or_default()]);
    }
    print!("{}", table(&rows));
    for h in &r.hypothesis_violations {
        println!("hypothesis violated: {h}");
    }
    for (k, v) in &r.data {
        println!("{k}: {v}");
    }
    let status = match r.status() {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::HypothesisFailure => "HYPOTHESIS FAILURE",
    };
    println!("{status} in {} ms", r.timing_ms);
}

fn verify(args: &VerifyArgs, field: Field, json_out: bool) -> Result<(), Failure> {
    let fx = load_fixture(&args.fixture, field, args.max_deg)?;
    let module = args.module.clone().unwrap_or_else(|| default_module(&args.fixture).to_string());
    let (n, m) = (args.hmax, module.as_str());
    let r = match args.statement {
        Statement::Thm1 => harness::verify_thm1(&fx, m, n, args.mode)?,
        Statement::Cor1 => harness::verify_cor1(&fx, m, n, args.samples)?,
        Statement::Thm3 => harness::verify_thm3(&fx, m, n)?,
        Statement::Thm4 => harness::verify_thm4(&fx, args.big_n, n)?,
        Statement::Lem1 => harness::verify_lem1(&fx, m, n)?,
        Statement::Lem2 => harness::verify_lem2(&fx, m, n, args.samples)?,
        Statement::Lem4 => harness::verify_lem4_ii(&fx, m, n)?,
        Statement::Invariants => harness::verify_invariants_identity(&fx, m, n, args.samples)?,
    };
    if json_out {
        println!("{}", r.to_json());
    } else {
        print_report(&r);
    }
    match r.status() {
        Status::Pass => Ok(()),
        Status::Fail => Err(Failure::Math(r.witnesses.join("; "))),
        Status::HypothesisFailure => Err(Failure::Hypothesis(r.hypothesis_violations.join("; "))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    par::init_from_env();
    let result = match &cli.command {
        Command::Check { what, file, max_deg } => check(*what, file, cli.field, *max_deg, cli.json),
        Command::Ext(args) => ext(args, cli.field, cli.json),
        Command::Verify(args) => verify(args, cli.field, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Math(m) => format!("failure: {m}"),
                Failure::Input(m) => format!("error: {m}"),
                Failure::Hypothesis(m) => format!("hypothesis violated: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
