use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use omvals::clibench::{
    default_cases, ex1, ex2, ex3, ex4, ex5, is_prime, naive_value, run_bench, write_csv, BenchCase, Instance, Suite,
};
use omvals::config::Config;
use omvals::diffdisc::{different_valuation_with, normalize_nonmonic_disc, p_discriminant_report};
use omvals::montes::montes_factorize_with;
use omvals::polyz::{parse_poly, PIntPoly, Val};
use omvals::presultant::{normalize_nonmonic_res, p_resultant_with};
use omvals::Error;

#[derive(Parser)]
#[command(name = "omvals", version, about = "p-adic valuations of discriminants and resultants via OM representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// v_p of the discriminant of a monic polynomial
    Pdisc(PdiscArgs),
    /// v_p of the resultant of two monic polynomials
    Pres(PresArgs),
    /// OM representations of the p-adic factors
    Omrep(OmrepArgs),
    /// Local different of one factor
    Different(DifferentArgs),
    /// Reproduce the example tables
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// Prime
    #[arg(short = 'p', long = "prime")]
    p: u64,
    /// Print every Newton polygon to stderr
    #[arg(long)]
    debug_polygons: bool,
}

#[derive(Args, Default)]
struct ExampleParams {
    /// Generated example: ex1, ex2, ex3 (one polynomial) or ex4, ex5 (a pair)
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
}

#[derive(Args)]
struct PdiscArgs {
    #[command(flatten)]
    common: Common,
    /// File holding the polynomial (text grammar or JSON coefficient list)
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
    /// Polynomial expression
    #[arg(long)]
    poly: Option<String>,
    #[command(flatten)]
    ex: ExampleParams,
    #[arg(long)]
    json: bool,
    /// Cross-check against the naive discriminant
    #[arg(long)]
    oracle: bool,
    /// Skip the squarefree pre-check and rely on the index bound alone
    #[arg(long)]
    paper_guard: bool,
    /// Make a non-monic input monic first and correct the valuation
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct PresArgs {
    #[command(flatten)]
    common: Common,
    /// First polynomial (expression or file)
    #[arg(long = "f")]
    f: Option<String>,
    /// Second polynomial (expression or file)
    #[arg(long = "g")]
    g: Option<String>,
    #[command(flatten)]
    ex: ExampleParams,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct OmrepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "f")]
    f: Option<String>,
    #[command(flatten)]
    ex: ExampleParams,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DifferentArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "f")]
    f: Option<String>,
    #[command(flatten)]
    ex: ExampleParams,
    /// Index of the factor, in the order printed by `omrep`
    #[arg(long, default_value_t = 0)]
    rep: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    suite: String,
    /// Prime for custom rows (defaults to the desk-scale table rows)
    #[arg(short = 'p', long = "prime")]
    p: Option<u64>,
    /// Family parameters for custom rows, comma separated (n, m or j)
    #[arg(long, value_delimiter = ',')]
    params: Vec<usize>,
    /// For ex5: i and j of each pair, e.g. --pairs 5:6,6:7
    #[arg(long, value_delimiter = ',')]
    pairs: Vec<String>,
    /// Output path (stdout when absent)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also time the naive oracle
    #[arg(long)]
    with_naive: bool,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::ParamOutOfRange(_) => 2,
            Error::NotMonic | Error::ZeroLeadingCoefficient => 3,
            _ => 1,
        };
        let mut msg = e.to_string();
        if code == 3 {
            msg.push_str(" (rerun with --normalize to make the input monic)");
        }
        Failure { code, msg }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Outcome of a command: an infinite value exits with status 4.
enum Outcome {
    Done,
    Infinite,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infinite) => ExitCode::from(4),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.cmd {
        Cmd::Pdisc(a) => pdisc(a),
        Cmd::Pres(a) => pres(a),
        Cmd::Omrep(a) => omrep(a),
        Cmd::Different(a) => different(a),
        Cmd::Bench(a) => bench(a),
    }
}

fn config(common: &Common) -> CliResult<Config> {
    if !is_prime(common.p) {
        return Err(Failure::new(2, format!("{} is not prime", common.p)));
    }
    let mut cfg = Config::from_env()?;
    cfg.debug_polygons = common.debug_polygons;
    Ok(cfg)
}

fn read_poly_file(path: &Path) -> CliResult<PIntPoly> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    Ok(parse_poly(text.trim())?)
}

/// A polynomial argument: the path of an existing file, or an expression.
fn poly_arg(s: &str) -> CliResult<PIntPoly> {
    let path = Path::new(s);
    if path.is_file() {
        read_poly_file(path)
    } else {
        Ok(parse_poly(s)?)
    }
}

fn need(v: Option<usize>, name: &str) -> CliResult<usize> {
    v.ok_or_else(|| Failure::new(2, format!("--{name} is required for this example")))
}

fn example(p: u64, ex: &ExampleParams) -> CliResult<Option<Instance>> {
    let Some(id) = &ex.example else { return Ok(None) };
    let suite: Suite = id.parse()?;
    let inst = match suite {
        Suite::Ex1 => Instance::Disc(ex1(p, need(ex.n, "n")?)?),
        Suite::Ex2 => Instance::Disc(ex2(p, need(ex.m, "m")?)?),
        Suite::Ex3 => Instance::Disc(ex3(p, need(ex.j, "j")?)?),
        Suite::Ex4 => {
            let (f, g) = ex4(p, need(ex.m, "m")?)?;
            Instance::Res(f, g)
        }
        Suite::Ex5 => {
            let (f, g) = ex5(p, need(ex.i, "i")?, need(ex.j, "j")?)?;
            Instance::Res(f, g)
        }
    };
    Ok(Some(inst))
}

fn single_poly(p: u64, given: Option<&str>, ex: &ExampleParams) -> CliResult<PIntPoly> {
    match (given, example(p, ex)?) {
        (Some(s), None) => poly_arg(s),
        (None, Some(Instance::Disc(g))) => Ok(g),
        (None, Some(Instance::Res(..))) => Err(Failure::new(2, "this example produces a pair; use pres")),
        (None, None) => Err(Failure::new(2, "no polynomial given")),
        (Some(_), Some(_)) => Err(Failure::new(2, "give either a polynomial or --example, not both")),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).unwrap());
}

fn check_oracle(engine: Val, oracle: Val) -> CliResult<()> {
    if engine != oracle {
        return Err(Failure::new(1, format!("oracle mismatch: engine {engine}, naive {oracle}")));
    }
    Ok(())
}

fn pdisc(a: PdiscArgs) -> CliResult<Outcome> {
    let cfg = config(&a.common)?;
    let p = a.common.p;
    let given = match (&a.file, &a.poly) {
        (Some(path), None) => Some(read_poly_file(path)?),
        (None, Some(s)) => Some(parse_poly(s)?),
        (None, None) => None,
        _ => return Err(Failure::new(2, "give either -f or --poly")),
    };
    let g = match given {
        Some(g) if a.ex.example.is_none() => g,
        Some(_) => return Err(Failure::new(2, "give either a polynomial or --example, not both")),
        None => single_poly(p, None, &a.ex)?,
    };
    let (work, offset) = if a.normalize { normalize_nonmonic_disc(&g, p)? } else { (g.clone(), 0) };
    let report = p_discriminant_report(&work, p, &cfg, a.paper_guard)?;
    let r = &report.result;
    let v_disc = r.v_disc.add_int(-offset);
    let oracle = if a.oracle {
        let v = naive_value(&Instance::Disc(g), p);
        check_oracle(v_disc, v)?;
        Some(v)
    } else {
        None
    };
    if a.json {
        let mut out = json!({
            "p": p,
            "sum_local_disc": r.sum_local_disc,
            "ind": r.ind,
            "v_disc": v_disc,
            "offset": offset,
        });
        if let Some(v) = oracle {
            out["oracle"] = json!(v);
        }
        print_json(&out);
    } else if v_disc.is_inf() {
        println!("infinity");
    } else {
        println!("sum_local_disc: {}", r.sum_local_disc);
        println!("ind_p: {}", r.ind);
        if offset != 0 {
            println!("normalization offset: {offset}");
        }
        println!("v_disc: {v_disc}");
        if let Some(v) = oracle {
            println!("oracle: {v}");
        }
    }
    Ok(if v_disc.is_inf() { Outcome::Infinite } else { Outcome::Done })
}

fn pres(a: PresArgs) -> CliResult<Outcome> {
    let cfg = config(&a.common)?;
    let p = a.common.p;
    let (f, g) = match (&a.f, &a.g, example(p, &a.ex)?) {
        (Some(f), Some(g), None) => (poly_arg(f)?, poly_arg(g)?),
        (None, None, Some(Instance::Res(f, g))) => (f, g),
        (None, None, Some(Instance::Disc(_))) => {
            return Err(Failure::new(2, "this example is a single polynomial; use pdisc"))
        }
        _ => return Err(Failure::new(2, "give --f and --g, or --example")),
    };
    let (fw, gw, offset) = if a.normalize { normalize_nonmonic_res(&f, &g, p)? } else { (f.clone(), g.clone(), 0) };
    let v = p_resultant_with(&fw, &gw, p, None, &cfg)?.add_int(offset);
    let oracle = if a.oracle {
        let o = naive_value(&Instance::Res(f, g), p);
        check_oracle(v, o)?;
        Some(o)
    } else {
        None
    };
    if a.json {
        let mut out = json!({ "p": p, "v_res": v, "offset": offset });
        if let Some(o) = oracle {
            out["oracle"] = json!(o);
        }
        print_json(&out);
    } else {
        println!("{v}");
        if let Some(o) = oracle {
            println!("oracle: {o}");
        }
    }
    Ok(if v.is_inf() { Outcome::Infinite } else { Outcome::Done })
}

fn omrep(a: OmrepArgs) -> CliResult<Outcome> {
    let cfg = config(&a.common)?;
    let p = a.common.p;
    let f = single_poly(p, a.f.as_deref(), &a.ex)?;
    let fac = montes_factorize_with(&f, p, None, &cfg)?;
    if a.json {
        print_json(&serde_json::to_value(&fac).unwrap());
        return Ok(Outcome::Done);
    }
    println!("ind_p: {}", fac.ind);
    for (k, rep) in fac.reps.iter().enumerate() {
        let inv = &rep.invariants;
        println!(
            "rep {k}: depth {}, e {}, f {}, mu {}, ind {}, conductor {}, exp {}, h_phi {}",
            inv.depth, inv.e, inv.f, inv.mu, inv.ind, inv.conductor, inv.exp, rep.h_phi
        );
        let t = &rep.omtype;
        println!("  level 0: f {}", t.f0());
        for (i, l) in t.levels.iter().enumerate() {
            println!("  level {}: deg phi {}, slope -{}/{}, f {}", i + 1, l.m, l.h, l.e, l.f);
        }
        println!("  phi: {}", rep.phi());
    }
    Ok(Outcome::Done)
}

fn different(a: DifferentArgs) -> CliResult<Outcome> {
    let cfg = config(&a.common)?;
    let p = a.common.p;
    let f = single_poly(p, a.f.as_deref(), &a.ex)?;
    let fac = montes_factorize_with(&f, p, None, &cfg)?;
    let rep = fac
        .reps
        .get(a.rep)
        .ok_or_else(|| Failure::new(2, format!("no factor {} (found {})", a.rep, fac.reps.len())))?;
    let d = different_valuation_with(&f, rep, &cfg)?;
    if a.json {
        print_json(&serde_json::to_value(&d).unwrap());
    } else {
        println!("e: {}", d.e);
        println!("f: {}", d.f);
        println!("rho: {}", d.rho);
        println!("diff_exponent: {}", d.diff_exponent);
        println!("local_disc_valuation: {}", d.local_disc_valuation);
    }
    Ok(Outcome::Done)
}

fn bench(a: BenchArgs) -> CliResult<Outcome> {
    let suite: Suite = a.suite.parse()?;
    Config::from_env()?;
    let cases: Vec<BenchCase> = match a.p {
        None => default_cases(suite),
        Some(p) => {
            if !is_prime(p) {
                return Err(Failure::new(2, format!("{p} is not prime")));
            }
            if suite == Suite::Ex5 {
                a.pairs
                    .iter()
                    .map(|s| {
                        let (i, j) = s
                            .split_once(':')
                            .and_then(|(i, j)| Some((i.parse().ok()?, j.parse().ok()?)))
                            .ok_or_else(|| Failure::new(2, format!("bad pair {s:?}, expected i:j")))?;
                        Ok(BenchCase::pair(p, i, j))
                    })
                    .collect::<CliResult<_>>()?
            } else {
                a.params.iter().map(|&x| BenchCase::new(suite, p, x)).collect()
            }
        }
    };
    if cases.is_empty() {
        return Err(Failure::new(2, "no rows selected"));
    }
    let rows = run_bench(&cases, a.with_naive)?;
    match &a.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
            write_csv(&rows, file)?;
        }
        None => write_csv(&rows, std::io::stdout())?,
    }
    if let Some(r) = rows.iter().find(|r| !r.agrees()) {
        return Err(Failure::new(
            1,
            format!("oracle mismatch on {} p={} deg {}: engine {} naive {:?}", r.example, r.p, r.deg, r.value, r.naive_value),
        ));
    }
    Ok(Outcome::Done)
}
