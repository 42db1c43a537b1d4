use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use padic_riesz::quadform::{
    epsilon, hilbert, rho_factor, rho_oracle, weil_gamma, weil_gamma_form, SquareClass,
};
use padic_riesz::report::{self, Format, Suite, SuiteConfig};
use padic_riesz::scalars::parse_rational;
use padic_riesz::schwartz::builtin;
use padic_riesz::zeta::{zeta, zeta_oracle_float, Convention, RatFunJson, ZetaRequest};
use padic_riesz::{Error, ExtScalar, QuadraticForm, RationalFunctionT, TestFunction};

const REPORT_DIR_VAR: &str = "PADIC_RIESZ_REPORT_DIR";
const ORACLE_TOLERANCE: f64 = 1e-5;

#[derive(Parser)]
#[command(name = "padic-riesz", version, about = "Exact p-adic zeta functions, Riesz kernels and their identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local zeta function of a form against a test function
    Zeta(ZetaArgs),
    /// Hilbert symbol (a,b)_p
    Hilbert(HilbertArgs),
    /// Weil constant of a·x² or of a diagonal form
    Gamma(GammaArgs),
    /// Tate ρ-factor of a quadratic character
    Rho(RhoArgs),
    /// Fourier transform of a test function, as test-function JSON
    Fourier(FourierArgs),
    /// Certified zeta function against the floating-point Riemann sum
    Oracle(OracleArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value_t = padic_riesz::DEFAULT_DEPTH_BOUND)]
    depth: u32,
    #[arg(long, value_enum, default_value_t = Out::Text)]
    out: Out,
    /// Directory for report files
    #[arg(long, env = REPORT_DIR_VAR)]
    report_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Out {
    Json,
    Csv,
    Text,
}

impl From<Out> for Format {
    fn from(o: Out) -> Format {
        match o {
            Out::Json => Format::Json,
            Out::Csv => Format::Csv,
            Out::Text => Format::Text,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ExponentArg {
    Plain,
    Shifted,
}

impl From<ExponentArg> for Convention {
    fn from(e: ExponentArg) -> Convention {
        match e {
            ExponentArg::Plain => Convention::Plain,
            ExponentArg::Shifted => Convention::Shifted,
        }
    }
}

#[derive(Args)]
struct FormArgs {
    /// Comma-separated diagonal coefficients; defaults to x₁² − εx₂² − px₃² + εpx₄²
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    /// Builtin test function (unit_ball, lizorkin0, shifted_box) or a JSON file
    #[arg(long, default_value = "unit_ball")]
    phi: String,
    /// Square class of the character: 1, eps, p, eps*p, or a rational
    #[arg(long, default_value = "1")]
    beta: String,
    #[arg(long, value_enum, default_value_t = ExponentArg::Shifted)]
    exponent: ExponentArg,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: FormArgs,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    common: Common,
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    common: Common,
    /// Coefficient `a` of a·x²
    #[arg(allow_hyphen_values = true, conflicts_with = "form")]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
}

#[derive(Args)]
struct RhoArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "1")]
    beta: String,
    /// Also evaluate at this real `s` and compare with the oracle
    #[arg(long)]
    s: Option<f64>,
    #[arg(long, default_value_t = 9)]
    oracle_depth: u32,
}

#[derive(Args)]
struct FourierArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "unit_ball")]
    phi: String,
    /// Dimension for builtin test functions
    #[arg(long, default_value_t = 4)]
    dim: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: FormArgs,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 6)]
    oracle_depth: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// funceq, grouplaw, bernstein, fundamental, delta, logkernel, semigroup, fourier or all
    suite: String,
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    #[arg(long)]
    phi: Option<String>,
    /// Exponent pairs `a:b` separated by commas
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Seeded random corpus entries per suite
    #[arg(long, default_value_t = 2)]
    random: u64,
}

/// Outcome of a command: printable body, report stem, and whether every
/// claim held.
struct Outcome {
    body: String,
    stem: String,
    pass: bool,
}

fn parse_form(p: u64, spec: Option<&str>) -> padic_riesz::Result<QuadraticForm> {
    match spec {
        None => QuadraticForm::four_dim(p, epsilon(p) as i64),
        Some(s) => {
            let coeffs = s.split(',').map(parse_rational).collect::<padic_riesz::Result<Vec<_>>>()?;
            QuadraticForm::new(p, coeffs)
        }
    }
}

fn load_phi(spec: &str, p: u64, n: usize, depth: u32) -> padic_riesz::Result<TestFunction<ExtScalar>> {
    let path = Path::new(spec);
    let phi = if path.exists() {
        TestFunction::load(path, depth)?
    } else {
        builtin(spec, p, n)?
    };
    if phi.prime() != p {
        return Err(Error::PrimeMismatch(phi.prime(), p));
    }
    if phi.dim() != n {
        return Err(Error::DimensionMismatch(phi.dim(), n));
    }
    Ok(phi)
}

fn parse_grid(s: &str) -> padic_riesz::Result<Vec<(i64, i64)>> {
    s.split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("grid entry `{pair}` is not `a:b`")))?;
            let num = |x: &str| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("grid entry `{pair}` is not integral")))
            };
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn ratfun_json(r: &RationalFunctionT) -> Value {
    json!({ "display": r.to_string(), "ratfun": RatFunJson::from(r) })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Renders a flat record; `text` is used verbatim for `--out text`.
fn render_record(record: Map<String, Value>, out: Out, text: String) -> String {
    match out {
        Out::Json => {
            let mut s = serde_json::to_string_pretty(&Value::Object(record)).expect("record serializes");
            s.push('\n');
            s
        }
        Out::Csv => {
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(record.keys()).expect("in-memory writer");
            w.write_record(record.values().map(cell)).expect("in-memory writer");
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
        Out::Text => text,
    }
}

fn run_zeta(args: ZetaArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let form = parse_form(c.prime, args.input.form.as_deref())?;
    let phi = load_phi(&args.input.phi, c.prime, form.dim(), c.depth)?;
    let beta = SquareClass::parse(&args.input.beta, c.prime)?;
    let req = ZetaRequest::new(&form, &phi)
        .beta(beta)
        .convention(args.input.exponent.into())
        .depth_bound(c.depth);
    let res = zeta(&req)?;
    let mut rec = Map::new();
    rec.insert("prime".into(), json!(c.prime));
    rec.insert("form".into(), json!(form.label()));
    rec.insert("phi".into(), json!(args.input.phi));
    rec.insert("beta".into(), json!(beta.label()));
    rec.insert("convention".into(), json!(format!("{:?}", req.convention).to_lowercase()));
    rec.insert("value".into(), ratfun_json(&res.value));
    rec.insert("abscissa".into(), json!(res.abscissa.to_string()));
    rec.insert("method".into(), json!(format!("{:?}", res.method)));
    rec.insert("max_depth".into(), json!(res.max_depth));
    rec.insert("balls".into(), json!(res.balls));
    let text = format!("{}\n", res.value);
    Ok(Outcome {
        body: render_record(rec, c.out, text),
        stem: format!("zeta-p{}", c.prime),
        pass: true,
    })
}

fn run_hilbert(args: HilbertArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let (a, b) = (parse_rational(&args.a)?, parse_rational(&args.b)?);
    let h = hilbert(&a, &b, c.prime)?;
    let mut rec = Map::new();
    rec.insert("prime".into(), json!(c.prime));
    rec.insert("a".into(), json!(args.a));
    rec.insert("b".into(), json!(args.b));
    rec.insert("value".into(), json!(h));
    Ok(Outcome {
        body: render_record(rec, c.out, format!("{h}\n")),
        stem: format!("hilbert-p{}", c.prime),
        pass: true,
    })
}

fn run_gamma(args: GammaArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let (label, value) = match (&args.a, &args.form) {
        (Some(a), _) => (a.clone(), weil_gamma(&parse_rational(a)?, c.prime)?),
        (None, form) => {
            let f = parse_form(c.prime, form.as_deref())?;
            (f.label(), weil_gamma_form(&f)?)
        }
    };
    let mut rec = Map::new();
    rec.insert("prime".into(), json!(c.prime));
    rec.insert("input".into(), json!(label));
    rec.insert("value".into(), json!(value.to_string()));
    rec.insert("complex".into(), complex_json(value.to_complex()));
    Ok(Outcome {
        body: render_record(rec, c.out, format!("{value}\n")),
        stem: format!("gamma-p{}", c.prime),
        pass: true,
    })
}

fn run_rho(args: RhoArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let p = c.prime;
    let class = SquareClass::parse(&args.beta, p)?;
    let factor = rho_factor(class, p)?;
    let mut rec = Map::new();
    rec.insert("prime".into(), json!(p));
    rec.insert("beta".into(), json!(class.label()));
    rec.insert("value".into(), ratfun_json(&factor));
    let mut text = format!("{factor}\n");
    let mut pass = true;
    if let Some(s) = args.s {
        let exact = factor.eval_complex(Complex64::new((p as f64).powf(-s), 0.0))?;
        let approx = rho_oracle(class, p, s, args.oracle_depth)?;
        let diff = (exact - approx).norm();
        pass = diff < ORACLE_TOLERANCE;
        rec.insert("s".into(), json!(s));
        rec.insert("exact".into(), complex_json(exact));
        rec.insert("oracle".into(), complex_json(approx));
        rec.insert("difference".into(), json!(diff));
        text.push_str(&format!("s={s}: exact={exact} oracle={approx} |diff|={diff:e}\n"));
    }
    Ok(Outcome {
        body: render_record(rec, c.out, text),
        stem: format!("rho-p{p}"),
        pass,
    })
}

fn run_fourier(args: FourierArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let path = Path::new(&args.phi);
    let phi = if path.exists() {
        TestFunction::load(path, c.depth)?
    } else {
        builtin(&args.phi, c.prime, args.dim)?
    };
    let hat = phi.fourier();
    let body = match c.out {
        Out::Json | Out::Text => format!("{}\n", hat.to_json_string()),
        Out::Csv => {
            let mut rec = Map::new();
            rec.insert("prime".into(), json!(c.prime));
            rec.insert("phi".into(), json!(args.phi));
            rec.insert("fourier".into(), json!(hat.to_string()));
            render_record(rec, c.out, String::new())
        }
    };
    Ok(Outcome {
        body,
        stem: format!("fourier-p{}", c.prime),
        pass: true,
    })
}

fn run_oracle(args: OracleArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let p = c.prime;
    let form = parse_form(p, args.input.form.as_deref())?;
    let phi = load_phi(&args.input.phi, p, form.dim(), c.depth)?;
    let beta = SquareClass::parse(&args.input.beta, p)?;
    let req = ZetaRequest::new(&form, &phi)
        .beta(beta)
        .convention(args.input.exponent.into())
        .depth_bound(c.depth);
    let exact_fn = zeta(&req)?.value;
    let s = Complex64::new(args.s, 0.0);
    let exact = exact_fn.eval_complex(Complex64::new((p as f64).powf(-args.s), 0.0))?;
    let approx = zeta_oracle_float(&req, s, args.oracle_depth)?;
    let diff = (exact - approx).norm();
    let pass = diff < ORACLE_TOLERANCE;
    let mut rec = Map::new();
    rec.insert("prime".into(), json!(p));
    rec.insert("form".into(), json!(form.label()));
    rec.insert("phi".into(), json!(args.input.phi));
    rec.insert("s".into(), json!(args.s));
    rec.insert("exact".into(), complex_json(exact));
    rec.insert("oracle".into(), complex_json(approx));
    rec.insert("difference".into(), json!(diff));
    rec.insert("pass".into(), json!(pass));
    let text = format!(
        "{} s={}: exact={exact} oracle={approx} |diff|={diff:e}\n",
        if pass { "PASS" } else { "FAIL" },
        args.s
    );
    Ok(Outcome {
        body: render_record(rec, c.out, text),
        stem: format!("oracle-p{p}"),
        pass,
    })
}

fn run_verify(args: VerifyArgs) -> padic_riesz::Result<Outcome> {
    let c = &args.common;
    let p = c.prime;
    padic_riesz::quadform::check_odd_prime(p)?;
    let mut cfg = SuiteConfig::new(p);
    cfg.depth_bound = c.depth;
    cfg.random = args.random;
    if let Some(f) = &args.form {
        cfg.form = Some(parse_form(p, Some(f))?);
    }
    if let Some(spec) = &args.phi {
        let n = cfg.form.as_ref().map_or(4, QuadraticForm::dim);
        cfg.phi = Some((spec.clone(), load_phi(spec, p, n, c.depth)?));
    }
    if let Some(g) = &args.grid {
        cfg.grid = parse_grid(g)?;
    }
    let claims = if args.suite == "all" {
        report::run_all(&cfg)?
    } else {
        report::run_suite(Suite::parse(&args.suite)?, &cfg)?
    };
    let pass = report::passed(&claims);
    if !pass {
        for bad in claims.iter().filter(|x| !x.equal) {
            eprintln!(
                "mismatch {} p={} form=[{}] phi={}\n  lhs: {}\n  rhs: {}",
                bad.id, bad.prime, bad.form, bad.witness, bad.lhs, bad.rhs
            );
        }
    }
    Ok(Outcome {
        body: report::render(&claims, c.out.into()),
        stem: format!("verify-{}-p{p}", args.suite),
        pass,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Unsupported(_) | Error::DepthExceeded(_) | Error::RhoSignUnresolved(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match cli.command {
        Command::Zeta(a) => (a.common.clone(), run_zeta(a)),
        Command::Hilbert(a) => (a.common.clone(), run_hilbert(a)),
        Command::Gamma(a) => (a.common.clone(), run_gamma(a)),
        Command::Rho(a) => (a.common.clone(), run_rho(a)),
        Command::Fourier(a) => (a.common.clone(), run_fourier(a)),
        Command::Oracle(a) => (a.common.clone(), run_oracle(a)),
        Command::Verify(a) => (a.common.clone(), run_verify(a)),
    };
    match result {
        Ok(out) => {
            print!("{}", out.body);
            if let Some(dir) = &common.report_dir {
                let ext = Format::from(common.out).extension();
                let path = dir.join(format!("{}.{ext}", out.stem));
                if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, &out.body)) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
