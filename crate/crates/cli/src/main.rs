use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cfree::condexp::{efree_resolvent, rqce_resolvent, CondExp};
use cfree::cumulants::{boolean_from_moments, cfree_from_two_moments, free_from_moments, State};
use cfree::denoise::{condexp_verify, distributions_of_poly, l2_project, weighted_state};
use cfree::engine::poly_distribution;
use cfree::linearize::linearize;
use cfree::multiplicative::sigma_report;
use cfree::ncpoly::parse_poly;
use cfree::oracle::{SpecInput, TwoStateSpec};
use cfree::partitions::{enumerate_interval, enumerate_irreducible, enumerate_nc};
use cfree::suites::{run_suite, SUITES};
use cfree::{Error, NCPolynomial, Word, GQ};

/// Exact moments, cumulants and conditional expectations of polynomials in
/// two c-free variables x and y.
#[derive(Parser)]
#[command(name = "cfree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Psi,
    Phi,
}

impl From<StateArg> for State {
    fn from(s: StateArg) -> State {
        match s {
            StateArg::Psi => State::Psi,
            StateArg::Phi => State::Phi,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Boolean,
    Free,
    Cfree,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionClass {
    Nc,
    Interval,
    Irreducible,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of a polynomial without constant term; shift constants out by hand.
    Moments {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "psi")]
        state: StateArg,
        /// Number of moments.
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Boolean, free or c-free cumulants of a polynomial (default: x).
    Cumulants {
        #[arg(long, default_value = "x")]
        poly: String,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// State for Boolean cumulants; free cumulants use ψ, c-free ones both.
        #[arg(long, value_enum, default_value = "psi")]
        state: StateArg,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// E^ψ (state psi) or rE^φ (state phi) onto the algebra of x.
    Condexp {
        /// A word in X and Y, such as XYYX.
        #[arg(long, conflicts_with = "resolvent")]
        word: Option<String>,
        /// Expand the resolvent of --poly instead of a single word.
        #[arg(long, requires = "poly")]
        resolvent: bool,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "psi")]
        state: StateArg,
        /// Number of powers of --poly in resolvent mode.
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Conditional expectation of a polynomial in x given --poly.
    Denoise {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        spec: PathBuf,
        /// Polynomial g(x) to project.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Polynomial f(x) weighting ψ; reports the moments of --poly in both states.
        #[arg(long)]
        weight: Option<String>,
        /// Moments reported with --weight.
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Also certify orthogonality against powers up to this exponent.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Σ-transforms of x, y and xy with the multiplicativity residual.
    Sigma {
        #[arg(long)]
        spec: PathBuf,
        /// Number of moments used; the series have one coefficient less.
        #[arg(long)]
        order: usize,
    },
    /// Enumerates partitions of {1, ..., n}.
    Partitions {
        #[arg(long, value_enum)]
        enumerate: PartitionClass,
        #[arg(long)]
        n: usize,
    },
    /// Runs a verification suite, or all of them.
    Verify { suite: String },
}

enum Output {
    Json(String),
    Series { key: &'static str, values: Vec<GQ>, format: Format },
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::usage(format!("cannot read {}: {e}", path.display()))
}

/// Loads a spec, raising its order to `required` when the marginals allow.
fn load_spec(path: &Path, required: usize) -> Result<TwoStateSpec, Error> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let mut input: SpecInput =
        serde_json::from_str(&text).map_err(|e| Error::parse(0, format!("invalid spec JSON: {e}")))?;
    input.order = input.order.max(required);
    TwoStateSpec::from_input(&input)
}

fn poly(text: &str) -> Result<NCPolynomial, Error> {
    parse_poly(text)
}

fn degree(p: &NCPolynomial) -> usize {
    p.degree().unwrap_or(0).max(1)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Error> {
    serde_json::to_string(value).map_err(|e| Error::internal(e.to_string()))
}

fn moments(p: &str, spec: &Path, state: StateArg, order: usize, format: Format) -> Result<Output, Error> {
    let p = poly(p)?;
    let spec = load_spec(spec, order * degree(&p))?;
    let values = poly_distribution(&spec, &p, state.into(), order)?.values;
    Ok(Output::Series { key: "moments", values, format })
}

fn cumulants(p: &str, spec: &Path, kind: Kind, state: StateArg, order: usize, format: Format) -> Result<Output, Error> {
    let p = poly(p)?;
    let spec = load_spec(spec, order * degree(&p))?;
    let m = |s: State| poly_distribution(&spec, &p, s, order).map(|m| m.values);
    let values = match kind {
        Kind::Boolean => boolean_from_moments(&m(state.into())?),
        Kind::Free => free_from_moments(&m(State::Psi)?),
        Kind::Cfree => cfree_from_two_moments(&m(State::Phi)?, &free_from_moments(&m(State::Psi)?)),
    };
    Ok(Output::Series { key: "cumulants", values, format })
}

#[derive(Serialize)]
struct ResolventReport {
    /// Coefficient `k` is the conditional expectation of `Pᵏ`.
    powers: Vec<String>,
}

fn condexp(word: Option<&str>, p: Option<&str>, spec: &Path, state: StateArg, order: usize) -> Result<Output, Error> {
    if let Some(word) = word {
        let w = Word::parse(word).ok_or_else(|| Error::parse(0, format!("{word:?} is not a word in X and Y")))?;
        let spec = load_spec(spec, w.len().max(1))?;
        let mut ce = CondExp::new(&spec);
        let result = match state {
            StateArg::Psi => ce.efree_result(&w)?,
            StateArg::Phi => ce.rqce_result(&w)?,
        };
        return to_json(&result).map(Output::Json);
    }
    let Some(p) = p else {
        return Err(Error::usage("condexp needs --word or --resolvent --poly"));
    };
    let p = poly(p)?;
    let lin = linearize(&p)?;
    let m = lin.degree();
    let z_order = order * m;
    let spec = load_spec(spec, z_order + 1)?;
    let (a, b) = (lin.a_series(z_order), lin.b_series(z_order));
    let series = match state {
        StateArg::Psi => efree_resolvent(&spec, &a, &b, z_order)?.subordinated,
        StateArg::Phi => rqce_resolvent(&spec, &a, &b, z_order)?,
    };
    let (u, v) = (lin.u(), lin.v());
    let powers = (0..=order)
        .map(|k| {
            let c = series.coeff(k * m);
            let mut acc = NCPolynomial::zero();
            for (i, ui) in u.iter().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&c.get(i, j).scale(&(ui * vj)));
                }
            }
            acc.to_string()
        })
        .collect();
    to_json(&ResolventReport { powers }).map(Output::Json)
}

#[derive(Serialize)]
struct DenoiseReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_moments: Option<Vec<GQ>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi_moments: Option<Vec<GQ>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<GQ>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residuals: Option<Vec<GQ>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

struct DenoiseArgs<'a> {
    poly: &'a str,
    spec: &'a Path,
    target: Option<&'a str>,
    degree: usize,
    weight: Option<&'a str>,
    order: usize,
    check: Option<usize>,
}

fn denoise(args: DenoiseArgs) -> Result<Output, Error> {
    let p = poly(args.poly)?;
    let m = degree(&p);
    let target = args.target.map(poly).transpose()?;
    let weight = args.weight.map(poly).transpose()?;
    if target.is_none() && weight.is_none() {
        return Err(Error::usage("denoise needs --target or --weight"));
    }
    let shift = |g: &Option<NCPolynomial>| g.as_ref().map_or(0, |g| g.degree().unwrap_or(0));
    let (d, k) = (args.degree, args.check.unwrap_or(0));
    let required = [2 * d * m, (k + d) * m, d.max(k) * m + shift(&target), args.order * m + shift(&weight)];
    let spec = load_spec(args.spec, required.into_iter().max().unwrap_or(1))?;
    let mut report = DenoiseReport {
        phi_moments: None,
        psi_moments: None,
        coefficients: None,
        rank: None,
        residuals: None,
        verified: None,
    };
    if let Some(f) = &weight {
        let ws = weighted_state(&spec, f)?;
        let (phi, psi) = distributions_of_poly(&ws, &p, args.order)?;
        report.phi_moments = Some(phi.values);
        report.psi_moments = Some(psi.values);
    }
    if let Some(g) = &target {
        let r = l2_project(&spec, g, &p, d)?;
        if let Some(k) = args.check {
            report.verified = Some(condexp_verify(&spec, g, &p, &r.coefficients, k)?);
        }
        report.coefficients = Some(r.coefficients);
        report.rank = Some(r.rank);
        report.residuals = Some(r.residuals);
    }
    to_json(&report).map(Output::Json)
}

fn sigma(spec: &Path, order: usize) -> Result<Output, Error> {
    let spec = load_spec(spec, order)?;
    to_json(&sigma_report(&spec, order)?).map(Output::Json)
}

#[derive(Serialize)]
struct PartitionList {
    count: usize,
    partitions: Vec<Vec<Vec<usize>>>,
}

fn partitions(class: PartitionClass, n: usize) -> Result<Output, Error> {
    let list = match class {
        PartitionClass::Nc => enumerate_nc(n)?,
        PartitionClass::Interval => enumerate_interval(n)?,
        PartitionClass::Irreducible => enumerate_irreducible(n)?,
    };
    let partitions: Vec<_> = list.iter().map(|p| p.one_based()).collect();
    to_json(&PartitionList { count: partitions.len(), partitions }).map(Output::Json)
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    suites: Vec<cfree::suites::SuiteReport>,
}

fn verify(name: &str) -> Result<(Output, bool), Error> {
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    let suites = names.into_iter().map(run_suite).collect::<Result<Vec<_>, _>>()?;
    let passed = suites.iter().all(|s| s.passed());
    Ok((to_json(&VerifyReport { passed, suites }).map(Output::Json)?, passed))
}

fn render(out: Output) -> Result<String, Error> {
    match out {
        Output::Json(v) => Ok(v),
        Output::Series { key, values, format } => match format {
            Format::Json => Ok(format!("{{{}:{}}}", to_json(&key)?, to_json(&values)?)),
            Format::Csv => {
                let mut s = "n,value".to_string();
                for (k, v) in values.iter().enumerate() {
                    s.push_str(&format!("\n{},{v}", k + 1));
                }
                Ok(s)
            }
            Format::Pretty => Ok(values
                .iter()
                .enumerate()
                .map(|(k, v)| format!("{key}[{}] = {v}", k + 1))
                .collect::<Vec<_>>()
                .join("\n")),
        },
    }
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let out = match cli.command {
        Command::Moments { poly, spec, state, order, format } => moments(&poly, &spec, state, order, format)?,
        Command::Cumulants { poly, spec, kind, state, order, format } => {
            cumulants(&poly, &spec, kind, state, order, format)?
        }
        Command::Condexp { word, resolvent: _, poly, spec, state, order } => {
            condexp(word.as_deref(), poly.as_deref(), &spec, state, order)?
        }
        Command::Denoise { poly, spec, target, degree, weight, order, check } => denoise(DenoiseArgs {
            poly: &poly,
            spec: &spec,
            target: target.as_deref(),
            degree,
            weight: weight.as_deref(),
            order,
            check,
        })?,
        Command::Sigma { spec, order } => sigma(&spec, order)?,
        Command::Partitions { enumerate, n } => partitions(enumerate, n)?,
        Command::Verify { suite } => {
            let (out, passed) = verify(&suite)?;
            return Ok((render(out)?, passed));
        }
    };
    Ok((render(out)?, true))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Usage(_) => 2,
        Error::Domain(_) | Error::Limit(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, passed)) => {
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
