use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modata::galois::{
    congruence_suite, multiplicativity_check, verify_galois_identities, CongruenceConfig,
};
use modata::lambda::{lambda_hat, lambda_mat, verify_lambda_identities};
use modata::modrep::Lcg;
use modata::modular_data::{
    builtin_model, c0_consistency, conductor_report, validate, validation_report, verlinde,
    ModelFile, ModularData, RawDatum,
};
use modata::orbifold::{
    consistency_report, invariants_report, label_tuples, th94_report, OrbSlice,
};
use modata::{parse_rational, CMatrix, Error, Rational};
use num_integer::Integer;
use serde_json::Value;

mod output;
use output::RunReport;

const DEFAULT_MAX_ORDER: u64 = 4096;
/// Largest parent rank for which multiplicity sweeps enumerate every tuple.
const FULL_ENUMERATION_RANK: usize = 6;
const SAMPLED_TUPLES: usize = 200;

#[derive(Parser)]
#[command(name = "modata", version, about = "Exact checks on modular data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Modular axioms, c0 class, conductor and fusion integrality.
    Verify(Source),
    /// Galois action on S and T, and the congruence property of the kernel.
    Galois {
        #[command(flatten)]
        source: Source,
        /// Comma-separated Galois indices.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "5,7,11",
            allow_hyphen_values = true
        )]
        l: Vec<i64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Prints Lambda(r) or Lambda-hat(r) with its identity report.
    Lambda {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long)]
        hat: bool,
        /// Print entries as decimals with this many digits.
        #[arg(long)]
        approx: Option<u32>,
    },
    /// Cyclic permutation orbifold entries and consistency checks.
    Orbifold {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        order: u64,
        /// Subset of: consistency, invariants, th94.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "consistency,invariants,th94"
        )]
        checks: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Writes the model as a JSON model file.
    Export(Source),
}

#[derive(Args, Clone)]
struct Source {
    /// Model file; takes precedence over a builtin of the same name.
    file: Option<String>,
    /// Builtin spec such as su2:3, or a model file path.
    #[arg(long)]
    model: Option<String>,
    /// Replacement c0 representative.
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    /// Label index used as tau2.
    #[arg(long)]
    tau2: Option<usize>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

/// Failure modes of a command, mapped to exit codes.
enum Failure {
    /// Bad input, exit 2.
    Usage(String),
    /// A failed check, exit 1; the report is still printed.
    Check(Box<RunReport>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::AxiomViolation(rep) => {
                let mut run = RunReport::new("check", "derived");
                run.report = *rep;
                Failure::Check(Box::new(run))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn max_order() -> u64 {
    std::env::var("MODATA_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

fn check_cap(order: u64) -> Result<(), Failure> {
    let cap = max_order();
    if order > cap {
        return Err(Error::OrderCap { order, cap }.into());
    }
    Ok(())
}

fn load_raw(src: &Source) -> Result<(String, Option<RawDatum>), Failure> {
    let name = src
        .file
        .clone()
        .or_else(|| src.model.clone())
        .ok_or_else(|| Failure::Usage("no model given; pass a file or --model".into()))?;
    if Path::new(&name).is_file() {
        let text = std::fs::read_to_string(&name)
            .map_err(|e| Failure::Usage(format!("cannot read {name}: {e}")))?;
        let raw = ModelFile::parse(&text)?.to_raw()?;
        return Ok((name, Some(raw)));
    }
    Ok((name, None))
}

/// Axiom failures in a model file keep their report so the failed identity is named.
fn invalid(e: Error, command: &str, name: &str) -> Failure {
    match e {
        Error::AxiomViolation(rep) => {
            let mut run = RunReport::new(command, name);
            run.report = *rep;
            Failure::Check(Box::new(run))
        }
        other => other.into(),
    }
}

/// Loads, applies overrides and validates.
fn load(src: &Source, command: &str) -> Result<(String, ModularData), Failure> {
    let (name, raw) = load_raw(src)?;
    let mut md = match raw {
        Some(raw) => validate(raw).map_err(|e| invalid(e, command, &name))?,
        None => builtin_model(&name)?,
    };
    if let Some(c0) = &src.c0 {
        md = md.with_c0(parse_rational(c0)?)?;
    }
    if let Some(t) = src.tau2 {
        if t >= md.rank() {
            return Err(Error::BadLabel(t).into());
        }
        md = md.with_tau2(t)?;
    }
    check_cap(md.t_order())?;
    Ok((name, md))
}

fn base_report(command: &str, name: &str, md: &ModularData) -> RunReport {
    let mut run = RunReport::new(command, name);
    run.config("c0", md.c0().to_string());
    run.config("tau2", md.tau2());
    run
}

fn cmd_verify(src: &Source) -> Result<RunReport, Failure> {
    let (name, md) = load(src, "verify")?;
    let mut run = base_report("verify", &name, &md);
    run.report.extend(validation_report(&md.to_raw()));
    run.report.extend(c0_consistency(&md));
    run.report.extend(conductor_report(&md));
    let r = md.rank();
    let mut bad = None;
    for l in 0..r {
        for m in 0..r {
            for n in 0..r {
                if let Err(e) = verlinde(&md, l, m, n) {
                    bad.get_or_insert(e.to_string());
                }
            }
        }
    }
    let pass = bad.is_none();
    run.report.push(
        "fusion",
        "Verlinde integrality",
        format!("triples={}", r * r * r),
        pass,
        bad.unwrap_or_default(),
    );
    Ok(run)
}

fn cmd_galois(src: &Source, ls: &[i64], samples: usize, seed: u64) -> Result<RunReport, Failure> {
    let (name, md) = load(src, "galois")?;
    let n = md.t_order() as i64;
    let mut run = base_report("galois", &name, &md);
    run.config("seed", seed);
    run.config("samples", samples);
    run.config(
        "l",
        Value::Array(ls.iter().map(|&l| Value::from(l)).collect()),
    );
    let mut good = Vec::new();
    for &l in ls {
        if l.gcd(&n) != 1 {
            run.report.notice(
                "galois",
                format!("l={l}"),
                format!("l={l} skipped, gcd({l},{n}) = {} != 1", l.gcd(&n)),
            );
            continue;
        }
        run.report.extend(verify_galois_identities(&md, l));
        good.push(l);
    }
    for (i, &l) in good.iter().enumerate() {
        for &m in &good[i..] {
            run.report.extend(multiplicativity_check(&md, l, m));
        }
    }
    let cfg = CongruenceConfig::uniform(samples, seed, good);
    run.report.extend(congruence_suite(&md, &cfg));
    Ok(run)
}

fn matrix_json(m: &CMatrix, approx: Option<u32>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|x| match approx {
                            Some(d) => x.approx_string(d).into(),
                            None => x.to_string().into(),
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

fn cmd_lambda(
    src: &Source,
    r: &str,
    hat: bool,
    approx: Option<u32>,
) -> Result<(RunReport, String), Failure> {
    let r: Rational = parse_rational(r).map_err(|e| Failure::Usage(format!("malformed r: {e}")))?;
    let (name, md) = load(src, "lambda")?;
    let den = modata::lambda::denominator(&r);
    check_cap((den * md.t_order()).lcm(&(24 * den)))?;
    let m = if hat {
        lambda_hat(&md, md.c(), &r)?
    } else {
        lambda_mat(&md, &r)
    };
    let mut run = base_report("lambda", &name, &md);
    run.config("r", r.to_string());
    run.config("hat", hat);
    if let Some(d) = approx {
        run.config("approx", d);
    }
    run.extra.insert("matrix".into(), matrix_json(&m, approx));
    run.report
        .extend(verify_lambda_identities(&md, md.c(), &r)?);
    let title = if hat { "Lambda-hat" } else { "Lambda" };
    Ok((run, format!("{title}({r}) =\n{}", m.render(approx))))
}

fn th94_tuples(rank: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rng = Lcg::new(seed);
    for n in 2..=4 {
        if rank <= FULL_ENUMERATION_RANK {
            out.extend(label_tuples(rank, n));
        } else {
            for _ in 0..SAMPLED_TUPLES {
                out.push((0..n).map(|_| rng.below(rank as u64) as usize).collect());
            }
        }
    }
    out
}

fn cmd_orbifold(
    src: &Source,
    order: u64,
    checks: &[String],
    seed: u64,
) -> Result<RunReport, Failure> {
    if order < 2 {
        return Err(Failure::Usage(format!(
            "--order must be at least 2, got {order}"
        )));
    }
    for c in checks {
        if !["consistency", "invariants", "th94"].contains(&c.as_str()) {
            return Err(Failure::Usage(format!("unknown check {c:?}")));
        }
    }
    let (name, md) = load(src, "orbifold")?;
    let slice = OrbSlice::new(md.clone(), order)?;
    check_cap(slice.working_order())?;
    let mut run = base_report("orbifold", &name, &md);
    run.config("order", order);
    run.config("seed", seed);
    run.config("tau_convention", slice.tau_convention());
    run.config(
        "checks",
        Value::Array(checks.iter().map(|c| Value::from(c.clone())).collect()),
    );
    let want = |c: &str| checks.iter().any(|x| x == c);
    if want("consistency") {
        run.report.extend(consistency_report(&slice));
    }
    if want("invariants") {
        run.report.extend(invariants_report(&slice));
    }
    if want("th94") {
        let tuples = th94_tuples(md.rank(), seed);
        if md.rank() > FULL_ENUMERATION_RANK {
            run.report.notice(
                "th94",
                format!("rank={}", md.rank()),
                format!("{SAMPLED_TUPLES} seeded tuples per n"),
            );
        }
        let rep = th94_report(&md, &tuples);
        for rec in rep.records {
            if rec.check.starts_with("n=3 equals fusion") {
                // the genus-one count is not a fusion coefficient; informational
                let msg = if rec.pass {
                    "n=3 multiplicities coincide with fusion coefficients".to_string()
                } else {
                    format!(
                        "n=3 multiplicities are genus-one counts, not fusion coefficients: {}",
                        rec.witness
                    )
                };
                run.report.notice("th94", rec.params, msg);
            } else {
                run.report.records.push(rec);
            }
        }
    }
    Ok(run)
}

fn cmd_export(src: &Source) -> Result<String, Failure> {
    let (_, md) = load(src, "export")?;
    Ok(ModelFile::from_datum(&md)?.to_json())
}

/// Writes to stdout; a closed pipe downstream is not an error worth reporting.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(run: &RunReport, json: bool) {
    if json {
        out(&run.to_json());
    } else {
        out(&run.to_table());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, result) = match &cli.command {
        Command::Verify(src) => (src.json, cmd_verify(src)),
        Command::Galois {
            source,
            l,
            samples,
            seed,
        } => (source.json, cmd_galois(source, l, *samples, *seed)),
        Command::Lambda {
            source,
            r,
            hat,
            approx,
        } => (
            source.json,
            cmd_lambda(source, r, *hat, *approx).map(|(run, text)| {
                if !source.json {
                    out(&text);
                }
                run
            }),
        ),
        Command::Orbifold {
            source,
            order,
            checks,
            seed,
        } => (source.json, cmd_orbifold(source, *order, checks, *seed)),
        Command::Export(src) => {
            return match cmd_export(src) {
                Ok(text) => {
                    out(&text);
                    ExitCode::SUCCESS
                }
                Err(f) => finish(f, src.json),
            };
        }
    };
    match result {
        Ok(run) if run.pass() => {
            emit(&run, json);
            ExitCode::SUCCESS
        }
        Ok(run) => finish(Failure::Check(Box::new(run)), json),
        Err(f) => finish(f, json),
    }
}

fn finish(f: Failure, json: bool) -> ExitCode {
    match f {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Check(run) => {
            emit(&run, json);
            eprintln!("error: {}", run.report.failure_summary());
            ExitCode::from(1)
        }
    }
}
