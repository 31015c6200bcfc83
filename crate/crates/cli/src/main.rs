mod alloc;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semifact::matrix::{MatrixAtom, ProbeBounds, TriangularMonoid, UTMatrix};
use semifact::verifier::{self, Status};
use semifact::{accp_probe, Bounds, Element, Error, Mode, Rat, Semialgebra};

#[global_allocator]
static ALLOC: alloc::Capped = alloc::Capped::new();

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_VERIFY_FAIL: u8 = 5;

/// Exact factorization in Puiseux semialgebras and upper triangular matrix monoids.
///
/// Semialgebras: nat, qnn, exp, cyclic:R, conducted:R.
/// Matrices: rows separated by ';', entries by ',' (e.g. "1,3;0,2").
#[derive(Parser, Debug)]
#[command(name = "semifact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Treat inconclusive answers as errors (exit 3).
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone, Copy)]
struct BoundArgs {
    #[arg(long, default_value_t = 12)]
    max_len: usize,
    #[arg(long, default_value_t = 12)]
    max_exp: u32,
    #[arg(long, default_value_t = 64)]
    max_den: u64,
    #[arg(long, default_value_t = 10_000)]
    max_count: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_len: self.max_len,
            max_exp: self.max_exp,
            max_den: self.max_den,
            max_count: self.max_count,
            depth: self.depth,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Target {
    #[arg(long, short = 's')]
    semialgebra: Semialgebra,
    /// Element: a rational like 9/2, or e:{q:c,...} in exp.
    #[arg(long, short = 'x')]
    element: Element,
}

#[derive(Args, Debug, Clone)]
struct MatrixTarget {
    #[arg(long, short = 's')]
    semialgebra: Semialgebra,
    #[arg(long, short = 'm')]
    matrix: UTMatrix,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List atoms of small height.
    Atoms {
        #[arg(long, short = 's')]
        semialgebra: Semialgebra,
        #[arg(long, default_value = "add")]
        mode: Mode,
        /// Largest atom value considered.
        #[arg(long, default_value = "4")]
        max_value: Rat,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Membership test.
    Member {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Enumerate factorizations.
    Factorize {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "add")]
        mode: Mode,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Set of lengths.
    Lengths {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "add")]
        mode: Mode,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Divisors.
    Divisors {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "add")]
        mode: Mode,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Canonical digits in a cyclic semialgebra with prime denominator.
    Digits {
        #[command(flatten)]
        target: Target,
    },
    /// Rigid factorizations of a matrix.
    MatFactorize {
        #[command(flatten)]
        target: MatrixTarget,
        /// Only unit triangular (additive) atoms.
        #[arg(long)]
        unit_triangular: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Matrix atom test.
    MatAtom {
        #[command(flatten)]
        target: MatrixTarget,
    },
    /// The matrix with rigid lengths differing by m - 1.
    Hfm {
        #[arg(long, short = 's')]
        semialgebra: Semialgebra,
        #[arg(long)]
        m: u64,
    },
    /// Search for a witness that a matrix atom is not almost prime-like.
    AplProbe {
        #[command(flatten)]
        target: MatrixTarget,
        #[arg(long, default_value_t = 9)]
        pool_den: u64,
        #[arg(long, default_value_t = 3)]
        pool_value: u64,
        #[arg(long, default_value_t = 2)]
        pool_factors: usize,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Search for a strictly ascending chain of principal ideals.
    AccpProbe {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "add")]
        mode: Mode,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Run verifier checks; one JSON line per check.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

enum Outcome {
    Value(Value),
    Lines(Vec<Value>, bool),
}

fn strs<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn membership_check(sa: &Semialgebra, x: &Element, bounds: &Bounds) -> Result<(), Error> {
    if sa.contains_within(x, bounds)? {
        Ok(())
    } else {
        Err(Error::domain(format!("{x} is not in {sa}")))
    }
}

fn run(cmd: Command, strict: bool) -> Result<Outcome, Error> {
    let inconclusive = |e: Error| -> Result<Outcome, Error> {
        if strict || !e.is_inconclusive() {
            Err(e)
        } else {
            Ok(Outcome::Value(json!({ "status": "inconclusive", "reason": e.to_string() })))
        }
    };
    let out = match cmd {
        Command::Atoms { semialgebra, mode, max_value, bounds } => {
            let e = semialgebra.list_atoms(mode, &bounds.bounds(), &max_value)?;
            json!({
                "semialgebra": semialgebra.to_string(),
                "mode": mode,
                "atoms": strs(&e.items),
                "count": e.items.len(),
                "complete": e.complete,
            })
        }
        Command::Member { target: Target { semialgebra, element }, bounds } => {
            match semialgebra.contains_within(&element, &bounds.bounds()) {
                Ok(v) => json!({ "semialgebra": semialgebra.to_string(), "element": element.to_string(), "member": v }),
                Err(e) => return inconclusive(e),
            }
        }
        Command::Factorize { target: Target { semialgebra, element }, mode, bounds } => {
            let b = bounds.bounds();
            membership_check(&semialgebra, &element, &b).or_else(|e| inconclusive(e).map(|_| ()))?;
            let e = match mode {
                Mode::Additive => semialgebra.add_factorizations(&element, &b),
                Mode::Multiplicative => semialgebra.mult_factorizations(&element, &b),
            };
            let e = match e {
                Ok(e) => e,
                Err(err) => return inconclusive(err),
            };
            if strict && !e.complete {
                return Err(Error::inconclusive("factorization enumeration is incomplete"));
            }
            json!({
                "semialgebra": semialgebra.to_string(),
                "element": element.to_string(),
                "mode": mode,
                "factorizations": to_value(&e.items),
                "count": e.items.len(),
                "complete": e.complete,
            })
        }
        Command::Lengths { target: Target { semialgebra, element }, mode, bounds } => {
            let b = bounds.bounds();
            let r = match mode {
                Mode::Additive => semialgebra.add_length_set(&element, &b),
                Mode::Multiplicative => semialgebra.mult_length_set(&element, &b),
            };
            let (lens, complete) = match r {
                Ok(r) => r,
                Err(err) => return inconclusive(err),
            };
            if strict && !complete {
                return Err(Error::inconclusive("length set is incomplete"));
            }
            json!({
                "semialgebra": semialgebra.to_string(),
                "element": element.to_string(),
                "mode": mode,
                "lengths": lens,
                "complete": complete,
            })
        }
        Command::Divisors { target: Target { semialgebra, element }, mode, bounds } => {
            let b = bounds.bounds();
            let r = match mode {
                Mode::Additive => semialgebra.add_divisors(&element, &b),
                Mode::Multiplicative => semialgebra.mult_divisors(&element, &b),
            };
            let e = match r {
                Ok(e) => e,
                Err(err) => return inconclusive(err),
            };
            if strict && !e.complete {
                return Err(Error::inconclusive("divisor enumeration is incomplete"));
            }
            json!({
                "semialgebra": semialgebra.to_string(),
                "element": element.to_string(),
                "mode": mode,
                "divisors": strs(&e.items),
                "count": e.items.len(),
                "complete": e.complete,
            })
        }
        Command::Digits { target: Target { semialgebra, element } } => {
            let digits = semialgebra.canonical_digits(element.rational()?)?;
            json!({
                "semialgebra": semialgebra.to_string(),
                "element": element.to_string(),
                "digits": strs(&digits),
            })
        }
        Command::MatFactorize { target: MatrixTarget { semialgebra, matrix }, unit_triangular, bounds } => {
            let t = TriangularMonoid::new(semialgebra.clone(), matrix.n())?;
            let e = t.rigid_factorizations(&matrix, &bounds.bounds(), unit_triangular)?;
            if strict && !e.complete {
                return Err(Error::inconclusive("rigid factorization enumeration is incomplete"));
            }
            let lengths: std::collections::BTreeSet<usize> = e.items.iter().map(|f| f.len()).collect();
            let weight = match t.weight(&matrix) {
                Ok(w) => Value::from(w),
                Err(err) if err.is_inconclusive() => Value::Null,
                Err(err) => return Err(err),
            };
            json!({
                "semialgebra": semialgebra.to_string(),
                "matrix": matrix.to_string(),
                "factorizations": to_value(&e.items),
                "count": e.items.len(),
                "lengths": lengths,
                "weight": weight,
                "complete": e.complete,
            })
        }
        Command::MatAtom { target: MatrixTarget { semialgebra, matrix } } => {
            let t = TriangularMonoid::new(semialgebra.clone(), matrix.n())?;
            match t.as_atom(&matrix) {
                Ok(a) => json!({
                    "semialgebra": semialgebra.to_string(),
                    "matrix": matrix.to_string(),
                    "atom": a.is_some(),
                    "form": a.map(|a| to_value(&a)),
                }),
                Err(e) => return inconclusive(e),
            }
        }
        Command::Hfm { semialgebra, m } => {
            let t = TriangularMonoid::new(semialgebra.clone(), 2)?;
            let w = t.hfm_counterexample(m)?;
            json!({
                "semialgebra": semialgebra.to_string(),
                "m": m,
                "matrix": w.matrix.to_string(),
                "long": to_value(&w.long),
                "short": to_value(&w.short),
                "length_difference": w.long.len() - w.short.len(),
            })
        }
        Command::AplProbe { target: MatrixTarget { semialgebra, matrix }, pool_den, pool_value, pool_factors, bounds } => {
            let t = TriangularMonoid::new(semialgebra.clone(), matrix.n())?;
            let atom: MatrixAtom = t
                .as_atom(&matrix)?
                .ok_or_else(|| Error::domain(format!("{matrix} is not a matrix atom")))?;
            let pb = ProbeBounds { max_den: pool_den, max_value: pool_value, max_factors: pool_factors, search: bounds.bounds() };
            let r = t.almost_prime_like_probe(&atom, &pb)?;
            if strict && r.outcome != "witness" {
                return Err(Error::inconclusive("no witness found; this proves nothing"));
            }
            let mut v = to_value(&r);
            v["semialgebra"] = json!(semialgebra.to_string());
            v
        }
        Command::AccpProbe { target: Target { semialgebra, element }, mode, bounds } => {
            let r = accp_probe(&semialgebra, mode, &element, &bounds.bounds())?;
            let mut v = to_value(&r);
            v["semialgebra"] = json!(semialgebra.to_string());
            v
        }
        Command::Verify { suite, seed } => {
            let reports = verifier::run_suite(&suite, seed)?;
            let failed = reports.iter().any(|r| r.status == Status::Fail);
            return Ok(Outcome::Lines(reports.iter().map(to_value).collect(), failed));
        }
    };
    Ok(Outcome::Value(out))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(", "),
        Value::Object(_) => v.to_string(),
        _ => v.to_string(),
    }
}

/// Renders the JSON output as aligned `key  value` rows.
fn table(v: &Value) -> String {
    let Value::Object(map) = v else { return cell(v) };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, x) in map {
        match x {
            Value::Array(items) if items.iter().any(Value::is_object) => {
                out.push_str(&format!("{k}\n"));
                for item in items {
                    let line = match item {
                        Value::Object(o) => o.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect::<Vec<_>>().join("  "),
                        other => cell(other),
                    };
                    out.push_str(&format!("  {line}\n"));
                }
            }
            _ => out.push_str(&format!("{k:width$}  {}\n", cell(x))),
        }
    }
    out.pop();
    out
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => v.to_string(),
        Format::Table => table(v),
    }
}

/// Writes one rendered value per line; a closed pipe ends output quietly.
fn emit(values: &[Value], format: Format) {
    let mut out = std::io::stdout().lock();
    for v in values {
        if writeln!(out, "{}", render(v, format)).is_err() {
            return;
        }
    }
    let _ = out.flush();
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
        Error::Domain(_) | Error::NotMember(_) | Error::Unsupported(_) => EXIT_DOMAIN,
    }
}

fn main() -> ExitCode {
    if let Ok(cap) = std::env::var("SEMIFACT_MAX_MEM") {
        match alloc::parse_size(&cap) {
            Some(bytes) => ALLOC.set_cap(bytes),
            None => {
                eprintln!("error: cannot parse SEMIFACT_MAX_MEM={cap:?}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command, cli.strict) {
        Ok(Outcome::Value(v)) => {
            emit(&[v], cli.format);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Lines(lines, failed)) => {
            emit(&lines, cli.format);
            if failed {
                ExitCode::from(EXIT_VERIFY_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
