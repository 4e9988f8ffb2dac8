//! `liex`: exact S-expansions, reductions, contractions and classification
//! of small real Lie algebras from the command line.
//!
//! Exit status: 0 on success, 1 on malformed input, 2 on domain errors.
//! Errors are printed on standard output as `{"code", "message", "witness"?}`.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use liex::contraction::{verify_contraction, LaurentBasisFamily};
use liex::expansion::{extract_subalgebra, parse_span, reduce_decomposition, s_expand, zero_reduce};
use liex::identify::{identify3, signature};
use liex::liealg::{catalog, TensorJson};
use liex::search::{connectivity_matrix, find_connection, parse_modes, SearchConfig};
use liex::semigroup::{
    enumerate_abelian_semigroups, validate_semigroup, zero_element, SemigroupJson,
    DEFAULT_MAX_ORDER,
};
use liex::{change_basis, validate_lie, AlgebraClass, BasisChange, Error, SemigroupTable, StructureTensor};

mod properties;

#[derive(Parser)]
#[command(name = "liex", version, about = "Exact S-expansions of small Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where an algebra comes from: a catalog name, a JSON file, or standard
/// input when neither is given.
#[derive(Args, Clone, Default)]
struct AlgebraInput {
    /// Catalog name such as `sl2R` or `A3.4(a=1/2)`.
    #[arg(long)]
    algebra: Option<String>,
    /// Tensor JSON file (`-` for standard input).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie axioms of a tensor, or the axioms of a semigroup.
    Validate {
        #[command(flatten)]
        algebra: AlgebraInput,
        /// Validate this semigroup (built-in name, JSON file or inline JSON) instead.
        #[arg(long)]
        semigroup: Option<String>,
    },
    /// S-expansion `S×g`.
    Expand {
        #[arg(long)]
        semigroup: String,
        #[command(flatten)]
        algebra: AlgebraInput,
        /// Basis change applied to the algebra first (JSON rows of rationals).
        #[arg(long)]
        pre: Option<PathBuf>,
    },
    /// `0_S`-reduction of `S×g`, or the reduced algebra of a split.
    Reduce {
        #[arg(long, value_enum, default_value_t = ReduceMode::Zero)]
        mode: ReduceMode,
        /// Semigroup for `--mode zero`.
        #[arg(long)]
        semigroup: Option<String>,
        /// Kept subspace for `--mode split`, e.g. "E1,E2".
        #[arg(long)]
        checked: Option<String>,
        /// Discarded subspace for `--mode split`.
        #[arg(long)]
        hatted: Option<String>,
        #[command(flatten)]
        algebra: AlgebraInput,
    },
    /// Structure constants of the subalgebra spanned by `--span`.
    Subalgebra {
        #[arg(long)]
        span: String,
        #[command(flatten)]
        algebra: AlgebraInput,
    },
    /// Class of a three-dimensional algebra with a basis-change witness.
    Identify {
        /// Identify the subalgebra on this span instead of the whole algebra.
        #[arg(long)]
        span: Option<String>,
        #[command(flatten)]
        algebra: AlgebraInput,
    },
    /// Limit of a Laurent basis family applied to a source algebra.
    Contract {
        #[arg(long)]
        source: String,
        /// `uF`, `identity:N`, `diag:k1,k2,..` or a family JSON file.
        #[arg(long)]
        family: String,
        #[arg(long)]
        target: String,
    },
    /// Search for S-expansion connections between two classes.
    Search {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        /// Comma-separated subset of subalgebra, zero-reduce, resonant, or `all`.
        #[arg(long, default_value = "subalgebra,zero-reduce")]
        modes: String,
    },
    /// Connectivity between classes, as JSON or DOT.
    Graph {
        /// `all3` or a comma-separated list of labels.
        #[arg(long, default_value = "all3")]
        labels: String,
        #[arg(long, default_value_t = 2)]
        max_order: usize,
        #[arg(long, default_value = "subalgebra")]
        modes: String,
        /// Write DOT to this file (`-` for standard output).
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Catalog tensor, or the list of names without an argument.
    Catalog {
        name: Option<String>,
        /// Family parameter such as `a=1/2`.
        #[arg(long)]
        param: Option<String>,
    },
    /// Commutative semigroups of a given order.
    EnumerateSemigroups {
        #[arg(long)]
        order: usize,
        /// List every labelled table rather than one per isomorphism class.
        #[arg(long)]
        all: bool,
    },
    /// Randomized checks of the library invariants.
    Properties {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMode {
    Zero,
    Split,
}

enum Output {
    Json(Value),
    Text(String),
}

#[derive(Debug)]
enum Failure {
    Malformed(&'static str, String),
    Domain(Error),
    Witnessed(Error, Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Malformed(_) | Error::UnknownName(_) => Failure::Malformed(e.code(), e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn malformed(m: impl std::fmt::Display) -> Failure {
    Failure::Malformed("malformed", m.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (body, code) = match run(cli.command) {
        Ok(Output::Json(v)) => (
            serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            0,
        ),
        Ok(Output::Text(t)) => (t, 0),
        Err(Failure::Malformed(code, m)) => (json!({ "code": code, "message": m }).to_string() + "\n", 1),
        Err(Failure::Domain(e)) => (error_json(&e, e.witness()) + "\n", 2),
        Err(Failure::Witnessed(e, w)) => (error_json(&e, Some(w)) + "\n", 2),
    };
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(body.as_bytes()).and_then(|_| out.flush());
    ExitCode::from(code)
}

fn error_json(e: &Error, witness: Option<Value>) -> String {
    let mut v = json!({ "code": e.code(), "message": e.to_string() });
    if let Some(w) = witness {
        v["witness"] = w;
    }
    v.to_string()
}

fn bound() -> CliResult<usize> {
    match std::env::var("LIEX_MAX_ORDER") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| malformed(format!("LIEX_MAX_ORDER must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn read_source(path: &PathBuf) -> CliResult<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(malformed)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
    }
}

fn parse_tensor(text: &str) -> CliResult<StructureTensor> {
    let j: TensorJson = serde_json::from_str(text).map_err(|e| malformed(format!("tensor JSON: {e}")))?;
    Ok(StructureTensor::from_json(&j)?)
}

impl AlgebraInput {
    fn load(&self) -> CliResult<StructureTensor> {
        match (&self.algebra, &self.input) {
            (Some(_), Some(_)) => Err(malformed("give either --algebra or --input, not both")),
            (Some(name), None) => Ok(name.parse::<AlgebraClass>()?.tensor()),
            (None, Some(path)) => parse_tensor(&read_source(path)?),
            (None, None) => parse_tensor(&read_source(&PathBuf::from("-"))?),
        }
    }
}

fn load_semigroup(spec: &str) -> CliResult<SemigroupTable> {
    if let Ok(t) = SemigroupTable::builtin(spec) {
        return Ok(t);
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        read_source(&PathBuf::from(spec))?
    };
    let j: SemigroupJson =
        serde_json::from_str(&text).map_err(|e| malformed(format!("semigroup JSON: {e}")))?;
    Ok(SemigroupTable::from_json(&j)?)
}

fn load_basis_change(path: &PathBuf) -> CliResult<BasisChange> {
    let rows: Vec<Vec<String>> = serde_json::from_str(&read_source(path)?)
        .map_err(|e| malformed(format!("basis change JSON: {e}")))?;
    Ok(BasisChange::from_json(&rows)?)
}

fn tensor_json(c: &StructureTensor) -> Value {
    serde_json::to_value(c.to_json()).expect("serializable")
}

fn identification_json(c: &StructureTensor) -> CliResult<Value> {
    let id = identify3(c)?;
    let mut v = json!({
        "class": id.class.label(),
        "witness": id.witness.to_json(),
        "signature": serde_json::to_value(signature(c)?).expect("serializable"),
    });
    if let Some((k, p)) = id.class.parameter() {
        v[k] = json!(liex::rational::fmt_q(p));
    }
    Ok(v)
}

fn labels(text: &str) -> CliResult<Vec<AlgebraClass>> {
    if text.trim() == "all3" {
        return Ok(AlgebraClass::all3());
    }
    text.split(';')
        .flat_map(|chunk| chunk.split(','))
        .map(|l| l.trim().parse::<AlgebraClass>().map_err(Failure::from))
        .collect()
}

fn search_config(max_order: usize, modes: &str) -> CliResult<SearchConfig> {
    let mut config = SearchConfig::new(max_order, &parse_modes(modes)?);
    config.bound = bound()?;
    Ok(config)
}

fn run(command: Command) -> CliResult<Output> {
    match command {
        Command::Validate { algebra, semigroup } => {
            if let Some(s) = semigroup {
                let t = load_semigroup(&s)?;
                let report = validate_semigroup(&t);
                if report.is_ok() {
                    return Ok(Output::Json(json!({
                        "ok": true,
                        "order": t.order(),
                        "zero": zero_element(&t).map(|z| z + 1),
                    })));
                }
                return Err(Failure::Witnessed(
                    Error::NotSemigroup("the table violates the semigroup axioms".into()),
                    serde_json::to_value(&report).expect("serializable"),
                ));
            }
            let c = algebra.load()?;
            let report = validate_lie(&c);
            if report.is_ok() {
                Ok(Output::Json(json!({ "ok": true, "dim": c.dim() })))
            } else {
                Err(Failure::Witnessed(
                    Error::NotLie("structure constants violate the Lie axioms".into()),
                    report.witness_json(),
                ))
            }
        }
        Command::Expand { semigroup, algebra, pre } => {
            let s = load_semigroup(&semigroup)?;
            let mut c = algebra.load()?;
            if let Some(p) = pre {
                c = change_basis(&c, &load_basis_change(&p)?)?;
            }
            Ok(Output::Json(tensor_json(&s_expand(&s, &c))))
        }
        Command::Reduce { mode, semigroup, checked, hatted, algebra } => {
            let c = algebra.load()?;
            let r = match mode {
                ReduceMode::Zero => {
                    let s = semigroup.ok_or_else(|| malformed("--mode zero needs --semigroup"))?;
                    zero_reduce(&load_semigroup(&s)?, &c)?
                }
                ReduceMode::Split => {
                    let (Some(ch), Some(ha)) = (checked, hatted) else {
                        return Err(malformed("--mode split needs --checked and --hatted"));
                    };
                    let n = c.dim();
                    reduce_decomposition(&c, &parse_span(&ch, n)?, &parse_span(&ha, n)?)?
                }
            };
            Ok(Output::Json(tensor_json(&r)))
        }
        Command::Subalgebra { span, algebra } => {
            let c = algebra.load()?;
            let sub = extract_subalgebra(&c, &parse_span(&span, c.dim())?)?;
            Ok(Output::Json(tensor_json(&sub)))
        }
        Command::Identify { span, algebra } => {
            let mut c = algebra.load()?;
            if let Some(s) = span {
                c = extract_subalgebra(&c, &parse_span(&s, c.dim())?)?;
            }
            Ok(Output::Json(identification_json(&c)?))
        }
        Command::Contract { source, family, target } => {
            let c = source.parse::<AlgebraClass>()?.tensor();
            let u = match LaurentBasisFamily::builtin(&family) {
                Ok(u) => u,
                Err(Error::UnknownName(_)) => {
                    let v: Value = serde_json::from_str(&read_source(&PathBuf::from(&family))?)
                        .map_err(|e| malformed(format!("family JSON: {e}")))?;
                    LaurentBasisFamily::from_json(&v)?
                }
                Err(e) => return Err(e.into()),
            };
            let report = verify_contraction(&c, &u, &target, None)?;
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["limit"] = tensor_json(&report.limit);
            Ok(Output::Json(v))
        }
        Command::Search { from, to, max_order, modes } => {
            let source = from.parse::<AlgebraClass>()?;
            let target = to.parse::<AlgebraClass>()?;
            let report = find_connection(&source.tensor(), &target, &search_config(max_order, &modes)?)?;
            let mut v = report.to_json();
            v["source"] = json!(source.to_string());
            Ok(Output::Json(v))
        }
        Command::Graph { labels: l, max_order, modes, dot } => {
            let g = connectivity_matrix(&labels(&l)?, &search_config(max_order, &modes)?)?;
            match dot {
                Some(p) if p.as_os_str() == "-" => Ok(Output::Text(g.to_dot())),
                Some(p) => {
                    std::fs::write(&p, g.to_dot())
                        .map_err(|e| malformed(format!("{}: {e}", p.display())))?;
                    Ok(Output::Json(g.to_json()))
                }
                None => Ok(Output::Json(g.to_json())),
            }
        }
        Command::Catalog { name, param } => match name {
            Some(n) => Ok(Output::Json(tensor_json(&catalog(&n, param.as_deref())?))),
            None => {
                let names: Vec<String> = AlgebraClass::all3()
                    .iter()
                    .chain(&[AlgebraClass::GF, AlgebraClass::GE])
                    .map(ToString::to_string)
                    .collect();
                Ok(Output::Json(json!({ "algebras": names, "semigroups": ["S1", "S2", "S3", "Z2", "Z3"] })))
            }
        },
        Command::EnumerateSemigroups { order, all } => {
            let tables = enumerate_abelian_semigroups(order, !all, bound()?)?;
            Ok(Output::Json(json!({
                "order": order,
                "up_to_isomorphism": !all,
                "count": tables.len(),
                "semigroups": tables.iter().map(SemigroupTable::to_json).collect::<Vec<_>>(),
            })))
        }
        Command::Properties { seed, cases } => Ok(Output::Json(properties::run(seed, cases)?)),
    }
}
