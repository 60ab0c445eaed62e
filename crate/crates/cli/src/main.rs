use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use inclex_core::cohom::{stable_homology_table, GradedWeightedSpace};
use inclex_core::ffield::{count_colored_configs, count_colored_configs_p1, count_smooth_sections_p1, count_squarefree_monic, density_report, vw_inversion_check};
use inclex_core::homology::{nerve_betti, rank_e1_report};
use inclex_core::incidence::{mobius_by_inversion, mobius_topological, Incidence};
use inclex_core::motivic::{bigint_json, kapranov_zeta, rational_json, stable_limit, CellularVariety, MotSeries};
use inclex_core::poset::families::{self, Family};
use inclex_core::zerocycles::{skeletal_compare, skeletal_total_dim};
use inclex_core::{suites, Error, FinitePoset};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "inclex", version, about = "Exact inclusion-exclusion computations and their verification suites")]
struct Cli {
    /// Output format; tables render the same data as the JSON.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Refuse jobs whose estimated working set exceeds this many bytes.
    #[arg(long, default_value_t = 1 << 30, global = true)]
    guard_bytes: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Inversion,
    Topological,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Squarefree,
    Colored,
    ColoredP1,
    SmoothP1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Chain,
    Antichain,
    Boolean,
    Divisors,
    Configuration,
    Symmetric,
    Random,
    Cover,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Transform {
    Cone,
    Cocone,
    Barycentric,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named poset family and print it as poset JSON.
    Family(FamilyArgs),
    /// Möbius function of a poset by one or both routes.
    Mobius {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Chain counts, Betti numbers and Euler characteristics of the nerve.
    Nerve {
        #[arg(long)]
        poset: PathBuf,
    },
    /// Spectral sequence of the rank filtration with the open-interval comparison.
    SsRank {
        #[arg(long)]
        poset: PathBuf,
    },
    /// Composition complex against the antisymmetric complex.
    SsSkeletalCompare {
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        cutoff: usize,
    },
    /// Kapranov zeta series of a cellular variety.
    Zeta {
        #[arg(long)]
        variety: PathBuf,
        #[arg(short = 'N', default_value_t = 8)]
        n: usize,
        /// Also print coefficients at `L = q`.
        #[arg(long)]
        specialize_q: Option<i64>,
    },
    /// Inverse of the Kapranov zeta series.
    ZetaInvert {
        #[arg(long)]
        variety: PathBuf,
        #[arg(short = 'N', default_value_t = 8)]
        n: usize,
        #[arg(long)]
        specialize_q: Option<i64>,
    },
    /// The inverse zeta function at `t = L^{-n}`.
    StableLimit {
        #[arg(long)]
        variety: PathBuf,
        #[arg(short = 'n', default_value_t = 2)]
        n: i64,
        /// Keep powers down to `L^{-keep}`.
        #[arg(long, default_value_t = 32)]
        keep: i64,
    },
    /// Stable homology table from a cohomology table.
    StableBetti {
        #[arg(long)]
        variety_cohomology: PathBuf,
        /// Dimension of the variety; sets `n = dim + 1` for the Euler characteristic.
        #[arg(long)]
        dim: i64,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Exhaustive counts over a prime field.
    Count {
        #[arg(long, value_enum)]
        oracle: Oracle,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: Option<usize>,
        /// Composition for colored counts, e.g. `1,2`.
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
    },
    /// Smooth-section densities on the projective line.
    Density {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        dmin: usize,
        #[arg(long)]
        dmax: usize,
    },
    /// Run one acceptance suite by name, or `all`.
    Check {
        suite: String,
        /// Field size for `check vw`.
        #[arg(long)]
        q: Option<u64>,
        /// Truncation for `check vw`.
        #[arg(short = 'N')]
        n: Option<usize>,
    },
}

#[derive(clap::Args, Debug)]
struct FamilyArgs {
    #[arg(value_enum)]
    name: FamilyName,
    /// Size parameter (chain length, antichain size, Boolean rank, divisor target, random size).
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated letters for configuration and symmetric posets.
    #[arg(long, value_delimiter = ',')]
    letters: Vec<String>,
    /// Size cutoff for configuration and symmetric posets.
    #[arg(long)]
    k: Option<usize>,
    /// Adjoin a minimum to a symmetric poset.
    #[arg(long)]
    bottom: bool,
    /// Edge probability for random posets.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cover members separated by `;`, each a comma-separated list: `a,b;b,c`.
    #[arg(long)]
    sets: Option<String>,
    /// Applied in order after construction.
    #[arg(long, value_enum)]
    transform: Vec<Transform>,
    /// Join the result with this poset (its elements on top).
    #[arg(long)]
    join: Option<PathBuf>,
}

/// A run either produces a report or stops with an exit code.
enum Failure {
    Invalid(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CostGuard(_) => Failure::Guard(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

struct Report {
    command: &'static str,
    result: Value,
    /// False on a verification failure (exit 1).
    ok: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Accepts bare poset JSON or the envelope printed by `inclex family`.
fn load_poset(path: &Path) -> Result<FinitePoset, Failure> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    match v.get("result") {
        Some(inner) if v.get("version").is_some() => Ok(FinitePoset::from_json_str(&inner.to_string())?),
        _ => Ok(FinitePoset::from_json_str(&text)?),
    }
}

fn load_variety(path: &Path) -> Result<CellularVariety, Failure> {
    Ok(CellularVariety::from_json_str(&read(path)?)?)
}

/// Rough working set of nerve-based commands: every chain stored once.
fn guard_nerve(p: &FinitePoset, guard: u64) -> Result<(), Failure> {
    let bytes: u128 = p.chain_counts().iter().enumerate().map(|(k, &c)| c * (k as u128 + 1) * 8).sum();
    if bytes > guard as u128 {
        return Err(Failure::Guard(format!("nerve needs about {bytes} bytes, guard is {guard}")));
    }
    Ok(())
}

fn series_json(s: &MotSeries, q: Option<i64>) -> Value {
    let mut v = s.to_json();
    if let Some(q) = q {
        let at_q: Vec<Value> = s.specialize(q).iter().map(rational_json).collect();
        v["specialized"] = json!({"q": q, "coefficients": at_q});
    }
    v
}

fn family_of(a: &FamilyArgs) -> Result<Family, Failure> {
    let FamilyArgs { name, n, ref letters, k, bottom, p, seed, ref sets, .. } = *a;
    let need_n = || n.ok_or_else(|| Failure::Invalid(format!("{name:?} needs --n")));
    let need_letters = || {
        if letters.is_empty() {
            Err(Failure::Invalid(format!("{name:?} needs --letters")))
        } else {
            Ok(letters.clone())
        }
    };
    Ok(match name {
        FamilyName::Chain => Family::Chain { n: need_n()? as usize },
        FamilyName::Antichain => Family::Antichain { m: need_n()? as usize },
        FamilyName::Boolean => Family::Boolean { n: need_n()? as usize },
        FamilyName::Divisors => Family::Divisors { n: need_n()? },
        FamilyName::Configuration => Family::Configuration { letters: need_letters()?, k },
        FamilyName::Symmetric => Family::Symmetric {
            letters: need_letters()?,
            k: k.ok_or_else(|| Failure::Invalid("symmetric needs --k".into()))?,
            bottom,
        },
        FamilyName::Random => Family::Random { n: need_n()? as usize, p, seed },
        FamilyName::Cover => {
            let sets = sets.as_deref().ok_or_else(|| Failure::Invalid("cover needs --sets".into()))?;
            Family::Cover { sets: sets.split(';').map(|s| s.split(',').map(|x| x.trim().to_string()).collect()).collect() }
        }
    })
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let guard = cli.guard_bytes;
    Ok(match cli.command {
        Command::Family(args) => {
            let mut poset = family_of(&args)?.build()?;
            for &t in &args.transform {
                poset = match t {
                    Transform::Cone => families::cone(&poset)?,
                    Transform::Cocone => families::cocone(&poset)?,
                    Transform::Barycentric => families::barycentric(&poset)?,
                };
            }
            if let Some(path) = &args.join {
                poset = families::join(&poset, &load_poset(path)?)?;
            }
            Report { command: "family", result: poset.to_json_value(), ok: true }
        }
        Command::Mobius { poset, method } => {
            let p = load_poset(&poset)?;
            guard_nerve(&p, guard)?;
            let table = |m: &Incidence<'_, inclex_core::BigInt>| -> Value {
                m.pairs().map(|(&(a, b), v)| json!({"a": p.id(a), "b": p.id(b), "mu": bigint_json(v)})).collect()
            };
            let mut result = json!({});
            let inv = (method != Method::Topological).then(|| mobius_by_inversion::<inclex_core::BigInt>(&p));
            let top = (method != Method::Inversion).then(|| mobius_topological(&p));
            if let Some(m) = &inv {
                result["inversion"] = table(m);
            }
            if let Some(m) = &top {
                result["topological"] = table(m);
            }
            let ok = match (&inv, &top) {
                (Some(a), Some(b)) => {
                    result["agree"] = json!(a == b);
                    a == b
                }
                _ => true,
            };
            Report { command: "mobius", result, ok }
        }
        Command::Nerve { poset } => {
            let p = load_poset(&poset)?;
            guard_nerve(&p, guard)?;
            let (chi, chi_reduced) = p.euler_characteristics();
            let betti = |reduced| -> Value { nerve_betti(&p, reduced).iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into() };
            let result = json!({
                "elements": p.len(),
                "chain_counts": p.chain_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "betti": betti(false),
                "reduced_betti": betti(true),
                "chi": chi,
                "chi_reduced": chi_reduced,
                "center": p.find_center().map(|c| p.id(c).to_string()),
            });
            Report { command: "nerve", result, ok: true }
        }
        Command::SsRank { poset } => {
            let p = load_poset(&poset)?;
            guard_nerve(&p, guard)?;
            let r = rank_e1_report(&p)?;
            Report { command: "ss-rank", result: r.to_json(), ok: r.passes() }
        }
        Command::SsSkeletalCompare { alphabet, cutoff } => {
            if alphabet == 0 || cutoff == 0 {
                return Err(Failure::Invalid("alphabet and cutoff must be positive".into()));
            }
            let bytes = skeletal_total_dim(alphabet, cutoff).saturating_mul(256);
            if bytes > guard as u128 {
                return Err(Failure::Guard(format!("complexes need about {bytes} bytes, guard is {guard}")));
            }
            let (e, r) = skeletal_compare(alphabet, cutoff)?;
            let result = json!({
                "complex": e.to_json(),
                "comparison": r.to_json(),
                "euler_matches_series_inverse": e.euler_matches_series_inverse()?,
            });
            Report { command: "ss-skeletal-compare", result, ok: r.filtered_quasi_iso() }
        }
        Command::Zeta { variety, n, specialize_q } => {
            let x = load_variety(&variety)?;
            Report { command: "zeta", result: json!({"variety": x.to_json(), "zeta": series_json(&kapranov_zeta(&x, n), specialize_q)}), ok: true }
        }
        Command::ZetaInvert { variety, n, specialize_q } => {
            let x = load_variety(&variety)?;
            let inv = kapranov_zeta(&x, n).invert()?;
            Report { command: "zeta-invert", result: json!({"variety": x.to_json(), "inverse": series_json(&inv, specialize_q)}), ok: true }
        }
        Command::StableLimit { variety, n, keep } => {
            let x = load_variety(&variety)?;
            let v = stable_limit(&x, n, keep)?;
            Report { command: "stable-limit", result: json!({"variety": x.to_json(), "n": n, "value": v.to_json(), "display": v.to_string()}), ok: true }
        }
        Command::StableBetti { variety_cohomology, dim, kmax } => {
            let v = GradedWeightedSpace::from_json_str(&read(&variety_cohomology)?)?;
            if dim < 0 {
                return Err(Failure::Invalid("--dim must be nonnegative".into()));
            }
            v.check_pure()?;
            let t = stable_homology_table(&v, kmax);
            let euler = t.weighted_euler(dim + 1);
            let mut result = t.to_json();
            result["weighted_euler_s"] = json!({"value": euler.to_json(), "display": euler.to_string()});
            Report { command: "stable-betti", result, ok: true }
        }
        Command::Count { oracle, q, d, parts } => {
            let need_d = || d.ok_or_else(|| Failure::Invalid("this oracle needs --d".into()));
            let (count, params) = match oracle {
                Oracle::Squarefree => (count_squarefree_monic(q, need_d()?)?, json!({"q": q, "d": d})),
                Oracle::SmoothP1 => (count_smooth_sections_p1(q, need_d()?)?, json!({"q": q, "d": d})),
                Oracle::Colored => (count_colored_configs(q, &parts)?, json!({"q": q, "parts": parts})),
                Oracle::ColoredP1 => (count_colored_configs_p1(q, &parts)?, json!({"q": q, "parts": parts})),
            };
            let name = oracle.to_possible_value().expect("named").get_name().to_string();
            Report { command: "count", result: json!({"oracle": name, "params": params, "count": count}), ok: true }
        }
        Command::Density { q, dmin, dmax } => {
            if dmin < 1 || dmin > dmax {
                return Err(Failure::Invalid("need 1 <= dmin <= dmax".into()));
            }
            Report { command: "density", result: density_report(q, dmin..=dmax)?.to_json(), ok: true }
        }
        Command::Check { suite, q, n } => {
            if suite == "vw" && (q.is_some() || n.is_some()) {
                let r = vw_inversion_check(q.unwrap_or(2), n.unwrap_or(4))?;
                return Ok(Report { command: "check", result: r.to_json(), ok: r.passes });
            }
            let verdicts = if suite == "all" {
                suites::run_all()
            } else {
                vec![suites::run(&suite).ok_or_else(|| Failure::Invalid(format!("unknown suite `{suite}`; known: all, {}", suites::names().join(", "))))?]
            };
            for v in &verdicts {
                eprintln!("{}", v.line());
            }
            let ok = verdicts.iter().all(|v| v.ok());
            let result = json!({
                "suites": verdicts.iter().map(|v| json!({
                    "id": v.id,
                    "name": v.name,
                    "passed": v.passed,
                    "within_time_limit": v.within_limit(),
                    "time_limit_s": v.limit.map(|l| l.as_secs()),
                    "detail": v.detail,
                })).collect::<Vec<_>>(),
                "all_passed": ok,
            });
            Report { command: "check", result, ok }
        }
    })
}

/// `path<TAB>value` lines, one per leaf.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push(format!("{prefix}\t{v}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            let doc = json!({"version": VERSION, "command": report.command, "result": report.result});
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&doc).expect("json"),
                Format::Table => {
                    let mut lines = Vec::new();
                    flatten("", &doc, &mut lines);
                    lines.join("\n")
                }
            };
            // A closed pipe downstream is not our failure.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
