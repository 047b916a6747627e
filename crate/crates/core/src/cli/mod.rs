//! Command-line front end.

mod output;
mod spec_file;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arithmetic::{level_data, prime_fixed_check, sl_index};
use crate::budget::{exponents, total_envelope, BudgetParams};
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::group_spec::{parse_group_spec, render_group_spec};
use crate::invariants::{k_report, k_richardson_asserted};
use crate::local_data::{weyl_discriminant, Place, RationalMatrix};
use crate::mellin::{exp_preset, fp_mellin_with, truncation_tail, DEFAULT_TOLERANCE};
use crate::orbits::{list_orbits, orbit_dim, OrbitType};
use crate::parabolic::{dim_unipotent_radical, enumerate_parabolic_subsets, levi_of};
use crate::reproduce::{self, Fault};
use crate::root_datum::{Series, SimpleType};

pub use output::round15;
use output::{envelope, float, rational};

#[derive(Parser, Debug)]
#[command(name = "tracegeo", version, about = "Root data, parabolic subsets, orbit dimensions, k(G), discriminants, level indices, Mellin finite parts and error budgets")]
pub struct Cli {
    /// Emit versioned JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decay invariant k(G) of a group specification.
    K(KArgs),
    /// Nilpotent orbits of a classical type (`gl4`, `A3`, `B2`, `C3`, `D4`).
    Orbits { ty: String },
    /// Parabolic subsets containing the maximal split torus.
    Parabolics { spec: String },
    /// Generalized Weyl discriminant of a semisimple rational matrix.
    Discriminant(DiscArgs),
    /// Principal congruence subgroup index.
    Index(IndexArgs),
    /// Level utilities.
    Levels {
        #[command(subcommand)]
        command: LevelsCommand,
    },
    /// Finite part at s = 0 of a regularized Mellin transform.
    MellinFp(MellinArgs),
    /// Feasible beta and lambda and the resulting error exponents.
    Budget(BudgetArgs),
    /// Run the full check suite.
    Reproduce {
        /// Perturb one value to confirm failures are reported (`k-sl4`).
        #[arg(long)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Args, Debug)]
struct KArgs {
    /// Group specification, e.g. `A3`, `D4xA1+T1`, `A1@res=3`.
    spec: String,
    /// JSON file with a rational root datum.
    #[arg(long)]
    relative: Option<PathBuf>,
    /// Restriction-of-scalars degree (overrides `@res=`).
    #[arg(long)]
    degree: Option<u32>,
    /// Report a single method.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Fail unless the Richardson value equals the pair enumeration.
    #[arg(long)]
    assume_richardson: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Pairs,
    Richardson,
    Minorbit,
}

#[derive(Args, Debug)]
struct DiscArgs {
    /// n x n JSON array of rationals (`"num/den"` strings or integers), or `@file`.
    #[arg(long)]
    matrix: String,
    /// Primes at which to report |D|_p.
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[arg(long, default_value = "sl")]
    group: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    level: u64,
}

#[derive(Subcommand, Debug)]
enum LevelsCommand {
    /// Whether all levels have prime divisors in one fixed set.
    CheckPrimeFixed {
        #[arg(value_delimiter = ',', required = true)]
        levels: Vec<u64>,
        /// Allowed primes (defaults to the support of the first level).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Factorization and S(N).
    Info { level: u64 },
}

#[derive(Args, Debug)]
struct MellinArgs {
    /// Built-in function family: `exp` is t^power e^{-lambda t}.
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Rational power of t multiplying the exponential.
    #[arg(long, default_value = "0")]
    power: String,
    /// Number of Taylor terms after the leading one.
    #[arg(long, default_value_t = 12)]
    order: usize,
    /// Split point.
    #[arg(long)]
    t0: Option<f64>,
    /// JSON description {terms, t0, remainder_order, decay, preset | samples}.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Also report the truncated tail from this T.
    #[arg(long)]
    tail: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long)]
    k: f64,
    #[arg(long = "C2", default_value_t = 1.0)]
    c2: f64,
    #[arg(long = "C4", default_value_t = 1.0)]
    c4: f64,
    #[arg(long = "Cn", default_value_t = 1.0)]
    cn: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 0.0)]
    cprime: f64,
    /// log-power from the global coefficient bound
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// log-power from the non-archimedean bound
    #[arg(long, default_value_t = 0.0)]
    m: f64,
    /// Evaluate the total envelope at this level.
    #[arg(long)]
    level: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    vol: f64,
}

/// Parse arguments, run, print, and map the outcome to an exit code.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let json = cli.json;
    match run(cli) {
        Ok((value, text, code)) => {
            let mut out = std::io::stdout().lock();
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json"))
            } else {
                write!(out, "{text}")
            };
            ExitCode::from(code)
        }
        Err(e) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&output::error(&e)).expect("json"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("TRACEGEO_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// JSON value, text rendering and exit code of one invocation.
pub fn run(cli: Cli) -> Result<(Value, String, u8)> {
    match cli.command {
        Command::K(a) => cmd_k(a),
        Command::Orbits { ty } => cmd_orbits(&ty),
        Command::Parabolics { spec } => cmd_parabolics(&spec),
        Command::Discriminant(a) => cmd_discriminant(a),
        Command::Index(a) => cmd_index(a),
        Command::Levels { command } => cmd_levels(command),
        Command::MellinFp(a) => cmd_mellin(a),
        Command::Budget(a) => cmd_budget(a),
        Command::Reproduce { inject_fault } => Ok(cmd_reproduce(inject_fault)),
    }
}

fn ok(v: Value, text: String) -> Result<(Value, String, u8)> {
    Ok((v, text, 0))
}

fn cmd_k(a: KArgs) -> Result<(Value, String, u8)> {
    let mut g = parse_group_spec(&a.spec)?;
    if let Some(d) = a.degree {
        g = g.with_degree(d)?;
    }
    if let Some(path) = a.relative {
        g.relative_path = Some(path);
    }
    g.resolve_relative()?;
    if a.assume_richardson {
        k_richardson_asserted(&g)?;
    }
    let r = k_report(&g)?;
    let opt = |x: &Option<Q>| x.as_ref().map_or(Value::Null, rational);
    let (label, k) = match a.method {
        None => ("default", r.k.clone()),
        Some(Method::Pairs) => (
            "pairs",
            r.pairs.clone().ok_or_else(|| {
                Error::Resource("pair enumeration is limited to semisimple rank 8".into())
            })?,
        ),
        Some(Method::Richardson) => ("richardson", r.relative.clone().unwrap_or(r.richardson.clone())),
        Some(Method::Minorbit) => ("minorbit", r.min_orbit.clone()),
    };
    let group = render_group_spec(&g);
    let v = envelope(
        "k",
        json!({
            "group": group,
            "method": label,
            "k": rational(&k),
            "values": {
                "pairs": opt(&r.pairs),
                "richardson": rational(&r.richardson),
                "min_orbit": rational(&r.min_orbit),
                "relative": opt(&r.relative),
            },
            "disagreement": r.disagreement,
        }),
    );
    let show = |x: &Option<Q>| x.as_ref().map_or("-".to_string(), |q| q.to_string());
    let mut text = format!("k({group}) = {k}\n");
    text += &format!(
        "  pairs {}  richardson {}  min-orbit {}  relative {}\n",
        show(&r.pairs),
        r.richardson,
        r.min_orbit,
        show(&r.relative)
    );
    if r.disagreement {
        text += "  note: the rational datum disagrees with the geometric value\n";
    }
    ok(v, text)
}

fn parse_orbit_type(text: &str) -> Result<OrbitType> {
    let t = text.trim();
    let bad = |m: &str| Error::Parse {
        offset: 0,
        message: format!("{m}: {t:?}"),
    };
    if let Some(n) = t.strip_prefix("gl").or_else(|| t.strip_prefix("GL")) {
        let n: usize = n.parse().map_err(|_| bad("expected gl<n>"))?;
        if n == 0 {
            return Err(bad("gl(0) is empty"));
        }
        return Ok(OrbitType::Gl(n));
    }
    let mut chars = t.chars();
    let series = chars
        .next()
        .and_then(Series::from_char)
        .ok_or_else(|| bad("expected gl<n> or a type like C3"))?;
    let rank: usize = chars.as_str().parse().map_err(|_| bad("bad rank"))?;
    Ok(OrbitType::Simple(SimpleType::new(series, rank)?))
}

fn cmd_orbits(ty: &str) -> Result<(Value, String, u8)> {
    let t = parse_orbit_type(ty)?;
    let labels = list_orbits(t)?;
    let mut text = format!("{} orbits of {t}\n", labels.len());
    let rows: Vec<Value> = labels
        .iter()
        .map(|l| {
            let d = orbit_dim(l);
            let mut flags = Vec::new();
            if l.very_even {
                flags.push("very_even");
            }
            if l.is_trivial() {
                flags.push("trivial");
            }
            text += &format!("  {l:<24} dim {d}{}\n", if l.very_even { "  (very even: two orbits)" } else { "" });
            json!({"label": l.to_string(), "dim": d, "flags": flags})
        })
        .collect();
    ok(envelope("orbits", json!({"type": t.to_string(), "orbits": rows})), text)
}

fn cmd_parabolics(spec: &str) -> Result<(Value, String, u8)> {
    let g = parse_group_spec(spec)?;
    let rs = g.root_system()?;
    let all = enumerate_parabolic_subsets(&rs)?;
    let mut text = format!("{} parabolic subsets of {}\n", all.len(), render_group_spec(&g));
    let roots = |set: &crate::parabolic::RootSet| -> Vec<Vec<i64>> {
        set.iter().map(|i| rs.ambient_vector(i)).collect()
    };
    let rows: Vec<Value> = all
        .iter()
        .map(|p| {
            let l = levi_of(&rs, p);
            let dim_v = dim_unipotent_radical(&rs, p);
            text += &format!(
                "  |P| = {:<3} |L| = {:<3} dim V = {:<3} dim a_M = {}\n",
                p.members().len(),
                l.levi_roots().len(),
                dim_v,
                l.a_m_dim()
            );
            json!({
                "members": roots(p.members()),
                "levi": roots(l.levi_roots()),
                "dim_V": dim_v,
                "a_M_dim": l.a_m_dim(),
            })
        })
        .collect();
    ok(
        envelope(
            "parabolics",
            json!({"group": render_group_spec(&g), "count": rows.len(), "parabolics": rows}),
        ),
        text,
    )
}

fn read_arg_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn cmd_discriminant(a: DiscArgs) -> Result<(Value, String, u8)> {
    let text = read_arg_or_file(&a.matrix)?;
    let raw: Vec<Vec<Value>> = serde_json::from_str(&text).map_err(|e| Error::Parse {
        offset: e.column().saturating_sub(1),
        message: format!("matrix must be a JSON array of rows: {e}"),
    })?;
    let cells: Vec<Vec<String>> = raw
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s),
                    Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                    other => Err(Error::Parse {
                        offset: 0,
                        message: format!("entry {other} is not an integer or \"num/den\" string"),
                    }),
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = RationalMatrix::from_strings(&cells)?;
    let d = weyl_discriminant(&m)?;
    let mut abs_p = serde_json::Map::new();
    let mut text = format!("D = {}\n|D|_inf = {}\n", d.value, d.abs_inf);
    for &p in &a.primes {
        let place: Place = p.to_string().parse()?;
        let Place::Prime(p) = place else { unreachable!() };
        let v = d.abs_p(p);
        text += &format!("|D|_{p} = {v}\n");
        abs_p.insert(p.to_string(), rational(&v));
    }
    let vals: serde_json::Map<String, Value> = d
        .p_valuations
        .iter()
        .map(|(p, v)| (p.to_string(), json!(v)))
        .collect();
    ok(
        envelope(
            "discriminant",
            json!({
                "value": rational(&d.value),
                "abs_inf": rational(&d.abs_inf),
                "p_valuations": vals,
                "abs_p": abs_p,
                "fully_factored": d.fully_factored(),
            }),
        ),
        text,
    )
}

fn cmd_index(a: IndexArgs) -> Result<(Value, String, u8)> {
    if !a.group.eq_ignore_ascii_case("sl") {
        return Err(Error::Domain(format!(
            "only SL(n) indices are built in, got group {:?}",
            a.group
        )));
    }
    let r = sl_index(a.n, a.level)?;
    let mut text = format!("|SL({}, Z/{})| = {}\n", a.n, a.level, r.value);
    if !r.neat {
        text += "  note: level below 3, this is the raw group order\n";
    }
    ok(
        envelope(
            "index",
            json!({"group": "sl", "n": a.n, "level": a.level, "index": r.value.to_string(), "neat": r.neat}),
        ),
        text,
    )
}

fn cmd_levels(c: LevelsCommand) -> Result<(Value, String, u8)> {
    match c {
        LevelsCommand::CheckPrimeFixed { levels, primes } => {
            let r = prime_fixed_check(&levels, primes.as_deref())?;
            let mut text = format!(
                "prime-fixed: {}\n  reference primes {:?}\n  union {:?}\n",
                r.prime_fixed, r.reference, r.union
            );
            for (n, ps) in &r.offenders {
                text += &format!("  {n} brings in {ps:?}\n");
            }
            let v = serde_json::to_value(&r).expect("serializable");
            ok(envelope("levels check-prime-fixed", v), text)
        }
        LevelsCommand::Info { level } => {
            let d = level_data(level)?;
            let text = format!(
                "N = {level}: {:?}\n  S(N) = {:?}, |S(N)| <= 2 ln N: {}\n",
                d.factorization,
                d.primes,
                d.prime_count_bound_holds()
            );
            let mut v = serde_json::to_value(&d).expect("serializable");
            v["bound_holds"] = json!(d.prime_count_bound_holds());
            ok(envelope("levels info", v), text)
        }
    }
}

fn cmd_mellin(a: MellinArgs) -> Result<(Value, String, u8)> {
    let (f, mut e) = match (&a.spec, a.preset.as_deref()) {
        (Some(path), _) => spec_file::load(path)?,
        (None, Some("exp")) | (None, None) => {
            let power = crate::exact::parse_rational(&a.power)?;
            exp_preset(a.lambda, power, a.order)?
        }
        (None, Some(other)) => {
            return Err(Error::Domain(format!("unknown preset {other:?} (known: exp)")))
        }
    };
    if let Some(t0) = a.t0 {
        e = e.with_t0(t0)?;
    }
    let fp = fp_mellin_with(&f, &e, a.tol)?;
    let mut fields = json!({
        "value": float(fp.value),
        "c_minus1": float(fp.c_minus1),
        "c0": float(fp.c0),
        "error_estimate": float(fp.error_estimate),
        "t0": float(e.t0()),
    });
    let mut text = format!(
        "FP = {}\n  c_-1 = {}  c_0 = {}  error ~ {:.1e}\n",
        round15(fp.value),
        round15(fp.c_minus1),
        round15(fp.c0),
        fp.error_estimate
    );
    if let Some(t) = a.tail {
        let tail = truncation_tail(&f, t)?;
        fields["tail"] = json!({"T": float(t), "value": float(tail.value), "envelope": float(tail.envelope)});
        text += &format!("  tail from T = {t}: {} (envelope {})\n", round15(tail.value), round15(tail.envelope));
    }
    ok(envelope("mellin-fp", fields), text)
}

fn cmd_budget(a: BudgetArgs) -> Result<(Value, String, u8)> {
    let mut p = BudgetParams::feasible(a.k, a.c2, a.c4, a.cn, a.eps, a.cprime)?;
    p.b_conj = a.b;
    p.m_nonarch = a.m;
    p.validate()?;
    let e = exponents(&p)?;
    let mut fields = json!({
        "beta": float(p.beta),
        "lambda": float(p.lambda),
        "exponents": {"e_spec": float(e.e_spec), "e1": float(e.e1), "e2": float(e.e2)},
        "all_ok": e.all_ok,
        "a_exponent": float(p.a_exponent()),
    });
    let mut text = format!(
        "beta = {}\nlambda = {}\nexponents: spectral {}  E1 {}  E2 {}\nall <= -k: {}\na = b + m = {}\n",
        round15(p.beta),
        round15(p.lambda),
        round15(e.e_spec),
        round15(e.e1),
        round15(e.e2),
        e.all_ok,
        round15(p.a_exponent())
    );
    if let Some(level) = a.level {
        let env = total_envelope(level, p.k, p.a_exponent(), a.vol)?;
        let (t, r) = p.schedule(level)?;
        fields["envelope"] = json!({"level": level, "value": float(env), "T": float(t), "R": float(r)});
        text += &format!("envelope at N = {level}: {}  (T = {}, R = {})\n", round15(env), round15(t), round15(r));
    }
    ok(envelope("budget", fields), text)
}

fn cmd_reproduce(fault: Option<Fault>) -> (Value, String, u8) {
    let report = reproduce::run(fault);
    let mut text = String::new();
    for c in &report.checks {
        text += &format!(
            "[{}] {:>2}. {} ({} ms)\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.millis
        );
        if !c.passed {
            text += &format!("       expected: {}\n       actual:   {}\n", c.expected, c.actual);
        }
    }
    text += &format!(
        "{} of {} checks passed in {} ms\n",
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len(),
        report.millis
    );
    let failures: Vec<Value> = report
        .failures()
        .iter()
        .map(|c| json!({"id": c.id, "name": c.name}))
        .collect();
    let v = envelope(
        "reproduce",
        json!({
            "passed": report.passed,
            "millis": report.millis,
            "checks": report.checks,
            "failures": failures,
        }),
    );
    (v, text, if report.passed { 0 } else { 1 })
}
