//! `gfsqrt`: square roots mod p, quadratic sums, the Diffie-Hellman demo,
//! conjecture sweeps and benchmarks from the command line.
//!
//! Every command produces one envelope (version "1") printed either as JSON
//! or as flattened `key: value` lines. Exit codes: 0 success, 2 usage
//! error, 3 internal invariant violation.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gfsqrt::bench::{run_bench, BenchConfig, BenchMethod};
use gfsqrt::conjecture::{run_sweep, SweepConfig};
use gfsqrt::field::sqrt_oracle;
use gfsqrt::qsum::{self, DhInstance, QSumCaps};
use gfsqrt::sqrt::{cipolla_lehmer, s_function_1mod6, s_function_trace};
use gfsqrt::{Error, FieldCtx, Fp, SqrtOutcome};

use config::FileConfig;
use output::{Envelope, Format};

const DEFAULT_SEED: u64 = 1;
const DEFAULT_RETRIES: u64 = 20;

#[derive(Parser, Debug)]
#[command(name = "gfsqrt", version, about = "Square roots in GF(p) and related experiments")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random choice (default 1).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true)]
    workers: Option<u64>,
    /// Settings file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Gfp3,
    Cl,
    Shanks,
    Qsum,
    Oracle,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Square root of d mod p.
    Sqrt {
        /// Prime modulus.
        #[arg(short)]
        p: u64,
        /// Target; for --method qsum this is n, which must divide p - 1.
        #[arg(short)]
        d: u64,
        /// Parameter b for gfp3 and cl; random retries when omitted.
        #[arg(short)]
        b: Option<u64>,
        /// Engine to use.
        #[arg(long, value_enum, default_value_t = Method::Gfp3)]
        method: Method,
        /// Random b values tried when -b is omitted.
        #[arg(long)]
        retries: Option<u64>,
    },
    /// Quadratic sum Q(g, p), or Q(g, h, p) with --h.
    Qsum {
        /// Prime modulus.
        #[arg(short)]
        p: u64,
        /// Element of GF(p)*.
        #[arg(short)]
        g: u64,
        /// Second argument for the general sum Q(g, h, p).
        #[arg(long)]
        h: Option<u64>,
    },
    /// Diffie-Hellman via quadratic sums, with known a and b for comparison.
    DhDemo {
        /// Prime modulus.
        #[arg(short)]
        p: u64,
        /// Generator.
        #[arg(short)]
        g: u64,
        /// Exponent a of the first public value.
        #[arg(short)]
        a: Option<u64>,
        /// Exponent b of the second public value.
        #[arg(short)]
        b: Option<u64>,
        /// Run this many random (a, b) instances and summarise.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Sweep conjectures over primes p = 5 (mod 6).
    Conjecture {
        /// Comma-separated ids 1-6.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        ids: Vec<u8>,
        /// Smallest prime swept.
        #[arg(long, default_value_t = 5)]
        p_min: u64,
        /// Largest prime swept.
        #[arg(long, default_value_t = 1000)]
        p_max: u64,
        /// Candidate (x, y) pairs tried per e before skipping.
        #[arg(long)]
        xyq_cap: Option<u64>,
        /// Largest b (and a for conjecture 4); whole field when omitted.
        #[arg(long)]
        b_max: Option<u64>,
        /// Largest e for conjectures 5 and 6.
        #[arg(long)]
        e_max: Option<u64>,
        /// Counterexamples kept per report (the count stays exact).
        #[arg(long)]
        max_recorded: Option<u64>,
        /// Also write the JSON envelope to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Time the square-root engines on random primes.
    Bench {
        /// Bit sizes of the random primes, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "32,48,60")]
        p_bits: Vec<u32>,
        /// Timed calls per method and size.
        #[arg(long, default_value_t = 200)]
        iters: usize,
        /// Engines to time: gfp3, cl, shanks.
        #[arg(long, value_delimiter = ',', default_value = "gfp3,cl,shanks")]
        methods: Vec<String>,
    },
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::usage(e.to_string())
        } else {
            Failure {
                code: 3,
                kind: "invariant",
                message: e.to_string(),
            }
        }
    }
}

type CmdResult = Result<(Value, Value), Failure>;

struct Ctx {
    file: FileConfig,
    seed: u64,
    workers: u64,
}

fn field(p: u64) -> Result<FieldCtx, Failure> {
    Ok(FieldCtx::new(p)?)
}

fn in_range(name: &str, v: u64, p: u64) -> Result<(), Failure> {
    if v >= p {
        Err(Failure::usage(format!("{name} = {v} must be below p = {p}")))
    } else {
        Ok(())
    }
}

fn outcome_json(out: SqrtOutcome<'_>, d: Fp<'_>) -> Value {
    match out {
        SqrtOutcome::Zero => json!({"outcome": "Zero", "root": null, "verified": null}),
        SqrtOutcome::Root(t) => json!({"outcome": "Root", "root": t.value(), "verified": t.square() == d}),
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn cmd_sqrt(c: &Ctx, p: u64, d: u64, b: Option<u64>, method: Method, retries: Option<u64>) -> CmdResult {
    let f = field(p)?;
    in_range("d", d, p)?;
    if let Some(b) = b {
        in_range("b", b, p)?;
        if b == 0 {
            return Err(Failure::usage("b must satisfy 0 < b < p"));
        }
    }
    let inputs = json!({"p": p, "d": d, "b": b, "method": format!("{method:?}").to_lowercase()});
    let target = f.elem(d);
    let result = match method {
        Method::Shanks => outcome_json(target.tonelli_shanks(), target),
        Method::Oracle => {
            let roots = sqrt_oracle(target)?;
            let verified = roots.iter().all(|r| r.square() == target);
            json!({"roots": roots.iter().map(|r| r.value()).collect::<Vec<_>>(), "verified": verified})
        }
        Method::Qsum => {
            let caps = QSumCaps::default();
            let cap = c.file.pick(None, "order_cap", caps.order_cap);
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let out = qsum::sqrt_via_qsum_capped(&f, d, cap, &mut rng)?;
            outcome_json(out, target)
        }
        Method::Gfp3 | Method::Cl => {
            let eval = |b: u64| -> Result<(SqrtOutcome<'_>, Value), Error> {
                let bf = f.elem(b);
                match method {
                    Method::Gfp3 if p % 6 == 5 => {
                        let tr = s_function_trace(target, bf)?;
                        let extra = json!({
                            "j": tr.j.value(),
                            "a": tr.a.value(),
                            "frobenius": tr.frobenius.map(|c| c.value()),
                            "irreducible": tr.irreducible,
                        });
                        Ok((tr.outcome, extra))
                    }
                    Method::Gfp3 => Ok((s_function_1mod6(target, bf)?, json!({}))),
                    _ => Ok((cipolla_lehmer(target, bf)?, json!({}))),
                }
            };
            let (b_used, attempts, out, extra) = match b {
                Some(b) => {
                    let (o, e) = eval(b)?;
                    (b, 1, o, e)
                }
                None => {
                    if target.legendre() != 1 {
                        return Err(Failure::usage(format!(
                            "d = {d} is not a nonzero quadratic residue mod {p}; random b cannot succeed"
                        )));
                    }
                    let cap = c.file.pick(retries, "retries", DEFAULT_RETRIES).max(1);
                    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                    let mut last = None;
                    for k in 1..=cap {
                        let b = rng.random_range(1..p);
                        let (o, e) = eval(b)?;
                        let done = !o.is_zero();
                        last = Some((b, k, o, e));
                        if done {
                            break;
                        }
                    }
                    last.expect("at least one attempt")
                }
            };
            merge(
                merge(json!({"b": b_used, "attempts": attempts}), outcome_json(out, target)),
                extra,
            )
        }
    };
    Ok((inputs, result))
}

fn cmd_qsum(c: &Ctx, p: u64, g: u64, h: Option<u64>) -> CmdResult {
    let f = field(p)?;
    in_range("g", g, p)?;
    let caps = QSumCaps::default();
    let inputs = json!({"p": p, "g": g, "h": h});
    let result = match h {
        None => {
            let cap = c.file.pick(None, "order_cap", caps.order_cap);
            let r = qsum::qsum_capped(f.elem(g), cap).map_err(cap_hint)?;
            json!({
                "n": r.n,
                "value": r.value.value(),
                "case_tag": r.case_tag,
                "case": format!("n = {} mod 4", r.case_tag),
                "verified": qsum::verify_qsum_case(&r),
            })
        }
        Some(h) => {
            in_range("h", h, p)?;
            let cap = c.file.pick(None, "general_cap", caps.general_cap);
            let v = qsum::qsum_general_capped(f.elem(g), f.elem(h), cap).map_err(cap_hint)?;
            json!({"value": v.value()})
        }
    };
    Ok((inputs, result))
}

fn cap_hint(e: Error) -> Failure {
    match e {
        Error::SumCapExceeded { .. } => Failure::usage(format!(
            "{e}; raise order_cap / general_cap in a --config file if you really want this sum"
        )),
        e => e.into(),
    }
}

fn dh_instance_json(f: &FieldCtx, g: Fp<'_>, a: u64, b: u64, cap: u64) -> Result<Value, Failure> {
    let ga = g.pow(a);
    let gb = g.pow(b);
    let truth = g.pow(((a as u128 * b as u128) % (f.modulus() as u128 - 1)) as u64);
    let inst = DhInstance::new(g, ga, gb)?;
    match qsum::dh_solve_capped(&inst, cap) {
        Ok(sol) => {
            let q = |h: Fp<'_>| qsum::qsum_general_capped(g, h, cap).map(|v| v.value());
            Ok(json!({
                "status": "solved",
                "ga": ga.value(),
                "gb": gb.value(),
                "q_g_1": q(f.one())?,
                "q_g_ga2": q(ga.square())?,
                "q_g_gb2": q(gb.square())?,
                "q_g_gab2": q((ga * gb).square())?,
                "g_a2": sol.gaa.value(),
                "g_b2": sol.gbb.value(),
                "g_apb2": sol.gab2.value(),
                "g_2ab": sol.g2ab.value(),
                "candidates": sol.candidates.map(|c| c.value()),
                "true_g_ab": truth.value(),
                "contains_truth": sol.candidates.contains(&truth),
            }))
        }
        Err(e @ (Error::Precondition(_) | Error::NonInvertibleQSum)) => Ok(json!({
            "status": "skipped",
            "reason": e.to_string(),
            "ga": ga.value(),
            "gb": gb.value(),
            "true_g_ab": truth.value(),
        })),
        Err(e @ Error::SumCapExceeded { .. }) => Err(cap_hint(e)),
        Err(e) => Err(e.into()),
    }
}

fn cmd_dh_demo(c: &Ctx, p: u64, g: u64, a: Option<u64>, b: Option<u64>, trials: Option<u64>) -> CmdResult {
    let f = field(p)?;
    in_range("g", g, p)?;
    if g == 0 {
        return Err(Failure::usage("g must be nonzero"));
    }
    let gf = f.elem(g);
    let cap = c.file.pick(None, "general_cap", QSumCaps::default().general_cap);
    let inputs = json!({"p": p, "g": g, "a": a, "b": b, "trials": trials});
    let result = match trials {
        None => {
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Failure::usage("dh-demo needs -a and -b, or --trials N"));
            };
            dh_instance_json(&f, gf, a, b, cap)?
        }
        Some(n) => {
            let ord = gf.mult_order()?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let (mut solved, mut hits, mut skipped) = (0u64, 0u64, 0u64);
            for _ in 0..n {
                let (a, b) = (rng.random_range(0..ord), rng.random_range(0..ord));
                let r = dh_instance_json(&f, gf, a, b, cap)?;
                if r["status"] == "solved" {
                    solved += 1;
                    hits += u64::from(r["contains_truth"] == true);
                } else {
                    skipped += 1;
                }
            }
            json!({
                "order": ord,
                "trials": n,
                "solved": solved,
                "skipped": skipped,
                "contains_truth": hits,
                "success_rate": if solved > 0 { hits as f64 / solved as f64 } else { 0.0 },
            })
        }
    };
    Ok((inputs, result))
}

#[allow(clippy::too_many_arguments)]
fn cmd_conjecture(
    c: &Ctx,
    ids: &[u8],
    p_min: u64,
    p_max: u64,
    xyq_cap: Option<u64>,
    b_max: Option<u64>,
    e_max: Option<u64>,
    max_recorded: Option<u64>,
) -> CmdResult {
    let defaults = SweepConfig::default();
    let cfg = SweepConfig {
        p_min,
        p_max,
        xyq_cap: c.file.pick(xyq_cap, "xyq_cap", defaults.xyq_cap),
        b_max: b_max.or_else(|| c.file.get("b_max")),
        e_max: e_max.or_else(|| c.file.get("e_max")),
        max_recorded: c.file.pick(max_recorded, "max_recorded", defaults.max_recorded as u64) as usize,
        workers: c.workers as usize,
    };
    let reports = run_sweep(&cfg, ids)?;
    let inputs = json!({
        "ids": ids,
        "p_min": p_min,
        "p_max": p_max,
        "xyq_cap": cfg.xyq_cap,
        "b_max": cfg.b_max,
        "e_max": cfg.e_max,
        "max_recorded": cfg.max_recorded,
        "workers": cfg.workers,
    });
    let held = reports.iter().all(|r| r.held());
    let result = json!({
        "all_held": held,
        "reports": serde_json::to_value(&reports).expect("reports serialize"),
    });
    Ok((inputs, result))
}

fn cmd_bench(c: &Ctx, p_bits: &[u32], iters: usize, methods: &[String]) -> CmdResult {
    let methods = methods
        .iter()
        .map(|m| m.parse::<BenchMethod>())
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = BenchConfig {
        bits: p_bits.to_vec(),
        iters,
        methods,
        seed: c.seed,
    };
    let report = run_bench(&cfg)?;
    let inputs = json!({
        "p_bits": p_bits,
        "iters": iters,
        "methods": cfg.methods.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "seed": c.seed,
    });
    Ok((inputs, serde_json::to_value(&report).expect("bench report serializes")))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Sqrt { .. } => "sqrt",
        Command::Qsum { .. } => "qsum",
        Command::DhDemo { .. } => "dh-demo",
        Command::Conjecture { .. } => "conjecture",
        Command::Bench { .. } => "bench",
    }
}

fn dispatch(cli: &Cli, c: &Ctx) -> CmdResult {
    match &cli.command {
        Command::Sqrt { p, d, b, method, retries } => cmd_sqrt(c, *p, *d, *b, *method, *retries),
        Command::Qsum { p, g, h } => cmd_qsum(c, *p, *g, *h),
        Command::DhDemo { p, g, a, b, trials } => cmd_dh_demo(c, *p, *g, *a, *b, *trials),
        Command::Conjecture {
            ids,
            p_min,
            p_max,
            xyq_cap,
            b_max,
            e_max,
            max_recorded,
            ..
        } => cmd_conjecture(c, ids, *p_min, *p_max, *xyq_cap, *b_max, *e_max, *max_recorded),
        Command::Bench { p_bits, iters, methods } => cmd_bench(c, p_bits, *iters, methods),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let file = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(msg) => return output::fail(cli.format, name, &Failure::usage(msg)),
    };
    let c = Ctx {
        seed: file.pick(cli.seed, "seed", DEFAULT_SEED),
        workers: file.pick(cli.workers, "workers", 0),
        file,
    };
    let start = Instant::now();
    match dispatch(&cli, &c) {
        Ok((inputs, result)) => {
            let env = Envelope::new(name, inputs, result, start.elapsed().as_nanos() as u64);
            if let Command::Conjecture { json: Some(path), .. } = &cli.command {
                let text = serde_json::to_string_pretty(&env.to_json()).expect("envelope serializes");
                if let Err(e) = std::fs::write(path, text + "\n") {
                    return output::fail(
                        cli.format,
                        name,
                        &Failure::usage(format!("cannot write {}: {e}", path.display())),
                    );
                }
            }
            env.print(cli.format);
            ExitCode::SUCCESS
        }
        Err(f) => output::fail(cli.format, name, &f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_family() {
        assert_eq!(Failure::from(Error::NotPrime(9)).code, 2);
        assert_eq!(Failure::from(Error::NonInvertibleQSum).code, 2);
        assert_eq!(Failure::from(Error::Invariant("x".into())).code, 3);
        assert_eq!(Failure::from(Error::ZeroC2).code, 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
