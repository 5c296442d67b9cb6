//! `resonax`: resonance invariants of torus actions from the command line.
//!
//! Every subcommand prints a JSON report on stdout (or `--output`) and a
//! short human summary on stderr. Exit status: 0 pass, 1 mathematical
//! failure, 2 usage or input error.

mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use resonax_core::mc::{self, DomainSpec};
use resonax_core::reproduce::{self, ReproduceConfig, CRITERIA};
use resonax_core::{
    check_admissible, check_compliance, enumerate_weight_space, nonneg_weight_bound,
    quasi_circular_bound, quasi_resonance, resonance, Error as CoreError, WeightWarning,
};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "resonax",
    version,
    about = "Resonance and quasi-resonance of diagonal torus actions"
)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Seed for Monte Carlo commands.
    #[arg(long, global = true, env = "RESONAX_SEED", default_value_t = mc::DEFAULT_SEED)]
    seed: u64,

    /// Accepted samples for Monte Carlo commands.
    #[arg(long, global = true, default_value_t = mc::DEFAULT_COUNT)]
    count: u64,

    /// More detail in the stderr summary.
    #[arg(long, short, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Admissibility certificate: positive functional or invariant monomial.
    Check {
        /// Weight matrix, inline JSON or file: [[..],..] or {"rows": [[..],..]}.
        #[arg(long)]
        rho: String,
    },
    /// Monomial basis of the weight space V_k.
    WeightSpace {
        #[arg(long)]
        rho: String,
        /// Character as a JSON integer array.
        #[arg(long)]
        k: String,
    },
    /// Resonance sets and orders.
    Resonance {
        #[arg(long)]
        rho: String,
    },
    /// Quasi-resonance sets and orders of rho relative to rho'.
    QuasiResonance {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        rhop: String,
    },
    /// Coarse degree bound next to the exact order. With --rhop, the
    /// quasi-circular bound for weight vectors; without, the bound for a
    /// nonnegative weight matrix.
    Bound {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        rhop: Option<String>,
    },
    /// Checks a polynomial map against the degree bounds.
    VerifyMap {
        /// Map as a list of term lists, one per component.
        #[arg(long)]
        map: String,
        #[arg(long)]
        rho: String,
        /// Target weights; defaults to --rho.
        #[arg(long)]
        rhop: Option<String>,
    },
    /// Monte Carlo checks.
    #[command(subcommand)]
    Mc(McCommand),
    /// Runs the acceptance criteria.
    Reproduce {
        /// Run only these criteria (1-8); repeatable.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=8))]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum McCommand {
    /// Orthogonality of weight spaces of distinct characters.
    Orthogonality {
        /// Domain spec, e.g. {"kind":"unit-ball","n":2}.
        #[arg(long)]
        domain: String,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Both sides of the change-of-variables pairing identity.
    ChangeOfVariables {
        #[arg(long)]
        map: String,
        /// Exact inverse; computed for triangular maps when omitted.
        #[arg(long)]
        inverse: Option<String>,
        /// Source domain D.
        #[arg(long)]
        domain: String,
        /// Target domain D'; defaults to the image of D under the map.
        #[arg(long)]
        image: Option<String>,
        /// Test polynomial on D.
        #[arg(long)]
        phi: String,
        /// Test polynomial on D'.
        #[arg(long)]
        psi: String,
    },
    /// Invariance of the domain under the torus action.
    Invariance {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        rho: String,
    },
    /// Estimate of <p, q> on the domain.
    InnerProduct {
        #[arg(long)]
        domain: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

/// What a command produced.
struct Outcome {
    report: Value,
    summary: String,
    passed: bool,
}

impl Outcome {
    fn new(report: impl Serialize, summary: String, passed: bool) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(report)?,
            summary,
            passed,
        })
    }
}

fn warnings_line(w: &[WeightWarning]) -> String {
    if w.is_empty() {
        String::new()
    } else {
        format!(
            " (warnings: {})",
            serde_json::to_string(w).unwrap_or_default()
        )
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { rho } => {
            let (a, warnings) = input::weights("--rho", rho)?;
            let cert = check_admissible(&a)?;
            let summary = match (&cert.positive_functional, &cert.witness) {
                (Some(l), _) => format!(
                    "admissible: positive functional [{}]",
                    l.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                (_, Some(w)) => format!("not admissible: z^{w} is invariant"),
                _ => "no certificate".into(),
            };
            let passed = cert.is_admissible();
            Outcome::new(
                json!({ "certificate": cert, "warnings": warnings }),
                summary + &warnings_line(&warnings),
                passed,
            )
        }
        Command::WeightSpace { rho, k } => {
            let (a, _) = input::weights("--rho", rho)?;
            let k = input::character("--k", k)?;
            let space = enumerate_weight_space(&a, &k)?;
            let summary = match &space {
                Some(s) => format!(
                    "V_{k} has dimension {} with degrees {}..{}",
                    s.dimension(),
                    s.min_degree,
                    s.max_degree
                ),
                None => format!("V_{k} is empty"),
            };
            let report = match space {
                Some(s) => serde_json::to_value(s)?,
                None => json!({ "character": k, "basis": [], "dimension": 0 }),
            };
            Outcome::new(report, summary, true)
        }
        Command::Resonance { rho } => {
            let (a, _) = input::weights("--rho", rho)?;
            let r = resonance(&a)?;
            let summary = format!("resonance orders {:?}, order {}", r.orders, r.order);
            Outcome::new(r, summary, true)
        }
        Command::QuasiResonance { rho, rhop } => {
            let (a, _) = input::weights("--rho", rho)?;
            let (b, _) = input::weights("--rhop", rhop)?;
            let r = quasi_resonance(&a, &b)?;
            let summary = format!("quasi-resonance orders {:?}, order {}", r.orders, r.order);
            Outcome::new(r, summary, true)
        }
        Command::Bound { rho, rhop } => match rhop {
            Some(rhop) => {
                let m = input::weight_vector("--rho", rho)?;
                let mp = input::weight_vector("--rhop", rhop)?;
                let r = quasi_circular_bound(&m, &mp)?;
                let summary = format!(
                    "quasi-circular: exact order {} <= coarse bound {}",
                    r.exact_order, r.coarse_bound
                );
                Outcome::new(
                    json!({ "kind": "quasi-circular", "report": r }),
                    summary,
                    true,
                )
            }
            None => {
                let (a, _) = input::weights("--rho", rho)?;
                let r = nonneg_weight_bound(&a)?;
                let summary = format!(
                    "nonnegative weights: exact order {} <= coarse bound {}",
                    r.exact_order, r.global_bound
                );
                Outcome::new(json!({ "kind": "nonnegative", "report": r }), summary, true)
            }
        },
        Command::VerifyMap { map, rho, rhop } => {
            let f = input::polymap("--map", map)?;
            let (a, _) = input::weights("--rho", rho)?;
            let b = match rhop {
                Some(s) => input::weights("--rhop", s)?.0,
                None => a.clone(),
            };
            let r = check_compliance(&f, &a, &b)?;
            let failing: Vec<usize> = r
                .components
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.index + 1)
                .collect();
            let summary = if r.passed {
                format!(
                    "compliant (order {}, Jacobian {})",
                    r.quasi_resonance_order, r.jacobian.determinant
                )
            } else {
                format!(
                    "not compliant: origin fixed {}, constant nonzero Jacobian {}, failing components {failing:?}",
                    r.origin_fixed,
                    r.jacobian.constant && r.jacobian.nonzero
                )
            };
            let passed = r.passed;
            Outcome::new(r, summary, passed)
        }
        Command::Mc(cmd) => run_mc(cli, cmd),
        Command::Reproduce { criteria } => {
            let config = ReproduceConfig {
                seed: cli.seed,
                count: cli.count,
            };
            let ids: Vec<u8> = if criteria.is_empty() {
                CRITERIA.iter().map(|c| c.0).collect()
            } else {
                criteria.clone()
            };
            let mut outcomes = Vec::new();
            for id in ids {
                let o = reproduce::run_criterion(id, &config).context("unknown criterion")?;
                eprintln!("{}", o.summary_line());
                outcomes.push(o);
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let passed = failed == 0;
            let summary = format!(
                "{} of {} criteria passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            Outcome::new(
                json!({ "seed": cli.seed, "count": cli.count, "criteria": outcomes, "passed": passed }),
                summary,
                passed,
            )
        }
    }
}

fn run_mc(cli: &Cli, cmd: &McCommand) -> Result<Outcome> {
    let (seed, count) = (cli.seed, cli.count);
    match cmd {
        McCommand::Orthogonality {
            domain,
            rho,
            max_degree,
        } => {
            let spec = input::domain("--domain", domain)?;
            let (a, _) = input::weights("--rho", rho)?;
            let r = mc::check_orthogonality(&spec, &a, *max_degree, seed, count)?;
            let summary = format!(
                "{} pairs, worst z {:.2} (threshold {}), family false-alarm bound {:.3}%",
                r.pair_count,
                r.worst_z,
                r.threshold_sigmas,
                100.0 * r.family_false_alarm_bound
            );
            let passed = r.passed;
            Outcome::new(r, summary, passed)
        }
        McCommand::ChangeOfVariables {
            map,
            inverse,
            domain,
            image,
            phi,
            psi,
        } => {
            let f = input::polymap("--map", map)?;
            let inverse = inverse
                .as_deref()
                .map(|s| input::polymap("--inverse", s))
                .transpose()?;
            let spec = input::domain("--domain", domain)?;
            let image = match image {
                Some(s) => input::domain("--image", s)?,
                None => DomainSpec::ShearImage {
                    base: Box::new(spec.clone()),
                    map: f.clone(),
                    inverse: inverse.clone(),
                },
            };
            let n = f.n();
            let phi = input::polynomial("--phi", phi, n)?;
            let psi = input::polynomial("--psi", psi, n)?;
            let r = mc::check_change_of_variables(
                &f,
                inverse.as_ref(),
                &spec,
                &image,
                &phi,
                &psi,
                seed,
                count,
            )?;
            let summary = format!(
                "LHS {:.6}{:+.6}i, RHS {:.6}{:+.6}i, |diff| {:.3e} (tolerance {:.3e}, {:.3e})",
                r.lhs.value.re,
                r.lhs.value.im,
                r.rhs.value.re,
                r.rhs.value.im,
                r.difference.norm(),
                r.tolerance_re,
                r.tolerance_im
            );
            let passed = r.passed;
            Outcome::new(r, summary, passed)
        }
        McCommand::Invariance { domain, rho } => {
            let spec = input::domain("--domain", domain)?;
            let (a, _) = input::weights("--rho", rho)?;
            let r = mc::check_invariance(&spec, &a, seed, count)?;
            let summary = match &r.witness {
                None => format!("invariant on {} sampled pairs", r.samples),
                Some(w) => format!(
                    "{} violations in {} samples; first image has defining value {:.6}",
                    r.violations, r.samples, w.image_value
                ),
            };
            let passed = r.passed;
            Outcome::new(r, summary, passed)
        }
        McCommand::InnerProduct { domain, p, q } => {
            let spec = input::domain("--domain", domain)?;
            let n = mc::Domain::new(&spec)?.n();
            let p = input::polynomial("--p", p, n)?;
            let q = input::polynomial("--q", q, n)?;
            let e = mc::mc_inner_product(&spec, &p, &q, seed, count)?;
            let summary = format!(
                "<p, q> = {:.6}{:+.6}i (stderr {:.2e}, {:.2e})",
                e.value.re, e.value.im, e.stderr_re, e.stderr_im
            );
            Outcome::new(e, summary, true)
        }
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    match &cli.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            let status = if outcome.passed { "PASS" } else { "FAIL" };
            eprintln!("{status}: {}", outcome.summary);
            if cli.verbose > 0 {
                eprintln!("seed {}, count {}", cli.seed, cli.count);
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            // An inadmissible action is a mathematical answer, not bad input.
            let (code, extra) = match e.downcast_ref::<CoreError>() {
                Some(CoreError::Inadmissible { witness }) => (1, json!({ "witness": witness })),
                _ => (2, Value::Null),
            };
            let mut report = json!({ "error": format!("{e:#}") });
            if let Value::Object(extra) = extra {
                report.as_object_mut().expect("object").extend(extra);
            }
            let _ = emit(&cli, &report);
            eprintln!("{}: {e:#}", if code == 1 { "FAIL" } else { "error" });
            ExitCode::from(code)
        }
    }
}
