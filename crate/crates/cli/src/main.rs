//! `collab`: analyze collaborative human-algorithm prediction scenarios at
//! the loss level — complementarity verdicts, impossibility screens,
//! fairness audits, constrained reliance-weight optimization, and golden
//! table/figure reproduction.
//!
//! Exit codes: 0 on success, 1 when a requested check fails, 2 on input
//! errors.

// Validation deliberately uses `!(x > 0.0)`-style comparisons so NaN fails
// the check and is rejected alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod format;
mod report;
mod reproduce;
mod scenario;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use collab_core::{
    complementarity_sweep, falsification_sweep_default, optimal_tabular_weights, Baseline,
    SweepTarget, WeightConstraintSet,
};

use format::{csv_row, sig9};
use report::{check_claim, run_analysis, CheckStatus};
use scenario::{load_scenario, load_sweep_config};

#[derive(Parser)]
#[command(
    name = "collab",
    version,
    about = "Loss-level analysis of human-algorithm collaborative prediction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a scenario: per-regime table, complementarity verdict,
    /// screens, condition reports, and fairness audit.
    Analyze {
        /// Scenario JSON file.
        file: PathBuf,
        /// Emit the full-precision machine-readable report instead of text.
        #[arg(long)]
        json: bool,
        /// Also write the per-regime table as CSV to this path ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check proven claims against a scenario (PASS / FAIL / SKIPPED per claim).
    Check {
        /// Scenario JSON file.
        file: PathBuf,
        /// Claim tag, or "all".
        #[arg(long)]
        lemma: String,
    },
    /// Minimize the combined average over tabular weights under constraints.
    Optimize {
        /// Scenario JSON file.
        file: PathBuf,
        /// Cap on the combined loss disparity (max pairwise |c_i - c_j|).
        #[arg(long)]
        max_disparity: Option<f64>,
        /// Require strict per-regime benefit over this baseline.
        #[arg(long, value_parser = ["human", "algorithm"])]
        require_benefit: Option<String>,
        /// Emit the result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a delta-grid complementarity sweep from a sweep config file.
    Sweep {
        /// Sweep configuration JSON file.
        config: PathBuf,
        /// Write the full grid as CSV to this path ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recompute a golden artifact and compare it to its committed values.
    Reproduce {
        /// table1..table6, fig2, fig3, or "all".
        target: String,
        /// Write the computed artifact as CSV to this path ("-" for stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized counterexample search against a proven claim.
    Falsify {
        /// Claim tag, or "all".
        #[arg(long)]
        lemma: String,
        /// Number of random trials per claim.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(path: &PathBuf, content: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        print!("{content}");
        Ok(())
    } else {
        fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
    }
}

fn parse_targets(tag: &str) -> Result<Vec<SweepTarget>> {
    if tag == "all" {
        return Ok(SweepTarget::ALL.to_vec());
    }
    let target = SweepTarget::parse(tag).map_err(|_| {
        let tags: Vec<&str> = SweepTarget::ALL.iter().map(|t| t.tag()).collect();
        anyhow!(
            "unknown claim tag {tag:?}; valid tags: {}, all",
            tags.join(", ")
        )
    })?;
    Ok(vec![target])
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

/// Ok(true) = success, Ok(false) = a check failed (exit 1).
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze { file, json, csv } => {
            let (scenario, warnings) = load_scenario(&file)?;
            warn(&warnings);
            let analysis = run_analysis(scenario)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&analysis.render_json())?);
            } else {
                print!("{}", analysis.render_text());
            }
            if let Some(path) = csv {
                emit(&path, &analysis.render_csv())?;
            }
            Ok(true)
        }
        Command::Check { file, lemma } => {
            let (scenario, warnings) = load_scenario(&file)?;
            warn(&warnings);
            let analysis = run_analysis(scenario)?;
            let mut all_ok = true;
            for target in parse_targets(&lemma)? {
                let (status, detail) = check_claim(&analysis, target);
                println!("check {}: {} ({detail})", target.tag(), status.label());
                all_ok &= status != CheckStatus::Fail;
            }
            Ok(all_ok)
        }
        Command::Optimize {
            file,
            max_disparity,
            require_benefit,
            json,
        } => {
            let (scenario, warnings) = load_scenario(&file)?;
            warn(&warnings);
            let analysis = run_analysis(scenario)?;
            let constraints = WeightConstraintSet {
                max_combined_disparity: max_disparity,
                require_benefit: require_benefit
                    .as_deref()
                    .map(|b| Baseline::parse(b).map_err(|e| anyhow!("{e}")))
                    .transpose()?,
                ..WeightConstraintSet::default()
            };
            let result = optimal_tabular_weights(&analysis.system, &constraints)
                .map_err(|e| anyhow!("{e}"))?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "scenario": analysis.scenario.name,
                        "current_average": analysis.combined.average,
                        "optimal_weights": result.weights,
                        "optimal_average": result.average,
                        "active_constraints": result.active,
                    }))?
                );
            } else {
                println!("scenario: {}", analysis.scenario.name);
                println!(
                    "current combiner average: {}",
                    sig9(analysis.combined.average)
                );
                let weights: Vec<String> = result.weights.iter().map(|w| sig9(*w)).collect();
                println!("optimal tabular weights: [{}]", weights.join(", "));
                println!("optimal average: {}", sig9(result.average));
                if result.active.is_empty() {
                    println!("active constraints: none");
                } else {
                    println!("active constraints: {}", result.active.join("; "));
                }
            }
            Ok(true)
        }
        Command::Sweep { config, csv } => {
            let config = load_sweep_config(&config)?;
            let grid = config.to_grid()?;
            let outcome = complementarity_sweep(&grid).map_err(|e| anyhow!("{e}"))?;
            let total = outcome.cells.len();
            let masked = outcome.cells.iter().filter(|c| c.masked).count();
            let complementary = outcome.cells.iter().filter(|c| c.complementary).count();
            println!(
                "sweep {}: {} x {} grid, {} cells ({} masked), {} complementary",
                config.name,
                outcome.delta_a_values.len(),
                outcome.delta_h_values.len(),
                total,
                masked,
                complementary
            );
            if let Some(path) = csv {
                let mut lines = vec!["delta_a,delta_h,average,complementary,masked".to_string()];
                for cell in &outcome.cells {
                    lines.push(csv_row(&[
                        sig9(cell.delta_a),
                        sig9(cell.delta_h),
                        sig9(cell.average),
                        cell.complementary.to_string(),
                        cell.masked.to_string(),
                    ]));
                }
                emit(&path, &(lines.join("\n") + "\n"))?;
            }
            Ok(true)
        }
        Command::Reproduce { target, out } => {
            let targets: Vec<String> = if target == "all" {
                reproduce::TABLE_TARGETS
                    .iter()
                    .map(|t| t.to_string())
                    .chain(["fig2".to_string(), "fig3".to_string()])
                    .collect()
            } else {
                vec![target]
            };
            if out.is_some() && targets.len() > 1 {
                return Err(anyhow!("--out needs a single reproduction target"));
            }
            let mut all_pass = true;
            for t in targets {
                let rep = reproduce::reproduce(&t)?;
                print!("{}", rep.output);
                println!("reproduce {t}: {}", if rep.pass { "PASS" } else { "FAIL" });
                if let Some(path) = &out {
                    emit(path, &rep.csv)?;
                }
                all_pass &= rep.pass;
            }
            Ok(all_pass)
        }
        Command::Falsify {
            lemma,
            trials,
            seed,
        } => {
            let mut clean = true;
            for target in parse_targets(&lemma)? {
                let found = falsification_sweep_default(target, trials, seed)
                    .map_err(|e| anyhow!("{e}"))?;
                println!(
                    "falsify {}: {} trials, {} counterexamples",
                    target.tag(),
                    trials,
                    found.len()
                );
                for cx in found.iter().take(5) {
                    println!("  counterexample: {}", cx.detail);
                    println!("    probs: {:?}", cx.system.dist().probs());
                    println!("    human: {:?}", cx.system.human().losses());
                    println!("    algorithm: {:?}", cx.system.algorithm().losses());
                    println!("    rule: {:?}", cx.rule);
                }
                clean &= found.is_empty();
            }
            Ok(clean)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
