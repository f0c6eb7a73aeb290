//! Batch runs: plan every instance, certify every success, aggregate.
//!
//! Instances are independent, so they are spread over workers with
//! [`Execution`]; each `plan_all` call stays sequential. Results come back in
//! input order regardless of the execution mode.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::PlannerConfig;
use crate::io::SolutionFile;
use crate::par::Execution;
use crate::prioritized::{plan_all, FailureKind, Instance, Solution};
use crate::robustness::{plan_robust, simulate_execution, RobustnessConfig};
use crate::validate::{validate_solution, CheckMode, ConflictReport};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOptions {
    pub planner: PlannerConfig,
    pub robustness: Option<RobustnessConfig>,
    /// Surfaced in the report; also seeds execution simulation.
    pub seed: u64,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Solved {
        flowtime: f64,
        makespan: f64,
        attempts: usize,
        /// Present when execution was simulated with delays.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        execution_conflicts: Option<usize>,
    },
    Failed {
        kind: FailureKind,
        robot: usize,
        attempts: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub index: usize,
    pub robots: usize,
    pub runtime_s: f64,
    #[serde(flatten)]
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub seed: u64,
    pub planner: PlannerConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub robustness: Option<RobustnessConfig>,
    pub instances: usize,
    pub solved: usize,
    /// `None` for an empty batch; means are over solved instances only.
    pub success_rate_pct: Option<f64>,
    pub mean_runtime_s: Option<f64>,
    pub mean_flowtime: Option<f64>,
    pub mean_makespan: Option<f64>,
    pub runs: Vec<RunResult>,
}

pub struct BenchmarkOutcome {
    pub report: BenchmarkReport,
    /// Per instance, without runtimes, so identical inputs give identical files.
    pub solutions: Vec<Option<SolutionFile>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BenchmarkError {
    #[error("instance {index}: planner returned an INVALID solution with {} conflict(s): {:?}", report.conflicts.len(), report.conflicts.first())]
    Invalid { index: usize, report: ConflictReport },
    #[error("instance {index}: planner returned a malformed solution: {reason}")]
    Malformed { index: usize, reason: String },
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn run_one(
    index: usize,
    instance: &Instance,
    opts: &BenchmarkOptions,
) -> Result<(RunResult, Option<Solution>), BenchmarkError> {
    let started = Instant::now();
    let (planned, checked) = match &opts.robustness {
        Some(r) => (plan_robust(instance, &opts.planner, r), instance.inflated(r.inflation)),
        None => (plan_all(instance, &opts.planner), instance.clone()),
    };
    let sol = match planned {
        Ok(sol) => sol,
        Err(f) => {
            let run = RunResult {
                index,
                robots: instance.robots.len(),
                runtime_s: started.elapsed().as_secs_f64(),
                status: RunStatus::Failed {
                    kind: f.kind,
                    robot: f.robot,
                    attempts: f.attempts,
                },
            };
            return Ok((run, None));
        }
    };
    let report = validate_solution(&sol, &checked, CheckMode::Analytic).map_err(|e| BenchmarkError::Malformed {
        index,
        reason: e.to_string(),
    })?;
    if !report.is_clean() {
        return Err(BenchmarkError::Invalid { index, report });
    }
    let execution_conflicts = opts.robustness.map(|r| {
        let (_, rep) = simulate_execution(&sol, instance, &r, opts.seed.wrapping_add(index as u64));
        rep.conflicts.len()
    });
    let run = RunResult {
        index,
        robots: instance.robots.len(),
        runtime_s: sol.elapsed.as_secs_f64(),
        status: RunStatus::Solved {
            flowtime: sol.flowtime,
            makespan: sol.makespan,
            attempts: sol.attempts,
            execution_conflicts,
        },
    };
    Ok((run, Some(sol)))
}

/// Plans and certifies every instance. Any certified conflict aborts the
/// whole batch: it means the planner is wrong, not that the instance is hard.
pub fn run_benchmark(instances: &[Instance], opts: &BenchmarkOptions) -> Result<BenchmarkOutcome, BenchmarkError> {
    let indexed: Vec<(usize, &Instance)> = instances.iter().enumerate().collect();
    let results = opts.execution.map(&indexed, |&(i, inst)| run_one(i, inst, opts));

    let mut runs = Vec::with_capacity(results.len());
    let mut solutions = Vec::with_capacity(results.len());
    for r in results {
        let (run, sol) = r?;
        runs.push(run);
        solutions.push(sol.map(|s| SolutionFile::from_solution(&s, &opts.planner, false)));
    }

    let solved: Vec<&RunResult> = runs
        .iter()
        .filter(|r| matches!(r.status, RunStatus::Solved { .. }))
        .collect();
    let metric = |f: fn(&RunStatus) -> f64| mean(solved.iter().map(|r| f(&r.status)));
    let report = BenchmarkReport {
        seed: opts.seed,
        planner: opts.planner.clone(),
        robustness: opts.robustness,
        instances: runs.len(),
        solved: solved.len(),
        success_rate_pct: (!runs.is_empty()).then(|| 100.0 * solved.len() as f64 / runs.len() as f64),
        mean_runtime_s: mean(solved.iter().map(|r| r.runtime_s)),
        mean_flowtime: metric(|s| match s {
            RunStatus::Solved { flowtime, .. } => *flowtime,
            RunStatus::Failed { .. } => unreachable!(),
        }),
        mean_makespan: metric(|s| match s {
            RunStatus::Solved { makespan, .. } => *makespan,
            RunStatus::Failed { .. } => unreachable!(),
        }),
        runs,
    };
    Ok(BenchmarkOutcome { report, solutions })
}
