use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aasipp::benchmark::{run_benchmark, BenchmarkError, BenchmarkOptions};
use aasipp::generator::{generate, GeneratorSpec, MapKind};
use aasipp::io::{self, FormatError, InstanceFile, SolutionFile};
use aasipp::par::Execution;
use aasipp::prioritized::Instance;
use aasipp::robustness::{plan_robust, simulate_execution, DelayModel, RobustnessConfig};
use aasipp::validate::{validate_solution, CheckMode, DEFAULT_DT};
use aasipp::{PlannerConfig, PriorityScheme};

const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "aasipp", version, about = "Any-angle safe interval planning for heterogeneous disk robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one instance and write the solution.
    Plan {
        #[arg(long)]
        instance: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        planner: PlannerArgs,
        #[command(flatten)]
        robust: RobustArgs,
    },
    /// Check a solution for structural errors and collisions.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, value_enum, default_value = "analytic")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute a solution with injected delays and report collisions.
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        robust: RobustArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write random instances.
    Generate {
        #[arg(long, default_value_t = 64)]
        width: usize,
        #[arg(long, default_value_t = 64)]
        height: usize,
        /// Rectangular obstacles; 0 gives an empty map.
        #[arg(long, default_value_t = 0)]
        obstacles: usize,
        #[arg(long, default_value_t = 20)]
        obstacle_length: usize,
        #[arg(long, default_value_t = 2)]
        obstacle_thickness: usize,
        /// Robots of each of the three standard types.
        #[arg(long, default_value_t = 5)]
        per_type: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Instance `k` is generated from `seed + k`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Plan, certify and aggregate a batch of instance files.
    Benchmark {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        /// Keep only the first k robots of each type (generated files only).
        #[arg(long)]
        per_type: Option<usize>,
        #[command(flatten)]
        planner: PlannerArgs,
        #[command(flatten)]
        robust: RobustArgs,
        /// Simulate every solution with this seed when delays are given.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        solutions_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PlannerArgs {
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 3.0)]
    ssi_duration: f64,
    #[arg(long, default_value_t = 60.0)]
    timeout_s: f64,
    #[arg(long, default_value_t = 2)]
    neighborhood: u32,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    any_angle: bool,
    #[arg(long)]
    max_reschedules: Option<usize>,
    #[arg(long, value_enum, default_value = "distance-ascending")]
    priority_scheme: SchemeArg,
}

#[derive(Args)]
struct RobustArgs {
    #[arg(long, default_value_t = 0.0)]
    inflation: f64,
    /// Wait inserted before every translation.
    #[arg(long, default_value_t = 0.0)]
    d: f64,
    #[arg(long, value_enum, default_value = "none")]
    delay_model: DelayArg,
    /// Maximum (uniform) or constant (fixed) delay per translation.
    #[arg(long, default_value_t = 0.0)]
    delay: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    DistanceAscending,
    AsGiven,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelayArg {
    None,
    Uniform,
    Fixed,
}

impl PlannerArgs {
    fn config(&self) -> PlannerConfig {
        PlannerConfig {
            delta: self.delta,
            ssi_duration: self.ssi_duration,
            timeout_s: self.timeout_s,
            neighborhood: self.neighborhood,
            any_angle: self.any_angle,
            max_reschedules: self.max_reschedules,
            priority_scheme: match self.priority_scheme {
                SchemeArg::DistanceAscending => PriorityScheme::DistanceAscending,
                SchemeArg::AsGiven => PriorityScheme::AsGiven,
            },
            wait_floor: 0.0,
        }
    }
}

impl RobustArgs {
    fn config(&self) -> RobustnessConfig {
        RobustnessConfig {
            inflation: self.inflation,
            d: self.d,
            delay_model: match self.delay_model {
                DelayArg::None => DelayModel::None,
                DelayArg::Uniform => DelayModel::Uniform { max_delay: self.delay },
                DelayArg::Fixed => DelayModel::Fixed { delay: self.delay },
            },
        }
    }

    fn is_default(&self) -> bool {
        self.config() == RobustnessConfig::default()
    }
}

enum Failure {
    Usage(String),
    NoSolution(String),
    Invariant(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let file: InstanceFile = io::read_json(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    file.to_instance()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn checked(planner: &PlannerArgs, robust: &RobustArgs) -> Result<(PlannerConfig, RobustnessConfig), Failure> {
    let cfg = planner.config();
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let rcfg = robust.config();
    rcfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((cfg, rcfg))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Plan {
            instance,
            out,
            planner,
            robust,
        } => {
            let inst = read_instance(&instance)?;
            let (cfg, rcfg) = checked(&planner, &robust)?;
            let sol = plan_robust(&inst, &cfg, &rcfg).map_err(|f| Failure::NoSolution(f.to_string()))?;
            let mut echo = cfg;
            echo.wait_floor = rcfg.d;
            io::write_json(out.as_deref(), &SolutionFile::from_solution(&sol, &echo, true))?;
        }
        Command::Validate {
            instance,
            solution,
            mode,
            dt,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let file: SolutionFile = io::read_json(&solution)?;
            let sol = file.to_solution()?;
            let mode = match mode {
                ModeArg::Analytic => CheckMode::Analytic,
                ModeArg::Sampled if dt > 0.0 => CheckMode::Sampled { dt },
                ModeArg::Sampled => return Err(Failure::Usage(format!("dt must be positive, got {dt}"))),
            };
            let report = validate_solution(&sol, &inst, mode).map_err(|e| Failure::Usage(e.to_string()))?;
            io::write_json(out.as_deref(), &report)?;
            if !report.is_clean() {
                return Err(Failure::NoSolution(format!("{} conflict(s)", report.conflicts.len())));
            }
        }
        Command::Simulate {
            instance,
            solution,
            robust,
            seed,
            out,
        } => {
            let inst = read_instance(&instance)?;
            let rcfg = robust.config();
            rcfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let sol = io::read_json::<SolutionFile>(&solution)?.to_solution()?;
            if sol.trajectories.len() != inst.robots.len() {
                return Err(FormatError::RobotCount {
                    got: sol.trajectories.len(),
                    expected: inst.robots.len(),
                }
                .into());
            }
            let (trace, report) = simulate_execution(&sol, &inst, &rcfg, seed);
            let doc = serde_json::json!({ "seed": seed, "conflicts": report.conflicts, "trace": trace });
            io::write_json(out.as_deref(), &doc)?;
            if !report.is_clean() {
                return Err(Failure::NoSolution(format!("{} conflict(s) during execution", report.conflicts.len())));
            }
        }
        Command::Generate {
            width,
            height,
            obstacles,
            obstacle_length,
            obstacle_thickness,
            per_type,
            count,
            seed,
            out_dir,
        } => {
            let map = if obstacles == 0 {
                MapKind::Empty
            } else {
                MapKind::Rectangles {
                    count: obstacles,
                    length: obstacle_length,
                    thickness: obstacle_thickness,
                }
            };
            let spec = GeneratorSpec::mixed(width, height, map, per_type);
            std::fs::create_dir_all(&out_dir).map_err(FormatError::from)?;
            for k in 0..count {
                let s = seed.wrapping_add(k as u64);
                let meta = generate(&spec, s).map_err(|e| Failure::Usage(e.to_string()))?;
                let path = out_dir.join(format!("instance_{k:04}.json"));
                io::write_json(Some(&path), &InstanceFile::from_instance(&meta.instance, Some(s)))?;
            }
        }
        Command::Benchmark {
            instances,
            per_type,
            planner,
            robust,
            seed,
            sequential,
            out,
            solutions_dir,
        } => {
            let (cfg, rcfg) = checked(&planner, &robust)?;
            let mut batch = Vec::with_capacity(instances.len());
            for path in &instances {
                let mut inst = read_instance(path)?;
                if let Some(k) = per_type {
                    inst = truncate_per_type(&inst, k);
                }
                batch.push(inst);
            }
            let opts = BenchmarkOptions {
                planner: cfg,
                robustness: (!robust.is_default()).then_some(rcfg),
                seed,
                execution: if sequential { Execution::Sequential } else { Execution::Parallel },
            };
            let outcome = run_benchmark(&batch, &opts).map_err(|e| match e {
                BenchmarkError::Invalid { .. } | BenchmarkError::Malformed { .. } => Failure::Invariant(e.to_string()),
            })?;
            if let Some(dir) = solutions_dir {
                std::fs::create_dir_all(&dir).map_err(FormatError::from)?;
                for (k, sol) in outcome.solutions.iter().enumerate() {
                    if let Some(sol) = sol {
                        io::write_json(Some(&dir.join(format!("solution_{k:04}.json"))), sol)?;
                    }
                }
            }
            io::write_json(out.as_deref(), &outcome.report)?;
        }
    }
    Ok(())
}

/// Keeps the first `k` robots of every (radius, speed, rotation) class.
fn truncate_per_type(inst: &Instance, k: usize) -> Instance {
    let mut classes: Vec<([u64; 3], usize)> = Vec::new();
    let robots = inst
        .robots
        .iter()
        .filter(|r| {
            let key = [r.radius.to_bits(), r.v_translate.to_bits(), r.omega_rotate.to_bits()];
            match classes.iter_mut().find(|(c, _)| *c == key) {
                Some((_, n)) => {
                    *n += 1;
                    *n <= k
                }
                None => {
                    classes.push((key, 1));
                    k >= 1
                }
            }
        })
        .copied()
        .collect();
    Instance::new(inst.map.clone(), robots)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::NoSolution(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_NO_SOLUTION)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("INVARIANT VIOLATION: {m}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
