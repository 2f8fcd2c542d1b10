use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quidd::grover::{self, BenchRow, OperatorSizes};
use quidd::verify::{self, VerifyOptions};
use quidd::{Error, GroverInstance, Manager, OraclePattern, RunOptions, ToleranceConfig};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Grover's search and friends on quantum decision diagrams.
#[derive(Parser)]
#[command(name = "quidd", version)]
struct Cli {
    /// Terminal merge tolerance.
    #[arg(long, global = true, env = "QUIDD_EPS", default_value_t = quidd::DEFAULT_EPS)]
    eps: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one search instance.
    Run {
        #[arg(long)]
        data_qubits: u32,
        /// One character per data qubit: 0, 1 or d (don't care).
        #[arg(long)]
        pattern: String,
        /// Overrides the optimal iteration count.
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-iteration CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Measure the final state.
        #[arg(long)]
        measure: bool,
    },
    /// Node counts of the Grover operators.
    Opsizes {
        #[arg(long, default_value_t = 20)]
        min_qubits: u32,
        #[arg(long, default_value_t = 100)]
        max_qubits: u32,
        #[arg(long, default_value_t = 10)]
        step: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare against the dense reference.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_data_qubits: u32,
        #[arg(long, default_value_t = 2003)]
        seed: u64,
        /// Random H/X/CNOT circuits to check.
        #[arg(long, default_value_t = 20)]
        circuits: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Scaling benchmark with the all-ones oracle.
    Bench {
        #[arg(long)]
        min: u32,
        #[arg(long)]
        max: u32,
        /// Best of this many runs per size.
        #[arg(long, default_value_t = 1)]
        repeats: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn cmd_run(
    tolerance: ToleranceConfig,
    data_qubits: u32,
    pattern: &str,
    opts: RunOptions,
    trace: Option<&Path>,
) -> Result<ExitCode, Error> {
    let pattern: OraclePattern = pattern.parse()?;
    if pattern.len() != data_qubits as usize {
        return Err(Error::PatternLength {
            pattern: pattern.len(),
            qubits: data_qubits,
        });
    }
    let mut mgr = Manager::with_tolerance(tolerance);
    let inst = GroverInstance::new(&mut mgr, data_qubits, pattern)?;
    let t = grover::run(&mut mgr, &inst, opts)?;
    println!("qubits: {}", inst.total_qubits());
    println!("solutions: {}", inst.solutions());
    println!("iterations: {}", t.iterations);
    println!("optimal_iterations: {}", t.optimal_iterations);
    println!("success_probability: {}", grover::format_float(t.final_success_probability));
    println!("peak_node_count: {}", t.peak_node_count);
    println!("wall_time_s: {:.6}", t.wall_time.as_secs_f64());
    if let Some(index) = t.measured_index {
        let data = index >> 1;
        let hit = inst.pattern.matches(data);
        println!(
            "measured: {data:0width$b} ({})",
            if hit { "solution" } else { "miss" },
            width = data_qubits as usize
        );
    }
    if let Some(path) = trace {
        t.write_csv(output(Some(path))?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_opsizes(min: u32, max: u32, step: u32, out: Option<&Path>) -> Result<ExitCode, Error> {
    if step == 0 || min < 2 || min > max {
        return Err(Error::Usage(format!("need 2 <= min <= max and step > 0, got {min}..{max} step {step}")));
    }
    let rows = (min..=max)
        .step_by(step as usize)
        .map(grover::operator_size_report)
        .collect::<Result<Vec<OperatorSizes>, _>>()?;
    grover::write_operator_sizes_csv(&rows, output(out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(opts: VerifyOptions) -> Result<ExitCode, Error> {
    let report = verify::run_suite(&opts, |case| match &case.divergence {
        None => println!("PASS {} (max error {:.1e})", case.name, case.max_error),
        Some(d) => println!("FAIL {}: {d}", case.name),
    })?;
    let failed = report.cases.iter().filter(|c| !c.passed()).count();
    println!("{} cases, {failed} failed", report.cases.len());
    if let Some(first) = report.first_failure() {
        let d = first.divergence.as_ref().expect("failed case");
        eprintln!("first divergence: {} at {d}", first.name);
        return Ok(ExitCode::from(EXIT_VERIFY));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(tolerance: ToleranceConfig, min: u32, max: u32, repeats: u32, out: Option<&Path>) -> Result<ExitCode, Error> {
    if min == 0 || min > max {
        return Err(Error::Usage(format!("need 1 <= min <= max, got {min}..{max}")));
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for k in min..=max {
        let row = grover::bench_one(k, repeats, tolerance)?;
        eprintln!(
            "k={k} iterations={} time={:.3}s peak_nodes={}",
            row.iterations,
            row.wall_time.as_secs_f64(),
            row.peak_node_count
        );
        rows.push(row);
    }
    grover::write_bench_csv(&rows, output(out)?)?;
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    let tolerance = ToleranceConfig::new(cli.eps)?;
    match cli.command {
        Command::Run {
            data_qubits,
            pattern,
            iterations,
            seed,
            trace,
            measure,
        } => {
            let seed = if measure { Some(seed.unwrap_or(0)) } else { None };
            let opts = RunOptions {
                iterations,
                trace: trace.is_some(),
                seed,
            };
            cmd_run(tolerance, data_qubits, &pattern, opts, trace.as_deref())
        }
        Command::Opsizes {
            min_qubits,
            max_qubits,
            step,
            out,
        } => cmd_opsizes(min_qubits, max_qubits, step, out.as_deref()),
        Command::Verify {
            max_data_qubits,
            seed,
            circuits,
            inject_fault,
        } => cmd_verify(VerifyOptions {
            max_data_qubits,
            seed,
            random_circuits: circuits,
            inject_fault,
            tolerance,
            ..VerifyOptions::default()
        }),
        Command::Bench { min, max, repeats, out } => cmd_bench(tolerance, min, max, repeats, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::from(EXIT_USAGE)
            }
        }
    }
}
