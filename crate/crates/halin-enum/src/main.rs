//! Command-line front end: validate and generate graph files, run the
//! enumeration engines sequentially or in parallel, verify against the
//! oracles, and print bound tables and speed-up benchmarks.
//!
//! Exit codes: 0 success / check PASS, 1 usage or parse failure,
//! 2 graph validation failure, 3 check FAIL, 4 resource cap hit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use halin_enum::check::{run_check_with, CheckOutcome};
use halin_enum::enumerate::{
    enumerate_with, EmissionWriter, EmittedTree, EnumConfig, EnumError, EnumReport, EnumSink,
};
use halin_enum::format as graph_format;
use halin_enum::halin::{build_halin, random_halin, HalinGraph};
use halin_enum::oracle::compute_bounds;
use halin_enum::parallel::{run_parallel, speedup_report, ConcurrentSink, ParallelConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_CHECK_FAIL: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

/// Above this vertex count the sink stops tracking distinct keys by default,
/// keeping memory bounded; emissions still stream.
const STREAM_DEFAULT_N: usize = 14;

#[derive(Parser)]
#[command(
    name = "halin-enum",
    version,
    about = "Spanning-tree enumeration for Halin graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Naive,
    Distinct,
}

impl ModeArg {
    fn config(self) -> EnumConfig {
        match self {
            ModeArg::Naive => EnumConfig::naive(),
            ModeArg::Distinct => EnumConfig::distinct(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    /// One `level=<k> edges=...` line per tree.
    Human,
    /// Canonical keys only, sorted, one per emission.
    Keys,
    /// JSON lines: emissions, then the report.
    Jsonl,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a graph file, printing n, p and d.
    Validate { file: PathBuf },
    /// Enumerate spanning trees of the graph in a file.
    Enumerate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Distinct)]
        mode: ModeArg,
        /// Run on this many workers instead of sequentially.
        #[arg(long, value_name = "K")]
        parallel: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Human)]
        format: FormatArg,
        /// Cap on retained trees / keys before aborting with exit 4.
        #[arg(long)]
        cap: Option<usize>,
        /// Rotate σ to start at this cycle-edge index.
        #[arg(long, default_value_t = 0)]
        sigma_start: usize,
        /// Task-tree depth beyond which parallel expansions run inline.
        #[arg(long, requires = "parallel")]
        depth_limit: Option<usize>,
    },
    /// Verify a graph against the counting and set oracles.
    Check {
        file: PathBuf,
        /// Vertex budget for the brute-force clauses.
        #[arg(long, default_value_t = 14)]
        guard: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Human)]
        format: FormatArg,
    },
    /// Generate random Halin graph files.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "N")]
        target_n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_children: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Print the per-level and total spanning-tree bounds for (p, d).
    Bounds {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Human)]
        format: FormatArg,
    },
    /// Time the engines across worker counts and report speed-up.
    Bench {
        /// Graph file; omit to generate one from --seed/--target-n.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "N", default_value_t = 24)]
        target_n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Distinct)]
        mode: ModeArg,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        workers: Vec<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Validate { file } => {
            let h = load_graph(&file)?;
            println!("n={} p={} d={}", h.n(), h.p(), h.d());
            Ok(())
        }
        Cmd::Enumerate {
            file,
            mode,
            parallel,
            format,
            cap,
            sigma_start,
            depth_limit,
        } => cmd_enumerate(&file, mode, parallel, format, cap, sigma_start, depth_limit),
        Cmd::Check {
            file,
            guard,
            format,
        } => cmd_check(&file, guard, format),
        Cmd::Gen {
            seed,
            target_n,
            count,
            max_children,
            dir,
        } => cmd_gen(seed, target_n, count, max_children, &dir),
        Cmd::Bounds { p, d, format } => cmd_bounds(p, d, format),
        Cmd::Bench {
            file,
            seed,
            target_n,
            mode,
            workers,
        } => cmd_bench(file.as_deref(), seed, target_n, mode, &workers),
    }
}

fn load_graph(path: &Path) -> Result<HalinGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot read {}: {e}", path.display())))?;
    let spec = graph_format::parse(&text)
        .map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    build_halin(spec).map_err(|e| fail(EXIT_VALIDATION, e.to_string()))
}

fn enum_failure(e: EnumError) -> Failure {
    match e {
        EnumError::SinkOverflow { .. } => fail(EXIT_RESOURCE, e.to_string()),
        other => fail(EXIT_USAGE, other.to_string()),
    }
}

fn cmd_enumerate(
    file: &Path,
    mode: ModeArg,
    parallel: Option<usize>,
    format: FormatArg,
    cap: Option<usize>,
    sigma_start: usize,
    depth_limit: Option<usize>,
) -> Result<(), Failure> {
    let h = load_graph(file)?;
    let cfg = mode.config().with_sigma_start(sigma_start);
    let track_keys = h.n() <= STREAM_DEFAULT_N;

    let mut sink =
        match format {
            FormatArg::Keys => EnumSink::counting_with_keys(),
            FormatArg::Human => EnumSink::streaming(Box::new(LineWriter::new(&h, false)))
                .with_key_tracking(track_keys),
            FormatArg::Jsonl => EnumSink::streaming(Box::new(LineWriter::new(&h, true)))
                .with_key_tracking(track_keys),
        };
    if let Some(cap) = cap {
        sink = sink.with_cap(cap);
    }

    let (result, sink) = match parallel {
        None => {
            let mut s = sink;
            let r = enumerate_with(&h, &cfg, &mut s);
            (r, s)
        }
        Some(workers) => {
            let shared = ConcurrentSink::new(sink);
            let mut pcfg = ParallelConfig::new(workers, cfg);
            pcfg.depth_limit = depth_limit;
            let r = run_parallel(&h, &pcfg, &shared).map(|(report, preport)| {
                match format {
                    FormatArg::Jsonl => {
                        println!("{}", serde_json::json!({ "parallel_report": preport }))
                    }
                    _ => eprintln!(
                        "parallel: workers={} tasks={} max_depth={} wall={:?}",
                        preport.workers,
                        preport.tasks_spawned,
                        preport.max_task_depth,
                        preport.wall_time
                    ),
                }
                report
            });
            (r, shared.into_inner())
        }
    };

    match result {
        Ok(report) => {
            if let FormatArg::Keys = format {
                let multiset = sink.key_multiset().expect("keys format always tracks keys");
                let mut keys: Vec<(String, u64)> =
                    multiset.iter().map(|(k, &m)| (k.to_string(), m)).collect();
                keys.sort();
                let mut out = std::io::BufWriter::new(std::io::stdout().lock());
                for (key, mult) in keys {
                    for _ in 0..mult {
                        writeln!(out, "{key}").map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
                    }
                }
                out.flush().map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            }
            match format {
                FormatArg::Jsonl => println!("{}", serde_json::to_string(&report).unwrap()),
                _ => eprintln!("{}", human_report(&report)),
            }
            Ok(())
        }
        Err(e) => {
            let mut sink = sink;
            let _ = sink.flush();
            let partial = sink.report(h.p(), 0);
            match format {
                FormatArg::Jsonl => {
                    let mut v = serde_json::to_value(&partial).unwrap();
                    v["partial"] = serde_json::Value::Bool(true);
                    println!("{v}");
                }
                _ => eprintln!("partial report (run aborted): {}", human_report(&partial)),
            }
            Err(enum_failure(e))
        }
    }
}

/// Buffered emission stream for the CLI: one line per tree, either the
/// `level=<k> edges=...` record or a JSON object. Buffering matters here;
/// the engine produces trees about an order of magnitude faster than
/// per-line stdout writes can keep up with.
struct LineWriter {
    out: std::io::BufWriter<std::io::Stdout>,
    labels: Vec<String>,
    json: bool,
    scratch: String,
}

impl LineWriter {
    fn new(h: &HalinGraph, json: bool) -> LineWriter {
        LineWriter {
            out: std::io::BufWriter::new(std::io::stdout()),
            labels: h.labels().to_vec(),
            json,
            scratch: String::with_capacity(128),
        }
    }
}

#[derive(serde::Serialize)]
struct EmissionRecord<'a> {
    level: usize,
    edges: Vec<[&'a str; 2]>,
}

impl EmissionWriter for LineWriter {
    fn write(&mut self, t: &EmittedTree) -> std::io::Result<()> {
        if self.json {
            let record = EmissionRecord {
                level: t.level,
                edges: t
                    .edges
                    .iter()
                    .map(|e| {
                        let (a, b) = e.endpoints();
                        [
                            self.labels[a.index()].as_str(),
                            self.labels[b.index()].as_str(),
                        ]
                    })
                    .collect(),
            };
            serde_json::to_writer(&mut self.out, &record)?;
            self.out.write_all(b"\n")
        } else {
            self.scratch.clear();
            let _ = write!(self.scratch, "level={} edges=", t.level);
            for (i, e) in t.edges.iter().enumerate() {
                if i > 0 {
                    self.scratch.push(' ');
                }
                let (a, b) = e.endpoints();
                let _ = write!(
                    self.scratch,
                    "{}-{}",
                    self.labels[a.index()],
                    self.labels[b.index()]
                );
            }
            self.scratch.push('\n');
            self.out.write_all(self.scratch.as_bytes())
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

fn human_report(report: &EnumReport) -> String {
    let levels: Vec<String> = report
        .per_level
        .iter()
        .map(|(l, c)| format!("{l}:{c}"))
        .collect();
    let duplicates: u64 = report
        .duplicate_multiplicities
        .iter()
        .filter(|(&m, _)| m > 1)
        .map(|(&m, &k)| (m - 1) * k)
        .sum();
    format!(
        "total={} distinct={} duplicates={} levels=[{}] max_delay={:?} mean_delay={:?}",
        report.total_emitted,
        report
            .distinct_count
            .map_or("-".to_string(), |d| d.to_string()),
        duplicates,
        levels.join(" "),
        report.max_delay,
        report.mean_delay,
    )
}

fn cmd_check(file: &Path, guard: usize, format: FormatArg) -> Result<(), Failure> {
    let h = load_graph(file)?;
    let outcome: CheckOutcome =
        run_check_with(&h, guard, &EnumConfig::distinct()).map_err(enum_failure)?;
    match format {
        FormatArg::Jsonl => {
            for clause in &outcome.clauses {
                println!("{}", serde_json::to_string(clause).unwrap());
            }
            println!(
                "{}",
                serde_json::json!({ "verdict": if outcome.passed() { "PASS" } else { "FAIL" } })
            );
        }
        _ => {
            for clause in &outcome.clauses {
                println!(
                    "{} {}: {}",
                    if clause.passed { "PASS" } else { "FAIL" },
                    clause.name,
                    clause.detail
                );
            }
            println!("{}", if outcome.passed() { "PASS" } else { "FAIL" });
        }
    }
    if outcome.passed() {
        Ok(())
    } else {
        Err(fail(
            EXIT_CHECK_FAIL,
            format!(
                "check failed: {}",
                outcome
                    .failures()
                    .map(|c| c.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ))
    }
}

fn cmd_gen(
    seed: u64,
    target_n: usize,
    count: usize,
    max_children: usize,
    dir: &Path,
) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| fail(EXIT_USAGE, format!("cannot create {}: {e}", dir.display())))?;
    for i in 0..count {
        let sub_seed = seed.wrapping_add(i as u64);
        let h = random_halin(sub_seed, target_n, max_children)
            .map_err(|e| fail(EXIT_VALIDATION, e.to_string()))?;
        let name = format!("halin-n{}-s{}-{}.txt", target_n, seed, i);
        let path = dir.join(name);
        std::fs::write(&path, graph_format::serialize(&h))
            .map_err(|e| fail(EXIT_USAGE, format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_bounds(p: usize, d: usize, format: FormatArg) -> Result<(), Failure> {
    let bounds = compute_bounds(p, d).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    match format {
        FormatArg::Jsonl => {
            let per_level: Vec<String> = bounds.per_level.iter().map(|b| b.to_string()).collect();
            println!(
                "{}",
                serde_json::json!({
                    "p": p,
                    "d": d,
                    "per_level": per_level,
                    "total": bounds.total.to_string(),
                    "headline": bounds.headline.to_string(),
                })
            );
        }
        _ => {
            println!("bounds for p={p} d={d}");
            for (i, b) in bounds.per_level.iter().enumerate() {
                println!("level {i}: {b}");
            }
            println!("total: {}", bounds.total);
            println!("headline (2pd)^p: {}", bounds.headline);
        }
    }
    Ok(())
}

fn cmd_bench(
    file: Option<&Path>,
    seed: u64,
    target_n: usize,
    mode: ModeArg,
    workers: &[usize],
) -> Result<(), Failure> {
    if workers.contains(&0) {
        return Err(fail(EXIT_USAGE, "worker counts must be >= 1"));
    }
    let h = match file {
        Some(f) => load_graph(f)?,
        None => {
            random_halin(seed, target_n, 4).map_err(|e| fail(EXIT_VALIDATION, e.to_string()))?
        }
    };
    if h.p() < 8 {
        eprintln!(
            "warning: p = {} is small; timings below are noise-dominated",
            h.p()
        );
    }
    let rows = speedup_report(&h, &mode.config(), workers).map_err(enum_failure)?;
    eprintln!(
        "bench graph: n={} p={} d={} mode={}",
        h.n(),
        h.p(),
        h.d(),
        if mode == ModeArg::Naive {
            "naive"
        } else {
            "distinct"
        }
    );
    eprintln!(
        "{:>8} {:>14} {:>9} {:>11}",
        "workers", "wall_time", "speedup", "efficiency"
    );
    for row in &rows {
        eprintln!(
            "{:>8} {:>14?} {:>9.3} {:>11.3}",
            row.workers, row.wall_time, row.speedup, row.efficiency
        );
        println!("{}", serde_json::to_string(row).unwrap());
    }
    Ok(())
}
