// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! `corrdense` command line: generate, mine, evaluate, sweep.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use corrdense::edgelist::{load_labeled_network, load_network, write_network};
use corrdense::eval::{read_groups, score};
use corrdense::manifest::{FileRecord, RunManifest, VERSION};
use corrdense::pipeline::{mine, MiningRun};
use corrdense::synth::{generate, GenConfig, TemporalMode};
use corrdense::{DensityKind, DynamicNetwork, Error, MinHashConfig, MinerConfig, Mode};

#[derive(Parser)]
#[command(
    name = "corrdense",
    version,
    about = "Dense correlated edge groups in dynamic networks"
)]
struct Cli {
    /// Worker threads; output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random partition network and its planted groups.
    Generate(GenerateArgs),
    /// Mine dense correlated edge groups.
    Mine(MineArgs),
    /// Score a results file against planted groups.
    Evaluate(EvaluateArgs),
    /// Mine repeatedly over a parameter grid and write CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityArg {
    Min,
    Avg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum TemporalArg {
    Correlated,
    Independent,
}

#[derive(Args, Clone)]
struct MinerArgs {
    #[arg(long, default_value_t = 0.8)]
    sigma: f64,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Skip components with this many edges or more.
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long, value_enum, default_value = "avg")]
    density: DensityArg,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, default_value_t = 3)]
    hashes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Apply the half-threshold pruning gate under min density.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict_min_gate: bool,
}

impl MinerArgs {
    fn config(&self) -> MinerConfig {
        MinerConfig {
            sigma: self.sigma,
            delta: self.delta,
            k: self.k,
            epsilon: self.epsilon,
            max_size: self.max_size,
            density_kind: match self.density {
                DensityArg::Min => DensityKind::Min,
                DensityArg::Avg => DensityKind::Avg,
            },
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Approx => Mode::Approx,
            },
            minhash: MinHashConfig {
                runs: self.runs,
                hashes_per_run: self.hashes,
                seed: self.seed,
            },
            strict_min_gate: self.strict_min_gate,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    #[arg(long, default_value_t = 100)]
    snapshots: usize,
    #[arg(long, default_value_t = 0.7)]
    p_in: f64,
    #[arg(long, default_value_t = 0.1)]
    p_out: f64,
    #[arg(long, default_value_t = 20.0)]
    cluster_mean: f64,
    #[arg(long, default_value_t = 10.0)]
    cluster_shape: f64,
    #[arg(long, default_value_t = 0.5)]
    base_activity: f64,
    #[arg(long, default_value_t = 0.0)]
    noise_flip: f64,
    #[arg(long, value_enum, default_value = "correlated")]
    temporal: TemporalArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Network edge list to write.
    #[arg(long)]
    output: PathBuf,
    /// Planted groups to write.
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    miner: MinerArgs,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Input node fields are labels rather than integer ids.
    #[arg(long)]
    labels: bool,
    /// Write the correlation graph here.
    #[arg(long)]
    dump_correlation: Option<PathBuf>,
    /// Write the maximal cliques here.
    #[arg(long)]
    dump_cliques: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    truth: PathBuf,
    /// Print a single `key=value` line.
    #[arg(long)]
    line: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    Sigma,
    Delta,
    K,
    Epsilon,
    MaxSize,
    Runs,
    Hashes,
    Seed,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    miner: MinerArgs,
    #[arg(long)]
    input: PathBuf,
    /// Planted groups; adds F-score columns.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, value_enum)]
    param: SweepParam,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))
            .and_then(|pool| pool.install(|| run(cli.command))),
        None => run(cli.command),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        Error::ResourceLimit(_) => 4,
        _ => 3,
    }
}

fn run(command: Command) -> corrdense::Result<()> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Mine(args) => cmd_mine(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn create(path: &Path) -> corrdense::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> corrdense::Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_generate(args: GenerateArgs) -> corrdense::Result<()> {
    let cfg = GenConfig {
        nodes: args.nodes,
        snapshots: args.snapshots,
        p_in: args.p_in,
        p_out: args.p_out,
        cluster_mean: args.cluster_mean,
        cluster_shape: args.cluster_shape,
        base_activity: args.base_activity,
        noise_flip: args.noise_flip,
        mode: match args.temporal {
            TemporalArg::Correlated => TemporalMode::Correlated,
            TemporalArg::Independent => TemporalMode::Independent,
        },
        seed: args.seed,
    };
    cfg.validate()?;
    let (network, truth) = generate(&cfg)?;
    write_network(&network, create(&args.output)?)?;
    truth.write(create(&args.truth)?)?;
    let manifest = RunManifest::Generate {
        version: VERSION.into(),
        config: cfg,
        network: FileRecord::of(&args.output)?,
        truth: FileRecord::of(&args.truth)?,
    };
    manifest.write(create(&with_suffix(&args.output, ".manifest.json"))?)?;
    eprintln!(
        "generated {} nodes, {} edges, {} snapshots, {} planted groups",
        network.node_count(),
        network.edge_count(),
        network.snapshot_count(),
        truth.len()
    );
    Ok(())
}

fn load(
    input: &Path,
    labels: bool,
) -> corrdense::Result<(DynamicNetwork, Option<corrdense::edgelist::LabelDictionary>)> {
    let source = open(input)?;
    if labels {
        let (network, dict) = load_labeled_network(source)?;
        Ok((network, Some(dict)))
    } else {
        Ok((load_network(source)?, None))
    }
}

fn report_timing(run: &MiningRun) {
    let t = &run.timings;
    eprintln!(
        "{} results; correlation {:.3}s, cliques {:.3}s, mining {:.3}s, total {:.3}s",
        run.results.len(),
        t.correlation_secs,
        t.cliques_secs,
        t.mining_secs,
        t.total_secs()
    );
}

fn cmd_mine(args: MineArgs) -> corrdense::Result<()> {
    let cfg = args.miner.config();
    cfg.validate()?;
    let (network, dict) = load(&args.input, args.labels)?;
    let run = mine(&network, &cfg)?;

    run.write_results(&network, &cfg, create(&args.output)?)?;
    if let Some(dict) = dict {
        dict.write(create(&with_suffix(&args.output, ".labels.tsv"))?)?;
    }
    if let Some(path) = &args.dump_correlation {
        run.correlation.write_dump(&network, create(path)?)?;
    }
    if let Some(path) = &args.dump_cliques {
        run.cliques.write_dump(create(path)?)?;
    }
    let manifest = RunManifest::Mine {
        version: VERSION.into(),
        config: cfg,
        seed: args.miner.seed,
        input: FileRecord::of(&args.input)?,
        output: FileRecord::of(&args.output)?,
        results: run.results.len(),
    };
    manifest.write(create(&with_suffix(&args.output, ".manifest.json"))?)?;
    let timing = serde_json::json!({ "stats": run.stats, "timings": run.timings });
    let mut sink = create(&with_suffix(&args.output, ".timing.json"))?;
    writeln!(
        sink,
        "{}",
        serde_json::to_string_pretty(&timing).map_err(io::Error::from)?
    )?;
    sink.flush()?;
    report_timing(&run);
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> corrdense::Result<()> {
    let results = read_groups(open(&args.results)?)?;
    let truth = read_groups(open(&args.truth)?)?;
    let report = score(&results, &truth)?;
    if args.line {
        println!("{}", report.to_line());
    } else {
        print!("{report}");
    }
    Ok(())
}

fn sweep_point(base: &MinerArgs, param: SweepParam, value: f64) -> corrdense::Result<MinerConfig> {
    let count = |v: f64| {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as u64)
        } else {
            Err(Error::Config(format!(
                "sweep value {v} is not a non-negative integer"
            )))
        }
    };
    let mut cfg = base.config();
    match param {
        SweepParam::Sigma => cfg.sigma = value,
        SweepParam::Delta => cfg.delta = value,
        SweepParam::Epsilon => cfg.epsilon = value,
        SweepParam::K => cfg.k = count(value)? as usize,
        SweepParam::MaxSize => cfg.max_size = Some(count(value)? as usize),
        SweepParam::Runs => cfg.minhash.runs = count(value)? as usize,
        SweepParam::Hashes => cfg.minhash.hashes_per_run = count(value)? as usize,
        SweepParam::Seed => cfg.minhash.seed = count(value)?,
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_sweep(args: SweepArgs) -> corrdense::Result<()> {
    let param = args
        .param
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let configs = args
        .values
        .iter()
        .map(|&v| sweep_point(&args.miner, args.param, v))
        .collect::<corrdense::Result<Vec<_>>>()?;
    let network = load_network(open(&args.input)?)?;
    let truth = match &args.truth {
        Some(path) => Some(read_groups(open(path)?)?),
        None => None,
    };

    let mut sink: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(
        sink,
        "param,value,results,meta_edges,candidate_pairs,cliques,correlation_secs,cliques_secs,mining_secs,total_secs,f_avg,f_min"
    )?;
    for (cfg, value) in configs.iter().zip(&args.values) {
        let run = mine(&network, cfg)?;
        let (f_avg, f_min) = match &truth {
            Some(truth) => {
                let found: Vec<Vec<(u32, u32)>> = run
                    .results
                    .iter()
                    .map(|r| r.edges.iter().map(|id| network.edge(id).key()).collect())
                    .collect();
                let report = score(&found, truth)?;
                (
                    format!("{:.6}", report.f_avg),
                    format!("{:.6}", report.f_min),
                )
            }
            None => (String::new(), String::new()),
        };
        let t = &run.timings;
        writeln!(
            sink,
            "{param},{value},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{f_avg},{f_min}",
            run.stats.results,
            run.stats.meta_edges,
            run.stats
                .candidate_pairs
                .map_or_else(String::new, |c| c.to_string()),
            run.stats.cliques,
            t.correlation_secs,
            t.cliques_secs,
            t.mining_secs,
            t.total_secs()
        )?;
    }
    sink.flush()?;
    Ok(())
}
