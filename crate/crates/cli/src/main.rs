// SPDX-License-Identifier: Apache-2.0

//! `xtalk`: synthesize, check and benchmark crosstalk-gate netlists.
//!
//! Exit status: 0 success, 1 internal error, 2 malformed input, 3
//! equivalence failure (counterexample on standard error), 4 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xtalk::boolcore::{is_equivalent, Network, Verdict};
use xtalk::costing::{transistor_count, CostTable};
use xtalk::flow::{load_manifest, load_network, prepare, run_bench, synthesize, FlowError, FlowOptions};
use xtalk::frontend::{emit_expression, emit_netlist, Format, NetlistFormat};
use xtalk::random::{random_networks, RandomSpec};
use xtalk::xtalkmap::{map_network, map_network_naive};

const EXIT_NOT_EQUIVALENT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "xtalk",
    version,
    about = "Logic simplification and mapping onto crosstalk gates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose, map and cost one network.
    Synth(SynthArgs),
    /// Check two networks for equivalence.
    Check(CheckArgs),
    /// Run a benchmark manifest and write the comparison table.
    Bench(BenchArgs),
    /// Run the pipeline on seeded random networks and check its properties.
    Fuzz(FuzzArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Eqn,
    Blif,
}

impl From<InputFormat> for Format {
    fn from(f: InputFormat) -> Format {
        match f {
            InputFormat::Eqn => Format::Eqn,
            InputFormat::Blif => Format::Blif,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Expr,
    Both,
}

#[derive(Args)]
struct CostArgs {
    /// Crosstalk cost overrides, `KIND = integer` per line.
    #[arg(long, value_name = "FILE")]
    cost_table: Option<PathBuf>,
    /// CMOS cell cost overrides for the baseline.
    #[arg(long, value_name = "FILE")]
    cmos_table: Option<PathBuf>,
    /// Skip the cross-node cube-sharing pass.
    #[arg(long)]
    no_share: bool,
}

impl CostArgs {
    fn options(&self, check: bool) -> Result<FlowOptions, FlowError> {
        let mut opts = FlowOptions {
            share: !self.no_share,
            check,
            ..FlowOptions::default()
        };
        if let Some(p) = &self.cost_table {
            opts.costs = CostTable::load_over(p, &opts.costs)?;
        }
        if let Some(p) = &self.cmos_table {
            opts.cmos_costs = CostTable::load_over(p, &opts.cmos_costs)?;
        }
        Ok(opts)
    }
}

#[derive(Args)]
struct SynthArgs {
    input: PathBuf,
    /// Input format; taken from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// Verify the mapped netlist against the input.
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value = "both")]
    emit: Emit,
    /// Write `<stem>.json`, `<stem>.expr` and `<stem>.report.txt` here
    /// instead of printing.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(flatten)]
    costs: CostArgs,
}

#[derive(Args)]
struct CheckArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
}

#[derive(Args)]
struct BenchArgs {
    manifest: PathBuf,
    /// Reference values; overrides the manifest's `refs`.
    #[arg(long, value_name = "FILE")]
    refs: Option<PathBuf>,
    /// Write `report.csv` and `report.txt` here.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(flatten)]
    costs: CostArgs,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    count: usize,
}

fn write(path: &Path, text: &str) -> Result<(), FlowError> {
    fs::write(path, text).map_err(|source| FlowError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn make_dir(dir: &Path) -> Result<(), FlowError> {
    fs::create_dir_all(dir).map_err(|source| FlowError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn report_mismatch(what: &str, v: &Verdict) -> u8 {
    match v {
        Verdict::Equivalent => 0,
        Verdict::Counterexample(cx) => {
            eprintln!("{what}: NOT equivalent: {cx}");
            EXIT_NOT_EQUIVALENT
        }
    }
}

fn synth(args: &SynthArgs) -> Result<u8, FlowError> {
    let opts = args.costs.options(args.check)?;
    let net = load_network(&args.input, args.format.map(Format::from))?;
    let stem = args
        .input
        .file_stem()
        .map_or_else(|| "out".to_string(), |s| s.to_string_lossy().into_owned());
    let r = synthesize(&net, &stem, &opts)?;
    let report = format!(
        "{}  nodes after decomposition: {} (max fanin {}, {} literals)\n{}",
        r.report, r.stats.nodes, r.stats.max_fanin, r.stats.literals, r.cmos
    );
    let json = matches!(args.emit, Emit::Json | Emit::Both).then(|| emit_netlist(&r.mapped, NetlistFormat::Json));
    let expr = matches!(args.emit, Emit::Expr | Emit::Both).then(|| emit_expression(&r.mapped));
    match &args.out {
        Some(dir) => {
            make_dir(dir)?;
            if let Some(j) = &json {
                write(&dir.join(format!("{stem}.json")), j)?;
            }
            if let Some(e) = &expr {
                write(&dir.join(format!("{stem}.expr")), e)?;
            }
            write(&dir.join(format!("{stem}.report.txt")), &report)?;
            print!("{report}");
        }
        None => {
            print!("{report}");
            if let Some(e) = &expr {
                print!("\n{e}");
            }
            if let Some(j) = &json {
                print!("\n{j}");
            }
        }
    }
    Ok(match &r.verdict {
        Some(v) => report_mismatch(&stem, v),
        None => 0,
    })
}

fn check(args: &CheckArgs) -> Result<u8, FlowError> {
    let fmt = args.format.map(Format::from);
    let a = load_network(&args.a, fmt)?;
    let b = load_network(&args.b, fmt)?;
    let v = is_equivalent(&a, &b)?;
    if v.is_equivalent() {
        println!("equivalent");
    }
    Ok(report_mismatch(
        &format!("{} vs {}", args.a.display(), args.b.display()),
        &v,
    ))
}

fn bench(args: &BenchArgs) -> Result<u8, FlowError> {
    let opts = args.costs.options(true)?;
    let manifest = load_manifest(&args.manifest)?;
    let report = run_bench(&manifest, args.refs.as_deref(), &opts)?;
    let text = report.to_text();
    if let Some(dir) = &args.out {
        make_dir(dir)?;
        write(&dir.join("report.csv"), &report.to_csv())?;
        write(&dir.join("report.txt"), &text)?;
    }
    print!("{text}");
    let mut status = 0;
    for row in &report.rows {
        status = status.max(report_mismatch(&row.name, &row.verdict));
    }
    Ok(status)
}

fn fuzz_one(net: &Network, opts: &FlowOptions) -> Result<Option<String>, FlowError> {
    let d = prepare(net, opts);
    let m = map_network(&d, &opts.lib, &opts.costs)?;
    if let Verdict::Counterexample(cx) = is_equivalent(net, &m.to_network()?)? {
        return Ok(Some(format!("NOT equivalent: {cx}")));
    }
    if let Some(g) = m.gates.iter().find(|g| !opts.lib.contains(g.kind)) {
        return Ok(Some(format!("gate `{}` uses {} outside the library", g.id, g.kind)));
    }
    let ours = transistor_count(&m, &opts.costs)?;
    let naive = transistor_count(&map_network_naive(&d, &opts.lib, &opts.costs)?, &opts.costs)?;
    Ok((ours > naive).then(|| format!("{ours} transistors, NAND/NOR fallback needs only {naive}")))
}

fn fuzz(args: &FuzzArgs) -> Result<u8, FlowError> {
    let opts = FlowOptions {
        check: false,
        ..FlowOptions::default()
    };
    let mut failed = 0usize;
    let mut status = 0u8;
    for (i, net) in random_networks(args.seed, args.count, RandomSpec::default()).enumerate() {
        if let Some(msg) = fuzz_one(&net, &opts)? {
            failed += 1;
            eprintln!("network #{i}: {msg}\n{}", xtalk::frontend::emit_eqn(&net));
            status = status.max(if msg.starts_with("NOT") { EXIT_NOT_EQUIVALENT } else { 1 });
        }
    }
    println!("{} networks (seed {}): {failed} failed", args.count, args.seed);
    Ok(status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Synth(a) => synth(a),
        Command::Check(a) => check(a),
        Command::Bench(a) => bench(a),
        Command::Fuzz(a) => fuzz(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
