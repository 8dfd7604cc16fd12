use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

// Replay churns through short-lived list nodes; the general-purpose system
// allocator is the bottleneck without this.
#[global_allocator]
static ALLOC: mimalloc::MiMalloc = mimalloc::MiMalloc;

use market_cli::bench::run_bench;
use market_cli::report::{median, minimum, RunReport};
use market_core::instance::{generate, GenParams};
use market_core::market::{run_script, Market, ReplayMode};
use market_core::script::{parse_script, serialize_script};

#[derive(Parser)]
#[command(
    name = "market",
    version,
    about = "Mediator-run marketplace: generate, replay, and benchmark operation scripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic instance script to a file
    Generate {
        /// Number of user accounts (at least 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        users: u64,
        /// Number of items (at least 1)
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        items: u64,
        /// Number of purchases
        #[arg(long)]
        transactions: u64,
        /// Generator seed; equal parameters give byte-identical files
        #[arg(long)]
        seed: u64,
        /// Where to write the script
        #[arg(long, short = 'o')]
        output: PathBuf,
    },
    /// Replay a script from the empty market and print a report
    Run {
        /// Script file to replay
        #[arg(long)]
        input: PathBuf,
        /// Stop at the first rejected operation instead of recording it
        #[arg(long)]
        strict: bool,
    },
    /// Time repeated in-memory replays of a generated instance
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        users: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        items: u64,
        #[arg(long)]
        transactions: u64,
        #[arg(long)]
        seed: u64,
        /// Repetitions to time
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        repeat: u64,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Generate { users, items, transactions, seed, output } => {
            cmd_generate(GenParams { users, items, transactions, seed }, &output)
        }
        Command::Run { input, strict } => cmd_run(&input, strict),
        Command::Bench { users, items, transactions, seed, repeat } => {
            cmd_bench(GenParams { users, items, transactions, seed }, repeat)
        }
    }
}

fn cmd_generate(params: GenParams, output: &PathBuf) -> ExitCode {
    let text = serialize_script(&generate(&params));
    match fs::write(output, text) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("market: cannot write {}: {err}", output.display());
            ExitCode::from(2)
        }
    }
}

fn cmd_run(input: &PathBuf, strict: bool) -> ExitCode {
    let total_start = Instant::now();
    let text = match fs::read_to_string(input) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("market: cannot read {}: {err}", input.display());
            return ExitCode::from(2);
        }
    };

    let parse_start = Instant::now();
    let doc = match parse_script(&text) {
        Ok(doc) => doc,
        Err(err) => {
            eprintln!("market: {}: {err}", input.display());
            return ExitCode::from(2);
        }
    };
    let parse_time_s = parse_start.elapsed().as_secs_f64();

    let mode = if strict { ReplayMode::Strict } else { ReplayMode::Lenient };
    let exec_start = Instant::now();
    let (market, replay) = run_script(&Market::empty(), &doc.operations, mode);
    let exec_time_s = exec_start.elapsed().as_secs_f64();
    let total_time_s = total_start.elapsed().as_secs_f64();

    let report = RunReport::new(&market, &replay, parse_time_s, exec_time_s, total_time_s);
    print!("{}", report.render());

    if replay.aborted {
        ExitCode::from(2)
    } else if replay.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_bench(params: GenParams, repeat: u64) -> ExitCode {
    let reps = run_bench(&params, repeat);

    let mut exec_times = Vec::with_capacity(reps.len());
    let mut rates = Vec::with_capacity(reps.len());
    for (i, rep) in reps.iter().enumerate() {
        if i > 0 {
            println!("---");
        }
        // no parsing happens in bench mode; the replay is the whole run
        let report = RunReport::new(&rep.market, &rep.replay, 0.0, rep.exec_time_s, rep.exec_time_s);
        exec_times.push(report.exec_time_s);
        rates.push(report.transactions_per_s);
        print!("{}", report.render());
    }

    println!("---");
    println!("summary:");
    println!("  repeat: {repeat}");
    println!("  exec_time_s_min: {:.6}", minimum(&exec_times));
    println!("  exec_time_s_median: {:.6}", median(&exec_times));
    println!("  transactions_per_s_min: {:.1}", minimum(&rates));
    println!("  transactions_per_s_median: {:.1}", median(&rates));
    ExitCode::SUCCESS
}
