use std::io::{self, BufRead, IsTerminal, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use surcalc::selftest::{minimal_counterexample, selftest, OracleOp};
use surcalc::{run, Format, Reply, Session};
use surreal_core::series::DEFAULT_DEPTH;

#[derive(Parser)]
#[command(name = "surcalc", version, about = "Exact calculator for surreal normal forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interactive session; `:help` lists the commands.
    Repl,
    /// Evaluates EXPR, or one expression per line of stdin when EXPR is omitted.
    Eval {
        expr: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value = "nf")]
        format: Format,
    },
    /// Runs the built-in oracle and derivation checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Searches for the smallest dyadic pair where a genetic operation is wrong.
    #[command(hide = true)]
    Oracle {
        #[arg(long, default_value = "add")]
        op: OracleOp,
        #[arg(long, default_value_t = 5)]
        max_birthday: usize,
    },
}

fn repl() -> ExitCode {
    let mut session = Session::default();
    let interactive = io::stdin().is_terminal();
    let mut stdout = io::stdout();
    let prompt = |out: &mut io::Stdout| {
        if interactive {
            let _ = write!(out, "> ");
            let _ = out.flush();
        }
    };
    prompt(&mut stdout);
    for line in io::stdin().lock().lines() {
        let Ok(line) = line else { break };
        match session.handle(&line) {
            Reply::Output(s) => println!("{s}"),
            Reply::Error(e) => eprintln!("error: {e}"),
            Reply::Silent => {}
            Reply::Quit => break,
        }
        prompt(&mut stdout);
    }
    ExitCode::SUCCESS
}

fn eval(expr: Option<String>, depth: usize, format: Format) -> ExitCode {
    if let Some(src) = expr {
        return match run(&src, format, depth) {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        };
    }
    let mut code = 0;
    for line in io::stdin().lock().lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        match run(&line, format, depth) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                println!("error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Repl => repl(),
        Command::Eval { expr, depth, format } => eval(expr, depth, format),
        Command::Selftest { seed } => {
            let t = selftest(seed);
            print!("{}", t.text);
            if t.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Oracle { op, max_birthday } => match minimal_counterexample(op, max_birthday) {
            Ok(None) => {
                println!("no counterexample up to birthday {max_birthday}");
                ExitCode::SUCCESS
            }
            Ok(Some((a, b))) => {
                println!("{a} {b}");
                ExitCode::FAILURE
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
