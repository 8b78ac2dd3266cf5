use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corechor::encoding::{check_implements, default_inputs, encode_default, input_grid};
use corechor::props::{properties, property_by_name, run_property, PropOptions, Verdict};
use corechor::semantics::{run, RunStatus};
use corechor::wf::{call_graph_closure, ccp_wf_diagnose};
use corechor::{prf, scheduler_from_spec, Concrete, Configuration, GlobalState, Program};
use corechor_cli::program::state_from_assignments;
use corechor_cli::{parse_prf, parse_program, parse_state, print_state, ParseError};
use thiserror::Error;

/// Core choreographies: check, run and test programs, and compile partial recursive functions.
#[derive(Parser)]
#[command(name = "corechor", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a program for well-formedness (exit 0 if well-formed, 1 if not).
    Check {
        file: PathBuf,
        /// `auto` for the call-graph closure, or a comma-separated list of procedure ids.
        #[arg(long, default_value = "auto")]
        universe: String,
    },
    /// Run a program and print its final state and status.
    Run(RunArgs),
    /// Run a program and print its steps as newline-delimited JSON.
    Trace(RunArgs),
    /// List the transitions enabled in a program's initial configuration.
    Enum(StateArgs),
    /// Check a property on generated configurations (exit 0 pass, 1 fail, 2 inconclusive).
    Prop {
        /// Property name; see `--list`.
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Steps for confluence and exploration depth for unique termination.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Steps for run-based properties.
        #[arg(long, default_value_t = 200)]
        fuel: u64,
        /// Cap on configurations per exhaustive exploration.
        #[arg(long, default_value_t = corechor::semantics::DEFAULT_NODE_LIMIT)]
        node_limit: usize,
        /// Directory receiving a counterexample's program, state and labels.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial recursive functions.
    #[command(subcommand)]
    Prf(PrfCommand),
}

#[derive(Args)]
struct StateArgs {
    file: PathBuf,
    /// Initial value of `xx` at a process, as PROCESS=VALUE.
    #[arg(long = "state", value_name = "K=V")]
    state: Vec<String>,
    /// Initial state in the `p.x = v` format; applied before any `--state`.
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: StateArgs,
    #[arg(long, default_value_t = 1000)]
    fuel: u64,
    /// `first`, `last` or `random:SEED`.
    #[arg(long, default_value = "first")]
    sched: String,
}

#[derive(Subcommand)]
enum PrfCommand {
    /// Evaluate a function with the given fuel, printing `Some N` or `None`.
    Eval {
        expr: String,
        args: Vec<u64>,
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
    /// Compile a function to a choreography reading inputs from 1..=arity and writing to 0.
    Compile {
        expr: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the compiled choreography against the function on all inputs up to a bound.
    Implements {
        expr: String,
        #[arg(long, default_value_t = 5)]
        max_input: u64,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        /// Number of random schedulers (seeds 1..=K) besides `first`.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Chor(#[from] corechor::ChorError),
}

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_program(path: &Path) -> Result<Program<Concrete>, CliError> {
    parse_program(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn load_state(args: &StateArgs) -> Result<GlobalState<Concrete>, CliError> {
    let mut s = match &args.state_file {
        Some(path) => parse_state(&read(path)?).map_err(|source| CliError::Parse {
            path: path.display().to_string(),
            source,
        })?,
        None => GlobalState::new(0),
    };
    let assigned = state_from_assignments(&args.state).map_err(CliError::Usage)?;
    for (p, x, v) in assigned.overrides() {
        s.set(*p, *x, *v);
    }
    Ok(s)
}

fn load_configuration(args: &StateArgs) -> Result<Configuration<Concrete>, CliError> {
    Ok(Configuration::new(
        load_program(&args.file)?,
        load_state(args)?,
    ))
}

fn parse_expr(text: &str) -> Result<corechor::PRFunction, CliError> {
    parse_prf(text).map_err(|source| CliError::Parse {
        path: "expression".into(),
        source,
    })
}

fn check(file: &Path, universe: &str) -> Result<u8, CliError> {
    let program = load_program(file)?;
    let universe: Vec<u64> = if universe == "auto" {
        call_graph_closure(&program)
    } else {
        universe
            .split(',')
            .map(|x| x.trim().trim_start_matches('X').parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad universe `{universe}`")))?
    };
    let verdict = match ccp_wf_diagnose(&program, &universe) {
        Ok(r) => r.map_err(|v| v.to_string()),
        Err(e) => Err(e.to_string()),
    };
    match verdict {
        Ok(()) => {
            println!("well-formed");
            Ok(EXIT_PASS)
        }
        Err(why) => {
            println!("not well-formed: {why}");
            Ok(EXIT_FAIL)
        }
    }
}

fn run_program(args: &RunArgs, as_trace: bool) -> Result<u8, CliError> {
    let c = load_configuration(&args.input)?;
    let mut sched = scheduler_from_spec(&args.sched).map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = run(c, args.fuel, sched.as_mut())?;
    if as_trace {
        print!("{}", outcome.trace.to_ndjson());
        eprintln!("status: {}", outcome.status);
    } else {
        println!("status: {}", outcome.status);
        println!("steps: {}", outcome.trace.len());
        print!("{}", print_state(&outcome.config.state));
    }
    Ok(match outcome.status {
        RunStatus::Stuck => EXIT_FAIL,
        RunStatus::Terminated | RunStatus::OutOfFuel => EXIT_PASS,
    })
}

fn enumerate(args: &StateArgs) -> Result<u8, CliError> {
    let c = load_configuration(args)?;
    for t in c.transitions()? {
        println!("{} {}", t.rule, t.label);
    }
    Ok(EXIT_PASS)
}

fn prop(name: &str, opts: &PropOptions, out: Option<&Path>) -> Result<u8, CliError> {
    let prop = property_by_name(name).ok_or_else(|| {
        let names: Vec<&str> = properties().iter().map(|p| p.name()).collect();
        CliError::Usage(format!(
            "unknown property `{name}`; known: {}",
            names.join(", ")
        ))
    })?;
    let report = run_property(prop, opts);
    let verdict = report.verdict();
    println!(
        "{}: {verdict} ({} trials, {} inconclusive)",
        report.name, report.trials, report.inconclusive
    );
    if let Some(cx) = &report.counterexample {
        let labels: String = cx
            .labels
            .iter()
            .map(|l| format!("{}\n", l.to_json()))
            .collect();
        let program = cx.config.program.to_string();
        let state = print_state(&cx.config.state);
        println!("diagnostic: {}", cx.diagnostic);
        match out {
            Some(dir) => {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
                write(&dir.join("program.cc"), &program)?;
                write(&dir.join("state.txt"), &state)?;
                write(&dir.join("labels.ndjson"), &labels)?;
                println!("counterexample written to {}", dir.display());
            }
            None => print!("--- program\n{program}--- state\n{state}--- labels\n{labels}"),
        }
    }
    Ok(match verdict {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_USAGE,
    })
}

fn prf_command(cmd: &PrfCommand) -> Result<u8, CliError> {
    match cmd {
        PrfCommand::Eval { expr, args, fuel } => {
            let f = parse_expr(expr)?;
            match prf::eval(&f, *fuel, args).map_err(|e| CliError::Usage(e.to_string()))? {
                Some(v) => println!("Some {v}"),
                None => println!("None"),
            }
            Ok(EXIT_PASS)
        }
        PrfCommand::Compile { expr, output } => {
            let text = encode_default(&parse_expr(expr)?).to_string();
            match output {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(EXIT_PASS)
        }
        PrfCommand::Implements {
            expr,
            max_input,
            fuel,
            seeds,
        } => {
            let f = parse_expr(expr)?;
            let seeds: Vec<u64> = (1..=*seeds).collect();
            let report = check_implements(
                &encode_default(&f),
                &f,
                &default_inputs(&f),
                0,
                &input_grid(f.arity(), *max_input),
                *fuel,
                &seeds,
            );
            println!("{}", report.to_json());
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { file, universe } => check(&file, &universe),
        Command::Run(args) => run_program(&args, false),
        Command::Trace(args) => run_program(&args, true),
        Command::Enum(args) => enumerate(&args),
        Command::Prop {
            name,
            list,
            trials,
            seed,
            depth,
            fuel,
            node_limit,
            out,
        } => {
            if list {
                for p in properties() {
                    println!("{:<20} {}", p.name(), p.about());
                }
                return Ok(EXIT_PASS);
            }
            let opts = PropOptions {
                trials,
                seed,
                depth,
                fuel,
                node_limit,
                ..PropOptions::default()
            };
            prop(name.as_deref().unwrap_or_default(), &opts, out.as_deref())
        }
        Command::Prf(cmd) => prf_command(&cmd),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
