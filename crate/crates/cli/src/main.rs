use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use psdl::interp::{execute, ExecError, Layout, SceneTemplate};
use psdl::lang::{parse, unparse, Program};
use psdl::loss::total_loss;
use psdl::par::Schedule;
use psdl::repair::{repair, RepairTrace, SearchConfig, Strategy};
use psdl_cli::bench::{run_bench, BenchConfig};
use psdl_cli::corpus::{load_corpus, read_template};
use psdl_cli::inject::inject_errors;
use psdl_cli::render::render_svg;

const EXIT_PARSE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_HAS_ERRORS: u8 = 3;
const EXIT_FAILURE: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "psdl", version, about = "Run, check and repair scene layout programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a program and write the resulting layout as JSON.
    Exec {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        program: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the loss report of a layout or program; exit 3 if it has errors.
    Check {
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long, conflicts_with = "layout", required_unless_present = "layout")]
        program: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Repair a program and write the repaired program, layout and trace.
    Repair {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value = "psdl", value_parser = parse_strategy)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Evaluate candidates on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Draw a top-down SVG of a layout or program.
    Render {
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long, conflicts_with = "layout", required_unless_present = "layout")]
        program: Option<PathBuf>,
        #[arg(long)]
        layout: Option<PathBuf>,
        /// Outline objects involved in layout errors.
        #[arg(long)]
        highlight: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Corrupt literal sites of a program.
    Inject {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        errors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corrupt and repair every corpus scene under each strategy.
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "none,gd,flat,psdl", value_parser = parse_strategy)]
        strategies: Vec<Strategy>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Corruptions injected per scene.
        #[arg(long, default_value_t = 7)]
        errors: usize,
        /// Output directory for report.json and report.txt.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    Strategy::from_name(s).ok_or_else(|| format!("unknown strategy `{s}` (none, gd, flat, psdl)"))
}

/// A failure that maps to a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn read_program(path: &Path) -> Result<Program> {
    let source =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&source).map_err(|e| Exit(EXIT_PARSE, format!("{}:{e}", path.display())).into())
}

fn run_program(p: &Program, t: &SceneTemplate, path: &Path) -> Result<Layout> {
    execute(p, t).map_err(|e| match e {
        ExecError::Runtime(e) => Exit(EXIT_RUNTIME, format!("{}:{e}", path.display())).into(),
        other => anyhow::Error::new(other).context("binding template"),
    })
}

fn read_layout(path: &Path) -> Result<Layout> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Layout from `--layout`, or by running `--program` on `--template`.
fn layout_arg(
    template: Option<PathBuf>,
    program: Option<PathBuf>,
    layout: Option<PathBuf>,
) -> Result<Layout> {
    match (layout, program) {
        (Some(l), _) => read_layout(&l),
        (None, Some(p)) => {
            let Some(t) = template else {
                bail!("--program needs --template");
            };
            let t = read_template(&t)?;
            run_program(&read_program(&p)?, &t, &p)
        }
        (None, None) => bail!("one of --layout or --program is required"),
    }
}

fn schedule(sequential: bool) -> Schedule {
    if sequential {
        Schedule::Sequential
    } else {
        Schedule::Parallel
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Exec {
            template,
            program,
            out,
        } => {
            let t = read_template(&template)?;
            let layout = run_program(&read_program(&program)?, &t, &program)?;
            let json = to_json(&layout)?;
            match out {
                Some(path) => write(&path, &json)?,
                None => print!("{json}"),
            }
            Ok(0)
        }
        Command::Check {
            template,
            program,
            layout,
        } => {
            let layout = layout_arg(template, program, layout)?;
            let report = total_loss(&layout);
            print!("{}", to_json(&report)?);
            Ok(if report.error_count == 0 { 0 } else { EXIT_HAS_ERRORS })
        }
        Command::Repair {
            template,
            program,
            strategy,
            seed,
            out,
            sequential,
        } => {
            let t = read_template(&template)?;
            let p = read_program(&program)?;
            run_program(&p, &t, &program)?;
            let cfg = SearchConfig {
                schedule: schedule(sequential),
                ..SearchConfig::with_seed(seed)
            };
            let outcome = repair(&p, &t, strategy, &cfg)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            if let (Strategy::Flat | Strategy::Psdl | Strategy::None, Some(q)) =
                (strategy, &outcome.program)
            {
                write(&out.join("repaired.psdl"), &unparse(q))?;
            }
            write(&out.join("layout.json"), &to_json(&outcome.layout)?)?;
            let trace = match &outcome.trace {
                RepairTrace::None => serde_json::json!({ "kind": "none" }),
                other => serde_json::to_value(other)?,
            };
            write(&out.join("trace.json"), &to_json(&trace)?)?;
            println!(
                "errors: {} -> {}; accepted edits: {}",
                outcome.before.error_count,
                outcome.after.error_count,
                outcome.accepted_edits()
            );
            eprintln!("repair time: {:.3} s", outcome.wall_time.as_secs_f64());
            Ok(0)
        }
        Command::Render {
            template,
            program,
            layout,
            highlight,
            out,
        } => {
            let layout = layout_arg(template, program, layout)?;
            let report = highlight.then(|| total_loss(&layout));
            write(&out, &render_svg(&layout, report.as_ref()))?;
            Ok(0)
        }
        Command::Inject {
            template,
            program,
            errors,
            seed,
            out,
        } => {
            let t = read_template(&template)?;
            let p = read_program(&program)?;
            run_program(&p, &t, &program)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (q, _) = inject_errors(&p, &mut rng, errors)?;
            let text = unparse(&q);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Bench {
            corpus,
            strategies,
            seeds,
            errors,
            out,
            sequential,
        } => {
            let scenes = load_corpus(&corpus)?;
            let cfg = BenchConfig {
                strategies,
                seeds,
                injected: errors,
                schedule: schedule(sequential),
            };
            let report = run_bench(&scenes, &cfg)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            write(&out.join("report.json"), &to_json(&report)?)?;
            let table = report.to_table();
            write(&out.join("report.txt"), &table)?;
            print!("{table}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<Exit>().map_or(EXIT_FAILURE, |x| x.0);
            ExitCode::from(code)
        }
    }
}
