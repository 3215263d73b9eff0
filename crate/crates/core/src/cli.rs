//! Command-line front end.
//!
//! Exit codes: 0 when the checked property holds (or the command only
//! reports), 1 when a law, ideal or isomorphism check fails, 2 on input
//! errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::brackets::power_family;
use crate::expr;
use crate::ideals::{is_hyperideal, is_mn_hyperideal, Side};
use crate::laws::{self, CheckOptions, LawId, LawScope, SetScope, MAX_EXHAUSTIVE_SET_ORDER};
use crate::report::{self, EnumerationJson};
use crate::search::{self, SearchMode, SearchSpec};
use crate::table::HyperTable;
use crate::tablefile::{format_table_file, parse_table_file};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lahyper", version, about = "Check laws, powers and hyperideals of finite hypergroupoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check catalog laws against a table file.
    Check {
        file: PathBuf,
        /// Comma-separated law names, or `all`.
        #[arg(long, value_delimiter = ',', required = true)]
        law: Vec<String>,
        /// List every violated instance.
        #[arg(long)]
        all_witnesses: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Sample set-scope laws instead of scanning all subset tuples.
        #[arg(long)]
        sampled: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a hyper-expression such as "(d o d) * {b}".
    Eval {
        file: PathBuf,
        expression: String,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate every bracketing of a power A^m.
    Powers {
        file: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long)]
        exp: usize,
        #[arg(long)]
        json: bool,
    },
    /// Test a subset for being a one-sided or (m,n)-hyperideal.
    Ideal {
        file: PathBuf,
        #[arg(long = "set")]
        subset: String,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate all tables of a given order satisfying the listed laws.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_delimiter = ',')]
        law: Vec<String>,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        up_to_iso: bool,
        /// Write each table to DIR/model_NNNNNN.hgt instead of stdout.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether two tables are isomorphic.
    Iso {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<i32, InputError>;

/// Entry point for the binary.
pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_HOLDS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn load(path: &Path) -> Result<HyperTable, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_table_file(&text).map_err(|e| {
        let lines: Vec<String> = e.diagnostics.iter().map(|d| format!("{}:{d}", path.display())).collect();
        InputError(lines.join("\n"))
    })
}

fn parse_laws(names: &[String]) -> Result<Vec<LawId>, InputError> {
    let mut laws = Vec::new();
    for name in names {
        if name.eq_ignore_ascii_case("all") {
            laws.extend(LawId::ALL);
        } else {
            laws.push(name.parse::<LawId>()?);
        }
    }
    laws.dedup();
    Ok(laws)
}

fn parse_subset(t: &HyperTable, text: &str) -> Result<crate::ElemSet, InputError> {
    let set = t
        .parse_set(text)
        .ok_or_else(|| InputError(format!("{text:?} is not a set of element names like {{a,b}}")))?;
    if set.is_empty() {
        return Err(InputError("the subset must be nonempty".into()));
    }
    Ok(set)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Check { file, law, all_witnesses, json, workers, sampled, samples, seed } => {
            let t = load(&file)?;
            let opts = CheckOptions { count_violations: all_witnesses, workers };
            let mut reports = Vec::new();
            for law in parse_laws(&law)? {
                let report = match law.scope() {
                    LawScope::Element => laws::check_law_with(&t, law, &opts)?,
                    LawScope::Set => {
                        let scope = if sampled || t.n() > MAX_EXHAUSTIVE_SET_ORDER {
                            SetScope::Sampled { seed, count: samples }
                        } else {
                            SetScope::Exhaustive
                        };
                        laws::check_set_law_with(&t, law, scope, &opts)?
                    }
                };
                let all = if all_witnesses && report.sampled.is_none() {
                    Some(laws::all_witnesses(&t, law)?)
                } else {
                    None
                };
                reports.push((report, all));
            }
            if json {
                out.write_all(report::check_json(&t, &reports).as_bytes())?;
            } else {
                for (r, all) in &reports {
                    out.write_all(report::law_report_text(&t, r, all.as_deref()).as_bytes())?;
                }
            }
            Ok(if reports.iter().any(|(r, _)| r.fails()) { EXIT_FAILS } else { EXIT_HOLDS })
        }
        Command::Eval { file, expression, json } => {
            let t = load(&file)?;
            let value = expr::evaluate(&expression, &t).map_err(|e| InputError(e.render(&expression)))?;
            if json {
                out.write_all(report::eval_json(&t, &expression, value).as_bytes())?;
            } else {
                writeln!(out, "{}", t.fmt_set(value))?;
            }
            Ok(EXIT_HOLDS)
        }
        Command::Powers { file, base, exp, json } => {
            let t = load(&file)?;
            let base = parse_subset(&t, &base)?;
            let fam = power_family(&t, base, exp)?;
            let text = if json { report::power_family_json(&t, &fam) } else { report::power_family_text(&t, &fam) };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_HOLDS)
        }
        Command::Ideal { file, subset, side, m, n, json } => {
            let t = load(&file)?;
            let a = parse_subset(&t, &subset)?;
            let verdict = if m.is_some() || n.is_some() {
                is_mn_hyperideal(&t, a, m.unwrap_or(0), n.unwrap_or(0))?
            } else {
                let side = match side {
                    SideArg::Left => Side::Left,
                    SideArg::Right => Side::Right,
                    SideArg::Both => Side::TwoSided,
                };
                is_hyperideal(&t, a, side)?
            };
            let text = if json { report::ideal_json(&t, &verdict) } else { report::ideal_text(&t, &verdict) };
            out.write_all(text.as_bytes())?;
            Ok(if verdict.holds() { EXIT_HOLDS } else { EXIT_FAILS })
        }
        Command::Enumerate { order, law, count_only, up_to_iso, emit_dir, workers, json } => {
            let laws = parse_laws(&law)?;
            let emit = !count_only;
            let mode = match (emit, up_to_iso) {
                (false, false) => SearchMode::Count,
                (false, true) => SearchMode::CountIso,
                (true, false) => SearchMode::Emit,
                (true, true) => SearchMode::EmitIso,
            };
            let spec = SearchSpec::new(order, &laws, mode).workers(workers);
            if let Some(dir) = &emit_dir {
                std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
            }
            let mut index = 0usize;
            let mut io_error = None;
            let count = search::enumerate_tables(&spec, |t| {
                index += 1;
                let text = format_table_file(t);
                let res = match &emit_dir {
                    Some(dir) => std::fs::write(dir.join(format!("model_{index:06}.hgt")), text),
                    None if json => Ok(()),
                    None => write!(out, "# model {index}\n{text}\n"),
                };
                if let (Err(e), None) = (res, &io_error) {
                    io_error = Some(e);
                }
            })?;
            if let Some(e) = io_error {
                return Err(e.into());
            }
            let noun = if up_to_iso { "isomorphism classes" } else { "tables" };
            if json {
                let doc = EnumerationJson {
                    kind: "enumeration",
                    order,
                    laws: laws.iter().map(|l| l.name().to_string()).collect(),
                    up_to_iso,
                    count,
                };
                out.write_all(report::to_json(&doc).as_bytes())?;
            } else {
                let laws: Vec<&str> = laws.iter().map(|l| l.name()).collect();
                let laws = if laws.is_empty() { "no laws".to_string() } else { laws.join(",") };
                writeln!(out, "count: {count} {noun} of order {order} satisfying {laws}")?;
            }
            Ok(EXIT_HOLDS)
        }
        Command::Iso { file1, file2, json } => {
            let t1 = load(&file1)?;
            let t2 = load(&file2)?;
            let phi = search::are_isomorphic(&t1, &t2)?;
            let text =
                if json { report::iso_json(&t1, &t2, phi.as_deref()) } else { report::iso_text(&t1, &t2, phi.as_deref()) };
            out.write_all(text.as_bytes())?;
            Ok(if phi.is_some() { EXIT_HOLDS } else { EXIT_FAILS })
        }
    }
}
