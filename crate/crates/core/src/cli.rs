//! Command-line front end. Exit codes: 0 answer produced (detect, check,
//! gen), 10 extension exists, 20 no extension, 1 no backdoor within budget,
//! 2 usage or input error.

use std::collections::BTreeSet;
use std::io::Read;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::brute::{enumerate_extensions, DEFAULT_RULE_LIMIT};
use crate::check::check_extension;
use crate::cnf::{Formula, FormulaClass, Var};
use crate::detect::{detect_backdoor, BackdoorBudget, Detection};
use crate::entail::Oracle;
use crate::eval::{evaluate_backdoor, solve, Answer, CheckOracle, EvalOptions, Route, SolveOptions, SolveReport};
use crate::format::{parse_theory, render_theory};
use crate::gen::{planted_horn_cover, random_theory, rng, RandomTheoryConfig};
use crate::theory::{generated_candidate, DefaultTheory, ExtensionCandidate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_EXTENSION: i32 = 10;
pub const EXIT_NO_EXTENSION: i32 = 20;

#[derive(Parser, Debug)]
#[command(name = "dlbd", version, about = "Strong backdoors for default logic extension existence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a strong backdoor of size at most k.
    Detect {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(short)]
        k: usize,
    },
    /// Decide extension existence from a given backdoor.
    Eval {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        backdoor: Vec<u32>,
        #[arg(long, value_enum, default_value_t = OracleArg::General)]
        oracle: OracleArg,
        /// Lift and verify every reduct extension.
        #[arg(long)]
        all: bool,
    },
    /// Check whether the rules with the given indices generate an extension.
    Check {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        generating: Vec<usize>,
        #[arg(long, value_enum, default_value_t = OracleArg::General)]
        oracle: OracleArg,
        /// Needed with `--oracle backdoor`.
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        backdoor: Vec<u32>,
    },
    /// List every consistent stable extension by brute force.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_RULE_LIMIT)]
        limit: usize,
    },
    /// Detect a backdoor and evaluate it.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_RULE_LIMIT)]
        limit: usize,
        #[arg(long, value_enum, default_value_t = OracleArg::General)]
        oracle: OracleArg,
        #[arg(long)]
        all: bool,
    },
    /// Emit a random theory.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        vars: u32,
        #[arg(long, default_value_t = 4)]
        rules: usize,
        #[arg(long, default_value_t = 2)]
        knowledge: usize,
        #[arg(long, default_value_t = 2)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        lits: usize,
        /// Emit a Horn instance with this planted minimum backdoor size instead.
        #[arg(long)]
        planted_cover: Option<u32>,
        #[arg(long, default_value_t = 2000)]
        occurrences: usize,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Theory file, or `-` for standard input.
    file: String,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ClassArg {
    Cnf,
    Horn,
    Krom,
    Monotone,
    Id,
}

impl From<ClassArg> for FormulaClass {
    fn from(c: ClassArg) -> FormulaClass {
        match c {
            ClassArg::Cnf => FormulaClass::Cnf,
            ClassArg::Horn => FormulaClass::Horn,
            ClassArg::Krom => FormulaClass::Krom,
            ClassArg::Monotone => FormulaClass::Monotone,
            ClassArg::Id => FormulaClass::Id,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleArg {
    General,
    Backdoor,
    Dispatch,
}

impl From<OracleArg> for CheckOracle {
    fn from(o: OracleArg) -> CheckOracle {
        match o {
            OracleArg::General => CheckOracle::General,
            OracleArg::Backdoor => CheckOracle::Backdoor,
            OracleArg::Dispatch => CheckOracle::Dispatch,
        }
    }
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }

    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Serialize)]
struct WitnessJson {
    base_formulas: Vec<Vec<Vec<i64>>>,
    generating: Vec<usize>,
}

impl From<&ExtensionCandidate> for WitnessJson {
    fn from(c: &ExtensionCandidate) -> WitnessJson {
        WitnessJson {
            base_formulas: c.base.iter().map(formula_json).collect(),
            generating: c.generating.iter().copied().collect(),
        }
    }
}

#[derive(Serialize)]
struct StatsJson {
    reducts: u64,
    candidates: u64,
    oracle_calls: u64,
}

#[derive(Serialize)]
struct ReportJson {
    answer: &'static str,
    witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<WitnessJson>>,
    backdoor: Option<Vec<u32>>,
    class: &'static str,
    route: &'static str,
    stats: StatsJson,
    timings_ms: f64,
}

fn formula_json(f: &Formula) -> Vec<Vec<i64>> {
    f.clauses()
        .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
        .collect()
}

fn ids(vars: &BTreeSet<Var>) -> Vec<u32> {
    vars.iter().map(|v| v.id()).collect()
}

fn answer_name(a: Answer) -> &'static str {
    match a {
        Answer::ExtensionExists => "extension-exists",
        Answer::NoExtension => "no-extension",
    }
}

fn answer_code(a: Answer) -> i32 {
    match a {
        Answer::ExtensionExists => EXIT_EXTENSION,
        Answer::NoExtension => EXIT_NO_EXTENSION,
    }
}

fn describe(c: &ExtensionCandidate) -> String {
    let base: Vec<String> = c.base.iter().map(|f| format!("[{f}]")).collect();
    let generating: Vec<String> = c.generating.iter().map(|i| i.to_string()).collect();
    format!("Th({}) generating {{{}}}", base.join(" "), generating.join(","))
}

fn render_report(report: &SolveReport, json: bool, exhaustive: bool, elapsed_ms: f64) -> String {
    if json {
        let body = ReportJson {
            answer: answer_name(report.answer),
            witness: report.witness.as_ref().map(WitnessJson::from),
            witnesses: exhaustive.then(|| report.witnesses.iter().map(WitnessJson::from).collect()),
            backdoor: report.backdoor.as_ref().map(ids),
            class: report.class.name(),
            route: match report.route {
                Route::Backdoor => "backdoor",
                Route::BruteForce => "brute-force",
            },
            stats: StatsJson {
                reducts: report.stats.reducts,
                candidates: report.stats.candidates,
                oracle_calls: report.stats.oracle_calls,
            },
            timings_ms: elapsed_ms,
        };
        return serde_json::to_string(&body).expect("report serializes") + "\n";
    }
    let mut out = format!("answer: {}\n", answer_name(report.answer));
    match &report.backdoor {
        Some(b) => out += &format!("backdoor ({}): {:?}\n", report.class, ids(b)),
        None => out += "backdoor: none (brute-force enumeration)\n",
    }
    if let Some(w) = &report.witness {
        out += &format!("witness: {}\n", describe(w));
    }
    if exhaustive {
        for w in &report.witnesses {
            out += &format!("verified: {}\n", describe(w));
        }
    }
    out += &format!(
        "reducts: {}, candidates: {}, oracle calls: {}\n",
        report.stats.reducts, report.stats.candidates, report.stats.oracle_calls
    );
    out
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<DefaultTheory, String> {
    let text = if input.file == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(&input.file).map_err(|e| format!("{}: {e}", input.file))?
    };
    let theory = parse_theory(&text).map_err(|e| format!("{}: {e}", input.file))?;
    Ok(theory.remove_tautologies())
}

fn var_set(ids: &[u32]) -> Result<BTreeSet<Var>, String> {
    ids.iter()
        .map(|&i| {
            if i == 0 {
                Err("variable id 0 in --backdoor".to_string())
            } else {
                Ok(Var::new(i))
            }
        })
        .collect()
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(outcome) => outcome,
        Err(message) => Outcome::error(message),
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Outcome, String> {
    let started = Instant::now();
    let elapsed = || started.elapsed().as_secs_f64() * 1000.0;
    match command {
        Command::Detect { input, class, k } => {
            let theory = load(&input, stdin)?;
            let class = FormulaClass::from(class);
            let detection = detect_backdoor(&theory, class, BackdoorBudget(k));
            let (code, found, minimum) = match &detection {
                Detection::Found(b) => (EXIT_OK, Some(b.clone()), None),
                Detection::NotFound => (EXIT_NOT_FOUND, None, None),
                Detection::OverBudget(b) => (EXIT_NOT_FOUND, None, Some(b.clone())),
            };
            let out = if input.json {
                serde_json::json!({
                    "class": class.name(),
                    "k": k,
                    "backdoor": found.as_ref().map(ids),
                    "minimum": minimum.as_ref().map(ids),
                    "timings_ms": elapsed(),
                })
                .to_string()
                    + "\n"
            } else {
                match (&found, &minimum) {
                    (Some(b), _) => format!("backdoor ({class}, size {}): {:?}\n", b.len(), ids(b)),
                    (None, Some(m)) => format!(
                        "no {class} backdoor of size <= {k}; the smallest has size {}: {:?}\n",
                        m.len(),
                        ids(m)
                    ),
                    (None, None) => format!("no {class} backdoor of size <= {k}\n"),
                }
            };
            Ok(Outcome::ok(code, out))
        }
        Command::Eval {
            input,
            class,
            backdoor,
            oracle,
            all,
        } => {
            let theory = load(&input, stdin)?;
            let backdoor = var_set(&backdoor)?;
            let options = EvalOptions {
                oracle: oracle.into(),
                exhaustive: all,
            };
            let report = evaluate_backdoor(&theory, &backdoor, class.into(), options).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(
                answer_code(report.answer),
                render_report(&report, input.json, all, elapsed()),
            ))
        }
        Command::Solve {
            input,
            class,
            k,
            limit,
            oracle,
            all,
        } => {
            let theory = load(&input, stdin)?;
            let options = SolveOptions {
                eval: EvalOptions {
                    oracle: oracle.into(),
                    exhaustive: all,
                },
                limit,
            };
            match solve(&theory, class.into(), BackdoorBudget(k), options) {
                Ok(report) => Ok(Outcome::ok(
                    answer_code(report.answer),
                    render_report(&report, input.json, all, elapsed()),
                )),
                Err(e @ crate::Error::OverBudget { .. }) => Ok(Outcome {
                    code: EXIT_NOT_FOUND,
                    stdout: String::new(),
                    stderr: format!("{e}\n"),
                }),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Check {
            input,
            generating,
            oracle,
            class,
            backdoor,
        } => {
            let theory = load(&input, stdin)?;
            let generating: BTreeSet<usize> = generating.into_iter().collect();
            if let Some(&bad) = generating.iter().find(|&&i| i >= theory.rules.len()) {
                return Err(format!("rule index {bad} out of range ({} rules)", theory.rules.len()));
            }
            let oracle = match oracle {
                OracleArg::General => Oracle::general(),
                OracleArg::Dispatch => Oracle::dispatch(),
                OracleArg::Backdoor => {
                    let class = class.ok_or("--oracle backdoor needs --class")?;
                    Oracle::backdoor(var_set(&backdoor)?, class.into())
                }
            };
            let candidate = generated_candidate(&theory, &generating);
            let verdict = check_extension(&theory, &candidate, &oracle);
            let out = if input.json {
                serde_json::json!({
                    "is_extension": verdict,
                    "candidate": WitnessJson::from(&candidate),
                    "oracle_calls": oracle.calls(),
                    "timings_ms": elapsed(),
                })
                .to_string()
                    + "\n"
            } else if verdict {
                format!("extension: {}\n", describe(&candidate))
            } else {
                format!("not an extension: {}\n", describe(&candidate))
            };
            Ok(Outcome::ok(EXIT_OK, out))
        }
        Command::Enumerate { input, limit } => {
            let theory = load(&input, stdin)?;
            let extensions = enumerate_extensions(&theory, limit).map_err(|e| e.to_string())?;
            let code = if extensions.is_empty() {
                EXIT_NO_EXTENSION
            } else {
                EXIT_EXTENSION
            };
            let out = if input.json {
                serde_json::json!({
                    "count": extensions.len(),
                    "extensions": extensions.iter().map(WitnessJson::from).collect::<Vec<_>>(),
                    "timings_ms": elapsed(),
                })
                .to_string()
                    + "\n"
            } else {
                let mut out = format!("{} extensions\n", extensions.len());
                for e in &extensions {
                    out += &format!("{}\n", describe(e));
                }
                out
            };
            Ok(Outcome::ok(code, out))
        }
        Command::Gen {
            seed,
            vars,
            rules,
            knowledge,
            clauses,
            lits,
            planted_cover,
            occurrences,
        } => {
            let theory = match planted_cover {
                Some(cover) => planted_horn_cover(seed, cover, occurrences),
                None => {
                    if vars == 0 {
                        return Err("--vars must be at least 1".into());
                    }
                    let config = RandomTheoryConfig {
                        vars,
                        max_rules: rules,
                        max_knowledge: knowledge,
                        max_clauses: clauses,
                        max_lits: lits,
                    };
                    random_theory(&mut rng(seed), &config)
                }
            };
            Ok(Outcome::ok(EXIT_OK, format!("# seed {seed}\n{}", render_theory(&theory))))
        }
    }
}
