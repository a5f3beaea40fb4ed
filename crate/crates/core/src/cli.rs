//! Command-line front end. Exit codes: 0 success, 1 a certificate or
//! validation FAIL, 2 usage, parse, I/O or budget errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::budget;
use crate::cert::{certify_adaptive, certify_nonadaptive, Report};
use crate::error::Error;
use crate::exemplars::{
    gi_partial_tester, gi_slice_members, palindrome_partial_tester, palindrome_slice_members, GraphIsomorphism,
    PalindromeLanguage, Permutation,
};
use crate::formats;
use crate::gf2::LinearCode;
use crate::selftest;
use crate::tester::{validate_partial_tester, Property, Tester, ValidationMode, ValidityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ptlab", version, about = "Partial-testability laboratory: codes, testers, entropy certificates")]
struct Cli {
    /// Enumeration cap, `2^k` or a count (overrides PTLAB_BUDGET)
    #[arg(long, global = true)]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear codes
    #[command(subcommand)]
    Code(CodeCmd),
    /// Testers
    #[command(subcommand)]
    Tester(TesterCmd),
    /// Entropy certificates
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Exemplar partial testers
    #[command(subcommand)]
    Demo(DemoCmd),
    /// Run the built-in invariant checks
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CodeCmd {
    /// Random code from the seeded generator
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the dual distance
    DualDistance {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// List every codeword
    Enumerate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyKind {
    Code,
    Palindrome,
    Gi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    MonteCarlo,
    Auto,
}

#[derive(Subcommand, Debug)]
enum TesterCmd {
    /// Check acceptance on the subset and rejection of far inputs
    Validate {
        #[arg(long)]
        tester: PathBuf,
        /// Members that must be accepted
        #[arg(long)]
        subset: PathBuf,
        #[arg(long, value_enum, default_value = "code")]
        property: PropertyKind,
        /// Code file, for `--property code`
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    subset: PathBuf,
    #[arg(long)]
    tester: PathBuf,
    /// Discerning threshold, `p/q`
    #[arg(long, default_value = "1/8")]
    tau: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CertifyCmd {
    Nonadaptive(CertifyArgs),
    Adaptive(CertifyArgs),
}

#[derive(Args, Debug)]
struct DemoCommon {
    /// Proximity parameter, `p/q`
    #[arg(long, default_value = "1/8")]
    epsilon: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Also write the generated tester file here
    #[arg(long)]
    tester_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum DemoCmd {
    /// Palindrome-pair slice `L_i`
    Palindrome {
        #[arg(long, default_value_t = 24)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        i: usize,
        #[command(flatten)]
        common: DemoCommon,
    },
    /// Graph pairs isomorphic under a seeded permutation
    Gi {
        #[arg(long, default_value_t = 4)]
        v: usize,
        /// Permutation images, e.g. `2,1,4,3`; random from the seed if absent
        #[arg(long)]
        pi: Option<String>,
        #[command(flatten)]
        common: DemoCommon,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(String, bool), Failure>;

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> crate::Result<T>) -> std::result::Result<T, Failure> {
    let text = read_file(path)?;
    parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn rational(flag: &str, text: &str) -> std::result::Result<BigRational, Failure> {
    formats::parse_rational(text).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn mode_of(mode: Mode, samples: u64, seed: u64) -> ValidationMode {
    match mode {
        Mode::Exhaustive => ValidationMode::Exhaustive,
        Mode::MonteCarlo => ValidationMode::MonteCarlo { samples, seed },
        Mode::Auto => ValidationMode::Auto { samples, seed },
    }
}

fn validity_text(title: &str, params: &[(&str, String)], rep: &ValidityReport) -> String {
    let mut s = format!("VALIDATION {title}\nVERSION {}\n", crate::cert::VERSION);
    for (k, v) in params {
        s.push_str(&format!("PARAM {k} {v}\n"));
    }
    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    s.push_str(&format!("PARAM mode {}\n", if rep.monte_carlo { "monte-carlo" } else { "exhaustive" }));
    s.push_str(&format!("MEASURE checked {}\n", rep.checked));
    s.push_str(&format!("MEASURE member_min {}\n", rep.member_min));
    s.push_str(&format!("MEASURE member_argmin {}\n", rep.member_argmin));
    s.push_str(&format!("MEASURE far_count {}\n", rep.far_count));
    s.push_str(&format!("MEASURE far_max {}\n", opt(rep.far_max.as_ref().map(|x| x.to_string()))));
    s.push_str(&format!("MEASURE far_argmax {}\n", opt(rep.far_argmax.map(|x| x.to_string()))));
    s.push_str(&format!("MEASURE far_mean {}\n", opt(rep.far_mean.map(|x| x.to_string()))));
    s.push_str(&format!("MEASURE far_se {}\n", opt(rep.far_se.map(|x| x.to_string()))));
    s.push_str(&format!("RESULT {}\n", if rep.pass { "PASS" } else { "FAIL" }));
    s
}

fn certify(args: &CertifyArgs, adaptive: bool) -> Outcome {
    let code = load(&args.code, formats::parse_code)?;
    let cp = load(&args.subset, |t| formats::parse_wordset(t, Some(code.n())))?;
    let t = load(&args.tester, formats::parse_tester)?;
    let tau = rational("tau", &args.tau)?;
    let report: Report = if adaptive {
        let c = certify_adaptive(&code, &cp, &t, &tau)?;
        let mut r = c.to_report();
        if c.bijection == Some(false) {
            r.param("bijection_failed", true);
        }
        r
    } else {
        certify_nonadaptive(&code, &cp, &t, &tau)?.to_report()
    };
    let pass = report.pass();
    Ok((report.render(), pass))
}

fn demo(
    title: &str,
    params: Vec<(&str, String)>,
    t: &Tester,
    property: &dyn Property,
    members: &crate::gf2::WordSet,
    common: &DemoCommon,
) -> Outcome {
    if let Some(path) = &common.tester_out {
        write_atomic(path, &formats::print_tester(t))?;
    }
    let rep = validate_partial_tester(t, property, members, mode_of(common.mode, common.samples, common.seed))?;
    let mut params = params;
    params.push(("q", t.q().to_string()));
    params.push(("rules", t.rules().len().to_string()));
    params.push(("tester_digest", formats::digest(&formats::print_tester(t))));
    Ok((validity_text(title, &params, &rep), rep.pass))
}

fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Code(CodeCmd::Gen { n, k, seed, out }) => {
            let code = LinearCode::random(n, k, seed)?;
            emit(out, formats::print_code(&code), true)
        }
        Command::Code(CodeCmd::DualDistance { input }) => {
            let code = load(&input, formats::parse_code)?;
            Ok((format!("{}\n", code.dual_distance()?), true))
        }
        Command::Code(CodeCmd::Enumerate { input, out }) => {
            let code = load(&input, formats::parse_code)?;
            emit(out, formats::print_wordset(&code.enumerate()?), true)
        }
        Command::Tester(TesterCmd::Validate { tester, subset, property, code, mode, samples, seed, out }) => {
            let t = load(&tester, formats::parse_tester)?;
            let cp = load(&subset, |s| formats::parse_wordset(s, Some(t.n())))?;
            let m = mode_of(mode, samples, seed);
            let rep = match property {
                PropertyKind::Code => {
                    let path = code.ok_or_else(|| Failure::Usage("--property code needs --code".into()))?;
                    let c = load(&path, formats::parse_code)?;
                    validate_partial_tester(&t, &c, &cp, m)?
                }
                PropertyKind::Palindrome => validate_partial_tester(&t, &PalindromeLanguage { n: t.n() }, &cp, m)?,
                PropertyKind::Gi => {
                    let v = (1..=8).find(|v| 2 * v * v == t.n()).ok_or_else(|| {
                        Failure::Usage(format!("tester length {} is not 2v² for any v <= 8", t.n()))
                    })?;
                    validate_partial_tester(&t, &GraphIsomorphism { v }, &cp, m)?
                }
            };
            let text = validity_text("tester", &[("n", t.n().to_string()), ("q", t.q().to_string())], &rep);
            emit(out, text, rep.pass)
        }
        Command::Certify(CertifyCmd::Nonadaptive(args)) => {
            let (text, pass) = certify(&args, false)?;
            emit(args.out, text, pass)
        }
        Command::Certify(CertifyCmd::Adaptive(args)) => {
            let (text, pass) = certify(&args, true)?;
            emit(args.out, text, pass)
        }
        Command::Demo(DemoCmd::Palindrome { n, i, common }) => {
            let eps = rational("epsilon", &common.epsilon)?;
            let t = palindrome_partial_tester(n, i, &eps, common.seed)?;
            let members = palindrome_slice_members(n, i)?;
            let params = vec![("n", n.to_string()), ("i", i.to_string()), ("epsilon", eps.to_string())];
            let (text, pass) = demo("palindrome", params, &t, &PalindromeLanguage { n }, &members, &common)?;
            emit(common.out.clone(), text, pass)
        }
        Command::Demo(DemoCmd::Gi { v, pi, common }) => {
            let eps = rational("epsilon", &common.epsilon)?;
            let pi = match pi {
                Some(text) => {
                    let images = text
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Failure::Usage(format!("--pi: bad permutation {text:?}")))?;
                    Permutation::new(images)?
                }
                None => Permutation::random(v, common.seed),
            };
            if pi.len() != v {
                return Err(Failure::Usage(format!("--pi has {} entries, expected {v}", pi.len())));
            }
            let t = gi_partial_tester(&pi, &eps, common.seed)?;
            let members = gi_slice_members(&pi)?;
            let images: Vec<String> = (1..=v).map(|u| pi.apply(u).to_string()).collect();
            let params = vec![("v", v.to_string()), ("pi", images.join(",")), ("epsilon", eps.to_string())];
            let (text, pass) = demo("gi", params, &t, &GraphIsomorphism { v }, &members, &common)?;
            emit(common.out.clone(), text, pass)
        }
        Command::Selftest { seed, out } => {
            let checks = selftest::run(seed);
            let pass = checks.iter().all(|c| c.pass);
            emit(out, selftest::render(&checks), pass)
        }
    }
}

/// Routes the text to `out` (atomically) or back to the caller for stdout.
fn emit(out: Option<PathBuf>, text: String, pass: bool) -> Outcome {
    match out {
        Some(path) => {
            write_atomic(&path, &text)?;
            Ok((String::new(), pass))
        }
        None => Ok((text, pass)),
    }
}

/// Runs one invocation, writing results to `stdout` and diagnostics to
/// `stderr`. Returns the process exit code.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let budget_text = cli.budget.clone().or_else(|| std::env::var("PTLAB_BUDGET").ok());
    if let Some(text) = budget_text {
        match budget::parse_budget(&text) {
            Some(log2) => budget::set_budget_log2(log2),
            None => {
                let _ = writeln!(stderr, "error: bad enumeration budget {text:?}");
                return EXIT_USAGE;
            }
        }
    }
    match execute(cli) {
        Ok((text, pass)) => {
            let _ = stdout.write_all(text.as_bytes());
            if pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(argv, &mut out, &mut err)
}
