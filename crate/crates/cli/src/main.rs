use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use pfstab::builders::{self, build_clock_chain, build_toric, ToricSpec};
use pfstab::code::{CodeError, CodeReport, DistanceOutcome, ReportOptions};
use pfstab::io::{self, code_json, IoError, Provenance, QuditFileV1};
use pfstab::oracle::{self, CheckLine, JwRep};
use pfstab::search::{self, SearchStatus};
use pfstab::{PfCode, PfOperator};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "pfstab", version, about = "Parafermion stabilizer code toolkit")]
struct Cli {
    /// Worker threads for distance and search (default: all cores).
    #[arg(long, global = true, env = "PFSTAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check commutation, parity and phase consistency.
    Validate { file: PathBuf },
    /// Full parameter report: |S|, dim, k, d, l_con, logical basis.
    Params {
        file: PathBuf,
        /// Cap for the distance search (required above 20 modes).
        #[arg(long)]
        max_weight: Option<usize>,
        #[arg(long)]
        no_distance: bool,
        #[arg(long)]
        json: bool,
    },
    /// Syndrome of an error such as "w^1 g3 g5^2".
    Syndrome {
        file: PathBuf,
        #[arg(long)]
        error: String,
    },
    /// Run a search described by a JSON spec and print its certificate.
    Search {
        spec: PathBuf,
        /// Include wall time (makes output non-reproducible).
        #[arg(long)]
        timed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Map a qudit code onto four parafermion modes per qudit.
    Embed {
        qudit_file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// CSS qudit code from a parafermion code.
    Double {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// D=6 code from a D=3 code.
    DoubleD6 {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Toric code with D = p^(2l) on an a x b torus.
    Toric {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Clock-chain code on 2n modes.
    Chain {
        #[arg(long = "D")]
        modulus: u64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Matrix oracle checks; with --file also projector and syndrome checks.
    Oracle {
        #[arg(long = "D")]
        modulus: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Write the built-in code corpus as JSON files into a directory.
    Corpus { dir: PathBuf },
    /// Run every reproduction check and print a summary table.
    ReproPaper {
        /// Directory of additional code files for the corpus check.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
    Budget,
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn code_failure(e: CodeError) -> Failure {
    match e {
        CodeError::Invalid(v) => Failure::Invalid(format!("invalid code: {v}")),
        other => Failure::Usage(other.to_string()),
    }
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<PfCode, Failure> {
    io::read_code(path).map_err(|e| match e {
        IoError::Read { .. } => Failure::Usage(e.to_string()),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

fn render_report(r: &CodeReport) -> String {
    let mut s = String::new();
    let k = r.k.map_or("-".to_string(), |k| k.to_string());
    let d = match &r.distance {
        Some(DistanceOutcome::Exact { distance, .. }) => distance.to_string(),
        Some(DistanceOutcome::AboveCap { cap }) => format!(">{cap}"),
        None => "-".to_string(),
    };
    let _ = writeln!(s, "[[{}, {}, {}]]_{}", r.num_modes, k, d, r.modulus);
    let _ = writeln!(s, "{:<16}{}", "modes", r.num_modes);
    let _ = writeln!(s, "{:<16}{}", "generators", r.num_generators);
    let _ = writeln!(s, "{:<16}{}", "validity", r.validity);
    let _ = writeln!(s, "{:<16}{}", "|S|", r.group_order);
    let _ = writeln!(s, "{:<16}{}", "dim C_S", r.codespace_dim);
    let _ = writeln!(s, "{:<16}{}", "k", k);
    match &r.distance {
        Some(DistanceOutcome::Exact { distance, witness }) => {
            let _ = writeln!(s, "{:<16}{} (witness {})", "d", distance, witness);
        }
        Some(DistanceOutcome::AboveCap { cap }) => {
            let _ = writeln!(s, "{:<16}> {} (lower bound)", "d", cap);
        }
        None => {
            let _ = writeln!(s, "{:<16}not computed", "d");
        }
    }
    match &r.l_con {
        Some(w) => {
            let _ = writeln!(s, "{:<16}{} (witness {}, {})", "l_con", w.diameter, w.witness, r.geometry);
        }
        None => {
            let _ = writeln!(s, "{:<16}none (no parity-conserving logical)", "l_con");
        }
    }
    let _ = writeln!(s, "logical basis:");
    for l in &r.logical_basis {
        let _ = writeln!(s, "  {:<40} charge {} weight {}", l.operator, l.charge, l.weight);
    }
    s
}

fn render_checks(lines: &[CheckLine]) -> String {
    let mut s = String::new();
    for l in lines {
        let _ = writeln!(
            s,
            "{:<4} {:<36} max error {:.2e}",
            if l.passed { "ok" } else { "FAIL" },
            l.name,
            l.max_error
        );
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file } => {
            let code = load(&file)?;
            let v = code.validate();
            println!(
                "abelian: {}\nparity-preserving: {}\nphase-consistent: {}",
                v.abelian, v.parity_ok, v.phase_ok
            );
            if v.is_valid() {
                println!("valid");
                Ok(())
            } else {
                Err(Failure::Invalid(format!("invalid code: {v}")))
            }
        }
        Command::Params {
            file,
            max_weight,
            no_distance,
            json,
        } => {
            let code = load(&file)?;
            if max_weight.is_none() && !no_distance && code.num_modes() > pfstab::code::FULL_SEARCH_MODES {
                eprintln!(
                    "note: {} modes exceeds the full-search limit of {}; pass --max-weight for a distance bound",
                    code.num_modes(),
                    pfstab::code::FULL_SEARCH_MODES
                );
            }
            let report = code
                .report(ReportOptions {
                    max_weight,
                    skip_distance: no_distance,
                    parallel: true,
                })
                .map_err(code_failure)?;
            if json {
                print!("{}", io::to_json(&report));
            } else {
                print!("{}", render_report(&report));
            }
            Ok(())
        }
        Command::Syndrome { file, error } => {
            let code = load(&file)?;
            let e = PfOperator::parse(&error, code.modulus(), code.num_modes())
                .map_err(|e| Failure::Usage(format!("--error: {e}")))?;
            let s = code.syndrome(&e).map_err(code_failure)?;
            println!("{}", serde_json::to_string(&s).expect("serializable"));
            Ok(())
        }
        Command::Search { spec, timed, out } => {
            let spec = io::read_search_spec(&spec).map_err(|e| match e {
                IoError::Read { .. } => Failure::Usage(e.to_string()),
                other => Failure::Usage(format!("{}: {other}", spec.display())),
            })?;
            let estimate = search::describe_estimate(&spec).map_err(|e| Failure::Usage(e.to_string()))?;
            eprintln!("search space: {estimate}");
            let outcome = search::find_codes(&spec, !timed).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&out, &io::to_json(&outcome.certificate))?;
            let c = &outcome.certificate;
            eprintln!(
                "status: {:?}, {} hits, {} nodes, {} complete tuples",
                c.status,
                c.hits.len(),
                c.nodes_visited,
                c.complete_tuples
            );
            if c.status == SearchStatus::BudgetExceeded {
                return Err(Failure::Budget);
            }
            Ok(())
        }
        Command::Embed { qudit_file, out } => {
            let q = io::read_qudit_code(&qudit_file)?;
            let code = builders::embed_qudit_code(&q).map_err(|e| Failure::Invalid(e.to_string()))?;
            let prov = Provenance::new(
                "embed_qudit_code",
                &[("source", Value::from(qudit_file.display().to_string()))],
            );
            emit(&out, &code_json(&code, Some(prov)))
        }
        Command::Double { file, out } => {
            let code = load(&file)?;
            let css = builders::double_to_css(&code).map_err(|e| Failure::Invalid(e.to_string()))?;
            emit(&out, &io::to_json(&QuditFileV1::from_matrix(&css)))
        }
        Command::DoubleD6 { file, out } => {
            let code = load(&file)?;
            let d6 = builders::double_code_d6(&code).map_err(|e| Failure::Usage(e.to_string()))?;
            let prov = Provenance::new("double_code_d6", &[("source", Value::from(file.display().to_string()))]);
            emit(&out, &code_json(&d6, Some(prov)))
        }
        Command::Toric { p, l, a, b, out } => {
            let t = build_toric(ToricSpec { p, l, a, b }).map_err(|e| Failure::Usage(e.to_string()))?;
            for (kind, ops) in [("horizontal", &t.horizontal), ("vertical", &t.vertical)] {
                for op in ops {
                    eprintln!("{kind} logical: {op} (charge {})", op.charge());
                }
            }
            let prov = Provenance::new(
                "build_toric",
                &[
                    ("a", Value::from(a)),
                    ("b", Value::from(b)),
                    ("l", Value::from(l)),
                    ("p", Value::from(p)),
                ],
            );
            emit(&out, &code_json(&t.code, Some(prov)))
        }
        Command::Chain { modulus, n, out } => {
            let code = build_clock_chain(modulus, n).map_err(|e| Failure::Usage(e.to_string()))?;
            let prov = Provenance::new("build_clock_chain", &[("D", Value::from(modulus)), ("n", Value::from(n))]);
            emit(&out, &code_json(&code, Some(prov)))
        }
        Command::Oracle { modulus, n, file, cases } => {
            let mut lines = oracle::relation_suite(modulus, n).map_err(|e| Failure::Usage(e.to_string()))?;
            lines.extend(
                oracle::homomorphism_suite(modulus, n, cases, 0x5eed).map_err(|e| Failure::Usage(e.to_string()))?,
            );
            if let Some(path) = file {
                let code = load(&path)?;
                if code.modulus() != modulus || code.n() != n {
                    return Err(Failure::Usage(format!(
                        "code has D={} n={}, oracle was asked for D={modulus} n={n}",
                        code.modulus(),
                        code.n()
                    )));
                }
                lines.extend(oracle::projector_suite(&code).map_err(|e| Failure::Invalid(e.to_string()))?);
                let rep = JwRep::new(modulus, n).map_err(|e| Failure::Usage(e.to_string()))?;
                let (p, _) = rep.projector(&code).map_err(|e| Failure::Invalid(e.to_string()))?;
                let errors = pfstab::repro::weight_at_most_two(modulus, 2 * n);
                let mut mismatches = 0;
                for e in &errors {
                    let sim = rep.syndrome_sim(&code, &p, e).map_err(|e| Failure::Invalid(e.to_string()))?;
                    if sim != code.syndrome(e).map_err(code_failure)? {
                        mismatches += 1;
                    }
                }
                lines.push(CheckLine {
                    name: format!("syndromes, {} errors of weight <= 2", errors.len()),
                    max_error: mismatches as f64,
                    passed: mismatches == 0,
                });
            }
            print!("{}", render_checks(&lines));
            if lines.iter().all(|l| l.passed) {
                Ok(())
            } else {
                Err(Failure::Invalid("oracle check failed".into()))
            }
        }
        Command::Corpus { dir } => {
            fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            for (name, code, prov) in pfstab::repro::corpus() {
                let path = dir.join(format!("{name}.json"));
                fs::write(&path, code_json(&code, Some(prov)))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
            let q = builders::five_qudit_code(3).map_err(|e| Failure::Usage(e.to_string()))?;
            let path = dir.join("qudit_five_qutrit.json");
            fs::write(&path, io::to_json(&QuditFileV1::from_matrix(&q)))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            println!("{}", path.display());
            Ok(())
        }
        Command::ReproPaper { corpus, json } => {
            let checks = pfstab::repro::run_all(corpus.as_deref());
            if json {
                print!("{}", io::to_json(&checks));
            } else {
                for c in &checks {
                    println!("{}", c.line());
                }
                let passed = checks.iter().filter(|c| c.passed).count();
                println!("{passed}/{} checks passed", checks.len());
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Invalid("some checks failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Budget) => {
            eprintln!("budget exceeded; certificate is partial");
            ExitCode::from(EXIT_BUDGET)
        }
    }
}
