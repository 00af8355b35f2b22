use std::collections::BTreeMap;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use kstep_opacity::bench::{bench, to_csv};
use kstep_opacity::counter::{build_counter, counter_path};
use kstep_opacity::format::{parse, serialize};
use kstep_opacity::oracle::{oracle_kso, OracleConfig};
use kstep_opacity::random::{gen_random, RandomSpec};
use kstep_opacity::transforms::{self, default_code, TransformResult};
use kstep_opacity::{verify_kso, Des, Error, Limits, StepBound, Verdict};

#[derive(Parser)]
#[command(name = "kso", version, about = "K-step opacity checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide K-step opacity (exit 0 opaque, 1 not opaque).
    Verify {
        file: PathBuf,
        #[arg(long)]
        k: StepBound,
    },
    /// Decide K-step opacity by bounded enumeration.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        k: StepBound,
        #[arg(long)]
        max_len: usize,
    },
    /// Apply a reduction and print the resulting DES.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        k: Option<StepBound>,
        /// Encode the output over two observable events (cso-to-kso only).
        #[arg(long)]
        binary: bool,
    },
    /// Print the step counter for K.
    Counter {
        #[arg(long)]
        k: BigUint,
    },
    /// Read a counter (file or stdin) and print the length of its unmarked path.
    CounterCheck { file: Option<PathBuf> },
    /// Print a seeded random DES.
    Gen {
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 3)]
        events: usize,
        #[arg(long, default_value_t = 1)]
        unobs: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the verifier for several K and print CSV.
    Bench {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        k_list: Vec<StepBound>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    CsoToKso,
    CsoToKsoSingle,
    InsoToCso,
    KsoToCso,
    KsoToCsoNeutral,
    KsoToCsoSingle,
    EncodeEvents,
    Determinize,
}

fn load(path: &Path) -> Result<Des, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn word(w: &[String]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.join(" ")
    }
}

fn report(v: &Verdict) -> ExitCode {
    match &v.witness {
        None => {
            println!("OPAQUE");
            ExitCode::SUCCESS
        }
        Some(w) => {
            println!("NOT-OPAQUE");
            println!("s_obs: {}", word(&w.s_obs));
            println!("t_obs: {}", word(&w.t_obs));
            println!("secret: {}", w.secret_state);
            ExitCode::from(1)
        }
    }
}

fn need_k(k: Option<StepBound>) -> Result<StepBound, String> {
    k.ok_or_else(|| "this mode needs --k".to_string())
}

fn transform(d: &Des, mode: Mode, k: Option<StepBound>, binary: bool) -> Result<TransformResult, String> {
    let e = |e: Error| e.to_string();
    if binary && !matches!(mode, Mode::CsoToKso) {
        return Err("--binary applies to cso-to-kso only".into());
    }
    match mode {
        Mode::CsoToKso if binary => transforms::cso_to_kso_binary(d).map_err(e),
        Mode::CsoToKso => transforms::cso_to_kso(d).map_err(e),
        Mode::CsoToKsoSingle => transforms::cso_to_kso_single_event(d).map_err(e),
        Mode::InsoToCso => transforms::inso_to_cso(d).map_err(e),
        Mode::KsoToCso => transforms::kso_to_cso(d, &need_k(k)?).map_err(e),
        Mode::KsoToCsoNeutral => transforms::kso_to_cso_neutral(d, &need_k(k)?).map_err(e),
        Mode::KsoToCsoSingle => transforms::kso_to_cso_single_event(d, &need_k(k)?).map_err(e),
        Mode::EncodeEvents => {
            let mut names: Vec<String> = d
                .automaton
                .events()
                .iter()
                .filter(|ev| ev.observable)
                .map(|ev| ev.name.clone())
                .collect();
            names.sort();
            let code: BTreeMap<String, String> =
                names.iter().cloned().zip(default_code(names.len())).collect();
            transforms::encode_events(d, &code).map_err(e)
        }
        Mode::Determinize => transforms::determinize_preserving(d).map_err(e),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify { file, k } => {
            let d = load(&file)?;
            let v = verify_kso(&d, &k).map_err(|e| e.to_string())?;
            Ok(report(&v))
        }
        Command::Oracle { file, k, max_len } => {
            let d = load(&file)?;
            let v = oracle_kso(&d, &OracleConfig::new(max_len, k)).map_err(|e| e.to_string())?;
            Ok(report(&v))
        }
        Command::Transform { file, mode, k, binary } => {
            let d = load(&file)?;
            let r = transform(&d, mode, k, binary)?;
            print!("{}", serialize(&r.output));
            println!("# claim: {}", r.claim);
            Ok(ExitCode::SUCCESS)
        }
        Command::Counter { k } => {
            let c = build_counter(&k);
            print!("{}", serialize(&c.to_des(&format!("counter{k}"))));
            Ok(ExitCode::SUCCESS)
        }
        Command::CounterCheck { file } => {
            let d = match file {
                Some(p) => load(&p)?,
                None => {
                    let mut text = String::new();
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|e| e.to_string())?;
                    parse(&text).map_err(|e| e.to_string())?
                }
            };
            match counter_path(&d.automaton, &Limits::default()).map_err(|e| e.to_string())? {
                Ok(len) => {
                    println!("path length {len}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(defect) => {
                    println!("not a counter: {defect}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Gen { states, events, unobs, density, seed } => {
            if states == 0 || unobs > events || !(density > 0.0 && density <= 1.0) {
                return Err("need --states >= 1, --unobs <= --events, 0 < --density <= 1".into());
            }
            let d = gen_random(&RandomSpec {
                n_states: states,
                n_events: events,
                n_unobservable: unobs,
                density,
                seed,
                ..RandomSpec::default()
            });
            print!("{}", serialize(&d));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { file, k_list, repeats } => {
            let d = load(&file)?;
            let rows = bench(&d, &k_list, repeats).map_err(|e| e.to_string())?;
            print!("{}", to_csv(&rows));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
