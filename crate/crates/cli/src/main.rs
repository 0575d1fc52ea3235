use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kbsm_core::diagram::{random_diagram, read_diagram, write_diagram, MoveKind};
use kbsm_core::oracle::check_invariance;
use kbsm_core::reduction::Reducer;
use kbsm_core::ring::{p_n, p_nk};
use kbsm_core::state_sum::refined_bracket;
use kbsm_core::words::{GeneralWord, SkeinElement, Surface};

/// Kauffman bracket skein module calculator for F x S^1.
#[derive(Parser)]
#[command(name = "kbsm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bracket of a diagram file, in the standard basis.
    Bracket {
        file: String,
        /// Surface to use instead of the file header.
        #[arg(long)]
        surface: Option<Surface>,
        /// Print rewrite steps to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Normal form of a word.
    Reduce {
        word: String,
        #[arg(long)]
        surface: Surface,
        #[arg(long)]
        trace: bool,
    },
    /// P_n as a polynomial in x.
    Pn {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// P_{n,k} as a polynomial in x.
    Pnk {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        k: u32,
    },
    /// Invariance trials for random move pairs.
    Verify {
        #[arg(long)]
        surface: Surface,
        /// Comma-separated moves; `omega1` means both kink signs.
        #[arg(long, default_value = "omega1,omega2,omega3,omega4,omega5")]
        moves: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A random valid diagram in the file format.
    Random {
        #[arg(long)]
        surface: Surface,
        #[arg(long, default_value_t = 3)]
        crossings: usize,
        #[arg(long, default_value_t = 2)]
        dots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

const INPUT_ERROR: u8 = 1;
const VERIFY_FAILED: u8 = 2;

fn parse_moves(text: &str) -> Result<Vec<MoveKind>, String> {
    let mut out = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "omega1" {
            out.extend([MoveKind::Omega1Pos, MoveKind::Omega1Neg]);
        } else {
            out.push(name.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no moves given".into());
    }
    Ok(out)
}

fn reduce(e: &SkeinElement, trace: bool) -> SkeinElement {
    let reducer = Reducer::global();
    if !trace {
        return reducer.normal_form(e);
    }
    let (nf, steps) = reducer.normal_form_traced(e);
    for step in &steps.steps {
        eprintln!("{step}");
    }
    nf
}

fn run(cmd: Command) -> Result<u8, String> {
    match cmd {
        Command::Bracket { file, surface, trace } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{file}: {e}"))?;
            let mut d = read_diagram(&text).map_err(|e| format!("{file}: {e}"))?;
            if let Some(s) = surface {
                d.surface = s;
            }
            let d = d.validate().map_err(|e| format!("{file}: {e}"))?;
            println!("{}", reduce(&refined_bracket(&d), trace));
        }
        Command::Reduce { word, surface, trace } => {
            let w = GeneralWord::parse(&word, surface).map_err(|e| e.to_string())?;
            println!("{}", reduce(&SkeinElement::from_word(w), trace));
        }
        Command::Pn { n } => println!("{}", p_n(n)),
        Command::Pnk { n, k } => println!("{}", p_nk(n, k)),
        Command::Verify { surface, moves, trials, seed } => {
            let moves = parse_moves(&moves)?;
            let report = check_invariance(surface, &moves, trials as usize, seed);
            println!("{report}");
            if !report.all_ok() {
                return Ok(VERIFY_FAILED);
            }
        }
        Command::Random { surface, crossings, dots, seed } => {
            print!("{}", write_diagram(random_diagram(surface, crossings, dots, seed).diagram()));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
