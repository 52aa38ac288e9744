//! The `thompson` command line.
//!
//! Words are read left to right in application order: `x0 x1` means
//! "apply x0, then x1", the reverse of the usual `f ∘ g` convention.
//!
//! Exit status: 0 on success (or a passing check), 1 when a check fails or a
//! query answers negatively, 2 on usage or parse errors.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dyadic::Dyadic;
use crate::plmap::PLMap;
use crate::treepair::TreePair;
use crate::verify::{self, Report};
use crate::words::{eval_word, Word};
use crate::wreath::{WreathElement, WreathError};

pub const GRAPH_COLS: usize = 64;
pub const GRAPH_ROWS: usize = 32;

#[derive(Debug, Parser)]
#[command(
    name = "thompson",
    version,
    about = "Exact computations in Thompson's group F = PL2([0,1])",
    after_help = "Words are applied left to right: \"x0 x1\" is x0 followed by x1."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image of a point under the map of WORD
    Eval {
        word: String,
        #[arg(long)]
        at: String,
    },
    /// Canonical breakpoint list of WORD as x:y pairs
    Map { word: String },
    /// Support of WORD as open intervals
    Support { word: String },
    /// Slope exponent on every segment of WORD
    Slopes { word: String },
    /// Whether WORD is the identity (exit 1 if not)
    IsTrivial { word: String },
    /// Image of WORD in F/F' = Z^2 (end-slope exponents)
    Abelianize { word: String },
    /// Reduced tree-pair diagram of WORD
    Diagram { word: String },
    /// Map of a Z wr Z element given as "shift=m; coeffs={k:v, ...}"
    WreathEmbed { spec: String },
    /// Normal form in <a, b> of the map of WORD (exit 1 if not in the subgroup)
    WreathDecompose { word: String },
    /// Run a verification check
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long, env = "THOMPSON_KMAX", default_value_t = verify::DEFAULT_KMAX)]
        kmax: u32,
        #[arg(long, env = "THOMPSON_NMAX", default_value_t = verify::DEFAULT_NMAX)]
        nmax: u32,
        #[arg(long, env = "THOMPSON_RADIUS", default_value_t = verify::DEFAULT_RADIUS)]
        radius: u32,
        #[arg(long, env = "THOMPSON_RADIUS_CAP", default_value_t = verify::DEFAULT_RADIUS_CAP)]
        radius_cap: u32,
        /// Emit reports as JSON lines
        #[arg(long)]
        json: bool,
    },
    /// Export the breakpoints of WORD
    Export {
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// ASCII plot of WORD on a 64x32 grid
    Graph { word: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Lemma1,
    Claim,
    Relations,
    Centralizer,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<bool, Failure>;

/// Runs one invocation and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn word_map(text: &str) -> Result<PLMap, Failure> {
    let w: Word = text.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    Ok(eval_word(&w))
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Eval { word, at } => {
            let f = word_map(&word)?;
            let a: Dyadic = at.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let y = f.evaluate(&a).map_err(|e| Failure::Usage(format!("{e}")))?;
            emit(out, y)?;
        }
        Command::Map { word } => emit(out, word_map(&word)?)?,
        Command::Support { word } => emit(out, word_map(&word)?.support())?,
        Command::Slopes { word } => {
            let f = word_map(&word)?;
            for (w, s) in f.points().windows(2).zip(f.slope_exponents()) {
                emit(
                    out,
                    format!(
                        "[{}, {}] 2^{}",
                        w[0].x.to_fraction_string(),
                        w[1].x.to_fraction_string(),
                        s
                    ),
                )?;
            }
        }
        Command::IsTrivial { word } => {
            let trivial = word_map(&word)?.is_identity();
            emit(out, trivial)?;
            return Ok(trivial);
        }
        Command::Abelianize { word } => {
            let (s, t) = word_map(&word)?.abelianize();
            emit(out, format!("({s}, {t})"))?;
        }
        Command::Diagram { word } => {
            let p = TreePair::from_map(&word_map(&word)?)
                .map_err(|e| Failure::Usage(format!("{e}")))?;
            emit(out, p)?;
        }
        Command::WreathEmbed { spec } => {
            let u: WreathElement = spec.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            emit(out, u.embed())?;
        }
        Command::WreathDecompose { word } => match WreathElement::decompose(&word_map(&word)?) {
            Ok(u) => emit(out, u)?,
            Err(e @ WreathError::NotInWreathSubgroup(_)) => {
                return Err(Failure::Check(format!("{e}")))
            }
            Err(e) => return Err(Failure::Usage(format!("{e}"))),
        },
        Command::Verify {
            check,
            kmax,
            nmax,
            radius,
            radius_cap,
            json,
        } => {
            let reports = run_checks(check, kmax, nmax, radius, radius_cap)?;
            for r in &reports {
                if json {
                    emit(out, r.to_json())?;
                } else {
                    emit(out, r)?;
                }
            }
            return Ok(reports.iter().all(|r| r.pass));
        }
        Command::Export { word, format } => {
            let f = word_map(&word)?;
            match format {
                Format::Json => emit(out, f.to_json())?,
                Format::Csv => write!(out, "{}", f.to_csv())
                    .map_err(|e| Failure::Usage(format!("write failed: {e}")))?,
            }
        }
        Command::Graph { word } => {
            write!(out, "{}", ascii_graph(&word_map(&word)?))
                .map_err(|e| Failure::Usage(format!("write failed: {e}")))?;
        }
    }
    Ok(true)
}

fn run_checks(
    check: Check,
    kmax: u32,
    nmax: u32,
    radius: u32,
    cap: u32,
) -> Result<Vec<Report>, Failure> {
    if kmax == 0 && matches!(check, Check::Lemma1 | Check::Claim | Check::All) {
        return Err(Failure::Usage("--kmax must be at least 1".into()));
    }
    let cap_err = |e: verify::VerifyError| Failure::Usage(format!("{e}"));
    let mut reports = Vec::new();
    if matches!(check, Check::Lemma1 | Check::All) {
        reports.push(verify::verify_lemma1(kmax));
    }
    if matches!(check, Check::Claim | Check::All) {
        reports.push(verify::verify_claim(kmax));
    }
    if matches!(check, Check::Relations | Check::All) {
        reports.push(verify::verify_relations(nmax));
    }
    if matches!(check, Check::Centralizer | Check::All) {
        reports.push(verify::verify_x0_centralizer(radius, cap).map_err(cap_err)?);
        reports.push(verify::check_base_centralizer_capped(radius, kmax, cap).map_err(cap_err)?);
    }
    Ok(reports)
}

/// Plot of the graph (`*`) against the diagonal (`.`), `y` increasing upward.
pub fn ascii_graph(f: &PLMap) -> String {
    let mut grid = vec![vec![' '; GRAPH_COLS]; GRAPH_ROWS];
    let (lo, hi) = (f.domain().lo().to_f64(), f.domain().hi().to_f64());
    let row_of = |v: f64| {
        let t = ((v - lo) / (hi - lo) * GRAPH_ROWS as f64).floor() as isize;
        t.clamp(0, GRAPH_ROWS as isize - 1) as usize
    };
    let width = f.domain().hi() - f.domain().lo();
    for (c, col) in (0..GRAPH_COLS).map(|c| (c, c as i64)) {
        // sample at the centre of column c: lo + (2c+1)/128 * width
        let x = f.domain().lo() + &(&width * &Dyadic::new(2 * col + 1, 7));
        let y = f.evaluate(&x).expect("sample inside domain");
        grid[GRAPH_ROWS - 1 - row_of(x.to_f64())][c] = '.';
        grid[GRAPH_ROWS - 1 - row_of(y.to_f64())][c] = '*';
    }
    let mut s = String::with_capacity((GRAPH_COLS + 3) * (GRAPH_ROWS + 2));
    let border = format!("+{}+\n", "-".repeat(GRAPH_COLS));
    s.push_str(&border);
    for row in grid {
        s.push('|');
        s.extend(row);
        s.push_str("|\n");
    }
    s.push_str(&border);
    s
}
