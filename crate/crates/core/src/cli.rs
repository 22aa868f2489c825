//! The `qcm` command line.
//!
//! Exit codes: 0 success; 1 diagnostics, a failed check, or a rejected
//! score; 2 usage or I/O errors.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::engine::{self, DrivePolicy, SimulateOptions, Timestamps};
use crate::lang::{check_bytes, check_text};
use crate::lemma::{verify_lemma_with, Corruption};
use crate::score::Severity;
use crate::service::{self, journal, Host};
use crate::sim::RngSeed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qcm", version, about = "Scores, measurements, and live sessions for quantum concept music")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate `.qcm` files. Diagnostics go to stderr.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Check the measurement equation in both colours.
    VerifyLemma {
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Put a π phase on the right-hand side; the check should then fail.
        #[arg(long)]
        corrupt: bool,
    },
    /// Drive many sessions of a score and report agreement statistics.
    Simulate {
        score: PathBuf,
        /// Drawn and printed when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Event logs of every session, NDJSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Colour the partner is read in after each collapse: same, cross, or both.
        #[arg(long, default_value = "both", value_parser = parse_policy)]
        policy: DrivePolicy,
        /// Pairs per CHSH setting; 0 skips the CHSH subreport.
        #[arg(long, default_value_t = 100_000)]
        chsh_trials: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Replay a session journal and write its event log.
    Export {
        journal: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave timestamps out, for byte comparison.
        #[arg(long)]
        no_timestamps: bool,
    },
    /// Run the session host.
    Serve {
        #[arg(long, env = service::LISTEN_ENV, default_value = service::DEFAULT_LISTEN)]
        listen: String,
        /// Directory for session journals; sessions found there are restored.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

fn parse_policy(s: &str) -> Result<DrivePolicy, String> {
    DrivePolicy::parse(s).ok_or_else(|| format!("unknown policy `{s}` (same, cross, both)"))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_IO;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_IO
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    match cmd {
        Command::Check { paths } => check(&paths, out, err),
        Command::VerifyLemma { tolerance, corrupt } => {
            let corruption = if corrupt { Corruption::PiOnRhs } else { Corruption::None };
            match verify_lemma_with(tolerance, corruption) {
                Ok(report) => {
                    write!(out, "{report}")?;
                    Ok(if report.pass() { EXIT_OK } else { EXIT_FINDINGS })
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_IO)
                }
            }
        }
        Command::Simulate { score, seed, trials, out: log_path, policy, chsh_trials, json } => {
            let text = std::fs::read_to_string(&score).map_err(|e| with_path(&score, e))?;
            let (parsed, diags) = check_text(&text);
            if report_diags(&score, &diags, err)? {
                return Ok(EXIT_FINDINGS);
            }
            let seed = seed.unwrap_or_else(rand::random);
            let opts = SimulateOptions { seed: RngSeed(seed), trials, policy, chsh_trials };
            let mut file = match &log_path {
                Some(p) => Some(io::BufWriter::new(std::fs::File::create(p).map_err(|e| with_path(p, e))?)),
                None => None,
            };
            let report = engine::simulate(
                &parsed.expect("no errors"),
                &opts,
                file.as_mut().map(|f| f as &mut dyn Write),
            );
            let report = match report {
                Ok(r) => r,
                Err(engine::SimulateError::Io(e)) => return Err(e),
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_FINDINGS);
                }
            };
            if let Some(mut f) = file {
                f.flush()?;
            }
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(io::Error::other)?)?;
            } else {
                write!(out, "{report}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Export { journal: path, out: dest, no_timestamps } => {
            let (header, actions) = journal::read(&path).map_err(|e| with_path(&path, e))?;
            let (score, diags) = check_text(&header.score);
            if report_diags(&path, &diags, err)? {
                return Ok(EXIT_FINDINGS);
            }
            let clock = if no_timestamps { engine::zero_clock() } else { engine::wall_clock() };
            let session =
                match engine::replay(Arc::new(score.expect("no errors")), RngSeed(header.seed), header.options, clock, &actions) {
                    Ok(s) => s,
                    Err(e) => {
                        writeln!(err, "error: {e}")?;
                        return Ok(EXIT_FINDINGS);
                    }
                };
            let ts = if no_timestamps { Timestamps::Exclude } else { Timestamps::Include };
            let text = session.to_ndjson(ts);
            match dest {
                Some(p) => std::fs::write(&p, text).map_err(|e| with_path(&p, e))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Serve { listen, journal } => {
            let host = match &journal {
                Some(dir) => {
                    let (host, failed) = Host::with_journal(dir).map_err(|e| with_path(dir, e))?;
                    for (p, why) in failed {
                        writeln!(err, "warning: {} not restored: {why}", p.display())?;
                    }
                    host
                }
                None => Host::in_memory(),
            };
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(&listen).await?;
                writeln!(err, "listening on {}", listener.local_addr()?)?;
                service::server::serve(listener, Arc::new(host)).await
            })?;
            Ok(EXIT_OK)
        }
    }
}

fn with_path(p: &Path, e: io::Error) -> io::Error {
    io::Error::new(e.kind(), format!("{}: {e}", p.display()))
}

/// Prints diagnostics; true if any is an error.
fn report_diags(path: &Path, diags: &[crate::lang::ParseDiagnostic], err: &mut dyn Write) -> io::Result<bool> {
    for d in diags {
        writeln!(err, "{}:{d}", path.display())?;
    }
    Ok(diags.iter().any(|d| d.severity == Severity::Error))
}

fn check(paths: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let mut code = EXIT_OK;
    for p in paths {
        let bytes = match std::fs::read(p) {
            Ok(b) => b,
            Err(e) => {
                writeln!(err, "{}: {e}", p.display())?;
                code = EXIT_IO;
                continue;
            }
        };
        let (_, diags) = check_bytes(&bytes);
        if report_diags(p, &diags, err)? {
            code = code.max(EXIT_FINDINGS);
        } else {
            writeln!(out, "{}: ok", p.display())?;
        }
    }
    Ok(code)
}
