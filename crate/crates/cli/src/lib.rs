//! Command-line front end for `restrained-algebra`: JSON formats, subcommands and
//! the self-test.

pub mod checks;
pub mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "restrained", version, about = "Restrained ramification, degenerations and automorphism bounds")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dickson invariants T_0, …, T_{d−1} of GL_d(F_q).
    Dickson {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
    },
    /// ω-classes of d-dimensional F_q-subspaces of F_{q^m}, q = p^s.
    Classify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
    },
    /// Möbius table and ramification filtration of the canonical action.
    CanonicalForm {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: usize,
        /// Degree of the coefficient field over F_q (default d).
        #[arg(long)]
        m: Option<u32>,
        /// Packed element indices θ(e_1),…,θ(e_d).
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<u64>>,
        #[arg(long)]
        precision: Option<i64>,
        /// Include g(x) for every element.
        #[arg(long)]
        series: bool,
    },
    /// Specialization or special fiber of the degeneration family.
    Degenerate {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Packed element indices s_1,…,s_{d−1}.
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<u64>,
        #[arg(long, conflicts_with = "fiber_zero", required_unless_present = "fiber_zero")]
        t: Option<u64>,
        #[arg(long)]
        fiber_zero: bool,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Automorphism bounds for genus g.
    Bounds {
        #[arg(long)]
        g: u64,
        /// Also tabulate genera 2..=G_MAX.
        #[arg(long, value_name = "G_MAX")]
        table: Option<u64>,
        /// Node count for the nodal bound.
        #[arg(long)]
        delta: Option<u64>,
        /// Component genus for the bound through components, with f = Nakajima.
        #[arg(long)]
        g_tilde: Option<u64>,
    },
    /// Riemann–Hurwitz–Zeuthen genus of a cover given as JSON.
    Rhz {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Immobility predicate for a curve descriptor given as JSON.
    Immobile {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Runs acceptance criteria 1–9.
    Selftest,
}

/// A JSON document with the exit status it belongs to. Errors go to stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: Option<Value>,
    pub stderr: Option<Value>,
}

pub fn error_json(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn domain(e: restrained_algebra::Error) -> Outcome {
    Outcome { status: EXIT_DOMAIN, stdout: None, stderr: Some(error_json(e.kind(), &e.to_string())) }
}

pub fn usage(message: &str) -> Outcome {
    Outcome { status: EXIT_USAGE, stdout: None, stderr: Some(error_json("UsageError", message)) }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(&format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(&format!("{}: {e}", path.display())))
}

pub fn run(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Dickson { q, d } => commands::dickson(*q, *d),
        Command::Classify { p, s, d, m } => commands::classify(*p, *s, *d, *m),
        Command::CanonicalForm { n, p, s, d, m, theta, precision, series } => {
            commands::canonical_form(&commands::CanonicalArgs {
                n: *n,
                p: *p,
                s: *s,
                d: *d,
                m: *m,
                theta: theta.clone(),
                precision: *precision,
                series: *series,
            })
        }
        Command::Degenerate { q, n, d, m, s, t, fiber_zero, precision } => {
            commands::degenerate(&commands::DegenerateArgs {
                q: *q,
                n: *n,
                d: *d,
                m: *m,
                s: s.clone(),
                t: *t,
                fiber_zero: *fiber_zero,
                precision: *precision,
            })
        }
        Command::Bounds { g, table, delta, g_tilde } => {
            commands::bounds(&commands::BoundsArgs { g: *g, table: *table, delta: *delta, g_tilde: *g_tilde })
        }
        Command::Rhz { spec } => match read_json(spec) {
            Ok(cover) => commands::rhz(&cover),
            Err(o) => return o,
        },
        Command::Immobile { spec } => match read_json(spec) {
            Ok(curve) => commands::immobile(&curve),
            Err(o) => return o,
        },
        Command::Selftest => {
            let (report, ok) = commands::selftest(cli.seed);
            let status = if ok { EXIT_OK } else { EXIT_SELFTEST };
            return Outcome { status, stdout: Some(report), stderr: None };
        }
    };
    match result {
        Ok(v) => Outcome { status: EXIT_OK, stdout: Some(v), stderr: None },
        Err(e) => domain(e),
    }
}
