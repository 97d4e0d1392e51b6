use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_list, parse_matrix, parse_range, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "helicoid", version, about = "Generating curves of helicoidal surfaces")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Rotating soliton curve from the start point (0, A).
    Rotating,
    /// Minimal surface curve at distance A from the axis.
    Minimal,
    /// Constant mean curvature curve from an amplitude R or a ratio p/q.
    Cmc,
    /// Closed constant mean curvature curve with rotation number p and q-fold symmetry.
    Classify,
    /// Convergence of rotating curves to the circle of radius A as h -> 0.
    Converge,
    /// Split a motion (b, A, c) into a translation w and a reduced motion.
    Reduce,
    /// Surface mesh of a family curve with a discrete mean curvature check.
    Mesh,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rotating => "rotating",
            Command::Minimal => "minimal",
            Command::Cmc => "cmc",
            Command::Classify => "classify",
            Command::Converge => "converge",
            Command::Reduce => "reduce",
            Command::Mesh => "mesh",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Settings file of `key = value` lines; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Pitch h.
    #[arg(long, global = true, conflicts_with = "mu")]
    pub h: Option<f64>,
    /// Inverse pitch 1/h; 0 means h = infinity.
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    #[arg(long = "A", global = true, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "R", global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true)]
    pub q: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    /// Arc-length window `lo,hi`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = range_arg)]
    pub s_range: Option<(f64, f64)>,
    /// Sweep window `lo,hi` for meshes (default 0,4π).
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = range_arg)]
    pub t_range: Option<(f64, f64)>,
    /// Sweep samples for meshes.
    #[arg(long, global = true)]
    pub n_t: Option<usize>,
    /// Curve samples written to files.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Number of excursions of a constant mean curvature curve.
    #[arg(long, global = true)]
    pub excursions: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Dilation rate of a motion.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Skew matrix, rows separated by `;`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = matrix_arg)]
    pub matrix: Option<String>,
    /// Translation velocity `x,y,z`.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = list_arg)]
    pub c: Option<String>,
    /// Pitches for `converge`.
    #[arg(long, global = true, value_parser = list_arg)]
    pub h_list: Option<String>,
    /// Curve family for `mesh`: rotating, minimal or cmc.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Scale plotted curves to outer radius 1.
    #[arg(long, global = true)]
    pub normalize: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = format_arg)]
    pub format: Option<Format>,
}

fn range_arg(s: &str) -> Result<(f64, f64), String> {
    parse_range(s).map_err(|e| e.to_string())
}

// List-valued flags are validated here and kept as text, since clap reads
// `Vec` fields as repeated values.
fn list_arg(s: &str) -> Result<String, String> {
    parse_list(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

fn matrix_arg(s: &str) -> Result<String, String> {
    parse_matrix(s).map(|_| s.to_string()).map_err(|e| e.to_string())
}

fn format_arg(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: anyhow::Error| e.to_string())
}

impl Options {
    /// Settings given on the command line.
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            family: self.family.clone(),
            h: self.h,
            mu: self.mu,
            a: self.a,
            r: self.r,
            p: self.p,
            q: self.q,
            theta0: self.theta0,
            s_range: self.s_range,
            t_range: self.t_range,
            n_t: self.n_t,
            samples: self.samples,
            excursions: self.excursions,
            tol: self.tol,
            b: self.b,
            matrix: self.matrix.as_deref().map(|m| parse_matrix(m).expect("validated by clap")),
            c: self.c.as_deref().map(|c| parse_list(c).expect("validated by clap")),
            h_list: self.h_list.as_deref().map(|h| parse_list(h).expect("validated by clap")),
            normalize: self.normalize.then_some(true),
            out: self.out.clone(),
            format: self.format,
        }
    }
}
