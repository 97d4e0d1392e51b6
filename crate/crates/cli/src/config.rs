//! Run configuration: plain `key = value` lines, `#` starts a comment.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Svg,
    Obj,
    Csv,
    Json,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Obj => "obj",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "svg" => Ok(Format::Svg),
            "obj" => Ok(Format::Obj),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {:?} (expected svg, obj, csv or json)", other),
        }
    }
}

/// Every setting a run can take. Unset fields fall back to per-command
/// defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub family: Option<String>,
    pub h: Option<f64>,
    pub mu: Option<f64>,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub theta0: Option<f64>,
    pub s_range: Option<(f64, f64)>,
    pub t_range: Option<(f64, f64)>,
    pub n_t: Option<usize>,
    pub samples: Option<usize>,
    pub excursions: Option<usize>,
    pub tol: Option<f64>,
    pub b: Option<f64>,
    pub matrix: Option<Vec<Vec<f64>>>,
    pub c: Option<Vec<f64>>,
    pub h_list: Option<Vec<f64>>,
    pub normalize: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| anyhow!("not a number: {:?}", t.trim())))
        .collect()
}

pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    match parse_list(s)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => bail!("expected two comma-separated numbers, got {:?}", s),
    }
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';').map(parse_list).collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| anyhow!("line {}: {}", i + 1, e))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| v.parse::<f64>().map_err(|_| anyhow!("{}: not a number: {:?}", key, v));
        let int = |v: &str| v.parse::<u64>().map_err(|_| anyhow!("{}: not an integer: {:?}", key, v));
        match key {
            "family" => self.family = Some(value.to_string()),
            "h" => self.h = Some(num(value)?),
            "mu" => self.mu = Some(num(value)?),
            "A" => self.a = Some(num(value)?),
            "R" => self.r = Some(num(value)?),
            "p" => self.p = Some(int(value)?),
            "q" => self.q = Some(int(value)?),
            "theta0" => self.theta0 = Some(num(value)?),
            "s_range" => self.s_range = Some(parse_range(value)?),
            "t_range" => self.t_range = Some(parse_range(value)?),
            "n_t" => self.n_t = Some(int(value)? as usize),
            "samples" => self.samples = Some(int(value)? as usize),
            "excursions" => self.excursions = Some(int(value)? as usize),
            "tol" => self.tol = Some(num(value)?),
            "b" => self.b = Some(num(value)?),
            "matrix" => self.matrix = Some(parse_matrix(value)?),
            "c" => self.c = Some(parse_list(value)?),
            "h_list" => self.h_list = Some(parse_list(value)?),
            "normalize" => {
                self.normalize = Some(
                    value
                        .parse::<bool>()
                        .map_err(|_| anyhow!("normalize: expected true or false"))?,
                )
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            other => bail!("unknown key {:?}", other),
        }
        Ok(())
    }

    /// Text that [`RunConfig::parse`] maps back to `self`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{} = {}", k, v);
        };
        if let Some(v) = &self.family {
            put("family", v.clone());
        }
        let scalars = [
            ("h", self.h),
            ("mu", self.mu),
            ("A", self.a),
            ("R", self.r),
        ];
        for (k, v) in scalars {
            if let Some(v) = v {
                put(k, v.to_string());
            }
        }
        if let Some(v) = self.p {
            put("p", v.to_string());
        }
        if let Some(v) = self.q {
            put("q", v.to_string());
        }
        if let Some(v) = self.theta0 {
            put("theta0", v.to_string());
        }
        if let Some((a, b)) = self.s_range {
            put("s_range", join(&[a, b]));
        }
        if let Some((a, b)) = self.t_range {
            put("t_range", join(&[a, b]));
        }
        for (k, v) in [("n_t", self.n_t), ("samples", self.samples), ("excursions", self.excursions)] {
            if let Some(v) = v {
                put(k, v.to_string());
            }
        }
        if let Some(v) = self.tol {
            put("tol", v.to_string());
        }
        if let Some(v) = self.b {
            put("b", v.to_string());
        }
        if let Some(m) = &self.matrix {
            put("matrix", m.iter().map(|r| join(r)).collect::<Vec<_>>().join(";"));
        }
        if let Some(v) = &self.c {
            put("c", join(v));
        }
        if let Some(v) = &self.h_list {
            put("h_list", join(v));
        }
        if let Some(v) = self.normalize {
            put("normalize", v.to_string());
        }
        if let Some(v) = &self.out {
            put("out", v.display().to_string());
        }
        if let Some(v) = self.format {
            put("format", v.name().to_string());
        }
        out
    }

    /// Fields set in `other` replace those in `self`.
    pub fn merge(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(family, h, mu, a, r, p, q, theta0, s_range, t_range, n_t, samples, excursions, tol, b, matrix, c, h_list, normalize, out, format);
        // A pitch given one way overrides the other form from the file.
        if other.h.is_some() && other.mu.is_none() {
            self.mu = None;
        }
        if other.mu.is_some() && other.h.is_none() {
            self.h = None;
        }
        self
    }
}
