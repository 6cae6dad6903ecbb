//! `key = value` configuration files.
//!
//! ```text
//! # defaults for every suite
//! mode_bound = 11/2
//! max_wedge_deg = 8
//! out = reports
//! format = csv
//! jobs = 4
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use sl2crit::harness::CheckSpec;
use sl2crit::HalfInt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(anyhow!("format must be json or csv, got `{other}`")),
        }
    }
}

/// Bounds that override the per-suite defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bounds {
    pub mode_bound: Option<HalfInt>,
    pub max_twice_deg: Option<i64>,
    pub charge_bound: Option<i64>,
    pub max_wedge_deg: Option<u32>,
}

impl Bounds {
    /// `other` wins where both are set.
    pub fn overlay(&self, other: &Bounds) -> Bounds {
        Bounds {
            mode_bound: other.mode_bound.or(self.mode_bound),
            max_twice_deg: other.max_twice_deg.or(self.max_twice_deg),
            charge_bound: other.charge_bound.or(self.charge_bound),
            max_wedge_deg: other.max_wedge_deg.or(self.max_wedge_deg),
        }
    }

    pub fn apply(&self, spec: &mut CheckSpec) {
        if let Some(m) = self.mode_bound {
            spec.mode_bound = m;
        }
        if let Some(d) = self.max_twice_deg {
            spec.max_twice_deg = d;
        }
        if let Some(p) = self.charge_bound {
            spec.charge_bound = p;
        }
        if let Some(w) = self.max_wedge_deg {
            spec.max_wedge_deg = w;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    pub bounds: Bounds,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub jobs: Option<usize>,
}

fn nonneg(key: &str, v: &str) -> Result<i64> {
    let n: i64 = v
        .parse()
        .with_context(|| format!("`{key}` must be an integer"))?;
    if n < 0 {
        bail!("`{key}` must be nonnegative");
    }
    Ok(n)
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}", i + 1);
            match key {
                "mode_bound" => {
                    let m: HalfInt = value
                        .parse()
                        .map_err(|e| anyhow!("{e}"))
                        .with_context(ctx)?;
                    if m.twice() < 0 {
                        bail!("line {}: `mode_bound` must be nonnegative", i + 1);
                    }
                    cfg.bounds.mode_bound = Some(m);
                }
                "max_twice_deg" => {
                    cfg.bounds.max_twice_deg = Some(nonneg(key, value).with_context(ctx)?)
                }
                "charge_bound" => {
                    cfg.bounds.charge_bound = Some(nonneg(key, value).with_context(ctx)?)
                }
                "max_wedge_deg" => {
                    cfg.bounds.max_wedge_deg = Some(nonneg(key, value).with_context(ctx)? as u32)
                }
                "out" => cfg.out = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.parse().with_context(ctx)?),
                "jobs" => cfg.jobs = Some(nonneg(key, value).with_context(ctx)? as usize),
                other => bail!("line {}: unknown key `{other}`", i + 1),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = Config::parse(
            "# comment\nmode_bound = 11/2\nmax_twice_deg=10\ncharge_bound = 2 # trailing\nmax_wedge_deg = 8\nout = r\nformat = csv\njobs = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.bounds.mode_bound, Some(HalfInt::from_twice(11)));
        assert_eq!(cfg.bounds.max_twice_deg, Some(10));
        assert_eq!(cfg.bounds.charge_bound, Some(2));
        assert_eq!(cfg.bounds.max_wedge_deg, Some(8));
        assert_eq!(cfg.out, Some(PathBuf::from("r")));
        assert_eq!(cfg.format, Some(Format::Csv));
        assert_eq!(cfg.jobs, Some(3));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("nonsense").is_err());
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("max_twice_deg = -1").is_err());
        assert!(Config::parse("mode_bound = -3/2").is_err());
        assert!(Config::parse("format = xml").is_err());
    }

    #[test]
    fn overlay_prefers_right() {
        let a = Bounds {
            max_twice_deg: Some(4),
            charge_bound: Some(1),
            ..Bounds::default()
        };
        let b = Bounds {
            max_twice_deg: Some(6),
            ..Bounds::default()
        };
        let c = a.overlay(&b);
        assert_eq!(c.max_twice_deg, Some(6));
        assert_eq!(c.charge_bound, Some(1));
    }
}
