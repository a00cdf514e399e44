//! Flag parsing, TOML config merging and up-front validation.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use vanseq::algebra::rat::parse_rat;
use vanseq::algebra::Rat;
use vanseq::convex::IntersectionData;
use vanseq::{SectionModel, Valuation};

use crate::CliError;

pub const WORKERS_ENV: &str = "VANSEQ_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Vanishing sequences a_1 <= ... <= a_N per level
    Vanish,
    /// Jumps of t -> dim F^t
    Dims,
    /// a_max/m, a_min/m and Fekete bounds over a level list
    Asym,
    /// Flag-valuation lattice points and their hull
    Okounkov,
    /// Discrete concave transform G_m
    Transform,
    /// KS distance of the scaled sequence to a reference measure
    Equidist,
    /// Restricted volumes along the divisor of ordF / ordflag
    Restvol,
    /// Colength-based volume of a valuation
    Valvol,
    /// Concave transform versus the extremal function of the hull
    Extremal,
    /// Non-conical local body: conical test and extremal values near the apex
    Theoremb,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Vanish => "vanish",
            Command::Dims => "dims",
            Command::Asym => "asym",
            Command::Okounkov => "okounkov",
            Command::Transform => "transform",
            Command::Equidist => "equidist",
            Command::Restvol => "restvol",
            Command::Valvol => "valvol",
            Command::Extremal => "extremal",
            Command::Theoremb => "theoremb",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "vanseq", version, about = "Vanishing sequences, Okounkov bodies and concave transforms")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// p1:<d>, p2:<d> or blp2:<num>/<den>[@<x>,<y>]
    #[arg(long)]
    pub model: Option<String>,
    /// mon:<w>,..@<x>,.., mon-sqrt2@<x>,<y>, ordflag, ordF, ordpoly:<poly>, arc-exp
    #[arg(long)]
    pub val: Option<String>,
    /// A level, a comma list, or an inclusive range a..b
    #[arg(long)]
    pub m: Option<String>,
    /// Comma list of rationals
    #[arg(long)]
    pub t: Option<String>,
    /// Grid resolution (t-grid denominators, conical-test direction grid)
    #[arg(long)]
    pub grid: Option<String>,
    /// Reference measure: auto, simplex[:c0,c1,c2], curve[:d], blowup[:lambda]
    #[arg(long = "ref")]
    pub reference: Option<String>,
    /// Comma list of csv, json, svg
    #[arg(long)]
    pub out: Option<String>,
    /// Write artifacts here instead of stdout
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Bisection tolerance (rational)
    #[arg(long)]
    pub tol: Option<String>,
    /// Intersection numbers L^2, L.Y2, Y2^2, L.Y1, Y1^2, Y1.Y2, cap
    #[arg(long)]
    pub data: Option<String>,
    /// Indices of the approach sequence
    #[arg(long)]
    pub k: Option<String>,
    /// TOML file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Validated run configuration. Spec strings are kept verbatim so artifacts
/// can embed them; the output directory is left out of the embedded copy.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<String>,
    pub val: Option<String>,
    pub m: Vec<u32>,
    pub t: Vec<String>,
    pub grid: Option<u32>,
    #[serde(rename = "ref")]
    pub reference: Option<String>,
    pub out: Vec<Format>,
    pub tol: Option<String>,
    pub data: Option<String>,
    pub k: Vec<i64>,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

/// Parsed objects behind the spec strings.
pub struct Resolved {
    pub model: Option<SectionModel>,
    pub val: Option<Valuation>,
    pub t: Vec<Rat>,
    pub tol: Option<Rat>,
    pub data: IntersectionData,
}

const KEYS: [&str; 11] = ["model", "val", "m", "t", "grid", "ref", "out", "out-dir", "tol", "data", "k"];

fn usage(flag: &str, message: impl Into<String>) -> CliError {
    CliError::Usage { flag: flag.to_string(), message: message.into() }
}

fn toml_to_string(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(i.to_string()),
        toml::Value::Float(f) => Some(f.to_string()),
        toml::Value::Array(a) => a.iter().map(toml_to_string).collect::<Option<Vec<_>>>().map(|v| v.join(",")),
        _ => None,
    }
}

fn load_config(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage("--config", format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e| usage("--config", format!("invalid TOML: {e}")))?;
    for key in table.keys() {
        if !KEYS.contains(&key.replace('_', "-").as_str()) {
            return Err(usage("--config", format!("unknown key {key:?}")));
        }
    }
    Ok(table)
}

pub fn parse_levels(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || usage("--m", format!("expected a level, a comma list or a..b, got {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.contains(&0) {
        return Err(usage("--m", "levels must be positive"));
    }
    Ok(out)
}

fn parse_rats(flag: &str, s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').map(|p| parse_rat(p.trim()).map_err(|e| usage(flag, e.to_string()))).collect()
}

fn default_formats(command: Command) -> Vec<Format> {
    match command {
        Command::Vanish | Command::Dims | Command::Restvol | Command::Valvol => vec![Format::Csv],
        _ => vec![Format::Json],
    }
}

fn needs_val(command: Command) -> bool {
    !matches!(command, Command::Okounkov | Command::Theoremb)
}

fn single_level(command: Command) -> bool {
    matches!(command, Command::Okounkov | Command::Transform | Command::Extremal)
}

impl RunConfig {
    /// Merges flags over the config file and validates everything that can be
    /// checked without computing.
    pub fn from_cli(cli: Cli) -> Result<(Self, Resolved), CliError> {
        let table = match &cli.config {
            Some(p) => load_config(p)?,
            None => toml::Table::new(),
        };
        let pick = |flag: Option<String>, key: &str| -> Result<Option<String>, CliError> {
            if flag.is_some() {
                return Ok(flag);
            }
            let v = table.get(key).or_else(|| table.get(&key.replace('-', "_")));
            v.map(|v| toml_to_string(v).ok_or_else(|| usage("--config", format!("key {key:?} has an unsupported type"))))
                .transpose()
        };
        let command = cli.command;
        let model_s = pick(cli.model, "model")?;
        let val_s = pick(cli.val, "val")?;
        let m_s = pick(cli.m, "m")?;
        let t_s = pick(cli.t, "t")?;
        let grid_s = pick(cli.grid, "grid")?;
        let ref_s = pick(cli.reference, "ref")?;
        let out_s = pick(cli.out, "out")?;
        let out_dir = pick(cli.out_dir.map(|p| p.display().to_string()), "out-dir")?.map(PathBuf::from);
        let tol_s = pick(cli.tol, "tol")?;
        let data_s = pick(cli.data, "data")?;
        let k_s = pick(cli.k, "k")?;

        let model = match &model_s {
            Some(s) => Some(SectionModel::parse(s).map_err(|e| usage("--model", e.to_string()))?),
            None if command == Command::Theoremb || command == Command::Valvol => None,
            None => return Err(usage("--model", format!("required for {}", command.name()))),
        };
        let nvars = model.as_ref().map_or(2, SectionModel::nvars);
        let val = match &val_s {
            Some(s) => {
                let v = Valuation::parse(s, nvars).map_err(|e| usage("--val", e.to_string()))?;
                if let Some(model) = &model {
                    v.check_model(model).map_err(|e| usage("--val", e.to_string()))?;
                }
                Some(v)
            }
            None if needs_val(command) => return Err(usage("--val", format!("required for {}", command.name()))),
            None => None,
        };

        let m = match &m_s {
            Some(s) => parse_levels(s)?,
            None if command == Command::Theoremb => Vec::new(),
            None => return Err(usage("--m", format!("required for {}", command.name()))),
        };
        if single_level(command) && m.len() != 1 {
            return Err(usage("--m", format!("{} expects a single level", command.name())));
        }
        if let Some(model) = &model {
            if command != Command::Valvol {
                for &level in &m {
                    model.check_level(level).map_err(|e| usage("--m", e.to_string()))?;
                }
            }
        }

        let t = match &t_s {
            Some(s) => parse_rats("--t", s)?,
            None if command == Command::Restvol => return Err(usage("--t", "required for restvol")),
            None => Vec::new(),
        };
        if command == Command::Restvol {
            for ti in &t {
                for &level in &m {
                    let lt = ti * Rat::from_integer(level.into());
                    if !lt.is_integer() || lt < Rat::from_integer(0.into()) {
                        return Err(usage("--t", format!("m*t = {lt} must be a nonnegative integer (m = {level})")));
                    }
                }
            }
        }

        let grid = grid_s
            .map(|s| match s.trim().parse::<u32>() {
                Ok(g) if g > 0 => Ok(g),
                _ => Err(usage("--grid", format!("expected a positive integer, got {s:?}"))),
            })
            .transpose()?;

        let out = match &out_s {
            Some(s) => {
                let mut v = s
                    .split(',')
                    .map(|f| match f.trim() {
                        "csv" => Ok(Format::Csv),
                        "json" => Ok(Format::Json),
                        "svg" => Ok(Format::Svg),
                        other => Err(usage("--out", format!("unknown format {other:?} (csv, json, svg)"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                v.sort();
                v.dedup();
                v
            }
            None => default_formats(command),
        };
        if out.contains(&Format::Svg) && !matches!(command, Command::Okounkov | Command::Transform) {
            return Err(usage("--out", format!("svg is only rendered for okounkov and transform, not {}", command.name())));
        }

        let tol = match &tol_s {
            Some(s) => {
                let r = parse_rat(s).map_err(|e| usage("--tol", e.to_string()))?;
                if r <= Rat::from_integer(0.into()) {
                    return Err(usage("--tol", "tolerance must be positive"));
                }
                Some(r)
            }
            None => None,
        };

        let data = match &data_s {
            Some(s) => {
                let v = parse_rats("--data", s)?;
                let [l_sq, l_y2, y2_sq, l_y1, y1_sq, y1_y2, cap]: [Rat; 7] =
                    v.try_into().map_err(|_| usage("--data", "expected 7 rationals"))?;
                let d = IntersectionData { l_sq, l_y2, y2_sq, l_y1, y1_sq, y1_y2, cap };
                d.validate().map_err(|e| usage("--data", e.to_string()))?;
                d
            }
            None => IntersectionData::default(),
        };

        let k = match &k_s {
            Some(s) => s
                .split(',')
                .map(|p| match p.trim().parse::<i64>() {
                    Ok(k) if k > 0 => Ok(k),
                    _ => Err(usage("--k", format!("expected positive integers, got {s:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?,
            None if command == Command::Theoremb => vec![2, 4, 8, 16, 32],
            None => Vec::new(),
        };

        let cfg = RunConfig {
            command,
            model: model_s,
            val: val_s,
            m,
            t: t.iter().map(crate::format::rat_str).collect(),
            grid,
            reference: ref_s,
            out,
            tol: tol.as_ref().map(crate::format::rat_str),
            data: data_s,
            k,
            out_dir,
        };
        Ok((cfg, Resolved { model, val, t, tol, data }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lists() {
        assert_eq!(parse_levels("4").unwrap(), vec![4]);
        assert_eq!(parse_levels("2, 4,8").unwrap(), vec![2, 4, 8]);
        assert_eq!(parse_levels("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_levels("3..=4").unwrap(), vec![3, 4]);
        assert!(parse_levels("0").is_err());
        assert!(parse_levels("5..3").is_err());
        assert!(parse_levels("x").is_err());
    }
}
