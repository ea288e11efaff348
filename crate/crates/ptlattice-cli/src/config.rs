//! Run configuration: optional settings from a file and from flags, merged
//! and resolved into a validated [`RunConfig`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ptlattice::{Axis, Direction, ModelParams};

use crate::table::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
        })
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| format!("unknown figure `{s}`, expected fig3 to fig8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Sweep,
    Eps,
    Bound,
    Scatter,
    Perfect,
    PtNorm,
    PtCurrent,
    Jost,
    Figure(FigureId),
}

/// Every key is optional so that file and flag layers can be merged.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub eps0: Option<f64>,
    pub eps1: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<f64>,
    pub direction: Option<Direction>,
    pub axis: Option<Axis>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub n: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

const KNOWN_KEYS: [&str; 11] = [
    "eps0", "eps1", "gamma", "k", "direction", "axis", "min", "max", "n", "format", "out",
];

impl Settings {
    /// Keys from `top` win over keys from `self`.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            eps0: top.eps0.or(self.eps0),
            eps1: top.eps1.or(self.eps1),
            gamma: top.gamma.or(self.gamma),
            k: top.k.or(self.k),
            direction: top.direction.or(self.direction),
            axis: top.axis.or(self.axis),
            min: top.min.or(self.min),
            max: top.max.or(self.max),
            n: top.n.or(self.n),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Settings, CliError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Usage(e.to_string()))?;
        if let Some(key) = table.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown config key `{key}`")));
        }
        let number = |key: &str| -> Result<Option<f64>, CliError> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::Float(v)) => Ok(Some(*v)),
                Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
                Some(other) => Err(CliError::Usage(format!("`{key}` must be a number, got {other}"))),
            }
        };
        let text_value = |key: &str| -> Result<Option<&str>, CliError> {
            match table.get(key) {
                None => Ok(None),
                Some(toml::Value::String(s)) => Ok(Some(s.as_str())),
                Some(other) => Err(CliError::Usage(format!("`{key}` must be a string, got {other}"))),
            }
        };
        let parsed = |key: &str| -> Result<Option<String>, CliError> { Ok(text_value(key)?.map(str::to_owned)) };
        let n = match table.get("n") {
            None => None,
            Some(toml::Value::Integer(v)) => Some(
                usize::try_from(*v).map_err(|_| CliError::Usage(format!("`n` must be non-negative, got {v}")))?,
            ),
            Some(other) => return Err(CliError::Usage(format!("`n` must be an integer, got {other}"))),
        };
        Ok(Settings {
            eps0: number("eps0")?,
            eps1: number("eps1")?,
            gamma: number("gamma")?,
            k: number("k")?,
            direction: parsed("direction")?.map(|s| s.parse()).transpose().map_err(CliError::Usage)?,
            axis: parsed("axis")?.map(|s| s.parse()).transpose().map_err(CliError::Usage)?,
            min: number("min")?,
            max: number("max")?,
            n,
            format: parsed("format")?.map(|s| s.parse()).transpose().map_err(CliError::Usage)?,
            out: text_value("out")?.map(PathBuf::from),
        })
    }

    pub fn from_toml_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Settings::from_toml_str(&text)
    }
}

/// Sampling of one parameter axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(axis: Axis, min: f64, max: f64, n: usize) -> Result<Self, CliError> {
        if n == 0 {
            return Err(CliError::Usage("grid needs n >= 1".into()));
        }
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(CliError::Usage(format!("grid needs finite min <= max, got [{min}, {max}]")));
        }
        Ok(GridSpec { axis, min, max, n })
    }

    /// `n` evenly spaced values with both ends included; `[min]` for `n = 1`.
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.n)
    }
}

pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { max } else { min + step * i as f64 })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub k: Option<f64>,
    pub direction: Direction,
    pub grid: GridSpec,
    /// Whether any grid key was given explicitly.
    pub grid_requested: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Per-command grid used when the caller does not give one.
fn default_grid(command: Command) -> (Axis, f64, f64, usize) {
    use std::f64::consts::PI;
    match command {
        Command::Eps => (Axis::Gamma, 0.0, 3.0, 600),
        Command::Scatter => (Axis::Gamma, -PI, PI, 201),
        _ => (Axis::Gamma, 0.0, 3.0, 301),
    }
}

impl RunConfig {
    pub fn resolve(command: Command, settings: Settings) -> Result<Self, CliError> {
        let params = ModelParams::new(
            settings.eps0.unwrap_or(0.0),
            settings.eps1.unwrap_or(0.0),
            settings.gamma.unwrap_or(0.0),
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        let (axis, min, max, n) = default_grid(command);
        let grid_requested = settings.axis.is_some()
            || settings.min.is_some()
            || settings.max.is_some()
            || settings.n.is_some();
        let grid = GridSpec::new(
            settings.axis.unwrap_or(axis),
            settings.min.unwrap_or(min),
            settings.max.unwrap_or(max),
            settings.n.unwrap_or(n),
        )?;
        if let Some(k) = settings.k {
            if !k.is_finite() {
                return Err(CliError::Usage(format!("k must be finite, got {k}")));
            }
        }
        Ok(RunConfig {
            command,
            params,
            k: settings.k,
            direction: settings.direction.unwrap_or(Direction::LeftToRight),
            grid,
            grid_requested,
            format: settings.format.unwrap_or_default(),
            out: settings.out,
        })
    }
}
