use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::manifolds::{Cutoff, EigenBasis, ManifoldKind, ManifoldModel};
use crate::operators::{KnOptions, Quantization};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectra,
    Isometry,
    Bergman,
    TailDefect,
    HilbApprox,
    MetNorm,
    Szego,
    SphereBand,
    SphereCumulative,
    Takahashi,
    ListPresets,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Spectra,
        Command::Isometry,
        Command::Bergman,
        Command::TailDefect,
        Command::HilbApprox,
        Command::MetNorm,
        Command::Szego,
        Command::SphereBand,
        Command::SphereCumulative,
        Command::Takahashi,
        Command::ListPresets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectra => "spectra",
            Command::Isometry => "isometry",
            Command::Bergman => "bergman",
            Command::TailDefect => "tail-defect",
            Command::HilbApprox => "hilb-approx",
            Command::MetNorm => "met-norm",
            Command::Szego => "szego",
            Command::SphereBand => "sphere-band",
            Command::SphereCumulative => "sphere-cumulative",
            Command::Takahashi => "takahashi",
            Command::ListPresets => "list-presets",
        }
    }

    fn sphere_only(self) -> bool {
        matches!(self, Command::SphereBand | Command::SphereCumulative | Command::Takahashi)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown command '{s}'")))
    }
}

/// Spectral sweep: level indices (`--n`) or `μ²` cutoffs (`--mu2`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sweep {
    Levels(Vec<usize>),
    MuSq(Vec<u64>),
}

impl Sweep {
    pub fn cutoffs(&self) -> Vec<Cutoff> {
        match self {
            Sweep::Levels(v) => v.iter().map(|&l| Cutoff::Level(l)).collect(),
            Sweep::MuSq(v) => v.iter().map(|&m| Cutoff::MuSq(m)).collect(),
        }
    }

    /// Name of the first CSV column.
    pub fn key(&self) -> &'static str {
        match self {
            Sweep::Levels(_) => "N",
            Sweep::MuSq(_) => "mu2",
        }
    }

    /// Level indices of the sweep on `model`.
    pub fn levels(&self, model: ManifoldModel) -> Vec<usize> {
        self.cutoffs().into_iter().map(|c| EigenBasis::with_cutoff(model, c).top_level().index).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: ManifoldModel,
    pub sweep: Sweep,
    pub grid_res: Option<usize>,
    pub fiber_res: usize,
    pub t_res: usize,
    pub metric: Option<String>,
    pub gdot: Option<String>,
    pub symbol: Option<String>,
    pub function: Option<String>,
    pub k: i64,
    pub quantization: Quantization,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub check: bool,
    pub tol: Option<f64>,
}

/// Keys accepted in config files and as `--key` flags.
pub const KEYS: &[&str] = &[
    "model",
    "n",
    "mu2",
    "grid-res",
    "fiber-res",
    "t-res",
    "metric",
    "gdot",
    "symbol",
    "function",
    "k",
    "quantization",
    "output",
    "threads",
    "check",
    "tol",
];

pub const MIN_GRID_RES: usize = 2;
pub const MIN_FIBER_RES: usize = 16;

/// Parses a `key = value` file; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("config line {}: expected 'key = value'", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) && k != "command" {
            return Err(Error::Input(format!("config line {}: unknown key '{k}'", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn parse_list<T: FromStr>(s: &str, key: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|_| Error::Input(format!("bad value '{v}' for --{key}"))))
        .collect()
}

fn parse_one<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.trim().parse::<T>().map_err(|_| Error::Input(format!("bad value '{v}' for --{key}"))))
        .transpose()
}

fn default_sweep(command: Command, kind: ManifoldKind) -> Sweep {
    use Command::*;
    use ManifoldKind::*;
    let levels = |v: &[usize]| Sweep::Levels(v.to_vec());
    let mu2 = |v: &[u64]| Sweep::MuSq(v.to_vec());
    match (command, kind) {
        (Spectra, Torus2) => mu2(&[5, 100]),
        (Spectra, _) => levels(&[1, 2, 5, 10, 20, 50]),
        (Isometry, Circle) => levels(&[16, 32, 64, 128]),
        (Isometry, Torus2) => Sweep::MuSq((100..=400).step_by(10).collect()),
        (Isometry, Sphere2) => levels(&[10, 15, 20, 25, 30]),
        (Bergman | HilbApprox, Circle) => levels(&[24, 48, 64, 96]),
        (Bergman | HilbApprox | MetNorm | Szego, Torus2) => mu2(&[100, 225, 400]),
        (Bergman | HilbApprox, Sphere2) => levels(&[8, 16, 24]),
        (TailDefect, Circle) => levels(&[8, 16, 32, 64]),
        (TailDefect, Torus2) => mu2(&[9, 36, 144, 400]),
        (TailDefect, Sphere2) => levels(&[4, 8, 12, 16]),
        (MetNorm, _) => levels(&[32, 64, 96]),
        (Szego, _) => levels(&[32, 64, 128]),
        (SphereBand | SphereCumulative, _) => levels(&[10, 20, 40]),
        (Takahashi, _) => Sweep::Levels((1..=10).collect()),
        (ListPresets, _) => levels(&[]),
    }
}

impl ExperimentConfig {
    /// Builds a config from merged `key → value` settings (flags already
    /// layered over the file).
    pub fn from_map(command: Command, map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Input(format!("unknown setting '{k}'")));
        }
        let model = match map.get("model") {
            Some(m) => ManifoldModel::new(m.parse()?),
            None if command.sphere_only() => ManifoldModel::SPHERE2,
            None if command == Command::ListPresets => ManifoldModel::CIRCLE,
            None => return Err(Error::Input(format!("{command} needs --model"))),
        };
        if command.sphere_only() && model.kind() != ManifoldKind::Sphere2 {
            return Err(Error::Unsupported(format!("{command} runs on sphere2 only, not {}", model.kind())));
        }
        let sweep = match (map.get("n"), map.get("mu2")) {
            (Some(_), Some(_)) => return Err(Error::Input("give --n or --mu2, not both".into())),
            (Some(n), None) => Sweep::Levels(parse_list(n, "n")?),
            (None, Some(m)) => Sweep::MuSq(parse_list(m, "mu2")?),
            (None, None) => default_sweep(command, model.kind()),
        };
        let quantization = match map.get("quantization").map(String::as_str) {
            None | Some("left") => Quantization::Left,
            Some("weyl") => Quantization::Weyl,
            Some(q) => return Err(Error::Input(format!("unknown quantization '{q}' (left or weyl)"))),
        };
        let check = match map.get("check").map(String::as_str) {
            None | Some("false") => false,
            Some("true") | Some("") => true,
            Some(v) => return Err(Error::Input(format!("bad value '{v}' for --check"))),
        };
        let cfg = Self {
            command,
            model,
            sweep,
            grid_res: parse_one(map, "grid-res")?,
            fiber_res: parse_one(map, "fiber-res")?.unwrap_or(64),
            t_res: parse_one(map, "t-res")?.unwrap_or(128),
            metric: map.get("metric").cloned(),
            gdot: map.get("gdot").cloned(),
            symbol: map.get("symbol").cloned(),
            function: map.get("function").cloned(),
            k: parse_one(map, "k")?.unwrap_or(0),
            quantization,
            output: map.get("output").map(PathBuf::from),
            threads: parse_one(map, "threads")?,
            check,
            tol: parse_one(map, "tol")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.command == Command::ListPresets {
            return Ok(());
        }
        if let Some(r) = self.grid_res {
            if r < MIN_GRID_RES {
                return Err(Error::Input(format!("--grid-res must be ≥ {MIN_GRID_RES}")));
            }
        }
        if self.fiber_res < MIN_FIBER_RES {
            return Err(Error::Input(format!("--fiber-res must be ≥ {MIN_FIBER_RES}")));
        }
        if self.t_res < crate::sphereband::MIN_T_RES {
            return Err(Error::Input(format!("--t-res must be ≥ {}", crate::sphereband::MIN_T_RES)));
        }
        if self.threads == Some(0) {
            return Err(Error::Input("--threads must be ≥ 1".into()));
        }
        let levels = self.sweep.levels(self.model);
        if levels.is_empty() {
            return Err(Error::Input("empty sweep".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("sweep must be strictly increasing in spectral level, got levels {levels:?}")));
        }
        Ok(())
    }

    pub fn kn_options(&self) -> KnOptions {
        KnOptions { quantization: self.quantization, ..KnOptions::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn file_parsing() {
        let m = parse_config_file("# sweep\nmodel = circle\nn = 8, 16\ngrid_res = 12  # comment\n").unwrap();
        assert_eq!(m["model"], "circle");
        assert_eq!(m["grid-res"], "12");
        let cfg = ExperimentConfig::from_map(Command::Isometry, &m).unwrap();
        assert_eq!(cfg.sweep, Sweep::Levels(vec![8, 16]));
        assert!(parse_config_file("bogus = 1").is_err());
        assert!(parse_config_file("no equals sign").is_err());
    }

    #[test]
    fn sweep_must_increase() {
        let m = map(&[("model", "circle"), ("n", "16,8")]);
        assert!(ExperimentConfig::from_map(Command::Isometry, &m).is_err());
        // 299 and 300 both fall on level μ² = 298
        let m = map(&[("model", "torus2"), ("mu2", "299,300")]);
        assert!(ExperimentConfig::from_map(Command::Isometry, &m).is_err());
    }

    #[test]
    fn sphere_commands_default_model() {
        let cfg = ExperimentConfig::from_map(Command::Takahashi, &map(&[])).unwrap();
        assert_eq!(cfg.model.kind(), ManifoldKind::Sphere2);
        assert!(ExperimentConfig::from_map(Command::Takahashi, &map(&[("model", "circle")])).is_err());
        assert!(ExperimentConfig::from_map(Command::Bergman, &map(&[])).is_err());
    }

    #[test]
    fn resolution_minimums() {
        let m = map(&[("model", "torus2"), ("fiber-res", "8")]);
        assert!(ExperimentConfig::from_map(Command::Bergman, &m).is_err());
    }
}
