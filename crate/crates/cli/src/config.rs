//! TOML run configuration. Every key is optional; command-line flags are
//! merged on top before the configuration is resolved.

use std::path::{Path, PathBuf};

use berry_core::berry::{BerryOptions, BranchSelection};
use berry_core::lattice::{path_catalog, LatticeGeometry, PathSpec};
use berry_core::meanfield::{DecouplingMode, GapSector, ModelParams, ScfOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub path: PathSection,
    #[serde(default)]
    pub scf: ScfSection,
    #[serde(default)]
    pub berry: BerrySection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub t: Option<f64>,
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub g: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub d: Option<f64>,
    pub mode: Option<String>,
    pub hole_spin: Option<String>,
    pub lattice: Option<[usize; 2]>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    pub name: Option<String>,
    pub sites: Option<Vec<[i64; 2]>>,
    pub steps_per_segment: Option<usize>,
    pub profile_points: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScfSection {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub mixing: Option<f64>,
    pub gap_floor: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BerrySection {
    pub selection: Option<String>,
    pub switch_margin: Option<f64>,
    pub min_step_overlap: Option<f64>,
    pub degeneracy_frac: Option<f64>,
    pub gap_sector: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(rename = "U")]
    pub u: Option<Vec<f64>>,
    pub g: Option<Vec<f64>>,
    pub paths: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Usage(format!("unknown format {other:?} (csv or json)"))),
        }
    }
}

/// A named catalog loop or an explicit list of `[ix, iy]` sites.
#[derive(Clone, Debug, PartialEq)]
pub enum PathChoice {
    Named(String),
    Sites { name: String, coords: Vec<[i64; 2]> },
}

impl PathChoice {
    pub fn name(&self) -> &str {
        match self {
            Self::Named(n) => n,
            Self::Sites { name, .. } => name,
        }
    }

    pub fn resolve(&self, geom: &LatticeGeometry, steps: usize) -> Result<PathSpec, CliError> {
        let spec = match self {
            Self::Named(n) => path_catalog(geom, n, steps),
            Self::Sites { name, coords } => PathSpec::from_coords(geom, name.clone(), coords, steps),
        };
        spec.map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Parses `"0,0;1,1;2,0"` into site coordinates.
pub fn parse_sites(text: &str) -> Result<Vec<[i64; 2]>, CliError> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [x, y] => {
                    let x = x.parse::<i64>();
                    let y = y.parse::<i64>();
                    match (x, y) {
                        (Ok(x), Ok(y)) => Ok([x, y]),
                        _ => Err(CliError::Usage(format!("bad site {pair:?}"))),
                    }
                }
                _ => Err(CliError::Usage(format!("bad site {pair:?}, expected ix,iy"))),
            }
        })
        .collect()
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lattice: LatticeGeometry,
    pub model: ModelParams,
    pub path: PathChoice,
    pub steps_per_segment: usize,
    pub profile_points: usize,
    pub berry: BerryOptions,
    pub sweep_u: Vec<f64>,
    pub sweep_g: Vec<f64>,
    pub sweep_paths: Vec<PathChoice>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub workers: usize,
    pub seed: u64,
}

fn parse_enum<T: std::str::FromStr<Err = berry_core::Error>>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(|e: berry_core::Error| CliError::Usage(e.to_string()))
}

impl RunConfig {
    pub fn resolve(cfg: &FileConfig) -> Result<Self, CliError> {
        let m = &cfg.model;
        let [lx, ly] = m.lattice.unwrap_or([4, 4]);
        let lattice = LatticeGeometry::new(lx, ly).map_err(|e| CliError::Usage(e.to_string()))?;
        let sites = lattice.n_sites();
        let half = sites / 2;
        let (n_up, n_down) = match m.hole_spin.as_deref().unwrap_or("up") {
            "up" => (half - 1, half),
            "down" => (half, half - 1),
            other => return Err(CliError::Usage(format!("hole_spin must be up or down, got {other:?}"))),
        };
        let defaults = ModelParams::default();
        let model = ModelParams {
            t: m.t.unwrap_or(defaults.t),
            u: m.u.unwrap_or(defaults.u),
            g: m.g.unwrap_or(defaults.g),
            k: m.k.unwrap_or(defaults.k),
            d: m.d.unwrap_or(defaults.d),
            mode: match &m.mode {
                Some(s) => parse_enum::<DecouplingMode>(s)?,
                None => DecouplingMode::Collinear,
            },
            n_up,
            n_down,
        };
        model.validate(&lattice).map_err(|e| CliError::Usage(e.to_string()))?;

        let p = &cfg.path;
        let path = match (&p.sites, &p.name) {
            (Some(coords), name) => PathChoice::Sites {
                name: name.clone().unwrap_or_else(|| "custom".into()),
                coords: coords.clone(),
            },
            (None, Some(name)) => PathChoice::Named(name.clone()),
            (None, None) => PathChoice::Named("triangle".into()),
        };

        let d = ScfOptions::default();
        let scf = ScfOptions {
            tol: cfg.scf.tol.unwrap_or(d.tol),
            max_iter: cfg.scf.max_iter.unwrap_or(d.max_iter),
            mixing: cfg.scf.mixing.unwrap_or(d.mixing),
            gap_floor: cfg.scf.gap_floor.unwrap_or(d.gap_floor),
        };
        scf.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let b = &cfg.berry;
        let bd = BerryOptions::default();
        let berry = BerryOptions {
            scf,
            selection: match &b.selection {
                Some(s) => parse_enum::<BranchSelection>(s)?,
                None => bd.selection,
            },
            switch_margin: b.switch_margin.unwrap_or(bd.switch_margin),
            min_step_overlap: b.min_step_overlap.unwrap_or(bd.min_step_overlap),
            degeneracy_frac: b.degeneracy_frac.unwrap_or(bd.degeneracy_frac),
            gap_sector: match b.gap_sector.as_deref() {
                None | Some("global") => GapSector::Global,
                Some("up") => GapSector::Up,
                Some("down") => GapSector::Down,
                Some(other) => return Err(CliError::Usage(format!("unknown gap sector {other:?}"))),
            },
        };

        let sweep_paths = match &cfg.sweep.paths {
            Some(names) => names
                .iter()
                .map(|n| {
                    if n == path.name() {
                        path.clone()
                    } else {
                        PathChoice::Named(n.clone())
                    }
                })
                .collect(),
            None => vec![path.clone()],
        };

        let format = match &cfg.output.format {
            Some(f) => f.parse()?,
            None => Format::Csv,
        };
        let workers = cfg
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if workers == 0 {
            return Err(CliError::Usage("workers must be positive".into()));
        }

        Ok(Self {
            lattice,
            model,
            path,
            steps_per_segment: p.steps_per_segment.unwrap_or(33),
            profile_points: p.profile_points.unwrap_or(64),
            berry,
            sweep_u: cfg.sweep.u.clone().unwrap_or_else(|| vec![defaults.u]),
            sweep_g: cfg.sweep.g.clone().unwrap_or_else(|| vec![defaults.g]),
            sweep_paths,
            format,
            output: cfg.output.path.clone(),
            workers,
            seed: cfg.seed.unwrap_or(0),
        })
    }

    /// Canonical text of every setting that can change results. Worker
    /// count and output location are excluded so they never alter the file.
    pub fn canonical(&self) -> String {
        let path_text = |p: &PathChoice| match p {
            PathChoice::Named(n) => n.clone(),
            PathChoice::Sites { name, coords } => format!("{name}:{coords:?}"),
        };
        let m = &self.model;
        let b = &self.berry;
        let value = serde_json::json!({
            "lattice": [self.lattice.lx(), self.lattice.ly()],
            "model": {
                "t": m.t, "U": m.u, "g": m.g, "K": m.k, "d": m.d,
                "mode": format!("{:?}", m.mode), "n_up": m.n_up, "n_down": m.n_down,
            },
            "path": path_text(&self.path),
            "steps_per_segment": self.steps_per_segment,
            "profile_points": self.profile_points,
            "scf": {
                "tol": b.scf.tol, "max_iter": b.scf.max_iter,
                "mixing": b.scf.mixing, "gap_floor": b.scf.gap_floor,
            },
            "berry": {
                "selection": format!("{:?}", b.selection),
                "switch_margin": b.switch_margin,
                "min_step_overlap": b.min_step_overlap,
                "degeneracy_frac": b.degeneracy_frac,
                "gap_sector": format!("{:?}", b.gap_sector),
            },
            "sweep": {
                "U": self.sweep_u, "g": self.sweep_g,
                "paths": self.sweep_paths.iter().map(path_text).collect::<Vec<_>>(),
            },
            "format": format!("{:?}", self.format),
            "seed": self.seed,
        });
        value.to_string()
    }

    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_defaults() {
        let rc = RunConfig::resolve(&FileConfig::default()).unwrap();
        assert_eq!(rc.model, ModelParams::default());
        assert_eq!(rc.steps_per_segment, 33);
        assert_eq!(rc.path, PathChoice::Named("triangle".into()));
        assert_eq!(rc.format, Format::Csv);
    }

    #[test]
    fn parses_full_file() {
        let text = r#"
            workers = 3
            [model]
            U = 0.5
            g = 4.0
            hole_spin = "down"
            [path]
            name = "zigzag"
            sites = [[0, 0], [1, 1], [2, 0]]
            steps_per_segment = 17
            [sweep]
            U = [0.5, 6.0]
            paths = ["zigzag", "square"]
            [output]
            format = "json"
        "#;
        let rc = RunConfig::resolve(&FileConfig::parse(text).unwrap()).unwrap();
        assert_eq!((rc.model.u, rc.model.g), (0.5, 4.0));
        assert_eq!((rc.model.n_up, rc.model.n_down), (8, 7));
        assert_eq!(rc.workers, 3);
        assert_eq!(rc.format, Format::Json);
        assert_eq!(rc.sweep_paths.len(), 2);
        assert!(matches!(&rc.sweep_paths[0], PathChoice::Sites { coords, .. } if coords.len() == 3));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(FileConfig::parse("[model]\nfoo = 1").is_err());
        let bad = FileConfig::parse("[model]\nt = -1.0").unwrap();
        assert!(RunConfig::resolve(&bad).is_err());
        let bad = FileConfig::parse("[model]\nmode = \"spiral\"").unwrap();
        assert!(RunConfig::resolve(&bad).is_err());
    }

    #[test]
    fn hash_ignores_workers_and_output() {
        let a = RunConfig::resolve(&FileConfig::parse("workers = 1").unwrap()).unwrap();
        let b = RunConfig::resolve(&FileConfig::parse("workers = 8\n[output]\npath = \"x.csv\"").unwrap()).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig::resolve(&FileConfig::parse("[model]\nU = 5.0").unwrap()).unwrap();
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn site_lists() {
        assert_eq!(parse_sites("0,0;1,1; 2,0").unwrap(), vec![[0, 0], [1, 1], [2, 0]]);
        assert!(parse_sites("0,0;1").is_err());
        assert!(parse_sites("a,b").is_err());
    }
}
