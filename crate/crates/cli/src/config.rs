//! Run configuration (TOML). Physical quantities carry their unit in the
//! key name. Relative paths are resolved against the config file's directory.
//!
//! ```toml
//! materials_file = "materials.toml"   # optional, defaults to the built-in file
//!
//! [spectrum]
//! kind = "gaussian"            # or "tabulated"
//! center_wavelength_nm = 800.0
//! fwhm_nm = 100.0              # FWHM of the intensity |f|^2
//! # file = "spectrum.txt"      # tabulated: columns detuning [rad/ps], re [, im]
//!
//! [sample]
//! kind = "slab"                # "slab", "taylor" or "none"
//! material = "znse"
//! thickness_mm = 3.0
//! # taylor: c0_rad, c1_ps, c2_ps2, c3_ps3, c4_ps4, c5_ps5 (missing = 0)
//!
//! [setup]
//! tau2_ps = 26.0
//! placement = "mz_arm"         # "hom_arm", "between", "mz_arm"
//! normalization = "baseline_one"   # or "raw"
//!
//! [grid]
//! points = 65536               # optional; default sized to the delay range
//!
//! [scan]
//! tau1_min_ps = -60.0
//! tau1_max_ps = 60.0
//! steps = 1201
//! strategy = "adaptive"        # or "uniform"
//!
//! [output]
//! dir = "out"
//! engine = "analytic"          # "analytic", "oracle" or "both"
//! plot = true
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use disperscan::dispersion::MaterialsDb;
use disperscan::interferogram::{adaptive_delays, uniform_delays};
use disperscan::spectrum::MIN_TABULATED_SAMPLES;
use disperscan::{
    FrequencyGrid, Normalization, Placement, SetupConfig, SharedPhase, SlabSpec,
    SpectralAmplitude, TaylorPhase,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub materials_file: Option<PathBuf>,
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub sample: SampleSection,
    pub setup: SetupSection,
    #[serde(default)]
    pub grid: GridSection,
    pub scan: ScanSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumSection {
    Gaussian {
        center_wavelength_nm: f64,
        fwhm_nm: f64,
    },
    Tabulated {
        center_wavelength_nm: f64,
        file: PathBuf,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSection {
    #[default]
    None,
    Slab {
        material: String,
        thickness_mm: f64,
    },
    Taylor {
        c0_rad: Option<f64>,
        c1_ps: Option<f64>,
        c2_ps2: Option<f64>,
        c3_ps3: Option<f64>,
        c4_ps4: Option<f64>,
        c5_ps5: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupSection {
    pub tau2_ps: f64,
    #[serde(default = "default_placement")]
    pub placement: String,
    #[serde(default = "default_normalization")]
    pub normalization: String,
}

fn default_placement() -> String {
    "mz_arm".into()
}

fn default_normalization() -> String {
    "baseline_one".into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub tau1_min_ps: f64,
    pub tau1_max_ps: f64,
    pub steps: usize,
    #[serde(default = "default_strategy")]
    pub strategy: String,
}

fn default_strategy() -> String {
    "uniform".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_engine")]
    pub engine: String,
    #[serde(default)]
    pub plot: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            engine: default_engine(),
            plot: false,
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("disperscan-out")
}

fn default_engine() -> String {
    "analytic".into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Oracle,
    Both,
}

impl Engine {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "analytic" => Some(Engine::Analytic),
            "oracle" => Some(Engine::Oracle),
            "both" => Some(Engine::Both),
            _ => None,
        }
    }

    pub fn analytic(self) -> bool {
        self != Engine::Oracle
    }

    pub fn oracle(self) -> bool {
        self != Engine::Analytic
    }
}

/// Command-line settings that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub engine: Option<Engine>,
    pub output_dir: Option<PathBuf>,
    pub plot: bool,
    pub materials_file: Option<PathBuf>,
}

/// A validated run, ready to compute.
#[derive(Debug)]
pub struct Plan {
    pub setup: SetupConfig,
    pub taus: Vec<f64>,
    pub engine: Engine,
    pub output_dir: PathBuf,
    pub plot: bool,
    pub materials_origin: String,
    pub warnings: Vec<String>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be positive and finite, got {v}")))
    }
}

fn finite(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(field, format!("must be finite, got {v}")))
    }
}

pub fn load_materials(path: Option<&Path>) -> Result<MaterialsDb, CliError> {
    match path {
        Some(p) => Ok(MaterialsDb::load(p).map_err(|e| match e {
            disperscan::Error::Io { path, source } => CliError::Materials(disperscan::Error::MaterialsFile {
                path: path.display().to_string(),
                message: source.to_string(),
            }),
            other => CliError::Materials(other),
        })?),
        None => Ok(MaterialsDb::builtin()),
    }
}

pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let field = e
            .span()
            .and_then(|span| text.get(..span.start))
            .map(|before| {
                let line = before.lines().count().max(1);
                format!("line {line}")
            })
            .unwrap_or_else(|| "config".into());
        CliError::config(field, message)
    })
}

/// Reads and validates the config file; every check runs before any
/// interferogram is computed.
pub fn plan(config_path: &Path, overrides: &Overrides) -> Result<Plan, CliError> {
    let text = fs::read_to_string(config_path).map_err(|e| CliError::config("--config", format!("{}: {e}", config_path.display())))?;
    let cfg = parse(&text)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    plan_from(cfg, base, overrides)
}

pub fn plan_from(cfg: RunConfig, base: &Path, overrides: &Overrides) -> Result<Plan, CliError> {
    let mut warnings = Vec::new();

    let spectrum = match &cfg.spectrum {
        SpectrumSection::Gaussian {
            center_wavelength_nm,
            fwhm_nm,
        } => {
            let l0 = positive("spectrum.center_wavelength_nm", *center_wavelength_nm)?;
            let dl = positive("spectrum.fwhm_nm", *fwhm_nm)?;
            if dl >= l0 {
                return Err(CliError::config("spectrum.fwhm_nm", "must be smaller than the centre wavelength"));
            }
            SpectralAmplitude::make_gaussian(l0 * 1e-9, dl * 1e-9).map_err(|e| CliError::config("spectrum", e))?
        }
        SpectrumSection::Tabulated {
            center_wavelength_nm,
            file,
        } => {
            let l0 = positive("spectrum.center_wavelength_nm", *center_wavelength_nm)?;
            let w0 = disperscan::units::angular_frequency_from_um(l0 * 1e-3);
            let path = resolve(base, file);
            SpectralAmplitude::load_tabulated(&path, w0).map_err(|e| {
                CliError::config(
                    "spectrum.file",
                    format!("{e} (need >= {MIN_TABULATED_SAMPLES} rows)"),
                )
            })?
        }
    };
    let w0 = spectrum.center_frequency();

    let materials_path = overrides
        .materials_file
        .clone()
        .or_else(|| cfg.materials_file.as_ref().map(|p| resolve(base, p)));
    let db = load_materials(materials_path.as_deref())?;

    let sample: SharedPhase = match &cfg.sample {
        SampleSection::None => Arc::new(TaylorPhase::zero(w0)),
        SampleSection::Slab {
            material,
            thickness_mm,
        } => {
            let m = db.get(material).map_err(CliError::Materials)?;
            if !(thickness_mm.is_finite() && *thickness_mm >= 0.0) {
                return Err(CliError::config("sample.thickness_mm", format!("must be non-negative, got {thickness_mm}")));
            }
            Arc::new(SlabSpec::new(m.model.clone(), thickness_mm * 1e-3).map_err(|e| CliError::config("sample", e))?)
        }
        SampleSection::Taylor {
            c0_rad,
            c1_ps,
            c2_ps2,
            c3_ps3,
            c4_ps4,
            c5_ps5,
        } => {
            let given = [c0_rad, c1_ps, c2_ps2, c3_ps3, c4_ps4, c5_ps5];
            let names = ["c0_rad", "c1_ps", "c2_ps2", "c3_ps3", "c4_ps4", "c5_ps5"];
            let last = given.iter().rposition(|c| c.is_some()).unwrap_or(0);
            let mut coefficients = Vec::with_capacity(last + 1);
            for k in 0..=last {
                coefficients.push(finite(&format!("sample.{}", names[k]), given[k].unwrap_or(0.0))?);
            }
            Arc::new(TaylorPhase::new(w0, coefficients).map_err(|e| CliError::config("sample", e))?)
        }
    };

    let tau2 = finite("setup.tau2_ps", cfg.setup.tau2_ps)?;
    let placement: Placement = cfg
        .setup
        .placement
        .parse()
        .map_err(|e| CliError::config("setup.placement", e))?;
    let normalization: Normalization = cfg
        .setup
        .normalization
        .parse()
        .map_err(|e| CliError::config("setup.normalization", e))?;

    let (t_min, t_max) = (
        finite("scan.tau1_min_ps", cfg.scan.tau1_min_ps)?,
        finite("scan.tau1_max_ps", cfg.scan.tau1_max_ps)?,
    );
    if t_min >= t_max {
        return Err(CliError::config("scan.tau1_max_ps", format!("must exceed tau1_min_ps ({t_min})")));
    }
    if cfg.scan.steps < 2 {
        return Err(CliError::config("scan.steps", format!("must be at least 2, got {}", cfg.scan.steps)));
    }
    let adaptive = match cfg.scan.strategy.as_str() {
        "uniform" => false,
        "adaptive" => true,
        other => {
            return Err(CliError::config("scan.strategy", format!("expected uniform or adaptive, got `{other}`")))
        }
    };

    let engine = match overrides.engine {
        Some(e) => e,
        None => Engine::parse(&cfg.output.engine).ok_or_else(|| {
            CliError::config("output.engine", format!("expected analytic, oracle or both, got `{}`", cfg.output.engine))
        })?,
    };
    if engine.analytic() && placement != Placement::MzArm {
        return Err(CliError::config(
            "output.engine",
            format!(
                "the analytic engine needs placement = mz_arm (got {}); use engine = \"oracle\"",
                placement.as_str()
            ),
        ));
    }

    let setup = match cfg.grid.points {
        Some(points) => {
            if points < 16 {
                return Err(CliError::config("grid.points", format!("must be at least 16, got {points}")));
            }
            let grid = FrequencyGrid::covering(&spectrum, points).map_err(|e| CliError::config("grid.points", e))?;
            let reach = t_min.abs().max(t_max.abs()) + tau2.abs();
            if grid.alias_period() < reach {
                warnings.push(format!(
                    "grid.points = {points} gives an alias period of {:.3} ps, shorter than the {reach:.3} ps \
                     delay range: features will wrap around",
                    grid.alias_period()
                ));
            }
            SetupConfig::new(spectrum, sample, tau2, placement, grid, normalization)
        }
        None => SetupConfig::with_auto_grid(spectrum, sample, tau2, placement, normalization, t_min.abs().max(t_max.abs())),
    }
    .map_err(|e| match e {
        e @ (disperscan::Error::MaterialRange { .. } | disperscan::Error::NumericalFailure(_)) => CliError::from(e),
        other => CliError::config("grid", other),
    })?;

    let taus = if adaptive {
        adaptive_delays(&setup, t_min, t_max, cfg.scan.steps)
    } else {
        uniform_delays(t_min, t_max, cfg.scan.steps)
    }
    .map_err(CliError::from)?;

    let output_dir = overrides
        .output_dir
        .clone()
        .unwrap_or_else(|| resolve(base, &cfg.output.dir));
    check_writable(&output_dir)?;

    warnings.extend(setup.warnings());
    Ok(Plan {
        setup,
        taus,
        engine,
        output_dir,
        plot: cfg.output.plot || overrides.plot,
        materials_origin: db.origin().to_string(),
        warnings,
    })
}

fn check_writable(dir: &Path) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::config("output.dir", format!("{} is not writable: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".disperscan-write-check");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)
}
