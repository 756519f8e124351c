//! Run configuration: defaults, key = value config file, environment, and
//! command-line flags, in ascending precedence.

use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// None means the auto rule `2 * max(m) + 64`, rounded up to 64.
    pub precision_bits: Option<u32>,
    pub epsilon: f64,
    pub band_outer: f64,
    pub gamma_radius: f64,
    pub quad_nodes: usize,
    pub xi_r: f64,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: None,
            epsilon: 0.25,
            band_outer: 1.35,
            gamma_radius: 2.0,
            quad_nodes: 1024,
            xi_r: 6.0,
            output_dir: PathBuf::from("."),
            format: OutputFormat::Csv,
        }
    }
}

/// Flag-level overrides collected by clap; `None` keeps the lower layers.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub epsilon: Option<f64>,
    pub band_outer: Option<f64>,
    pub gamma_radius: Option<f64>,
    pub quad_nodes: Option<usize>,
    pub xi_r: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    /// Defaults, then `LEMNIS_OUTPUT_DIR`, then the config file, then flags.
    pub fn assemble(config_file: Option<&Path>, flags: &Overrides) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        if let Ok(dir) = std::env::var("LEMNIS_OUTPUT_DIR") {
            if !dir.is_empty() {
                cfg.output_dir = PathBuf::from(dir);
            }
        }
        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
            cfg.apply_file(&text)?;
        }
        if let Some(v) = flags.precision_bits {
            cfg.precision_bits = Some(v);
        }
        if let Some(v) = flags.epsilon {
            cfg.epsilon = v;
        }
        if let Some(v) = flags.band_outer {
            cfg.band_outer = v;
        }
        if let Some(v) = flags.gamma_radius {
            cfg.gamma_radius = v;
        }
        if let Some(v) = flags.quad_nodes {
            cfg.quad_nodes = v;
        }
        if let Some(v) = flags.xi_r {
            cfg.xi_r = v;
        }
        if let Some(v) = &flags.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = flags.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("config line {}: expected key = value", lineno + 1));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |e: String| format!("config line {}: {e}", lineno + 1);
            match key {
                "precision_bits" => {
                    self.precision_bits =
                        Some(value.parse().map_err(|e| bad(format!("{e}")))?)
                }
                "epsilon" => self.epsilon = value.parse().map_err(|e| bad(format!("{e}")))?,
                "band_outer" => {
                    self.band_outer = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "gamma_radius" => {
                    self.gamma_radius = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "quad_nodes" => {
                    self.quad_nodes = value.parse().map_err(|e| bad(format!("{e}")))?
                }
                "xi_r" => self.xi_r = value.parse().map_err(|e| bad(format!("{e}")))?,
                "output_dir" => self.output_dir = PathBuf::from(value),
                "format" => self.format = OutputFormat::parse(value).map_err(bad)?,
                other => return Err(format!("config line {}: unknown key '{other}'", lineno + 1)),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(format!("epsilon = {} must lie in (0, 0.5)", self.epsilon));
        }
        if self.band_outer <= 1.0 {
            return Err(format!("band_outer = {} must exceed 1", self.band_outer));
        }
        if self.gamma_radius < 1.5 {
            return Err(format!(
                "gamma_radius = {} must be at least 1.5",
                self.gamma_radius
            ));
        }
        if self.quad_nodes < 64 || !self.quad_nodes.is_multiple_of(2) {
            return Err(format!(
                "quad_nodes = {} must be even and at least 64",
                self.quad_nodes
            ));
        }
        if !(self.xi_r > 0.0 && self.xi_r <= 8.0) {
            return Err(format!(
                "xi_r = {} must lie in (0, 8] (the candidate search is tuned for that range)",
                self.xi_r
            ));
        }
        if let Some(bits) = self.precision_bits {
            if bits < 64 {
                return Err(format!("precision_bits = {bits} must be at least 64"));
            }
        }
        Ok(())
    }

    /// Effective mantissa for work whose largest degree is `max_m`.
    pub fn effective_bits(&self, max_m: usize) -> u32 {
        match self.precision_bits {
            Some(bits) => bits.max(2 * max_m as u32 + 64),
            None => (2 * max_m as u32 + 64).next_multiple_of(64),
        }
    }

    pub fn region(&self) -> lemnis_core::geometry::RegionParams {
        lemnis_core::geometry::RegionParams::new(self.epsilon, self.band_outer)
    }
}
