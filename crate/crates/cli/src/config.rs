use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use robinstar::secular::RobinTuple;
use robinstar::spectral::SearchRegion;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_band: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_root_tol")]
    pub root_tol: f64,
    #[serde(default = "default_pair_tol")]
    pub pair_tol: f64,
    #[serde(default = "default_spectrum_tol")]
    pub spectrum_tol: f64,
}

fn default_root_tol() -> f64 {
    1e-12
}

fn default_pair_tol() -> f64 {
    robinstar::symmetry::DEFAULT_PAIR_TOL
}

fn default_spectrum_tol() -> f64 {
    robinstar::symmetry::DEFAULT_SPECTRUM_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root_tol: default_root_tol(),
            pair_tol: default_pair_tol(),
            spectrum_tol: default_spectrum_tol(),
        }
    }
}

/// Output file names, relative to the output directory unless absolute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    pub spectrum_csv: String,
    pub manifest_json: String,
    pub symmetry_json: String,
    pub asymptotics_csv: String,
    pub asymptotics_json: String,
    pub verify_json: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            spectrum_csv: "spectrum.csv".into(),
            manifest_json: "manifest.json".into(),
            symmetry_json: "symmetry.json".into(),
            asymptotics_csv: "asymptotics.csv".into(),
            asymptotics_json: "asymptotics.json".into(),
            verify_json: "verify.json".into(),
        }
    }
}

/// A run description. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub h: Vec<[f64; 2]>,
    pub window: Window,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Inclusive range of `n` for the asymptotic comparison.
    #[serde(default)]
    pub n_range: Option<[u32; 2]>,
    /// Draws per randomized suite in `verify`.
    #[serde(default)]
    pub verify_samples: Option<usize>,
    #[serde(default)]
    pub outputs: Outputs,
}

impl RunConfig {
    /// Reads a config, or the `config` member of a run manifest.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        let inner = match value.get("config") {
            Some(c) if value.get("command").is_some() => c.clone(),
            _ => value,
        };
        let cfg: Self = serde_json::from_value(inner)
            .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.n == 0 {
            return bad("N must be at least 1".into());
        }
        if self.h.len() != self.n {
            return bad(format!("N = {} but h has {} entries", self.n, self.h.len()));
        }
        if self.h.iter().flatten().any(|v| !v.is_finite()) {
            return bad("h entries must be finite".into());
        }
        let w = &self.window;
        if ![w.re_min, w.re_max, w.im_band]
            .iter()
            .all(|v| v.is_finite())
        {
            return bad("window bounds must be finite".into());
        }
        if w.re_min < 0.0 || w.re_max < w.re_min || w.im_band < 0.0 {
            return bad(format!(
                "window needs 0 <= re_min <= re_max and im_band >= 0, got re_min = {}, re_max = {}, im_band = {}",
                w.re_min, w.re_max, w.im_band
            ));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("root_tol", t.root_tol),
            ("pair_tol", t.pair_tol),
            ("spectrum_tol", t.spectrum_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some([lo, hi]) = self.n_range {
            if lo == 0 || hi < lo {
                return bad(format!(
                    "n_range needs 1 <= n_min <= n_max, got [{lo}, {hi}]"
                ));
            }
        }
        if self.verify_samples == Some(0) {
            return bad("verify_samples must be positive".into());
        }
        Ok(())
    }

    pub fn robin(&self) -> Result<RobinTuple, CliError> {
        RobinTuple::new(
            self.h
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// The search rectangle, or `None` when the window has no interior.
    pub fn region(&self) -> Option<SearchRegion> {
        let w = &self.window;
        if w.re_max <= w.re_min || w.im_band <= 0.0 {
            return None;
        }
        SearchRegion::window(w.re_min, w.re_max, w.im_band).ok()
    }
}
