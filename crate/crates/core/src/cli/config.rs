//! JSON scene configuration. Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};

use crate::array::{CarrierConfig, ElementPattern, PowerMode, UlaArray};
use crate::error::Error;
use crate::propagation::{ObservationGrid, Transmitter};
use crate::trajectory::{design_from_rx, BeamSpec, RxLocation, TrajectoryParams};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub carrier: CarrierSection,
    pub array: ArraySection,
    pub beam: BeamSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rx: Option<RxSection>,
    #[serde(default)]
    pub pls: PlsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_sweep: Option<BetaSweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub los: Option<LosSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub output: OutputSection,
}

/// Exactly one of the two must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n_elements: usize,
    pub spacing_m: f64,
    #[serde(default = "default_element_power")]
    pub element_power_w: f64,
    #[serde(default = "default_gain")]
    pub element_gain: f64,
    #[serde(default)]
    pub pattern: ElementPattern,
    #[serde(default)]
    pub power_mode: PowerMode,
}

fn default_element_power() -> f64 {
    1e-3
}

fn default_gain() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamMode {
    Bending,
    Broadside,
}

/// `bending` takes `beta` plus either the vertex (`x0`, `z0`) or the axis
/// crossing `x0c` (designed towards `rx`). `broadside` takes nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    pub mode: BeamMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamChoice {
    Vertex { beta: f64, x0: f64, z0: f64 },
    Targeted { beta: f64, x0c: f64 },
    Broadside,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RxSection {
    pub x_m: f64,
    pub z_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlsSection {
    #[serde(default = "default_snr")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<f64>,
    #[serde(default = "default_radii")]
    pub radii_m: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_snr() -> Vec<f64> {
    vec![10.0]
}

fn default_thresholds() -> Vec<f64> {
    vec![0.5, 0.9, 0.99]
}

fn default_radii() -> Vec<f64> {
    vec![1.0]
}

fn default_samples() -> usize {
    10_000
}

fn default_seed() -> u64 {
    1
}

impl Default for PlsSection {
    fn default() -> Self {
        Self {
            snr_db: default_snr(),
            thresholds: default_thresholds(),
            radii_m: default_radii(),
            samples: default_samples(),
            seed: default_seed(),
        }
    }
}

/// Curvatures `beta_min, beta_min + step, ..., beta_max` for designs that
/// leave the array at `x0c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaSweepSection {
    pub x0c: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_step: f64,
}

/// Eavesdropper ranges along the line of sight. The receiver range is always
/// added to the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LosSection {
    pub z_min: f64,
    pub z_max: f64,
    pub n: usize,
}

impl Default for LosSection {
    fn default() -> Self {
        Self {
            z_min: 0.05,
            z_max: 10.0,
            n: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub nx: usize,
    pub nz: usize,
}

/// Optional file-name prefix for every artifact.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

fn config_err(e: Error) -> CliError {
    CliError::Config(e.to_string())
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn carrier(&self) -> Result<CarrierConfig<f64>, CliError> {
        match (self.carrier.frequency_hz, self.carrier.wavelength_m) {
            (Some(f), None) => CarrierConfig::from_frequency(f).map_err(config_err),
            (None, Some(l)) => CarrierConfig::from_wavelength(l).map_err(config_err),
            _ => Err(CliError::Config(
                "carrier needs exactly one of `frequency_hz` or `wavelength_m`".into(),
            )),
        }
    }

    pub fn array(&self) -> Result<UlaArray<f64>, CliError> {
        let a = &self.array;
        Ok(UlaArray::new(a.n_elements, a.spacing_m)
            .and_then(|u| u.with_element_power(a.element_power_w))
            .and_then(|u| u.with_element_gain(a.element_gain))
            .map_err(config_err)?
            .with_pattern(a.pattern))
    }

    pub fn transmitter(&self) -> Result<Transmitter<f64>, CliError> {
        Ok(Transmitter::new(self.carrier()?, self.array()?, self.array.power_mode))
    }

    pub fn rx(&self) -> Result<Option<RxLocation<f64>>, CliError> {
        self.rx
            .map(|r| RxLocation::new(r.x_m, r.z_m).map_err(config_err))
            .transpose()
    }

    pub fn require_rx(&self, command: &str) -> Result<RxLocation<f64>, CliError> {
        self.rx()?
            .ok_or_else(|| CliError::Config(format!("`{command}` needs an `rx` section")))
    }

    pub fn beam_choice(&self) -> Result<BeamChoice, CliError> {
        let b = &self.beam;
        match b.mode {
            BeamMode::Broadside => {
                if b.beta.is_some() || b.x0.is_some() || b.z0.is_some() || b.x0c.is_some() {
                    return Err(CliError::Config("broadside beam takes no parameters".into()));
                }
                Ok(BeamChoice::Broadside)
            }
            BeamMode::Bending => {
                let beta = b
                    .beta
                    .ok_or_else(|| CliError::Config("bending beam needs `beta`".into()))?;
                match (b.x0, b.z0, b.x0c) {
                    (Some(x0), Some(z0), None) => Ok(BeamChoice::Vertex { beta, x0, z0 }),
                    (None, None, Some(x0c)) => Ok(BeamChoice::Targeted { beta, x0c }),
                    _ => Err(CliError::Config(
                        "bending beam needs either (`x0`, `z0`) or `x0c`, not both".into(),
                    )),
                }
            }
        }
    }

    /// Resolves the beam, running the rx-targeted design when needed.
    pub fn beam_spec(&self) -> Result<BeamSpec<f64>, CliError> {
        match self.beam_choice()? {
            BeamChoice::Broadside => Ok(BeamSpec::Broadside),
            BeamChoice::Vertex { beta, x0, z0 } => Ok(BeamSpec::Bending(
                TrajectoryParams::new(beta, x0, z0).map_err(config_err)?,
            )),
            BeamChoice::Targeted { beta, x0c } => {
                let rx = self.require_rx("rx-targeted design")?;
                Ok(BeamSpec::Bending(design_from_rx(rx, beta, x0c)?))
            }
        }
    }

    pub fn grid(&self) -> Result<ObservationGrid<f64>, CliError> {
        match self.grid {
            None => Ok(ObservationGrid::default_grid()),
            Some(g) => ObservationGrid::new(g.x_min, g.x_max, g.z_min, g.z_max, g.nx, g.nz).map_err(config_err),
        }
    }

    /// LoS ranges, sorted, always containing the receiver range.
    pub fn los_samples(&self, rx: RxLocation<f64>) -> Result<Vec<f64>, CliError> {
        let los = self.los.unwrap_or_default();
        if !(los.z_min > 0.0 && los.z_min < los.z_max && los.n >= 2) {
            return Err(CliError::Config("los needs 0 < z_min < z_max and n >= 2".into()));
        }
        let mut zs: Vec<f64> = (0..los.n)
            .map(|i| los.z_min + (los.z_max - los.z_min) * i as f64 / (los.n - 1) as f64)
            .collect();
        if !zs.contains(&rx.z) {
            zs.push(rx.z);
        }
        zs.sort_by(f64::total_cmp);
        Ok(zs)
    }

    pub fn betas(&self) -> Result<Option<(f64, Vec<f64>)>, CliError> {
        let Some(s) = self.beta_sweep else {
            return Ok(None);
        };
        if !(s.beta_step > 0.0 && s.beta_min <= s.beta_max && s.x0c.is_finite()) {
            return Err(CliError::Config(
                "beta_sweep needs beta_step > 0, beta_min <= beta_max and a finite x0c".into(),
            ));
        }
        let n = ((s.beta_max - s.beta_min) / s.beta_step + 1e-9).floor() as usize + 1;
        // rounded to 12 decimals so 0.001 + 31 * 1e-4 prints as 0.0041
        let betas = (0..n)
            .map(|i| ((s.beta_min + s.beta_step * i as f64) * 1e12).round() / 1e12)
            .collect();
        Ok(Some((s.x0c, betas)))
    }

    pub fn validate_pls(&self) -> Result<(), CliError> {
        let p = &self.pls;
        if p.snr_db.is_empty() || p.snr_db.iter().any(|s| !s.is_finite()) {
            return Err(CliError::Config("pls.snr_db needs at least one finite value".into()));
        }
        if p.thresholds.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(CliError::Config("pls.thresholds must be finite and >= 0".into()));
        }
        if p.radii_m.is_empty() || p.radii_m.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(CliError::Config("pls.radii_m needs positive radii".into()));
        }
        if p.samples == 0 {
            return Err(CliError::Config("pls.samples must be >= 1".into()));
        }
        Ok(())
    }

    pub fn file_name(&self, base: &str) -> String {
        match &self.output.prefix {
            Some(p) if !p.is_empty() => format!("{p}_{base}"),
            _ => base.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "carrier": {"wavelength_m": 0.002},
        "array": {"n_elements": 1000, "spacing_m": 0.001},
        "beam": {"mode": "bending", "beta": 0.005, "x0c": 0.0},
        "rx": {"x_m": 0.0, "z_m": 8.0}
    }"#;

    #[test]
    fn minimal_config_resolves() {
        let cfg = SceneConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.pls, PlsSection::default());
        let beam = cfg.beam_spec().unwrap();
        let p = beam.trajectory().unwrap();
        assert!((p.z0() - 4.0).abs() < 1e-12);
        assert_eq!(cfg.array().unwrap().element_power_w(), 1e-3);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = MINIMAL.replace("\"spacing_m\"", "\"spacing_mm\": 1, \"spacing_m\"");
        assert!(matches!(SceneConfig::from_json(&text), Err(CliError::Config(_))));
        let text = MINIMAL.replace("\"x0c\"", "\"xoc\"");
        assert!(SceneConfig::from_json(&text).is_err());
    }

    #[test]
    fn beam_modes_are_exclusive() {
        let both = MINIMAL.replace("\"x0c\": 0.0", "\"x0c\": 0.0, \"x0\": 1.0, \"z0\": 2.0");
        assert!(SceneConfig::from_json(&both).unwrap().beam_choice().is_err());
        let broad = MINIMAL.replace("\"mode\": \"bending\"", "\"mode\": \"broadside\"");
        assert!(SceneConfig::from_json(&broad).unwrap().beam_choice().is_err());
    }

    #[test]
    fn carrier_needs_exactly_one_quantity() {
        let both = MINIMAL.replace("{\"wavelength_m\": 0.002}", "{\"wavelength_m\": 0.002, \"frequency_hz\": 1.5e11}");
        assert!(SceneConfig::from_json(&both).unwrap().carrier().is_err());
    }

    #[test]
    fn beta_grid_and_los_samples() {
        let mut cfg = SceneConfig::from_json(MINIMAL).unwrap();
        cfg.beta_sweep = Some(BetaSweepSection {
            x0c: 0.0,
            beta_min: 0.001,
            beta_max: 0.02,
            beta_step: 1e-4,
        });
        let (_, betas) = cfg.betas().unwrap().unwrap();
        assert_eq!(betas.len(), 191);
        assert_eq!(betas[31], 0.0041);
        assert_eq!(*betas.last().unwrap(), 0.02);

        let zs = cfg.los_samples(cfg.rx().unwrap().unwrap()).unwrap();
        assert!(zs.contains(&8.0));
        assert!(zs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = SceneConfig::from_json(MINIMAL).unwrap();
        assert_eq!(SceneConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}
