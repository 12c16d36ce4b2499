//! Figure-reproduction scenes.
//!
//! Every preset uses a 1000-element, 1 mm-pitch array at exactly 2 mm
//! wavelength with 1 mW per active element, and the receiver at (0, 8) m,
//! unless noted.

use super::config::*;
use crate::array::{ElementPattern, PowerMode};

pub const PRESET_NAMES: &[&str] = &[
    "fig1",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig2d",
    "fig3a",
    "fig3a-inset",
    "fig3b",
    "fig3c",
    "fig3d",
    "fig3e",
    "fig3f",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig4d",
    "fig4e",
    "fig4f",
    "fig4g",
    "fig4h",
    "fig4i",
    "fig5a",
    "fig5b",
    "fig5c",
    "fig5d",
    "fig5e",
    "fig5f",
];

fn base(n_elements: usize, beam: BeamSection) -> SceneConfig {
    SceneConfig {
        carrier: CarrierSection {
            frequency_hz: None,
            wavelength_m: Some(0.002),
        },
        array: ArraySection {
            n_elements,
            spacing_m: 0.001,
            element_power_w: 1e-3,
            element_gain: 1.0,
            pattern: ElementPattern::Omnidirectional,
            power_mode: PowerMode::PerElement,
        },
        beam,
        rx: Some(RxSection { x_m: 0.0, z_m: 8.0 }),
        pls: PlsSection::default(),
        beta_sweep: None,
        los: None,
        grid: None,
        output: OutputSection::default(),
    }
}

fn targeted(beta: f64, x0c: f64) -> BeamSection {
    BeamSection {
        mode: BeamMode::Bending,
        beta: Some(beta),
        x0: None,
        z0: None,
        x0c: Some(x0c),
    }
}

fn broadside() -> BeamSection {
    BeamSection {
        mode: BeamMode::Broadside,
        beta: None,
        x0: None,
        z0: None,
        x0c: None,
    }
}

fn sweep(x0c: f64, step: f64) -> Option<BetaSweepSection> {
    Some(BetaSweepSection {
        x0c,
        beta_min: 0.001,
        beta_max: 0.02,
        beta_step: step,
    })
}

fn with_prefix(mut cfg: SceneConfig, name: &str) -> SceneConfig {
    cfg.output.prefix = Some(name.to_string());
    cfg
}

// Representative curvature drawn in the trajectory panels of each x0C case.
fn fig3(x0c: f64, beta: f64) -> SceneConfig {
    let mut cfg = base(1000, targeted(beta, x0c));
    cfg.beta_sweep = sweep(x0c, 1e-4);
    cfg.pls.snr_db = vec![10.0];
    cfg
}

fn fig4(n_elements: usize, beam: BeamSection) -> SceneConfig {
    let mut cfg = base(n_elements, beam);
    cfg.pls.snr_db = vec![10.0];
    cfg.pls.radii_m = (1..=20).map(|i| i as f64 * 0.1).map(|r| (r * 10.0).round() / 10.0).collect();
    cfg.grid = Some(GridSection {
        x_min: -3.0,
        x_max: 3.0,
        z_min: 0.05,
        z_max: 12.0,
        nx: 601,
        nz: 240,
    });
    cfg
}

fn fig5(x0c: f64, snr_db: f64) -> SceneConfig {
    let mut cfg = base(1000, targeted(0.01, x0c));
    cfg.beta_sweep = sweep(x0c, 5e-4);
    cfg.pls.snr_db = vec![snr_db];
    cfg.pls.radii_m = vec![1.0];
    cfg
}

pub fn preset(name: &str) -> Option<SceneConfig> {
    let cfg = match name {
        "fig1" => {
            let mut cfg = base(
                1000,
                BeamSection {
                    mode: BeamMode::Bending,
                    beta: Some(0.01),
                    x0: Some(-0.08),
                    z0: Some(5.0),
                    x0c: None,
                },
            );
            cfg.rx = None;
            cfg
        }
        "fig2a" | "fig2c" | "fig2d" => {
            let mut cfg = base(1000, targeted(0.005, 0.0));
            cfg.pls.snr_db = vec![10.0, 20.0, 30.0];
            cfg
        }
        "fig2b" => {
            let mut cfg = base(1000, targeted(-0.005, 0.0));
            cfg.pls.snr_db = vec![10.0, 20.0, 30.0];
            cfg
        }
        "fig3a" | "fig3a-inset" | "fig3b" => fig3(0.0, 0.0041),
        "fig3c" | "fig3d" => fig3(0.25, 0.01),
        "fig3e" | "fig3f" => fig3(0.5, 0.015),
        "fig4a" | "fig4b" | "fig4c" => fig4(1000, targeted(0.015, 0.5)),
        "fig4d" | "fig4e" | "fig4f" => fig4(1000, broadside()),
        "fig4g" | "fig4h" | "fig4i" => fig4(32, broadside()),
        "fig5a" => fig5(0.0, 10.0),
        "fig5b" => fig5(0.0, 20.0),
        "fig5c" => fig5(0.25, 10.0),
        "fig5d" => fig5(0.25, 20.0),
        "fig5e" => fig5(0.5, 10.0),
        "fig5f" => fig5(0.5, 20.0),
        _ => return None,
    };
    Some(with_prefix(cfg, name))
}
