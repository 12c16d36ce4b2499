mod common;

use bendbeam::pls::{beta_sweep, coverage_vs_beta, disk_coverage, max_secrecy_rate, secrecy_map};
use bendbeam::trajectory::design_from_rx;
use bendbeam::{BeamSpec, DiskEveModel, ObservationGrid, Point, RxLocation, SecrecyScene};
use common::*;

fn rx() -> RxLocation {
    RxLocation::new(0.0, 8.0).unwrap()
}

fn coverage_curve(x0c: f64) -> (Vec<f64>, Vec<f64>) {
    let betas = beta_range(0.001, 0.02, 1e-3);
    let rows = coverage_vs_beta(&transmitter(1000), rx(), x0c, &betas, 1.0, 2000, 11, &[0.5], &[10.0]).unwrap();
    let probs = rows
        .iter()
        .map(|r| r.outcome.as_ref().map_or(f64::NAN, |c| c[0].probabilities[0]))
        .collect();
    (betas, probs)
}

#[test]
fn off_centre_beams_recover_secrecy_with_curvature() {
    let zs: Vec<f64> = (1..=70).map(|i| i as f64 * 0.1).collect();
    let sweep = beta_sweep(&transmitter(1000), rx(), 0.5, &[0.002, 0.02], &zs, &[10.0]);
    let s_max = max_secrecy_rate(10.0);
    let profiles: Vec<&Vec<f64>> = sweep.rows.iter().map(|r| &r.outcome.as_ref().unwrap().secrecy[0]).collect();
    assert!(profiles[0].iter().any(|&s| s < 0.5 * s_max));
    // mean S over the last metre and a half before the receiver
    let near_rx = |s: &[f64]| {
        let tail: Vec<f64> = zs.iter().zip(s).filter(|(z, _)| **z >= 5.5).map(|(_, v)| *v).collect();
        tail.iter().sum::<f64>() / tail.len() as f64 / s_max
    };
    let (shallow, steep) = (near_rx(profiles[0]), near_rx(profiles[1]));
    assert!(shallow < 0.5, "beta 0.002: {shallow}");
    assert!(steep > 0.8, "beta 0.02: {steep}");
}

#[test]
fn receiver_row_is_zero_for_every_curvature() {
    let betas = beta_range(0.001, 0.02, 1e-3);
    let sweep = beta_sweep(&transmitter(1000), rx(), 0.25, &betas, &[3.0, 8.0], &[10.0, 20.0]);
    for row in &sweep.rows {
        if let Ok(p) = &row.outcome {
            assert_eq!(p.power_ratios[1], 1.0);
            assert_eq!(p.secrecy[0][1], 0.0);
            assert_eq!(p.secrecy[1][1], 0.0);
        }
    }
}

#[test]
fn centred_coverage_has_an_interior_optimum() {
    let (betas, probs) = coverage_curve(0.0);
    let (best, _) = probs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_nan())
        .fold((0, f64::MIN), |acc, (i, &p)| if p > acc.1 { (i, p) } else { acc });
    assert!(best > 0 && best < betas.len() - 1, "argmax at beta = {}", betas[best]);
}

#[test]
fn off_centre_coverage_has_a_plateau() {
    let (_, probs) = coverage_curve(0.5);
    let max = probs.iter().cloned().filter(|p| !p.is_nan()).fold(f64::MIN, f64::max);
    let mut run = 0;
    let mut longest = 0;
    for &p in &probs {
        run = if p >= 0.95 * max { run + 1 } else { 0 };
        longest = longest.max(run);
    }
    assert!(longest >= 3, "longest run within 5% of {max}: {longest}");
}

#[test]
fn bending_map_secures_more_area_near_the_receiver() {
    let tx = transmitter(1000);
    let grid = ObservationGrid::new(-1.0, 1.0, 7.0, 9.0, 101, 101).unwrap();
    let bend = design_from_rx(rx(), 0.015, 0.5).unwrap();
    let count = |beam: BeamSpec| {
        let scene = SecrecyScene::from_beam(&tx, &beam, rx(), 10.0).unwrap();
        secrecy_map(&scene, &grid).unwrap().secure_count_near(Point::from(rx()), 1.0, 0.9)
    };
    let bending = count(BeamSpec::Bending(bend));
    let broadside = count(BeamSpec::Broadside);
    assert!(bending > broadside, "bending {bending} vs broadside {broadside}");
}

#[test]
fn quartering_samples_agrees_within_three_standard_errors() {
    let tx = transmitter(1000);
    let scene = SecrecyScene::from_beam(&tx, &BeamSpec::Bending(design_from_rx(rx(), 0.015, 0.5).unwrap()), rx(), 10.0).unwrap();
    let thresholds = [0.5, 0.9, 0.99];
    let full = disk_coverage(&scene, &DiskEveModel::new(rx(), 1.0, 8000, 3).unwrap(), &thresholds).unwrap();
    let quarter = disk_coverage(&scene, &DiskEveModel::new(rx(), 1.0, 2000, 3).unwrap(), &thresholds).unwrap();
    for i in 0..thresholds.len() {
        let se = full.standard_errors[i].hypot(quarter.standard_errors[i]);
        assert!((full.probabilities[i] - quarter.probabilities[i]).abs() <= 3.0 * se);
    }
    assert!(full.probabilities.windows(2).all(|w| w[1] <= w[0]));
}
