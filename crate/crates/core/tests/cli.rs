use std::path::Path;
use std::process::{Command, Output};

use bendbeam::cli::presets::preset;
use bendbeam::cli::SceneConfig;

fn bendbeam(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bendbeam"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn reported(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

fn write_config(dir: &Path, cfg: &SceneConfig) -> String {
    let path = dir.join("scene.json");
    std::fs::write(&path, cfg.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn targeted(beta: f64, x0c: f64) -> SceneConfig {
    let mut cfg = preset("fig2a").unwrap();
    cfg.beam.beta = Some(beta);
    cfg.beam.x0c = Some(x0c);
    cfg.output.prefix = None;
    cfg
}

#[test]
fn design_reports_the_receiver_targeted_trajectory() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bendbeam(&["design", "--preset", "fig2a"], tmp.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!((reported(&text, "x0") + 0.08).abs() < 1e-12);
    assert!((reported(&text, "z0") - 4.0).abs() < 1e-12);
    assert_eq!(reported(&text, "active_elements"), 500.0);

    let table = std::fs::read_to_string(tmp.path().join("fig2a_design_phases.csv")).unwrap();
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "index,x_m,active,phase_rad,weight_re,weight_im");
    assert_eq!(rows.len(), 1001);
    assert!(table.starts_with("# bendbeam "));
}

#[test]
fn off_centre_design_reports_vertex_range() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), &targeted(0.01, 0.25));
    let o = bendbeam(&["design", "--config", &config], tmp.path());
    assert!(o.status.success());
    assert!((reported(&stdout(&o), "z0") - 5.5625).abs() < 1e-12);
}

#[test]
fn zero_curvature_is_a_physics_error() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), &targeted(0.0, 0.0));
    let o = bendbeam(&["design", "--config", &config], tmp.path());
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.starts_with("error: kind=physics code=3 message="), "{err}");
    assert!(err.contains("broadside"));
}

#[test]
fn configuration_mistakes_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&targeted(0.005, 0.0).to_json()).unwrap();
    json["array"]["spacing"] = serde_json::json!(0.001);
    let path = tmp.path().join("typo.json");
    std::fs::write(&path, json.to_string()).unwrap();
    let o = bendbeam(&["design", "--config", path.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kind=config"));

    assert_eq!(bendbeam(&["design", "--preset", "fig9"], tmp.path()).status.code(), Some(2));
    assert_eq!(bendbeam(&["design"], tmp.path()).status.code(), Some(2));
    assert_eq!(bendbeam(&["sweep-all"], tmp.path()).status.code(), Some(2));
}

#[test]
fn small_aperture_fraunhofer_distance_is_printed() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bendbeam(&["field-map", "--preset", "fig4g"], tmp.path());
    assert!(o.status.success());
    assert_eq!(reported(&stdout(&o), "fraunhofer_distance_m"), 1.024);
    let pgm = std::fs::read_to_string(tmp.path().join("fig4g_field_map.pgm")).unwrap();
    assert!(pgm.starts_with("P2\n# bendbeam "));
    assert!(pgm.contains("\n601 240\n65535\n"));
}

#[test]
fn fig1_lobe_table_tracks_the_bent_caustic() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bendbeam(&["field-map", "--preset", "fig1"], tmp.path());
    assert!(o.status.success());
    let text = std::fs::read_to_string(tmp.path().join("fig1_main_lobe.csv")).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(rows.next(), Some("z,x_peak,caustic_x"));
    let near_five = rows
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .min_by(|a, b| (a[0] - 5.0).abs().total_cmp(&(b[0] - 5.0).abs()))
        .unwrap();
    assert!((near_five[2] + 0.08).abs() < 1e-4);
    // main lobe of an Airy-type beam sits about 14 mm inside the caustic here
    let airy = 1.0188 * (50.0 / (2.0 * (std::f64::consts::PI / 1e-3).powi(2))).cbrt();
    assert!((near_five[1] - (near_five[2] - airy)).abs() <= 0.01, "{near_five:?}");
}

#[test]
fn los_power_ratio_is_zero_db_at_the_receiver() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(bendbeam(&["los", "--preset", "fig2c"], tmp.path()).status.success());
    let text = std::fs::read_to_string(tmp.path().join("fig2c_los.csv")).unwrap();
    let at_rx: Vec<&str> = text.lines().filter(|l| l.starts_with("8,")).collect();
    assert_eq!(at_rx, vec!["8,10,0,0", "8,20,0,0", "8,30,0,0"]);
}

#[test]
fn curvature_sweep_finds_the_receiver_optimum() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bendbeam(&["beta-sweep", "--preset", "fig3a-inset"], tmp.path());
    assert!(o.status.success());
    let best = reported(&stdout(&o), "argmax_p_rx_beta");
    assert!((best - 0.0041).abs() <= 0.0003 + 1e-12, "{best}");

    let text = std::fs::read_to_string(tmp.path().join("fig3a-inset_beta_sweep_prx.csv")).unwrap();
    let best_row = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("beta"))
        .map(|l| l.split(',').collect::<Vec<_>>())
        .max_by(|a, b| a[5].parse::<f64>().unwrap().total_cmp(&b[5].parse().unwrap()))
        .unwrap();
    assert_eq!(best_row[0].parse::<f64>().unwrap(), best);
}

#[test]
fn coverage_is_reproducible_for_a_fixed_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = preset("fig5a").unwrap();
    cfg.pls.samples = 500;
    cfg.beta_sweep.as_mut().unwrap().beta_step = 2e-3;
    let config = write_config(tmp.path(), &cfg);
    let read = |sub: &str, extra: &[&str]| {
        let dir = tmp.path().join(sub);
        let mut args = vec!["coverage", "--config", &config, "--seed", "41"];
        args.extend_from_slice(extra);
        assert!(bendbeam(&args, &dir).status.success());
        std::fs::read(dir.join("fig5a_coverage.csv")).unwrap()
    };
    let first = read("a", &[]);
    assert_eq!(first, read("b", &["--threads", "2"]));
    let text = String::from_utf8(first).unwrap();
    assert!(text.contains("\"seed\":41"));
    assert!(text.lines().filter(|l| !l.starts_with('#')).skip(1).all(|l| l.ends_with(",41")));
}
