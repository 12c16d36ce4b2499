use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use super::config::{BeamChoice, SceneConfig};
use super::{CliError, Command};
use crate::export::{linear_levels, log_levels, write_comments, write_field_csv, write_pgm, HEATMAP_RANGE_DB};
use crate::pls::{beta_sweep, coverage_vs_beta, los_sweep, sample_power_ratios, secrecy_map, CoverageResult, DiskEveModel, SecrecyScene};
use crate::propagation::{field_map, fraunhofer_distance, trace_main_lobe};
use crate::trajectory::{design_from_rx, BeamSpec, TrajectoryParams};

/// Where and under which name a command runs.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub out_dir: PathBuf,
    pub preset: Option<String>,
}

/// Runs `command` and returns the human-readable summary for stdout.
pub fn run_command(command: Command, cfg: &SceneConfig, ctx: &RunContext) -> Result<String, CliError> {
    // fail on bad physics parameters before touching the filesystem
    cfg.carrier()?;
    cfg.array()?;
    cfg.validate_pls()?;
    fs::create_dir_all(&ctx.out_dir)?;
    let header = header(command, cfg, ctx);
    match command {
        Command::Design => cmd_design(cfg, ctx, &header),
        Command::FieldMap => cmd_field_map(cfg, ctx, &header),
        Command::Los => cmd_los(cfg, ctx, &header),
        Command::BetaSweep => cmd_beta_sweep(cfg, ctx, &header),
        Command::Coverage => cmd_coverage(cfg, ctx, &header),
    }
}

fn header(command: Command, cfg: &SceneConfig, ctx: &RunContext) -> Vec<String> {
    vec![
        format!("bendbeam {} {}", env!("CARGO_PKG_VERSION"), command.name()),
        format!("preset: {}", ctx.preset.as_deref().unwrap_or("none")),
        format!("config: {}", cfg.to_json()),
    ]
}

fn create(cfg: &SceneConfig, ctx: &RunContext, base: &str) -> Result<(BufWriter<File>, PathBuf), CliError> {
    let path = ctx.out_dir.join(cfg.file_name(base));
    Ok((BufWriter::new(File::create(&path)?), path))
}

/// Rounds to 12 significant digits for display.
fn tidy(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn power_ratio_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

fn cmd_design(cfg: &SceneConfig, ctx: &RunContext, header: &[String]) -> Result<String, CliError> {
    let params = match cfg.beam_choice()? {
        BeamChoice::Targeted { beta, x0c } => design_from_rx(cfg.require_rx("design")?, beta, x0c)?,
        BeamChoice::Vertex { beta, x0, z0 } => TrajectoryParams::new(beta, x0, z0)?,
        BeamChoice::Broadside => {
            return Err(CliError::Config("design needs a bending beam (mode = \"bending\")".into()))
        }
    };
    let tx = cfg.transmitter()?;
    let beam = BeamSpec::Bending(params);
    let window = beam.window(&tx.array)?;
    let excitation = tx.excitation(&beam)?;

    let (mut w, path) = create(cfg, ctx, "design_phases.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "index,x_m,active,phase_rad,weight_re,weight_im")?;
    for (idx, (wt, &on)) in excitation
        .weights()
        .iter()
        .zip(excitation.active_mask())
        .enumerate()
    {
        let x = tx.array.position(idx);
        if on {
            let phi = beam.phase(&tx.carrier, x)?;
            writeln!(w, "{},{},1,{},{},{}", idx + 1, x, phi, wt.re, wt.im)?;
        } else {
            writeln!(w, "{},{},0,,0,0", idx + 1, x)?;
        }
    }
    w.flush()?;

    let mut out = String::new();
    writeln!(out, "beta = {}", params.beta()).unwrap();
    writeln!(out, "x0 = {}", tidy(params.x0())).unwrap();
    writeln!(out, "z0 = {}", tidy(params.z0())).unwrap();
    writeln!(out, "x0c = {}", tidy(params.x0c())).unwrap();
    writeln!(out, "x0t = {}", tidy(params.x0t(tx.array.length()))).unwrap();
    writeln!(out, "window = [{}, {}]", tidy(window.lo), tidy(window.hi)).unwrap();
    writeln!(out, "active_elements = {}", excitation.active_count()).unwrap();
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(out)
}

fn cmd_field_map(cfg: &SceneConfig, ctx: &RunContext, header: &[String]) -> Result<String, CliError> {
    let tx = cfg.transmitter()?;
    let beam = cfg.beam_spec()?;
    let grid = cfg.grid()?;
    let radiator = tx.radiator(&beam)?;
    let map = field_map(&radiator, &grid);

    let (mut w, csv_path) = create(cfg, ctx, "field_map.csv")?;
    write_field_csv(&mut w, &map, header)?;
    w.flush()?;

    let (mut w, pgm_path) = create(cfg, ctx, "field_map.pgm")?;
    let mut pgm_header = header.to_vec();
    pgm_header.push(format!(
        "power density, log scale, {HEATMAP_RANGE_DB} dB below max {}; rows are z, columns are x",
        map.max_power()
    ));
    let levels = log_levels(&map.power, &map.valid, HEATMAP_RANGE_DB);
    write_pgm(&mut w, grid.nx(), grid.nz(), &levels, &pgm_header)?;
    w.flush()?;

    let lobe = trace_main_lobe(&map);
    let (mut w, lobe_path) = create(cfg, ctx, "main_lobe.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "z,x_peak,caustic_x")?;
    for p in &lobe {
        match beam.trajectory() {
            Some(t) if t.beta() != 0.0 => writeln!(w, "{},{},{}", p.z, p.x_peak, t.caustic_x(p.z))?,
            _ => writeln!(w, "{},{},", p.z, p.x_peak)?,
        }
    }
    w.flush()?;

    let mut out = String::new();
    writeln!(out, "active_elements = {}", radiator.active_count()).unwrap();
    writeln!(out, "fraunhofer_distance_m = {}", tidy(fraunhofer_distance(&tx.array, &tx.carrier))).unwrap();
    writeln!(out, "grid = {} x {}", grid.nx(), grid.nz()).unwrap();
    writeln!(out, "max_power_density = {}", map.max_power()).unwrap();
    for f in [&csv_path, &pgm_path, &lobe_path] {
        writeln!(out, "wrote {}", f.display()).unwrap();
    }

    if let Some(rx) = cfg.rx()? {
        let snr = cfg.pls.snr_db[0];
        let scene = SecrecyScene::new(rx, snr, radiator)?;
        let smap = secrecy_map(&scene, &grid)?;
        let (mut w, path) = create(cfg, ctx, "secrecy_map.csv")?;
        write_comments(&mut w, header)?;
        writeln!(w, "# snr_db: {snr}; s_max: {}", smap.s_max)?;
        writeln!(w, "x,z,secrecy_rate")?;
        for jz in 0..grid.nz() {
            for ix in 0..grid.nx() {
                let idx = grid.index(ix, jz);
                if smap.valid[idx] {
                    writeln!(w, "{},{},{}", grid.x(ix), grid.z(jz), smap.values[idx])?;
                }
            }
        }
        w.flush()?;
        let (mut w, pgm) = create(cfg, ctx, "secrecy_map.pgm")?;
        let mut h = header.to_vec();
        h.push(format!("secrecy rate, linear from -{0} to {0} bit/s/Hz", smap.s_max));
        let levels = linear_levels(&smap.values, &smap.valid, -smap.s_max, smap.s_max);
        write_pgm(&mut w, grid.nx(), grid.nz(), &levels, &h)?;
        w.flush()?;
        writeln!(out, "wrote {}", path.display()).unwrap();
        writeln!(out, "wrote {}", pgm.display()).unwrap();
    }
    Ok(out)
}

fn cmd_los(cfg: &SceneConfig, ctx: &RunContext, header: &[String]) -> Result<String, CliError> {
    let rx = cfg.require_rx("los")?;
    let tx = cfg.transmitter()?;
    let beam = cfg.beam_spec()?;
    let zs = cfg.los_samples(rx)?;
    let scene = SecrecyScene::from_beam(&tx, &beam, rx, cfg.pls.snr_db[0])?;

    let (mut w, path) = create(cfg, ctx, "los.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "z_eve,snr_db,power_ratio_db,secrecy_rate")?;
    let mut out = String::new();
    for &snr in &cfg.pls.snr_db {
        let scene = scene.with_snr(snr)?;
        let samples = los_sweep(&scene, &zs)?;
        for s in &samples {
            writeln!(w, "{},{},{},{}", s.z_eve, snr, power_ratio_db(s.power_ratio), s.secrecy_rate)?;
        }
        let worst = samples
            .iter()
            .filter(|s| s.z_eve != rx.z)
            .map(|s| s.secrecy_rate)
            .fold(f64::INFINITY, f64::min);
        writeln!(out, "snr_db = {snr}: s_max = {}, min secrecy_rate = {worst}", tidy(scene.s_max())).unwrap();
    }
    w.flush()?;
    writeln!(out, "p_rx_density = {}", scene.p_rx()).unwrap();
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(out)
}

fn cmd_beta_sweep(cfg: &SceneConfig, ctx: &RunContext, header: &[String]) -> Result<String, CliError> {
    let rx = cfg.require_rx("beta-sweep")?;
    let (x0c, betas) = cfg
        .betas()?
        .ok_or_else(|| CliError::Config("beta-sweep needs a `beta_sweep` section".into()))?;
    let tx = cfg.transmitter()?;
    let zs = cfg.los_samples(rx)?;
    let sweep = beta_sweep(&tx, rx, x0c, &betas, &zs, &cfg.pls.snr_db);

    let (mut w, prx_path) = create(cfg, ctx, "beta_sweep_prx.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "beta,status,x0,z0,active_elements,p_rx_density")?;
    for row in &sweep.rows {
        match &row.outcome {
            Ok(p) => writeln!(
                w,
                "{},ok,{},{},{},{}",
                row.beta,
                p.params.x0(),
                p.params.z0(),
                p.active_count,
                p.p_rx_density
            )?,
            Err(e) => writeln!(w, "{},{},,,,", row.beta, e.code())?,
        }
    }
    w.flush()?;

    let (mut w, map_path) = create(cfg, ctx, "beta_sweep.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "beta,p_rx_density,z_eve,snr_db,power_ratio_db,secrecy_rate")?;
    for row in &sweep.rows {
        let Ok(p) = &row.outcome else { continue };
        for (si, &snr) in sweep.snr_db.iter().enumerate() {
            for (zi, &z) in sweep.z_samples.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    row.beta,
                    p.p_rx_density,
                    z,
                    snr,
                    power_ratio_db(p.power_ratios[zi]),
                    p.secrecy[si][zi]
                )?;
            }
        }
    }
    w.flush()?;

    let failed = sweep.rows.iter().filter(|r| r.outcome.is_err()).count();
    let mut out = String::new();
    match sweep.argmax_p_rx() {
        Some(b) => writeln!(out, "argmax_p_rx_beta = {b}").unwrap(),
        None => writeln!(out, "argmax_p_rx_beta = none").unwrap(),
    }
    writeln!(out, "betas = {}, failed designs = {failed}", sweep.rows.len()).unwrap();
    writeln!(out, "wrote {}", prx_path.display()).unwrap();
    writeln!(out, "wrote {}", map_path.display()).unwrap();
    Ok(out)
}

fn write_coverage_row<W: Write>(w: &mut W, beta: f64, c: &CoverageResult<f64>) -> std::io::Result<()> {
    for (i, m) in c.thresholds.iter().enumerate() {
        writeln!(
            w,
            "{},ok,{},{},{},{},{},{},{},{}",
            beta,
            c.radius_m,
            c.snr_db,
            m,
            c.probabilities[i],
            c.standard_errors[i],
            c.n_samples,
            c.resampled,
            c.seed
        )?;
    }
    Ok(())
}

fn cmd_coverage(cfg: &SceneConfig, ctx: &RunContext, header: &[String]) -> Result<String, CliError> {
    let rx = cfg.require_rx("coverage")?;
    let tx = cfg.transmitter()?;
    let pls = &cfg.pls;

    let (mut w, path) = create(cfg, ctx, "coverage.csv")?;
    write_comments(&mut w, header)?;
    writeln!(w, "beta,status,radius_m,snr_db,threshold,probability,stderr,n_samples,resampled,seed")?;
    let mut out = String::new();

    if let Some((x0c, betas)) = cfg.betas()? {
        for &radius in &pls.radii_m {
            let rows = coverage_vs_beta(&tx, rx, x0c, &betas, radius, pls.samples, pls.seed, &pls.thresholds, &pls.snr_db)?;
            let mut best: Option<(f64, f64)> = None;
            for row in &rows {
                match &row.outcome {
                    Ok(results) => {
                        for c in results {
                            write_coverage_row(&mut w, row.beta, c)?;
                        }
                        if let Some(&p) = results.first().and_then(|c| c.probabilities.first()) {
                            if best.is_none_or(|(_, bp)| p > bp) {
                                best = Some((row.beta, p));
                            }
                        }
                    }
                    Err(e) => writeln!(w, "{},{},{},,,,,{},,{}", row.beta, e.code(), radius, pls.samples, pls.seed)?,
                }
            }
            if let (Some((b, p)), Some(m)) = (best, pls.thresholds.first()) {
                writeln!(
                    out,
                    "R_eve = {radius}: best beta = {b} with P(S > {m} S_max) = {p} at snr_db = {}",
                    pls.snr_db[0]
                )
                .unwrap();
            }
        }
    } else {
        let beam = cfg.beam_spec()?;
        let scene = SecrecyScene::from_beam(&tx, &beam, rx, pls.snr_db[0])?;
        for &radius in &pls.radii_m {
            let eve = DiskEveModel::new(rx, radius, pls.samples, pls.seed)?;
            let ratios = sample_power_ratios(&scene, &eve)?;
            for &snr in &pls.snr_db {
                let c = ratios.coverage(snr, &pls.thresholds)?;
                write_coverage_row(&mut w, beam.beta(), &c)?;
                let probs: Vec<String> = c
                    .probabilities
                    .iter()
                    .zip(&c.standard_errors)
                    .zip(&c.thresholds)
                    .map(|((p, se), m)| format!("M={m}: {p:.4}±{se:.4}"))
                    .collect();
                writeln!(out, "R_eve = {radius}, snr_db = {snr}: {}", probs.join(", ")).unwrap();
            }
        }
    }
    w.flush()?;
    writeln!(out, "wrote {}", path.display()).unwrap();
    Ok(out)
}
