//! Physical-layer security metrics.
//!
//! The SNR at the legitimate receiver is pinned by the caller; the noise
//! power is whatever makes that true, so an eavesdropper's SNR is
//! `SNR_Rx * P_eve / P_Rx`. Only power-density ratios between the two probe
//! points enter, which cancels any receive-aperture constant and any common
//! scaling of the element powers.
//!
//! Monte-Carlo eavesdropper positions come from ChaCha8 (`rand_chacha`),
//! seeded with `ChaCha8Rng::seed_from_u64(seed)`. Sample `i` uses stream `i`
//! (`set_stream(i)`) and draws `f64`s in `[0, 1)` with rand's standard
//! uniform conversion. Since every sample owns its stream, results do not
//! depend on how samples are split across threads. This generator choice is
//! part of the golden-output contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagation::{field_map, ObservationGrid, Point, Radiator, Transmitter};
use crate::scalar::Scalar;
use crate::trajectory::{design_from_rx, BeamSpec, RxLocation, TrajectoryParams};

/// Eavesdropper samples must lie strictly beyond this range (m).
pub const Z_FLOOR_M: f64 = 0.05;

pub fn snr_linear<T: Scalar>(snr_db: T) -> T {
    T::lit(10.0).powf(snr_db / T::lit(10.0))
}

/// `log2(1 + SNR_Rx)`, the secrecy rate with a deaf eavesdropper.
pub fn max_secrecy_rate<T: Scalar>(snr_rx_db: T) -> T {
    snr_linear(snr_rx_db).ln_1p() / T::LN_2()
}

/// Secrecy rate in bit/s/Hz for `power_ratio = P_eve / P_Rx`.
pub fn secrecy_rate<T: Scalar>(snr_rx_db: T, power_ratio: T) -> Result<T> {
    if !snr_rx_db.is_finite() {
        return Err(Error::invalid("snr_rx_db", "must be finite"));
    }
    if power_ratio.is_nan() || power_ratio < T::zero() || power_ratio.is_infinite() {
        return Err(Error::invalid("power_ratio", "must be finite and >= 0"));
    }
    let snr = snr_linear(snr_rx_db);
    Ok((snr.ln_1p() - (snr * power_ratio).ln_1p()) / T::LN_2())
}

/// A transmitted beam, the receiver it serves, and the SNR at that receiver.
#[derive(Debug, Clone)]
pub struct SecrecyScene<T> {
    rx: RxLocation<T>,
    snr_rx_db: T,
    radiator: Radiator<T>,
    p_rx: T,
}

impl<T: Scalar> SecrecyScene<T> {
    pub fn new(rx: RxLocation<T>, snr_rx_db: T, radiator: Radiator<T>) -> Result<Self> {
        if !snr_rx_db.is_finite() {
            return Err(Error::invalid("snr_rx_db", "must be finite"));
        }
        let p_rx = radiator.power_density_at(rx.into())?;
        if p_rx.is_nan() || p_rx <= T::zero() {
            return Err(Error::NoPowerAtReceiver {
                x: rx.x.as_f64(),
                z: rx.z.as_f64(),
            });
        }
        Ok(Self {
            rx,
            snr_rx_db,
            radiator,
            p_rx,
        })
    }

    pub fn from_beam(tx: &Transmitter<T>, beam: &BeamSpec<T>, rx: RxLocation<T>, snr_rx_db: T) -> Result<Self> {
        Self::new(rx, snr_rx_db, tx.radiator(beam)?)
    }

    pub fn with_snr(&self, snr_rx_db: T) -> Result<Self> {
        if !snr_rx_db.is_finite() {
            return Err(Error::invalid("snr_rx_db", "must be finite"));
        }
        Ok(Self {
            snr_rx_db,
            ..self.clone()
        })
    }

    pub fn rx(&self) -> RxLocation<T> {
        self.rx
    }

    pub fn snr_rx_db(&self) -> T {
        self.snr_rx_db
    }

    pub fn radiator(&self) -> &Radiator<T> {
        &self.radiator
    }

    /// Power density at the receiver (W/m^2).
    pub fn p_rx(&self) -> T {
        self.p_rx
    }

    pub fn s_max(&self) -> T {
        max_secrecy_rate(self.snr_rx_db)
    }

    pub fn power_ratio(&self, eve: Point<T>) -> Result<T> {
        Ok(self.radiator.power_density_at(eve)? / self.p_rx)
    }

    pub fn secrecy_at(&self, eve: Point<T>) -> Result<T> {
        secrecy_rate(self.snr_rx_db, self.power_ratio(eve)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosSample<T> {
    pub z_eve: T,
    pub power_ratio: T,
    pub secrecy_rate: T,
}

/// Eavesdropper moving along the line `x = x_rx` at the given ranges.
pub fn los_sweep<T: Scalar>(scene: &SecrecyScene<T>, z_samples: &[T]) -> Result<Vec<LosSample<T>>> {
    let x = scene.rx().x;
    z_samples
        .par_iter()
        .map(|&z_eve| {
            let power_ratio = scene.power_ratio(Point::new(x, z_eve))?;
            Ok(LosSample {
                z_eve,
                power_ratio,
                secrecy_rate: secrecy_rate(scene.snr_rx_db(), power_ratio)?,
            })
        })
        .collect()
}

/// One designed beam of a curvature sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSweepPoint<T> {
    pub params: TrajectoryParams<T>,
    pub active_count: usize,
    pub p_rx_density: T,
    /// `P_eve / P_Rx` per LoS sample.
    pub power_ratios: Vec<T>,
    /// Secrecy rate indexed `[snr][z]`.
    pub secrecy: Vec<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSweepRow<T> {
    pub beta: T,
    /// Designs that fail (vertex behind the array, empty window, ...) are
    /// kept as gaps with their error.
    pub outcome: Result<BetaSweepPoint<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaSweep<T> {
    pub x0c: T,
    pub z_samples: Vec<T>,
    pub snr_db: Vec<T>,
    pub rows: Vec<BetaSweepRow<T>>,
}

impl<T: Scalar> BetaSweep<T> {
    /// Curvature that puts the most power on the receiver.
    pub fn argmax_p_rx(&self) -> Option<T> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(|p| (r.beta, p.p_rx_density)))
            .fold(None, |best: Option<(T, T)>, (b, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((b, p)),
            })
            .map(|(b, _)| b)
    }
}

/// Designs one beam per curvature, all leaving the array at `x0c` and
/// reaching `rx`, and records the power at the receiver and the LoS
/// secrecy profile of each.
pub fn beta_sweep<T: Scalar>(
    tx: &Transmitter<T>,
    rx: RxLocation<T>,
    x0c: T,
    betas: &[T],
    z_samples: &[T],
    snr_db: &[T],
) -> BetaSweep<T> {
    let rows = betas
        .par_iter()
        .map(|&beta| BetaSweepRow {
            beta,
            outcome: sweep_point(tx, rx, x0c, beta, z_samples, snr_db),
        })
        .collect();
    BetaSweep {
        x0c,
        z_samples: z_samples.to_vec(),
        snr_db: snr_db.to_vec(),
        rows,
    }
}

fn sweep_point<T: Scalar>(
    tx: &Transmitter<T>,
    rx: RxLocation<T>,
    x0c: T,
    beta: T,
    z_samples: &[T],
    snr_db: &[T],
) -> Result<BetaSweepPoint<T>> {
    let params = design_from_rx(rx, beta, x0c)?;
    let radiator = tx.radiator(&BeamSpec::Bending(params))?;
    let active_count = radiator.active_count();
    let scene = SecrecyScene::new(rx, T::zero(), radiator)?;
    let power_ratios = z_samples
        .iter()
        .map(|&z| scene.power_ratio(Point::new(rx.x, z)))
        .collect::<Result<Vec<_>>>()?;
    let secrecy = snr_db
        .iter()
        .map(|&snr| {
            power_ratios
                .iter()
                .map(|&r| secrecy_rate(snr, r))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BetaSweepPoint {
        params,
        active_count,
        p_rx_density: scene.p_rx(),
        power_ratios,
        secrecy,
    })
}

/// Secrecy rate over a grid of eavesdropper positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyMap<T> {
    pub grid: ObservationGrid<T>,
    pub values: Vec<T>,
    pub valid: Vec<bool>,
    pub s_max: T,
}

impl<T: Scalar> SecrecyMap<T> {
    /// Number of valid samples within `radius` of `centre` whose secrecy
    /// rate exceeds `fraction * s_max`.
    pub fn secure_count_near(&self, centre: Point<T>, radius: T, fraction: T) -> usize {
        let r2 = radius * radius;
        (0..self.grid.len())
            .filter(|&i| {
                let p = self.grid.point(i);
                let (dx, dz) = (p.x - centre.x, p.z - centre.z);
                self.valid[i] && dx * dx + dz * dz <= r2 && self.values[i] > fraction * self.s_max
            })
            .count()
    }
}

pub fn secrecy_map<T: Scalar>(scene: &SecrecyScene<T>, grid: &ObservationGrid<T>) -> Result<SecrecyMap<T>> {
    let map = field_map(scene.radiator(), grid);
    let values = map
        .power
        .iter()
        .zip(&map.valid)
        .map(|(&p, &v)| {
            if v {
                secrecy_rate(scene.snr_rx_db(), p / scene.p_rx())
            } else {
                Ok(T::zero())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecrecyMap {
        grid: *grid,
        values,
        valid: map.valid,
        s_max: scene.s_max(),
    })
}

/// Eavesdropper uniformly distributed over a disk around the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskEveModel<T> {
    pub center: RxLocation<T>,
    pub radius_m: T,
    pub sample_count: usize,
    pub seed: u64,
}

impl<T: Scalar> DiskEveModel<T> {
    pub fn new(center: RxLocation<T>, radius_m: T, sample_count: usize, seed: u64) -> Result<Self> {
        if !(radius_m.is_finite() && radius_m > T::zero()) {
            return Err(Error::invalid("radius_m", "must be finite and > 0"));
        }
        if sample_count == 0 {
            return Err(Error::invalid("sample_count", "must be >= 1"));
        }
        if center.z + radius_m <= T::lit(Z_FLOOR_M) {
            return Err(Error::invalid("radius_m", "disk lies entirely behind the sampling floor"));
        }
        Ok(Self {
            center,
            radius_m,
            sample_count,
            seed,
        })
    }

    /// Position of sample `index` and how many draws were rejected for
    /// falling at or behind the floor.
    pub fn sample(&self, index: usize) -> (Point<T>, u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let floor = T::lit(Z_FLOOR_M);
        let mut rejected = 0;
        loop {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let r = self.radius_m * T::lit(u).sqrt();
            let (s, c) = (T::TAU() * T::lit(v)).sin_cos();
            let p = Point::new(self.center.x + r * c, self.center.z + r * s);
            if p.z > floor {
                return (p, rejected);
            }
            rejected += 1;
        }
    }
}

/// `P_eve / P_Rx` at every disk sample.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskRatios<T> {
    pub model: DiskEveModel<T>,
    pub ratios: Vec<T>,
    pub resampled: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult<T> {
    pub radius_m: T,
    pub snr_db: T,
    pub thresholds: Vec<T>,
    /// Fraction of samples with `S > M S_max`, per threshold `M`.
    pub probabilities: Vec<T>,
    /// Binomial standard error `sqrt(p (1 - p) / N)`.
    pub standard_errors: Vec<T>,
    pub n_samples: usize,
    pub seed: u64,
    pub resampled: u64,
}

pub fn sample_power_ratios<T: Scalar>(scene: &SecrecyScene<T>, eve: &DiskEveModel<T>) -> Result<DiskRatios<T>> {
    let drawn = (0..eve.sample_count)
        .into_par_iter()
        .map(|i| {
            let (p, rejected) = eve.sample(i);
            Ok((scene.power_ratio(p)?, rejected))
        })
        .collect::<Result<Vec<_>>>()?;
    let resampled = drawn.iter().map(|&(_, r)| r).sum();
    Ok(DiskRatios {
        model: *eve,
        ratios: drawn.into_iter().map(|(r, _)| r).collect(),
        resampled,
    })
}

impl<T: Scalar> DiskRatios<T> {
    pub fn coverage(&self, snr_db: T, thresholds: &[T]) -> Result<CoverageResult<T>> {
        if let Some(m) = thresholds.iter().find(|m| !(m.is_finite() && **m >= T::zero())) {
            return Err(Error::invalid("thresholds", format!("{m} is not a finite fraction >= 0")));
        }
        let s_max = max_secrecy_rate(snr_db);
        let rates = self
            .ratios
            .iter()
            .map(|&r| secrecy_rate(snr_db, r))
            .collect::<Result<Vec<_>>>()?;
        let n = T::from_count(rates.len());
        let mut probabilities = Vec::with_capacity(thresholds.len());
        let mut standard_errors = Vec::with_capacity(thresholds.len());
        for &m in thresholds {
            let bar = m * s_max;
            let hits = rates.iter().filter(|&&s| s > bar).count();
            let p = T::from_count(hits) / n;
            probabilities.push(p);
            standard_errors.push((p * (T::one() - p) / n).sqrt());
        }
        Ok(CoverageResult {
            radius_m: self.model.radius_m,
            snr_db,
            thresholds: thresholds.to_vec(),
            probabilities,
            standard_errors,
            n_samples: rates.len(),
            seed: self.model.seed,
            resampled: self.resampled,
        })
    }
}

/// `P(S > M S_max)` for an eavesdropper uniformly placed in the disk.
pub fn disk_coverage<T: Scalar>(
    scene: &SecrecyScene<T>,
    eve: &DiskEveModel<T>,
    thresholds: &[T],
) -> Result<CoverageResult<T>> {
    sample_power_ratios(scene, eve)?.coverage(scene.snr_rx_db(), thresholds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaCoverageRow<T> {
    pub beta: T,
    /// One result per requested SNR.
    pub outcome: Result<Vec<CoverageResult<T>>>,
}

/// Disk coverage for one rx-targeted design per curvature. The eavesdropper
/// sample set (seed, count) is shared by every curvature.
#[allow(clippy::too_many_arguments)]
pub fn coverage_vs_beta<T: Scalar>(
    tx: &Transmitter<T>,
    rx: RxLocation<T>,
    x0c: T,
    betas: &[T],
    radius_m: T,
    sample_count: usize,
    seed: u64,
    thresholds: &[T],
    snr_db: &[T],
) -> Result<Vec<BetaCoverageRow<T>>> {
    let eve = DiskEveModel::new(rx, radius_m, sample_count, seed)?;
    Ok(betas
        .iter()
        .map(|&beta| {
            let outcome = design_from_rx(rx, beta, x0c).and_then(|params| {
                let scene = SecrecyScene::from_beam(tx, &BeamSpec::Bending(params), rx, T::zero())?;
                let ratios = sample_power_ratios(&scene, &eve)?;
                snr_db
                    .iter()
                    .map(|&snr| ratios.coverage(snr, thresholds))
                    .collect::<Result<Vec<_>>>()
            });
            BetaCoverageRow { beta, outcome }
        })
        .collect())
}
