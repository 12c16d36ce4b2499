//! Coherent point-source propagation of the excited array.
//!
//! Each active element is an isotropic radiator
//! `E_n = sqrt(2 Z0 G U P / 4 pi) exp(-j k r) / r exp(j phi_n)`; the field at
//! an observation point is the plain sum over elements in index order.
//!
//! Grid evaluation is data-parallel over observation points only. Every point
//! accumulates its elements sequentially in the same order, so outputs are
//! bit-identical for any thread count.

use num_complex::Complex;
use num_traits::{Num, Zero};
use rayon::prelude::*;

use crate::array::{ArrayExcitation, CarrierConfig, ElementPattern, PowerMode, UlaArray};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajectory::{BeamSpec, RxLocation};

/// Observation point in the `xz`-plane (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub z: T,
}

impl<T> Point<T> {
    pub fn new(x: T, z: T) -> Self {
        Self { x, z }
    }
}

impl<T> From<RxLocation<T>> for Point<T> {
    fn from(rx: RxLocation<T>) -> Self {
        Self { x: rx.x, z: rx.z }
    }
}

/// Field of a single element with complex drive `weight` (`sqrt(P) e^{j phi}`).
pub fn element_field<T: Scalar>(
    carrier: &CarrierConfig<T>,
    array: &UlaArray<T>,
    element_x: T,
    weight: Complex<T>,
    obs: Point<T>,
) -> Result<Complex<T>> {
    let dx = obs.x - element_x;
    let r = (dx * dx + obs.z * obs.z).sqrt();
    if r == T::zero() {
        return Err(Error::ObservationOnElement {
            x: obs.x.as_f64(),
            z: obs.z.as_f64(),
        });
    }
    let pattern = array.element_pattern().response(dx / r, obs.z / r);
    let amp = (T::lit(2.0) * carrier.z0_impedance() * array.element_gain() * pattern
        / (T::lit(4.0) * T::PI()))
    .sqrt();
    let (s, c) = (carrier.wavenumber() * r).sin_cos();
    Ok(weight * Complex::new(c, -s) * (amp / r))
}

/// `|E|^2 / 2 Z0` in W/m^2.
#[inline]
pub fn power_density<T: Scalar>(field: Complex<T>, z0_impedance: T) -> T {
    field.norm_sqr() / (T::lit(2.0) * z0_impedance)
}

/// The active elements of an excited array, with the constant part of the
/// element field folded into each weight.
#[derive(Debug, Clone)]
pub struct Radiator<T> {
    wavenumber: T,
    z0_impedance: T,
    pattern: ElementPattern,
    exclusion_radius: T,
    positions: Vec<T>,
    coefficients: Vec<Complex<T>>,
}

impl<T: Scalar> Radiator<T> {
    pub fn new(array: &UlaArray<T>, excitation: &ArrayExcitation<T>, carrier: &CarrierConfig<T>) -> Result<Self> {
        if excitation.weights().len() != array.n_elements() {
            return Err(Error::invalid(
                "excitation",
                format!(
                    "has {} weights for a {}-element array",
                    excitation.weights().len(),
                    array.n_elements()
                ),
            ));
        }
        let amp = (T::lit(2.0) * carrier.z0_impedance() * array.element_gain() / (T::lit(4.0) * T::PI())).sqrt();
        let mut positions = Vec::new();
        let mut coefficients = Vec::new();
        for (idx, (w, &on)) in excitation
            .weights()
            .iter()
            .zip(excitation.active_mask())
            .enumerate()
        {
            if on {
                positions.push(array.position(idx));
                coefficients.push(w * amp);
            }
        }
        Ok(Self {
            wavenumber: carrier.wavenumber(),
            z0_impedance: carrier.z0_impedance(),
            pattern: array.element_pattern(),
            exclusion_radius: array.spacing_m() / T::lit(2.0),
            positions,
            coefficients,
        })
    }

    pub fn active_count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn z0_impedance(&self) -> T {
        self.z0_impedance
    }

    /// Coherent sum of all active element fields at `obs`.
    pub fn field_at(&self, obs: Point<T>) -> Result<Complex<T>> {
        let z2 = obs.z * obs.z;
        let mut acc = Complex::zero();
        for (&xn, &c) in self.positions.iter().zip(&self.coefficients) {
            let dx = obs.x - xn;
            let r2 = dx * dx + z2;
            if r2 == T::zero() {
                return Err(Error::ObservationOnElement {
                    x: obs.x.as_f64(),
                    z: obs.z.as_f64(),
                });
            }
            let r = r2.sqrt();
            let (s, co) = (self.wavenumber * r).sin_cos();
            let scale = if self.pattern.is_isotropic() {
                r.recip()
            } else {
                self.pattern.response(dx / r, obs.z / r).sqrt() / r
            };
            acc = acc + c * Complex::new(co * scale, -s * scale);
        }
        Ok(acc)
    }

    pub fn power_density_at(&self, obs: Point<T>) -> Result<T> {
        Ok(power_density(self.field_at(obs)?, self.z0_impedance))
    }

    /// True if `obs` lies within half an element spacing of an active
    /// element, where the point-source model is not meaningful.
    pub fn is_excluded(&self, obs: Point<T>) -> bool {
        let rad = self.exclusion_radius;
        if obs.z.abs() >= rad {
            return false;
        }
        let rad2 = rad * rad;
        let z2 = obs.z * obs.z;
        self.positions.iter().any(|&xn| {
            let dx = obs.x - xn;
            dx * dx + z2 < rad2
        })
    }
}

/// Carrier, array and power convention: everything needed to turn a
/// [`BeamSpec`] into a [`Radiator`].
#[derive(Debug, Clone, PartialEq)]
pub struct Transmitter<T> {
    pub carrier: CarrierConfig<T>,
    pub array: UlaArray<T>,
    pub power_mode: PowerMode,
}

impl<T: Scalar> Transmitter<T> {
    pub fn new(carrier: CarrierConfig<T>, array: UlaArray<T>, power_mode: PowerMode) -> Self {
        Self {
            carrier,
            array,
            power_mode,
        }
    }

    pub fn excitation(&self, beam: &BeamSpec<T>) -> Result<ArrayExcitation<T>> {
        beam.excitation(&self.array, &self.carrier, self.power_mode)
    }

    pub fn radiator(&self, beam: &BeamSpec<T>) -> Result<Radiator<T>> {
        Radiator::new(&self.array, &self.excitation(beam)?, &self.carrier)
    }
}

/// Free-function form of [`Radiator::field_at`].
pub fn field_at<T: Scalar>(
    array: &UlaArray<T>,
    excitation: &ArrayExcitation<T>,
    carrier: &CarrierConfig<T>,
    obs: Point<T>,
) -> Result<Complex<T>> {
    Radiator::new(array, excitation, carrier)?.field_at(obs)
}

/// Uniform rectangular sampling of the half-plane in front of the array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationGrid<T> {
    x_min: T,
    x_max: T,
    z_min: T,
    z_max: T,
    nx: usize,
    nz: usize,
}

impl<T: Scalar> ObservationGrid<T> {
    pub fn new(x_min: T, x_max: T, z_min: T, z_max: T, nx: usize, nz: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::invalid("grid.x", "need finite x_min < x_max"));
        }
        if !(z_min.is_finite() && z_max.is_finite() && z_min < z_max) {
            return Err(Error::invalid("grid.z", "need finite z_min < z_max"));
        }
        if z_min <= T::zero() {
            return Err(Error::invalid("grid.z_min", "must be > 0 (in front of the array)"));
        }
        if nx < 2 || nz < 2 {
            return Err(Error::invalid("grid", "nx and nz must be >= 2"));
        }
        Ok(Self {
            x_min,
            x_max,
            z_min,
            z_max,
            nx,
            nz,
        })
    }

    /// x in [-1, 1] m at 2 mm, z in [0.05, 10] m at ~20 mm.
    pub fn default_grid() -> Self {
        Self::new(T::lit(-1.0), T::one(), T::lit(0.05), T::lit(10.0), 1001, 498)
            .expect("default grid is valid")
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bounds(&self) -> (T, T, T, T) {
        (self.x_min, self.x_max, self.z_min, self.z_max)
    }

    // Sample i of n on [lo, hi], written as centre + half-span * u with
    // u = (2i - (n-1)) / (n-1) so a grid symmetric about 0 mirrors exactly.
    fn sample(lo: T, hi: T, n: usize, i: usize) -> T {
        if i == 0 {
            return lo;
        }
        if i == n - 1 {
            return hi;
        }
        let two = T::lit(2.0);
        let centre = (lo + hi) / two;
        let half = (hi - lo) / two;
        let u = T::lit(2.0 * i as f64 - (n - 1) as f64) / T::from_count(n - 1);
        centre + half * u
    }

    pub fn x(&self, i: usize) -> T {
        Self::sample(self.x_min, self.x_max, self.nx, i)
    }

    pub fn z(&self, j: usize) -> T {
        Self::sample(self.z_min, self.z_max, self.nz, j)
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn zs(&self) -> Vec<T> {
        (0..self.nz).map(|j| self.z(j)).collect()
    }

    /// Row-major, z-outer linear index.
    #[inline]
    pub fn index(&self, ix: usize, jz: usize) -> usize {
        jz * self.nx + ix
    }

    pub fn point(&self, idx: usize) -> Point<T> {
        Point::new(self.x(idx % self.nx), self.z(idx / self.nx))
    }
}

/// Dense field samples over an [`ObservationGrid`], row-major with z outer.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap<T> {
    pub grid: ObservationGrid<T>,
    pub values: Vec<Complex<T>>,
    pub power: Vec<T>,
    /// False where the sample fell inside an element's exclusion radius;
    /// such samples hold zeros.
    pub valid: Vec<bool>,
}

impl<T: Scalar> FieldMap<T> {
    pub fn value(&self, ix: usize, jz: usize) -> Complex<T> {
        self.values[self.grid.index(ix, jz)]
    }

    pub fn power_at(&self, ix: usize, jz: usize) -> T {
        self.power[self.grid.index(ix, jz)]
    }

    pub fn max_power(&self) -> T {
        self.power
            .iter()
            .zip(&self.valid)
            .filter(|(_, &v)| v)
            .fold(T::zero(), |m, (&p, _)| m.max(p))
    }
}

pub fn field_map<T: Scalar>(radiator: &Radiator<T>, grid: &ObservationGrid<T>) -> FieldMap<T> {
    let samples: Vec<Option<Complex<T>>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let p = grid.point(idx);
            if radiator.is_excluded(p) {
                None
            } else {
                radiator.field_at(p).ok()
            }
        })
        .collect();

    let z0 = radiator.z0_impedance();
    let mut values = Vec::with_capacity(samples.len());
    let mut power = Vec::with_capacity(samples.len());
    let mut valid = Vec::with_capacity(samples.len());
    for s in samples {
        match s {
            Some(e) => {
                values.push(e);
                power.push(power_density(e, z0));
                valid.push(true);
            }
            None => {
                values.push(Complex::zero());
                power.push(T::zero());
                valid.push(false);
            }
        }
    }
    FieldMap {
        grid: *grid,
        values,
        power,
        valid,
    }
}

/// One sample of the traced main lobe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LobePoint<T> {
    pub z: T,
    pub x_peak: T,
}

/// Abscissa of maximum power density in each z-row. Ties go to the smaller
/// `|x|`; rows without a valid sample are skipped.
pub fn trace_main_lobe<T: Scalar>(map: &FieldMap<T>) -> Vec<LobePoint<T>> {
    let grid = &map.grid;
    let mut out = Vec::with_capacity(grid.nz());
    for jz in 0..grid.nz() {
        let mut best: Option<(T, T)> = None;
        for ix in 0..grid.nx() {
            let idx = grid.index(ix, jz);
            if !map.valid[idx] {
                continue;
            }
            let (p, x) = (map.power[idx], grid.x(ix));
            best = match best {
                Some((bp, bx)) if p < bp || (p == bp && x.abs() >= bx.abs()) => Some((bp, bx)),
                _ => Some((p, x)),
            };
        }
        if let Some((_, x_peak)) = best {
            out.push(LobePoint { z: grid.z(jz), x_peak });
        }
    }
    out
}

/// `2 L^2 / lambda`. Generic over any numeric type so exact rationals work.
pub fn fraunhofer_distance_of<T: Num + Copy>(aperture_m: T, wavelength_m: T) -> T {
    let two = T::one() + T::one();
    two * aperture_m * aperture_m / wavelength_m
}

/// Fraunhofer distance of the full aperture of `array`.
pub fn fraunhofer_distance<T: Scalar>(array: &UlaArray<T>, carrier: &CarrierConfig<T>) -> T {
    fraunhofer_distance_of(array.length(), carrier.wavelength_m())
}
