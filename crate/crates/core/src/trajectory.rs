//! Parabolic caustic design.
//!
//! A bending beam is specified by the parabola `x = x0 + beta (z - z0)^2`
//! that its main lobe should follow. The input phase profile that makes all
//! geometric rays tangent to that parabola is
//!
//! ```text
//! phi(x) = 2 beta k z0 x + (4/3) beta^2 k (z0^2 + (x0 - x)/beta)^(3/2)
//! ```
//!
//! which is real only on one side of `x0C = x0 + beta z0^2`, the point where
//! the caustic meets the array axis. Negative curvatures are handled by
//! reflecting the geometry through `x = 0`.

use crate::array::{build_excitation, ActiveWindow, ArrayExcitation, CarrierConfig, PowerMode, UlaArray};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryParams<T> {
    beta: T,
    x0: T,
    z0: T,
}

impl<T: Scalar> TrajectoryParams<T> {
    /// Parabola with curvature `beta` (1/m) and vertex `(x0, z0)`.
    ///
    /// `beta = 0` is accepted and denotes the unbent broadside beam.
    pub fn new(beta: T, x0: T, z0: T) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if !x0.is_finite() {
            return Err(Error::invalid("x0", "must be finite"));
        }
        if !(z0.is_finite() && z0 > T::zero()) {
            return Err(Error::invalid("z0", "must be finite and > 0"));
        }
        Ok(Self { beta, x0, z0 })
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn x0(&self) -> T {
        self.x0
    }

    pub fn z0(&self) -> T {
        self.z0
    }

    /// Where the caustic crosses the array axis.
    pub fn x0c(&self) -> T {
        self.x0 + self.beta * self.z0 * self.z0
    }

    /// Where the outermost ray leaves the aperture of length `aperture_m`.
    pub fn x0t(&self, aperture_m: T) -> T {
        let half = aperture_m / T::lit(2.0);
        if self.beta < T::zero() {
            half
        } else {
            -half
        }
    }

    /// The same trajectory reflected through `x = 0`.
    pub fn mirrored(&self) -> Self {
        Self {
            beta: -self.beta,
            x0: -self.x0,
            z0: self.z0,
        }
    }

    /// Caustic abscissa at range `z`.
    pub fn caustic_x(&self, z: T) -> T {
        let dz = z - self.z0;
        self.x0 + self.beta * dz * dz
    }

    /// Input phase (rad) at aperture abscissa `x`.
    pub fn phase(&self, carrier: &CarrierConfig<T>, x: T) -> Result<T> {
        if self.beta == T::zero() {
            return Ok(T::zero());
        }
        if self.beta < T::zero() {
            return self
                .mirrored()
                .positive_phase(carrier, -x)
                .map_err(|_| self.domain_error(x));
        }
        self.positive_phase(carrier, x)
            .map_err(|_| self.domain_error(x))
    }

    fn domain_error(&self, x: T) -> Error {
        Error::OutsidePhaseDomain {
            x: x.as_f64(),
            bound: self.x0c().as_f64(),
            side: if self.beta < T::zero() { ">=" } else { "<=" },
        }
    }

    // beta > 0 orientation. The radicand is snapped to zero within a few ulps
    // of the domain edge so that phi(x0C) is exactly the linear term.
    fn positive_phase(&self, carrier: &CarrierConfig<T>, x: T) -> std::result::Result<T, ()> {
        let k = carrier.wavenumber();
        let beta = self.beta;
        let z0_sq = self.z0 * self.z0;
        let shift = (self.x0 - x) / beta;
        let mut radicand = z0_sq + shift;
        let tol = T::lit(16.0) * T::epsilon() * (z0_sq + shift.abs());
        if radicand.abs() <= tol {
            radicand = T::zero();
        } else if radicand < T::zero() || !radicand.is_finite() {
            return Err(());
        }
        let linear = T::lit(2.0) * beta * k * self.z0 * x;
        let cubic = T::lit(4.0 / 3.0) * beta * beta * k * radicand * radicand.sqrt();
        Ok(linear + cubic)
    }
}

/// `x0 + beta (z - z0)^2`.
pub fn caustic_x<T: Scalar>(params: &TrajectoryParams<T>, z: T) -> T {
    params.caustic_x(z)
}

/// Input phase profile realising `params`; errors outside the real domain.
pub fn phase_profile<T: Scalar>(params: &TrajectoryParams<T>, carrier: &CarrierConfig<T>, x: T) -> Result<T> {
    params.phase(carrier, x)
}

/// Single-antenna receiver position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxLocation<T> {
    pub x: T,
    pub z: T,
}

impl<T: Scalar> RxLocation<T> {
    pub fn new(x: T, z: T) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::invalid("x_rx", "must be finite"));
        }
        if !(z.is_finite() && z > T::zero()) {
            return Err(Error::invalid("z_rx", "must be finite and > 0"));
        }
        Ok(Self { x, z })
    }
}

/// Vertex of the parabola that leaves the array at `x0c` and passes through
/// the receiver.
///
/// The two pass-through conditions are linear in `z0` once the `z0^2` terms
/// cancel, so the solution is unique.
pub fn design_from_rx<T: Scalar>(rx: RxLocation<T>, beta: T, x0c: T) -> Result<TrajectoryParams<T>> {
    if !beta.is_finite() {
        return Err(Error::invalid("beta", "must be finite"));
    }
    if !x0c.is_finite() {
        return Err(Error::invalid("x0c", "must be finite"));
    }
    if beta == T::zero() {
        return Err(Error::ZeroCurvature);
    }
    if beta < T::zero() {
        let mirrored_rx = RxLocation { x: -rx.x, z: rx.z };
        return design_from_rx(mirrored_rx, -beta, -x0c).map(|p| p.mirrored());
    }

    let two = T::lit(2.0);
    let (x_rx, z_rx) = (rx.x, rx.z);
    let bz2 = beta * z_rx * z_rx;
    let x0 = (two * x0c * (x_rx + bz2) - x0c * x0c - (x_rx - bz2) * (x_rx - bz2))
        / (T::lit(4.0) * bz2);
    let z0 = (bz2 + x0c - x_rx) / (two * z_rx * beta);
    if z0.is_nan() || z0 <= T::zero() {
        return Err(Error::VertexBehindArray { z0: z0.as_f64() });
    }
    TrajectoryParams::new(beta, x0, z0)
}

/// Portion of the aperture on which the phase profile is real, clamped to
/// the physical array.
pub fn active_window<T: Scalar>(params: &TrajectoryParams<T>, array: &UlaArray<T>) -> Result<ActiveWindow<T>> {
    let full = ActiveWindow::full(array);
    if params.beta() == T::zero() {
        return Ok(full);
    }
    let x0c = params.x0c();
    let (lo, hi) = if params.beta() > T::zero() {
        (full.lo, x0c.min(full.hi))
    } else {
        (x0c.max(full.lo), full.hi)
    };
    if lo >= hi {
        return Err(Error::EmptyActiveSet {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    ActiveWindow::new(lo, hi)
}

/// What the transmitter radiates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamSpec<T> {
    /// Bending beam following the given caustic.
    Bending(TrajectoryParams<T>),
    /// Conventional beamforming baseline: `phi = 0` over the whole array.
    Broadside,
}

impl<T: Scalar> BeamSpec<T> {
    pub fn window(&self, array: &UlaArray<T>) -> Result<ActiveWindow<T>> {
        match self {
            BeamSpec::Bending(p) => active_window(p, array),
            BeamSpec::Broadside => Ok(ActiveWindow::full(array)),
        }
    }

    pub fn phase(&self, carrier: &CarrierConfig<T>, x: T) -> Result<T> {
        match self {
            BeamSpec::Bending(p) => p.phase(carrier, x),
            BeamSpec::Broadside => Ok(T::zero()),
        }
    }

    pub fn excitation(
        &self,
        array: &UlaArray<T>,
        carrier: &CarrierConfig<T>,
        mode: PowerMode,
    ) -> Result<ArrayExcitation<T>> {
        let window = self.window(array)?;
        build_excitation(array, |x| self.phase(carrier, x), window, mode)
    }

    pub fn trajectory(&self) -> Option<&TrajectoryParams<T>> {
        match self {
            BeamSpec::Bending(p) => Some(p),
            BeamSpec::Broadside => None,
        }
    }

    pub fn beta(&self) -> T {
        self.trajectory().map_or(T::zero(), |p| p.beta())
    }
}
