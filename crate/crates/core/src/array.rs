//! Uniform linear array: carrier constants, element geometry and excitation.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Characteristic impedance of vacuum, CODATA 2018.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_668;

/// Physical constants of the carrier wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierConfig<T> {
    frequency_hz: T,
    wavelength_m: T,
    wavenumber: T,
    z0_impedance: T,
}

impl<T: Scalar> CarrierConfig<T> {
    /// Carrier with the frequency as the authoritative quantity.
    pub fn from_frequency(frequency_hz: T) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > T::zero()) {
            return Err(Error::invalid("frequency_hz", "must be finite and > 0"));
        }
        let wavelength_m = T::lit(SPEED_OF_LIGHT) / frequency_hz;
        Ok(Self::build(frequency_hz, wavelength_m))
    }

    /// Carrier with the wavelength as the authoritative quantity. The figure
    /// presets use this with exactly 2 mm so that `d = λ/2 = 1 mm` holds.
    pub fn from_wavelength(wavelength_m: T) -> Result<Self> {
        if !(wavelength_m.is_finite() && wavelength_m > T::zero()) {
            return Err(Error::invalid("wavelength_m", "must be finite and > 0"));
        }
        let frequency_hz = T::lit(SPEED_OF_LIGHT) / wavelength_m;
        Ok(Self::build(frequency_hz, wavelength_m))
    }

    fn build(frequency_hz: T, wavelength_m: T) -> Self {
        Self {
            frequency_hz,
            wavelength_m,
            wavenumber: T::TAU() / wavelength_m,
            z0_impedance: T::lit(FREE_SPACE_IMPEDANCE),
        }
    }

    pub fn frequency_hz(&self) -> T {
        self.frequency_hz
    }

    pub fn wavelength_m(&self) -> T {
        self.wavelength_m
    }

    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }

    pub fn z0_impedance(&self) -> T {
        self.z0_impedance
    }
}

/// Radiation pattern `U_n` of one element, evaluated per observation
/// direction. Angles are measured from the array normal (+z).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementPattern {
    #[default]
    Omnidirectional,
}

impl ElementPattern {
    /// Pattern value for a direction given by its sine and cosine.
    #[inline]
    pub fn response<T: Scalar>(&self, _sin_theta: T, _cos_theta: T) -> T {
        match self {
            ElementPattern::Omnidirectional => T::one(),
        }
    }

    /// True if the response is 1 in every direction.
    pub fn is_isotropic(&self) -> bool {
        matches!(self, ElementPattern::Omnidirectional)
    }
}

/// How element power is assigned across the active elements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerMode {
    /// Every active element radiates `P_n`; total power grows with the
    /// active count.
    #[default]
    PerElement,
    /// Weights are divided by `sqrt(active count)` so the total radiated
    /// power is `P_n` whatever the window.
    TotalNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UlaArray<T> {
    n_elements: usize,
    spacing_m: T,
    element_gain: T,
    element_pattern: ElementPattern,
    element_power_w: T,
}

impl<T: Scalar> UlaArray<T> {
    /// Omnidirectional unit-gain array with `P_n = 1 mW`.
    pub fn new(n_elements: usize, spacing_m: T) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::invalid("n_elements", "must be >= 1"));
        }
        if !(spacing_m.is_finite() && spacing_m > T::zero()) {
            return Err(Error::invalid("spacing_m", "must be finite and > 0"));
        }
        Ok(Self {
            n_elements,
            spacing_m,
            element_gain: T::one(),
            element_pattern: ElementPattern::Omnidirectional,
            element_power_w: T::lit(1e-3),
        })
    }

    pub fn with_element_power(mut self, power_w: T) -> Result<Self> {
        if !(power_w.is_finite() && power_w > T::zero()) {
            return Err(Error::invalid("element_power_w", "must be finite and > 0"));
        }
        self.element_power_w = power_w;
        Ok(self)
    }

    pub fn with_element_gain(mut self, gain: T) -> Result<Self> {
        if !(gain.is_finite() && gain > T::zero()) {
            return Err(Error::invalid("element_gain", "must be finite and > 0"));
        }
        self.element_gain = gain;
        Ok(self)
    }

    pub fn with_pattern(mut self, pattern: ElementPattern) -> Self {
        self.element_pattern = pattern;
        self
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing_m(&self) -> T {
        self.spacing_m
    }

    pub fn element_gain(&self) -> T {
        self.element_gain
    }

    pub fn element_pattern(&self) -> ElementPattern {
        self.element_pattern
    }

    pub fn element_power_w(&self) -> T {
        self.element_power_w
    }

    /// Aperture length `L_x = N_x d_x`.
    pub fn length(&self) -> T {
        T::from_count(self.n_elements) * self.spacing_m
    }

    /// Abscissa of the element with zero-based index `idx`.
    ///
    /// `(n - (N+1)/2)` is an exact half-integer, so mirrored elements have
    /// bit-identical magnitudes.
    #[inline]
    pub fn position(&self, idx: usize) -> T {
        let offset = idx as f64 + 1.0 - (self.n_elements as f64 + 1.0) / 2.0;
        T::lit(offset) * self.spacing_m
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.n_elements).map(|i| self.position(i)).collect()
    }
}

/// Element abscissae `x_n = (n - (N_x+1)/2) d_x`, `n = 1..N_x`.
pub fn element_positions<T: Scalar>(array: &UlaArray<T>) -> Vec<T> {
    array.positions()
}

/// Unit-norm steering vector `(1/sqrt(N)) exp(j phi_n)`.
pub fn steering_vector<T: Scalar>(phases: &[T], n_elements: usize) -> Result<Vec<Complex<T>>> {
    if phases.len() != n_elements {
        return Err(Error::invalid(
            "phases",
            format!("expected {n_elements} phases, got {}", phases.len()),
        ));
    }
    if n_elements == 0 {
        return Err(Error::invalid("n_elements", "must be >= 1"));
    }
    if let Some(bad) = phases.iter().position(|p| !p.is_finite()) {
        return Err(Error::invalid("phases", format!("phase {bad} is not finite")));
    }
    let norm = T::from_count(n_elements).sqrt().recip();
    Ok(phases
        .iter()
        .map(|&p| Complex::from_polar(norm, p))
        .collect())
}

/// Closed interval of the aperture that is powered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveWindow<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> ActiveWindow<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid("window", "bounds must be finite"));
        }
        if lo >= hi {
            return Err(Error::invalid("window", "lower bound must be below upper bound"));
        }
        Ok(Self { lo, hi })
    }

    /// The full physical aperture of `array`.
    pub fn full(array: &UlaArray<T>) -> Self {
        let half = array.length() / T::lit(2.0);
        Self { lo: -half, hi: half }
    }

    #[inline]
    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Complex weights applied to each element.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayExcitation<T> {
    weights: Vec<Complex<T>>,
    active_mask: Vec<bool>,
}

impl<T: Scalar> ArrayExcitation<T> {
    pub fn weights(&self) -> &[Complex<T>] {
        &self.weights
    }

    pub fn active_mask(&self) -> &[bool] {
        &self.active_mask
    }

    pub fn active_count(&self) -> usize {
        self.active_mask.iter().filter(|&&a| a).count()
    }

    /// Sum of `|w|^2` over the elements, i.e. the total radiated power.
    pub fn radiated_power(&self) -> T {
        self.weights
            .iter()
            .fold(T::zero(), |acc, w| acc + w.norm_sqr())
    }

    /// Same excitation with every weight scaled by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            weights: self.weights.iter().map(|w| w * factor).collect(),
            active_mask: self.active_mask.clone(),
        }
    }

    /// Builds an excitation from explicit per-element weights. Elements with
    /// a zero weight are inactive.
    pub fn from_weights(weights: Vec<Complex<T>>) -> Result<Self> {
        if weights.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
            return Err(Error::invalid("weights", "all weights must be finite"));
        }
        let active_mask = weights.iter().map(|w| !w.is_zero()).collect::<Vec<_>>();
        if !active_mask.iter().any(|&a| a) {
            return Err(Error::invalid("weights", "at least one weight must be non-zero"));
        }
        Ok(Self {
            weights,
            active_mask,
        })
    }
}

/// Drives the elements inside `window` with `sqrt(P_n) exp(j phi(x_n))`.
///
/// Elements outside the window get an exact zero weight. An empty active set
/// is an error rather than a silent all-zero excitation.
pub fn build_excitation<T, F>(
    array: &UlaArray<T>,
    phase_profile: F,
    window: ActiveWindow<T>,
    mode: PowerMode,
) -> Result<ArrayExcitation<T>>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let positions = array.positions();
    let active_mask: Vec<bool> = positions.iter().map(|&x| window.contains(x)).collect();
    let active = active_mask.iter().filter(|&&a| a).count();
    if active == 0 {
        return Err(Error::EmptyActiveSet {
            lo: window.lo.as_f64(),
            hi: window.hi.as_f64(),
        });
    }

    let mut amplitude = array.element_power_w().sqrt();
    if mode == PowerMode::TotalNormalized {
        amplitude = amplitude / T::from_count(active).sqrt();
    }

    let mut weights = Vec::with_capacity(positions.len());
    for (&x, &on) in positions.iter().zip(&active_mask) {
        if on {
            let phi = phase_profile(x)?;
            weights.push(Complex::from_polar(amplitude, phi));
        } else {
            weights.push(Complex::zero());
        }
    }
    Ok(ArrayExcitation {
        weights,
        active_mask,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_array() -> UlaArray<f64> {
        UlaArray::new(1000, 1e-3).unwrap()
    }

    #[test]
    fn carrier_from_wavelength_is_exact() {
        let c = CarrierConfig::from_wavelength(2e-3).unwrap();
        assert_eq!(c.wavelength_m(), 2e-3);
        assert_relative_eq!(c.wavenumber(), std::f64::consts::PI / 1e-3, max_relative = 1e-15);
        assert_relative_eq!(c.z0_impedance(), 376.730, epsilon = 1e-3);
    }

    #[test]
    fn carrier_from_frequency_uses_exact_light_speed() {
        let c = CarrierConfig::from_frequency(150e9).unwrap();
        assert_relative_eq!(c.wavelength_m(), 1.998_616_386_666e-3, max_relative = 1e-12);
        assert!(CarrierConfig::from_frequency(0.0).is_err());
        assert!(CarrierConfig::<f64>::from_wavelength(f64::NAN).is_err());
    }

    #[test]
    fn rejects_degenerate_arrays() {
        assert!(UlaArray::new(0, 1e-3).is_err());
        assert!(UlaArray::new(4, 0.0).is_err());
        assert!(UlaArray::new(4, -1e-3).is_err());
        assert!(UlaArray::new(4, 1e-3).unwrap().with_element_power(0.0).is_err());
    }

    #[test]
    fn positions_of_the_reference_array() {
        let xs = element_positions(&reference_array());
        assert_relative_eq!(xs[0], -0.4995, max_relative = 1e-14);
        assert_relative_eq!(xs[999], 0.4995, max_relative = 1e-14);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(reference_array().length(), 1.0);
    }

    #[test]
    fn single_and_three_element_positions() {
        assert_eq!(element_positions(&UlaArray::new(1, 0.37).unwrap()), vec![0.0]);
        let xs = element_positions(&UlaArray::new(3, 2e-3).unwrap());
        assert_eq!(xs, vec![-0.002, 0.0, 0.002]);
    }

    #[test]
    fn broadside_steering_vector() {
        let a = steering_vector(&[0.0; 4], 4).unwrap();
        for w in a {
            assert_eq!(w, Complex::new(0.5, 0.0));
        }
    }

    #[test]
    fn steering_vector_rejects_bad_input() {
        assert!(steering_vector(&[0.0, f64::INFINITY], 2).is_err());
        assert!(steering_vector(&[0.0, 1.0], 3).is_err());
    }

    #[test]
    fn half_window_activates_half_the_array() {
        let array = reference_array();
        let ex = build_excitation(
            &array,
            |_| Ok(0.0),
            ActiveWindow::new(-0.5, 0.0).unwrap(),
            PowerMode::PerElement,
        )
        .unwrap();
        assert_eq!(ex.active_count(), 500);
        let xs = array.positions();
        for (x, on) in xs.iter().zip(ex.active_mask()) {
            assert_eq!(*on, *x <= -0.0005 + 1e-12);
        }
    }

    #[test]
    fn full_window_activates_everything() {
        let array = reference_array();
        let ex = build_excitation(
            &array,
            |_| Ok(0.0),
            ActiveWindow::new(-0.5, 0.5).unwrap(),
            PowerMode::PerElement,
        )
        .unwrap();
        assert_eq!(ex.active_count(), 1000);
    }

    #[test]
    fn window_between_grid_points_is_an_error() {
        let err = build_excitation(
            &reference_array(),
            |_| Ok(0.0),
            ActiveWindow::new(0.4990, 0.4991).unwrap(),
            PowerMode::PerElement,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyActiveSet { .. }));
    }

    #[test]
    fn inactive_weights_are_exactly_zero_and_active_have_equal_magnitude() {
        let array = reference_array();
        let ex = build_excitation(
            &array,
            |x| Ok(1e3 * x * x),
            ActiveWindow::new(-0.2, 0.1).unwrap(),
            PowerMode::PerElement,
        )
        .unwrap();
        let amp = 1e-3f64.sqrt();
        for (w, on) in ex.weights().iter().zip(ex.active_mask()) {
            if *on {
                assert_relative_eq!(w.norm(), amp, max_relative = 1e-14);
            } else {
                assert_eq!(*w, Complex::zero());
            }
        }
    }

    #[test]
    fn total_normalized_mode_radiates_one_element_power() {
        let ex = build_excitation(
            &reference_array(),
            |_| Ok(0.3),
            ActiveWindow::new(-0.5, 0.0).unwrap(),
            PowerMode::TotalNormalized,
        )
        .unwrap();
        assert_relative_eq!(ex.radiated_power(), 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn phase_errors_propagate() {
        let err = build_excitation(
            &reference_array(),
            |x| {
                if x > 0.0 {
                    Err(Error::ZeroCurvature)
                } else {
                    Ok(0.0)
                }
            },
            ActiveWindow::new(-0.5, 0.5).unwrap(),
            PowerMode::PerElement,
        );
        assert_eq!(err.unwrap_err(), Error::ZeroCurvature);
    }

    #[test]
    fn works_in_single_precision() {
        let array = UlaArray::<f32>::new(8, 1e-3).unwrap();
        let xs = array.positions();
        assert_eq!(xs[0], -xs[7]);
        let sv = steering_vector(&[0.1f32; 8], 8).unwrap();
        let n: f32 = sv.iter().map(|w| w.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn positions_are_mirror_symmetric(n in 1usize..2000, d in 1e-4f64..1e-1) {
                let xs = UlaArray::new(n, d).unwrap().positions();
                let mirrored: Vec<f64> = xs.iter().rev().map(|x| -x).collect();
                prop_assert_eq!(xs, mirrored);
            }

            #[test]
            fn steering_vector_has_unit_norm(phases in prop::collection::vec(-1e4f64..1e4, 1..600)) {
                let n = phases.len();
                let sv = steering_vector(&phases, n).unwrap();
                let norm = sv.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!((norm - 1.0).abs() <= 1e-12);
            }

            #[test]
            fn active_power_accounting(lo in -0.5f64..0.4, width in 0.01f64..1.0, p in 1e-6f64..1.0) {
                let array = UlaArray::new(200, 5e-3).unwrap().with_element_power(p).unwrap();
                let window = ActiveWindow::new(lo, lo + width).unwrap();
                if let Ok(ex) = build_excitation(&array, |x| Ok(7.0 * x), window, PowerMode::PerElement) {
                    let expected = ex.active_count() as f64 * p;
                    prop_assert!((ex.radiated_power() - expected).abs() <= 1e-12 * expected);
                }
            }
        }
    }
}
