#![allow(dead_code)]

use bendbeam::{CarrierConfig, PowerMode, Transmitter, UlaArray};

pub const WAVELENGTH: f64 = 2e-3;

pub fn carrier() -> CarrierConfig {
    CarrierConfig::from_wavelength(WAVELENGTH).unwrap()
}

pub fn ula(n: usize) -> UlaArray {
    UlaArray::new(n, 1e-3).unwrap().with_element_power(1e-3).unwrap()
}

pub fn transmitter(n: usize) -> Transmitter {
    Transmitter::new(carrier(), ula(n), PowerMode::PerElement)
}

/// Prints one verdict line and fails the test when `pass` is false.
pub fn verdict(id: &str, what: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {id} {what}: {detail}");
    assert!(pass, "{id} {what}: {detail}");
}

/// `(beta_min, beta_max, step)` inclusive, on a decimal-exact lattice.
pub fn beta_range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect()
}
