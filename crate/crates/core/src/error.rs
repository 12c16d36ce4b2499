use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the physics modules.
///
/// Values are carried as `f64` regardless of the scalar type used for the
/// computation so messages stay uniform.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("phase profile is not real-valued at x = {x} m (domain is x {side} {bound} m)")]
    OutsidePhaseDomain { x: f64, bound: f64, side: &'static str },

    #[error("no array element lies inside the window [{lo}, {hi}] m")]
    EmptyActiveSet { lo: f64, hi: f64 },

    #[error("beta = 0 has no bending design; use the broadside (phi = 0) beam instead")]
    ZeroCurvature,

    #[error("designed vertex z0 = {z0} m is not in front of the array (z0 must be > 0)")]
    VertexBehindArray { z0: f64 },

    #[error("observation point ({x}, {z}) m coincides with an array element")]
    ObservationOnElement { x: f64, z: f64 },

    #[error("field at the receiver ({x}, {z}) m is zero; power ratios are undefined")]
    NoPowerAtReceiver { x: f64, z: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short stable identifier used in CSV status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::OutsidePhaseDomain { .. } => "outside_phase_domain",
            Error::EmptyActiveSet { .. } => "empty_active_set",
            Error::ZeroCurvature => "zero_curvature",
            Error::VertexBehindArray { .. } => "vertex_behind_array",
            Error::ObservationOnElement { .. } => "observation_on_element",
            Error::NoPowerAtReceiver { .. } => "no_power_at_receiver",
        }
    }

    /// True for errors caused by out-of-range inputs rather than by the
    /// physics of a (valid) configuration.
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. })
    }
}
