//! Near-field bending beams from a uniform linear array.
//!
//! The crate designs input phase profiles whose main lobe follows a parabolic
//! caustic, propagates the resulting field with a coherent point-source
//! model, and scores the beam's physical-layer security against line-of-sight
//! and area eavesdroppers.
//!
//! Every physics type is generic over a floating-point [`Scalar`]. The `f64`
//! aliases re-exported here are what the CLI and the golden outputs use.

pub mod array;
pub mod cli;
pub mod error;
pub mod export;
pub mod pls;
pub mod propagation;
pub mod scalar;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type CarrierConfig = array::CarrierConfig<f64>;
pub type UlaArray = array::UlaArray<f64>;
pub type ArrayExcitation = array::ArrayExcitation<f64>;
pub type ActiveWindow = array::ActiveWindow<f64>;
pub type TrajectoryParams = trajectory::TrajectoryParams<f64>;
pub type RxLocation = trajectory::RxLocation<f64>;
pub type BeamSpec = trajectory::BeamSpec<f64>;
pub type Point = propagation::Point<f64>;
pub type ObservationGrid = propagation::ObservationGrid<f64>;
pub type FieldMap = propagation::FieldMap<f64>;
pub type Radiator = propagation::Radiator<f64>;
pub type Transmitter = propagation::Transmitter<f64>;
pub type SecrecyScene = pls::SecrecyScene<f64>;
pub type DiskEveModel = pls::DiskEveModel<f64>;
pub type CoverageResult = pls::CoverageResult<f64>;

pub use array::{ElementPattern, PowerMode};
