//! Discrete spectrum, exceptional points, bound states and scattering for a
//! tight-binding chain with a three-site PT-symmetric defect: gain `ε₁ + iΓ`
//! at x = −1, `ε₀` at the centre and loss `ε₁ − iΓ` at x = +1.
//!
//! Solutions are parameterized by `λ = e^{ik}` with `E = −(λ + 1/λ)`. The
//! discrete states are the roots of a quartic in `λ`, and every wave
//! function is carried in closed form as a [`PiecewiseWave`].

pub mod bound;
pub mod exceptional;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod pt_scattering;
pub mod scattering;
pub mod spectrum;

pub use bound::{BoundError, BoundStateForm, PtNormRecord};
pub use exceptional::{EpError, EpKind, EpRecord};
pub use model::{
    ModelError, ModelParams, PiecewiseWave, PlaneWave, Sheet, SpectralPoint, StateClass,
};
pub use pt_scattering::{JostData, PtCurrentValue, PtScatteringError};
pub use scattering::{Direction, PerfectTransmissionSet, ScatteringError, ScatteringSolution};
pub use spectrum::{Axis, SpectrumError};
