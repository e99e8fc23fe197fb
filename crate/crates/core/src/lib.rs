//! A desk-scale laboratory for equilibrium states of symbolic dynamics.
//!
//! The library builds equilibrium states of subshifts of finite type as
//! weighted empirical measures over (n, ε)-separated sets and verifies the
//! convex-duality machinery around them:
//!
//! - [`shiftspace`]: subshifts, eventually periodic points, Bowen
//!   distances, locally constant potentials, Birkhoff sums;
//! - [`separated`]: maximal and greedy (n, ε)-separated sets with
//!   certificates;
//! - [`pressure`]: log-domain partition sums and pressure estimates, with
//!   the exponential lower-bound certificate;
//! - [`oracle`]: exact ground truth from the block transfer matrix —
//!   pressure, Gibbs cylinder measures, the entropy identity;
//! - [`empirical`]: orbit averages, Birkhoff-exponential weights, the
//!   weighted empirical measures and their periodic-orbit variant;
//! - [`rate`]: the pressure-difference functional, its restricted convex
//!   conjugate, and the entropy-gap functional;
//! - [`ldp`]: deviation-mass experiments against the one-dimensional
//!   Legendre dual;
//! - [`markovdv`]: the finite-state continuous-time analog — twisted
//!   principal eigendata, occupation-time entropy, Feynman–Kac semigroups,
//!   the eigenfunction-conjugated chain, occupation-measure convergence.
//!
//! Numeric kernels are generic over the scalar (`f32`/`f64`) through
//! [`Real`]; the aliases below fix the default `f64` instantiation.

pub mod canned;
pub mod empirical;
pub mod error;
pub mod io;
pub mod ldp;
pub mod markovdv;
pub mod oracle;
pub mod pressure;
pub mod rate;
pub mod separated;
pub mod shiftspace;

mod linalg;
mod num;

pub use error::{Error, Result};
pub use num::Real;

/// Default-precision potential.
pub type Potential = shiftspace::LocallyConstantPotential<f64>;
/// Default-precision cylinder measure.
pub type Measure = empirical::CylinderMeasure<f64>;
/// Default-precision separated set.
pub type Separated = separated::SeparatedSet<f64>;
/// Default-precision weighted set.
pub type Weighted = empirical::WeightedSet<f64>;
/// Default-precision pressure estimate.
pub type Pressure = pressure::PressureEstimate<f64>;
/// Default-precision transfer eigendata.
pub type Transfer = oracle::TransferData<f64>;
/// Default-precision rate-functional result.
pub type Rate = rate::RateResult<f64>;
/// Default-precision deviation experiment.
pub type Ldp = ldp::LdpExperiment<f64>;
/// Default-precision Markov generator.
pub type Generator = markovdv::MarkovGenerator<f64>;
/// Default-precision twisted eigendata.
pub type Spectrum = markovdv::TwistedSpectrum<f64>;
