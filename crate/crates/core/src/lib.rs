//! Lipschitz and Hölder analysis on finite pointed metric spaces, and
//! little-Hölder approximation with numerically certified bounds.
//!
//! - [`metric`]: validated distance matrices, snowflake metrics, greedy nets.
//! - [`lip`]: exact Lipschitz constants, difference-quotient transform,
//!   flatness profiles.
//! - [`cone`]: cone-max interpolants with constant at most `1 + 1/n` and the
//!   pointwise-approximating sequence built from them.
//! - [`bernstein`]: Bernstein polynomials on `[0,1]`.
//! - [`fejer`]: Fejér kernel and Fejér means on the circle.
//!
//! Pair scans and per-index pipelines run on rayon when the `parallel`
//! feature is enabled (default); see [`par::Execution`].

pub mod bernstein;
pub mod cone;
pub mod error;
pub mod fejer;
pub mod lip;
pub mod metric;
pub mod par;
pub mod trace;

pub use bernstein::{bernstein_density_check, BernsteinApproximant, IntervalFunction};
pub use cone::{
    cone_interpolant, cone_params, lemma_map, little_approx_sequence, min_value_lemma,
    ApproxSequence, ConeApproximant, ConeParams,
};
pub use error::{Error, Result};
pub use fejer::{
    fejer_convolution, fejer_density_check, fejer_kernel, fejer_mean, fourier_coeffs, FejerMean,
    TorusFunction, TorusGrid,
};
pub use lip::{de_leeuw, flatness_profile, lip_constant, sup_distance, FlatnessProfile, SampledFunction};
pub use metric::{NetCover, PointedMetricSpace, SpaceFile};
pub use par::Execution;
pub use trace::{Check, Construction, ConvergenceTrace, TraceRow};
