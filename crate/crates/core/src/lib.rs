//! Statistics of the fluctuating Beckmann fading model.
//!
//! The model describes a received radio signal built from μ clusters of
//! scattered waves whose in-phase/quadrature diffuse components may
//! carry unequal power (ratio η), with line-of-sight components that
//! may be imbalanced between the two axes (ratio ρ) and that fluctuate
//! with Nakagami-m severity. It contains the one-sided Gaussian,
//! Rayleigh, Nakagami-m, Hoyt, η-μ, Rice, η-κ, Beckmann, κ-μ, Rician
//! shadowed and κ-μ shadowed models as special cases.
//!
//! The crate provides:
//! - exact first-order statistics (MGF in closed form; PDF/CDF by
//!   numerical inversion of the MGF),
//! - second-order statistics (level crossing rate and average fade
//!   duration for the fully imbalanced LoS case ρ → ∞),
//! - symbol error probabilities for DBPSK and noncoherent M-FSK,
//! - a Monte Carlo engine that samples the generative physical model
//!   and estimates every analytic quantity empirically.
//!
//! A note on the Hoyt reduction: the in-phase/quadrature variance ratio
//! is used directly as the Hoyt parameter (η = q). Parts of the
//! literature write Hoyt's q for the amplitude ratio instead, i.e.
//! q² = η; callers translating published parameter sets should check
//! which convention their source uses.

// negated comparisons like !(x > 0.0) are deliberate: they reject NaN
// along with the out-of-domain sign
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// published coefficient tables are kept at their full printed precision
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod first_order;
pub mod laplace;
pub mod monte_carlo;
pub mod params;
pub mod perf;
pub mod quad;
pub mod second_order;
pub mod special;

pub use error::{FbError, Result};
pub use first_order::{
    cdf_envelope, cdf_snr, cdf_snr_grid, mgf, mgf_real, mgf_singularity,
    mgf_via_conditional_average, pdf_envelope, pdf_snr, pdf_snr_grid, phi2_series_oracle,
    EvalGrid, GridScale,
};
pub use laplace::{invert, InversionConfig};
pub use monte_carlo::{
    empirical_second_order, histogram_pdf, ks_statistic, sample_power, sample_snr, sample_trace,
    EmpiricalSecondOrder, FadingTrace, Histogram, RngSpec,
};
pub use params::{
    factorize, special_case, to_physical, to_physical_with_omega, to_shape, validate,
    MgfFactorization, PhysicalParams, ShapeParams, SpecialCase, M_LARGE,
};
pub use perf::{sep_dbpsk, sep_mfsk_noncoherent, SepQuery, SepScheme};
pub use second_order::{afd, lcr, Afd, DopplerContext, LcrConfig, QuadScheme};
