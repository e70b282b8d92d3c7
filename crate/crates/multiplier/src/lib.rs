//! Bilinear Fourier multipliers `T_m(f,g)(x) = ∬ m(ξ,η) f̂(ξ) ĝ(η) e^{2πix(ξ+η)}`
//! on sampled functions: an FFT pipeline with anti-diagonal reduction, a
//! direct quadrature reference, Bochner–Riesz symbols over convex domains,
//! the subordination formula and the dyadic decomposition of `(1 − ρ)^λ_+`.

mod error;
mod kernel;
mod plan;
mod subordination;
mod symbol;

use bkm_convex::ConvexDomain;
use bkm_grid::SampledFunction;

pub use error::MultiplierError;
pub use kernel::{inverse_transform_2d, kernel_l1_norm, kernel_l1_profile, KernelGrid};
pub use plan::{apply_bilinear_multiplier, apply_with_cache, quadrature_oracle, FrequencyPlan};
pub use rustfft::num_complex::Complex64;
pub use subordination::{integrate, subordination_reconstruct, ScalarProfile};
pub use symbol::{dyadic_decomposition, dyadic_reconstruct, inner_cutoff, lp_bump, radial_bump, smooth_step, MultiplierSymbol};

pub type Result<T> = std::result::Result<T, MultiplierError>;

/// `B^λ_{Ω,R}(f, g)`: the multiplier `(1 − ρ_Ω(ξ/R, η/R))^λ_+`.
pub fn bochner_riesz_apply(domain: &ConvexDomain, lambda: f64, r: f64, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    apply_bilinear_multiplier(&MultiplierSymbol::bochner_riesz(domain, lambda, r)?, f, g)
}
