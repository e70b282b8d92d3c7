//! Counting apparatus for families of `1 × N` rectangles attached to the unit
//! intervals `I_i = [i − ½, i + ½)` of the diagonal: witness selection,
//! the direction classes `A₁, A₂, A₃`, the overlap functions `h_{l,k}` over
//! the unit squares `Q_j` centred at `j ∈ ℤ²`, and checks of their bounds.

mod count;
mod family;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use count::{
    cell_of, classify_directions, column_runs, gamma, gamma_len, h_function, h_profiles, h_profiles_csv, row_runs, verify_counting_bounds,
    CountingReport, DirectionClass, DirectionClasses, HProfile, StripViolation,
};
pub use family::{
    fan_family, interval, meets_interval, random_family, select_witness_family, select_witness_family_with, Member, WitnessFamily,
    VERIFY_SAMPLES,
};

#[derive(Debug, Error)]
pub enum CountingError {
    #[error("the maximal function vanishes on every interval")]
    EmptyFamily,
    #[error("invalid {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("member {i}: {reason}")]
    InvalidMember { i: i64, reason: &'static str },
    #[error(transparent)]
    Kakeya(#[from] bkm_kakeya::KakeyaError),
}

pub type Result<T> = std::result::Result<T, CountingError>;

/// Maxima over many seeded random families at one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressSummary {
    pub n: usize,
    pub families: usize,
    pub seed: u64,
    pub max_diag_ratio: f64,
    pub max_a3_ratio: f64,
    pub max_cross_ratio: f64,
    pub max_gamma: usize,
    pub gamma_bound_holds: bool,
    pub trivial_bound_holds: bool,
    pub strip_checks: usize,
    pub strip_violations: usize,
    pub strip_worst: f64,
    pub slanted_violations: usize,
}

/// The generator of family `index` under `seed`: one ChaCha stream per family.
pub fn family_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// [`verify_counting_bounds`] over `families` random families with indices
/// `−N..=N`.
pub fn counting_stress(n: usize, families: usize, seed: u64) -> Result<StressSummary> {
    let half = n as i64;
    let reports: Vec<CountingReport> = (0..families as u64)
        .into_par_iter()
        .map(|k| {
            let fam = random_family(n, -half..=half, &mut family_rng(seed, k))?;
            Ok(verify_counting_bounds(&fam))
        })
        .collect::<Result<_>>()?;
    let mut s = StressSummary {
        n,
        families,
        seed,
        max_diag_ratio: 0.0,
        max_a3_ratio: 0.0,
        max_cross_ratio: 0.0,
        max_gamma: 0,
        gamma_bound_holds: true,
        trivial_bound_holds: true,
        strip_checks: 0,
        strip_violations: 0,
        strip_worst: 0.0,
        slanted_violations: 0,
    };
    for r in &reports {
        s.max_diag_ratio = s.max_diag_ratio.max(r.diag_ratio);
        s.max_a3_ratio = s.max_a3_ratio.max(r.a3_ratio);
        s.max_cross_ratio = s.max_cross_ratio.max(r.cross_ratio);
        s.max_gamma = s.max_gamma.max(r.max_gamma);
        s.gamma_bound_holds &= r.gamma_bound_holds;
        s.trivial_bound_holds &= r.trivial_bound_holds;
        s.strip_checks += r.strip_checks;
        s.strip_violations += r.strip_violations.len();
        s.strip_worst = s.strip_worst.max(r.strip_worst);
        s.slanted_violations += r.slanted_violations;
    }
    Ok(s)
}
