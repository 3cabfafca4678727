//! Exact Schur-Weyl outcome distributions for a Dicke state carrying an
//! attached bit-string.

mod cg;
mod params;
mod pmf;
mod spectrum;

pub use cg::{cg_squared, HalfInt};
pub use params::Params;
pub use pmf::{
    pmf, pmf_closed_kl, pmf_closed_kl_float, pmf_float, pmf_float_auto, pmf_float_with_cap,
    pmf_quantile, pmf_symmetry_pair, pmf_with_cap, support_max, ExactPmf, FloatPmf, CHEAP_TAG_LEN,
    EXACT_MAX_N, FLOAT_MAX_N,
};
pub use spectrum::{
    avg_entropy, avg_spectrum, dim_irrep, dim_irrep_hook, entropy_of_pmf, hs_epsilon_avg,
    ln_dim_irrep, ln_dim_irrep_exact, AvgSpectrum, SpectrumBlock,
};
