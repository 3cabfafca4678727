//! Limit formulas for fixed attached strings and for linearly growing ones.
#![allow(non_snake_case)]

mod finite;
mod type1;
mod type2;

pub use finite::{clt_empirical_check, decohered_asymmetry, refined_residuals, CltRow};
pub use type1::{
    decohered_typeI, fig1_row, typeI_entropy_approx, typeI_expectation, typeI_logM, typeI_q_pmf,
    typeI_rate, Fig1Row, TypeIRatios,
};
pub use type2::{
    decohered_typeII, fig2_rows, nma_slice, refined_leading_profile, refined_log_profile,
    typeII_entropy_leading, typeII_logM, typeII_logM_sigma_divided, typeII_refined_constants,
    zmy_gap, Fig2Row, LeadingTerm, RefinedConstants, TypeIIBranch, TypeIIParams,
};
