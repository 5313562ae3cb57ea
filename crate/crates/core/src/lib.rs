//! Exact arithmetic for odd unitary groups over commutative rings with a
//! pseudoinvolution: odd hyperbolic spaces, ESD transvections, and
//! Vaserstein-type matrices with elementary-word certificates.

pub mod error;
pub mod matrix;
pub mod report;
pub mod ring;
pub mod space;
pub mod transvection;
pub mod vaserstein;

pub use error::{Error, Result};
pub use matrix::{elem_matrix, word_product, ElemFactor, ElementaryWord, Matrix};
pub use report::{Check, Report};
pub use ring::{check_pseudoinvolution, check_pseudoinvolution_with, make_ring, Descriptor, Involution, Ring, Scalar};
pub use space::{build_psi_tilde, build_psi_tilde_prime, BasisLabel, BasisOrder, Blocks, HeisElem, SpaceConfig};
pub use transvection::{
    congruence_defect, congruent_mod_lmax, congruent_mod_lmax_exhaustive, epsilon, esd_matrix, esd_validate,
    isometry_check, root_transvection, t_minus1, t_plus1, TransvectionKind, TransvectionSpec,
};
pub use vaserstein::{
    build_alpha, build_beta, build_l, build_l_star, build_p, condition_d, condition_e, conj_l_to_transvection,
    conj_lstar_to_transvection, factor_l, factor_l_star, force_condition_d, force_condition_e,
    transvection_to_vaserstein, vaserstein_preimage, ConjugationKind, ConjugationResult, VVector,
};
