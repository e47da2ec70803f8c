//! Binary quadratic forms of discriminant `l^2 - 4`, their `Gamma_0(N)`-classes and
//! the Epstein and level zeta functions built from them.

mod classes;
mod form;
mod reduce;
mod zeta;

pub use classes::{
    class_key, default_class_bound, double_coset_classes, enumerate_classes, ClassKey, ClassSet,
};
pub use form::{form_of_matrix, matrix_of_form, star_d, transform, QuadForm, UnimodularMatrix};
pub use reduce::{
    canonical_form, definite_stab_order, fundamental_unit, pell_min, reduce_definite,
    sl2_classes, sl2_stab_generator, stab_generator, stab_order_definite, PellSolution,
};
pub use zeta::{
    bessel_k, epstein_zeta_definite, epstein_zeta_fast, residue_epstein, theta_class_weight,
    zeta_level_residue, zeta_level_value, zeta_phi_d, zeta_phi_d_residue,
};
