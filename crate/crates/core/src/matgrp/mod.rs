//! Matrices over finite fields and the groups GL(n,q), SL(n,q).

mod group;
mod invariants;
mod matrix;
mod schreier;

pub use group::{
    collect_elements, decode_vector, encode_vector, for_each_element, generated_group_order, group_order,
    par_fold_group, random_element, standard_generators, GroupHandle, GroupKind,
};
pub use invariants::{
    element_order_direct, element_order_formula, gl_exponent, invariant_factors, p_power_at_least,
    projective_order, support, support_from, InvariantFactorData, OrderContext,
};
pub use matrix::Matrix;
pub use schreier::StabChain;
