//! Finite fields GF(p^e), extension fields layered over them, and polynomials.

mod field;
mod poly;

pub use field::{field_of_order, make_field, Fe, Field, FieldSpec};
pub use poly::{enumerate_irreducibles, necklace_count, product_of_factors, Poly};
