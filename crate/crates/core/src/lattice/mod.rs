//! Exact integer-matrix and finite-abelian-group algebra.
//!
//! Smith normal form with transforms, cokernels, endomorphisms of finite
//! abelian groups with their fixed points, Lang quotients `H/(φ−1)H`, norm
//! maps and character groups. Characters are never evaluated numerically:
//! they are index vectors paired in modular arithmetic.

mod abelian;
mod matrix;
mod snf;

pub use abelian::{
    characters, cokernel_torsion, fixed_point_order, lang_quotient, norm_endomorphism,
    AbelianEndomorphism, CharacterIndex, FiniteAbelianGroup, GroupElement,
};
pub(crate) use abelian::{bigint_mod, mixed_radix};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};
