//! Explicit matrix realizations of `SL_n(q)` and `Sp_{2m}(q)`: enumeration,
//! conjugacy classes, centers and automorphisms.

pub mod field;
mod group;

pub use field::FqContext;
pub use group::{
    build_group, ClassData, GroupAutomorphism, GroupExport, Mat, MatGroup, DEFAULT_MAX_GROUP_ORDER,
    MAX_DEGREE,
};
