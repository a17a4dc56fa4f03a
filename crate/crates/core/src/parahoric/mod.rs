//! Dual-number matrix groups, the fixed subgroups of the twisted involutions
//! on `SL_r(k[ε])`, and Pfaffian type vectors.

mod dual;
mod fiber;
mod pfaffian;

pub use dual::{
    alternating_involution, check_alternating_form, dn_det, dn_det_expansion, dn_mul, is_fixed_alternating,
    is_fixed_plus, is_fixed_unramified, plus_involution, DualNumberMatrix,
};
pub use fiber::{fiber_structure_check, FiberCase, FiberReport, ENUMERATION_LIMIT};
pub use pfaffian::{all_type_vectors, pfaffian, TypeVector};
