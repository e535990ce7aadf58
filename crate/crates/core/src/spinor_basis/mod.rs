//! 2(2s+1)-component spinor orbitals built from scalar ETO/STO factors with
//! Clebsch–Gordan weighted upper and lower blocks.

mod assemble;
mod qn;

pub use assemble::{
    assemble_spinor, contract, eval_spinor, eval_spinor_by_components, spinor_coefficient, Block, ComponentDescriptor,
    ComponentWeight, SpinorDescriptor, SpinorOrbital, DESCRIPTOR_TOLERANCE,
};
pub(crate) use assemble::check_compatible;
pub use qn::{Sign, SpinorQN};
