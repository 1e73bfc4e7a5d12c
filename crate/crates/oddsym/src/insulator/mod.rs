//! Tight-binding models with odd time-reversal symmetry, Fermi projections,
//! the Dirac-phase operator `T_P = PFP + (1−P)`, its ℤ₂-index, Riesz
//! (spin) splittings and spin Chern numbers, with a momentum-space
//! plaquette oracle on clean torus models.
//!
//! The concrete lattice conventions (honeycomb geometry, spin-orbit
//! chirality, Rashba form, Dirac-phase coordinates) are pinned in the
//! repository's `MODEL.md` data sheet.

mod bloch;
mod index;
mod model;

pub use bloch::{chern_plaquette, occupied_frames, spin_sector_frames, BlochFrames};
pub use index::{
    ind2_pair_count, ind2_tp, riesz_split, spin_chern, spin_chern_realspace, theorem11_check,
    tp_operator, tp_regularized, ChernMethod, ImplicationVerdict, RieszSplit, SpinChernEstimate,
    Theorem11Report, DEFAULT_TP_REL_TOL,
};
pub use model::{
    build_kane_mele, fermi_projection, spin_z_fiber, BoundaryCondition, FermiData, KaneMeleParams,
    LatticeModel,
};
