//! Čech complexes of finite covers, torus gerbe cocycles, equivariant
//! cohomology of finite group actions and central extensions.

pub mod cochain;
pub mod equivariant;
pub mod extension;
pub mod group;
pub mod nerve;
pub mod torus;

pub use cochain::{class_of, coboundary, cohomology, is_cocycle, trivialize, Cochain};
pub use equivariant::{equivariant_cohomology, EquivariantComplex, FiniteAction, DEFAULT_COMPLEX_CAP};
pub use extension::{central_extension_from_cocycle, CentralExtension, ExtensionInvariants, GroupCochain2};
pub use group::GroupTable;
pub use nerve::{nerve_of_cover, Nerve};
pub use torus::{
    class_matches_windings, gerbe_cocycle_from_level, is_weyl_equivariant, torus_log_cocycle, winding_cocycle, windings, CircleCover,
    TorusCoverModel,
};
