//! Exact computations with equivariant motives, motivic vanishing cycles,
//! cyclic A∞-categories from quivers with potential, twisted objects,
//! orientation-data parities and quantum-torus series.

pub mod laurent;
pub mod motive;
pub mod vanishing;
pub mod ainfty;
pub mod twisted;
pub mod orientation;
pub mod dt;
pub mod coeff;
pub mod linalg;
pub mod poly;
