//! Independent brute-force verifiers for lifts, areas and crossing numbers.
//!
//! Nothing here touches the star-shaped cover or the area precomputation; lifted vertices
//! are named by group elements decided by Dehn's algorithm, or by an explicit unfolding
//! of the system of quads.

pub mod dehn;
pub mod disk;
pub mod lift;
pub mod spectra;

pub use dehn::Presentation;
pub use disk::UnfoldedDisk;
pub use lift::{oracle_contractible, oracle_signed_area, oracle_simple_lift};
pub use spectra::{medial_dual_walk, nu_of_graph, oracle_mu, oracle_nu, Bounded};
