//! Minor kernels of graphs cellularly embedded on orientable surfaces.

pub mod area;
pub mod bigon;
pub mod cover;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod geodesic;
pub mod homotopy;
pub mod medial;
pub mod minor;
pub mod oracle;
pub mod quad;
pub mod spectrum;
pub mod surface;

pub use error::{Error, Result};
