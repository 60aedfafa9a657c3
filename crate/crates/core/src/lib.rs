//! Exact positivity certificates for torus weight systems and incidence
//! verdicts for three orbit families: double-Borel orbits of square matrices,
//! orbits of Dynkin quiver representations, and contact orbits of weighted
//! homogeneous map germs.

pub mod exact;
pub mod weights;
pub mod schubert;
pub mod quiver;
pub mod germ;
pub mod report;
