//! Certified calculators for effective curve-graph and hyperbolic-geometry
//! bounds: arbitrary-precision interval arithmetic, a small expression
//! language with a nonnegativity certifier, normal-curve combinatorics on
//! triangulated surfaces, subsurface projections, and the constant ledger
//! plus bound evaluators built on top of them.

pub mod bounds;
pub mod certify;
pub mod curves;
pub mod dyadic;
pub mod expr;
pub mod hypgeom;
pub mod interval;
pub mod projection;
pub mod report;
