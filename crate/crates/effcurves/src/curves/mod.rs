//! Combinatorial curves on surfaces: the exact slope model with the Farey
//! graph for sporadic surfaces, normal curves on triangulated surfaces,
//! geometric intersection numbers, and curve-graph distance oracles.

pub mod format;
pub mod graph;
pub mod normal;
pub mod position;
pub mod slope;
pub mod surface;

pub use format::{parse_record, surface_by_id, write_record, CurveRecord, FormatError};
pub use graph::{enumerate_normal_graph, enumerate_slope_graph, CurveGraphSlice, CurveVertex};
pub use normal::{isotopic, normal_intersection, normal_is_valid, CurveClass, NormalCurve, NormalError};
pub use position::{analyze, minimal_crossings, CurveSystem, PositionError, Strand};
pub use slope::{
    farey_distance, hempel_bound, length_intersection_bound, slope_intersection,
    slope_model_surface, slope_to_normal, slopes_up_to, FareyDistance, Slope, SlopeError,
    SporadicSurface,
};
pub use surface::{genus2_closed, Gluing, Side, SurfaceError, TriSurface};
