//! The box `Pi(A)`, its planar projection, tilings of the zonogon and the
//! standard ways of building them.

mod construct;
mod enumerate;
mod lattice;
mod lift;
mod tiling;

pub use construct::{
    cube_faces, t_min, t_min_vertices, tiling_through_vertex, tiling_with_cube_faces, ArrangementOptions,
    ConstructError, CubeSide,
};
pub use enumerate::{enumerate_tilings, EnumerateError};
pub use lattice::{
    Edge, LatticePoint, PlanarPoint, Rhombus, SpecError, ZonogonSpec, MAX_DIRECTIONS, MAX_MULTIPLICITY,
};
pub use lift::{lift_decomposition, LiftError};
pub use tiling::{validate_tiling, Fan, Skeleton, Tiling, ValidationReport, Violation};
