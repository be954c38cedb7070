pub mod arc;
pub mod domain;
pub mod mesh;
pub mod models;
pub mod premap;
pub mod schema;
pub(crate) mod spatial;

pub use arc::{ArcSegment, Orientation};
pub use domain::{
    make_domain, mark_boundary, shapes, BoundaryLoop, BoundaryPiece, DomainSpec, GammaInterval,
    MarkedDomain,
};
pub use mesh::{
    mesh_domain, mesh_with, BoundaryEdge, EdgeSource, EdgeTag, Grading, Mesh, MeshOptions,
    PlateCurve, PlateMap, Refinement, Rosette,
};
pub use models::{
    exterior, quarter_plane, strip, upper_half_plane, Compact, MappedRegion, ModelKind, Region,
};
pub use premap::{transfer_radius, MapStep, PreMap, SpherePoint};
