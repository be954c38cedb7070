pub mod export;
pub mod fem;
pub mod field;
pub mod linsys;

pub use export::{export_grid_csv, fmt_f64, read_dump, write_dump};
pub use fem::{assemble, solve_assembled, solve_mixed, Assembled, BoundaryData};
pub use field::{dirichlet_energy, evaluate, HarmonicField};
