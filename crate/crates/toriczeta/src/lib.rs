//! Exact zeta functions of projective toric hypersurfaces over finite
//! fields: point counting over the toric decomposition, numerator recovery,
//! regularity via graded dimension patterns, Hodge numbers of the interior
//! quotient, Newton-vs-Hodge polygon comparison, and the one-parameter
//! mirror family in every dimension the budget allows.

pub mod counting;
pub mod cy;
pub mod ff;
pub mod geometry;
pub mod koszul;
pub mod laurent;
pub mod linalg;
pub mod polygon;
pub mod series;
pub mod zeta;

pub use counting::{Budget, CountTable, CycloInt};
pub use ff::{FFElem, FieldTower};
pub use geometry::{newton_polytope, NewtonPolytope, SimplexGeometry};
pub use koszul::{GeneratorKind, HodgeData, Regularity, RegularityReport};
pub use laurent::{parse_laurent, LaurentPoly};
pub use polygon::Polygon;
pub use zeta::{analyze, Analysis, AnalyzeConfig, PipelineError, ZetaReport};
