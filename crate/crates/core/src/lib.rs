//! Exact-arithmetic workbench for the variety JorN5 of five-dimensional
//! nilpotent Jordan algebras: structure-constant catalog, orbit invariants,
//! degeneration curves, obstruction checks, and the dominance graph whose
//! root structure recovers the five irreducible components.
//!
//! All arithmetic is exact, over the field tower Q(i, sqrt(2)) and over
//! univariate rational functions in the curve parameter `t`. No floating
//! point is used anywhere.

pub mod catalog;
pub mod deform;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod runner;
pub mod scalar;
pub mod subspace;
pub mod tensor;

pub use catalog::{load_catalog, AlgebraId, Catalog, CatalogError};
pub use deform::{
    block_diagonal_curve, check_obstructions, derive_direct_sum_edge, load_curves,
    membership_edges, scaling_edge, verify_curve, verify_curve_with, CurveError, CurveReport,
    CurveSpec, CurvesFile, Edge, EdgeProvenance, ObstructionReport,
};
pub use graph::{
    assemble_graph, build_graph, edge_style, instance_nodes, node_closure_dim, profile_cache,
    rigidity_check, union_dimension, union_nodes, verify_all_curves, DominanceGraph, GraphError,
    RigidityEvidence, RigidityVerdict, RootExclusion,
};
pub use invariants::{invariant_profile, InvariantError, InvariantProfile};
pub use runner::{
    default_data_dir, parse_node_id, run_all, Discrepancy, RunConfig, RunReport, RunnerError,
    Stage, StageOutcome,
};
pub use scalar::{
    parse_const_expr, parse_scalar_expr, ratfunc_eval, ExactScalar, Poly, RatFunc, Rational,
    Scalar, ScalarError,
};
pub use subspace::{subspace_product, Subspace};
pub use tensor::{apply_basis_change, BasisChange, StructureTensor, TensorError};
