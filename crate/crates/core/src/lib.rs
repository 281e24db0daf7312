//! Distance matrices of k-trees over their d-cliques, exact integer
//! invariants (Smith normal form, determinant), closed-form predictions,
//! and exhaustive verification sweeps over all non-isomorphic k-trees at
//! desk scale.
//!
//! The pieces fit together like this:
//!
//! * [`graph`] — simple graphs, fixed-size clique enumeration;
//! * [`canon`] — canonical forms used to deduplicate generated k-trees;
//! * [`ktree`] — the attachment construction, recognition, enumeration;
//! * [`distance`] — d-clique graphs, d-distance matrices by breadth-first
//!   search, and the attachment recursion that grows the same matrices;
//! * [`linalg`] — arbitrary-precision Smith normal form, Bareiss
//!   determinants, and the gcd-of-minors oracle;
//! * [`theory`] — the closed forms the invariants follow, witness matrices,
//!   and the elementary-operation reduction to arrow form;
//! * [`verify`] — sweep drivers producing machine- and human-readable
//!   reports;
//! * [`io`] — graph6, JSON, matrix text and CSV interchange.

pub mod canon;
pub mod distance;
pub mod error;
pub mod graph;
pub mod io;
pub mod ktree;
pub mod linalg;
pub mod pool;
pub mod theory;
pub mod verify;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use distance::{
    d_clique_graph, d_distance_matrix, extend_by_attachment, permutation_conjugate,
    recursive_distance_matrix, registry_distance_matrix, DCliqueGraph, DistanceMatrix,
};
pub use error::{Error, Result};
pub use graph::{enumerate_cliques, Clique, SimpleGraph, VertexId};
pub use ktree::{generate_all, is_ktree, AttachmentStep, KTree};
pub use linalg::{determinant, gcd_of_minors_snf, is_unimodular, snf, IntMatrix, SnfResult};
pub use theory::{
    arrow_matrix, bordered_matrix, bordered_snf, mk_matrix, mk_snf, pm_qm_matrices, predicted_det,
    predicted_snf, reduce_to_arrow, ArrowReduction, ElementaryOp, PredictedSpectrum,
};
pub use verify::{
    survey_snf, verify_equivalence, verify_theorem, EquivalenceReport, SurveyReport, TheoremReport,
};
