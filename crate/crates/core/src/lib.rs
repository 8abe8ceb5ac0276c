//! Exact symbolic workbench for extended derivations of polynomial rings.
//!
//! The crate builds derivations `d_n = d_i + g_i(x_i) d/dx_{i+1} + ... +
//! g_{n-1}(x_{n-1}) d/dx_n` over `Q[x_1, ..., x_n]`, decides the
//! exponent-matrix cone condition exactly, runs bounded-degree oracles for
//! the image and simplicity hypotheses, and enumerates commuting triangular
//! automorphisms, feeding everything into a classification report with an
//! explicit trust level per ingredient.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals,
//! cone feasibility runs Fourier-Motzkin elimination over `Q`, and the
//! linear oracles use fraction-free elimination. All values are immutable
//! after construction and all operations are pure.

pub mod deriv;
pub mod engine;
pub mod isotropy;
pub mod linalg;
pub mod poly;
pub mod starcone;

pub use deriv::{restricts_to, ChainError, DegreeCap, DerivError, Derivation, ExtensionChain};
pub use engine::{
    classify, family_cor211, family_cor212, family_cor29, shamsuddin_extend_simple, Assertion,
    BaseFlags, Certification, CertificationLevel, ClassificationReport, DeskBounds, EngineError,
    FamilyChain, FamilyError, HypothesisKind, HypothesisStatus, IsotropyConclusion, Outcome,
    SimplicityConclusion,
};
pub use isotropy::{
    commute_check, enumerate_commuting_triangular, translation_family_check, CommuteReport,
    MapError, PolyMap, TriangularMap,
};
pub use linalg::{
    image_membership, kernel_into_subring, shamsuddin_obstruction, solve_linear, solve_raw,
    subring_image_scan, LinearSolution, LinearSystem, MonomialBasis, OracleError, OracleStatus,
    OracleVerdict,
};
pub use poly::{rat, ratio, Degree, Monomial, PolyError, Polynomial, Rational};
pub use starcone::{
    candidate_matrices, check_star, exists_star_matrix, ExponentMatrix, StarError, StarVerdict,
};
