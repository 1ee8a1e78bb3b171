//! Exact machinery for hyperplane-arrangement Milnor fibers at desk scale:
//! matroids and their Bergman fans, initial degenerations of the fiber ideal,
//! and finite-field point counts with independent cross-checks.
//!
//! Everything numeric is an arbitrary-precision rational or a residue mod a
//! small prime. The crate is split along the pipeline:
//!
//! * [`matroid`]: bases, circuits, flats, weight matroids, characteristic
//!   polynomial.
//! * [`qmat`], [`rat`], [`fp`], [`zlattice`]: exact linear algebra over the
//!   rationals, prime fields, and integer lattices.
//! * [`arrangement`]: rational realizations, circuit forms, the Milnor-fiber
//!   generator set, and initial degenerations.
//! * [`laurent`], [`groebner`]: Laurent polynomials, initial forms, and
//!   membership certificates.
//! * [`fan`]: the fine fan structure on the tropical support, cone bases,
//!   monomial shifts, and orbit generators.
//! * [`complex`]: order complexes of flat lattices and exact rational
//!   homology.
//! * [`counting`]: torus point counts, stratum tables with two independent
//!   routes, divisibility laws, and interpolation of count polynomials.
//! * [`family`]: one-parameter families sampled over prime fields.

pub mod arrangement;
pub mod complex;
pub mod counting;
pub mod family;
pub mod fan;
pub mod fp;
pub mod groebner;
pub mod laurent;
pub mod mask;
pub mod matroid;
pub mod qmat;
pub mod rat;
pub mod zlattice;

pub use arrangement::{realize, ArrangementError, Realization};
pub use complex::{
    irreducibility_witness, order_complex, wedge_check, ComplexError, SimplicialComplex,
    WedgeReport,
};
pub use counting::{
    complement_count, count_solutions, epoly_interpolate, milnor_count, milnor_count_unchecked,
    mu_action_divisibility, stratum_table, verify_initial_at, CountError, EPolyResult,
    InitialCase, PointCountReport, DEFAULT_BUDGET,
};
pub use family::{family_counts, invariance_harness, FamilyError, FamilyReport, FamilySpec};
pub use fan::{fine_fan, BergmanFan, FanError, FlagCone};
pub use laurent::LaurentPoly;
pub use mask::{Mask, MAX_GROUND};
pub use matroid::{CharPoly, Matroid, MatroidError, Weight};
pub use qmat::QMat;
pub use rat::Rat;
