//! Exact verification engine for the sphere-poset adjunction and the monadic
//! sphericalness criterion, over prime fields F_p.
//!
//! The crate is organized bottom-up:
//! - [`linalg`]: dense exact linear algebra over F_p
//! - [`complex`]: bounded chain complexes, chain maps, cones, homotopies
//! - [`poset`]: sphere posets, strict diagrams, homotopy (co)limits, the
//!   adjunction condition checks
//! - [`algebra`]: graded algebras, twist functors, the sphericalness verdict
//! - [`verifier`]: randomized scenario runners producing structured reports
//! - [`doc`]: JSON document formats for complexes, algebras, diagrams and
//!   reports

pub mod algebra;
pub mod complex;
pub mod doc;
pub mod error;
pub mod linalg;
pub mod poset;
pub mod verifier;

pub use algebra::{
    brute_force_isomorphic, count_idempotents, is_twist_autoequivalence, preset,
    spherical_verdict, twist_object, unit_commutation, GradedAlgebra, MonadPresentation,
    SphericalVerdict, TwistData,
};
pub use complex::{cone, homotopy_between, swap_iso, ChainComplex, ChainMap, Cone, Homotopy};
pub use error::{AlgebraViolation, Error, Result};
pub use linalg::{Matrix, PrimeField};
pub use poset::{
    check_24_condition1, check_24_condition2, cofibrant_replacement, counit_map, diagram_cone,
    diagram_fiber, fibrant_replacement, hocolim, hocolim_map, holim, holim_map, sphere_poset,
    sphere_twist, unit_map, DiagramMap, FinitePoset, PosetDiagram,
};
pub use verifier::{
    random_complex, random_diagram, run_counterexample, run_monad, run_sphere, run_twist_zeta,
    Check, Report, Scenario,
};
