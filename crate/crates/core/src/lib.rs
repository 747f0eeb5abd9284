//! Exact-arithmetic toolkit for finite-dimensional Lie algebras over the
//! rationals: structure constants, the Killing form, root decompositions,
//! automorphisms and derivations, and certificates for 2-local
//! automorphisms that fail to be automorphisms.

pub mod algebra;
pub mod builders;
pub mod error;
pub mod forms;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod roots;
pub mod subspace;
pub mod twolocal;

pub use algebra::{Element, LieAlgebra};
pub use builders::{build_abelian, build_filiform, build_from_spec, build_heisenberg, build_sl};
pub use error::{LieError, Result};
pub use forms::KillingForm;
pub use io::{load_algebra, AlgebraDocument, SCHEMA_VERSION};
pub use linalg::{Matrix, Scalar};
pub use maps::LinearMap;
pub use roots::{Root, RootDatum};
pub use subspace::Subspace;
pub use twolocal::{
    certify_two_local, make_counterexample, make_counterexample_with, refute_automorphism, Certificate,
    CertificateDocument, CoordinateFn, CounterexampleSetup, PairSource, PairWitness, PointwiseMap, Verdict,
};
