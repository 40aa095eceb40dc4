//! Complex structures, CR-structures and normal almost contact structures
//! (nacs) on compact Lie groups, constructed from Abelian actions and
//! verified mechanically.
//!
//! The crate works at two levels:
//!
//! * **Lie-algebra level**, for the classical groups: structure constants,
//!   root-space decompositions, Borel subalgebras, the transversality
//!   conditions on a morphism matrix, and the assembly of the structure
//!   subalgebras `l` (and `l'` in the odd case) together with verifiers for
//!   every axiom they must satisfy.
//! * **Geometric level**, for SU(2)/SL(2,C): the action on `C^2 \ {0}`,
//!   analytic and sampled transversality, invariance and center-invariance
//!   checks, and the Iwasawa decomposition behind the fibration over `A`.
//!
//! Sweeps and sphere sampling are data-parallel via rayon under the default
//! `parallel` feature; disabling it yields a sequential build with identical
//! outputs.

pub mod acceptance;
pub mod algebra;
pub mod builder;
pub mod builtins;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod par;
pub mod pipeline;
pub mod report;
pub mod root;
pub mod subspace;
pub mod su2;
pub mod tol;
pub mod transversality;

pub use algebra::{AlgebraSpec, Element, Field, LieAlgebra};
pub use builder::{ProductMode, StructurePair};
pub use error::{Error, Result};
pub use report::{Check, VerificationReport};
pub use root::{CartanBorelData, Root};
pub use subspace::{SpanField, Subspace};
pub use tol::Tolerances;
pub use transversality::{ConditionReport, MorphismSpec};
