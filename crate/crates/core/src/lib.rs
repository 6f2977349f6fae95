//! Exact computer algebra for curved algebras and matrix factorizations.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: scalars, graded polynomials, Gröbner bases, exact linear algebra.
//! * [`homcx`]: bounded complexes of free graded modules and their windowed cohomology.
//! * [`curved`]: curved algebras, curved modules, Koszul generators, support certificates.
//! * [`derham`]: twisted de Rham complexes, Milnor data, singular loci.
//! * [`localcoh`]: local cohomology along principal loci, smoothness decisions.
//! * [`hochschild`]: truncated Hochschild complexes, Connes' operator, the Chern character.
//! * [`workbench`]: scenario files, reports and golden comparison.

pub mod curved;
pub mod derham;
pub mod exactalg;
pub mod hochschild;
pub mod homcx;
pub mod localcoh;
pub mod workbench;

pub use exactalg::{
    Field, GroebnerBasis, IdealBasis, MonomialOrder, Poly, QuotientDimension, Ring, Scalar, Var,
};
pub use homcx::{CohomologyTable, FiniteComplex, FreeModule, Grading, ModuleMap};
