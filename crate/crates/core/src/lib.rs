//! Exact commutative-algebra engine for computing canonical factorizations
//! of finite ring epimorphisms and the complexity of groupoids presented by
//! finite group(-scheme) actions on affine schemes.
//!
//! The layers, bottom up: exact polynomial arithmetic ([`poly`]), Gröbner
//! bases and module computations ([`groebner`], [`modules`], [`span`]),
//! finitely presented rings and ring maps ([`rings`]), canonical sequences
//! and effectivity ([`canseq`]), groupoid presentations and the complexity
//! invariant ([`groupoids`]), and equivariant modules with descent checks
//! ([`equivariant`]).

pub mod canseq;
pub mod equivariant;
pub mod error;
pub mod field;
pub mod groebner;
pub mod groupoids;
pub mod modules;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod rings;
pub mod span;

pub use error::{Error, Result};
pub use field::{Coeff, Field};
pub use groebner::{Budget, GroebnerBasis};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
