//! Finite neighborhood semantics for non-normal modal logic.
//!
//! Frames `(X, N)` over ground sets of up to 5 points, their complex
//! algebras, one-step axioms and the set functor `B_Ax` of Ax-subsets, the
//! frame/algebra duality with its morphism part, frame classes and their
//! correspondence with algebra inequalities, general frames with σ- and
//! π-extensions, and exhaustive countermodel search.
//!
//! ```
//! use nbhd::{dsl, duality, eval, Frame};
//!
//! let frame = Frame::from_masks(2, &[&[1, 3], &[0]]);
//! let alg = duality::complex_algebra(&frame);
//! let m = dsl::parse("@M").unwrap();
//! assert!(!eval::validates(&alg, &m).unwrap());
//! ```

pub mod error;
pub mod subset;
pub mod frame;
pub mod dsl;
pub mod eval;
pub mod functor;
pub mod duality;
pub mod genframe;
pub mod classes;
pub mod search;
pub mod cli;

pub use error::{Error, Result};
pub use frame::{Algebra, CompleteHom, Frame, FrameMorphism, Relation};
pub use subset::{Family, Subset};
