//! Exact computation in Weyl algebras and their Ore fraction algebras.
//!
//! The layers, bottom to top:
//!
//! * [`scalar`] — exact field scalars: rationals and prime fields.
//! * [`linalg`] — exact linear algebra over those fields, with a certified
//!   multi-modular fast path for large rational systems.
//! * [`weyl`] — normal-ordered operators in the Weyl algebra `A_m`, its
//!   subalgebras `A_m^(K)`, filtration degrees, and basis changes.
//! * [`bounds`] — explicit degree bounds driving every search loop.
//! * [`ore`] — syzygies, common multiples, and fractions with denominators
//!   in a chosen subalgebra, with complete equality decision.
//! * [`matrix`] — operator matrices, left quasi-inverses, and trapezoid
//!   reduction of linear systems.
//! * [`solve`] — solvability decision and solving over fraction algebras,
//!   with stage-by-stage certificates.
//! * [`hilbert`] — Hilbert functions of finitely presented modules, their
//!   polynomial fits, and leading-coefficient bound checks.

pub mod bounds;
pub mod hilbert;
pub mod linalg;
pub mod matrix;
pub mod ore;
pub mod scalar;
pub mod solve;
pub mod weyl;

pub use hilbert::{HKReport, ModulePresentation};
pub use linalg::ScalarMatrix;
pub use matrix::{LinearSystem, OpMatrix, TrapezoidSystem};
pub use ore::{FractionContext, OreFraction};
pub use scalar::{FieldScalar, FieldTag};
pub use solve::{SolveBudget, SolveOutcome, SolveStatus};
pub use weyl::{DegreeKind, Monomial, VarSet, WeylOp};
