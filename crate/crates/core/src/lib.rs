//! Numerical harmonic analysis on the multiplicative q-lattice
//! Γ̄ = {z : |z| ∈ q^ℤ} ∪ {0} for a deformation parameter 0 < q < 1.
//!
//! The crate provides, over a sparse orthogonal-mode representation of
//! functions on Γ̄:
//!
//! - the lattice geometry, the bicharacter pairing and the covariant
//!   measure μ = Σ_k q^{2k}·(circle mean) ([`lattice`], [`modes`]);
//! - the covariant q-difference calculus: scaling automorphisms, the four
//!   difference-quotient operators in two independent realizations, and
//!   their adjoint, Leibniz, commutation and Stokes identities
//!   ([`calculus`]);
//! - first- and second-order differential forms with the bimodule
//!   commutation rules and d² = 0 ([`forms`]);
//! - the quantum exponential kernel F(z) = Π (1+q^{2j}z̄)/(1+q^{2j}z) with
//!   rigorous truncation and a removable-singularity policy on the
//!   singular circles ([`qexp`]);
//! - the integral transform ℱ driven by the per-circle angular
//!   coefficients of F, its adjoint, and residual checks for the
//!   commutation, eigenvalue and unitarity identities ([`fourier`]).
//!
//! Everything operates on finitely supported mode tables; operators grow
//! support rather than clip, so algebraic identities hold to rounding
//! error. Transform-level identities are verified on finite windows with
//! reported boundary tails that shrink as the windows grow.

pub mod calculus;
pub mod error;
pub mod forms;
pub mod fourier;
pub mod lattice;
pub mod modes;
pub mod qexp;

pub use error::{FileError, FourierError, ModeError, QexpError};
pub use lattice::{chi, CirclePoint, QLattice};
pub use modes::{ModeFunction, SampledFunction};
