//! Exact angles between intermediate subfactors, computed in finite-group
//! models `R⋊H₀ ⊂ R⋊G` and on abstract trace data.
//!
//! Layout:
//! - [`group`]: finite groups, subgroups, lattice enumeration.
//! - [`twobox`]: the coset-projection algebra and the pointwise/convolution
//!   two-box model with coproduct and Fourier transform.
//! - [`quadruple`]: angles α, β and the commuting / co-commuting /
//!   parallelogram classification.
//! - [`census`]: whole-lattice angle matrices, packing certificates and
//!   counting bounds.
//! - [`basis`]: Pimsner–Popa bases and the basis-characterisation batteries.
//! - [`verify`]: corpus-wide theorem batteries.
//! - [`io`]: JSON / CSV / DOT formats and the lattice cache.

pub mod basis;
pub mod census;
pub mod error;
pub mod exec;
pub mod group;
pub mod io;
pub mod quadratic;
pub mod quadruple;
pub mod rational;
pub mod surd;
pub mod twobox;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quadratic::QuadraticNumber;
pub use rational::Rational;
pub use surd::Surd;
