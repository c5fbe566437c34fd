//! Exhaustive finite-instance verification of cartesian monoidal opfibrations.
//!
//! Two concrete opfibrations are implemented on multiplication-table algebra:
//!
//! * [`ext`] — abelian extensions of a fixed finite group `C`, fibred over
//!   `C`-modules, with pushforward liftings, pullback products and the
//!   Baer tensor; `π0` of a fibre recovers `H²(C,B,ξ)` and `π1` recovers
//!   `Z¹(C,B,ξ)` (cross-checked against the independent cocycle oracle
//!   in [`cohom`]).
//! * [`act`] — left monoid actions fibred over monoids, with contracted
//!   products, torsors, and the torsor fibration over abelian groups.
//!
//! The generic layer in [`fib`] runs structural checks (cocartesian
//! liftings, adjoints, mates, Beck–Chevalley, tensor/unit/braiding on
//! fibres, 2-group axiom suites) through a uniform [`fib::FibrationOracle`]
//! interface, exactly, on finite instances.

pub mod act;
pub mod cohom;
pub mod error;
pub mod ext;
pub mod fib;
pub mod finalg;
pub mod instances;

pub use error::{Error, Result};
