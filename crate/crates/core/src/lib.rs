//! Weight reduction for CSS quantum codes.
//!
//! A CSS code is a GF(2) 2-complex: Z-stabilizers (2-cells) → qubits (1-cells)
//! → X-stabilizers (0-cells). This crate implements the transforms that bring
//! an arbitrary code to bounded stabilizer weight and qubit degree:
//!
//! * [`copygauge`]: copying and gauging of X-stabilizers,
//! * [`thicken`]: product with an interval plus height assignment,
//! * [`cone`]: inducing Z-stabilizers through a mapping cone,
//! * [`robustify`]: connecting unreasonable codes and expander augmentation,
//! * [`pipeline`]: the end-to-end composition with a parameter ledger.
//!
//! Exact oracles (ranks, distances, Cheeger constants, soundness) live in
//! [`metrics`] and [`graph`]. The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod code;
pub mod complex;
pub mod cone;
pub mod copygauge;
pub mod f2;
pub mod fixtures;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod randapplic;
pub mod report;
pub mod rng;
pub mod robustify;
pub mod thicken;

pub use code::{CodeError, CodeParams, CssCode, Distance, DistanceMethod, PauliKind};
pub use f2::{BitVector, SparseBitMatrix};
pub use num_rational::Ratio;
pub use report::{BoundCheck, TransformReport};

/// Exact rational used for Cheeger constants and soundness factors.
pub type Rational = Ratio<u64>;
