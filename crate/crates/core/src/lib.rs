//! Exact and numerical SU(3) coupling coefficients.
//!
//! The crate computes Clebsch-Gordan coefficients of SU(3) in the canonical
//! isospin–hypercharge basis, factorised into SU(2) Clebsch-Gordan
//! coefficients and SU(3) isoscalar factors:
//!
//! * [`irrep`] — labels `(P,Q)`, dimensions, Casimirs, the weight lattice;
//! * [`scalar`] — exact rationals and signed square roots;
//! * [`su2`] — SU(2) Clebsch-Gordan coefficients;
//! * [`generators`] — generator matrices of every irrep;
//! * [`series`] — decomposition of tensor products;
//! * [`isoscalar`] — isoscalar factors by recurrence and in closed form;
//! * [`cgc`] — full SU(3) coefficients and coupled bases;
//! * [`oracle`] — an independent brute-force reduction used for validation.
//!
//! The crate is `no_std` (it needs `alloc`); the default `std` feature only
//! adds a process-wide memo table for SU(2) coefficients.

#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod cgc;
pub mod generators;
pub mod irrep;
pub mod isoscalar;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod series;
pub mod su2;
