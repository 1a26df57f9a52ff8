//! Computations on the rigid Calabi-Yau orbifolds `E1 × E2 × E3 / G` with
//! `G ≅ (Z/2)^2 × (Z/2)^r`: normalizers and their action on cohomology,
//! Hodge numbers and fundamental groups, the local toric resolutions, and the
//! modular objects on the parameter space.
//!
//! Exact parts work over [`Rational`], [`F5`] and [`F7`]; the numeric parts
//! are generic over [`modular::real::Real`], with [`f64`] and [`DoubleDouble`].

pub mod catalog;
pub mod cohomology;
pub mod geometry;
pub mod golden;
pub mod group;
pub mod modular;
pub mod normalizer;
pub mod report;
pub mod toric;
pub mod verify;

pub use cohomology::{F5, F7};

pub type Rational = num_rational::BigRational;
pub type DoubleDouble = twofloat::TwoFloat;
