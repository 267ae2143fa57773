//! Asymmetric geometric representations of Coxeter groups.
//!
//! The entry point is [`egcm::EgcmGraph`], a validated E-generalized Cartan
//! matrix. Group elements act on root coordinates through [`geom`], roots are
//! enumerated and counted in [`roots`], and the numbers game lives in
//! [`game`].

#![allow(clippy::needless_range_loop)]

pub mod document;
pub mod egcm;
pub mod game;
pub mod geom;
pub mod index;
pub mod linalg;
pub mod report;
pub mod roots;
pub mod scalar;

pub use egcm::{BondOrder, BuildConfig, EgcmGraph, GraphError, MatrixType, Mode, OnPath};
pub use scalar::{Scalar, Tolerance};
