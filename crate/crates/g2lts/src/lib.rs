//! Quaternionic linear algebra and a verification engine for Lie triple
//! systems (totally geodesic submanifolds) of the quaternionic 2-Grassmannian
//! `G2(H^{n+2})` and its complex counterpart `G2(C^{n+2})`.
//!
//! The tangent space at the base point `V' = span{e1, e2}` is modelled as
//! `m = L(V', V)` with `V = H^n`; see [`model`]. Every classified type can be
//! built with [`constructors::construct`], checked with [`lts::is_lts`], and
//! recognized again with [`classify::classify`].

pub mod cartan;
pub mod classify;
pub mod complex;
pub mod constructors;
pub mod embeddings;
pub mod error;
pub mod identities;
pub mod lts;
pub mod model;
pub mod qlinalg;
pub mod quat;
mod real;

pub use error::{G2Error, Result};
pub use quat::{QMatrix, QVector, Quaternion};
