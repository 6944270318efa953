//! Biclosed sets of positive roots in the classical affine root systems
//! Ã, B̃, C̃ and D̃.
//!
//! Roots are index pairs `(i, j)` standing for `ẽ_j − ẽ_i`; affine group
//! elements are periodic permutations of ℤ in window notation. Every
//! biclosed set has a unique finite description as a [`BiclosedTriple`]
//! (a face of the finite Coxeter fan, a set of parahoric components, and
//! one group element per component), and the crate converts between that
//! description, translation-invariant total orders of ℤ, and explicit
//! finite root windows.

pub mod closure;
pub mod error;
pub mod fan;
pub mod finite;
pub mod intset;
pub mod json;
pub mod lattice;
pub mod orders;
pub mod perms;
pub mod roots;
pub mod sample;

pub use closure::{Certificate, WindowSet};
pub use error::{Error, Result};
pub use fan::{BiclosedTriple, Component, ComponentKind, FanFace, ParahoricDecomposition};
pub use lattice::{FiniteOrderWindow, Threshold, ThresholdRelation};
pub use orders::{DTwist, PeriodicOrder, TwistClass};
pub use perms::AffinePermutation;
pub use roots::{AffineType, Family, RankTwoKind, RankTwoSubsystem, Root};
