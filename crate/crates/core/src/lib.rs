//! Numerical toolkit for special Poncelet triangle families.
//!
//! - [`conic`]: projective conic algebra (tangents, pole/polar, fitting, affine maps)
//! - [`poncelet`]: polygon chasing between an outer ellipse and a caustic
//! - [`centers`]: triangle metrics, Kimberling centers and derived triangles
//! - [`families`]: constructors for each special family with closed-form predictions
//! - [`invariants`]: measurement and verification of those predictions
//! - [`loci`]: locus sampling, conic fitting and focus/homothety checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centers;
pub mod conic;
pub mod families;
pub mod invariants;
pub mod loci;
pub mod poncelet;

pub use centers::{CenterId, Triangle, TriangleMetrics};
pub use conic::{AffineMap, AxisEllipse, ConicMatrix, GeneralEllipse, HCoord, Point2};
pub use families::{Claim, FamilyConfig, FamilyKind, FamilySpec, Image, Prediction};
pub use invariants::{InvariantId, InvariantReport, Verdict};
pub use loci::LocusResult;
pub use poncelet::{ConicPair, PolygonSample};
