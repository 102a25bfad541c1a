//! Light/interface physics for smooth dielectrics.

mod interface;
mod material;
mod medium;
pub mod shell2d;

pub use interface::{critical_angle, fresnel_reflectance, fresnel_transmittance, reflect, refract};
pub use material::{CalciteSpec, DielectricSpec, TintMode, GLASS_IOR};
pub use medium::{Medium, MediumId, MediumStack};
pub use shell2d::{trace_shell_2d, EventKind, InterfaceEvent, PolylinePath, ShellPrimitive2D};

use crate::geom::PrimitiveId;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OpticsError {
    #[error("medium stack overflow entering primitive {}", primitive.0)]
    StackOverflow { primitive: PrimitiveId },
    #[error(
        "geometry inconsistency at primitive {}: exiting medium {} but the innermost medium is {}",
        primitive.0, expected.0, found.0
    )]
    StackUnderflow {
        primitive: PrimitiveId,
        expected: MediumId,
        found: MediumId,
    },
    #[error("invalid shell: radius {radius} cm, thickness {thickness} cm")]
    InvalidShell { radius: f64, thickness: f64 },
    #[error("index of refraction {0} outside (1, 3]")]
    InvalidIor(f64),
    #[error("tint channel {0} outside [0, 1]")]
    InvalidTint(f64),
    #[error("absorption coefficient {0} per cm must be finite and non-negative")]
    InvalidAbsorption(f64),
    #[error("calcite requires ordinary index > extraordinary index > 1, got {ordinary} and {extraordinary}")]
    InvalidCalcite { ordinary: f64, extraordinary: f64 },
    #[error("eye lies inside the orb")]
    EyeInsideOrb,
    #[error("chief ray trapped inside the orb")]
    TrappedRay,
    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}
