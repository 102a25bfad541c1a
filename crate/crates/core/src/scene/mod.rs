//! Scene description, text format, generators and the built runtime scene.

mod build;
mod camera;
mod config;
mod format;
mod generators;
mod relief;
mod syntax;
mod texture;

pub use build::{Orb, Scene, SceneHit, Surface};
pub use camera::Camera;
pub use config::{
    AlbedoSpec, CameraSpec, FoldSpec, LightRigSpec, MeshSpec, OrbMaterial, OrbSpec, ReliefSpec, SceneConfig,
    StrokeSpec, TextureSpec, Thickness,
};
pub use format::{apply_override, parse_scene, parse_scene_with_overrides, serialize_scene, Override};
pub use generators::{
    align_view, make_salvator_scene, make_three_lines_scene, SalvatorOverrides, ThreeLinesLayout, KINK_DEG,
    KINK_HEIGHT, THREE_LINES_EXTENT, THREE_LINES_WIDTH,
};
pub use relief::{AlbedoField, FoldGeometry};
pub use syntax::Span;
pub use texture::{load_texture, Texture};

use crate::geom::GeomError;
use crate::optics::OpticsError;
use crate::render::RenderError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SceneError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },
    #[error("unknown key `{key}` in `{block}` at {span}")]
    UnknownKey { span: Span, block: String, key: String },
    #[error("unit violation{}: {message}", at(span))]
    UnitViolation { span: Option<Span>, message: String },
    #[error("invalid value{}: {message}", at(span))]
    InvalidValue { span: Option<Span>, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("texture {path}: {message}")]
    Texture { path: String, message: String },
    #[error("mesh {path}: {source}")]
    Mesh { path: String, source: GeomError },
    #[error("cannot align view: {0}")]
    Alignment(String),
}

fn at(span: &Option<Span>) -> String {
    span.map(|s| format!(" at {s}")).unwrap_or_default()
}

impl SceneError {
    pub(crate) fn unit(message: impl Into<String>) -> Self {
        SceneError::UnitViolation {
            span: None,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        SceneError::InvalidValue {
            span: None,
            message: message.into(),
        }
    }

    /// Attaches a position to errors that do not have one yet.
    pub(crate) fn at(self, pos: Span) -> Self {
        match self {
            SceneError::UnitViolation { span: None, message } => SceneError::UnitViolation {
                span: Some(pos),
                message,
            },
            SceneError::InvalidValue { span: None, message } => SceneError::InvalidValue {
                span: Some(pos),
                message,
            },
            other => other,
        }
    }
}

impl From<OpticsError> for SceneError {
    fn from(e: OpticsError) -> Self {
        SceneError::invalid(e.to_string())
    }
}

impl From<RenderError> for SceneError {
    fn from(e: RenderError) -> Self {
        SceneError::invalid(e.to_string())
    }
}
