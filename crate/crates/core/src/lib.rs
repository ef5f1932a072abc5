//! Slack matrices, slack ideals and related realization-space models for
//! polyhedral cones.

pub mod certificate;
pub mod cone;
pub mod error;
pub mod gale;
pub mod grassmannian;
pub mod io;
pub mod pipeline;
pub mod reduced;
pub mod signs;
pub mod slack;

pub use cone::{AbstractCone, ConeJson, Diagnostic, Flag};
pub use error::{ModelError, Result};
