//! Social practices: landmark graphs, guided paths and meta-deliberation.

mod engine;
mod graph;
mod path;

pub use engine::{ia_metadeliberate, LandmarkStatus, Practice, PracticeEngine};
pub use graph::{compile_plan_pattern, Landmark, LandmarkGraph};
pub use path::find_guided_path;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PracticeError {
    #[error("landmark {0} declared twice")]
    DuplicateLandmark(String),
    #[error("landmark {landmark} names unknown prior {prior}")]
    UnknownPrior { landmark: String, prior: String },
    #[error("landmark order has a cycle")]
    Cyclic,
    #[error("choice may only combine plain segments, found {0}")]
    NestedChoice(String),
    #[error("landmark {landmark} refers to undeclared practice {practice}")]
    UnknownPractice { landmark: String, practice: String },
    #[error("practice {0} declared twice")]
    DuplicatePractice(String),
    #[error("practice {0} has no landmarks")]
    NoLandmarks(String),
}
