//! MLP failure-probability surrogate: training, prediction and
//! input-gradient saliency.

mod io;
mod model;
mod train;

pub use io::{load_model, save_model};
pub use model::{saliency, MlpModel};
pub use train::{train, TrainParams, TrainReport, TrainingSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurrogateError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("training data must contain both classes")]
    DegenerateData,
    #[error("model format error: {0}")]
    Format(String),
}
