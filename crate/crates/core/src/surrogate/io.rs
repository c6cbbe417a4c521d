//! Model persistence: a JSON document with layer sizes and row-major
//! weight/bias arrays. Floats keep their shortest round-trip form, so a
//! loaded model predicts bit-identically.

use serde::{Deserialize, Serialize};

use super::model::MlpModel;
use super::SurrogateError;

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    layers: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    activation: String,
}

const ACTIVATION: &str = "relu-sigmoid";

pub fn save_model(model: &MlpModel) -> String {
    let doc = ModelDoc {
        layers: model.layer_sizes().to_vec(),
        weights: model.weights().to_vec(),
        biases: model.biases().to_vec(),
        activation: ACTIVATION.into(),
    };
    serde_json::to_string_pretty(&doc).expect("model serializes")
}

pub fn load_model(text: &str) -> Result<MlpModel, SurrogateError> {
    let doc: ModelDoc =
        serde_json::from_str(text).map_err(|e| SurrogateError::Format(e.to_string()))?;
    if doc.activation != ACTIVATION {
        return Err(SurrogateError::Format(format!(
            "unsupported activation '{}'",
            doc.activation
        )));
    }
    MlpModel::new(doc.layers, doc.weights, doc.biases)
}
