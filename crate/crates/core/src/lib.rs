//! Problem representation and classical tooling for symmetric Euclidean QAP:
//! instances, objective evaluation, random instance generation, exhaustive
//! solving for small sizes, and the line-delimited dataset format.

mod dataset;
mod error;
mod exact;
mod generate;
mod instance;
mod matrix;

pub use dataset::{generate_dataset, load_dataset, save_dataset, DatasetHeader, RNG_NAME};
pub use error::{CoreError, Result};
pub use exact::{exact_solve, EXACT_SIZE_LIMIT};
pub use generate::generate_instance;
pub use instance::{distance_matrix, objective, Assignment, QapInstance};
pub use matrix::Mat;
