//! Symbolic recipe world: recipes, rendered observations, templated QA and datasets.

pub mod catalog;
pub mod dataset;
pub mod qa;
pub mod recipe;
pub mod render;

pub use dataset::{
    generate_dataset, load_dataset, parse_dataset, save_dataset, DatasetConfig, DatasetManifest,
    QaRecord, SegmentRecord, Split, VideoRecord,
};
pub use qa::{generate_qa, oracle_answer, AnswerType, MixConfig, QaItem, QuestionForm, Tag};
pub use recipe::{generate_recipe, RecipeTrace, Step, WorldConfig};
pub use render::{render_features, render_text, FeatureTable, TextNoise, FRAME_DIM};
