//! On-disk dataset: videos with segments, frames, narratives and QA items.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::qa::{generate_qa, validate_item, AnswerType, MixConfig, QaItem, QuestionForm, Tag};
use super::recipe::{generate_recipe, RecipeTrace, WorldConfig};
use super::render::{render_features, render_text, FeatureTable, TextNoise};
use crate::error::{Error, Result};
use crate::modality::{segment_utterances, Utterance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub start_s: f64,
    pub end_s: f64,
    pub description: String,
    /// Utterances whose timestamp falls inside this segment.
    pub transcript: Vec<Utterance>,
    pub frames: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRecord {
    pub question: String,
    pub answer: String,
    pub choices: Vec<String>,
    pub tags: Vec<Tag>,
    pub answer_type: AnswerType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<QuestionForm>,
}

impl QaRecord {
    pub fn correct_index(&self) -> Option<usize> {
        let a = crate::heads::normalize_answer(&self.answer);
        self.choices
            .iter()
            .position(|c| crate::heads::normalize_answer(c) == a)
    }
}

impl From<QaItem> for QaRecord {
    fn from(item: QaItem) -> Self {
        Self {
            question: item.question,
            answer: item.answer,
            choices: item.choices,
            tags: item.tags,
            answer_type: item.answer_type,
            form: Some(item.form),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub id: String,
    pub duration_s: f64,
    /// Falls back to the manifest-level split when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    pub segments: Vec<SegmentRecord>,
    pub qa: Vec<QaRecord>,
    /// Ground truth the QA was generated from; absent for external data.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<RecipeTrace>,
}

impl VideoRecord {
    pub fn boundaries(&self) -> Vec<(f64, f64)> {
        self.segments.iter().map(|s| (s.start_s, s.end_s)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub videos: Vec<VideoRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
}

impl DatasetManifest {
    pub fn split_of(&self, video: &VideoRecord) -> Option<Split> {
        video.split.or(self.split)
    }

    pub fn videos_in(&self, split: Split) -> Vec<&VideoRecord> {
        self.videos
            .iter()
            .filter(|v| self.split_of(v) == Some(split))
            .collect()
    }

    pub fn num_questions(&self) -> usize {
        self.videos.iter().map(|v| v.qa.len()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = HashSet::new();
        let mut width = None;
        for (vi, v) in self.videos.iter().enumerate() {
            let at = |field: &str| format!("videos[{vi}].{field}");
            if !ids.insert(v.id.as_str()) {
                return Err(schema(at("id"), format!("duplicate video id `{}`", v.id)));
            }
            if v.segments.is_empty() {
                return Err(schema(at("segments"), "video has no segments"));
            }
            let mut prev_end = f64::NEG_INFINITY;
            for (si, s) in v.segments.iter().enumerate() {
                let seg = |field: &str| at(&format!("segments[{si}].{field}"));
                if !(s.start_s < s.end_s) || s.start_s < prev_end {
                    return Err(schema(
                        seg("start_s"),
                        "boundaries must increase without overlap",
                    ));
                }
                prev_end = s.end_s;
                if s.frames.is_empty() {
                    return Err(schema(seg("frames"), "segment has no frames"));
                }
                for (fi, f) in s.frames.iter().enumerate() {
                    let w = *width.get_or_insert(f.len());
                    if f.len() != w || w == 0 {
                        return Err(schema(
                            seg(&format!("frames[{fi}]")),
                            format!("frame width {} differs from {w}", f.len()),
                        ));
                    }
                }
            }
            for (qi, q) in v.qa.iter().enumerate() {
                let item = QaItem {
                    question: q.question.clone(),
                    answer: q.answer.clone(),
                    choices: q.choices.clone(),
                    tags: q.tags.clone(),
                    answer_type: q.answer_type,
                    form: QuestionForm::CountSteps,
                };
                validate_item(&item)
                    .map_err(|e| schema(at(&format!("qa[{qi}]")), e.to_string()))?;
            }
        }
        Ok(())
    }
}

fn schema(path: String, message: impl Into<String>) -> Error {
    Error::Schema {
        path,
        message: message.into(),
    }
}

pub fn save_dataset(manifest: &DatasetManifest, path: &Path) -> Result<()> {
    manifest.validate()?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string(manifest)?)?;
    Ok(())
}

pub fn parse_dataset(text: &str) -> Result<DatasetManifest> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let manifest: DatasetManifest =
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    manifest.validate()?;
    Ok(manifest)
}

pub fn load_dataset(path: &Path) -> Result<DatasetManifest> {
    parse_dataset(&fs::read_to_string(path)?)
}

/// Everything that determines a generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub train_videos: usize,
    pub test_videos: usize,
    pub qa_per_video: usize,
    pub seed: u64,
    pub world: WorldConfig,
    pub text_noise: TextNoise,
    pub mix: MixConfig,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            train_videos: 500,
            test_videos: 100,
            qa_per_video: 8,
            seed: 0,
            world: WorldConfig::default(),
            text_noise: TextNoise::default(),
            mix: MixConfig::default(),
        }
    }
}

/// Generates video `index` from its own seeded stream, so any subset of
/// videos can be produced independently.
pub fn generate_video(
    cfg: &DatasetConfig,
    table: &FeatureTable,
    index: usize,
) -> Result<VideoRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let trace = generate_recipe(&mut rng, &cfg.world);
    let frames = render_features(&trace, table, &cfg.world, &mut rng);
    let (descriptions, utterances) = render_text(&trace, &cfg.text_noise, &mut rng);
    let qa = generate_qa(&trace, &mut rng, &cfg.mix, cfg.qa_per_video)?;

    let transcripts = segment_utterances(&trace.boundaries(), &utterances);
    let segments = trace
        .steps
        .iter()
        .zip(frames)
        .zip(descriptions)
        .zip(transcripts)
        .map(
            |(((step, frames), description), transcript)| SegmentRecord {
                start_s: step.start_s,
                end_s: step.end_s,
                description,
                transcript,
                frames,
            },
        )
        .collect();
    let split = if index < cfg.train_videos {
        Split::Train
    } else {
        Split::Test
    };
    Ok(VideoRecord {
        id: format!("vid{index:05}"),
        duration_s: trace.duration_s,
        split: Some(split),
        segments,
        qa: qa.into_iter().map(QaRecord::from).collect(),
        trace: Some(trace),
    })
}

pub fn generate_dataset(cfg: &DatasetConfig) -> Result<DatasetManifest> {
    cfg.world.validate()?;
    cfg.mix.validate()?;
    let table = FeatureTable::new(cfg.world.feature_seed);
    let videos = (0..cfg.train_videos + cfg.test_videos)
        .map(|i| generate_video(cfg, &table, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(DatasetManifest {
        videos,
        split: None,
    })
}
