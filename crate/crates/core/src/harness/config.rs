use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modality::ModalityConfig;
use crate::models::{Adjacency, VideoVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadKind {
    /// Score each of the five candidates.
    #[default]
    Mc,
    /// Classify over the answers seen in training.
    Kspace,
}

impl HeadKind {
    pub fn label(self) -> &'static str {
        match self {
            HeadKind::Mc => "MC",
            HeadKind::Kspace => "KS",
        }
    }
}

impl fmt::Display for HeadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeadKind::Mc => "mc",
            HeadKind::Kspace => "kspace",
        })
    }
}

impl FromStr for HeadKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" => Ok(HeadKind::Mc),
            "kspace" | "ks" | "k-space" => Ok(HeadKind::Kspace),
            _ => Err(Error::Config(format!("unknown head `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Small dimensions that train in minutes on one core.
    Desk,
    /// 512 hidden units, 300-d embeddings, learning rate 1e-4.
    #[serde(alias = "paper")]
    Full,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "desk" => Ok(Preset::Desk),
            "full" | "paper" => Ok(Preset::Full),
            _ => Err(Error::Config(format!("unknown preset `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Seeds {
    pub params: u64,
    pub data: u64,
    pub shuffle: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            params: 1,
            data: 0,
            shuffle: 2,
        }
    }
}

/// Everything that determines a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: VideoVariant,
    pub head: HeadKind,
    pub modalities: ModalityConfig,
    pub hidden: usize,
    pub embed: usize,
    pub lr: f64,
    pub epochs: usize,
    /// Questions per optimizer step; batches are filled with whole videos.
    pub batch_size: usize,
    pub seeds: Seeds,
    pub adjacency: Adjacency,
    /// Dataset file; when absent a default dataset is generated from `seeds.data`.
    pub data: Option<PathBuf>,
    /// Directory for the checkpoint and metrics report.
    pub out: Option<PathBuf>,
    /// Also evaluate the training split after every epoch.
    pub track_train_accuracy: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: VideoVariant::RgcnSa,
            head: HeadKind::Mc,
            modalities: ModalityConfig::V,
            hidden: 64,
            embed: 32,
            lr: 1e-3,
            epochs: 50,
            batch_size: 32,
            seeds: Seeds::default(),
            adjacency: Adjacency::Softmax,
            data: None,
            out: None,
            track_train_accuracy: false,
        }
    }
}

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        let desk = RunConfig::default();
        match preset {
            Preset::Desk => desk,
            Preset::Full => RunConfig {
                hidden: 512,
                embed: 300,
                lr: 1e-4,
                ..desk
            },
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Rejects inconsistent settings before any compute happens. Zero epochs
    /// is allowed and evaluates the untrained model.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("{what} must be positive")));
        if self.hidden == 0 {
            return bad("hidden");
        }
        if self.embed == 0 {
            return bad("embed");
        }
        if self.batch_size == 0 {
            return bad("batch_size");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("lr");
        }
        if self.model == VideoVariant::BareQa && self.modalities != ModalityConfig::V {
            return Err(Error::Config(format!(
                "bare_qa answers from the question alone; modalities must be V, got {}",
                self.modalities
            )));
        }
        Ok(())
    }

    /// Short run identifier, e.g. `rgcn_sa-mc-V+D`.
    pub fn tag(&self) -> String {
        format!("{}-{}-{}", self.model, self.head, self.modalities)
    }
}
