use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{HeadKind, RunConfig};
use super::eval::{table_header, table_row, MetricsReport};
use super::train::{dataset_for, train_on, write_json};
use crate::error::{Error, Result};
use crate::modality::ModalityConfig;
use crate::models::VideoVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridLayout {
    /// Every variant with the MC head on video, reported per tag.
    Variants,
    /// Every modality set against every segment variant, with both heads.
    Modalities,
}

/// A set of runs sharing one base configuration and one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub base: RunConfig,
    pub layout: GridLayout,
    /// Restricts the variants; defaults to those the layout names.
    #[serde(default)]
    pub variants: Option<Vec<VideoVariant>>,
    #[serde(default)]
    pub modalities: Option<Vec<ModalityConfig>>,
    #[serde(default)]
    pub heads: Option<Vec<HeadKind>>,
    /// Directory receiving one metrics file per run plus the summary.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl GridSpec {
    pub fn new(base: RunConfig, layout: GridLayout) -> Self {
        Self {
            base,
            layout,
            variants: None,
            modalities: None,
            heads: None,
            out: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// The configurations to run, in report order.
    pub fn configs(&self) -> Vec<RunConfig> {
        let (variants, modalities, heads): (&[VideoVariant], &[ModalityConfig], &[HeadKind]) =
            match self.layout {
                GridLayout::Variants => (&VideoVariant::ALL, &[ModalityConfig::V], &[HeadKind::Mc]),
                GridLayout::Modalities => (
                    &VideoVariant::SEGMENT,
                    &ModalityConfig::ALL,
                    &[HeadKind::Mc, HeadKind::Kspace],
                ),
            };
        let variants = self.variants.as_deref().unwrap_or(variants);
        let modalities = self.modalities.as_deref().unwrap_or(modalities);
        let heads = self.heads.as_deref().unwrap_or(heads);
        let mut out = Vec::new();
        for &modalities in modalities {
            for &model in variants {
                for &head in heads {
                    out.push(RunConfig {
                        model,
                        head,
                        modalities,
                        out: None,
                        ..self.base.clone()
                    });
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let configs = self.configs();
        if configs.is_empty() {
            return Err(Error::Config("grid has no runs".into()));
        }
        configs.iter().try_for_each(RunConfig::validate)
    }
}

fn run_name(c: &RunConfig) -> String {
    format!("{}-{}-{}", c.model.name(), c.head, c.modalities.label().replace('+', "_"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub layout: GridLayout,
    pub runs: Vec<MetricsReport>,
}

impl GridReport {
    pub fn find(&self, model: VideoVariant, head: HeadKind, modalities: ModalityConfig) -> Option<&MetricsReport> {
        self.runs.iter().find(|r| {
            r.config.model == model && r.head == head && r.config.modalities == modalities
        })
    }
}

impl fmt::Display for GridReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.layout {
            GridLayout::Variants => {
                writeln!(f, "{}", table_header())?;
                for r in &self.runs {
                    let label = format!("{} {}", r.config.model.label(), r.head.label());
                    writeln!(f, "{}", table_row(&label, &r.per_tag, r.overall))?;
                }
                Ok(())
            }
            GridLayout::Modalities => {
                let mut columns: Vec<(VideoVariant, HeadKind)> = Vec::new();
                let mut rows: Vec<ModalityConfig> = Vec::new();
                for r in &self.runs {
                    if !columns.contains(&(r.config.model, r.head)) {
                        columns.push((r.config.model, r.head));
                    }
                    if !rows.contains(&r.config.modalities) {
                        rows.push(r.config.modalities);
                    }
                }
                write!(f, "{:<6}", "")?;
                for (m, h) in &columns {
                    write!(f, " {:>12}", format!("{} {}", m.label(), h.label()))?;
                }
                writeln!(f)?;
                for row in rows {
                    write!(f, "{:<6}", row.label())?;
                    for &(m, h) in &columns {
                        match self.find(m, h, row) {
                            Some(r) => write!(f, " {:>12.3}", r.overall)?,
                            None => write!(f, " {:>12}", "-")?,
                        }
                    }
                    writeln!(f)?;
                }
                Ok(())
            }
        }
    }
}

/// Runs every configuration of `spec` in turn on one shared dataset.
pub fn run_grid(spec: &GridSpec) -> Result<GridReport> {
    spec.validate()?;
    let data = dataset_for(&spec.base)?;
    let mut runs = Vec::new();
    for config in spec.configs() {
        let outcome = train_on(&config, &data)?;
        if let Some(dir) = &spec.out {
            write_json(&dir.join(format!("{}.json", run_name(&config))), &outcome.report)?;
        }
        runs.push(outcome.report);
    }
    let report = GridReport {
        layout: spec.layout,
        runs,
    };
    if let Some(dir) = &spec.out {
        write_json(&dir.join("grid.json"), &report)?;
    }
    Ok(report)
}
