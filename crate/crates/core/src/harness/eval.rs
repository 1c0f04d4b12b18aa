use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{HeadKind, RunConfig};
use super::model::{EncodingCache, PreparedVideo, QaModel};
use crate::autodiff::Tape;
use crate::error::Result;
use crate::world::Tag;

/// Correct and total counts per tag and overall. An item counts toward
/// every tag it carries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
    per_tag: [(usize, usize); 6],
}

fn tag_slot(tag: Tag) -> usize {
    Tag::ALL.iter().position(|&t| t == tag).expect("tag listed")
}

impl Tally {
    pub fn record(&mut self, tags: &[Tag], correct: bool) {
        self.total += 1;
        self.correct += usize::from(correct);
        let mut seen = [false; 6];
        for &t in tags {
            let k = tag_slot(t);
            if !seen[k] {
                seen[k] = true;
                self.per_tag[k].1 += 1;
                self.per_tag[k].0 += usize::from(correct);
            }
        }
    }

    /// `(correct, total)` for one tag.
    pub fn tag_counts(&self, tag: Tag) -> (usize, usize) {
        self.per_tag[tag_slot(tag)]
    }

    pub fn overall(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }

    pub fn per_tag(&self) -> PerTag {
        let acc = |t: Tag| {
            let (c, n) = self.tag_counts(t);
            (n > 0).then(|| c as f64 / n as f64)
        };
        PerTag {
            count: acc(Tag::Count),
            order: acc(Tag::Order),
            taste: acc(Tag::Taste),
            time: acc(Tag::Time),
            complex: acc(Tag::Complex),
            property: acc(Tag::Property),
        }
    }
}

/// Accuracy per tag; `None` when no item carries the tag.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PerTag {
    pub count: Option<f64>,
    pub order: Option<f64>,
    pub taste: Option<f64>,
    pub time: Option<f64>,
    pub complex: Option<f64>,
    pub property: Option<f64>,
}

impl PerTag {
    pub fn get(&self, tag: Tag) -> Option<f64> {
        match tag {
            Tag::Count => self.count,
            Tag::Order => self.order,
            Tag::Taste => self.taste,
            Tag::Time => self.time,
            Tag::Complex => self.complex,
            Tag::Property => self.property,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub test_accuracy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub config: RunConfig,
    pub head: HeadKind,
    pub per_tag: PerTag,
    pub overall: f64,
    pub items: usize,
    /// Epoch whose parameters produced these numbers (0 = untrained).
    pub best_epoch: usize,
    pub history: Vec<EpochRecord>,
}

impl MetricsReport {
    pub fn from_tally(config: &RunConfig, tally: &Tally) -> Self {
        Self {
            config: config.clone(),
            head: config.head,
            per_tag: tally.per_tag(),
            overall: tally.overall().unwrap_or(0.0),
            items: tally.total,
            best_epoch: 0,
            history: Vec::new(),
        }
    }
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "  -  ".to_string(), |v| format!("{v:.3}"))
}

/// Header of the per-tag table.
pub fn table_header() -> String {
    let mut s = format!("{:<12}", "");
    for t in Tag::ALL {
        s.push_str(&format!(" {:>8}", capitalize(t.name())));
    }
    s.push_str(&format!(" {:>8}", "All"));
    s
}

pub fn table_row(label: &str, per_tag: &PerTag, overall: f64) -> String {
    let mut s = format!("{label:<12}");
    for t in Tag::ALL {
        s.push_str(&format!(" {:>8}", cell(per_tag.get(t))));
    }
    s.push_str(&format!(" {:>8}", cell(Some(overall))));
    s
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", table_header())?;
        write!(
            f,
            "{}",
            table_row(
                &format!("{} {}", self.config.model.label(), self.head.label()),
                &self.per_tag,
                self.overall
            )
        )
    }
}

/// Accuracy of `model` over `videos`, plus the mean loss.
pub fn evaluate_prepared(model: &QaModel, videos: &[PreparedVideo]) -> Result<(Tally, f64)> {
    let mut tally = Tally::default();
    let mut loss = 0.0;
    for chunk in videos.chunks(16) {
        let mut tape = Tape::with_params(&model.store);
        let mut cache = EncodingCache::default();
        for v in chunk {
            let outcomes = model.forward_video(&mut tape, v, &mut cache)?;
            for (o, q) in outcomes.iter().zip(&v.questions) {
                tally.record(&q.tags, o.correct);
                loss += tape.scalar(o.loss);
            }
        }
    }
    let n = tally.total.max(1) as f64;
    Ok((tally, loss / n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn items_count_toward_every_tag() {
        let mut t = Tally::default();
        t.record(&[Tag::Complex, Tag::Order], true);
        t.record(&[Tag::Order], false);
        assert_eq!(t.tag_counts(Tag::Order), (1, 2));
        assert_eq!(t.tag_counts(Tag::Complex), (1, 1));
        assert_eq!(t.overall(), Some(0.5));
        let p = t.per_tag();
        assert_eq!(p.order, Some(0.5));
        assert_eq!(p.taste, None);
    }

    #[test]
    fn report_json_has_the_documented_keys() {
        let r = MetricsReport::from_tally(&RunConfig::default(), &Tally::default());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for k in ["config", "per_tag", "overall", "head", "history"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        for t in Tag::ALL {
            assert!(v["per_tag"].get(t.name()).is_some());
        }
    }
}
