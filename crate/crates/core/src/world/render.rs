//! Synthetic observations of a recipe: frame features and narrative text.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::catalog::{COLORS, INGREDIENTS, STATES, VERBS};
use super::recipe::{RecipeTrace, WorldConfig};
use crate::modality::Utterance;

const VERB_DIM: usize = 16;
const INGREDIENT_DIM: usize = 8;
const COLOR_DIM: usize = 4;
const STATE_DIM: usize = 4;

/// Width of every rendered frame feature.
pub const FRAME_DIM: usize = VERB_DIM + INGREDIENT_DIM + COLOR_DIM + STATE_DIM;

/// Fixed random content embeddings. A frame is the concatenation of the verb
/// block, the summed ingredient block and the summed post-step color and
/// state blocks of the step's ingredients.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    verbs: Vec<Vec<f64>>,
    ingredients: Vec<Vec<f64>>,
    colors: Vec<Vec<f64>>,
    states: Vec<Vec<f64>>,
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    let scale = 1.0 / (dim as f64).sqrt();
    (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(rng);
                    z * scale
                })
                .collect::<Vec<f64>>()
        })
        .collect()
}

impl FeatureTable {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            verbs: random_rows(&mut rng, VERBS.len(), VERB_DIM),
            ingredients: random_rows(&mut rng, INGREDIENTS.len(), INGREDIENT_DIM),
            colors: random_rows(&mut rng, COLORS.len(), COLOR_DIM),
            states: random_rows(&mut rng, STATES.len(), STATE_DIM),
        }
    }

    /// Noise-free feature of step `idx` of `trace`.
    pub fn content(&self, trace: &RecipeTrace, idx: usize) -> Vec<f64> {
        let step = &trace.steps[idx];
        let after = trace.attributes_after(idx + 1);
        let mut f = Vec::with_capacity(FRAME_DIM);
        f.extend_from_slice(&self.verbs[step.verb]);
        let mut ing = vec![0.0; INGREDIENT_DIM];
        let mut col = vec![0.0; COLOR_DIM];
        let mut st = vec![0.0; STATE_DIM];
        for i in &step.ingredients {
            let a = after[i];
            add_into(&mut ing, &self.ingredients[*i]);
            add_into(&mut col, &self.colors[a.color]);
            add_into(&mut st, &self.states[a.state]);
        }
        f.extend(ing);
        f.extend(col);
        f.extend(st);
        f
    }

    /// Nearest verb embedding to the verb block of `feature`.
    pub fn decode_verb(&self, feature: &[f64]) -> usize {
        let block = &feature[..VERB_DIM];
        let dist =
            |e: &Vec<f64>| -> f64 { e.iter().zip(block).map(|(a, b)| (a - b) * (a - b)).sum() };
        (0..self.verbs.len())
            .min_by(|&a, &b| dist(&self.verbs[a]).total_cmp(&dist(&self.verbs[b])))
            .expect("verb table is not empty")
    }
}

fn add_into(acc: &mut [f64], x: &[f64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += b;
    }
}

/// Number of frames sampled from a segment of the given duration.
pub fn frame_count(duration_s: f64, seconds_per_frame: f64) -> usize {
    ((duration_s / seconds_per_frame).ceil() as usize).max(1)
}

/// One frame sequence per step: `⌈duration / u⌉` copies of the step's content
/// embedding, each with independent Gaussian noise.
pub fn render_features<R: Rng + ?Sized>(
    trace: &RecipeTrace,
    table: &FeatureTable,
    cfg: &WorldConfig,
    rng: &mut R,
) -> Vec<Vec<Vec<f64>>> {
    let noise = Normal::new(0.0, cfg.frame_noise.max(0.0)).expect("valid sigma");
    (0..trace.len())
        .map(|i| {
            let content = table.content(trace, i);
            let n = frame_count(trace.steps[i].duration_s, cfg.seconds_per_frame);
            (0..n)
                .map(|_| {
                    content
                        .iter()
                        .map(|c| {
                            if cfg.frame_noise > 0.0 {
                                c + noise.sample(rng)
                            } else {
                                *c
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Transcript corruption knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextNoise {
    /// Probability of inserting a distractor token after each word.
    pub p_insert: f64,
    /// Probability of dropping each word.
    pub p_drop: f64,
    /// Maximum absolute timestamp jitter in seconds.
    pub jitter_s: f64,
}

impl Default for TextNoise {
    fn default() -> Self {
        Self {
            p_insert: 0.15,
            p_drop: 0.1,
            jitter_s: 3.0,
        }
    }
}

impl TextNoise {
    pub fn clean() -> Self {
        Self {
            p_insert: 0.0,
            p_drop: 0.0,
            jitter_s: 0.0,
        }
    }
}

const FILLERS: [&str; 10] = [
    "um", "so", "okay", "really", "nice", "guys", "just", "like", "right", "yeah",
];

fn object_phrase(trace: &RecipeTrace, idx: usize) -> String {
    let names: Vec<&str> = trace.steps[idx]
        .ingredients
        .iter()
        .map(|&i| INGREDIENTS[i].name)
        .collect();
    if names.is_empty() {
        "everything together".to_string()
    } else {
        format!("the {}", names.join(" and the "))
    }
}

/// Clean one-sentence description of a step.
pub fn describe_step(trace: &RecipeTrace, idx: usize) -> String {
    format!(
        "{} {}",
        VERBS[trace.steps[idx].verb].name,
        object_phrase(trace, idx)
    )
}

/// Descriptions (one clean sentence per step) and transcripts (one noisy,
/// jittered utterance per step).
pub fn render_text<R: Rng + ?Sized>(
    trace: &RecipeTrace,
    noise: &TextNoise,
    rng: &mut R,
) -> (Vec<String>, Vec<Utterance>) {
    let mut descriptions = Vec::with_capacity(trace.len());
    let mut utterances = Vec::with_capacity(trace.len());
    for (i, step) in trace.steps.iter().enumerate() {
        descriptions.push(describe_step(trace, i));
        let spoken = format!(
            "now we {} {}",
            VERBS[step.verb].name,
            object_phrase(trace, i)
        );
        let mut words = Vec::new();
        for w in spoken.split(' ') {
            if noise.p_drop > 0.0 && rng.random::<f64>() < noise.p_drop {
                continue;
            }
            words.push(w.to_string());
            if noise.p_insert > 0.0 && rng.random::<f64>() < noise.p_insert {
                let distractor = if rng.random::<bool>() {
                    FILLERS.choose(rng).copied().unwrap()
                } else {
                    INGREDIENTS.choose(rng).map(|s| s.name).unwrap()
                };
                words.push(distractor.to_string());
            }
        }
        let base = rng.random_range(step.start_s..step.end_s);
        let jitter = if noise.jitter_s > 0.0 {
            rng.random_range(-noise.jitter_s..=noise.jitter_s)
        } else {
            0.0
        };
        utterances.push(Utterance {
            t_s: base + jitter,
            text: words.join(" "),
        });
    }
    (descriptions, utterances)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::recipe::{generate_recipe, Step};

    fn trace() -> RecipeTrace {
        let mk = |verb, ingredients: Vec<usize>, start: f64, d: f64| Step {
            verb,
            ingredients,
            duration_s: d,
            start_s: start,
            end_s: start + d,
        };
        RecipeTrace::from_steps(
            vec![
                mk(0, vec![0], 0.0, 30.0),
                mk(3, vec![], 32.0, 45.0),
                mk(0, vec![0], 80.0, 30.0),
            ],
            120.0,
        )
    }

    #[test]
    fn noiseless_frames_are_identical_within_segment() {
        let cfg = WorldConfig {
            frame_noise: 0.0,
            ..WorldConfig::default()
        };
        let t = trace();
        let table = FeatureTable::new(1);
        let f = render_features(&t, &table, &cfg, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(f.len(), 3);
        assert_eq!(f[1].len(), 3);
        assert!(f[1].iter().all(|fr| fr == &f[1][0]));
        assert_eq!(f[0][0].len(), FRAME_DIM);
        // steps 0 and 2 have identical content
        assert_eq!(f[0], f[2]);
    }

    #[test]
    fn clean_transcripts_match_descriptions_up_to_phrasing() {
        let t = trace();
        let (desc, utts) = render_text(&t, &TextNoise::clean(), &mut ChaCha8Rng::seed_from_u64(0));
        for (i, (d, u)) in desc.iter().zip(&utts).enumerate() {
            assert_eq!(u.text, format!("now we {d}"));
            assert!(u.t_s >= t.steps[i].start_s && u.t_s < t.steps[i].end_s);
        }
        assert_eq!(desc[1], "stir everything together");
    }

    #[test]
    fn descriptions_mention_their_verb() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let t = generate_recipe(&mut rng, &WorldConfig::default());
            let (desc, _) = render_text(&t, &TextNoise::default(), &mut rng);
            for (s, d) in t.steps.iter().zip(&desc) {
                assert!(d.split(' ').any(|w| w == VERBS[s.verb].name));
            }
        }
    }
}
