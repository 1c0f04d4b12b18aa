use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{Attributes, INGREDIENTS, VERBS};
use crate::error::{Error, Result};

/// Shape of generated recipes and of their rendered frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorldConfig {
    pub min_steps: usize,
    pub max_steps: usize,
    /// Ingredients available to one recipe; steps draw from this pantry.
    pub pantry_size: usize,
    /// Seconds covered by one sampled frame.
    pub seconds_per_frame: f64,
    /// Standard deviation of per-frame Gaussian feature noise.
    pub frame_noise: f64,
    /// Seed of the fixed content-embedding table.
    pub feature_seed: u64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        Self {
            min_steps: 3,
            max_steps: 8,
            pantry_size: 5,
            seconds_per_frame: 20.0,
            frame_noise: 0.1,
            feature_seed: 7,
        }
    }
}

impl WorldConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_steps < 2 || self.max_steps > 12 || self.min_steps > self.max_steps {
            return Err(Error::Config(format!(
                "step range {}..={} must lie within 2..=12",
                self.min_steps, self.max_steps
            )));
        }
        if self.pantry_size == 0 || self.pantry_size > INGREDIENTS.len() {
            return Err(Error::Config(format!(
                "bad pantry size {}",
                self.pantry_size
            )));
        }
        if !(self.seconds_per_frame > 0.0) || !(self.frame_noise >= 0.0) {
            return Err(Error::Config(
                "seconds_per_frame must be > 0 and noise ≥ 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub verb: usize,
    pub ingredients: Vec<usize>,
    pub duration_s: f64,
    pub start_s: f64,
    pub end_s: f64,
}

impl Step {
    /// Verb followed by its ingredients, e.g. `add salt and water`.
    pub fn name(&self) -> String {
        let mut s = VERBS[self.verb].name.to_string();
        for (k, &i) in self.ingredients.iter().enumerate() {
            s.push_str(if k == 0 { " " } else { " and " });
            s.push_str(INGREDIENTS[i].name);
        }
        s
    }
}

/// Ground-truth step sequence of one synthetic video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipeTrace {
    pub steps: Vec<Step>,
    /// Attributes of every used ingredient after the last step.
    pub final_attributes: BTreeMap<usize, Attributes>,
    pub duration_s: f64,
}

/// Attributes of every used ingredient after the first `upto` steps.
pub fn replay(steps: &[Step], upto: usize) -> BTreeMap<usize, Attributes> {
    let mut attrs: BTreeMap<usize, Attributes> = steps
        .iter()
        .flat_map(|s| s.ingredients.iter().copied())
        .map(|i| (i, Attributes::initial(i)))
        .collect();
    for step in &steps[..upto.min(steps.len())] {
        let effect = VERBS[step.verb].effect;
        for i in &step.ingredients {
            let a = attrs.get_mut(i).expect("ingredient registered");
            *a = a.apply(effect);
        }
    }
    attrs
}

impl RecipeTrace {
    pub fn from_steps(steps: Vec<Step>, duration_s: f64) -> Self {
        let final_attributes = replay(&steps, steps.len());
        Self {
            steps,
            final_attributes,
            duration_s,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn used_ingredients(&self) -> Vec<usize> {
        self.final_attributes.keys().copied().collect()
    }

    /// Attributes after the first `upto` steps.
    pub fn attributes_after(&self, upto: usize) -> BTreeMap<usize, Attributes> {
        replay(&self.steps, upto)
    }

    pub fn boundaries(&self) -> Vec<(f64, f64)> {
        self.steps.iter().map(|s| (s.start_s, s.end_s)).collect()
    }

    /// Indices of steps whose name occurs exactly once in the trace.
    pub fn uniquely_named_steps(&self) -> Vec<usize> {
        let names: Vec<String> = self.steps.iter().map(Step::name).collect();
        (0..names.len())
            .filter(|&i| names.iter().filter(|n| **n == names[i]).count() == 1)
            .collect()
    }
}

/// Samples a recipe: a pantry of ingredients, then steps that draw verbs
/// uniformly and ingredients from the pantry. Segments are separated by gaps.
pub fn generate_recipe<R: Rng + ?Sized>(rng: &mut R, cfg: &WorldConfig) -> RecipeTrace {
    let n = rng.random_range(cfg.min_steps..=cfg.max_steps);
    let mut pool: Vec<usize> = (0..INGREDIENTS.len()).collect();
    pool.shuffle(rng);
    let pantry = &pool[..cfg.pantry_size];

    let mut t = rng.random_range(0..=10) as f64;
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let verb = rng.random_range(0..VERBS.len());
        let spec = &VERBS[verb];
        let k = rng
            .random_range(spec.min_ingredients..=spec.max_ingredients)
            .min(pantry.len());
        let mut ingredients: Vec<usize> = pantry.choose_multiple(rng, k).copied().collect();
        ingredients.sort_unstable();
        let duration_s = rng.random_range(spec.duration_s.0..=spec.duration_s.1) as f64;
        steps.push(Step {
            verb,
            ingredients,
            duration_s,
            start_s: t,
            end_s: t + duration_s,
        });
        t += duration_s + rng.random_range(0..=8) as f64;
    }
    let duration = t + rng.random_range(0..=10) as f64;
    RecipeTrace::from_steps(steps, duration)
}
