//! Answer prediction: the multiple-choice scorer and the K-Space classifier.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::autodiff::{ParamStore, Tape, Var};
use crate::error::{Error, Result};
use crate::nn::{Init, Mlp};

/// Number of candidates in every multiple-choice question.
pub const NUM_CHOICES: usize = 5;

/// Lowercases, trims, collapses inner whitespace and strips trailing punctuation.
pub fn normalize_answer(raw: &str) -> String {
    let mut s = raw
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    loop {
        let trimmed = s
            .trim_end_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace())
            .to_string();
        if trimmed == s {
            return s;
        }
        s = trimmed;
    }
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Five tokenized candidate answers and the index of the correct one.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceSet {
    pub candidates: Vec<Vec<usize>>,
    pub correct: usize,
}

impl ChoiceSet {
    pub fn new(candidates: Vec<Vec<usize>>, correct: usize) -> Result<Self> {
        if candidates.len() != NUM_CHOICES {
            return Err(Error::contract(format!(
                "expected {NUM_CHOICES} choices, got {}",
                candidates.len()
            )));
        }
        if correct >= NUM_CHOICES {
            return Err(Error::contract(format!(
                "correct index {correct} out of range"
            )));
        }
        if candidates.iter().any(Vec::is_empty) {
            return Err(Error::contract("empty candidate answer"));
        }
        Ok(Self {
            candidates,
            correct,
        })
    }
}

/// Normalized training answers mapped to class ids `0..K`. Answers outside the
/// vocabulary have no class and are always scored wrong.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, usize>", into = "BTreeMap<String, usize>")]
pub struct AnswerVocabulary {
    answers: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl From<AnswerVocabulary> for BTreeMap<String, usize> {
    fn from(v: AnswerVocabulary) -> Self {
        v.index
    }
}

impl TryFrom<BTreeMap<String, usize>> for AnswerVocabulary {
    type Error = String;

    fn try_from(index: BTreeMap<String, usize>) -> std::result::Result<Self, String> {
        let mut answers = vec![None; index.len()];
        for (a, &id) in &index {
            match answers.get_mut(id) {
                Some(slot @ None) => *slot = Some(a.clone()),
                _ => return Err(format!("answer class ids are not 0..{}", index.len())),
            }
        }
        Ok(Self {
            answers: answers.into_iter().map(Option::unwrap).collect(),
            index,
        })
    }
}

impl AnswerVocabulary {
    pub fn build<'a>(answers: impl IntoIterator<Item = &'a str>) -> Self {
        let mut v = AnswerVocabulary::default();
        for a in answers {
            let n = normalize_answer(a);
            if !v.index.contains_key(&n) {
                v.index.insert(n.clone(), v.answers.len());
                v.answers.push(n);
            }
        }
        v
    }

    pub fn from_answers(answers: Vec<String>) -> Self {
        let index = answers
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Self { answers, index }
    }

    pub fn answers(&self) -> &[String] {
        &self.answers
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn class_of(&self, answer: &str) -> Option<usize> {
        self.index.get(&normalize_answer(answer)).copied()
    }

    pub fn answer(&self, class: usize) -> Option<&str> {
        self.answers.get(class).map(String::as_str)
    }
}

/// `f(x, a)`: an MLP with one output neuron scoring each candidate.
#[derive(Debug, Clone)]
pub struct McHead {
    pub mlp: Mlp,
}

impl McHead {
    /// `context_dim` is the fused `(v, m, q)` width; `answer_dim` the encoded answer width.
    pub fn new(
        store: &mut ParamStore,
        context_dim: usize,
        answer_dim: usize,
        hidden: usize,
        init: &mut Init,
    ) -> Result<Self> {
        Ok(Self {
            mlp: Mlp::new(
                store,
                "head.mc",
                &[context_dim + answer_dim, hidden, 1],
                init,
            )?,
        })
    }

    /// One score per candidate, as a `[5]` vector.
    pub fn scores(&self, tape: &mut Tape, context: Var, answers: &[Var]) -> Result<Var> {
        if answers.len() != NUM_CHOICES {
            return Err(Error::contract(format!(
                "expected {NUM_CHOICES} choices, got {}",
                answers.len()
            )));
        }
        let mut outs = Vec::with_capacity(NUM_CHOICES);
        for &a in answers {
            let x = tape.concat(&[context, a])?;
            outs.push(self.mlp.forward(tape, x)?);
        }
        tape.concat(&outs)
    }
}

/// Picks the highest-scoring candidate (lowest index on ties).
pub fn mc_predict(scores: &[f64]) -> Result<usize> {
    if scores.len() != NUM_CHOICES {
        return Err(Error::contract(format!(
            "expected {NUM_CHOICES} scores, got {}",
            scores.len()
        )));
    }
    Ok(argmax(scores))
}

/// Softmax cross-entropy over the candidate scores.
pub fn mc_loss(tape: &mut Tape, scores: Var, correct: usize) -> Result<Var> {
    tape.cross_entropy(scores, correct)
}

/// `g(x)`: an MLP with one output per answer class.
#[derive(Debug, Clone)]
pub struct KspaceHead {
    pub mlp: Mlp,
}

impl KspaceHead {
    pub fn new(
        store: &mut ParamStore,
        context_dim: usize,
        hidden: usize,
        classes: usize,
        init: &mut Init,
    ) -> Result<Self> {
        if classes == 0 {
            return Err(Error::contract(
                "K-Space head needs a non-empty answer vocabulary",
            ));
        }
        Ok(Self {
            mlp: Mlp::new(store, "head.kspace", &[context_dim, hidden, classes], init)?,
        })
    }

    pub fn logits(&self, tape: &mut Tape, context: Var) -> Result<Var> {
        self.mlp.forward(tape, context)
    }
}

pub fn kspace_predict(logits: &[f64]) -> Result<usize> {
    if logits.is_empty() {
        return Err(Error::contract("empty answer vocabulary"));
    }
    Ok(argmax(logits))
}
