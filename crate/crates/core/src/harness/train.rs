use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::Adam;
use super::config::{HeadKind, RunConfig};
use super::eval::{evaluate_prepared, EpochRecord, MetricsReport, Tally};
use super::model::{prepare_split, EncodingCache, PreparedVideo, QaModel, Vocabularies};
use crate::autodiff::{ParamId, StoredParam, Tape};
use crate::error::{Error, Result};
use crate::world::{generate_dataset, load_dataset, DatasetConfig, DatasetManifest, Split};

/// Parameters plus everything needed to rebuild the model around them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config: RunConfig,
    pub epoch: usize,
    pub vocab: Vocabularies,
    pub params: BTreeMap<String, StoredParam>,
}

impl Checkpoint {
    pub fn of(model: &QaModel, epoch: usize) -> Self {
        Self {
            config: model.config.clone(),
            epoch,
            vocab: model.vocab.clone(),
            params: model.store.to_map(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn into_model(self) -> Result<QaModel> {
        let mut model = QaModel::new(&self.config, self.vocab)?;
        model.store.load_map(&self.params)?;
        Ok(model)
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

/// Loads `config.data`, or generates the default dataset from the data seed.
pub fn dataset_for(config: &RunConfig) -> Result<DatasetManifest> {
    match &config.data {
        Some(path) => load_dataset(path),
        None => generate_dataset(&DatasetConfig {
            seed: config.seeds.data,
            ..DatasetConfig::default()
        }),
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// The model at its best test-accuracy epoch.
    pub model: QaModel,
    pub report: MetricsReport,
}

/// Consecutive runs of whole videos holding at least `batch_size` questions.
fn batches(order: &[usize], videos: &[PreparedVideo], batch_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut count = 0;
    for &i in order {
        cur.push(i);
        count += videos[i].questions.len();
        if count >= batch_size {
            out.push(std::mem::take(&mut cur));
            count = 0;
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn non_finite(tape: &Tape, epoch: usize, batch: usize, what: &str) -> Error {
    match tape.first_non_finite() {
        Some((node, kind, shape)) => Error::Numeric(format!(
            "{what} at epoch {epoch}, batch {batch}: first offending tensor is node {node} ({kind}, shape {shape:?})"
        )),
        None => Error::Numeric(format!("{what} at epoch {epoch}, batch {batch}")),
    }
}

/// One optimizer step over `batch`; returns the summed loss and item count.
fn train_batch(
    model: &mut QaModel,
    adam: &mut Adam,
    videos: &[PreparedVideo],
    batch: &[usize],
    epoch: usize,
    index: usize,
) -> Result<(f64, usize)> {
    let grads: Vec<(ParamId, Vec<f64>)>;
    let (total, n);
    {
        let mut tape = Tape::with_params(&model.store);
        let mut cache = EncodingCache::default();
        let mut losses = Vec::new();
        for &vi in batch {
            let outs = model.forward_video(&mut tape, &videos[vi], &mut cache)?;
            losses.extend(outs.iter().map(|o| o.loss));
        }
        n = losses.len();
        if n == 0 {
            return Ok((0.0, 0));
        }
        let mut sum = losses[0];
        for &l in &losses[1..] {
            sum = tape.add(sum, l)?;
        }
        let loss = tape.scale(sum, 1.0 / n as f64);
        total = tape.scalar(sum);
        if !total.is_finite() {
            return Err(non_finite(&tape, epoch, index, "non-finite training loss"));
        }
        tape.backward(loss)?;
        grads = tape.param_grads().map(|(id, g)| (id, g.to_vec())).collect();
        if grads.iter().any(|(_, g)| g.iter().any(|v| !v.is_finite())) {
            return Err(non_finite(&tape, epoch, index, "non-finite gradient"));
        }
    }
    model.store.zero_grad();
    for (id, g) in &grads {
        model.store.get_mut(*id).accumulate_grad(g)?;
    }
    adam.step(&mut model.store)?;
    Ok((total, n))
}

/// Trains on the dataset named by `config` and writes outputs to `config.out`.
pub fn train(config: &RunConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let data = dataset_for(config)?;
    let outcome = train_on(config, &data)?;
    if let Some(dir) = &config.out {
        Checkpoint::of(&outcome.model, outcome.report.best_epoch).save(&dir.join("checkpoint.json"))?;
        write_json(&dir.join("metrics.json"), &outcome.report)?;
    }
    Ok(outcome)
}

/// Trains on an in-memory dataset. After every epoch the test split is
/// evaluated; the returned model and report come from the best epoch
/// (the last one if there is no test split).
pub fn train_on(config: &RunConfig, data: &DatasetManifest) -> Result<TrainOutcome> {
    train_with_target(config, data, None)
}

/// As [`train_on`], stopping early once training accuracy reaches `target`.
pub fn train_with_target(
    config: &RunConfig,
    data: &DatasetManifest,
    target_train_accuracy: Option<f64>,
) -> Result<TrainOutcome> {
    config.validate()?;
    let vocab = Vocabularies::from_training(data, config)?;
    let mut model = QaModel::new(config, vocab)?;
    let text = model.text_source();
    let train_videos = prepare_split(data, Split::Train, &model.vocab, text)?;
    let test_videos = prepare_split(data, Split::Test, &model.vocab, text)?;
    let track_train = config.track_train_accuracy || target_train_accuracy.is_some();

    let (mut best_tally, _) = evaluate_prepared(&model, &test_videos)?;
    let mut best_epoch = 0;
    let mut best_params = model.store.to_map();
    let mut history = Vec::with_capacity(config.epochs);

    let mut adam = Adam::new(config.lr);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seeds.shuffle);
    let mut order: Vec<usize> = (0..train_videos.len()).collect();
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let (mut loss_sum, mut items) = (0.0, 0);
        for (b, batch) in batches(&order, &train_videos, config.batch_size).iter().enumerate() {
            let (l, n) = train_batch(&mut model, &mut adam, &train_videos, batch, epoch, b)?;
            loss_sum += l;
            items += n;
        }
        let (tally, _) = evaluate_prepared(&model, &test_videos)?;
        let train_accuracy = if track_train {
            evaluate_prepared(&model, &train_videos)?.0.overall()
        } else {
            None
        };
        history.push(EpochRecord {
            epoch,
            train_loss: loss_sum / items.max(1) as f64,
            test_accuracy: tally.overall().unwrap_or(0.0),
            train_accuracy,
        });
        let improved = match (tally.overall(), best_tally.overall()) {
            (Some(a), Some(b)) => a > b,
            (None, _) => true,
            (Some(_), None) => true,
        };
        if improved {
            best_tally = tally;
            best_epoch = epoch;
            best_params = model.store.to_map();
        }
        if let (Some(t), Some(a)) = (target_train_accuracy, train_accuracy) {
            if a >= t {
                break;
            }
        }
    }
    model.store.load_map(&best_params)?;
    let mut report = MetricsReport::from_tally(config, &best_tally);
    report.best_epoch = best_epoch;
    report.history = history;
    Ok(TrainOutcome { model, report })
}

/// Evaluates a trained model on one split of `data`.
pub fn evaluate(model: &QaModel, data: &DatasetManifest, split: Split, head: HeadKind) -> Result<MetricsReport> {
    if head != model.config.head {
        return Err(Error::Compatibility(format!(
            "checkpoint has a {} head, evaluation asked for {head}",
            model.config.head
        )));
    }
    let videos = prepare_split(data, split, &model.vocab, model.text_source())?;
    let (tally, _) = evaluate_prepared(model, &videos)?;
    Ok(MetricsReport::from_tally(&model.config, &tally))
}

/// Scores arbitrary per-item choices against the dataset's answers, e.g. for
/// oracle or random baselines. `predict` returns a choice index.
pub fn evaluate_choices<F>(data: &DatasetManifest, split: Split, mut predict: F) -> Tally
where
    F: FnMut(&crate::world::VideoRecord, &crate::world::QaRecord) -> usize,
{
    let mut tally = Tally::default();
    for v in data.videos_in(split) {
        for q in &v.qa {
            let guess = predict(v, q);
            tally.record(&q.tags, Some(guess) == q.correct_index());
        }
    }
    tally
}
