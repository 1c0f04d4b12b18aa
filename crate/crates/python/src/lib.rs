//! Python bindings. Datasets, configs and reports cross the boundary as JSON
//! strings using the same schema as the files the CLI reads and writes.

use ::procqa::autodiff::{Tape, Tensor};
use ::procqa::harness::{self, HeadKind, RunConfig, Scope};
use ::procqa::world::{self, DatasetConfig, Split};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: ::procqa::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
pub fn normalize_answer(raw: &str) -> String {
    ::procqa::heads::normalize_answer(raw)
}

/// Generates a dataset manifest and returns it as JSON.
#[pyfunction]
#[pyo3(signature = (videos=500, test_videos=100, qa_per_video=8, seed=0))]
pub fn generate_dataset(videos: usize, test_videos: usize, qa_per_video: usize, seed: u64) -> PyResult<String> {
    let cfg = DatasetConfig {
        train_videos: videos,
        test_videos,
        qa_per_video,
        seed,
        ..DatasetConfig::default()
    };
    let data = world::generate_dataset(&cfg).map_err(py_err)?;
    serde_json::to_string(&data).map_err(json_err)
}

/// Re-derives every stored answer from its recipe trace; returns
/// `(agreeing, checked)`.
#[pyfunction]
pub fn check_answers(dataset: &str) -> PyResult<(usize, usize)> {
    let data = world::parse_dataset(dataset).map_err(py_err)?;
    let (mut agree, mut checked) = (0, 0);
    for v in &data.videos {
        let Some(trace) = &v.trace else { continue };
        for q in &v.qa {
            let Some(form) = &q.form else { continue };
            let answer = world::oracle_answer(trace, form).map_err(py_err)?;
            checked += 1;
            agree += usize::from(answer == q.answer);
        }
    }
    Ok((agree, checked))
}

/// Trains with a JSON `RunConfig` on a JSON dataset and returns the metrics
/// report as JSON.
#[pyfunction]
pub fn train(config: &str, dataset: &str) -> PyResult<String> {
    let cfg: RunConfig = serde_json::from_str(config).map_err(json_err)?;
    let data = world::parse_dataset(dataset).map_err(py_err)?;
    let outcome = harness::train_on(&cfg, &data).map_err(py_err)?;
    serde_json::to_string(&outcome.report).map_err(json_err)
}

/// Trains, then evaluates the best model on the train split.
#[pyfunction]
pub fn train_accuracy(config: &str, dataset: &str) -> PyResult<f64> {
    let cfg: RunConfig = serde_json::from_str(config).map_err(json_err)?;
    let data = world::parse_dataset(dataset).map_err(py_err)?;
    let outcome = harness::train_on(&cfg, &data).map_err(py_err)?;
    let head: HeadKind = cfg.head;
    let report = harness::evaluate(&outcome.model, &data, Split::Train, head).map_err(py_err)?;
    Ok(report.overall)
}

/// Runs the finite-difference checker; returns `(passed, report text)`.
#[pyfunction]
#[pyo3(signature = (scope="ops"))]
pub fn gradcheck(scope: &str) -> PyResult<(bool, String)> {
    let scope: Scope = scope.parse().map_err(py_err)?;
    let report = harness::gradcheck(scope, &harness::GradCheckOptions::default());
    Ok((report.passed(), report.to_string()))
}

type Rows = Vec<Vec<f64>>;

fn to_rows(t: &Tensor) -> Rows {
    t.values().chunks(t.shape()[1]).map(<[f64]>::to_vec).collect()
}

/// `a @ b` with the gradients of `sum(a @ b)` with respect to both inputs.
#[pyfunction]
pub fn matmul(a: Rows, b: Rows) -> PyResult<(Rows, Rows, Rows)> {
    let ta = Tensor::from_rows(&a).map_err(py_err)?;
    let tb = Tensor::from_rows(&b).map_err(py_err)?;
    let mut tape = Tape::new();
    let (va, vb) = (tape.leaf(&ta.with_grad()), tape.leaf(&tb.with_grad()));
    let out = tape.matmul(va, vb).map_err(py_err)?;
    let total = tape.sum(out);
    tape.backward(total).map_err(py_err)?;
    let grad = |v, like: &[usize]| Tensor::new(like.to_vec(), tape.grad(v).unwrap().to_vec());
    let ga = grad(va, tape.shape(va)).map_err(py_err)?;
    let gb = grad(vb, tape.shape(vb)).map_err(py_err)?;
    Ok((to_rows(&tape.tensor(out)), to_rows(&ga), to_rows(&gb)))
}

/// Row-wise softmax.
#[pyfunction]
pub fn softmax_rows(x: Rows) -> PyResult<Rows> {
    let t = Tensor::from_rows(&x).map_err(py_err)?;
    let mut tape = Tape::new();
    let v = tape.leaf(&t);
    let out = tape.softmax_row(v).map_err(py_err)?;
    Ok(to_rows(&tape.tensor(out)))
}

#[pymodule]
#[pyo3(name = "procqa")]
fn procqa_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize_answer, m)?)?;
    m.add_function(wrap_pyfunction!(generate_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(check_answers, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(train_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(gradcheck, m)?)?;
    m.add_function(wrap_pyfunction!(matmul, m)?)?;
    m.add_function(wrap_pyfunction!(softmax_rows, m)?)?;
    Ok(())
}
