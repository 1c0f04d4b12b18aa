mod common;

use common::criteria;
use common::replay;
use procqa::models::Adjacency;
use procqa::world::recipe::Step;
use procqa::world::{oracle_answer, QuestionForm, RecipeTrace};

#[test]
fn graph_models_match_straight_line_references() {
    let gap = criteria::graph_oracle_gap(100, Adjacency::Softmax, 21);
    assert!(gap <= 1e-9, "gap {gap:e}");
}

#[test]
fn raw_adjacency_matches_too() {
    let gap = criteria::graph_oracle_gap(50, Adjacency::Raw, 23);
    assert!(gap <= 1e-9, "gap {gap:e}");
}

#[test]
fn generated_answers_agree_with_the_text_reading_oracle() {
    let (n, bad) = criteria::qa_oracle_disagreements(1000, 22);
    assert_eq!(n, 1000);
    assert!(bad.is_empty(), "{} disagreements, e.g. {}", bad.len(), bad[0]);
}

fn step(verb: &str, ingredients: &[&str], start: f64, duration: f64) -> Step {
    use procqa::world::catalog::{ingredient_index, verb_index};
    Step {
        verb: verb_index(verb).unwrap(),
        ingredients: ingredients.iter().map(|i| ingredient_index(i).unwrap()).collect(),
        duration_s: duration,
        start_s: start,
        end_s: start + duration,
    }
}

fn salt_water() -> RecipeTrace {
    RecipeTrace::from_steps(
        vec![
            step("add", &["salt"], 0.0, 30.0),
            step("stir", &[], 35.0, 60.0),
            step("add", &["milk"], 100.0, 20.0),
        ],
        130.0,
    )
}

#[test]
fn hand_worked_answers() {
    let t = salt_water();
    let add = procqa::world::catalog::verb_index("add").unwrap();
    assert_eq!(oracle_answer(&t, &QuestionForm::CountVerb { verb: add }).unwrap(), "2");
    assert_eq!(oracle_answer(&t, &QuestionForm::After { step: 1 }).unwrap(), "add milk");
    assert_eq!(oracle_answer(&t, &QuestionForm::Faster { a: 0, b: 1 }).unwrap(), "add salt");
    let chop = procqa::world::catalog::verb_index("chop").unwrap();
    assert_eq!(oracle_answer(&t, &QuestionForm::CountVerb { verb: chop }).unwrap(), "0");
    let salt = procqa::world::catalog::ingredient_index("salt").unwrap();
    let at_start = QuestionForm::StateAt { ingredient: salt, after: None };
    assert_eq!(oracle_answer(&t, &at_start).unwrap(), "raw");
    for q in [
        "how many times do they add ?",
        "what happens after stir ?",
        "which one is faster : add salt or stir ?",
        "what state is the salt in at the start ?",
    ] {
        assert!(replay::answer(&t, q).is_some(), "{q}");
    }
}

#[test]
fn dangling_references_are_errors() {
    let t = salt_water();
    assert!(oracle_answer(&t, &QuestionForm::After { step: 2 }).is_err());
    assert!(oracle_answer(&t, &QuestionForm::Before { step: 7 }).is_err());
    assert!(oracle_answer(&t, &QuestionForm::CountVerb { verb: 99 }).is_err());
}
