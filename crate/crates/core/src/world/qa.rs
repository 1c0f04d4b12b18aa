//! Templated questions over a recipe trace, their ground-truth answers and
//! multiple-choice distractors.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::catalog::{Attributes, COLORS, FLAVORS, INGREDIENTS, STATES, VERBS};
use super::recipe::RecipeTrace;
use crate::error::{Error, Result};
use crate::heads::{normalize_answer, NUM_CHOICES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Count,
    Order,
    Taste,
    Time,
    Complex,
    Property,
}

impl Tag {
    /// Table column order.
    pub const ALL: [Tag; 6] = [
        Tag::Count,
        Tag::Order,
        Tag::Taste,
        Tag::Time,
        Tag::Complex,
        Tag::Property,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Count => "count",
            Tag::Order => "order",
            Tag::Taste => "taste",
            Tag::Time => "time",
            Tag::Complex => "complex",
            Tag::Property => "property",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnswerType {
    #[serde(rename = "yes/no")]
    YesNo,
    #[serde(rename = "numeric")]
    Numeric,
    #[serde(rename = "single word")]
    SingleWord,
    #[serde(rename = "text")]
    Text,
}

impl AnswerType {
    /// Classifies an answer string: yes/no, numbers, one word, or several words.
    pub fn of(answer: &str) -> Self {
        let a = normalize_answer(answer);
        if a == "yes" || a == "no" {
            AnswerType::YesNo
        } else if !a.is_empty() && a.chars().all(|c| c.is_ascii_digit()) {
            AnswerType::Numeric
        } else if !a.contains(' ') {
            AnswerType::SingleWord
        } else {
            AnswerType::Text
        }
    }
}

/// Machine-readable question. Step references are indices into the trace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuestionForm {
    CountVerb {
        verb: usize,
    },
    CountColor {
        color: usize,
    },
    CountSteps,
    Faster {
        a: usize,
        b: usize,
    },
    Longest,
    Before {
        step: usize,
    },
    After {
        step: usize,
    },
    Between {
        first: usize,
        last: usize,
    },
    First,
    Last,
    OrderMatters {
        a: usize,
        b: usize,
    },
    HasFlavor {
        flavor: usize,
    },
    DishFlavors,
    StateAt {
        ingredient: usize,
        after: Option<usize>,
    },
    ColorAt {
        ingredient: usize,
        after: Option<usize>,
    },
    CountVerbBefore {
        verb: usize,
        anchor: usize,
    },
    AfterLongest,
}

/// What kind of value an answer is, which decides where distractors come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AnswerKind {
    Count,
    StepName,
    YesNo,
    Flavors,
    State,
    Color,
}

impl QuestionForm {
    /// Primary category first.
    pub fn tags(&self) -> Vec<Tag> {
        use QuestionForm::*;
        match self {
            CountVerb { .. } | CountColor { .. } | CountSteps => vec![Tag::Count],
            Faster { .. } | Longest => vec![Tag::Time],
            Before { .. } | After { .. } | Between { .. } | First | Last | OrderMatters { .. } => {
                vec![Tag::Order]
            }
            HasFlavor { .. } | DishFlavors => vec![Tag::Taste],
            StateAt { after, .. } | ColorAt { after, .. } => match after {
                Some(_) => vec![Tag::Property, Tag::Order],
                None => vec![Tag::Property],
            },
            CountVerbBefore { .. } => vec![Tag::Complex, Tag::Count, Tag::Order],
            AfterLongest => vec![Tag::Complex, Tag::Time, Tag::Order],
        }
    }

    fn kind(&self) -> AnswerKind {
        use QuestionForm::*;
        match self {
            CountVerb { .. } | CountColor { .. } | CountSteps | CountVerbBefore { .. } => {
                AnswerKind::Count
            }
            Faster { .. }
            | Longest
            | Before { .. }
            | After { .. }
            | Between { .. }
            | First
            | Last
            | AfterLongest => AnswerKind::StepName,
            OrderMatters { .. } | HasFlavor { .. } => AnswerKind::YesNo,
            DishFlavors => AnswerKind::Flavors,
            StateAt { .. } => AnswerKind::State,
            ColorAt { .. } => AnswerKind::Color,
        }
    }

    /// Natural-language rendering; the only part of a question models see.
    pub fn render(&self, trace: &RecipeTrace) -> Result<String> {
        use QuestionForm::*;
        let step = |i: usize| -> Result<String> {
            trace
                .steps
                .get(i)
                .map(|s| s.name())
                .ok_or_else(|| dangling("step", i))
        };
        let when = |after: &Option<usize>| -> Result<String> {
            match after {
                Some(i) => Ok(format!("after {}", step(*i)?)),
                None => Ok("at the start".to_string()),
            }
        };
        Ok(match self {
            CountVerb { verb } => format!("how many times do they {} ?", verb_name(*verb)?),
            CountColor { color } => {
                format!("how many {} ingredients are used ?", color_name(*color)?)
            }
            CountSteps => "how many steps are there ?".into(),
            Faster { a, b } => format!("which one is faster : {} or {} ?", step(*a)?, step(*b)?),
            Longest => "which step takes the longest ?".into(),
            Before { step: s } => format!("what happens before {} ?", step(*s)?),
            After { step: s } => format!("what happens after {} ?", step(*s)?),
            Between { first, last } => {
                format!(
                    "what happens between {} and {} ?",
                    step(*first)?,
                    step(*last)?
                )
            }
            First => "what do they do first ?".into(),
            Last => "what do they do last ?".into(),
            OrderMatters { a, b } => format!(
                "does it matter to change the order of {} and {} ?",
                step(*a)?,
                step(*b)?
            ),
            HasFlavor { flavor } => format!("is the dish {} ?", flavor_name(*flavor)?),
            DishFlavors => "how does the dish taste ?".into(),
            StateAt { ingredient, after } => format!(
                "what state is the {} in {} ?",
                ingredient_name(*ingredient)?,
                when(after)?
            ),
            ColorAt { ingredient, after } => format!(
                "what color is the {} {} ?",
                ingredient_name(*ingredient)?,
                when(after)?
            ),
            CountVerbBefore { verb, anchor } => format!(
                "how many times do they {} before {} ?",
                verb_name(*verb)?,
                step(*anchor)?
            ),
            AfterLongest => "what happens after the longest step ?".into(),
        })
    }
}

fn dangling(what: &str, i: usize) -> Error {
    Error::contract(format!("question references missing {what} {i}"))
}

fn verb_name(i: usize) -> Result<&'static str> {
    VERBS
        .get(i)
        .map(|v| v.name)
        .ok_or_else(|| dangling("verb", i))
}

fn color_name(i: usize) -> Result<&'static str> {
    COLORS.get(i).copied().ok_or_else(|| dangling("color", i))
}

fn flavor_name(i: usize) -> Result<&'static str> {
    FLAVORS.get(i).copied().ok_or_else(|| dangling("flavor", i))
}

fn ingredient_name(i: usize) -> Result<&'static str> {
    INGREDIENTS
        .get(i)
        .map(|s| s.name)
        .ok_or_else(|| dangling("ingredient", i))
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn check_step(trace: &RecipeTrace, i: usize) -> Result<()> {
    if i < trace.len() {
        Ok(())
    } else {
        Err(dangling("step", i))
    }
}

/// Index of the unique longest step, if there is one.
fn longest_step(trace: &RecipeTrace) -> Result<usize> {
    let max = trace
        .steps
        .iter()
        .map(|s| s.duration_s)
        .fold(f64::NEG_INFINITY, f64::max);
    let idx: Vec<usize> = (0..trace.len())
        .filter(|&i| trace.steps[i].duration_s == max)
        .collect();
    match idx.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::contract("longest step is not unique")),
    }
}

/// Flavors of every used ingredient, in catalog order, space separated.
fn dish_flavors(trace: &RecipeTrace) -> String {
    let set: BTreeSet<usize> = trace
        .used_ingredients()
        .into_iter()
        .map(|i| INGREDIENTS[i].flavor)
        .collect();
    set.into_iter()
        .map(|f| FLAVORS[f])
        .collect::<Vec<_>>()
        .join(" ")
}

fn attributes_at(
    trace: &RecipeTrace,
    ingredient: usize,
    after: Option<usize>,
) -> Result<Attributes> {
    ingredient_name(ingredient)?;
    let upto = match after {
        Some(i) => {
            check_step(trace, i)?;
            i + 1
        }
        None => 0,
    };
    trace
        .attributes_after(upto)
        .get(&ingredient)
        .copied()
        .ok_or_else(|| {
            Error::contract(format!("ingredient {ingredient} is not used in the recipe"))
        })
}

/// Ground-truth answer by replaying the trace.
pub fn oracle_answer(trace: &RecipeTrace, form: &QuestionForm) -> Result<String> {
    use QuestionForm::*;
    let name = |i: usize| -> Result<String> {
        check_step(trace, i)?;
        Ok(trace.steps[i].name())
    };
    match form {
        CountVerb { verb } => {
            verb_name(*verb)?;
            Ok(trace
                .steps
                .iter()
                .filter(|s| s.verb == *verb)
                .count()
                .to_string())
        }
        CountColor { color } => {
            color_name(*color)?;
            let n = trace
                .used_ingredients()
                .into_iter()
                .filter(|&i| INGREDIENTS[i].color == *color)
                .count();
            Ok(n.to_string())
        }
        CountSteps => Ok(trace.len().to_string()),
        Faster { a, b } => {
            check_step(trace, *a)?;
            check_step(trace, *b)?;
            let (da, db) = (trace.steps[*a].duration_s, trace.steps[*b].duration_s);
            if da == db {
                return Err(Error::contract("compared steps have equal durations"));
            }
            name(if da < db { *a } else { *b })
        }
        Longest => name(longest_step(trace)?),
        Before { step } => {
            check_step(trace, *step)?;
            if *step == 0 {
                return Err(Error::contract("nothing happens before the first step"));
            }
            name(step - 1)
        }
        After { step } => name(step + 1).and_then(|n| check_step(trace, *step).map(|_| n)),
        Between { first, last } => {
            check_step(trace, *last)?;
            if *last != first + 2 {
                return Err(Error::contract(
                    "between needs exactly one intermediate step",
                ));
            }
            name(first + 1)
        }
        First => name(0),
        Last => name(trace.len().saturating_sub(1)),
        OrderMatters { a, b } => {
            check_step(trace, *a)?;
            check_step(trace, *b)?;
            let mut swapped = trace.steps.clone();
            swapped.swap(*a, *b);
            let changed = super::recipe::replay(&swapped, swapped.len()) != trace.final_attributes;
            Ok(yes_no(changed))
        }
        HasFlavor { flavor } => {
            flavor_name(*flavor)?;
            Ok(yes_no(
                trace
                    .used_ingredients()
                    .into_iter()
                    .any(|i| INGREDIENTS[i].flavor == *flavor),
            ))
        }
        DishFlavors => Ok(dish_flavors(trace)),
        StateAt { ingredient, after } => {
            Ok(STATES[attributes_at(trace, *ingredient, *after)?.state].to_string())
        }
        ColorAt { ingredient, after } => {
            Ok(COLORS[attributes_at(trace, *ingredient, *after)?.color].to_string())
        }
        CountVerbBefore { verb, anchor } => {
            verb_name(*verb)?;
            check_step(trace, *anchor)?;
            let n = trace.steps[..*anchor]
                .iter()
                .filter(|s| s.verb == *verb)
                .count();
            Ok(n.to_string())
        }
        AfterLongest => {
            let l = longest_step(trace)?;
            if l + 1 >= trace.len() {
                return Err(Error::contract("the longest step is the last one"));
            }
            name(l + 1)
        }
    }
}

/// One generated question with its answer and five shuffled choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaItem {
    pub question: String,
    pub answer: String,
    pub choices: Vec<String>,
    pub tags: Vec<Tag>,
    pub answer_type: AnswerType,
    pub form: QuestionForm,
}

impl QaItem {
    pub fn correct_index(&self) -> Option<usize> {
        let a = normalize_answer(&self.answer);
        self.choices.iter().position(|c| normalize_answer(c) == a)
    }
}

/// Relative frequency of each primary category, and generation constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixConfig {
    pub count: f64,
    pub order: f64,
    pub taste: f64,
    pub time: f64,
    pub complex: f64,
    pub property: f64,
    /// Compared durations differ by at least this many seconds.
    pub min_duration_gap_s: f64,
}

impl Default for MixConfig {
    fn default() -> Self {
        Self {
            count: 0.2,
            order: 0.25,
            taste: 0.1,
            time: 0.15,
            complex: 0.15,
            property: 0.15,
            min_duration_gap_s: 20.0,
        }
    }
}

impl MixConfig {
    pub fn weight(&self, tag: Tag) -> f64 {
        match tag {
            Tag::Count => self.count,
            Tag::Order => self.order,
            Tag::Taste => self.taste,
            Tag::Time => self.time,
            Tag::Complex => self.complex,
            Tag::Property => self.property,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ws: Vec<f64> = Tag::ALL.iter().map(|&t| self.weight(t)).collect();
        if ws.iter().any(|w| !(*w >= 0.0)) || ws.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Config(
                "category mix weights must be ≥ 0 with a positive sum".into(),
            ));
        }
        Ok(())
    }
}

fn sample_tag<R: Rng + ?Sized>(rng: &mut R, mix: &MixConfig) -> Tag {
    let total: f64 = Tag::ALL.iter().map(|&t| mix.weight(t)).sum();
    let mut u = rng.random::<f64>() * total;
    for t in Tag::ALL {
        u -= mix.weight(t);
        if u < 0.0 {
            return t;
        }
    }
    *Tag::ALL
        .iter()
        .rev()
        .find(|&&t| mix.weight(t) > 0.0)
        .expect("positive weight exists")
}

/// Step pairs `(a, b)`, `a < b`, both uniquely named, durations far enough apart.
fn comparable_pairs(trace: &RecipeTrace, gap: f64) -> Vec<(usize, usize)> {
    let uniq = trace.uniquely_named_steps();
    let mut out = Vec::new();
    for (k, &a) in uniq.iter().enumerate() {
        for &b in &uniq[k + 1..] {
            if (trace.steps[a].duration_s - trace.steps[b].duration_s).abs() >= gap {
                out.push((a, b));
            }
        }
    }
    out
}

fn clear_longest(trace: &RecipeTrace, gap: f64) -> Option<usize> {
    let l = longest_step(trace).ok()?;
    let top = trace.steps[l].duration_s;
    let clear = trace
        .steps
        .iter()
        .enumerate()
        .all(|(i, s)| i == l || top - s.duration_s >= gap);
    (clear && trace.uniquely_named_steps().contains(&l)).then_some(l)
}

/// Candidate question of category `tag`, or `None` when the trace cannot support one.
fn propose<R: Rng + ?Sized>(
    tag: Tag,
    trace: &RecipeTrace,
    rng: &mut R,
    mix: &MixConfig,
) -> Option<QuestionForm> {
    use QuestionForm::*;
    let n = trace.len();
    let uniq = trace.uniquely_named_steps();
    let used = trace.used_ingredients();
    let gap = mix.min_duration_gap_s;
    let mut options: Vec<QuestionForm> = Vec::new();
    match tag {
        Tag::Count => {
            let present: Vec<usize> = trace.steps.iter().map(|s| s.verb).collect();
            let verb = if rng.random::<f64>() < 0.8 {
                *present.choose(rng)?
            } else {
                rng.random_range(0..VERBS.len())
            };
            options.push(CountVerb { verb });
            options.push(CountColor {
                color: rng.random_range(0..COLORS.len()),
            });
            options.push(CountSteps);
        }
        Tag::Time => {
            if let Some(&(a, b)) = comparable_pairs(trace, gap).choose(rng) {
                let (a, b) = if rng.random::<bool>() { (a, b) } else { (b, a) };
                options.push(Faster { a, b });
            }
            if clear_longest(trace, gap).is_some() {
                options.push(Longest);
            }
        }
        Tag::Order => {
            if let Some(&s) = uniq
                .iter()
                .filter(|&&s| s >= 1)
                .collect::<Vec<_>>()
                .choose(rng)
            {
                options.push(Before { step: *s });
            }
            if let Some(&s) = uniq
                .iter()
                .filter(|&&s| s + 1 < n)
                .collect::<Vec<_>>()
                .choose(rng)
            {
                options.push(After { step: *s });
            }
            let betweens: Vec<usize> = (0..n.saturating_sub(2))
                .filter(|f| uniq.contains(f) && uniq.contains(&(f + 2)))
                .collect();
            if let Some(&f) = betweens.choose(rng) {
                options.push(Between {
                    first: f,
                    last: f + 2,
                });
            }
            options.push(First);
            options.push(Last);
            if uniq.len() >= 2 {
                let pick: Vec<usize> = uniq.choose_multiple(rng, 2).copied().collect();
                let (a, b) = (pick[0].min(pick[1]), pick[0].max(pick[1]));
                options.push(OrderMatters { a, b });
            }
        }
        Tag::Taste => {
            options.push(HasFlavor {
                flavor: rng.random_range(0..FLAVORS.len()),
            });
            options.push(DishFlavors);
        }
        Tag::Property => {
            let ingredient = *used.choose(rng)?;
            let touching: Vec<usize> = (0..n)
                .filter(|&i| uniq.contains(&i) && trace.steps[i].ingredients.contains(&ingredient))
                .collect();
            let after = if rng.random::<f64>() < 0.25 || touching.is_empty() {
                None
            } else {
                touching.choose(rng).copied()
            };
            options.push(StateAt { ingredient, after });
            options.push(ColorAt { ingredient, after });
        }
        Tag::Complex => {
            let anchors: Vec<usize> = uniq.iter().copied().filter(|&a| a >= 1).collect();
            if let Some(&anchor) = anchors.choose(rng) {
                let verb = trace.steps[rng.random_range(0..n)].verb;
                options.push(CountVerbBefore { verb, anchor });
            }
            if let Some(l) = clear_longest(trace, gap) {
                if l + 1 < n {
                    options.push(AfterLongest);
                }
            }
        }
    }
    options.choose(rng).cloned()
}

fn fake_step_name<R: Rng + ?Sized>(trace: &RecipeTrace, rng: &mut R) -> String {
    let verb = rng.random_range(0..VERBS.len());
    let used = trace.used_ingredients();
    let spec = &VERBS[verb];
    let k = rng.random_range(spec.min_ingredients..=spec.max_ingredients);
    let mut ings: Vec<usize> = if rng.random::<bool>() && !used.is_empty() {
        used.choose_multiple(rng, k.min(used.len()))
            .copied()
            .collect()
    } else {
        (0..INGREDIENTS.len())
            .collect::<Vec<_>>()
            .choose_multiple(rng, k)
            .copied()
            .collect()
    };
    ings.sort_unstable();
    let mut s = spec.name.to_string();
    for (j, i) in ings.iter().enumerate() {
        s.push_str(if j == 0 { " " } else { " and " });
        s.push_str(INGREDIENTS[*i].name);
    }
    s
}

fn distractors<R: Rng + ?Sized>(
    form: &QuestionForm,
    answer: &str,
    trace: &RecipeTrace,
    rng: &mut R,
) -> Vec<String> {
    let mut seen: HashSet<String> = HashSet::from([normalize_answer(answer)]);
    let mut out: Vec<String> = Vec::new();
    let mut offer = |c: String, out: &mut Vec<String>| {
        if out.len() < NUM_CHOICES - 1 && seen.insert(normalize_answer(&c)) {
            out.push(c);
        }
    };
    match form.kind() {
        AnswerKind::Count => {
            let c: i64 = answer.parse().expect("count answers are integers");
            let lo = (c - rng.random_range(0..NUM_CHOICES as i64)).max(0);
            for v in lo..lo + NUM_CHOICES as i64 {
                offer(v.to_string(), &mut out);
            }
        }
        AnswerKind::StepName => {
            if let QuestionForm::Faster { a, b } = form {
                offer(trace.steps[*a].name(), &mut out);
                offer(trace.steps[*b].name(), &mut out);
            }
            let mut names: Vec<String> = trace.steps.iter().map(|s| s.name()).collect();
            names.shuffle(rng);
            for nm in names {
                offer(nm, &mut out);
            }
            while out.len() < NUM_CHOICES - 1 {
                offer(fake_step_name(trace, rng), &mut out);
            }
        }
        AnswerKind::YesNo => {
            for w in ["yes", "no", "maybe", "sometimes", "never"] {
                offer(w.to_string(), &mut out);
            }
        }
        AnswerKind::Flavors => {
            let size = answer.split(' ').count();
            while out.len() < NUM_CHOICES - 1 {
                let k = (size as i64 + rng.random_range(-1..=1)).clamp(1, FLAVORS.len() as i64)
                    as usize;
                let mut pick: Vec<usize> = (0..FLAVORS.len())
                    .collect::<Vec<_>>()
                    .choose_multiple(rng, k)
                    .copied()
                    .collect();
                pick.sort_unstable();
                offer(
                    pick.iter()
                        .map(|&f| FLAVORS[f])
                        .collect::<Vec<_>>()
                        .join(" "),
                    &mut out,
                );
            }
        }
        AnswerKind::State => {
            for s in STATES {
                offer(s.to_string(), &mut out);
            }
        }
        AnswerKind::Color => {
            let mut cs = COLORS.to_vec();
            cs.shuffle(rng);
            for c in cs {
                offer(c.to_string(), &mut out);
            }
        }
    }
    out
}

/// Builds a complete item for `form`, checking answer-in-choices and distinctness.
pub fn make_item<R: Rng + ?Sized>(
    trace: &RecipeTrace,
    form: QuestionForm,
    rng: &mut R,
) -> Result<QaItem> {
    let answer = oracle_answer(trace, &form)?;
    let mut choices = distractors(&form, &answer, trace, rng);
    choices.push(answer.clone());
    choices.shuffle(rng);
    let item = QaItem {
        question: form.render(trace)?,
        answer_type: AnswerType::of(&answer),
        tags: form.tags(),
        answer,
        choices,
        form,
    };
    validate_item(&item)?;
    Ok(item)
}

pub fn validate_item(item: &QaItem) -> Result<()> {
    if item.choices.len() != NUM_CHOICES {
        return Err(Error::contract(format!(
            "`{}` has {} choices",
            item.question,
            item.choices.len()
        )));
    }
    let distinct: HashSet<String> = item.choices.iter().map(|c| normalize_answer(c)).collect();
    if distinct.len() != NUM_CHOICES {
        return Err(Error::contract(format!(
            "`{}` has repeated choices",
            item.question
        )));
    }
    if item.correct_index().is_none() {
        return Err(Error::contract(format!(
            "`{}` answer is not a choice",
            item.question
        )));
    }
    if item.tags.is_empty() {
        return Err(Error::contract(format!("`{}` has no tags", item.question)));
    }
    Ok(())
}

/// Draws up to `count` distinct questions about `trace`. Categories are drawn
/// from `mix`; a category the trace cannot support is skipped.
pub fn generate_qa<R: Rng + ?Sized>(
    trace: &RecipeTrace,
    rng: &mut R,
    mix: &MixConfig,
    count: usize,
) -> Result<Vec<QaItem>> {
    let mut items = Vec::with_capacity(count);
    let mut asked: HashSet<String> = HashSet::new();
    let mut attempts = 0;
    while items.len() < count && attempts < count * 20 {
        attempts += 1;
        let tag = sample_tag(rng, mix);
        let Some(form) = propose(tag, trace, rng, mix) else {
            continue;
        };
        let item = make_item(trace, form, rng)?;
        if asked.insert(item.question.clone()) {
            items.push(item);
        }
    }
    Ok(items)
}
