//! A second answer oracle. It reads the rendered question text instead of the
//! structured form and replays ingredient attributes with its own effect table.

use std::collections::{BTreeMap, BTreeSet};

use procqa::world::catalog::{COLORS, FLAVORS, INGREDIENTS, VERBS};
use procqa::world::RecipeTrace;

fn effect(verb: &str) -> (Option<&'static str>, Option<&'static str>) {
    match verb {
        "chop" | "slice" | "dice" | "mince" => (Some("chopped"), None),
        "boil" | "steam" => (Some("boiled"), None),
        "fry" | "grill" | "roast" | "bake" => (Some("fried"), Some("brown")),
        "mash" | "blend" => (Some("mashed"), None),
        _ => (None, None),
    }
}

struct View {
    names: Vec<String>,
    verbs: Vec<&'static str>,
    ingredients: Vec<Vec<&'static str>>,
    durations: Vec<f64>,
}

impl View {
    fn of(trace: &RecipeTrace) -> Self {
        let verbs: Vec<&'static str> = trace.steps.iter().map(|s| VERBS[s.verb].name).collect();
        let ingredients: Vec<Vec<&'static str>> = trace
            .steps
            .iter()
            .map(|s| s.ingredients.iter().map(|&i| INGREDIENTS[i].name).collect())
            .collect();
        let names = verbs
            .iter()
            .zip(&ingredients)
            .map(|(v, ings)| {
                if ings.is_empty() {
                    v.to_string()
                } else {
                    format!("{v} {}", ings.join(" and "))
                }
            })
            .collect();
        Self {
            names,
            verbs,
            ingredients,
            durations: trace.steps.iter().map(|s| s.duration_s).collect(),
        }
    }

    /// Position of a step named exactly `name`, if it occurs once.
    fn unique(&self, name: &str) -> Option<usize> {
        let hits: Vec<usize> = (0..self.names.len()).filter(|&i| self.names[i] == name).collect();
        (hits.len() == 1).then(|| hits[0])
    }

    /// Splits `text` at one of its ` and ` separators into two unique step names.
    fn pair(&self, text: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut from = 0;
        while let Some(k) = text[from..].find(" and ") {
            let at = from + k;
            if let (Some(a), Some(b)) = (self.unique(&text[..at]), self.unique(&text[at + 5..])) {
                out.push((a, b));
            }
            from = at + 1;
        }
        out
    }

    fn used(&self) -> BTreeSet<&'static str> {
        self.ingredients.iter().flatten().copied().collect()
    }

    /// `(state, color)` of every used ingredient after the first `upto` steps
    /// taken in `order`.
    fn replay(&self, order: &[usize], upto: usize) -> BTreeMap<&'static str, (&'static str, &'static str)> {
        let mut attrs: BTreeMap<&'static str, (&'static str, &'static str)> = self
            .used()
            .into_iter()
            .map(|i| (i, ("raw", catalog_color(i))))
            .collect();
        for &s in &order[..upto] {
            let (state, color) = effect(self.verbs[s]);
            for ing in &self.ingredients[s] {
                let e = attrs.get_mut(ing).unwrap();
                if let Some(st) = state {
                    e.0 = st;
                }
                if let Some(c) = color {
                    e.1 = c;
                }
            }
        }
        attrs
    }

    fn longest(&self) -> Option<usize> {
        let max = self.durations.iter().cloned().fold(f64::MIN, f64::max);
        let at: Vec<usize> = (0..self.durations.len()).filter(|&i| self.durations[i] == max).collect();
        (at.len() == 1).then(|| at[0])
    }
}

fn catalog_color(ingredient: &str) -> &'static str {
    let spec = INGREDIENTS.iter().find(|i| i.name == ingredient).unwrap();
    COLORS[spec.color]
}

fn catalog_flavor(ingredient: &str) -> &'static str {
    let spec = INGREDIENTS.iter().find(|i| i.name == ingredient).unwrap();
    FLAVORS[spec.flavor]
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

/// Answers a rendered question about `trace`; `None` if the text is not understood.
pub fn answer(trace: &RecipeTrace, question: &str) -> Option<String> {
    let v = View::of(trace);
    let q = question.strip_suffix(" ?")?;
    let n = v.names.len();
    let identity: Vec<usize> = (0..n).collect();

    if q == "how many steps are there" {
        return Some(n.to_string());
    }
    if let Some(rest) = q.strip_prefix("how many times do they ") {
        if let Some((verb, anchor)) = rest.split_once(" before ") {
            let a = v.unique(anchor)?;
            return Some(v.verbs[..a].iter().filter(|x| **x == verb).count().to_string());
        }
        return Some(v.verbs.iter().filter(|x| **x == rest).count().to_string());
    }
    if let Some(rest) = q.strip_prefix("how many ") {
        let color = rest.strip_suffix(" ingredients are used")?;
        return Some(v.used().iter().filter(|i| catalog_color(i) == color).count().to_string());
    }
    if let Some(rest) = q.strip_prefix("which one is faster : ") {
        let (a, b) = rest.split_once(" or ")?;
        let (a, b) = (v.unique(a)?, v.unique(b)?);
        return Some(v.names[if v.durations[a] < v.durations[b] { a } else { b }].clone());
    }
    if q == "which step takes the longest" {
        return Some(v.names[v.longest()?].clone());
    }
    if q == "what happens after the longest step" {
        return v.names.get(v.longest()? + 1).cloned();
    }
    if q == "what do they do first" {
        return v.names.first().cloned();
    }
    if q == "what do they do last" {
        return v.names.last().cloned();
    }
    if let Some(rest) = q.strip_prefix("what happens before ") {
        let s = v.unique(rest)?;
        return v.names.get(s.checked_sub(1)?).cloned();
    }
    if let Some(rest) = q.strip_prefix("what happens after ") {
        return v.names.get(v.unique(rest)? + 1).cloned();
    }
    if let Some(rest) = q.strip_prefix("what happens between ") {
        let (a, _) = v.pair(rest).into_iter().find(|&(a, b)| b == a + 2)?;
        return Some(v.names[a + 1].clone());
    }
    if let Some(rest) = q.strip_prefix("does it matter to change the order of ") {
        let (a, b) = *v.pair(rest).first()?;
        let mut swapped = identity.clone();
        swapped.swap(a, b);
        return Some(yes_no(v.replay(&swapped, n) != v.replay(&identity, n)));
    }
    if let Some(flavor) = q.strip_prefix("is the dish ") {
        return Some(yes_no(v.used().iter().any(|i| catalog_flavor(i) == flavor)));
    }
    if q == "how does the dish taste" {
        let present: BTreeSet<&str> = v.used().iter().map(|i| catalog_flavor(i)).collect();
        let ordered: Vec<&str> = FLAVORS.iter().copied().filter(|f| present.contains(f)).collect();
        return Some(ordered.join(" "));
    }
    let (ingredient, when, want_state) = if let Some(rest) = q.strip_prefix("what state is the ") {
        let (ing, when) = rest.split_once(" in ")?;
        (ing, when, true)
    } else if let Some(rest) = q.strip_prefix("what color is the ") {
        let (ing, when) = rest.split_once(' ')?;
        (ing, when, false)
    } else {
        return None;
    };
    let upto = match when {
        "at the start" => 0,
        w => v.unique(w.strip_prefix("after ")?)? + 1,
    };
    let attrs = v.replay(&identity, upto);
    let (state, color) = attrs.get(ingredient)?;
    Some(if want_state { state } else { color }.to_string())
}
