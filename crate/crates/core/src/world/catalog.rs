//! Fixed vocabulary of the recipe world: verbs, ingredients and their attributes.

pub const COLORS: [&str; 6] = ["white", "red", "green", "yellow", "brown", "orange"];
pub const STATES: [&str; 5] = ["raw", "chopped", "boiled", "fried", "mashed"];
pub const FLAVORS: [&str; 8] = [
    "salty", "sweet", "sour", "spicy", "bitter", "savory", "creamy", "fresh",
];

pub const RAW: usize = 0;
const CHOPPED: usize = 1;
const BOILED: usize = 2;
const FRIED: usize = 3;
const MASHED: usize = 4;
const BROWN: usize = 4;

/// What a verb does to each ingredient it touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    None,
    State(usize),
    StateAndColor(usize, usize),
}

#[derive(Debug, Clone, Copy)]
pub struct VerbSpec {
    pub name: &'static str,
    pub effect: Effect,
    pub min_ingredients: usize,
    pub max_ingredients: usize,
    /// Duration range in whole seconds, inclusive.
    pub duration_s: (u32, u32),
}

#[derive(Debug, Clone, Copy)]
pub struct IngredientSpec {
    pub name: &'static str,
    pub color: usize,
    pub flavor: usize,
}

const fn verb(
    name: &'static str,
    effect: Effect,
    min_ingredients: usize,
    max_ingredients: usize,
    lo: u32,
    hi: u32,
) -> VerbSpec {
    VerbSpec {
        name,
        effect,
        min_ingredients,
        max_ingredients,
        duration_s: (lo, hi),
    }
}

const fn ing(name: &'static str, color: usize, flavor: usize) -> IngredientSpec {
    IngredientSpec {
        name,
        color,
        flavor,
    }
}

pub const VERBS: [VerbSpec; 20] = [
    verb("add", Effect::None, 1, 2, 10, 40),
    verb("pour", Effect::None, 1, 1, 10, 40),
    verb("mix", Effect::None, 0, 1, 20, 70),
    verb("stir", Effect::None, 0, 1, 20, 70),
    verb("whisk", Effect::None, 0, 1, 20, 70),
    verb("season", Effect::None, 1, 2, 10, 30),
    verb("sprinkle", Effect::None, 1, 1, 10, 30),
    verb("knead", Effect::None, 1, 1, 60, 120),
    verb("chop", Effect::State(CHOPPED), 1, 1, 30, 90),
    verb("slice", Effect::State(CHOPPED), 1, 1, 30, 90),
    verb("dice", Effect::State(CHOPPED), 1, 1, 30, 90),
    verb("mince", Effect::State(CHOPPED), 1, 1, 30, 90),
    verb("boil", Effect::State(BOILED), 1, 1, 60, 150),
    verb("steam", Effect::State(BOILED), 1, 1, 60, 150),
    verb("fry", Effect::StateAndColor(FRIED, BROWN), 1, 2, 60, 150),
    verb("grill", Effect::StateAndColor(FRIED, BROWN), 1, 1, 60, 150),
    verb("roast", Effect::StateAndColor(FRIED, BROWN), 1, 1, 90, 180),
    verb("bake", Effect::StateAndColor(FRIED, BROWN), 1, 1, 90, 180),
    verb("mash", Effect::State(MASHED), 1, 1, 30, 90),
    verb("blend", Effect::State(MASHED), 1, 2, 30, 90),
];

pub const INGREDIENTS: [IngredientSpec; 30] = [
    ing("salt", 0, 0),
    ing("sugar", 0, 1),
    ing("rice", 0, 5),
    ing("milk", 0, 6),
    ing("onion", 0, 3),
    ing("garlic", 0, 3),
    ing("tomato", 1, 2),
    ing("chili", 1, 3),
    ing("beef", 1, 5),
    ing("pepper", 1, 1),
    ing("strawberry", 1, 1),
    ing("lettuce", 2, 7),
    ing("spinach", 2, 4),
    ing("cucumber", 2, 7),
    ing("basil", 2, 7),
    ing("lime", 2, 2),
    ing("broccoli", 2, 4),
    ing("lemon", 3, 2),
    ing("corn", 3, 1),
    ing("cheese", 3, 6),
    ing("butter", 3, 6),
    ing("egg", 3, 5),
    ing("potato", 4, 5),
    ing("mushroom", 4, 5),
    ing("bread", 4, 5),
    ing("chocolate", 4, 4),
    ing("soy", 4, 0),
    ing("carrot", 5, 1),
    ing("pumpkin", 5, 1),
    ing("mango", 5, 1),
];

/// Color and state of one ingredient at some point of a recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Attributes {
    pub color: usize,
    pub state: usize,
}

impl Attributes {
    pub fn initial(ingredient: usize) -> Self {
        Self {
            color: INGREDIENTS[ingredient].color,
            state: RAW,
        }
    }

    pub fn apply(self, effect: Effect) -> Self {
        match effect {
            Effect::None => self,
            Effect::State(s) => Attributes { state: s, ..self },
            Effect::StateAndColor(s, c) => Attributes { state: s, color: c },
        }
    }
}

pub fn verb_index(name: &str) -> Option<usize> {
    VERBS.iter().position(|v| v.name == name)
}

pub fn ingredient_index(name: &str) -> Option<usize> {
    INGREDIENTS.iter().position(|i| i.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn names_are_unique_single_tokens() {
        let mut seen = HashSet::new();
        let words = VERBS
            .iter()
            .map(|v| v.name)
            .chain(INGREDIENTS.iter().map(|i| i.name))
            .chain(COLORS)
            .chain(STATES)
            .chain(FLAVORS);
        for w in words {
            assert!(!w.contains(' '), "{w}");
            assert!(seen.insert(w), "duplicate word {w}");
        }
    }

    #[test]
    fn catalog_indices_in_range() {
        for i in INGREDIENTS {
            assert!(i.color < COLORS.len() && i.flavor < FLAVORS.len());
        }
        for v in VERBS {
            assert!(v.min_ingredients <= v.max_ingredients && v.max_ingredients <= 2);
            assert!(v.duration_s.0 <= v.duration_s.1);
        }
    }
}
