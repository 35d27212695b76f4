use rand::seq::IndexedRandom;
use rand::Rng;

const VERBS: [&str; 10] = ["get", "set", "process", "update", "load", "save", "read", "write", "find", "build"];
const ADJECTIVES: [&str; 10] = ["max", "min", "current", "default", "base", "next", "prev", "total", "local", "temp"];
const NOUNS: [&str; 10] = ["Value", "Name", "Count", "Index", "Buffer", "Config", "Item", "Node", "Result", "Url"];
const TYPES: [&str; 20] = [
    "Vector", "Widget", "Node", "Stream", "Request", "Response", "Order", "Customer", "Handler",
    "Buffer", "Account", "Invoice", "Message", "Session", "Token", "Record", "Entry", "Channel",
    "Report", "Shape",
];
pub const BASE_NAMES: [&str; 10] = ["value", "item", "index", "name", "key", "count", "source", "target", "other", "element"];

pub const INTS: [&str; 20] = [
    "0", "1", "2", "3", "4", "5", "8", "10", "16", "32", "42", "64", "100", "128", "255", "256",
    "500", "1000", "1024", "3000",
];
pub const FLOATS: [&str; 8] = ["0.5", "1.5", "2.345", "4.234", "0.25", "3.14", "0.1", "9.81"];
pub const STRINGS: [&str; 8] = [
    "\"\"", "\"id\"", "\"name\"", "\"Alice\"", "\"Bob\"", "\"error\"", "\"utf-8\"", "\"/tmp\"",
];

/// Which identifiers a generator may draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdentifierScope {
    /// Every class draws from the full 200-name pool.
    #[default]
    Shared,
    /// Class `c` of `k` only draws names whose pool index is `c` modulo `k`,
    /// so raw identifiers alone reveal the class.
    PerClass,
}

/// Identifier pools: 100 method names (verb + noun), 100 variable names
/// (adjective + noun) and 20 type names.
#[derive(Debug, Clone)]
pub struct NamePool {
    pub methods: Vec<String>,
    pub variables: Vec<String>,
    pub types: Vec<String>,
}

impl NamePool {
    pub fn full() -> Self {
        let cross = |first: &[&str]| -> Vec<String> {
            first
                .iter()
                .flat_map(|a| NOUNS.iter().map(move |n| format!("{a}{n}")))
                .collect()
        };
        Self {
            methods: cross(&VERBS),
            variables: cross(&ADJECTIVES),
            types: TYPES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn for_class(scope: IdentifierScope, class: usize, num_classes: usize) -> Self {
        let full = Self::full();
        match scope {
            IdentifierScope::Shared => full,
            IdentifierScope::PerClass => {
                let slice = |v: Vec<String>| -> Vec<String> {
                    v.into_iter()
                        .enumerate()
                        .filter(|(i, _)| i % num_classes == class % num_classes)
                        .map(|(_, s)| s)
                        .collect()
                };
                Self {
                    methods: slice(full.methods),
                    variables: slice(full.variables),
                    types: slice(full.types),
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.methods.len() + self.variables.len()
    }

    pub fn variable(&self, rng: &mut impl Rng) -> String {
        self.variables.choose(rng).unwrap().clone()
    }

    pub fn method(&self, rng: &mut impl Rng) -> String {
        self.methods.choose(rng).unwrap().clone()
    }

    pub fn type_name(&self, rng: &mut impl Rng) -> String {
        self.types.choose(rng).unwrap().clone()
    }

    pub fn variable_except(&self, rng: &mut impl Rng, avoid: &[&str]) -> Option<String> {
        other(&self.variables, rng, avoid)
    }

    pub fn method_except(&self, rng: &mut impl Rng, avoid: &[&str]) -> Option<String> {
        other(&self.methods, rng, avoid)
    }
}

fn other(pool: &[String], rng: &mut impl Rng, avoid: &[&str]) -> Option<String> {
    let options: Vec<&String> = pool.iter().filter(|s| !avoid.contains(&s.as_str())).collect();
    options.choose(rng).map(|s| s.to_string())
}
