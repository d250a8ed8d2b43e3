use std::collections::HashMap;
use std::fmt;

/// Where in a model a diagnostic applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Model,
    Sort(String),
    Relation(String),
    Template(String),
    Var(String, String),
    Action(String, String),
    Effect(String, String, usize),
    Alternation,
    Goal,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Model => f.write_str("model"),
            Location::Sort(s) => write!(f, "sort {s}"),
            Location::Relation(r) => write!(f, "relation {r}"),
            Location::Template(t) => write!(f, "template {t}"),
            Location::Var(t, v) => write!(f, "variable {t}.{v}"),
            Location::Action(t, a) => write!(f, "action {t}.{a}"),
            Location::Effect(t, a, k) => write!(f, "effect #{} of {t}.{a}", k + 1),
            Location::Alternation => f.write_str("alternation"),
            Location::Goal => f.write_str("goal"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: Location,
    pub message: String,
}

impl Diagnostic {
    pub fn new(location: Location, message: impl Into<String>) -> Self {
        Diagnostic { location, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// A diagnostic with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positioned {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Positioned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for Positioned {}

/// Positions of the declarations a parser saw.
#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    spans: HashMap<Location, (usize, usize)>,
}

impl SourceMap {
    pub fn record(&mut self, loc: Location, pos: (usize, usize)) {
        self.spans.entry(loc).or_insert(pos);
    }

    pub fn position(&self, loc: &Location) -> (usize, usize) {
        if let Some(&p) = self.spans.get(loc) {
            return p;
        }
        let parent = match loc {
            Location::Var(t, _) | Location::Action(t, _) => Location::Template(t.clone()),
            Location::Effect(t, a, _) => Location::Action(t.clone(), a.clone()),
            _ => return (1, 1),
        };
        self.position(&parent)
    }

    pub fn locate(&self, d: &Diagnostic) -> Positioned {
        let (line, col) = self.position(&d.location);
        Positioned { line, col, message: d.to_string() }
    }
}
