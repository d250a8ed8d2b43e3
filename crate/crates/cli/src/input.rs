use std::path::{Path, PathBuf};

use pmas_core::model::{parse_document, parse_formula, validate_pmas, MFormula, Model, RelInterpretation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{msg}")]
    Model { path: PathBuf, msg: String },
    #[error("--goal: {0}")]
    Goal(String),
    #[error("--counts: {0}")]
    Counts(String),
    #[error("{path}:{line}: {msg}")]
    Interp { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Other(String),
}

pub fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_owned(), source })
}

/// Parse and resolve a model file. Every diagnostic is reported, one per
/// line, with its source position.
pub fn load_model(path: &Path) -> Result<Model, InputError> {
    let src = read(path)?;
    let fail = |msgs: Vec<String>| InputError::Model { path: path.to_owned(), msg: msgs.join(&format!("\n{}:", path.display())) };
    let (p, map) = parse_document(&src).map_err(|e| fail(vec![e.to_string()]))?;
    let diags = validate_pmas(&p);
    if !diags.is_empty() {
        return Err(fail(diags.iter().map(|d| map.locate(d).to_string()).collect()));
    }
    Model::new(&p).map_err(|ds| fail(ds.iter().map(|d| map.locate(d).to_string()).collect()))
}

/// The goal to check: the override if given, else the model's own.
pub fn goal(m: &Model, text: Option<&str>) -> Result<MFormula, InputError> {
    match text {
        Some(t) => {
            let f = parse_formula(t, &m.source).map_err(|e| InputError::Goal(e.to_string()))?;
            m.resolve_goal(&f).map_err(|ds| {
                InputError::Goal(ds.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
            })
        }
        None => m.goal.clone().ok_or_else(|| InputError::Goal("model has no goal and none was given".into())),
    }
}

/// `T=k,...`; unlisted agent templates get one agent.
pub fn counts(m: &Model, text: Option<&str>) -> Result<Vec<usize>, InputError> {
    let mut out: Vec<usize> = (0..m.templates.len()).map(|t| usize::from(t != m.env)).collect();
    let Some(text) = text else { return Ok(out) };
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, k) = part.split_once('=').ok_or_else(|| InputError::Counts(format!("expected T=k, got `{part}`")))?;
        let t = m
            .template_index(name.trim())
            .ok_or_else(|| InputError::Counts(format!("unknown template `{}`", name.trim())))?;
        if t == m.env {
            return Err(InputError::Counts("the environment always has exactly one agent".into()));
        }
        let k: usize = k.trim().parse().map_err(|_| InputError::Counts(format!("bad count `{}`", k.trim())))?;
        if k == 0 {
            return Err(InputError::Counts(format!("template `{}` needs at least one agent", name.trim())));
        }
        out[t] = k;
    }
    Ok(out)
}

/// Relation tuples, one `R(c1, ..., cm)` per line. Blank lines and `#`
/// comments are skipped.
pub fn interpretation(m: &Model, path: Option<&Path>) -> Result<RelInterpretation, InputError> {
    let mut i0 = RelInterpretation::empty(m);
    let Some(path) = path else { return Ok(i0) };
    let src = read(path)?;
    for (n, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| InputError::Interp { path: path.to_owned(), line: n + 1, msg };
        let (name, rest) = line.split_once('(').ok_or_else(|| err(format!("expected R(c1, ..., cm), got `{line}`")))?;
        let args = rest.strip_suffix(')').ok_or_else(|| err("missing `)`".into()))?;
        let r = m.rels.iter().position(|r| r.name == name.trim()).ok_or_else(|| err(format!("unknown relation `{}`", name.trim())))?;
        let args: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        if args.len() != m.rels[r].args.len() {
            return Err(err(format!("`{}` takes {} arguments", m.rels[r].name, m.rels[r].args.len())));
        }
        let mut tuple = Vec::new();
        for (a, &sort) in args.iter().zip(&m.rels[r].args) {
            let v = m.sorts[sort]
                .values
                .iter()
                .position(|v| v == a)
                .ok_or_else(|| err(format!("`{a}` is not a value of sort {}", m.sorts[sort].name)))?;
            tuple.push(v as u16);
        }
        i0.tuples[r].insert(tuple);
    }
    Ok(i0)
}

pub fn show_interpretation(m: &Model, i0: &RelInterpretation) -> String {
    let mut parts = Vec::new();
    for (r, tuples) in i0.tuples.iter().enumerate() {
        for t in tuples {
            let args: Vec<&str> = t.iter().zip(&m.rels[r].args).map(|(v, s)| m.value_name(*s, *v)).collect();
            parts.push(format!("{}({})", m.rels[r].name, args.join(", ")));
        }
    }
    if parts.is_empty() {
        "{}".into()
    } else {
        parts.join(" ")
    }
}

pub fn show_counts(m: &Model, counts: &[usize]) -> String {
    m.agent_templates().map(|t| format!("{}={}", m.templates[t].name, counts[t])).collect::<Vec<_>>().join(",")
}
