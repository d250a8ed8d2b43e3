use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::encoder::{AbPmas, StepKind};
use crate::model::Model;

use super::TraceStep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RunStepKind {
    Local,
    Sync,
    Individual,
}

impl fmt::Display for RunStepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStepKind::Local => "local",
            RunStepKind::Sync => "sync",
            RunStepKind::Individual => "individual",
        })
    }
}

/// One global step of the model: which (template, action) pairs took part.
/// Several agents of a template doing the same action collapse into one
/// pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunStep {
    pub kind: RunStepKind,
    pub actions: BTreeSet<(usize, String)>,
}

impl RunStep {
    pub fn describe(&self, m: &Model) -> String {
        let parts: Vec<String> =
            self.actions.iter().map(|(t, a)| format!("{}.{a}", m.templates[*t].name)).collect();
        format!("{} {{{}}}", self.kind, parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("rule {label} fires in phase {found} but the run is in phase {expected}")]
    Phase { label: String, expected: String, found: String },
    #[error("unknown rule index {0}")]
    Rule(usize),
}

/// Group a forward rule trace into global steps of the model. A step ends
/// at a rule that completes it; declarations left over at the end change
/// no model variable and are dropped.
pub fn extract_run_template(m: &Model, ab: &AbPmas, trace: &[TraceStep]) -> Result<Vec<RunStep>, TemplateError> {
    let graph = ab.phase_graph();
    let mut phase = ab.phases.p0;
    let mut steps = Vec::new();
    let mut cur: BTreeSet<(usize, String)> = BTreeSet::new();
    for s in trace {
        let r = ab.rules.get(s.rule).ok_or(TemplateError::Rule(s.rule))?;
        let (from, _, to) = &graph[s.rule];
        if *from != phase {
            return Err(TemplateError::Phase {
                label: r.label.clone(),
                expected: ab.sig.const_name(phase).to_string(),
                found: ab.sig.const_name(*from).to_string(),
            });
        }
        phase = *to;
        if let (Some(t), Some(a)) = (r.template, &r.action) {
            cur.insert((t, a.clone()));
        }
        let kind = match r.kind {
            StepKind::SyncCommit => RunStepKind::Sync,
            StepKind::Individual => RunStepKind::Individual,
            _ => RunStepKind::Local,
        };
        if matches!(kind, RunStepKind::Sync | RunStepKind::Individual) {
            cur.insert((m.env, r.action.clone().unwrap()));
        }
        if r.kind.completes_step() {
            steps.push(RunStep { kind, actions: std::mem::take(&mut cur) });
        }
    }
    Ok(steps)
}
