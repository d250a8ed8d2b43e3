//! MCMT text export and witness decoding.

use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use crate::encoder::{AbPmas, BulkVal, TransitionRule};
use crate::engine::TraceStep;
use crate::logic::{Atom, Formula, IVar, Lit, SortKind, StateFormula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McmtError {
    #[error("rule {label} has {count} existential index variables; at most 2 are supported")]
    Arity { label: String, count: usize },
    #[error("universal guard of rule {0} quantifies more than one index variable")]
    UniversalArity(String),
    #[error("identifier `{0}` clashes with an MCMT keyword")]
    Keyword(String),
    #[error("the goal is unsatisfiable, so there is no :u_cnj clause to emit")]
    EmptyGoal,
}

const KEYWORDS: &[&str] = &[
    "and", "or", "not", "ite", "define", "define-type", "int", "real", "bool", "nat", "true", "false", "j", "x", "y",
];

fn reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || name.strip_prefix('z').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

struct Printer<'a> {
    ab: &'a AbPmas,
    names: HashMap<IVar, String>,
}

impl Printer<'_> {
    fn var(&self, v: IVar) -> String {
        self.names.get(&v).cloned().unwrap_or_else(|| format!("z{}", v.id + 1))
    }

    fn term(&self, t: &Term) -> String {
        let sig = &self.ab.sig;
        match *t {
            Term::Const(c) => sig.constant(c).name.clone(),
            Term::Global(g) => sig.global(g).name.clone(),
            Term::Read(a, v) => format!("{}[{}]", sig.array(a).name, self.var(v)),
        }
    }

    fn lit(&self, l: &Lit) -> String {
        let atom = match &l.atom {
            Atom::Eq(a, b) => format!("(= {} {})", self.term(a), self.term(b)),
            Atom::IdxEq(a, b) => format!("(= {} {})", self.var(*a), self.var(*b)),
            Atom::Rel(r, args) => {
                let args: Vec<String> = args.iter().map(|t| self.term(t)).collect();
                format!("({} {})", self.ab.sig.rel(*r).name, args.join(" "))
            }
        };
        if l.pos {
            atom
        } else {
            format!("(not {atom})")
        }
    }

    fn formula(&self, f: &Formula) -> String {
        match f {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Lit(l) => self.lit(l),
            Formula::Not(inner) => format!("(not {})", self.formula(inner)),
            Formula::And(ps) | Formula::Or(ps) => {
                let op = if matches!(f, Formula::And(_)) { "and" } else { "or" };
                let parts: Vec<String> = ps.iter().map(|p| self.formula(p)).collect();
                format!("({op} {})", parts.join(" "))
            }
        }
    }
}

fn check_names(ab: &AbPmas) -> Result<(), McmtError> {
    let sig = &ab.sig;
    let names = sig
        .sorts()
        .map(|(_, s)| s.name.as_str())
        .chain(sig.constants().map(|(_, c)| c.name.as_str()))
        .chain(sig.rels().map(|(_, r)| r.name.as_str()))
        .chain(sig.globals().map(|(_, g)| g.name.as_str()))
        .chain(sig.arrays().map(|(_, a)| a.name.as_str()));
    for n in names {
        if reserved(n) {
            return Err(McmtError::Keyword(n.to_string()));
        }
    }
    Ok(())
}

/// Values listed by a `:case`: arrays then globals, in declaration order.
fn vals(ab: &AbPmas, r: &TransitionRule, at_x: bool, x: Option<IVar>, branch: Option<&Lit>) -> Vec<String> {
    let sig = &ab.sig;
    let mut out = Vec::new();
    for (a, decl) in sig.arrays() {
        let keep = format!("{}[j]", decl.name);
        let point = if at_x { r.point_updates.iter().find(|(b, v, _)| *b == a && Some(*v) == x) } else { None };
        let v = if let Some(&(_, _, c)) = point {
            sig.const_name(c).to_string()
        } else if let Some(f) = r.bulk_update(a) {
            let hit = branch.and_then(|g| f.branches.iter().find(|(h, _)| h == g).map(|(_, c)| *c));
            match (hit, f.default) {
                (Some(c), _) | (None, BulkVal::Const(c)) => sig.const_name(c).to_string(),
                (None, BulkVal::Keep) => keep,
            }
        } else {
            keep
        };
        out.push(v);
    }
    for (g, decl) in sig.globals() {
        out.push(r.global_update(g).map(|c| sig.const_name(c).to_string()).unwrap_or_else(|| decl.name.clone()));
    }
    out
}

fn emit_rule(ab: &AbPmas, r: &TransitionRule, out: &mut String) -> Result<(), McmtError> {
    if r.vars.len() > 2 {
        return Err(McmtError::Arity { label: r.label.clone(), count: r.vars.len() });
    }
    let names: HashMap<IVar, String> = r.vars.iter().zip(["x", "y"]).map(|(v, n)| (*v, n.to_string())).collect();
    let p = Printer { ab, names };
    let x = r.vars.first().copied();
    writeln!(out, ":comment {}", r.label).unwrap();
    out.push_str(":transition\n:var j\n");
    for v in &r.vars {
        writeln!(out, ":var {}", p.var(*v)).unwrap();
    }
    out.push_str(":guard\n");
    for l in &r.guard {
        writeln!(out, "   {}", p.lit(l)).unwrap();
    }
    for ug in &r.uguards {
        if ug.vars.len() > 1 {
            return Err(McmtError::UniversalArity(r.label.clone()));
        }
        let mut names = p.names.clone();
        for v in &ug.vars {
            names.insert(*v, "j".to_string());
        }
        let up = Printer { ab, names };
        writeln!(out, ":uguard {}", up.formula(&ug.cond)).unwrap();
    }
    // one case per distinct bulk branch guard, read at j
    let mut guards: Vec<Lit> = Vec::new();
    for f in &r.bulk {
        for (g, _) in &f.branches {
            if !guards.contains(g) {
                guards.push(g.clone());
            }
        }
    }
    let point = !r.point_updates.is_empty();
    let cases = guards.len() + usize::from(point) + 1;
    writeln!(out, ":numcases {cases}").unwrap();
    let jp = Printer { ab, names: r.bulk.iter().map(|f| (f.bound, "j".to_string())).collect() };
    let case = |head: String, vs: Vec<String>, out: &mut String| {
        writeln!(out, "{head}").unwrap();
        for v in vs {
            writeln!(out, "   :val {v}").unwrap();
        }
    };
    if point {
        let xn = p.var(x.unwrap());
        case(format!(":case (= {xn} j)"), vals(ab, r, true, x, None), out);
    }
    for g in &guards {
        case(format!(":case {}", jp.lit(g)), vals(ab, r, false, x, Some(g)), out);
    }
    case(":case".into(), vals(ab, r, false, x, None), out);
    Ok(())
}

/// Render an encoded system and its goal in MCMT's input language. Rules
/// appear in their encoding order, so the n-th `:transition` is rule n
/// counting from 0.
pub fn emit_mcmt(ab: &AbPmas, goal: &StateFormula) -> Result<String, McmtError> {
    if goal.is_bottom() {
        return Err(McmtError::EmptyGoal);
    }
    check_names(ab)?;
    let sig = &ab.sig;
    let mut out = String::new();
    for (_, s) in sig.sorts().filter(|(_, s)| s.kind != SortKind::Index) {
        writeln!(out, ":smt (define-type {})", s.name).unwrap();
    }
    for (_, r) in sig.rels() {
        let args: Vec<&str> = r.args.iter().map(|s| sig.sort(*s).name.as_str()).collect();
        writeln!(out, ":smt (define {} ::(-> {} bool))", r.name, args.join(" ")).unwrap();
    }
    for (_, c) in sig.constants() {
        writeln!(out, ":smt (define {} ::{})", c.name, sig.sort(c.sort).name).unwrap();
    }
    out.push('\n');
    for (_, a) in sig.arrays() {
        writeln!(out, ":local {} {}", a.name, sig.sort(a.elem).name).unwrap();
    }
    for (_, g) in sig.globals() {
        writeln!(out, ":global {} {}", g.name, sig.sort(g.sort).name).unwrap();
    }
    out.push_str("\n:initial\n:var x\n:cnj");
    for (a, decl) in sig.arrays() {
        write!(out, " (= {}[x] {})", decl.name, sig.const_name(ab.init_arrays[a.index()])).unwrap();
    }
    for (g, decl) in sig.globals() {
        write!(out, " (= {} {})", decl.name, sig.const_name(ab.init_globals[g.index()])).unwrap();
    }
    out.push_str("\n\n:unsafe\n");
    let width = goal.cubes.iter().map(|c| c.vars.len()).max().unwrap_or(0);
    for k in 1..=width {
        writeln!(out, ":var z{k}").unwrap();
    }
    for c in &goal.cubes {
        let names = c.vars.iter().enumerate().map(|(i, v)| (*v, format!("z{}", i + 1))).collect();
        let p = Printer { ab, names };
        let lits: Vec<String> = c.lits.iter().map(|l| p.lit(l)).collect();
        writeln!(out, ":u_cnj {}", lits.join(" ")).unwrap();
    }
    for r in &ab.rules {
        out.push('\n');
        emit_rule(ab, r, &mut out)?;
    }
    Ok(out)
}

/// A rule ordinal with the optional case index MCMT appends.
pub type WitnessToken = (u32, Option<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("witness names transition {0}, which does not exist")]
    NoSuchRule(u32),
}

/// Parse a witness such as `[t2][t17][t3_1]`. Whitespace between tokens
/// is ignored; columns in errors count from 1.
pub fn parse_mcmt_witness(text: &str) -> Result<Vec<WitnessToken>, WitnessError> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |col: usize, msg: &str| WitnessError::Syntax { col: col + 1, msg: msg.to_string() };
    let number = |i: &mut usize| -> Result<u32, WitnessError> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        if start == *i {
            return Err(err(start, "expected digits"));
        }
        text[start..*i].parse().map_err(|_| err(start, "number out of range"))
    };
    loop {
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        if i == b.len() {
            return Ok(out);
        }
        if b[i] != b'[' {
            return Err(err(i, "expected `[`"));
        }
        i += 1;
        if b.get(i) != Some(&b't') {
            return Err(err(i, "expected `t`"));
        }
        i += 1;
        let n = number(&mut i)?;
        let sub = if b.get(i) == Some(&b'_') {
            i += 1;
            Some(number(&mut i)?)
        } else {
            None
        };
        if b.get(i) != Some(&b']') {
            return Err(err(i, "expected `]`"));
        }
        i += 1;
        out.push((n, sub));
    }
}

/// Serialise a trace in MCMT's witness notation.
pub fn format_mcmt_witness(trace: &[TraceStep]) -> String {
    trace.iter().map(|s| format!("[t{}]", s.rule)).collect()
}

/// Map witness tokens to the rules of the system they were emitted from.
pub fn explain(ab: &AbPmas, tokens: &[WitnessToken]) -> Result<Vec<TraceStep>, WitnessError> {
    tokens
        .iter()
        .map(|&(n, _)| {
            ab.rules
                .get(n as usize)
                .map(|r| TraceStep { rule: n as usize, label: r.label.clone() })
                .ok_or(WitnessError::NoSuchRule(n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{encode, model_goal, Semantics};
    use crate::model::{parse_pmas, Model};

    fn cannon() -> (AbPmas, StateFormula) {
        let m = Model::new(&parse_pmas(include_str!("../../fixtures/cannon.pmas")).unwrap()).unwrap();
        let ab = encode(&m, Semantics::Interleaved).unwrap();
        let g = model_goal(&m, &ab).unwrap();
        (ab, g)
    }

    fn block<'a>(doc: &'a str, label: &str) -> &'a str {
        let start = doc.find(&format!(":comment {label}\n")).unwrap();
        let end = doc[start + 1..].find(":comment").map(|e| start + 1 + e).unwrap_or(doc.len());
        &doc[start..end]
    }

    #[test]
    fn declare_block_for_gotob() {
        let (ab, g) = cannon();
        let doc = emit_mcmt(&ab, &g).unwrap();
        let b = block(&doc, "declare:P0:gotoB:Att");
        for want in ["(= actATT[x] Nop_Action)", "(not (= pulseLoc B))", "(not (Snow init B))", ":numcases 2", ":case (= x j)"] {
            assert!(b.contains(want), "{want} missing from\n{b}");
        }
    }

    #[test]
    fn pulse_bulk_block_has_five_cases() {
        let (ab, g) = cannon();
        let doc = emit_mcmt(&ab, &g).unwrap();
        let b = block(&doc, "bulk-local:pulseA");
        assert!(b.contains(":numcases 5"));
        assert_eq!(b.matches(":case").count(), 5);
        let last_case = b.rfind(":case").unwrap();
        assert!(b[last_case..].starts_with(":case\n"));
    }

    #[test]
    fn goal_clause() {
        let (ab, g) = cannon();
        let doc = emit_mcmt(&ab, &g).unwrap();
        assert!(doc.contains(":u_cnj (= locATT[z1] target)\n"));
    }

    #[test]
    fn empty_goal_is_rejected() {
        let (ab, _) = cannon();
        assert_eq!(emit_mcmt(&ab, &StateFormula::bottom()), Err(McmtError::EmptyGoal));
    }

    #[test]
    fn witness_tokens() {
        assert_eq!(parse_mcmt_witness("[t2][t17]").unwrap(), vec![(2, None), (17, None)]);
        assert_eq!(parse_mcmt_witness("").unwrap(), vec![]);
        assert_eq!(parse_mcmt_witness("[t3_1]").unwrap(), vec![(3, Some(1))]);
        assert_eq!(parse_mcmt_witness("[t2][t17][t3_1][t15][t1][t16][t5_1][t15]").unwrap().len(), 8);
    }

    #[test]
    fn malformed_witness_reports_column() {
        assert_eq!(
            parse_mcmt_witness("[t2][x3]"),
            Err(WitnessError::Syntax { col: 6, msg: "expected `t`".into() })
        );
        assert!(matches!(parse_mcmt_witness("[t2"), Err(WitnessError::Syntax { col: 4, .. })));
        assert!(matches!(parse_mcmt_witness("[t_1]"), Err(WitnessError::Syntax { col: 3, .. })));
    }
}
