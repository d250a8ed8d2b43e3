use std::fmt::Write;

use super::ast::*;

fn index(i: &IndexTerm) -> &str {
    match i {
        IndexTerm::SelfId => "self",
        IndexTerm::Env => "e",
        IndexTerm::Var(j) => j,
    }
}

fn term(t: &ElemTerm) -> String {
    match t {
        ElemTerm::Read { var, index: i } => format!("{var}[{}]", index(i)),
        ElemTerm::Const(c) => c.clone(),
    }
}

fn wrapped(f: &AgentFormula) -> String {
    match f {
        AgentFormula::And(_) | AgentFormula::Or(_) => format!("({})", print_formula(f)),
        _ => print_formula(f),
    }
}

/// Render a formula so that reparsing yields the same tree.
pub fn print_formula(f: &AgentFormula) -> String {
    match f {
        AgentFormula::True => "true".into(),
        AgentFormula::False => "false".into(),
        AgentFormula::Eq(a, b) => format!("{} = {}", term(a), term(b)),
        AgentFormula::IdxEq(a, b) => format!("{} = {}", index(a), index(b)),
        AgentFormula::Rel(r, args) => {
            format!("{r}({})", args.iter().map(term).collect::<Vec<_>>().join(", "))
        }
        AgentFormula::Not(inner) => match inner.as_ref() {
            AgentFormula::Eq(a, b) => format!("{} != {}", term(a), term(b)),
            AgentFormula::IdxEq(a, b) => format!("{} != {}", index(a), index(b)),
            AgentFormula::Not(_) => format!("not ({})", print_formula(inner)),
            other => format!("not {}", wrapped(other)),
        },
        AgentFormula::And(ps) => ps.iter().map(wrapped).collect::<Vec<_>>().join(" and "),
        AgentFormula::Or(ps) => ps.iter().map(wrapped).collect::<Vec<_>>().join(" or "),
    }
}

/// Pretty-print a model in the modelling language.
pub fn print_pmas(p: &Pmas) -> String {
    let mut out = String::new();
    for s in &p.sorts {
        let _ = writeln!(out, "sort {} {{ {} }}", s.name, s.values.join(", "));
    }
    for r in &p.relations {
        let _ = writeln!(out, "relation {}({})", r.name, r.args.join(", "));
    }
    for t in &p.templates {
        let _ = writeln!(out, "\ntemplate {}{} {{", t.name, if t.is_env { " env" } else { "" });
        for v in &t.vars {
            let _ = writeln!(out, "  var {}: {} = {}", v.name, v.sort, v.init);
        }
        for a in &t.actions {
            let _ = write!(out, "  action {} : {}{} {{ pre: {}; eff: ", a.name, a.kind, if a.initiator { " initiator" } else { "" }, print_formula(&a.pre));
            let effs: Vec<String> = a.eff.iter().map(|(v, c)| format!("{v} := {c}")).collect();
            let _ = writeln!(out, "{} }}", effs.join(", "));
        }
        out.push_str("}\n");
    }
    if let Some((g1, g2)) = &p.alternation {
        let _ = writeln!(out, "\nalternate {{ {} }} vs {{ {} }}", g1.join(", "), g2.join(", "));
    }
    if let Some(g) = &p.goal {
        let _ = writeln!(out, "\ngoal: {}", print_formula(g));
    }
    out
}
