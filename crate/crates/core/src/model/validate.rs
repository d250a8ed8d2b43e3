use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::diag::{Diagnostic, Location};

/// Names used by the encoding; user identifiers may not take them.
pub const RESERVED: [&str; 16] = [
    "Nop_Action", "P0", "PL", "PS", "PL2", "PS2", "actEnv", "phase", "turn", "self", "e", "Action", "PhaseSort",
    "TurnSort", "turnG1", "turnG2",
];

struct Ctx<'a> {
    p: &'a Pmas,
    out: Vec<Diagnostic>,
    consts: HashMap<&'a str, &'a str>,
}

impl<'a> Ctx<'a> {
    fn push(&mut self, loc: Location, msg: impl Into<String>) {
        self.out.push(Diagnostic::new(loc, msg));
    }
}

/// Check the well-formedness conditions of a parsed model. The result is
/// empty iff the model can be encoded and simulated.
pub fn validate_pmas(p: &Pmas) -> Vec<Diagnostic> {
    let mut cx = Ctx { p, out: Vec::new(), consts: HashMap::new() };
    check_signature(&mut cx);
    check_templates(&mut cx);
    check_sync(&mut cx);
    check_alternation(&mut cx);
    if let Some(g) = &p.goal {
        check_formula(&mut cx, g, Location::Goal, None, true);
    }
    cx.out
}

fn check_signature(cx: &mut Ctx<'_>) {
    let p = cx.p;
    let mut sort_names = HashSet::new();
    for s in &p.sorts {
        let loc = Location::Sort(s.name.clone());
        if !sort_names.insert(s.name.as_str()) {
            cx.push(loc.clone(), format!("duplicate sort `{}`", s.name));
        }
        if RESERVED.contains(&s.name.as_str()) {
            cx.push(loc.clone(), format!("`{}` is a reserved name", s.name));
        }
        if s.values.is_empty() {
            cx.push(loc.clone(), format!("sort `{}` declares no values", s.name));
        }
        for v in &s.values {
            if RESERVED.contains(&v.as_str()) {
                cx.push(loc.clone(), format!("`{v}` is a reserved name"));
            }
            if cx.consts.insert(v.as_str(), s.name.as_str()).is_some() {
                cx.push(loc.clone(), format!("constant `{v}` declared more than once"));
            }
        }
    }
    let mut rels = HashSet::new();
    for r in &p.relations {
        let loc = Location::Relation(r.name.clone());
        if !rels.insert(r.name.as_str()) {
            cx.push(loc.clone(), format!("duplicate relation `{}`", r.name));
        }
        if r.args.is_empty() {
            cx.push(loc.clone(), format!("relation `{}` has arity 0", r.name));
        }
        for a in &r.args {
            if !sort_names.contains(a.as_str()) {
                cx.push(loc.clone(), format!("unknown sort `{a}`"));
            }
        }
    }
}

fn check_templates(cx: &mut Ctx<'_>) {
    let p = cx.p;
    let mut names = HashSet::new();
    let mut vars: HashMap<&str, &str> = HashMap::new();
    let envs = p.templates.iter().filter(|t| t.is_env).count();
    if envs != 1 {
        cx.push(Location::Model, format!("exactly one environment template is required, found {envs}"));
    }
    if p.templates.iter().all(|t| t.is_env) {
        cx.push(Location::Model, "at least one agent template is required");
    }
    for t in &p.templates {
        let tloc = Location::Template(t.name.clone());
        if !names.insert(t.name.as_str()) {
            cx.push(tloc.clone(), format!("duplicate template `{}`", t.name));
        }
        if RESERVED.contains(&t.name.as_str()) {
            cx.push(tloc.clone(), format!("`{}` is a reserved name", t.name));
        }
        if !t.is_env && t.actions.is_empty() {
            cx.push(tloc.clone(), "template must declare a non-empty, finite set of action symbols");
        }
        for v in &t.vars {
            let loc = Location::Var(t.name.clone(), v.name.clone());
            if let Some(other) = vars.insert(v.name.as_str(), t.name.as_str()) {
                cx.push(loc.clone(), format!("variable `{}` already declared in template `{other}`; template variables must be disjoint", v.name));
            }
            if RESERVED.contains(&v.name.as_str()) || cx.consts.contains_key(v.name.as_str()) {
                cx.push(loc.clone(), format!("variable name `{}` clashes with a reserved name or constant", v.name));
            }
            if !p.sorts.iter().any(|s| s.name == v.sort) {
                cx.push(loc.clone(), format!("unknown sort `{}`", v.sort));
            } else if cx.consts.get(v.init.as_str()) != Some(&v.sort.as_str()) {
                cx.push(loc.clone(), format!("initial value `{}` is not a constant of sort `{}`", v.init, v.sort));
            }
        }
        let mut anames = HashSet::new();
        for a in &t.actions {
            let aloc = Location::Action(t.name.clone(), a.name.clone());
            if !anames.insert(a.name.as_str()) {
                cx.push(aloc.clone(), format!("duplicate action `{}`", a.name));
            }
            if RESERVED.contains(&a.name.as_str()) || cx.consts.contains_key(a.name.as_str()) {
                cx.push(aloc.clone(), format!("action name `{}` clashes with a reserved name or constant", a.name));
            }
            if a.initiator && a.kind == ActionKind::Local {
                cx.push(aloc.clone(), "only synchronisation actions can be marked `initiator`");
            }
            if a.pre.has_disjunction() {
                cx.push(aloc.clone(), "precondition contains a disjunction; split the action into one copy per disjunct");
            }
            check_formula(cx, &a.pre, aloc.clone(), Some(t), false);
            let mut seen = HashSet::new();
            for (k, (v, c)) in a.eff.iter().enumerate() {
                let eloc = Location::Effect(t.name.clone(), a.name.clone(), k);
                let Some(decl) = t.vars.iter().find(|d| &d.name == v) else {
                    cx.push(eloc, format!("effect assigns `{v}`, which is not a variable of template `{}`", t.name));
                    continue;
                };
                if !seen.insert(v.as_str()) {
                    cx.push(eloc.clone(), format!("variable `{v}` assigned twice"));
                }
                match cx.consts.get(c.as_str()) {
                    None => cx.push(eloc, format!("undeclared constant `{c}`")),
                    Some(s) if *s != decl.sort => {
                        cx.push(eloc, format!("constant `{c}` has sort `{s}`, expected `{}`", decl.sort))
                    }
                    _ => {}
                }
            }
        }
    }
}

fn check_sync(cx: &mut Ctx<'_>) {
    let p = cx.p;
    let mut kinds: HashMap<&str, Vec<(&Template, &ActionDecl)>> = HashMap::new();
    for t in &p.templates {
        for a in &t.actions {
            if a.kind != ActionKind::Local {
                kinds.entry(a.name.as_str()).or_default().push((t, a));
            }
        }
    }
    let mut names: Vec<&&str> = kinds.keys().collect();
    names.sort();
    for name in names {
        let decls = &kinds[*name];
        let (t0, a0) = decls[0];
        let loc = Location::Action(t0.name.clone(), a0.name.clone());
        if !decls.iter().any(|(t, _)| t.is_env) {
            cx.push(loc.clone(), format!("synchronisation action `{name}` must also be declared by the environment"));
        }
        if !decls.iter().any(|(t, _)| !t.is_env) {
            cx.push(loc.clone(), format!("synchronisation action `{name}` has no participating agent template"));
        }
        if decls.iter().any(|(_, a)| a.kind != a0.kind) {
            cx.push(loc.clone(), format!("action `{name}` is declared with different kinds"));
        }
        for t in &p.templates {
            if let Some(a) = t.actions.iter().find(|a| a.name == **name && a.kind == ActionKind::Local) {
                cx.push(
                    Location::Action(t.name.clone(), a.name.clone()),
                    format!("action `{name}` is local here but a synchronisation action elsewhere"),
                );
            }
        }
    }
}

fn check_alternation(cx: &mut Ctx<'_>) {
    let p = cx.p;
    let Some((g1, g2)) = &p.alternation else { return };
    let mut seen = HashSet::new();
    for name in g1.iter().chain(g2) {
        if p.template(name).is_none() {
            cx.push(Location::Alternation, format!("unknown template `{name}`"));
        }
        if !seen.insert(name.as_str()) {
            cx.push(Location::Alternation, format!("template `{name}` appears twice"));
        }
    }
    if g1.is_empty() || g2.is_empty() {
        cx.push(Location::Alternation, "both turn groups must be non-empty");
    }
    for t in &p.templates {
        if !seen.contains(t.name.as_str()) {
            cx.push(Location::Alternation, format!("template `{}` belongs to no turn group", t.name));
        }
    }
    let mut sync: Vec<&str> = p
        .templates
        .iter()
        .flat_map(|t| t.actions.iter().filter(|a| a.kind != ActionKind::Local).map(|a| a.name.as_str()))
        .collect();
    sync.sort();
    sync.dedup();
    for name in sync {
        let initiators = p
            .templates
            .iter()
            .filter(|t| t.actions.iter().any(|a| a.name == name && a.initiator))
            .count();
        if initiators != 1 {
            cx.push(
                Location::Alternation,
                format!("synchronisation action `{name}` needs exactly one initiator template, found {initiators}"),
            );
        }
    }
}

/// Typing of index terms and references. `owner` is the template whose
/// action the formula guards (`None` for the goal).
fn check_formula(cx: &mut Ctx<'_>, f: &AgentFormula, loc: Location, owner: Option<&Template>, is_goal: bool) {
    let p = cx.p;
    let mut typing: HashMap<String, String> = HashMap::new();
    let mut problems: Vec<String> = Vec::new();
    let mut terms = Vec::new();
    f.for_each_term(&mut |t| terms.push(t.clone()));
    for t in &terms {
        match t {
            ElemTerm::Const(c) => {
                if !cx.consts.contains_key(c.as_str()) {
                    problems.push(format!("undeclared constant `{c}`"));
                }
            }
            ElemTerm::Read { var, index } => {
                let Some((vt, _)) = p.var_owner(var) else {
                    problems.push(format!("unknown variable `{var}`"));
                    continue;
                };
                match index {
                    IndexTerm::Env => {
                        if !vt.is_env {
                            problems.push(format!("`{var}[e]` reads an agent variable at the environment"));
                        }
                    }
                    IndexTerm::SelfId => match owner {
                        None => problems.push("`self` cannot occur in the goal".into()),
                        Some(o) if o.name != vt.name => problems.push(format!(
                            "`{var}[self]` reads a variable of template `{}` inside template `{}`",
                            vt.name, o.name
                        )),
                        _ => {}
                    },
                    IndexTerm::Var(j) => {
                        if vt.is_env {
                            problems.push(format!("environment variable `{var}` must be read as `{var}[e]`"));
                        } else if let Some(prev) = typing.insert(j.clone(), vt.name.clone()) {
                            if prev != vt.name {
                                problems.push(format!(
                                    "index `{j}` is used with variables of templates `{prev}` and `{}`",
                                    vt.name
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    check_atoms(cx, f, &mut problems);
    let mut idx = Vec::new();
    f.index_terms(&mut idx);
    for i in idx {
        match i {
            IndexTerm::Var(j) if !typing.contains_key(&j) => {
                problems.push(format!("index `{j}` is not used to read any agent variable"))
            }
            IndexTerm::SelfId if is_goal => problems.push("`self` cannot occur in the goal".into()),
            _ => {}
        }
    }
    problems.sort();
    problems.dedup();
    for m in problems {
        cx.push(loc.clone(), m);
    }
}

fn term_sort<'a>(cx: &Ctx<'a>, t: &ElemTerm) -> Option<&'a str> {
    match t {
        ElemTerm::Const(c) => cx.consts.get(c.as_str()).copied(),
        ElemTerm::Read { var, .. } => cx.p.var_owner(var).map(|(_, v)| v.sort.as_str()),
    }
}

fn check_atoms(cx: &Ctx<'_>, f: &AgentFormula, problems: &mut Vec<String>) {
    match f {
        AgentFormula::Eq(a, b) => {
            if let (Some(x), Some(y)) = (term_sort(cx, a), term_sort(cx, b)) {
                if x != y {
                    problems.push(format!("comparison between sorts `{x}` and `{y}`"));
                }
            }
        }
        AgentFormula::Rel(r, args) => match cx.p.relations.iter().find(|d| &d.name == r) {
            None => problems.push(format!("unknown relation `{r}`")),
            Some(d) if d.args.len() != args.len() => {
                problems.push(format!("relation `{r}` expects {} arguments", d.args.len()))
            }
            Some(d) => {
                for (a, s) in args.iter().zip(&d.args) {
                    if let Some(x) = term_sort(cx, a) {
                        if x != s {
                            problems.push(format!("argument of sort `{x}` passed to `{r}` where `{s}` is expected"));
                        }
                    }
                }
            }
        },
        AgentFormula::Not(inner) => check_atoms(cx, inner, problems),
        AgentFormula::And(ps) | AgentFormula::Or(ps) => ps.iter().for_each(|p| check_atoms(cx, p, problems)),
        _ => {}
    }
}
