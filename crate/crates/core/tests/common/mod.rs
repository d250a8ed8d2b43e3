//! Test-only generators and brute-force reference implementations. Nothing
//! here calls into the solver being tested.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use pmas_core::encoder::{AbPmas, BulkVal, TransitionRule};
use pmas_core::logic::{Atom, ConstId, Cube, EfFormula, Formula, IVar, Lit, RelId, Signature, SortId, SortKind, Term};
use pmas_core::model::{parse_pmas, Model, RelInterpretation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// random models

struct Var {
    name: String,
    sort: usize,
}

struct Gen<'a> {
    r: &'a mut ChaCha8Rng,
    sorts: Vec<Vec<String>>,
    rel: Option<usize>,
    env_vars: Vec<Var>,
    agents: Vec<Vec<Var>>,
}

impl Gen<'_> {
    fn value(&mut self, s: usize) -> String {
        self.sorts[s].choose(self.r).unwrap().clone()
    }

    fn cmp(&mut self, lhs: String, s: usize) -> String {
        let op = if self.r.gen_bool(0.7) { "=" } else { "!=" };
        format!("{lhs} {op} {}", self.value(s))
    }

    /// A conjunction of 1-2 literals guarding an action of template `me`
    /// (`None` for the environment).
    fn pre(&mut self, me: Option<usize>) -> String {
        let n = self.r.gen_range(1..=2);
        let mut lits = Vec::new();
        let mut other: Option<usize> = None;
        for _ in 0..n {
            match self.r.gen_range(0..10) {
                0..=4 if me.is_some() => {
                    let t = me.unwrap();
                    let k = self.r.gen_range(0..self.agents[t].len());
                    let (name, s) = (self.agents[t][k].name.clone(), self.agents[t][k].sort);
                    lits.push(self.cmp(format!("{name}[self]"), s));
                }
                0..=6 if !self.env_vars.is_empty() => {
                    let k = self.r.gen_range(0..self.env_vars.len());
                    let (name, s) = (self.env_vars[k].name.clone(), self.env_vars[k].sort);
                    lits.push(self.cmp(format!("{name}[e]"), s));
                }
                7 if self.rel.is_some() => {
                    let s = self.rel.unwrap();
                    let (a, b) = (self.value(s), self.value(s));
                    let neg = if self.r.gen_bool(0.5) { "not " } else { "" };
                    lits.push(format!("{neg}R({a}, {b})"));
                }
                _ => {
                    let t = *other.get_or_insert_with(|| self.r.gen_range(0..self.agents.len()));
                    let k = self.r.gen_range(0..self.agents[t].len());
                    let (name, s) = (self.agents[t][k].name.clone(), self.agents[t][k].sort);
                    lits.push(self.cmp(format!("{name}[j]"), s));
                    if me == Some(t) && self.r.gen_bool(0.5) {
                        lits.push("j != self".into());
                    }
                }
            }
        }
        lits.join(" and ")
    }

    fn eff(&mut self, vars: &[(String, usize)]) -> String {
        let mut picked: Vec<&(String, usize)> = vars.iter().filter(|_| self.r.gen_bool(0.6)).collect();
        if picked.is_empty() && !vars.is_empty() {
            picked.push(vars.choose(self.r).unwrap());
        }
        let parts: Vec<String> = picked.iter().map(|(n, s)| format!("{n} := {}", self.value(*s))).collect();
        parts.join(", ")
    }

    fn goal(&mut self) -> String {
        let t = self.r.gen_range(0..self.agents.len());
        let k = self.r.gen_range(0..self.agents[t].len());
        let (name, s) = (self.agents[t][k].name.clone(), self.agents[t][k].sort);
        let mut lits = vec![format!("{name}[j1] = {}", self.value(s))];
        match self.r.gen_range(0..4) {
            0 => {
                let u = self.r.gen_range(0..self.agents.len());
                let k = self.r.gen_range(0..self.agents[u].len());
                let (name, s) = (self.agents[u][k].name.clone(), self.agents[u][k].sort);
                lits.push(format!("{name}[j2] = {}", self.value(s)));
                if u == t {
                    lits.push("j1 != j2".into());
                }
            }
            1 if !self.env_vars.is_empty() => {
                let (name, s) = (self.env_vars[0].name.clone(), self.env_vars[0].sort);
                lits.push(self.cmp(format!("{name}[e]"), s));
            }
            2 if self.agents[t].len() > 1 => {
                let other = self.agents[t].iter().position(|v| v.name != name).unwrap();
                let (name, s) = (self.agents[t][other].name.clone(), self.agents[t][other].sort);
                lits.push(self.cmp(format!("{name}[j1]"), s));
            }
            _ => {}
        }
        lits.join(" and ")
    }
}

/// Source text of a small random model: at most 2 agent templates, 2
/// variables per template over sorts of at most 3 values, 3 actions per
/// template and one binary relation over a 2-valued sort.
pub fn random_pmas_source(r: &mut ChaCha8Rng) -> String {
    let nsorts = r.gen_range(1..=2);
    let sorts: Vec<Vec<String>> = (0..nsorts)
        .map(|s| {
            let n = if s == 1 { 2 } else { r.gen_range(2..=3) };
            (0..n).map(|v| format!("c{s}_{v}")).collect()
        })
        .collect();
    let two_valued: Vec<usize> = (0..nsorts).filter(|&s| sorts[s].len() == 2).collect();
    let rel = if !two_valued.is_empty() && r.gen_bool(0.4) { Some(*two_valued.choose(r).unwrap()) } else { None };
    let nagents = r.gen_range(1..=2);
    let env_vars: Vec<Var> =
        (0..r.gen_range(0..=1)).map(|i| Var { name: format!("ev{i}"), sort: r.gen_range(0..nsorts) }).collect();
    let agents: Vec<Vec<Var>> = (0..nagents)
        .map(|t| (0..r.gen_range(1..=2)).map(|i| Var { name: format!("v{t}_{i}"), sort: r.gen_range(0..nsorts) }).collect())
        .collect();
    let mut g = Gen { r, sorts, rel, env_vars, agents };

    // shared synchronisation actions: (name, kind, participating templates)
    let mut shared: Vec<(String, &str, Vec<usize>)> = Vec::new();
    for (i, kind) in ["sync", "individual"].iter().enumerate() {
        if g.r.gen_bool(0.45) {
            let mut parts: Vec<usize> = (0..nagents).filter(|_| g.r.gen_bool(0.7)).collect();
            if parts.is_empty() {
                parts.push(g.r.gen_range(0..nagents));
            }
            shared.push((format!("s{i}"), kind, parts));
        }
    }
    let alternate = g.r.gen_bool(0.3);
    // turn groups: 0 for the environment's side
    let groups: Vec<u8> = (0..nagents).map(|t| if t == 0 { 1 } else { g.r.gen_range(0..=1) }).collect();
    let initiators: Vec<Option<usize>> = shared
        .iter()
        .map(|(_, _, parts)| if g.r.gen_bool(0.5) { None } else { Some(*parts.choose(g.r).unwrap()) })
        .collect();

    let mut out = String::new();
    for (s, vals) in g.sorts.iter().enumerate() {
        out.push_str(&format!("sort S{s} {{ {} }}\n", vals.join(", ")));
    }
    if let Some(s) = g.rel {
        out.push_str(&format!("relation R(S{s}, S{s})\n"));
    }
    // environment
    out.push_str("template Env env {\n");
    for v in &g.env_vars {
        let init = g.sorts[v.sort][0].clone();
        out.push_str(&format!("  var {}: S{} = {init}\n", v.name, v.sort));
    }
    let env_vars: Vec<(String, usize)> = g.env_vars.iter().map(|v| (v.name.clone(), v.sort)).collect();
    for i in 0..g.r.gen_range(0..=2) {
        if env_vars.is_empty() {
            break;
        }
        let pre = g.pre(None);
        let eff = g.eff(&env_vars);
        out.push_str(&format!("  action el{i} : local {{ pre: {pre}; eff: {eff} }}\n"));
    }
    for (k, (name, kind, _)) in shared.iter().enumerate() {
        let init = if alternate && initiators[k].is_none() { " initiator" } else { "" };
        let pre = if g.r.gen_bool(0.5) { format!("pre: {}", g.pre(None)) } else { String::new() };
        let eff = if !env_vars.is_empty() && g.r.gen_bool(0.5) { format!("; eff: {}", g.eff(&env_vars)) } else { String::new() };
        let body = format!("{pre}{eff}").trim_start_matches("; ").to_string();
        out.push_str(&format!("  action {name} : {kind}{init} {{ {body} }}\n"));
    }
    out.push_str("}\n");
    for t in 0..nagents {
        out.push_str(&format!("template T{t} {{\n"));
        for v in &g.agents[t] {
            let init = g.sorts[v.sort][0].clone();
            out.push_str(&format!("  var {}: S{} = {init}\n", v.name, v.sort));
        }
        let vars: Vec<(String, usize)> = g.agents[t].iter().map(|v| (v.name.clone(), v.sort)).collect();
        let mut budget = 3;
        for (k, (name, kind, parts)) in shared.iter().enumerate() {
            if !parts.contains(&t) {
                continue;
            }
            budget -= 1;
            let init = if alternate && initiators[k] == Some(t) { " initiator" } else { "" };
            let pre = g.pre(Some(t));
            let eff = g.eff(&vars);
            out.push_str(&format!("  action {name} : {kind}{init} {{ pre: {pre}; eff: {eff} }}\n"));
        }
        let locals = g.r.gen_range(1..=budget.max(1));
        for i in 0..locals.min(budget) {
            let pre = g.pre(Some(t));
            let eff = g.eff(&vars);
            out.push_str(&format!("  action l{t}_{i} : local {{ pre: {pre}; eff: {eff} }}\n"));
        }
        out.push_str("}\n");
    }
    if alternate {
        let mut g0 = vec!["Env".to_string()];
        let mut g1 = Vec::new();
        for (t, &grp) in groups.iter().enumerate() {
            if grp == 0 { &mut g0 } else { &mut g1 }.push(format!("T{t}"));
        }
        out.push_str(&format!("alternate {{ {} }} vs {{ {} }}\n", g0.join(", "), g1.join(", ")));
    }
    out.push_str(&format!("goal: {}\n", g.goal()));
    out
}

/// A random model that validates, drawn deterministically from `seed`.
pub fn random_model(seed: u64) -> (Model, String) {
    let mut r = rng(seed);
    loop {
        let src = random_pmas_source(&mut r);
        let Ok(p) = parse_pmas(&src) else { continue };
        if let Ok(m) = Model::new(&p) {
            return (m, src);
        }
    }
}

// ---------------------------------------------------------------------------
// brute-force satisfiability

/// A value in a finite model: a named constant or one of the anonymous
/// elements every element sort is assumed to have.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    C(ConstId),
    Fresh(SortId, usize),
}

fn candidates(sig: &Signature, sort: SortId, fresh: usize) -> Vec<Val> {
    let mut v: Vec<Val> = sig.constants().filter(|(_, d)| d.sort == sort).map(|(c, _)| Val::C(c)).collect();
    v.extend((0..fresh).map(|k| Val::Fresh(sort, k)));
    v
}

/// Every total assignment of the listed cells, each over its own
/// candidate list, passed to `f` until it returns true.
fn assignments<K: Clone + Eq + std::hash::Hash>(
    cells: &[(K, Vec<Val>)],
    f: &mut dyn FnMut(&HashMap<K, Val>) -> bool,
) -> bool {
    fn go<K: Clone + Eq + std::hash::Hash>(
        cells: &[(K, Vec<Val>)],
        cur: &mut HashMap<K, Val>,
        f: &mut dyn FnMut(&HashMap<K, Val>) -> bool,
    ) -> bool {
        let Some(((k, vals), rest)) = cells.split_first() else { return f(cur) };
        for v in vals {
            cur.insert(k.clone(), *v);
            if go(rest, cur, f) {
                return true;
            }
        }
        false
    }
    go(cells, &mut HashMap::new(), f)
}

/// Relation atoms asserted with a truth value are consistent when no value
/// tuple is required both to hold and not to hold.
fn rels_consistent(facts: &[(RelId, Vec<Val>, bool)]) -> bool {
    let mut seen: HashMap<(RelId, Vec<Val>), bool> = HashMap::new();
    facts.iter().all(|(r, args, b)| *seen.entry((*r, args.clone())).or_insert(*b) == *b)
}

/// Satisfiability of a conjunction of literals, with distinct index
/// variables denoting distinct indices, by enumerating finite models.
pub fn brute_euf_sat(sig: &Signature, lits: &[Lit]) -> bool {
    let mut terms: Vec<Term> = Vec::new();
    for l in lits {
        let ts: Vec<Term> = match &l.atom {
            Atom::Eq(a, b) => vec![*a, *b],
            Atom::Rel(_, args) => args.clone(),
            Atom::IdxEq(..) => vec![],
        };
        for t in ts {
            if !matches!(t, Term::Const(_)) && !terms.contains(&t) {
                terms.push(t);
            }
        }
    }
    let n = terms.len();
    let cells: Vec<(Term, Vec<Val>)> = terms.iter().map(|t| (*t, candidates(sig, t.sort(sig), n))).collect();
    assignments(&cells, &mut |m| {
        let val = |t: &Term| match t {
            Term::Const(c) => Val::C(*c),
            t => m[t],
        };
        let mut facts = Vec::new();
        for l in lits {
            match &l.atom {
                Atom::Eq(a, b) => {
                    if (val(a) == val(b)) != l.pos {
                        return false;
                    }
                }
                Atom::IdxEq(a, b) => {
                    if (a == b) != l.pos {
                        return false;
                    }
                }
                Atom::Rel(r, args) => facts.push((*r, args.iter().map(val).collect(), l.pos)),
            }
        }
        rels_consistent(&facts)
    })
}

/// Cell of a finite structure for the array-based signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Cell {
    Global(u32),
    Read(u32, usize),
}

fn eval_formula(
    f: &Formula,
    cells: &HashMap<Cell, Val>,
    idx: &HashMap<IVar, usize>,
    rels: &HashMap<(RelId, Vec<Val>), bool>,
) -> bool {
    let val = |t: &Term| match *t {
        Term::Const(c) => Val::C(c),
        Term::Global(g) => cells[&Cell::Global(g.0)],
        Term::Read(a, v) => cells[&Cell::Read(a.0, idx[&v])],
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lit(l) => {
            let b = match &l.atom {
                Atom::Eq(a, b) => val(a) == val(b),
                Atom::IdxEq(a, b) => idx[a] == idx[b],
                Atom::Rel(r, args) => *rels.get(&(*r, args.iter().map(val).collect())).unwrap_or(&false),
            };
            b == l.pos
        }
        Formula::Not(g) => !eval_formula(g, cells, idx, rels),
        Formula::And(ps) => ps.iter().all(|p| eval_formula(p, cells, idx, rels)),
        Formula::Or(ps) => ps.iter().any(|p| eval_formula(p, cells, idx, rels)),
    }
}

fn all_maps(vars: &[IVar], sizes: &HashMap<SortId, usize>) -> Vec<HashMap<IVar, usize>> {
    let mut out = vec![HashMap::new()];
    for v in vars {
        let size = sizes.get(&v.sort).copied().unwrap_or(0);
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..size).map(move |k| {
                    let mut m = m.clone();
                    m.insert(*v, k);
                    m
                })
            })
            .collect();
    }
    out
}

/// Satisfiability of `exists e. forall u. matrix` over a single index sort,
/// by search over structures whose index domain has at most `|e|` elements
/// (universal sentences survive passing to the substructure generated by
/// the witnesses). The relation table ranges over all value tuples.
pub fn brute_ef_sat(sig: &Signature, f: &EfFormula, arrays: &[u32], globals: &[u32]) -> bool {
    let ne = f.exists.len();
    let lo = if ne == 0 { 0 } else { 1 };
    for size in lo..=ne {
        let ncells = arrays.len() * size + globals.len();
        let mut cells: Vec<(Cell, Vec<Val>)> = Vec::new();
        for &g in globals {
            let s = sig.global(pmas_core::logic::GlobalId(g)).sort;
            cells.push((Cell::Global(g), candidates(sig, s, ncells)));
        }
        for &a in arrays {
            let s = sig.array(pmas_core::logic::ArrayId(a)).elem;
            for k in 0..size {
                cells.push((Cell::Read(a, k), candidates(sig, s, ncells)));
            }
        }
        let rel_tuples: Vec<(RelId, Vec<Val>)> = sig
            .rels()
            .flat_map(|(r, d)| {
                let mut tuples: Vec<Vec<Val>> = vec![vec![]];
                for s in &d.args {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            candidates(sig, *s, ncells).into_iter().map(move |v| [t.clone(), vec![v]].concat())
                        })
                        .collect();
                }
                tuples.into_iter().map(move |t| (r, t))
            })
            .collect();
        let sizes: HashMap<SortId, usize> = index_sorts(sig).into_iter().map(|s| (s, size)).collect();
        let emaps: Vec<HashMap<IVar, usize>> =
            all_maps(&f.exists, &sizes).into_iter().filter(|m| (0..size).all(|k| m.values().any(|v| *v == k))).collect();
        let umaps = all_maps(&f.forall, &sizes);
        let found = assignments(&cells, &mut |cm| {
            for mask in 0u64..(1u64 << rel_tuples.len()) {
                let rels: HashMap<(RelId, Vec<Val>), bool> =
                    rel_tuples.iter().enumerate().map(|(i, t)| (t.clone(), mask >> i & 1 == 1)).collect();
                for em in &emaps {
                    let ok = umaps.iter().all(|um| {
                        let mut idx = em.clone();
                        idx.extend(um.iter().map(|(k, v)| (*k, *v)));
                        eval_formula(&f.matrix, cm, &idx, &rels)
                    });
                    if ok {
                        return true;
                    }
                }
            }
            false
        });
        if found {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// concrete array-based states

/// A concrete state of an encoded system with a fixed number of indices per
/// index sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbState {
    pub globals: Vec<ConstId>,
    /// Per array, one value per index of its index sort.
    pub arrays: Vec<Vec<ConstId>>,
}

pub struct Concrete<'a> {
    pub ab: &'a AbPmas,
    /// Number of indices of each index sort.
    pub sizes: HashMap<SortId, usize>,
    pub rels: HashSet<(RelId, Vec<ConstId>)>,
}

impl Concrete<'_> {
    fn consts_of(&self, s: SortId) -> Vec<ConstId> {
        self.ab.sig.constants().filter(|(_, d)| d.sort == s).map(|(c, _)| c).collect()
    }

    pub fn random_state(&self, r: &mut ChaCha8Rng) -> AbState {
        let sig = &self.ab.sig;
        let globals = sig.globals().map(|(_, g)| *self.consts_of(g.sort).choose(r).unwrap()).collect();
        let arrays = sig
            .arrays()
            .map(|(_, a)| {
                let vals = self.consts_of(a.elem);
                (0..self.sizes[&a.index]).map(|_| *vals.choose(r).unwrap()).collect()
            })
            .collect();
        AbState { globals, arrays }
    }

    fn term(&self, s: &AbState, t: &Term, idx: &HashMap<IVar, usize>) -> ConstId {
        match *t {
            Term::Const(c) => c,
            Term::Global(g) => s.globals[g.index()],
            Term::Read(a, v) => s.arrays[a.index()][idx[&v]],
        }
    }

    pub fn lit(&self, s: &AbState, l: &Lit, idx: &HashMap<IVar, usize>) -> bool {
        let b = match &l.atom {
            Atom::Eq(a, b) => self.term(s, a, idx) == self.term(s, b, idx),
            Atom::IdxEq(a, b) => idx[a] == idx[b],
            Atom::Rel(r, args) => self.rels.contains(&(*r, args.iter().map(|t| self.term(s, t, idx)).collect())),
        };
        b == l.pos
    }

    pub fn formula(&self, s: &AbState, f: &Formula, idx: &HashMap<IVar, usize>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Lit(l) => self.lit(s, l, idx),
            Formula::Not(g) => !self.formula(s, g, idx),
            Formula::And(ps) => ps.iter().all(|p| self.formula(s, p, idx)),
            Formula::Or(ps) => ps.iter().any(|p| self.formula(s, p, idx)),
        }
    }

    /// Some injective placement of the cube's variables satisfies it.
    pub fn cube_holds(&self, s: &AbState, c: &Cube) -> bool {
        all_maps(&c.vars, &self.sizes).into_iter().any(|m| {
            let injective = c.vars.iter().all(|v| c.vars.iter().all(|w| v == w || v.sort != w.sort || m[v] != m[w]));
            injective && c.lits.iter().all(|l| self.lit(s, l, &m))
        })
    }

    /// All successors of `s` under `rule`, over every (not necessarily
    /// injective) placement of the rule's variables.
    pub fn step(&self, rule: &TransitionRule, s: &AbState) -> Vec<AbState> {
        let mut out = Vec::new();
        for m in all_maps(&rule.vars, &self.sizes) {
            if !rule.guard.iter().all(|l| self.lit(s, l, &m)) {
                continue;
            }
            let uok = rule.uguards.iter().all(|ug| {
                all_maps(&ug.vars, &self.sizes).into_iter().all(|um| self.formula(s, &ug.cond, &um))
            });
            if !uok {
                continue;
            }
            let mut next = s.clone();
            for &(g, c) in &rule.global_updates {
                next.globals[g.index()] = c;
            }
            for &(a, x, c) in &rule.point_updates {
                next.arrays[a.index()][m[&x]] = c;
            }
            for f in &rule.bulk {
                for k in 0..self.sizes[&f.bound.sort] {
                    let at = HashMap::from([(f.bound, k)]);
                    let hit = f.branches.iter().find(|(g, _)| self.lit(s, g, &at)).map(|(_, c)| *c);
                    next.arrays[f.array.index()][k] = match (hit, f.default) {
                        (Some(c), _) | (None, BulkVal::Const(c)) => c,
                        (None, BulkVal::Keep) => s.arrays[f.array.index()][k],
                    };
                }
            }
            out.push(next);
        }
        out
    }
}

pub fn index_sorts(sig: &Signature) -> Vec<SortId> {
    sig.sorts().filter(|(_, d)| d.kind == SortKind::Index).map(|(s, _)| s).collect()
}

// ---------------------------------------------------------------------------
// model states as array-based states

pub fn index_sizes(m: &Model, ab: &AbPmas, counts: &[usize]) -> HashMap<SortId, usize> {
    m.agent_templates().map(|t| (ab.index_sort(t).unwrap(), counts[t])).collect()
}

pub fn concrete_rels(m: &Model, ab: &AbPmas, i0: &RelInterpretation) -> HashSet<(RelId, Vec<ConstId>)> {
    let mut out = HashSet::new();
    for (r, tuples) in i0.tuples.iter().enumerate() {
        for t in tuples {
            let args = t.iter().zip(&m.rels[r].args).map(|(v, s)| ab.values[*s][*v as usize]).collect();
            out.insert((ab.rels[r], args));
        }
    }
    out
}

/// The array-based state at the start of a global step that corresponds
/// to a model state.
pub fn encode_state(m: &Model, ab: &AbPmas, s: &pmas_core::oracle::State) -> AbState {
    let sig = &ab.sig;
    let mut globals = ab.init_globals.clone();
    let env = &m.templates[m.env];
    for (k, v) in s.snap.env.iter().enumerate() {
        globals[ab.env_globals[k].index()] = ab.values[env.vars[k].sort][*v as usize];
    }
    if let (Some(t), Some(tc), Some(g)) = (ab.turn, ab.turn_consts, s.turn) {
        globals[t.index()] = tc[g as usize];
    }
    let mut arrays: Vec<Vec<ConstId>> = vec![Vec::new(); sig.num_arrays()];
    for t in m.agent_templates() {
        let arrs = ab.arrays[t].as_ref().unwrap();
        for (k, a) in arrs.vars.iter().enumerate() {
            let sort = m.templates[t].vars[k].sort;
            arrays[a.index()] = s.snap.agents[t].iter().map(|ag| ab.values[sort][ag.vals[k] as usize]).collect();
        }
        arrays[arrs.act.index()] = vec![ab.nop; s.snap.agents[t].len()];
    }
    AbState { globals, arrays }
}

pub fn random_interpretation(m: &Model, r: &mut ChaCha8Rng) -> RelInterpretation {
    let mut i0 = RelInterpretation::empty(m);
    for (k, rel) in m.rels.iter().enumerate() {
        let mut tuples: Vec<Vec<u16>> = vec![vec![]];
        for &s in &rel.args {
            let n = m.sorts[s].values.len() as u16;
            tuples = tuples.into_iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
        }
        for t in tuples {
            if r.gen_bool(0.5) {
                i0.tuples[k].insert(t);
            }
        }
    }
    i0
}
