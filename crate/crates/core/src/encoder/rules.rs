use crate::logic::{ConstId, Formula, GlobalId, IVar, Lit, Term};
use crate::model::{ActionKind, MFormula, Model, SyncAction};

use super::translate::{guard_lits, translate_agent_formula};
use super::{AbPmas, BulkVal, CaseFn, Semantics, StepKind, TransitionRule, UniversalGuard};

struct Gen<'a> {
    m: &'a Model,
    ab: &'a AbPmas,
    out: Vec<TransitionRule>,
}

impl<'a> Gen<'a> {
    fn phase_is(&self, c: ConstId) -> Lit {
        Lit::eq(Term::Global(self.ab.phase), Term::Const(c))
    }

    fn global_is(&self, g: GlobalId, c: ConstId) -> Lit {
        Lit::eq(Term::Global(g), Term::Const(c))
    }

    fn turn_is(&self, g: Option<u8>) -> Option<Lit> {
        match (self.ab.turn, self.ab.turn_consts, g) {
            (Some(t), Some(tc), Some(g)) => Some(self.global_is(t, tc[g as usize])),
            _ => None,
        }
    }

    fn turn_toggle(&self, g: Option<u8>) -> Option<(GlobalId, ConstId)> {
        match (self.ab.turn, self.ab.turn_consts, g) {
            (Some(t), Some(tc), Some(g)) => Some((t, tc[1 - g as usize])),
            _ => None,
        }
    }

    fn x(&self, t: usize) -> IVar {
        IVar::new(0, self.ab.index_sort(t).unwrap())
    }

    fn act_of(&self, name: &str) -> ConstId {
        self.ab.action_const(name).unwrap()
    }

    fn pre(&self, f: &MFormula, me: Option<IVar>, fresh: &mut u32) -> Option<(Vec<IVar>, Vec<Lit>)> {
        let tr = translate_agent_formula(self.ab, f, me, fresh);
        guard_lits(&tr.formula).map(|l| (tr.vars, l))
    }

    fn env_effects(&self, action: Option<&str>) -> Vec<(GlobalId, ConstId)> {
        let env = &self.m.templates[self.m.env];
        let Some(a) = action.and_then(|a| env.action(a)) else {
            return Vec::new();
        };
        env.actions[a]
            .eff
            .iter()
            .map(|&(v, c)| (self.ab.env_globals[v], self.ab.values[env.vars[v].sort][c as usize]))
            .collect()
    }

    fn reset_acts(&self) -> Vec<CaseFn> {
        self.ab
            .arrays
            .iter()
            .flatten()
            .map(|arrs| CaseFn {
                array: arrs.act,
                bound: IVar::new(0, arrs.index),
                branches: Vec::new(),
                default: BulkVal::Const(self.ab.nop),
            })
            .collect()
    }

    /// Case functions applying the effects of the listed actions of each
    /// agent template to the agents that declared them.
    fn effect_cases(&self, pick: impl Fn(usize, &crate::model::MAction) -> bool) -> Vec<CaseFn> {
        let mut out = Vec::new();
        for t in self.m.agent_templates() {
            let tm = &self.m.templates[t];
            let arrs = self.ab.arrays[t].as_ref().unwrap();
            let j = IVar::new(0, arrs.index);
            for (vi, var) in tm.vars.iter().enumerate() {
                let mut branches = Vec::new();
                for a in tm.actions.iter().filter(|a| pick(t, a)) {
                    if let Some(&(_, c)) = a.eff.iter().find(|(v, _)| *v == vi) {
                        let guard = Lit::eq(Term::Read(arrs.act, j), Term::Const(self.act_of(&a.name)));
                        branches.push((guard, self.ab.values[var.sort][c as usize]));
                    }
                }
                if !branches.is_empty() {
                    out.push(CaseFn { array: arrs.vars[vi], bound: j, branches, default: BulkVal::Keep });
                }
            }
        }
        out.extend(self.reset_acts());
        out
    }

    fn push(&mut self, r: TransitionRule) {
        self.out.push(r);
    }

    fn declares(&mut self) {
        let ab = self.ab;
        let phases = [(ab.phases.p0, "P0"), (ab.phases.pl, "PL")];
        for (t, tm) in self.m.templates.iter().enumerate() {
            for a in tm.actions.iter().filter(|a| a.kind == ActionKind::Local) {
                for &(p, pname) in &phases {
                    let is_env = t == self.m.env;
                    let mut fresh = 1;
                    let me = (!is_env).then(|| self.x(t));
                    let Some((pvars, plits)) = self.pre(&a.pre, me, &mut fresh) else { continue };
                    let act = self.act_of(&a.name);
                    let mut guard = vec![self.phase_is(p)];
                    let mut vars = Vec::new();
                    let mut global_updates = Vec::new();
                    let mut point_updates = Vec::new();
                    if let Some(x) = me {
                        let arr = ab.arrays[t].as_ref().unwrap().act;
                        guard.push(Lit::eq(Term::Read(arr, x), Term::Const(ab.nop)));
                        vars.push(x);
                        point_updates.push((arr, x, act));
                    } else {
                        guard.push(self.global_is(ab.act_env, ab.nop));
                        global_updates.push((ab.act_env, act));
                    }
                    guard.extend(plits);
                    guard.extend(self.turn_is(self.m.group(t)));
                    vars.extend(pvars);
                    global_updates.push((ab.phase, ab.phases.pl));
                    self.push(TransitionRule {
                        label: format!("declare:{pname}:{}:{}", a.name, tm.name),
                        kind: StepKind::Declare,
                        action: Some(a.name.clone()),
                        template: Some(t),
                        vars,
                        guard,
                        uguards: Vec::new(),
                        global_updates,
                        point_updates,
                        bulk: Vec::new(),
                    });
                }
            }
        }
    }

    fn gate_local(&mut self) {
        let ab = self.ab;
        let turns: Vec<Option<u8>> = match &self.m.groups {
            Some(_) => vec![Some(0), Some(1)],
            None => vec![None],
        };
        for g in turns {
            let mut uguards = Vec::new();
            let mut fresh = 1;
            for (t, tm) in self.m.templates.iter().enumerate() {
                if g.is_some() && self.m.group(t) != g {
                    continue;
                }
                let locals: Vec<_> = tm.actions.iter().filter(|a| a.kind == ActionKind::Local).collect();
                if locals.is_empty() {
                    continue;
                }
                let is_env = t == self.m.env;
                let mut vars = Vec::new();
                let me = if is_env {
                    None
                } else {
                    let j = IVar::new(fresh, ab.index_sort(t).unwrap());
                    fresh += 1;
                    vars.push(j);
                    Some(j)
                };
                let declared = match me {
                    Some(j) => Lit::ne(Term::Read(ab.arrays[t].as_ref().unwrap().act, j), Term::Const(ab.nop)),
                    None => Lit::ne(Term::Global(ab.act_env), Term::Const(ab.nop)),
                };
                let mut disabled = Vec::new();
                for a in locals {
                    let tr = translate_agent_formula(ab, &a.pre, me, &mut fresh);
                    vars.extend(tr.vars);
                    disabled.push(Formula::not(tr.formula));
                }
                let cond = Formula::or(vec![Formula::Lit(declared), Formula::and(disabled)]);
                uguards.push(UniversalGuard { vars, cond });
            }
            let mut guard = vec![self.phase_is(ab.phases.pl)];
            guard.extend(self.turn_is(g));
            let suffix = g.map(|g| format!(":G{}", g + 1)).unwrap_or_default();
            self.push(TransitionRule {
                label: format!("gate-local{suffix}"),
                kind: StepKind::GateLocal,
                action: None,
                template: None,
                vars: Vec::new(),
                guard,
                uguards,
                global_updates: vec![(ab.phase, ab.phases.pl2.unwrap())],
                point_updates: Vec::new(),
                bulk: Vec::new(),
            });
        }
    }

    fn bulk_locals(&mut self) {
        let ab = self.ab;
        let from = match ab.semantics {
            Semantics::Interleaved => ab.phases.pl,
            Semantics::Concurrent => ab.phases.pl2.unwrap(),
        };
        let env = &self.m.templates[self.m.env];
        let mut variants: Vec<(Option<&str>, Option<u8>, String)> = Vec::new();
        for a in env.actions.iter().filter(|a| a.kind == ActionKind::Local) {
            variants.push((Some(&a.name), self.m.group(self.m.env), format!("bulk-local:{}", a.name)));
        }
        match &self.m.groups {
            None => variants.push((None, None, "bulk-local:idle".into())),
            Some(groups) => {
                for g in 0..2u8 {
                    let agents_can_act = self.m.agent_templates().any(|t| {
                        groups[t] == g && self.m.templates[t].actions.iter().any(|a| a.kind == ActionKind::Local)
                    });
                    if agents_can_act {
                        variants.push((None, Some(g), format!("bulk-local:idle:G{}", g + 1)));
                    }
                }
            }
        }
        for (action, g, label) in variants {
            let mut guard = vec![self.phase_is(from)];
            guard.push(self.global_is(ab.act_env, action.map(|a| self.act_of(a)).unwrap_or(ab.nop)));
            guard.extend(self.turn_is(g));
            let mut global_updates = self.env_effects(action);
            global_updates.push((ab.act_env, ab.nop));
            global_updates.push((ab.phase, ab.phases.p0));
            global_updates.extend(self.turn_toggle(g));
            let bulk = self.effect_cases(|_, a| a.kind == ActionKind::Local);
            self.push(TransitionRule {
                label,
                kind: StepKind::BulkLocal,
                action: action.map(str::to_string),
                template: action.map(|_| self.m.env),
                vars: Vec::new(),
                guard,
                uguards: Vec::new(),
                global_updates,
                point_updates: Vec::new(),
                bulk,
            });
        }
    }

    fn env_pre(&self, s: &SyncAction, fresh: &mut u32) -> Option<(Vec<IVar>, Vec<Lit>)> {
        let env = &self.m.templates[self.m.env];
        self.pre(&env.actions[s.env_action].pre, None, fresh)
    }

    fn sync_starts(&mut self) {
        let ab = self.ab;
        for s in self.m.sync.iter().filter(|s| s.kind == ActionKind::Sync) {
            let act = self.act_of(&s.name);
            for &(t, k) in &s.participants {
                let x = self.x(t);
                let mut fresh = 1;
                let Some((avars, alits)) = self.pre(&self.m.templates[t].actions[k].pre, Some(x), &mut fresh) else {
                    continue;
                };
                let Some((evars, elits)) = self.env_pre(s, &mut fresh) else { continue };
                let arr = ab.arrays[t].as_ref().unwrap().act;
                let mut guard = vec![
                    self.phase_is(ab.phases.p0),
                    Lit::eq(Term::Read(arr, x), Term::Const(ab.nop)),
                    self.global_is(ab.act_env, ab.nop),
                ];
                guard.extend(alits);
                guard.extend(elits);
                guard.extend(self.turn_is(self.m.sync_group(s)));
                let mut vars = vec![x];
                vars.extend(avars);
                vars.extend(evars);
                self.push(TransitionRule {
                    label: format!("sync-start:{}:{}", s.name, self.m.templates[t].name),
                    kind: StepKind::SyncStart,
                    action: Some(s.name.clone()),
                    template: Some(t),
                    vars,
                    guard,
                    uguards: Vec::new(),
                    global_updates: vec![(ab.act_env, act), (ab.phase, ab.phases.ps)],
                    point_updates: vec![(arr, x, act)],
                    bulk: Vec::new(),
                });
            }
        }
    }

    fn sync_joins(&mut self) {
        let ab = self.ab;
        for s in self.m.sync.iter().filter(|s| s.kind == ActionKind::Sync) {
            let act = self.act_of(&s.name);
            for &(t, k) in &s.participants {
                let x = self.x(t);
                let mut fresh = 1;
                let Some((avars, alits)) = self.pre(&self.m.templates[t].actions[k].pre, Some(x), &mut fresh) else {
                    continue;
                };
                let arr = ab.arrays[t].as_ref().unwrap().act;
                let mut guard = vec![
                    self.phase_is(ab.phases.ps),
                    self.global_is(ab.act_env, act),
                    Lit::eq(Term::Read(arr, x), Term::Const(ab.nop)),
                ];
                guard.extend(alits);
                let mut vars = vec![x];
                vars.extend(avars);
                self.push(TransitionRule {
                    label: format!("sync-join:{}:{}", s.name, self.m.templates[t].name),
                    kind: StepKind::SyncJoin,
                    action: Some(s.name.clone()),
                    template: Some(t),
                    vars,
                    guard,
                    uguards: Vec::new(),
                    global_updates: Vec::new(),
                    point_updates: vec![(arr, x, act)],
                    bulk: Vec::new(),
                });
            }
        }
    }

    fn gate_syncs(&mut self) {
        let ab = self.ab;
        for s in self.m.sync.iter().filter(|s| s.kind == ActionKind::Sync) {
            let mut fresh = 1;
            let mut uguards = Vec::new();
            for &(t, k) in &s.participants {
                let arrs = ab.arrays[t].as_ref().unwrap();
                let j = IVar::new(fresh, arrs.index);
                fresh += 1;
                let tr = translate_agent_formula(ab, &self.m.templates[t].actions[k].pre, Some(j), &mut fresh);
                let mut vars = vec![j];
                vars.extend(tr.vars);
                let declared = Lit::ne(Term::Read(arrs.act, j), Term::Const(ab.nop));
                let cond = Formula::or(vec![Formula::Lit(declared), Formula::not(tr.formula)]);
                uguards.push(UniversalGuard { vars, cond });
            }
            self.push(TransitionRule {
                label: format!("gate-sync:{}", s.name),
                kind: StepKind::GateSync,
                action: Some(s.name.clone()),
                template: None,
                vars: Vec::new(),
                guard: vec![self.phase_is(ab.phases.ps), self.global_is(ab.act_env, self.act_of(&s.name))],
                uguards,
                global_updates: vec![(ab.phase, ab.phases.ps2.unwrap())],
                point_updates: Vec::new(),
                bulk: Vec::new(),
            });
        }
    }

    fn sync_commits(&mut self) {
        let ab = self.ab;
        let from = match ab.semantics {
            Semantics::Interleaved => ab.phases.ps,
            Semantics::Concurrent => ab.phases.ps2.unwrap(),
        };
        for s in self.m.sync.iter().filter(|s| s.kind == ActionKind::Sync) {
            let g = self.m.sync_group(s);
            let mut guard = vec![self.phase_is(from), self.global_is(ab.act_env, self.act_of(&s.name))];
            guard.extend(self.turn_is(g));
            let mut global_updates = self.env_effects(Some(&s.name));
            global_updates.push((ab.act_env, ab.nop));
            global_updates.push((ab.phase, ab.phases.p0));
            global_updates.extend(self.turn_toggle(g));
            let bulk = self.effect_cases(|t, a| a.name == s.name && s.participants.iter().any(|&(u, _)| u == t));
            self.push(TransitionRule {
                label: format!("sync-commit:{}", s.name),
                kind: StepKind::SyncCommit,
                action: Some(s.name.clone()),
                template: None,
                vars: Vec::new(),
                guard,
                uguards: Vec::new(),
                global_updates,
                point_updates: Vec::new(),
                bulk,
            });
        }
    }

    fn individuals(&mut self) {
        let ab = self.ab;
        for s in self.m.sync.iter().filter(|s| s.kind == ActionKind::Individual) {
            let g = self.m.sync_group(s);
            for &(t, k) in &s.participants {
                let x = self.x(t);
                let mut fresh = 1;
                let action = &self.m.templates[t].actions[k];
                let Some((avars, alits)) = self.pre(&action.pre, Some(x), &mut fresh) else { continue };
                let Some((evars, elits)) = self.env_pre(s, &mut fresh) else { continue };
                let arrs = ab.arrays[t].as_ref().unwrap();
                let mut guard = vec![
                    self.phase_is(ab.phases.p0),
                    self.global_is(ab.act_env, ab.nop),
                    Lit::eq(Term::Read(arrs.act, x), Term::Const(ab.nop)),
                ];
                guard.extend(alits);
                guard.extend(elits);
                guard.extend(self.turn_is(g));
                let mut vars = vec![x];
                vars.extend(avars);
                vars.extend(evars);
                let mut global_updates = self.env_effects(Some(&s.name));
                global_updates.extend(self.turn_toggle(g));
                let tm = &self.m.templates[t];
                let point_updates = action
                    .eff
                    .iter()
                    .map(|&(v, c)| (arrs.vars[v], x, ab.values[tm.vars[v].sort][c as usize]))
                    .collect();
                self.push(TransitionRule {
                    label: format!("individual:{}:{}", s.name, tm.name),
                    kind: StepKind::Individual,
                    action: Some(s.name.clone()),
                    template: Some(t),
                    vars,
                    guard,
                    uguards: Vec::new(),
                    global_updates,
                    point_updates,
                    bulk: Vec::new(),
                });
            }
        }
    }
}

/// All transition rules, in a fixed order: step kinds in progression order,
/// then templates and actions in declaration order.
pub(super) fn generate(m: &Model, ab: &AbPmas) -> Vec<TransitionRule> {
    let mut g = Gen { m, ab, out: Vec::new() };
    g.declares();
    if ab.semantics == Semantics::Concurrent {
        g.gate_local();
    }
    g.bulk_locals();
    g.sync_starts();
    g.sync_joins();
    if ab.semantics == Semantics::Concurrent {
        g.gate_syncs();
    }
    g.sync_commits();
    g.individuals();
    g.out
}
