use std::collections::HashSet;

use super::ast::*;
use super::diag::{Location, Positioned, SourceMap};
use super::validate::validate_pmas;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 12] = [":=", "!=", "{", "}", "(", ")", "[", "]", ",", ":", ";", "="];

fn lex(src: &str) -> Result<Vec<Token>, Positioned> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token { tok: Tok::Sym(s), line, col });
                    i += s.len();
                }
                None => {
                    return Err(Positioned { line, col, message: format!("unexpected character `{c}`") });
                }
            }
        }
    }
    let line = src.lines().count().max(1);
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

const KEYWORDS: [&str; 20] = [
    "sort", "relation", "template", "env", "var", "action", "local", "sync", "individual", "initiator", "pre",
    "eff", "alternate", "vs", "goal", "not", "and", "or", "true", "false",
];

/// Element or index position before bare names are classified.
#[derive(Clone, Debug)]
enum RawTerm {
    Read(String, IndexTerm),
    Bare(String),
}

#[derive(Clone, Debug)]
enum Raw {
    True,
    False,
    Eq(RawTerm, RawTerm),
    Rel(String, Vec<RawTerm>),
    Not(Box<Raw>),
    And(Vec<Raw>),
    Or(Vec<Raw>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Positioned>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn here(&self) -> (usize, usize) {
        let t = self.peek();
        (t.line, t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(Positioned { line: t.line, col: t.col, message: msg.into() })
    }

    fn describe(&self) -> String {
        match &self.peek().tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected identifier, found {}", self.describe())),
        }
    }

    /// Comma-separated identifiers up to (not including) `close`.
    fn ident_list(&mut self, close: &str) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        while !self.is_sym(close) {
            out.push(self.ident()?);
            if !self.eat_sym(",") {
                break;
            }
        }
        Ok(out)
    }

    fn document(&mut self, map: &mut SourceMap) -> PResult<(Pmas, Vec<RawSlot>)> {
        let mut p = Pmas::default();
        let mut raws = Vec::new();
        loop {
            let pos = self.here();
            if self.eat_kw("sort") {
                let name = self.ident()?;
                map.record(Location::Sort(name.clone()), pos);
                self.expect_sym("{")?;
                let values = self.ident_list("}")?;
                self.expect_sym("}")?;
                p.sorts.push(SortDef { name, values });
            } else if self.eat_kw("relation") {
                let name = self.ident()?;
                map.record(Location::Relation(name.clone()), pos);
                self.expect_sym("(")?;
                let args = self.ident_list(")")?;
                self.expect_sym(")")?;
                p.relations.push(RelationDef { name, args });
            } else if self.eat_kw("template") {
                let t = self.template(pos, map, &mut raws, p.templates.len())?;
                p.templates.push(t);
            } else if self.eat_kw("alternate") {
                map.record(Location::Alternation, pos);
                if p.alternation.is_some() {
                    return Err(Positioned { line: pos.0, col: pos.1, message: "duplicate alternation".into() });
                }
                self.expect_sym("{")?;
                let g1 = self.ident_list("}")?;
                self.expect_sym("}")?;
                self.expect_kw("vs")?;
                self.expect_sym("{")?;
                let g2 = self.ident_list("}")?;
                self.expect_sym("}")?;
                p.alternation = Some((g1, g2));
            } else if self.eat_kw("goal") {
                map.record(Location::Goal, pos);
                if raws.iter().any(|r| matches!(r, RawSlot::Goal(_))) {
                    return Err(Positioned { line: pos.0, col: pos.1, message: "duplicate goal".into() });
                }
                self.expect_sym(":")?;
                let f = self.formula()?;
                self.eat_sym(";");
                raws.push(RawSlot::Goal(f));
            } else if matches!(self.peek().tok, Tok::Eof) {
                break;
            } else {
                return self.err(format!("expected a declaration, found {}", self.describe()));
            }
        }
        Ok((p, raws))
    }

    fn template(&mut self, pos: (usize, usize), map: &mut SourceMap, raws: &mut Vec<RawSlot>, ti: usize) -> PResult<Template> {
        let name = self.ident()?;
        map.record(Location::Template(name.clone()), pos);
        let is_env = self.eat_kw("env");
        self.expect_sym("{")?;
        let mut t = Template { name, is_env, vars: Vec::new(), actions: Vec::new() };
        loop {
            let pos = self.here();
            if self.eat_kw("var") {
                let v = self.ident()?;
                map.record(Location::Var(t.name.clone(), v.clone()), pos);
                self.expect_sym(":")?;
                let sort = self.ident()?;
                self.expect_sym("=")?;
                let init = self.ident()?;
                self.eat_sym(";");
                t.vars.push(VarDecl { name: v, sort, init });
            } else if self.eat_kw("action") {
                let a = self.action(pos, &t.name, map)?;
                raws.push(RawSlot::Pre(ti, t.actions.len(), a.1));
                t.actions.push(a.0);
            } else if self.eat_sym("}") {
                return Ok(t);
            } else {
                return self.err(format!("expected `var`, `action` or `}}`, found {}", self.describe()));
            }
        }
    }

    fn action(&mut self, pos: (usize, usize), tname: &str, map: &mut SourceMap) -> PResult<(ActionDecl, Raw)> {
        let name = self.ident()?;
        map.record(Location::Action(tname.to_string(), name.clone()), pos);
        self.expect_sym(":")?;
        let kind = if self.eat_kw("local") {
            ActionKind::Local
        } else if self.eat_kw("sync") {
            ActionKind::Sync
        } else if self.eat_kw("individual") {
            ActionKind::Individual
        } else {
            return self.err(format!("expected action kind, found {}", self.describe()));
        };
        let initiator = self.eat_kw("initiator");
        self.expect_sym("{")?;
        let mut pre = Raw::True;
        let mut eff = Vec::new();
        loop {
            if self.eat_kw("pre") {
                self.expect_sym(":")?;
                pre = self.formula()?;
            } else if self.eat_kw("eff") {
                self.expect_sym(":")?;
                while let Tok::Ident(s) = &self.peek().tok {
                    if KEYWORDS.contains(&s.as_str()) {
                        break;
                    }
                    let p = self.here();
                    let v = self.ident()?;
                    map.record(Location::Effect(tname.to_string(), name.clone(), eff.len()), p);
                    self.expect_sym(":=")?;
                    let c = self.ident()?;
                    eff.push((v, c));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            } else if self.eat_sym(";") {
            } else if self.eat_sym("}") {
                break;
            } else {
                return self.err(format!("expected `pre`, `eff` or `}}`, found {}", self.describe()));
            }
        }
        Ok((ActionDecl { name, kind, initiator, pre: AgentFormula::True, eff }, pre))
    }

    fn formula(&mut self) -> PResult<Raw> {
        let mut parts = vec![self.conj()?];
        while self.eat_kw("or") {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Raw::Or(parts) })
    }

    fn conj(&mut self) -> PResult<Raw> {
        let mut parts = vec![self.unary()?];
        while self.eat_kw("and") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Raw::And(parts) })
    }

    fn unary(&mut self) -> PResult<Raw> {
        if self.eat_kw("not") {
            return Ok(Raw::Not(Box::new(self.unary()?)));
        }
        if self.eat_kw("true") {
            return Ok(Raw::True);
        }
        if self.eat_kw("false") {
            return Ok(Raw::False);
        }
        if self.eat_sym("(") {
            let f = self.formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        // Relation application: identifier directly followed by `(`.
        if matches!(self.peek().tok, Tok::Ident(_)) && matches!(self.toks[self.pos + 1].tok, Tok::Sym("(")) {
            let r = self.ident()?;
            self.expect_sym("(")?;
            let mut args = Vec::new();
            while !self.is_sym(")") {
                args.push(self.term()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(")")?;
            return Ok(Raw::Rel(r, args));
        }
        let lhs = self.term()?;
        let negated = if self.eat_sym("=") {
            false
        } else if self.eat_sym("!=") {
            true
        } else {
            return self.err(format!("expected `=` or `!=`, found {}", self.describe()));
        };
        let rhs = self.term()?;
        let atom = Raw::Eq(lhs, rhs);
        Ok(if negated { Raw::Not(Box::new(atom)) } else { atom })
    }

    fn index(&mut self) -> PResult<IndexTerm> {
        if self.eat_kw("env") {
            return self.err("`env` is not an index; use `e`");
        }
        let s = self.ident()?;
        Ok(index_of(&s))
    }

    fn term(&mut self) -> PResult<RawTerm> {
        let name = self.ident()?;
        if self.eat_sym("[") {
            let idx = self.index()?;
            self.expect_sym("]")?;
            Ok(RawTerm::Read(name, idx))
        } else {
            Ok(RawTerm::Bare(name))
        }
    }
}

fn index_of(s: &str) -> IndexTerm {
    match s {
        "self" => IndexTerm::SelfId,
        "e" => IndexTerm::Env,
        _ => IndexTerm::Var(s.to_string()),
    }
}

enum RawSlot {
    Pre(usize, usize, Raw),
    Goal(Raw),
}

/// Classify bare names now that all constants are known: a comparison of
/// two non-constant names is an index (dis)equality.
fn resolve(raw: Raw, consts: &HashSet<String>) -> PResult<AgentFormula> {
    let elem = |t: RawTerm| match t {
        RawTerm::Read(v, i) => ElemTerm::Read { var: v, index: i },
        RawTerm::Bare(c) => ElemTerm::Const(c),
    };
    Ok(match raw {
        Raw::True => AgentFormula::True,
        Raw::False => AgentFormula::False,
        Raw::Eq(RawTerm::Bare(a), RawTerm::Bare(b)) if !consts.contains(&a) && !consts.contains(&b) => {
            AgentFormula::IdxEq(index_of(&a), index_of(&b))
        }
        Raw::Eq(a, b) => AgentFormula::Eq(elem(a), elem(b)),
        Raw::Rel(r, args) => AgentFormula::Rel(r, args.into_iter().map(elem).collect()),
        Raw::Not(inner) => AgentFormula::negation(resolve(*inner, consts)?),
        Raw::And(ps) => AgentFormula::And(ps.into_iter().map(|p| resolve(p, consts)).collect::<PResult<_>>()?),
        Raw::Or(ps) => AgentFormula::Or(ps.into_iter().map(|p| resolve(p, consts)).collect::<PResult<_>>()?),
    })
}

fn constants(p: &Pmas) -> HashSet<String> {
    p.sorts.iter().flat_map(|s| s.values.iter().cloned()).collect()
}

/// Syntax-only parse: no validation beyond the grammar.
pub fn parse_document(src: &str) -> Result<(Pmas, SourceMap), Positioned> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0 };
    let mut map = SourceMap::default();
    let (mut p, raws) = parser.document(&mut map)?;
    let consts = constants(&p);
    for slot in raws {
        match slot {
            RawSlot::Pre(t, a, raw) => p.templates[t].actions[a].pre = resolve(raw, &consts)?,
            RawSlot::Goal(raw) => p.goal = Some(resolve(raw, &consts)?),
        }
    }
    Ok((p, map))
}

/// Parse and validate a model. Diagnostics carry line/column positions.
pub fn parse_pmas(src: &str) -> Result<Pmas, Vec<Positioned>> {
    let (p, map) = parse_document(src).map_err(|e| vec![e])?;
    let diags = validate_pmas(&p);
    if diags.is_empty() {
        Ok(p)
    } else {
        Err(diags.iter().map(|d| map.locate(d)).collect())
    }
}

/// Parse a stand-alone formula against the constants of a model.
pub fn parse_formula(src: &str, p: &Pmas) -> Result<AgentFormula, Positioned> {
    let toks = lex(src)?;
    let mut parser = Parser { toks, pos: 0 };
    let raw = parser.formula()?;
    if !matches!(parser.peek().tok, Tok::Eof) {
        return parser.err(format!("unexpected {} after formula", parser.describe()));
    }
    resolve(raw, &constants(p))
}
