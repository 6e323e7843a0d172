//! Problem files: a small s-expression format.
//!
//! ```text
//! (theory slat)
//! (ext f 1)
//! (axiom (mon f))
//! (A (leq d (g a)) (leq a c))
//! (B (leq b d) (not (leq (f b) c)))
//! ```
//!
//! Axioms: `(mon f)`, `(leq f g)`, `(sgc f g1 .. gn)`,
//! `(bound f TERM [:lower] [:strict])` and
//! `(gbound f (LIT ..) TERM [:lower] [:strict])`, where `?1 .. ?n` stand for
//! the arguments of `f`. Combination problems use `G1`/`G2` blocks instead
//! of `A`/`B`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::axioms::{ClauseSchema, SchemaKind};
use crate::driver::Problem;
use crate::error::{Error, Result};
use crate::kernel::{Atom, Literal, Rel, Signature, TermId, TermStore, TheoryId};

/// Parsed s-expression with its source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err(pos: Pos, msg: impl fmt::Display) -> Error {
    Error::Parse { line: pos.line, col: pos.col, msg: msg.to_string() }
}

/// Reads every top-level expression of `text`. `;` starts a comment.
pub fn read_sexps(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut token = String::new();
    let mut token_pos = Pos { line: 1, col: 1 };
    let (mut line, mut col) = (1, 0);
    let mut chars = text.chars().peekable();
    let flush = |token: &mut String, pos: Pos, stack: &mut Vec<(Vec<Sexp>, Pos)>, top: &mut Vec<Sexp>| {
        if token.is_empty() {
            return;
        }
        let s = Sexp::Atom(std::mem::take(token), pos);
        match stack.last_mut() {
            Some((items, _)) => items.push(s),
            None => top.push(s),
        }
    };
    while let Some(ch) = chars.next() {
        col += 1;
        let here = Pos { line, col };
        match ch {
            ';' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        col = 0;
                        break;
                    }
                }
            }
            '(' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                let Some((items, open)) = stack.pop() else {
                    return Err(err(here, "unbalanced ')'"));
                };
                let s = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((items, _)) => items.push(s),
                    None => top.push(s),
                }
            }
            c if c.is_whitespace() => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                if c == '\n' {
                    line += 1;
                    col = 0;
                }
            }
            c => {
                if token.is_empty() {
                    token_pos = here;
                }
                token.push(c);
            }
        }
    }
    flush(&mut token, token_pos, &mut stack, &mut top);
    if let Some((_, open)) = stack.pop() {
        return Err(err(open, "unclosed '('"));
    }
    Ok(top)
}

/// Which blocks the file used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Interpolation,
    Combination,
}

/// A parsed problem file.
#[derive(Clone)]
pub struct ProblemFile {
    pub problem: Problem,
    pub blocks: BlockKind,
}

fn parse_number(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::from(1),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(n, d))
}

struct Parser {
    store: TermStore,
    sig: Option<Signature>,
    allow_vars: bool,
}

impl Parser {
    fn sig(&self, pos: Pos) -> Result<&Signature> {
        self.sig.as_ref().ok_or_else(|| err(pos, "(theory ...) must come first"))
    }

    fn term(&mut self, s: &Sexp) -> Result<TermId> {
        match s {
            Sexp::Atom(name, pos) => {
                if let Some(q) = parse_number(name) {
                    return Ok(self.store.num(q));
                }
                if let Some(v) = name.strip_prefix('?') {
                    if !self.allow_vars {
                        return Err(err(*pos, format!("variable {} outside an axiom", name)));
                    }
                    if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) || v == "0" {
                        return Err(err(*pos, format!("bad variable {}", name)));
                    }
                    return Ok(self.store.var(v));
                }
                if name.starts_with(':') {
                    return Err(err(*pos, format!("unexpected keyword {}", name)));
                }
                let sym = self.store.sym(name);
                let sig = self.sig(*pos)?;
                if sig.is_extension(sym) || sig.is_base_function(sym) {
                    return Err(err(*pos, format!("function {} used as a constant", name)));
                }
                Ok(self.store.constant(name))
            }
            Sexp::List(items, pos) => {
                let Some((Sexp::Atom(head, hpos), args)) = items.split_first() else {
                    return Err(err(*pos, "expected a function application"));
                };
                if args.is_empty() {
                    return Err(err(*hpos, format!("{} applied to nothing", head)));
                }
                let sym = self.store.sym(head);
                let sig = self.sig(*pos)?;
                let arity = if let Some(n) = sig.extension_functions.get(&sym) {
                    Some(*n)
                } else if let Some(n) = sig.base_functions.get(&sym) {
                    *n
                } else {
                    return Err(Error::UnsupportedLiteral(format!("{}: unknown function {}", hpos, head)));
                };
                if arity.is_some_and(|n| n != args.len()) {
                    return Err(err(*hpos, format!("{} expects {} arguments", head, arity.unwrap_or(0))));
                }
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
                Ok(self.store.app(sym, args))
            }
        }
    }

    fn atom(&mut self, s: &Sexp) -> Result<Atom> {
        let Sexp::List(items, pos) = s else {
            return Err(err(s.pos(), "expected an atom"));
        };
        let [Sexp::Atom(rel, _), l, r] = items.as_slice() else {
            return Err(err(*pos, "expected (REL s t)"));
        };
        let rel = match rel.as_str() {
            "eq" => Rel::Eq,
            "leq" => Rel::Leq,
            "lt" => Rel::Lt,
            other => return Err(err(*pos, format!("unknown relation {}", other))),
        };
        let l = self.term(l)?;
        let r = self.term(r)?;
        Ok(Atom::new(&self.store, rel, l, r))
    }

    fn literal(&mut self, s: &Sexp) -> Result<Literal> {
        if let Sexp::List(items, pos) = s {
            if let Some(Sexp::Atom(h, _)) = items.first() {
                if h == "not" {
                    let [_, inner] = items.as_slice() else {
                        return Err(err(*pos, "expected (not ATOM)"));
                    };
                    return Ok(Literal::neg(self.atom(inner)?));
                }
            }
        }
        Ok(Literal::pos(self.atom(s)?))
    }

    fn function(&mut self, s: &Sexp) -> Result<(crate::kernel::Sym, usize)> {
        let Sexp::Atom(name, pos) = s else {
            return Err(err(s.pos(), "expected a function name"));
        };
        let sym = self.store.sym(name);
        match self.sig(*pos)?.extension_functions.get(&sym) {
            Some(n) => Ok((sym, *n)),
            None => Err(err(*pos, format!("{} is not declared with (ext ...)", name))),
        }
    }

    fn flags(&self, rest: &[Sexp]) -> Result<(bool, bool)> {
        let (mut lower, mut strict) = (false, false);
        for f in rest {
            match f {
                Sexp::Atom(k, _) if k == ":lower" => lower = true,
                Sexp::Atom(k, _) if k == ":strict" => strict = true,
                other => return Err(err(other.pos(), "expected :lower or :strict")),
            }
        }
        Ok((lower, strict))
    }

    fn axiom(&mut self, s: &Sexp) -> Result<ClauseSchema> {
        let Sexp::List(items, pos) = s else {
            return Err(err(s.pos(), "expected an axiom"));
        };
        let Some((Sexp::Atom(kind, _), args)) = items.split_first() else {
            return Err(err(*pos, "expected (KIND ...)"));
        };
        self.allow_vars = true;
        let out = (|| match kind.as_str() {
            "mon" => {
                let [f] = args else { return Err(err(*pos, "expected (mon f)")) };
                let (f, n) = self.function(f)?;
                Ok(ClauseSchema::mon(&mut self.store, f, n))
            }
            "leq" => {
                let [f, g] = args else { return Err(err(*pos, "expected (leq f g)")) };
                let (f, n) = self.function(f)?;
                let (g, m) = self.function(g)?;
                if n != m {
                    return Err(err(*pos, "leq needs functions of equal arity"));
                }
                Ok(ClauseSchema::leq(&mut self.store, f, g, n))
            }
            "sgc" => {
                let Some((f, gs)) = args.split_first() else { return Err(err(*pos, "expected (sgc f g ..)")) };
                let (f, n) = self.function(f)?;
                let gs = gs.iter().map(|g| self.function(g)).collect::<Result<Vec<_>>>()?;
                if gs.len() != n || gs.iter().any(|(_, m)| *m != 1) {
                    return Err(err(*pos, "sgc needs one unary function per argument"));
                }
                Ok(ClauseSchema::sgc(&mut self.store, f, gs.into_iter().map(|(g, _)| g).collect()))
            }
            "bound" => {
                let [f, t, flags @ ..] = args else { return Err(err(*pos, "expected (bound f TERM)")) };
                let (f, n) = self.function(f)?;
                let t = self.term(t)?;
                let (lower, strict) = self.flags(flags)?;
                Ok(ClauseSchema::bound(&mut self.store, f, n, t, lower, strict))
            }
            "gbound" => {
                let [f, Sexp::List(guard, _), t, flags @ ..] = args else {
                    return Err(err(*pos, "expected (gbound f (LIT ..) TERM)"));
                };
                let (f, n) = self.function(f)?;
                let guard = guard.iter().map(|g| self.atom(g)).collect::<Result<Vec<_>>>()?;
                let t = self.term(t)?;
                let (lower, strict) = self.flags(flags)?;
                Ok(ClauseSchema::gbound(&mut self.store, f, n, guard, t, lower, strict))
            }
            other => Err(err(*pos, format!("unknown axiom {}", other))),
        })();
        self.allow_vars = false;
        out
    }
}

/// Parses a problem file and finalizes it (schema validation, literal
/// checks, ownership).
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let mut p = Parser { store: TermStore::new(), sig: None, allow_vars: false };
    let mut schemas = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut blocks = None;
    for s in read_sexps(text)? {
        let Sexp::List(items, pos) = &s else {
            return Err(err(s.pos(), "expected a directive"));
        };
        let Some((Sexp::Atom(head, _), rest)) = items.split_first() else {
            return Err(err(*pos, "expected a directive"));
        };
        match head.as_str() {
            "theory" => {
                if p.sig.is_some() {
                    return Err(err(*pos, "theory declared twice"));
                }
                let [Sexp::Atom(name, npos)] = rest else { return Err(err(*pos, "expected (theory NAME)")) };
                let t = TheoryId::parse(name).ok_or_else(|| err(*npos, format!("unknown theory {}", name)))?;
                p.sig = Some(Signature::new(&mut p.store, t));
            }
            "ext" => {
                let [Sexp::Atom(name, _), Sexp::Atom(n, npos)] = rest else {
                    return Err(err(*pos, "expected (ext NAME ARITY)"));
                };
                let n: usize = n.parse().ok().filter(|n| *n > 0).ok_or_else(|| err(*npos, "bad arity"))?;
                let sym = p.store.sym(name);
                let sig = p.sig.as_mut().ok_or_else(|| err(*pos, "(theory ...) must come first"))?;
                if sig.is_base_function(sym) || sig.extension_functions.insert(sym, n).is_some() {
                    return Err(err(*pos, format!("{} declared twice", name)));
                }
            }
            "axiom" => {
                let [ax] = rest else { return Err(err(*pos, "expected (axiom SCHEMA)")) };
                schemas.push(p.axiom(ax)?);
            }
            "A" | "B" | "G1" | "G2" => {
                let kind = if head.starts_with('G') { BlockKind::Combination } else { BlockKind::Interpolation };
                if blocks.is_some_and(|k| k != kind) {
                    return Err(err(*pos, "A/B and G1/G2 blocks cannot be mixed"));
                }
                blocks = Some(kind);
                let target = if head == "A" || head == "G1" { &mut a } else { &mut b };
                for l in rest {
                    let lit = p.literal(l)?;
                    target.push(lit);
                }
            }
            other => return Err(err(*pos, format!("unknown directive {}", other))),
        }
    }
    let sig = p.sig.ok_or_else(|| err(Pos { line: 1, col: 1 }, "missing (theory ...)"))?;
    let mut problem = Problem::new(p.store, sig, schemas, a, b);
    problem.finalize()?;
    Ok(ProblemFile { problem, blocks: blocks.unwrap_or(BlockKind::Interpolation) })
}

fn print_schema(store: &TermStore, s: &ClauseSchema) -> String {
    let flags = |lower: bool, strict: bool| {
        let mut out = String::new();
        if lower {
            out.push_str(" :lower");
        }
        if strict {
            out.push_str(" :strict");
        }
        out
    };
    match &s.kind {
        SchemaKind::Mon(f) => format!("(mon {})", store.name(*f)),
        SchemaKind::Leq(f, g) => format!("(leq {} {})", store.name(*f), store.name(*g)),
        SchemaKind::Sgc(f, gs) => {
            let gs: Vec<&str> = gs.iter().map(|g| store.name(*g)).collect();
            format!("(sgc {} {})", store.name(*f), gs.join(" "))
        }
        SchemaKind::Bound { f, lower, strict } => {
            let bound = if *lower { s.conclusion.lhs } else { s.conclusion.rhs };
            format!("(bound {} {}{})", store.name(*f), store.display(bound), flags(*lower, *strict))
        }
        SchemaKind::GBound { f, lower, strict } => {
            let bound = if *lower { s.conclusion.lhs } else { s.conclusion.rhs };
            let guard: Vec<String> = s.premises.iter().map(|p| p.display(store)).collect();
            format!(
                "(gbound {} ({}) {}{})",
                store.name(*f),
                guard.join(" "),
                store.display(bound),
                flags(*lower, *strict)
            )
        }
    }
}

/// Prints a problem in the file format; `parse_problem` reads it back to
/// the same problem.
pub fn print_problem(file: &ProblemFile) -> String {
    let p = &file.problem;
    let store = &p.store;
    let mut out = format!("(theory {})\n", p.sig.theory.keyword());
    for (f, n) in &p.sig.extension_functions {
        out.push_str(&format!("(ext {} {})\n", store.name(*f), n));
    }
    for s in &p.schemas {
        out.push_str(&format!("(axiom {})\n", print_schema(store, s)));
    }
    let (ha, hb) = match file.blocks {
        BlockKind::Interpolation => ("A", "B"),
        BlockKind::Combination => ("G1", "G2"),
    };
    for (h, lits) in [(ha, p.a.lits()), (hb, p.b.lits())] {
        out.push('(');
        out.push_str(h);
        for l in lits {
            out.push_str("\n  ");
            out.push_str(&l.display(store));
        }
        out.push_str(")\n");
    }
    out
}

/// Parses a standalone formula (`true`, `false`, literals, `and`, `or`)
/// against the problem's symbols.
pub fn parse_formula(problem: &mut Problem, text: &str) -> Result<crate::kernel::Formula> {
    use crate::kernel::Formula;
    let sexps = read_sexps(text)?;
    let [s] = sexps.as_slice() else {
        return Err(err(Pos { line: 1, col: 1 }, "expected exactly one formula"));
    };
    let store = std::mem::take(&mut problem.store);
    let mut p = Parser { store, sig: Some(problem.sig.clone()), allow_vars: false };
    fn go(p: &mut Parser, s: &Sexp) -> Result<Formula> {
        match s {
            Sexp::Atom(a, _) if a == "true" => Ok(Formula::True),
            Sexp::Atom(a, _) if a == "false" => Ok(Formula::False),
            Sexp::List(items, _) => match items.first() {
                Some(Sexp::Atom(h, _)) if h == "and" || h == "or" => {
                    let parts = items[1..].iter().map(|x| go(p, x)).collect::<Result<Vec<_>>>()?;
                    Ok(if h == "and" { Formula::and(parts) } else { Formula::or(parts) })
                }
                _ => Ok(Formula::Lit(p.literal(s)?)),
            },
            other => Err(err(other.pos(), "expected a formula")),
        }
    }
    let out = go(&mut p, s);
    problem.store = p.store;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SGC: &str = "(theory slat)\n(ext f 1)\n(ext g 1)\n(axiom (sgc f g))\n(axiom (mon f))\n(axiom (mon g))\n\
                       (A (leq d (g a)) (leq a c))\n(B (leq b d) (not (leq (f b) c)))\n";

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = read_sexps("; c\n(a (b 1/2))\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].pos(), Pos { line: 2, col: 1 });
        assert!(matches!(read_sexps("(a"), Err(Error::Parse { line: 1, col: 1, .. })));
        assert!(matches!(read_sexps("a)"), Err(Error::Parse { line: 1, col: 2, .. })));
    }

    #[test]
    fn parses_the_semilattice_example() {
        let f = parse_problem(SGC).unwrap();
        assert_eq!(f.problem.schemas.len(), 3);
        assert_eq!(f.problem.a.len(), 2);
        assert_eq!(f.problem.b.lits()[1].display(&f.problem.store), "(not (leq (f b) c))");
    }

    #[test]
    fn round_trips() {
        let f = parse_problem(SGC).unwrap();
        let text = print_problem(&f);
        let g = parse_problem(&text).unwrap();
        assert_eq!(print_problem(&g), text);
    }

    #[test]
    fn rejects_unknown_directive_and_foreign_literals() {
        assert!(matches!(parse_problem("(theory eq)\n(C)"), Err(Error::Parse { line: 2, col: 1, .. })));
        let lra = "(theory lra)\n(A (leq (meet a b) c))";
        assert!(matches!(parse_problem(lra), Err(Error::UnsupportedLiteral(_))));
    }

    #[test]
    fn empty_a_block() {
        let f = parse_problem("(theory poset)\n(A)\n(B (leq a b))").unwrap();
        assert!(f.problem.a.is_empty());
    }
}
