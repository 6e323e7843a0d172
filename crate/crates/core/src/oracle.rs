//! Brute-force model search used to cross-check the solver.
//!
//! `FiniteModels` enumerates base structures up to a size bound together
//! with total tables for the extension functions, checking every schema as
//! a universal sentence. A found model is a proof of satisfiability. The
//! search only claims unsatisfiability for problems without extension
//! functions, once the bound reaches a size that is known to suffice for
//! the base theory. `FreeAlgebra` decides base-only lattice problems
//! through homomorphisms into the two-element lattice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};

use crate::axioms::ClauseSchema;
use crate::driver::Problem;
use crate::error::{Error, Result};
use crate::kernel::{Atom, Head, Literal, Rel, Sym, TermId, TermStore, TheoryId, JOIN, MEET};

pub const MAX_DOMAIN: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    FiniteModels,
    FreeAlgebra,
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub mode: OracleMode,
    pub max_domain_size: usize,
    pub timeout: Duration,
    pub node_budget: u64,
}

impl OracleConfig {
    pub fn new(mode: OracleMode, max_domain_size: usize) -> Result<Self> {
        if max_domain_size == 0 || max_domain_size > MAX_DOMAIN {
            return Err(Error::Invalid(format!("domain bound must be in 1..={}", MAX_DOMAIN)));
        }
        Ok(OracleConfig { mode, max_domain_size, timeout: Duration::from_secs(60), node_budget: 2_000_000 })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub verdict: Verdict,
    /// Printable witness for `Sat`.
    pub model: Option<String>,
}

impl OracleReport {
    fn unknown() -> Self {
        OracleReport { verdict: Verdict::Unknown, model: None }
    }
}

/// Runs the configured search on `A ∧ B`.
pub fn finite_model_oracle(p: &Problem, cfg: &OracleConfig) -> OracleReport {
    let lits: Vec<Literal> = p.a.lits().iter().chain(p.b.lits()).copied().collect();
    oracle_on(&p.store, p.sig.theory, &p.sig.extension_functions, &p.schemas, &lits, cfg)
}

/// Same as [`finite_model_oracle`] for an explicit literal set.
pub fn oracle_on(
    store: &TermStore,
    theory: TheoryId,
    extensions: &BTreeMap<Sym, usize>,
    schemas: &[ClauseSchema],
    lits: &[Literal],
    cfg: &OracleConfig,
) -> OracleReport {
    if !matches!(theory, TheoryId::Eq | TheoryId::Poset | TheoryId::Slat | TheoryId::Dlat) {
        return OracleReport::unknown();
    }
    let mut used = BTreeSet::new();
    for l in lits {
        store.functions_of(l.atom.lhs, &mut used);
        store.functions_of(l.atom.rhs, &mut used);
    }
    for s in schemas {
        for a in std::iter::once(&s.conclusion).chain(&s.premises) {
            store.functions_of(a.lhs, &mut used);
            store.functions_of(a.rhs, &mut used);
        }
    }
    let exts: Vec<(Sym, usize)> = extensions.iter().filter(|(f, _)| used.contains(*f)).map(|(f, n)| (*f, *n)).collect();
    match cfg.mode {
        OracleMode::FreeAlgebra => {
            if !exts.is_empty() || !matches!(theory, TheoryId::Slat | TheoryId::Dlat) {
                return OracleReport::unknown();
            }
            two_valued(store, lits)
        }
        OracleMode::FiniteModels => {
            let mut search = Search::new(store, theory, exts, schemas, lits, cfg);
            let found = search.run();
            match found {
                Some(Some(model)) => OracleReport { verdict: Verdict::Sat, model: Some(model) },
                Some(None) if search.complete_at(cfg.max_domain_size) => {
                    OracleReport { verdict: Verdict::Unsat, model: None }
                }
                _ => OracleReport::unknown(),
            }
        }
    }
}

fn constants_of(store: &TermStore, lits: &[Literal]) -> Vec<TermId> {
    let mut cs = BTreeSet::new();
    for l in lits {
        l.atom.constants(store, &mut cs);
    }
    cs.into_iter().filter(|c| store.as_num(*c).is_none()).collect()
}

/// Two-valued evaluation of a lattice term; `None` for symbols outside
/// meet/join.
fn eval2(store: &TermStore, t: TermId, val: &BTreeMap<TermId, bool>) -> Option<bool> {
    match store.head(t) {
        Head::Num(q) if q.is_zero() => Some(false),
        Head::Num(q) if q.is_one() => Some(true),
        Head::Num(_) | Head::Var(_) => None,
        Head::Sym(s) => {
            let args = store.args(t);
            if args.is_empty() {
                return val.get(&t).copied();
            }
            let vs = args.iter().map(|a| eval2(store, *a, val)).collect::<Option<Vec<bool>>>()?;
            match store.name(*s) {
                MEET => Some(vs.iter().all(|v| *v)),
                JOIN => Some(vs.iter().any(|v| *v)),
                _ => None,
            }
        }
    }
}

fn atom2(store: &TermStore, a: &Atom, val: &BTreeMap<TermId, bool>) -> Option<bool> {
    let l = eval2(store, a.lhs, val)?;
    let r = eval2(store, a.rhs, val)?;
    Some(match a.rel {
        Rel::Eq => l == r,
        Rel::Leq => !l || r,
        Rel::Lt => !l && r,
    })
}

/// Semilattices and distributive lattices are subdirect products of the
/// two-element one, so the literals are satisfiable iff every negative
/// literal is refuted by some 0/1 assignment satisfying the positives.
fn two_valued(store: &TermStore, lits: &[Literal]) -> OracleReport {
    let cs = constants_of(store, lits);
    if cs.len() > 20 {
        return OracleReport::unknown();
    }
    let (pos, neg): (Vec<&Literal>, Vec<&Literal>) = lits.iter().partition(|l| l.pos);
    let mut witnesses = Vec::new();
    let assignments = 1u64 << cs.len();
    let mut holds_pos = Vec::new();
    for mask in 0..assignments {
        let val: BTreeMap<TermId, bool> = cs.iter().enumerate().map(|(i, c)| (*c, mask >> i & 1 == 1)).collect();
        match pos.iter().map(|l| atom2(store, &l.atom, &val)).collect::<Option<Vec<bool>>>() {
            None => return OracleReport::unknown(),
            Some(v) if v.iter().all(|b| *b) => holds_pos.push(val),
            Some(_) => {}
        }
    }
    if holds_pos.is_empty() {
        // Only the one-element lattice is left.
        let verdict = if neg.is_empty() { Verdict::Sat } else { Verdict::Unsat };
        let model = neg.is_empty().then(|| "one-element lattice".to_string());
        return OracleReport { verdict, model };
    }
    for l in &neg {
        let mut found = None;
        for val in &holds_pos {
            match atom2(store, &l.atom, val) {
                None => return OracleReport::unknown(),
                Some(false) => {
                    found = Some(val);
                    break;
                }
                Some(true) => {}
            }
        }
        match found {
            Some(val) => witnesses.push(val.clone()),
            None => return OracleReport { verdict: Verdict::Unsat, model: None },
        }
    }
    if witnesses.is_empty() {
        witnesses.push(holds_pos[0].clone());
    }
    let mut out = String::from("product of two-element factors:");
    for w in &witnesses {
        let ones: Vec<String> = w.iter().filter(|(_, v)| **v).map(|(c, _)| store.display(*c)).collect();
        let _ = write!(out, "\n  1 = {{{}}}", ones.join(", "));
    }
    OracleReport { verdict: Verdict::Sat, model: Some(out) }
}

/// A finite base structure on `0..n`.
#[derive(Clone, Debug)]
struct Structure {
    n: usize,
    le: Vec<Vec<bool>>,
    meet: Option<Vec<Vec<usize>>>,
    join: Option<Vec<Vec<usize>>>,
    bottom: Option<usize>,
    top: Option<usize>,
}

/// Partial orders on `0..n` in which `i ≤ j` implies `i ≤ j` as numbers;
/// every finite poset is isomorphic to one of them.
fn natural_posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, (i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                le[*i][*j] = true;
            }
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(le[i][j] && le[j][k]) || le[i][k])));
        if transitive {
            out.push(le);
        }
    }
    out
}

fn bound_table(le: &[Vec<bool>], lower: bool) -> Option<Vec<Vec<usize>>> {
    let n = le.len();
    let below = |x: usize, y: usize| if lower { le[x][y] } else { le[y][x] };
    let mut t = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let cands: Vec<usize> = (0..n).filter(|&x| below(x, a) && below(x, b)).collect();
            t[a][b] = *cands.iter().find(|&&x| cands.iter().all(|&y| below(y, x)))?;
        }
    }
    Some(t)
}

fn structures(theory: TheoryId, n: usize) -> Vec<Structure> {
    let extreme = |le: &Vec<Vec<bool>>, low: bool| {
        (0..n).find(|&x| (0..n).all(|y| if low { le[x][y] } else { le[y][x] }))
    };
    let make = |le: Vec<Vec<bool>>, meet, join| Structure {
        n,
        bottom: extreme(&le, true),
        top: extreme(&le, false),
        le,
        meet,
        join,
    };
    match theory {
        TheoryId::Eq => {
            let le = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
            vec![make(le, None, None)]
        }
        TheoryId::Poset => natural_posets(n).into_iter().map(|le| make(le, None, None)).collect(),
        TheoryId::Slat => natural_posets(n)
            .into_iter()
            .filter_map(|le| {
                let m = bound_table(&le, true)?;
                Some(make(le, Some(m), None))
            })
            .collect(),
        TheoryId::Dlat => natural_posets(n)
            .into_iter()
            .filter_map(|le| {
                let m = bound_table(&le, true)?;
                let j = bound_table(&le, false)?;
                let distributive =
                    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m[a][j[b][c]] == j[m[a][b]][m[a][c]])));
                distributive.then(|| make(le, Some(m), Some(j)))
            })
            .collect(),
        _ => Vec::new(),
    }
}

enum Val {
    Known(usize),
    /// Blocked on an unassigned variable.
    Open(usize),
    /// The structure cannot interpret the term.
    Undefined,
}

/// A clause `premises → conclusion` (or a single literal) instantiated by
/// `env`.
struct Constraint {
    premises: Vec<Literal>,
    conclusion: Literal,
    env: Vec<(TermId, usize)>,
}

struct Search<'a> {
    store: &'a TermStore,
    theory: TheoryId,
    exts: Vec<(Sym, usize)>,
    schemas: &'a [ClauseSchema],
    lits: &'a [Literal],
    consts: Vec<TermId>,
    max_size: usize,
    deadline: Instant,
    budget: u64,
    nodes: u64,
    exhausted: bool,
}

struct Frame<'s> {
    st: &'s Structure,
    /// Constant index, then extension cells.
    vars: Vec<Option<usize>>,
    cell_offset: BTreeMap<Sym, (usize, usize)>,
    const_index: BTreeMap<TermId, usize>,
}

impl Frame<'_> {
    fn term(&self, store: &TermStore, t: TermId, env: &[(TermId, usize)]) -> Val {
        match store.head(t) {
            Head::Var(_) => match env.iter().find(|(v, _)| *v == t) {
                Some((_, x)) => Val::Known(*x),
                None => Val::Undefined,
            },
            Head::Num(q) if q.is_zero() => self.st.bottom.map_or(Val::Undefined, Val::Known),
            Head::Num(q) if q.is_one() => self.st.top.map_or(Val::Undefined, Val::Known),
            Head::Num(_) => Val::Undefined,
            Head::Sym(s) => {
                let args = store.args(t);
                if args.is_empty() {
                    let i = self.const_index[&t];
                    return self.vars[i].map_or(Val::Open(i), Val::Known);
                }
                let mut vals = Vec::with_capacity(args.len());
                let mut open = None;
                for a in args {
                    match self.term(store, *a, env) {
                        Val::Known(x) => vals.push(x),
                        Val::Open(v) => {
                            open.get_or_insert(v);
                            vals.push(0);
                        }
                        Val::Undefined => return Val::Undefined,
                    }
                }
                if let Some(v) = open {
                    return Val::Open(v);
                }
                if let Some((offset, _)) = self.cell_offset.get(s) {
                    let idx = vals.iter().fold(0, |acc, x| acc * self.st.n + x);
                    let i = offset + idx;
                    return self.vars[i].map_or(Val::Open(i), Val::Known);
                }
                let table = match store.name(*s) {
                    MEET => &self.st.meet,
                    JOIN => &self.st.join,
                    _ => return Val::Undefined,
                };
                match table {
                    Some(tb) => Val::Known(vals[1..].iter().fold(vals[0], |acc, x| tb[acc][*x])),
                    None => Val::Undefined,
                }
            }
        }
    }

    /// `Some(truth)` or `Err(blocking var)`; `None` when undefined.
    fn literal(&self, store: &TermStore, l: &Literal, env: &[(TermId, usize)]) -> Option<std::result::Result<bool, usize>> {
        let l_val = self.term(store, l.atom.lhs, env);
        let r_val = self.term(store, l.atom.rhs, env);
        let (x, y) = match (l_val, r_val) {
            (Val::Undefined, _) | (_, Val::Undefined) => return None,
            (Val::Open(v), _) | (_, Val::Open(v)) => return Some(Err(v)),
            (Val::Known(x), Val::Known(y)) => (x, y),
        };
        let holds = match l.atom.rel {
            Rel::Eq => x == y,
            Rel::Leq => self.st.le[x][y],
            Rel::Lt => self.st.le[x][y] && x != y,
        };
        Some(Ok(holds == l.pos))
    }

    /// `Ok(true)`, `Ok(false)` or `Err(blocking var)`; `None` when undefined.
    fn constraint(&self, store: &TermStore, c: &Constraint) -> Option<std::result::Result<bool, usize>> {
        let mut open = None;
        for p in &c.premises {
            match self.literal(store, p, &c.env)? {
                Ok(true) => {}
                Ok(false) => return Some(Ok(true)),
                Err(v) => {
                    open.get_or_insert(v);
                }
            }
        }
        match self.literal(store, &c.conclusion, &c.env)? {
            Ok(true) => Some(Ok(true)),
            Ok(false) => Some(open.map_or(Ok(false), Err)),
            Err(v) => Some(Err(open.unwrap_or(v))),
        }
    }
}

fn schema_vars(store: &TermStore, s: &ClauseSchema) -> Vec<TermId> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for a in std::iter::once(&s.conclusion).chain(&s.premises) {
        for t in a.terms() {
            store.subterms(t, &mut out, &mut seen);
        }
    }
    out.retain(|t| store.is_var(*t));
    out
}

impl<'a> Search<'a> {
    fn new(
        store: &'a TermStore,
        theory: TheoryId,
        exts: Vec<(Sym, usize)>,
        schemas: &'a [ClauseSchema],
        lits: &'a [Literal],
        cfg: &OracleConfig,
    ) -> Self {
        Search {
            store,
            theory,
            exts,
            schemas,
            lits,
            consts: {
                let mut cs: BTreeSet<TermId> = constants_of(store, lits).into_iter().collect();
                for s in schemas {
                    for a in std::iter::once(&s.conclusion).chain(&s.premises) {
                        a.constants(store, &mut cs);
                    }
                }
                cs.into_iter().filter(|c| store.as_num(*c).is_none()).collect()
            },
            max_size: cfg.max_domain_size,
            deadline: Instant::now() + cfg.timeout,
            budget: cfg.node_budget,
            nodes: 0,
            exhausted: false,
        }
    }

    /// Whether finding no model up to `n` elements proves unsatisfiability.
    fn complete_at(&self, n: usize) -> bool {
        if self.exhausted || !self.exts.is_empty() {
            return false;
        }
        let needed = match self.theory {
            TheoryId::Eq | TheoryId::Poset => self.consts.len().max(1),
            _ => {
                let negatives = self.lits.iter().filter(|l| !l.pos).count() as u32;
                if negatives >= 8 {
                    return false;
                }
                1usize << negatives
            }
        };
        n >= needed
    }

    /// `Some(Some(model))`, `Some(None)` after a full search, `None` when
    /// the budget ran out.
    fn run(&mut self) -> Option<Option<String>> {
        for n in 1..=MAX_DOMAIN {
            if n > self.max_size() {
                break;
            }
            for st in structures(self.theory, n) {
                match self.solve(&st) {
                    Some(Some(m)) => return Some(Some(m)),
                    Some(None) => {}
                    None => {
                        self.exhausted = true;
                        return None;
                    }
                }
            }
        }
        Some(None)
    }

    fn max_size(&self) -> usize {
        self.max_size
    }

    fn instances(&self, st: &Structure) -> Vec<Constraint> {
        let mut out: Vec<Constraint> = self
            .lits
            .iter()
            .map(|l| Constraint { premises: Vec::new(), conclusion: *l, env: Vec::new() })
            .collect();
        for s in self.schemas {
            let vars = schema_vars(self.store, s);
            let total = st.n.pow(vars.len() as u32);
            for mut k in 0..total {
                let mut env = Vec::with_capacity(vars.len());
                for v in &vars {
                    env.push((*v, k % st.n));
                    k /= st.n;
                }
                out.push(Constraint {
                    premises: s.premises.iter().map(|p| Literal::pos(*p)).collect(),
                    conclusion: Literal::pos(s.conclusion),
                    env,
                });
            }
        }
        out
    }

    fn solve(&mut self, st: &Structure) -> Option<Option<String>> {
        let mut cell_offset = BTreeMap::new();
        let mut next = self.consts.len();
        for (f, arity) in &self.exts {
            let size = st.n.pow(*arity as u32);
            cell_offset.insert(*f, (next, *arity));
            next += size;
        }
        let const_index = self.consts.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut frame = Frame { st, vars: vec![None; next], cell_offset, const_index };
        let constraints = self.instances(st);
        match self.dfs(&mut frame, &constraints)? {
            true => Some(Some(self.describe(&frame))),
            false => Some(None),
        }
    }

    /// `None` when the budget ran out.
    fn dfs(&mut self, frame: &mut Frame, constraints: &[Constraint]) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget || (self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline) {
            return None;
        }
        let mut branch = None;
        for c in constraints {
            match frame.constraint(self.store, c) {
                None => return Some(false),
                Some(Ok(true)) => {}
                Some(Ok(false)) => return Some(false),
                Some(Err(v)) => {
                    branch.get_or_insert(v);
                }
            }
        }
        let Some(v) = branch else {
            for x in frame.vars.iter_mut() {
                x.get_or_insert(0);
            }
            return Some(true);
        };
        for value in 0..frame.st.n {
            frame.vars[v] = Some(value);
            if self.dfs(frame, constraints)? {
                return Some(true);
            }
        }
        frame.vars[v] = None;
        Some(false)
    }

    fn describe(&self, frame: &Frame) -> String {
        let st = frame.st;
        let mut out = format!("domain 0..{}", st.n - 1);
        let strict: Vec<String> = (0..st.n)
            .flat_map(|i| (0..st.n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && st.le[i][j])
            .map(|(i, j)| format!("{}<{}", i, j))
            .collect();
        if self.theory != TheoryId::Eq {
            let _ = write!(out, "\norder {}", if strict.is_empty() { "discrete".to_string() } else { strict.join(" ") });
        }
        for (c, i) in &frame.const_index {
            let _ = write!(out, "\n{} = {}", self.store.display(*c), frame.vars[*i].unwrap_or(0));
        }
        for (f, (offset, arity)) in &frame.cell_offset {
            let size = st.n.pow(*arity as u32);
            let cells: Vec<String> = (0..size)
                .map(|k| {
                    let mut args = Vec::new();
                    let mut r = k;
                    for _ in 0..*arity {
                        args.push(r % st.n);
                        r /= st.n;
                    }
                    args.reverse();
                    let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                    format!("({})={}", args.join(","), frame.vars[offset + k].unwrap_or(0))
                })
                .collect();
            let _ = write!(out, "\n{} {}", self.store.name(*f), cells.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    fn verdict(text: &str, mode: OracleMode, n: usize) -> Verdict {
        let f = parse_problem(text).unwrap();
        finite_model_oracle(&f.problem, &OracleConfig::new(mode, n).unwrap()).verdict
    }

    #[test]
    fn poset_counts() {
        // Naturally labelled posets: 1, 2, 7, 40.
        let counts: Vec<usize> = (1..=4).map(|n| natural_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40]);
        assert_eq!(structures(TheoryId::Dlat, 4).len(), 2);
    }

    #[test]
    fn base_only_verdicts() {
        let cyc = "(theory poset)\n(A (leq a b) (leq b c))\n(B (not (leq a c)))";
        assert_eq!(verdict(cyc, OracleMode::FiniteModels, 3), Verdict::Unsat);
        assert_eq!(verdict(cyc, OracleMode::FiniteModels, 2), Verdict::Unknown);
        let ok = "(theory slat)\n(A (leq a b))\n(B (not (leq b a)))";
        assert_eq!(verdict(ok, OracleMode::FiniteModels, 2), Verdict::Sat);
        assert_eq!(verdict(ok, OracleMode::FreeAlgebra, 2), Verdict::Sat);
        let bad = "(theory slat)\n(A (leq a b) (leq a c))\n(B (not (leq a (meet b c))))";
        assert_eq!(verdict(bad, OracleMode::FreeAlgebra, 2), Verdict::Unsat);
        assert_eq!(verdict(bad, OracleMode::FiniteModels, 2), Verdict::Unsat);
    }

    #[test]
    fn empty_poset_problem_is_sat() {
        assert_eq!(verdict("(theory poset)\n(A)\n(B (leq a a))", OracleMode::FiniteModels, 1), Verdict::Sat);
    }

    #[test]
    fn extension_models_are_total() {
        let text = "(theory poset)\n(ext f 1)\n(axiom (mon f))\n(A (leq a b))\n(B (not (leq (f a) (f b))))";
        assert_eq!(verdict(text, OracleMode::FiniteModels, 3), Verdict::Unknown);
        let sat = "(theory poset)\n(ext f 1)\n(axiom (mon f))\n(A (leq a b))\n(B (not (eq (f a) (f b))))";
        assert_eq!(verdict(sat, OracleMode::FiniteModels, 3), Verdict::Sat);
    }
}
