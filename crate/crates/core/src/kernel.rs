//! Interned terms, atoms and literals over a base signature extended with
//! extension functions, plus constant ownership bookkeeping.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Interned symbol name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sym(u32);

/// Handle of an interned term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Head of a term node.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Head {
    /// Function symbol, or a constant when applied to no arguments.
    Sym(Sym),
    /// Schematic variable; never unifies with a constant.
    Var(Sym),
    /// Rational numeral.
    Num(BigRational),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Node {
    head: Head,
    args: Vec<TermId>,
}

/// Builtin base-function names.
pub const MEET: &str = "meet";
pub const JOIN: &str = "join";
pub const COMPL: &str = "compl";
pub const PLUS: &str = "+";
pub const MINUS: &str = "-";
pub const TIMES: &str = "*";

/// Hash-consing arena for terms. Structurally equal terms get the same id.
#[derive(Clone, Default)]
pub struct TermStore {
    nodes: Vec<Node>,
    index: HashMap<Node, TermId>,
    names: Vec<String>,
    name_index: HashMap<String, Sym>,
}

impl TermStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sym(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.name_index.get(name) {
            return s;
        }
        let s = Sym(self.names.len() as u32);
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), s);
        s
    }

    pub fn lookup_sym(&self, name: &str) -> Option<Sym> {
        self.name_index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.0 as usize]
    }

    fn intern(&mut self, node: Node) -> TermId {
        if let Some(&t) = self.index.get(&node) {
            return t;
        }
        let t = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, t);
        t
    }

    pub fn app(&mut self, f: Sym, args: Vec<TermId>) -> TermId {
        self.intern(Node { head: Head::Sym(f), args })
    }

    pub fn app_named(&mut self, f: &str, args: Vec<TermId>) -> TermId {
        let s = self.sym(f);
        self.app(s, args)
    }

    pub fn constant(&mut self, name: &str) -> TermId {
        self.app_named(name, Vec::new())
    }

    pub fn var(&mut self, name: &str) -> TermId {
        let s = self.sym(name);
        self.intern(Node { head: Head::Var(s), args: Vec::new() })
    }

    pub fn num(&mut self, q: BigRational) -> TermId {
        self.intern(Node { head: Head::Num(q), args: Vec::new() })
    }

    pub fn int(&mut self, k: i64) -> TermId {
        self.num(BigRational::from_integer(k.into()))
    }

    pub fn head(&self, t: TermId) -> &Head {
        &self.nodes[t.index()].head
    }

    pub fn args(&self, t: TermId) -> &[TermId] {
        &self.nodes[t.index()].args
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Function symbol at the head, if any (constants included).
    pub fn head_sym(&self, t: TermId) -> Option<Sym> {
        match self.head(t) {
            Head::Sym(s) => Some(*s),
            _ => None,
        }
    }

    pub fn is_const(&self, t: TermId) -> bool {
        matches!(self.head(t), Head::Sym(_)) && self.args(t).is_empty()
    }

    pub fn is_var(&self, t: TermId) -> bool {
        matches!(self.head(t), Head::Var(_))
    }

    pub fn as_num(&self, t: TermId) -> Option<&BigRational> {
        match self.head(t) {
            Head::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_ground(&self, t: TermId) -> bool {
        !self.is_var(t) && self.args(t).iter().all(|&a| self.is_ground(a))
    }

    /// All subterms of `t` in pre-order, each once.
    pub fn subterms(&self, t: TermId, out: &mut Vec<TermId>, seen: &mut BTreeSet<TermId>) {
        if !seen.insert(t) {
            return;
        }
        out.push(t);
        for &a in self.args(t) {
            self.subterms(a, out, seen);
        }
    }

    /// Constants (zero-ary symbols) occurring in `t`.
    pub fn constants_of(&self, t: TermId, out: &mut BTreeSet<TermId>) {
        if self.is_const(t) {
            out.insert(t);
        }
        for &a in self.args(t) {
            self.constants_of(a, out);
        }
    }

    /// Function symbols (arity > 0) occurring in `t`.
    pub fn functions_of(&self, t: TermId, out: &mut BTreeSet<Sym>) {
        if let Head::Sym(s) = self.head(t) {
            if !self.args(t).is_empty() {
                out.insert(*s);
            }
        }
        for &a in self.args(t) {
            self.functions_of(a, out);
        }
    }

    /// Replaces subterms found in `map`, bottom-up, once.
    pub fn substitute(&mut self, t: TermId, map: &HashMap<TermId, TermId>) -> TermId {
        if let Some(&r) = map.get(&t) {
            return r;
        }
        if self.args(t).is_empty() {
            return t;
        }
        let head = self.head(t).clone();
        let args: Vec<TermId> = self.args(t).to_vec();
        let new_args: Vec<TermId> = args.iter().map(|&a| self.substitute(a, map)).collect();
        if new_args == args {
            return t;
        }
        self.intern(Node { head, args: new_args })
    }

    /// Structural order by printed names, used for canonical orientation.
    pub fn cmp_terms(&self, a: TermId, b: TermId) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        let rank = |h: &Head| match h {
            Head::Num(_) => 0,
            Head::Sym(_) => 1,
            Head::Var(_) => 2,
        };
        let (ha, hb) = (self.head(a), self.head(b));
        let o = rank(ha).cmp(&rank(hb));
        if o != Ordering::Equal {
            return o;
        }
        let o = match (ha, hb) {
            (Head::Num(p), Head::Num(q)) => p.cmp(q),
            (Head::Sym(s), Head::Sym(r)) | (Head::Var(s), Head::Var(r)) => {
                let aa = self.args(a).len();
                let ba = self.args(b).len();
                aa.cmp(&ba).then_with(|| self.name(*s).cmp(self.name(*r)))
            }
            _ => Ordering::Equal,
        };
        if o != Ordering::Equal {
            return o;
        }
        for (x, y) in self.args(a).iter().zip(self.args(b).iter()) {
            let o = self.cmp_terms(*x, *y);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }

    pub fn display(&self, t: TermId) -> String {
        let mut s = String::new();
        self.write_term(t, &mut s);
        s
    }

    fn write_term(&self, t: TermId, out: &mut String) {
        match self.head(t) {
            Head::Num(q) => out.push_str(&fmt_rational(q)),
            Head::Var(v) => {
                out.push('?');
                out.push_str(self.name(*v));
            }
            Head::Sym(s) => {
                let args = self.args(t);
                if args.is_empty() {
                    out.push_str(self.name(*s));
                } else {
                    out.push('(');
                    out.push_str(self.name(*s));
                    for &a in args {
                        out.push(' ');
                        self.write_term(a, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

/// Prints `p/q` in lowest terms, or `p` for integers.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Binary relation of an atom.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rel {
    Eq,
    Leq,
    Lt,
}

impl Rel {
    pub fn keyword(self) -> &'static str {
        match self {
            Rel::Eq => "eq",
            Rel::Leq => "leq",
            Rel::Lt => "lt",
        }
    }
}

/// Ground or schematic atom `lhs R rhs`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub rel: Rel,
    pub lhs: TermId,
    pub rhs: TermId,
}

impl Atom {
    /// Builds an atom, orienting equations canonically.
    pub fn new(store: &TermStore, rel: Rel, lhs: TermId, rhs: TermId) -> Atom {
        if rel == Rel::Eq && store.cmp_terms(lhs, rhs) == Ordering::Greater {
            Atom { rel, lhs: rhs, rhs: lhs }
        } else {
            Atom { rel, lhs, rhs }
        }
    }

    pub fn display(&self, store: &TermStore) -> String {
        format!("({} {} {})", self.rel.keyword(), store.display(self.lhs), store.display(self.rhs))
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs && self.rel != Rel::Lt
    }

    pub fn terms(&self) -> [TermId; 2] {
        [self.lhs, self.rhs]
    }

    pub fn substitute(&self, store: &mut TermStore, map: &HashMap<TermId, TermId>) -> Atom {
        let l = store.substitute(self.lhs, map);
        let r = store.substitute(self.rhs, map);
        Atom::new(store, self.rel, l, r)
    }

    pub fn constants(&self, store: &TermStore, out: &mut BTreeSet<TermId>) {
        store.constants_of(self.lhs, out);
        store.constants_of(self.rhs, out);
    }

    pub fn cmp_canonical(&self, other: &Atom, store: &TermStore) -> Ordering {
        self.rel
            .cmp(&other.rel)
            .then_with(|| store.cmp_terms(self.lhs, other.lhs))
            .then_with(|| store.cmp_terms(self.rhs, other.rhs))
    }
}

/// Signed atom.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub pos: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { pos: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { pos: false, atom }
    }

    pub fn negate(self) -> Self {
        Literal { pos: !self.pos, atom: self.atom }
    }

    pub fn display(&self, store: &TermStore) -> String {
        if self.pos {
            self.atom.display(store)
        } else {
            format!("(not {})", self.atom.display(store))
        }
    }

    pub fn substitute(&self, store: &mut TermStore, map: &HashMap<TermId, TermId>) -> Literal {
        Literal { pos: self.pos, atom: self.atom.substitute(store, map) }
    }
}

/// Which conjunction a literal set belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Side {
    A,
    B,
    Joint,
}

/// Ordered, duplicate-free conjunction of ground literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundConjunction {
    pub side: Side,
    lits: Vec<Literal>,
}

impl GroundConjunction {
    pub fn new(side: Side) -> Self {
        GroundConjunction { side, lits: Vec::new() }
    }

    pub fn from_lits(side: Side, lits: impl IntoIterator<Item = Literal>) -> Self {
        let mut g = Self::new(side);
        for l in lits {
            g.push(l);
        }
        g
    }

    /// Appends unless already present; returns whether it was new.
    pub fn push(&mut self, lit: Literal) -> bool {
        if self.lits.contains(&lit) {
            false
        } else {
            self.lits.push(lit);
            true
        }
    }

    pub fn lits(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn positives(&self) -> Vec<Atom> {
        self.lits.iter().filter(|l| l.pos).map(|l| l.atom).collect()
    }
}

/// Theories with a decision backend.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TheoryId {
    Eq,
    Poset,
    Slat,
    Dlat,
    Bool,
    Lra,
}

impl TheoryId {
    pub fn keyword(self) -> &'static str {
        match self {
            TheoryId::Eq => "eq",
            TheoryId::Poset => "poset",
            TheoryId::Slat => "slat",
            TheoryId::Dlat => "dlat",
            TheoryId::Bool => "bool",
            TheoryId::Lra => "lra",
        }
    }

    pub fn parse(s: &str) -> Option<TheoryId> {
        Some(match s {
            "eq" => TheoryId::Eq,
            "poset" => TheoryId::Poset,
            "slat" => TheoryId::Slat,
            "dlat" => TheoryId::Dlat,
            "bool" => TheoryId::Bool,
            "lra" => TheoryId::Lra,
            _ => return None,
        })
    }

    pub fn is_lattice(self) -> bool {
        matches!(self, TheoryId::Slat | TheoryId::Dlat | TheoryId::Bool)
    }

    /// Base function symbols with their arity (`None` for variadic).
    pub fn base_functions(self) -> &'static [(&'static str, Option<usize>)] {
        match self {
            TheoryId::Eq | TheoryId::Poset => &[],
            TheoryId::Slat => &[(MEET, None)],
            TheoryId::Dlat => &[(MEET, None), (JOIN, None)],
            TheoryId::Bool => &[(MEET, None), (JOIN, None), (COMPL, Some(1))],
            TheoryId::Lra => &[(PLUS, None), (MINUS, None), (TIMES, Some(2))],
        }
    }

    pub fn supports(self, rel: Rel) -> bool {
        match self {
            TheoryId::Eq => rel == Rel::Eq,
            TheoryId::Lra => true,
            _ => rel != Rel::Lt,
        }
    }
}

/// Ownership tag of a constant or term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Ownership {
    ALocal,
    BLocal,
    Shared,
}

impl Ownership {
    pub fn side(self) -> Option<Side> {
        match self {
            Ownership::ALocal => Some(Side::A),
            Ownership::BLocal => Some(Side::B),
            Ownership::Shared => None,
        }
    }

    pub fn of_side(side: Side) -> Ownership {
        match side {
            Side::A => Ownership::ALocal,
            Side::B => Ownership::BLocal,
            Side::Joint => Ownership::Shared,
        }
    }

    /// Combines two tags; `None` when A-local meets B-local.
    pub fn join(self, other: Ownership) -> Option<Ownership> {
        match (self, other) {
            (Ownership::Shared, o) | (o, Ownership::Shared) => Some(o),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// Predicate flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredInfo {
    pub rel: Rel,
    pub in_p: bool,
    pub transitive: bool,
    pub reflexive: bool,
}

/// Two-sorted signature with ownership tags.
#[derive(Clone, Debug)]
pub struct Signature {
    pub theory: TheoryId,
    pub base_functions: BTreeMap<Sym, Option<usize>>,
    pub extension_functions: BTreeMap<Sym, usize>,
    pub predicates: Vec<PredInfo>,
    pub constants: BTreeMap<TermId, Ownership>,
    /// Ownership of extension functions: `Shared` for the closure set.
    pub function_owner: BTreeMap<Sym, Ownership>,
}

impl Signature {
    pub fn new(store: &mut TermStore, theory: TheoryId) -> Self {
        let mut base_functions = BTreeMap::new();
        for (name, arity) in theory.base_functions() {
            base_functions.insert(store.sym(name), *arity);
        }
        let predicates = [Rel::Eq, Rel::Leq, Rel::Lt]
            .into_iter()
            .filter(|r| theory.supports(*r))
            .map(|rel| PredInfo {
                rel,
                in_p: match theory {
                    TheoryId::Lra => rel == Rel::Leq,
                    _ => rel != Rel::Lt,
                },
                transitive: true,
                reflexive: rel != Rel::Lt,
            })
            .collect();
        Signature {
            theory,
            base_functions,
            extension_functions: BTreeMap::new(),
            predicates,
            constants: BTreeMap::new(),
            function_owner: BTreeMap::new(),
        }
    }

    pub fn is_extension(&self, f: Sym) -> bool {
        self.extension_functions.contains_key(&f)
    }

    pub fn is_base_function(&self, f: Sym) -> bool {
        self.base_functions.contains_key(&f)
    }

    pub fn in_p(&self, rel: Rel) -> bool {
        self.predicates.iter().any(|p| p.rel == rel && p.in_p)
    }

    pub fn owner(&self, c: TermId) -> Ownership {
        self.constants.get(&c).copied().unwrap_or(Ownership::Shared)
    }

    pub fn set_owner(&mut self, c: TermId, o: Ownership) {
        self.constants.insert(c, o);
    }

    pub fn shared_functions(&self) -> BTreeSet<Sym> {
        self.function_owner
            .iter()
            .filter(|(_, o)| **o == Ownership::Shared)
            .map(|(f, _)| *f)
            .collect()
    }
}

/// Ownership of a ground term: shared iff all its constants and extension
/// functions are shared.
pub fn ownership_of(store: &TermStore, sig: &Signature, t: TermId) -> Result<Ownership> {
    fn go(store: &TermStore, sig: &Signature, t: TermId, acc: Ownership) -> Option<Ownership> {
        let mut acc = acc;
        match store.head(t) {
            Head::Sym(s) => {
                if store.args(t).is_empty() {
                    acc = acc.join(sig.owner(t))?;
                } else if sig.is_extension(*s) {
                    let o = sig.function_owner.get(s).copied().unwrap_or(Ownership::Shared);
                    acc = acc.join(o)?;
                }
            }
            Head::Num(_) | Head::Var(_) => {}
        }
        for &a in store.args(t) {
            acc = go(store, sig, a, acc)?;
        }
        Some(acc)
    }
    go(store, sig, t, Ownership::Shared).ok_or_else(|| Error::MixedTerm(store.display(t)))
}

/// Ownership of an atom, by the same rule.
pub fn atom_ownership(store: &TermStore, sig: &Signature, a: &Atom) -> Result<Ownership> {
    let l = ownership_of(store, sig, a.lhs)?;
    let r = ownership_of(store, sig, a.rhs)?;
    l.join(r).ok_or_else(|| Error::MixedTerm(a.display(store)))
}

/// Extension-headed subterms of the literals, pre-order, first occurrence
/// first. Closed under extension-headed subterms.
pub fn extension_ground_terms(store: &TermStore, sig: &Signature, lits: &[Literal]) -> Vec<TermId> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for l in lits {
        for t in l.atom.terms() {
            let mut subs = Vec::new();
            store.subterms(t, &mut subs, &mut BTreeSet::new());
            for s in subs {
                if let Some(f) = store.head_sym(s) {
                    if sig.is_extension(f) && !store.args(s).is_empty() && seen.insert(s) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Quantifier-free formula in negation normal form over literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Lit(Literal),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        dedup(&mut out);
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        dedup(&mut out);
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn atoms(atoms: &[Atom]) -> Formula {
        Formula::and(atoms.iter().map(|a| Formula::Lit(Literal::pos(*a))).collect())
    }

    pub fn negate(&self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Lit(l) => Formula::Lit(l.negate()),
            Formula::And(xs) => Formula::or(xs.iter().map(|x| x.negate()).collect()),
            Formula::Or(xs) => Formula::and(xs.iter().map(|x| x.negate()).collect()),
        }
    }

    /// True for a literal or a conjunction of literals, including the
    /// degenerate `true` and `false`.
    pub fn is_literal_conjunction(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Lit(_) => true,
            Formula::And(xs) => xs.iter().all(|x| matches!(x, Formula::Lit(_))),
            _ => false,
        }
    }

    pub fn literals(&self, out: &mut Vec<Literal>) {
        match self {
            Formula::Lit(l) => out.push(*l),
            Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| x.literals(out)),
            _ => {}
        }
    }

    pub fn map_literals(&self, f: &mut dyn FnMut(&Literal) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lit(l) => f(l),
            Formula::And(xs) => Formula::and(xs.iter().map(|x| x.map_literals(f)).collect()),
            Formula::Or(xs) => Formula::or(xs.iter().map(|x| x.map_literals(f)).collect()),
        }
    }

    /// Disjunctive normal form as a list of literal conjunctions.
    pub fn dnf(&self) -> Vec<Vec<Literal>> {
        match self {
            Formula::True => vec![vec![]],
            Formula::False => vec![],
            Formula::Lit(l) => vec![vec![*l]],
            Formula::Or(xs) => xs.iter().flat_map(|x| x.dnf()).collect(),
            Formula::And(xs) => {
                let mut acc: Vec<Vec<Literal>> = vec![vec![]];
                for x in xs {
                    let d = x.dnf();
                    let mut next = Vec::new();
                    for a in &acc {
                        for b in &d {
                            let mut c = a.clone();
                            for l in b {
                                if !c.contains(l) {
                                    c.push(*l);
                                }
                            }
                            next.push(c);
                        }
                    }
                    acc = next;
                }
                acc
            }
        }
    }

    pub fn display(&self, store: &TermStore) -> String {
        match self {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Lit(l) => l.display(store),
            Formula::And(xs) | Formula::Or(xs) => {
                let kw = if matches!(self, Formula::And(_)) { "and" } else { "or" };
                let parts: Vec<String> = xs.iter().map(|x| x.display(store)).collect();
                format!("({} {})", kw, parts.join(" "))
            }
        }
    }

    pub fn constants(&self, store: &TermStore) -> BTreeSet<TermId> {
        let mut lits = Vec::new();
        self.literals(&mut lits);
        let mut out = BTreeSet::new();
        for l in lits {
            l.atom.constants(store, &mut out);
        }
        out
    }

    pub fn functions(&self, store: &TermStore) -> BTreeSet<Sym> {
        let mut lits = Vec::new();
        self.literals(&mut lits);
        let mut out = BTreeSet::new();
        for l in lits {
            store.functions_of(l.atom.lhs, &mut out);
            store.functions_of(l.atom.rhs, &mut out);
        }
        out
    }
}

fn dedup(xs: &mut Vec<Formula>) {
    let mut out: Vec<Formula> = Vec::with_capacity(xs.len());
    for x in xs.drain(..) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    *xs = out;
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Numeric helpers shared by the arithmetic code.
pub fn rational_is_int(q: &BigRational) -> bool {
    q.denom().is_one()
}

pub fn rational_sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_shares_ids() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let f1 = s.app_named("f", vec![a]);
        let f2 = s.app_named("f", vec![a]);
        assert_eq!(f1, f2);
        assert_eq!(s.display(f1), "(f a)");
    }

    #[test]
    fn equations_are_oriented() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let b = s.constant("b");
        assert_eq!(Atom::new(&s, Rel::Eq, b, a), Atom::new(&s, Rel::Eq, a, b));
        assert_ne!(Atom::new(&s, Rel::Leq, b, a), Atom::new(&s, Rel::Leq, a, b));
    }

    #[test]
    fn ownership_rules() {
        let mut s = TermStore::new();
        let mut sig = Signature::new(&mut s, TheoryId::Slat);
        let f = s.sym("f");
        sig.extension_functions.insert(f, 1);
        sig.function_owner.insert(f, Ownership::Shared);
        let d = s.constant("d");
        let b = s.constant("b");
        let a = s.constant("a");
        sig.set_owner(d, Ownership::Shared);
        sig.set_owner(b, Ownership::BLocal);
        sig.set_owner(a, Ownership::ALocal);
        assert_eq!(ownership_of(&s, &sig, d).unwrap(), Ownership::Shared);
        let fd = s.app(f, vec![d]);
        assert_eq!(ownership_of(&s, &sig, fd).unwrap(), Ownership::Shared);
        let fb = s.app(f, vec![b]);
        assert_eq!(ownership_of(&s, &sig, fb).unwrap(), Ownership::BLocal);
        let m = s.app_named(MEET, vec![a, b]);
        assert!(matches!(ownership_of(&s, &sig, m), Err(Error::MixedTerm(_))));
    }

    #[test]
    fn extension_terms_example() {
        let mut s = TermStore::new();
        let mut sig = Signature::new(&mut s, TheoryId::Slat);
        let f = s.sym("f");
        let g = s.sym("g");
        sig.extension_functions.insert(f, 1);
        sig.extension_functions.insert(g, 1);
        let [a, b, c, d] = ["a", "b", "c", "d"].map(|n| s.constant(n));
        let ga = s.app(g, vec![a]);
        let fb = s.app(f, vec![b]);
        let lits = vec![
            Literal::pos(Atom::new(&s, Rel::Leq, d, ga)),
            Literal::pos(Atom::new(&s, Rel::Leq, a, c)),
            Literal::pos(Atom::new(&s, Rel::Leq, b, d)),
            Literal::neg(Atom::new(&s, Rel::Leq, fb, c)),
        ];
        assert_eq!(extension_ground_terms(&s, &sig, &lits), vec![ga, fb]);
        let gc = s.app(g, vec![c]);
        let fgc = s.app(f, vec![gc]);
        let x = s.constant("x");
        let lits = vec![Literal::pos(Atom::new(&s, Rel::Eq, x, fgc))];
        assert_eq!(extension_ground_terms(&s, &sig, &lits), vec![fgc, gc]);
        let lits = vec![Literal::pos(Atom::new(&s, Rel::Leq, a, c))];
        assert!(extension_ground_terms(&s, &sig, &lits).is_empty());
    }

    #[test]
    fn dnf_of_nested() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let b = s.constant("b");
        let c = s.constant("c");
        let l1 = Formula::Lit(Literal::pos(Atom::new(&s, Rel::Leq, a, b)));
        let l2 = Formula::Lit(Literal::pos(Atom::new(&s, Rel::Leq, b, c)));
        let l3 = Formula::Lit(Literal::pos(Atom::new(&s, Rel::Leq, a, c)));
        let f = Formula::and(vec![l1, Formula::or(vec![l2, l3])]);
        assert_eq!(f.dnf().len(), 2);
        assert!(!f.is_literal_conjunction());
        assert_eq!(f.negate().negate(), f);
    }
}
