//! Axiom schemas, their validation, and locality-based ground
//! instantiation over the definitions of a purified problem.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::kernel::{Atom, Head, Ownership, Rel, Signature, Sym, TermId, TermStore};
use crate::preprocess::{Definition, DefinitionSet};

/// Named schema families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaKind {
    /// Monotonicity of `f` in every argument.
    Mon(Sym),
    /// `x̄ ≤ ȳ → f(x̄) ≤ g(ȳ)`.
    Leq(Sym, Sym),
    /// Semi-Galois condition `⋀ xi ≤ gi(x) → f(x̄) ≤ x`.
    Sgc(Sym, Vec<Sym>),
    /// `f(x̄) R t(x̄)`, or `t(x̄) R f(x̄)` when `lower`.
    Bound { f: Sym, lower: bool, strict: bool },
    /// Guarded bound: `φ(x̄) → f(x̄) R t(x̄)`.
    GBound { f: Sym, lower: bool, strict: bool },
}

impl SchemaKind {
    pub fn head(&self) -> Sym {
        match self {
            SchemaKind::Mon(f) | SchemaKind::Leq(f, _) | SchemaKind::Sgc(f, _) => *f,
            SchemaKind::Bound { f, .. } | SchemaKind::GBound { f, .. } => *f,
        }
    }

    /// Whether instances can be split through the head's definition.
    fn has_pivot(&self) -> bool {
        matches!(self, SchemaKind::Mon(_) | SchemaKind::Leq(..) | SchemaKind::Sgc(..))
    }
}

/// Horn clause template with variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSchema {
    pub kind: SchemaKind,
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
}

fn vars(store: &mut TermStore, prefix: &str, n: usize) -> Vec<TermId> {
    (1..=n).map(|i| store.var(&format!("{}{}", prefix, i))).collect()
}

/// Template variables `?1 .. ?n` used by bound schemas.
pub fn bound_vars(store: &mut TermStore, n: usize) -> Vec<TermId> {
    vars(store, "", n)
}

impl ClauseSchema {
    pub fn mon(store: &mut TermStore, f: Sym, arity: usize) -> Self {
        let xs = vars(store, "x", arity);
        let ys = vars(store, "y", arity);
        let premises = xs.iter().zip(&ys).map(|(x, y)| Atom { rel: Rel::Leq, lhs: *x, rhs: *y }).collect();
        let fx = store.app(f, xs);
        let fy = store.app(f, ys);
        ClauseSchema { kind: SchemaKind::Mon(f), premises, conclusion: Atom { rel: Rel::Leq, lhs: fx, rhs: fy } }
    }

    pub fn leq(store: &mut TermStore, f: Sym, g: Sym, arity: usize) -> Self {
        let xs = vars(store, "x", arity);
        let ys = vars(store, "y", arity);
        let premises = xs.iter().zip(&ys).map(|(x, y)| Atom { rel: Rel::Leq, lhs: *x, rhs: *y }).collect();
        let fx = store.app(f, xs);
        let gy = store.app(g, ys);
        ClauseSchema { kind: SchemaKind::Leq(f, g), premises, conclusion: Atom { rel: Rel::Leq, lhs: fx, rhs: gy } }
    }

    pub fn sgc(store: &mut TermStore, f: Sym, gs: Vec<Sym>) -> Self {
        let xs = vars(store, "x", gs.len());
        let x = store.var("x");
        let premises = xs
            .iter()
            .zip(&gs)
            .map(|(xi, g)| {
                let gx = store.app(*g, vec![x]);
                Atom { rel: Rel::Leq, lhs: *xi, rhs: gx }
            })
            .collect();
        let fx = store.app(f, xs);
        ClauseSchema { kind: SchemaKind::Sgc(f, gs), premises, conclusion: Atom { rel: Rel::Leq, lhs: fx, rhs: x } }
    }

    /// `bound` is a base template over `?1 .. ?arity`.
    pub fn bound(store: &mut TermStore, f: Sym, arity: usize, bound: TermId, lower: bool, strict: bool) -> Self {
        let xs = bound_vars(store, arity);
        let fx = store.app(f, xs);
        ClauseSchema {
            kind: SchemaKind::Bound { f, lower, strict },
            premises: Vec::new(),
            conclusion: bound_atom(fx, bound, lower, strict),
        }
    }

    pub fn gbound(
        store: &mut TermStore,
        f: Sym,
        arity: usize,
        guard: Vec<Atom>,
        bound: TermId,
        lower: bool,
        strict: bool,
    ) -> Self {
        let xs = bound_vars(store, arity);
        let fx = store.app(f, xs);
        ClauseSchema {
            kind: SchemaKind::GBound { f, lower, strict },
            premises: guard,
            conclusion: bound_atom(fx, bound, lower, strict),
        }
    }

    /// Extension-headed template terms, conclusion first.
    fn extension_terms(&self, store: &TermStore, sig: &Signature) -> Vec<TermId> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let atoms = std::iter::once(&self.conclusion).chain(self.premises.iter());
        for a in atoms {
            for t in a.terms() {
                let mut subs = Vec::new();
                store.subterms(t, &mut subs, &mut BTreeSet::new());
                for s in subs {
                    if store.head_sym(s).is_some_and(|f| sig.is_extension(f)) && seen.insert(s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    pub fn functions(&self, store: &TermStore, sig: &Signature) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for a in std::iter::once(&self.conclusion).chain(self.premises.iter()) {
            store.functions_of(a.lhs, &mut out);
            store.functions_of(a.rhs, &mut out);
        }
        out.retain(|f| sig.is_extension(*f));
        out
    }

    pub fn display(&self, store: &TermStore) -> String {
        let ps: Vec<String> = self.premises.iter().map(|p| p.display(store)).collect();
        format!("(=> (and {}) {})", ps.join(" "), self.conclusion.display(store))
    }
}

fn bound_atom(fx: TermId, bound: TermId, lower: bool, strict: bool) -> Atom {
    let rel = if strict { Rel::Lt } else { Rel::Leq };
    if lower {
        Atom { rel, lhs: bound, rhs: fx }
    } else {
        Atom { rel, lhs: fx, rhs: bound }
    }
}

/// A violated schema condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaViolation {
    NotFlat(String),
    NotLinear(String),
    NotType1(String),
    UnknownSymbol(String),
}

impl std::fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchemaViolation::NotFlat(s) => write!(f, "not flat: {}", s),
            SchemaViolation::NotLinear(s) => write!(f, "not linear: {}", s),
            SchemaViolation::NotType1(s) => write!(f, "not of the guarded shape: {}", s),
            SchemaViolation::UnknownSymbol(s) => write!(f, "unknown symbol: {}", s),
        }
    }
}

/// Checks flatness, linearity, symbol declarations and the clause shape.
pub fn validate_schema(store: &TermStore, sig: &Signature, s: &ClauseSchema) -> Vec<SchemaViolation> {
    let mut errs = Vec::new();
    let atoms: Vec<&Atom> = std::iter::once(&s.conclusion).chain(s.premises.iter()).collect();
    let mut all_terms = Vec::new();
    let mut seen = BTreeSet::new();
    for a in &atoms {
        if !sig.theory.supports(a.rel) {
            errs.push(SchemaViolation::UnknownSymbol(format!(
                "relation {} in {}",
                a.rel.keyword(),
                sig.theory.keyword()
            )));
        }
        for t in a.terms() {
            store.subterms(t, &mut all_terms, &mut seen);
        }
    }
    let mut below_ext = BTreeSet::new();
    for &t in &all_terms {
        let Head::Sym(f) = store.head(t) else { continue };
        let args = store.args(t);
        if args.is_empty() {
            continue;
        }
        if let Some(&n) = sig.extension_functions.get(f) {
            if n != args.len() {
                errs.push(SchemaViolation::UnknownSymbol(format!("{} with arity {}", store.display(t), args.len())));
            }
            if args.iter().any(|a| !store.is_var(*a)) {
                errs.push(SchemaViolation::NotFlat(store.display(t)));
            }
            let distinct: BTreeSet<TermId> = args.iter().copied().collect();
            if distinct.len() != args.len() {
                errs.push(SchemaViolation::NotLinear(store.display(t)));
            }
            below_ext.extend(args.iter().copied().filter(|a| store.is_var(*a)));
        } else if !sig.is_base_function(*f) {
            errs.push(SchemaViolation::UnknownSymbol(store.name(*f).to_string()));
        }
    }
    for &t in &all_terms {
        if store.is_var(t) && !below_ext.contains(&t) {
            errs.push(SchemaViolation::NotType1(format!("variable {} occurs below no extension function", store.display(t))));
        }
    }
    let head = s.kind.head();
    let ext_head = |t: TermId| store.head_sym(t).filter(|f| sig.is_extension(*f));
    let (f_side, other) = match &s.kind {
        SchemaKind::Bound { lower: true, .. } | SchemaKind::GBound { lower: true, .. } => {
            (s.conclusion.rhs, s.conclusion.lhs)
        }
        _ => (s.conclusion.lhs, s.conclusion.rhs),
    };
    if ext_head(f_side) != Some(head) {
        errs.push(SchemaViolation::NotType1(format!("conclusion {} is not headed by the schema's function", s.conclusion.display(store))));
    }
    match &s.kind {
        SchemaKind::Mon(_) | SchemaKind::Leq(..) | SchemaKind::Sgc(..) => {
            let xs = store.args(f_side);
            if s.premises.len() != xs.len() {
                errs.push(SchemaViolation::NotType1("one premise per argument expected".into()));
            }
            let targets: BTreeSet<TermId> =
                if store.args(other).is_empty() { [other].into() } else { store.args(other).iter().copied().collect() };
            for (p, x) in s.premises.iter().zip(xs.iter()) {
                if p.lhs != *x || !sig.in_p(p.rel) {
                    errs.push(SchemaViolation::NotType1(format!("premise {}", p.display(store))));
                }
                // Each right-hand side is a variable of the other side or an
                // extension term over such variables.
                let ok = if store.is_var(p.rhs) {
                    targets.contains(&p.rhs)
                } else {
                    ext_head(p.rhs).is_some() && store.args(p.rhs).iter().all(|z| targets.contains(z))
                };
                if !ok {
                    errs.push(SchemaViolation::NotType1(format!("premise {}", p.display(store))));
                }
            }
            if let SchemaKind::Sgc(_, gs) = &s.kind {
                for g in gs {
                    if sig.extension_functions.get(g) != Some(&1) {
                        errs.push(SchemaViolation::NotType1(format!("{} must be unary", store.name(*g))));
                    }
                }
            }
        }
        SchemaKind::Bound { .. } | SchemaKind::GBound { .. } => {
            let mut fs = BTreeSet::new();
            store.functions_of(other, &mut fs);
            for p in &s.premises {
                store.functions_of(p.lhs, &mut fs);
                store.functions_of(p.rhs, &mut fs);
            }
            if fs.iter().any(|f| sig.is_extension(*f)) {
                errs.push(SchemaViolation::NotType1("bound and guard must be base terms".into()));
            }
            if matches!(s.kind, SchemaKind::Bound { .. }) && !s.premises.is_empty() {
                errs.push(SchemaViolation::NotType1("bound without guard has premises".into()));
            }
        }
    }
    errs.dedup();
    errs
}

/// Extension functions whose co-occurrence class meets both sides.
pub fn shared_function_closure(
    store: &TermStore,
    sig: &Signature,
    schemas: &[ClauseSchema],
    a_funcs: &BTreeSet<Sym>,
    b_funcs: &BTreeSet<Sym>,
) -> BTreeSet<Sym> {
    let mut parent: BTreeMap<Sym, Sym> = BTreeMap::new();
    fn find(p: &mut BTreeMap<Sym, Sym>, x: Sym) -> Sym {
        let q = *p.get(&x).unwrap_or(&x);
        if q == x {
            return x;
        }
        let r = find(p, q);
        p.insert(x, r);
        r
    }
    for s in schemas {
        let fs: Vec<Sym> = s.functions(store, sig).into_iter().collect();
        for w in fs.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut all: BTreeSet<Sym> = a_funcs.union(b_funcs).copied().collect();
    all.extend(parent.keys().copied());
    let mut in_a = BTreeSet::new();
    let mut in_b = BTreeSet::new();
    for f in a_funcs {
        in_a.insert(find(&mut parent, *f));
    }
    for f in b_funcs {
        in_b.insert(find(&mut parent, *f));
    }
    all.into_iter()
        .filter(|f| {
            let r = find(&mut parent, *f);
            in_a.contains(&r) && in_b.contains(&r)
        })
        .collect()
}

/// Side classification of an instantiated clause.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Origin {
    APure,
    BPure,
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Source {
    Schema(usize),
    Congruence,
    /// One half of a split mixed clause.
    Split,
}

/// Clauses whose premises pair the arguments of the definition named in
/// the conclusion's left-hand side.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Pivot {
    pub f: Sym,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundHornClause {
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
    pub origin: Origin,
    pub source: Source,
    /// Constants of the definitions the instance was built from.
    pub defs: Vec<TermId>,
    pub pivot: Option<Pivot>,
}

impl GroundHornClause {
    pub fn display(&self, store: &TermStore) -> String {
        let ps: Vec<String> = self.premises.iter().map(|p| p.display(store)).collect();
        format!("(=> (and {}) {})", ps.join(" "), self.conclusion.display(store))
    }

    fn key(&self, store: &TermStore) -> String {
        let canon = |a: &Atom| Atom::new(store, a.rel, a.lhs, a.rhs).display(store);
        let ps: Vec<String> = self.premises.iter().map(canon).collect();
        format!("{}|{}", ps.join(","), canon(&self.conclusion))
    }

    pub fn constants(&self, store: &TermStore) -> BTreeSet<TermId> {
        let mut out = BTreeSet::new();
        for a in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            a.constants(store, &mut out);
        }
        out
    }
}

/// Origin from the ownership of the clause's constants; clauses over
/// shared constants only count as A-pure.
pub fn clause_origin(store: &TermStore, sig: &Signature, premises: &[Atom], conclusion: &Atom) -> Origin {
    let mut cs = BTreeSet::new();
    for a in premises.iter().chain(std::iter::once(conclusion)) {
        a.constants(store, &mut cs);
    }
    let has = |o: Ownership| cs.iter().any(|c| sig.owner(*c) == o);
    match (has(Ownership::ALocal), has(Ownership::BLocal)) {
        (true, true) => Origin::Mixed,
        (false, true) => Origin::BPure,
        _ => Origin::APure,
    }
}

/// Indices of the clauses per origin.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub a_pure: Vec<usize>,
    pub b_pure: Vec<usize>,
    pub mixed: Vec<usize>,
}

pub fn classify(store: &TermStore, sig: &Signature, clauses: &mut [GroundHornClause]) -> Partition {
    let mut p = Partition::default();
    for (i, c) in clauses.iter_mut().enumerate() {
        c.origin = clause_origin(store, sig, &c.premises, &c.conclusion);
        match c.origin {
            Origin::APure => p.a_pure.push(i),
            Origin::BPure => p.b_pure.push(i),
            Origin::Mixed => p.mixed.push(i),
        }
    }
    p
}

fn match_defs(
    store: &TermStore,
    templates: &[TermId],
    defs: &[Definition],
    binding: &mut HashMap<TermId, TermId>,
    chosen: &mut Vec<Definition>,
    out: &mut Vec<(HashMap<TermId, TermId>, Vec<Definition>)>,
) {
    let Some((&t, rest)) = templates.split_first() else {
        out.push((binding.clone(), chosen.clone()));
        return;
    };
    let f = store.head_sym(t);
    for d in defs {
        if store.head_sym(d.term) != f || store.args(d.term).len() != store.args(t).len() {
            continue;
        }
        let mut added = Vec::new();
        let mut ok = true;
        for (v, c) in store.args(t).iter().zip(store.args(d.term)) {
            match binding.get(v) {
                Some(b) if b != c => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    binding.insert(*v, *c);
                    added.push(*v);
                }
            }
        }
        if ok {
            binding.insert(t, d.constant);
            chosen.push(*d);
            match_defs(store, rest, defs, binding, chosen, out);
            chosen.pop();
            binding.remove(&t);
        }
        for v in added {
            binding.remove(&v);
        }
    }
}

/// All instances whose extension terms are defined in `defs`, with the
/// extension terms replaced by their definition constants.
pub fn instantiate(
    store: &mut TermStore,
    sig: &Signature,
    schemas: &[ClauseSchema],
    defs: &[&DefinitionSet],
) -> Vec<GroundHornClause> {
    let all: Vec<Definition> = defs.iter().flat_map(|d| d.entries.iter().copied()).collect();
    let monotone: BTreeSet<Sym> =
        schemas.iter().filter_map(|s| if let SchemaKind::Mon(f) = s.kind { Some(f) } else { None }).collect();
    let mut out = Vec::new();
    let mut keys = BTreeSet::new();
    for (si, s) in schemas.iter().enumerate() {
        // Splitting produces a monotonicity half, so a guarded clause only
        // gets a pivot when its head function is declared monotone.
        let pivot = (s.kind.has_pivot() && monotone.contains(&s.kind.head())).then_some(Pivot { f: s.kind.head() });
        let templates = s.extension_terms(store, sig);
        let mut matches = Vec::new();
        match_defs(store, &templates, &all, &mut HashMap::new(), &mut Vec::new(), &mut matches);
        for (binding, chosen) in matches {
            // Extension terms first, so whole templates map to constants.
            let premises: Vec<Atom> = s.premises.iter().map(|a| subst_atom(store, a, &binding)).collect();
            let conclusion = subst_atom(store, &s.conclusion, &binding);
            let c = GroundHornClause {
                origin: clause_origin(store, sig, &premises, &conclusion),
                premises,
                conclusion,
                source: Source::Schema(si),
                defs: chosen.iter().map(|d| d.constant).collect(),
                pivot,
            };
            if keys.insert(c.key(store)) {
                out.push(c);
            }
        }
    }
    out
}

fn subst_atom(store: &mut TermStore, a: &Atom, map: &HashMap<TermId, TermId>) -> Atom {
    Atom { rel: a.rel, lhs: store.substitute(a.lhs, map), rhs: store.substitute(a.rhs, map) }
}

/// Congruence instances for every unordered pair of definitions of the
/// same function.
pub fn congruence_instances(store: &TermStore, sig: &Signature, defs: &[&DefinitionSet]) -> Vec<GroundHornClause> {
    let all: Vec<Definition> = defs.iter().flat_map(|d| d.entries.iter().copied()).collect();
    let mut out = Vec::new();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if let Some(c) = congruence_pair(store, sig, &all[i], &all[j]) {
                out.push(c);
            }
        }
    }
    out
}

/// The congruence clause linking two definitions of the same function.
pub fn congruence_pair(store: &TermStore, sig: &Signature, p: &Definition, q: &Definition) -> Option<GroundHornClause> {
    let f = store.head_sym(p.term)?;
    if store.head_sym(q.term) != Some(f) || p == q {
        return None;
    }
    let premises: Vec<Atom> = store
        .args(p.term)
        .iter()
        .zip(store.args(q.term))
        .map(|(x, y)| Atom { rel: Rel::Eq, lhs: *x, rhs: *y })
        .collect();
    let conclusion = Atom { rel: Rel::Eq, lhs: p.constant, rhs: q.constant };
    Some(GroundHornClause {
        origin: clause_origin(store, sig, &premises, &conclusion),
        premises,
        conclusion,
        source: Source::Congruence,
        defs: vec![p.constant, q.constant],
        pivot: Some(Pivot { f }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TheoryId;
    use crate::preprocess::DefSide;

    fn sig_with(store: &mut TermStore, theory: TheoryId, fs: &[(&str, usize)]) -> Signature {
        let mut sig = Signature::new(store, theory);
        for (f, n) in fs {
            let s = store.sym(f);
            sig.extension_functions.insert(s, *n);
        }
        sig
    }

    #[test]
    fn nested_premise_is_not_flat() {
        let mut s = TermStore::new();
        let sig = sig_with(&mut s, TheoryId::Slat, &[("f", 1), ("g", 1)]);
        let f = s.sym("f");
        let g = s.sym("g");
        let mut schema = ClauseSchema::sgc(&mut s, f, vec![g]);
        let y = s.var("x");
        let fy = s.app(f, vec![y]);
        let ffy = s.app(f, vec![fy]);
        schema.premises[0].rhs = ffy;
        let errs = validate_schema(&s, &sig, &schema);
        assert!(errs.iter().any(|e| matches!(e, SchemaViolation::NotFlat(_))), "{:?}", errs);
    }

    #[test]
    fn standard_schemas_validate() {
        let mut s = TermStore::new();
        let sig = sig_with(&mut s, TheoryId::Slat, &[("f", 1), ("g", 1), ("h", 2)]);
        let [f, g, h] = ["f", "g", "h"].map(|n| s.sym(n));
        for schema in [ClauseSchema::sgc(&mut s, f, vec![g]), ClauseSchema::mon(&mut s, h, 2), ClauseSchema::leq(&mut s, f, g, 1)] {
            assert!(validate_schema(&s, &sig, &schema).is_empty(), "{}", schema.display(&s));
        }
    }

    #[test]
    fn sgc_instance_of_the_running_example() {
        let mut s = TermStore::new();
        let mut sig = sig_with(&mut s, TheoryId::Slat, &[("f", 1), ("g", 1)]);
        let [a, a1, b, b1] = ["a", "a1", "b", "b1"].map(|n| s.constant(n));
        sig.set_owner(a, Ownership::ALocal);
        sig.set_owner(a1, Ownership::ALocal);
        sig.set_owner(b, Ownership::BLocal);
        sig.set_owner(b1, Ownership::BLocal);
        let ga = s.app_named("g", vec![a]);
        let fb = s.app_named("f", vec![b]);
        let mut da = DefinitionSet::new(DefSide::A);
        da.push(a1, ga);
        let mut db = DefinitionSet::new(DefSide::B);
        db.push(b1, fb);
        let [f, g] = ["f", "g"].map(|n| s.sym(n));
        let schemas = [ClauseSchema::sgc(&mut s, f, vec![g])];
        let inst = instantiate(&mut s, &sig, &schemas, &[&da, &db]);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].display(&s), "(=> (and (leq b a1)) (leq b1 a))");
        assert_eq!(inst[0].origin, Origin::Mixed);
        let mon = [ClauseSchema::mon(&mut s, f, 1)];
        let inst = instantiate(&mut s, &sig, &mon, &[&da, &db]);
        assert_eq!(inst[0].display(&s), "(=> (and (leq b b)) (leq b1 b1))");
    }

    #[test]
    fn closure_joins_cooccurring_functions() {
        let mut s = TermStore::new();
        let sig = sig_with(&mut s, TheoryId::Slat, &[("f", 1), ("g", 1), ("h", 1)]);
        let [f, g, h] = ["f", "g", "h"].map(|n| s.sym(n));
        let schemas = [ClauseSchema::leq(&mut s, f, g, 1), ClauseSchema::mon(&mut s, f, 1)];
        let shared = shared_function_closure(&s, &sig, &schemas, &[f, h].into(), &[g].into());
        assert_eq!(shared, [f, g].into());
    }
}
