//! End-to-end pipeline: purify, instantiate, separate, interpolate in the
//! base theory and read the result back; plus verification and the
//! combination mode for disjoint extensions.

use std::collections::BTreeSet;
use std::time::Duration;

use crate::axioms::{
    congruence_instances, instantiate, shared_function_closure, validate_schema, ClauseSchema, GroundHornClause,
};
use crate::base::{make_backend, Backend, Vocab};
use crate::error::{Error, Result};
use crate::interp::{clause_interpolant, sat_with_rules, saturate, side_entails, side_refutes, ClauseSide, HornRule};
use crate::kernel::{
    Atom, Formula, GroundConjunction, Head, Literal, Ownership, Rel, Side, Signature, Sym, TermId, TermStore, TheoryId,
};
use crate::lattice::{meet_of, normalize};
use crate::oracle::{oracle_on, OracleConfig, OracleMode};
use crate::preprocess::{flatten_purify, is_fresh_constant, unpurify, DefinitionSet, FreshNames};
use crate::separation::{run_separation, shared_vocab, SeparationContext, SeparationOutcome};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub strong: bool,
    pub presat: bool,
    pub trace: bool,
    pub verify: bool,
}

/// A validated interpolation problem.
#[derive(Clone)]
pub struct Problem {
    pub store: TermStore,
    pub sig: Signature,
    pub schemas: Vec<ClauseSchema>,
    pub a: GroundConjunction,
    pub b: GroundConjunction,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub formula: Formula,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Sat,
    Unsat(Interpolant),
}

fn literal_functions(store: &TermStore, sig: &Signature, lits: &[Literal]) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    for l in lits {
        store.functions_of(l.atom.lhs, &mut out);
        store.functions_of(l.atom.rhs, &mut out);
    }
    out.retain(|f| sig.is_extension(*f));
    out
}

fn literal_constants(store: &TermStore, lits: &[Literal]) -> BTreeSet<TermId> {
    let mut out = BTreeSet::new();
    for l in lits {
        l.atom.constants(store, &mut out);
    }
    out
}

impl Problem {
    pub fn new(store: TermStore, sig: Signature, schemas: Vec<ClauseSchema>, a: Vec<Literal>, b: Vec<Literal>) -> Self {
        Problem {
            store,
            sig,
            schemas,
            a: GroundConjunction::from_lits(Side::A, a),
            b: GroundConjunction::from_lits(Side::B, b),
            options: Options::default(),
        }
    }

    pub fn theory(&self) -> TheoryId {
        self.sig.theory
    }

    /// Validates schemas and literals and assigns ownership tags:
    /// constants of both blocks and schema parameters are shared.
    pub fn finalize(&mut self) -> Result<()> {
        let store = &self.store;
        let mut errs = Vec::new();
        for s in &self.schemas {
            for e in validate_schema(store, &self.sig, s) {
                errs.push(e.to_string());
            }
        }
        if !errs.is_empty() {
            return Err(Error::Schema(errs.join("; ")));
        }
        for l in self.a.lits().iter().chain(self.b.lits()) {
            check_literal(store, &self.sig, l)?;
        }
        let ca = literal_constants(store, self.a.lits());
        let cb = literal_constants(store, self.b.lits());
        for &c in ca.union(&cb) {
            let o = match (ca.contains(&c), cb.contains(&c)) {
                (true, true) => Ownership::Shared,
                (true, false) => Ownership::ALocal,
                _ => Ownership::BLocal,
            };
            self.sig.set_owner(c, o);
        }
        for s in &self.schemas {
            for a in std::iter::once(&s.conclusion).chain(s.premises.iter()) {
                let mut cs = BTreeSet::new();
                a.constants(store, &mut cs);
                for c in cs {
                    self.sig.set_owner(c, Ownership::Shared);
                }
            }
        }
        let fa = literal_functions(store, &self.sig, self.a.lits());
        let fb = literal_functions(store, &self.sig, self.b.lits());
        let shared = shared_function_closure(store, &self.sig, &self.schemas, &fa, &fb);
        let exts: Vec<Sym> = self.sig.extension_functions.keys().copied().collect();
        for f in exts {
            let o = if shared.contains(&f) {
                Ownership::Shared
            } else if fa.contains(&f) {
                Ownership::ALocal
            } else if fb.contains(&f) {
                Ownership::BLocal
            } else {
                Ownership::Shared
            };
            self.sig.function_owner.insert(f, o);
        }
        Ok(())
    }

    pub fn backend(&self) -> Box<dyn Backend> {
        make_backend(self.sig.theory)
    }
}

/// Rejects relations and function symbols foreign to the theory.
pub fn check_literal(store: &TermStore, sig: &Signature, l: &Literal) -> Result<()> {
    let bad = || Error::UnsupportedLiteral(l.display(store));
    if !sig.theory.supports(l.atom.rel) {
        return Err(bad());
    }
    if sig.theory == TheoryId::Lra && !l.pos && l.atom.rel == crate::kernel::Rel::Eq {
        return Err(bad());
    }
    let mut fs = BTreeSet::new();
    store.functions_of(l.atom.lhs, &mut fs);
    store.functions_of(l.atom.rhs, &mut fs);
    if fs.iter().any(|f| !sig.is_extension(*f) && !sig.is_base_function(*f)) {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut seen = BTreeSet::new();
    store.subterms(l.atom.lhs, &mut terms, &mut seen);
    store.subterms(l.atom.rhs, &mut terms, &mut seen);
    for t in terms {
        if store.is_var(t) {
            return Err(Error::Invalid(format!("non-ground literal {}", l.display(store))));
        }
        if let Head::Num(q) = store.head(t) {
            let lattice_ok = sig.theory.is_lattice() && (q == &num_rational::BigRational::from_integer(0.into())
                || q == &num_rational::BigRational::from_integer(1.into()));
            if sig.theory != TheoryId::Lra && !lattice_ok {
                return Err(bad());
            }
        }
    }
    Ok(())
}

fn rules_of(cs: &[GroundHornClause]) -> Vec<HornRule> {
    cs.iter().map(|c| HornRule { premises: c.premises.clone(), conclusion: c.conclusion }).collect()
}

/// Base-level satisfiability of ground literals in the extension, through
/// purification and instantiation.
pub fn hierarchical_sat(
    store: &mut TermStore,
    sig: &Signature,
    schemas: &[ClauseSchema],
    backend: &dyn Backend,
    lits: &[Literal],
) -> Result<bool> {
    let mut sig = sig.clone();
    let mut fresh = FreshNames::default();
    let g = GroundConjunction::from_lits(Side::Joint, lits.iter().copied());
    let (base, defs) = flatten_purify(store, &mut sig, &mut fresh, &g);
    let mut clauses = instantiate(store, &sig, schemas, &[&defs]);
    clauses.extend(congruence_instances(store, &sig, &[&defs]));
    sat_with_rules(backend, store, base.lits(), &rules_of(&clauses))
}

/// Size of `K0 ∧ Con0`: schema instances plus congruence instances after
/// purifying both sides.
pub fn instance_count(p: &Problem) -> usize {
    let mut store = p.store.clone();
    let mut sig = p.sig.clone();
    let mut fresh = FreshNames::default();
    let (_, da) = flatten_purify(&mut store, &mut sig, &mut fresh, &p.a);
    let (_, db) = flatten_purify(&mut store, &mut sig, &mut fresh, &p.b);
    let k = instantiate(&mut store, &sig, &p.schemas, &[&da, &db]);
    k.len() + congruence_instances(&store, &sig, &[&da, &db]).len()
}

/// Drops literals implied by the others and normalizes lattice terms.
fn simplify(store: &mut TermStore, backend: &dyn Backend, f: Formula) -> Result<Formula> {
    let f = if backend.theory().is_lattice() {
        f.map_literals(&mut |l| {
            let lhs = normalize(store, l.atom.lhs);
            let rhs = normalize(store, l.atom.rhs);
            Formula::Lit(Literal { pos: l.pos, atom: Atom::new(store, l.atom.rel, lhs, rhs) })
        })
    } else {
        f
    };
    let f = if backend.theory().is_lattice() { merge_upper_bounds(store, f) } else { f };
    let Formula::And(parts) = &f else { return Ok(f) };
    let mut keep: Vec<Formula> = parts.clone();
    let mut i = 0;
    while i < keep.len() {
        if let Formula::Lit(l) = keep[i] {
            if l.pos {
                let others: Vec<Formula> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
                let side = ClauseSide { lits: literal_parts(&others), rules: Vec::new() };
                if others.iter().all(|o| matches!(o, Formula::Lit(_)))
                    && side_entails(backend, store, &side, &Formula::Lit(l))?
                {
                    keep.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    Ok(Formula::and(keep))
}

/// Rewrites `¬(s ≤ x) ∨ ¬(s ≤ y)` to `¬(s ≤ x ∧ y)` inside disjunctions.
fn merge_upper_bounds(store: &mut TermStore, f: Formula) -> Formula {
    match f {
        Formula::And(xs) => Formula::and(xs.into_iter().map(|x| merge_upper_bounds(store, x)).collect()),
        Formula::Or(xs) => {
            let mut bounds: Vec<(TermId, Vec<TermId>)> = Vec::new();
            let mut rest = Vec::new();
            for x in xs {
                match x {
                    Formula::Lit(l) if !l.pos && l.atom.rel == Rel::Leq => {
                        match bounds.iter_mut().find(|(lhs, _)| *lhs == l.atom.lhs) {
                            Some((_, rhs)) => rhs.push(l.atom.rhs),
                            None => bounds.push((l.atom.lhs, vec![l.atom.rhs])),
                        }
                    }
                    x => rest.push(merge_upper_bounds(store, x)),
                }
            }
            for (lhs, rhs) in bounds {
                let rhs = meet_of(store, &rhs);
                rest.push(Formula::Lit(Literal::neg(Atom::new(store, Rel::Leq, lhs, rhs))));
            }
            Formula::or(rest)
        }
        x => x,
    }
}

fn literal_parts(fs: &[Formula]) -> Vec<Literal> {
    fs.iter().filter_map(|f| if let Formula::Lit(l) = f { Some(*l) } else { None }).collect()
}

/// Runs the full procedure on a finalized problem.
pub fn hierarchical_interpolant(p: &mut Problem) -> Result<Answer> {
    let backend = p.backend();
    let backend = backend.as_ref();
    let mut trace = Vec::new();
    let mut fresh = FreshNames::default();
    let store = &mut p.store;
    let (a0, da) = flatten_purify(store, &mut p.sig, &mut fresh, &p.a);
    let (b0, db) = flatten_purify(store, &mut p.sig, &mut fresh, &p.b);
    for d in da.entries.iter().chain(db.entries.iter()) {
        trace.push(format!("define {} := {}", store.display(d.constant), store.display(d.term)));
    }
    let mut clauses = instantiate(store, &p.sig, &p.schemas, &[&da, &db]);
    clauses.extend(congruence_instances(store, &p.sig, &[&da, &db]));
    for c in &clauses {
        trace.push(format!("instance {:?} {}", c.origin, c.display(store)));
    }
    if p.options.presat {
        let joint: Vec<Literal> = a0.lits().iter().chain(b0.lits()).copied().collect();
        if sat_with_rules(backend, store, &joint, &rules_of(&clauses))? {
            return Ok(Answer::Sat);
        }
    }
    let ctx = SeparationContext {
        backend,
        a0: a0.lits(),
        b0: b0.lits(),
        defs: vec![&da, &db],
        strong: p.options.strong,
    };
    let outcome = run_separation(&ctx, store, &mut p.sig, &mut fresh, clauses)?;
    let (side_a, side_b, d_t) = match outcome {
        SeparationOutcome::Sat => return Ok(Answer::Sat),
        SeparationOutcome::BaseUnsat => {
            trace.push("base conjunction already inconsistent".into());
            (ClauseSide::from_lits(a0.lits()), ClauseSide::from_lits(b0.lits()), DefinitionSet::new(crate::preprocess::DefSide::T))
        }
        SeparationOutcome::Separated { a, b, d_t, trace: t } => {
            trace.extend(t);
            (a, b, d_t)
        }
    };
    let vocab = shared_vocab(&p.sig);
    let base = if p.options.strong {
        strong_interpolant(backend, store, &vocab, &side_a, &side_b)?
    } else {
        clause_interpolant(backend, store, &vocab, &side_a, &side_b)?
    };
    trace.push(format!("base interpolant {}", base.display(store)));
    let base = simplify(store, backend, base)?;
    let formula = unpurify(store, &base, &[&da, &d_t])?;
    let formula = simplify(store, backend, formula)?;
    let answer = Interpolant { formula, trace };
    if p.options.verify {
        if let Verification::Failed(fs) = verify_interpolant(p, &answer.formula)? {
            let shown: Vec<String> = fs.iter().map(|f| format!("check {}: {}", f.check, f.message)).collect();
            return Err(Error::VerificationFailed(shown.join("; ")));
        }
    }
    Ok(Answer::Unsat(answer))
}

/// Fires each side's rules on its own facts and interpolates the resulting
/// literals when they already clash, falling back to the sides with their
/// rules.
fn strong_interpolant(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    a: &ClauseSide,
    b: &ClauseSide,
) -> Result<Formula> {
    let closed = |side: &ClauseSide, store: &mut TermStore| -> Result<ClauseSide> {
        let mut lits = side.lits.clone();
        for f in saturate(backend, store, &side.lits, &side.rules)? {
            let l = Literal::pos(f);
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
        Ok(ClauseSide::from_lits(&lits))
    };
    let la = closed(a, store)?;
    let lb = closed(b, store)?;
    let found = match clause_interpolant(backend, store, vocab, &la, &lb) {
        Err(Error::NotUnsat) => clause_interpolant(backend, store, vocab, a, b)?,
        r => r?,
    };
    let merged = merge_upper_bounds(store, found.clone());
    if merged.is_literal_conjunction() {
        return Ok(found);
    }
    Ok(conjunctive_interpolant(backend, store, vocab, (a, &la), (b, &lb))?.unwrap_or(found))
}

/// Looks for an interpolant `K ∧ ¬N`, with `K` the shared projection of the
/// A side and `N` a shared atom refuted by A, then drops unneeded atoms of
/// `K`. Facts come from the closed sides, checks use the sides with rules.
fn conjunctive_interpolant(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    (a, a_closed): (&ClauseSide, &ClauseSide),
    (b, b_closed): (&ClauseSide, &ClauseSide),
) -> Result<Option<Formula>> {
    let pos = |xs: &[Literal]| -> Vec<Atom> { xs.iter().filter(|l| l.pos).map(|l| l.atom).collect() };
    let a_facts = pos(&a_closed.lits);
    let known = backend.project(store, vocab, &a_facts)?;
    let mut b_lits = b_closed.lits.clone();
    b_lits.extend(known.iter().map(|k| Literal::pos(*k)));
    let b_facts = saturate(backend, store, &b_lits, &b.rules)?;
    let shared_atom = |store: &TermStore, x: &Atom| vocab.is_shared(store, x.lhs) && vocab.is_shared(store, x.rhs);
    let mut refuted: Vec<Option<Atom>> = vec![None];
    for l in &a_closed.lits {
        if !l.pos && shared_atom(store, &l.atom) {
            refuted.push(Some(l.atom));
        }
    }
    let from_b = backend.project(store, vocab, &b_facts)?;
    let mut by_lhs: Vec<(TermId, Vec<TermId>)> = Vec::new();
    for m in &from_b {
        refuted.push(Some(*m));
        if m.rel == Rel::Leq {
            match by_lhs.iter_mut().find(|(lhs, _)| *lhs == m.lhs) {
                Some((_, rhs)) => rhs.push(m.rhs),
                None => by_lhs.push((m.lhs, vec![m.rhs])),
            }
        }
    }
    for (lhs, rhs) in by_lhs {
        if rhs.len() > 1 {
            let rhs = meet_of(store, &rhs);
            refuted.push(Some(Atom::new(store, Rel::Leq, lhs, rhs)));
        }
    }
    let mut terms: Vec<TermId> = Vec::new();
    for m in &from_b {
        for t in m.terms() {
            if !terms.contains(&t) {
                terms.push(t);
            }
        }
    }
    let mut b_entails = backend.entailer(store, &b_facts)?;
    for &u in &terms {
        for &v in &terms {
            let n = Atom::new(store, Rel::Leq, u, v);
            if u != v && !refuted.contains(&Some(n)) && b_entails.entails(store, &n)? {
                refuted.push(Some(n));
            }
        }
    }
    let form = |k: &[Atom], n: Option<Atom>| -> Formula {
        let mut parts: Vec<Formula> = k.iter().map(|x| Formula::Lit(Literal::pos(*x))).collect();
        parts.extend(n.map(|n| Formula::Lit(Literal::neg(n))));
        Formula::and(parts)
    };
    for n in refuted {
        if let Some(n) = n {
            if !side_entails(backend, store, a, &Formula::Lit(Literal::neg(n)))? {
                continue;
            }
        }
        let mut k = known.clone();
        if !side_refutes(backend, store, b, &form(&k, n))? {
            continue;
        }
        let mut i = 0;
        while i < k.len() {
            let mut fewer = k.clone();
            fewer.remove(i);
            if side_refutes(backend, store, b, &form(&fewer, n))? {
                k = fewer;
            } else {
                i += 1;
            }
        }
        return Ok(Some(form(&k, n)));
    }
    Ok(None)
}

/// One violated interpolant condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// 1 (vocabulary), 2 (`A ⊨ I`) or 3 (`B ∧ I ⊨ ⊥`).
    pub check: u8,
    pub message: String,
    /// Small countermodel, when the oracle finds one.
    pub witness: Option<String>,
}

/// Outcome of checking an interpolant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Ok,
    Failed(Vec<Failure>),
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok)
    }
}

fn witness(p: &Problem, lits: &[Literal]) -> Option<String> {
    let cfg = OracleConfig::new(OracleMode::FiniteModels, 3)
        .ok()?
        .with_timeout(Duration::from_secs(2))
        .with_node_budget(200_000);
    let report = oracle_on(&p.store, p.sig.theory, &p.sig.extension_functions, &p.schemas, lits, &cfg);
    report.model
}

/// Checks the vocabulary condition and both entailments in the extension,
/// reporting every violated condition.
pub fn verify_interpolant(p: &mut Problem, f: &Formula) -> Result<Verification> {
    let mut failures = Vec::new();
    {
        let store = &p.store;
        for c in f.constants(store) {
            if is_fresh_constant(store, c) || p.sig.owner(c) != Ownership::Shared {
                let message = format!("{} is not shared", store.display(c));
                failures.push(Failure { check: 1, message, witness: None });
            }
        }
        for g in f.functions(store) {
            let ok = if p.sig.is_extension(g) {
                p.sig.function_owner.get(&g) == Some(&Ownership::Shared)
            } else {
                p.sig.is_base_function(g)
            };
            if !ok {
                let message = format!("{} is not shared", store.name(g));
                failures.push(Failure { check: 1, message, witness: None });
            }
        }
    }
    let backend = make_backend(p.sig.theory);
    let checks = [(2u8, p.a.lits().to_vec(), f.negate(), "A"), (3u8, p.b.lits().to_vec(), f.clone(), "B")];
    for (check, side, g, name) in checks {
        for conj in g.dnf() {
            let mut lits = side.clone();
            lits.extend(conj.iter().copied());
            if hierarchical_sat(&mut p.store, &p.sig, &p.schemas, backend.as_ref(), &lits)? {
                let shown: Vec<String> = conj.iter().map(|l| l.display(&p.store)).collect();
                let message = format!("{} is consistent with {}", name, shown.join(" "));
                failures.push(Failure { check, message, witness: witness(p, &lits) });
                break;
            }
        }
    }
    Ok(if failures.is_empty() { Verification::Ok } else { Verification::Failed(failures) })
}

/// Splits the schemas between two literal sets with disjoint extension
/// signatures.
pub fn partition_schemas(p: &Problem) -> Result<(Vec<ClauseSchema>, Vec<ClauseSchema>)> {
    let store = &p.store;
    let f1 = literal_functions(store, &p.sig, p.a.lits());
    let f2 = literal_functions(store, &p.sig, p.b.lits());
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    let mut sig1 = f1.clone();
    let mut sig2 = f2.clone();
    for s in &p.schemas {
        let fs = s.functions(store, &p.sig);
        if fs.iter().any(|f| f1.contains(f)) || (!fs.iter().any(|f| f2.contains(f)) && s1.len() <= s2.len()) {
            sig1.extend(fs);
            s1.push(s.clone());
        } else {
            sig2.extend(fs);
            s2.push(s.clone());
        }
    }
    let overlap: Vec<String> = sig1.intersection(&sig2).map(|f| store.name(*f).to_string()).collect();
    if !overlap.is_empty() {
        return Err(Error::SignatureOverlap(overlap.join(", ")));
    }
    Ok((s1, s2))
}

/// Interpolant for `G1 ∧ G2` (the problem's A and B blocks) when each
/// block extends the base with its own functions.
pub fn combine_interpolant(p: &mut Problem) -> Result<Formula> {
    let (k1, k2) = partition_schemas(p)?;
    let backend = p.backend();
    let backend = backend.as_ref();
    let mut fresh = FreshNames::default();
    let store = &mut p.store;
    let (g1, d1) = flatten_purify(store, &mut p.sig, &mut fresh, &p.a);
    let (g2, d2) = flatten_purify(store, &mut p.sig, &mut fresh, &p.b);
    let side = |g: &GroundConjunction, d: &DefinitionSet, k: &[ClauseSchema], store: &mut TermStore| {
        let mut cs = instantiate(store, &p.sig, k, &[d]);
        cs.extend(congruence_instances(store, &p.sig, &[d]));
        ClauseSide { lits: g.lits().to_vec(), rules: rules_of(&cs) }
    };
    let s1 = side(&g1, &d1, &k1, store);
    let s2 = side(&g2, &d2, &k2, store);
    let vocab = shared_vocab(&p.sig);
    let base = clause_interpolant(backend, store, &vocab, &s1, &s2)?;
    let base = simplify(store, backend, base)?;
    let f = unpurify(store, &base, &[&d1])?;
    simplify(store, backend, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{parse_formula, parse_problem};

    const SGC: &str = "(theory slat)(ext f 1)(ext g 1)(axiom (sgc f g))(axiom (mon f))(axiom (mon g))
        (A (leq d (g a)) (leq a c))
        (B (leq b d) (not (leq (f b) c)))";

    fn solve(text: &str, strong: bool) -> (Problem, Answer) {
        let mut p = parse_problem(text).unwrap().problem;
        p.options.strong = strong;
        let ans = hierarchical_interpolant(&mut p).unwrap();
        (p, ans)
    }

    #[test]
    fn semi_galois_example() {
        for strong in [false, true] {
            let (p, ans) = solve(SGC, strong);
            let Answer::Unsat(i) = ans else { panic!("expected unsat") };
            assert_eq!(i.formula.display(&p.store), "(leq (f d) c)");
        }
    }

    #[test]
    fn satisfiable_without_the_adjunction() {
        let text = SGC.replace("(axiom (sgc f g))", "");
        let (_, ans) = solve(&text, false);
        assert_eq!(ans, Answer::Sat);
    }

    #[test]
    fn verify_reports_each_failed_check() {
        let mut p = parse_problem(SGC).unwrap().problem;
        let good = parse_formula(&mut p, "(leq (f d) c)").unwrap();
        assert!(verify_interpolant(&mut p, &good).unwrap().is_ok());

        let weak = parse_formula(&mut p, "(leq d c)").unwrap();
        let Verification::Failed(fs) = verify_interpolant(&mut p, &weak).unwrap() else { panic!() };
        let checks: Vec<u8> = fs.iter().map(|f| f.check).collect();
        assert_eq!(checks, vec![2, 3]);

        let local = parse_formula(&mut p, "(leq (f b) c)").unwrap();
        let Verification::Failed(fs) = verify_interpolant(&mut p, &local).unwrap() else { panic!() };
        assert_eq!(fs[0].check, 1);
    }

    #[test]
    fn verify_option_accepts_its_own_answer() {
        let mut p = parse_problem(SGC).unwrap().problem;
        p.options.verify = true;
        assert!(matches!(hierarchical_interpolant(&mut p).unwrap(), Answer::Unsat(_)));
    }

    #[test]
    fn combine_when_first_block_is_inconsistent() {
        let text = "(theory slat)(ext f 1)(ext g 1)(axiom (mon f))(axiom (mon g))
            (G1 (leq a (f c)) (not (leq a (f c))))
            (G2 (leq d (g c)))";
        let mut p = parse_problem(text).unwrap().problem;
        assert_eq!(combine_interpolant(&mut p).unwrap(), Formula::False);
    }

    #[test]
    fn combine_rejects_shared_extension() {
        let text = "(theory slat)(ext f 1)(axiom (mon f))
            (G1 (leq a (f c)))
            (G2 (not (leq a (f c))))";
        let mut p = parse_problem(text).unwrap().problem;
        assert!(matches!(combine_interpolant(&mut p), Err(Error::SignatureOverlap(_))));
    }

    #[test]
    fn instance_count_is_quadratic_for_one_function() {
        let text = "(theory slat)(ext f 1)(axiom (mon f))
            (A (leq a (f a)) (leq (f b) c))
            (B (leq c (f c)))";
        let p = parse_problem(text).unwrap().problem;
        let n = instance_count(&p);
        assert!(n > 0 && n <= 2 * 3 * 3, "{}", n);
    }
}
