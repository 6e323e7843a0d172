//! Semilattices, distributive lattices and Boolean algebras through the
//! propositional renaming encoding.

use std::collections::{BTreeSet, HashMap};

use crate::base::{
    check_separator, convex_check, no_separator, shared_candidates, trivial_separator, unsupported, Backend, BackendDescriptor,
    Entailer, Vocab,
};
use crate::error::{Error, Result};
use crate::kernel::{Atom, Literal, Rel, TermId, TermStore, TheoryId, COMPL, MEET};
use crate::prop::{
    eliminate, horn_saturate, ordered_resolution, prop_interpolant, solve, Clause, HornClosure, PForm, PLit, Part,
    Refutation,
};

pub mod encode;

pub use encode::{join_of, meet_of, normalize, rename_encode, RenamedCnf};

pub struct LatticeBackend {
    theory: TheoryId,
}

impl LatticeBackend {
    pub fn new(theory: TheoryId) -> Self {
        assert!(theory.is_lattice());
        LatticeBackend { theory }
    }
}

struct LatticeEntailer {
    cnf: RenamedCnf,
    horn: HashMap<(u32, usize), HornClosure>,
}

impl LatticeEntailer {
    fn leq(&mut self, store: &mut TermStore, s: TermId, t: TermId) -> Result<bool> {
        let vs = self.cnf.var(store, s)?;
        let vt = self.cnf.var(store, t)?;
        if vs == vt {
            return Ok(true);
        }
        if self.cnf.theory == TheoryId::Slat {
            let key = (vs, self.cnf.clauses.len());
            if !self.horn.contains_key(&key) {
                let mut cs = self.cnf.plain_clauses();
                cs.push(vec![PLit::pos(vs)]);
                self.horn.insert(key, horn_saturate(&cs)?);
            }
            let h = &self.horn[&key];
            Ok(h.conflict.is_some() || h.holds(vt))
        } else {
            let mut cs = self.cnf.plain_clauses();
            cs.push(vec![PLit::pos(vs)]);
            cs.push(vec![PLit::neg(vt)]);
            Ok(solve(&cs, self.cnf.num_vars()).is_none())
        }
    }
}

impl Entailer for LatticeEntailer {
    fn entails(&mut self, store: &mut TermStore, atom: &Atom) -> Result<bool> {
        match atom.rel {
            Rel::Leq => self.leq(store, atom.lhs, atom.rhs),
            Rel::Eq => Ok(self.leq(store, atom.lhs, atom.rhs)? && self.leq(store, atom.rhs, atom.lhs)?),
            Rel::Lt => Err(unsupported(store, atom)),
        }
    }
}

/// All shared subterms of the facts, sorted by printed form.
fn shared_subterms(store: &TermStore, vocab: &Vocab, facts: &[&[Atom]]) -> Vec<TermId> {
    let mut seen = BTreeSet::new();
    let mut all = Vec::new();
    for fs in facts {
        for a in *fs {
            for t in a.terms() {
                store.subterms(t, &mut all, &mut seen);
            }
        }
    }
    let mut out: Vec<TermId> = all.into_iter().filter(|t| vocab.is_shared(store, *t)).collect();
    out.sort_by_key(|t| store.display(*t));
    out
}

impl LatticeBackend {
    /// Drops meet components of a working separator while it still
    /// separates.
    fn shrink_meet(
        &self,
        store: &mut TermStore,
        x: &[Atom],
        y: &[Atom],
        atom: &Atom,
        t: TermId,
        strong: bool,
    ) -> Result<TermId> {
        if store.head_sym(t).map(|f| store.name(f) == MEET) != Some(true) {
            return Ok(t);
        }
        let mut parts = store.args(t).to_vec();
        parts.sort_by_key(|p| std::cmp::Reverse(store.display(*p).len()));
        let mut best = t;
        let mut i = 0;
        while i < parts.len() && parts.len() > 1 {
            let mut fewer = parts.clone();
            fewer.remove(i);
            let candidate = meet_of(store, &fewer);
            if check_separator(self, store, x, y, atom, candidate, strong)? {
                parts = fewer;
                best = candidate;
            } else {
                i += 1;
            }
        }
        Ok(best)
    }

    /// Meet of the shared subterms above `a` in `facts`.
    fn meet_separator(
        &self,
        store: &mut TermStore,
        vocab: &Vocab,
        facts: &[Atom],
        all: &[&[Atom]],
        a: TermId,
    ) -> Result<Option<TermId>> {
        let cands = shared_subterms(store, vocab, all);
        let mut e = self.entailer(store, facts)?;
        let mut above = Vec::new();
        for c in cands {
            let goal = Atom { rel: Rel::Leq, lhs: a, rhs: c };
            if e.entails(store, &goal)? {
                above.push(c);
            }
        }
        if above.is_empty() {
            return Ok(None);
        }
        Ok(Some(meet_of(store, &above)))
    }

    /// Meet of the positive shared clauses implied by `facts ∧ a`.
    fn projected_separator(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom], a: TermId) -> Result<TermId> {
        let mut cnf = rename_encode(store, self.theory, facts)?;
        let va = cnf.var(store, a)?;
        let mut cs = cnf.plain_clauses();
        cs.push(vec![PLit::pos(va)]);
        let local: Vec<u32> =
            (0..cnf.num_vars() as u32).filter(|v| !vocab.is_shared(store, cnf.term(*v))).collect();
        let proj = eliminate(cs, &local);
        let mut joins = Vec::new();
        for c in proj.iter().filter(|c| c.iter().all(|l| l.is_pos())) {
            let ts: Vec<TermId> = c.iter().map(|l| cnf.term(l.var())).collect();
            joins.push(join_of(store, &ts));
        }
        Ok(meet_of(store, &joins))
    }

    /// Back-translated propositional interpolant of `x ∧ a` against `y ∧ ¬b`.
    fn boolean_separator(&self, store: &mut TermStore, x: &[Atom], y: &[Atom], atom: &Atom) -> Result<Option<TermId>> {
        let mut cnf = RenamedCnf::new(self.theory);
        cnf.part = Part::A;
        for f in x {
            cnf.assert_atom(store, f)?;
        }
        let va = cnf.var(store, atom.lhs)?;
        cnf.clauses.push((vec![PLit::pos(va)], Part::A));
        cnf.part = Part::B;
        for f in y {
            cnf.assert_atom(store, f)?;
        }
        let vb = cnf.var(store, atom.rhs)?;
        cnf.clauses.push((vec![PLit::neg(vb)], Part::B));
        let Refutation::Unsat(proof) = ordered_resolution(&cnf.clauses, cnf.num_vars(), &|v| v) else {
            return Ok(None);
        };
        let i = prop_interpolant(&proof)?;
        Ok(Some(term_of_pform(store, &cnf, &i)))
    }
}

/// Reads a propositional formula over renaming variables as a term.
pub fn term_of_pform(store: &mut TermStore, cnf: &RenamedCnf, f: &PForm) -> TermId {
    match f {
        PForm::True => store.int(1),
        PForm::False => store.int(0),
        PForm::Lit(l) => {
            let t = cnf.term(l.var());
            if l.is_pos() {
                t
            } else {
                store.app_named(COMPL, vec![t])
            }
        }
        PForm::And(xs) => {
            let ts: Vec<TermId> = xs.iter().map(|x| term_of_pform(store, cnf, x)).collect();
            meet_of(store, &ts)
        }
        PForm::Or(xs) => {
            let ts: Vec<TermId> = xs.iter().map(|x| term_of_pform(store, cnf, x)).collect();
            join_of(store, &ts)
        }
    }
}

/// Reads a projected clause `¬x1 ∨ .. ∨ y1 ∨ ..` as `meet(x) ≤ join(y)`.
pub fn clause_atom(store: &mut TermStore, cnf: &RenamedCnf, c: &Clause) -> Atom {
    let neg: Vec<TermId> = c.iter().filter(|l| !l.is_pos()).map(|l| cnf.term(l.var())).collect();
    let pos: Vec<TermId> = c.iter().filter(|l| l.is_pos()).map(|l| cnf.term(l.var())).collect();
    let lhs = meet_of(store, &neg);
    let rhs = join_of(store, &pos);
    Atom::new(store, Rel::Leq, lhs, rhs)
}

impl Backend for LatticeBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor {
            theory: self.theory,
            p: vec![Rel::Eq, Rel::Leq],
            strong_interpolating: true,
            convex: true,
        }
    }

    fn check_sat(&self, store: &mut TermStore, lits: &[Literal]) -> Result<bool> {
        for l in lits {
            if l.atom.rel == Rel::Lt {
                return Err(unsupported(store, &l.atom));
            }
        }
        convex_check(self, store, lits)
    }

    fn entailer<'a>(&'a self, store: &mut TermStore, facts: &[Atom]) -> Result<Box<dyn Entailer + 'a>> {
        Ok(Box::new(LatticeEntailer { cnf: rename_encode(store, self.theory, facts)?, horn: HashMap::new() }))
    }

    fn separating_term(
        &self,
        store: &mut TermStore,
        vocab: &Vocab,
        x: &[Atom],
        y: &[Atom],
        atom: &Atom,
        strong: bool,
    ) -> Result<TermId> {
        if atom.rel == Rel::Lt {
            return Err(unsupported(store, atom));
        }
        if let Some(t) = trivial_separator(self, store, vocab, x, y, atom, strong)? {
            return Ok(t);
        }
        let joint: Vec<Atom> = x.iter().chain(y.iter()).copied().collect();
        let mut tries: Vec<(Option<TermId>, bool)> = Vec::new();
        match self.theory {
            TheoryId::Slat => {
                let t = self.meet_separator(store, vocab, x, &[x, y], atom.lhs)?;
                tries.push((t, true));
                if !strong {
                    let t = self.meet_separator(store, vocab, &joint, &[x, y], atom.lhs)?;
                    tries.push((t, false));
                }
            }
            TheoryId::Dlat => {
                let t = self.projected_separator(store, vocab, x, atom.lhs)?;
                tries.push((Some(t), true));
                if !strong {
                    let t = self.projected_separator(store, vocab, &joint, atom.lhs)?;
                    tries.push((Some(t), false));
                }
            }
            _ => {
                let goal = Atom { rel: Rel::Leq, lhs: atom.lhs, rhs: atom.rhs };
                let t = self.boolean_separator(store, x, y, &goal)?;
                tries.push((t, true));
            }
        }
        for (t, side_wise) in tries {
            let Some(t) = t else { continue };
            let strong = strong && side_wise;
            if check_separator(self, store, x, y, atom, t, strong)? {
                return self.shrink_meet(store, x, y, atom, t, strong);
            }
        }
        for t in shared_candidates(store, vocab, &[x, y], &[]) {
            if check_separator(self, store, x, y, atom, t, strong)? {
                return Ok(t);
            }
        }
        Err(no_separator(store, atom))
    }

    fn project(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom]) -> Result<Vec<Atom>> {
        let cnf = rename_encode(store, self.theory, facts)?;
        let local: Vec<u32> =
            (0..cnf.num_vars() as u32).filter(|v| !vocab.is_shared(store, cnf.term(*v))).collect();
        let proj = eliminate(cnf.plain_clauses(), &local);
        let mut out = Vec::new();
        let mut valid = self.entailer(store, &[])?;
        for c in &proj {
            let a = clause_atom(store, &cnf, c);
            if self.theory == TheoryId::Slat && store.display(a.rhs).starts_with("(join") {
                return Err(Error::NotHorn);
            }
            if !valid.entails(store, &a)? && !out.contains(&a) {
                out.push(a);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leq(s: &TermStore, a: TermId, b: TermId) -> Atom {
        Atom::new(s, Rel::Leq, a, b)
    }

    #[test]
    fn slat_meet_separator() {
        let mut s = TermStore::new();
        let [a, b, c1, c2] = ["a", "b", "c1", "c2"].map(|n| s.constant(n));
        let m = meet_of(&mut s, &[c1, c2]);
        let x = [leq(&s, a, c1), leq(&s, a, c2)];
        let y = [Atom::new(&s, Rel::Eq, b, m)];
        let vocab = Vocab::new([c1, c2]);
        let be = LatticeBackend::new(TheoryId::Slat);
        let goal1 = leq(&s, a, b);
        let t = be.separating_term(&mut s, &vocab, &x, &y, &goal1, true).unwrap();
        assert_eq!(s.display(t), "(meet c1 c2)");
    }

    #[test]
    fn dlat_join_separator() {
        let mut s = TermStore::new();
        let [a, b, c1, c2] = ["a", "b", "c1", "c2"].map(|n| s.constant(n));
        let j = join_of(&mut s, &[c1, c2]);
        let x = [leq(&s, a, j)];
        let y = [leq(&s, c1, b), leq(&s, c2, b)];
        let vocab = Vocab::new([c1, c2]);
        let be = LatticeBackend::new(TheoryId::Dlat);
        let goal2 = leq(&s, a, b);
        let t = be.separating_term(&mut s, &vocab, &x, &y, &goal2, true).unwrap();
        assert_eq!(s.display(t), "(join c1 c2)");
    }

    #[test]
    fn dlat_meet_of_joins() {
        let mut s = TermStore::new();
        let [a, b, c1, c2, c3] = ["a", "b", "c1", "c2", "c3"].map(|n| s.constant(n));
        let j = join_of(&mut s, &[c2, c3]);
        let m = meet_of(&mut s, &[c1, j]);
        let x = [leq(&s, a, c1), leq(&s, a, j)];
        let y = [leq(&s, m, b)];
        let vocab = Vocab::new([c1, c2, c3]);
        let be = LatticeBackend::new(TheoryId::Dlat);
        let goal3 = leq(&s, a, b);
        let t = be.separating_term(&mut s, &vocab, &x, &y, &goal3, true).unwrap();
        assert_eq!(t, m);
    }

    #[test]
    fn bool_separator_via_interpolant() {
        let mut s = TermStore::new();
        let [a, b, c] = ["a", "b", "c"].map(|n| s.constant(n));
        let nc = s.app_named(COMPL, vec![c]);
        let x = [leq(&s, a, c)];
        let y = [leq(&s, c, b)];
        let _ = nc;
        let vocab = Vocab::new([c]);
        let be = LatticeBackend::new(TheoryId::Bool);
        let goal4 = leq(&s, a, b);
        let t = be.separating_term(&mut s, &vocab, &x, &y, &goal4, true).unwrap();
        let goal5 = leq(&s, a, t);
        assert!(be.entails(&mut s, &x, &goal5).unwrap());
        let goal6 = leq(&s, t, b);
        assert!(be.entails(&mut s, &y, &goal6).unwrap());
    }
}
