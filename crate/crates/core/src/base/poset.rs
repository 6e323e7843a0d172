//! Partial orders via reflexive-transitive closure of the `≤` graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{
    check_separator, convex_check, no_separator, shared_candidates, trivial_separator, unsupported, Backend,
    BackendDescriptor, Entailer, Vocab,
};
use crate::error::Result;
use crate::kernel::{Atom, Literal, Rel, TermId, TermStore, TheoryId};

pub struct PosetBackend;

/// Reachability over `≤` edges (equations give both directions).
#[derive(Clone, Debug, Default)]
pub struct OrderGraph {
    succ: BTreeMap<TermId, BTreeSet<TermId>>,
    reach: HashMap<TermId, BTreeSet<TermId>>,
}

impl OrderGraph {
    pub fn new(store: &TermStore, facts: &[Atom]) -> Result<Self> {
        let mut g = OrderGraph::default();
        for a in facts {
            match a.rel {
                Rel::Leq => g.edge(a.lhs, a.rhs),
                Rel::Eq => {
                    g.edge(a.lhs, a.rhs);
                    g.edge(a.rhs, a.lhs);
                }
                Rel::Lt => return Err(unsupported(store, a)),
            }
        }
        Ok(g)
    }

    fn edge(&mut self, a: TermId, b: TermId) {
        self.succ.entry(a).or_default().insert(b);
    }

    /// Everything above `a`, including `a`.
    pub fn above(&mut self, a: TermId) -> &BTreeSet<TermId> {
        if !self.reach.contains_key(&a) {
            let mut seen = BTreeSet::new();
            let mut stack = vec![a];
            while let Some(n) = stack.pop() {
                if seen.insert(n) {
                    if let Some(ss) = self.succ.get(&n) {
                        stack.extend(ss.iter().copied());
                    }
                }
            }
            self.reach.insert(a, seen);
        }
        &self.reach[&a]
    }

    pub fn leq(&mut self, a: TermId, b: TermId) -> bool {
        a == b || self.above(a).contains(&b)
    }

    pub fn nodes(&self) -> BTreeSet<TermId> {
        let mut out: BTreeSet<TermId> = self.succ.keys().copied().collect();
        for ss in self.succ.values() {
            out.extend(ss.iter().copied());
        }
        out
    }
}

struct PosetEntailer {
    g: OrderGraph,
}

impl Entailer for PosetEntailer {
    fn entails(&mut self, store: &mut TermStore, atom: &Atom) -> Result<bool> {
        match atom.rel {
            Rel::Leq => Ok(self.g.leq(atom.lhs, atom.rhs)),
            Rel::Eq => Ok(self.g.leq(atom.lhs, atom.rhs) && self.g.leq(atom.rhs, atom.lhs)),
            Rel::Lt => Err(unsupported(store, atom)),
        }
    }
}

impl Backend for PosetBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor {
            theory: TheoryId::Poset,
            p: vec![Rel::Leq, Rel::Eq],
            strong_interpolating: false,
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
        Ok(Box::new(PosetEntailer { g: OrderGraph::new(store, facts)? }))
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
        let cands = shared_candidates(store, vocab, &[x, y], &[]);
        for t in &cands {
            if check_separator(self, store, x, y, atom, *t, strong)? {
                return Ok(*t);
            }
        }
        Err(no_separator(store, atom))
    }

    fn project(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom]) -> Result<Vec<Atom>> {
        let mut g = OrderGraph::new(store, facts)?;
        let terms = shared_candidates(store, vocab, &[facts], &[]);
        let mut out = Vec::new();
        for &a in &terms {
            for &b in &terms {
                if a != b && g.leq(a, b) {
                    out.push(Atom::new(store, Rel::Leq, a, b));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitivity_conflict() {
        let mut s = TermStore::new();
        let [a, b, c] = ["a", "b", "c"].map(|n| s.constant(n));
        let lits = [
            Literal::pos(Atom::new(&s, Rel::Leq, a, b)),
            Literal::pos(Atom::new(&s, Rel::Leq, b, c)),
            Literal::neg(Atom::new(&s, Rel::Leq, a, c)),
        ];
        assert!(!PosetBackend.check_sat(&mut s, &lits).unwrap());
    }

    #[test]
    fn path_entailment() {
        let mut s = TermStore::new();
        let [b, d, a1] = ["b", "d", "a1"].map(|n| s.constant(n));
        let facts = [Atom::new(&s, Rel::Leq, b, d), Atom::new(&s, Rel::Leq, d, a1)];
        let goal1 = Atom::new(&s, Rel::Leq, b, a1);
        assert!(PosetBackend.entails(&mut s, &facts, &goal1).unwrap());
        let goal2 = Atom::new(&s, Rel::Eq, b, b);
        assert!(PosetBackend.entails(&mut s, &[], &goal2).unwrap());
        // c ≤ d does not give c ≈ d
        let facts = [Atom::new(&s, Rel::Leq, b, d)];
        let goal3 = Atom::new(&s, Rel::Eq, b, d);
        assert!(!PosetBackend.entails(&mut s, &facts, &goal3).unwrap());
    }
}
