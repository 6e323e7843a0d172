//! Pure equality over constants via union-find.

use std::collections::{BTreeMap, HashMap};

use super::{
    check_separator, convex_check, no_separator, shared_candidates, trivial_separator, unsupported, Backend,
    BackendDescriptor, Entailer, Vocab,
};
use crate::error::Result;
use crate::kernel::{Atom, Literal, Rel, TermId, TermStore, TheoryId};

#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: HashMap<TermId, TermId>,
}

impl UnionFind {
    pub fn find(&mut self, t: TermId) -> TermId {
        let p = *self.parent.get(&t).unwrap_or(&t);
        if p == t {
            return t;
        }
        let r = self.find(p);
        self.parent.insert(t, r);
        r
    }

    pub fn union(&mut self, a: TermId, b: TermId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent.insert(hi, lo);
        true
    }

    pub fn same(&mut self, a: TermId, b: TermId) -> bool {
        self.find(a) == self.find(b)
    }
}

pub struct EqBackend;

struct EqEntailer {
    uf: UnionFind,
}

impl Entailer for EqEntailer {
    fn entails(&mut self, store: &mut TermStore, atom: &Atom) -> Result<bool> {
        if atom.rel != Rel::Eq {
            return Err(unsupported(store, atom));
        }
        Ok(self.uf.same(atom.lhs, atom.rhs))
    }
}

fn closure(store: &TermStore, facts: &[Atom]) -> Result<UnionFind> {
    let mut uf = UnionFind::default();
    for a in facts {
        if a.rel != Rel::Eq {
            return Err(unsupported(store, a));
        }
        uf.union(a.lhs, a.rhs);
    }
    Ok(uf)
}

impl Backend for EqBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor { theory: TheoryId::Eq, p: vec![Rel::Eq], strong_interpolating: false, convex: true }
    }

    fn check_sat(&self, store: &mut TermStore, lits: &[Literal]) -> Result<bool> {
        for l in lits {
            if l.atom.rel != Rel::Eq {
                return Err(unsupported(store, &l.atom));
            }
        }
        convex_check(self, store, lits)
    }

    fn entailer<'a>(&'a self, store: &mut TermStore, facts: &[Atom]) -> Result<Box<dyn Entailer + 'a>> {
        Ok(Box::new(EqEntailer { uf: closure(store, facts)? }))
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
        if atom.rel != Rel::Eq {
            return Err(unsupported(store, atom));
        }
        if let Some(t) = trivial_separator(self, store, vocab, x, y, atom, strong)? {
            return Ok(t);
        }
        for t in shared_candidates(store, vocab, &[x, y], &[]) {
            if check_separator(self, store, x, y, atom, t, strong)? {
                return Ok(t);
            }
        }
        Err(no_separator(store, atom))
    }

    fn project(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom]) -> Result<Vec<Atom>> {
        let mut uf = closure(store, facts)?;
        let terms = shared_candidates(store, vocab, &[facts], &[]);
        let mut classes: BTreeMap<TermId, Vec<TermId>> = BTreeMap::new();
        for t in terms {
            classes.entry(uf.find(t)).or_default().push(t);
        }
        let mut out = Vec::new();
        for members in classes.values() {
            for w in members.windows(2) {
                out.push(Atom::new(store, Rel::Eq, w[0], w[1]));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_separator() {
        let mut s = TermStore::new();
        let [a, b, c] = ["a", "b", "c"].map(|n| s.constant(n));
        let vocab = Vocab::new([c]);
        let x = [Atom::new(&s, Rel::Eq, a, c)];
        let y = [Atom::new(&s, Rel::Eq, c, b)];
        let goal = Atom { rel: Rel::Eq, lhs: a, rhs: b };
        assert_eq!(EqBackend.separating_term(&mut s, &vocab, &x, &y, &goal, true).unwrap(), c);
    }

    #[test]
    fn disequality_conflict() {
        let mut s = TermStore::new();
        let [c, d] = ["c", "d"].map(|n| s.constant(n));
        let e = Atom::new(&s, Rel::Eq, c, d);
        assert!(!EqBackend.check_sat(&mut s, &[Literal::pos(e), Literal::neg(e)]).unwrap());
        let l = Atom::new(&s, Rel::Leq, c, d);
        assert!(EqBackend.check_sat(&mut s, &[Literal::pos(l)]).is_err());
    }
}
