//! Base-theory backends: convex satisfiability, atom entailment, separating
//! terms, shared projections and ground interpolation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::{Atom, Formula, Literal, Rel, TermId, TermStore, TheoryId};

pub mod eq;
pub mod lra;
pub mod poset;

/// Static facts about a backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackendDescriptor {
    pub theory: TheoryId,
    /// Relations for which separating terms are available.
    pub p: Vec<Rel>,
    pub strong_interpolating: bool,
    pub convex: bool,
}

/// The shared vocabulary: constants common to both sides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocab {
    pub shared: BTreeSet<TermId>,
}

impl Vocab {
    pub fn new(shared: impl IntoIterator<Item = TermId>) -> Self {
        Vocab { shared: shared.into_iter().collect() }
    }

    /// Every constant of `t` is shared.
    pub fn is_shared(&self, store: &TermStore, t: TermId) -> bool {
        let mut cs = BTreeSet::new();
        store.constants_of(t, &mut cs);
        cs.iter().all(|c| self.shared.contains(c))
    }

    pub fn atom_shared(&self, store: &TermStore, a: &Atom) -> bool {
        self.is_shared(store, a.lhs) && self.is_shared(store, a.rhs)
    }
}

/// Incremental entailment oracle over a fixed positive fact set.
pub trait Entailer {
    fn entails(&mut self, store: &mut TermStore, atom: &Atom) -> Result<bool>;
}

/// Contract every base theory implements.
pub trait Backend {
    fn descriptor(&self) -> BackendDescriptor;

    fn theory(&self) -> TheoryId {
        self.descriptor().theory
    }

    /// Atoms asserted by the literals when negative order literals are
    /// rewritten where the theory allows it; other negatives are dropped.
    fn positive_part(&self, store: &mut TermStore, lits: &[Literal]) -> Result<Vec<Atom>> {
        let _ = store;
        Ok(lits.iter().filter(|l| l.pos).map(|l| l.atom).collect())
    }

    /// `true` iff the conjunction is satisfiable.
    fn check_sat(&self, store: &mut TermStore, lits: &[Literal]) -> Result<bool>;

    fn entailer<'a>(&'a self, store: &mut TermStore, facts: &[Atom]) -> Result<Box<dyn Entailer + 'a>>;

    fn entails(&self, store: &mut TermStore, facts: &[Atom], atom: &Atom) -> Result<bool> {
        self.entailer(store, facts)?.entails(store, atom)
    }

    /// A term `t` over the shared vocabulary with `x ∧ y ⊨ a R t ∧ t R b`
    /// for `atom = a R b`; with `strong`, `x ⊨ a R t` and `y ⊨ t R b`.
    fn separating_term(
        &self,
        store: &mut TermStore,
        vocab: &Vocab,
        x: &[Atom],
        y: &[Atom],
        atom: &Atom,
        strong: bool,
    ) -> Result<TermId>;

    /// A finite set of shared atoms equivalent to the shared consequences
    /// of `facts`.
    fn project(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom]) -> Result<Vec<Atom>>;
}

/// Instantiates the backend for a theory.
pub fn make_backend(theory: TheoryId) -> Box<dyn Backend> {
    match theory {
        TheoryId::Eq => Box::new(eq::EqBackend),
        TheoryId::Poset => Box::new(poset::PosetBackend),
        TheoryId::Lra => Box::new(lra::LraBackend),
        t => Box::new(crate::lattice::LatticeBackend::new(t)),
    }
}

/// Ground interpolation through a trait object.
pub fn ground_interpolant(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    a: &[Literal],
    b: &[Literal],
) -> Result<Formula> {
    if backend.theory() == TheoryId::Lra {
        return lra::farkas_interpolant(store, vocab, a, b);
    }
    crate::interp::literal_interpolant(backend, store, vocab, a, b)
}

/// Convex satisfiability: the positive part is consistent and entails none
/// of the negated atoms.
pub(crate) fn convex_check(backend: &dyn Backend, store: &mut TermStore, lits: &[Literal]) -> Result<bool> {
    let pos: Vec<Atom> = lits.iter().filter(|l| l.pos).map(|l| l.atom).collect();
    let negs: Vec<Atom> = lits.iter().filter(|l| !l.pos).map(|l| l.atom).collect();
    if negs.is_empty() {
        return Ok(true);
    }
    let mut e = backend.entailer(store, &pos)?;
    for n in &negs {
        if e.entails(store, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shared terms occurring in the facts, sorted by printed name.
pub(crate) fn shared_candidates(store: &TermStore, vocab: &Vocab, facts: &[&[Atom]], extra: &[TermId]) -> Vec<TermId> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |t: TermId, out: &mut Vec<TermId>| {
        if seen.insert(t) && vocab.is_shared(store, t) {
            out.push(t);
        }
    };
    for fs in facts {
        for a in *fs {
            for t in a.terms() {
                push(t, &mut out);
            }
        }
    }
    for &t in extra {
        push(t, &mut out);
    }
    out.sort_by_key(|t| store.display(*t));
    out
}

/// Checks `x ∧ y ⊨ a R t ∧ t R b` (joint) or the side-wise version.
pub(crate) fn check_separator(
    backend: &dyn Backend,
    store: &mut TermStore,
    x: &[Atom],
    y: &[Atom],
    atom: &Atom,
    t: TermId,
    strong: bool,
) -> Result<bool> {
    let left = Atom::new(store, atom.rel, atom.lhs, t);
    let right = Atom::new(store, atom.rel, t, atom.rhs);
    if strong {
        Ok(backend.entails(store, x, &left)? && backend.entails(store, y, &right)?)
    } else {
        let joint: Vec<Atom> = x.iter().chain(y.iter()).copied().collect();
        let mut e = backend.entailer(store, &joint)?;
        Ok(e.entails(store, &left)? && e.entails(store, &right)?)
    }
}

/// Tries the endpoints of the atom themselves when they are shared.
pub(crate) fn trivial_separator(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    x: &[Atom],
    y: &[Atom],
    atom: &Atom,
    strong: bool,
) -> Result<Option<TermId>> {
    for t in [atom.lhs, atom.rhs] {
        if vocab.is_shared(store, t) && check_separator(backend, store, x, y, atom, t, strong)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

pub(crate) fn no_separator(store: &TermStore, atom: &Atom) -> Error {
    Error::NoSeparator(atom.display(store))
}

pub(crate) fn unsupported(store: &TermStore, a: &Atom) -> Error {
    Error::UnsupportedLiteral(a.display(store))
}
