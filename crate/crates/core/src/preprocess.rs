//! Flattening and purification of ground literals, and the inverse
//! substitution used to read interpolants back.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::kernel::{
    Atom, Formula, GroundConjunction, Literal, Ownership, Rel, Side, Signature, TermId, TermStore,
};

/// Which definition set an entry belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DefSide {
    A,
    B,
    T,
}

impl DefSide {
    pub fn of_side(side: Side) -> DefSide {
        match side {
            Side::B => DefSide::B,
            _ => DefSide::A,
        }
    }
}

/// Flat definition `term ≈ constant`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Definition {
    pub constant: TermId,
    pub term: TermId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitionSet {
    pub side: DefSide,
    pub entries: Vec<Definition>,
}

impl DefinitionSet {
    pub fn new(side: DefSide) -> Self {
        DefinitionSet { side, entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn constant_for(&self, term: TermId) -> Option<TermId> {
        self.entries.iter().find(|d| d.term == term).map(|d| d.constant)
    }

    pub fn term_for(&self, constant: TermId) -> Option<TermId> {
        self.entries.iter().find(|d| d.constant == constant).map(|d| d.term)
    }

    pub fn push(&mut self, constant: TermId, term: TermId) {
        self.entries.push(Definition { constant, term });
    }

    /// The definitions as equations `term ≈ constant`.
    pub fn atoms(&self, store: &TermStore) -> Vec<Atom> {
        self.entries.iter().map(|d| Atom::new(store, Rel::Eq, d.term, d.constant)).collect()
    }
}

/// Counters for `_t<k>` and `_s<k>` constants.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    next_t: usize,
    next_s: usize,
}

impl FreshNames {
    fn next(store: &mut TermStore, prefix: &str, counter: &mut usize) -> TermId {
        loop {
            *counter += 1;
            let name = format!("{}{}", prefix, counter);
            if store.lookup_sym(&name).is_none() {
                return store.constant(&name);
            }
        }
    }

    pub fn purification(&mut self, store: &mut TermStore) -> TermId {
        Self::next(store, "_t", &mut self.next_t)
    }

    pub fn separation(&mut self, store: &mut TermStore) -> TermId {
        Self::next(store, "_s", &mut self.next_s)
    }
}

/// `_t<k>` or `_s<k>`.
pub fn is_fresh_name(name: &str) -> bool {
    let rest = name.strip_prefix("_t").or_else(|| name.strip_prefix("_s"));
    matches!(rest, Some(r) if !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()))
}

pub fn is_fresh_constant(store: &TermStore, t: TermId) -> bool {
    store.is_const(t) && store.head_sym(t).is_some_and(|s| is_fresh_name(store.name(s)))
}

struct Purifier<'a> {
    sig: &'a mut Signature,
    fresh: &'a mut FreshNames,
    defs: DefinitionSet,
    extra: Vec<Literal>,
    owner: Ownership,
}

impl Purifier<'_> {
    fn term(&mut self, store: &mut TermStore, t: TermId) -> TermId {
        let args: Vec<TermId> = store.args(t).to_vec();
        if args.is_empty() {
            return t;
        }
        let f = store.head_sym(t).expect("applications have symbol heads");
        let mut flat: Vec<TermId> = args.iter().map(|a| self.term(store, *a)).collect();
        if !self.sig.is_extension(f) {
            return store.app(f, flat);
        }
        for a in flat.iter_mut() {
            if !store.is_const(*a) {
                let c = self.fresh.purification(store);
                self.sig.set_owner(c, self.owner);
                self.extra.push(Literal::pos(Atom::new(store, Rel::Eq, c, *a)));
                *a = c;
            }
        }
        let key = store.app(f, flat);
        if let Some(c) = self.defs.constant_for(key) {
            return c;
        }
        let c = self.fresh.purification(store);
        self.sig.set_owner(c, self.owner);
        self.defs.push(c, key);
        c
    }
}

/// Names every extension-headed subterm, innermost first. Returns the
/// base literals and the side's definitions; the fresh constants get the
/// side's ownership.
pub fn flatten_purify(
    store: &mut TermStore,
    sig: &mut Signature,
    fresh: &mut FreshNames,
    lits: &GroundConjunction,
) -> (GroundConjunction, DefinitionSet) {
    let side = lits.side;
    let mut p = Purifier {
        sig,
        fresh,
        defs: DefinitionSet::new(DefSide::of_side(side)),
        extra: Vec::new(),
        owner: Ownership::of_side(side),
    };
    let mut out = GroundConjunction::new(side);
    for l in lits.lits() {
        let lhs = p.term(store, l.atom.lhs);
        let rhs = p.term(store, l.atom.rhs);
        let atom = Atom::new(store, l.atom.rel, lhs, rhs);
        for e in p.extra.drain(..) {
            out.push(e);
        }
        out.push(Literal { pos: l.pos, atom });
    }
    (out, p.defs)
}

/// Replaces defined constants by their terms until none remain.
pub fn unpurify_term(store: &mut TermStore, t: TermId, defs: &[&DefinitionSet]) -> Result<TermId> {
    let mut map = HashMap::new();
    for d in defs {
        for e in &d.entries {
            map.insert(e.constant, e.term);
        }
    }
    let mut cur = t;
    for _ in 0..=map.len() {
        let next = store.substitute(cur, &map);
        if next == cur {
            break;
        }
        cur = next;
    }
    let mut cs = BTreeSet::new();
    store.constants_of(cur, &mut cs);
    if let Some(c) = cs.into_iter().find(|c| is_fresh_constant(store, *c)) {
        return Err(Error::UnknownFreshConstant(store.display(c)));
    }
    Ok(cur)
}

pub fn unpurify_atom(store: &mut TermStore, a: &Atom, defs: &[&DefinitionSet]) -> Result<Atom> {
    let lhs = unpurify_term(store, a.lhs, defs)?;
    let rhs = unpurify_term(store, a.rhs, defs)?;
    Ok(Atom::new(store, a.rel, lhs, rhs))
}

/// Substitutes definitions into every literal of the formula.
pub fn unpurify(store: &mut TermStore, f: &Formula, defs: &[&DefinitionSet]) -> Result<Formula> {
    let mut err = None;
    let out = f.map_literals(&mut |l| match unpurify_atom(store, &l.atom, defs) {
        Ok(atom) => Formula::Lit(Literal { pos: l.pos, atom }),
        Err(e) => {
            err.get_or_insert(e);
            Formula::True
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TheoryId;

    fn setup() -> (TermStore, Signature) {
        let mut s = TermStore::new();
        let mut sig = Signature::new(&mut s, TheoryId::Slat);
        for f in ["f", "g"] {
            let sym = s.sym(f);
            sig.extension_functions.insert(sym, 1);
        }
        (s, sig)
    }

    #[test]
    fn nested_terms_flatten_innermost_first() {
        let (mut s, mut sig) = setup();
        let [c, d] = ["c", "d"].map(|n| s.constant(n));
        let gd = s.app_named("g", vec![d]);
        let fgd = s.app_named("f", vec![gd]);
        let lits = GroundConjunction::from_lits(Side::A, [Literal::pos(Atom::new(&s, Rel::Eq, c, fgd))]);
        let mut fresh = FreshNames::default();
        let (base, defs) = flatten_purify(&mut s, &mut sig, &mut fresh, &lits);
        assert_eq!(defs.len(), 2);
        assert_eq!(s.display(defs.entries[0].term), "(g d)");
        assert_eq!(s.display(defs.entries[1].term), "(f _t1)");
        assert_eq!(base.lits()[0].display(&s), "(eq _t2 c)");
        let back = unpurify_atom(&mut s, &base.lits()[0].atom, &[&defs]).unwrap();
        assert_eq!(back, Atom::new(&s, Rel::Eq, c, fgd));
    }

    #[test]
    fn missing_definition_is_reported() {
        let (mut s, _) = setup();
        let c = s.constant("c");
        let t = s.constant("_s4");
        let f = Formula::Lit(Literal::pos(Atom::new(&s, Rel::Leq, t, c)));
        assert!(matches!(unpurify(&mut s, &f, &[]), Err(Error::UnknownFreshConstant(_))));
    }
}
