//! Structure-preserving propositional renaming of lattice terms.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Atom, Head, Rel, TermId, TermStore, TheoryId, COMPL, JOIN, MEET};
use crate::prop::{Clause, PLit, Part};

/// Flattens, sorts and deduplicates meets and joins.
pub fn normalize(store: &mut TermStore, t: TermId) -> TermId {
    let head = store.head(t).clone();
    let args: Vec<TermId> = store.args(t).to_vec();
    if args.is_empty() {
        return t;
    }
    let args: Vec<TermId> = args.into_iter().map(|a| normalize(store, a)).collect();
    let Head::Sym(f) = head else { return t };
    let name = store.name(f).to_string();
    if name == MEET || name == JOIN {
        let mut flat = Vec::new();
        for a in args {
            if store.head_sym(a) == Some(f) && !store.args(a).is_empty() {
                flat.extend(store.args(a).iter().copied());
            } else {
                flat.push(a);
            }
        }
        flat.sort_by(|x, y| store.cmp_terms(*x, *y));
        flat.dedup();
        if flat.len() == 1 {
            return flat[0];
        }
        store.app(f, flat)
    } else {
        store.app(f, args)
    }
}

/// Normalized meet of `parts`; `top` when empty.
pub fn meet_of(store: &mut TermStore, parts: &[TermId]) -> TermId {
    match parts.len() {
        0 => store.int(1),
        1 => normalize(store, parts[0]),
        _ => {
            let t = store.app_named(MEET, parts.to_vec());
            normalize(store, t)
        }
    }
}

/// Normalized join of `parts`; `bottom` when empty.
pub fn join_of(store: &mut TermStore, parts: &[TermId]) -> TermId {
    match parts.len() {
        0 => store.int(0),
        1 => normalize(store, parts[0]),
        _ => {
            let t = store.app_named(JOIN, parts.to_vec());
            normalize(store, t)
        }
    }
}

/// Renamed clause set: one variable per subterm.
#[derive(Clone, Debug)]
pub struct RenamedCnf {
    pub theory: TheoryId,
    pub var_of: HashMap<TermId, u32>,
    pub terms: Vec<TermId>,
    /// Clauses with their partition label.
    pub clauses: Vec<(Clause, Part)>,
    /// Label given to renaming clauses created from now on.
    pub part: Part,
}

impl RenamedCnf {
    pub fn new(theory: TheoryId) -> Self {
        RenamedCnf { theory, var_of: HashMap::new(), terms: Vec::new(), clauses: Vec::new(), part: Part::A }
    }

    pub fn num_vars(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, v: u32) -> TermId {
        self.terms[v as usize]
    }

    pub fn plain_clauses(&self) -> Vec<Clause> {
        self.clauses.iter().map(|(c, _)| c.clone()).collect()
    }

    fn push(&mut self, c: Clause) {
        self.clauses.push((c, self.part));
    }

    /// Variable for a normalized term, adding its renaming clauses.
    pub fn var(&mut self, store: &mut TermStore, t: TermId) -> Result<u32> {
        let t = normalize(store, t);
        self.var_norm(store, t)
    }

    fn var_norm(&mut self, store: &mut TermStore, t: TermId) -> Result<u32> {
        if let Some(&v) = self.var_of.get(&t) {
            return Ok(v);
        }
        let head = store.head(t).clone();
        let args: Vec<TermId> = store.args(t).to_vec();
        let mut arg_vars = Vec::new();
        let op = match &head {
            Head::Sym(f) if !args.is_empty() => {
                let name = store.name(*f).to_string();
                if name == MEET || name == JOIN || name == COMPL {
                    let allowed = match self.theory {
                        TheoryId::Slat => name == MEET,
                        TheoryId::Dlat => name != COMPL,
                        _ => true,
                    };
                    if !allowed {
                        return Err(Error::UnsupportedConnective(format!(
                            "{} in {}",
                            name,
                            self.theory.keyword()
                        )));
                    }
                    for &a in &args {
                        arg_vars.push(self.var_norm(store, a)?);
                    }
                    Some(name)
                } else {
                    None
                }
            }
            _ => None,
        };
        let v = self.terms.len() as u32;
        self.terms.push(t);
        self.var_of.insert(t, v);
        match op.as_deref() {
            Some(MEET) => {
                for &a in &arg_vars {
                    self.push(vec![PLit::neg(v), PLit::pos(a)]);
                }
                let mut c = vec![PLit::pos(v)];
                c.extend(arg_vars.iter().map(|&a| PLit::neg(a)));
                self.push(c);
            }
            Some(JOIN) => {
                for &a in &arg_vars {
                    self.push(vec![PLit::neg(a), PLit::pos(v)]);
                }
                let mut c = vec![PLit::neg(v)];
                c.extend(arg_vars.iter().map(|&a| PLit::pos(a)));
                self.push(c);
            }
            Some(_) => {
                if arg_vars.len() != 1 {
                    return Err(Error::UnsupportedConnective(format!("{} expects one argument", COMPL)));
                }
                let a = arg_vars[0];
                self.push(vec![PLit::pos(v), PLit::pos(a)]);
                self.push(vec![PLit::neg(v), PLit::neg(a)]);
            }
            None => {
                if let Head::Num(k) = &head {
                    if k.is_zero() {
                        self.push(vec![PLit::neg(v)]);
                    } else if k.is_one() {
                        self.push(vec![PLit::pos(v)]);
                    } else {
                        return Err(Error::UnsupportedLiteral(format!(
                            "numeral {} in a lattice",
                            store.display(t)
                        )));
                    }
                }
            }
        }
        Ok(v)
    }

    /// Clauses asserting the atom. Order atoms go through `s ∧ t ≈ s`.
    pub fn atom_clauses(&mut self, store: &mut TermStore, a: &Atom) -> Result<Vec<Clause>> {
        match a.rel {
            Rel::Eq => {
                let s = self.var(store, a.lhs)?;
                let t = self.var(store, a.rhs)?;
                Ok(iff(s, t))
            }
            Rel::Leq => {
                let m = meet_of(store, &[a.lhs, a.rhs]);
                let mv = self.var(store, m)?;
                let s = self.var(store, a.lhs)?;
                Ok(iff(mv, s))
            }
            Rel::Lt => Err(Error::UnsupportedLiteral(a.display(store))),
        }
    }

    /// Adds the atom's clauses under the current label.
    pub fn assert_atom(&mut self, store: &mut TermStore, a: &Atom) -> Result<()> {
        for c in self.atom_clauses(store, a)? {
            self.push(c);
        }
        Ok(())
    }
}

fn iff(a: u32, b: u32) -> Vec<Clause> {
    if a == b {
        return Vec::new();
    }
    vec![vec![PLit::neg(a), PLit::pos(b)], vec![PLit::neg(b), PLit::pos(a)]]
}

/// Encodes the atoms into a fresh clause set.
pub fn rename_encode(store: &mut TermStore, theory: TheoryId, atoms: &[Atom]) -> Result<RenamedCnf> {
    let mut cnf = RenamedCnf::new(theory);
    for a in atoms {
        cnf.assert_atom(store, a)?;
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_atom_encoding() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let e = s.constant("e");
        let atom = Atom::new(&s, Rel::Leq, a, e);
        let cnf = rename_encode(&mut s, TheoryId::Slat, &[atom]).unwrap();
        let m = meet_of(&mut s, &[a, e]);
        assert!(cnf.var_of.contains_key(&m));
        // 3 renaming clauses for the meet, 2 for the equation
        assert_eq!(cnf.clauses.len(), 5);
    }

    #[test]
    fn aci_normalization_is_idempotent() {
        let mut s = TermStore::new();
        let [a, b, c] = ["a", "b", "c"].map(|n| s.constant(n));
        let inner = s.app_named(MEET, vec![c, a]);
        let t = s.app_named(MEET, vec![b, inner, a]);
        let n1 = normalize(&mut s, t);
        assert_eq!(s.display(n1), "(meet a b c)");
        assert_eq!(normalize(&mut s, n1), n1);
    }

    #[test]
    fn join_rejected_in_slat() {
        let mut s = TermStore::new();
        let [a, b] = ["a", "b"].map(|n| s.constant(n));
        let j = s.app_named(JOIN, vec![a, b]);
        let atom = Atom::new(&s, Rel::Leq, j, a);
        assert!(matches!(
            rename_encode(&mut s, TheoryId::Slat, &[atom]),
            Err(Error::UnsupportedConnective(_))
        ));
    }
}
