//! Ground interpolation over sides made of literals and Horn rules.
//!
//! Each side is saturated under its rules, projected onto the shared
//! vocabulary and the projections are exchanged until one side becomes
//! inconsistent. The exchanged atoms assemble into a nested interpolant
//! `K1 ∧ (M1 → (K2 ∧ (M2 → ...)))`.

use std::collections::BTreeMap;

use crate::base::lra::{farkas_interpolant, solve_literals};
use crate::base::{Backend, Vocab};
use crate::error::{Error, Result};
use crate::kernel::{Atom, Formula, Literal, Rel, TermId, TermStore, TheoryId};
use crate::linear::{linearize, FmResult, Q};

const MAX_ROUNDS: usize = 64;
const MINIMIZE_LIMIT: usize = 48;

/// Ground Horn clause `premises → conclusion` over the base signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornRule {
    pub premises: Vec<Atom>,
    pub conclusion: Atom,
}

/// One side of an interpolation problem.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseSide {
    pub lits: Vec<Literal>,
    pub rules: Vec<HornRule>,
}

impl ClauseSide {
    pub fn from_lits(lits: &[Literal]) -> Self {
        ClauseSide { lits: lits.to_vec(), rules: Vec::new() }
    }
}

/// Positive facts of `lits` closed under the rules whose premises are
/// entailed.
pub fn saturate(backend: &dyn Backend, store: &mut TermStore, lits: &[Literal], rules: &[HornRule]) -> Result<Vec<Atom>> {
    let mut facts = backend.positive_part(store, lits)?;
    let mut fired = vec![false; rules.len()];
    loop {
        let mut progress = false;
        let mut e = backend.entailer(store, &facts)?;
        let mut new = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            if fired[i] {
                continue;
            }
            let mut all = true;
            for p in &r.premises {
                if !e.entails(store, p)? {
                    all = false;
                    break;
                }
            }
            if all {
                fired[i] = true;
                progress = true;
                new.push(r.conclusion);
            }
        }
        drop(e);
        for a in new {
            if !facts.contains(&a) {
                facts.push(a);
            }
        }
        if !progress {
            return Ok(facts);
        }
    }
}

/// Satisfiability of literals together with Horn rules. Convex theories
/// are decided by saturation; LRA additionally branches on rules violated
/// by the Fourier-Motzkin sample point.
pub fn sat_with_rules(backend: &dyn Backend, store: &mut TermStore, lits: &[Literal], rules: &[HornRule]) -> Result<bool> {
    let lra = backend.theory() == TheoryId::Lra;
    if lra {
        if let Some(i) = lits.iter().position(|l| !l.pos && l.atom.rel == Rel::Eq) {
            let a = lits[i].atom;
            for (lhs, rhs) in [(a.lhs, a.rhs), (a.rhs, a.lhs)] {
                let mut next = lits.to_vec();
                next[i] = Literal::pos(Atom::new(store, Rel::Lt, lhs, rhs));
                if sat_with_rules(backend, store, &next, rules)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
    }
    let facts = saturate(backend, store, lits, rules)?;
    let mut all: Vec<Literal> = lits.to_vec();
    all.extend(facts.iter().map(|a| Literal::pos(*a)));
    if !backend.check_sat(store, &all)? {
        return Ok(false);
    }
    if !lra {
        return Ok(true);
    }
    let (res, _) = solve_literals(store, &all)?;
    let FmResult::Sat(point) = res else { return Ok(false) };
    for r in rules {
        let mut holds = true;
        for p in &r.premises {
            if !atom_holds(store, p, &point)? {
                holds = false;
                break;
            }
        }
        if !holds || atom_holds(store, &r.conclusion, &point)? {
            continue;
        }
        let mut branches: Vec<Literal> = r.premises.iter().map(|p| Literal::neg(*p)).collect();
        branches.push(Literal::pos(r.conclusion));
        for b in branches {
            let mut next = lits.to_vec();
            next.push(b);
            if sat_with_rules(backend, store, &next, rules)? {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    Ok(true)
}

fn atom_holds(store: &TermStore, a: &Atom, point: &BTreeMap<TermId, Q>) -> Result<bool> {
    let l = linearize(store, a.lhs)?;
    let r = linearize(store, a.rhs)?;
    let (lv, rv) = (eval(&l, point), eval(&r, point));
    Ok(match a.rel {
        Rel::Eq => lv == rv,
        Rel::Leq => lv <= rv,
        Rel::Lt => lv < rv,
    })
}

fn eval(e: &crate::linear::LinExpr, point: &BTreeMap<TermId, Q>) -> Q {
    let mut v = e.constant.clone();
    for (x, c) in &e.coeffs {
        if let Some(p) = point.get(x) {
            v += c * p;
        }
    }
    v
}

/// `side ∧ extra` is unsatisfiable.
pub fn side_unsat(backend: &dyn Backend, store: &mut TermStore, side: &ClauseSide, extra: &[Literal]) -> Result<bool> {
    let mut lits = side.lits.clone();
    lits.extend_from_slice(extra);
    Ok(!sat_with_rules(backend, store, &lits, &side.rules)?)
}

/// `side ∧ f` is unsatisfiable.
pub fn side_refutes(backend: &dyn Backend, store: &mut TermStore, side: &ClauseSide, f: &Formula) -> Result<bool> {
    for conj in f.dnf() {
        if !side_unsat(backend, store, side, &conj)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `side ⊨ f`.
pub fn side_entails(backend: &dyn Backend, store: &mut TermStore, side: &ClauseSide, f: &Formula) -> Result<bool> {
    side_refutes(backend, store, side, &f.negate())
}

/// Interpolant of two literal conjunctions.
pub fn literal_interpolant(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    a: &[Literal],
    b: &[Literal],
) -> Result<Formula> {
    clause_interpolant(backend, store, vocab, &ClauseSide::from_lits(a), &ClauseSide::from_lits(b))
}

struct Level {
    sent: Vec<Atom>,
    received: Vec<Atom>,
}

fn build(levels: &[Level], a_closed: bool) -> Formula {
    let mut acc = if a_closed { Formula::False } else { Formula::True };
    for lv in levels.iter().rev() {
        if !lv.received.is_empty() {
            let mut ds: Vec<Formula> = lv.received.iter().map(|m| Formula::Lit(Literal::neg(*m))).collect();
            ds.push(acc);
            acc = Formula::or(ds);
        }
        let mut cs: Vec<Formula> = lv.sent.iter().map(|k| Formula::Lit(Literal::pos(*k))).collect();
        cs.push(acc);
        acc = Formula::and(cs);
    }
    acc
}

/// Interpolant of two sides made of literals and Horn rules.
pub fn clause_interpolant(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    a: &ClauseSide,
    b: &ClauseSide,
) -> Result<Formula> {
    if backend.theory() == TheoryId::Lra && a.rules.is_empty() && b.rules.is_empty() {
        return farkas_interpolant(store, vocab, &a.lits, &b.lits);
    }
    let mut levels: Vec<Level> = Vec::new();
    let mut a_in: Vec<Literal> = Vec::new();
    let mut b_in: Vec<Literal> = Vec::new();
    let mut a_closed = None;
    for _ in 0..MAX_ROUNDS {
        if side_unsat(backend, store, a, &a_in)? {
            a_closed = Some(true);
            break;
        }
        let a_facts = saturate(backend, store, &concat(&a.lits, &a_in), &a.rules)?;
        let b_facts = saturate(backend, store, &concat(&b.lits, &b_in), &b.rules)?;
        let sent = fresh_projection(backend, store, vocab, &a_facts, &b_facts)?;
        b_in.extend(sent.iter().map(|x| Literal::pos(*x)));
        levels.push(Level { sent: sent.clone(), received: Vec::new() });
        if side_unsat(backend, store, b, &b_in)? {
            a_closed = Some(false);
            break;
        }
        let b_facts = saturate(backend, store, &concat(&b.lits, &b_in), &b.rules)?;
        let received = fresh_projection(backend, store, vocab, &b_facts, &a_facts)?;
        a_in.extend(received.iter().map(|x| Literal::pos(*x)));
        let stuck = sent.is_empty() && received.is_empty();
        levels.last_mut().unwrap().received = received;
        if stuck {
            return Err(Error::NotUnsat);
        }
    }
    let Some(a_closed) = a_closed else { return Err(Error::NotUnsat) };
    minimize(backend, store, a, b, levels, a_closed)
}

fn concat(x: &[Literal], y: &[Literal]) -> Vec<Literal> {
    let mut v = x.to_vec();
    v.extend_from_slice(y);
    v
}

/// Shared projection of `from` minus atoms the receiver already entails.
fn fresh_projection(
    backend: &dyn Backend,
    store: &mut TermStore,
    vocab: &Vocab,
    from: &[Atom],
    to: &[Atom],
) -> Result<Vec<Atom>> {
    let proj = backend.project(store, vocab, from)?;
    let mut e = backend.entailer(store, to)?;
    let mut out = Vec::new();
    for p in proj {
        if !out.contains(&p) && !e.entails(store, &p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Greedy removal of exchanged atoms while both interpolant conditions
/// still hold.
fn minimize(
    backend: &dyn Backend,
    store: &mut TermStore,
    a: &ClauseSide,
    b: &ClauseSide,
    mut levels: Vec<Level>,
    a_closed: bool,
) -> Result<Formula> {
    let total: usize = levels.iter().map(|l| l.sent.len() + l.received.len()).sum();
    let ok = |store: &mut TermStore, f: &Formula| -> Result<bool> {
        Ok(side_entails(backend, store, a, f)? && side_refutes(backend, store, b, f)?)
    };
    let full = build(&levels, a_closed);
    if !ok(store, &full)? {
        return Err(Error::VerificationFailed(format!("exchange interpolant {}", full.display(store))));
    }
    if total > MINIMIZE_LIMIT {
        return Ok(full);
    }
    for li in 0..levels.len() {
        for which in [0usize, 1] {
            let mut k = 0;
            loop {
                let len = if which == 0 { levels[li].sent.len() } else { levels[li].received.len() };
                if k >= len {
                    break;
                }
                let removed = if which == 0 { levels[li].sent.remove(k) } else { levels[li].received.remove(k) };
                let trial = build(&levels, a_closed);
                if ok(store, &trial)? {
                    continue;
                }
                if which == 0 {
                    levels[li].sent.insert(k, removed);
                } else {
                    levels[li].received.insert(k, removed);
                }
                k += 1;
            }
        }
    }
    Ok(build(&levels, a_closed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::make_backend;

    #[test]
    fn slat_rules_chain_through_shared_constant() {
        let mut s = TermStore::new();
        let [d, a1, a, c, b, b1, cf] = ["d", "a1", "a", "c", "b", "b1", "cfd"].map(|n| s.constant(n));
        let leq = |s: &TermStore, x, y| Atom::new(s, Rel::Leq, x, y);
        let side_a = ClauseSide {
            lits: vec![Literal::pos(leq(&s, d, a1)), Literal::pos(leq(&s, a, c))],
            rules: vec![HornRule { premises: vec![leq(&s, d, a1)], conclusion: leq(&s, cf, a) }],
        };
        let side_b = ClauseSide {
            lits: vec![Literal::pos(leq(&s, b, d)), Literal::neg(leq(&s, b1, c))],
            rules: vec![HornRule { premises: vec![leq(&s, b, d)], conclusion: leq(&s, b1, cf) }],
        };
        let be = make_backend(TheoryId::Slat);
        let vocab = Vocab::new([d, c, cf]);
        let i = clause_interpolant(be.as_ref(), &mut s, &vocab, &side_a, &side_b).unwrap();
        assert_eq!(i.display(&s), "(leq cfd c)");
    }

    #[test]
    fn eq_disequality_on_a_side() {
        let mut s = TermStore::new();
        let [a, b, c1, c2] = ["a", "b", "c1", "c2"].map(|n| s.constant(n));
        let eq = |s: &TermStore, x, y| Atom::new(s, Rel::Eq, x, y);
        let la = [Literal::pos(eq(&s, a, c1)), Literal::neg(eq(&s, a, c2))];
        let lb = [Literal::pos(eq(&s, b, c1)), Literal::pos(eq(&s, b, c2))];
        let be = make_backend(TheoryId::Eq);
        let vocab = Vocab::new([c1, c2]);
        let i = literal_interpolant(be.as_ref(), &mut s, &vocab, &la, &lb).unwrap();
        let sa = ClauseSide::from_lits(&la);
        let sb = ClauseSide::from_lits(&lb);
        assert!(side_entails(be.as_ref(), &mut s, &sa, &i).unwrap());
        assert!(side_refutes(be.as_ref(), &mut s, &sb, &i).unwrap());
    }

    #[test]
    fn lra_branching_on_rules() {
        let mut s = TermStore::new();
        let [x, y] = ["x", "y"].map(|n| s.constant(n));
        let zero = s.int(0);
        let one = s.int(1);
        // x <= 0 → y <= 0 and 0 < x → y <= 0 cover every x, so y <= 0.
        let rules = vec![
            HornRule { premises: vec![Atom::new(&s, Rel::Leq, x, zero)], conclusion: Atom::new(&s, Rel::Leq, y, zero) },
            HornRule { premises: vec![Atom::new(&s, Rel::Lt, zero, x)], conclusion: Atom::new(&s, Rel::Leq, y, zero) },
        ];
        let lits = [Literal::pos(Atom::new(&s, Rel::Leq, one, y))];
        let be = make_backend(TheoryId::Lra);
        assert!(!sat_with_rules(be.as_ref(), &mut s, &lits, &rules).unwrap());
    }
}
