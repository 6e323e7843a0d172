//! Linear rational arithmetic via Fourier-Motzkin with Farkas certificates.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::{check_separator, no_separator, trivial_separator, unsupported, Backend, BackendDescriptor, Entailer, Vocab};
use crate::error::{Error, Result};
use crate::kernel::{Atom, Formula, Literal, Rel, TermId, TermStore, TheoryId};
use crate::linear::{fourier_motzkin, linearize, project_out, term_of, FarkasCertificate, FmResult, LinExpr, Q};

pub struct LraBackend;

/// `expr <= 0` or `expr < 0` rows for one literal. Disequalities are
/// rejected.
pub fn literal_rows(store: &TermStore, lit: &Literal) -> Result<Vec<(LinExpr, bool)>> {
    let a = &lit.atom;
    let l = linearize(store, a.lhs)?;
    let r = linearize(store, a.rhs)?;
    let lr = l.sub(&r);
    let rl = r.sub(&l);
    Ok(match (lit.pos, a.rel) {
        (true, Rel::Leq) => vec![(lr, false)],
        (true, Rel::Lt) => vec![(lr, true)],
        (true, Rel::Eq) => vec![(lr, false), (rl, false)],
        (false, Rel::Leq) => vec![(rl, true)],
        (false, Rel::Lt) => vec![(rl, false)],
        (false, Rel::Eq) => return Err(unsupported(store, a)),
    })
}

fn rows_of(store: &TermStore, lits: &[Literal]) -> Result<(Vec<(LinExpr, bool)>, Vec<usize>)> {
    let mut rows = Vec::new();
    let mut owner = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        for r in literal_rows(store, l)? {
            rows.push(r);
            owner.push(i);
        }
    }
    Ok((rows, owner))
}

/// Elimination order: variables outside `keep` first, then by name.
pub fn elimination_order(store: &TermStore, rows: &[(LinExpr, bool)], keep: &BTreeSet<TermId>) -> Vec<TermId> {
    let mut vars: BTreeSet<TermId> = BTreeSet::new();
    for (e, _) in rows {
        vars.extend(e.vars());
    }
    let mut v: Vec<TermId> = vars.into_iter().collect();
    v.sort_by(|a, b| {
        keep.contains(a)
            .cmp(&keep.contains(b))
            .then_with(|| store.display(*a).cmp(&store.display(*b)))
    });
    v
}

/// Runs Fourier-Motzkin on literals.
pub fn solve_literals(store: &TermStore, lits: &[Literal]) -> Result<(FmResult, Vec<(LinExpr, bool)>)> {
    let (rows, _) = rows_of(store, lits)?;
    let order = elimination_order(store, &rows, &BTreeSet::new());
    Ok((fourier_motzkin(&rows, &order), rows))
}

/// Atom `lhs R rhs` for `expr <= 0` / `< 0`, with coprime integer
/// coefficients and positive terms on the left. `None` for constant rows.
pub fn row_atom(store: &mut TermStore, expr: &LinExpr, strict: bool) -> Option<Atom> {
    if expr.is_constant() {
        return None;
    }
    let e = expr.primitive();
    let mut parts: Vec<(TermId, Q)> = e.coeffs.iter().map(|(x, c)| (*x, c.clone())).collect();
    parts.sort_by_key(|(x, _)| store.display(*x));
    let left: Vec<(TermId, Q)> = parts.iter().filter(|(_, c)| c.is_positive()).cloned().collect();
    let right: Vec<(TermId, Q)> = parts.iter().filter(|(_, c)| c.is_negative()).map(|(x, c)| (*x, -c)).collect();
    let (kl, kr) = if e.constant.is_positive() {
        (e.constant.clone(), Q::zero())
    } else {
        (Q::zero(), -e.constant.clone())
    };
    let lhs = term_of(store, &left, &kl);
    let rhs = term_of(store, &right, &kr);
    Some(Atom::new(store, if strict { Rel::Lt } else { Rel::Leq }, lhs, rhs))
}

fn row_formula(store: &mut TermStore, expr: &LinExpr, strict: bool) -> Formula {
    match row_atom(store, expr, strict) {
        Some(a) => Formula::Lit(Literal::pos(a)),
        None => {
            let k = &expr.constant;
            if k.is_positive() || (strict && k.is_zero()) {
                Formula::False
            } else {
                Formula::True
            }
        }
    }
}

struct LraEntailer {
    rows: Vec<(LinExpr, bool)>,
}

impl LraEntailer {
    fn refutes(&self, store: &TermStore, extra: Vec<(LinExpr, bool)>) -> bool {
        let mut rows = self.rows.clone();
        rows.extend(extra);
        let order = elimination_order(store, &rows, &BTreeSet::new());
        matches!(fourier_motzkin(&rows, &order), FmResult::Unsat(_))
    }
}

impl Entailer for LraEntailer {
    fn entails(&mut self, store: &mut TermStore, atom: &Atom) -> Result<bool> {
        let l = linearize(store, atom.lhs)?;
        let r = linearize(store, atom.rhs)?;
        Ok(match atom.rel {
            Rel::Leq => self.refutes(store, vec![(r.sub(&l), true)]),
            Rel::Lt => self.refutes(store, vec![(r.sub(&l), false)]),
            Rel::Eq => self.refutes(store, vec![(r.sub(&l), true)]) && self.refutes(store, vec![(l.sub(&r), true)]),
        })
    }
}

impl Backend for LraBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor { theory: TheoryId::Lra, p: vec![Rel::Leq], strong_interpolating: true, convex: true }
    }

    fn positive_part(&self, store: &mut TermStore, lits: &[Literal]) -> Result<Vec<Atom>> {
        let mut out = Vec::new();
        for l in lits {
            let a = l.atom;
            match (l.pos, a.rel) {
                (true, _) => out.push(a),
                (false, Rel::Leq) => out.push(Atom::new(store, Rel::Lt, a.rhs, a.lhs)),
                (false, Rel::Lt) => out.push(Atom::new(store, Rel::Leq, a.rhs, a.lhs)),
                (false, Rel::Eq) => {}
            }
        }
        Ok(out)
    }

    fn check_sat(&self, store: &mut TermStore, lits: &[Literal]) -> Result<bool> {
        let (res, _) = solve_literals(store, lits)?;
        Ok(matches!(res, FmResult::Sat(_)))
    }

    fn entailer<'a>(&'a self, store: &mut TermStore, facts: &[Atom]) -> Result<Box<dyn Entailer + 'a>> {
        let lits: Vec<Literal> = facts.iter().map(|a| Literal::pos(*a)).collect();
        let (rows, _) = rows_of(store, &lits)?;
        Ok(Box::new(LraEntailer { rows }))
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
        if let Some(t) = trivial_separator(self, store, vocab, x, y, atom, strong)? {
            return Ok(t);
        }
        let goal = match atom.rel {
            Rel::Leq | Rel::Eq => Atom { rel: Rel::Leq, lhs: atom.lhs, rhs: atom.rhs },
            Rel::Lt => return Err(unsupported(store, atom)),
        };
        let t = farkas_split(store, x, y, &goal).ok_or_else(|| no_separator(store, atom))?;
        if check_separator(self, store, x, y, atom, t, strong)? {
            Ok(t)
        } else {
            Err(no_separator(store, atom))
        }
    }

    fn project(&self, store: &mut TermStore, vocab: &Vocab, facts: &[Atom]) -> Result<Vec<Atom>> {
        let lits: Vec<Literal> = facts.iter().map(|a| Literal::pos(*a)).collect();
        let (rows, _) = rows_of(store, &lits)?;
        let mut local = Vec::new();
        let mut all = BTreeSet::new();
        for (e, _) in &rows {
            all.extend(e.vars());
        }
        for v in all {
            if !vocab.is_shared(store, v) {
                local.push(v);
            }
        }
        local.sort_by_key(|v| store.display(*v));
        let Some(rest) = project_out(&rows, &local) else {
            let zero = store.int(0);
            return Ok(vec![Atom::new(store, Rel::Lt, zero, zero)]);
        };
        let mut out = Vec::new();
        for (e, s) in rest {
            if let Some(a) = row_atom(store, &e, s) {
                out.push(a);
            }
        }
        Ok(out)
    }
}

/// Splits a refutation of `x ∧ y ∧ b < a` into `a <= t` (from `x`) and
/// `t <= b` (from `y`).
fn farkas_split(store: &mut TermStore, x: &[Atom], y: &[Atom], goal: &Atom) -> Option<TermId> {
    let mut rows = Vec::new();
    let mut from_x = Vec::new();
    for (side, facts) in [(true, x), (false, y)] {
        for f in facts {
            for r in literal_rows(store, &Literal::pos(*f)).ok()? {
                rows.push(r);
                from_x.push(side);
            }
        }
    }
    let a = linearize(store, goal.lhs).ok()?;
    let b = linearize(store, goal.rhs).ok()?;
    rows.push((b.sub(&a), true));
    let goal_row = rows.len() - 1;
    let order = elimination_order(store, &rows, &BTreeSet::new());
    let FmResult::Unsat(cert) = fourier_motzkin(&rows, &order) else { return None };
    let mut ex = LinExpr::zero();
    let mut mu = Q::zero();
    for (i, m) in &cert.multipliers {
        if *i == goal_row {
            mu = m.clone();
        } else if from_x[*i] {
            ex.add_scaled(&rows[*i].0, m);
        }
    }
    if mu.is_zero() {
        return None;
    }
    // ex - mu*a only mentions shared symbols; t = -(ex - mu*a)/mu.
    ex.add_scaled(&a, &-mu.clone());
    let t = ex.scale(&(-Q::one() / mu));
    let mut parts: Vec<(TermId, Q)> = t.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect();
    parts.sort_by_key(|(v, _)| store.display(*v));
    Some(term_of(store, &parts, &t.constant))
}

/// Farkas interpolant of two literal conjunctions: the weighted sum of the
/// A-rows of a certificate over a minimal core.
pub fn farkas_interpolant(store: &mut TermStore, vocab: &Vocab, a: &[Literal], b: &[Literal]) -> Result<Formula> {
    let (ra, _) = rows_of(store, a)?;
    let (rb, _) = rows_of(store, b)?;
    let mut rows: Vec<(LinExpr, bool)> = ra.iter().cloned().chain(rb.iter().cloned()).collect();
    let mut from_a: Vec<bool> = ra.iter().map(|_| true).chain(rb.iter().map(|_| false)).collect();
    let unsat = |store: &TermStore, rows: &[(LinExpr, bool)]| {
        let keep: BTreeSet<TermId> = vocab.shared.clone();
        let order = elimination_order(store, rows, &keep);
        fourier_motzkin(rows, &order)
    };
    if matches!(unsat(store, &rows), FmResult::Sat(_)) {
        return Err(Error::NotUnsat);
    }
    // Deletion-based core minimization.
    let mut i = 0;
    while i < rows.len() {
        let mut trial = rows.clone();
        trial.remove(i);
        if matches!(unsat(store, &trial), FmResult::Unsat(_)) {
            rows = trial;
            from_a.remove(i);
        } else {
            i += 1;
        }
    }
    let FmResult::Unsat(cert) = unsat(store, &rows) else { return Err(Error::NotUnsat) };
    debug_assert!(cert.verify(&rows));
    let (expr, strict) = a_part(&cert, &rows, &from_a);
    Ok(row_formula(store, &expr, strict))
}

fn a_part(cert: &FarkasCertificate, rows: &[(LinExpr, bool)], from_a: &[bool]) -> (LinExpr, bool) {
    let mut e = LinExpr::zero();
    let mut strict = false;
    for (i, m) in &cert.multipliers {
        if from_a[*i] && !m.is_zero() {
            e.add_scaled(&rows[*i].0, m);
            strict |= rows[*i].1;
        }
    }
    (e, strict)
}

/// Sample point check used by tests and verification.
pub fn sample_satisfies(store: &TermStore, lits: &[Literal], point: &BTreeMap<TermId, Q>) -> Result<bool> {
    let (rows, _) = rows_of(store, lits)?;
    Ok(crate::linear::satisfies(&rows, point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::PLUS;

    #[test]
    fn average_separator() {
        let mut s = TermStore::new();
        let [a, b, c1, c2] = ["a", "b", "c1", "c2"].map(|n| s.constant(n));
        let two = s.int(2);
        let two_a = s.app_named(crate::kernel::TIMES, vec![two, a]);
        let sum = s.app_named(PLUS, vec![c1, c2]);
        let x = [Atom::new(&s, Rel::Leq, two_a, sum)];
        let y = [Atom::new(&s, Rel::Leq, c1, b), Atom::new(&s, Rel::Leq, c2, b)];
        let vocab = Vocab::new([c1, c2]);
        let goal = Atom::new(&s, Rel::Leq, a, b);
        assert!(LraBackend.entails(&mut s, &[x[0], y[0], y[1]], &goal).unwrap());
        let t = LraBackend.separating_term(&mut s, &vocab, &x, &y, &goal, true).unwrap();
        assert_eq!(s.display(t), "(+ (* 1/2 c1) (* 1/2 c2))");
    }

    #[test]
    fn interpolant_is_shared() {
        let mut s = TermStore::new();
        let [a, c, b] = ["a", "c", "b"].map(|n| s.constant(n));
        let zero = s.int(0);
        let a_lits = [Literal::pos(Atom::new(&s, Rel::Lt, a, c)), Literal::pos(Atom::new(&s, Rel::Leq, zero, a))];
        let b_lits = [Literal::pos(Atom::new(&s, Rel::Leq, c, b)), Literal::pos(Atom::new(&s, Rel::Leq, b, zero))];
        let vocab = Vocab::new([c]);
        let i = farkas_interpolant(&mut s, &vocab, &a_lits, &b_lits).unwrap();
        assert_eq!(i.display(&s), "(lt 0 c)");
    }
}
