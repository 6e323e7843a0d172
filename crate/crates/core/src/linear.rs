//! Exact rational linear expressions and Fourier-Motzkin elimination with
//! Farkas certificates and sample points.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Head, TermId, TermStore, MINUS, PLUS, TIMES};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `sum coeffs[x] * x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinExpr {
    pub coeffs: BTreeMap<TermId, Q>,
    pub constant: Q,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: Q::zero() }
    }

    pub fn constant(k: Q) -> Self {
        LinExpr { coeffs: BTreeMap::new(), constant: k }
    }

    pub fn var(x: TermId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x, Q::one());
        LinExpr { coeffs, constant: Q::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, x: TermId) -> Q {
        self.coeffs.get(&x).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_scaled(&mut self, other: &LinExpr, k: &Q) {
        if k.is_zero() {
            return;
        }
        for (x, c) in &other.coeffs {
            let e = self.coeffs.entry(*x).or_insert_with(Q::zero);
            *e += c * k;
            if e.is_zero() {
                self.coeffs.remove(x);
            }
        }
        self.constant += &other.constant * k;
    }

    pub fn scale(&self, k: &Q) -> LinExpr {
        let mut out = LinExpr::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn eval(&self, point: &BTreeMap<TermId, Q>) -> Q {
        let mut v = self.constant.clone();
        for (x, c) in &self.coeffs {
            v += c * point.get(x).cloned().unwrap_or_else(Q::zero);
        }
        v
    }

    pub fn vars(&self) -> impl Iterator<Item = TermId> + '_ {
        self.coeffs.keys().copied()
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> LinExpr {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.coeffs.values().chain(std::iter::once(&self.constant)) {
            den = den.lcm(c.denom());
        }
        for c in self.coeffs.values().chain(std::iter::once(&self.constant)) {
            let n = (c * Q::from_integer(den.clone())).to_integer();
            num = num.gcd(&n);
        }
        if num.is_zero() {
            return self.clone();
        }
        self.scale(&Q::new(den, num))
    }
}

/// Reads a base term as a linear expression; non-arithmetic subterms are
/// treated as variables.
pub fn linearize(store: &TermStore, t: TermId) -> Result<LinExpr> {
    match store.head(t) {
        Head::Num(k) => Ok(LinExpr::constant(k.clone())),
        Head::Var(_) => Ok(LinExpr::var(t)),
        Head::Sym(s) => {
            let args = store.args(t);
            let name = store.name(*s);
            if args.is_empty() {
                return Ok(LinExpr::var(t));
            }
            match name {
                n if n == PLUS => {
                    let mut e = LinExpr::zero();
                    for &a in args {
                        e.add_scaled(&linearize(store, a)?, &Q::one());
                    }
                    Ok(e)
                }
                n if n == MINUS => {
                    let first = linearize(store, args[0])?;
                    if args.len() == 1 {
                        return Ok(first.scale(&-Q::one()));
                    }
                    let mut e = first;
                    for &a in &args[1..] {
                        e.add_scaled(&linearize(store, a)?, &-Q::one());
                    }
                    Ok(e)
                }
                n if n == TIMES => {
                    let l = linearize(store, args[0])?;
                    let r = linearize(store, args[1])?;
                    if l.is_constant() {
                        Ok(r.scale(&l.constant))
                    } else if r.is_constant() {
                        Ok(l.scale(&r.constant))
                    } else {
                        Err(Error::UnsupportedLiteral(format!("nonlinear term {}", store.display(t))))
                    }
                }
                _ => Ok(LinExpr::var(t)),
            }
        }
    }
}

/// Builds a term for `expr` with the given variables. Coefficients of one are
/// omitted.
pub fn term_of(store: &mut TermStore, parts: &[(TermId, Q)], constant: &Q) -> TermId {
    let mut summands = Vec::new();
    for (x, c) in parts {
        if c.is_one() {
            summands.push(*x);
        } else {
            let k = store.num(c.clone());
            summands.push(store.app_named(TIMES, vec![k, *x]));
        }
    }
    if !constant.is_zero() || summands.is_empty() {
        summands.push(store.num(constant.clone()));
    }
    if summands.len() == 1 {
        summands[0]
    } else {
        store.app_named(PLUS, summands)
    }
}

/// Inequality `expr <= 0` (or `< 0` when strict), with the multipliers over
/// the original inputs that produced it.
#[derive(Clone, Debug)]
pub struct Ineq {
    pub expr: LinExpr,
    pub strict: bool,
    pub origin: Vec<Q>,
}

/// Nonnegative multipliers over the inputs whose combination is
/// contradictory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<(usize, Q)>,
    pub strict: bool,
}

impl FarkasCertificate {
    /// Machine check against the inputs.
    pub fn verify(&self, inputs: &[(LinExpr, bool)]) -> bool {
        let mut sum = LinExpr::zero();
        let mut strict = false;
        for (i, m) in &self.multipliers {
            if m.is_negative() || *i >= inputs.len() {
                return false;
            }
            if m.is_zero() {
                continue;
            }
            sum.add_scaled(&inputs[*i].0, m);
            strict |= inputs[*i].1;
        }
        if strict != self.strict {
            return false;
        }
        sum.is_constant() && (sum.constant.is_positive() || (strict && sum.constant.is_zero()))
    }
}

#[derive(Clone, Debug)]
pub enum FmResult {
    Sat(BTreeMap<TermId, Q>),
    Unsat(FarkasCertificate),
}

fn key_of(i: &Ineq) -> (LinExpr, bool) {
    (i.expr.primitive(), i.strict)
}

fn contradiction(i: &Ineq) -> bool {
    i.expr.is_constant() && (i.expr.constant.is_positive() || (i.strict && i.expr.constant.is_zero()))
}

fn certificate(i: &Ineq, inputs: &[(LinExpr, bool)]) -> FarkasCertificate {
    let multipliers: Vec<(usize, Q)> = i
        .origin
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(k, m)| (k, m.clone()))
        .collect();
    let strict = multipliers.iter().any(|(k, _)| inputs[*k].1);
    FarkasCertificate { multipliers, strict }
}

/// Fourier-Motzkin over `inputs` (each `expr <= 0` or `< 0` if flagged).
/// Variables are eliminated in `order`; any variable missing from `order`
/// is eliminated afterwards in id order.
pub fn fourier_motzkin(inputs: &[(LinExpr, bool)], order: &[TermId]) -> FmResult {
    let n = inputs.len();
    let mut current: Vec<Ineq> = Vec::new();
    let mut seen = BTreeSet::new();
    for (k, (e, s)) in inputs.iter().enumerate() {
        let mut origin = vec![Q::zero(); n];
        origin[k] = Q::one();
        let i = Ineq { expr: e.clone(), strict: *s, origin };
        if contradiction(&i) {
            return FmResult::Unsat(certificate(&i, inputs));
        }
        if seen.insert(key_of(&i)) {
            current.push(i);
        }
    }
    let mut all_vars: BTreeSet<TermId> = BTreeSet::new();
    for (e, _) in inputs {
        all_vars.extend(e.vars());
    }
    let mut elim: Vec<TermId> = order.iter().copied().filter(|x| all_vars.contains(x)).collect();
    let listed: BTreeSet<TermId> = elim.iter().copied().collect();
    elim.extend(all_vars.iter().copied().filter(|x| !listed.contains(x)));

    // Per eliminated variable, the constraints mentioning it at that stage.
    let mut stages: Vec<(TermId, Vec<Ineq>)> = Vec::new();
    for &x in &elim {
        let (with, without): (Vec<Ineq>, Vec<Ineq>) =
            current.into_iter().partition(|i| !i.expr.coeff(x).is_zero());
        let mut next = without;
        let mut keys: BTreeSet<(LinExpr, bool)> = next.iter().map(key_of).collect();
        let uppers: Vec<&Ineq> = with.iter().filter(|i| i.expr.coeff(x).is_positive()).collect();
        let lowers: Vec<&Ineq> = with.iter().filter(|i| i.expr.coeff(x).is_negative()).collect();
        for u in &uppers {
            for l in &lowers {
                let cu = u.expr.coeff(x);
                let cl = -l.expr.coeff(x);
                let mut expr = u.expr.scale(&cl);
                expr.add_scaled(&l.expr, &cu);
                expr.coeffs.remove(&x);
                let origin: Vec<Q> =
                    u.origin.iter().zip(l.origin.iter()).map(|(a, b)| a * &cl + b * &cu).collect();
                let i = Ineq { expr, strict: u.strict || l.strict, origin };
                if contradiction(&i) {
                    return FmResult::Unsat(certificate(&i, inputs));
                }
                if i.expr.is_constant() {
                    continue;
                }
                if keys.insert(key_of(&i)) {
                    next.push(i);
                }
            }
        }
        stages.push((x, with));
        current = next;
    }
    // Back-substitution.
    let mut point: BTreeMap<TermId, Q> = BTreeMap::new();
    for (x, cons) in stages.iter().rev() {
        let mut lo: Option<(Q, bool)> = None;
        let mut hi: Option<(Q, bool)> = None;
        for i in cons {
            let c = i.expr.coeff(*x);
            let mut rest = i.expr.clone();
            rest.coeffs.remove(x);
            // c*x + rest <= 0  =>  x <= -rest/c (c>0) or x >= -rest/c (c<0)
            let bound = -rest.eval(&point) / &c;
            if c.is_positive() {
                if hi.as_ref().is_none_or(|(h, s)| bound < *h || (bound == *h && i.strict && !s)) {
                    hi = Some((bound, i.strict));
                }
            } else if lo.as_ref().is_none_or(|(l, s)| bound > *l || (bound == *l && i.strict && !s)) {
                lo = Some((bound, i.strict));
            }
        }
        let v = match (lo, hi) {
            (Some((l, _)), Some((h, _))) if l == h => l,
            (Some((l, _)), Some((h, _))) => (l + h) / q(2),
            (Some((l, s)), None) => {
                if s {
                    l + Q::one()
                } else {
                    l
                }
            }
            (None, Some((h, s))) => {
                if s {
                    h - Q::one()
                } else {
                    h
                }
            }
            (None, None) => Q::zero(),
        };
        point.insert(*x, v);
    }
    FmResult::Sat(point)
}

/// Eliminates `vars` and returns the remaining constraints, or `None` if a
/// contradiction shows up.
pub fn project_out(inputs: &[(LinExpr, bool)], vars: &[TermId]) -> Option<Vec<(LinExpr, bool)>> {
    let mut current: Vec<(LinExpr, bool)> = Vec::new();
    let mut keys = BTreeSet::new();
    for (e, s) in inputs {
        if e.is_constant() {
            if e.constant.is_positive() || (*s && e.constant.is_zero()) {
                return None;
            }
            continue;
        }
        if keys.insert((e.primitive(), *s)) {
            current.push((e.primitive(), *s));
        }
    }
    for &x in vars {
        let (with, without): (Vec<_>, Vec<_>) = current.into_iter().partition(|(e, _)| !e.coeff(x).is_zero());
        let mut next = without;
        let mut keys: BTreeSet<(LinExpr, bool)> = next.iter().cloned().collect();
        for (u, su) in with.iter().filter(|(e, _)| e.coeff(x).is_positive()) {
            for (l, sl) in with.iter().filter(|(e, _)| e.coeff(x).is_negative()) {
                let cu = u.coeff(x);
                let cl = -l.coeff(x);
                let mut expr = u.scale(&cl);
                expr.add_scaled(l, &cu);
                expr.coeffs.remove(&x);
                let strict = *su || *sl;
                if expr.is_constant() {
                    if expr.constant.is_positive() || (strict && expr.constant.is_zero()) {
                        return None;
                    }
                    continue;
                }
                let key = (expr.primitive(), strict);
                if keys.insert(key.clone()) {
                    next.push(key);
                }
            }
        }
        current = next;
    }
    Some(current)
}

/// True iff `point` satisfies every input exactly.
pub fn satisfies(inputs: &[(LinExpr, bool)], point: &BTreeMap<TermId, Q>) -> bool {
    inputs.iter().all(|(e, s)| {
        let v = e.eval(point);
        if *s {
            v.is_negative()
        } else {
            !v.is_positive()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_unsat_with_certificate() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let b = s.constant("b");
        // a - b <= 0, b - a < 0
        let e1 = LinExpr::var(a).sub(&LinExpr::var(b));
        let e2 = LinExpr::var(b).sub(&LinExpr::var(a));
        let inputs = vec![(e1, false), (e2, true)];
        match fourier_motzkin(&inputs, &[]) {
            FmResult::Unsat(c) => assert!(c.verify(&inputs)),
            FmResult::Sat(_) => panic!("expected unsat"),
        }
    }

    #[test]
    fn sample_point_satisfies() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let b = s.constant("b");
        let e1 = LinExpr::var(a).sub(&LinExpr::var(b));
        let mut e2 = LinExpr::var(b);
        e2.constant = q(-3);
        let inputs = vec![(e1, true), (e2, false)];
        match fourier_motzkin(&inputs, &[]) {
            FmResult::Sat(p) => assert!(satisfies(&inputs, &p)),
            FmResult::Unsat(_) => panic!("expected sat"),
        }
    }

    #[test]
    fn linearize_sums() {
        let mut s = TermStore::new();
        let a = s.constant("a");
        let two = s.int(2);
        let t = s.app_named(TIMES, vec![two, a]);
        let u = s.app_named(MINUS, vec![t, a]);
        assert_eq!(linearize(&s, u).unwrap(), LinExpr::var(a));
    }
}
