//! Seeded generators for randomized checks: small extension problems,
//! rational inequality systems and partitioned CNFs.
//!
//! The seed comes from `HINTERP_SEED` when set.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::TermStore;
use crate::linear::{q, LinExpr};
use crate::problem::{parse_problem, ProblemFile};
use crate::prop::{solve, Clause, PLit, Part};

pub const SEED_VAR: &str = "HINTERP_SEED";

/// `HINTERP_SEED` if set and numeric, otherwise `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Eq,
    Poset,
    Slat,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Eq, Family::Poset, Family::Slat];

    pub fn keyword(self) -> &'static str {
        match self {
            Family::Eq => "eq",
            Family::Poset => "poset",
            Family::Slat => "slat",
        }
    }
}

/// Which side a constant may appear on.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Home {
    A,
    B,
    Both,
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    family: Family,
    consts: Vec<(String, Home)>,
    funcs: Vec<(String, usize)>,
}

impl Gen<'_> {
    fn constant(&mut self, side: Home) -> String {
        let pool: Vec<&String> =
            self.consts.iter().filter(|(_, h)| *h == side || *h == Home::Both).map(|(n, _)| n).collect();
        (*pool.choose(self.rng).expect("every side has a shared constant")).clone()
    }

    fn term(&mut self, side: Home, depth: usize) -> String {
        let roll: f64 = self.rng.gen();
        if depth > 0 && !self.funcs.is_empty() && roll < 0.45 {
            let (f, n) = self.funcs.choose(self.rng).cloned().expect("nonempty");
            let args: Vec<String> = (0..n).map(|_| self.term(side, depth - 1)).collect();
            return format!("({} {})", f, args.join(" "));
        }
        if depth > 0 && self.family == Family::Slat && roll < 0.55 {
            let l = self.term(side, depth - 1);
            let r = self.term(side, depth - 1);
            return format!("(meet {} {})", l, r);
        }
        self.constant(side)
    }

    fn literal(&mut self, side: Home, negative: bool) -> String {
        let rel = match self.family {
            Family::Eq => "eq",
            _ if self.rng.gen_bool(0.8) => "leq",
            _ => "eq",
        };
        let l = self.term(side, 2);
        let r = self.term(side, 2);
        let atom = format!("({} {} {})", rel, l, r);
        if negative {
            format!("(not {})", atom)
        } else {
            atom
        }
    }

    fn block(&mut self, side: Home) -> Vec<String> {
        let n = self.rng.gen_range(1..=4);
        let mut out: Vec<String> = (0..n).map(|_| self.literal(side, false)).collect();
        if self.rng.gen_bool(0.5) {
            out.push(self.literal(side, true));
        }
        out
    }

    fn schemas(&mut self) -> Vec<String> {
        if self.family == Family::Eq {
            return Vec::new();
        }
        let mut out = Vec::new();
        let unary: Vec<String> = self.funcs.iter().filter(|(_, n)| *n == 1).map(|(f, _)| f.clone()).collect();
        for (f, _) in self.funcs.clone() {
            if self.rng.gen_bool(0.7) {
                out.push(format!("(mon {})", f));
            }
        }
        if unary.len() == 2 {
            let paired = if self.rng.gen_bool(0.3) {
                Some(format!("(leq {} {})", unary[0], unary[1]))
            } else if self.rng.gen_bool(0.3) {
                Some(format!("(sgc {} {})", unary[0], unary[1]))
            } else {
                None
            };
            if let Some(p) = paired {
                let mon = format!("(mon {})", unary[0]);
                if !out.contains(&mon) {
                    out.push(mon);
                }
                out.push(p);
            }
        }
        if let Some(f) = unary.first() {
            if self.rng.gen_bool(0.3) {
                let shared: Vec<String> =
                    self.consts.iter().filter(|(_, h)| *h == Home::Both).map(|(n, _)| n.clone()).collect();
                let bound = shared.choose(self.rng).cloned().expect("a shared constant exists");
                out.push(format!("(bound {} {})", f, bound));
            }
        }
        out
    }
}

/// Problem text for a random instance of `family`: at most 6 constants and
/// 2 extension functions.
pub fn random_problem_text(rng: &mut ChaCha8Rng, family: Family) -> String {
    let k = rng.gen_range(3..=6);
    let mut consts: Vec<(String, Home)> = (0..k)
        .map(|i| {
            let home = [Home::A, Home::B, Home::Both][rng.gen_range(0..3)];
            (format!("c{}", i), home)
        })
        .collect();
    consts[0].1 = Home::Both;
    let nf = rng.gen_range(0..=2);
    let funcs: Vec<(String, usize)> = ["f", "g"][..nf]
        .iter()
        .map(|f| (f.to_string(), if family != Family::Eq && rng.gen_bool(0.15) { 2 } else { 1 }))
        .collect();
    let mut g = Gen { rng, family, consts, funcs };
    let schemas = g.schemas();
    let a = g.block(Home::A);
    let b = g.block(Home::B);
    let mut text = format!("(theory {})\n", family.keyword());
    for (f, n) in &g.funcs {
        text.push_str(&format!("(ext {} {})\n", f, n));
    }
    for s in schemas {
        text.push_str(&format!("(axiom {})\n", s));
    }
    text.push_str(&format!("(A {})\n(B {})\n", a.join(" "), b.join(" ")));
    text
}

/// A random problem that parses and validates.
pub fn random_problem(rng: &mut ChaCha8Rng, family: Family) -> (String, ProblemFile) {
    loop {
        let text = random_problem_text(rng, family);
        if let Ok(p) = parse_problem(&text) {
            return (text, p);
        }
    }
}

/// Random system of `m` inequalities `expr <= 0` / `expr < 0` over `vars`
/// fresh variables with small integer coefficients.
pub fn random_system(rng: &mut ChaCha8Rng, store: &mut TermStore, vars: usize, m: usize) -> Vec<(LinExpr, bool)> {
    let xs: Vec<_> = (0..vars).map(|i| store.constant(&format!("x{}", i))).collect();
    (0..m)
        .map(|_| {
            let mut e = LinExpr::constant(q(rng.gen_range(-5..=5)));
            for x in &xs {
                if rng.gen_bool(0.6) {
                    e.add_scaled(&LinExpr::var(*x), &q(rng.gen_range(-3..=3)));
                }
            }
            (e, rng.gen_bool(0.4))
        })
        .collect()
}

/// Partitioned CNF: A over variables `0..a_end`, B over `b_start..n`, with
/// `b_start < a_end` so the middle block is shared.
#[derive(Clone, Debug)]
pub struct PartitionedCnf {
    pub clauses: Vec<(Clause, Part)>,
    pub num_vars: usize,
    pub a_end: u32,
    pub b_start: u32,
}

fn random_clause(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> Clause {
    let width = rng.gen_range(1..=3).min((hi - lo) as usize);
    let mut vars: Vec<u32> = (lo..hi).collect();
    vars.shuffle(rng);
    vars.truncate(width);
    vars.into_iter().map(|v| PLit::new(v, rng.gen_bool(0.5))).collect()
}

/// A random unsatisfiable partitioned CNF with at most `max_vars` variables.
pub fn random_unsat_cnf(rng: &mut ChaCha8Rng, max_vars: usize) -> PartitionedCnf {
    loop {
        let n = rng.gen_range(3..=max_vars.max(3)) as u32;
        let b_start = rng.gen_range(0..n - 1);
        let a_end = rng.gen_range(b_start + 1..=n);
        let mut clauses = Vec::new();
        let (ca, cb) = (rng.gen_range(1..=3 * a_end as usize), rng.gen_range(1..=3 * (n - b_start) as usize));
        for _ in 0..ca {
            clauses.push((random_clause(rng, 0, a_end), Part::A));
        }
        for _ in 0..cb {
            clauses.push((random_clause(rng, b_start, n), Part::B));
        }
        let plain: Vec<Clause> = clauses.iter().map(|(c, _)| c.clone()).collect();
        if solve(&plain, n as usize).is_none() {
            return PartitionedCnf { clauses, num_vars: n as usize, a_end, b_start };
        }
    }
}

/// Semilattice problem with `n` literals, each holding one application of
/// a monotone unary function to its own constant.
pub fn scaling_problem_text(n: usize) -> String {
    let mut text = String::from("(theory slat)\n(ext f 1)\n(axiom (mon f))\n(A");
    let half = n / 2;
    for i in 0..half {
        text.push_str(&format!(" (leq a{} (f a{}))", i, (i + 1) % half));
    }
    text.push_str(")\n(B");
    for i in 0..n - half {
        text.push_str(&format!(" (leq (f b{}) b{})", i, (i + 1) % (n - half)));
    }
    text.push_str(")\n");
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_problem_text(&mut rng(7), Family::Slat);
        let b = random_problem_text(&mut rng(7), Family::Slat);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_problems_parse() {
        let mut r = rng(11);
        for fam in Family::ALL {
            for _ in 0..20 {
                let (_, p) = random_problem(&mut r, fam);
                assert!(p.problem.sig.extension_functions.len() <= 2);
            }
        }
    }

    #[test]
    fn cnf_is_unsat() {
        let c = random_unsat_cnf(&mut rng(3), 16);
        assert!(c.num_vars <= 16);
        let plain: Vec<Clause> = c.clauses.iter().map(|(c, _)| c.clone()).collect();
        assert!(solve(&plain, c.num_vars).is_none());
    }
}
