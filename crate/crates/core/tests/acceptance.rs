//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use hinterp::base::make_backend;
use hinterp::driver::{hierarchical_interpolant, hierarchical_sat, instance_count, verify_interpolant, Answer, Problem};
use hinterp::kernel::{Formula, Literal, TheoryId};
use hinterp::linear::{fourier_motzkin, FmResult, LinExpr, Q};
use hinterp::oracle::{finite_model_oracle, OracleConfig, OracleMode, Verdict};
use hinterp::problem::{parse_formula, parse_problem, ProblemFile};
use hinterp::prop::{all_assignments, ordered_resolution, prop_interpolant, PForm, Part, Refutation};
use hinterp::testgen::{
    random_problem, random_system, random_unsat_cnf, rng, scaling_problem_text, seed_from_env, Family,
};

type Outcome = Result<String, String>;

fn corpus(name: &str) -> ProblemFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path.display(), e));
    parse_problem(&text).unwrap_or_else(|e| panic!("{}: {}", path.display(), e))
}

fn solve(p: &mut Problem) -> Result<Formula, String> {
    match hierarchical_interpolant(p).map_err(|e| e.to_string())? {
        Answer::Unsat(i) => Ok(i.formula),
        Answer::Sat => Err("solver answered sat".into()),
    }
}

/// `lhs ⊨ rhs` in the extension, through the satisfiability pipeline.
fn entails(p: &mut Problem, lhs: &Formula, rhs: &Formula) -> Result<bool, String> {
    let backend = make_backend(p.sig.theory);
    for l in lhs.dnf() {
        for r in rhs.negate().dnf() {
            let mut lits: Vec<Literal> = l.clone();
            lits.extend(r);
            if hierarchical_sat(&mut p.store, &p.sig, &p.schemas, backend.as_ref(), &lits).map_err(|e| e.to_string())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn timed(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{} but took {:?} (limit {:?})", detail, took, limit))
    } else {
        Ok(format!("{} in {:?}", detail, took))
    }
}

fn example_semilattice() -> Outcome {
    let start = Instant::now();
    let mut f = corpus("slat_sgc.prob");
    let i = solve(&mut f.problem)?;
    let shown = i.display(&f.problem.store);
    if shown != "(leq (f d) c)" {
        return Err(format!("interpolant {}", shown));
    }
    timed(Duration::from_secs(1), start, format!("interpolant {}", shown))
}

fn example_chemistry() -> Outcome {
    let start = Instant::now();
    let mut f = corpus("chem.prob");
    let i = solve(&mut f.problem)?;
    let expected = parse_formula(&mut f.problem, "(leq (meet substance (catalyzes reaction)) inorganic)")
        .map_err(|e| e.to_string())?;
    let p = &mut f.problem;
    if !entails(p, &i, &expected)? || !entails(p, &expected, &i)? {
        return Err(format!("{} is not equivalent to the expected interpolant", i.display(&p.store)));
    }
    if !verify_interpolant(p, &i).map_err(|e| e.to_string())?.is_ok() {
        return Err("verification failed".into());
    }
    timed(Duration::from_secs(2), start, format!("interpolant {}", i.display(&p.store)))
}

fn example_water() -> Outcome {
    let start = Instant::now();
    let mut f = corpus("water.prob");
    let i = solve(&mut f.problem)?;
    let expected = parse_formula(&mut f.problem, "(lt l_prime L_overflow)").map_err(|e| e.to_string())?;
    let p = &mut f.problem;
    if !entails(p, &i, &expected)? || !entails(p, &expected, &i)? {
        return Err(format!("{} is not equivalent to l' < L_overflow", i.display(&p.store)));
    }
    timed(Duration::from_secs(2), start, format!("interpolant {}", i.display(&p.store)))
}

const PER_FAMILY: usize = 500;

/// Oracle bound and configuration for a generated problem.
fn oracle_for(p: &Problem) -> Verdict {
    let base_only = p.schemas.is_empty() && p.sig.extension_functions.is_empty();
    if base_only && p.sig.theory == TheoryId::Slat {
        let cfg = OracleConfig::new(OracleMode::FreeAlgebra, 1).expect("valid bound");
        let free = finite_model_oracle(p, &cfg).verdict;
        let cfg = OracleConfig::new(OracleMode::FiniteModels, 4).expect("valid bound").with_node_budget(200_000);
        let models = finite_model_oracle(p, &cfg).verdict;
        if free != Verdict::Unknown && models != Verdict::Unknown && free != models {
            panic!("oracle modes disagree");
        }
        return if free == Verdict::Unknown { models } else { free };
    }
    let size = if base_only { 5 } else { 3 };
    let cfg = OracleConfig::new(OracleMode::FiniteModels, size)
        .expect("valid bound")
        .with_node_budget(300_000)
        .with_timeout(Duration::from_secs(2));
    finite_model_oracle(p, &cfg).verdict
}

struct SuiteStats {
    unsat: usize,
    sat: usize,
    compared: usize,
    unknown: usize,
    soundness: Vec<String>,
    agreement: Vec<String>,
    elapsed: Duration,
}

fn random_suite(seed: u64) -> SuiteStats {
    let start = Instant::now();
    let mut stats = SuiteStats {
        unsat: 0,
        sat: 0,
        compared: 0,
        unknown: 0,
        soundness: Vec::new(),
        agreement: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (k, family) in Family::ALL.into_iter().enumerate() {
        let mut r = rng(seed.wrapping_add(k as u64));
        for _ in 0..PER_FAMILY {
            let (text, file) = random_problem(&mut r, family);
            let mut p = file.problem;
            let oracle = oracle_for(&p);
            let verdict = match hierarchical_interpolant(&mut p) {
                Err(e) => {
                    stats.soundness.push(format!("{}\n  error: {}", text, e));
                    continue;
                }
                Ok(Answer::Sat) => {
                    stats.sat += 1;
                    Verdict::Sat
                }
                Ok(Answer::Unsat(i)) => {
                    stats.unsat += 1;
                    match verify_interpolant(&mut p, &i.formula) {
                        Ok(v) if v.is_ok() => {}
                        Ok(v) => stats.soundness.push(format!("{}\n  {}: {:?}", text, i.formula.display(&p.store), v)),
                        Err(e) => stats.soundness.push(format!("{}\n  verify error: {}", text, e)),
                    }
                    Verdict::Unsat
                }
            };
            match oracle {
                Verdict::Unknown => stats.unknown += 1,
                o => {
                    stats.compared += 1;
                    if o != verdict {
                        stats.agreement.push(format!("{}\n  solver {:?}, oracle {:?}", text, verdict, o));
                    }
                }
            }
        }
    }
    stats.elapsed = start.elapsed();
    stats
}

fn soundness(stats: &SuiteStats) -> Outcome {
    let detail = format!(
        "{} problems, {} unsat verified, {} sat, {:?}",
        3 * PER_FAMILY,
        stats.unsat,
        stats.sat,
        stats.elapsed
    );
    if let Some(first) = stats.soundness.first() {
        return Err(format!("{}; {} failures, first:\n{}", detail, stats.soundness.len(), first));
    }
    if stats.elapsed > Duration::from_secs(300) {
        return Err(format!("{} exceeds 5 min", detail));
    }
    Ok(detail)
}

fn agreement(stats: &SuiteStats) -> Outcome {
    let detail = format!("{} compared, {} unknown", stats.compared, stats.unknown);
    match stats.agreement.first() {
        Some(first) => Err(format!("{}; {} disagreements, first:\n{}", detail, stats.agreement.len(), first)),
        None if stats.compared == 0 => Err("no decidable cases".into()),
        None => Ok(detail),
    }
}

fn quadratic_instances() -> Outcome {
    let mut ratios = Vec::new();
    for n in [10usize, 20, 40, 80] {
        let f = parse_problem(&scaling_problem_text(n)).map_err(|e| e.to_string())?;
        let count = instance_count(&f.problem);
        ratios.push((n, count, count as f64 / (n * n) as f64));
    }
    let max = ratios.iter().map(|r| r.2).fold(f64::MIN, f64::max);
    let min = ratios.iter().map(|r| r.2).fold(f64::MAX, f64::min);
    let shown: Vec<String> = ratios.iter().map(|(n, c, r)| format!("n={} |K0∧Con0|={} C={:.3}", n, c, r)).collect();
    if min > 0.0 && max <= 2.0 * min {
        Ok(shown.join(", "))
    } else {
        Err(format!("ratios drift: {}", shown.join(", ")))
    }
}

/// Independent check of a Farkas combination.
fn farkas_ok(inputs: &[(LinExpr, bool)], multipliers: &[(usize, Q)]) -> bool {
    let mut coeffs: BTreeMap<_, Q> = BTreeMap::new();
    let mut constant = Q::zero();
    let mut strict = false;
    for (i, m) in multipliers {
        if m.is_negative() {
            return false;
        }
        if m.is_zero() {
            continue;
        }
        let (e, s) = &inputs[*i];
        for (x, c) in &e.coeffs {
            *coeffs.entry(*x).or_insert_with(Q::zero) += c * m;
        }
        constant += &e.constant * m;
        strict |= *s;
    }
    coeffs.values().all(|c| c.is_zero()) && (constant.is_positive() || (strict && constant.is_zero()))
}

fn farkas_certificates(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x5eed);
    let (mut unsat, mut sat) = (0, 0);
    for k in 0..200 {
        let mut store = hinterp::kernel::TermStore::new();
        let vars = 2 + k % 3;
        let m = 3 + k % 6;
        let sys = random_system(&mut r, &mut store, vars, m);
        match fourier_motzkin(&sys, &[]) {
            FmResult::Unsat(cert) => {
                unsat += 1;
                if !farkas_ok(&sys, &cert.multipliers) {
                    return Err(format!("system {} has an invalid certificate", k));
                }
            }
            FmResult::Sat(point) => {
                sat += 1;
                for (e, s) in &sys {
                    let v = e.coeffs.iter().fold(e.constant.clone(), |acc, (x, c)| {
                        acc + c * point.get(x).cloned().unwrap_or_else(Q::zero)
                    });
                    if (*s && !v.is_negative()) || (!*s && v.is_positive()) {
                        return Err(format!("system {} sample point violates a literal", k));
                    }
                }
            }
        }
    }
    Ok(format!("{} unsat certificates and {} sample points checked", unsat, sat))
}

fn eval_pform(f: &PForm, a: &[bool]) -> bool {
    match f {
        PForm::True => true,
        PForm::False => false,
        PForm::Lit(l) => a[l.var() as usize] == l.is_pos(),
        PForm::And(xs) => xs.iter().all(|x| eval_pform(x, a)),
        PForm::Or(xs) => xs.iter().any(|x| eval_pform(x, a)),
    }
}

fn propositional(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0xc4f);
    for k in 0..200 {
        let cnf = random_unsat_cnf(&mut r, 16);
        let a_end = cnf.a_end;
        let priority = move |v: u32| if v < a_end { 0 } else { 1 };
        let Refutation::Unsat(proof) = ordered_resolution(&cnf.clauses, cnf.num_vars, &priority) else {
            return Err(format!("cnf {} reported satisfiable", k));
        };
        if !proof.check(&cnf.clauses) {
            return Err(format!("cnf {}: invalid proof", k));
        }
        let itp = prop_interpolant(&proof).map_err(|e| e.to_string())?;
        let mut vars = BTreeSet::new();
        itp.vars(&mut vars);
        let a_vars: BTreeSet<u32> = cnf.clauses.iter().filter(|c| c.1 == Part::A).flat_map(|c| c.0.iter().map(|l| l.var())).collect();
        let b_vars: BTreeSet<u32> = cnf.clauses.iter().filter(|c| c.1 == Part::B).flat_map(|c| c.0.iter().map(|l| l.var())).collect();
        if !vars.iter().all(|v| a_vars.contains(v) && b_vars.contains(v)) {
            return Err(format!("cnf {}: interpolant uses a non-shared variable", k));
        }
        for asg in all_assignments(cnf.num_vars) {
            let holds = |part: Part| {
                cnf.clauses.iter().filter(|c| c.1 == part).all(|(c, _)| c.iter().any(|l| asg[l.var() as usize] == l.is_pos()))
            };
            let i = eval_pform(&itp, &asg);
            if holds(Part::A) && !i {
                return Err(format!("cnf {}: A does not imply the interpolant", k));
            }
            if holds(Part::B) && i {
                return Err(format!("cnf {}: interpolant is consistent with B", k));
            }
        }
    }
    Ok("200 refutations, interpolants checked by truth table".into())
}

fn strong_shape(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x57);
    let (mut found, mut tried) = (0, 0);
    while found < 100 {
        tried += 1;
        if tried > 20_000 {
            return Err(format!("only {} unsat instances in {} tries", found, tried));
        }
        let (text, file) = random_problem(&mut r, Family::Slat);
        let mut p = file.problem;
        p.options.strong = true;
        match hierarchical_interpolant(&mut p) {
            Ok(Answer::Sat) => {}
            Ok(Answer::Unsat(i)) => {
                found += 1;
                if !i.formula.is_literal_conjunction() {
                    return Err(format!("{}\n  interpolant {} is not a conjunction", text, i.formula.display(&p.store)));
                }
            }
            Err(e) => return Err(format!("{}\n  error: {}", text, e)),
        }
    }
    Ok(format!("100 unsat instances ({} generated), all conjunctions of literals", tried))
}

fn main() {
    let seed = seed_from_env(20_261_015);
    println!("acceptance suite (seed {})", seed);
    let stats = random_suite(seed);
    let results: Vec<(&str, Outcome)> = vec![
        ("semilattice SGc example", example_semilattice()),
        ("chemistry terminology example", example_chemistry()),
        ("water level controller example", example_water()),
        ("interpolant soundness suite", soundness(&stats)),
        ("oracle agreement", agreement(&stats)),
        ("quadratic instantiation bound", quadratic_instances()),
        ("Farkas certificate validity", farkas_certificates(seed)),
        ("propositional interpolation", propositional(seed)),
        ("strong-mode shape", strong_shape(seed)),
    ];
    let mut failed = 0;
    for (k, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("[PASS] {}. {}: {}", k + 1, name, detail),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {}: {}", k + 1, name, detail);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
