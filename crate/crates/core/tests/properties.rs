use proptest::prelude::*;

use hinterp::base::make_backend;
use hinterp::driver::{hierarchical_interpolant, Answer};
use hinterp::kernel::{Atom, Literal, Rel, TermId, TermStore, TheoryId};
use hinterp::lattice::meet_of;
use hinterp::preprocess::{flatten_purify, is_fresh_constant, unpurify_atom, FreshNames};
use hinterp::problem::{parse_problem, print_problem};
use hinterp::testgen::{random_problem, rng, Family};

fn family(k: usize) -> Family {
    Family::ALL[k % Family::ALL.len()]
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn print_then_parse_is_stable(seed in any::<u64>(), k in 0usize..3) {
        let (_, file) = random_problem(&mut rng(seed), family(k));
        let printed = print_problem(&file);
        let again = parse_problem(&printed).expect("printed problem parses");
        prop_assert_eq!(print_problem(&again), printed);
    }

    #[test]
    fn purification_round_trips(seed in any::<u64>(), k in 0usize..3) {
        let (_, file) = random_problem(&mut rng(seed), family(k));
        let mut p = file.problem;
        let mut fresh = FreshNames::default();
        for side in [p.a.clone(), p.b.clone()] {
            let (base, mut defs) = flatten_purify(&mut p.store, &mut p.sig, &mut fresh, &side);
            // Flattened arguments are named by equations rather than definitions.
            for l in base.lits() {
                let c = l.atom.lhs;
                if l.pos && l.atom.rel == Rel::Eq && is_fresh_constant(&p.store, c) && defs.term_for(c).is_none() {
                    defs.push(c, l.atom.rhs);
                }
            }
            let mut back = Vec::new();
            for l in base.lits() {
                let mut fs = Default::default();
                p.store.functions_of(l.atom.lhs, &mut fs);
                p.store.functions_of(l.atom.rhs, &mut fs);
                prop_assert!(fs.iter().all(|f| !p.sig.is_extension(*f)));
                let atom = unpurify_atom(&mut p.store, &l.atom, &[&defs]).expect("no stray constants");
                back.push(Literal { pos: l.pos, atom });
            }
            for l in side.lits() {
                prop_assert!(back.contains(l), "{} lost", l.display(&p.store));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn interpolants_use_no_fresh_constants(seed in any::<u64>(), k in 0usize..3, strong in any::<bool>()) {
        let (_, file) = random_problem(&mut rng(seed), family(k));
        let mut p = file.problem;
        p.options.strong = strong;
        if let Ok(Answer::Unsat(i)) = hierarchical_interpolant(&mut p) {
            let mut lits = Vec::new();
            i.formula.literals(&mut lits);
            for l in lits {
                let mut cs = Default::default();
                l.atom.constants(&p.store, &mut cs);
                for c in cs {
                    prop_assert!(!is_fresh_constant(&p.store, c));
                    prop_assert!(p.sig.owner(c).side().is_none(), "{} is not shared", p.store.display(c));
                }
            }
        }
    }

    #[test]
    fn strong_and_default_modes_agree(seed in any::<u64>()) {
        let (_, file) = random_problem(&mut rng(seed), Family::Slat);
        let mut weak = file.problem.clone();
        let mut strong = file.problem;
        strong.options.strong = true;
        let verdict = |a: hinterp::Result<Answer>| a.map(|x| matches!(x, Answer::Sat)).ok();
        let (w, s) = (verdict(hierarchical_interpolant(&mut weak)), verdict(hierarchical_interpolant(&mut strong)));
        if let (Some(w), Some(s)) = (w, s) {
            prop_assert_eq!(w, s);
        }
    }
}

/// Random base terms over four constants; meets only for lattices.
fn base_term(store: &mut TermStore, theory: TheoryId, code: &[u8]) -> TermId {
    let cs: Vec<TermId> = (0..4).map(|i| store.constant(&format!("k{}", i))).collect();
    let parts: Vec<TermId> = code.iter().map(|c| cs[*c as usize % 4]).collect();
    if theory.is_lattice() && parts.len() > 1 {
        meet_of(store, &parts)
    } else {
        parts[0]
    }
}

fn theory(k: usize) -> TheoryId {
    [TheoryId::Eq, TheoryId::Poset, TheoryId::Slat, TheoryId::Dlat][k % 4]
}

type AtomShape = (Vec<u8>, Vec<u8>, bool);

fn atom_shape() -> impl Strategy<Value = AtomShape> {
    (prop::collection::vec(0u8..4, 1..3), prop::collection::vec(0u8..4, 1..3), any::<bool>())
}

fn build(store: &mut TermStore, theory: TheoryId, shape: &AtomShape) -> Atom {
    let rel = if theory == TheoryId::Eq || shape.2 { Rel::Eq } else { Rel::Leq };
    let l = base_term(store, theory, &shape.0);
    let r = base_term(store, theory, &shape.1);
    Atom::new(store, rel, l, r)
}

proptest! {
    #![proptest_config(config(256))]

    /// A conjunction of atoms entails a disjunction of atoms only if it
    /// entails one of them.
    #[test]
    fn base_theories_are_convex(
        k in 0usize..4,
        facts in prop::collection::vec(atom_shape(), 0..5),
        goals in (atom_shape(), atom_shape()),
    ) {
        let theory = theory(k);
        let backend = make_backend(theory);
        let mut store = TermStore::new();
        let facts: Vec<Atom> = facts.iter().map(|s| build(&mut store, theory, s)).collect();
        let g1 = build(&mut store, theory, &goals.0);
        let g2 = build(&mut store, theory, &goals.1);
        let mut lits: Vec<Literal> = facts.iter().map(|a| Literal::pos(*a)).collect();
        lits.push(Literal::neg(g1));
        lits.push(Literal::neg(g2));
        if !backend.check_sat(&mut store, &lits).unwrap() {
            let e1 = backend.entails(&mut store, &facts, &g1).unwrap();
            let e2 = backend.entails(&mut store, &facts, &g2).unwrap();
            prop_assert!(e1 || e2);
        }
    }
}
