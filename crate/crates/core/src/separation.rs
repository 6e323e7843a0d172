//! Separation of mixed instances: clauses whose premises are entailed are
//! discharged, and mixed ones are split through fresh shared constants
//! naming `f(t̄)` for separating terms `t̄`.

use std::collections::HashMap;

use crate::axioms::{clause_origin, congruence_pair, GroundHornClause, Origin, Source};
use crate::base::{Backend, Vocab};
use crate::error::{Error, Result};
use crate::interp::{sat_with_rules, ClauseSide, HornRule};
use crate::kernel::{Atom, Literal, Ownership, Signature, TermId, TermStore};
use crate::preprocess::{DefSide, Definition, DefinitionSet, FreshNames};

/// Working state of the separation loop.
#[derive(Clone, Debug)]
pub struct SeparationState {
    /// Clauses not yet discharged.
    pub h: Vec<GroundHornClause>,
    /// Discharged clauses, all pure.
    pub h_sep: Vec<GroundHornClause>,
    /// Conclusions of discharged clauses, per side.
    pub delta_a: Vec<Atom>,
    pub delta_b: Vec<Atom>,
    /// Separating terms used so far.
    pub terms: Vec<TermId>,
    pub d_t: DefinitionSet,
    /// `f(t̄)` to its shared constant.
    pub registry: HashMap<TermId, TermId>,
    pub trace: Vec<String>,
}

impl SeparationState {
    pub fn new(h: Vec<GroundHornClause>) -> Self {
        SeparationState {
            h,
            h_sep: Vec::new(),
            delta_a: Vec::new(),
            delta_b: Vec::new(),
            terms: Vec::new(),
            d_t: DefinitionSet::new(DefSide::T),
            registry: HashMap::new(),
            trace: Vec::new(),
        }
    }

    fn delta(&self) -> Vec<Atom> {
        self.delta_a.iter().chain(self.delta_b.iter()).copied().collect()
    }

    fn discharge(&mut self, c: GroundHornClause) {
        match c.origin {
            Origin::BPure => self.delta_b.push(c.conclusion),
            _ => self.delta_a.push(c.conclusion),
        }
        self.h_sep.push(c);
    }
}

/// Everything the loop reads besides the clauses.
pub struct SeparationContext<'a> {
    pub backend: &'a dyn Backend,
    pub a0: &'a [Literal],
    pub b0: &'a [Literal],
    /// Purification definitions of both sides.
    pub defs: Vec<&'a DefinitionSet>,
    pub strong: bool,
}

/// Result of the separation step.
#[derive(Clone, Debug)]
pub enum SeparationOutcome {
    /// `A0 ∧ B0` is already inconsistent.
    BaseUnsat,
    Sat,
    Separated { a: ClauseSide, b: ClauseSide, d_t: DefinitionSet, trace: Vec<String> },
}

/// Shared vocabulary of the signature.
pub fn shared_vocab(sig: &Signature) -> Vocab {
    Vocab::new(sig.constants.iter().filter(|(_, o)| **o == Ownership::Shared).map(|(c, _)| *c))
}

/// First clause whose premises all follow from `facts`.
pub fn find_entailed_clause(
    backend: &dyn Backend,
    store: &mut TermStore,
    h: &[GroundHornClause],
    facts: &[Atom],
) -> Result<Option<usize>> {
    let mut e = backend.entailer(store, facts)?;
    'clauses: for (i, c) in h.iter().enumerate() {
        for p in &c.premises {
            if !e.entails(store, p)? {
                continue 'clauses;
            }
        }
        return Ok(Some(i));
    }
    Ok(None)
}

fn side_of(sig: &Signature, store: &TermStore, t: TermId) -> Ownership {
    let mut cs = std::collections::BTreeSet::new();
    store.constants_of(t, &mut cs);
    cs.into_iter().map(|c| sig.owner(c)).find(|o| *o != Ownership::Shared).unwrap_or(Ownership::Shared)
}

fn definition_of<'a>(defs: &[&'a DefinitionSet], d_t: &'a DefinitionSet, c: TermId) -> Option<Definition> {
    defs.iter()
        .copied()
        .chain(std::iter::once(d_t))
        .flat_map(|d| d.entries.iter())
        .find(|d| d.constant == c)
        .copied()
}

/// Splits a mixed clause `⋀ ci Ri di → c R d`, where `c` names `f(c̄)`,
/// into `⋀ ci Ri ti → c R c'` and `⋀ ti Ri di → c' R d` with
/// `c' ≈ f(t̄)` shared.
#[allow(clippy::too_many_arguments)]
pub fn split_mixed(
    ctx: &SeparationContext,
    store: &mut TermStore,
    sig: &mut Signature,
    fresh: &mut FreshNames,
    state: &mut SeparationState,
    c: &GroundHornClause,
    facts_a: &[Atom],
    facts_b: &[Atom],
    strong: bool,
) -> Result<(GroundHornClause, GroundHornClause)> {
    let not_sep = |store: &TermStore| Error::NotSeparable(c.display(store));
    let pivot = c.pivot.ok_or_else(|| not_sep(store))?;
    let def = definition_of(&ctx.defs, &state.d_t, c.conclusion.lhs).ok_or_else(|| not_sep(store))?;
    let args: Vec<TermId> = store.args(def.term).to_vec();
    if args.len() != c.premises.len() || c.premises.iter().zip(&args).any(|(p, a)| p.lhs != *a) {
        return Err(not_sep(store));
    }
    let f_side = side_of(sig, store, c.conclusion.lhs);
    let vocab = shared_vocab(sig);
    let mut ts = Vec::new();
    for p in &c.premises {
        let (x, y) = match f_side {
            Ownership::BLocal => (facts_b, facts_a),
            _ => (facts_a, facts_b),
        };
        let t = if vocab.is_shared(store, p.lhs) && p.lhs == p.rhs {
            p.lhs
        } else {
            ctx.backend.separating_term(store, &vocab, x, y, p, strong)?
        };
        ts.push(t);
    }
    let key = store.app(pivot.f, ts.clone());
    let shared = match state.registry.get(&key) {
        Some(&k) => k,
        None => {
            let k = fresh.separation(store);
            sig.set_owner(k, Ownership::Shared);
            state.registry.insert(key, k);
            let new_def = Definition { constant: k, term: key };
            let others: Vec<Definition> =
                ctx.defs.iter().copied().chain(std::iter::once(&state.d_t)).flat_map(|d| d.entries.iter().copied()).collect();
            state.d_t.push(k, key);
            for o in others {
                if let Some(cc) = congruence_pair(store, sig, &new_def, &o) {
                    state.h.push(cc);
                }
            }
            k
        }
    };
    state.terms.extend(ts.iter().copied());
    let rel = c.conclusion.rel;
    let mono_premises: Vec<Atom> = c.premises.iter().zip(&ts).map(|(p, t)| Atom { rel: p.rel, lhs: p.lhs, rhs: *t }).collect();
    let schema_premises: Vec<Atom> = c.premises.iter().zip(&ts).map(|(p, t)| Atom { rel: p.rel, lhs: *t, rhs: p.rhs }).collect();
    let mono_concl = Atom { rel, lhs: c.conclusion.lhs, rhs: shared };
    let schema_concl = Atom { rel, lhs: shared, rhs: c.conclusion.rhs };
    let half = |store: &TermStore, premises: Vec<Atom>, conclusion: Atom| GroundHornClause {
        origin: clause_origin(store, sig, &premises, &conclusion),
        premises,
        conclusion,
        source: Source::Split,
        defs: c.defs.clone(),
        pivot: None,
    };
    let mono = half(store, mono_premises, mono_concl);
    let schema = half(store, schema_premises, schema_concl);
    if mono.origin == Origin::Mixed || schema.origin == Origin::Mixed {
        return Err(not_sep(store));
    }
    Ok((mono, schema))
}

fn rules(cs: &[&GroundHornClause]) -> Vec<HornRule> {
    cs.iter().map(|c| HornRule { premises: c.premises.clone(), conclusion: c.conclusion }).collect()
}

/// Runs the separation loop to a fixpoint.
pub fn run_separation(
    ctx: &SeparationContext,
    store: &mut TermStore,
    sig: &mut Signature,
    fresh: &mut FreshNames,
    clauses: Vec<GroundHornClause>,
) -> Result<SeparationOutcome> {
    let backend = ctx.backend;
    let joint: Vec<Literal> = ctx.a0.iter().chain(ctx.b0.iter()).copied().collect();
    if !backend.check_sat(store, &joint)? {
        return Ok(SeparationOutcome::BaseUnsat);
    }
    let pos_a = backend.positive_part(store, ctx.a0)?;
    let pos_b = backend.positive_part(store, ctx.b0)?;
    let mut state = SeparationState::new(clauses);
    let mut strong = ctx.strong;
    loop {
        let facts_a: Vec<Atom> = pos_a.iter().chain(state.delta_a.iter()).copied().collect();
        let facts_b: Vec<Atom> = pos_b.iter().chain(state.delta_b.iter()).copied().collect();
        let mut pick = None;
        if strong {
            pick = find_side_entailed(backend, store, &state.h, &facts_a, &facts_b)?;
            if pick.is_none() {
                let all: Vec<Atom> = facts_a.iter().chain(facts_b.iter()).copied().collect();
                if find_entailed_clause(backend, store, &state.h, &all)?.is_some() {
                    state.trace.push("no side-entailed clause; continuing jointly".into());
                    strong = false;
                }
            }
        }
        if !strong {
            let all: Vec<Atom> = facts_a.iter().chain(facts_b.iter()).copied().collect();
            pick = find_entailed_clause(backend, store, &state.h, &all)?;
        }
        let Some(i) = pick else { break };
        let c = state.h.remove(i);
        if c.origin == Origin::Mixed {
            let split = match split_mixed(ctx, store, sig, fresh, &mut state, &c, &facts_a, &facts_b, strong) {
                Err(Error::NoSeparator(why)) if strong => {
                    state.trace.push(format!("no strong separator ({}); continuing jointly", why));
                    strong = false;
                    split_mixed(ctx, store, sig, fresh, &mut state, &c, &facts_a, &facts_b, false)
                }
                other => other,
            };
            let (mono, schema) = split?;
            state.trace.push(format!(
                "split {} into {} and {}",
                c.display(store),
                mono.display(store),
                schema.display(store)
            ));
            state.discharge(mono);
            state.discharge(schema);
        } else {
            state.trace.push(format!("discharge {}", c.display(store)));
            state.discharge(c);
        }
        let mut lits = joint.clone();
        lits.extend(state.delta().into_iter().map(Literal::pos));
        if !backend.check_sat(store, &lits)? {
            break;
        }
    }
    let mut lits = joint.clone();
    lits.extend(state.delta().into_iter().map(Literal::pos));
    if backend.check_sat(store, &lits)? {
        let everything: Vec<&GroundHornClause> = state.h_sep.iter().chain(state.h.iter()).collect();
        if sat_with_rules(backend, store, &joint, &rules(&everything))? {
            return Ok(SeparationOutcome::Sat);
        }
        if let Some(m) = state.h.iter().find(|c| c.origin == Origin::Mixed) {
            return Err(Error::NotSeparable(m.display(store)));
        }
    }
    let pick = |o: Origin| -> Vec<&GroundHornClause> {
        state.h_sep.iter().chain(state.h.iter().filter(|c| c.origin != Origin::Mixed)).filter(|c| c.origin == o).collect()
    };
    let a = ClauseSide { lits: ctx.a0.to_vec(), rules: rules(&pick(Origin::APure)) };
    let b = ClauseSide { lits: ctx.b0.to_vec(), rules: rules(&pick(Origin::BPure)) };
    Ok(SeparationOutcome::Separated { a, b, d_t: state.d_t, trace: state.trace })
}

/// First clause entailed by its own side: pure clauses by their side's
/// facts, mixed ones premise by premise across the partition.
fn find_side_entailed(
    backend: &dyn Backend,
    store: &mut TermStore,
    h: &[GroundHornClause],
    facts_a: &[Atom],
    facts_b: &[Atom],
) -> Result<Option<usize>> {
    let mut ea = backend.entailer(store, facts_a)?;
    let mut eb = backend.entailer(store, facts_b)?;
    let all: Vec<Atom> = facts_a.iter().chain(facts_b.iter()).copied().collect();
    let mut ej = backend.entailer(store, &all)?;
    'clauses: for (i, c) in h.iter().enumerate() {
        for p in &c.premises {
            let ok = match c.origin {
                Origin::APure => ea.entails(store, p)?,
                Origin::BPure => eb.entails(store, p)?,
                // Strong separators are checked side-wise when splitting.
                Origin::Mixed => ej.entails(store, p)?,
            };
            if !ok {
                continue 'clauses;
            }
        }
        return Ok(Some(i));
    }
    Ok(None)
}
