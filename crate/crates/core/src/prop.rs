//! Propositional clauses: DPLL refutation with resolution-proof logging,
//! Horn unit propagation, Davis-Putnam variable elimination and
//! interpolant extraction from refutations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Propositional literal: variable index plus polarity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PLit(u32);

impl PLit {
    pub fn new(var: u32, positive: bool) -> Self {
        PLit(var << 1 | u32::from(!positive))
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, false)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Self {
        PLit(self.0 ^ 1)
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var() as usize] == self.is_pos()
    }
}

pub type Clause = Vec<PLit>;

/// Sorts and deduplicates; `None` for tautologies.
pub fn normalize_clause(mut c: Clause) -> Option<Clause> {
    c.sort();
    c.dedup();
    if c.windows(2).any(|w| w[0].var() == w[1].var()) {
        None
    } else {
        Some(c)
    }
}

pub fn clause_holds(c: &[PLit], assignment: &[bool]) -> bool {
    c.iter().any(|l| l.eval(assignment))
}

/// Partition label of an input clause.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Part {
    A,
    B,
}

/// Node of a resolution DAG.
#[derive(Clone, Debug)]
pub enum ProofNode {
    Leaf { clause: Clause, part: Part, input: usize },
    Resolve { left: usize, right: usize, pivot: u32, clause: Clause },
}

/// Resolution refutation; `root` derives the empty clause.
#[derive(Clone, Debug)]
pub struct Proof {
    pub nodes: Vec<ProofNode>,
    pub root: usize,
}

impl Proof {
    pub fn clause(&self, i: usize) -> &Clause {
        match &self.nodes[i] {
            ProofNode::Leaf { clause, .. } | ProofNode::Resolve { clause, .. } => clause,
        }
    }

    /// Re-checks every step against the inputs.
    pub fn check(&self, inputs: &[(Clause, Part)]) -> bool {
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                ProofNode::Leaf { clause, part, input } => {
                    let Some((c, p)) = inputs.get(*input) else { return false };
                    if p != part || normalize_clause(c.clone()).as_ref() != Some(clause) {
                        return false;
                    }
                }
                ProofNode::Resolve { left, right, pivot, clause } => {
                    if *left >= i || *right >= i {
                        return false;
                    }
                    let l = self.clause(*left);
                    let r = self.clause(*right);
                    if !l.contains(&PLit::pos(*pivot)) || !r.contains(&PLit::neg(*pivot)) {
                        return false;
                    }
                    let res: Clause = l
                        .iter()
                        .chain(r.iter())
                        .copied()
                        .filter(|x| x.var() != *pivot)
                        .collect();
                    match normalize_clause(res) {
                        Some(c) if &c == clause => {}
                        _ => return false,
                    }
                }
            }
        }
        self.clause(self.root).is_empty()
    }
}

/// Outcome of a refutation attempt.
#[derive(Clone, Debug)]
pub enum Refutation {
    Sat(Vec<bool>),
    Unsat(Proof),
}

struct Dpll<'a> {
    clauses: Vec<Clause>,
    parts: Vec<Part>,
    inputs: Vec<usize>,
    priority: &'a dyn Fn(u32) -> u32,
    assign: Vec<Option<bool>>,
    nodes: Vec<ProofNode>,
    leaf_of: HashMap<usize, usize>,
}

enum Status {
    Falsified(usize),
    Unit(PLit),
    Open,
    Satisfied,
}

impl Dpll<'_> {
    fn status(&self) -> Status {
        let mut unit = None;
        let mut open = false;
        for (ci, c) in self.clauses.iter().enumerate() {
            let mut sat = false;
            let mut free = None;
            let mut nfree = 0;
            for &l in c {
                match self.assign[l.var() as usize] {
                    Some(v) if v == l.is_pos() => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        nfree += 1;
                        free = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match nfree {
                0 => return Status::Falsified(ci),
                1 => {
                    if unit.is_none() {
                        unit = free;
                    }
                }
                _ => open = true,
            }
        }
        match unit {
            Some(l) => Status::Unit(l),
            None if open => Status::Open,
            None => Status::Satisfied,
        }
    }

    fn leaf(&mut self, ci: usize) -> usize {
        if let Some(&n) = self.leaf_of.get(&ci) {
            return n;
        }
        self.nodes.push(ProofNode::Leaf {
            clause: self.clauses[ci].clone(),
            part: self.parts[ci],
            input: self.inputs[ci],
        });
        let n = self.nodes.len() - 1;
        self.leaf_of.insert(ci, n);
        n
    }

    fn pick(&self) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        for c in &self.clauses {
            if c.iter().any(|l| self.assign[l.var() as usize] == Some(l.is_pos())) {
                continue;
            }
            for l in c {
                if self.assign[l.var() as usize].is_none() {
                    let key = ((self.priority)(l.var()), l.var());
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        best.map(|b| b.1)
    }

    /// `Ok` on a model, `Err(node)` with a clause falsified by the current
    /// assignment otherwise.
    fn search(&mut self) -> std::result::Result<(), usize> {
        let (var, first) = match self.status() {
            Status::Falsified(ci) => return Err(self.leaf(ci)),
            Status::Satisfied => return Ok(()),
            Status::Unit(l) => (l.var(), l.is_pos()),
            Status::Open => match self.pick() {
                Some(v) => (v, true),
                None => return Ok(()),
            },
        };
        let v = var as usize;
        self.assign[v] = Some(first);
        let n1 = match self.search() {
            Ok(()) => return Ok(()),
            Err(n) => n,
        };
        if !self.nodes_clause(n1).iter().any(|l| l.var() == var) {
            self.assign[v] = None;
            return Err(n1);
        }
        self.assign[v] = Some(!first);
        let n2 = match self.search() {
            Ok(()) => return Ok(()),
            Err(n) => n,
        };
        self.assign[v] = None;
        if !self.nodes_clause(n2).iter().any(|l| l.var() == var) {
            return Err(n2);
        }
        // n1 holds the literal falsified by `first`, n2 the opposite one.
        let (pos_node, neg_node) = if first { (n2, n1) } else { (n1, n2) };
        let res: Clause = self
            .nodes_clause(pos_node)
            .iter()
            .chain(self.nodes_clause(neg_node).iter())
            .copied()
            .filter(|l| l.var() != var)
            .collect();
        let clause = normalize_clause(res).expect("resolvent of falsified clauses is not tautological");
        self.nodes.push(ProofNode::Resolve { left: pos_node, right: neg_node, pivot: var, clause });
        Err(self.nodes.len() - 1)
    }

    fn nodes_clause(&self, n: usize) -> &Clause {
        match &self.nodes[n] {
            ProofNode::Leaf { clause, .. } | ProofNode::Resolve { clause, .. } => clause,
        }
    }
}

/// Decides a partitioned clause set. Unsatisfiable runs return a tree
/// resolution proof; `priority` orders decision variables (lower first).
pub fn ordered_resolution(
    inputs: &[(Clause, Part)],
    num_vars: usize,
    priority: &dyn Fn(u32) -> u32,
) -> Refutation {
    let mut clauses = Vec::new();
    let mut parts = Vec::new();
    let mut idx = Vec::new();
    let mut nv = num_vars;
    for (i, (c, p)) in inputs.iter().enumerate() {
        if let Some(c) = normalize_clause(c.clone()) {
            for l in &c {
                nv = nv.max(l.var() as usize + 1);
            }
            clauses.push(c);
            parts.push(*p);
            idx.push(i);
        }
    }
    let mut d = Dpll {
        clauses,
        parts,
        inputs: idx,
        priority,
        assign: vec![None; nv],
        nodes: Vec::new(),
        leaf_of: HashMap::new(),
    };
    match d.search() {
        Ok(()) => Refutation::Sat(d.assign.iter().map(|v| v.unwrap_or(false)).collect()),
        Err(root) => Refutation::Unsat(Proof { nodes: d.nodes, root }),
    }
}

/// Plain satisfiability check returning a model.
pub fn solve(clauses: &[Clause], num_vars: usize) -> Option<Vec<bool>> {
    let inputs: Vec<(Clause, Part)> = clauses.iter().map(|c| (c.clone(), Part::A)).collect();
    match ordered_resolution(&inputs, num_vars, &|v| v) {
        Refutation::Sat(m) => Some(m),
        Refutation::Unsat(_) => None,
    }
}

/// Result of Horn unit propagation.
#[derive(Clone, Debug, Default)]
pub struct HornClosure {
    /// Variables derived true, with the index of the clause that fired.
    pub derived: BTreeMap<u32, usize>,
    /// Index of a clause with no positive literal whose body became true.
    pub conflict: Option<usize>,
}

impl HornClosure {
    pub fn holds(&self, v: u32) -> bool {
        self.derived.contains_key(&v)
    }
}

/// Saturates Horn clauses by unit propagation in linear time.
pub fn horn_saturate(clauses: &[Clause]) -> Result<HornClosure> {
    let mut watch: HashMap<u32, Vec<usize>> = HashMap::new();
    let mut missing = Vec::with_capacity(clauses.len());
    let mut head = Vec::with_capacity(clauses.len());
    for (i, c) in clauses.iter().enumerate() {
        let pos: Vec<PLit> = c.iter().copied().filter(|l| l.is_pos()).collect();
        if pos.len() > 1 {
            return Err(Error::NotHorn);
        }
        let body: BTreeSet<u32> = c.iter().filter(|l| !l.is_pos()).map(|l| l.var()).collect();
        for &v in &body {
            watch.entry(v).or_default().push(i);
        }
        missing.push(body.len());
        head.push(pos.first().map(|l| l.var()));
    }
    let mut out = HornClosure::default();
    let mut queue = Vec::new();
    for i in 0..clauses.len() {
        if missing[i] == 0 {
            match head[i] {
                Some(v) => {
                    if let std::collections::btree_map::Entry::Vacant(e) = out.derived.entry(v) {
                        e.insert(i);
                        queue.push(v);
                    }
                }
                None => {
                    out.conflict.get_or_insert(i);
                }
            }
        }
    }
    while let Some(v) = queue.pop() {
        if let Some(ws) = watch.get(&v) {
            for &i in ws {
                missing[i] -= 1;
                if missing[i] == 0 {
                    match head[i] {
                        Some(h) => {
                            if let std::collections::btree_map::Entry::Vacant(e) = out.derived.entry(h) {
                                e.insert(i);
                                queue.push(h);
                            }
                        }
                        None => {
                            out.conflict.get_or_insert(i);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn subsumes(a: &[PLit], b: &[PLit]) -> bool {
    a.len() <= b.len() && a.iter().all(|l| b.binary_search(l).is_ok())
}

/// Drops clauses subsumed by another one.
pub fn reduce_subsumed(clauses: Vec<Clause>) -> Vec<Clause> {
    let mut cs: Vec<Clause> = clauses.into_iter().filter_map(normalize_clause).collect();
    cs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cs.dedup();
    let mut out: Vec<Clause> = Vec::new();
    for c in cs {
        if !out.iter().any(|d| subsumes(d, &c)) {
            out.push(c);
        }
    }
    out
}

/// Davis-Putnam elimination of `vars`; the result is equivalent to the
/// existential projection onto the remaining variables.
pub fn eliminate(clauses: Vec<Clause>, vars: &[u32]) -> Vec<Clause> {
    let mut cs = reduce_subsumed(clauses);
    for &v in vars {
        let (with, without): (Vec<Clause>, Vec<Clause>) =
            cs.into_iter().partition(|c| c.iter().any(|l| l.var() == v));
        let pos: Vec<&Clause> = with.iter().filter(|c| c.contains(&PLit::pos(v))).collect();
        let neg: Vec<&Clause> = with.iter().filter(|c| c.contains(&PLit::neg(v))).collect();
        let mut next = without;
        for p in &pos {
            for n in &neg {
                let r: Clause = p.iter().chain(n.iter()).copied().filter(|l| l.var() != v).collect();
                if let Some(r) = normalize_clause(r) {
                    next.push(r);
                }
            }
        }
        cs = reduce_subsumed(next);
        if cs.iter().any(|c| c.is_empty()) {
            return vec![Vec::new()];
        }
    }
    cs
}

/// Propositional formula used for interpolants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PForm {
    True,
    False,
    Lit(PLit),
    And(Vec<PForm>),
    Or(Vec<PForm>),
}

impl PForm {
    pub fn and(parts: Vec<PForm>) -> PForm {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PForm::True => {}
                PForm::False => return PForm::False,
                PForm::And(xs) => out.extend(xs),
                x => {
                    if !out.contains(&x) {
                        out.push(x)
                    }
                }
            }
        }
        match out.len() {
            0 => PForm::True,
            1 => out.pop().unwrap(),
            _ => PForm::And(out),
        }
    }

    pub fn or(parts: Vec<PForm>) -> PForm {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PForm::False => {}
                PForm::True => return PForm::True,
                PForm::Or(xs) => out.extend(xs),
                x => {
                    if !out.contains(&x) {
                        out.push(x)
                    }
                }
            }
        }
        match out.len() {
            0 => PForm::False,
            1 => out.pop().unwrap(),
            _ => PForm::Or(out),
        }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            PForm::True => true,
            PForm::False => false,
            PForm::Lit(l) => l.eval(assignment),
            PForm::And(xs) => xs.iter().all(|x| x.eval(assignment)),
            PForm::Or(xs) => xs.iter().any(|x| x.eval(assignment)),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            PForm::Lit(l) => {
                out.insert(l.var());
            }
            PForm::And(xs) | PForm::Or(xs) => xs.iter().for_each(|x| x.vars(out)),
            _ => {}
        }
    }
}

/// McMillan-style interpolant of a refutation: A-leaves contribute their
/// shared literals, B-leaves `true`; A-local pivots join with `or`, all
/// others with `and`.
pub fn prop_interpolant(proof: &Proof) -> Result<PForm> {
    if !proof.clause(proof.root).is_empty() {
        return Err(Error::NoProof);
    }
    let mut a_vars = BTreeSet::new();
    let mut b_vars = BTreeSet::new();
    for n in &proof.nodes {
        if let ProofNode::Leaf { clause, part, .. } = n {
            let set = if *part == Part::A { &mut a_vars } else { &mut b_vars };
            set.extend(clause.iter().map(|l| l.var()));
        }
    }
    let mut label: Vec<PForm> = Vec::with_capacity(proof.nodes.len());
    for n in &proof.nodes {
        let f = match n {
            ProofNode::Leaf { clause, part: Part::A, .. } => PForm::or(
                clause
                    .iter()
                    .filter(|l| b_vars.contains(&l.var()))
                    .map(|l| PForm::Lit(*l))
                    .collect(),
            ),
            ProofNode::Leaf { part: Part::B, .. } => PForm::True,
            ProofNode::Resolve { left, right, pivot, .. } => {
                let (l, r) = (label[*left].clone(), label[*right].clone());
                if a_vars.contains(pivot) && !b_vars.contains(pivot) {
                    PForm::or(vec![l, r])
                } else {
                    PForm::and(vec![l, r])
                }
            }
        };
        label.push(f);
    }
    Ok(label.swap_remove(proof.root))
}

/// Enumerates all assignments of `n` variables (n <= 20).
pub fn all_assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..(1u64 << n)).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(xs: &[i32]) -> Clause {
        xs.iter().map(|&x| PLit::new(x.unsigned_abs() - 1, x > 0)).collect()
    }

    #[test]
    fn trivial_refutation() {
        let inputs = vec![(cl(&[1]), Part::A), (cl(&[-1]), Part::B)];
        let Refutation::Unsat(p) = ordered_resolution(&inputs, 1, &|v| v) else { panic!() };
        assert!(p.check(&inputs));
        assert_eq!(prop_interpolant(&p).unwrap(), PForm::Lit(PLit::pos(0)));
    }

    #[test]
    fn chain_interpolant() {
        // A = {P_a, ¬P_a ∨ P_c}, B = {¬P_c}
        let inputs = vec![(cl(&[1]), Part::A), (cl(&[-1, 2]), Part::A), (cl(&[-2]), Part::B)];
        let Refutation::Unsat(p) = ordered_resolution(&inputs, 2, &|v| v) else { panic!() };
        assert!(p.check(&inputs));
        let i = prop_interpolant(&p).unwrap();
        assert_eq!(i, PForm::Lit(PLit::pos(1)));
    }

    #[test]
    fn horn_units() {
        let cs = vec![cl(&[1]), cl(&[-1, 2]), cl(&[-1, 3])];
        let h = horn_saturate(&cs).unwrap();
        assert!(h.holds(1) && h.holds(2));
        assert!(h.conflict.is_none());
        assert!(horn_saturate(&[cl(&[1, 2])]).is_err());
        assert!(horn_saturate(&[]).unwrap().derived.is_empty());
    }

    #[test]
    fn elimination_projects() {
        // x1 -> x2, x2 -> x3 ; eliminating x2 leaves x1 -> x3
        let cs = vec![cl(&[-1, 2]), cl(&[-2, 3])];
        assert_eq!(eliminate(cs, &[1]), vec![cl(&[-1, 3])]);
    }
}
