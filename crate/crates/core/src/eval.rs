//! Evaluation of formulas in finite algebras, and the family-level reading
//! of one-step axioms (`θ^t` membership and the Ax-subset test).

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::dsl::{Axiom, AxiomSet, Formula, OneStepAxiom};
use crate::error::{Error, Result};
use crate::frame::Algebra;
use crate::subset::{Family, Subset};

/// Largest value of `n × #variables` accepted by exhaustive assignment loops.
pub const MAX_ASSIGNMENT_BITS: usize = 16;

const PAR_THRESHOLD: u64 = 1 << 12;

/// Values for named variables, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(Vec<(String, Subset)>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: Subset) -> Assignment {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: Subset) {
        let name = name.into();
        match self.0.iter_mut().find(|(k, _)| *k == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<Subset> {
        self.0.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Subset)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn values_for(&self, vars: &[String]) -> Result<Vec<Subset>> {
        vars.iter()
            .map(|v| self.get(v).ok_or_else(|| Error::MissingBinding(v.clone())))
            .collect()
    }

    fn from_values(vars: &[String], vals: &[Subset]) -> Assignment {
        Assignment(vars.iter().cloned().zip(vals.iter().copied()).collect())
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &v.0)?;
        }
        map.end()
    }
}

/// A formula with variables resolved to positions in a value slice.
#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    Top,
    Not(Box<Node>),
    And(Vec<Node>),
    Box(Box<Node>),
}

fn compile(f: &Formula, vars: &[String]) -> Node {
    match f {
        Formula::Var(name) => Node::Var(vars.iter().position(|v| v == name).expect("var listed")),
        Formula::Top => Node::Top,
        Formula::Not(p) => Node::Not(Box::new(compile(p, vars))),
        Formula::And(ps) => Node::And(ps.iter().map(|p| compile(p, vars)).collect()),
        Formula::Box(p) => Node::Box(Box::new(compile(p, vars))),
    }
}

fn eval_node(node: &Node, vals: &[Subset], full: Subset, boxf: &impl Fn(Subset) -> Subset) -> Subset {
    match node {
        Node::Var(i) => vals[*i],
        Node::Top => full,
        Node::Not(p) => eval_node(p, vals, full, boxf) ^ full,
        Node::And(ps) => ps
            .iter()
            .fold(full, |acc, p| acc & eval_node(p, vals, full, boxf)),
        Node::Box(p) => boxf(eval_node(p, vals, full, boxf)),
    }
}

/// `θ̂(f)` in `(℘X, □)`.
pub fn eval_formula(alg: &Algebra, f: &Formula, v: &Assignment) -> Result<Subset> {
    let vars = f.free_vars();
    let vals = v.values_for(&vars)?;
    if let Some(bad) = vals.iter().find(|s| !s.fits(alg.n())) {
        return Err(Error::invalid(format!(
            "assigned value {} does not fit n={}",
            bad.0,
            alg.n()
        )));
    }
    let node = compile(f, &vars);
    Ok(eval_node(&node, &vals, alg.full(), &|a| alg.apply(a)))
}

fn check_space(n: usize, nvars: usize) -> Result<u64> {
    let bits = n * nvars;
    if bits > MAX_ASSIGNMENT_BITS {
        return Err(Error::cap(
            format!("assignment space for {nvars} variables over n={n}"),
            MAX_ASSIGNMENT_BITS,
            bits,
        ));
    }
    Ok(1u64 << bits)
}

/// Decodes assignment number `code`; the first variable is most significant.
fn decode(code: u64, n: usize, nvars: usize, out: &mut [Subset]) {
    let mask = (1u64 << n) - 1;
    for (i, slot) in out.iter_mut().enumerate() {
        let shift = n * (nvars - 1 - i);
        *slot = Subset(((code >> shift) & mask) as u32);
    }
}

/// The lexicographically least assignment (first free variable most
/// significant) under which `f` is not the top element, if any.
pub fn falsifying_assignment(alg: &Algebra, f: &Formula) -> Result<Option<Assignment>> {
    let vars = f.free_vars();
    let n = alg.n();
    let total = check_space(n, vars.len())?;
    let node = compile(f, &vars);
    let full = alg.full();
    let fails = |code: u64| {
        let mut vals = vec![Subset::EMPTY; vars.len()];
        decode(code, n, vars.len(), &mut vals);
        eval_node(&node, &vals, full, &|a| alg.apply(a)) != full
    };
    let hit = if total >= PAR_THRESHOLD {
        (0..total).into_par_iter().find_first(|&c| fails(c))
    } else {
        (0..total).find(|&c| fails(c))
    };
    Ok(hit.map(|code| {
        let mut vals = vec![Subset::EMPTY; vars.len()];
        decode(code, n, vars.len(), &mut vals);
        Assignment::from_values(&vars, &vals)
    }))
}

/// `θ̂(f) = 1` for every assignment.
pub fn validates(alg: &Algebra, f: &Formula) -> Result<bool> {
    Ok(falsifying_assignment(alg, f)?.is_none())
}

fn theta_node(node: &Node, w: &Family, vals: &[Subset], full: Subset) -> bool {
    match node {
        Node::Box(p) => w.contains(eval_node(p, vals, full, &|_| unreachable!("box-free"))),
        Node::Top => true,
        Node::Not(p) => !theta_node(p, w, vals, full),
        Node::And(ps) => ps.iter().all(|p| theta_node(p, w, vals, full)),
        Node::Var(_) => unreachable!("one-step formulas have no naked variables"),
    }
}

/// `W ∈ θ^t(ax)` for the given assignment.
pub fn theta_t_member(w: &Family, ax: &OneStepAxiom, v: &Assignment) -> Result<bool> {
    let f = ax.formula();
    let vars = f.free_vars();
    let vals = v.values_for(&vars)?;
    let n = w.n();
    if let Some(bad) = vals.iter().find(|s| !s.fits(n)) {
        return Err(Error::invalid(format!("assigned value {} does not fit n={n}", bad.0)));
    }
    Ok(theta_node(&compile(f, &vars), w, &vals, Subset::full(n)))
}

/// `W` is a φ-subset for every member of `axs`.
pub fn is_ax_subset(w: &Family, axs: &AxiomSet) -> Result<bool> {
    Ok(PreparedAxioms::new(axs, w.n())?.admits(w))
}

/// A one-step axiom flattened for repeated family tests: its distinct boxed
/// arguments, and their values under every assignment.
#[derive(Clone, Debug)]
struct PreparedOneStep {
    skeleton: Skeleton,
    rows: Vec<Vec<Subset>>,
}

#[derive(Clone, Debug)]
enum Skeleton {
    Atom(usize),
    Top,
    Not(Box<Skeleton>),
    And(Vec<Skeleton>),
}

impl Skeleton {
    fn build(node: &Node, atoms: &mut Vec<Node>) -> Skeleton {
        match node {
            Node::Box(p) => {
                atoms.push((**p).clone());
                Skeleton::Atom(atoms.len() - 1)
            }
            Node::Top => Skeleton::Top,
            Node::Not(p) => Skeleton::Not(Box::new(Skeleton::build(p, atoms))),
            Node::And(ps) => Skeleton::And(ps.iter().map(|p| Skeleton::build(p, atoms)).collect()),
            Node::Var(_) => unreachable!("one-step formulas have no naked variables"),
        }
    }

    fn holds(&self, truth: &impl Fn(usize) -> bool) -> bool {
        match self {
            Skeleton::Atom(i) => truth(*i),
            Skeleton::Top => true,
            Skeleton::Not(p) => !p.holds(truth),
            Skeleton::And(ps) => ps.iter().all(|p| p.holds(truth)),
        }
    }
}

#[derive(Clone, Debug)]
enum Prepared {
    OneStep(PreparedOneStep),
    Semantic(crate::dsl::FamilyPredicate),
}

/// An [`AxiomSet`] specialised to one ground-set size for fast repeated
/// Ax-subset tests.
#[derive(Clone, Debug)]
pub struct PreparedAxioms {
    n: usize,
    parts: Vec<Prepared>,
}

impl PreparedAxioms {
    pub fn new(axs: &AxiomSet, n: usize) -> Result<PreparedAxioms> {
        let full = Subset::full(n);
        let mut parts = Vec::new();
        for ax in axs.axioms() {
            match ax {
                Axiom::Semantic { predicate, .. } => parts.push(Prepared::Semantic(*predicate)),
                Axiom::OneStep { axiom, .. } => {
                    let f = axiom.formula();
                    let vars = f.free_vars();
                    let total = check_space(n, vars.len())?;
                    let mut atoms = Vec::new();
                    let skeleton = Skeleton::build(&compile(f, &vars), &mut atoms);
                    let mut vals = vec![Subset::EMPTY; vars.len()];
                    let mut rows: Vec<Vec<Subset>> = (0..total)
                        .map(|code| {
                            decode(code, n, vars.len(), &mut vals);
                            atoms
                                .iter()
                                .map(|a| eval_node(a, &vals, full, &|_| unreachable!()))
                                .collect()
                        })
                        .collect();
                    rows.sort_unstable();
                    rows.dedup();
                    parts.push(Prepared::OneStep(PreparedOneStep { skeleton, rows }));
                }
            }
        }
        Ok(PreparedAxioms { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn admits(&self, w: &Family) -> bool {
        debug_assert_eq!(w.n(), self.n);
        self.parts.iter().all(|p| match p {
            Prepared::Semantic(pred) => pred.holds(w),
            Prepared::OneStep(ps) => ps
                .rows
                .iter()
                .all(|row| ps.skeleton.holds(&|i| w.contains(row[i]))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::frame::Frame;

    fn example_alg() -> Algebra {
        Algebra::new(2, vec![Subset(2), Subset(1), Subset(0), Subset(1)]).unwrap()
    }

    fn axioms(list: &str, n: usize) -> AxiomSet {
        AxiomSet::parse_list(list, n).unwrap()
    }

    fn one_step(name: &str) -> OneStepAxiom {
        OneStepAxiom::new(crate::dsl::registry::formula_for(name).unwrap()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let alg = example_alg();
        let v0 = Assignment::new().with("v", Subset(0));
        assert_eq!(eval_formula(&alg, &parse("box v").unwrap(), &v0).unwrap(), Subset(2));
        assert_eq!(eval_formula(&alg, &Formula::Top, &Assignment::new()).unwrap(), Subset(3));
        let uv = Assignment::new().with("u", Subset(1)).with("v", Subset(0));
        let m = parse("@M").unwrap();
        assert_eq!(eval_formula(&alg, &m, &uv).unwrap(), Subset(1));
        assert!(matches!(
            eval_formula(&alg, &m, &v0),
            Err(Error::MissingBinding(name)) if name == "u"
        ));
    }

    #[test]
    fn validity_examples() {
        let alg = example_alg();
        let m = parse("@M").unwrap();
        let witness = falsifying_assignment(&alg, &m).unwrap().unwrap();
        assert_eq!(witness.get("u"), Some(Subset(1)));
        assert_eq!(witness.get("v"), Some(Subset(0)));
        assert_eq!(serde_json::to_string(&witness).unwrap(), r#"{"u":1,"v":0}"#);

        assert!(validates(&Algebra::identity(2), &parse("@T").unwrap()).unwrap());

        let kripke = Frame::from_masks(2, &[&[3], &[0, 1, 2, 3]]);
        let kalg = Algebra::from_fn(2, |a| kripke.box_n(a).unwrap());
        assert!(validates(&kalg, &m).unwrap());
    }

    #[test]
    fn assignment_guard() {
        let alg = Algebra::identity(4);
        let five = parse("box a & box b & box c & box d & box e -> box a").unwrap();
        assert!(matches!(validates(&alg, &five), Err(e) if e.is_cap()));
        let four = parse("box a & box b & box c & box d -> box a").unwrap();
        assert!(validates(&alg, &four).unwrap());
    }

    #[test]
    fn theta_t_examples() {
        let w = Family::from_masks(1, &[0]).unwrap();
        let v = Assignment::new().with("u", Subset(1)).with("v", Subset(0));
        assert!(!theta_t_member(&w, &one_step("M"), &v).unwrap());

        let top = OneStepAxiom::new(Formula::Top).unwrap();
        assert!(theta_t_member(&w, &top, &Assignment::new()).unwrap());

        let w1 = Family::from_masks(1, &[1]).unwrap();
        let v1 = Assignment::new().with("v", Subset(1));
        assert!(!theta_t_member(&w1, &one_step("Cont"), &v1).unwrap());
        assert!(theta_t_member(&w1, &one_step("Cont"), &Assignment::new()).is_err());
    }

    fn count_admitted(n: usize, list: &str) -> Vec<Vec<u32>> {
        let axs = axioms(list, n);
        (0..1u64 << (1 << n))
            .map(|bits| Family::from_bits(n, bits))
            .filter(|w| is_ax_subset(w, &axs).unwrap())
            .map(|w| w.masks())
            .collect()
    }

    #[test]
    fn ax_subset_counts() {
        assert_eq!(count_admitted(1, "@M"), vec![vec![], vec![1], vec![0, 1]]);
        assert_eq!(count_admitted(1, "@Cont"), vec![vec![], vec![0, 1]]);
        let filters = count_admitted(2, "@N,@C");
        assert_eq!(filters.len(), 4);
        for f in &filters {
            let fam = Family::from_masks(2, f).unwrap();
            assert_eq!(fam, Family::up_cone(2, fam.meet()));
        }
    }

    #[test]
    fn semantic_predicates_in_axiom_sets() {
        let axs = axioms("@CInf", 2);
        let admitted: Vec<_> = (0..1u64 << 4)
            .map(|b| Family::from_bits(2, b))
            .filter(|w| is_ax_subset(w, &axs).unwrap())
            .collect();
        assert_eq!(admitted.len(), 4);
    }
}
