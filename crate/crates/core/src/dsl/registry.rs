//! Named axioms and axiom sets.
//!
//! | name      | formula                                        |
//! |-----------|------------------------------------------------|
//! | `M`       | `box(u & v) -> box u`                          |
//! | `C`       | `box u & box v <-> box(u & v)`                 |
//! | `N`       | `box T`                                        |
//! | `Cont`    | `box v <-> box ~v`                             |
//! | `Conv`    | `box(v & v1) & box(v | v2) -> box v`           |
//! | `CoConv`  | `box v -> box(v & v1) | box(v | v2)`           |
//! | `T`       | `box v -> v` (not one-step)                    |
//! | `Four`    | `box v -> box box v` (not one-step)            |
//! | `Ck(k)`   | `C_j` for every `j < k`, see [`intersection_axiom`] |
//! | `CInf`    | closure under all intersections (semantic only) |

use std::fmt;

use super::formula::Formula;
use super::parse::parse;
use crate::error::{Error, Result};
use crate::subset::{Family, Subset};

/// A one-step formula: Boolean combination of `⊤` and boxed box-free formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneStepAxiom(Formula);

impl OneStepAxiom {
    pub fn new(formula: Formula) -> Result<OneStepAxiom> {
        if !formula.is_one_step() {
            return Err(Error::invalid(format!("`{formula}` is not a one-step formula")));
        }
        Ok(OneStepAxiom(formula))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }
}

/// Family conditions that replace axioms needing more variables than there
/// are distinct subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyPredicate {
    /// Closed under intersections of every subfamily, including the empty one.
    AllIntersections,
    /// Satisfies `C_j` for every `j < k`.
    IntersectionsBelow(usize),
}

impl FamilyPredicate {
    pub fn holds(&self, w: &Family) -> bool {
        let k = match *self {
            FamilyPredicate::AllIntersections => usize::MAX,
            FamilyPredicate::IntersectionsBelow(k) => k,
        };
        if k >= 1 && !w.contains(Subset::full(w.n())) {
            return false;
        }
        if k >= 3 && !(w.is_up_closed() && w.is_intersection_closed()) {
            return false;
        }
        true
    }

    pub fn describe(&self) -> String {
        match self {
            FamilyPredicate::AllIntersections => "up-closed and intersection-closed".into(),
            FamilyPredicate::IntersectionsBelow(k) => {
                format!("closed under intersections of fewer than {k} members")
            }
        }
    }
}

/// One member of an [`AxiomSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    OneStep { label: String, axiom: OneStepAxiom },
    Semantic { label: String, predicate: FamilyPredicate },
}

impl Axiom {
    pub fn label(&self) -> &str {
        match self {
            Axiom::OneStep { label, .. } | Axiom::Semantic { label, .. } => label,
        }
    }
}

/// What a registry name expands to on a ground set of a given size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    Formulas(Vec<Formula>),
    Predicate(FamilyPredicate),
}

fn fixed(name: &str) -> Option<&'static str> {
    Some(match name {
        "M" => "box(u & v) -> box u",
        "C" => "box u & box v <-> box(u & v)",
        "N" => "box T",
        "Cont" => "box v <-> box ~v",
        "Conv" => "box(v & v1) & box(v | v2) -> box v",
        "CoConv" => "box v -> box(v & v1) | box(v | v2)",
        "T" => "box v -> v",
        "Four" => "box v -> box box v",
        _ => return None,
    })
}

/// Names of the fixed-formula registry entries.
pub const FIXED_NAMES: [&str; 8] = ["M", "C", "N", "Cont", "Conv", "CoConv", "T", "Four"];

/// `⋀_{i<k} □vᵢ ↔ □⋀_{i<k} vᵢ` over variables `v1 .. vk`.
pub fn intersection_axiom(k: usize) -> Formula {
    let vars: Vec<Formula> = (1..=k).map(|i| Formula::var(format!("v{i}"))).collect();
    Formula::iff(
        Formula::and(vars.iter().cloned().map(Formula::boxed).collect()),
        Formula::and(vars).boxed(),
    )
}

enum Parsed {
    Fixed(&'static str),
    Ck(usize),
    CInf,
}

fn parse_name(name: &str) -> Result<Parsed> {
    let name = name.strip_prefix('@').unwrap_or(name);
    if let Some(text) = fixed(name) {
        return Ok(Parsed::Fixed(text));
    }
    if name == "CInf" {
        return Ok(Parsed::CInf);
    }
    if let Some(arg) = name.strip_prefix("Ck(").and_then(|r| r.strip_suffix(')')) {
        if let Ok(k) = arg.trim().parse::<usize>() {
            if k >= 1 {
                return Ok(Parsed::Ck(k));
            }
        }
    }
    Err(Error::UnknownAxiom(name.to_string()))
}

/// Expands a registry name (with or without the leading `@`) for a ground set
/// of size `n`. `CInf`, and `Ck(k)` with `k ≥ 2^n`, become family predicates.
pub fn expand_named(name: &str, n: usize) -> Result<Expansion> {
    Ok(match parse_name(name)? {
        Parsed::Fixed(text) => Expansion::Formulas(vec![parse(text)?]),
        Parsed::CInf => Expansion::Predicate(FamilyPredicate::AllIntersections),
        Parsed::Ck(k) if k as u64 >= 1u64 << n => {
            Expansion::Predicate(FamilyPredicate::IntersectionsBelow(k))
        }
        Parsed::Ck(k) => Expansion::Formulas((0..k).map(intersection_axiom).collect()),
    })
}

/// A single formula for a registry name; `Ck(k)` gives the conjunction of
/// its members. Fails for `CInf`.
pub fn formula_for(name: &str) -> Result<Formula> {
    match parse_name(name)? {
        Parsed::Fixed(text) => parse(text),
        Parsed::Ck(k) => Ok(Formula::and((0..k).map(intersection_axiom).collect())),
        Parsed::CInf => Err(Error::invalid(
            "`@CInf` is a family condition and has no finitary formula",
        )),
    }
}

/// A named collection of one-step axioms and family predicates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AxiomSet {
    names: Vec<String>,
    axioms: Vec<Axiom>,
}

impl AxiomSet {
    pub fn empty() -> AxiomSet {
        AxiomSet::default()
    }

    /// Resolves each item: `@Name` through the registry, anything else is
    /// parsed as a one-step formula. Names must be distinct.
    pub fn from_names<S: AsRef<str>>(items: &[S], n: usize) -> Result<AxiomSet> {
        let mut set = AxiomSet::empty();
        for item in items {
            set.push(item.as_ref().trim(), n)?;
        }
        Ok(set)
    }

    /// Comma-separated form of [`AxiomSet::from_names`]; the empty string is
    /// the empty set.
    pub fn parse_list(list: &str, n: usize) -> Result<AxiomSet> {
        let items: Vec<&str> = split_top_level(list);
        AxiomSet::from_names(&items, n)
    }

    fn push(&mut self, item: &str, n: usize) -> Result<()> {
        if self.names.iter().any(|x| x == item) {
            return Err(Error::invalid(format!("axiom `{item}` listed twice")));
        }
        if item.starts_with('@') {
            match expand_named(item, n)? {
                Expansion::Formulas(fs) => {
                    let many = fs.len() > 1;
                    for (i, f) in fs.into_iter().enumerate() {
                        let label = if many {
                            format!("{item}#{i}")
                        } else {
                            item.to_string()
                        };
                        let axiom = OneStepAxiom::new(f).map_err(|_| {
                            Error::invalid(format!("`{item}` is not a one-step axiom"))
                        })?;
                        self.axioms.push(Axiom::OneStep { label, axiom });
                    }
                }
                Expansion::Predicate(predicate) => self.axioms.push(Axiom::Semantic {
                    label: item.to_string(),
                    predicate,
                }),
            }
        } else {
            let axiom = OneStepAxiom::new(parse(item)?)?;
            self.axioms.push(Axiom::OneStep {
                label: item.to_string(),
                axiom,
            });
        }
        self.names.push(item.to_string());
        Ok(())
    }

    pub fn single(axiom: OneStepAxiom) -> AxiomSet {
        let label = axiom.formula().to_string();
        AxiomSet {
            names: vec![label.clone()],
            axioms: vec![Axiom::OneStep { label, axiom }],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Whether every member family is forced to be up-closed, which is what
    /// the up-set backtracking enumerator requires.
    pub fn forces_monotone(&self) -> bool {
        self.names.iter().any(|n| {
            n == "@M"
                || n == "@CInf"
                || matches!(parse_name(n), Ok(Parsed::Ck(k)) if k >= 3)
        })
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names.join(", "))
    }
}

fn split_top_level(list: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in list.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&list[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&list[start..]);
    out.into_iter().filter(|s| !s.trim().is_empty()).collect()
}
