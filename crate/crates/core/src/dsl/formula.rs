use std::fmt;

/// A modal formula over finitely many variables.
///
/// Only `Var`, `Top`, `Not`, `And`, and `Box` are stored; `⊥`, `∨`, `→`, and
/// `↔` are built by the constructor helpers and desugar on the spot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Top,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn bot() -> Formula {
        Formula::Top.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn boxed(self) -> Formula {
        Formula::Box(Box::new(self))
    }

    /// Conjunction; arity 0 is `⊤` and arity 1 is the conjunct itself.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Top,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn and2(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![a, b])
    }

    /// `¬⋀¬φᵢ`; arity 0 is `⊥`.
    pub fn or(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::bot(),
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts.into_iter().map(Formula::not).collect()).not(),
        }
    }

    pub fn or2(a: Formula, b: Formula) -> Formula {
        Formula::or(vec![a, b])
    }

    /// `¬(a ∧ ¬b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![a, b.not()]).not()
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::And(vec![
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        ])
    }

    /// Distinct variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_vars(&mut |name| {
            if !out.iter().any(|v| v == name) {
                out.push(name.to_string());
            }
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Var(v) => f(v),
            Formula::Top => {}
            Formula::Not(p) | Formula::Box(p) => p.visit_vars(f),
            Formula::And(ps) => ps.iter().for_each(|p| p.visit_vars(f)),
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top => 0,
            Formula::Not(p) => p.modal_depth(),
            Formula::Box(p) => 1 + p.modal_depth(),
            Formula::And(ps) => ps.iter().map(Formula::modal_depth).max().unwrap_or(0),
        }
    }

    pub fn is_box_free(&self) -> bool {
        self.modal_depth() == 0
    }

    /// Conforms to `φ ::= □π | ⊤ | ¬φ | ⋀φᵢ` with `π` box-free.
    pub fn is_one_step(&self) -> bool {
        match self {
            Formula::Box(p) => p.is_box_free(),
            Formula::Top => true,
            Formula::Not(p) => p.is_one_step(),
            Formula::And(ps) => ps.iter().all(Formula::is_one_step),
            Formula::Var(_) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top => 1,
            Formula::Not(p) | Formula::Box(p) => 1 + p.size(),
            Formula::And(ps) => 1 + ps.iter().map(Formula::size).sum::<usize>(),
        }
    }
}

// Rendering. Binding strengths follow the parser: `<->` 1, `->` 2, `|` 3,
// `&` 4, prefix operators and atoms 5.

enum View<'a> {
    Iff(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Or(Vec<&'a Formula>),
    And(&'a [Formula]),
    Not(&'a Formula),
    Box(&'a Formula),
    Bot,
    Top,
    Var(&'a str),
}

fn implication_parts(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Not(inner) = f {
        if let Formula::And(ps) = inner.as_ref() {
            if let [a, Formula::Not(b)] = ps.as_slice() {
                return Some((a, b));
            }
        }
    }
    None
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Var(v) => View::Var(v),
        Formula::Top => View::Top,
        Formula::Box(p) => View::Box(p),
        Formula::And(ps) => {
            if let [l, r] = ps.as_slice() {
                if let (Some((a, b)), Some((b2, a2))) = (implication_parts(l), implication_parts(r)) {
                    if a == a2 && b == b2 {
                        return View::Iff(a, b);
                    }
                }
            }
            View::And(ps)
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Top => View::Bot,
            Formula::And(ps) if ps.len() >= 2 => {
                let disjunct = |p: &Formula| match p {
                    Formula::Not(q) => !matches!(q.as_ref(), Formula::And(_)),
                    _ => false,
                };
                let as_or = ps.iter().all(|p| matches!(p, Formula::Not(_)))
                    && (ps.len() > 2 || ps.iter().all(disjunct));
                if as_or {
                    View::Or(
                        ps.iter()
                            .map(|p| match p {
                                Formula::Not(q) => q.as_ref(),
                                _ => unreachable!(),
                            })
                            .collect(),
                    )
                } else if let Some((a, b)) = implication_parts(f) {
                    View::Implies(a, b)
                } else {
                    View::Not(inner)
                }
            }
            _ => View::Not(inner),
        },
    }
}

fn level(v: &View<'_>) -> u8 {
    match v {
        View::Iff(..) => 1,
        View::Implies(..) => 2,
        View::Or(_) => 3,
        View::And([]) => 5,
        View::And(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &Formula, min_level: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let v = view(f);
    let paren = level(&v) < min_level;
    if paren {
        out.write_str("(")?;
    }
    match v {
        View::Iff(a, b) => {
            write_at(a, 2, out)?;
            out.write_str(" <-> ")?;
            write_at(b, 2, out)?;
        }
        View::Implies(a, b) => {
            write_at(a, 3, out)?;
            out.write_str(" -> ")?;
            write_at(b, 2, out)?;
        }
        View::Or(ps) => {
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.write_str(" | ")?;
                }
                write_at(p, 4, out)?;
            }
        }
        View::And([]) => out.write_str("T")?,
        View::And(ps) => {
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    out.write_str(" & ")?;
                }
                write_at(p, 5, out)?;
            }
        }
        View::Not(p) => {
            out.write_str("~")?;
            write_at(p, 5, out)?;
        }
        View::Box(p) => {
            out.write_str("box ")?;
            write_at(p, 5, out)?;
        }
        View::Bot => out.write_str("F")?,
        View::Top => out.write_str("T")?,
        View::Var(name) => out.write_str(name)?,
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

/// ASCII rendering in the input grammar; re-sugars `|`, `->`, `<->`, `F`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}
