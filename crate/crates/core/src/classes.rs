//! Frame and algebra classes, checked directly on families and box tables,
//! and the two correspondence pairs Cent/T and iv/4.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dsl::registry::{formula_for, FamilyPredicate};
use crate::duality::complex_algebra;
use crate::error::{Error, Result};
use crate::eval::validates;
use crate::frame::{Algebra, Frame};
use crate::subset::{Family, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Monotone,
    Convex,
    CoConvex,
    Contingency,
    Filter,
    KappaComplete(usize),
    Centered,
    IV,
    Pretopological,
    Topological,
    Bam,
    Normal,
    T,
    Four,
    PreInterior,
    Interior,
    ContingencyAlg,
    ConvexAlg,
}

impl ClassTag {
    pub const FRAME_TAGS: [ClassTag; 9] = [
        ClassTag::Monotone,
        ClassTag::Convex,
        ClassTag::CoConvex,
        ClassTag::Contingency,
        ClassTag::Filter,
        ClassTag::Centered,
        ClassTag::IV,
        ClassTag::Pretopological,
        ClassTag::Topological,
    ];

    pub const ALGEBRA_TAGS: [ClassTag; 8] = [
        ClassTag::Bam,
        ClassTag::Normal,
        ClassTag::T,
        ClassTag::Four,
        ClassTag::PreInterior,
        ClassTag::Interior,
        ClassTag::ContingencyAlg,
        ClassTag::ConvexAlg,
    ];

    pub fn is_frame_tag(self) -> bool {
        !matches!(
            self,
            ClassTag::Bam
                | ClassTag::Normal
                | ClassTag::T
                | ClassTag::Four
                | ClassTag::PreInterior
                | ClassTag::Interior
                | ClassTag::ContingencyAlg
                | ClassTag::ConvexAlg
        )
    }

    /// Per-point test for tags that constrain each `N(x)` on its own.
    /// `None` for tags that look at the whole frame.
    pub fn pointwise(self, x: usize, w: &Family) -> Option<bool> {
        let n = w.n();
        Some(match self {
            ClassTag::Monotone => w.is_up_closed(),
            ClassTag::Convex => w.is_convex(),
            ClassTag::CoConvex => w.complement().is_convex(),
            ClassTag::Contingency => w.members().all(|a| w.contains(a.complement(n))),
            ClassTag::Filter => is_filter(w),
            ClassTag::KappaComplete(k) => FamilyPredicate::IntersectionsBelow(k).holds(w),
            ClassTag::Centered => w.members().all(|a| a.contains(x)),
            ClassTag::Pretopological => is_filter(w) && w.members().all(|a| a.contains(x)),
            _ => return None,
        })
    }
}

fn is_filter(w: &Family) -> bool {
    w.contains(Subset::full(w.n())) && w.is_up_closed() && w.is_intersection_closed()
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::Monotone => "monotone",
            ClassTag::Convex => "convex",
            ClassTag::CoConvex => "coconvex",
            ClassTag::Contingency => "contingency",
            ClassTag::Filter => "filter",
            ClassTag::KappaComplete(k) => return write!(f, "kappa:{k}"),
            ClassTag::Centered => "centered",
            ClassTag::IV => "iv",
            ClassTag::Pretopological => "pretop",
            ClassTag::Topological => "top",
            ClassTag::Bam => "bam",
            ClassTag::Normal => "normal",
            ClassTag::T => "t",
            ClassTag::Four => "four",
            ClassTag::PreInterior => "preint",
            ClassTag::Interior => "int",
            ClassTag::ContingencyAlg => "contingency-alg",
            ClassTag::ConvexAlg => "convex-alg",
        };
        f.write_str(s)
    }
}

impl FromStr for ClassTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<ClassTag> {
        Ok(match s {
            "monotone" => ClassTag::Monotone,
            "convex" => ClassTag::Convex,
            "coconvex" => ClassTag::CoConvex,
            "contingency" => ClassTag::Contingency,
            "filter" => ClassTag::Filter,
            "centered" => ClassTag::Centered,
            "iv" => ClassTag::IV,
            "pretop" => ClassTag::Pretopological,
            "top" => ClassTag::Topological,
            "bam" => ClassTag::Bam,
            "normal" => ClassTag::Normal,
            "t" => ClassTag::T,
            "four" | "4" => ClassTag::Four,
            "preint" => ClassTag::PreInterior,
            "int" => ClassTag::Interior,
            "contingency-alg" => ClassTag::ContingencyAlg,
            "convex-alg" => ClassTag::ConvexAlg,
            _ => match s.strip_prefix("kappa:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => ClassTag::KappaComplete(k),
                Some(_) => {
                    return Err(Error::invalid(format!("bad kappa in {s:?}: need an integer ≥ 1")))
                }
                None => return Err(Error::invalid(format!("unknown class {s:?}"))),
            },
        })
    }
}

/// `a ∈ N(x) ⇒ x ∈ a`.
pub fn is_centered(frame: &Frame) -> bool {
    (0..frame.n()).all(|x| ClassTag::Centered.pointwise(x, frame.nbhd(x)) == Some(true))
}

/// `a ∈ N(x) ⇒ □_N a ∈ N(x)`.
pub fn has_iv(frame: &Frame) -> bool {
    (0..frame.n()).all(|x| {
        frame
            .nbhd(x)
            .members()
            .all(|a| frame.nbhd(x).contains(frame.box_unchecked(a)))
    })
}

pub fn frame_class_check(frame: &Frame, tag: ClassTag) -> Result<bool> {
    if !tag.is_frame_tag() {
        return Err(Error::invalid(format!("{tag} is an algebra class")));
    }
    Ok(match tag {
        ClassTag::IV => has_iv(frame),
        ClassTag::Topological => {
            frame_class_check(frame, ClassTag::Pretopological)? && has_iv(frame)
        }
        _ => (0..frame.n()).all(|x| tag.pointwise(x, frame.nbhd(x)) == Some(true)),
    })
}

fn is_bam(alg: &Algebra) -> bool {
    Subset::all(alg.n()).all(|a| {
        let ba = alg.apply(a);
        a.interval(alg.full()).all(|b| ba.is_subset_of(alg.apply(b)))
    })
}

fn validates_named(alg: &Algebra, name: &str) -> Result<bool> {
    validates(alg, &formula_for(name)?)
}

/// `□b ≤ b`.
fn is_t(alg: &Algebra) -> bool {
    Subset::all(alg.n()).all(|b| alg.apply(b).is_subset_of(b))
}

/// `□b ≤ □□b`.
fn is_four(alg: &Algebra) -> bool {
    Subset::all(alg.n()).all(|b| {
        let bb = alg.apply(b);
        bb.is_subset_of(alg.apply(bb))
    })
}

pub fn algebra_class_check(alg: &Algebra, tag: ClassTag) -> Result<bool> {
    let normal = |alg| Ok::<_, Error>(validates_named(alg, "N")? && validates_named(alg, "C")?);
    Ok(match tag {
        ClassTag::Bam => is_bam(alg),
        ClassTag::Normal => normal(alg)?,
        ClassTag::T => is_t(alg),
        ClassTag::Four => is_four(alg),
        ClassTag::PreInterior => normal(alg)? && is_t(alg),
        ClassTag::Interior => normal(alg)? && is_t(alg) && is_four(alg),
        ClassTag::ContingencyAlg => validates_named(alg, "Cont")?,
        ClassTag::ConvexAlg => validates_named(alg, "Conv")?,
        _ => return Err(Error::invalid(format!("{tag} is a frame class"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Correspondence {
    CentT,
    IV4,
}

impl FromStr for Correspondence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Correspondence> {
        match s.to_ascii_lowercase().as_str() {
            "centt" | "cent-t" => Ok(Correspondence::CentT),
            "iv4" | "iv-4" => Ok(Correspondence::IV4),
            _ => Err(Error::invalid(format!("unknown pair {s:?}; expected CentT or IV4"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub pair: Correspondence,
    pub frame_side: bool,
    pub algebra_side: bool,
    pub agree: bool,
}

/// Evaluates the frame condition on `frame` and the inequality on its complex
/// algebra, independently.
pub fn correspondence_check(frame: &Frame, pair: Correspondence) -> CorrespondenceReport {
    let alg = complex_algebra(frame);
    let (frame_side, algebra_side) = match pair {
        Correspondence::CentT => (is_centered(frame), is_t(&alg)),
        Correspondence::IV4 => (has_iv(frame), is_four(&alg)),
    };
    CorrespondenceReport {
        pair,
        frame_side,
        algebra_side,
        agree: frame_side == algebra_side,
    }
}
