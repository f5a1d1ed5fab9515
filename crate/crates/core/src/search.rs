//! Frame enumeration (constraint-first, optionally one frame per isomorphism
//! class) and smallest-countermodel search.
//!
//! Frames are enumerated in ascending frame order: `N(0)` most significant,
//! families compared as bitsets. Inside this module a frame on at most four
//! points is a vector of family bitsets, one `u64` per point.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{algebra_class_check, frame_class_check, ClassTag};
use crate::dsl::{AxiomSet, Formula};
use crate::error::{Error, Result};
use crate::eval::{falsifying_assignment, Assignment, PreparedAxioms};
use crate::frame::{permute_subset, Algebra, Frame};
use crate::subset::{check_width, Family, Subset};

/// Largest ground set for enumeration.
pub const MAX_ENUM_N: usize = 4;
/// Largest raw search space (product of per-point candidate counts).
pub const MAX_SPACE: u64 = 1 << 26;
/// Largest number of frames [`enumerate_frames`] will materialize.
pub const MAX_LISTED: u64 = 1 << 20;
/// Largest ground set for [`canonical_form`].
pub const MAX_CANON_N: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Class(ClassTag),
    /// Axiom list items, instantiated per ground-set size.
    Axioms(Vec<String>),
}

impl FromStr for Constraint {
    type Err = Error;
    /// A class name, or else an axiom (`@Name` or a one-step formula).
    fn from_str(s: &str) -> Result<Constraint> {
        let s = s.trim();
        match s.parse::<ClassTag>() {
            Ok(tag) => Ok(Constraint::Class(tag)),
            Err(_) if s.starts_with('@') || s.contains("box") => {
                AxiomSet::parse_list(s, 1)?;
                Ok(Constraint::Axioms(vec![s.to_string()]))
            }
            Err(e) => Err(e),
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// The least frame in the orbit of `frame` under point permutations.
pub fn canonical_form(frame: &Frame) -> Result<Frame> {
    check_width(frame.n(), MAX_CANON_N, "canonical form")?;
    Ok(permutations(frame.n())
        .iter()
        .map(|p| frame.permute(p))
        .min()
        .expect("at least the identity"))
}

fn permute_bits(bits: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut rest = bits;
    while rest != 0 {
        let a = rest.trailing_zeros();
        rest &= rest - 1;
        out |= 1 << permute_subset(Subset(a), perm).mask();
    }
    out
}

/// Candidate lists per point plus whatever cannot be checked pointwise.
struct Space {
    n: usize,
    cands: Vec<Vec<u64>>,
    whole: Vec<ClassTag>,
    /// Non-identity permutations with a lookup table over family bitsets.
    perms: Vec<(Vec<usize>, Vec<u64>)>,
}

impl Space {
    fn new(n: usize, constraints: &[Constraint], canonical: bool) -> Result<Space> {
        check_width(n, MAX_ENUM_N, "frame enumeration")?;
        let mut prepared = Vec::new();
        let mut point_tags = Vec::new();
        let mut whole = Vec::new();
        for c in constraints {
            match c {
                Constraint::Axioms(names) => {
                    prepared.push(PreparedAxioms::new(&AxiomSet::from_names(names, n)?, n)?)
                }
                Constraint::Class(tag) => {
                    if tag.is_frame_tag() && tag.pointwise(0, &Family::empty(n)).is_some() {
                        point_tags.push(*tag);
                    } else {
                        whole.push(*tag);
                    }
                }
            }
        }
        let families = 1u64 << (1u32 << n);
        let cands: Vec<Vec<u64>> = (0..n)
            .map(|x| {
                (0..families)
                    .into_par_iter()
                    .filter(|&bits| {
                        let w = Family::from_bits(n, bits);
                        point_tags.iter().all(|t| t.pointwise(x, &w) == Some(true))
                            && prepared.iter().all(|p| p.admits(&w))
                    })
                    .collect()
            })
            .collect();
        let space = Space {
            n,
            cands,
            whole,
            perms: Vec::new(),
        };
        space.total()?;
        let perms = if canonical {
            permutations(n)
                .into_iter()
                .skip(1)
                .map(|p| {
                    let table = (0..families).map(|b| permute_bits(b, &p)).collect();
                    (p, table)
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Space { perms, ..space })
    }

    fn total(&self) -> Result<u64> {
        let mut total: u64 = 1;
        for c in &self.cands {
            total = total.saturating_mul(c.len() as u64);
        }
        if total > MAX_SPACE {
            return Err(Error::cap("frame search space", MAX_SPACE as usize, total as usize));
        }
        Ok(total)
    }

    fn decode(&self, mut idx: u64, out: &mut [u64]) {
        for x in (0..self.n).rev() {
            let len = self.cands[x].len() as u64;
            out[x] = self.cands[x][(idx % len) as usize];
            idx /= len;
        }
    }

    fn is_canonical(&self, codes: &[u64]) -> bool {
        let mut image = [0u64; MAX_ENUM_N];
        self.perms.iter().all(|(p, table)| {
            for (x, &c) in codes.iter().enumerate() {
                image[p[x]] = table[c as usize];
            }
            image[..self.n] >= *codes
        })
    }

    fn frame(&self, codes: &[u64]) -> Frame {
        Frame::new(self.n, codes.iter().map(|&b| Family::from_bits(self.n, b)).collect())
            .expect("width checked")
    }

    /// Canonical (when requested) and passing the whole-frame constraints.
    fn accepts(&self, codes: &[u64]) -> bool {
        if !self.is_canonical(codes) {
            return false;
        }
        if self.whole.is_empty() {
            return true;
        }
        let frame = self.frame(codes);
        self.whole.iter().all(|&t| {
            if t.is_frame_tag() {
                frame_class_check(&frame, t).unwrap_or(false)
            } else {
                algebra_class_check(&algebra_of(self.n, codes), t).unwrap_or(false)
            }
        })
    }
}

fn algebra_of(n: usize, codes: &[u64]) -> Algebra {
    Algebra::from_fn(n, |a| {
        Subset::from_points((0..n).filter(|&x| codes[x] >> a.mask() & 1 == 1))
    })
}

/// Every frame on `n` points meeting `constraints`, in ascending order; with
/// `canonical`, only the least member of each permutation orbit.
pub fn enumerate_frames(n: usize, constraints: &[Constraint], canonical: bool) -> Result<Vec<Frame>> {
    let space = Space::new(n, constraints, canonical)?;
    let total = space.total()?;
    if total > MAX_LISTED {
        return Err(Error::cap("listed frames", MAX_LISTED as usize, total as usize));
    }
    Ok((0..total)
        .into_par_iter()
        .filter_map(|i| {
            let mut codes = [0u64; MAX_ENUM_N];
            space.decode(i, &mut codes[..n]);
            space.accepts(&codes[..n]).then(|| space.frame(&codes[..n]))
        })
        .collect())
}

/// As [`enumerate_frames`], counting only.
pub fn count_frames(n: usize, constraints: &[Constraint], canonical: bool) -> Result<u64> {
    let space = Space::new(n, constraints, canonical)?;
    let total = space.total()?;
    Ok((0..total)
        .into_par_iter()
        .filter(|&i| {
            let mut codes = [0u64; MAX_ENUM_N];
            space.decode(i, &mut codes[..n]);
            space.accepts(&codes[..n])
        })
        .count() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// A frame with an assignment falsifying the target.
    FindRefuting,
    /// A frame validating the target.
    FindValidating,
    /// Count canonical frames validating the target, per size.
    Count,
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub max_n: usize,
    pub constraints: Vec<Constraint>,
    pub target: Formula,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub found: bool,
    pub frame: Option<Frame>,
    pub assignment: Option<Assignment>,
    /// Raw candidates visited, in enumeration order, up to and including the
    /// hit.
    pub checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    /// `counts[n]` for `n = 0..=max_n`.
    pub counts: Vec<u64>,
    pub checked: u64,
}

fn check_spec(spec: &SearchSpec) -> Result<()> {
    if spec.max_n > MAX_ENUM_N {
        return Err(Error::cap("search size", MAX_ENUM_N, spec.max_n));
    }
    Ok(())
}

/// Smallest `n` first, then least canonical frame, then least assignment.
/// The returned certificate is re-verified.
pub fn find_countermodel(spec: &SearchSpec) -> Result<SearchResult> {
    check_spec(spec)?;
    let refute = match spec.mode {
        Mode::FindRefuting => true,
        Mode::FindValidating => false,
        Mode::Count => return Err(Error::invalid("count mode has its own entry point")),
    };
    let mut checked = 0u64;
    for n in 0..=spec.max_n {
        let space = Space::new(n, &spec.constraints, true)?;
        let total = space.total()?;
        // surface assignment-space caps before the parallel scan
        falsifying_assignment(&Algebra::identity(n), &spec.target)?;
        let hit = (0..total).into_par_iter().find_first(|&i| {
            let mut codes = [0u64; MAX_ENUM_N];
            space.decode(i, &mut codes[..n]);
            space.accepts(&codes[..n])
                && falsifying_assignment(&algebra_of(n, &codes[..n]), &spec.target)
                    .map(|w| w.is_some() == refute)
                    .unwrap_or(false)
        });
        match hit {
            Some(i) => {
                checked += i + 1;
                let mut codes = [0u64; MAX_ENUM_N];
                space.decode(i, &mut codes[..n]);
                let frame = space.frame(&codes[..n]);
                let alg = crate::duality::complex_algebra(&frame);
                let assignment = falsifying_assignment(&alg, &spec.target)?;
                if assignment.is_some() != refute {
                    return Err(Error::invalid("search certificate failed re-verification"));
                }
                if let Some(v) = &assignment {
                    let value = crate::eval::eval_formula(&alg, &spec.target, v)?;
                    if value == alg.full() {
                        return Err(Error::invalid("falsifying assignment failed re-verification"));
                    }
                }
                return Ok(SearchResult {
                    found: true,
                    frame: Some(frame),
                    assignment,
                    checked,
                });
            }
            None => checked += total,
        }
    }
    Ok(SearchResult {
        found: false,
        frame: None,
        assignment: None,
        checked,
    })
}

/// Canonical frames in the class that validate the target, for each size.
pub fn count_models(spec: &SearchSpec) -> Result<CountResult> {
    check_spec(spec)?;
    let mut counts = Vec::new();
    let mut checked = 0u64;
    for n in 0..=spec.max_n {
        let space = Space::new(n, &spec.constraints, true)?;
        let total = space.total()?;
        falsifying_assignment(&Algebra::identity(n), &spec.target)?;
        checked += total;
        counts.push(
            (0..total)
                .into_par_iter()
                .filter(|&i| {
                    let mut codes = [0u64; MAX_ENUM_N];
                    space.decode(i, &mut codes[..n]);
                    space.accepts(&codes[..n])
                        && matches!(
                            falsifying_assignment(&algebra_of(n, &codes[..n]), &spec.target),
                            Ok(None)
                        )
                })
                .count() as u64,
        );
    }
    Ok(CountResult { counts, checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn class(s: &str) -> Constraint {
        s.parse().unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_frames(1, &[], false).unwrap(), 4);
        assert_eq!(count_frames(1, &[class("monotone")], false).unwrap(), 3);
        assert_eq!(count_frames(2, &[], false).unwrap(), 256);
        assert_eq!(count_frames(0, &[], false).unwrap(), 1);
        let via_axiom = count_frames(2, &[class("@M")], false).unwrap();
        assert_eq!(via_axiom, 36);
    }

    #[test]
    fn canonical_filter_orbits_match_oracle() {
        let all = enumerate_frames(2, &[class("filter")], false).unwrap();
        assert_eq!(all.len(), 16);
        let mut orbits: Vec<Frame> = all.iter().map(|f| canonical_form(f).unwrap()).collect();
        orbits.sort();
        orbits.dedup();
        let canon = enumerate_frames(2, &[class("filter")], true).unwrap();
        assert_eq!(canon, orbits);
    }

    #[test]
    fn whole_frame_constraints_filter_after_generation() {
        let iv = enumerate_frames(2, &[class("iv")], false).unwrap();
        let brute: Vec<Frame> = enumerate_frames(2, &[], false)
            .unwrap()
            .into_iter()
            .filter(crate::classes::has_iv)
            .collect();
        assert_eq!(iv, brute);
    }

    #[test]
    fn canonical_form_examples() {
        let one = Frame::from_masks(1, &[&[0, 1]]);
        assert_eq!(canonical_form(&one).unwrap(), one);
        let sym = Frame::from_masks(2, &[&[0, 3], &[0, 3]]);
        assert_eq!(canonical_form(&sym).unwrap(), sym);
        let a = Frame::from_masks(2, &[&[2], &[]]);
        let b = Frame::from_masks(2, &[&[], &[1]]);
        assert_eq!(a.permute(&[1, 0]), b);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_form_is_orbit_invariant() {
        for f in enumerate_frames(2, &[], false).unwrap() {
            let c = canonical_form(&f).unwrap();
            assert_eq!(canonical_form(&c).unwrap(), c);
            assert_eq!(canonical_form(&f.permute(&[1, 0])).unwrap(), c);
        }
    }

    #[test]
    fn countermodel_for_m() {
        let spec = SearchSpec {
            max_n: 3,
            constraints: vec![],
            target: parse("@M").unwrap(),
            mode: Mode::FindRefuting,
        };
        let r = find_countermodel(&spec).unwrap();
        assert!(r.found);
        assert_eq!(r.frame.unwrap(), Frame::from_masks(1, &[&[0]]));
        let v = r.assignment.unwrap();
        assert_eq!((v.get("u"), v.get("v")), (Some(Subset(1)), Some(Subset(0))));
    }

    #[test]
    fn no_countermodel_for_m_on_monotone_frames() {
        let spec = SearchSpec {
            max_n: 3,
            constraints: vec![class("monotone")],
            target: parse("@M").unwrap(),
            mode: Mode::FindRefuting,
        };
        let r = find_countermodel(&spec).unwrap();
        assert!(!r.found);
        assert_eq!(r.checked, 1 + 3 + 36 + 8000);
    }

    #[test]
    fn t_on_filter_frames() {
        let spec = SearchSpec {
            max_n: 2,
            constraints: vec![class("filter")],
            target: parse("box v -> v").unwrap(),
            mode: Mode::FindRefuting,
        };
        let r = find_countermodel(&spec).unwrap();
        assert_eq!(r.frame.unwrap(), Frame::from_masks(1, &[&[0, 1]]));
        assert_eq!(r.assignment.unwrap().get("v"), Some(Subset(0)));
    }

    #[test]
    fn count_mode() {
        let spec = SearchSpec {
            max_n: 2,
            constraints: vec![],
            target: parse("@M").unwrap(),
            mode: Mode::Count,
        };
        let r = count_models(&spec).unwrap();
        assert_eq!(r.counts[0], 1);
        assert_eq!(r.counts[1], 3);
        assert_eq!(r.counts.len(), 3);
    }

    #[test]
    fn caps() {
        assert!(count_frames(4, &[], false).unwrap_err().is_cap());
        assert!(count_frames(5, &[], false).unwrap_err().is_cap());
        assert!(enumerate_frames(3, &[], false).unwrap_err().is_cap());
    }
}
