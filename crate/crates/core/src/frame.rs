//! Neighborhood frames, their complex algebras' carrier type, Kripke
//! relations, and the two kinds of morphism between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{check_width, Family, Subset, MAX_N};

/// A neighborhood frame `(X, N)` with `X = {0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FrameJson", into = "FrameJson")]
pub struct Frame {
    n: usize,
    nbhd: Vec<Family>,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    n: usize,
    #[serde(rename = "N")]
    nbhd: Vec<Vec<u32>>,
}

impl TryFrom<FrameJson> for Frame {
    type Error = Error;
    fn try_from(raw: FrameJson) -> Result<Frame> {
        check_width(raw.n, MAX_N, "frame")?;
        let nbhd = raw
            .nbhd
            .iter()
            .map(|masks| Family::from_masks(raw.n, masks))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(raw.n, nbhd)
    }
}

impl From<Frame> for FrameJson {
    fn from(f: Frame) -> FrameJson {
        FrameJson {
            n: f.n,
            nbhd: f.nbhd.iter().map(Family::masks).collect(),
        }
    }
}

impl Frame {
    pub fn new(n: usize, nbhd: Vec<Family>) -> Result<Frame> {
        check_width(n, MAX_N, "frame")?;
        if nbhd.len() != n {
            return Err(Error::invalid(format!(
                "frame of size {n} needs {n} neighborhood families, got {}",
                nbhd.len()
            )));
        }
        if let Some(bad) = nbhd.iter().position(|fam| fam.n() != n) {
            return Err(Error::invalid(format!(
                "family at point {bad} has width {}, expected {n}",
                nbhd[bad].n()
            )));
        }
        Ok(Frame { n, nbhd })
    }

    /// Convenience constructor from raw masks; panics on invalid input.
    pub fn from_masks(n: usize, nbhd: &[&[u32]]) -> Frame {
        let fams = nbhd
            .iter()
            .map(|m| Family::from_masks(n, m).expect("valid masks"))
            .collect();
        Frame::new(n, fams).expect("valid frame")
    }

    /// Every point gets the same family.
    pub fn uniform(n: usize, family: &Family) -> Frame {
        Frame {
            n,
            nbhd: vec![family.clone(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nbhd(&self, x: usize) -> &Family {
        &self.nbhd[x]
    }

    pub fn families(&self) -> &[Family] {
        &self.nbhd
    }

    pub fn into_families(self) -> Vec<Family> {
        self.nbhd
    }

    /// `□_N a = { x | a ∈ N(x) }`.
    pub fn box_n(&self, a: Subset) -> Result<Subset> {
        if !a.fits(self.n) {
            return Err(Error::invalid(format!(
                "subset {} does not fit frame of size {}",
                a.0, self.n
            )));
        }
        Ok(self.box_unchecked(a))
    }

    #[inline]
    pub(crate) fn box_unchecked(&self, a: Subset) -> Subset {
        let mut out = 0u32;
        for (x, fam) in self.nbhd.iter().enumerate() {
            if fam.contains(a) {
                out |= 1 << x;
            }
        }
        Subset(out)
    }

    /// The complement frame `N^c(x) = ℘X ∖ N(x)`.
    pub fn complement(&self) -> Frame {
        Frame {
            n: self.n,
            nbhd: self.nbhd.iter().map(Family::complement).collect(),
        }
    }

    /// The neighborhood frame of a Kripke frame: `N_R(x) = ↑R[x]`.
    pub fn from_relation(rel: &Relation) -> Frame {
        Frame {
            n: rel.n,
            nbhd: rel.succ.iter().map(|&s| Family::up_cone(rel.n, s)).collect(),
        }
    }

    /// `R_N[x] = ⋂ N(x)`, with the empty intersection read as `X`.
    pub fn to_relation(&self) -> Relation {
        Relation {
            n: self.n,
            succ: self.nbhd.iter().map(Family::meet).collect(),
        }
    }

    /// Applies a point permutation `perm` (point `x` goes to `perm[x]`).
    pub fn permute(&self, perm: &[usize]) -> Frame {
        let mut nbhd = vec![Family::empty(self.n); self.n];
        for (x, fam) in self.nbhd.iter().enumerate() {
            let mut image = Family::empty(self.n);
            for a in fam.members() {
                image.insert(permute_subset(a, perm));
            }
            nbhd[perm[x]] = image;
        }
        Frame { n: self.n, nbhd }
    }
}

pub(crate) fn permute_subset(a: Subset, perm: &[usize]) -> Subset {
    Subset::from_points(a.points().map(|p| perm[p]))
}

/// A finite powerset algebra `(℘X, □)` with an arbitrary box, stored as a
/// table indexed by subset mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraJson", into = "AlgebraJson")]
pub struct Algebra {
    n: usize,
    table: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    n: usize,
    #[serde(rename = "box")]
    table: Vec<u32>,
}

impl TryFrom<AlgebraJson> for Algebra {
    type Error = Error;
    fn try_from(raw: AlgebraJson) -> Result<Algebra> {
        Algebra::new(raw.n, raw.table.into_iter().map(Subset).collect())
    }
}

impl From<Algebra> for AlgebraJson {
    fn from(a: Algebra) -> AlgebraJson {
        AlgebraJson {
            n: a.n,
            table: a.table.iter().map(|s| s.0).collect(),
        }
    }
}

impl Algebra {
    pub fn new(n: usize, table: Vec<Subset>) -> Result<Algebra> {
        check_width(n, MAX_N, "algebra")?;
        if table.len() != 1 << n {
            return Err(Error::invalid(format!(
                "box table for n={n} needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|s| !s.fits(n)) {
            return Err(Error::invalid(format!(
                "box table entry {} does not fit n={n}",
                bad.0
            )));
        }
        Ok(Algebra { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(Subset) -> Subset) -> Algebra {
        Algebra {
            n,
            table: Subset::all(n).map(f).collect(),
        }
    }

    pub fn identity(n: usize) -> Algebra {
        Algebra::from_fn(n, |a| a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.n)
    }

    #[inline]
    pub fn apply(&self, a: Subset) -> Subset {
        self.table[a.index()]
    }

    pub fn table(&self) -> &[Subset] {
        &self.table
    }
}

/// A Kripke relation as a successor table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RelationJson", into = "RelationJson")]
pub struct Relation {
    n: usize,
    succ: Vec<Subset>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    n: usize,
    #[serde(rename = "R")]
    succ: Vec<u32>,
}

impl TryFrom<RelationJson> for Relation {
    type Error = Error;
    fn try_from(raw: RelationJson) -> Result<Relation> {
        Relation::new(raw.n, raw.succ.into_iter().map(Subset).collect())
    }
}

impl From<Relation> for RelationJson {
    fn from(r: Relation) -> RelationJson {
        RelationJson {
            n: r.n,
            succ: r.succ.iter().map(|s| s.0).collect(),
        }
    }
}

impl Relation {
    pub fn new(n: usize, succ: Vec<Subset>) -> Result<Relation> {
        check_width(n, MAX_N, "relation")?;
        if succ.len() != n || succ.iter().any(|s| !s.fits(n)) {
            return Err(Error::invalid(format!(
                "relation of size {n} needs {n} successor sets within width {n}"
            )));
        }
        Ok(Relation { n, succ })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn successors(&self, x: usize) -> Subset {
        self.succ[x]
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|x| {
            self.succ[x]
                .points()
                .all(|y| self.succ[y].is_subset_of(self.succ[x]))
        })
    }

    /// Transitive closure.
    pub fn transitive_closure(&self) -> Relation {
        let mut succ = self.succ.clone();
        loop {
            let mut changed = false;
            for x in 0..self.n {
                let extra = succ[x]
                    .points()
                    .fold(succ[x], |acc, y| acc | succ[y]);
                if extra != succ[x] {
                    succ[x] = extra;
                    changed = true;
                }
            }
            if !changed {
                return Relation { n: self.n, succ };
            }
        }
    }
}

/// A function between ground sets, viewed as a candidate frame morphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MorphismJson", into = "MorphismJson")]
pub struct FrameMorphism {
    n_dom: usize,
    n_cod: usize,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    n_dom: usize,
    n_cod: usize,
    map: Vec<usize>,
}

impl TryFrom<MorphismJson> for FrameMorphism {
    type Error = Error;
    fn try_from(raw: MorphismJson) -> Result<FrameMorphism> {
        FrameMorphism::new(raw.n_dom, raw.n_cod, raw.map)
    }
}

impl From<FrameMorphism> for MorphismJson {
    fn from(m: FrameMorphism) -> MorphismJson {
        MorphismJson {
            n_dom: m.n_dom,
            n_cod: m.n_cod,
            map: m.map,
        }
    }
}

fn check_point_map(n_dom: usize, n_cod: usize, map: &[usize]) -> Result<()> {
    check_width(n_dom, MAX_N, "map domain")?;
    check_width(n_cod, MAX_N, "map codomain")?;
    if map.len() != n_dom {
        return Err(Error::invalid(format!(
            "map needs {n_dom} entries, got {}",
            map.len()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= n_cod) {
        return Err(Error::invalid(format!(
            "map entry {bad} out of range for codomain of size {n_cod}"
        )));
    }
    Ok(())
}

impl FrameMorphism {
    pub fn new(n_dom: usize, n_cod: usize, map: Vec<usize>) -> Result<FrameMorphism> {
        check_point_map(n_dom, n_cod, &map)?;
        Ok(FrameMorphism { n_dom, n_cod, map })
    }

    pub fn identity(n: usize) -> FrameMorphism {
        FrameMorphism {
            n_dom: n,
            n_cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn constant(n_dom: usize, n_cod: usize, target: usize) -> Result<FrameMorphism> {
        FrameMorphism::new(n_dom, n_cod, vec![target; n_dom])
    }

    /// Every function `{0..n_dom} → {0..n_cod}`, in lexicographic order of
    /// the map vector.
    pub fn all(n_dom: usize, n_cod: usize) -> impl Iterator<Item = FrameMorphism> {
        let total = if n_dom == 0 { 1 } else { n_cod.pow(n_dom as u32) };
        (0..total).map(move |mut code| {
            let mut map = vec![0; n_dom];
            for slot in map.iter_mut().rev() {
                *slot = code % n_cod.max(1);
                code /= n_cod.max(1);
            }
            FrameMorphism { n_dom, n_cod, map }
        })
    }

    pub fn n_dom(&self) -> usize {
        self.n_dom
    }

    pub fn n_cod(&self) -> usize {
        self.n_cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `f⁻¹(b)`.
    pub fn preimage(&self, b: Subset) -> Subset {
        let mut out = 0u32;
        for (x, &y) in self.map.iter().enumerate() {
            if b.contains(y) {
                out |= 1 << x;
            }
        }
        Subset(out)
    }

    /// `f[a]`.
    pub fn image(&self, a: Subset) -> Subset {
        Subset::from_points(a.points().map(|x| self.map[x]))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FrameMorphism) -> Result<FrameMorphism> {
        if self.n_cod != next.n_dom {
            return Err(Error::invalid(format!(
                "cannot compose: codomain {} vs domain {}",
                self.n_cod, next.n_dom
            )));
        }
        Ok(FrameMorphism {
            n_dom: self.n_dom,
            n_cod: next.n_cod,
            map: self.map.iter().map(|&y| next.map[y]).collect(),
        })
    }

    /// Checks `a' ∈ N'(f(x)) ⟺ f⁻¹(a') ∈ N(x)` for every point and every
    /// subset of the codomain.
    pub fn is_nbhd_morphism(&self, dom: &Frame, cod: &Frame) -> Result<bool> {
        Ok(self.morphism_witness(dom, cod)?.is_none())
    }

    /// A failing `(x, a')` pair, if any.
    pub fn morphism_witness(&self, dom: &Frame, cod: &Frame) -> Result<Option<(usize, Subset)>> {
        self.check_frames(dom, cod)?;
        for x in 0..self.n_dom {
            let here = dom.nbhd(x);
            let there = cod.nbhd(self.map[x]);
            for b in Subset::all(self.n_cod) {
                if there.contains(b) != here.contains(self.preimage(b)) {
                    return Ok(Some((x, b)));
                }
            }
        }
        Ok(None)
    }

    pub(crate) fn check_frames(&self, dom: &Frame, cod: &Frame) -> Result<()> {
        if dom.n() != self.n_dom || cod.n() != self.n_cod {
            return Err(Error::invalid(format!(
                "morphism {}→{} applied to frames of sizes {}→{}",
                self.n_dom,
                self.n_cod,
                dom.n(),
                cod.n()
            )));
        }
        Ok(())
    }
}

/// A complete Boolean homomorphism `℘Y → ℘Z` between powerset algebras,
/// stored by its action on atoms: `h(a) = { z | atom_map[z] ∈ a }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HomJson", into = "HomJson")]
pub struct CompleteHom {
    n_dom: usize,
    n_cod: usize,
    atom_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct HomJson {
    n_dom: usize,
    n_cod: usize,
    atom_map: Vec<usize>,
}

impl TryFrom<HomJson> for CompleteHom {
    type Error = Error;
    fn try_from(raw: HomJson) -> Result<CompleteHom> {
        CompleteHom::new(raw.n_dom, raw.n_cod, raw.atom_map)
    }
}

impl From<CompleteHom> for HomJson {
    fn from(h: CompleteHom) -> HomJson {
        HomJson {
            n_dom: h.n_dom,
            n_cod: h.n_cod,
            atom_map: h.atom_map,
        }
    }
}

impl CompleteHom {
    pub fn new(n_dom: usize, n_cod: usize, atom_map: Vec<usize>) -> Result<CompleteHom> {
        check_point_map(n_cod, n_dom, &atom_map)?;
        Ok(CompleteHom {
            n_dom,
            n_cod,
            atom_map,
        })
    }

    pub fn identity(n: usize) -> CompleteHom {
        CompleteHom {
            n_dom: n,
            n_cod: n,
            atom_map: (0..n).collect(),
        }
    }

    pub fn n_dom(&self) -> usize {
        self.n_dom
    }

    pub fn n_cod(&self) -> usize {
        self.n_cod
    }

    pub fn atom_map(&self) -> &[usize] {
        &self.atom_map
    }

    pub fn apply(&self, a: Subset) -> Subset {
        let mut out = 0u32;
        for (z, &y) in self.atom_map.iter().enumerate() {
            if a.contains(y) {
                out |= 1 << z;
            }
        }
        Subset(out)
    }

    /// The full element table `a ↦ h(a)`.
    pub fn table(&self) -> Vec<Subset> {
        Subset::all(self.n_dom).map(|a| self.apply(a)).collect()
    }

    /// Checks `h(□a) = □'h(a)` for all `a`, where `h : dom → cod`.
    pub fn is_complete_nbhd_hom(&self, dom: &Algebra, cod: &Algebra) -> Result<bool> {
        if dom.n() != self.n_dom || cod.n() != self.n_cod {
            return Err(Error::invalid(format!(
                "hom {}→{} applied to algebras of sizes {}→{}",
                self.n_dom,
                self.n_cod,
                dom.n(),
                cod.n()
            )));
        }
        Ok(Subset::all(self.n_dom).all(|a| self.apply(dom.apply(a)) == cod.apply(self.apply(a))))
    }
}
