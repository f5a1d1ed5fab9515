//! General frames `(X, N, A)`: neighborhoods together with an admissible
//! Boolean set algebra `A`, and the σ/π-extensions of `N` to all subsets.
//!
//! On a finite carrier the topology generated by `A` has exactly the members
//! of `A` as its clopens, so both the closed witnesses `c` and the open
//! witnesses `d` range over `A`.

use rand::{Rng, RngExt};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameMorphism};
use crate::subset::{check_width, Family, Subset, MAX_FAMILY_N};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GenJson", into = "GenJson")]
pub struct GeneralFrame {
    n: usize,
    nbhd: Vec<Family>,
    admissible: Family,
}

#[derive(Serialize, Deserialize)]
struct GenJson {
    n: usize,
    #[serde(rename = "N")]
    nbhd: Vec<Vec<u32>>,
    #[serde(rename = "A")]
    admissible: Vec<u32>,
}

impl TryFrom<GenJson> for GeneralFrame {
    type Error = Error;
    fn try_from(raw: GenJson) -> Result<GeneralFrame> {
        check_width(raw.n, MAX_FAMILY_N, "general frame")?;
        let nbhd = raw
            .nbhd
            .iter()
            .map(|m| Family::from_masks(raw.n, m))
            .collect::<Result<Vec<_>>>()?;
        let a = Family::from_masks(raw.n, &raw.admissible)?;
        GeneralFrame::new(raw.n, nbhd, a)
    }
}

impl From<GeneralFrame> for GenJson {
    fn from(g: GeneralFrame) -> GenJson {
        GenJson {
            n: g.n,
            nbhd: g.nbhd.iter().map(Family::masks).collect(),
            admissible: g.admissible.masks(),
        }
    }
}

/// `A` contains `∅` and `X` and is closed under complement and union.
pub fn is_boolean_subalgebra(n: usize, a: &Family) -> bool {
    let full = Subset::full(n);
    if a.n() != n || !a.contains(Subset::EMPTY) || !a.contains(full) {
        return false;
    }
    let members: Vec<Subset> = a.members().collect();
    members.iter().all(|&x| a.contains(x ^ full))
        && members
            .iter()
            .all(|&x| members.iter().all(|&y| a.contains(x | y)))
}

impl GeneralFrame {
    pub fn new(n: usize, nbhd: Vec<Family>, admissible: Family) -> Result<GeneralFrame> {
        check_width(n, MAX_FAMILY_N, "general frame")?;
        let frame = Frame::new(n, nbhd)?;
        if !is_boolean_subalgebra(n, &admissible) {
            return Err(Error::invalid(
                "admissible sets must contain the empty and full set and be closed under complement and union",
            ));
        }
        for a in admissible.members() {
            let b = frame.box_unchecked(a);
            if !admissible.contains(b) {
                return Err(Error::invalid(format!(
                    "admissible sets not closed under box: box {a:?} = {b:?}"
                )));
            }
        }
        Ok(GeneralFrame {
            n,
            nbhd: frame.into_families(),
            admissible,
        })
    }

    /// `A = ℘X`.
    pub fn full(frame: &Frame) -> GeneralFrame {
        let n = frame.n();
        GeneralFrame {
            n,
            nbhd: frame.families().to_vec(),
            admissible: Family::full(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nbhd(&self, x: usize) -> &Family {
        &self.nbhd[x]
    }

    pub fn admissible(&self) -> &Family {
        &self.admissible
    }

    pub fn frame(&self) -> Frame {
        Frame::new(self.n, self.nbhd.clone()).expect("validated on construction")
    }

    /// Every neighborhood is admissible.
    pub fn is_tight(&self) -> bool {
        self.nbhd.iter().all(|f| f.is_subfamily_of(&self.admissible))
    }

    /// The first point with an inadmissible neighborhood.
    pub fn tightness_witness(&self) -> Option<(usize, Subset)> {
        self.nbhd.iter().enumerate().find_map(|(x, f)| {
            f.members()
                .find(|&a| !self.admissible.contains(a))
                .map(|a| (x, a))
        })
    }

    fn require_tight(&self) -> Result<()> {
        match self.tightness_witness() {
            None => Ok(()),
            Some((point, a)) => Err(Error::NotTight {
                point,
                set: a.mask(),
            }),
        }
    }

    /// Admissible sets separate points.
    pub fn is_differentiated(&self) -> bool {
        (0..self.n).all(|x| {
            (x + 1..self.n).all(|y| {
                self.admissible
                    .members()
                    .any(|a| a.contains(x) != a.contains(y))
            })
        })
    }

    /// Vacuous on a finite carrier.
    pub fn is_compact(&self) -> bool {
        true
    }
}

/// Unions of the blocks of a partition of `X`.
pub fn subalgebra_from_partition(n: usize, blocks: &[Subset]) -> Result<Family> {
    check_width(n, MAX_FAMILY_N, "partition")?;
    let mut seen = Subset::EMPTY;
    for &b in blocks {
        if b.is_empty() || !b.fits(n) || !(b & seen).is_empty() {
            return Err(Error::invalid(format!("{blocks:?} is not a partition of {n} points")));
        }
        seen = seen | b;
    }
    if seen != Subset::full(n) {
        return Err(Error::invalid(format!("{blocks:?} does not cover {n} points")));
    }
    let mut out = Family::empty(n);
    for pick in 0u32..(1 << blocks.len()) {
        let u = blocks
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .fold(Subset::EMPTY, |acc, (_, &b)| acc | b);
        out.insert(u);
    }
    Ok(out)
}

/// All set partitions of `{0, .., n-1}` in restricted-growth order.
pub fn partitions(n: usize) -> Vec<Vec<Subset>> {
    fn go(x: usize, n: usize, blocks: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i] = blocks[i] | Subset::singleton(x);
            go(x + 1, n, blocks, out);
            blocks[i] = Subset(blocks[i].mask() & !(1 << x));
        }
        blocks.push(Subset::singleton(x));
        go(x + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every Boolean subalgebra of `℘X`, one per partition.
pub fn subalgebras(n: usize) -> Result<Vec<Family>> {
    check_width(n, MAX_FAMILY_N, "subalgebra enumeration")?;
    partitions(n)
        .iter()
        .map(|p| subalgebra_from_partition(n, p))
        .collect()
}

/// Upper bound on frames produced by [`tight_frames`].
pub const MAX_TIGHT_FRAMES: usize = 1 << 20;

/// All tight general frames over `A`, neighborhoods chosen in ascending
/// family order, point 0 most significant.
pub fn tight_frames(n: usize, a: &Family) -> Result<Vec<GeneralFrame>> {
    check_width(n, MAX_FAMILY_N, "general frame")?;
    if !is_boolean_subalgebra(n, a) {
        return Err(Error::invalid("not a Boolean subalgebra"));
    }
    let members: Vec<Subset> = a.members().collect();
    let per_point = 1usize
        .checked_shl(members.len() as u32)
        .unwrap_or(usize::MAX);
    let total = per_point.checked_pow(n as u32).unwrap_or(usize::MAX);
    if total > MAX_TIGHT_FRAMES {
        return Err(Error::cap("tight general frames", MAX_TIGHT_FRAMES, total));
    }
    let choice = |bits: usize| {
        let mut f = Family::empty(n);
        for (i, &m) in members.iter().enumerate() {
            if bits >> i & 1 == 1 {
                f.insert(m);
            }
        }
        f
    };
    let out = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let nbhd = (0..n)
                .map(|x| choice(code / per_point.pow((n - 1 - x) as u32) % per_point))
                .collect();
            GeneralFrame::new(n, nbhd, a.clone()).ok()
        })
        .collect();
    Ok(out)
}

/// A uniformly drawn tight frame over `A` that passes the box-closure test,
/// by rejection; `None` after `tries` misses.
pub fn random_tight<R: Rng + ?Sized>(
    n: usize,
    a: &Family,
    rng: &mut R,
    tries: usize,
) -> Option<GeneralFrame> {
    let members: Vec<Subset> = a.members().collect();
    for _ in 0..tries {
        let nbhd = (0..n)
            .map(|_| {
                let mut f = Family::empty(n);
                for &m in &members {
                    if rng.random::<bool>() {
                        f.insert(m);
                    }
                }
                f
            })
            .collect();
        if let Ok(g) = GeneralFrame::new(n, nbhd, a.clone()) {
            return Some(g);
        }
    }
    None
}

fn between(c: Subset, d: Subset, a: &Family) -> impl Iterator<Item = Subset> + '_ {
    a.members()
        .filter(move |&m| c.is_subset_of(m) && m.is_subset_of(d))
}

/// Admissible pairs `c ⊆ d`.
fn admissible_pairs(a: &Family) -> Vec<(Subset, Subset)> {
    let members: Vec<Subset> = a.members().collect();
    let mut out = Vec::new();
    for &c in &members {
        for &d in &members {
            if c.is_subset_of(d) {
                out.push((c, d));
            }
        }
    }
    out
}

/// `{ e | ∃ c ⊆ e ⊆ d in A with [c,d] ∩ A ⊆ N(x) }`, no tightness assumed.
fn sigma_family(n: usize, nx: &Family, a: &Family, pairs: &[(Subset, Subset)]) -> Family {
    let mut out = Family::empty(n);
    for &(c, d) in pairs {
        if between(c, d, a).all(|m| nx.contains(m)) {
            for e in c.interval(d) {
                out.insert(e);
            }
        }
    }
    out
}

/// `{ e | ∀ c ⊆ e ⊆ d in A, [c,d] ∩ A ∩ N(x) ≠ ∅ }`.
fn pi_family(n: usize, nx: &Family, a: &Family, pairs: &[(Subset, Subset)]) -> Family {
    let mut out = Family::full(n);
    for &(c, d) in pairs {
        if !between(c, d, a).any(|m| nx.contains(m)) {
            for e in c.interval(d) {
                out.remove(e);
            }
        }
    }
    out
}

type Extension = fn(usize, &Family, &Family, &[(Subset, Subset)]) -> Family;

fn extend(gf: &GeneralFrame, ext: Extension) -> Frame {
    let pairs = admissible_pairs(&gf.admissible);
    let nbhd = gf
        .nbhd
        .par_iter()
        .map(|nx| ext(gf.n, nx, &gf.admissible, &pairs))
        .collect();
    Frame::new(gf.n, nbhd).expect("same width")
}

/// `N^σ` on all of `℘X`.
pub fn sigma_extend(gf: &GeneralFrame) -> Result<Frame> {
    gf.require_tight()?;
    Ok(extend(gf, sigma_family))
}

/// `N^π` on all of `℘X`.
pub fn pi_extend(gf: &GeneralFrame) -> Result<Frame> {
    gf.require_tight()?;
    Ok(extend(gf, pi_family))
}

/// `N^c_A(x) = A ∖ N(x)`.
pub fn complement_within(gf: &GeneralFrame) -> Result<GeneralFrame> {
    gf.require_tight()?;
    let nbhd = gf
        .nbhd
        .iter()
        .map(|f| gf.admissible.difference(f))
        .collect();
    GeneralFrame::new(gf.n, nbhd, gf.admissible.clone())
}

/// `N_A(x) = N(x) ∩ A`.
pub fn truncate(frame: &Frame, a: &Family) -> Result<GeneralFrame> {
    let nbhd = frame.families().iter().map(|f| f.intersection(a)).collect();
    GeneralFrame::new(frame.n(), nbhd, a.clone())
}

/// `e ∈ N(x)` exactly when some admissible interval around `e` lies in `N(x)`.
pub fn is_sigma_descriptive(gf: &GeneralFrame) -> bool {
    let pairs = admissible_pairs(&gf.admissible);
    gf.nbhd
        .iter()
        .all(|nx| sigma_family(gf.n, nx, &gf.admissible, &pairs) == *nx)
}

/// `e ∈ N(x)` exactly when every admissible interval around `e` meets `N(x)`
/// in an admissible set.
pub fn is_pi_descriptive(gf: &GeneralFrame) -> bool {
    let pairs = admissible_pairs(&gf.admissible);
    gf.nbhd
        .iter()
        .all(|nx| pi_family(gf.n, nx, &gf.admissible, &pairs) == *nx)
}

/// Outcome of [`sigma_morphism_transfer`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    /// `f` is a neighborhood morphism between the σ-extensions.
    pub morphism: bool,
    /// First `(x, a')` with `a' ∈ N'^σ(f x)` disagreeing with `f⁻¹a' ∈ N^σ(x)`.
    pub witness: Option<(usize, u32)>,
    pub dom_sigma_convex: bool,
    pub cod_sigma_convex: bool,
}

impl TransferReport {
    pub fn pass(&self) -> bool {
        self.morphism
    }
}

/// Checks that `f` is a morphism of general frames, i.e. for admissible
/// `a'`: `a' ∈ N'(f x) ⟺ f⁻¹a' ∈ N(x)` and `f⁻¹a'` is admissible.
pub fn admissible_morphism_witness(
    f: &FrameMorphism,
    gf: &GeneralFrame,
    gf2: &GeneralFrame,
) -> Result<Option<String>> {
    if f.n_dom() != gf.n || f.n_cod() != gf2.n {
        return Err(Error::invalid(format!(
            "map {}→{} does not fit general frames of size {} and {}",
            f.n_dom(),
            f.n_cod(),
            gf.n,
            gf2.n
        )));
    }
    for b in gf2.admissible.members() {
        let pre = f.preimage(b);
        if !gf.admissible.contains(pre) {
            return Ok(Some(format!(
                "preimage of admissible {b:?} is {pre:?}, which is not admissible"
            )));
        }
        for x in 0..gf.n {
            if gf2.nbhd[f.apply(x)].contains(b) != gf.nbhd[x].contains(pre) {
                return Ok(Some(format!(
                    "point {x}: {b:?} in N'(f x) disagrees with {pre:?} in N(x)"
                )));
            }
        }
    }
    Ok(None)
}

/// Given a general-frame morphism between tight frames, reports whether it
/// is a full neighborhood morphism between the σ-extensions.
pub fn sigma_morphism_transfer(
    f: &FrameMorphism,
    gf: &GeneralFrame,
    gf2: &GeneralFrame,
) -> Result<TransferReport> {
    if let Some(why) = admissible_morphism_witness(f, gf, gf2)? {
        return Err(Error::Precondition(why));
    }
    let dom = sigma_extend(gf)?;
    let cod = sigma_extend(gf2)?;
    let witness = f
        .morphism_witness(&dom, &cod)?
        .map(|(x, b)| (x, b.mask()));
    Ok(TransferReport {
        morphism: witness.is_none(),
        witness,
        dom_sigma_convex: dom.families().iter().all(Family::is_convex),
        cod_sigma_convex: cod.families().iter().all(Family::is_convex),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, masks: &[u32]) -> Family {
        Family::from_masks(n, masks).unwrap()
    }

    fn gen(n: usize, nbhd: &[&[u32]], a: &[u32]) -> GeneralFrame {
        GeneralFrame::new(
            n,
            nbhd.iter().map(|m| fam(n, m)).collect(),
            fam(n, a),
        )
        .unwrap()
    }

    #[test]
    fn partition_subalgebras() {
        assert_eq!(subalgebra_from_partition(2, &[Subset(3)]).unwrap().masks(), vec![0, 3]);
        assert_eq!(
            subalgebra_from_partition(2, &[Subset(1), Subset(2)]).unwrap(),
            Family::full(2)
        );
        assert_eq!(
            subalgebra_from_partition(3, &[Subset(1), Subset(6)]).unwrap().masks(),
            vec![0, 1, 6, 7]
        );
        assert!(subalgebra_from_partition(2, &[Subset(1)]).is_err());
        assert!(subalgebra_from_partition(2, &[Subset(3), Subset(1)]).is_err());
        assert_eq!(partitions(3).len(), 5);
        assert_eq!(partitions(4).len(), 15);
        assert_eq!(partitions(0).len(), 1);
    }

    #[test]
    fn validation() {
        let bad_a = GeneralFrame::new(2, vec![Family::empty(2); 2], fam(2, &[0, 1, 3]));
        assert!(bad_a.is_err());
        // box {0,1} = {0}, not admissible in {∅, X}
        let not_closed = GeneralFrame::new(2, vec![fam(2, &[3]), fam(2, &[])], fam(2, &[0, 3]));
        assert!(not_closed.is_err());
        let g = gen(2, &[&[3], &[1]], &[0, 1, 2, 3]);
        assert!(g.is_tight() && g.is_differentiated());
        let coarse = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        assert!(coarse.is_tight() && !coarse.is_differentiated());
    }

    #[test]
    fn sigma_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        let s = sigma_extend(&g).unwrap();
        assert!(s.families().iter().all(|f| *f == Family::full(2)));
        let empty = gen(2, &[&[], &[]], &[0, 3]);
        assert!(sigma_extend(&empty).unwrap().families().iter().all(Family::is_empty));
        let full = gen(2, &[&[1, 3], &[0]], &[0, 1, 2, 3]);
        assert_eq!(sigma_extend(&full).unwrap(), full.frame());
    }

    #[test]
    fn pi_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        assert!(pi_extend(&g).unwrap().families().iter().all(|f| *f == Family::full(2)));
        let empty = gen(2, &[&[], &[]], &[0, 3]);
        assert!(pi_extend(&empty).unwrap().families().iter().all(Family::is_empty));
        let full = gen(2, &[&[1, 3], &[0]], &[0, 1, 2, 3]);
        assert_eq!(pi_extend(&full).unwrap(), full.frame());
    }

    #[test]
    fn extensions_need_tightness() {
        let loose = gen(2, &[&[1], &[1]], &[0, 1, 2, 3]);
        let loose = GeneralFrame {
            admissible: fam(2, &[0, 3]),
            ..loose
        };
        assert!(matches!(sigma_extend(&loose), Err(Error::NotTight { point: 0, set: 1 })));
        assert!(pi_extend(&loose).is_err());
        assert!(complement_within(&loose).is_err());
    }

    #[test]
    fn complement_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        assert!(complement_within(&g).unwrap().nbhd.iter().all(Family::is_empty));
        let h = gen(2, &[&[3], &[3]], &[0, 3]);
        let c = complement_within(&h).unwrap();
        assert_eq!(c.nbhd(0).masks(), vec![0]);
        assert_eq!(complement_within(&c).unwrap(), h);
    }

    #[test]
    fn truncate_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        assert_eq!(truncate(&sigma_extend(&g).unwrap(), g.admissible()).unwrap(), g);
        let f = Frame::from_masks(2, &[&[1, 3], &[0]]);
        assert_eq!(truncate(&f, &Family::full(2)).unwrap(), GeneralFrame::full(&f));
        let all = Frame::uniform(2, &Family::full(2));
        let t = truncate(&all, &fam(2, &[0, 3])).unwrap();
        assert_eq!(t.nbhd(1).masks(), vec![0, 3]);
    }

    #[test]
    fn descriptive_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        let s = sigma_extend(&g).unwrap();
        let lifted = GeneralFrame::new(2, s.families().to_vec(), fam(2, &[0, 3])).unwrap();
        assert!(is_sigma_descriptive(&lifted));
        // the only interval inside N(x) = {X} is [X, X], which contains only X
        let h = gen(2, &[&[3], &[3]], &[0, 3]);
        assert!(is_sigma_descriptive(&h));
        for bits in 0..16u64 {
            let f = Family::from_bits(2, bits);
            let full = GeneralFrame::full(&Frame::uniform(2, &f));
            assert!(is_sigma_descriptive(&full));
            assert!(is_pi_descriptive(&full));
        }
    }

    #[test]
    fn transfer_examples() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        let id = FrameMorphism::identity(2);
        assert!(sigma_morphism_transfer(&id, &g, &g).unwrap().pass());
        let c = FrameMorphism::constant(2, 2, 0).unwrap();
        assert!(sigma_morphism_transfer(&c, &g, &g).unwrap().pass());
        let other = gen(2, &[&[3], &[3]], &[0, 3]);
        assert!(matches!(
            sigma_morphism_transfer(&id, &g, &other),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn json_shape() {
        let g = gen(2, &[&[0, 3], &[0, 3]], &[0, 3]);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":2,"N":[[0,3],[0,3]],"A":[0,3]}"#);
        assert_eq!(serde_json::from_str::<GeneralFrame>(&text).unwrap(), g);
        assert!(serde_json::from_str::<GeneralFrame>(r#"{"n":2,"N":[[3],[]],"A":[0,3]}"#).is_err());
    }

    #[test]
    fn tight_enumeration() {
        assert_eq!(tight_frames(2, &Family::full(2)).unwrap().len(), 256);
        let coarse = tight_frames(2, &fam(2, &[0, 3])).unwrap();
        assert!(coarse.iter().all(GeneralFrame::is_tight));
        assert!(!coarse.is_empty());
        assert!(tight_frames(3, &Family::full(3)).is_err());
    }
}
