//! The set functor `B_Ax`: on objects, the Ax-subsets of `℘X`; on maps,
//! `W ↦ { a' | f⁻¹(a') ∈ W }`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsl::AxiomSet;
use crate::duality::lax_algebra;
use crate::error::{Error, Result};
use crate::eval::PreparedAxioms;
use crate::frame::FrameMorphism;
use crate::subset::{check_width, Family, Subset, MAX_FAMILY_N};

/// Largest ground set for the brute filter over all `2^(2^n)` families.
pub const MAX_FILTER_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Test every family.
    Filter,
    /// Generate only up-closed families, then test the rest of the axioms.
    UpsetBacktrack,
}

impl Strategy {
    /// Backtracking when the axioms force up-closure, the filter otherwise.
    pub fn default_for(axs: &AxiomSet) -> Strategy {
        if axs.forces_monotone() {
            Strategy::UpsetBacktrack
        } else {
            Strategy::Filter
        }
    }
}

/// `B_Ax X` for `X = {0, .., n-1}`, members in ascending family order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BaxJson", into = "BaxJson")]
pub struct BaxSpace {
    n: usize,
    axioms: AxiomSet,
    members: Vec<Family>,
}

#[derive(Serialize, Deserialize)]
struct BaxJson {
    n: usize,
    axioms: Vec<String>,
    members: Vec<Vec<u32>>,
}

impl TryFrom<BaxJson> for BaxSpace {
    type Error = Error;
    fn try_from(raw: BaxJson) -> Result<BaxSpace> {
        check_width(raw.n, MAX_FAMILY_N, "B_Ax space")?;
        let axioms = AxiomSet::from_names(&raw.axioms, raw.n)?;
        let prepared = PreparedAxioms::new(&axioms, raw.n)?;
        let members = raw
            .members
            .iter()
            .map(|m| Family::from_masks(raw.n, m))
            .collect::<Result<Vec<_>>>()?;
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("B_Ax members must be strictly ascending"));
        }
        if let Some(bad) = members.iter().find(|w| !prepared.admits(w)) {
            return Err(Error::invalid(format!(
                "{bad:?} is not an Ax-subset for {axioms}"
            )));
        }
        Ok(BaxSpace {
            n: raw.n,
            axioms,
            members,
        })
    }
}

impl From<BaxSpace> for BaxJson {
    fn from(b: BaxSpace) -> BaxJson {
        BaxJson {
            n: b.n,
            axioms: b.axioms.names().to_vec(),
            members: b.members.iter().map(Family::masks).collect(),
        }
    }
}

impl BaxSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn axioms(&self) -> &AxiomSet {
        &self.axioms
    }

    pub fn members(&self) -> &[Family] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Position of `w`, which doubles as its atom index in `L_Ax(℘X)`.
    pub fn index_of(&self, w: &Family) -> Option<usize> {
        self.members.binary_search(w).ok()
    }

    pub fn contains(&self, w: &Family) -> bool {
        self.index_of(w).is_some()
    }
}

/// Enumerates every Ax-subset of `℘X`.
pub fn enumerate_bax(n: usize, axs: &AxiomSet, strategy: Strategy) -> Result<BaxSpace> {
    let prepared = PreparedAxioms::new(axs, n)?;
    let members = match strategy {
        Strategy::Filter => {
            check_width(n, MAX_FILTER_N, "filter enumeration")?;
            let total = 1u64 << (1u32 << n);
            (0..total)
                .into_par_iter()
                .map(|bits| Family::from_bits(n, bits))
                .filter(|w| prepared.admits(w))
                .collect()
        }
        Strategy::UpsetBacktrack => {
            check_width(n, MAX_FAMILY_N, "up-set enumeration")?;
            if !axs.forces_monotone() {
                return Err(Error::Precondition(format!(
                    "up-set backtracking needs @M, @CInf or @Ck(k≥3) in {axs}"
                )));
            }
            let mut found: Vec<Family> = upsets(n)
                .into_par_iter()
                .map(|bits| Family::from_bits(n, bits))
                .filter(|w| prepared.admits(w))
                .collect();
            found.sort_unstable();
            found
        }
    };
    Ok(BaxSpace {
        n,
        axioms: axs.clone(),
        members,
    })
}

/// Characteristic bitsets of every up-closed family over `n ≤ 5` points.
///
/// Subsets are decided from the top mask downward, so all proper supersets
/// of a subset are decided before it; a subset may join only if each of its
/// one-point extensions already has.
pub fn upsets(n: usize) -> Vec<u64> {
    assert!(n <= MAX_FAMILY_N);
    let top = (1u32 << n) as i32 - 1;
    let mut out = Vec::new();
    fn go(n: usize, a: i32, bits: u64, out: &mut Vec<u64>) {
        if a < 0 {
            out.push(bits);
            return;
        }
        let a_u = a as u32;
        let extensions_in = (0..n)
            .filter(|&i| a_u & (1 << i) == 0)
            .all(|i| bits >> (a_u | (1 << i)) & 1 == 1);
        go(n, a - 1, bits, out);
        if extensions_in {
            go(n, a - 1, bits | (1u64 << a_u), out);
        }
    }
    go(n, top, 0, &mut out);
    out
}

/// `B_Ax f (W) = { a' ⊆ X' | f⁻¹(a') ∈ W }`; `W` must be an Ax-subset.
pub fn bax_map(f: &FrameMorphism, w: &Family, axs: &AxiomSet) -> Result<Family> {
    if w.n() != f.n_dom() {
        return Err(Error::invalid(format!(
            "family over {} points given to a map from {} points",
            w.n(),
            f.n_dom()
        )));
    }
    if !PreparedAxioms::new(axs, w.n())?.admits(w) {
        return Err(Error::Precondition(format!(
            "{w:?} is not an Ax-subset for {axs}"
        )));
    }
    Ok(pushforward(f, w))
}

/// The family part of `bax_map` without the Ax-subset check.
pub fn pushforward(f: &FrameMorphism, w: &Family) -> Family {
    let mut out = Family::empty(f.n_cod());
    for b in Subset::all(f.n_cod()) {
        if w.contains(f.preimage(b)) {
            out.insert(b);
        }
    }
    out
}

/// The smallest member of a principal up-cone family.
pub fn principal_to_subset(w: &Family) -> Result<Subset> {
    let least = w.meet();
    if w.is_empty() || *w != Family::up_cone(w.n(), least) {
        return Err(Error::invalid(format!("{w:?} is not a principal up-cone")));
    }
    Ok(least)
}

/// `↑c`, the principal family generated by `c`.
pub fn principal_from_subset(n: usize, c: Subset) -> Result<Family> {
    check_width(n, crate::subset::MAX_N, "principal family")?;
    if !c.fits(n) {
        return Err(Error::invalid(format!("subset {} does not fit n={n}", c.0)));
    }
    Ok(Family::up_cone(n, c))
}

/// Outcome of [`naturality_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NaturalityReport {
    /// Domain Ax-subsets examined.
    pub checked: usize,
    /// Members whose image left `B_Ax X'` or disagreed with the atom-side
    /// computation through `L_Ax`.
    pub failures: Vec<Vec<u32>>,
    /// Members examined for `B(g∘f) = Bg∘Bf`.
    pub composition_checked: usize,
    pub composition_failures: Vec<Vec<u32>>,
}

impl NaturalityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.composition_failures.is_empty()
    }
}

/// Checks the naturality square between `B_Ax f` and the dual of
/// `L_Ax(℘f)` on every member of `B_Ax X`, and, if `next` is given,
/// functoriality on the composite. `sample` limits the composite check to a
/// seeded random subset of members.
pub fn naturality_check(
    f: &FrameMorphism,
    axs: &AxiomSet,
    next: Option<&FrameMorphism>,
    sample: Option<(usize, u64)>,
) -> Result<NaturalityReport> {
    let strategy = Strategy::default_for(axs);
    let dom = lax_algebra(f.n_dom(), axs, strategy)?;
    let cod = lax_algebra(f.n_cod(), axs, strategy)?;
    let mut report = NaturalityReport::default();

    for (i, w) in dom.bax().members().iter().enumerate() {
        report.checked += 1;
        let image = pushforward(f, w);
        let via_atoms = dom.dual_atom(i, f, &cod);
        let ok = match via_atoms {
            Some(j) => cod.bax().members()[j] == image,
            None => false,
        };
        if !ok {
            report.failures.push(w.masks());
        }
    }

    if let Some(g) = next {
        let composite = f.then(g)?;
        let mut idx: Vec<usize> = (0..dom.bax().len()).collect();
        if let Some((k, seed)) = sample {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            idx.shuffle(&mut rng);
            idx.truncate(k);
            idx.sort_unstable();
        }
        for i in idx {
            let w = &dom.bax().members()[i];
            report.composition_checked += 1;
            if pushforward(&composite, w) != pushforward(g, &pushforward(f, w)) {
                report.composition_failures.push(w.masks());
            }
        }
    }
    Ok(report)
}
