//! Frames versus powerset algebras with a box, point maps versus complete
//! homomorphisms, and the atom-level realization of `L_Ax(℘X)`.

use fixedbitset::FixedBitSet;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dsl::{Formula, OneStepAxiom};
use crate::error::{Error, Result};
use crate::frame::{Algebra, CompleteHom, Frame, FrameMorphism};
use crate::functor::{enumerate_bax, BaxSpace, Strategy};
use crate::subset::{Family, Subset};
use crate::dsl::AxiomSet;

/// `(℘X, □_N)` with `□_N a = { x | a ∈ N(x) }`.
pub fn complex_algebra(frame: &Frame) -> Algebra {
    Algebra::from_fn(frame.n(), |a| frame.box_unchecked(a))
}

/// The frame with `N(x) = { a | x ∈ □a }`.
pub fn atom_frame(alg: &Algebra) -> Frame {
    let n = alg.n();
    let mut nbhd = vec![Family::empty(n); n];
    for a in Subset::all(n) {
        for x in alg.apply(a).points() {
            nbhd[x].insert(a);
        }
    }
    Frame::new(n, nbhd).expect("widths agree")
}

/// `f : X → X'` becomes the inverse-image map `℘X' → ℘X`.
pub fn dualize_frame_morphism(f: &FrameMorphism) -> CompleteHom {
    CompleteHom::new(f.n_cod(), f.n_dom(), f.map().to_vec()).expect("point map in range")
}

/// A complete homomorphism `℘Y → ℘Z` becomes its atom map `Z → Y`.
pub fn dualize_complete_hom(h: &CompleteHom) -> FrameMorphism {
    FrameMorphism::new(h.n_cod(), h.n_dom(), h.atom_map().to_vec()).expect("atom map in range")
}

/// `L_Ax(℘X)` as the powerset of its atoms, which are the Ax-subsets; the
/// generator `⊡a` is the set of atoms (families) containing `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxAlgebra {
    bax: BaxSpace,
    gen: Vec<FixedBitSet>,
}

impl Serialize for LaxAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gen: Vec<Vec<usize>> = self.gen.iter().map(|g| g.ones().collect()).collect();
        let mut st = s.serialize_struct("LaxAlgebra", 2)?;
        st.serialize_field("bax", &self.bax)?;
        st.serialize_field("gen", &gen)?;
        st.end()
    }
}

impl LaxAlgebra {
    pub fn from_bax(bax: BaxSpace) -> LaxAlgebra {
        let atoms = bax.len();
        let gen = Subset::all(bax.n())
            .map(|a| {
                let mut set = FixedBitSet::with_capacity(atoms);
                for (i, w) in bax.members().iter().enumerate() {
                    if w.contains(a) {
                        set.insert(i);
                    }
                }
                set
            })
            .collect();
        LaxAlgebra { bax, gen }
    }

    pub fn bax(&self) -> &BaxSpace {
        &self.bax
    }

    pub fn atom_count(&self) -> usize {
        self.bax.len()
    }

    /// `⊡a` as a set of atom indices.
    pub fn gen(&self, a: Subset) -> &FixedBitSet {
        &self.gen[a.index()]
    }

    fn all_atoms(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.atom_count());
        s.insert_range(..);
        s
    }

    /// Any two distinct atoms differ on some generator.
    pub fn generators_separate(&self) -> bool {
        let k = self.atom_count();
        (0..k).all(|i| {
            (i + 1..k).all(|j| self.gen.iter().any(|g| g.contains(i) != g.contains(j)))
        })
    }

    /// The atom of `cod` hit by atom `i` of `self` under the dual of
    /// `L_Ax(℘f) : ⊡a' ↦ ⊡f⁻¹(a')`, when that meet is a single atom.
    pub(crate) fn dual_atom(&self, i: usize, f: &FrameMorphism, cod: &LaxAlgebra) -> Option<usize> {
        let mut candidates = cod.all_atoms();
        for b in Subset::all(f.n_cod()) {
            let on = self.gen(f.preimage(b)).contains(i);
            let g = cod.gen(b);
            if on {
                candidates.intersect_with(g);
            } else {
                candidates.difference_with(g);
            }
        }
        let mut ones = candidates.ones();
        match (ones.next(), ones.next()) {
            (Some(j), None) => Some(j),
            _ => None,
        }
    }
}

/// Builds `L_Ax(℘X)` over `X = {0, .., n-1}`.
pub fn lax_algebra(n: usize, axs: &AxiomSet, strategy: Strategy) -> Result<LaxAlgebra> {
    Ok(LaxAlgebra::from_bax(enumerate_bax(n, axs, strategy)?))
}

fn atoms_node(f: &Formula, lax: &LaxAlgebra, vars: &[String], vals: &[Subset], full: Subset) -> FixedBitSet {
    match f {
        Formula::Box(p) => lax.gen(bool_value(p, vars, vals, full)).clone(),
        Formula::Top => lax.all_atoms(),
        Formula::Not(p) => {
            let mut s = atoms_node(p, lax, vars, vals, full);
            s.toggle_range(..);
            s
        }
        Formula::And(ps) => ps.iter().fold(lax.all_atoms(), |mut acc, p| {
            acc.intersect_with(&atoms_node(p, lax, vars, vals, full));
            acc
        }),
        Formula::Var(_) => unreachable!("one-step formulas have no naked variables"),
    }
}

fn bool_value(f: &Formula, vars: &[String], vals: &[Subset], full: Subset) -> Subset {
    match f {
        Formula::Var(v) => vals[vars.iter().position(|x| x == v).expect("var listed")],
        Formula::Top => full,
        Formula::Not(p) => bool_value(p, vars, vals, full) ^ full,
        Formula::And(ps) => ps
            .iter()
            .fold(full, |acc, p| acc & bool_value(p, vars, vals, full)),
        Formula::Box(_) => unreachable!("box-free argument"),
    }
}

/// Every instance of `ax`, read in `L_Ax(℘X)` through the generators, is the
/// top element.
pub fn onestep_top_check(lax: &LaxAlgebra, ax: &OneStepAxiom) -> Result<bool> {
    let f = ax.formula();
    let vars = f.free_vars();
    let n = lax.bax().n();
    let bits = n * vars.len();
    if bits > crate::eval::MAX_ASSIGNMENT_BITS {
        return Err(Error::cap(
            "assignment space",
            crate::eval::MAX_ASSIGNMENT_BITS,
            bits,
        ));
    }
    let full = Subset::full(n);
    let top = lax.all_atoms();
    let mask = (1u64 << n) - 1;
    let mut vals = vec![Subset::EMPTY; vars.len()];
    for code in 0..(1u64 << bits) {
        for (i, slot) in vals.iter_mut().enumerate() {
            *slot = Subset(((code >> (n * i)) & mask) as u32);
        }
        if atoms_node(f, lax, &vars, &vals, full) != top {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::registry::formula_for;

    fn axs(list: &str, n: usize) -> AxiomSet {
        AxiomSet::parse_list(list, n).unwrap()
    }

    fn one_step(name: &str) -> OneStepAxiom {
        OneStepAxiom::new(formula_for(name).unwrap()).unwrap()
    }

    #[test]
    fn complex_algebra_examples() {
        let f = Frame::from_masks(2, &[&[1, 3], &[0]]);
        let alg = complex_algebra(&f);
        assert_eq!(alg.table(), &[Subset(2), Subset(1), Subset(0), Subset(1)]);
        let full = complex_algebra(&Frame::uniform(2, &Family::full(2)));
        assert!(full.table().iter().all(|&s| s == Subset(3)));
        let none = complex_algebra(&Frame::uniform(2, &Family::empty(2)));
        assert!(none.table().iter().all(|&s| s == Subset(0)));
    }

    #[test]
    fn atom_frame_examples() {
        let alg = Algebra::new(2, vec![Subset(2), Subset(1), Subset(0), Subset(1)]).unwrap();
        assert_eq!(atom_frame(&alg), Frame::from_masks(2, &[&[1, 3], &[0]]));
        let id = atom_frame(&Algebra::identity(2));
        assert_eq!(id.nbhd(0).masks(), vec![1, 3]);
        assert_eq!(id.nbhd(1).masks(), vec![2, 3]);
        let zero = atom_frame(&Algebra::from_fn(2, |_| Subset(0)));
        assert!(zero.families().iter().all(Family::is_empty));
    }

    #[test]
    fn complete_hom_examples() {
        let alg = complex_algebra(&Frame::from_masks(2, &[&[1, 3], &[0]]));
        assert!(CompleteHom::identity(2).is_complete_nbhd_hom(&alg, &alg).unwrap());

        let f = FrameMorphism::constant(2, 1, 0).unwrap();
        let h = dualize_frame_morphism(&f);
        let small = complex_algebra(&Frame::from_masks(1, &[&[0, 1]]));
        let big = complex_algebra(&Frame::uniform(2, &Family::full(2)));
        assert!(h.is_complete_nbhd_hom(&small, &big).unwrap());

        let small_empty = complex_algebra(&Frame::from_masks(1, &[&[]]));
        assert!(!h.is_complete_nbhd_hom(&small_empty, &big).unwrap());
        assert!(h.is_complete_nbhd_hom(&big, &small).is_err());
    }

    #[test]
    fn dualize_round_trips() {
        let id = FrameMorphism::identity(3);
        assert_eq!(dualize_frame_morphism(&id), CompleteHom::identity(3));
        let c = FrameMorphism::constant(2, 1, 0).unwrap();
        assert_eq!(dualize_complete_hom(&dualize_frame_morphism(&c)), c);
    }

    #[test]
    fn lax_examples() {
        let free = lax_algebra(1, &AxiomSet::empty(), Strategy::Filter).unwrap();
        assert_eq!(free.atom_count(), 4);
        assert_eq!(free.gen(Subset(0)).count_ones(..), 2);

        let kripke = lax_algebra(2, &axs("@N,@C,@M", 2), Strategy::Filter).unwrap();
        assert_eq!(kripke.atom_count(), 4);
        for a in Subset::all(2) {
            let expected: Vec<usize> = kripke
                .bax()
                .members()
                .iter()
                .enumerate()
                .filter(|(_, w)| w.meet().is_subset_of(a))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(kripke.gen(a).ones().collect::<Vec<_>>(), expected);
        }

        let normal = lax_algebra(2, &axs("@N", 2), Strategy::Filter).unwrap();
        assert_eq!(normal.gen(Subset(3)).count_ones(..), normal.atom_count());
        assert!(normal.generators_separate());
    }

    #[test]
    fn top_check_examples() {
        let m = lax_algebra(2, &axs("@M", 2), Strategy::Filter).unwrap();
        assert!(onestep_top_check(&m, &one_step("M")).unwrap());
        let free = lax_algebra(1, &AxiomSet::empty(), Strategy::Filter).unwrap();
        assert!(!onestep_top_check(&free, &one_step("M")).unwrap());
        let top = OneStepAxiom::new(Formula::Top).unwrap();
        assert!(onestep_top_check(&free, &top).unwrap());
    }

    #[test]
    fn lax_json_embeds_bax() {
        let lax = lax_algebra(1, &axs("@M", 1), Strategy::Filter).unwrap();
        let text = serde_json::to_string(&lax).unwrap();
        assert_eq!(
            text,
            r#"{"bax":{"n":1,"axioms":["@M"],"members":[[],[1],[0,1]]},"gen":[[2],[1,2]]}"#
        );
    }
}
