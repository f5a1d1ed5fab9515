//! Subsets of a small ground set as bitmasks, and families of such subsets.
//!
//! A ground set of size `n` is `{0, .., n-1}`. A [`Subset`] stores point `i`
//! in bit `i`. A [`Family`] is a set of subsets, stored as a characteristic
//! bitset over the `2^n` subset masks.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use crate::error::{Error, Result};

/// Largest ground set for plain frame and algebra operations.
pub const MAX_N: usize = 16;

/// Largest ground set for operations that materialize families of families.
pub const MAX_FAMILY_N: usize = 5;

pub(crate) fn check_width(n: usize, cap: usize, what: &str) -> Result<()> {
    if n > cap {
        return Err(Error::cap(format!("{what}: ground set too large"), cap, n));
    }
    Ok(())
}

/// A subset of `{0, .., n-1}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        debug_assert!(n <= MAX_N);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Subset {
        points.into_iter().fold(Subset::EMPTY, |s, i| s | Subset::singleton(i))
    }

    #[inline]
    pub fn mask(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn fits(self, n: usize) -> bool {
        (self.0 as u64) < (1u64 << n)
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| (bits >> i) & 1 == 1)
    }

    /// All subsets of `{0, .., n-1}` in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..(1u32 << n)).map(Subset)
    }

    /// Subsets `e` with `self ⊆ e ⊆ upper`, in increasing mask order.
    pub fn interval(self, upper: Subset) -> impl Iterator<Item = Subset> {
        let lower = self;
        let free = upper.0 & !lower.0;
        let mut sub: u32 = 0;
        let mut done = !lower.is_subset_of(upper);
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Subset(lower.0 | sub);
            sub = sub.wrapping_sub(free) & free;
            done = sub == 0;
            Some(out)
        })
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitXor for Subset {
    type Output = Subset;
    fn bitxor(self, rhs: Subset) -> Subset {
        Subset(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.points().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of subsets of `{0, .., n-1}`: an element of the double powerset.
///
/// Families order by the numeric value of their characteristic bitset
/// (bit `a` set iff subset `a` is a member), most significant word first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u8,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl Family {
    pub fn empty(n: usize) -> Family {
        debug_assert!(n <= MAX_N);
        Family {
            n: n as u8,
            words: vec![0; word_count(n)],
        }
    }

    /// The whole powerset `℘X`.
    pub fn full(n: usize) -> Family {
        let mut f = Family::empty(n);
        let total = 1usize << n;
        for (w, word) in f.words.iter_mut().enumerate() {
            let lo = w * 64;
            let bits = (total - lo).min(64);
            *word = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        f
    }

    /// Builds a family, rejecting members that do not fit width `n`.
    pub fn from_members<I: IntoIterator<Item = Subset>>(n: usize, members: I) -> Result<Family> {
        check_width(n, MAX_N, "family")?;
        let mut f = Family::empty(n);
        for a in members {
            if !a.fits(n) {
                return Err(Error::invalid(format!(
                    "subset {} does not fit a ground set of size {n}",
                    a.0
                )));
            }
            f.insert(a);
        }
        Ok(f)
    }

    /// Like [`Family::from_members`] with raw masks.
    pub fn from_masks(n: usize, masks: &[u32]) -> Result<Family> {
        Family::from_members(n, masks.iter().copied().map(Subset))
    }

    /// Builds a family from its characteristic bitset; only for `n ≤ 6`.
    pub fn from_bits(n: usize, bits: u64) -> Family {
        debug_assert!(n <= 6);
        let total = 1u32 << n;
        let bits = if total == 64 {
            bits
        } else {
            bits & ((1u64 << total) - 1)
        };
        Family {
            n: n as u8,
            words: vec![bits],
        }
    }

    /// The characteristic bitset, when it fits one word (`n ≤ 6`).
    pub fn bits(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn contains(&self, a: Subset) -> bool {
        let i = a.index();
        match self.words.get(i / 64) {
            Some(w) => (w >> (i % 64)) & 1 == 1,
            None => false,
        }
    }

    pub fn insert(&mut self, a: Subset) {
        let i = a.index();
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, a: Subset) {
        let i = a.index();
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(Subset((w * 64 + b) as u32))
            })
        })
    }

    pub fn masks(&self) -> Vec<u32> {
        self.members().map(Subset::mask).collect()
    }

    /// `℘X ∖ self`.
    pub fn complement(&self) -> Family {
        let full = Family::full(self.n());
        self.zip_with(&full, |a, b| !a & b)
    }

    pub fn union(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Family) -> Family {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    fn zip_with(&self, other: &Family, op: impl Fn(u64, u64) -> u64) -> Family {
        debug_assert_eq!(self.n, other.n);
        Family {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// `↑c = { e ⊆ X | c ⊆ e }`.
    pub fn up_cone(n: usize, c: Subset) -> Family {
        let mut f = Family::empty(n);
        for e in c.interval(Subset::full(n)) {
            f.insert(e);
        }
        f
    }

    /// Every member's supersets are members.
    pub fn is_up_closed(&self) -> bool {
        let n = self.n();
        self.members()
            .all(|a| (0..n).all(|i| a.contains(i) || self.contains(a | Subset::singleton(i))))
    }

    /// `a, a' ∈ W` and `a ⊆ b ⊆ a'` imply `b ∈ W`.
    pub fn is_convex(&self) -> bool {
        self.is_convex_within(&Family::full(self.n()))
    }

    /// Convexity where `b` ranges only over members of `universe`.
    pub fn is_convex_within(&self, universe: &Family) -> bool {
        let members: Vec<Subset> = self.members().collect();
        for &lo in &members {
            for &hi in &members {
                if !lo.is_subset_of(hi) {
                    continue;
                }
                for b in lo.interval(hi) {
                    if universe.contains(b) && !self.contains(b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Up-closure where the larger set ranges only over members of `universe`.
    pub fn is_up_closed_within(&self, universe: &Family) -> bool {
        self.members().all(|a| {
            universe
                .members()
                .all(|b| !a.is_subset_of(b) || self.contains(b))
        })
    }

    /// `a ∩ b ∈ W` for all `a, b ∈ W`.
    pub fn is_intersection_closed(&self) -> bool {
        let members: Vec<Subset> = self.members().collect();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| self.contains(a & b)))
    }

    /// The intersection of all members; the full set for the empty family.
    pub fn meet(&self) -> Subset {
        self.members()
            .fold(Subset::full(self.n()), |acc, a| acc & a)
    }
}

impl Ord for Family {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Family {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members().map(|a| a.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_enumerates_between_bounds() {
        let got: Vec<u32> = Subset(0b001).interval(Subset(0b101)).map(|s| s.0).collect();
        assert_eq!(got, vec![1, 5]);
        let all: Vec<u32> = Subset(0).interval(Subset(3)).map(|s| s.0).collect();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert_eq!(Subset(2).interval(Subset(1)).count(), 0);
        assert_eq!(Subset(3).interval(Subset(3)).count(), 1);
    }

    #[test]
    fn family_rejects_wide_members() {
        assert!(Family::from_masks(2, &[4]).is_err());
        assert!(Family::from_masks(2, &[3, 1]).is_ok());
    }

    #[test]
    fn family_members_sorted_and_deduplicated() {
        let f = Family::from_masks(3, &[6, 1, 6, 0]).unwrap();
        assert_eq!(f.masks(), vec![0, 1, 6]);
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn large_family_words() {
        let n = 8;
        let f = Family::from_masks(n, &[0, 200, 255]).unwrap();
        assert_eq!(f.masks(), vec![0, 200, 255]);
        assert_eq!(f.complement().len(), 253);
        assert_eq!(Family::full(n).len(), 256);
    }

    #[test]
    fn up_cone_and_closure_predicates() {
        let cone = Family::up_cone(2, Subset(1));
        assert_eq!(cone.masks(), vec![1, 3]);
        assert!(cone.is_up_closed());
        assert!(cone.is_intersection_closed());
        assert_eq!(cone.meet(), Subset(1));
        assert_eq!(Family::empty(2).meet(), Subset(3));

        let contingent = Family::from_masks(2, &[0, 3]).unwrap();
        assert!(!contingent.is_convex());
        assert!(!contingent.is_up_closed());
    }

    #[test]
    fn family_order_is_numeric_on_bitset() {
        let a = Family::from_masks(2, &[2]).unwrap();
        let b = Family::from_masks(2, &[0, 1]).unwrap();
        assert!(b < a);
        assert_eq!(Family::from_bits(2, 0b0100), a);
        assert_eq!(a.bits(), Some(4));
    }
}
