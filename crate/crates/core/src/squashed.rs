//! Subsets of `N_n = {1..n}`, set families, and the squashed order.
//!
//! A [`Subset`] stores its elements as a presence mask (element `i` is bit
//! `i - 1`). For two sets of the same size the squashed order, where `A < B`
//! iff the largest element of the symmetric difference lies in `B`, is then
//! plain numeric order on the masks.

use std::cmp::Ordering;
use std::fmt;

use crate::binomial::{binom, binom_small, ExactInt};
use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: u32 = 64;

fn check_ground(n: u32) -> Result<()> {
    if n > MAX_GROUND {
        Err(Error::out_of_range("ground set size", n as i128, format!("0..={MAX_GROUND}")))
    } else {
        Ok(())
    }
}

fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of `N_n`.
///
/// `Ord` sorts by size first and by squashed order within a size, which is the
/// canonical order used for every [`SetFamily`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset {
    bits: u64,
    ground: u8,
}

impl Subset {
    /// Builds a subset from its elements (any order, no repeats).
    pub fn new(elements: &[u32], ground_n: u32) -> Result<Self> {
        check_ground(ground_n)?;
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > ground_n {
                return Err(Error::out_of_range("element", e as i128, format!("1..={ground_n}")));
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::precondition(format!("element {e} repeated")));
            }
            bits |= bit;
        }
        Ok(Self { bits, ground: ground_n as u8 })
    }

    pub fn from_bits(bits: u64, ground_n: u32) -> Result<Self> {
        check_ground(ground_n)?;
        if bits & !full_mask(ground_n) != 0 {
            return Err(Error::precondition(format!(
                "mask {bits:#x} has elements outside N_{ground_n}"
            )));
        }
        Ok(Self { bits, ground: ground_n as u8 })
    }

    pub(crate) fn from_bits_unchecked(bits: u64, ground_n: u32) -> Self {
        debug_assert!(bits & !full_mask(ground_n) == 0);
        Self { bits, ground: ground_n as u8 }
    }

    pub fn empty(ground_n: u32) -> Result<Self> {
        Self::from_bits(0, ground_n)
    }

    pub fn full(ground_n: u32) -> Result<Self> {
        check_ground(ground_n)?;
        Ok(Self { bits: full_mask(ground_n), ground: ground_n as u8 })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn ground_n(&self) -> u32 {
        self.ground as u32
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() + 1;
                rest &= rest - 1;
                Some(e)
            }
        })
    }

    pub fn max_element(&self) -> Option<u32> {
        (self.bits != 0).then(|| 64 - self.bits.leading_zeros())
    }

    pub fn contains(&self, e: u32) -> bool {
        (1..=64).contains(&e) && self.bits & (1u64 << (e - 1)) != 0
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.bits & other.bits == 0
    }

    pub fn complement(&self) -> Subset {
        Subset {
            bits: !self.bits & full_mask(self.ground_n()),
            ground: self.ground,
        }
    }

    pub(crate) fn with_element(&self, e: u32) -> Subset {
        Subset { bits: self.bits | (1u64 << (e - 1)), ground: self.ground }
    }

    pub(crate) fn without_element(&self, e: u32) -> Subset {
        Subset { bits: self.bits & !(1u64 << (e - 1)), ground: self.ground }
    }

    /// Parses `"125"` (one digit per element) or `"{1,2,10}"`.
    pub fn parse(text: &str, ground_n: u32) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(text.to_string());
        let elements: Vec<u32> = if let Some(inner) = t.strip_prefix('{') {
            let inner = inner.strip_suffix('}').ok_or_else(bad)?;
            if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            }
        } else {
            t.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d > 0 => Ok(d),
                    _ => Err(bad()),
                })
                .collect::<Result<_>>()?
        };
        Self::new(&elements, ground_n)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.bits.cmp(&other.bits))
            .then(self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    /// Digit string (`125`) when `n <= 9`, braces otherwise. The empty set is `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        if self.ground <= 9 {
            for e in self.iter() {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.ground)
    }
}

/// A finite collection of distinct subsets of a common ground set, kept in
/// canonical order (size, then squashed order).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    members: Vec<Subset>,
    ground: u32,
}

impl SetFamily {
    /// Deduplicates and sorts; every member must share `ground_n`.
    pub fn new(members: impl IntoIterator<Item = Subset>, ground_n: u32) -> Result<Self> {
        check_ground(ground_n)?;
        let mut members: Vec<Subset> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| s.ground_n() != ground_n) {
            return Err(Error::GroundMismatch(bad.ground_n(), ground_n));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members, ground: ground_n })
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<Subset>, ground_n: u32) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members, ground: ground_n }
    }

    pub(crate) fn from_bits_unchecked(bits: impl IntoIterator<Item = u64>, ground_n: u32) -> Self {
        let mut members: Vec<Subset> = bits
            .into_iter()
            .map(|b| Subset::from_bits_unchecked(b, ground_n))
            .collect();
        members.sort_unstable();
        members.dedup();
        Self { members, ground: ground_n }
    }

    pub fn empty(ground_n: u32) -> Result<Self> {
        Self::new(std::iter::empty(), ground_n)
    }

    /// Parses whitespace- or semicolon-separated subsets, e.g. `"123 124"`.
    pub fn parse(text: &str, ground_n: u32) -> Result<Self> {
        let members = text
            .split(|c: char| c.is_whitespace() || c == ';')
            .filter(|p| !p.is_empty())
            .map(|p| Subset::parse(p, ground_n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(members, ground_n)
    }

    /// All `k`-subsets of `N_n` in squashed order.
    pub fn level(n: u32, k: u32) -> Result<Self> {
        let total = binom(n, k as i64)?;
        first_segment(n, k, total)
    }

    pub fn ground_n(&self) -> u32 {
        self.ground
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        self.members.binary_search(s).is_ok()
    }

    /// Common size of the members: `Ok(None)` for the empty family,
    /// [`Error::NonUniform`] when sizes differ.
    pub fn uniform_size(&self) -> Result<Option<usize>> {
        match (self.members.first(), self.members.last()) {
            (Some(a), Some(b)) if a.len() == b.len() => Ok(Some(a.len())),
            (Some(_), Some(_)) => Err(Error::NonUniform),
            _ => Ok(None),
        }
    }

    /// Largest member size, `t(F)`.
    pub fn top_size(&self) -> Option<usize> {
        self.members.last().map(Subset::len)
    }

    /// Smallest member size, `b(F)`.
    pub fn bottom_size(&self) -> Option<usize> {
        self.members.first().map(Subset::len)
    }

    /// The members of size `k`.
    pub fn layer(&self, k: usize) -> SetFamily {
        let members = self.members.iter().copied().filter(|s| s.len() == k).collect();
        SetFamily::from_sorted_unchecked(members, self.ground)
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch(self.ground, other.ground));
        }
        SetFamily::new(self.members.iter().chain(other.members.iter()).copied(), self.ground)
    }

    pub fn difference(&self, other: &SetFamily) -> SetFamily {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|s| !other.contains(s))
            .collect();
        SetFamily::from_sorted_unchecked(members, self.ground)
    }

    /// Subset strings, in canonical order.
    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(", "))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.ground)
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a Subset;
    type IntoIter = std::slice::Iter<'a, Subset>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Squashed comparison of two equal-size subsets.
pub fn compare_squashed(a: &Subset, b: &Subset) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    if a.ground != b.ground {
        return Err(Error::GroundMismatch(a.ground_n(), b.ground_n()));
    }
    Ok(a.bits.cmp(&b.bits))
}

/// 0-based position of `s` among the `|s|`-subsets in squashed order:
/// `sum_i C(s_i - 1, i)` over the sorted elements. Independent of the ground set.
pub fn rank(s: &Subset) -> ExactInt {
    s.iter()
        .enumerate()
        .map(|(i, e)| binom_small(e - 1, i as i64 + 1))
        .sum()
}

/// Inverse of [`rank`]: the `m`-th (0-based) `k`-subset of `N_n`.
pub fn unrank(m: ExactInt, n: u32, k: u32) -> Result<Subset> {
    check_ground(n)?;
    let total = binom(n, k as i64)?;
    if m < 0 || m >= total {
        return Err(Error::out_of_range("rank", m, format!("0..{total} (C({n},{k}))")));
    }
    Ok(Subset::from_bits_unchecked(unrank_bits(m, k), n))
}

/// Greedy largest-element-first decomposition of `m`.
fn unrank_bits(mut m: ExactInt, k: u32) -> u64 {
    let mut bits = 0u64;
    let mut hi = 64u32;
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= m; C(i-1, i) = 0 so c >= i-1 always qualifies.
        let mut c = i - 1;
        while c + 1 < hi && binom_small(c + 1, i as i64) <= m {
            c += 1;
        }
        m -= binom_small(c, i as i64);
        bits |= 1u64 << c;
        hi = c;
    }
    bits
}

/// Next mask with the same popcount (Gosper's hack); this is the squashed successor.
pub(crate) fn next_same_weight(x: u64) -> u64 {
    if x == 0 {
        return 0;
    }
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    (((r ^ x) >> 2) / c) | r
}

/// `count` consecutive `k`-subsets starting at rank `start`, as masks.
pub(crate) fn level_run(k: u32, start: ExactInt, count: ExactInt) -> Vec<u64> {
    let mut out = Vec::with_capacity(count.max(0) as usize);
    if count <= 0 {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let mut cur = unrank_bits(start, k);
    for _ in 0..count {
        out.push(cur);
        cur = next_same_weight(cur);
    }
    out
}

fn check_window(n: u32, k: u32, start: ExactInt, count: ExactInt) -> Result<ExactInt> {
    check_ground(n)?;
    let total = binom(n, k as i64)?;
    if start < 0 || count < 0 || start + count > total {
        return Err(Error::out_of_range(
            "window end",
            start + count,
            format!("start, count >= 0 and start + count <= C({n},{k}) = {total}"),
        ));
    }
    Ok(total)
}

/// `F_{n,k}(m)`: the first `m` `k`-subsets in squashed order.
pub fn first_segment(n: u32, k: u32, m: ExactInt) -> Result<SetFamily> {
    segment_after(n, k, 0, m)
}

/// `L_{n,k}(m)`: the last `m` `k`-subsets in squashed order.
pub fn last_segment(n: u32, k: u32, m: ExactInt) -> Result<SetFamily> {
    let total = check_window(n, k, 0, m)?;
    segment_after(n, k, total - m, m)
}

/// `N^r_{n,k}(m)`: the `m` consecutive `k`-subsets at ranks `r..r+m`.
pub fn segment_after(n: u32, k: u32, r: ExactInt, m: ExactInt) -> Result<SetFamily> {
    check_window(n, k, r, m)?;
    let members = level_run(k, r, m)
        .into_iter()
        .map(|b| Subset::from_bits_unchecked(b, n))
        .collect();
    Ok(SetFamily::from_sorted_unchecked(members, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str, n: u32) -> Subset {
        Subset::parse(text, n).unwrap()
    }

    const N5_LISTING: [&str; 10] = ["123", "124", "134", "234", "125", "135", "235", "145", "245", "345"];

    /// Independent oracle: sort all k-subsets by the symmetric-difference rule.
    fn oracle_level(n: u32, k: u32) -> Vec<Vec<u32>> {
        let mut sets: Vec<Vec<u32>> = (0u64..1 << n)
            .filter(|b| b.count_ones() == k)
            .map(|b| (1..=n).filter(|e| b & (1 << (e - 1)) != 0).collect())
            .collect();
        sets.sort_by(|a, b| {
            let sym_max = (1..=n)
                .rev()
                .find(|e| a.contains(e) != b.contains(e));
            match sym_max {
                None => Ordering::Equal,
                Some(e) if b.contains(&e) => Ordering::Less,
                Some(_) => Ordering::Greater,
            }
        });
        sets
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare_squashed(&s("123", 5), &s("124", 5)).unwrap(), Ordering::Less);
        assert_eq!(compare_squashed(&s("234", 5), &s("125", 5)).unwrap(), Ordering::Less);
        assert_eq!(compare_squashed(&s("135", 5), &s("135", 5)).unwrap(), Ordering::Equal);
        assert_eq!(
            compare_squashed(&s("12", 5), &s("125", 5)),
            Err(Error::SizeMismatch(2, 3))
        );
    }

    #[test]
    fn rank_and_unrank_examples() {
        assert_eq!(rank(&s("123", 5)), 0);
        assert_eq!(rank(&s("125", 5)), 4);
        assert_eq!(rank(&s("345", 5)), 9);
        assert_eq!(unrank(0, 5, 3).unwrap(), s("123", 5));
        assert_eq!(unrank(3, 5, 3).unwrap(), s("234", 5));
        assert_eq!(unrank(9, 5, 3).unwrap(), s("345", 5));
        assert!(matches!(unrank(10, 5, 3), Err(Error::OutOfRange { .. })));
        assert!(matches!(unrank(-1, 5, 3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn empty_set_level() {
        assert_eq!(unrank(0, 4, 0).unwrap(), Subset::empty(4).unwrap());
        assert_eq!(rank(&Subset::empty(4).unwrap()), 0);
        assert_eq!(SetFamily::level(4, 0).unwrap().len(), 1);
    }

    #[test]
    fn listing_of_three_subsets_of_five() {
        let level = SetFamily::level(5, 3).unwrap();
        assert_eq!(level.to_strings(), N5_LISTING);
        for (i, t) in N5_LISTING.iter().enumerate() {
            assert_eq!(rank(&s(t, 5)), i as ExactInt);
        }
    }

    #[test]
    fn matches_symmetric_difference_oracle() {
        for n in 1..=8 {
            for k in 0..=n {
                let ours: Vec<Vec<u32>> = SetFamily::level(n, k)
                    .unwrap()
                    .iter()
                    .map(|x| x.elements())
                    .collect();
                assert_eq!(ours, oracle_level(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn segments() {
        assert_eq!(first_segment(5, 3, 2).unwrap().to_strings(), ["123", "124"]);
        assert!(first_segment(5, 3, 0).unwrap().is_empty());
        assert_eq!(first_segment(4, 2, 6).unwrap().len(), 6);
        assert_eq!(last_segment(5, 3, 1).unwrap().to_strings(), ["345"]);
        assert_eq!(last_segment(5, 3, 3).unwrap().to_strings(), ["145", "245", "345"]);
        assert!(last_segment(5, 3, 0).unwrap().is_empty());
        assert_eq!(segment_after(5, 3, 1, 2).unwrap().to_strings(), ["124", "134"]);
        assert_eq!(segment_after(5, 3, 0, 3).unwrap(), first_segment(5, 3, 3).unwrap());
        assert_eq!(segment_after(5, 3, 9, 1).unwrap().to_strings(), ["345"]);
        assert!(segment_after(5, 3, 9, 2).is_err());
        assert!(first_segment(5, 3, 11).is_err());
    }

    #[test]
    fn segment_after_skipping_first() {
        // Ranks 1 and 2 are 124 and 134.
        let seg = segment_after(5, 3, 1, 2).unwrap();
        assert_eq!(seg.members()[0], s("124", 5));
        assert_eq!(seg.members()[1], s("134", 5));
    }

    #[test]
    fn text_forms() {
        assert_eq!(s("125", 5).to_string(), "125");
        let big = s("{1,2,10}", 12);
        assert_eq!(big.to_string(), "{1,2,10}");
        assert_eq!(big.elements(), vec![1, 2, 10]);
        assert_eq!(s("{}", 4).len(), 0);
        assert_eq!(Subset::empty(4).unwrap().to_string(), "{}");
        assert_eq!(s("{ 3, 1 }", 5), s("13", 5));
        assert!(Subset::parse("16", 5).is_err());
        assert!(Subset::parse("1x", 5).is_err());
        assert!(Subset::parse("11", 5).is_err());
        assert!(Subset::parse("{1,2", 5).is_err());
        assert!(Subset::new(&[1], 65).is_err());
    }

    #[test]
    fn family_dedups_and_sorts() {
        let f = SetFamily::parse("124 123 124 1", 4).unwrap();
        assert_eq!(f.to_strings(), ["1", "123", "124"]);
        assert_eq!(f.top_size(), Some(3));
        assert_eq!(f.bottom_size(), Some(1));
        assert_eq!(f.uniform_size(), Err(Error::NonUniform));
        assert_eq!(f.layer(3).len(), 2);
        assert_eq!(SetFamily::empty(4).unwrap().uniform_size(), Ok(None));
    }

    #[test]
    fn ground_mismatch_rejected() {
        let a = s("12", 4);
        let b = s("12", 5);
        assert!(SetFamily::new([a, b], 4).is_err());
        assert!(compare_squashed(&a, &b).is_err());
    }

    fn subset_strategy() -> impl Strategy<Value = (u32, u64)> {
        (1u32..=10).prop_flat_map(|n| (Just(n), 0u64..(1u64 << n)))
    }

    proptest! {
        #[test]
        fn unrank_inverts_rank((n, bits) in subset_strategy()) {
            let x = Subset::from_bits(bits, n).unwrap();
            let k = x.len() as u32;
            prop_assert_eq!(unrank(rank(&x), n, k).unwrap(), x);
        }

        #[test]
        fn rank_ignores_ground((n, bits) in subset_strategy()) {
            let x = Subset::from_bits(bits, n).unwrap();
            let wide = Subset::new(&x.elements(), 10).unwrap();
            prop_assert_eq!(rank(&x), rank(&wide));
            if let Some(top) = x.max_element() {
                let tight = Subset::new(&x.elements(), top).unwrap();
                prop_assert_eq!(rank(&x), rank(&tight));
            }
        }

        #[test]
        fn comparison_agrees_with_rank(n in 1u32..=10, k in 0u32..=10, a in 0i128..252, b in 0i128..252) {
            prop_assume!(k <= n);
            let total = binom(n, k as i64).unwrap();
            let (a, b) = (a % total, b % total);
            let (x, y) = (unrank(a, n, k).unwrap(), unrank(b, n, k).unwrap());
            prop_assert_eq!(compare_squashed(&x, &y).unwrap(), a.cmp(&b));
            prop_assert_eq!(compare_squashed(&y, &x).unwrap(), b.cmp(&a));
        }

        #[test]
        fn segments_partition_level(n in 1u32..=9, k in 0u32..=9, m in 0i128..=126) {
            prop_assume!(k <= n);
            let total = binom(n, k as i64).unwrap();
            let m = m % (total + 1);
            let first = first_segment(n, k, m).unwrap();
            let rest = segment_after(n, k, m, total - m).unwrap();
            prop_assert_eq!(first.union(&rest).unwrap(), SetFamily::level(n, k).unwrap());
            prop_assert_eq!(first.len() + rest.len(), total as usize);
            prop_assert_eq!(last_segment(n, k, m).unwrap(), segment_after(n, k, total - m, m).unwrap());
        }
    }
}
