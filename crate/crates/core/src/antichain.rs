//! Antichains, Sperner operations, cross pairs with few disjoint members,
//! the extremal pair construction and exhaustive oracles on small ground sets.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::binomial::{binom, ExactInt};
use crate::error::{Error, Result};
use crate::kappa::{kappa, kappa_star, negativity_threshold, KappaTable};
use crate::report::{int_value, ReportBuilder, VerificationReport};
use crate::shadow::{shade, shadow};
use crate::squashed::{last_segment, SetFamily, Subset};

/// Largest ground set the exhaustive searches accept.
pub const BRUTE_FORCE_LIMIT: u32 = 5;

pub fn is_antichain(fam: &SetFamily) -> bool {
    let m = fam.members();
    m.iter().enumerate().all(|(i, a)| {
        m[i + 1..]
            .iter()
            .all(|b| !a.is_subset_of(b) && !b.is_subset_of(a))
    })
}

fn check_sperner_input(fam: &SetFamily) -> Result<()> {
    let n = fam.ground_n();
    if fam.is_empty() {
        return Err(Error::precondition("Sperner operations need a nonempty family"));
    }
    if !is_antichain(fam) {
        return Err(Error::precondition("family is not an antichain"));
    }
    if fam.len() == 1 && (fam.members()[0].is_empty() || fam.members()[0].len() == n as usize) {
        return Err(Error::precondition("{∅} and {N_n} have no Sperner replacement"));
    }
    Ok(())
}

/// `F_∘`: the top level of `F` replaced by its shadow.
pub fn sperner_down(fam: &SetFamily) -> Result<SetFamily> {
    check_sperner_input(fam)?;
    let top = fam.layer(fam.top_size().expect("nonempty"));
    fam.difference(&top).union(&shadow(&top)?)
}

/// `F^∘`: the bottom level of `F` replaced by its shade.
pub fn sperner_up(fam: &SetFamily) -> Result<SetFamily> {
    check_sperner_input(fam)?;
    let bottom = fam.layer(fam.bottom_size().expect("nonempty"));
    fam.difference(&bottom).union(&shade(&bottom)?)
}

fn augment(
    i: usize,
    candidates: &[Vec<Subset>],
    owner: &mut HashMap<u64, usize>,
    assigned: &mut [Option<Subset>],
    visited: &mut HashSet<u64>,
) -> bool {
    for c in &candidates[i] {
        if !visited.insert(c.bits()) {
            continue;
        }
        let free = match owner.get(&c.bits()) {
            None => true,
            Some(&j) => augment(j, candidates, owner, assigned, visited),
        };
        if free {
            owner.insert(c.bits(), i);
            assigned[i] = Some(*c);
            return true;
        }
    }
    false
}

/// Assigns every set of the given level of `fam` a distinct one-larger superset.
///
/// Sets are taken in squashed order and each receives its squashed-least
/// superset that is still free; an augmenting path reshuffles earlier choices
/// only when no free superset remains.
pub fn injective_lift(fam: &SetFamily, level: usize) -> Result<Vec<(Subset, Subset)>> {
    let n = fam.ground_n();
    let bottom = fam.layer(level);
    if level >= n as usize && !bottom.is_empty() {
        return Err(Error::NoMatching);
    }
    let candidates: Vec<Vec<Subset>> = bottom
        .iter()
        .map(|s| {
            let mut ups: Vec<Subset> = (1..=n).filter(|&j| !s.contains(j)).map(|j| s.with_element(j)).collect();
            ups.sort();
            ups
        })
        .collect();
    let mut owner: HashMap<u64, usize> = HashMap::new();
    let mut assigned: Vec<Option<Subset>> = vec![None; bottom.len()];
    for i in 0..bottom.len() {
        if let Some(c) = candidates[i].iter().find(|c| !owner.contains_key(&c.bits())) {
            owner.insert(c.bits(), i);
            assigned[i] = Some(*c);
        } else if !augment(i, &candidates, &mut owner, &mut assigned, &mut HashSet::new()) {
            return Err(Error::NoMatching);
        }
    }
    Ok(bottom
        .iter()
        .zip(assigned)
        .map(|(s, up)| (*s, up.expect("every set is matched")))
        .collect())
}

/// Replaces the bottom level (of size `level < n/2`) by distinct supersets one
/// level higher. At or above the middle the family is returned unchanged.
pub fn injective_replace_up(fam: &SetFamily, level: usize) -> Result<SetFamily> {
    let n = fam.ground_n() as usize;
    if !is_antichain(fam) {
        return Err(Error::precondition("family is not an antichain"));
    }
    if fam.bottom_size().is_some_and(|b| b != level) {
        return Err(Error::precondition(format!(
            "level {level} is not the bottom level {:?}",
            fam.bottom_size()
        )));
    }
    if fam.is_empty() || 2 * level >= n {
        return Ok(fam.clone());
    }
    let lifted = injective_lift(fam, level)?;
    let ups = SetFamily::new(lifted.iter().map(|&(_, up)| up), fam.ground_n())?;
    fam.difference(&fam.layer(level)).union(&ups)
}

/// Every cross pair `(A, B)`, `A` from `a`, `B` from `b`, with `A ∩ B = ∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointPairReport {
    pub pairs: Vec<(Subset, Subset)>,
    /// No set takes part in two disjoint pairs.
    pub is_matching: bool,
    pub pair_count: usize,
}

pub fn disjoint_pairs(a: &SetFamily, b: &SetFamily) -> DisjointPairReport {
    let pairs: Vec<(Subset, Subset)> = a
        .iter()
        .flat_map(|x| b.iter().filter(|y| x.is_disjoint(y)).map(move |y| (*x, *y)))
        .collect();
    let mut left = HashSet::new();
    let mut right = HashSet::new();
    let is_matching = pairs.iter().all(|(x, y)| left.insert(*x) && right.insert(*y));
    DisjointPairReport {
        pair_count: pairs.len(),
        pairs,
        is_matching,
    }
}

fn check_even(n: u32) -> Result<ExactInt> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::precondition(format!("n must be even and at least 4, got {n}")));
    }
    binom(n, (n / 2) as i64)
}

fn check_k(k: ExactInt, big_m: ExactInt) -> Result<()> {
    if (0..=big_m).contains(&k) {
        Ok(())
    } else {
        Err(Error::out_of_range("k", k, format!("0..={big_m}")))
    }
}

/// `C(n, n/2) + C(n, n/2 + 1) - κ*_{n/2}(k)`: the largest `|A| + |B|` for
/// antichains with at most `k` disjoint cross pairs.
pub fn theorem25_bound(n: u32, k: ExactInt) -> Result<ExactInt> {
    let big_m = check_even(n)?;
    check_k(k, big_m)?;
    Ok(big_m + binom(n, (n / 2 + 1) as i64)? - kappa_star(n / 2, k)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `k` below the negativity threshold: the two middle levels.
    #[serde(rename = "case_i")]
    CaseI,
    /// `B` mixes a squashed-last segment with the uncovered upper level.
    #[serde(rename = "case_ii")]
    CaseII,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalConstruction {
    pub family_a: SetFamily,
    pub family_b: SetFamily,
    pub case_tag: CaseTag,
    pub chosen_m: Option<ExactInt>,
}

impl ExtremalConstruction {
    pub fn total(&self) -> usize {
        self.family_a.len() + self.family_b.len()
    }

    pub fn to_json(&self) -> Value {
        let pairs = disjoint_pairs(&self.family_a, &self.family_b);
        json!({
            "case": self.case_tag,
            "chosen_m": self.chosen_m.map(int_value),
            "family_a": self.family_a.to_strings(),
            "family_b": self.family_b.to_strings(),
            "total": self.total(),
            "pair_count": pairs.pair_count,
        })
    }
}

/// A pair of antichains meeting [`theorem25_bound`] with equality.
pub fn construct_extremal(n: u32, k: ExactInt) -> Result<ExtremalConstruction> {
    let big_m = check_even(n)?;
    check_k(k, big_m)?;
    let half = n / 2;
    let family_a = SetFamily::level(n, half)?;
    let upper = SetFamily::level(n, half + 1)?;
    if k < negativity_threshold(half)? {
        return Ok(ExtremalConstruction {
            family_a,
            family_b: upper,
            case_tag: CaseTag::CaseI,
            chosen_m: None,
        });
    }
    let table = KappaTable::build(half, k)?;
    let target = table.kappa_star(k)?;
    let m = (0..=k)
        .find(|&m| table.kappa(m).is_ok_and(|v| v == target))
        .expect("the prefix minimum is attained");
    let segment = last_segment(n, half, m)?;
    let family_b = segment.union(&upper.difference(&shade(&segment)?))?;
    Ok(ExtremalConstruction {
        family_a,
        family_b,
        case_tag: CaseTag::CaseII,
        chosen_m: Some(m),
    })
}

/// Which pairs the exhaustive search admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Disjoint pairs form a matching of size at most `k`.
    AtMost,
    /// As [`PairMode::AtMost`], and also `k <= min(|A|, |B|)`.
    AtMostWithSideCondition,
    /// Disjoint pairs form a matching of size exactly `k`, and `k <= min(|A|, |B|)`.
    Exact,
}

impl PairMode {
    pub fn name(self) -> &'static str {
        match self {
            PairMode::AtMost => "at-most",
            PairMode::AtMostWithSideCondition => "at-most-side-condition",
            PairMode::Exact => "exact",
        }
    }
}

/// A pair of antichains found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub family_a: SetFamily,
    pub family_b: SetFamily,
    pub total: usize,
    pub pair_count: usize,
}

impl PairWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "family_a": self.family_a.to_strings(),
            "family_b": self.family_b.to_strings(),
            "total": self.total,
            "pair_count": self.pair_count,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceMax {
    /// `None` when no pair qualifies.
    pub max_total: Option<usize>,
    pub witnesses: Vec<PairWitness>,
}

fn check_brute_force(n: u32) -> Result<()> {
    if n == 0 || n > BRUTE_FORCE_LIMIT {
        Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT })
    } else {
        Ok(())
    }
}

/// Every antichain of `2^{N_n}` as a bit mask over subset masks (bit `s` set
/// means the subset with presence mask `s` is a member). Includes `∅` and `{∅}`.
pub fn enumerate_antichains(n: u32) -> Result<Vec<u64>> {
    check_brute_force(n)?;
    let count = 1usize << n;
    let comparable: Vec<u64> = (0..count)
        .map(|s| {
            (0..count)
                .filter(|&t| s & t == s || s & t == t)
                .fold(0u64, |acc, t| acc | 1 << t)
        })
        .collect();
    let mut out = Vec::new();
    fn go(i: usize, chosen: u64, comparable: &[u64], out: &mut Vec<u64>) {
        if i == comparable.len() {
            out.push(chosen);
            return;
        }
        go(i + 1, chosen, comparable, out);
        if chosen & comparable[i] == 0 {
            go(i + 1, chosen | 1 << i, comparable, out);
        }
    }
    go(0, 0, &comparable, &mut out);
    out.sort_unstable();
    Ok(out)
}

pub fn antichain_family(mask: u64, n: u32) -> SetFamily {
    SetFamily::from_bits_unchecked((0..64u64).filter(|s| mask >> s & 1 == 1), n)
}

/// `(pair_count, is_matching)` of the disjointness relation between two
/// antichains given as subset masks, using `disjoint[s]` = the mask of all
/// subsets disjoint from `s`.
fn pair_relation(a: u64, b: u64, disjoint: &[u64]) -> (u32, bool) {
    let mut count = 0;
    let mut matching = true;
    let mut rest = a;
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (b & disjoint[s]).count_ones();
        count += d;
        matching &= d <= 1;
    }
    let mut rest = b;
    while rest != 0 && matching {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        matching &= (a & disjoint[s]).count_ones() <= 1;
    }
    (count, matching)
}

/// Largest `|A| + |B|` over ordered pairs of antichains of `N_n` admitted by
/// `mode`, with every maximizing pair.
pub fn brute_force_max_with(n: u32, k: usize, mode: PairMode) -> Result<BruteForceMax> {
    let antichains = enumerate_antichains(n)?;
    let count = 1usize << n;
    let disjoint: Vec<u64> = (0..count)
        .map(|s| (0..count).filter(|&t| s & t == 0).fold(0u64, |acc, t| acc | 1 << t))
        .collect();
    let admits = |a: u64, b: u64| -> bool {
        let (pairs, matching) = pair_relation(a, b, &disjoint);
        let side = k as u32 <= a.count_ones().min(b.count_ones());
        matching
            && match mode {
                PairMode::AtMost => pairs as usize <= k,
                PairMode::AtMostWithSideCondition => pairs as usize <= k && side,
                PairMode::Exact => pairs as usize == k && side,
            }
    };
    let per_a: Vec<(u32, Vec<(u64, u64)>)> = antichains
        .par_iter()
        .map(|&a| {
            let mut best = 0u32;
            let mut found: Vec<(u64, u64)> = Vec::new();
            for &b in &antichains {
                let total = a.count_ones() + b.count_ones() + 1;
                if total < best || !admits(a, b) {
                    continue;
                }
                if total > best {
                    best = total;
                    found.clear();
                }
                found.push((a, b));
            }
            (best, found)
        })
        .collect();
    // totals carry a +1 offset so that 0 marks "nothing admitted"
    let best = per_a.iter().map(|(t, _)| *t).max().unwrap_or(0);
    let witnesses = per_a
        .into_iter()
        .filter(|(t, _)| *t == best && best > 0)
        .flat_map(|(_, found)| found)
        .map(|(a, b)| {
            let (pair_count, _) = pair_relation(a, b, &disjoint);
            PairWitness {
                family_a: antichain_family(a, n),
                family_b: antichain_family(b, n),
                total: (a.count_ones() + b.count_ones()) as usize,
                pair_count: pair_count as usize,
            }
        })
        .collect();
    Ok(BruteForceMax {
        max_total: (best > 0).then(|| best as usize - 1),
        witnesses,
    })
}

/// `exact = false` admits at most `k` disjoint pairs; `exact = true` admits
/// exactly `k`, with `k <= min(|A|, |B|)`.
pub fn brute_force_max(n: u32, k: usize, exact: bool) -> Result<BruteForceMax> {
    brute_force_max_with(n, k, if exact { PairMode::Exact } else { PairMode::AtMost })
}

/// Exhaustive confirmation of [`theorem25_bound`] for every `0 <= k <= C(n, n/2)`,
/// both without and with the side condition `k <= min(|A|, |B|)`. Also checks
/// the exactly-`k` maximum against `C(n,n/2) + C(n,n/2+1) - κ(k)` where
/// `κ(k) = κ*(k)`; the other `k` are reported as a probe only.
pub fn verify_thm25_brute(n: u32) -> Result<VerificationReport> {
    let big_m = check_even(n)?;
    check_brute_force(n)?;
    let upper = binom(n, (n / 2 + 1) as i64)?;
    let half = n / 2;
    let mut rep = ReportBuilder::new("thm25-brute").param("n", n);
    let mut maxima = Vec::new();
    for k in 0..=big_m {
        let bound = theorem25_bound(n, k)?;
        let at_most = brute_force_max_with(n, k as usize, PairMode::AtMost)?;
        let side = brute_force_max_with(n, k as usize, PairMode::AtMostWithSideCondition)?;
        let exact = brute_force_max_with(n, k as usize, PairMode::Exact)?;
        let as_int = |b: &BruteForceMax| b.max_total.map(|t| t as ExactInt);
        rep.check(
            as_int(&at_most) == Some(bound),
            || format!("at-most k={k}"),
            || format!("brute force {:?} != bound {bound}", at_most.max_total),
        );
        rep.check(
            as_int(&side) == Some(bound),
            || format!("side-condition k={k}"),
            || format!("brute force {:?} != bound {bound}", side.max_total),
        );
        let (kk, ks) = (kappa(half, k)?, kappa_star(half, k)?);
        let exact_bound = big_m + upper - kk;
        if kk == ks {
            rep.check(
                as_int(&exact) == Some(exact_bound),
                || format!("exact k={k}"),
                || format!("brute force {:?} != {exact_bound}", exact.max_total),
            );
        }
        if let Some(w) = at_most.witnesses.first() {
            rep.witness(w.to_json());
        }
        maxima.push(json!({
            "k": int_value(k),
            "bound": int_value(bound),
            "at_most": at_most.max_total,
            "side_condition": side.max_total,
            "exact": exact.max_total,
            "exact_reference": int_value(exact_bound),
            "maximizers": at_most.witnesses.len(),
        }));
    }
    rep.set_param("maxima", maxima);
    Ok(rep.finish())
}

/// Every maximizer for `k` lives in the two middle levels, its upper part is
/// exactly the upper level minus the shade of its lower part, and that shade is
/// as small as the shade of a squashed-last segment of the same size.
pub fn verify_thm26_structure(n: u32, k: ExactInt) -> Result<VerificationReport> {
    let big_m = check_even(n)?;
    check_brute_force(n)?;
    check_k(k, big_m)?;
    let half = n / 2;
    let bound = theorem25_bound(n, k)?;
    let found = brute_force_max_with(n, k as usize, PairMode::AtMostWithSideCondition)?;
    let mut rep = ReportBuilder::new("thm26")
        .param("n", n)
        .param("k", int_value(k))
        .param("maximizers", found.witnesses.len());
    rep.check(
        found.max_total.map(|t| t as ExactInt) == Some(bound),
        || format!("maximum k={k}"),
        || format!("brute force {:?} != bound {bound}", found.max_total),
    );
    let upper = SetFamily::level(n, half + 1)?;
    for w in &found.witnesses {
        for (side, x) in [("A", &w.family_a), ("B", &w.family_b)] {
            let lower = x.layer(half as usize);
            let case = || format!("{side} = {x} (partner of total {})", w.total);
            rep.check(
                x.iter().all(|s| s.len() == half as usize || s.len() == half as usize + 1),
                case,
                || "uses a level outside the middle two".to_string(),
            );
            let rebuilt = lower.union(&upper.difference(&shade(&lower)?))?;
            rep.check(&rebuilt == x, case, || format!("expected {rebuilt}"));
            let own = shade(&lower)?.len();
            let best = shade(&last_segment(n, half, lower.len() as ExactInt)?)?.len();
            rep.check(own == best, case, || format!("|shade| {own} != {best}"));
        }
        rep.witness(w.to_json());
    }
    Ok(rep.finish())
}

/// The largest antichain of `N_n` has `C(n, ⌊n/2⌋)` members, and only the
/// middle level (both middle levels for odd `n`) attains it.
pub fn sperner_max_check(n: u32) -> Result<VerificationReport> {
    let antichains = enumerate_antichains(n)?;
    let target = binom(n, (n / 2) as i64)? as u32;
    let max = antichains.iter().map(|a| a.count_ones()).max().unwrap_or(0);
    let maximizers: Vec<u64> = antichains.iter().copied().filter(|a| a.count_ones() == max).collect();
    let mut middles = vec![SetFamily::level(n, n / 2)?];
    if n % 2 == 1 {
        middles.push(SetFamily::level(n, n / 2 + 1)?);
    }
    let mut rep = ReportBuilder::new("sperner")
        .param("n", n)
        .param("antichains", antichains.len())
        .param("max_size", max);
    rep.check(max == target, || format!("n={n}"), || format!("maximum {max} != {target}"));
    let families: Vec<SetFamily> = maximizers.iter().map(|&a| antichain_family(a, n)).collect();
    rep.check(
        families.len() == middles.len() && families.iter().all(|f| middles.contains(f)),
        || format!("maximizers n={n}"),
        || format!("{} maximizers, not the middle level(s)", families.len()),
    );
    for f in &families {
        rep.witness(json!({ "maximizer": f.to_strings() }));
    }
    Ok(rep.finish())
}

/// A random antichain of `N_n`: subsets in random order, each kept when it is
/// incomparable to everything kept so far, stopping at a random size.
pub fn random_antichain<R: Rng>(n: u32, rng: &mut R) -> Result<SetFamily> {
    if n > 16 {
        return Err(Error::TooLarge { n, limit: 16 });
    }
    let mut pool: Vec<u64> = (0..1u64 << n).collect();
    pool.shuffle(rng);
    let target = rng.gen_range(1..=binom(n, (n / 2) as i64)? as usize);
    let mut kept: Vec<u64> = Vec::new();
    for s in pool {
        if kept.len() == target {
            break;
        }
        if kept.iter().all(|&t| s & t != s && s & t != t) {
            kept.push(s);
        }
    }
    Ok(SetFamily::from_bits_unchecked(kept, n))
}

fn sperner_operation_case(fam: &SetFamily, rep: &mut ReportBuilder) -> Result<()> {
    if check_sperner_input(fam).is_err() {
        return Ok(());
    }
    let down = sperner_down(fam)?;
    let up = sperner_up(fam)?;
    let (top, bottom) = (fam.top_size().unwrap(), fam.bottom_size().unwrap());
    rep.check(
        is_antichain(&down) && down.top_size() == Some(top - 1),
        || format!("down {fam}"),
        || format!("got {down}"),
    );
    rep.check(
        is_antichain(&up) && up.bottom_size() == Some(bottom + 1),
        || format!("up {fam}"),
        || format!("got {up}"),
    );
    Ok(())
}

/// Both Sperner operations return antichains whose top size drops by one /
/// bottom size rises by one. Exhaustive for `n <= 5`, otherwise `samples`
/// random antichains from a seeded generator.
pub fn verify_sperner_operations(n: u32, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rep = ReportBuilder::new("sperner-operations").param("n", n);
    if n <= BRUTE_FORCE_LIMIT {
        rep.set_param("mode", "exhaustive");
        for a in enumerate_antichains(n)? {
            sperner_operation_case(&antichain_family(a, n), &mut rep)?;
        }
    } else {
        rep.set_param("mode", "random");
        rep.set_param("samples", samples);
        rep.set_param("seed", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        while done < samples {
            let fam = random_antichain(n, &mut rng)?;
            if check_sperner_input(&fam).is_ok() {
                sperner_operation_case(&fam, &mut rep)?;
                done += 1;
            }
        }
    }
    Ok(rep.finish())
}
