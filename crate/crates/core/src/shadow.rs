//! Shadows, shades, new-shadows and the Kruskal-Katona minimum shadow.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::binomial::{binom, ExactInt};
use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};
use crate::squashed::{level_run, SetFamily, Subset};

fn shadow_masks(bits: u64) -> impl Iterator<Item = u64> {
    let mut rest = bits;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let low = rest & rest.wrapping_neg();
        rest &= rest - 1;
        Some(bits & !low)
    })
}

fn shade_masks(bits: u64, n: u32) -> impl Iterator<Item = u64> {
    (0..n).filter(move |j| bits & (1u64 << j) == 0).map(move |j| bits | (1u64 << j))
}

/// `ΔF`: every `(k-1)`-set contained in a member of the `k`-uniform family.
///
/// For `k = 1` the shadow of a nonempty family is `{∅}`.
pub fn shadow(fam: &SetFamily) -> Result<SetFamily> {
    let Some(k) = fam.uniform_size()? else {
        return Ok(fam.clone());
    };
    if k == 0 {
        return Err(Error::precondition("the shadow of 0-sets is undefined"));
    }
    Ok(SetFamily::from_bits_unchecked(
        fam.iter().flat_map(|s| shadow_masks(s.bits())),
        fam.ground_n(),
    ))
}

/// `∇F`: every `(k+1)`-set containing a member of the `k`-uniform family.
pub fn shade(fam: &SetFamily) -> Result<SetFamily> {
    let n = fam.ground_n();
    let Some(k) = fam.uniform_size()? else {
        return Ok(fam.clone());
    };
    if k as u32 >= n {
        return Err(Error::precondition(format!("the shade of {k}-sets of N_{n} is undefined")));
    }
    Ok(SetFamily::from_bits_unchecked(
        fam.iter().flat_map(|s| shade_masks(s.bits(), n)),
        n,
    ))
}

/// `Δ_N S`: the members `X` of `ΔS` whose squashed-least `k`-superset in
/// the whole level is `S` itself.
pub fn new_shadow_of(s: &Subset) -> Vec<Subset> {
    let n = s.ground_n();
    let mut out: Vec<Subset> = s
        .iter()
        .map(|x| s.without_element(x))
        .filter(|sub| {
            let owner = (1..=n)
                .filter(|&j| !sub.contains(j))
                .map(|j| sub.with_element(j))
                .min();
            owner == Some(*s)
        })
        .collect();
    out.sort();
    out
}

/// `∇_N S`: the members `X` of `∇S` whose squashed-greatest `k`-subset is `S`.
pub fn new_shade_of(s: &Subset) -> Vec<Subset> {
    let n = s.ground_n();
    let mut out: Vec<Subset> = (1..=n)
        .filter(|&j| !s.contains(j))
        .map(|j| s.with_element(j))
        .filter(|sup| sup.iter().map(|x| sup.without_element(x)).max() == Some(*s))
        .collect();
    out.sort();
    out
}

/// Union of [`new_shadow_of`] over a `k`-uniform family, `k >= 1`.
pub fn new_shadow(fam: &SetFamily) -> Result<SetFamily> {
    match fam.uniform_size()? {
        None => Ok(fam.clone()),
        Some(0) => Err(Error::precondition("the new-shadow of 0-sets is undefined")),
        Some(_) => SetFamily::new(fam.iter().flat_map(new_shadow_of), fam.ground_n()),
    }
}

/// Union of [`new_shade_of`] over a `k`-uniform family, `k < n`.
pub fn new_shade(fam: &SetFamily) -> Result<SetFamily> {
    let n = fam.ground_n();
    match fam.uniform_size()? {
        None => Ok(fam.clone()),
        Some(k) if k as u32 >= n => Err(Error::precondition(format!(
            "the new-shade of {k}-sets of N_{n} is undefined"
        ))),
        Some(_) => SetFamily::new(fam.iter().flat_map(new_shade_of), n),
    }
}

/// The `r`-binomial (cascade) representation
/// `m = C(a_r, r) + C(a_{r-1}, r-1) + ... + C(a_t, t)` with
/// `a_r > a_{r-1} > ... > a_t >= t >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeRep {
    terms: Vec<(u32, u32)>,
    value: ExactInt,
    level: u32,
}

impl CascadeRep {
    /// Pairs `(a_i, i)` in decreasing `i`. Empty exactly when the value is 0.
    pub fn terms(&self) -> &[(u32, u32)] {
        &self.terms
    }

    pub fn value(&self) -> ExactInt {
        self.value
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Smallest index `t`, if any term exists.
    pub fn last_index(&self) -> Option<u32> {
        self.terms.last().map(|&(_, i)| i)
    }

    /// Checks the sum and the strict-decrease conditions.
    pub fn is_valid(&self) -> Result<bool> {
        let mut sum: ExactInt = 0;
        for &(a, i) in &self.terms {
            sum = sum
                .checked_add(binom(a, i as i64)?)
                .ok_or(Error::Overflow("cascade sum"))?;
        }
        let shape_ok = self.terms.iter().all(|&(a, i)| i >= 1 && a >= i)
            && self.terms.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 == w[1].1 + 1)
            && self.terms.first().is_none_or(|&(_, i)| i == self.level);
        Ok(sum == self.value && shape_ok)
    }

    /// `sum_i C(a_i, i - 1)`.
    pub fn shadow_size(&self) -> Result<ExactInt> {
        self.terms.iter().try_fold(0 as ExactInt, |acc, &(a, i)| {
            acc.checked_add(binom(a, i as i64 - 1)?)
                .ok_or(Error::Overflow("Kruskal-Katona shadow size"))
        })
    }
}

/// Largest `a >= i` with `C(a, i) <= m`, for `m >= 1`.
fn largest_top(m: ExactInt, i: u32) -> Result<u32> {
    let fits = |a: u32| -> bool { matches!(binom(a, i as i64), Ok(v) if v <= m) };
    let mut lo = i;
    let mut step = 1u32;
    while lo.checked_add(step).is_some_and(&fits) {
        lo += step;
        step = step.saturating_mul(2);
    }
    // C(lo, i) <= m < C(lo + step, i)
    let mut hi = lo.saturating_add(step);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Greedy cascade representation of `m` at level `r`.
pub fn cascade_rep(m: ExactInt, r: u32) -> Result<CascadeRep> {
    if r == 0 {
        return Err(Error::precondition("cascade level r must be positive"));
    }
    if m < 0 {
        return Err(Error::out_of_range("m", m, ">= 0"));
    }
    let mut terms = Vec::new();
    let mut rest = m;
    for i in (1..=r).rev() {
        if rest == 0 {
            break;
        }
        let a = largest_top(rest, i)?;
        rest -= binom(a, i as i64)?;
        terms.push((a, i));
    }
    debug_assert_eq!(rest, 0);
    Ok(CascadeRep { terms, value: m, level: r })
}

/// `|ΔF_{n,r}(m)|`, the minimum shadow of `m` sets of size `r`.
pub fn kk_shadow_min(m: ExactInt, r: u32) -> Result<ExactInt> {
    cascade_rep(m, r)?.shadow_size()
}

/// Explicit `|ΔF_{n,k}(m)|` for every prefix length `m`, by incremental union.
fn prefix_shadow_sizes(n: u32, k: u32) -> Result<Vec<usize>> {
    let total = binom(n, k as i64)?;
    let mut seen = HashSet::new();
    let mut sizes = vec![0];
    for bits in level_run(k, 0, total) {
        seen.extend(shadow_masks(bits));
        sizes.push(seen.len());
    }
    Ok(sizes)
}

/// Explicit `|∇L_{n,k}(m)|` for every suffix length `m`.
fn suffix_shade_sizes(n: u32, k: u32) -> Result<Vec<usize>> {
    let total = binom(n, k as i64)?;
    let mut seen = HashSet::new();
    let mut sizes = vec![0];
    for bits in level_run(k, 0, total).into_iter().rev() {
        seen.extend(shade_masks(bits, n));
        sizes.push(seen.len());
    }
    Ok(sizes)
}

const KKT_EXPLICIT_LIMIT: u32 = 16;

fn check_explicit_limit(n: u32) -> Result<()> {
    if n > KKT_EXPLICIT_LIMIT {
        Err(Error::TooLarge { n, limit: KKT_EXPLICIT_LIMIT })
    } else {
        Ok(())
    }
}

/// `|ΔF_{n,k}(m)| = kk_shadow_min(m, k)` for all `n <= n_max`, `1 <= k <= n`,
/// `0 <= m <= C(n, k)`, with the left side from explicit enumeration.
pub fn verify_kkt_tightness(n_max: u32) -> Result<VerificationReport> {
    check_explicit_limit(n_max)?;
    let grid: Vec<(u32, u32)> = (1..=n_max).flat_map(|n| (1..=n).map(move |k| (n, k))).collect();
    let results = grid
        .par_iter()
        .map(|&(n, k)| -> Result<_> {
            let sizes = prefix_shadow_sizes(n, k)?;
            let mut bad = Vec::new();
            for (m, &explicit) in sizes.iter().enumerate() {
                let formula = kk_shadow_min(m as ExactInt, k)?;
                if explicit as ExactInt != formula {
                    bad.push((m, explicit, formula));
                }
            }
            Ok((n, k, sizes.len() as u64, bad))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rep = ReportBuilder::new("kkt-tightness").param("n_max", n_max);
    for (n, k, count, bad) in results {
        rep.add_instances(count);
        for (m, explicit, formula) in bad {
            rep.violation(
                format!("n={n} k={k} m={m}"),
                format!("explicit shadow {explicit} != cascade formula {formula}"),
            );
        }
    }
    Ok(rep.finish())
}

/// `|ΔA| >= kk_shadow_min(|A|, k)` on `samples` random uniform families with
/// `n <= n_max`. The generator is seeded, so a given seed is reproducible.
pub fn verify_kkt_lower_bound(samples: usize, n_max: u32, seed: u64) -> Result<VerificationReport> {
    check_explicit_limit(n_max)?;
    if n_max == 0 {
        return Err(Error::precondition("n_max must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ReportBuilder::new("kkt-lower-bound")
        .param("samples", samples as u64)
        .param("n_max", n_max)
        .param("seed", seed);
    let mut tight = 0u64;
    for _ in 0..samples {
        let n = rng.gen_range(1..=n_max);
        let k = rng.gen_range(1..=n);
        let level: Vec<Subset> = SetFamily::level(n, k)?.members().to_vec();
        let size = rng.gen_range(0..=level.len());
        let fam = SetFamily::new(level.choose_multiple(&mut rng, size).copied(), n)?;
        let actual = shadow(&fam)?.len() as ExactInt;
        let bound = kk_shadow_min(size as ExactInt, k)?;
        if actual == bound {
            tight += 1;
        }
        rep.check(
            actual >= bound,
            || format!("n={n} k={k} family={fam}"),
            || format!("|shadow| = {actual} < {bound}"),
        );
    }
    rep.set_param("tight_samples", tight);
    Ok(rep.finish())
}

/// `|ΔF_{n,k}(m)| = |∇L_{n,n-k}(m)|` for all `1 <= k <= n-1`, `0 <= m <= C(n,k)`.
pub fn verify_lieby_duality(n: u32) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::precondition("duality check needs n >= 2"));
    }
    check_explicit_limit(n)?;
    let mut rep = ReportBuilder::new("lieby").param("n", n);
    for k in 1..n {
        let shadows = prefix_shadow_sizes(n, k)?;
        let shades = suffix_shade_sizes(n, n - k)?;
        for (m, (&lhs, &rhs)) in shadows.iter().zip(&shades).enumerate() {
            rep.check(
                lhs == rhs,
                || format!("n={n} k={k} m={m}"),
                || format!("|shadow F| = {lhs}, |shade L| = {rhs}"),
            );
        }
    }
    Ok(rep.finish())
}

/// For every window `N^r_{n,k}(m)` of consecutive `k`-sets:
/// `|Δ_N window| >= |Δ_N L_{n,k}(m)|` and `|∇_N window| >= |∇_N F_{n,k}(m)|`.
pub fn verify_clements_minimality(n: u32, k: u32) -> Result<VerificationReport> {
    if k == 0 || k >= n {
        return Err(Error::precondition(format!("need 1 <= k <= n-1, got n={n} k={k}")));
    }
    check_explicit_limit(n)?;
    let total = binom(n, k as i64)? as usize;
    let level: Vec<Subset> = level_run(k, 0, total as ExactInt)
        .into_iter()
        .map(|b| Subset::from_bits_unchecked(b, n))
        .collect();
    let new_shadows: Vec<Vec<u64>> = level
        .iter()
        .map(|s| new_shadow_of(s).iter().map(Subset::bits).collect())
        .collect();
    let new_shades: Vec<Vec<u64>> = level
        .iter()
        .map(|s| new_shade_of(s).iter().map(Subset::bits).collect())
        .collect();

    let union_sizes = |parts: &mut dyn Iterator<Item = &Vec<u64>>| -> Vec<usize> {
        let mut seen = HashSet::new();
        let mut out = vec![0];
        for p in parts {
            seen.extend(p.iter().copied());
            out.push(seen.len());
        }
        out
    };
    let last_new_shadow = union_sizes(&mut new_shadows.iter().rev());
    let first_new_shade = union_sizes(&mut new_shades.iter());

    let per_start: Vec<Vec<(String, String)>> = (0..=total)
        .into_par_iter()
        .map(|start| {
            let window_shadow = union_sizes(&mut new_shadows[start..].iter());
            let window_shade = union_sizes(&mut new_shades[start..].iter());
            let mut bad = Vec::new();
            for m in 0..=(total - start) {
                if window_shadow[m] < last_new_shadow[m] {
                    bad.push((
                        format!("new-shadow start={start} m={m}"),
                        format!("{} < last-segment {}", window_shadow[m], last_new_shadow[m]),
                    ));
                }
                if window_shade[m] < first_new_shade[m] {
                    bad.push((
                        format!("new-shade start={start} m={m}"),
                        format!("{} < first-segment {}", window_shade[m], first_new_shade[m]),
                    ));
                }
            }
            bad
        })
        .collect();

    let windows = (total + 1) * (total + 2) / 2;
    let mut rep = ReportBuilder::new("clements")
        .param("n", n)
        .param("k", k)
        .param("windows", windows as u64);
    rep.add_instances(2 * windows as u64);
    for (case, detail) in per_start.into_iter().flatten() {
        rep.violation(case, detail);
    }
    Ok(rep.finish())
}

/// Strict ratio bounds for uniform families over every family in each level of
/// `N_n`:
/// `|∇F|(k+1) > |F|(n-k)` and `|ΔF|(n-k+1) > |F|k` unless `F` is empty or the
/// full level, where both hold with equality.
pub fn verify_sperner_ratios(n: u32) -> Result<VerificationReport> {
    const LIMIT: u32 = 5;
    if n == 0 || n > LIMIT {
        return Err(Error::TooLarge { n, limit: LIMIT });
    }
    let mut rep = ReportBuilder::new("sperner-ratios").param("n", n);
    for k in 0..=n {
        let level = level_run(k, 0, binom(n, k as i64)?);
        let full = (1u64 << level.len()) - 1;
        for pick in 0..=full {
            let fam = SetFamily::from_bits_unchecked(
                level.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &b)| b),
                n,
            );
            let size = fam.len() as ExactInt;
            let extreme = pick == 0 || pick == full;
            let (nk, kk) = (n as ExactInt, k as ExactInt);
            if k < n {
                let lhs = shade(&fam)?.len() as ExactInt * (kk + 1);
                let rhs = size * (nk - kk);
                let ok = if extreme { lhs == rhs } else { lhs > rhs };
                rep.check(ok, || format!("shade n={n} k={k} family={fam}"), || format!("{lhs} vs {rhs}"));
            }
            if k > 0 {
                let lhs = shadow(&fam)?.len() as ExactInt * (nk - kk + 1);
                let rhs = size * kk;
                let ok = if extreme { lhs == rhs } else { lhs > rhs };
                rep.check(ok, || format!("shadow n={n} k={k} family={fam}"), || format!("{lhs} vs {rhs}"));
            }
        }
    }
    Ok(rep.finish())
}

/// JSON view of a cascade representation, used by the CLI.
pub fn cascade_json(rep: &CascadeRep) -> serde_json::Value {
    json!({
        "m": crate::report::int_value(rep.value()),
        "r": rep.level(),
        "terms": rep.terms().iter().map(|&(a, i)| json!({"a": a, "i": i})).collect::<Vec<_>>(),
    })
}
