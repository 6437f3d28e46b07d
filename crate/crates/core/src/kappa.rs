//! The Kruskal-Katona function `κ_r(m) = |ΔF_r(m)| - m` and its prefix minimum `κ*`.
//!
//! `κ` does not depend on the ground set once `C(n, r) >= m`, so it is indexed
//! by `(r, m)` only. Sweeps tied to a specific `n` use [`KappaTable::kappa_star_capped`].

use rayon::prelude::*;
use serde_json::json;

use crate::binomial::{binom, d_value, ExactInt};
use crate::error::{Error, Result};
use crate::report::{int_value, ReportBuilder, VerificationReport};
use crate::shadow::{cascade_rep, kk_shadow_min, new_shadow_of};
use crate::squashed::{level_run, Subset, MAX_GROUND};

/// Largest prefix the plain [`kappa_star`] scan will walk.
pub const KAPPA_STAR_SCAN_LIMIT: ExactInt = 1 << 26;

pub fn kappa(r: u32, m: ExactInt) -> Result<ExactInt> {
    kk_shadow_min(m, r)?
        .checked_sub(m)
        .ok_or(Error::Overflow("kappa"))
}

/// `κ_r(m)` as `sum D(a_i, i)` over the cascade of `m`.
pub fn kappa_via_d(r: u32, m: ExactInt) -> Result<ExactInt> {
    cascade_rep(m, r)?
        .terms()
        .iter()
        .try_fold(0 as ExactInt, |acc, &(a, i)| {
            acc.checked_add(d_value(a, i)?).ok_or(Error::Overflow("kappa"))
        })
}

/// `min_{0 <= j <= m} κ_r(j)`.
pub fn kappa_star(r: u32, m: ExactInt) -> Result<ExactInt> {
    if m < 0 {
        return Err(Error::out_of_range("m", m, ">= 0"));
    }
    if m > KAPPA_STAR_SCAN_LIMIT {
        return Err(Error::out_of_range("m", m, format!("<= {KAPPA_STAR_SCAN_LIMIT}")));
    }
    let mut best = 0;
    for j in 1..=m {
        best = best.min(kappa(r, j)?);
    }
    Ok(best)
}

/// `1 + sum_{i=1}^{r} C(2i-1, i)`: the least `m` with `κ_r(m) < 0`.
pub fn negativity_threshold(r: u32) -> Result<ExactInt> {
    if r == 0 {
        return Err(Error::precondition("r must be positive"));
    }
    (1..=r).try_fold(1 as ExactInt, |acc, i| {
        acc.checked_add(binom(2 * i - 1, i as i64)?)
            .ok_or(Error::Overflow("negativity threshold"))
    })
}

/// Every `m` with `κ_r(m) = 0`: `0` and the suffix sums
/// `sum_{i=t}^{r} C(2i-1, i)` for `t = 1..r`, ascending.
pub fn zero_set(r: u32) -> Result<Vec<ExactInt>> {
    if r == 0 {
        return Err(Error::precondition("r must be positive"));
    }
    let mut out = vec![0];
    let mut acc: ExactInt = 0;
    for i in (1..=r).rev() {
        acc = acc
            .checked_add(binom(2 * i - 1, i as i64)?)
            .ok_or(Error::Overflow("zero set"))?;
        out.push(acc);
    }
    Ok(out)
}

/// `κ_r` and `κ*_r` on `0..=upper_m`, built by adding one new-shadow at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaTable {
    level_r: u32,
    upper_m: ExactInt,
    kappa: Vec<ExactInt>,
    kappa_star: Vec<ExactInt>,
}

impl KappaTable {
    /// Entries up to `C(64, r)` come from explicit new-shadow increments of
    /// `unrank(m)`; any further entries come from the cascade formula.
    pub fn build(r: u32, upper_m: ExactInt) -> Result<Self> {
        if r == 0 {
            return Err(Error::precondition("r must be positive"));
        }
        if !(0..=KAPPA_STAR_SCAN_LIMIT).contains(&upper_m) {
            return Err(Error::out_of_range("upper_m", upper_m, format!("0..={KAPPA_STAR_SCAN_LIMIT}")));
        }
        let explicit = upper_m.min(binom(MAX_GROUND, r as i64)?);
        let len = upper_m as usize + 1;
        let mut kappa = Vec::with_capacity(len);
        let mut kappa_star = Vec::with_capacity(len);
        kappa.push(0);
        kappa_star.push(0);
        let mut shadow_size: ExactInt = 0;
        let mut best: ExactInt = 0;
        let mut push = |m: ExactInt, shadow_size: ExactInt| {
            let value = shadow_size - m;
            best = best.min(value);
            kappa.push(value);
            kappa_star.push(best);
        };
        for (i, bits) in level_run(r, 0, explicit).into_iter().enumerate() {
            let s = Subset::from_bits_unchecked(bits, MAX_GROUND);
            shadow_size += new_shadow_of(&s).len() as ExactInt;
            push(i as ExactInt + 1, shadow_size);
        }
        for m in explicit + 1..=upper_m {
            push(m, kk_shadow_min(m, r)?);
        }
        Ok(Self { level_r: r, upper_m, kappa, kappa_star })
    }

    pub fn level_r(&self) -> u32 {
        self.level_r
    }

    pub fn upper_m(&self) -> ExactInt {
        self.upper_m
    }

    fn index(&self, m: ExactInt) -> Result<usize> {
        if (0..=self.upper_m).contains(&m) {
            Ok(m as usize)
        } else {
            Err(Error::out_of_range("m", m, format!("0..={}", self.upper_m)))
        }
    }

    pub fn kappa(&self, m: ExactInt) -> Result<ExactInt> {
        Ok(self.kappa[self.index(m)?])
    }

    pub fn kappa_star(&self, m: ExactInt) -> Result<ExactInt> {
        Ok(self.kappa_star[self.index(m)?])
    }

    /// `min_{0 <= j <= min(x, cap)} κ(j)`: the prefix minimum for a ground set
    /// whose level only holds `cap` sets.
    pub fn kappa_star_capped(&self, x: ExactInt, cap: ExactInt) -> Result<ExactInt> {
        if x < 0 {
            return Err(Error::out_of_range("x", x, ">= 0"));
        }
        self.kappa_star(x.min(cap))
    }

    pub fn kappa_values(&self) -> &[ExactInt] {
        &self.kappa
    }

    pub fn kappa_star_values(&self) -> &[ExactInt] {
        &self.kappa_star
    }

    /// Tab-separated `m  kappa  kappa_star` rows with a header line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("m\tkappa\tkappa_star\n");
        for (m, (k, ks)) in self.kappa.iter().zip(&self.kappa_star).enumerate() {
            out.push_str(&format!("{m}\t{k}\t{ks}\n"));
        }
        out
    }
}

/// The middle level used by the sweeps over `N_n`: `(r, M) = (⌈n/2⌉, C(n, r))`.
pub fn middle_level(n: u32) -> Result<(u32, ExactInt)> {
    let r = n.div_ceil(2);
    Ok((r, binom(n, r as i64)?))
}

/// `κ_r(m) < 0` exactly when `m >= negativity_threshold(r)`, and `κ_r(m) = 0`
/// exactly on [`zero_set`], for every `0 <= m <= m_max`.
pub fn verify_prop22(r: u32, m_max: ExactInt) -> Result<VerificationReport> {
    let threshold = negativity_threshold(r)?;
    if m_max < threshold {
        return Err(Error::precondition(format!(
            "m_max = {m_max} must reach the threshold {threshold}"
        )));
    }
    let table = KappaTable::build(r, m_max)?;
    let zeros = zero_set(r)?;
    let mut rep = ReportBuilder::new("prop22")
        .param("r", r)
        .param("m_max", int_value(m_max))
        .param("threshold", int_value(threshold));
    let mut found_zeros = Vec::new();
    for (m, &k) in table.kappa_values().iter().enumerate() {
        let m = m as ExactInt;
        rep.check(
            (k < 0) == (m >= threshold),
            || format!("sign r={r} m={m}"),
            || format!("kappa = {k}, threshold = {threshold}"),
        );
        rep.check(
            (k == 0) == zeros.contains(&m),
            || format!("zero r={r} m={m}"),
            || format!("kappa = {k}"),
        );
        if k == 0 {
            found_zeros.push(int_value(m));
        }
    }
    rep.witness(json!({ "zero_set": found_zeros }));
    Ok(rep.finish())
}

/// `κ_r(m) = κ*_r(m)` exactly when every cascade term `(a_i, i)` of `m` has
/// `a_i >= 2i - 1`, for every `0 <= m <= m_max`.
pub fn verify_thm23(r: u32, m_max: ExactInt) -> Result<VerificationReport> {
    if m_max < 1 {
        return Err(Error::precondition("m_max must be at least 1"));
    }
    let table = KappaTable::build(r, m_max)?;
    let mut rep = ReportBuilder::new("thm23").param("r", r).param("m_max", int_value(m_max));
    let mut attained = 0u64;
    for m in 0..=m_max {
        let cascade = cascade_rep(m, r)?;
        let wide = cascade.terms().iter().all(|&(a, i)| a + 1 >= 2 * i);
        let at_min = table.kappa(m)? == table.kappa_star(m)?;
        attained += u64::from(at_min);
        rep.check(
            at_min == wide,
            || format!("r={r} m={m}"),
            || format!("cascade {:?}: kappa at prefix min = {at_min}, terms wide = {wide}", cascade.terms()),
        );
    }
    rep.set_param("minimum_attained", attained);
    Ok(rep.finish())
}

/// With `r = ⌈n/2⌉`, `M = C(n, r)`: for all `0 <= a, k <= M`,
/// `κ(M) + κ*(k) <= κ(a) + κ*(k + M - a)`, where `κ*` ranges over `[0, M]` only.
pub fn verify_prop24(n: u32) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::precondition("n must be at least 2"));
    }
    let (r, big_m) = middle_level(n)?;
    let table = KappaTable::build(r, big_m)?;
    let kappa_full = table.kappa(big_m)?;
    let bad: Vec<(ExactInt, ExactInt, ExactInt, ExactInt)> = (0..=big_m)
        .into_par_iter()
        .map(|a| -> Result<Vec<_>> {
            let mut bad = Vec::new();
            for k in 0..=big_m {
                let lhs = kappa_full + table.kappa_star(k)?;
                let rhs = table.kappa(a)? + table.kappa_star_capped(k + big_m - a, big_m)?;
                if lhs > rhs {
                    bad.push((a, k, lhs, rhs));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut rep = ReportBuilder::new("prop24")
        .param("n", n)
        .param("r", r)
        .param("M", int_value(big_m));
    rep.add_instances(((big_m + 1) * (big_m + 1)) as u64);
    for (a, k, lhs, rhs) in bad {
        rep.violation(format!("a={a} k={k}"), format!("{lhs} > {rhs}"));
    }
    Ok(rep.finish())
}

/// With `r = ⌈n/2⌉`, `M = C(n, r)`: `κ(m) >= κ(M)` on `0..=M`, and for even `n`
/// equality holds only at `m = M`.
pub fn verify_lemma38(n: u32) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::precondition("n must be at least 2"));
    }
    let (r, big_m) = middle_level(n)?;
    let table = KappaTable::build(r, big_m)?;
    let floor = table.kappa(big_m)?;
    let mut rep = ReportBuilder::new("lemma38")
        .param("n", n)
        .param("r", r)
        .param("M", int_value(big_m));
    for m in 0..=big_m {
        let k = table.kappa(m)?;
        rep.check(k >= floor, || format!("n={n} m={m}"), || format!("kappa {k} < kappa(M) {floor}"));
        if n.is_multiple_of(2) && m < big_m {
            rep.check(k > floor, || format!("n={n} m={m}"), || format!("kappa {k} ties kappa(M)"));
        }
    }
    Ok(rep.finish())
}

fn even_middle(n: u32) -> Result<(u32, ExactInt)> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::precondition(format!("n must be even and at least 4, got {n}")));
    }
    middle_level(n)
}

/// Every `(a, k)` in `[0, M]^2` with `κ(M) + κ(k) > κ(a) + κ*(k + M - a)`,
/// where `r = n/2`, `M = C(n, r)` and `κ*` ranges over `[0, M]`.
pub fn check_conjecture51(n: u32) -> Result<Vec<(ExactInt, ExactInt)>> {
    let (r, big_m) = even_middle(n)?;
    let table = KappaTable::build(r, big_m)?;
    let kappa_full = table.kappa(big_m)?;
    let mut out = Vec::new();
    for a in 0..=big_m {
        for k in 0..=big_m {
            let lhs = kappa_full + table.kappa(k)?;
            let rhs = table.kappa(a)? + table.kappa_star_capped(k + big_m - a, big_m)?;
            if lhs > rhs {
                out.push((a, k));
            }
        }
    }
    Ok(out)
}

/// The same inequality restricted to exactly `k` disjoint pairs: `a >= k`, and
/// the minimum runs over `j` in `[k, min(k + M - a, M)]` instead of `[0, k + M - a]`.
pub fn check_conjecture51_exact_k(n: u32) -> Result<Vec<(ExactInt, ExactInt)>> {
    let (r, big_m) = even_middle(n)?;
    let table = KappaTable::build(r, big_m)?;
    let kappa_full = table.kappa(big_m)?;
    let mut out = Vec::new();
    for k in 0..=big_m {
        let lhs = kappa_full + table.kappa(k)?;
        let mut window_min = table.kappa(k)?;
        for a in (k..=big_m).rev() {
            let top = (k + big_m - a).min(big_m);
            window_min = window_min.min(table.kappa(top)?);
            if lhs > table.kappa(a)? + window_min {
                out.push((a, k));
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

fn conjecture_report(check: &str, n: u32, found: Vec<(ExactInt, ExactInt)>) -> Result<VerificationReport> {
    let (r, big_m) = even_middle(n)?;
    let mut rep = ReportBuilder::new(check)
        .param("n", n)
        .param("r", r)
        .param("M", int_value(big_m));
    rep.add_instances(((big_m + 1) * (big_m + 1)) as u64);
    for (a, k) in found {
        rep.violation(format!("a={a} k={k}"), "counterexample".to_string());
        rep.witness(json!({ "a": int_value(a), "k": int_value(k) }));
    }
    Ok(rep.finish())
}

pub fn conjecture51_report(n: u32) -> Result<VerificationReport> {
    conjecture_report("conjecture51", n, check_conjecture51(n)?)
}

pub fn conjecture51_exact_k_report(n: u32) -> Result<VerificationReport> {
    conjecture_report("conjecture51-exact-k", n, check_conjecture51_exact_k(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::shadow;
    use crate::squashed::first_segment;
    use proptest::prelude::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(2, 3).unwrap(), 0);
        assert_eq!(kappa(2, 5).unwrap(), -1);
        assert_eq!(kappa(7, 0).unwrap(), 0);
        let expected = [0, 1, 1, 0, 0, -1, -2, -2, -3, -4, -5, -5, -6];
        for (m, &e) in expected.iter().enumerate() {
            assert_eq!(kappa(2, m as ExactInt).unwrap(), e, "m={m}");
        }
    }

    #[test]
    fn kappa_star_examples() {
        assert_eq!(kappa_star(2, 4).unwrap(), 0);
        assert_eq!(kappa_star(2, 6).unwrap(), -2);
        assert_eq!(kappa_star(5, 0).unwrap(), 0);
        assert!(kappa_star(2, -1).is_err());
    }

    #[test]
    fn thresholds() {
        let got: Vec<_> = (1..=6).map(|r| negativity_threshold(r).unwrap()).collect();
        assert_eq!(got, [2, 5, 15, 50, 176, 638]);
        assert_eq!(zero_set(2).unwrap(), [0, 3, 4]);
        assert_eq!(zero_set(3).unwrap(), [0, 10, 13, 14]);
        assert!(negativity_threshold(0).is_err());
    }

    #[test]
    fn table_matches_cascade_and_d_sums() {
        for r in 1..=6 {
            let table = KappaTable::build(r, 924).unwrap();
            for m in 0..=924 {
                let k = kappa(r, m).unwrap();
                assert_eq!(table.kappa(m).unwrap(), k, "r={r} m={m}");
                assert_eq!(kappa_via_d(r, m).unwrap(), k, "r={r} m={m}");
            }
            assert_eq!(table.kappa_star(924).unwrap(), kappa_star(r, 924).unwrap());
        }
    }

    #[test]
    fn kappa_is_independent_of_ground() {
        for r in 1..=4u32 {
            for n in [2 * r, 2 * r + 1, 2 * r + 2] {
                let total = binom(n, r as i64).unwrap();
                for m in 0..=total {
                    let explicit = shadow(&first_segment(n, r, m).unwrap()).unwrap().len() as ExactInt;
                    assert_eq!(explicit - m, kappa(r, m).unwrap(), "n={n} r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn star_is_nonincreasing_and_nonpositive() {
        let table = KappaTable::build(3, 300).unwrap();
        let star = table.kappa_star_values();
        assert!(star.windows(2).all(|w| w[1] <= w[0]));
        assert!(star.iter().all(|&v| v <= 0));
    }

    #[test]
    fn wide_cascade_is_a_running_minimum() {
        for r in 1..=4 {
            let table = KappaTable::build(r, 500).unwrap();
            for m in 0..=500 {
                let wide = cascade_rep(m, r).unwrap().terms().iter().all(|&(a, i)| a + 1 >= 2 * i);
                if wide {
                    let k = table.kappa(m).unwrap();
                    assert!((0..m).all(|j| k <= table.kappa(j).unwrap()), "r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn tsv_export() {
        let tsv = KappaTable::build(2, 6).unwrap().to_tsv();
        let lines: Vec<_> = tsv.lines().collect();
        assert_eq!(lines[0], "m\tkappa\tkappa_star");
        assert_eq!(lines[6], "5\t-1\t-1");
        assert_eq!(lines.len(), 8);
    }

    #[test]
    fn table_beyond_the_representable_level() {
        let t = KappaTable::build(1, 100).unwrap();
        assert_eq!(t.kappa(100).unwrap(), -99);
        assert_eq!(t.kappa(64).unwrap(), -63);
        assert_eq!(t.kappa(65).unwrap(), -64);
    }

    #[test]
    fn table_range_errors() {
        let t = KappaTable::build(2, 6).unwrap();
        assert!(t.kappa(7).is_err());
        assert!(t.kappa(-1).is_err());
        assert_eq!(t.kappa_star_capped(11, 6).unwrap(), -2);
        assert!(KappaTable::build(0, 6).is_err());
    }

    #[test]
    fn negativity_and_zero_sweeps() {
        let rep = verify_prop22(2, 20).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
        assert_eq!(rep.witnesses[0]["zero_set"], json!([0, 3, 4]));
        let rep = verify_prop22(3, 40).unwrap();
        assert_eq!(rep.witnesses[0]["zero_set"], json!([0, 10, 13, 14]));
        assert!(verify_prop22(1, 5).unwrap().passed);
        assert!(verify_prop22(3, 10).is_err());
    }

    #[test]
    fn prefix_minimum_characterization() {
        assert!(verify_thm23(2, 15).unwrap().passed);
        assert_eq!(cascade_rep(5, 2).unwrap().terms(), &[(3, 2), (2, 1)]);
        assert_eq!(kappa(2, 5).unwrap(), kappa_star(2, 5).unwrap());
    }

    #[test]
    fn middle_inequality_sweeps() {
        for n in 2..=6 {
            let rep = verify_prop24(n).unwrap();
            assert!(rep.passed, "n={n}: {:?}", rep.violations);
        }
        assert_eq!(verify_prop24(4).unwrap().params["instances"], json!(49));
    }

    #[test]
    fn middle_minimum() {
        assert!(verify_lemma38(4).unwrap().passed);
        assert!(verify_lemma38(5).unwrap().passed);
        assert_eq!(kappa(3, 10).unwrap(), 0);
        assert_eq!(kappa(2, 6).unwrap(), -2);
    }

    #[test]
    fn literal_pair_inequality_fails_at_full_a() {
        let found = check_conjecture51(4).unwrap();
        assert_eq!(found, [(0, 1), (0, 2), (6, 1), (6, 2)]);
        assert_eq!(check_conjecture51(6).unwrap().len(), 42);
        assert!(check_conjecture51(5).is_err());
    }

    #[test]
    fn exact_pair_inequality_holds() {
        for n in [4, 6, 8] {
            assert!(check_conjecture51_exact_k(n).unwrap().is_empty(), "n={n}");
        }
    }

    proptest! {
        #[test]
        fn d_sum_agrees(r in 1u32..10, m in 0i128..50_000) {
            prop_assert_eq!(kappa(r, m).unwrap(), kappa_via_d(r, m).unwrap());
        }

        #[test]
        fn star_below_kappa(r in 1u32..6, m in 0i128..400) {
            prop_assert!(kappa_star(r, m).unwrap() <= kappa(r, m).unwrap());
        }
    }
}
