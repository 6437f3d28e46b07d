//! Exact binomial coefficients and the level-difference function `D(n, r)`.

use std::sync::OnceLock;

use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{ReportBuilder, VerificationReport};

/// Exact signed integer used for every count in the crate.
pub type ExactInt = i128;

/// Rows `0..PASCAL_ROWS` are served from a precomputed table.
/// `C(127, 63)` is below `2^124`, so every entry fits.
const PASCAL_ROWS: usize = 128;

fn pascal() -> &'static [Vec<ExactInt>] {
    static TABLE: OnceLock<Vec<Vec<ExactInt>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<ExactInt>> = Vec::with_capacity(PASCAL_ROWS);
        for n in 0..PASCAL_ROWS {
            let mut row = vec![1; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
            rows.push(row);
        }
        rows
    })
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binom(n: u32, k: i64) -> Result<ExactInt> {
    if k < 0 || k > n as i64 {
        return Ok(0);
    }
    if (n as usize) < PASCAL_ROWS {
        return Ok(pascal()[n as usize][k as usize]);
    }
    binom_multiplicative(n, k)
}

/// Table lookup for small arguments; callers guarantee `n < 128`.
pub(crate) fn binom_small(n: u32, k: i64) -> ExactInt {
    debug_assert!((n as usize) < PASCAL_ROWS);
    if k < 0 || k > n as i64 {
        0
    } else {
        pascal()[n as usize][k as usize]
    }
}

/// `C(n, k)` by the multiplicative formula.
///
/// After step `i` the accumulator holds `C(n, i + 1)`, so every division is
/// exact and intermediates stay within a factor `n` of the result.
pub fn binom_multiplicative(n: u32, k: i64) -> Result<ExactInt> {
    if k < 0 || k > n as i64 {
        return Ok(0);
    }
    let k = k.min(n as i64 - k) as ExactInt;
    let n = n as ExactInt;
    let mut acc: ExactInt = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1; cancel the common factor first
        let g = gcd(acc, i + 1);
        acc = (acc / g)
            .checked_mul((n - i) / ((i + 1) / g))
            .ok_or(Error::Overflow("binomial coefficient"))?;
    }
    Ok(acc)
}

fn gcd(mut a: ExactInt, mut b: ExactInt) -> ExactInt {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `D(n, r) = C(n, r-1) - C(n, r)` for `r <= n`, and `0` otherwise.
///
/// Both arguments must be positive.
pub fn d_value(n: u32, r: u32) -> Result<ExactInt> {
    if n == 0 || r == 0 {
        return Err(Error::precondition(format!(
            "D(n, r) needs n >= 1 and r >= 1, got D({n}, {r})"
        )));
    }
    d_branch(n, r)
}

/// The two-branch definition without the positivity guard. `n = 0` falls into
/// the `r > n` branch.
fn d_branch(n: u32, r: u32) -> Result<ExactInt> {
    if r > n {
        return Ok(0);
    }
    binom(n, r as i64 - 1)?
        .checked_sub(binom(n, r as i64)?)
        .ok_or(Error::Overflow("D(n, r)"))
}

/// `sum_{i=0}^{k} C(r+i, i)`, checked against the closed form `C(r+k+1, k)`.
pub fn hockey_stick(r: u32, k: u32) -> Result<ExactInt> {
    let mut sum: ExactInt = 0;
    for i in 0..=k {
        let term = binom(r + i, i as i64)?;
        sum = sum.checked_add(term).ok_or(Error::Overflow("hockey stick sum"))?;
    }
    let closed = binom(r + k + 1, k as i64)?;
    if sum != closed {
        return Err(Error::Identity(format!(
            "sum_(i<={k}) C({r}+i, i) = {sum} but C({}, {k}) = {closed}",
            r + k + 1
        )));
    }
    Ok(sum)
}

fn sign(x: ExactInt) -> i32 {
    x.signum() as i32
}

/// Exhaustive check of the `D(n, r)` identity suite.
///
/// Grid checks run over `1 <= n <= n_max`, `1 <= r <= r_max`:
///
/// * sign trichotomy: `D(n, r)` has the sign of `2r - 1 - n` for `r <= n`;
/// * recurrence `D(n-1, r-1) + D(n-1, r) = D(n, r)` for `2 <= r <= n-1`,
///   where all three values are on the formula branch;
/// * `D(n+1, r) < D(n, r)` for `n >= 2r - 1`;
/// * `D(n, r) < D(m, r)` for `r <= m < n` and `n >= 2r - 1`;
/// * column maxima `D(m, 1) <= D(1, 1)` and `D(m, r) <= D(2r-2, r)` for `r >= 2`.
///
/// Sum checks: `sum_{i=1}^{j} D(j-2+i, i) = 1` for `2 <= j <= r_max`, and
/// `D(2r, r) + sum_{i<r} D(2i-2, i) < 0` for `1 <= r <= r_max`.
pub fn verify_d_identities(n_max: u32, r_max: u32) -> Result<VerificationReport> {
    if n_max == 0 || r_max == 0 {
        return Err(Error::precondition("n_max and r_max must be positive"));
    }
    let mut rep = ReportBuilder::new("d-identities")
        .param("n_max", n_max)
        .param("r_max", r_max);

    for n in 1..=n_max {
        for r in 1..=r_max.min(n) {
            let d = d_value(n, r)?;
            let expected = sign(2 * r as ExactInt - 1 - n as ExactInt);
            rep.check(
                sign(d) == expected,
                || format!("sign D({n},{r})"),
                || format!("D = {d}, expected sign {expected}"),
            );
        }
    }

    for n in 3..=n_max {
        for r in 2..=r_max.min(n - 1) {
            let lhs = d_value(n - 1, r - 1)? + d_value(n - 1, r)?;
            let rhs = d_value(n, r)?;
            rep.check(
                lhs == rhs,
                || format!("recurrence n={n} r={r}"),
                || format!("D({},{}) + D({},{}) = {lhs} != D({n},{r}) = {rhs}", n - 1, r - 1, n - 1, r),
            );
        }
    }

    for r in 1..=r_max {
        for n in (2 * r - 1)..n_max {
            let (next, cur) = (d_value(n + 1, r)?, d_value(n, r)?);
            rep.check(
                next < cur,
                || format!("decrease n={n} r={r}"),
                || format!("D({},{r}) = {next} >= D({n},{r}) = {cur}", n + 1),
            );
        }
    }

    for r in 1..=r_max {
        for n in (2 * r - 1).max(1)..=n_max {
            for m in r..n {
                let (dn, dm) = (d_value(n, r)?, d_value(m, r)?);
                rep.check(
                    dn < dm,
                    || format!("cross-n n={n} m={m} r={r}"),
                    || format!("D({n},{r}) = {dn} >= D({m},{r}) = {dm}"),
                );
            }
        }
    }

    let d11 = d_value(1, 1)?;
    for m in 1..=n_max {
        let dm = d_value(m, 1)?;
        rep.check(
            dm <= d11,
            || format!("column max m={m} r=1"),
            || format!("D({m},1) = {dm} > D(1,1) = {d11}"),
        );
    }
    for r in 2..=r_max {
        let peak = d_value(2 * r - 2, r)?;
        for m in 1..=n_max {
            let dm = d_value(m, r)?;
            rep.check(
                dm <= peak,
                || format!("column max m={m} r={r}"),
                || format!("D({m},{r}) = {dm} > D({},{r}) = {peak}", 2 * r - 2),
            );
        }
    }

    let mut sums = Vec::new();
    for j in 2..=r_max {
        let mut s: ExactInt = 0;
        for i in 1..=j {
            s += d_value(j - 2 + i, i)?;
        }
        sums.push(s);
        rep.check(
            s == 1,
            || format!("telescoping sum j={j}"),
            || format!("sum = {s}"),
        );
    }
    rep.set_param("telescoping_sums", json!(sums.iter().map(|&s| s as i64).collect::<Vec<_>>()));

    for r in 1..=r_max {
        // i = 1 contributes D(0, 1), which the two-branch definition sends to 0.
        let mut s = d_value(2 * r, r)?;
        for i in 1..r {
            s += d_branch(2 * i - 2, i)?;
        }
        rep.check(
            s < 0,
            || format!("negative column sum r={r}"),
            || format!("D(2r,r) + sum = {s}"),
        );
    }

    Ok(rep.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factorial_binom(n: u32, k: u32) -> ExactInt {
        let f = |x: u32| (1..=x as ExactInt).product::<ExactInt>();
        f(n) / (f(k) * f(n - k))
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(5, 0).unwrap(), 1);
        assert_eq!(binom(5, 3).unwrap(), factorial_binom(5, 3));
        assert_eq!(binom(5, 3).unwrap(), 10);
        assert_eq!(binom(3, 5).unwrap(), 0);
        assert_eq!(binom(3, -1).unwrap(), 0);
        assert_eq!(binom(0, 0).unwrap(), 1);
    }

    #[test]
    fn table_and_multiplicative_agree() {
        for n in 0..PASCAL_ROWS as u32 {
            for k in 0..=n {
                assert_eq!(binom(n, k as i64).unwrap(), binom_multiplicative(n, k as i64).unwrap());
            }
        }
    }

    #[test]
    fn factorial_oracle_small_rows() {
        for n in 0..=30 {
            for k in 0..=n {
                assert_eq!(binom(n, k as i64).unwrap(), factorial_binom(n, k));
            }
        }
    }

    #[test]
    fn large_rows_go_multiplicative() {
        assert_eq!(binom(200, 2).unwrap(), 19900);
        assert_eq!(binom(1000, 0).unwrap(), 1);
        assert_eq!(binom(300, 150), Err(Error::Overflow("binomial coefficient")));
    }

    #[test]
    fn d_value_examples() {
        assert_eq!(d_value(3, 2).unwrap(), 0);
        assert_eq!(d_value(2, 1).unwrap(), -1);
        assert_eq!(d_value(1, 2).unwrap(), 0);
        assert!(matches!(d_value(0, 1), Err(Error::Precondition(_))));
        assert!(matches!(d_value(4, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn hockey_stick_examples() {
        assert_eq!(hockey_stick(2, 0).unwrap(), 1);
        assert_eq!(hockey_stick(1, 2).unwrap(), 1 + 2 + 3);
        assert_eq!(hockey_stick(3, 3).unwrap(), 1 + 4 + 10 + 20);
        assert_eq!(hockey_stick(3, 3).unwrap(), binom(7, 3).unwrap());
    }

    #[test]
    fn telescoping_and_negative_sums_small_cases() {
        // j = 2: D(1,1) + D(2,2) = 0 + 1
        assert_eq!(d_value(1, 1).unwrap() + d_value(2, 2).unwrap(), 1);
        // r = 1: the sum is just D(2,1)
        assert_eq!(d_value(2, 1).unwrap(), -1);
    }

    #[test]
    fn identity_suite_is_clean() {
        let rep = verify_d_identities(12, 6).unwrap();
        assert!(rep.passed, "{:?}", rep.violations);
    }

    #[test]
    fn literal_recurrence_breaks_on_the_zero_branch() {
        // At r = n the "0 otherwise" branch gives D(n-1, n) = 0, and the
        // identity only holds on the formula branch.
        let n = 5;
        let lhs = d_value(n - 1, n - 1).unwrap() + d_value(n - 1, n).unwrap();
        assert_ne!(lhs, d_value(n, n).unwrap());
    }

    proptest! {
        #[test]
        fn pascal_rule(n in 2u32..120, k in 1u32..119) {
            prop_assume!(k < n);
            prop_assert_eq!(
                binom(n, k as i64).unwrap(),
                binom(n - 1, k as i64 - 1).unwrap() + binom(n - 1, k as i64).unwrap()
            );
        }

        #[test]
        fn sign_trichotomy(n in 1u32..60, r in 1u32..60) {
            prop_assume!(r <= n);
            let d = d_value(n, r).unwrap();
            let twice = 2 * r as i64;
            let expected = (twice - (n as i64 + 1)).signum();
            prop_assert_eq!(d.signum() as i64, expected);
        }
    }
}
