//! The full verification suite and its aggregate report.

use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::antichain::{
    sperner_max_check, verify_sperner_operations, verify_thm25_brute, verify_thm26_structure,
    BRUTE_FORCE_LIMIT,
};
use crate::binomial::{binom, verify_d_identities};
use crate::error::Result;
use crate::kappa::{
    conjecture51_exact_k_report, conjecture51_report, negativity_threshold, verify_lemma38, verify_prop22,
    verify_prop24, verify_thm23,
};
use crate::report::{VerificationReport, Violation};
use crate::shadow::{
    verify_clements_minimality, verify_kkt_lower_bound, verify_kkt_tightness, verify_lieby_duality,
    verify_sperner_ratios,
};

pub const DEFAULT_N_MAX: u32 = 8;
pub const DEFAULT_R_MAX: u32 = 6;

/// Number of random families in the lower-bound sweep, and its seed.
pub const KKT_SAMPLES: usize = 1000;
pub const KKT_SEED: u64 = 0x6b6b_7431;

/// Proven statements gate the aggregate; open ones are reported only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Theorem,
    Conjecture,
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub kind: CheckKind,
    pub report: VerificationReport,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub n_max: u32,
    pub r_max: u32,
    pub entries: Vec<SuiteEntry>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    /// True when every theorem-kind check passed.
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.kind == CheckKind::Theorem)
            .all(|e| e.report.passed)
    }

    /// Folds the suite into one report. Violations of theorem-kind checks are
    /// carried over with the check name prefixed to the case.
    pub fn to_report(&self) -> VerificationReport {
        let checks: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "check": e.report.check,
                    "kind": e.kind,
                    "params": e.report.params,
                    "passed": e.report.passed,
                    "violations": e.report.violations.len(),
                })
            })
            .collect();
        let violations = self
            .entries
            .iter()
            .filter(|e| e.kind == CheckKind::Theorem)
            .flat_map(|e| {
                e.report.violations.iter().map(move |v| Violation {
                    case: format!("{}: {}", e.report.check, v.case),
                    detail: v.detail.clone(),
                })
            })
            .collect();
        VerificationReport {
            check: "all".to_string(),
            params: [
                ("n_max".to_string(), json!(self.n_max)),
                ("r_max".to_string(), json!(self.r_max)),
                ("checks".to_string(), json!(checks)),
            ]
            .into_iter()
            .collect(),
            passed: self.passed(),
            violations,
            witnesses: Vec::new(),
            elapsed_ms: self.elapsed_ms,
        }
    }
}

pub fn run_all(n_max: u32, r_max: u32) -> Result<SuiteReport> {
    run_all_with_progress(n_max, r_max, &mut |_| {})
}

/// Runs every sweep for ground sets up to `n_max` and κ levels up to `r_max`.
///
/// The `D` identities use the grid `3 n_max × 2 r_max`, and the κ sweeps run
/// to `m = C(2 r_max, r_max)` (at least the negativity threshold). Exhaustive
/// antichain searches are limited to `n <= 5`.
pub fn run_all_with_progress(n_max: u32, r_max: u32, progress: &mut dyn FnMut(&str)) -> Result<SuiteReport> {
    let started = Instant::now();
    let mut entries = Vec::new();
    let mut push = |kind: CheckKind, report: VerificationReport, progress: &mut dyn FnMut(&str)| {
        progress(&report.summary_line());
        entries.push(SuiteEntry { kind, report });
    };
    use CheckKind::{Conjecture, Theorem};

    push(Theorem, verify_d_identities(3 * n_max, 2 * r_max)?, progress);
    push(Theorem, verify_kkt_tightness(n_max)?, progress);
    push(Theorem, verify_kkt_lower_bound(KKT_SAMPLES, n_max, KKT_SEED)?, progress);
    for n in 2..=n_max {
        push(Theorem, verify_lieby_duality(n)?, progress);
        for k in 1..n {
            push(Theorem, verify_clements_minimality(n, k)?, progress);
        }
    }
    for n in 1..=n_max.min(BRUTE_FORCE_LIMIT) {
        push(Theorem, verify_sperner_ratios(n)?, progress);
        push(Theorem, verify_sperner_operations(n, 0, 0)?, progress);
        push(Theorem, sperner_max_check(n)?, progress);
    }
    if n_max > BRUTE_FORCE_LIMIT {
        push(Theorem, verify_sperner_operations(n_max, 500, KKT_SEED)?, progress);
    }

    let m_top = binom(2 * r_max, r_max as i64)?;
    for r in 1..=r_max {
        let m_max = m_top.max(negativity_threshold(r)?);
        push(Theorem, verify_prop22(r, m_max)?, progress);
        push(Theorem, verify_thm23(r, m_max)?, progress);
    }
    for n in 2..=n_max {
        push(Theorem, verify_prop24(n)?, progress);
        push(Theorem, verify_lemma38(n)?, progress);
    }
    if n_max >= 4 {
        push(Theorem, verify_thm25_brute(4)?, progress);
        for k in 0..=binom(4, 2)? {
            push(Theorem, verify_thm26_structure(4, k)?, progress);
        }
    }
    for n in (4..=n_max).step_by(2) {
        push(Conjecture, conjecture51_report(n)?, progress);
        push(Conjecture, conjecture51_exact_k_report(n)?, progress);
    }
    Ok(SuiteReport {
        n_max,
        r_max,
        entries,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}
