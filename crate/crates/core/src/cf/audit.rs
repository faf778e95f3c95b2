use serde::Serialize;

use super::convergents::ConvergentTable;
use super::engine::{Flavor, Stepper};
use super::quad::QuadIrr;
use crate::error::Result;
use crate::padic::{vp_int, Valuation};

/// First failed check of a valuation audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    pub n: usize,
    pub check: &'static str,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    /// Number of indices `n` that were checked.
    pub checked: usize,
    pub violation: Option<AuditViolation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks, for `0 ≤ n ≤ n_max`, that `v_p(A_n) = −K'_n` (when `a_0 ≠ 0`),
/// `v_p(B_n) = −K_n`, and `v_p(Q_n − α) = 2K_n + k_{n+1} ≥ 2n + 1`.
pub fn valuation_audit(alpha: &QuadIrr, flavor: Flavor, n_max: usize) -> Result<AuditReport> {
    let p = alpha.prime().clone();
    let mut stepper = Stepper::new(alpha.clone(), flavor);
    let mut table = ConvergentTable::new(&p);
    for _ in 0..n_max + 2 {
        table.push(stepper.advance()?);
    }
    let a0_zero = table.quotients()[0].is_zero();
    let fail = |n: usize, check, expected: String, found: String| AuditReport {
        checked: n,
        violation: Some(AuditViolation {
            n,
            check,
            expected,
            found,
        }),
    };
    for n in 0..=n_max {
        let ni = n as isize;
        if !a0_zero {
            let v = vp_int(table.a_tilde(ni), &p);
            if v != Valuation::Finite(0) {
                return Ok(fail(
                    n,
                    "v_p(A_n) = -K'_n",
                    format!("{}", -table.k_prime(ni)),
                    format!("{v} - K'_n"),
                ));
            }
        }
        let v = vp_int(table.b_tilde(ni), &p);
        if v != Valuation::Finite(0) {
            return Ok(fail(
                n,
                "v_p(B_n) = -K_n",
                format!("{}", -table.k_sum(ni)),
                format!("{v} - K_n"),
            ));
        }
        let q = table.convergent(ni)?;
        let found = alpha.valuation_minus_rational(&q)?;
        let expected = 2 * table.k_sum(ni) + table.k(n + 1);
        if found != Valuation::Finite(expected) {
            return Ok(fail(
                n,
                "v_p(Q_n - alpha) = 2K_n + k_{n+1}",
                expected.to_string(),
                found.to_string(),
            ));
        }
        if expected < 2 * n as i64 + 1 {
            return Ok(fail(
                n,
                "v_p(Q_n - alpha) >= 2n + 1",
                format!(">= {}", 2 * n + 1),
                expected.to_string(),
            ));
        }
    }
    Ok(AuditReport {
        checked: n_max + 1,
        violation: None,
    })
}
