use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cf::{ConvergentTable, Expansion, LaurentInt, QuadIrr};
use crate::error::{Error, Result};
use crate::padic::OddPrime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceZeroClass {
    /// `v_p(α) < 0`: `α_1` is regular.
    PreperiodOne,
    /// `v_p(α) ≥ 0`: `a_0 = 0` and `α_2` is regular.
    PreperiodTwo,
}

impl TraceZeroClass {
    pub fn preperiod_len(self) -> usize {
        match self {
            TraceZeroClass::PreperiodOne => 1,
            TraceZeroClass::PreperiodTwo => 2,
        }
    }
}

/// Classifies a trace-zero `α = δ/(p^k c)` by the length its preperiod must
/// have if the Browkin expansion is periodic.
pub fn trace_zero_classify(alpha: &QuadIrr) -> Result<TraceZeroClass> {
    if !alpha.b().is_zero() {
        return Err(Error::Domain("trace_zero_classify needs b = 0".into()));
    }
    Ok(if alpha.valuation()? < 0 {
        TraceZeroClass::PreperiodOne
    } else {
        TraceZeroClass::PreperiodTwo
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TemplateMatch {
    /// `|a_0| < p/4`, the hypothesis under which the template is forced.
    pub applicable: bool,
    pub preperiod_ok: bool,
    pub last_is_twice_a0: bool,
    pub interior_palindromic: bool,
}

impl TemplateMatch {
    pub fn matches(&self) -> bool {
        self.preperiod_ok && self.last_is_twice_a0 && self.interior_palindromic
    }
}

/// Matches a periodic expansion against `[a_0, (a_1, …, a_1, 2a_0)*]`.
pub fn match_trace_zero_template(e: &Expansion) -> Result<TemplateMatch> {
    let period = e
        .period
        .as_ref()
        .ok_or_else(|| Error::Domain("template match needs a periodic expansion".into()))?;
    let a0 = e
        .preperiod
        .first()
        .ok_or_else(|| Error::Domain("template match needs a nonempty preperiod".into()))?;
    let p = BigRational::from_integer(e.p.into());
    let applicable = a0.to_rational().abs() * BigRational::from_integer(4.into()) < p;
    let (last, interior) = period.split_last().expect("period is nonempty");
    let interior_rev: Vec<LaurentInt> = interior.iter().rev().cloned().collect();
    Ok(TemplateMatch {
        applicable,
        preperiod_ok: e.preperiod.len() == 1,
        last_is_twice_a0: *last == a0 + a0,
        interior_palindromic: interior == interior_rev.as_slice(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DtVerdict {
    pub d: usize,
    pub t: usize,
    pub parity: Parity,
    /// `a_0A_{d−1} + A_{d−2}` against `A_{t−1}(A_t + A_{t−2})` or `A_t² + A_{t−1}²`.
    pub a_identity: bool,
    /// `B_{d−1}` against `B_{t−1}(B_t + B_{t−2})` or `B_t² + B_{t−1}²`.
    pub b_identity: bool,
}

impl DtVerdict {
    pub fn holds(&self) -> bool {
        self.a_identity && self.b_identity
    }
}

/// Checks the convergent identities of a palindromic `[a_0, a_1, …, a_1, a_0]`
/// of length `d + 1 ≥ 3`.
pub fn dt_identities(cf: &[LaurentInt], p: &OddPrime) -> Result<DtVerdict> {
    if cf.len() < 3 {
        return Err(Error::Domain("dt identities need length at least 3".into()));
    }
    if cf.iter().ne(cf.iter().rev()) {
        return Err(Error::Domain(
            "dt identities need a palindromic sequence".into(),
        ));
    }
    let d = cf.len() - 1;
    let t = d / 2;
    let table = ConvergentTable::from_quotients(p, cf);
    let (a, b) = (
        |n: usize| table.a(n as isize - 1),
        |n: usize| table.b(n as isize - 1),
    );
    // a(n) = A_{n−1}, shifted so every index stays nonnegative
    let lhs_a = cf[0].to_rational() * a(d) + a(d - 1);
    let lhs_b = b(d);
    let (parity, rhs_a, rhs_b) = if d.is_multiple_of(2) {
        (
            Parity::Even,
            a(t) * (a(t + 1) + a(t - 1)),
            b(t) * (b(t + 1) + b(t - 1)),
        )
    } else {
        (
            Parity::Odd,
            a(t + 1) * a(t + 1) + a(t) * a(t),
            b(t + 1) * b(t + 1) + b(t) * b(t),
        )
    };
    Ok(DtVerdict {
        d,
        t,
        parity,
        a_identity: lhs_a == rhs_a,
        b_identity: lhs_b == rhs_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{expand, parse_quotients, Flavor, QuadSpec};

    #[test]
    fn classification() {
        let p5 = OddPrime::new(5).unwrap();
        let one = QuadSpec::new(-434, 0, -434, 1, 1).normalize(&p5).unwrap();
        assert_eq!(
            trace_zero_classify(&one).unwrap(),
            TraceZeroClass::PreperiodOne
        );
        let two = QuadSpec::new(-434, 0, 1, -1, 1).normalize(&p5).unwrap();
        assert_eq!(
            trace_zero_classify(&two).unwrap(),
            TraceZeroClass::PreperiodTwo
        );
        let bad = QuadSpec::new(19, -13, 6, 1, 2).normalize(&p5).unwrap();
        assert!(trace_zero_classify(&bad).is_err());
        let e = expand(&one, Flavor::Browkin, 200).unwrap();
        let m = match_trace_zero_template(&e).unwrap();
        assert!(m.applicable && m.matches(), "{m:?}");
    }

    #[test]
    fn dt_small_cases() {
        let p5 = OddPrime::new(5).unwrap();
        for s in [
            "2/5, -1/5, 2/5",
            "1/5, 3/25, 3/25, 1/5",
            "6/5, 1, -2/5, 1, 6/5",
            "4, 0, 1/5, 1/5, 0, 4",
        ] {
            let cf = parse_quotients(s, &p5).unwrap();
            let v = dt_identities(&cf, &p5).unwrap();
            assert!(v.holds(), "{s}: {v:?}");
        }
        assert!(dt_identities(&parse_quotients("1, 2, 3", &p5).unwrap(), &p5).is_err());
    }
}
