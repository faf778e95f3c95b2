use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::laurent::{common_denominator, LaurentInt};
use crate::error::{Error, Result};
use crate::padic::{
    inverse_mod_prime_power, is_perfect_square, padic_square_exists, split_p, OddPrime, PadicSqrt,
    Valuation, DEFAULT_PRECISION_CAP,
};

/// Raw input data `(Δ, b, c, k, branch)` for the quadratic irrational
/// `(b+δ)/(p^k c)`, with `δ² = Δ` and the unit part of `δ` congruent to
/// `branch` modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSpec {
    pub delta: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub k: i64,
    pub branch: u64,
}

impl QuadSpec {
    pub fn new(
        delta: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        k: i64,
        branch: u64,
    ) -> Self {
        QuadSpec {
            delta: delta.into(),
            b: b.into(),
            c: c.into(),
            k,
            branch,
        }
    }

    pub fn normalize(&self, p: &OddPrime) -> Result<QuadIrr> {
        QuadIrr::normalize(self, p, DEFAULT_PRECISION_CAP)
    }
}

impl fmt::Display for QuadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{},{}",
            self.delta, self.b, self.c, self.k, self.branch
        )
    }
}

impl FromStr for QuadSpec {
    type Err = Error;

    /// `"Δ,b,c,k,branch"`, whitespace-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<String> = s
            .split(',')
            .map(|t| {
                t.chars()
                    .filter(|c| !c.is_whitespace())
                    .collect::<String>()
                    .replace('−', "-")
            })
            .collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("expected Δ,b,c,k,branch, got {s:?}")));
        }
        let int =
            |t: &str| BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad integer {t:?}")));
        Ok(QuadSpec {
            delta: int(&parts[0])?,
            b: int(&parts[1])?,
            c: int(&parts[2])?,
            k: parts[3]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {:?}", parts[3])))?,
            branch: parts[4]
                .parse()
                .map_err(|_| Error::Parse(format!("bad branch {:?}", parts[4])))?,
        })
    }
}

impl Serialize for QuadSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A quadratic irrational `α = (b+δ)/(p^k c)` over a fixed root `δ`.
///
/// Invariants: `c ≠ 0`, `p ∤ c`, `c | Δ − b²`. The exponent `k` may be
/// negative. With `Δ` and the branch fixed, `(b, c, k)` determines `α`.
#[derive(Clone)]
pub struct QuadIrr {
    root: Arc<PadicSqrt>,
    b: BigInt,
    c: BigInt,
    k: i64,
}

fn residue_u64(x: &BigInt, p: &OddPrime) -> u64 {
    u64::try_from(x.mod_floor(p.as_bigint())).expect("residue below p")
}

impl QuadIrr {
    /// Brings raw data into canonical shape: powers of `p` move from `c` into
    /// `k`, `p²` factors of `Δ` are absorbed into `k` while `p | b`, and if
    /// `c ∤ Δ − b²` numerator and denominator are scaled by `c`.
    pub fn normalize(spec: &QuadSpec, p: &OddPrime, cap: u64) -> Result<QuadIrr> {
        if spec.c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if is_perfect_square(&spec.delta) {
            return Err(Error::PerfectSquare(spec.delta.clone()));
        }
        let (j, c) = split_p(&spec.c, p);
        let mut k = spec.k + j as i64;
        let sq = padic_square_exists(&spec.delta, p).ok_or_else(|| Error::NoPadicSqrt {
            radicand: spec.delta.clone(),
            p: p.get(),
        })?;
        let br = BigInt::from(spec.branch);
        if spec.branch == 0
            || spec.branch >= p.get()
            || !(&br * &br - &sq.unit).is_multiple_of(p.as_bigint())
        {
            return Err(Error::InvalidBranch {
                branch: spec.branch,
                radicand: spec.delta.clone(),
                p: p.get(),
            });
        }
        let mut delta = spec.delta.clone();
        let mut b = spec.b.clone();
        let p2 = p.as_bigint() * p.as_bigint();
        let mut s = sq.half_valuation;
        while s > 0 && b.is_multiple_of(p.as_bigint()) {
            b /= p.as_bigint();
            delta /= &p2;
            k -= 1;
            s -= 1;
        }
        let root = PadicSqrt::with_cap(&delta, spec.branch, p, cap)?;
        Self::assemble(Arc::new(root), b, c, k)
    }

    /// Builds `(b+δ)/(p^k c)` over an existing root, fixing up `c` as in
    /// [`QuadIrr::normalize`].
    pub fn from_root(root: Arc<PadicSqrt>, b: BigInt, c: BigInt, k: i64) -> Result<QuadIrr> {
        if c.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (j, c) = split_p(&c, root.prime());
        Self::assemble(root, b, c, k + j as i64)
    }

    fn assemble(root: Arc<PadicSqrt>, b: BigInt, c: BigInt, k: i64) -> Result<QuadIrr> {
        let rem = root.radicand() - &b * &b;
        if rem.is_multiple_of(&c) {
            return Ok(QuadIrr { root, b, c, k });
        }
        let p = root.prime().clone();
        let delta = root.radicand() * &c * &c;
        let branch = residue_u64(&(BigInt::from(root.branch()) * &c), &p);
        let scaled = PadicSqrt::with_cap(&delta, branch, &p, root.precision_cap())?;
        Ok(QuadIrr {
            root: Arc::new(scaled),
            b: b * &c,
            c: &c * &c,
            k,
        })
    }

    /// Used by the stepper, which maintains the invariants itself.
    pub(crate) fn from_parts_unchecked(
        root: Arc<PadicSqrt>,
        b: BigInt,
        c: BigInt,
        k: i64,
    ) -> QuadIrr {
        debug_assert!(!c.is_zero());
        debug_assert!((root.radicand() - &b * &b).is_multiple_of(&c));
        QuadIrr { root, b, c, k }
    }

    /// `x + yδ` as a quadratic irrational (`y ≠ 0`).
    pub fn from_surd(x: &BigRational, y: &BigRational, root: &Arc<PadicSqrt>) -> Result<QuadIrr> {
        if y.is_zero() {
            return Err(Error::RationalState { step: 0 });
        }
        let p = root.prime().clone();
        let l = common_denominator([x, y]);
        let mut xx = (x * &l).to_integer();
        let mut yy = (y * &l).to_integer();
        let mut ll = l;
        let g = xx.gcd(&yy).gcd(&ll);
        if !g.is_one() {
            xx /= &g;
            yy /= &g;
            ll /= &g;
        }
        if yy.is_one() {
            return Self::from_root(root.clone(), xx, ll, 0);
        }
        // yδ is the root of y²Δ whose unit part is y₀δ₀
        let (_, y0) = split_p(&yy, &p);
        let branch = residue_u64(&(&y0 * BigInt::from(root.branch())), &p);
        let spec = QuadSpec {
            delta: root.radicand() * &yy * &yy,
            b: xx,
            c: ll,
            k: 0,
            branch,
        };
        let mut out = Self::normalize(&spec, &p, root.precision_cap())?;
        // the radicand may have been rescaled; reuse the caller's root when possible
        if out.root.radicand() == root.radicand() && out.root.branch() == root.branch() {
            out.root = root.clone();
        }
        Ok(out)
    }

    pub fn prime(&self) -> &OddPrime {
        self.root.prime()
    }

    pub fn root(&self) -> &Arc<PadicSqrt> {
        &self.root
    }

    pub fn delta(&self) -> &BigInt {
        self.root.radicand()
    }

    pub fn branch(&self) -> u64 {
        self.root.branch()
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// The state triple used for cycle detection.
    pub fn key(&self) -> (BigInt, BigInt, i64) {
        (self.b.clone(), self.c.clone(), self.k)
    }

    pub fn spec(&self) -> QuadSpec {
        QuadSpec {
            delta: self.delta().clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            k: self.k,
            branch: self.branch(),
        }
    }

    fn p_pow_k(&self) -> BigRational {
        let p = self.prime();
        if self.k >= 0 {
            BigRational::from_integer(p.pow(self.k as u64))
        } else {
            BigRational::new(BigInt::one(), p.pow((-self.k) as u64))
        }
    }

    /// `(x, y)` with `α = x + yδ`.
    pub fn surd_parts(&self) -> (BigRational, BigRational) {
        let den = self.p_pow_k() * BigRational::from_integer(self.c.clone());
        let y = den.recip();
        (BigRational::from_integer(self.b.clone()) * &y, y)
    }

    /// `v_p(α)`, computed from the digits of `δ`.
    pub fn valuation(&self) -> Result<i64> {
        let v = self.root.valuation_of(&self.b, &BigInt::one())?;
        Ok(v.finite().expect("b + δ ≠ 0") - self.k)
    }

    /// `v_p(α − q)` for a rational `q`.
    pub fn valuation_minus_rational(&self, q: &BigRational) -> Result<Valuation> {
        // α − q = (b + δ − q p^k c)/(p^k c)
        let t = q * self.p_pow_k() * BigRational::from_integer(self.c.clone());
        let (u, w) = (t.numer(), t.denom());
        let v = self.root.valuation_of(&(w * &self.b - u), w)?;
        let vw = split_p(w, self.prime()).0 as i64;
        Ok(match v {
            Valuation::Finite(x) => Valuation::Finite(x - vw - self.k),
            Valuation::Infinite => Valuation::Infinite,
        })
    }

    /// An element of `Z[1/p]` congruent to `α` modulo `p^n`.
    pub fn approx(&self, n: i64) -> Result<LaurentInt> {
        let p = self.prime();
        let prec = n + self.k;
        if prec <= 0 {
            return Ok(LaurentInt::zero(p));
        }
        let prec = prec as u64;
        let m = p.pow(prec);
        let inv = inverse_mod_prime_power(&self.c, p, prec)?;
        let t = ((&self.b + self.root.digits(prec)?) * inv).mod_floor(&m);
        Ok(LaurentInt::new(t, self.k, p))
    }

    /// `α^c = (b − δ)/(p^k c)`, stored as `(−b + δ)/(p^k·(−c))` over the same root.
    pub fn conjugate(&self) -> QuadIrr {
        QuadIrr {
            root: self.root.clone(),
            b: -&self.b,
            c: -&self.c,
            k: self.k,
        }
    }

    pub fn neg(&self) -> QuadIrr {
        QuadIrr {
            root: self.root.clone(),
            b: self.b.clone(),
            c: -&self.c,
            k: self.k,
        }
    }

    /// `1/α = (−b + δ)/(p^{−k}·(Δ − b²)/c)`.
    pub fn reciprocal(&self) -> Result<QuadIrr> {
        let n = (self.delta() - &self.b * &self.b) / &self.c;
        Self::from_root(self.root.clone(), -&self.b, n, -self.k)
    }

    /// `α + q` for `q ∈ Q`.
    pub fn add_rational(&self, q: &BigRational) -> Result<QuadIrr> {
        let (x, y) = self.surd_parts();
        Self::from_surd(&(x + q), &y, &self.root)
    }

    /// `α + α^c`.
    pub fn trace(&self) -> BigRational {
        let (x, _) = self.surd_parts();
        x * BigInt::from(2)
    }

    /// `α·α^c = (b² − Δ)/(p^{2k}c²)`.
    pub fn norm(&self) -> BigRational {
        let (x, y) = self.surd_parts();
        &x * &x - &y * &y * BigRational::from_integer(self.delta().clone())
    }

    /// Primitive integer coefficients `[a₂, a₁, a₀]` (with `a₂ > 0`) of the
    /// minimal polynomial `a₂X² + a₁X + a₀`.
    pub fn min_poly(&self) -> [BigInt; 3] {
        primitive_poly(&BigRational::one(), &-self.trace(), &self.norm())
    }

    pub fn to_quad_number(&self) -> QuadNumber {
        let (x, y) = self.surd_parts();
        QuadNumber::new(x, y, self.delta().clone())
    }

    /// Whether two quadratic irrationals, possibly over different radicands,
    /// are the same element of `Q_p`.
    pub fn same_value(&self, other: &QuadIrr) -> bool {
        if self.prime() != other.prime() {
            return false;
        }
        let (x1, y1) = self.surd_parts();
        let (x2, y2) = other.surd_parts();
        x1 == x2 && surd_eq(&y1, &self.root, &y2, &other.root)
    }
}

/// `y₁δ₁ = y₂δ₂` for nonzero rationals and roots over the same prime.
pub(crate) fn surd_eq(y1: &BigRational, r1: &PadicSqrt, y2: &BigRational, r2: &PadicSqrt) -> bool {
    let d1 = BigRational::from_integer(r1.radicand().clone());
    let d2 = BigRational::from_integer(r2.radicand().clone());
    if y1 * y1 * d1 != y2 * y2 * d2 {
        return false;
    }
    // squares agree, so the two differ at most by sign; compare unit residues
    let p = r1.prime();
    let unit = |y: &BigRational, r: &PadicSqrt| {
        let (_, n) = split_p(y.numer(), p);
        let (_, d) = split_p(y.denom(), p);
        let inv = crate::padic::mod_inverse(&d, p.as_bigint()).expect("unit");
        (n * inv * BigInt::from(r.branch())).mod_floor(p.as_bigint())
    };
    unit(y1, r1) == unit(y2, r2)
}

pub(crate) fn primitive_poly(a2: &BigRational, a1: &BigRational, a0: &BigRational) -> [BigInt; 3] {
    let l = common_denominator([a2, a1, a0]);
    let mut c = [a2, a1, a0].map(|x| (x * &l).to_integer());
    let g = c[0].gcd(&c[1]).gcd(&c[2]);
    let g = if c[0].is_negative() { -g } else { g };
    if !g.is_zero() {
        for x in c.iter_mut() {
            *x /= &g;
        }
    }
    c
}

impl PartialEq for QuadIrr {
    fn eq(&self, other: &Self) -> bool {
        *self.root == *other.root && self.b == other.b && self.c == other.c && self.k == other.k
    }
}

impl Eq for QuadIrr {}

impl fmt::Debug for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadIrr({self})")
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + √{})/({}^{}·{}), δ₀ ≡ {} mod {}",
            self.b,
            self.delta(),
            self.prime(),
            self.k,
            self.c,
            self.branch(),
            self.prime()
        )
    }
}

/// An element `x + y√d` of `Q(√d)` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadNumber {
    pub x: BigRational,
    pub y: BigRational,
    pub d: BigInt,
}

impl QuadNumber {
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> Self {
        QuadNumber { x, y, d }
    }

    pub fn rational(x: BigRational, d: &BigInt) -> Self {
        QuadNumber {
            x,
            y: BigRational::zero(),
            d: d.clone(),
        }
    }

    fn dr(&self) -> BigRational {
        BigRational::from_integer(self.d.clone())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixing quadratic fields");
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadNumber::new(self.x.clone(), -&self.y, self.d.clone())
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * self.dr()
    }

    pub fn trace(&self) -> BigRational {
        &self.x * BigInt::from(2)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        QuadNumber::new(&self.x + &o.x, &self.y + &o.y, self.d.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        QuadNumber::new(&self.x - &o.x, &self.y - &o.y, self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        QuadNumber::new(
            &self.x * &o.x + &self.y * &o.y * self.dr(),
            &self.x * &o.y + &self.y * &o.x,
            self.d.clone(),
        )
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o);
        let n = o.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = self.mul(&o.conj());
        Ok(QuadNumber::new(t.x / &n, t.y / &n, self.d.clone()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QuadNumber::new(&self.x * q, &self.y * q, self.d.clone())
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        QuadNumber::new(&self.x + q, self.y.clone(), self.d.clone())
    }

    /// `(Pz + P')/(Qz + Q')`.
    pub fn mobius(
        &self,
        p: &BigRational,
        p1: &BigRational,
        q: &BigRational,
        q1: &BigRational,
    ) -> Result<Self> {
        let num = self.scale(p).add_rational(p1);
        let den = self.scale(q).add_rational(q1);
        num.div(&den)
    }
}
