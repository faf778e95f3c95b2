use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{inverse_mod_prime_power, is_perfect_square, split_p, OddPrime, Valuation};
use crate::error::{Error, Result};

/// Square root of `a` modulo `p`, the smaller of the two in `[1, p−1]`.
///
/// Returns `Some(0)` when `p | a` and `None` for a non-residue.
pub fn sqrt_mod_p(a: &BigInt, p: &OddPrime) -> Option<BigInt> {
    let pb = p.as_bigint();
    let a = a.mod_floor(pb);
    if a.is_zero() {
        return Some(a);
    }
    let half = (pb - 1u32) >> 1usize;
    if !a.modpow(&half, pb).is_one() {
        return None;
    }
    // Tonelli–Shanks with the smallest non-residue.
    let q_minus_1 = pb - 1u32;
    let s = q_minus_1.trailing_zeros().unwrap_or(0);
    let q = &q_minus_1 >> s;
    let mut z = BigInt::from(2);
    while z.modpow(&half, pb).is_one() {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, pb);
    let mut t = a.modpow(&q, pb);
    let mut r = a.modpow(&((&q + 1u32) >> 1usize), pb);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % pb;
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = (&b * &b) % pb;
        }
        m = i;
        c = (&b * &b) % pb;
        t = (t * &c) % pb;
        r = (r * &b) % pb;
    }
    let other = pb - &r;
    Some(r.min(other))
}

/// A square root of a p-adic unit known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselRoot {
    p: OddPrime,
    radicand: BigInt,
    branch: u64,
    digits: BigInt,
    precision: u64,
}

impl HenselRoot {
    /// The root of `radicand` congruent to `branch` modulo `p`, at precision 1.
    pub fn new(radicand: &BigInt, branch: u64, p: &OddPrime) -> Result<Self> {
        let pb = p.as_bigint();
        let unit = radicand.mod_floor(pb);
        let br = BigInt::from(branch);
        if unit.is_zero() {
            return Err(Error::Domain(format!("{radicand} is not a {p}-adic unit")));
        }
        if branch == 0
            || branch >= p.get()
            || (&br * &br - radicand).mod_floor(pb) != BigInt::zero()
        {
            return Err(Error::InvalidBranch {
                branch,
                radicand: radicand.clone(),
                p: p.get(),
            });
        }
        Ok(HenselRoot {
            p: p.clone(),
            radicand: radicand.clone(),
            branch,
            digits: br,
            precision: 1,
        })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    /// The root reduced into `[0, p^precision)`.
    pub fn digits(&self) -> &BigInt {
        &self.digits
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn prime(&self) -> &OddPrime {
        &self.p
    }
}

/// Lifts `root` to precision `n` by Newton iteration; a no-op when the root
/// is already at least that precise.
pub fn hensel_lift(root: &HenselRoot, n: u64) -> HenselRoot {
    if n <= root.precision {
        return root.clone();
    }
    let p = &root.p;
    let mut prec = root.precision;
    let mut x = root.digits.clone();
    // y ≈ 1/(2x), kept at the same precision as x.
    let mut y =
        inverse_mod_prime_power(&(&x << 1usize), p, prec).expect("a root of a unit is a unit");
    while prec < n {
        prec = (prec * 2).min(n);
        let m = p.pow(prec);
        let d = root.radicand.mod_floor(&m);
        x = (&x - (&x * &x - d) * &y).mod_floor(&m);
        let two_x = &x << 1usize;
        y = (&y * (BigInt::from(2) - two_x * &y)).mod_floor(&m);
    }
    HenselRoot {
        p: p.clone(),
        radicand: root.radicand.clone(),
        branch: root.branch,
        digits: x,
        precision: prec,
    }
}

/// `m = p^{2s}·unit` with `unit` a nonzero square residue modulo `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicSquare {
    pub unit: BigInt,
    pub half_valuation: u64,
}

/// Whether `m` is a square in `Q_p`, with its normalised form when it is.
pub fn padic_square_exists(m: &BigInt, p: &OddPrime) -> Option<PadicSquare> {
    if m.is_zero() {
        return None;
    }
    let (v, unit) = split_p(m, p);
    if v % 2 == 1 {
        return None;
    }
    sqrt_mod_p(&unit, p)?;
    Some(PadicSquare {
        unit,
        half_valuation: v / 2,
    })
}

/// Largest precision a root will be lifted to unless configured otherwise.
pub const DEFAULT_PRECISION_CAP: u64 = 1 << 24;

/// A fixed square root `δ` of a nonsquare integer `Δ` in `Q_p`.
///
/// Writing `Δ = p^{2s}Δ₀` with `p ∤ Δ₀`, the root is `δ = p^s δ₀` where `δ₀`
/// is the root of `Δ₀` congruent to `branch` modulo `p`. Digits of `δ₀` are
/// cached and the cache grows by doubling, under a read-write lock so that
/// one root can be shared between threads.
pub struct PadicSqrt {
    p: OddPrime,
    radicand: BigInt,
    unit: BigInt,
    s: u64,
    branch: u64,
    cap: u64,
    cache: RwLock<HenselRoot>,
}

impl PadicSqrt {
    pub fn new(radicand: &BigInt, branch: u64, p: &OddPrime) -> Result<Self> {
        Self::with_cap(radicand, branch, p, DEFAULT_PRECISION_CAP)
    }

    pub fn with_cap(radicand: &BigInt, branch: u64, p: &OddPrime, cap: u64) -> Result<Self> {
        if is_perfect_square(radicand) {
            return Err(Error::PerfectSquare(radicand.clone()));
        }
        let sq = padic_square_exists(radicand, p).ok_or_else(|| Error::NoPadicSqrt {
            radicand: radicand.clone(),
            p: p.get(),
        })?;
        let root = HenselRoot::new(&sq.unit, branch, p).map_err(|_| Error::InvalidBranch {
            branch,
            radicand: radicand.clone(),
            p: p.get(),
        })?;
        Ok(PadicSqrt {
            p: p.clone(),
            radicand: radicand.clone(),
            unit: sq.unit,
            s: sq.half_valuation,
            branch,
            cap,
            cache: RwLock::new(root),
        })
    }

    /// The root of `radicand` whose unit part is the smaller residue mod `p`.
    pub fn principal(radicand: &BigInt, p: &OddPrime) -> Result<Self> {
        let sq = padic_square_exists(radicand, p).ok_or_else(|| Error::NoPadicSqrt {
            radicand: radicand.clone(),
            p: p.get(),
        })?;
        let r = sqrt_mod_p(&sq.unit, p).expect("checked above");
        Self::new(radicand, u64::try_from(&r).expect("residue below p"), p)
    }

    /// The other root, `−δ`.
    pub fn negated(&self) -> Self {
        let branch = self.p.get() - self.branch;
        let root = self.cache.read().expect("poisoned root cache").clone();
        let m = self.p.pow(root.precision);
        let flipped = HenselRoot {
            branch,
            digits: (-root.digits).mod_floor(&m),
            ..root
        };
        PadicSqrt {
            p: self.p.clone(),
            radicand: self.radicand.clone(),
            unit: self.unit.clone(),
            s: self.s,
            branch,
            cap: self.cap,
            cache: RwLock::new(flipped),
        }
    }

    pub fn prime(&self) -> &OddPrime {
        &self.p
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    /// `Δ₀`, the prime-to-p part of the radicand.
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// `s` with `Δ = p^{2s}Δ₀`; also `v_p(δ)`.
    pub fn half_valuation(&self) -> u64 {
        self.s
    }

    pub fn branch(&self) -> u64 {
        self.branch
    }

    pub fn precision_cap(&self) -> u64 {
        self.cap
    }

    /// Current cached precision of `δ₀`.
    pub fn cached_precision(&self) -> u64 {
        self.cache.read().expect("poisoned root cache").precision
    }

    /// `δ₀ mod p^n` in `[0, p^n)`.
    pub fn unit_digits(&self, n: u64) -> Result<BigInt> {
        if n == 0 {
            return Ok(BigInt::zero());
        }
        {
            let root = self.cache.read().expect("poisoned root cache");
            if root.precision >= n {
                return Ok(root.digits.mod_floor(&self.p.pow(n)));
            }
        }
        if n > self.cap {
            return Err(Error::ResourceLimit(format!(
                "square root precision {n} exceeds cap {}",
                self.cap
            )));
        }
        let mut root = self.cache.write().expect("poisoned root cache");
        if root.precision < n {
            let target = (root.precision * 2).max(n).min(self.cap);
            *root = hensel_lift(&root, target);
        }
        Ok(root.digits.mod_floor(&self.p.pow(n)))
    }

    /// `δ mod p^n` in `[0, p^n)`.
    pub fn digits(&self, n: u64) -> Result<BigInt> {
        if n <= self.s {
            return Ok(BigInt::zero());
        }
        let unit = self.unit_digits(n - self.s)?;
        Ok(unit * self.p.pow(self.s))
    }

    /// `v_p(y + zδ)` for integers `y, z` not both zero. Exact, since `δ` is
    /// irrational and so `y + zδ ≠ 0`.
    pub fn valuation_of(&self, y: &BigInt, z: &BigInt) -> Result<Valuation> {
        if z.is_zero() {
            return Ok(super::vp_int(y, &self.p));
        }
        let mut n = 8u64;
        loop {
            let m = self.p.pow(n);
            let r = (y + z * self.digits(n)?).mod_floor(&m);
            if !r.is_zero() {
                return Ok(Valuation::Finite(split_p(&r, &self.p).0 as i64));
            }
            n *= 2;
        }
    }
}

impl Clone for PadicSqrt {
    fn clone(&self) -> Self {
        PadicSqrt {
            p: self.p.clone(),
            radicand: self.radicand.clone(),
            unit: self.unit.clone(),
            s: self.s,
            branch: self.branch,
            cap: self.cap,
            cache: RwLock::new(self.cache.read().expect("poisoned root cache").clone()),
        }
    }
}

impl PartialEq for PadicSqrt {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.radicand == other.radicand && self.branch == other.branch
    }
}

impl Eq for PadicSqrt {}

impl fmt::Debug for PadicSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PadicSqrt")
            .field("p", &self.p.get())
            .field("radicand", &self.radicand)
            .field("branch", &self.branch)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> OddPrime {
        OddPrime::new(v).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn tonelli_shanks_matches_enumeration() {
        for q in [3u64, 5, 7, 13, 17, 41, 97, 353, 7919] {
            let pr = p(q);
            for a in 1..q.min(400) {
                let brute = (1..q).find(|r| r * r % q == a);
                assert_eq!(
                    sqrt_mod_p(&big(a as i64), &pr),
                    brute.map(BigInt::from),
                    "a={a} p={q}"
                );
            }
        }
        assert_eq!(sqrt_mod_p(&big(89), &p(5)), Some(big(2)));
        assert_eq!(sqrt_mod_p(&big(37), &p(3)), Some(big(1)));
        assert_eq!(sqrt_mod_p(&big(2), &p(5)), None);
    }

    #[test]
    fn lifting_examples() {
        let r = HenselRoot::new(&big(89), 3, &p(5)).unwrap();
        assert_eq!(hensel_lift(&r, 2).digits(), &big(8));
        let r = HenselRoot::new(&big(37), 1, &p(3)).unwrap();
        assert_eq!(hensel_lift(&r, 2).digits(), &big(1));
        let lifted = hensel_lift(&r, 5);
        assert_eq!(hensel_lift(&lifted, 5), lifted);
        assert_eq!(hensel_lift(&lifted, 3), lifted);
        assert!(HenselRoot::new(&big(89), 1, &p(5)).is_err());
    }

    #[test]
    fn lifted_roots_square_correctly() {
        let pr = p(7);
        let r = HenselRoot::new(&big(2), 3, &pr).unwrap();
        for n in [1u64, 2, 3, 7, 40, 301] {
            let l = hensel_lift(&r, n);
            let m = pr.pow(n);
            assert_eq!(
                (l.digits() * l.digits() - big(2)).mod_floor(&m),
                BigInt::zero()
            );
            assert_eq!(l.digits().mod_floor(&big(7)), big(3));
        }
    }

    #[test]
    fn square_existence() {
        assert_eq!(
            padic_square_exists(&big(-434), &p(5)),
            Some(PadicSquare {
                unit: big(-434),
                half_valuation: 0
            })
        );
        assert_eq!(padic_square_exists(&big(10), &p(5)), None);
        assert!(padic_square_exists(&big(-72041 * 484), &p(3)).is_some());
        assert_eq!(
            padic_square_exists(&big(-80 * 9), &p(3)),
            Some(PadicSquare {
                unit: big(-80),
                half_valuation: 1
            })
        );
        assert_eq!(padic_square_exists(&big(2), &p(5)), None);
    }

    #[test]
    fn padic_sqrt_digits_and_valuations() {
        let pr = p(5);
        let d = PadicSqrt::new(&big(89 * 25), 3, &pr).unwrap();
        assert_eq!(d.half_valuation(), 1);
        assert_eq!(d.digits(1).unwrap(), big(0));
        assert_eq!(d.digits(3).unwrap(), big(8 * 5));
        // 8 + δ₀ has valuation 0, −8 + δ₀ ≡ 0 mod 25
        let e = PadicSqrt::new(&big(89), 3, &pr).unwrap();
        assert_eq!(
            e.valuation_of(&big(1), &big(1)).unwrap(),
            Valuation::Finite(0)
        );
        let v = e.valuation_of(&big(-8), &big(1)).unwrap().finite().unwrap();
        assert!(v >= 2);
        let m = pr.pow(v as u64 + 1);
        let r = (e.digits(v as u64 + 1).unwrap() - big(8)).mod_floor(&m);
        assert_eq!(split_p(&r, &pr).0 as i64, v);
        assert!(PadicSqrt::new(&big(16), 1, &pr).is_err());
        assert!(PadicSqrt::new(&big(10), 1, &pr).is_err());
        let n = e.negated();
        assert_eq!(n.branch(), 2);
        assert_eq!(
            (n.digits(6).unwrap() + e.digits(6).unwrap()).mod_floor(&pr.pow(6)),
            BigInt::zero()
        );
    }

    #[test]
    fn precision_cap_is_enforced() {
        let d = PadicSqrt::with_cap(&big(2), 3, &p(7), 10).unwrap();
        assert!(d.unit_digits(10).is_ok());
        assert!(matches!(d.unit_digits(11), Err(Error::ResourceLimit(_))));
    }
}
