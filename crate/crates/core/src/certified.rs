//! Certified real enclosures with adaptive precision.
//!
//! A [`CertifiedReal`] is a closed interval `[lo, hi] · 2^-prec` with integer
//! endpoints. Every operation rounds outward, so the true value stays inside.
//! Logarithms of integers come from the `atanh` series with an explicit
//! truncation bound; no floating point is involved in any enclosure.
//!
//! Comparisons that cannot be decided at the current precision return
//! `None`; [`refine`] retries at doubled precision up to the ceiling from
//! [`precision_ceiling`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable holding the precision ceiling in bits.
pub const PRECISION_CEILING_ENV: &str = "RDL_PRECISION_CEILING";

pub const DEFAULT_PRECISION_CEILING: u32 = 1 << 14;

/// Ceiling for adaptive precision, read from `RDL_PRECISION_CEILING`.
pub fn precision_ceiling() -> u32 {
    std::env::var(PRECISION_CEILING_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &u32| v >= 64)
        .unwrap_or(DEFAULT_PRECISION_CEILING)
}

/// Runs `attempt` at `start`, `2·start`, ... bits until it returns `Some`.
pub fn refine<T>(start: u32, ceiling: u32, what: &str, mut attempt: impl FnMut(u32) -> Option<T>) -> Result<T> {
    let mut prec = start.max(8);
    loop {
        if let Some(v) = attempt(prec) {
            return Ok(v);
        }
        if prec >= ceiling {
            return Err(Error::PrecisionExhausted {
                bits: prec,
                what: what.to_string(),
            });
        }
        prec = prec.saturating_mul(2).min(ceiling);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl CertifiedReal {
    pub fn from_bounds(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        CertifiedReal { lo, hi, prec }
    }

    /// Tightest enclosure of `q` on the `2^-prec` grid.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let scaled_num = q.numer() << prec as usize;
        let lo = floor_div(&scaled_num, q.denom());
        let hi = ceil_div(&scaled_num, q.denom());
        CertifiedReal { lo, hi, prec }
    }

    pub fn from_integer(k: &BigInt, prec: u32) -> Self {
        let v = k << prec as usize;
        CertifiedReal {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec as usize)
    }

    /// Numerators of the endpoints over `2^prec`.
    pub fn raw_bounds(&self) -> (&BigInt, &BigInt) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec as usize)
    }

    /// `log2(width)`, or `-inf` for a point interval.
    pub fn width_log2(&self) -> f64 {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            return f64::NEG_INFINITY;
        }
        big_log2(&w) - self.prec as f64
    }

    /// Width as an `f64` (rounded).
    pub fn width_f64(&self) -> f64 {
        self.width_log2().exp2()
    }

    pub fn mid_f64(&self) -> f64 {
        let sum = &self.lo + &self.hi;
        big_to_f64_scaled(&sum, self.prec as i64 + 1)
    }

    /// Midpoint rounded down onto the `2^-bits` grid, as a numerator.
    pub fn mid_on_grid(&self, bits: u32) -> BigInt {
        let sum = &self.lo + &self.hi;
        let shift = self.prec as i64 + 1 - bits as i64;
        if shift >= 0 {
            floor_div(&sum, &(BigInt::one() << shift as usize))
        } else {
            sum << (-shift) as usize
        }
    }

    /// Re-expresses the interval on a coarser or finer grid, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        if prec >= self.prec {
            let s = (prec - self.prec) as usize;
            CertifiedReal {
                lo: &self.lo << s,
                hi: &self.hi << s,
                prec,
            }
        } else {
            let d = BigInt::one() << (self.prec - prec) as usize;
            CertifiedReal {
                lo: floor_div(&self.lo, &d),
                hi: ceil_div(&self.hi, &d),
                prec,
            }
        }
    }

    pub fn add(&self, other: &CertifiedReal) -> CertifiedReal {
        let prec = self.prec.max(other.prec);
        let a = self.with_prec(prec);
        let b = other.with_prec(prec);
        CertifiedReal {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            prec,
        }
    }

    pub fn add_rational(&self, q: &BigRational) -> CertifiedReal {
        self.add(&CertifiedReal::from_rational(q, self.prec))
    }

    pub fn mul_int(&self, k: &BigInt) -> CertifiedReal {
        let (lo, hi) = if k.is_negative() {
            (&self.hi * k, &self.lo * k)
        } else {
            (&self.lo * k, &self.hi * k)
        };
        CertifiedReal {
            lo,
            hi,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> CertifiedReal {
        CertifiedReal {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    /// Quotient of two positive enclosures at the precision of `self`.
    pub fn div_positive(&self, other: &CertifiedReal) -> CertifiedReal {
        assert!(self.lo.sign() != Sign::Minus, "dividend must be nonnegative");
        assert!(other.lo.sign() == Sign::Plus, "divisor must be positive");
        let prec = self.prec.max(other.prec);
        let a = self.with_prec(prec);
        let b = other.with_prec(prec);
        let lo = floor_div(&(a.lo << prec as usize), &b.hi);
        let hi = ceil_div(&(a.hi << prec as usize), &b.lo);
        CertifiedReal { lo, hi, prec }
    }

    /// `floor(x)` when both endpoints agree on it.
    pub fn floor(&self) -> Option<BigInt> {
        let f_lo = self.lo.clone() >> self.prec as usize;
        let f_hi = self.hi.clone() >> self.prec as usize;
        (f_lo == f_hi).then_some(f_lo)
    }

    /// `floor(m·x)` when decidable.
    pub fn floor_scaled(&self, m: u64) -> Option<BigInt> {
        self.mul_int(&BigInt::from(m)).floor()
    }

    /// `{x}` when the integer part is decidable.
    pub fn fract(&self) -> Option<CertifiedReal> {
        let f = self.floor()?;
        let shift = f << self.prec as usize;
        Some(CertifiedReal {
            lo: &self.lo - &shift,
            hi: &self.hi - &shift,
            prec: self.prec,
        })
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.lo() <= *q && *q <= self.hi()
    }

    /// Order relative to `q`, or `None` when `q` lies inside the enclosure
    /// and the enclosure is not a point.
    pub fn cmp_rational(&self, q: &BigRational) -> Option<Ordering> {
        let lo = self.lo();
        let hi = self.hi();
        if hi < *q {
            Some(Ordering::Less)
        } else if lo > *q {
            Some(Ordering::Greater)
        } else if lo == hi {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.1e}", format_sig(self.mid_f64(), 15), self.width_f64() / 2.0)
    }
}

/// Formats with `sig` significant digits in plain or scientific notation.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{:.*e}", sig - 1, x)
    }
}

fn big_log2(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.abs().to_f64().unwrap().log2();
    }
    let shift = bits - 60;
    let top: BigInt = v.abs() >> shift as usize;
    top.to_f64().unwrap().log2() + shift as f64
}

fn big_to_f64_scaled(v: &BigInt, shift: i64) -> f64 {
    // v / 2^shift without overflowing the f64 conversion of v.
    let bits = v.bits() as i64;
    if bits <= 1000 {
        return v.to_f64().unwrap() * (-shift as f64).exp2();
    }
    let drop = bits - 64;
    let top: BigInt = v >> drop as usize;
    top.to_f64().unwrap() * ((drop - shift) as f64).exp2()
}

/// `atanh(num/den) · 2^w` for `0 <= num/den <= 1/3`, as `(s, err)` with the
/// true value in `[s, s + err]`.
fn atanh_fixed(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, u64) {
    let mut power = floor_div(&(num << w as usize), den);
    let num2 = num * num;
    let den2 = den * den;
    let mut sum = power.clone();
    let mut terms = 1u64;
    let mut j = 1u64;
    loop {
        power = floor_div(&(power * &num2), &den2);
        if power.is_zero() {
            break;
        }
        sum += &power / BigInt::from(2 * j + 1);
        terms += 1;
        j += 1;
    }
    // Each truncated term loses less than 3 ulps; the tail after the first
    // vanishing power is below 2 ulps.
    (sum, 3 * terms + 2)
}

/// Enclosure of `ln n` for `n >= 1` at `prec` fractional bits.
pub fn ln_natural(n: &BigUint, prec: u32) -> CertifiedReal {
    assert!(!n.is_zero(), "ln of zero");
    if n.is_one() {
        return CertifiedReal::from_integer(&BigInt::zero(), prec);
    }
    let n = BigInt::from(n.clone());
    let mut k = n.bits() - 1;
    // Pick k so that m = n / 2^k lies in [3/4, 3/2].
    if &n * 2 > BigInt::from(3) << k as usize {
        k += 1;
    }
    let guard = 24 + 64 - k.leading_zeros() + (32 - prec.leading_zeros());
    let w = prec + guard;
    let (ln2_half, ln2_err) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    let pow2 = BigInt::one() << k as usize;
    let y_num = &n - &pow2;
    let y_den = &n + &pow2;
    let (t_lo, t_hi) = if y_num.is_negative() {
        let (s, e) = atanh_fixed(&-y_num, &y_den, w);
        (-(s.clone() + e), -s)
    } else {
        let (s, e) = atanh_fixed(&y_num, &y_den, w);
        (s.clone(), s + e)
    };
    let kk = BigInt::from(k);
    let lo = (&kk * &ln2_half + t_lo) * 2;
    let hi = (&kk * (ln2_half + ln2_err) + t_hi) * 2;
    CertifiedReal::from_bounds(lo, hi, w).with_prec(prec)
}

/// A rotation angle: either an exact rational or `ln p / ln q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Angle {
    Rational { num: i64, den: i64 },
    LogRatio { num: u64, den: u64 },
}

impl Angle {
    /// `ln p / ln q`, reduced to an exact rational when `p` and `q` are
    /// powers of a common integer.
    pub fn log_ratio(p: u64, q: u64) -> Result<Angle> {
        if p < 2 || q < 2 {
            return Err(Error::ConfigInvalid(format!("log ratio needs p, q >= 2, got {p}, {q}")));
        }
        let (rp, ep) = perfect_power(p);
        let (rq, eq) = perfect_power(q);
        if rp == rq {
            let g = num_integer::gcd(ep, eq);
            return Ok(Angle::Rational {
                num: (ep / g) as i64,
                den: (eq / g) as i64,
            });
        }
        Ok(Angle::LogRatio { num: p, den: q })
    }

    pub fn rational(num: i64, den: i64) -> Angle {
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        Angle::Rational {
            num: q.numer().to_i64().unwrap(),
            den: q.denom().to_i64().unwrap(),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match *self {
            Angle::Rational { num, den } => Some(BigRational::new(num.into(), den.into())),
            Angle::LogRatio { .. } => None,
        }
    }

    /// Enclosure with width at most a few units of `2^-prec`.
    pub fn enclose(&self, prec: u32) -> CertifiedReal {
        match *self {
            Angle::Rational { num, den } => {
                CertifiedReal::from_rational(&BigRational::new(num.into(), den.into()), prec)
            }
            Angle::LogRatio { num, den } => {
                let guard = 8 + 2 * (64 - num.max(den).leading_zeros());
                let a = ln_natural(&BigUint::from(num), prec + guard);
                let b = ln_natural(&BigUint::from(den), prec + guard);
                a.div_positive(&b).with_prec(prec)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Angle::Rational { num, den } => num as f64 / den as f64,
            Angle::LogRatio { num, den } => (num as f64).ln() / (den as f64).ln(),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational { num, den } => write!(f, "{num}/{den}"),
            Angle::LogRatio { num, den } => write!(f, "log{num}/log{den}"),
        }
    }
}

/// `(r, e)` with `n = r^e` and `e` maximal.
pub fn perfect_power(n: u64) -> (u64, u32) {
    let mut best = (n, 1);
    for e in 2..64u32 {
        if (1u64 << e.min(63)) > n {
            break;
        }
        let guess = (n as f64).powf(1.0 / e as f64).round() as u64;
        for r in guess.saturating_sub(1)..=guess + 1 {
            if r >= 2 && r.checked_pow(e) == Some(n) {
                best = (r, e);
            }
        }
    }
    best
}
