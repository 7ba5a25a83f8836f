//! Integers and fractions whose base-`p` expansions use a restricted digit set.
//!
//! A [`DigitSetSpec`] fixes a base and an allowed digit set `D` (by default
//! `{0, 1}`). It defines two sets at once:
//!
//! * the integer set `B`: nonnegative integers whose base-`p` digits all lie
//!   in `D` (zero is a member only when `include_zero` is set);
//! * the fractional set `A ⊂ [0, 1]`: reals `Σ dᵢ p⁻ⁱ` with every `dᵢ ∈ D`,
//!   a closed set invariant under `u ↦ {p·u}`.
//!
//! Members of `B` are in order-preserving bijection with numerals over an
//! alphabet of size `|D|` (ordinary base-`|D|` numerals when `0 ∈ D`,
//! bijective numerals otherwise), which gives exact rank, unrank, counting
//! and successor queries without enumeration.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nat::{fast_path, Nat};

/// Largest supported base; keeps digit lookup tables small.
pub const MAX_BASE: u32 = 1 << 16;

const NOT_ALLOWED: u32 = u32::MAX;

/// A base together with its allowed digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDigitSetSpec", into = "RawDigitSetSpec")]
pub struct DigitSetSpec {
    base: u32,
    digits: Vec<u32>,
    include_zero: bool,
    /// `index[d]` is the position of `d` in `digits`, or `NOT_ALLOWED`.
    index: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawDigitSetSpec {
    base: u32,
    digits: Vec<u32>,
    include_zero: bool,
}

impl TryFrom<RawDigitSetSpec> for DigitSetSpec {
    type Error = Error;

    fn try_from(raw: RawDigitSetSpec) -> Result<Self> {
        DigitSetSpec::new(raw.base, raw.digits, raw.include_zero)
    }
}

impl From<DigitSetSpec> for RawDigitSetSpec {
    fn from(spec: DigitSetSpec) -> Self {
        RawDigitSetSpec {
            base: spec.base,
            digits: spec.digits,
            include_zero: spec.include_zero,
        }
    }
}

impl DigitSetSpec {
    /// Builds a digit set. Digits are sorted and deduplicated.
    ///
    /// The digit set `{0}` alone is rejected: it has no positive members and
    /// its fractional set is the single point `0`.
    pub fn new(base: u32, digits: impl IntoIterator<Item = u32>, include_zero: bool) -> Result<Self> {
        if !(2..=MAX_BASE).contains(&base) {
            return Err(Error::InvalidDigitSet(format!("base {base} outside [2, {MAX_BASE}]")));
        }
        let mut digits: Vec<u32> = digits.into_iter().collect();
        digits.sort_unstable();
        digits.dedup();
        if digits.is_empty() {
            return Err(Error::InvalidDigitSet("empty digit set".into()));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigitSet(format!("digit {d} not below base {base}")));
        }
        if digits == [0] {
            return Err(Error::InvalidDigitSet("digit set {0} has no positive members".into()));
        }
        let mut index = vec![NOT_ALLOWED; base as usize];
        for (i, &d) in digits.iter().enumerate() {
            index[d as usize] = i as u32;
        }
        Ok(DigitSetSpec {
            base,
            digits,
            include_zero,
            index,
        })
    }

    /// The `{0, 1}` digit set in the given base, zero excluded.
    pub fn binary(base: u32) -> Result<Self> {
        Self::new(base, [0, 1], false)
    }

    pub fn with_zero(mut self, include_zero: bool) -> Self {
        self.include_zero = include_zero;
        self
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn include_zero(&self) -> bool {
        self.include_zero
    }

    pub fn is_allowed(&self, d: u32) -> bool {
        (d as usize) < self.index.len() && self.index[d as usize] != NOT_ALLOWED
    }

    /// Number of allowed digits.
    pub fn radix(&self) -> u64 {
        self.digits.len() as u64
    }

    fn has_zero_digit(&self) -> bool {
        self.digits[0] == 0
    }

    pub fn min_digit(&self) -> u32 {
        self.digits[0]
    }

    pub fn max_digit(&self) -> u32 {
        *self.digits.last().unwrap()
    }

    /// `log|D| / log p`, the box dimension of the fractional set.
    pub fn dimension(&self) -> f64 {
        (self.digits.len() as f64).ln() / (self.base as f64).ln()
    }

    /// Smallest point of the fractional set, `dmin / (p - 1)`.
    pub fn frac_min(&self) -> BigRational {
        ratio(self.min_digit() as i64, self.base as i64 - 1)
    }

    /// Largest point of the fractional set, `dmax / (p - 1)`.
    pub fn frac_max(&self) -> BigRational {
        ratio(self.max_digit() as i64, self.base as i64 - 1)
    }

    // ---- generic kernels, shared with the solver ----

    pub(crate) fn is_member_n<N: Nat>(&self, n: &N) -> bool {
        if n.is_zero() {
            return self.include_zero;
        }
        let mut rest = n.clone();
        while !rest.is_zero() {
            let (q, r) = rest.divrem_small(self.base as u64);
            if !self.is_allowed(r as u32) {
                return false;
            }
            rest = q;
        }
        true
    }

    /// Number of positive members in `[1, limit]`.
    pub(crate) fn count_upto_n<N: Nat>(&self, limit: &N) -> N {
        if limit.is_zero() {
            return N::zero();
        }
        let p = self.base as u64;
        let m = self.radix();
        let digits = digits_le(limit, p);
        let len = digits.len();
        let mut powers = Vec::with_capacity(len);
        powers.push(N::from_u64(1));
        for i in 1..len {
            let next = powers[i - 1].mul_small(m);
            powers.push(next);
        }
        // Leading digit must be nonzero, so with 0 in D there are
        // (m-1)·m^(l-1) members of length l, otherwise m^l.
        let leading_choices = if self.has_zero_digit() { m - 1 } else { m };
        let mut total = N::zero();
        for l in 1..len {
            total = total.plus(&powers[l - 1].mul_small(leading_choices));
        }
        // Members with exactly `len` digits, walking the tight prefix.
        for pos in (0..len).rev() {
            let digit = digits[pos];
            let leading = pos == len - 1;
            let below = self
                .digits
                .iter()
                .filter(|&&d| d < digit && !(leading && d == 0))
                .count() as u64;
            total = total.plus(&powers[pos].mul_small(below));
            if !self.is_allowed(digit) {
                return total;
            }
        }
        total.plus(&N::from_u64(1))
    }

    /// Base-`|D|` digit indices (least significant first) of the `k`-th
    /// smallest member.
    fn unrank_indices<N: Nat>(&self, k: &N) -> Option<Vec<u32>> {
        let one = N::from_u64(1);
        let j = if self.include_zero {
            if k.is_zero() {
                return None;
            }
            k.clone()
        } else {
            k.plus(&one)
        };
        let m = self.radix();
        let mut out = Vec::new();
        let mut rest = j;
        if self.has_zero_digit() {
            while !rest.is_zero() {
                let (q, r) = rest.divrem_small(m);
                out.push(r as u32);
                rest = q;
            }
        } else if m == 1 {
            // unary numerals: the j-th member repeats the single digit j times
            while !rest.is_zero() {
                out.push(0);
                rest = rest.minus(&one);
            }
        } else {
            while !rest.is_zero() {
                let (q, r) = rest.divrem_small(m);
                let (digit, q) = if r == 0 { (m, q.minus(&one)) } else { (r, q) };
                out.push(digit as u32 - 1);
                rest = q;
            }
        }
        Some(out)
    }

    fn value_of_indices<N: Nat>(&self, indices: &[u32]) -> N {
        let p = self.base as u64;
        indices.iter().rev().fold(N::zero(), |acc, &i| {
            acc.mul_add_small(p, self.digits[i as usize] as u64)
        })
    }

    pub(crate) fn unrank_n<N: Nat>(&self, k: &N) -> N {
        match self.unrank_indices(k) {
            None => N::zero(),
            Some(idx) => self.value_of_indices(&idx),
        }
    }

    /// Index of the smallest member `>= n`.
    pub(crate) fn members_below_n<N: Nat>(&self, n: &N) -> N {
        if n.is_zero() {
            return N::zero();
        }
        let below = self.count_upto_n(&n.minus(&N::from_u64(1)));
        if self.include_zero {
            below.plus(&N::from_u64(1))
        } else {
            below
        }
    }

    pub(crate) fn successor_n<N: Nat>(&self, n: &N) -> N {
        self.unrank_n(&self.members_below_n(n))
    }
}

impl fmt::Display for DigitSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        write!(f, "base {} digits {{{}}}", self.base, ds.join(","))?;
        if self.include_zero {
            write!(f, " with 0")?;
        }
        Ok(())
    }
}

pub(crate) fn digits_le<N: Nat>(n: &N, base: u64) -> Vec<u32> {
    let mut out = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.divrem_small(base);
        out.push(r as u32);
        rest = q;
    }
    out
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An arbitrary-precision natural number with a memoized per-base digit view.
pub struct BigNatural {
    value: BigUint,
    digit_cache: Mutex<Vec<(u32, Arc<[u32]>)>>,
}

impl BigNatural {
    pub fn new(value: BigUint) -> Self {
        BigNatural {
            value,
            digit_cache: Mutex::new(Vec::new()),
        }
    }

    pub fn zero() -> Self {
        Self::new(BigUint::zero())
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_inner(self) -> BigUint {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// Base-`base` digits, least significant first. Empty for zero.
    pub fn digits(&self, base: u32) -> Arc<[u32]> {
        let mut cache = self.digit_cache.lock();
        if let Some((_, d)) = cache.iter().find(|(b, _)| *b == base) {
            return d.clone();
        }
        let d: Arc<[u32]> = match fast_path(&self.value, base as u64) {
            Some(v) => digits_le(&v, base as u64).into(),
            None => digits_le(&self.value, base as u64).into(),
        };
        cache.push((base, d.clone()));
        d
    }

    /// Reassembles a value from little-endian digits.
    pub fn from_digits(digits: &[u32], base: u32) -> Self {
        let v = digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * base + d);
        Self::new(v)
    }
}

impl Clone for BigNatural {
    fn clone(&self) -> Self {
        BigNatural {
            value: self.value.clone(),
            digit_cache: Mutex::new(self.digit_cache.lock().clone()),
        }
    }
}

impl PartialEq for BigNatural {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for BigNatural {}

impl PartialOrd for BigNatural {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigNatural {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

impl Hash for BigNatural {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Debug for BigNatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for BigNatural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for BigNatural {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.value.to_string())
    }
}

impl From<u64> for BigNatural {
    fn from(v: u64) -> Self {
        Self::new(BigUint::from(v))
    }
}

impl From<u128> for BigNatural {
    fn from(v: u128) -> Self {
        Self::new(BigUint::from(v))
    }
}

impl From<BigUint> for BigNatural {
    fn from(v: BigUint) -> Self {
        Self::new(v)
    }
}

impl FromStr for BigNatural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(Self::new)
            .map_err(|e| Error::ConfigInvalid(format!("not a natural number: {s:?} ({e})")))
    }
}

/// Whether every base-`p` digit of `n` is allowed; `0` is a member iff
/// `include_zero` is set.
pub fn is_member(n: &BigNatural, spec: &DigitSetSpec) -> bool {
    if n.is_zero() {
        return spec.include_zero;
    }
    if let Some(v) = fast_path(n.value(), spec.base as u64) {
        return spec.is_member_n(&v);
    }
    n.digits(spec.base).iter().all(|&d| spec.is_allowed(d))
}

/// The `k`-th smallest member (0-indexed).
pub fn unrank(k: &BigNatural, spec: &DigitSetSpec) -> BigNatural {
    let base_bits = 32 - spec.base.leading_zeros() as u64;
    let radix_bits = 64 - spec.radix().leading_zeros() as u64;
    // The result has about bits(k) / log2|D| base-p digits.
    let est_len = k.value().bits() / radix_bits.saturating_sub(1).max(1) + 2;
    if spec.radix() > 1 && est_len * base_bits + 2 * base_bits + 2 <= 126 {
        if let Some(kk) = k.value().to_u128() {
            return BigNatural::from(spec.unrank_n(&kk));
        }
    }
    BigNatural::new(spec.unrank_n(k.value()))
}

/// Inverse of [`unrank`].
pub fn rank(n: &BigNatural, spec: &DigitSetSpec) -> Result<BigNatural> {
    if !is_member(n, spec) {
        return Err(Error::NotAMember(format!("{n} ({spec})")));
    }
    if n.is_zero() {
        return Ok(BigNatural::zero());
    }
    let m = spec.radix();
    let offset = if spec.has_zero_digit() { 0 } else { 1 };
    let j = n
        .digits(spec.base)
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &d| acc * m + (spec.index[d as usize] + offset));
    Ok(BigNatural::new(if spec.include_zero { j } else { j - 1u32 }))
}

/// Exact number of positive members in `[1, limit]`; zero is never counted.
pub fn count_upto(limit: &BigNatural, spec: &DigitSetSpec) -> BigNatural {
    match fast_path(limit.value(), spec.base as u64) {
        Some(v) => BigNatural::from(spec.count_upto_n(&v)),
        None => BigNatural::new(spec.count_upto_n(limit.value())),
    }
}

/// Smallest member `>= n` of the integer set.
pub fn successor_integer(n: &BigNatural, spec: &DigitSetSpec) -> BigNatural {
    match fast_path(n.value(), spec.base as u64) {
        Some(v) => {
            let below = spec.members_below_n(&v);
            unrank(&BigNatural::from(below), spec)
        }
        None => BigNatural::new(spec.successor_n(n.value())),
    }
}

/// A point of `[0, 1]` with a finite base-`p` expansion `0.d₁d₂…d_depth`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracPoint {
    base: u32,
    digits: Vec<u32>,
}

impl FracPoint {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDigitSet(format!("base {base} below 2")));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigitSet(format!("digit {d} not below base {base}")));
        }
        Ok(FracPoint { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Digits after the radix point, most significant first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    /// Exact value `Σ dᵢ p⁻ⁱ`, with denominator dividing `p^depth`.
    pub fn value(&self) -> BigRational {
        let p = BigInt::from(self.base);
        let num = self.digits.iter().fold(BigInt::zero(), |acc, &d| acc * &p + d);
        BigRational::new(num, num_traits::pow(p, self.digits.len()))
    }

    /// `{p·u}`: drops the leading digit.
    pub fn shift(&self) -> FracPoint {
        FracPoint {
            base: self.base,
            digits: self.digits.iter().skip(1).copied().collect(),
        }
    }

    /// Whether the point, read as `0.d₁…d_depth000…`, lies in the fractional
    /// set of `spec`. Trailing zeros must themselves be allowed.
    pub fn in_set(&self, spec: &DigitSetSpec) -> bool {
        self.base == spec.base && self.digits.iter().all(|&d| spec.is_allowed(d)) && spec.is_allowed(0)
    }
}

/// An eventually periodic expansion `0.(preperiod)(period)(period)…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracExpansion {
    pub base: u32,
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

impl FracExpansion {
    pub fn value(&self) -> BigRational {
        let p = BigInt::from(self.base);
        let fold = |ds: &[u32]| ds.iter().fold(BigInt::zero(), |acc, &d| acc * &p + d);
        let pre = fold(&self.preperiod);
        let per = fold(&self.period);
        let pre_scale = num_traits::pow(p.clone(), self.preperiod.len());
        let per_scale: BigInt = num_traits::pow(p, self.period.len()) - 1;
        if per_scale.is_zero() {
            return BigRational::new(pre, pre_scale);
        }
        (BigRational::from_integer(pre) + BigRational::new(per, per_scale)) / BigRational::from_integer(pre_scale)
    }
}

impl fmt::Display for FracExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ds: &[u32]| {
            ds.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(if self.base > 10 { "," } else { "" })
        };
        write!(f, "0.{}({})_{}", join(&self.preperiod), join(&self.period), self.base)
    }
}

/// Smallest point `>= x` of the fractional set, or `None` when `x` exceeds
/// its maximum.
///
/// Digits are chosen greedily: at each step the smallest digit that still
/// leaves a reachable tail. The residual target is a rational with fixed
/// denominator, so the digit sequence either closes onto `dmin^∞` or
/// revisits a residual and becomes periodic.
pub fn successor_fractional(x: &BigRational, spec: &DigitSetSpec) -> Option<FracExpansion> {
    let p = spec.base as i64;
    let dmin = spec.min_digit();
    let dmax = spec.max_digit() as i64;
    let tail_min = FracExpansion {
        base: spec.base,
        preperiod: Vec::new(),
        period: vec![dmin],
    };
    // x = num / den with den > 0; residual targets share the denominator.
    let den = x.denom().clone();
    let mut num = x.numer().clone();
    // t <= dmin/(p-1)  <=>  num * (p-1) <= dmin * den
    let at_most_min = |num: &BigInt| num * (p - 1) <= &den * dmin;
    let above_max = |num: &BigInt| num * (p - 1) > &den * dmax;
    if at_most_min(&num) {
        return Some(tail_min);
    }
    if above_max(&num) {
        return None;
    }
    let mut digits = Vec::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&num) {
            let period = digits.split_off(start);
            return Some(FracExpansion {
                base: spec.base,
                preperiod: digits,
                period,
            });
        }
        seen.insert(num.clone(), digits.len());
        let scaled = &num * p;
        let d = *spec
            .digits()
            .iter()
            .find(|&&d| !above_max(&(&scaled - &den * d)))
            .expect("residual within [min, max] always has a feasible digit");
        digits.push(d);
        num = scaled - &den * d;
        if at_most_min(&num) {
            return Some(FracExpansion {
                base: spec.base,
                preperiod: digits,
                period: vec![dmin],
            });
        }
    }
}

/// Which of the two sets a successor query targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuccessorMode {
    Integer,
    Fractional,
}

/// Result of [`successor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Successor {
    Integer(BigNatural),
    Fractional(FracExpansion),
}

impl Successor {
    pub fn value(&self) -> BigRational {
        match self {
            Successor::Integer(n) => BigRational::from_integer(BigInt::from(n.value().clone())),
            Successor::Fractional(e) => e.value(),
        }
    }
}

/// Smallest member `>= x` in the chosen set; `x` must be nonnegative.
pub fn successor(x: &BigRational, spec: &DigitSetSpec, mode: SuccessorMode) -> Option<Successor> {
    match mode {
        SuccessorMode::Integer => {
            let ceil = x.ceil().to_integer();
            let start = if ceil.is_negative() {
                BigUint::zero()
            } else {
                ceil.to_biguint().unwrap()
            };
            Some(Successor::Integer(successor_integer(&BigNatural::new(start), spec)))
        }
        SuccessorMode::Fractional => successor_fractional(x, spec).map(Successor::Fractional),
    }
}

/// `p^k` as a big integer.
#[cfg(test)]
pub(crate) fn pow_big(p: u64, k: usize) -> BigUint {
    num_traits::pow(BigUint::from(p), k)
}

impl DigitSetSpec {
    /// All members in `[0, limit]`, ascending.
    pub fn members_upto(&self, limit: &BigNatural) -> Vec<BigNatural> {
        let mut out = Vec::new();
        let mut k = BigUint::zero();
        loop {
            let v = unrank(&BigNatural::new(k.clone()), self);
            if &v > limit {
                return out;
            }
            out.push(v);
            k += 1u32;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: u64) -> BigNatural {
        BigNatural::from(v)
    }

    fn q(a: i64, b: i64) -> BigRational {
        ratio(a, b)
    }

    fn spec(base: u32) -> DigitSetSpec {
        DigitSetSpec::binary(base).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(!is_member(&n(2), &spec(3)));
        assert!(is_member(&n(91), &spec(3)));
        assert!(is_member(&n(5), &spec(5)));
        assert!(!is_member(&n(0), &spec(5)));
        assert!(is_member(&n(0), &spec(5).with_zero(true)));
    }

    #[test]
    fn unrank_and_rank_examples() {
        let s = spec(3).with_zero(true);
        assert_eq!(unrank(&n(1), &s), n(1));
        assert_eq!(unrank(&n(5), &s), n(10));
        assert_eq!(unrank(&n(0), &s), n(0));
        assert_eq!(rank(&n(10), &s).unwrap(), n(5));
        assert_eq!(rank(&n(0), &s).unwrap(), n(0));
        assert_eq!(rank(&n(4), &s).unwrap(), n(3));
        assert!(matches!(rank(&n(2), &s), Err(Error::NotAMember(_))));
        // zero excluded shifts the index by one
        assert_eq!(unrank(&n(0), &spec(3)), n(1));
        assert!(rank(&n(0), &spec(3)).is_err());
    }

    #[test]
    fn count_examples() {
        let s = spec(3);
        assert_eq!(count_upto(&n(26), &s), n(7));
        assert_eq!(count_upto(&n(0), &s), n(0));
        for k in 1..20u32 {
            let limit = BigNatural::new(pow_big(3, k as usize) - 1u32);
            assert_eq!(count_upto(&limit, &s), n((1 << k) - 1));
        }
    }

    #[test]
    fn integer_successor_examples() {
        assert_eq!(successor_integer(&n(5), &spec(3)), n(9));
        assert_eq!(successor_integer(&n(4), &spec(3)), n(4));
        assert_eq!(successor_integer(&n(0), &spec(3)), n(1));
        assert_eq!(successor_integer(&n(0), &spec(3).with_zero(true)), n(0));
    }

    #[test]
    fn fractional_successor_examples() {
        let s = spec(3);
        let half = successor_fractional(&q(1, 2), &s).unwrap();
        assert_eq!(half.value(), q(1, 2));
        assert_eq!(half.period, vec![1]);
        assert!(successor_fractional(&q(3, 5), &s).is_none());
        assert_eq!(successor_fractional(&q(0, 1), &s).unwrap().value(), q(0, 1));
        // 0.2 in base 3 is 0.0121..., next point of A_3 is 0.1 = 1/3
        assert_eq!(successor_fractional(&q(1, 5), &s).unwrap().value(), q(1, 3));
    }

    #[test]
    fn digit_sets_without_zero() {
        // D = {1, 2} in base 3: members 1, 2, 4, 5, 7, 8, 13, ...
        let s = DigitSetSpec::new(3, [1, 2], false).unwrap();
        let members: Vec<u64> = (0..8u64).map(|k| unrank(&n(k), &s).to_u64().unwrap()).collect();
        assert_eq!(members, vec![1, 2, 4, 5, 7, 8, 13, 14]);
        for k in 0..200u64 {
            let v = unrank(&n(k), &s);
            assert_eq!(rank(&v, &s).unwrap(), n(k));
            assert_eq!(count_upto(&v, &s), n(k + 1));
        }
        // fractional set lives in [1/2, 1]
        assert_eq!(successor_fractional(&q(0, 1), &s).unwrap().value(), q(1, 2));
    }

    #[test]
    fn invalid_specs() {
        assert!(DigitSetSpec::new(1, [0], false).is_err());
        assert!(DigitSetSpec::new(3, [0, 3], false).is_err());
        assert!(DigitSetSpec::new(3, [0], false).is_err());
        assert!(DigitSetSpec::new(3, Vec::<u32>::new(), false).is_err());
    }

    #[test]
    fn big_values_take_the_bignum_path() {
        let s = spec(7);
        let k = BigNatural::new(pow_big(2, 150) + 12345u32);
        let v = unrank(&k, &s);
        assert!(is_member(&v, &s));
        assert_eq!(rank(&v, &s).unwrap(), k);
        let c = count_upto(&v, &s);
        assert_eq!(c.value(), &(k.value() + 1u32));
        let next = successor_integer(&BigNatural::new(v.value() + 1u32), &s);
        assert_eq!(rank(&next, &s).unwrap().value(), &(k.value() + 1u32));
    }

    #[test]
    fn digit_cache_round_trips() {
        let v = n(91);
        let d3 = v.digits(3);
        assert_eq!(&*d3, &[1, 0, 1, 0, 1]);
        assert_eq!(BigNatural::from_digits(&d3, 3), v);
        assert_eq!(BigNatural::from_digits(&v.digits(4), 4), v);
    }

    #[test]
    fn frac_point_shift_stays_in_set() {
        let s = spec(4);
        let u = FracPoint::new(4, vec![1, 0, 1, 1]).unwrap();
        assert!(u.in_set(&s));
        assert!(u.shift().in_set(&s));
        assert_eq!(u.value(), q(64 + 4 + 1, 256));
        let pu = u.value() * q(4, 1);
        assert_eq!(u.shift().value(), pu.clone() - pu.floor());
    }

    fn naive_member(mut v: u64, base: u64, digits: &[u32], zero: bool) -> bool {
        if v == 0 {
            return zero;
        }
        while v > 0 {
            if !digits.contains(&((v % base) as u32)) {
                return false;
            }
            v /= base;
        }
        true
    }

    fn arb_spec() -> impl Strategy<Value = (DigitSetSpec, bool)> {
        (2u32..12, proptest::collection::btree_set(0u32..12, 1..4), any::<bool>()).prop_filter_map(
            "digits must fit the base and not be {0}",
            |(base, ds, zero)| {
                let ds: Vec<u32> = ds.into_iter().filter(|&d| d < base).collect();
                DigitSetSpec::new(base, ds, zero).ok().map(|s| (s, zero))
            },
        )
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(k in 0u64..(1 << 20), base in 2u32..17) {
            let s = spec(base).with_zero(k % 2 == 0);
            let v = unrank(&n(k), &s);
            prop_assert!(is_member(&v, &s));
            prop_assert_eq!(rank(&v, &s).unwrap(), n(k));
            prop_assert!(unrank(&n(k + 1), &s) > v);
        }

        #[test]
        fn count_matches_scan((s, zero) in arb_spec(), limit in 0u64..3000) {
            // zero is never counted
            let expected = (1..=limit).filter(|&v| naive_member(v, s.base() as u64, s.digits(), zero)).count() as u64;
            prop_assert_eq!(count_upto(&n(limit), &s), n(expected));
        }

        #[test]
        fn successor_matches_scan((s, zero) in arb_spec(), start in 0u64..2000) {
            let found = successor_integer(&n(start), &s).to_u64().unwrap();
            let scan = (start..).find(|&v| naive_member(v, s.base() as u64, s.digits(), zero)).unwrap();
            prop_assert_eq!(found, scan);
        }

        #[test]
        fn fractional_successor_is_least_point_above(num in 0i64..=6561, base in 2u32..=5) {
            let s = spec(base);
            let x = q(num, 6561);
            match successor_fractional(&x, &s) {
                Some(e) => {
                    let v = e.value();
                    prop_assert!(v >= x && v <= s.frac_max());
                    prop_assert!(e.preperiod.iter().chain(&e.period).all(|&d| d <= 1));
                    // no finite-expansion point of depth 8 lies in [x, v)
                    for k in 0..(1u64 << 8) {
                        let digits: Vec<u32> = (0..8).rev().map(|i| ((k >> i) & 1) as u32).collect();
                        let p = FracPoint::new(base, digits).unwrap().value();
                        prop_assert!(!(p >= x && p < v), "point {} lies in [x, v)", p);
                    }
                }
                None => prop_assert!(x > s.frac_max()),
            }
        }

        #[test]
        fn shift_preserves_membership(base in 3u32..6, bits in proptest::collection::vec(0u32..2, 1..13)) {
            let s = spec(base);
            let u = FracPoint::new(base, bits).unwrap();
            prop_assert!(u.in_set(&s));
            let pu = u.value() * BigRational::from_integer(base.into());
            prop_assert_eq!(u.shift().value(), pu.clone() - pu.floor());
            prop_assert!(u.shift().in_set(&s));
        }
    }
}
