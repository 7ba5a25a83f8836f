//! A minimal natural-number abstraction so the digit kernels can run on
//! `u128` when the operands are small and fall back to `BigUint` otherwise.
//!
//! The `u128` implementation uses checked arithmetic: callers only select it
//! after bounding every intermediate value, and a violated bound panics
//! instead of wrapping.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub(crate) trait Nat: Clone + Ord + std::fmt::Debug + Send + Sync + Zero {
    fn from_u64(v: u64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    /// Requires `self >= other`.
    fn minus(&self, other: &Self) -> Self;
    fn mul_small(&self, m: u64) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn mul_add_small(&self, m: u64, a: u64) -> Self;
    fn divrem_small(&self, d: u64) -> (Self, u64);
    fn to_biguint(&self) -> BigUint;
}

impl Nat for u128 {
    #[inline]
    fn from_u64(v: u64) -> Self {
        v as u128
    }

    #[inline]
    fn plus(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("u128 kernel overflow")
    }

    #[inline]
    fn minus(&self, other: &Self) -> Self {
        self.checked_sub(*other).expect("u128 kernel underflow")
    }

    #[inline]
    fn mul_small(&self, m: u64) -> Self {
        self.checked_mul(m as u128).expect("u128 kernel overflow")
    }

    #[inline]
    fn times(&self, other: &Self) -> Self {
        self.checked_mul(*other).expect("u128 kernel overflow")
    }

    #[inline]
    fn mul_add_small(&self, m: u64, a: u64) -> Self {
        self.mul_small(m).plus(&(a as u128))
    }

    #[inline]
    fn divrem_small(&self, d: u64) -> (Self, u64) {
        let d = d as u128;
        (self / d, (self % d) as u64)
    }

    fn to_biguint(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Nat for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_small(&self, m: u64) -> Self {
        self * m
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn mul_add_small(&self, m: u64, a: u64) -> Self {
        self * m + a
    }

    fn divrem_small(&self, d: u64) -> (Self, u64) {
        let q = self / d;
        let r = (self % d).to_u64().expect("remainder below a u64 divisor");
        (q, r)
    }

    fn to_biguint(&self) -> BigUint {
        self.clone()
    }
}

/// Returns `n` as a `u128` when `n * base^2` still leaves headroom, so that
/// the kernels can add, multiply by a digit and multiply by the base once
/// without overflow.
pub(crate) fn fast_path(n: &BigUint, base: u64) -> Option<u128> {
    let base_bits = 64 - base.leading_zeros() as u64;
    if n.bits() + 2 * base_bits + 2 <= 126 {
        n.to_u128()
    } else {
        None
    }
}
