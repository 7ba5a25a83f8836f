//! Independent reference implementations used by the integration tests and
//! the acceptance harness. Nothing here calls into the library's search or
//! counting code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Digit-by-digit membership in `{n : every base-b digit of n is in D}`.
pub fn member(mut n: u64, base: u64, digits: &[u64], zero: bool) -> bool {
    if n == 0 {
        return zero;
    }
    while n > 0 {
        if !digits.contains(&(n % base)) {
            return false;
        }
        n /= base;
    }
    true
}

pub fn binary_member(n: u64, base: u64, zero: bool) -> bool {
    member(n, base, &[0, 1], zero)
}

/// Members of `B_base ∩ [0, limit]` by scanning every integer.
pub fn members_by_scan(base: u64, limit: u64, zero: bool) -> Vec<u64> {
    (0..=limit).filter(|&n| binary_member(n, base, zero)).collect()
}

/// Members of `B_base ∩ [0, limit]` by building numerals, for limits too
/// large to scan.
pub fn members_by_numerals(base: u64, limit: u64, zero: bool) -> Vec<u64> {
    let mut out = Vec::new();
    let mut frontier = vec![1u64];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in frontier {
            if v > limit {
                continue;
            }
            out.push(v);
            for d in [0, 1] {
                if let Some(w) = v.checked_mul(base).and_then(|w| w.checked_add(d)) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    if zero {
        out.push(0);
    }
    out.sort_unstable();
    out
}

/// Solutions of `x + y = z <= limit` with `x ∈ B_a`, `y ∈ B_b`, `z ∈ B_c`,
/// by a double loop over the `x` and `y` candidates.
pub fn brute_solutions(a: u64, b: u64, c: u64, limit: u64, zero: bool) -> Vec<(u64, u64, u64)> {
    let xs = members_by_numerals(a, limit, zero);
    let ys = members_by_numerals(b, limit, zero);
    let mut out = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let z = x + y;
            if z > limit {
                break;
            }
            if binary_member(z, c, zero) {
                out.push((x, y, z));
            }
        }
    }
    out.sort_unstable_by_key(|&(x, y, z)| (z, x, y));
    out
}

pub fn brute_count(a: u64, b: u64, c: u64, limit: u64, zero: bool) -> u64 {
    brute_solutions(a, b, c, limit, zero).len() as u64
}

/// `B_a ∩ B_b ∩ [1, limit]` by scanning.
pub fn brute_intersection(a: u64, b: u64, limit: u64) -> Vec<u64> {
    (1..=limit)
        .filter(|&n| binary_member(n, a, false) && binary_member(n, b, false))
        .collect()
}

/// Exact fraction `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Frac(pub i128, pub i128);

fn lt(x: Frac, y: Frac) -> bool {
    x.0 * y.1 < y.0 * x.1
}

fn le(x: Frac, y: Frac) -> bool {
    x.0 * y.1 <= y.0 * x.1
}

/// Does `A_p` (digits `{0,1}`) meet `[lo, hi)`, or `[lo, hi]` when `closed`?
/// Walks the cylinder tree: a cylinder with left end `v` at depth `L` is
/// contained in `[v, v + p^-L/(p-1)]`, and both ends belong to `A_p`.
fn cantor_meets(p: i128, lo: Frac, hi: Frac, closed: bool) -> bool {
    fn walk(p: i128, a: i128, scale: i128, lo: Frac, hi: Frac, closed: bool) -> bool {
        let left = Frac(a, scale);
        let right = Frac(a * (p - 1) + 1, scale * (p - 1));
        let below_hi = |x: Frac| if closed { le(x, hi) } else { lt(x, hi) };
        if lt(right, lo) || !below_hi(left) {
            return false;
        }
        if le(lo, left) || below_hi(right) {
            return true;
        }
        walk(p, a * p, scale * p, lo, hi, closed) || walk(p, a * p + 1, scale * p, lo, hi, closed)
    }
    walk(p, 0, 1, lo, hi, closed)
}

/// Cells `[i·r, (i+1)·r)` of side `r = rn/rd` meeting `A_p`; the last cell is
/// closed at 1.
pub fn axis_hits_oracle(p: u64, rn: i128, rd: i128) -> Vec<u64> {
    let p = p as i128;
    let cells = (rd + rn - 1) / rn;
    (0..cells)
        .filter(|&i| {
            let lo = Frac(i * rn, rd);
            let hi = Frac((i + 1) * rn, rd);
            let last = i == cells - 1;
            cantor_meets(p, lo, if last { Frac(1, 1) } else { hi }, last)
        })
        .map(|i| i as u64)
        .collect()
}

/// Closed cubes of the product cover meeting `c·x = c4`, by checking the
/// sign of the plane at all eight corners.
pub fn slice_oracle(bases: [u64; 3], plane: [i128; 4], rn: i128, rd: i128) -> BTreeSet<[u64; 3]> {
    let hits: Vec<Vec<u64>> = bases.iter().map(|&p| axis_hits_oracle(p, rn, rd)).collect();
    let mut out = BTreeSet::new();
    for &i in &hits[0] {
        for &j in &hits[1] {
            for &k in &hits[2] {
                let (mut lo, mut hi) = (i128::MAX, i128::MIN);
                for corner in 0..8 {
                    let x = i as i128 + (corner & 1);
                    let y = j as i128 + ((corner >> 1) & 1);
                    let z = k as i128 + ((corner >> 2) & 1);
                    // plane value times rd
                    let s = (plane[0] * x + plane[1] * y + plane[2] * z) * rn - plane[3] * rd;
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                if lo <= 0 && 0 <= hi {
                    out.insert([i, j, k]);
                }
            }
        }
    }
    out
}

/// Star discrepancy over anchored boxes by direct counting: every candidate
/// corner `(u, v)` from the coordinates plus 1, every point recounted.
/// Points are numerators over the common denominator `q`.
pub fn brute_discrepancy(points: &[(u64, u64)], q: u64) -> BigRational {
    let n = points.len() as i128;
    let q = q as i128;
    let mut us: Vec<i128> = points.iter().map(|p| p.0 as i128).collect();
    let mut vs: Vec<i128> = points.iter().map(|p| p.1 as i128).collect();
    us.push(q);
    vs.push(q);
    us.sort_unstable();
    us.dedup();
    vs.sort_unstable();
    vs.dedup();
    let mut best: i128 = 0;
    for &u in &us {
        for &v in &vs {
            let mut open = 0i128;
            let mut closed = 0i128;
            for &(x, y) in points {
                let (x, y) = (x as i128, y as i128);
                if x < u && y < v {
                    open += 1;
                }
                if x <= u && y <= v {
                    closed += 1;
                }
            }
            // both terms scaled by N·q²
            let area = n * u * v;
            best = best.max(area - open * q * q).max(closed * q * q - area);
        }
    }
    BigRational::new(BigInt::from(best), BigInt::from(n * q * q))
}

/// Same scan for arbitrary rational points.
pub fn brute_discrepancy_rational(points: &[[BigRational; 2]]) -> BigRational {
    use num_traits::{One, Zero};
    let n = BigRational::from_integer(BigInt::from(points.len()));
    let mut us: Vec<BigRational> = points.iter().map(|p| p[0].clone()).collect();
    let mut vs: Vec<BigRational> = points.iter().map(|p| p[1].clone()).collect();
    us.push(BigRational::one());
    vs.push(BigRational::one());
    let mut best = BigRational::zero();
    for u in &us {
        for v in &vs {
            let open = points.iter().filter(|p| &p[0] < u && &p[1] < v).count();
            let closed = points.iter().filter(|p| &p[0] <= u && &p[1] <= v).count();
            let area = u * v;
            let a = &area - BigRational::from_integer(open.into()) / &n;
            let b = BigRational::from_integer(closed.into()) / &n - &area;
            best = best.max(a).max(b);
        }
    }
    best
}

/// Signed curvature of `t ↦ (3^t, 5^t)` from the closed form.
pub fn plane_curvature_35(t: f64) -> f64 {
    let (l3, l5) = (3f64.ln(), 5f64.ln());
    let (x1, y1) = (l3 * 3f64.powf(t), l5 * 5f64.powf(t));
    let (x2, y2) = (l3 * x1, l5 * y1);
    (x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
