//! Renormalization of the plane `x + y = z`, the skew product that drives
//! it, Kronecker orbits on the 2-torus and their exact star discrepancy.
//!
//! Irrational rotation numbers are kept symbolic (`ln p / ln q`) and only
//! enclosed when a decision needs them; precision doubles until the
//! decision is certain or the ceiling from `RDL_PRECISION_CEILING` is hit.

use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::certified::{precision_ceiling, refine, Angle, CertifiedReal};
use crate::digits::FracPoint;
use crate::error::{Error, Result};

/// Orbit coordinates are certified to this width before use.
pub const ORBIT_WIDTH_BITS: u32 = 40;

/// Orbit points are rounded to this dyadic grid for exact discrepancy.
pub const ORBIT_GRID_BITS: u32 = 48;

fn check_base(name: &str, v: u64, min: u64) -> Result<()> {
    if v < min {
        return Err(Error::ConfigInvalid(format!("{name} = {v} must be at least {min}")));
    }
    Ok(())
}

/// Normal of the renormalized plane `T_n({x + y = z})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormNormal {
    pub n: u64,
    pub k1: u64,
    pub k2: u64,
    /// `a^k1 / c^n`.
    pub first: BigRational,
    /// `b^k2 / c^n`.
    pub second: BigRational,
}

impl RenormNormal {
    /// The third coordinate is always `-1`.
    pub fn third(&self) -> BigRational {
        -BigRational::one()
    }

    /// Whether `(first, second)` lies in `[1/a, 1] × [1/b, 1]`.
    pub fn in_box(&self, a: u64, b: u64) -> bool {
        let one = BigRational::one();
        let lo = |p: u64| BigRational::new(BigInt::one(), BigInt::from(p));
        lo(a) <= self.first && self.first <= one && lo(b) <= self.second && self.second <= one
    }
}

/// Largest `k` with `p^k <= cn`: a float guess, then exact corrections.
fn exponent_below(p: u64, cn: &BigUint, guess: f64) -> (u64, BigUint) {
    let pb = BigUint::from(p);
    let mut k = guess.floor().max(0.0) as u64;
    let mut pk = num_traits::pow(pb.clone(), k as usize);
    while &pk > cn {
        k -= 1;
        pk /= &pb;
    }
    loop {
        let next = &pk * &pb;
        if &next > cn {
            return (k, pk);
        }
        pk = next;
        k += 1;
    }
}

/// Exponents `k = ⌊n·ln c / ln p⌋` come from exact comparisons
/// `p^k <= c^n < p^(k+1)`.
pub fn renormalized_normal(a: u64, b: u64, c: u64, n: u64) -> Result<RenormNormal> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        check_base(name, v, 3)?;
    }
    let cn = num_traits::pow(BigUint::from(c), n as usize);
    let lc = n as f64 * (c as f64).ln();
    let (k1, ak) = exponent_below(a, &cn, lc / (a as f64).ln());
    let (k2, bk) = exponent_below(b, &cn, lc / (b as f64).ln());
    let den = BigInt::from(cn);
    let ratio = |p: u64, pk: BigUint| {
        if p.gcd(&c) == 1 {
            // already in lowest terms
            BigRational::new_raw(BigInt::from(pk), den.clone())
        } else {
            BigRational::new(BigInt::from(pk), den.clone())
        }
    };
    Ok(RenormNormal {
        n,
        k1,
        k2,
        first: ratio(a, ak),
        second: ratio(b, bk),
    })
}

/// A rotation coordinate `offset + steps·angle − wraps`, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub angle: Angle,
    pub offset: BigRational,
    pub steps: u64,
    pub wraps: u64,
}

impl Rotation {
    pub fn new(angle: Angle, start: BigRational) -> Result<Self> {
        if start.is_negative() || start >= BigRational::one() {
            return Err(Error::ConfigInvalid(format!("rotation start {start} outside [0,1)")));
        }
        Ok(Rotation {
            angle,
            offset: start,
            steps: 0,
            wraps: 0,
        })
    }

    /// Enclosure of `offset + steps·angle` (before subtracting wraps).
    fn unwrapped(&self, steps: u64, prec: u32) -> CertifiedReal {
        if let Some(t) = self.angle.as_rational() {
            let exact = t * BigRational::from_integer(steps.into()) + &self.offset;
            return CertifiedReal::from_rational(&exact, prec);
        }
        self.angle
            .enclose(prec + 64 - steps.leading_zeros())
            .mul_int(&BigInt::from(steps))
            .add_rational(&self.offset)
    }

    fn floor_at(&self, steps: u64, prec: u32) -> Option<BigInt> {
        match self.angle.as_rational() {
            Some(t) => Some(
                (t * BigRational::from_integer(steps.into()) + &self.offset)
                    .floor()
                    .to_integer(),
            ),
            None => self.unwrapped(steps, prec).floor(),
        }
    }

    pub fn enclose(&self, prec: u32) -> CertifiedReal {
        self.unwrapped(self.steps, prec)
            .add_rational(&BigRational::from_integer(-BigInt::from(self.wraps)))
    }

    /// Advances one step; returns whether the coordinate wrapped past 1.
    fn advance(&mut self, start_prec: u32) -> Result<bool> {
        let next = self.steps + 1;
        let total = refine(start_prec, precision_ceiling(), "rotation wrap", |p| {
            self.floor_at(next, p)
        })?;
        let total = total.to_u64().expect("wrap count fits u64");
        let wrapped = total > self.wraps;
        self.steps = next;
        self.wraps = total;
        Ok(wrapped)
    }
}

/// A point of the skew product: exact `(x, y, z)` and two rotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewState {
    pub x: BigRational,
    pub y: BigRational,
    pub z: BigRational,
    pub u: Rotation,
    pub v: Rotation,
    /// Starting precision for wrap decisions.
    pub prec: u32,
}

fn unit_interval(name: &str, q: &BigRational) -> Result<()> {
    if q.is_negative() || *q >= BigRational::one() {
        return Err(Error::ConfigInvalid(format!("{name} = {q} outside [0,1)")));
    }
    Ok(())
}

impl SkewState {
    /// State for bases `(a, b, c)`; `u` rotates by `ln a / ln b` and `v` by
    /// `ln a / ln c`.
    pub fn new(bases: [u64; 3], xyz: [BigRational; 3], uv: [BigRational; 2], prec: u32) -> Result<Self> {
        for (name, v) in ["a", "b", "c"].iter().zip(bases) {
            check_base(name, v, 2)?;
        }
        for (name, q) in ["x", "y", "z"].iter().zip(&xyz) {
            unit_interval(name, q)?;
        }
        let [x, y, z] = xyz;
        let [u0, v0] = uv;
        Ok(SkewState {
            x,
            y,
            z,
            u: Rotation::new(Angle::log_ratio(bases[0], bases[1])?, u0)?,
            v: Rotation::new(Angle::log_ratio(bases[0], bases[2])?, v0)?,
            prec: prec.max(64),
        })
    }

    pub fn from_frac_points(bases: [u64; 3], xyz: [&FracPoint; 3], uv: [BigRational; 2], prec: u32) -> Result<Self> {
        let vals = xyz.map(|p| p.value());
        Self::new(bases, vals, uv, prec)
    }
}

fn frac_times(q: &BigRational, m: u64) -> BigRational {
    (q * BigRational::from_integer(m.into())).fract()
}

/// One step of the skew product:
/// `x ↦ {a·x}`, `y ↦ {b·y}` when `u` wraps, `z ↦ {c·z}` when `v` wraps.
pub fn skew_step(state: &SkewState, bases: [u64; 3]) -> Result<SkewState> {
    let mut next = state.clone();
    let wrap_u = next.u.advance(state.prec)?;
    let wrap_v = next.v.advance(state.prec)?;
    next.x = frac_times(&state.x, bases[0]);
    if wrap_u {
        next.y = frac_times(&state.y, bases[1]);
    }
    if wrap_v {
        next.z = frac_times(&state.z, bases[2]);
    }
    Ok(next)
}

/// Integer form on exponents: `l ↦ a·l`, `m ↦ b·m` if `m <= a·l`,
/// `n ↦ c·n` if `n <= a·l`.
pub fn skew_step_integer(lmn: [&BigUint; 3], bases: [u64; 3]) -> [BigUint; 3] {
    let [l, m, n] = lmn;
    let al = l * bases[0];
    let m2 = if *m <= al { m * bases[1] } else { m.clone() };
    let n2 = if *n <= al { n * bases[2] } else { n.clone() };
    [al, m2, n2]
}

/// Rotation pair `(α, β)` with a working precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KroneckerSpec {
    pub alpha: Angle,
    pub beta: Angle,
    pub precision: u32,
}

impl KroneckerSpec {
    pub fn new(alpha: Angle, beta: Angle, precision: u32) -> Self {
        KroneckerSpec { alpha, beta, precision }
    }

    /// `(ln 2 / ln 3, ln 2 / ln 5)`.
    pub fn standard(precision: u32) -> Self {
        Self::new(
            Angle::log_ratio(2, 3).expect("valid bases"),
            Angle::log_ratio(2, 5).expect("valid bases"),
            precision,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub k: u64,
    pub u: CertifiedReal,
    pub v: CertifiedReal,
}

impl OrbitPoint {
    /// Midpoints rounded down onto the `2^-bits` grid, as numerators.
    pub fn grid(&self, bits: u32) -> (u64, u64) {
        let g = |c: &CertifiedReal| {
            let m = c.mid_on_grid(bits);
            m.to_u64().unwrap().min((1u64 << bits) - 1)
        };
        (g(&self.u), g(&self.v))
    }
}

/// `{k·θ}` certified to width below `2^-width_bits`.
fn fract_multiple(angle: &Angle, k: u64, start: u32, width_bits: u32) -> Result<CertifiedReal> {
    if let Some(t) = angle.as_rational() {
        let f = (t * BigRational::from_integer(k.into())).fract();
        return Ok(CertifiedReal::from_rational(&f, start.max(width_bits + 8)));
    }
    let kk = BigInt::from(k);
    let guard = 64 - k.leading_zeros() + 4;
    refine(
        start.max(width_bits + guard),
        precision_ceiling(),
        "orbit fractional part",
        |p| {
            let f = angle.enclose(p).mul_int(&kk).fract()?;
            (f.width_log2() < -(width_bits as f64)).then(|| f.with_prec(p))
        },
    )
}

/// `({kα}, {kβ})` for `k = 1..=n`, each computed independently.
pub fn kronecker_orbit(spec: &KroneckerSpec, n: u64) -> Result<Vec<OrbitPoint>> {
    if n == 0 {
        return Err(Error::ConfigInvalid("orbit length must be at least 1".into()));
    }
    (1..=n)
        .into_par_iter()
        .map(|k| {
            Ok(OrbitPoint {
                k,
                u: fract_multiple(&spec.alpha, k, spec.precision, ORBIT_WIDTH_BITS)?,
                v: fract_multiple(&spec.beta, k, spec.precision, ORBIT_WIDTH_BITS)?,
            })
        })
        .collect()
}

/// Orbit points on the `2^-48` grid, as exact rationals.
pub fn orbit_grid_points(orbit: &[OrbitPoint]) -> Vec<[BigRational; 2]> {
    let den = BigInt::one() << ORBIT_GRID_BITS as usize;
    orbit
        .iter()
        .map(|p| {
            let (x, y) = p.grid(ORBIT_GRID_BITS);
            [
                BigRational::new(x.into(), den.clone()),
                BigRational::new(y.into(), den.clone()),
            ]
        })
        .collect()
}

// ---- discrepancy ----

/// Integer arithmetic used by the corner scan.
trait Exact: Clone + Ord + Send + Sync + From<i64> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn to_big(&self) -> BigInt;
}

impl Exact for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// `max` over critical corners of `N·q² · local discrepancy`, where the
/// points are `(xs[i], ys[i]) / q`.
fn corner_scan<T: Exact>(xs: &[T], ys: &[T], q: T) -> T {
    let n = xs.len();
    let nt = T::from(n as i64);
    let q2 = q.clone() * q.clone();
    let mut cx: Vec<T> = xs.to_vec();
    cx.push(q.clone());
    cx.sort();
    cx.dedup();
    let mut cy: Vec<T> = ys.to_vec();
    cy.push(q.clone());
    cy.sort();
    cy.dedup();
    let yrank: Vec<usize> = ys.iter().map(|y| cy.binary_search(y).unwrap()).collect();
    cx.par_iter()
        .map(|u| {
            let mut open = vec![0i64; cy.len()];
            let mut closed = vec![0i64; cy.len()];
            for i in 0..n {
                if xs[i] < *u {
                    open[yrank[i]] += 1;
                }
                if xs[i] <= *u {
                    closed[yrank[i]] += 1;
                }
            }
            let mut best = T::from(0);
            let (mut below_open, mut upto_closed) = (0i64, 0i64);
            for (r, v) in cy.iter().enumerate() {
                // open count: y < v; closed count: y <= v
                upto_closed += closed[r];
                let area = nt.clone() * u.clone() * v.clone();
                let d1 = area.clone() - T::from(below_open) * q2.clone();
                let d2 = T::from(upto_closed) * q2.clone() - area;
                best = best.max(d1).max(d2);
                below_open += open[r];
            }
            best
        })
        .reduce(|| T::from(0), |a, b| a.max(b))
}

/// Exact star discrepancy over anchored boxes `[0,u) × [0,v)`.
///
/// Only the corners whose coordinates are point coordinates or `1` are
/// examined: `uv − A_open/N` from below and `A_closed/N − uv` from above.
pub fn discrepancy(points: &[[BigRational; 2]]) -> Result<BigRational> {
    if points.is_empty() {
        return Err(Error::ConfigInvalid("discrepancy needs at least one point".into()));
    }
    let unit = BigRational::zero()..BigRational::one();
    if !points.iter().flatten().all(|c| unit.contains(c)) {
        return Err(Error::ConfigInvalid("discrepancy points must lie in [0,1)^2".into()));
    }
    let q = points.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = |c: &BigRational| (c * BigRational::from_integer(q.clone())).to_integer();
    let xs: Vec<BigInt> = points.iter().map(|p| scale(&p[0])).collect();
    let ys: Vec<BigInt> = points.iter().map(|p| scale(&p[1])).collect();
    let n = points.len() as u64;
    let denom = BigInt::from(n) * &q * &q;
    // N·q² below 2^120 keeps every intermediate inside i128.
    let best = if denom.bits() <= 120 {
        let small = |v: &[BigInt]| v.iter().map(|x| x.to_i128().unwrap()).collect::<Vec<_>>();
        corner_scan(&small(&xs), &small(&ys), q.to_i128().unwrap()).to_big()
    } else {
        corner_scan(&xs, &ys, q.clone())
    };
    Ok(BigRational::new(best, denom))
}

/// Star discrepancy of the first coordinates alone, a lower bound for the
/// two-dimensional value.
pub fn discrepancy_1d(xs: &[BigRational]) -> BigRational {
    let mut v = xs.to_vec();
    v.sort();
    let n = BigRational::from_integer(BigInt::from(v.len()));
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let i = BigRational::from_integer(BigInt::from(i));
            let above = (&i + BigRational::one()) / &n - x;
            let below = x - &i / &n;
            above.max(below)
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// `(N, D_N)` for the orbit prefixes of the given lengths.
pub fn discrepancy_series(spec: &KroneckerSpec, lengths: &[u64]) -> Result<Vec<(u64, BigRational)>> {
    let Some(&max) = lengths.iter().max() else {
        return Ok(Vec::new());
    };
    let pts = orbit_grid_points(&kronecker_orbit(spec, max)?);
    lengths
        .iter()
        .map(|&n| Ok((n, discrepancy(&pts[..n as usize])?)))
        .collect()
}

/// `r_N = √D · ln(1/D)`, the scale paired with a measured discrepancy.
pub fn r_from_discrepancy(d: f64) -> f64 {
    d.sqrt() * (1.0 / d).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquaresReport {
    pub n: u64,
    pub w: u64,
    /// Grid squares of side `1/m` hit by the points indexed by `W`.
    pub m: u64,
    pub occupied: u64,
    /// Star discrepancy of the first `N` points.
    #[serde(serialize_with = "ser_display")]
    pub star: BigRational,
    /// `max |count(S)/N − r²|` over the grid squares `S`.
    #[serde(serialize_with = "ser_display")]
    pub grid: BigRational,
    /// `#W/N <= K·(r² + star)`.
    pub holds_star: bool,
    /// `#W/N <= K·(r² + grid)`; the counting argument guarantees this one.
    pub holds_grid: bool,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Grid cell `⌊m·{kθ}⌋`, decided exactly.
fn cell_of(angle: &Angle, k: u64, m: u64, start: u32) -> Result<u64> {
    if let Some(t) = angle.as_rational() {
        let f = (t * BigRational::from_integer(k.into())).fract();
        return Ok((f * BigRational::from_integer(m.into()))
            .floor()
            .to_integer()
            .to_u64()
            .unwrap());
    }
    let kk = BigInt::from(k);
    let guard = 64 - k.leading_zeros() + 64 - m.leading_zeros() + 4;
    let f = refine(start.max(32 + guard), precision_ceiling(), "grid square", |p| {
        angle.enclose(p).mul_int(&kk).fract()?.floor_scaled(m)
    })?;
    Ok(f.to_u64().unwrap())
}

/// Counts `r`-squares (`r = 1/m`) hit by `{({kα},{kβ}) : k ∈ W}` and checks
/// `#W/N <= K·(r² + D_N)` exactly, with `D_N` both the star discrepancy and
/// the grid-square discrepancy of the first `N` points.
pub fn occupied_squares(w: &[u64], spec: &KroneckerSpec, n: u64, m: u64) -> Result<SquaresReport> {
    if w.is_empty() || m == 0 {
        return Err(Error::ConfigInvalid("need nonempty W and m >= 1".into()));
    }
    if w.iter().any(|&k| k == 0 || k > n) {
        return Err(Error::ConfigInvalid(format!("W must lie in [1, {n}]")));
    }
    let orbit = kronecker_orbit(spec, n)?;
    let star = discrepancy(&orbit_grid_points(&orbit))?;
    let cells: Vec<(u64, u64)> = (1..=n)
        .into_par_iter()
        .map(|k| {
            Ok((
                cell_of(&spec.alpha, k, m, spec.precision)?,
                cell_of(&spec.beta, k, m, spec.precision)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut counts = std::collections::HashMap::new();
    for c in &cells {
        *counts.entry(*c).or_insert(0u64) += 1;
    }
    let nn = BigRational::from_integer(n.into());
    let r2 = BigRational::new(BigInt::one(), BigInt::from(m) * BigInt::from(m));
    let empty = if (counts.len() as u64) < m * m {
        r2.clone()
    } else {
        BigRational::zero()
    };
    let grid = counts
        .values()
        .map(|&c| (BigRational::from_integer(c.into()) / &nn - &r2).abs())
        .fold(empty, |a, b| a.max(b));
    let mut ws: Vec<u64> = w.to_vec();
    ws.sort_unstable();
    ws.dedup();
    let occupied: std::collections::BTreeSet<(u64, u64)> = ws.iter().map(|&k| cells[k as usize - 1]).collect();
    let k = BigRational::from_integer(BigInt::from(occupied.len()));
    let lhs = BigRational::new(BigInt::from(ws.len()), BigInt::from(n));
    Ok(SquaresReport {
        n,
        w: ws.len() as u64,
        m,
        occupied: occupied.len() as u64,
        holds_star: lhs <= &k * (&r2 + &star),
        holds_grid: lhs <= &k * (&r2 + &grid),
        star,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn normal_examples() {
        let n0 = renormalized_normal(3, 4, 5, 0).unwrap();
        assert_eq!((n0.first.clone(), n0.second.clone()), (q(1, 1), q(1, 1)));
        assert_eq!(n0.third(), q(-1, 1));
        let n1 = renormalized_normal(3, 4, 5, 1).unwrap();
        assert_eq!((n1.first, n1.second), (q(3, 5), q(4, 5)));
        let n2 = renormalized_normal(3, 4, 5, 2).unwrap();
        assert_eq!((n2.first.clone(), n2.second.clone()), (q(9, 25), q(16, 25)));
        assert!(n2.in_box(3, 4));
        assert!(renormalized_normal(2, 4, 5, 1).is_err());
    }

    #[test]
    fn integer_skew_examples() {
        let b = |v: u64| BigUint::from(v);
        let s1 = skew_step_integer([&b(1), &b(1), &b(1)], [2, 3, 5]);
        assert_eq!(s1, [b(2), b(3), b(5)]);
        let s2 = skew_step_integer([&s1[0], &s1[1], &s1[2]], [2, 3, 5]);
        assert_eq!(s2, [b(4), b(9), b(5)]);
    }

    #[test]
    fn skew_step_example() {
        let s = SkewState::new([2, 3, 5], [q(1, 7), q(1, 7), q(1, 7)], [q(9, 10), q(0, 1)], 64).unwrap();
        let t = skew_step(&s, [2, 3, 5]).unwrap();
        assert!((t.u.enclose(64).mid_f64() - 0.530_929_753_571_457).abs() < 1e-12);
        assert_eq!(t.y, q(3, 7));
        assert_eq!(t.x, q(2, 7));
        // v = 0 + ln2/ln5 < 1, so z stays.
        assert_eq!(t.z, q(1, 7));
    }

    #[test]
    fn orbit_first_point() {
        let orbit = kronecker_orbit(&KroneckerSpec::standard(64), 3).unwrap();
        let p = &orbit[0];
        assert!((p.u.mid_f64() - 0.630_929_753_571_457).abs() < 1e-12);
        assert!((p.v.mid_f64() - 0.430_676_558_073_393).abs() < 1e-12);
        assert!(p.u.width_log2() < -40.0);
    }

    #[test]
    fn rational_orbits_are_periodic() {
        let spec = KroneckerSpec::new(Angle::rational(2, 7), Angle::rational(3, 7), 64);
        let orbit = kronecker_orbit(&spec, 21).unwrap();
        for k in 0..14 {
            assert_eq!(orbit[k].u, orbit[k + 7].u);
            assert_eq!(orbit[k].v, orbit[k + 7].v);
        }
        assert_eq!(orbit[6].u.lo(), q(0, 1));
    }

    #[test]
    fn discrepancy_examples() {
        let one = discrepancy(&[[q(1, 2), q(1, 4)]]).unwrap();
        assert_eq!(one, q(7, 8));
        // centered 2x2 grid: the closed box at (3/4, 3/4) holds all points
        let grid: Vec<[BigRational; 2]> = (0..4).map(|i| [q(2 * (i % 2) + 1, 4), q(2 * (i / 2) + 1, 4)]).collect();
        assert_eq!(discrepancy(&grid).unwrap(), q(7, 16));
        let near_one = q(999_999, 1_000_000);
        let d = discrepancy(&[[near_one.clone(), near_one]]).unwrap();
        assert!(d > q(999_998, 1_000_000));
        assert!(discrepancy(&[]).is_err());
    }

    #[test]
    fn one_dimensional_lower_bound() {
        let pts: Vec<[BigRational; 2]> = (1..30).map(|i| [q(i * 7 % 31, 31), q(i * 11 % 31, 31)]).collect();
        let d2 = discrepancy(&pts).unwrap();
        let d1 = discrepancy_1d(&pts.iter().map(|p| p[0].clone()).collect::<Vec<_>>());
        assert!(d1 <= d2);
    }

    #[test]
    fn squares_trivial_case() {
        let spec = KroneckerSpec::standard(64);
        let r = occupied_squares(&[1], &spec, 10, 1).unwrap();
        assert_eq!(r.occupied, 1);
        assert!(r.holds_grid && r.holds_star);
        let r = occupied_squares(&(1..=1000).collect::<Vec<_>>(), &spec, 1000, 2).unwrap();
        assert_eq!(r.occupied, 4);
    }

    #[test]
    fn r_helper() {
        let d: f64 = 0.01;
        assert!((r_from_discrepancy(d) - 0.1 * 100f64.ln()).abs() < 1e-12);
    }

    fn arb_points() -> impl Strategy<Value = Vec<[BigRational; 2]>> {
        proptest::collection::vec((0i64..64, 0i64..64), 1..24)
            .prop_map(|v| v.into_iter().map(|(a, b)| [q(a, 64), q(b, 64)]).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn discrepancy_bounds(pts in arb_points()) {
            let d = discrepancy(&pts).unwrap();
            let xs: Vec<_> = pts.iter().map(|p| p[0].clone()).collect();
            let ys: Vec<_> = pts.iter().map(|p| p[1].clone()).collect();
            prop_assert!(d >= discrepancy_1d(&xs) && d >= discrepancy_1d(&ys));
            prop_assert!(d <= BigRational::one());
        }

        #[test]
        fn normals_stay_in_the_box(a in 3u64..12, b in 3u64..12, c in 3u64..12, n in 0u64..400) {
            let nm = renormalized_normal(a, b, c, n).unwrap();
            prop_assert!(nm.in_box(a, b));
            prop_assert_eq!(nm.third(), q(-1, 1));
        }
    }
}
