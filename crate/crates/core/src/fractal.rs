//! Box counting for products `A_a × A_b × A_c ⊂ [0,1]³` and their slices by
//! affine planes, plus dyadic sparseness profiles of those slices.
//!
//! Grid cells are half-open and anchored at the origin,
//! `[i·r, (i+1)·r)`, except that the last cell on each axis also contains
//! the point `1`. A cell meets `A_p` on one axis exactly when the
//! fractional successor of its left end exists and falls inside the cell.
//! The plane test uses the closed cube and exact integer arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::certified::CertifiedReal;
use crate::digits::{successor_fractional, BigNatural, DigitSetSpec};
use crate::error::{Error, Result};
use crate::solver::{fit_exponent, CountSeries};

pub const GRID_CONVENTION: &str = "half-open origin-anchored cells [i*r,(i+1)*r), last cell closed at 1";

/// One plane coefficient: exact, or a certified enclosure `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Exact(BigRational),
    Interval(BigRational, BigRational),
}

impl Coefficient {
    pub fn lo(&self) -> &BigRational {
        match self {
            Coefficient::Exact(q) | Coefficient::Interval(q, _) => q,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            Coefficient::Exact(q) | Coefficient::Interval(_, q) => q,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo() == self.hi()
    }

    fn contains_zero(&self) -> bool {
        !self.lo().is_positive() && !self.hi().is_negative()
    }

    /// Smallest `|c|²` over the enclosure.
    fn min_sq(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else {
            let (a, b) = (self.lo().abs(), self.hi().abs());
            let m = a.min(b);
            &m * &m
        }
    }

    fn max_sq(&self) -> BigRational {
        let m = self.lo().abs().max(self.hi().abs());
        &m * &m
    }
}

impl From<BigRational> for Coefficient {
    fn from(q: BigRational) -> Self {
        Coefficient::Exact(q)
    }
}

impl From<i64> for Coefficient {
    fn from(v: i64) -> Self {
        Coefficient::Exact(BigRational::from_integer(v.into()))
    }
}

impl From<&CertifiedReal> for Coefficient {
    fn from(c: &CertifiedReal) -> Self {
        let (lo, hi) = (c.lo(), c.hi());
        if lo == hi {
            Coefficient::Exact(lo)
        } else {
            Coefficient::Interval(lo, hi)
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(q) => write!(f, "{q}"),
            Coefficient::Interval(lo, hi) => write!(f, "[{lo};{hi}]"),
        }
    }
}

/// Parses `p/q`, a decimal or an integer exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::ConfigInvalid(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let n = if neg { -n } else { n };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

impl FromStr for Coefficient {
    type Err = Error;

    /// `p/q`, a decimal, an integer, or `[lo;hi]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (lo, hi) = inner
                .split_once(';')
                .ok_or_else(|| Error::ConfigInvalid(format!("interval needs lo;hi: {s:?}")))?;
            let (lo, hi) = (parse_rational(lo)?, parse_rational(hi)?);
            if lo > hi {
                return Err(Error::ConfigInvalid(format!("empty interval {s:?}")));
            }
            return Ok(if lo == hi {
                Coefficient::Exact(lo)
            } else {
                Coefficient::Interval(lo, hi)
            });
        }
        parse_rational(t).map(Coefficient::Exact)
    }
}

/// The plane `c₁x + c₂y + c₃z = c₄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSpec {
    coeffs: [Coefficient; 4],
}

impl PlaneSpec {
    pub fn new(coeffs: [Coefficient; 4]) -> Result<Self> {
        if coeffs[..3].iter().all(Coefficient::contains_zero) {
            return Err(Error::DegeneratePlane);
        }
        Ok(PlaneSpec { coeffs })
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self> {
        Self::new(c.map(Coefficient::from))
    }

    /// The plane `x + y = z`.
    pub fn sum_plane() -> Self {
        Self::from_ints([1, 1, -1, 0]).expect("nonzero normal")
    }

    pub fn coeffs(&self) -> &[Coefficient; 4] {
        &self.coeffs
    }

    /// Whether any coefficient is a proper interval, making counts upper
    /// bounds.
    pub fn is_interval(&self) -> bool {
        self.coeffs.iter().any(|c| !c.is_exact())
    }

    /// Certified membership of the unit normal in `S_Δ`: every coordinate
    /// has absolute value above `delta`. Decided on squares.
    pub fn in_s_delta(&self, delta: &BigRational) -> bool {
        let norm_max: BigRational = self.coeffs[..3].iter().map(Coefficient::max_sq).sum();
        let bound = delta * delta * norm_max;
        !delta.is_negative() && self.coeffs[..3].iter().all(|c| c.min_sq() > bound)
    }
}

impl FromStr for PlaneSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::ConfigInvalid(format!("plane needs c1,c2,c3,c4: {s:?}")));
        }
        let c: Vec<Coefficient> = parts.iter().map(|p| p.parse()).collect::<Result<_>>()?;
        PlaneSpec::new([c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()])
    }
}

impl fmt::Display for PlaneSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coeffs;
        write!(f, "{},{},{},{}", c[0], c[1], c[2], c[3])
    }
}

/// Integer form of a plane: every endpoint multiplied by a common
/// denominator.
struct ScaledPlane {
    lo: [BigInt; 4],
    hi: [BigInt; 4],
}

impl ScaledPlane {
    fn new(plane: &PlaneSpec) -> Self {
        let den = plane
            .coeffs
            .iter()
            .flat_map(|c| [c.lo().denom().clone(), c.hi().denom().clone()])
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let scale = |q: &BigRational| (q * &den).to_integer();
        ScaledPlane {
            lo: std::array::from_fn(|i| scale(plane.coeffs[i].lo())),
            hi: std::array::from_fn(|i| scale(plane.coeffs[i].hi())),
        }
    }

    /// Whether the closed cube `∏ [p_j, p_j + side] / scale` can meet the
    /// plane. Coordinates are nonnegative, so each product's extremes sit
    /// at endpoint pairs chosen by the coefficient's sign.
    fn meets(&self, corner: &[BigInt; 3], side: &BigInt, scale: &BigInt) -> bool {
        let mut min = BigInt::zero();
        let mut max = BigInt::zero();
        for ((near, lo), hi) in corner.iter().zip(&self.lo).zip(&self.hi) {
            let far = near + side;
            min += if lo.is_negative() { lo * &far } else { lo * near };
            max += if hi.is_negative() { hi * near } else { hi * &far };
        }
        min <= &self.hi[3] * scale && max >= &self.lo[3] * scale
    }
}

/// Number of cells per axis at scale `r`: `ceil(1/r)`.
fn cells_per_axis(r: &BigRational) -> u64 {
    r.recip().ceil().to_integer().to_u64().expect("scale too small")
}

fn check_scale(r: &BigRational) -> Result<()> {
    if !r.is_positive() || *r > BigRational::one() {
        return Err(Error::InvalidScale(r.to_string()));
    }
    Ok(())
}

/// `n` when `r = 2^-n`.
pub fn dyadic_depth(r: &BigRational) -> Option<u32> {
    let d = r.denom();
    (r.numer().is_one() && (d & (d - BigInt::one())).is_zero()).then(|| (d.bits() - 1) as u32)
}

/// Indices of the cells of side `r` that meet `A_spec`, ascending.
///
/// Each step jumps to the fractional successor of the next cell's left end.
pub fn axis_hits(spec: &DigitSetSpec, r: &BigRational) -> Result<Vec<u64>> {
    check_scale(r)?;
    let last = cells_per_axis(r) - 1;
    let mut out = Vec::new();
    let mut u = BigRational::zero();
    while let Some(s) = successor_fractional(&u, spec) {
        let j = (s.value() / r).floor().to_integer().to_u64().unwrap().min(last);
        out.push(j);
        if j == last {
            break;
        }
        u = r * BigRational::from_integer((j + 1).into());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthCount {
    pub depth: u32,
    pub count: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxCountReport {
    /// Cell side as `p/q`.
    #[serde(serialize_with = "ser_display")]
    pub r: BigRational,
    pub count: u128,
    /// Counts at `2^-k` for `k = 0..=n` when `r = 2^-n`; empty otherwise.
    pub per_depth: Vec<DepthCount>,
    /// Set when the plane has interval coefficients.
    pub upper_bound: bool,
    pub convention: &'static str,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Per-axis hits at every depth `0..=n`, derived from depth `n` by parent
/// shifts (a cell meets the set iff one of its subcells does).
fn hits_by_depth(spec: &DigitSetSpec, n: u32) -> Result<Vec<Vec<u64>>> {
    let r = BigRational::new(BigInt::one(), BigInt::one() << n as usize);
    let finest = axis_hits(spec, &r)?;
    let mut levels = vec![finest];
    for _ in 0..n {
        let mut up: Vec<u64> = levels.last().unwrap().iter().map(|i| i >> 1).collect();
        up.dedup();
        levels.push(up);
    }
    levels.reverse();
    Ok(levels)
}

pub fn box_count_product(specs: [&DigitSetSpec; 3], r: &BigRational) -> Result<BoxCountReport> {
    check_scale(r)?;
    let (count, per_depth) = match dyadic_depth(r) {
        Some(n) => {
            let levels: Vec<Vec<Vec<u64>>> = specs.iter().map(|s| hits_by_depth(s, n)).collect::<Result<_>>()?;
            let per_depth: Vec<DepthCount> = (0..=n as usize)
                .map(|k| DepthCount {
                    depth: k as u32,
                    count: levels.iter().map(|l| l[k].len() as u128).product(),
                })
                .collect();
            (per_depth.last().unwrap().count, per_depth)
        }
        None => {
            let mut count = 1u128;
            for s in specs {
                count *= axis_hits(s, r)?.len() as u128;
            }
            (count, Vec::new())
        }
    };
    Ok(BoxCountReport {
        r: r.clone(),
        count,
        per_depth,
        upper_bound: false,
        convention: GRID_CONVENTION,
    })
}

/// Cells at depth `n` (side `2^-n`) that pass the plane and axis tests,
/// found by subdividing from the unit cube. Also returns the count at
/// every intermediate depth.
pub fn slice_cover(plane: &PlaneSpec, specs: [&DigitSetSpec; 3], n: u32) -> Result<(Vec<[u64; 3]>, Vec<DepthCount>)> {
    let levels: Vec<Vec<Vec<u64>>> = specs.iter().map(|s| hits_by_depth(s, n)).collect::<Result<_>>()?;
    let sp = ScaledPlane::new(plane);
    let one = BigInt::one();
    let passes = |k: usize, cell: &[u64; 3]| {
        (0..3).all(|j| levels[j][k].binary_search(&cell[j]).is_ok())
            && sp.meets(&cell.map(BigInt::from), &one, &(BigInt::one() << k))
    };
    let mut frontier: Vec<[u64; 3]> = if passes(0, &[0, 0, 0]) {
        vec![[0, 0, 0]]
    } else {
        Vec::new()
    };
    let mut per_depth = vec![DepthCount {
        depth: 0,
        count: frontier.len() as u128,
    }];
    for k in 1..=n as usize {
        frontier = frontier
            .par_iter()
            .flat_map_iter(|c| {
                (0..8u64).filter_map(move |m| {
                    let child = [2 * c[0] + (m & 1), 2 * c[1] + ((m >> 1) & 1), 2 * c[2] + (m >> 2)];
                    passes(k, &child).then_some(child)
                })
            })
            .collect();
        per_depth.push(DepthCount {
            depth: k as u32,
            count: frontier.len() as u128,
        });
    }
    frontier.sort_unstable();
    Ok((frontier, per_depth))
}

pub fn box_count_slice(plane: &PlaneSpec, specs: [&DigitSetSpec; 3], r: &BigRational) -> Result<BoxCountReport> {
    check_scale(r)?;
    let (count, per_depth) = match dyadic_depth(r) {
        Some(n) => {
            let (_, per_depth) = slice_cover(plane, specs, n)?;
            (per_depth.last().unwrap().count, per_depth)
        }
        None => (scan_slice(plane, specs, r)?, Vec::new()),
    };
    Ok(BoxCountReport {
        r: r.clone(),
        count,
        per_depth,
        upper_bound: plane.is_interval(),
        convention: GRID_CONVENTION,
    })
}

/// Non-dyadic scales: test every cell of the per-axis hit product.
fn scan_slice(plane: &PlaneSpec, specs: [&DigitSetSpec; 3], r: &BigRational) -> Result<u128> {
    let hits: Vec<Vec<u64>> = specs.iter().map(|s| axis_hits(s, r)).collect::<Result<_>>()?;
    let sp = ScaledPlane::new(plane);
    let (a, b) = (r.numer().clone(), r.denom().clone());
    let count = hits[0]
        .par_iter()
        .map(|&i| {
            let mut c = 0u128;
            for &j in &hits[1] {
                for &l in &hits[2] {
                    let corner = [i, j, l].map(|v| BigInt::from(v) * &a);
                    if sp.meets(&corner, &a, &b) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    Ok(count)
}

/// Fitted exponent of `N(2^-k)` against `2^k` over the given depths.
pub fn box_exponent(per_depth: &[DepthCount], depths: std::ops::RangeInclusive<u32>) -> Result<f64> {
    let points = per_depth
        .iter()
        .filter(|d| depths.contains(&d.depth))
        .map(|d| {
            (
                BigNatural::new(num_bigint::BigUint::one() << d.depth as usize),
                BigNatural::from(d.count),
            )
        })
        .collect();
    Ok(fit_exponent(&CountSeries::new(Vec::new(), points))?.slope)
}

/// Which dyadic annuli around a center meet a slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsenessProfile {
    #[serde(serialize_with = "ser_point")]
    pub center: [BigRational; 3],
    pub depth: u32,
    /// Depth of the cube cover used to decide each annulus.
    pub resolution: u32,
    /// `k ∈ [1, depth]` whose annulus `2^-(k+1) <= |p - x| < 2^-k` meets
    /// the cover. Misses are definitive; hits are limited by resolution.
    pub hits: Vec<u32>,
    pub density: f64,
}

fn ser_point<S: serde::Serializer>(p: &[BigRational; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|q| q.to_string()))
}

/// Squared nearest and farthest distances, times `4^res`, from the scaled
/// center to the cell `[i, i+1]³`.
fn cell_distances(cell: &[u64; 3], center: &[BigRational; 3]) -> (BigRational, BigRational) {
    let mut near = BigRational::zero();
    let mut far = BigRational::zero();
    for j in 0..3 {
        let lo = BigRational::from_integer(cell[j].into());
        let hi = &lo + BigRational::one();
        let x = &center[j];
        let dn = if *x < lo {
            &lo - x
        } else if *x > hi {
            x - &hi
        } else {
            BigRational::zero()
        };
        let df = (x - &lo).abs().max((&hi - x).abs());
        near += &dn * &dn;
        far += &df * &df;
    }
    (near, far)
}

fn profile_from_cover(cover: &[[u64; 3]], res: u32, center: &[BigRational; 3], depth: u32) -> SparsenessProfile {
    let scale = BigRational::from_integer(BigInt::one() << res as usize);
    let scaled: [BigRational; 3] = std::array::from_fn(|j| &center[j] * &scale);
    let dists: Vec<(BigRational, BigRational)> = cover.par_iter().map(|c| cell_distances(c, &scaled)).collect();
    // In cell units the annulus k is [2^(res-k-1), 2^(res-k)).
    let hits: Vec<u32> = (1..=depth)
        .filter(|&k| {
            let outer = BigRational::from_integer(BigInt::one() << (2 * (res - k)) as usize);
            let inner = BigRational::from_integer(BigInt::one() << (2 * (res - k - 1)) as usize);
            dists.iter().any(|(n, f)| *n < outer && *f >= inner)
        })
        .collect();
    SparsenessProfile {
        center: center.clone(),
        depth,
        resolution: res,
        density: hits.len() as f64 / depth as f64,
        hits,
    }
}

pub fn sparseness_profile(
    plane: &PlaneSpec,
    specs: [&DigitSetSpec; 3],
    center: &[BigRational; 3],
    depth: u32,
) -> Result<SparsenessProfile> {
    if depth == 0 {
        return Err(Error::ConfigInvalid("sparseness depth must be at least 1".into()));
    }
    let unit = BigRational::zero()..=BigRational::one();
    if !center.iter().all(|c| unit.contains(c)) {
        return Err(Error::ConfigInvalid("sparseness center must lie in [0,1]^3".into()));
    }
    let res = depth + 2;
    let (cover, _) = slice_cover(plane, specs, res)?;
    Ok(profile_from_cover(&cover, res, center, depth))
}

/// Sampled sparseness next to the fitted box exponent of the same slice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UspaDiagnostic {
    pub depth: u32,
    pub centers: usize,
    pub max_density: f64,
    pub mean_density: f64,
    pub box_exponent: f64,
}

/// Profiles at up to `samples` centers taken from the slice cover at depth
/// `depth / 2` (cell lower corners, evenly spaced through the sorted cover).
pub fn uspa_diagnostic(
    plane: &PlaneSpec,
    specs: [&DigitSetSpec; 3],
    depth: u32,
    samples: usize,
) -> Result<UspaDiagnostic> {
    let res = depth + 2;
    let (cover, per_depth) = slice_cover(plane, specs, res)?;
    let coarse = (depth / 2).max(1);
    let (coarse_cover, _) = slice_cover(plane, specs, coarse)?;
    if coarse_cover.is_empty() || samples == 0 {
        return Err(Error::DegenerateSeries("empty slice cover".into()));
    }
    let step = coarse_cover.len().div_ceil(samples);
    let scale = BigInt::one() << coarse as usize;
    let profiles: Vec<SparsenessProfile> = coarse_cover
        .iter()
        .step_by(step)
        .map(|c| {
            let center = c.map(|v| BigRational::new(v.into(), scale.clone()));
            profile_from_cover(&cover, res, &center, depth)
        })
        .collect();
    let densities: Vec<f64> = profiles.iter().map(|p| p.density).collect();
    Ok(UspaDiagnostic {
        depth,
        centers: profiles.len(),
        max_density: densities.iter().cloned().fold(0.0, f64::max),
        mean_density: densities.iter().sum::<f64>() / densities.len() as f64,
        box_exponent: box_exponent(&per_depth, 1..=res)?,
    })
}
