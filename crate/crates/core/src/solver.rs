//! Exact solutions of `x + y = z` with `x ∈ B_a`, `y ∈ B_b`, `z ∈ B_c`.
//!
//! The outer loop walks `z` through `B_c ∩ [0, N]` by unranking. For each
//! `z` the inner search builds the sparser of `x`, `y` digit by digit from
//! the most significant end. A prefix fixes an interval `[lo, hi]` of
//! completions; the complementary coordinate must then lie in
//! `[z - hi, z - lo]`, and the prefix is dropped when the successor of
//! `z - hi` in the other set already exceeds `z - lo`.
//!
//! Kernels run on `u128` whenever `N` leaves enough headroom and on
//! `BigUint` otherwise, so counts never truncate.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::digits::{self, BigNatural, DigitSetSpec};
use crate::error::{Error, Result};
use crate::nat::{fast_path, Nat};

/// Ranks per parallel work unit in the outer loop.
const Z_BLOCK: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Drop digit prefixes that cannot be completed. Turning this off gives
    /// a plain enumeration of the inner coordinate with identical output.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true }
    }
}

/// A solution together with the rank of each coordinate in its set.
///
/// The ranks act as membership certificates: `unrank(rank) == coordinate`
/// can be checked independently of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionRecord {
    pub x: BigNatural,
    pub y: BigNatural,
    pub z: BigNatural,
    pub bases: [u32; 3],
    pub ranks: [BigNatural; 3],
}

impl SolutionRecord {
    fn new(x: BigNatural, y: BigNatural, z: BigNatural, specs: [&DigitSetSpec; 3]) -> Self {
        let rank_of = |v: &BigNatural, s: &DigitSetSpec| digits::rank(v, s).expect("search only emits members");
        let ranks = [rank_of(&x, specs[0]), rank_of(&y, specs[1]), rank_of(&z, specs[2])];
        SolutionRecord {
            bases: [specs[0].base(), specs[1].base(), specs[2].base()],
            x,
            y,
            z,
            ranks,
        }
    }

    /// Rechecks the equation, membership and rank certificates.
    pub fn verify(&self, specs: [&DigitSetSpec; 3]) -> bool {
        let coords = [&self.x, &self.y, &self.z];
        self.x.value() + self.y.value() == *self.z.value()
            && coords
                .iter()
                .zip(specs)
                .zip(&self.ranks)
                .all(|((v, s), k)| digits::is_member(v, s) && digits::unrank(k, s) == **v)
    }
}

/// Counts at increasing limits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountSeries {
    /// Digit sets whose dimensions define the heuristic exponent.
    #[serde(skip)]
    pub specs: Vec<DigitSetSpec>,
    pub points: Vec<(BigNatural, BigNatural)>,
}

impl CountSeries {
    pub fn new(specs: Vec<DigitSetSpec>, points: Vec<(BigNatural, BigNatural)>) -> Self {
        CountSeries { specs, points }
    }

    /// Builds a series from plain integers; the heuristic exponent is then
    /// unavailable.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        CountSeries {
            specs: Vec::new(),
            points: pairs.iter().map(|&(n, c)| (n.into(), c.into())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    /// Least-squares slope of `ln count` against `ln N`.
    pub slope: f64,
    pub intercept: f64,
    /// Number of points with a positive count.
    pub used: usize,
    /// `Σ ln|D_i| / ln p_i − 1` over the series' digit sets, if known.
    pub heuristic: Option<f64>,
}

/// Natural log of a big natural as `f64`.
pub(crate) fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (v >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `Σ dim − 1` for the given digit sets.
pub fn heuristic_exponent(specs: &[DigitSetSpec]) -> f64 {
    specs.iter().map(DigitSetSpec::dimension).sum::<f64>() - 1.0
}

/// Unweighted least squares on the log-log points; zero counts are dropped.
pub fn fit_exponent(series: &CountSeries) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|(n, c)| !c.is_zero() && !n.is_zero())
        .map(|(n, c)| (ln_big(n.value()), ln_big(c.value())))
        .collect();
    let mut xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if pts.len() < 2 || xs.len() < 2 {
        return Err(Error::DegenerateSeries(format!(
            "{} usable points with {} distinct limits",
            pts.len(),
            xs.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(ExponentFit {
        slope,
        intercept: my - slope * mx,
        used: pts.len(),
        heuristic: (!series.specs.is_empty()).then(|| heuristic_exponent(&series.specs)),
    })
}

// ---- search kernels ----

/// Precomputed digit-fill tables for one base up to a fixed length.
struct Fill<N> {
    pow: Vec<N>,
    min_fill: Vec<N>,
    max_fill: Vec<N>,
}

impl<N: Nat> Fill<N> {
    fn new(spec: &DigitSetSpec, len: usize) -> Self {
        let p = spec.base() as u64;
        let (lo, hi) = (spec.min_digit() as u64, spec.max_digit() as u64);
        let mut pow = vec![N::from_u64(1)];
        let mut min_fill = vec![N::zero()];
        let mut max_fill = vec![N::zero()];
        for i in 1..=len {
            pow.push(pow[i - 1].mul_small(p));
            min_fill.push(min_fill[i - 1].mul_add_small(p, lo));
            max_fill.push(max_fill[i - 1].mul_add_small(p, hi));
        }
        Fill {
            pow,
            min_fill,
            max_fill,
        }
    }
}

struct Inner<'s, N> {
    z: N,
    search: &'s DigitSetSpec,
    other: &'s DigitSetSpec,
    fill: Fill<N>,
    prune: bool,
}

impl<N: Nat> Inner<'_, N> {
    /// Calls `emit(u, z - u)` for every `u` in the searched set with
    /// `z - u` in the other set, in ascending `u`.
    fn run(&self, emit: &mut impl FnMut(N, N)) {
        if self.search.include_zero() && self.other.is_member_n(&self.z) {
            emit(N::zero(), self.z.clone());
        }
        let len = digits::digits_le(&self.z, self.search.base() as u64).len();
        for l in 1..=len {
            self.dfs(N::zero(), l, true, emit);
        }
    }

    fn dfs(&self, prefix: N, rem: usize, first: bool, emit: &mut impl FnMut(N, N)) {
        let p = self.search.base() as u64;
        for &d in self.search.digits() {
            if first && d == 0 {
                continue;
            }
            let np = prefix.mul_add_small(p, d as u64);
            let rest = rem - 1;
            if rest == 0 {
                if np > self.z {
                    return;
                }
                let w = self.z.minus(&np);
                if self.other.is_member_n(&w) {
                    emit(np, w);
                }
                continue;
            }
            let scaled = np.times(&self.fill.pow[rest]);
            let lo = scaled.plus(&self.fill.min_fill[rest]);
            if lo > self.z {
                return;
            }
            if self.prune {
                let hi = scaled.plus(&self.fill.max_fill[rest]);
                let w_lo = if hi >= self.z { N::zero() } else { self.z.minus(&hi) };
                let w_hi = self.z.minus(&lo);
                if self.other.successor_n(&w_lo) > w_hi {
                    continue;
                }
            }
            self.dfs(np, rest, false, emit);
        }
    }
}

/// Solutions `(x, y)` for one `z`, ascending in `x`.
fn solutions_for_z<N: Nat>(z: &N, a: &DigitSetSpec, b: &DigitSetSpec, opts: SearchOptions) -> Vec<(N, N)> {
    // Search the sparser coordinate; ties keep x.
    let swap = b.dimension() < a.dimension();
    let (search, other) = if swap { (b, a) } else { (a, b) };
    let len = digits::digits_le(z, search.base() as u64).len();
    let inner = Inner {
        z: z.clone(),
        search,
        other,
        fill: Fill::new(search, len),
        prune: opts.prune,
    };
    let mut out = Vec::new();
    inner.run(&mut |u, w| out.push(if swap { (w, u) } else { (u, w) }));
    if swap {
        out.sort();
    }
    out
}

/// Number of members of `spec` in `[0, n]`, counting zero when allowed.
fn members_upto_count<N: Nat>(spec: &DigitSetSpec, n: &N) -> N {
    let c = spec.count_upto_n(n);
    if spec.include_zero() {
        c.plus(&N::from_u64(1))
    } else {
        c
    }
}

fn rank_blocks(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(Z_BLOCK))
        .map(|i| (i * Z_BLOCK, ((i + 1) * Z_BLOCK).min(total)))
        .collect()
}

/// A value of `z` with its `(x, y)` solutions.
type PerZ<N> = (N, Vec<(N, N)>);

/// Per-`z` solution lists for all `z ∈ B_c ∩ [0, n]`, ascending in `z`.
fn per_z<N: Nat>(specs: [&DigitSetSpec; 3], n: &N, opts: SearchOptions) -> Vec<PerZ<N>> {
    let [a, b, c] = specs;
    let total = members_upto_count(c, n)
        .to_biguint()
        .to_u64()
        .expect("outer loop exceeds 2^64 iterations");
    let blocks: Vec<Vec<PerZ<N>>> = rank_blocks(total)
        .into_par_iter()
        .map(|(start, end)| {
            (start..end)
                .map(|k| {
                    let z = c.unrank_n(&N::from_u64(k));
                    let sols = solutions_for_z(&z, a, b, opts);
                    (z, sols)
                })
                .filter(|(_, s)| !s.is_empty())
                .collect()
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// Dispatches to the `u128` kernels when `n` leaves enough headroom.
fn small_limit(specs: [&DigitSetSpec; 3], n: &BigNatural) -> Option<u128> {
    let max_base = specs.iter().map(|s| s.base() as u64).max().unwrap();
    // Fill tables reach base^(len+1) ≤ n·base², successors stay below that.
    fast_path(&(n.value() * max_base * max_base), max_base).and_then(|_| n.value().to_u128())
}

fn to_nat<N: Nat>(v: N) -> BigNatural {
    BigNatural::new(v.to_biguint())
}

fn records<N: Nat>(specs: [&DigitSetSpec; 3], z: N, sols: Vec<(N, N)>) -> Vec<SolutionRecord> {
    let z = to_nat(z);
    sols.into_iter()
        .map(|(x, y)| SolutionRecord::new(to_nat(x), to_nat(y), z.clone(), specs))
        .collect()
}

/// Lazy stream of solutions in ascending `(z, x)` order.
pub struct SolutionStream<'s> {
    specs: [&'s DigitSetSpec; 3],
    small: Option<u128>,
    next_rank: BigUint,
    total: BigUint,
    opts: SearchOptions,
    buffer: VecDeque<SolutionRecord>,
}

impl Iterator for SolutionStream<'_> {
    type Item = SolutionRecord;

    fn next(&mut self) -> Option<SolutionRecord> {
        let [a, b, c] = self.specs;
        while self.buffer.is_empty() && self.next_rank < self.total {
            let k = self.next_rank.clone();
            self.next_rank += 1u32;
            let batch = match self.small {
                Some(_) => {
                    let z: u128 = c.unrank_n(&k.to_u128().unwrap());
                    records(self.specs, z, solutions_for_z(&z, a, b, self.opts))
                }
                None => {
                    let z: BigUint = c.unrank_n(&k);
                    let sols = solutions_for_z(&z, a, b, self.opts);
                    records(self.specs, z, sols)
                }
            };
            self.buffer.extend(batch);
        }
        self.buffer.pop_front()
    }
}

pub fn enumerate_solutions<'s>(
    a: &'s DigitSetSpec,
    b: &'s DigitSetSpec,
    c: &'s DigitSetSpec,
    n: &BigNatural,
) -> SolutionStream<'s> {
    enumerate_solutions_with(a, b, c, n, SearchOptions::default())
}

pub fn enumerate_solutions_with<'s>(
    a: &'s DigitSetSpec,
    b: &'s DigitSetSpec,
    c: &'s DigitSetSpec,
    n: &BigNatural,
    opts: SearchOptions,
) -> SolutionStream<'s> {
    let specs = [a, b, c];
    SolutionStream {
        specs,
        small: small_limit(specs, n),
        next_rank: BigUint::zero(),
        total: members_upto_count(c, n.value()),
        opts,
        buffer: VecDeque::new(),
    }
}

/// All solutions, computed in parallel over blocks of `z`.
pub fn collect_solutions(
    a: &DigitSetSpec,
    b: &DigitSetSpec,
    c: &DigitSetSpec,
    n: &BigNatural,
    opts: SearchOptions,
) -> Vec<SolutionRecord> {
    let specs = [a, b, c];
    match small_limit(specs, n) {
        Some(v) => per_z(specs, &v, opts)
            .into_iter()
            .flat_map(|(z, s)| records(specs, z, s))
            .collect(),
        None => per_z(specs, n.value(), opts)
            .into_iter()
            .flat_map(|(z, s)| records(specs, z, s))
            .collect(),
    }
}

/// `(z, number of solutions with this z)` for every `z` with at least one.
fn per_z_counts(specs: [&DigitSetSpec; 3], n: &BigNatural, opts: SearchOptions) -> Vec<(BigUint, u64)> {
    fn go<N: Nat>(specs: [&DigitSetSpec; 3], n: &N, opts: SearchOptions) -> Vec<(BigUint, u64)> {
        per_z(specs, n, opts)
            .into_iter()
            .map(|(z, s)| (z.to_biguint(), s.len() as u64))
            .collect()
    }
    match small_limit(specs, n) {
        Some(v) => go(specs, &v, opts),
        None => go(specs, n.value(), opts),
    }
}

pub fn count_solutions(a: &DigitSetSpec, b: &DigitSetSpec, c: &DigitSetSpec, n: &BigNatural) -> BigNatural {
    count_solutions_with(a, b, c, n, SearchOptions::default())
}

pub fn count_solutions_with(
    a: &DigitSetSpec,
    b: &DigitSetSpec,
    c: &DigitSetSpec,
    n: &BigNatural,
    opts: SearchOptions,
) -> BigNatural {
    let total: BigUint = per_z_counts([a, b, c], n, opts)
        .iter()
        .map(|(_, k)| BigUint::from(*k))
        .sum();
    BigNatural::new(total)
}

fn check_schedule(limits: &[BigNatural]) -> Result<()> {
    if limits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ConfigInvalid("limits must be strictly increasing".into()));
    }
    Ok(())
}

/// Counts at every limit from a single pass up to the largest one.
pub fn count_series(
    a: &DigitSetSpec,
    b: &DigitSetSpec,
    c: &DigitSetSpec,
    limits: &[BigNatural],
    opts: SearchOptions,
) -> Result<CountSeries> {
    check_schedule(limits)?;
    let Some(max) = limits.last() else {
        return Ok(CountSeries::new(vec![a.clone(), b.clone(), c.clone()], Vec::new()));
    };
    let per = per_z_counts([a, b, c], max, opts);
    let points = cumulative(limits, &per);
    Ok(CountSeries::new(vec![a.clone(), b.clone(), c.clone()], points))
}

fn cumulative(limits: &[BigNatural], per: &[(BigUint, u64)]) -> Vec<(BigNatural, BigNatural)> {
    let mut points = Vec::with_capacity(limits.len());
    let mut idx = 0;
    let mut acc = BigUint::zero();
    for lim in limits {
        while idx < per.len() && per[idx].0 <= *lim.value() {
            acc += per[idx].1;
            idx += 1;
        }
        points.push((lim.clone(), BigNatural::new(acc.clone())));
    }
    points
}

// ---- intersections ----

fn intersection_kernel<N: Nat>(a: &DigitSetSpec, b: &DigitSetSpec, n: &N) -> Vec<N> {
    let one = N::from_u64(1);
    let mut out = Vec::new();
    let mut x = one.clone();
    // Alternate successors until both sets agree on the candidate.
    loop {
        let xa = a.successor_n(&x);
        if xa > *n {
            return out;
        }
        let xb = b.successor_n(&xa);
        if xb == xa {
            x = xa.plus(&one);
            out.push(xa);
        } else {
            x = xb;
        }
    }
}

/// Members of `B_a ∩ B_b ∩ [1, n]`, ascending.
pub fn intersection_members(a: &DigitSetSpec, b: &DigitSetSpec, n: &BigNatural) -> Vec<BigNatural> {
    if n.is_zero() {
        return Vec::new();
    }
    match small_limit([a, b, b], n) {
        Some(v) => intersection_kernel(a, b, &v).into_iter().map(to_nat).collect(),
        None => intersection_kernel(a, b, n.value())
            .into_iter()
            .map(BigNatural::new)
            .collect(),
    }
}

/// `#(B_a ∩ B_b ∩ [1, n])`.
pub fn count_intersection(a: &DigitSetSpec, b: &DigitSetSpec, n: &BigNatural) -> BigNatural {
    BigNatural::from(intersection_members(a, b, n).len() as u64)
}

pub fn intersection_series(a: &DigitSetSpec, b: &DigitSetSpec, limits: &[BigNatural]) -> Result<CountSeries> {
    check_schedule(limits)?;
    let members = limits
        .last()
        .map(|max| intersection_members(a, b, max))
        .unwrap_or_default();
    let per: Vec<(BigUint, u64)> = members.into_iter().map(|m| (m.into_inner(), 1)).collect();
    Ok(CountSeries::new(vec![a.clone(), b.clone()], cumulative(limits, &per)))
}
