//! Covering-number checks for witness configurations attached to
//! `δ`-separated direction sets, and curvature/torsion of space curves.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum witness separation required by the theorems.
pub const WITNESS_GAP: f64 = 0.001;

/// Threshold below which curvature or torsion counts as vanishing.
pub const VANISHING: f64 = 1e-8;

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// `⌊x / δ⌋` for an exactly converted `f64`.
fn cell_index(x: f64, delta: &BigRational) -> BigInt {
    (exact(x) / delta).floor().to_integer()
}

/// Number of half-open origin-anchored `δ`-cubes holding at least one point.
pub fn covering_number(points: &[Vec<f64>], delta: &BigRational) -> Result<u64> {
    if !delta.is_positive() {
        return Err(Error::InvalidScale(delta.to_string()));
    }
    let cells: HashSet<Vec<BigInt>> = points
        .par_iter()
        .map(|p| p.iter().map(|&x| cell_index(x, delta)).collect())
        .collect();
    Ok(cells.len() as u64)
}

/// Both sides of `max{N/M, c·δ^(d−2)·M} >= √(c·N·δ^(d−2))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PigeonholeCheck {
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigRational,
    /// The right-hand side squared; roots are never taken.
    #[serde(serialize_with = "ser_display")]
    pub rhs_squared: BigRational,
    pub holds: bool,
    pub equality: bool,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn pigeonhole_bound(n: u64, m: u64, c: &BigRational, delta: &BigRational, d: u32) -> Result<PigeonholeCheck> {
    if n == 0 || m == 0 || !c.is_positive() || !delta.is_positive() || d < 2 {
        return Err(Error::InvalidInstance(format!(
            "pigeonhole needs N, M >= 1, c, δ > 0 and d >= 2 (got N={n}, M={m}, c={c}, δ={delta}, d={d})"
        )));
    }
    let nn = BigRational::from_integer(n.into());
    let mm = BigRational::from_integer(m.into());
    let scale = c * num_traits::pow(delta.clone(), (d - 2) as usize);
    let lhs = (&nn / &mm).max(&scale * &mm);
    let rhs_squared = scale * nn;
    let sq = &lhs * &lhs;
    Ok(PigeonholeCheck {
        holds: sq >= rhs_squared,
        equality: sq == rhs_squared,
        lhs,
        rhs_squared,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    C1,
    C2,
    C3Pair,
    C3Apex,
}

impl Theorem {
    pub fn uses_apex(self) -> bool {
        matches!(self, Theorem::C2 | Theorem::C3Apex)
    }

    pub fn on_curve(self) -> bool {
        matches!(self, Theorem::C3Pair | Theorem::C3Apex)
    }

    /// `c · N^α · δ^β` with the theorem's exponents.
    pub fn bound(self, c: f64, n: u64, delta: f64, d: u32) -> f64 {
        let n = n as f64;
        let dd = d as f64 - 2.0;
        match self {
            Theorem::C1 => c * n.sqrt() * delta.powf(dd / 2.0),
            Theorem::C2 => c * n * delta.powf(dd),
            Theorem::C3Pair => c * n.sqrt(),
            Theorem::C3Apex => c * n,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::C1 => "C1",
            Theorem::C2 => "C2",
            Theorem::C3Pair => "C3-pair",
            Theorem::C3Apex => "C3-apex",
        })
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c1" => Ok(Theorem::C1),
            "c2" => Ok(Theorem::C2),
            "c3-pair" | "c3pair" => Ok(Theorem::C3Pair),
            "c3-apex" | "c3apex" => Ok(Theorem::C3Apex),
            _ => Err(Error::ConfigInvalid(format!("unknown theorem {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witnesses {
    /// `(a_t, b_t)` per direction.
    Pairs(Vec<(Vec<f64>, Vec<f64>)>),
    /// A shared apex and one `b_t` per direction.
    Apex { apex: Vec<f64>, points: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometryInstance {
    pub d: usize,
    pub delta: f64,
    pub directions: Vec<Vec<f64>>,
    pub witnesses: Witnesses,
    /// Side of the cubes used for the covering number; defaults to `δ`.
    pub grid_scale: f64,
    /// How far a witness may sit off its plane.
    pub plane_tolerance: f64,
    pub seed: u64,
}

impl GeometryInstance {
    /// The witness set `A_δ`.
    pub fn point_set(&self) -> Vec<Vec<f64>> {
        match &self.witnesses {
            Witnesses::Pairs(p) => p.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect(),
            Witnesses::Apex { apex, points } => std::iter::once(apex.clone()).chain(points.iter().cloned()).collect(),
        }
    }

    /// Checks separation, witness placement and the unit-cube constraint.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInstance(m));
        if self.d < 3 || !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("need d >= 3 and δ in (0,1), got d={} δ={}", self.d, self.delta));
        }
        for t in &self.directions {
            if t.len() != self.d || (norm(t) - 1.0).abs() > 1e-9 {
                return bad("directions must be unit vectors of dimension d".into());
            }
        }
        if let Some((i, j)) = closest_violation(&self.directions, self.delta) {
            return bad(format!("directions {i} and {j} are closer than δ"));
        }
        let in_cube = |p: &Vec<f64>| p.len() == self.d && p.iter().all(|x| (0.0..=1.0).contains(x));
        let on_plane = |t: &Vec<f64>, a: &Vec<f64>, b: &Vec<f64>| dot(t, &sub(a, b)).abs() <= self.plane_tolerance;
        match &self.witnesses {
            Witnesses::Pairs(pairs) => {
                if pairs.len() != self.directions.len() {
                    return bad("one witness pair per direction".into());
                }
                for (t, (a, b)) in self.directions.iter().zip(pairs) {
                    if !in_cube(a) || !in_cube(b) || norm(&sub(a, b)) <= WITNESS_GAP || !on_plane(t, a, b) {
                        return bad("witness pair off its plane, outside the cube or too close".into());
                    }
                }
            }
            Witnesses::Apex { apex, points } => {
                if points.len() != self.directions.len() || apex.len() != self.d {
                    return bad("one witness per direction and a d-dimensional apex".into());
                }
                let bad_witness = |(t, b): (&Vec<f64>, &Vec<f64>)| {
                    !in_cube(b) || norm(&sub(apex, b)) <= WITNESS_GAP || !on_plane(t, apex, b)
                };
                if !in_cube(apex) || self.directions.iter().zip(points).any(bad_witness) {
                    return bad("apex witness off its plane, outside the cube or too close to the apex".into());
                }
            }
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Spherical distance between unit vectors.
pub fn spherical_distance(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

/// Spatial hash on chord length, used to test `δ`-separation.
struct SphereGrid {
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl SphereGrid {
    fn new(delta: f64) -> Self {
        SphereGrid {
            cell: chord(delta).max(1e-9),
            buckets: HashMap::new(),
        }
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|x| (x / self.cell).floor() as i64).collect()
    }

    fn neighbours<'a>(&'a self, p: &[f64]) -> impl Iterator<Item = usize> + 'a {
        let key = self.key(p);
        let d = key.len();
        (0..3usize.pow(d as u32)).flat_map(move |m| {
            let mut k = key.clone();
            let mut r = m;
            for c in k.iter_mut() {
                *c += (r % 3) as i64 - 1;
                r /= 3;
            }
            self.buckets.get(&k).into_iter().flatten().copied()
        })
    }

    fn insert(&mut self, p: &[f64], idx: usize) {
        self.buckets.entry(self.key(p)).or_default().push(idx);
    }
}

fn chord(angle: f64) -> f64 {
    2.0 * (angle / 2.0).sin()
}

fn closest_violation(dirs: &[Vec<f64>], delta: f64) -> Option<(usize, usize)> {
    let mut grid = SphereGrid::new(delta);
    // A hair of slack absorbs rounding in the stored unit vectors.
    let min = delta * (1.0 - 1e-12);
    for (i, t) in dirs.iter().enumerate() {
        if let Some(j) = grid.neighbours(t).find(|&j| spherical_distance(t, &dirs[j]) < min) {
            return Some((j, i));
        }
        grid.insert(t, i);
    }
    None
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-9 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Greedy `δ`-separated directions from `candidates` seeded samples.
pub fn greedy_directions(d: usize, delta: f64, candidates: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut grid = SphereGrid::new(delta);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for _ in 0..candidates {
        let t = random_unit(rng, d);
        if grid.neighbours(&t).all(|j| spherical_distance(&t, &out[j]) >= delta) {
            grid.insert(&t, out.len());
            out.push(t);
        }
    }
    out
}

/// Greedy `δ`-separated points along a curve on the sphere, scanning `t`
/// over a fine grid of `[0, 1]`.
pub fn curve_directions(curve: &CurveSpec, delta: f64) -> Vec<Vec<f64>> {
    let steps = ((20.0 / delta).ceil() as usize).max(100);
    let mut grid = SphereGrid::new(delta);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for i in 0..=steps {
        let p = curve.sphere_point(i as f64 / steps as f64);
        let t: Vec<f64> = p.to_vec();
        if grid.neighbours(&t).all(|j| spherical_distance(&t, &out[j]) >= delta) {
            grid.insert(&t, out.len());
            out.push(t);
        }
    }
    out
}

/// A random point of `{x : t·x = t·p} ∩ [0,1]^d` at distance more than
/// the witness gap from `from`, found by rejection.
fn point_on_plane(rng: &mut ChaCha8Rng, t: &[f64], p: &[f64], from: &[f64]) -> Option<Vec<f64>> {
    for _ in 0..1000 {
        let mut w = random_unit(rng, t.len());
        let along = dot(&w, t);
        for (wi, ti) in w.iter_mut().zip(t) {
            *wi -= along * ti;
        }
        let s: f64 = rng.gen_range(0.01..0.7) / norm(&w).max(1e-12);
        let b: Vec<f64> = p.iter().zip(&w).map(|(pi, wi)| pi + s * wi).collect();
        if b.iter().all(|x| (0.0..=1.0).contains(x)) && norm(&sub(&b, from)) > 2.0 * WITNESS_GAP {
            return Some(b);
        }
    }
    None
}

/// Seeded instance: greedy directions (or points along `curve`) and
/// witnesses sampled on the orthogonal planes through random offsets.
pub fn generate_instance(
    d: usize,
    delta: f64,
    theorem: Theorem,
    seed: u64,
    curve: Option<&CurveSpec>,
) -> Result<GeometryInstance> {
    if d < 3 || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInstance(format!(
            "need d >= 3 and δ in (0,1), got d={d} δ={delta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let directions = if theorem.on_curve() {
        let curve = curve.ok_or_else(|| Error::InvalidInstance(format!("{theorem} needs a curve")))?;
        if d != 3 {
            return Err(Error::InvalidInstance("curve instances live in d = 3".into()));
        }
        curve_directions(curve, delta)
    } else {
        // About 20 candidates per cap of radius δ/2 gets close to maximal.
        let caps = (delta / 2.0).powi(1 - d as i32);
        let candidates = (20.0 * caps).ceil().clamp(100.0, 5e6) as usize;
        greedy_directions(d, delta, candidates, &mut rng)
    };
    let apex: Vec<f64> = vec![0.5; d];
    let mut pairs = Vec::new();
    let mut singles = Vec::new();
    for t in &directions {
        if theorem.uses_apex() {
            let b = point_on_plane(&mut rng, t, &apex, &apex)
                .ok_or_else(|| Error::InvalidInstance("no witness found on a plane through the apex".into()))?;
            singles.push(b);
            continue;
        }
        loop {
            let p: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
            if let Some(b) = point_on_plane(&mut rng, t, &p, &p) {
                pairs.push((p, b));
                break;
            }
        }
    }
    let witnesses = if theorem.uses_apex() {
        Witnesses::Apex { apex, points: singles }
    } else {
        Witnesses::Pairs(pairs)
    };
    let inst = GeometryInstance {
        d,
        delta,
        directions,
        witnesses,
        grid_scale: delta,
        plane_tolerance: 1e-9,
        seed,
    };
    inst.validate()?;
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub d: usize,
    pub delta: f64,
    pub n: u64,
    pub grid_scale: f64,
    /// Covering number of `A_δ` at the grid scale.
    pub lhs: u64,
    pub bound: f64,
    pub ratio: f64,
    pub margin: f64,
    pub seed: u64,
}

/// Compares `N(A_δ, scale)` with the theorem's bound at calibration `c`.
pub fn verify_instance(inst: &GeometryInstance, theorem: Theorem, calibration: f64) -> Result<VerifyReport> {
    inst.validate()?;
    let pairs = matches!(inst.witnesses, Witnesses::Pairs(_));
    if pairs == theorem.uses_apex() {
        return Err(Error::InvalidInstance(format!(
            "{theorem} does not match the witness layout"
        )));
    }
    let scale = exact(inst.grid_scale);
    let lhs = covering_number(&inst.point_set(), &scale)?;
    let n = inst.directions.len() as u64;
    let bound = theorem.bound(calibration, n, inst.delta, inst.d as u32);
    Ok(VerifyReport {
        theorem,
        d: inst.d,
        delta: inst.delta,
        n,
        grid_scale: inst.grid_scale,
        lhs,
        bound,
        ratio: lhs as f64 / bound,
        margin: lhs as f64 - bound,
        seed: inst.seed,
    })
}

/// Generates and verifies one instance per `δ`, in parallel, with seeds
/// `seed, seed + 1, …` so results do not depend on scheduling.
pub fn verify_across_deltas(
    d: usize,
    deltas: &[f64],
    theorem: Theorem,
    seed: u64,
    calibration: f64,
    curve: Option<&CurveSpec>,
) -> Result<Vec<VerifyReport>> {
    deltas
        .par_iter()
        .enumerate()
        .map(|(i, &delta)| {
            let inst = generate_instance(d, delta, theorem, seed + i as u64, curve)?;
            verify_instance(&inst, theorem, calibration)
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln(1/δ)`.
pub fn slope_in_inverse_delta(deltas: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = deltas.iter().zip(ys).map(|(d, y)| (-d.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

// ---- curves ----

type CurveFn = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

#[derive(Clone)]
pub enum CurveSpec {
    /// `(1, c₄·3^t, c₅·5^(q·t))`; `q = num/den`.
    Family { c4: f64, c5: f64, q_num: i64, q_den: i64 },
    /// Any curve given by its values; derivatives are taken numerically.
    Sampled { name: String, f: CurveFn },
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveSpec::Family { c4, c5, q_num, q_den } => {
                write!(f, "Family(c4={c4}, c5={c5}, q={q_num}/{q_den})")
            }
            CurveSpec::Sampled { name, .. } => write!(f, "Sampled({name})"),
        }
    }
}

impl CurveSpec {
    pub fn family(c4: f64, c5: f64, q_num: i64, q_den: i64) -> Result<Self> {
        if c4 == 0.0 || c5 == 0.0 || q_num == 0 || q_den <= 0 {
            return Err(Error::InvalidInstance(
                "family needs q, c4, c5 nonzero and q_den > 0".into(),
            ));
        }
        Ok(CurveSpec::Family { c4, c5, q_num, q_den })
    }

    pub fn sampled(name: &str, f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Self {
        CurveSpec::Sampled {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    /// `(a·cos t, a·sin t, b·t)`.
    pub fn helix(a: f64, b: f64) -> Self {
        Self::sampled("helix", move |t| [a * t.cos(), a * t.sin(), b * t])
    }

    pub fn great_circle() -> Self {
        Self::sampled("circle", |t| [t.cos(), t.sin(), 0.0])
    }

    /// The curve itself.
    pub fn point(&self, t: f64) -> [f64; 3] {
        match self {
            CurveSpec::Family { c4, c5, q_num, q_den } => {
                let q = *q_num as f64 / *q_den as f64;
                [1.0, c4 * 3f64.powf(t), c5 * 5f64.powf(q * t)]
            }
            CurveSpec::Sampled { f, .. } => f(t),
        }
    }

    /// The curve projected radially onto the unit sphere.
    pub fn sphere_point(&self, t: f64) -> [f64; 3] {
        let p = self.point(t);
        let n = norm(&p);
        p.map(|x| x / n)
    }
}

/// Step for the numerical derivatives.
pub const DIFF_STEP: f64 = 1e-2;

fn derivs(f: &dyn Fn(f64) -> [f64; 3], t: f64, h: f64) -> [[f64; 3]; 3] {
    let at = |s: f64| f(t + s * h);
    let (m2, m1, p0, p1, p2) = (at(-2.0), at(-1.0), at(0.0), at(1.0), at(2.0));
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[0][i] = (p1[i] - m1[i]) / (2.0 * h);
        out[1][i] = (p1[i] - 2.0 * p0[i] + m1[i]) / (h * h);
        out[2][i] = (p2[i] - 2.0 * p1[i] + 2.0 * m1[i] - m2[i]) / (2.0 * h * h * h);
    }
    out
}

/// First three derivatives by central differences at `h` and `h/2`
/// combined with one Richardson step.
pub fn numeric_derivatives(f: &dyn Fn(f64) -> [f64; 3], t: f64, h: f64) -> [[f64; 3]; 3] {
    let coarse = derivs(f, t, h);
    let fine = derivs(f, t, h / 2.0);
    let mut out = [[0.0; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            out[k][i] = fine[k][i] + (fine[k][i] - coarse[k][i]) / 3.0;
        }
    }
    out
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureTorsion {
    pub t: f64,
    pub kappa: f64,
    pub tau: f64,
    /// Signed curvature of `t ↦ (c₄3^t, c₅5^(qt))` for the family.
    pub plane_curvature: Option<f64>,
}

/// `κ = |C′×C″| / |C′|³` and `τ = det(C′, C″, C‴) / |C′×C″|²`.
///
/// For the family the space curve is its radial projection onto the
/// sphere; sampled curves are used as given.
pub fn curvature_torsion(curve: &CurveSpec, t: f64) -> Result<CurvatureTorsion> {
    let [d1, d2, d3] = match curve {
        CurveSpec::Family { .. } => numeric_derivatives(&|s| curve.sphere_point(s), t, DIFF_STEP),
        CurveSpec::Sampled { f, .. } => numeric_derivatives(f.as_ref(), t, DIFF_STEP),
    };
    let b = cross(&d1, &d2);
    let bn = norm(&b);
    if bn < VANISHING {
        return Err(Error::ZeroCurvature { t });
    }
    let kappa = bn / norm(&d1).powi(3);
    let tau = dot(&b, &d3) / (bn * bn);
    let plane_curvature = match curve {
        CurveSpec::Family { c4, c5, q_num, q_den } => Some(family_plane_curvature(*c4, *c5, *q_num, *q_den, t)),
        CurveSpec::Sampled { .. } => None,
    };
    Ok(CurvatureTorsion {
        t,
        kappa,
        tau,
        plane_curvature,
    })
}

/// `(x′y″ − y′x″) / (x′² + y′²)^(3/2)` for `x = c₄3^t`, `y = c₅5^(qt)`.
pub fn family_plane_curvature(c4: f64, c5: f64, q_num: i64, q_den: i64, t: f64) -> f64 {
    let (l3, l5) = (3f64.ln(), 5f64.ln());
    let q = q_num as f64 / q_den as f64;
    let x1 = c4 * l3 * 3f64.powf(t);
    let x2 = x1 * l3;
    let y1 = c5 * q * l5 * 5f64.powf(q * t);
    let y2 = y1 * q * l5;
    (x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5)
}

/// Certified sign of the family's plane curvature, the same for every `t`:
/// `sign(c₄c₅q) · sign(q·ln5 − ln3)`, where the last factor compares
/// `5^num` with `3^den` exactly.
pub fn family_curvature_sign(c4: f64, c5: f64, q_num: i64, q_den: i64) -> Result<Ordering> {
    if c4 == 0.0 || c5 == 0.0 || q_num == 0 || q_den <= 0 {
        return Err(Error::InvalidInstance(
            "family needs q, c4, c5 nonzero and q_den > 0".into(),
        ));
    }
    let gap = if q_num < 0 {
        Ordering::Less
    } else {
        let five = num_traits::pow(BigUint::from(5u32), q_num as usize);
        let three = num_traits::pow(BigUint::from(3u32), q_den as usize);
        five.cmp(&three)
    };
    let prefactor_negative = (c4 < 0.0) ^ (c5 < 0.0) ^ (q_num < 0);
    Ok(if prefactor_negative { gap.reverse() } else { gap })
}

/// Checks that the plane curvature keeps its certified sign at every point
/// of the grid `t = 0, step, 2·step, …, 1`.
pub fn family_curvature_nonzero_on_grid(c4: f64, c5: f64, q_num: i64, q_den: i64, step: f64) -> Result<bool> {
    let sign = family_curvature_sign(c4, c5, q_num, q_den)?;
    let steps = (1.0 / step).round() as usize;
    Ok((0..=steps).all(|i| {
        let k = family_plane_curvature(c4, c5, q_num, q_den, i as f64 / steps as f64);
        k != 0.0 && k.partial_cmp(&0.0) == Some(sign)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn covering_examples() {
        assert_eq!(covering_number(&[vec![0.3, 0.3, 0.3]], &q(1, 10)).unwrap(), 1);
        let two = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
        assert_eq!(covering_number(&two, &q(1, 10)).unwrap(), 2);
        // 0.1 is not exactly representable; 0.3 / (1/10) floors to 2.
        assert_eq!(cell_index(0.3, &q(1, 10)), BigInt::from(2));
        assert!(covering_number(&two, &q(0, 1)).is_err());
    }

    #[test]
    fn pigeonhole_examples() {
        let r = pigeonhole_bound(100, 1, &q(1, 1), &q(1, 2), 3).unwrap();
        assert_eq!(r.lhs, q(100, 1));
        assert_eq!(r.rhs_squared, q(50, 1));
        assert!(r.holds && !r.equality);
        // N = M²·c·δ^(d−2): N/M = cδ^(d−2)M.
        let r = pigeonhole_bound(8, 4, &q(1, 1), &q(1, 2), 3).unwrap();
        assert!(r.equality && r.holds);
    }

    #[test]
    fn instances_validate_and_verify() {
        let inst = generate_instance(3, 0.25, Theorem::C1, 7, None).unwrap();
        assert!(inst.directions.len() > 20);
        let rep = verify_instance(&inst, Theorem::C1, 1.0).unwrap();
        assert!(rep.lhs >= 1 && rep.ratio > 0.0);
        assert!(verify_instance(&inst, Theorem::C2, 1.0).is_err());
        let apex = generate_instance(3, 0.25, Theorem::C2, 7, None).unwrap();
        assert!(verify_instance(&apex, Theorem::C2, 1.0).is_ok());
        let mut broken = inst.clone();
        broken.directions[1] = broken.directions[0].clone();
        assert!(matches!(broken.validate(), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn generation_is_seeded() {
        let a = generate_instance(3, 0.3, Theorem::C1, 11, None).unwrap();
        let b = generate_instance(3, 0.3, Theorem::C1, 11, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn curve_instances() {
        let curve = CurveSpec::family(1.0, 1.0, 1, 1).unwrap();
        let inst = generate_instance(3, 0.01, Theorem::C3Pair, 3, Some(&curve)).unwrap();
        assert!(inst.directions.len() > 5);
        assert!(verify_instance(&inst, Theorem::C3Pair, 1.0).is_ok());
        assert!(generate_instance(3, 0.01, Theorem::C3Apex, 3, None).is_err());
    }

    #[test]
    fn classical_curves() {
        let h = curvature_torsion(&CurveSpec::helix(1.0, 1.0), 0.3).unwrap();
        assert!((h.kappa - 0.5).abs() < 1e-6);
        assert!((h.tau - 0.5).abs() < 1e-6);
        let c = curvature_torsion(&CurveSpec::great_circle(), 0.7).unwrap();
        assert!((c.kappa - 1.0).abs() < 1e-6);
        assert!(c.tau.abs() < 1e-9);
        let line = CurveSpec::sampled("line", |t| [t, 2.0 * t, 0.0]);
        assert!(matches!(
            curvature_torsion(&line, 0.5),
            Err(Error::ZeroCurvature { .. })
        ));
    }

    #[test]
    fn family_curvature() {
        let k = family_plane_curvature(1.0, 1.0, 1, 1, 0.0);
        assert!((k - 0.1221).abs() < 1e-4, "{k}");
        assert_eq!(family_curvature_sign(1.0, 1.0, 1, 1).unwrap(), Ordering::Greater);
        assert_eq!(family_curvature_sign(-1.0, 1.0, 1, 1).unwrap(), Ordering::Less);
        // q = 2/3: 5^2 = 25 < 27 = 3^3
        assert_eq!(family_curvature_sign(1.0, 1.0, 2, 3).unwrap(), Ordering::Less);
        assert!(family_curvature_nonzero_on_grid(1.0, 1.0, 1, 1, 1e-3).unwrap());
        assert!(family_curvature_nonzero_on_grid(2.0, -0.5, 2, 3, 1e-3).unwrap());
        let ct = curvature_torsion(&CurveSpec::family(1.0, 1.0, 1, 1).unwrap(), 0.0).unwrap();
        assert!(ct.tau.abs() > VANISHING);
        assert!(CurveSpec::family(0.0, 1.0, 1, 1).is_err());
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in [Theorem::C1, Theorem::C2, Theorem::C3Pair, Theorem::C3Apex] {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
    }

    proptest! {
        #[test]
        fn pigeonhole_always_holds(n in 1u64..1_000_000, m in 1u64..1_000_000, cn in 1i64..1000, cd in 1i64..1000,
                                   dn in 1i64..1000, d in 2u32..7) {
            let delta = q(dn, 1000);
            let r = pigeonhole_bound(n, m, &q(cn, cd), &delta, d).unwrap();
            prop_assert!(r.holds);
        }

        #[test]
        fn covering_never_exceeds_point_count(pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 3), 1..50),
                                              k in 1i64..40) {
            let c = covering_number(&pts, &q(1, k)).unwrap();
            prop_assert!(c >= 1 && c <= pts.len() as u64);
        }
    }
}
