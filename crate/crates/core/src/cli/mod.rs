//! The `rdl` experiment driver: one subcommand per operation, JSON configs,
//! CSV output with a reproducibility sidecar.

pub mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certified::{format_sig, Angle};
use crate::digits::{BigNatural, DigitSetSpec};
use crate::dynamics::{self, KroneckerSpec};
use crate::error::{Error, Result};
use crate::fractal::{self, parse_rational, PlaneSpec};
use crate::geometry::{self, CurveSpec, Theorem};
use crate::solver::{self, SearchOptions};

pub use output::{config_hash, emit, sidecar_path, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Count,
    Enumerate,
    Intersect,
    Fit,
    Boxcount,
    Slice,
    Sparseness,
    Normal,
    Orbit,
    Discrepancy,
    Squares,
    Geometry,
    Torsion,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ZeroMode {
    Included,
    #[default]
    Excluded,
}

/// Everything a run depends on. Optional fields are filled with their
/// defaults by [`ExperimentConfig::resolve`] before hashing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub bases: Vec<u32>,
    #[serde(default)]
    pub digits: Vec<u32>,
    #[serde(default)]
    pub zero: ZeroMode,
    /// Decimal strings so that limits are never rounded.
    #[serde(default)]
    pub limits: Vec<String>,
    #[serde(default)]
    pub plane: Option<String>,
    #[serde(default)]
    pub r: Option<String>,
    #[serde(default)]
    pub depth: Option<u32>,
    #[serde(default)]
    pub precision: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub n: Option<u64>,
    #[serde(default)]
    pub center: Option<String>,
    #[serde(default)]
    pub theorem: Option<String>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub deltas: Vec<String>,
    #[serde(default)]
    pub calibration: Option<f64>,
    #[serde(default)]
    pub curve: Option<String>,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub t: Vec<String>,
    #[serde(default)]
    pub density: Option<String>,
    #[serde(default)]
    pub prune: Option<bool>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Comma-separated bases, e.g. 3,4,5.
    #[arg(long, value_delimiter = ',')]
    bases: Vec<u32>,
    /// Allowed digits shared by every base (default 0,1).
    #[arg(long, value_delimiter = ',')]
    digits: Vec<u32>,
    /// Whether 0 counts as a member (default excluded).
    #[arg(long, value_enum)]
    zero: Option<ZeroMode>,
    /// Strictly increasing limits N (or orbit lengths for discrepancy).
    #[arg(long, alias = "limit", value_delimiter = ',')]
    limits: Vec<String>,
    /// Plane coefficients c1,c2,c3,c4; each p/q, decimal or [lo;hi].
    #[arg(long, allow_hyphen_values = true)]
    plane: Option<String>,
    /// Cell side as p/q.
    #[arg(long)]
    r: Option<String>,
    /// Dyadic depth n, i.e. r = 2^-n (box counts, sparseness).
    #[arg(long)]
    depth: Option<u32>,
    /// Starting precision in bits for certified values (at least 64).
    #[arg(long)]
    precision: Option<u32>,
    /// Seed for sampled instances and random W.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// CSV path; a JSON sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Renormalization index or orbit length.
    #[arg(long)]
    n: Option<u64>,
    /// Sparseness center x,y,z.
    #[arg(long)]
    center: Option<String>,
    /// C1, C2, C3-pair or C3-apex.
    #[arg(long)]
    theorem: Option<String>,
    /// Ambient dimension d for geometry instances.
    #[arg(long)]
    dim: Option<usize>,
    /// Separations δ, e.g. 1/8,1/16.
    #[arg(long, value_delimiter = ',')]
    deltas: Vec<String>,
    /// Constant c in the covering bounds.
    #[arg(long)]
    calibration: Option<f64>,
    /// family, helix or circle.
    #[arg(long)]
    curve: Option<String>,
    /// Family parameters c4,c5,q (q as p/q).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Vec<String>,
    /// Curve parameters t.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<String>,
    /// Fraction of [1, N] sampled into W.
    #[arg(long)]
    density: Option<String>,
    /// Disable prefix pruning in the solver.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "rdl",
    version,
    about = "Restricted-digit counting, box counting and discrepancy experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Run a JSON config.
    Run { config: PathBuf },
    #[command(flatten)]
    Op(Box<OpCmd>),
}

macro_rules! op_commands {
    ($($variant:ident => $doc:literal),* $(,)?) => {
        #[derive(Debug, Subcommand)]
        pub enum OpCmd {
            $(#[doc = $doc] $variant(CommonArgs),)*
        }

        impl OpCmd {
            fn split(self) -> (Command, CommonArgs) {
                match self {
                    $(OpCmd::$variant(a) => (Command::$variant, a),)*
                }
            }
        }
    };
}

op_commands! {
    Count => "Count solutions of x + y = z up to each limit.",
    Enumerate => "List solutions up to the last limit.",
    Intersect => "Count B_a ∩ B_b up to each limit.",
    Fit => "Fit the growth exponent of the solution counts.",
    Boxcount => "Box counts of the product set.",
    Slice => "Box counts of a plane slice next to the product counts.",
    Sparseness => "Dyadic annulus hits around a center.",
    Normal => "Renormalized plane normal at index n.",
    Orbit => "Certified Kronecker orbit points.",
    Discrepancy => "Exact star discrepancy of orbit prefixes.",
    Squares => "Occupied grid squares for a random W.",
    Geometry => "Covering-number checks across δ.",
    Torsion => "Curvature and torsion of a curve.",
}

impl ExperimentConfig {
    fn from_args(command: Command, a: CommonArgs) -> Self {
        ExperimentConfig {
            command,
            bases: a.bases,
            digits: a.digits,
            zero: a.zero.unwrap_or_default(),
            limits: a.limits,
            plane: a.plane,
            r: a.r,
            depth: a.depth,
            precision: a.precision,
            seed: a.seed,
            threads: a.threads,
            out: a.out,
            n: a.n,
            center: a.center,
            theorem: a.theorem,
            dim: a.dim,
            deltas: a.deltas,
            calibration: a.calibration,
            curve: a.curve,
            params: a.params,
            t: a.t,
            density: a.density,
            prune: a.no_prune.then_some(false),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))
    }

    /// Fills defaults so the sidecar records every value the run used.
    pub fn resolve(mut self) -> Self {
        use Command::*;
        let c = self.command;
        if self.digits.is_empty() {
            self.digits = vec![0, 1];
        }
        self.precision.get_or_insert(64);
        self.seed.get_or_insert(0);
        if matches!(c, Count | Enumerate | Fit) {
            self.prune.get_or_insert(true);
        }
        if matches!(c, Boxcount | Slice) && self.r.is_none() && self.depth.is_none() {
            self.depth = Some(8);
        }
        if matches!(c, Slice | Sparseness) && self.plane.is_none() {
            self.plane = Some("1,1,-1,0".into());
        }
        if c == Sparseness {
            self.depth.get_or_insert(10);
            self.center.get_or_insert_with(|| "0,0,0".into());
        }
        match c {
            Normal => {
                self.n.get_or_insert(0);
            }
            Orbit | Squares => {
                self.n.get_or_insert(if c == Orbit { 10 } else { 1000 });
            }
            _ => {}
        }
        if c == Squares {
            self.r.get_or_insert_with(|| "1/2".into());
            self.density.get_or_insert_with(|| "1".into());
        }
        if matches!(c, Orbit | Discrepancy | Squares) && self.bases.is_empty() {
            self.bases = vec![2, 3, 5];
        }
        if c == Discrepancy && self.limits.is_empty() {
            self.limits = vec!["100".into(), "1000".into()];
        }
        if c == Geometry {
            self.theorem.get_or_insert_with(|| "C1".into());
            self.dim.get_or_insert(3);
            self.calibration.get_or_insert(1.0);
            if self.deltas.is_empty() {
                self.deltas = vec!["1/8".into(), "1/16".into(), "1/32".into()];
            }
        }
        if c == Torsion {
            self.curve.get_or_insert_with(|| "family".into());
            if self.params.is_empty() && self.curve.as_deref() == Some("family") {
                self.params = vec!["1".into(), "1".into(), "1".into()];
            }
            if self.t.is_empty() {
                self.t = vec!["0".into()];
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.bases.iter().any(|&b| b < 2) {
            return bad("every base must be at least 2".into());
        }
        if self.precision.is_some_and(|p| p < 64) {
            return bad("precision must be at least 64 bits".into());
        }
        let limits = self.parsed_limits()?;
        if limits.windows(2).any(|w| w[0] >= w[1]) {
            return bad("limits must be strictly increasing".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        use Command::*;
        let need_bases = match self.command {
            Count | Enumerate | Fit | Boxcount | Slice | Sparseness | Normal => Some(3),
            Intersect => Some(2),
            _ => None,
        };
        if let Some(k) = need_bases {
            if self.bases.len() != k {
                return bad(format!("{:?} needs exactly {k} bases", self.command).to_lowercase());
            }
        }
        if matches!(self.command, Count | Enumerate | Fit | Intersect) && limits.is_empty() {
            return bad("at least one limit is required".into());
        }
        Ok(())
    }

    /// Hash of everything that can change the results; the output path
    /// and thread count are left out.
    pub fn experiment_hash(&self) -> Result<String> {
        config_hash(&ExperimentConfig {
            out: None,
            threads: None,
            ..self.clone()
        })
    }

    fn parsed_limits(&self) -> Result<Vec<BigNatural>> {
        self.limits.iter().map(|s| s.parse()).collect()
    }

    fn specs(&self) -> Result<Vec<DigitSetSpec>> {
        let zero = self.zero == ZeroMode::Included;
        self.bases
            .iter()
            .map(|&b| DigitSetSpec::new(b, self.digits.iter().copied(), zero))
            .collect()
    }

    fn precision(&self) -> u32 {
        self.precision.unwrap_or(64)
    }
}

fn rat(q: &BigRational) -> String {
    q.to_string()
}

fn sig(x: f64) -> String {
    format_sig(x, 15)
}

fn parse_f64(s: &str) -> Result<f64> {
    parse_rational(s)?
        .to_f64()
        .ok_or_else(|| Error::ConfigInvalid(format!("{s:?} is out of range")))
}

fn parse_point(s: &str) -> Result<[BigRational; 3]> {
    let v: Vec<BigRational> = s.split(',').map(parse_rational).collect::<Result<_>>()?;
    v.try_into()
        .map_err(|_| Error::ConfigInvalid(format!("expected x,y,z: {s:?}")))
}

/// Dispatches a resolved, validated config and returns its table.
pub fn execute(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let run = || dispatch(cfg);
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::ConfigInvalid(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<Table> {
    use Command::*;
    match cfg.command {
        Count | Fit | Enumerate => solver_cmd(cfg),
        Intersect => intersect_cmd(cfg),
        Boxcount | Slice => boxcount_cmd(cfg),
        Sparseness => sparseness_cmd(cfg),
        Normal => normal_cmd(cfg),
        Orbit => orbit_cmd(cfg),
        Discrepancy => discrepancy_cmd(cfg),
        Squares => squares_cmd(cfg),
        Geometry => geometry_cmd(cfg),
        Torsion => torsion_cmd(cfg),
    }
}

fn solver_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let specs = cfg.specs()?;
    let (a, b, c) = (&specs[0], &specs[1], &specs[2]);
    let limits = cfg.parsed_limits()?;
    let opts = SearchOptions {
        prune: cfg.prune.unwrap_or(true),
    };
    match cfg.command {
        Command::Enumerate => {
            let mut t = Table::new(&["x", "y", "z"]);
            for r in solver::collect_solutions(a, b, c, limits.last().unwrap(), opts) {
                t.push(vec![r.x.to_string(), r.y.to_string(), r.z.to_string()]);
            }
            t.summary = json!({ "solutions": t.rows.len() });
            Ok(t)
        }
        Command::Count => {
            let series = solver::count_series(a, b, c, &limits, opts)?;
            let mut t = Table::new(&["n", "count"]);
            for (n, k) in &series.points {
                t.push(vec![n.to_string(), k.to_string()]);
            }
            Ok(t)
        }
        _ => {
            let series = solver::count_series(a, b, c, &limits, opts)?;
            let fit = solver::fit_exponent(&series)?;
            let mut t = Table::new(&["slope", "intercept", "used", "heuristic"]);
            t.push(vec![
                sig(fit.slope),
                sig(fit.intercept),
                fit.used.to_string(),
                fit.heuristic.map(sig).unwrap_or_default(),
            ]);
            t.summary = json!({ "series": series });
            Ok(t)
        }
    }
}

fn intersect_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let specs = cfg.specs()?;
    let series = solver::intersection_series(&specs[0], &specs[1], &cfg.parsed_limits()?)?;
    let mut t = Table::new(&["n", "count"]);
    for (n, k) in &series.points {
        t.push(vec![n.to_string(), k.to_string()]);
    }
    Ok(t)
}

fn boxcount_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let specs = cfg.specs()?;
    let s = [&specs[0], &specs[1], &specs[2]];
    let r = match (&cfg.r, cfg.depth) {
        (Some(r), _) => parse_rational(r)?,
        (None, Some(d)) => BigRational::new(BigInt::one(), BigInt::one() << d as usize),
        (None, None) => unreachable!("resolve sets a depth"),
    };
    let product = fractal::box_count_product(s, &r)?;
    let dyadic = |k: u32| BigRational::new(BigInt::one(), BigInt::one() << k as usize);
    if cfg.command == Command::Boxcount {
        let mut t = Table::new(&["n", "r", "product_count"]);
        if product.per_depth.is_empty() {
            t.push(vec![String::new(), rat(&r), product.count.to_string()]);
        }
        for d in &product.per_depth {
            t.push(vec![d.depth.to_string(), rat(&dyadic(d.depth)), d.count.to_string()]);
        }
        t.summary = json!({ "convention": product.convention });
        return Ok(t);
    }
    let plane: PlaneSpec = cfg.plane.as_deref().unwrap_or("1,1,-1,0").parse()?;
    let slice = fractal::box_count_slice(&plane, s, &r)?;
    let mut t = Table::new(&["n", "r", "slice_count", "product_count"]);
    if slice.per_depth.is_empty() {
        t.push(vec![
            String::new(),
            rat(&r),
            slice.count.to_string(),
            product.count.to_string(),
        ]);
    }
    for (sd, pd) in slice.per_depth.iter().zip(&product.per_depth) {
        t.push(vec![
            sd.depth.to_string(),
            rat(&dyadic(sd.depth)),
            sd.count.to_string(),
            pd.count.to_string(),
        ]);
    }
    let mut summary = json!({
        "convention": slice.convention,
        "upper_bound": slice.upper_bound,
    });
    if let Some(n) = fractal::dyadic_depth(&r).filter(|&n| n >= 2) {
        let lo = (n / 2).max(1);
        summary["slice_exponent"] = json!(fractal::box_exponent(&slice.per_depth, lo..=n).ok());
        summary["product_exponent"] = json!(fractal::box_exponent(&product.per_depth, lo..=n).ok());
    }
    t.summary = summary;
    Ok(t)
}

fn sparseness_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let specs = cfg.specs()?;
    let plane: PlaneSpec = cfg.plane.as_deref().unwrap_or("1,1,-1,0").parse()?;
    let center = parse_point(cfg.center.as_deref().unwrap_or("0,0,0"))?;
    let depth = cfg.depth.unwrap_or(10);
    let p = fractal::sparseness_profile(&plane, [&specs[0], &specs[1], &specs[2]], &center, depth)?;
    let mut t = Table::new(&["k", "hit"]);
    for k in 1..=depth {
        t.push(vec![k.to_string(), u8::from(p.hits.contains(&k)).to_string()]);
    }
    t.summary = json!({ "density": p.density, "resolution": p.resolution });
    Ok(t)
}

fn normal_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let b: Vec<u64> = cfg.bases.iter().map(|&b| b as u64).collect();
    let n = cfg.n.unwrap_or(0);
    let nm = dynamics::renormalized_normal(b[0], b[1], b[2], n)?;
    let mut t = Table::new(&["n", "first", "second", "third"]);
    t.push(vec![n.to_string(), rat(&nm.first), rat(&nm.second), rat(&nm.third())]);
    t.summary = json!({ "k1": nm.k1, "k2": nm.k2, "in_box": nm.in_box(b[0], b[1]) });
    Ok(t)
}

/// `(ln a / ln b, ln a / ln c)` from the first three bases.
fn kronecker(cfg: &ExperimentConfig) -> Result<KroneckerSpec> {
    if cfg.bases.len() != 3 {
        return Err(Error::ConfigInvalid("orbit commands need bases a,b,c".into()));
    }
    let b: Vec<u64> = cfg.bases.iter().map(|&b| b as u64).collect();
    Ok(KroneckerSpec::new(
        Angle::log_ratio(b[0], b[1])?,
        Angle::log_ratio(b[0], b[2])?,
        cfg.precision(),
    ))
}

fn orbit_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let spec = kronecker(cfg)?;
    let orbit = dynamics::kronecker_orbit(&spec, cfg.n.unwrap_or(10))?;
    let mut t = Table::new(&["k", "u", "v", "u_width", "v_width"]);
    for p in &orbit {
        t.push(vec![
            p.k.to_string(),
            sig(p.u.mid_f64()),
            sig(p.v.mid_f64()),
            format!("{:.3e}", p.u.width_f64()),
            format!("{:.3e}", p.v.width_f64()),
        ]);
    }
    t.summary = json!({ "alpha": spec.alpha.to_string(), "beta": spec.beta.to_string() });
    Ok(t)
}

fn discrepancy_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let spec = kronecker(cfg)?;
    let lengths: Vec<u64> = cfg
        .parsed_limits()?
        .iter()
        .map(|n| {
            n.to_u64()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::ConfigInvalid(format!("bad orbit length {n}")))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["n", "d_n", "d_n_approx"]);
    for (n, d) in dynamics::discrepancy_series(&spec, &lengths)? {
        t.push(vec![n.to_string(), rat(&d), sig(d.to_f64().unwrap_or(f64::NAN))]);
    }
    t.summary = json!({ "grid_bits": dynamics::ORBIT_GRID_BITS });
    Ok(t)
}

fn squares_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let spec = kronecker(cfg)?;
    let n = cfg.n.unwrap_or(1000);
    let r = parse_rational(cfg.r.as_deref().unwrap_or("1/2"))?;
    if !r.numer().is_one() || !r.is_positive() {
        return Err(Error::ConfigInvalid(format!("r must be 1/m, got {r}")));
    }
    let m = r
        .denom()
        .to_u64()
        .ok_or_else(|| Error::ConfigInvalid("r too small".into()))?;
    let density = parse_f64(cfg.density.as_deref().unwrap_or("1"))?;
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::ConfigInvalid("density must lie in (0, 1]".into()));
    }
    let seed = cfg.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<u64> = (1..=n).filter(|_| rng.gen_bool(density)).collect();
    if w.is_empty() {
        w.push(1);
    }
    let rep = dynamics::occupied_squares(&w, &spec, n, m)?;
    let mut t = Table::new(&["n", "w", "m", "occupied", "star", "grid", "holds_star", "holds_grid"]);
    t.push(vec![
        rep.n.to_string(),
        rep.w.to_string(),
        rep.m.to_string(),
        rep.occupied.to_string(),
        rat(&rep.star),
        rat(&rep.grid),
        rep.holds_star.to_string(),
        rep.holds_grid.to_string(),
    ]);
    t.summary =
        json!({ "seed": seed, "r_from_star": dynamics::r_from_discrepancy(rep.star.to_f64().unwrap_or(f64::NAN)) });
    Ok(t)
}

fn parse_curve(cfg: &ExperimentConfig) -> Result<CurveSpec> {
    match cfg.curve.as_deref().unwrap_or("family") {
        "helix" => Ok(CurveSpec::helix(1.0, 1.0)),
        "circle" => Ok(CurveSpec::great_circle()),
        "family" => {
            let p = &cfg.params;
            if p.len() != 3 {
                return Err(Error::ConfigInvalid("family needs params c4,c5,q".into()));
            }
            let q = parse_rational(&p[2])?;
            let (qn, qd) = (q.numer().to_i64(), q.denom().to_i64());
            let (Some(qn), Some(qd)) = (qn, qd) else {
                return Err(Error::ConfigInvalid("q out of range".into()));
            };
            CurveSpec::family(parse_f64(&p[0])?, parse_f64(&p[1])?, qn, qd)
        }
        other => Err(Error::ConfigInvalid(format!("unknown curve {other:?}"))),
    }
}

fn geometry_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let theorem: Theorem = cfg.theorem.as_deref().unwrap_or("C1").parse()?;
    let deltas: Vec<f64> = cfg.deltas.iter().map(|s| parse_f64(s)).collect::<Result<_>>()?;
    let curve = if theorem.on_curve() {
        Some(parse_curve(cfg)?)
    } else {
        None
    };
    let seed = cfg.seed.unwrap_or(0);
    let reports = geometry::verify_across_deltas(
        cfg.dim.unwrap_or(3),
        &deltas,
        theorem,
        seed,
        cfg.calibration.unwrap_or(1.0),
        curve.as_ref(),
    )?;
    let mut t = Table::new(&["theorem", "d", "delta", "n", "lhs", "bound", "ratio", "seed"]);
    for r in &reports {
        t.push(vec![
            r.theorem.to_string(),
            r.d.to_string(),
            sig(r.delta),
            r.n.to_string(),
            r.lhs.to_string(),
            sig(r.bound),
            sig(r.ratio),
            r.seed.to_string(),
        ]);
    }
    if reports.len() >= 2 {
        let ds: Vec<f64> = reports.iter().map(|r| r.delta).collect();
        let lhs: Vec<f64> = reports.iter().map(|r| r.lhs as f64).collect();
        let bound: Vec<f64> = reports.iter().map(|r| r.bound).collect();
        t.summary = json!({
            "lhs_slope": geometry::slope_in_inverse_delta(&ds, &lhs),
            "bound_slope": geometry::slope_in_inverse_delta(&ds, &bound),
        });
    }
    Ok(t)
}

fn torsion_cmd(cfg: &ExperimentConfig) -> Result<Table> {
    let curve = parse_curve(cfg)?;
    let mut t = Table::new(&["t", "kappa", "tau", "plane_curvature"]);
    for s in &cfg.t {
        let ct = geometry::curvature_torsion(&curve, parse_f64(s)?)?;
        t.push(vec![
            s.clone(),
            sig(ct.kappa),
            sig(ct.tau),
            ct.plane_curvature.map(sig).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

/// Resolves, runs and writes one config.
pub fn run_config(cfg: ExperimentConfig) -> Result<Table> {
    let cfg = cfg.resolve();
    let table = execute(&cfg)?;
    emit(&cfg, &cfg.experiment_hash()?, cfg.out.as_deref(), &table)?;
    Ok(table)
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match cli.cmd {
        Cmd::Run { config } => match ExperimentConfig::load(&config) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        Cmd::Op(op) => {
            let (command, args) = (*op).split();
            ExperimentConfig::from_args(command, args)
        }
    };
    match run_config(cfg) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ConfigInvalid(_) => 2,
                Error::PrecisionExhausted { .. } => 3,
                _ => 1,
            }
        }
    }
}
