//! Sweep plans (JSON schema "v1") and their resolution into a
//! deterministic list of checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{ParamKind, Params, Point, PointKind, PointPair, TheoremId};

pub const SPEC_VERSION: &str = "v1";
pub const DEFAULT_SEED: u64 = 42;
const DEFAULT_PARAM_COUNT: usize = 20;

const PARAM_LO: f64 = 0.1;
const PARAM_HI: f64 = 3.0;

/// A sampling plan: which predicates, at which parameters, at which points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub version: String,
    pub theorems: TheoremSelection,
    pub params: ParamGrid,
    pub points: PointGrid,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverride>,
    /// Bound shifts applied after each check; only meant for harness
    /// self-tests.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Perturbation>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl SweepSpec {
    pub fn new(theorems: TheoremSelection, params: ParamGrid, points: PointGrid, seed: u64) -> Self {
        Self {
            version: SPEC_VERSION.to_string(),
            theorems,
            params,
            points,
            seed,
            tolerance: None,
            perturbations: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| Error::Config(format!("sweep spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != SPEC_VERSION {
            return Err(Error::Config(format!(
                "unsupported sweep spec version {:?}, expected {SPEC_VERSION:?}",
                self.version
            )));
        }
        if self.theorem_ids().is_empty() {
            return Err(Error::Config("sweep spec selects no theorems".into()));
        }
        self.params.validate()?;
        self.points.validate()?;
        if let Some(t) = &self.tolerance {
            for (name, v) in [("slack", t.slack), ("rel_tol", t.rel_tol)] {
                if let Some(v) = v {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::Config(format!("tolerance.{name} must be finite and >= 0, got {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn theorem_ids(&self) -> Vec<TheoremId> {
        match &self.theorems {
            TheoremSelection::All(_) => TheoremId::ALL.to_vec(),
            TheoremSelection::List(ids) => ids.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllKeyword {
    #[serde(rename = "all")]
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TheoremSelection {
    All(AllKeyword),
    List(Vec<TheoremId>),
}

impl TheoremSelection {
    pub fn all() -> Self {
        TheoremSelection::All(AllKeyword::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// One axis of a parameter product grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let s = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.lo + s * (self.hi - self.lo),
                    Scale::Log => (self.lo.ln() + s * (self.hi.ln() - self.lo.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Parameter grid. `default` draws `count` seeded samples from each
/// theorem's own hypothesis class; `explicit` and `ranges` list parameter
/// tuples directly and tuples outside a theorem's hypothesis are skipped.
/// Tuples of length three feed triple theorems and tuples of length two feed
/// pair theorems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamGrid {
    Default {
        #[serde(default = "default_param_count")]
        count: usize,
    },
    Explicit {
        values: Vec<Vec<f64>>,
    },
    Ranges {
        axes: Vec<Axis>,
    },
}

fn default_param_count() -> usize {
    DEFAULT_PARAM_COUNT
}

impl ParamGrid {
    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        match self {
            ParamGrid::Default { count } => {
                if *count == 0 {
                    return Err(Error::Config("params.count must be positive".into()));
                }
            }
            ParamGrid::Explicit { values } => {
                for v in values {
                    if !(v.len() == 2 || v.len() == 3) || !v.iter().all(|&p| positive(p)) {
                        return Err(Error::Config(format!(
                            "explicit parameters must be 2 or 3 positive numbers, got {v:?}"
                        )));
                    }
                }
            }
            ParamGrid::Ranges { axes } => {
                if !(axes.len() == 2 || axes.len() == 3) {
                    return Err(Error::Config("params.axes must have 2 or 3 entries".into()));
                }
                for a in axes {
                    if !(positive(a.lo) && positive(a.hi) && a.lo <= a.hi && a.count > 0) {
                        return Err(Error::Config(format!("invalid parameter axis {a:?}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Argument sampling scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointGrid {
    /// A `k × k` midpoint grid with `k = ceil(sqrt(count))`.
    UniformGrid { count: usize },
    /// The first `count` points of the base-(2, 3) Halton sequence.
    LowDiscrepancy { count: usize },
    /// Seeded random points, a quarter near the origin corner, a quarter
    /// near the `x = 1` or `y = 1` edges and the rest uniform.
    CornerBiased { count: usize },
    Explicit { points: Vec<[f64; 2]> },
}

impl PointGrid {
    fn validate(&self) -> Result<()> {
        match self {
            PointGrid::UniformGrid { count } | PointGrid::LowDiscrepancy { count } | PointGrid::CornerBiased { count } => {
                if *count == 0 {
                    return Err(Error::Config("points.count must be positive".into()));
                }
            }
            PointGrid::Explicit { points } => {
                for p in points {
                    PointPair::new(p[0], p[1]).map_err(|e| Error::Config(format!("explicit point {p:?}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    /// Resolve to concrete points in a fixed order.
    pub fn resolve(&self, seed: u64) -> Result<Vec<PointPair>> {
        let raw: Vec<(f64, f64)> = match self {
            PointGrid::UniformGrid { count } => {
                let k = (*count as f64).sqrt().ceil() as usize;
                let h = 1.0 / k as f64;
                (0..k)
                    .flat_map(|i| (0..k).map(move |j| ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)))
                    .collect()
            }
            PointGrid::LowDiscrepancy { count } => {
                (1..=*count as u64).map(|i| (radical_inverse(i, 2), radical_inverse(i, 3))).collect()
            }
            PointGrid::CornerBiased { count } => corner_biased(*count, seed),
            PointGrid::Explicit { points } => points.iter().map(|p| (p[0], p[1])).collect(),
        };
        raw.into_iter().map(|(x, y)| PointPair::new(x, y)).collect()
    }
}

/// Van der Corput radical inverse of `i` in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = rng.gen();
        if v > 0.0 {
            return v;
        }
    }
}

fn corner_biased(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = rng_for(seed, 1);
    let low = count / 4;
    let high = count / 4;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (mut x, mut y) = if i < low {
            let x = log_uniform(&mut rng, 1e-6, 1e-2);
            let y = if rng.gen_bool(0.5) { log_uniform(&mut rng, 1e-6, 1e-2) } else { open_unit(&mut rng) };
            (x, y)
        } else if i < low + high {
            let x = 1.0 - log_uniform(&mut rng, 1e-7, 1e-2);
            let y = if rng.gen_bool(0.5) { 1.0 - log_uniform(&mut rng, 1e-7, 1e-2) } else { open_unit(&mut rng) };
            (x, y)
        } else {
            (open_unit(&mut rng), open_unit(&mut rng))
        };
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut x, &mut y);
        }
        out.push((x, y));
    }
    out
}

/// Sampling class used by the default parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ParamClass {
    AnyTriple,
    ConvergentTriple,
    AnyPair,
    ProductAtMostOne,
    HarmonicAtMostTwo,
}

impl ParamClass {
    pub(crate) fn of(id: TheoremId) -> Self {
        use TheoremId::*;
        match id {
            T1_1 => ParamClass::AnyTriple,
            T1_2 => ParamClass::ConvergentTriple,
            T1_3 | T3_2 => ParamClass::AnyPair,
            T3_3_1 | T3_4 | T3_5_1 | T3_6_1 | C3_8_1 | T3_9_1 | R3_7 => ParamClass::ProductAtMostOne,
            T3_3_2 | T3_5_2 | T3_6_2 | C3_8_2 | T3_9_2 => ParamClass::HarmonicAtMostTwo,
        }
    }

    fn stream(self) -> u64 {
        10 + self as u64
    }

    /// `count` seeded samples; the pair classes bounded by `(1,1)` include
    /// it as their last element.
    pub(crate) fn sample(self, count: usize, seed: u64) -> Vec<Params> {
        let mut rng = rng_for(seed, self.stream());
        let mut u = move |lo: f64, hi: f64| rng.gen_range(lo..=hi);
        let with_one_one = matches!(self, ParamClass::ProductAtMostOne | ParamClass::HarmonicAtMostTwo);
        let random = if with_one_one { count.saturating_sub(1) } else { count };
        let mut out: Vec<Params> = (0..random)
            .map(|_| match self {
                ParamClass::AnyTriple => Params::Triple {
                    a: u(PARAM_LO, PARAM_HI),
                    b: u(PARAM_LO, PARAM_HI),
                    c: u(PARAM_LO, PARAM_HI),
                },
                ParamClass::ConvergentTriple => {
                    let a = u(PARAM_LO, PARAM_HI);
                    let b = u(PARAM_LO, PARAM_HI);
                    Params::Triple { a, b, c: a + b + u(0.05, PARAM_HI) }
                }
                ParamClass::AnyPair => Params::Pair {
                    c: u(PARAM_LO, PARAM_HI),
                    d: u(PARAM_LO, PARAM_HI),
                },
                ParamClass::ProductAtMostOne => {
                    let c = u(PARAM_LO.ln(), (1.0 / PARAM_LO).ln()).exp();
                    Params::Pair { c, d: u(0.05, 1.0) / c }
                }
                ParamClass::HarmonicAtMostTwo => {
                    let c = u(0.55, PARAM_HI);
                    let d_min = c / (2.0 * c - 1.0);
                    Params::Pair { c, d: d_min + u(0.0, PARAM_HI) }
                }
            })
            .collect();
        if with_one_one && count > 0 {
            out.push(Params::Pair { c: 1.0, d: 1.0 });
        }
        out
    }
}

/// Tolerance overrides for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
}

/// Shift of a theorem's bounds, applied after evaluation. A positive
/// `lower_shift` or a negative `upper_shift` tightens the predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub theorem: TheoremId,
    #[serde(default)]
    pub lower_shift: f64,
    #[serde(default)]
    pub upper_shift: f64,
}

/// One resolved unit of work.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Task {
    pub id: TheoremId,
    pub params: Params,
    pub point: Point,
}

fn params_for(id: TheoremId, grid: &ParamGrid, seed: u64) -> Vec<Params> {
    let from_tuple = |v: &[f64]| match (id.param_kind(), v.len()) {
        (ParamKind::Triple, 3) => Some(Params::Triple { a: v[0], b: v[1], c: v[2] }),
        (ParamKind::Pair, 2) => Some(Params::Pair { c: v[0], d: v[1] }),
        _ => None,
    };
    match grid {
        ParamGrid::Default { count } => ParamClass::of(id).sample(*count, seed),
        ParamGrid::Explicit { values } => values.iter().filter_map(|v| from_tuple(v)).collect(),
        ParamGrid::Ranges { axes } => {
            let mut tuples: Vec<Vec<f64>> = vec![Vec::new()];
            for axis in axes {
                let vals = axis.values();
                tuples = tuples
                    .iter()
                    .flat_map(|t| {
                        vals.iter().map(move |&v| {
                            let mut n = t.clone();
                            n.push(v);
                            n
                        })
                    })
                    .collect();
            }
            tuples.iter().filter_map(|v| from_tuple(v)).collect()
        }
    }
}

/// Expand a validated spec into checks: theorem-major, then parameters,
/// then points. Scalar predicates use each point's `x` as `t`.
pub(crate) fn resolve(spec: &SweepSpec) -> Result<Vec<Task>> {
    let points = spec.points.resolve(spec.seed)?;
    let mut tasks = Vec::new();
    for id in spec.theorem_ids() {
        for params in params_for(id, &spec.params, spec.seed) {
            match id.point_kind() {
                PointKind::Pair => tasks.extend(points.iter().map(|p| Task {
                    id,
                    params,
                    point: Point::Pair(*p),
                })),
                PointKind::Scalar => tasks.extend(points.iter().map(|p| Task {
                    id,
                    params,
                    point: Point::Scalar(p.x()),
                })),
                PointKind::None => tasks.push(Task {
                    id,
                    params,
                    point: Point::None,
                }),
            }
        }
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec_json() -> &'static str {
        r#"{"version":"v1","theorems":["T1_1","T3_5_1"],"params":{"kind":"default","count":3},
            "points":{"scheme":"corner_biased","count":8},"seed":7}"#
    }

    #[test]
    fn parses_and_round_trips() {
        let spec = SweepSpec::from_json(spec_json()).unwrap();
        assert_eq!(spec.theorem_ids(), vec![TheoremId::T1_1, TheoremId::T3_5_1]);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(SweepSpec::from_json(&text).unwrap(), spec);

        let all = r#"{"version":"v1","theorems":"all","params":{"kind":"default"},"points":{"scheme":"uniform_grid","count":4}}"#;
        let spec = SweepSpec::from_json(all).unwrap();
        assert_eq!(spec.theorem_ids().len(), 16);
        assert_eq!(spec.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad_version = spec_json().replace("\"v1\"", "\"v2\"");
        assert!(matches!(SweepSpec::from_json(&bad_version), Err(Error::Config(_))));
        let unknown = spec_json().replace("\"seed\"", "\"sede\"");
        assert!(SweepSpec::from_json(&unknown).is_err());
        let bad_point = r#"{"version":"v1","theorems":"all","params":{"kind":"default"},"points":{"scheme":"explicit","points":[[0.5,1.5]]}}"#;
        assert!(SweepSpec::from_json(bad_point).is_err());
    }

    #[test]
    fn resolution_is_deterministic_and_ordered() {
        let spec = SweepSpec::from_json(spec_json()).unwrap();
        let a = resolve(&spec).unwrap();
        let b = resolve(&spec).unwrap();
        assert_eq!(a, b);
        // T1_1: 3 triples x 8 points; T3_5_1: 2 random pairs + (1,1), x 8 points.
        assert_eq!(a.len(), 48);
        assert!(a[..24].iter().all(|t| t.id == TheoremId::T1_1));
        assert_eq!(a[47].params, Params::Pair { c: 1.0, d: 1.0 });
    }

    #[test]
    fn corner_biased_quotas() {
        let pts = PointGrid::CornerBiased { count: 400 }.resolve(3).unwrap();
        let low = pts.iter().filter(|p| p.x().min(p.y()) < 0.01).count();
        let high = pts.iter().filter(|p| p.x().max(p.y()) > 0.99).count();
        assert!(low >= 100, "{low}");
        assert!(high >= 100, "{high}");
        assert!(pts.iter().any(|p| p.x() < 0.01 && p.y() < 0.01));
        assert_ne!(pts, PointGrid::CornerBiased { count: 400 }.resolve(4).unwrap());
    }

    #[test]
    fn sampled_classes_satisfy_their_conditions() {
        for p in ParamClass::ProductAtMostOne.sample(50, 1) {
            let (c, d, _) = p.columns();
            assert!(c * d <= 1.0 + 1e-15);
        }
        for p in ParamClass::HarmonicAtMostTwo.sample(50, 1) {
            let (c, d, _) = p.columns();
            assert!(1.0 / c + 1.0 / d <= 2.0 + 1e-12);
        }
        for p in ParamClass::ConvergentTriple.sample(50, 1) {
            let (a, b, c) = p.columns();
            assert!(c > a + b);
        }
    }

    #[test]
    fn halton_and_grid() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
        assert_eq!(PointGrid::UniformGrid { count: 10 }.resolve(0).unwrap().len(), 16);
    }

    #[test]
    fn ranges_filter_by_shape() {
        let grid = ParamGrid::Ranges {
            axes: vec![
                Axis { lo: 0.5, hi: 2.0, count: 3, scale: Scale::Log },
                Axis { lo: 0.5, hi: 0.5, count: 1, scale: Scale::Linear },
            ],
        };
        let p = params_for(TheoremId::T3_2, &grid, 0);
        assert_eq!(p.len(), 3);
        assert!(matches!(p[1], Params::Pair { c, .. } if (c - 1.0).abs() < 1e-15));
        assert!(params_for(TheoremId::T1_1, &grid, 0).is_empty());
    }
}
