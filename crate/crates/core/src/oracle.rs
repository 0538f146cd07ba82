//! Ground-truth searches over code pairs: exhaustive enumeration at small
//! dimension, seeded local search beyond it, and the named constructions.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{binomial, hamming_ball, subcube, BinaryCode, CubeSymmetry};
use crate::distance::distance_distribution;
use crate::error::{invalid, Error, Result};
use crate::fourier::fwht;
use crate::nis::{check_rho, collision_prob, DsbsInstance};

/// Largest dimension searched exhaustively.
pub const MAX_EXHAUSTIVE_DIM: u32 = 4;
/// Largest dimension for local search.
pub const MAX_LOCAL_SEARCH_DIM: u32 = 16;
/// Packed histogram lane width; pair counts never exceed `2^8`.
const LANE_BITS: u32 = 12;
const LANE_MASK: u64 = (1 << LANE_BITS) - 1;
/// Hill-climbing moves must improve by more than this relative amount.
const IMPROVEMENT_EPS: f64 = 1e-13;

/// What the search optimizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Objective {
    /// `q = P(f(X) = g(Y) = 1)` at correlation `rho`.
    Collision { rho: f64 },
    /// Average distance `D(A, B)`.
    Distance,
}

impl Objective {
    fn validate(&self) -> Result<()> {
        match self {
            Objective::Collision { rho } => check_rho(*rho),
            Objective::Distance => Ok(()),
        }
    }

    fn rho(&self) -> Option<f64> {
        match self {
            Objective::Collision { rho } => Some(*rho),
            Objective::Distance => None,
        }
    }

    /// Per-pair weights by distance, so that the objective is
    /// `Σ_{x∈A, y∈B} w[d(x, y)]`.
    fn pair_weights(&self, n: u32, m: usize, k: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Objective::Collision { rho } => DsbsInstance::new(*rho, n)?.pair_weights(),
            Objective::Distance => {
                let pairs = (m * k) as f64;
                (0..=n).map(|d| d as f64 / pairs).collect()
            }
        })
    }
}

/// Which extremum a local search pursues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Max,
    Min,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub a: BinaryCode,
    pub b: BinaryCode,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    pub pairs_evaluated: u64,
    pub orbits: u64,
    /// Not serialized, so that results are byte-for-byte reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Timing is excluded: two runs with equal counts compare equal.
impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        self.pairs_evaluated == other.pairs_evaluated && self.orbits == other.orbits
    }
}

/// Extremal values for one `(n, M, N)` configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: u32,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n_b: usize,
    pub rho: Option<f64>,
    pub max_q: Option<f64>,
    pub min_q: Option<f64>,
    #[serde(rename = "max_D")]
    pub max_d: Option<f64>,
    #[serde(rename = "min_D")]
    pub min_d: Option<f64>,
    pub max_witness: Option<WitnessPair>,
    pub min_witness: Option<WitnessPair>,
    pub exhaustive: bool,
    pub stats: SearchStats,
}

impl OracleResult {
    /// The extremum in `direction`, whichever objective was searched.
    pub fn value(&self, direction: Direction) -> Option<f64> {
        match direction {
            Direction::Max => self.max_q.or(self.max_d),
            Direction::Min => self.min_q.or(self.min_d),
        }
    }

    pub fn witness(&self, direction: Direction) -> Option<&WitnessPair> {
        match direction {
            Direction::Max => self.max_witness.as_ref(),
            Direction::Min => self.min_witness.as_ref(),
        }
    }
}

fn check_sizes(n: u32, m: usize, k: usize) -> Result<()> {
    let points = 1usize << n;
    if m == 0 || k == 0 || m > points || k > points {
        return Err(invalid(format!(
            "code sizes ({m}, {k}) must lie in [1, {points}] for n = {n}"
        )));
    }
    Ok(())
}

/// `S <_lex T` for equal-size point sets: the smallest point in the
/// symmetric difference belongs to `S`. Matches the order on sorted words.
fn mask_lex_cmp(s: u32, t: u32) -> Ordering {
    if s == t {
        return Ordering::Equal;
    }
    let low = (s ^ t) & (s ^ t).wrapping_neg();
    if s & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// All `k`-subsets of `points` points, as masks, in increasing numeric order.
fn subsets(points: u32, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << points;
    let mut v: u64 = (1u64 << k) - 1;
    std::iter::from_fn(move || {
        if v >= limit {
            return None;
        }
        let out = v as u32;
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
        Some(out)
    })
}

fn mask_image(mask: u32, table: &[u8]) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros();
        out |= 1 << table[p as usize];
        m &= m - 1;
    }
    out
}

fn mask_to_code(n: u32, mask: u32) -> BinaryCode {
    let words = (0..1u64 << n).filter(|&p| mask >> p & 1 == 1).collect();
    BinaryCode::from_sorted_unchecked(n, words)
}

/// Orbit representatives of the `m`-subsets under the cube symmetries: the
/// lexicographically smallest member of each orbit.
fn canonical_masks(n: u32, m: usize) -> Result<Vec<u32>> {
    let tables: Vec<Vec<u8>> = CubeSymmetry::all(n)?
        .iter()
        .map(|g| (0..1u64 << n).map(|p| g.apply_word(p) as u8).collect())
        .collect();
    let all: Vec<u32> = subsets(1 << n, m).collect();
    Ok(all
        .into_par_iter()
        .filter(|&mask| {
            tables
                .iter()
                .all(|t| mask_lex_cmp(mask_image(mask, t), mask) != Ordering::Less)
        })
        .collect())
}

/// A candidate optimum: objective value plus the pair, for ordering.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    value: f64,
    a: u32,
    b: u32,
}

/// `Less` means `x` is preferred: better value, then lexicographically
/// smaller `(A, B)`.
fn prefer(x: &Candidate, y: &Candidate, direction: Direction) -> Ordering {
    let by_value = match direction {
        Direction::Max => y.value.total_cmp(&x.value),
        Direction::Min => x.value.total_cmp(&y.value),
    };
    by_value
        .then_with(|| mask_lex_cmp(x.a, y.a))
        .then_with(|| mask_lex_cmp(x.b, y.b))
}

fn better(x: Candidate, y: Candidate, direction: Direction) -> Candidate {
    if prefer(&y, &x, direction) == Ordering::Less {
        y
    } else {
        x
    }
}

/// Exact extremes over all pairs `(A, B)` with `|A| = m`, `|B| = k` in
/// dimension `n ≤ 4`. `A` ranges over orbit representatives.
pub fn exhaustive_extremes(n: u32, m: usize, k: usize, objective: Objective) -> Result<OracleResult> {
    let started = Instant::now();
    if n == 0 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_EXHAUSTIVE_DIM,
        });
    }
    if n > MAX_EXHAUSTIVE_DIM {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive search is limited to n ≤ {MAX_EXHAUSTIVE_DIM} (got n = {n}); use local search instead"
        )));
    }
    check_sizes(n, m, k)?;
    objective.validate()?;

    let points = 1u32 << n;
    let weights = objective.pair_weights(n, m, k)?;
    let reps = canonical_masks(n, m)?;
    let b_masks: Vec<u32> = subsets(points, k).collect();

    let value_of = |hist: u64| -> f64 {
        match objective {
            Objective::Collision { .. } => (0..=n)
                .map(|d| ((hist >> (d * LANE_BITS)) & LANE_MASK) as f64 * weights[d as usize])
                .sum(),
            Objective::Distance => {
                let total: u64 = (0..=n)
                    .map(|d| ((hist >> (d * LANE_BITS)) & LANE_MASK) * d as u64)
                    .sum();
                total as f64 / (m * k) as f64
            }
        }
    };

    let per_rep = |&a: &u32| -> (Candidate, Candidate) {
        // packed[y] holds, lane d, the number of x ∈ A with d(x, y) = d
        let packed: Vec<u64> = (0..points)
            .map(|y| {
                let mut acc = 0u64;
                let mut mm = a;
                while mm != 0 {
                    let x = mm.trailing_zeros();
                    acc += 1u64 << ((x ^ y).count_ones() * LANE_BITS);
                    mm &= mm - 1;
                }
                acc
            })
            .collect();
        let mut best_max: Option<Candidate> = None;
        let mut best_min: Option<Candidate> = None;
        for &b in &b_masks {
            let mut hist = 0u64;
            let mut mm = b;
            while mm != 0 {
                hist += packed[mm.trailing_zeros() as usize];
                mm &= mm - 1;
            }
            let cand = Candidate {
                value: value_of(hist),
                a,
                b,
            };
            best_max = Some(best_max.map_or(cand, |c| better(c, cand, Direction::Max)));
            best_min = Some(best_min.map_or(cand, |c| better(c, cand, Direction::Min)));
        }
        (best_max.expect("nonempty"), best_min.expect("nonempty"))
    };

    let (best_max, best_min) = reps
        .par_iter()
        .map(per_rep)
        .reduce_with(|(x1, y1), (x2, y2)| {
            (better(x1, x2, Direction::Max), better(y1, y2, Direction::Min))
        })
        .expect("at least one orbit");

    let witness = |c: Candidate| WitnessPair {
        a: mask_to_code(n, c.a),
        b: mask_to_code(n, c.b),
    };
    let stats = SearchStats {
        pairs_evaluated: reps.len() as u64 * b_masks.len() as u64,
        orbits: reps.len() as u64,
        wall_time: started.elapsed(),
    };
    let (max_v, min_v) = (Some(best_max.value), Some(best_min.value));
    let is_collision = matches!(objective, Objective::Collision { .. });
    Ok(OracleResult {
        n,
        m,
        n_b: k,
        rho: objective.rho(),
        max_q: if is_collision { max_v } else { None },
        min_q: if is_collision { min_v } else { None },
        max_d: if is_collision { None } else { max_v },
        min_d: if is_collision { None } else { min_v },
        max_witness: Some(witness(best_max)),
        min_witness: Some(witness(best_min)),
        exhaustive: true,
        stats,
    })
}

/// Exact extremes of the average distance `D(A, B)`.
pub fn exhaustive_distance_extremes(n: u32, m: usize, k: usize) -> Result<OracleResult> {
    exhaustive_extremes(n, m, k, Objective::Distance)
}

/// Re-evaluates an objective on explicit codes through the public paths.
pub fn evaluate(a: &BinaryCode, b: &BinaryCode, objective: Objective) -> Result<f64> {
    match objective {
        Objective::Collision { rho } => collision_prob(a, b, rho),
        Objective::Distance => Ok(distance_distribution(a, b)?.average()),
    }
}

/// Settings for [`local_search`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    pub seed: u64,
    /// Random restarts in addition to the structured seed.
    pub restarts: usize,
    /// Cap on swaps per restart.
    pub max_moves: usize,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 16,
            max_moves: 100_000,
        }
    }
}

/// `λ(z) = Σ_{y∈S} w[d(z, y)]` for all `z`, via XOR convolution.
fn neighbourhood_sums(n: u32, members: &[bool], weights: &[f64]) -> Vec<f64> {
    let mut kernel: Vec<f64> = (0..1usize << n).map(|u| weights[u.count_ones() as usize]).collect();
    let mut ind: Vec<f64> = members.iter().map(|&x| if x { 1.0 } else { 0.0 }).collect();
    fwht(&mut kernel);
    fwht(&mut ind);
    let mut conv: Vec<f64> = kernel.iter().zip(&ind).map(|(k, i)| k * i).collect();
    fwht(&mut conv);
    let scale = (1u64 << n) as f64;
    conv.iter_mut().for_each(|v| *v /= scale);
    conv
}

struct ClimbState {
    n: u32,
    in_a: Vec<bool>,
    in_b: Vec<bool>,
    /// Sums over `A`, used when moving points of `B`.
    lam_a: Vec<f64>,
    lam_b: Vec<f64>,
}

impl ClimbState {
    fn new(n: u32, in_a: Vec<bool>, in_b: Vec<bool>, weights: &[f64]) -> Self {
        let lam_a = neighbourhood_sums(n, &in_a, weights);
        let lam_b = neighbourhood_sums(n, &in_b, weights);
        Self {
            n,
            in_a,
            in_b,
            lam_a,
            lam_b,
        }
    }

    fn value(&self) -> f64 {
        self.in_a
            .iter()
            .zip(&self.lam_b)
            .filter(|(&m, _)| m)
            .map(|(_, &l)| l)
            .sum()
    }

    fn codes(&self) -> WitnessPair {
        let collect = |members: &[bool]| {
            let words = (0..members.len() as u64).filter(|&p| members[p as usize]).collect();
            BinaryCode::from_sorted_unchecked(self.n, words)
        };
        WitnessPair {
            a: collect(&self.in_a),
            b: collect(&self.in_b),
        }
    }
}

/// Best swap `(out, in, gain)` for one side: remove `out` from the set,
/// add `in`, with the change in objective `gain` measured in `direction`.
fn best_swap(members: &[bool], lam: &[f64], direction: Direction) -> Option<(usize, usize, f64)> {
    let sign = match direction {
        Direction::Max => 1.0,
        Direction::Min => -1.0,
    };
    let mut worst_in: Option<(usize, f64)> = None;
    let mut best_out: Option<(usize, f64)> = None;
    for (p, (&m, &l)) in members.iter().zip(lam).enumerate() {
        let score = sign * l;
        if m {
            if worst_in.is_none_or(|(_, s)| score < s) {
                worst_in = Some((p, score));
            }
        } else if best_out.is_none_or(|(_, s)| score > s) {
            best_out = Some((p, score));
        }
    }
    let ((out, s_out), (inn, s_in)) = (worst_in?, best_out?);
    Some((out, inn, s_in - s_out))
}

fn apply_swap(members: &mut [bool], lam_other: &mut [f64], weights: &[f64], out: usize, inn: usize) {
    members[out] = false;
    members[inn] = true;
    for (u, l) in lam_other.iter_mut().enumerate() {
        *l += weights[(u ^ inn).count_ones() as usize] - weights[(u ^ out).count_ones() as usize];
    }
}

fn climb(state: &mut ClimbState, weights: &[f64], direction: Direction, max_moves: usize) {
    for _ in 0..max_moves {
        let scale = state.value().abs().max(f64::MIN_POSITIVE);
        let move_a = best_swap(&state.in_a, &state.lam_b, direction);
        let move_b = best_swap(&state.in_b, &state.lam_a, direction);
        let pick_a = match (move_a, move_b) {
            (Some(x), Some(y)) => x.2 >= y.2,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => return,
        };
        let (out, inn, gain) = if pick_a { move_a } else { move_b }.expect("checked");
        if gain <= IMPROVEMENT_EPS * scale {
            return;
        }
        if pick_a {
            apply_swap(&mut state.in_a, &mut state.lam_a, weights, out, inn);
        } else {
            apply_swap(&mut state.in_b, &mut state.lam_b, weights, out, inn);
        }
    }
}

fn log2_exact(x: usize) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

/// Structured starting point: subcubes of the requested sizes, antipodal
/// for minimization; `None` when a size is not a power of two.
fn structured_start(n: u32, m: usize, k: usize, direction: Direction) -> Result<Option<(Vec<bool>, Vec<bool>)>> {
    let (Some(lm), Some(lk)) = (log2_exact(m), log2_exact(k)) else {
        return Ok(None);
    };
    let a = subcube(n, n - lm)?;
    let b = subcube(n, n - lk)?;
    let b = match direction {
        Direction::Max => b,
        Direction::Min => b.star(),
    };
    let members = |c: &BinaryCode| {
        let mut v = vec![false; 1 << n];
        c.words().iter().for_each(|&w| v[w as usize] = true);
        v
    };
    Ok(Some((members(&a), members(&b))))
}

/// Steepest-ascent single-swap hill climbing from a structured start and
/// seeded random restarts. The result is a one-sided bound on the optimum.
pub fn local_search(
    n: u32,
    m: usize,
    k: usize,
    objective: Objective,
    direction: Direction,
    cfg: &LocalSearchConfig,
) -> Result<OracleResult> {
    let started = Instant::now();
    if n == 0 || n > MAX_LOCAL_SEARCH_DIM {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_LOCAL_SEARCH_DIM,
        });
    }
    check_sizes(n, m, k)?;
    objective.validate()?;
    let weights = objective.pair_weights(n, m, k)?;
    let points = 1usize << n;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = Vec::new();
    if let Some(s) = structured_start(n, m, k, direction)? {
        starts.push(s);
    }
    for _ in 0..cfg.restarts {
        let mut pick = |size| {
            let mut v = vec![false; points];
            sample(&mut rng, points, size).into_iter().for_each(|p| v[p] = true);
            v
        };
        let a = pick(m);
        let b = pick(k);
        starts.push((a, b));
    }
    let runs = starts.len() as u64;

    let finals: Vec<(f64, WitnessPair)> = starts
        .into_par_iter()
        .map(|(a, b)| {
            let mut st = ClimbState::new(n, a, b, &weights);
            climb(&mut st, &weights, direction, cfg.max_moves);
            let w = st.codes();
            evaluate(&w.a, &w.b, objective).map(|v| (v, w))
        })
        .collect::<Result<_>>()?;

    let pick_better = |x: (f64, WitnessPair), y: (f64, WitnessPair)| {
        let by_value = match direction {
            Direction::Max => y.0.total_cmp(&x.0),
            Direction::Min => x.0.total_cmp(&y.0),
        };
        let ord = by_value
            .then_with(|| x.1.a.words().cmp(y.1.a.words()))
            .then_with(|| x.1.b.words().cmp(y.1.b.words()));
        if ord == Ordering::Greater {
            y
        } else {
            x
        }
    };
    let (value, witness) = finals
        .into_iter()
        .reduce(pick_better)
        .ok_or_else(|| invalid("local search needs at least one start"))?;

    let is_collision = matches!(objective, Objective::Collision { .. });
    let mut result = OracleResult {
        n,
        m,
        n_b: k,
        rho: objective.rho(),
        max_q: None,
        min_q: None,
        max_d: None,
        min_d: None,
        max_witness: None,
        min_witness: None,
        exhaustive: false,
        stats: SearchStats {
            pairs_evaluated: 0,
            orbits: runs,
            wall_time: Duration::ZERO,
        },
    };
    match (direction, is_collision) {
        (Direction::Max, true) => result.max_q = Some(value),
        (Direction::Min, true) => result.min_q = Some(value),
        (Direction::Max, false) => result.max_d = Some(value),
        (Direction::Min, false) => result.min_d = Some(value),
    }
    match direction {
        Direction::Max => result.max_witness = Some(witness),
        Direction::Min => result.min_witness = Some(witness),
    }
    result.stats.wall_time = started.elapsed();
    Ok(result)
}

/// The explicit schemes used as reference curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `f = g` = indicator of `x_1 = … = x_i = +1`.
    SymmetricSubcube,
    /// `f` as above, `g(x) = f(−x)`.
    AntisymmetricSubcube,
    /// `f = g` = indicator of the largest Hamming ball of volume `≤ 2^{n−i}`.
    HammingBallPair,
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric-subcube" => Ok(Self::SymmetricSubcube),
            "antisymmetric-subcube" => Ok(Self::AntisymmetricSubcube),
            "hamming-ball-pair" => Ok(Self::HammingBallPair),
            other => Err(invalid(format!("unknown construction {other:?}"))),
        }
    }
}

/// Largest radius whose ball volume does not exceed `2^{n−i}`.
pub fn hamming_ball_radius(n: u32, i: u32) -> Result<u32> {
    if n == 0 || n > 64 || i > n {
        return Err(invalid(format!("need 1 ≤ n ≤ 64 and i ≤ n, got n = {n}, i = {i}")));
    }
    let budget = 1u128 << (n - i);
    let mut volume = 0u128;
    let mut radius = None;
    for r in 0..=n {
        volume += binomial(n, r);
        if volume > budget {
            break;
        }
        radius = Some(r);
    }
    radius.ok_or_else(|| invalid("no ball fits the volume budget"))
}

/// Volume fraction of the radius-`r` ball.
pub fn hamming_ball_density(n: u32, r: u32) -> f64 {
    (0..=r.min(n)).map(|j| binomial(n, j) as f64).sum::<f64>() / 2f64.powi(n as i32)
}

fn binomial_pmf(n: u32, k: u32, p: f64) -> f64 {
    binomial(n, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// `q` for `f = g` = the radius-`r` ball, summed over the weight of `X`:
/// noise flips `j` of its ones and `k` of its zeros.
pub fn hamming_ball_collision(n: u32, r: u32, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if n == 0 || n > 64 || r > n {
        return Err(invalid(format!("need 1 ≤ n ≤ 64 and r ≤ n, got n = {n}, r = {r}")));
    }
    let e = (1.0 - rho) / 2.0;
    let cube = 2f64.powi(n as i32);
    let mut q = 0.0;
    for w in 0..=r {
        let zeros_cdf: Vec<f64> = (0..=n - w)
            .scan(0.0, |acc, k| {
                *acc += binomial_pmf(n - w, k, e);
                Some(*acc)
            })
            .collect();
        let inner: f64 = (0..=w)
            .map(|j| {
                // weight of Y is w − j + k ≤ r  ⇔  k ≤ r − w + j
                let cap = ((r - w + j) as usize).min((n - w) as usize);
                binomial_pmf(w, j, e) * zeros_cdf[cap]
            })
            .sum();
        q += binomial(n, w) as f64 / cube * inner;
    }
    Ok(q)
}

/// `q` of a named construction with `i` pinned coordinates (or ball volume
/// budget `2^{n−i}`) in dimension `n`.
pub fn construction_value(kind: Construction, n: u32, i: u32, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if n == 0 || i > n {
        return Err(invalid(format!("need n ≥ 1 and i ≤ n, got n = {n}, i = {i}")));
    }
    match kind {
        Construction::SymmetricSubcube | Construction::AntisymmetricSubcube => {
            if i == 0 {
                return Ok(1.0);
            }
            // coordinates beyond the pinned ones are free and leave q unchanged
            let (a, b) = construction_codes(kind, i, i)?;
            collision_prob(&a, &b, rho)
        }
        Construction::HammingBallPair => hamming_ball_collision(n, hamming_ball_radius(n, i)?, rho),
    }
}

/// Explicit codes of a construction.
pub fn construction_codes(kind: Construction, n: u32, i: u32) -> Result<(BinaryCode, BinaryCode)> {
    match kind {
        Construction::SymmetricSubcube => {
            let a = subcube(n, i)?;
            Ok((a.clone(), a))
        }
        Construction::AntisymmetricSubcube => {
            let a = subcube(n, i)?;
            let b = a.star();
            Ok((a, b))
        }
        Construction::HammingBallPair => {
            let ball = hamming_ball(n, 0, hamming_ball_radius(n, i)?)?;
            Ok((ball.clone(), ball))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerates_binomial_many_in_order() {
        for (p, k) in [(4u32, 2usize), (8, 3), (16, 8), (16, 16), (16, 1)] {
            let v: Vec<u32> = subsets(p, k).collect();
            assert_eq!(v.len() as u128, binomial(p, k as u32));
            assert!(v.windows(2).all(|w| w[0] < w[1]));
            assert!(v.iter().all(|m| m.count_ones() as usize == k));
        }
    }

    #[test]
    fn mask_order_matches_word_order() {
        let masks: Vec<u32> = subsets(8, 3).collect();
        for &s in &masks {
            for &t in &masks {
                let cs = mask_to_code(3, s);
                let ct = mask_to_code(3, t);
                assert_eq!(mask_lex_cmp(s, t), cs.words().cmp(ct.words()));
            }
        }
    }

    #[test]
    fn orbit_representatives_are_canonical_forms() {
        for n in 2..=3u32 {
            for m in 1..=(1usize << n) {
                let reps = canonical_masks(n, m).unwrap();
                let mut forms: Vec<Vec<u64>> = subsets(1 << n, m)
                    .map(|s| mask_to_code(n, s).canonical_form().unwrap().words().to_vec())
                    .collect();
                forms.sort();
                forms.dedup();
                let got: Vec<Vec<u64>> = reps.iter().map(|&r| mask_to_code(n, r).words().to_vec()).collect();
                let mut got_sorted = got.clone();
                got_sorted.sort();
                assert_eq!(got_sorted, forms, "n={n} m={m}");
            }
        }
        // orbits of 2-subsets of the 3-cube: distances 1, 2, 3
        assert_eq!(canonical_masks(3, 2).unwrap().len(), 3);
    }

    #[test]
    fn known_collision_extremes() {
        let r = exhaustive_extremes(3, 4, 4, Objective::Collision { rho: 0.5 }).unwrap();
        assert!((r.max_q.unwrap() - 0.375).abs() < 1e-12);
        let w = r.max_witness.unwrap();
        assert_eq!(w.a, subcube(3, 1).unwrap().canonical_form().unwrap());
        assert_eq!(w.a, w.b);
        assert!(r.exhaustive);

        let r = exhaustive_extremes(2, 1, 1, Objective::Collision { rho: 0.5 }).unwrap();
        assert!((r.max_q.unwrap() - 0.140625).abs() < 1e-15);
        assert!((r.min_q.unwrap() - 0.015625).abs() < 1e-15);
        let w = r.min_witness.unwrap();
        assert_eq!(w.a.words(), &[0]);
        assert_eq!(w.b.words(), &[3]);
    }

    #[test]
    fn known_distance_extremes() {
        let r = exhaustive_distance_extremes(3, 4, 4).unwrap();
        assert_eq!((r.min_d.unwrap(), r.max_d.unwrap()), (1.0, 2.0));
        assert!(r.min_q.is_none() && r.rho.is_none());
        let r = exhaustive_distance_extremes(4, 4, 4).unwrap();
        assert_eq!(r.min_d.unwrap(), 1.0);
        let r = exhaustive_distance_extremes(2, 1, 4).unwrap();
        assert_eq!((r.min_d.unwrap(), r.max_d.unwrap()), (1.0, 1.0));
    }

    #[test]
    fn brute_force_agrees_at_n2() {
        // every pair of every size, without orbit reduction
        let rho = 0.3;
        for m in 1..=4usize {
            for k in 1..=4usize {
                let mut best = (f64::NEG_INFINITY, f64::INFINITY);
                for a in subsets(4, m) {
                    for b in subsets(4, k) {
                        let q = collision_prob(&mask_to_code(2, a), &mask_to_code(2, b), rho).unwrap();
                        best = (best.0.max(q), best.1.min(q));
                    }
                }
                let r = exhaustive_extremes(2, m, k, Objective::Collision { rho }).unwrap();
                assert!((r.max_q.unwrap() - best.0).abs() < 1e-14);
                assert!((r.min_q.unwrap() - best.1).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn witnesses_reproduce_values() {
        let obj = Objective::Collision { rho: 0.7 };
        let r = exhaustive_extremes(4, 5, 6, obj).unwrap();
        for dir in [Direction::Max, Direction::Min] {
            let w = r.witness(dir).unwrap();
            let v = evaluate(&w.a, &w.b, obj).unwrap();
            assert!((v - r.value(dir).unwrap()).abs() < 1e-12);
            assert_eq!(w.a, w.a.canonical_form().unwrap());
        }
    }

    #[test]
    fn refuses_large_dimension() {
        assert!(matches!(
            exhaustive_extremes(5, 4, 4, Objective::Distance),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(exhaustive_extremes(3, 0, 4, Objective::Distance).is_err());
        assert!(exhaustive_extremes(3, 9, 4, Objective::Distance).is_err());
    }

    #[test]
    fn neighbourhood_sums_match_direct() {
        let n = 5;
        let weights: Vec<f64> = (0..=n).map(|d| 0.3f64.powi(d as i32)).collect();
        let members: Vec<bool> = (0..32).map(|p| p % 3 == 1).collect();
        let lam = neighbourhood_sums(n, &members, &weights);
        for z in 0..32usize {
            let direct: f64 = (0..32usize)
                .filter(|&y| members[y])
                .map(|y| weights[(z ^ y).count_ones() as usize])
                .sum();
            assert!((lam[z] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn local_search_examples() {
        let obj = Objective::Collision { rho: 0.5 };
        let cfg = LocalSearchConfig::default();
        let r = local_search(3, 4, 4, obj, Direction::Max, &cfg).unwrap();
        assert!((r.max_q.unwrap() - 0.375).abs() < 1e-12);
        assert!(!r.exhaustive);

        let r = local_search(8, 64, 64, obj, Direction::Max, &cfg).unwrap();
        assert!(r.max_q.unwrap() >= 0.140625 - 1e-12);
        let r = local_search(8, 128, 128, obj, Direction::Max, &cfg).unwrap();
        assert!(r.max_q.unwrap() >= 0.375 - 1e-12);

        let again = local_search(8, 128, 128, obj, Direction::Max, &cfg).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn local_search_min_and_non_dyadic() {
        let obj = Objective::Collision { rho: 0.5 };
        let cfg = LocalSearchConfig {
            seed: 7,
            restarts: 8,
            ..LocalSearchConfig::default()
        };
        let r = local_search(6, 16, 16, obj, Direction::Min, &cfg).unwrap();
        assert!(r.min_q.unwrap() <= 0.015625 + 1e-12);
        let exact = exhaustive_extremes(3, 3, 5, obj).unwrap();
        let ls = local_search(3, 3, 5, obj, Direction::Max, &cfg).unwrap();
        assert!(ls.max_q.unwrap() <= exact.max_q.unwrap() + 1e-12);
        let w = ls.max_witness.unwrap();
        assert_eq!((w.a.len(), w.b.len()), (3, 5));
    }

    #[test]
    fn construction_examples() {
        for rho in [0.1, 0.5, 0.9] {
            let v = construction_value(Construction::SymmetricSubcube, 6, 1, rho).unwrap();
            assert!((v - (1.0 + rho) / 4.0).abs() < 1e-12);
        }
        let v = construction_value(Construction::AntisymmetricSubcube, 5, 2, 0.5).unwrap();
        assert!((v - 0.015625).abs() < 1e-15);
        let (a, b) = construction_codes(Construction::AntisymmetricSubcube, 4, 2).unwrap();
        assert!((collision_prob(&a, &b, 0.5).unwrap() - 0.015625).abs() < 1e-15);
        assert!("nope".parse::<Construction>().is_err());
    }

    #[test]
    fn ball_formula_matches_explicit_codes() {
        for n in [3u32, 6, 10] {
            for r in 0..=n {
                let ball = hamming_ball(n, 0, r).unwrap();
                for rho in [-0.6, 0.0, 0.3, 0.9, 1.0] {
                    let exact = collision_prob(&ball, &ball, rho).unwrap();
                    let radial = hamming_ball_collision(n, r, rho).unwrap();
                    assert!((exact - radial).abs() < 1e-12, "n={n} r={r} rho={rho}");
                }
            }
        }
        assert_eq!(hamming_ball_radius(10, 4).unwrap(), 2);
        assert!((hamming_ball_density(10, 2) - 56.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn ball_beats_subcube_at_small_density() {
        let (n, i, rho) = (32, 14, 0.3);
        let r = hamming_ball_radius(n, i).unwrap();
        assert_eq!(r, 5);
        assert!(hamming_ball_density(n, r) <= 2f64.powi(-(i as i32)));
        let ball = construction_value(Construction::HammingBallPair, n, i, rho).unwrap();
        let cube = construction_value(Construction::SymmetricSubcube, n, i, rho).unwrap();
        assert!(ball > cube * 1.01, "ball {ball} vs subcube {cube}");
    }

    #[test]
    fn result_json_omits_wall_time() {
        let r = exhaustive_distance_extremes(2, 2, 2).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"min_D\":"));
        assert!(!json.contains("wall"));
        let back: OracleResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back.min_d, r.min_d);
    }
}
