//! Monte Carlo sums over Clifford terms.
//!
//! A sample draws one term per factor with probability `|b_ij| / ‖b_i‖₁` and
//! returns `‖b‖₁ · ω U_C U_H |s⟩`, an unbiased estimate of the output state.
//! Every sample is a pure function of `(master_seed, index)`; aggregates are
//! summed over fixed index chunks in order, so results do not depend on the
//! number of worker threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitString;
use crate::chform::CHForm;
use crate::circuit::Circuit;
use crate::decompose::{decompose_rotations, optimal_single_rotation, Factor, Grouping};
use crate::error::{check_dims, Error, Result};
use crate::pauli::PauliOperator;
use crate::recompile::RecompiledCircuit;
use crate::Angle;

type C = Complex64;

const CHUNK: u64 = 1024;

/// `√2 − 1`: amplitude error that guarantees an additive probability error of 1.
pub const PROBABILITY_FACTOR: f64 = std::f64::consts::SQRT_2 - 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Standard,
    Adaptive,
}

/// What the sample count `k` was sized for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    State,
    Amplitude,
    Probability,
    Fixed,
}

#[derive(Clone, Debug)]
struct TermTable {
    cumulative: Vec<f64>,
    unit_phase: Vec<C>,
    words: Vec<Vec<(PauliOperator, i64)>>,
    one_norm: f64,
}

impl TermTable {
    fn new(factor: &Factor) -> Self {
        let d = &factor.decomposition;
        let mut acc = 0.0;
        let cumulative = d
            .terms()
            .iter()
            .map(|t| {
                acc += t.coefficient.norm();
                acc
            })
            .collect();
        TermTable {
            cumulative,
            unit_phase: d.terms().iter().map(|t| t.coefficient / t.coefficient.norm()).collect(),
            words: d.terms().iter().map(|t| t.word.clone()).collect(),
            one_norm: d.one_norm(),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u = rng.random::<f64>() * self.one_norm;
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }

    fn coefficient(&self, j: usize) -> C {
        let prev = if j == 0 { 0.0 } else { self.cumulative[j - 1] };
        self.unit_phase[j] * (self.cumulative[j] - prev)
    }
}

fn apply_word(state: &mut CHForm, word: &[(PauliOperator, i64)]) {
    for (p, k) in word {
        state.apply_pauli_rotation_unchecked(p, *k);
    }
}

/// Immutable description of one sampling run.
#[derive(Clone, Debug)]
pub struct SamplingPlan {
    rc: RecompiledCircuit,
    factors: Vec<Factor>,
    tables: Vec<TermTable>,
    start: CHForm,
    one_norm: f64,
    k: u64,
    epsilon: Option<f64>,
    delta: Option<f64>,
    target: Target,
    master_seed: u64,
    engine: Engine,
}

impl SamplingPlan {
    /// A plan with an explicit sample count.
    pub fn new(rc: &RecompiledCircuit, grouping: Grouping, k: u64, master_seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        let factors = decompose_rotations(rc, grouping)?;
        let tables: Vec<TermTable> = factors.iter().map(TermTable::new).collect();
        let one_norm = tables.iter().map(|t| t.one_norm).product();
        let mut start = rc.phi().clone();
        start.scale_omega(C::from_polar(1.0, rc.global_phase().radians()));
        Ok(SamplingPlan {
            rc: rc.clone(),
            factors,
            tables,
            start,
            one_norm,
            k,
            epsilon: None,
            delta: None,
            target: Target::Fixed,
            master_seed,
            engine: Engine::Standard,
        })
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    /// Replaces `k`, e.g. by a heuristic from [`delta_stats`].
    pub fn with_k(mut self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        self.k = k;
        Ok(self)
    }

    pub fn recompiled(&self) -> &RecompiledCircuit {
        &self.rc
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `p_i(j)` for every factor `i`.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        self.factors.iter().map(|f| f.decomposition.probabilities()).collect()
    }

    pub fn n(&self) -> usize {
        self.rc.n()
    }

    /// `‖a‖₁ = Π_i ‖b_i‖₁`.
    pub fn one_norm(&self) -> f64 {
        self.one_norm
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    fn rng(&self, index: u64) -> Result<ChaCha8Rng> {
        if index >= self.k {
            return Err(Error::InvalidArgument(format!("sample index {index} ≥ k = {}", self.k)));
        }
        Ok(sample_rng(self.master_seed, index))
    }

    fn sample(&self, index: u64) -> Result<SparseSample> {
        match self.engine {
            Engine::Standard => sample_once(self, index),
            Engine::Adaptive => sample_once_adaptive(self, index),
        }
    }
}

/// Counter-based stream `index` of `master_seed`.
pub fn sample_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

// Rounds away float noise such as (2·2/0.1)² = 1600.0000000000002.
fn ceil_count(x: f64) -> u64 {
    (x - 1e-9).ceil().max(1.0) as u64
}

fn check_epsilon(epsilon: f64, upper_inclusive: bool) -> Result<()> {
    let ok = epsilon > 0.0 && (epsilon < 1.0 || (upper_inclusive && epsilon == 1.0));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("epsilon {epsilon} out of range")))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("delta {delta} must lie in (0, 1)")))
    }
}

/// `k = ⌈(2‖a‖₁/ε)²⌉`: `‖ψ̃ − ψ‖ ≤ ε` with probability at least 3/4.
pub fn plan_sparsification(
    rc: &RecompiledCircuit,
    epsilon: f64,
    grouping: Grouping,
    master_seed: u64,
) -> Result<SamplingPlan> {
    check_epsilon(epsilon, true)?;
    let mut plan = SamplingPlan::new(rc, grouping, 1, master_seed)?;
    plan.k = ceil_count((2.0 * plan.one_norm / epsilon).powi(2));
    plan.epsilon = Some(epsilon);
    plan.target = Target::State;
    Ok(plan)
}

/// Hoeffding count for `Pr[|est − ⟨x|ψ⟩| ≥ ε] ≤ δ`.
///
/// Real and imaginary parts each lie in `[−‖a‖₁, ‖a‖₁]`; bounding both within
/// `ε/√2` at failure rate `δ/2` gives `k = ⌈4‖a‖₁² ε⁻² ln(4/δ)⌉`.
pub fn amplitude_sample_count(one_norm: f64, epsilon: f64, delta: f64) -> u64 {
    ceil_count(4.0 * one_norm * one_norm * (4.0 / delta).ln() / (epsilon * epsilon))
}

pub fn plan_amplitude(
    rc: &RecompiledCircuit,
    epsilon: f64,
    delta: f64,
    grouping: Grouping,
    master_seed: u64,
) -> Result<SamplingPlan> {
    check_epsilon(epsilon, false)?;
    check_delta(delta)?;
    let mut plan = SamplingPlan::new(rc, grouping, 1, master_seed)?;
    plan.k = amplitude_sample_count(plan.one_norm, epsilon, delta);
    plan.epsilon = Some(epsilon);
    plan.delta = Some(delta);
    plan.target = Target::Amplitude;
    Ok(plan)
}

/// Amplitude plan at error `(√2 − 1)ε`, so `|est|²` is within `ε` of `P(x)`.
pub fn plan_probability(
    rc: &RecompiledCircuit,
    epsilon: f64,
    delta: f64,
    grouping: Grouping,
    master_seed: u64,
) -> Result<SamplingPlan> {
    check_epsilon(epsilon, true)?;
    check_delta(delta)?;
    let mut plan = SamplingPlan::new(rc, grouping, 1, master_seed)?;
    plan.k = amplitude_sample_count(plan.one_norm, PROBABILITY_FACTOR * epsilon, delta);
    plan.epsilon = Some(epsilon);
    plan.delta = Some(delta);
    plan.target = Target::Probability;
    Ok(plan)
}

/// `scale · ω U_C U_H |s⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSample {
    pub scale: f64,
    pub state: CHForm,
}

impl SparseSample {
    pub fn amplitude(&self, x: &BitString) -> Result<C> {
        Ok(self.state.amplitude(x)? * self.scale)
    }

    fn amplitude_words(&self, x: &[u64]) -> C {
        self.state.amplitude_words(x) * self.scale
    }

    pub fn to_dense(&self) -> Result<Vec<C>> {
        Ok(self
            .state
            .extract_statevector()?
            .into_iter()
            .map(|a| a * self.scale)
            .collect())
    }
}

/// One draw of the plain sampler.
pub fn sample_once(plan: &SamplingPlan, index: u64) -> Result<SparseSample> {
    let mut rng = plan.rng(index)?;
    let mut state = plan.start.clone();
    for t in &plan.tables {
        let j = t.draw(&mut rng);
        apply_word(&mut state, &t.words[j]);
        state.scale_omega(t.unit_phase[j]);
    }
    Ok(SparseSample {
        scale: plan.one_norm,
        state,
    })
}

/// Per-step norms of an adaptive trajectory: `‖a′_i‖₁` and `‖a_i‖₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepNorms {
    pub merged: f64,
    pub plain: f64,
}

/// One draw of the collinearity-merging sampler.
pub fn sample_once_adaptive(plan: &SamplingPlan, index: u64) -> Result<SparseSample> {
    Ok(sample_once_adaptive_traced(plan, index)?.0)
}

/// Adaptive draw together with the norms seen at every step.
///
/// Each step expands the current state into all candidate terms, merges
/// collinear candidates into one branch with summed coefficient, and draws a
/// branch with probability proportional to its coefficient's modulus. The
/// returned scale is the product of the merged norms along this trajectory.
pub fn sample_once_adaptive_traced(
    plan: &SamplingPlan,
    index: u64,
) -> Result<(SparseSample, Vec<StepNorms>)> {
    let mut rng = plan.rng(index)?;
    let mut state = plan.start.clone();
    let mut scale = 1.0;
    let mut trace = Vec::with_capacity(plan.tables.len());
    for t in &plan.tables {
        // (unit-ω representative, summed coefficient relative to it)
        let mut branches: Vec<(CHForm, C)> = Vec::new();
        for (j, word) in t.words.iter().enumerate() {
            let b = t.coefficient(j);
            let mut cand = state.clone();
            apply_word(&mut cand, word);
            cand.scale_omega(t.unit_phase[j]);
            match branches
                .iter_mut()
                .find_map(|(rep, a)| cand.collinear_ratio(rep).map(|r| (a, r)))
            {
                Some((a, r)) => *a += r * b.norm(),
                None => branches.push((cand, C::new(b.norm(), 0.0))),
            }
        }
        let merged: f64 = branches.iter().map(|(_, a)| a.norm()).sum();
        debug_assert!(merged <= t.one_norm + 1e-9, "merged norm {merged} > {}", t.one_norm);
        trace.push(StepNorms {
            merged,
            plain: t.one_norm,
        });
        if merged < 1e-300 {
            // every branch cancelled: the trajectory contributes nothing
            return Ok((SparseSample { scale: 0.0, state }, trace));
        }
        let u = rng.random::<f64>() * merged;
        let mut acc = 0.0;
        let mut pick = branches.len() - 1;
        for (l, (_, a)) in branches.iter().enumerate() {
            acc += a.norm();
            if u < acc {
                pick = l;
                break;
            }
        }
        let (mut next, a) = branches.swap_remove(pick);
        next.scale_omega(a / a.norm());
        state = next;
        scale *= merged;
    }
    Ok((SparseSample { scale, state }, trace))
}

/// Plain sampler applied gate by gate to the original circuit, without
/// recompiling. Its cost grows with the total gate count.
pub fn sample_naive(circuit: &Circuit, master_seed: u64, index: u64) -> Result<SparseSample> {
    let mut rng = sample_rng(master_seed, index);
    let mut state = CHForm::init_zero(circuit.n())?;
    state.scale_omega(C::from_polar(1.0, circuit.global_phase().radians()));
    let mut scale = 1.0;
    for g in circuit.gates() {
        if let Some(cg) = g.as_clifford_gate() {
            state.apply_clifford_gate(cg)?;
            continue;
        }
        let rot = g.as_rotation(circuit.n()).expect("non-Clifford gates are rotations");
        state.scale_omega(C::from_polar(1.0, rot.phase.radians()));
        let (k, rest) = rot.theta.split_quarter_turns();
        state.apply_pauli_rotation_unchecked(&rot.pauli, k);
        if rest == Angle::ZERO {
            continue;
        }
        let d = optimal_single_rotation(&rot.pauli, rest)?;
        let table = TermTable::new(&Factor {
            start: 0,
            len: 1,
            decomposition: d,
        });
        let j = table.draw(&mut rng);
        apply_word(&mut state, &table.words[j]);
        state.scale_omega(table.unit_phase[j]);
        scale *= table.one_norm;
    }
    Ok(SparseSample { scale, state })
}

/// Ordered sum of `f(sample_i)` over `0 ≤ i < k`, chunked for parallelism.
fn ordered_sum<F>(plan: &SamplingPlan, f: F) -> Result<C>
where
    F: Fn(&SparseSample) -> C + Sync,
{
    let chunks = plan.k.div_ceil(CHUNK);
    let partial: Vec<Result<C>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = C::new(0.0, 0.0);
            for i in c * CHUNK..((c + 1) * CHUNK).min(plan.k) {
                acc += f(&plan.sample(i)?);
            }
            Ok(acc)
        })
        .collect();
    let mut total = C::new(0.0, 0.0);
    for p in partial {
        total += p?;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeEstimate {
    pub estimate: C,
    pub k: u64,
}

/// Mean of `⟨x|z_i⟩` over the plan's `k` samples.
pub fn estimate_amplitude(plan: &SamplingPlan, x: &BitString) -> Result<AmplitudeEstimate> {
    check_dims(x.len(), plan.n())?;
    let words = x.words();
    let sum = ordered_sum(plan, |s| s.amplitude_words(words))?;
    Ok(AmplitudeEstimate {
        estimate: sum / plan.k as f64,
        k: plan.k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbabilityEstimate {
    pub estimate: f64,
    pub amplitude: C,
    pub k: u64,
}

/// `|estimate_amplitude|²`; use a plan from [`plan_probability`] for the
/// additive guarantee.
pub fn estimate_probability(plan: &SamplingPlan, x: &BitString) -> Result<ProbabilityEstimate> {
    let a = estimate_amplitude(plan, x)?;
    Ok(ProbabilityEstimate {
        estimate: a.estimate.norm_sqr(),
        amplitude: a.estimate,
        k: a.k,
    })
}

/// Draws all `k` samples of the plan in index order.
pub fn collect_samples(plan: &SamplingPlan) -> Result<Vec<SparseSample>> {
    (0..plan.k).into_par_iter().map(|i| plan.sample(i)).collect()
}

/// `|ψ̃⟩ = k⁻¹ Σ_i |z_i⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    samples: Vec<SparseSample>,
}

pub fn assemble_sparse_state(samples: Vec<SparseSample>) -> Result<SparseState> {
    let Some(first) = samples.first() else {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    };
    let n = first.state.n();
    for s in &samples {
        check_dims(s.state.n(), n)?;
    }
    Ok(SparseState { samples })
}

impl SparseState {
    pub fn samples(&self) -> &[SparseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn n(&self) -> usize {
        self.samples[0].state.n()
    }

    pub fn amplitude(&self, x: &BitString) -> Result<C> {
        check_dims(x.len(), self.n())?;
        let sum: C = self.samples.iter().map(|s| s.amplitude_words(x.words())).sum();
        Ok(sum / self.samples.len() as f64)
    }

    /// Dense `|ψ̃⟩`; limited to small registers.
    pub fn to_dense(&self) -> Result<Vec<C>> {
        let mut acc: Vec<C> = Vec::new();
        for s in &self.samples {
            let v = s.to_dense()?;
            if acc.is_empty() {
                acc = v;
            } else {
                acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
            }
        }
        let k = self.samples.len() as f64;
        Ok(acc.into_iter().map(|a| a / k).collect())
    }
}

/// Distribution of the per-trajectory scale `Π_i ‖a′_i‖₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryStats {
    pub mean_norm: f64,
    pub std_norm: f64,
    pub max_norm: f64,
    pub one_norm: f64,
    pub samples: u64,
}

impl TrajectoryStats {
    /// `mean + 3·std`, a heuristic replacement for `‖a‖₁` when sizing `k`.
    pub fn heuristic_norm(&self) -> f64 {
        self.mean_norm + 3.0 * self.std_norm
    }
}

/// Runs `n_samples` adaptive trajectories and summarizes their scales.
pub fn delta_stats(
    rc: &RecompiledCircuit,
    grouping: Grouping,
    n_samples: u64,
    master_seed: u64,
) -> Result<TrajectoryStats> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("delta-stats needs at least 2 samples".into()));
    }
    let plan = SamplingPlan::new(rc, grouping, n_samples, master_seed)?.with_engine(Engine::Adaptive);
    let scales: Vec<f64> = (0..n_samples)
        .into_par_iter()
        .map(|i| sample_once_adaptive(&plan, i).map(|s| s.scale))
        .collect::<Result<_>>()?;
    let n = scales.len() as f64;
    let mean = scales.iter().sum::<f64>() / n;
    let var = scales.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(TrajectoryStats {
        mean_norm: mean,
        std_norm: var.sqrt(),
        max_norm: scales.iter().cloned().fold(0.0, f64::max),
        one_norm: plan.one_norm,
        samples: n_samples,
    })
}
