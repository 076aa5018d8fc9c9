use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use recliff_core::chform::MAX_DENSE_QUBITS;
use recliff_core::decompose::{circuit_extent, predict_contraction, single_rotation_norm, xyz_triple_norm};
use recliff_core::oracle::run as run_dense;
use recliff_core::sparsify::{
    amplitude_sample_count, collect_samples, delta_stats, estimate_amplitude, plan_amplitude,
    plan_probability, plan_sparsification, PROBABILITY_FACTOR,
};
use recliff_core::{recompile, BitString, Circuit, DenseState, Engine, Grouping, RecompiledCircuit};

use crate::report::RunReport;
use crate::{Command, EstimateArgs, GroupingArg};

/// Bad flag values or inputs that do not fit the command.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// A circuit file or a previously recompiled canonical form.
enum Program {
    Circuit(Circuit),
    Recompiled(RecompiledCircuit),
}

impl Program {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let first = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .unwrap_or("");
        let parsed = if first.starts_with("chform") {
            RecompiledCircuit::from_text(&text).map(Program::Recompiled)
        } else {
            Circuit::parse(&text).map(Program::Circuit)
        };
        parsed.with_context(|| format!("cannot parse {}", path.display()))
    }

    fn n(&self) -> usize {
        match self {
            Program::Circuit(c) => c.n(),
            Program::Recompiled(rc) => rc.n(),
        }
    }

    fn recompiled(&self) -> Result<RecompiledCircuit> {
        Ok(match self {
            Program::Circuit(c) => recompile(c)?,
            Program::Recompiled(rc) => rc.clone(),
        })
    }

    fn dense(&self) -> Result<DenseState> {
        if self.n() > MAX_DENSE_QUBITS {
            return Err(usage(format!(
                "dense simulation is limited to {MAX_DENSE_QUBITS} qubits, circuit has {}",
                self.n()
            )));
        }
        Ok(match self {
            Program::Circuit(c) => run_dense(c)?,
            Program::Recompiled(rc) => rc.to_dense()?,
        })
    }
}

fn grouping(g: GroupingArg) -> Grouping {
    match g {
        GroupingArg::PerGate => Grouping::PerGate,
        GroupingArg::Xyz => Grouping::XyzTriples,
    }
}

fn grouping_name(g: GroupingArg) -> &'static str {
    match g {
        GroupingArg::PerGate => "per-gate",
        GroupingArg::Xyz => "xyz",
    }
}

fn parse_bits(x: &str, n: usize) -> Result<BitString> {
    if x.len() != n {
        return Err(usage(format!("--x has {} bits but the circuit has {n} qubits", x.len())));
    }
    x.parse().map_err(|e| usage(format!("--x: {e}")))
}

fn check_range(name: &str, v: f64, inclusive_one: bool) -> Result<()> {
    let ok = v > 0.0 && (v < 1.0 || (inclusive_one && v == 1.0));
    if ok {
        Ok(())
    } else {
        let hi = if inclusive_one { "1]" } else { "1)" };
        Err(usage(format!("--{name} must lie in (0, {hi}, got {v}")))
    }
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

pub fn run(cmd: &Command) -> Result<Option<RunReport>> {
    match cmd {
        Command::Recompile { circuit, out } => recompile_cmd(circuit, out.as_deref()).map(Some),
        Command::Extent { circuit, grouping } => extent_cmd(circuit, *grouping).map(Some),
        Command::Amplitude(args) => estimate_cmd("amplitude", args).map(Some),
        Command::Probability(args) => estimate_cmd("probability", args).map(Some),
        Command::Sparsify {
            circuit,
            eps,
            seed,
            out,
            adaptive,
            grouping,
        } => sparsify_cmd(circuit, *eps, *seed, out, *adaptive, *grouping).map(Some),
        Command::DeltaStats {
            circuit,
            samples,
            seed,
            grouping,
        } => delta_stats_cmd(circuit, *samples, *seed, *grouping).map(Some),
        Command::Exact { circuit, x } => exact_cmd(circuit, x).map(Some),
        Command::NormCurves { points, out } => norm_curves_cmd(*points, out.as_deref()),
    }
}

fn recompile_cmd(path: &Path, out: Option<&Path>) -> Result<RunReport> {
    let program = Program::load(path)?;
    let rc = program.recompiled()?;
    let mut r = RunReport::new("recompile");
    r.input("circuit", path.display().to_string());
    if let Program::Circuit(c) = &program {
        let counts = c.counts();
        r.output("gates", counts.total)
            .output("clifford_gates", counts.clifford)
            .output("non_clifford_gates", counts.non_clifford);
    }
    r.output("n", rc.n())
        .output("rotations", rc.rotations().len())
        .output("global_phase", format!("{}pi", rc.global_phase()));
    if let Some(out) = out {
        fs::write(out, rc.to_text()).with_context(|| format!("cannot write {}", out.display()))?;
        r.output("written", out.display().to_string());
    }
    Ok(r)
}

fn extent_cmd(path: &Path, g: GroupingArg) -> Result<RunReport> {
    let rc = Program::load(path)?.recompiled()?;
    let one_norm = circuit_extent(&rc, grouping(g))?;
    let m = rc.rotations().len();
    let mut r = RunReport::new("extent");
    r.input("circuit", path.display().to_string())
        .input("grouping", grouping_name(g));
    r.output("n", rc.n())
        .output("rotations", m)
        .output("one_norm", one_norm)
        .output("one_norm_sq", one_norm * one_norm);
    if m > 0 {
        let axes: Vec<_> = rc.rotations().iter().map(|q| q.pauli.clone()).collect();
        r.output("log2_one_norm_sq_per_rotation", (one_norm * one_norm).log2() / m as f64)
            .output("contraction_predicted", predict_contraction(&axes)?);
    }
    Ok(r)
}

fn estimate_cmd(command: &str, a: &EstimateArgs) -> Result<RunReport> {
    let probability = command == "probability";
    check_range("eps", a.eps, probability)?;
    check_range("delta", a.delta, false)?;
    let program = Program::load(&a.circuit)?;
    let x = parse_bits(&a.x, program.n())?;
    let rc = program.recompiled()?;
    let seed = seed_or_fresh(a.seed);
    let g = grouping(a.grouping);
    let engine = if a.adaptive { Engine::Adaptive } else { Engine::Standard };
    let mut plan = if probability {
        plan_probability(&rc, a.eps, a.delta, g, seed)?
    } else {
        plan_amplitude(&rc, a.eps, a.delta, g, seed)?
    }
    .with_engine(engine);

    let mut r = RunReport::new(command);
    r.seed = Some(seed);
    r.input("circuit", a.circuit.display().to_string())
        .input("x", a.x.as_str())
        .input("eps", a.eps)
        .input("delta", a.delta)
        .input("adaptive", a.adaptive)
        .input("heuristic_k", a.heuristic_k)
        .input("grouping", grouping_name(a.grouping));

    if a.heuristic_k {
        let stats = delta_stats(&rc, g, 1000, seed)?;
        let amp_eps = if probability { PROBABILITY_FACTOR * a.eps } else { a.eps };
        let k = amplitude_sample_count(stats.heuristic_norm(), amp_eps, a.delta);
        plan = plan.with_k(k)?;
        r.output("heuristic_norm", stats.heuristic_norm());
    }

    let est = estimate_amplitude(&plan, &x)?;
    r.output("n", rc.n())
        .output("rotations", rc.rotations().len())
        .output("one_norm", plan.one_norm())
        .output("k", est.k);
    if probability {
        r.output("estimate", est.estimate.norm_sqr());
    }
    r.output("amplitude_re", est.estimate.re)
        .output("amplitude_im", est.estimate.im);
    Ok(r)
}

fn sparsify_cmd(
    path: &Path,
    eps: f64,
    seed: Option<u64>,
    out: &Path,
    adaptive: bool,
    g: GroupingArg,
) -> Result<RunReport> {
    check_range("eps", eps, true)?;
    let rc = Program::load(path)?.recompiled()?;
    let seed = seed_or_fresh(seed);
    let engine = if adaptive { Engine::Adaptive } else { Engine::Standard };
    let plan = plan_sparsification(&rc, eps, grouping(g), seed)?.with_engine(engine);
    let samples = collect_samples(&plan)?;
    let mut text = format!("samples {}\none_norm {}\n", plan.k(), plan.one_norm());
    for (i, s) in samples.iter().enumerate() {
        writeln!(text, "sample {i} scale {}", s.scale).unwrap();
        text.push_str(&s.state.to_text());
    }
    fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?;
    let mut r = RunReport::new("sparsify");
    r.seed = Some(seed);
    r.input("circuit", path.display().to_string())
        .input("eps", eps)
        .input("adaptive", adaptive)
        .input("grouping", grouping_name(g));
    r.output("n", rc.n())
        .output("rotations", rc.rotations().len())
        .output("one_norm", plan.one_norm())
        .output("k", plan.k())
        .output("written", out.display().to_string());
    Ok(r)
}

fn delta_stats_cmd(path: &Path, samples: u64, seed: Option<u64>, g: GroupingArg) -> Result<RunReport> {
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let rc = Program::load(path)?.recompiled()?;
    let seed = seed_or_fresh(seed);
    let stats = delta_stats(&rc, grouping(g), samples, seed)?;
    let mut r = RunReport::new("delta-stats");
    r.seed = Some(seed);
    r.input("circuit", path.display().to_string())
        .input("samples", samples)
        .input("grouping", grouping_name(g));
    r.output("rotations", rc.rotations().len())
        .output("one_norm", stats.one_norm)
        .output("mean_norm", stats.mean_norm)
        .output("std_norm", stats.std_norm)
        .output("max_norm", stats.max_norm);
    Ok(r)
}

fn exact_cmd(path: &Path, x: &str) -> Result<RunReport> {
    let program = Program::load(path)?;
    let bits = parse_bits(x, program.n())?;
    let amp = program.dense()?.amplitude(&bits)?;
    let mut r = RunReport::new("exact");
    r.input("circuit", path.display().to_string()).input("x", x);
    r.output("n", program.n())
        .output("amplitude_re", amp.re)
        .output("amplitude_im", amp.im)
        .output("probability", amp.norm_sqr());
    Ok(r)
}

/// `(θ, Ω₁(θ), Ω₁(θ)³, Ω_xyz(θ))` on an even grid of `(0, π/4]`.
pub fn norm_curves(points: usize) -> Vec<(f64, f64, f64, Option<f64>)> {
    (1..=points)
        .map(|i| {
            let t = FRAC_PI_4 * i as f64 / points as f64;
            let s = single_rotation_norm(t);
            let xyz = (t <= FRAC_PI_8 + 1e-12).then(|| xyz_triple_norm(t));
            (t, s, s.powi(3), xyz)
        })
        .collect()
}

fn norm_curves_cmd(points: usize, out: Option<&Path>) -> Result<Option<RunReport>> {
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let rows = norm_curves(points);
    // dΩ₁/dθ = (√2 − 1) cos θ − sin θ vanishes only at π/8
    for w in rows.windows(2) {
        let ((t0, s0, ..), (t1, s1, ..)) = (w[0], w[1]);
        let bad = (t1 <= FRAC_PI_8 && s1 <= s0) || (t0 >= FRAC_PI_8 && s1 >= s0);
        if bad {
            anyhow::bail!("single-rotation curve has the wrong slope between θ = {t0} and {t1}");
        }
    }
    let mut csv = String::from("theta,theta_over_pi,single_norm,single_norm_cubed,xyz_norm\n");
    for (t, s, s3, xyz) in &rows {
        let xyz = xyz.map_or(String::new(), |v| format!("{v:?}"));
        writeln!(csv, "{t:?},{:?},{s:?},{s3:?},{xyz}", t / PI).unwrap();
    }
    match out {
        None => {
            print!("{csv}");
            Ok(None)
        }
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;
            let mut r = RunReport::new("norm-curves");
            r.input("points", points);
            r.output("rows", rows.len()).output("written", path.display().to_string());
            Ok(Some(r))
        }
    }
}
