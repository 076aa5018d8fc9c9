//! Gate-level circuit representation and its line-based text format.
//!
//! ```text
//! qubits 3
//! # comment
//! H 0
//! CX 0 2
//! T 1
//! EXP 1/7 XIZ      # exp(i·(1/7)π·XIZ)
//! ```
//!
//! An optional `PHASE <num>/<den>` line records a global phase `e^{iπ·r}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::angle::Angle;
use crate::clifford::CliffordGate;
use crate::error::{check_dims, check_qubit, Error, Result};
use crate::pauli::{PauliOperator, SinglePauli};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    /// `diag(1, e^{iπ/4}) = e^{iπ/8} exp(-iπ/8 Z)`.
    T(usize),
    Tdg(usize),
    /// `exp(iθP)`.
    Exp { pauli: PauliOperator, theta: Angle },
}

/// A Pauli exponential `e^{iπ·phase} exp(iθP)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliRotation {
    pub pauli: PauliOperator,
    pub theta: Angle,
    pub phase: Angle,
}

impl Gate {
    pub fn is_clifford(&self) -> bool {
        match self {
            Gate::T(_) | Gate::Tdg(_) => false,
            Gate::Exp { theta, .. } => theta.is_clifford(),
            _ => true,
        }
    }

    /// The named Clifford, if this is one.
    pub fn as_clifford_gate(&self) -> Option<CliffordGate> {
        Some(match *self {
            Gate::H(q) => CliffordGate::H(q),
            Gate::S(q) => CliffordGate::S(q),
            Gate::Sdg(q) => CliffordGate::Sdg(q),
            Gate::X(q) => CliffordGate::X(q),
            Gate::Y(q) => CliffordGate::Y(q),
            Gate::Z(q) => CliffordGate::Z(q),
            Gate::CX(a, b) => CliffordGate::CX(a, b),
            Gate::CZ(a, b) => CliffordGate::CZ(a, b),
            _ => return None,
        })
    }

    /// T, T† and EXP as Pauli exponentials on `n` qubits.
    pub fn as_rotation(&self, n: usize) -> Option<PauliRotation> {
        let z = |q| PauliOperator::single(n, q, SinglePauli::Z).expect("validated qubit");
        match self {
            Gate::T(q) => Some(PauliRotation {
                pauli: z(*q),
                theta: Angle::new(-1, 8),
                phase: Angle::new(1, 8),
            }),
            Gate::Tdg(q) => Some(PauliRotation {
                pauli: z(*q),
                theta: Angle::new(1, 8),
                phase: Angle::new(-1, 8),
            }),
            Gate::Exp { pauli, theta } => Some(PauliRotation {
                pauli: pauli.clone(),
                theta: *theta,
                phase: Angle::ZERO,
            }),
            _ => None,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Gate::T(q) | Gate::Tdg(q) => check_qubit(*q, n),
            Gate::Exp { pauli, .. } => {
                check_dims(pauli.n(), n)?;
                if pauli.is_hermitian() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("{pauli} is not Hermitian")))
                }
            }
            g => g.as_clifford_gate().expect("named Clifford").check(n),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::CX(a, b) => write!(f, "CX {a} {b}"),
            Gate::CZ(a, b) => write!(f, "CZ {a} {b}"),
            Gate::T(q) => write!(f, "T {q}"),
            Gate::Tdg(q) => write!(f, "TDG {q}"),
            Gate::Exp { pauli, theta } => write!(f, "EXP {theta} {pauli}"),
        }
    }
}

/// `(ℓ, m, c)`: total, non-Clifford and Clifford gate counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCounts {
    pub total: usize,
    pub non_clifford: usize,
    pub clifford: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    global_phase: Angle,
}

impl Circuit {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        Ok(Circuit {
            n,
            gates: Vec::new(),
            global_phase: Angle::ZERO,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Global phase `r`, meaning a factor `e^{iπ·r}`.
    pub fn global_phase(&self) -> Angle {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, phase: Angle) {
        self.global_phase = phase.reduced();
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn counts(&self) -> GateCounts {
        let non_clifford = self.gates.iter().filter(|g| !g.is_clifford()).count();
        GateCounts {
            total: self.gates.len(),
            non_clifford,
            clifford: self.gates.len() - non_clifford,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut parts = line.split_whitespace();
            let head = parts.next().expect("non-empty line");
            let args: Vec<&str> = parts.collect();
            let Some(c) = circuit.as_mut() else {
                if !head.eq_ignore_ascii_case("qubits") || args.len() != 1 {
                    return Err(err("first line must be `qubits <n>`".into()));
                }
                let n: usize = args[0]
                    .parse()
                    .map_err(|_| err(format!("bad qubit count {:?}", args[0])))?;
                circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
                continue;
            };
            let arity = |k: usize| -> Result<()> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(err(format!("`{head}` takes {k} argument(s), got {}", args.len())))
                }
            };
            let qubit = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| err(format!("bad qubit index {s:?}")))
            };
            let gate = match head.to_ascii_uppercase().as_str() {
                "PHASE" => {
                    arity(1)?;
                    let a: Angle = args[0].parse().map_err(|e: Error| err(e.to_string()))?;
                    c.global_phase = (c.global_phase + a).reduced();
                    continue;
                }
                name @ ("H" | "S" | "SDG" | "X" | "Y" | "Z" | "T" | "TDG") => {
                    arity(1)?;
                    let q = qubit(args[0])?;
                    match name {
                        "H" => Gate::H(q),
                        "S" => Gate::S(q),
                        "SDG" => Gate::Sdg(q),
                        "X" => Gate::X(q),
                        "Y" => Gate::Y(q),
                        "Z" => Gate::Z(q),
                        "T" => Gate::T(q),
                        _ => Gate::Tdg(q),
                    }
                }
                name @ ("CX" | "CNOT" | "CZ") => {
                    arity(2)?;
                    let (a, b) = (qubit(args[0])?, qubit(args[1])?);
                    if name == "CZ" {
                        Gate::CZ(a, b)
                    } else {
                        Gate::CX(a, b)
                    }
                }
                "EXP" => {
                    arity(2)?;
                    let theta: Angle = args[0].parse().map_err(|e: Error| err(e.to_string()))?;
                    let pauli: PauliOperator =
                        args[1].parse().map_err(|e: Error| err(e.to_string()))?;
                    Gate::Exp { pauli, theta }
                }
                _ => return Err(err(format!("unknown gate {head:?}"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            message: "missing `qubits <n>` header".into(),
        })
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        if !self.global_phase.is_zero() {
            writeln!(f, "PHASE {}", self.global_phase)?;
        }
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Circuit::parse(s)
    }
}

/// Shape of a random near-Clifford circuit.
#[derive(Clone, Debug)]
pub struct RandomCircuitSpec {
    pub n: usize,
    pub clifford_gates: usize,
    pub non_clifford_gates: usize,
    /// Fraction of non-Clifford gates drawn as T/T† rather than EXP.
    pub t_fraction: f64,
    /// Fraction of Clifford gates drawn as EXP with a `(π/4)ℤ` angle.
    pub clifford_exp_fraction: f64,
}

impl RandomCircuitSpec {
    pub fn new(n: usize, clifford_gates: usize, non_clifford_gates: usize) -> Self {
        RandomCircuitSpec {
            n,
            clifford_gates,
            non_clifford_gates,
            t_fraction: 0.5,
            clifford_exp_fraction: 0.1,
        }
    }

    pub fn t_only(mut self) -> Self {
        self.t_fraction = 1.0;
        self.clifford_exp_fraction = 0.0;
        self
    }

    /// Non-Clifford positions are spread uniformly among the Clifford gates.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Circuit> {
        let mut c = Circuit::new(self.n)?;
        let total = self.clifford_gates + self.non_clifford_gates;
        let mut kinds: Vec<bool> = (0..total).map(|i| i < self.non_clifford_gates).collect();
        for i in (1..kinds.len()).rev() {
            kinds.swap(i, rng.random_range(0..=i));
        }
        for non_clifford in kinds {
            let gate = if non_clifford {
                self.random_non_clifford(rng)
            } else {
                self.random_clifford(rng)
            };
            c.push(gate)?;
        }
        Ok(c)
    }

    fn random_clifford<R: Rng + ?Sized>(&self, rng: &mut R) -> Gate {
        let n = self.n;
        if rng.random_bool(self.clifford_exp_fraction.clamp(0.0, 1.0)) {
            return Gate::Exp {
                pauli: random_pauli(n, rng),
                theta: Angle::new(rng.random_range(-8..=8), 4),
            };
        }
        let q = rng.random_range(0..n);
        let kinds = if n > 1 { 8 } else { 6 };
        match rng.random_range(0..kinds) {
            0 | 1 => Gate::H(q),
            2 => Gate::S(q),
            3 => Gate::Sdg(q),
            4 => match rng.random_range(0..3) {
                0 => Gate::X(q),
                1 => Gate::Y(q),
                _ => Gate::Z(q),
            },
            5 => Gate::S(q),
            k => {
                let mut b = rng.random_range(0..n - 1);
                if b >= q {
                    b += 1;
                }
                if k == 6 {
                    Gate::CX(q, b)
                } else {
                    Gate::CZ(q, b)
                }
            }
        }
    }

    fn random_non_clifford<R: Rng + ?Sized>(&self, rng: &mut R) -> Gate {
        if rng.random_bool(self.t_fraction.clamp(0.0, 1.0)) {
            let q = rng.random_range(0..self.n);
            return if rng.random_bool(0.5) {
                Gate::T(q)
            } else {
                Gate::Tdg(q)
            };
        }
        const DENOMS: [i64; 7] = [3, 5, 6, 7, 8, 12, 16];
        loop {
            let den = DENOMS[rng.random_range(0..DENOMS.len())];
            let theta = Angle::new(rng.random_range(-2 * den..=2 * den), den);
            if !theta.is_clifford() {
                return Gate::Exp {
                    pauli: random_pauli(self.n, rng),
                    theta,
                };
            }
        }
    }
}

/// Uniformly random non-identity Hermitian Pauli with a random sign.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliOperator {
    loop {
        let labels: Vec<SinglePauli> = (0..n)
            .map(|_| match rng.random_range(0..4) {
                0 => SinglePauli::I,
                1 => SinglePauli::X,
                2 => SinglePauli::Y,
                _ => SinglePauli::Z,
            })
            .collect();
        let mut p = PauliOperator::from_labels(&labels);
        if p.is_identity() {
            continue;
        }
        if rng.random_bool(0.5) {
            p.mul_phase(2);
        }
        return p;
    }
}
