//! Dense statevector reference simulator.
//!
//! Everything here works from gate matrices and Pauli labels alone, with no
//! tableau or CH-form code, so it can serve as an independent check.

use num_complex::Complex64;

use crate::chform::MAX_DENSE_QUBITS;
use crate::circuit::{Circuit, Gate};
use crate::clifford::CliffordGate;
use crate::error::{check_dims, Error, Result};
use crate::pauli::{PauliOperator, SinglePauli};
use crate::BitString;

type C = Complex64;
type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<C>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

fn single_matrix(p: SinglePauli) -> Mat2 {
    match p {
        SinglePauli::I => [[ONE, ZERO], [ZERO, ONE]],
        SinglePauli::X => [[ZERO, ONE], [ONE, ZERO]],
        SinglePauli::Y => [[ZERO, -I], [I, ZERO]],
        SinglePauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

fn named_matrix(g: &Gate) -> Option<(usize, Mat2)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = C::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    Some(match *g {
        Gate::H(q) => (q, [[C::new(h, 0.0), C::new(h, 0.0)], [C::new(h, 0.0), C::new(-h, 0.0)]]),
        Gate::S(q) => (q, [[ONE, ZERO], [ZERO, I]]),
        Gate::Sdg(q) => (q, [[ONE, ZERO], [ZERO, -I]]),
        Gate::X(q) => (q, single_matrix(SinglePauli::X)),
        Gate::Y(q) => (q, single_matrix(SinglePauli::Y)),
        Gate::Z(q) => (q, single_matrix(SinglePauli::Z)),
        Gate::T(q) => (q, [[ONE, ZERO], [ZERO, t]]),
        Gate::Tdg(q) => (q, [[ONE, ZERO], [ZERO, t.conj()]]),
        _ => return None,
    })
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(DenseState { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<C>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        check_size(n)?;
        Ok(DenseState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C> {
        self.amps
    }

    pub fn amplitude(&self, x: &BitString) -> Result<C> {
        check_dims(x.len(), self.n)?;
        Ok(self.amps[x.to_index() as usize])
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: C) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        if let Some((q, m)) = named_matrix(g) {
            crate::error::check_qubit(q, self.n)?;
            self.apply_single(q, &m);
            return Ok(());
        }
        match g {
            Gate::CX(c, t) | Gate::CZ(c, t) => {
                crate::error::check_qubit(*c, self.n)?;
                crate::error::check_qubit(*t, self.n)?;
                if c == t {
                    return Err(Error::RepeatedQubit(*c));
                }
                let (cb, tb) = (1usize << c, 1usize << t);
                let is_cx = matches!(g, Gate::CX(..));
                for i in 0..self.amps.len() {
                    if i & cb != 0 {
                        if is_cx {
                            if i & tb == 0 {
                                self.amps.swap(i, i | tb);
                            }
                        } else if i & tb != 0 {
                            self.amps[i] = -self.amps[i];
                        }
                    }
                }
                Ok(())
            }
            Gate::Exp { pauli, theta } => self.apply_pauli_exponential(pauli, theta.radians()),
            _ => unreachable!("single-qubit gates handled above"),
        }
    }

    pub fn apply_clifford(&mut self, g: CliffordGate) -> Result<()> {
        let gate = match g {
            CliffordGate::H(q) => Gate::H(q),
            CliffordGate::S(q) => Gate::S(q),
            CliffordGate::Sdg(q) => Gate::Sdg(q),
            CliffordGate::X(q) => Gate::X(q),
            CliffordGate::Y(q) => Gate::Y(q),
            CliffordGate::Z(q) => Gate::Z(q),
            CliffordGate::CX(a, b) => Gate::CX(a, b),
            CliffordGate::CZ(a, b) => Gate::CZ(a, b),
        };
        self.apply_gate(&gate)
    }

    /// `P|ψ⟩`, built from the per-qubit label matrices.
    pub fn pauli_applied(&self, p: &PauliOperator) -> Result<Vec<C>> {
        check_dims(p.n(), self.n)?;
        let labels: Vec<Mat2> = (0..self.n).map(|q| single_matrix(p.get(q))).collect();
        let token = [ONE, I, -ONE, -I][p.label_phase() as usize];
        let flip: usize = (0..self.n)
            .filter(|&q| matches!(p.get(q), SinglePauli::X | SinglePauli::Y))
            .map(|q| 1usize << q)
            .sum();
        let mut out = vec![ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let j = i ^ flip;
            let mut f = token;
            for (q, m) in labels.iter().enumerate() {
                f *= m[(j >> q) & 1][(i >> q) & 1];
            }
            out[j] += f * a;
        }
        Ok(out)
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.amps = self.pauli_applied(p)?;
        Ok(())
    }

    /// `exp(iθP) = cos θ + i sin θ P`.
    pub fn apply_pauli_exponential(&mut self, p: &PauliOperator, theta: f64) -> Result<()> {
        let pp = self.pauli_applied(p)?;
        let (c, s) = (theta.cos(), theta.sin());
        for (a, b) in self.amps.iter_mut().zip(pp) {
            *a = *a * c + I * s * b;
        }
        Ok(())
    }
}

/// Dense simulation of a circuit from `|0^n⟩`, global phase included.
pub fn run(c: &Circuit) -> Result<DenseState> {
    let mut st = DenseState::zero(c.n())?;
    for g in c.gates() {
        st.apply_gate(g)?;
    }
    st.scale(C::from_polar(1.0, c.global_phase().radians()));
    Ok(st)
}

/// `‖a − b‖₂`, sensitive to global phase.
pub fn fidelity_distance(a: &DenseState, b: &DenseState) -> Result<f64> {
    check_dims(a.n, b.n)?;
    Ok(vector_distance(&a.amps, &b.amps))
}

pub(crate) fn vector_distance(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Dense `2^n × 2^n` matrix of a Pauli (row-major, index bit `q` = qubit `q`).
pub fn pauli_matrix(p: &PauliOperator) -> Result<Vec<Vec<C>>> {
    let n = p.n();
    check_size(n)?;
    let dim = 1usize << n;
    let mut m = vec![vec![ZERO; dim]; dim];
    for col in 0..dim {
        let mut e = vec![ZERO; dim];
        e[col] = ONE;
        let v = DenseState { n, amps: e }.pauli_applied(p)?;
        for (row, val) in v.into_iter().enumerate() {
            m[row][col] = val;
        }
    }
    Ok(m)
}

/// Dense matrix of `exp(iθP)`.
pub fn pauli_exp_matrix(p: &PauliOperator, theta: f64) -> Result<Vec<Vec<C>>> {
    let mut m = pauli_matrix(p)?;
    let (c, s) = (theta.cos(), theta.sin());
    for (r, row) in m.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = I * s * *v + if r == k { C::new(c, 0.0) } else { ZERO };
        }
    }
    Ok(m)
}
