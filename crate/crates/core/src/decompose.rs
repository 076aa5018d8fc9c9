//! Clifford decompositions `U = Σ_j b_j V_j` of non-Clifford rotations.
//!
//! Every `V_j` is stored as a word of Pauli exponentials `exp(i k π/4 P)` in
//! application order, which is the form the CH-form update consumes directly.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::angle::Angle;
use crate::clifford::CliffordGate;
use crate::error::{check_dims, Error, Result};
use crate::oracle::pauli_exp_matrix;
use crate::pauli::{binary_rank, PauliOperator, SinglePauli};
use crate::recompile::RecompiledCircuit;

type C = Complex64;
pub type Matrix = Vec<Vec<C>>;

/// `coefficient · ∏ exp(i k_t π/4 P_t)`, first factor applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordTerm {
    pub coefficient: C,
    pub word: Vec<(PauliOperator, i64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordDecomposition {
    terms: Vec<CliffordTerm>,
    one_norm: f64,
}

impl CliffordDecomposition {
    pub fn new(terms: Vec<CliffordTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("a decomposition needs at least one term".into()));
        }
        let one_norm = terms.iter().map(|t| t.coefficient.norm()).sum();
        Ok(CliffordDecomposition { terms, one_norm })
    }

    pub fn terms(&self) -> &[CliffordTerm] {
        &self.terms
    }

    pub fn one_norm(&self) -> f64 {
        self.one_norm
    }

    /// `|b_j| / ‖b‖₁`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient.norm() / self.one_norm).collect()
    }

    pub fn n(&self) -> Option<usize> {
        self.terms.iter().flat_map(|t| t.word.first()).map(|(p, _)| p.n()).next()
    }

    /// Dense `Σ b_j V_j` on `n` qubits.
    pub fn to_matrix(&self, n: usize) -> Result<Matrix> {
        let dim = 1usize << n;
        let mut acc = vec![vec![C::new(0.0, 0.0); dim]; dim];
        for t in &self.terms {
            let m = word_matrix(n, &t.word)?;
            for r in 0..dim {
                for c in 0..dim {
                    acc[r][c] += t.coefficient * m[r][c];
                }
            }
        }
        Ok(acc)
    }
}

fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|r| (0..dim).map(|c| if r == c { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect()
}

pub(crate) fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    (0..dim)
        .map(|r| (0..dim).map(|c| (0..dim).map(|k| a[r][k] * b[k][c]).sum()).collect())
        .collect()
}

/// Dense matrix of a Pauli-exponential word.
pub fn word_matrix(n: usize, word: &[(PauliOperator, i64)]) -> Result<Matrix> {
    let mut m = identity(1 << n);
    for (p, k) in word {
        check_dims(p.n(), n)?;
        m = matmul(&pauli_exp_matrix(p, *k as f64 * FRAC_PI_4)?, &m);
    }
    Ok(m)
}

/// `Ω(exp(iθP)) = cos θ + (√2 − 1) sin θ` for `θ ∈ [0, π/4]`.
pub fn single_rotation_norm(theta: f64) -> f64 {
    theta.cos() + (SQRT_2 - 1.0) * theta.sin()
}

/// One-norm of the equal-angle three-rotation expansion, `θ ∈ [0, π/8]`.
pub fn xyz_triple_norm(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let s2 = (2.0 * theta).sin();
    (3.0 * theta).cos() - s + s2 * (c - s) + 2.0 * SQRT_2 * s2 * s
}

/// `exp(iθQ) = (cos θ − sin θ) I + √2 sin θ · exp(iπ/4 Q)` for `0 < θ < π/4`.
pub fn optimal_single_rotation(q: &PauliOperator, theta: Angle) -> Result<CliffordDecomposition> {
    if !(theta > Angle::ZERO && theta < Angle::new(1, 4)) {
        return Err(Error::InvalidArgument(format!("angle {theta}π outside (0, π/4)")));
    }
    if !q.is_hermitian() {
        return Err(Error::InvalidArgument(format!("{q} is not Hermitian")));
    }
    let t = theta.radians();
    CliffordDecomposition::new(vec![
        CliffordTerm {
            coefficient: C::new(t.cos() - t.sin(), 0.0),
            word: Vec::new(),
        },
        CliffordTerm {
            coefficient: C::new(SQRT_2 * t.sin(), 0.0),
            word: vec![(q.clone(), 1)],
        },
    ])
}

/// Whether `e^{iθA1} e^{iθA2} e^{iθA3}` has the closed-form expansion: `A1`,
/// `A2` anticommuting Hermitian Paulis and `A3 = i A1 A2`, i.e. the triple is
/// Clifford-equivalent to `(X, Z, Y)` on one qubit.
pub fn is_xyz_axes(axes: [&PauliOperator; 3]) -> bool {
    let [a1, a2, a3] = axes;
    if a1.n() != a2.n() || a1.n() != a3.n() {
        return false;
    }
    if !(a1.is_hermitian() && a2.is_hermitian()) || a1.commutes_unchecked(a2) {
        return false;
    }
    let mut prod = a1.clone();
    prod.mul_right(a2);
    prod.mul_phase(1);
    &prod == a3
}

/// Four-term expansion of `e^{iθA1} e^{iθA2} e^{iθA3}` (matrix-product order).
///
/// With `A1 = X`, `A2 = Z`, `A3 = Y` the terms are `I`, `SH`, `HX`, `SHS`;
/// other admissible axes are the Clifford image of that case.
pub fn xyz_triple(thetas: [Angle; 3], axes: [&PauliOperator; 3]) -> Result<CliffordDecomposition> {
    let theta = thetas[0];
    if thetas[1] != theta || thetas[2] != theta {
        return Err(Error::InvalidArgument("the closed-form triple needs equal angles".into()));
    }
    if !(theta > Angle::ZERO && theta <= Angle::new(1, 8)) {
        return Err(Error::InvalidArgument(format!("angle {theta}π outside (0, π/8]")));
    }
    if !is_xyz_axes(axes) {
        return Err(Error::InvalidArgument(format!(
            "axes ({}, {}, {}) are not of the form (A, B, iAB) with A, B anticommuting",
            axes[0], axes[1], axes[2]
        )));
    }
    let [x, z, y] = axes.map(|p| p.clone());
    let t = theta.radians();
    let s2 = (2.0 * t).sin();
    let e = |k: i32| C::from_polar(1.0, k as f64 * FRAC_PI_4);
    let c_sh = e(1) * s2 * (t.cos() - t.sin());
    let c_hx = SQRT_2 * s2 * t.sin();
    CliffordDecomposition::new(vec![
        CliffordTerm {
            coefficient: C::new((3.0 * t).cos() - t.sin(), 0.0),
            word: Vec::new(),
        },
        // SH = e^{3iπ/4} exp(-3iπ/4 Z) exp(iπ/4 Y)
        CliffordTerm {
            coefficient: c_sh * e(3),
            word: vec![(y.clone(), 1), (z.clone(), -3)],
        },
        // HX = exp(-iπ/2 Z) exp(iπ/4 Y) exp(iπ/2 X)
        CliffordTerm {
            coefficient: C::new(c_hx, 0.0),
            word: vec![(x, 2), (y.clone(), 1), (z.clone(), -2)],
        },
        // SHS = -exp(-3iπ/4 Z) exp(iπ/4 Y) exp(-iπ/4 Z)
        CliffordTerm {
            coefficient: C::new(-c_hx, 0.0),
            word: vec![(z.clone(), -1), (y, 1), (z, -3)],
        },
    ])
}

/// `(global phase, word)` with `gate = phase · word`.
pub fn clifford_gate_word(gate: CliffordGate, n: usize) -> Result<(C, Vec<(PauliOperator, i64)>)> {
    gate.check(n)?;
    let single = |q: usize, kind| PauliOperator::single(n, q, kind).expect("checked");
    let (x, y, z) = (SinglePauli::X, SinglePauli::Y, SinglePauli::Z);
    let e = |k: i32| C::from_polar(1.0, k as f64 * FRAC_PI_4);
    Ok(match gate {
        // H = i exp(-iπ/2 Z) exp(iπ/4 Y)
        CliffordGate::H(q) => (e(2), vec![(single(q, y), 1), (single(q, z), -2)]),
        // S = e^{iπ/4} exp(-iπ/4 Z)
        CliffordGate::S(q) => (e(1), vec![(single(q, z), -1)]),
        CliffordGate::Sdg(q) => (e(-1), vec![(single(q, z), 1)]),
        // P = -i exp(iπ/2 P)
        CliffordGate::X(q) => (e(-2), vec![(single(q, x), 2)]),
        CliffordGate::Y(q) => (e(-2), vec![(single(q, y), 2)]),
        CliffordGate::Z(q) => (e(-2), vec![(single(q, z), 2)]),
        // CZ = e^{iπ/4} exp(iπ/4 ZZ) exp(-iπ/4 Z_a) exp(-iπ/4 Z_b)
        CliffordGate::CZ(a, b) => {
            let mut zz = single(a, z);
            zz.mul_right(&single(b, z));
            (e(1), vec![(single(b, z), -1), (single(a, z), -1), (zz, 1)])
        }
        CliffordGate::CX(c, t) => {
            let (ph, h) = clifford_gate_word(CliffordGate::H(t), n)?;
            let (pz, cz) = clifford_gate_word(CliffordGate::CZ(c, t), n)?;
            let mut word = h.clone();
            word.extend(cz);
            word.extend(h);
            (ph * pz * ph, word)
        }
    })
}

/// How consecutive rotations are grouped before decomposing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Grouping {
    #[default]
    PerGate,
    XyzTriples,
}

/// A decomposition covering `len` consecutive rotations starting at `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub start: usize,
    pub len: usize,
    pub decomposition: CliffordDecomposition,
}

/// Decomposes the rotations of `rc` in application order.
pub fn decompose_rotations(rc: &RecompiledCircuit, grouping: Grouping) -> Result<Vec<Factor>> {
    let rots = rc.rotations();
    let mut out = Vec::new();
    let mut i = 0;
    while i < rots.len() {
        if grouping == Grouping::XyzTriples && i + 3 <= rots.len() {
            // R_{i+2} R_{i+1} R_i = e^{iθ Q_{i+2}} e^{iθ Q_{i+1}} e^{iθ Q_i}
            let axes = [&rots[i + 2].pauli, &rots[i + 1].pauli, &rots[i].pauli];
            let thetas = [rots[i + 2].theta, rots[i + 1].theta, rots[i].theta];
            if let Ok(d) = xyz_triple(thetas, axes) {
                out.push(Factor { start: i, len: 3, decomposition: d });
                i += 3;
                continue;
            }
        }
        let r = &rots[i];
        out.push(Factor {
            start: i,
            len: 1,
            decomposition: optimal_single_rotation(&r.pauli, r.theta)?,
        });
        i += 1;
    }
    Ok(out)
}

/// `‖a‖₁ = Π` of the per-factor one-norms.
pub fn circuit_extent(rc: &RecompiledCircuit, grouping: Grouping) -> Result<f64> {
    Ok(decompose_rotations(rc, grouping)?
        .iter()
        .map(|f| f.decomposition.one_norm())
        .product())
}

/// Advisory: a contractive expansion is expected iff the binary rank is
/// below the number of rotations.
pub fn predict_contraction(paulis: &[PauliOperator]) -> Result<bool> {
    if paulis.is_empty() {
        return Err(Error::InvalidArgument("need at least one Pauli".into()));
    }
    Ok(binary_rank(paulis)? < paulis.len())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    pub matches: bool,
    pub residual: f64,
    pub one_norm: f64,
}

/// Compares `Σ b_j V_j` with `target` entrywise (`n ≤ 2`).
pub fn verify_decomposition(target: &Matrix, d: &CliffordDecomposition) -> Result<Verification> {
    let dim = target.len();
    let n = match dim {
        2 => 1,
        4 => 2,
        _ => return Err(Error::InvalidArgument(format!("target must be 2×2 or 4×4, got {dim} rows"))),
    };
    if target.iter().any(|row| row.len() != dim) {
        return Err(Error::InvalidArgument("target matrix is not square".into()));
    }
    if let Some(dn) = d.n() {
        check_dims(dn, n)?;
    }
    let m = d.to_matrix(n)?;
    let residual = (0..dim)
        .flat_map(|r| (0..dim).map(move |c| (r, c)))
        .map(|(r, c)| (m[r][c] - target[r][c]).norm())
        .fold(0.0, f64::max);
    Ok(Verification {
        matches: residual < 1e-9,
        residual,
        one_norm: d.one_norm(),
    })
}

/// A single-qubit Clifford: `matrix = scale · word`, matrix phase-normalized.
struct GroupElement {
    matrix: [[C; 2]; 2],
    scale: C,
    word: Vec<(SinglePauli, i64)>,
}

fn mat2_mul(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// The 24 single-qubit Cliffords modulo phase, breadth-first over `{H, S}`.
fn clifford_group() -> &'static [GroupElement] {
    static GROUP: OnceLock<Vec<GroupElement>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        let gens: [([[C; 2]; 2], CliffordGate); 2] = [
            ([[C::new(h, 0.0), C::new(h, 0.0)], [C::new(h, 0.0), C::new(-h, 0.0)]], CliffordGate::H(0)),
            ([[one, zero], [zero, C::new(0.0, 1.0)]], CliffordGate::S(0)),
        ];
        let normalize = |m: [[C; 2]; 2]| -> ([[C; 2]; 2], C) {
            let first = m.iter().flatten().find(|v| v.norm() > 1e-9).expect("unitary");
            let ph = first.conj() / first.norm();
            (m.map(|row| row.map(|v| v * ph)), ph)
        };
        let key = |m: &[[C; 2]; 2]| -> Vec<i64> {
            m.iter().flatten().flat_map(|v| [(v.re * 1e6).round() as i64, (v.im * 1e6).round() as i64]).collect()
        };
        let mut group = vec![GroupElement { matrix: [[one, zero], [zero, one]], scale: one, word: Vec::new() }];
        let mut seen = vec![key(&group[0].matrix)];
        let mut i = 0;
        while i < group.len() {
            for (gm, g) in &gens {
                let (gphase, gword) = clifford_gate_word(*g, 1).expect("one qubit");
                let raw = mat2_mul(gm, &group[i].matrix);
                let (m, ph) = normalize(raw);
                let k = key(&m);
                if seen.contains(&k) {
                    continue;
                }
                seen.push(k);
                // raw = g · M_i = gphase·W_g · scale_i·W_i
                let mut word = group[i].word.clone();
                word.extend(gword.iter().map(|(p, k)| (p.get(0), *k)));
                let scale = group[i].scale * gphase * ph;
                group.push(GroupElement { matrix: m, scale, word });
            }
            i += 1;
        }
        debug_assert_eq!(group.len(), 24);
        group
    })
}

/// L1-minimal decomposition of a 2×2 unitary over the single-qubit Cliffords.
///
/// Solves `min Σ|a_j|` subject to `Σ a_j C_j = U` with ADMM on the 48 real
/// coefficients, then re-imposes the constraint exactly on the support.
pub fn l1_minimal_single_qubit(target: &[[C; 2]; 2]) -> Result<CliffordDecomposition> {
    let group = clifford_group();
    let m = group.len();
    // Row 2e/2e+1: real/imag part of matrix entry e.
    let mut a = DMatrix::<f64>::zeros(8, 2 * m);
    for (j, g) in group.iter().enumerate() {
        for e in 0..4 {
            let v = g.matrix[e / 2][e % 2];
            // (x + iy) v
            a[(2 * e, 2 * j)] = v.re;
            a[(2 * e, 2 * j + 1)] = -v.im;
            a[(2 * e + 1, 2 * j)] = v.im;
            a[(2 * e + 1, 2 * j + 1)] = v.re;
        }
    }
    let b = DVector::from_iterator(8, (0..4).flat_map(|e| {
        let v = target[e / 2][e % 2];
        [v.re, v.im]
    }));
    let gram_inv = (&a * a.transpose())
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("Clifford span is degenerate".into()))?;
    let project = |v: &DVector<f64>| -> DVector<f64> {
        v - a.transpose() * (&gram_inv * (&a * v - &b))
    };

    const MAX_ITERS: usize = 100_000;
    const TOL: f64 = 1e-8;
    let rho = 1.0;
    let mut z = project(&DVector::zeros(2 * m));
    let mut w = DVector::<f64>::zeros(2 * m);
    let mut converged = false;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        let x = project(&(&z - &w));
        let v = &x + &w;
        let z_prev = z.clone();
        for j in 0..m {
            let (re, im) = (v[2 * j], v[2 * j + 1]);
            let r = re.hypot(im);
            let f = if r > 1.0 / rho { 1.0 - 1.0 / (rho * r) } else { 0.0 };
            z[2 * j] = re * f;
            z[2 * j + 1] = im * f;
        }
        w += &x - &z;
        let primal = (&x - &z).norm();
        let dual = rho * (&z - &z_prev).norm();
        residual = primal.max(dual);
        if residual < TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SolverFailed { iterations: MAX_ITERS, residual });
    }

    // Least-norm correction restricted to the support.
    let support: Vec<usize> = (0..m).filter(|&j| z[2 * j].hypot(z[2 * j + 1]) > 1e-9).collect();
    let cols: Vec<usize> = support.iter().flat_map(|&j| [2 * j, 2 * j + 1]).collect();
    let a_s = a.select_columns(cols.iter());
    let z_s = DVector::from_iterator(cols.len(), cols.iter().map(|&c| z[c]));
    let r = &b - &a_s * &z_s;
    let svd = a_s.clone().svd(true, true);
    let delta = svd
        .solve(&r, 1e-12)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let z_s = z_s + delta;

    let mut terms = Vec::new();
    for (idx, &j) in support.iter().enumerate() {
        let coef = C::new(z_s[2 * idx], z_s[2 * idx + 1]);
        if coef.norm() < 1e-9 {
            continue;
        }
        let g = &group[j];
        let word = g
            .word
            .iter()
            .map(|(p, k)| (PauliOperator::from_labels(&[*p]), *k))
            .collect();
        terms.push(CliffordTerm { coefficient: coef * g.scale, word });
    }
    CliffordDecomposition::new(terms)
}
