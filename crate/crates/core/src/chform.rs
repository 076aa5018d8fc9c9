//! Phase-sensitive stabilizer states `|φ⟩ = ω U_C U_H |s⟩`.
//!
//! `U_C` is a product of S, CX and CZ gates (so `U_C|0⟩ = |0⟩`), `U_H` is a
//! layer of Hadamards on the qubits in `v`, and `s` is a basis label. The
//! tableau holds the pullbacks `A(P) = U_C† P U_C`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::angle::Angle;
use crate::bits::{self, BitString};
use crate::clifford::{CliffordGate, Tableau};
use crate::error::{check_dims, Error, Result};
use crate::pauli::PauliOperator;

/// Largest register for which dense statevectors are produced.
pub const MAX_DENSE_QUBITS: usize = 14;

pub(crate) const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Clone, Debug, PartialEq)]
pub struct CHForm {
    n: usize,
    omega: Complex64,
    tableau: Tableau,
    v: Vec<u64>,
    s: Vec<u64>,
}

/// Canonical stabilizer group of a CH form. Equal keys mean the states
/// agree up to a scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerKey {
    n: usize,
    rows: Vec<(Vec<u64>, Vec<u64>, u8)>,
}

impl CHForm {
    /// `|0^n⟩`.
    pub fn init_zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        let w = bits::word_count(n);
        Ok(CHForm {
            n,
            omega: Complex64::new(1.0, 0.0),
            tableau: Tableau::identity(n),
            v: vec![0; w],
            s: vec![0; w],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn scale_omega(&mut self, factor: Complex64) {
        self.omega *= factor;
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn hadamard_mask(&self) -> BitString {
        BitString::from_words(self.n, self.v.clone())
    }

    pub fn basis(&self) -> BitString {
        BitString::from_words(self.n, self.s.clone())
    }

    pub fn apply_clifford_gate(&mut self, gate: CliffordGate) -> Result<()> {
        gate.check(self.n)?;
        use CliffordGate::*;
        match gate {
            H(q) => self.apply_h(q),
            X(_) | Y(_) | Z(_) => {
                let (q, _) = gate.qubits();
                let kind = match gate {
                    X(_) => crate::pauli::SinglePauli::X,
                    Y(_) => crate::pauli::SinglePauli::Y,
                    _ => crate::pauli::SinglePauli::Z,
                };
                let p = PauliOperator::single(self.n, q, kind)?;
                self.apply_pauli_unchecked(&p);
            }
            // V U_C has pullback A ∘ conj_{V†}
            S(_) | Sdg(_) | CX(..) | CZ(..) => self.tableau.precompose(gate.inverse()),
        }
        Ok(())
    }

    /// `|φ⟩ ← P|φ⟩` for a Hermitian Pauli `P`.
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        check_dims(p.n(), self.n)?;
        if !p.is_hermitian() {
            return Err(Error::InvalidArgument(format!("{p} is not Hermitian")));
        }
        self.apply_pauli_unchecked(p);
        Ok(())
    }

    fn apply_pauli_unchecked(&mut self, p: &PauliOperator) {
        let (t, a) = self.frame_action(p);
        self.s = t;
        self.omega *= I_POW[a as usize];
    }

    /// `|φ⟩ ← exp(iθP)|φ⟩` for `θ ∈ (π/4)ℤ`.
    pub fn apply_pauli_exponential(&mut self, p: &PauliOperator, theta: Angle) -> Result<()> {
        let k = theta
            .as_quarter_turns()
            .ok_or_else(|| Error::NotCliffordAngle(theta.to_string()))?;
        self.apply_pauli_rotation(p, k)
    }

    /// `|φ⟩ ← exp(i k π/4 P)|φ⟩`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliOperator, quarter_turns: i64) -> Result<()> {
        check_dims(p.n(), self.n)?;
        if !p.is_hermitian() {
            return Err(Error::InvalidArgument(format!("{p} is not Hermitian")));
        }
        self.apply_pauli_rotation_unchecked(p, quarter_turns);
        Ok(())
    }

    pub(crate) fn apply_pauli_rotation_unchecked(&mut self, p: &PauliOperator, quarter_turns: i64) {
        // exp(ikπ/4 P) = cos(kπ/4) + i sin(kπ/4) P
        let k = quarter_turns.rem_euclid(8);
        match k {
            0 => {}
            4 => self.omega = -self.omega,
            2 | 6 => {
                self.apply_pauli_unchecked(p);
                self.omega *= if k == 2 { I_POW[1] } else { I_POW[3] };
            }
            _ => {
                // c0 (1 + i^e P) / √2
                let (e, c0) = match k {
                    1 => (1u8, 1.0),
                    3 => (3, -1.0),
                    5 => (1, -1.0),
                    _ => (3, 1.0),
                };
                let (t, a) = self.frame_action(p);
                let d = (e + a) & 3;
                self.omega *= c0;
                if t == self.s {
                    let f = (I_POW[0] + I_POW[d as usize]) * FRAC_1_SQRT_2;
                    debug_assert!((f.norm() - 1.0).abs() < 1e-12);
                    self.omega *= f;
                } else {
                    let s = self.s.clone();
                    self.superpose(&s, &t, d);
                }
            }
        }
    }

    fn apply_h(&mut self, q: usize) {
        // H = (X_q + Z_q)/√2
        let x = PauliOperator::single(self.n, q, crate::pauli::SinglePauli::X).expect("checked");
        let z = PauliOperator::single(self.n, q, crate::pauli::SinglePauli::Z).expect("checked");
        let (t, a) = self.frame_action(&x);
        let (u, b) = self.frame_action(&z);
        if t == u {
            let f = (I_POW[a as usize] + I_POW[b as usize]) * FRAC_1_SQRT_2;
            debug_assert!((f.norm() - 1.0).abs() < 1e-12);
            self.omega *= f;
            self.s = t;
        } else {
            self.omega *= I_POW[a as usize];
            self.superpose(&t, &u, (b + 4 - a) & 3);
        }
    }

    /// `(t, a)` with `P U_C U_H |s⟩ = i^a U_C U_H |t⟩`.
    fn frame_action(&self, p: &PauliOperator) -> (Vec<u64>, u8) {
        let img = self.tableau.image(p);
        let (x, z) = (img.x_words(), img.z_words());
        let mut r = img.phase() as u32;
        // U_H X^a Z^b U_H on a Hadamard qubit gives X^b Z^a (-1)^{ab}
        r += 2 * bits::and3_count(x, z, &self.v);
        let mut t = self.s.clone();
        let mut zf = vec![0u64; x.len()];
        for i in 0..x.len() {
            let m = self.v[i];
            t[i] ^= (x[i] & !m) | (z[i] & m);
            zf[i] = (z[i] & !m) | (x[i] & m);
        }
        r += 2 * bits::and_count(&zf, &self.s);
        (t, (r & 3) as u8)
    }

    /// Rewrites `ω U_C U_H (|t⟩ + i^d|u⟩)/√2`, `t ≠ u`, as a CH form.
    fn superpose(&mut self, t: &[u64], u: &[u64], d: u8) {
        let w = t.len();
        let delta: Vec<u64> = t.iter().zip(u).map(|(a, b)| a ^ b).collect();
        let v0: Vec<u64> = (0..w).map(|i| delta[i] & !self.v[i]).collect();
        let v1: Vec<u64> = (0..w).map(|i| delta[i] & self.v[i]).collect();
        let mut y = t.to_vec();
        let q;
        if let Some(q0) = bits::first_set(&v0) {
            q = q0;
            let mut fan = v0.clone();
            bits::flip(&mut fan, q);
            self.tableau.postcompose_cx_fan_out(q, &fan);
            self.tableau.postcompose_cz_fan(q, &v1);
            if bits::get(t, q) {
                let mut rest = delta.clone();
                bits::flip(&mut rest, q);
                bits::xor_into(&mut y, &rest);
            }
        } else {
            q = bits::first_set(&v1).expect("t and u differ");
            let mut controls = v1.clone();
            bits::flip(&mut controls, q);
            self.tableau.postcompose_cx_fan_in(&controls, q);
            if bits::get(t, q) {
                bits::xor_into(&mut y, &controls);
            }
        }
        let (k, b, c, lambda) = local_state(bits::get(&self.v, q), bits::get(&y, q), d);
        // U_C ← U_C S^k, whose pullback is conj_{S^{-k}} ∘ A
        self.tableau.postcompose_sdg_power(q, k);
        bits::set(&mut self.v, q, b);
        bits::set(&mut y, q, c);
        self.s = y;
        self.omega *= lambda;
    }

    /// `⟨x|φ⟩`.
    pub fn amplitude(&self, x: &BitString) -> Result<Complex64> {
        check_dims(x.len(), self.n)?;
        Ok(self.amplitude_words(x.words()))
    }

    pub(crate) fn amplitude_words(&self, x: &[u64]) -> Complex64 {
        // ⟨x|U_C = ⟨0|A(X(x)) with A(X(x)) = i^μ X(f) Z(g)
        let img = self.tableau.x_product_image(x);
        let (f, g) = (img.x_words(), img.z_words());
        if f.iter().zip(&self.s).zip(&self.v).any(|((f, s), v)| (f ^ s) & !v != 0) {
            return Complex64::new(0.0, 0.0);
        }
        let mut r = img.phase() as u32;
        r += 2 * (bits::and_count(f, g) + bits::and3_count(f, &self.s, &self.v));
        let hs = bits::count(&self.v) as i32;
        self.omega * I_POW[(r & 3) as usize] * 2f64.powi(-hs).sqrt()
    }

    /// Dense `2^n` vector; index bit `q` is qubit `q`.
    pub fn extract_statevector(&self) -> Result<Vec<Complex64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n: self.n,
                max: MAX_DENSE_QUBITS,
            });
        }
        Ok((0..1u64 << self.n)
            .map(|i| self.amplitude_words(&[i]))
            .collect())
    }

    /// Generators `U_C U_H (±Z_j or ±X_j) U_H U_C†` of the stabilizer group.
    pub fn stabilizer_generators(&self) -> Vec<PauliOperator> {
        self.generators_with(&self.tableau.inverse())
    }

    fn generators_with(&self, forward: &Tableau) -> Vec<PauliOperator> {
        (0..self.n)
            .map(|j| {
                let kind = if bits::get(&self.v, j) {
                    crate::pauli::SinglePauli::X
                } else {
                    crate::pauli::SinglePauli::Z
                };
                let mut g = PauliOperator::single(self.n, j, kind).expect("in range");
                if bits::get(&self.s, j) {
                    g.mul_phase(2);
                }
                forward.image(&g)
            })
            .collect()
    }

    /// Reduced row echelon form of the stabilizer group, signs included.
    pub fn stabilizer_key(&self) -> StabilizerKey {
        self.key_and_anchor().0
    }

    /// The key plus a basis label with nonzero amplitude.
    fn key_and_anchor(&self) -> (StabilizerKey, Vec<u64>) {
        let forward = self.tableau.inverse();
        let mut rows = self.generators_with(&forward);
        let n = self.n;
        let mut rank = 0;
        for col in 0..2 * n {
            let bit = |p: &PauliOperator| {
                if col < n {
                    p.x_bit(col)
                } else {
                    p.z_bit(col - n)
                }
            };
            let Some(pivot) = (rank..n).find(|&r| bit(&rows[r])) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row) {
                    row.mul_right(&pivot_row);
                }
            }
            rank += 1;
        }
        debug_assert_eq!(rank, n);
        let key = StabilizerKey {
            n,
            rows: rows
                .into_iter()
                .map(|p| (p.x_words().to_vec(), p.z_words().to_vec(), p.phase()))
                .collect(),
        };
        // F(X(s)) has x-part x* with A(X(x*)) ∝ X(s) Z(·), so ⟨x*|φ⟩ ≠ 0.
        let xs = PauliOperator::from_parts(n, self.s.clone(), vec![0; self.s.len()], 0);
        let anchor = forward.image(&xs).x_words().to_vec();
        (key, anchor)
    }

    /// `Some(c)` with `|self⟩ = c |other⟩` when the states are collinear.
    pub fn collinear_ratio(&self, other: &CHForm) -> Option<Complex64> {
        if self.n != other.n {
            return None;
        }
        let (ka, anchor) = self.key_and_anchor();
        if ka != other.stabilizer_key() {
            return None;
        }
        Some(self.amplitude_words(&anchor) / other.amplitude_words(&anchor))
    }

    /// Line-oriented debug text: `omega a+bi`, `uh`, `s`, then `x<j>`/`z<j>` rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "chform {}", self.n);
        let _ = writeln!(out, "omega {}{:+}i", self.omega.re, self.omega.im);
        let _ = writeln!(out, "uh {}", self.hadamard_mask());
        let _ = writeln!(out, "s {}", self.basis());
        for j in 0..self.n {
            let _ = writeln!(out, "x{j} {}", self.tableau.x_image(j));
        }
        for j in 0..self.n {
            let _ = writeln!(out, "z{j} {}", self.tableau.z_image(j));
        }
        out
    }

    /// Parses [`CHForm::to_text`] output from an iterator of `(line_no, line)`.
    pub(crate) fn parse_lines<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let mut next = |tag: &str| -> Result<(usize, &'a str)> {
            let (no, line) = lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing `{tag}` line"),
            })?;
            match line.split_once(' ') {
                Some((head, rest)) if head == tag => Ok((no, rest.trim())),
                _ => Err(Error::Parse {
                    line: no,
                    message: format!("expected `{tag} ...`"),
                }),
            }
        };
        let wrap = |no: usize| move |e: Error| Error::Parse {
            line: no,
            message: e.to_string(),
        };
        let (no, n) = next("chform")?;
        let n: usize = n.parse().map_err(|_| Error::Parse {
            line: no,
            message: "bad qubit count".into(),
        })?;
        let (no, om) = next("omega")?;
        let omega = parse_complex(om).ok_or_else(|| Error::Parse {
            line: no,
            message: format!("bad complex number {om:?}"),
        })?;
        let (no, uh) = next("uh")?;
        let v = BitString::parse_with_len(uh, n).map_err(wrap(no))?;
        let (no, s) = next("s")?;
        let s = BitString::parse_with_len(s, n).map_err(wrap(no))?;
        let mut rows = Vec::with_capacity(2 * n);
        for kind in ["x", "z"] {
            for j in 0..n {
                let (no, p) = next(&format!("{kind}{j}"))?;
                let p: PauliOperator = p.parse().map_err(wrap(no))?;
                check_dims(p.n(), n).map_err(wrap(no))?;
                rows.push(p);
            }
        }
        let tableau = Tableau::from_rows(n, &rows)?;
        let mut state = CHForm::init_zero(n)?;
        state.omega = omega;
        state.tableau = tableau;
        state.v = v.words().to_vec();
        state.s = s.words().to_vec();
        Ok(state)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        CHForm::parse_lines(&mut lines)
    }
}

/// `H^{vq}(|a⟩ + i^d|1-a⟩)/√2 = λ S^k H^b |c⟩`, returned as `(k, b, c, λ)`.
fn local_state(vq: bool, a: bool, d: u8) -> (u8, bool, bool, Complex64) {
    let d = d & 3;
    let one = Complex64::new(1.0, 0.0);
    if !vq {
        return if a {
            ((4 - d) & 3, true, false, I_POW[d as usize])
        } else {
            (d, true, false, one)
        };
    }
    let (dd, pre) = if a { ((4 - d) & 3, I_POW[d as usize]) } else { (d, one) };
    let e8 = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let (k, b, c, l) = match dd {
        0 => (0, false, false, one),
        1 => (3, true, false, e8),
        2 => (0, false, true, one),
        _ => (1, true, false, e8.conj()),
    };
    (k, b, c, pre * l)
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last()?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn local_state_table_matches_brute_force() {
        let h = FRAC_1_SQRT_2;
        for vq in [false, true] {
            for a in [false, true] {
                for d in 0..4u8 {
                    let id = I_POW[d as usize];
                    let mut psi = if a { [id, c(1.0, 0.0)] } else { [c(1.0, 0.0), id] };
                    psi = [psi[0] * h, psi[1] * h];
                    if vq {
                        psi = [(psi[0] + psi[1]) * h, (psi[0] - psi[1]) * h];
                    }
                    let (k, b, cc, l) = local_state(vq, a, d);
                    let mut phi = if cc { [c(0.0, 0.0), c(1.0, 0.0)] } else { [c(1.0, 0.0), c(0.0, 0.0)] };
                    if b {
                        phi = [(phi[0] + phi[1]) * h, (phi[0] - phi[1]) * h];
                    }
                    phi[1] *= I_POW[k as usize];
                    let phi = [phi[0] * l, phi[1] * l];
                    assert!(close(&psi, &phi), "vq={vq} a={a} d={d}");
                }
            }
        }
    }

    #[test]
    fn zero_state_amplitudes() {
        let st = CHForm::init_zero(3).unwrap();
        let v = st.extract_statevector().unwrap();
        assert_eq!(v[0], c(1.0, 0.0));
        assert!(v[1..].iter().all(|a| a.norm() == 0.0));
        assert!(CHForm::init_zero(0).is_err());
    }

    #[test]
    fn hadamard_and_phase() {
        let h = FRAC_1_SQRT_2;
        let mut st = CHForm::init_zero(1).unwrap();
        st.apply_clifford_gate(CliffordGate::H(0)).unwrap();
        assert!(close(&st.extract_statevector().unwrap(), &[c(h, 0.0), c(h, 0.0)]));
        st.apply_clifford_gate(CliffordGate::S(0)).unwrap();
        assert!(close(&st.extract_statevector().unwrap(), &[c(h, 0.0), c(0.0, h)]));
    }

    #[test]
    fn bell_state() {
        let h = FRAC_1_SQRT_2;
        let mut st = CHForm::init_zero(2).unwrap();
        st.apply_clifford_gate(CliffordGate::H(0)).unwrap();
        st.apply_clifford_gate(CliffordGate::CX(0, 1)).unwrap();
        let want = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        assert!(close(&st.extract_statevector().unwrap(), &want));
        let amp = st.amplitude(&"11".parse().unwrap()).unwrap();
        assert!((amp - c(h, 0.0)).norm() < 1e-12);
        assert!(st.amplitude(&"1".parse().unwrap()).is_err());
    }

    #[test]
    fn pauli_exponential_examples() {
        let h = FRAC_1_SQRT_2;
        let mut st = CHForm::init_zero(1).unwrap();
        st.apply_pauli_exponential(&p("Z"), Angle::new(1, 2)).unwrap();
        assert!(close(&st.extract_statevector().unwrap(), &[c(0.0, 1.0), c(0.0, 0.0)]));

        let mut st = CHForm::init_zero(1).unwrap();
        st.apply_pauli_exponential(&p("X"), Angle::new(1, 4)).unwrap();
        assert!(close(&st.extract_statevector().unwrap(), &[c(h, 0.0), c(0.0, h)]));

        let mut st = CHForm::init_zero(1).unwrap();
        st.apply_clifford_gate(CliffordGate::H(0)).unwrap();
        let before = st.clone();
        st.apply_pauli_exponential(&p("Z"), Angle::new(1, 1)).unwrap();
        assert_eq!(st.basis(), before.basis());
        assert!((st.omega() + before.omega()).norm() < 1e-15);

        assert!(matches!(
            st.apply_pauli_exponential(&p("Z"), Angle::new(1, 8)),
            Err(Error::NotCliffordAngle(_))
        ));
    }

    #[test]
    fn collinearity_detects_phase_multiples() {
        let mut a = CHForm::init_zero(2).unwrap();
        a.apply_clifford_gate(CliffordGate::H(0)).unwrap();
        a.apply_clifford_gate(CliffordGate::CX(0, 1)).unwrap();
        let mut b = a.clone();
        // ZZ stabilizes the Bell state, so exp(iπ/4 ZZ) only adds a phase
        b.apply_pauli_rotation(&p("ZZ"), 1).unwrap();
        let ratio = b.collinear_ratio(&a).unwrap();
        assert!((ratio - Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).norm() < 1e-12);
        let mut c = a.clone();
        c.apply_pauli_rotation(&p("ZI"), 1).unwrap();
        assert!(c.collinear_ratio(&a).is_none());
    }

    #[test]
    fn text_round_trip() {
        let mut st = CHForm::init_zero(3).unwrap();
        for g in [CliffordGate::H(0), CliffordGate::CX(0, 2), CliffordGate::S(1), CliffordGate::H(1)] {
            st.apply_clifford_gate(g).unwrap();
        }
        st.apply_pauli_rotation(&p("XYZ"), 3).unwrap();
        let text = st.to_text();
        let back = CHForm::from_text(&text).unwrap();
        assert_eq!(back, st);
        assert_eq!(parse_complex("-0.5-1e-3i"), None);
        assert_eq!(parse_complex("-0.5-0.25i"), Some(c(-0.5, -0.25)));
    }
}
