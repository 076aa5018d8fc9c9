//! Elementary Clifford gates and Clifford tableaus.
//!
//! A [`Tableau`] stores the images of the generators `X_j`, `Z_j` under a
//! Pauli-group automorphism `A`, which is enough to evaluate `A` on any
//! Pauli. Whether `A` is `P ↦ U P U†` or `P ↦ U† P U` is up to the owner.

use crate::bits;
use crate::error::{check_qubit, Error, Result};
use crate::pauli::{mul_right_raw, PauliOperator, SinglePauli};

/// Named Clifford gate. Two-qubit gates are `(control, target)` for CX.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        use CliffordGate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) => (q, None),
            CX(a, b) | CZ(a, b) => (a, Some(b)),
        }
    }

    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        check_qubit(a, n)?;
        if let Some(b) = b {
            check_qubit(b, n)?;
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        Ok(())
    }

    /// In-place `P ← g P g†` on a raw row `i^r X[x] Z[z]`.
    #[inline]
    pub(crate) fn conjugate_row(&self, x: &mut [u64], z: &mut [u64], r: &mut u8) {
        use CliffordGate::*;
        match *self {
            H(q) => {
                let (a, b) = (bits::get(x, q), bits::get(z, q));
                bits::set(x, q, b);
                bits::set(z, q, a);
                if a && b {
                    *r = (*r + 2) & 3;
                }
            }
            S(q) => {
                if bits::get(x, q) {
                    bits::flip(z, q);
                    *r = (*r + 1) & 3;
                }
            }
            Sdg(q) => {
                if bits::get(x, q) {
                    bits::flip(z, q);
                    *r = (*r + 3) & 3;
                }
            }
            X(q) => {
                if bits::get(z, q) {
                    *r = (*r + 2) & 3;
                }
            }
            Z(q) => {
                if bits::get(x, q) {
                    *r = (*r + 2) & 3;
                }
            }
            Y(q) => {
                if bits::get(x, q) != bits::get(z, q) {
                    *r = (*r + 2) & 3;
                }
            }
            CX(c, t) => {
                if bits::get(x, c) {
                    bits::flip(x, t);
                }
                if bits::get(z, t) {
                    bits::flip(z, c);
                }
            }
            CZ(a, b) => {
                let (xa, xb) = (bits::get(x, a), bits::get(x, b));
                if xa && xb {
                    *r = (*r + 2) & 3;
                }
                if xb {
                    bits::flip(z, a);
                }
                if xa {
                    bits::flip(z, b);
                }
            }
        }
    }

    /// `g P g†`.
    pub fn conjugate(&self, p: &PauliOperator) -> Result<PauliOperator> {
        self.check(p.n())?;
        let mut out = p.clone();
        let (x, z, r) = out.parts_mut();
        self.conjugate_row(x, z, r);
        Ok(out)
    }
}

/// `e^{i k π/4 P} Q e^{-i k π/4 P}`, applying `Q ↦ iPQ` once per quarter turn
/// when `P` and `Q` anticommute.
pub(crate) fn conjugate_by_exp(q: &mut PauliOperator, p: &PauliOperator, quarter_turns: i64) {
    let k = quarter_turns.rem_euclid(4);
    if k == 0 || q.commutes_unchecked(p) {
        return;
    }
    match k {
        // iPQ
        1 => {
            let mut out = p.clone();
            out.mul_right(q);
            out.mul_phase(1);
            *q = out;
        }
        // (iP)(iP)Q = -Q for anticommuting pairs
        2 => q.mul_phase(2),
        // -iPQ
        _ => {
            let mut out = p.clone();
            out.mul_right(q);
            out.mul_phase(3);
            *q = out;
        }
    }
}

/// Images of the `2n` Pauli generators under an automorphism `A`.
///
/// Row `j < n` holds `A(X_j)`, row `n + j` holds `A(Z_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    phases: Vec<u8>,
}

impl Tableau {
    pub fn identity(n: usize) -> Self {
        let words = bits::word_count(n);
        let mut t = Tableau {
            n,
            words,
            xs: vec![0; 2 * n * words],
            zs: vec![0; 2 * n * words],
            phases: vec![0; 2 * n],
        };
        for j in 0..n {
            bits::set(t.x_row_mut(j), j, true);
            bits::set(t.z_row_mut(n + j), j, true);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Builds a tableau from `[A(X_0), .., A(X_{n-1}), A(Z_0), .., A(Z_{n-1})]`.
    pub fn from_rows(n: usize, rows: &[PauliOperator]) -> Result<Self> {
        if rows.len() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "a tableau on {n} qubits needs {} rows, got {}",
                2 * n,
                rows.len()
            )));
        }
        let mut t = Tableau::identity(n);
        for (i, p) in rows.iter().enumerate() {
            crate::error::check_dims(p.n(), n)?;
            t.set_row(i, p);
        }
        if !t.is_symplectic() {
            return Err(Error::InvalidArgument(
                "tableau rows violate the Pauli commutation pattern".into(),
            ));
        }
        Ok(t)
    }

    /// All `2n` rows, X images first.
    pub fn rows(&self) -> Vec<PauliOperator> {
        (0..2 * self.n).map(|r| self.row(r)).collect()
    }

    #[inline]
    fn x_row(&self, row: usize) -> &[u64] {
        &self.xs[row * self.words..(row + 1) * self.words]
    }

    #[inline]
    fn z_row(&self, row: usize) -> &[u64] {
        &self.zs[row * self.words..(row + 1) * self.words]
    }

    #[inline]
    fn x_row_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.xs[row * self.words..(row + 1) * self.words]
    }

    #[inline]
    fn z_row_mut(&mut self, row: usize) -> &mut [u64] {
        &mut self.zs[row * self.words..(row + 1) * self.words]
    }

    #[inline]
    fn row_parts_mut(&mut self, row: usize) -> (&mut [u64], &mut [u64], &mut u8) {
        let w = self.words;
        (
            &mut self.xs[row * w..(row + 1) * w],
            &mut self.zs[row * w..(row + 1) * w],
            &mut self.phases[row],
        )
    }

    /// `A(X_j)`.
    pub fn x_image(&self, j: usize) -> PauliOperator {
        self.row(j)
    }

    /// `A(Z_j)`.
    pub fn z_image(&self, j: usize) -> PauliOperator {
        self.row(self.n + j)
    }

    fn row(&self, row: usize) -> PauliOperator {
        PauliOperator::from_parts(
            self.n,
            self.x_row(row).to_vec(),
            self.z_row(row).to_vec(),
            self.phases[row],
        )
    }

    fn set_row(&mut self, row: usize, p: &PauliOperator) {
        self.x_row_mut(row).copy_from_slice(p.x_words());
        self.z_row_mut(row).copy_from_slice(p.z_words());
        self.phases[row] = p.phase();
    }

    /// `acc ← acc · row`.
    #[inline]
    pub(crate) fn mul_row_into(&self, acc: &mut PauliOperator, row: usize) {
        let (x, z, r) = acc.parts_mut();
        mul_right_raw(x, z, r, self.x_row(row), self.z_row(row), self.phases[row]);
    }

    /// Image of the product `∏_{j ∈ mask} X_j`.
    pub(crate) fn x_product_image(&self, mask: &[u64]) -> PauliOperator {
        let mut acc = PauliOperator::identity(self.n);
        for j in bits::ones(mask) {
            self.mul_row_into(&mut acc, j);
        }
        acc
    }

    /// `A(P)` for an arbitrary Pauli on the same register.
    pub fn image(&self, p: &PauliOperator) -> PauliOperator {
        debug_assert_eq!(p.n(), self.n);
        // A(i^r X[x] Z[z]) = i^r ∏ A(X_j)^{x_j} ∏ A(Z_j)^{z_j}
        let mut acc = PauliOperator::identity(self.n);
        acc.mul_phase(p.phase());
        for j in bits::ones(p.x_words()) {
            self.mul_row_into(&mut acc, j);
        }
        for j in bits::ones(p.z_words()) {
            self.mul_row_into(&mut acc, self.n + j);
        }
        acc
    }

    /// `A ← A ∘ conj_g`, i.e. `A'(P) = A(g P g†)`.
    pub fn precompose(&mut self, g: CliffordGate) {
        let (a, b) = g.qubits();
        let mut qubits = vec![a];
        qubits.extend(b);
        let mut updates = Vec::with_capacity(4);
        for &q in &qubits {
            for row in [q, self.n + q] {
                let gen = self.generator(row);
                let conj = g.conjugate(&gen).expect("gate checked by caller");
                updates.push((row, self.image(&conj)));
            }
        }
        for (row, p) in updates {
            self.set_row(row, &p);
        }
    }

    /// `A ← A ∘ conj_V` with `V = e^{i k π/4 P}`.
    pub fn precompose_exp(&mut self, p: &PauliOperator, quarter_turns: i64) {
        let k = quarter_turns.rem_euclid(4);
        if k == 0 {
            return;
        }
        let image_p = self.image(p);
        let support: Vec<usize> = bits::ones(p.x_words())
            .chain(bits::ones(p.z_words()))
            .collect();
        let mut rows = Vec::new();
        for q in support {
            for row in [q, self.n + q] {
                if !rows.contains(&row) && !self.generator(row).commutes_unchecked(p) {
                    rows.push(row);
                }
            }
        }
        for row in rows {
            // A(iPG) = i A(P) A(G); A(-G) = -A(G)
            match k {
                2 => self.phases[row] = (self.phases[row] + 2) & 3,
                _ => {
                    let mut out = image_p.clone();
                    self.mul_row_into(&mut out, row);
                    out.mul_phase(if k == 1 { 1 } else { 3 });
                    self.set_row(row, &out);
                }
            }
        }
    }

    /// `A ← conj_g ∘ A`, i.e. `A'(P) = g A(P) g†`.
    pub fn postcompose(&mut self, g: CliffordGate) {
        for row in 0..2 * self.n {
            let (x, z, r) = self.row_parts_mut(row);
            g.conjugate_row(x, z, r);
        }
    }

    /// Postcomposes with `Sdg(q)^k` in one pass: `z_q ^= x_q` for odd `k`, `r += 3k·x_q`.
    pub(crate) fn postcompose_sdg_power(&mut self, q: usize, k: u8) {
        let k = k & 3;
        if k == 0 {
            return;
        }
        let (w, word, bit) = (self.words, q / 64, 1u64 << (q % 64));
        for row in 0..2 * self.n {
            if self.xs[row * w + word] & bit != 0 {
                if k & 1 == 1 {
                    self.zs[row * w + word] ^= bit;
                }
                self.phases[row] = (self.phases[row] + 3 * k) & 3;
            }
        }
    }

    /// Postcomposes with `∏_{t ∈ targets} CX(control, t)`.
    pub(crate) fn postcompose_cx_fan_out(&mut self, control: usize, targets: &[u64]) {
        for row in 0..2 * self.n {
            let (x, z, _) = self.row_parts_mut(row);
            if bits::get(x, control) {
                bits::xor_into(x, targets);
            }
            if bits::parity_and(z, targets) {
                bits::flip(z, control);
            }
        }
    }

    /// Postcomposes with `∏_{c ∈ controls} CX(c, target)`.
    pub(crate) fn postcompose_cx_fan_in(&mut self, controls: &[u64], target: usize) {
        for row in 0..2 * self.n {
            let (x, z, _) = self.row_parts_mut(row);
            if bits::parity_and(x, controls) {
                bits::flip(x, target);
            }
            if bits::get(z, target) {
                bits::xor_into(z, controls);
            }
        }
    }

    /// Postcomposes with `∏_{t ∈ others} CZ(q, t)`.
    pub(crate) fn postcompose_cz_fan(&mut self, q: usize, others: &[u64]) {
        for row in 0..2 * self.n {
            let (x, z, r) = self.row_parts_mut(row);
            let overlap = bits::and_count(x, others);
            if bits::get(x, q) {
                bits::xor_into(z, others);
                *r = ((*r as u32 + 2 * (overlap & 1)) & 3) as u8;
            }
            if overlap & 1 == 1 {
                bits::flip(z, q);
            }
        }
    }

    fn generator(&self, row: usize) -> PauliOperator {
        let (q, kind) = if row < self.n {
            (row, SinglePauli::X)
        } else {
            (row - self.n, SinglePauli::Z)
        };
        PauliOperator::single(self.n, q, kind).expect("row in range")
    }

    /// The inverse automorphism `A⁻¹`.
    pub fn inverse(&self) -> Tableau {
        let n = self.n;
        let w = self.words;
        // Gauss-Jordan on [M | I], M's rows being the (x|z) images.
        let width = 4 * w;
        let mut rows: Vec<Vec<u64>> = (0..2 * n)
            .map(|r| {
                let mut v = vec![0u64; width];
                v[..w].copy_from_slice(self.x_row(r));
                v[w..2 * w].copy_from_slice(self.z_row(r));
                let col = if r < n { r } else { w * 64 + (r - n) };
                bits::set(&mut v[2 * w..], col, true);
                v
            })
            .collect();
        let column = |c: usize| if c < n { c } else { w * 64 + (c - n) };
        for c in 0..2 * n {
            let col = column(c);
            let pivot = (c..2 * n)
                .find(|&r| bits::get(&rows[r], col))
                .expect("tableau is invertible");
            rows.swap(c, pivot);
            let pivot_row = rows[c].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != c && bits::get(row, col) {
                    bits::xor_into(row, &pivot_row);
                }
            }
        }
        // Row c now reads e_c = (coefficients) · M, so the right half holds
        // the bits of A⁻¹(generator c).
        let mut inv = Tableau::identity(n);
        for (c, row) in rows.iter().enumerate() {
            let rhs = &row[2 * w..];
            let mut cand = PauliOperator::identity(n);
            for j in 0..n {
                if bits::get(rhs, j) {
                    cand.mul_right(&self.generator(j));
                }
            }
            for j in 0..n {
                if bits::get(rhs, w * 64 + j) {
                    cand.mul_right(&self.generator(n + j));
                }
            }
            // cand currently is i^t X[a] Z[b]; fix the phase so A(cand) = gen.
            let mut raw = PauliOperator::from_parts(
                n,
                cand.x_words().to_vec(),
                cand.z_words().to_vec(),
                0,
            );
            let img = self.image(&raw);
            debug_assert!(img.same_axis(&self.generator(c)));
            raw.mul_phase((4 - img.phase()) & 3);
            inv.set_row(c, &raw);
        }
        inv
    }

    /// Checks the canonical (anti)commutation pattern of the images.
    pub fn is_symplectic(&self) -> bool {
        let rows = self.rows();
        for a in 0..2 * self.n {
            if !rows[a].is_hermitian() {
                return false;
            }
            for b in 0..2 * self.n {
                let should_anticommute = a != b && a % self.n == b % self.n;
                if rows[a].commutes_unchecked(&rows[b]) == should_anticommute {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_exchanges_x_and_z() {
        assert_eq!(CliffordGate::H(0).conjugate(&p("Z")).unwrap(), p("X"));
        assert_eq!(CliffordGate::H(0).conjugate(&p("Y")).unwrap(), p("-1Y"));
    }

    #[test]
    fn phase_gate_maps_x_to_y() {
        // S X S† = Y, S† X S = -Y
        assert_eq!(CliffordGate::S(0).conjugate(&p("X")).unwrap(), p("Y"));
        assert_eq!(CliffordGate::Sdg(0).conjugate(&p("X")).unwrap(), p("-1Y"));
        assert_eq!(CliffordGate::S(0).conjugate(&p("Y")).unwrap(), p("-1X"));
    }

    #[test]
    fn cx_spreads_x_forward() {
        let g = CliffordGate::CX(0, 1);
        assert_eq!(g.conjugate(&p("XI")).unwrap(), p("XX"));
        assert_eq!(g.conjugate(&p("IZ")).unwrap(), p("ZZ"));
        assert_eq!(g.conjugate(&p("YI")).unwrap(), p("YX"));
    }

    #[test]
    fn cz_and_paulis() {
        let g = CliffordGate::CZ(0, 1);
        assert_eq!(g.conjugate(&p("XI")).unwrap(), p("XZ"));
        assert_eq!(g.conjugate(&p("XX")).unwrap(), p("YY"));
        assert_eq!(CliffordGate::X(0).conjugate(&p("Z")).unwrap(), p("-1Z"));
        assert_eq!(CliffordGate::Y(0).conjugate(&p("Y")).unwrap(), p("Y"));
        assert!(CliffordGate::CZ(1, 1).conjugate(&p("XX")).is_err());
    }

    #[test]
    fn exp_conjugation_follows_quarter_turn_rule() {
        let mut q = p("X");
        conjugate_by_exp(&mut q, &p("Z"), 1);
        // i Z X = i (iY) = -Y
        assert_eq!(q, p("-1Y"));
        let mut q = p("X");
        conjugate_by_exp(&mut q, &p("Z"), -1);
        assert_eq!(q, p("Y"));
        let mut q = p("X");
        conjugate_by_exp(&mut q, &p("Z"), 2);
        assert_eq!(q, p("-1X"));
        let mut q = p("Z");
        conjugate_by_exp(&mut q, &p("Z"), 1);
        assert_eq!(q, p("Z"));
    }

    #[test]
    fn inverse_round_trips() {
        let mut t = Tableau::identity(3);
        for g in [
            CliffordGate::H(0),
            CliffordGate::CX(0, 2),
            CliffordGate::S(2),
            CliffordGate::CZ(1, 2),
            CliffordGate::H(1),
            CliffordGate::Y(1),
        ] {
            t.postcompose(g);
        }
        t.precompose_exp(&p("XYZ"), 1);
        assert!(t.is_symplectic());
        let inv = t.inverse();
        for s in ["XII", "IZI", "YXZ", "-1ZZY"] {
            let q = p(s);
            assert_eq!(inv.image(&t.image(&q)), q);
            assert_eq!(t.image(&inv.image(&q)), q);
        }
    }

    #[test]
    fn pre_and_post_composition_agree_with_direct_conjugation() {
        let gates = [
            CliffordGate::H(1),
            CliffordGate::CX(1, 0),
            CliffordGate::Sdg(0),
            CliffordGate::CZ(0, 2),
        ];
        // forward images of U = g_k ... g_1
        let mut post = Tableau::identity(3);
        for g in gates {
            post.postcompose(g);
        }
        let mut pre = Tableau::identity(3);
        for g in gates.iter().rev() {
            pre.precompose(*g);
        }
        assert_eq!(post, pre);
        let q = p("YZX");
        let mut direct = q.clone();
        for g in gates {
            direct = g.conjugate(&direct).unwrap();
        }
        assert_eq!(post.image(&q), direct);
    }

    #[test]
    fn fan_operations_match_gate_sequences() {
        let mut base = Tableau::identity(4);
        base.postcompose(CliffordGate::H(0));
        base.postcompose(CliffordGate::S(1));
        base.postcompose(CliffordGate::CX(2, 3));
        base.postcompose(CliffordGate::H(3));
        let mask = vec![0b1010u64];

        let mut a = base.clone();
        a.postcompose_cx_fan_out(0, &mask);
        let mut b = base.clone();
        b.postcompose(CliffordGate::CX(0, 1));
        b.postcompose(CliffordGate::CX(0, 3));
        assert_eq!(a, b);

        let mut a = base.clone();
        a.postcompose_cx_fan_in(&mask, 0);
        let mut b = base.clone();
        b.postcompose(CliffordGate::CX(1, 0));
        b.postcompose(CliffordGate::CX(3, 0));
        assert_eq!(a, b);

        let mut a = base.clone();
        a.postcompose_cz_fan(2, &mask);
        let mut b = base.clone();
        b.postcompose(CliffordGate::CZ(2, 1));
        b.postcompose(CliffordGate::CZ(2, 3));
        assert_eq!(a, b);
    }
}
