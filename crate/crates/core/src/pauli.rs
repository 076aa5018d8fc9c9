//! n-qubit Pauli operators in binary symplectic form.
//!
//! A [`PauliOperator`] stores bit vectors `x`, `z` and a phase exponent `r`
//! and denotes the operator `i^r · X[x] · Z[z]`, where `X[x]` and `Z[z]` are
//! tensor products over the qubits with the X part to the left. The
//! Hermitian Pauli labelled by `(x, z)` is `P(x,z) = i^{x·z} X[x] Z[z]`; every
//! Hermitian operator therefore has `r ≡ x·z (mod 2)` and its sign is
//! `i^{r - x·z} = ±1`.
//!
//! Text form lists one of `I X Y Z` per qubit, qubit 0 first, with an
//! optional leading phase token `+1`, `-1`, `+i` or `-i`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{self, BitString};
use crate::error::{check_dims, check_qubit, Error, Result};

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SinglePauli {
    I,
    X,
    Y,
    Z,
}

impl SinglePauli {
    fn bits(self) -> (bool, bool) {
        match self {
            SinglePauli::I => (false, false),
            SinglePauli::X => (true, false),
            SinglePauli::Y => (true, true),
            SinglePauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => SinglePauli::I,
            (true, false) => SinglePauli::X,
            (true, true) => SinglePauli::Y,
            (false, true) => SinglePauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            SinglePauli::I => 'I',
            SinglePauli::X => 'X',
            SinglePauli::Y => 'Y',
            SinglePauli::Z => 'Z',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = bits::word_count(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    pub(crate) fn from_parts(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        debug_assert_eq!(x.len(), bits::word_count(n));
        debug_assert_eq!(z.len(), bits::word_count(n));
        PauliOperator {
            n,
            x,
            z,
            phase: phase & 3,
        }
    }

    /// The Hermitian operator `P(x,z) = i^{x·z} X[x] Z[z]`.
    pub fn hermitian_from_xz(x: &BitString, z: &BitString) -> Result<Self> {
        check_dims(x.len(), z.len())?;
        let phase = (bits::and_count(x.words(), z.words()) & 3) as u8;
        Ok(PauliOperator::from_parts(
            x.len(),
            x.words().to_vec(),
            z.words().to_vec(),
            phase,
        ))
    }

    /// `kind` acting on `qubit`, identity elsewhere, sign +1.
    pub fn single(n: usize, qubit: usize, kind: SinglePauli) -> Result<Self> {
        check_qubit(qubit, n)?;
        let mut p = PauliOperator::identity(n);
        p.set(qubit, kind);
        Ok(p)
    }

    /// Builds a sign +1 operator from per-qubit labels, qubit 0 first.
    pub fn from_labels(labels: &[SinglePauli]) -> Self {
        let mut p = PauliOperator::identity(labels.len());
        for (q, &l) in labels.iter().enumerate() {
            p.set(q, l);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw phase exponent `r` of `i^r X[x] Z[z]`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        bits::get(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        bits::get(&self.z, q)
    }

    pub(crate) fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub(crate) fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [u64], &mut [u64], &mut u8) {
        (&mut self.x, &mut self.z, &mut self.phase)
    }

    pub fn x_bits(&self) -> BitString {
        BitString::from_words(self.n, self.x.clone())
    }

    pub fn z_bits(&self) -> BitString {
        BitString::from_words(self.n, self.z.clone())
    }

    /// Label on `qubit`, ignoring the overall phase.
    pub fn get(&self, qubit: usize) -> SinglePauli {
        SinglePauli::from_bits(self.x_bit(qubit), self.z_bit(qubit))
    }

    /// Replaces the label on `qubit` while keeping the operator's sign.
    pub fn set(&mut self, qubit: usize, kind: SinglePauli) {
        let before = self.y_count();
        let (x, z) = kind.bits();
        bits::set(&mut self.x, qubit, x);
        bits::set(&mut self.z, qubit, z);
        let after = self.y_count();
        self.phase = (self.phase + (after + 4 - before) as u8) & 3;
    }

    fn y_count(&self) -> u32 {
        bits::and_count(&self.x, &self.z)
    }

    /// Exponent `t` with `self = i^t · ⊗ labels`.
    pub fn label_phase(&self) -> u8 {
        ((self.phase as u32 + 4 - (self.y_count() & 3)) & 3) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.label_phase() & 1 == 0
    }

    /// `+1` or `-1` for Hermitian operators.
    pub fn sign(&self) -> Option<i8> {
        match self.label_phase() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// True when the operator is a multiple of the identity.
    pub fn is_identity(&self) -> bool {
        bits::is_zero(&self.x) && bits::is_zero(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Multiplies by `i^k`.
    pub fn mul_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.mul_phase(2);
        p
    }

    /// Same `(x, z)` bits, i.e. equal up to phase.
    pub fn same_axis(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// `self ← self · other`, dimensions assumed equal.
    pub(crate) fn mul_right(&mut self, other: &PauliOperator) {
        mul_right_raw(
            &mut self.x,
            &mut self.z,
            &mut self.phase,
            &other.x,
            &other.z,
            other.phase,
        );
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        check_dims(self.n, other.n)?;
        let mut out = self.clone();
        out.mul_right(other);
        Ok(out)
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        check_dims(self.n, other.n)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        let s = bits::and_count(&self.x, &other.z) + bits::and_count(&self.z, &other.x);
        s & 1 == 0
    }
}

/// `(x1, z1, r1) ← (x1, z1, r1) · (x2, z2, r2)`.
#[inline]
pub(crate) fn mul_right_raw(
    x1: &mut [u64],
    z1: &mut [u64],
    r1: &mut u8,
    x2: &[u64],
    z2: &[u64],
    r2: u8,
) {
    // Z[z1] X[x2] = (-1)^{z1·x2} X[x2] Z[z1]
    let swap = bits::and_count(z1, x2);
    *r1 = ((*r1 as u32 + r2 as u32 + 2 * (swap & 1)) & 3) as u8;
    bits::xor_into(x1, x2);
    bits::xor_into(z1, z2);
}

/// Operator product `p · q`.
pub fn multiply(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.multiply(q)
}

/// True iff the symplectic product of `p` and `q` vanishes.
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    p.commutes(q)
}

/// Rank over GF(2) of the `(x | z)` rows of `paulis`.
pub fn binary_rank(paulis: &[PauliOperator]) -> Result<usize> {
    let Some(first) = paulis.first() else {
        return Ok(0);
    };
    for p in paulis {
        check_dims(first.n, p.n)?;
    }
    let rows: Vec<Vec<u64>> = paulis
        .iter()
        .map(|p| p.x.iter().chain(&p.z).copied().collect())
        .collect();
    Ok(gf2_rank(rows))
}

/// Rank of a set of packed GF(2) row vectors.
pub(crate) fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| bits::get(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        for row in tail.iter_mut() {
            if bits::get(row, col) {
                bits::xor_into(row, &head[rank]);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label_phase() {
            0 => {}
            1 => f.write_str("+i")?,
            2 => f.write_str("-1")?,
            _ => f.write_str("-i")?,
        }
        for q in 0..self.n {
            write!(f, "{}", self.get(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (token, rest) = split_phase_token(s);
        if rest.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "Pauli string {s:?} has no qubits"
            )));
        }
        let labels = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(SinglePauli::I),
                'X' | 'x' => Ok(SinglePauli::X),
                'Y' | 'y' => Ok(SinglePauli::Y),
                'Z' | 'z' => Ok(SinglePauli::Z),
                _ => Err(Error::InvalidArgument(format!(
                    "unexpected character {c:?} in Pauli string {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = PauliOperator::from_labels(&labels);
        p.mul_phase(token);
        Ok(p)
    }
}

fn split_phase_token(s: &str) -> (u8, &str) {
    for (tok, k) in [("+1", 0), ("-1", 2), ("+i", 1), ("-i", 3), ("+", 0), ("-", 2)] {
        if let Some(rest) = s.strip_prefix(tok) {
            return (k, rest.trim_start());
        }
    }
    (0, s)
}
