//! Moves every non-Clifford gate past the Clifford gates that follow it.
//!
//! A circuit `C_m U_m ⋯ U_1 C_0` becomes `R_m ⋯ R_1 |φ⟩`, where `|φ⟩` is the
//! stabilizer state prepared by all Clifford gates and each `R_i = exp(iθ_i Q_i)`
//! is `U_i` conjugated by the Clifford suffix after it. Angles are then folded
//! into `(0, π/4)`, with the peeled `exp(ikπ/4 Q)` factors pushed into `|φ⟩`.

use std::fmt;

use num_complex::Complex64;

use crate::angle::Angle;
use crate::chform::CHForm;
use crate::circuit::{Circuit, Gate};
use crate::clifford::{conjugate_by_exp, Tableau};
use crate::error::{Error, Result};
use crate::oracle::DenseState;
use crate::pauli::PauliOperator;

/// `exp(iθQ)` with `0 < θ < π/4`; any sign lives in `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub pauli: PauliOperator,
    pub theta: Angle,
}

/// `e^{iπ·global_phase} R_m ⋯ R_1 |φ⟩`, rotations listed in application order.
#[derive(Clone, Debug, PartialEq)]
pub struct RecompiledCircuit {
    phi: CHForm,
    rotations: Vec<Rotation>,
    global_phase: Angle,
}

fn in_canonical_range(theta: Angle) -> bool {
    theta > Angle::ZERO && theta < Angle::new(1, 4)
}

impl RecompiledCircuit {
    pub fn new(phi: CHForm, rotations: Vec<Rotation>, global_phase: Angle) -> Result<Self> {
        for r in &rotations {
            crate::error::check_dims(r.pauli.n(), phi.n())?;
            if !in_canonical_range(r.theta) {
                return Err(Error::InvalidArgument(format!(
                    "rotation angle {}π outside (0, π/4)",
                    r.theta
                )));
            }
            if !r.pauli.is_hermitian() || r.pauli.is_identity() {
                return Err(Error::InvalidArgument(format!(
                    "rotation axis {} must be a non-identity Hermitian Pauli",
                    r.pauli
                )));
            }
        }
        Ok(RecompiledCircuit {
            phi,
            rotations,
            global_phase: global_phase.reduced(),
        })
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }

    pub fn phi(&self) -> &CHForm {
        &self.phi
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn global_phase(&self) -> Angle {
        self.global_phase
    }

    /// Dense statevector of the represented state.
    pub fn to_dense(&self) -> Result<DenseState> {
        let mut st = DenseState::from_amplitudes(self.phi.extract_statevector()?)?;
        for r in &self.rotations {
            st.apply_pauli_exponential(&r.pauli, r.theta.radians())?;
        }
        st.scale(Complex64::from_polar(1.0, self.global_phase.radians()));
        Ok(st)
    }

    /// The CH-form debug text of `|φ⟩`, then `PHASE` and one `ROT` line per rotation.
    pub fn to_text(&self) -> String {
        let mut out = self.phi.to_text();
        out.push_str(&format!("PHASE {}\n", self.global_phase));
        for r in &self.rotations {
            out.push_str(&format!("ROT {} {}\n", r.theta, r.pauli));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let phi = CHForm::parse_lines(&mut lines)?;
        let mut phase = Angle::ZERO;
        let mut rotations = Vec::new();
        for (no, line) in lines {
            let err = |message: String| Error::Parse { line: no, message };
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["PHASE", a] => phase += a.parse::<Angle>().map_err(|e| err(e.to_string()))?,
                ["ROT", a, p] => rotations.push(Rotation {
                    theta: a.parse().map_err(|e: Error| err(e.to_string()))?,
                    pauli: p.parse().map_err(|e: Error| err(e.to_string()))?,
                }),
                _ => return Err(err(format!("expected `PHASE r` or `ROT r P`, got {line:?}"))),
            }
        }
        RecompiledCircuit::new(phi, rotations, phase)
    }
}

impl fmt::Display for RecompiledCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `C P C†` where `C` applies `suffix[0]` first.
pub fn conjugate_pauli_by_clifford_suffix(p: &PauliOperator, suffix: &[Gate]) -> Result<PauliOperator> {
    let mut out = p.clone();
    let not_clifford = |g: &Gate| Error::InvalidArgument(format!("{g} in a Clifford suffix is not Clifford"));
    for g in suffix {
        match g {
            Gate::Exp { pauli, theta } => {
                let k = theta.as_quarter_turns().ok_or_else(|| not_clifford(g))?;
                crate::error::check_dims(pauli.n(), out.n())?;
                conjugate_by_exp(&mut out, pauli, k);
            }
            _ => {
                let cg = g.as_clifford_gate().ok_or_else(|| not_clifford(g))?;
                out = cg.conjugate(&out)?;
            }
        }
    }
    Ok(out)
}

/// Peels `exp(ikπ/4 Q)` off `exp(iθQ)` so the rest lies in `[0, π/4)`.
///
/// The peeled Clifford is commuted through `earlier` (application order) and
/// applied to `phi`; `e^{iπ}` factors go to `global_phase`. Returns the
/// remaining angle, or `None` when `θ ∈ (π/4)ℤ` and nothing is left.
pub fn fold_angle(
    theta: Angle,
    q: &PauliOperator,
    earlier: &mut [Rotation],
    phi: &mut CHForm,
    global_phase: &mut Angle,
) -> Result<Option<Angle>> {
    crate::error::check_dims(q.n(), phi.n())?;
    let (k, rest) = theta.split_quarter_turns();
    let mut k = k.rem_euclid(8);
    if k >= 4 {
        // exp(iπQ) = −1
        *global_phase = (*global_phase + Angle::new(1, 1)).reduced();
        k -= 4;
    }
    if k == 3 {
        k = -1;
        *global_phase = (*global_phase + Angle::new(1, 1)).reduced();
    }
    if k != 0 {
        for r in earlier.iter_mut() {
            conjugate_by_exp(&mut r.pauli, q, k);
        }
        phi.apply_pauli_rotation(q, k)?;
    }
    Ok((!rest.is_zero()).then_some(rest))
}

/// Canonical form of `c`, exactly equal to it including global phase.
pub fn recompile(c: &Circuit) -> Result<RecompiledCircuit> {
    let n = c.n();
    // Backward sweep: F(P) = C P C† for the Clifford suffix C seen so far.
    let mut suffix = Tableau::identity(n);
    let mut pulled: Vec<(PauliOperator, Angle)> = Vec::new();
    let mut phase = c.global_phase();
    for g in c.gates().iter().rev() {
        if let Some(cg) = g.as_clifford_gate() {
            suffix.precompose(cg);
            continue;
        }
        let rot = g.as_rotation(n).expect("non-named gates are rotations");
        match rot.theta.as_quarter_turns() {
            Some(k) => suffix.precompose_exp(&rot.pauli, k),
            None => {
                phase += rot.phase;
                pulled.push((suffix.image(&rot.pauli), rot.theta));
            }
        }
    }
    pulled.reverse();

    let mut phi = CHForm::init_zero(n)?;
    for g in c.gates() {
        if let Some(cg) = g.as_clifford_gate() {
            phi.apply_clifford_gate(cg)?;
        } else if let Gate::Exp { pauli, theta } = g {
            if let Some(k) = theta.as_quarter_turns() {
                phi.apply_pauli_rotation(pauli, k)?;
            }
        }
    }

    let mut out: Vec<Rotation> = Vec::with_capacity(pulled.len());
    for (q, theta) in pulled {
        absorb_rotation(q, theta, &mut out, &mut phi, &mut phase)?;
    }
    RecompiledCircuit::new(phi, out, phase)
}

fn absorb_rotation(
    mut q: PauliOperator,
    mut theta: Angle,
    out: &mut Vec<Rotation>,
    phi: &mut CHForm,
    phase: &mut Angle,
) -> Result<()> {
    if q.is_identity() {
        // exp(iθ(±I)) = e^{±iθ}
        let sign = q.sign().expect("Hermitian identity has a sign");
        *phase += if sign > 0 { theta } else { -theta };
        return Ok(());
    }
    if let Some(last) = out.pop_if(|last| last.pauli.same_axis(&q)) {
        theta = if last.pauli == q { last.theta + theta } else { last.theta - theta };
        q = last.pauli;
    }
    if let Some(rest) = fold_angle(theta, &q, out, phi, phase)? {
        out.push(Rotation { pauli: q, theta: rest });
    }
    Ok(())
}
