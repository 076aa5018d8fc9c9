//! Seeded fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recliff_core::{CHForm, Circuit, CliffordGate, RandomCircuitSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random T-only circuit with `c` Clifford and `m` non-Clifford gates.
pub fn t_circuit(n: usize, c: usize, m: usize, seed: u64) -> Circuit {
    RandomCircuitSpec::new(n, c, m)
        .t_only()
        .sample(&mut rng(seed))
        .expect("valid circuit parameters")
}

/// `|0…0⟩` scrambled by `4n²` random H, S and CX gates.
pub fn scrambled_state(n: usize, seed: u64) -> CHForm {
    let mut rng = rng(seed);
    let mut state = CHForm::init_zero(n).expect("n > 0");
    for _ in 0..4 * n * n {
        let a = rng.random_range(0..n);
        let gate = match rng.random_range(0..3) {
            0 => CliffordGate::H(a),
            1 => CliffordGate::S(a),
            _ => {
                let b = (a + rng.random_range(1..n)) % n;
                CliffordGate::CX(a, b)
            }
        };
        state.apply_clifford_gate(gate).expect("in range");
    }
    state
}
