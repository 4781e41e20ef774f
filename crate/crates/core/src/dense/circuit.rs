use std::f64::consts::FRAC_1_SQRT_2;

use super::DenseHermitian;
use crate::error::{Error, Result};

/// A permutation of basis indices, `U|i⟩ = |perm[i]⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &t in &map {
            if t >= map.len() || seen[t] {
                return Err(Error::InvalidState("permutation is not a bijection".into()));
            }
            seen[t] = true;
        }
        Ok(Permutation(map))
    }

    pub fn identity(dim: usize) -> Self {
        Permutation((0..dim).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &t) in self.0.iter().enumerate() {
            inv[t] = i;
        }
        Permutation(inv)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitKind {
    /// Hadamard on qubit 1, then CNOTs from qubit 1 onto every other qubit.
    Ch,
    /// Fanout (the same CNOT cascade) followed by `Ch`.
    ChFan,
    /// P · U_cH · P†.
    Permuted(Permutation),
}

/// A Bell-basis unitary on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellCircuit {
    pub kind: CircuitKind,
    pub n_qubits: usize,
}

impl BellCircuit {
    pub fn ch(n_qubits: usize) -> Self {
        BellCircuit {
            kind: CircuitKind::Ch,
            n_qubits,
        }
    }

    pub fn ch_fan(n_qubits: usize) -> Self {
        BellCircuit {
            kind: CircuitKind::ChFan,
            n_qubits,
        }
    }

    pub fn permuted(n_qubits: usize, p: Permutation) -> Result<Self> {
        if p.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: p.len(),
            });
        }
        Ok(BellCircuit {
            kind: CircuitKind::Permuted(p),
            n_qubits,
        })
    }
}

/// Bit position of 1-based qubit `q`; qubit 1 is the MSB.
fn bit(n: usize, q: usize) -> usize {
    1 << (n - q)
}

fn apply_permutation(state: &DenseHermitian, perm: impl Fn(usize) -> usize) -> DenseHermitian {
    let d = state.dim();
    let mut out = state.clone();
    for r in 0..d {
        let pr = perm(r);
        for c in 0..d {
            out.set(pr, perm(c), state.get(r, c));
        }
    }
    out
}

/// U ρ U† for a real 2×2 gate on one qubit.
fn apply_single_qubit(state: &mut DenseHermitian, q: usize, g: [[f64; 2]; 2]) {
    let d = state.dim();
    let b = bit(state.n_qubits(), q);
    for r0 in (0..d).filter(|r| r & b == 0) {
        let r1 = r0 | b;
        for c in 0..d {
            let (x0, x1) = (state.get(r0, c), state.get(r1, c));
            state.set(r0, c, x0 * g[0][0] + x1 * g[0][1]);
            state.set(r1, c, x0 * g[1][0] + x1 * g[1][1]);
        }
    }
    for c0 in (0..d).filter(|c| c & b == 0) {
        let c1 = c0 | b;
        for r in 0..d {
            let (x0, x1) = (state.get(r, c0), state.get(r, c1));
            state.set(r, c0, x0 * g[0][0] + x1 * g[0][1]);
            state.set(r, c1, x0 * g[1][0] + x1 * g[1][1]);
        }
    }
}

fn apply_cnot(state: &DenseHermitian, control: usize, target: usize) -> DenseHermitian {
    let n = state.n_qubits();
    let (cb, tb) = (bit(n, control), bit(n, target));
    apply_permutation(state, |i| if i & cb != 0 { i ^ tb } else { i })
}

fn apply_cnot_cascade(state: &DenseHermitian) -> DenseHermitian {
    let mut s = state.clone();
    for t in 2..=state.n_qubits() {
        s = apply_cnot(&s, 1, t);
    }
    s
}

fn apply_ch(state: &DenseHermitian) -> DenseHermitian {
    let mut s = state.clone();
    let h = [
        [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ];
    apply_single_qubit(&mut s, 1, h);
    apply_cnot_cascade(&s)
}

/// U ρ U†, applied gate by gate.
pub fn apply_circuit(state: &DenseHermitian, circuit: &BellCircuit) -> Result<DenseHermitian> {
    if circuit.n_qubits != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits,
            found: state.n_qubits(),
        });
    }
    if circuit.n_qubits < 2 {
        return Err(Error::Domain(
            "Bell circuits need at least two qubits".into(),
        ));
    }
    Ok(match &circuit.kind {
        CircuitKind::Ch => apply_ch(state),
        CircuitKind::ChFan => apply_ch(&apply_cnot_cascade(state)),
        CircuitKind::Permuted(p) => {
            if p.len() != state.dim() {
                return Err(Error::DimensionMismatch {
                    expected: state.dim(),
                    found: p.len(),
                });
            }
            let inv = p.inverse();
            let s = apply_permutation(state, |i| inv.apply(i));
            let s = apply_ch(&s);
            apply_permutation(&s, |i| p.apply(i))
        }
    })
}
