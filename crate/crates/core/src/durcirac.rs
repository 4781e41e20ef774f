//! Bell-diagonal states and the ρ_N classification.
//!
//! A Bell-transformed thermal state is diagonal in the generalized Bell basis
//! |Ψ_j^±⟩ = (|0⟩|j⟩ ± |1⟩|j̄⟩)/√2, j < 2^{N−1}. The random-phase channel E_φ
//! averages λ_j⁺ and λ_j⁻ for j ≥ 1, producing a state of the family
//!
//! ```text
//! ρ_N = λ₀⁺|Ψ₀⁺⟩⟨Ψ₀⁺| + λ₀⁻|Ψ₀⁻⟩⟨Ψ₀⁻| + Σ_{j≥1} λ_j (|Ψ_j⁺⟩⟨Ψ_j⁺| + |Ψ_j⁻⟩⟨Ψ_j⁻|)
//! ```
//!
//! whose partial transpose across the canonical split k (qubit 1 in party B)
//! is negative iff Δ = λ₀⁺ − λ₀⁻ > 2λ_k. Fully separable iff every split is
//! PPT; fully distillable iff every split is NPT.
//!
//! Eigenvalues are stored as natural logs. For the two structured circuits
//! they depend on j only through its Hamming weight, so the tables hold N
//! entries and classification works for N far beyond the dense range.

use std::f64::consts::{LN_2, PI};

use rand::Rng;

use crate::dense::{self, BellCircuit, BipartiteSplit, CircuitKind, DenseHermitian};
use crate::error::{Error, Result};
use crate::logmath::{ln_one_plus_pow2, log_add_exp, log_sub_exp, LnFactorial};
use crate::states::ThermalSpec;

/// Log-eigenvalues indexed by an (N−1)-bit Bell index.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaTable {
    /// One value per Hamming weight 0..=N−1.
    ByWeight(Vec<f64>),
    /// One value per index 0..2^{N−1}.
    Dense(Vec<f64>),
}

impl LambdaTable {
    pub fn ln_at(&self, j: u64) -> f64 {
        match self {
            LambdaTable::ByWeight(v) => v[j.count_ones() as usize],
            LambdaTable::Dense(v) => v[j as usize],
        }
    }

    fn zip(&self, other: &LambdaTable, f: impl Fn(f64, f64) -> f64) -> Result<LambdaTable> {
        Ok(match (self, other) {
            (LambdaTable::ByWeight(a), LambdaTable::ByWeight(b)) if a.len() == b.len() => {
                LambdaTable::ByWeight(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            }
            (LambdaTable::Dense(a), LambdaTable::Dense(b)) if a.len() == b.len() => {
                LambdaTable::Dense(a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            }
            _ => return Err(Error::InvalidState("mismatched lambda tables".into())),
        })
    }

    /// ln Σ_j e^{table[j]} over all 2^{N−1} indices.
    fn ln_total(&self, n_qubits: usize) -> f64 {
        match self {
            LambdaTable::ByWeight(v) => {
                let lf = LnFactorial::new(n_qubits);
                let terms: Vec<f64> = v
                    .iter()
                    .enumerate()
                    .map(|(w, &x)| x + lf.ln_binomial(n_qubits - 1, w))
                    .collect();
                crate::logmath::log_sum_exp(&terms)
            }
            LambdaTable::Dense(v) => crate::logmath::log_sum_exp(v),
        }
    }

    fn to_dense_values(&self, n_qubits: usize) -> Vec<f64> {
        let half = 1u64 << (n_qubits - 1);
        (0..half).map(|j| self.ln_at(j).exp()).collect()
    }
}

fn check_table(n_qubits: usize, t: &LambdaTable) -> Result<()> {
    let ok = match t {
        LambdaTable::ByWeight(v) => v.len() == n_qubits,
        LambdaTable::Dense(v) => n_qubits <= 31 && v.len() == 1usize << (n_qubits - 1),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidState(format!(
            "lambda table has the wrong length for N = {n_qubits}"
        )))
    }
}

/// Log-domain terms carry absolute error ~ N·α·ulp, so the unit-trace check
/// loosens with N.
fn trace_tolerance(n_qubits: usize) -> f64 {
    1e-10f64.max(n_qubits as f64 * 1e-14)
}

/// Eigenvalues λ_j^± of a state diagonal in the generalized Bell basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BellDiagonalState {
    n_qubits: usize,
    ln_plus: LambdaTable,
    ln_minus: LambdaTable,
}

impl BellDiagonalState {
    pub fn new(n_qubits: usize, ln_plus: LambdaTable, ln_minus: LambdaTable) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::Domain("Bell states need at least two qubits".into()));
        }
        check_table(n_qubits, &ln_plus)?;
        check_table(n_qubits, &ln_minus)?;
        let s = BellDiagonalState {
            n_qubits,
            ln_plus,
            ln_minus,
        };
        let total = log_add_exp(s.ln_plus.ln_total(n_qubits), s.ln_minus.ln_total(n_qubits));
        if total.abs() > trace_tolerance(n_qubits) {
            return Err(Error::InvalidState(format!(
                "Bell eigenvalues sum to {}",
                total.exp()
            )));
        }
        Ok(s)
    }

    /// Reads ⟨Ψ_j^±|ρ|Ψ_j^±⟩ off a dense matrix.
    pub fn from_dense(state: &DenseHermitian) -> Result<Self> {
        let (plus, minus) = dense::bell_basis_diagonal(state);
        let ln = |v: Vec<f64>| LambdaTable::Dense(v.into_iter().map(|x| x.max(0.0).ln()).collect());
        Self::new(state.n_qubits(), ln(plus), ln(minus))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ln_lambda_plus(&self, j: u64) -> f64 {
        self.ln_plus.ln_at(j)
    }

    pub fn ln_lambda_minus(&self, j: u64) -> f64 {
        self.ln_minus.ln_at(j)
    }

    pub fn lambda_plus(&self, j: u64) -> f64 {
        self.ln_lambda_plus(j).exp()
    }

    pub fn lambda_minus(&self, j: u64) -> f64 {
        self.ln_lambda_minus(j).exp()
    }

    pub fn to_dense(&self) -> Result<DenseHermitian> {
        dense::bell_diagonal_density(
            self.n_qubits,
            &self.ln_plus.to_dense_values(self.n_qubits),
            &self.ln_minus.to_dense_values(self.n_qubits),
        )
    }
}

/// λ_j^± of U ρ_th U† for the CNOT-Hadamard circuit and its fanout variant.
pub fn bell_eigenvalues(spec: &ThermalSpec, circuit: &BellCircuit) -> Result<BellDiagonalState> {
    let n = spec.n_qubits();
    if circuit.n_qubits != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: circuit.n_qubits,
        });
    }
    let a = spec.alpha();
    let ln_z = spec.log_partition();
    let exponent = |w: usize| (n as f64 - 2.0 * w as f64) * a;
    let plus: Vec<f64> = (0..n).map(|w| exponent(w) - ln_z).collect();
    let minus: Vec<f64> =
        match circuit.kind {
            CircuitKind::Ch => (0..n).map(|w| exponent(w) - 2.0 * a - ln_z).collect(),
            CircuitKind::ChFan => (0..n).map(|w| -exponent(w) - ln_z).collect(),
            CircuitKind::Permuted(_) => return Err(Error::Unsupported(
                "closed-form Bell eigenvalues exist only for ch and chfan; use the dense oracle"
                    .into(),
            )),
        };
    BellDiagonalState::new(n, LambdaTable::ByWeight(plus), LambdaTable::ByWeight(minus))
}

/// A member of the ρ_N family.
#[derive(Debug, Clone, PartialEq)]
pub struct DurCiracState {
    n_qubits: usize,
    ln_lambda0_plus: f64,
    ln_lambda0_minus: f64,
    ln_lambda: LambdaTable,
}

impl DurCiracState {
    /// `ln_lambda` entry 0 is ignored; λ₀^± are passed separately and
    /// swapped if needed so that Δ ≥ 0.
    pub fn new(
        n_qubits: usize,
        ln_lambda0_plus: f64,
        ln_lambda0_minus: f64,
        ln_lambda: LambdaTable,
    ) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::Domain("ρ_N needs at least two qubits".into()));
        }
        check_table(n_qubits, &ln_lambda)?;
        let (p, m) = if ln_lambda0_plus >= ln_lambda0_minus {
            (ln_lambda0_plus, ln_lambda0_minus)
        } else {
            (ln_lambda0_minus, ln_lambda0_plus)
        };
        let s = DurCiracState {
            n_qubits,
            ln_lambda0_plus: p,
            ln_lambda0_minus: m,
            ln_lambda,
        };
        let ln_total = s.ln_trace();
        if ln_total.abs() > trace_tolerance(n_qubits) {
            return Err(Error::InvalidState(format!(
                "ρ_N eigenvalues sum to {}",
                ln_total.exp()
            )));
        }
        Ok(s)
    }

    /// The transformed effective pure state (1 − ε)I/d + ε|Ψ₀⁺⟩⟨Ψ₀⁺|.
    pub fn effective_pure(n_qubits: usize, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        let ln_base = (1.0 - epsilon).ln() - n_qubits as f64 * LN_2;
        let ln_top = log_add_exp(ln_base, epsilon.ln());
        Self::new(
            n_qubits,
            ln_top,
            ln_base,
            LambdaTable::ByWeight(vec![ln_base; n_qubits]),
        )
    }

    fn ln_trace(&self) -> f64 {
        // λ₀⁺ + λ₀⁻ + 2 Σ_{j≥1} λ_j
        let ln_j0 = self.ln_lambda.ln_at(0);
        let ln_all = self.ln_lambda.ln_total(self.n_qubits);
        let ln_rest = if ln_j0 == f64::NEG_INFINITY || ln_all - ln_j0 > 1e-300 {
            log_sub_exp(ln_all.max(ln_j0), ln_j0)
        } else {
            f64::NEG_INFINITY
        };
        log_add_exp(
            log_add_exp(self.ln_lambda0_plus, self.ln_lambda0_minus),
            ln_rest + LN_2,
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn lambda0_plus(&self) -> f64 {
        self.ln_lambda0_plus.exp()
    }

    pub fn lambda0_minus(&self) -> f64 {
        self.ln_lambda0_minus.exp()
    }

    /// ln Δ with Δ = λ₀⁺ − λ₀⁻; `-inf` when Δ = 0.
    pub fn ln_delta(&self) -> f64 {
        log_sub_exp(self.ln_lambda0_plus, self.ln_lambda0_minus)
    }

    pub fn delta(&self) -> f64 {
        self.ln_delta().exp()
    }

    pub fn ln_lambda(&self, k: u64) -> f64 {
        self.ln_lambda.ln_at(k)
    }

    pub fn lambda(&self, k: u64) -> f64 {
        self.ln_lambda(k).exp()
    }

    pub fn table(&self) -> &LambdaTable {
        &self.ln_lambda
    }

    /// The full multiset of eigenvalues: λ₀^± once each, every λ_j twice.
    /// Returned as (value, multiplicity) pairs.
    pub fn spectrum_classes(&self) -> Vec<(f64, u64)> {
        let mut out = vec![(self.lambda0_plus(), 1), (self.lambda0_minus(), 1)];
        match &self.ln_lambda {
            LambdaTable::ByWeight(v) => {
                for (w, &x) in v.iter().enumerate().skip(1) {
                    let count = crate::logmath::binomial_u128(self.n_qubits as u64 - 1, w as u64)
                        .and_then(|c| u64::try_from(c).ok())
                        .expect("multiplicity fits in u64 for N <= 63");
                    out.push((x.exp(), 2 * count));
                }
            }
            LambdaTable::Dense(v) => out.extend(v.iter().skip(1).map(|&x| (x.exp(), 2))),
        }
        out
    }

    pub fn to_dense(&self) -> Result<DenseHermitian> {
        let mut values = self.ln_lambda.to_dense_values(self.n_qubits);
        values[0] = self.lambda0_plus();
        let mut minus = values.clone();
        minus[0] = self.lambda0_minus();
        dense::bell_diagonal_density(self.n_qubits, &values, &minus)
    }
}

/// E_φ: λ₀^± kept, λ_j = (λ_j⁺ + λ_j⁻)/2 for j ≥ 1.
pub fn ephi_average(state: &BellDiagonalState) -> DurCiracState {
    let averaged = state
        .ln_plus
        .zip(&state.ln_minus, |p, m| log_add_exp(p, m) - LN_2)
        .expect("tables of one state always match");
    DurCiracState::new(
        state.n_qubits,
        state.ln_lambda_plus(0),
        state.ln_lambda_minus(0),
        averaged,
    )
    .expect("averaging preserves the trace")
}

/// Random collective phases for E_φ: φ_1..φ_{N−1} uniform on [−π, π] and
/// φ_N = 2π − Σ so that Σφ_i = 2π.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingOperation {
    phases: Vec<f64>,
}

impl MixingOperation {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        let total: f64 = phases.iter().sum();
        if phases.is_empty() || (total - 2.0 * PI).abs() > 1e-9 {
            return Err(Error::Domain(format!("phases must sum to 2π, got {total}")));
        }
        Ok(MixingOperation { phases })
    }

    pub fn sample<R: Rng>(n_qubits: usize, rng: &mut R) -> Self {
        let mut phases: Vec<f64> = (1..n_qubits).map(|_| rng.gen_range(-PI..=PI)).collect();
        let sum: f64 = phases.iter().sum();
        phases.push(2.0 * PI - sum);
        MixingOperation { phases }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phase picked up by basis state |x⟩: the sum of φ_i over qubits in |0⟩.
    pub fn basis_phase(&self, x: u64) -> f64 {
        let n = self.phases.len();
        (0..n)
            .filter(|&i| x >> (n - 1 - i) & 1 == 0)
            .map(|i| self.phases[i])
            .sum()
    }

    /// θ_j: sum of φ_i over qubits i ≥ 2 whose bit in the (N−1)-bit index j is set.
    pub fn theta(&self, j: u64) -> f64 {
        let n = self.phases.len();
        (1..n)
            .filter(|&i| j >> (n - 1 - i) & 1 == 1)
            .map(|i| self.phases[i])
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PptVerdict {
    Ppt,
    Npt,
}

impl PptVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PptVerdict::Ppt => "PPT",
            PptVerdict::Npt => "NPT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitDecision {
    pub verdict: PptVerdict,
    /// Canonical mask actually tested (qubit 1 in party B).
    pub mask: u64,
    /// True when the input mask put qubit 1 in party A and was complemented.
    pub canonicalized: bool,
}

fn compare(state: &DurCiracState, ln_lambda_k: f64) -> PptVerdict {
    if state.ln_delta() > LN_2 + ln_lambda_k {
        PptVerdict::Npt
    } else {
        PptVerdict::Ppt
    }
}

/// PPT/NPT of ρ_N across a split. Non-canonical masks are complemented.
pub fn split_ppt(state: &DurCiracState, split: &BipartiteSplit) -> Result<SplitDecision> {
    if split.n_qubits() != state.n_qubits {
        return Err(Error::InvalidSplit {
            mask: split.mask(),
            n: state.n_qubits,
        });
    }
    let canonical = split.canonical();
    Ok(SplitDecision {
        verdict: compare(state, state.ln_lambda(canonical.mask())),
        mask: canonical.mask(),
        canonicalized: !split.is_canonical(),
    })
}

/// PPT/NPT for any split of Hamming weight `w` (1 ≤ w ≤ N − 1); requires a
/// per-weight table.
pub fn split_ppt_by_weight(state: &DurCiracState, w: usize) -> Result<PptVerdict> {
    match &state.ln_lambda {
        LambdaTable::ByWeight(v) if (1..state.n_qubits).contains(&w) => Ok(compare(state, v[w])),
        LambdaTable::ByWeight(_) => Err(Error::Domain(format!(
            "split weight {w} outside 1..{}",
            state.n_qubits
        ))),
        LambdaTable::Dense(_) => Err(Error::Unsupported(
            "state is not stored per Hamming weight".into(),
        )),
    }
}

/// Location and value of min/max λ_k over canonical splits k ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitExtremes {
    pub ln_min: f64,
    /// Hamming weight (per-weight tables) or mask (dense tables) of the minimum.
    pub argmin: u64,
    pub ln_max: f64,
    pub argmax: u64,
}

pub fn split_extremes(state: &DurCiracState) -> SplitExtremes {
    let candidates: Box<dyn Iterator<Item = (u64, f64)>> = match &state.ln_lambda {
        LambdaTable::ByWeight(v) => {
            Box::new(v.iter().enumerate().skip(1).map(|(w, &x)| (w as u64, x)))
        }
        LambdaTable::Dense(v) => {
            Box::new(v.iter().enumerate().skip(1).map(|(k, &x)| (k as u64, x)))
        }
    };
    let mut ex = SplitExtremes {
        ln_min: f64::INFINITY,
        argmin: 0,
        ln_max: f64::NEG_INFINITY,
        argmax: 0,
    };
    for (k, x) in candidates {
        if x < ex.ln_min {
            ex.ln_min = x;
            ex.argmin = k;
        }
        if x > ex.ln_max {
            ex.ln_max = x;
            ex.argmax = k;
        }
    }
    ex
}

/// Δ ≤ 2 min_k λ_k.
pub fn fully_separable(state: &DurCiracState) -> bool {
    compare(state, split_extremes(state).ln_min) == PptVerdict::Ppt
}

/// Δ > 2 max_k λ_k.
pub fn fully_distillable(state: &DurCiracState) -> bool {
    compare(state, split_extremes(state).ln_max) == PptVerdict::Npt
}

/// Full distillability of the Bell-rotated effective pure state: ε > 1/(1 + 2^{N−1}).
pub fn effpure_distillable(n: u64, epsilon: f64) -> Result<bool> {
    if n < 2 {
        return Err(Error::Domain("effpure_distillable needs n >= 2".into()));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    Ok(epsilon.ln() > -ln_one_plus_pow2(n as f64 - 1.0))
}

/// Which closed form decides full separability for the fanout circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanSeparabilityVariant {
    /// N even: sinh(Nα) ≤ 1.
    EvenSinhLeOne,
    /// N odd: sinh(Nα) ≤ cosh α.
    OddSinhLeCosh,
}

impl FanSeparabilityVariant {
    pub fn for_n(n: u64) -> Self {
        if n.is_multiple_of(2) {
            FanSeparabilityVariant::EvenSinhLeOne
        } else {
            FanSeparabilityVariant::OddSinhLeCosh
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FanSeparabilityVariant::EvenSinhLeOne => "sinh(N*alpha)<=1",
            FanSeparabilityVariant::OddSinhLeCosh => "sinh(N*alpha)<=cosh(alpha)",
        }
    }
}
