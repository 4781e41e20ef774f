//! Explicit 2^N × 2^N density matrices.
//!
//! This is the brute-force ground truth for the analytic formulas in
//! [`crate::spectral`] and [`crate::durcirac`]. Everything here is capped at
//! [`DENSE_CAP`] qubits.

mod circuit;
pub mod eigen;
pub mod io;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use circuit::{apply_circuit, BellCircuit, CircuitKind, Permutation};

use crate::durcirac::MixingOperation;
use crate::error::{Error, Result};
use crate::states::ThermalSpec;

/// Largest qubit count for which dense matrices are built.
pub const DENSE_CAP: usize = 12;

/// Minimum eigenvalues below `-PPT_TOLERANCE` count as negative.
pub const PPT_TOLERANCE: f64 = 1e-12;

fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("need at least one qubit".into()));
    }
    if n > DENSE_CAP {
        return Err(Error::Capacity { n, cap: DENSE_CAP });
    }
    Ok(())
}

/// Row-major complex Hermitian matrix on N qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    n_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseHermitian {
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        Ok(DenseHermitian {
            n_qubits,
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    /// Builds from row-major entries, rejecting non-Hermitian input.
    pub fn from_entries(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        check_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let m = DenseHermitian {
            n_qubits,
            dim,
            data,
        };
        let dev = m.hermiticity_defect();
        if dev > 1e-12 {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian (defect {dev:e})"
            )));
        }
        Ok(m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    #[inline]
    pub(crate) fn add_at(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] += v;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    /// Largest |ρ_rc − conj(ρ_cr)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DenseHermitian) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| r == c || self.get(r, c) == Complex64::new(0.0, 0.0)))
    }
}

/// Bipartition of N qubits; a set bit puts that qubit in party A.
/// Qubit 1 is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteSplit {
    n_qubits: usize,
    mask: u64,
}

impl BipartiteSplit {
    pub fn new(n_qubits: usize, mask: u64) -> Result<Self> {
        if !(2..=63).contains(&n_qubits) || mask == 0 || mask >= (1u64 << n_qubits) - 1 {
            return Err(Error::InvalidSplit { mask, n: n_qubits });
        }
        Ok(BipartiteSplit { n_qubits, mask })
    }

    /// The first `q` qubits in party A: the split {q, N − q}.
    pub fn leading(n_qubits: usize, q: usize) -> Result<Self> {
        if q == 0 || q >= n_qubits {
            return Err(Error::InvalidSplit {
                mask: 0,
                n: n_qubits,
            });
        }
        let mask = ((1u64 << q) - 1) << (n_qubits - q);
        Self::new(n_qubits, mask)
    }

    /// {1, N − 1}: qubit 1 alone in party A.
    pub fn one_vs_rest(n_qubits: usize) -> Result<Self> {
        Self::leading(n_qubits, 1)
    }

    /// {N/2, N/2}; N must be even.
    pub fn half(n_qubits: usize) -> Result<Self> {
        if !n_qubits.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "half split needs even N, got {n_qubits}"
            )));
        }
        Self::leading(n_qubits, n_qubits / 2)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn complement(&self) -> Self {
        BipartiteSplit {
            n_qubits: self.n_qubits,
            mask: !self.mask & ((1u64 << self.n_qubits) - 1),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.mask >> (self.n_qubits - 1) == 0
    }

    /// Same partition with qubit 1 moved to party B.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            self.complement()
        }
    }

    pub fn party_a_size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn hamming_weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// All 2^{N−1} − 1 canonical splits in ascending mask order.
    pub fn all_canonical(n_qubits: usize) -> Result<Vec<Self>> {
        if !(2..=30).contains(&n_qubits) {
            return Err(Error::Domain(format!(
                "cannot enumerate splits for N = {n_qubits}"
            )));
        }
        (1..(1u64 << (n_qubits - 1)))
            .map(|m| Self::new(n_qubits, m))
            .collect()
    }
}

/// Diagonal density matrix with the given weights.
pub fn build_density(weights: &[f64]) -> Result<DenseHermitian> {
    let d = weights.len();
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: d.next_power_of_two().max(2),
            found: d,
        });
    }
    if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
        return Err(Error::InvalidState(format!("negative or NaN weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "weights sum to {total}, not 1"
        )));
    }
    let mut m = DenseHermitian::zeros(d.trailing_zeros() as usize)?;
    for (i, &w) in weights.iter().enumerate() {
        m.set(i, i, Complex64::new(w, 0.0));
    }
    Ok(m)
}

/// Dense thermal state.
pub fn thermal_density(spec: &ThermalSpec) -> Result<DenseHermitian> {
    check_cap(spec.n_qubits())?;
    build_density(&spec.diagonal()?)
}

fn check_split(state: &DenseHermitian, split: &BipartiteSplit) -> Result<()> {
    if split.n_qubits() != state.n_qubits() {
        return Err(Error::InvalidSplit {
            mask: split.mask(),
            n: state.n_qubits(),
        });
    }
    Ok(())
}

/// Transposes the party-A sub-indices of every entry.
pub fn partial_transpose(state: &DenseHermitian, split: &BipartiteSplit) -> Result<DenseHermitian> {
    check_split(state, split)?;
    let a = split.mask() as usize;
    let d = state.dim();
    let mut out = DenseHermitian::zeros(state.n_qubits())?;
    for r in 0..d {
        for c in 0..d {
            let z = state.get(r, c);
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            let r2 = (r & !a) | (c & a);
            let c2 = (c & !a) | (r & a);
            out.set(r2, c2, z);
        }
    }
    Ok(out)
}

/// Sum of the negative eigenvalues' magnitudes of ρ^{T_A}, i.e. (‖ρ^{T_A}‖₁ − 1)/2.
pub fn negativity(state: &DenseHermitian, split: &BipartiteSplit) -> Result<f64> {
    let pt = partial_transpose(state, split)?;
    Ok(eigen::eigenvalues(&pt)?
        .iter()
        .filter(|&&v| v < 0.0)
        .map(|v| -v)
        .sum())
}

/// Eigenvalues of ρ^{T_A}, ascending.
pub fn partial_transpose_spectrum(
    state: &DenseHermitian,
    split: &BipartiteSplit,
) -> Result<Vec<f64>> {
    eigen::eigenvalues(&partial_transpose(state, split)?)
}

/// Minimum eigenvalue of ρ^{T_A} and a unit eigenvector.
pub fn min_eig_and_vector(
    state: &DenseHermitian,
    split: &BipartiteSplit,
) -> Result<(f64, Vec<Complex64>)> {
    eigen::min_eigenpair(&partial_transpose(state, split)?)
}

/// PPT/NPT from a minimum eigenvalue, using [`PPT_TOLERANCE`].
pub fn is_npt(min_eigenvalue: f64) -> bool {
    min_eigenvalue < -PPT_TOLERANCE
}

/// Monte-Carlo estimate of the random-phase channel E_φ: the average of RρR†
/// over `samples` independent draws of the phases.
pub fn sample_ephi(state: &DenseHermitian, samples: usize, seed: u64) -> Result<DenseHermitian> {
    if samples == 0 {
        return Err(Error::Domain(
            "sample_ephi needs at least one sample".into(),
        ));
    }
    let n = state.n_qubits();
    let d = state.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    let mut phase = vec![Complex64::new(0.0, 0.0); d];
    for _ in 0..samples {
        let r = MixingOperation::sample(n, &mut rng);
        for (x, p) in phase.iter_mut().enumerate() {
            *p = Complex64::from_polar(1.0, r.basis_phase(x as u64));
        }
        for row in 0..d {
            for col in 0..d {
                let z = state.get(row, col);
                if z.re != 0.0 || z.im != 0.0 {
                    acc[row * d + col] += z * phase[row] * phase[col].conj();
                }
            }
        }
    }
    let scale = 1.0 / samples as f64;
    let data = acc.into_iter().map(|z| z * scale).collect();
    Ok(DenseHermitian {
        n_qubits: n,
        dim: d,
        data,
    })
}

/// Average of U_j ρ_th U_j† over the d − 1 cyclic shifts of the excited basis
/// states (|0…0⟩ held fixed), each with weight 1/(d − 1).
pub fn cyclic_perm_average(spec: &ThermalSpec) -> Result<DenseHermitian> {
    check_cap(spec.n_qubits())?;
    let diag = spec.diagonal()?;
    let d = diag.len();
    let cycle = d - 1;
    let mut acc = vec![0.0; d];
    // ρ_th is diagonal, so each permuted copy is the permuted diagonal.
    for shift in 1..=cycle {
        acc[0] += diag[0];
        for (i, &w) in diag.iter().enumerate().skip(1) {
            let target = 1 + (i - 1 + shift) % cycle;
            acc[target] += w;
        }
    }
    let p = 1.0 / cycle as f64;
    let mut m = DenseHermitian::zeros(spec.n_qubits())?;
    for (i, w) in acc.into_iter().enumerate() {
        m.set(i, i, Complex64::new(w * p, 0.0));
    }
    Ok(m)
}

/// Basis indices `(a, b)` with |Ψ_j^±⟩ = (|a⟩ ± |b⟩)/√2, a = |0⟩|j⟩, b = |1⟩|j̄⟩.
pub fn bell_pair_indices(n_qubits: usize, j: usize) -> (usize, usize) {
    let half = 1usize << (n_qubits - 1);
    let jbar = half - 1 - j;
    (j, half | jbar)
}

/// Σ_j λ_j⁺|Ψ_j⁺⟩⟨Ψ_j⁺| + λ_j⁻|Ψ_j⁻⟩⟨Ψ_j⁻|.
pub fn bell_diagonal_density(
    n_qubits: usize,
    lambda_plus: &[f64],
    lambda_minus: &[f64],
) -> Result<DenseHermitian> {
    check_cap(n_qubits)?;
    let half = 1usize << (n_qubits - 1);
    if lambda_plus.len() != half || lambda_minus.len() != half {
        return Err(Error::DimensionMismatch {
            expected: half,
            found: lambda_plus.len().min(lambda_minus.len()),
        });
    }
    let mut m = DenseHermitian::zeros(n_qubits)?;
    for j in 0..half {
        let (a, b) = bell_pair_indices(n_qubits, j);
        let diag = Complex64::new(0.5 * (lambda_plus[j] + lambda_minus[j]), 0.0);
        let off = Complex64::new(0.5 * (lambda_plus[j] - lambda_minus[j]), 0.0);
        m.add_at(a, a, diag);
        m.add_at(b, b, diag);
        m.add_at(a, b, off);
        m.add_at(b, a, off);
    }
    Ok(m)
}

/// ⟨Ψ_j^±|ρ|Ψ_j^±⟩ for every j: returns (λ⁺, λ⁻).
pub fn bell_basis_diagonal(state: &DenseHermitian) -> (Vec<f64>, Vec<f64>) {
    let n = state.n_qubits();
    let half = 1usize << (n - 1);
    let mut plus = Vec::with_capacity(half);
    let mut minus = Vec::with_capacity(half);
    for j in 0..half {
        let (a, b) = bell_pair_indices(n, j);
        let pop = 0.5 * (state.get(a, a).re + state.get(b, b).re);
        let coh = state.get(a, b).re;
        plus.push(pop + coh);
        minus.push(pop - coh);
    }
    (plus, minus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        effective_pure_diagonal, epsilon_from_alpha, EffectivePureSpec, EpsilonMode,
    };

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_projector() -> DenseHermitian {
        let mut m = DenseHermitian::zeros(2).unwrap();
        for &(r, col) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m.set(r, col, c(0.5));
        }
        m
    }

    #[test]
    fn split_validation_and_canonical_form() {
        assert!(BipartiteSplit::new(3, 0).is_err());
        assert!(BipartiteSplit::new(3, 7).is_err());
        let s = BipartiteSplit::new(3, 0b100).unwrap();
        assert!(!s.is_canonical());
        assert_eq!(s.canonical().mask(), 0b011);
        assert_eq!(BipartiteSplit::half(4).unwrap().mask(), 0b1100);
        assert_eq!(BipartiteSplit::one_vs_rest(5).unwrap().mask(), 0b10000);
        assert_eq!(BipartiteSplit::all_canonical(4).unwrap().len(), 7);
        assert!(BipartiteSplit::half(5).is_err());
    }

    #[test]
    fn build_density_examples() {
        let m = build_density(&[0.25; 4]).unwrap();
        assert_eq!(m.trace(), c(1.0));
        assert!(m.is_diagonal());

        let a: f64 = 0.5;
        let th = thermal_density(&ThermalSpec::new(1, a).unwrap()).unwrap();
        let z = 2.0 * a.cosh();
        assert!((th.get(0, 0).re - a.exp() / z).abs() < 1e-15);
        assert!((th.get(1, 1).re - (-a).exp() / z).abs() < 1e-15);

        let spec = ThermalSpec::new(3, 0.7).unwrap();
        let th = thermal_density(&spec).unwrap();
        for i in 0..8u64 {
            let w = crate::states::thermal_log_weight(&spec, i).unwrap().exp();
            assert!((th.get(i as usize, i as usize).re - w).abs() < 1e-15);
        }

        assert!(matches!(
            build_density(&[0.5, 0.6]),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            build_density(&[1.5, -0.5]),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            build_density(&[0.5, 0.25, 0.25]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn capacity_cap_is_enforced() {
        assert!(matches!(
            DenseHermitian::zeros(13),
            Err(Error::Capacity { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn bell_state_partial_transpose_spectrum() {
        let split = BipartiteSplit::new(2, 0b10).unwrap();
        let spec = partial_transpose_spectrum(&bell_projector(), &split).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in spec.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((negativity(&bell_projector(), &split).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_fixes_diagonal_states() {
        let th = thermal_density(&ThermalSpec::new(3, 0.4).unwrap()).unwrap();
        for s in BipartiteSplit::all_canonical(3).unwrap() {
            assert_eq!(partial_transpose(&th, &s).unwrap(), th);
            assert_eq!(negativity(&th, &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn product_state_has_zero_negativity() {
        // |0⟩⟨0| ⊗ |+⟩⟨+|
        let mut m = DenseHermitian::zeros(2).unwrap();
        for r in 0..2 {
            for col in 0..2 {
                m.set(r, col, c(0.5));
            }
        }
        let s = BipartiteSplit::new(2, 0b10).unwrap();
        assert!(negativity(&m, &s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn min_eigenvalue_of_maximally_mixed_state() {
        let m = build_density(&[0.25; 4]).unwrap();
        let (v, vec) = min_eig_and_vector(&m, &BipartiteSplit::new(2, 1).unwrap()).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
        let norm: f64 = vec.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_blocks_use_the_hermitian_solver() {
        // ρ = (I + σ_y)/2 ⊗ I/2 has a complex off-diagonal; its spectrum is {0, 0, ½, ½}.
        let mut m = DenseHermitian::zeros(2).unwrap();
        for b in 0..2 {
            m.set(b, b, c(0.25));
            m.set(2 + b, 2 + b, c(0.25));
            m.set(b, 2 + b, Complex64::new(0.0, -0.25));
            m.set(2 + b, b, Complex64::new(0.0, 0.25));
        }
        let vals = eigen::eigenvalues(&m).unwrap();
        for (a, b) in vals.iter().zip([0.0, 0.0, 0.5, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn non_hermitian_entries_are_rejected() {
        let mut data = vec![c(0.0); 4];
        data[1] = c(1.0);
        assert!(matches!(
            DenseHermitian::from_entries(1, data),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn ephi_sampling_leaves_diagonal_states_alone() {
        let th = thermal_density(&ThermalSpec::new(3, 0.9).unwrap()).unwrap();
        for m in [1, 7, 100] {
            let out = sample_ephi(&th, m, 3).unwrap();
            assert!(out.max_abs_diff(&th) < 1e-15);
        }
        assert!(sample_ephi(&th, 0, 1).is_err());
    }

    #[test]
    fn ephi_sampling_is_deterministic_for_a_seed() {
        let lp = [0.4, 0.1, 0.1, 0.05];
        let lm = [0.2, 0.05, 0.05, 0.05];
        let rho = bell_diagonal_density(3, &lp, &lm).unwrap();
        assert_eq!(
            sample_ephi(&rho, 50, 11).unwrap(),
            sample_ephi(&rho, 50, 11).unwrap()
        );
        assert_ne!(
            sample_ephi(&rho, 50, 11).unwrap(),
            sample_ephi(&rho, 50, 12).unwrap()
        );
    }

    #[test]
    fn cyclic_average_is_the_effective_pure_state() {
        for n in 2..=4usize {
            for &a in &[0.0, 0.05, 0.8] {
                let spec = ThermalSpec::new(n, a).unwrap();
                let avg = cyclic_perm_average(&spec).unwrap();
                assert!(avg.is_diagonal());
                let p0 = (n as f64 * a - spec.log_partition()).exp();
                assert!((avg.get(0, 0).re - p0).abs() < 1e-15);
                let eps = epsilon_from_alpha(n as u64, a, EpsilonMode::Exact).unwrap();
                let eff = effective_pure_diagonal(&EffectivePureSpec::new(1 << n, eps).unwrap());
                for (i, w) in eff.to_vec().into_iter().enumerate() {
                    assert!((avg.get(i, i).re - w).abs() < 1e-12, "n={n} a={a} i={i}");
                }
            }
        }
        let flat = cyclic_perm_average(&ThermalSpec::new(3, 0.0).unwrap()).unwrap();
        assert!(flat.diagonal().iter().all(|&w| (w - 0.125).abs() < 1e-16));
    }

    #[test]
    fn bell_basis_roundtrip() {
        let lp = [0.3, 0.1, 0.05, 0.05];
        let lm = [0.2, 0.1, 0.15, 0.05];
        let rho = bell_diagonal_density(3, &lp, &lm).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        let (p, m) = bell_basis_diagonal(&rho);
        for j in 0..4 {
            assert!((p[j] - lp[j]).abs() < 1e-15);
            assert!((m[j] - lm[j]).abs() < 1e-15);
        }
    }
}
