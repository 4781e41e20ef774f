//! Diagonal thermal states, effective pure states and the ε ↔ α conversions.
//!
//! Qubit 1 is the most significant bit of a basis index. The thermal state of
//! N identical, uncoupled spins at polarization α has diagonal entries
//! `e^{(N − 2w(i))α} / Z` with `Z = (2 cosh α)^N`, where `w(i)` is the Hamming
//! weight of the index. All weights are kept as natural logs.

use crate::constants::{BOLTZMANN, PLANCK};
use crate::error::{Error, Result};
use crate::logmath::{ln_expm1, ln_pow2_minus_one, ln_two_cosh};

/// Physical inputs from which the polarization is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Larmor frequency ν = γB, Hz.
    pub frequency: f64,
    /// Absolute temperature, K.
    pub temperature: f64,
    /// Static field strength, T.
    pub field: f64,
    /// Gyromagnetic ratio γ/2π, Hz/T.
    pub gyromagnetic_ratio: f64,
}

impl PhysicalParams {
    pub fn new(gyromagnetic_ratio: f64, field: f64, temperature: f64) -> Result<Self> {
        let p = PhysicalParams {
            frequency: gyromagnetic_ratio * field,
            temperature,
            field,
            gyromagnetic_ratio,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("frequency", self.frequency),
            ("temperature", self.temperature),
            ("field", self.field),
            ("gyromagnetic_ratio", self.gyromagnetic_ratio),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// α = hν / (2kT).
pub fn alpha_from_physical(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    Ok(PLANCK * params.frequency / (2.0 * BOLTZMANN * params.temperature))
}

/// An N-qubit thermal state at polarization α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    n_qubits: usize,
    alpha: f64,
    log_partition: f64,
}

impl ThermalSpec {
    pub fn new(n_qubits: usize, alpha: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain(
                "thermal state needs at least one qubit".into(),
            ));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!(
                "alpha must be finite and nonnegative, got {alpha}"
            )));
        }
        Ok(ThermalSpec {
            n_qubits,
            alpha,
            log_partition: n_qubits as f64 * ln_two_cosh(alpha),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ln Z = N·ln(2 cosh α).
    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// Natural log of the diagonal weight of any basis state of Hamming weight `w`.
    pub fn log_weight_of_class(&self, w: usize) -> f64 {
        (self.n_qubits as f64 - 2.0 * w as f64) * self.alpha - self.log_partition
    }

    /// Diagonal weights in basis order. Only sensible for small N.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        if self.n_qubits > 30 {
            return Err(Error::Capacity {
                n: self.n_qubits,
                cap: 30,
            });
        }
        let classes: Vec<f64> = (0..=self.n_qubits)
            .map(|w| self.log_weight_of_class(w).exp())
            .collect();
        Ok((0..1u64 << self.n_qubits)
            .map(|i| classes[i.count_ones() as usize])
            .collect())
    }
}

/// ln⟨i|ρ_th|i⟩ = [N − 2w(i)]α − ln Z.
pub fn thermal_log_weight(spec: &ThermalSpec, basis_index: u64) -> Result<f64> {
    let n = spec.n_qubits;
    if n < 64 && basis_index >= 1u64 << n {
        return Err(Error::IndexOutOfRange {
            index: basis_index,
            dim: 1u64 << n,
        });
    }
    Ok(spec.log_weight_of_class(basis_index.count_ones() as usize))
}

/// Which form of the ε(α) relation to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsilonMode {
    /// `e^{Nα}/Z − (1 − e^{Nα}/Z)/(2^N − 1)`.
    Exact,
    /// `Nα/(2^N − 1)`, the small-Nα limit.
    Approximate,
}

impl EpsilonMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EpsilonMode::Exact => "exact",
            EpsilonMode::Approximate => "approximate",
        }
    }
}

impl std::str::FromStr for EpsilonMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EpsilonMode::Exact),
            "approximate" | "approx" => Ok(EpsilonMode::Approximate),
            other => Err(Error::Parse(format!("unknown epsilon mode `{other}`"))),
        }
    }
}

/// ln ε(N, α). `-inf` at α = 0.
///
/// The exact branch uses `d·e^{Nα}/Z − 1 = expm1(N·ln(1 + tanh α))`, which
/// has no cancellation for small α and no overflow for large N.
pub fn ln_epsilon_from_alpha(n: u64, alpha: f64, mode: EpsilonMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("epsilon_from_alpha needs n >= 1".into()));
    }
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::Domain(format!(
            "alpha must be nonnegative, got {alpha}"
        )));
    }
    if alpha == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let nf = n as f64;
    let ln_denom = ln_pow2_minus_one(nf);
    Ok(match mode {
        EpsilonMode::Approximate => nf.ln() + alpha.ln() - ln_denom,
        EpsilonMode::Exact => {
            let x = nf * alpha.tanh().ln_1p();
            ln_expm1(x) - ln_denom
        }
    })
}

/// ε(N, α) in the requested mode. Underflows to zero for very large N.
pub fn epsilon_from_alpha(n: u64, alpha: f64, mode: EpsilonMode) -> Result<f64> {
    ln_epsilon_from_alpha(n, alpha, mode).map(f64::exp)
}

/// Which effective-pure family a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectivePureRole {
    /// `(1 − ε)M_d + ε|0⟩⟨0|`.
    GroundStateForm,
    /// `(1 − ε)M_d + ερ′` for a generic ρ′.
    GenericBiasForm,
}

/// An effective pure state `(1 − ε)·I/d + ε·|0⟩⟨0|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePureSpec {
    pub dimension: u64,
    pub epsilon: f64,
    pub role: EffectivePureRole,
}

impl EffectivePureSpec {
    pub fn new(dimension: u64, epsilon: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(EffectivePureSpec {
            dimension,
            epsilon,
            role: EffectivePureRole::GroundStateForm,
        })
    }

    pub fn with_role(mut self, role: EffectivePureRole) -> Self {
        self.role = role;
        self
    }
}

/// Diagonal of an effective pure state; index 0 carries the excess ε.
#[derive(Debug, Clone, Copy)]
pub struct EffectivePureDiagonal {
    spec: EffectivePureSpec,
}

impl EffectivePureDiagonal {
    pub fn weight(&self, index: u64) -> Result<f64> {
        let d = self.spec.dimension;
        if index >= d {
            return Err(Error::IndexOutOfRange { index, dim: d });
        }
        let base = (1.0 - self.spec.epsilon) / d as f64;
        Ok(if index == 0 {
            base + self.spec.epsilon
        } else {
            base
        })
    }

    pub fn dimension(&self) -> u64 {
        self.spec.dimension
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.spec.dimension)
            .map(|i| self.weight(i).unwrap())
            .collect()
    }
}

pub fn effective_pure_diagonal(spec: &EffectivePureSpec) -> EffectivePureDiagonal {
    EffectivePureDiagonal { spec: *spec }
}
