//! Majorization, entropies and a search harness for unitarily reachable
//! entangled states.
//!
//! ρ_th can be turned into ρ′ by a random unitary channel iff the spectrum of
//! ρ_th majorizes that of ρ′. Entropy gives a cheap necessary condition:
//! majorization implies S(ρ′) ≥ S(ρ_th).

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::durcirac::{fully_separable, split_extremes, DurCiracState, LambdaTable};
use crate::error::{Error, Result};
use crate::logmath::{binomial_u128, log_add_exp, KahanSum};
use crate::states::ThermalSpec;

/// Largest N whose 2^N-entry spectra are expanded explicitly.
pub const SPECTRUM_CAP: usize = 20;

const NORMALIZATION_TOLERANCE: f64 = 1e-10;
const PREFIX_TOLERANCE: f64 = 1e-12;

/// Eigenvalues of a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    values: Vec<f64>,
}

impl SpectrumVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidState("empty spectrum".into()));
        }
        if let Some(v) = values
            .iter()
            .find(|v| v.is_nan() || **v < 0.0 || v.is_infinite())
        {
            return Err(Error::InvalidState(format!(
                "spectrum entry {v} is not a probability"
            )));
        }
        let total: f64 = values.iter().copied().collect::<KahanSum>().value();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidState(format!("spectrum sums to {total}")));
        }
        Ok(SpectrumVector { values })
    }

    /// Expands (value, multiplicity) classes.
    pub fn from_classes(classes: &[(f64, u64)]) -> Result<Self> {
        let len: u64 = classes.iter().map(|c| c.1).sum();
        if len > 1 << SPECTRUM_CAP {
            return Err(Error::Capacity {
                n: (64 - len.leading_zeros()) as usize,
                cap: SPECTRUM_CAP,
            });
        }
        let mut values = Vec::with_capacity(len as usize);
        for &(v, m) in classes {
            values.extend(std::iter::repeat_n(v, m as usize));
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn ascending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

fn prefix_sums(sorted: &[f64]) -> Vec<f64> {
    let mut acc = KahanSum::default();
    sorted
        .iter()
        .map(|&x| {
            acc.add(x);
            acc.value()
        })
        .collect()
}

/// Σ_{i≤k} r↑_i − Σ_{i≤k} s↑_i for every k; s majorizes r iff all are ≥ 0.
pub fn prefix_margins(s: &SpectrumVector, r: &SpectrumVector) -> Result<Vec<f64>> {
    if s.len() != r.len() {
        return Err(Error::LengthMismatch {
            left: s.len() as u64,
            right: r.len() as u64,
        });
    }
    let ps = prefix_sums(&s.ascending());
    let pr = prefix_sums(&r.ascending());
    Ok(pr.iter().zip(&ps).map(|(a, b)| a - b).collect())
}

/// True iff s majorizes r (r ≺ s): every ascending prefix sum of r is at
/// least that of s.
pub fn majorizes(s: &SpectrumVector, r: &SpectrumVector) -> Result<bool> {
    let m = prefix_margins(s, r)?;
    let last = *m.last().expect("spectra are nonempty");
    Ok(m.iter().all(|&x| x >= -PREFIX_TOLERANCE) && last.abs() <= NORMALIZATION_TOLERANCE)
}

/// −Σ p log₂ p in bits.
pub fn von_neumann_entropy(spectrum: &SpectrumVector) -> f64 {
    spectrum
        .values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .collect::<KahanSum>()
        .value()
}

/// N·h(p) bits with p = (1 + tanh α)/2.
pub fn thermal_entropy(spec: &ThermalSpec) -> f64 {
    let a = spec.alpha();
    // ln p = −ln(1 + e^{−2α}), ln(1 − p) = −2α + ln p
    let ln_p = -log_add_exp(0.0, -2.0 * a);
    let ln_q = -2.0 * a + ln_p;
    let h = -(ln_p.exp() * ln_p + ln_q.exp() * ln_q) / std::f64::consts::LN_2;
    spec.n_qubits() as f64 * h
}

/// The 2^N thermal populations, one class per Hamming weight.
pub fn thermal_spectrum(spec: &ThermalSpec) -> Result<SpectrumVector> {
    let n = spec.n_qubits();
    if n > SPECTRUM_CAP {
        return Err(Error::Capacity {
            n,
            cap: SPECTRUM_CAP,
        });
    }
    let classes: Vec<(f64, u64)> = (0..=n)
        .map(|w| {
            let count = binomial_u128(n as u64, w as u64).expect("small binomial") as u64;
            (spec.log_weight_of_class(w).exp(), count)
        })
        .collect();
    SpectrumVector::from_classes(&classes)
}

/// A ρ_N state together with its explicit spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateState {
    pub state: DurCiracState,
    pub spectrum: SpectrumVector,
}

impl CandidateState {
    pub fn new(state: DurCiracState) -> Result<Self> {
        if state.n_qubits() > SPECTRUM_CAP {
            return Err(Error::Capacity {
                n: state.n_qubits(),
                cap: SPECTRUM_CAP,
            });
        }
        let spectrum = SpectrumVector::from_classes(&state.spectrum_classes())?;
        Ok(CandidateState { state, spectrum })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    EntropyRejected,
    MajorizationRejected,
}

impl Feasibility {
    pub fn as_str(&self) -> &'static str {
        match self {
            Feasibility::Feasible => "feasible",
            Feasibility::EntropyRejected => "entropy_rejected",
            Feasibility::MajorizationRejected => "majorization_rejected",
        }
    }
}

/// Whether some random unitary channel maps ρ_th to the candidate.
pub fn uhlmann_feasible(candidate: &CandidateState, spec: &ThermalSpec) -> Result<Feasibility> {
    if candidate.state.n_qubits() != spec.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: spec.n_qubits(),
            found: candidate.state.n_qubits(),
        });
    }
    spectrum_feasible(&candidate.spectrum, spec)
}

/// [`uhlmann_feasible`] for a bare spectrum.
pub fn spectrum_feasible(spectrum: &SpectrumVector, spec: &ThermalSpec) -> Result<Feasibility> {
    if spectrum.len() != 1 << spec.n_qubits().min(63) {
        return Err(Error::LengthMismatch {
            left: 1 << spec.n_qubits().min(63),
            right: spectrum.len() as u64,
        });
    }
    if thermal_entropy(spec) > von_neumann_entropy(spectrum) + PREFIX_TOLERANCE {
        return Ok(Feasibility::EntropyRejected);
    }
    if !majorizes(&thermal_spectrum(spec)?, spectrum)? {
        return Ok(Feasibility::MajorizationRejected);
    }
    Ok(Feasibility::Feasible)
}

/// Produces candidate ρ_N states for [`search_candidate`].
pub trait CandidateGenerator {
    /// `None` ends the search early.
    fn next_candidate(&mut self) -> Option<DurCiracState>;
}

impl<F: FnMut() -> Option<DurCiracState>> CandidateGenerator for F {
    fn next_candidate(&mut self) -> Option<DurCiracState> {
        self()
    }
}

/// Shuffles the thermal populations over the 2^N Bell-basis slots, then
/// applies E_φ. Every candidate is unitarily reachable by construction.
pub struct BellPermutationGenerator {
    n_qubits: usize,
    populations: Vec<f64>,
    rng: ChaCha8Rng,
}

impl BellPermutationGenerator {
    pub fn new(spec: &ThermalSpec, seed: u64) -> Result<Self> {
        Ok(BellPermutationGenerator {
            n_qubits: spec.n_qubits(),
            populations: thermal_spectrum(spec)?.values,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl CandidateGenerator for BellPermutationGenerator {
    fn next_candidate(&mut self) -> Option<DurCiracState> {
        let mut p = self.populations.clone();
        p.shuffle(&mut self.rng);
        let half = p.len() / 2;
        // slot j holds λ_j⁺, slot half + j holds λ_j⁻
        let lambda: Vec<f64> = (0..half)
            .map(|j| (0.5 * (p[j] + p[half + j])).ln())
            .collect();
        DurCiracState::new(
            self.n_qubits,
            p[0].ln(),
            p[half].ln(),
            LambdaTable::Dense(lambda),
        )
        .ok()
    }
}

/// Why a candidate was accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Canonical split mask (qubit 1 in party B) on which the candidate is NPT.
    pub split_mask: u64,
    /// Thermal-versus-candidate ascending prefix-sum margins, all ≥ 0.
    pub prefix_margins: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSuccess {
    /// Position of the candidate in generation order.
    pub index: usize,
    pub candidate: CandidateState,
    pub certificate: Certificate,
}

/// Candidates evaluated per parallel batch.
pub const SEARCH_BATCH: usize = 64;

fn check_candidate(
    state: DurCiracState,
    spec: &ThermalSpec,
    thermal: &SpectrumVector,
) -> Result<Option<(CandidateState, Certificate)>> {
    if fully_separable(&state) {
        return Ok(None);
    }
    let candidate = CandidateState::new(state)?;
    if uhlmann_feasible(&candidate, spec)? != Feasibility::Feasible {
        return Ok(None);
    }
    let ex = split_extremes(&candidate.state);
    let split_mask = match candidate.state.table() {
        LambdaTable::ByWeight(_) => (1u64 << ex.argmin) - 1,
        LambdaTable::Dense(_) => ex.argmin,
    };
    let prefix_margins = prefix_margins(thermal, &candidate.spectrum)?;
    Ok(Some((
        candidate,
        Certificate {
            split_mask,
            prefix_margins,
        },
    )))
}

/// Draws up to `budget` candidates and returns the first (by generation
/// index) that is NPT across some split and reachable from ρ_th. Batches
/// are checked in parallel.
pub fn search_candidate<G: CandidateGenerator>(
    spec: &ThermalSpec,
    generator: &mut G,
    budget: usize,
) -> Result<Option<SearchSuccess>> {
    if budget == 0 {
        return Err(Error::Domain("search budget must be positive".into()));
    }
    let thermal = thermal_spectrum(spec)?;
    let mut index = 0;
    while index < budget {
        let mut batch = Vec::with_capacity(SEARCH_BATCH);
        while batch.len() < SEARCH_BATCH && index + batch.len() < budget {
            match generator.next_candidate() {
                Some(c) => batch.push(c),
                None => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        let len = batch.len();
        let results: Vec<Option<(CandidateState, Certificate)>> = batch
            .into_par_iter()
            .map(|c| check_candidate(c, spec, &thermal))
            .collect::<Result<_>>()?;
        if let Some((offset, (candidate, certificate))) = results
            .into_iter()
            .enumerate()
            .find_map(|(i, r)| r.map(|x| (i, x)))
        {
            return Ok(Some(SearchSuccess {
                index: index + offset,
                candidate,
                certificate,
            }));
        }
        index += len;
        if len < SEARCH_BATCH && index < budget {
            break;
        }
    }
    Ok(None)
}

/// Reads a spectrum: a `# n=<N>` header line, then one eigenvalue per line.
/// Blank lines are ignored.
pub fn read_spectrum_csv<R: BufRead>(reader: R) -> Result<(usize, SpectrumVector)> {
    let mut n = None;
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("n=") {
                n = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad header `{line}`: {e}")))?,
                );
            }
            continue;
        }
        let v = line
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("line {}: `{line}`: {e}", lineno + 1)))?;
        values.push(v);
    }
    let n = n.ok_or_else(|| Error::Parse("missing `# n=<N>` header".into()))?;
    if n > SPECTRUM_CAP || values.len() != 1 << n {
        return Err(Error::Parse(format!(
            "expected 2^{n} values, found {}",
            values.len()
        )));
    }
    Ok((n, SpectrumVector::new(values)?))
}

pub fn write_spectrum_csv<W: Write>(n: usize, spectrum: &SpectrumVector, mut w: W) -> Result<()> {
    writeln!(w, "# n={n}")?;
    for v in &spectrum.values {
        writeln!(w, "{v}")?;
    }
    Ok(())
}
