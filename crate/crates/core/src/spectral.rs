//! Closed-form partial-transpose spectra of ρ_cH.
//!
//! Across the {1, N−1} split, ρ_cH^{T_A} decomposes into 2×2 blocks labelled
//! by the total angular momentum j and azimuthal number m of the N−1 qubits in
//! party B. The block eigenvalues depend only on m. Half-integer quantum
//! numbers are carried doubled (`twice_j`, `twice_m`) so they stay integers.
//!
//! Across the {N/2, N/2} split only the minimum eigenvalue is available in
//! closed form, through two candidate eigenvectors whose roles swap at α_tr.

use crate::error::{Error, Result};
use crate::logmath::{
    binomial_u128, ln_cosh, ln_expm1, ln_tanh, log_add_exp, KahanSum, LnFactorial,
};
use crate::states::{thermal_log_weight, ThermalSpec};

/// Largest N for which multiplicities are computed in exact integer arithmetic.
pub const EXACT_MULTIPLICITY_MAX_N: u64 = 64;

/// Number of copies of a spin-j irrep in N−1 spin-½ particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplicity {
    Exact(u128),
    /// Natural log of a value too large for exact arithmetic.
    Log(f64),
}

impl Multiplicity {
    pub fn ln(&self) -> f64 {
        match *self {
            Multiplicity::Exact(0) => f64::NEG_INFINITY,
            Multiplicity::Exact(v) => (v as f64).ln(),
            Multiplicity::Log(l) => l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularBlock {
    pub twice_j: u64,
    pub twice_m: i64,
    pub multiplicity: Multiplicity,
}

impl AngularBlock {
    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least two qubits, got {n}")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

/// k = j_max − j for a doubled j, or an error if j is out of range or has the wrong parity.
fn k_of_j(n: u64, twice_j: u64) -> Result<u64> {
    let twice_jmax = n - 1;
    if twice_j > twice_jmax || !(twice_jmax - twice_j).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "j = {}/2 is not a valid spin for {} qubits",
            twice_j,
            n - 1
        )));
    }
    Ok((twice_jmax - twice_j) / 2)
}

/// mult(j) = C(2j_max, j_max − j)(2j + 1)/(j_max + j + 1) with j_max = (N−1)/2.
pub fn multiplicity(n: u64, twice_j: u64) -> Result<Multiplicity> {
    check_n(n)?;
    let k = k_of_j(n, twice_j)?;
    if n <= EXACT_MULTIPLICITY_MAX_N {
        let c = binomial_u128(n - 1, k).expect("C(63, k) fits in u128");
        let num = c * (twice_j as u128 + 1);
        let den = (n - k) as u128;
        debug_assert_eq!(num % den, 0);
        Ok(Multiplicity::Exact(num / den))
    } else {
        Ok(Multiplicity::Log(ln_multiplicity(
            &LnFactorial::new(n as usize),
            n,
            k,
        )))
    }
}

fn ln_multiplicity(lf: &LnFactorial, n: u64, k: u64) -> f64 {
    lf.ln_binomial(n as usize - 1, k as usize) + ((n - 2 * k) as f64).ln() - ((n - k) as f64).ln()
}

/// Every (j, m) block of the {1, N−1} decomposition, j descending, m descending.
pub fn angular_blocks(n: u64) -> Result<Vec<AngularBlock>> {
    check_n(n)?;
    let mut out = Vec::new();
    let mut twice_j = n - 1;
    loop {
        let multiplicity = multiplicity(n, twice_j)?;
        let mut twice_m = twice_j as i64;
        while twice_m >= -(twice_j as i64) {
            out.push(AngularBlock {
                twice_j,
                twice_m,
                multiplicity,
            });
            twice_m -= 2;
        }
        if twice_j < 2 {
            break;
        }
        twice_j -= 2;
    }
    Ok(out)
}

/// ln of the block prefactor e^{−2mα}cosh α/Z and the exponent d = 4mα + ln tanh α.
fn block_parts(n: u64, alpha: f64, twice_m: i64) -> Result<(f64, f64)> {
    check_n(n)?;
    check_alpha(alpha)?;
    let twice_jmax = (n - 1) as i64;
    if twice_m.abs() > twice_jmax || (twice_jmax - twice_m) % 2 != 0 {
        return Err(Error::Domain(format!(
            "m = {twice_m}/2 is not valid for {} qubits in party B",
            n - 1
        )));
    }
    let ln_z = ThermalSpec::new(n as usize, alpha)?.log_partition();
    let m = twice_m as f64 / 2.0;
    let prefactor = -2.0 * m * alpha + ln_cosh(alpha) - ln_z;
    let d = 4.0 * m * alpha + ln_tanh(alpha);
    Ok((prefactor, d))
}

/// e^{ln_scale}(1 − e^d), without overflow when e^d is huge and e^{ln_scale} tiny.
fn scaled_one_minus_exp(ln_scale: f64, d: f64) -> f64 {
    if d > 0.0 {
        -(ln_scale + ln_expm1(d)).exp()
    } else {
        -ln_scale.exp() * d.exp_m1()
    }
}

/// λ₊(m), λ₋(m) = (e^{−2mα}cosh α ± e^{2mα}sinh α)/Z.
pub fn block_eigenvalues(n: u64, alpha: f64, twice_m: i64) -> Result<(f64, f64)> {
    let (pre, d) = block_parts(n, alpha, twice_m)?;
    let plus = (pre + log_add_exp(0.0, d)).exp();
    let minus = scaled_one_minus_exp(pre, d);
    Ok((plus, minus))
}

/// Σ_{j ≥ |m|} mult(j), the number of blocks sharing a given m. The ballot
/// numbers telescope, so this is C(N−1, (N−1−2|m|)/2).
fn ln_degeneracy_by_m(n: u64) -> Vec<(i64, f64)> {
    let twice_jmax = n - 1;
    let lf = LnFactorial::new(n as usize);
    let mut out = Vec::new();
    let mut twice_m = twice_jmax as i64;
    while twice_m >= -(twice_jmax as i64) {
        let k = (twice_jmax - twice_m.unsigned_abs()) / 2;
        out.push((twice_m, lf.ln_binomial(twice_jmax as usize, k as usize)));
        twice_m -= 2;
    }
    out
}

/// Negativity of ρ_cH across {1, N−1}: the summed magnitude of the negative
/// block eigenvalues, grouped by m and accumulated smallest first.
pub fn negativity_one_split(n: u64, alpha: f64) -> Result<f64> {
    check_n(n)?;
    check_alpha(alpha)?;
    let mut terms = Vec::new();
    for (twice_m, ln_deg) in ln_degeneracy_by_m(n) {
        let (pre, d) = block_parts(n, alpha, twice_m)?;
        if d > 0.0 {
            terms.push((ln_deg + pre + ln_expm1(d)).exp());
        }
    }
    terms.sort_by(f64::total_cmp);
    Ok(terms.into_iter().collect::<KahanSum>().value())
}

/// log₁₀(value + 10⁻¹²), the scale used for negativity surfaces.
pub fn log_negativity_display(value: f64) -> f64 {
    (value + 1e-12).log10()
}

/// e^{2(N−1)α} tanh α > 1: the smallest {1, N−1} block eigenvalue is negative.
pub fn min_eig_one_split_positive(n: u64, alpha: f64) -> Result<bool> {
    check_n(n)?;
    check_alpha(alpha)?;
    Ok(2.0 * (n - 1) as f64 * alpha + ln_tanh(alpha) > 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSplitEigs {
    /// Eigenvalue on (|2^{N−1}−1⟩ − |2^{N−1}⟩)/√2.
    pub lambda_minus: f64,
    /// Eigenvalue on (|2^{N/2}−1⟩ − |2^N−2^{N/2}⟩)/√2.
    pub lambda_plus: f64,
    /// Root of Nα + ln tanh α = 0.
    pub alpha_tr: f64,
}

impl HalfSplitEigs {
    pub fn min(&self) -> f64 {
        self.lambda_minus.min(self.lambda_plus)
    }
}

fn check_even(n: u64) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "the half split needs an even qubit count, got {n}"
        )));
    }
    Ok(())
}

/// Solves e^{Nα} tanh α = 1 by bisection on [10⁻⁹, 10].
pub fn alpha_tr(n: u64) -> Result<f64> {
    check_n(n)?;
    let f = |a: f64| n as f64 * a + ln_tanh(a);
    let (mut lo, mut hi) = (1e-9, 10.0);
    if f(lo) >= 0.0 || f(hi) <= 0.0 {
        return Err(Error::NoSignChange {
            what: "alpha_tr".into(),
            lo,
            hi,
        });
    }
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// λ₋ = e^α(e^{−Nα}cosh α − sinh α)/Z and λ₊ = e^{−α}(cosh α − e^{Nα}sinh α)/Z.
pub fn half_split_eigs(n: u64, alpha: f64) -> Result<HalfSplitEigs> {
    check_even(n)?;
    check_alpha(alpha)?;
    let nf = n as f64;
    let ln_z = ThermalSpec::new(n as usize, alpha)?.log_partition();
    // Both share the factor (1 − e^{Nα} tanh α).
    let d = nf * alpha + ln_tanh(alpha);
    let lambda_minus = scaled_one_minus_exp((1.0 - nf) * alpha + ln_cosh(alpha) - ln_z, d);
    let lambda_plus = scaled_one_minus_exp(-alpha + ln_cosh(alpha) - ln_z, d);
    Ok(HalfSplitEigs {
        lambda_minus,
        lambda_plus,
        alpha_tr: alpha_tr(n)?,
    })
}

/// The four ρ_cH^{T_A} entries, built from thermal populations, that fix the
/// two half-split candidate eigenvalues: λ₋ = e₁ − e₂ and λ₊ = e₃ − e₄.
/// e₁, e₃ are diagonal entries and e₂, e₄ the off-diagonal couplings of the
/// two 2×2 blocks containing the candidate eigenvectors.
pub fn table1_matrix_elements(n: u64, alpha: f64) -> Result<[f64; 4]> {
    check_even(n)?;
    check_alpha(alpha)?;
    if n > 62 {
        return Err(Error::Capacity {
            n: n as usize,
            cap: 62,
        });
    }
    let spec = ThermalSpec::new(n as usize, alpha)?;
    let th = |i: u64| thermal_log_weight(&spec, i).map(f64::exp);
    let full = 1u64 << n;
    let top = 1u64 << (n - 1);
    let low = 1u64 << (n / 2);
    Ok([
        0.5 * (th(top - 1)? + th(full - 1)?),
        0.5 * (th(top - low)? - th(full - low)?),
        0.5 * (th(low - 1)? + th(low + top - 1)?),
        0.5 * (th(0)? - th(top)?),
    ])
}
