//! Closed-form separability and distillability curves, and threshold solvers.
//!
//! Every curve is a predicate in (N, x) where x is either ε or α. Internally
//! each predicate is a margin rearranged into linear-in-log form: the
//! predicate holds iff the margin is positive (strict curves) or
//! non-negative (non-strict curves). Nothing of the size e^{Nα} or 2^N is
//! ever materialized.

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::constants::TWO_QUBIT_ENTANGLEMENT_ALPHA;
use crate::error::{Error, Result};
use crate::logmath::{ln_one_plus_pow2, ln_pow2_minus_one, ln_tanh};
use crate::states::{ln_epsilon_from_alpha, EpsilonMode};

/// Upper end of the N search range, 2^40.
pub const N_SEARCH_MAX: u64 = 1 << 40;

/// Above this N the half-split closed forms rest on an eigenvector
/// identification that has only been checked numerically for smaller N.
pub const HALF_SPLIT_VERIFIED_MAX_N: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCurve {
    /// ε ≤ 1/(1 + 2^{2N−1}): effective pure state separable.
    BraunSep,
    /// ε > 1/(1 + 2^{N/2}): effective pure state can be entangled.
    BraunEnt,
    /// ε ≤ 3/(2·6^{N/2}): separable, tighter lower bound.
    GurvitsSep,
    /// α > ½ asinh 1 = −½ ln(√2 − 1).
    BraunEntAlpha,
    /// α ≤ 3(2^N − 1)/(2N·6^{N/2}), the small-α translation of `GurvitsSep`.
    GurvitsSepAlpha,
    /// Bell-rotated effective pure state fully distillable, exact ε.
    DurciracEffpure,
    /// ρ_cH NPT across {1, N−1}.
    UchOneSplit,
    /// ρ_cH NPT across {N/2, N/2}.
    UchHalfSplit,
    /// E_φ(ρ_cH) fully separable.
    UchFullsep,
    /// E_φ(ρ_cH) fully distillable.
    UchFulldist,
    /// E_φ(ρ_cf) fully separable.
    CfFullsep,
    /// E_φ(ρ_cf) fully distillable.
    CfFulldist,
}

/// Whether a curve holds for large or small values of its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    SatisfiedAbove,
    SatisfiedBelow,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::SatisfiedAbove => "satisfied-above",
            Direction::SatisfiedBelow => "satisfied-below",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Epsilon,
    Alpha,
}

impl BoundCurve {
    pub const ALL: [BoundCurve; 12] = [
        BoundCurve::BraunSep,
        BoundCurve::BraunEnt,
        BoundCurve::GurvitsSep,
        BoundCurve::BraunEntAlpha,
        BoundCurve::GurvitsSepAlpha,
        BoundCurve::DurciracEffpure,
        BoundCurve::UchOneSplit,
        BoundCurve::UchHalfSplit,
        BoundCurve::UchFullsep,
        BoundCurve::UchFulldist,
        BoundCurve::CfFullsep,
        BoundCurve::CfFulldist,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundCurve::BraunSep => "braun_sep",
            BoundCurve::BraunEnt => "braun_ent",
            BoundCurve::GurvitsSep => "gurvits_sep",
            BoundCurve::BraunEntAlpha => "braun_ent_alpha",
            BoundCurve::GurvitsSepAlpha => "gurvits_sep_alpha",
            BoundCurve::DurciracEffpure => "durcirac_effpure",
            BoundCurve::UchOneSplit => "uch_one_split",
            BoundCurve::UchHalfSplit => "uch_half_split",
            BoundCurve::UchFullsep => "uch_fullsep",
            BoundCurve::UchFulldist => "uch_fulldist",
            BoundCurve::CfFullsep => "cf_fullsep",
            BoundCurve::CfFulldist => "cf_fulldist",
        }
    }

    pub fn space(&self) -> Space {
        match self {
            BoundCurve::BraunSep | BoundCurve::BraunEnt | BoundCurve::GurvitsSep => Space::Epsilon,
            _ => Space::Alpha,
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            BoundCurve::BraunSep
            | BoundCurve::GurvitsSep
            | BoundCurve::GurvitsSepAlpha
            | BoundCurve::UchFullsep
            | BoundCurve::CfFullsep => Direction::SatisfiedBelow,
            _ => Direction::SatisfiedAbove,
        }
    }

    /// Separability curves use ≤ and hold on their boundary.
    pub fn strict(&self) -> bool {
        self.direction() == Direction::SatisfiedAbove
    }

    /// True when the result relies on the unproven half-split eigenvector form.
    pub fn conjecture_dependent(&self, n: u64) -> bool {
        *self == BoundCurve::UchHalfSplit && n > HALF_SPLIT_VERIFIED_MAX_N
    }

    /// Odd N makes the half split unbalanced.
    fn check_n(&self, n: u64) -> Result<()> {
        if n < 2 {
            return Err(Error::Domain(format!("need n >= 2, got {n}")));
        }
        if *self == BoundCurve::UchHalfSplit && !n.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "uch_half_split needs even n, got {n}"
            )));
        }
        Ok(())
    }

    /// The margin in log-linear form. `x` is ln ε for ε-space curves and α
    /// for α-space curves.
    fn margin(&self, n: u64, x: f64) -> f64 {
        let nf = n as f64;
        match self {
            BoundCurve::BraunSep => -ln_one_plus_pow2(2.0 * nf - 1.0) - x,
            BoundCurve::BraunEnt => x + ln_one_plus_pow2(nf / 2.0),
            BoundCurve::GurvitsSep => 1.5f64.ln() - 0.5 * nf * 6f64.ln() - x,
            BoundCurve::BraunEntAlpha => x - TWO_QUBIT_ENTANGLEMENT_ALPHA,
            BoundCurve::GurvitsSepAlpha => separable_ball_alpha_ln_rhs(nf) - x.ln(),
            BoundCurve::DurciracEffpure => x - effpure_alpha_boundary(nf),
            BoundCurve::UchOneSplit | BoundCurve::CfFulldist => 2.0 * (nf - 1.0) * x + ln_tanh(x),
            BoundCurve::UchHalfSplit => nf * x + ln_tanh(x),
            BoundCurve::UchFullsep => -(2.0 * (nf - 1.0) * x + ln_tanh(x)),
            BoundCurve::UchFulldist => 2.0 * x + ln_tanh(x),
            BoundCurve::CfFullsep => {
                if n.is_multiple_of(2) {
                    SQRT_2.ln_1p() - nf * x
                } else {
                    asinh_cosh(x) - nf * x
                }
            }
        }
    }

    fn holds(&self, margin: f64) -> bool {
        if self.strict() {
            margin > 0.0
        } else {
            margin >= 0.0
        }
    }

    /// The predicate at (N, α), converting α to ε for ε-space curves.
    pub fn evaluate_at_alpha(&self, n: u64, alpha: f64, mode: EpsilonMode) -> Result<bool> {
        self.check_n(n)?;
        check_nonnegative("alpha", alpha)?;
        let x = match self.space() {
            Space::Epsilon => ln_epsilon_from_alpha(n, alpha, mode)?,
            Space::Alpha => alpha,
        };
        Ok(self.holds(self.margin(n, x)))
    }
}

impl fmt::Display for BoundCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundCurve::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCurve(s.to_string()))
    }
}

fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 || v.is_infinite() {
        return Err(Error::Domain(format!(
            "{name} must be finite and non-negative, got {v}"
        )));
    }
    Ok(())
}

/// ln[3(2^N − 1)/(2N·6^{N/2})].
fn separable_ball_alpha_ln_rhs(nf: f64) -> f64 {
    3f64.ln() + ln_pow2_minus_one(nf) - (2.0 * nf).ln() - 0.5 * nf * 6f64.ln()
}

/// −½ ln[((2 + 2^N)/3)^{1/N} − 1], rewritten as −½ ln1p(2·expm1(t)) with
/// t = (ln(1 + 2^{1−N}) − ln 3)/N.
fn effpure_alpha_boundary(nf: f64) -> f64 {
    let t = (ln_one_plus_pow2(1.0 - nf) - 3f64.ln()) / nf;
    -0.5 * (2.0 * t.exp_m1()).ln_1p()
}

/// asinh(cosh α) without overflow for large α.
fn asinh_cosh(alpha: f64) -> f64 {
    if alpha > 20.0 {
        alpha + (-2.0 * alpha).exp().ln_1p()
    } else {
        alpha.cosh().asinh()
    }
}

/// Predicate value of `curve` at N with its own parameter (ε or α).
pub fn evaluate(curve: BoundCurve, n: u64, value: f64) -> Result<bool> {
    curve.check_n(n)?;
    check_nonnegative(
        if curve.space() == Space::Epsilon {
            "epsilon"
        } else {
            "alpha"
        },
        value,
    )?;
    let x = match curve.space() {
        Space::Epsilon => {
            if value > 1.0 {
                return Err(Error::Domain(format!(
                    "epsilon must be at most 1, got {value}"
                )));
            }
            value.ln()
        }
        Space::Alpha => value,
    };
    Ok(curve.holds(curve.margin(n, x)))
}

/// The first N at which a predicate differs from its value at the start of
/// the range, with the bracketing values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NThreshold {
    pub n_star: u64,
    pub predicate_at_n_star: bool,
    pub predicate_at_prev: bool,
}

/// Least N > `start` with `pred(N) != pred(start)`, by galloping then
/// bisection. Assumes a single flip.
fn first_flip(
    start: u64,
    what: &str,
    mut pred: impl FnMut(u64) -> Result<bool>,
) -> Result<NThreshold> {
    let initial = pred(start)?;
    let mut lo = start;
    let mut step = 1u64;
    let mut hi = start + 1;
    while pred(hi)? == initial {
        lo = hi;
        step = step.saturating_mul(2);
        hi = start.saturating_add(step);
        if hi > N_SEARCH_MAX {
            return Err(Error::NoSignChange {
                what: what.to_string(),
                lo: start as f64,
                hi: N_SEARCH_MAX as f64,
            });
        }
    }
    // pred(lo) == initial, pred(hi) != initial
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid)? == initial {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(NThreshold {
        n_star: hi,
        predicate_at_n_star: !initial,
        predicate_at_prev: initial,
    })
}

/// The least N ≥ 3 whose predicate differs from N = 2 (N ≥ 4 over even N
/// for `uch_half_split`). ε-space curves convert α through `mode`.
pub fn threshold_n(curve: BoundCurve, alpha: f64, mode: EpsilonMode) -> Result<NThreshold> {
    check_nonnegative("alpha", alpha)?;
    let what = format!("{curve} at alpha = {alpha}");
    if curve == BoundCurve::UchHalfSplit {
        // search over k = N/2
        let t = first_flip(1, &what, |k| curve.evaluate_at_alpha(2 * k, alpha, mode))?;
        return Ok(NThreshold {
            n_star: 2 * t.n_star,
            ..t
        });
    }
    first_flip(2, &what, |n| curve.evaluate_at_alpha(n, alpha, mode))
}

/// Lower and upper α limits for [`threshold_alpha`].
pub const ALPHA_SEARCH_RANGE: (f64, f64) = (1e-18, 1e3);

/// The α at which the predicate flips at fixed N, by bisection in ln α to
/// 10⁻¹⁴ relative width. Returns the midpoint of the final bracket.
pub fn threshold_alpha(curve: BoundCurve, n: u64, mode: EpsilonMode) -> Result<f64> {
    curve.check_n(n)?;
    let (mut lo, mut hi) = ALPHA_SEARCH_RANGE;
    let p_lo = curve.evaluate_at_alpha(n, lo, mode)?;
    if curve.evaluate_at_alpha(n, hi, mode)? == p_lo {
        return Err(Error::NoSignChange {
            what: format!("{curve} at n = {n}"),
            lo,
            hi,
        });
    }
    while hi / lo - 1.0 > 1e-14 {
        let mid = (lo * hi).sqrt();
        let mid = if mid > lo && mid < hi {
            mid
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if curve.evaluate_at_alpha(n, mid, mode)? == p_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Least N with ε(N, α; mode) > 1/(1 + 2^{N−1}).
pub fn effpure_distillable_threshold(alpha: f64, mode: EpsilonMode) -> Result<u64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let pred = |n: u64| -> Result<bool> {
        let nf = n as f64;
        Ok(match mode {
            // Nα(1 + 2^{N−1}) > 2^N − 1  ⟺  (Nα − 2) + 2^{1−N}(Nα + 1) > 0
            EpsilonMode::Approximate => {
                let gap = nf.mul_add(alpha, -2.0);
                gap >= 0.0 || (-gap).ln() < (1.0 - nf) * LN_2 + nf.mul_add(alpha, 1.0).ln()
            }
            EpsilonMode::Exact => {
                ln_epsilon_from_alpha(n, alpha, mode)? > -ln_one_plus_pow2(nf - 1.0)
            }
        })
    };
    if pred(2)? {
        return Ok(2);
    }
    Ok(first_flip(
        2,
        &format!("effective-pure distillability at alpha = {alpha}"),
        pred,
    )?
    .n_star)
}

/// Algorithmic cooling arithmetic: N₀ qubits at bias α₀ yield about α₀²N₀
/// nearly pure qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvResources {
    pub output_count: Option<f64>,
    pub required_n0_for_one: f64,
}

pub fn sv_resources(alpha0: f64, n0: Option<u64>) -> Result<SvResources> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::Domain(format!(
            "alpha0 must be positive, got {alpha0}"
        )));
    }
    Ok(SvResources {
        output_count: n0.map(|n| alpha0 * alpha0 * n as f64),
        required_n0_for_one: alpha0.powi(-2),
    })
}
