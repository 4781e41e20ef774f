//! Overflow-safe scalar helpers.
//!
//! Every quantity in this crate that can reach `e^{Nα}` with `Nα` in the
//! hundreds of thousands is carried as a natural logarithm. The functions
//! here are the only places where such logs are combined.

use std::f64::consts::LN_2;

/// ln(cosh x), valid for all finite x.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// ln(2·cosh x).
pub fn ln_two_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// ln(sinh x) for x > 0; `-inf` at zero.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    x + (-(-2.0 * x).exp_m1()).ln() - LN_2
}

/// ln(tanh x) for x ≥ 0; `-inf` at zero.
pub fn ln_tanh(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    let t = (-2.0 * x).exp();
    (-(-2.0 * x).exp_m1()).ln() - t.ln_1p()
}

/// ln(eᵃ + eᵇ).
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// ln(eᵃ − eᵇ) for a ≥ b; `-inf` when a == b.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    debug_assert!(a >= b, "log_sub_exp requires a >= b ({a} < {b})");
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + (-(b - a).exp_m1()).ln()
}

/// ln Σ exp(xᵢ) over a slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let mut acc = KahanSum::default();
    for &x in xs {
        acc.add((x - max).exp());
    }
    max + acc.value().ln()
}

/// ln(eˣ − 1) for x > 0.
pub fn ln_expm1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 1.0 {
        x.exp_m1().ln()
    } else {
        x + (-(-x).exp_m1()).ln()
    }
}

/// ln(1 + 2ᵐ) for any real m.
pub fn ln_one_plus_pow2(m: f64) -> f64 {
    if m > 0.0 {
        m * LN_2 + (-m).exp2().ln_1p()
    } else {
        m.exp2().ln_1p()
    }
}

/// ln(2ᵐ − 1) for m > 0.
pub fn ln_pow2_minus_one(m: f64) -> f64 {
    debug_assert!(m > 0.0);
    if m < 1.0 {
        (m * LN_2).exp_m1().ln()
    } else {
        m * LN_2 + (-(-m).exp2()).ln_1p()
    }
}

/// Compensated (Kahan–Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Table of ln(k!) for k = 0..=n, built by compensated summation of ln k.
#[derive(Debug, Clone)]
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        let mut acc = KahanSum::default();
        table.push(0.0);
        for k in 1..=n {
            acc.add((k as f64).ln());
            table.push(acc.value());
        }
        LnFactorial { table }
    }

    /// ln(k!). Panics if k exceeds the table size.
    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// ln C(n, k).
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n] - self.table[k] - self.table[n - k]
    }

    pub fn max_n(&self) -> usize {
        self.table.len() - 1
    }
}

/// Exact C(n, k) in 128-bit arithmetic; `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_logs_match_direct_evaluation() {
        for &x in &[1e-8, 1e-3, 0.3, 1.0, 5.0, 20.0] {
            assert!((ln_cosh(x) - x.cosh().ln()).abs() < 1e-14);
            assert!((ln_sinh(x) - x.sinh().ln()).abs() < 1e-13 * x.sinh().ln().abs().max(1.0));
            assert!((ln_tanh(x) - x.tanh().ln()).abs() < 1e-13 * x.tanh().ln().abs().max(1.0));
        }
        assert_eq!(ln_tanh(0.0), f64::NEG_INFINITY);
        // stays finite where cosh overflows
        assert!((ln_cosh(1e6) - (1e6 - LN_2)).abs() < 1e-9);
    }

    #[test]
    fn pow2_logs() {
        assert!((ln_one_plus_pow2(3.0) - 9f64.ln()).abs() < 1e-15);
        assert!((ln_pow2_minus_one(3.0) - 7f64.ln()).abs() < 1e-15);
        assert!((ln_pow2_minus_one(1e5) - 1e5 * LN_2).abs() < 1e-9);
        assert!((ln_one_plus_pow2(-60.0) - 2f64.powi(-60)).abs() < 1e-30);
    }

    #[test]
    fn log_add_and_sub() {
        let a = 2f64.ln();
        let b = 3f64.ln();
        assert!((log_add_exp(a, b) - 5f64.ln()).abs() < 1e-15);
        assert!((log_sub_exp(b, a) - 0.0).abs() < 1e-15);
        assert_eq!(log_sub_exp(a, a), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[0.0, 0.0, 0.0, 0.0]) - 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn ln_expm1_branches_agree() {
        for &x in &[1e-10f64, 0.5, 0.999, 1.0, 3.0, 800.0] {
            let direct = if x < 700.0 { x.exp_m1().ln() } else { x };
            assert!((ln_expm1(x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        assert!((s.value() - (1.0 + 1e-12)).abs() < 1e-20);
    }

    #[test]
    fn ln_factorial_matches_exact_binomials() {
        let lf = LnFactorial::new(200);
        for n in [10u64, 40, 64, 100] {
            for k in 0..=n {
                if let Some(exact) = binomial_u128(n, k) {
                    let approx = lf.ln_binomial(n as usize, k as usize).exp();
                    assert!(((approx - exact as f64) / exact as f64).abs() < 1e-13);
                }
            }
        }
        assert_eq!(binomial_u128(5, 2), Some(10));
        assert_eq!(binomial_u128(5, 7), Some(0));
        assert_eq!(binomial_u128(63, 31), Some(916_312_070_471_295_267));
    }
}
