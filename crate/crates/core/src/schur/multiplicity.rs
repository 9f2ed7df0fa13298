use statrs::function::gamma::ln_gamma;

use super::SpinLabel;
use crate::error::{Error, Result};

/// Spins occurring in `n` qubits, ascending.
pub fn valid_spins(n: usize) -> Vec<SpinLabel> {
    (n % 2..=n).step_by(2).map(SpinLabel::from_two_j).collect()
}

fn binomial(n: usize, k: usize) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n-k+i) is divisible by i at every step
        acc = acc
            .checked_mul(n as u128 - k as u128 + i)
            .ok_or_else(|| Error::Overflow(format!("C({n},{k})")))?
            / i;
    }
    Ok(acc)
}

fn check(n: usize, j: SpinLabel) -> Result<()> {
    if n == 0 || !j.is_valid_for(n) {
        return Err(Error::InvalidSpin { n, two_j: j.two_j() });
    }
    Ok(())
}

/// `c_j^{(n)} = C(n, n/2 − j) · (2j+1) / (n/2 + j + 1)`, the dimension of the
/// permutation factor of sector `j`, in exact integer arithmetic.
pub fn multiplicity(n: usize, j: SpinLabel) -> Result<u128> {
    check(n, j)?;
    let t = j.two_j();
    let k = (n - t) / 2;
    let numerator = binomial(n, k)?
        .checked_mul(t as u128 + 1)
        .ok_or_else(|| Error::Overflow(format!("c_j for n={n}")))?;
    let denominator = ((n + t) / 2 + 1) as u128;
    debug_assert_eq!(numerator % denominator, 0);
    Ok(numerator / denominator)
}

/// The same multiplicity by the ballot-number difference `C(n,k) − C(n,k−1)`.
pub fn multiplicity_ballot(n: usize, j: SpinLabel) -> Result<u128> {
    check(n, j)?;
    let k = (n - j.two_j()) / 2;
    let lower = if k == 0 { 0 } else { binomial(n, k - 1)? };
    Ok(binomial(n, k)? - lower)
}

/// Checks `Σ_j (2j+1) c_j = 2^n` exactly; returns `(sum, 2^n)`.
pub fn dimension_identity(n: usize) -> Result<(u128, u128)> {
    if n == 0 || n > 126 {
        return Err(Error::Overflow(format!("2^{n}")));
    }
    let mut sum: u128 = 0;
    for j in valid_spins(n) {
        sum = sum
            .checked_add(multiplicity(n, j)? * j.dim() as u128)
            .ok_or_else(|| Error::Overflow(format!("dimension sum for n={n}")))?;
    }
    Ok((sum, 1u128 << n))
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `log₂ c_j^{(n)}` via log-gamma.
pub fn log2_multiplicity(n: usize, j: SpinLabel) -> Result<f64> {
    check(n, j)?;
    let t = j.two_j();
    let k = (n - t) / 2;
    let ln_c = ln_binomial(n, k) + ((t + 1) as f64).ln() - (((n + t) / 2 + 1) as f64).ln();
    Ok(ln_c / std::f64::consts::LN_2)
}

/// `log₂((2j+1) c_j^{(n)} / 2^n)`: the weight of sector `j` in the Bell ensemble.
pub fn log2_weight(n: usize, j: SpinLabel) -> Result<f64> {
    Ok(log2_multiplicity(n, j)? + (j.dim() as f64).log2() - n as f64)
}
