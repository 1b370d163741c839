//! Gamma function via the Lanczos approximation (g = 7, nine coefficients).

use std::f64::consts::PI;

use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_7;

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Γ(x) for any real `x` that is not a pole. Poles return ±∞ or NaN.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        PI / ((PI * x).sin() * gamma_real(1.0 - x))
    } else {
        let z = x - 1.0;
        let t = z + LANCZOS_G + 0.5;
        // t^(z+1/2) split in two halves so that large arguments overflow as late as possible
        let half = t.powf(0.5 * (z + 0.5));
        SQRT_TWO_PI * half * (half * (-t).exp()) * lanczos_sum(z)
    }
}

/// 1/Γ(x) for every real `x`; zero at the poles 0, −1, −2, …
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 171.0 {
        return (-ln_gamma_positive(x)).exp();
    }
    1.0 / gamma_real(x)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma_positive(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma_fn requires a finite x > 0, got {x}")));
    }
    Ok(gamma_real(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn known_values() {
        assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        // 30-digit reference: Γ(3/2) = √π / 2
        assert_relative_eq!(gamma_fn(1.5).unwrap(), 0.886_226_925_452_758_013_65, max_relative = 1e-13);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-13);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(gamma_fn(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma_fn(-1.5), Err(Error::Domain(_))));
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn recurrence_on_tenth_grid() {
        for k in 1..=30 {
            let x = 0.1 * k as f64;
            let lhs = gamma_fn(x + 1.0).unwrap();
            let rhs = x * gamma_fn(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn against_statrs() {
        for k in 1..400 {
            let x = 0.025 * k as f64;
            assert_relative_eq!(gamma_fn(x).unwrap(), statrs::function::gamma::gamma(x), max_relative = 1e-13);
            assert_relative_eq!(
                ln_gamma_positive(x),
                statrs::function::gamma::ln_gamma(x),
                epsilon = 1e-13,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn reciprocal_gamma_at_poles_and_negative_args() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-3.0), 0.0);
        // Γ(−0.5) = −2√π
        assert_relative_eq!(rgamma(-0.5), -1.0 / (2.0 * PI.sqrt()), max_relative = 1e-13);
        assert!(rgamma(171.5) > 0.0 && rgamma(171.5) < 1e-305);
        assert_eq!(rgamma(400.0), 0.0);
    }
}
