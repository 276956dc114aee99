//! Analytic reference solutions for the verification cases.

mod acoustic;
mod bessel;
mod shock;

pub use acoustic::{acoustic_exact, acoustic_mode, char_residual, eigen_residual, AcousticMode};
pub use bessel::{scaled_bessel_i, scaled_bessel_i_all};
pub use shock::{rankine_hugoniot, viscous_shock_profile, ShockProfile, ShockSetup};

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Diffusing Gaussian `1 + 0.01 √(1/(1+4αt/δ²)) exp(−(x−½)²/(δ²+4αt))`.
pub fn gaussian_diffusion_exact(x: f64, t: f64, alpha: f64, delta: f64) -> f64 {
    let d2 = delta * delta;
    let w = d2 + 4.0 * alpha * t;
    1.0 + 0.01 * (d2 / w).sqrt() * (-(x - 0.5).powi(2) / w).exp()
}

/// Diffusing Gaussian transported at speed `c` on the periodic domain `[0, length)`.
pub fn advection_diffusion_exact(x: f64, t: f64, c: f64, alpha: f64, delta: f64, length: f64) -> f64 {
    let xs = (x - c * t).rem_euclid(length);
    gaussian_diffusion_exact(xs, t, alpha, delta)
}

/// Steady viscous Burgers profile `−(2α/δ) tanh((x − ½)/δ)`.
pub fn burgers_tanh_exact(x: f64, alpha: f64, delta: f64) -> f64 {
    -(2.0 * alpha / delta) * ((x - 0.5) / delta).tanh()
}

/// Viscous Burgers solution from `u₀ = ½ + sin 2πx`, as a truncated Fourier
/// series with `n_terms` modes.
pub fn burgers_fourier_exact(x: f64, t: f64, alpha: f64, n_terms: usize) -> Result<f64> {
    if !(t > 0.0 && alpha > 0.0) {
        return Err(Error::Domain(format!("series needs t > 0 and α > 0 (t = {t}, α = {alpha})")));
    }
    let coeffs = burgers_series_coefficients(alpha, n_terms);
    burgers_series_eval(&coeffs, x, t, alpha)
}

/// `a_n = (−1)ⁿ Î_n(−1/(4πα))` for `n = 0..=n_terms`.
pub fn burgers_series_coefficients(alpha: f64, n_terms: usize) -> Vec<f64> {
    let arg = -1.0 / (4.0 * PI * alpha);
    scaled_bessel_i_all(n_terms, arg).into_iter().enumerate().map(|(n, v)| if n % 2 == 0 { v } else { -v }).collect()
}

/// Evaluate the series with precomputed coefficients.
pub fn burgers_series_eval(coeffs: &[f64], x: f64, t: f64, alpha: f64) -> Result<f64> {
    let xi = 2.0 * PI * (x - 0.5 * t);
    let mut num = 0.0;
    let mut den = coeffs[0];
    for (n, &an) in coeffs.iter().enumerate().skip(1) {
        let nf = n as f64;
        let w = an * (-4.0 * PI * PI * alpha * nf * nf * t).exp();
        num += nf * w * (nf * xi).sin();
        den += 2.0 * w * (nf * xi).cos();
    }
    if !(den.abs() > 1e-300) {
        return Err(Error::Domain("Burgers series denominator underflowed".into()));
    }
    Ok(0.5 + 2.0 * alpha * PI * 4.0 * num / den)
}

/// Distance between the arg-max and arg-min of a sampled profile.
pub fn extrema_distance(x: &[f64], u: &[f64]) -> f64 {
    let by = |cmp: fn(f64, f64) -> bool| {
        let mut best = 0;
        for i in 1..u.len() {
            if cmp(u[i], u[best]) {
                best = i;
            }
        }
        x[best]
    };
    (by(|a, b| a > b) - by(|a, b| a < b)).abs()
}
