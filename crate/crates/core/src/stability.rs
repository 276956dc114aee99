//! Von Neumann analysis of the transport part: Fourier symbols of the stencils,
//! amplification factors of the time integrators and critical CFL numbers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;
use crate::spatial::SpaceOperator;
use crate::timeint::lobatto_iiic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeScheme {
    ExplicitEuler,
    /// The fully implicit Lobatto IIIC step (the DeC fixed point).
    L2Lobatto(usize),
    DeC {
        order: usize,
        iterations: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeDescriptor {
    pub time: TimeScheme,
    pub space: SpaceOperator,
}

/// Samples of `[0, 2π)` used by [`critical_cfl`].
pub const THETA_SAMPLES: usize = 4096;
/// Slack on `|G| ≤ 1` absorbing round-off at marginal wavenumbers.
pub const STABILITY_TOL: f64 = 1e-10;
/// Upper end of the CFL search.
pub const CFL_SEARCH_MAX: f64 = 4.0;
const CFL_MARCH: f64 = 1e-3;
const CFL_WIDTH: f64 = 1e-4;

/// Symbol `g(θ)` of a stencil for a population moving towards `+x`:
/// `δx e^{ijθ} = (g/Δx) e^{ijθ}`.
pub fn fourier_symbol(space: SpaceOperator, theta: f64) -> Complex64 {
    let e = |k: f64| Complex64::from_polar(1.0, k * theta);
    match space {
        SpaceOperator::Dx1 => 1.0 - e(-1.0),
        SpaceOperator::Dx2 => e(1.0) / 3.0 + 0.5 - e(-1.0) + e(-2.0) / 6.0,
        SpaceOperator::Dx4 => Complex64::new(0.0, 4.0 / 3.0 * theta.sin() - (2.0 * theta).sin() / 6.0),
    }
}

/// `Σ_{k=0}^{M} c_k z^k` where `c_k` is the last entry of `A^k 1`.
fn dec_coefficients(order: usize, iterations: usize) -> Result<Vec<f64>> {
    let t = lobatto_iiic(order)?;
    let s = t.s;
    let mut v = vec![1.0; s];
    let mut coeffs = vec![1.0];
    for _ in 0..iterations {
        let next: Vec<f64> = (0..s).map(|j| (0..s).map(|k| t.a(j, k) * v[k]).sum()).collect();
        coeffs.push(next[s - 1]);
        v = next;
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Amplification factor `G(z)` of one step applied to `y' = (z/Δt) y`.
pub fn amplification(scheme: TimeScheme, z: Complex64) -> Result<Complex64> {
    match scheme {
        TimeScheme::ExplicitEuler => Ok(1.0 + z),
        TimeScheme::L2Lobatto(order) => {
            let (num, den) = match order {
                2 => (Complex64::new(2.0, 0.0), z * z - 2.0 * z + 2.0),
                4 => (-6.0 * z - 24.0, z * z * z - 6.0 * z * z + 18.0 * z - 24.0),
                _ => return Err(Error::Unsupported(format!("no closed form for order {order}"))),
            };
            if den.norm() < 1e-300 {
                return Err(Error::Domain(format!("z = {z} is a pole of the amplification factor")));
            }
            Ok(num / den)
        }
        TimeScheme::DeC { order, iterations } => {
            if iterations == 0 {
                return Err(Error::Domain("DeC needs at least one iteration".into()));
            }
            Ok(horner(&dec_coefficients(order, iterations)?, z))
        }
    }
}

/// `Σ_{k=0}^{M} z^k A^k`, row-major `s × s`. Its last row applied to `1` is the
/// DeC amplification factor.
pub fn amplification_matrix_dec(order: usize, iterations: usize, z: Complex64) -> Result<Vec<Complex64>> {
    let t = lobatto_iiic(order)?;
    let s = t.s;
    let zero = Complex64::new(0.0, 0.0);
    let mut power: Vec<Complex64> = (0..s * s).map(|k| if k % (s + 1) == 0 { 1.0.into() } else { zero }).collect();
    let mut sum = power.clone();
    for _ in 0..iterations {
        let mut next = vec![zero; s * s];
        for i in 0..s {
            for k in 0..s {
                let za = z * t.a(i, k);
                for j in 0..s {
                    next[i * s + j] += za * power[k * s + j];
                }
            }
        }
        for (acc, v) in sum.iter_mut().zip(&next) {
            *acc += v;
        }
        power = next;
    }
    Ok(sum)
}

/// Amplification as a function of `z`, prepared once per scheme.
enum Gain {
    Poly(Vec<f64>),
    Closed(TimeScheme),
}

impl Gain {
    fn new(scheme: TimeScheme) -> Result<Self> {
        Ok(match scheme {
            TimeScheme::ExplicitEuler => Gain::Poly(vec![1.0, 1.0]),
            TimeScheme::DeC { order, iterations } => {
                if iterations == 0 {
                    return Err(Error::Domain("DeC needs at least one iteration".into()));
                }
                Gain::Poly(dec_coefficients(order, iterations)?)
            }
            TimeScheme::L2Lobatto(_) => {
                amplification(scheme, Complex64::new(0.0, 0.0))?;
                Gain::Closed(scheme)
            }
        })
    }

    fn abs(&self, z: Complex64) -> f64 {
        match self {
            Gain::Poly(c) => horner(c, z).norm(),
            Gain::Closed(s) => amplification(*s, z).map(|g| g.norm()).unwrap_or(f64::INFINITY),
        }
    }
}

/// `max_θ |G(−λ g(θ))|` on the sample grid, refined around the worst sample.
fn max_gain(gain: &Gain, space: SpaceOperator, symbols: &[Complex64], lambda: f64) -> f64 {
    let m = symbols.len();
    let worst = par::map_collect(m, |k| gain.abs(-lambda * symbols[k]));
    let (k_max, &g_max) =
        worst.iter().enumerate().fold((0, &f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    // golden-section search on the neighbouring interval
    let h = 2.0 * PI / m as f64;
    let f = |th: f64| gain.abs(-lambda * fourier_symbol(space, th));
    let (mut lo, mut hi) = ((k_max as f64 - 1.0) * h, (k_max as f64 + 1.0) * h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..40 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    g_max.max(f1).max(f2)
}

/// Largest `λ` such that every sampled wavenumber satisfies `|G| ≤ 1 + tol`.
///
/// `λ` is marched from 0 until the first unstable value and then bisected, so
/// stability windows detached from the origin are ignored.
pub fn critical_cfl(scheme: SchemeDescriptor) -> Result<f64> {
    let gain = Gain::new(scheme.time)?;
    let symbols: Vec<Complex64> =
        (0..THETA_SAMPLES).map(|k| fourier_symbol(scheme.space, 2.0 * PI * k as f64 / THETA_SAMPLES as f64)).collect();
    let stable = |lambda: f64| max_gain(&gain, scheme.space, &symbols, lambda) <= 1.0 + STABILITY_TOL;

    let steps = (CFL_SEARCH_MAX / CFL_MARCH).round() as usize;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=steps {
        let lambda = k as f64 * CFL_MARCH;
        if stable(lambda) {
            lo = lambda;
        } else {
            hi = Some(lambda);
            break;
        }
    }
    let Some(mut hi) = hi else { return Ok(CFL_SEARCH_MAX) };
    while hi - lo > CFL_WIDTH {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One row of the critical-CFL table: time order, stencil, `λ*` for `M = 1..=6`.
#[derive(Debug, Clone, PartialEq)]
pub struct CflRow {
    pub order: usize,
    pub space: SpaceOperator,
    pub values: Vec<f64>,
}

/// Critical CFL numbers of DeC over Lobatto IIIC of orders 2 and 4, for every
/// stencil and `M = 1..=6`.
pub fn cfl_table() -> Result<Vec<CflRow>> {
    let mut rows = Vec::new();
    for order in [2, 4] {
        for space in SpaceOperator::ALL {
            let values = (1..=6)
                .map(|m| critical_cfl(SchemeDescriptor { time: TimeScheme::DeC { order, iterations: m }, space }))
                .collect::<Result<Vec<_>>>()?;
            rows.push(CflRow { order, space, values });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symbols_by_hand() {
        assert!(fourier_symbol(SpaceOperator::Dx1, 0.0).norm() < 1e-16);
        assert!((fourier_symbol(SpaceOperator::Dx1, PI) - 2.0).norm() < 1e-15);
        for k in 0..50 {
            let th = 0.13 * k as f64;
            assert_eq!(fourier_symbol(SpaceOperator::Dx4, th).re, 0.0);
        }
    }

    #[test]
    fn amplification_by_hand() {
        let schemes = [
            TimeScheme::ExplicitEuler,
            TimeScheme::L2Lobatto(2),
            TimeScheme::L2Lobatto(4),
            TimeScheme::DeC { order: 2, iterations: 2 },
            TimeScheme::DeC { order: 4, iterations: 6 },
        ];
        for s in schemes {
            assert!((amplification(s, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        }
        let g = amplification(TimeScheme::DeC { order: 2, iterations: 2 }, c(-1.0, 0.0)).unwrap();
        assert!((g - 0.5).norm() < 1e-15);
        assert!(amplification(TimeScheme::L2Lobatto(2), c(1.0, 1.0)).is_err());
    }

    #[test]
    fn lobatto_closed_forms_match_the_resolvent() {
        // G = last entry of (I − zA)⁻¹ 1, by Cramer's rule on the 2×2 case
        for &z in &[c(-0.3, 0.7), c(-2.0, -1.0), c(0.1, 0.2)] {
            let a = [[0.5, -0.5], [0.5, 0.5]];
            let m = [[1.0 - z * a[0][0], -z * a[0][1]], [-z * a[1][0], 1.0 - z * a[1][1]]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let y2 = (m[0][0] - m[1][0]) / det;
            let g = amplification(TimeScheme::L2Lobatto(2), z).unwrap();
            assert!((g - y2).norm() < 1e-14);
        }
    }

    #[test]
    fn dec_matrix_identities() {
        let z = c(-0.4, 0.9);
        let m = amplification_matrix_dec(2, 2, z).unwrap();
        let expect = [1.0 + z / 2.0, -(z + z * z) / 2.0, (z + z * z) / 2.0, 1.0 + z / 2.0];
        for (a, b) in m.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        let id = amplification_matrix_dec(4, 3, c(0.0, 0.0)).unwrap();
        for (k, v) in id.iter().enumerate() {
            let want = if k % 4 == 0 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-16);
        }
        let m4 = amplification_matrix_dec(4, 4, z).unwrap();
        let row: Complex64 = m4[6..9].iter().sum();
        let taylor = 1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0;
        assert!((row - taylor).norm() < 1e-13);
    }

    #[test]
    fn lobatto_two_is_a_stable() {
        for i in 0..40 {
            for j in 0..40 {
                let z = c(-0.25 * i as f64, -5.0 + 0.25 * j as f64);
                assert!(amplification(TimeScheme::L2Lobatto(2), z).unwrap().norm() <= 1.0 + 1e-14);
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let s = TimeScheme::DeC { order: 4, iterations: 5 };
        let z = c(-0.7, 1.3);
        let g = amplification(s, z).unwrap();
        assert!((amplification(s, z.conj()).unwrap() - g.conj()).norm() < 1e-15);
    }

    #[test]
    fn euler_upwind_limit() {
        let d = SchemeDescriptor { time: TimeScheme::ExplicitEuler, space: SpaceOperator::Dx1 };
        assert!((critical_cfl(d).unwrap() - 1.0).abs() < 2e-4);
        let d = SchemeDescriptor { time: TimeScheme::ExplicitEuler, space: SpaceOperator::Dx4 };
        assert!(critical_cfl(d).unwrap() < 0.005);
    }
}
