//! Property checks shared by the property suite and the acceptance report.
//! Each returns the worst deviation it saw so callers can print and compare it.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use kinetic1d::exact::{acoustic_mode, char_residual, eigen_residual, scaled_bessel_i, ShockSetup};
use kinetic1d::kinetic::{maxwellian, relaxation_matrix};
use kinetic1d::linalg::SVec;
use kinetic1d::models::{ns_conserved, ProblemSpec};
use kinetic1d::spatial::{Grid1D, SpaceOperator, WaveField};
use kinetic1d::stability::fourier_symbol;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random model together with a random admissible state for it.
pub fn random_problem(r: &mut ChaCha8Rng) -> (ProblemSpec, SVec) {
    match r.random_range(0..4) {
        0 => (ProblemSpec::diffusion(r.random_range(1e-3..1.0)).unwrap(), SVec::scalar(r.random_range(-2.0..2.0))),
        1 => (
            ProblemSpec::advection(r.random_range(-5.0..5.0), r.random_range(0.0..1.0)).unwrap(),
            SVec::scalar(r.random_range(-2.0..2.0)),
        ),
        2 => (ProblemSpec::burgers(r.random_range(1e-3..1.0)).unwrap(), SVec::scalar(r.random_range(-2.0..2.0))),
        _ => {
            let gamma = if r.random_bool(0.5) { 1.4 } else { 5.0 / 3.0 };
            let spec = ProblemSpec::navier_stokes(gamma, r.random_range(1e-4..0.1), r.random_range(0.5..1.0)).unwrap();
            let u =
                ns_conserved(gamma, r.random_range(0.1..10.0), r.random_range(-5.0..5.0), r.random_range(0.1..10.0));
            (spec, u)
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `P M(u) = u` and `P Λ M(u) = f(u)`, relative to the size of `u` and `f(u)`.
pub fn moment_conditions(samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (spec, u) = random_problem(&mut r);
        let a = 1.1 * spec.spectral_bound(&u).unwrap().max(0.5);
        let (m1, m2) = maxwellian(&spec, &u, a).unwrap();
        let f = spec.flux(&u).unwrap();
        let us = max_abs(&u).max(f64::MIN_POSITIVE);
        let fs = max_abs(&f).max(us * a * 1e-3);
        for c in 0..u.len() {
            worst = worst.max((m1[c] + m2[c] - u[c]).abs() / us);
            worst = worst.max((a * (m2[c] - m1[c]) - f[c]).abs() / fs);
        }
    }
    worst
}

/// Max entry of `T(a²I − f'²) − D` over random states with `a = 1.1·bound`,
/// relative to `max(1, max|D|)`.
pub fn relaxation_residual(samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (spec, u) = random_problem(&mut r);
        let a = 1.1 * spec.spectral_bound(&u).unwrap().max(0.5);
        let t = relaxation_matrix(&spec, &u, a).unwrap();
        let j = spec.jacobian(&u).unwrap();
        let d = spec.diffusion_matrix(&u).unwrap();
        let p = u.len();
        let mut m = [[0.0; 3]; 3];
        for i in 0..p {
            for k in 0..p {
                let j2: f64 = (0..p).map(|l| j.get(i, l) * j.get(l, k)).sum();
                m[i][k] = if i == k { a * a } else { 0.0 } - j2;
            }
        }
        let scale = (0..p).flat_map(|i| (0..p).map(move |k| (i, k))).fold(1.0f64, |s, (i, k)| s.max(d.get(i, k).abs()));
        for i in 0..p {
            for k in 0..p {
                let tm: f64 = (0..p).map(|l| t.get(i, l) * m[l][k]).sum();
                worst = worst.max((tm - d.get(i, k)).abs() / scale);
            }
        }
    }
    worst
}

/// Scalar models: `T` is bit-for-bit `α/(a² − f'²)` up to one ulp.
pub fn scalar_reduction(samples: usize, seed: u64) -> bool {
    let mut r = rng(seed);
    for _ in 0..samples {
        let alpha = r.random_range(1e-3..1.0);
        let u: f64 = r.random_range(-2.0..2.0);
        let spec = ProblemSpec::burgers(alpha).unwrap();
        let a = 1.1 * u.abs() + 0.1;
        let t = relaxation_matrix(&spec, &[u], a).unwrap().get(0, 0);
        let want = alpha / (a * a - u * u);
        if (t - want).abs() > f64::EPSILON * want.abs() {
            return false;
        }
    }
    true
}

fn sine_on(n: usize) -> (Grid1D, Vec<f64>, Vec<f64>) {
    let g = Grid1D::periodic(n, 1.0).unwrap();
    let x = g.coordinates();
    let u = x.iter().map(|x| (2.0 * PI * x).sin()).collect();
    let du = x.iter().map(|x| 2.0 * PI * (2.0 * PI * x).cos()).collect();
    (g, u, du)
}

/// Smallest observed order of each operator over `N ∈ {32, 64, 128, 256}` on `sin 2πx`,
/// taking the worse of the two travel directions.
pub fn stencil_orders() -> Vec<(SpaceOperator, f64)> {
    SpaceOperator::ALL
        .iter()
        .map(|&op| {
            let mut worst = f64::INFINITY;
            for sign in [1.0, -1.0] {
                let errs: Vec<f64> = [32, 64, 128, 256]
                    .iter()
                    .map(|&n| {
                        let (g, u, du) = sine_on(n);
                        let d = WaveField::new(u, sign).apply(op, &g).unwrap();
                        d.values.iter().zip(&du).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                    })
                    .collect();
                for w in errs.windows(2) {
                    worst = worst.min((w[0] / w[1]).log2());
                }
            }
            (op, worst)
        })
        .collect()
}

/// `Δx·δx e^{ikx}` measured on a periodic grid against `g(θ) e^{ikx}` (and the
/// mirrored symbol `−ḡ` for populations moving left), over all wavenumbers.
pub fn symbol_mismatch(n: usize) -> f64 {
    let g = Grid1D::periodic(n, 1.0).unwrap();
    let dx = g.dx();
    let mut worst = 0.0f64;
    for op in SpaceOperator::ALL {
        for k in 0..n {
            let theta = 2.0 * PI * k as f64 / n as f64;
            for sign in [1.0, -1.0] {
                let sym = if sign > 0.0 { fourier_symbol(op, theta) } else { -fourier_symbol(op, theta).conj() };
                let cos: Vec<f64> = (0..n).map(|j| (theta * j as f64).cos()).collect();
                let sin: Vec<f64> = (0..n).map(|j| (theta * j as f64).sin()).collect();
                let dc = WaveField::new(cos, sign).apply(op, &g).unwrap();
                let ds = WaveField::new(sin, sign).apply(op, &g).unwrap();
                for j in 0..n {
                    let want = sym * Complex64::from_polar(1.0, theta * j as f64);
                    worst = worst.max((dc.values[j] * dx - want.re).abs());
                    worst = worst.max((ds.values[j] * dx - want.im).abs());
                }
            }
        }
    }
    worst
}

/// `|Σ δx(u) Δx|` for random periodic data.
pub fn periodic_telescoping(seed: u64) -> f64 {
    let mut r = rng(seed);
    let g = Grid1D::periodic(97, 1.0).unwrap();
    let mut worst = 0.0f64;
    for op in SpaceOperator::ALL {
        for sign in [1.0, -1.0] {
            let u: Vec<f64> = (0..97).map(|_| r.random_range(-1.0..1.0)).collect();
            let d = WaveField::new(u, sign).apply(op, &g).unwrap();
            worst = worst.max((d.values.iter().sum::<f64>() * g.dx()).abs());
        }
    }
    worst
}

/// Relative error of `e^{−|x|} I_n(x)` against its power series.
pub fn bessel_oracle() -> f64 {
    let series = |n: usize, x: f64| {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
        let mut sum = term;
        for m in 1..200 {
            term *= (x / 2.0).powi(2) / (m as f64 * (n + m) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        (-x.abs()).exp() * sum
    };
    let mut worst = 0.0f64;
    for &x in &[-7.957747154594767, -3.0, -0.5, 0.25, 1.0, 4.0, 12.0] {
        for n in 0..12 {
            let want = series(n, x);
            if want.abs() < 1e-250 {
                continue;
            }
            worst = worst.max((scaled_bessel_i(n, x) - want).abs() / want.abs());
        }
    }
    worst
}

/// Worst `|x(v(x)) − x|` over 100 points across the resolvable part of the
/// Mach 1.5, 2 and 10 profiles.
pub fn shock_round_trip() -> f64 {
    let mut worst = 0.0f64;
    for mach in [1.5, 2.0, 10.0] {
        let s = ShockSetup::new(mach, 1.4, 0.001).unwrap();
        for k in 0..100 {
            let x = (k as f64 - 49.5) / 49.5 * 6.0 * s.delta;
            let v = s.v_of_x(x);
            if v - s.theta > 1e-8 && 1.0 - v > 1e-8 {
                worst = worst.max((s.x_of_v(v) - x).abs());
            }
        }
    }
    worst
}

/// Eigenpair and characteristic-polynomial residuals of the acoustic mode.
pub fn acoustic_residuals() -> (f64, f64) {
    let mut eig = 0.0f64;
    let mut cubic = 0.0f64;
    for mu in [0.0, 0.001, 0.1] {
        let spec = ProblemSpec::navier_stokes(1.4, mu, 0.71).unwrap();
        let base = ns_conserved(1.4, 1.0, 2.0 * 1.4f64.sqrt(), 1.0);
        let k = 2.0 * PI;
        let m = acoustic_mode(&spec, &base, k, 1e-5).unwrap();
        eig = eig.max(eigen_residual(&spec, &base, &m).unwrap());
        cubic = cubic.max(char_residual(&spec, &base, k, m.omega).unwrap().norm() / m.omega.norm().powi(3));
    }
    (eig, cubic)
}
