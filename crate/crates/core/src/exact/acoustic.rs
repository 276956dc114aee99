use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::models::{ConservedState, ProblemSpec};

type C = Complex64;
type Mat3 = [[C; 3]; 3];

/// Linear plane wave `û e^{i(kx − ωt)}` about a uniform base flow.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticMode {
    pub omega: C,
    pub uhat: [C; 3],
    pub k: f64,
    /// All eigenvalues of `k f' − i k² D`, the selected one included.
    pub spectrum: [C; 3],
}

fn system_matrix(spec: &ProblemSpec, base: &[f64], k: f64) -> Result<Mat3> {
    let j = spec.jacobian(base)?;
    let d = spec.diffusion_matrix(base)?;
    let mut m = [[C::new(0.0, 0.0); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m[r][c] = C::new(k * j.get(r, c), -k * k * d.get(r, c));
        }
    }
    Ok(m)
}

/// Coefficients of `det(λI − B) = λ³ + c2 λ² + c1 λ + c0`.
fn char_poly(b: &Mat3) -> [C; 3] {
    let tr = b[0][0] + b[1][1] + b[2][2];
    let minors = b[0][0] * b[1][1] - b[0][1] * b[1][0] + b[0][0] * b[2][2] - b[0][2] * b[2][0] + b[1][1] * b[2][2]
        - b[1][2] * b[2][1];
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    [-det, minors, -tr]
}

/// Roots of a monic cubic (Cardano, complex arithmetic) polished by Newton.
fn cubic_roots(c: [C; 3]) -> [C; 3] {
    let [c0, c1, c2] = c;
    let shift = c2 / 3.0;
    // λ = y − c2/3: y³ + p y + q = 0
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let omega = C::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [C::new(0.0, 0.0); 3];
    let u = u3.cbrt();
    let mut uk = u;
    for root in roots.iter_mut() {
        let y = if uk.norm() == 0.0 { C::new(0.0, 0.0) } else { uk - p / (3.0 * uk) };
        *root = y - shift;
        uk *= omega;
    }
    let f = |l: C| ((l + c2) * l + c1) * l + c0;
    let df = |l: C| (3.0 * l + 2.0 * c2) * l + c1;
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let d = df(*r);
            if d.norm() > 0.0 {
                let step = f(*r) / d;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots
}

/// Solve `m x = b` by Gaussian elimination with partial pivoting.
fn solve3(mut m: Mat3, mut b: [C; 3]) -> Option<[C; 3]> {
    for k in 0..3 {
        let piv = (k..3).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))?;
        if m[piv][k].norm() == 0.0 {
            return None;
        }
        m.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..3 {
            let l = m[i][k] / m[k][k];
            for j in k..3 {
                let v = m[k][j];
                m[i][j] -= l * v;
            }
            let bk = b[k];
            b[i] -= l * bk;
        }
    }
    let mut x = [C::new(0.0, 0.0); 3];
    for i in (0..3).rev() {
        let mut s = b[i];
        for j in i + 1..3 {
            s -= m[i][j] * x[j];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

fn norm3(v: &[C; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Downstream acoustic eigenmode: the eigenvalue of `k f'(ū) − i k² D(ū)` whose
/// real part is closest to `(ū + c̄)k`, with the density amplitude normalised
/// to `amplitude` and zero phase.
pub fn acoustic_mode(spec: &ProblemSpec, base: &[f64], k: f64, amplitude: f64) -> Result<AcousticMode> {
    if !spec.is_navier_stokes() {
        return Err(Error::Unsupported("acoustic modes need the Navier-Stokes model".into()));
    }
    if k == 0.0 || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber must be non-zero, got {k}")));
    }
    let b = system_matrix(spec, base, k)?;
    let roots = cubic_roots(char_poly(&b));
    let ubar = base[1] / base[0];
    let cbar = spec.spectral_bound(base)? - ubar.abs();
    let target = (ubar + cbar) * k;
    let sel = (0..3).min_by(|&i, &j| (roots[i].re - target).abs().total_cmp(&(roots[j].re - target).abs())).unwrap();
    let omega = roots[sel];
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for (i, r) in roots.iter().enumerate() {
        if i != sel && (r - omega).norm() < 1e-10 * scale {
            return Err(Error::Domain("acoustic eigenvalue is (nearly) repeated".into()));
        }
    }

    // inverse iteration on a slightly shifted matrix
    let shift = omega + C::new(1e-10 * scale, 1e-10 * scale);
    let mut shifted = b;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= shift;
    }
    let mut v = [C::new(1.0, 0.0), C::new(0.5, 0.1), C::new(0.25, -0.2)];
    for _ in 0..4 {
        let w = solve3(shifted, v).ok_or(Error::Singular { index: None })?;
        let n = norm3(&w);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Singular { index: None });
        }
        v = [w[0] / n, w[1] / n, w[2] / n];
    }
    if v[0].norm() < 1e-14 {
        return Err(Error::Domain("acoustic mode has no density component".into()));
    }
    let phase = v[0] / v[0].norm();
    let s = amplitude / v[0].norm();
    let uhat = [v[0] / phase * s, v[1] / phase * s, v[2] / phase * s];
    Ok(AcousticMode { omega, uhat, k, spectrum: roots })
}

/// `ū + |û| cos(kx − Re(ω)t + arg û) e^{Im(ω)t}`, componentwise.
pub fn acoustic_exact(mode: &AcousticMode, base: &ConservedState, x: f64, t: f64) -> ConservedState {
    let mut out = *base;
    let env = (mode.omega.im * t).exp();
    for c in 0..3 {
        let (r, phi) = mode.uhat[c].to_polar();
        out[c] += r * (mode.k * x - mode.omega.re * t + phi).cos() * env;
    }
    out
}

/// Residual `‖B û − ω û‖ / ‖û‖` of an eigenpair, for diagnostics.
pub fn eigen_residual(spec: &ProblemSpec, base: &[f64], mode: &AcousticMode) -> Result<f64> {
    let b = system_matrix(spec, base, mode.k)?;
    let mut r = [C::new(0.0, 0.0); 3];
    for i in 0..3 {
        r[i] = (0..3).map(|j| b[i][j] * mode.uhat[j]).sum::<C>() - mode.omega * mode.uhat[i];
    }
    Ok(norm3(&r) / norm3(&mode.uhat))
}

/// Characteristic-polynomial value `det(ωI − B)` for diagnostics.
pub fn char_residual(spec: &ProblemSpec, base: &[f64], k: f64, omega: C) -> Result<C> {
    let [c0, c1, c2] = char_poly(&system_matrix(spec, base, k)?);
    Ok(((omega + c2) * omega + c1) * omega + c0)
}
