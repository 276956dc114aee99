//! Two-wave kinetic closure: velocities `±a`, Maxwellian, projector and the
//! relaxation-time matrix `T = D (a²I − f'²)⁻¹`.

use crate::error::{Error, Result};
use crate::linalg::{SMat, SVec};
use crate::models::{ProblemKind, ProblemSpec};

/// How the kinetic speed is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveSpeed {
    /// Fixed `a`.
    Constant(f64),
    /// `a = ratio · max spectral_bound`, recomputed every step.
    Ratio(f64),
}

/// Two-wave model: wave 0 travels at `−a`, wave 1 at `+a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveModel {
    pub speed: WaveSpeed,
    /// Current kinetic speed.
    pub a: f64,
}

impl WaveModel {
    pub const WAVES: usize = 2;

    pub fn constant(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Config(format!("kinetic speed must be positive, got {a}")));
        }
        Ok(Self { speed: WaveSpeed::Constant(a), a })
    }

    /// Adaptive model. `a` stays undefined (NaN) until [`update_wave_speed`] is called.
    pub fn adaptive(ratio: f64) -> Result<Self> {
        if !(ratio.is_finite() && ratio > 1.0) {
            return Err(Error::Config(format!("wave-speed ratio must exceed 1, got {ratio}")));
        }
        Ok(Self { speed: WaveSpeed::Ratio(ratio), a: f64::NAN })
    }

    /// The prescribed `a / max spectral_bound`, for adaptive models.
    pub fn ratio(&self) -> Option<f64> {
        match self.speed {
            WaveSpeed::Ratio(r) => Some(r),
            WaveSpeed::Constant(_) => None,
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.speed, WaveSpeed::Ratio(_))
    }

    /// Signed velocity of wave `w`.
    #[inline]
    pub fn velocity(&self, w: usize) -> f64 {
        if w == 0 {
            -self.a
        } else {
            self.a
        }
    }
}

/// Equilibrium populations `M1 = (u − f/a)/2`, `M2 = (u + f/a)/2`.
pub fn maxwellian(spec: &ProblemSpec, u: &[f64], a: f64) -> Result<(SVec, SVec)> {
    let f = spec.flux(u)?;
    let mut m1 = SVec::zeros(u.len());
    let mut m2 = SVec::zeros(u.len());
    for c in 0..u.len() {
        let fa = f[c] / a;
        m1[c] = 0.5 * (u[c] - fa);
        m2[c] = 0.5 * (u[c] + fa);
    }
    Ok((m1, m2))
}

/// Relaxation-time matrix. Fails unless `a` strictly exceeds the spectral bound.
pub fn relaxation_matrix(spec: &ProblemSpec, u: &[f64], a: f64) -> Result<SMat> {
    let bound = spec.spectral_bound(u)?;
    if !(a > bound) {
        return Err(Error::Subcharacteristic { index: None, a, bound });
    }
    match spec.kind() {
        ProblemKind::Diffusion { alpha } | ProblemKind::Advection { alpha, .. } | ProblemKind::Burgers { alpha } => {
            let fp = spec.jacobian(u)?.get(0, 0);
            Ok(SMat::scalar(alpha / (a * a - fp * fp)))
        }
        ProblemKind::NavierStokes { .. } => {
            if spec.is_inviscid() {
                return Ok(SMat::zeros(3));
            }
            let d = spec.diffusion_matrix(u)?;
            let j = spec.jacobian(u)?;
            let m = SMat::identity(3).scale(a * a).minus(&j.mul(&j));
            d.right_divide(&m).ok_or(Error::Subcharacteristic { index: None, a, bound })
        }
    }
}

/// Knudsen number `α/(aℓ)` (scalar) or `μ/(aℓρ_c)` (Navier-Stokes).
pub fn knudsen(spec: &ProblemSpec, a: f64, ell: f64, rho_c: f64) -> Result<f64> {
    for (name, v) in [("a", a), ("ell", ell), ("rho_c", rho_c)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(match spec.kind() {
        ProblemKind::NavierStokes { mu, .. } => mu / (a * ell * rho_c),
        _ => spec.diffusivity() / (a * ell),
    })
}

/// Moments of a two-wave population `F = (F1, F2)` laid out as `[F1; F2]`:
/// returns `(F1 + F2, a(F2 − F1))`.
pub fn project(f: &[f64], a: f64) -> (SVec, SVec) {
    let p = f.len() / 2;
    debug_assert_eq!(f.len(), 2 * p);
    let mut u = SVec::zeros(p);
    let mut q = SVec::zeros(p);
    for c in 0..p {
        u[c] = f[c] + f[p + c];
        q[c] = a * (f[p + c] - f[c]);
    }
    (u, q)
}

/// Kinetic speed for the current states. Constant models return their stored speed.
pub fn update_wave_speed<'a, I>(model: &WaveModel, spec: &ProblemSpec, states: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    match model.speed {
        WaveSpeed::Constant(a) => Ok(a),
        WaveSpeed::Ratio(r) => {
            let mut max = f64::NEG_INFINITY;
            for (i, u) in states.into_iter().enumerate() {
                max = max.max(spec.spectral_bound(u).map_err(|e| e.at(i))?);
            }
            if max == f64::NEG_INFINITY {
                return Err(Error::Domain("cannot size the kinetic speed on an empty grid".into()));
            }
            let a = r * max;
            if !(a > 0.0) {
                return Err(Error::Domain(format!(
                    "adaptive kinetic speed is {a}: the characteristic speed vanishes everywhere"
                )));
            }
            Ok(a)
        }
    }
}
