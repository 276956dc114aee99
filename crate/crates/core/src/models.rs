//! Target PDEs `∂t u + ∂x f(u) = ∂x (D(u) ∂x u)`: flux, Jacobian, diffusion
//! matrix, equation of state and characteristic speed bound.

use crate::error::{Error, Result};
use crate::linalg::{SMat, SVec};

/// Conserved variables at one point: a scalar `u`, or `(ρ, j, E)` for Navier-Stokes.
pub type ConservedState = SVec;

/// Smallest density / internal energy accepted as physical.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemKind {
    /// `∂t u = α ∂xx u`
    Diffusion { alpha: f64 },
    /// `∂t u + c ∂x u = α ∂xx u`
    Advection { c: f64, alpha: f64 },
    /// `∂t u + ∂x (u²/2) = α ∂xx u`
    Burgers { alpha: f64 },
    /// 1D compressible Navier-Stokes for an ideal gas.
    NavierStokes { gamma: f64, mu: f64, prandtl: f64 },
}

/// One target equation. Construct through the checked constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    kind: ProblemKind,
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be finite and non-negative, got {x}")))
    }
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind) -> Result<Self> {
        match kind {
            ProblemKind::Diffusion { alpha } | ProblemKind::Burgers { alpha } => check_nonneg("alpha", alpha)?,
            ProblemKind::Advection { c, alpha } => {
                check_nonneg("alpha", alpha)?;
                if !c.is_finite() {
                    return Err(Error::Config(format!("advection speed must be finite, got {c}")));
                }
            }
            ProblemKind::NavierStokes { gamma, mu, prandtl } => {
                check_nonneg("mu", mu)?;
                if !(gamma.is_finite() && gamma > 1.0) {
                    return Err(Error::Config(format!("gamma must exceed 1, got {gamma}")));
                }
                if !(prandtl.is_finite() && prandtl > 0.0) {
                    return Err(Error::Config(format!("Prandtl number must be positive, got {prandtl}")));
                }
            }
        }
        Ok(Self { kind })
    }

    pub fn diffusion(alpha: f64) -> Result<Self> {
        Self::new(ProblemKind::Diffusion { alpha })
    }

    pub fn advection(c: f64, alpha: f64) -> Result<Self> {
        Self::new(ProblemKind::Advection { c, alpha })
    }

    pub fn burgers(alpha: f64) -> Result<Self> {
        Self::new(ProblemKind::Burgers { alpha })
    }

    pub fn navier_stokes(gamma: f64, mu: f64, prandtl: f64) -> Result<Self> {
        Self::new(ProblemKind::NavierStokes { gamma, mu, prandtl })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Number of conserved components.
    pub fn p(&self) -> usize {
        match self.kind {
            ProblemKind::NavierStokes { .. } => 3,
            _ => 1,
        }
    }

    pub fn is_navier_stokes(&self) -> bool {
        matches!(self.kind, ProblemKind::NavierStokes { .. })
    }

    /// Scalar diffusion coefficient α, or dynamic viscosity μ.
    pub fn diffusivity(&self) -> f64 {
        match self.kind {
            ProblemKind::Diffusion { alpha }
            | ProblemKind::Advection { alpha, .. }
            | ProblemKind::Burgers { alpha } => alpha,
            ProblemKind::NavierStokes { mu, .. } => mu,
        }
    }

    /// True when `D ≡ 0`, so the relaxation matrix vanishes everywhere.
    pub fn is_inviscid(&self) -> bool {
        self.diffusivity() == 0.0
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.p() {
            return Err(Error::Domain(format!("state has {} components, expected {}", u.len(), self.p())));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::Inadmissible { index: None, reason: format!("non-finite state {u:?}") });
        }
        Ok(())
    }

    /// Validate a state; for Navier-Stokes returns the pressure.
    pub fn check_admissible(&self, u: &[f64]) -> Result<()> {
        self.check_len(u)?;
        if let ProblemKind::NavierStokes { gamma, .. } = self.kind {
            ns_pressure(gamma, u)?;
        }
        Ok(())
    }

    pub fn flux(&self, u: &[f64]) -> Result<SVec> {
        self.check_len(u)?;
        Ok(match self.kind {
            ProblemKind::Diffusion { .. } => SVec::scalar(0.0),
            ProblemKind::Advection { c, .. } => SVec::scalar(c * u[0]),
            ProblemKind::Burgers { .. } => SVec::scalar(0.5 * u[0] * u[0]),
            ProblemKind::NavierStokes { gamma, .. } => {
                let pr = ns_pressure(gamma, u)?;
                let (rho, j, e) = (u[0], u[1], u[2]);
                SVec::from_slice(&[j, j * j / rho + pr, (e + pr) * j / rho])
            }
        })
    }

    pub fn jacobian(&self, u: &[f64]) -> Result<SMat> {
        self.check_len(u)?;
        Ok(match self.kind {
            ProblemKind::Diffusion { .. } => SMat::scalar(0.0),
            ProblemKind::Advection { c, .. } => SMat::scalar(c),
            ProblemKind::Burgers { .. } => SMat::scalar(u[0]),
            ProblemKind::NavierStokes { gamma, .. } => {
                let pr = ns_pressure(gamma, u)?;
                let (rho, j, e) = (u[0], u[1], u[2]);
                let v = j / rho;
                let h = (e + pr) / rho;
                let g1 = gamma - 1.0;
                SMat::from_rows(&[
                    &[0.0, 1.0, 0.0],
                    &[0.5 * (gamma - 3.0) * v * v, (3.0 - gamma) * v, g1],
                    &[v * (0.5 * g1 * v * v - h), h - g1 * v * v, gamma * v],
                ])
            }
        })
    }

    pub fn diffusion_matrix(&self, u: &[f64]) -> Result<SMat> {
        self.check_len(u)?;
        Ok(match self.kind {
            ProblemKind::Diffusion { alpha }
            | ProblemKind::Advection { alpha, .. }
            | ProblemKind::Burgers { alpha } => SMat::scalar(alpha),
            ProblemKind::NavierStokes { gamma, mu, prandtl } => {
                ns_pressure(gamma, u)?;
                if mu == 0.0 {
                    return Ok(SMat::zeros(3));
                }
                let (rho, j, e) = (u[0], u[1], u[2]);
                let nu = mu / rho;
                let v = j / rho;
                let gp = gamma / prandtl;
                let f = 4.0 / 3.0;
                SMat::from_rows(&[
                    &[0.0, 0.0, 0.0],
                    &[-f * v, f, 0.0],
                    &[-f * v * v + gp * (v * v - e / rho), f * v - gp * v, gp],
                ])
                .scale(nu)
            }
        })
    }

    pub fn pressure(&self, u: &[f64]) -> Result<f64> {
        match self.kind {
            ProblemKind::NavierStokes { gamma, .. } => {
                self.check_len(u)?;
                ns_pressure(gamma, u)
            }
            _ => Err(Error::Unsupported("pressure is only defined for Navier-Stokes".into())),
        }
    }

    /// `η = ln(P/ρ^γ)/(γ−1)`.
    pub fn entropy(&self, u: &[f64]) -> Result<f64> {
        match self.kind {
            ProblemKind::NavierStokes { gamma, .. } => {
                let pr = self.pressure(u)?;
                Ok((pr / u[0].powf(gamma)).ln() / (gamma - 1.0))
            }
            _ => Err(Error::Unsupported("entropy is only defined for Navier-Stokes".into())),
        }
    }

    /// Upper bound on the spectral radius of the flux Jacobian.
    pub fn spectral_bound(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u)?;
        Ok(match self.kind {
            ProblemKind::Diffusion { .. } => 0.0,
            ProblemKind::Advection { c, .. } => c.abs(),
            ProblemKind::Burgers { .. } => u[0].abs(),
            ProblemKind::NavierStokes { gamma, .. } => {
                let pr = ns_pressure(gamma, u)?;
                (u[1] / u[0]).abs() + (gamma * pr / u[0]).sqrt()
            }
        })
    }

    /// Convert (ρ, u, P) to (ρ, j, E). Navier-Stokes only.
    pub fn from_primitive(&self, rho: f64, vel: f64, p: f64) -> Result<ConservedState> {
        match self.kind {
            ProblemKind::NavierStokes { gamma, .. } => Ok(ns_conserved(gamma, rho, vel, p)),
            _ => Err(Error::Unsupported("primitive variables are only defined for Navier-Stokes".into())),
        }
    }

    /// Convert (ρ, j, E) to (ρ, u, P). Navier-Stokes only.
    pub fn to_primitive(&self, u: &[f64]) -> Result<[f64; 3]> {
        let p = self.pressure(u)?;
        Ok([u[0], u[1] / u[0], p])
    }
}

/// `(ρ, u, P) → (ρ, ρu, P/(γ−1) + ρu²/2)`.
pub fn ns_conserved(gamma: f64, rho: f64, vel: f64, p: f64) -> ConservedState {
    SVec::from_slice(&[rho, rho * vel, p / (gamma - 1.0) + 0.5 * rho * vel * vel])
}

fn ns_pressure(gamma: f64, u: &[f64]) -> Result<f64> {
    let (rho, j, e) = (u[0], u[1], u[2]);
    if !(rho > ADMISSIBILITY_FLOOR) {
        return Err(Error::Inadmissible { index: None, reason: format!("density {rho} is not positive") });
    }
    let internal = e - 0.5 * j * j / rho;
    if !(internal > ADMISSIBILITY_FLOOR) {
        return Err(Error::Inadmissible { index: None, reason: format!("internal energy {internal} is not positive") });
    }
    Ok((gamma - 1.0) * internal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns() -> ProblemSpec {
        ProblemSpec::navier_stokes(1.4, 0.001, 0.71).unwrap()
    }

    #[test]
    fn scalar_fluxes() {
        let d = ProblemSpec::diffusion(0.01).unwrap();
        assert_eq!(d.flux(&[7.3]).unwrap()[0], 0.0);
        let b = ProblemSpec::burgers(0.01).unwrap();
        assert_eq!(b.flux(&[2.0]).unwrap()[0], 2.0);
        assert_eq!(b.jacobian(&[0.5]).unwrap().get(0, 0), 0.5);
        assert_eq!(b.spectral_bound(&[-1.5]).unwrap(), 1.5);
        assert_eq!(b.diffusion_matrix(&[3.0]).unwrap().get(0, 0), 0.01);
        let a = ProblemSpec::advection(10.0, 0.0).unwrap();
        assert_eq!(a.jacobian(&[-4.0]).unwrap().get(0, 0), 10.0);
        assert_eq!(a.spectral_bound(&[1.0]).unwrap(), 10.0);
    }

    #[test]
    fn pressure_and_entropy_by_hand() {
        let s = ns();
        let g = 1.4f64;
        assert!((s.pressure(&[1.0, 0.0, 2.5]).unwrap() - 1.0).abs() < 1e-15);
        let j = 2.0 * g.sqrt();
        assert!((s.pressure(&[1.0, j, 2.5 + 2.8]).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(s.pressure(&[1.0, 0.0, 0.0]), Err(Error::Inadmissible { .. })));
        assert!(s.entropy(&[1.0, 0.0, 2.5]).unwrap().abs() < 1e-15);
        let e = 0.4f64.exp() / 0.4;
        assert!((s.entropy(&[1.0, 0.0, e]).unwrap() - 1.0).abs() < 1e-14);
        let post = ns_conserved(1.4, 8.0 / 3.0, 0.375 * j, 4.5);
        assert!(s.entropy(&post).unwrap() > 0.0);
    }

    #[test]
    fn mach_two_left_state() {
        let s = ns();
        let j = 2.0 * 1.4f64.sqrt();
        let u = [1.0, j, 2.5 + 2.8];
        assert!((s.flux(&u).unwrap()[0] - 2.3664319132398464).abs() < 1e-12);
        assert!((s.spectral_bound(&u).unwrap() - 3.0 * 1.4f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn inviscid_ns_has_zero_diffusion() {
        let s = ProblemSpec::navier_stokes(1.4, 0.0, 0.71).unwrap();
        assert!(s.diffusion_matrix(&[1.0, 0.3, 3.0]).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ProblemSpec::diffusion(-1.0).is_err());
        assert!(ProblemSpec::navier_stokes(1.0, 0.1, 0.7).is_err());
        assert!(ProblemSpec::navier_stokes(1.4, 0.1, 0.0).is_err());
        assert!(ns().pressure(&[1.0]).is_err());
        assert!(matches!(ProblemSpec::burgers(0.1).unwrap().pressure(&[1.0]), Err(Error::Unsupported(_))));
    }
}
