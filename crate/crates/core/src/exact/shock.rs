use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::models::{ns_conserved, ConservedState};

/// Upstream/downstream states of a stationary shock with `(ρ, u, P)_L = (1, Ma√γ, 1)`.
pub fn rankine_hugoniot(mach: f64, gamma: f64) -> Result<(ConservedState, ConservedState, f64)> {
    if !(mach > 1.0 && mach.is_finite()) {
        return Err(Error::Domain(format!("shock needs Ma > 1, got {mach}")));
    }
    if !(gamma > 1.0) {
        return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
    }
    let theta = (gamma - 1.0) / (gamma + 1.0) + 2.0 / ((gamma + 1.0) * mach * mach);
    let ul = mach * gamma.sqrt();
    let pr = (gamma + 1.0 - theta * (gamma - 1.0)) / (theta * (gamma + 1.0) - (gamma - 1.0));
    let left = ns_conserved(gamma, 1.0, ul, 1.0);
    let right = ns_conserved(gamma, 1.0 / theta, theta * ul, pr);
    Ok((left, right, theta))
}

/// Stationary viscous shock at `Pr = 3/4`, centred so that `v = 1/ρ = (1+θ)/2` at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockSetup {
    pub mach: f64,
    pub gamma: f64,
    pub mu: f64,
    pub theta: f64,
    pub left: ConservedState,
    pub right: ConservedState,
    /// Shock width `2Ma/(Ma²−1) μ √(π/2)`.
    pub delta: f64,
}

/// Primitive variables and entropy at one point of the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockProfile {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub entropy: f64,
}

impl ShockSetup {
    pub fn new(mach: f64, gamma: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::Domain(format!("viscous shock needs μ > 0, got {mu}")));
        }
        let (left, right, theta) = rankine_hugoniot(mach, gamma)?;
        let delta = 2.0 * mach / (mach * mach - 1.0) * mu * (PI / 2.0).sqrt();
        Ok(Self { mach, gamma, mu, theta, left, right, delta })
    }

    /// Specific volume at the centre, `(1+θ)/2`.
    pub fn v_center(&self) -> f64 {
        0.5 * (1.0 + self.theta)
    }

    fn scale(&self) -> f64 {
        8.0 * self.gamma.sqrt() * self.mu / (3.0 * (self.gamma + 1.0) * self.mach)
    }

    /// Position where the specific volume equals `v ∈ (θ, 1)`; decreasing in `v`.
    pub fn x_of_v(&self, v: f64) -> f64 {
        let th = self.theta;
        let vin = self.v_center();
        -self.scale()
            * (th / (1.0 - th) * ((v - th) / (vin - th)).ln() - 1.0 / (1.0 - th) * ((1.0 - v) / (1.0 - vin)).ln())
    }

    fn dx_dv(&self, v: f64) -> f64 {
        let th = self.theta;
        -self.scale() * (th / ((1.0 - th) * (v - th)) + 1.0 / ((1.0 - th) * (1.0 - v)))
    }

    /// Specific volume at `x`: bisection on the monotone map, then Newton.
    /// Points beyond the representable range return the limit states.
    pub fn v_of_x(&self, x: f64) -> f64 {
        let th = self.theta;
        let (mut lo, mut hi) = (th + 1e-15, 1.0 - 1e-15);
        if x >= self.x_of_v(lo) {
            return th;
        }
        if x <= self.x_of_v(hi) {
            return 1.0;
        }
        // x_of_v decreasing: x(lo) > x > x(hi)
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if self.x_of_v(mid) > x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut v = 0.5 * (lo + hi);
        for _ in 0..3 {
            let nv = v - (self.x_of_v(v) - x) / self.dx_dv(v);
            if nv > th && nv < 1.0 && nv.is_finite() {
                v = nv;
            }
        }
        v
    }

    pub fn profile_at(&self, x: f64) -> ShockProfile {
        let v = self.v_of_x(x);
        let g = self.gamma;
        let m2 = self.mach * self.mach;
        let p = (1.0 + 0.5 * (g - 1.0) * m2 * (1.0 - v * v)) / v;
        let rho = 1.0 / v;
        let u = v * self.mach * g.sqrt();
        let entropy = (p / rho.powf(g)).ln() / (g - 1.0);
        ShockProfile { rho, u, p, entropy }
    }

    pub fn state_at(&self, x: f64) -> ConservedState {
        let s = self.profile_at(x);
        ns_conserved(self.gamma, s.rho, s.u, s.p)
    }
}

/// `(ρ, u, P, η)` of the viscous shock at `x`.
pub fn viscous_shock_profile(x: f64, mach: f64, gamma: f64, mu: f64) -> Result<ShockProfile> {
    Ok(ShockSetup::new(mach, gamma, mu)?.profile_at(x))
}
