use std::f64::consts::PI;

use super::config::{BoundaryKind, CaseConfig, InitialCondition, ProblemConfig};
use super::report::l2_error;
use crate::error::{Error, Result};
use crate::exact::{
    acoustic_exact, acoustic_mode, advection_diffusion_exact, burgers_series_coefficients, burgers_series_eval,
    burgers_tanh_exact, AcousticMode, ShockSetup,
};
use crate::kinetic::knudsen;
use crate::models::{ns_conserved, ConservedState, ProblemSpec};
use crate::spatial::{Boundary, Grid1D};
use crate::timeint::{run, RunSetup, Trajectory};

/// Modes kept in the Burgers Fourier series.
const BURGERS_TERMS: usize = 200;

/// Built-in cases, one per experiment family.
pub const BUILTIN_CASES: [&str; 8] = [
    "diffusion",
    "advection-diffusion",
    "advection-inviscid",
    "burgers-shock",
    "burgers-sine",
    "ns-acoustic",
    "ns-shock-ma2",
    "ns-shock-ma10",
];

const DIFFUSION: &str = r#"
name = "diffusion"
[problem]
kind = "diffusion"
alpha = 0.01
[initial]
kind = "gaussian"
delta = 0.1
[grid]
n = 100
[scheme]
order = 4
[wave]
a = 2.0
[run]
t_end = 0.1
ell = 0.1
"#;

const ADVECTION_DIFFUSION: &str = r#"
name = "advection-diffusion"
[problem]
kind = "advection"
c = 10.0
alpha = 0.01
[initial]
kind = "gaussian"
delta = 0.1
[grid]
n = 100
[scheme]
order = 4
[wave]
a = 12.0
[run]
t_end = 0.1
ell = 0.1
"#;

const ADVECTION_INVISCID: &str = r#"
name = "advection-inviscid"
[problem]
kind = "advection"
c = 10.0
alpha = 0.0
[initial]
kind = "gaussian"
delta = 0.1
[grid]
n = 160
[scheme]
order = 4
[wave]
a = 12.0
[run]
t_end = 0.005
ell = 0.1
"#;

const BURGERS_SHOCK: &str = r#"
name = "burgers-shock"
[problem]
kind = "burgers"
alpha = 0.001
[initial]
kind = "tanh-shock"
delta = 0.01
[grid]
n = 300
boundary = "dirichlet"
left = [0.2]
right = [-0.2]
[scheme]
order = 4
[wave]
ratio = 10.0
[run]
t_end = 10.0
steady_tol = 1e-9
ell = 0.01
"#;

const BURGERS_SINE: &str = r#"
name = "burgers-sine"
[problem]
kind = "burgers"
alpha = 0.01
[initial]
kind = "sine"
mean = 0.5
amplitude = 1.0
[grid]
n = 100
[scheme]
order = 4
[wave]
ratio = 10.0
[run]
t_end = 0.5
snapshots = [0.1, 0.2, 0.3, 0.4]
ell = 0.12
"#;

const NS_ACOUSTIC: &str = r#"
name = "ns-acoustic"
[problem]
kind = "navier-stokes"
gamma = 1.4
mu = 0.001
prandtl = 0.71
[initial]
kind = "acoustic"
[grid]
n = 80
[scheme]
order = 4
[wave]
ratio = 10.0
[run]
t_end = 0.005
ell = 0.15915494309189535
"#;

const NS_SHOCK_MA2: &str = r#"
name = "ns-shock-ma2"
[problem]
kind = "navier-stokes"
gamma = 1.4
mu = 0.001
prandtl = 0.75
[initial]
kind = "rankine-hugoniot"
mach = 2.0
[grid]
boundary = "dirichlet"
points_per_width = 10.0
widths = 250.0
[scheme]
order = 4
[wave]
ratio = 10.0
[run]
t_end = 0.04
ell = 0.0016711
"#;

const NS_SHOCK_MA10: &str = r#"
name = "ns-shock-ma10"
[problem]
kind = "navier-stokes"
gamma = 1.4
mu = 0.001
prandtl = 0.75
[initial]
kind = "rankine-hugoniot"
mach = 10.0
[grid]
boundary = "dirichlet"
points_per_width = 10.0
widths = 250.0
[scheme]
order = 4
[wave]
ratio = 10.0
[run]
t_end = 0.001
ell = 0.00025321
"#;

/// TOML text of a built-in case.
pub fn builtin_toml(name: &str) -> Option<&'static str> {
    Some(match name {
        "diffusion" => DIFFUSION,
        "advection-diffusion" => ADVECTION_DIFFUSION,
        "advection-inviscid" => ADVECTION_INVISCID,
        "burgers-shock" => BURGERS_SHOCK,
        "burgers-sine" => BURGERS_SINE,
        "ns-acoustic" => NS_ACOUSTIC,
        "ns-shock-ma2" => NS_SHOCK_MA2,
        "ns-shock-ma10" => NS_SHOCK_MA10,
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<CaseConfig> {
    let text = builtin_toml(name)
        .ok_or_else(|| Error::Config(format!("unknown case `{name}`; known cases: {}", BUILTIN_CASES.join(", "))))?;
    CaseConfig::from_toml_str(text)
}

/// Reference solution attached to a case.
#[derive(Debug, Clone)]
pub enum Exact {
    Constant(ConservedState),
    /// Gaussian diffusing and moving at speed `c` on a periodic domain.
    Gaussian {
        c: f64,
        alpha: f64,
        delta: f64,
        amplitude: f64,
        offset: f64,
        center: f64,
        length: f64,
    },
    /// Steady `−(2α/δ) tanh((x − ½)/δ)`.
    BurgersTanh {
        alpha: f64,
        delta: f64,
    },
    /// Fourier series from `½ + sin 2πx`.
    BurgersSeries {
        alpha: f64,
        coeffs: Vec<f64>,
    },
    Acoustic {
        mode: AcousticMode,
        base: ConservedState,
    },
    /// Stationary viscous shock; compared after aligning the centre.
    Shock(ShockSetup),
}

impl Exact {
    pub fn state(&self, x: f64, t: f64) -> Result<ConservedState> {
        Ok(match self {
            Exact::Constant(u) => *u,
            &Exact::Gaussian { c, alpha, delta, amplitude, offset, center, length } => {
                // shift the unit-amplitude reference onto the configured profile
                let g = advection_diffusion_exact(x - center + 0.5, t, c, alpha, delta, length);
                ConservedState::scalar(offset + amplitude / 0.01 * (g - 1.0))
            }
            &Exact::BurgersTanh { alpha, delta } => ConservedState::scalar(burgers_tanh_exact(x, alpha, delta)),
            Exact::BurgersSeries { alpha, coeffs } => {
                if t == 0.0 {
                    ConservedState::scalar(0.5 + (2.0 * PI * x).sin())
                } else {
                    ConservedState::scalar(burgers_series_eval(coeffs, x, t, *alpha)?)
                }
            }
            Exact::Acoustic { mode, base } => acoustic_exact(mode, base, x, t),
            Exact::Shock(s) => s.state_at(x),
        })
    }

    pub fn sample(&self, xs: &[f64], t: f64) -> Result<Vec<ConservedState>> {
        xs.iter().map(|&x| self.state(x, t)).collect()
    }
}

/// A case resolved into solver input.
#[derive(Debug, Clone)]
pub struct PreparedCase {
    pub config: CaseConfig,
    pub setup: RunSetup,
    pub exact: Option<Exact>,
}

fn shock_setup(cfg: &CaseConfig, mach: f64) -> Result<ShockSetup> {
    match cfg.problem {
        ProblemConfig::NavierStokes { gamma, mu, .. } => ShockSetup::new(mach, gamma, mu),
        _ => Err(Error::Config("shock initial data needs the Navier-Stokes model".into())),
    }
}

fn build_grid(cfg: &CaseConfig) -> Result<Grid1D> {
    let g = &cfg.grid;
    let (mut n, mut length, mut origin) = (g.n, g.length.unwrap_or(1.0), g.origin.unwrap_or(0.0));
    if let (Some(ppw), InitialCondition::RankineHugoniot { mach }) = (g.points_per_width, &cfg.initial) {
        let delta = shock_setup(cfg, *mach)?.delta;
        let widths = g.widths.unwrap_or(250.0);
        length = g.length.unwrap_or(widths * delta);
        origin = g.origin.unwrap_or(-0.5 * length);
        if n.is_none() {
            n = Some((length / (delta / ppw)).round() as usize + 1);
        }
    }
    let n = n.ok_or_else(|| Error::Config("[grid] needs `n`".into()))?;
    if n < 5 {
        return Err(Error::Config(format!("grid needs at least 5 points, got {n}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Config(format!("grid length must be positive, got {length}")));
    }
    let boundary = match g.boundary {
        BoundaryKind::Periodic => Boundary::Periodic,
        // placeholders, resolved once the initial data is known
        BoundaryKind::Dirichlet => {
            Boundary::Dirichlet { left: ConservedState::zeros(0), right: ConservedState::zeros(0) }
        }
    };
    Grid1D::new(n, length, origin, boundary)
}

type Profile = Box<dyn Fn(f64) -> Result<ConservedState>>;

fn initial_and_exact(cfg: &CaseConfig, spec: &ProblemSpec, length: f64) -> Result<(Profile, Option<Exact>)> {
    let exact = match (&cfg.initial, cfg.problem) {
        (InitialCondition::Constant { value }, _) => {
            if value.len() != spec.p() {
                return Err(Error::Config(format!("constant state needs {} components", spec.p())));
            }
            let u = ConservedState::from_slice(value);
            spec.check_admissible(&u).map_err(|e| Error::Config(e.to_string()))?;
            Exact::Constant(u)
        }
        (&InitialCondition::Gaussian { delta, amplitude, offset, center }, problem) => {
            let (c, alpha) = match problem {
                ProblemConfig::Diffusion { alpha } => (0.0, alpha),
                ProblemConfig::Advection { c, alpha } => (c, alpha),
                // only the initial profile is meaningful for Burgers
                ProblemConfig::Burgers { .. } => (0.0, 0.0),
                ProblemConfig::NavierStokes { .. } => unreachable!("rejected by validation"),
            };
            positive("delta", delta)?;
            Exact::Gaussian { c, alpha, delta, amplitude, offset, center, length }
        }
        (&InitialCondition::Sine { mean, amplitude }, problem) => {
            let init = move |x: f64| Ok(ConservedState::scalar(mean + amplitude * (2.0 * PI * x / length).sin()));
            let series = matches!(problem, ProblemConfig::Burgers { alpha } if alpha > 0.0)
                && mean == 0.5
                && amplitude == 1.0
                && length == 1.0;
            let exact = match problem {
                ProblemConfig::Burgers { alpha } if series => {
                    Some(Exact::BurgersSeries { alpha, coeffs: burgers_series_coefficients(alpha, BURGERS_TERMS) })
                }
                _ => None,
            };
            return Ok((Box::new(init), exact));
        }
        (&InitialCondition::TanhShock { delta, sharpness }, problem) => {
            positive("delta", delta)?;
            let alpha = match problem {
                ProblemConfig::Burgers { alpha } => alpha,
                _ => return Err(Error::Config("tanh-shock initial data needs the Burgers model".into())),
            };
            let init = move |x: f64| {
                Ok(ConservedState::scalar(-(2.0 * alpha / delta) * ((x - 0.5) * sharpness / delta).tanh()))
            };
            return Ok((Box::new(init), Some(Exact::BurgersTanh { alpha, delta })));
        }
        (&InitialCondition::RankineHugoniot { mach }, _) => {
            let s = shock_setup(cfg, mach)?;
            let (l, r, gamma, delta) = (s.left, s.right, s.gamma, s.delta);
            let init = move |x: f64| {
                let prim = |u: &ConservedState| {
                    let rho = u[0];
                    let v = u[1] / rho;
                    (rho, v, (gamma - 1.0) * (u[2] - 0.5 * rho * v * v))
                };
                let (a, b) = (prim(&l), prim(&r));
                let w = 0.5 * (x / (2.0 * delta)).tanh();
                let mix = |p: f64, q: f64| 0.5 * (p + q) + w * (q - p);
                Ok(ns_conserved(gamma, mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2)))
            };
            return Ok((Box::new(init), Some(Exact::Shock(s))));
        }
        (&InitialCondition::Acoustic { k, amplitude, rho, pressure, mach }, problem) => {
            let gamma = match problem {
                ProblemConfig::NavierStokes { gamma, .. } => gamma,
                _ => unreachable!("rejected by validation"),
            };
            positive("rho", rho)?;
            positive("pressure", pressure)?;
            let vel = mach * (gamma * pressure / rho).sqrt();
            let base = ns_conserved(gamma, rho, vel, pressure);
            let mode = acoustic_mode(spec, &base, k, amplitude)?;
            Exact::Acoustic { mode, base }
        }
    };
    let e = exact.clone();
    Ok((Box::new(move |x| e.state(x, 0.0)), Some(exact)))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

/// Resolve grid, initial data, boundary states and the reference solution.
pub fn prepare(cfg: &CaseConfig) -> Result<PreparedCase> {
    cfg.validate()?;
    let spec = cfg.problem.spec()?;
    let scheme = cfg.scheme.scheme()?;
    let wave = cfg.wave.model()?;
    let mut grid = build_grid(cfg)?;
    let (init, exact) = initial_and_exact(cfg, &spec, grid.length())?;
    let initial: Vec<ConservedState> = grid.coordinates().into_iter().map(&init).collect::<Result<_>>()?;
    if cfg.grid.boundary == BoundaryKind::Dirichlet {
        let state = |given: &Option<Vec<f64>>, fallback: &ConservedState| -> Result<ConservedState> {
            match given {
                Some(v) if v.len() == spec.p() => Ok(ConservedState::from_slice(v)),
                Some(v) => {
                    Err(Error::Config(format!("boundary state has {} components, expected {}", v.len(), spec.p())))
                }
                None => Ok(*fallback),
            }
        };
        let (left, right) = match &exact {
            Some(Exact::Shock(s)) => (s.left, s.right),
            _ => (initial[0], initial[initial.len() - 1]),
        };
        let boundary =
            Boundary::Dirichlet { left: state(&cfg.grid.left, &left)?, right: state(&cfg.grid.right, &right)? };
        grid = Grid1D::new(grid.n(), grid.length(), grid.origin(), boundary)?;
    }
    let setup = RunSetup {
        spec,
        grid,
        wave,
        scheme,
        initial,
        t_end: cfg.run.t_end,
        snapshots: cfg.run.snapshots.clone(),
        steady_tol: cfg.run.steady_tol,
    };
    Ok(PreparedCase { config: cfg.clone(), setup, exact })
}

/// Outcome of one case.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub trajectory: Trajectory,
    pub x: Vec<f64>,
    /// Reference at the final time (aligned for shocks).
    pub exact: Option<Vec<ConservedState>>,
    /// Relative L² error of the first component against the reference.
    pub l2: Option<f64>,
    /// Knudsen number at the final wave speed, when `ell` is set.
    pub epsilon: Option<f64>,
}

impl CaseResult {
    pub fn final_time(&self) -> f64 {
        self.trajectory.final_state.t
    }
}

/// Position where the specific volume crosses `v_c`, by linear interpolation.
pub fn shock_center(x: &[f64], rho: &[f64], v_c: f64) -> Option<f64> {
    for i in 0..rho.len().saturating_sub(1) {
        let (a, b) = (1.0 / rho[i] - v_c, 1.0 / rho[i + 1] - v_c);
        if a == 0.0 {
            return Some(x[i]);
        }
        if a * b < 0.0 {
            return Some(x[i] + (x[i + 1] - x[i]) * a / (a - b));
        }
    }
    None
}

/// Relative L² error of the first component. Acoustic cases measure the
/// fluctuation about the base flow; a vanishing reference falls back to the
/// RMS difference.
pub fn reference_error(kind: &Exact, numeric: &[ConservedState], exact: &[ConservedState]) -> Result<f64> {
    let offset = match kind {
        Exact::Acoustic { base, .. } => base[0],
        _ => 0.0,
    };
    let num: Vec<f64> = numeric.iter().map(|u| u[0] - offset).collect();
    let ex: Vec<f64> = exact.iter().map(|u| u[0] - offset).collect();
    match l2_error(&num, &ex) {
        Err(Error::Domain(_)) if num.len() == ex.len() && ex.iter().all(|&e| e == 0.0) => {
            Ok((num.iter().map(|u| u * u).sum::<f64>() / num.len() as f64).sqrt())
        }
        r => r,
    }
}

pub fn run_case(cfg: &CaseConfig) -> Result<CaseResult> {
    let prepared = prepare(cfg)?;
    run_prepared(&prepared)
}

pub fn run_prepared(p: &PreparedCase) -> Result<CaseResult> {
    let trajectory = run(&p.setup)?;
    let x = p.setup.grid.coordinates();
    let states = trajectory.final_states();
    let t = trajectory.final_state.t;
    let exact = match &p.exact {
        Some(Exact::Shock(s)) => {
            let rho: Vec<f64> = states.iter().map(|u| u[0]).collect();
            let shift = shock_center(&x, &rho, s.v_center()).unwrap_or(0.0);
            Some(x.iter().map(|&xi| s.state_at(xi - shift)).collect::<Vec<_>>())
        }
        Some(e) => Some(e.sample(&x, t)?),
        None => None,
    };
    let l2 = match (&p.exact, &exact) {
        (Some(kind), Some(ex)) => Some(reference_error(kind, &states, ex)?),
        _ => None,
    };
    let epsilon = match p.config.run.ell {
        Some(ell) => Some(knudsen(&p.setup.spec, trajectory.final_state.a, ell, p.config.run.rho_c)?),
        None => None,
    };
    Ok(CaseResult { trajectory, x, exact, l2, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_builtin_parses_and_prepares() {
        for name in BUILTIN_CASES {
            let c = builtin(name).unwrap();
            assert_eq!(c.name, name);
            let p = prepare(&c).unwrap();
            assert_eq!(p.setup.initial.len(), p.setup.grid.n());
            assert!(p.exact.is_some(), "{name}");
        }
        assert!(matches!(builtin("nope"), Err(Error::Config(_))));
    }

    #[test]
    fn shock_grid_is_resolved_from_width() {
        let p = prepare(&builtin("ns-shock-ma2").unwrap()).unwrap();
        let s = ShockSetup::new(2.0, 1.4, 0.001).unwrap();
        assert_eq!(p.setup.grid.n(), 2501);
        assert!((p.setup.grid.dx() - s.delta / 10.0).abs() < 1e-15);
        assert!((p.setup.grid.x(1250)).abs() < 1e-12);
    }

    #[test]
    fn initial_data_matches_reference() {
        for name in ["diffusion", "advection-diffusion", "ns-acoustic", "burgers-sine"] {
            let p = prepare(&builtin(name).unwrap()).unwrap();
            let e = p.exact.unwrap();
            for (i, u) in p.setup.initial.iter().enumerate() {
                let r = e.state(p.setup.grid.x(i), 0.0).unwrap();
                for c in 0..u.len() {
                    assert!((u[c] - r[c]).abs() < 1e-12, "{name} at {i}");
                }
            }
        }
    }

    #[test]
    fn centre_detection() {
        let x = [0.0, 1.0, 2.0];
        let rho = [1.0, 1.0 / 0.6, 1.0 / 0.4];
        assert!((shock_center(&x, &rho, 0.5).unwrap() - 1.5).abs() < 1e-14);
        assert!(shock_center(&x, &[1.0, 1.0, 1.0], 0.5).is_none());
    }
}
