//! Time integration: the first-order IMEX step and deferred-correction (DeC)
//! iterations over Lobatto IIIC tableaux.
//!
//! Both integrators treat transport explicitly and relaxation implicitly. The
//! implicit part is point-local and written only in terms of the relaxation
//! matrix `T`: with `R_j = F₀ − Δt Σ_k a_jk Λ δx F_k` the sub-node populations
//! are `F_j = M_j − T_j X_j` where
//!
//! ```text
//! T_j X_j + Δt Σ_k a_jk X_k = M_j − R_j
//! ```
//!
//! This stays well-posed for `T = 0` and for singular `D` (Navier-Stokes has no
//! mass diffusion), because Lobatto IIIC has an invertible `A`.

mod run;
mod tableau;

pub use run::{run, RunSetup, Snapshot, Trajectory};
pub use tableau::{lobatto_iiic, ButcherTableau};

use crate::error::{Error, Result};
use crate::kinetic::{maxwellian, relaxation_matrix, WaveModel};
use crate::linalg::{Lu, SMat, MAX_DIM};
use crate::models::ProblemSpec;
use crate::par;
use crate::spatial::{fill_ghosts, transport, GhostedField, Grid1D, PopulationField, SpaceOperator};

/// Scheme selection: order 1 is the IMEX step, orders 2/4/6 are DeC over Lobatto IIIC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub order: usize,
    /// DeC iterations `M` (ignored for order 1).
    pub iterations: usize,
    pub space: SpaceOperator,
    /// `λ = aΔt/Δx`.
    pub cfl: f64,
}

impl SchemeConfig {
    /// Default pairing: δx1/λ=1, δx2/λ=0.8, δx4/λ=2, with `M = order`.
    pub fn for_order(order: usize) -> Result<Self> {
        let cfl = match order {
            1 => 1.0,
            2 => 0.8,
            4 | 6 => 2.0,
            _ => return Err(Error::Unsupported(format!("no scheme of order {order}"))),
        };
        Ok(Self { order, iterations: order, space: SpaceOperator::for_order(order)?, cfl })
    }

    pub fn validate(&self) -> Result<()> {
        if self.order != 1 {
            lobatto_iiic(self.order).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.iterations == 0 {
            return Err(Error::Config("DeC needs at least one iteration".into()));
        }
        if !(self.cfl.is_finite() && self.cfl > 0.0) {
            return Err(Error::Config(format!("CFL number must be positive, got {}", self.cfl)));
        }
        Ok(())
    }

    pub fn tableau(&self) -> Result<ButcherTableau> {
        if self.order == 1 {
            Ok(ButcherTableau::implicit_euler())
        } else {
            lobatto_iiic(self.order)
        }
    }

    pub fn effective_iterations(&self) -> usize {
        if self.order == 1 {
            1
        } else {
            self.iterations
        }
    }
}

/// Populations, time and kinetic speed.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub f: PopulationField,
    pub t: f64,
    pub a: f64,
}

/// Reusable workspace for repeated steps on one grid.
pub struct Stepper {
    spec: ProblemSpec,
    grid: Grid1D,
    space: SpaceOperator,
    tableau: ButcherTableau,
    iterations: usize,
    ghost: GhostedField,
    deriv: Vec<PopulationField>,
    sub: Vec<PopulationField>,
    scratch: Vec<f64>,
}

impl Stepper {
    pub fn new(spec: &ProblemSpec, grid: &Grid1D, scheme: &SchemeConfig) -> Result<Self> {
        scheme.validate()?;
        let tableau = scheme.tableau()?;
        let (n, p, s) = (grid.n(), spec.p(), tableau.s);
        if s * p > MAX_DIM {
            return Err(Error::Unsupported(format!("local system of size {} is too large", s * p)));
        }
        Ok(Self {
            spec: *spec,
            grid: grid.clone(),
            space: scheme.space,
            iterations: scheme.effective_iterations(),
            ghost: GhostedField::new(n, p),
            deriv: (0..s).map(|_| PopulationField::zeros(n, p)).collect(),
            sub: (0..s).map(|_| PopulationField::zeros(n, p)).collect(),
            scratch: vec![0.0; n * s * 2 * p],
            tableau,
        })
    }

    pub fn tableau(&self) -> &ButcherTableau {
        &self.tableau
    }

    /// Current sub-node populations (valid after at least one iteration).
    pub fn sub_nodes(&self) -> &[PopulationField] {
        &self.sub
    }

    pub fn sub_nodes_mut(&mut self) -> &mut [PopulationField] {
        &mut self.sub
    }

    /// Advance `state` by `dt` with the configured number of iterations.
    pub fn step(&mut self, state: &mut SolverState, dt: f64) -> Result<()> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        let model = WaveModel::constant(state.a)?;
        for m in 0..self.iterations {
            self.iterate(&state.f, &model, dt, m == 0)?;
        }
        std::mem::swap(&mut state.f, &mut self.sub[self.tableau.s - 1]);
        state.t += dt;
        Ok(())
    }

    /// One correction sweep: rebuild every sub-node from the current ones.
    /// With `first`, all sub-nodes are taken equal to `f0`.
    pub fn iterate(&mut self, f0: &PopulationField, model: &WaveModel, dt: f64, first: bool) -> Result<()> {
        let dx = self.grid.dx();
        if first {
            fill_ghosts(f0, &self.grid, model, &self.spec, &mut self.ghost)?;
            transport(self.space, &self.ghost, model, dx, &mut self.deriv[0]);
        } else {
            for k in 0..self.tableau.s {
                fill_ghosts(&self.sub[k], &self.grid, model, &self.spec, &mut self.ghost)?;
                transport(self.space, &self.ghost, model, dx, &mut self.deriv[k]);
            }
        }
        self.local_solve(f0, model.a, dt, first)?;
        self.scatter();
        Ok(())
    }

    fn local_solve(&mut self, f0: &PopulationField, a: f64, dt: f64, first: bool) -> Result<()> {
        let (n, p, s) = (f0.n(), f0.p(), self.tableau.s);
        let kp = 2 * p;
        let stride = s * kp;
        let spec = &self.spec;
        let tab = &self.tableau;
        let f0d = f0.as_slice();
        let derivs: Vec<&[f64]> =
            if first { vec![self.deriv[0].as_slice(); s] } else { self.deriv.iter().map(|d| d.as_slice()).collect() };

        par::try_for_each_chunk_mut(&mut self.scratch, stride, |i, out| {
            // explicit part R_j
            for j in 0..s {
                for k in 0..kp {
                    let idx = k * n + i;
                    let mut acc = 0.0;
                    for (l, d) in derivs.iter().enumerate() {
                        acc += tab.a(j, l) * d[idx];
                    }
                    out[j * kp + k] = f0d[idx] - dt * acc;
                }
            }

            let mut m = [[0.0; 6]; 4];
            let mut t = [SMat::zeros(0); 4];
            let mut relaxing = false;
            for j in 0..s {
                let r = &out[j * kp..(j + 1) * kp];
                let mut u = crate::linalg::SVec::zeros(p);
                for c in 0..p {
                    u[c] = r[c] + r[p + c];
                }
                let (m1, m2) = maxwellian(spec, &u, a).map_err(|e| e.at(i))?;
                m[j][..p].copy_from_slice(&m1);
                m[j][p..kp].copy_from_slice(&m2);
                t[j] = relaxation_matrix(spec, &u, a).map_err(|e| e.at(i))?;
                relaxing |= !t[j].is_zero();
            }

            if !relaxing {
                for j in 0..s {
                    out[j * kp..(j + 1) * kp].copy_from_slice(&m[j][..kp]);
                }
                return Ok(());
            }

            let sp = s * p;
            let mut kmat = [0.0; MAX_DIM * MAX_DIM];
            for j in 0..s {
                for l in 0..s {
                    let ajl = dt * tab.a(j, l);
                    for r in 0..p {
                        let row = (j * p + r) * sp;
                        for c in 0..p {
                            let mut v = if r == c { ajl } else { 0.0 };
                            if j == l {
                                v += t[j].get(r, c);
                            }
                            kmat[row + l * p + c] = v;
                        }
                    }
                }
            }
            let lu = Lu::factor(sp, &kmat[..sp * sp]).ok_or(Error::Singular { index: Some(i) })?;
            for w in 0..2 {
                let mut x = [0.0; MAX_DIM];
                for j in 0..s {
                    for c in 0..p {
                        x[j * p + c] = m[j][w * p + c] - out[j * kp + w * p + c];
                    }
                }
                lu.solve_in_place(&mut x[..sp]);
                for j in 0..s {
                    let tx = t[j].mul_vec(&x[j * p..(j + 1) * p]);
                    for c in 0..p {
                        out[j * kp + w * p + c] = m[j][w * p + c] - tx[c];
                    }
                }
            }
            Ok(())
        })
    }

    /// Point-major scratch → one SoA field per sub-node.
    fn scatter(&mut self) {
        let s = self.tableau.s;
        let scratch = &self.scratch;
        for (j, field) in self.sub.iter_mut().enumerate() {
            let (n, kp) = (field.n(), field.arrays());
            let stride = s * kp;
            par::for_each_chunk_mut(field.as_mut_slice(), n, |k, arr| {
                for (i, v) in arr.iter_mut().enumerate() {
                    *v = scratch[i * stride + j * kp + k];
                }
            });
        }
    }
}

/// One first-order IMEX step (upwind transport, implicit relaxation).
pub fn step_imex1(
    state: &mut SolverState,
    grid: &Grid1D,
    spec: &ProblemSpec,
    model: &WaveModel,
    dt: f64,
) -> Result<()> {
    let scheme = SchemeConfig { order: 1, iterations: 1, space: SpaceOperator::Dx1, cfl: 1.0 };
    state.a = model.a;
    Stepper::new(spec, grid, &scheme)?.step(state, dt)
}

/// One DeC step with `config.iterations` sweeps over the configured tableau.
pub fn dec_step(
    state: &mut SolverState,
    grid: &Grid1D,
    spec: &ProblemSpec,
    model: &WaveModel,
    config: &SchemeConfig,
    dt: f64,
) -> Result<()> {
    state.a = model.a;
    Stepper::new(spec, grid, config)?.step(state, dt)
}

/// Re-express populations for a new kinetic speed while keeping both moments:
/// the equilibrium part is re-evaluated and the non-equilibrium part rescaled
/// by `a_old / a_new`, so `u` and `a(F2 − F1)` are unchanged.
pub fn rescale_wave_speed(f: &mut PopulationField, spec: &ProblemSpec, a_old: f64, a_new: f64) -> Result<()> {
    let (n, p) = (f.n(), f.p());
    let ratio = a_old / a_new;
    let data = f.as_mut_slice();
    for i in 0..n {
        let mut u = crate::linalg::SVec::zeros(p);
        for c in 0..p {
            u[c] = data[c * n + i] + data[(p + c) * n + i];
        }
        let (o1, o2) = maxwellian(spec, &u, a_old).map_err(|e| e.at(i))?;
        let (n1, n2) = maxwellian(spec, &u, a_new).map_err(|e| e.at(i))?;
        for c in 0..p {
            let k1 = c * n + i;
            let k2 = (p + c) * n + i;
            data[k1] = n1[c] + ratio * (data[k1] - o1[c]);
            data[k2] = n2[c] + ratio * (data[k2] - o2[c]);
        }
    }
    Ok(())
}
