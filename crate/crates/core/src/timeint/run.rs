use super::{rescale_wave_speed, SchemeConfig, SolverState, Stepper};
use crate::error::{Error, Result};
use crate::kinetic::{relaxation_matrix, update_wave_speed, WaveModel};
use crate::models::{ConservedState, ProblemSpec};
use crate::spatial::{Grid1D, PopulationField};

/// Everything needed to integrate one case.
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub spec: ProblemSpec,
    pub grid: Grid1D,
    pub wave: WaveModel,
    pub scheme: SchemeConfig,
    pub initial: Vec<ConservedState>,
    pub t_end: f64,
    /// Intermediate output times; steps are shortened to land on them.
    pub snapshots: Vec<f64>,
    /// Stop early once `max|u^{n+1} − u^n| / Δt` falls below this value.
    pub steady_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub states: Vec<ConservedState>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub final_state: SolverState,
    pub steps: usize,
    /// Set when `steady_tol` stopped the run before `t_end`.
    pub steady: bool,
    /// Per component, `max_n |Σu^n Δx − Σu^0 Δx| / Σ|u^0| Δx` (periodic grids only).
    pub mass_drift: Option<Vec<f64>>,
    /// Largest kinetic speed used.
    pub a_max: f64,
}

impl Trajectory {
    pub fn final_states(&self) -> Vec<ConservedState> {
        self.final_state.f.macro_states()
    }
}

fn mass(f: &PopulationField, dx: f64) -> Vec<f64> {
    (0..f.p())
        .map(|c| {
            let (a, b) = (f.array(0, c), f.array(1, c));
            a.iter().zip(b).map(|(x, y)| x + y).sum::<f64>() * dx
        })
        .collect()
}

/// Step rejections allowed when a stage outruns an adaptive wave speed.
const MAX_RETRIES: usize = 4;

/// Integrate from `F = M(u₀)` to `t_end` with `Δt = λΔx/a`, recomputing an
/// adaptive `a` once per step and clipping the last step onto each output time.
pub fn run(setup: &RunSetup) -> Result<Trajectory> {
    let RunSetup { spec, grid, scheme, .. } = setup;
    let n = grid.n();
    if setup.initial.len() != n {
        return Err(Error::Config(format!("initial data has {} points, grid has {n}", setup.initial.len())));
    }
    if !(setup.t_end.is_finite() && setup.t_end >= 0.0) {
        return Err(Error::Config(format!("end time must be non-negative, got {}", setup.t_end)));
    }
    let mut targets: Vec<f64> = setup.snapshots.iter().copied().filter(|&t| t > 0.0 && t < setup.t_end).collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();
    targets.push(setup.t_end);

    let mut model = setup.wave;
    model.a = update_wave_speed(&model, spec, setup.initial.iter().map(|u| &u[..]))?;
    for (i, u) in setup.initial.iter().enumerate() {
        relaxation_matrix(spec, u, model.a).map_err(|e| e.at(i))?;
    }
    let f = PopulationField::from_maxwellian(spec, &setup.initial, model.a)?;
    let mut state = SolverState { f, t: 0.0, a: model.a };
    let mut stepper = Stepper::new(spec, grid, scheme)?;

    let dx = grid.dx();
    let track_mass = grid.is_periodic();
    let m0 = mass(&state.f, dx);
    let scale: Vec<f64> =
        (0..spec.p()).map(|c| state.f.macro_component(c).iter().map(|v| v.abs()).sum::<f64>() * dx).collect();
    let mut drift = vec![0.0; spec.p()];

    let mut snapshots = Vec::new();
    let mut steps = 0usize;
    let mut steady = false;
    let mut a_max = model.a;
    let mut previous: Vec<f64> = Vec::new();

    'outer: for (ti, &target) in targets.iter().enumerate() {
        while state.t < target {
            if model.is_adaptive() && steps > 0 {
                let states = state.f.macro_states();
                let a_new = update_wave_speed(&model, spec, states.iter().map(|u| &u[..]))?;
                if a_new != state.a {
                    rescale_wave_speed(&mut state.f, spec, state.a, a_new)?;
                    state.a = a_new;
                }
                a_max = a_max.max(a_new);
            }
            if setup.steady_tol.is_some() {
                previous.clear();
                previous.extend_from_slice(state.f.as_slice());
            }
            let backup = model.is_adaptive().then(|| state.clone());
            let mut retries = 0;
            let (dt, clipped) = loop {
                let mut dt = scheme.cfl * dx / state.a;
                let clipped = state.t + dt >= target - 1e-10 * dt;
                if clipped {
                    dt = target - state.t;
                }
                match stepper.step(&mut state, dt) {
                    Ok(()) => break (dt, clipped),
                    // an adaptive speed is only known from the states at t_n; if a stage
                    // overshoots it, redo the step with the speed that stage requires
                    Err(Error::Subcharacteristic { bound, .. }) if retries < MAX_RETRIES && backup.is_some() => {
                        let mut restored = backup.clone().expect("adaptive");
                        let a_new = model.ratio().expect("adaptive") * bound;
                        let a_new = a_new.max(restored.a * (1.0 + 1e-12));
                        rescale_wave_speed(&mut restored.f, spec, restored.a, a_new)?;
                        restored.a = a_new;
                        a_max = a_max.max(a_new);
                        state = restored;
                        retries += 1;
                    }
                    Err(e) => return Err(e),
                }
            };
            if clipped {
                state.t = target;
            }
            steps += 1;

            if track_mass {
                for (c, m) in mass(&state.f, dx).into_iter().enumerate() {
                    let denom = if scale[c] > 0.0 { scale[c] } else { 1.0 };
                    drift[c] = f64::max(drift[c], (m - m0[c]).abs() / denom);
                }
            }
            if let Some(tol) = setup.steady_tol {
                let cur = state.f.as_slice();
                let p = spec.p();
                let mut change = 0.0f64;
                for c in 0..p {
                    for i in 0..n {
                        let du =
                            (cur[c * n + i] + cur[(p + c) * n + i]) - (previous[c * n + i] + previous[(p + c) * n + i]);
                        change = change.max(du.abs());
                    }
                }
                if change / dt <= tol {
                    steady = true;
                    break 'outer;
                }
            }
        }
        if ti + 1 < targets.len() {
            snapshots.push(Snapshot { t: state.t, states: state.f.macro_states() });
        }
    }
    snapshots.push(Snapshot { t: state.t, states: state.f.macro_states() });

    Ok(Trajectory { snapshots, final_state: state, steps, steady, mass_drift: track_mass.then_some(drift), a_max })
}
