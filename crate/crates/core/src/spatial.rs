//! Uniform grid, population storage and the upwind-biased derivative stencils.
//!
//! Every array handed to a stencil is "ghosted": two extra values on each side,
//! so interior point `i` lives at index `i + 2`.

use crate::error::{Error, Result};
use crate::kinetic::{maxwellian, WaveModel};
use crate::linalg::SVec;
use crate::models::{ConservedState, ProblemSpec};
use crate::par;

/// Ghost layers on each side of the grid.
pub const GHOSTS: usize = 2;

/// Points per parallel work item in the stencil loops.
const BLOCK: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    Periodic,
    /// Ghost populations are frozen at the Maxwellian of these conserved states.
    Dirichlet {
        left: ConservedState,
        right: ConservedState,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n: usize,
    length: f64,
    origin: f64,
    boundary: Boundary,
}

impl Grid1D {
    /// `n` points covering `[origin, origin + length]`. Periodic grids use cell
    /// centres `(i + ½)Δx`, Dirichlet grids include both end points.
    pub fn new(n: usize, length: f64, origin: f64, boundary: Boundary) -> Result<Self> {
        if n < 5 {
            return Err(Error::Config(format!("grid needs at least 5 points, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) || !origin.is_finite() {
            return Err(Error::Config(format!("invalid domain [{origin}, {origin} + {length}]")));
        }
        Ok(Self { n, length, origin, boundary })
    }

    pub fn periodic(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, 0.0, Boundary::Periodic)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.boundary, Boundary::Periodic)
    }

    pub fn dx(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.length / self.n as f64,
            Boundary::Dirichlet { .. } => self.length / (self.n - 1) as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.origin + (i as f64 + 0.5) * self.dx(),
            Boundary::Dirichlet { .. } => self.origin + i as f64 * self.dx(),
        }
    }

    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}

/// Discrete first derivative used for the transport of one population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceOperator {
    /// Two-point upwind.
    Dx1,
    /// Four-point upwind-biased.
    Dx2,
    /// Five-point centred.
    Dx4,
}

impl SpaceOperator {
    pub const ALL: [SpaceOperator; 3] = [SpaceOperator::Dx1, SpaceOperator::Dx2, SpaceOperator::Dx4];

    /// Default operator paired with a time order (1 → δx1, 2 → δx2, 4 → δx4).
    pub fn for_order(order: usize) -> Result<Self> {
        match order {
            1 => Ok(Self::Dx1),
            2 => Ok(Self::Dx2),
            4 | 6 => Ok(Self::Dx4),
            _ => Err(Error::Unsupported(format!("no default stencil for order {order}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Dx1 => "dx1",
            Self::Dx2 => "dx2",
            Self::Dx4 => "dx4",
        }
    }

    /// Apply to a ghosted array (`out.len() + 4` values). `positive` selects the
    /// upwind side for a population moving towards `+x`.
    pub fn apply_ghosted(&self, ext: &[f64], positive: bool, inv_dx: f64, out: &mut [f64]) {
        self.apply_range(ext, positive, inv_dx, 0, out);
    }

    /// Like [`apply_ghosted`](Self::apply_ghosted) for the interior points `start..start + out.len()`.
    fn apply_range(&self, ext: &[f64], positive: bool, inv_dx: f64, start: usize, out: &mut [f64]) {
        debug_assert!(ext.len() >= start + out.len() + 2 * GHOSTS);
        let e = &ext[start..start + out.len() + 2 * GHOSTS];
        match (self, positive) {
            (Self::Dx1, true) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (e[i + 2] - e[i + 1]) * inv_dx;
                }
            }
            (Self::Dx1, false) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (e[i + 3] - e[i + 2]) * inv_dx;
                }
            }
            (Self::Dx2, true) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (e[i + 3] / 3.0 + e[i + 2] / 2.0 - e[i + 1] + e[i] / 6.0) * inv_dx;
                }
            }
            (Self::Dx2, false) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (-e[i + 1] / 3.0 - e[i + 2] / 2.0 + e[i + 3] - e[i + 4] / 6.0) * inv_dx;
                }
            }
            (Self::Dx4, _) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = ((e[i] - e[i + 4]) / 12.0 + 2.0 / 3.0 * (e[i + 3] - e[i + 1])) * inv_dx;
                }
            }
        }
    }
}

/// One scalar component of one population, with its direction of travel.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub values: Vec<f64>,
    /// `+1` for a population moving towards `+x`, `−1` otherwise.
    pub advect_sign: f64,
    /// Ghost values `(left, right)` used on Dirichlet grids, outermost first on the left.
    pub ghosts: Option<([f64; 2], [f64; 2])>,
}

impl WaveField {
    pub fn new(values: Vec<f64>, advect_sign: f64) -> Self {
        Self { values, advect_sign, ghosts: None }
    }

    pub fn with_ghosts(mut self, left: [f64; 2], right: [f64; 2]) -> Self {
        self.ghosts = Some((left, right));
        self
    }

    fn ghosted(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        let n = grid.n();
        if self.values.len() != n {
            return Err(Error::Domain(format!("field has {} values, grid has {n}", self.values.len())));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("field contains non-finite values".into()));
        }
        let mut ext = vec![0.0; n + 2 * GHOSTS];
        ext[GHOSTS..GHOSTS + n].copy_from_slice(&self.values);
        match (grid.boundary(), self.ghosts) {
            (Boundary::Periodic, _) => wrap(&mut ext, n),
            (Boundary::Dirichlet { .. }, Some((l, r))) => {
                ext[..2].copy_from_slice(&l);
                ext[n + 2..].copy_from_slice(&r);
            }
            (Boundary::Dirichlet { .. }, None) => {
                return Err(Error::Domain("Dirichlet grid requires ghost values".into()))
            }
        }
        Ok(ext)
    }

    pub fn apply(&self, op: SpaceOperator, grid: &Grid1D) -> Result<WaveField> {
        let ext = self.ghosted(grid)?;
        let mut out = vec![0.0; grid.n()];
        op.apply_ghosted(&ext, self.advect_sign > 0.0, 1.0 / grid.dx(), &mut out);
        Ok(WaveField { values: out, advect_sign: self.advect_sign, ghosts: None })
    }
}

pub fn dx1(field: &WaveField, grid: &Grid1D) -> Result<WaveField> {
    field.apply(SpaceOperator::Dx1, grid)
}

pub fn dx2(field: &WaveField, grid: &Grid1D) -> Result<WaveField> {
    field.apply(SpaceOperator::Dx2, grid)
}

pub fn dx4(field: &WaveField, grid: &Grid1D) -> Result<WaveField> {
    field.apply(SpaceOperator::Dx4, grid)
}

fn wrap(ext: &mut [f64], n: usize) {
    ext[0] = ext[n];
    ext[1] = ext[n + 1];
    ext[n + 2] = ext[2];
    ext[n + 3] = ext[3];
}

/// Kinetic unknowns on the grid: `2p` contiguous arrays of length `n`, array
/// `w * p + c` holding component `c` of wave `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationField {
    n: usize,
    p: usize,
    data: Vec<f64>,
}

impl PopulationField {
    pub fn zeros(n: usize, p: usize) -> Self {
        Self { n, p, data: vec![0.0; 2 * p * n] }
    }

    /// Equilibrium populations of the given conserved states.
    pub fn from_maxwellian(spec: &ProblemSpec, states: &[ConservedState], a: f64) -> Result<Self> {
        let p = spec.p();
        let mut f = Self::zeros(states.len(), p);
        for (i, u) in states.iter().enumerate() {
            let (m1, m2) = maxwellian(spec, u, a).map_err(|e| e.at(i))?;
            for c in 0..p {
                f.data[c * f.n + i] = m1[c];
                f.data[(p + c) * f.n + i] = m2[c];
            }
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn arrays(&self) -> usize {
        2 * self.p
    }

    pub fn array(&self, w: usize, c: usize) -> &[f64] {
        let k = w * self.p + c;
        &self.data[k * self.n..(k + 1) * self.n]
    }

    pub fn array_mut(&mut self, w: usize, c: usize) -> &mut [f64] {
        let k = w * self.p + c;
        &mut self.data[k * self.n..(k + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Populations at point `i` as `[F1; F2]`.
    pub fn point(&self, i: usize) -> [f64; 6] {
        let mut out = [0.0; 6];
        for k in 0..2 * self.p {
            out[k] = self.data[k * self.n + i];
        }
        out
    }

    /// Conserved state `F1 + F2` at point `i`.
    pub fn macro_state(&self, i: usize) -> ConservedState {
        let mut u = SVec::zeros(self.p);
        for c in 0..self.p {
            u[c] = self.data[c * self.n + i] + self.data[(self.p + c) * self.n + i];
        }
        u
    }

    pub fn macro_states(&self) -> Vec<ConservedState> {
        (0..self.n).map(|i| self.macro_state(i)).collect()
    }

    /// Component `c` of the conserved state on the whole grid.
    pub fn macro_component(&self, c: usize) -> Vec<f64> {
        let (f1, f2) = (self.array(0, c), self.array(1, c));
        f1.iter().zip(f2).map(|(a, b)| a + b).collect()
    }
}

/// Ghosted copy of a population field (`2p` arrays of length `n + 4`).
#[derive(Debug, Clone)]
pub struct GhostedField {
    n: usize,
    p: usize,
    data: Vec<f64>,
}

impl GhostedField {
    pub fn new(n: usize, p: usize) -> Self {
        Self { n, p, data: vec![0.0; 2 * p * (n + 2 * GHOSTS)] }
    }

    pub fn array(&self, w: usize, c: usize) -> &[f64] {
        let len = self.n + 2 * GHOSTS;
        let k = w * self.p + c;
        &self.data[k * len..(k + 1) * len]
    }
}

/// Copy `f` into `out` and fill the two ghost layers on each side.
///
/// Periodic grids wrap around; Dirichlet grids hold the Maxwellian of the
/// prescribed boundary state (evaluated at the current kinetic speed).
pub fn fill_ghosts(
    f: &PopulationField,
    grid: &Grid1D,
    model: &WaveModel,
    spec: &ProblemSpec,
    out: &mut GhostedField,
) -> Result<()> {
    let (n, p) = (f.n, f.p);
    if n != grid.n() || out.n != n || out.p != p {
        return Err(Error::Domain("population field does not match the grid".into()));
    }
    let edges = match grid.boundary() {
        Boundary::Periodic => None,
        Boundary::Dirichlet { left, right } => {
            let ml = maxwellian(spec, left, model.a).map_err(|e| Error::Domain(format!("left boundary state: {e}")))?;
            let mr =
                maxwellian(spec, right, model.a).map_err(|e| Error::Domain(format!("right boundary state: {e}")))?;
            Some((ml, mr))
        }
    };
    let len = n + 2 * GHOSTS;
    for k in 0..2 * p {
        let ext = &mut out.data[k * len..(k + 1) * len];
        ext[GHOSTS..GHOSTS + n].copy_from_slice(&f.data[k * n..(k + 1) * n]);
        match &edges {
            None => wrap(ext, n),
            Some((ml, mr)) => {
                let (w, c) = (k / p, k % p);
                let l = if w == 0 { ml.0[c] } else { ml.1[c] };
                let r = if w == 0 { mr.0[c] } else { mr.1[c] };
                ext[..GHOSTS].fill(l);
                ext[n + GHOSTS..].fill(r);
            }
        }
    }
    Ok(())
}

/// `out = Λ δx F`: each population differentiated on its upwind side and scaled
/// by its velocity.
pub fn transport(op: SpaceOperator, ext: &GhostedField, model: &WaveModel, dx: f64, out: &mut PopulationField) {
    let (n, p) = (ext.n, ext.p);
    debug_assert_eq!((out.n, out.p), (n, p));
    for w in 0..2 {
        let v = model.velocity(w);
        let positive = v > 0.0;
        let scale = v / dx;
        for c in 0..p {
            let src = ext.array(w, c);
            let dst = out.array_mut(w, c);
            par::for_each_chunk_mut(dst, BLOCK, |b, chunk| {
                op.apply_range(src, positive, scale, b * BLOCK, chunk);
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Vec<f64> {
        grid.coordinates().into_iter().map(f).collect()
    }

    #[test]
    fn constants_are_annihilated() {
        let g = Grid1D::periodic(16, 1.0).unwrap();
        for op in SpaceOperator::ALL {
            for s in [1.0, -1.0] {
                let out = WaveField::new(vec![3.25; 16], s).apply(op, &g).unwrap();
                assert!(out.values.iter().all(|v| v.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn polynomial_exactness_in_the_interior() {
        let b = Boundary::Dirichlet { left: SVec::scalar(0.0), right: SVec::scalar(0.0) };
        let g = Grid1D::new(11, 1.0, 0.0, b).unwrap();
        let z = ([0.0; 2], [0.0; 2]);
        let interior = 2..9;
        for s in [1.0, -1.0] {
            let f = WaveField { values: line(&g, |x| x), advect_sign: s, ghosts: Some(z) };
            let d = dx1(&f, &g).unwrap();
            for i in interior.clone() {
                assert!((d.values[i] - 1.0).abs() < 1e-12);
            }
            let f = WaveField { values: line(&g, |x| x * x), advect_sign: s, ghosts: Some(z) };
            let d = dx2(&f, &g).unwrap();
            for i in interior.clone() {
                assert!((d.values[i] - 2.0 * g.x(i)).abs() < 1e-12);
            }
        }
        let f = WaveField { values: line(&g, |x| x * x * x), advect_sign: 1.0, ghosts: Some(z) };
        let d = dx4(&f, &g).unwrap();
        for i in interior {
            assert!((d.values[i] - 3.0 * g.x(i).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_requires_ghosts() {
        let b = Boundary::Dirichlet { left: SVec::scalar(0.0), right: SVec::scalar(0.0) };
        let g = Grid1D::new(8, 1.0, 0.0, b).unwrap();
        assert!(dx1(&WaveField::new(vec![0.0; 8], 1.0), &g).is_err());
        assert!(Grid1D::periodic(4, 1.0).is_err());
    }

    #[test]
    fn periodic_ghosts_wrap() {
        let spec = ProblemSpec::diffusion(0.0).unwrap();
        let g = Grid1D::periodic(8, 1.0).unwrap();
        let states: Vec<_> = (0..8).map(|i| SVec::scalar(i as f64)).collect();
        let f = PopulationField::from_maxwellian(&spec, &states, 1.0).unwrap();
        let mut ext = GhostedField::new(8, 1);
        fill_ghosts(&f, &g, &WaveModel::constant(1.0).unwrap(), &spec, &mut ext).unwrap();
        let a = ext.array(0, 0);
        // ghost[-1] is index 1, ghost[8] is index 10
        assert_eq!(a[1], f.array(0, 0)[7]);
        assert_eq!(a[10], f.array(0, 0)[0]);
        assert_eq!(a[0], f.array(0, 0)[6]);
    }

    #[test]
    fn dirichlet_ghosts_hold_the_boundary_maxwellian() {
        let spec = ProblemSpec::burgers(0.001).unwrap();
        let b = Boundary::Dirichlet { left: SVec::scalar(0.2), right: SVec::scalar(-0.2) };
        let g = Grid1D::new(8, 1.0, 0.0, b).unwrap();
        let f = PopulationField::from_maxwellian(&spec, &vec![SVec::scalar(0.0); 8], 2.0).unwrap();
        let mut ext = GhostedField::new(8, 1);
        fill_ghosts(&f, &g, &WaveModel::constant(2.0).unwrap(), &spec, &mut ext).unwrap();
        for k in 0..2 {
            assert!((ext.array(0, 0)[k] - 0.095).abs() < 1e-15);
            assert!((ext.array(1, 0)[k] - 0.105).abs() < 1e-15);
        }
    }

    #[test]
    fn dirichlet_rejects_vacuum_boundary() {
        let spec = ProblemSpec::navier_stokes(1.4, 0.0, 0.75).unwrap();
        let good = crate::models::ns_conserved(1.4, 1.0, 0.0, 1.0);
        let bad = SVec::from_slice(&[-1.0, 0.0, 1.0]);
        let g = Grid1D::new(6, 1.0, 0.0, Boundary::Dirichlet { left: good, right: bad }).unwrap();
        let f = PopulationField::from_maxwellian(&spec, &[good; 6], 5.0).unwrap();
        let mut ext = GhostedField::new(6, 3);
        let r = fill_ghosts(&f, &g, &WaveModel::constant(5.0).unwrap(), &spec, &mut ext);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
