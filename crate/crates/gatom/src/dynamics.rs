//! Single-excitation dynamics on a discretized momentum grid.
//!
//! The equations of motion in the rotating frame are
//!
//! ```text
//! dα/dt  = −2i Σ_k dk g(k) β_k
//! dβ_k/dt = −i c_s k β_k − i g(k) α
//! ```
//!
//! with α(0) = 1, β(0) = 0. The factor 2 comes from merging the two
//! symmetric lab-frame branches, so the conserved norm is |α|² + 2Σ|β|²dk.
//! Time stepping is classical fixed-step fourth-order Runge–Kutta.

use num_complex::Complex64;

use crate::coupling::CouplingModel;
use crate::error::{Error, Result};

/// Norm drift at which integration is aborted.
const NORM_ABORT: f64 = 1e-4;
/// Full β field is stored every this many steps; α and the norm every step.
const SNAPSHOT_STRIDE: usize = 10;

/// Momentum and time discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationGrid {
    /// Momentum cutoff; modes run over −k_cut ..= k_cut.
    pub k_cut: f64,
    /// Momentum spacing; k_cut must be an integer multiple so the mode list
    /// is symmetric with k = 0 included (odd count).
    pub dk: f64,
    /// Time step.
    pub dt: f64,
    /// Final time.
    pub t_final: f64,
}

impl SimulationGrid {
    pub fn new(k_cut: f64, dk: f64, dt: f64, t_final: f64) -> Result<Self> {
        for (name, v) in [
            ("k_cut", k_cut),
            ("dk", dk),
            ("dt", dt),
            ("t_final", t_final),
        ] {
            if !(v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        let m = (k_cut / dk).round();
        if (k_cut - m * dk).abs() > 1e-6 * dk || m < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "k_cut = {k_cut} must be a positive integer multiple of dk = {dk}"
            )));
        }
        if t_final < dt {
            return Err(Error::InvalidConfig(
                "t_final must cover at least one step".into(),
            ));
        }
        Ok(Self {
            k_cut,
            dk,
            dt,
            t_final,
        })
    }

    /// The published discretization: k_c = 0.1π/λ, dk = 2π×10⁻⁴/λ,
    /// dt = 0.1T, t_final = 267T (natural units).
    pub fn default_paper() -> Self {
        Self {
            k_cut: 0.1 * std::f64::consts::PI,
            dk: 1e-4 * crate::params::TAU,
            dt: 0.1,
            t_final: 267.0,
        }
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn half_modes(&self) -> usize {
        (self.k_cut / self.dk).round() as usize
    }

    pub fn n_modes(&self) -> usize {
        2 * self.half_modes() + 1
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// k value of mode `j` (0-based over the symmetric list).
    pub fn mode_k(&self, j: usize) -> f64 {
        (j as f64 - self.half_modes() as f64) * self.dk
    }
}

/// A stored β field.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub beta: Vec<Complex64>,
}

/// Result of a single-excitation run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: SimulationGrid,
    pub n_size: f64,
    /// α at every step, starting at t = 0.
    pub alpha: Vec<Complex64>,
    /// |α|² + 2Σ|β|²dk at every step.
    pub norm: Vec<f64>,
    /// β fields every tenth step plus the final step.
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.grid.dt
    }

    /// Index into `snapshots` closest to time `t`.
    pub fn snapshot_index_at(&self, t: f64) -> Option<usize> {
        if self.snapshots.is_empty() {
            return None;
        }
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, s) in self.snapshots.iter().enumerate() {
            let d = (self.time(s.step) - t).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        Some(best)
    }

    pub fn alpha_sq(&self) -> Vec<f64> {
        self.alpha.iter().map(|a| a.norm_sqr()).collect()
    }
}

struct Stepper<'m> {
    model: &'m CouplingModel,
    k: Vec<f64>,
    g: Vec<f64>,
    dk: f64,
}

#[derive(Clone)]
struct State {
    alpha: Complex64,
    beta: Vec<Complex64>,
}

impl Stepper<'_> {
    fn deriv(&self, alpha: Complex64, beta: &[Complex64], d_beta: &mut [Complex64]) -> Complex64 {
        let c = self.model.config.c_s;
        let mut acc = Complex64::default();
        for ((&g, &k), (b, db)) in self
            .g
            .iter()
            .zip(&self.k)
            .zip(beta.iter().zip(d_beta.iter_mut()))
        {
            acc += g * b;
            // -i (c k b + g alpha)
            let v = c * k * b + g * alpha;
            *db = Complex64::new(v.im, -v.re);
        }
        let da = 2.0 * self.dk * acc;
        Complex64::new(da.im, -da.re)
    }

    fn rk4_step(&self, state: &mut State, dt: f64, scratch: &mut Scratch) {
        let n = state.beta.len();
        let Scratch {
            db1,
            db2,
            db3,
            db4,
            bt,
        } = scratch;
        let da1 = self.deriv(state.alpha, &state.beta, db1);
        for j in 0..n {
            bt[j] = state.beta[j] + 0.5 * dt * db1[j];
        }
        let da2 = self.deriv(state.alpha + 0.5 * dt * da1, bt, db2);
        for j in 0..n {
            bt[j] = state.beta[j] + 0.5 * dt * db2[j];
        }
        let da3 = self.deriv(state.alpha + 0.5 * dt * da2, bt, db3);
        for j in 0..n {
            bt[j] = state.beta[j] + dt * db3[j];
        }
        let da4 = self.deriv(state.alpha + dt * da3, bt, db4);
        let w = dt / 6.0;
        state.alpha += w * (da1 + 2.0 * da2 + 2.0 * da3 + da4);
        for j in 0..n {
            state.beta[j] += w * (db1[j] + 2.0 * (db2[j] + db3[j]) + db4[j]);
        }
    }

    fn norm(&self, state: &State) -> f64 {
        let beta_sq: f64 = state.beta.iter().map(|b| b.norm_sqr()).sum();
        state.alpha.norm_sqr() + 2.0 * self.dk * beta_sq
    }
}

struct Scratch {
    db1: Vec<Complex64>,
    db2: Vec<Complex64>,
    db3: Vec<Complex64>,
    db4: Vec<Complex64>,
    bt: Vec<Complex64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            db1: vec![Complex64::default(); n],
            db2: vec![Complex64::default(); n],
            db3: vec![Complex64::default(); n],
            db4: vec![Complex64::default(); n],
            bt: vec![Complex64::default(); n],
        }
    }
}

fn build_stepper<'m>(model: &'m CouplingModel, grid: &SimulationGrid) -> Result<Stepper<'m>> {
    let c = model.config.c_s;
    if grid.dt * grid.k_cut * c >= 0.5 {
        return Err(Error::InvalidConfig(format!(
            "dt·k_cut·c_s = {} exceeds the 0.5 stability margin",
            grid.dt * grid.k_cut * c
        )));
    }
    let k: Vec<f64> = (0..grid.n_modes()).map(|j| grid.mode_k(j)).collect();
    let g: Vec<f64> = k.iter().map(|&kj| model.eval(kj)).collect();
    Ok(Stepper {
        model,
        k,
        g,
        dk: grid.dk,
    })
}

/// Integrate the equations of motion from α = 1, β = 0.
pub fn simulate(model: &CouplingModel, grid: &SimulationGrid) -> Result<Trajectory> {
    let stepper = build_stepper(model, grid)?;
    let n = grid.n_modes();
    let steps = grid.n_steps();

    let mut state = State {
        alpha: Complex64::new(1.0, 0.0),
        beta: vec![Complex64::default(); n],
    };
    let mut scratch = Scratch::new(n);

    let mut alpha = Vec::with_capacity(steps + 1);
    let mut norm = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::with_capacity(steps / SNAPSHOT_STRIDE + 2);
    alpha.push(state.alpha);
    norm.push(stepper.norm(&state));
    snapshots.push(Snapshot {
        step: 0,
        beta: state.beta.clone(),
    });

    for step in 1..=steps {
        stepper.rk4_step(&mut state, grid.dt, &mut scratch);
        let nrm = stepper.norm(&state);
        if (nrm - 1.0).abs() > NORM_ABORT {
            return Err(Error::IntegratorFailure { step, norm: nrm });
        }
        alpha.push(state.alpha);
        norm.push(nrm);
        if step % SNAPSHOT_STRIDE == 0 || step == steps {
            snapshots.push(Snapshot {
                step,
                beta: state.beta.clone(),
            });
        }
    }

    Ok(Trajectory {
        grid: *grid,
        n_size: model.config.n_size,
        alpha,
        norm,
        snapshots,
    })
}

/// Slowly-varying real-space envelope magnitude |E(x)|² with
/// E(x) = Σ_k dk β_k e^{ikx} (carrier removed).
///
/// Errors if the sampling is coarser than π/k_cut, the Nyquist limit for the
/// |E|² beat structure.
pub fn phonon_envelope(traj: &Trajectory, snapshot_idx: usize, x_grid: &[f64]) -> Result<Vec<f64>> {
    let snap = traj
        .snapshots
        .get(snapshot_idx)
        .ok_or_else(|| Error::Domain(format!("no snapshot at index {snapshot_idx}")))?;
    let max_dx = std::f64::consts::PI / traj.grid.k_cut;
    for w in x_grid.windows(2) {
        let dx = (w[1] - w[0]).abs();
        if dx > max_dx * (1.0 + 1e-9) {
            return Err(Error::Aliasing { dx, max_dx });
        }
    }
    Ok(x_grid
        .iter()
        .map(|&x| envelope_at(traj, snap, x).norm_sqr())
        .collect())
}

fn envelope_at(traj: &Trajectory, snap: &Snapshot, x: f64) -> Complex64 {
    let grid = &traj.grid;
    let m = grid.half_modes() as f64;
    // phase recurrence over the uniform k ladder
    let step = Complex64::from_polar(1.0, grid.dk * x);
    let mut phase = Complex64::from_polar(1.0, -m * grid.dk * x);
    let mut acc = Complex64::default();
    for b in &snap.beta {
        acc += b * phase;
        phase *= step;
    }
    acc * grid.dk
}

/// Fraction of the phonon norm within |x| ≤ half_width at a stored snapshot.
///
/// The total is taken from momentum space (2πΣ|β|²dk, the envelope's exact
/// Parseval partner), so half_width → ∞ gives 1. Returns `None` while the
/// field carries no norm (e.g. at t = 0).
pub fn bound_fraction(
    traj: &Trajectory,
    snapshot_idx: usize,
    half_width: f64,
) -> Result<Option<f64>> {
    if !(half_width > 0.0) {
        return Err(Error::Domain(format!(
            "half_width must be positive, got {half_width}"
        )));
    }
    let snap = traj
        .snapshots
        .get(snapshot_idx)
        .ok_or_else(|| Error::Domain(format!("no snapshot at index {snapshot_idx}")))?;
    let grid = &traj.grid;
    let total: f64 =
        crate::params::TAU * grid.dk * snap.beta.iter().map(|b| b.norm_sqr()).sum::<f64>();
    if total < 1e-12 {
        return Ok(None);
    }
    let dx = std::f64::consts::PI / (8.0 * grid.k_cut);
    let steps = ((2.0 * half_width / dx).ceil() as usize).max(2);
    let dx = 2.0 * half_width / steps as f64;
    // trapezoid over [-W, W]
    let mut inside = 0.0;
    for i in 0..=steps {
        let x = -half_width + dx * i as f64;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        inside += w * envelope_at(traj, snap, x).norm_sqr();
    }
    inside *= dx;
    Ok(Some(inside / total))
}

/// Σ_x |E(x)|² dx over a uniform grid, for Parseval checks and emission.
pub fn envelope_norm(traj: &Trajectory, snapshot_idx: usize, x_grid: &[f64]) -> Result<f64> {
    let e = phonon_envelope(traj, snapshot_idx, x_grid)?;
    if x_grid.len() < 2 {
        return Err(Error::Domain("need at least two grid points".into()));
    }
    let dx = x_grid[1] - x_grid[0];
    Ok(e.iter().sum::<f64>() * dx)
}
