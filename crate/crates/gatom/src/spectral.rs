//! Power spectra of α(t), peak extraction, and the phase-matching solver for
//! the bounded atom sizes N_m.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::coupling::{CouplingKind, CouplingModel};
use crate::dynamics::{simulate, SimulationGrid, Trajectory};
use crate::error::{Error, Result};
use crate::params::PhysicalConfig;
use crate::poles;

/// Squared Fourier magnitude of α(t) on a shifted frequency axis.
///
/// Normalization: `power[j] = |dt·Σ_n α_n e^{−iω_j t_n}|²/(2π·T_total)`, so
/// Σ power·dω = (dt/T_total)·Σ|α_n|².
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    /// Angular frequencies, ascending, symmetric about 0.
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
    pub n_size: f64,
    /// Window descriptor; always "rectangular" here.
    pub window: &'static str,
    /// Duration of the (un-padded) record.
    pub t_total: f64,
}

impl PowerSpectrum {
    pub fn bin_width(&self) -> f64 {
        self.freqs[1] - self.freqs[0]
    }

    /// Bins with |ω| below this belong to the zero-frequency decay pedestal.
    pub fn pedestal_cutoff(&self) -> f64 {
        crate::params::TAU / (0.25 * self.t_total)
    }

    pub fn max_power(&self) -> f64 {
        self.power.iter().copied().fold(0.0, f64::max)
    }
}

/// Minimum record length for a spectrum.
const MIN_SAMPLES: usize = 16;
/// Zero-padding factor for peak resolution.
const ZERO_PAD: usize = 4;

/// Discrete Fourier transform of the α record, squared magnitude, with ×4
/// zero padding and a rectangular window.
pub fn power_spectrum(traj: &Trajectory) -> Result<PowerSpectrum> {
    spectrum_of(&traj.alpha, traj.grid.dt, traj.n_size)
}

/// Spectrum of an arbitrary uniformly sampled complex record.
pub fn spectrum_of(samples: &[Complex64], dt: f64, n_size: f64) -> Result<PowerSpectrum> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            got: n,
            need: MIN_SAMPLES,
        });
    }
    let n_fft = ZERO_PAD * n;
    let mut buf: Vec<Complex64> = Vec::with_capacity(n_fft);
    buf.extend_from_slice(samples);
    buf.resize(n_fft, Complex64::default());
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);

    let t_total = n as f64 * dt;
    let half = n_fft / 2;
    let scale = dt * dt / (crate::params::TAU * t_total);
    let mut freqs = Vec::with_capacity(n_fft);
    let mut power = Vec::with_capacity(n_fft);
    for i in 0..n_fft {
        let signed = i as f64 - half as f64;
        freqs.push(crate::params::TAU * signed / (n_fft as f64 * dt));
        power.push(buf[(i + half) % n_fft].norm_sqr() * scale);
    }
    Ok(PowerSpectrum {
        freqs,
        power,
        n_size,
        window: "rectangular",
        t_total,
    })
}

/// Local maxima outside the pedestal with power at least
/// `threshold`·max(power), sorted by power descending.
pub fn find_peaks(spec: &PowerSpectrum, threshold: f64) -> Result<Vec<(f64, f64)>> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Domain(format!(
            "threshold must lie in (0,1), got {threshold}"
        )));
    }
    let floor = threshold * spec.max_power();
    let mut peaks = local_maxima_off_pedestal(spec);
    peaks.retain(|&(_, p)| p >= floor);
    Ok(peaks)
}

fn local_maxima_off_pedestal(spec: &PowerSpectrum) -> Vec<(f64, f64)> {
    let cut = spec.pedestal_cutoff();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 1..spec.power.len() - 1 {
        if spec.freqs[i].abs() < cut {
            continue;
        }
        if spec.power[i] > spec.power[i - 1] && spec.power[i] > spec.power[i + 1] {
            peaks.push((spec.freqs[i], spec.power[i]));
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    peaks
}

/// Dominant off-pedestal line, if any.
pub fn dominant_peak(spec: &PowerSpectrum) -> Option<(f64, f64)> {
    local_maxima_off_pedestal(spec).into_iter().next()
}

// ---------------------------------------------------------------------------
// phase matching
// ---------------------------------------------------------------------------

/// Lorentzian-model bounded sizes: for each m = 1..=m_max the fixed point of
/// N·λ·Max_n[Im s_n(N)] = 2π·c_s·m, solved with the exact cubic roots by
/// bracketed bisection above the transition point.
pub fn phase_match_sizes(cfg: &PhysicalConfig, m_max: usize) -> Result<Vec<f64>> {
    if m_max < 1 {
        return Err(Error::Domain("m_max must be at least 1".into()));
    }
    let nt = poles::transition_point(cfg.gamma1, cfg.nu)?;
    let rabi = |n: f64| -> Result<f64> {
        let c = cfg.with_n_size(n)?;
        Ok(poles::lorentzian_poles(&c)?.rabi_freq)
    };
    let mut out = Vec::with_capacity(m_max);
    let mut lo = (nt * (1.0 + 1e-6)).max(1.0);
    for m in 1..=m_max {
        let target = crate::params::TAU * cfg.c_s * m as f64;
        let h = |n: f64| match rabi(n) {
            Ok(im) => n * cfg.lambda_idt * im - target,
            Err(_) => f64::NAN,
        };
        if !(h(lo) < 0.0) {
            return Err(Error::NoSolution(format!(
                "phase-match residual not negative at the bracket start for m = {m}"
            )));
        }
        let (blo, bhi) =
            crate::numerics::bisect::expand_bracket(h, lo, (2.0 * lo).max(nt * 2.0), 1e6).map_err(
                |_| Error::NoSolution(format!("no sign change for m = {m} over (N_T, 1e6]")),
            )?;
        let root = crate::numerics::bisect::bisect(h, blo, bhi, 1e-9 * bhi.max(1.0), 0.0)?;
        out.push(root);
        lo = root;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// bounded-size scan
// ---------------------------------------------------------------------------

/// One row of a bounded-size scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub n: u32,
    /// |ω| of the dominant off-pedestal line, if one exists.
    pub peak_freq: Option<f64>,
    /// Power of that line (0 when none).
    pub peak_power: f64,
    /// Global spectrum maximum (pedestal included), for relative measures.
    pub max_power: f64,
}

/// Grid used for spectral scans: the published discretization run four times
/// longer than the Fig.-4 freeze time, so persistent lines separate cleanly
/// from transient ones.
pub fn default_scan_grid() -> SimulationGrid {
    SimulationGrid::default_paper().with_t_final(4.0 * 267.0)
}

/// Simulate and transform every size in `n_values` (parallel across sizes).
pub fn scan_bounded_sizes(
    cfg: &PhysicalConfig,
    kind: CouplingKind,
    n_values: &[u32],
    grid: &SimulationGrid,
) -> Result<Vec<ScanRow>> {
    n_values
        .par_iter()
        .map(|&n| {
            let c = cfg.with_n_size(n as f64)?;
            let model = CouplingModel::new(kind, c)?;
            let traj = simulate(&model, grid)?;
            let spec = power_spectrum(&traj)?;
            let peak = dominant_peak(&spec);
            Ok(ScanRow {
                n,
                peak_freq: peak.map(|(w, _)| w.abs()),
                peak_power: peak.map(|(_, p)| p).unwrap_or(0.0),
                max_power: spec.max_power(),
            })
        })
        .collect()
}

/// Measured bounded sizes: strict local maxima of peak power across the scan.
pub fn bounded_sizes(rows: &[ScanRow]) -> Vec<u32> {
    let mut out = Vec::new();
    for i in 1..rows.len().saturating_sub(1) {
        if rows[i].peak_power > rows[i - 1].peak_power
            && rows[i].peak_power > rows[i + 1].peak_power
        {
            out.push(rows[i].n);
        }
    }
    out
}
