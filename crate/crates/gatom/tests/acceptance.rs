//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Expensive artifacts (the published-parameter runs and the bounded-size
//! scan) are computed once and shared across criteria.

use std::sync::OnceLock;

use num_complex::Complex64;

use gatom::coupling::{CouplingKind, CouplingModel};
use gatom::dynamics::{self, SimulationGrid, Trajectory};
use gatom::params::{MaterialInput, PhysicalConfig, TAU};
use gatom::poles;
use gatom::spectral::{self, ScanRow};

const GAMMA1_REL: f64 = 1e-5 * std::f64::consts::PI;

fn cfg(n: f64) -> PhysicalConfig {
    PhysicalConfig::natural(GAMMA1_REL, n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn report(name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {name}: PASS");
    } else {
        println!("criterion {name}: FAIL");
        for f in failures {
            println!("  - {f}");
        }
    }
    assert!(failures.is_empty(), "{name}: {failures:?}");
}

/// Published-parameter circuit-QAD runs at N = 45, 60, 75 (t_final = 267T).
fn paper_runs() -> &'static [(u32, Trajectory)] {
    static RUNS: OnceLock<Vec<(u32, Trajectory)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let grid = SimulationGrid::default_paper();
        [45u32, 60, 75]
            .iter()
            .map(|&n| {
                let model = CouplingModel::new(CouplingKind::CircuitQad, cfg(n as f64)).unwrap();
                (n, dynamics::simulate(&model, &grid).unwrap())
            })
            .collect()
    })
}

fn paper_run(n: u32) -> &'static Trajectory {
    &paper_runs().iter().find(|(m, _)| *m == n).unwrap().1
}

/// Bounded-size scan N ∈ [40, 140] on the spectral window.
fn scan() -> &'static [ScanRow] {
    static SCAN: OnceLock<Vec<ScanRow>> = OnceLock::new();
    SCAN.get_or_init(|| {
        let ns: Vec<u32> = (40..=140).collect();
        spectral::scan_bounded_sizes(
            &cfg(1.0),
            CouplingKind::CircuitQad,
            &ns,
            &spectral::default_scan_grid(),
        )
        .unwrap()
    })
}

#[test]
fn criterion_1_transition_point() {
    let mut fails = Vec::new();
    let nu = TAU;
    let nt = poles::transition_point(GAMMA1_REL * nu, nu).unwrap();
    if (nt - 14.2).abs() > 0.1 {
        fails.push(format!("N_T = {nt}, want 14.2 ± 0.1"));
    }
    let g = GAMMA1_REL * nu;
    let doubled = poles::transition_point(g / 8.0, nu).unwrap();
    let base = poles::transition_point(g, nu).unwrap();
    if rel(doubled, 2.0 * base) > 1e-12 {
        fails.push(format!(
            "scaling: N_T(γ/8) = {doubled} vs 2·N_T(γ) = {}",
            2.0 * base
        ));
    }
    report("1 (transition point)", &fails);
}

#[test]
fn criterion_2_material_chain() {
    let mut fails = Vec::new();
    let d = gatom::derive_material(&MaterialInput::gaas()).unwrap();
    let targets = [
        ("rho_prime", d.rho_prime, 14902.0),
        ("c_prime", d.c_prime, 28.73e10),
        ("e_prime", d.e_prime, -1.248),
        ("c_s", d.c_s_si, 4391.0),
        ("gamma1", d.gamma1_si, 0.34 * std::f64::consts::PI * 1e6),
    ];
    for (name, got, want) in targets {
        if rel(got, want) > 0.01 {
            fails.push(format!("{name} = {got}, want {want} within 1%"));
        }
    }
    report("2 (material chain)", &fails);
}

#[test]
fn criterion_3_pole_solver_grid() {
    let mut fails = Vec::new();
    let nu = TAU;
    let count = 20;
    let logspace = |lo: f64, hi: f64| -> Vec<f64> {
        (0..count)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
            .collect()
    };
    for &n in &logspace(1.0, 1e3) {
        for &g1_rel in &logspace(1e-7, 1e-3) {
            let c = PhysicalConfig::natural(g1_rel, n).unwrap();
            let p = match poles::lorentzian_poles(&c) {
                Ok(p) => p,
                Err(e) => {
                    fails.push(format!("solver failed at N={n}, γ₁={g1_rel}ν: {e}"));
                    continue;
                }
            };
            let mut sum = Complex64::default();
            for &s in &p.roots {
                sum += s;
                let residual = (s + Complex64::new(n.mul_add(s.re, nu), n * s.im)
                    * (n * n * c.gamma1 * nu)
                    / Complex64::new((2.0 * n).mul_add(s.re, nu), 2.0 * n * s.im).powi(2))
                .norm();
                if residual >= 1e-9 * nu {
                    fails.push(format!("residual {residual:e} at N={n}, γ₁={g1_rel}ν"));
                }
                if s.re > 1e-10 * nu {
                    fails.push(format!(
                        "causality: Re(s) = {} at N={n}, γ₁={g1_rel}ν",
                        s.re
                    ));
                }
            }
            if (sum + nu / n).norm() > 1e-8 * (nu / n) {
                fails.push(format!("Vieta sum {sum} vs −ν/N at N={n}, γ₁={g1_rel}ν"));
            }
        }
    }
    // asymptotic oscillatory pair at N = 1e6
    let p = poles::lorentzian_poles(&cfg(1e6)).unwrap();
    let target = 0.5 * (1e6 * GAMMA1_REL * nu * nu).sqrt();
    let pair: Vec<f64> = p
        .roots
        .iter()
        .filter(|s| s.im != 0.0)
        .map(|s| s.im.abs())
        .collect();
    if pair.len() != 2 {
        fails.push(format!(
            "expected an oscillatory pair at N=1e6, got {:?}",
            p.roots
        ));
    }
    for im in pair {
        if rel(im, target) > 0.01 {
            fails.push(format!("pair Im = {im} vs ±(1/2)√(Nγ₁ν) = {target}"));
        }
    }
    report("3 (pole solver grid)", &fails);
}

#[test]
fn criterion_4_analytic_numeric_cross_oracle() {
    let mut fails = Vec::new();
    let c = cfg(30.0);
    let model = CouplingModel::new(CouplingKind::Lorentzian, c).unwrap();
    // Doubled momentum cutoff keeps the Lorentzian tail truncation well below
    // the comparison tolerance; spacing and step are the published values.
    let d = SimulationGrid::default_paper();
    let grid = SimulationGrid::new(2.0 * d.k_cut, d.dk, d.dt, 100.0).unwrap();
    let traj = dynamics::simulate(&model, &grid).unwrap();
    let p = poles::lorentzian_poles(&c).unwrap();
    let mut worst = 0.0f64;
    for (i, a) in traj.alpha.iter().enumerate() {
        let t = traj.time(i);
        let analytic = poles::residue_reconstruct(&p, t).unwrap().norm_sqr();
        worst = worst.max((a.norm_sqr() - analytic).abs());
    }
    if worst > 0.02 {
        fails.push(format!(
            "|α|² residue-vs-simulation worst abs diff {worst} > 0.02"
        ));
    }

    for s in [
        Complex64::new(1e-3 * c.nu, 0.0),
        Complex64::new(0.05 * c.nu, 0.4 * c.nu),
        Complex64::new(0.4 * c.nu, -0.9 * c.nu),
        Complex64::new(c.nu, 0.0),
    ] {
        let q = poles::self_energy(&model, s).unwrap().value;
        let exact = poles::lorentzian_self_energy(&c, s);
        let r = (q - exact).norm() / exact.norm();
        if r > 1e-6 {
            fails.push(format!("χ quadrature mismatch {r:e} at s = {s}"));
        }
    }
    report("4 (analytic-numeric cross oracle)", &fails);
}

#[test]
fn criterion_5_bounded_atom_reproduction() {
    let mut fails = Vec::new();

    // revival: persistent excitation over the final 20T, long after t_b = NT
    let late_mean = |traj: &Trajectory| -> f64 {
        let n = traj.alpha.len();
        let window = (20.0 / traj.grid.dt) as usize;
        traj.alpha[n - window..]
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            / window as f64
    };
    let (m45, m60, m75) = (
        late_mean(paper_run(45)),
        late_mean(paper_run(60)),
        late_mean(paper_run(75)),
    );
    if m45 < 0.05 {
        fails.push(format!(
            "N=45 late-window |α|² = {m45}, expected a revival ≥ 0.05"
        ));
    }
    if m75 < 0.05 {
        fails.push(format!(
            "N=75 late-window |α|² = {m75}, expected a revival ≥ 0.05"
        ));
    }
    if m60 > 0.01 {
        fails.push(format!(
            "N=60 late-window |α|² = {m60}, expected decay < 0.01"
        ));
    }

    // confinement: phonon norm inside the transducer at t_f = 267T
    let frac = |n: u32| -> f64 {
        let traj = paper_run(n);
        let last = traj.snapshots.len() - 1;
        dynamics::bound_fraction(traj, last, n as f64 / 2.0)
            .unwrap()
            .unwrap()
    };
    let (f45, f60, f75) = (frac(45), frac(60), frac(75));
    if f45 < 5.0 * f60 {
        fails.push(format!("bound fraction N=45 ({f45}) not ≥ 5× N=60 ({f60})"));
    }
    if f75 < 5.0 * f60 {
        fails.push(format!("bound fraction N=75 ({f75}) not ≥ 5× N=60 ({f60})"));
    }

    // spectra: on the scan window, N = 60 shows no line above 10% of the
    // scan-wide maximum (the measure behind the published spectral map)
    let rows = scan();
    let max_peak = rows.iter().map(|r| r.peak_power).fold(0.0, f64::max);
    let row60 = rows.iter().find(|r| r.n == 60).unwrap();
    if row60.peak_power > 0.10 * max_peak {
        fails.push(format!(
            "N=60 off-pedestal peak {} exceeds 10% of scan max {}",
            row60.peak_power, max_peak
        ));
    }
    report("5 (bounded-atom reproduction)", &fails);
}

#[test]
fn criterion_6_phase_matching() {
    let mut fails = Vec::new();
    let rows = scan();
    let measured = spectral::bounded_sizes(rows);
    if measured.len() < 3 {
        fails.push(format!("scan found only {measured:?}"));
    }
    if let Some(&n1) = measured.first() {
        if (n1 as f64 - 45.0).abs() > 1.0 {
            fails.push(format!("first power maximum at N = {n1}, want 45 ± 1"));
        }
    }
    if let Some(&n2) = measured.get(1) {
        if (n2 as f64 - 75.0).abs() > 1.0 {
            fails.push(format!("second power maximum at N = {n2}, want 75 ± 1"));
        }
    }
    let lor = spectral::phase_match_sizes(&cfg(1.0), measured.len()).unwrap();
    for (i, (&n_meas, n_lor)) in measured.iter().zip(&lor).enumerate() {
        let m = i + 1;
        let ratio = n_meas as f64 / n_lor;
        if m <= 2 {
            if !(0.85..=1.0).contains(&ratio) {
                fails.push(format!("m={m}: ratio {ratio} outside [0.85, 1.0]"));
            }
        } else if (ratio - 0.93).abs() > 0.03 {
            fails.push(format!("m={m}: ratio {ratio} outside 0.93 ± 0.03"));
        }
    }
    report("6 (phase matching)", &fails);
}

#[test]
fn criterion_7_tophat_bic() {
    use rand::{Rng, SeedableRng};
    let mut fails = Vec::new();
    let nu = TAU;
    // sampled where the band-edge offset is resolvable in f64 (the root
    // distance from ν/N scales as exp(−πν/N³γ₁))
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x9a70);
    for case in 0..10 {
        let n = (30.0f64.ln() + rng.gen::<f64>() * (100.0f64.ln() - 30.0f64.ln())).exp();
        let g1_rel = (1e-4f64.ln() + rng.gen::<f64>() * (1e-3f64.ln() - 1e-4f64.ln())).exp();
        let c = PhysicalConfig::natural(g1_rel, n).unwrap();
        let (w1, w2) = match poles::tophat_bic_roots(&c) {
            Ok(v) => v,
            Err(e) => {
                fails.push(format!("case {case} (N={n:.2}, γ₁={g1_rel:e}ν): {e}"));
                continue;
            }
        };
        if w1 != -w2 {
            fails.push(format!("case {case}: roots not an odd pair: {w1}, {w2}"));
        }
        if w2 <= c.nu / n {
            fails.push(format!("case {case}: ω₂ = {w2} inside the band |ω| ≤ ν/N"));
        }
        let resid = poles::tophat_bic_equation(&c, w2).abs();
        if resid >= 1e-9 * nu {
            fails.push(format!("case {case}: residual {resid:e}"));
        }
        // dense sign-scan oracle over (ν/N, 10ν]
        let edge = c.nu / n;
        let steps = 2_000_000usize;
        let lo = edge * (1.0 + 1e-9);
        let dx = (10.0 * nu - lo) / steps as f64;
        let mut prev = poles::tophat_bic_equation(&c, lo);
        let mut found = None;
        for i in 1..=steps {
            let w = lo + dx * i as f64;
            let v = poles::tophat_bic_equation(&c, w);
            if prev < 0.0 && v >= 0.0 {
                found = Some(w);
                break;
            }
            prev = v;
        }
        match found {
            Some(w_scan) => {
                if (w_scan - w2).abs() > dx {
                    fails.push(format!(
                        "case {case}: scan {w_scan} vs solver {w2} (step {dx:e})"
                    ));
                }
            }
            None => fails.push(format!("case {case}: sign scan found no crossing")),
        }
    }
    report("7 (top-hat bound states)", &fails);
}

#[test]
fn criterion_8_conservation() {
    let mut fails = Vec::new();

    // norm conservation on the published runs
    for (n, traj) in paper_runs() {
        let worst = traj
            .norm
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max);
        if worst > 1e-6 {
            fails.push(format!("N={n}: norm drift {worst:e} > 1e-6"));
        }
    }

    // envelope Parseval at the final snapshot of the N=45 run
    let traj = paper_run(45);
    let last = traj.snapshots.len() - 1;
    let grid = &traj.grid;
    let box_len = TAU / grid.dk;
    let samples = 4 * grid.n_modes() + 3;
    let dx = box_len / samples as f64;
    let xs: Vec<f64> = (0..samples)
        .map(|i| -box_len / 2.0 + dx * i as f64)
        .collect();
    let real_space = dynamics::envelope_norm(traj, last, &xs).unwrap();
    let momentum: f64 = TAU
        * grid.dk
        * traj.snapshots[last]
            .beta
            .iter()
            .map(|b| b.norm_sqr())
            .sum::<f64>();
    if (real_space - momentum).abs() > 1e-4 * momentum {
        fails.push(format!(
            "Parseval: real-space {real_space} vs momentum {momentum}"
        ));
    }

    // fourth-order time convergence over the full published duration
    let model = CouplingModel::new(CouplingKind::Lorentzian, cfg(30.0)).unwrap();
    let coarse = dynamics::simulate(&model, &SimulationGrid::default_paper()).unwrap();
    let mut halved = SimulationGrid::default_paper();
    halved.dt = 0.05;
    let fine = dynamics::simulate(&model, &halved).unwrap();
    let d = (coarse.alpha.last().unwrap().norm_sqr() - fine.alpha.last().unwrap().norm_sqr()).abs();
    if d > 1e-5 {
        fails.push(format!("dt halving moved |α(t_f)|² by {d:e} > 1e-5"));
    }
    report("8 (conservation)", &fails);
}
