//! `gatom-sim`: deterministic CSV/JSON emission for the bounded giant-atom
//! pipeline (coupling shapes, pole branches, heatmaps, time evolution,
//! spectra, phase matching, and the material chain).

// Flag validation uses the negated forms (`!(x > 0.0)`) so NaN fails closed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gatom::config::{self, PhysicalSection};
use gatom::coupling::{CouplingKind, CouplingModel};
use gatom::dynamics::{self, SimulationGrid};
use gatom::params::PhysicalConfig;
use gatom::poles;
use gatom::spectral;
use gatom::Error as GError;

const DEFAULT_GAMMA1_REL: f64 = 1e-5 * std::f64::consts::PI;

#[derive(Parser)]
#[command(name = "gatom-sim", version, about = "Bounded giant-atom pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PhysicalArgs {
    /// Single-cell rate over the transition frequency, γ₁/ν.
    #[arg(long)]
    gamma1_rel: Option<f64>,
    /// Atom size (transducer finger count).
    #[arg(long)]
    n: Option<f64>,
    /// Config file supplying `[physical]` defaults.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Momentum cutoff (units 1/λ).
    #[arg(long)]
    k_cut: Option<f64>,
    /// Momentum spacing (units 1/λ).
    #[arg(long)]
    dk: Option<f64>,
    /// Time step (units T).
    #[arg(long)]
    dt: Option<f64>,
    /// Final time (units T).
    #[arg(long)]
    t_final: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit (k, g) for a coupling model over a momentum range.
    Coupling {
        #[arg(long, default_value = "cqad")]
        model: String,
        #[command(flatten)]
        physical: PhysicalArgs,
        #[arg(long, default_value_t = -0.2 * std::f64::consts::PI, allow_negative_numbers = true)]
        k_min: f64,
        #[arg(long, default_value_t = 0.2 * std::f64::consts::PI, allow_negative_numbers = true)]
        k_max: f64,
        #[arg(long, default_value_t = 1001)]
        k_count: usize,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Emit pole branches, γ, and λ_R across an atom-size range.
    Poles {
        #[command(flatten)]
        physical: PhysicalArgs,
        #[arg(long, default_value_t = 1.0)]
        n_min: f64,
        #[arg(long, default_value_t = 100.0)]
        n_max: f64,
        #[arg(long, default_value_t = 1.0)]
        n_step: f64,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Emit the relaxation-rate grid over (N, γ₁), log-spaced.
    Heatmap {
        #[arg(long, default_value_t = 1.0)]
        n_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        n_max: f64,
        #[arg(long, default_value_t = 30)]
        n_count: usize,
        #[arg(long, default_value_t = 1e-7)]
        gamma1_rel_min: f64,
        #[arg(long, default_value_t = 1e-3)]
        gamma1_rel_max: f64,
        #[arg(long, default_value_t = 30)]
        gamma1_count: usize,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Emit the top-hat bound-state frequencies.
    Bic {
        #[command(flatten)]
        physical: PhysicalArgs,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Integrate the single-excitation dynamics; emits `<prefix>_alpha.csv`
    /// and `<prefix>_envelope.csv`.
    Simulate {
        #[arg(long, default_value = "cqad")]
        model: String,
        #[command(flatten)]
        physical: PhysicalArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Envelope snapshot times; defaults to the final time.
        #[arg(long)]
        snapshot_time: Vec<f64>,
        #[arg(long, default_value = "gatom")]
        out_prefix: String,
    },
    /// Emit the power spectrum of α(t) for one atom size.
    Spectrum {
        #[arg(long, default_value = "cqad")]
        model: String,
        #[command(flatten)]
        physical: PhysicalArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Compare Lorentzian bounded sizes with scan-measured ones.
    PhaseMatch {
        #[command(flatten)]
        physical: PhysicalArgs,
        #[arg(long, default_value_t = 5)]
        m_max: usize,
        #[arg(long, default_value_t = 40)]
        n_scan_min: u32,
        #[arg(long, default_value_t = 140)]
        n_scan_max: u32,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
    /// Run the material chain from a config file; emits JSON.
    Material {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, short, default_value = "-")]
        output: String,
    },
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("GATOM_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error kind={} msg=\"{}\"", error_kind(&e), e);
            ExitCode::from(exit_code(&e))
        }
    }
}

fn error_kind(e: &GError) -> &'static str {
    match e {
        GError::InvalidConfig(_) => "invalid-config",
        GError::InvalidMaterial(_) => "invalid-material",
        GError::Domain(_) => "domain",
        GError::Numerical(_) => "numerical",
        GError::DegeneratePoles { .. } => "degenerate-poles",
        GError::IntegratorFailure { .. } => "integrator-failure",
        GError::Aliasing { .. } => "aliasing",
        GError::InsufficientData { .. } => "insufficient-data",
        GError::NoSolution(_) => "no-solution",
        GError::ConfigParse(_) => "config-parse",
    }
}

fn exit_code(e: &GError) -> u8 {
    match e {
        GError::InvalidConfig(_)
        | GError::InvalidMaterial(_)
        | GError::Domain(_)
        | GError::Aliasing { .. }
        | GError::InsufficientData { .. }
        | GError::ConfigParse(_) => 3,
        GError::Numerical(_)
        | GError::DegeneratePoles { .. }
        | GError::IntegratorFailure { .. }
        | GError::NoSolution(_) => 4,
    }
}

/// Shortest decimal representation that round-trips, capped at 12 significant
/// digits, so reruns diff clean.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    for prec in 0..12 {
        let s = format!("{x:.prec$e}");
        if s.parse::<f64>() == Ok(x) {
            return s;
        }
    }
    format!("{x:.11e}")
}

fn open_out(path: &str) -> io::Result<Box<dyn Write>> {
    Ok(if path == "-" {
        Box::new(BufWriter::new(io::stdout()))
    } else {
        Box::new(BufWriter::new(File::create(path)?))
    })
}

struct Resolved {
    section: PhysicalSection,
}

impl Resolved {
    fn load(args: &PhysicalArgs) -> Result<Self, GError> {
        let mut section = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| GError::ConfigParse(format!("{}: {e}", path.display())))?;
                config::parse(&text)?.physical
            }
            None => PhysicalSection::default(),
        };
        if args.gamma1_rel.is_some() {
            section.gamma1_rel = args.gamma1_rel;
        }
        if args.n.is_some() {
            section.n = args.n;
        }
        Ok(Self { section })
    }

    fn physical(&self, default_n: f64) -> Result<PhysicalConfig, GError> {
        PhysicalConfig::natural(
            self.section.gamma1_rel.unwrap_or(DEFAULT_GAMMA1_REL),
            self.section.n.unwrap_or(default_n),
        )
    }

    fn grid(&self, args: &GridArgs, default_t_final: f64) -> Result<SimulationGrid, GError> {
        let d = SimulationGrid::default_paper();
        SimulationGrid::new(
            args.k_cut.or(self.section.k_cut).unwrap_or(d.k_cut),
            args.dk.or(self.section.dk).unwrap_or(d.dk),
            args.dt.or(self.section.dt).unwrap_or(d.dt),
            args.t_final
                .or(self.section.t_final)
                .unwrap_or(default_t_final),
        )
    }
}

fn io_err(e: io::Error) -> GError {
    GError::ConfigParse(format!("io: {e}"))
}

fn run(cmd: Command) -> Result<(), GError> {
    match cmd {
        Command::Coupling {
            model,
            physical,
            k_min,
            k_max,
            k_count,
            output,
        } => {
            let res = Resolved::load(&physical)?;
            let cfg = res.physical(30.0)?;
            let kind: CouplingKind = model.parse()?;
            let m = CouplingModel::new(kind, cfg)?;
            if k_count < 2 || !(k_max > k_min) {
                return Err(GError::InvalidConfig(
                    "need k_max > k_min and k_count >= 2".into(),
                ));
            }
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "k,g").map_err(io_err)?;
            for i in 0..k_count {
                let k = k_min + (k_max - k_min) * i as f64 / (k_count - 1) as f64;
                writeln!(out, "{},{}", fmt(k), fmt(m.eval(k))).map_err(io_err)?;
            }
            Ok(())
        }
        Command::Poles {
            physical,
            n_min,
            n_max,
            n_step,
            output,
        } => {
            let res = Resolved::load(&physical)?;
            let base = res.physical(1.0)?;
            if !(n_step > 0.0) || !(n_max >= n_min) {
                return Err(GError::InvalidConfig(
                    "need n_max >= n_min and n_step > 0".into(),
                ));
            }
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "n,re_s1,re_s2,re_s3,im_s1,im_s2,im_s3,gamma,lambda_r")
                .map_err(io_err)?;
            let mut n = n_min;
            while n <= n_max * (1.0 + 1e-12) {
                let p = poles::lorentzian_poles(&base.with_n_size(n)?)?;
                let lr = poles::rabi_wavelength(&p, base.c_s);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    fmt(n),
                    fmt(p.roots[0].re),
                    fmt(p.roots[1].re),
                    fmt(p.roots[2].re),
                    fmt(p.roots[0].im),
                    fmt(p.roots[1].im),
                    fmt(p.roots[2].im),
                    fmt(poles::relaxation_rate(&p)),
                    fmt(lr.unwrap_or(f64::INFINITY)),
                )
                .map_err(io_err)?;
                n += n_step;
            }
            Ok(())
        }
        Command::Heatmap {
            n_min,
            n_max,
            n_count,
            gamma1_rel_min,
            gamma1_rel_max,
            gamma1_count,
            output,
        } => {
            if n_count < 2 || gamma1_count < 2 || !(n_min > 0.0) || !(gamma1_rel_min > 0.0) {
                return Err(GError::InvalidConfig(
                    "heatmap needs positive log-spaced ranges".into(),
                ));
            }
            let logspace = |lo: f64, hi: f64, count: usize| -> Vec<f64> {
                (0..count)
                    .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
                    .collect()
            };
            let ns = logspace(n_min.max(1.0), n_max, n_count);
            let gs = logspace(gamma1_rel_min, gamma1_rel_max, gamma1_count);
            use rayon::prelude::*;
            let cells: Result<Vec<(f64, f64, f64)>, GError> = ns
                .iter()
                .flat_map(|&n| gs.iter().map(move |&g| (n, g)))
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|(n, g)| {
                    let cfg = PhysicalConfig::natural(g, n)?;
                    let p = poles::lorentzian_poles(&cfg)?;
                    Ok((n, g, poles::relaxation_rate(&p)))
                })
                .collect();
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "n,gamma1_rel,gamma").map_err(io_err)?;
            for (n, g, rate) in cells? {
                writeln!(out, "{},{},{}", fmt(n), fmt(g), fmt(rate)).map_err(io_err)?;
            }
            Ok(())
        }
        Command::Bic { physical, output } => {
            let res = Resolved::load(&physical)?;
            let cfg = res.physical(30.0)?;
            let (w1, w2) = poles::tophat_bic_roots(&cfg)?;
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "n,gamma1_rel,omega1,omega2,residual").map_err(io_err)?;
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt(cfg.n_size),
                fmt(cfg.gamma1_rel()),
                fmt(w1),
                fmt(w2),
                fmt(poles::tophat_bic_equation(&cfg, w2).abs()),
            )
            .map_err(io_err)?;
            Ok(())
        }
        Command::Simulate {
            model,
            physical,
            grid,
            snapshot_time,
            out_prefix,
        } => {
            let res = Resolved::load(&physical)?;
            let cfg = res.physical(75.0)?;
            let kind: CouplingKind = model.parse()?;
            let m = CouplingModel::new(kind, cfg)?;
            let grid = res.grid(&grid, SimulationGrid::default_paper().t_final)?;
            let traj = dynamics::simulate(&m, &grid)?;

            let mut out = open_out(&format!("{out_prefix}_alpha.csv")).map_err(io_err)?;
            writeln!(out, "t,alpha_sq,norm").map_err(io_err)?;
            for (i, a) in traj.alpha.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{}",
                    fmt(traj.time(i)),
                    fmt(a.norm_sqr()),
                    fmt(traj.norm[i])
                )
                .map_err(io_err)?;
            }
            drop(out);

            let times = if snapshot_time.is_empty() {
                vec![grid.t_final]
            } else {
                snapshot_time
            };
            let half_span = cfg.c_s * grid.t_final + cfg.n_size * cfg.lambda_idt;
            let dx = std::f64::consts::PI / (4.0 * grid.k_cut);
            let count = (2.0 * half_span / dx).ceil() as usize + 1;
            let xs: Vec<f64> = (0..count).map(|i| -half_span + dx * i as f64).collect();
            let mut envs: Vec<(f64, Vec<f64>)> = Vec::new();
            for &t in &times {
                let idx = traj
                    .snapshot_index_at(t)
                    .ok_or_else(|| GError::Domain(format!("no snapshot near t = {t}")))?;
                envs.push((t, dynamics::phonon_envelope(&traj, idx, &xs)?));
            }
            let mut out = open_out(&format!("{out_prefix}_envelope.csv")).map_err(io_err)?;
            let header: Vec<String> = envs
                .iter()
                .map(|(t, _)| format!("psi_sq_t{}", fmt(*t)))
                .collect();
            writeln!(out, "x,{}", header.join(",")).map_err(io_err)?;
            for (i, &x) in xs.iter().enumerate() {
                let row: Vec<String> = envs.iter().map(|(_, e)| fmt(e[i])).collect();
                writeln!(out, "{},{}", fmt(x), row.join(",")).map_err(io_err)?;
            }
            Ok(())
        }
        Command::Spectrum {
            model,
            physical,
            grid,
            output,
        } => {
            let res = Resolved::load(&physical)?;
            let cfg = res.physical(75.0)?;
            let kind: CouplingKind = model.parse()?;
            let m = CouplingModel::new(kind, cfg)?;
            let grid = res.grid(&grid, spectral::default_scan_grid().t_final)?;
            let traj = dynamics::simulate(&m, &grid)?;
            let spec = spectral::power_spectrum(&traj)?;
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "omega,power").map_err(io_err)?;
            for (w, p) in spec.freqs.iter().zip(&spec.power) {
                writeln!(out, "{},{}", fmt(*w), fmt(*p)).map_err(io_err)?;
            }
            Ok(())
        }
        Command::PhaseMatch {
            physical,
            m_max,
            n_scan_min,
            n_scan_max,
            grid,
            output,
        } => {
            let res = Resolved::load(&physical)?;
            let cfg = res.physical(1.0)?;
            if n_scan_max < n_scan_min {
                return Err(GError::InvalidConfig(
                    "need n_scan_max >= n_scan_min".into(),
                ));
            }
            let grid = res.grid(&grid, spectral::default_scan_grid().t_final)?;
            let lor = spectral::phase_match_sizes(&cfg, m_max)?;
            let ns: Vec<u32> = (n_scan_min..=n_scan_max).collect();
            let rows = spectral::scan_bounded_sizes(&cfg, CouplingKind::CircuitQad, &ns, &grid)?;
            let measured = spectral::bounded_sizes(&rows);
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(out, "m,n_lor,n_cqad,ratio").map_err(io_err)?;
            for (i, n_lor) in lor.iter().enumerate() {
                let (n_meas, ratio) = match measured.get(i) {
                    Some(&nm) => (fmt(nm as f64), fmt(nm as f64 / n_lor)),
                    None => (String::new(), String::new()),
                };
                writeln!(out, "{},{},{},{}", i + 1, fmt(*n_lor), n_meas, ratio).map_err(io_err)?;
            }
            Ok(())
        }
        Command::Material {
            config: path,
            output,
        } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| GError::ConfigParse(format!("{}: {e}", path.display())))?;
            let parsed = config::parse(&text)?;
            let material = parsed
                .material
                .ok_or_else(|| GError::ConfigParse("config has no [material] section".into()))?;
            let d = gatom::derive_material(&material)?;
            let natural = gatom::to_natural_units(&d, material.nu_si)?;
            let json = serde_json::json!({
                "rho_prime_kg_m3": d.rho_prime,
                "c_prime_n_m2": d.c_prime,
                "e_prime_c_m2": d.e_prime,
                "c_s_m_s": d.c_s_si,
                "g0_sqrt_m_rad_s": d.g0,
                "g0_sqrt_um_mhz": d.g0_microunits(),
                "gamma1_rad_s": d.gamma1_si,
                "gamma1_rel": natural.gamma1_rel(),
                "nu_si_rad_s": material.nu_si,
            });
            let mut out = open_out(&output).map_err(io_err)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&json).expect("static json")
            )
            .map_err(io_err)?;
            Ok(())
        }
    }
}
