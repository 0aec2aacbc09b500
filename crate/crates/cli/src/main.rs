//! `rdpml` — experiment driver and inspection tools for the reflectionless
//! discrete PML wave schemes.
//!
//! Experiment subcommands read an optional flat key-value config file and
//! accept per-key overrides; they exit nonzero when an acceptance threshold
//! in the run fails. Inspection subcommands (`stencil`, `dispersion`,
//! `helmholtz`) print tables or CSV.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use rdpml_core::dispersion::{
    char_poly, decay_factor, discrete_wavenumbers, dispersion_map, DampingProfile,
};
use rdpml_core::experiments::{
    fmt_g, run_convergence_1d, run_evanescent, run_helmholtz_compare, run_pml_width_2d,
    run_reflect_1d, run_reflect_2d, run_waveguide, ExperimentConfig, ExperimentId,
};
use rdpml_core::helmholtz::{
    assemble_full, assemble_reduced, point_source, solve, solve_full, sparsity_report, Truncation,
};
use rdpml_core::stencil::StencilCoeffs;
use rdpml_core::{Error, Result};

#[derive(Parser)]
#[command(name = "rdpml", version, about = "Reflectionless discrete PML wave experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the symmetric Laplacian stencil weights for half-width p.
    Stencil {
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        h: f64,
    },
    /// Discrete dispersion tools.
    Dispersion {
        #[command(subcommand)]
        cmd: DispersionCmd,
    },
    /// Frequency-domain systems.
    Helmholtz {
        #[command(subcommand)]
        cmd: HelmholtzCmd,
    },
    /// 1D convergence study against the exact free-space solution.
    Convergence1d(RunArgs),
    /// 1D reflection measure against a larger-domain reference.
    Reflect1d(RunArgs),
    /// 2D reflection measure on the square domain.
    Reflect2d(RunArgs),
    /// Layer-width refinement study of the 2D reflection error.
    #[command(name = "pml-width-2d")]
    PmlWidth2d(RunArgs),
    /// Driven waveguide with a wall-terminated layer.
    Waveguide(RunArgs),
    /// Short-duct evanescent study with one- and two-stage layers.
    Evanescent(RunArgs),
    /// Full- versus reduced-system comparison in the frequency domain.
    #[command(name = "helmholtz-compare")]
    HelmholtzCompare(RunArgs),
}

#[derive(Subcommand)]
enum DispersionCmd {
    /// Characteristic roots and discrete wavenumbers.
    Roots {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        h: f64,
    },
    /// Scalar field |log P_p(2 cos(xi h); lambda)| over a complex-xi box.
    Map {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        lambda_re: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_im: f64,
        #[arg(long)]
        re_min: f64,
        #[arg(long)]
        re_max: f64,
        #[arg(long)]
        im_min: f64,
        #[arg(long)]
        im_max: f64,
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-node decay factor of the discrete stretching.
    Rho {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        h: f64,
        #[arg(long)]
        xi_re: f64,
        #[arg(long, default_value_t = 0.0)]
        xi_im: f64,
    },
}

#[derive(Subcommand)]
enum HelmholtzCmd {
    /// Assemble and solve the 1D system; emits the wavefield as CSV.
    Solve {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        omega: f64,
        /// Node count of the standard geometry (domain length 10, damped
        /// from x = 0 on).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "full")]
        system: String,
        #[arg(long, default_value = "periodic")]
        truncation: String,
        /// Source: `point:<index>` or `file:<csv>` (rows `re,im`).
        #[arg(long, default_value = "point:0")]
        rhs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the sparsity pattern as CSV (row,col) plus a block summary.
    Pattern {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "full")]
        system: String,
        #[arg(long, default_value = "periodic")]
        truncation: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Common experiment arguments: a config file plus per-key overrides.
#[derive(Args)]
struct RunArgs {
    /// Flat key-value config file (`#` comments allowed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Additional `key=value` overrides, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    orders: Option<String>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pml_len: Option<f64>,
    #[arg(long)]
    outdir: Option<PathBuf>,
}

impl RunArgs {
    fn build(&self, id: ExperimentId) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let cfg = ExperimentConfig::parse(&text)?;
                if cfg.experiment != id {
                    return Err(Error::Config(format!(
                        "config file is for '{}', but the '{}' subcommand was invoked",
                        cfg.experiment, id
                    )));
                }
                cfg
            }
            None => ExperimentConfig::default_for(id),
        };
        for kv in &self.sets {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(v) = &self.orders {
            cfg.set("orders", v)?;
        }
        if let Some(v) = self.h {
            cfg.h = v;
        }
        if let Some(v) = self.h2 {
            cfg.h2 = v;
        }
        if let Some(v) = &self.sigma {
            cfg.set("sigma", v)?;
        }
        if let Some(v) = self.t_final {
            cfg.t_final = v;
        }
        if let Some(v) = self.omega {
            cfg.omega = v;
        }
        if let Some(v) = &self.variant {
            cfg.variant = v.clone();
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.pml_len {
            cfg.pml_len = v;
        }
        if let Some(v) = &self.outdir {
            cfg.outdir = v.clone();
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more acceptance thresholds failed (see summary.csv)");
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Stencil { p, h } => {
            let s = StencilCoeffs::new(p, h)?;
            println!("order {} stencil, h = {}", s.order(), fmt_g(h));
            println!("r,exact (a_r h^2),decimal (a_r)");
            for r in -(p as isize)..=(p as isize) {
                println!("{},{},{}", r, s.exact_scaled(r.unsigned_abs()), fmt_g(s.weight(r)));
            }
            Ok(true)
        }
        Cmd::Dispersion { cmd } => dispersion_cmd(cmd),
        Cmd::Helmholtz { cmd } => helmholtz_cmd(cmd),
        Cmd::Convergence1d(args) => {
            let cfg = args.build(ExperimentId::Convergence1d)?;
            let res = run_convergence_1d(&cfg)?;
            for (p, slope) in &res.slopes {
                println!("order {}: fitted slope {:.3} (target {})", 2 * p, slope, 2 * p);
            }
            Ok(res.pass)
        }
        Cmd::Reflect1d(args) => {
            let cfg = args.build(ExperimentId::Reflect1d)?;
            let res = run_reflect_1d(&cfg)?;
            for (p, m) in &res.long_max {
                println!("order {}: long-layer max E = {}", 2 * p, fmt_g(*m));
            }
            for (p, m) in &res.short_max {
                println!("order {}: short-layer max E = {}", 2 * p, fmt_g(*m));
            }
            Ok(res.pass)
        }
        Cmd::Reflect2d(args) => {
            let cfg = args.build(ExperimentId::Reflect2d)?;
            let res = run_reflect_2d(&cfg)?;
            println!("re-entry at t = {:.4}", res.t_reentry);
            for (p, m) in &res.pre_reentry_max {
                println!("order {}: max E before re-entry = {}", 2 * p, fmt_g(*m));
            }
            Ok(res.pass)
        }
        Cmd::PmlWidth2d(args) => {
            let cfg = args.build(ExperimentId::PmlWidth2d)?;
            let res = run_pml_width_2d(&cfg)?;
            for (p, h, n_pml, e) in &res.rows {
                println!("order {}, h = {}: {} layer nodes, E_h = {}", 2 * p, h, n_pml, fmt_g(*e));
            }
            Ok(res.pass)
        }
        Cmd::Waveguide(args) => {
            let cfg = args.build(ExperimentId::Waveguide)?;
            let res = run_waveguide(&cfg)?;
            for (p, m) in &res.emax {
                println!("order {}: max E = {}", 2 * p, fmt_g(*m));
            }
            for (p, e) in &res.phase_err {
                println!("order {}: centerline phase drift = {:.4}", 2 * p, e);
            }
            Ok(res.pass)
        }
        Cmd::Evanescent(args) => {
            let cfg = args.build(ExperimentId::Evanescent)?;
            let res = run_evanescent(&cfg)?;
            for (name, two, m) in &res.late_max {
                println!(
                    "{name} {}: late-window max E = {}",
                    if *two { "two-stage" } else { "one-stage" },
                    fmt_g(*m)
                );
            }
            println!("u2 one-stage / two-stage ratio = {:.2}", res.ratio_u2);
            Ok(res.pass)
        }
        Cmd::HelmholtzCompare(args) => {
            let cfg = args.build(ExperimentId::HelmholtzCompare)?;
            let res = run_helmholtz_compare(&cfg)?;
            for (p, w, e) in &res.rel_errs {
                println!("order {}, omega = {}: relative deviation {}", 2 * p, w, fmt_g(*e));
            }
            println!("transport inverse residual = {}", fmt_g(res.cinv_err));
            println!("physical block identical: {}", res.a11_exact);
            Ok(res.pass)
        }
    }
}

fn dispersion_cmd(cmd: DispersionCmd) -> Result<bool> {
    match cmd {
        DispersionCmd::Roots { p, omega, h } => {
            let st = StencilCoeffs::new(p, h)?;
            let poly = char_poly(&st, Complex64::new(omega * omega, 0.0));
            let modes = discrete_wavenumbers(&poly, h)?;
            println!("order {}, omega = {}, h = {}", 2 * p, omega, h);
            println!("r,re_z,im_z,re_xi,im_xi,degenerate");
            for (i, (z, xi)) in modes.roots.iter().zip(modes.wavenumbers.iter()).enumerate() {
                println!(
                    "{},{},{},{},{},{}",
                    i + 1,
                    fmt_g(z.re),
                    fmt_g(z.im),
                    fmt_g(xi.re),
                    fmt_g(xi.im),
                    modes.degenerate[i]
                );
            }
            Ok(true)
        }
        DispersionCmd::Map {
            p,
            h,
            lambda_re,
            lambda_im,
            re_min,
            re_max,
            im_min,
            im_max,
            resolution,
            out,
        } => {
            let st = StencilCoeffs::new(p, h)?;
            let grid = dispersion_map(
                &st,
                Complex64::new(lambda_re, lambda_im),
                (re_min, re_max),
                (im_min, im_max),
                (resolution, resolution),
            )?;
            let mut text = String::from("re_xi,im_xi,value\n");
            for (re, im, v) in grid {
                text.push_str(&format!("{},{},{}\n", fmt_g(re), fmt_g(im), fmt_g(v)));
            }
            emit(out, &text)?;
            Ok(true)
        }
        DispersionCmd::Rho { sigma, omega, h, xi_re, xi_im } => {
            let rho = decay_factor(sigma, Complex64::new(xi_re, xi_im), omega, h)?;
            println!("|rho| = {}", fmt_g(rho.norm()));
            println!("arg rho = {}", fmt_g(rho.arg()));
            Ok(true)
        }
    }
}

fn standard_profile(n: usize, h: f64) -> Result<DampingProfile<f64>> {
    let pml_start = (6.0 / h).ceil() as usize;
    DampingProfile::right_constant(n, pml_start, 2.0 / h)
}

fn parse_truncation(s: &str) -> Result<Truncation> {
    match s {
        "periodic" => Ok(Truncation::Periodic),
        "clamped" => Ok(Truncation::Clamped),
        other => Err(Error::Config(format!("unknown truncation '{other}'"))),
    }
}

fn parse_rhs(spec: &str, n: usize) -> Result<Vec<Complex64>> {
    if let Some(idx) = spec.strip_prefix("point:") {
        let idx: usize =
            idx.parse().map_err(|_| Error::Config(format!("bad point index '{idx}'")))?;
        if idx >= n {
            return Err(Error::Config(format!("point index {idx} out of range (n = {n})")));
        }
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[idx] = Complex64::new(1.0, 0.0);
        return Ok(b);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let mut b = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
            let mut it = line.split(',');
            let re: f64 = it
                .next()
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::Config("rhs rows must be 're,im'".into()))?;
            let im: f64 = it.next().and_then(|v| v.trim().parse().ok()).unwrap_or(0.0);
            b.push(Complex64::new(re, im));
        }
        if b.len() != n {
            return Err(Error::Config(format!("rhs file has {} rows, expected {n}", b.len())));
        }
        return Ok(b);
    }
    Err(Error::Config(format!("rhs must be 'point:<index>' or 'file:<csv>', got '{spec}'")))
}

fn helmholtz_cmd(cmd: HelmholtzCmd) -> Result<bool> {
    match cmd {
        HelmholtzCmd::Solve { p, omega, n, system, truncation, rhs, out } => {
            let h = 10.0 / n as f64;
            let st = StencilCoeffs::new(p, h)?;
            let sigma = standard_profile(n, h)?;
            let trunc = parse_truncation(&truncation)?;
            let b = parse_rhs(&rhs, n)?;
            let v = match system.as_str() {
                "full" => {
                    let sys = assemble_full(omega, &st, &sigma, trunc)?;
                    let mut full_rhs = vec![Complex64::new(0.0, 0.0); sys.matrix.nrows];
                    full_rhs[..n].copy_from_slice(&b);
                    solve_full(&sys, &full_rhs)?.v_tilde
                }
                "reduced" => {
                    let m = assemble_reduced(omega, &st, &sigma, trunc)?;
                    solve(&m, &b)?
                }
                other => return Err(Error::Config(format!("unknown system '{other}'"))),
            };
            let mut text = String::from("index,re,im\n");
            for (j, val) in v.iter().enumerate() {
                text.push_str(&format!("{},{},{}\n", j, fmt_g(val.re), fmt_g(val.im)));
            }
            emit(out, &text)?;
            Ok(true)
        }
        HelmholtzCmd::Pattern { p, omega, n, system, truncation, out } => {
            let h = 10.0 / n as f64;
            let st = StencilCoeffs::new(p, h)?;
            let sigma = standard_profile(n, h)?;
            let trunc = parse_truncation(&truncation)?;
            let matrix = match system.as_str() {
                "full" => assemble_full(omega, &st, &sigma, trunc)?.matrix,
                "reduced" => assemble_reduced(omega, &st, &sigma, trunc)?,
                other => return Err(Error::Config(format!("unknown system '{other}'"))),
            };
            let rep = sparsity_report(&matrix);
            eprintln!("dimension {}, nonzeros {}", rep.dim, rep.nnz);
            for (rb, cb, count, band) in &rep.block_stats {
                eprintln!("block {rb} x {cb}: {count} nonzeros, bandwidth {band}");
            }
            let mut text = String::from("row,col\n");
            for (r, c) in matrix.pattern() {
                text.push_str(&format!("{r},{c}\n"));
            }
            emit(out, &text)?;
            Ok(true)
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text)?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
