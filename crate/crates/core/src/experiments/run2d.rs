//! 2D studies: reflection measure on the square domain with an L-shaped
//! damping region, its width-refinement study, the long waveguide with a
//! driven wall, and the short-duct evanescent study with a two-stage layer.

use super::{
    append_summary, bump_2d, sigmoid_ramp, sigmoid_ramp_dt, write_csv, ErrorSeries,
    ExperimentConfig, SummaryRow,
};
use crate::dispersion::DampingProfile;
use crate::error::{Error, Result};
use crate::rdpml1d::WallKind;
use crate::rdpml2d::{AxisBc, Grid2d, PlainWave2d, Sim2d, State2d};
use crate::timeint::{fehlberg78, RkStepper};

fn round_count(len: f64, h: f64) -> Result<usize> {
    let n = len / h;
    let r = n.round();
    if (n - r).abs() > 1e-9 {
        return Err(Error::Config(format!("domain length {len} is not a multiple of h = {h}")));
    }
    Ok(r as usize)
}

/// One reflection run on the square domain: physical region `(-4, 0)^2`,
/// L-shaped damping band of `n_pml` nodes per axis, periodic wrap,
/// reference on `(-5, 1)^2`. Returns the error series and `n_pml`.
fn reflect2d_series(
    p: usize,
    h: f64,
    pml_len: f64,
    t_final: f64,
    sigma_value: f64,
) -> Result<(ErrorSeries, usize)> {
    let n_phys = round_count(4.0, h)?;
    let n_pml = (pml_len / h - 1e-9).ceil() as usize;
    let n = n_phys + n_pml;
    let grid = Grid2d {
        x0: -4.0,
        y0: -4.0,
        h1: h,
        h2: h,
        nx: n,
        ny: n,
        bc_x: AxisBc::Periodic,
        bc_y: AxisBc::Periodic,
    };
    let sx = DampingProfile::right_constant(n, n_phys, sigma_value)?;
    let sy = DampingProfile::right_constant(n, n_phys, sigma_value)?;
    let sim = Sim2d::new(grid, p, sx, sy)?;

    let n_ref = round_count(6.0, h)?;
    let off = round_count(1.0, h)?;
    let ref_grid = Grid2d {
        x0: -5.0,
        y0: -5.0,
        h1: h,
        h2: h,
        nx: n_ref,
        ny: n_ref,
        bc_x: AxisBc::Periodic,
        bc_y: AxisBc::Periodic,
    };
    let plain = PlainWave2d::new(ref_grid, p)?;

    let field = |nx: usize, ny: usize, x0: f64, y0: f64| -> Vec<f64> {
        let mut u = vec![0.0; nx * ny];
        for k in 0..ny {
            for j in 0..nx {
                u[k * nx + j] = bump_2d(x0 + j as f64 * h, y0 + k as f64 * h);
            }
        }
        u
    };
    let u0 = field(n, n, -4.0, -4.0);
    let mut y = State2d::from_initial(p, n, n, &u0, &vec![0.0; n * n]).data;
    let u0r = field(n_ref, n_ref, -5.0, -5.0);
    let mut z = u0r;
    z.extend(std::iter::repeat(0.0).take(n_ref * n_ref));

    let dt = h / 16.0;
    let steps = (t_final / dt).round() as usize;
    let mut ws = sim.workspace();
    let mut pws = plain.workspace();
    let mut sy_step = RkStepper::new(fehlberg78(), y.len());
    let mut sz_step = RkStepper::new(fehlberg78(), z.len());
    let mut series = ErrorSeries::new("reflect2d", p, h);
    let measure = |y: &[f64], z: &[f64]| {
        let mut e = 0.0f64;
        for k in 0..=n_phys {
            for j in 0..=n_phys {
                e = e.max((y[k * n + j] - z[(k + off) * n_ref + j + off]).abs());
            }
        }
        e
    };
    series.push(0.0, measure(&y, &z));
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        sy_step.step(&mut |_t, y: &[f64], dy: &mut [f64]| sim.rhs(y, dy, &mut ws), t, dt, &mut y, None);
        sz_step.step(
            &mut |_t, z: &[f64], dz: &mut [f64]| plain.rhs(z, dz, &mut pws),
            t,
            dt,
            &mut z,
            None,
        );
        series.push(step as f64 * dt, measure(&y, &z));
    }
    Ok((series, n_pml))
}

/// Outcome of the 2D reflection study.
#[derive(Debug, Clone)]
pub struct Reflect2dResult {
    pub series: Vec<ErrorSeries>,
    /// Wrapped waves first contaminate the physical window at this time.
    pub t_reentry: f64,
    /// `(p, max E before re-entry)`.
    pub pre_reentry_max: Vec<(usize, f64)>,
    pub pass: bool,
}

pub fn run_reflect_2d(cfg: &ExperimentConfig) -> Result<Reflect2dResult> {
    let mut series = Vec::new();
    let mut pre = Vec::new();
    let mut t_re = 0.0;
    let mut pass = true;
    for &p in &cfg.orders {
        let (s, n_pml) =
            reflect2d_series(p, cfg.h, cfg.pml_len, cfg.t_final, cfg.sigma.value(cfg.h))?;
        // support edge at distance 1.5 from the interface, then one layer
        // crossing to re-enter the physical window
        t_re = 1.5 + n_pml as f64 * cfg.h;
        let m = s.max_in(0.0, t_re);
        pass &= m <= 1e-9;
        pre.push((p, m));
        s.write_csv(&cfg.outdir.join(format!("reflect2d_{p}_{}.csv", cfg.h)))?;
        series.push(s);
    }
    let summary: Vec<SummaryRow> = pre
        .iter()
        .map(|(p, m)| SummaryRow::new("reflect2d", format!("pre_reentry_max_p{p}"), *m, 1e-9, *m <= 1e-9))
        .collect();
    append_summary(&cfg.outdir, &summary)?;
    Ok(Reflect2dResult { series, t_reentry: t_re, pre_reentry_max: pre, pass })
}

/// Outcome of the layer-width refinement study.
#[derive(Debug, Clone)]
pub struct PmlWidthResult {
    /// `(p, h, n_pml, E_h)` with `E_h` the maximum over the whole window.
    pub rows: Vec<(usize, f64, usize, f64)>,
    pub pass: bool,
}

pub fn run_pml_width_2d(cfg: &ExperimentConfig) -> Result<PmlWidthResult> {
    let hs = if cfg.h_list.is_empty() { vec![cfg.h] } else { cfg.h_list.clone() };
    let mut rows = Vec::new();
    let mut pass = true;
    let mut summary = Vec::new();
    for &p in &cfg.orders {
        let mut prev: Option<f64> = None;
        for &h in &hs {
            let (s, n_pml) = reflect2d_series(p, h, cfg.pml_len, cfg.t_final, cfg.sigma.value(h))?;
            let e_h = s.max();
            s.write_csv(&cfg.outdir.join(format!("pml-width-2d_{p}_{h}.csv")))?;
            if let Some(prev) = prev {
                let ok = e_h < prev;
                pass &= ok;
                summary.push(SummaryRow::new(
                    "pml-width-2d",
                    format!("decrease_p{p}_h{h}"),
                    e_h / prev,
                    1.0,
                    ok,
                ));
            }
            prev = Some(e_h);
            rows.push((p, h, n_pml, e_h));
        }
        if let Some(last) = prev {
            let ok = last <= 1e-9;
            pass &= ok;
            summary.push(SummaryRow::new("pml-width-2d", format!("final_p{p}"), last, 1e-9, ok));
        }
    }
    write_csv(
        &cfg.outdir.join("pml-width-2d.csv"),
        "p,h,n_pml,e_h",
        rows.iter().map(|(p, h, n, e)| vec![*p as f64, *h, *n as f64, *e]),
    )?;
    append_summary(&cfg.outdir, &summary)?;
    Ok(PmlWidthResult { rows, pass })
}

/// Trace shapes driving the duct studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DuctTrace {
    /// First transverse mode (propagating at omega = 5).
    Mode1,
    /// `sin(2 pi y)` (evanescent at omega = 5).
    Mode4,
}

impl DuctTrace {
    fn eval(&self, y: f64) -> f64 {
        match self {
            DuctTrace::Mode1 => (0.5 * std::f64::consts::PI * y).sin(),
            DuctTrace::Mode4 => (2.0 * std::f64::consts::PI * y).sin(),
        }
    }
}

/// Switch-on envelope of a driven wall: a logistic ramp with adjustable
/// steepness and center. The spectral width of the switch-on scales with
/// `rate`; slow ramps keep the injected content narrowband around the
/// carrier.
#[derive(Debug, Clone, Copy)]
struct Ramp {
    rate: f64,
    center: f64,
}

impl Ramp {
    fn eval(&self, t: f64) -> f64 {
        1.0 / (1.0 + (-self.rate * (t - self.center)).exp())
    }

    fn eval_dt(&self, t: f64) -> f64 {
        let s = self.eval(t);
        self.rate * s * (1.0 - s)
    }
}

/// Stage hook pinning the driven left wall and keeping the remaining walls
/// homogeneous.
fn duct_hook(
    nx: usize,
    ny: usize,
    y0: f64,
    h2: f64,
    omega: f64,
    trace: DuctTrace,
    ramp_fn: Ramp,
) -> impl Fn(f64, &mut [f64]) {
    move |t: f64, y: &mut [f64]| {
        let nn = nx * ny;
        let ramp = ramp_fn.eval(t);
        let dramp = ramp_fn.eval_dt(t);
        let (s, c) = (omega * t).sin_cos();
        for k in 1..ny - 1 {
            let g = trace.eval(y0 + k as f64 * h2);
            y[k * nx] = g * c * ramp;
            y[nn + k * nx] = g * (-omega * s * ramp + c * dramp);
        }
        for j in 0..nx {
            y[j] = 0.0;
            y[nn + j] = 0.0;
            y[(ny - 1) * nx + j] = 0.0;
            y[nn + (ny - 1) * nx + j] = 0.0;
        }
        for k in 0..ny {
            y[k * nx + nx - 1] = 0.0;
            y[nn + k * nx + nx - 1] = 0.0;
        }
    }
}

/// Zero crossings of a grid line by linear interpolation.
fn zero_crossings(u: &[f64], x0: f64, h: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 0..u.len() - 1 {
        let x = x0 + j as f64 * h;
        if x < lo || x + h > hi {
            continue;
        }
        if u[j] == 0.0 {
            out.push(x);
        } else if u[j] * u[j + 1] < 0.0 {
            out.push(x + h * u[j] / (u[j] - u[j + 1]));
        }
    }
    out
}

/// Outcome of the waveguide study.
#[derive(Debug, Clone)]
pub struct WaveguideResult {
    pub series: Vec<ErrorSeries>,
    /// `(p, max E over the window)`.
    pub emax: Vec<(usize, f64)>,
    /// `(p, worst centerline crossing deviation from the duct mode)`.
    pub phase_err: Vec<(usize, f64)>,
    pub pass: bool,
}

/// Long duct `(-30, 0) x (0, 2)` driven at the left wall, absorbed on the
/// right by a wall-terminated layer; reference is the plain scheme on a
/// duct extended to x = 18.
pub fn run_waveguide(cfg: &ExperimentConfig) -> Result<WaveguideResult> {
    let (h1, h2) = (cfg.h, if cfg.h2 > 0.0 { cfg.h2 } else { cfg.h });
    let omega = cfg.omega;
    let nx_phys = round_count(30.0, h1)?;
    let n_pml = (cfg.pml_len / h1).round().max(4.0) as usize;
    let nx = nx_phys + n_pml + 1;
    let ny = round_count(2.0, h2)? + 1;
    let walls = AxisBc::Walls { left: WallKind::Dirichlet, right: WallKind::Dirichlet };
    let dt = h1.min(h2) / 8.0;
    // Integration starts where the switch-on factor is at machine zero, so
    // the imposed wall trajectory is continuous with the zero initial state.
    let t_start = -6.0f64;
    let steps = ((cfg.t_final - t_start) / dt).round() as usize;

    let nx_ref = nx_phys + round_count(18.0, h1)? + 1;

    let mut series_all = Vec::new();
    let mut emax = Vec::new();
    let mut phase_err = Vec::new();
    for &p in &cfg.orders {
        if p > 2 {
            return Err(Error::UnsupportedOrder { p, max: 2 });
        }
        let grid = Grid2d {
            x0: -30.0,
            y0: 0.0,
            h1,
            h2,
            nx,
            ny,
            bc_x: walls,
            bc_y: walls,
        };
        let sim = Sim2d::new(
            grid,
            p,
            DampingProfile::right_constant(nx, nx_phys, cfg.sigma.value(h1))?,
            DampingProfile::zero(ny),
        )?;
        let ref_grid = Grid2d {
            x0: -30.0,
            y0: 0.0,
            h1,
            h2,
            nx: nx_ref,
            ny,
            bc_x: walls,
            bc_y: walls,
        };
        let plain = PlainWave2d::new(ref_grid, p)?;

        let ramp = Ramp { rate: 5.0, center: 1.0 };
        let hook = duct_hook(nx, ny, 0.0, h2, omega, DuctTrace::Mode1, ramp);
        let hook_ref = duct_hook(nx_ref, ny, 0.0, h2, omega, DuctTrace::Mode1, ramp);

        let mut y = State2d::zeros(p, nx, ny).data;
        let mut z = vec![0.0; 2 * nx_ref * ny];
        let mut ws = sim.workspace();
        let mut pws = plain.workspace();
        let mut sy = RkStepper::new(fehlberg78(), y.len());
        let mut sz = RkStepper::new(fehlberg78(), z.len());
        let mut s = ErrorSeries::new("waveguide", p, h1);
        let measure = |y: &[f64], z: &[f64]| {
            let mut e = 0.0f64;
            for k in 0..ny {
                for j in 0..=nx_phys {
                    e = e.max((y[k * nx + j] - z[k * nx_ref + j]).abs());
                }
            }
            e
        };
        s.push(t_start, measure(&y, &z));
        for step in 1..=steps {
            let t = t_start + (step - 1) as f64 * dt;
            sy.step(
                &mut |_t, y: &[f64], dy: &mut [f64]| sim.rhs(y, dy, &mut ws),
                t,
                dt,
                &mut y,
                Some(&hook),
            );
            sz.step(
                &mut |_t, z: &[f64], dz: &mut [f64]| plain.rhs(z, dz, &mut pws),
                t,
                dt,
                &mut z,
                Some(&hook_ref),
            );
            s.push(t_start + step as f64 * dt, measure(&y, &z));
        }

        // final-time snapshot for plotting
        let rows = (0..ny).flat_map(|k| {
            let y = &y;
            (0..nx).map(move |j| {
                vec![-30.0 + j as f64 * h1, k as f64 * h2, y[k * nx + j]]
            })
        });
        write_csv(&cfg.outdir.join(format!("waveguide_snapshot_{p}.csv")), "x,y,u", rows)?;

        // centerline phase metric against the duct mode at the final time
        let kappa = (omega * omega - std::f64::consts::PI.powi(2) / 4.0).sqrt();
        let k_mid = round_count(1.0, h2)?;
        let line: Vec<f64> = (0..=nx_phys).map(|j| y[k_mid * nx + j]).collect();
        let got = zero_crossings(&line, -30.0, h1, -29.0, -0.5);
        // Dispersion drift along the duct: crossing positions are compared
        // with the mode's wavelength lattice anchored at the wall-nearest
        // crossing, so the constant phase offset of the driven traveling
        // wave drops out and the accumulated drift remains.
        let worst = if got.is_empty() {
            f64::INFINITY
        } else {
            let lattice = std::f64::consts::PI / kappa;
            (0..got.len())
                .map(|i| ((got[i] - got[0]) - i as f64 * lattice).abs())
                .fold(0.0f64, f64::max)
        };
        phase_err.push((p, worst));

        emax.push((p, s.max()));
        s.write_csv(&cfg.outdir.join(format!("waveguide_{p}_{h1}.csv")))?;
        series_all.push(s);
    }

    let mut pass = true;
    let mut summary = Vec::new();
    for &(p, m) in &emax {
        let ok = m <= 1e-10;
        pass &= ok;
        summary.push(SummaryRow::new("waveguide", format!("emax_p{p}"), m, 1e-10, ok));
    }
    if let (Some(&(_, e1)), Some(&(_, e2))) = (
        phase_err.iter().find(|(p, _)| *p == 1),
        phase_err.iter().find(|(p, _)| *p == 2),
    ) {
        let ok = e2 <= 0.25 * e1;
        pass &= ok;
        summary.push(SummaryRow::new("waveguide", "phase_ratio", e2 / e1.max(1e-300), 0.25, ok));
    }
    append_summary(&cfg.outdir, &summary)?;
    Ok(WaveguideResult { series: series_all, emax, phase_err, pass })
}

/// Outcome of the short-duct evanescent study.
#[derive(Debug, Clone)]
pub struct EvanescentResult {
    /// `(trace, stage profile?, series)`; profile flag true = two-stage.
    pub series: Vec<(String, bool, ErrorSeries)>,
    /// Late-window maxima keyed like `series`.
    pub late_max: Vec<(String, bool, f64)>,
    /// Early-window maximum of the propagating trace under the plain layer.
    pub early_u1: f64,
    /// `max-late(u2, one-stage) / max-late(u2, two-stage)`.
    pub ratio_u2: f64,
    pub pass: bool,
}

/// Short duct `(-0.5, 0) x (-2, 0)`: the driven wall sits close to the
/// layer, so evanescent content reaches it undamped; the two-stage profile
/// lets that content die before the terminating wall.
pub fn run_evanescent(cfg: &ExperimentConfig) -> Result<EvanescentResult> {
    let h = cfg.h;
    let omega = cfg.omega;
    let p = *cfg.orders.first().unwrap_or(&2);
    if p > 2 {
        return Err(Error::UnsupportedOrder { p, max: 2 });
    }
    // physical nodes j = 0..=6 (x in [-0.5, -0.02]); damping from j = 7
    let n_phys = 6usize;
    let n_pml = (cfg.pml_len / h).round() as usize; // damped-layer node count
    let nx = n_phys + 1 + n_pml + 1;
    let ny = round_count(2.0, h)? + 1;
    let walls = AxisBc::Walls { left: WallKind::Dirichlet, right: WallKind::Dirichlet };
    let dt = h / 8.0;
    let pml_start = n_phys + 1;

    let sigma_one = DampingProfile::right_constant(nx, pml_start, cfg.sigma.value(h))?;
    let sigma_two = DampingProfile::two_stage(nx, pml_start, n_pml, cfg.sigma.value(h))?;

    // The propagating trace keeps the reference switch-on (its early-window
    // reflection check needs a full-strength source quickly). The
    // evanescent trace ramps slowly: a broad switch-on straddles the
    // transverse cutoff and fills both cavities with undamped near-cutoff
    // transients that bury the layer comparison under a common floor.
    let traces = match cfg.variant.as_str() {
        "u1" => vec![("u1", DuctTrace::Mode1)],
        "u2" => vec![("u2", DuctTrace::Mode4)],
        "both" => vec![("u1", DuctTrace::Mode1), ("u2", DuctTrace::Mode4)],
        other => return Err(Error::Config(format!("unknown evanescent variant '{other}'"))),
    };

    let mut series = Vec::new();
    let mut late_max = Vec::new();
    let t_roundtrip = 0.5 + 2.0 * (n_pml as f64 + 1.0) * h;
    let mut early_u1 = f64::NAN;
    for (name, trace) in traces {
        let (ramp, t_start, t_final) = if trace == DuctTrace::Mode1 {
            (Ramp { rate: 5.0, center: 1.0 }, -6.0f64, cfg.t_final.min(40.0))
        } else {
            (Ramp { rate: 0.25, center: 14.0 }, -115.0f64, cfg.t_final)
        };
        let t_late = 0.75 * t_final;
        let steps = ((t_final - t_start) / dt).round() as usize;
        // reference duct long enough that nothing returns within the window
        let ref_len_nodes = (((t_final - t_start) / 2.0 + 3.0) / h).ceil() as usize;
        let nx_ref = ref_len_nodes + 1;
        // reference trajectory restricted to the physical window
        let ref_grid = Grid2d {
            x0: -0.5,
            y0: -2.0,
            h1: h,
            h2: h,
            nx: nx_ref,
            ny,
            bc_x: walls,
            bc_y: walls,
        };
        let plain = PlainWave2d::new(ref_grid, p)?;
        let hook_ref = duct_hook(nx_ref, ny, -2.0, h, omega, trace, ramp);
        let mut window = vec![vec![0.0f64; (n_phys + 1) * ny]; steps + 1];
        {
            let mut z = vec![0.0; 2 * nx_ref * ny];
            let mut pws = plain.workspace();
            let mut sz = RkStepper::new(fehlberg78(), z.len());
            for (step, slot) in window.iter_mut().enumerate() {
                if step > 0 {
                    let t = t_start + (step - 1) as f64 * dt;
                    sz.step(
                        &mut |_t, z: &[f64], dz: &mut [f64]| plain.rhs(z, dz, &mut pws),
                        t,
                        dt,
                        &mut z,
                        Some(&hook_ref),
                    );
                }
                for k in 0..ny {
                    slot[k * (n_phys + 1)..(k + 1) * (n_phys + 1)]
                        .copy_from_slice(&z[k * nx_ref..k * nx_ref + n_phys + 1]);
                }
            }
        }

        for (two_stage, sigma) in [(false, &sigma_one), (true, &sigma_two)] {
            let grid = Grid2d {
                x0: -0.5,
                y0: -2.0,
                h1: h,
                h2: h,
                nx,
                ny,
                bc_x: walls,
                bc_y: walls,
            };
            let sim = Sim2d::new(grid, p, sigma.clone(), DampingProfile::zero(ny))?;
            let hook = duct_hook(nx, ny, -2.0, h, omega, trace, ramp);
            let mut y = State2d::zeros(p, nx, ny).data;
            let mut ws = sim.workspace();
            let mut sy = RkStepper::new(fehlberg78(), y.len());
            let label = if two_stage { "two-stage" } else { "one-stage" };
            let mut s = ErrorSeries::new(&format!("evanescent-{name}-{label}"), p, h);
            let measure = |y: &[f64], w: &[f64]| {
                let mut e = 0.0f64;
                for k in 0..ny {
                    for j in 0..=n_phys {
                        e = e.max((y[k * nx + j] - w[k * (n_phys + 1) + j]).abs());
                    }
                }
                e
            };
            s.push(t_start, measure(&y, &window[0]));
            for step in 1..=steps {
                let t = t_start + (step - 1) as f64 * dt;
                sy.step(
                    &mut |_t, y: &[f64], dy: &mut [f64]| sim.rhs(y, dy, &mut ws),
                    t,
                    dt,
                    &mut y,
                    Some(&hook),
                );
                s.push(t_start + step as f64 * dt, measure(&y, &window[step]));
            }
            if name == "u1" && !two_stage {
                early_u1 = s.max_in(0.0, t_roundtrip);
            }
            late_max.push((name.to_string(), two_stage, s.max_in(t_late, t_final)));
            s.write_csv(&cfg.outdir.join(format!("evanescent-{name}-{label}_{p}_{h}.csv")))?;
            series.push((name.to_string(), two_stage, s));
        }
    }

    let late = |name: &str, two: bool| {
        late_max
            .iter()
            .find(|(n, t, _)| n == name && *t == two)
            .map(|(_, _, v)| *v)
            .unwrap_or(f64::NAN)
    };
    let ratio_u2 = late("u2", false) / late("u2", true).max(1e-300);
    let mut pass = true;
    let mut summary = Vec::new();
    if ratio_u2.is_finite() {
        let ok = ratio_u2 >= 10.0;
        pass &= ok;
        summary.push(SummaryRow::new("evanescent", "u2_stage_ratio", ratio_u2, 10.0, ok));
    }
    if early_u1.is_finite() {
        let ok = early_u1 <= 1e-10;
        pass &= ok;
        summary.push(SummaryRow::new("evanescent", "u1_early_max", early_u1, 1e-10, ok));
    }
    append_summary(&cfg.outdir, &summary)?;
    Ok(EvanescentResult { series, late_max, early_u1, ratio_u2, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// At omega = 5 the second duct trace is below cutoff: its axial
    /// wavenumber is imaginary.
    #[test]
    fn mode4_is_evanescent_at_omega5() {
        let omega: f64 = 5.0;
        let ky = 2.0 * std::f64::consts::PI;
        assert!(omega * omega - ky * ky < 0.0);
        // while the first trace propagates
        let ky1 = 0.5 * std::f64::consts::PI;
        assert!(omega * omega - ky1 * ky1 > 0.0);
    }

    #[test]
    fn crossings_interpolate_linearly() {
        let u = [1.0, 0.5, -0.5, -1.0, 1.0];
        let xs = zero_crossings(&u, 0.0, 1.0, -1.0, 10.0);
        assert_eq!(xs.len(), 2);
        assert!((xs[0] - 1.5).abs() < 1e-15);
        assert!((xs[1] - 3.5).abs() < 1e-15);
    }

    #[test]
    fn duct_hook_pins_walls() {
        let (nx, ny) = (8usize, 5usize);
        let hook = duct_hook(nx, ny, 0.0, 0.5, 3.0, DuctTrace::Mode1, Ramp { rate: 5.0, center: 1.0 });
        let mut y = vec![1.0; 2 * nx * ny + 4 * nx * ny];
        hook(2.0, &mut y);
        // top and bottom rows and the right wall column are zero
        for j in 0..nx {
            assert_eq!(y[j], 0.0);
            assert_eq!(y[(ny - 1) * nx + j], 0.0);
        }
        for k in 0..ny {
            assert_eq!(y[k * nx + nx - 1], 0.0);
        }
        // driven wall carries the trace
        let expect = (0.5 * std::f64::consts::PI * 0.5 * 2.0 as f64).sin()
            * (3.0f64 * 2.0).cos()
            * sigmoid_ramp(2.0);
        assert!((y[2 * nx] - expect).abs() < 1e-15);
    }
}
