//! Fixed-step explicit Runge-Kutta integration of packed state vectors.
//!
//! The default tableau is the 13-stage Fehlberg 7(8) pair (E. Fehlberg,
//! NASA TR R-287, 1968) run in fixed-step mode with the eighth-order
//! weights. An optional per-stage hook lets callers overwrite boundary
//! entries of each stage state (used for time-dependent Dirichlet traces).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Explicit Butcher tableau (strictly lower-triangular `a`).
#[derive(Debug, Clone)]
pub struct ButcherTableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub order: usize,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }
}

/// Eighth-order weights of the Fehlberg 7(8) pair.
pub fn fehlberg78() -> ButcherTableau {
    let a: Vec<Vec<f64>> = vec![
        vec![],
        vec![2.0 / 27.0],
        vec![1.0 / 36.0, 1.0 / 12.0],
        vec![1.0 / 24.0, 0.0, 1.0 / 8.0],
        vec![5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0],
        vec![1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0],
        vec![-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0],
        vec![31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0],
        vec![2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0],
        vec![
            -91.0 / 108.0,
            0.0,
            0.0,
            23.0 / 108.0,
            -976.0 / 135.0,
            311.0 / 54.0,
            -19.0 / 60.0,
            17.0 / 6.0,
            -1.0 / 12.0,
        ],
        vec![
            2383.0 / 4100.0,
            0.0,
            0.0,
            -341.0 / 164.0,
            4496.0 / 1025.0,
            -301.0 / 82.0,
            2133.0 / 4100.0,
            45.0 / 82.0,
            45.0 / 164.0,
            18.0 / 41.0,
        ],
        vec![
            3.0 / 205.0,
            0.0,
            0.0,
            0.0,
            0.0,
            -6.0 / 41.0,
            -3.0 / 205.0,
            -3.0 / 41.0,
            3.0 / 41.0,
            6.0 / 41.0,
            0.0,
        ],
        vec![
            -1777.0 / 4100.0,
            0.0,
            0.0,
            -341.0 / 164.0,
            4496.0 / 1025.0,
            -289.0 / 82.0,
            2193.0 / 4100.0,
            51.0 / 82.0,
            33.0 / 164.0,
            12.0 / 41.0,
            0.0,
            1.0,
        ],
    ];
    let b = vec![
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        34.0 / 105.0,
        9.0 / 35.0,
        9.0 / 35.0,
        9.0 / 280.0,
        9.0 / 280.0,
        0.0,
        41.0 / 840.0,
        41.0 / 840.0,
    ];
    let c = vec![
        0.0,
        2.0 / 27.0,
        1.0 / 9.0,
        1.0 / 6.0,
        5.0 / 12.0,
        1.0 / 2.0,
        5.0 / 6.0,
        1.0 / 6.0,
        2.0 / 3.0,
        1.0 / 3.0,
        1.0,
        0.0,
        1.0,
    ];
    ButcherTableau { a, b, c, order: 8 }
}

/// Per-stage boundary overwrite: `hook(t_stage, state)`.
pub type StageHook<'a, S> = &'a dyn Fn(S, &mut [S]);

/// Reusable stage storage for [`RkStepper::step`].
pub struct RkStepper<S> {
    tableau: ButcherTableau,
    k: Vec<Vec<S>>,
    stage: Vec<S>,
}

impl<S: Scalar> RkStepper<S> {
    pub fn new(tableau: ButcherTableau, dim: usize) -> Self {
        let stages = tableau.stages();
        Self {
            tableau,
            k: vec![vec![S::zero(); dim]; stages],
            stage: vec![S::zero(); dim],
        }
    }

    pub fn tableau(&self) -> &ButcherTableau {
        &self.tableau
    }

    /// Advances `y` in place from `t` by `dt`.
    pub fn step<F>(&mut self, rhs: &mut F, t: S, dt: S, y: &mut [S], hook: Option<StageHook<'_, S>>)
    where
        F: FnMut(S, &[S], &mut [S]),
    {
        let stages = self.tableau.stages();
        for i in 0..stages {
            let ts = t + dt * S::real(self.tableau.c[i]);
            self.stage.copy_from_slice(y);
            for (j, kj) in self.k.iter().enumerate().take(i) {
                let aij = self.tableau.a[i][j];
                if aij != 0.0 {
                    let w = dt * S::real(aij);
                    for (s, k) in self.stage.iter_mut().zip(kj.iter()) {
                        *s += w * *k;
                    }
                }
            }
            if let Some(h) = hook {
                h(ts, &mut self.stage);
            }
            rhs(ts, &self.stage, &mut self.k[i]);
        }
        for (i, ki) in self.k.iter().enumerate() {
            let bi = self.tableau.b[i];
            if bi != 0.0 {
                let w = dt * S::real(bi);
                for (yj, kj) in y.iter_mut().zip(ki.iter()) {
                    *yj += w * *kj;
                }
            }
        }
        if let Some(h) = hook {
            h(t + dt, y);
        }
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` with fixed step `dt`,
/// invoking `on_step(t, y)` after every accepted step (and once at `t0`).
///
/// The final step is shortened if `(t1 - t0) / dt` is not integral. Returns
/// the state at `t1`; NaN or Inf in an accepted state aborts with
/// [`Error::Divergence`].
pub fn rk_integrate<S: Scalar, F, O>(
    tableau: ButcherTableau,
    mut rhs: F,
    y0: &[S],
    t0: S,
    t1: S,
    dt: S,
    hook: Option<StageHook<'_, S>>,
    mut on_step: O,
) -> Result<Vec<S>>
where
    F: FnMut(S, &[S], &mut [S]),
    O: FnMut(S, &[S]),
{
    if !(dt > S::zero()) {
        return Err(Error::invalid("time step dt must be positive"));
    }
    let mut y = y0.to_vec();
    let mut stepper = RkStepper::new(tableau, y.len());
    let span = t1 - t0;
    let steps = (span / dt).round();
    let n_full = if (steps * dt - span).abs() <= S::real(1e-12) * span.abs().max(S::one()) {
        steps.to_usize().unwrap_or(0)
    } else {
        (span / dt).floor().to_usize().unwrap_or(0)
    };
    on_step(t0, &y);
    let mut t = t0;
    for step in 1..=n_full {
        stepper.step(&mut rhs, t, dt, &mut y, hook);
        t = t0 + dt * S::from_index(step);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: t.to_f64().unwrap_or(f64::NAN) });
        }
        on_step(t, &y);
    }
    let rem = t1 - t;
    if rem > S::real(1e-12) * span.abs().max(S::one()) {
        stepper.step(&mut rhs, t, rem, &mut y, hook);
        t = t1;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: t.to_f64().unwrap_or(f64::NAN) });
        }
        on_step(t, &y);
    }
    Ok(y)
}
