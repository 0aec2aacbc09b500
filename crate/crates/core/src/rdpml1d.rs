//! Semi-discrete (continuous-time) right-hand side for the 1D wave equation
//! with PML auxiliary variables, plus boundary closures.
//!
//! The state is one flat vector ordered `(u, v, phi^(1..p), psi^(1..p))`,
//! each block holding one value per grid node, so any explicit integrator
//! can drive it unmodified. Auxiliary variables are allocated on the full
//! grid; their damping-transport terms are skipped outside the (dilated)
//! damping support, where they vanish identically.

use crate::dispersion::DampingProfile;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stencil::{apply_padded, fill_ghosts, Closure1d, StencilCoeffs};

/// End-wall kinds for a truncated domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    /// Homogeneous (or trace-driven) value wall; the wall node is held.
    Dirichlet,
    /// Reflection wall via even extension; the wall node evolves.
    Neumann,
}

/// Boundary condition of the 1D computational domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc1d {
    /// Wrap-around identification of the two ends.
    Periodic,
    /// Walls at the first and last node.
    Walls { left: WallKind, right: WallKind },
}

/// Uniform 1D grid with damping-support bookkeeping.
#[derive(Debug, Clone)]
pub struct Grid1d<S> {
    pub x0: S,
    pub h: S,
    /// Number of stored nodes (for periodic domains the wrap node is not
    /// duplicated).
    pub n: usize,
    /// First index of the damping support.
    pub pml_start: usize,
    /// One past the last index of the damping support.
    pub pml_end: usize,
    pub bc: Bc1d,
}

impl<S: Scalar> Grid1d<S> {
    pub fn new(x0: S, h: S, n: usize, bc: Bc1d) -> Self {
        Self { x0, h, n, pml_start: n, pml_end: n, bc }
    }

    pub fn x(&self, j: usize) -> S {
        self.x0 + self.h * S::from_index(j)
    }
}

/// Packed 1D state `(u, v, phi^(1..p), psi^(1..p))`, each of length `n`.
///
/// Block `1 + r` holds `phi^(r)`, block `1 + p + r` holds `psi^(r)`,
/// `r = 1..=p`. Auxiliary blocks start at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct State1d<S> {
    pub p: usize,
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> State1d<S> {
    pub fn zeros(p: usize, n: usize) -> Self {
        Self { p, n, data: vec![S::zero(); (2 + 2 * p) * n] }
    }

    /// State with prescribed wavefield and velocity; auxiliary variables
    /// start at zero.
    pub fn from_initial(p: usize, u: &[S], v: &[S]) -> Self {
        assert_eq!(u.len(), v.len());
        let n = u.len();
        let mut s = Self::zeros(p, n);
        s.data[..n].copy_from_slice(u);
        s.data[n..2 * n].copy_from_slice(v);
        s
    }

    pub fn u(&self) -> &[S] {
        &self.data[..self.n]
    }

    pub fn v(&self) -> &[S] {
        &self.data[self.n..2 * self.n]
    }

    pub fn phi(&self, r: usize) -> &[S] {
        let b = 1 + r;
        &self.data[b * self.n..(b + 1) * self.n]
    }

    pub fn psi(&self, r: usize) -> &[S] {
        let b = 1 + self.p + r;
        &self.data[b * self.n..(b + 1) * self.n]
    }
}

/// Scratch buffers reused across right-hand-side evaluations.
#[derive(Debug, Clone)]
pub struct Workspace1d<S> {
    u_pad: Vec<S>,
    phi_pad: Vec<Vec<S>>,
    psi_pad: Vec<Vec<S>>,
}

impl<S: Scalar> Workspace1d<S> {
    fn new(p: usize, n: usize) -> Self {
        Self {
            u_pad: vec![S::zero(); n + 2 * p],
            phi_pad: vec![vec![S::zero(); n + 2 * p]; p],
            psi_pad: vec![vec![S::zero(); n + 2 * p]; p],
        }
    }
}

/// Fills `p` ghosts on each side for a wall-bounded wavefield: odd
/// point-reflection about the wall value for Dirichlet, mirror for Neumann.
pub(crate) fn fill_wall_ghosts<S: Scalar>(
    buf: &mut [S],
    p: usize,
    left: WallKind,
    right: WallKind,
) {
    let n = buf.len() - 2 * p;
    for g in 0..p {
        let m = (g + 1).min(n - 1);
        buf[p - 1 - g] = match left {
            WallKind::Dirichlet => (buf[p] + buf[p]) - buf[p + m],
            WallKind::Neumann => buf[p + m],
        };
        buf[p + n + g] = match right {
            WallKind::Dirichlet => (buf[p + n - 1] + buf[p + n - 1]) - buf[p + n - 1 - m],
            WallKind::Neumann => buf[p + n - 1 - m],
        };
    }
}

/// 1D RDPML right-hand-side evaluator.
#[derive(Debug, Clone)]
pub struct Sim1d<S> {
    grid: Grid1d<S>,
    stencil: StencilCoeffs<S>,
    sigma: DampingProfile<S>,
    /// Padded damping values (`p` ghosts each side; periodic wrap or zero
    /// beyond walls).
    sig_pad: Vec<S>,
    /// Whether any damping coefficient lies in the `[j-p, j+p]` window.
    active: Vec<bool>,
}

impl<S: Scalar> Sim1d<S> {
    pub fn new(
        grid: Grid1d<S>,
        stencil: StencilCoeffs<S>,
        sigma: DampingProfile<S>,
    ) -> Result<Self> {
        let p = stencil.half_width();
        let n = grid.n;
        if sigma.len() != n {
            return Err(Error::invalid("damping profile length must match the grid"));
        }
        if n < 2 * p + 3 {
            return Err(Error::invalid("grid too small for the stencil"));
        }
        if let Bc1d::Walls { .. } = grid.bc {
            if p > 2 {
                return Err(Error::UnsupportedOrder { p, max: 2 });
            }
            if n < 2 * p + 6 {
                return Err(Error::invalid("wall-bounded grid too small for the closures"));
            }
        }
        let mut sig_pad = vec![S::zero(); n + 2 * p];
        sig_pad[p..p + n].copy_from_slice(sigma.values());
        match grid.bc {
            Bc1d::Periodic => fill_ghosts::<S, S>(&mut sig_pad, p, &Closure1d::Periodic),
            Bc1d::Walls { .. } => {} // zero beyond walls
        }
        let active = (0..n)
            .map(|j| sig_pad[j..=j + 2 * p].iter().any(|&s| s > S::zero()))
            .collect();
        let grid = {
            let mut g = grid;
            let (lo, hi) = sigma.support();
            g.pml_start = lo;
            g.pml_end = hi;
            g
        };
        Ok(Self { grid, stencil, sigma, sig_pad, active })
    }

    pub fn grid(&self) -> &Grid1d<S> {
        &self.grid
    }

    pub fn stencil(&self) -> &StencilCoeffs<S> {
        &self.stencil
    }

    pub fn sigma(&self) -> &DampingProfile<S> {
        &self.sigma
    }

    pub fn half_width(&self) -> usize {
        self.stencil.half_width()
    }

    pub fn state_dim(&self) -> usize {
        (2 + 2 * self.stencil.half_width()) * self.grid.n
    }

    pub fn workspace(&self) -> Workspace1d<S> {
        Workspace1d::new(self.stencil.half_width(), self.grid.n)
    }

    /// Evaluates the semi-discrete right-hand side `dy = F(y)`.
    pub fn rhs(&self, y: &[S], dy: &mut [S], ws: &mut Workspace1d<S>) {
        let p = self.stencil.half_width();
        let n = self.grid.n;
        let h = self.grid.h;
        debug_assert_eq!(y.len(), self.state_dim());
        debug_assert_eq!(dy.len(), self.state_dim());

        let (u, rest) = y.split_at(n);
        let (v, aux) = rest.split_at(n);
        let phi: Vec<&[S]> = (0..p).map(|r| &aux[r * n..(r + 1) * n]).collect();
        let psi: Vec<&[S]> = (0..p).map(|r| &aux[(p + r) * n..(p + r + 1) * n]).collect();

        // Padded copies with ghost values per boundary condition.
        ws.u_pad[p..p + n].copy_from_slice(u);
        match self.grid.bc {
            Bc1d::Periodic => {
                fill_ghosts::<S, S>(&mut ws.u_pad, p, &Closure1d::Periodic);
                for r in 0..p {
                    ws.phi_pad[r][p..p + n].copy_from_slice(phi[r]);
                    fill_ghosts::<S, S>(&mut ws.phi_pad[r], p, &Closure1d::Periodic);
                    ws.psi_pad[r][p..p + n].copy_from_slice(psi[r]);
                    fill_ghosts::<S, S>(&mut ws.psi_pad[r], p, &Closure1d::Periodic);
                }
            }
            Bc1d::Walls { left, right } => {
                fill_wall_ghosts(&mut ws.u_pad, p, left, right);
                for r in 0..p {
                    ws.phi_pad[r][..p].fill(S::zero());
                    ws.phi_pad[r][p..p + n].copy_from_slice(phi[r]);
                    ws.phi_pad[r][p + n..].fill(S::zero());
                    ws.psi_pad[r][..p].fill(S::zero());
                    ws.psi_pad[r][p..p + n].copy_from_slice(psi[r]);
                    ws.psi_pad[r][p + n..].fill(S::zero());
                }
            }
        }

        let mut blocks: Vec<&mut [S]> = dy.chunks_mut(n).collect();
        let (du_b, tail) = blocks.split_at_mut(1);
        let (dv_b, daux) = tail.split_at_mut(1);
        let du: &mut [S] = du_b[0];
        let dv: &mut [S] = dv_b[0];
        let (dphi, dpsi) = daux.split_at_mut(p);

        du.copy_from_slice(v);

        // dv = L_p[u] + h sum_{r,l} a_r ( sigma_{j+l-1} psi^(r+1-l)_{j+l}
        //                               - sigma_{j-l}   phi^(r+1-l)_{j-l} )
        apply_padded(&ws.u_pad, &self.stencil, dv);
        let sig = &self.sig_pad;
        for j in 0..n {
            if !self.active[j] {
                continue;
            }
            let c = j + p;
            let mut acc = S::zero();
            for r in 1..=p {
                let ar = self.stencil.weight(r as isize);
                let mut inner = S::zero();
                for l in 1..=r {
                    let s = r + 1 - l; // family index
                    inner += sig[c + l - 1] * ws.psi_pad[s - 1][c + l]
                        - sig[c - l] * ws.phi_pad[s - 1][c - l];
                }
                acc += h * ar * inner;
            }
            dv[j] += acc;
        }

        // Auxiliary transport equations.
        let inv2h = S::one() / (h + h);
        let half = S::real(0.5);
        for r in 1..=p {
            let dphi_r: &mut [S] = dphi[r - 1];
            let dpsi_r: &mut [S] = dpsi[r - 1];
            for j in 0..n {
                let c = j + p;
                let mut dp = -(ws.u_pad[c + 2 - r] - ws.u_pad[c - r]) * inv2h;
                let mut ds = -(ws.u_pad[c + r] - ws.u_pad[c + r - 2]) * inv2h;
                if self.active[j] {
                    dp -= (sig[c] * ws.phi_pad[r - 1][c] + sig[c - 1] * ws.phi_pad[r - 1][c - 1])
                        * half;
                    ds -= (sig[c - 1] * ws.psi_pad[r - 1][c] + sig[c] * ws.psi_pad[r - 1][c + 1])
                        * half;
                    for l in 1..r {
                        let f = r - l; // lower family index
                        dp -= (sig[c - 1 - l] * ws.phi_pad[f - 1][c - 1 - l]
                            - sig[c + 1 - l] * ws.phi_pad[f - 1][c + 1 - l])
                            * half;
                        ds -= (sig[c + l] * ws.psi_pad[f - 1][c + l + 1]
                            - sig[c + l - 2] * ws.psi_pad[f - 1][c + l - 1])
                            * half;
                    }
                }
                dphi_r[j] = dp;
                dpsi_r[j] = ds;
            }
        }

        if let Bc1d::Walls { left, right } = self.grid.bc {
            right_closure_line(&self.stencil, h, self.sigma.values(), right, u, &phi, &psi, du, dv, dphi, dpsi);
            match left {
                WallKind::Dirichlet => {
                    left_dirichlet_closure_line(&self.stencil, h, self.sigma.values(), u, &phi, &psi, du, dv, dphi, dpsi);
                }
                WallKind::Neumann => unimplemented!("left Neumann wall closure"),
            }
        }
    }
}

/// Overwrites the right-end node equations of one grid line with the wall
/// closure of the given kind (orders `p <= 2`).
#[allow(clippy::too_many_arguments)]
pub(crate) fn right_closure_line<S: Scalar>(
    stencil: &StencilCoeffs<S>,
    h: S,
    sg: &[S],
    kind: WallKind,
    u: &[S],
    phi: &[&[S]],
    psi: &[&[S]],
    du: &mut [S],
    dv: &mut [S],
    dphi: &mut [&mut [S]],
    dpsi: &mut [&mut [S]],
) {
    let p = stencil.half_width();
    let n = u.len();
    let h2 = h * h;
    let half = S::real(0.5);
    let inv2h = S::one() / (h + h);
    // Spacing-free table weights a_r * h^2.
    let a = |r: usize| stencil.scaled_weight(r as isize);
    let m = n - 1;
    let two = S::real(2.0);

    {
        match kind {
            WallKind::Dirichlet => {
                // Wall node is held; its equations are inert.
                du[m] = S::zero();
                dv[m] = S::zero();
                for r in 0..p {
                    dphi[r][m] = S::zero();
                    dpsi[r][m] = S::zero();
                    dphi[r][m - 1] = S::zero(); // near-wall derivative is never read
                }
                if p == 1 {
                    dv[m - 1] = (a(0) * u[m - 1] + a(1) * u[m - 2]) / h2
                        - a(1) * sg[m - 2] * phi[0][m - 2] / h;
                    dpsi[0][m - 1] = u[m - 2] * inv2h - sg[m - 2] * half * psi[0][m - 1];
                } else {
                    dv[m - 1] = (a(2) * u[m - 3] + a(1) * u[m - 2] + (a(0) - a(2)) * u[m - 1]) / h2
                        - a(2) * (sg[m - 2] * phi[1][m - 2] + sg[m - 3] * phi[0][m - 3]) / h
                        - a(1) * sg[m - 2] * phi[0][m - 2] / h;
                    dpsi[0][m - 1] = u[m - 2] * inv2h - sg[m - 2] * half * psi[0][m - 1];
                    dpsi[1][m - 1] = u[m - 1] / h - sg[m - 2] * half * psi[1][m - 1]
                        + sg[m - 2] * half * psi[0][m - 1];
                    dv[m - 2] = (a(2) * u[m - 4]
                        + a(1) * u[m - 3]
                        + a(0) * u[m - 2]
                        + a(1) * u[m - 1])
                        / h2
                        - a(2) * (sg[m - 3] * phi[1][m - 3] + sg[m - 4] * phi[0][m - 4]) / h
                        - a(1) * sg[m - 3] * phi[0][m - 3] / h
                        + a(1) * sg[m - 2] * psi[0][m - 1] / h
                        + a(2) * sg[m - 2] * psi[1][m - 1] / h;
                    dpsi[1][m - 2] = u[m - 2] * inv2h
                        - (sg[m - 3] * psi[1][m - 2] + sg[m - 2] * psi[1][m - 1]) * half
                        + sg[m - 3] * half * psi[0][m - 2];
                }
            }
            WallKind::Neumann => {
                for r in 0..p {
                    dphi[r][m] = S::zero(); // never read at the reflection wall
                }
                if p == 1 {
                    dv[m] = (two * a(1) * u[m - 1] + a(0) * u[m]) / h2
                        - two * a(1) * sg[m - 1] * phi[0][m - 1] / h;
                    dpsi[0][m] = sg[m - 1] * half * (phi[0][m - 1] - psi[0][m]);
                } else {
                    dv[m] = (two * a(2) * u[m - 2] + two * a(1) * u[m - 1] + a(0) * u[m]) / h2
                        - two * a(2) * (sg[m - 1] * phi[1][m - 1] + sg[m - 2] * phi[0][m - 2]) / h
                        - two * a(1) * sg[m - 1] * phi[0][m - 1] / h;
                    dpsi[0][m] = sg[m - 1] * half * (phi[0][m - 1] - psi[0][m]);
                    dpsi[1][m] = -(u[m - 2] - u[m]) * inv2h - sg[m - 1] * half * psi[1][m]
                        + sg[m - 1] * half * psi[0][m]
                        + sg[m - 1] * half * phi[1][m - 1]
                        + sg[m - 2] * half * phi[0][m - 2];
                    dv[m - 1] = (a(2) * u[m - 3]
                        + a(1) * u[m - 2]
                        + (a(0) + a(2)) * u[m - 1]
                        + a(1) * u[m])
                        / h2
                        - a(2) * (sg[m - 2] * phi[1][m - 2] + sg[m - 3] * phi[0][m - 3]) / h
                        - a(1) * sg[m - 2] * phi[0][m - 2] / h
                        + a(1) * sg[m - 1] * psi[0][m] / h
                        + a(2) * (sg[m - 1] * psi[1][m] - sg[m - 1] * phi[0][m - 1]) / h;
                    dpsi[1][m - 1] = -(sg[m - 1] * psi[1][m] + sg[m - 2] * psi[1][m - 1]) * half
                        + sg[m - 2] * half * psi[0][m - 1]
                        + sg[m - 1] * half * phi[0][m - 1];
                }
            }
        }
    }
}

/// Mirror image of the right-end Dirichlet closure for a wall at the first
/// node of a line (orders `p <= 2`).
#[allow(clippy::too_many_arguments)]
pub(crate) fn left_dirichlet_closure_line<S: Scalar>(
    stencil: &StencilCoeffs<S>,
    h: S,
    sg: &[S],
    u: &[S],
    phi: &[&[S]],
    psi: &[&[S]],
    du: &mut [S],
    dv: &mut [S],
    dphi: &mut [&mut [S]],
    dpsi: &mut [&mut [S]],
) {
    let p = stencil.half_width();
    let h2 = h * h;
    let half = S::real(0.5);
    let inv2h = S::one() / (h + h);
    let a = |r: usize| stencil.scaled_weight(r as isize);

    du[0] = S::zero();
    dv[0] = S::zero();
    for r in 0..p {
        dphi[r][0] = S::zero();
        dpsi[r][0] = S::zero();
        dpsi[r][1] = S::zero(); // mirror of the unused right-end derivative
    }
    if p == 1 {
        dv[1] = (a(0) * u[1] + a(1) * u[2]) / h2 + a(1) * sg[1] * psi[0][2] / h;
        dphi[0][1] = -u[2] * inv2h - sg[1] * half * phi[0][1];
    } else {
        dv[1] = (a(2) * u[3] + a(1) * u[2] + (a(0) - a(2)) * u[1]) / h2
            + a(2) * (sg[1] * psi[1][2] + sg[2] * psi[0][3]) / h
            + a(1) * sg[1] * psi[0][2] / h;
        dphi[0][1] = -u[2] * inv2h - sg[1] * half * phi[0][1];
        dphi[1][1] = -u[1] / h - sg[1] * half * phi[1][1] + sg[1] * half * phi[0][1];
        dv[2] = (a(2) * u[4] + a(1) * u[3] + a(0) * u[2] + a(1) * u[1]) / h2
            + a(2) * (sg[2] * psi[1][3] + sg[3] * psi[0][4]) / h
            + a(1) * sg[2] * psi[0][3] / h
            - a(1) * sg[1] * phi[0][1] / h
            - a(2) * sg[1] * phi[1][1] / h;
        dphi[1][2] = -u[2] * inv2h - (sg[2] * phi[1][2] + sg[1] * phi[1][1]) * half
            + sg[2] * half * phi[0][2];
    }
}

/// Plain method-of-lines wave scheme (`u`, `v` only), used for reference
/// solutions and reduction checks against the damped system.
#[derive(Debug, Clone)]
pub struct PlainWave1d<S> {
    grid: Grid1d<S>,
    stencil: StencilCoeffs<S>,
}

impl<S: Scalar> PlainWave1d<S> {
    pub fn new(grid: Grid1d<S>, stencil: StencilCoeffs<S>) -> Result<Self> {
        if grid.n < 2 * stencil.half_width() + 3 {
            return Err(Error::invalid("grid too small for the stencil"));
        }
        Ok(Self { grid, stencil })
    }

    pub fn grid(&self) -> &Grid1d<S> {
        &self.grid
    }

    pub fn state_dim(&self) -> usize {
        2 * self.grid.n
    }

    pub fn rhs(&self, y: &[S], dy: &mut [S], u_pad: &mut Vec<S>) {
        let p = self.stencil.half_width();
        let n = self.grid.n;
        u_pad.resize(n + 2 * p, S::zero());
        let (u, v) = y.split_at(n);
        let (du, dv) = dy.split_at_mut(n);
        du.copy_from_slice(v);
        u_pad[p..p + n].copy_from_slice(u);
        match self.grid.bc {
            Bc1d::Periodic => fill_ghosts::<S, S>(u_pad, p, &Closure1d::Periodic),
            Bc1d::Walls { left, right } => fill_wall_ghosts(u_pad, p, left, right),
        }
        apply_padded(u_pad, &self.stencil, dv);
        if let Bc1d::Walls { left, right } = self.grid.bc {
            if left == WallKind::Dirichlet {
                du[0] = S::zero();
                dv[0] = S::zero();
            }
            if right == WallKind::Dirichlet {
                du[n - 1] = S::zero();
                dv[n - 1] = S::zero();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{decay_factor, DampingProfile};
    use crate::stencil::StencilCoeffs;
    use crate::timeint::{fehlberg78, rk_integrate, RkStepper};

    fn sim(p: usize, n: usize, h: f64, sigma: DampingProfile<f64>, bc: Bc1d) -> Sim1d<f64> {
        let grid = Grid1d::new(0.0, h, n, bc);
        let stencil = StencilCoeffs::new(p, h).unwrap();
        Sim1d::new(grid, stencil, sigma).unwrap()
    }

    #[test]
    fn constant_state_is_fixed_point_without_damping() {
        for p in 1..=4 {
            let s = sim(p, 32, 0.1, DampingProfile::zero(32), Bc1d::Periodic);
            let mut y = vec![0.0; s.state_dim()];
            y[..32].fill(3.25); // u constant, v = aux = 0
            let mut dy = vec![1.0; s.state_dim()];
            let mut ws = s.workspace();
            s.rhs(&y, &mut dy, &mut ws);
            assert!(dy.iter().all(|&d| d == 0.0), "p={p}");
        }
    }

    /// With sigma = 0 the auxiliary equations reduce to plain centered
    /// differences of u and nothing feeds back into v.
    #[test]
    fn zero_damping_reduces_aux_to_central_differences() {
        let (p, n, h) = (3usize, 24usize, 0.2);
        let s = sim(p, n, h, DampingProfile::zero(n), Bc1d::Periodic);
        let mut y = vec![0.0; s.state_dim()];
        for j in 0..n {
            y[j] = (0.83 * j as f64).sin(); // u
            y[n + j] = (1.21 * j as f64).cos(); // v
            for b in 2..2 + 2 * p {
                y[b * n + j] = (0.31 * (b * n + j) as f64).sin(); // aux noise
            }
        }
        let mut dy = vec![0.0; s.state_dim()];
        let mut ws = s.workspace();
        s.rhs(&y, &mut dy, &mut ws);

        let u = &y[..n];
        let lap =
            crate::stencil::apply_laplacian_1d(u, s.stencil(), &Closure1d::Periodic).unwrap();
        let wrap = |i: isize| ((i % n as isize + n as isize) % n as isize) as usize;
        let near = |a: f64, b: f64| (a - b).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0);
        for j in 0..n {
            assert_eq!(dy[n + j], lap[j], "dv is the bare Laplacian");
            for r in 1..=p {
                let ji = j as isize;
                let ri = r as isize;
                let dphi = -(u[wrap(ji - ri + 2)] - u[wrap(ji - ri)]) / (2.0 * h);
                let dpsi = -(u[wrap(ji + ri)] - u[wrap(ji + ri - 2)]) / (2.0 * h);
                assert!(near(dy[(1 + r) * n + j], dphi), "phi^{r} at {j}");
                assert!(near(dy[(1 + p + r) * n + j], dpsi), "psi^{r} at {j}");
            }
        }
    }

    /// sigma = 0 evolution coincides bitwise with the plain scheme.
    #[test]
    fn zero_damping_matches_plain_scheme_bitwise() {
        for p in [1usize, 3] {
            let (n, h) = (48usize, 0.125);
            let s = sim(p, n, h, DampingProfile::zero(n), Bc1d::Periodic);
            let plain = PlainWave1d::new(
                Grid1d::new(0.0, h, n, Bc1d::Periodic),
                StencilCoeffs::new(p, h).unwrap(),
            )
            .unwrap();

            let u0: Vec<f64> =
                (0..n).map(|j| (-10.0 * (j as f64 * h - 3.0).powi(2)).exp()).collect();
            let v0 = vec![0.0; n];
            let y0 = State1d::from_initial(p, &u0, &v0);
            let mut ws = s.workspace();
            let yf = rk_integrate(
                fehlberg78(),
                |_t, y: &[f64], dy: &mut [f64]| s.rhs(y, dy, &mut ws),
                &y0.data,
                0.0,
                1.0,
                h / 8.0,
                None,
                |_, _| {},
            )
            .unwrap();

            let mut pad = Vec::new();
            let mut z0 = u0.clone();
            z0.extend_from_slice(&v0);
            let zf = rk_integrate(
                fehlberg78(),
                |_t, y: &[f64], dy: &mut [f64]| plain.rhs(y, dy, &mut pad),
                &z0,
                0.0,
                1.0,
                h / 8.0,
                None,
                |_, _| {},
            )
            .unwrap();

            for j in 0..n {
                assert_eq!(yf[j].to_bits(), zf[j].to_bits(), "u at {j}, p={p}");
                assert!(yf[n + j] == zf[n + j], "v at {j}, p={p}");
            }
        }
    }

    /// Frequency of the discrete dispersion relation for a real wavenumber.
    fn discrete_omega(stencil: &StencilCoeffs<f64>, xi: f64, h: f64) -> f64 {
        let mut omega2 = -stencil.weight(0);
        for r in 1..=stencil.half_width() {
            omega2 -= 2.0 * stencil.weight(r as isize) * (r as f64 * xi * h).cos();
        }
        omega2.sqrt()
    }

    /// A right-traveling wave packet launched from the undamped region
    /// decays inside a constant damping layer at the per-node rate predicted
    /// by the decay factor.
    #[test]
    fn mode_decays_at_predicted_rate() {
        let (p, h) = (2usize, 0.05);
        let n = 280; // domain length 14, damping on [13, 14)
        let pml_start = 260;
        let sigma_val = 1.0 / h;
        let sigma = DampingProfile::right_constant(n, pml_start, sigma_val).unwrap();
        let s = sim(p, n, h, sigma, Bc1d::Periodic);

        let xi = 2.0 * std::f64::consts::PI * 12.0 / (n as f64 * h);
        let omega = discrete_omega(s.stencil(), xi, h);

        // Smooth plateau window keeps the packet quasi-monochromatic and
        // supported in the undamped region.
        let smooth = |t: f64| {
            if t <= 0.0 {
                0.0
            } else if t >= 1.0 {
                1.0
            } else {
                t * t * (3.0 - 2.0 * t)
            }
        };
        let window = |x: f64| smooth(x - 1.0) * smooth(11.0 - x);
        let u0: Vec<f64> = (0..n)
            .map(|j| {
                let x = j as f64 * h;
                window(x) * (xi * x).cos()
            })
            .collect();
        let v0: Vec<f64> = (0..n)
            .map(|j| {
                let x = j as f64 * h;
                window(x) * omega * (xi * x).sin()
            })
            .collect();
        let y0 = State1d::from_initial(p, &u0, &v0);

        let period = 2.0 * std::f64::consts::PI / omega;
        let t_settle = 6.0;
        let dt = h / 8.0;
        let mut ws = s.workspace();
        let mut amps = vec![0.0f64; n];
        rk_integrate(
            fehlberg78(),
            |_t, y: &[f64], dy: &mut [f64]| s.rhs(y, dy, &mut ws),
            &y0.data,
            0.0,
            t_settle + 2.0 * period,
            dt,
            None,
            |t, y| {
                if t >= t_settle {
                    for (a, uj) in amps.iter_mut().zip(&y[..n]) {
                        *a = a.max(uj.abs());
                    }
                }
            },
        )
        .unwrap();

        let rho = decay_factor(sigma_val, num_complex::Complex64::new(xi, 0.0), omega, h)
            .unwrap()
            .norm();
        for j in pml_start + 2..pml_start + 8 {
            let ratio = amps[j + 1] / amps[j];
            assert!(
                (ratio / rho - 1.0).abs() < 0.01,
                "node {j}: ratio {ratio} vs rho {rho}"
            );
        }
    }

    /// The holomorphically extended steady mode (amplitude profile given by
    /// the running product of decay factors) is stationary for the
    /// semi-discrete system: d/dt of every block equals -i omega times the
    /// block.
    #[test]
    fn holomorphic_steady_state_is_stationary() {
        use num_complex::Complex64 as C;
        let (p, h, n, j0) = (1usize, 0.05f64, 300usize, 150usize);
        let sigma_val = 20.0;
        let st = StencilCoeffs::<f64>::new(p, h).unwrap();
        let xi = 5.4;
        let omega = discrete_omega(&st, xi, h);
        let i = C::i();
        let rho = decay_factor(sigma_val, C::new(xi, 0.0), omega, h).unwrap();

        let vt: Vec<C> = (0..n)
            .map(|j| {
                let w = (i * xi * (j as f64) * h).exp();
                w * rho.powi((j as i32 - j0 as i32).max(0))
            })
            .collect();
        let sig: Vec<f64> = (0..n).map(|j| if j >= j0 { sigma_val } else { 0.0 }).collect();

        // Auxiliary steady states from the transport relations: forward
        // substitution for phi, backward for psi.
        let cdiff = |j: usize| (vt[(j + 1).min(n - 1)] - vt[j.saturating_sub(1)]) / (2.0 * h);
        let mut phi = vec![C::new(0.0, 0.0); n];
        for j in 1..n {
            let prev = phi[j - 1];
            phi[j] = (cdiff(j) + sig[j - 1] / 2.0 * prev) / (i * omega - sig[j] / 2.0);
        }
        let mut psi = vec![C::new(0.0, 0.0); n];
        for j in (1..n - 1).rev() {
            psi[j] = (cdiff(j) + sig[j] / 2.0 * psi[j + 1]) / (i * omega - sig[j - 1] / 2.0);
        }

        let sim = Sim1d::new(
            Grid1d::new(0.0, h, n, Bc1d::Periodic),
            st,
            DampingProfile::custom(sig).unwrap(),
        )
        .unwrap();
        let dim = sim.state_dim();
        let pack = |part: fn(&C) -> f64| {
            let mut y = vec![0.0; dim];
            for j in 0..n {
                y[j] = part(&vt[j]);
                y[n + j] = part(&(-i * omega * vt[j]));
                y[2 * n + j] = part(&phi[j]);
                y[3 * n + j] = part(&psi[j]);
            }
            y
        };
        let yre = pack(|c| c.re);
        let yim = pack(|c| c.im);
        let mut ws = sim.workspace();
        let mut dre = vec![0.0; dim];
        let mut dim_ = vec![0.0; dim];
        sim.rhs(&yre, &mut dre, &mut ws);
        sim.rhs(&yim, &mut dim_, &mut ws);

        let blocks: [(usize, Box<dyn Fn(usize) -> C>); 3] = [
            (n, Box::new(|j| -omega * omega * vt[j])),
            (2 * n, Box::new(|j| -i * omega * phi[j])),
            (3 * n, Box::new(|j| -i * omega * psi[j])),
        ];
        for (base, expect) in blocks {
            for j in 60..n - 20 {
                let got = C::new(dre[base + j], dim_[base + j]);
                let e = (got - expect(j)).norm();
                assert!(e < 1e-10, "block at {base}, node {j}: residual {e}");
            }
        }
    }

    /// A left-sided layer absorbs the mirrored problem at the mirrored
    /// rates: reflecting data and profile reproduces the right-sided run.
    #[test]
    fn left_layer_mirrors_right_layer() {
        let (p, n, h) = (2usize, 96usize, 0.1);
        let m = n - 1;
        let sigma_r = DampingProfile::right_constant(n, 72, 15.0).unwrap();
        // sigma_l[j] = sigma_r[m-1-j], with the -1 wrapped periodically
        let vals_l: Vec<f64> =
            (0..n).map(|j| sigma_r.values()[(m + n - 1 - j) % n]).collect();
        let sigma_l = DampingProfile::custom(vals_l).unwrap();
        let right = sim(p, n, h, sigma_r, Bc1d::Periodic);
        let left = sim(p, n, h, sigma_l, Bc1d::Periodic);

        let u0: Vec<f64> =
            (0..n).map(|j| (-8.0 * (j as f64 * h - 3.0).powi(2)).exp()).collect();
        let v0: Vec<f64> = (0..n).map(|j| 16.0 * (j as f64 * h - 3.0) * u0[j]).collect();
        let y0 = State1d::from_initial(p, &u0, &v0);
        let u0m: Vec<f64> = (0..n).map(|j| u0[m - j]).collect();
        let v0m: Vec<f64> = (0..n).map(|j| v0[m - j]).collect();
        let y0m = State1d::from_initial(p, &u0m, &v0m);

        let dt = h / 8.0;
        let mut ws = right.workspace();
        let yr = rk_integrate(
            fehlberg78(),
            |_t, y: &[f64], dy: &mut [f64]| right.rhs(y, dy, &mut ws),
            &y0.data,
            0.0,
            2.0,
            dt,
            None,
            |_, _| {},
        )
        .unwrap();
        let mut ws = left.workspace();
        let yl = rk_integrate(
            fehlberg78(),
            |_t, y: &[f64], dy: &mut [f64]| left.rhs(y, dy, &mut ws),
            &y0m.data,
            0.0,
            2.0,
            dt,
            None,
            |_, _| {},
        )
        .unwrap();
        let scale = yr[..n].iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        for j in 0..n {
            assert!(
                (yl[j] - yr[m - j]).abs() <= 1e-12 * scale.max(1.0),
                "u mirror at {j}"
            );
        }
    }

    /// Wall-terminated layers stay reflectionless: a pulse run with a
    /// two-sided damped region and Dirichlet walls agrees with a free-space
    /// reference on the undamped nodes to 1e-10.
    #[test]
    fn dirichlet_terminated_layers_are_reflectionless() {
        for p in [1usize, 2] {
            let h = 0.5f64.powi(5);
            // domain (-4, 4), damped on (-4,-3) and (3,4), walls at +-4
            let n = (8.0 / h) as usize + 1;
            let i_left = (1.0 / h) as usize;
            let i_right = (7.0 / h) as usize;
            let sigma = DampingProfile::two_sided(n, i_left, i_right, 2.0 / h).unwrap();
            let grid = Grid1d::new(
                -4.0,
                h,
                n,
                Bc1d::Walls { left: WallKind::Dirichlet, right: WallKind::Dirichlet },
            );
            let s = Sim1d::new(grid, StencilCoeffs::new(p, h).unwrap(), sigma).unwrap();

            // reference: plain periodic scheme on (-12, 12)
            let nref = (24.0 / h) as usize;
            let gref = Grid1d::new(-12.0, h, nref, Bc1d::Periodic);
            let plain = PlainWave1d::new(gref, StencilCoeffs::new(p, h).unwrap()).unwrap();
            let off = (8.0 / h) as usize; // x = -4 in the reference grid

            let bump = |x: f64| if x.abs() <= 2.0 { (-10.0 * x * x).exp() } else { 0.0 };
            let u0: Vec<f64> = (0..n).map(|j| bump(-4.0 + j as f64 * h)).collect();
            let y0 = State1d::from_initial(p, &u0, &vec![0.0; n]);
            let mut z0: Vec<f64> = (0..nref).map(|j| bump(-12.0 + j as f64 * h)).collect();
            z0.extend(std::iter::repeat(0.0).take(nref));

            let dt = h / 8.0;
            let steps = (4.0 / dt) as usize;
            let mut ws = s.workspace();
            let mut pad = Vec::new();
            let mut y = y0.data.clone();
            let mut z = z0.clone();
            let mut stepper_y = RkStepper::new(fehlberg78(), y.len());
            let mut stepper_z = RkStepper::new(fehlberg78(), z.len());
            let mut worst = 0.0f64;
            for step in 0..steps {
                let t = step as f64 * dt;
                stepper_y.step(
                    &mut |_t, y: &[f64], dy: &mut [f64]| s.rhs(y, dy, &mut ws),
                    t,
                    dt,
                    &mut y,
                    None,
                );
                stepper_z.step(
                    &mut |_t, z: &[f64], dz: &mut [f64]| plain.rhs(z, dz, &mut pad),
                    t,
                    dt,
                    &mut z,
                    None,
                );
                for j in i_left..=i_right {
                    worst = worst.max((y[j] - z[off + j]).abs());
                }
            }
            assert!(worst <= 1e-10, "p={p}: reflection level {worst}");
        }
    }

    /// Same pulse with a right-going layer terminated by a Neumann wall.
    #[test]
    fn neumann_terminated_layer_is_reflectionless() {
        for p in [1usize, 2] {
            let h = 0.5f64.powi(5);
            // domain (-8, 2): physical (-8, 1), damped (1, 2), Neumann at 2,
            // Dirichlet far wall at -8 (not reached before t = 5).
            let n = (10.0 / h) as usize + 1;
            let i_pml = (9.0 / h) as usize;
            let sigma = DampingProfile::right_constant(n, i_pml, 2.0 / h).unwrap();
            let grid = Grid1d::new(
                -8.0,
                h,
                n,
                Bc1d::Walls { left: WallKind::Dirichlet, right: WallKind::Neumann },
            );
            let s = Sim1d::new(grid, StencilCoeffs::new(p, h).unwrap(), sigma).unwrap();

            let nref = (32.0 / h) as usize;
            let gref = Grid1d::new(-20.0, h, nref, Bc1d::Periodic);
            let plain = PlainWave1d::new(gref, StencilCoeffs::new(p, h).unwrap()).unwrap();
            let off = (12.0 / h) as usize;

            let bump = |x: f64| {
                let y: f64 = x + 1.0;
                if y.abs() <= 1.4 {
                    (-20.0 * y * y).exp()
                } else {
                    0.0
                }
            };
            let u0: Vec<f64> = (0..n).map(|j| bump(-8.0 + j as f64 * h)).collect();
            let y0 = State1d::from_initial(p, &u0, &vec![0.0; n]);
            let mut z0: Vec<f64> = (0..nref).map(|j| bump(-20.0 + j as f64 * h)).collect();
            z0.extend(std::iter::repeat(0.0).take(nref));

            let dt = h / 8.0;
            let steps = (5.0 / dt) as usize;
            let mut ws = s.workspace();
            let mut pad = Vec::new();
            let mut y = y0.data.clone();
            let mut z = z0.clone();
            let mut sy = RkStepper::new(fehlberg78(), y.len());
            let mut sz = RkStepper::new(fehlberg78(), z.len());
            let mut worst = 0.0f64;
            for step in 0..steps {
                let t = step as f64 * dt;
                sy.step(
                    &mut |_t, y: &[f64], dy: &mut [f64]| s.rhs(y, dy, &mut ws),
                    t,
                    dt,
                    &mut y,
                    None,
                );
                sz.step(
                    &mut |_t, z: &[f64], dz: &mut [f64]| plain.rhs(z, dz, &mut pad),
                    t,
                    dt,
                    &mut z,
                    None,
                );
                for j in 0..i_pml {
                    worst = worst.max((y[j] - z[off + j]).abs());
                }
            }
            assert!(worst <= 1e-10, "p={p}: reflection level {worst}");
        }
    }

    #[test]
    fn wall_bc_rejects_high_order() {
        let n = 32;
        let grid = Grid1d::new(
            0.0,
            0.1,
            n,
            Bc1d::Walls { left: WallKind::Dirichlet, right: WallKind::Dirichlet },
        );
        let res =
            Sim1d::new(grid, StencilCoeffs::new(3, 0.1).unwrap(), DampingProfile::zero(n));
        assert!(matches!(res, Err(Error::UnsupportedOrder { p: 3, max: 2 })));
    }

    /// Periodic ghost identities of the packed state match the wrap rule
    /// u_{N+j} = u_j (likewise for the auxiliaries), and filling twice is
    /// idempotent.
    #[test]
    fn periodic_ghosts_wrap_and_are_idempotent() {
        let (p, n) = (2usize, 9usize);
        let mut buf = vec![0.0; n + 2 * p];
        for j in 0..n {
            buf[p + j] = j as f64 + 1.0;
        }
        fill_ghosts::<f64, f64>(&mut buf, p, &Closure1d::Periodic);
        assert_eq!(buf[p + n], buf[p]); // u_N = u_0
        assert_eq!(buf[p + n + 1], buf[p + 1]); // u_{N+1} = u_1
        assert_eq!(buf[p - 1], buf[p + n - 1]); // u_{-1} = u_{N-1}
        let snapshot = buf.clone();
        fill_ghosts::<f64, f64>(&mut buf, p, &Closure1d::Periodic);
        assert_eq!(buf, snapshot);
    }
}
