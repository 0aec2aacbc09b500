//! Semi-discrete right-hand side for the 2D wave equation with per-axis PML
//! auxiliary variables.
//!
//! All machinery is the tensor product of the 1D construction: the x-family
//! auxiliaries evolve along rows with the x spacing and damping profile, the
//! y-family along columns with theirs. Anisotropic spacing is supported by
//! giving each axis its own stencil. No special corner equations exist; the
//! two families superpose where both profiles are positive.

use crate::dispersion::DampingProfile;
use crate::error::{Error, Result};
use crate::rdpml1d::{fill_wall_ghosts, right_closure_line, WallKind};
use crate::scalar::Scalar;
use crate::stencil::{apply_padded, fill_ghosts, Closure1d, StencilCoeffs};

/// Boundary condition along one grid axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisBc {
    Periodic,
    Walls { left: WallKind, right: WallKind },
}

/// Uniform tensor grid, anisotropic spacing allowed.
#[derive(Debug, Clone)]
pub struct Grid2d<S> {
    pub x0: S,
    pub y0: S,
    pub h1: S,
    pub h2: S,
    pub nx: usize,
    pub ny: usize,
    pub bc_x: AxisBc,
    pub bc_y: AxisBc,
}

impl<S: Scalar> Grid2d<S> {
    pub fn x(&self, j: usize) -> S {
        self.x0 + self.h1 * S::from_index(j)
    }

    pub fn y(&self, k: usize) -> S {
        self.y0 + self.h2 * S::from_index(k)
    }

    pub fn nodes(&self) -> usize {
        self.nx * self.ny
    }
}

/// Packed 2D state `(u, v, phix^(1..p), psix^(1..p), phiy^(1..p),
/// psiy^(1..p))`, each block `nx * ny` in row-major layout (x fastest).
///
/// With `r = 1..=p`, block `1 + r` holds `phix^(r)`, `1 + p + r` holds
/// `psix^(r)`, `1 + 2p + r` holds `phiy^(r)`, `1 + 3p + r` holds `psiy^(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct State2d<S> {
    pub p: usize,
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> State2d<S> {
    pub fn zeros(p: usize, nx: usize, ny: usize) -> Self {
        Self { p, nx, ny, data: vec![S::zero(); (2 + 4 * p) * nx * ny] }
    }

    pub fn from_initial(p: usize, nx: usize, ny: usize, u: &[S], v: &[S]) -> Self {
        assert_eq!(u.len(), nx * ny);
        assert_eq!(v.len(), nx * ny);
        let mut s = Self::zeros(p, nx, ny);
        let nn = nx * ny;
        s.data[..nn].copy_from_slice(u);
        s.data[nn..2 * nn].copy_from_slice(v);
        s
    }

    pub fn u(&self) -> &[S] {
        &self.data[..self.nx * self.ny]
    }

    pub fn v(&self) -> &[S] {
        &self.data[self.nx * self.ny..2 * self.nx * self.ny]
    }
}

/// Scratch buffers reused by [`Sim2d::rhs`].
#[derive(Debug, Clone)]
pub struct Workspace2d<S> {
    ux_pad: Vec<S>,
    phix_pad: Vec<Vec<S>>,
    psix_pad: Vec<Vec<S>>,
    line_x: Vec<S>,
    uy_pad: Vec<S>,
    phiy_pad: Vec<Vec<S>>,
    psiy_pad: Vec<Vec<S>>,
    line_y: Vec<S>,
    dphi_line: Vec<Vec<S>>,
    dpsi_line: Vec<Vec<S>>,
    du_scratch: Vec<S>,
}

impl<S: Scalar> Workspace2d<S> {
    fn new(p: usize, nx: usize, ny: usize) -> Self {
        let m = nx.max(ny);
        Self {
            ux_pad: vec![S::zero(); nx + 2 * p],
            phix_pad: vec![vec![S::zero(); nx + 2 * p]; p],
            psix_pad: vec![vec![S::zero(); nx + 2 * p]; p],
            line_x: vec![S::zero(); nx],
            uy_pad: vec![S::zero(); ny + 2 * p],
            phiy_pad: vec![vec![S::zero(); ny + 2 * p]; p],
            psiy_pad: vec![vec![S::zero(); ny + 2 * p]; p],
            line_y: vec![S::zero(); ny],
            dphi_line: vec![vec![S::zero(); m]; p],
            dpsi_line: vec![vec![S::zero(); m]; p],
            du_scratch: vec![S::zero(); m],
        }
    }
}

/// 2D RDPML right-hand-side evaluator.
#[derive(Debug, Clone)]
pub struct Sim2d<S> {
    grid: Grid2d<S>,
    stencil_x: StencilCoeffs<S>,
    stencil_y: StencilCoeffs<S>,
    sigma_x: DampingProfile<S>,
    sigma_y: DampingProfile<S>,
    sigx_pad: Vec<S>,
    sigy_pad: Vec<S>,
    active_x: Vec<bool>,
    active_y: Vec<bool>,
}

fn pad_sigma<S: Scalar>(sigma: &DampingProfile<S>, p: usize, bc: AxisBc) -> Vec<S> {
    let n = sigma.len();
    let mut pad = vec![S::zero(); n + 2 * p];
    pad[p..p + n].copy_from_slice(sigma.values());
    if bc == AxisBc::Periodic {
        fill_ghosts::<S, S>(&mut pad, p, &Closure1d::Periodic);
    }
    pad
}

fn active_flags<S: Scalar>(pad: &[S], p: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| pad[j..=j + 2 * p].iter().any(|&s| s > S::zero())).collect()
}

impl<S: Scalar> Sim2d<S> {
    pub fn new(
        grid: Grid2d<S>,
        p: usize,
        sigma_x: DampingProfile<S>,
        sigma_y: DampingProfile<S>,
    ) -> Result<Self> {
        if sigma_x.len() != grid.nx || sigma_y.len() != grid.ny {
            return Err(Error::invalid("damping profile lengths must match the grid"));
        }
        if grid.nx < 2 * p + 6 || grid.ny < 2 * p + 6 {
            return Err(Error::invalid("grid too small for the stencil"));
        }
        let stencil_x = StencilCoeffs::new(p, grid.h1)?;
        let stencil_y = StencilCoeffs::new(p, grid.h2)?;
        if let AxisBc::Walls { left, right } = grid.bc_x {
            let (lo, hi) = sigma_x.support();
            if lo < hi && p > 2 {
                return Err(Error::UnsupportedOrder { p, max: 2 });
            }
            if lo < hi && lo < p + 2 {
                return Err(Error::invalid("x damping may not touch the left wall"));
            }
            if right == WallKind::Neumann || left == WallKind::Neumann {
                return Err(Error::invalid("2D Neumann walls are not supported"));
            }
        }
        if let AxisBc::Walls { left, right } = grid.bc_y {
            if sigma_y.support().0 < sigma_y.support().1 {
                return Err(Error::invalid("y damping with walls is not supported"));
            }
            if right == WallKind::Neumann || left == WallKind::Neumann {
                return Err(Error::invalid("2D Neumann walls are not supported"));
            }
        }
        let sigx_pad = pad_sigma(&sigma_x, p, grid.bc_x);
        let sigy_pad = pad_sigma(&sigma_y, p, grid.bc_y);
        let active_x = active_flags(&sigx_pad, p, grid.nx);
        let active_y = active_flags(&sigy_pad, p, grid.ny);
        Ok(Self {
            grid,
            stencil_x,
            stencil_y,
            sigma_x,
            sigma_y,
            sigx_pad,
            sigy_pad,
            active_x,
            active_y,
        })
    }

    pub fn grid(&self) -> &Grid2d<S> {
        &self.grid
    }

    pub fn half_width(&self) -> usize {
        self.stencil_x.half_width()
    }

    pub fn sigma_x(&self) -> &DampingProfile<S> {
        &self.sigma_x
    }

    pub fn sigma_y(&self) -> &DampingProfile<S> {
        &self.sigma_y
    }

    pub fn state_dim(&self) -> usize {
        (2 + 4 * self.half_width()) * self.grid.nodes()
    }

    pub fn workspace(&self) -> Workspace2d<S> {
        Workspace2d::new(self.half_width(), self.grid.nx, self.grid.ny)
    }

    /// Evaluates the semi-discrete right-hand side `dy = F(y)`.
    ///
    /// Evaluation order is fixed: the y-axis family sweeps columns first
    /// (writing `dv`), then the x-axis family sweeps rows (accumulating).
    pub fn rhs(&self, y: &[S], dy: &mut [S], ws: &mut Workspace2d<S>) {
        let p = self.half_width();
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let nn = nx * ny;
        debug_assert_eq!(y.len(), self.state_dim());

        let u = &y[..nn];
        let v = &y[nn..2 * nn];
        let phix: Vec<&[S]> = (0..p).map(|r| &y[(2 + r) * nn..(3 + r) * nn]).collect();
        let psix: Vec<&[S]> = (0..p).map(|r| &y[(2 + p + r) * nn..(3 + p + r) * nn]).collect();
        let phiy: Vec<&[S]> =
            (0..p).map(|r| &y[(2 + 2 * p + r) * nn..(3 + 2 * p + r) * nn]).collect();
        let psiy: Vec<&[S]> =
            (0..p).map(|r| &y[(2 + 3 * p + r) * nn..(3 + 3 * p + r) * nn]).collect();

        let mut blocks: Vec<&mut [S]> = dy.chunks_mut(nn).collect();
        let (du_b, rest) = blocks.split_at_mut(1);
        let (dv_b, daux) = rest.split_at_mut(1);
        let du: &mut [S] = du_b[0];
        let dv: &mut [S] = dv_b[0];
        let (dphix, rest) = daux.split_at_mut(p);
        let (dpsix, rest) = rest.split_at_mut(p);
        let (dphiy, dpsiy) = rest.split_at_mut(p);

        du.copy_from_slice(v);

        // ---- y-axis family: sweep columns, write dv ----
        let hy = self.grid.h2;
        for j in 0..nx {
            for k in 0..ny {
                ws.uy_pad[p + k] = u[k * nx + j];
                for r in 0..p {
                    ws.phiy_pad[r][p + k] = phiy[r][k * nx + j];
                    ws.psiy_pad[r][p + k] = psiy[r][k * nx + j];
                }
            }
            match self.grid.bc_y {
                AxisBc::Periodic => {
                    fill_ghosts::<S, S>(&mut ws.uy_pad, p, &Closure1d::Periodic);
                    for r in 0..p {
                        fill_ghosts::<S, S>(&mut ws.phiy_pad[r], p, &Closure1d::Periodic);
                        fill_ghosts::<S, S>(&mut ws.psiy_pad[r], p, &Closure1d::Periodic);
                    }
                }
                AxisBc::Walls { left, right } => {
                    fill_wall_ghosts(&mut ws.uy_pad, p, left, right);
                    for r in 0..p {
                        ws.phiy_pad[r][..p].fill(S::zero());
                        ws.phiy_pad[r][p + ny..].fill(S::zero());
                        ws.psiy_pad[r][..p].fill(S::zero());
                        ws.psiy_pad[r][p + ny..].fill(S::zero());
                    }
                }
            }

            apply_padded(&ws.uy_pad, &self.stencil_y, &mut ws.line_y);
            axis_coupling(
                &self.stencil_y,
                hy,
                &self.sigy_pad,
                &self.active_y,
                &ws.phiy_pad,
                &ws.psiy_pad,
                &mut ws.line_y,
            );
            axis_transport(
                hy,
                p,
                &self.sigy_pad,
                &self.active_y,
                &ws.uy_pad,
                &ws.phiy_pad,
                &ws.psiy_pad,
                &mut ws.dphi_line,
                &mut ws.dpsi_line,
                ny,
            );
            for k in 0..ny {
                dv[k * nx + j] = ws.line_y[k];
                for r in 0..p {
                    dphiy[r][k * nx + j] = ws.dphi_line[r][k];
                    dpsiy[r][k * nx + j] = ws.dpsi_line[r][k];
                }
            }
        }

        // ---- x-axis family: sweep rows, accumulate into dv ----
        let hx = self.grid.h1;
        for k in 0..ny {
            let row = k * nx..(k + 1) * nx;
            ws.ux_pad[p..p + nx].copy_from_slice(&u[row.clone()]);
            for r in 0..p {
                ws.phix_pad[r][p..p + nx].copy_from_slice(&phix[r][row.clone()]);
                ws.psix_pad[r][p..p + nx].copy_from_slice(&psix[r][row.clone()]);
            }
            match self.grid.bc_x {
                AxisBc::Periodic => {
                    fill_ghosts::<S, S>(&mut ws.ux_pad, p, &Closure1d::Periodic);
                    for r in 0..p {
                        fill_ghosts::<S, S>(&mut ws.phix_pad[r], p, &Closure1d::Periodic);
                        fill_ghosts::<S, S>(&mut ws.psix_pad[r], p, &Closure1d::Periodic);
                    }
                }
                AxisBc::Walls { left, right } => {
                    fill_wall_ghosts(&mut ws.ux_pad, p, left, right);
                    for r in 0..p {
                        ws.phix_pad[r][..p].fill(S::zero());
                        ws.phix_pad[r][p + nx..].fill(S::zero());
                        ws.psix_pad[r][..p].fill(S::zero());
                        ws.psix_pad[r][p + nx..].fill(S::zero());
                    }
                }
            }

            apply_padded(&ws.ux_pad, &self.stencil_x, &mut ws.line_x);
            axis_coupling(
                &self.stencil_x,
                hx,
                &self.sigx_pad,
                &self.active_x,
                &ws.phix_pad,
                &ws.psix_pad,
                &mut ws.line_x,
            );
            axis_transport(
                hx,
                p,
                &self.sigx_pad,
                &self.active_x,
                &ws.ux_pad,
                &ws.phix_pad,
                &ws.psix_pad,
                &mut ws.dphi_line,
                &mut ws.dpsi_line,
                nx,
            );

            // The damping-layer termination replaces the x-axis parts of the
            // end-node equations before they are merged into dv.
            if let AxisBc::Walls { right, .. } = self.grid.bc_x {
                let u_row = &u[row.clone()];
                let phi_rows: Vec<&[S]> = phix.iter().map(|b| &b[row.clone()]).collect();
                let psi_rows: Vec<&[S]> = psix.iter().map(|b| &b[row.clone()]).collect();
                let mut dphi_refs: Vec<&mut [S]> =
                    ws.dphi_line.iter_mut().map(|b| &mut b[..nx]).collect();
                let mut dpsi_refs: Vec<&mut [S]> =
                    ws.dpsi_line.iter_mut().map(|b| &mut b[..nx]).collect();
                right_closure_line(
                    &self.stencil_x,
                    hx,
                    self.sigma_x.values(),
                    right,
                    u_row,
                    &phi_rows,
                    &psi_rows,
                    &mut ws.du_scratch[..nx],
                    &mut ws.line_x,
                    &mut dphi_refs,
                    &mut dpsi_refs,
                );
            }

            for (acc, add) in dv[row.clone()].iter_mut().zip(ws.line_x.iter()) {
                *acc += *add;
            }
            for r in 0..p {
                dphix[r][row.clone()].copy_from_slice(&ws.dphi_line[r][..nx]);
                dpsix[r][row.clone()].copy_from_slice(&ws.dpsi_line[r][..nx]);
            }
        }

        // ---- held wall nodes ----
        let nb = 2 + 4 * p;
        if let AxisBc::Walls { .. } = self.grid.bc_x {
            let mut all: Vec<&mut [S]> = Vec::with_capacity(nb);
            all.push(du);
            all.push(dv);
            for b in dphix.iter_mut() {
                all.push(b);
            }
            for b in dpsix.iter_mut() {
                all.push(b);
            }
            for b in dphiy.iter_mut() {
                all.push(b);
            }
            for b in dpsiy.iter_mut() {
                all.push(b);
            }
            for block in all {
                for k in 0..ny {
                    block[k * nx] = S::zero();
                    block[k * nx + nx - 1] = S::zero();
                }
            }
        }
        if let AxisBc::Walls { .. } = self.grid.bc_y {
            let mut all: Vec<&mut [S]> = Vec::with_capacity(nb);
            all.push(du);
            all.push(dv);
            for b in dphix.iter_mut() {
                all.push(b);
            }
            for b in dpsix.iter_mut() {
                all.push(b);
            }
            for b in dphiy.iter_mut() {
                all.push(b);
            }
            for b in dpsiy.iter_mut() {
                all.push(b);
            }
            for block in all {
                for j in 0..nx {
                    block[j] = S::zero();
                    block[(ny - 1) * nx + j] = S::zero();
                }
            }
        }
    }
}

/// Adds the damping coupling of one axis family to a `dv` line.
fn axis_coupling<S: Scalar>(
    stencil: &StencilCoeffs<S>,
    h: S,
    sig: &[S],
    active: &[bool],
    phi_pad: &[Vec<S>],
    psi_pad: &[Vec<S>],
    line: &mut [S],
) {
    let p = stencil.half_width();
    for (j, out) in line.iter_mut().enumerate() {
        if !active[j] {
            continue;
        }
        let c = j + p;
        let mut acc = S::zero();
        for r in 1..=p {
            let ar = stencil.weight(r as isize);
            let mut inner = S::zero();
            for l in 1..=r {
                let s = r + 1 - l;
                inner +=
                    sig[c + l - 1] * psi_pad[s - 1][c + l] - sig[c - l] * phi_pad[s - 1][c - l];
            }
            acc += h * ar * inner;
        }
        *out += acc;
    }
}

/// Auxiliary transport equations of one axis family along a line.
#[allow(clippy::too_many_arguments)]
fn axis_transport<S: Scalar>(
    h: S,
    p: usize,
    sig: &[S],
    active: &[bool],
    u_pad: &[S],
    phi_pad: &[Vec<S>],
    psi_pad: &[Vec<S>],
    dphi: &mut [Vec<S>],
    dpsi: &mut [Vec<S>],
    n: usize,
) {
    let inv2h = S::one() / (h + h);
    let half = S::real(0.5);
    for r in 1..=p {
        for j in 0..n {
            let c = j + p;
            let mut dp = -(u_pad[c + 2 - r] - u_pad[c - r]) * inv2h;
            let mut ds = -(u_pad[c + r] - u_pad[c + r - 2]) * inv2h;
            if active[j] {
                dp -= (sig[c] * phi_pad[r - 1][c] + sig[c - 1] * phi_pad[r - 1][c - 1]) * half;
                ds -= (sig[c - 1] * psi_pad[r - 1][c] + sig[c] * psi_pad[r - 1][c + 1]) * half;
                for l in 1..r {
                    let f = r - l;
                    dp -= (sig[c - 1 - l] * phi_pad[f - 1][c - 1 - l]
                        - sig[c + 1 - l] * phi_pad[f - 1][c + 1 - l])
                        * half;
                    ds -= (sig[c + l] * psi_pad[f - 1][c + l + 1]
                        - sig[c + l - 2] * psi_pad[f - 1][c + l - 1])
                        * half;
                }
            }
            dphi[r - 1][j] = dp;
            dpsi[r - 1][j] = ds;
        }
    }
}

/// Plain 2D method-of-lines wave scheme (`u`, `v` only).
#[derive(Debug, Clone)]
pub struct PlainWave2d<S> {
    grid: Grid2d<S>,
    stencil_x: StencilCoeffs<S>,
    stencil_y: StencilCoeffs<S>,
}

/// Scratch for [`PlainWave2d::rhs`].
#[derive(Debug, Clone)]
pub struct PlainWorkspace2d<S> {
    ux_pad: Vec<S>,
    uy_pad: Vec<S>,
    line_x: Vec<S>,
    line_y: Vec<S>,
}

impl<S: Scalar> PlainWave2d<S> {
    pub fn new(grid: Grid2d<S>, p: usize) -> Result<Self> {
        let stencil_x = StencilCoeffs::new(p, grid.h1)?;
        let stencil_y = StencilCoeffs::new(p, grid.h2)?;
        if grid.nx < 2 * p + 3 || grid.ny < 2 * p + 3 {
            return Err(Error::invalid("grid too small for the stencil"));
        }
        Ok(Self { grid, stencil_x, stencil_y })
    }

    pub fn grid(&self) -> &Grid2d<S> {
        &self.grid
    }

    pub fn state_dim(&self) -> usize {
        2 * self.grid.nodes()
    }

    pub fn workspace(&self) -> PlainWorkspace2d<S> {
        let p = self.stencil_x.half_width();
        PlainWorkspace2d {
            ux_pad: vec![S::zero(); self.grid.nx + 2 * p],
            uy_pad: vec![S::zero(); self.grid.ny + 2 * p],
            line_x: vec![S::zero(); self.grid.nx],
            line_y: vec![S::zero(); self.grid.ny],
        }
    }

    pub fn rhs(&self, y: &[S], dy: &mut [S], ws: &mut PlainWorkspace2d<S>) {
        let p = self.stencil_x.half_width();
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let nn = nx * ny;
        let (u, v) = y.split_at(nn);
        let (du, dv) = dy.split_at_mut(nn);
        du.copy_from_slice(v);

        for j in 0..nx {
            for k in 0..ny {
                ws.uy_pad[p + k] = u[k * nx + j];
            }
            match self.grid.bc_y {
                AxisBc::Periodic => fill_ghosts::<S, S>(&mut ws.uy_pad, p, &Closure1d::Periodic),
                AxisBc::Walls { left, right } => fill_wall_ghosts(&mut ws.uy_pad, p, left, right),
            }
            apply_padded(&ws.uy_pad, &self.stencil_y, &mut ws.line_y);
            for k in 0..ny {
                dv[k * nx + j] = ws.line_y[k];
            }
        }
        for k in 0..ny {
            let row = k * nx..(k + 1) * nx;
            ws.ux_pad[p..p + nx].copy_from_slice(&u[row.clone()]);
            match self.grid.bc_x {
                AxisBc::Periodic => fill_ghosts::<S, S>(&mut ws.ux_pad, p, &Closure1d::Periodic),
                AxisBc::Walls { left, right } => fill_wall_ghosts(&mut ws.ux_pad, p, left, right),
            }
            apply_padded(&ws.ux_pad, &self.stencil_x, &mut ws.line_x);
            for (acc, add) in dv[row].iter_mut().zip(ws.line_x.iter()) {
                *acc += *add;
            }
        }

        if let AxisBc::Walls { .. } = self.grid.bc_x {
            for k in 0..ny {
                for block in [&mut *du, &mut *dv] {
                    block[k * nx] = S::zero();
                    block[k * nx + nx - 1] = S::zero();
                }
            }
        }
        if let AxisBc::Walls { .. } = self.grid.bc_y {
            for j in 0..nx {
                for block in [&mut *du, &mut *dv] {
                    block[j] = S::zero();
                    block[(ny - 1) * nx + j] = S::zero();
                }
            }
        }
    }
}
