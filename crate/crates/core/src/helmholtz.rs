//! Frequency-domain RDPML for the 1D time-harmonic wave equation: assembly
//! of the full block system in the auxiliary variables, the reduced
//! single-field system obtained by eliminating them, closed-form triangular
//! inverses of the bidiagonal transport operators, and a direct dense
//! complex solver.
//!
//! Unknown ordering of the full system is `(v, Phi^(1..p), Psi^(1..p))`,
//! each block of length `n`. Two truncations of the layer are supported:
//! `Periodic` identifies the array ends (the transport operators pick up a
//! wrap corner entry), `Clamped` drops all out-of-range couplings, leaving
//! the transport operators exactly lower/upper bidiagonal.

use num_complex::Complex;

use crate::dispersion::DampingProfile;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stencil::StencilCoeffs;

/// Domain truncation used by the assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Periodic,
    Clamped,
}

/// Compressed sparse rows over complex entries with named block layout.
#[derive(Debug, Clone)]
pub struct ComplexSparseMatrix<S> {
    pub nrows: usize,
    pub ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex<S>>,
    /// Named contiguous index ranges (same for rows and columns here).
    blocks: Vec<(String, std::ops::Range<usize>)>,
}

/// Triplet accumulator; duplicates are summed on finalization.
#[derive(Debug, Clone)]
pub struct CooBuilder<S> {
    nrows: usize,
    ncols: usize,
    triplets: Vec<(usize, usize, Complex<S>)>,
}

impl<S: Scalar> CooBuilder<S> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, triplets: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: Complex<S>) {
        debug_assert!(row < self.nrows && col < self.ncols);
        if value.norm_sqr() != S::zero() {
            self.triplets.push((row, col, value));
        }
    }

    pub fn finalize(
        mut self,
        blocks: Vec<(String, std::ops::Range<usize>)>,
    ) -> ComplexSparseMatrix<S> {
        self.triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.triplets.len());
        let mut values: Vec<Complex<S>> = Vec::with_capacity(self.triplets.len());
        let mut rows = Vec::with_capacity(self.triplets.len());
        for (r, c, v) in self.triplets {
            if let (Some(&lr), Some(&lc)) = (rows.last(), indices.last()) {
                if lr == r && lc == c {
                    let last = values.last_mut().unwrap();
                    *last = *last + v;
                    continue;
                }
            }
            rows.push(r);
            indices.push(c);
            values.push(v);
        }
        for &r in &rows {
            indptr[r + 1] += 1;
        }
        for i in 0..self.nrows {
            indptr[i + 1] += indptr[i];
        }
        ComplexSparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr,
            indices,
            values,
            blocks,
        }
    }
}

impl<S: Scalar> ComplexSparseMatrix<S> {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn blocks(&self) -> &[(String, std::ops::Range<usize>)] {
        &self.blocks
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<S> {
        let lo = self.indptr[row];
        let hi = self.indptr[row + 1];
        match self.indices[lo..hi].binary_search(&col) {
            Ok(k) => self.values[lo + k],
            Err(_) => Complex::new(S::zero(), S::zero()),
        }
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, Complex<S>)> + '_ {
        let lo = self.indptr[row];
        let hi = self.indptr[row + 1];
        self.indices[lo..hi].iter().copied().zip(self.values[lo..hi].iter().copied())
    }

    pub fn pattern(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, _)| (r, c)))
    }

    pub fn matvec(&self, x: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(x.len(), self.ncols);
        let mut out = vec![Complex::new(S::zero(), S::zero()); self.nrows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex::new(S::zero(), S::zero());
            for (c, v) in self.row(r) {
                acc = acc + v * x[c];
            }
            *o = acc;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Complex<S>> {
        let mut d = vec![Complex::new(S::zero(), S::zero()); self.nrows * self.ncols];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                d[r * self.ncols + c] = d[r * self.ncols + c] + v;
            }
        }
        d
    }
}

/// Per-block sparsity statistics of an assembled system.
#[derive(Debug, Clone)]
pub struct PatternSummary {
    pub dim: usize,
    pub nnz: usize,
    /// `(row block, col block, nnz, max |col offset - row offset|)`
    pub block_stats: Vec<(String, String, usize, usize)>,
}

/// Counts nonzeros and bandwidths per named block pair.
pub fn sparsity_report<S: Scalar>(m: &ComplexSparseMatrix<S>) -> PatternSummary {
    let find = |i: usize| {
        m.blocks
            .iter()
            .find(|(_, r)| r.contains(&i))
            .map(|(n, r)| (n.clone(), r.start))
            .unwrap_or_else(|| ("all".to_string(), 0))
    };
    let mut stats: std::collections::BTreeMap<(String, String), (usize, usize)> =
        Default::default();
    for (r, c) in m.pattern() {
        let (rb, r0) = find(r);
        let (cb, c0) = find(c);
        let band = ((r - r0) as isize - (c - c0) as isize).unsigned_abs();
        let e = stats.entry((rb, cb)).or_insert((0, 0));
        e.0 += 1;
        e.1 = e.1.max(band);
    }
    PatternSummary {
        dim: m.nrows,
        nnz: m.nnz(),
        block_stats: stats.into_iter().map(|((a, b), (n, w))| (a, b, n, w)).collect(),
    }
}

/// Which bidiagonal transport operator a closed-form inverse entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriSide {
    /// Lower bidiagonal (backward transport).
    C1,
    /// Upper bidiagonal (forward transport).
    C2,
}

/// Closed-form entry of the inverse of the clamped (triangular) transport
/// operator; structural zeros outside the triangle return 0.
pub fn triangular_inverse_entries<S: Scalar>(
    which: TriSide,
    omega: S,
    sigma: &[S],
    i: usize,
    j: usize,
) -> Result<Complex<S>> {
    if omega == S::zero() {
        return Err(Error::SingularFrequency);
    }
    let zero = Complex::new(S::zero(), S::zero());
    let two = Complex::new(S::real(2.0), S::zero());
    let m2iw = Complex::new(S::zero(), -(omega + omega));
    let sg = |k: usize| Complex::new(sigma[k], S::zero());
    match which {
        TriSide::C1 => {
            if j > i {
                return Ok(zero);
            }
            let sign = if (i + j) % 2 == 0 { S::one() } else { -S::one() };
            let mut acc = two * sign / (m2iw + sg(i));
            for l in j..i {
                acc = acc * (sg(l) / (m2iw + sg(l)));
            }
            Ok(acc)
        }
        TriSide::C2 => {
            if j < i {
                return Ok(zero);
            }
            let sign = if (i + j) % 2 == 0 { S::one() } else { -S::one() };
            let prev = if i == 0 { zero } else { sg(i - 1) };
            let mut acc = two * sign / (m2iw + prev);
            for l in i..j {
                acc = acc * (sg(l) / (m2iw + sg(l)));
            }
            Ok(acc)
        }
    }
}

/// Assembled full system together with its grid metadata.
#[derive(Debug, Clone)]
pub struct FullSystem<S> {
    pub matrix: ComplexSparseMatrix<S>,
    pub n: usize,
    pub p: usize,
    pub omega: S,
}

/// Frequency-domain solution split into its variable blocks.
#[derive(Debug, Clone)]
pub struct HelmholtzSolution<S> {
    pub v_tilde: Vec<Complex<S>>,
    pub phi_hat: Vec<Vec<Complex<S>>>,
    pub psi_hat: Vec<Vec<Complex<S>>>,
    pub omega: S,
}

fn wrap(i: isize, n: usize, trunc: Truncation) -> Option<usize> {
    match trunc {
        Truncation::Periodic => {
            let m = ((i % n as isize) + n as isize) % n as isize;
            Some(m as usize)
        }
        Truncation::Clamped => {
            if i >= 0 && (i as usize) < n {
                Some(i as usize)
            } else {
                None
            }
        }
    }
}

/// Assembles the full `(2p+1)n` block system: the wavefield rows
/// `(w^2 I + L_p) v + sum_r A_r Phi^(r) + sum_r B_r Psi^(r)` and the
/// bidiagonal transport rows below them.
pub fn assemble_full<S: Scalar>(
    omega: S,
    stencil: &StencilCoeffs<S>,
    sigma: &DampingProfile<S>,
    trunc: Truncation,
) -> Result<FullSystem<S>> {
    if omega == S::zero() {
        return Err(Error::SingularFrequency);
    }
    let p = stencil.half_width();
    let n = sigma.len();
    if n < 2 * p + 3 {
        return Err(Error::invalid("grid too small for the stencil"));
    }
    let h = stencil.spacing();
    let dim = (2 * p + 1) * n;
    let mut coo = CooBuilder::new(dim, dim);
    let zero = S::zero();
    let half = S::real(0.5);
    let inv2h = S::one() / (h + h);
    let sgv = sigma.values();
    let sg = |i: isize| -> S {
        match wrap(i, n, trunc) {
            Some(k) => sgv[k],
            None => zero,
        }
    };
    let vt = |j: usize| j;
    let phi = |r: usize, j: usize| r * n + j;
    let psi = |r: usize, j: usize| (p + r) * n + j;
    let cx = |re: S, im: S| Complex::new(re, im);

    for j in 0..n {
        let ji = j as isize;
        coo.push(vt(j), vt(j), cx(omega * omega + stencil.weight(0), zero));
        for r in 1..=p {
            let ar = stencil.weight(r as isize);
            if let Some(c) = wrap(ji + r as isize, n, trunc) {
                coo.push(vt(j), vt(c), cx(ar, zero));
            }
            if let Some(c) = wrap(ji - r as isize, n, trunc) {
                coo.push(vt(j), vt(c), cx(ar, zero));
            }
            for l in 1..=r {
                let s = r + 1 - l;
                if let Some(c) = wrap(ji + l as isize, n, trunc) {
                    coo.push(vt(j), psi(s, c), cx(h * ar * sg(ji + l as isize - 1), zero));
                }
                if let Some(c) = wrap(ji - l as isize, n, trunc) {
                    coo.push(vt(j), phi(s, c), cx(-(h * ar * sg(ji - l as isize)), zero));
                }
            }
        }

        for r in 1..=p {
            // phi^(r) row: D1 v + C1 phi^(r) + sum_l E_{r,l} phi^(l) = 0
            let row = phi(r, j);
            coo.push(row, row, cx(sg(ji) * half, -omega));
            if let Some(c) = wrap(ji - 1, n, trunc) {
                coo.push(row, phi(r, c), cx(sg(ji - 1) * half, zero));
            }
            if let Some(c) = wrap(ji - r as isize + 2, n, trunc) {
                coo.push(row, vt(c), cx(inv2h, zero));
            }
            if let Some(c) = wrap(ji - r as isize, n, trunc) {
                coo.push(row, vt(c), cx(-inv2h, zero));
            }
            for l in 1..r {
                let f = r - l;
                if let Some(c) = wrap(ji - 1 - l as isize, n, trunc) {
                    coo.push(row, phi(f, c), cx(sg(ji - 1 - l as isize) * half, zero));
                }
                if let Some(c) = wrap(ji + 1 - l as isize, n, trunc) {
                    coo.push(row, phi(f, c), cx(-(sg(ji + 1 - l as isize) * half), zero));
                }
            }

            // psi^(r) row: D2 v + C2 psi^(r) + sum_l F_{r,l} psi^(l) = 0
            let row = psi(r, j);
            coo.push(row, row, cx(sg(ji - 1) * half, -omega));
            if let Some(c) = wrap(ji + 1, n, trunc) {
                coo.push(row, psi(r, c), cx(sg(ji) * half, zero));
            }
            if let Some(c) = wrap(ji + r as isize, n, trunc) {
                coo.push(row, vt(c), cx(inv2h, zero));
            }
            if let Some(c) = wrap(ji + r as isize - 2, n, trunc) {
                coo.push(row, vt(c), cx(-inv2h, zero));
            }
            for l in 1..r {
                let f = r - l;
                if let Some(c) = wrap(ji + l as isize + 1, n, trunc) {
                    coo.push(row, psi(f, c), cx(sg(ji + l as isize) * half, zero));
                }
                if let Some(c) = wrap(ji + l as isize - 1, n, trunc) {
                    coo.push(row, psi(f, c), cx(-(sg(ji + l as isize - 2) * half), zero));
                }
            }
        }
    }

    let mut blocks = vec![("v".to_string(), 0..n)];
    for r in 1..=p {
        blocks.push((format!("phi{r}"), r * n..(r + 1) * n));
    }
    for r in 1..=p {
        blocks.push((format!("psi{r}"), (p + r) * n..(p + r + 1) * n));
    }
    Ok(FullSystem { matrix: coo.finalize(blocks), n, p, omega })
}

/// Solves the (possibly cyclic) lower bidiagonal system
/// `d_j x_j + l_j x_{j-1} = b_j` by forward substitution; in the periodic
/// case `l_0` couples to `x_{n-1}` and a rank-one consistency condition
/// fixes the wrap value.
fn solve_lower_bidiagonal<S: Scalar>(
    d: &[Complex<S>],
    l: &[Complex<S>],
    b: &[Complex<S>],
    cyclic: bool,
) -> Vec<Complex<S>> {
    let n = d.len();
    let zero = Complex::new(S::zero(), S::zero());
    if !cyclic {
        let mut x = vec![zero; n];
        for j in 0..n {
            let prev = if j == 0 { zero } else { x[j - 1] };
            x[j] = (b[j] - l[j] * prev) / d[j];
        }
        return x;
    }
    // x = alpha + zeta * beta with zeta = x_{n-1}.
    let mut alpha = vec![zero; n];
    let mut beta = vec![zero; n];
    alpha[0] = b[0] / d[0];
    beta[0] = -l[0] / d[0];
    for j in 1..n {
        alpha[j] = (b[j] - l[j] * alpha[j - 1]) / d[j];
        beta[j] = -(l[j] * beta[j - 1]) / d[j];
    }
    let one = Complex::new(S::one(), S::zero());
    let zeta = alpha[n - 1] / (one - beta[n - 1]);
    (0..n).map(|j| alpha[j] + zeta * beta[j]).collect()
}

/// Upper bidiagonal analogue (backward substitution): `d_j x_j + u_j
/// x_{j+1} = b_j`, with `u_{n-1}` coupling to `x_0` in the periodic case.
fn solve_upper_bidiagonal<S: Scalar>(
    d: &[Complex<S>],
    u: &[Complex<S>],
    b: &[Complex<S>],
    cyclic: bool,
) -> Vec<Complex<S>> {
    let n = d.len();
    let zero = Complex::new(S::zero(), S::zero());
    if !cyclic {
        let mut x = vec![zero; n];
        for j in (0..n).rev() {
            let next = if j + 1 == n { zero } else { x[j + 1] };
            x[j] = (b[j] - u[j] * next) / d[j];
        }
        return x;
    }
    let mut alpha = vec![zero; n];
    let mut beta = vec![zero; n];
    alpha[n - 1] = b[n - 1] / d[n - 1];
    beta[n - 1] = -u[n - 1] / d[n - 1];
    for j in (0..n - 1).rev() {
        alpha[j] = (b[j] - u[j] * alpha[j + 1]) / d[j];
        beta[j] = -(u[j] * beta[j + 1]) / d[j];
    }
    let one = Complex::new(S::one(), S::zero());
    let zeta = alpha[0] / (one - beta[0]);
    (0..n).map(|j| alpha[j] + zeta * beta[j]).collect()
}

/// Assembles the reduced system `(w^2 I + L_p) - A (E^-1 D1) - B (F^-1 D2)`
/// acting on the wavefield alone.
///
/// The auxiliary eliminations run family by family through the bidiagonal
/// transport solves (forward/backward substitution), so no inverse of `E`
/// or `F` is ever formed densely. The damped block of the result is dense.
pub fn assemble_reduced<S: Scalar>(
    omega: S,
    stencil: &StencilCoeffs<S>,
    sigma: &DampingProfile<S>,
    trunc: Truncation,
) -> Result<ComplexSparseMatrix<S>> {
    if omega == S::zero() {
        return Err(Error::SingularFrequency);
    }
    let p = stencil.half_width();
    let n = sigma.len();
    if n < 2 * p + 3 {
        return Err(Error::invalid("grid too small for the stencil"));
    }
    let h = stencil.spacing();
    let zero = Complex::new(S::zero(), S::zero());
    let half = S::real(0.5);
    let inv2h = S::one() / (h + h);
    let sgv = sigma.values();
    let sg = |i: isize| -> S {
        match wrap(i, n, trunc) {
            Some(k) => sgv[k],
            None => S::zero(),
        }
    };
    let cyclic = trunc == Truncation::Periodic;

    let d1: Vec<Complex<S>> =
        (0..n).map(|j| Complex::new(sg(j as isize) * half, -omega)).collect();
    let l1: Vec<Complex<S>> =
        (0..n).map(|j| Complex::new(sg(j as isize - 1) * half, S::zero())).collect();
    let d2: Vec<Complex<S>> =
        (0..n).map(|j| Complex::new(sg(j as isize - 1) * half, -omega)).collect();
    let u2: Vec<Complex<S>> =
        (0..n).map(|j| Complex::new(sg(j as isize) * half, S::zero())).collect();

    // X_r maps v -> Phi^(r), Y_r maps v -> Psi^(r); dense n x n, row-major.
    let mut xs: Vec<Vec<Complex<S>>> = Vec::with_capacity(p);
    let mut ys: Vec<Vec<Complex<S>>> = Vec::with_capacity(p);
    let mut rhs_col = vec![zero; n];
    for r in 1..=p {
        let mut x_r = vec![zero; n * n];
        let mut y_r = vec![zero; n * n];
        for col in 0..n {
            for (j, slot) in rhs_col.iter_mut().enumerate() {
                let ji = j as isize;
                let mut acc = zero;
                if wrap(ji - r as isize + 2, n, trunc) == Some(col) {
                    acc = acc + Complex::new(inv2h, S::zero());
                }
                if wrap(ji - r as isize, n, trunc) == Some(col) {
                    acc = acc - Complex::new(inv2h, S::zero());
                }
                for l in 1..r {
                    let f = r - l;
                    if let Some(c) = wrap(ji - 1 - l as isize, n, trunc) {
                        acc = acc
                            + Complex::new(sg(ji - 1 - l as isize) * half, S::zero())
                                * xs[f - 1][c * n + col];
                    }
                    if let Some(c) = wrap(ji + 1 - l as isize, n, trunc) {
                        acc = acc
                            - Complex::new(sg(ji + 1 - l as isize) * half, S::zero())
                                * xs[f - 1][c * n + col];
                    }
                }
                *slot = -acc;
            }
            let sol = solve_lower_bidiagonal(&d1, &l1, &rhs_col, cyclic);
            for (j, s) in sol.into_iter().enumerate() {
                x_r[j * n + col] = s;
            }

            for (j, slot) in rhs_col.iter_mut().enumerate() {
                let ji = j as isize;
                let mut acc = zero;
                if wrap(ji + r as isize, n, trunc) == Some(col) {
                    acc = acc + Complex::new(inv2h, S::zero());
                }
                if wrap(ji + r as isize - 2, n, trunc) == Some(col) {
                    acc = acc - Complex::new(inv2h, S::zero());
                }
                for l in 1..r {
                    let f = r - l;
                    if let Some(c) = wrap(ji + l as isize + 1, n, trunc) {
                        acc = acc
                            + Complex::new(sg(ji + l as isize) * half, S::zero())
                                * ys[f - 1][c * n + col];
                    }
                    if let Some(c) = wrap(ji + l as isize - 1, n, trunc) {
                        acc = acc
                            - Complex::new(sg(ji + l as isize - 2) * half, S::zero())
                                * ys[f - 1][c * n + col];
                    }
                }
                *slot = -acc;
            }
            let sol = solve_upper_bidiagonal(&d2, &u2, &rhs_col, cyclic);
            for (j, s) in sol.into_iter().enumerate() {
                y_r[j * n + col] = s;
            }
        }
        xs.push(x_r);
        ys.push(y_r);
    }

    let mut coo = CooBuilder::new(n, n);
    for j in 0..n {
        let ji = j as isize;
        coo.push(j, j, Complex::new(omega * omega + stencil.weight(0), S::zero()));
        for r in 1..=p {
            let ar = stencil.weight(r as isize);
            if let Some(c) = wrap(ji + r as isize, n, trunc) {
                coo.push(j, c, Complex::new(ar, S::zero()));
            }
            if let Some(c) = wrap(ji - r as isize, n, trunc) {
                coo.push(j, c, Complex::new(ar, S::zero()));
            }
            for l in 1..=r {
                let s = r + 1 - l;
                if let Some(c) = wrap(ji + l as isize, n, trunc) {
                    let w = Complex::new(h * ar * sg(ji + l as isize - 1), S::zero());
                    if w.norm_sqr() != S::zero() {
                        for col in 0..n {
                            coo.push(j, col, w * ys[s - 1][c * n + col]);
                        }
                    }
                }
                if let Some(c) = wrap(ji - l as isize, n, trunc) {
                    let w = Complex::new(-(h * ar * sg(ji - l as isize)), S::zero());
                    if w.norm_sqr() != S::zero() {
                        for col in 0..n {
                            coo.push(j, col, w * xs[s - 1][c * n + col]);
                        }
                    }
                }
            }
        }
    }
    Ok(coo.finalize(vec![("v".to_string(), 0..n)]))
}

/// Direct dense LU solve with partial pivoting and a residual check.
pub fn solve<S: Scalar>(
    matrix: &ComplexSparseMatrix<S>,
    rhs: &[Complex<S>],
) -> Result<Vec<Complex<S>>> {
    if matrix.nrows != matrix.ncols {
        return Err(Error::invalid("system matrix must be square"));
    }
    if rhs.len() != matrix.nrows {
        return Err(Error::invalid("rhs length must match the system"));
    }
    let n = matrix.nrows;
    let mut a = matrix.to_dense();
    let mut perm: Vec<usize> = (0..n).collect();

    let mut min_piv = S::infinity();
    let mut max_piv = S::zero();
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, a[r * n + col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot_val <= S::real(1e-300) {
            return Err(Error::Solver(format!("singular factorization at column {col}")));
        }
        min_piv = min_piv.min(pivot_val);
        max_piv = max_piv.max(pivot_val);
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            perm.swap(col, pivot_row);
        }
        let inv = Complex::new(S::one(), S::zero()) / a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] * inv;
            a[r * n + col] = f;
            if f.norm_sqr() != S::zero() {
                for k in col + 1..n {
                    let sub = f * a[col * n + k];
                    a[r * n + k] = a[r * n + k] - sub;
                }
            }
        }
    }

    let mut x: Vec<Complex<S>> = perm.iter().map(|&pi| rhs[pi]).collect();
    for r in 1..n {
        let mut acc = x[r];
        for k in 0..r {
            acc = acc - a[r * n + k] * x[k];
        }
        x[r] = acc;
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for k in r + 1..n {
            acc = acc - a[r * n + k] * x[k];
        }
        x[r] = acc / a[r * n + r];
    }

    let ax = matrix.matvec(&x);
    let bnorm = rhs.iter().fold(S::zero(), |m, v| m.max(v.norm())).max(S::real(1e-300));
    let rnorm =
        ax.iter().zip(rhs.iter()).fold(S::zero(), |m, (l, r)| m.max((*l - *r).norm()));
    if rnorm / bnorm > S::real(1e-10) {
        return Err(Error::Solver(format!(
            "residual {:.3e} exceeds tolerance (pivot ratio {:.3e})",
            (rnorm / bnorm).to_f64().unwrap_or(f64::NAN),
            (min_piv / max_piv).to_f64().unwrap_or(f64::NAN),
        )));
    }
    Ok(x)
}

/// Solves the full system and splits the solution into blocks.
pub fn solve_full<S: Scalar>(
    sys: &FullSystem<S>,
    rhs: &[Complex<S>],
) -> Result<HelmholtzSolution<S>> {
    let x = solve(&sys.matrix, rhs)?;
    let n = sys.n;
    let p = sys.p;
    Ok(HelmholtzSolution {
        v_tilde: x[..n].to_vec(),
        phi_hat: (1..=p).map(|r| x[r * n..(r + 1) * n].to_vec()).collect(),
        psi_hat: (1..=p).map(|r| x[(p + r) * n..(p + r + 1) * n].to_vec()).collect(),
        omega: sys.omega,
    })
}

/// Point-source right-hand side acting on the wavefield block.
pub fn point_source<S: Scalar>(dim: usize, index: usize) -> Vec<Complex<S>> {
    let mut b = vec![Complex::new(S::zero(), S::zero()); dim];
    b[index] = Complex::new(S::one(), S::zero());
    b
}
