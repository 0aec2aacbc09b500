//! Symmetric even-order finite-difference approximations of the Laplacian.
//!
//! A stencil of half-width `p` approximates the second derivative with
//! accuracy order `2p` using the `2p+1` symmetric weights `a_{-p}..a_p`.
//! Coefficients are obtained from the moment system
//!
//! ```text
//! alpha_0 / 2 + sum_{r>=1} alpha_r          = 0          (constants)
//! sum_{r>=1} r^2 alpha_r                    = 1          (second moment)
//! sum_{r>=1} r^(2n) alpha_r                 = 0, n = 2..p
//! ```
//!
//! solved exactly in rational arithmetic, where `alpha_r = a_r h^2` are the
//! grid-spacing-free weights. The moment matrix is a Vandermonde in `r^2` and
//! is badly conditioned in floating point, hence the exact solve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, StencilValue};

/// Symmetric Laplacian stencil of accuracy order `2p`.
///
/// Stores both the exact spacing-free weights `a_r * h^2` (rational) and the
/// floating weights `a_{-p}..a_p` (already divided by `h^2`).
#[derive(Debug, Clone)]
pub struct StencilCoeffs<S> {
    p: usize,
    h: S,
    exact: Vec<BigRational>,
    weights: Vec<S>,
}

impl<S: Scalar> StencilCoeffs<S> {
    /// Solves the moment system for half-width `p` and spacing `h`.
    pub fn new(p: usize, h: S) -> Result<Self> {
        if p == 0 {
            return Err(Error::invalid("stencil half-width p must be >= 1"));
        }
        if !(h > S::zero()) || !h.is_finite() {
            return Err(Error::invalid("grid spacing h must be positive"));
        }
        let exact = scaled_weights_exact(p);
        let h2 = h * h;
        let mut weights = vec![S::zero(); 2 * p + 1];
        for r in 0..=p {
            let w = S::real(rational_to_f64(&exact[r])) / h2;
            weights[p + r] = w;
            weights[p - r] = w;
        }
        Ok(Self { p, h, exact, weights })
    }

    pub fn half_width(&self) -> usize {
        self.p
    }

    /// Accuracy order `2p`.
    pub fn order(&self) -> usize {
        2 * self.p
    }

    pub fn spacing(&self) -> S {
        self.h
    }

    /// Floating weights `a_{-p}..a_p`, including the `1/h^2` factor.
    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Weight `a_r` for `|r| <= p`.
    pub fn weight(&self, r: isize) -> S {
        self.weights[(self.p as isize + r) as usize]
    }

    /// Exact spacing-free weight `a_r * h^2` for `0 <= r <= p`.
    pub fn exact_scaled(&self, r: usize) -> &BigRational {
        &self.exact[r]
    }

    /// Spacing-free weight `a_r * h^2` as a float, `|r| <= p`.
    pub fn scaled_weight(&self, r: isize) -> S {
        S::real(rational_to_f64(&self.exact[r.unsigned_abs()]))
    }
}

/// Exact spacing-free weights `alpha_r = a_r h^2`, `r = 0..=p`.
pub fn scaled_weights_exact(p: usize) -> Vec<BigRational> {
    // Row n, column r of the moment system; right-hand side delta_{n,1}.
    let n_eq = p + 1;
    let mut m = vec![vec![BigRational::zero(); n_eq + 1]; n_eq];
    for (n, row) in m.iter_mut().enumerate() {
        if n == 0 {
            row[0] = BigRational::new(BigInt::from(1), BigInt::from(2));
            for r in 1..=p {
                row[r] = BigRational::one();
            }
        } else {
            for r in 1..=p {
                row[r] = BigRational::from(BigInt::from(r).pow(2 * n as u32));
            }
        }
        row[n_eq] = if n == 1 { BigRational::one() } else { BigRational::zero() };
    }
    solve_rational(&mut m)
}

/// Gaussian elimination with exact rational arithmetic.
fn solve_rational(m: &mut [Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
            .expect("nonempty column");
        assert!(!m[pivot][col].is_zero(), "moment matrix is nonsingular");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for entry in m[col][col..].iter_mut() {
            *entry *= &inv;
        }
        for row in 0..n {
            if row != col && !m[row][col].is_zero() {
                let factor = m[row][col].clone();
                for k in col..=n {
                    let sub = &factor * &m[col][k];
                    m[row][k] -= sub;
                }
            }
        }
    }
    (0..n).map(|r| m[r][n].clone()).collect()
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().expect("stencil weight fits in f64")
}

/// Ghost-node closure for a 1D stencil application.
///
/// `Odd`/`Even` extend about the first (resp. last) node: odd extension is
/// point symmetry about `(x_edge, v_edge)`, even is mirror symmetry.
#[derive(Debug, Clone)]
pub enum Closure1d<V> {
    Periodic,
    Odd,
    Even,
    Values { left: Vec<V>, right: Vec<V> },
}

/// Fills `p` ghost values on each side of `buf`, whose interior occupies
/// `buf[p..p + n]`.
pub fn fill_ghosts<S: Scalar, V: StencilValue<S>>(buf: &mut [V], p: usize, closure: &Closure1d<V>) {
    let n = buf.len() - 2 * p;
    assert!(n >= 1);
    match closure {
        Closure1d::Periodic => {
            for g in 0..p {
                buf[p + n + g] = buf[p + (g % n)];
                buf[p - 1 - g] = buf[p + n - 1 - (g % n)];
            }
        }
        Closure1d::Odd => {
            let first = buf[p];
            let last = buf[p + n - 1];
            for g in 0..p {
                let m = (g + 1).min(n - 1);
                buf[p - 1 - g] = (first + first) - buf[p + m];
                buf[p + n + g] = (last + last) - buf[p + n - 1 - m];
            }
        }
        Closure1d::Even => {
            for g in 0..p {
                let m = (g + 1).min(n - 1);
                buf[p - 1 - g] = buf[p + m];
                buf[p + n + g] = buf[p + n - 1 - m];
            }
        }
        Closure1d::Values { left, right } => {
            assert!(left.len() >= p && right.len() >= p, "closure needs p ghost values per side");
            for g in 0..p {
                // left[0] is the ghost adjacent to the interior.
                buf[p - 1 - g] = left[g];
                buf[p + n + g] = right[g];
            }
        }
    }
}

/// Applies the stencil to a padded buffer (`p` ghosts each side, already
/// filled), writing `n` interior results.
///
/// Summation order is fixed: symmetric pairs from `r = p` down to `1`, then
/// the center weight.
pub fn apply_padded<S: Scalar, V: StencilValue<S>>(
    buf: &[V],
    s: &StencilCoeffs<S>,
    out: &mut [V],
) {
    let p = s.p;
    let n = buf.len() - 2 * p;
    assert_eq!(out.len(), n);
    let w = &s.weights;
    for j in 0..n {
        let c = j + p;
        let mut acc = V::zero();
        for r in (1..=p).rev() {
            acc = acc + (buf[c + r] + buf[c - r]) * w[p + r];
        }
        out[j] = acc + buf[c] * w[p];
    }
}

/// `L_p[v]` for a 1D sequence with the given ghost closure.
pub fn apply_laplacian_1d<S: Scalar, V: StencilValue<S>>(
    v: &[V],
    s: &StencilCoeffs<S>,
    closure: &Closure1d<V>,
) -> Result<Vec<V>> {
    let p = s.p;
    if v.len() < 2 * p + 1 {
        return Err(Error::invalid(format!(
            "sequence of length {} is shorter than the {}-point stencil",
            v.len(),
            2 * p + 1
        )));
    }
    let mut buf = vec![V::zero(); v.len() + 2 * p];
    buf[p..p + v.len()].copy_from_slice(v);
    fill_ghosts(&mut buf, p, closure);
    let mut out = vec![V::zero(); v.len()];
    apply_padded(&buf, s, &mut out);
    Ok(out)
}

/// Dense 2D array in row-major layout (`x` index fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct Field2<V> {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<V>,
}

impl<V: Copy + num_traits::Zero> Field2<V> {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self { nx, ny, data: vec![V::zero(); nx * ny] }
    }

    pub fn from_fn(nx: usize, ny: usize, mut f: impl FnMut(usize, usize) -> V) -> Self {
        let mut data = Vec::with_capacity(nx * ny);
        for k in 0..ny {
            for j in 0..nx {
                data.push(f(j, k));
            }
        }
        Self { nx, ny, data }
    }

    #[inline]
    pub fn at(&self, j: usize, k: usize) -> V {
        self.data[k * self.nx + j]
    }

    #[inline]
    pub fn at_mut(&mut self, j: usize, k: usize) -> &mut V {
        &mut self.data[k * self.nx + j]
    }

    pub fn row(&self, k: usize) -> &[V] {
        &self.data[k * self.nx..(k + 1) * self.nx]
    }
}

/// `L_p[V]` on a 2D array: the `(4p+1)`-point cross stencil, evaluated as the
/// x-axis application of every row followed by the y-axis application of
/// every column (added in that order).
pub fn apply_laplacian_2d<S: Scalar, V: StencilValue<S>>(
    v: &Field2<V>,
    s: &StencilCoeffs<S>,
    closure_x: &Closure1d<V>,
    closure_y: &Closure1d<V>,
) -> Result<Field2<V>> {
    let p = s.p;
    if v.nx < 2 * p + 1 || v.ny < 2 * p + 1 {
        return Err(Error::invalid("2D array smaller than the stencil in some axis"));
    }
    let mut out = Field2::zeros(v.nx, v.ny);
    let mut buf = vec![V::zero(); v.nx + 2 * p];
    let mut line = vec![V::zero(); v.nx];
    for k in 0..v.ny {
        buf[p..p + v.nx].copy_from_slice(v.row(k));
        fill_ghosts(&mut buf, p, closure_x);
        apply_padded(&buf, s, &mut line);
        out.data[k * v.nx..(k + 1) * v.nx].copy_from_slice(&line);
    }
    let mut cbuf = vec![V::zero(); v.ny + 2 * p];
    let mut cline = vec![V::zero(); v.ny];
    for j in 0..v.nx {
        for k in 0..v.ny {
            cbuf[p + k] = v.at(j, k);
        }
        fill_ghosts(&mut cbuf, p, closure_y);
        apply_padded(&cbuf, s, &mut cline);
        for k in 0..v.ny {
            let o = out.at_mut(j, k);
            *o = *o + cline[k];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn table_weights_exact() {
        // Orders 2, 4, 6, 8 of the classical centered operator.
        let cases: Vec<(usize, Vec<BigRational>)> = vec![
            (1, vec![frac(-2, 1), frac(1, 1)]),
            (2, vec![frac(-5, 2), frac(4, 3), frac(-1, 12)]),
            (3, vec![frac(-49, 18), frac(3, 2), frac(-3, 20), frac(1, 90)]),
            (4, vec![
                frac(-205, 72),
                frac(8, 5),
                frac(-1, 5),
                frac(8, 315),
                frac(-1, 560),
            ]),
        ];
        for (p, expected) in cases {
            let s = StencilCoeffs::<f64>::new(p, 1.0).unwrap();
            for (r, e) in expected.iter().enumerate() {
                assert_eq!(s.exact_scaled(r), e, "p={p}, r={r}");
            }
        }
    }

    #[test]
    fn moment_conditions_hold_up_to_p8() {
        for p in 1..=8 {
            let alpha = scaled_weights_exact(p);
            let mut s0 = alpha[0].clone() / BigRational::from(BigInt::from(2));
            let mut s1 = BigRational::zero();
            for r in 1..=p {
                s0 += &alpha[r];
                s1 += BigRational::from(BigInt::from((r * r) as i64)) * &alpha[r];
            }
            assert!(s0.is_zero(), "consistency at p={p}");
            assert!(s1.is_one(), "second moment at p={p}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(StencilCoeffs::<f64>::new(0, 1.0).is_err());
        assert!(StencilCoeffs::<f64>::new(2, 0.0).is_err());
        assert!(StencilCoeffs::<f64>::new(2, -0.5).is_err());
        let s = StencilCoeffs::<f64>::new(3, 1.0).unwrap();
        assert!(apply_laplacian_1d(&[1.0; 5], &s, &Closure1d::Periodic).is_err());
    }

    #[test]
    fn constants_map_to_zero() {
        for p in 1..=4 {
            let s = StencilCoeffs::<f64>::new(p, 0.25).unwrap();
            let v = vec![7.0; 40];
            let out = apply_laplacian_1d(&v, &s, &Closure1d::Periodic).unwrap();
            for x in out {
                assert!(x.abs() < 1e-12, "p={p}: {x}");
            }
        }
    }

    #[test]
    fn quadratic_is_exact() {
        let h = 0.5;
        let s = StencilCoeffs::<f64>::new(2, h).unwrap();
        let v: Vec<f64> = (0..30).map(|j| (j as f64 * h).powi(2)).collect();
        // Ghosts from the exact parabola.
        let left: Vec<f64> = (1..=2).map(|g| (-(g as f64) * h).powi(2)).collect();
        let right: Vec<f64> = (1..=2).map(|g| ((29 + g) as f64 * h).powi(2)).collect();
        let out = apply_laplacian_1d(&v, &s, &Closure1d::Values { left, right }).unwrap();
        for x in out {
            assert!((x - 2.0).abs() < 1e-12, "{x}");
        }
    }

    /// Oracle: the analytic second derivative of sin(3x) is -9 sin(3x); the
    /// interior error must decay at order 2p.
    #[test]
    fn sine_convergence_slope() {
        for p in 1..=4usize {
            let ks: std::ops::Range<i32> = if p == 1 {
                5..9
            } else if p == 2 {
                4..8
            } else {
                2..6
            };
            let mut pts = Vec::new();
            for k in ks {
                let h = 0.5f64.powi(k);
                let n = (4.0 / h) as usize;
                let s = StencilCoeffs::<f64>::new(p, h).unwrap();
                let f = |x: f64| (3.0 * x).sin();
                let v: Vec<f64> = (0..n).map(|j| f(j as f64 * h)).collect();
                let left: Vec<f64> = (1..=p).map(|g| f(-(g as f64) * h)).collect();
                let right: Vec<f64> = (1..=p).map(|g| f((n - 1 + g) as f64 * h)).collect();
                let out = apply_laplacian_1d(&v, &s, &Closure1d::Values { left, right }).unwrap();
                let err = out
                    .iter()
                    .enumerate()
                    .map(|(j, &y)| (y + 9.0 * f(j as f64 * h)).abs())
                    .fold(0.0f64, f64::max);
                pts.push((h.ln(), err.ln()));
            }
            let slope = fit_slope(&pts);
            assert!(
                (slope - 2.0 * p as f64).abs() <= 0.3,
                "p={p}: slope {slope}"
            );
        }
    }

    fn fit_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn two_d_equals_row_plus_column_applications() {
        let s = StencilCoeffs::<f64>::new(2, 0.125).unwrap();
        let v = Field2::from_fn(12, 9, |j, k| ((j * 7 + k * 3) as f64 * 0.37).sin());
        let out = apply_laplacian_2d(&v, &s, &Closure1d::Periodic, &Closure1d::Periodic).unwrap();

        let mut manual = Field2::zeros(12, 9);
        for k in 0..v.ny {
            let row = apply_laplacian_1d(v.row(k), &s, &Closure1d::Periodic).unwrap();
            manual.data[k * v.nx..(k + 1) * v.nx].copy_from_slice(&row);
        }
        for j in 0..v.nx {
            let col: Vec<f64> = (0..v.ny).map(|k| v.at(j, k)).collect();
            let lap = apply_laplacian_1d(&col, &s, &Closure1d::Periodic).unwrap();
            for k in 0..v.ny {
                let m = manual.at_mut(j, k);
                *m += lap[k];
            }
        }
        for (a, b) in out.data.iter().zip(manual.data.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn two_d_quadratic() {
        let h = 0.25;
        let s = StencilCoeffs::<f64>::new(1, h).unwrap();
        let v = Field2::from_fn(20, 20, |j, k| {
            let (x, y) = (j as f64 * h, k as f64 * h);
            x * x + y * y
        });
        let out = apply_laplacian_2d(&v, &s, &Closure1d::Odd, &Closure1d::Odd).unwrap();
        // Interior nodes only; the odd closure is not exact for parabolas.
        for k in 1..19 {
            for j in 1..19 {
                assert!((out.at(j, k) - 4.0).abs() < 1e-11, "{} {}", j, k);
            }
        }
    }

    proptest! {
        /// Periodic application commutes with cyclic shifts of the input.
        #[test]
        fn periodic_commutes_with_shift(
            vals in proptest::collection::vec(-10.0f64..10.0, 12..40),
            shift in 0usize..12,
            p in 1usize..4,
        ) {
            let s = StencilCoeffs::<f64>::new(p, 0.3).unwrap();
            prop_assume!(vals.len() >= 2 * p + 1);
            let n = vals.len();
            let shifted: Vec<f64> = (0..n).map(|j| vals[(j + shift) % n]).collect();
            let a = apply_laplacian_1d(&vals, &s, &Closure1d::Periodic).unwrap();
            let b = apply_laplacian_1d(&shifted, &s, &Closure1d::Periodic).unwrap();
            for j in 0..n {
                prop_assert_eq!(a[(j + shift) % n].to_bits(), b[j].to_bits());
            }
        }
    }
}
