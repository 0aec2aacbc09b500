//! Discrete dispersion analysis: the characteristic polynomial of
//! `L_p + lambda`, its roots and wavenumbers, the per-node decay factor of
//! the complex stretching, damping-coefficient selection, and damping
//! profiles.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stencil::StencilCoeffs;

/// Characteristic polynomial `P_p(z; lambda) = sum_r b_r z^r` of the plane
/// wave ansatz `v_j = y^j` with `z = y + 1/y`.
#[derive(Debug, Clone)]
pub struct CharPoly<S> {
    p: usize,
    lambda: Complex<S>,
    /// `b_0..b_p`, carrying the stencil's `1/h^2` scale.
    coeffs: Vec<Complex<S>>,
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Builds `P_p(z; lambda)` from the stencil weights.
///
/// The three-index-case coefficient formula expresses `b_r` in terms of the
/// even (`a_{2l}`) and odd (`a_{2l+1}`) stencil weights.
pub fn char_poly<S: Scalar>(stencil: &StencilCoeffs<S>, lambda: Complex<S>) -> CharPoly<S> {
    let p = stencil.half_width();
    let a = |r: usize| stencil.weight(r as isize);
    let mut coeffs = vec![Complex::new(S::zero(), S::zero()); p + 1];

    // r = 0: (a_0 + lambda) + 2 sum_{l=1}^{floor(p/2)} (-1)^l a_{2l}
    let mut b0 = lambda + a(0);
    for l in 1..=(p / 2) {
        let sign = if l % 2 == 0 { S::one() } else { -S::one() };
        b0 = b0 + Complex::new(sign * S::real(2.0) * a(2 * l), S::zero());
    }
    coeffs[0] = b0;

    // r = 2k: sum_{l=k}^{floor(p/2)} (-1)^(l-k) C(l+k-1, 2k-1) (l/k) a_{2l}
    for k in 1..=(p / 2) {
        let mut b = S::zero();
        for l in k..=(p / 2) {
            let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * binomial(l + k - 1, 2 * k - 1) * l as f64 / k as f64;
            b = b + S::real(w) * a(2 * l);
        }
        coeffs[2 * k] = Complex::new(b, S::zero());
    }

    // r = 2k+1: sum_{l=k}^{ceil(p/2)-1} (-1)^(l-k) C(l+k, 2k) (2l+1)/(2k+1) a_{2l+1}
    let mut k = 0usize;
    while 2 * k + 1 <= p {
        let r = 2 * k + 1;
        let mut b = S::zero();
        let mut l = k;
        while 2 * l + 1 <= p {
            let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * binomial(l + k, 2 * k) * (2 * l + 1) as f64 / (2 * k + 1) as f64;
            b = b + S::real(w) * a(2 * l + 1);
            l += 1;
        }
        coeffs[r] = Complex::new(b, S::zero());
        k += 1;
    }

    let poly = CharPoly { p, lambda, coeffs };
    debug_assert!(
        poly.leading().norm() > S::real(1e-300),
        "degree-p coefficient vanished"
    );
    poly
}

impl<S: Scalar> CharPoly<S> {
    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn lambda(&self) -> Complex<S> {
        self.lambda
    }

    pub fn coeffs(&self) -> &[Complex<S>] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex<S> {
        self.coeffs[self.p]
    }

    /// Horner evaluation of `P_p(z)`.
    pub fn eval(&self, z: Complex<S>) -> Complex<S> {
        let mut acc = Complex::new(S::zero(), S::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Derivative `P_p'(z)`.
    pub fn eval_deriv(&self, z: Complex<S>) -> Complex<S> {
        let mut acc = Complex::new(S::zero(), S::zero());
        for r in (1..=self.p).rev() {
            acc = acc * z + self.coeffs[r] * S::from_index(r);
        }
        acc
    }
}

/// Roots of the characteristic polynomial with their discrete wavenumbers.
#[derive(Debug, Clone)]
pub struct DiscreteModeSet<S> {
    /// Roots `z_r` of `P_p`.
    pub roots: Vec<Complex<S>>,
    /// `xi_r = acos(z_r/2)/h` on the strip `0 <= Re xi <= pi/h`; when
    /// `Re xi = 0` the branch with `Im xi <= 0` is taken.
    pub wavenumbers: Vec<Complex<S>>,
    /// Marks roots within `1e-9` of `±2` (repeated lattice mode).
    pub degenerate: Vec<bool>,
}

/// All `p` roots of `P_p` and their wavenumbers, sorted by descending
/// `|Im xi|`, then ascending `Im xi`, then ascending `Re xi`.
pub fn discrete_wavenumbers<S: Scalar>(poly: &CharPoly<S>, h: S) -> Result<DiscreteModeSet<S>> {
    if poly.degree() == 0 {
        return Err(Error::invalid("polynomial degree must be >= 1"));
    }
    let scale = poly.coeffs.iter().fold(S::zero(), |m, c| m.max(c.norm()));
    if poly.leading().norm() <= S::real(1e-14) * scale {
        return Err(Error::DegeneratePolynomial);
    }
    let mut roots = aberth_roots(&poly.coeffs);
    // Newton polish.
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly.eval_deriv(*z);
            if d.norm() > S::real(1e-300) {
                *z = *z - poly.eval(*z) / d;
            }
        }
    }

    let two = S::real(2.0);
    let tol = S::real(1e-9);
    let mut modes: Vec<(Complex<S>, Complex<S>, bool)> = roots
        .iter()
        .map(|&z| {
            let degenerate =
                (z - Complex::new(two, S::zero())).norm() < tol
                    || (z + Complex::new(two, S::zero())).norm() < tol;
            let mut xi = (z / two).acos() / h;
            if xi.re < S::zero() {
                xi = -xi;
            }
            // On the Re xi = 0 edge both branches satisfy the strip
            // constraint; take the physically admissible Im <= 0 one.
            if xi.re.abs() * h < S::real(1e-12) && xi.im > S::zero() {
                xi = -xi;
            }
            // Same convention on the Re xi = pi/h edge (conjugation keeps
            // the real part).
            if (xi.re * h - S::real(std::f64::consts::PI)).abs() < S::real(1e-12)
                && xi.im > S::zero()
            {
                xi = xi.conj();
            }
            (z, xi, degenerate)
        })
        .collect();
    let span = modes.iter().fold(S::one(), |m, x| m.max(x.1.norm()));
    let near = S::real(1e-9) * span;
    modes.sort_by(|a, b| {
        let ka = a.1.im.abs();
        let kb = b.1.im.abs();
        let primary = if (ka - kb).abs() <= near {
            std::cmp::Ordering::Equal
        } else {
            kb.partial_cmp(&ka).unwrap()
        };
        primary
            .then(a.1.im.partial_cmp(&b.1.im).unwrap())
            .then(a.1.re.partial_cmp(&b.1.re).unwrap())
    });
    Ok(DiscreteModeSet {
        roots: modes.iter().map(|m| m.0).collect(),
        wavenumbers: modes.iter().map(|m| m.1).collect(),
        degenerate: modes.iter().map(|m| m.2).collect(),
    })
}

/// Aberth-Ehrlich simultaneous iteration for all roots of
/// `c_0 + c_1 z + ... + c_d z^d`.
fn aberth_roots<S: Scalar>(coeffs: &[Complex<S>]) -> Vec<Complex<S>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    // Cauchy bound for the initial circle.
    let bound = coeffs[..d]
        .iter()
        .fold(S::zero(), |m, c| m.max((*c / lead).norm()))
        + S::one();
    let mut z: Vec<Complex<S>> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.41;
            Complex::from_polar(bound * S::real(0.7), S::real(ang))
        })
        .collect();
    let eval = |x: Complex<S>| {
        let mut acc = Complex::new(S::zero(), S::zero());
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let eval_d = |x: Complex<S>| {
        let mut acc = Complex::new(S::zero(), S::zero());
        for r in (1..=d).rev() {
            acc = acc * x + coeffs[r] * S::from_index(r);
        }
        acc
    };
    for _ in 0..200 {
        let mut max_step = S::zero();
        for k in 0..d {
            let pk = eval(z[k]);
            let dk = eval_d(z[k]);
            let newton = if dk.norm() > S::real(1e-300) {
                pk / dk
            } else {
                Complex::new(S::real(1e-8), S::real(1e-8))
            };
            let mut rep = Complex::new(S::zero(), S::zero());
            for j in 0..d {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > S::real(1e-300) {
                        rep = rep + Complex::new(S::one(), S::zero()) / diff;
                    }
                }
            }
            let denom = Complex::new(S::one(), S::zero()) - newton * rep;
            let step = if denom.norm() > S::real(1e-300) { newton / denom } else { newton };
            z[k] = z[k] - step;
            max_step = max_step.max(step.norm() / (S::one() + z[k].norm()));
        }
        if max_step < S::real(1e-15) {
            break;
        }
    }
    z
}

/// Per-node geometric decay factor of the discrete complex stretching,
/// `rho = (2 + i(s/w)(1 - e^{-i xi h})) / (2 + i(s/w)(1 - e^{i xi h}))`.
pub fn decay_factor<S: Scalar>(sigma: S, xi: Complex<S>, omega: S, h: S) -> Result<Complex<S>> {
    if omega == S::zero() {
        return Err(Error::SingularFrequency);
    }
    let i = Complex::new(S::zero(), S::one());
    let s = Complex::new(sigma / omega, S::zero());
    let one = Complex::new(S::one(), S::zero());
    let two = Complex::new(S::real(2.0), S::zero());
    let e_minus = (-i * xi * h).exp();
    let e_plus = (i * xi * h).exp();
    let num = two + i * s * (one - e_minus);
    let den = two + i * s * (one - e_plus);
    if den.norm() < S::real(1e-300) {
        return Err(Error::Singular("decay factor denominator vanished".into()));
    }
    Ok(num / den)
}

/// Frequency-independent damping value `2/h` (near-optimal for resolved
/// propagating modes).
pub fn optimal_sigma<S: Scalar>(h: S) -> Result<S> {
    if !(h > S::zero()) {
        return Err(Error::invalid("h must be positive"));
    }
    Ok(S::real(2.0) / h)
}

/// Frequency-dependent minimizer `sigma* = w sqrt(2) / sqrt(1 - cos(w h))`
/// of the attenuation amplitude at the continuous dispersion relation.
pub fn optimal_sigma_exact<S: Scalar>(omega: S, h: S) -> Result<S> {
    if !(h > S::zero()) {
        return Err(Error::invalid("h must be positive"));
    }
    let c = S::one() - (omega * h).cos();
    if c <= S::zero() {
        return Err(Error::Singular(
            "omega*h is a multiple of 2*pi: exact damping optimum is undefined".into(),
        ));
    }
    Ok(omega.abs() * S::real(std::f64::consts::SQRT_2) / c.sqrt())
}

/// Sentinel emitted by [`dispersion_map`] where `|P_p|` vanishes (the log
/// has a pole there); the field itself is nonnegative.
pub const MAP_SENTINEL: f64 = -1.0;

/// Samples `|log P_p(2 cos(xi h); lambda)|` over a rectangle of complex
/// `xi`. Returns `(re_xi, im_xi, value)` rows in row-major order (imaginary
/// axis outer).
pub fn dispersion_map<S: Scalar>(
    stencil: &StencilCoeffs<S>,
    lambda: Complex<S>,
    re_range: (S, S),
    im_range: (S, S),
    resolution: (usize, usize),
) -> Result<Vec<(S, S, S)>> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::invalid("map resolution must be >= 2 per axis"));
    }
    let poly = char_poly(stencil, lambda);
    let h = stencil.spacing();
    let two = Complex::new(S::real(2.0), S::zero());
    let mut out = Vec::with_capacity(resolution.0 * resolution.1);
    for iy in 0..resolution.1 {
        let t = S::from_index(iy) / S::from_index(resolution.1 - 1);
        let im = im_range.0 + (im_range.1 - im_range.0) * t;
        for ix in 0..resolution.0 {
            let t = S::from_index(ix) / S::from_index(resolution.0 - 1);
            let re = re_range.0 + (re_range.1 - re_range.0) * t;
            let xi = Complex::new(re, im);
            let w = poly.eval(two * (xi * h).cos());
            let value = if w.norm() < S::real(1e-12) {
                S::real(MAP_SENTINEL)
            } else {
                w.ln().norm()
            };
            out.push((re, im, value));
        }
    }
    Ok(out)
}

/// Damping profile kinds supported by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    RightConstant,
    LeftConstant,
    TwoSided,
    TwoStage,
    Custom,
}

/// Per-node damping coefficients `sigma_j >= 0`, zero on physical nodes.
#[derive(Debug, Clone)]
pub struct DampingProfile<S> {
    kind: ProfileKind,
    values: Vec<S>,
}

impl<S: Scalar> DampingProfile<S> {
    /// Zero damping everywhere (the plain scheme).
    pub fn zero(n: usize) -> Self {
        Self { kind: ProfileKind::Custom, values: vec![S::zero(); n] }
    }

    /// `sigma_j = sigma` for `j >= pml_start`, zero before.
    pub fn right_constant(n: usize, pml_start: usize, sigma: S) -> Result<Self> {
        Self::check(sigma)?;
        let values = (0..n).map(|j| if j >= pml_start { sigma } else { S::zero() }).collect();
        Ok(Self { kind: ProfileKind::RightConstant, values })
    }

    /// `sigma_j = sigma` for `j < j0`, zero from `j0` on (left-sided layer).
    pub fn left_constant(n: usize, j0: usize, sigma: S) -> Result<Self> {
        Self::check(sigma)?;
        let values = (0..n).map(|j| if j < j0 { sigma } else { S::zero() }).collect();
        Ok(Self { kind: ProfileKind::LeftConstant, values })
    }

    /// Damped on `[0, left_end)` and `[right_start, n)`.
    pub fn two_sided(n: usize, left_end: usize, right_start: usize, sigma: S) -> Result<Self> {
        Self::check(sigma)?;
        let values = (0..n)
            .map(|j| if j < left_end || j >= right_start { sigma } else { S::zero() })
            .collect();
        Ok(Self { kind: ProfileKind::TwoSided, values })
    }

    /// Two-stage layer: damped on layer-local indices `0..=ceil(n_pml/2)`,
    /// free on the remainder of the layer.
    pub fn two_stage(n: usize, pml_start: usize, n_pml: usize, sigma: S) -> Result<Self> {
        Self::check(sigma)?;
        let cut = n_pml.div_ceil(2);
        let values = (0..n)
            .map(|j| if j >= pml_start && j - pml_start <= cut { sigma } else { S::zero() })
            .collect();
        Ok(Self { kind: ProfileKind::TwoStage, values })
    }

    pub fn custom(values: Vec<S>) -> Result<Self> {
        if values.iter().any(|&s| s < S::zero() || !s.is_finite()) {
            return Err(Error::invalid("damping coefficients must be finite and >= 0"));
        }
        Ok(Self { kind: ProfileKind::Custom, values })
    }

    fn check(sigma: S) -> Result<()> {
        if sigma < S::zero() || !sigma.is_finite() {
            return Err(Error::invalid("sigma must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn sigma_of(&self, j: usize) -> S {
        self.values[j]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index range `[lo, hi)` outside of which all coefficients vanish.
    pub fn support(&self) -> (usize, usize) {
        let lo = self.values.iter().position(|&s| s > S::zero()).unwrap_or(0);
        let hi = self.values.iter().rposition(|&s| s > S::zero()).map_or(0, |i| i + 1);
        (lo, hi.max(lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil::StencilCoeffs;
    use num_complex::Complex64;

    fn poly_for(p: usize, omega: f64, h: f64) -> CharPoly<f64> {
        let s = StencilCoeffs::new(p, h).unwrap();
        char_poly(&s, Complex64::new(omega * omega, 0.0))
    }

    /// Coefficients of `h^2 P_p` for the classical stencils.
    #[test]
    fn char_poly_matches_closed_forms() {
        let h = 0.37;
        let lam = Complex64::new(2.5, 0.0);
        let h2 = h * h;

        let check = |p: usize, expect: &[f64]| {
            let s = StencilCoeffs::new(p, h).unwrap();
            let poly = char_poly(&s, lam);
            for (r, &e) in expect.iter().enumerate() {
                let got = poly.coeffs()[r] * h2;
                let e = if r == 0 { e + lam.re * h2 } else { e };
                assert!(
                    (got.re - e).abs() < 1e-14 * (1.0 + e.abs()) && got.im.abs() < 1e-16,
                    "p={p}, r={r}: {} vs {e}",
                    got.re
                );
            }
        };
        check(1, &[-2.0, 1.0]);
        check(2, &[-7.0 / 3.0, 4.0 / 3.0, -1.0 / 12.0]);
        check(3, &[-109.0 / 45.0, 22.0 / 15.0, -3.0 / 20.0, 1.0 / 90.0]);
        check(4, &[-772.0 / 315.0, 32.0 / 21.0, -27.0 / 140.0, 8.0 / 315.0, -1.0 / 560.0]);
    }

    /// Wavenumber tables for omega = 5, h = 0.1 (orders 2..8).
    #[test]
    fn wavenumber_tables() {
        let expect: [&[(f64, f64)]; 4] = [
            &[(5.0536, 0.0)],
            &[(0.0, -26.5144), (5.0017, 0.0)],
            &[(9.8894, -23.6000), (9.8894, 23.6000), (5.0000, 0.0)],
            &[(0.0, -23.5129), (14.5883, -21.1132), (14.5883, 21.1132), (5.0000, 0.0)],
        ];
        for (p, table) in (1..=4).zip(expect.iter()) {
            let poly = poly_for(p, 5.0, 0.1);
            let modes = discrete_wavenumbers(&poly, 0.1).unwrap();
            assert_eq!(modes.wavenumbers.len(), p);
            // Four printed decimals; the order-6 propagating entry is
            // truncated in the reference table (true value 5.000067), so
            // compare to 1e-4.
            for (xi, &(re, im)) in modes.wavenumbers.iter().zip(table.iter()) {
                assert!(
                    (xi.re - re).abs() <= 1e-4 && (xi.im - im).abs() <= 1e-4,
                    "p={p}: got {xi}, want {re}+{im}i"
                );
            }
            assert!(modes.degenerate.iter().all(|&d| !d));
        }
    }

    /// Each wavenumber satisfies the dispersion relation 2 cos(xi h) = z.
    #[test]
    fn wavenumbers_invert_cosine() {
        for p in 1..=4 {
            let poly = poly_for(p, 5.0, 0.1);
            let modes = discrete_wavenumbers(&poly, 0.1).unwrap();
            for (z, xi) in modes.roots.iter().zip(modes.wavenumbers.iter()) {
                let back = (xi * 0.1).cos() * 2.0;
                assert!((back - z).norm() < 1e-12, "p={p}: {back} vs {z}");
                assert!(xi.re >= -1e-9 && xi.re * 0.1 <= std::f64::consts::PI + 1e-9);
            }
        }
    }

    /// The plane-wave mode of each computed wavenumber annihilates
    /// `L_p + lambda` at interior nodes (direct stencil link).
    #[test]
    fn modes_satisfy_discrete_helmholtz() {
        let (omega, h) = (5.0, 0.1);
        for p in 1..=4usize {
            let s = StencilCoeffs::new(p, h).unwrap();
            let poly = char_poly(&s, Complex64::new(omega * omega, 0.0));
            let modes = discrete_wavenumbers(&poly, h).unwrap();
            for xi in &modes.wavenumbers {
                let n = 24;
                let w: Vec<Complex64> =
                    (0..n).map(|j| (Complex64::i() * xi * (j as f64) * h).exp()).collect();
                let scale = w.iter().map(|v| v.norm()).fold(0.0, f64::max) / h / h;
                for j in p..n - p {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for r in (1..=p).rev() {
                        acc += (w[j + r] + w[j - r]) * s.weight(r as isize);
                    }
                    acc += w[j] * s.weight(0) + w[j] * omega * omega;
                    assert!(
                        acc.norm() <= 1e-10 * scale,
                        "p={p}, xi={xi}: residual {}",
                        acc.norm() / scale
                    );
                }
            }
        }
    }

    #[test]
    fn decay_factor_trivial_and_singular() {
        let xi = Complex64::new(3.0, -1.0);
        let rho = decay_factor(0.0, xi, 4.0, 0.1).unwrap();
        assert!((rho - Complex64::new(1.0, 0.0)).norm() < 1e-16);
        assert!(matches!(decay_factor(1.0, xi, 0.0, 0.1), Err(Error::SingularFrequency)));
    }

    /// Pure-imaginary wavenumbers with Im < 0 decay for any sigma > 0.
    #[test]
    fn decay_factor_evanescent_branch() {
        for &alpha in &[0.1, 0.5, 2.0, 10.0, 40.0] {
            for &sigma in &[0.5, 2.0, 20.0, 200.0] {
                for &omega in &[-7.0, -1.0, 2.0, 5.0] {
                    let xi = Complex64::new(0.0, -alpha);
                    let rho = decay_factor(sigma, xi, omega, 0.1).unwrap();
                    assert!(rho.norm() < 1.0, "alpha={alpha} sigma={sigma} omega={omega}");
                }
            }
        }
    }

    /// Two independent arithmetic routes for rho agree to 1e-14.
    #[test]
    fn decay_factor_two_routes() {
        let (sigma, omega, h) = (2.0 / 0.1, 5.0, 0.1);
        let xi = Complex64::new(5.0, 0.0);
        let rho = decay_factor(sigma, xi, omega, h).unwrap();

        // Manual real/imaginary split: for real xi,
        // num = (2 - s sin) + i s (1 - cos), den = (2 + s sin) + i s (1 - cos).
        let s = sigma / omega;
        let (sin, cos) = (xi.re * h).sin_cos();
        let num = (2.0 - s * sin, s * (1.0 - cos));
        let den = (2.0 + s * sin, s * (1.0 - cos));
        let d2 = den.0 * den.0 + den.1 * den.1;
        let re = (num.0 * den.0 + num.1 * den.1) / d2;
        let im = (num.1 * den.0 - num.0 * den.1) / d2;
        assert!((rho.re - re).abs() < 1e-14 && (rho.im - im).abs() < 1e-14);
        assert!(rho.norm() < 1.0);
    }

    #[test]
    fn optimal_sigma_values() {
        assert!((optimal_sigma(0.1f64).unwrap() - 20.0).abs() < 1e-13);
        let exact = optimal_sigma_exact(5.0, 0.1).unwrap();
        let byhand = 5.0 * 2.0f64.sqrt() / (1.0 - 0.5f64.cos()).sqrt();
        // Independent route via 1 - cos x = 2 sin^2(x/2).
        let alt = 5.0 / (0.25f64).sin();
        assert!((exact - byhand).abs() < 1e-12);
        assert!((exact - alt).abs() < 1e-11);
        assert!(matches!(
            optimal_sigma_exact(2.0 * std::f64::consts::PI, 1.0),
            Err(Error::Singular(_))
        ));
    }

    /// sigma* tends to 2/h as omega h -> 0, with error O(omega^2 h).
    #[test]
    fn optimal_sigma_limit() {
        let omega = 3.0;
        let mut cs = Vec::new();
        for k in 4..9 {
            let h = 0.5f64.powi(k);
            let diff = (optimal_sigma_exact(omega, h).unwrap() - 2.0 / h).abs();
            cs.push(diff / (omega * omega * h));
        }
        let (lo, hi) = cs.iter().fold((f64::MAX, 0.0f64), |(l, g), &c| (l.min(c), g.max(c)));
        assert!(hi / lo < 1.3, "C not stable under h halving: {cs:?}");
    }

    /// sigma* is a local minimum of |rho(., xi = omega, omega)|; 2/h is a
    /// local minimum at the order-2 discrete wavenumber.
    #[test]
    fn optimal_sigma_is_local_min() {
        let (omega, h) = (5.0, 0.1);
        let amp =
            |sig: f64, xi: f64| decay_factor(sig, Complex64::new(xi, 0.0), omega, h).unwrap().norm();
        let star = optimal_sigma_exact(omega, h).unwrap();
        for eps in [1e-3, 1e-2] {
            assert!(amp(star, omega) <= amp(star * (1.0 + eps), omega));
            assert!(amp(star, omega) <= amp(star * (1.0 - eps), omega));
        }
        let poly = poly_for(1, omega, h);
        let xi1 = discrete_wavenumbers(&poly, h).unwrap().wavenumbers[0].re;
        for eps in [1e-3, 1e-2] {
            assert!(amp(20.0, xi1) <= amp(20.0 * (1.0 + eps), xi1));
            assert!(amp(20.0, xi1) <= amp(20.0 * (1.0 - eps), xi1));
        }
    }

    #[test]
    fn map_sentinel_at_roots_and_symmetry() {
        let h = 0.1;
        let s = StencilCoeffs::new(1, h).unwrap();
        let lam = Complex64::new(25.0, 0.0);
        let poly = char_poly(&s, lam);
        let modes = discrete_wavenumbers(&poly, h).unwrap();
        let xi1 = modes.wavenumbers[0];
        assert!((xi1.re - 5.0536).abs() < 5e-5);
        let two = Complex64::new(2.0, 0.0);
        let at_root = poly.eval(two * (xi1 * h).cos());
        assert!(at_root.norm() < 1e-12);

        let grid = dispersion_map(&s, lam, (-6.0, 6.0), (-1.0, 1.0), (25, 9)).unwrap();
        // field(xi) = field(-xi): the sampled rectangle is symmetric.
        let val = |re: f64, im: f64| {
            grid.iter()
                .find(|(r, i, _)| (r - re).abs() < 1e-12 && (i - im).abs() < 1e-12)
                .unwrap()
                .2
        };
        for &(re, im) in &[(1.0, 0.25), (2.5, -0.75), (5.5, 0.5)] {
            assert!((val(re, im) - val(-re, -im)).abs() < 1e-12);
        }
    }

    #[test]
    fn damping_profiles() {
        let p = DampingProfile::right_constant(10, 6, 2.0).unwrap();
        assert_eq!(p.support(), (6, 10));
        assert!(p.values()[..6].iter().all(|&s| s == 0.0));
        let l = DampingProfile::left_constant(10, 3, 2.0).unwrap();
        assert_eq!(l.support(), (0, 3));
        let t = DampingProfile::two_stage(20, 4, 10, 5.0).unwrap();
        // damped layer-local nodes 0..=5 (ceil(10/2) = 5), i.e. grid 4..=9
        assert_eq!(t.support(), (4, 10));
        assert!(DampingProfile::right_constant(4, 0, -1.0).is_err());
        assert_eq!(DampingProfile::<f64>::zero(5).support(), (0, 0));
    }
}
