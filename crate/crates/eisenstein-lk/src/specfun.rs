//! Special functions behind the closed-form hyperbolic formulas.
//!
//! The matrix entries on the disc are
//!
//! ```text
//!   Φ_{λ,n}(r) = r^{|n|} · Γ(|n|+ν)/(Γ(ν)·|n|!) · ₂F₁(ν, 1−ν; |n|+1; r²/(r²−1)),
//!   ν = (1 + iλ)/2,
//! ```
//!
//! and since r²/(r²−1) ∈ (−∞, 0] for r ∈ [0, 1), the hypergeometric function
//! is only ever evaluated on the negative real axis. The n = 0 case is the
//! spherical function φ_λ.

use crate::group::DiscPoint;
use num_complex::Complex64;
use thiserror::Error;

/// Principal-series spectral parameter λ; ν = (1 + iλ)/2 is derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    pub lambda: f64,
}

impl SpectralParam {
    pub fn new(lambda: f64) -> Self {
        SpectralParam { lambda }
    }

    pub fn nu(&self) -> Complex64 {
        Complex64::new(0.5, 0.5 * self.lambda)
    }
}

#[derive(Debug, Error)]
pub enum SpecFunError {
    #[error("gamma pole at non-positive integer {0}")]
    PoleError(f64),
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error("argument outside the supported domain: {0}")]
    DomainError(String),
}

// Lanczos approximation, g = 607/128 with 15 coefficients. Relative error
// below 1e-13 on the right half-plane, which covers the ν-shifted arguments
// used by the closed forms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// Principal-branch log Γ(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-12 {
        return Err(SpecFunError::PoleError(z.re));
    }
    if z.re < 0.5 {
        // reflection: log Γ(z) = log π − log sin(πz) − log Γ(1−z)
        let pi = std::f64::consts::PI;
        let log_sin = (Complex64::new(pi, 0.0) * z).sin().ln();
        return Ok(Complex64::new(pi.ln(), 0.0) - log_sin - log_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + (k as f64 - 1.0));
    }
    let t = z + (LANCZOS_G - 0.5);
    let half_log_two_pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(half_log_two_pi + (z - 0.5) * t.ln() - t + acc.ln())
}

const MAX_SERIES_TERMS: usize = 10_000;

// Direct Gauss series Σ (a)_k (b)_k / ((c)_k k!) · x^k for |x| < 1.
fn gauss_series(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
) -> Result<Complex64, SpecFunError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.norm() <= 1e-15 * (1.0 + sum.norm()) {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(SpecFunError::NonConvergence(MAX_SERIES_TERMS))
}

/// Gauss hypergeometric ₂F₁(a, b; c; x) for real x ≤ 0.
///
/// Direct series on (−1, 0]; for x ≤ −1 the Pfaff transformation
/// ₂F₁(a,b;c;x) = (1−x)^{−a}·₂F₁(a, c−b; c; x/(x−1)) maps the argument
/// into [1/2, 1).
pub fn gauss_2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
) -> Result<Complex64, SpecFunError> {
    if c.im == 0.0 && c.re <= 0.0 && (c.re - c.re.round()).abs() < 1e-12 {
        return Err(SpecFunError::PoleError(c.re));
    }
    if x > 0.0 {
        return Err(SpecFunError::DomainError(format!(
            "gauss_2f1 requires x <= 0, got {x}"
        )));
    }
    if x > -1.0 {
        gauss_series(a, b, c, x)
    } else {
        let one_minus_x = Complex64::new(1.0 - x, 0.0);
        let prefactor = (-a * one_minus_x.ln()).exp();
        Ok(prefactor * gauss_series(a, c - b, c, x / (x - 1.0))?)
    }
}

/// Closed-form entry Φ_{λ,n}(r) on the radius; Φ_{λ,0} is the spherical
/// function φ_λ.
pub fn phi_closed(lambda: &SpectralParam, n: i32, r: f64) -> Result<Complex64, SpecFunError> {
    if !(0.0..1.0).contains(&r) {
        return Err(SpecFunError::DomainError(format!(
            "phi_closed requires 0 <= r < 1, got {r}"
        )));
    }
    let m = n.unsigned_abs() as f64;
    if r == 0.0 {
        return Ok(Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0));
    }
    let nu = lambda.nu();
    let x = r * r / (r * r - 1.0);
    let f = gauss_2f1(nu, Complex64::new(1.0, 0.0) - nu, Complex64::new(m + 1.0, 0.0), x)?;
    // Γ(|n|+ν) / (Γ(ν)·|n|!) via log-gamma differences to dodge overflow
    let log_coef =
        log_gamma(nu + m)? - log_gamma(nu)? - log_gamma(Complex64::new(m + 1.0, 0.0))?;
    Ok(r.powi(n.abs()) * log_coef.exp() * f)
}

/// Entry at a disc point: Φ_{λ,n}(z) = e^{i·n·arg z}·Φ_{λ,n}(|z|).
pub fn phi_disc(lambda: &SpectralParam, n: i32, p: &DiscPoint) -> Result<Complex64, SpecFunError> {
    let radial = phi_closed(lambda, n, p.z.norm())?;
    Ok(Complex64::from_polar(1.0, n as f64 * p.z.arg()) * radial)
}
