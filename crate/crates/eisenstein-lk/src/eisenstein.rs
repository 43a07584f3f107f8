//! Generalised Eisenstein integrals on SU(1,1) and their infinitesimal data.
//!
//! For K = U(1) every K-type is one-dimensional and the principal-series
//! matrix elements reduce to scalar circle integrals
//!
//! ```text
//!   Φ_{λ,n′,n}(g) = (1/2π) ∫₀^{2π} e^{(iλ+1)·A(κ(θ)g)} e^{i n′ ψ(κ(θ)g) − i n θ} dθ,
//! ```
//!
//! where A(·) and ψ(·) are the abelian and compact Iwasawa parameters. The
//! integrand is analytic and 2π-periodic, so a uniform trapezoid rule is
//! spectrally accurate. Entries are window-independent; a [`ModeWindow`]
//! merely selects the finite block that stands in for the infinite operator
//! Φ_λ(g), whose composition rule is Φ_λ(gh) = Φ_λ(h)·Φ_λ(g) in the sense of
//! matrix multiplication over the mode index.
//!
//! The tensor ρ of infinitesimal coefficients, ρ_{n′,n}(X) = (d/dt)
//! Φ_{λ,n′,n}(exp tX)|₀, is computed by two independent routes: Richardson
//! finite differences of the quadrature, and the derived action of dξ_λ(X)
//! on the circle modes. The two must agree; no printed constant is wired in.

use crate::group::{self, GroupElement};
use crate::specfun::SpectralParam;
use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

/// Default node count for circle quadrature.
pub const DEFAULT_NODES: usize = 512;
/// Convergence target for automatic node doubling.
pub const AUTO_QUADRATURE_TOL: f64 = 1e-10;
/// Node cap for automatic doubling.
pub const MAX_AUTO_NODES: usize = 32_768;
/// Finite-difference step for the ρ tensor.
pub const RHO_FD_STEP: f64 = 1e-4;
/// Mandatory agreement between the two ρ routes.
pub const RHO_AGREEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum EisensteinError {
    /// The finite-difference and analytic ρ routes disagree; the quadrature
    /// or step size is misconfigured.
    #[error("rho methods disagree by {max_diff:e} (tolerance {tol:e})")]
    MethodDisagreement { max_diff: f64, tol: f64 },
}

/// Symmetric mode window {−N, …, N}; the trivial K-type sits at index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeWindow {
    half_width: u32,
}

impl ModeWindow {
    pub fn new(half_width: u32) -> Self {
        ModeWindow { half_width }
    }

    pub fn half_width(&self) -> i32 {
        self.half_width as i32
    }

    pub fn size(&self) -> usize {
        2 * self.half_width as usize + 1
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> {
        -(self.half_width as i32)..=self.half_width as i32
    }

    pub fn contains(&self, n: i32) -> bool {
        n.unsigned_abs() <= self.half_width
    }

    pub fn index_of(&self, n: i32) -> usize {
        debug_assert!(self.contains(n));
        (n + self.half_width as i32) as usize
    }

    pub fn mode_at(&self, index: usize) -> i32 {
        index as i32 - self.half_width as i32
    }
}

/// Truncated matrix (Φ_{λ,n′,n}(g)) over a mode window; rows are n′, columns n.
#[derive(Debug, Clone)]
pub struct EisensteinMatrix {
    pub lambda: SpectralParam,
    pub window: ModeWindow,
    pub entries: Array2<Complex64>,
}

impl EisensteinMatrix {
    pub fn entry(&self, nprime: i32, n: i32) -> Complex64 {
        self.entries[[self.window.index_of(nprime), self.window.index_of(n)]]
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Central block of a wider matrix; entries are window-independent, so
    /// this equals the directly assembled smaller matrix.
    pub fn restricted(&self, window: ModeWindow) -> EisensteinMatrix {
        assert!(window.half_width() <= self.window.half_width());
        let offset = (self.window.half_width() - window.half_width()) as usize;
        let size = window.size();
        let mut entries = Array2::zeros((size, size));
        for r in 0..size {
            for c in 0..size {
                entries[[r, c]] = self.entries[[r + offset, c + offset]];
            }
        }
        EisensteinMatrix {
            lambda: self.lambda,
            window,
            entries,
        }
    }
}

/// The empirically pinned index map between group modes (Fourier modes of ψ
/// on K) and disc/boundary modes: group mode n corresponds to disc mode n/2
/// for even n, with phases matching through z = to_disc(g); odd group modes
/// pair with nothing and the n′ = 0 row vanishes there, reflecting the
/// two-element centre M = {±I}.
pub fn group_to_disc_mode(n: i32) -> Option<i32> {
    if n % 2 == 0 {
        Some(n / 2)
    } else {
        None
    }
}

/// Single entry Φ_{λ,n′,n}(g) by trapezoid quadrature with `nodes` points.
pub fn phi_entry(
    lambda: &SpectralParam,
    nprime: i32,
    n: i32,
    g: &GroupElement,
    nodes: usize,
) -> Complex64 {
    let nodes = nodes.max(4);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let (t, psi) = group::iwasawa_a_psi(&g.premul_kappa(theta));
        let weight = Complex64::new(t.exp(), 0.0) * Complex64::from_polar(1.0, lambda.lambda * t);
        sum += weight * Complex64::from_polar(1.0, nprime as f64 * psi - n as f64 * theta);
    }
    sum / nodes as f64
}

/// Assemble the full (2N+1)² block with one Iwasawa decomposition per node.
pub fn phi_matrix(
    lambda: &SpectralParam,
    window: ModeWindow,
    g: &GroupElement,
    nodes: usize,
) -> EisensteinMatrix {
    let nodes = nodes.max(4);
    let size = window.size();
    let mut entries = Array2::<Complex64>::zeros((size, size));
    let mut row = vec![Complex64::new(0.0, 0.0); size];
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let (t, psi) = group::iwasawa_a_psi(&g.premul_kappa(theta));
        let weight = Complex64::new(t.exp() / nodes as f64, 0.0)
            * Complex64::from_polar(1.0, lambda.lambda * t);
        for (idx, m) in window.modes().enumerate() {
            row[idx] = weight * Complex64::from_polar(1.0, m as f64 * psi);
            col[idx] = Complex64::from_polar(1.0, -(m as f64) * theta);
        }
        for r in 0..size {
            let u = row[r];
            for c in 0..size {
                entries[[r, c]] += u * col[c];
            }
        }
    }
    EisensteinMatrix {
        lambda: *lambda,
        window,
        entries,
    }
}

/// Node-doubling wrapper: starts at [`DEFAULT_NODES`] and doubles until two
/// successive evaluations differ by less than [`AUTO_QUADRATURE_TOL`].
pub fn phi_matrix_auto(
    lambda: &SpectralParam,
    window: ModeWindow,
    g: &GroupElement,
) -> EisensteinMatrix {
    let mut nodes = DEFAULT_NODES;
    let mut current = phi_matrix(lambda, window, g, nodes);
    while nodes < MAX_AUTO_NODES {
        nodes *= 2;
        let refined = phi_matrix(lambda, window, g, nodes);
        let diff = current
            .entries
            .iter()
            .zip(refined.entries.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        current = refined;
        if diff < AUTO_QUADRATURE_TOL {
            break;
        }
    }
    current
}

/// Φ^{#}(g) = Φ(g⁻¹), the kernel of the Eisenstein transform.
pub fn phi_sharp_matrix(
    lambda: &SpectralParam,
    window: ModeWindow,
    g: &GroupElement,
    nodes: usize,
) -> EisensteinMatrix {
    phi_matrix(lambda, window, &g.inverse(), nodes)
}

/// Which route computes the ρ tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMethod {
    /// Richardson-extrapolated central differences of the quadrature.
    FiniteDiff,
    /// The derived circle-operator action of dξ_λ(X).
    Analytic,
}

/// ρ[i][n′][n] = (d/dt) Φ_{λ,n′,n}(exp t·X_i)|₀ for the fixed basis
/// (X₁, X₂, X₃); ρ[2] (the X₃ slice) is diagonal with entries i·n.
#[derive(Debug, Clone)]
pub struct RhoTensor {
    pub lambda: SpectralParam,
    pub window: ModeWindow,
    pub mats: [Array2<Complex64>; 3],
}

impl RhoTensor {
    pub fn slice(&self, i: usize) -> &Array2<Complex64> {
        &self.mats[i]
    }

    pub fn max_difference(&self, other: &RhoTensor) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for (x, y) in self.mats[i].iter().zip(other.mats[i].iter()) {
                worst = worst.max((x - y).norm());
            }
        }
        worst
    }
}

fn rho_finite_diff(lambda: &SpectralParam, window: ModeWindow) -> RhoTensor {
    let basis = [
        group::AlgebraVector::X1,
        group::AlgebraVector::X2,
        group::AlgebraVector::X3,
    ];
    let nodes = 512;
    let eval = |v: &group::AlgebraVector| phi_matrix(lambda, window, &group::exp_alg(v), nodes);
    let mats = basis.map(|x| {
        let diff_at = |h: f64| {
            let plus = eval(&x.scale(h));
            let minus = eval(&x.scale(-h));
            (plus.entries - minus.entries) / Complex64::new(2.0 * h, 0.0)
        };
        let coarse = diff_at(RHO_FD_STEP);
        let fine = diff_at(RHO_FD_STEP / 2.0);
        (fine * Complex64::new(4.0, 0.0) - coarse) / Complex64::new(3.0, 0.0)
    });
    RhoTensor {
        lambda: *lambda,
        window,
        mats,
    }
}

// dξ_λ(X) acts on a circle mode f_{n′} at κ(θ) as
//   (iλ+1)·w_a(θ)·f_{n′} + i·n′·w_k(θ)·f_{n′},
// where Ad(κθ)X splits as w_k·X₃ + w_a·H + w_n·X_α in 𝔨 ⊕ 𝔞 ⊕ 𝔫. Writing
// X = [i·p, q; q̄, −i·p] with q = (c1+i·c2)/√2, conjugation by κ(θ) keeps p
// and maps q ↦ e^{2iθ}q, and the split solves to w_a = Re q′, w_n = −Im q′,
// w_k = p + Im q′. Matrix elements follow from an exact trigonometric
// quadrature against e^{i(n′−n)θ}.
fn rho_analytic(lambda: &SpectralParam, window: ModeWindow) -> RhoTensor {
    let size = window.size();
    let nodes = (4 * window.half_width() as usize + 16).max(64);
    let il_plus = Complex64::new(1.0, lambda.lambda);
    let basis = [
        group::AlgebraVector::X1,
        group::AlgebraVector::X2,
        group::AlgebraVector::X3,
    ];
    let mats = basis.map(|x| {
        let q = Complex64::new(x.c1, x.c2) / std::f64::consts::SQRT_2;
        let p = x.c3;
        let mut m = Array2::<Complex64>::zeros((size, size));
        for j in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let q_rot = q * Complex64::from_polar(1.0, 2.0 * theta);
            let w_a = q_rot.re;
            let w_k = p + q_rot.im;
            for (r, nprime) in window.modes().enumerate() {
                let action = (il_plus * w_a + Complex64::new(0.0, nprime as f64 * w_k))
                    / nodes as f64;
                for (c, n) in window.modes().enumerate() {
                    m[[r, c]] +=
                        action * Complex64::from_polar(1.0, (nprime - n) as f64 * theta);
                }
            }
        }
        m
    });
    RhoTensor {
        lambda: *lambda,
        window,
        mats,
    }
}

pub fn rho_tensor(lambda: &SpectralParam, window: ModeWindow, method: RhoMethod) -> RhoTensor {
    match method {
        RhoMethod::FiniteDiff => rho_finite_diff(lambda, window),
        RhoMethod::Analytic => rho_analytic(lambda, window),
    }
}

/// Compute ρ by both routes and insist they agree within
/// [`RHO_AGREEMENT_TOL`]; returns the analytic tensor.
pub fn rho_tensor_checked(
    lambda: &SpectralParam,
    window: ModeWindow,
) -> Result<RhoTensor, EisensteinError> {
    let analytic = rho_analytic(lambda, window);
    let fd = rho_finite_diff(lambda, window);
    let max_diff = analytic.max_difference(&fd);
    if max_diff > RHO_AGREEMENT_TOL {
        return Err(EisensteinError::MethodDisagreement {
            max_diff,
            tol: RHO_AGREEMENT_TOL,
        });
    }
    Ok(analytic)
}
