//! The group SU(1,1), its Lie algebra, and the hyperbolic disc.
//!
//! Elements are 2×2 complex matrices
//!
//! ```text
//!   [ a  b ]          |a|² − |b|² = 1,
//!   [ b̄  ā ]
//! ```
//!
//! stored as the pair `(a, b)`. The Lie algebra su(1,1) is spanned by
//!
//! ```text
//!   X₁ = (1/√2) [0 1; 1 0],   X₂ = (1/√2) [0 i; −i 0],   X₃ = [i 0; 0 −i],
//! ```
//!
//! with X₁, X₂ spanning 𝔭 (the tangent space of the disc) and X₃ spanning 𝔨.
//! The Iwasawa decomposition G = NAK uses
//!
//! ```text
//!   n(s) = [1+is  −is; is  1−is],   exp(tH) = [cosh t  sinh t; sinh t  cosh t],
//!   κ(ψ) = diag(e^{iψ}, e^{−iψ}),
//! ```
//!
//! and the quotient map g ↦ b/ā identifies G/K with the open unit disc;
//! exp(tH) lands on tanh t.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance on the defining invariant |a|² − |b|² = 1.
pub const EPS_GRP: f64 = 1e-12;
/// Tolerance on Iwasawa reconstruction residuals.
pub const EPS_IWA: f64 = 1e-10;
/// Inner radius of the canonical-coordinate cutoff (entrywise distance from e).
pub const CUTOFF_INNER: f64 = 0.5;
/// Outer radius of the canonical-coordinate cutoff.
pub const CUTOFF_OUTER: f64 = 1.5;

#[derive(Debug, Error)]
pub enum GroupError {
    /// |a|² − |b|² drifted away from 1; renormalise with [`GroupElement::project_to_group`].
    #[error("group invariant violated: |a|^2 - |b|^2 - 1 = {defect:e}")]
    InvariantViolation { defect: f64 },
    /// The group logarithm is only defined on the principal branch.
    #[error("element outside the principal branch of the group logarithm")]
    BranchError,
    /// A disc point must satisfy |z| < 1.
    #[error("point outside the open unit disc: |z| = {modulus}")]
    DomainError { modulus: f64 },
}

/// An element of SU(1,1), stored as the matrix entries `(a, b)` of the first row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: Complex64,
    pub b: Complex64,
}

impl GroupElement {
    /// Checked constructor; rejects pairs violating |a|² − |b|² = 1 beyond [`EPS_GRP`].
    pub fn new(a: Complex64, b: Complex64) -> Result<Self, GroupError> {
        let g = GroupElement { a, b };
        g.check()?;
        Ok(g)
    }

    pub fn identity() -> Self {
        GroupElement {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// κ(ψ) = diag(e^{iψ}, e^{−iψ}), the compact factor.
    pub fn kappa(psi: f64) -> Self {
        GroupElement {
            a: Complex64::from_polar(1.0, psi),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// exp(tH) with H = [0 1; 1 0], the abelian factor.
    pub fn a_exp(t: f64) -> Self {
        GroupElement {
            a: Complex64::new(t.cosh(), 0.0),
            b: Complex64::new(t.sinh(), 0.0),
        }
    }

    /// n(s) = [1+is −is; is 1−is], the nilpotent factor.
    pub fn n_exp(s: f64) -> Self {
        GroupElement {
            a: Complex64::new(1.0, s),
            b: Complex64::new(0.0, -s),
        }
    }

    /// Signed defect |a|² − |b|² − 1 of the defining invariant.
    pub fn defect(&self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr() - 1.0
    }

    fn check(&self) -> Result<(), GroupError> {
        let defect = self.defect();
        if defect.abs() > EPS_GRP || !defect.is_finite() {
            Err(GroupError::InvariantViolation { defect })
        } else {
            Ok(())
        }
    }

    /// Group product, re-checking the invariant to catch accumulated round-off.
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        let g = self.mul_unchecked(other);
        g.check()?;
        Ok(g)
    }

    /// Group product without the invariant re-check; used in stepping loops
    /// that renormalise periodically.
    pub fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * other.a + self.b * other.b.conj(),
            b: self.a * other.b + self.b * other.a.conj(),
        }
    }

    /// Left multiplication by κ(θ); scales the stored row by e^{iθ}.
    pub fn premul_kappa(&self, theta: f64) -> GroupElement {
        let w = Complex64::from_polar(1.0, theta);
        GroupElement {
            a: w * self.a,
            b: w * self.b,
        }
    }

    /// g⁻¹ = (ā, −b).
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Rescale onto the group manifold; the nearest-scaling cure for round-off drift.
    pub fn project_to_group(&self) -> GroupElement {
        let r = (self.a.norm_sqr() - self.b.norm_sqr()).sqrt();
        GroupElement {
            a: self.a / r,
            b: self.b / r,
        }
    }

    /// Euclidean distance between the full 2×2 matrix entries.
    pub fn entry_distance(&self, other: &GroupElement) -> f64 {
        let da = (self.a - other.a).norm_sqr();
        let db = (self.b - other.b).norm_sqr();
        (2.0 * (da + db)).sqrt()
    }

    /// The coset map G/K → 𝒟, g ↦ b/ā.
    pub fn to_disc(&self) -> DiscPoint {
        DiscPoint {
            z: self.b / self.a.conj(),
        }
    }
}

/// Coordinates in the ordered basis (X₁, X₂, X₃) of su(1,1).
///
/// The induced matrix is `[i·c3, (c1+i·c2)/√2; (c1−i·c2)/√2, −i·c3]`:
/// trace-free, diagonal purely imaginary, off-diagonals mutually conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector {
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
    };
    pub const X1: AlgebraVector = AlgebraVector {
        c1: 1.0,
        c2: 0.0,
        c3: 0.0,
    };
    pub const X2: AlgebraVector = AlgebraVector {
        c1: 0.0,
        c2: 1.0,
        c3: 0.0,
    };
    pub const X3: AlgebraVector = AlgebraVector {
        c1: 0.0,
        c2: 0.0,
        c3: 1.0,
    };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        AlgebraVector { c1, c2, c3 }
    }

    pub fn scale(&self, t: f64) -> Self {
        AlgebraVector {
            c1: t * self.c1,
            c2: t * self.c2,
            c3: t * self.c3,
        }
    }

    pub fn add(&self, other: &AlgebraVector) -> Self {
        AlgebraVector {
            c1: self.c1 + other.c1,
            c2: self.c2 + other.c2,
            c3: self.c3 + other.c3,
        }
    }

    pub fn neg(&self) -> Self {
        AlgebraVector {
            c1: -self.c1,
            c2: -self.c2,
            c3: -self.c3,
        }
    }

    pub fn norm(&self) -> f64 {
        (self.c1 * self.c1 + self.c2 * self.c2 + self.c3 * self.c3).sqrt()
    }
}

// cosh(√Δ) and sinh(√Δ)/√Δ as entire functions of Δ, stable through Δ = 0.
fn cosh_sinhc(delta: f64) -> (f64, f64) {
    const SERIES_CUT: f64 = 1e-2;
    if delta.abs() < SERIES_CUT {
        let d = delta;
        let cosh = 1.0 + d / 2.0 * (1.0 + d / 12.0 * (1.0 + d / 30.0 * (1.0 + d / 56.0)));
        let sinhc = 1.0 + d / 6.0 * (1.0 + d / 20.0 * (1.0 + d / 42.0 * (1.0 + d / 72.0)));
        (cosh, sinhc)
    } else if delta > 0.0 {
        let w = delta.sqrt();
        (w.cosh(), w.sinh() / w)
    } else {
        let w = (-delta).sqrt();
        (w.cos(), w.sin() / w)
    }
}

/// Exponential map su(1,1) → SU(1,1).
///
/// With X² = Δ·I for Δ = (c1² + c2²)/2 − c3², this is the closed form
/// exp(X) = cosh(√Δ)·I + sinhc(√Δ)·X.
pub fn exp_alg(v: &AlgebraVector) -> GroupElement {
    let delta = (v.c1 * v.c1 + v.c2 * v.c2) / 2.0 - v.c3 * v.c3;
    let (ch, shc) = cosh_sinhc(delta);
    GroupElement {
        a: Complex64::new(ch, shc * v.c3),
        b: Complex64::new(shc * v.c1, shc * v.c2) / std::f64::consts::SQRT_2,
    }
}

/// Principal-branch inverse of [`exp_alg`].
///
/// Defined where Re(tr g) > −2 and the elliptic angle stays below π
/// (equivalently the recovered |c3| < π); outside that region the logarithm
/// is ambiguous and `BranchError` is returned.
pub fn log_group(g: &GroupElement) -> Result<AlgebraVector, GroupError> {
    let c = g.a.re; // cosh(√Δ) of any preimage
    if c <= -1.0 + 1e-14 {
        return Err(GroupError::BranchError);
    }
    // sinhc(√Δ) of the principal preimage
    let shc = if c >= 1.0 {
        let w = (c * c - 1.0).sqrt().max(0.0).asinh(); // arccosh(c), stable near 1
        let (_, shc) = cosh_sinhc(w * w);
        shc
    } else {
        let w = c.acos();
        let (_, shc) = cosh_sinhc(-w * w);
        shc
    };
    let v = AlgebraVector {
        c1: std::f64::consts::SQRT_2 * g.b.re / shc,
        c2: std::f64::consts::SQRT_2 * g.b.im / shc,
        c3: g.a.im / shc,
    };
    if v.c3.abs() >= std::f64::consts::PI {
        return Err(GroupError::BranchError);
    }
    Ok(v)
}

/// The NAK factors of an element: g = n(s)·exp(tH)·κ(ψ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaFactors {
    /// N-parameter.
    pub s: f64,
    /// A-parameter, the value A(g)(H).
    pub t: f64,
    /// K-angle in [0, 2π).
    pub psi: f64,
}

impl IwasawaFactors {
    /// Rebuild n(s)·exp(tH)·κ(ψ); inverse of [`iwasawa`] up to [`EPS_IWA`].
    pub fn reconstruct(&self) -> GroupElement {
        GroupElement::n_exp(self.s)
            .mul_unchecked(&GroupElement::a_exp(self.t))
            .mul_unchecked(&GroupElement::kappa(self.psi))
    }
}

/// Global Iwasawa decomposition g = n(s)·exp(tH)·κ(ψ).
///
/// Closed form: F(ψ) = ā·e^{iψ} + b̄·e^{−iψ} equals e^t on the correct branch,
/// so ψ solves Im F = 0 with Re F > 0, then t = log F(ψ) and
/// s = e^t·Im(b̄·e^{−iψ}).
pub fn iwasawa(g: &GroupElement) -> IwasawaFactors {
    let (t, psi) = iwasawa_a_psi(g);
    let bb = g.b.conj();
    let s = t.exp() * (bb * Complex64::from_polar(1.0, -psi)).im;
    IwasawaFactors {
        s,
        t,
        psi: psi.rem_euclid(2.0 * std::f64::consts::PI),
    }
}

// A-parameter and K-angle only; the hot path of every circle quadrature.
pub(crate) fn iwasawa_a_psi(g: &GroupElement) -> (f64, f64) {
    let ab = g.a.conj();
    let bb = g.b.conj();
    let mut psi = f64::atan2(-(ab.im + bb.im), ab.re - bb.re);
    let (sin_psi, cos_psi) = psi.sin_cos();
    // Re F(ψ) with F = ā e^{iψ} + b̄ e^{−iψ}
    let mut re_f = (ab.re + bb.re) * cos_psi + (bb.im - ab.im) * sin_psi;
    if re_f < 0.0 {
        psi += std::f64::consts::PI;
        re_f = -re_f;
    }
    (re_f.ln(), psi)
}

// C^∞ step: 0 for u ≤ 0, 1 for u ≥ 1.
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let p = (-1.0 / u).exp();
        let q = (-1.0 / (1.0 - u)).exp();
        p / (p + q)
    }
}

// Radial cutoff χ(g): 1 inside entry-distance CUTOFF_INNER of e, 0 outside CUTOFF_OUTER.
fn cutoff(dist: f64) -> f64 {
    smooth_step((CUTOFF_OUTER - dist) / (CUTOFF_OUTER - CUTOFF_INNER))
}

/// Canonical coordinates x(g) = χ(g)·log_group(g).
///
/// These satisfy x(g⁻¹) = −x(g) exactly (bitwise up to floating negation),
/// vanish outside a compact neighbourhood of e, and agree with the algebra
/// coordinates on the cutoff plateau. Both the jump compensator of the path
/// simulator and the integral term of the characteristic matrix must use this
/// same function.
pub fn canonical_coords(g: &GroupElement) -> [f64; 3] {
    let dist = g.entry_distance(&GroupElement::identity());
    if dist >= CUTOFF_OUTER {
        return [0.0; 3];
    }
    let v = match log_group(g) {
        Ok(v) => v,
        Err(_) => return [0.0; 3],
    };
    let chi = cutoff(dist);
    [chi * v.c1, chi * v.c2, chi * v.c3]
}

/// A point of the open unit disc 𝒟 = G/K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    pub z: Complex64,
}

impl DiscPoint {
    pub fn new(z: Complex64) -> Result<Self, GroupError> {
        if z.norm() < 1.0 {
            Ok(DiscPoint { z })
        } else {
            Err(GroupError::DomainError { modulus: z.norm() })
        }
    }
}

/// Horocycle bracket ⟨z, b⟩ with b = e^{iβ} on the boundary circle:
/// ⟨z, b⟩ = ½·log[(1 − |z|²)/|z − b|²], so e^{2⟨z,b⟩} is the Poisson kernel.
///
/// Relation to the group layer: A(κ(θ)g) = ⟨to_disc(g), e^{−2iθ}⟩.
pub fn horocycle_bracket(p: &DiscPoint, beta: f64) -> f64 {
    let b = Complex64::from_polar(1.0, beta);
    0.5 * ((1.0 - p.z.norm_sqr()) / (p.z - b).norm_sqr()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(g: &GroupElement, h: &GroupElement, tol: f64) {
        assert!(
            g.entry_distance(h) < tol,
            "elements differ by {:e}: {:?} vs {:?}",
            g.entry_distance(h),
            g,
            h
        );
    }

    fn sample_element(k: u64) -> GroupElement {
        // deterministic pseudo-random products of one-parameter factors
        let u = |j: u64| ((k.wrapping_mul(6364136223846793005).wrapping_add(j) >> 33) as f64
            / (1u64 << 31) as f64)
            - 1.0;
        GroupElement::n_exp(u(1))
            .mul_unchecked(&GroupElement::a_exp(u(2)))
            .mul_unchecked(&GroupElement::kappa(3.0 * u(3)))
    }

    #[test]
    fn identity_is_neutral() {
        let e = GroupElement::identity();
        let g = sample_element(5);
        assert_close(&e.mul(&g).unwrap(), &g, 1e-15);
        assert_close(&g.mul(&e).unwrap(), &g, 1e-15);
    }

    #[test]
    fn inverse_law() {
        let e = GroupElement::identity();
        for k in 0..50 {
            let g = sample_element(k);
            assert_close(&g.mul(&g.inverse()).unwrap(), &e, 1e-12);
            assert_close(&g.inverse().mul(&g).unwrap(), &e, 1e-12);
        }
    }

    #[test]
    fn associativity() {
        for k in 0..30 {
            let (g, h, f) = (sample_element(k), sample_element(k + 100), sample_element(k + 200));
            let lhs = g.mul(&h).unwrap().mul(&f).unwrap();
            let rhs = g.mul(&h.mul(&f).unwrap()).unwrap();
            assert!(lhs.entry_distance(&rhs) < 1e-12);
        }
    }

    #[test]
    fn one_parameter_subgroup_additivity() {
        let g = exp_alg(&AlgebraVector::X1.scale(0.3));
        let h = exp_alg(&AlgebraVector::X1.scale(0.4));
        assert_close(&g.mul(&h).unwrap(), &exp_alg(&AlgebraVector::X1.scale(0.7)), 1e-14);
        let g = exp_alg(&AlgebraVector::X1.scale(0.6));
        assert_close(&g.inverse(), &exp_alg(&AlgebraVector::X1.scale(-0.6)), 1e-15);
    }

    #[test]
    fn exp_alg_special_directions() {
        assert_close(&exp_alg(&AlgebraVector::ZERO), &GroupElement::identity(), 0.0 + 1e-16);
        // t·√2·X₁ exponentiates to exp(tH)
        let t = 0.8;
        let g = exp_alg(&AlgebraVector::X1.scale(t * std::f64::consts::SQRT_2));
        assert_close(&g, &GroupElement::a_exp(t), 1e-14);
        // ψ·X₃ exponentiates to κ(ψ)
        let psi = 1.1;
        assert_close(&exp_alg(&AlgebraVector::X3.scale(psi)), &GroupElement::kappa(psi), 1e-15);
    }

    #[test]
    fn exp_log_round_trip() {
        assert_eq!(log_group(&GroupElement::identity()).unwrap(), AlgebraVector::ZERO);
        for k in 0..200 {
            let u = |j: u64| {
                ((k * 97 + j * 31) % 200) as f64 / 100.0 - 1.0
            };
            let v = AlgebraVector::new(u(1), u(2), u(3));
            if v.norm() > 1.0 {
                continue;
            }
            let w = log_group(&exp_alg(&v)).unwrap();
            let err = (w.c1 - v.c1).abs().max((w.c2 - v.c2).abs()).max((w.c3 - v.c3).abs());
            assert!(err < 1e-10, "round trip error {:e} for {:?}", err, v);
        }
    }

    #[test]
    fn log_rejects_branch_boundary() {
        // elliptic angle π: ambiguous logarithm
        let g = exp_alg(&AlgebraVector::new(1e-3, 0.0, std::f64::consts::PI));
        assert!(matches!(log_group(&g), Err(GroupError::BranchError)));
        // Re tr ≤ −2: −exp(tH)
        let m = GroupElement::a_exp(0.4);
        let neg = GroupElement::new(-m.a, -m.b).unwrap();
        assert!(matches!(log_group(&neg), Err(GroupError::BranchError)));
    }

    #[test]
    fn log_inverse_antisymmetry() {
        for k in 0..100 {
            let g = sample_element(k);
            if let (Ok(v), Ok(w)) = (log_group(&g), log_group(&g.inverse())) {
                assert_eq!(v.c1, -w.c1);
                assert_eq!(v.c2, -w.c2);
                assert_eq!(v.c3, -w.c3);
            }
        }
    }

    #[test]
    fn iwasawa_trivial_cases() {
        let f = iwasawa(&GroupElement::identity());
        assert_eq!((f.s, f.t, f.psi), (0.0, 0.0, 0.0));
        let f = iwasawa(&GroupElement::a_exp(0.7));
        assert!(f.s.abs() < 1e-15 && (f.t - 0.7).abs() < 1e-15 && f.psi.abs() < 1e-15);
    }

    #[test]
    fn iwasawa_round_trip() {
        for k in 0..1000 {
            let g = sample_element(k).mul_unchecked(&sample_element(k + 5000));
            let f = iwasawa(&g);
            assert!(
                f.reconstruct().entry_distance(&g) < EPS_IWA,
                "reconstruction residual {:e} at k={}",
                f.reconstruct().entry_distance(&g),
                k
            );
            assert!((0.0..2.0 * std::f64::consts::PI).contains(&f.psi));
        }
    }

    // Independent cross-check of the closed-form Iwasawa solve: fit the three
    // unknowns by a coordinate-descent residual minimiser and compare.
    #[test]
    fn iwasawa_matches_nonlinear_solve() {
        let g = sample_element(11);
        let f = iwasawa(&g);
        let residual = |s: f64, t: f64, psi: f64| {
            GroupElement::n_exp(s)
                .mul_unchecked(&GroupElement::a_exp(t))
                .mul_unchecked(&GroupElement::kappa(psi))
                .entry_distance(&g)
        };
        let (mut s, mut t, mut psi) = (0.0, 0.0, 0.0);
        let mut step = 0.5;
        let mut best = residual(s, t, psi);
        while step > 1e-13 {
            let mut improved = false;
            for (ds, dt, dp) in [
                (step, 0.0, 0.0),
                (-step, 0.0, 0.0),
                (0.0, step, 0.0),
                (0.0, -step, 0.0),
                (0.0, 0.0, step),
                (0.0, 0.0, -step),
            ] {
                let r = residual(s + ds, t + dt, psi + dp);
                if r < best {
                    best = r;
                    s += ds;
                    t += dt;
                    psi += dp;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        assert!(best < 1e-9);
        assert!((s - f.s).abs() < 1e-6);
        assert!((t - f.t).abs() < 1e-6);
        assert!((psi - f.psi.rem_euclid(2.0 * std::f64::consts::PI).min(f.psi)).abs() < 1e-6
            || (psi + 2.0 * std::f64::consts::PI - f.psi).abs() < 1e-6);
    }

    #[test]
    fn canonical_coords_plateau_and_antisymmetry() {
        assert_eq!(canonical_coords(&GroupElement::identity()), [0.0; 3]);
        let x = canonical_coords(&exp_alg(&AlgebraVector::X2.scale(0.1)));
        assert!((x[0]).abs() < 1e-15 && (x[1] - 0.1).abs() < 1e-12 && x[2].abs() < 1e-15);
        for k in 0..100 {
            let mut g = sample_element(k);
            g = GroupElement {
                a: Complex64::new(1.0, 0.0) + (g.a - Complex64::new(1.0, 0.0)) * 0.3,
                b: g.b * 0.3,
            }
            .project_to_group();
            let x = canonical_coords(&g);
            let y = canonical_coords(&g.inverse());
            assert_eq!(x[0], -y[0]);
            assert_eq!(x[1], -y[1]);
            assert_eq!(x[2], -y[2]);
        }
        // far from e: identically zero
        assert_eq!(canonical_coords(&GroupElement::a_exp(3.0)), [0.0; 3]);
    }

    #[test]
    fn disc_map() {
        assert_eq!(GroupElement::identity().to_disc().z, Complex64::new(0.0, 0.0));
        let t = 0.9;
        let z = GroupElement::a_exp(t).to_disc().z;
        assert!((z - Complex64::new(t.tanh(), 0.0)).norm() < 1e-15);
        // right K-invariance of the coset map
        for k in 0..20 {
            let g = sample_element(k);
            let gk = g.mul_unchecked(&GroupElement::kappa(0.3 + k as f64));
            assert!((g.to_disc().z - gk.to_disc().z).norm() < 1e-13);
        }
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(DiscPoint::new(Complex64::new(0.3, -0.4)).is_ok());
    }

    #[test]
    fn bracket_special_values() {
        let origin = DiscPoint::new(Complex64::new(0.0, 0.0)).unwrap();
        for beta in [0.0, 1.0, 2.5, 6.0] {
            assert_eq!(horocycle_bracket(&origin, beta), 0.0);
        }
        // ⟨tanh t, 1⟩ = t
        for t in [0.2, 0.8, 1.5] {
            let p = DiscPoint::new(Complex64::new(t.tanh(), 0.0)).unwrap();
            assert!((horocycle_bracket(&p, 0.0) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_normalisation() {
        // (1/2π)∫ e^{2⟨z,e^{iβ}⟩} dβ = 1, spectrally accurate trapezoid
        let nodes = 256;
        for z in [
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.7, 0.1),
            Complex64::new(0.0, 0.85),
        ] {
            let p = DiscPoint::new(z).unwrap();
            let mut sum = 0.0;
            for j in 0..nodes {
                let beta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
                sum += (2.0 * horocycle_bracket(&p, beta)).exp();
            }
            sum /= nodes as f64;
            assert!((sum - 1.0).abs() < 1e-10, "poisson normalisation {:e}", sum - 1.0);
        }
    }

    #[test]
    fn bracket_matches_group_a_parameter() {
        // A(κ(θ)g) = ⟨to_disc(g), e^{−2iθ}⟩
        for k in 0..20 {
            let g = sample_element(k);
            let p = g.to_disc();
            for j in 0..7 {
                let theta = 0.9 * j as f64;
                let (t, _) = iwasawa_a_psi(&g.premul_kappa(theta));
                let bracket = horocycle_bracket(&p, -2.0 * theta);
                assert!(
                    (t - bracket).abs() < 1e-11,
                    "A vs bracket mismatch {:e}",
                    t - bracket
                );
            }
        }
    }

    #[test]
    fn invariant_violation_detected() {
        let bad = GroupElement {
            a: Complex64::new(1.1, 0.0),
            b: Complex64::new(0.0, 0.0),
        };
        assert!(matches!(
            GroupElement::new(bad.a, bad.b),
            Err(GroupError::InvariantViolation { .. })
        ));
        let fixed = bad.project_to_group();
        assert!(fixed.defect().abs() < EPS_GRP);
    }
}
