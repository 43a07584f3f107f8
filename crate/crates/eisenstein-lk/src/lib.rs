//! Noncommutative Fourier analysis and Lévy processes on SU(1,1).
//!
//! The crate builds, at desk scale, the machinery that characterises
//! infinitely divisible probability measures on SU(1,1) and the hyperbolic
//! disc through matrix-valued spectral data:
//!
//! * [`group`] — exact SU(1,1)/su(1,1) arithmetic, Iwasawa factorisation,
//!   canonical coordinates and the quotient map to the Poincaré disc;
//! * [`specfun`] — log-gamma, Gauss ₂F₁ on the negative axis, and the
//!   closed-form hypergeometric matrix entries on the disc;
//! * [`eisenstein`] — generalised Eisenstein integrals Φ_{λ,n′,n}(g) by circle
//!   quadrature, truncated principal-series matrices, and the infinitesimal
//!   coefficient tensor ρ;
//! * [`transform`] — probability measures on the group, convolution, the
//!   Eisenstein transform μ̂ = ∫Φ^#(g)μ(dg), K-averaging, and the Helgason
//!   Fourier bridge;
//! * [`levy`] — simulation of Lévy paths from a Hunt triple (b, a, ν);
//! * [`lk`] — the characteristic matrix ψ_λ, truncated matrix exponentials,
//!   and the end-to-end check that the transform of the time-t law equals
//!   Exp(t·ψ_λ);
//! * [`cli`] — batch front end: `eval`, `transform`, `simulate`, `verify-lk`,
//!   `rho`.

pub mod cli;
pub mod eisenstein;
pub mod group;
pub mod levy;
pub mod lk;
pub mod specfun;
pub mod transform;

pub use eisenstein::{EisensteinMatrix, ModeWindow, RhoTensor};
pub use group::{AlgebraVector, DiscPoint, GroupElement, IwasawaFactors};
pub use levy::{GeneratorTriple, LevyMeasureDiscrete, PathSample, StartLaw};
pub use lk::PsiMatrix;
pub use specfun::SpectralParam;
pub use transform::{CharacteristicRow, MeasureRep};
