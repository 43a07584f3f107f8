//! Probability measures on SU(1,1) and their Eisenstein transforms.
//!
//! The transform of a Borel probability measure μ is the matrix-valued
//! integral μ̂_λ = ∫ Φ^{#}_λ(g) μ(dg) with Φ^{#}(g) = Φ(g⁻¹). Convolution
//! goes to matrix multiplication, (μ₁ ∗ μ₂)^ = μ̂₁·μ̂₂, and every entry of a
//! transform has modulus at most one.
//!
//! Measures whose transform is supported on the n′ = 0 row are exactly those
//! dressed by a uniform K-start, μ = Haar(K) ∗ μ₀; [`right_k_invariantise`]
//! produces that dressing with equispaced κ-angles, which kills the rows
//! n′ ≠ 0 exactly up to aliasing at multiples of the angle count. The
//! surviving row is the symmetric-space (disc) spectral data, and a windowed
//! Fourier synthesis of it recovers the Helgason transform on the boundary
//! circle.

use crate::eisenstein::{phi_sharp_matrix, EisensteinMatrix, ModeWindow};
use crate::group::{self, GroupElement, GroupError, EPS_GRP};
use crate::specfun::SpectralParam;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Discrete weights must sum to one within this tolerance.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("measure is not right-K-invariantised")]
    NotInvariantised,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("convolution of these measure variants is not supported: {0}")]
    UnsupportedConvolution(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The concrete support of a measure.
#[derive(Debug, Clone)]
pub enum MeasureVariant {
    /// Unit mass at a single element.
    Dirac(GroupElement),
    /// Finitely many weighted atoms; weights sum to one.
    Discrete(Vec<(GroupElement, f64)>),
    /// Equal-weight sample cloud, e.g. simulated marginals.
    Empirical(Vec<GroupElement>),
}

/// A probability measure on the group, with a flag recording that it has
/// been averaged over a uniform K-start.
#[derive(Debug, Clone)]
pub struct MeasureRep {
    pub variant: MeasureVariant,
    pub right_k_invariantised: bool,
}

impl MeasureRep {
    pub fn dirac(g: GroupElement) -> Self {
        MeasureRep {
            variant: MeasureVariant::Dirac(g),
            right_k_invariantised: false,
        }
    }

    pub fn discrete(atoms: Vec<(GroupElement, f64)>) -> Result<Self, TransformError> {
        if atoms.is_empty() {
            return Err(TransformError::InvalidMeasure("no atoms".into()));
        }
        let mut total = 0.0;
        for (g, w) in &atoms {
            if *w <= 0.0 {
                return Err(TransformError::InvalidMeasure(format!(
                    "non-positive weight {w}"
                )));
            }
            if g.defect().abs() > EPS_GRP {
                return Err(TransformError::InvalidMeasure(format!(
                    "atom violates the group invariant by {:e}",
                    g.defect()
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(TransformError::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(MeasureRep {
            variant: MeasureVariant::Discrete(atoms),
            right_k_invariantised: false,
        })
    }

    pub fn empirical(samples: Vec<GroupElement>) -> Result<Self, TransformError> {
        if samples.is_empty() {
            return Err(TransformError::InvalidMeasure("empty sample".into()));
        }
        Ok(MeasureRep {
            variant: MeasureVariant::Empirical(samples),
            right_k_invariantised: false,
        })
    }
}

/// The n′ = 0 row of a transform: the symmetric-space spectral data
/// μ̂(λ, n), with the spherical (bi-invariant) component at n = 0.
#[derive(Debug, Clone)]
pub struct CharacteristicRow {
    pub lambda: SpectralParam,
    pub window: ModeWindow,
    pub values: Vec<Complex64>,
}

impl CharacteristicRow {
    pub fn value(&self, n: i32) -> Complex64 {
        self.values[self.window.index_of(n)]
    }
}

// Mean of Φ^#(g) over an equal-weight sample cloud. One Iwasawa sweep per
// sample feeds every (n′, n) pair: per node the row phases are accumulated
// into a nodes × modes table, and the fixed column phases are applied once
// at the end. Chunked map + ordered reduction keeps the float sum
// deterministic under any thread schedule.
fn empirical_sharp_mean(
    lambda: &SpectralParam,
    window: ModeWindow,
    samples: &[GroupElement],
    nodes: usize,
) -> Array2<Complex64> {
    let nodes = nodes.max(4);
    let size = window.size();
    let mid = window.half_width() as usize;
    let block_tables: Vec<Array2<Complex64>> = samples
        .par_chunks(4096)
        .map(|chunk| {
            let mut table = Array2::<Complex64>::zeros((nodes, size));
            for g in chunk {
                let h = g.inverse();
                for j in 0..nodes {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
                    let (t, psi) = group::iwasawa_a_psi(&h.premul_kappa(theta));
                    let weight = Complex64::new(t.exp(), 0.0)
                        * Complex64::from_polar(1.0, lambda.lambda * t);
                    let z = Complex64::from_polar(1.0, psi);
                    table[[j, mid]] += weight;
                    let mut up = weight;
                    let mut down = weight;
                    for k in 1..=mid {
                        up *= z;
                        down *= z.conj();
                        table[[j, mid + k]] += up;
                        table[[j, mid - k]] += down;
                    }
                }
            }
            table
        })
        .collect();
    let mut table = Array2::<Complex64>::zeros((nodes, size));
    for block in block_tables {
        table += &block;
    }
    let mut entries = Array2::<Complex64>::zeros((size, size));
    let scale = 1.0 / (nodes as f64 * samples.len() as f64);
    for j in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        for (c, n) in window.modes().enumerate() {
            let col_phase = Complex64::from_polar(scale, -(n as f64) * theta);
            for r in 0..size {
                entries[[r, c]] += table[[j, r]] * col_phase;
            }
        }
    }
    entries
}

fn weighted_sharp_sum(
    lambda: &SpectralParam,
    window: ModeWindow,
    atoms: &[(GroupElement, f64)],
    nodes: usize,
) -> Array2<Complex64> {
    let size = window.size();
    let partials: Vec<Array2<Complex64>> = atoms
        .par_chunks(16)
        .map(|chunk| {
            let mut acc = Array2::<Complex64>::zeros((size, size));
            for (g, w) in chunk {
                let m = phi_sharp_matrix(lambda, window, g, nodes);
                acc += &(m.entries * Complex64::new(*w, 0.0));
            }
            acc
        })
        .collect();
    let mut acc = Array2::<Complex64>::zeros((size, size));
    for p in partials {
        acc += &p;
    }
    acc
}

/// Eisenstein transform μ̂_λ = ∫ Φ^{#}_λ(g) μ(dg) over a mode window.
pub fn eisenstein_transform(
    mu: &MeasureRep,
    lambda: &SpectralParam,
    window: ModeWindow,
    nodes: usize,
) -> EisensteinMatrix {
    let entries = match &mu.variant {
        MeasureVariant::Dirac(g) => phi_sharp_matrix(lambda, window, g, nodes).entries,
        MeasureVariant::Discrete(atoms) => weighted_sharp_sum(lambda, window, atoms, nodes),
        MeasureVariant::Empirical(samples) => {
            empirical_sharp_mean(lambda, window, samples, nodes)
        }
    };
    EisensteinMatrix {
        lambda: *lambda,
        window,
        entries,
    }
}

fn merge_atoms(atoms: Vec<(GroupElement, f64)>) -> Vec<(GroupElement, f64)> {
    let mut merged: Vec<(GroupElement, f64)> = Vec::with_capacity(atoms.len());
    for (g, w) in atoms {
        if let Some((_, weight)) = merged
            .iter_mut()
            .find(|(h, _)| h.entry_distance(&g) < EPS_GRP)
        {
            *weight += w;
        } else {
            merged.push((g, w));
        }
    }
    merged
}

fn as_atoms(mu: &MeasureRep) -> Option<Vec<(GroupElement, f64)>> {
    match &mu.variant {
        MeasureVariant::Dirac(g) => Some(vec![(*g, 1.0)]),
        MeasureVariant::Discrete(atoms) => Some(atoms.clone()),
        MeasureVariant::Empirical(_) => None,
    }
}

/// Convolution μ₁ ∗ μ₂: exact for Dirac/Discrete inputs; empirical clouds
/// convolve approximately by independent pairing.
pub fn convolve(mu1: &MeasureRep, mu2: &MeasureRep) -> Result<MeasureRep, TransformError> {
    let invariantised = mu1.right_k_invariantised;
    let variant = match (&mu1.variant, &mu2.variant) {
        (MeasureVariant::Dirac(g), MeasureVariant::Dirac(h)) => {
            MeasureVariant::Dirac(g.mul(h)?)
        }
        (MeasureVariant::Empirical(v1), MeasureVariant::Empirical(v2)) => {
            let n = v1.len().min(v2.len());
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                out.push(v1[i].mul(&v2[i])?);
            }
            MeasureVariant::Empirical(out)
        }
        (MeasureVariant::Dirac(g), MeasureVariant::Empirical(v)) => {
            let out: Result<Vec<_>, GroupError> = v.iter().map(|s| g.mul(s)).collect();
            MeasureVariant::Empirical(out?)
        }
        (MeasureVariant::Empirical(v), MeasureVariant::Dirac(g)) => {
            let out: Result<Vec<_>, GroupError> = v.iter().map(|s| s.mul(g)).collect();
            MeasureVariant::Empirical(out?)
        }
        _ => match (as_atoms(mu1), as_atoms(mu2)) {
            (Some(a1), Some(a2)) => {
                let mut out = Vec::with_capacity(a1.len() * a2.len());
                for (g, wg) in &a1 {
                    for (h, wh) in &a2 {
                        out.push((g.mul(h)?, wg * wh));
                    }
                }
                MeasureVariant::Discrete(merge_atoms(out))
            }
            _ => {
                return Err(TransformError::UnsupportedConvolution(
                    "discrete-with-empirical convolution has no exact representation",
                ))
            }
        },
    };
    Ok(MeasureRep {
        variant,
        right_k_invariantised: invariantised,
    })
}

/// Average the measure over a uniform K-start: μ ↦ Haar(K) ∗ μ, realised as
/// equal sub-weights on {κ(θ_j)·g} over `k_nodes` equispaced angles.
///
/// The dressed transform keeps only the n′ = 0 row; with equispaced angles
/// the kill is exact for every row index |n′| < k_nodes not aliased to 0.
/// The κ factor multiplies on the left: the transform pairs Φ^{#}((κg)⁻¹) =
/// Φ(g⁻¹κ⁻¹), and it is the right translation of the argument that phases
/// the row index.
pub fn right_k_invariantise(mu: &MeasureRep, k_nodes: usize) -> MeasureRep {
    let k_nodes = k_nodes.max(1);
    let base: Vec<(GroupElement, f64)> = match &mu.variant {
        MeasureVariant::Dirac(g) => vec![(*g, 1.0)],
        MeasureVariant::Discrete(atoms) => atoms.clone(),
        MeasureVariant::Empirical(samples) => {
            let w = 1.0 / samples.len() as f64;
            samples.iter().map(|g| (*g, w)).collect()
        }
    };
    let mut atoms = Vec::with_capacity(base.len() * k_nodes);
    for j in 0..k_nodes {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / k_nodes as f64;
        let k = GroupElement::kappa(theta);
        for (g, w) in &base {
            atoms.push((k.mul_unchecked(g), w / k_nodes as f64));
        }
    }
    MeasureRep {
        variant: MeasureVariant::Discrete(merge_atoms(atoms)),
        right_k_invariantised: true,
    }
}

/// The n′ = 0 row of the transform of an invariantised measure.
pub fn symmetric_row(
    mu: &MeasureRep,
    lambda: &SpectralParam,
    window: ModeWindow,
    nodes: usize,
) -> Result<CharacteristicRow, TransformError> {
    if !mu.right_k_invariantised {
        return Err(TransformError::NotInvariantised);
    }
    let m = eisenstein_transform(mu, lambda, window, nodes);
    let r0 = window.index_of(0);
    let values = (0..window.size()).map(|c| m.entries[[r0, c]]).collect();
    Ok(CharacteristicRow {
        lambda: *lambda,
        window,
        values,
    })
}

/// Windowed Fourier synthesis of the characteristic row on the boundary:
/// f̃(λ, e^{iβ}) = Σ_{|n|≤N} row[n]·e^{inβ} at each grid angle.
pub fn helgason_ft(
    mu: &MeasureRep,
    lambda: &SpectralParam,
    beta_grid: &[f64],
    window: ModeWindow,
    nodes: usize,
) -> Result<Vec<Complex64>, TransformError> {
    let row = symmetric_row(mu, lambda, window, nodes)?;
    Ok(beta_grid
        .iter()
        .map(|beta| {
            window
                .modes()
                .map(|n| row.value(n) * Complex64::from_polar(1.0, n as f64 * beta))
                .sum()
        })
        .collect())
}

// --- wire format -----------------------------------------------------------

/// JSON wire form of a measure: `{variant, atoms: [{g: [re_a, im_a, re_b,
/// im_b], w}], invariantised}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureWire {
    pub variant: String,
    pub atoms: Vec<AtomWire>,
    pub invariantised: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomWire {
    pub g: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
}

fn element_from_wire(g: &[f64; 4]) -> Result<GroupElement, TransformError> {
    Ok(GroupElement::new(
        Complex64::new(g[0], g[1]),
        Complex64::new(g[2], g[3]),
    )?)
}

fn element_to_wire(g: &GroupElement) -> [f64; 4] {
    [g.a.re, g.a.im, g.b.re, g.b.im]
}

impl MeasureRep {
    pub fn to_wire(&self) -> MeasureWire {
        let (variant, atoms) = match &self.variant {
            MeasureVariant::Dirac(g) => (
                "dirac".to_string(),
                vec![AtomWire {
                    g: element_to_wire(g),
                    w: None,
                }],
            ),
            MeasureVariant::Discrete(atoms) => (
                "discrete".to_string(),
                atoms
                    .iter()
                    .map(|(g, w)| AtomWire {
                        g: element_to_wire(g),
                        w: Some(*w),
                    })
                    .collect(),
            ),
            MeasureVariant::Empirical(samples) => (
                "empirical".to_string(),
                samples
                    .iter()
                    .map(|g| AtomWire {
                        g: element_to_wire(g),
                        w: None,
                    })
                    .collect(),
            ),
        };
        MeasureWire {
            variant,
            atoms,
            invariantised: self.right_k_invariantised,
        }
    }

    pub fn from_wire(wire: &MeasureWire) -> Result<Self, TransformError> {
        let mut mu = match wire.variant.as_str() {
            "dirac" => {
                if wire.atoms.len() != 1 {
                    return Err(TransformError::InvalidMeasure(
                        "dirac requires exactly one atom".into(),
                    ));
                }
                MeasureRep::dirac(element_from_wire(&wire.atoms[0].g)?)
            }
            "discrete" => {
                let atoms: Result<Vec<_>, TransformError> = wire
                    .atoms
                    .iter()
                    .map(|a| {
                        let g = element_from_wire(&a.g)?;
                        let w = a.w.ok_or_else(|| {
                            TransformError::InvalidMeasure(
                                "discrete atoms need weights".into(),
                            )
                        })?;
                        Ok((g, w))
                    })
                    .collect();
                MeasureRep::discrete(atoms?)?
            }
            "empirical" => {
                let samples: Result<Vec<_>, TransformError> =
                    wire.atoms.iter().map(|a| element_from_wire(&a.g)).collect();
                MeasureRep::empirical(samples?)?
            }
            other => {
                return Err(TransformError::InvalidMeasure(format!(
                    "unknown variant {other:?}"
                )))
            }
        };
        mu.right_k_invariantised = wire.invariantised;
        Ok(mu)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::phi_matrix;
    use crate::group::{exp_alg, horocycle_bracket, AlgebraVector, IwasawaFactors};
    use rand::{Rng, SeedableRng};

    fn lam(x: f64) -> SpectralParam {
        SpectralParam::new(x)
    }

    fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn sample_element(k: u64, scale: f64) -> GroupElement {
        let u = |j: u64| {
            let h = k
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add(j)
                .wrapping_mul(0xbf58476d1ce4e5b9);
            scale * (((h >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0)
        };
        IwasawaFactors {
            s: u(1),
            t: u(2),
            psi: u(3),
        }
        .reconstruct()
    }

    #[test]
    fn dirac_identity_transforms_to_identity() {
        let m = eisenstein_transform(
            &MeasureRep::dirac(GroupElement::identity()),
            &lam(1.2),
            ModeWindow::new(4),
            256,
        );
        for np in m.window.modes() {
            for n in m.window.modes() {
                let expected = if np == n { 1.0 } else { 0.0 };
                assert!((m.entry(np, n) - expected).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn discrete_transform_is_linear() {
        let g = sample_element(4, 0.5);
        let w = ModeWindow::new(4);
        let mu = MeasureRep::discrete(vec![(g, 0.5), (GroupElement::identity(), 0.5)]).unwrap();
        let m = eisenstein_transform(&mu, &lam(0.9), w, 512);
        let sharp = phi_sharp_matrix(&lam(0.9), w, &g, 512);
        for np in w.modes() {
            for n in w.modes() {
                let expected =
                    0.5 * sharp.entry(np, n) + if np == n { 0.5 } else { 0.0 };
                assert!((m.entry(np, n) - expected).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn empirical_kernel_matches_direct_path() {
        // degenerate cloud: the fast kernel must reproduce Φ^#(g) exactly
        let g = sample_element(11, 0.8);
        let w = ModeWindow::new(6);
        let mu = MeasureRep::empirical(vec![g; 7]).unwrap();
        let fast = eisenstein_transform(&mu, &lam(1.7), w, 512);
        let direct = phi_sharp_matrix(&lam(1.7), w, &g, 512);
        assert!(max_abs_diff(&fast.entries, &direct.entries) < 1e-12);
    }

    #[test]
    fn transform_entries_are_contractions() {
        let atoms = vec![
            (sample_element(1, 0.9), 0.25),
            (sample_element(2, 0.9), 0.35),
            (sample_element(3, 0.9), 0.4),
        ];
        let mu = MeasureRep::discrete(atoms).unwrap();
        let m = eisenstein_transform(&mu, &lam(2.4), ModeWindow::new(6), 512);
        assert!(m.max_modulus() <= 1.0 + 1e-12);
    }

    #[test]
    fn convolution_of_diracs() {
        let g = sample_element(5, 0.7);
        let h = sample_element(6, 0.7);
        let conv = convolve(&MeasureRep::dirac(g), &MeasureRep::dirac(h)).unwrap();
        match conv.variant {
            MeasureVariant::Dirac(x) => {
                assert!(x.entry_distance(&g.mul(&h).unwrap()) < 1e-14)
            }
            _ => panic!("expected dirac"),
        }
        // δ_e ∗ μ = μ
        let mu = MeasureRep::discrete(vec![(g, 0.6), (h, 0.4)]).unwrap();
        let conv = convolve(&MeasureRep::dirac(GroupElement::identity()), &mu).unwrap();
        match conv.variant {
            MeasureVariant::Discrete(atoms) => {
                assert_eq!(atoms.len(), 2);
                assert!(atoms[0].0.entry_distance(&g) < 1e-14);
                assert!((atoms[0].1 - 0.6).abs() < 1e-15);
            }
            _ => panic!("expected discrete"),
        }
    }

    #[test]
    fn convolution_theorem_on_central_block() {
        // near-identity 3-atom measures: transform of the convolution equals
        // the product of transforms on the central block, tail decaying in N
        let mut mk = |base: u64| {
            let atoms = vec![
                (sample_element(base, 0.1), 0.3),
                (sample_element(base + 1, 0.1), 0.3),
                (sample_element(base + 2, 0.1), 0.4),
            ];
            MeasureRep::discrete(atoms).unwrap()
        };
        let mu1 = mk(100);
        let mu2 = mk(200);
        let conv = convolve(&mu1, &mu2).unwrap();
        let lambda = lam(1.0);
        let block = ModeWindow::new(6);
        let mut residuals = Vec::new();
        for n_sum in [12u32, 24u32] {
            let w = ModeWindow::new(n_sum);
            let lhs = eisenstein_transform(&conv, &lambda, w, 1024);
            let m1 = eisenstein_transform(&mu1, &lambda, w, 1024);
            let m2 = eisenstein_transform(&mu2, &lambda, w, 1024);
            let prod = EisensteinMatrix {
                lambda,
                window: w,
                entries: m1.entries.dot(&m2.entries),
            };
            residuals.push(max_abs_diff(
                &lhs.restricted(block).entries,
                &prod.restricted(block).entries,
            ));
        }
        assert!(residuals[0] < 1e-5, "residual {:e}", residuals[0]);
        assert!(residuals[1] < residuals[0]);
    }

    #[test]
    fn invariantise_dirac_identity() {
        let mu = right_k_invariantise(&MeasureRep::dirac(GroupElement::identity()), 8);
        match &mu.variant {
            MeasureVariant::Discrete(atoms) => {
                assert_eq!(atoms.len(), 8);
                for (g, w) in atoms {
                    assert!((w - 0.125).abs() < 1e-15);
                    assert!(g.b.norm() < 1e-15); // all in K
                }
            }
            _ => panic!("expected discrete"),
        }
        assert!(mu.right_k_invariantised);
    }

    #[test]
    fn invariantised_rows_vanish() {
        let g = sample_element(33, 0.8);
        let mu = right_k_invariantise(&MeasureRep::dirac(g), 64);
        let w = ModeWindow::new(8);
        let m = eisenstein_transform(&mu, &lam(1.4), w, 512);
        for np in w.modes() {
            if np == 0 {
                continue;
            }
            for n in w.modes() {
                assert!(
                    m.entry(np, n).norm() < 1e-12,
                    "row {np} did not vanish: {:e}",
                    m.entry(np, n).norm()
                );
            }
        }
    }

    #[test]
    fn invariantise_is_idempotent() {
        let g = sample_element(7, 0.5);
        let once = right_k_invariantise(&MeasureRep::dirac(g), 16);
        let twice = right_k_invariantise(&once, 16);
        match (&once.variant, &twice.variant) {
            (MeasureVariant::Discrete(a), MeasureVariant::Discrete(b)) => {
                assert_eq!(a.len(), b.len());
                for (g, w) in a {
                    let (_, w2) = b
                        .iter()
                        .find(|(h, _)| h.entry_distance(g) < 1e-9)
                        .expect("atom lost");
                    assert!((w - w2).abs() < 1e-12);
                }
            }
            _ => panic!("expected discrete"),
        }
    }

    #[test]
    fn symmetric_row_requires_flag_and_matches_spherical() {
        let g = GroupElement::a_exp(0.6);
        let plain = MeasureRep::dirac(g);
        assert!(matches!(
            symmetric_row(&plain, &lam(1.0), ModeWindow::new(4), 256),
            Err(TransformError::NotInvariantised)
        ));
        let mu = right_k_invariantise(&plain, 64);
        let row = symmetric_row(&mu, &lam(1.0), ModeWindow::new(4), 2048).unwrap();
        // n = 0 slot is the Gangolli spherical transform: φ_λ(tanh t)
        let spherical = crate::specfun::phi_closed(&lam(1.0), 0, 0.6f64.tanh()).unwrap();
        assert!(
            (row.value(0) - spherical).norm() < 1e-9,
            "spherical slot {} vs {}",
            row.value(0),
            spherical
        );
        // invariantised Dirac(e): (…,0,1,0,…)
        let mu_e = right_k_invariantise(&MeasureRep::dirac(GroupElement::identity()), 16);
        let row = symmetric_row(&mu_e, &lam(1.0), ModeWindow::new(4), 256).unwrap();
        for n in row.window.modes() {
            let expected = if n == 0 { 1.0 } else { 0.0 };
            assert!((row.value(n) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn helgason_constant_for_identity_and_parseval() {
        let mu = right_k_invariantise(&MeasureRep::dirac(GroupElement::identity()), 16);
        let grid: Vec<f64> = (0..16).map(|k| 0.4 * k as f64).collect();
        let vals = helgason_ft(&mu, &lam(0.8), &grid, ModeWindow::new(6), 256).unwrap();
        for v in &vals {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        // Parseval: (1/2π)∫|f̃|² = Σ|row[n]|²
        let mu = right_k_invariantise(&MeasureRep::dirac(GroupElement::a_exp(0.4)), 64);
        let w = ModeWindow::new(6);
        let row = symmetric_row(&mu, &lam(0.8), w, 1024).unwrap();
        let m = 8 * w.size();
        let grid: Vec<f64> = (0..m)
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / m as f64)
            .collect();
        let vals = helgason_ft(&mu, &lam(0.8), &grid, w, 1024).unwrap();
        let lhs: f64 = vals.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64;
        let rhs: f64 = row.values.iter().map(|v| v.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn helgason_matches_disc_quadrature_for_a_supported_measure() {
        // atoms on A; compare the synthesis against the Poisson-kernel side,
        // with the boundary angle doubling β_disc = −2β built in
        let atoms = vec![
            (GroupElement::a_exp(0.15), 0.55),
            (GroupElement::a_exp(-0.22), 0.45),
        ];
        let base = MeasureRep::discrete(atoms.clone()).unwrap();
        let mu = right_k_invariantise(&base, 64);
        let lambda = lam(1.1);
        let w = ModeWindow::new(24);
        let grid: Vec<f64> = (0..9).map(|k| 0.7 * k as f64).collect();
        let vals = helgason_ft(&mu, &lambda, &grid, w, 2048).unwrap();
        for (beta, v) in grid.iter().zip(vals.iter()) {
            let mut expected = Complex64::new(0.0, 0.0);
            for (g, weight) in &atoms {
                let z = g.inverse().to_disc();
                let br = horocycle_bracket(&z, -2.0 * beta);
                expected += weight * (Complex64::new(1.0, lambda.lambda) * br).exp();
            }
            assert!(
                (v - expected).norm() < 1e-6,
                "β={beta}: synthesis {v} vs disc {expected}"
            );
        }
    }

    #[test]
    fn empirical_transform_converges_to_discrete() {
        let g = exp_alg(&AlgebraVector::new(0.4, -0.2, 0.3));
        let h = exp_alg(&AlgebraVector::new(-0.3, 0.5, -0.1));
        let exact_mu = MeasureRep::discrete(vec![(g, 0.7), (h, 0.3)]).unwrap();
        let w = ModeWindow::new(3);
        let lambda = lam(1.2);
        let exact = eisenstein_transform(&exact_mu, &lambda, w, 512);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let m_samples = 40_000;
        let cloud: Vec<GroupElement> = (0..m_samples)
            .map(|_| if rng.gen::<f64>() < 0.7 { g } else { h })
            .collect();
        let emp_mu = MeasureRep::empirical(cloud).unwrap();
        let emp = eisenstein_transform(&emp_mu, &lambda, w, 512);
        // per-entry variance is bounded by 1, so 3σ = 3/√M
        let bound = 3.0 / (m_samples as f64).sqrt();
        for np in w.modes() {
            for n in w.modes() {
                let err = (emp.entry(np, n) - exact.entry(np, n)).norm();
                assert!(err < bound, "entry ({np},{n}) off by {err:e} > {bound:e}");
            }
        }
    }

    #[test]
    fn wire_round_trip() {
        let g = sample_element(2, 0.6);
        let mu = MeasureRep::discrete(vec![(g, 0.25), (GroupElement::identity(), 0.75)]).unwrap();
        let wire = mu.to_wire();
        let back = MeasureRep::from_wire(&wire).unwrap();
        match back.variant {
            MeasureVariant::Discrete(atoms) => {
                assert_eq!(atoms.len(), 2);
                assert!(atoms[0].0.entry_distance(&g) < 1e-15);
            }
            _ => panic!("expected discrete"),
        }
        let bad = MeasureWire {
            variant: "discrete".into(),
            atoms: vec![AtomWire {
                g: [2.0, 0.0, 0.0, 0.0],
                w: Some(1.0),
            }],
            invariantised: false,
        };
        assert!(MeasureRep::from_wire(&bad).is_err());
    }
}
