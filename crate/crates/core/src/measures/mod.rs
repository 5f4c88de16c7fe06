//! Correlation measures: entropies, mutual information, classical
//! correlation, quantum discord, geometric discord, concurrence and the
//! distance to the nearest zero-discord Bell-diagonal state.
//!
//! All entropies are in bits, with `0 · log 0 = 0`.

mod oracle;

pub use oracle::{
    classical_correlation_bruteforce, conditional_entropy, quantum_discord_oracle,
    ClassicalCorrelation, LocalProjectiveMeasurement, MeasurementGrid,
};

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{clamp_nonnegative, Result};
use crate::linalg::{self, CMatrix2, CMatrix4};
use crate::qstate::{BellDiag, BlochForm, DeformedBellDiag, TwoQubitDensity};

/// `−x log2 x`, zero for `x ≤ 0`.
pub fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy of a list of (possibly unnormalized) weights.
pub fn shannon_entropy(weights: &[f64]) -> f64 {
    weights.iter().copied().map(neg_xlog2x).sum()
}

/// `H2(x) = −x log2 x − (1−x) log2 (1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    neg_xlog2x(x) + neg_xlog2x(1.0 - x)
}

pub fn von_neumann_entropy(rho: &TwoQubitDensity) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Entropy of a one-qubit density operator.
pub fn qubit_entropy(rho: &CMatrix2) -> f64 {
    let (lo, hi) = linalg::hermitian_eigenvalues2(rho);
    neg_xlog2x(lo) + neg_xlog2x(hi)
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` through explicit partial traces.
pub fn mutual_information(rho: &TwoQubitDensity) -> f64 {
    qubit_entropy(&rho.reduced_a()) + qubit_entropy(&rho.reduced_b()) - von_neumann_entropy(rho)
}

/// `2 + Σ λ_ab log2 λ_ab`, valid because both marginals are maximally mixed.
pub fn mutual_information_belldiag(bd: &BellDiag) -> f64 {
    2.0 - shannon_entropy(&bd.lambdas())
}

/// `1 − H2((1 + c)/2)` with `c = max |c_i|`.
pub fn classical_correlation_belldiag(bd: &BellDiag) -> f64 {
    1.0 - binary_entropy((1.0 + bd.c_max()) / 2.0)
}

/// Closed-form quantum discord of a Bell-diagonal state.
pub fn quantum_discord_belldiag(bd: &BellDiag) -> Result<f64> {
    // u log2 u over the four 4λ_ab, weighted by 1/4.
    let four_lambda_terms: f64 = bd.lambdas().iter().map(|l| -neg_xlog2x(4.0 * l)).sum::<f64>() / 4.0;
    let c = bd.c_max();
    let d = four_lambda_terms + neg_xlog2x(1.0 + c) / 2.0 + neg_xlog2x(1.0 - c) / 2.0;
    clamp_nonnegative(d, "quantum discord")
}

/// `K = x xᵀ + T Tᵀ` and its largest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricKernel {
    pub k: Matrix3<f64>,
    pub k_max: f64,
}

impl GeometricKernel {
    pub fn from_bloch(bloch: &BlochForm) -> Self {
        let k = bloch.x * bloch.x.transpose() + bloch.t * bloch.t.transpose();
        let k = (k + k.transpose()) * 0.5;
        let k_max = linalg::symmetric_eigenvalues3(&k)[2];
        Self { k, k_max }
    }
}

/// Geometric discord from the Bloch decomposition,
/// `(‖x‖² + tr(T Tᵀ) − k_max) / 4`; zero exactly on states that are
/// classical on A.
pub fn geometric_discord_general(rho: &TwoQubitDensity) -> Result<(f64, GeometricKernel)> {
    geometric_discord_bloch(&rho.to_bloch())
}

/// Geometric discord with respect to measurements on B, the party measured
/// by [`quantum_discord_oracle`].
pub fn geometric_discord_general_b(rho: &TwoQubitDensity) -> Result<(f64, GeometricKernel)> {
    geometric_discord_bloch(&rho.to_bloch().swap_parties())
}

pub fn geometric_discord_bloch(bloch: &BlochForm) -> Result<(f64, GeometricKernel)> {
    let kernel = GeometricKernel::from_bloch(bloch);
    let total = bloch.x.norm_squared() + (bloch.t * bloch.t.transpose()).trace();
    let dg = clamp_nonnegative((total - kernel.k_max) / 4.0, "geometric discord")?;
    Ok((dg, kernel))
}

/// `(c1² + c2² + c3² − max c_i²) / 4`.
pub fn geometric_discord_belldiag(bd: &BellDiag) -> f64 {
    sum_of_two_smallest(bd.c().map(|v| v * v)) / 4.0
}

/// `a + b + c − max{a, b, c}` without the cancellation.
pub(crate) fn sum_of_two_smallest(mut sq: [f64; 3]) -> f64 {
    sq.sort_by(f64::total_cmp);
    sq[0] + sq[1]
}

/// `(c1² + c2² + c3² + r² − max{c1², c2², c3² + r²}) / 4`; independent of `s`.
pub fn geometric_discord_deformed(d: &DeformedBellDiag) -> f64 {
    let [c1, c2, c3] = d.c();
    let r2 = d.r() * d.r();
    sum_of_two_smallest([c1 * c1, c2 * c2, c3 * c3 + r2]) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrencePieces {
    pub lambda1: f64,
    pub lambda2: f64,
    pub concurrence: f64,
}

/// Concurrence of a Bell-diagonal (X-shaped) state from its matrix entries.
pub fn concurrence_xstate(bd: &BellDiag) -> ConcurrencePieces {
    let [c1, c2, c3] = bd.c();
    let lambda1 = ((c1 - c2).abs() - (1.0 - c3).abs()) / 4.0;
    let lambda2 = ((c1 + c2).abs() - (1.0 + c3).abs()) / 4.0;
    let concurrence = 2.0 * lambda1.max(lambda2).max(0.0);
    ConcurrencePieces { lambda1, lambda2, concurrence }
}

/// Wootters concurrence of an arbitrary two-qubit state.
pub fn concurrence_wootters(rho: &TwoQubitDensity) -> f64 {
    let yy = linalg::kron(&linalg::pauli(2), &linalg::pauli(2));
    let flipped = yy * rho.matrix().map(|z| z.conj()) * yy;
    let eig = SymmetricEigen::new(*rho.matrix());
    let sqrt_vals = eig.eigenvalues.map(|v| Complex64::from(v.max(0.0).sqrt()));
    let sqrt_rho: CMatrix4 =
        eig.eigenvectors * CMatrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.adjoint();
    let r = sqrt_rho * flipped * sqrt_rho;
    let mut l = linalg::hermitian_eigenvalues4(&r).map(|v| v.max(0.0).sqrt());
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Nearest zero-discord state on one of the Cartesian axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestClassical {
    /// Squared Hilbert–Schmidt distance.
    pub distance: f64,
    /// 1-based axis index.
    pub axis: usize,
    /// Coordinate of the nearest state along `axis`.
    pub t: f64,
}

/// Minimizes `((t − c_i)² + c_j² + c_k²)/4` over axes `i` and reals `t`.
/// Ties go to the smallest axis index.
pub fn nearest_classical_distance(bd: &BellDiag) -> NearestClassical {
    let c = bd.c();
    let mut best: Option<NearestClassical> = None;
    for i in 0..3 {
        let distance = (0..3).filter(|&j| j != i).map(|j| c[j] * c[j]).sum::<f64>() / 4.0;
        if best.is_none_or(|b| distance < b.distance) {
            best = Some(NearestClassical { distance, axis: i + 1, t: c[i] });
        }
    }
    best.expect("three axes")
}

#[cfg(test)]
/// Largest-magnitude axis of `v`; ties go to the smallest index.
pub(crate) fn argmax_abs(v: &nalgebra::Vector3<f64>) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    best
}
