//! Classical correlation by direct optimization over projective
//! measurements on qubit B.
//!
//! A measurement along unit vector `n` has projectors `Π± = (I ± n·σ)/2`.
//! Outcome `k` leaves `ρ_k = (I⊗Π_k) ρ (I⊗Π_k) / p_k = ρ_{A|k} ⊗ Π_k`, so
//! `S(ρ_k) = S(ρ_{A|k})` with `ρ_{A|k} = Tr_B[(I⊗Π_k) ρ] / p_k`.

use nalgebra::Vector3;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::{neg_xlog2x, qubit_entropy};
use crate::error::{clamp_nonnegative, Error, Result};
use crate::linalg::{self, CMatrix2};
use crate::qstate::TwoQubitDensity;

/// Rank-one projective measurement on B along a unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalProjectiveMeasurement {
    n: Vector3<f64>,
}

impl LocalProjectiveMeasurement {
    pub fn new(n: Vector3<f64>) -> Result<Self> {
        let defect = (n.norm() - 1.0).abs();
        if defect.is_nan() || defect > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "measurement direction must be a unit vector, |n| = {}",
                n.norm()
            )));
        }
        Ok(Self { n })
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { n: Vector3::new(st * cp, st * sp, ct) }
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.n
    }

    /// `[Π+, Π−]`.
    pub fn projectors(&self) -> [CMatrix2; 2] {
        let id = linalg::identity2();
        let ns = linalg::pauli_dot(&self.n);
        [(id + ns).scale(0.5), (id - ns).scale(0.5)]
    }

    /// `(p_k, ρ_{A|k})` for both outcomes; `ρ_{A|k}` is `None` when `p_k = 0`.
    pub fn condition(&self, rho: &TwoQubitDensity) -> [(f64, Option<CMatrix2>); 2] {
        self.projectors().map(|pi| {
            let unnormalized = linalg::contract_b(rho.matrix(), &pi);
            let p = unnormalized.trace().re;
            if p > 0.0 {
                (p, Some(unnormalized.unscale(p)))
            } else {
                (0.0, None)
            }
        })
    }
}

/// `Σ_k p_k S(ρ_k)` for a measurement along `n`.
pub fn conditional_entropy(rho: &TwoQubitDensity, measurement: &LocalProjectiveMeasurement) -> f64 {
    measurement
        .projectors()
        .iter()
        .map(|pi| {
            // p S(M/p) = Σ -e log2 e + p log2 p over eigenvalues e of M = pS.
            let m = linalg::contract_b(rho.matrix(), pi);
            let (lo, hi) = linalg::hermitian_eigenvalues2(&m);
            let p = m.trace().re;
            neg_xlog2x(lo) + neg_xlog2x(hi) - neg_xlog2x(p)
        })
        .sum()
}

/// Search resolution over `(θ, φ) ∈ [0, π] × [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementGrid {
    pub theta_steps: usize,
    pub phi_steps: usize,
    /// Golden-section iterations per angle per refinement round.
    pub refine_steps: usize,
}

impl Default for MeasurementGrid {
    fn default() -> Self {
        Self { theta_steps: 128, phi_steps: 256, refine_steps: 40 }
    }
}

impl MeasurementGrid {
    pub const MIN_THETA: usize = 64;
    pub const MIN_PHI: usize = 128;

    pub fn validate(&self) -> Result<()> {
        if self.theta_steps < Self::MIN_THETA || self.phi_steps < Self::MIN_PHI {
            return Err(Error::InvalidInput(format!(
                "measurement grid {}x{} is below the minimum {}x{}",
                self.theta_steps,
                self.phi_steps,
                Self::MIN_THETA,
                Self::MIN_PHI
            )));
        }
        Ok(())
    }

    fn theta(&self, i: usize) -> f64 {
        PI * i as f64 / (self.theta_steps - 1) as f64
    }

    fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.phi_steps as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    /// `max_n S(ρ_A) − Σ p_k S(ρ_k)`, in bits.
    pub value: f64,
    /// Maximizing direction (defined up to sign).
    pub direction: Vector3<f64>,
}

/// Maximum refinement rounds; each round golden-sections θ then φ.
const MAX_ROUNDS: usize = 12;
/// A round that improves the objective by less than this ends refinement.
const ROUND_IMPROVEMENT: f64 = 1e-13;

/// Grid search followed by cyclic golden-section refinement of each angle.
///
/// Grid maxima are compared in row-major `(θ, φ)` order with a strict `>`,
/// so ties resolve to the smallest angles regardless of how rows were
/// evaluated.
pub fn classical_correlation_bruteforce(
    rho: &TwoQubitDensity,
    grid: &MeasurementGrid,
) -> Result<ClassicalCorrelation> {
    grid.validate()?;
    let s_a = qubit_entropy(&rho.reduced_a());
    let objective =
        |theta: f64, phi: f64| s_a - conditional_entropy(rho, &LocalProjectiveMeasurement::from_angles(theta, phi));

    let rows: Vec<Vec<f64>> = (0..grid.theta_steps)
        .into_par_iter()
        .map(|i| {
            let theta = grid.theta(i);
            (0..grid.phi_steps).map(|j| objective(theta, grid.phi(j))).collect()
        })
        .collect();

    let (mut best, mut bi, mut bj) = (f64::NEG_INFINITY, 0, 0);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > best {
                (best, bi, bj) = (v, i, j);
            }
        }
    }

    let (mut theta, mut phi) = (grid.theta(bi), grid.phi(bj));
    let dtheta = PI / (grid.theta_steps - 1) as f64;
    let dphi = 2.0 * PI / grid.phi_steps as f64;
    for _ in 0..MAX_ROUNDS {
        let before = best;
        let (t, v) = golden_max(|t| objective(t, phi), theta - dtheta, theta + dtheta, grid.refine_steps);
        if v > best {
            (theta, best) = (t, v);
        }
        let (p, v) = golden_max(|p| objective(theta, p), phi - dphi, phi + dphi, grid.refine_steps);
        if v > best {
            (phi, best) = (p, v);
        }
        if best - before < ROUND_IMPROVEMENT {
            break;
        }
    }

    Ok(ClassicalCorrelation {
        value: best.max(0.0),
        direction: LocalProjectiveMeasurement::from_angles(theta, phi).direction(),
    })
}

/// Golden-section search for a maximum on `[lo, hi]`; returns the best
/// evaluated point.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, steps: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..steps {
        if f1 >= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `I(ρ) − J(ρ)` with `J` from [`classical_correlation_bruteforce`].
pub fn quantum_discord_oracle(rho: &TwoQubitDensity, grid: &MeasurementGrid) -> Result<f64> {
    let j = classical_correlation_bruteforce(rho, grid)?;
    clamp_nonnegative(super::mutual_information(rho) - j.value, "oracle quantum discord")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        argmax_abs, classical_correlation_belldiag, quantum_discord_belldiag,
    };
    use crate::qstate::{BellDiag, DeformedBellDiag};
    use nalgebra::Vector4;
    use num_complex::Complex64;

    #[test]
    fn projectors_are_complete_and_idempotent() {
        let m = LocalProjectiveMeasurement::from_angles(0.7, 2.1);
        let [plus, minus] = m.projectors();
        assert!((plus + minus - linalg::identity2()).norm() < 1e-15);
        assert!((plus * plus - plus).norm() < 1e-15);
        assert!((minus * minus - minus).norm() < 1e-15);
        assert!(LocalProjectiveMeasurement::new(Vector3::new(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn conditioning_probabilities_sum_to_one() {
        let rho = DeformedBellDiag::new(0.3, 0.2, [0.5, 0.1, -0.2]).unwrap().to_density();
        let outcomes = LocalProjectiveMeasurement::from_angles(0.4, 1.0).condition(&rho);
        let total: f64 = outcomes.iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-15);
        for (_, state) in outcomes {
            assert!((state.unwrap().trace().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn oracle_matches_closed_form_on_bell_diag() {
        let bd = BellDiag::new(0.6, 0.0, 0.3).unwrap();
        let grid = MeasurementGrid::default();
        let j = classical_correlation_bruteforce(&bd.to_density(), &grid).unwrap();
        assert!((j.value - classical_correlation_belldiag(&bd)).abs() < 1e-6);
        assert_eq!(argmax_abs(&j.direction), 0);
        assert!((j.direction.x.abs() - 1.0).abs() < 1e-4);

        let d = quantum_discord_oracle(&bd.to_density(), &grid).unwrap();
        assert!((d - quantum_discord_belldiag(&bd).unwrap()).abs() < 1e-6);

        let bell = BellDiag::new(1.0, -1.0, 1.0).unwrap();
        let d = quantum_discord_oracle(&bell.to_density(), &grid).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn oracle_trivial_states() {
        let grid = MeasurementGrid::default();
        let j = classical_correlation_bruteforce(&TwoQubitDensity::maximally_mixed(), &grid).unwrap();
        assert!(j.value.abs() < 1e-12);

        let mut v = Vector4::zeros();
        v[0] = Complex64::new(1.0, 0.0);
        let product = TwoQubitDensity::pure(&v).unwrap();
        assert!(quantum_discord_oracle(&product, &grid).unwrap().abs() < 1e-9);
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = MeasurementGrid { theta_steps: 32, phi_steps: 64, refine_steps: 40 };
        assert!(classical_correlation_bruteforce(&TwoQubitDensity::maximally_mixed(), &grid).is_err());
    }

    #[test]
    fn deformed_state_beats_axis_measurements() {
        let rho = DeformedBellDiag::new(0.3, 0.3, [0.5, 0.2, 0.1]).unwrap().to_density();
        let s_a = qubit_entropy(&rho.reduced_a());
        let axis_best = [Vector3::x(), Vector3::y(), Vector3::z()]
            .iter()
            .map(|n| s_a - conditional_entropy(&rho, &LocalProjectiveMeasurement::new(*n).unwrap()))
            .fold(f64::NEG_INFINITY, f64::max);
        let j = classical_correlation_bruteforce(&rho, &MeasurementGrid::default()).unwrap();
        assert!(j.value >= axis_best - 1e-12);
        // Regression value recorded from this oracle.
        assert!((j.value - DEFORMED_REGRESSION_J).abs() < 1e-9, "{}", j.value);
    }

    const DEFORMED_REGRESSION_J: f64 = 0.195_553_918_776_236_7;
}
