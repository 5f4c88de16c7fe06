//! Seeded random states and the Monte-Carlo check of `2 D_G ≥ D²`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::in_tetrahedron;
use crate::measures::{
    geometric_discord_belldiag, geometric_discord_general, geometric_discord_general_b, quantum_discord_belldiag,
    quantum_discord_oracle, MeasurementGrid,
};
use crate::qstate::{BellDiag, DeformedBellDiag, TwoQubitDensity};

/// Uniform Bell-diagonal states by rejection from the cube `[−1, 1]³`.
#[derive(Debug, Clone)]
pub struct BellDiagSampler {
    rng: ChaCha8Rng,
    draws: u64,
    accepted: u64,
}

impl BellDiagSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), draws: 0, accepted: 0 }
    }

    /// Cube draws so far, including rejected ones.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn acceptance_ratio(&self) -> f64 {
        self.accepted as f64 / self.draws as f64
    }
}

impl Iterator for BellDiagSampler {
    type Item = BellDiag;

    fn next(&mut self) -> Option<BellDiag> {
        loop {
            let c = [0; 3].map(|_| self.rng.random_range(-1.0..=1.0));
            self.draws += 1;
            if in_tetrahedron(c) {
                self.accepted += 1;
                return Some(BellDiag::from_array(c).expect("inside the tetrahedron"));
            }
        }
    }
}

pub fn sample_bell_diag(seed: u64, n: usize) -> Vec<BellDiag> {
    BellDiagSampler::new(seed).take(n).collect()
}

/// Uniform deformed states by rejection: `r, s ∈ [−1, 1]`, `c ∈ [−1, 1]³`.
pub fn sample_deformed(seed: u64, n: usize) -> Vec<DeformedBellDiag> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let [r, s, c1, c2, c3] = [0; 5].map(|_| rng.random_range(-1.0..=1.0));
        if let Ok(d) = DeformedBellDiag::new(r, s, [c1, c2, c3]) {
            out.push(d);
        }
    }
    out
}

/// Density matrices `G G† / tr(G G†)` with standard complex Gaussian `G`.
#[derive(Debug, Clone)]
pub struct GinibreSampler {
    rng: ChaCha8Rng,
}

impl GinibreSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Iterator for GinibreSampler {
    type Item = TwoQubitDensity;

    fn next(&mut self) -> Option<TwoQubitDensity> {
        let rng = &mut self.rng;
        let g = Matrix4::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        let w = g * g.adjoint();
        let w = w.unscale(w.trace().re);
        Some(TwoQubitDensity::new(w).expect("Gram matrices are positive"))
    }
}

pub fn sample_general_density(seed: u64, n: usize) -> Vec<TwoQubitDensity> {
    GinibreSampler::new(seed).take(n).collect()
}

/// Tally of `2 D_G − D²` over a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleReport {
    pub n_samples: usize,
    pub n_violations: usize,
    /// Smallest `2 D_G − D²`; `+∞` for an empty sample.
    pub worst_margin: f64,
    /// Margin below `−slack` counts as a violation.
    pub slack: f64,
    pub seed: u64,
}

impl SampleReport {
    fn new(seed: u64, slack: f64) -> Self {
        Self { n_samples: 0, n_violations: 0, worst_margin: f64::INFINITY, slack, seed }
    }

    fn record(&mut self, margin: f64) {
        self.n_samples += 1;
        if margin < -self.slack {
            self.n_violations += 1;
        }
        self.worst_margin = self.worst_margin.min(margin);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyReport {
    pub bell_diag: SampleReport,
    /// General states, both measures taken for measurements on B.
    pub general: SampleReport,
    /// General states with the geometric discord taken on A while the
    /// discord is taken on B. Informational; not counted as violations.
    pub general_cross_party: SampleReport,
}

impl HierarchyReport {
    pub fn n_violations(&self) -> usize {
        self.bell_diag.n_violations + self.general.n_violations
    }
}

pub const BELL_DIAG_SLACK: f64 = 1e-9;
/// Looser slack for states whose discord comes from the measurement search.
pub const ORACLE_SLACK: f64 = 1e-5;

/// Seed of the general-state stream, kept apart from the Bell-diagonal one.
fn general_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Samples `n_bell_diag` Bell-diagonal states (closed-form discord) and
/// `n_general` random density matrices (measurement-search discord) and
/// counts violations of `2 D_G ≥ D²`. For general states both sides refer
/// to measurements on B; Bell-diagonal states are symmetric under the
/// exchange of A and B.
pub fn verify_hierarchy(seed: u64, n_bell_diag: usize, n_general: usize, grid: &MeasurementGrid) -> Result<HierarchyReport> {
    if n_bell_diag == 0 && n_general == 0 {
        return Err(Error::InvalidInput("at least one sample is required".into()));
    }
    grid.validate()?;
    let mut bell_diag = SampleReport::new(seed, BELL_DIAG_SLACK);
    for bd in BellDiagSampler::new(seed).take(n_bell_diag) {
        let d = quantum_discord_belldiag(&bd)?;
        bell_diag.record(2.0 * geometric_discord_belldiag(&bd) - d * d);
    }
    let mut general = SampleReport::new(seed, ORACLE_SLACK);
    let mut general_cross_party = SampleReport::new(seed, ORACLE_SLACK);
    for rho in GinibreSampler::new(general_seed(seed)).take(n_general) {
        let d = quantum_discord_oracle(&rho, grid)?;
        let (dg_b, _) = geometric_discord_general_b(&rho)?;
        general.record(2.0 * dg_b - d * d);
        let (dg_a, _) = geometric_discord_general(&rho)?;
        general_cross_party.record(2.0 * dg_a - d * d);
    }
    Ok(HierarchyReport { bell_diag, general, general_cross_party })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_diag_samples_are_physical_and_repeatable() {
        let a = sample_bell_diag(5, 500);
        assert_eq!(a, sample_bell_diag(5, 500));
        assert_ne!(a, sample_bell_diag(6, 500));
        assert!(a.iter().all(|bd| in_tetrahedron(bd.c())));
    }

    #[test]
    fn acceptance_ratio_near_one_third() {
        let mut s = BellDiagSampler::new(1);
        s.by_ref().take(20_000).for_each(drop);
        let r = s.acceptance_ratio();
        assert!((0.32..=0.35).contains(&r), "{r}");
    }

    #[test]
    fn deformed_samples_are_physical() {
        let states = sample_deformed(4, 300);
        assert_eq!(states, sample_deformed(4, 300));
        assert!(states.iter().all(|d| d.eigenvalues().iter().all(|&l| l >= -1e-10)));
        assert!(states.iter().any(|d| d.r().abs() > 0.5));
    }

    #[test]
    fn ginibre_states_are_valid() {
        let states = sample_general_density(3, 200);
        for rho in &states {
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(rho.eigenvalues()[0] >= -1e-12);
            let p = rho.purity();
            assert!(p > 0.25 && p <= 1.0 + 1e-12);
        }
        assert_eq!(states[7], sample_general_density(3, 8)[7]);
    }

    #[test]
    fn small_hierarchy_run() {
        let grid = MeasurementGrid { theta_steps: 64, phi_steps: 128, refine_steps: 40 };
        let report = verify_hierarchy(9, 2000, 3, &grid).unwrap();
        assert_eq!(report.bell_diag.n_samples, 2000);
        assert_eq!(report.general.n_samples, 3);
        assert_eq!(report.n_violations(), 0);
        assert!(report.bell_diag.worst_margin >= -1e-9);
    }

    #[test]
    fn bell_state_is_the_equality_case() {
        let bd = BellDiag::new(1.0, -1.0, 1.0).unwrap();
        let d = quantum_discord_belldiag(&bd).unwrap();
        assert!((2.0 * geometric_discord_belldiag(&bd) - d * d).abs() < 1e-12);
    }
}
