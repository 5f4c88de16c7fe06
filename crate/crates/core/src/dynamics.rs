//! Bell-diagonal states under local phase-flip noise: sampled trajectories,
//! the two-branch geometric-discord law, sudden-change points, freezing
//! intervals, and the separability of states whose geometric discord
//! freezes.
//!
//! Phase flip with parameter `p` maps `(c1, c2, c3)` to
//! `((1−p)² c1, (1−p)² c2, c3)`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{
    concurrence_xstate, geometric_discord_belldiag, quantum_discord_belldiag, ConcurrencePieces,
};
use crate::qstate::BellDiag;

/// Largest phase-flip parameter sampled; `p = 1` is excluded.
pub const P_MAX: f64 = 1.0 - 1e-9;

/// `c(p)` under phase flip.
pub fn phase_flip_params(c0: &BellDiag, p: f64) -> [f64; 3] {
    let q2 = (1.0 - p) * (1.0 - p);
    let [c1, c2, c3] = c0.c();
    [q2 * c1, q2 * c2, c3]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub p: f64,
    pub c: [f64; 3],
    pub geometric_discord: f64,
    pub discord: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub const CSV_HEADER: &'static str = "p,c1,c2,c3,D_G,D,C";

    /// One row per sample, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            let row = [s.p, s.c[0], s.c[1], s.c[2], s.geometric_discord, s.discord, s.concurrence];
            let cells: Vec<String> = row.iter().map(|v| crate::io::fmt_sig17(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Samples `p = i / steps` for `i = 0..steps`.
pub fn phase_flip_trajectory(c0: &BellDiag, steps: usize) -> Result<Trajectory> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!("trajectory needs at least 2 steps, got {steps}")));
    }
    let samples = (0..steps)
        .map(|i| {
            let p = (i as f64 / steps as f64).min(P_MAX);
            let c = phase_flip_params(c0, p);
            let state = BellDiag::from_array(c)?;
            Ok(TrajectorySample {
                p,
                c,
                geometric_discord: geometric_discord_belldiag(&state),
                discord: quantum_discord_belldiag(&state)?,
                concurrence: concurrence_xstate(&state).concurrence,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { samples })
}

/// Canonical axis order for the piecewise law: `|c1| ≥ |c2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalAxes {
    pub state: BellDiag,
    /// Whether `c1` and `c2` were exchanged.
    pub swapped: bool,
}

/// Swaps `c1` and `c2` when `|c2| > |c1|`. Both axes decay identically
/// under phase flip, so the exchange commutes with the evolution.
pub fn canonicalize_axes(c0: &BellDiag) -> CanonicalAxes {
    let [c1, c2, c3] = c0.c();
    if c2.abs() > c1.abs() {
        let state = BellDiag::new(c2, c1, c3).expect("axis exchange preserves positivity up to a sign");
        CanonicalAxes { state, swapped: true }
    } else {
        CanonicalAxes { state: *c0, swapped: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `c1(p)²` is the largest square: `D_G = (c2(p)² + c3²)/4`.
    Early,
    /// `c3²` is the largest square: `D_G = (c1(p)² + c2(p)²)/4`.
    Late,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Early => "early",
            Branch::Late => "late",
        }
    }
}

/// Geometric discord under phase flip from the two-branch law. Requires
/// `|c1(0)| ≥ |c2(0)|, |c3(0)|` and `c1(0) ≠ 0`.
pub fn piecewise_dg(c0: &BellDiag, p: f64) -> Result<(f64, Branch)> {
    let [c1, c2, c3] = c0.c();
    if !(c1.abs() >= c2.abs() && c1.abs() >= c3.abs() && c1 != 0.0) {
        return Err(Error::Precondition(format!(
            "piecewise law needs |c1| >= |c2|, |c3| and c1 != 0, got {:?}",
            c0.c()
        )));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("phase-flip parameter p = {p} outside [0, 1)")));
    }
    let [c1p, c2p, _] = phase_flip_params(c0, p);
    if p <= 1.0 - (c3.abs() / c1.abs()).sqrt() {
        Ok(((c2p * c2p + c3 * c3) / 4.0, Branch::Early))
    } else {
        Ok(((c1p * c1p + c2p * c2p) / 4.0, Branch::Late))
    }
}

/// `p* = 1 − sqrt(|c3| / |c1|)` when, after canonicalization,
/// `|c1| > |c3| > 0`.
pub fn sudden_change_point(c0: &BellDiag) -> Option<f64> {
    let [c1, _, c3] = canonicalize_axes(c0).state.c();
    (c1.abs() > c3.abs() && c3 != 0.0).then(|| 1.0 - (c3.abs() / c1.abs()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreezingInterval {
    pub p_lo: f64,
    pub p_hi: f64,
    /// Constant geometric discord `c3² / 4` on `[p_lo, p_hi]`.
    pub value: f64,
    pub swapped: bool,
}

/// The interval `[0, p*]` on which the geometric discord stays exactly
/// constant. Exists iff, after canonicalization, `c2 = 0` and
/// `|c1| > |c3| > 0`. Ties `|c1| = |c3|` report none.
pub fn freezing_interval(c0: &BellDiag) -> Option<FreezingInterval> {
    let canon = canonicalize_axes(c0);
    let [_, c2, c3] = canon.state.c();
    if c2 != 0.0 {
        return None;
    }
    sudden_change_point(&canon.state).map(|p_hi| FreezingInterval {
        p_lo: 0.0,
        p_hi,
        value: c3 * c3 / 4.0,
        swapped: canon.swapped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityCertificate {
    pub separable: bool,
    pub pieces: ConcurrencePieces,
    /// `(|c1| + |c3| − 1)/4`, an upper bound on both Λ's.
    pub bound: f64,
    /// Smallest eigenvalue of the partial transpose.
    pub ppt_min_eigenvalue: f64,
    pub ppt: bool,
}

/// Checks that a state satisfying the freezing condition is separable:
/// zero concurrence and a positive partial transpose, both up to the
/// eigenvalue tolerance used for physicality.
///
/// Accepts `c2 = 0` with `|c1| ≥ |c3|` after canonicalization, which
/// includes the boundary cases of the freezing condition.
pub fn frozen_initial_is_separable(c0: &BellDiag) -> Result<SeparabilityCertificate> {
    let state = canonicalize_axes(c0).state;
    let [c1, c2, c3] = state.c();
    if c2 != 0.0 || c1.abs() < c3.abs() {
        return Err(Error::Precondition(format!(
            "state {:?} does not satisfy the freezing condition (c2 = 0, |c1| >= |c3|)",
            c0.c()
        )));
    }
    let pieces = concurrence_xstate(&state);
    let ppt_min_eigenvalue = linalg::hermitian_eigenvalues4(&state.to_density().partial_transpose_b())[0];
    let ppt = ppt_min_eigenvalue >= crate::qstate::PSD_TOL;
    Ok(SeparabilityCertificate {
        // C = 2Λ and −Λ is a partial-transpose eigenvalue, so C gets twice
        // the eigenvalue tolerance.
        separable: pieces.concurrence <= -2.0 * crate::qstate::PSD_TOL && ppt,
        pieces,
        bound: (c1.abs() + c3.abs() - 1.0) / 4.0,
        ppt_min_eigenvalue,
        ppt,
    })
}

/// Jumps below this multiple of the neighborhood median are not kinks.
const KINK_THRESHOLD: f64 = 10.0;
/// Half-width of the neighborhood used for the median jump.
const KINK_NEIGHBORHOOD: usize = 25;

/// Locates the sharpest slope discontinuity of uniformly sampled values.
///
/// Uses three-point second differences `|f[i+1] − 2 f[i] + f[i−1]|` as slope
/// jumps. The peak must exceed `10×` the median jump of its neighborhood;
/// its position is refined to the centroid of the peak and its two
/// neighbors, which is exact for a hinge between grid points.
pub fn detect_kink(p: &[f64], values: &[f64]) -> Option<f64> {
    if p.len() != values.len() || p.len() < 5 {
        return None;
    }
    let jumps: Vec<f64> =
        (1..values.len() - 1).map(|i| (values[i + 1] - 2.0 * values[i] + values[i - 1]).abs()).collect();
    let (peak, &peak_jump) = jumps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    if peak_jump == 0.0 {
        return None;
    }
    let lo = peak.saturating_sub(KINK_NEIGHBORHOOD);
    let hi = (peak + KINK_NEIGHBORHOOD + 1).min(jumps.len());
    let mut neighborhood: Vec<f64> =
        (lo..hi).filter(|&k| k.abs_diff(peak) > 2).map(|k| jumps[k]).collect();
    let median = if neighborhood.is_empty() {
        0.0
    } else {
        neighborhood.sort_by(f64::total_cmp);
        neighborhood[neighborhood.len() / 2]
    };
    if peak_jump <= KINK_THRESHOLD * median {
        return None;
    }
    let (mut weight, mut moment) = (0.0, 0.0);
    for k in peak.saturating_sub(1)..=(peak + 1).min(jumps.len() - 1) {
        let w = (jumps[k] - median).max(0.0);
        weight += w;
        moment += w * p[k + 1];
    }
    Some(moment / weight)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimultaneousKinks {
    pub discord_kink: Option<f64>,
    pub geometric_kink: Option<f64>,
    pub step: f64,
}

impl SimultaneousKinks {
    /// Both kinks found and less than one grid step apart.
    pub fn coincide(&self) -> bool {
        match (self.discord_kink, self.geometric_kink) {
            (Some(a), Some(b)) => (a - b).abs() < self.step,
            _ => false,
        }
    }
}

/// Locates the decay-rate discontinuities of `D(p)` and `D_G(p)` along the
/// phase-flip trajectory sampled at `p = i / steps`.
pub fn simultaneous_kinks(c0: &BellDiag, steps: usize) -> Result<SimultaneousKinks> {
    let trajectory = phase_flip_trajectory(c0, steps)?;
    let p: Vec<f64> = trajectory.samples().iter().map(|s| s.p).collect();
    let d: Vec<f64> = trajectory.samples().iter().map(|s| s.discord).collect();
    let dg: Vec<f64> = trajectory.samples().iter().map(|s| s.geometric_discord).collect();
    Ok(SimultaneousKinks {
        discord_kink: detect_kink(&p, &d),
        geometric_kink: detect_kink(&p, &dg),
        step: 1.0 / steps as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{Channel, ChannelKind};

    fn bd(c1: f64, c2: f64, c3: f64) -> BellDiag {
        BellDiag::new(c1, c2, c3).unwrap()
    }

    const P_STAR: f64 = 0.292_893_218_813_452_5; // 1 − sqrt(0.5)

    #[test]
    fn trajectory_stays_in_the_c2_zero_plane() {
        let t = phase_flip_trajectory(&bd(0.6, 0.0, 0.3), 100).unwrap();
        assert_eq!(t.samples().len(), 100);
        let mut last_c1 = f64::INFINITY;
        for s in t.samples() {
            assert_eq!(s.c[1], 0.0);
            assert_eq!(s.c[2], 0.3);
            assert!(s.c[0] < last_c1 && s.c[0] > 0.0);
            last_c1 = s.c[0];
        }
        assert!(t.samples().windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn classical_axis_state_is_constant() {
        let t = phase_flip_trajectory(&bd(0.0, 0.0, 0.7), 10).unwrap();
        assert!(t.samples().iter().all(|s| s.c == [0.0, 0.0, 0.7] && s.geometric_discord == 0.0));
    }

    #[test]
    fn symmetric_start_decays_strictly() {
        let t = phase_flip_trajectory(&bd(0.5, -0.5, 0.2), 200).unwrap();
        for w in t.samples().windows(2) {
            assert_eq!(w[1].c[0], -w[1].c[1]);
            assert!(w[1].geometric_discord < w[0].geometric_discord);
        }
    }

    #[test]
    fn trajectory_matches_channel_closed_form() {
        let c0 = bd(0.6, -0.2, 0.3);
        for s in phase_flip_trajectory(&c0, 50).unwrap().samples() {
            let ch = Channel::new(ChannelKind::PhaseFlip, s.p).unwrap();
            assert!((s.geometric_discord - ch.geometric_discord_after(&c0)).abs() < 1e-12);
        }
    }

    #[test]
    fn piecewise_examples() {
        let c0 = bd(0.6, 0.0, 0.3);
        let (v, b) = piecewise_dg(&c0, 0.0).unwrap();
        assert!((v - 0.0225).abs() < 1e-15 && b == Branch::Early);
        let (v, b) = piecewise_dg(&c0, 0.9).unwrap();
        assert!((v - 9e-6).abs() < 1e-15 && b == Branch::Late, "{v}");
        let (early, _) = piecewise_dg(&c0, P_STAR).unwrap();
        let late = {
            let [c1, c2, _] = phase_flip_params(&c0, P_STAR);
            (c1 * c1 + c2 * c2) / 4.0
        };
        assert!((early - 0.0225).abs() < 1e-15 && (late - 0.0225).abs() < 1e-14);
        assert!(matches!(piecewise_dg(&bd(0.3, 0.0, 0.6), 0.1), Err(Error::Precondition(_))));
        assert!(matches!(piecewise_dg(&bd(0.0, 0.0, 0.0), 0.1), Err(Error::Precondition(_))));
    }

    #[test]
    fn sudden_change_examples() {
        assert!((sudden_change_point(&bd(0.6, 0.0, 0.3)).unwrap() - P_STAR).abs() < 1e-15);
        assert_eq!(sudden_change_point(&bd(0.3, 0.0, 0.6)), None);
        assert_eq!(sudden_change_point(&bd(0.6, 0.0, 0.0)), None);
        // Relabeled: |c2| is the larger of the first two axes.
        assert!((sudden_change_point(&bd(0.0, 0.6, 0.3)).unwrap() - P_STAR).abs() < 1e-15);
    }

    #[test]
    fn freezing_examples() {
        let f = freezing_interval(&bd(0.6, 0.0, 0.3)).unwrap();
        assert_eq!(f.p_lo, 0.0);
        assert!((f.p_hi - P_STAR).abs() < 1e-15 && (f.value - 0.0225).abs() < 1e-15);
        assert_eq!(freezing_interval(&bd(0.6, 0.1, 0.3)), None);
        assert_eq!(freezing_interval(&bd(0.6, 0.0, 0.0)), None);
        assert_eq!(freezing_interval(&bd(0.3, 0.0, 0.3)), None);
        assert!(freezing_interval(&bd(0.0, -0.6, 0.3)).unwrap().swapped);
    }

    #[test]
    fn frozen_states_are_separable() {
        for c in [[0.6, 0.0, 0.3], [0.9, 0.0, 0.1], [1.0, 0.0, 0.0], [-0.5, 0.0, 0.5]] {
            let cert = frozen_initial_is_separable(&BellDiag::from_array(c).unwrap()).unwrap();
            assert!(cert.separable, "{c:?}");
            assert_eq!(cert.pieces.concurrence, 0.0);
            assert!(cert.pieces.lambda1 <= cert.bound + 1e-15 && cert.pieces.lambda2 <= cert.bound + 1e-15);
            assert!(cert.bound <= 0.0);
        }
        assert!(frozen_initial_is_separable(&bd(0.6, 0.1, 0.3)).is_err());
    }

    #[test]
    fn kink_detector_on_a_hinge() {
        let h = 1e-3;
        let p: Vec<f64> = (0..1000).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = p.iter().map(|&x| 0.2 * x * x + 3.0 * (x - 0.4123).max(0.0)).collect();
        let k = detect_kink(&p, &f).unwrap();
        assert!((k - 0.4123).abs() < 1e-6, "{k}");
        let smooth: Vec<f64> = p.iter().map(|&x| x.sin()).collect();
        assert_eq!(detect_kink(&p, &smooth), None);
    }

    #[test]
    fn csv_header_and_rows() {
        let mut buf = Vec::new();
        phase_flip_trajectory(&bd(0.6, 0.0, 0.3), 4).unwrap().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "p,c1,c2,c3,D_G,D,C");
        assert_eq!(lines.len(), 5);
        let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row[..4], [0.0, 0.6, 0.0, 0.3]);
    }
}
