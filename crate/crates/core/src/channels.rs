//! Local decoherence channels in Kraus form, applied identically and
//! independently to both qubits, together with their closed-form action on
//! Bell-diagonal parameters.
//!
//! Dephasing can also be parameterized by time as `p = 1 − exp(−Γt)`; see
//! [`Channel::from_gamma_time`].

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, pauli, CMatrix2, CMatrix4};
use crate::qstate::{BellDiag, BlochForm, TwoQubitDensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    AmplitudeDamping,
    PhaseDamping,
    Depolarizing,
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::Depolarizing,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "amplitude_damping",
            ChannelKind::PhaseDamping => "phase_damping",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::BitFlip => "bit_flip",
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::BitPhaseFlip => "bit_phase_flip",
        }
    }

    /// Pauli axis (0-based) left untouched by a flip channel.
    fn flip_axis(self) -> Option<usize> {
        match self {
            ChannelKind::BitFlip => Some(0),
            ChannelKind::BitPhaseFlip => Some(1),
            ChannelKind::PhaseFlip => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
            Error::InvalidInput(format!("unknown channel `{s}`, expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    kind: ChannelKind,
    p: f64,
}

impl Channel {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("channel parameter p = {p} outside [0, 1]")));
        }
        Ok(Self { kind, p })
    }

    /// Channel at parameter `p = 1 − exp(−Γt)`.
    pub fn from_gamma_time(kind: ChannelKind, gamma_t: f64) -> Result<Self> {
        if gamma_t.is_nan() || gamma_t < 0.0 {
            return Err(Error::InvalidInput(format!("Γt = {gamma_t} must be non-negative")));
        }
        Self::new(kind, -(-gamma_t).exp_m1())
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// One-qubit Kraus operators. Operators that vanish identically at this
    /// `p` are omitted, so `p = 0` always yields just the identity.
    pub fn kraus_operators(&self) -> Vec<CMatrix2> {
        let (p, q) = (self.p, self.q());
        let c = |v: f64| Complex64::new(v, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let ops = match self.kind {
            ChannelKind::AmplitudeDamping => vec![
                CMatrix2::new(c(1.0), z, z, c(q.sqrt())),
                (pauli(1) + pauli(2) * Complex64::i()).scale(p.sqrt() / 2.0),
            ],
            ChannelKind::PhaseDamping => vec![
                CMatrix2::new(c(1.0), z, z, c(q.sqrt())),
                CMatrix2::new(z, z, z, c(p.sqrt())),
            ],
            ChannelKind::Depolarizing => {
                let mut ops = vec![linalg::identity2().scale((1.0 - 0.75 * p).sqrt())];
                ops.extend((1..=3).map(|k| pauli(k).scale((p / 4.0).sqrt())));
                ops
            }
            kind => {
                let axis = kind.flip_axis().expect("flip channel");
                vec![
                    linalg::identity2().scale((1.0 - p / 2.0).sqrt()),
                    pauli(axis + 1).scale((p / 2.0).sqrt()),
                ]
            }
        };
        ops.into_iter().filter(|e| e.iter().any(|v| *v != z)).collect()
    }

    /// `Σ_ij (E_i ⊗ E_j) ρ (E_i ⊗ E_j)†`.
    pub fn apply(&self, rho: &TwoQubitDensity) -> Result<TwoQubitDensity> {
        let ops = self.kraus_operators();
        let mut out = CMatrix4::zeros();
        for ea in &ops {
            for eb in &ops {
                let e = linalg::kron(ea, eb);
                out += e * rho.matrix() * e.adjoint();
            }
        }
        TwoQubitDensity::new(linalg::hermitian_part(&out))
    }

    /// Closed-form Bloch data of the evolved Bell-diagonal state.
    pub fn evolve_params(&self, bd: &BellDiag) -> ChannelOutputParams {
        let (p, q) = (self.p, self.q());
        let [c1, c2, c3] = bd.c();
        match self.kind {
            ChannelKind::AmplitudeDamping => ChannelOutputParams {
                x: [0.0, 0.0, p],
                y: [0.0, 0.0, p],
                t_diag: [q * c1, q * c2, p * p + q * q * c3],
            },
            ChannelKind::PhaseDamping => ChannelOutputParams::diagonal([q * c1, q * c2, c3]),
            ChannelKind::Depolarizing => ChannelOutputParams::diagonal(bd.c().map(|v| q * q * v)),
            kind => {
                let axis = kind.flip_axis().expect("flip channel");
                let mut t = bd.c().map(|v| q * q * v);
                t[axis] = bd.c()[axis];
                ChannelOutputParams::diagonal(t)
            }
        }
    }

    /// Geometric discord of the evolved Bell-diagonal state, written per
    /// channel as the explicit `(sum − max)/4` expressions.
    pub fn geometric_discord_after(&self, bd: &BellDiag) -> f64 {
        let (p, q) = (self.p, self.q());
        let [c1, c2, c3] = bd.c();
        let max3 = |a: f64, b: f64, c: f64| a.max(b).max(c);
        let value = match self.kind {
            ChannelKind::AmplitudeDamping => {
                let zz = (p * p + c3 * q * q).powi(2) + p * p;
                q * q * (c1 * c1 + c2 * c2) + zz - max3((q * c1).powi(2), (q * c2).powi(2), zz)
            }
            ChannelKind::PhaseDamping => {
                q * q * (c1 * c1 + c2 * c2) + c3 * c3
                    - max3((q * c1).powi(2), (q * c2).powi(2), c3 * c3)
            }
            ChannelKind::Depolarizing => {
                let q2 = q * q;
                q2 * q2 * (c1 * c1 + c2 * c2 + c3 * c3)
                    - max3((q2 * c1).powi(2), (q2 * c2).powi(2), (q2 * c3).powi(2))
            }
            kind => {
                let i = kind.flip_axis().expect("flip channel");
                let c = bd.c();
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                let q2 = q * q;
                q2 * q2 * (c[j] * c[j] + c[k] * c[k]) + c[i] * c[i]
                    - max3((q2 * c[j]).powi(2), (q2 * c[k]).powi(2), c[i] * c[i])
            }
        };
        value / 4.0
    }
}

/// Bloch data of a channel output: local vectors and a diagonal
/// correlation tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelOutputParams {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t_diag: [f64; 3],
}

impl ChannelOutputParams {
    fn diagonal(t_diag: [f64; 3]) -> Self {
        Self { x: [0.0; 3], y: [0.0; 3], t_diag }
    }

    pub fn to_bloch(&self) -> BlochForm {
        BlochForm {
            x: Vector3::from(self.x),
            y: Vector3::from(self.y),
            t: Matrix3::from_diagonal(&Vector3::from(self.t_diag)),
        }
    }

    pub fn to_density(&self) -> Result<TwoQubitDensity> {
        self.to_bloch().to_density()
    }

    /// The output as a Bell-diagonal state, when both local vectors vanish.
    pub fn as_bell_diag(&self) -> Option<Result<BellDiag>> {
        (self.x == [0.0; 3] && self.y == [0.0; 3]).then(|| BellDiag::from_array(self.t_diag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::geometric_discord_general;

    fn completeness_defect(ops: &[CMatrix2]) -> f64 {
        let sum: CMatrix2 = ops.iter().map(|e| e.adjoint() * e).sum();
        (sum - linalg::identity2()).norm()
    }

    #[test]
    fn identity_at_zero() {
        for kind in ChannelKind::ALL {
            let ch = Channel::new(kind, 0.0).unwrap();
            let ops = ch.kraus_operators();
            assert_eq!(ops.len(), 1, "{kind}");
            assert!((ops[0] - linalg::identity2()).norm() < 1e-15);
            let bd = BellDiag::new(0.6, -0.2, 0.3).unwrap();
            let out = ch.apply(&bd.to_density()).unwrap();
            assert!((out.matrix() - bd.to_density().matrix()).norm() < 1e-15);
            assert_eq!(ch.evolve_params(&bd), ChannelOutputParams::diagonal(bd.c()));
        }
    }

    #[test]
    fn amplitude_damping_at_one() {
        let ops = Channel::new(ChannelKind::AmplitudeDamping, 1.0).unwrap().kraus_operators();
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(ops[0], CMatrix2::new(one, z, z, z));
        assert!((ops[1] - CMatrix2::new(z, one, z, z)).norm() < 1e-15);
    }

    #[test]
    fn completeness_all_kinds() {
        for kind in ChannelKind::ALL {
            for i in 0..=100 {
                let ops = Channel::new(kind, i as f64 / 100.0).unwrap().kraus_operators();
                assert!(completeness_defect(&ops) < 1e-12, "{kind} p={}", i as f64 / 100.0);
            }
        }
        assert_eq!(Channel::new(ChannelKind::Depolarizing, 0.4).unwrap().kraus_operators().len(), 4);
    }

    #[test]
    fn parameter_out_of_range() {
        assert!(Channel::new(ChannelKind::PhaseFlip, 1.5).is_err());
        assert!(Channel::new(ChannelKind::PhaseFlip, -0.1).is_err());
        assert!(Channel::new(ChannelKind::PhaseFlip, f64::NAN).is_err());
    }

    #[test]
    fn phase_flip_half_on_frozen_state() {
        let bd = BellDiag::new(0.6, 0.0, 0.3).unwrap();
        let ch = Channel::new(ChannelKind::PhaseFlip, 0.5).unwrap();
        let out = ch.apply(&bd.to_density()).unwrap().to_bloch();
        let expected = Matrix3::from_diagonal(&Vector3::new(0.15, 0.0, 0.3));
        assert!((out.t - expected).norm() < 1e-12 && out.x.norm() < 1e-12);
        assert!((ch.geometric_discord_after(&bd) - 0.005625).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let bd = BellDiag::new(0.6, 0.0, 0.3).unwrap();
        let out = Channel::new(ChannelKind::PhaseDamping, 0.3).unwrap().evolve_params(&bd);
        for (got, want) in out.t_diag.iter().zip([0.42, 0.0, 0.3]) {
            assert!((got - want).abs() < 1e-15);
        }
        // (0.6, 0.4, 0.3) is outside the tetrahedron; flip the sign of c2.
        let bd = BellDiag::new(0.6, -0.4, 0.3).unwrap();
        let out = Channel::new(ChannelKind::BitFlip, 0.2).unwrap().evolve_params(&bd);
        for (got, want) in out.t_diag.iter().zip([0.6, -0.256, 0.192]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn full_depolarization_and_amplitude_damping() {
        let bd = BellDiag::new(1.0, -1.0, 1.0).unwrap();
        let out = Channel::new(ChannelKind::Depolarizing, 1.0).unwrap().apply(&bd.to_density()).unwrap();
        assert!((out.matrix() - CMatrix4::identity().scale(0.25)).norm() < 1e-15);

        let ad = Channel::new(ChannelKind::AmplitudeDamping, 1.0).unwrap();
        assert_eq!(ad.geometric_discord_after(&bd), 0.0);
        let matrix_path = geometric_discord_general(&ad.apply(&bd.to_density()).unwrap()).unwrap().0;
        assert!(matrix_path.abs() < 1e-12);
    }

    #[test]
    fn depolarized_bell_state() {
        let bd = BellDiag::new(1.0, -1.0, 1.0).unwrap();
        for p in [0.1, 0.5, 0.9] {
            let q: f64 = 1.0 - p;
            let ch = Channel::new(ChannelKind::Depolarizing, p).unwrap();
            assert!((ch.geometric_discord_after(&bd) - 2.0 * q.powi(4) / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_time() {
        let ch = Channel::from_gamma_time(ChannelKind::PhaseFlip, 2f64.ln()).unwrap();
        assert!((ch.p() - 0.5).abs() < 1e-15);
        assert!(Channel::from_gamma_time(ChannelKind::PhaseFlip, -1.0).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in ChannelKind::ALL {
            assert_eq!(kind.name().parse::<ChannelKind>().unwrap(), kind);
        }
        assert!("dephasing".parse::<ChannelKind>().is_err());
    }
}
