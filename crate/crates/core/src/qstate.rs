//! Two-qubit state representations and conversions between matrix and
//! parameter forms.
//!
//! Basis ordering is |0 0⟩, |0 1⟩, |1 0⟩, |1 1⟩ with qubit A as the high bit,
//! so `σ_i ⊗ σ_j` is `kron(σ_i, σ_j)`. With this ordering the Bell-diagonal
//! matrix has `(c1 − c2)/4` in the outer anti-diagonal corners and
//! `(c1 + c2)/4` in the inner ones.

use nalgebra::{Matrix3, Vector3, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, pauli, CMatrix2, CMatrix4};

/// Entry-wise tolerance for `m = m†`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for `|tr m − 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue (or Bell weight) still accepted as non-negative.
pub const PSD_TOL: f64 = -1e-10;

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    m: CMatrix4,
}

impl TwoQubitDensity {
    pub fn new(m: CMatrix4) -> Result<Self> {
        let defect = linalg::hermiticity_defect(&m);
        if defect.is_nan() || defect > HERMITIAN_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (max |m - m^dagger| = {defect:e})"
            )));
        }
        let tr = m.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidInput(format!("trace is {tr}, expected 1")));
        }
        let m = linalg::hermitian_part(&m);
        let smallest = linalg::hermitian_eigenvalues4(&m)[0];
        if smallest < PSD_TOL {
            return Err(Error::NonPhysical {
                constraint: "smallest eigenvalue".into(),
                value: smallest,
            });
        }
        Ok(Self { m })
    }

    pub fn maximally_mixed() -> Self {
        Self { m: CMatrix4::identity().scale(0.25) }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidInput("state vector must be nonzero".into()));
        }
        let psi = psi / Complex64::from(norm);
        Self::new(psi * psi.adjoint())
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.m
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::hermitian_eigenvalues4(&self.m)
    }

    pub fn reduced_a(&self) -> CMatrix2 {
        linalg::partial_trace_b(&self.m)
    }

    pub fn reduced_b(&self) -> CMatrix2 {
        linalg::partial_trace_a(&self.m)
    }

    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    pub fn to_bloch(&self) -> BlochForm {
        BlochForm::from_density(self)
    }

    /// Partial transpose on B; see [`partial_transpose_b`].
    pub fn partial_transpose_b(&self) -> CMatrix4 {
        partial_transpose_b(&self.m)
    }
}

/// Transposes each 2×2 block with respect to subsystem B.
///
/// The result is Hermitian but need not be positive; it is returned as a raw
/// matrix for that reason.
pub fn partial_transpose_b(m: &CMatrix4) -> CMatrix4 {
    CMatrix4::from_fn(|r, c| m[(2 * (r / 2) + c % 2, 2 * (c / 2) + r % 2)])
}

/// Bloch decomposition `ρ = ¼(I⊗I + x·σ⊗I + I⊗y·σ + Σ T_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochForm {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl BlochForm {
    pub fn from_density(rho: &TwoQubitDensity) -> Self {
        let m = rho.matrix();
        let id = linalg::identity2();
        let expect = |op: CMatrix4| (m * op).trace().re;
        let x = Vector3::from_fn(|i, _| expect(linalg::kron(&pauli(i + 1), &id)));
        let y = Vector3::from_fn(|i, _| expect(linalg::kron(&id, &pauli(i + 1))));
        let t = Matrix3::from_fn(|i, j| expect(linalg::kron(&pauli(i + 1), &pauli(j + 1))));
        Self { x, y, t }
    }

    /// The raw operator, without any positivity check.
    pub fn operator(&self) -> CMatrix4 {
        let id = linalg::identity2();
        let mut m = CMatrix4::identity();
        for i in 0..3 {
            m += linalg::kron(&pauli(i + 1), &id).scale(self.x[i]);
            m += linalg::kron(&id, &pauli(i + 1)).scale(self.y[i]);
            for j in 0..3 {
                m += linalg::kron(&pauli(i + 1), &pauli(j + 1)).scale(self.t[(i, j)]);
            }
        }
        m.scale(0.25)
    }

    pub fn to_density(&self) -> Result<TwoQubitDensity> {
        TwoQubitDensity::new(self.operator())
    }

    /// The same state with the roles of A and B exchanged.
    pub fn swap_parties(&self) -> Self {
        Self { x: self.y, y: self.x, t: self.t.transpose() }
    }
}

/// The four Bell-basis weights in the order λ00, λ01, λ10, λ11, each as
/// `(name of the positivity inequality, 4·λ)`.
fn bell_inequalities(c: [f64; 3]) -> [(&'static str, f64); 4] {
    let [c1, c2, c3] = c;
    [
        ("1 + c1 - c2 + c3", 1.0 + c1 - c2 + c3),
        ("1 + c1 + c2 - c3", 1.0 + c1 + c2 - c3),
        ("1 - c1 + c2 + c3", 1.0 - c1 + c2 + c3),
        ("1 - c1 - c2 - c3", 1.0 - c1 - c2 - c3),
    ]
}

/// `|β_ab⟩ = (|0,b⟩ + (−1)^a |1,1⊕b⟩)/√2`.
pub fn bell_state(a: u8, b: u8) -> Vector4<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if a == 0 { 1.0 } else { -1.0 };
    let mut v = Vector4::zeros();
    v[b as usize] = Complex64::new(h, 0.0);
    v[2 + (1 - b as usize)] = Complex64::new(sign * h, 0.0);
    v
}

/// Bell-diagonal state `¼(I⊗I + Σ c_i σ_i⊗σ_i)`, physical by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiag {
    c: [f64; 3],
}

impl BellDiag {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::from_array([c1, c2, c3])
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("correlation triple {c:?} is not finite")));
        }
        for (constraint, value) in bell_inequalities(c) {
            if value / 4.0 < PSD_TOL {
                return Err(Error::NonPhysical { constraint: constraint.into(), value });
            }
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    /// Bell weights λ00, λ01, λ10, λ11.
    pub fn lambdas(&self) -> [f64; 4] {
        bell_inequalities(self.c).map(|(_, v)| v / 4.0)
    }

    /// `max{|c1|, |c2|, |c3|}`.
    pub fn c_max(&self) -> f64 {
        self.c.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    pub fn to_density(&self) -> TwoQubitDensity {
        let [c1, c2, c3] = self.c;
        TwoQubitDensity { m: x_state_matrix(1.0 + c3, 1.0 - c3, 1.0 - c3, 1.0 + c3, c1 - c2, c1 + c2) }
    }
}

fn x_state_matrix(d0: f64, d1: f64, d2: f64, d3: f64, outer: f64, inner: f64) -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m[(0, 0)] = d0.into();
    m[(1, 1)] = d1.into();
    m[(2, 2)] = d2.into();
    m[(3, 3)] = d3.into();
    m[(0, 3)] = outer.into();
    m[(3, 0)] = outer.into();
    m[(1, 2)] = inner.into();
    m[(2, 1)] = inner.into();
    m.scale(0.25)
}

/// Bell-diagonal state with parallel local Bloch vectors `r ẑ` on A and
/// `s ẑ` on B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedBellDiag {
    r: f64,
    s: f64,
    c: [f64; 3],
}

/// `(μ+, μ−, ν+, ν−)` for the deformed family.
pub fn deformed_eigenvalues(r: f64, s: f64, c: [f64; 3]) -> [f64; 4] {
    let [c1, c2, c3] = c;
    let mu_root = ((r - s).powi(2) + (c1 + c2).powi(2)).sqrt();
    let nu_root = ((r + s).powi(2) + (c1 - c2).powi(2)).sqrt();
    [
        (1.0 - c3 + mu_root) / 4.0,
        (1.0 - c3 - mu_root) / 4.0,
        (1.0 + c3 + nu_root) / 4.0,
        (1.0 + c3 - nu_root) / 4.0,
    ]
}

impl DeformedBellDiag {
    pub fn new(r: f64, s: f64, c: [f64; 3]) -> Result<Self> {
        if !(r.is_finite() && s.is_finite() && c.iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidInput("deformed state parameters must be finite".into()));
        }
        let [_, mu_minus, _, nu_minus] = deformed_eigenvalues(r, s, c);
        if mu_minus < PSD_TOL {
            return Err(Error::NonPhysical { constraint: "mu_minus".into(), value: mu_minus });
        }
        if nu_minus < PSD_TOL {
            return Err(Error::NonPhysical { constraint: "nu_minus".into(), value: nu_minus });
        }
        Ok(Self { r, s, c })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    /// `(μ+, μ−)`.
    pub fn mu(&self) -> (f64, f64) {
        let e = deformed_eigenvalues(self.r, self.s, self.c);
        (e[0], e[1])
    }

    /// `(ν+, ν−)`.
    pub fn nu(&self) -> (f64, f64) {
        let e = deformed_eigenvalues(self.r, self.s, self.c);
        (e[2], e[3])
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        deformed_eigenvalues(self.r, self.s, self.c)
    }

    pub fn to_density(&self) -> TwoQubitDensity {
        let (r, s) = (self.r, self.s);
        let [c1, c2, c3] = self.c;
        TwoQubitDensity {
            m: x_state_matrix(
                1.0 + r + s + c3,
                1.0 + r - s - c3,
                1.0 - r + s - c3,
                1.0 - r - s + c3,
                c1 - c2,
                c1 + c2,
            ),
        }
    }
}

impl From<BellDiag> for DeformedBellDiag {
    fn from(bd: BellDiag) -> Self {
        Self { r: 0.0, s: 0.0, c: bd.c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn origin_is_maximally_mixed() {
        let rho = BellDiag::new(0.0, 0.0, 0.0).unwrap().to_density();
        assert!((rho.matrix() - CMatrix4::identity().scale(0.25)).norm() < 1e-15);
    }

    #[test]
    fn bell_vertex_is_projector_onto_beta00() {
        let rho = BellDiag::new(1.0, -1.0, 1.0).unwrap().to_density();
        let b = bell_state(0, 0);
        assert!((rho.matrix() - b * b.adjoint()).norm() < 1e-15);
        let e = rho.eigenvalues();
        for (got, want) in e.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert_close(*got, want, 1e-12);
        }
    }

    #[test]
    fn outside_tetrahedron_names_the_inequality() {
        match BellDiag::new(1.0, 1.0, 1.0) {
            Err(Error::NonPhysical { constraint, value }) => {
                assert_eq!(constraint, "1 - c1 - c2 - c3");
                assert_close(value, -2.0, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bell_weights_are_rayleigh_quotients_of_bell_states() {
        let bd = BellDiag::new(0.6, -0.2, 0.3).unwrap();
        let rho = bd.to_density();
        let lambdas = bd.lambdas();
        for (k, (a, b)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            let v = bell_state(a, b);
            let q = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
            assert_close(q, lambdas[k], 1e-15);
        }
        assert_close(lambdas.iter().sum::<f64>(), 1.0, 1e-15);
    }

    #[test]
    fn bloch_of_bell_diag_and_deformed() {
        let b = BellDiag::new(0.6, 0.0, 0.3).unwrap().to_density().to_bloch();
        assert!(b.x.norm() < 1e-15 && b.y.norm() < 1e-15);
        assert!((b.t - Matrix3::from_diagonal(&Vector3::new(0.6, 0.0, 0.3))).norm() < 1e-15);

        let d = DeformedBellDiag::new(0.3, 0.3, [0.0; 3]).unwrap().to_density().to_bloch();
        assert!((d.x - Vector3::new(0.0, 0.0, 0.3)).norm() < 1e-15);
        assert!((d.y - Vector3::new(0.0, 0.0, 0.3)).norm() < 1e-15);
        assert!(d.t.norm() < 1e-15);

        let z = TwoQubitDensity::maximally_mixed().to_bloch();
        assert!(z.x.norm() == 0.0 && z.y.norm() == 0.0 && z.t.norm() == 0.0);
    }

    #[test]
    fn deformed_reduces_to_bell_diag() {
        let bd = BellDiag::new(0.6, 0.0, 0.3).unwrap();
        let d = DeformedBellDiag::new(0.0, 0.0, [0.6, 0.0, 0.3]).unwrap();
        assert_eq!(d.to_density().matrix(), bd.to_density().matrix());
    }

    #[test]
    fn deformed_boundary_and_violation() {
        let d = DeformedBellDiag::new(0.5, 0.5, [0.0; 3]).unwrap();
        assert_close(d.nu().1, 0.0, 1e-15);
        match DeformedBellDiag::new(1.0, 1.0, [0.0; 3]) {
            Err(Error::NonPhysical { constraint, value }) => {
                assert_eq!(constraint, "nu_minus");
                assert_close(value, -0.25, 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn partial_transpose_flips_c2() {
        let pt = partial_transpose_b(BellDiag::new(0.5, 0.5, 0.0).unwrap().to_density().matrix());
        let expected = BlochForm {
            x: Vector3::zeros(),
            y: Vector3::zeros(),
            t: Matrix3::from_diagonal(&Vector3::new(0.5, -0.5, 0.0)),
        };
        assert!((pt - expected.operator()).norm() < 1e-15);

        let mixed = TwoQubitDensity::maximally_mixed();
        assert_eq!(mixed.partial_transpose_b(), *mixed.matrix());

        let bell = BellDiag::new(1.0, -1.0, 1.0).unwrap().to_density();
        let e = linalg::hermitian_eigenvalues4(&bell.partial_transpose_b());
        assert_close(e[0], -0.5, 1e-12);
    }

    #[test]
    fn density_validation() {
        let mut m = CMatrix4::identity().scale(0.25);
        m[(0, 1)] = Complex64::new(0.0, 0.1);
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::InvalidInput(_))));
        let m = CMatrix4::identity().scale(0.3);
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::InvalidInput(_))));
        let m = CMatrix4::from_diagonal(&Vector4::new(0.6, 0.6, -0.1, -0.1).map(Complex64::from));
        assert!(matches!(TwoQubitDensity::new(m), Err(Error::NonPhysical { .. })));
    }
}
