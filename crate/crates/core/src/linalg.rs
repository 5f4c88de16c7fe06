//! Small fixed-size linear algebra: Pauli matrices, Kronecker products,
//! partial traces and eigenvalue routines for 2×2, 3×3 and 4×4 matrices.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3};
use num_complex::Complex64;

pub type CMatrix2 = Matrix2<Complex64>;
pub type CMatrix4 = Matrix4<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity2() -> CMatrix2 {
    CMatrix2::identity()
}

/// Pauli matrix σ_k for k ∈ {1, 2, 3}.
pub fn pauli(k: usize) -> CMatrix2 {
    match k {
        1 => CMatrix2::new(ZERO, ONE, ONE, ZERO),
        2 => CMatrix2::new(ZERO, -I, I, ZERO),
        3 => CMatrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index must be 1, 2 or 3, got {k}"),
    }
}

/// `a ⊗ b` in the ordering |0 0⟩, |0 1⟩, |1 0⟩, |1 1⟩ (A is the high bit).
pub fn kron(a: &CMatrix2, b: &CMatrix2) -> CMatrix4 {
    CMatrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Tr_B of a two-qubit operator.
pub fn partial_trace_b(m: &CMatrix4) -> CMatrix2 {
    CMatrix2::from_fn(|a, ap| m[(2 * a, 2 * ap)] + m[(2 * a + 1, 2 * ap + 1)])
}

/// Tr_A of a two-qubit operator.
pub fn partial_trace_a(m: &CMatrix4) -> CMatrix2 {
    CMatrix2::from_fn(|b, bp| m[(b, bp)] + m[(2 + b, 2 + bp)])
}

/// `Tr_B[(I ⊗ π) m]` for a one-qubit operator `π` acting on B.
pub fn contract_b(m: &CMatrix4, pi: &CMatrix2) -> CMatrix2 {
    CMatrix2::from_fn(|a, ap| {
        let mut acc = ZERO;
        for b in 0..2 {
            for bp in 0..2 {
                acc += pi[(b, bp)] * m[(2 * a + bp, 2 * ap + b)];
            }
        }
        acc
    })
}

/// Hermitian part `(m + m†)/2`.
pub fn hermitian_part(m: &CMatrix4) -> CMatrix4 {
    (m + m.adjoint()).scale(0.5)
}

/// Largest absolute entry of `m − m†`.
pub fn hermiticity_defect(m: &CMatrix4) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian 4×4 matrix, sorted ascending.
pub fn hermitian_eigenvalues4(m: &CMatrix4) -> [f64; 4] {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut out = [0.0; 4];
    for (o, e) in out.iter_mut().zip(eig.eigenvalues.iter()) {
        *o = *e;
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenvalues of a Hermitian 2×2 matrix, `(smaller, larger)`.
pub fn hermitian_eigenvalues2(m: &CMatrix2) -> (f64, f64) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// Eigenvalues of a real symmetric 3×3 matrix, sorted ascending.
///
/// Uses the trigonometric closed form; falls back to cyclic Jacobi rotations
/// when the cubic's discriminant is within 1e-14 of zero (a repeated root),
/// where the arccos step loses accuracy.
pub fn symmetric_eigenvalues3(m: &Matrix3<f64>) -> [f64; 3] {
    let off = m[(0, 1)].powi(2) + m[(0, 2)].powi(2) + m[(1, 2)].powi(2);
    if off == 0.0 {
        let mut d = [m[(0, 0)], m[(1, 1)], m[(2, 2)]];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let q = m.trace() / 3.0;
    let p2 = (m[(0, 0)] - q).powi(2) + (m[(1, 1)] - q).powi(2) + (m[(2, 2)] - q).powi(2) + 2.0 * off;
    let p = (p2 / 6.0).sqrt();
    let b = (m - Matrix3::identity() * q) / p;
    let r = b.determinant() / 2.0;
    // 1 - r² is proportional to the discriminant of the characteristic cubic.
    if 1.0 - r * r <= 1e-14 {
        return jacobi_eigenvalues3(m);
    }
    let phi = r.clamp(-1.0, 1.0).acos() / 3.0;
    let largest = q + 2.0 * p * phi.cos();
    let smallest = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let middle = 3.0 * q - largest - smallest;
    let mut out = [smallest, middle, largest];
    out.sort_by(f64::total_cmp);
    out
}

pub(crate) fn jacobi_eigenvalues3(m: &Matrix3<f64>) -> [f64; 3] {
    let mut a = *m;
    for _ in 0..64 {
        let off = a[(0, 1)].abs() + a[(0, 2)].abs() + a[(1, 2)].abs();
        if off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
        }
    }
    let mut d = [a[(0, 0)], a[(1, 1)], a[(2, 2)]];
    d.sort_by(f64::total_cmp);
    d
}

/// `n · σ` for a real 3-vector `n`.
pub fn pauli_dot(n: &Vector3<f64>) -> CMatrix2 {
    pauli(1).scale(n.x) + pauli(2).scale(n.y) + pauli(3).scale(n.z)
}
