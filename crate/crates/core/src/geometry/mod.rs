//! State-space geometry in correlation coordinates `c = (c1, c2, c3)`:
//! the physical tetrahedron, the separable octahedron, the deformed
//! physical region, constant-discord level surfaces and plane contours.

mod contour;
mod mesh;
mod tables;

pub use contour::{contour_containment, contour_slice, ContainmentReport, ContourSet};
pub use mesh::{connected_components, deformation_boundary, iso_surface, IsoMesh};

use crate::measures::quantum_discord_belldiag;
use crate::qstate::{deformed_eigenvalues, BellDiag};

/// Boundary tolerance for the polytope tests.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// The four weights `4 λ_ab` as functions of `c`; all non-negative inside T.
fn tetrahedron_margins(c: [f64; 3]) -> [f64; 4] {
    let [c1, c2, c3] = c;
    [1.0 + c1 - c2 + c3, 1.0 + c1 + c2 - c3, 1.0 - c1 + c2 + c3, 1.0 - c1 - c2 - c3]
}

/// Physical Bell-diagonal region T.
pub fn in_tetrahedron(c: [f64; 3]) -> bool {
    tetrahedron_margins(c).iter().all(|&m| m >= -BOUNDARY_TOL)
}

/// Separable Bell-diagonal region L: `|c1| + |c2| + |c3| ≤ 1`.
pub fn in_octahedron(c: [f64; 3]) -> bool {
    c.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + BOUNDARY_TOL
}

/// `min(μ−, ν−)` of the deformed family; its zero set bounds the deformed
/// physical region.
pub fn deformation_margin(r: f64, s: f64, c: [f64; 3]) -> f64 {
    let [_, mu_minus, _, nu_minus] = deformed_eigenvalues(r, s, c);
    mu_minus.min(nu_minus)
}

/// Scalar fields over `c`-space whose level sets are meshed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarField {
    /// Geometric discord of Bell-diagonal states, extended to the whole cube.
    GeometricDiscord,
    /// Quantum discord of Bell-diagonal states; NaN outside T.
    Discord,
    /// Geometric discord of the deformed family, extended to the whole cube.
    GeometricDiscordDeformed { r: f64, s: f64 },
}

impl ScalarField {
    pub fn value(&self, c: [f64; 3]) -> f64 {
        match *self {
            ScalarField::GeometricDiscord => dg_from_squares(c.map(|v| v * v)),
            ScalarField::Discord => BellDiag::from_array(c)
                .ok()
                .and_then(|bd| quantum_discord_belldiag(&bd).ok())
                .unwrap_or(f64::NAN),
            ScalarField::GeometricDiscordDeformed { r, .. } => {
                let [c1, c2, c3] = c;
                dg_from_squares([c1 * c1, c2 * c2, c3 * c3 + r * r])
            }
        }
    }

    /// Non-negative exactly on the physical region of the field's family.
    pub fn physical_margin(&self, c: [f64; 3]) -> f64 {
        match *self {
            ScalarField::GeometricDiscord | ScalarField::Discord => {
                tetrahedron_margins(c).into_iter().fold(f64::INFINITY, f64::min) / 4.0
            }
            ScalarField::GeometricDiscordDeformed { r, s } => deformation_margin(r, s, c),
        }
    }

    pub fn is_physical(&self, c: [f64; 3]) -> bool {
        self.physical_margin(c) >= -BOUNDARY_TOL
    }

    /// Bound on `|∇ field|` over the physical region, used for
    /// interpolation tolerances. The discord bound is a loose empirical
    /// one; the field is not Lipschitz at the faces of T.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            ScalarField::GeometricDiscord | ScalarField::GeometricDiscordDeformed { .. } => 1.0,
            ScalarField::Discord => 4.0,
        }
    }
}

/// `(Σ a_i − max a_i) / 4` for squared components `a`.
fn dg_from_squares(sq: [f64; 3]) -> f64 {
    crate::measures::sum_of_two_smallest(sq) / 4.0
}

/// Uniform grid over `[−1, 1]` with `n` points, exactly symmetric about 0.
pub(crate) fn grid_coordinate(i: usize, n: usize) -> f64 {
    let m = (n - 1) as f64;
    (2.0 * i as f64 - m) / m
}
