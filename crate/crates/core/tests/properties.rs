use geodiscord::channels::{Channel, ChannelKind};
use geodiscord::dynamics::{
    canonicalize_axes, freezing_interval, phase_flip_params, phase_flip_trajectory, piecewise_dg, Branch,
};
use geodiscord::geometry::{in_octahedron, in_tetrahedron, iso_surface, ScalarField};
use geodiscord::io::{read_obj, write_obj};
use geodiscord::linalg;
use geodiscord::measures::{
    concurrence_wootters, concurrence_xstate, geometric_discord_belldiag, geometric_discord_general,
    geometric_discord_general_b, quantum_discord_belldiag,
};
use geodiscord::qstate::{partial_transpose_b, BellDiag, TwoQubitDensity};
use geodiscord::sampling::{sample_general_density, BellDiagSampler, GinibreSampler};
use proptest::prelude::*;

/// Vertices of the physical tetrahedron.
const CORNERS: [[f64; 3]; 4] = [[1.0, -1.0, 1.0], [-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, -1.0]];

/// Bell-diagonal states as convex combinations of the tetrahedron corners.
fn bell_diag() -> impl Strategy<Value = BellDiag> {
    prop::array::uniform4(0.0..1.0f64)
        .prop_filter("non-zero weights", |w| w.iter().sum::<f64>() > 1e-6)
        .prop_map(|w| {
            let total: f64 = w.iter().sum();
            let c = [0, 1, 2].map(|k| (0..4).map(|v| w[v] / total * CORNERS[v][k]).sum::<f64>());
            BellDiag::from_array(c).unwrap()
        })
}

fn general_state() -> impl Strategy<Value = TwoQubitDensity> {
    any::<u64>().prop_map(|seed| GinibreSampler::new(seed).next().unwrap())
}

fn max_abs_diff(a: &linalg::CMatrix4, b: &linalg::CMatrix4) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn bell_diag_density_is_valid(bd in bell_diag()) {
        let rho = bd.to_density();
        prop_assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(linalg::hermiticity_defect(rho.matrix()) < 1e-15);
        let mut expected = bd.lambdas();
        expected.sort_by(f64::total_cmp);
        for (got, want) in rho.eigenvalues().iter().zip(expected) {
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_round_trip(rho in general_state()) {
        let back = rho.to_bloch().to_density().unwrap();
        prop_assert!(max_abs_diff(rho.matrix(), back.matrix()) < 1e-13);
    }

    #[test]
    fn swapping_parties_exchanges_marginals(rho in general_state()) {
        let bloch = rho.to_bloch();
        prop_assert_eq!(bloch.swap_parties().swap_parties(), bloch.clone());
        let swapped = bloch.swap_parties().to_density().unwrap();
        let da = (swapped.reduced_a() - rho.reduced_b()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(da < 1e-13);
        prop_assert!((swapped.purity() - rho.purity()).abs() < 1e-13);
    }

    #[test]
    fn partial_transpose_is_an_involution(rho in general_state()) {
        let twice = partial_transpose_b(&partial_transpose_b(rho.matrix()));
        prop_assert_eq!(&twice, rho.matrix());
    }

    #[test]
    fn geometric_discord_forms_agree_on_bell_diag(bd in bell_diag()) {
        let rho = bd.to_density();
        let closed = geometric_discord_belldiag(&bd);
        prop_assert!((geometric_discord_general(&rho).unwrap().0 - closed).abs() < 1e-13);
        prop_assert!((geometric_discord_general_b(&rho).unwrap().0 - closed).abs() < 1e-13);
    }

    #[test]
    fn concurrence_forms_agree(bd in bell_diag()) {
        let x = concurrence_xstate(&bd).concurrence;
        let w = concurrence_wootters(&bd.to_density());
        prop_assert!((x - w).abs() < 1e-7, "{} vs {}", x, w);
    }

    #[test]
    fn octahedron_is_ppt(bd in bell_diag()) {
        let min = linalg::hermitian_eigenvalues4(&bd.to_density().partial_transpose_b())[0];
        prop_assert_eq!(in_octahedron(bd.c()), min >= -1e-10);
    }

    #[test]
    fn channels_preserve_states(rho in general_state(), p in 0.0..=1.0f64, k in 0usize..6) {
        let out = Channel::new(ChannelKind::ALL[k], p).unwrap().apply(&rho).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(out.eigenvalues()[0] >= -1e-12);
    }

    #[test]
    fn piecewise_law_matches_evolution(bd in bell_diag(), p in 0.0..0.999f64) {
        let state = canonicalize_axes(&bd).state;
        let [c1, _, c3] = state.c();
        prop_assume!(c1.abs() >= c3.abs() && c1 != 0.0);
        let (dg, _) = piecewise_dg(&state, p).unwrap();
        let evolved = BellDiag::from_array(phase_flip_params(&state, p)).unwrap();
        prop_assert!((dg - geometric_discord_belldiag(&evolved)).abs() < 1e-15);
    }

    #[test]
    fn piecewise_law_is_continuous_at_the_switch(c1 in 0.05..1.0f64, frac in 0.01..0.99f64, c2f in 0.0..1.0f64) {
        let c3 = frac * c1;
        let c2 = c2f * c3;
        let Ok(bd) = BellDiag::new(c1, c2, c3) else { return Ok(()) };
        let p_star = 1.0 - (c3 / c1).sqrt();
        let (before, b0) = piecewise_dg(&bd, p_star).unwrap();
        let (after, b1) = piecewise_dg(&bd, p_star + 1e-12).unwrap();
        prop_assert_eq!((b0, b1), (Branch::Early, Branch::Late));
        prop_assert!((before - after).abs() < 1e-11);
    }
}

#[test]
fn trajectory_samples_match_direct_evaluation() {
    let c0 = BellDiag::new(0.6, -0.1, 0.3).unwrap();
    let trajectory = phase_flip_trajectory(&c0, 200).unwrap();
    assert_eq!(trajectory.samples().len(), 200);
    for s in trajectory.samples() {
        let state = BellDiag::from_array(phase_flip_params(&c0, s.p)).unwrap();
        assert_eq!(s.c, state.c());
        assert_eq!(s.geometric_discord, geometric_discord_belldiag(&state));
        assert_eq!(s.discord, quantum_discord_belldiag(&state).unwrap());
        assert_eq!(s.concurrence, concurrence_xstate(&state).concurrence);
    }
    assert!(trajectory.samples().windows(2).all(|w| w[1].discord <= w[0].discord + 1e-15));
}

#[test]
fn frozen_value_holds_along_trajectory() {
    let c0 = BellDiag::new(0.6, 0.0, 0.3).unwrap();
    let interval = freezing_interval(&c0).unwrap();
    for s in phase_flip_trajectory(&c0, 500).unwrap().samples() {
        if s.p <= interval.p_hi {
            assert!((s.geometric_discord - interval.value).abs() < 1e-16);
        }
    }
}

#[test]
fn obj_round_trip() {
    let mesh = iso_surface(&ScalarField::GeometricDiscord, 0.05, 33, true).unwrap();
    assert!(!mesh.is_empty());
    let mut buf = Vec::new();
    write_obj(&mesh, &mut buf).unwrap();
    let back = read_obj(buf.as_slice()).unwrap();
    assert_eq!(back.triangles(), mesh.triangles());
    assert_eq!(back.vertices().len(), mesh.vertices().len());
    for (a, b) in back.vertices().iter().zip(mesh.vertices()) {
        assert!((a - b).norm() < 1e-8);
    }
    let mut again = Vec::new();
    write_obj(&back, &mut again).unwrap();
    assert_eq!(again, buf);
}

#[test]
fn ginibre_mean_purity() {
    let n = 20_000;
    let mean = sample_general_density(42, n).iter().map(|rho| rho.purity()).sum::<f64>() / n as f64;
    assert!((mean - 8.0 / 17.0).abs() < 0.01, "{mean}");
}

#[test]
fn tetrahedron_acceptance_ratio() {
    let mut sampler = BellDiagSampler::new(7);
    while sampler.draws() < 100_000 {
        sampler.next();
    }
    let ratio = sampler.acceptance_ratio();
    assert!((0.32..=0.35).contains(&ratio), "{ratio}");
    assert!(sampler.take(1000).all(|bd| in_tetrahedron(bd.c())));
}
