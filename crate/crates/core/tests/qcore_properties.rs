//! Randomized invariants of the state-level numerics.

use masking::qcore::{cross_marginal_keep, linalg, random_state_on, random_unitary};
use masking::{
    cross_marginal, entanglement_entropy, partial_trace, schmidt_decompose, tensor, trace_distance,
    Bipartition, DensityMatrix, DimProfile, PureState, Side, C64,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state(dims: &[usize], rng: &mut ChaCha8Rng) -> PureState {
    random_state_on(&DimProfile::new(dims.to_vec()).unwrap(), rng).unwrap()
}

fn random_mixed(dims: &[usize], rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let profile = DimProfile::new(dims.to_vec()).unwrap();
    let n = profile.total();
    let mut m = DMatrix::zeros(n, n);
    for _ in 0..rank {
        m += state(dims, rng).projector().mat() * C64::new(1.0 / rank as f64, 0.0);
    }
    DensityMatrix::new(m, profile).unwrap()
}

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=4, 2..=3).prop_filter("nontrivial", |d| d.iter().product::<usize>() > 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schmidt_reconstructs(dims in dims_strategy(), seed in any::<u64>(), cut_at in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = state(&dims, &mut rng);
        let cut = Bipartition::split_at(cut_at.min(dims.len() - 1));
        let s = schmidt_decompose(&psi, &cut).unwrap();
        prop_assert!((s.reconstruct().amps() - psi.amps()).norm() < 1e-10);
        prop_assert!(s.coeffs.windows(2).all(|w| w[0] >= w[1]));
        let total: f64 = s.coeffs.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(linalg::isometry_deviation(&s.basis_a) < 1e-10);
        prop_assert!(linalg::isometry_deviation(&s.basis_b) < 1e-10);
    }

    #[test]
    fn complementary_marginals_share_spectrum(d_a in 1usize..=5, d_b in 1usize..=5, seed in any::<u64>()) {
        prop_assume!(d_a * d_b > 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = state(&[d_a, d_b], &mut rng);
        let mut ea = partial_trace(&psi, &[0]).unwrap().eigenvalues();
        let mut eb = partial_trace(&psi, &[1]).unwrap().eigenvalues();
        ea.reverse();
        eb.reverse();
        for k in 0..d_a.min(d_b) {
            prop_assert!((ea[k] - eb[k]).abs() < 1e-10);
        }
        for &e in ea.iter().skip(d_b).chain(eb.iter().skip(d_a)) {
            prop_assert!(e.abs() < 1e-10);
        }
        let cut = Bipartition::ab();
        let s = entanglement_entropy(&psi, &cut).unwrap();
        prop_assert!((s - partial_trace(&psi, &[0]).unwrap().entropy()).abs() < 1e-9);
        prop_assert!((s - partial_trace(&psi, &[1]).unwrap().entropy()).abs() < 1e-9);
    }

    #[test]
    fn pure_and_density_partial_traces_agree(dims in dims_strategy(), seed in any::<u64>(), keep_mask in 1u8..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = state(&dims, &mut rng);
        let keep: Vec<usize> = (0..dims.len()).filter(|i| keep_mask & (1 << i) != 0).collect();
        prop_assume!(!keep.is_empty() && keep.len() < dims.len());
        let from_pure = partial_trace(&psi, &keep).unwrap();
        let from_rho = partial_trace(&psi.projector(), &keep).unwrap();
        prop_assert!(linalg::max_abs(&(from_pure.mat() - from_rho.mat())) < 1e-13);
        let tr: C64 = from_pure.mat().trace();
        prop_assert!((tr - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cross_marginal_on_diagonal_is_partial_trace(d_a in 1usize..=4, d_b in 1usize..=4, seed in any::<u64>()) {
        prop_assume!(d_a * d_b > 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = state(&[d_a, d_b], &mut rng);
        for side in [Side::A, Side::B] {
            let c = cross_marginal(&psi, &psi, side).unwrap();
            let rho = partial_trace(&psi, &[side.other().index()]).unwrap();
            prop_assert_eq!(&c, rho.mat());
        }
    }

    #[test]
    fn cross_marginal_is_sesquilinear(
        d_a in 1usize..=4, d_b in 1usize..=4, seed in any::<u64>(),
        a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        prop_assume!(d_a * d_b > 1);
        let (a, b) = (C64::new(a.0, a.1), C64::new(b.0, b.1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (psi, phi, chi) = (state(&[d_a, d_b], &mut rng), state(&[d_a, d_b], &mut rng), state(&[d_a, d_b], &mut rng));
        let combo = psi.amps() * a + phi.amps() * b;
        let n = combo.norm();
        prop_assume!(n > 1e-3);
        let s = PureState::new(combo / C64::new(n, 0.0), psi.dims().clone()).unwrap();
        for side in [Side::A, Side::B] {
            let cm = |x: &PureState, y: &PureState| cross_marginal(x, y, side).unwrap();
            let left = cm(&s, &chi) * C64::new(n, 0.0);
            let right = cm(&psi, &chi) * a + cm(&phi, &chi) * b;
            prop_assert!(linalg::max_abs(&(left - right)) < 1e-11);
            let left = cm(&chi, &s) * C64::new(n, 0.0);
            let right = cm(&chi, &psi) * a.conj() + cm(&chi, &phi) * b.conj();
            prop_assert!(linalg::max_abs(&(left - right)) < 1e-11);
            prop_assert!(linalg::max_abs(&(cm(&psi, &phi).adjoint() - cm(&phi, &psi))) < 1e-14);
        }
    }

    #[test]
    fn product_marginals_are_factors(d_a in 1usize..=4, d_b in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (state(&[d_a], &mut rng), state(&[d_b], &mut rng));
        let uv = tensor(&u, &v);
        prop_assert!(trace_distance(&partial_trace(&uv, &[0]).unwrap(), &u.projector()).unwrap() < 1e-12);
        prop_assert!(trace_distance(&partial_trace(&uv, &[1]).unwrap(), &v.projector()).unwrap() < 1e-12);
    }

    #[test]
    fn trace_distance_is_a_metric(n in 2usize..=6, seed in any::<u64>(), ranks in (1usize..=3, 1usize..=3, 1usize..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_mixed(&[n], ranks.0, &mut rng);
        let s = random_mixed(&[n], ranks.1, &mut rng);
        let t = random_mixed(&[n], ranks.2, &mut rng);
        let d = |x: &DensityMatrix, y: &DensityMatrix| trace_distance(x, y).unwrap();
        prop_assert!(d(&r, &r) < 1e-12);
        prop_assert!((d(&r, &s) - d(&s, &r)).abs() < 1e-12);
        prop_assert!(d(&r, &t) <= d(&r, &s) + d(&s, &t) + 1e-12);
        prop_assert!((0.0..=1.0).contains(&d(&r, &s)));
        let u = random_unitary(n, &mut rng);
        let rot = |x: &DensityMatrix| DensityMatrix::new(&u * x.mat() * u.adjoint(), x.dims().clone()).unwrap();
        prop_assert!((d(&rot(&r), &rot(&s)) - d(&r, &s)).abs() < 1e-10);
    }

    #[test]
    fn trace_distance_of_pure_states(n in 2usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = (state(&[n], &mut rng), state(&[n], &mut rng));
        let expect = (1.0 - u.fidelity(&v).unwrap()).sqrt();
        prop_assert!((trace_distance(&u.projector(), &v.projector()).unwrap() - expect).abs() < 1e-10);
    }

    #[test]
    fn reshape_preserves_marginals_of_groups(seed in any::<u64>()) {
        // [2,3,2] read as [6,2] groups the first two factors
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = state(&[2, 3, 2], &mut rng);
        let grouped = psi.reshape(DimProfile::new(vec![6, 2]).unwrap()).unwrap();
        let a = partial_trace(&psi, &[0, 1]).unwrap();
        let b = partial_trace(&grouped, &[0]).unwrap();
        prop_assert!(linalg::max_abs(&(a.mat() - b.mat())) < 1e-14);
        let c = cross_marginal_keep(&psi, &psi, &[2]).unwrap();
        prop_assert!(linalg::max_abs(&(&c - partial_trace(&grouped, &[1]).unwrap().mat())) < 1e-14);
    }
}

#[test]
fn random_states_average_to_maximally_mixed() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 20_000;
    let mut acc = DMatrix::<C64>::zeros(4, 4);
    for _ in 0..n {
        acc += state(&[4], &mut rng).projector().mat();
    }
    let mean = acc / C64::new(n as f64, 0.0);
    let dev = linalg::max_abs(&(mean - DMatrix::identity(4, 4) * C64::new(0.25, 0.0)));
    // standard error of each entry is about 0.2/sqrt(n)
    assert!(dev < 0.01, "deviation {dev}");
}

#[test]
fn seeded_states_are_reproducible() {
    let a = masking::random_pure_state(5, 9).unwrap();
    let b = masking::random_pure_state(5, 9).unwrap();
    let c = masking::random_pure_state(5, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn evolve_under_unitary_keeps_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = state(&[3, 2], &mut rng);
    let u = random_unitary(6, &mut rng);
    let out = psi.evolve(&u, psi.dims().clone()).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-12);
    let expect: DVector<C64> = &u * psi.amps();
    assert!((out.amps() - expect).norm() < 1e-14);
}
