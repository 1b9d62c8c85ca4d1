//! Cross-checks of the negativity pipeline against an independent
//! Schmidt-coefficient oracle, plus invariances the measure must satisfy.
//!
//! For a pure state the sum of the negative partial-transpose eigenvalues
//! across a cut equals `((sum_k sigma_k)^2 - 1) / 2`, where `sigma_k` are the
//! singular values of the amplitude vector reshaped into a (small side) x
//! (rest) matrix. The oracle below computes that by SVD and never touches the
//! partial-trace / partial-transpose / eigenvalue path it is checking.

use nalgebra::DMatrix;
use num_complex::Complex64;

use entsim_core::amplitude::AmplitudeState;
use entsim_core::entanglement::{enumerate_bipartitions, measure, negativity, w_closed_form_ea};
use entsim_core::qstate::{PureState, QubitLabel};
use entsim_core::states::{evolved_state, initial_state, InitialStateKind};

/// Normalized negativity of a pure state across one cut, by SVD of the
/// reshaped amplitude vector.
fn schmidt_negativity(state: &PureState, small_side: &[usize]) -> f64 {
    let n = state.n_qubits();
    let m = small_side.len();
    let rest: Vec<usize> = (0..n).filter(|p| !small_side.contains(p)).collect();
    let rows = 1usize << m;
    let cols = 1usize << (n - m);
    let mat = DMatrix::from_fn(rows, cols, |r, c| {
        let mut idx = 0usize;
        for (pos, &party) in small_side.iter().enumerate() {
            idx |= ((r >> (m - 1 - pos)) & 1) << (n - 1 - party);
        }
        for (pos, &party) in rest.iter().enumerate() {
            idx |= ((c >> (n - m - 1 - pos)) & 1) << (n - 1 - party);
        }
        state.amplitude(idx)
    });
    let singular: f64 = mat.svd(false, false).singular_values.iter().sum();
    let neg_sum = (singular * singular - 1.0) / 2.0;
    2.0 / ((1usize << m) as f64 - 1.0) * neg_sum
}

/// Bipartition-averaged measure of a pure state via the Schmidt oracle.
fn schmidt_measure(state: &PureState) -> f64 {
    let n = state.n_qubits();
    let half = n / 2;
    let mut total = 0.0;
    for m in 1..=half {
        let parts = enumerate_bipartitions(n, m).unwrap();
        let count = parts.len();
        let acc: f64 =
            parts.iter().map(|p| schmidt_negativity(state, p.small_side())).sum();
        total += acc / count as f64;
    }
    total / half as f64
}

#[test]
fn pipeline_matches_schmidt_oracle_on_every_cut() {
    for kind in InitialStateKind::all() {
        let state = initial_state(kind).unwrap();
        let rho = state.to_density();
        let n = state.n_qubits();
        for m in 1..=n / 2 {
            for part in enumerate_bipartitions(n, m).unwrap() {
                let pipeline = negativity(&rho, &part).unwrap();
                let oracle = schmidt_negativity(&state, part.small_side());
                assert!(
                    (pipeline - oracle).abs() < 1e-10,
                    "{kind} cut {part}: pipeline {pipeline} oracle {oracle}"
                );
                assert!((0.0..=1.0 + 1e-10).contains(&pipeline), "{kind} cut {part}");
            }
        }
    }
}

#[test]
fn pipeline_measure_matches_schmidt_oracle_totals() {
    for kind in InitialStateKind::all() {
        let state = initial_state(kind).unwrap();
        let report = measure(&state.to_density()).unwrap();
        let oracle = schmidt_measure(&state);
        assert!(
            (report.total - oracle).abs() < 1e-10,
            "{kind}: pipeline {} oracle {oracle}",
            report.total
        );
        for (m, e) in &report.per_size {
            assert!((0.0..=1.0 + 1e-10).contains(e), "{kind} size {m}");
        }
    }
}

#[test]
fn oracle_also_covers_the_evolved_register() {
    // The full atom+reservoir state stays pure, so the oracle applies to any
    // cut of the 8-qubit register as well; check the atoms-vs-rest cut
    // against the closed form at a few populations.
    for &u in &[0.0f64, 0.3, 0.62, 1.0] {
        let amp = AmplitudeState::from_nu(0.0, Complex64::from(u.sqrt())).unwrap();
        let state = evolved_state(InitialStateKind::W(4), &amp).unwrap();
        let atoms: Vec<QubitLabel> = (0..4).map(QubitLabel::atom).collect();
        let rho_a = state.partial_trace(&atoms).unwrap();
        let e_a = measure(&rho_a).unwrap().total;
        let closed = w_closed_form_ea(u).unwrap();
        assert!((e_a - closed).abs() < 1e-9, "u = {u}: {e_a} vs {closed}");
    }
}

/// Single-qubit unitary with Euler-like angles.
fn unitary(theta: f64, alpha: f64, beta: f64) -> DMatrix<Complex64> {
    let (c, s) = (theta.cos(), theta.sin());
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from_polar(c, alpha),
            Complex64::from_polar(s, beta),
            Complex64::from_polar(-s, -beta),
            Complex64::from_polar(c, -alpha),
        ],
    )
}

#[test]
fn negativity_is_invariant_under_local_unitaries() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut next = move || rng.random_range(0.0..std::f64::consts::TAU);
    for kind in InitialStateKind::four_qubit_family() {
        let rho = initial_state(kind).unwrap().to_density();
        let mut big = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for _ in 0..4 {
            big = big.kronecker(&unitary(next(), next(), next()));
        }
        let rotated = &big * rho.matrix() * big.adjoint();
        let rho_rot =
            entsim_core::qstate::DensityMatrix::new(rho.labels().to_vec(), rotated).unwrap();
        for m in 1..=2 {
            for part in enumerate_bipartitions(4, m).unwrap() {
                let before = negativity(&rho, &part).unwrap();
                let after = negativity(&rho_rot, &part).unwrap();
                assert!(
                    (before - after).abs() < 1e-9,
                    "{kind} cut {part}: {before} vs {after}"
                );
            }
        }
    }
}

#[test]
fn w_closed_form_is_nondecreasing() {
    let mut prev = -1.0;
    for k in 0..=10_000 {
        let u = k as f64 / 10_000.0;
        let e = w_closed_form_ea(u).unwrap();
        assert!(e >= prev - 1e-12, "dip at u = {u}");
        prev = e;
        // the bracket under the absolute value stays single-signed on [0, 1]
        let bracket = 16.0 - 16.0 * u
            - (6.0 * (7.0 * u * u - 8.0 * u + 4.0).sqrt()
                + 4.0 * (2.0 * u * u - 2.0 * u + 1.0).sqrt());
        assert!(bracket <= 1e-12, "bracket changed sign at u = {u}");
    }
}
