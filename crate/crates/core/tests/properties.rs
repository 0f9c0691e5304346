//! Property tests for the simulation kernel: structural invariants that must
//! hold for arbitrary valid inputs, driven by proptest.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dmnet_core::matrix::{eig_hermitian, unitary_from_hamiltonian, Complex64, ComplexMatrix};
use dmnet_core::network::{DmVector, NetworkEvolution, NodePair};
use dmnet_core::state::{
    partial_trace, partial_trace_projector, random_density_operator, von_neumann_entropy,
    DensityOperator,
};
use dmnet_core::steering::{
    conditional_entropy_via_spectra, negativity, post_measurement_state_on, steering_parameter,
    MeasuredParty, PauliAxis,
};
use dmnet_core::sweep::{parse_records, write_records, OutputFormat, SweepConfig, SweepRecord};

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    use rand::Rng;
    ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    })
}

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = random_matrix(dim, rng);
    ComplexMatrix::from_fn(dim, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5)
}

fn random_single_qubit_unitary(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    use rand::Rng;
    let a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    let b = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    ComplexMatrix::from_vec(2, vec![a, -b.conj(), b, a.conj()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kron_is_associative(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(2, &mut rng);
        let c = random_matrix(2, &mut rng);
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-13);
    }

    #[test]
    fn eigenvalue_sum_equals_trace(seed in any::<u64>(), dim in 2usize..=16) {
        let mut rng = rng_from(seed);
        let m = random_hermitian(dim, &mut rng);
        let eig = eig_hermitian(&m).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - m.trace().re).abs() <= 1e-10);
    }

    #[test]
    fn eigenvectors_are_orthonormal_and_reconstruct(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let m = random_hermitian(16, &mut rng);
        let eig = eig_hermitian(&m).unwrap();
        prop_assert!(eig.eigenvectors.unitarity_defect() <= 1e-10);
        let rebuilt = eig.map_spectrum(|l| Complex64::new(l, 0.0));
        prop_assert!(rebuilt.max_abs_diff(&m) <= 1e-9);
    }

    #[test]
    fn unitary_composition_holds(seed in any::<u64>(), t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let mut rng = rng_from(seed);
        let h = random_hermitian(8, &mut rng);
        let u1 = unitary_from_hamiltonian(&h, t1).unwrap();
        let u2 = unitary_from_hamiltonian(&h, t2).unwrap();
        let u12 = unitary_from_hamiltonian(&h, t1 + t2).unwrap();
        prop_assert!((&u1 * &u2).max_abs_diff(&u12) <= 1e-9);
    }

    #[test]
    fn partial_trace_routes_agree_and_are_linear(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let r1 = random_density_operator(4, &mut rng);
        let r2 = random_density_operator(4, &mut rng);
        for keep in [&[1usize, 2][..], &[2, 4][..], &[3][..]] {
            let a = partial_trace(&r1, keep).unwrap();
            let b = partial_trace_projector(&r1, keep).unwrap();
            prop_assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-12);
        }
        // linearity of the marginal map
        let (alpha, beta) = (0.25, 0.75);
        let mix = DensityOperator::new(
            &r1.matrix().scaled_real(alpha) + &r2.matrix().scaled_real(beta),
            4,
        )
        .unwrap();
        let left = partial_trace(&mix, &[1, 3]).unwrap();
        let pt1 = partial_trace(&r1, &[1, 3]).unwrap();
        let pt2 = partial_trace(&r2, &[1, 3]).unwrap();
        let right = &pt1.matrix().scaled_real(alpha) + &pt2.matrix().scaled_real(beta);
        prop_assert!(left.matrix().max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn entropy_respects_qubit_bounds(seed in any::<u64>(), qubits in 1usize..=4) {
        let mut rng = rng_from(seed);
        let rho = random_density_operator(qubits, &mut rng);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= qubits as f64 + 1e-9);
    }

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let rho = random_density_operator(2, &mut rng);
        for axis in PauliAxis::ALL {
            for party in [MeasuredParty::First, MeasuredParty::Second] {
                let once = post_measurement_state_on(&rho, axis, party).unwrap();
                let twice = post_measurement_state_on(&once, axis, party).unwrap();
                prop_assert!(twice.matrix().max_abs_diff(once.matrix()) <= 1e-12);
            }
        }
    }

    #[test]
    fn steering_breakdown_respects_bounds(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let rho = random_density_operator(2, &mut rng);
        let breakdown = steering_parameter(&rho).unwrap();
        for axis in PauliAxis::ALL {
            let h = breakdown.per_axis(axis);
            prop_assert!(h >= -1e-9 && h <= 1.0 + 1e-9);
        }
        prop_assert!(breakdown.total >= -1e-9 && breakdown.total <= 3.0 + 1e-9);
        prop_assert!((breakdown.total - (breakdown.h_x + breakdown.h_y + breakdown.h_z)).abs() <= 1e-12);
        // the spectral route computes the same conditional entropies
        for axis in PauliAxis::ALL {
            let spectral =
                conditional_entropy_via_spectra(&rho, axis, MeasuredParty::First).unwrap();
            prop_assert!((breakdown.per_axis(axis) - spectral).abs() <= 1e-10);
        }
    }

    #[test]
    fn negativity_is_a_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let rho = random_density_operator(2, &mut rng);
        let u = random_single_qubit_unitary(&mut rng);
        let v = random_single_qubit_unitary(&mut rng);
        let local = u.kron(&v);
        let rotated = DensityOperator::new(&(&local * rho.matrix()) * &local.adjoint(), 2).unwrap();
        prop_assert!((negativity(&rho).unwrap() - negativity(&rotated).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn evolved_channels_are_valid_and_periodic(dx in 0.05f64..1.0, t in 0.0f64..20.0) {
        let evolution = NetworkEvolution::new(&DmVector::x(dx));
        let period = std::f64::consts::PI / dx;
        for pair in NodePair::all() {
            let a = evolution.channel(pair, t);
            prop_assert!((a.trace_real() - 1.0).abs() <= 1e-10);
            prop_assert!(a.min_eigenvalue() >= -1e-9);
            let b = evolution.channel(pair, t + period);
            prop_assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn serialization_round_trips_arbitrary_finite_records(
        dx in proptest::num::f64::POSITIVE | proptest::num::f64::ZERO,
        t in proptest::num::f64::POSITIVE | proptest::num::f64::ZERO,
        h in proptest::collection::vec(-1.0f64..2.0, 3),
        negativity in 0.0f64..1.0,
        steerable in any::<bool>(),
    ) {
        let record = SweepRecord {
            pair: NodePair::new(1, 4).unwrap(),
            dx,
            t,
            h_x: h[0],
            h_y: h[1],
            h_z: h[2],
            i_s: h[0] + h[1] + h[2],
            negativity,
            steerable,
        };
        for format in [OutputFormat::Csv, OutputFormat::Jsonl] {
            let mut buffer = Vec::new();
            write_records(&mut buffer, &[record], format, None).unwrap();
            let parsed = parse_records(&buffer[..], format).unwrap();
            prop_assert_eq!(parsed.len(), 1);
            let p = parsed[0];
            prop_assert_eq!(p.dx.to_bits(), record.dx.to_bits());
            prop_assert_eq!(p.t.to_bits(), record.t.to_bits());
            prop_assert_eq!(p.h_x.to_bits(), record.h_x.to_bits());
            prop_assert_eq!(p.i_s.to_bits(), record.i_s.to_bits());
            prop_assert_eq!(p.negativity.to_bits(), record.negativity.to_bits());
            prop_assert_eq!(p.steerable, record.steerable);
        }
    }

    #[test]
    fn steerable_records_always_carry_entanglement(seed in any::<u64>(), dx in 0.03f64..0.5) {
        // Random short sweeps over the channel with real steering windows.
        let mut rng = rng_from(seed);
        use rand::Rng;
        let t_max = rng.gen_range(1.0..2.0) * std::f64::consts::PI / dx;
        let config = SweepConfig::new(vec![NodePair::new(1, 2).unwrap()], vec![dx], 0.0, t_max, 60);
        for record in dmnet_core::sweep::sweep_records(&config).unwrap() {
            if record.steerable {
                prop_assert!(record.negativity > 1e-9);
            }
        }
    }
}
