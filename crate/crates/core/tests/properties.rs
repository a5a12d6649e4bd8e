use dicke_core::invariants::{d_l, d_l_exact, d_range, homogeneous_scale, i_star, tau, tau_degree};
use dicke_core::slocc::{apply_local, ghz_orbit_state, random_ilo, w_orbit_state};
use dicke_core::statekit::{
    binomial, complement, dicke_state, partial_trace, permute_qubits, DickeSpec, ExactState,
    StateVector,
};
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

fn state(n: usize, raw: &[(f64, f64)]) -> StateVector {
    let amps = raw[..1 << n]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
    StateVector::new(n, amps).unwrap()
}

fn random_state(max_n: usize) -> impl Strategy<Value = StateVector> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
            .prop_filter("non-zero", |v| {
                v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
            })
            .prop_map(move |v| state(n, &v).normalized().unwrap())
    })
}

fn dicke_pair() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=10).prop_flat_map(|n| (Just(n), 1..n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dicke_is_permutation_invariant((n, l) in dicke_pair(), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let s = dicke_state(DickeSpec::new(n, l).unwrap());
        prop_assert_eq!(permute_qubits(&s, &perm).unwrap(), s);
    }

    #[test]
    fn complement_maps_l_to_n_minus_l((n, l) in dicke_pair()) {
        let s = dicke_state(DickeSpec::new(n, l).unwrap());
        let flipped = complement(&s);
        prop_assert_eq!(&flipped, &dicke_state(DickeSpec::new(n, n - l).unwrap()));
        prop_assert_eq!(complement(&flipped), s);
    }

    #[test]
    fn partial_trace_is_a_density_matrix(s in random_state(6), pick in any::<u64>()) {
        let n = s.n();
        let keep: Vec<usize> = (1..=n).filter(|q| pick >> q & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        // Construction validates Hermiticity, unit trace and positivity.
        let rho = partial_trace(&s, &keep).unwrap();
        prop_assert_eq!(rho.qubits(), keep.len());
    }

    #[test]
    fn full_keep_is_the_projector(s in random_state(5)) {
        let keep: Vec<usize> = (1..=s.n()).collect();
        let rho = partial_trace(&s, &keep).unwrap();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let want = s.amplitude(i) * s.amplitude(j).conj();
                prop_assert!((rho.get(i, j) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn tau_ignores_global_phase(s in random_state(7), phase in 0.0f64..std::f64::consts::TAU) {
        let rotated = s.scaled(Complex64::from_polar(1.0, phase));
        prop_assert!((tau(&rotated) - tau(&s)).abs() < 1e-12);
    }

    #[test]
    fn tau_is_homogeneous(s in random_state(7), c in 0.2f64..3.0) {
        let scaled = s.scaled(Complex64::new(c, 0.0));
        let factor = c.powi(tau_degree(s.n()) as i32);
        prop_assert!((tau(&scaled) - factor * tau(&s)).abs() < 1e-10 * factor.max(1.0));
        prop_assert!((homogeneous_scale(&scaled, 2) - c * c).abs() < 1e-12 * c * c);
    }

    #[test]
    fn even_tau_is_twice_the_pairing(s in random_state(8)) {
        prop_assume!(s.n() % 2 == 0);
        let pairing = i_star(&s, s.n(), 0).unwrap();
        prop_assert!((2.0 * pairing.norm() - tau(&s)).abs() < 1e-12);
    }

    #[test]
    fn chains_compose(s in random_state(6), a in any::<u64>(), b in any::<u64>()) {
        let (f, g) = (random_ilo(s.n(), a), random_ilo(s.n(), b));
        let two_step = apply_local(&apply_local(&s, &f).unwrap(), &g).unwrap();
        let composed = apply_local(&s, &f.then(&g).unwrap()).unwrap();
        let scale = two_step.norm_sqr().sqrt().max(1.0);
        prop_assert!(two_step.max_abs_diff(&composed) <= 1e-12 * scale);
    }

    #[test]
    fn orbit_paths_agree(n in 2usize..=8, seed in any::<u64>()) {
        let chain = random_ilo(n, seed);
        let via_apply = apply_local(&dicke_core::statekit::ghz_state(n).unwrap(), &chain).unwrap();
        prop_assert!(via_apply.max_abs_diff(&ghz_orbit_state(&chain).unwrap()) < 1e-12);
        let via_apply = apply_local(&dicke_core::statekit::w_state(n).unwrap(), &chain).unwrap();
        prop_assert!(via_apply.max_abs_diff(&w_orbit_state(&chain).unwrap()) < 1e-12);
    }

    #[test]
    fn d_is_homogeneous_of_degree_four(s in random_state(8), c in 0.2f64..3.0) {
        let scaled = s.scaled(Complex64::new(c, 0.0));
        for l in d_range(s.n()) {
            let (a, b) = (d_l(&scaled, l).unwrap(), d_l(&s, l).unwrap() * c.powi(4));
            prop_assert!((a - b).norm() < 1e-10 * c.powi(4).max(1.0));
        }
    }
}

#[test]
fn exact_diagonal_of_d() {
    for n in 4..=16 {
        for l in d_range(n) {
            let spec = DickeSpec::new(n, l).unwrap();
            let c = binomial(n as u64, l as u64) as i128;
            let value = d_l_exact(&ExactState::dicke(spec), l).unwrap();
            assert_eq!(value, Ratio::new(-1, c * c), "n={n} l={l}");
        }
    }
}

#[test]
fn state_file_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let s = state(
        3,
        &[
            (0.1, -0.2),
            (0.3, 0.0),
            (0.0, 0.0),
            (1e-300, 5.0),
            (0.7, 0.7),
            (-1.0, 0.0),
            (0.0, 1.0),
            (2.5e-17, 0.0),
        ],
    );
    dicke_core::statekit::store_state(&path, &s).unwrap();
    let back = dicke_core::statekit::load_state(&path).unwrap();
    for (a, b) in s.amplitudes().iter().zip(back.amplitudes()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
