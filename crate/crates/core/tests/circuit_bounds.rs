use parity_scope::dispersive::{
    capacitance_inverse, capacitance_matrix, transmon_dispersive, LinePlacement, QubitCavityCoupling, TransmonSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn transmon_switch_always_exceeds_the_self_shifts() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 10_000 {
        let ec = rng.random_range(0.1..0.5);
        let spec = TransmonSpec::new(ec * rng.random_range(20.0..120.0), ec).unwrap();
        let delta = spec.levels().anharmonicity;
        // Equal signs of Δᵢ and Δᵢ+δ: either both above zero or both below.
        let detuning: [f64; 2] = std::array::from_fn(|_| {
            let d = rng.random_range(0.2..3.0);
            if rng.random_bool(0.5) { d } else { -d + delta }
        });
        let g = [rng.random_range(0.001..0.2), rng.random_range(0.001..0.2)];
        let Ok(m) = transmon_dispersive(&spec, &QubitCavityCoupling { g, detuning }) else {
            continue;
        };
        let p = m.chi[0] * m.chi[1] - m.switch * m.switch;
        assert!(p <= 1e-14 * m.switch * m.switch, "{g:?} {detuning:?}: {p:e}");
        checked += 1;
    }
}

fn line(ratio: f64, total_capacitance: f64) -> LinePlacement {
    let (length, per_length) = (10e-3, 1.6e-10);
    LinePlacement {
        length,
        position: 1.3e-3,
        coupling_capacitance: ratio * length * per_length,
        total_capacitance,
        capacitance_per_length: per_length,
        inductance_per_length: 4.0e-7,
        mode: 1,
        cutoff: 16,
    }
}

fn deviation(p: &LinePlacement) -> f64 {
    capacitance_inverse(&p.mode_capacitances(), p.line_capacitance(), p.total_capacitance).unwrap().mode_block_deviation
}

#[test]
fn weak_coupling_error_is_quadratic_in_coupling_capacitance() {
    let d: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&r| deviation(&line(r, 80e-15))).collect();
    for w in d.windows(2) {
        let order = (w[0] / w[1]).log10();
        assert!((order - 2.0).abs() < 0.02, "{d:?}");
    }
}

#[test]
fn weak_coupling_error_bound_with_comparable_capacitances() {
    let p = line(1e-3, 0.8e-12);
    let lc = p.line_capacitance();
    assert!(deviation(&p) * lc <= 1e-5, "{:e}", deviation(&p) * lc);
    // A small junction capacitance amplifies the dropped terms by Lc/C_Σ.
    let small = line(1e-3, 80e-15);
    assert!(deviation(&small) * lc > 1e-5);
}

#[test]
fn exact_inverse_holds_up_to_large_cutoffs() {
    for cutoff in [4usize, 16, 64] {
        let p = LinePlacement { cutoff, ..line(1e-2, 80e-15) };
        let caps = p.mode_capacitances();
        let inv = capacitance_inverse(&caps, p.line_capacitance(), p.total_capacitance).unwrap();
        let product = capacitance_matrix(&caps, p.line_capacitance(), p.total_capacitance) * &inv.exact;
        let err = (product - nalgebra::DMatrix::identity(cutoff + 2, cutoff + 2)).amax();
        assert!(err < 1e-10, "cutoff {cutoff}: {err:e}");
    }
}
