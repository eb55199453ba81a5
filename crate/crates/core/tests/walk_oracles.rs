//! Random-walk ensembles against `E[R^2] = N l^2`.

use comptonlab_core::randomwalk::{self, Dim, WalkSpec};
use comptonlab_core::stats::Moments;
use proptest::prelude::*;

fn spec(dim: Dim, steps: u64, step_length: f64, walkers: u64, seed: u64) -> WalkSpec {
    WalkSpec {
        steps,
        step_length,
        dim,
        walkers,
        seed,
    }
}

#[test]
fn planar_rms_matches_sqrt_n() {
    let s = spec(Dim::Two, 25, 1.0, 100_000, 11);
    let r = randomwalk::estimate_rms(&s).unwrap();
    assert!(
        (r.rms_displacement / 5.0 - 1.0).abs() < 0.02,
        "{}",
        r.rms_displacement
    );
}

#[test]
fn zero_steps_stay_at_origin() {
    for dim in [Dim::One, Dim::Two, Dim::Three] {
        let s = spec(dim, 0, 2.0, 10, 7);
        for i in 0..10 {
            assert_eq!(randomwalk::simulate_walk(&s, i).unwrap(), [0.0; 3]);
        }
        let r = randomwalk::estimate_rms(&s).unwrap();
        assert_eq!(r.rms_displacement, 0.0);
    }
}

#[test]
fn step_length_scales_displacement() {
    let a = spec(Dim::Three, 40, 1.0, 200, 3);
    let b = WalkSpec {
        step_length: 2.5e-13,
        ..a
    };
    for i in 0..200 {
        let x = randomwalk::simulate_walk(&a, i).unwrap();
        let y = randomwalk::simulate_walk(&b, i).unwrap();
        for d in 0..3 {
            assert!((y[d] - 2.5e-13 * x[d]).abs() <= 1e-12 * 2.5e-13 * 40.0);
        }
    }
}

fn dims() -> impl Strategy<Value = Dim> {
    prop_oneof![Just(Dim::One), Just(Dim::Two), Just(Dim::Three)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mean_square_within_five_standard_errors(
        dim in dims(),
        steps in 1u64..=10_000,
        l in 0.1f64..10.0,
        seed in any::<u64>(),
    ) {
        let walkers = (400_000 / steps).clamp(200, 4_000);
        let s = spec(dim, steps, l, walkers, seed);
        let r2: Moments = (0..walkers)
            .map(|i| randomwalk::squared_norm(&randomwalk::simulate_walk(&s, i).unwrap()))
            .collect();
        let expected = steps as f64 * l * l;
        let se = r2.stderr().unwrap();
        // One-dimensional single steps have zero variance.
        prop_assert!((r2.mean() - expected).abs() <= 5.0 * se + 1e-9 * expected,
            "mean {} expected {} se {}", r2.mean(), expected, se);
    }

    #[test]
    fn isotropy(dim in dims(), steps in 1u64..=2_000, seed in any::<u64>()) {
        let s = spec(dim, steps, 1.0, 1_000, seed);
        let d: Vec<_> = (0..s.walkers).map(|i| randomwalk::simulate_walk(&s, i).unwrap()).collect();
        for axis in 0..dim.get() {
            let m: Moments = d.iter().map(|v| v[axis]).collect();
            let se = m.stderr().unwrap();
            prop_assert!(m.mean().abs() <= 5.0 * se, "axis {} mean {} se {}", axis, m.mean(), se);
        }
        for v in &d {
            prop_assert!(v[dim.get()..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn fixed_seed_is_bit_reproducible(dim in dims(), steps in 0u64..500, seed in any::<u64>()) {
        let s = spec(dim, steps, 1.0, 50, seed);
        prop_assert_eq!(randomwalk::estimate_rms(&s).unwrap(), randomwalk::estimate_rms(&s).unwrap());
    }
}
