use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use blues_core::algebra::{int, ratio, Exponomial, Field, ParamPoly, ParamSpace};
use blues_core::model::{blues_t, pde_residual, residual_operator, vim_t, ProblemConfig};
use blues_core::quadrature;
use blues_core::verify::sample;

fn space() -> ParamSpace {
    ParamSpace::new(["p", "q"]).unwrap()
}

fn fields(seed: u64) -> (Field, Field, Field) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = space();
    (sample::field(&mut rng, &s), sample::field(&mut rng, &s), sample::field(&mut rng, &s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_ring_laws(seed in any::<u64>()) {
        let (u, v, w) = fields(seed);
        prop_assert_eq!(&u + &v, &v + &u);
        prop_assert_eq!(&u * &v, &v * &u);
        prop_assert_eq!(&(&u + &v) + &w, &u + &(&v + &w));
        prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
        prop_assert_eq!(&u * &(&v + &w), &(&u * &v) + &(&u * &w));
        prop_assert!((&u - &u).is_zero());
    }

    #[test]
    fn exponomial_unit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = space();
        let f = sample::exponomial(&mut rng, &s);
        prop_assert_eq!(&f * &Exponomial::one(&s), f.clone());
        prop_assert_eq!(&f + &Exponomial::zero(&s), f);
    }

    #[test]
    fn derivative_inverts_integral(seed in any::<u64>()) {
        let (f, _, _) = fields(seed);
        prop_assert_eq!(f.integrate_0t().diff_t(), f.clone());
        prop_assert!(f.integrate_0t().at_t0().is_zero());
    }

    #[test]
    fn convolution_identity(seed in any::<u64>(), a in prop_oneof![Just(int(2)), Just(int(3)), Just(ratio(1, 2)), Just(int(-1))]) {
        let (f, _, _) = fields(seed);
        let g = f.convolve_green(&a);
        prop_assert_eq!(&g.diff_t() + &g.scale_rational(&a), f);
        prop_assert!(g.at_t0().is_zero());
    }

    #[test]
    fn substitution_commutes(seed in any::<u64>()) {
        let (f, g, _) = fields(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let b = sample::bindings(&mut rng, &space());
        let sub = |h: &Field| h.substitute_params(&b).unwrap();
        prop_assert_eq!(sub(&(&f * &g)), &sub(&f) * &sub(&g));
        prop_assert_eq!(sub(&(&f + &g)), &sub(&f) + &sub(&g));
        prop_assert_eq!(sub(&f.integrate_0t()), sub(&f).integrate_0t());
        prop_assert_eq!(sub(&f.convolve_green(&int(2))), sub(&f).convolve_green(&int(2)));
        let cfg = ProblemConfig::default();
        prop_assert_eq!(sub(&vim_t(&f, &cfg)), vim_t(&sub(&f), &cfg));
        prop_assert_eq!(sub(&blues_t(&f, &cfg)), blues_t(&sub(&f), &cfg));
    }

    #[test]
    fn second_channel_cancels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = sample::single_channel(&mut rng, &space());
        let cfg = ProblemConfig::default();
        prop_assert_eq!(residual_operator(&u), u.diff_x().diff_x());
        prop_assert!(pde_residual(&u, &cfg).channel_keys().iter().all(|&k| k == 1));
    }

    #[test]
    fn integral_matches_quadrature(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample::field(&mut rng, &ParamSpace::empty());
        let big_f = f.integrate_0t();
        for t in [0.5, 1.0, 2.0] {
            let q = quadrature::integrate(|s| f.eval_f64(1.0, s).unwrap(), 0.0, t, 1e-13);
            let exact = big_f.eval_f64(1.0, t).unwrap();
            prop_assert!((exact - q.value).abs() <= 1e-10 * q.abs_value.max(exact.abs()), "t={} exact={} quad={}", t, exact, q.value);
        }
    }
}

#[test]
fn mismatched_spaces_are_rejected() {
    let f = Field::single(1, Exponomial::exp(&space(), int(0)));
    let g = Field::single(1, Exponomial::exp(&ParamSpace::empty(), int(0)));
    assert!(f.try_add(&g).is_err());
    assert!(f.try_mul(&g).is_err());
    let p = ParamPoly::var(&space(), "p").unwrap();
    assert!(f.scale(&p).substitute_params(&[("r".to_string(), int(1))].into()).is_err());
}
