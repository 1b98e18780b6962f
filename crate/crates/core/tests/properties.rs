use proptest::prelude::*;
use surreal_core::derivation::{derive_nf, dominated};
use surreal_core::oracle::{Sampler, SamplerConfig};
use surreal_core::series::{nf_agree, nf_div, nf_invert, nf_mul, nf_sub};
use surreal_core::{decode_sign, encode_sign, exp_nf, log_nf, natural_product, natural_sum, Dyadic, Nf, OrdinalCnf, SurrealNF};

fn sampler(seed: u64) -> Sampler {
    Sampler::new(SamplerConfig::with_seed(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_sequences_roundtrip(n in -4096i64..4096, k in 0u32..8) {
        let d = Dyadic::new(n, k);
        prop_assert_eq!(decode_sign(&encode_sign(&d)), d);
    }

    #[test]
    fn ring_laws(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (x, y, z) = (s.fragment(), s.fragment(), s.fragment());
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
    }

    #[test]
    fn order_is_compatible_with_addition(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (x, y, z) = (s.fragment(), s.fragment(), s.fragment());
        prop_assert_eq!(x.cmp(&y), (&x + &z).cmp(&(&y + &z)));
        prop_assert_eq!(x < y, (&y - &x).signum() > 0);
    }

    #[test]
    fn inverse_agrees_through_depth(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let x = SurrealNF::finite(s.fragment());
        let inv = nf_invert(&x, 10).unwrap();
        prop_assert!(nf_agree(&nf_mul(&x, &inv), &SurrealNF::one(), 10).unwrap());
        let y = SurrealNF::finite(s.fragment());
        let q = nf_div(&nf_mul(&x, &y), &y, 10).unwrap();
        prop_assert!(nf_agree(&q, &x, 10).unwrap());
    }

    #[test]
    fn log_inverts_exp(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let x = SurrealNF::finite(s.constant_free());
        let back = log_nf(&exp_nf(&x, 8).unwrap(), 8).unwrap();
        prop_assert!(nf_agree(&back, &x, 8).unwrap());
    }

    #[test]
    fn leibniz_and_lhospital(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (x, y) = (s.non_unit(), s.non_unit());
        let (dx, dy) = (derive_nf(&x).unwrap(), derive_nf(&y).unwrap());
        prop_assert_eq!(derive_nf(&(&x * &y)).unwrap(), &(&x * &dy) + &(&y * &dx));
        prop_assert_eq!(dominated(&x, &y), dominated(&dx, &dy));
    }

    #[test]
    fn derivative_of_difference(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let (x, y) = (s.fragment(), s.fragment());
        let d = nf_sub(&SurrealNF::finite(derive_nf(&x).unwrap()), &SurrealNF::finite(derive_nf(&y).unwrap()));
        prop_assert_eq!(d.as_finite().unwrap(), &derive_nf(&(&x - &y)).unwrap());
    }

    #[test]
    fn natural_operations_commute(a in 0u64..50, b in 0u64..50, c in 0u64..5) {
        let x = natural_sum(&OrdinalCnf::omega(), &OrdinalCnf::from_natural(a));
        let y = natural_product(&OrdinalCnf::omega(), &OrdinalCnf::from_natural(b + 1));
        let z = OrdinalCnf::from_natural(c);
        prop_assert_eq!(natural_sum(&x, &y), natural_sum(&y, &x));
        prop_assert_eq!(natural_product(&x, &y), natural_product(&y, &x));
        prop_assert_eq!(natural_product(&x, &natural_sum(&y, &z)), natural_sum(&natural_product(&x, &y), &natural_product(&x, &z)));
        prop_assert_eq!(Nf::from_ordinal(&natural_sum(&x, &y)), &Nf::from_ordinal(&x) + &Nf::from_ordinal(&y));
    }
}
