use proptest::prelude::*;

use skewbeta::bsn::{bsn_cdf, bsn_pdf, bsn_quantile, BsnParams};
use skewbeta::handle::DistributionHandle;
use skewbeta::sn::{std_cdf, std_pdf};
use skewbeta::special::{inv_reg_inc_beta, norm_cdf, owen_t, reg_inc_beta};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn owen_t_symmetries(h in -6.0f64..6.0, a in -20.0f64..20.0) {
        let t = owen_t(h, a);
        prop_assert!((owen_t(-h, a) - t).abs() < 1e-15);
        prop_assert!((owen_t(h, -a) + t).abs() < 1e-15);
        prop_assert!(t.abs() <= 0.25 + 1e-15);
    }

    #[test]
    fn skew_normal_cdf_reflection(z in -8.0f64..8.0, lambda in -10.0f64..10.0) {
        prop_assert!((std_cdf(-z, -lambda) - (1.0 - std_cdf(z, lambda))).abs() < 1e-14);
        prop_assert!((std_pdf(-z, -lambda) - std_pdf(z, lambda)).abs() < 1e-15);
    }

    #[test]
    fn skew_normal_pair_sums_to_twice_normal(z in -8.0f64..8.0, lambda in -10.0f64..10.0) {
        prop_assert!((std_cdf(z, lambda) + std_cdf(z, -lambda) - 2.0 * norm_cdf(z)).abs() < 1e-14);
    }

    #[test]
    fn incomplete_beta_roundtrip(y in 0.001f64..0.999, a in 0.2f64..20.0, b in 0.2f64..20.0) {
        let p = reg_inc_beta(y, a, b).unwrap();
        prop_assume!(p > 1e-12 && p < 1.0 - 1e-12);
        let back = inv_reg_inc_beta(p, a, b).unwrap();
        prop_assert!((reg_inc_beta(back, a, b).unwrap() - p).abs() < 1e-12);
        prop_assert!((reg_inc_beta(1.0 - y, b, a).unwrap() - (1.0 - p)).abs() < 1e-13);
    }

    #[test]
    fn bsn_reflection(x in -6.0f64..6.0, lambda in -5.0f64..5.0, a in 0.3f64..8.0, b in 0.3f64..8.0) {
        let p = BsnParams::standard(lambda, a, b).unwrap();
        let r = p.reflected();
        prop_assert!((bsn_pdf(&p, x) - bsn_pdf(&r, -x)).abs() < 1e-12);
        prop_assert!((bsn_cdf(&p, x) - (1.0 - bsn_cdf(&r, -x))).abs() < 1e-12);
    }

    #[test]
    fn bsn_quantile_roundtrip(u in 0.001f64..0.999, lambda in -5.0f64..5.0, a in 0.3f64..8.0, b in 0.3f64..8.0) {
        let p = BsnParams::standard(lambda, a, b).unwrap();
        let x = bsn_quantile(&p, u).unwrap();
        prop_assert!((bsn_cdf(&p, x) - u).abs() < 1e-10);
    }

    #[test]
    fn handle_cdf_monotone(lambda in -5.0f64..5.0, a in 0.5f64..5.0, b in 0.5f64..5.0, x in -4.0f64..4.0, dx in 0.0f64..1.0) {
        let h = DistributionHandle::bsn(BsnParams::standard(lambda, a, b).unwrap()).unwrap();
        prop_assert!(h.cdf(x).unwrap() <= h.cdf(x + dx).unwrap() + 1e-15);
        prop_assert!(h.pdf(x) >= 0.0);
    }
}
