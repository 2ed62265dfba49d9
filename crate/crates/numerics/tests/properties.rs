use proptest::prelude::*;
use rcf_numerics::{e_of, e_of_rational, BigComplex, BigReal};

fn rat(n: i64, d: i64, prec: usize) -> BigReal {
    BigReal::from_ratio(&n.into(), &d.into(), prec)
}

fn z_of(rn: i64, rd: i64, im: i64, imd: i64, prec: usize) -> BigComplex {
    BigComplex::new(rat(rn, rd, prec), rat(im, imd, prec))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn e_of_times_e_of_negative_is_one(rn in -500i64..500, rd in 1i64..60, im in -40i64..40, imd in 1i64..9) {
        let p = 256;
        let z = z_of(rn, rd, im, imd, p);
        let a = e_of(&z, p).unwrap();
        let b = e_of(&(-&z), p).unwrap();
        let err = (&(&a * &b) - &BigComplex::one(p)).log2_abs();
        prop_assert!(err < 10.0 - p as f64, "err 2^{err}");
    }

    #[test]
    fn e_of_is_one_periodic(rn in -500i64..500, rd in 1i64..60, im in -40i64..40, imd in 1i64..9) {
        let p = 256;
        let z = z_of(rn, rd, im, imd, p);
        let shifted = &z + &BigComplex::one(p);
        let a = e_of(&z, p).unwrap();
        let b = e_of(&shifted, p).unwrap();
        let rel = (&a - &b).log2_abs() - a.log2_abs();
        prop_assert!(rel < 10.0 - p as f64, "rel 2^{rel}");
    }

    #[test]
    fn e_of_stable_under_precision_doubling(rn in -50i64..50, rd in 1i64..60, im in 0i64..30, imd in 1i64..9) {
        let lo = e_of(&z_of(rn, rd, im, imd, 192), 192).unwrap();
        let hi = e_of(&z_of(rn, rd, im, imd, 384), 384).unwrap();
        let rel = (&lo - &hi).log2_abs() - hi.log2_abs();
        prop_assert!(rel < 8.0 - 192.0, "rel 2^{rel}");
    }

    #[test]
    fn rational_entry_point_agrees(rn in -500i64..500, rd in 1i64..60, im in 0i64..30) {
        let p = 200;
        let y = BigReal::from_i64(im, p);
        let a = e_of_rational(rn as i128, rd as i128, &y, p).unwrap();
        let b = e_of(&BigComplex::new(rat(rn, rd, p + 32), y.clone()), p).unwrap();
        let rel = (&a - &b).log2_abs() - a.log2_abs();
        prop_assert!(rel < 10.0 - p as f64);
    }

    #[test]
    fn pow_int_matches_repeated_product(re in -20i64..20, im in -20i64..20, k in 0u64..40) {
        let p = 256;
        let z = BigComplex::from_i64(re, im, p);
        let mut acc = BigComplex::one(p);
        for _ in 0..k {
            acc = &acc * &z;
        }
        // small Gaussian integers: every intermediate fits in 256 bits, so both are exact
        prop_assert_eq!(z.pow_int(k).unwrap(), acc);
    }

    #[test]
    fn arithmetic_tracks_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let p = 128;
        let (x, y) = (BigReal::from_f64(a, p), BigReal::from_f64(b, p));
        let close = |u: &BigReal, v: f64| (u.to_f64() - v).abs() <= 1e-12 * v.abs().max(1.0);
        prop_assert!(close(&(&x + &y), a + b));
        prop_assert!(close(&(&x - &y), a - b));
        prop_assert!(close(&(&x * &y), a * b));
        if b != 0.0 {
            prop_assert!(close(&(&x / &y), a / b));
        }
    }

    #[test]
    fn decimal_round_trip(m in 1_000_000u64..9_999_999, e in -20000i64..20000) {
        let s = format!("{}.{}e{}", m / 1_000_000, &m.to_string()[1..], e);
        let x = BigReal::from_decimal_str(&s, 128).unwrap();
        prop_assert_eq!(x.to_sci(7), s);
    }
}

#[test]
fn wide_exponent_range() {
    let p = 128;
    let tiny = BigReal::from_decimal_str("1e-10000000", p).unwrap();
    let huge = BigReal::from_decimal_str("1e10000000", p).unwrap();
    assert_eq!(tiny.to_sci(3), "1.00e-10000000");
    assert_eq!((&tiny * &huge).to_sci(5), "1.0000e0");
    let sq = &huge * &huge;
    assert_eq!(sq.to_sci(2), "1.0e20000000");
}

#[test]
fn overflow_is_reported() {
    let p = 64;
    let big = BigComplex::from_real(BigReal::from_i64(2, p).mul_pow2(1 << 40));
    assert!(big.pow_int(1 << 30).is_err());
}
