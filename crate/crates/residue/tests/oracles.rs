use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rcf_fields::{is_squarefree, make_tower, unit_exponents, OkElement, QuadInt, TowerOptions};
use rcf_residue::brute::level_counts;
use rcf_residue::*;

fn odd_primes(limit: u64) -> Vec<u64> {
    (3..=limit).filter(|&p| rcf_fields::is_prime(p)).collect()
}

#[test]
fn unit_group_orders() {
    let u = unit_group_order(Order::Biquad { d1: 7, d2: 2 }, 5).unwrap();
    assert_eq!((u.order, u.enumerated), (576, Some(576)));
    let p = 37;
    let u = unit_group_order(Order::Biquad { d1: 15, d2: 26 }, p).unwrap();
    assert_eq!(u.order, (p + 1).pow(2) * (p - 1).pow(2));
    assert_eq!(unit_group_order(Order::Quadratic { radicand: 390 }, p).unwrap().order, (p + 1) * (p - 1));
    // composite and ramified moduli, each checked against enumeration
    for n in [3u64, 5, 7, 9, 13, 15, 21, 25, 35, 45, 49] {
        for (d1, d2) in [(7, 2), (15, 26), (31, 2), (11, 6), (35, 2)] {
            unit_group_order(Order::Biquad { d1, d2 }, n).unwrap();
        }
        for r in [-7, -15, -26, 14, 62, 390] {
            unit_group_order(Order::Quadratic { radicand: r }, n).unwrap();
        }
    }
}

#[test]
fn pell_examples() {
    assert_eq!(pell_count(14, 37).unwrap().order, 38);
    assert_eq!(pell_count(62, 5).unwrap().order, 6);
    // 4 is a square mod 7
    assert_eq!(pell_count(4 + 7, 7).unwrap().order, 6);
    let g = pell_count(62, 5).unwrap().generator;
    let mut acc = g;
    for _ in 1..6 {
        assert_ne!(acc, (1, 0));
        acc = pell_add(acc, g, 62, 5);
    }
    assert_eq!(acc, (1, 0));
}

#[test]
fn pell_suite() {
    for p in odd_primes(97) {
        for delta in 1..=100i64 {
            if !is_squarefree(delta as u64) || delta % p as i64 == 0 {
                continue;
            }
            let g = pell_count(delta, p).unwrap();
            assert_eq!(g.order as i64, p as i64 - legendre(delta, p), "Δ={delta} p={p}");
            let img = norm_map_image(Order::Quadratic { radicand: delta }, p).unwrap();
            assert_eq!(img.preimages.len() as u64, p - 1);
            assert_eq!(img.kernel, g.order, "Δ={delta} p={p}");
        }
    }
}

#[test]
fn norm_maps() {
    let img = norm_map_image(Order::Quadratic { radicand: 62 }, 5).unwrap();
    assert_eq!((img.kernel, img.preimages.len()), (6, 4));
    assert_eq!(img.preimages[0].0, 1);
    let p = 37;
    let img = norm_map_image(Order::Biquad { d1: 15, d2: 26 }, p).unwrap();
    assert_eq!(img.kernel, (p + 1).pow(2) * (p - 1));
    let ring = ResidueRing::new(p, 15, 26).unwrap();
    for (c, x) in &img.preimages {
        assert_eq!(ring.norm(RElt([x[0], x[1], x[2], x[3]])), *c);
    }
    assert!(matches!(norm_map_image(Order::Biquad { d1: 7, d2: 2 }, 13), Err(ResidueError::Hypothesis(_))));
}

#[test]
fn galois_generator_examples() {
    let t = make_tower(7, 2, TowerOptions::default()).unwrap();
    let g = galois_generators(&t, 1, 37, 0, 2).unwrap();
    assert_eq!(g.generators.len(), 1);
    assert_eq!((g.generators[0].residue, g.generators[0].order, g.order), ([3, 0, 12, 0], 19, 19));

    let t = make_tower(15, 26, TowerOptions::default()).unwrap();
    let g = galois_generators(&t, 5, 37, 0, 1).unwrap();
    let orders: Vec<u64> = g.generators.iter().map(|a| a.order).collect();
    assert_eq!((orders, g.modulus), (vec![2, 19], 185));
    // D^{-1}√-26 lifted to 111 + 45√-26, norm ≡ 36
    assert_eq!(g.generators[0].omega, OkElement::from_whole(111, 0, 45, 0));
    assert_eq!(g.generators[0].norm, QuadInt::new(0, 36));
    assert_eq!(g.generators[1].omega, OkElement::from_whole(151, 90, 0, 0));
    assert_eq!(g.generators[1].norm, QuadInt::new(155, 76));
    let g = galois_generators(&t, 5, 37, 0, 2).unwrap();
    assert_eq!(g.generators.iter().map(|a| a.order).collect::<Vec<_>>(), vec![2, 18]);

    let g = galois_generators(&t, 5, 37, 1, 1).unwrap();
    assert_eq!((g.modulus, g.order), (5 * 37 * 37, 37));
    assert_eq!(g.generators[0].omega, OkElement::from_whole(1, 185, 0, 0));
    // N(1 + 185√-15) = 1 + 185^2·15 = 20·37θ1 + 1 + 10·37 mod 5·37^2
    let m = BigInt::from(5 * 37 * 37);
    assert_eq!(g.generators[0].norm, QuadInt::new(20 * 37, 1 + 10 * 37).reduce(&m));

    let t = make_tower(31, 2, TowerOptions::default()).unwrap();
    assert!(matches!(galois_generators(&t, 1, 5, 1, 1), Err(ResidueError::Hypothesis(_))));
}

#[test]
fn hilbert_generator_norm() {
    let t = make_tower(31, 2, TowerOptions::default()).unwrap();
    let (c, w) = hilbert_generator(&t, 1, 5, 2).unwrap();
    assert_eq!(c, 2);
    let ring = ResidueRing::new(5, 31, 2).unwrap();
    assert_eq!(ring.norm(RElt(w.residue)), 2);
    // the printed choice has the same norm, hence the same automorphism of K~^3
    assert_eq!(ring.norm(ring.elt(1, 0, 3, 2)), 2);
    let printed = t.ring.norm_to_subfield(&OkElement::from_whole(1, 0, 3, 2), 2).reduce(&BigInt::from(5));
    assert_eq!(printed, QuadInt::new(1, 0));

    let t = make_tower(15, 26, TowerOptions::default()).unwrap();
    let (_, w) = hilbert_generator(&t, 5, 37, 1).unwrap();
    assert!(t.ring.sub(&w.omega, &OkElement::one()).divisible_by(&BigInt::from(5)));
}

#[test]
fn degree_examples() {
    let t = make_tower(15, 26, TowerOptions::default()).unwrap();
    let d = degree_table(&t, 5, 37, 0).unwrap();
    assert_eq!(d.case, "mu=0, N!=1, n0=p+1");
    assert_eq!(d.get("K_(185)", "K~^{1,2}"), Some(1));
    let d = degree_table(&t, 5, 37, 1).unwrap();
    assert_eq!(d.get("K_(6845)", "K~^{1,2}"), Some(1));
    assert_eq!(d.get("K~^{1}", "K~^{3}"), Some(37));
    let t = make_tower(7, 2, TowerOptions::default()).unwrap();
    let d = degree_table(&t, 1, 37, 0).unwrap();
    assert_eq!(d.case, "mu=0, N=1, n0=p+1");
    assert_eq!(d.get("(K3)_(37inf)", "(K3)_(37)"), Some(2));
    assert!(d.entries.iter().any(|e| e.from == "K~^{2,3}" && e.to == "K~^{2}"));
}

#[test]
fn level_orders_match_enumeration() {
    // (7,2) has μ0 = 1 at p = 5, (31,2) has μ0 = 3, (19,2) has μ0 = 2
    let p = 5;
    for (d1, d2, mus) in [(7, 2, [1u32, 2]), (31, 2, [1, 2]), (19, 2, [1, 2])] {
        let t = make_tower(d1, d2, TowerOptions { h3: Some(1), ..Default::default() }).unwrap();
        let mu0 = unit_exponents(&t, 1, p).unwrap().mu0;
        for mu in mus {
            let c = level_counts(&t, 1, p, mu, 400_000).unwrap();
            let tag = format!("({d1},{d2}) μ={mu} μ0={mu0}");
            assert_eq!(c.s_quotient, p.pow(4), "{tag}");
            assert_eq!(c.s_sub_quotient, [p * p; 3], "{tag}");
            assert_eq!(c.hs, if mu < mu0 { 1 } else { p }, "{tag}");
            let d = degree_table(&t, 1, p, mu).unwrap();
            let top = format!("K_({})", p.pow(mu + 1));
            assert_eq!(d.get(&top, &format!("K_({})", p.pow(mu))), Some(c.s_quotient / c.hs), "{tag}");
            for (node, key) in [("K~^{1}", "1"), ("K~^{2}", "2"), ("K~^{3}", "3"), ("K~^{1,2}", "1,2"), ("K~", "")] {
                assert_eq!(d.get(&top, node).unwrap() * c.hs, c.w[key], "{tag}: {node}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_matches_exact_arithmetic(
        x in prop::array::uniform4(-500i64..500),
        y in prop::array::uniform4(-500i64..500),
        n in prop::sample::select(vec![3u64, 5, 15, 37, 185, 6845]),
        (d1, d2) in prop::sample::select(vec![(15i64, 26i64), (7, 2), (31, 2)]),
    ) {
        let ring = ResidueRing::new(n, d1, d2).unwrap();
        let k = rcf_fields::Biquad::new(d1, d2);
        let (ex, ey) = (OkElement::from_whole(x[0], x[1], x[2], x[3]), OkElement::from_whole(y[0], y[1], y[2], y[3]));
        let (rx, ry) = (ring.elt(x[0], x[1], x[2], x[3]), ring.elt(y[0], y[1], y[2], y[3]));
        prop_assert_eq!(ring.mul(rx, ry), ring.from_ok(&k.mul(&ex, &ey)));
        let nm = k.norm(&ex).mod_floor(&BigInt::from(n));
        prop_assert_eq!(BigInt::from(ring.norm(rx)), nm);
        // N_{K/K_i} as s√r_i + t
        for i in 1..=3u8 {
            let e = k.embed(&k.norm_to_subfield(&ex, i), i);
            let (s, t) = ring.norm_to(rx, i);
            let want = ring.from_ok(&e);
            let got = match i {
                1 => ring.elt(t as i64, s as i64, 0, 0),
                2 => ring.elt(t as i64, 0, s as i64, 0),
                _ => ring.elt(t as i64, 0, 0, s as i64),
            };
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn sqrt_and_primitive_root(p in prop::sample::select(odd_primes(400)), a in 0i64..400) {
        match sqrt_mod(a, p) {
            Ok(r) => prop_assert_eq!((r * r) % p, a.rem_euclid(p as i64) as u64),
            Err(_) => prop_assert_eq!(legendre(a, p), -1),
        }
        let g = primitive_root(p).unwrap();
        prop_assert_eq!(order_mod(g, p), p - 1);
    }
}
