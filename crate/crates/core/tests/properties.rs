use modata::galois::{multiplicativity_check, parity_decompose};
use modata::lambda::{phase_g, phase_g_centered};
use modata::modrep::{decompose, in_gamma, rep_evaluate, sample_gamma, Lcg, SL2ZMat};
use modata::modular_data::{builtin_model, mu_index, qdims, ModularData};
use modata::{rat, CycloNum, Rational};
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

const ORDERS: [u32; 10] = [1, 3, 4, 5, 8, 9, 12, 15, 20, 24];

fn element(order: u32) -> impl Strategy<Value = CycloNum> {
    prop::collection::vec((0..order as i64, -6i64..=6, 1i64..=3), 1..6).prop_map(move |terms| {
        let terms: Vec<(i64, Rational)> =
            terms.into_iter().map(|(j, p, q)| (j, rat(p, q))).collect();
        CycloNum::make(order, &terms)
    })
}

fn order_and_elements(k: usize) -> impl Strategy<Value = (u32, Vec<CycloNum>)> {
    prop::sample::select(ORDERS.to_vec())
        .prop_flat_map(move |m| (Just(m), prop::collection::vec(element(m), k)))
}

/// `Σ_{i<p} ζ_p^i = 0` written at order `m` for the smallest prime `p | m`.
fn zero_in_disguise(m: u32, scale: i64) -> Vec<(i64, Rational)> {
    let p = (2..=m).find(|p| m.is_multiple_of(*p)).unwrap_or(1);
    let step = (m / p) as i64;
    (0..p as i64).map(|i| (i * step, rat(scale, 1))).collect()
}

fn coprime_to(m: u32) -> impl Strategy<Value = i64> {
    (-60i64..60).prop_filter("coprime", move |l| l.gcd(&(m as i64)) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_coefficients(
        (m, terms) in prop::sample::select(ORDERS.to_vec()).prop_flat_map(|m| {
            (Just(m), prop::collection::vec((0..m as i64, -6i64..=6), 1..6))
        }),
        scale in 1i64..4,
    ) {
        prop_assume!(m > 1);
        let terms: Vec<(i64, Rational)> = terms.into_iter().map(|(j, c)| (j, rat(c, 1))).collect();
        let a = CycloNum::make(m, &terms);
        let mut disguised = terms.clone();
        disguised.extend(zero_in_disguise(m, scale));
        let b = CycloNum::make(m, &disguised);
        prop_assert_eq!(a.coeffs(), b.coeffs());
        prop_assert_eq!(&a, &b);
        let c = &a + &CycloNum::from_int(1);
        prop_assert_ne!(a.coeffs(), c.coeffs());
        prop_assert_ne!(a, c);
    }

    #[test]
    fn ring_laws((_, v) in order_and_elements(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a + b, b + a);
        prop_assert!((a - a).is_zero());
    }

    #[test]
    fn mixed_orders_commute(a in element(8), b in element(12)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(24 % (&a + &b).minimal_order(), 0);
    }

    #[test]
    fn galois_is_multiplicative(
        (_m, v, l, k) in prop::sample::select(ORDERS.to_vec()).prop_flat_map(|m| {
            (Just(m), prop::collection::vec(element(m), 2), coprime_to(m), coprime_to(m))
        })
    ) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!((a * b).galois(l).unwrap(), &a.galois(l).unwrap() * &b.galois(l).unwrap());
        prop_assert_eq!((a + b).galois(l).unwrap(), &a.galois(l).unwrap() + &b.galois(l).unwrap());
        prop_assert_eq!(a.galois(l * k).unwrap(), a.galois(k).unwrap().galois(l).unwrap());
        prop_assert_eq!(a.galois(-1).unwrap(), a.conj());
    }

    #[test]
    fn sqrt_squares_back(p in 0i64..80, q in 1i64..16) {
        let r = rat(p, q);
        let s = CycloNum::sqrt_nonneg_rational(&r).unwrap();
        prop_assert_eq!(&s * &s, CycloNum::from_rational(&r));
        let z = s.embed_complex();
        prop_assert!(z.re >= -1e-10);
        prop_assert!(z.im.abs() < 1e-10);
    }

    #[test]
    fn coerce_round_trip((m, v) in order_and_elements(1), k in 1u32..5) {
        let a = &v[0];
        let up = a.coerce(m * k).unwrap();
        prop_assert_eq!(up.order(), m * k);
        prop_assert_eq!(up.minimal_order(), a.minimal_order());
        let down = up.coerce(m).unwrap();
        prop_assert_eq!(down.coeffs(), a.coeffs());
        let min = a.minimal_order();
        prop_assert_eq!(m % min, 0);
        prop_assert_eq!(&a.coerce(min).unwrap(), a);
    }

    #[test]
    fn inverse_is_two_sided((_, v) in order_and_elements(1)) {
        let a = &v[0];
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        prop_assert!((a * &inv).is_one());
    }

    #[test]
    fn phase_g_paths_agree(k in -40i64..40, n in 1i64..40, x in -3i64..3) {
        let c0 = rat(1, 1);
        let c = &c0 + rat(4 * x, 1);
        let r = rat(k, n);
        prop_assert_eq!(phase_g(&c, &c0, &r).unwrap(), phase_g_centered(&c, &c0, &r).unwrap());
    }

    #[test]
    fn decompose_round_trip(a in -1_000_000i64..1_000_000, e in -1_000_000i64..1_000_000, t in -1000i64..1000) {
        let m = complete(a, e, t);
        prop_assume!(m.is_some());
        let m = m.unwrap();
        prop_assert_eq!(decompose(&m).evaluate(), m);
    }
}

/// A matrix with first column `(a, e)` when that column is primitive.
fn complete(a: i64, e: i64, t: i64) -> Option<SL2ZMat> {
    let g = a.extended_gcd(&e);
    if g.gcd.abs() != 1 {
        return None;
    }
    let (x, y) = (g.x * g.gcd, g.y * g.gcd);
    // a·x + e·y = 1
    let (b, d) = (-y + t * a, x + t * e);
    SL2ZMat::new(a, b, e, d)
}

#[test]
fn decompose_thousand_samples() {
    let mut rng = Lcg::new(99);
    let mut done = 0;
    while done < 1000 {
        let a = rng.range(-1_000_000, 1_000_000);
        let e = rng.range(-1_000_000, 1_000_000);
        let t = rng.range(-1000, 1000);
        if let Some(m) = complete(a, e, t) {
            assert_eq!(decompose(&m).evaluate(), m);
            done += 1;
        }
    }
}

fn models(range: std::ops::RangeInclusive<u32>) -> Vec<ModularData> {
    range
        .map(|k| builtin_model(&format!("su2:{k}")).unwrap())
        .collect()
}

#[test]
fn representation_is_multiplicative() {
    let mut rng = Lcg::new(5);
    for md in models(1..=2) {
        for _ in 0..50 {
            let m1 = modata::modrep::sample_sl2z(30, &mut rng);
            let m2 = modata::modrep::sample_sl2z(30, &mut rng);
            let lhs = rep_evaluate(&md, &m1.mul(&m2));
            let rhs = rep_evaluate(&md, &m1).mul(&rep_evaluate(&md, &m2));
            assert_eq!(lhs, rhs, "{} {m1} {m2}", md.name());
        }
        let n = md.t_order();
        assert!(rep_evaluate(&md, &SL2ZMat::t_pow(n as i64)).is_identity());
    }
}

#[test]
fn gamma_samples_lie_in_gamma() {
    let mut rng = Lcg::new(17);
    for n in [2, 16, 24] {
        for _ in 0..100 {
            assert!(in_gamma(n, &sample_gamma(n, &mut rng)));
        }
    }
}

#[test]
fn fusion_is_associative() {
    for md in models(1..=4) {
        let r = md.rank();
        for l in 0..r {
            for m in 0..r {
                for n in 0..r {
                    for p in 0..r {
                        let lhs: u64 = (0..r)
                            .map(|x| md.fusion(l, m, x) * md.fusion(x, n, p))
                            .sum();
                        let rhs: u64 = (0..r)
                            .map(|y| md.fusion(m, n, y) * md.fusion(l, y, p))
                            .sum();
                        assert_eq!(lhs, rhs, "{} ({l},{m},{n},{p})", md.name());
                    }
                }
            }
        }
    }
}

#[test]
fn qdims_are_fusion_eigenvectors() {
    for md in models(1..=6) {
        let d = qdims(&md);
        for l in 0..md.rank() {
            let nl = md.fusion_matrix(l);
            // N_λ·d = d(λ)·d
            for i in 0..md.rank() {
                let lhs: CycloNum = (0..md.rank()).map(|j| nl.get(i, j) * &d[j]).sum();
                assert_eq!(lhs, &d[l] * &d[i], "{} l={l} i={i}", md.name());
            }
        }
    }
}

#[test]
fn mu_index_numeric() {
    for (k, md) in (1..=8).zip(models(1..=8)) {
        let x = std::f64::consts::PI / (k as f64 + 2.0);
        let expect = (k as f64 + 2.0) / (2.0 * x.sin().powi(2));
        let got = mu_index(&md).embed_complex();
        assert!(
            (got.re - expect).abs() < 1e-10 && got.im.abs() < 1e-10,
            "k={k}"
        );
    }
}

#[test]
fn galois_permutations_compose() {
    for md in models(1..=3) {
        let n = md.t_order() as i64;
        let ls: Vec<i64> = (1..n).filter(|l| l.gcd(&n) == 1).take(6).collect();
        for &l in &ls {
            let g = parity_decompose(&md, l).unwrap();
            let gm = g.to_matrix();
            assert!(gm.mul(&gm.transpose()).is_identity());
            for &m in &ls {
                let rep = multiplicativity_check(&md, l, m);
                assert!(rep.all_pass(), "{}", rep.failure_summary());
            }
        }
    }
}

#[test]
fn rational_phase_is_well_defined() {
    assert!(phase_g(&rat(1, 1), &rat(1, 1), &Rational::zero())
        .unwrap()
        .is_zero());
}
