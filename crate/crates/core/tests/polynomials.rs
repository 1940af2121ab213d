use certjulia_core::orbit::{iterate_enclosure, IterateOutcome};
use certjulia_core::{
    derivative, eval_enclosure, iterate_map_poly, ComplexBox, Dyadic, DyadicComplex, Interval, PolynomialOracle,
};
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    coeffs_of_degree(1)
}

fn coeffs_of_degree(min: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-64i64..64, -64i64..64), min + 1..5).prop_map(|mut v| {
        let last = v.last_mut().unwrap();
        if last.0 == 0 && last.1 == 0 {
            last.0 = 1;
        }
        v
    })
}

/// Coefficients `(re + i im) / 16`.
fn oracle(c: &[(i64, i64)]) -> (PolynomialOracle, Vec<DyadicComplex>) {
    let exact: Vec<DyadicComplex> = c
        .iter()
        .map(|&(re, im)| DyadicComplex::new(Dyadic::from_parts(re, -4).unwrap(), Dyadic::from_parts(im, -4).unwrap()))
        .collect();
    (PolynomialOracle::from_exact(exact.clone()).unwrap(), exact)
}

fn horner(c: &[DyadicComplex], z: &DyadicComplex) -> DyadicComplex {
    let mut acc = DyadicComplex::zero();
    for a in c.iter().rev() {
        acc = &acc.checked_mul(z).unwrap() + a;
    }
    acc
}

fn small_box() -> impl Strategy<Value = ComplexBox> {
    (-2048i64..2048, -2048i64..2048, 0u32..8, 0u32..8).prop_map(|(x, y, wx, wy)| {
        let lo_re = Dyadic::from_parts(x, -10).unwrap();
        let lo_im = Dyadic::from_parts(y, -10).unwrap();
        let hi_re = &lo_re + &Dyadic::from_parts(1, -(wx as i64) - 3).unwrap();
        let hi_im = &lo_im + &Dyadic::from_parts(1, -(wy as i64) - 3).unwrap();
        ComplexBox::new(lo_re, hi_re, lo_im, hi_im).unwrap()
    })
}

fn sample(b: &ComplexBox, s: (u16, u16)) -> DyadicComplex {
    let f = |lo: &Dyadic, hi: &Dyadic, t: u16| lo + &(hi - lo).checked_mul(&Dyadic::from_parts(t as i64, -16).unwrap()).unwrap();
    DyadicComplex::new(f(b.re_lo(), b.re_hi(), s.0), f(b.im_lo(), b.im_hi(), s.1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn enclosure_contains_exact_values(c in coeffs(), x in small_box(), s in any::<(u16, u16)>(), prec in 16u32..96) {
        let (p, exact) = oracle(&c);
        let z = sample(&x, s);
        prop_assert!(eval_enclosure(&p, &x, prec).unwrap().contains_point(&horner(&exact, &z)));
    }

    #[test]
    fn quadrants_refine_parent(c in coeffs(), x in small_box(), prec in 16u32..96) {
        let (p, _) = oracle(&c);
        let parent = eval_enclosure(&p, &x, prec).unwrap();
        let mut hull: Option<ComplexBox> = None;
        for q in x.split4() {
            let e = eval_enclosure(&p, &q, prec).unwrap();
            hull = Some(match hull { Some(h) => h.hull(&e), None => e });
        }
        prop_assert!(parent.contains_box(&hull.unwrap()));
    }

    #[test]
    fn chain_rule_contains_iterate_derivative(c in coeffs(), x in small_box(), s in any::<(u16, u16)>(), n in 1u32..3) {
        let (p, _) = oracle(&c);
        let qn = derivative(&iterate_map_poly(&p, n).unwrap());
        let z = sample(&x, s);
        let exact = horner(&qn.exact_coefficients().unwrap(), &z);
        let pp = p.prepare(80).unwrap();
        let mut orbit = x.clone();
        let mut d = ComplexBox::one();
        for _ in 0..n {
            d = d.mul(&pp.eval_derivative(&orbit).unwrap()).unwrap();
            orbit = pp.eval(&orbit).unwrap();
        }
        prop_assert!(d.contains_point(&exact));
    }

    #[test]
    fn iterates_contain_orbits(c in coeffs_of_degree(2), x in small_box(), s in any::<(u16, u16)>(), k in 1u32..4) {
        let (p, exact) = oracle(&c);
        let mut z = sample(&x, s);
        match iterate_enclosure(&p, &x, k, 64).unwrap() {
            IterateOutcome::Enclosure(e) => {
                for _ in 0..k {
                    z = horner(&exact, &z);
                }
                prop_assert!(e.contains_point(&z));
            }
            IterateOutcome::Escaped(_) => {}
        }
    }
}

#[test]
fn real_interval_helpers_agree() {
    let a = Interval::new(Dyadic::from_i64(-1), Dyadic::from_i64(3)).unwrap();
    assert_eq!(a.mag(), Dyadic::from_i64(3));
    assert_eq!(a.mig(), Dyadic::zero());
}
