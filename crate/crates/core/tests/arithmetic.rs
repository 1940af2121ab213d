use certjulia_core::{ComplexBox, Dyadic, DyadicComplex, Interval};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (any::<i64>(), -80i64..80).prop_map(|(m, e)| Dyadic::from_parts(m, e).unwrap())
}

fn small_dyadic() -> impl Strategy<Value = Dyadic> {
    (-(1i64 << 20)..(1i64 << 20), -24i64..4).prop_map(|(m, e)| Dyadic::from_parts(m, e).unwrap())
}

fn interval() -> impl Strategy<Value = Interval> {
    (small_dyadic(), small_dyadic()).prop_map(|(a, b)| Interval::spanning(a, b))
}

fn cbox() -> impl Strategy<Value = ComplexBox> {
    (interval(), interval()).prop_map(|(re, im)| ComplexBox::from_intervals(re, im))
}

/// A point of `i` chosen by `t` in `[0, 1]` (as a 16-bit fraction).
fn point_in(i: &Interval, t: u16) -> Dyadic {
    let frac = Dyadic::from_parts(t as i64, -16).unwrap();
    i.lo() + &i.width().checked_mul(&frac).unwrap()
}

fn point_in_box(b: &ComplexBox, t: (u16, u16)) -> DyadicComplex {
    let re = Interval::new(b.re_lo().clone(), b.re_hi().clone()).unwrap();
    let im = Interval::new(b.im_lo().clone(), b.im_hi().clone()).unwrap();
    DyadicComplex::new(point_in(&re, t.0), point_in(&im, t.1))
}

fn sub_box(b: &ComplexBox, t: [u16; 4]) -> ComplexBox {
    let a = point_in_box(b, (t[0], t[1]));
    let c = point_in_box(b, (t[2], t[3]));
    ComplexBox::from_intervals(Interval::spanning(a.re, c.re), Interval::spanning(a.im, c.im))
}

fn is_canonical(d: &Dyadic) -> bool {
    if d.mantissa().is_zero() {
        d.exponent() == 0
    } else {
        d.mantissa() % BigInt::from(2) != BigInt::zero()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn addition_is_exact(x in dyadic(), y in dyadic()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&(&x - &y) + &y, x);
    }

    #[test]
    fn results_are_canonical(x in dyadic(), y in dyadic()) {
        prop_assert!(is_canonical(&(&x + &y)));
        prop_assert!(is_canonical(&(&x - &y)));
        prop_assert!(is_canonical(&x.checked_mul(&y).unwrap()));
        prop_assert!(is_canonical(&x.round_up(20)));
    }

    #[test]
    fn ordering_matches_difference(x in dyadic(), y in dyadic()) {
        let d = &x - &y;
        prop_assert_eq!(x.cmp(&y), d.signum().cmp(&0));
    }

    #[test]
    fn display_roundtrips(x in dyadic()) {
        prop_assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x.clone());
        prop_assert_eq!(x.to_decimal_string().parse::<Dyadic>().unwrap(), x);
    }

    #[test]
    fn interval_ops_contain_point_results(
        a in interval(), b in interval(), s in any::<u16>(), t in any::<u16>()
    ) {
        let x = point_in(&a, s);
        let y = point_in(&b, t);
        prop_assert!(a.add(&b).contains(&(&x + &y)));
        prop_assert!(a.sub(&b).contains(&(&x - &y)));
        prop_assert!(a.mul(&b).unwrap().contains(&x.checked_mul(&y).unwrap()));
        prop_assert!(a.sqr().unwrap().contains(&x.square().unwrap()));
        prop_assert!(a.mul(&b).unwrap().round_out(12).contains(&x.checked_mul(&y).unwrap()));
    }

    #[test]
    fn box_mul_is_monotone(a in cbox(), b in cbox(), s in any::<[u16; 4]>(), t in any::<[u16; 4]>()) {
        let a2 = sub_box(&a, s);
        let b2 = sub_box(&b, t);
        let outer = a.mul(&b).unwrap();
        prop_assert!(outer.contains_box(&a2.mul(&b2).unwrap()));
        prop_assert!(a.sqr().unwrap().contains_box(&a2.sqr().unwrap()));
        prop_assert!(outer.round_out(10).contains_box(&a2.mul(&b2).unwrap().round_out(10)));
    }

    #[test]
    fn box_mul_contains_products(a in cbox(), b in cbox(), s in any::<(u16, u16)>(), t in any::<(u16, u16)>()) {
        let z = point_in_box(&a, s);
        let w = point_in_box(&b, t);
        prop_assert!(a.mul(&b).unwrap().contains_point(&z.checked_mul(&w).unwrap()));
        prop_assert!(a.sqr().unwrap().contains_point(&z.checked_mul(&z).unwrap()));
    }
}
