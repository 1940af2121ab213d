use certjulia_core::outer::{escape_radius, preimage_approx, CellClass, ClassifiedGrid};
use certjulia_core::orbit::{iterate_enclosure, IterateOutcome};
use certjulia_core::periodic::enumerate_repelling;
use certjulia_core::{Dyadic, DyadicComplex, PolynomialOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn maps() -> Vec<PolynomialOracle> {
    vec![
        PolynomialOracle::from_i64(&[-2, 0, 1]).unwrap(),
        PolynomialOracle::parse("-1+0.25i,0,1").unwrap(),
        PolynomialOracle::from_i64(&[0, -3, 0, 1]).unwrap(),
    ]
}

fn tol() -> Dyadic {
    Dyadic::pow2(-4).unwrap()
}

#[test]
fn grids_nest_as_k_grows() {
    for p in maps() {
        let er = escape_radius(&p).unwrap();
        let mut prev: Option<ClassifiedGrid> = None;
        for k in 1..=5 {
            let g = preimage_approx(&p, &er, k, &tol()).unwrap();
            if let Some(prev) = &prev {
                let before = prev.covering_set().unwrap();
                let diag = before.side().mul_pow2(1).unwrap();
                let grown = before.neighborhood(&diag).unwrap();
                assert!(g.covering_set().unwrap().contained_in(&grown), "{p} k = {k}");
            }
            prev = Some(g);
        }
    }
}

#[test]
fn sampled_orbits_agree_with_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k = 4;
    let mut escaping = 0;
    let mut bounded = 0;
    for p in maps() {
        let er = escape_radius(&p).unwrap();
        let g = preimage_approx(&p, &er, k, &tol()).unwrap();
        let ins = g.cells_of(&[CellClass::In]).unwrap();
        let outs = g.cells_of(&[CellClass::Out]).unwrap();
        let b2 = er.b.square().unwrap();
        let scale = er.frame_exponent() + 20;
        let span = 1i64 << scale;
        let mut n_esc = 0;
        let mut n_bdd = 0;
        while n_esc < 3334 || n_bdd < 3334 {
            let z = DyadicComplex::new(
                Dyadic::from_parts(rng.gen_range(-span..=span), -20).unwrap(),
                Dyadic::from_parts(rng.gen_range(-span..=span), -20).unwrap(),
            );
            let x = certjulia_core::ComplexBox::point(&z);
            match iterate_enclosure(&p, &x, k, 256).unwrap() {
                IterateOutcome::Escaped(_) => {
                    if n_esc < 3334 {
                        assert!(!ins.contains_point(&z), "{p}: escaping point in IN");
                        n_esc += 1;
                    }
                }
                IterateOutcome::Enclosure(e) => {
                    if e.max_modulus_sq().unwrap() <= b2 && n_bdd < 3334 {
                        assert!(!outs.contains_point(&z), "{p}: bounded point in OUT");
                        n_bdd += 1;
                    }
                }
            }
        }
        escaping += n_esc;
        bounded += n_bdd;
    }
    assert!(escaping >= 10_000 && bounded >= 10_000);
}

#[test]
fn repelling_points_stay_in_every_grid() {
    for p in maps() {
        let er = escape_radius(&p).unwrap();
        let census = enumerate_repelling(&p, 3, &Dyadic::pow2(-12).unwrap(), &er.frame()).unwrap();
        assert!(!census.repelling.is_empty());
        for k in 1..=5 {
            let cover = preimage_approx(&p, &er, k, &tol()).unwrap().covering_set().unwrap();
            for c in &census.repelling {
                assert!(cover.contains_point(&c.center), "{p} k = {k}");
            }
        }
    }
}

#[test]
fn grids_do_not_depend_on_worker_count() {
    let p = maps().remove(1);
    let er = escape_radius(&p).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| preimage_approx(&p, &er, 5, &tol()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}
