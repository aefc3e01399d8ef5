use kreeb::catalog::{build_xk, XkSpec};
use kreeb::convex::{vertex_multiplicity, Cone, TailedPolyhedron};
use kreeb::exact::rational::{dot, dot_int};
use kreeb::exact::{RatVec, Rational};
use kreeb::pdivisor::{BasePoint, PointChoice, PolyhedralDivisor};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tail(rng: &mut ChaCha8Rng) -> Cone {
    loop {
        let gens: Vec<Vec<i64>> = (0..2).map(|_| vec![rng.gen_range(-6..=6), rng.gen_range(-6..=6)]).collect();
        if let Ok(c) = Cone::new(2, &gens) {
            if c.is_pointed() && c.is_full_dimensional() {
                return c;
            }
        }
    }
}

fn random_vertex(rng: &mut ChaCha8Rng) -> RatVec {
    let d = rng.gen_range(1..=5);
    vec![Rational::new(rng.gen_range(-6..=6), d), Rational::new(rng.gen_range(-6..=6), d)]
}

fn random_divisor(rng: &mut ChaCha8Rng) -> PolyhedralDivisor {
    loop {
        let tail = random_tail(rng);
        let m = rng.gen_range(1..=4);
        let support: Vec<(BasePoint, TailedPolyhedron)> = (0..m)
            .map(|i| {
                let verts = (0..rng.gen_range(1..=2)).map(|_| random_vertex(rng)).collect();
                (BasePoint::new(format!("p{i}")), TailedPolyhedron::new(verts, tail.clone()).unwrap())
            })
            .collect();
        if let Ok(d) = PolyhedralDivisor::new(tail, support) {
            return d;
        }
    }
}

fn random_proper(rng: &mut ChaCha8Rng) -> PolyhedralDivisor {
    loop {
        let d = random_divisor(rng);
        if d.is_proper() {
            return d;
        }
    }
}

fn interior_dual(rng: &mut ChaCha8Rng, tail: &Cone) -> RatVec {
    let dual = tail.dual().unwrap();
    let mut u = vec![Rational::zero(), Rational::zero()];
    for r in dual.rays() {
        let w = Rational::from(rng.gen_range(1..=9));
        u[0] += &w * Rational::from(r[0]);
        u[1] += &w * Rational::from(r[1]);
    }
    u
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut a = vec![vec![1i64, 0], vec![0, 1]];
    for _ in 0..4 {
        let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
        let f = rng.gen_range(-2..=2);
        for c in 0..2 {
            a[i][c] += f * a[j][c];
        }
        if rng.gen_bool(0.3) {
            a.swap(0, 1);
        }
    }
    a
}

#[test]
fn evaluation_sums_to_degree_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let d = random_divisor(&mut rng);
        let u = interior_dual(&mut rng, d.tail());
        let total: Rational = d.evaluate(&u).unwrap().into_iter().map(|(_, v)| v).sum();
        assert_eq!(d.degree().min_value(&u).unwrap(), total);
    }
}

#[test]
fn canonical_equations_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut checked = 0;
    for _ in 0..400 {
        let d = random_proper(&mut rng);
        let Some(cd) = d.canonical_data() else { continue };
        checked += 1;
        for ((label, a), (p, c)) in cd.a.iter().zip(d.support()) {
            assert_eq!(label, &p.label);
            for v in c.vertices() {
                let mu = Rational::from(vertex_multiplicity(v));
                assert_eq!(dot(&cd.u, v) - a, -(&mu - Rational::from(1)) / &mu);
            }
        }
        for r in d.rays_missing_degree() {
            assert_eq!(dot_int(&r, &cd.u), Rational::from(1));
        }
        assert_eq!(cd.a.iter().map(|(_, a)| a.clone()).sum::<Rational>(), Rational::from(2));
        if d.fano_check().is_ok() {
            assert!(d.tail().dual().unwrap().contains_in_interior(&cd.u), "u must lie in the interior of the weight cone");
        }
    }
    assert!(checked >= 20, "only {checked} Q-Gorenstein samples");
    for k in 1..=9 {
        let cd = build_xk(&XkSpec::new(k)).unwrap().canonical_data().unwrap();
        assert_eq!(cd.u, vec![Rational::zero(), Rational::one()]);
    }
}

#[test]
fn degeneration_cones_contain_the_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut divisors: Vec<PolyhedralDivisor> = (1..=5).map(|k| build_xk(&XkSpec::new(k)).unwrap()).collect();
    divisors.extend((0..40).map(|_| random_proper(&mut rng)));
    for d in &divisors {
        for y in d.admissible_points().choices() {
            let cone = d.degeneration_cone(&y).unwrap();
            let c = cone.cone();
            for r in d.tail().rays() {
                let lifted = vec![Rational::from(r[0]), Rational::from(r[1]), Rational::zero()];
                assert!(c.contains(&lifted));
            }
        }
    }
}

#[test]
fn degeneration_slice_at_height_zero_is_the_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..40 {
        let d = random_proper(&mut rng);
        for y in d.admissible_points().choices() {
            let cone = d.degeneration_cone(&y).unwrap();
            for _ in 0..30 {
                let x = vec![Rational::new(rng.gen_range(-9..=9), 1), Rational::new(rng.gen_range(-9..=9), 1)];
                let lifted = vec![x[0].clone(), x[1].clone(), Rational::zero()];
                assert_eq!(cone.cone().contains(&lifted), d.tail().contains(&x), "σ_{} at {x:?}", y.label());
            }
        }
    }
}

#[test]
fn degeneration_weight_restricts_to_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let mut divisors: Vec<PolyhedralDivisor> = (1..=5).map(|k| build_xk(&XkSpec::new(k)).unwrap()).collect();
    divisors.extend((0..200).map(|_| random_proper(&mut rng)).filter(|d| d.fano_check().is_ok()));
    let mut checked = 0;
    for d in &divisors {
        let u = d.canonical_data().unwrap().u;
        for y in d.admissible_points().choices() {
            if let Ok(w) = d.degeneration_weight(&y) {
                assert!(w.first_block_matches);
                assert_eq!(w.u_y[..2], u[..]);
                checked += 1;
            }
        }
    }
    assert!(checked >= 10);
}

#[test]
fn isolatedness_is_coordinate_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let mut divisors: Vec<PolyhedralDivisor> = (1..=6).map(|k| build_xk(&XkSpec::new(k)).unwrap()).collect();
    divisors.extend((0..60).map(|_| random_proper(&mut rng)));
    for d in &divisors {
        let base = d.is_isolated().unwrap();
        let mut support = d.support().to_vec();
        support.shuffle(&mut rng);
        let relabeled: Vec<(BasePoint, TailedPolyhedron)> =
            support.into_iter().enumerate().map(|(i, (_, c))| (BasePoint::new(format!("q{i}")), c)).collect();
        let e = PolyhedralDivisor::new(d.tail().clone(), relabeled).unwrap();
        let a = random_unimodular(&mut rng);
        let f = e.transform(&a).unwrap();
        for other in [&e, &f] {
            let r = other.is_isolated().unwrap();
            assert_eq!(r.isolated, base.isolated, "{d:?}");
            assert_eq!(r.failed_condition, base.failed_condition, "{d:?}");
        }
    }
}

#[test]
fn parity_of_xk() {
    for k in 1..=10 {
        let r = build_xk(&XkSpec::new(k)).unwrap().is_isolated().unwrap();
        assert_eq!(r.isolated, k % 2 == 1, "k = {k}");
        if k % 2 == 0 {
            assert_eq!(r.failed_condition, Some(3));
            assert!(r.witnesses.iter().any(|w| w.condition == 3 && w.gcd_minors % 2 == 0));
        }
    }
    let d = build_xk(&XkSpec::new(1)).unwrap();
    assert!(d.is_admissible(&d.point("0").unwrap()));
    assert!(!d.is_admissible(&PointChoice::Generic));
}
