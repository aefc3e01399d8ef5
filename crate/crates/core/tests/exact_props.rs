use kreeb::exact::matrix::{integer_kernel, rank_int};
use kreeb::exact::poly::sturm_count;
use kreeb::exact::{
    extends_to_basis, isolate_real_roots, sign_at, smith_normal_form, IntMatrix, Rational, RationalFunction1D, UniPoly,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

#[test]
fn smith_form_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let a = IntMatrix::from_rows(4, &random_matrix(&mut rng, 3, 4, 20));
        let snf = smith_normal_form(&a);
        assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d, "U·A·V = D for {a:?}");
        assert!(snf.u.det().abs().is_one());
        assert!(snf.v.det().abs().is_one());
        let diag = snf.d.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{} does not divide {}", w[0], w[1]);
            } else {
                assert!(w[1].is_zero());
            }
        }
        for i in 0..3 {
            for j in 0..4 {
                if i != j {
                    assert!(snf.d.row(i)[j].is_zero());
                }
            }
        }
    }
}

#[test]
fn basis_extension_matches_smith_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let vs = random_matrix(&mut rng, k, 3, 4);
        let snf = smith_normal_form(&IntMatrix::from_rows(3, &vs));
        let factors = snf.invariant_factors();
        let by_snf = factors.len() == k && factors.iter().all(|d| d.abs() == BigInt::one());
        assert_eq!(extends_to_basis(&vs, 3), by_snf, "{vs:?}");
    }
    assert!(extends_to_basis(&[vec![2, 1, 5], vec![1, 1, 3]], 3));
    assert!(!extends_to_basis(&[vec![2, 1, 5], vec![0, 1, 3]], 3));
}

#[test]
fn integer_kernels_annihilate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let rows = random_matrix(&mut rng, 2, 4, 6);
        let rat: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect();
        let ker = integer_kernel(&rat, 4);
        assert_eq!(ker.len(), 4 - rank_int(&rows));
        for v in &ker {
            for r in &rows {
                assert_eq!(r.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
        }
    }
}

fn poly_from_roots(roots: &[(i64, i64)], extra: &[i64]) -> UniPoly {
    let mut p = UniPoly::from_ints(extra);
    for &(n, d) in roots {
        p = &p * &UniPoly::from_ints(&[-n, d]);
    }
    p
}

#[test]
fn root_isolation_matches_sturm() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..60 {
        let roots: Vec<(i64, i64)> = (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let extra: Vec<i64> = vec![rng.gen_range(-5..=5), 0, 1];
        let p = poly_from_roots(&roots, &extra);
        let (a, b) = (Rational::new(rng.gen_range(-12..0), 1), Rational::new(rng.gen_range(1..12), 1));
        let sq = p.squarefree_part();
        let found = isolate_real_roots(&p, &a, &b);
        let seq = sq.sturm_sequence();
        let mut count = sturm_count(&seq, &a, &b);
        if sq.eval(&b).is_zero() {
            count -= 1;
        }
        assert_eq!(found.len(), count, "{p}");
        for r in &found {
            if r.lo() == r.hi() {
                assert!(sq.eval(r.lo()).is_zero());
            } else {
                assert!(sq.sign_at(r.lo()) * sq.sign_at(r.hi()) <= 0);
            }
        }
    }
}

#[test]
fn sign_zero_only_on_shared_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let sqrt2 = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]), &Rational::from(0), &Rational::from(2)).remove(0);
    for _ in 0..60 {
        let c: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        let numer = if rng.gen_bool(0.3) { &UniPoly::from_ints(&c) * &UniPoly::from_ints(&[-2, 0, 1]) } else { UniPoly::from_ints(&c) };
        if numer.is_zero() {
            continue;
        }
        let f = RationalFunction1D::new(numer.clone(), UniPoly::from_ints(&[3, 1])).unwrap();
        let s = sign_at(&f, &sqrt2).unwrap();
        let shared = f.numer().gcd(sqrt2.defining_poly()).degree().unwrap_or(0) > 0;
        assert_eq!(s == 0, shared, "{numer}");
        let approx = f.eval_f64(sqrt2.to_f64());
        if s != 0 {
            assert_eq!(s as f64, approx.signum());
        }
    }
}

proptest! {
    #[test]
    fn rational_sum_clears_denominators(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let lhs = (Rational::new(a, b) + Rational::new(c, d)) * Rational::from(b * d);
        prop_assert_eq!(lhs, Rational::from(a * d + c * b));
    }

    #[test]
    fn rational_decimal_round_trip(n in -100000i64..100000, d in 1i64..1000) {
        let r = Rational::new(n, d);
        let text = r.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), r);
    }
}
