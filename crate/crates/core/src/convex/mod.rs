//! Rational polyhedral cones, tailed polyhedra and the truncated-dual volume.

mod cone;
mod polyhedron;
mod volume;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

pub use cone::{Cone, SimplicialPiece};
pub use polyhedron::TailedPolyhedron;
pub use volume::{
    derivative_along_line, directional_derivative, truncated_dual_volume, vol_along_line, volume_at, LineInterval,
    VolumeLine,
};

/// The primitive lattice vector on the ray through `v`.
pub fn primitive(v: &[i64]) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

/// The primitive lattice vector on the ray through a rational vector.
pub fn primitive_rational(v: &[Rational]) -> Result<Vec<i64>> {
    if v.iter().all(Rational::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(crate::exact::rational_to_primitive(v))
}

/// Least `μ ≥ 1` with `μ·v` integral.
pub fn vertex_multiplicity(v: &[Rational]) -> i64 {
    crate::exact::rational::lcm_denominators(v).to_i64().expect("multiplicity exceeds i64")
}

/// `μ(v)·(v, 1)`, the primitive generator of the ray through `(v, 1)`.
pub fn homogenize_vertex(v: &[Rational]) -> Vec<i64> {
    let mu = BigInt::from(vertex_multiplicity(v));
    let mut out: Vec<i64> = v
        .iter()
        .map(|x| (x.numer() * (&mu / x.denom())).to_i64().expect("coordinate exceeds i64"))
        .collect();
    out.push(mu.to_i64().unwrap());
    out
}

pub(crate) fn dot_i(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det_i(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// A nonzero vector orthogonal to `d - 1` vectors in `Z^d` (zero if they are dependent).
pub(crate) fn generalized_cross(vs: &[Vec<i64>], d: usize) -> Vec<i128> {
    debug_assert_eq!(vs.len() + 1, d);
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<i64>> = vs
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect())
                .collect();
            let m = det_i(&minor);
            if i % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

pub(crate) fn primitive_i128(v: &[i128]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g.is_zero() {
        return None;
    }
    Some(v.iter().map(|x| i64::try_from(x / g).expect("normal vector exceeds i64")).collect())
}

pub(crate) fn to_rational_vec(v: &[i64]) -> Vec<Rational> {
    crate::exact::rat_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[2, 4]).unwrap(), vec![1, 2]);
        assert_eq!(primitive(&[-8, 11, 1]).unwrap(), vec![-8, 11, 1]);
        assert_eq!(primitive(&[0, 0]), Err(Error::ZeroVector));
        assert_eq!(primitive(&[-4, 0, 6]).unwrap(), vec![-2, 0, 3]);
    }

    #[test]
    fn multiplicities() {
        assert_eq!(vertex_multiplicity(&[q(2, 5), q(1, 5)]), 5);
        assert_eq!(vertex_multiplicity(&[q(-2, 3), q(1, 3)]), 3);
        assert_eq!(vertex_multiplicity(&[q(1, 1), q(0, 1)]), 1);
        assert_eq!(homogenize_vertex(&[q(2, 5), q(1, 5)]), vec![2, 1, 5]);
    }

    #[test]
    fn determinants() {
        assert_eq!(det_i(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det_i(&[vec![-8, 11, 1], vec![0, 3, 1], vec![5, 5, -3]]).abs(), 152);
        assert_eq!(det_i(&[vec![0, 3, 1], vec![3, 3, -1], vec![5, 5, -3]]).abs(), 12);
        assert_eq!(det_i(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn cross_is_orthogonal() {
        let vs = vec![vec![2, 1, 5], vec![1, 1, -3]];
        let h = generalized_cross(&vs, 3);
        for v in &vs {
            let s: i128 = v.iter().zip(&h).map(|(&a, &b)| a as i128 * b).sum();
            assert_eq!(s, 0);
        }
        assert_eq!(generalized_cross(&[], 1), vec![1]);
    }
}
