use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::{roots, squarefree_decomposition, IntPoly};
use crate::error::{RecipError, Result};

#[derive(Clone, Debug, Serialize)]
pub struct HeightReport {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub naive_height: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub content: BigInt,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub projective_height: BigRational,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub affine_height: BigRational,
    pub mahler_measure: f64,
    /// Relative error bound on `mahler_measure`.
    pub mahler_error: f64,
}

pub fn heights(p: &IntPoly) -> Result<HeightReport> {
    if p.is_zero() {
        return Err(RecipError::Domain("heights of the zero polynomial".into()));
    }
    let naive = p.height();
    let content = p.content();
    let projective = BigRational::new(naive.clone(), content.clone());
    let affine = BigRational::from_integer(naive.clone().max(BigInt::one()));
    let (mahler, err) = mahler_measure(p);
    Ok(HeightReport {
        naive_height: naive,
        content,
        projective_height: projective,
        affine_height: affine,
        mahler_measure: mahler,
        mahler_error: err,
    })
}

/// `|lc| prod max(1, |alpha_i|)` with a relative error bound, computed factor by
/// factor on the squarefree decomposition.
pub fn mahler_measure(p: &IntPoly) -> (f64, f64) {
    let (c, parts) = squarefree_decomposition(p);
    let mut m = c.abs().to_f64().unwrap_or(f64::INFINITY);
    let mut rel = 0.0;
    for (q, mult) in parts {
        let (mq, eq) = mahler_squarefree(&q);
        m *= mq.powi(mult as i32);
        rel += mult as f64 * eq;
    }
    (m, rel + 1e-15)
}

fn mahler_squarefree(q: &IntPoly) -> (f64, f64) {
    let c: Vec<f64> = q
        .coeffs()
        .iter()
        .map(|a| a.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let lc = c[c.len() - 1].abs();
    if c.len() == 1 {
        return (lc, 0.0);
    }
    let z = roots::aberth(&c);
    let radii = roots::inclusion_radii(&c, &z);
    let mut m = lc;
    let mut rel = 0.0;
    for (w, r) in z.iter().zip(&radii) {
        let a = w.norm();
        m *= a.max(1.0);
        // max(1, |.|) is 1-Lipschitz, so the relative perturbation is at most r / max(1, |z|)
        rel += r / a.max(1.0) + 4.0 * f64::EPSILON;
    }
    (m, rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn height_examples() {
        let r = heights(&IntPoly::from_i64(&[-2, 0, 2])).unwrap();
        assert_eq!(r.naive_height, BigInt::from(2));
        assert_eq!(r.content, BigInt::from(2));
        assert_eq!(r.projective_height, BigRational::one());

        let r = heights(&IntPoly::from_i64(&[-1, -1, 1])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.mahler_measure - phi).abs() <= 1e-9 * phi);
        assert!(r.mahler_error <= 1e-9);

        let r = heights(&IntPoly::from_i64(&[1, 0, 0, 0, 1])).unwrap();
        assert!((r.mahler_measure - 1.0).abs() <= 1e-9);
        assert!(heights(&IntPoly::zero()).is_err());
    }

    #[test]
    fn repeated_roots_handled() {
        // 3 (x - 2)^3 (x^2 + x + 1)
        let lin = IntPoly::from_i64(&[-2, 1]);
        let p = (&lin.pow(3) * &IntPoly::from_i64(&[1, 1, 1])).scale(&BigInt::from(3));
        let (m, e) = mahler_measure(&p);
        assert!((m - 24.0).abs() < 1e-9 * 24.0);
        assert!(e < 1e-9);
    }

    fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
        (1usize..=8)
            .prop_flat_map(|d| prop::collection::vec(-50i64..=50, d + 1))
            .prop_map(|mut v| {
                let l = v.len() - 1;
                if v[l] == 0 {
                    v[l] = 1;
                }
                IntPoly::from_i64(&v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn mahler_bounds_projective_height(p in nonzero_poly()) {
            let n = p.degree().unwrap() as i32;
            let r = heights(&p).unwrap();
            let htp = r.projective_height.to_f64().unwrap();
            let m = r.mahler_measure / r.content.to_f64().unwrap();
            let tol = 1e-6;
            prop_assert!(m >= 1.0 - tol);
            prop_assert!(2f64.powi(-n) * m <= htp * (1.0 + tol));
            prop_assert!(htp <= 2f64.powi(n - 1) * m * (1.0 + tol) || n == 0);
        }

        #[test]
        fn product_envelope(a in nonzero_poly(), b in nonzero_poly()) {
            let ab = &a * &b;
            let d = ab.degree().unwrap() as i32;
            let h = |p: &IntPoly| heights(p).unwrap().projective_height.to_f64().unwrap();
            let ratio = h(&ab) / (h(&a) * h(&b));
            prop_assert!(ratio >= 4f64.powi(-d) && ratio <= 4f64.powi(d));
        }

        #[test]
        fn mahler_multiplicative(a in nonzero_poly(), b in nonzero_poly()) {
            let ma = mahler_measure(&a).0;
            let mb = mahler_measure(&b).0;
            let mab = mahler_measure(&(&a * &b)).0;
            prop_assert!((mab - ma * mb).abs() <= 1e-7 * mab);
        }
    }
}
