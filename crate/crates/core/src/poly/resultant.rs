use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::error::{RecipError, Result};

/// Resultant via the subresultant pseudo-remainder sequence.
///
/// Convention: `Res(A, B) = lc(A)^{deg B} * prod_{A(a)=0} B(a)`, so that
/// `Res(x - a, P) = P(a)`.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> Result<BigInt> {
    if a.is_zero() || b.is_zero() {
        return Err(RecipError::Domain("resultant of the zero polynomial".into()));
    }
    Ok(subresultant(a, b))
}

fn subresultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut sign = BigInt::one();
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
    }
    let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
    if db == 0 {
        return sign * num_traits::pow(b.lc().unwrap().clone(), da);
    }
    let ca = a.content();
    let cb = b.content();
    let a_prim = IntPoly::new(a.coeffs().iter().map(|c| c / &ca).collect());
    let b_prim = IntPoly::new(b.coeffs().iter().map(|c| c / &cb).collect());
    let t = num_traits::pow(ca, db) * num_traits::pow(cb, da);
    let (mut a, mut b) = (a_prim, b_prim);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = IntPoly::new(r.coeffs().iter().map(|c| c / &divisor).collect());
        g = a.lc().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
        };
        match b.degree() {
            None => return BigInt::zero(),
            Some(0) => break,
            Some(_) => {}
        }
    }
    let da = a.degree().unwrap();
    let lb = b.lc().unwrap().clone();
    let h = if da == 0 {
        h
    } else {
        num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
    };
    sign * t * h
}

/// `disc P = (-1)^{d(d-1)/2} Res(P, P') / lc(P)`; the discriminant of a linear polynomial is 1.
pub fn discriminant(p: &IntPoly) -> Result<BigInt> {
    let d = match p.degree() {
        None | Some(0) => {
            return Err(RecipError::Domain(
                "discriminant needs degree at least 1".into(),
            ))
        }
        Some(d) => d,
    };
    if d == 1 {
        return Ok(BigInt::one());
    }
    let r = subresultant(p, &p.derivative());
    let q = r / p.lc().unwrap();
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Primitive gcd over `Z[x]` with positive leading coefficient.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    let c = a.content().gcd(&b.content());
    let (mut x, mut y) = if a.degree() >= b.degree() {
        (a.primitive_part(), b.primitive_part())
    } else {
        (b.primitive_part(), a.primitive_part())
    };
    while !y.is_zero() {
        let r = x.pseudo_rem(&y);
        x = y;
        y = r.primitive_part();
    }
    let g = x.primitive_part();
    if g.degree() == Some(0) {
        IntPoly::constant(c)
    } else {
        g.scale(&c)
    }
}

/// Yun decomposition over `Z[x]`: returns `(content, [(q_i, i)])` with `P = content * prod q_i^i`,
/// each `q_i` primitive, squarefree and pairwise coprime.
pub fn squarefree_decomposition(p: &IntPoly) -> (BigInt, Vec<(IntPoly, u32)>) {
    if p.is_zero() {
        return (BigInt::zero(), Vec::new());
    }
    let mut content = p.content();
    if p.lc().unwrap().is_negative() {
        content = -content;
    }
    let f = p.primitive_part();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return (content, out);
    }
    let fp = f.derivative();
    let mut a = poly_gcd(&f, &fp).primitive_part();
    let mut b = f.div_exact(&a).expect("gcd divides f");
    let mut c = fp.div_exact(&a).expect("gcd divides f'");
    let mut i = 1u32;
    loop {
        let d = &c - &b.derivative();
        if b.degree() == Some(0) {
            break;
        }
        a = poly_gcd(&b, &d).primitive_part();
        if a.degree() > Some(0) {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("yun step");
        c = d.div_exact(&a).expect("yun step");
        i += 1;
    }
    (content, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    /// Bareiss fraction-free determinant, used as an independent route.
    fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
        let n = m.len();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(sw) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    fn sylvester(a: &IntPoly, b: &IntPoly) -> BigInt {
        let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
        let size = m + n;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in a.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..m {
            let mut row = vec![BigInt::zero(); size];
            for (j, c) in b.coeffs().iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        det(rows)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-3, 1]), &p(&[1, 0, 1])).unwrap(), BigInt::from(10));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[1, 0, 1])).unwrap(), BigInt::zero());
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), BigInt::one());
        assert!(resultant(&IntPoly::zero(), &p(&[1, 1])).is_err());
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases: [(&[i64], &[i64]); 6] = [
            (&[1, 2, 3], &[4, 0, -1, 2]),
            (&[5, -3, 0, 0, 7], &[2, 1]),
            (&[-6, 11, -6, 1], &[1, 1, 1, 1]),
            (&[3, 0, 2], &[0, 0, 5]),
            (&[7], &[1, 2, 3]),
            (&[2, 4, 2], &[-1, 0, 1]),
        ];
        for (a, b) in cases {
            let (a, b) = (p(a), p(b));
            assert_eq!(resultant(&a, &b).unwrap(), sylvester(&a, &b), "{a:?} {b:?}");
            assert_eq!(resultant(&b, &a).unwrap(), sylvester(&b, &a), "{b:?} {a:?}");
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[-2, 0, 1])).unwrap(), BigInt::from(8));
        assert_eq!(discriminant(&p(&[1, -2, 1])).unwrap(), BigInt::zero());
        assert_eq!(discriminant(&p(&[0, -1, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(discriminant(&p(&[1, 0, 0, 0, 1])).unwrap(), BigInt::from(256));
        assert_eq!(discriminant(&p(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(discriminant(&p(&[-1, -1, 0, 1])).unwrap(), BigInt::from(-23));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = &p(&[1, 1]) * &p(&[-2, 0, 1]);
        let b = &p(&[1, 1]) * &p(&[3, 1]);
        assert_eq!(poly_gcd(&a, &b), p(&[1, 1]));
        let f = (&(&p(&[1, 1]) * &p(&[1, 1])) * &p(&[0, 1])).scale(&BigInt::from(-6));
        let (c, parts) = squarefree_decomposition(&f);
        assert_eq!(c, BigInt::from(-6));
        assert_eq!(parts, vec![(p(&[0, 1]), 1), (p(&[1, 1]), 2)]);
    }
}
