use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::interpolate;
use crate::error::{RecipError, Result};
use crate::poly::{discriminant, IntPoly};

fn g_at(b0: &BigInt, rest: &[BigInt]) -> IntPoly {
    let mut c = Vec::with_capacity(rest.len() + 1);
    c.push(b0.clone());
    c.extend_from_slice(rest);
    IntPoly::new(c)
}

/// The polynomial in `b_0` of degree at most `deg` whose value at `b_0` is `f(g)`.
fn in_b0<F: Fn(&IntPoly) -> BigInt>(rest: &[BigInt], deg: usize, f: F) -> IntPoly {
    let xs: Vec<BigInt> = (0..=deg as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| f(&g_at(x, rest))).collect();
    interpolate(&xs, &ys).expect("integer polynomial in b0")
}

fn disc_or_one(p: &IntPoly) -> BigInt {
    match p.degree() {
        None | Some(0) => BigInt::zero(),
        _ => discriminant(p).unwrap(),
    }
}

fn check(rest: &[BigInt], n: usize) -> Result<()> {
    if n < 2 {
        return Err(RecipError::Domain(format!("double discriminant needs n >= 2, got {n}")));
    }
    if rest.len() != n {
        return Err(RecipError::Shape(format!("expected {n} coefficients b_1..b_n, got {}", rest.len())));
    }
    Ok(())
}

/// `h = g(2) g(-2) disc_u g` as a polynomial in `b_0`; `None` when `b_n = 0`.
pub fn h_in_b0(rest: &[BigInt], n: usize) -> Option<IntPoly> {
    if rest.len() != n || rest[n - 1].is_zero() {
        return None;
    }
    Some(in_b0(rest, n + 1, |g| {
        g.eval_i64(2) * g.eval_i64(-2) * discriminant(g).unwrap()
    }))
}

/// `R(b_1, ..., b_n) = b_n disc_{b_0} h`.
pub fn double_disc_r(rest: &[BigInt], n: usize) -> Result<BigInt> {
    check(rest, n)?;
    let Some(h) = h_in_b0(rest, n) else {
        return Ok(BigInt::zero());
    };
    Ok(&rest[n - 1] * disc_or_one(&h))
}

/// Both sides of the factorization of `R` at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FznReport {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub rhs: BigInt,
    /// `|lhs| = |rhs|`.
    pub holds: bool,
    pub same_sign: bool,
}

/// `b_n disc_{b_0}(disc_u g) (g(2) - g(-2))^2 disc_u(g - g(2))^2 disc_u(g - g(-2))^2`.
fn factored_side(rest: &[BigInt], n: usize) -> BigInt {
    let bn = &rest[n - 1];
    if bn.is_zero() {
        return BigInt::zero();
    }
    let dg = in_b0(rest, n - 1, |g| discriminant(g).unwrap());
    let g = g_at(&BigInt::zero(), rest);
    let diff = g.eval_i64(2) - g.eval_i64(-2);
    let shifted = |a: i64| {
        let c = g.eval_i64(a);
        disc_or_one(&(&g - &IntPoly::constant(c)))
    };
    let (d2, dm2) = (shifted(2), shifted(-2));
    bn * disc_or_one(&dg) * &diff * &diff * &d2 * &d2 * &dm2 * &dm2
}

pub fn fzn_r_identity_check(rest: &[BigInt], n: usize) -> Result<FznReport> {
    let lhs = double_disc_r(rest, n)?;
    let rhs = factored_side(rest, n);
    Ok(FznReport {
        holds: lhs.abs() == rhs.abs(),
        same_sign: lhs.signum() == rhs.signum(),
        lhs,
        rhs,
    })
}
