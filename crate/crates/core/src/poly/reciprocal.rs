use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::IntPoly;
use crate::error::{RecipError, Result};

/// A reciprocal `f` of formal degree `2n` together with `g`, where `f(x) = x^n g(x + 1/x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymPair {
    pub f: IntPoly,
    pub g: IntPoly,
    pub n: usize,
}

impl SymPair {
    pub fn from_g(g: IntPoly, n: usize) -> Result<Self> {
        let f = expand(&g, n)?;
        Ok(SymPair { f, g, n })
    }

    /// True when `deg g = n`, i.e. the leading coefficient of `f` is nonzero.
    pub fn full_degree(&self) -> bool {
        self.g.degree() == Some(self.n)
    }
}

/// Binomial row of `(x^2 + 1)^k`, placed at offset `n - k`: coefficients of `x^{n-k} (x^2+1)^k`.
fn basis_term(n: usize, k: usize) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(k + 1);
    let mut c = BigInt::from(1);
    for j in 0..=k {
        out.push((n - k + 2 * j, c.clone()));
        c = c * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    out
}

/// Recovers `g` from a reciprocal `f` of even degree `2n`.
pub fn symmetrize(f: &IntPoly) -> Result<SymPair> {
    let d = f
        .degree()
        .ok_or_else(|| RecipError::Shape("zero polynomial has no degree".into()))?;
    if d % 2 == 1 {
        return Err(RecipError::Shape(format!("odd degree {d}")));
    }
    symmetrize_with_n(f, d / 2)
}

/// As [`symmetrize`], but with the formal degree `2n` given explicitly so that
/// `f` with vanishing leading coefficient `a_0` (equivalently `deg g < n`) is accepted.
pub fn symmetrize_with_n(f: &IntPoly, n: usize) -> Result<SymPair> {
    let len = 2 * n + 1;
    if f.coeffs().len() > len {
        return Err(RecipError::Shape(format!(
            "degree {:?} exceeds 2n = {}",
            f.degree(),
            2 * n
        )));
    }
    let mut rem: Vec<BigInt> = (0..len).map(|i| f.coeff(i)).collect();
    if (0..len).any(|i| rem[i] != rem[len - 1 - i]) {
        return Err(RecipError::Shape(format!("not reciprocal at degree {}", 2 * n)));
    }
    let mut b = vec![BigInt::zero(); n + 1];
    for k in (0..=n).rev() {
        let bk = rem[n + k].clone();
        if bk.is_zero() {
            continue;
        }
        for (idx, c) in basis_term(n, k) {
            rem[idx] -= &bk * c;
        }
        b[k] = bk;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    Ok(SymPair {
        f: f.clone(),
        g: IntPoly::new(b),
        n,
    })
}

/// `x^n g(x + 1/x)`; requires `deg g <= n`.
pub fn expand(g: &IntPoly, n: usize) -> Result<IntPoly> {
    if let Some(d) = g.degree() {
        if d > n {
            return Err(RecipError::Shape(format!("deg g = {d} exceeds n = {n}")));
        }
    }
    let mut out = vec![BigInt::zero(); 2 * n + 1];
    for (k, bk) in g.coeffs().iter().enumerate() {
        if bk.is_zero() {
            continue;
        }
        for (idx, c) in basis_term(n, k) {
            out[idx] += bk * c;
        }
    }
    Ok(IntPoly::new(out))
}

/// `(1 + x)^{2n} f((1 - x)/(1 + x))` for `f` of even degree `2n`.
pub fn cayley(f: &IntPoly) -> Result<IntPoly> {
    let d = f
        .degree()
        .ok_or_else(|| RecipError::Shape("zero polynomial has no degree".into()))?;
    if d % 2 == 1 {
        return Err(RecipError::Shape(format!("odd degree {d}")));
    }
    let minus = IntPoly::from_i64(&[1, -1]);
    let plus = IntPoly::from_i64(&[1, 1]);
    let mut pows_minus = vec![IntPoly::one()];
    let mut pows_plus = vec![IntPoly::one()];
    for i in 1..=d {
        pows_minus.push(&pows_minus[i - 1] * &minus);
        pows_plus.push(&pows_plus[i - 1] * &plus);
    }
    let mut acc = IntPoly::zero();
    for (i, a) in f.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let term = (&pows_minus[i] * &pows_plus[d - i]).scale(a);
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Only even powers of `x` carry nonzero coefficients.
pub fn is_even_poly(p: &IntPoly) -> bool {
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| i % 2 == 0 || c.is_zero())
}
