//! Discriminant identities, splitting types, index bounds and the double discriminant.

mod double_disc;
mod splitting;

pub use double_disc::{double_disc_r, fzn_r_identity_check, h_in_b0, FznReport};
pub use splitting::{splitting_type_binary, splitting_type_mod_p, Mark, SplitResult, SplittingType};

pub use crate::arith::{radical_and_square_multiple, SieveParams};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::valuation;
use crate::error::{RecipError, Result};
use crate::poly::{discriminant, IntPoly, SymPair};

/// `disc f` computed through `g`: `g(2) g(-2) (disc g)^2`.
pub fn disc_f_via_g(pair: &SymPair) -> Result<BigInt> {
    if !pair.full_degree() {
        return Err(RecipError::Shape(format!(
            "deg g = {:?} but n = {}",
            pair.g.degree(),
            pair.n
        )));
    }
    let dg = discriminant(&pair.g)?;
    Ok(pair.g.eval_i64(2) * pair.g.eval_i64(-2) * &dg * &dg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IndexCheck {
    /// Both sides of `ind(g mod p) <= v_p(disc g)`.
    Checked { index: u32, valuation: u32, holds: bool },
    Skipped(String),
}

impl IndexCheck {
    pub fn holds(&self) -> Option<bool> {
        match self {
            IndexCheck::Checked { holds, .. } => Some(*holds),
            IndexCheck::Skipped(_) => None,
        }
    }
}

/// Compares the index of `g` mod `p` with `v_p(disc g)` for `p > deg g`.
pub fn index_valuation_check(g: &IntPoly, p: u64) -> IndexCheck {
    let Some(n) = g.degree() else {
        return IndexCheck::Skipped("zero polynomial".into());
    };
    if n == 0 {
        return IndexCheck::Skipped("constant polynomial".into());
    }
    if (n as u64) >= p {
        return IndexCheck::Skipped(format!("p = {p} <= deg g = {n}"));
    }
    let disc = match discriminant(g) {
        Ok(d) if !d.is_zero() => d,
        _ => return IndexCheck::Skipped("inseparable".into()),
    };
    let index = match splitting_type_mod_p(g, p) {
        SplitResult::Infinity => return IndexCheck::Skipped("g = 0 mod p".into()),
        SplitResult::Type(t) => t.index(),
    };
    let v = valuation(&disc, p).unwrap();
    IndexCheck::Checked {
        index,
        valuation: v,
        holds: index <= v,
    }
}

/// The integer polynomial through `(xs[i], ys[i])`; `None` if it is not integral.
pub fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Option<IntPoly> {
    let n = xs.len();
    let mut coef: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - j]);
            coef[i] = num / den;
        }
    }
    // Newton form to monomial basis
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // acc = acc * (x - xs[k]) + coef[k]
        let mut next = vec![BigRational::zero(); n];
        for i in 0..n {
            if acc[i].is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += &acc[i];
            }
            next[i] -= &acc[i] * BigRational::from_integer(xs[k].clone());
        }
        next[0] += &coef[k];
        acc = next;
    }
    let mut out = Vec::with_capacity(n);
    for c in acc {
        if !c.denom().is_one() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(IntPoly::new(out))
}

/// Outcome of the derivative identity on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PReasons {
    /// `h(c + p d) = 0 (mod p^2)` for every tested direction `d`.
    pub hypothesis: bool,
    /// `dh/dx_last (c) = 0 (mod p)`.
    pub conclusion: bool,
    /// `hypothesis => conclusion`.
    pub holds: bool,
}

/// Tests the implication on `d` ranging over zero, the unit vectors and the sign vectors.
///
/// `h(c + p d) = h(c) + p grad h(c) . d (mod p^2)`, so zero and the unit vectors
/// already decide the hypothesis over all of `Z^m`; the sign vectors are extra.
pub fn p_reasons_derivative_check<H, D>(h: H, dh_last: D, c: &[BigInt], p: u64) -> Result<PReasons>
where
    H: Fn(&[BigInt]) -> BigInt,
    D: Fn(&[BigInt]) -> BigInt,
{
    if p <= 2 {
        return Err(RecipError::Domain("p must be an odd prime".into()));
    }
    let m = c.len();
    let bp = BigInt::from(p);
    let p2 = &bp * &bp;
    let mut dirs: Vec<Vec<i64>> = vec![vec![0; m]];
    for i in 0..m {
        let mut e = vec![0; m];
        e[i] = 1;
        dirs.push(e);
    }
    if m <= 12 {
        for mask in 0..(1u32 << m) {
            dirs.push((0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
        }
    }
    let hypothesis = dirs.iter().all(|d| {
        let pt: Vec<BigInt> = c.iter().zip(d).map(|(ci, di)| ci + &bp * di).collect();
        h(&pt).mod_floor(&p2).is_zero()
    });
    let conclusion = dh_last(c).mod_floor(&bp).is_zero();
    Ok(PReasons {
        hypothesis,
        conclusion,
        holds: !hypothesis || conclusion,
    })
}

/// `h = g(2) g(-2) disc_u g` at the point `(b_0, ..., b_n)`.
pub fn h_value(b: &[BigInt]) -> BigInt {
    let g = IntPoly::new(b.to_vec());
    let n = b.len() - 1;
    if g.degree() != Some(n) || n == 0 {
        return BigInt::zero();
    }
    g.eval_i64(2) * g.eval_i64(-2) * discriminant(&g).unwrap_or_default()
}

/// Identity instance on `h` with variables ordered `(b_n, ..., b_1, b_0)`, so the last one is `b_0`.
pub fn p_reasons_for_h(g: &IntPoly, n: usize, p: u64) -> Result<PReasons> {
    let rev = |x: &[BigInt]| -> Vec<BigInt> { x.iter().rev().cloned().collect() };
    let c: Vec<BigInt> = (0..=n).rev().map(|i| g.coeff(i)).collect();
    let h = |x: &[BigInt]| h_value(&rev(x));
    let dh = |x: &[BigInt]| {
        let b = rev(x);
        match h_in_b0(&b[1..], n) {
            Some(hp) => hp.derivative().eval(&b[0]),
            None => BigInt::zero(),
        }
    };
    p_reasons_derivative_check(h, dh, &c, p)
}
