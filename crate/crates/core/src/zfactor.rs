//! Factorization in `Z[x]`: good prime, Hensel lifting, subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::primes_from;
use crate::ff::{self, FpPoly};
use crate::poly::{squarefree_decomposition, IntPoly};

type ModPoly = Vec<BigInt>;

fn trim(mut v: ModPoly) -> ModPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn reduce(v: &[BigInt], m: &BigInt) -> ModPoly {
    trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    reduce(&c, m)
}

fn sub_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let c: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    reduce(&c, m)
}

fn add_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ModPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let c: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    reduce(&c, m)
}

fn to_fp(a: &[BigInt], p: u64) -> FpPoly {
    let bp = BigInt::from(p);
    FpPoly::new(
        p,
        a.iter()
            .map(|c| {
                let r = c.mod_floor(&bp);
                r.iter_u64_digits().next().unwrap_or(0)
            })
            .collect(),
    )
}

fn from_fp(a: &FpPoly) -> ModPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Lifts `f = g h (mod p)` to `f = G H (mod p^k)` with `G` monic; `s g + t h = 1 (mod p)`.
fn hensel_step_lift(
    f: &[BigInt],
    g: &FpPoly,
    h: &FpPoly,
    p: u64,
    k: u32,
) -> (ModPoly, ModPoly) {
    let (_, _, t) = ff::xgcd(g, h);
    let bp = BigInt::from(p);
    let mut big_g = from_fp(g);
    let mut big_h = from_fp(h);
    let mut pj = bp.clone();
    for _ in 1..k {
        let next = &pj * &bp;
        let prod = mul_mod(&big_g, &big_h, &next);
        let err = sub_mod(&reduce(f, &next), &prod, &next);
        let e: ModPoly = err.iter().map(|c| c / &pj).collect();
        let e = to_fp(&e, p);
        // g dh + h dg = e (mod p), deg dg < deg g
        let dg = e.mul(&t).rem(g);
        let dh = e.sub(&h.mul(&dg)).div_rem(g).0;
        let scale = |v: FpPoly| -> ModPoly { from_fp(&v).iter().map(|c| c * &pj).collect() };
        big_g = add_mod(&big_g, &scale(dg), &next);
        big_h = add_mod(&big_h, &scale(dh), &next);
        pj = next;
    }
    (big_g, big_h)
}

/// Monic lifts mod `p^k` of the factors of `f`, where `f = lc(f) prod factors (mod p)`.
fn multi_lift(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32) -> Vec<ModPoly> {
    let m = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        let lc = f.last().unwrap();
        let inv = mod_inverse(lc, &m);
        return vec![reduce(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &m)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g = left.iter().fold(FpPoly::one(p), |acc, q| acc.mul(q));
    let fbar = to_fp(f, p);
    let h = right
        .iter()
        .fold(FpPoly::one(p), |acc, q| acc.mul(q))
        .scale(fbar.lc());
    let (big_g, big_h) = hensel_step_lift(f, &g, &h, p, k);
    let mut out = multi_lift(&big_g, left, p, k);
    out.extend(multi_lift(&big_h, right, p, k));
    out
}

fn next_combination(idx: &mut [usize], r: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < r - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn symmetric(v: &[BigInt], m: &BigInt) -> IntPoly {
    let half = m / 2;
    IntPoly::new(
        v.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn choose_prime(f: &IntPoly) -> (u64, Vec<FpPoly>) {
    let lc = f.lc().unwrap();
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in primes_from(3) {
        if (lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fb = FpPoly::from_int(f, p);
        if !fb.gcd(&fb.derivative()).is_one() {
            continue;
        }
        let facs: Vec<FpPoly> = ff::factor(&fb).into_iter().map(|(q, _)| q).collect();
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    best.unwrap()
}

/// Irreducible factors of a primitive squarefree `f` with positive leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f.clone()];
    }
    let (p, mut facs) = choose_prime(f);
    if facs.len() == 1 {
        return vec![f.clone()];
    }
    let lc = f.lc().unwrap().clone();
    // coefficient bound for lc * (any factor) / lc(factor)
    let bound = BigInt::from(2u32).pow(n as u32) * BigInt::from(n + 1) * f.height() * lc.abs();
    let two_b = bound * 2;
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut m = bp.clone();
    while m <= two_b {
        m *= &bp;
        k += 1;
    }
    let mut lifted = multi_lift(f.coeffs(), &facs, p, k);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'sizes: while 2 * size <= lifted.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut cand: ModPoly = vec![rest.lc().unwrap().mod_floor(&m)];
            for &i in &idx {
                cand = mul_mod(&cand, &lifted[i], &m);
            }
            let g = symmetric(&cand, &m).primitive_part();
            if let Some(q) = rest.div_exact(&g) {
                out.push(g);
                rest = q;
                for &i in idx.iter().rev() {
                    lifted.remove(i);
                    facs.remove(i);
                }
                continue 'sizes;
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    out.push(rest.primitive_part());
    out
}

/// Content and irreducible primitive factors (positive leading coefficients) with multiplicities.
pub fn factor_z(f: &IntPoly) -> (BigInt, Vec<(IntPoly, u32)>) {
    let (content, parts) = squarefree_decomposition(f);
    let mut out = Vec::new();
    for (q, e) in parts {
        for g in factor_squarefree(&q) {
            out.push((g, e));
        }
    }
    out.sort_by(|a, b| {
        (a.0.degree(), a.0.coeffs()).cmp(&(b.0.degree(), b.0.coeffs()))
    });
    (content, out)
}

/// Irreducible over `Q`: positive degree and no nontrivial factorization of the primitive part.
pub fn is_irreducible(f: &IntPoly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let (_, parts) = factor_z(f);
            parts.len() == 1 && parts[0].1 == 1
        }
    }
}

/// Reducible over `Q`: positive degree and not irreducible.
pub fn is_reducible(f: &IntPoly) -> bool {
    f.degree().is_some_and(|d| d >= 1) && !is_irreducible(f)
}
