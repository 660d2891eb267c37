//! Dense polynomials over `F_p` for word-sized primes, with factorization.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::powmod;
use crate::poly::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        assert!((2..(1 << 32)).contains(&p), "modulus must be below 2^32");
        for a in c.iter_mut() {
            *a %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn from_int(poly: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        let c = poly
            .coeffs()
            .iter()
            .map(|a| a.mod_floor(&bp).to_u64().unwrap())
            .collect();
        Self::new(p, c)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.c.iter().rev().fold(0, |acc, &a| (acc * (x % p) + a) % p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.p;
        Self::new(p, self.c.iter().map(|&a| a * (k % p) % p).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p)
            .collect();
        Self::new(p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
            .collect();
        Self::new(p, c)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % p;
            }
        }
        Self::new(p, c)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = inv_mod(d.lc(), p);
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = r[i + dd] * inv % p;
            q[i] = t;
            if t == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - t * b % p) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        Self::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * (i as u64 % p) % p)
                .collect(),
        )
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mulmod(&result, m);
            if e.bit(i) {
                result = result.mulmod(&base, m);
            }
        }
        result
    }

    /// `self(x)^{1/p}` for `self` a polynomial in `x^p`.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.p, self.c.iter().step_by(p).copied().collect())
    }
}

/// Extended gcd: `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn xgcd(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s2 = s0.sub(&q.mul(&s1));
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = t0.sub(&q.mul(&t1));
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_zero() {
        return (r0, s0, t0);
    }
    let inv = inv_mod(r0.lc(), p);
    (r0.scale(inv), s0.scale(inv), t0.scale(inv))
}

/// Squarefree decomposition of a monic polynomial: `f = prod s_i^{e_i}`.
pub fn squarefree(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    let mut c = f.gcd(&fp);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac, i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = c.pth_root();
        for (g, m) in squarefree(&root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: `(product of degree-d irreducibles, d)`.
pub fn ddf(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.rem(&f);
    let pe = BigUint::from(p);
    let mut d = 1;
    while f.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(&pe, &f);
        let g = h.sub(&x).gcd(&f);
        if !g.is_one() {
            f = f.div_rem(&g).0;
            h = h.rem(&f);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(k) = f.degree() {
        if k > 0 {
            out.push((f, k));
        }
    }
    out
}

/// Equal-degree splitting of a monic squarefree `f` whose irreducible factors all have degree `d`.
pub fn edf(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let p = f.p;
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mulmod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.powmod(&e, f).sub(&FpPoly::one(p))
        };
        let g = b.gcd(f);
        let k = g.degree().unwrap_or(0);
        if k > 0 && k < n {
            let h = f.div_rem(&g).0;
            let mut out = edf(&g, d, rng);
            out.extend(edf(&h, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ f.p);
    let mut out = Vec::new();
    for (s, e) in squarefree(f) {
        for (g, d) in ddf(&s) {
            for q in edf(&g, d, &mut rng) {
                out.push((q, e));
            }
        }
    }
    out.sort_by(|a, b| (a.0.c.len(), &a.0.c).cmp(&(b.0.c.len(), &b.0.c)));
    out
}

/// Degrees and multiplicities of the irreducible factors, without splitting equal-degree parts.
pub fn factor_shape(f: &FpPoly) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for (s, e) in squarefree(f) {
        for (g, d) in ddf(&s) {
            for _ in 0..g.degree().unwrap() / d {
                out.push((d, e));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Roots in `F_p` of a polynomial, with multiplicity ignored, in increasing order.
pub fn roots(f: &FpPoly) -> Vec<u64> {
    if f.is_zero() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x700f ^ f.p);
    let mut out = Vec::new();
    for (s, _) in squarefree(f) {
        for (g, d) in ddf(&s) {
            if d == 1 {
                for q in edf(&g, 1, &mut rng) {
                    out.push((f.p - q.c[0]) % f.p);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Square root mod an odd prime by Tonelli–Shanks; `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

pub fn is_qr(a: u64, p: u64) -> bool {
    let a = a % p;
    a == 0 || p == 2 || powmod(a, (p - 1) / 2, p) == 1
}

pub fn big_to_mod(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    /// Exhaustive oracle: monic irreducibles of degree d over F_p by sieving products.
    fn is_irreducible_bruteforce(f: &FpPoly) -> bool {
        let p = f.modulus();
        let n = f.degree().unwrap();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut k = idx;
                for _ in 0..d {
                    c.push(k % p);
                    k /= p;
                }
                c.push(1);
                let g = FpPoly::new(p, c);
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn shapes() {
        // x^2 (x + 1) mod 5
        assert_eq!(factor_shape(&fp(5, &[0, 0, 1, 1])), vec![(1, 1), (1, 2)]);
        assert_eq!(factor_shape(&fp(3, &[1, 0, 1])), vec![(2, 1)]);
        // (x^2+1)^3 mod 3 goes through the p-th root branch
        let q = fp(3, &[1, 0, 1]);
        let f = q.mul(&q).mul(&q);
        assert_eq!(factor_shape(&f), vec![(2, 3)]);
    }

    #[test]
    fn bezout() {
        let a = fp(7, &[1, 2, 0, 1]);
        let b = fp(7, &[3, 0, 1]);
        let (g, s, t) = xgcd(&a, &b);
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn roots_and_sqrt() {
        assert_eq!(roots(&fp(7, &[6, 0, 1])), vec![1, 6]);
        assert_eq!(roots(&fp(7, &[1, 0, 1])), Vec::<u64>::new());
        for p in [3u64, 5, 13, 17, 97, 65537] {
            for a in 0..p.min(200) {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(!is_qr(a, p)),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
            c in prop::collection::vec(0u64..1000, 2..10),
        ) {
            let f = FpPoly::new(p, c).monic();
            prop_assume!(f.degree().unwrap_or(0) >= 1);
            let parts = factor(&f);
            let mut prod = FpPoly::one(p);
            for (q, e) in &parts {
                prop_assert!(is_irreducible_bruteforce(q));
                prop_assert_eq!(q.lc(), 1);
                for _ in 0..*e { prod = prod.mul(q); }
            }
            prop_assert_eq!(prod, f);
        }
    }
}
