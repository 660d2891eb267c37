//! Integer utilities: squares, primes, factorization, radicals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{RecipError, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const RHO_ITER_LIMIT: u64 = 50_000_000;

pub fn is_square_int(m: &BigInt) -> bool {
    if m.is_negative() {
        return false;
    }
    let r = m.sqrt();
    &r * &r == *m
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2u64;
    while out.len() < count {
        if is_prime_u64(k) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Miller–Rabin with the first 64 primes as bases.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for a in small_primes(64) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes in increasing order starting from `start`.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(2)..).filter(|&k| is_prime_u64(k))
}

fn rho_u64(n: u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x;
        let mut g;
        let mut ys;
        let mut iters = 0u64;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            iters += r;
            if g != 1 || iters > RHO_ITER_LIMIT {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n && g != 1 {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1..64u32 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x;
        let mut g;
        let mut ys;
        let mut iters = 0u64;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            loop {
                ys = y.clone();
                for _ in 0..(r - k).min(128) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += 128;
                if k >= r || g != one {
                    break;
                }
            }
            r *= 2;
            iters += r;
            if g != one || iters > RHO_ITER_LIMIT / 16 {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n && g != one {
            return Some(g);
        }
    }
    None
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_probable_prime(&n) {
        out.push(n);
        return Ok(());
    }
    let d = match n.to_u64() {
        Some(v) => rho_u64(v).map(BigUint::from),
        None => rho_big(&n),
    };
    let d = d.ok_or_else(|| RecipError::Resource(format!("could not split {n}")))?;
    let e = &n / &d;
    split_into(d, out)?;
    split_into(e, out)
}

/// Prime factorization of `|m|` as `(p, v_p)` pairs in increasing order; `m = 0` is a domain error.
pub fn factorize(m: &BigInt) -> Result<Vec<(BigUint, u32)>> {
    if m.is_zero() {
        return Err(RecipError::Domain("factorization of zero".into()));
    }
    let mut n = m.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && !n.is_one() {
        if let Some(v) = n.to_u64() {
            if p.saturating_mul(p) > v {
                break;
            }
            if v % p == 0 {
                let mut v = v;
                while v % p == 0 {
                    v /= p;
                    primes.push(BigUint::from(p));
                }
                n = BigUint::from(v);
                if is_prime_u64(v) {
                    break;
                }
            }
        } else {
            let bp = BigUint::from(p);
            while (&n % &bp).is_zero() {
                n /= &bp;
                primes.push(bp.clone());
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(n, &mut primes)?;
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    Ok(out)
}

/// Signed squarefree part: `m = sqfree(m) * s^2` with `sqfree(m)` squarefree and of the sign of `m`.
pub fn squarefree_part(m: &BigInt) -> Result<BigInt> {
    if m.is_zero() {
        return Ok(BigInt::zero());
    }
    let mut k = BigInt::one();
    for (p, e) in factorize(m)? {
        if e % 2 == 1 {
            k *= BigInt::from_biguint(Sign::Plus, p);
        }
    }
    Ok(if m.is_negative() { -k } else { k })
}

/// `v_p(m)`; `None` for `m = 0`.
pub fn valuation(m: &BigInt, p: u64) -> Option<u32> {
    if m.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = m.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Radical `C = prod p` and smallest square multiple root `D' = prod p^{ceil(v/2)}` of `D >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SieveParams {
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub d: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub c: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub d_prime: BigInt,
}

pub fn radical_and_square_multiple(d: &BigInt) -> Result<SieveParams> {
    if d.is_negative() || d.is_zero() {
        return Err(RecipError::Domain(format!("expected D >= 1, got {d}")));
    }
    let mut c = BigInt::one();
    let mut dp = BigInt::one();
    for (p, e) in factorize(d)? {
        let p = BigInt::from_biguint(Sign::Plus, p);
        dp *= num_traits::pow(p.clone(), e.div_ceil(2) as usize);
        c *= p;
    }
    Ok(SieveParams {
        d: d.clone(),
        c,
        d_prime: dp,
    })
}
