//! The hyperoctahedral group `S_2 wr S_n = F_2^n x| S_n`.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{RecipError, Result};

pub type Perm = Vec<u8>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// `a . b`: apply `b` first.
pub fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

pub fn inverse(a: &[u8]) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// Cycle lengths in decreasing order, fixed points included.
pub fn cycle_type(a: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for i in 0..a.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = a[j] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// `+1` or `-1`.
pub fn sign(a: &[u8]) -> i32 {
    let odd = cycle_type(a).iter().filter(|&&l| l % 2 == 0).count() % 2;
    if odd == 1 {
        -1
    } else {
        1
    }
}

/// The transposition `(1 2)` and the cycle `(1 2 ... n)`.
pub fn sn_generators(n: usize) -> [Perm; 2] {
    let mut s = identity_perm(n);
    if n >= 2 {
        s.swap(0, 1);
    }
    let c = (0..n).map(|i| ((i + 1) % n) as u8).collect();
    [s, c]
}

/// `sigma(w)`: coordinate `i` moves to `sigma(i)`.
pub fn permute_bits(w: u64, sigma: &[u8]) -> u64 {
    let mut out = 0;
    for (i, &t) in sigma.iter().enumerate() {
        if w >> i & 1 == 1 {
            out |= 1 << t;
        }
    }
    out
}

fn ones(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElement {
    /// Bit `i` is the coordinate `v_i`.
    pub v: u64,
    pub sigma: Perm,
}

impl WreathElement {
    pub fn identity(n: usize) -> Self {
        WreathElement {
            v: 0,
            sigma: identity_perm(n),
        }
    }

    pub fn new(v: &[u8], sigma: Perm) -> Result<Self> {
        if v.len() != sigma.len() || v.len() > 64 {
            return Err(RecipError::Shape(format!(
                "vector length {} vs permutation length {}",
                v.len(),
                sigma.len()
            )));
        }
        let mut seen = vec![false; sigma.len()];
        for &t in &sigma {
            if (t as usize) >= sigma.len() || seen[t as usize] {
                return Err(RecipError::Shape("not a permutation".into()));
            }
            seen[t as usize] = true;
        }
        let bits = v.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i));
        Ok(WreathElement { v: bits, sigma })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn v_vec(&self) -> Vec<u8> {
        (0..self.n()).map(|i| (self.v >> i & 1) as u8).collect()
    }

    pub fn weight(&self) -> u32 {
        self.v.count_ones()
    }

    /// `(v, s)(w, t) = (v + s(w), s t)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(RecipError::Shape(format!("n = {} vs n = {}", self.n(), other.n())));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        WreathElement {
            v: self.v ^ permute_bits(other.v, &self.sigma),
            sigma: compose(&self.sigma, &other.sigma),
        }
    }

    pub fn inverse(&self) -> Self {
        let si = inverse(&self.sigma);
        WreathElement {
            v: permute_bits(self.v, &si),
            sigma: si,
        }
    }

    /// Point `2i + s` goes to `2 sigma(i) + (s + v_{sigma(i)})`.
    pub fn embed_2n(&self) -> Perm {
        let n = self.n();
        let mut out = vec![0u8; 2 * n];
        for i in 0..n {
            let t = self.sigma[i] as usize;
            let flip = (self.v >> t & 1) as usize;
            for s in 0..2 {
                out[2 * i + s] = (2 * t + (s ^ flip)) as u8;
            }
        }
        out
    }

    /// `embed_2n` on the first `2n` points and `sigma` on the last `n`.
    pub fn embed_3n(&self) -> Perm {
        let n = self.n();
        let mut out = self.embed_2n();
        out.extend(self.sigma.iter().map(|&t| t + 2 * n as u8));
        out
    }

    fn key(&self) -> u64 {
        let n = self.n();
        let mut k = 0u64;
        for &t in self.sigma.iter().rev() {
            k = k * n as u64 + t as u64;
        }
        (k << n) | self.v
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.v_vec() {
            write!(f, "{b}")?;
        }
        f.write_str("|")?;
        for &t in &self.sigma {
            write!(f, "{}", t + 1)?;
        }
        Ok(())
    }
}

/// Closure under multiplication; `None` if it grows past `limit`.
pub fn closure(gens: &[WreathElement], n: usize, limit: usize) -> Option<Vec<WreathElement>> {
    let id = WreathElement::identity(n);
    let mut seen: HashSet<WreathElement> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul_unchecked(g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    Some(out)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn wreath_order(n: usize) -> usize {
    factorial(n) << n
}

pub fn all_elements(n: usize) -> Vec<WreathElement> {
    let [s, c] = sn_generators(n);
    let mut gens = vec![
        WreathElement { v: 0, sigma: s },
        WreathElement { v: 0, sigma: c },
    ];
    if n > 0 {
        gens.push(WreathElement {
            v: 1,
            sigma: identity_perm(n),
        });
    }
    closure(&gens, n, usize::MAX).unwrap()
}

// ---------------------------------------------------------------------------
// invariant subspaces

/// A subspace of `F_2^n` in reduced echelon form, pivots at the highest set bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<u64>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: vec![] }
    }

    pub fn span(n: usize, vectors: &[u64]) -> Self {
        let mut s = Subspace::zero(n);
        for &v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        for &b in &self.basis {
            let top = 63 - b.leading_zeros();
            if v >> top & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let top = 63 - r.leading_zeros();
        for b in self.basis.iter_mut() {
            if *b >> top & 1 == 1 {
                *b ^= r;
            }
        }
        self.basis.push(r);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn elements(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        for &b in &self.basis {
            let more: Vec<u64> = out.iter().map(|x| x ^ b).collect();
            out.extend(more);
        }
        out.sort_unstable();
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn is_invariant(&self) -> bool {
        sn_generators(self.n)
            .iter()
            .all(|g| self.basis.iter().all(|&b| self.contains(permute_bits(b, g))))
    }

    /// `<1>`
    pub fn ones(n: usize) -> Self {
        Subspace::span(n, &[ones(n)])
    }

    /// `<1>^perp`, the even-weight vectors.
    pub fn ones_perp(n: usize) -> Self {
        Subspace::span(n, &(1..n).map(|i| 1u64 | 1 << i).collect::<Vec<_>>())
    }

    pub fn full(n: usize) -> Self {
        Subspace::span(n, &(0..n).map(|i| 1u64 << i).collect::<Vec<_>>())
    }
}

fn cyclic_submodule(n: usize, v: u64) -> Subspace {
    let gens = sn_generators(n);
    let mut s = Subspace::zero(n);
    let mut queue = vec![v];
    while let Some(x) = queue.pop() {
        if s.insert(x) {
            for g in &gens {
                queue.push(permute_bits(x, g));
            }
        }
    }
    s
}

/// All `S_n`-invariant subspaces of `F_2^n`, by dimension.
pub fn invariant_subspaces(n: usize) -> Result<Vec<Subspace>> {
    if n == 0 || n > 64 {
        return Err(RecipError::Domain(format!("n = {n} out of range 1..=64")));
    }
    let cyclic: BTreeSet<Subspace> = (0..=n).map(|w| cyclic_submodule(n, ones(w))).collect();
    let mut all: BTreeSet<Subspace> = cyclic.clone();
    loop {
        let mut added = false;
        let current: Vec<Subspace> = all.iter().cloned().collect();
        for a in &current {
            for b in &cyclic {
                let mut s = a.clone();
                for &x in &b.basis {
                    s.insert(x);
                }
                added |= all.insert(s);
            }
        }
        if !added {
            break;
        }
    }
    let mut out: Vec<Subspace> = all.into_iter().collect();
    out.sort_by_key(|s| (s.dim(), s.basis.clone()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// cohomology

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quotient {
    /// `X`
    Full,
    /// `X / <1>`
    ModOnes,
    /// `X / <1>^perp`
    ModOnesPerp,
}

impl Quotient {
    pub fn kernel(self, n: usize) -> Subspace {
        match self {
            Quotient::Full => Subspace::zero(n),
            Quotient::ModOnes => Subspace::ones(n),
            Quotient::ModOnesPerp => Subspace::ones_perp(n),
        }
    }
}

impl std::str::FromStr for Quotient {
    type Err = RecipError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" => Ok(Quotient::Full),
            "X_mod_1" => Ok(Quotient::ModOnes),
            "X_mod_1perp" => Ok(Quotient::ModOnesPerp),
            _ => Err(RecipError::Parse(format!("unknown quotient {s:?}"))),
        }
    }
}

/// A 1-cocycle `S_n -> X/K`, recorded by its values on `(1 2)` and `(1 2 ... n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocycle {
    pub on_transposition: u64,
    pub on_cycle: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleCount {
    pub n: usize,
    pub quotient: Quotient,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

/// Closure of `(a, s), (b, c)` in `(X/K) x| S_n`, reducing vectors mod `K`; `None` past `limit`.
fn quotient_closure(k: &Subspace, gens: &[(u64, Perm)], limit: usize) -> Option<usize> {
    let n = k.n;
    let id = (0u64, identity_perm(n));
    let mut seen: HashSet<(u64, Perm)> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some((v, s)) = queue.pop_front() {
        for (w, t) in gens {
            let y = (k.reduce(v ^ permute_bits(*w, &s)), compose(&s, t));
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

/// Cocycles `S_n -> X/K`: the pairs of generator images whose lifts generate a complement.
pub fn cocycles(n: usize, quotient: Quotient) -> Result<Vec<Cocycle>> {
    if n == 0 || n > 5 {
        return Err(RecipError::Resource(format!("cocycle enumeration supports 1 <= n <= 5, got {n}")));
    }
    let k = quotient.kernel(n);
    let reps: Vec<u64> = (0..1u64 << n).filter(|&v| k.reduce(v) == v).collect();
    let [s, c] = sn_generators(n);
    let order = factorial(n);
    let mut out = Vec::new();
    for &a in &reps {
        for &b in &reps {
            let gens = [(a, s.clone()), (b, c.clone())];
            if quotient_closure(&k, &gens, order) == Some(order) {
                out.push(Cocycle {
                    on_transposition: a,
                    on_cycle: b,
                });
            }
        }
    }
    Ok(out)
}

pub fn cocycle_space(n: usize, quotient: Quotient) -> Result<CocycleCount> {
    let z = cocycles(n, quotient)?;
    let k = quotient.kernel(n);
    let [s, c] = sn_generators(n);
    let boundaries: BTreeSet<(u64, u64)> = (0..1u64 << n)
        .map(|y| {
            (
                k.reduce(permute_bits(y, &s) ^ y),
                k.reduce(permute_bits(y, &c) ^ y),
            )
        })
        .collect();
    Ok(CocycleCount {
        n,
        quotient,
        z1: z.len(),
        b1: boundaries.len(),
        h1: z.len() / boundaries.len(),
    })
}

/// Extends a cocycle to every element of `S_n` through `eps(st) = eps(s) + s(eps(t))`.
pub fn extend_cocycle(n: usize, quotient: Quotient, z: &Cocycle) -> BTreeMap<Perm, u64> {
    let k = quotient.kernel(n);
    let [s, c] = sn_generators(n);
    let gens = [(s, z.on_transposition), (c, z.on_cycle)];
    let mut eps: BTreeMap<Perm, u64> = BTreeMap::from([(identity_perm(n), 0)]);
    let mut queue = VecDeque::from([identity_perm(n)]);
    while let Some(x) = queue.pop_front() {
        let ex = eps[&x];
        for (g, eg) in &gens {
            // eps(x g) = eps(x) + x(eps(g))
            let y = compose(&x, g);
            if !eps.contains_key(&y) {
                eps.insert(y.clone(), k.reduce(ex ^ permute_bits(*eg, &x)));
                queue.push_back(y);
            }
        }
    }
    eps
}

// ---------------------------------------------------------------------------
// subgroups

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tag {
    Full,
    G1,
    G2,
    G3,
    SnPlain,
    SnTwisted,
    Exc2S4,
    Other,
}

impl Tag {
    pub const ALL: [Tag; 8] = [
        Tag::Full,
        Tag::G1,
        Tag::G2,
        Tag::G3,
        Tag::SnPlain,
        Tag::SnTwisted,
        Tag::Exc2S4,
        Tag::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Full => "FULL",
            Tag::G1 => "G1",
            Tag::G2 => "G2",
            Tag::G3 => "G3",
            Tag::SnPlain => "SN_PLAIN",
            Tag::SnTwisted => "SN_TWISTED",
            Tag::Exc2S4 => "EXC_2S4",
            Tag::Other => "OTHER",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubgroupDescriptor {
    pub n: usize,
    pub tag: Tag,
    /// Further tags whose predicates the class also satisfies.
    pub aliases: Vec<Tag>,
    pub order: usize,
    pub index: usize,
    /// Maximal among proper subgroups surjecting onto `S_n`.
    pub maximal: bool,
    #[serde(skip)]
    pub generators: Vec<WreathElement>,
    /// Generators as `v|sigma` with `sigma` in one-line notation.
    pub generator_words: Vec<String>,
}

impl SubgroupDescriptor {
    fn from_generators(n: usize, tag: Tag, generators: Vec<WreathElement>) -> Self {
        let order = closure(&generators, n, usize::MAX).unwrap().len();
        SubgroupDescriptor {
            n,
            tag,
            aliases: vec![],
            order,
            index: wreath_order(n) / order,
            maximal: false,
            generator_words: generators.iter().map(|g| g.to_string()).collect(),
            generators,
        }
    }

    pub fn elements(&self) -> Vec<WreathElement> {
        closure(&self.generators, self.n, usize::MAX).unwrap()
    }
}

fn sgn_bit(sigma: &[u8]) -> u32 {
    (sign(sigma) < 0) as u32
}

pub fn in_g1(e: &WreathElement) -> bool {
    e.weight().is_multiple_of(2)
}

pub fn in_g2(e: &WreathElement) -> bool {
    e.weight() % 2 == sgn_bit(&e.sigma)
}

pub fn in_g3(e: &WreathElement) -> bool {
    e.v == 0 || e.v == ones(e.n())
}

fn in_plain(e: &WreathElement) -> bool {
    e.v == 0
}

fn in_twisted(e: &WreathElement) -> bool {
    e.v == if sgn_bit(&e.sigma) == 1 { ones(e.n()) } else { 0 }
}

/// Generators of the named subgroup for any `n >= 1`; `EXC_2S4` needs `n = 4`.
pub fn standard_subgroup(n: usize, tag: Tag) -> Result<SubgroupDescriptor> {
    if n == 0 || n > 16 {
        return Err(RecipError::Domain(format!("n = {n} out of range 1..=16")));
    }
    let [s, c] = sn_generators(n);
    let el = |v: u64, sigma: &Perm| WreathElement { v, sigma: sigma.clone() };
    let id = identity_perm(n);
    let c_odd = sgn_bit(&c) == 1;
    let all = ones(n);
    let gens = match tag {
        Tag::Full => vec![el(1, &id), el(0, &s), el(0, &c)],
        Tag::G1 => vec![el(if n >= 2 { 3 } else { 0 }, &id), el(0, &s), el(0, &c)],
        Tag::G2 => vec![
            el(if n >= 2 { 3 } else { 0 }, &id),
            el(1, &s),
            el(if c_odd { 1 } else { 0 }, &c),
        ],
        Tag::G3 => vec![el(all, &id), el(0, &s), el(0, &c)],
        Tag::SnPlain => vec![el(0, &s), el(0, &c)],
        Tag::SnTwisted => vec![el(if sgn_bit(&s) == 1 { all } else { 0 }, &s), el(if c_odd { all } else { 0 }, &c)],
        Tag::Exc2S4 => {
            let classes = overgroup_census(n)?;
            return classes
                .into_iter()
                .find(|d| d.tag == Tag::Exc2S4)
                .ok_or_else(|| RecipError::Domain(format!("no EXC_2S4 class for n = {n}")));
        }
        Tag::Other => return Err(RecipError::Domain("OTHER has no standard generators".into())),
    };
    Ok(SubgroupDescriptor::from_generators(n, tag, gens))
}

struct ClassInfo {
    canonical: Vec<u64>,
    rep: Vec<WreathElement>,
    generators: Vec<WreathElement>,
    tags: BTreeSet<Tag>,
}

fn conjugate_set(g: &WreathElement, gi: &WreathElement, h: &[WreathElement]) -> Vec<WreathElement> {
    h.iter().map(|x| g.mul_unchecked(x).mul_unchecked(gi)).collect()
}

/// Subgroups of `S_2 wr S_n` surjecting onto `S_n`, one per conjugacy class, largest first.
pub fn overgroup_census(n: usize) -> Result<Vec<SubgroupDescriptor>> {
    Ok(overgroup_census_with_containment(n)?.0)
}

/// As [`overgroup_census`], plus pairs `(i, j)` with class `i` properly inside a conjugate of class `j`.
pub fn overgroup_census_with_containment(
    n: usize,
) -> Result<(Vec<SubgroupDescriptor>, Vec<(usize, usize)>)> {
    if n == 0 || n > 4 {
        return Err(RecipError::Resource(format!(
            "exhaustive overgroup census supports 1 <= n <= 4, got {n}"
        )));
    }
    let group = all_elements(n);
    let inverses: Vec<WreathElement> = group.iter().map(|g| g.inverse()).collect();
    let [s, c] = sn_generators(n);
    let full = wreath_order(n);
    let nfact = factorial(n);

    let mut seen_sets: HashSet<Vec<u64>> = HashSet::new();
    let mut classes: BTreeMap<Vec<u64>, ClassInfo> = BTreeMap::new();
    for k in invariant_subspaces(n)? {
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                if k.reduce(a) != a || k.reduce(b) != b {
                    continue;
                }
                let mut gens: Vec<WreathElement> = k
                    .basis
                    .iter()
                    .map(|&x| WreathElement { v: x, sigma: identity_perm(n) })
                    .collect();
                gens.push(WreathElement { v: a, sigma: s.clone() });
                gens.push(WreathElement { v: b, sigma: c.clone() });
                let h = closure(&gens, n, full).unwrap();
                let kernel = h.iter().filter(|e| e.sigma == identity_perm(n)).count();
                // surjects by construction; the kernel must be K itself
                if kernel != 1 << k.dim() || h.len() != kernel * nfact {
                    continue;
                }
                let mut keys: Vec<u64> = h.iter().map(|e| e.key()).collect();
                keys.sort_unstable();
                if !seen_sets.insert(keys) {
                    continue;
                }
                let mut canonical: Option<Vec<u64>> = None;
                let mut tags = BTreeSet::new();
                for (g, gi) in group.iter().zip(&inverses) {
                    let conj = conjugate_set(g, gi, &h);
                    let mut ck: Vec<u64> = conj.iter().map(|e| e.key()).collect();
                    ck.sort_unstable();
                    if canonical.as_ref().is_none_or(|m| ck < *m) {
                        canonical = Some(ck);
                    }
                    if h.len() == 2 * nfact && conj.iter().all(in_g3) {
                        tags.insert(Tag::G3);
                    }
                    if h.len() == nfact && conj.iter().all(in_plain) {
                        tags.insert(Tag::SnPlain);
                    }
                    if h.len() == nfact && conj.iter().all(in_twisted) {
                        tags.insert(Tag::SnTwisted);
                    }
                }
                let canonical = canonical.unwrap();
                for ck in seen_by_conjugation(&group, &inverses, &h) {
                    seen_sets.insert(ck);
                }
                if h.len() == full {
                    tags.insert(Tag::Full);
                }
                if 2 * h.len() == full && h.iter().all(in_g1) {
                    tags.insert(Tag::G1);
                }
                if 2 * h.len() == full && h.iter().all(in_g2) {
                    tags.insert(Tag::G2);
                }
                if n == 4 && h.len() == 48 && h.iter().all(in_g2) && !tags.contains(&Tag::G3) {
                    tags.insert(Tag::Exc2S4);
                }
                if tags.is_empty() {
                    tags.insert(Tag::Other);
                }
                classes.entry(canonical.clone()).or_insert(ClassInfo {
                    canonical,
                    rep: h,
                    generators: gens,
                    tags,
                });
            }
        }
    }

    let mut infos: Vec<ClassInfo> = classes.into_values().collect();
    infos.sort_by(|a, b| {
        b.rep
            .len()
            .cmp(&a.rep.len())
            .then_with(|| a.tags.iter().next().cmp(&b.tags.iter().next()))
            .then_with(|| a.canonical.cmp(&b.canonical))
    });

    let mut containment = Vec::new();
    for (i, a) in infos.iter().enumerate() {
        for (j, b) in infos.iter().enumerate() {
            if i == j || a.rep.len() >= b.rep.len() {
                continue;
            }
            let target: HashSet<u64> = b.rep.iter().map(|e| e.key()).collect();
            let inside = group.iter().zip(&inverses).any(|(g, gi)| {
                conjugate_set(g, gi, &a.rep)
                    .iter()
                    .all(|e| target.contains(&e.key()))
            });
            if inside {
                containment.push((i, j));
            }
        }
    }

    let out = infos
        .into_iter()
        .enumerate()
        .map(|(i, info)| {
            let mut tags = info.tags.into_iter();
            let tag = tags.next().unwrap();
            let order = info.rep.len();
            SubgroupDescriptor {
                n,
                tag,
                aliases: tags.collect(),
                order,
                index: full / order,
                maximal: order < full && containment.iter().all(|&(a, b)| a != i || b == 0),
                generator_words: info.generators.iter().map(|g| g.to_string()).collect(),
                generators: info.generators,
            }
        })
        .collect();
    Ok((out, containment))
}

fn seen_by_conjugation(
    group: &[WreathElement],
    inverses: &[WreathElement],
    h: &[WreathElement],
) -> Vec<Vec<u64>> {
    group
        .iter()
        .zip(inverses)
        .map(|(g, gi)| {
            let mut k: Vec<u64> = conjugate_set(g, gi, h).iter().map(|e| e.key()).collect();
            k.sort_unstable();
            k
        })
        .collect()
}

/// Exact frequencies of cycle types of the `2n`-point action over the whole subgroup.
pub fn cycle_type_distribution(desc: &SubgroupDescriptor) -> Result<BTreeMap<Vec<usize>, Rational64>> {
    if desc.n > 6 {
        return Err(RecipError::Resource(format!("n = {} exceeds 6", desc.n)));
    }
    let elements = desc.elements();
    let total = elements.len() as i64;
    let mut counts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for e in &elements {
        *counts.entry(cycle_type(&e.embed_2n())).or_default() += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(k, v)| (k, Rational64::new(v, total)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(n: usize, rng: &mut ChaCha8Rng) -> WreathElement {
        let mut sigma = identity_perm(n);
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            sigma.swap(i, j);
        }
        WreathElement {
            v: rng.gen::<u64>() & ones(n),
            sigma,
        }
    }

    #[test]
    fn multiply_examples() {
        let x = WreathElement::new(&[1, 0], vec![1, 0]).unwrap();
        let xx = x.mul(&x).unwrap();
        assert_eq!(xx, WreathElement::new(&[1, 1], vec![0, 1]).unwrap());
        let f = WreathElement::new(&[1, 0], vec![0, 1]).unwrap();
        assert_eq!(f.mul(&f).unwrap(), WreathElement::identity(2));
        assert_eq!(WreathElement::identity(2).mul(&x).unwrap(), x);
        assert!(x.mul(&WreathElement::identity(3)).is_err());
        assert!(WreathElement::new(&[0, 0], vec![0, 0]).is_err());
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(WreathElement::identity(3).embed_2n(), identity_perm(6));
        let e = WreathElement::new(&[1, 0, 0], identity_perm(3)).unwrap();
        assert_eq!(e.embed_2n(), vec![1, 0, 2, 3, 4, 5]);
        assert_eq!(sign(&e.embed_2n()), -1);
        let t = WreathElement::new(&[0, 0, 0], vec![1, 0, 2]).unwrap();
        assert_eq!(sign(&t.embed_3n()), -1);
        assert_eq!(sign(&t.embed_2n()), 1);
    }

    #[test]
    fn sign_laws_exhaustive() {
        for n in 1..=4 {
            for e in all_elements(n) {
                let w = if e.weight() % 2 == 1 { -1 } else { 1 };
                assert_eq!(sign(&e.embed_2n()), w);
                assert_eq!(sign(&e.embed_3n()), w * sign(&e.sigma));
            }
        }
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        for n in 1..=3 {
            let all = all_elements(n);
            assert_eq!(all.len(), wreath_order(n));
            let images: HashSet<Perm> = all.iter().map(|e| e.embed_2n()).collect();
            assert_eq!(images.len(), all.len());
            for a in &all {
                for b in &all {
                    let ab = a.mul(b).unwrap();
                    assert_eq!(ab.embed_2n(), compose(&a.embed_2n(), &b.embed_2n()));
                    assert_eq!(ab.embed_3n(), compose(&a.embed_3n(), &b.embed_3n()));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(4..=6);
            let (a, b) = (random_element(n, &mut rng), random_element(n, &mut rng));
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.embed_2n(), compose(&a.embed_2n(), &b.embed_2n()));
            assert_eq!(ab.embed_3n(), compose(&a.embed_3n(), &b.embed_3n()));
        }
    }

    #[test]
    fn group_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=8);
            let a = random_element(n, &mut rng);
            let b = random_element(n, &mut rng);
            let c = random_element(n, &mut rng);
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(a.mul(&a.inverse()).unwrap(), WreathElement::identity(n));
        }
    }

    fn brute_force_invariant(n: usize) -> BTreeSet<Vec<u64>> {
        // every subspace of F_2^n as the span of some subset of its vectors
        let mut out = BTreeSet::new();
        let total = 1u64 << n;
        for mask in 0u64..(1 << total) {
            if mask & 1 == 0 {
                continue;
            }
            let set: Vec<u64> = (0..total).filter(|&v| mask >> v & 1 == 1).collect();
            let closed = set.iter().all(|&a| set.iter().all(|&b| mask >> (a ^ b) & 1 == 1));
            if closed && Subspace::span(n, &set).is_invariant() {
                out.insert(set);
            }
        }
        out
    }

    #[test]
    fn invariant_subspace_lists() {
        let three = invariant_subspaces(3).unwrap();
        assert_eq!(three.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let two = invariant_subspaces(2).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[1], Subspace::ones(2));
        assert_eq!(Subspace::ones(2), Subspace::ones_perp(2));
        assert!(Subspace::ones(4).is_subspace_of(&Subspace::ones_perp(4)));
        assert!(!Subspace::ones(3).is_subspace_of(&Subspace::ones_perp(3)));
        assert_eq!(invariant_subspaces(1).unwrap().len(), 2);
        assert_eq!(invariant_subspaces(20).unwrap().len(), 4);
        for n in 1..=4 {
            let ours: BTreeSet<Vec<u64>> = invariant_subspaces(n).unwrap().iter().map(|s| s.elements()).collect();
            assert_eq!(ours, brute_force_invariant(n), "n = {n}");
        }
    }

    #[test]
    fn cohomology_sizes() {
        for n in 2..=5 {
            assert_eq!(cocycle_space(n, Quotient::ModOnesPerp).unwrap().h1, 2, "n = {n}");
        }
        for n in [3, 5] {
            assert_eq!(cocycle_space(n, Quotient::ModOnes).unwrap().h1, 1);
            assert_eq!(cocycle_space(n, Quotient::Full).unwrap().h1, 2);
        }
        assert!(cocycle_space(6, Quotient::Full).is_err());
    }

    #[test]
    fn cocycles_satisfy_the_condition() {
        for n in 2..=4 {
            for q in [Quotient::Full, Quotient::ModOnes, Quotient::ModOnesPerp] {
                let k = q.kernel(n);
                for z in cocycles(n, q).unwrap() {
                    let eps = extend_cocycle(n, q, &z);
                    assert_eq!(eps.len(), factorial(n));
                    for (s, es) in &eps {
                        for (t, et) in &eps {
                            let st = compose(s, t);
                            assert_eq!(eps[&st], k.reduce(es ^ permute_bits(*et, s)));
                        }
                    }
                }
            }
        }
    }

    fn tags_with_orders(n: usize) -> Vec<(Tag, usize)> {
        overgroup_census(n).unwrap().iter().map(|d| (d.tag, d.order)).collect()
    }

    #[test]
    fn census_n3() {
        assert_eq!(
            tags_with_orders(3),
            vec![
                (Tag::Full, 48),
                (Tag::G1, 24),
                (Tag::G2, 24),
                (Tag::G3, 12),
                (Tag::SnPlain, 6),
                (Tag::SnTwisted, 6)
            ]
        );
        let maximal: Vec<Tag> = overgroup_census(3).unwrap().iter().filter(|d| d.maximal).map(|d| d.tag).collect();
        assert_eq!(maximal, vec![Tag::G1, Tag::G2, Tag::G3]);
    }

    #[test]
    fn census_n2() {
        let c = overgroup_census(2).unwrap();
        assert_eq!(
            c.iter().map(|d| (d.tag, d.order)).collect::<Vec<_>>(),
            vec![(Tag::Full, 8), (Tag::G1, 4), (Tag::G2, 4), (Tag::SnPlain, 2)]
        );
        assert_eq!(c[1].aliases, vec![Tag::G3]);
        assert_eq!(c[3].aliases, vec![Tag::SnTwisted]);
    }

    #[test]
    fn census_n4_exceptional() {
        let (c, contains) = overgroup_census_with_containment(4).unwrap();
        let tags: Vec<(Tag, usize)> = c.iter().map(|d| (d.tag, d.order)).collect();
        assert_eq!(tags.len(), 7);
        for want in [
            (Tag::Full, 384),
            (Tag::G1, 192),
            (Tag::G2, 192),
            (Tag::G3, 48),
            (Tag::Exc2S4, 48),
            (Tag::SnPlain, 24),
            (Tag::SnTwisted, 24),
        ] {
            assert!(tags.contains(&want), "{want:?} missing from {tags:?}");
        }
        let idx = |t: Tag| c.iter().position(|d| d.tag == t).unwrap();
        assert!(contains.contains(&(idx(Tag::Exc2S4), idx(Tag::G2))));
        assert!(!c[idx(Tag::Exc2S4)].maximal);
        assert!(c[idx(Tag::G3)].aliases.is_empty());
        assert!(overgroup_census(5).is_err());
    }

    #[test]
    fn standard_subgroups() {
        for n in 1..=5 {
            let o = |t| standard_subgroup(n, t).unwrap().order;
            let nf = factorial(n);
            assert_eq!(o(Tag::Full), wreath_order(n));
            assert_eq!(o(Tag::SnPlain), nf);
            assert_eq!(o(Tag::SnTwisted), nf);
            assert_eq!(o(Tag::G3), if n == 1 { 2 } else { 2 * nf });
            if n >= 2 {
                assert_eq!(o(Tag::G1), wreath_order(n) / 2);
                assert_eq!(o(Tag::G2), wreath_order(n) / 2);
                assert!(standard_subgroup(n, Tag::G1).unwrap().elements().iter().all(in_g1));
                assert!(standard_subgroup(n, Tag::G2).unwrap().elements().iter().all(in_g2));
            }
        }
        // G1 meets G3 in the plain copy for odd n
        for n in [3, 5] {
            let g3 = standard_subgroup(n, Tag::G3).unwrap().elements();
            let meet: Vec<_> = g3.iter().filter(|e| in_g1(e)).collect();
            assert_eq!(meet.len(), factorial(n));
            assert!(meet.iter().all(|e| e.v == 0));
        }
        assert_eq!(standard_subgroup(4, Tag::Exc2S4).unwrap().order, 48);
    }

    #[test]
    fn distributions() {
        let d = cycle_type_distribution(&standard_subgroup(2, Tag::Full).unwrap()).unwrap();
        assert_eq!(d[&vec![1, 1, 1, 1]], Rational64::new(1, 8));
        let total: Rational64 = d.values().sum();
        assert!(total.is_one());
        let d = cycle_type_distribution(&standard_subgroup(3, Tag::G3).unwrap()).unwrap();
        assert!(d[&vec![2, 2, 2]] >= Rational64::new(1, 12));
        let g1 = standard_subgroup(2, Tag::G1).unwrap();
        assert!(g1.elements().iter().all(|e| sign(&e.embed_2n()) == 1));
        assert!(!cycle_type_distribution(&g1).unwrap().values().any(|r| r.is_zero()));
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_element(n, &mut rng);
            prop_assert_eq!(a.inverse().mul(&a).unwrap(), WreathElement::identity(n));
            prop_assert_eq!(a.inverse().inverse(), a);
        }
    }
}
