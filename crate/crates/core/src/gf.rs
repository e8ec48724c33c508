//! Finite-field towers GF(p) ⊆ GF(q) ⊆ GF(q^k) with q = p^m.
//!
//! A [`FieldSpec`] realizes the top field GF(q^k) as GF(p)\[x\]/(modulus) where
//! the modulus is the lexicographically smallest monic irreducible polynomial
//! of degree m·k over GF(p) (coefficients compared constant term first).  The
//! intermediate field GF(q) is never represented separately: it is the fixed
//! set of the relative Frobenius a ↦ a^q, and rational data is data with
//! Frobenius-fixed entries.
//!
//! A [`Scalar`] is a compact index: the base-p coefficient vector of the
//! residue, packed little-endian (constant coefficient in the lowest digit).
//! Multiplicative structure is table-driven (discrete exp/log against a fixed
//! generator), so mul/inv/pow/Frobenius are O(1) lookups; addition works on
//! the digits.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Shared handle to a field; all aggregate types clone this.
pub type Field = Arc<FieldSpec>;

/// Default ceiling on |GF(q^k)| = p^{m·k}.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Hard ceiling regardless of caller overrides; keeps the exp/log tables sane.
const HARD_FIELD_CAP: u64 = 1 << 22;

#[derive(Debug, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("m and k must be at least 1")]
    BadDegree,
    #[error("field size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("coefficient {value} out of range for characteristic {p}")]
    CoefficientRange { value: u64, p: u64 },
    #[error("got {got} coefficients, field degree is {expected}")]
    TooManyCoefficients { got: usize, expected: usize },
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("scalar is not fixed by the relative Frobenius")]
    NotRational,
    #[error("fields are incompatible (different p or m)")]
    IncompatibleFields,
}

/// Element of a [`FieldSpec`], stored as the packed coefficient index.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn from_index(i: u32) -> Scalar {
        Scalar(i)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A concrete tower GF(p) ⊆ GF(p^m) ⊆ GF(p^{m·k}) with arithmetic tables.
pub struct FieldSpec {
    p: u64,
    m: u32,
    k: u32,
    /// Monic modulus of degree m·k, little-endian coefficients over GF(p).
    modulus: Vec<u64>,
    size: u32,
    q: u64,
    /// p^i for i = 0..=deg.
    ppow: Vec<u64>,
    /// exp[i] = g^i for i in 0..2·(size-1); doubled so mul needs no reduction.
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    /// frob[a] = a^q.
    frob: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldSpec(p={}, m={}, k={}, modulus={:?})",
            self.p, self.m, self.k, self.modulus
        )
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.m.hash(state);
        self.k.hash(state);
        self.modulus.hash(state);
    }
}

/// Builds GF(p^{m·k}) with the canonical modulus, under the default size cap.
pub fn make_field(p: u64, m: u32, k: u32) -> Result<Field, GfError> {
    make_field_with_cap(p, m, k, DEFAULT_FIELD_CAP)
}

/// Same as [`make_field`] with an explicit size cap (still hard-limited).
pub fn make_field_with_cap(p: u64, m: u32, k: u32, cap: u64) -> Result<Field, GfError> {
    FieldSpec::new(p, m, k, cap).map(Arc::new)
}

impl FieldSpec {
    fn new(p: u64, m: u32, k: u32, cap: u64) -> Result<FieldSpec, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 || k == 0 {
            return Err(GfError::BadDegree);
        }
        let deg = (m * k) as usize;
        let cap = cap.min(HARD_FIELD_CAP);
        let size128 = (p as u128).checked_pow(deg as u32).unwrap_or(u128::MAX);
        if size128 > cap as u128 {
            return Err(GfError::CapExceeded { size: size128, cap });
        }
        let size = size128 as u32;
        let modulus = canonical_modulus(p, deg);
        let mut ppow = Vec::with_capacity(deg + 1);
        let mut acc = 1u64;
        for _ in 0..=deg {
            ppow.push(acc);
            acc = acc.saturating_mul(p);
        }
        let q = ppow[m as usize];

        let ord = (size - 1) as u64;
        let gen = find_generator(p, &modulus, size);
        let mut exp = vec![0u32; (2 * ord.max(1)) as usize];
        let mut log = vec![0u32; size as usize];
        let gen_poly = decode(gen, p, deg);
        let mut cur = vec![0u64; deg];
        cur[0] = 1;
        for i in 0..ord {
            let idx = encode(&cur, p);
            exp[i as usize] = idx;
            log[idx as usize] = i as u32;
            cur = poly_mul_mod(&cur, &gen_poly, &modulus, p);
        }
        debug_assert_eq!(encode(&cur, p), 1, "generator order must be size-1");
        for i in 0..ord {
            exp[(ord + i) as usize] = exp[i as usize];
        }

        let mut spec = FieldSpec {
            p,
            m,
            k,
            modulus,
            size,
            q,
            ppow,
            exp,
            log,
            frob: Vec::new(),
        };
        let frob: Vec<u32> = (0..size)
            .map(|a| spec.pow(Scalar(a), spec.q as u128).0)
            .collect();
        spec.frob = frob;
        Ok(spec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Degree m·k of the top field over the prime field.
    pub fn degree(&self) -> usize {
        (self.m * self.k) as usize
    }

    /// q = p^m, the size of the intermediate field.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// p^{m·k}, the size of the top field.
    pub fn size(&self) -> u64 {
        self.size as u64
    }

    /// Little-endian coefficients of the modulus, length degree+1, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.p == 2 {
            return Scalar(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree() {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Scalar(out as u32)
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0 as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree() {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            x /= self.p;
            place *= self.p;
        }
        Scalar(out as u32)
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Scalar(self.exp[i])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let ord = (self.size - 1) as usize;
        Ok(Scalar(self.exp[ord - self.log[a.0 as usize] as usize]))
    }

    /// a^e with the convention 0^0 = 1.
    pub fn pow(&self, a: Scalar, e: u128) -> Scalar {
        if a.0 == 0 {
            return if e == 0 { Scalar::ONE } else { Scalar::ZERO };
        }
        let ord = (self.size - 1) as u128;
        if ord == 0 {
            return Scalar::ONE;
        }
        let e = (e % ord) as u64;
        let i = (self.log[a.0 as usize] as u64 * e) % ord as u64;
        Scalar(self.exp[i as usize])
    }

    /// Relative Frobenius a ↦ a^q.
    pub fn frobenius_q(&self, a: Scalar) -> Scalar {
        Scalar(self.frob[a.0 as usize])
    }

    /// t-fold relative Frobenius a ↦ a^{q^t}.
    pub fn frobenius_pow(&self, a: Scalar, t: u32) -> Scalar {
        let mut x = a;
        for _ in 0..t {
            x = self.frobenius_q(x);
        }
        x
    }

    /// True iff a lies in GF(q), the fixed field of the relative Frobenius.
    pub fn in_base_field(&self, a: Scalar) -> bool {
        self.frob[a.0 as usize] == a.0
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar, GfError> {
        if coeffs.len() > self.degree() {
            return Err(GfError::TooManyCoefficients {
                got: coeffs.len(),
                expected: self.degree(),
            });
        }
        let mut idx = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return Err(GfError::CoefficientRange { value: c, p: self.p });
            }
            idx += c * self.ppow[i];
        }
        Ok(Scalar(idx as u32))
    }

    /// Base-p coefficients of a, constant term first, length = degree.
    pub fn coeffs(&self, a: Scalar) -> Vec<u64> {
        let mut x = a.0 as u64;
        (0..self.degree())
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// Parses `"c0,c1,..."`; a bare integer means a prime-field constant.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, GfError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(GfError::ParseScalar(text.into()));
        }
        let coeffs: Result<Vec<u64>, _> = text.split(',').map(|t| t.trim().parse::<u64>()).collect();
        let coeffs = coeffs.map_err(|_| GfError::ParseScalar(text.into()))?;
        self.from_coeffs(&coeffs)
    }

    /// Formats a as its coefficient list; prime fields print a bare integer.
    pub fn scalar_text(&self, a: Scalar) -> String {
        if self.degree() == 1 {
            return a.0.to_string();
        }
        self.coeffs(a)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// All field elements in index order.
    pub fn scalars(&self) -> impl Iterator<Item = Scalar> {
        (0..self.size).map(Scalar)
    }

    /// Rank of a in the text order (coefficient lists compared constant first).
    pub fn lex_rank(&self, a: Scalar) -> u64 {
        let coeffs = self.coeffs(a);
        let mut r = 0u64;
        for &c in &coeffs {
            r = r * self.p + c;
        }
        r
    }

    /// Element whose text-order rank is r; inverse of [`Self::lex_rank`].
    pub fn scalar_by_lex_rank(&self, r: u64) -> Scalar {
        // lex rank reads c_0 as the most significant digit
        let deg = self.degree();
        let mut idx = 0u64;
        let mut rem = r;
        // least significant base-p digit of the rank is c_{deg-1}
        for i in (0..deg).rev() {
            idx += rem % self.p * self.ppow[i];
            rem /= self.p;
        }
        debug_assert_eq!(rem, 0, "rank out of range");
        Scalar(idx as u32)
    }

    /// All field elements in text order.
    pub fn scalars_lex(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.size as u64).map(|r| self.scalar_by_lex_rank(r))
    }

    /// The q elements of GF(q) inside this field, in the canonical order of
    /// GF(q)'s own (p, m, 1) representation.  Index i holds the image of the
    /// scalar with index i in GF(p^m).
    pub fn base_embedding(&self) -> Vec<Scalar> {
        if self.k == 1 {
            return (0..self.size).map(Scalar).collect();
        }
        let g = canonical_modulus(self.p, self.m as usize);
        // z = the text-least root of the canonical GF(q) modulus in this field;
        // any root gives the same rational data up to a Galois twist, fixing
        // the least one makes embeddings reproducible.
        let mut roots: Vec<Scalar> = self
            .scalars()
            .filter(|&a| self.eval_prime_poly(&g, a).is_zero())
            .collect();
        roots.sort_by_key(|&a| self.lex_rank(a));
        let z = roots[0];
        (0..self.q)
            .map(|idx| {
                let mut x = idx;
                let mut acc = Scalar::ZERO;
                let mut zpow = Scalar::ONE;
                for _ in 0..self.m {
                    let d = x % self.p;
                    x /= self.p;
                    acc = self.add(acc, self.mul(self.prime_scalar(d), zpow));
                    zpow = self.mul(zpow, z);
                }
                acc
            })
            .collect()
    }

    /// Constant-polynomial scalar for a prime-field digit.
    fn prime_scalar(&self, d: u64) -> Scalar {
        debug_assert!(d < self.p);
        Scalar(d as u32)
    }

    fn eval_prime_poly(&self, poly: &[u64], x: Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        for &c in poly.iter().rev() {
            acc = self.add(self.mul(acc, x), self.prime_scalar(c));
        }
        acc
    }
}

/// Carries GF(q) elements between two towers over the same (p, m).
pub struct BaseTransfer {
    map: HashMap<Scalar, Scalar>,
}

impl BaseTransfer {
    pub fn new(from: &FieldSpec, to: &FieldSpec) -> Result<BaseTransfer, GfError> {
        if from.p != to.p || from.m != to.m {
            return Err(GfError::IncompatibleFields);
        }
        let src = from.base_embedding();
        let dst = to.base_embedding();
        let map = src.into_iter().zip(dst).collect();
        Ok(BaseTransfer { map })
    }

    pub fn apply(&self, a: Scalar) -> Result<Scalar, GfError> {
        self.map.get(&a).copied().ok_or(GfError::NotRational)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn encode(poly: &[u64], p: u64) -> u32 {
    let mut idx = 0u64;
    for &c in poly.iter().rev() {
        idx = idx * p + c;
    }
    idx as u32
}

fn decode(idx: u32, p: u64, deg: usize) -> Vec<u64> {
    let mut x = idx as u64;
    (0..deg)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Product of two residues mod a monic modulus, little-endian digits mod p.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..d {
            prod[i - d + j] = (prod[i - d + j] + c * (p - modulus[j]) % p) % p;
        }
    }
    prod.truncate(d);
    prod
}

fn poly_pow_mod(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let d = modulus.len() - 1;
    let mut result = vec![0u64; d];
    result[0] = 1;
    let mut acc = base.to_vec();
    acc.resize(d, 0);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &acc, modulus, p);
        }
        acc = poly_mul_mod(&acc, &acc, modulus, p);
        e >>= 1;
    }
    result
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        let db = match poly_deg(&b) {
            None => {
                // normalize a to be monic for a canonical answer
                if let Some(da) = poly_deg(&a) {
                    let inv = mod_inv(a[da], p);
                    for c in a.iter_mut() {
                        *c = *c * inv % p;
                    }
                    a.truncate(da + 1);
                } else {
                    a.clear();
                }
                return a;
            }
            Some(d) => d,
        };
        // a mod b
        while let Some(da) = poly_deg(&a) {
            if da < db {
                break;
            }
            let factor = a[da] * mod_inv(b[db], p) % p;
            for j in 0..=db {
                let sub = factor * b[j] % p;
                a[da - db + j] = (a[da - db + j] + p - sub) % p;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test over GF(p).  `f` is monic, little-endian.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match poly_deg(f) {
        Some(d) => d,
        None => return false,
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0, 1];
    // powers[j] = x^{p^j} mod f
    let mut cur = x.clone();
    cur.resize(d, 0);
    let mut powers = vec![cur.clone()];
    for _ in 0..d {
        cur = poly_pow_mod(&cur, p as u128, f, p);
        powers.push(cur.clone());
    }
    let mut xd = powers[d].clone();
    // x^{p^d} - x must be 0 mod f
    xd[1] = (xd[1] + p - 1) % p;
    if poly_deg(&xd).is_some() {
        return false;
    }
    for l in prime_factors(d as u64) {
        let mut h = powers[d / l as usize].clone();
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(&h, f, p);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of the given degree over
/// GF(p), coefficients compared constant term first.  Little-endian output.
pub(crate) fn canonical_modulus(p: u64, deg: usize) -> Vec<u64> {
    let total = (p as u128).pow(deg as u32);
    for t in 0..total {
        // decode t with c_0 as the most significant digit, so ascending t
        // walks candidates in lex order of (c_0, c_1, ...)
        let mut f = vec![0u64; deg + 1];
        f[deg] = 1;
        let mut rem = t;
        for j in (0..deg).rev() {
            f[j] = (rem % p as u128) as u64;
            rem /= p as u128;
        }
        // cheap screens before the Rabin test: a constant term of 0 or a
        // prime-field root means reducible (for deg >= 2)
        if deg >= 2 {
            if f[0] == 0 {
                continue;
            }
            let has_root = (0..p).any(|x| {
                f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0
            });
            if has_root {
                continue;
            }
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducibles of every degree exist over GF(p)")
}

fn find_generator(p: u64, modulus: &[u64], size: u32) -> u32 {
    let ord = (size - 1) as u64;
    if ord <= 1 {
        return 1;
    }
    let deg = modulus.len() - 1;
    let factors = prime_factors(ord);
    for cand in 2..size {
        let poly = decode(cand, p, deg);
        let primitive = factors.iter().all(|&l| {
            let pw = poly_pow_mod(&poly, (ord / l) as u128, modulus, p);
            encode(&pw, p) != 1
        });
        if primitive {
            return cand;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Root-counting irreducibility for quadratics: independent of the Rabin
    /// test used by the library.
    fn quadratic_irreducible_naive(c0: u64, c1: u64, p: u64) -> bool {
        (0..p).all(|x| !(x * x + c1 * x + c0).is_multiple_of(p))
    }

    #[test]
    fn gf4_modulus_is_the_unique_irreducible_quadratic() {
        let mut expected = None;
        for c0 in 0..2 {
            for c1 in 0..2 {
                if quadratic_irreducible_naive(c0, c1, 2) {
                    assert!(expected.is_none(), "GF(4) has one irreducible quadratic");
                    expected = Some(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(expected, Some(vec![1, 1, 1]));
        let f = make_field(2, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_is_lex_least_by_exhaustive_search() {
        // lex order on (c0, c1): scan c0 outer, c1 inner, take the first hit
        let mut expected = None;
        'outer: for c0 in 0..3 {
            for c1 in 0..3 {
                if quadratic_irreducible_naive(c0, c1, 3) {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(expected, Some(vec![1, 0, 1]), "x^2 + 1 over GF(3)");
        let f = make_field(3, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = make_field(2, 1, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.size(), 2);
        let g = make_field(7, 1, 1).unwrap();
        assert_eq!(g.size(), 7);
        assert_eq!(g.mul(Scalar(3), Scalar(5)), Scalar(1)); // 15 = 2*7 + 1
    }

    #[test]
    fn gf4_multiplication_table() {
        let f = make_field(2, 1, 2).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x1); // x^2 = x + 1
        assert_eq!(f.mul(x, x1), Scalar::ONE); // x(x+1) = x^2 + x = 1
        assert_eq!(f.inv(x).unwrap(), x1);
        assert_eq!(f.pow(x, 3), Scalar::ONE);
    }

    fn small_specs() -> Vec<Field> {
        [
            (2, 1, 1),
            (3, 1, 1),
            (5, 1, 1),
            (2, 1, 2),
            (2, 2, 1),
            (2, 1, 3),
            (2, 3, 1),
            (3, 1, 2),
            (3, 2, 1),
            (2, 2, 2),
            (3, 1, 4),
        ]
        .iter()
        .map(|&(p, m, k)| make_field(p, m, k).unwrap())
        .collect()
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for f in small_specs() {
            let els: Vec<Scalar> = f.scalars().collect();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
                assert_eq!(f.mul(a, Scalar::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE);
                    assert_eq!(f.pow(a, f.size() as u128 - 1), Scalar::ONE);
                }
            }
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in els.iter().take(9) {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
            assert!(f.inv(Scalar::ZERO).is_err());
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_full_order() {
        for f in small_specs() {
            let ord = f.size() - 1;
            let mut seen = vec![false; f.size() as usize];
            // the exp table must cover every nonzero element exactly once
            let mut cur = Scalar::ONE;
            let gen = f.exp[1.min((ord as usize).saturating_sub(1))];
            for _ in 0..ord {
                assert!(!seen[cur.index() as usize]);
                seen[cur.index() as usize] = true;
                cur = f.mul(cur, Scalar(gen));
            }
            assert_eq!(seen.iter().filter(|&&s| s).count() as u64, ord);
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism() {
        for f in small_specs() {
            let els: Vec<Scalar> = f.scalars().collect();
            for &a in &els {
                for &b in &els {
                    assert_eq!(
                        f.frobenius_q(f.add(a, b)),
                        f.add(f.frobenius_q(a), f.frobenius_q(b))
                    );
                    assert_eq!(
                        f.frobenius_q(f.mul(a, b)),
                        f.mul(f.frobenius_q(a), f.frobenius_q(b))
                    );
                }
                // k-fold relative Frobenius is the identity on GF(q^k)
                assert_eq!(f.frobenius_pow(a, f.k()), a);
            }
        }
    }

    #[test]
    fn base_field_has_exactly_q_fixed_points() {
        for f in small_specs() {
            let fixed = f.scalars().filter(|&a| f.in_base_field(a)).count() as u64;
            assert_eq!(fixed, f.q());
        }
    }

    #[test]
    fn frobenius_fixed_points_in_gf4_over_gf2() {
        let f = make_field(2, 1, 2).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.frobenius_q(x), x1);
        assert!(!f.in_base_field(x));
        assert!(f.in_base_field(Scalar::ZERO));
        assert!(f.in_base_field(Scalar::ONE));
    }

    #[test]
    fn scalar_text_round_trips() {
        for f in small_specs() {
            for a in f.scalars() {
                let text = f.scalar_text(a);
                assert_eq!(f.parse_scalar(&text).unwrap(), a);
            }
        }
        let f = make_field(2, 1, 2).unwrap();
        assert_eq!(f.parse_scalar("1,1").unwrap(), f.from_coeffs(&[1, 1]).unwrap());
        assert_eq!(f.parse_scalar("1").unwrap(), Scalar::ONE);
        assert!(f.parse_scalar("2,0").is_err());
        assert!(f.parse_scalar("0,0,1").is_err());
        assert!(f.parse_scalar("").is_err());
    }

    #[test]
    fn lex_order_reads_constant_coefficient_first() {
        let f = make_field(2, 1, 2).unwrap();
        let order: Vec<String> = f.scalars_lex().map(|a| f.scalar_text(a)).collect();
        assert_eq!(order, vec!["0,0", "0,1", "1,0", "1,1"]);
        for a in f.scalars() {
            assert_eq!(f.scalar_by_lex_rank(f.lex_rank(a)), a);
        }
    }

    #[test]
    fn base_embedding_is_a_ring_embedding() {
        // GF(4) = (2,2,1) into GF(16) = (2,2,2)
        let small = make_field(2, 2, 1).unwrap();
        let big = make_field(2, 2, 2).unwrap();
        let emb = big.base_embedding();
        assert_eq!(emb.len(), 4);
        for a in small.scalars() {
            assert!(big.in_base_field(emb[a.index() as usize]));
            for b in small.scalars() {
                let sum = small.add(a, b);
                let prod = small.mul(a, b);
                assert_eq!(
                    emb[sum.index() as usize],
                    big.add(emb[a.index() as usize], emb[b.index() as usize])
                );
                assert_eq!(
                    emb[prod.index() as usize],
                    big.mul(emb[a.index() as usize], emb[b.index() as usize])
                );
            }
        }
    }

    #[test]
    fn base_transfer_round_trips_through_towers() {
        let a = make_field(2, 2, 1).unwrap();
        let b = make_field(2, 2, 2).unwrap();
        let fwd = BaseTransfer::new(&a, &b).unwrap();
        let back = BaseTransfer::new(&b, &a).unwrap();
        for s in a.scalars() {
            let t = fwd.apply(s).unwrap();
            assert_eq!(back.apply(t).unwrap(), s);
        }
        // non-rational elements refuse to transfer
        let x = b.scalars().find(|&s| !b.in_base_field(s)).unwrap();
        assert!(back.apply(x).is_err());
        assert!(BaseTransfer::new(&a, &make_field(3, 1, 1).unwrap()).is_err());
    }

    #[test]
    fn constructor_rejects_bad_parameters() {
        assert!(matches!(make_field(4, 1, 1), Err(GfError::NotPrime(4))));
        assert!(matches!(make_field(2, 0, 1), Err(GfError::BadDegree)));
        assert!(matches!(
            make_field(2, 1, 30),
            Err(GfError::CapExceeded { .. })
        ));
        // the cap is overridable up to the hard ceiling
        assert!(make_field_with_cap(2, 1, 21, 1 << 21).is_ok());
    }
}
