//! Exact arithmetic in `Z_p` and `GF(p^e)`.
//!
//! Elements are stored by their canonical integer encoding: the value
//! `c0 + c1*p + ... + c_{e-1}*p^{e-1}` stands for the polynomial
//! `c0 + c1*x + ... + c_{e-1}*x^{e-1}` reduced modulo the field's modulus.
//! For `e = 1` the encoding is the residue itself, so every prime field is
//! plain modular arithmetic.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{p}^{e} does not fit in a 32-bit element encoding")]
    Overflow { p: u64, e: u32 },
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroElement,
    #[error("no element of order {d}: {d} does not divide {group_order}")]
    NoSuchOrder { d: u64, group_order: u64 },
    #[error("element {value} is out of range for a field of order {q}")]
    OutOfRange { value: u64, q: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the stated degree")]
    BadModulus(Vec<u32>),
    #[error("malformed field header: {0}")]
    BadHeader(String),
}

/// A field element by canonical encoding, always `< q` for its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub u32);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `GF(p^e)` together with the modulus used to represent it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    tables: Tables,
}

/// Largest extension field that gets a full addition table.
const ADD_TABLE_MAX_Q: u32 = 2048;
/// Largest extension field that gets log/antilog tables.
const LOG_TABLE_MAX_Q: u32 = 1 << 20;

/// Lookup tables for extension fields. They are a pure function of
/// `(p, e, modulus)`, so they take no part in comparisons.
#[derive(Clone, Default)]
struct Tables {
    add: Option<Arc<[u32]>>,
    neg: Option<Arc<[u32]>>,
    log: Option<Arc<[u32]>>,
    exp: Option<Arc<[u32]>>,
}

impl PartialEq for Tables {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Tables {}

impl Hash for Tables {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Tables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Tables")
    }
}

impl FieldSpec {
    /// Builds `GF(p^e)` using the lexicographically smallest monic irreducible
    /// modulus of degree `e` (coefficients compared from the constant term up,
    /// constant term varying fastest). For `e = 1` the modulus is `x`.
    pub fn new(p: u64, e: u32) -> Result<Self, AlgebraError> {
        if e == 0 {
            return Err(AlgebraError::ZeroExponent);
        }
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        let q = u32::try_from(p)
            .ok()
            .and_then(|p| p.checked_pow(e))
            .ok_or(AlgebraError::Overflow { p, e })?;
        let p = p as u32;
        let modulus = (0..q)
            .map(|t| monic_from_index(t, p, e))
            .find(|f| is_irreducible(f, p))
            .expect("an irreducible polynomial exists in every degree");
        Ok(FieldSpec { p, e, q, modulus, tables: Tables::default() }.with_tables())
    }

    fn with_tables(mut self) -> Self {
        let q = self.q;
        if self.e == 1 {
            return self;
        }
        if q <= ADD_TABLE_MAX_Q {
            let add: Vec<u32> = (0..q * q).map(|i| self.add_digits(Element(i / q), Element(i % q)).0).collect();
            self.tables.add = Some(add.into());
        }
        if q <= LOG_TABLE_MAX_Q {
            let neg: Vec<u32> = (0..q).map(|a| self.neg_digits(Element(a)).0).collect();
            self.tables.neg = Some(neg.into());
            let generator = (2..q).map(Element).find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != Element::ONE {
                    x = self.mul_poly(x, g);
                    k += 1;
                }
                k == q - 1
            });
            let g = generator.expect("the multiplicative group is cyclic");
            let mut exp = vec![0u32; q as usize - 1];
            let mut log = vec![0u32; q as usize];
            let mut x = Element::ONE;
            for (k, slot) in exp.iter_mut().enumerate() {
                *slot = x.0;
                log[x.index()] = k as u32;
                x = self.mul_poly(x, g);
            }
            self.tables.exp = Some(exp.into());
            self.tables.log = Some(log.into());
        }
        self
    }

    /// Builds a field from an explicit modulus, checking that it is monic of
    /// degree `e` and irreducible over `Z_p`.
    pub fn with_modulus(p: u64, e: u32, modulus: Vec<u32>) -> Result<Self, AlgebraError> {
        let canonical = FieldSpec::new(p, e)?;
        let p = canonical.p;
        let well_formed = modulus.len() == e as usize + 1
            && modulus.last() == Some(&1)
            && modulus.iter().all(|&c| c < p);
        if !well_formed || !is_irreducible(&modulus, p) {
            return Err(AlgebraError::BadModulus(modulus));
        }
        Ok(FieldSpec { modulus, tables: Tables::default(), ..canonical }.with_tables())
    }

    /// The prime field `Z_p`.
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        FieldSpec::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    pub fn element(&self, value: u64) -> Result<Element, AlgebraError> {
        if value < self.q as u64 {
            Ok(Element(value as u32))
        } else {
            Err(AlgebraError::OutOfRange { value, q: self.q })
        }
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.q).map(Element)
    }

    /// The nonzero elements in ascending encoding order.
    pub fn units(&self) -> impl Iterator<Item = Element> {
        (1..self.q).map(Element)
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        if self.e == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = self.p as u64;
            return Element(if s >= p { s - p } else { s } as u32);
        }
        match &self.tables.add {
            Some(t) => Element(t[(a.0 * self.q + b.0) as usize]),
            None => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, a: Element, b: Element) -> Element {
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Element(out)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if self.e == 1 {
            return Element(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        match &self.tables.neg {
            Some(t) => Element(t[a.index()]),
            None => self.neg_digits(a),
        }
    }

    fn neg_digits(&self, a: Element) -> Element {
        let mut x = a.0;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Element(out)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        if self.e == 1 {
            return Element(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        if let (Some(log), Some(exp)) = (&self.tables.log, &self.tables.exp) {
            if a.0 == 0 || b.0 == 0 {
                return Element::ZERO;
            }
            let k = (log[a.index()] as u64 + log[b.index()] as u64) % (self.q as u64 - 1);
            return Element(exp[k as usize]);
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: Element, b: Element) -> Element {
        let x = self.digits(a);
        let y = self.digits(b);
        let prod = poly_mul(&x, &y, self.p);
        let reduced = poly_rem(&prod, &self.modulus, self.p);
        self.encode(&reduced)
    }

    pub fn pow(&self, a: Element, mut exp: u64) -> Element {
        let mut base = a;
        let mut acc = Element::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Element) -> Result<Element, AlgebraError> {
        if a == Element::ZERO {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    /// Sum of a sequence of elements.
    pub fn sum<I: IntoIterator<Item = Element>>(&self, items: I) -> Element {
        items.into_iter().fold(Element::ZERO, |acc, x| self.add(acc, x))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: Element) -> Result<u64, AlgebraError> {
        if x == Element::ZERO {
            return Err(AlgebraError::ZeroElement);
        }
        let d = divisors(self.q as u64 - 1)
            .into_iter()
            .find(|&d| self.pow(x, d) == Element::ONE)
            .expect("x^(q-1) = 1 for every unit");
        Ok(d)
    }

    /// The element of order exactly `d` with the smallest encoding.
    pub fn find_element_of_order(&self, d: u64) -> Result<Element, AlgebraError> {
        let group_order = self.q as u64 - 1;
        if d == 0 || !group_order.is_multiple_of(d) {
            return Err(AlgebraError::NoSuchOrder { d, group_order });
        }
        Ok(self
            .units()
            .find(|&x| self.element_order(x) == Ok(d))
            .expect("the unit group is cyclic, so every divisor order occurs"))
    }

    /// Writes `x` as `q` with sign, `-k` when `x = q - k` and `k < q/2`.
    /// Only meaningful for prime fields; extension fields print the encoding.
    pub fn signed(&self, x: Element) -> String {
        if self.e == 1 && x.0 > self.q / 2 {
            format!("-{}", self.q - x.0)
        } else {
            x.0.to_string()
        }
    }

    fn digits(&self, a: Element) -> Vec<u32> {
        let mut x = a.0;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, coeffs: &[u32]) -> Element {
        Element(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// The header line shared by every file format.
    pub fn header(&self) -> String {
        let poly: Vec<String> = self.modulus.iter().map(u32::to_string).collect();
        format!("field p={} e={} poly={}", self.p, self.e, poly.join(","))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.header())
    }
}

impl FromStr for FieldSpec {
    type Err = AlgebraError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || AlgebraError::BadHeader(line.to_string());
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some("field") {
            return Err(bad());
        }
        let mut field = |key: &str| -> Result<&str, AlgebraError> {
            tokens
                .next()
                .and_then(|t| t.strip_prefix(key))
                .and_then(|t| t.strip_prefix('='))
                .ok_or_else(bad)
        };
        let p: u64 = field("p")?.parse().map_err(|_| bad())?;
        let e: u32 = field("e")?.parse().map_err(|_| bad())?;
        let poly = field("poly")?
            .split(',')
            .map(|c| c.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        if tokens.next().is_some() {
            return Err(bad());
        }
        FieldSpec::with_modulus(p, e, poly)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` when `n = p^e` for a prime `p` and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut rest = n;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn monic_from_index(mut t: u32, p: u32, e: u32) -> Vec<u32> {
    let mut coeffs: Vec<u32> = (0..e)
        .map(|_| {
            let c = t % p;
            t /= p;
            c
        })
        .collect();
    coeffs.push(1);
    coeffs
}

// Dense polynomials over Z_p, low degree first, no trailing zeros except for
// the zero polynomial which is the empty vector.

fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*m.last().expect("nonzero modulus"), p) as u64;
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let factor = *r.last().unwrap() as u64 * lead_inv % p as u64;
        for (i, &c) in m.iter().enumerate() {
            let sub = factor * c as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or test: a degree-`e` polynomial is irreducible iff it shares no
/// factor with `x^(p^i) - x` for `1 <= i <= e/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let e = f.len().saturating_sub(1);
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 0..e / 2 {
        // frob <- frob^p mod f
        let mut acc = vec![1];
        for _ in 0..p {
            acc = poly_rem(&poly_mul(&acc, &frob, p), &f, p);
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(&f, &trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
