//! Exact arithmetic in prime fields `F_p` and extensions `GF(p^k)`.
//!
//! An extension field is always represented as a direct extension
//! `F_p[t]/(m(t))` of the prime field, never as a tower over an intermediate
//! field.  Elements are fixed-length coefficient vectors of the representative
//! polynomial of degree `< k`, so equality is coefficient-wise.  Embeddings
//! between extensions are computed once per field pair by locating a root of
//! the source modulus in the target field and are cached, so that all calls
//! for the same pair use the same embedding.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::unipoly::UniPoly;

pub type Coeffs = SmallVec<[u64; 4]>;

/// Largest field order for which a full inversion table is precomputed.
const INV_TABLE_MAX_ORDER: u128 = 4096;

// ---------------------------------------------------------------------------
// Word-sized modular arithmetic and primality
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128) + (b as u128);
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Modular inverse by extended Euclid; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::DivisionByZero);
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "p must be prime and a nonzero");
    let mut s = s0 % p as i128;
    if s < 0 {
        s += p as i128;
    }
    Ok(s as u64)
}

/// Deterministic Miller-Rabin for word-sized integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Stable FNV-1a fold used to derive deterministic internal seeds.
pub(crate) fn fnv1a(parts: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &part in parts {
        for byte in part.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Raw univariate helpers over F_p (coefficient vectors, ascending degree)
// ---------------------------------------------------------------------------

fn pv_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pv_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(!b.is_empty());
    let bl = *b.last().unwrap();
    let bl_inv = inv_mod(bl, p).expect("nonzero leading coefficient");
    while a.len() >= b.len() {
        let c = *a.last().unwrap();
        if c != 0 {
            let q = mul_mod(c, bl_inv, p);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = sub_mod(a[shift + i], mul_mod(q, bc, p), p);
            }
        }
        a.pop();
        pv_trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

/// Inverse of `a` modulo the monic polynomial `m` over `F_p`.
fn pv_inv_mod(a: &[u64], m: &[u64], p: u64) -> Result<Vec<u64>> {
    // Extended Euclid on (m, a).
    let mut r0: Vec<u64> = m.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    pv_trim(&mut r1);
    if r1.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // divide r0 by r1
        let mut rem = r0.clone();
        let mut quo: Vec<u64> = vec![0; rem.len().saturating_sub(r1.len()) + 1];
        let l_inv = inv_mod(*r1.last().unwrap(), p)?;
        while rem.len() >= r1.len() && !rem.is_empty() {
            let c = *rem.last().unwrap();
            let shift = rem.len() - r1.len();
            if c != 0 {
                let q = mul_mod(c, l_inv, p);
                quo[shift] = q;
                for (i, &bc) in r1.iter().enumerate() {
                    rem[shift + i] = sub_mod(rem[shift + i], mul_mod(q, bc, p), p);
                }
            }
            rem.pop();
            pv_trim(&mut rem);
        }
        // s = s0 - quo * s1
        let mut prod = vec![0u64; quo.len() + s1.len()];
        for (i, &qc) in quo.iter().enumerate() {
            if qc == 0 {
                continue;
            }
            for (j, &sc) in s1.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(qc, sc, p), p);
            }
        }
        let mut s = vec![0u64; s0.len().max(prod.len())];
        for (i, slot) in s.iter_mut().enumerate() {
            let x = s0.get(i).copied().unwrap_or(0);
            let y = prod.get(i).copied().unwrap_or(0);
            *slot = sub_mod(x, y, p);
        }
        pv_trim(&mut s);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; it must be a nonzero constant since m is irreducible.
    if r0.len() != 1 {
        return Err(Error::internal("modulus not coprime to element"));
    }
    let scale = inv_mod(r0[0], p)?;
    let mut out: Vec<u64> = s0.iter().map(|&c| mul_mod(c, scale, p)).collect();
    pv_trim(&mut out);
    Ok(pv_rem(out, m, p))
}

// ---------------------------------------------------------------------------
// Field descriptors
// ---------------------------------------------------------------------------

/// Description of `GF(p^k)` as `F_p[t]/(m(t))`.
///
/// The modulus is monic and irreducible of degree `k`; it is absent exactly
/// when `k == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    p: u64,
    k: usize,
    /// Monic modulus, ascending coefficients, length `k + 1`; `None` iff `k == 1`.
    modulus: Option<Vec<u64>>,
}

impl FieldDescriptor {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }
}

struct FieldInner {
    desc: FieldDescriptor,
    inv_table: OnceLock<Option<Vec<Coeffs>>>,
}

/// Shared handle to a field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}
impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.desc.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0.desc;
        if d.k == 1 {
            write!(f, "GF({})", d.p)
        } else {
            write!(f, "GF({}^{}; {})", d.p, d.k, modulus_to_text(d.modulus().unwrap()))
        }
    }
}

fn modulus_to_text(m: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}*t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}*t^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

fn modulus_from_text(text: &str) -> Result<Vec<u64>> {
    // Terms of the shape `c`, `t`, `c*t`, `t^e`, `c*t^e`, joined by `+` or `-`.
    let text = text.replace(' ', "");
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut rest = text.as_str();
    let mut sign = 1i64;
    if let Some(stripped) = rest.strip_prefix('-') {
        sign = -1;
        rest = stripped;
    }
    while !rest.is_empty() {
        let end = rest
            .find(['+', '-'])
            .unwrap_or(rest.len());
        let term = &rest[..end];
        if term.is_empty() {
            return Err(Error::Parse(format!("bad modulus term in '{text}'")));
        }
        let (coeff, exp) = parse_modulus_term(term)?;
        terms.push((sign * coeff, exp));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'+' { 1 } else { -1 };
        rest = &rest[end + 1..];
    }
    let deg = terms.iter().map(|&(_, e)| e).max().unwrap_or(0);
    let mut out = vec![0i64; deg + 1];
    for (c, e) in terms {
        out[e] += c;
    }
    Ok(out.into_iter().map(|c| c as u64).collect())
}

fn parse_modulus_term(term: &str) -> Result<(i64, usize)> {
    let bad = || Error::Parse(format!("bad modulus term '{term}'"));
    if let Some(pos) = term.find('t') {
        let coeff_part = &term[..pos];
        let coeff = if coeff_part.is_empty() {
            1
        } else {
            coeff_part
                .trim_end_matches('*')
                .parse::<i64>()
                .map_err(|_| bad())?
        };
        let exp_part = &term[pos + 1..];
        let exp = if exp_part.is_empty() {
            1
        } else {
            exp_part
                .strip_prefix('^')
                .ok_or_else(bad)?
                .parse::<usize>()
                .map_err(|_| bad())?
        };
        Ok((coeff, exp))
    } else {
        Ok((term.parse::<i64>().map_err(|_| bad())?, 0))
    }
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        Ok(Field(Arc::new(FieldInner {
            desc: FieldDescriptor { p, k: 1, modulus: None },
            inv_table: OnceLock::new(),
        })))
    }

    /// `GF(p^k)` with a canonical modulus found by deterministic seeded search.
    pub fn gf(p: u64, k: usize) -> Result<Field> {
        if k == 0 {
            return Err(Error::usage("extension degree must be >= 1"));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let seed = fnv1a(&[0x6d0d, p, k as u64]);
        let modulus = random_irreducible(p, k, seed)?;
        Field::extension(p, &modulus)
    }

    /// `GF(p^k)` with an explicitly given monic irreducible modulus
    /// (ascending coefficients, degree `k`).
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        let mut m: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        pv_trim(&mut m);
        if m.len() < 2 {
            return Err(Error::usage("modulus must have degree >= 1"));
        }
        let k = m.len() - 1;
        if m[k] != 1 {
            return Err(Error::usage("modulus must be monic"));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let fp = Field::prime(p)?;
        let mp = UniPoly::from_fn(&fp, k, |i| fp.from_u64(m[i]));
        if !mp.is_irreducible() {
            return Err(Error::usage("modulus is reducible over the prime field"));
        }
        Ok(Field(Arc::new(FieldInner {
            desc: FieldDescriptor { p, k, modulus: Some(m) },
            inv_table: OnceLock::new(),
        })))
    }

    /// Parses `GF(3)`, `GF(2^4)` or `GF(2^4; t^4+t+1)`.
    pub fn parse(text: &str) -> Result<Field> {
        let text = text.trim();
        let inner = text
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad field literal '{text}'")))?;
        let (base, modulus) = match inner.split_once(';') {
            Some((b, m)) => (b.trim(), Some(m.trim())),
            None => (inner.trim(), None),
        };
        let (p, k) = match base.split_once('^') {
            Some((p, k)) => (
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad characteristic in '{text}'")))?,
                k.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad extension degree in '{text}'")))?,
            ),
            None => (
                base.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad characteristic in '{text}'")))?,
                1,
            ),
        };
        match modulus {
            None => Field::gf(p, k),
            Some(mtext) => {
                let m = modulus_from_text(mtext)?;
                let m: Vec<u64> = m
                    .iter()
                    .map(|&c| ((c as i64).rem_euclid(p as i64)) as u64)
                    .collect();
                if m.len() != k + 1 {
                    return Err(Error::Parse(format!(
                        "modulus degree {} does not match extension degree {k}",
                        m.len().saturating_sub(1)
                    )));
                }
                Field::extension(p, &m)
            }
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }
    pub fn characteristic(&self) -> u64 {
        self.0.desc.p
    }
    pub fn degree(&self) -> usize {
        self.0.desc.k
    }

    /// Field order as `u128`, or `None` if it overflows.
    pub fn order(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.0.desc.k {
            acc = acc.checked_mul(self.0.desc.p as u128)?;
            if acc > u128::MAX / 2 {
                return None;
            }
        }
        Some(acc)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: smallvec![0; self.0.desc.k],
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// The image of an integer under `Z -> F_p <= GF(p^k)`.
    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut coeffs: Coeffs = smallvec![0; self.0.desc.k];
        coeffs[0] = n % self.0.desc.p;
        FieldElement { coeffs, field: self.clone() }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        let p = self.0.desc.p as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// Element with the given representative coefficients (length exactly `k`).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.0.desc.k {
            return Err(Error::usage(format!(
                "element literal has {} coefficients, field has degree {}",
                coeffs.len(),
                self.0.desc.k
            )));
        }
        Ok(FieldElement {
            coeffs: coeffs.iter().map(|&c| c % self.0.desc.p).collect(),
            field: self.clone(),
        })
    }

    /// The class of `t`, a generator of the extension over `F_p` (for `k > 1`).
    pub fn generator(&self) -> FieldElement {
        let mut coeffs: Coeffs = smallvec![0; self.0.desc.k];
        if self.0.desc.k > 1 {
            coeffs[1] = 1;
        } else {
            // Fall back to 1 in the prime field; callers only use this for k > 1.
            coeffs[0] = 1;
        }
        FieldElement { coeffs, field: self.clone() }
    }

    /// Decodes the base-`p` digit encoding of an element (inverse of `index`).
    pub fn element_from_index(&self, mut idx: u128) -> FieldElement {
        let p = self.0.desc.p as u128;
        let mut coeffs: Coeffs = smallvec![0; self.0.desc.k];
        for slot in coeffs.iter_mut() {
            *slot = (idx % p) as u64;
            idx /= p;
        }
        FieldElement { coeffs, field: self.clone() }
    }

    /// Iterates over all field elements; intended for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let q = self.order().expect("field too large to enumerate");
        (0..q).map(move |i| self.element_from_index(i))
    }

    pub fn same(&self, other: &Field) -> bool {
        self == other
    }

    fn inv_table(&self) -> Option<&Vec<Coeffs>> {
        self.0
            .inv_table
            .get_or_init(|| {
                let q = self.order()?;
                if q > INV_TABLE_MAX_ORDER {
                    return None;
                }
                let mut table: Vec<Coeffs> = Vec::with_capacity(q as usize);
                table.push(smallvec![0; self.0.desc.k]); // placeholder for 0
                for i in 1..q {
                    let e = self.element_from_index(i);
                    let inv = e.inv_uncached().expect("nonzero element");
                    table.push(inv.coeffs);
                }
                Some(table)
            })
            .as_ref()
    }
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

/// An element of a [`Field`].  Coefficient vectors have fixed length `k`.
#[derive(Clone)]
pub struct FieldElement {
    coeffs: Coeffs,
    field: Field,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: numeric comparison of the base-`p` encoding.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        assert!(self.field == other.field, "comparing elements of different fields");
        for i in (0..self.coeffs.len()).rev() {
            match self.coeffs[i].cmp(&other.coeffs[i]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let inner: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", inner.join(","))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Base-`p` digit encoding; `None` when it would overflow `u128`.
    pub fn index(&self) -> Option<u128> {
        let p = self.field.characteristic() as u128;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    fn check_same(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        FieldElement { coeffs, field: self.field.clone() }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        let p = self.field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        FieldElement { coeffs, field: self.field.clone() }
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.characteristic();
        let coeffs = self.coeffs.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect();
        FieldElement { coeffs, field: self.field.clone() }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check_same(other);
        let p = self.field.characteristic();
        let k = self.field.degree();
        if k == 1 {
            return FieldElement {
                coeffs: smallvec![mul_mod(self.coeffs[0], other.coeffs[0], p)],
                field: self.field.clone(),
            };
        }
        // Schoolbook product, then reduction by the monic modulus.
        let mut tmp: SmallVec<[u64; 8]> = smallvec![0; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                tmp[i + j] = add_mod(tmp[i + j], mul_mod(a, b, p), p);
            }
        }
        let modulus = self.field.descriptor().modulus().unwrap();
        for i in (k..2 * k - 1).rev() {
            let c = tmp[i];
            if c == 0 {
                continue;
            }
            tmp[i] = 0;
            for j in 0..k {
                if modulus[j] != 0 {
                    let sub = mul_mod(c, modulus[j], p);
                    tmp[i - k + j] = sub_mod(tmp[i - k + j], sub, p);
                }
            }
        }
        tmp.truncate(k);
        FieldElement {
            coeffs: Coeffs::from_slice(&tmp),
            field: self.field.clone(),
        }
    }

    fn inv_uncached(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.characteristic();
        if self.field.degree() == 1 {
            return Ok(FieldElement {
                coeffs: smallvec![inv_mod(self.coeffs[0], p)?],
                field: self.field.clone(),
            });
        }
        let modulus = self.field.descriptor().modulus().unwrap();
        let inv = pv_inv_mod(&self.coeffs, modulus, p)?;
        let mut coeffs: Coeffs = smallvec![0; self.field.degree()];
        coeffs[..inv.len()].copy_from_slice(&inv);
        Ok(FieldElement { coeffs, field: self.field.clone() })
    }

    /// Multiplicative inverse; error on zero.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(table) = self.field.inv_table() {
            let idx = self.index().unwrap() as usize;
            return Ok(FieldElement {
                coeffs: table[idx].clone(),
                field: self.field.clone(),
            });
        }
        self.inv_uncached()
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut exp: u128) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// The Frobenius image `a^p`.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.characteristic() as u128)
    }

    /// The unique `b` with `b^p = a`, namely `a^(p^(k-1))`.
    pub fn pth_root(&self) -> FieldElement {
        let mut out = self.clone();
        for _ in 0..self.field.degree().saturating_sub(1) {
            out = out.frobenius();
        }
        out
    }

    /// Whether the element lies in the subfield `GF(p^d)`.
    pub fn in_subfield(&self, d: usize) -> bool {
        let mut img = self.clone();
        for _ in 0..d {
            img = img.frobenius();
        }
        img == *self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                FieldElement::$method(self, rhs)
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                FieldElement::$method(&self, &rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Irreducible modulus search
// ---------------------------------------------------------------------------

/// Deterministic seeded search for a monic irreducible of degree `k` over `F_p`.
///
/// Returns ascending coefficients of length `k + 1`.  The expected number of
/// trials is `O(k)`; the search is capped at `64 * k` trials.
pub fn random_irreducible(p: u64, k: usize, seed: u64) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::usage(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::usage("degree must be >= 1"));
    }
    let fp = Field::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 * k.max(1) {
        let mut coeffs: Vec<u64> = (0..k).map(|_| rng.random_range(0..p)).collect();
        coeffs.push(1);
        let f = UniPoly::from_fn(&fp, k, |i| fp.from_u64(coeffs[i]));
        if f.is_irreducible() {
            return Ok(coeffs);
        }
    }
    Err(Error::internal(format!(
        "no irreducible of degree {k} over GF({p}) found within the trial cap"
    )))
}

// ---------------------------------------------------------------------------
// Embeddings between extensions of the same prime field
// ---------------------------------------------------------------------------

type EmbedKey = (FieldDescriptor, FieldDescriptor);

static EMBED_CACHE: OnceLock<Mutex<HashMap<EmbedKey, Coeffs>>> = OnceLock::new();

/// Image of `a` under the fixed embedding of its field into `target`.
///
/// The embedding is determined once per (source, target) pair by taking the
/// smallest root (in the canonical element order) of the source modulus in the
/// target field; concurrent calls observe the same choice.
pub fn embed(a: &FieldElement, target: &Field) -> Result<FieldElement> {
    let src = a.field();
    if src == target {
        return Ok(FieldElement {
            coeffs: a.coeffs.clone(),
            field: target.clone(),
        });
    }
    if src.characteristic() != target.characteristic() {
        return Err(Error::mismatch(format!(
            "cannot embed {} into {}: different characteristic",
            src, target
        )));
    }
    if target.degree() % src.degree() != 0 {
        return Err(Error::usage(format!(
            "no embedding of {} into {}: degree does not divide",
            src, target
        )));
    }
    if src.degree() == 1 {
        return Ok(target.from_u64(a.coeffs[0]));
    }
    let gen_image = embedding_generator_image(src, target)?;
    // Horner evaluation of the representative polynomial at the root.
    let mut acc = target.zero();
    for &c in a.coeffs.iter().rev() {
        acc = acc.mul(&gen_image).add(&target.from_u64(c));
    }
    Ok(acc)
}

fn embedding_generator_image(src: &Field, target: &Field) -> Result<FieldElement> {
    let key: EmbedKey = (src.descriptor().clone(), target.descriptor().clone());
    let cache = EMBED_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(coeffs) = guard.get(&key) {
            return Ok(FieldElement {
                coeffs: coeffs.clone(),
                field: target.clone(),
            });
        }
    }
    // Locate the smallest root of the source modulus inside the target field.
    let msrc = src.descriptor().modulus().unwrap();
    let f = UniPoly::from_fn(target, msrc.len() - 1, |i| target.from_u64(msrc[i]));
    let seed = fnv1a(&[
        0xe4be,
        src.characteristic(),
        src.degree() as u64,
        target.degree() as u64,
    ]);
    let mut roots = f.roots(seed);
    roots.sort();
    let root = roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::internal("source modulus has no root in target field"))?;
    let mut guard = cache.lock().unwrap();
    let entry = guard.entry(key).or_insert_with(|| root.coeffs.clone());
    Ok(FieldElement {
        coeffs: entry.clone(),
        field: target.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(9973));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(9));
        assert!(!is_prime_u64(6700417 * 3));
        assert!(is_prime_u64(6700417));
    }

    #[test]
    fn gf3_add() {
        let f = Field::prime(3).unwrap();
        let two = f.from_u64(2);
        assert_eq!(two.add(&two), f.one());
    }

    #[test]
    fn gf4_generator_square() {
        // GF(4) = F_2[t]/(t^2+t+1): t*t = t+1.
        let f = Field::extension(2, &[1, 1, 1]).unwrap();
        let t = f.generator();
        let expect = f.element(&[1, 1]).unwrap();
        assert_eq!(t.mul(&t), expect);
    }

    #[test]
    fn gf9_multiplicative_order() {
        let f = Field::gf(3, 2).unwrap();
        for a in f.elements().skip(1) {
            assert!(a.pow(8).is_one(), "a^8 != 1 for {a}");
        }
    }

    #[test]
    fn frobenius_identity_on_prime_field() {
        let f = Field::prime(2).unwrap();
        for a in f.elements() {
            assert_eq!(a.frobenius(), a);
        }
    }

    #[test]
    fn frobenius_orbits() {
        // GF(9): pth_root(frobenius(a)) == a.
        let f = Field::gf(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(a.frobenius().pth_root(), a);
            assert_eq!(a.pth_root().frobenius(), a);
        }
        // GF(8): frobenius^3 == identity.
        let f8 = Field::gf(2, 3).unwrap();
        for a in f8.elements() {
            assert_eq!(a.frobenius().frobenius().frobenius(), a);
        }
    }

    #[test]
    fn fermat_orbit_closes() {
        for (p, k) in [(2u64, 4usize), (3, 3), (5, 2), (7, 1)] {
            let f = Field::gf(p, k).unwrap();
            for a in f.elements() {
                let mut b = a.clone();
                for _ in 0..k {
                    b = b.frobenius();
                }
                assert_eq!(b, a);
            }
        }
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = Field::gf(2, 3).unwrap();
        assert!(matches!(f.zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn inverses_exhaustive() {
        for (p, k) in [(2u64, 1usize), (3, 2), (2, 4), (7, 2)] {
            let f = Field::gf(p, k).unwrap();
            for a in f.elements().skip(1) {
                assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn random_irreducible_degree_one() {
        let m = random_irreducible(2, 1, 7).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1], 1);
    }

    #[test]
    fn random_irreducible_has_no_root_gf3() {
        let m = random_irreducible(3, 2, 11).unwrap();
        for x in 0..3u64 {
            let val = (m[0] + m[1] * x + m[2] * x * x) % 3;
            assert_ne!(val, 0, "root {x} found");
        }
    }

    #[test]
    fn random_irreducible_divides_field_polynomial() {
        // Degree 4 over GF(2): must divide t^16 - t but neither t^4 - t nor t^2 - t.
        let m = random_irreducible(2, 4, 3).unwrap();
        let f2 = Field::prime(2).unwrap();
        let mp = UniPoly::from_fn(&f2, 4, |i| f2.from_u64(m[i]));
        let field_poly = |e: usize| {
            // t^(2^e) - t
            let mut coeffs = vec![f2.zero(); (1 << e) + 1];
            coeffs[1] = f2.one();
            coeffs[1 << e] = coeffs[1 << e].add(&f2.one());
            UniPoly::new(&f2, coeffs)
        };
        assert!(field_poly(4).rem(&mp).unwrap().is_zero());
        assert!(!field_poly(2).rem(&mp).unwrap().is_zero());
        assert!(!field_poly(1).rem(&mp).unwrap().is_zero());
    }

    #[test]
    fn embed_prime_subfield() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::gf(2, 2).unwrap();
        assert_eq!(embed(&f2.zero(), &f4).unwrap(), f4.zero());
        assert_eq!(embed(&f2.one(), &f4).unwrap(), f4.one());
    }

    #[test]
    fn embed_is_ring_homomorphism() {
        let f4 = Field::gf(2, 2).unwrap();
        let f16 = Field::gf(2, 4).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let ea = embed(&a, &f16).unwrap();
                let eb = embed(&b, &f16).unwrap();
                assert_eq!(embed(&a.add(&b), &f16).unwrap(), ea.add(&eb));
                assert_eq!(embed(&a.mul(&b), &f16).unwrap(), ea.mul(&eb));
            }
        }
    }

    #[test]
    fn embed_injective_small_fields() {
        for (p, k, m) in [(2u64, 2usize, 4usize), (3, 2, 4), (2, 3, 6), (3, 1, 4)] {
            let src = Field::gf(p, k).unwrap();
            let tgt = Field::gf(p, m).unwrap();
            let mut images: Vec<_> = src
                .elements()
                .map(|a| embed(&a, &tgt).unwrap().index().unwrap())
                .collect();
            images.sort();
            images.dedup();
            assert_eq!(images.len() as u128, src.order().unwrap());
        }
    }

    #[test]
    fn parse_field_literals() {
        assert_eq!(Field::parse("GF(3)").unwrap().degree(), 1);
        let f = Field::parse("GF(2^4)").unwrap();
        assert_eq!((f.characteristic(), f.degree()), (2, 4));
        let g = Field::parse("GF(2^4; t^4+t+1)").unwrap();
        assert_eq!(g.descriptor().modulus().unwrap(), &[1, 1, 0, 0, 1]);
        assert!(Field::parse("GF(4)").is_err());
        assert!(Field::parse("GF(2^4; t^4+t^3+t^2+t)").is_err());
    }

    #[test]
    fn display_round_trip() {
        let f = Field::parse("GF(2^3)").unwrap();
        let g = Field::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
    }
}
