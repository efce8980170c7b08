//! Dense univariate polynomials over a finite field.
//!
//! This module carries the univariate toolbox the scheme solvers rely on:
//! gcd, characteristic-`p` squarefree decomposition, distinct-degree plus
//! equal-degree (Cantor-Zassenhaus) factorization, and root extraction.
//! Randomized splitting is deterministic for a given seed.

use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};

/// Dense univariate polynomial; coefficients ascending, no leading zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> UniPoly {
        while coeffs.last().map_or(false, FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    /// Builds a polynomial of degree `deg` with coefficients `f(0..=deg)`.
    pub fn from_fn(field: &Field, deg: usize, f: impl Fn(usize) -> FieldElement) -> UniPoly {
        UniPoly::new(field, (0..=deg).map(f).collect())
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: vec![] }
    }

    pub fn constant(c: FieldElement) -> UniPoly {
        UniPoly::new(&c.field().clone(), vec![c])
    }

    pub fn x(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn monomial(c: FieldElement, deg: usize) -> UniPoly {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        UniPoly::new(&field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            &self.field,
            (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            &self.field,
            (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(FieldElement::neg).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(&self.field, out)
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Euclidean division; error if `divisor` is zero.
    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dl = divisor.deg();
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.field.zero(); self.coeffs.len().saturating_sub(dl)];
        while rem.len() > dl {
            let c = rem.last().unwrap().clone();
            let shift = rem.len() - 1 - dl;
            if !c.is_zero() {
                let q = c.mul(&lead_inv);
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        rem[shift + i] = rem[shift + i].sub(&q.mul(b));
                    }
                }
                quo[shift] = q;
            }
            rem.pop();
            while rem.last().map_or(false, FieldElement::is_zero) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(&self.field, quo), UniPoly::new(&self.field, rem)))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; internal error if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::internal("inexact univariate division"));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<UniPoly> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        if lead.is_one() {
            return Ok(self.clone());
        }
        Ok(self.mul_scalar(&lead.inv()?))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(&self.field);
        }
        UniPoly::new(
            &self.field,
            (1..self.coeffs.len())
                .map(|i| {
                    let scale = self.field.from_u64(i as u64);
                    self.coeffs[i].mul(&scale)
                })
                .collect(),
        )
    }

    /// `self^exp mod modulus` with an arbitrary-precision exponent.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &UniPoly) -> Result<UniPoly> {
        let mut acc = UniPoly::constant(self.field.one()).rem(modulus)?;
        let base = self.rem(modulus)?;
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc).rem(modulus)?;
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Field order as a big integer.
    fn q_big(&self) -> BigUint {
        BigUint::from(self.field.characteristic()).pow(self.field.degree() as u32)
    }

    /// Deterministic irreducibility test for monic polynomials of degree >= 1:
    /// `x^(q^n) == x mod f` and `gcd(x^(q^(n/r)) - x, f) = 1` for prime `r | n`.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let q = self.q_big();
        let x = UniPoly::x(&self.field);
        let f = self.monic().expect("nonzero");
        let xqn = match x.pow_mod(&q.pow(n as u32), &f) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if xqn != x.rem(&f).unwrap() {
            return false;
        }
        for r in prime_divisors(n) {
            let e = n / r;
            let xqe = x.pow_mod(&q.pow(e as u32), &f).unwrap();
            let g = xqe.sub(&x).gcd(&f);
            if !g.is_one() && !g.is_zero() {
                return false;
            }
            if g.is_zero() {
                // x^(q^e) == x mod f, so f divides a smaller field polynomial.
                return false;
            }
        }
        true
    }

    /// For `f(x) = g(x^p)`, returns `g` with `p`-th roots taken on coefficients.
    fn pth_root_structure(&self) -> UniPoly {
        let p = self.field.characteristic() as usize;
        let deg = self.deg();
        debug_assert!(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % p == 0));
        UniPoly::from_fn(&self.field, deg / p, |i| self.coeff(i * p).pth_root())
    }

    /// Squarefree decomposition valid in characteristic `p`.
    ///
    /// Returns pairwise-coprime monic squarefree factors with exponents;
    /// the product of `factor^exponent` equals `self` up to a scalar.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let f = self.monic().expect("nonzero");
        if f.is_constant() {
            return vec![];
        }
        let p = self.field.characteristic() as usize;
        let deriv = f.derivative();
        let mut out: Vec<(UniPoly, usize)> = Vec::new();
        let mut c;
        if deriv.is_zero() {
            c = f;
        } else {
            c = f.gcd(&deriv);
            let mut w = f.div_exact(&c).expect("gcd divides");
            let mut i = 1usize;
            while !w.is_one() {
                let y = w.gcd(&c);
                let fac = w.div_exact(&y).expect("gcd divides");
                if !fac.is_one() {
                    out.push((fac, i));
                }
                w = y.clone();
                c = c.div_exact(&y).expect("gcd divides");
                i += 1;
            }
        }
        if !c.is_one() {
            // All remaining factors have multiplicity divisible by p.
            let g = c.pth_root_structure();
            for (fac, e) in g.squarefree_decomposition() {
                // Merge in case a base also appeared with multiplicity coprime to p.
                if let Some(slot) = out.iter_mut().find(|(b, _)| *b == fac) {
                    slot.1 += e * p;
                } else {
                    out.push((fac, e * p));
                }
            }
        }
        out.sort_by_key(|(f, e)| (f.deg(), *e, poly_key(f)));
        out
    }

    /// The squarefree part: product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> UniPoly {
        let mut acc = UniPoly::constant(self.field.one());
        for (fac, _) in self.squarefree_decomposition() {
            acc = acc.mul(&fac);
        }
        acc
    }

    /// Complete factorization into monic irreducibles with multiplicities.
    ///
    /// Deterministic for a given seed; multiply by the leading coefficient of
    /// `self` to reconstruct the input exactly.
    pub fn factor(&self, seed: u64) -> Vec<(UniPoly, usize)> {
        assert!(!self.is_zero(), "factorization of zero");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<(UniPoly, usize)> = Vec::new();
        for (sqf, mult) in self.squarefree_decomposition() {
            for (prod, d) in distinct_degree_split(&sqf) {
                let mut irreducibles = Vec::new();
                equal_degree_split(&prod, d, &mut rng, &mut irreducibles);
                for irr in irreducibles {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by_key(|(f, e)| (f.deg(), poly_key(f), *e));
        out
    }

    /// Roots in the coefficient field, sorted canonically.
    pub fn roots(&self, seed: u64) -> Vec<FieldElement> {
        if self.is_zero() || self.is_constant() {
            return vec![];
        }
        // Restrict to the product of linear factors first: gcd(f, x^q - x).
        // For large q this avoids factoring high-degree irreducible parts.
        let f = self.monic().expect("nonzero");
        let q = self.q_big();
        let x = UniPoly::x(&self.field);
        let xq = x.pow_mod(&q, &f).expect("nonzero modulus");
        let linear_part = xq.sub(&x).gcd(&f);
        if linear_part.is_constant() {
            return vec![];
        }
        let mut roots: Vec<FieldElement> = linear_part
            .factor(seed)
            .into_iter()
            .filter(|(g, _)| g.deg() == 1)
            .map(|(g, _)| g.coeff(0).neg())
            .collect();
        roots.sort();
        roots.dedup();
        roots
    }

    /// Uniformly random polynomial of degree `< deg`.
    pub fn random_below(field: &Field, deg: usize, rng: &mut ChaCha8Rng) -> UniPoly {
        let k = field.degree();
        let p = field.characteristic();
        let coeffs = (0..deg)
            .map(|_| {
                let raw: Vec<u64> = (0..k).map(|_| rng.random_range(0..p)).collect();
                field.element(&raw).expect("length matches")
            })
            .collect();
        UniPoly::new(field, coeffs)
    }
}

/// Total key for deterministic sorting of polynomial lists.
fn poly_key(f: &UniPoly) -> Vec<u64> {
    f.coeffs()
        .iter()
        .flat_map(|c| c.coeffs().iter().copied())
        .collect()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Distinct-degree factorization of a squarefree monic polynomial.
/// Returns pairs `(product of irreducible factors of degree d, d)`.
fn distinct_degree_split(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field().clone();
    let q = BigUint::from(field.characteristic()).pow(field.degree() as u32);
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = UniPoly::x(&field);
    let mut h = x.rem(&f).expect("nonzero");
    let mut d = 0usize;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &f).expect("nonzero");
        let g = h.sub(&x).gcd(&f);
        if !g.is_constant() {
            out.push((g.clone(), d));
            f = f.div_exact(&g).expect("gcd divides");
            h = h.rem(&f).expect("nonzero");
        }
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: `f` is squarefree, monic, and a
/// product of irreducibles all of degree `d`.
fn equal_degree_split(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<UniPoly>) {
    if f.deg() == d {
        out.push(f.clone());
        return;
    }
    let field = f.field().clone();
    let p = field.characteristic();
    loop {
        let a = UniPoly::random_below(&field, f.deg(), rng);
        if a.is_zero() || a.is_constant() {
            continue;
        }
        let g0 = a.gcd(f);
        if !g0.is_constant() && g0.deg() < f.deg() {
            let rest = f.div_exact(&g0).expect("gcd divides");
            equal_degree_split(&g0, d, rng, out);
            equal_degree_split(&rest, d, rng, out);
            return;
        }
        let splitter = if p == 2 {
            // Trace map: sum of a^(2^i) for i < k*d.
            let m = field.degree() * d;
            let mut acc = a.rem(f).expect("nonzero");
            let mut t = acc.clone();
            for _ in 1..m {
                t = t.mul(&t).rem(f).expect("nonzero");
                acc = acc.add(&t);
            }
            acc
        } else {
            let q = BigUint::from(p).pow(field.degree() as u32);
            let e = (q.pow(d as u32) - BigUint::from(1u32)) / BigUint::from(2u32);
            let b = a.pow_mod(&e, f).expect("nonzero");
            b.sub(&UniPoly::constant(field.one()))
        };
        let g = splitter.gcd(f);
        if !g.is_constant() && g.deg() < f.deg() {
            let rest = f.div_exact(&g).expect("gcd divides");
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&rest, d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upoly(field: &Field, coeffs: &[u64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    #[test]
    fn divrem_basic() {
        let f5 = Field::prime(5).unwrap();
        // x^3 - x = x (x-1) (x+1)
        let f = upoly(&f5, &[0, 4, 0, 1]);
        let g = upoly(&f5, &[0, 1]); // x
        let (q, r) = f.divrem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, upoly(&f5, &[4, 0, 1]));
    }

    #[test]
    fn squarefree_pure_power() {
        let f3 = Field::prime(3).unwrap();
        // x^6 over GF(3) -> [(x, 6)]
        let f = UniPoly::monomial(f3.one(), 6);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0].0, upoly(&f3, &[0, 1]));
        assert_eq!(dec[0].1, 6);
    }

    #[test]
    fn squarefree_cube_of_irreducible() {
        let f3 = Field::prime(3).unwrap();
        // (x^2+1)^3 over GF(3); x^2+1 is squarefree over GF(3).
        let base = upoly(&f3, &[1, 0, 1]);
        let f = base.mul(&base).mul(&base);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(base, 3)]);
    }

    #[test]
    fn squarefree_freshman_power() {
        // x^p - c = (x - c^(1/p))^p over GF(p^k).
        let f9 = Field::gf(3, 2).unwrap();
        let c = f9.generator();
        let mut coeffs = vec![f9.zero(); 4];
        coeffs[0] = c.neg();
        coeffs[3] = f9.one();
        let f = UniPoly::new(&f9, coeffs);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec[0].1, 3);
        let root = dec[0].0.coeff(0).neg();
        assert_eq!(root.pow(3), c);
    }

    #[test]
    fn factor_square_over_gf2() {
        let f2 = Field::prime(2).unwrap();
        // x^2 + 1 = (x+1)^2 over GF(2)
        let f = upoly(&f2, &[1, 0, 1]);
        let fac = f.factor(1);
        assert_eq!(fac, vec![(upoly(&f2, &[1, 1]), 2)]);
    }

    #[test]
    fn factor_x_cubed_minus_x() {
        let f5 = Field::prime(5).unwrap();
        let f = upoly(&f5, &[0, 4, 0, 1]);
        let fac = f.factor(1);
        let expected: Vec<(UniPoly, usize)> = vec![
            (upoly(&f5, &[0, 1]), 1),
            (upoly(&f5, &[1, 1]), 1),
            (upoly(&f5, &[4, 1]), 1),
        ];
        assert_eq!(fac, expected);
    }

    #[test]
    fn factor_round_trip_gf9() {
        let f9 = Field::gf(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for trial in 0..8 {
            // Three random monic irreducibles of degrees 1..=3.
            let mut product = UniPoly::constant(f9.one());
            let mut built: Vec<UniPoly> = vec![];
            while built.len() < 3 {
                let d = rng.random_range(1..=3);
                let mut cand = UniPoly::random_below(&f9, d, &mut rng);
                cand = cand.add(&UniPoly::monomial(f9.one(), d));
                if cand.is_irreducible() && !built.contains(&cand) {
                    product = product.mul(&cand);
                    built.push(cand);
                }
            }
            let fac = product.factor(1000 + trial);
            let mut reconstructed = UniPoly::constant(f9.one());
            for (g, e) in &fac {
                assert!(g.is_irreducible());
                for _ in 0..*e {
                    reconstructed = reconstructed.mul(g);
                }
            }
            assert_eq!(reconstructed, product);
            built.sort_by_key(poly_key);
            let mut names: Vec<_> = fac.into_iter().map(|(g, _)| g).collect();
            names.sort_by_key(poly_key);
            assert_eq!(names, built);
        }
    }

    #[test]
    fn roots_of_minus_one_gf3() {
        let f3 = Field::prime(3).unwrap();
        // x^2 + 1 has no roots over GF(3)
        let f = upoly(&f3, &[1, 0, 1]);
        assert!(f.roots(3).is_empty());
        // ... but two roots over GF(9).
        let f9 = Field::gf(3, 2).unwrap();
        let f_ext = UniPoly::from_fn(&f9, 2, |i| f9.from_u64([1, 0, 1][i]));
        let roots = f_ext.roots(3);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(r.mul(&r).add(&f9.one()).is_zero());
        }
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = Field::prime(2).unwrap();
        assert!(upoly(&f2, &[1, 1, 0, 0, 1]).is_irreducible()); // x^4+x+1
        assert!(!upoly(&f2, &[1, 0, 0, 0, 1]).is_irreducible()); // x^4+1 = (x+1)^4
        assert!(upoly(&f2, &[1, 1, 1]).is_irreducible()); // x^2+x+1
        assert!(!upoly(&f2, &[1, 0, 1]).is_irreducible()); // (x+1)^2
    }

    #[test]
    fn factorization_is_seed_deterministic() {
        let f9 = Field::gf(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = UniPoly::random_below(&f9, 9, &mut rng).add(&UniPoly::monomial(f9.one(), 9));
        assert_eq!(f.factor(77), f.factor(77));
    }
}
