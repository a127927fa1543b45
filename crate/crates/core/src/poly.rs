//! Dense univariate polynomials in `t` over a finite field.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{parse_monomial, split_terms, FieldElement, GaloisField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: GaloisField,
    /// Little-endian, no trailing zeros.
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &GaloisField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_ints(field: &GaloisField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &GaloisField, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * t^k`.
    pub fn monomial(field: &GaloisField, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    /// `t`.
    pub fn t(field: &GaloisField) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FieldElement::ONE]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    /// Exponent of the largest power of `t` dividing `self`.
    pub fn t_adic_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        Poly::new(f, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect();
        Poly::new(f, coeffs)
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^p`, computed coefficientwise.
    pub fn frobenius(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![f.zero(); (self.coeffs.len() - 1) * p + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k * p] = f.frobenius(c);
        }
        Poly::new(f, out)
    }

    /// `self(t^k)`.
    pub fn inflate(&self, k: usize) -> Poly {
        let f = &self.field;
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![f.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * k] = c;
        }
        Poly::new(f, out)
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[top - dd] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let k = top - dd + i;
                rem[k] = f.sub(rem[k], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(f.from_int(k as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// The same coefficients read in a larger field containing this one as
    /// its prime field.
    pub fn lift_to(&self, target: &GaloisField) -> Result<Poly> {
        if &self.field == target {
            return Ok(self.clone());
        }
        if !self.field.is_prime_field() || self.field.characteristic() != target.characteristic() {
            return Err(Error::FieldMismatch);
        }
        Ok(Poly::new(
            target,
            self.coeffs.iter().map(|c| target.from_int(c.index() as i64)).collect(),
        ))
    }

    /// Irreducibility over the coefficient field (Ben-Or).
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = &self.field;
        let q = f.order() as u64;
        let x = Poly::t(f);
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = h.pow_mod(q, self);
            if !h.sub(&x).gcd(self).is_one() {
                return false;
            }
        }
        true
    }

    fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus).expect("nonzero modulus");
            }
            base = base.mul(&base).rem(modulus).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    }

    /// Every polynomial of degree at most `d` (zero included), ordered by
    /// packed coefficient index with the constant term least significant.
    pub fn all_up_to_degree(field: &GaloisField, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.order() as u64;
        let count = q.pow(d as u32 + 1);
        (0..count).map(move |mut idx| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..=d {
                coeffs.push(field.element((idx % q) as u32));
                idx /= q;
            }
            Poly::new(field, coeffs)
        })
    }

    /// Monic polynomials of exactly degree `d`, in canonical order.
    pub fn monic_of_degree(field: &GaloisField, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.order() as u64;
        let count = q.pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(field.element((idx % q) as u32));
                idx /= q;
            }
            coeffs.push(field.one());
            Poly::new(field, coeffs)
        })
    }

    /// Monic irreducibles of degree `d`, in canonical order.
    pub fn monic_irreducibles(field: &GaloisField, d: usize) -> Vec<Poly> {
        Self::monic_of_degree(field, d)
            .filter(|p| p.is_irreducible())
            .collect()
    }

    /// Parses `t^3+2*t+1`, with optional parentheses around the whole
    /// expression. Coefficients are integers reduced into the prime field.
    pub fn parse(field: &GaloisField, s: &str) -> Result<Poly> {
        let err = || Error::Parse {
            what: "polynomial",
            input: s.to_string(),
        };
        let mut compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        while compact.starts_with('(') && compact.ends_with(')') {
            compact = compact[1..compact.len() - 1].to_string();
        }
        if compact.is_empty() {
            return Err(err());
        }
        let mut acc = Poly::zero(field);
        for (neg, term) in split_terms(&compact).ok_or_else(err)? {
            let (c, k) = parse_monomial(term, 't').ok_or_else(err)?;
            let c = if neg { -c } else { c };
            acc = acc.add(&Poly::monomial(field, field.from_int(c), k as usize));
        }
        Ok(acc)
    }

    /// Canonical ordering: degree first, then coefficients from the top
    /// down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                self.coeffs
                    .iter()
                    .rev()
                    .map(|c| c.index())
                    .cmp(other.coeffs.iter().rev().map(|c| c.index()))
            })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        if self.is_zero() {
            return out.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.write_str("+")?;
            }
            first = false;
            let cs = f.format(c);
            let cs = if f.is_prime_field() || !cs.contains('+') {
                cs
            } else {
                format!("({cs})")
            };
            match k {
                0 => write!(out, "{cs}")?,
                _ => {
                    if c != FieldElement::ONE {
                        write!(out, "{cs}*")?;
                    }
                    if k == 1 {
                        out.write_str("t")?;
                    } else {
                        write!(out, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
