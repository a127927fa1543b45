//! Finite fields `F_q`, `q = p^m`, for odd primes `p`.
//!
//! Elements are stored as packed base-`p` digit vectors relative to the power
//! basis of the modulus: the element `c_0 + c_1 g + ... + c_{m-1} g^{m-1}` has
//! index `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The index order is the fixed
//! total order used wherever a canonical representative is chosen.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields up to this order get log/exp and Frobenius tables.
const TABLE_LIMIT: u64 = 1 << 20;
/// Artin-Schreier solving enumerates the field up to this order (3^8).
pub const AS_ENUMERATION_LIMIT: u32 = 6561;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct FieldConfig {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, little-endian coefficients, length `m + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
    frob_inv: Vec<u32>,
}

/// Handle to a finite field. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct GaloisField(Arc<FieldConfig>);

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

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

fn check_characteristic(p: u64) -> Result<u32> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 16 {
        return Err(Error::FieldTooLarge { p: p as u32, m: 1 });
    }
    Ok(p as u32)
}

fn order(p: u32, m: u32) -> Result<u32> {
    let q = (p as u64).checked_pow(m).filter(|&q| q < 1 << 31);
    q.map(|q| q as u32).ok_or(Error::FieldTooLarge { p, m })
}

impl GaloisField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        let p = check_characteristic(p)?;
        Ok(Self::build(p, vec![0, 1]))
    }

    /// `F_{p^m}` presented with the lexicographically smallest monic
    /// irreducible modulus of degree `m` (compared from `g^{m-1}` down to
    /// the constant term).
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let p = check_characteristic(p)?;
        if m == 0 {
            return Err(Error::InvalidDegree(m));
        }
        if m == 1 {
            return Ok(Self::build(p, vec![0, 1]));
        }
        let count = order(p, m)?;
        for lower in 0..count {
            let mut modulus = digits(lower, p, m as usize);
            modulus.push(1);
            if prime_poly::is_irreducible(&modulus, p) {
                return Ok(Self::build(p, modulus));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_p[g]/(modulus)` for a user-supplied monic irreducible modulus
    /// (little-endian coefficients).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self> {
        let p = check_characteristic(p)?;
        let mut modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 {
            return Err(Error::InvalidDegree(0));
        }
        order(p, m)?;
        if modulus[m as usize] != 1 || !prime_poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(m));
        }
        if m == 1 {
            // Every linear modulus gives the same presentation of F_p.
            return Ok(Self::build(p, vec![0, 1]));
        }
        Ok(Self::build(p, modulus))
    }

    fn build(p: u32, modulus: Vec<u32>) -> Self {
        let m = (modulus.len() - 1) as u32;
        let q = p.pow(m);
        let mut cfg = FieldConfig {
            p,
            m,
            q,
            modulus,
            tables: None,
        };
        if (q as u64) <= TABLE_LIMIT && m > 1 {
            cfg.tables = Some(Tables::build(&cfg));
        }
        GaloisField(Arc::new(cfg))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The generator `g` of the power basis (equal to the residue of `t` at
    /// a place whose polynomial is the modulus).
    pub fn generator(&self) -> FieldElement {
        if self.0.m == 1 {
            // g is a root of X, i.e. 0
            FieldElement::ZERO
        } else {
            FieldElement(self.0.p)
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its packed index; panics if out of range.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.0.q, "index {index} out of range for F_{}", self.0.q);
        FieldElement(index)
    }

    pub fn from_coords(&self, coords: &[u32]) -> FieldElement {
        let p = self.0.p;
        let mut idx = 0u32;
        for &c in coords.iter().take(self.0.m as usize).rev() {
            idx = idx * p + c % p;
        }
        FieldElement(idx)
    }

    pub fn coords(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0, self.0.p, self.0.m as usize)
    }

    /// `Some(c)` when `x` lies in the prime subfield.
    pub fn as_prime(&self, x: FieldElement) -> Option<u32> {
        (x.0 < self.0.p).then_some(x.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p;
        if self.0.m == 1 {
            return FieldElement((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut scale) = (0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.0.p;
        if self.0.m == 1 {
            return FieldElement((p - a.0) % p);
        }
        let mut x = a.0;
        let (mut out, mut scale) = (0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * scale;
            x /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let p = self.0.p;
        if self.0.m == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % p as u64) as u32);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let l = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
            return FieldElement(t.exp[l as usize]);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.0.p as u64;
        let m = self.0.m as usize;
        let x = self.coords(a);
        let y = self.coords(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                let sub = c * self.0.modulus[i] as u64 % p;
                prod[k - m + i] = (prod[k - m + i] + p - sub) % p;
            }
        }
        let coords: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.from_coords(&coords)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let l = (n - t.log[a.0 as usize]) % n;
            return Ok(FieldElement(t.exp[l as usize]));
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^p`.
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        if self.0.m == 1 {
            return x;
        }
        match &self.0.tables {
            Some(t) => FieldElement(t.frob[x.0 as usize]),
            None => self.pow(x, self.0.p as u64),
        }
    }

    /// The unique `y` with `y^p = x`, i.e. `x^{p^{m-1}}`.
    pub fn frobenius_inv(&self, x: FieldElement) -> FieldElement {
        if self.0.m == 1 {
            return x;
        }
        match &self.0.tables {
            Some(t) => FieldElement(t.frob_inv[x.0 as usize]),
            None => self.pow(x, (self.0.q / self.0.p) as u64),
        }
    }

    /// `x + x^p + ... + x^{p^{m-1}}` as a residue in `[0, p)`.
    pub fn trace_to_prime(&self, x: FieldElement) -> u32 {
        let mut acc = x;
        let mut y = x;
        for _ in 1..self.0.m {
            y = self.frobenius(y);
            acc = self.add(acc, y);
        }
        self.as_prime(acc)
            .expect("trace lands in the prime subfield")
    }

    /// `x - x^{1/p}`, the map whose cokernel classifies local obstructions.
    pub fn artin_schreier_map(&self, x: FieldElement) -> FieldElement {
        self.sub(x, self.frobenius_inv(x))
    }

    /// All `x` with `x - x^{1/p} = c`, sorted by index. Either empty or of
    /// size `p`.
    pub fn artin_schreier_solve(&self, c: FieldElement) -> Vec<FieldElement> {
        if self.0.q <= AS_ENUMERATION_LIMIT {
            self.artin_schreier_enumerate(c)
        } else {
            self.artin_schreier_linear(c)
        }
    }

    pub fn artin_schreier_enumerate(&self, c: FieldElement) -> Vec<FieldElement> {
        self.elements()
            .filter(|&x| self.artin_schreier_map(x) == c)
            .collect()
    }

    /// Solves `x - x^{1/p} = c` as an `F_p`-linear system in the coordinates
    /// of `x`. The kernel is the prime field, so the solutions are `x_0 + F_p`.
    pub fn artin_schreier_linear(&self, c: FieldElement) -> Vec<FieldElement> {
        let p = self.0.p as u64;
        let m = self.0.m as usize;
        // columns: images of the basis vectors g^i
        let mut rows = vec![vec![0u64; m + 1]; m];
        for i in 0..m {
            let mut basis = vec![0u32; m];
            basis[i] = 1;
            let img = self.coords(self.artin_schreier_map(self.from_coords(&basis)));
            for (r, &v) in img.iter().enumerate() {
                rows[r][i] = v as u64;
            }
        }
        for (r, &v) in self.coords(c).iter().enumerate() {
            rows[r][m] = v as u64;
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m {
            let Some(sel) = (row..m).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(row, sel);
            let inv = modpow(rows[row][col], p - 2, p);
            for v in rows[row].iter_mut() {
                *v = *v * inv % p;
            }
            let pivot = rows[row].clone();
            for (r, cur) in rows.iter_mut().enumerate().take(m) {
                if r != row && cur[col] != 0 {
                    let f = cur[col];
                    for (v, &w) in cur.iter_mut().zip(&pivot) {
                        *v = (*v + p * p - f * w) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if rows[row..].iter().any(|r| r[m] != 0) {
            return Vec::new();
        }
        let mut particular = vec![0u32; m];
        for (r, &col) in pivots.iter().enumerate() {
            particular[col] = rows[r][m] as u32;
        }
        let x0 = self.from_coords(&particular);
        let mut out: Vec<FieldElement> = (0..self.0.p)
            .map(|k| self.add(x0, FieldElement(k)))
            .collect();
        out.sort();
        out
    }

    /// Parses `2*g+1`, `g^2+2`, or a bare integer.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let err = || Error::Parse {
            what: "field element",
            input: s.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut acc = FieldElement::ZERO;
        for (sign, term) in split_terms(&compact).ok_or_else(err)? {
            let (coef, power) = parse_monomial(term, 'g').ok_or_else(err)?;
            let v = match power {
                0 => self.from_int(coef),
                _ if self.0.m == 1 => return Err(err()),
                _ => self.mul(self.from_int(coef), self.pow(self.generator(), power)),
            };
            acc = if sign { self.sub(acc, v) } else { self.add(acc, v) };
        }
        Ok(acc)
    }

    pub fn format(&self, x: FieldElement) -> String {
        if self.0.m == 1 {
            return x.0.to_string();
        }
        let coords = self.coords(x);
        let mut terms = Vec::new();
        for (k, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (k, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}*g"),
                (k, 1) => format!("g^{k}"),
                (k, c) => format!("{c}*g^{k}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    pub fn display(&self, x: FieldElement) -> impl fmt::Display + '_ {
        DisplayElement(self, x)
    }
}

struct DisplayElement<'a>(&'a GaloisField, FieldElement);

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.format(self.1))
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[g]/(", self.0.p)?;
            let mut first = true;
            for (k, &c) in self.0.modulus.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                if !first {
                    f.write_str("+")?;
                }
                first = false;
                match (k, c) {
                    (0, c) => write!(f, "{c}")?,
                    (1, 1) => f.write_str("g")?,
                    (1, c) => write!(f, "{c}*g")?,
                    (k, 1) => write!(f, "g^{k}")?,
                    (k, c) => write!(f, "{c}*g^{k}")?,
                }
            }
            f.write_str(")")
        }
    }
}

impl Tables {
    fn build(cfg: &FieldConfig) -> Tables {
        let field = GaloisField(Arc::new(FieldConfig {
            p: cfg.p,
            m: cfg.m,
            q: cfg.q,
            modulus: cfg.modulus.clone(),
            tables: None,
        }));
        let q = cfg.q as usize;
        let n = (cfg.q - 1) as u64;
        let factors = prime_factors(n);
        let gen = (2..cfg.q)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&r| field.pow(g, n / r) != FieldElement::ONE))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut cur = FieldElement::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = field.mul_slow(cur, gen);
        }
        let p = cfg.p as u64;
        let mut frob = vec![0u32; q];
        let mut frob_inv = vec![0u32; q];
        for x in 1..q {
            let l = log[x] as u64 * p % n;
            let y = exp[l as usize];
            frob[x] = y;
            frob_inv[y as usize] = x as u32;
        }
        Tables {
            exp,
            log,
            frob,
            frob_inv,
        }
    }
}

fn digits(mut x: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(x % p);
        x /= p;
    }
    out
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Splits `a+b-c` into signed terms; `true` marks subtraction.
pub(crate) fn split_terms(s: &str) -> Option<Vec<(bool, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut neg = false;
    if bytes.first() == Some(&b'-') {
        neg = true;
        start = 1;
    } else if bytes.first() == Some(&b'+') {
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && i > start && bytes[i - 1] != b'^' {
            out.push((neg, &s[start..i]));
            neg = c == b'-';
            start = i + 1;
        }
        i += 1;
    }
    out.push((neg, &s[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return None;
    }
    Some(out)
}

/// Parses `c`, `var`, `c*var`, `var^k`, `c*var^k`; returns `(c, k)`.
pub(crate) fn parse_monomial(term: &str, var: char) -> Option<(i64, u64)> {
    let (coef, rest) = match term.split_once('*') {
        Some((c, r)) => (c.parse::<i64>().ok()?, r),
        None => {
            if term.starts_with(var) {
                (1, term)
            } else {
                return Some((term.parse::<i64>().ok()?, 0));
            }
        }
    };
    let mut chars = rest.chars();
    if chars.next()? != var {
        return None;
    }
    let tail = chars.as_str();
    if tail.is_empty() {
        return Some((coef, 1));
    }
    let k = tail.strip_prefix('^')?.parse::<u64>().ok()?;
    Some((coef, k))
}

/// Dense polynomials over `F_p` with `u32` coefficients, enough to test
/// irreducibility of a candidate modulus.
mod prime_poly {
    fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let p64 = p as u64;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let db = b.len() - 1;
        let lead_inv = super::modpow(b[db] as u64, p64 - 2, p64);
        while r.len() > db {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p64;
            if c != 0 {
                for (i, &bi) in b.iter().enumerate() {
                    let k = top - db + i;
                    r[k] = (r[k] + p64 * p64 - c * bi as u64) % p64;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        trim(r.into_iter().map(|c| c as u32).collect())
    }

    fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
            }
        }
        rem(&prod.into_iter().map(|c| c as u32).collect::<Vec<_>>(), f, p)
    }

    fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or: `f` of degree `m` is irreducible iff
    /// `gcd(f, X^{p^i} - X) = 1` for `1 <= i <= m/2`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..=m / 2 {
            h = powmod(&h, p as u64, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> GaloisField {
        GaloisField::new(3, 2).unwrap()
    }

    #[test]
    fn default_modulus_for_f9_is_g2_plus_1() {
        assert_eq!(f9().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn frobenius_examples() {
        let f = f9();
        assert_eq!(f.frobenius(f.zero()), f.zero());
        assert_eq!(f.frobenius(f.one()), f.one());
        // g^3 = -g by repeated multiplication
        let g = f.generator();
        let g3 = f.mul(f.mul(g, g), g);
        assert_eq!(g3, f.parse("2*g").unwrap());
        assert_eq!(f.frobenius(g), g3);
    }

    #[test]
    fn frobenius_inv_roundtrip_f27() {
        let f = GaloisField::new(3, 3).unwrap();
        for x in f.elements() {
            assert_eq!(f.frobenius_inv(f.frobenius(x)), x);
        }
        let f3 = GaloisField::prime(3).unwrap();
        assert_eq!(f3.frobenius_inv(f3.from_int(2)), f3.from_int(2));
        assert_eq!(f3.frobenius_inv(f3.zero()), f3.zero());
    }

    #[test]
    fn trace_examples() {
        let f3 = GaloisField::prime(3).unwrap();
        assert_eq!(f3.trace_to_prime(f3.one()), 1);
        let f = f9();
        assert_eq!(f.trace_to_prime(f.generator()), 0);
        assert_eq!(f.trace_to_prime(f.one()), 2);
    }

    #[test]
    fn artin_schreier_examples() {
        let f3 = GaloisField::prime(3).unwrap();
        assert_eq!(f3.artin_schreier_solve(f3.zero()).len(), 3);
        assert!(f3.artin_schreier_solve(f3.one()).is_empty());
        let f = f9();
        let sols = f.artin_schreier_solve(f.generator());
        let brute: Vec<_> = f
            .elements()
            .filter(|&x| f.sub(x, f.frobenius_inv(x)) == f.generator())
            .collect();
        assert_eq!(sols.len(), 3);
        assert_eq!(sols, brute);
    }

    #[test]
    fn characteristic_checks() {
        assert_eq!(GaloisField::prime(2).unwrap_err(), Error::CharacteristicTwo);
        assert_eq!(GaloisField::prime(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(GaloisField::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(GaloisField::with_modulus(3, &[2, 0, 1]).is_err()); // g^2 - 1
        assert!(GaloisField::with_modulus(3, &[1, 0, 1]).is_ok());
    }

    #[test]
    fn parse_and_format() {
        let f = f9();
        let x = f.parse("2*g+1").unwrap();
        assert_eq!(f.coords(x), vec![1, 2]);
        assert_eq!(f.format(x), "2*g+1");
        assert_eq!(f.parse("g^2").unwrap(), f.parse("2").unwrap());
        assert_eq!(f.parse("-g").unwrap(), f.parse("2*g").unwrap());
        let f3 = GaloisField::prime(3).unwrap();
        assert_eq!(f3.format(f3.parse("5").unwrap()), "2");
        assert!(f3.parse("g").is_err());
        assert!(f.parse("2*h").is_err());
    }

    #[test]
    fn linear_and_enumeration_solvers_agree() {
        for (p, m) in [(3, 4), (5, 2), (3, 3), (7, 2)] {
            let f = GaloisField::new(p, m).unwrap();
            for c in f.elements() {
                assert_eq!(f.artin_schreier_enumerate(c), f.artin_schreier_linear(c));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        // 3^13 > TABLE_LIMIT: slow multiplication and linear AS path
        let f = GaloisField::new(3, 13).unwrap();
        let x = f.parse("g^5+2*g+1").unwrap();
        assert_eq!(f.frobenius_inv(f.frobenius(x)), x);
        let inv = f.inv(x).unwrap();
        assert_eq!(f.mul(x, inv), f.one());
        let c = f.artin_schreier_map(x);
        let sols = f.artin_schreier_solve(c);
        assert_eq!(sols.len(), 3);
        assert!(sols.contains(&x));
        assert_eq!(f.trace_to_prime(c), 0);
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let f = GaloisField::new(5, 3).unwrap();
        for a in f.elements().step_by(7) {
            for b in f.elements().step_by(11) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
            }
        }
    }
}
