//! Truncated Laurent series over `F_q` with explicit precision.
//!
//! A series carries a precision `M`: every coefficient at an exponent below
//! `M` is known, nothing at or beyond `M` is. `None` means infinite precision
//! (an exact Laurent polynomial, including exact zero). Every operation
//! reports the tightest precision provable from its inputs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, GaloisField};

/// Precision: `None` is infinite.
pub type Prec = Option<i64>;

pub(crate) fn prec_min(a: Prec, b: Prec) -> Prec {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn prec_add(a: Prec, b: Prec) -> Prec {
    Some(a? + b?)
}

/// `ceil(a / b)` for `b > 0`.
pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    field: GaloisField,
    low: i64,
    /// `coeffs[i]` is the coefficient at `low + i`; first and last are
    /// nonzero, empty for a zero series.
    coeffs: Vec<FieldElement>,
    prec: Prec,
}

impl LaurentSeries {
    /// Builds `Σ coeffs[i] u^{low+i} + O(u^prec)`, dropping anything at or
    /// beyond `prec`.
    pub fn new(field: &GaloisField, low: i64, mut coeffs: Vec<FieldElement>, prec: Prec) -> Self {
        if let Some(m) = prec {
            let keep = (m - low).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                coeffs.drain(..k);
                LaurentSeries {
                    field: field.clone(),
                    low: low + k as i64,
                    coeffs,
                    prec,
                }
            }
            None => LaurentSeries {
                field: field.clone(),
                low: prec.unwrap_or(0),
                coeffs: Vec::new(),
                prec,
            },
        }
    }

    pub fn exact(field: &GaloisField, low: i64, coeffs: Vec<FieldElement>) -> Self {
        Self::new(field, low, coeffs, None)
    }

    /// Sparse constructor from `(exponent, integer coefficient)` pairs.
    pub fn from_terms(field: &GaloisField, terms: &[(i64, i64)], prec: Prec) -> Self {
        let mut acc = Self::zero(field);
        for &(k, c) in terms {
            acc = acc.add(&Self::monomial(field, field.from_int(c), k));
        }
        match prec {
            Some(m) => acc.truncate(m),
            None => acc,
        }
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::new(field, 0, Vec::new(), None)
    }

    /// `O(u^prec)`.
    pub fn zero_to(field: &GaloisField, prec: i64) -> Self {
        Self::new(field, prec, Vec::new(), Some(prec))
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::monomial(field, field.one(), 0)
    }

    pub fn constant(field: &GaloisField, c: FieldElement) -> Self {
        Self::monomial(field, c, 0)
    }

    /// Exact `c u^k`.
    pub fn monomial(field: &GaloisField, c: FieldElement, k: i64) -> Self {
        Self::exact(field, k, vec![c])
    }

    /// The uniformizer `u`.
    pub fn uniformizer(field: &GaloisField) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// No known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// Lower bound for the valuation; `None` means `+∞` (exact zero).
    pub fn valuation_bound(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Some(self.low)
        }
    }

    /// Exponent of the first stored coefficient.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn stored(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// One past the highest stored exponent.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    /// The coefficient at exponent `k`, or `None` if it is beyond the
    /// precision.
    pub fn try_coeff(&self, k: i64) -> Option<FieldElement> {
        if self.prec.is_some_and(|m| k >= m) {
            return None;
        }
        Some(self.coeff_unchecked(k))
    }

    /// The coefficient at exponent `k`; panics beyond the precision.
    pub fn coeff(&self, k: i64) -> FieldElement {
        self.try_coeff(k)
            .unwrap_or_else(|| panic!("coefficient u^{k} is beyond precision {:?}", self.prec))
    }

    fn coeff_unchecked(&self, k: i64) -> FieldElement {
        if k < self.low || k >= self.high() {
            FieldElement::ZERO
        } else {
            self.coeffs[(k - self.low) as usize]
        }
    }

    /// Iterates over `(exponent, coefficient)` of the stored nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.low + i as i64, c))
    }

    /// Forgets everything at or beyond `m`.
    pub fn truncate(&self, m: i64) -> Self {
        let prec = prec_min(self.prec, Some(m));
        Self::new(&self.field, self.low, self.coeffs.clone(), prec)
    }

    /// The stored coefficients regarded as an exact Laurent polynomial.
    pub fn as_exact(&self) -> Self {
        Self::new(&self.field, self.low, self.coeffs.clone(), None)
    }

    /// Coefficients agree at every exponent below `m` and both are known
    /// there.
    pub fn agrees_to(&self, other: &Self, m: i64) -> bool {
        if self.prec.is_some_and(|p| p < m) || other.prec.is_some_and(|p| p < m) {
            return false;
        }
        let lo = self.low.min(other.low);
        (lo..m).all(|k| self.coeff_unchecked(k) == other.coeff_unchecked(k))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        let prec = prec_min(self.prec, other.prec);
        if self.is_zero() {
            return other.truncate_opt(prec);
        }
        if other.is_zero() {
            return self.truncate_opt(prec);
        }
        let lo = self.low.min(other.low);
        let mut hi = self.high().max(other.high());
        if let Some(m) = prec {
            hi = hi.min(m);
        }
        let coeffs = (lo..hi.max(lo))
            .map(|k| f.add(self.coeff_unchecked(k), other.coeff_unchecked(k)))
            .collect();
        Self::new(f, lo, coeffs, prec)
    }

    fn truncate_opt(&self, prec: Prec) -> Self {
        match prec {
            Some(m) => self.truncate(m),
            None => self.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.low, self.coeffs.iter().map(|&c| f.neg(c)).collect(), self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        if c.is_zero() {
            return match self.prec {
                // c·(s + O(u^M)) = O(u^M) since c is a constant
                Some(m) => Self::zero_to(f, m),
                None => Self::zero(f),
            };
        }
        Self::new(f, self.low, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.prec)
    }

    /// Multiplication by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|m| m + k),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul(other))
    }

    /// Product with precision `min(prec_x + val_y, prec_y + val_x)`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.field == other.field);
        let f = &self.field;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(f);
        }
        let prec = prec_min(
            prec_add(self.prec, other.valuation_bound()),
            prec_add(other.prec, self.valuation_bound()),
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero_to(f, prec.expect("a zero factor has finite precision"));
        }
        let lo = self.low + other.low;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(m) = prec {
            len = len.min((m - lo).max(0) as usize);
        }
        let mut out = vec![f.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, lo, out, prec)
    }

    /// Multiplicative inverse. If `x = c u^v (1 + ...) + O(u^P)` the
    /// inverse is known to `P - 2v`.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.field;
        let Some(v) = self.valuation() else {
            return Err(if self.is_exact() {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted
            });
        };
        let lead_inv = f.inv(self.coeffs[0])?;
        let rel = match self.prec {
            None if self.coeffs.len() == 1 => {
                return Ok(Self::monomial(f, lead_inv, -v));
            }
            None => return Err(Error::NeedsTruncation),
            Some(m) => (m - v) as usize,
        };
        let mut y = vec![f.zero(); rel];
        y[0] = lead_inv;
        for n in 1..rel {
            let mut acc = f.zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc = f.add(acc, f.mul(self.coeffs[k], y[n - k]));
            }
            y[n] = f.neg(f.mul(lead_inv, acc));
        }
        Ok(Self::new(f, -v, y, self.prec.map(|m| m - 2 * v)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.mul(&other.inv()?))
    }

    /// `self^n` for `n >= 0`; negative `n` goes through `inv`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `self^p`. In characteristic `p` this is additive, so the precision
    /// is multiplied by `p`.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let mut out = vec![f.zero(); ((self.coeffs.len().max(1) - 1) * p as usize) + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p as usize] = f.frobenius(c);
        }
        Self::new(f, self.low * p, out, self.prec.map(|m| m * p))
    }

    /// Formal `d/du`; precision drops by one.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = (self.low..self.high())
            .map(|k| f.mul(f.from_int(k), self.coeff_unchecked(k)))
            .collect();
        Self::new(f, self.low - 1, coeffs, self.prec.map(|m| m - 1))
    }

    /// The series `y` with `y^p = self`. Errors if a stored nonzero
    /// coefficient sits at an exponent not divisible by `p`.
    pub fn pth_root(&self) -> Result<Self> {
        let f = &self.field;
        let p = f.characteristic() as i64;
        if let Some((k, _)) = self.terms().find(|(k, _)| k.rem_euclid(p) != 0) {
            return Err(Error::NotPthPower(k));
        }
        let lo = self.low.div_euclid(p);
        let hi = ceil_div(self.high(), p);
        let coeffs = (lo..hi.max(lo))
            .map(|j| f.frobenius_inv(self.coeff_unchecked(j * p)))
            .collect();
        Ok(Self::new(f, lo, coeffs, self.prec.map(|m| ceil_div(m, p))))
    }

    /// The `j`-th component in `self = Σ_{j<p} x_j^p u^j`; known to
    /// `ceil((prec - j)/p)`.
    pub fn pbasis_component(&self, j: usize) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        let j = j as i64;
        debug_assert!(j < p);
        let lo = (self.low - j).div_euclid(p);
        let hi = ceil_div(self.high() - j, p);
        let coeffs = (lo..hi.max(lo))
            .map(|i| f.frobenius_inv(self.coeff_unchecked(i * p + j)))
            .collect();
        Self::new(f, lo, coeffs, self.prec.map(|m| ceil_div(m - j, p)))
    }

    /// `(x_0, ..., x_{p-1})` with `self = Σ_j x_j^p u^j`.
    pub fn pbasis_decompose(&self) -> Vec<Self> {
        let p = self.field.characteristic() as usize;
        (0..p).map(|j| self.pbasis_component(j)).collect()
    }

    /// `Σ_j x_j^p u^j`, the inverse of [`pbasis_decompose`](Self::pbasis_decompose).
    pub fn pbasis_recompose(field: &GaloisField, parts: &[Self]) -> Self {
        parts
            .iter()
            .enumerate()
            .fold(Self::zero(field), |acc, (j, x)| acc.add(&x.frobenius().shift(j as i64)))
    }

    /// `self(g)` for `g` of positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_field(g)?;
        let f = &self.field;
        match g.valuation() {
            Some(v) if v >= 1 => {}
            other => {
                return Err(Error::NonPositiveValuation {
                    what: "substituted series",
                    valuation: other,
                })
            }
        }
        let v = g.valuation().expect("checked above");
        if self.is_zero() {
            return Ok(match self.prec {
                None => Self::zero(f),
                Some(m) => Self::zero_to(f, m * v),
            });
        }
        // self = u^low · F(u), F known to relative precision prec - low; the
        // known zeros between the stored tail and prec are part of F.
        let (mut acc, top) = match self.prec {
            None => (Self::zero(f), self.high()),
            Some(m) => (Self::zero_to(f, 0), m),
        };
        for k in (self.low..top).rev() {
            acc = acc.mul(g).add(&Self::constant(f, self.coeff_unchecked(k)));
        }
        Ok(acc.mul(&g.pow(self.low)?))
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            low_exp: self.low,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|&c| self.field.format(c)).collect(),
        }
    }

    pub fn from_json(field: &GaloisField, json: &SeriesJson) -> Result<Self> {
        let coeffs = json
            .coeffs
            .iter()
            .map(|s| field.parse(s))
            .collect::<Result<Vec<_>>>()?;
        if json.prec.is_some_and(|m| m < json.low_exp + coeffs.len() as i64) {
            return Err(Error::Parse {
                what: "series",
                input: format!("{json:?}"),
            });
        }
        Ok(Self::new(field, json.low_exp, coeffs, json.prec))
    }
}

/// JSON form: `{lowExp, prec, coeffs}`; `prec` is `null` for exact series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(rename = "lowExp")]
    pub low_exp: i64,
    pub prec: Option<i64>,
    pub coeffs: Vec<String>,
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            let cs = f.format(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (k, c == FieldElement::ONE) {
                (0, _) => cs,
                (1, true) => "u".to_string(),
                (1, false) => format!("{cs}*u"),
                (k, true) => format!("u^{k}"),
                (k, false) => format!("{cs}*u^{k}"),
            });
        }
        if let Some(m) = self.prec {
            parts.push(format!("O(u^{m})"));
        }
        if parts.is_empty() {
            out.write_str("0")
        } else {
            out.write_str(&parts.join(" + "))
        }
    }
}

/// A polynomial in `X` with series coefficients, `coeffs[i]` at `X^i`.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    pub coeffs: Vec<LaurentSeries>,
}

impl SeriesPoly {
    pub fn new(coeffs: Vec<LaurentSeries>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        SeriesPoly { coeffs }
    }

    pub fn field(&self) -> &GaloisField {
        self.coeffs[0].field()
    }

    pub fn eval(&self, x: &LaurentSeries) -> LaurentSeries {
        let f = self.field();
        self.coeffs
            .iter()
            .rev()
            .fold(LaurentSeries::zero(f), |acc, c| acc.mul(x).add(c))
    }

    pub fn derivative(&self) -> SeriesPoly {
        let f = self.field();
        let coeffs: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(f.from_int(i as i64)))
            .collect();
        if coeffs.is_empty() {
            SeriesPoly::new(vec![LaurentSeries::zero(f)])
        } else {
            SeriesPoly::new(coeffs)
        }
    }

    fn truncate(&self, m: i64) -> SeriesPoly {
        SeriesPoly::new(self.coeffs.iter().map(|c| c.truncate(m)).collect())
    }
}

/// Newton iteration for a simple root of `poly` over the power series ring:
/// returns the unique root `x ≡ x0 (mod u)` to precision `m`. Precision
/// doubles per step.
pub fn hensel_simple_root(
    poly: &SeriesPoly,
    x0: &LaurentSeries,
    m: i64,
) -> Result<LaurentSeries> {
    let f = poly.field().clone();
    if m < 1 {
        return Err(Error::InvalidArgument(format!("target precision {m} < 1")));
    }
    for c in &poly.coeffs {
        if c.valuation_bound().is_some_and(|v| v < 0) {
            return Err(Error::Hensel("coefficients must be integral"));
        }
        if c.prec().is_some_and(|p| p < m) {
            return Err(Error::InsufficientPrecision {
                needed: m,
                available: c.prec(),
            });
        }
    }
    if x0.valuation_bound().is_some_and(|v| v < 0) {
        return Err(Error::Hensel("initial approximation must be integral"));
    }
    let residue = x0.try_coeff(0).ok_or(Error::PrecisionExhausted)?;
    let deriv = poly.derivative();
    let mut x = LaurentSeries::constant(&f, residue);
    let value = poly.truncate(1).eval(&x);
    if !value.is_zero() {
        return Err(Error::Hensel("residue is not a root"));
    }
    if deriv.truncate(1).eval(&x).try_coeff(0).is_none_or(|c| c.is_zero()) {
        return Err(Error::Hensel("derivative is not a unit"));
    }
    let mut k = 1;
    while k < m {
        let k2 = (2 * k).min(m);
        let fx = poly.truncate(k2).eval(&x);
        let dfx = deriv.truncate(k2).eval(&x).truncate(k2);
        let step = fx.mul(&dfx.inv()?);
        x = x.sub(&step).truncate(k2).as_exact();
        k = k2;
    }
    let x = x.truncate(m);
    let residual = poly.eval(&x);
    if residual.valuation().is_some_and(|v| v < m) {
        return Err(Error::Hensel("Newton iteration did not converge"));
    }
    Ok(x)
}

/// The unique `X ≡ 0 (mod u)` with `X^p - X = c`, namely
/// `X = -Σ_{s≥0} c^{p^s}`, to precision `min(m, prec(c))`.
pub fn hensel_artin_schreier(c: &LaurentSeries, m: i64) -> Result<LaurentSeries> {
    let f = c.field();
    if c.is_exact_zero() {
        return Ok(LaurentSeries::zero(f).truncate(m));
    }
    let v = c.valuation_bound().expect("not exact zero");
    if v <= 0 {
        return Err(Error::NonPositiveValuation {
            what: "Artin-Schreier right-hand side",
            valuation: c.valuation(),
        });
    }
    let target = prec_min(Some(m), c.prec()).expect("finite");
    let mut acc = LaurentSeries::zero(f);
    let mut term = c.truncate(target);
    while term.valuation_bound().is_some_and(|b| b < target) {
        acc = acc.sub(&term);
        term = term.frobenius().truncate(target);
    }
    Ok(acc.truncate(target))
}
