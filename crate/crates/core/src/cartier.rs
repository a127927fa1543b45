//! Differential forms `f d(var)` over `F_q((u))` and `F_p(t)`, with the
//! exterior derivative, the Cartier operator and its inverse, residues, and
//! the residue pairing.
//!
//! Every form is normalized to the ambient coordinate: `u` locally, `t`
//! globally. A form `f dg` is brought to this shape via `dg = g' d(var)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::poly::Poly;
use crate::ratfield::{LocalEmbedding, RationalFunction};
use crate::series::LaurentSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Differential {
    /// `f du` over a completion.
    Local(LaurentSeries),
    /// `f dt` over the global field.
    Global(RationalFunction),
}

impl Differential {
    pub fn var(&self) -> char {
        match self {
            Differential::Local(_) => 'u',
            Differential::Global(_) => 't',
        }
    }

    pub fn local_coeff(&self) -> Result<&LaurentSeries> {
        match self {
            Differential::Local(f) => Ok(f),
            Differential::Global(_) => Err(Error::InvalidArgument("expected a local form".into())),
        }
    }

    pub fn global_coeff(&self) -> Result<&RationalFunction> {
        match self {
            Differential::Global(f) => Ok(f),
            Differential::Local(_) => {
                Err(Error::InvalidArgument("expected a global form".into()))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Differential::Local(f) => f.is_zero(),
            Differential::Global(f) => f.is_zero(),
        }
    }

    /// `f dg` for local `g`, normalized to `f g' du`.
    pub fn local_f_dg(f: &LaurentSeries, g: &LaurentSeries) -> Self {
        Differential::Local(f.mul(&g.derivative()))
    }

    /// `f dg` for global `g`, normalized to `f g' dt`.
    pub fn global_f_dg(f: &RationalFunction, g: &RationalFunction) -> Self {
        Differential::Global(f.mul(&g.derivative()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Differential::Local(a), Differential::Local(b)) => Ok(Differential::Local(a.try_add(b)?)),
            (Differential::Global(a), Differential::Global(b)) => {
                Ok(Differential::Global(a.add(b)))
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Differential::Local(a) => Differential::Local(a.neg()),
            Differential::Global(a) => Differential::Global(a.neg()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplication by a local function.
    pub fn mul_local(&self, x: &LaurentSeries) -> Result<Self> {
        Ok(Differential::Local(self.local_coeff()?.try_mul(x)?))
    }

    /// Multiplication by a global function.
    pub fn mul_global(&self, x: &RationalFunction) -> Result<Self> {
        Ok(Differential::Global(self.global_coeff()?.mul(x)))
    }

    pub fn to_json(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = match self {
            Differential::Local(c) => c.to_string(),
            Differential::Global(c) => c.to_string(),
        };
        let atomic = !coeff.contains(['+', '/', ' ']);
        if atomic {
            write!(f, "{coeff} d{}", self.var())
        } else {
            write!(f, "({coeff}) d{}", self.var())
        }
    }
}

/// A pair of forms, the target of the map `η ↦ (C(tη), η - C(η))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialPair {
    pub first: Differential,
    pub second: Differential,
}

impl DifferentialPair {
    pub fn new(first: Differential, second: Differential) -> Result<Self> {
        if first.var() != second.var() {
            return Err(Error::FieldMismatch);
        }
        Ok(DifferentialPair { first, second })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.first.sub(&other.first)?, self.second.sub(&other.second)?)
    }

    /// JSON 2-array of the two forms.
    pub fn to_json(&self) -> PairJson {
        PairJson([self.first.to_string(), self.second.to_string()])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson(pub [String; 2]);

impl fmt::Display for DifferentialPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

pub fn d_local(f: &LaurentSeries) -> Differential {
    Differential::Local(f.derivative())
}

pub fn d_global(f: &RationalFunction) -> Differential {
    Differential::Global(f.derivative())
}

/// The components `f_j` of `f = Σ_{j<p} f_j^p t^j`, computed exactly by
/// writing `f = A B^{p-1} / B^p`.
pub fn rational_pbasis(f: &RationalFunction) -> Vec<RationalFunction> {
    let field = f.field();
    let p = field.characteristic() as usize;
    let den = f.denominator();
    let h = f.numerator().mul(&den.pow(p as u64 - 1));
    (0..p)
        .map(|j| {
            let coeffs: Vec<FieldElement> = h
                .coeffs()
                .iter()
                .skip(j)
                .step_by(p)
                .map(|&c| field.frobenius_inv(c))
                .collect();
            RationalFunction::new(Poly::new(field, coeffs), den.clone()).expect("nonzero den")
        })
        .collect()
}

/// `C(f d(var)) = f_{p-1} d(var)` where `f = Σ_j f_j^p var^j`.
pub fn cartier_c(omega: &Differential) -> Differential {
    match omega {
        Differential::Local(f) => {
            let p = f.field().characteristic() as usize;
            Differential::Local(f.pbasis_component(p - 1))
        }
        Differential::Global(f) => {
            let p = f.field().characteristic() as usize;
            let mut parts = rational_pbasis(f);
            Differential::Global(parts.swap_remove(p - 1))
        }
    }
}

/// The representative `f^p var^{p-1} d(var)` of `C^{-1}(f d(var))`.
pub fn cartier_inv(omega: &Differential) -> Differential {
    match omega {
        Differential::Local(f) => {
            let p = f.field().characteristic() as i64;
            Differential::Local(f.frobenius().shift(p - 1))
        }
        Differential::Global(f) => {
            let p = f.field().characteristic() as i64;
            let field = f.field();
            Differential::Global(f.frobenius().mul(&RationalFunction::t_pow(field, p - 1)))
        }
    }
}

/// The `u^{-1}` coefficient of a local form.
pub fn residue(omega: &Differential) -> Result<FieldElement> {
    let f = omega.local_coeff()?;
    f.try_coeff(-1).ok_or(Error::InsufficientPrecision {
        needed: 0,
        available: f.prec(),
    })
}

/// A value in `(1/p)Z/Z`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingValue {
    pub numerator: u32,
    pub denominator: u32,
}

impl std::ops::Add for PairingValue {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        debug_assert_eq!(self.denominator, other.denominator);
        PairingValue {
            numerator: (self.numerator + other.numerator) % self.denominator,
            denominator: self.denominator,
        }
    }
}

impl fmt::Display for PairingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator == 0 {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// `(x, ω) ↦ Tr(res(x ω)) / p` in `(1/p)Z/Z`.
pub fn pairing(x: &LaurentSeries, omega: &Differential) -> Result<PairingValue> {
    let prod = omega.mul_local(x)?;
    let r = residue(&prod)?;
    let field = x.field();
    Ok(PairingValue {
        numerator: field.trace_to_prime(r),
        denominator: field.characteristic(),
    })
}

/// For `ω` with `C(ω) = 0`, an `h` with `dh = ω`. Returns `None` when
/// `C(ω) ≠ 0`.
pub fn antiderivative_local(omega: &Differential) -> Result<Option<LaurentSeries>> {
    let f = omega.local_coeff()?;
    let field = f.field();
    let p = field.characteristic() as i64;
    let mut coeffs = Vec::new();
    for k in f.low()..f.high() {
        let c = f.coeff(k);
        if (k + 1).rem_euclid(p) == 0 {
            if !c.is_zero() {
                return Ok(None);
            }
            coeffs.push(field.zero());
        } else {
            coeffs.push(field.div(c, field.from_int(k + 1))?);
        }
    }
    Ok(Some(LaurentSeries::new(field, f.low() + 1, coeffs, f.prec().map(|m| m + 1))))
}

/// For global `ω = f dt` with `C(ω) = 0`, an `h ∈ F_p(t)` with `dh = ω`,
/// namely `Σ_{j<p-1} f_j^p t^{j+1} / (j+1)`.
pub fn antiderivative_global(omega: &Differential) -> Result<Option<RationalFunction>> {
    let f = omega.global_coeff()?;
    let field = f.field();
    let p = field.characteristic() as usize;
    let parts = rational_pbasis(f);
    if !parts[p - 1].is_zero() {
        return Ok(None);
    }
    let mut acc = RationalFunction::zero(field);
    for (j, fj) in parts.iter().enumerate().take(p - 1) {
        let inv = field.inv(field.from_int(j as i64 + 1))?;
        let term = fj
            .frobenius()
            .mul(&RationalFunction::t_pow(field, j as i64 + 1))
            .scale(inv);
        acc = acc.add(&term);
    }
    Ok(Some(acc))
}

/// `ω` is exact iff `C(ω) = 0`.
pub fn is_exact(omega: &Differential) -> bool {
    cartier_c(omega).is_zero()
}

/// Equality in `Ω¹ / B¹`.
pub fn same_class_mod_exact(a: &Differential, b: &Differential) -> Result<bool> {
    Ok(is_exact(&a.sub(b)?))
}

/// The image of a global form `f dt` in the completion: `f(T) · dT/du du`,
/// known at least to precision `m`.
pub fn localize(omega: &Differential, e: &LocalEmbedding, m: i64) -> Result<Differential> {
    let f = omega.global_coeff()?;
    let mut emb = e.clone();
    let mut slack = 4;
    loop {
        let local = emb.expand(f, m + slack)?.mul(&emb.dtdu);
        match local.prec() {
            None => return Ok(Differential::Local(local)),
            Some(p) if p >= m => return Ok(Differential::Local(local.truncate(m))),
            Some(_) => {}
        }
        slack *= 2;
        emb = emb.refine(m + 2 * slack)?;
    }
}

/// Localizes both components of a global pair.
pub fn localize_pair(pair: &DifferentialPair, e: &LocalEmbedding, m: i64) -> Result<DifferentialPair> {
    DifferentialPair::new(localize(&pair.first, e, m)?, localize(&pair.second, e, m)?)
}
