//! The global field `F_p(t)`: rational functions, places, and embeddings into
//! the completions `F_q((u))`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, GaloisField};
use crate::poly::Poly;
use crate::series::{hensel_simple_root, LaurentSeries, SeriesPoly};

/// A reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(Self::zero(&f));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let lead = f.inv(den.leading())?;
        num = num.scale(lead);
        den = den.scale(lead);
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(num: Poly) -> Self {
        let den = Poly::one(num.field());
        RationalFunction { num, den }
    }

    pub fn zero(field: &GaloisField) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &GaloisField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: &GaloisField, c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(field, c))
    }

    pub fn t(field: &GaloisField) -> Self {
        Self::from_poly(Poly::t(field))
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(field: &GaloisField, k: i64) -> Self {
        let m = Poly::monomial(field, field.one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RationalFunction {
                num: Poly::one(field),
                den: m,
            }
        }
    }

    pub fn field(&self) -> &GaloisField {
        self.num.field()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).expect("nonzero den");
        }
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero den")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero den")
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// `d/dt` by the quotient rule.
    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(n, self.den.mul(&self.den)).expect("nonzero den")
    }

    /// `self^p`.
    pub fn frobenius(&self) -> Self {
        RationalFunction {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    /// Largest degree of numerator and denominator.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// Parses `num/den` where both sides are polynomials in `t`, optionally
    /// parenthesised.
    pub fn parse(field: &GaloisField, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in compact.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(Error::Parse {
                            what: "rational function",
                            input: s.to_string(),
                        });
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        match split {
            None => Ok(Self::from_poly(Poly::parse(field, &compact)?)),
            Some(i) => Self::new(
                Poly::parse(field, &compact[..i])?,
                Poly::parse(field, &compact[i + 1..])?,
            ),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// If `f = h^p` in `K`, returns `h`.
pub fn rf_is_pth_power(f: &RationalFunction) -> Option<RationalFunction> {
    fn root(p: &Poly) -> Option<Poly> {
        let field = p.field();
        let q = field.characteristic() as usize;
        let mut out = Vec::new();
        for (k, &c) in p.coeffs().iter().enumerate() {
            if k % q == 0 {
                out.push(field.frobenius_inv(c));
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Poly::new(field, out))
    }
    Some(RationalFunction {
        num: root(&f.num)?,
        den: root(&f.den)?,
    })
}

/// A place of the rational function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// The prime generated by a monic irreducible polynomial.
    Finite(Poly),
    /// The degree valuation `[1/t]`.
    Infinity,
}

impl Place {
    pub fn finite(poly: Poly) -> Result<Self> {
        if !poly.is_monic() || !poly.is_irreducible() {
            return Err(Error::InvalidArgument(format!(
                "place polynomial {poly} is not monic irreducible"
            )));
        }
        Ok(Place::Finite(poly))
    }

    /// `[t]`.
    pub fn t(field: &GaloisField) -> Self {
        Place::Finite(Poly::t(field))
    }

    /// Parses `t`, `t+1`, `t^2+1`, or `1/t`.
    pub fn parse(field: &GaloisField, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "1/t" || compact == "inf" {
            return Ok(Place::Infinity);
        }
        Place::finite(Poly::parse(field, &compact)?)
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("nonzero"),
            Place::Infinity => 1,
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, Place::Finite(p) if p.degree() == Some(1) && p.coeff(0).is_zero())
    }

    /// All finite places of degree at most `d` followed by `[1/t]`, in the
    /// canonical order.
    pub fn all_up_to_degree(field: &GaloisField, d: usize) -> Vec<Place> {
        let mut out: Vec<Place> = (1..=d)
            .flat_map(|k| Poly::monic_irreducibles(field, k))
            .map(Place::Finite)
            .collect();
        out.push(Place::Infinity);
        out
    }

    /// Canonical order: finite places by degree then coefficients from the
    /// top down, then `[1/t]`.
    pub fn canonical_cmp(&self, other: &Place) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("1/t"),
        }
    }
}

/// The completion at a place, presented by the expansion of `t` in the
/// uniformizer `u` (`u = π(t)` at a finite place, `u = 1/t` at infinity).
#[derive(Clone, Debug)]
pub struct LocalEmbedding {
    pub place: Place,
    /// The coefficient field of the global field.
    pub base: GaloisField,
    pub residue: GaloisField,
    pub t_image: LaurentSeries,
    pub dtdu: LaurentSeries,
}

/// Embeds `t` into the completion at `place`, with the Hensel lift computed
/// to precision `m` (degree-one places and infinity are exact).
pub fn embed_t(base: &GaloisField, place: &Place, m: i64) -> Result<LocalEmbedding> {
    match place {
        Place::Infinity => {
            let residue = base.clone();
            let t_image = LaurentSeries::monomial(&residue, residue.one(), -1);
            let dtdu = LaurentSeries::monomial(&residue, residue.neg(residue.one()), -2);
            Ok(LocalEmbedding {
                place: place.clone(),
                base: base.clone(),
                residue,
                t_image,
                dtdu,
            })
        }
        Place::Finite(pi) => {
            if pi.field() != base {
                return Err(Error::FieldMismatch);
            }
            let d = pi.degree().expect("nonzero");
            if d == 1 {
                let residue = base.clone();
                let theta = residue.neg(pi.coeff(0));
                let t_image = LaurentSeries::exact(&residue, 0, vec![theta, residue.one()]);
                let dtdu = LaurentSeries::one(&residue);
                return Ok(LocalEmbedding {
                    place: place.clone(),
                    base: base.clone(),
                    residue,
                    t_image,
                    dtdu,
                });
            }
            if !base.is_prime_field() {
                return Err(Error::Unsupported(
                    "places of degree > 1 over a non-prime coefficient field".into(),
                ));
            }
            let modulus: Vec<u32> = pi.coeffs().iter().map(|c| c.index()).collect();
            let residue = GaloisField::with_modulus(base.characteristic() as u64, &modulus)?;
            let theta = residue.generator();
            let lifted = pi.lift_to(&residue)?;
            // π is separable over a perfect field
            assert!(
                !lifted.derivative().eval(theta).is_zero(),
                "π'(θ) vanishes for irreducible {pi}"
            );
            // F(X) = π(X) - u
            let mut coeffs: Vec<LaurentSeries> = lifted
                .coeffs()
                .iter()
                .map(|&c| LaurentSeries::constant(&residue, c))
                .collect();
            coeffs[0] = coeffs[0].sub(&LaurentSeries::uniformizer(&residue));
            let poly = SeriesPoly::new(coeffs);
            let t_image =
                hensel_simple_root(&poly, &LaurentSeries::constant(&residue, theta), m.max(1))?;
            let dtdu = t_image.derivative();
            Ok(LocalEmbedding {
                place: place.clone(),
                base: base.clone(),
                residue,
                t_image,
                dtdu,
            })
        }
    }
}

impl LocalEmbedding {
    /// Precision of the `t` expansion (`None` when exact).
    pub fn precision(&self) -> Option<i64> {
        self.t_image.prec()
    }

    /// The same embedding with the Hensel lift recomputed to precision `m`.
    pub fn refine(&self, m: i64) -> Result<LocalEmbedding> {
        if self.t_image.is_exact() {
            return Ok(self.clone());
        }
        embed_t(&self.base, &self.place, m)
    }

    /// Reads a coefficient of the global field in the residue field.
    pub fn lift_scalar(&self, c: FieldElement) -> FieldElement {
        if self.base == self.residue {
            c
        } else {
            self.residue.from_int(c.index() as i64)
        }
    }

    fn eval_poly(&self, p: &Poly) -> LaurentSeries {
        let r = &self.residue;
        p.coeffs()
            .iter()
            .rev()
            .fold(LaurentSeries::zero(r), |acc, &c| {
                acc.mul(&self.t_image)
                    .add(&LaurentSeries::constant(r, self.lift_scalar(c)))
            })
    }

    /// One expansion attempt with the current lift.
    fn expand_once(&self, f: &RationalFunction, m: i64) -> Result<LaurentSeries> {
        let n = self.eval_poly(f.numerator());
        if n.is_exact_zero() {
            return Ok(n);
        }
        let d = self.eval_poly(f.denominator());
        let d_inv = if d.is_exact() && d.stored().len() == 1 {
            d.inv()?
        } else {
            let v = d.valuation().ok_or(Error::PrecisionExhausted)?;
            let w = n.valuation_bound().expect("not exact zero");
            d.truncate(m - w + 2 * v).inv()?
        };
        Ok(n.mul(&d_inv))
    }

    /// The `u`-adic expansion of `f`, known at least to precision `m`
    /// (exact when the computation is exact).
    pub fn expand(&self, f: &RationalFunction, m: i64) -> Result<LaurentSeries> {
        if f.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        let mut emb = self.clone();
        let mut work = self.precision().map(|w| w.max(m + 2));
        loop {
            if let Some(w) = work {
                if emb.precision().is_some_and(|have| have < w) {
                    emb = emb.refine(w)?;
                }
            }
            match emb.expand_once(f, m) {
                Ok(s) if s.prec().is_none_or(|p| p >= m) => {
                    return Ok(match s.prec() {
                        None => s,
                        Some(_) => s.truncate(m),
                    })
                }
                Ok(_) | Err(Error::PrecisionExhausted) => {}
                Err(e) => return Err(e),
            }
            match work {
                Some(w) => work = Some(2 * w.max(4)),
                None => return Err(Error::PrecisionExhausted),
            }
        }
    }
}

/// The expansion of `f` at `e`'s place to precision `m`.
pub fn rf_expand_at(f: &RationalFunction, e: &LocalEmbedding, m: i64) -> Result<LaurentSeries> {
    e.expand(f, m)
}

/// Least `(L, P)` (by `L`, then `P`) with `L <= lmax`, `P <= pmax` such that
/// the prefix satisfies `a_i = a_{i+P}` for all `i >= L` inside it.
pub fn detect_eventual_period<T: PartialEq>(
    coeffs: &[T],
    pmax: usize,
    lmax: usize,
) -> Result<Option<(usize, usize)>> {
    let needed = lmax + 2 * pmax;
    if coeffs.len() < needed {
        return Err(Error::PrefixTooShort {
            len: coeffs.len(),
            needed,
        });
    }
    for l in 0..=lmax {
        for p in 1..=pmax {
            if is_consistent(coeffs, l, p) {
                return Ok(Some((l, p)));
            }
        }
    }
    Ok(None)
}

fn is_consistent<T: PartialEq>(coeffs: &[T], l: usize, p: usize) -> bool {
    coeffs.len() >= l + 2 * p && (l..coeffs.len() - p).all(|i| coeffs[i] == coeffs[i + p])
}

/// The rational function whose expansion at `[t]` has the eventually
/// periodic coefficients given by the prefix: `head + t^L R / (1 - t^P)`.
pub fn rational_from_periodic(
    prefix: &[FieldElement],
    l: usize,
    p: usize,
    e: &LocalEmbedding,
) -> Result<RationalFunction> {
    if !e.place.is_t() {
        return Err(Error::InvalidArgument("expected the place [t]".into()));
    }
    if p == 0 || !is_consistent(prefix, l, p) {
        return Err(Error::InconsistentPeriod);
    }
    let f = &e.base;
    let head = Poly::new(f, prefix[..l].to_vec());
    let repeat = Poly::new(f, prefix[l..l + p].to_vec());
    let tail_num = repeat.mul(&Poly::monomial(f, f.one(), l));
    let tail_den = Poly::one(f).sub(&Poly::monomial(f, f.one(), p));
    Ok(RationalFunction::from_poly(head).add(&RationalFunction::new(tail_num, tail_den)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> GaloisField {
        GaloisField::prime(3).unwrap()
    }

    fn rf(f: &GaloisField, s: &str) -> RationalFunction {
        RationalFunction::parse(f, s).unwrap()
    }

    #[test]
    fn reduction_and_display() {
        let f = f3();
        let r = rf(&f, "(t^2+2)/(2*t+2)"); // (t-1)(t+1) / 2(t+1)
        assert_eq!(r.to_string(), "2*t+1");
        assert_eq!(rf(&f, "1/(1-t)").to_string(), "2/(t+2)");
        assert_eq!(rf(&f, "0/(t+1)"), RationalFunction::zero(&f));
        assert!(RationalFunction::parse(&f, "1/0").is_err());
    }

    #[test]
    fn expand_examples() {
        let f = f3();
        let at_t = embed_t(&f, &Place::t(&f), 5).unwrap();
        let s = rf_expand_at(&rf(&f, "1/(1-t)"), &at_t, 5).unwrap();
        assert_eq!(
            s,
            LaurentSeries::from_terms(&f, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)], Some(5))
        );
        let at_t1 = embed_t(&f, &Place::parse(&f, "t-1").unwrap(), 5).unwrap();
        let s = rf_expand_at(&rf(&f, "t"), &at_t1, 5).unwrap();
        assert_eq!(s, LaurentSeries::from_terms(&f, &[(0, 1), (1, 1)], None));
        let inf = embed_t(&f, &Place::Infinity, 5).unwrap();
        let s = rf_expand_at(&rf(&f, "1/t"), &inf, 5).unwrap();
        assert_eq!(s, LaurentSeries::uniformizer(&f));
    }

    #[test]
    fn embedding_at_degree_two_place() {
        let f = f3();
        let place = Place::parse(&f, "t^2+1").unwrap();
        let e = embed_t(&f, &place, 12).unwrap();
        assert_eq!(e.residue.order(), 9);
        assert_eq!(e.t_image.coeff(0), e.residue.generator());
        let r = &e.residue;
        let val = e.t_image.mul(&e.t_image).add(&LaurentSeries::one(r));
        assert!(val.agrees_to(&LaurentSeries::uniformizer(r), 12));
    }

    #[test]
    fn pth_power_examples() {
        let f = f3();
        assert_eq!(rf_is_pth_power(&rf(&f, "t^3")), Some(rf(&f, "t")));
        assert_eq!(rf_is_pth_power(&rf(&f, "t")), None);
        let x = rf(&f, "(t+1)/t").pow(3).unwrap();
        assert_eq!(rf_is_pth_power(&x), Some(rf(&f, "(t+1)/t")));
    }

    #[test]
    fn periodicity_examples() {
        let f = f3();
        let at_t = embed_t(&f, &Place::t(&f), 40).unwrap();
        let seq = |s: &str| {
            let x = rf_expand_at(&rf(&f, s), &at_t, 40).unwrap();
            (0..40).map(|k| x.coeff(k)).collect::<Vec<_>>()
        };
        assert_eq!(detect_eventual_period(&seq("1/(1-t)"), 10, 10).unwrap(), Some((0, 1)));
        assert_eq!(detect_eventual_period(&seq("1/(1-t^2)"), 10, 10).unwrap(), Some((0, 2)));
        assert!(detect_eventual_period(&seq("1/(1-t)"), 20, 10).is_err());

        let ones = seq("1/(1-t)");
        assert_eq!(rational_from_periodic(&ones, 0, 1, &at_t).unwrap(), rf(&f, "1/(1-t)"));
        let alt = seq("1/(1-t^2)");
        assert_eq!(rational_from_periodic(&alt, 0, 2, &at_t).unwrap(), rf(&f, "1/(1-t^2)"));
        let mut head: Vec<_> = vec![f.from_int(2)];
        head.extend(std::iter::repeat_n(f.one(), 30));
        let r = rational_from_periodic(&head, 1, 1, &at_t).unwrap();
        assert_eq!(r, rf(&f, "2").add(&rf(&f, "t/(1-t)")));
        assert_eq!(detect_eventual_period(&head, 10, 5).unwrap(), Some((1, 1)));
        assert_eq!(
            rational_from_periodic(&head, 0, 1, &at_t).unwrap_err(),
            Error::InconsistentPeriod
        );
    }

    #[test]
    fn place_parsing() {
        let f = f3();
        assert_eq!(Place::parse(&f, "1/t").unwrap(), Place::Infinity);
        assert!(Place::parse(&f, "t^2+2").is_err());
        assert!(Place::parse(&f, "t").unwrap().is_t());
        let all = Place::all_up_to_degree(&f, 2);
        let names: Vec<String> = all.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["t", "t+1", "t+2", "t^2+1", "t^2+t+2", "t^2+2*t+2", "1/t"]);
    }
}
