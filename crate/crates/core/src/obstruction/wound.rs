use crate::cartier::{cartier_c, localize, Differential, DifferentialPair};
use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::poly::Poly;
use crate::ratfield::{embed_t, rf_is_pth_power, LocalEmbedding, Place, RationalFunction};
use crate::series::{hensel_artin_schreier, LaurentSeries};

use super::{FreeParams, SolveOutcome, Status, Witness};

/// `q(η) = (C(tη), η - C(η))`.
pub fn q_wound(eta: &Differential) -> Result<DifferentialPair> {
    let f = eta.global_coeff()?;
    let t_eta = eta.mul_global(&RationalFunction::t(f.field()))?;
    DifferentialPair::new(cartier_c(&t_eta), eta.sub(&cartier_c(eta))?)
}

/// `q_v(a du) = (C(T a du), a du - C(a du))` with `T` the image of `t`.
pub fn q_wound_local(a: &LaurentSeries, emb: &LocalEmbedding) -> Result<DifferentialPair> {
    let eta = Differential::Local(a.clone());
    let t_eta = eta.mul_local(&emb.t_image)?;
    DifferentialPair::new(cartier_c(&t_eta), eta.sub(&cartier_c(&eta))?)
}

/// `x_N = (t^{-N} dt, 0)` for `N > 0`.
pub fn x_family_wound(field: &GaloisField, n: i64) -> Result<DifferentialPair> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("the wound family needs N > 0, got {n}")));
    }
    DifferentialPair::new(
        Differential::Global(RationalFunction::t_pow(field, -n)),
        Differential::Global(RationalFunction::zero(field)),
    )
}

fn localized_pair(target: &DifferentialPair, emb: &LocalEmbedding, m: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let first = localize(&target.first, emb, m)?;
    let second = localize(&target.second, emb, m)?;
    Ok((first.local_coeff()?.clone(), second.local_coeff()?.clone()))
}

/// Solves `q_v(a du) = target` at `place` to precision `m`.
///
/// Supported shapes, all with zero second component: a first component
/// with a pole at `[t]` (no solution), any first component of valuation
/// at least `-1` at `[1/t]`, and an integral first component at a finite
/// place.
pub fn solve_qv_wound(target: &DifferentialPair, place: &Place, m: i64) -> Result<SolveOutcome> {
    let base = target.first.global_coeff()?.field().clone();
    if !target.second.is_zero() {
        return Err(Error::Unsupported("targets with nonzero second component".into()));
    }
    if m < 0 {
        return Err(Error::InvalidArgument(format!("precision {m} must be nonnegative")));
    }
    let p = base.characteristic() as i64;

    if place.is_t() {
        let emb = embed_t(&base, place, m)?;
        let (first, _) = localized_pair(target, &emb, m.max(1))?;
        let pole = first.terms().find(|&(k, _)| k < 0);
        if let Some((exponent, c)) = pole {
            return Ok(SolveOutcome {
                status: Status::NoSolution,
                solution: None,
                free_params: None,
                witness: Some(Witness::NegativeCoefficient {
                    exponent,
                    coefficient: base.format(c),
                }),
                precision: m,
            });
        }
    }

    let mut work = p * (m + 2) + 2;
    for _ in 0..4 {
        let emb = embed_t(&base, place, work + p)?;
        let a = match place {
            Place::Infinity => solve_at_infinity(target, &emb, work)?,
            Place::Finite(_) => solve_finite(target, &emb, work)?,
        };
        // p-basis components of a that the ansatz sets to 0
        let (lo, hi) = match place {
            Place::Infinity => (1, p - 2),
            Place::Finite(_) => (0, p - 3),
        };
        let indices = match hi - lo {
            d if d < 0 => "none".to_string(),
            0 => format!("p-basis component a_{lo} of a, set to 0"),
            _ => format!("p-basis components a_{lo}..a_{hi} of a, set to 0"),
        };
        let free_params = Some(FreeParams { indices, fiber: Vec::new() });
        let outcome = SolveOutcome {
            status: Status::Solved,
            solution: Some(a),
            free_params,
            witness: None,
            precision: m,
        };
        if verify_wound(target, place, &outcome)? {
            return Ok(outcome);
        }
        work *= 2;
    }
    Err(Error::Verification(format!("q_v(a) does not reproduce the target at {place}")))
}

/// At `[1/t]`: `a = a_0^p + a^p u^{p-1}` with `a_0 = u F`, so `X = a u`
/// solves `X^p - X = -a_0^p u`.
fn solve_at_infinity(target: &DifferentialPair, emb: &LocalEmbedding, work: i64) -> Result<LaurentSeries> {
    let (first, _) = localized_pair(target, emb, work)?;
    if first.valuation_bound().is_some_and(|v| v < -1) {
        return Err(Error::Unsupported(format!(
            "first component of valuation {} at 1/t",
            first.valuation_bound().unwrap()
        )));
    }
    let a0 = first.shift(1);
    let c = a0.frobenius().shift(1).neg();
    let x = hensel_artin_schreier(&c, work)?;
    Ok(x.shift(-1))
}

/// `f(α) = Σ_s α^{p^{s+1}} u^{(p-1)p^s - 1}`, truncated at `work`.
fn f_series(alpha: &LaurentSeries, p: i64, work: i64) -> LaurentSeries {
    let field = alpha.field();
    let mut acc = LaurentSeries::zero(field);
    let mut power = alpha.frobenius();
    let mut ps = 1i64;
    while (p - 1) * ps - 1 < work {
        acc = acc.add(&power.shift((p - 1) * ps - 1));
        power = power.frobenius().truncate(work);
        ps *= p;
    }
    acc.truncate(work)
}

/// At a finite place with `T = Σ t_j^p u^j`: take `a_{p-2} = α`,
/// `a_{p-1} = f(α)`, other components 0, and solve
/// `α t_1 + f(α) t_0 = y` by the iteration `α ← (y - f(α) t_0) / t_1`.
fn solve_finite(target: &DifferentialPair, emb: &LocalEmbedding, work: i64) -> Result<LaurentSeries> {
    let field = &emb.residue;
    let p = field.characteristic() as i64;
    let parts = emb.t_image.pbasis_decompose();
    let (t0, t1) = (&parts[0], &parts[1]);
    if t1.valuation() != Some(0) {
        return Err(Error::UnitConditionFailed(format!(
            "t_1 = {t1} is not a unit at {}",
            emb.place
        )));
    }
    let (y, _) = localized_pair(target, emb, work)?;
    if y.valuation_bound().is_some_and(|v| v < 0) {
        return Err(Error::Unsupported(format!("first component has a pole at {}", emb.place)));
    }
    let t1_inv = t1.inv()?;
    let mut alpha = y.try_mul(&t1_inv)?.truncate(work);
    for _ in 0..(4 * work.max(8)) {
        let next = y
            .sub(&f_series(&alpha, p, work).mul(t0))
            .try_mul(&t1_inv)?
            .truncate(work);
        if next == alpha {
            return Ok(f_series(&alpha, p, work));
        }
        alpha = next;
    }
    Err(Error::Hensel("fixed-point iteration did not stabilize"))
}

/// Re-checks a wound outcome: `q_v(a) = target` to the reported
/// precision, or the negative-coefficient witness against the localized
/// target at `[t]`.
pub fn verify_wound(target: &DifferentialPair, place: &Place, outcome: &SolveOutcome) -> Result<bool> {
    let base = target.first.global_coeff()?.field().clone();
    let m = outcome.precision;
    match outcome.status {
        Status::Solved => {
            let Some(a) = &outcome.solution else {
                return Ok(false);
            };
            let work = a.prec().unwrap_or(m) + 2;
            let emb = embed_t(&base, place, work)?;
            let image = q_wound_local(a, &emb)?;
            let (first, second) = localized_pair(target, &emb, m)?;
            Ok(image.first.local_coeff()?.agrees_to(&first, m)
                && image.second.local_coeff()?.agrees_to(&second, m))
        }
        Status::NoSolution => match &outcome.witness {
            Some(Witness::NegativeCoefficient { exponent, coefficient }) => {
                if !place.is_t() || !target.second.is_zero() || *exponent >= 0 {
                    return Ok(false);
                }
                let c = base.parse(coefficient)?;
                let emb = embed_t(&base, place, 1)?;
                let (first, _) = localized_pair(target, &emb, 0)?;
                Ok(!c.is_zero() && first.try_coeff(*exponent) == Some(c))
            }
            _ => Ok(false),
        },
    }
}

/// A local point `(x, y)` with `T x^p = y^p - y` to precision `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WoundPoint {
    pub place: Place,
    pub x: LaurentSeries,
    pub y: LaurentSeries,
    pub precision: i64,
}

impl WoundPoint {
    pub fn verify(&self, base: &GaloisField) -> Result<bool> {
        let emb = embed_t(base, &self.place, self.precision + 2)?;
        let lhs = emb.t_image.try_mul(&self.x.frobenius())?;
        let rhs = self.y.frobenius().sub(&self.y);
        Ok(lhs.sub(&rhs).agrees_to(&LaurentSeries::zero(lhs.field()), self.precision))
    }
}

/// The `y ≡ 0 mod u` with `y^p - y = T x^p`, which exists when
/// `v(T x^p) > 0`.
pub fn wound_local_point(base: &GaloisField, xv: &LaurentSeries, place: &Place, m: i64) -> Result<WoundPoint> {
    let emb = embed_t(base, place, m + 2)?;
    let c = emb.t_image.try_mul(&xv.frobenius())?;
    if c.valuation_bound().is_some_and(|v| v <= 0) {
        return Err(Error::NonPositiveValuation {
            what: "t x^p",
            valuation: c.valuation(),
        });
    }
    if c.prec().is_some_and(|have| have < m) {
        return Err(Error::InsufficientPrecision {
            needed: m,
            available: c.prec(),
        });
    }
    let y = hensel_artin_schreier(&c, m)?;
    let point = WoundPoint {
        place: place.clone(),
        x: xv.clone(),
        y,
        precision: m,
    };
    if !point.verify(base)? {
        return Err(Error::Verification("t x^p != y^p - y".into()));
    }
    Ok(point)
}

/// [`wound_local_point`] for a global `x`, expanded at `place`.
pub fn wound_local_point_rational(x: &RationalFunction, place: &Place, m: i64) -> Result<WoundPoint> {
    let base = x.field().clone();
    let emb = embed_t(&base, place, m + 2)?;
    let xv = emb.expand(x, m)?;
    wound_local_point(&base, &xv, place, m)
}

/// All `(x, y) ∈ F_p(t)^2` with `t x^p = y^p - y` and both of height at
/// most `d`, in enumeration order of `y`.
pub fn wound_global_search(field: &GaloisField, d: usize) -> Result<Vec<(RationalFunction, RationalFunction)>> {
    let p = field.characteristic() as i64;
    let t = RationalFunction::t(field);
    let mut out = Vec::new();
    for qd in 0..=d {
        for den in Poly::monic_of_degree(field, qd) {
            for num in Poly::all_up_to_degree(field, d) {
                if !num.gcd(&den).is_one() {
                    continue;
                }
                let y = RationalFunction::new(num, den.clone())?;
                let rhs = y.pow(p)?.sub(&y).div(&t)?;
                if let Some(x) = rf_is_pth_power(&rhs) {
                    if x.height() <= d {
                        out.push((x, y));
                    }
                }
            }
        }
    }
    Ok(out)
}
