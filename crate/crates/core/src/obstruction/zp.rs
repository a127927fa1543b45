use std::collections::BTreeMap;

use crate::cartier::{cartier_c, localize, Differential};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, GaloisField};
use crate::poly::Poly;
use crate::ratfield::{embed_t, Place, RationalFunction};
use crate::series::LaurentSeries;

use super::{fmt_elements, FreeParams, SolveOutcome, Status, Witness};

/// `q(a) = a dt - C(a dt)`.
pub fn q_zp(a: &RationalFunction) -> Differential {
    let w = Differential::Global(a.clone());
    w.sub(&cartier_c(&w)).expect("same kind")
}

/// `q_v(a) = a du - C(a du)`, returned as the coefficient of `du`.
pub fn q_zp_local(a: &LaurentSeries) -> LaurentSeries {
    let w = Differential::Local(a.clone());
    let c = cartier_c(&w);
    a.sub(c.local_coeff().expect("local"))
}

/// `x_N = t^{e-1} dt / (1 - t^e)` with `e = (p-1)^N`.
pub fn x_family_zp(field: &GaloisField, n: u32) -> Differential {
    let p = field.characteristic() as i64;
    let e = (p - 1).pow(n);
    let num = RationalFunction::t_pow(field, e - 1);
    let den = RationalFunction::one(field).sub(&RationalFunction::t_pow(field, e));
    Differential::Global(num.div(&den).expect("1 - t^e is nonzero"))
}

/// The class of `b du` in `coker(q_v)`, identified with `F_p` via the trace
/// of `b_{-1}`.
pub fn coker_class_zp(b: &Differential) -> Result<u32> {
    let f = b.local_coeff()?;
    let r = f.try_coeff(-1).ok_or(Error::InsufficientPrecision {
        needed: 0,
        available: f.prec(),
    })?;
    Ok(f.field().trace_to_prime(r))
}

/// Solves `a du - C(a du) = b du` to precision `m`, with every free
/// coefficient set to 0 and the least Artin-Schreier root at `u^{-1}`.
pub fn solve_qv_zp(b: &Differential, m: i64) -> Result<SolveOutcome> {
    solve_qv_zp_with(b, m, &BTreeMap::new(), 0)
}

/// As [`solve_qv_zp`], with chosen values for free coefficients `a_k`
/// (`k ≥ 0`, `p ∤ k+1`) and a chosen index into the fiber at `u^{-1}`.
pub fn solve_qv_zp_with(
    b: &Differential,
    m: i64,
    free: &BTreeMap<i64, FieldElement>,
    fiber_choice: usize,
) -> Result<SolveOutcome> {
    let bs = b.local_coeff()?;
    if m < 0 {
        return Err(Error::InvalidArgument(format!("precision {m} must be nonnegative")));
    }
    if bs.prec().is_some_and(|have| have < m) {
        return Err(Error::InsufficientPrecision {
            needed: m,
            available: bs.prec(),
        });
    }
    let field = bs.field();
    let p = field.characteristic() as i64;
    for &k in free.keys() {
        if k < 0 || (k + 1) % p == 0 {
            return Err(Error::InvalidArgument(format!("a_{k} is not a free coefficient")));
        }
    }
    let lo = bs.valuation().unwrap_or(-1).min(-1);
    let hi = p * m;
    let mut a = vec![field.zero(); (hi - lo).max(0) as usize];
    let at = |a: &Vec<FieldElement>, k: i64| -> FieldElement {
        if k < lo {
            field.zero()
        } else {
            a[(k - lo) as usize]
        }
    };

    // Poles: a_i = b_i + a_{p(i+1)-1}^{1/p}, where p(i+1)-1 < i.
    for i in lo..-1 {
        let prev = at(&a, p * (i + 1) - 1);
        a[(i - lo) as usize] = field.add(bs.coeff(i), field.frobenius_inv(prev));
    }

    let residue = bs.coeff(-1);
    let fiber = field.artin_schreier_solve(residue);
    if fiber.is_empty() {
        return Ok(SolveOutcome {
            status: Status::NoSolution,
            solution: None,
            free_params: None,
            witness: Some(Witness::Trace {
                residue: field.format(residue),
                trace: field.trace_to_prime(residue),
            }),
            precision: m,
        });
    }
    let choice = *fiber.get(fiber_choice).ok_or_else(|| {
        Error::InvalidArgument(format!("fiber index {fiber_choice} out of range"))
    })?;
    if hi > -1 {
        a[(-1 - lo) as usize] = choice;
    }

    // a_{p(i+1)-1} = (a_i - b_i)^p; the remaining a_k are free.
    for k in 0..hi {
        a[(k - lo) as usize] = if (k + 1) % p == 0 {
            let i = (k + 1) / p - 1;
            field.frobenius(field.sub(at(&a, i), bs.coeff(i)))
        } else {
            free.get(&k).copied().unwrap_or(field.zero())
        };
    }

    let solution = LaurentSeries::new(field, lo, a, Some(hi));
    let outcome = SolveOutcome {
        status: Status::Solved,
        solution: Some(solution),
        free_params: Some(FreeParams {
            indices: format!("a_k for k >= 0 with k+1 not divisible by {p}"),
            fiber: fmt_elements(field, &fiber),
        }),
        witness: None,
        precision: m,
    };
    if !verify_zp(b, &outcome)? {
        return Err(Error::Verification("q_v(a) does not reproduce b".into()));
    }
    Ok(outcome)
}

/// Re-checks an outcome of [`solve_qv_zp`] against `b` without using the
/// solver: a solution must satisfy `q_v(a) = b` to the reported precision,
/// and a trace witness must name `b_{-1}` with no Artin-Schreier root.
pub fn verify_zp(b: &Differential, outcome: &SolveOutcome) -> Result<bool> {
    let bs = b.local_coeff()?;
    let field = bs.field();
    match outcome.status {
        Status::Solved => {
            let Some(a) = &outcome.solution else {
                return Ok(false);
            };
            Ok(q_zp_local(a).agrees_to(bs, outcome.precision))
        }
        Status::NoSolution => match &outcome.witness {
            Some(Witness::Trace { residue, .. }) => {
                let r = field.parse(residue)?;
                let no_root = field
                    .elements()
                    .all(|x| field.sub(x, field.frobenius_inv(x)) != r);
                Ok(bs.try_coeff(-1) == Some(r) && no_root)
            }
            _ => Ok(false),
        },
    }
}

/// One row of the per-place table for `x_N`.
#[derive(Clone, Debug)]
pub struct LocalClassRow {
    pub place: Place,
    pub integral: bool,
    /// `b_{-1}` in the residue field, formatted.
    pub residue: String,
    pub class: u32,
    /// The canonical local preimage when the class is 0.
    pub outcome: Option<SolveOutcome>,
}

/// For each place: whether `x_N` is integral there, its residue and
/// cokernel class, and a verified canonical preimage when the class is 0.
/// Errors if `x_N` is integral at a place with nonzero class.
pub fn local_class_table_zp(
    field: &GaloisField,
    n: u32,
    places: &[Place],
    m: i64,
) -> Result<Vec<LocalClassRow>> {
    let x = x_family_zp(field, n);
    places
        .iter()
        .map(|place| {
            let emb = embed_t(field, place, m + 4)?;
            let b = localize(&x, &emb, m)?;
            let bs = b.local_coeff()?;
            let integral = bs.valuation_bound().is_none_or(|v| v >= 0);
            let class = coker_class_zp(&b)?;
            if integral && class != 0 {
                return Err(Error::Verification(format!(
                    "x_{n} is integral at {place} but has class {class}"
                )));
            }
            let outcome = if class == 0 {
                Some(solve_qv_zp(&b, m)?)
            } else {
                None
            };
            Ok(LocalClassRow {
                place: place.clone(),
                integral,
                residue: emb.residue.format(bs.coeff(-1)),
                class,
                outcome,
            })
        })
        .collect()
}

/// The coefficient `h_{p-1}` of `C(P/Q dt) = h_{p-1}/Q dt`.
fn cartier_numerator(num: &Poly, den: &Poly) -> Poly {
    let field = num.field();
    let p = field.characteristic() as usize;
    let h = num.mul(&den.pow(p as u64 - 1));
    let coeffs = h
        .coeffs()
        .iter()
        .skip(p - 1)
        .step_by(p)
        .map(|&c| field.frobenius_inv(c))
        .collect();
    Poly::new(field, coeffs)
}

/// Searches `a = P/Q` with `Q` monic, `deg P, deg Q ≤ d`, `gcd(P, Q) = 1`
/// for `q(a) = ω`. Denominators are scanned by degree then packed index,
/// numerators by packed index; the first hit is returned.
pub fn global_preimage_search_zp(omega: &Differential, d: usize) -> Result<Option<RationalFunction>> {
    let h = omega.global_coeff()?;
    let field = h.field();
    for qd in 0..=d {
        for den in Poly::monic_of_degree(field, qd) {
            for num in Poly::all_up_to_degree(field, d) {
                if !num.gcd(&den).is_one() {
                    continue;
                }
                let lhs = num.sub(&cartier_numerator(&num, &den)).mul(h.denominator());
                if lhs == h.numerator().mul(&den) {
                    return Ok(Some(RationalFunction::new(num, den)?));
                }
            }
        }
    }
    Ok(None)
}
