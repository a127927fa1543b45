use std::collections::BTreeMap;

use cartier_core::cartier::{
    antiderivative_global, antiderivative_local, cartier_c, cartier_inv, d_global, d_local,
    pairing, residue,
};
use cartier_core::obstruction::{
    coker_class_zp, q_zp, q_zp_local, solve_qv_zp, solve_qv_zp_with, verify_zp,
};
use cartier_core::ratfield::rf_is_pth_power;
use cartier_core::{Differential, FieldElement, GaloisField, LaurentSeries, Poly, RationalFunction};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 5] = [(3, 1), (3, 2), (5, 1), (7, 1), (3, 3)];

fn field_strategy() -> impl Strategy<Value = GaloisField> {
    (0..FIELDS.len()).prop_map(|i| GaloisField::new(FIELDS[i].0, FIELDS[i].1).unwrap())
}

fn elems(f: &GaloisField, idx: &[u32]) -> Vec<FieldElement> {
    idx.iter().map(|&i| f.element(i % f.order())).collect()
}

/// A series with a nonzero leading coefficient.
fn series(f: &GaloisField, low: i64, idx: &[u32], prec: i64) -> LaurentSeries {
    let mut c = elems(f, idx);
    if c[0].is_zero() {
        c[0] = f.one();
    }
    LaurentSeries::new(f, low, c, Some(prec))
}

fn rational(f: &GaloisField, num: &[u32], den: &[u32]) -> RationalFunction {
    let mut d = Poly::new(f, elems(f, den));
    if d.is_zero() {
        d = Poly::one(f);
    }
    RationalFunction::new(Poly::new(f, elems(f, num)), d).unwrap()
}

/// `C` computed coefficientwise: `(C f)_i = f_{pi+p-1}^{1/p}`.
fn cartier_oracle(s: &LaurentSeries) -> Vec<(i64, FieldElement)> {
    let f = s.field();
    let p = f.characteristic() as i64;
    s.terms()
        .filter(|(k, _)| (k + 1).rem_euclid(p) == 0)
        .map(|(k, c)| ((k + 1).div_euclid(p) - 1, f.frobenius_inv(c)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_cartier_matches_coefficient_oracle(
        f in field_strategy(), low in -12i64..6, idx in prop::collection::vec(0u32..1000, 1..40)
    ) {
        let s = LaurentSeries::new(&f, low, elems(&f, &idx), None);
        let c = cartier_c(&Differential::Local(s.clone()));
        let got: Vec<(i64, FieldElement)> = c.local_coeff().unwrap().terms().collect();
        prop_assert_eq!(got, cartier_oracle(&s));
    }

    #[test]
    fn cartier_of_differential_is_zero(
        f in field_strategy(),
        num in prop::collection::vec(0u32..1000, 1..8),
        den in prop::collection::vec(0u32..1000, 1..6),
        low in -6i64..4,
        idx in prop::collection::vec(0u32..1000, 1..30),
    ) {
        let g = rational(&f, &num, &den);
        prop_assert!(cartier_c(&d_global(&g)).is_zero());
        let s = series(&f, low, &idx, low + idx.len() as i64);
        prop_assert!(cartier_c(&d_local(&s)).is_zero());
    }

    #[test]
    fn cartier_inverse_is_section(
        f in field_strategy(),
        num in prop::collection::vec(0u32..1000, 1..6),
        den in prop::collection::vec(0u32..1000, 1..5),
    ) {
        let w = Differential::Global(rational(&f, &num, &den));
        prop_assert_eq!(cartier_c(&cartier_inv(&w)), w);
    }

    #[test]
    fn cartier_is_inverse_semilinear(
        f in field_strategy(),
        c in 1u32..1000,
        num in prop::collection::vec(0u32..1000, 1..6),
        den in prop::collection::vec(0u32..1000, 1..5),
    ) {
        // C(λ^p ω) = λ C(ω)
        let lambda = f.element(c % f.order());
        let w = Differential::Global(rational(&f, &num, &den));
        let scaled = w.mul_global(&RationalFunction::constant(&f, f.frobenius(lambda))).unwrap();
        let rhs = cartier_c(&w).mul_global(&RationalFunction::constant(&f, lambda)).unwrap();
        prop_assert_eq!(cartier_c(&scaled), rhs);
    }

    #[test]
    fn kernel_elements_antidifferentiate(
        f in field_strategy(),
        num in prop::collection::vec(0u32..1000, 1..7),
        den in prop::collection::vec(0u32..1000, 1..5),
        low in -8i64..3,
        idx in prop::collection::vec(0u32..1000, 1..30),
    ) {
        let w = Differential::Global(rational(&f, &num, &den));
        let k = w.sub(&cartier_inv(&cartier_c(&w))).unwrap();
        let h = antiderivative_global(&k).unwrap().unwrap();
        prop_assert_eq!(d_global(&h), k);

        let s = Differential::Local(LaurentSeries::new(&f, low, elems(&f, &idx), None));
        let k = s.sub(&cartier_inv(&cartier_c(&s))).unwrap();
        let h = antiderivative_local(&k).unwrap().unwrap();
        prop_assert_eq!(d_local(&h), k);
    }

    #[test]
    fn closed_iff_pth_power(
        num in prop::collection::vec(0u32..3, 1..11),
        den in prop::collection::vec(0u32..3, 1..11),
        raise in any::<bool>(),
    ) {
        let f = GaloisField::prime(3).unwrap();
        let mut g = rational(&f, &num, &den);
        if raise {
            g = g.frobenius();
        }
        // oracle: every exponent in the reduced numerator and denominator
        // is a multiple of p
        let pth = [g.numerator(), g.denominator()].iter().all(|q| {
            q.coeffs().iter().enumerate().all(|(k, c)| c.is_zero() || k % 3 == 0)
        });
        prop_assert_eq!(d_global(&g).is_zero(), pth);
        prop_assert_eq!(rf_is_pth_power(&g).is_some(), pth);
    }

    #[test]
    fn residue_survives_unit_substitution(
        f in field_strategy(),
        low in -6i64..0,
        idx in prop::collection::vec(0u32..1000, 8..12),
        gidx in prop::collection::vec(0u32..1000, 10..14),
    ) {
        let w = series(&f, low, &idx, 6);
        let g = series(&f, 1, &gidx, 1 + gidx.len() as i64);
        let pulled = w.compose(&g).unwrap().mul(&g.derivative());
        prop_assert_eq!(
            residue(&Differential::Local(w)).unwrap(),
            residue(&Differential::Local(pulled)).unwrap()
        );
    }

    #[test]
    fn pairing_kills_exact_forms_against_constants(
        f in field_strategy(), low in -6i64..4, idx in prop::collection::vec(0u32..1000, 1..20)
    ) {
        let h = LaurentSeries::new(&f, low, elems(&f, &idx), None);
        let v = pairing(&LaurentSeries::one(&f), &d_local(&h)).unwrap();
        prop_assert_eq!(v.numerator, 0);
    }

    #[test]
    fn zp_solver_roundtrip_and_class(
        f in field_strategy(), low in -10i64..2, idx in prop::collection::vec(0u32..1000, 1..20), m in 0i64..14
    ) {
        let b = Differential::Local(series(&f, low, &idx, m));
        let out = solve_qv_zp(&b, m).unwrap();
        prop_assert_eq!(out.is_solved(), coker_class_zp(&b).unwrap() == 0);
        prop_assert!(verify_zp(&b, &out).unwrap());
        if let Some(a) = &out.solution {
            prop_assert!(q_zp_local(a).agrees_to(b.local_coeff().unwrap(), m));
        }
    }

    #[test]
    fn zp_free_parameters(
        low in -8i64..0,
        idx in prop::collection::vec(0u32..9, 4..16),
        free in prop::collection::btree_map(0i64..30, 0u32..9, 0..5),
        choice in 0usize..3,
    ) {
        let f = GaloisField::new(3, 2).unwrap();
        let mut b = series(&f, low, &idx, 10);
        let r = b.coeff(-1);
        if f.trace_to_prime(r) != 0 {
            b = b.sub(&LaurentSeries::monomial(&f, r, -1));
        }
        let b = Differential::Local(b);
        let free: BTreeMap<i64, FieldElement> = free
            .into_iter()
            .filter(|(k, _)| (k + 1) % 3 != 0)
            .map(|(k, v)| (k, f.element(v)))
            .collect();
        let out = solve_qv_zp_with(&b, 10, &free, choice).unwrap();
        prop_assert!(verify_zp(&b, &out).unwrap());
        let a = out.solution.unwrap();
        for (k, v) in &free {
            prop_assert_eq!(a.coeff(*k), *v);
        }
    }

    #[test]
    fn global_q_matches_local_q(
        num in prop::collection::vec(0u32..3, 1..6),
        den in prop::collection::vec(0u32..3, 1..5),
    ) {
        // expanding q(a) at [1/t] equals q_v applied to the expansion of a,
        // after rewriting dt = -u^{-2} du
        use cartier_core::cartier::localize;
        use cartier_core::ratfield::{embed_t, Place};
        let f = GaloisField::prime(3).unwrap();
        let a = rational(&f, &num, &den);
        let emb = embed_t(&f, &Place::Infinity, 40).unwrap();
        let global = localize(&q_zp(&a), &emb, 10).unwrap();
        let local_a = localize(&Differential::Global(a), &emb, 40).unwrap();
        let local = q_zp_local(local_a.local_coeff().unwrap());
        prop_assert!(global.local_coeff().unwrap().agrees_to(&local, 10));
    }
}

#[test]
fn unraised_and_raised_forms_agree() {
    // a_{j-1}^p - a_{pj-1} = b_{j-1}^p and a_{j-1} - a_{pj-1}^{1/p} = b_{j-1}
    // define the same solutions since Frobenius is bijective
    let f = GaloisField::new(3, 2).unwrap();
    let b = LaurentSeries::from_terms(&f, &[(-4, 1), (0, 2), (3, 1)], Some(8));
    let out = solve_qv_zp(&Differential::Local(b.clone()), 8).unwrap();
    let a = out.solution.unwrap();
    for j in -3..=8 {
        let lhs = f.sub(f.frobenius(a.coeff(j - 1)), a.coeff(3 * j - 1));
        assert_eq!(lhs, f.frobenius(b.coeff(j - 1)), "j = {j}");
    }
}
