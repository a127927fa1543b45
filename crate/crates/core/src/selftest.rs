//! Seeded invariant checks across all modules, run by `cartier selftest`.
//! The seed changes the sampled cases; the verdicts should not depend on it.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::cartier::{
    antiderivative_global, cartier_c, cartier_inv, d_global, d_local, residue, Differential,
};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, GaloisField};
use crate::obstruction::{
    coker_class_zp, nonperiodicity_certificate, solve_qv_wound, solve_qv_zp, solve_qv_zp_with,
    verify_wound, verify_zp, x_family_wound,
};
use crate::poly::Poly;
use crate::ratfield::{
    detect_eventual_period, embed_t, rational_from_periodic, rf_is_pth_power, Place,
    RationalFunction,
};
use crate::report::Report;
use crate::series::{hensel_artin_schreier, LaurentSeries};

pub const MODULES: [&str; 6] = ["gf", "series", "ratfield", "cartier", "obstruction", "cli"];

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub module: &'static str,
    pub check: &'static str,
    pub cases: usize,
    pub passed: usize,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.cases == self.passed
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(usize, usize)>;

const CHECKS: &[(&str, &str, Check)] = &[
    ("gf", "inverse", gf_inverse),
    ("gf", "frobenius-bijective", gf_frobenius),
    ("gf", "artin-schreier-fiber", gf_artin_schreier),
    ("series", "inverse", series_inverse),
    ("series", "p-basis-roundtrip", series_pbasis),
    ("series", "hensel-artin-schreier", series_hensel),
    ("ratfield", "periodic-reconstruction", ratfield_periodic),
    ("ratfield", "pth-power", ratfield_pth_power),
    ("cartier", "C-kills-exact", cartier_kills_exact),
    ("cartier", "C-inverse", cartier_inverse),
    ("cartier", "kernel-antiderivative", cartier_antiderivative),
    ("cartier", "closed-iff-pth-power", cartier_closed),
    ("cartier", "residue-invariance", cartier_residue),
    ("obstruction", "zp-roundtrip", zp_roundtrip),
    ("obstruction", "zp-free-parameters", zp_free_params),
    ("obstruction", "zp-cokernel-order", zp_cokernel),
    ("obstruction", "wound-family", wound_family),
    ("obstruction", "certificate", certificate_small),
    ("cli", "config-validation", cli_validation),
];

/// Runs every check (or those of one module) with the given seed.
pub fn run(seed: u64, only: Option<&str>) -> Result<Vec<CheckResult>> {
    if let Some(m) = only {
        if !MODULES.contains(&m) {
            return Err(Error::InvalidArgument(format!(
                "unknown module {m}; expected one of {}",
                MODULES.join(", ")
            )));
        }
    }
    let mut out = Vec::new();
    for (i, &(module, check, f)) in CHECKS.iter().enumerate() {
        if only.is_some_and(|m| m != module) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1000).wrapping_add(i as u64));
        let (cases, passed) = f(&mut rng)?;
        out.push(CheckResult { module, check, cases, passed });
    }
    Ok(out)
}

pub fn cmd_selftest(seed: u64, only: Option<&str>) -> Result<Report> {
    let results = run(seed, only)?;
    let verified = results.iter().all(CheckResult::ok);
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.module.to_string(),
                r.check.to_string(),
                r.cases.to_string(),
                r.passed.to_string(),
                if r.ok() { "pass" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    Ok(Report {
        command: "selftest",
        config: json!({ "seed": seed, "only": only }),
        results: json!({ "matrix": results }),
        columns: vec!["module", "check", "cases", "passed", "verdict"],
        rows,
        verified,
    })
}

fn fields() -> Vec<GaloisField> {
    [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)]
        .iter()
        .map(|&(p, m)| GaloisField::new(p, m).expect("valid field"))
        .collect()
}

fn rand_elem(rng: &mut ChaCha8Rng, f: &GaloisField) -> FieldElement {
    f.element(rng.gen_range(0..f.order()))
}

fn rand_nonzero(rng: &mut ChaCha8Rng, f: &GaloisField) -> FieldElement {
    f.element(rng.gen_range(1..f.order()))
}

fn rand_series(rng: &mut ChaCha8Rng, f: &GaloisField, low: i64, len: usize, prec: i64) -> LaurentSeries {
    let mut coeffs: Vec<FieldElement> = (0..len).map(|_| rand_elem(rng, f)).collect();
    coeffs[0] = rand_nonzero(rng, f);
    LaurentSeries::new(f, low, coeffs, Some(prec))
}

fn rand_poly(rng: &mut ChaCha8Rng, f: &GaloisField, deg: usize) -> Poly {
    Poly::new(f, (0..=deg).map(|_| rand_elem(rng, f)).collect())
}

fn rand_rational(rng: &mut ChaCha8Rng, f: &GaloisField, deg: usize) -> RationalFunction {
    let nd = rng.gen_range(0..=deg);
    let num = rand_poly(rng, f, nd);
    let dd = rng.gen_range(0..=deg);
    let mut den = rand_poly(rng, f, dd);
    if den.is_zero() {
        den = Poly::one(f);
    }
    RationalFunction::new(num, den).expect("nonzero denominator")
}

fn tally(results: impl Iterator<Item = Result<bool>>) -> Result<(usize, usize)> {
    let mut cases = 0;
    let mut passed = 0;
    for r in results {
        cases += 1;
        passed += r? as usize;
    }
    Ok((cases, passed))
}

fn gf_inverse(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..200).map(|i| {
        let f = &fs[i % fs.len()];
        let x = rand_nonzero(rng, f);
        Ok(f.mul(x, f.inv(x)?) == f.one())
    }))
}

fn gf_frobenius(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..200).map(|i| {
        let f = &fs[i % fs.len()];
        let x = rand_elem(rng, f);
        Ok(f.frobenius_inv(f.frobenius(x)) == x && f.pow(x, f.characteristic() as u64) == f.frobenius(x))
    }))
}

fn gf_artin_schreier(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..100).map(|i| {
        let f = &fs[i % fs.len()];
        let c = rand_elem(rng, f);
        let sols = f.artin_schreier_solve(c);
        let p = f.characteristic() as usize;
        let sized = if f.trace_to_prime(c) == 0 { sols.len() == p } else { sols.is_empty() };
        Ok(sized && sols.iter().all(|&x| f.artin_schreier_map(x) == c))
    }))
}

fn series_inverse(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..60).map(|i| {
        let f = &fs[i % fs.len()];
        let low = rng.gen_range(-3..3);
        let x = rand_series(rng, f, low, 12, low + 12);
        let prod = x.mul(&x.inv()?);
        let m = prod.prec().unwrap_or(0);
        Ok(prod.agrees_to(&LaurentSeries::one(f), m))
    }))
}

fn series_pbasis(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..60).map(|i| {
        let f = &fs[i % fs.len()];
        let low = rng.gen_range(-5..5);
        let x = rand_series(rng, f, low, 20, low + 20);
        let back = LaurentSeries::pbasis_recompose(f, &x.pbasis_decompose());
        Ok(back.agrees_to(&x, low + 20))
    }))
}

fn series_hensel(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..60).map(|i| {
        let f = &fs[i % fs.len()];
        let low = rng.gen_range(1..4);
        let c = rand_series(rng, f, low, 30, 30);
        let x = hensel_artin_schreier(&c, 30)?;
        Ok(x.frobenius().sub(&x).agrees_to(&c, 30))
    }))
}

fn ratfield_periodic(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let f = GaloisField::prime(3)?;
    let at_t = embed_t(&f, &Place::t(&f), 260)?;
    tally((0..40).map(|_| {
        let num = rand_poly(rng, &f, 3);
        let mut den = rand_poly(rng, &f, 3).mul(&Poly::t(&f));
        den = den.add(&Poly::constant(&f, rand_nonzero(rng, &f)));
        let g = RationalFunction::new(num, den)?;
        let s = at_t.expand(&g, 260)?;
        let coeffs: Vec<FieldElement> = (0..260).map(|k| s.coeff(k)).collect();
        let Some((l, p)) = detect_eventual_period(&coeffs, 80, 20)? else {
            return Ok(false);
        };
        Ok(rational_from_periodic(&coeffs, l, p, &at_t)? == g)
    }))
}

fn ratfield_pth_power(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = [GaloisField::prime(3)?, GaloisField::prime(5)?, GaloisField::new(3, 2)?];
    tally((0..60).map(|i| {
        let f = &fs[i % fs.len()];
        let g = rand_rational(rng, f, 4);
        Ok(rf_is_pth_power(&g.frobenius()) == Some(g))
    }))
}

fn cartier_kills_exact(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..200).map(|i| {
        let f = &fs[i % fs.len()];
        if i % 2 == 0 {
            let g = rand_rational(rng, f, 6);
            Ok(cartier_c(&d_global(&g)).is_zero())
        } else {
            let low = rng.gen_range(-6..3);
            let x = rand_series(rng, f, low, 25, low + 25);
            Ok(cartier_c(&d_local(&x)).is_zero())
        }
    }))
}

fn cartier_inverse(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..100).map(|i| {
        let f = &fs[i % fs.len()];
        let w = if i % 2 == 0 {
            Differential::Global(rand_rational(rng, f, 5))
        } else {
            let low = rng.gen_range(-4..4);
            Differential::Local(rand_series(rng, f, low, 15, low + 15))
        };
        Ok(cartier_c(&cartier_inv(&w)) == w)
    }))
}

fn cartier_antiderivative(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..60).map(|i| {
        let f = &fs[i % fs.len()];
        let w = Differential::Global(rand_rational(rng, f, 5));
        let kernel = w.sub(&cartier_inv(&cartier_c(&w)))?;
        let Some(h) = antiderivative_global(&kernel)? else {
            return Ok(false);
        };
        Ok(d_global(&h) == kernel)
    }))
}

fn cartier_closed(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let f = GaloisField::prime(3)?;
    tally((0..100).map(|i| {
        let g = if i % 3 == 0 {
            rand_rational(rng, &f, 3).frobenius()
        } else {
            rand_rational(rng, &f, 10)
        };
        Ok(d_global(&g).is_zero() == rf_is_pth_power(&g).is_some())
    }))
}

fn cartier_residue(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..100).map(|i| {
        let f = &fs[i % fs.len()];
        let low = rng.gen_range(-5..0);
        let w = rand_series(rng, f, low, 12, 7);
        let mut gc: Vec<FieldElement> = (0..12).map(|_| rand_elem(rng, f)).collect();
        gc[0] = rand_nonzero(rng, f);
        let g = LaurentSeries::new(f, 1, gc, Some(13));
        let pulled = w.compose(&g)?.mul(&g.derivative());
        Ok(residue(&Differential::Local(w))? == residue(&Differential::Local(pulled))?)
    }))
}

fn zp_roundtrip(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let fs = fields();
    tally((0..80).map(|i| {
        let f = &fs[i % fs.len()];
        let low = rng.gen_range(-8..0);
        let b = Differential::Local(rand_series(rng, f, low, 20, 15));
        let out = solve_qv_zp(&b, 15)?;
        let expect_solved = coker_class_zp(&b)? == 0;
        Ok(out.is_solved() == expect_solved && verify_zp(&b, &out)?)
    }))
}

fn zp_free_params(rng: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let f = GaloisField::new(3, 2)?;
    let mut cases = Vec::new();
    while cases.len() < 4 {
        let low = rng.gen_range(-6..0);
        let mut b = rand_series(rng, &f, low, 16, 12);
        if f.trace_to_prime(b.coeff(-1)) != 0 {
            b = b.sub(&LaurentSeries::monomial(&f, b.coeff(-1), -1));
        }
        cases.push(Differential::Local(b));
    }
    let p = f.characteristic() as i64;
    tally(cases.iter().flat_map(|b| {
        (0..20)
            .map(|_| {
                let mut free = BTreeMap::new();
                for _ in 0..3 {
                    let k = rng.gen_range(0..36);
                    if (k + 1) % p != 0 {
                        free.insert(k, rand_elem(rng, &f));
                    }
                }
                let choice = rng.gen_range(0..p as usize);
                let out = solve_qv_zp_with(b, 12, &free, choice)?;
                verify_zp(b, &out)
            })
            .collect::<Vec<_>>()
    }))
}

fn zp_cokernel(_: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    tally([1u32, 2, 3].iter().map(|&m| {
        let f = GaloisField::new(3, m)?;
        let classes: BTreeSet<u32> = f
            .elements()
            .map(|c| {
                coker_class_zp(&Differential::Local(LaurentSeries::monomial(&f, c, -1)))
            })
            .collect::<Result<_>>()?;
        Ok(classes.len() == 3)
    }))
}

fn wound_family(_: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    let f = GaloisField::prime(3)?;
    let mut checks = Vec::new();
    for n in 1..=2 {
        let x = x_family_wound(&f, n)?;
        for place in ["1/t", "t+1", "t+2", "t^2+1"] {
            let place = Place::parse(&f, place)?;
            let out = solve_qv_wound(&x, &place, 15)?;
            checks.push(Ok(out.is_solved() && verify_wound(&x, &place, &out)?));
        }
    }
    for (n, k) in [(1, 2), (1, 3), (2, 3)] {
        let x = x_family_wound(&f, n)?.sub(&x_family_wound(&f, k)?)?;
        let t = Place::t(&f);
        let out = solve_qv_wound(&x, &t, 15)?;
        checks.push(Ok(!out.is_solved() && verify_wound(&x, &t, &out)?));
    }
    tally(checks.into_iter())
}

fn certificate_small(_: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    tally([(0, 1), (1, 2)].iter().map(|&(n, k)| {
        let cert = nonperiodicity_certificate(3, n, k, 10, 10)?;
        Ok(cert.is_complete() && cert.verify()?)
    }))
}

fn cli_validation(_: &mut ChaCha8Rng) -> Result<(usize, usize)> {
    use crate::report::Common;
    let checks = [
        Common::new(4, 1, 10, 0).is_err(),
        Common::new(2, 1, 10, 0).is_err(),
        Common::new(3, 1, 0, 0).is_err(),
        Common::new(3, 2, 10, 0).is_ok(),
        x_family_wound(&GaloisField::prime(3)?, 0).is_err(),
    ];
    tally(checks.into_iter().map(Ok))
}
