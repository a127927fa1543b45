//! The maps `q` and `q_v` for `G = Z/p` and `G = {t x^p = y^p - y}`, their
//! local solvers, cokernel classes, and the global certificates that the
//! families `x_N` do not come from `F_p(t)`.

mod certificate;
mod union_find;
mod wound;
mod zp;

use serde::{Deserialize, Serialize};

use crate::gf::GaloisField;
use crate::series::{LaurentSeries, SeriesJson};

pub use certificate::{
    nonperiodicity_certificate, telescoping_check, zp_difference_coefficients,
    PeriodicityCertificate, Refutation, TelescopingCheck,
};
pub use union_find::WeightedUnionFind;
pub use wound::{
    q_wound, q_wound_local, solve_qv_wound, verify_wound, wound_global_search,
    wound_local_point, wound_local_point_rational, x_family_wound, WoundPoint,
};
pub use zp::{
    coker_class_zp, global_preimage_search_zp, local_class_table_zp, q_zp, q_zp_local,
    solve_qv_zp, solve_qv_zp_with, verify_zp, x_family_zp, LocalClassRow,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Solved,
    NoSolution,
}

/// Why a local equation has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Witness {
    /// `x - x^{1/p} = b_{-1}` has no root since `Tr(b_{-1}) ≠ 0`.
    Trace { residue: String, trace: u32 },
    /// The target's first component has a pole that `C(t a du)` cannot
    /// produce once `a du = C(a du)`.
    NegativeCoefficient { exponent: i64, coefficient: String },
}

/// The parameters that the canonical solution fixes to a default.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeParams {
    /// Human-readable description of the free coefficient indices.
    pub indices: String,
    /// The Artin-Schreier fiber at `u^{-1}`, if any; the canonical solution
    /// uses its first element.
    pub fiber: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub solution: Option<LaurentSeries>,
    pub free_params: Option<FreeParams>,
    pub witness: Option<Witness>,
    /// The precision to which the solution was verified.
    pub precision: i64,
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        self.status == Status::Solved
    }

    pub fn to_json(&self) -> SolveOutcomeJson {
        SolveOutcomeJson {
            status: self.status,
            solution: self.solution.as_ref().map(|s| s.to_json()),
            free_params: self.free_params.clone(),
            witness: self.witness.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcomeJson {
    pub status: Status,
    pub solution: Option<SeriesJson>,
    #[serde(rename = "freeParams")]
    pub free_params: Option<FreeParams>,
    pub witness: Option<Witness>,
}

fn fmt_elements(field: &GaloisField, xs: &[crate::gf::FieldElement]) -> Vec<String> {
    xs.iter().map(|&x| field.format(x)).collect()
}
