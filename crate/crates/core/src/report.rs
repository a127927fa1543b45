//! Command runners behind the `cartier` binary. Each produces a
//! [`Report`] whose JSON form is deterministic for a given configuration.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::GaloisField;
use crate::obstruction::{
    global_preimage_search_zp, local_class_table_zp, nonperiodicity_certificate, solve_qv_wound,
    telescoping_check, verify_wound, verify_zp, wound_global_search, wound_local_point_rational,
    x_family_wound, x_family_zp, SolveOutcome,
};
use crate::ratfield::{embed_t, Place, RationalFunction};
use crate::cartier::localize;

pub const SCHEMA: &str = "1";

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse { what: "format", input: s.into() }),
        }
    }
}

/// A finished run: config echo, payload, flat rows for CSV, and whether
/// every result re-verified.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub results: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub verified: bool,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "verified": self.verified,
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
            }
            Format::Text => {
                let mut s = String::new();
                writeln!(s, "{}", self.command).unwrap();
                for row in &self.rows {
                    let cells: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .filter(|(_, v)| !v.is_empty())
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect();
                    writeln!(s, "  {}", cells.join("  ")).unwrap();
                }
                writeln!(s, "verified: {}", self.verified).unwrap();
                Ok(s)
            }
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct Common {
    pub field: GaloisField,
    pub precision: i64,
    pub seed: u64,
}

impl Common {
    pub fn new(p: u64, m: u32, precision: i64, seed: u64) -> Result<Self> {
        if precision < 1 {
            return Err(Error::InvalidArgument(format!("precision must be positive, got {precision}")));
        }
        Ok(Common {
            field: GaloisField::new(p, m)?,
            precision,
            seed,
        })
    }

    fn echo(&self) -> Value {
        json!({
            "p": self.field.characteristic(),
            "m": self.field.degree(),
            "precision": self.precision,
        })
    }
}

fn outcome_json(o: &SolveOutcome) -> Value {
    serde_json::to_value(o.to_json()).expect("serializable")
}

fn status_str(o: &SolveOutcome) -> &'static str {
    if o.is_solved() {
        "Solved"
    } else {
        "NoSolution"
    }
}

fn witness_str(o: &SolveOutcome) -> String {
    o.witness
        .as_ref()
        .map(|w| serde_json::to_string(w).expect("serializable"))
        .unwrap_or_default()
}

fn places_json(places: &[Place]) -> Value {
    Value::from(places.iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

/// Parses a comma-separated place list.
pub fn parse_places(field: &GaloisField, s: &str) -> Result<Vec<Place>> {
    let mut places = s
        .split(',')
        .map(|p| Place::parse(field, p.trim()))
        .collect::<Result<Vec<_>>>()?;
    places.sort_by(|a, b| a.canonical_cmp(b));
    places.dedup();
    Ok(places)
}

#[derive(Clone, Debug)]
pub struct ZpConfig {
    pub ns: Vec<u32>,
    pub pairs: Vec<(u32, u32)>,
    pub places: Vec<Place>,
    pub search_bound: usize,
    pub pmax: usize,
    pub lmax: usize,
}

/// Local class tables for each `x_N`, then the bounded preimage search and
/// the non-periodicity certificate for each pair `(N, K)`.
pub fn cmd_zp(common: &Common, cfg: &ZpConfig) -> Result<Report> {
    for &(n, k) in &cfg.pairs {
        if n >= k {
            return Err(Error::InvalidArgument(format!("pair {n}:{k} needs N < K")));
        }
    }
    if !cfg.pairs.is_empty() && !common.field.is_prime_field() {
        return Err(Error::InvalidArgument("pairs need the prime field (--m 1)".into()));
    }
    let field = &common.field;
    let m = common.precision;
    let mut verified = true;
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for &n in &cfg.ns {
        let x = x_family_zp(field, n);
        for row in local_class_table_zp(field, n, &cfg.places, m)? {
            let ok = match &row.outcome {
                Some(o) => {
                    let emb = embed_t(field, &row.place, m + 4)?;
                    verify_zp(&localize(&x, &emb, m)?, o)?
                }
                None => true,
            };
            verified &= ok;
            let (status, solution, free, witness) = match &row.outcome {
                Some(o) => {
                    let j = outcome_json(o);
                    (json!(status_str(o)), j["solution"].clone(), j["freeParams"].clone(), Value::Null)
                }
                None => (json!("NoSolution"), Value::Null, Value::Null, json!({"kind": "trace", "residue": row.residue, "trace": row.class})),
            };
            rows.push(vec![
                n.to_string(),
                row.place.to_string(),
                row.integral.to_string(),
                row.residue.clone(),
                row.class.to_string(),
                status.as_str().unwrap().to_string(),
                row.outcome
                    .as_ref()
                    .and_then(|o| o.solution.as_ref())
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                ok.to_string(),
            ]);
            table.push(json!({
                "N": n,
                "place": row.place.to_string(),
                "integral": row.integral,
                "residue": row.residue,
                "class": row.class,
                "status": status,
                "solution": solution,
                "freeParams": free,
                "witness": witness,
                "verified": ok,
            }));
        }
    }

    let mut searches = Vec::new();
    let mut certificates = Vec::new();
    for &(n, k) in &cfg.pairs {
        let omega = x_family_zp(field, n).sub(&x_family_zp(field, k))?;
        let found = global_preimage_search_zp(&omega, cfg.search_bound)?;
        verified &= found.is_none();
        searches.push(json!({
            "N": n,
            "K": k,
            "bound": cfg.search_bound,
            "found": found.map(|a| a.to_string()),
        }));
        let cert = nonperiodicity_certificate(field.characteristic(), n, k, cfg.pmax, cfg.lmax)?;
        let ok = cert.is_complete() && cert.verify()?;
        verified &= ok;
        certificates.push(json!({
            "N": n,
            "K": k,
            "Pmax": cfg.pmax,
            "Lmax": cfg.lmax,
            "bound": cert.bound,
            "refuted": cert.refutations.len(),
            "inconclusive": cert.inconclusive,
            "refutations": cert.refutations,
            "verified": ok,
        }));
    }

    Ok(Report {
        command: "zp",
        config: json!({
            "field": common.echo(),
            "ns": cfg.ns,
            "pairs": cfg.pairs,
            "places": places_json(&cfg.places),
            "searchBound": cfg.search_bound,
            "Pmax": cfg.pmax,
            "Lmax": cfg.lmax,
        }),
        results: json!({
            "places": table,
            "searches": searches,
            "certificates": certificates,
        }),
        columns: vec!["N", "place", "integral", "residue", "class", "status", "solution", "verified"],
        rows,
        verified,
    })
}

#[derive(Clone, Debug)]
pub struct WoundConfig {
    pub n: i64,
    pub k: Option<i64>,
    pub places: Vec<Place>,
}

/// `x_N` at each place, and `x_N - x_K` at `[t]` when `K` is given.
pub fn cmd_wound(common: &Common, cfg: &WoundConfig) -> Result<Report> {
    let field = &common.field;
    let m = common.precision;
    let x_n = x_family_wound(field, cfg.n)?;
    let mut jobs = Vec::new();
    for place in &cfg.places {
        jobs.push((format!("x_{}", cfg.n), x_n.clone(), place.clone()));
    }
    if let Some(k) = cfg.k {
        if k == cfg.n {
            return Err(Error::InvalidArgument("K must differ from N".into()));
        }
        let diff = x_n.sub(&x_family_wound(field, k)?)?;
        jobs.push((format!("x_{} - x_{}", cfg.n, k), diff, Place::t(field)));
    }

    let mut verified = true;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (label, target, place) in jobs {
        let out = solve_qv_wound(&target, &place, m)?;
        let ok = verify_wound(&target, &place, &out)?;
        verified &= ok;
        let mut j = outcome_json(&out);
        j["target"] = json!(label);
        j["place"] = json!(place.to_string());
        j["verified"] = json!(ok);
        rows.push(vec![
            label,
            place.to_string(),
            status_str(&out).to_string(),
            out.solution.as_ref().map(|s| s.to_string()).unwrap_or_default(),
            witness_str(&out),
            ok.to_string(),
        ]);
        results.push(j);
    }
    Ok(Report {
        command: "wound",
        config: json!({
            "field": common.echo(),
            "N": cfg.n,
            "K": cfg.k,
            "places": places_json(&cfg.places),
        }),
        results: json!({ "places": results }),
        columns: vec!["target", "place", "status", "solution", "witness", "verified"],
        rows,
        verified,
    })
}

#[derive(Clone, Debug)]
pub struct PointsConfig {
    pub place: Place,
    pub xs: Vec<RationalFunction>,
    pub global_search: Option<usize>,
}

/// Local points over each supplied `x`, and optionally the bounded global
/// search.
pub fn cmd_points(common: &Common, cfg: &PointsConfig) -> Result<Report> {
    let field = &common.field;
    let m = common.precision;
    let mut verified = true;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for x in &cfg.xs {
        let pt = wound_local_point_rational(x, &cfg.place, m)?;
        let ok = pt.verify(field)?;
        verified &= ok;
        rows.push(vec![
            cfg.place.to_string(),
            x.to_string(),
            pt.y.to_string(),
            ok.to_string(),
        ]);
        points.push(json!({
            "place": cfg.place.to_string(),
            "x": x.to_string(),
            "y": pt.y.to_json(),
            "precision": m,
            "verified": ok,
        }));
    }
    let search = match cfg.global_search {
        Some(d) => {
            let found = wound_global_search(field, d)?;
            for (x, y) in &found {
                rows.push(vec!["global".into(), x.to_string(), y.to_string(), "true".into()]);
            }
            let pairs: Vec<[String; 2]> = found.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect();
            json!({ "bound": d, "solutions": pairs })
        }
        None => Value::Null,
    };
    Ok(Report {
        command: "points",
        config: json!({
            "field": common.echo(),
            "place": cfg.place.to_string(),
            "xs": cfg.xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "globalSearch": cfg.global_search,
        }),
        results: json!({ "points": points, "globalSearch": search }),
        columns: vec!["place", "x", "y", "verified"],
        rows,
        verified,
    })
}

#[derive(Clone, Debug)]
pub struct CertConfig {
    pub n: u32,
    pub k: u32,
    pub pmax: usize,
    pub lmax: usize,
    /// `(M, s)` for the telescoping spot check.
    pub telescope: (usize, u32),
}

pub fn cmd_cert(common: &Common, cfg: &CertConfig) -> Result<Report> {
    if !common.field.is_prime_field() {
        return Err(Error::InvalidArgument("cert needs the prime field (--m 1)".into()));
    }
    let p = common.field.characteristic();
    let cert = nonperiodicity_certificate(p, cfg.n, cfg.k, cfg.pmax, cfg.lmax)?;
    let cert_ok = cert.is_complete() && cert.verify()?;
    let (tm, ts) = cfg.telescope;
    let tele = telescoping_check(p, cfg.n, cfg.k, tm, ts)?;
    let rows = cert
        .refutations
        .iter()
        .map(|r| {
            let chain: Vec<String> = r.chain.iter().map(|(n, s)| format!("{}{n}", if *s > 0 { '+' } else { '-' })).collect();
            vec![r.period.to_string(), r.offset.to_string(), chain.join(" ")]
        })
        .collect();
    Ok(Report {
        command: "cert",
        config: json!({
            "field": common.echo(),
            "N": cfg.n,
            "K": cfg.k,
            "Pmax": cfg.pmax,
            "Lmax": cfg.lmax,
            "telescope": { "M": tm, "s": ts },
        }),
        results: json!({
            "certificate": cert,
            "complete": cert.is_complete(),
            "telescoping": tele,
        }),
        columns: vec!["P", "L", "chain"],
        rows,
        verified: cert_ok && tele.holds(),
    })
}
