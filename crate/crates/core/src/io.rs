//! JSON input schemas and CSV output formats.
//!
//! CSV floats are written with 17 significant digits in `.`-decimal
//! scientific notation, independent of locale.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::asymptotic::{DirectionReport, Multiplicity};
use crate::expr::Expr;
use crate::qmap::QuadraticMap;
use crate::quasiumb::{ExampleFamily, RuledLightlikeSurface};
use crate::surface::{Domain, Surface, VectorField};
use crate::{Error, Result};

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn clean(e: serde_json::Error) -> Error {
    let msg = e.to_string().replace('`', "");
    let msg = match msg.find(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    };
    Error::Input(msg)
}

/// Parses JSON text into `T`, turning serde messages into input errors
/// such as `missing field B2`.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(clean)?;
    serde_json::from_value(v).map_err(clean)
}

pub fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
}

/// `{"B1": [[..],[..]], "B2": [[..],[..]]}` with finite entries.
pub fn parse_qmap(text: &str) -> Result<QuadraticMap> {
    let q: QuadraticMap = from_json(text)?;
    if !q.is_finite() {
        return Err(Error::Input("B1 and B2 must have finite entries".into()));
    }
    Ok(q)
}

/// Surface definition file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDef {
    pub components: [Expr; 4],
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ref_tangent: Option<VectorField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ref_normal: Option<VectorField>,
}

impl SurfaceDef {
    pub fn new(components: [Expr; 4], domain: Domain) -> Self {
        SurfaceDef { components, domain, time_ref_tangent: None, time_ref_normal: None }
    }

    pub fn build(&self) -> Result<Surface> {
        let d = self.domain;
        if !(d.u[0] < d.u[1] && d.v[0] < d.v[1]) || !d.u.iter().chain(&d.v).all(|x| x.is_finite()) {
            return Err(Error::Input("domain: each range must be finite with lo < hi".into()));
        }
        let mut s = Surface::from_exprs(self.components.clone(), d);
        if let Some(r) = &self.time_ref_tangent {
            s = s.with_tangent_ref(r.clone());
        }
        if let Some(r) = &self.time_ref_normal {
            s = s.with_normal_ref(r.clone());
        }
        Ok(s)
    }
}

pub fn parse_surface(text: &str) -> Result<Surface> {
    from_json::<SurfaceDef>(text)?.build()
}

/// Either generator form: `{"gamma", "T", "domain"}` or `{"a", "b", "f", "g", "domain"}`.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorDef {
    Ruled(RuledLightlikeSurface),
    Family(ExampleFamily),
}

pub fn parse_generator(text: &str) -> Result<GeneratorDef> {
    let v: Value = serde_json::from_str(text).map_err(clean)?;
    let has = |k: &str| v.get(k).is_some();
    if has("gamma") || has("T") {
        Ok(GeneratorDef::Ruled(serde_json::from_value(v).map_err(clean)?))
    } else if has("a") || has("b") || has("f") || has("g") {
        Ok(GeneratorDef::Family(serde_json::from_value(v).map_err(clean)?))
    } else {
        Err(Error::Input("missing field gamma (or the shorthand a, b, f, g)".into()))
    }
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

pub const SURFACE_COLUMNS: [&str; 10] = ["u", "v", "normH2", "K", "KN", "Delta", "case", "rank_f", "trPhi", "detPhi"];
pub const DIRECTION_COLUMNS: [&str; 8] = ["u", "v", "kind", "dir1", "dir2", "causal", "multiplicity", "table_row"];
pub const ADS_COLUMNS: [&str; 6] = ["u", "v", "phi", "sign", "gk_det", "parabolic_flag"];
pub const HYPERBOLA_COLUMNS: [&str; 4] = ["branch", "t", "nu1", "nu2"];

/// Rows for one point of the direction dump: one per direction, or a single
/// row with empty components when there is none or every direction solves.
pub fn direction_rows(u: f64, v: f64, kind: &str, rep: &DirectionReport) -> Vec<Vec<String>> {
    let row = rep.table_row.clone().unwrap_or_default();
    let base = |d1: String, d2: String, causal: &str, m: String| {
        vec![fmt_f64(u), fmt_f64(v), kind.to_string(), d1, d2, causal.to_string(), m, row.clone()]
    };
    match rep.multiplicity {
        Multiplicity::None => vec![base(String::new(), String::new(), "none", "0".into())],
        Multiplicity::DegenerateTotal => vec![base(String::new(), String::new(), "all", "0".into())],
        _ => rep
            .directions
            .iter()
            .map(|d| base(fmt_f64(d.v.0[0]), fmt_f64(d.v.0[1]), d.causal.as_str(), d.multiplicity.to_string()))
            .collect(),
    }
}
