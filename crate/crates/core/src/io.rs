//! JSON file formats.
//!
//! Rationals are strings `"p/q"` (or `"p"` for integers) in lowest terms;
//! integers are JSON numbers, or decimal strings when they do not fit in
//! 64 bits. Objects are emitted with sorted keys, so output is canonical.

use std::str::FromStr;

use num::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::avhs::{
    AvhsError, ConnectionPresentation, EffectiveClass, GWData, GradedSpace, HodgeDiamond, Trilinear,
    WeightFiltration,
};
use crate::lattice::{LatVec, Lattice, LatticeError, Sublattice};
use crate::matrix::{IntMatrix, QMatrix};
use crate::mukai::{MukaiError, MukaiVector, PeriodPoint};
use crate::series::{OperatorSeries, TruncatedSeries};
use crate::tduality::{DualClass, PureCycle, TDualityError};
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: String, detail: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("cannot recognise the input kind (keys: {0})")]
    UnknownKind(String),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn schema(path: &str, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn inv(name: &str, detail: impl Into<String>) -> IoError {
    IoError::Invariant {
        name: name.to_string(),
        detail: detail.into(),
    }
}

impl From<LatticeError> for IoError {
    fn from(e: LatticeError) -> Self {
        let name = match &e {
            LatticeError::NotSymmetric => "gram symmetric",
            LatticeError::NotEven(_) => "even flag",
            LatticeError::NotUnimodular(_) => "unimodular flag",
            LatticeError::DependentBasis => "independent basis",
            LatticeError::NotSaturated => "saturated",
            LatticeError::DimensionMismatch { .. } | LatticeError::LabelCount { .. } => "dimension",
            LatticeError::ZeroVector => "nonzero vector",
            LatticeError::NotPrimitive(_) => "primitive",
            LatticeError::NotIsotropic(_) => "isotropic",
            _ => "lattice",
        };
        inv(name, e.to_string())
    }
}

impl From<AvhsError> for IoError {
    fn from(e: AvhsError) -> Self {
        match e {
            AvhsError::Invariant { name, detail } => inv(name, detail),
            AvhsError::NotEffective(d) => inv("effective class", d),
            AvhsError::DegeneratePairing => inv("perfect pairing", "pairing is degenerate"),
            other => inv("shape", other.to_string()),
        }
    }
}

impl From<MukaiError> for IoError {
    fn from(e: MukaiError) -> Self {
        match e {
            MukaiError::Lattice(l) => l.into(),
            MukaiError::PeriodInvariant(d) => inv("period", d),
            other => inv("mukai", other.to_string()),
        }
    }
}

impl From<TDualityError> for IoError {
    fn from(e: TDualityError) -> Self {
        match e {
            TDualityError::Lattice(l) => l.into(),
            TDualityError::NotSaturated => inv("saturated", e.to_string()),
            TDualityError::RankMismatch { .. } => inv("rank plus base dimension", e.to_string()),
            TDualityError::ZeroMultiplicity => inv("multiplicity", e.to_string()),
            TDualityError::Misaligned { .. } => inv("aligned lists", e.to_string()),
        }
    }
}

/// Parses JSON text, reporting the position of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Canonical compact rendering (sorted keys).
pub fn emit_json(v: &Value) -> String {
    serde_json::to_string(v).expect("values serialise")
}

/// Canonical pretty rendering (sorted keys, two-space indent).
pub fn emit_json_pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialise")
}

// ---------------------------------------------------------------- scalars

pub fn rat_to_json(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn parse_rat_str(s: &str) -> Option<Rat> {
    let s = s.trim().replace('−', "-");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
        None => (s.clone(), "1".to_string()),
    };
    let n = Int::from_str(&n).ok()?;
    let d = Int::from_str(&d).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub fn rat_from_json(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat_str(s).ok_or_else(|| schema(path, format!("`{s}` is not a rational p/q"))),
        Value::Number(_) => Ok(Rat::from_integer(int_from_json(v, path)?)),
        _ => Err(schema(path, "expected a rational string \"p/q\"")),
    }
}

pub fn int_to_json(x: &Int) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_json(v: &Value, path: &str) -> Result<Int> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Int::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Int::from(u))
            } else {
                Err(schema(path, "expected an integer"))
            }
        }
        Value::String(s) => Int::from_str(&s.trim().replace('−', "-")).map_err(|_| schema(path, format!("`{s}` is not an integer"))),
        _ => Err(schema(path, "expected an integer")),
    }
}

fn usize_from_json(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn u32_from_json(v: &Value, path: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

pub(crate) fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn sub(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn idx(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

// ---------------------------------------------------------------- vectors and matrices

pub fn int_vec_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn int_vec_from_json(v: &Value, path: &str) -> Result<Vec<Int>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| int_from_json(x, &idx(path, i)))
        .collect()
}

pub fn rat_vec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn rat_vec_from_json(v: &Value, path: &str) -> Result<Vec<Rat>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| rat_from_json(x, &idx(path, i)))
        .collect()
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| int_vec_to_json(m.row(r))).collect())
}

/// Rows of a matrix; `cols` fixes the width when there are no rows.
pub fn int_matrix_from_json(v: &Value, path: &str, cols: Option<usize>) -> Result<IntMatrix> {
    let rows: Vec<Vec<Int>> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| int_vec_from_json(r, &idx(path, i)))
        .collect::<Result<_>>()?;
    let width = match (rows.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    if let Some(c) = cols {
        if width != c {
            return Err(inv("dimension", format!("{path}: rows have length {width}, expected {c}")));
        }
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(inv("dimension", format!("{path}[{i}] has length {}, expected {width}", rows[i].len())));
    }
    Ok(IntMatrix::from_rows(rows, width))
}

pub fn rat_matrix_to_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| rat_vec_to_json(m.row(r))).collect())
}

pub fn rat_matrix_from_json(v: &Value, path: &str, cols: Option<usize>) -> Result<QMatrix> {
    let rows: Vec<Vec<Rat>> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, r)| rat_vec_from_json(r, &idx(path, i)))
        .collect::<Result<_>>()?;
    let width = match (rows.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    if let Some(c) = cols {
        if width != c {
            return Err(inv("dimension", format!("{path}: rows have length {width}, expected {c}")));
        }
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(inv("dimension", format!("{path}[{i}] has length {}, expected {width}", rows[i].len())));
    }
    Ok(QMatrix::from_rows(rows, width))
}

// ---------------------------------------------------------------- typed values

/// Conversion to and from the JSON file format.
pub trait JsonCodec: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_at(v, "")
    }
    fn from_json_at(v: &Value, path: &str) -> Result<Self>;
}

impl JsonCodec for Lattice {
    fn to_json(&self) -> Value {
        let mut flags = Vec::new();
        if self.declared_even() {
            flags.push("even");
        }
        if self.declared_unimodular() {
            flags.push("unimodular");
        }
        let mut o = json!({
            "rank": self.rank(),
            "gram": int_matrix_to_json(self.gram()),
            "flags": flags,
        });
        if let Some(l) = self.labels() {
            o["labels"] = json!(l);
        }
        o
    }

    /// Also accepts the presets `"U"`, `"E8(-1)"`, `"K3"` as bare strings.
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        if let Value::String(s) = v {
            return match s.as_str() {
                "U" => Ok(Lattice::hyperbolic_plane()),
                "E8(-1)" | "E8(−1)" => Ok(Lattice::e8(true)),
                "E8" => Ok(Lattice::e8(false)),
                "K3" => Ok(Lattice::k3()),
                other => Err(schema(path, format!("unknown lattice preset `{other}` (use U, E8, E8(-1), K3)"))),
            };
        }
        let o = object(v, path)?;
        let gram = int_matrix_from_json(field(o, "gram", path)?, &sub(path, "gram"), None)?;
        if let Some(r) = o.get("rank") {
            let r = usize_from_json(r, &sub(path, "rank"))?;
            if r != gram.rows() {
                return Err(inv("dimension", format!("rank {r} but gram has {} rows", gram.rows())));
            }
        }
        if gram.rows() != gram.cols() {
            return Err(inv("dimension", "gram must be square"));
        }
        let labels = match o.get("labels") {
            None | Some(Value::Null) => None,
            Some(l) => Some(
                array(l, &sub(path, "labels"))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema(&sub(path, "labels"), "expected strings")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut even = false;
        let mut uni = false;
        if let Some(f) = o.get("flags") {
            for x in array(f, &sub(path, "flags"))? {
                match x.as_str() {
                    Some("even") => even = true,
                    Some("unimodular") => uni = true,
                    _ => return Err(schema(&sub(path, "flags"), format!("unknown flag {x}"))),
                }
            }
        }
        Ok(Lattice::with_flags(gram, labels, even, uni)?)
    }
}

impl JsonCodec for LatVec {
    fn to_json(&self) -> Value {
        int_vec_to_json(&self.0)
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        Ok(LatVec(int_vec_from_json(v, path)?))
    }
}

impl JsonCodec for Sublattice {
    fn to_json(&self) -> Value {
        json!({
            "n": self.ambient_rank(),
            "basis": int_matrix_to_json(&self.basis_matrix()),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let n = usize_from_json(field(o, "n", path)?, &sub(path, "n"))?;
        let key = if o.contains_key("basis") { "basis" } else { "fiber_basis" };
        let m = int_matrix_from_json(field(o, key, path)?, &sub(path, key), Some(n))?;
        let basis = (0..m.rows()).map(|r| LatVec(m.row(r).to_vec())).collect();
        Ok(Sublattice::new(n, basis)?)
    }
}

impl JsonCodec for MukaiVector {
    fn to_json(&self) -> Value {
        json!({
            "alpha": int_to_json(&self.alpha),
            "beta": int_vec_to_json(&self.beta.0),
            "gamma": int_to_json(&self.gamma),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        Ok(MukaiVector::new(
            int_from_json(field(o, "alpha", path)?, &sub(path, "alpha"))?,
            LatVec(int_vec_from_json(field(o, "beta", path)?, &sub(path, "beta"))?),
            int_from_json(field(o, "gamma", path)?, &sub(path, "gamma"))?,
        ))
    }
}

impl JsonCodec for PeriodPoint {
    fn to_json(&self) -> Value {
        json!({ "re": rat_vec_to_json(&self.re), "im": rat_vec_to_json(&self.im) })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let re = rat_vec_from_json(field(o, "re", path)?, &sub(path, "re"))?;
        let im = rat_vec_from_json(field(o, "im", path)?, &sub(path, "im"))?;
        if re.len() != im.len() {
            return Err(inv("dimension", "re and im have different lengths"));
        }
        Ok(PeriodPoint::new(re, im))
    }
}

fn trilinear_to_json(t: &Trilinear) -> Value {
    Value::Array(
        t.entries()
            .into_iter()
            .map(|(a, b, c, v)| json!([a, b, c, rat_to_json(&v)]))
            .collect(),
    )
}

fn trilinear_from_json(v: &Value, dim: usize, path: &str) -> Result<Trilinear> {
    let mut entries = Vec::new();
    for (i, e) in array(v, path)?.iter().enumerate() {
        let p = idx(path, i);
        let e = array(e, &p)?;
        if e.len() != 4 {
            return Err(schema(&p, "expected [A, B, C, value]"));
        }
        entries.push((
            usize_from_json(&e[0], &p)?,
            usize_from_json(&e[1], &p)?,
            usize_from_json(&e[2], &p)?,
            rat_from_json(&e[3], &p)?,
        ));
    }
    Ok(Trilinear::from_entries(dim, &entries)?)
}

impl JsonCodec for GradedSpace {
    fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "dims": self.dims(),
            "labels": self.labels(),
            "cup": trilinear_to_json(self.cup()),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let dims: Vec<usize> = array(field(o, "dims", path)?, &sub(path, "dims"))?
            .iter()
            .enumerate()
            .map(|(i, x)| usize_from_json(x, &idx(&sub(path, "dims"), i)))
            .collect::<Result<_>>()?;
        let n = match o.get("n") {
            Some(x) => usize_from_json(x, &sub(path, "n"))?,
            None => dims.len().saturating_sub(1),
        };
        let dim: usize = dims.iter().sum();
        let cup = trilinear_from_json(field(o, "cup", path)?, dim, &sub(path, "cup"))?;
        let pairing = match o.get("pairing") {
            None | Some(Value::Null) => None,
            Some(p) => Some(rat_matrix_from_json(p, &sub(path, "pairing"), Some(dim))?),
        };
        let labels = match o.get("labels") {
            None | Some(Value::Null) => None,
            Some(l) => Some(
                array(l, &sub(path, "labels"))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).ok_or_else(|| schema(&sub(path, "labels"), "expected strings")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(GradedSpace::new(n, dims, labels, cup, pairing)?)
    }
}

impl JsonCodec for GWData {
    fn to_json(&self) -> Value {
        let mut o = self.space().to_json();
        o["classes"] = Value::Array(
            self.classes()
                .iter()
                .map(|(eta, phi)| json!({ "eta": eta.exponents(), "phi": trilinear_to_json(phi) }))
                .collect(),
        );
        o
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let space = GradedSpace::from_json_at(v, path)?;
        let o = object(v, path)?;
        let mut classes = Vec::new();
        if let Some(cs) = o.get("classes") {
            for (i, c) in array(cs, &sub(path, "classes"))?.iter().enumerate() {
                let p = idx(&sub(path, "classes"), i);
                let co = object(c, &p)?;
                let eta: Vec<i64> = array(field(co, "eta", &p)?, &sub(&p, "eta"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| schema(&sub(&p, "eta"), "expected integers")))
                    .collect::<Result<_>>()?;
                let eta = EffectiveClass::new(&eta)?;
                let phi = trilinear_from_json(field(co, "phi", &p)?, space.dim(), &sub(&p, "phi"))?;
                classes.push((eta, phi));
            }
        }
        Ok(GWData::new(space, classes)?)
    }
}

impl JsonCodec for TruncatedSeries {
    fn to_json(&self) -> Value {
        json!({
            "vars": self.vars(),
            "cutoff": self.cutoff(),
            "terms": self.terms().iter().map(|(m, c)| json!({ "q": m, "c": rat_to_json(c) })).collect::<Vec<_>>(),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let vars = usize_from_json(field(o, "vars", path)?, &sub(path, "vars"))?;
        let cutoff = u32_from_json(field(o, "cutoff", path)?, &sub(path, "cutoff"))?;
        let mut s = TruncatedSeries::zero(vars, cutoff);
        for (i, t) in array(field(o, "terms", path)?, &sub(path, "terms"))?.iter().enumerate() {
            let p = idx(&sub(path, "terms"), i);
            let to = object(t, &p)?;
            let m = monomial_from_json(field(to, "q", &p)?, vars, &sub(&p, "q"))?;
            s.add_term(m, rat_from_json(field(to, "c", &p)?, &sub(&p, "c"))?);
        }
        Ok(s)
    }
}

fn monomial_from_json(v: &Value, vars: usize, path: &str) -> Result<Vec<u32>> {
    let m: Vec<u32> = array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| u32_from_json(x, &idx(path, i)))
        .collect::<Result<_>>()?;
    if m.len() != vars {
        return Err(inv("dimension", format!("{path}: monomial has {} exponents, expected {vars}", m.len())));
    }
    Ok(m)
}

impl JsonCodec for OperatorSeries {
    fn to_json(&self) -> Value {
        json!({
            "vars": self.vars(),
            "cutoff": self.cutoff(),
            "rows": self.rows(),
            "cols": self.cols(),
            "terms": self.terms().iter().map(|(m, c)| json!({ "q": m, "m": rat_matrix_to_json(c) })).collect::<Vec<_>>(),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let vars = usize_from_json(field(o, "vars", path)?, &sub(path, "vars"))?;
        let cutoff = u32_from_json(field(o, "cutoff", path)?, &sub(path, "cutoff"))?;
        let rows = usize_from_json(field(o, "rows", path)?, &sub(path, "rows"))?;
        let cols = match o.get("cols") {
            Some(c) => usize_from_json(c, &sub(path, "cols"))?,
            None => rows,
        };
        let mut s = OperatorSeries::zero(vars, cutoff, rows, cols);
        for (i, t) in array(field(o, "terms", path)?, &sub(path, "terms"))?.iter().enumerate() {
            let p = idx(&sub(path, "terms"), i);
            let to = object(t, &p)?;
            let m = monomial_from_json(field(to, "q", &p)?, vars, &sub(&p, "q"))?;
            let mat = rat_matrix_from_json(field(to, "m", &p)?, &sub(&p, "m"), Some(cols))?;
            if mat.rows() != rows {
                return Err(inv("dimension", format!("{p}: matrix has {} rows, expected {rows}", mat.rows())));
            }
            s.add_term(m, mat);
        }
        Ok(s)
    }
}

impl JsonCodec for ConnectionPresentation {
    fn to_json(&self) -> Value {
        let mut o = json!({
            "dim": self.dim(),
            "vars": self.vars(),
            "cutoff": self.cutoff(),
            "operators": self.operators().iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "filtration": self.filtration().iter().map(rat_matrix_to_json).collect::<Vec<_>>(),
        });
        if let Some(s) = self.sub() {
            o["sub"] = rat_matrix_to_json(s);
        }
        o
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let dim = usize_from_json(field(o, "dim", path)?, &sub(path, "dim"))?;
        let ops: Vec<OperatorSeries> = array(field(o, "operators", path)?, &sub(path, "operators"))?
            .iter()
            .enumerate()
            .map(|(i, x)| OperatorSeries::from_json_at(x, &idx(&sub(path, "operators"), i)))
            .collect::<Result<_>>()?;
        let filtration: Vec<QMatrix> = array(field(o, "filtration", path)?, &sub(path, "filtration"))?
            .iter()
            .enumerate()
            .map(|(i, x)| rat_matrix_from_json(x, &idx(&sub(path, "filtration"), i), Some(dim)))
            .collect::<Result<_>>()?;
        let subspace = match o.get("sub") {
            None | Some(Value::Null) => None,
            Some(s) => Some(rat_matrix_from_json(s, &sub(path, "sub"), Some(dim))?),
        };
        let p = ConnectionPresentation::new(dim, ops, filtration, subspace)?;
        if let Some(vars) = o.get("vars") {
            let vars = usize_from_json(vars, &sub(path, "vars"))?;
            if vars != p.vars() {
                return Err(inv("dimension", format!("vars = {vars} but {} operator(s) given", p.vars())));
            }
        }
        Ok(p)
    }
}

impl JsonCodec for PureCycle {
    fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "fiber_basis": int_matrix_to_json(&self.fiber().basis_matrix()),
            "k": self.base_dim(),
            "multiplicity": self.multiplicity(),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let n = usize_from_json(field(o, "n", path)?, &sub(path, "n"))?;
        let m = int_matrix_from_json(field(o, "fiber_basis", path)?, &sub(path, "fiber_basis"), Some(n))?;
        let basis = (0..m.rows()).map(|r| LatVec(m.row(r).to_vec())).collect();
        let fiber = Sublattice::new(n, basis)?;
        let k = match o.get("k") {
            Some(k) => usize_from_json(k, &sub(path, "k"))?,
            None => n - fiber.rank(),
        };
        let mult = match o.get("multiplicity") {
            Some(m) => m.as_u64().ok_or_else(|| schema(&sub(path, "multiplicity"), "expected a positive integer"))?,
            None => 1,
        };
        Ok(PureCycle::new(n, fiber, k, mult)?)
    }
}

impl JsonCodec for DualClass {
    fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "n": self.dual_lattice.ambient_rank(),
            "dual_basis": int_matrix_to_json(&self.dual_lattice.basis_matrix()),
            "rank_hint": self.rank_hint,
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let n = usize_from_json(field(o, "n", path)?, &sub(path, "n"))?;
        let m = int_matrix_from_json(field(o, "dual_basis", path)?, &sub(path, "dual_basis"), Some(n))?;
        let basis = (0..m.rows()).map(|r| LatVec(m.row(r).to_vec())).collect();
        let dual = Sublattice::new(n, basis)?;
        let degree = usize_from_json(field(o, "degree", path)?, &sub(path, "degree"))?;
        if degree != 2 * dual.rank() {
            return Err(inv("degree", format!("degree {degree} but dual lattice has rank {}", dual.rank())));
        }
        let rank_hint = match o.get("rank_hint") {
            Some(r) => r.as_u64().filter(|&x| x > 0).ok_or_else(|| schema(&sub(path, "rank_hint"), "expected a positive integer"))?,
            None => 1,
        };
        Ok(DualClass {
            degree,
            dual_lattice: dual,
            rank_hint,
        })
    }
}

impl JsonCodec for HodgeDiamond {
    fn to_json(&self) -> Value {
        json!({ "n": self.n(), "table": self.table() })
    }

    /// `{"n", "table"}`, or the Calabi–Yau shorthand `{"n", "h11", "hn11"}`.
    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let n = usize_from_json(field(o, "n", path)?, &sub(path, "n"))?;
        if let Some(t) = o.get("table") {
            let rows = array(t, &sub(path, "table"))?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let p = idx(&sub(path, "table"), i);
                    array(r, &p)?
                        .iter()
                        .map(|x| x.as_u64().ok_or_else(|| schema(&p, "expected non-negative integers")))
                        .collect::<Result<Vec<u64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(HodgeDiamond::new(n, rows)?);
        }
        let get = |k: &str| -> Result<u64> {
            field(o, k, path)?
                .as_u64()
                .ok_or_else(|| schema(&sub(path, k), "expected a non-negative integer"))
        };
        Ok(HodgeDiamond::calabi_yau(n, get("h11")?, get("hn11")?)?)
    }
}

impl JsonCodec for WeightFiltration {
    fn to_json(&self) -> Value {
        json!({
            "center": self.center,
            "dim": self.dim,
            "lowest": self.lowest,
            "levels": self.levels.iter().map(rat_matrix_to_json).collect::<Vec<_>>(),
        })
    }

    fn from_json_at(v: &Value, path: &str) -> Result<Self> {
        let o = object(v, path)?;
        let center = field(o, "center", path)?
            .as_i64()
            .ok_or_else(|| schema(&sub(path, "center"), "expected an integer"))?;
        let lowest = field(o, "lowest", path)?
            .as_i64()
            .ok_or_else(|| schema(&sub(path, "lowest"), "expected an integer"))?;
        let dim = usize_from_json(field(o, "dim", path)?, &sub(path, "dim"))?;
        let levels = array(field(o, "levels", path)?, &sub(path, "levels"))?
            .iter()
            .enumerate()
            .map(|(i, x)| rat_matrix_from_json(x, &idx(&sub(path, "levels"), i), Some(dim)))
            .collect::<Result<Vec<_>>>()?;
        for (i, w) in levels.windows(2).enumerate() {
            if !w[0].row_space_within(&w[1]) {
                return Err(inv("increasing filtration", format!("level {} is not contained in level {}", i, i + 1)));
            }
        }
        Ok(WeightFiltration {
            center,
            dim,
            lowest,
            levels,
        })
    }
}

/// A value read from an input file, recognised by its keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Lattice(Lattice),
    GWData(GWData),
    PureCycle(PureCycle),
    MukaiVector(MukaiVector),
    PeriodPoint(PeriodPoint),
    ConnectionPresentation(ConnectionPresentation),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Lattice(_) => "lattice",
            Input::GWData(_) => "gw-data",
            Input::PureCycle(_) => "pure-cycle",
            Input::MukaiVector(_) => "mukai-vector",
            Input::PeriodPoint(_) => "period",
            Input::ConnectionPresentation(_) => "connection",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Input::Lattice(x) => x.to_json(),
            Input::GWData(x) => x.to_json(),
            Input::PureCycle(x) => x.to_json(),
            Input::MukaiVector(x) => x.to_json(),
            Input::PeriodPoint(x) => x.to_json(),
            Input::ConnectionPresentation(x) => x.to_json(),
        }
    }
}

/// Detects the kind of a parsed JSON value and validates it.
pub fn input_from_value(v: &Value) -> Result<Input> {
    let o = object(v, "")?;
    let has = |k: &str| o.contains_key(k);
    if has("gram") {
        Ok(Input::Lattice(Lattice::from_json(v)?))
    } else if has("cup") {
        Ok(Input::GWData(GWData::from_json(v)?))
    } else if has("fiber_basis") {
        Ok(Input::PureCycle(PureCycle::from_json(v)?))
    } else if has("alpha") && has("gamma") {
        Ok(Input::MukaiVector(MukaiVector::from_json(v)?))
    } else if has("re") && has("im") {
        Ok(Input::PeriodPoint(PeriodPoint::from_json(v)?))
    } else if has("operators") {
        Ok(Input::ConnectionPresentation(ConnectionPresentation::from_json(v)?))
    } else {
        let keys: Vec<&str> = o.keys().map(String::as_str).collect();
        Err(IoError::UnknownKind(keys.join(", ")))
    }
}

/// Parses UTF-8 JSON text into a typed, validated value.
pub fn parse_input(text: &str) -> Result<Input> {
    input_from_value(&parse_json(text)?)
}
