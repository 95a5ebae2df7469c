use std::collections::BTreeMap;
use std::str::FromStr;

use num::{Signed, Zero};
use serde_json::{json, Value};

use mirrorcalc::avhs::{
    associativity_failure, connection_operator, griffiths_check, residue, topological_mirror_test, validate_phi,
    vhs_isomorphism_check, weight_filtration, ConnectionPresentation, GWData, HodgeDiamond,
};
use mirrorcalc::io::{int_matrix_from_json, int_matrix_to_json, int_to_json, int_vec_to_json, rat_matrix_from_json, rat_matrix_to_json, JsonCodec};
use mirrorcalc::lattice::{isotropic_to_standard, quotient_by_isotropic, smith_normal_form, LatVec, Lattice, Sublattice};
use mirrorcalc::matrix::QMatrix;
use mirrorcalc::mukai::{
    euler_pairing, mirror_hodge_structure, mirror_map_vector, moduli_dimension, mukai_vector, ChernInput, MukaiLattice,
    MukaiVector, PeriodPoint,
};
use mirrorcalc::series::{OperatorSeries, TruncatedSeries};
use mirrorcalc::tduality::{annihilator, leray_filtration_failure, leray_level, t_dual_cycle, DualClass, PureCycle};
use mirrorcalc::Int;

use crate::report::{imatrix_text, qmatrix_text, RunReport};
use crate::{at, load, CliError, InArg, LatticeCmd, MirrortestCmd, MukaiArgs, MukaiCmd, QcohArgs, QcohCmd, Result, ToriCmd};

const DEFAULT_DEGREE: u32 = 4;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_int_list(s: &str, what: &str) -> Result<Vec<Int>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim().replace('−', "-");
            Int::from_str(&t).map_err(|_| usage(format!("--{what}: `{t}` is not an integer")))
        })
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    v.as_object().and_then(|o| o.get(key))
}

// ---------------------------------------------------------------- lattice

fn vec_arg(flag: &Option<String>, file: &Value, key: &str, path: &str, rank: usize) -> Result<LatVec> {
    let v = match (flag, field(file, key)) {
        (Some(s), _) => LatVec(parse_int_list(s, key)?),
        (None, Some(x)) => LatVec::from_json_at(x, key).map_err(at(path))?,
        (None, None) => return Err(usage(format!("missing --{key} (or `{key}` in the input file)"))),
    };
    if v.len() != rank {
        return Err(usage(format!("--{key} has {} entries, lattice rank is {rank}", v.len())));
    }
    Ok(v)
}

/// A lattice file, or an object holding one under `lattice`.
fn load_lattice(r: &mut RunReport, path: &str) -> Result<(Lattice, Value)> {
    let v = load(r, path)?;
    let l = match field(&v, "lattice") {
        Some(inner) => Lattice::from_json(inner),
        None => Lattice::from_json(&v),
    }
    .map_err(at(path))?;
    Ok((l, v))
}

fn sublattice_value(s: &Sublattice) -> (Value, String) {
    let m = s.basis_matrix();
    (s.to_json(), imatrix_text(&m))
}

pub fn lattice(r: &mut RunReport, c: &LatticeCmd) -> Result<()> {
    match c {
        LatticeCmd::Pair(a) => {
            let (l, file) = load_lattice(r, &a.input.input)?;
            let u = vec_arg(&a.u, &file, "u", &a.input.input, l.rank())?;
            let v = vec_arg(&a.v, &file, "v", &a.input.input, l.rank())?;
            let p = l.pair(&u, &v)?;
            r.result("pair", int_to_json(&p), p.to_string());
            r.check("pairing symmetric", l.pair(&v, &u)? == p, None);
        }
        LatticeCmd::Snf(a) => {
            let path = &a.input;
            let file = load(r, path)?;
            let m = match field(&file, "matrix") {
                Some(m) => int_matrix_from_json(m, "matrix", None).map_err(at(path))?,
                None => Lattice::from_json(&file).map_err(at(path))?.gram().clone(),
            };
            let snf = smith_normal_form(&m);
            let diag = snf.diagonal();
            let text = diag.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
            r.result("diagonal", int_vec_to_json(&diag), format!("[{text}]"));
            r.value("rank", json!(snf.rank()));
            let chain = diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
            r.check("divisibility chain", chain, None);
            let recon = &(&snf.u * &m) * &snf.v;
            r.check("d = u·m·v", recon == snf.d, None);
        }
        LatticeCmd::Complement(a) => {
            let (l, file) = load_lattice(r, &a.input.input)?;
            let v = vec_arg(&a.v, &file, "v", &a.input.input, l.rank())?;
            let s = l.orthogonal_complement(&v)?;
            let (val, text) = sublattice_value(&s);
            r.result("complement", val, text);
            r.value("rank", json!(s.rank()));
            let mut orth = true;
            for b in s.basis() {
                orth &= l.pair(b, &v)?.is_zero();
            }
            r.check("orthogonal to v", orth, None);
            r.check("saturated", s.is_saturated(), None);
        }
        LatticeCmd::Quotient(a) => {
            let (l, file) = load_lattice(r, &a.input.input)?;
            let v = vec_arg(&a.v, &file, "v", &a.input.input, l.rank())?;
            let q = quotient_by_isotropic(&l, &v)?;
            r.result("quotient", q.lattice.to_json(), imatrix_text(q.lattice.gram()));
            let lifts: Vec<Vec<Int>> = q.lifts.iter().map(|x| x.0.clone()).collect();
            let lm = mirrorcalc::matrix::IntMatrix::from_rows(lifts, l.rank());
            r.result("lifts", int_matrix_to_json(&lm), imatrix_text(&lm));
            r.check("rank n − 2", q.lattice.rank() + 2 == l.rank(), None);
            if l.is_even() && l.is_unimodular() {
                r.check("even unimodular", q.lattice.is_even() && q.lattice.is_unimodular(), None);
            }
            let reparsed = Lattice::from_json(&q.lattice.to_json()).is_ok();
            r.check("quotient re-validates", reparsed, None);
        }
        LatticeCmd::Standardize(a) => {
            let (l, file) = load_lattice(r, &a.input.input)?;
            let v = vec_arg(&a.v, &file, "v", &a.input.input, l.rank())?;
            let t = vec_arg(&a.t, &file, "t", &a.input.input, l.rank())?;
            let g = isotropic_to_standard(&l, &v, &t, None)?;
            r.result("isometry", int_matrix_to_json(g.matrix()), imatrix_text(g.matrix()));
            let image = g.apply(&v);
            r.check("g(v) = t", image == t, None);
            r.check("gᵀGg = G", g.preserves(&l), None);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- mukai

struct MukaiContext {
    lattice: MukaiLattice,
    named: BTreeMap<String, LatVec>,
    file: Value,
    path: String,
}

fn mukai_context(r: &mut RunReport, a: &MukaiArgs) -> Result<MukaiContext> {
    let (file, path) = match &a.input {
        Some(p) => (load(r, p)?, p.clone()),
        None => (json!({}), String::new()),
    };
    let h2 = match field(&file, "h2") {
        Some(h) => Lattice::from_json_at(h, "h2").map_err(at(&path))?,
        None => Lattice::k3(),
    };
    let lattice = MukaiLattice::new(h2);
    let rank = lattice.h2().rank();
    let mut named = BTreeMap::new();
    if let Some(n) = field(&file, "named") {
        let o = n.as_object().ok_or_else(|| usage("`named` must be an object"))?;
        for (k, v) in o {
            let x = LatVec::from_json_at(v, &format!("named.{k}")).map_err(at(&path))?;
            if x.len() != rank {
                return Err(usage(format!("named vector `{k}` has {} entries, H² has rank {rank}", x.len())));
            }
            named.insert(k.clone(), x);
        }
    }
    Ok(MukaiContext {
        lattice,
        named,
        file,
        path,
    })
}

/// Splits at commas outside brackets.
fn split_top(s: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            out.push(String::new());
        } else {
            out.last_mut().expect("nonempty").push(ch);
        }
    }
    out.into_iter().map(|x| x.trim().to_string()).collect()
}

fn parse_triple(ctx: &MukaiContext, s: &str, flag: &str) -> Result<MukaiVector> {
    let parts = split_top(s);
    if parts.len() != 3 {
        return Err(usage(format!("--{flag}: expected \"alpha,beta,gamma\", got `{s}`")));
    }
    let rank = ctx.lattice.h2().rank();
    let scalar = |t: &str| Int::from_str(&t.replace('−', "-")).map_err(|_| usage(format!("--{flag}: `{t}` is not an integer")));
    let alpha = scalar(&parts[0])?;
    let gamma = scalar(&parts[2])?;
    let b = parts[1].as_str();
    let beta = if b == "0" {
        LatVec::zero(rank)
    } else if b.starts_with('[') {
        let x = LatVec(parse_int_list(b, flag)?);
        if x.len() != rank {
            return Err(usage(format!("--{flag}: beta has {} entries, H² has rank {rank}", x.len())));
        }
        x
    } else {
        let (sign, name) = match b.strip_prefix('-').or_else(|| b.strip_prefix('−')) {
            Some(rest) => (-1, rest),
            None => (1, b),
        };
        let x = ctx
            .named
            .get(name)
            .ok_or_else(|| usage(format!("--{flag}: unknown vector name `{name}` (define it under `named`)")))?;
        x.scaled(&Int::from(sign))
    };
    Ok(MukaiVector::new(alpha, beta, gamma))
}

fn mukai_arg(ctx: &MukaiContext, flag: &Option<String>, key: &str) -> Result<Option<MukaiVector>> {
    if let Some(s) = flag {
        return parse_triple(ctx, s, key).map(Some);
    }
    match field(&ctx.file, key) {
        None => Ok(None),
        Some(Value::String(s)) => parse_triple(ctx, s, key).map(Some),
        Some(v) => MukaiVector::from_json_at(v, key).map(Some).map_err(at(&ctx.path)),
    }
}

fn require_v(ctx: &MukaiContext, a: &MukaiArgs) -> Result<MukaiVector> {
    mukai_arg(ctx, &a.v, "v")?.ok_or_else(|| usage("missing --v (or `v` in the input file)"))
}

pub fn mukai(r: &mut RunReport, c: &MukaiCmd) -> Result<()> {
    match c {
        MukaiCmd::Vec(a) => {
            let ctx = mukai_context(r, a)?;
            let ch = field(&ctx.file, "chern").ok_or_else(|| usage("`mukai vec` needs `chern` in the input file"))?;
            let get = |k: &str| field(ch, k).ok_or_else(|| usage(format!("chern: missing `{k}`")));
            let rank = mirrorcalc::io::int_from_json(get("rank")?, "chern.rank").map_err(at(&ctx.path))?;
            let c1 = LatVec::from_json_at(get("c1")?, "chern.c1").map_err(at(&ctx.path))?;
            let c2 = mirrorcalc::io::int_from_json(get("c2")?, "chern.c2").map_err(at(&ctx.path))?;
            let v = mukai_vector(&ctx.lattice, &ChernInput { rank, c1, c2 })?;
            r.result("mukai vector", v.to_json(), v.to_string());
            let sq = ctx.lattice.pair(&v, &v)?;
            r.value("v²", int_to_json(&sq));
        }
        MukaiCmd::Chi(a) => {
            let ctx = mukai_context(r, a)?;
            let v = require_v(&ctx, a)?;
            let w = mukai_arg(&ctx, &a.w, "w")?.unwrap_or_else(|| v.clone());
            let chi = euler_pairing(&ctx.lattice, &v, &w)?;
            r.result("chi", int_to_json(&chi), chi.to_string());
            r.check("χ(v,w) = χ(w,v)", euler_pairing(&ctx.lattice, &w, &v)? == chi, None);
        }
        MukaiCmd::Dim(a) => {
            let ctx = mukai_context(r, a)?;
            let v = require_v(&ctx, a)?;
            let d = moduli_dimension(&ctx.lattice, &v)?;
            r.result("dimension", int_to_json(&d), d.to_string());
            r.check("dimension = v² + 2", d == ctx.lattice.pair(&v, &v)? + Int::from(2), None);
        }
        MukaiCmd::Mirror(a) => {
            let ctx = mukai_context(r, a)?;
            let v = require_v(&ctx, a)?;
            let g = mirror_map_vector(&ctx.lattice, &v)?;
            r.result("isometry", int_matrix_to_json(g.matrix()), imatrix_text(g.matrix()));
            let image = MukaiVector::from_latvec(&g.apply(&v.to_latvec()));
            r.check("g(v) = (0,0,1)", image == ctx.lattice.point_class(), None);
            r.check("gᵀGg = G", g.preserves(ctx.lattice.lattice()), None);
        }
        MukaiCmd::Hodge(a) => {
            let ctx = mukai_context(r, a)?;
            let v = require_v(&ctx, a)?;
            let p = field(&ctx.file, "period").ok_or_else(|| usage("`mukai hodge` needs `period` in the input file"))?;
            let mut omega = PeriodPoint::from_json_at(p, "period").map_err(at(&ctx.path))?;
            if omega.re.len() == ctx.lattice.h2().rank() {
                omega = omega.embed_h2();
            }
            let (q, w) = mirror_hodge_structure(&ctx.lattice, &omega, &v)?;
            r.result("mirror lattice", q.to_json(), imatrix_text(q.gram()));
            let text = format!(
                "re [{}], im [{}]",
                w.re.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
                w.im.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            );
            r.result("mirror period", w.to_json(), text);
            let rr = q.pair_rational(&w.re, &w.re)?;
            let ii = q.pair_rational(&w.im, &w.im)?;
            let ri = q.pair_rational(&w.re, &w.im)?;
            r.check("Ω′·Ω′ = 0", rr == ii && ri.is_zero(), None);
            r.check("Ω′·Ω̄′ > 0", (rr + ii).is_positive(), None);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- qcoh

fn degree(a: &QcohArgs, file: &Value) -> Result<u32> {
    if let Some(d) = a.degree {
        return Ok(d);
    }
    match field(file, "cutoff") {
        None => Ok(DEFAULT_DEGREE),
        Some(v) => v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| usage("`cutoff` must be a non-negative integer")),
    }
}

enum Source {
    Gw(GWData),
    Presentation(ConnectionPresentation),
}

fn source_from(v: &Value, path: &str, key: &str) -> Result<Source> {
    if field(v, "operators").is_some() {
        Ok(Source::Presentation(ConnectionPresentation::from_json_at(v, key).map_err(at(path))?))
    } else {
        Ok(Source::Gw(GWData::from_json_at(v, key).map_err(at(path))?))
    }
}

fn presentation(s: Source, cutoff: u32) -> Result<ConnectionPresentation> {
    match s {
        Source::Presentation(p) => Ok(p),
        Source::Gw(g) => {
            let rep = validate_phi(&g);
            if let Some(v) = rep.violations.first() {
                return Err(usage(format!("invalid Gromov–Witten data: {v}")));
            }
            Ok(ConnectionPresentation::a_model(&g, cutoff)?)
        }
    }
}

fn load_gw(r: &mut RunReport, a: &QcohArgs) -> Result<(GWData, u32)> {
    let path = &a.input.input;
    let file = load(r, path)?;
    let d = degree(a, &file)?;
    Ok((GWData::from_json(&file).map_err(at(path))?, d))
}

fn require_valid(r: &mut RunReport, g: &GWData) -> Result<()> {
    let rep = validate_phi(g);
    r.check("Φ axioms", rep.is_valid(), rep.violations.first().cloned());
    match rep.violations.first() {
        None => Ok(()),
        Some(v) => Err(usage(format!("invalid Gromov–Witten data: {v}"))),
    }
}

fn monomial_text(m: &[u32]) -> String {
    format!("q^({})", m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn qcoh(r: &mut RunReport, c: &QcohCmd) -> Result<()> {
    match c {
        QcohCmd::Validate(a) => {
            let (g, _) = load_gw(r, a)?;
            let rep = validate_phi(&g);
            r.value("valid", json!(rep.is_valid()));
            r.result(
                "violations",
                json!(rep.violations),
                if rep.violations.is_empty() { "none".to_string() } else { rep.violations.join("; ") },
            );
            if let Some(v) = rep.violations.first() {
                r.negative(format!("invalid Gromov–Witten data: {v}"));
            }
        }
        QcohCmd::Flat(a) => {
            let path = &a.input.input;
            let file = load(r, path)?;
            let d = degree(a, &file)?;
            let src = source_from(&file, path, "")?;
            if let Source::Gw(g) = &src {
                require_valid(r, g)?;
            }
            let p = presentation(src, d)?;
            r.value("degree", json!(d));
            match p.flatness_failure() {
                None => r.value("flat", json!(true)),
                Some(f) => {
                    r.value("flat", json!(false));
                    let what = match f.part {
                        "commutator" => format!("[N_{}, N_{}]", f.i + 1, f.j + 1),
                        _ => format!("θ_{} N_{} − θ_{} N_{}", f.i + 1, f.j + 1, f.j + 1, f.i + 1),
                    };
                    let text = format!("{} {what} at {}", f.part, monomial_text(&f.monomial));
                    r.result(
                        "first failure",
                        json!({ "part": f.part, "i": f.i + 1, "j": f.j + 1, "monomial": f.monomial }),
                        text.clone(),
                    );
                    r.negative(format!("connection is not flat: {text} is nonzero"));
                }
            }
        }
        QcohCmd::Assoc(a) => {
            let (g, d) = load_gw(r, a)?;
            require_valid(r, &g)?;
            r.value("degree", json!(d));
            match associativity_failure(&g, d)? {
                None => r.value("associative", json!(true)),
                Some(f) => {
                    r.value("associative", json!(false));
                    let labels = g.space().labels();
                    let text = format!("Q_{0} Q_{1} ≠ Q_({0}∗{1}) at {2}", labels[f.a], labels[f.b], monomial_text(&f.monomial));
                    r.result(
                        "first failure",
                        json!({ "a": f.a, "b": f.b, "monomial": f.monomial }),
                        text.clone(),
                    );
                    r.negative(format!("quantum product is not associative: {text}"));
                }
            }
        }
        QcohCmd::Residues(a) => {
            let (g, d) = load_gw(r, a)?;
            require_valid(r, &g)?;
            let mut ok = true;
            for j in 0..g.framing_rank() {
                let res = residue(&g, j)?;
                let at0 = connection_operator(&g, j, d)?.at_zero();
                ok &= res == at0;
                r.result(&format!("N_{}(0)", j + 1), rat_matrix_to_json(&at0), qmatrix_text(&at0));
            }
            r.check("N_j(0) = ad(e^j)", ok, None);
        }
        QcohCmd::Weights(w) => {
            let a = &w.qcoh;
            let path = &a.input.input;
            let file = load(r, path)?;
            let (n, center) = match field(&file, "nilpotent") {
                Some(m) => {
                    let m = rat_matrix_from_json(m, "nilpotent", None).map_err(at(path))?;
                    let c = w.center.or_else(|| field(&file, "center").and_then(Value::as_i64)).unwrap_or(0);
                    (m, c)
                }
                None => {
                    let g = GWData::from_json(&file).map_err(at(path))?;
                    let s = g.space();
                    let r_ = g.framing_rank();
                    let n = match w.j {
                        Some(j) if j == 0 || j > r_ => return Err(usage(format!("--j must lie in 1..={r_}"))),
                        Some(j) => residue(&g, j - 1)?,
                        None => {
                            let mut acc = QMatrix::zeros(s.dim(), s.dim());
                            for j in 0..r_ {
                                acc = &acc + &residue(&g, j)?;
                            }
                            acc
                        }
                    };
                    (n, w.center.unwrap_or(s.n() as i64))
                }
            };
            let wf = weight_filtration(&n, center)?;
            r.result("filtration", wf.to_json(), format!("center {center}, weights {}..{}", wf.lowest, wf.highest()));
            let mut dims = Vec::new();
            for k in wf.lowest..=wf.highest() {
                let lvl = wf.level(k);
                r.result(&format!("W_{k}"), rat_matrix_to_json(&lvl), format!("dim {}{}", lvl.rows(), qmatrix_text(&lvl)));
                dims.push(json!([k, wf.graded_dim(k)]));
            }
            let text = dims.iter().map(|x| format!("{}:{}", x[0], x[1])).collect::<Vec<_>>().join(" ");
            r.result("graded dims", Value::Array(dims), text);
            let v = wf.verify(&n);
            r.check("N·W_k ⊆ W_{k−2} and hard Lefschetz", v.is_ok(), v.err());
        }
        QcohCmd::Griffiths(a) => {
            let path = &a.input.input;
            let file = load(r, path)?;
            let d = degree(a, &file)?;
            let p = presentation(source_from(&file, path, "")?, d)?;
            let rep = griffiths_check(&p, d);
            r.value("transversal", json!(rep.transversal));
            if let Some(reason) = rep.reason {
                r.value("reason", json!(reason));
                r.negative(format!("Griffiths transversality fails: {reason}"));
            }
        }
        QcohCmd::Compare(a) => {
            let path = &a.input.input;
            let file = load(r, path)?;
            let d = degree(a, &file)?;
            let get = |k: &str| field(&file, k).ok_or_else(|| usage(format!("compare input needs `{k}`")));
            let pa = presentation(source_from(get("a")?, path, "a")?, d)?;
            let pb = presentation(source_from(get("b")?, path, "b")?, d)?;
            let (dim, vars) = (pa.dim(), pa.vars());
            let gauge = match field(&file, "gauge") {
                Some(gv) => OperatorSeries::from_json_at(gv, "gauge").map_err(at(path))?,
                None => OperatorSeries::identity(vars, d, dim),
            };
            let coord: Vec<TruncatedSeries> = match field(&file, "coord_map") {
                Some(Value::Array(xs)) => xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| TruncatedSeries::from_json_at(x, &format!("coord_map[{i}]")))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(at(path))?,
                Some(_) => return Err(usage("`coord_map` must be an array of series")),
                None => (0..vars).map(|i| TruncatedSeries::variable(vars, d, i)).collect(),
            };
            let rep = vhs_isomorphism_check(&pa, &pb, &gauge, &coord, d)?;
            r.value("isomorphic", json!(rep.isomorphic));
            r.value("no gauge exists", json!(rep.no_gauge_exists));
            r.value("checked degree", json!(rep.checked_degree));
            if let Some(reason) = rep.reason {
                r.value("reason", json!(reason));
                r.negative(format!("not isomorphic: {reason}"));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- tori

fn dual_text(d: &DualClass) -> String {
    format!("degree {}, rank {}, lattice{}", d.degree, d.rank_hint, imatrix_text(&d.dual_lattice.basis_matrix()))
}

pub fn tori(r: &mut RunReport, c: &ToriCmd) -> Result<()> {
    match c {
        ToriCmd::Ann(InArg { input: path }) => {
            let file = load(r, path)?;
            let s = Sublattice::from_json(&file).map_err(at(path))?;
            let ann = annihilator(&s)?;
            let (val, text) = sublattice_value(&ann);
            r.result("annihilator", val, text);
            r.value("rank", json!(ann.rank()));
            r.check("rank complementarity", ann.rank() + s.rank() == s.ambient_rank(), None);
            r.check("Ann(Ann(S)) = S", annihilator(&ann)?.same_lattice(&s), None);
        }
        ToriCmd::Dual(InArg { input: path }) => {
            let file = load(r, path)?;
            let w = PureCycle::from_json(&file).map_err(at(path))?;
            let d = t_dual_cycle(&w)?;
            r.result("dual class", d.to_json(), dual_text(&d));
            r.value("leray level", json!(leray_level(&w)));
            r.check("degree ≤ 2·level", d.degree <= 2 * leray_level(&w), None);
        }
        ToriCmd::Leray(InArg { input: path }) => {
            let file = load(r, path)?;
            let cycles: Vec<PureCycle> = match field(&file, "cycles") {
                Some(Value::Array(xs)) => xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| PureCycle::from_json_at(x, &format!("cycles[{i}]")))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(at(path))?,
                Some(_) => return Err(usage("`cycles` must be an array")),
                None => vec![PureCycle::from_json(&file).map_err(at(path))?],
            };
            let images: Vec<DualClass> = match field(&file, "images") {
                Some(Value::Array(xs)) => xs
                    .iter()
                    .enumerate()
                    .map(|(i, x)| DualClass::from_json_at(x, &format!("images[{i}]")))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(at(path))?,
                Some(_) => return Err(usage("`images` must be an array")),
                None => cycles.iter().map(t_dual_cycle).collect::<std::result::Result<_, _>>()?,
            };
            let levels: Vec<usize> = cycles.iter().map(leray_level).collect();
            r.value("levels", json!(levels));
            r.value("degrees", json!(images.iter().map(|d| d.degree).collect::<Vec<_>>()));
            match leray_filtration_failure(&cycles, &images)? {
                None => r.value("filtered", json!(true)),
                Some(i) => {
                    r.value("filtered", json!(false));
                    r.negative(format!(
                        "cycle {i} has Leray level {} but its image has degree {}",
                        levels[i], images[i].degree
                    ));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- mirrortest

pub fn mirrortest(r: &mut RunReport, c: &MirrortestCmd) -> Result<()> {
    match c {
        MirrortestCmd::HodgeNumbers(InArg { input: path }) => {
            let file = load(r, path)?;
            let get = |k: &str| field(&file, k).ok_or_else(|| usage(format!("input needs `{k}`")));
            let x = HodgeDiamond::from_json_at(get("x")?, "x").map_err(at(path))?;
            let y = HodgeDiamond::from_json_at(get("y")?, "y").map_err(at(path))?;
            let ok = topological_mirror_test(&x, &y)?;
            r.value("mirror", json!(ok));
            if !ok {
                let n = x.n();
                let mut first = None;
                'outer: for p in 0..=n {
                    for q in 0..=n {
                        if x.h(p, q) != y.h(n - p, q) {
                            first = Some((p, q));
                            break 'outer;
                        }
                    }
                }
                let (p, q) = first.unwrap_or((0, 0));
                r.negative(format!(
                    "h^{{{p},{q}}}(X) = {} but h^{{{},{q}}}(Y) = {}",
                    x.h(p, q),
                    n - p,
                    y.h(n - p, q)
                ));
            }
        }
    }
    Ok(())
}
