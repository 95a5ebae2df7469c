//! The logarithmic connection `2πi·∇`, flatness, Griffiths transversality
//! and gauge comparison of presented connections.

use num::Zero;

use super::graded::GradedSpace;
use super::gw::{gamma_unchecked, validate_phi, GWData};
use super::{AvhsError, Result};
use crate::matrix::QMatrix;
use crate::series::{Monomial, OperatorSeries, TruncatedSeries};
use crate::Rat;

/// `N_j(q) = ad(e^j) + Σ_η e^j(η)·q^η/(1−q^η)·Γ_η` (zero-based `j`).
pub fn connection_operator(g: &GWData, j: usize, cutoff: u32) -> Result<OperatorSeries> {
    let rep = validate_phi(g);
    if let Some(v) = rep.violations.first() {
        return Err(AvhsError::InvalidPhi(v.clone()));
    }
    operator_unchecked(g, j, cutoff)
}

fn operator_unchecked(g: &GWData, j: usize, cutoff: u32) -> Result<OperatorSeries> {
    let r = g.framing_rank();
    if j >= r {
        return Err(AvhsError::OutOfRange { index: j, size: r });
    }
    let s = g.space();
    let mut out = OperatorSeries::constant(r, cutoff, s.ad_basis(s.framing_index(j)));
    for eta in g.classes().keys() {
        if eta.exponents()[j] == 0 {
            continue;
        }
        let gamma = gamma_unchecked(g, eta)?;
        let f = eta.cover_series(cutoff).scale(&eta.pairing(j));
        out = out.add(&OperatorSeries::from_series_times(&f, &gamma));
    }
    Ok(out)
}

/// All `N_j`, `j = 0..r`.
pub fn connection_operators(g: &GWData, cutoff: u32) -> Result<Vec<OperatorSeries>> {
    let rep = validate_phi(g);
    if let Some(v) = rep.violations.first() {
        return Err(AvhsError::InvalidPhi(v.clone()));
    }
    (0..g.framing_rank()).map(|j| operator_unchecked(g, j, cutoff)).collect()
}

/// `ad(e^j)`, computed from the classical ring alone.
pub fn residue(g: &GWData, j: usize) -> Result<QMatrix> {
    let r = g.framing_rank();
    if j >= r {
        return Err(AvhsError::OutOfRange { index: j, size: r });
    }
    let s = g.space();
    Ok(s.ad_basis(s.framing_index(j)))
}

/// The first nonvanishing curvature component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessFailure {
    pub i: usize,
    pub j: usize,
    /// `"derivative"` for `θ_i N_j − θ_j N_i`, `"commutator"` for `[N_i, N_j]`.
    pub part: &'static str,
    pub monomial: Monomial,
}

/// Curvature of `d + Σ_j dlog q_j ⊗ N_j/(2πi)`. Because `2πi` is
/// transcendental and the data rational, flatness means that both
/// `θ_i N_j − θ_j N_i` and `[N_i, N_j]` vanish.
pub fn flatness_failure(ops: &[OperatorSeries]) -> Option<FlatnessFailure> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let d = ops[j].theta(i).sub(&ops[i].theta(j));
            if let Some(m) = d.leading_monomial() {
                return Some(FlatnessFailure {
                    i,
                    j,
                    part: "derivative",
                    monomial: m.clone(),
                });
            }
            let c = ops[i].commutator(&ops[j]);
            if let Some(m) = c.leading_monomial() {
                return Some(FlatnessFailure {
                    i,
                    j,
                    part: "commutator",
                    monomial: m.clone(),
                });
            }
        }
    }
    None
}

pub fn flatness_check(g: &GWData, cutoff: u32) -> Result<bool> {
    Ok(flatness_failure(&connection_operators(g, cutoff)?).is_none())
}

/// Operators `N_j(q)` on `ℚ^dim` with a decreasing filtration `F^0 ⊇ F^1 ⊇ …`
/// and optionally a distinguished subspace on which comparisons happen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionPresentation {
    dim: usize,
    vars: usize,
    cutoff: u32,
    ops: Vec<OperatorSeries>,
    filtration: Vec<QMatrix>,
    sub: Option<QMatrix>,
}

impl ConnectionPresentation {
    pub fn new(
        dim: usize,
        ops: Vec<OperatorSeries>,
        filtration: Vec<QMatrix>,
        sub: Option<QMatrix>,
    ) -> Result<Self> {
        let vars = ops.len();
        let cutoff = ops.first().map_or(0, |o| o.cutoff());
        for (j, o) in ops.iter().enumerate() {
            if o.rows() != dim || o.cols() != dim {
                return Err(AvhsError::Shape(format!("operator {j} is {}×{}, expected {dim}×{dim}", o.rows(), o.cols())));
            }
            if o.vars() != vars {
                return Err(AvhsError::Shape(format!("operator {j} has {} variables, expected {vars}", o.vars())));
            }
            if o.cutoff() != cutoff {
                return Err(AvhsError::Shape(format!("operator {j} has cutoff {}, expected {cutoff}", o.cutoff())));
            }
        }
        for (p, f) in filtration.iter().enumerate() {
            if f.cols() != dim {
                return Err(AvhsError::Shape(format!("filtration level {p} has {} columns, expected {dim}", f.cols())));
            }
        }
        if let Some(v) = &sub {
            if v.cols() != dim {
                return Err(AvhsError::Shape(format!("subspace has {} columns, expected {dim}", v.cols())));
            }
        }
        Ok(ConnectionPresentation {
            dim,
            vars,
            cutoff,
            ops,
            filtration,
            sub,
        })
    }

    /// The A-model presentation: `N_j` from the data and `E^p` as filtration.
    pub fn a_model(g: &GWData, cutoff: u32) -> Result<Self> {
        let s: &GradedSpace = g.space();
        let ops = connection_operators(g, cutoff)?;
        let vars = ops.len();
        let mut p = ConnectionPresentation::new(s.dim(), ops, s.hodge_filtration(), None)?;
        p.vars = vars;
        p.cutoff = cutoff;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn operators(&self) -> &[OperatorSeries] {
        &self.ops
    }

    pub fn filtration(&self) -> &[QMatrix] {
        &self.filtration
    }

    pub fn sub(&self) -> Option<&QMatrix> {
        self.sub.as_ref()
    }

    pub fn with_filtration(mut self, filtration: Vec<QMatrix>) -> Result<Self> {
        for f in &filtration {
            if f.cols() != self.dim {
                return Err(AvhsError::Shape("filtration level has wrong width".into()));
            }
        }
        self.filtration = filtration;
        Ok(self)
    }

    pub fn with_sub(mut self, sub: Option<QMatrix>) -> Self {
        self.sub = sub;
        self
    }

    pub fn with_operators(mut self, ops: Vec<OperatorSeries>) -> Result<Self> {
        let p = ConnectionPresentation::new(self.dim, ops, self.filtration.clone(), self.sub.take())?;
        Ok(p)
    }

    /// Residues `N_j(0)`.
    pub fn residues(&self) -> Vec<QMatrix> {
        self.ops.iter().map(|o| o.at_zero()).collect()
    }

    pub fn flatness_failure(&self) -> Option<FlatnessFailure> {
        flatness_failure(&self.ops)
    }
}

/// Verdict of [`griffiths_check`], with the first violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GriffithsReport {
    pub transversal: bool,
    pub reason: Option<String>,
}

/// `N_j(q)·F^p ⊆ F^{p−1}` coefficientwise to degree `cutoff`; levels that do
/// not nest are reported as a failure.
pub fn griffiths_check(p: &ConnectionPresentation, cutoff: u32) -> GriffithsReport {
    let fail = |reason: String| GriffithsReport {
        transversal: false,
        reason: Some(reason),
    };
    let f = &p.filtration;
    for k in 1..f.len() {
        if !f[k].row_space_within(&f[k - 1]) {
            return fail(format!("F^{k} ⊄ F^{}", k - 1));
        }
    }
    for (j, op) in p.ops.iter().enumerate() {
        for (m, coeff) in op.terms() {
            if crate::series::total_degree(m) > cutoff {
                continue;
            }
            for k in 1..f.len() {
                if f[k].rows() == 0 {
                    continue;
                }
                let img = (coeff * &f[k].transpose()).transpose();
                if !img.row_space_within(&f[k - 1]) {
                    return fail(format!("N_{} at q^{:?} maps F^{k} outside F^{}", j + 1, m, k - 1));
                }
            }
        }
    }
    GriffithsReport {
        transversal: true,
        reason: None,
    }
}

/// Verdict of [`vhs_isomorphism_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VhsReport {
    pub isomorphic: bool,
    pub reason: Option<String>,
    /// Set when residues are not conjugate, so that no gauge at all works.
    pub no_gauge_exists: bool,
    /// Total degree up to which the comparison was carried out.
    pub checked_degree: u32,
}

/// Split `φ_i = q_{σ(i)}·u_i`; `σ` must be a permutation and `u_i(0) ≠ 0`.
fn split_coordinate_map(phi: &[TruncatedSeries], vars: usize) -> Result<(Vec<usize>, Vec<TruncatedSeries>, u32)> {
    if phi.len() != vars {
        return Err(AvhsError::CoordinateMap(format!("{} component(s) for {vars} variable(s)", phi.len())));
    }
    let mut sigma = Vec::new();
    let mut units = Vec::new();
    let cutoff = phi.first().map_or(0, |s| s.cutoff());
    for (i, s) in phi.iter().enumerate() {
        if s.vars() != vars {
            return Err(AvhsError::CoordinateMap(format!("component {i} has {} variables", s.vars())));
        }
        if !s.constant_term().is_zero() {
            return Err(AvhsError::CoordinateMap(format!("component {i} has a nonzero constant term")));
        }
        let linear: Vec<usize> = (0..vars)
            .filter(|&k| {
                let mut m = vec![0; vars];
                m[k] = 1;
                !s.coeff(&m).is_zero()
            })
            .collect();
        if linear.len() != 1 {
            return Err(AvhsError::CoordinateMap(format!(
                "component {i} must be q_k times a unit (logarithmic coordinates)"
            )));
        }
        let k = linear[0];
        let mut u = TruncatedSeries::zero(vars, s.cutoff().saturating_sub(1));
        for (m, c) in s.terms() {
            if m[k] == 0 {
                return Err(AvhsError::CoordinateMap(format!("component {i} is not divisible by q_{}", k + 1)));
            }
            let mut mm = m.clone();
            mm[k] -= 1;
            u.add_term(mm, c.clone());
        }
        sigma.push(k);
        units.push(u);
    }
    let mut seen = sigma.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != vars {
        return Err(AvhsError::CoordinateMap("the leading variables do not form a permutation".into()));
    }
    Ok((sigma, units, cutoff))
}

/// Matrix of `m` restricted to the invariant subspace spanned by the rows
/// of `v`, in that basis; `None` if the subspace is not invariant.
fn restrict(m: &QMatrix, v: &QMatrix) -> Option<QMatrix> {
    let k = v.rows();
    let mut out = QMatrix::zeros(k, k);
    for r in 0..k {
        let img = m.mul_vec(v.row(r));
        let coeffs = v.solve_left(&img)?;
        for (c, x) in coeffs.into_iter().enumerate() {
            out[(c, r)] = x;
        }
    }
    Some(out)
}

fn rank_profile(m: &QMatrix) -> Vec<usize> {
    (1..=m.rows()).map(|k| m.pow(k).rank()).collect()
}

fn power_traces(m: &QMatrix) -> Vec<Rat> {
    (1..=m.rows())
        .map(|k| {
            let p = m.pow(k);
            (0..m.rows()).fold(Rat::zero(), |acc, i| acc + &p[(i, i)])
        })
        .collect()
}

/// Whether `gauge` identifies `pa` with the pullback of `pb` along
/// `coord_map` to total degree `cutoff`.
///
/// `coord_map[i]` expresses the `i`-th coordinate of `pb` in the coordinates
/// of `pa` and must have the form `q_{σ(i)}·u_i` with `u_i(0) ≠ 0`. The
/// pulled-back operators are `N′_k = Σ_i N^B_i(φ)·(δ_{k,σ(i)} + θ_k u_i/u_i)`.
/// A rational gauge must satisfy `θ_k g = 0` and `N′_k g = g N^A_k`
/// separately, and must carry each filtration level (intersected with the
/// distinguished subspaces, when given) onto the corresponding one.
pub fn vhs_isomorphism_check(
    pa: &ConnectionPresentation,
    pb: &ConnectionPresentation,
    gauge: &OperatorSeries,
    coord_map: &[TruncatedSeries],
    cutoff: u32,
) -> Result<VhsReport> {
    if pa.dim != pb.dim || pa.vars != pb.vars {
        return Err(AvhsError::Shape(format!(
            "presentations differ in shape: {}×{} vs {}×{}",
            pa.dim, pa.vars, pb.dim, pb.vars
        )));
    }
    let (dim, vars) = (pa.dim, pa.vars);
    if gauge.rows() != dim || gauge.cols() != dim || gauge.vars() != vars {
        return Err(AvhsError::Shape("gauge shape does not match the presentations".into()));
    }
    let g0 = gauge.at_zero();
    if g0.inverse().is_none() {
        return Err(AvhsError::SingularGauge);
    }
    let (sigma, units, phi_cutoff) = split_coordinate_map(coord_map, vars)?;
    let trivial_units = units.iter().all(|u| u.terms().keys().all(|m| m.iter().all(|&e| e == 0)));
    let mut d = cutoff.min(pa.cutoff).min(pb.cutoff).min(gauge.cutoff());
    if !trivial_units {
        d = d.min(phi_cutoff.saturating_sub(1));
    }
    let mut report = VhsReport {
        isomorphic: false,
        reason: None,
        no_gauge_exists: false,
        checked_degree: d,
    };
    let fail = |mut r: VhsReport, reason: String| {
        r.reason = Some(reason);
        Ok(r)
    };

    // pull back pb along φ
    let phi: Vec<TruncatedSeries> = coord_map.iter().map(|s| s.truncate(d)).collect();
    let units: Vec<TruncatedSeries> = units.iter().map(|u| u.truncate(d)).collect();
    let pulled: Vec<OperatorSeries> = pb
        .ops
        .iter()
        .map(|o| restrict_cutoff(o, d).compose(&phi))
        .collect();
    let mut dlog = vec![vec![TruncatedSeries::zero(vars, d); vars]; vars];
    for i in 0..vars {
        let inv = units[i].inverse().ok_or_else(|| {
            AvhsError::CoordinateMap(format!("component {} has a non-invertible unit part", i + 1))
        })?;
        for k in 0..vars {
            let mut s = units[i].theta(k).mul(&inv);
            if sigma[i] == k {
                s = s.add(&TruncatedSeries::one(vars, d));
            }
            dlog[i][k] = s;
        }
    }
    let nprime: Vec<OperatorSeries> = (0..vars)
        .map(|k| {
            (0..vars).fold(OperatorSeries::zero(vars, d, dim, dim), |acc, i| {
                acc.add(&pulled[i].scale_series(&dlog[i][k]))
            })
        })
        .collect();
    let na: Vec<OperatorSeries> = pa.ops.iter().map(|o| restrict_cutoff(o, d)).collect();

    let va = pa.sub.clone().unwrap_or_else(|| QMatrix::identity(dim));
    let vb = pb.sub.clone().unwrap_or_else(|| QMatrix::identity(dim));

    // residues must be conjugate through g0; compare invariants first
    for k in 0..vars {
        let ra = restrict(&na[k].at_zero(), &va);
        let rb = restrict(&nprime[k].at_zero(), &vb);
        if let (Some(ra), Some(rb)) = (ra, rb) {
            if rank_profile(&ra) != rank_profile(&rb) || power_traces(&ra) != power_traces(&rb) {
                report.no_gauge_exists = true;
                return fail(report, format!("residues in direction {} are not conjugate", k + 1));
            }
        }
    }

    let g = restrict_cutoff(gauge, d);
    for k in 0..vars {
        if let Some(m) = g.theta(k).leading_monomial() {
            return fail(report, format!("gauge is not constant: θ_{} g ≠ 0 at q^{:?}", k + 1, m));
        }
    }
    for (name, ops, v) in [("A", &na, &va), ("B", &nprime, &vb)] {
        for (k, o) in ops.iter().enumerate() {
            for (m, c) in o.terms() {
                if restrict(c, v).is_none() {
                    return fail(report, format!("subspace of {name} is not invariant under N_{} at q^{:?}", k + 1, m));
                }
            }
        }
    }
    let gva = (&g0 * &va.transpose()).transpose();
    if !(gva.row_space_within(&vb) && vb.row_space_within(&gva)) {
        return fail(report, "gauge does not map the subspace of A onto that of B".into());
    }
    for k in 0..vars {
        let diff = nprime[k].mul(&g).sub(&g.mul(&na[k]));
        for (m, c) in diff.terms() {
            let on_sub = (c * &va.transpose()).transpose();
            if !on_sub.is_zero() {
                return fail(report, format!("N′_{0} g ≠ g N^A_{0} at q^{1:?}", k + 1, m));
            }
        }
    }
    if pa.filtration.len() != pb.filtration.len() {
        return fail(report, "filtrations have different lengths".into());
    }
    for (p, (fa, fb)) in pa.filtration.iter().zip(&pb.filtration).enumerate() {
        let fa = crate::matrix::intersect_row_spaces(fa, &va);
        let fb = crate::matrix::intersect_row_spaces(fb, &vb);
        let img = if fa.rows() == 0 {
            fa.clone()
        } else {
            (&g0 * &fa.transpose()).transpose()
        };
        let same = img.row_space_within(&fb) && fb.row_space_within(&img);
        if !same {
            return fail(report, format!("gauge does not carry F^{p} of A onto F^{p} of B"));
        }
    }
    report.isomorphic = true;
    Ok(report)
}

fn restrict_cutoff(o: &OperatorSeries, d: u32) -> OperatorSeries {
    let mut out = OperatorSeries::zero(o.vars(), d, o.rows(), o.cols());
    for (m, c) in o.terms() {
        out.add_term(m.clone(), c.clone());
    }
    out
}
