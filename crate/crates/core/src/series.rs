//! Truncated multivariate power series with rational coefficients, and
//! the matrix-valued variant used for connection operators.
//!
//! A series lives in `ℚ[q₁,…,q_r] / (monomials of total degree > D)`.
//! Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::matrix::QMatrix;
use crate::Rat;

/// Exponent vector of a monomial `q₁^a₁ ⋯ q_r^a_r`.
pub type Monomial = Vec<u32>;

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn add_monomials(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All monomials in `vars` variables of total degree `≤ cutoff`, graded
/// then lexicographic.
pub fn monomials_up_to(vars: usize, cutoff: u32) -> Vec<Monomial> {
    fn rec(vars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == vars {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(vars, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=cutoff {
        rec(vars, d, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    vars: usize,
    cutoff: u32,
    terms: BTreeMap<Monomial, Rat>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*q{}", i + 1)?,
                    _ => write!(f, "*q{}^{}", i + 1, e)?,
                }
            }
        }
        write!(f, " + O(deg {})", self.cutoff + 1)
    }
}

impl TruncatedSeries {
    pub fn zero(vars: usize, cutoff: u32) -> Self {
        TruncatedSeries {
            vars,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, cutoff: u32, c: Rat) -> Self {
        let mut s = TruncatedSeries::zero(vars, cutoff);
        s.add_term(vec![0; vars], c);
        s
    }

    pub fn one(vars: usize, cutoff: u32) -> Self {
        TruncatedSeries::constant(vars, cutoff, Rat::one())
    }

    /// The coordinate `q_i` (zero-based `i`).
    pub fn variable(vars: usize, cutoff: u32, i: usize) -> Self {
        let mut m = vec![0; vars];
        m[i] = 1;
        TruncatedSeries::monomial(vars, cutoff, m, Rat::one())
    }

    pub fn monomial(vars: usize, cutoff: u32, m: Monomial, c: Rat) -> Self {
        let mut s = TruncatedSeries::zero(vars, cutoff);
        s.add_term(m, c);
        s
    }

    /// Builds from `(monomial, coefficient)` pairs; terms above the cutoff
    /// are dropped, repeated monomials are summed.
    pub fn from_terms(vars: usize, cutoff: u32, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut s = TruncatedSeries::zero(vars, cutoff);
        for (m, c) in terms {
            assert_eq!(m.len(), vars, "monomial arity");
            s.add_term(m, c);
        }
        s
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rat> {
        &self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.vars])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if total_degree(&m) > self.cutoff || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            // re-lookup to remove
            let key: Vec<Monomial> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "series in different variable sets");
        assert_eq!(self.cutoff, other.cutoff, "series with different cutoffs");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = TruncatedSeries::zero(self.vars, self.cutoff);
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let mut out = TruncatedSeries::zero(self.vars, self.cutoff);
        for (ma, ca) in &self.terms {
            let da = total_degree(ma);
            for (mb, cb) in &other.terms {
                if da + total_degree(mb) > self.cutoff {
                    continue;
                }
                out.add_term(add_monomials(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = TruncatedSeries::one(self.vars, self.cutoff);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The logarithmic derivative `q_i ∂/∂q_i`.
    pub fn theta(&self, i: usize) -> Self {
        let mut out = TruncatedSeries::zero(self.vars, self.cutoff);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                out.terms.insert(m.clone(), c * Rat::from_integer(m[i].into()));
            }
        }
        out
    }

    /// Multiplicative inverse, if the constant term is nonzero.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        // 1/(c0(1 - x)) = (1/c0) Σ x^k with x = 1 - s/c0, nilpotent mod degree D+1
        let inv0 = c0.recip();
        let one = TruncatedSeries::one(self.vars, self.cutoff);
        let x = one.sub(&self.scale(&inv0));
        let mut acc = one.clone();
        let mut p = one;
        for _ in 0..self.cutoff {
            p = p.mul(&x);
            acc = acc.add(&p);
        }
        Some(acc.scale(&inv0))
    }

    /// The same series read at a lower cutoff.
    pub fn truncate(&self, cutoff: u32) -> Self {
        TruncatedSeries::from_terms(self.vars, cutoff, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    /// `q^η / (1 − q^η) = Σ_{k≥1} q^{kη}`; `eta` must be nonzero.
    pub fn geometric_tail(vars: usize, cutoff: u32, eta: &[u32]) -> Self {
        let d = total_degree(eta);
        assert!(d > 0, "q^η/(1-q^η) needs a nonconstant monomial");
        let mut s = TruncatedSeries::zero(vars, cutoff);
        let mut k = 1;
        while k * d <= cutoff {
            s.add_term(eta.iter().map(|e| e * k).collect(), Rat::one());
            k += 1;
        }
        s
    }

    /// Substitutes `q_i ↦ subs[i]`; every substituted series must have zero
    /// constant term so the result is well defined at the target cutoff.
    pub fn compose(&self, subs: &[TruncatedSeries]) -> Self {
        assert_eq!(subs.len(), self.vars);
        let (tv, tc) = (subs[0].vars, subs[0].cutoff);
        let powers = PowerTable::new(subs, self.cutoff);
        let mut out = TruncatedSeries::zero(tv, tc);
        for (m, c) in &self.terms {
            out = out.add(&powers.monomial(m).scale(c));
        }
        out
    }
}

/// Cached powers `subs[i]^k` for composition.
struct PowerTable {
    pows: Vec<Vec<TruncatedSeries>>,
}

impl PowerTable {
    fn new(subs: &[TruncatedSeries], max: u32) -> Self {
        let pows = subs
            .iter()
            .map(|s| {
                debug_assert!(s.constant_term().is_zero());
                let mut v = vec![TruncatedSeries::one(s.vars, s.cutoff)];
                for k in 1..=max as usize {
                    let next = v[k - 1].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        PowerTable { pows }
    }

    fn monomial(&self, m: &[u32]) -> TruncatedSeries {
        let mut acc = self.pows[0][0].clone();
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.pows[i][e as usize]);
            }
        }
        acc
    }
}

/// A truncated series with square-matrix coefficients, `Σ_m q^m · M_m`.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorSeries {
    vars: usize,
    cutoff: u32,
    rows: usize,
    cols: usize,
    terms: BTreeMap<Monomial, QMatrix>,
}

impl fmt::Debug for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorSeries {}x{} (vars {}, cutoff {})", self.rows, self.cols, self.vars, self.cutoff)?;
        for (m, c) in &self.terms {
            writeln!(f, "  q^{:?}: {:?}", m, c)?;
        }
        Ok(())
    }
}

impl OperatorSeries {
    pub fn zero(vars: usize, cutoff: u32, rows: usize, cols: usize) -> Self {
        OperatorSeries {
            vars,
            cutoff,
            rows,
            cols,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, cutoff: u32, m: QMatrix) -> Self {
        let mut s = OperatorSeries::zero(vars, cutoff, m.rows(), m.cols());
        s.add_term(vec![0; vars], m);
        s
    }

    pub fn identity(vars: usize, cutoff: u32, n: usize) -> Self {
        OperatorSeries::constant(vars, cutoff, QMatrix::identity(n))
    }

    /// Assembles from a matrix of scalar series.
    pub fn from_entries(entries: &[Vec<TruncatedSeries>], vars: usize, cutoff: u32) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut out = OperatorSeries::zero(vars, cutoff, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, s) in row.iter().enumerate() {
                for (m, v) in s.terms() {
                    let mut unit = QMatrix::zeros(rows, cols);
                    unit[(r, c)] = v.clone();
                    out.add_term(m.clone(), unit);
                }
            }
        }
        out
    }

    pub fn entry(&self, r: usize, c: usize) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            self.vars,
            self.cutoff,
            self.terms.iter().map(|(m, mat)| (m.clone(), mat[(r, c)].clone())),
        )
    }

    pub fn to_entries(&self) -> Vec<Vec<TruncatedSeries>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, QMatrix> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> QMatrix {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.rows, self.cols))
    }

    /// Value at `q = 0`.
    pub fn at_zero(&self) -> QMatrix {
        self.coeff(&vec![0; self.vars])
    }

    pub fn add_term(&mut self, m: Monomial, c: QMatrix) {
        assert_eq!((c.rows(), c.cols()), (self.rows, self.cols), "operator shape");
        if total_degree(&m) > self.cutoff || c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(prev) => prev + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.vars, self.cutoff), (other.vars, other.cutoff));
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.vars, self.cutoff), (other.vars, other.cutoff));
        assert_eq!(self.cols, other.rows, "operator product shape");
        let mut out = OperatorSeries::zero(self.vars, self.cutoff, self.rows, other.cols);
        for (ma, ca) in &self.terms {
            let da = total_degree(ma);
            for (mb, cb) in &other.terms {
                if da + total_degree(mb) > self.cutoff {
                    continue;
                }
                out.add_term(add_monomials(ma, mb), ca * cb);
            }
        }
        out
    }

    /// Multiplies every coefficient by a scalar series.
    pub fn scale_series(&self, s: &TruncatedSeries) -> Self {
        let mut out = OperatorSeries::zero(self.vars, self.cutoff, self.rows, self.cols);
        for (ma, ca) in &self.terms {
            for (mb, cb) in s.terms() {
                out.add_term(add_monomials(ma, mb), ca.scale(cb));
            }
        }
        out
    }

    /// `q^m ⊗ c` summed with `series ⊗ c`.
    pub fn from_series_times(s: &TruncatedSeries, c: &QMatrix) -> Self {
        let mut out = OperatorSeries::zero(s.vars(), s.cutoff(), c.rows(), c.cols());
        for (m, v) in s.terms() {
            out.add_term(m.clone(), c.scale(v));
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn theta(&self, i: usize) -> Self {
        let mut out = OperatorSeries::zero(self.vars, self.cutoff, self.rows, self.cols);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                out.terms.insert(m.clone(), c.scale(&Rat::from_integer(m[i].into())));
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> OperatorSeries {
        let col = QMatrix::from_rows(v.iter().map(|x| vec![x.clone()]).collect(), 1);
        let mut out = OperatorSeries::zero(self.vars, self.cutoff, self.rows, 1);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * &col);
        }
        out
    }

    /// Inverse when the value at `q = 0` is invertible.
    pub fn inverse(&self) -> Option<Self> {
        let a0 = self.at_zero();
        let inv0 = a0.inverse()?;
        let n = self.rows;
        let id = OperatorSeries::identity(self.vars, self.cutoff, n);
        // (A0 (1 - X))^{-1} = (Σ X^k) A0^{-1} with X = 1 - A0^{-1} A
        let x = id.sub(&OperatorSeries::constant(self.vars, self.cutoff, inv0.clone()).mul(self));
        let mut acc = id.clone();
        let mut p = id;
        for _ in 0..self.cutoff {
            p = p.mul(&x);
            acc = acc.add(&p);
        }
        Some(acc.mul(&OperatorSeries::constant(self.vars, self.cutoff, inv0)))
    }

    /// Substitutes `q_i ↦ subs[i]` (zero constant terms).
    pub fn compose(&self, subs: &[TruncatedSeries]) -> Self {
        assert_eq!(subs.len(), self.vars);
        let (tv, tc) = (subs[0].vars(), subs[0].cutoff());
        let powers = PowerTable::new(subs, self.cutoff);
        let mut out = OperatorSeries::zero(tv, tc, self.rows, self.cols);
        for (m, c) in &self.terms {
            out = out.add(&OperatorSeries::from_series_times(&powers.monomial(m), c));
        }
        out
    }

    /// Lowest-degree nonzero monomial, in graded order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms
            .keys()
            .min_by(|a, b| total_degree(a).cmp(&total_degree(b)).then_with(|| b.cmp(a)))
    }
}
