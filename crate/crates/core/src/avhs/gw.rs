//! Gromov–Witten data, the maps `Γ_η` and the small quantum product.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::graded::{unit_vec, GradedSpace, Trilinear};
use super::{AvhsError, Result};
use crate::matrix::QMatrix;
use crate::series::{Monomial, OperatorSeries, TruncatedSeries};
use crate::Rat;

/// A curve class `η`, recorded by its pairings `e^j(η)` with the framing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EffectiveClass(Vec<u32>);

impl EffectiveClass {
    pub fn new(exponents: &[i64]) -> Result<Self> {
        if exponents.iter().any(|&e| e < 0) {
            return Err(AvhsError::NotEffective(format!("{exponents:?} has a negative exponent")));
        }
        if exponents.iter().all(|&e| e == 0) {
            return Err(AvhsError::NotEffective(format!("{exponents:?} is zero")));
        }
        let v = exponents
            .iter()
            .map(|&e| u32::try_from(e).map_err(|_| AvhsError::NotEffective(format!("exponent {e} too large"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(EffectiveClass(v))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// `e^j(η)`.
    pub fn pairing(&self, j: usize) -> Rat {
        Rat::from_integer(self.0[j].into())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `q^η / (1 − q^η)` to total degree `cutoff`.
    pub fn cover_series(&self, cutoff: u32) -> TruncatedSeries {
        TruncatedSeries::geometric_tail(self.0.len(), cutoff, &self.0)
    }
}

impl fmt::Display for EffectiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A graded space together with three-point invariants `Φ⁰_η` for finitely
/// many effective classes. The framing is the degree-one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWData {
    space: GradedSpace,
    classes: BTreeMap<EffectiveClass, Trilinear>,
}

impl GWData {
    pub fn new(space: GradedSpace, classes: Vec<(EffectiveClass, Trilinear)>) -> Result<Self> {
        let r = space.framing_rank();
        let mut map = BTreeMap::new();
        for (eta, phi) in classes {
            if eta.exponents().len() != r {
                return Err(AvhsError::Shape(format!("class {eta} has {} exponents, framing rank is {r}", eta.exponents().len())));
            }
            if phi.dim() != space.dim() {
                return Err(AvhsError::Shape(format!("Φ for class {eta} acts on {} classes, space has {}", phi.dim(), space.dim())));
            }
            if map.insert(eta.clone(), phi).is_some() {
                return Err(AvhsError::NotEffective(format!("class {eta} listed twice")));
            }
        }
        Ok(GWData { space, classes: map })
    }

    /// Data with every `Φ⁰_η` zero.
    pub fn classical(space: GradedSpace) -> Self {
        GWData {
            space,
            classes: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn classes(&self) -> &BTreeMap<EffectiveClass, Trilinear> {
        &self.classes
    }

    pub fn framing_rank(&self) -> usize {
        self.space.framing_rank()
    }

    pub fn phi(&self, eta: &EffectiveClass) -> Option<&Trilinear> {
        self.classes.get(eta)
    }
}

/// Outcome of [`validate_phi`]; `violations` is empty iff the data is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhiReport {
    pub violations: Vec<String>,
}

impl PhiReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Symmetry, the degree condition, the unit axiom `Φ⁰_η(1,·,·) = 0`, and
/// the divisor relation `Φ⁰_η(A,B,C) = (η·C)·λ_η(A,B)` for every
/// degree-one `C`, where `λ_η` is read off any `C` with `η·C ≠ 0`.
pub fn validate_phi(g: &GWData) -> PhiReport {
    let s = &g.space;
    let (dim, n, r) = (s.dim(), s.n(), s.framing_rank());
    let mut report = PhiReport::default();
    for (eta, phi) in &g.classes {
        if let Some((a, b, c)) = phi.asymmetry() {
            report.violations.push(format!("class {eta}: Φ not symmetric at ({a},{b},{c})"));
        }
        if let Some((a, b, c)) = first_entry(dim, |a, b, c| {
            !phi.get(a, b, c).is_zero() && s.degree(a) + s.degree(b) + s.degree(c) != n
        }) {
            report.violations.push(format!("class {eta}: Φ({a},{b},{c}) ≠ 0 outside total degree {n}"));
        }
        if let Some((_, b, c)) = first_entry(dim, |a, b, c| a == 0 && !phi.get(0, b, c).is_zero()) {
            report.violations.push(format!("class {eta}: Φ(1,{b},{c}) ≠ 0 (unit axiom)"));
        }
        let Some(jstar) = (0..r).find(|&j| eta.exponents()[j] != 0) else {
            report.violations.push(format!("class {eta} pairs to zero with the framing"));
            continue;
        };
        let cstar = s.framing_index(jstar);
        let estar = eta.pairing(jstar);
        'div: for j in 0..r {
            let c = s.framing_index(j);
            let ej = eta.pairing(j);
            for a in 0..dim {
                for b in 0..dim {
                    let lam = phi.get(a, b, cstar) / &estar;
                    if phi.get(a, b, c) != &(&ej * &lam) {
                        report.violations.push(format!(
                            "class {eta}: Φ({a},{b},{c}) = {} but (η·C)·Φ({a},{b},{cstar})/(η·C*) = {}",
                            phi.get(a, b, c),
                            &ej * &lam
                        ));
                        break 'div;
                    }
                }
            }
        }
    }
    report
}

fn first_entry(dim: usize, mut pred: impl FnMut(usize, usize, usize) -> bool) -> Option<(usize, usize, usize)> {
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                if pred(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn require_valid(g: &GWData) -> Result<()> {
    let rep = validate_phi(g);
    match rep.violations.first() {
        None => Ok(()),
        Some(v) => Err(AvhsError::InvalidPhi(v.clone())),
    }
}

/// `Γ_η` with `Γ_η(A)·B = Φ⁰_η(A,B,C)/(η·C)`. Zero for classes without data.
pub fn gamma_from_phi(g: &GWData, eta: &EffectiveClass) -> Result<QMatrix> {
    require_valid(g)?;
    gamma_unchecked(g, eta)
}

pub(crate) fn gamma_unchecked(g: &GWData, eta: &EffectiveClass) -> Result<QMatrix> {
    let s = &g.space;
    let dim = s.dim();
    if eta.exponents().len() != s.framing_rank() {
        return Err(AvhsError::Shape(format!("class {eta} does not match framing rank {}", s.framing_rank())));
    }
    let Some(phi) = g.classes.get(eta) else {
        return Ok(QMatrix::zeros(dim, dim));
    };
    let jstar = (0..s.framing_rank())
        .find(|&j| eta.exponents()[j] != 0)
        .ok_or_else(|| AvhsError::OrthogonalClass(eta.to_string()))?;
    let lam = phi.slice(s.framing_index(jstar)).scale(&eta.pairing(jstar).recip());
    Ok(s.sharp_matrix(&lam))
}

/// The operator `x ∗ ·` as a series in `q`, with each class contributing
/// through `q^η/(1 − q^η)`.
pub fn quantum_multiplication(g: &GWData, x: &[Rat], cutoff: u32) -> Result<OperatorSeries> {
    require_valid(g)?;
    Ok(qmul_unchecked(g, x, cutoff))
}

fn qmul_unchecked(g: &GWData, x: &[Rat], cutoff: u32) -> OperatorSeries {
    let s = &g.space;
    let r = s.framing_rank();
    let mut out = OperatorSeries::constant(r, cutoff, s.ad(x));
    for (eta, phi) in &g.classes {
        let m = s.sharp_matrix(&phi.contract_first(x));
        out = out.add(&OperatorSeries::from_series_times(&eta.cover_series(cutoff), &m));
    }
    out
}

/// `A ∗ B` as a vector of series (one per basis class).
pub fn quantum_product(g: &GWData, a: &[Rat], b: &[Rat], cutoff: u32) -> Result<Vec<TruncatedSeries>> {
    let q = quantum_multiplication(g, a, cutoff)?;
    let col = q.apply(b);
    Ok((0..g.space.dim()).map(|k| col.entry(k, 0)).collect())
}

/// Where `(e_a ∗ e_b) ∗ x` and `e_a ∗ (e_b ∗ x)` first differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityFailure {
    pub a: usize,
    pub b: usize,
    pub monomial: Monomial,
}

pub fn associativity_failure(g: &GWData, cutoff: u32) -> Result<Option<AssociativityFailure>> {
    require_valid(g)?;
    let s = &g.space;
    let dim = s.dim();
    let qs: Vec<OperatorSeries> = (0..dim).map(|a| qmul_unchecked(g, &unit_vec(dim, a), cutoff)).collect();
    for a in 0..dim {
        for b in 0..dim {
            let lhs = qs[a].mul(&qs[b]);
            let ab = qs[a].apply(&unit_vec(dim, b));
            let mut rhs = OperatorSeries::zero(s.framing_rank(), cutoff, dim, dim);
            for (k, qk) in qs.iter().enumerate() {
                let coeff = ab.entry(k, 0);
                if !coeff.is_zero() {
                    rhs = rhs.add(&qk.scale_series(&coeff));
                }
            }
            let diff = lhs.sub(&rhs);
            if let Some(m) = diff.leading_monomial() {
                return Ok(Some(AssociativityFailure {
                    a,
                    b,
                    monomial: m.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// `(A ∗ B) ∗ C = A ∗ (B ∗ C)` on a basis, to total degree `cutoff`.
pub fn associativity_check(g: &GWData, cutoff: u32) -> Result<bool> {
    Ok(associativity_failure(g, cutoff)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    pub(crate) fn quintic_like(value: i64) -> GWData {
        let s = GradedSpace::projective(3, rat(5)).unwrap();
        let mut phi = Trilinear::zero(4);
        phi.set(1, 1, 1, rat(value));
        GWData::new(s, vec![(EffectiveClass::new(&[1]).unwrap(), phi)]).unwrap()
    }

    #[test]
    fn effective_classes() {
        assert!(EffectiveClass::new(&[1, 0]).is_ok());
        assert!(matches!(EffectiveClass::new(&[-1, 2]), Err(AvhsError::NotEffective(_))));
        assert!(EffectiveClass::new(&[0, 0]).is_err());
    }

    #[test]
    fn validate_examples() {
        let s = GradedSpace::projective(3, rat(5)).unwrap();
        assert!(validate_phi(&GWData::classical(s)).is_valid());
        assert!(validate_phi(&quintic_like(5)).is_valid());
    }

    // Two framing directions on a threefold: Φ_η(e_a,e_b,e_c) must equal
    // η_a η_b η_c N_η. Perturbing one entry breaks C-independence; the
    // quotients Φ(e1,e1,e1)/η_1 and Φ(e1,e1,e2)/η_2 then differ.
    #[test]
    fn detects_c_dependence() {
        let mut k = Trilinear::zero(2);
        k.set(0, 0, 0, rat(1));
        k.set(1, 1, 1, rat(1));
        let s = GradedSpace::threefold(&k).unwrap();
        let eta = EffectiveClass::new(&[1, 2]).unwrap();
        let mut phi = Trilinear::zero(6);
        let n = 3;
        for a in 0..2usize {
            for b in 0..2usize {
                for c in 0..2usize {
                    let e = |i: usize| [1i64, 2][i];
                    phi.set(1 + a, 1 + b, 1 + c, rat(n * e(a) * e(b) * e(c)));
                }
            }
        }
        let good = GWData::new(s.clone(), vec![(eta.clone(), phi.clone())]).unwrap();
        assert!(validate_phi(&good).is_valid());
        phi.set_symmetric(1, 1, 2, rat(7));
        assert_ne!(phi.get(1, 1, 1) / rat(1), phi.get(1, 1, 2) / rat(2));
        let bad = GWData::new(s, vec![(eta, phi)]).unwrap();
        let rep = validate_phi(&bad);
        assert!(!rep.is_valid());
        assert!(gamma_from_phi(&bad, &EffectiveClass::new(&[1, 2]).unwrap()).is_err());
    }

    #[test]
    fn gamma_examples() {
        let g = quintic_like(5);
        let eta = EffectiveClass::new(&[1]).unwrap();
        let gm = gamma_from_phi(&g, &eta).unwrap();
        // Γ(e) = e², checked against the pairing: Γ(e)·e = 5 = e²·e
        assert_eq!(gm.col(1), unit_vec(4, 2));
        assert_eq!(g.space().pairing().bilinear(&gm.col(1), &unit_vec(4, 1)), rat(5));
        let gm = gamma_from_phi(&quintic_like(10), &eta).unwrap();
        assert_eq!(gm.col(1), vec![rat(0), rat(0), rat(2), rat(0)]);
        let classical = GWData::classical(GradedSpace::projective(3, rat(5)).unwrap());
        assert!(gamma_from_phi(&classical, &eta).unwrap().is_zero());
    }

    #[test]
    fn quantum_product_examples() {
        let g = quintic_like(5);
        let e = unit_vec(4, 1);
        let p = quantum_product(&g, &e, &e, 3).unwrap();
        // e∗e = e²(1 + q + q² + q³)
        assert_eq!(p[2].coeff(&[0]), rat(1));
        assert_eq!(p[2].coeff(&[1]), rat(1));
        assert!(p[0].is_zero() && p[1].is_zero() && p[3].is_zero());
        for a in 0..4 {
            let x = unit_vec(4, a);
            let one = quantum_product(&g, &g.space().unit(), &x, 3).unwrap();
            let expect: Vec<_> = x.iter().map(|c| TruncatedSeries::constant(1, 3, c.clone())).collect();
            assert_eq!(one, expect);
        }
        assert!(associativity_check(&g, 4).unwrap());
    }
}
