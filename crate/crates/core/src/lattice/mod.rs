//! Integer lattices with a symmetric pairing.

mod isotropic;
mod normal_form;

pub use isotropic::{find_dual_partner, isotropic_to_standard, quotient_by_isotropic, IsotropicQuotient};
pub use normal_form::{hermite_normal_form, integer_kernel, smith_normal_form, Hnf, Snf};

use std::fmt;

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{content, int_vec_is_zero, IntMatrix, QMatrix};
use crate::{Int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive (content {0})")]
    NotPrimitive(Int),
    #[error("vector is not isotropic (self-pairing {0})")]
    NotIsotropic(Int),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("sublattice is not saturated")]
    NotSaturated,
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix has odd diagonal entry at {0} but lattice is declared even")]
    NotEven(usize),
    #[error("gram determinant is {0}, but lattice is declared unimodular")]
    NotUnimodular(Int),
    #[error("labels: expected {expected}, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("no vector pairs to 1 with the given vector (pairing content {0})")]
    NoDualPartner(Int),
    #[error("lattice must be even and unimodular")]
    NotEvenUnimodular,
    #[error("invalid hyperbolic partner: {0}")]
    InvalidPartner(String),
    #[error("orbit construction failed: {0}")]
    OrbitConstruction(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// An integer vector in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatVec(pub Vec<Int>);

impl LatVec {
    pub fn from_i64(v: &[i64]) -> Self {
        LatVec(v.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatVec(vec![Int::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = LatVec::zero(n);
        v.0[i] = Int::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        int_vec_is_zero(&self.0)
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    /// gcd of the coordinates.
    pub fn content(&self) -> Int {
        content(&self.0)
    }

    pub fn scaled(&self, k: &Int) -> LatVec {
        LatVec(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: &Int, other: &LatVec) -> LatVec {
        LatVec(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        self.0.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }
}

impl fmt::Display for LatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A free ℤ-module of finite rank with an integral symmetric pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Option<Vec<String>>,
    declared_even: bool,
    declared_unimodular: bool,
}

impl Lattice {
    /// Validates symmetry; flags are not declared.
    pub fn new(gram: IntMatrix) -> Result<Self> {
        Lattice::with_flags(gram, None, false, false)
    }

    /// Builds a lattice, verifying symmetry and every declared flag.
    pub fn with_flags(
        gram: IntMatrix,
        labels: Option<Vec<String>>,
        even: bool,
        unimodular: bool,
    ) -> Result<Self> {
        if !gram.is_square() {
            return Err(LatticeError::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if let Some(l) = &labels {
            if l.len() != gram.rows() {
                return Err(LatticeError::LabelCount {
                    expected: gram.rows(),
                    found: l.len(),
                });
            }
        }
        if even {
            if let Some(i) = (0..gram.rows()).find(|&i| gram[(i, i)].is_odd()) {
                return Err(LatticeError::NotEven(i));
            }
        }
        if unimodular {
            let det = gram.determinant();
            if !det.abs().is_one() {
                return Err(LatticeError::NotUnimodular(det));
            }
        }
        Ok(Lattice {
            gram,
            labels,
            declared_even: even,
            declared_unimodular: unimodular,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Lattice::new(IntMatrix::from_i64(rows))
    }

    /// The hyperbolic plane `U = [[0,1],[1,0]]`.
    pub fn hyperbolic_plane() -> Self {
        Lattice::with_flags(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]), None, true, true)
            .expect("U is even unimodular")
    }

    /// The E8 root lattice (positive definite), or E8(−1) when `negative`.
    pub fn e8(negative: bool) -> Self {
        // Cartan matrix, Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
        let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];
        let s = if negative { -1 } else { 1 };
        let mut g = IntMatrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = Int::from(2 * s);
        }
        for &(a, b) in &edges {
            g[(a, b)] = Int::from(-s);
            g[(b, a)] = Int::from(-s);
        }
        Lattice::with_flags(g, None, true, true).expect("E8 is even unimodular")
    }

    /// Orthogonal direct sum; flags are kept when both summands carry them.
    pub fn direct_sum(parts: &[Lattice]) -> Self {
        let n: usize = parts.iter().map(|p| p.rank()).sum();
        let mut g = IntMatrix::zeros(n, n);
        let mut off = 0;
        for p in parts {
            for r in 0..p.rank() {
                for c in 0..p.rank() {
                    g[(off + r, off + c)] = p.gram[(r, c)].clone();
                }
            }
            off += p.rank();
        }
        let even = parts.iter().all(|p| p.declared_even);
        let uni = parts.iter().all(|p| p.declared_unimodular);
        Lattice {
            gram: g,
            labels: None,
            declared_even: even,
            declared_unimodular: uni,
        }
    }

    /// `U³ ⊕ E8(−1)²`, the second cohomology of a K3 surface.
    pub fn k3() -> Self {
        let u = Lattice::hyperbolic_plane();
        let e = Lattice::e8(true);
        Lattice::direct_sum(&[u.clone(), u.clone(), u, e.clone(), e])
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn declared_even(&self) -> bool {
        self.declared_even
    }

    pub fn declared_unimodular(&self) -> bool {
        self.declared_unimodular
    }

    /// Every diagonal entry of the Gram matrix is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn determinant(&self) -> Int {
        self.gram.determinant()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn check(&self, v: &LatVec) -> Result<()> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// `uᵀ · gram · v`.
    pub fn pair(&self, u: &LatVec, v: &LatVec) -> Result<Int> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.gram.bilinear(&u.0, &v.0))
    }

    /// Pairing of rational vectors, used for periods.
    pub fn pair_rational(&self, u: &[Rat], v: &[Rat]) -> Result<Rat> {
        for w in [u, v] {
            if w.len() != self.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: self.rank(),
                    found: w.len(),
                });
            }
        }
        Ok(self.gram.to_rational().bilinear(u, v))
    }

    /// The linear form `x ↦ pair(v, x)` as a coordinate vector.
    pub fn dual_form(&self, v: &LatVec) -> Result<LatVec> {
        self.check(v)?;
        Ok(LatVec(self.gram.mul_vec(&v.0)))
    }

    pub fn is_primitive(&self, v: &LatVec) -> Result<bool> {
        self.check(v)?;
        if v.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        Ok(v.content().is_one())
    }

    pub fn is_isotropic(&self, v: &LatVec) -> Result<bool> {
        Ok(self.pair(v, v)?.is_zero())
    }

    /// `{x : pair(x, v) = 0}` as a saturated sublattice in Hermite form.
    pub fn orthogonal_complement(&self, v: &LatVec) -> Result<Sublattice> {
        let form = self.dual_form(v)?;
        if v.is_zero() {
            return Err(LatticeError::ZeroVector);
        }
        let row = IntMatrix::from_rows(vec![form.0], self.rank());
        let ker = integer_kernel(&row);
        Ok(Sublattice::from_matrix_unchecked(self.rank(), &ker))
    }

    /// Applies `iso` and checks it against this lattice.
    pub fn apply(&self, iso: &Isometry, v: &LatVec) -> Result<LatVec> {
        self.check(v)?;
        Ok(iso.apply(v))
    }
}

/// A sublattice of `ℤⁿ` given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<LatVec>,
}

impl Sublattice {
    /// Validates lengths and linear independence.
    pub fn new(ambient_rank: usize, basis: Vec<LatVec>) -> Result<Self> {
        for b in &basis {
            if b.len() != ambient_rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient_rank,
                    found: b.len(),
                });
            }
        }
        let s = Sublattice { ambient_rank, basis };
        if s.basis_matrix().to_rational().rank() != s.basis.len() {
            return Err(LatticeError::DependentBasis);
        }
        Ok(s)
    }

    /// The sublattice generated by arbitrary (possibly dependent) vectors.
    pub fn generated_by(ambient_rank: usize, gens: &[LatVec]) -> Result<Self> {
        for b in gens {
            if b.len() != ambient_rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient_rank,
                    found: b.len(),
                });
            }
        }
        let m = IntMatrix::from_rows(gens.iter().map(|g| g.0.clone()).collect(), ambient_rank);
        Ok(Sublattice::from_matrix_unchecked(
            ambient_rank,
            &hermite_normal_form(&m).nonzero_rows(),
        ))
    }

    pub(crate) fn from_matrix_unchecked(ambient_rank: usize, m: &IntMatrix) -> Self {
        Sublattice {
            ambient_rank,
            basis: (0..m.rows()).map(|r| LatVec(m.row(r).to_vec())).collect(),
        }
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: (0..ambient_rank).map(|i| LatVec::unit(ambient_rank, i)).collect(),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LatVec] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.basis.iter().map(|b| b.0.clone()).collect(), self.ambient_rank)
    }

    /// Canonical basis: Hermite normal form of the basis rows.
    pub fn canonical(&self) -> Sublattice {
        let h = hermite_normal_form(&self.basis_matrix());
        Sublattice::from_matrix_unchecked(self.ambient_rank, &h.nonzero_rows())
    }

    /// Equality as sets of lattice points.
    pub fn same_lattice(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.canonical().basis == other.canonical().basis
    }

    pub fn contains(&self, v: &LatVec) -> bool {
        if v.len() != self.ambient_rank {
            return false;
        }
        let mut gens = self.basis.clone();
        gens.push(v.clone());
        let extended = Sublattice::generated_by(self.ambient_rank, &gens).expect("lengths checked");
        extended.same_lattice(self)
    }

    /// `ambient ∩ (ℚ-span of self)`, with rank preserved.
    pub fn saturate(&self) -> Sublattice {
        let k = self.rank();
        if k == 0 {
            return self.clone();
        }
        let snf = smith_normal_form(&self.basis_matrix());
        debug_assert_eq!(snf.rank(), k);
        let rows = snf.v_inv.row_range(0, k);
        Sublattice::from_matrix_unchecked(self.ambient_rank, &hermite_normal_form(&rows).nonzero_rows())
    }

    pub fn is_saturated(&self) -> bool {
        self.same_lattice(&self.saturate())
    }

    /// Lattice sum `self + other`.
    pub fn sum(&self, other: &Sublattice) -> Result<Sublattice> {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Sublattice::generated_by(self.ambient_rank, &gens)
    }

    /// Lattice intersection `self ∩ other`.
    pub fn intersection(&self, other: &Sublattice) -> Result<Sublattice> {
        if self.ambient_rank != other.ambient_rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_rank,
                found: other.ambient_rank,
            });
        }
        let (a, b) = (self.basis_matrix(), other.basis_matrix());
        if a.rows() == 0 || b.rows() == 0 {
            return Ok(Sublattice::zero(self.ambient_rank));
        }
        // integer relations x·A = y·B
        let stacked = a.vstack(&(-&b)).transpose();
        let rel = integer_kernel(&stacked);
        let coeffs = IntMatrix::from_fn(rel.rows(), a.rows(), |r, c| rel[(r, c)].clone());
        let gens = &coeffs * &a;
        Sublattice::generated_by(
            self.ambient_rank,
            &(0..gens.rows()).map(|r| LatVec(gens.row(r).to_vec())).collect::<Vec<_>>(),
        )
    }

    pub fn rational_span(&self) -> QMatrix {
        self.basis_matrix().to_rational()
    }
}

/// Saturation of a sublattice; errors on a dependent basis.
pub fn saturate(s: &Sublattice) -> Result<Sublattice> {
    if s.basis_matrix().to_rational().rank() != s.rank() {
        return Err(LatticeError::DependentBasis);
    }
    Ok(s.saturate())
}

/// An integral change of coordinates preserving a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    matrix: IntMatrix,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry {
            matrix: IntMatrix::identity(n),
        }
    }

    /// Accepts `m` only if `mᵀ·G·m = G` and `|det m| = 1`.
    pub fn new(lattice: &Lattice, m: IntMatrix) -> Result<Self> {
        let iso = Isometry { matrix: m };
        if iso.preserves(lattice) {
            Ok(iso)
        } else {
            Err(LatticeError::OrbitConstruction(
                "matrix does not preserve the pairing".into(),
            ))
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: IntMatrix) -> Self {
        Isometry { matrix }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &LatVec) -> LatVec {
        LatVec(self.matrix.mul_vec(&v.0))
    }

    pub fn compose(&self, inner: &Isometry) -> Isometry {
        Isometry {
            matrix: &self.matrix * &inner.matrix,
        }
    }

    pub fn preserves(&self, lattice: &Lattice) -> bool {
        let m = &self.matrix;
        if m.rows() != lattice.rank() || !m.is_square() {
            return false;
        }
        let g = lattice.gram();
        &(&m.transpose() * g) * m == *g && m.determinant().abs().is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mukai_rank3() -> Lattice {
        // (α, β, γ) with β in the rank-1 lattice [[0]]: pairing β·β' − αγ' − γα'
        Lattice::from_i64(&[&[0, 0, -1], &[0, 0, 0], &[-1, 0, 0]]).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let m = mukai_rank3();
        assert_eq!(
            m.pair(&LatVec::from_i64(&[0, 1, 0]), &LatVec::from_i64(&[0, 1, 0])).unwrap(),
            Int::zero()
        );
        let u = Lattice::hyperbolic_plane();
        assert_eq!(
            u.pair(&LatVec::from_i64(&[1, 0]), &LatVec::from_i64(&[0, 1])).unwrap(),
            Int::one()
        );
        let v = LatVec::from_i64(&[1, 0, 1]);
        assert_eq!(m.pair(&v, &v).unwrap(), Int::from(-2));
        assert!(matches!(
            u.pair(&LatVec::from_i64(&[1]), &v),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn primitivity_and_isotropy() {
        let z3 = Lattice::new(IntMatrix::identity(3)).unwrap();
        assert!(z3.is_primitive(&LatVec::from_i64(&[1, 0, 0])).unwrap());
        assert!(!z3.is_primitive(&LatVec::from_i64(&[2, 4, 6])).unwrap());
        let z2 = Lattice::new(IntMatrix::identity(2)).unwrap();
        assert!(z2.is_primitive(&LatVec::from_i64(&[3, 5])).unwrap());
        assert_eq!(z2.is_primitive(&LatVec::zero(2)), Err(LatticeError::ZeroVector));

        let u = Lattice::hyperbolic_plane();
        assert!(u.is_isotropic(&LatVec::from_i64(&[1, 0])).unwrap());
        assert!(!u.is_isotropic(&LatVec::from_i64(&[1, 1])).unwrap());
        assert!(mukai_rank3().is_isotropic(&LatVec::from_i64(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn flags_are_verified() {
        let g = IntMatrix::from_i64(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            Lattice::with_flags(g.clone(), None, true, false),
            Err(LatticeError::NotEven(0))
        );
        assert!(Lattice::with_flags(g, None, false, true).is_ok());
        let g = IntMatrix::from_i64(&[&[2, 1], &[1, 2]]);
        assert_eq!(
            Lattice::with_flags(g, None, true, true),
            Err(LatticeError::NotUnimodular(Int::from(3)))
        );
        assert_eq!(
            Lattice::from_i64(&[&[0, 1], &[2, 0]]),
            Err(LatticeError::NotSymmetric)
        );
        assert!(Lattice::e8(true).is_unimodular());
        assert_eq!(Lattice::k3().rank(), 22);
        assert!(Lattice::k3().is_even());
    }

    #[test]
    fn saturation_examples() {
        let s = Sublattice::new(2, vec![LatVec::from_i64(&[2, 0])]).unwrap();
        assert!(s.saturate().same_lattice(&Sublattice::new(2, vec![LatVec::from_i64(&[1, 0])]).unwrap()));
        let s = Sublattice::new(2, vec![LatVec::from_i64(&[2, 2])]).unwrap();
        assert_eq!(s.saturate().basis(), &[LatVec::from_i64(&[1, 1])]);
        let s = Sublattice::new(2, vec![LatVec::from_i64(&[2, 0]), LatVec::from_i64(&[0, 2])]).unwrap();
        assert!(s.saturate().same_lattice(&Sublattice::full(2)));
        assert_eq!(
            Sublattice::new(2, vec![LatVec::from_i64(&[1, 1]), LatVec::from_i64(&[2, 2])]),
            Err(LatticeError::DependentBasis)
        );
    }

    #[test]
    fn complement_examples() {
        let uu = Lattice::direct_sum(&[Lattice::hyperbolic_plane(), Lattice::hyperbolic_plane()]);
        let c = uu.orthogonal_complement(&LatVec::from_i64(&[1, 0, 0, 0])).unwrap();
        assert_eq!(
            c.basis(),
            &[
                LatVec::from_i64(&[1, 0, 0, 0]),
                LatVec::from_i64(&[0, 0, 1, 0]),
                LatVec::from_i64(&[0, 0, 0, 1])
            ]
        );
        let u = Lattice::hyperbolic_plane();
        let c = u.orthogonal_complement(&LatVec::from_i64(&[1, 0])).unwrap();
        assert_eq!(c.basis(), &[LatVec::from_i64(&[1, 0])]);
        let two = Lattice::from_i64(&[&[2]]).unwrap();
        assert_eq!(two.orthogonal_complement(&LatVec::from_i64(&[1])).unwrap().rank(), 0);
        assert_eq!(u.orthogonal_complement(&LatVec::zero(2)), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Sublattice::new(3, vec![LatVec::from_i64(&[1, 0, 0]), LatVec::from_i64(&[0, 2, 0])]).unwrap();
        let b = Sublattice::new(3, vec![LatVec::from_i64(&[0, 3, 0]), LatVec::from_i64(&[0, 0, 1])]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i.basis(), &[LatVec::from_i64(&[0, 6, 0])]);
        let s = a.sum(&b).unwrap();
        assert!(s.same_lattice(&Sublattice::full(3)));
    }
}
