//! Mukai vectors, the Euler pairing and the lattice-level mirror map for K3
//! surfaces.
//!
//! Coordinates on `H⁰ ⊕ H² ⊕ H⁴` are laid out as `[α, β₁, …, β_m, γ]` and the
//! pairing is `(α,β,γ)·(α′,β′,γ′) = β·β′ − αγ′ − γα′`.

use std::fmt;

use num::{Integer, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    isotropic_to_standard, quotient_by_isotropic, Isometry, LatVec, Lattice, LatticeError,
};
use crate::matrix::IntMatrix;
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MukaiError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("c1·c1 = {0} is odd; the H² lattice must be even")]
    OddSelfPairing(Int),
    #[error("negative rank {0}")]
    NegativeRank(Int),
    #[error("zero Mukai vector")]
    ZeroVector,
    #[error("H² part has length {found}, lattice rank is {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("period has nonzero H⁰ or H⁴ component")]
    PeriodNotInH2,
    #[error("period is not orthogonal to v (pairing {0})")]
    NotOrthogonal(String),
    #[error("period invariant violated: {0}")]
    PeriodInvariant(String),
}

pub type Result<T> = std::result::Result<T, MukaiError>;

/// `H⁰ ⊕ H² ⊕ H⁴` built around a user-supplied `H²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiLattice {
    h2: Lattice,
    full: Lattice,
}

impl MukaiLattice {
    pub fn new(h2: Lattice) -> Self {
        let m = h2.rank();
        let n = m + 2;
        let mut g = IntMatrix::zeros(n, n);
        g[(0, n - 1)] = Int::from(-1);
        g[(n - 1, 0)] = Int::from(-1);
        for r in 0..m {
            for c in 0..m {
                g[(r + 1, c + 1)] = h2.gram()[(r, c)].clone();
            }
        }
        let full = Lattice::with_flags(g, None, h2.declared_even(), h2.declared_unimodular())
            .expect("block sum of a valid lattice with the Mukai plane");
        MukaiLattice { h2, full }
    }

    /// The K3 Mukai lattice, with `H² = U³ ⊕ E8(−1)²` (rank 24 overall).
    pub fn k3() -> Self {
        MukaiLattice::new(Lattice::k3())
    }

    pub fn h2(&self) -> &Lattice {
        &self.h2
    }

    pub fn lattice(&self) -> &Lattice {
        &self.full
    }

    pub fn rank(&self) -> usize {
        self.full.rank()
    }

    /// `(0, 0, 1)`, the class of a point.
    pub fn point_class(&self) -> MukaiVector {
        MukaiVector::new(Int::zero(), LatVec::zero(self.h2.rank()), Int::from(1))
    }

    /// `(−1, 0, 0)`, pairing to 1 with the point class.
    pub fn point_partner(&self) -> MukaiVector {
        MukaiVector::new(Int::from(-1), LatVec::zero(self.h2.rank()), Int::zero())
    }

    fn check(&self, v: &MukaiVector) -> Result<()> {
        if v.beta.len() != self.h2.rank() {
            return Err(MukaiError::LatticeMismatch {
                expected: self.h2.rank(),
                found: v.beta.len(),
            });
        }
        Ok(())
    }

    /// The Mukai pairing.
    pub fn pair(&self, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.full.pair(&v.to_latvec(), &w.to_latvec())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub alpha: Int,
    pub beta: LatVec,
    pub gamma: Int,
}

impl MukaiVector {
    pub fn new(alpha: Int, beta: LatVec, gamma: Int) -> Self {
        MukaiVector { alpha, beta, gamma }
    }

    pub fn from_i64(alpha: i64, beta: &[i64], gamma: i64) -> Self {
        MukaiVector::new(Int::from(alpha), LatVec::from_i64(beta), Int::from(gamma))
    }

    pub fn to_latvec(&self) -> LatVec {
        let mut c = Vec::with_capacity(self.beta.len() + 2);
        c.push(self.alpha.clone());
        c.extend(self.beta.0.iter().cloned());
        c.push(self.gamma.clone());
        LatVec(c)
    }

    /// Inverse of [`MukaiVector::to_latvec`]; `x` must have length at least 2.
    pub fn from_latvec(x: &LatVec) -> Self {
        let n = x.len();
        assert!(n >= 2, "Mukai coordinates need α and γ");
        MukaiVector {
            alpha: x.0[0].clone(),
            beta: LatVec(x.0[1..n - 1].to_vec()),
            gamma: x.0[n - 1].clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.gamma.is_zero() && self.beta.is_zero()
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// Rank, first and second Chern class of a sheaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernInput {
    pub rank: Int,
    pub c1: LatVec,
    pub c2: Int,
}

/// A class given either through Chern data or directly as a Mukai triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafClass {
    Chern(ChernInput),
    Mukai(MukaiVector),
}

/// `v(E) = (r, c₁, r + c₁²/2 − c₂)`.
pub fn mukai_vector(l: &MukaiLattice, x: &ChernInput) -> Result<MukaiVector> {
    if x.rank.is_negative() {
        return Err(MukaiError::NegativeRank(x.rank.clone()));
    }
    if x.c1.len() != l.h2.rank() {
        return Err(MukaiError::LatticeMismatch {
            expected: l.h2.rank(),
            found: x.c1.len(),
        });
    }
    let sq = l.h2.pair(&x.c1, &x.c1)?;
    if sq.is_odd() {
        return Err(MukaiError::OddSelfPairing(sq));
    }
    let gamma = &x.rank + sq / Int::from(2) - &x.c2;
    Ok(MukaiVector::new(x.rank.clone(), x.c1.clone(), gamma))
}

pub fn class_vector(l: &MukaiLattice, c: &SheafClass) -> Result<MukaiVector> {
    match c {
        SheafClass::Chern(x) => mukai_vector(l, x),
        SheafClass::Mukai(v) => {
            l.check(v)?;
            Ok(v.clone())
        }
    }
}

/// `χ(E, F) = −⟨v(E), v(F)⟩`.
pub fn euler_pairing(l: &MukaiLattice, v: &MukaiVector, w: &MukaiVector) -> Result<Int> {
    Ok(-l.pair(v, w)?)
}

/// `⟨v, v⟩ + 2`, the dimension of the moduli of simple sheaves with vector `v`.
pub fn moduli_dimension(l: &MukaiLattice, v: &MukaiVector) -> Result<Int> {
    l.check(v)?;
    if v.is_zero() {
        return Err(MukaiError::ZeroVector);
    }
    Ok(Int::from(2) - euler_pairing(l, v, v)?)
}

/// An isometry of the Mukai lattice sending `v` to the point class.
pub fn mirror_map_vector(l: &MukaiLattice, v: &MukaiVector) -> Result<Isometry> {
    l.check(v)?;
    let t = l.point_class().to_latvec();
    let partner = l.point_partner().to_latvec();
    Ok(isotropic_to_standard(&l.full, &v.to_latvec(), &t, Some(&partner))?)
}

/// `Ω = re + i·im`, a weight-two period with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPoint {
    pub re: Vec<Rat>,
    pub im: Vec<Rat>,
}

impl PeriodPoint {
    pub fn new(re: Vec<Rat>, im: Vec<Rat>) -> Self {
        PeriodPoint { re, im }
    }

    /// Checks `Ω·Ω = 0` and `Ω·Ω̄ > 0` in `l`.
    pub fn validate(&self, l: &Lattice) -> Result<()> {
        let rr = l.pair_rational(&self.re, &self.re)?;
        let ii = l.pair_rational(&self.im, &self.im)?;
        let ri = l.pair_rational(&self.re, &self.im)?;
        if rr != ii || !ri.is_zero() {
            return Err(MukaiError::PeriodInvariant(format!(
                "Ω·Ω ≠ 0 (re·re = {rr}, im·im = {ii}, re·im = {ri})"
            )));
        }
        if !(rr + ii).is_positive() {
            return Err(MukaiError::PeriodInvariant("Ω·Ω̄ ≤ 0".into()));
        }
        Ok(())
    }

    /// Places an `H²` period into Mukai coordinates.
    pub fn embed_h2(&self) -> PeriodPoint {
        let pad = |v: &[Rat]| {
            let mut out = vec![Rat::zero()];
            out.extend(v.iter().cloned());
            out.push(Rat::zero());
            out
        };
        PeriodPoint::new(pad(&self.re), pad(&self.im))
    }
}

/// The mirror lattice `v⊥/v` and the image of `Ω` in it.
pub fn mirror_hodge_structure(
    l: &MukaiLattice,
    omega: &PeriodPoint,
    v: &MukaiVector,
) -> Result<(Lattice, PeriodPoint)> {
    l.check(v)?;
    let n = l.rank();
    for part in [&omega.re, &omega.im] {
        if part.len() != n {
            return Err(MukaiError::LatticeMismatch {
                expected: n - 2,
                found: part.len().saturating_sub(2),
            });
        }
        if !part[0].is_zero() || !part[n - 1].is_zero() {
            return Err(MukaiError::PeriodNotInH2);
        }
    }
    omega.validate(&l.full)?;
    let vl = v.to_latvec();
    let vq = vl.to_rational();
    for part in [&omega.re, &omega.im] {
        let p = l.full.pair_rational(part, &vq)?;
        if !p.is_zero() {
            return Err(MukaiError::NotOrthogonal(p.to_string()));
        }
    }
    let q = quotient_by_isotropic(&l.full, &vl)?;
    let re = q.project(&l.full, &omega.re).expect("orthogonal to v");
    let im = q.project(&l.full, &omega.im).expect("orthogonal to v");
    let out = PeriodPoint::new(re, im);
    out.validate(&q.lattice)?;
    Ok((q.lattice, out))
}
