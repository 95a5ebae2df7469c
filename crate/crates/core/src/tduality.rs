//! Pure cycles on torus fibrations, their annihilator T-duals and the
//! Leray filtration.
//!
//! The dual lattice `(ℤⁿ)*` is identified with `ℤⁿ` through the standard
//! dot product, so an annihilator is again a sublattice of `ℤⁿ`.

use thiserror::Error;

use crate::lattice::{integer_kernel, LatVec, LatticeError, Sublattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TDualityError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("sublattice is not saturated; saturate it and record the index as a multiplicity")]
    NotSaturated,
    #[error("fiber rank {rank} plus base dimension {k} differs from n = {n}")]
    RankMismatch { rank: usize, k: usize, n: usize },
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("{cycles} cycle(s) but {images} image(s)")]
    Misaligned { cycles: usize, images: usize },
}

pub type Result<T> = std::result::Result<T, TDualityError>;

/// An `n`-cycle fibering over a `k`-dimensional base with fiber class
/// `multiplicity` times the saturated sub-torus lattice `fiber`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureCycle {
    n: usize,
    fiber: Sublattice,
    k: usize,
    multiplicity: u64,
}

impl PureCycle {
    pub fn new(n: usize, fiber: Sublattice, k: usize, multiplicity: u64) -> Result<Self> {
        if fiber.ambient_rank() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: fiber.ambient_rank(),
            }
            .into());
        }
        if fiber.rank() + k != n {
            return Err(TDualityError::RankMismatch {
                rank: fiber.rank(),
                k,
                n,
            });
        }
        if multiplicity == 0 {
            return Err(TDualityError::ZeroMultiplicity);
        }
        if !fiber.is_saturated() {
            return Err(TDualityError::NotSaturated);
        }
        Ok(PureCycle {
            n,
            fiber,
            k,
            multiplicity,
        })
    }

    /// A fiber `Tⁿ` (`k = 0`).
    pub fn fiber_class(n: usize) -> Self {
        PureCycle::new(n, Sublattice::full(n), 0, 1).expect("full lattice")
    }

    /// A multisection meeting each fiber `multiplicity` times (`k = n`).
    pub fn section(n: usize, multiplicity: u64) -> Result<Self> {
        PureCycle::new(n, Sublattice::zero(n), n, multiplicity)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fiber(&self) -> &Sublattice {
        &self.fiber
    }

    pub fn base_dim(&self) -> usize {
        self.k
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }
}

/// A class of degree `2k` supported on the sub-tori with lattice `dual_lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualClass {
    pub degree: usize,
    pub dual_lattice: Sublattice,
    pub rank_hint: u64,
}

/// `Ann(S) = {φ : φ(s) = 0 for all s ∈ S}` in Hermite normal form.
pub fn annihilator(s: &Sublattice) -> Result<Sublattice> {
    if !s.is_saturated() {
        return Err(TDualityError::NotSaturated);
    }
    let n = s.ambient_rank();
    if s.rank() == 0 {
        return Ok(Sublattice::full(n));
    }
    let k = integer_kernel(&s.basis_matrix());
    let basis = (0..k.rows()).map(|r| LatVec(k.row(r).to_vec())).collect();
    Ok(Sublattice::new(n, basis)?)
}

pub fn t_dual_cycle(w: &PureCycle) -> Result<DualClass> {
    let dual = annihilator(&w.fiber)?;
    Ok(DualClass {
        degree: 2 * dual.rank(),
        dual_lattice: dual,
        rank_hint: w.multiplicity,
    })
}

/// The base dimension `k = n − rank(S)`.
pub fn leray_level(w: &PureCycle) -> usize {
    w.n - w.fiber.rank()
}

/// Index of the first cycle whose image has degree above `2·leray_level`.
pub fn leray_filtration_failure(cycles: &[PureCycle], images: &[DualClass]) -> Result<Option<usize>> {
    if cycles.len() != images.len() {
        return Err(TDualityError::Misaligned {
            cycles: cycles.len(),
            images: images.len(),
        });
    }
    Ok(cycles
        .iter()
        .zip(images)
        .position(|(c, d)| d.degree > 2 * leray_level(c)))
}

/// Every cycle of Leray level `k` maps into degrees `≤ 2k`.
pub fn leray_filtration_check(cycles: &[PureCycle], images: &[DualClass]) -> Result<bool> {
    Ok(leray_filtration_failure(cycles, images)?.is_none())
}

/// `Ann(Ann(S))`, with `(ℤⁿ)**` identified with `ℤⁿ`.
pub fn double_dual(s: &Sublattice) -> Result<Sublattice> {
    annihilator(&annihilator(s)?)
}
