//! Graded even cohomology `⊕ H^{ℓ,ℓ}`, its classical ring and Hodge diamonds.

use std::ops::Range;

use num::{One, Zero};

use super::{invariant, AvhsError, Result};
use crate::matrix::QMatrix;
use crate::Rat;

/// A rational trilinear form on a `dim`-dimensional space, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trilinear {
    dim: usize,
    data: Vec<Rat>,
}

impl Trilinear {
    pub fn zero(dim: usize) -> Self {
        Trilinear {
            dim,
            data: vec![Rat::zero(); dim * dim * dim],
        }
    }

    /// Builds a totally symmetric form from `(a, b, c, value)` entries.
    ///
    /// Each entry sets its own slot; permutations that no entry names
    /// explicitly inherit the value. Two entries naming permutations of the
    /// same triple with different values therefore yield a non-symmetric form.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, Rat)]) -> Result<Self> {
        let mut t = Trilinear::zero(dim);
        let mut explicit = vec![false; dim * dim * dim];
        for (a, b, c, _) in entries {
            for &i in &[*a, *b, *c] {
                if i >= dim {
                    return Err(AvhsError::OutOfRange { index: i, size: dim });
                }
            }
        }
        for (a, b, c, v) in entries {
            let k = t.index(*a, *b, *c);
            t.data[k] = v.clone();
            explicit[k] = true;
        }
        for (a, b, c, v) in entries {
            for (x, y, z) in permutations(*a, *b, *c) {
                let k = t.index(x, y, z);
                if !explicit[k] {
                    t.data[k] = v.clone();
                }
            }
        }
        Ok(t)
    }

    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.dim + b) * self.dim + c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Rat {
        &self.data[self.index(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Rat) {
        let k = self.index(a, b, c);
        self.data[k] = v;
    }

    pub fn set_symmetric(&mut self, a: usize, b: usize, c: usize, v: Rat) {
        for (x, y, z) in permutations(a, b, c) {
            self.set(x, y, z, v.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// First `(a, b, c)` where the form is not symmetric.
    pub fn asymmetry(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.dim {
            for b in 0..self.dim {
                for c in 0..self.dim {
                    let v = self.get(a, b, c);
                    if permutations(a, b, c).any(|(x, y, z)| self.get(x, y, z) != v) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    /// Nonzero entries in lexicographic order. For a symmetric form only
    /// sorted triples `a ≤ b ≤ c` are listed; otherwise every slot of every
    /// triple touched by a nonzero value is listed, so that
    /// [`Trilinear::from_entries`] reproduces the form exactly.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rat)> {
        let sym = self.is_symmetric();
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in 0..self.dim {
                for c in 0..self.dim {
                    if sym {
                        if a <= b && b <= c && !self.get(a, b, c).is_zero() {
                            out.push((a, b, c, self.get(a, b, c).clone()));
                        }
                    } else if permutations(a, b, c).any(|(x, y, z)| !self.get(x, y, z).is_zero()) {
                        out.push((a, b, c, self.get(a, b, c).clone()));
                    }
                }
            }
        }
        out
    }

    /// The matrix `M[b][c] = T(a, b, c)` with the first slot fixed.
    pub fn slice(&self, a: usize) -> QMatrix {
        QMatrix::from_fn(self.dim, self.dim, |b, c| self.get(a, b, c).clone())
    }

    /// `T(x, b, c)` for a vector `x` in the first slot.
    pub fn contract_first(&self, x: &[Rat]) -> QMatrix {
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..self.dim {
                for c in 0..self.dim {
                    let v = self.get(a, b, c);
                    if !v.is_zero() {
                        m[(b, c)] += xa * v;
                    }
                }
            }
        }
        m
    }
}

fn permutations(a: usize, b: usize, c: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)].into_iter()
}

/// `⊕_{ℓ=0}^{n} H^{ℓ,ℓ}` with its basis ordered by degree, the unit first,
/// the classical triple intersection form and the Poincaré pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    n: usize,
    dims: Vec<usize>,
    labels: Vec<String>,
    cup: Trilinear,
    pairing: QMatrix,
    pairing_inv: QMatrix,
    degrees: Vec<usize>,
}

impl GradedSpace {
    /// Validates the data: `dim H⁰ = 1`, a symmetric cup form supported in
    /// total degree `n`, the pairing `P(a,b) = T(1,a,b)` (matching `pairing`
    /// when supplied) nondegenerate, and an associative classical product.
    pub fn new(
        n: usize,
        dims: Vec<usize>,
        labels: Option<Vec<String>>,
        cup: Trilinear,
        pairing: Option<QMatrix>,
    ) -> Result<Self> {
        if dims.len() != n + 1 {
            return Err(invariant("graded dimensions", format!("expected {} entries, got {}", n + 1, dims.len())));
        }
        if dims[0] != 1 {
            return Err(invariant("unit", format!("dim H^0 = {}", dims[0])));
        }
        let degrees: Vec<usize> = dims
            .iter()
            .enumerate()
            .flat_map(|(l, &d)| std::iter::repeat(l).take(d))
            .collect();
        let dim = degrees.len();
        if cup.dim() != dim {
            return Err(AvhsError::Shape(format!("cup form on {} classes, space has {}", cup.dim(), dim)));
        }
        let labels = match labels {
            Some(l) if l.len() != dim => {
                return Err(AvhsError::Shape(format!("{} labels for {} classes", l.len(), dim)));
            }
            Some(l) => l,
            None => default_labels(&dims),
        };
        if let Some((a, b, c)) = cup.asymmetry() {
            return Err(invariant("cup symmetric", format!("T({a},{b},{c}) differs from a permutation")));
        }
        for (a, b, c, _) in cup.entries() {
            if degrees[a] + degrees[b] + degrees[c] != n {
                return Err(invariant("cup degree", format!("T({a},{b},{c}) ≠ 0 in total degree ≠ {n}")));
            }
        }
        let p = cup.slice(0);
        if let Some(given) = &pairing {
            if given != &p {
                return Err(invariant("pairing matches cup", "P(a,b) must equal T(1,a,b)"));
            }
        }
        let pinv = p.inverse().ok_or(AvhsError::DegeneratePairing)?;
        let space = GradedSpace {
            n,
            dims,
            labels,
            cup,
            pairing: p,
            pairing_inv: pinv,
            degrees,
        };
        for a in 0..dim {
            let ad_a = space.ad_basis(a);
            for b in 0..dim {
                let ab = space.cup_product(&unit_vec(dim, a), &unit_vec(dim, b));
                if space.ad(&ab) != &ad_a * &space.ad_basis(b) {
                    return Err(invariant("cup associative", format!("(e{a}∪e{b})∪x ≠ e{a}∪(e{b}∪x)")));
                }
            }
        }
        Ok(space)
    }

    /// `ℙⁿ`-type ring `ℚ[e]/(e^{n+1})` with `∫ eⁿ = volume`.
    pub fn projective(n: usize, volume: Rat) -> Result<Self> {
        let dim = n + 1;
        let mut t = Trilinear::zero(dim);
        for a in 0..dim {
            for b in 0..dim {
                if a + b <= n {
                    t.set(a, b, n - a - b, volume.clone());
                }
            }
        }
        let labels = (0..dim)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "e".to_string(),
                _ => format!("e^{k}"),
            })
            .collect();
        GradedSpace::new(n, vec![1; dim], Some(labels), t, None)
    }

    /// `H^ev` of a threefold with `h^{1,1} = r` whose triple intersection
    /// form on `H²` is the symmetric cubic `kappa` (indices `r×r×r`).
    /// Basis: `1, e_1..e_r, f_1..f_r, pt` with `e_a·f_b = δ_ab`.
    pub fn threefold(kappa: &Trilinear) -> Result<Self> {
        let r = kappa.dim();
        let dim = 2 * r + 2;
        let top = dim - 1;
        let mut t = Trilinear::zero(dim);
        t.set_symmetric(0, 0, top, Rat::one());
        for a in 0..r {
            t.set_symmetric(0, 1 + a, 1 + r + a, Rat::one());
            for b in 0..r {
                for c in 0..r {
                    t.set(1 + a, 1 + b, 1 + c, kappa.get(a, b, c).clone());
                }
            }
        }
        let mut labels = vec!["1".to_string()];
        labels.extend((1..=r).map(|a| format!("e{a}")));
        labels.extend((1..=r).map(|a| format!("f{a}")));
        labels.push("pt".into());
        GradedSpace::new(3, vec![1, r, r, 1], Some(labels), t, None)
    }

    /// `ℙ^a × ℙ^b` with hyperplane classes `h₁, h₂`.
    pub fn product_projective(a: usize, b: usize) -> Result<Self> {
        let n = a + b;
        // monomials h1^i h2^j with i ≤ a, j ≤ b, grouped by degree i + j
        let mut mons: Vec<(usize, usize)> = Vec::new();
        for d in 0..=n {
            for i in (0..=a.min(d)).rev() {
                let j = d - i;
                if j <= b {
                    mons.push((i, j));
                }
            }
        }
        let dim = mons.len();
        let mut dims = vec![0; n + 1];
        for &(i, j) in &mons {
            dims[i + j] += 1;
        }
        let mut t = Trilinear::zero(dim);
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let i = mons[x].0 + mons[y].0 + mons[z].0;
                    let j = mons[x].1 + mons[y].1 + mons[z].1;
                    if i == a && j == b {
                        t.set(x, y, z, Rat::one());
                    }
                }
            }
        }
        let labels = mons
            .iter()
            .map(|&(i, j)| match (i, j) {
                (0, 0) => "1".to_string(),
                _ => {
                    let f = |s: &str, k: usize| match k {
                        0 => String::new(),
                        1 => s.to_string(),
                        _ => format!("{s}^{k}"),
                    };
                    [f("h1", i), f("h2", j)].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*")
                }
            })
            .collect();
        GradedSpace::new(n, dims, Some(labels), t, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cup(&self) -> &Trilinear {
        &self.cup
    }

    pub fn pairing(&self) -> &QMatrix {
        &self.pairing
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Basis indices of `H^{ℓ,ℓ}`.
    pub fn degree_range(&self, l: usize) -> Range<usize> {
        let start: usize = self.dims[..l.min(self.dims.len())].iter().sum();
        let len = self.dims.get(l).copied().unwrap_or(0);
        start..start + len
    }

    /// Rank `r` of the framing, `dim H^{1,1}`.
    pub fn framing_rank(&self) -> usize {
        self.dims.get(1).copied().unwrap_or(0)
    }

    /// Basis index of the framing generator `e^{j+1}` (zero-based `j`).
    pub fn framing_index(&self, j: usize) -> usize {
        1 + j
    }

    /// The vector dual to a linear form under the pairing.
    pub fn sharp(&self, form: &[Rat]) -> Vec<Rat> {
        self.pairing_inv.mul_vec(form)
    }

    /// The matrix of `ad(x) = x ∪ ·`.
    pub fn ad(&self, x: &[Rat]) -> QMatrix {
        &self.pairing_inv * &self.cup.contract_first(x)
    }

    pub fn ad_basis(&self, a: usize) -> QMatrix {
        &self.pairing_inv * &self.cup.slice(a)
    }

    pub fn cup_product(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        self.ad(x).mul_vec(y)
    }

    /// `P⁻¹ M`: for a bilinear form `M`, column `a` is the dual of `M(·, a)`.
    pub fn sharp_matrix(&self, m: &QMatrix) -> QMatrix {
        &self.pairing_inv * m
    }

    /// `E^p = ⊕_{ℓ ≤ n−p} H^{ℓ,ℓ}` for `p = 0..=n`, as row bases.
    pub fn hodge_filtration(&self) -> Vec<QMatrix> {
        let dim = self.dim();
        (0..=self.n)
            .map(|p| {
                let idx: Vec<usize> = (0..dim).filter(|&i| self.degrees[i] + p <= self.n).collect();
                QMatrix::from_fn(idx.len(), dim, |r, c| if idx[r] == c { Rat::one() } else { Rat::zero() })
            })
            .collect()
    }

    pub fn unit(&self) -> Vec<Rat> {
        unit_vec(self.dim(), 0)
    }
}

pub(crate) fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn default_labels(dims: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    for (l, &d) in dims.iter().enumerate() {
        for k in 0..d {
            out.push(if l == 0 { "1".to_string() } else { format!("x{l}_{k}") });
        }
    }
    out
}

/// Hodge numbers `h^{p,q}` of an `n`-dimensional compact Kähler manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDiamond {
    n: usize,
    h: Vec<Vec<u64>>,
}

impl HodgeDiamond {
    /// Checks `h^{p,q} = h^{q,p} = h^{n−p,n−q}`.
    pub fn new(n: usize, h: Vec<Vec<u64>>) -> Result<Self> {
        if h.len() != n + 1 || h.iter().any(|r| r.len() != n + 1) {
            return Err(AvhsError::Shape(format!("Hodge table must be {0}×{0}", n + 1)));
        }
        for p in 0..=n {
            for q in 0..=n {
                if h[p][q] != h[q][p] {
                    return Err(invariant("hodge symmetry", format!("h^{{{p},{q}}} ≠ h^{{{q},{p}}}")));
                }
                if h[p][q] != h[n - p][n - q] {
                    return Err(invariant("serre duality", format!("h^{{{p},{q}}} ≠ h^{{{},{}}}", n - p, n - q)));
                }
            }
        }
        Ok(HodgeDiamond { n, h })
    }

    /// A Calabi–Yau diamond of dimension 2 or 3 from `h^{1,1}` and `h^{n−1,1}`.
    pub fn calabi_yau(n: usize, h11: u64, hn11: u64) -> Result<Self> {
        let mut h = vec![vec![0; n + 1]; n + 1];
        match n {
            2 => {
                if h11 != hn11 {
                    return Err(invariant("hodge symmetry", "a surface has h^{1,1} = h^{n-1,1}"));
                }
                h[0][0] = 1;
                h[2][2] = 1;
                h[2][0] = 1;
                h[0][2] = 1;
                h[1][1] = h11;
            }
            3 => {
                for (p, q) in [(0, 0), (3, 3), (3, 0), (0, 3)] {
                    h[p][q] = 1;
                }
                h[1][1] = h11;
                h[2][2] = h11;
                h[2][1] = hn11;
                h[1][2] = hn11;
            }
            _ => {
                return Err(AvhsError::Shape(format!(
                    "Calabi–Yau shorthand needs n = 2 or 3, got {n}; give the full table"
                )))
            }
        }
        HodgeDiamond::new(n, h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self, p: usize, q: usize) -> u64 {
        self.h[p][q]
    }

    pub fn table(&self) -> &[Vec<u64>] {
        &self.h
    }
}

/// `h^{n−1,1}(X) = h^{1,1}(Y)` and `h^{1,1}(X) = h^{n−1,1}(Y)`.
pub fn topological_mirror_test(x: &HodgeDiamond, y: &HodgeDiamond) -> Result<bool> {
    if x.n != y.n {
        return Err(AvhsError::Shape(format!("dimensions {} and {}", x.n, y.n)));
    }
    let n = x.n;
    if n < 2 {
        return Err(AvhsError::Shape("the test needs n ≥ 2".into()));
    }
    Ok(x.h(n - 1, 1) == y.h(1, 1) && x.h(1, 1) == y.h(n - 1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    #[test]
    fn projective_ring() {
        let s = GradedSpace::projective(3, rat(5)).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.pairing()[(1, 2)], rat(5));
        let ad = s.ad_basis(1);
        // e·1 = e, e·e³ = 0
        assert_eq!(ad.col(0), unit_vec(4, 1));
        assert!(ad.col(3).iter().all(|x| x.is_zero()));
        assert_eq!(ad.col(2), unit_vec(4, 3));
    }

    #[test]
    fn products_and_threefolds() {
        let s = GradedSpace::product_projective(1, 2).unwrap();
        assert_eq!(s.dims(), &[1, 2, 2, 1]);
        let s = GradedSpace::product_projective(1, 3).unwrap();
        assert_eq!(s.dims(), &[1, 2, 2, 2, 1]);
        let mut k = Trilinear::zero(2);
        k.set_symmetric(0, 0, 1, rat(3));
        k.set(1, 1, 1, rat(-2));
        let s = GradedSpace::threefold(&k).unwrap();
        assert_eq!(s.dims(), &[1, 2, 2, 1]);
    }

    #[test]
    fn rejects_bad_rings() {
        let mut t = Trilinear::zero(2);
        t.set(0, 0, 1, rat(1));
        assert!(matches!(
            GradedSpace::new(1, vec![1, 1], None, t.clone(), None),
            Err(AvhsError::Invariant { name: "cup symmetric", .. })
        ));
        t.set_symmetric(0, 0, 1, rat(1));
        t.set(1, 1, 1, rat(1));
        assert!(matches!(
            GradedSpace::new(1, vec![1, 1], None, t, None),
            Err(AvhsError::Invariant { name: "cup degree", .. })
        ));
        assert!(matches!(
            GradedSpace::new(1, vec![1, 1], None, Trilinear::zero(2), None),
            Err(AvhsError::DegeneratePairing)
        ));
    }

    #[test]
    fn trilinear_entries_round_trip() {
        let mut t = Trilinear::zero(3);
        t.set_symmetric(0, 1, 2, rat(4));
        let back = Trilinear::from_entries(3, &t.entries()).unwrap();
        assert_eq!(back, t);
        t.set(2, 1, 0, rat(7));
        assert!(!t.is_symmetric());
        let back = Trilinear::from_entries(3, &t.entries()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn mirror_test_examples() {
        let x = HodgeDiamond::calabi_yau(3, 1, 101).unwrap();
        let y = HodgeDiamond::calabi_yau(3, 101, 1).unwrap();
        assert!(topological_mirror_test(&x, &y).unwrap());
        assert!(!topological_mirror_test(&x, &x).unwrap());
        let k3 = HodgeDiamond::calabi_yau(2, 20, 20).unwrap();
        assert!(topological_mirror_test(&k3, &k3).unwrap());
        assert!(topological_mirror_test(&x, &k3).is_err());
    }
}
