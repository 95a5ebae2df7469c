//! Random instance generators shared by the integration suites.

use std::collections::BTreeMap;

use mirrorcalc::avhs::{EffectiveClass, GWData, GradedSpace, Trilinear};
use mirrorcalc::lattice::{integer_kernel, LatVec, Lattice, Sublattice};
use mirrorcalc::mukai::{MukaiLattice, MukaiVector, PeriodPoint};
use mirrorcalc::matrix::{IntMatrix, QMatrix};
use mirrorcalc::{Int, Rat};
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Random unimodular integer matrix: a product of elementary moves.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, moves: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..moves {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let k = Int::from(rng.gen_range(-2i64..=2));
        m.add_row_multiple(a, b, &k);
        if rng.gen_bool(0.2) {
            m.swap_rows(a, b);
        }
    }
    m
}

/// A saturated sublattice of rank `k` in `ℤⁿ`: the first `k` rows of a
/// random unimodular matrix.
pub fn random_saturated(rng: &mut impl Rng, n: usize, k: usize) -> Sublattice {
    let u = random_unimodular(rng, n, 3 * n + 2);
    let basis = (0..k).map(|i| LatVec(u.row(i).to_vec())).collect();
    Sublattice::new(n, basis).expect("rows of a unimodular matrix are independent")
}

pub fn random_vec(rng: &mut impl Rng, n: usize, range: i64) -> LatVec {
    LatVec((0..n).map(|_| Int::from(rng.gen_range(-range..=range))).collect())
}

/// Pairs of basis vectors `(e_i, e_j)` spanning a hyperbolic plane:
/// both isotropic with `⟨e_i, e_j⟩ = ±1`.
pub fn hyperbolic_planes(l: &Lattice) -> Vec<(LatVec, LatVec)> {
    let g = l.gram();
    let n = l.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if g[(i, i)].is_zero() && g[(j, j)].is_zero() && (g[(i, j)] == Int::one() || g[(i, j)] == -Int::one()) {
                out.push((LatVec::unit(n, i), LatVec::unit(n, j)));
            }
        }
    }
    out
}

/// A random primitive isotropic vector: a hyperbolic-plane vector pushed
/// through `steps` random Eichler transvections `E(e, u)`, where `e` is
/// isotropic in a standard plane and `u ⊥ e`.
pub fn random_primitive_isotropic(rng: &mut impl Rng, l: &Lattice, steps: usize) -> LatVec {
    let planes = hyperbolic_planes(l);
    assert!(!planes.is_empty(), "lattice has no standard hyperbolic plane");
    let n = l.rank();
    let (e0, f0) = planes.choose(rng).unwrap();
    let mut v = if rng.gen_bool(0.5) { e0.clone() } else { f0.clone() };
    for _ in 0..steps {
        let (e, f) = planes.choose(rng).unwrap();
        let (e, f) = if rng.gen_bool(0.5) { (e, f) } else { (f, e) };
        let w = random_vec(rng, n, 1);
        let fe = l.pair(f, e).unwrap();
        let c = l.pair(&w, e).unwrap() * &fe;
        let u = w.add_scaled(&-c, f);
        debug_assert!(l.pair(&u, e).unwrap().is_zero());
        v = transvect(l, e, &u, &v);
    }
    v
}

/// `(a, β, β²/2a)` with `a = ±1`: isotropic and primitive in `ℤ ⊕ H² ⊕ ℤ`
/// with the Mukai pairing.
pub fn random_isotropic_mukai(rng: &mut impl Rng, h2: &Lattice, range: i64) -> (Int, LatVec, Int) {
    let a: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let beta = random_vec(rng, h2.rank(), range);
    let sq = h2.pair(&beta, &beta).unwrap();
    let c = sq / Int::from(2 * a);
    (Int::from(a), beta, c)
}

/// `E(z, w)(x) = x + ⟨x,z⟩w − ⟨x,w⟩z − ½⟨w,w⟩⟨x,z⟩z` for isotropic `z ⊥ w`.
pub fn transvect(l: &Lattice, z: &LatVec, w: &LatVec, x: &LatVec) -> LatVec {
    let xz = l.pair(x, z).unwrap();
    let xw = l.pair(x, w).unwrap();
    let half_ww = l.pair(w, w).unwrap() / Int::from(2);
    x.add_scaled(&xz, w).add_scaled(&-xw, z).add_scaled(&-(half_ww * &xz), z)
}

/// Three-point data for class `eta` obeying symmetry, the degree
/// condition, the unit axiom and the divisor relation: for a triple of
/// non-unit classes, the degree-one members contribute `∏ η·e` and the
/// remaining members a random symmetric value.
pub fn random_phi(rng: &mut impl Rng, s: &GradedSpace, eta: &EffectiveClass, range: i64) -> Trilinear {
    let dim = s.dim();
    let n = s.n();
    let mut base: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    let mut t = Trilinear::zero(dim);
    for a in 1..dim {
        for b in a..dim {
            for c in b..dim {
                if s.degree(a) + s.degree(b) + s.degree(c) != n {
                    continue;
                }
                let mut coeff = Int::one();
                let mut rest = Vec::new();
                for &x in &[a, b, c] {
                    if s.degree(x) == 1 {
                        coeff *= Int::from(eta.exponents()[x - 1]);
                    } else {
                        rest.push(x);
                    }
                }
                let v = *base.entry(rest).or_insert_with(|| rng.gen_range(-range..=range));
                let val = Rat::from_integer(coeff * Int::from(v));
                if !val.is_zero() {
                    t.set_symmetric(a, b, c, val);
                }
            }
        }
    }
    t
}

pub fn random_classes(rng: &mut impl Rng, r: usize, count: usize, max_exp: i64) -> Vec<EffectiveClass> {
    let mut out: Vec<EffectiveClass> = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 50 {
        tries += 1;
        let e: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=max_exp)).collect();
        if let Ok(c) = EffectiveClass::new(&e) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Random symmetric nondegenerate integer `r×r` form.
fn random_form(rng: &mut impl Rng, r: usize) -> QMatrix {
    loop {
        let mut m = QMatrix::zeros(r, r);
        for i in 0..r {
            for j in i..r {
                let v = rat(rng.gen_range(-2..=2));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// Surface ring `1, e_1..e_r, pt` with intersection form `q` on `H²`.
pub fn surface(q: &QMatrix) -> GradedSpace {
    let r = q.rows();
    let dim = r + 2;
    let mut t = Trilinear::zero(dim);
    t.set_symmetric(0, 0, dim - 1, Rat::one());
    for a in 0..r {
        for b in a..r {
            if !q[(a, b)].is_zero() {
                t.set_symmetric(0, 1 + a, 1 + b, q[(a, b)].clone());
            }
        }
    }
    GradedSpace::new(2, vec![1, r, 1], None, t, None).expect("surface ring")
}

/// Fourfold ring with dims (1,1,2,1,1): `e² = Σ τ_i x_i^♯`.
pub fn fourfold_rank_one(rng: &mut impl Rng) -> GradedSpace {
    let m = random_form(rng, 2);
    let mut t = Trilinear::zero(6);
    t.set_symmetric(0, 0, 5, Rat::one());
    t.set_symmetric(0, 1, 4, Rat::one());
    for i in 0..2 {
        for j in i..2 {
            if !m[(i, j)].is_zero() {
                t.set_symmetric(0, 2 + i, 2 + j, m[(i, j)].clone());
            }
        }
        let tau = rat(rng.gen_range(-2..=2));
        if !tau.is_zero() {
            t.set_symmetric(1, 1, 2 + i, tau);
        }
    }
    GradedSpace::new(4, vec![1, 1, 2, 1, 1], None, t, None).expect("fourfold ring")
}

/// A random classical ring with `r ≤ 2` and total dimension `≤ 6`.
pub fn random_small_space(rng: &mut impl Rng) -> GradedSpace {
    match rng.gen_range(0..6) {
        0 => GradedSpace::projective(rng.gen_range(1..=5), rat(rng.gen_range(1..=5))).unwrap(),
        1 | 2 => {
            let r = rng.gen_range(1..=2);
            let mut k = Trilinear::zero(r);
            for a in 0..r {
                for b in a..r {
                    for c in b..r {
                        k.set_symmetric(a, b, c, rat(rng.gen_range(-3..=3)));
                    }
                }
            }
            GradedSpace::threefold(&k).unwrap()
        }
        3 => GradedSpace::product_projective(1, 1).unwrap(),
        4 => {
            let r = rng.gen_range(1..=2);
            surface(&random_form(rng, r))
        }
        _ => fourfold_rank_one(rng),
    }
}

pub fn random_gw(rng: &mut impl Rng, s: GradedSpace) -> GWData {
    let r = s.framing_rank();
    let count = rng.gen_range(0..=3);
    let classes = random_classes(rng, r, count, 2);
    let data = classes
        .into_iter()
        .map(|eta| {
            let phi = random_phi(rng, &s, &eta, 3);
            (eta, phi)
        })
        .collect();
    GWData::new(s, data).expect("generated data is well formed")
}

pub fn random_small_gw(rng: &mut impl Rng) -> GWData {
    let s = random_small_space(rng);
    random_gw(rng, s)
}

/// Random nilpotent matrix of size `dim`: a random Jordan type conjugated
/// by a random unimodular matrix. Returns the matrix and the Jordan type.
pub fn random_nilpotent(rng: &mut impl Rng, dim: usize) -> (QMatrix, Vec<usize>) {
    let mut blocks = Vec::new();
    let mut left = dim;
    while left > 0 {
        let b = rng.gen_range(1..=left);
        blocks.push(b);
        left -= b;
    }
    blocks.shuffle(rng);
    let mut j = QMatrix::zeros(dim, dim);
    let mut off = 0;
    for &b in &blocks {
        for i in 0..b.saturating_sub(1) {
            j[(off + i + 1, off + i)] = Rat::one();
        }
        off += b;
    }
    let s = random_unimodular(rng, dim, 2 * dim).to_rational();
    let sinv = s.inverse().unwrap();
    (&(&s * &j) * &sinv, blocks)
}

/// A random primitive isotropic Mukai vector, from either an Eichler walk
/// in the full lattice or the family `(±1, β, ±β²/2)`.
pub fn random_isotropic_mukai_vector(rng: &mut impl Rng, l: &MukaiLattice) -> MukaiVector {
    if rng.gen_bool(0.5) {
        let steps = rng.gen_range(0..6);
        MukaiVector::from_latvec(&random_primitive_isotropic(rng, l.lattice(), steps))
    } else {
        let (a, beta, c) = random_isotropic_mukai(rng, l.h2(), 2);
        MukaiVector::new(a, beta, c)
    }
}

fn random_small_rat(rng: &mut impl Rng) -> Rat {
    Rat::new(Int::from(rng.gen_range(-4i64..=4)), Int::from(rng.gen_range(1i64..=3)))
}

/// A random rational period `Ω = e − (w²/2)·f + w` in `H²` coordinates,
/// where `(e, f)` are the first two basis vectors (a hyperbolic plane) and
/// `w = a + i·b` lies in their orthogonal complement with `b² > 0`.
/// Then `Ω·Ω = 0` and `Ω·Ω̄ = 2b²`. Returns `(Ω, 2b²)`.
pub fn random_period(rng: &mut impl Rng, h2: &Lattice) -> (PeriodPoint, Rat) {
    let n = h2.rank();
    let g = h2.gram();
    assert!(n >= 4 && g[(0, 0)].is_zero() && g[(1, 1)].is_zero() && g[(0, 1)] == Int::one());
    let pair = |x: &[Rat], y: &[Rat]| h2.pair_rational(x, y).unwrap();
    loop {
        let mut a = vec![Rat::zero(); n];
        let mut b = vec![Rat::zero(); n];
        for i in 2..n {
            if i < 6 || rng.gen_bool(0.15) {
                a[i] = random_small_rat(rng);
                b[i] = random_small_rat(rng);
            }
        }
        let bb = pair(&b, &b);
        if bb <= Rat::zero() {
            continue;
        }
        let re_w2 = pair(&a, &a) - &bb;
        let im_w2 = pair(&a, &b) * rat(2);
        let mut re = a;
        re[0] += rat(1);
        re[1] -= re_w2 / rat(2);
        let mut im = b;
        im[1] -= im_w2 / rat(2);
        return (PeriodPoint::new(re, im), bb * rat(2));
    }
}

/// A primitive isotropic `v` with `β ⊥ Ω`: either the point class or
/// `(±1, β, ±β²/2)` with `β` in the integral lattice orthogonal to `Ω`.
pub fn admissible_vector(rng: &mut impl Rng, l: &MukaiLattice, omega_h2: &PeriodPoint) -> MukaiVector {
    if rng.gen_bool(0.1) {
        return l.point_class();
    }
    let h2 = l.h2();
    let n = h2.rank();
    let forms: Vec<Vec<Int>> = [&omega_h2.re, &omega_h2.im]
        .iter()
        .map(|part| {
            let row: Vec<Rat> = (0..n)
                .map(|j| (0..n).map(|i| &part[i] * Rat::from_integer(h2.gram()[(i, j)].clone())).sum())
                .collect();
            let den = row.iter().fold(Int::one(), |acc, x| num::integer::lcm(acc, x.denom().clone()));
            row.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect()
        })
        .collect();
    let m = IntMatrix::from_rows(forms, n);
    let k = integer_kernel(&m);
    let mut beta = LatVec::zero(n);
    for r in 0..k.rows() {
        let c = Int::from(rng.gen_range(-2i64..=2));
        beta = beta.add_scaled(&c, &LatVec(k.row(r).to_vec()));
    }
    let a: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let sq = h2.pair(&beta, &beta).unwrap();
    MukaiVector::new(Int::from(a), beta, sq / Int::from(2 * a))
}
