//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mirrorcalc::avhs::{
    associativity_check, connection_operator, flatness_check, griffiths_check, weight_filtration,
    ConnectionPresentation, GWData, GradedSpace, HodgeDiamond,
};
use mirrorcalc::io::{emit_json, emit_json_pretty, parse_json, JsonCodec};
use mirrorcalc::lattice::{Lattice, LatVec};
use mirrorcalc::matrix::QMatrix;
use mirrorcalc::mukai::{
    euler_pairing, mirror_hodge_structure, mirror_map_vector, moduli_dimension, mukai_vector, ChernInput,
    MukaiLattice, MukaiVector,
};
use mirrorcalc::tduality::{annihilator, double_dual, t_dual_cycle, PureCycle};
use mirrorcalc::{Int, Rat};
use mirrorcalc_cli::run;
use mirrorcalc_testkit::*;
use num::{Integer, One, Signed, Zero};
use rand::Rng;

const C1_BUDGET: Duration = Duration::from_secs(1);
const C3_BUDGET: Duration = Duration::from_secs(60);
const C5_BUDGET: Duration = Duration::from_secs(300);
const C3_COUNT: usize = 100;
const C4_COUNT: usize = 100;
const C5_COUNT: usize = 200;
const C5_DEGREE: u32 = 4;
const C5_WIDE_COUNT: usize = 60;
const C7_COUNT: usize = 200;
const C8_COUNT: usize = 500;
const C9_COUNT: usize = 100;
const C10_COUNT: usize = 50;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn load_gw(name: &str) -> GWData {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    GWData::from_json(&parse_json(&text).unwrap()).unwrap()
}

fn unit_rows(idx: &[usize], dim: usize) -> QMatrix {
    QMatrix::from_fn(idx.len(), dim, |r, c| if idx[r] == c { Rat::one() } else { Rat::zero() })
}

fn same_span(a: &QMatrix, b: &QMatrix) -> bool {
    a.row_space_within(b) && b.row_space_within(a)
}

fn gcd_of(v: &LatVec) -> Int {
    v.0.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

fn criterion_1() -> Verdict {
    let l = MukaiLattice::k3();
    let h2 = l.h2();
    let u = Lattice::hyperbolic_plane();
    let e = Lattice::e8(true);
    let expected = Lattice::direct_sum(&[u.clone(), u.clone(), u, e.clone(), e]);
    ensure(h2.gram() == expected.gram(), || "H² is not U³ ⊕ E8(−1)²".into())?;
    let mut r = rng(1);
    let mut mus = vec![LatVec::unit(22, 0)];
    for steps in 0..20 {
        mus.push(random_primitive_isotropic(&mut r, h2, steps % 7));
    }
    let start = Instant::now();
    for mu in &mus {
        ensure(gcd_of(mu).is_one() && h2.pair(mu, mu).unwrap().is_zero(), || format!("{mu:?} not primitive isotropic"))?;
        let d = moduli_dimension(&l, &MukaiVector::new(Int::zero(), mu.clone(), Int::zero())).unwrap();
        ensure(d == Int::from(2), || format!("dimension {d} for {mu:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < C1_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{} vectors, dimension 2, {t:?} (limit {C1_BUDGET:?})", mus.len()))
}

fn criterion_2() -> Verdict {
    let l = MukaiLattice::k3();
    let o = mukai_vector(&l, &ChernInput { rank: Int::one(), c1: LatVec::zero(22), c2: Int::zero() }).unwrap();
    let v = MukaiVector::new(Int::one(), LatVec::zero(22), Int::one());
    ensure(o == v, || format!("v(O) = {o:?}"))?;
    // h⁰(O) − h¹(O) + h²(O) on a K3
    let chi_oracle = Int::from(1 - 0 + 1);
    let chi = euler_pairing(&l, &v, &v).unwrap();
    ensure(chi == chi_oracle, || format!("χ(O, O) = {chi}"))?;
    let d = moduli_dimension(&l, &v).unwrap();
    ensure(d.is_zero(), || format!("dimension {d}"))?;
    Ok("χ((1,0,1),(1,0,1)) = 2, dimension 0".into())
}

fn criterion_3() -> Verdict {
    let l = MukaiLattice::k3();
    let gram = l.lattice().gram().clone();
    let point = l.point_class().to_latvec();
    let mut r = rng(3);
    let start = Instant::now();
    for i in 0..C3_COUNT {
        let v = random_isotropic_mukai_vector(&mut r, &l);
        let g = mirror_map_vector(&l, &v).map_err(|e| format!("vector {i}: {e}"))?;
        ensure(g.apply(&v.to_latvec()) == point, || format!("vector {i}: g(v) ≠ (0,0,1)"))?;
        let m = g.matrix();
        ensure(&(&m.transpose() * &gram) * m == gram, || format!("vector {i}: gᵀGg ≠ G"))?;
    }
    let t = start.elapsed();
    ensure(t < C3_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{C3_COUNT} vectors, {t:?} (limit {C3_BUDGET:?})"))
}

fn criterion_4() -> Verdict {
    let l = MukaiLattice::k3();
    let mut r = rng(4);
    for i in 0..C4_COUNT {
        let (omega, _) = random_period(&mut r, l.h2());
        let v = admissible_vector(&mut r, &l, &omega);
        let (q, w) = mirror_hodge_structure(&l, &omega.embed_h2(), &v).map_err(|e| format!("period {i}: {e}"))?;
        let rr = q.pair_rational(&w.re, &w.re).unwrap();
        let ii = q.pair_rational(&w.im, &w.im).unwrap();
        let ri = q.pair_rational(&w.re, &w.im).unwrap();
        // Ω′·Ω′ = rr − ii + 2i·ri, Ω′·Ω̄′ = rr + ii
        ensure(rr == ii && ri.is_zero(), || format!("period {i}: Ω′·Ω′ ≠ 0"))?;
        ensure((&rr + &ii).is_positive(), || format!("period {i}: Ω′·Ω̄′ ≤ 0"))?;
    }
    Ok(format!("{C4_COUNT} periods"))
}

fn criterion_5() -> Verdict {
    let mut r = rng(5);
    let start = Instant::now();
    let (mut flat, mut curved) = (0, 0);
    for i in 0..C5_COUNT {
        let g = random_small_gw(&mut r);
        let s = g.space();
        ensure(s.framing_rank() <= 2 && s.dim() <= 6, || format!("instance {i} out of range"))?;
        let f = flatness_check(&g, C5_DEGREE).unwrap();
        let a = associativity_check(&g, C5_DEGREE).unwrap();
        ensure(f == a, || format!("instance {i}: flat {f}, associative {a}"))?;
        if f {
            flat += 1;
        } else {
            curved += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < C5_BUDGET, || format!("took {t:?}"))?;
    // larger products, where both verdicts occur
    let (mut wide_flat, mut wide_curved) = (0, 0);
    for i in 0..C5_WIDE_COUNT {
        let s = if i % 2 == 0 { GradedSpace::product_projective(1, 3) } else { GradedSpace::product_projective(2, 2) };
        let g = random_gw(&mut r, s.unwrap());
        let f = flatness_check(&g, C5_DEGREE).unwrap();
        let a = associativity_check(&g, C5_DEGREE).unwrap();
        ensure(f == a, || format!("wide instance {i}: flat {f}, associative {a}"))?;
        if f {
            wide_flat += 1;
        } else {
            wide_curved += 1;
        }
    }
    Ok(format!(
        "{C5_COUNT} instances at D = {C5_DEGREE} ({flat} flat, {curved} not), {t:?} (limit {C5_BUDGET:?}); \
         {C5_WIDE_COUNT} P¹×P³/P²×P² instances ({wide_flat} flat, {wide_curved} not)"
    ))
}

/// `ad(e^j)` from the cup form: column `a` is the `y` with `P·y = (cup(j, a, b))_b`.
fn ad_oracle(s: &GradedSpace, j: usize) -> QMatrix {
    let dim = s.dim();
    let idx = s.framing_index(j);
    let mut out = QMatrix::zeros(dim, dim);
    for a in 0..dim {
        let rhs: Vec<Rat> = (0..dim).map(|b| s.cup().get(idx, a, b).clone()).collect();
        let y = s.pairing().solve(&rhs).expect("nondegenerate pairing");
        for (k, x) in y.into_iter().enumerate() {
            out[(k, a)] = x;
        }
    }
    out
}

fn criterion_6() -> Verdict {
    let mut cases: Vec<(String, GWData)> = ["toy.json", "nonassoc.json"]
        .iter()
        .map(|n| (n.to_string(), load_gw(n)))
        .collect();
    cases.push(("P³".into(), GWData::classical(GradedSpace::projective(3, rat(1)).unwrap())));
    cases.push(("P¹×P²".into(), GWData::classical(GradedSpace::product_projective(1, 2).unwrap())));
    let mut r = rng(6);
    for i in 0..50 {
        cases.push((format!("random {i}"), random_small_gw(&mut r)));
    }
    let mut count = 0;
    for (name, g) in &cases {
        for j in 0..g.framing_rank() {
            let n0 = connection_operator(g, j, C5_DEGREE).unwrap().at_zero();
            ensure(n0 == ad_oracle(g.space(), j), || format!("{name}: N_{}(0) ≠ ad(e^{})", j + 1, j + 1))?;
            count += 1;
        }
    }
    Ok(format!("{} fixtures, {count} operators", cases.len()))
}

/// Graded dimensions from the Jordan type: a block of size `m` has weights
/// `c − (m−1), c − (m−3), …, c + (m−1)`.
fn jordan_graded_dim(blocks: &[usize], center: i64, k: i64) -> usize {
    blocks
        .iter()
        .map(|&m| {
            let m = m as i64;
            (0..m).filter(|i| center - (m - 1) + 2 * i == k).count()
        })
        .sum()
}

fn criterion_7() -> Verdict {
    let s = GradedSpace::projective(3, rat(1)).unwrap();
    let w = weight_filtration(&s.ad_basis(1), 3).unwrap();
    // {e³} ⊂ {e³, e²} ⊂ {e³, e², e} ⊂ all
    let expected = [(0, vec![3]), (2, vec![2, 3]), (4, vec![1, 2, 3]), (6, vec![0, 1, 2, 3])];
    for (k, idx) in &expected {
        ensure(same_span(&w.level(*k), &unit_rows(idx, 4)), || format!("W_{k} of ad(e) on P³"))?;
        ensure(same_span(&w.level(*k + 1), &w.level(*k)), || format!("W_{} ≠ W_{k}", k + 1))?;
    }
    ensure(w.level(-1).rows() == 0, || "W_{-1} ≠ 0".into())?;

    let mut r = rng(7);
    for i in 0..C7_COUNT {
        let dim = r.gen_range(1..=8);
        let center = r.gen_range(-3..=6);
        let (n, blocks) = random_nilpotent(&mut r, dim);
        let w = weight_filtration(&n, center).unwrap();
        w.verify(&n).map_err(|e| format!("nilpotent {i}: {e}"))?;
        for k in w.lowest - 1..=w.highest() + 1 {
            ensure(w.graded_dim(k) == jordan_graded_dim(&blocks, center, k), || {
                format!("nilpotent {i}: dim gr_{k}")
            })?;
        }
    }
    Ok(format!("P³ fixture and {C7_COUNT} random nilpotents"))
}

fn criterion_8() -> Verdict {
    let mut r = rng(8);
    for i in 0..C8_COUNT {
        let n = r.gen_range(1..=6);
        let k = r.gen_range(0..=n);
        let s = random_saturated(&mut r, n, k);
        let a = annihilator(&s).unwrap();
        ensure(a.rank() + s.rank() == n, || format!("sublattice {i}: ranks"))?;
        ensure(double_dual(&s).unwrap().same_lattice(&s), || format!("sublattice {i}: Ann(Ann(S)) ≠ S"))?;
    }
    for n in 1..=6 {
        let f = t_dual_cycle(&PureCycle::fiber_class(n)).unwrap();
        ensure(f.degree == 0, || format!("fiber in dimension {n}: degree {}", f.degree))?;
        let sec = t_dual_cycle(&PureCycle::section(n, 1).unwrap()).unwrap();
        ensure(sec.degree == 2 * n, || format!("section in dimension {n}: degree {}", sec.degree))?;
        for m in 1..=4 {
            let d = t_dual_cycle(&PureCycle::section(n, m).unwrap()).unwrap();
            ensure(d.rank_hint == m, || format!("{m}-section in dimension {n}: rank {}", d.rank_hint))?;
        }
    }
    Ok(format!("{C8_COUNT} sublattices, fiber/section/multisection anchors"))
}

fn criterion_9() -> Verdict {
    let mut r = rng(9);
    let mut presentations = vec![ConnectionPresentation::a_model(&load_gw("toy.json"), 4).unwrap()];
    for _ in 0..C9_COUNT {
        let d = r.gen_range(1..=4);
        presentations.push(ConnectionPresentation::a_model(&random_small_gw(&mut r), d).unwrap());
    }
    for (i, p) in presentations.iter().enumerate() {
        let rep = griffiths_check(p, p.cutoff());
        ensure(rep.transversal, || format!("presentation {i}: {:?}", rep.reason))?;
    }

    let p = ConnectionPresentation::a_model(&load_gw("toy.json"), 3).unwrap();
    let mut f = p.filtration().to_vec();
    f.swap(0, 1);
    let nesting = p.clone().with_filtration(f).unwrap();
    let mut ops = p.operators().to_vec();
    let mut m = QMatrix::zeros(4, 4);
    m[(2, 0)] = Rat::one();
    ops[0].add_term(vec![1], m);
    let operator = p.clone().with_operators(ops).unwrap();
    for (name, q) in [("non-nested filtration", nesting), ("F³ carried outside F²", operator)] {
        ensure(!griffiths_check(&q, 3).transversal, || format!("{name} was accepted"))?;
    }
    Ok(format!("{} generated presentations pass, 2 injected violations fail", presentations.len()))
}

fn invocations() -> Vec<Vec<String>> {
    let f = |n: &str| fixture(n);
    let raw: Vec<Vec<String>> = vec![
        vec!["lattice".into(), "pair".into(), "--in".into(), f("u.json"), "--u".into(), "1,0".into(), "--v".into(), "0,1".into()],
        vec!["lattice".into(), "snf".into(), "--in".into(), f("snf.json")],
        vec!["lattice".into(), "complement".into(), "--in".into(), f("u3.json")],
        vec!["lattice".into(), "quotient".into(), "--in".into(), f("u3.json")],
        vec!["lattice".into(), "standardize".into(), "--in".into(), f("u3.json")],
        vec!["mukai".into(), "vec".into(), "--in".into(), f("chern.json")],
        vec!["mukai".into(), "chi".into(), "--v".into(), "1,0,1".into()],
        vec!["mukai".into(), "dim".into(), "--in".into(), f("k3.json"), "--v".into(), "0,mu,0".into()],
        vec!["mukai".into(), "mirror".into(), "--in".into(), f("k3.json"), "--v".into(), "0,mu,0".into()],
        vec!["mukai".into(), "hodge".into(), "--in".into(), f("period.json")],
        vec!["qcoh".into(), "validate".into(), "--in".into(), f("toy.json")],
        vec!["qcoh".into(), "flat".into(), "--in".into(), f("nonassoc.json")],
        vec!["qcoh".into(), "assoc".into(), "--in".into(), f("toy.json")],
        vec!["qcoh".into(), "residues".into(), "--in".into(), f("nonassoc.json")],
        vec!["qcoh".into(), "weights".into(), "--in".into(), f("nilpotent.json")],
        vec!["qcoh".into(), "griffiths".into(), "--in".into(), f("toy.json")],
        vec!["qcoh".into(), "compare".into(), "--in".into(), f("compare_same.json")],
        vec!["tori".into(), "ann".into(), "--in".into(), f("sub.json")],
        vec!["tori".into(), "dual".into(), "--in".into(), f("trisection.json")],
        vec!["tori".into(), "leray".into(), "--in".into(), f("leray.json")],
        vec!["mirrortest".into(), "hodge-numbers".into(), "--in".into(), f("quintic_mirror.json")],
    ];
    let mut out = Vec::new();
    for args in raw {
        for format in ["text", "machine"] {
            let mut a = args.clone();
            a.extend(["--format".to_string(), format.to_string()]);
            out.push(a);
        }
    }
    out
}

fn round_trip<T: JsonCodec + PartialEq + std::fmt::Debug>(what: &str, x: &T) -> Result<(), String> {
    let v = x.to_json();
    for text in [emit_json(&v), emit_json_pretty(&v)] {
        let back = T::from_json(&parse_json(&text).map_err(|e| format!("{what}: {e}"))?).map_err(|e| format!("{what}: {e}"))?;
        ensure(&back == x, || format!("{what}: value changed"))?;
        ensure(emit_json(&back.to_json()) == emit_json(&v), || format!("{what}: text changed"))?;
    }
    Ok(())
}

fn criterion_10() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_mirrorcalc");
    let runs = invocations();
    for a in &runs {
        let first = run(a.clone());
        ensure(first.code != 2, || format!("{a:?}: {}", first.stderr))?;
        ensure(run(a.clone()) == first, || format!("{a:?}: in-process output differs"))?;
        let p1 = Command::new(bin).args(a).output().map_err(|e| e.to_string())?;
        let p2 = Command::new(bin).args(a).output().map_err(|e| e.to_string())?;
        ensure(p1 == p2, || format!("{a:?}: process output differs"))?;
        ensure(p1.stdout == first.stdout.as_bytes(), || format!("{a:?}: binary and library differ"))?;
        ensure(p1.status.code() == Some(first.code), || format!("{a:?}: exit codes differ"))?;
    }

    let mut r = rng(10);
    let l = MukaiLattice::k3();
    for i in 0..C10_COUNT {
        let g = random_small_gw(&mut r);
        round_trip("GW data", &g)?;
        let p = ConnectionPresentation::a_model(&g, r.gen_range(0..=4)).unwrap();
        round_trip("presentation", &p)?;
        let n = r.gen_range(1..=6);
        let k = r.gen_range(0..=n);
        let s = random_saturated(&mut r, n, k);
        round_trip("sublattice", &s)?;
        let w = PureCycle::new(n, s, n - k, r.gen_range(1..=4)).unwrap();
        round_trip("pure cycle", &w)?;
        round_trip("dual class", &t_dual_cycle(&w).unwrap())?;
        round_trip("mukai vector", &random_isotropic_mukai_vector(&mut r, &l))?;
        round_trip("period", &random_period(&mut r, l.h2()).0)?;
        let dim = r.gen_range(1..=8);
        let (nil, _) = random_nilpotent(&mut r, dim);
        round_trip("weight filtration", &weight_filtration(&nil, 3).unwrap())?;
        round_trip("hodge diamond", &HodgeDiamond::calabi_yau(3, i as u64, 101).unwrap())?;
    }
    for name in ["toy.json", "nonassoc.json"] {
        round_trip(name, &load_gw(name))?;
    }
    Ok(format!("{} CLI runs reproducible, {C10_COUNT} random round-trip batches", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Verdict); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL ({detail})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
