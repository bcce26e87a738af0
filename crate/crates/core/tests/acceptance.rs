//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use common::gen;
use manybody::admissible::SystemMap;
use manybody::blift;
use manybody::chartcalc::{
    affine_boundary_model, compare_atlases, pullback_exponents, run_program, BaseCoord, ChartAtlas, Kind,
    ModelCorner, MonomialMap,
};
use manybody::exactla::{self, rat, Matrix, Subspace};
use manybody::linsys::LinearSystem;
use manybody::mbfaces;
use manybody::scatprod::{self, ScatConfig};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, ctx: &str) -> Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

// 1 -------------------------------------------------------------------------

fn lattice_laws() -> Outcome {
    let mut r = gen::rng(1);
    let pairs = 1200;
    for t in 0..pairs {
        let n = r.gen_range(1..=6);
        let (a, b, c) = (gen::subspace(&mut r, n), gen::subspace(&mut r, n), gen::subspace(&mut r, n));
        let meet = ok(a.intersect(&b), "meet")?;
        let join = ok(a.sum(&b), "sum")?;
        ensure!(a.dim() + b.dim() == meet.dim() + join.dim(), "dim formula fails on pair {t}");
        ensure!(meet == ok(b.intersect(&a), "meet")?, "meet not commutative on pair {t}");
        ensure!(join == ok(b.sum(&a), "sum")?, "sum not commutative on pair {t}");
        let l = ok(meet.intersect(&c), "meet")?;
        let rr = ok(a.intersect(&ok(b.intersect(&c), "meet")?), "meet")?;
        ensure!(l == rr, "meet not associative on pair {t}");
        ensure!(ok(a.intersect(&join), "meet")? == a, "absorption a∧(a∨b) fails on pair {t}");
        ensure!(ok(a.sum(&meet), "sum")? == a, "absorption a∨(a∧b) fails on pair {t}");
        ensure!(ok(meet.is_subspace_of(&a), "leq")? && ok(a.is_subspace_of(&join), "leq")?, "order on pair {t}");
        let s = ok(LinearSystem::close(n, &[a.clone(), b.clone(), c.clone()]), "close")?;
        let again = ok(LinearSystem::close(n, s.members()), "close")?;
        ensure!(again == s, "closure not idempotent on triple {t}");
        for i in 0..s.len() {
            for j in 0..s.len() {
                let m = ok(s.member(i).unwrap().intersect(s.member(j).unwrap()), "meet")?;
                ensure!(s.index_of(&m) == Some(ok(s.meet(i, j), "meet")?), "closed meet wrong on triple {t}");
            }
        }
    }
    Ok(format!("{pairs} random pairs/triples, ambient <= 6, zero failures"))
}

// 2 -------------------------------------------------------------------------

fn restricted_growth(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0]];
    for _ in 1..len {
        let mut next = Vec::new();
        for p in out {
            let top = *p.iter().max().unwrap();
            for l in 0..=top + 1 {
                let mut q = p.clone();
                q.push(l);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn scatprod_counts() -> Outcome {
    let bell = [2usize, 5, 15, 52, 203];
    let mut got = Vec::new();
    for n in 1..=5 {
        let cfg = ScatConfig::new(n, 1).unwrap();
        let s = ok(scatprod::generate(cfg), "generate")?;
        let flats: HashSet<Subspace> = restricted_growth(n + 1)
            .iter()
            .map(|p| scatprod::partition_subspace(cfg, p))
            .collect();
        let members: HashSet<Subspace> = s.members().iter().cloned().collect();
        ensure!(s.len() == bell[n - 1], "n={n}: closure gives {} members, Bell is {}", s.len(), bell[n - 1]);
        ensure!(flats.len() == bell[n - 1], "n={n}: enumeration gives {}", flats.len());
        ensure!(flats == members, "n={n}: closure and partition enumeration differ");
        got.push(s.len());
    }
    for n in 1..=3 {
        let s = ok(scatprod::generate(ScatConfig::new(n, 2).unwrap()), "generate")?;
        ensure!(s.len() == bell[n - 1], "d=2, n={n}: {} members", s.len());
    }
    Ok(format!("counts {got:?} match Bell(n+1) by closure and by partition enumeration"))
}

// 3 -------------------------------------------------------------------------

fn random_surjection_case(r: &mut impl Rng, t: usize) -> SystemMap {
    let n = r.gen_range(1..=4);
    let domain = if t % 2 == 0 {
        gen::sum_closed_system(r, n)
    } else {
        let g = r.gen_range(1..=4);
        gen::system(r, n, g)
    };
    match t % 4 {
        0 | 1 => gen::quotient_map(r, &domain, "q"),
        _ => {
            let m = r.gen_range(0..=n);
            let f = gen::surjection(r, m, n);
            let codomain = if r.gen_bool(0.5) {
                let images: Vec<_> = domain.members().iter().map(|v| exactla::image(&f, v).unwrap()).collect();
                LinearSystem::close(m, &images).unwrap()
            } else {
                let g = r.gen_range(0..=2);
                gen::system(r, m, g)
            };
            SystemMap::new("f", f, domain, codomain).unwrap()
        }
    }
}

fn quotient_characterizations() -> Outcome {
    let mut r = gen::rng(3);
    let total = 400;
    let (mut yes, mut no) = (0, 0);
    for t in 0..total {
        let f = random_surjection_case(&mut r, t);
        let a = ok(f.is_admissible_quotient(), "image characterization")?.holds;
        let b = ok(f.is_quotient_of_kernel(), "kernel characterization")?;
        ensure!(a == b, "map {t}: image-based says {a}, kernel-based says {b}");
        if a {
            yes += 1;
        } else {
            no += 1;
        }
    }
    ensure!(yes > 0 && no > 0, "degenerate sample: {yes} true, {no} false");
    Ok(format!("{total} random surjections ({yes} quotients, {no} not), zero disagreements"))
}

// 4 -------------------------------------------------------------------------

fn standard_maps_lift() -> Outcome {
    let mut maps = 0;
    for n in 1..=4 {
        for d in 1..=2 {
            let rep = ok(scatprod::verify_standard_maps(ScatConfig::new(n, d).unwrap()), "verify")?;
            if let Some(bad) = rep.maps.iter().find(|m| !m.passed) {
                return Err(format!("n={n} d={d}: {} fails ({bad:?})", bad.name));
            }
            ensure!(rep.passed, "n={n} d={d}: report not passed");
            maps += rep.maps.len();
        }
    }
    Ok(format!("{maps} maps over n <= 4, d <= 2: all admissible quotients lifting to b-fibrations"))
}

// 5, 6 ----------------------------------------------------------------------

fn face_systems() -> Vec<(String, LinearSystem)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("scatprod n={n}"), scatprod::generate(ScatConfig::new(n, 1).unwrap()).unwrap()));
    }
    let mut r = gen::rng(5);
    for t in 0..120 {
        let n = r.gen_range(1..=4);
        let s = if t % 3 == 0 {
            gen::sum_closed_system(&mut r, n)
        } else {
            let g = r.gen_range(1..=5);
            gen::system(&mut r, n, g)
        };
        out.push((format!("random #{t}"), s));
    }
    out
}

/// Containment among members, recomputed from the subspaces.
fn containment(s: &LinearSystem) -> Vec<Vec<bool>> {
    let m = s.members();
    m.iter()
        .map(|a| m.iter().map(|b| a.is_subspace_of(b).unwrap()).collect())
        .collect()
}

/// `count[k][j]`: chains of `k + 1` nonzero members ending at `j`.
fn chain_counts(le: &[Vec<bool>], zero: usize) -> Vec<u64> {
    let n = le.len();
    let order: Vec<usize> = (0..n).filter(|&i| i != zero).collect();
    let mut ending = vec![vec![0u64; n]];
    for &j in &order {
        ending[0][j] = 1;
    }
    loop {
        let prev = ending.last().unwrap();
        let mut next = vec![0u64; n];
        for &j in &order {
            for &i in &order {
                if i != j && le[i][j] {
                    next[j] += prev[i];
                }
            }
        }
        if next.iter().all(|&x| x == 0) {
            break;
        }
        ending.push(next);
    }
    ending.iter().map(|row| row.iter().sum()).collect()
}

fn is_chain(le: &[Vec<bool>], set: &[usize]) -> bool {
    set.iter().all(|&a| set.iter().all(|&b| le[a][b] || le[b][a]))
}

fn check_intersection(s: &LinearSystem, le: &[Vec<bool>], set: &[usize]) -> Result<(), String> {
    let got = ok(mbfaces::face_intersection(s, set), "face_intersection")?;
    let chain = is_chain(le, set);
    ensure!(got.is_some() == chain, "subset {set:?}: nonempty={} chain={chain}", got.is_some());
    if let Some(f) = got {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        ensure!(f.chain == sorted, "subset {set:?} gives face {:?}", f.chain);
    }
    Ok(())
}

fn face_combinatorics() -> Outcome {
    let systems = face_systems();
    let (mut faces_seen, mut subsets) = (0u64, 0u64);
    for (name, s) in &systems {
        let le = containment(s);
        let counts = chain_counts(&le, 0);
        let by_codim = mbfaces::all_faces(s);
        ensure!(by_codim.len() == counts.len(), "{name}: faces up to codim {}, chains up to {}", by_codim.len(), counts.len());
        for (k, fs) in by_codim.iter().enumerate() {
            ensure!(fs.len() as u64 == counts[k], "{name}: {} codim-{} faces, {} chains", fs.len(), k + 1, counts[k]);
            let direct = ok(mbfaces::faces(s, k + 1), "faces")?;
            ensure!(&direct == fs, "{name}: faces({}) disagrees with all_faces", k + 1);
            faces_seen += fs.len() as u64;
        }
        let nz: Vec<usize> = s.nonzero().collect();
        if nz.len() <= 16 {
            for mask in 1u32..(1 << nz.len()) {
                let set: Vec<usize> = (0..nz.len()).filter(|b| mask >> b & 1 == 1).map(|b| nz[b]).collect();
                check_intersection(s, &le, &set).map_err(|e| format!("{name}: {e}"))?;
                subsets += 1;
            }
        } else {
            for (a, &x) in nz.iter().enumerate() {
                for (b, &y) in nz.iter().enumerate().skip(a) {
                    for &z in &nz[b..] {
                        let mut set = vec![x, y, z];
                        set.dedup();
                        check_intersection(s, &le, &set).map_err(|e| format!("{name}: {e}"))?;
                        subsets += 1;
                    }
                }
            }
            for f in by_codim.iter().flatten() {
                for &extra in &nz {
                    let mut set = f.chain.clone();
                    if !set.contains(&extra) {
                        set.push(extra);
                        check_intersection(s, &le, &set).map_err(|e| format!("{name}: {e}"))?;
                        subsets += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} systems, {faces_seen} faces matched chain counts, {subsets} subsets checked",
        systems.len()
    ))
}

fn fibered_corners() -> Outcome {
    let systems = face_systems();
    for (name, s) in &systems {
        let rep = ok(mbfaces::fibered_corners_check(s), name)?;
        if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
            return Err(format!("{name}: axiom {} fails: {} ({:?})", c.axiom, c.detail, c.counterexample));
        }
        ensure!(rep.passed, "{name}: report not passed");
    }
    Ok(format!("axioms (i)-(iv) hold on all {} systems", systems.len()))
}

// 7 -------------------------------------------------------------------------

fn line_corner(n: usize) -> ModelCorner {
    ModelCorner::new(
        (0..n)
            .map(|i| BaseCoord {
                name: format!("x{i}"),
                kind: Kind::Line,
            })
            .collect(),
    )
    .unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

/// Families of at most four vanishing sets closed under union (intersection
/// of loci).
fn center_families(n: usize) -> Vec<Vec<u32>> {
    let all: Vec<u32> = (1..(1u32 << n)).collect();
    let mut out = Vec::new();
    fn go(all: &[u32], start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() && cur.iter().all(|&a| cur.iter().all(|&b| cur.contains(&(a | b)))) {
            out.push(cur.clone());
        }
        if cur.len() == 4 {
            return;
        }
        for i in start..all.len() {
            cur.push(all[i]);
            go(all, i + 1, cur, out);
            cur.pop();
        }
    }
    go(&all, 0, &mut Vec::new(), &mut out);
    out
}

fn is_size_order(fam: &[u32], order: &[usize]) -> bool {
    // smaller locus (larger vanishing set) first
    order.iter().enumerate().all(|(p, &a)| {
        order[p + 1..]
            .iter()
            .all(|&b| !(fam[b] & fam[a] == fam[a] && fam[b] != fam[a]))
    })
}

fn is_intersection_order(fam: &[u32], order: &[usize]) -> bool {
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(p, &a)| (a, p)).collect();
    for a in 0..fam.len() {
        for b in a + 1..fam.len() {
            let m = fam.iter().position(|&z| z == fam[a] | fam[b]).expect("closed family");
            if m != a && m != b && pos[&a] < pos[&m] && pos[&b] < pos[&m] {
                return false;
            }
        }
    }
    true
}

fn program(n: usize, fam: &[u32], order: &[usize]) -> Vec<Vec<String>> {
    order
        .iter()
        .map(|&a| (0..n).filter(|i| fam[a] >> i & 1 == 1).map(|i| format!("x{i}")).collect())
        .collect()
}

fn order_invariance() -> Outcome {
    let (mut families, mut size, mut inter) = (0, 0, 0);
    for n in 1..=4 {
        let corner = line_corner(n);
        for fam in center_families(n) {
            families += 1;
            let mut reference = (0..fam.len()).collect::<Vec<_>>();
            reference.sort_by_key(|&a| (std::cmp::Reverse(fam[a].count_ones()), fam[a]));
            let base = ok(run_program(&corner, &program(n, &fam, &reference)), "reference program")?;
            for order in permutations(fam.len()) {
                let so = is_size_order(&fam, &order);
                if !(so || is_intersection_order(&fam, &order)) {
                    continue;
                }
                let prog = program(n, &fam, &order);
                let atlas = ok(run_program(&corner, &prog), &format!("program {prog:?}"))?;
                let cmp = ok(compare_atlases(&base, &atlas), "compare")?;
                ensure!(cmp.is_equivalent(), "n={n}: {prog:?} not equivalent to reference: {cmp:?}");
                if so {
                    size += 1;
                } else {
                    inter += 1;
                }
            }
        }
    }
    let corner = line_corner(3);
    let (p, q, o) = (vec!["x1", "x2"], vec!["x0", "x2"], vec!["x0", "x1", "x2"]);
    let a = ok(run_program(&corner, &[p.clone(), q.clone(), o.clone()]), "control")?;
    let b = ok(run_program(&corner, &[o, p, q]), "control")?;
    let cmp = ok(compare_atlases(&a, &b), "control compare")?;
    ensure!(!cmp.is_equivalent(), "negative control [P,Q,P∩Q] came out equivalent");
    Ok(format!(
        "{families} families: {size} size orders and {inter} further intersection orders equivalent; two-lines control not equivalent"
    ))
}

// 8 -------------------------------------------------------------------------

fn coordinate_systems(n: usize) -> Vec<Vec<u32>> {
    let full = (1u32 << n) - 1;
    let middle: Vec<u32> = (1..full).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << middle.len()) {
        let mut fam: Vec<u32> = vec![0, full];
        fam.extend((0..middle.len()).filter(|b| mask >> b & 1 == 1).map(|b| middle[b]));
        if fam.iter().all(|&a| fam.iter().all(|&b| fam.contains(&(a & b)))) {
            out.push(fam);
        }
    }
    out
}

fn axes_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

fn system_of(n: usize, fam: &[u32]) -> LinearSystem {
    let g: Vec<_> = fam.iter().map(|&m| Subspace::coordinate(n, &axes_of(m, n)).unwrap()).collect();
    LinearSystem::close(n, &g).unwrap()
}

struct Model {
    atlas: ChartAtlas,
    /// Face id to member index.
    face_member: HashMap<usize, usize>,
}

fn model(s: &LinearSystem, axis: usize) -> Result<Model, String> {
    let m = ok(affine_boundary_model(s, axis), "affine model")?;
    let atlas = ok(m.run(), "model program")?;
    let face_member = m.face_members(&atlas, s).into_iter().collect();
    Ok(Model { atlas, face_member })
}

/// Selection matrix check: `q` keeps coordinates `keep` in order.
fn is_selection(q: &Matrix, keep: &[usize]) -> bool {
    q.rows() == keep.len()
        && (0..q.rows()).all(|r| (0..q.cols()).all(|c| *q.get(r, c) == rat(i64::from(keep[r] == c))))
}

fn exponent_oracle() -> Outcome {
    let (mut lifts, mut interior, mut blowdowns, mut systems) = (0, 0, 0, 0);
    for n in 1..=4 {
        let fams = coordinate_systems(n);
        let mut models: HashMap<(Vec<u32>, usize), Model> = HashMap::new();
        let sys_of: HashMap<Vec<u32>, LinearSystem> = fams.iter().map(|f| (f.clone(), system_of(n, f))).collect();
        for fam in &fams {
            for axis in 0..n {
                models.insert((fam.clone(), axis), model(&sys_of[fam], axis)?);
            }
        }
        let mut targets: HashMap<(Vec<Subspace>, usize), Model> = HashMap::new();
        for fam in &fams {
            systems += 1;
            let s = &sys_of[fam];
            for &kmask in fam {
                if !fam.iter().all(|&v| fam.contains(&(v | kmask))) {
                    continue;
                }
                let k = Subspace::coordinate(n, &axes_of(kmask, n)).unwrap();
                let keep: Vec<usize> = (0..n).filter(|i| kmask >> i & 1 == 0).collect();
                let (cod, _) = ok(s.quotient_system(&k), "quotient system")?;
                let q = ok(exactla::quotient_projection(n, &k), "projection")?;
                ensure!(is_selection(&q, &keep), "quotient projection is not a coordinate selection");
                let f = ok(SystemMap::new("q", q, s.clone(), cod.clone()), "map")?;
                let lift = ok(blift::lift_quotient(&f), "lift")?;
                for axis in 0..n {
                    let src = &models[&(fam.clone(), axis)];
                    let ctx = format!("n={n} S={fam:?} K={kmask:b} axis={axis}");
                    if let Some(ax) = keep.iter().position(|&j| j == axis) {
                        let key = (cod.members().to_vec(), ax);
                        if !targets.contains_key(&key) {
                            targets.insert(key.clone(), model(&cod, ax)?);
                        }
                        let tgt = &targets[&key];
                        let map = MonomialMap {
                            signs: vec![1; keep.len()],
                            exponents: keep.iter().map(|&j| (0..n).map(|c| i64::from(c == j)).collect()).collect(),
                        };
                        let pb = ok(pullback_exponents(&src.atlas, &tgt.atlas, &map), &ctx)?;
                        ensure!(pb.uncovered.is_empty(), "{ctx}: faces {:?} uncovered", pb.uncovered);
                        for (&fid, &lam) in &src.face_member {
                            for (&gid, &mu) in &tgt.face_member {
                                let want = lift.exponents.get(lam, mu);
                                let got = pb.exponents.get(fid, gid);
                                ensure!(want == got, "{ctx}: e[{lam}][{mu}] lift {want:?} vs charts {got:?}");
                            }
                        }
                        lifts += 1;
                    } else {
                        let corner = ModelCorner::new(
                            keep.iter().map(|j| BaseCoord { name: format!("u{j}"), kind: Kind::Line }).collect(),
                        )
                        .unwrap();
                        let tgt = ok(run_program::<String>(&corner, &[]), "interior target")?;
                        // u_j = x_j = y_j / rho
                        let map = MonomialMap {
                            signs: vec![1; keep.len()],
                            exponents: keep
                                .iter()
                                .map(|&j| (0..n).map(|c| if c == j { 1 } else if c == axis { -1 } else { 0 }).collect())
                                .collect(),
                        };
                        let pb = ok(pullback_exponents(&src.atlas, &tgt, &map), &ctx)?;
                        let mut expect: Vec<usize> = src
                            .face_member
                            .iter()
                            .filter(|(_, &lam)| lift.image_of(lam) != Some(0))
                            .map(|(&fid, _)| fid)
                            .collect();
                        expect.sort_unstable();
                        let mut got = pb.uncovered.clone();
                        got.sort_unstable();
                        ensure!(got == expect, "{ctx}: uncovered {got:?}, lift sends {expect:?} to the boundary");
                        for &lam in src.face_member.values() {
                            if lift.image_of(lam) == Some(0) {
                                let row = lift.exponents.row(lam).unwrap();
                                ensure!(row.iter().all(|&e| e == 0), "{ctx}: interior face {lam} has exponents");
                            }
                        }
                        interior += 1;
                    }
                }
            }
            // blow-downs to subsystems: all of them up to ambient 3, the
            // maximal ones (one member dropped) in ambient 4
            let subs: Vec<&Vec<u32>> = fams
                .iter()
                .filter(|g| g.iter().all(|m| fam.contains(m)))
                .filter(|g| n < 4 || g.len() + 1 >= fam.len())
                .collect();
            for sub in subs {
                let idx: Vec<usize> = sub
                    .iter()
                    .map(|&m| s.index_of(&Subspace::coordinate(n, &axes_of(m, n)).unwrap()).unwrap())
                    .collect();
                let e = ok(blift::blowdown_exponents(s, &idx), "blowdown")?;
                for axis in 0..n {
                    let ctx = format!("n={n} S={fam:?} S'={sub:?} axis={axis}");
                    let src = &models[&(fam.clone(), axis)];
                    let tgt = &models[&(sub.clone(), axis)];
                    let pb = ok(pullback_exponents(&src.atlas, &tgt.atlas, &MonomialMap::identity(n)), &ctx)?;
                    ensure!(pb.uncovered.is_empty(), "{ctx}: uncovered faces");
                    for (&fid, &lam) in &src.face_member {
                        for (&gid, &mu_sub) in &tgt.face_member {
                            let mu = s.index_of(sys_of[sub].member(mu_sub).unwrap()).unwrap();
                            let want = e.get(lam, mu);
                            let got = pb.exponents.get(fid, gid);
                            ensure!(want == got, "{ctx}: e[{lam}][{mu}] blowdown {want:?} vs charts {got:?}");
                        }
                    }
                    blowdowns += 1;
                }
            }
        }
    }
    Ok(format!(
        "{systems} coordinate systems: {lifts} boundary models, {interior} interior models, {blowdowns} blow-down models agree"
    ))
}

// 9 -------------------------------------------------------------------------

fn same_lift(a: &blift::LiftedMap, b: &blift::LiftedMap) -> bool {
    a.hyp_image == b.hyp_image && a.exponents == b.exponents
}

fn functoriality() -> Outcome {
    let mut r = gen::rng(9);
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 250 {
        attempts += 1;
        ensure!(attempts < 5000, "could not build composable pairs");
        let n = r.gen_range(1..=4);
        let s = gen::sum_closed_system(&mut r, n);
        let f = gen::quotient_map(&mut r, &s, "f");
        let g = gen::quotient_map(&mut r, f.codomain(), "g");
        if !ok(f.is_admissible_quotient(), "f")?.holds || !ok(g.is_admissible_quotient(), "g")?.holds {
            return Err(format!("generated map is not an admissible quotient (pair {pairs})"));
        }
        let lf = ok(blift::lift_quotient(&f), "lift f")?;
        let lg = ok(blift::lift_quotient(&g), "lift g")?;
        let composed = ok(blift::compose_lifts(&lg, &lf), "compose")?;
        let direct = ok(blift::lift_quotient(&ok(f.then(&g), "g∘f")?), "lift g∘f")?;
        ensure!(same_lift(&composed, &direct), "pair {pairs}: lift(g∘f) differs from composed lifts");
        pairs += 1;
    }
    let mut identities = 0;
    for n in 2..=3 {
        let cfg = ScatConfig::new(n, 1).unwrap();
        let s = scatprod::generate(cfg).unwrap();
        for sigma in permutations(n) {
            let sigma: Vec<usize> = sigma.iter().map(|x| x + 1).collect();
            let mut inv = vec![0; n + 1];
            for (k, &v) in sigma.iter().enumerate() {
                inv[v] = k + 1;
            }
            let p = scatprod::permutation(cfg, &s, &sigma).unwrap();
            let lp = ok(blift::lift_quotient(&p), "lift sigma")?;
            for i in 1..=n {
                for j in 1..=n {
                    if i == j {
                        continue;
                    }
                    let d = scatprod::difference(cfg, &s, i, j).unwrap();
                    let e = scatprod::difference(cfg, &s, inv[i], inv[j]).unwrap();
                    let lhs = ok(p.then(&d), "δ∘σ")?;
                    ensure!(lhs.matrix() == e.matrix(), "δ_{i}{j}∘σ{sigma:?} is not δ_{}{}", inv[i], inv[j]);
                    let composed = ok(blift::compose_lifts(&ok(blift::lift_quotient(&d), "lift δ")?, &lp), "compose")?;
                    let direct = ok(blift::lift_quotient(&e), "lift δ'")?;
                    ensure!(same_lift(&composed, &direct), "lifts of δ_{i}{j}∘σ{sigma:?} disagree");
                    identities += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} random composable pairs and {identities} difference/permutation identities"))
}

// 10 ------------------------------------------------------------------------

fn boundary_restrictions() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let cfg = ScatConfig::new(n, 1).unwrap();
        for f in ok(scatprod::standard_maps(cfg), "maps")? {
            let l = ok(blift::lift_quotient(&f), &f.name)?;
            let total = ok(f.member_map(), "member map")?;
            for lam in f.domain().nonzero() {
                let ctx = format!("{} at {}", f.name, f.domain().name(lam));
                let bp = ok(blift::boundary_restriction(&l, lam), &ctx)?;
                ensure!(Some(bp.mu) == l.image_of(lam), "{ctx}: face image differs from the lift");
                ensure!(ok(bp.fiber.is_admissible_quotient(), &ctx)?.holds, "{ctx}: fiber map is not an admissible quotient");
                let fl = ok(blift::lift_quotient(&bp.fiber), &ctx)?;
                for (kap, img) in fl.hyp_image.iter().map(|&(a, b)| (bp.fiber.domain().name(a), bp.fiber.codomain().name(b))) {
                    let orig = f.domain().index_of_name(kap).unwrap();
                    let want = f.codomain().name(total[orig].unwrap());
                    ensure!(img == want, "{ctx}: fiber sends {kap} to {img}, total map to {want}");
                }
                let base_map = ok(bp.base.member_map(), &ctx)?;
                for nu in 0..bp.base.domain().len() {
                    let orig = f.domain().index_of_name(bp.base.domain().name(nu)).unwrap();
                    let want = f.codomain().name(total[orig].unwrap());
                    let got = base_map[nu].map(|m| bp.base.codomain().name(m));
                    ensure!(got == Some(want), "{ctx}: base sends {} to {got:?}, total map to {want}", bp.base.domain().name(nu));
                }
                ensure!(bp.base_is_zero == (bp.mu == 0), "{ctx}: base_is_zero flag");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (map, hypersurface) restrictions consistent"))
}

// 11 ------------------------------------------------------------------------

fn determinism() -> Outcome {
    let cases = common::golden_cases();
    for c in &cases {
        let (c1, o1, e1) = common::run_bin(&c.args);
        let (c2, o2, _) = common::run_bin(&c.args);
        ensure!(c1 == c.exit && c2 == c.exit, "{}: exit {c1}/{c2}, expected {} ({e1})", c.golden, c.exit);
        ensure!(o1 == o2, "{}: outputs differ between runs", c.golden);
        let golden = common::dir("golden").join(c.golden);
        let expected = std::fs::read(&golden).map_err(|e| format!("{}: {e}", c.golden))?;
        ensure!(o1 == expected, "{}: output differs from golden file", c.golden);
    }
    Ok(format!("{} golden invocations byte-identical across runs", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("lattice laws", lattice_laws),
        ("scatprod counts", scatprod_counts),
        ("quotient characterizations agree", quotient_characterizations),
        ("standard maps lift to b-fibrations", standard_maps_lift),
        ("faces are chains", face_combinatorics),
        ("fibered corners", fibered_corners),
        ("blow-up order invariance", order_invariance),
        ("exponent oracle", exponent_oracle),
        ("functoriality", functoriality),
        ("boundary restriction", boundary_restrictions),
        ("determinism", determinism),
    ];
    let only: BTreeSet<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
