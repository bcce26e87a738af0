//! Seeded random systems and maps.

use manybody::admissible::SystemMap;
use manybody::exactla::{self, rat, Matrix, Subspace};
use manybody::linsys::LinearSystem;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn subspace(r: &mut impl Rng, n: usize) -> Subspace {
    let k = r.gen_range(0..=n);
    let rows: Vec<Vec<_>> = (0..k)
        .map(|_| (0..n).map(|_| rat(r.gen_range(-2..=2))).collect())
        .collect();
    Subspace::canonicalize(n, &rows).unwrap()
}

pub fn system(r: &mut impl Rng, n: usize, gens: usize) -> LinearSystem {
    let g: Vec<_> = (0..gens).map(|_| subspace(r, n)).collect();
    LinearSystem::close(n, &g).unwrap()
}

/// Unimodular matrix: unit lower times unit upper triangular, rows permuted.
pub fn invertible(r: &mut impl Rng, n: usize) -> Matrix {
    let mut lo = vec![vec![rat(0); n]; n];
    let mut up = vec![vec![rat(0); n]; n];
    for i in 0..n {
        lo[i][i] = rat(1);
        up[i][i] = rat(1);
        for j in 0..i {
            lo[i][j] = rat(r.gen_range(-1..=1));
            up[j][i] = rat(r.gen_range(-1..=1));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let m = Matrix::from_rows(n, &lo).unwrap().mul(&Matrix::from_rows(n, &up).unwrap()).unwrap();
    let rows = m.row_vecs();
    Matrix::from_rows(n, &perm.iter().map(|&p| rows[p].clone()).collect::<Vec<_>>()).unwrap()
}

pub fn transform(s: &LinearSystem, a: &Matrix) -> LinearSystem {
    let members: Vec<_> = s.members().iter().map(|v| exactla::image(a, v).unwrap()).collect();
    LinearSystem::close(s.ambient(), &members).unwrap()
}

/// Random coordinate subsets closed under union and intersection.
pub fn coordinate_lattice(r: &mut impl Rng, n: usize, gens: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<u32> = vec![0, (1 << n) - 1];
    for _ in 0..gens {
        sets.push(r.gen_range(0..(1u32 << n)));
    }
    loop {
        let mut grown = sets.clone();
        for &a in &sets {
            for &b in &sets {
                for c in [a | b, a & b] {
                    if !grown.contains(&c) {
                        grown.push(c);
                    }
                }
            }
        }
        if grown.len() == sets.len() {
            break;
        }
        sets = grown;
    }
    sets.sort_unstable();
    sets.iter().map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

pub fn coordinate_system(n: usize, sets: &[Vec<usize>]) -> LinearSystem {
    let g: Vec<_> = sets.iter().map(|s| Subspace::coordinate(n, s).unwrap()).collect();
    LinearSystem::close(n, &g).unwrap()
}

/// A system closed under sums: a coordinate lattice in random linear
/// coordinates.
pub fn sum_closed_system(r: &mut impl Rng, n: usize) -> LinearSystem {
    let gens = r.gen_range(0..=3);
    let lat = coordinate_lattice(r, n, gens);
    transform(&coordinate_system(n, &lat), &invertible(r, n))
}

/// `B ∘ q_K` for a random member `K`, onto the image system. An admissible
/// quotient whenever `s` is closed under sums.
pub fn quotient_map(r: &mut impl Rng, s: &LinearSystem, name: &str) -> SystemMap {
    let k = s.member(r.gen_range(0..s.len())).unwrap().clone();
    let n = s.ambient();
    let q = exactla::quotient_projection(n, &k).unwrap();
    let m = n - k.dim();
    let f = invertible(r, m).mul(&q).unwrap();
    let images: Vec<_> = s.members().iter().map(|v| exactla::image(&f, v).unwrap()).collect();
    let codomain = LinearSystem::close(m, &images).unwrap();
    SystemMap::new(name, f, s.clone(), codomain).unwrap()
}

/// Full-row-rank integer matrix with `m` rows.
pub fn surjection(r: &mut impl Rng, m: usize, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<_>> = (0..m)
            .map(|_| (0..n).map(|_| rat(r.gen_range(-2..=2))).collect())
            .collect();
        let a = if m == 0 {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(n, &rows).unwrap()
        };
        if a.rank() == m {
            return a;
        }
    }
}

/// An admissible map that is usually not a quotient: an admissible quotient
/// followed by an injection into a larger space whose extra members miss the
/// image.
pub fn admissible_map(r: &mut impl Rng, s: &LinearSystem) -> SystemMap {
    let q = quotient_map(r, s, "q");
    let m = q.codomain().ambient();
    let extra = r.gen_range(0..=2);
    let big = m + extra;
    let a = invertible(r, big);
    let embed: Vec<Vec<_>> = (0..big)
        .map(|i| (0..m).map(|j| rat(i64::from(i == j))).collect())
        .collect();
    let iota = if m == 0 {
        Matrix::zeros(big, 0)
    } else {
        a.mul(&Matrix::from_rows(m, &embed).unwrap()).unwrap()
    };
    let mut gens: Vec<Subspace> = q
        .codomain()
        .members()
        .iter()
        .map(|v| exactla::image(&iota, v).unwrap())
        .collect();
    for _ in 0..r.gen_range(0..=2) {
        let axes: Vec<usize> = (m..big).filter(|_| r.gen_bool(0.5)).collect();
        gens.push(exactla::image(&a, &Subspace::coordinate(big, &axes).unwrap()).unwrap());
    }
    let codomain = LinearSystem::close(big, &gens).unwrap();
    let f = iota.mul(q.matrix()).unwrap();
    SystemMap::new("f", f, s.clone(), codomain).unwrap()
}
