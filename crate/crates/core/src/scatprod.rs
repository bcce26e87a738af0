//! The axes-and-diagonals system on `X^n`, `X = ℚ^d`, and its standard maps.
//!
//! Factor `i` (1-based) occupies coordinates `(i-1)d .. i d`. Members are
//! named by partitions of `{0, 1, .., n}`: factors sharing a block are equal
//! and factors in the block of `0` vanish. `0|1|2` is the whole space and
//! `0,1,2` the origin.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::admissible::SystemMap;
use crate::blift;
use crate::error::{Error, Result};
use crate::exactla::{self, rat, Matrix, Rational, Subspace};
use crate::linsys::LinearSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScatConfig {
    pub n: usize,
    pub d: usize,
}

impl ScatConfig {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::input("n and d must be at least 1"));
        }
        Ok(ScatConfig { n, d })
    }

    pub fn ambient(&self) -> usize {
        self.n * self.d
    }
}

/// `{u_i = 0 : i ∈ zero}` and `{u_i = u_j : i, j ∈ block}` for each block.
fn constrained(cfg: ScatConfig, zero: &[usize], blocks: &[Vec<usize>]) -> Subspace {
    let (n, d) = (cfg.n, cfg.d);
    let mut rows = Vec::new();
    let unit = |i: usize, a: usize, c: i64, row: &mut Vec<Rational>| row[(i - 1) * d + a] = rat(c);
    for &i in zero {
        for a in 0..d {
            let mut r = vec![rat(0); n * d];
            unit(i, a, 1, &mut r);
            rows.push(r);
        }
    }
    for b in blocks {
        for w in b.windows(2) {
            for a in 0..d {
                let mut r = vec![rat(0); n * d];
                unit(w[0], a, 1, &mut r);
                unit(w[1], a, -1, &mut r);
                rows.push(r);
            }
        }
    }
    let m = Matrix::from_rows(n * d, &rows).expect("rows have the ambient length");
    exactla::kernel(&m)
}

/// The partition of `{0..n}` a member encodes, blocks sorted, `0`'s block
/// first.
pub fn partition_of(cfg: ScatConfig, v: &Subspace) -> Vec<Vec<usize>> {
    let d = cfg.d;
    let rows = v.basis().row_vecs();
    let factor = |r: &Vec<Rational>, i: usize| r[(i - 1) * d..i * d].to_vec();
    let mut blocks: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..=cfg.n {
        if rows.iter().all(|r| factor(r, i).iter().all(|x| *x == rat(0))) {
            blocks[0].push(i);
            continue;
        }
        match blocks[1..]
            .iter()
            .position(|b| rows.iter().all(|r| factor(r, b[0]) == factor(r, i)))
        {
            Some(p) => blocks[p + 1].push(i),
            None => blocks.push(vec![i]),
        }
    }
    blocks
}

pub fn partition_name(blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|b| b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

fn subsets(n: usize, min: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n))
        .map(move |m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect::<Vec<_>>())
        .filter(move |s| s.len() >= min)
}

/// Closure of all axes and diagonals, with members named by partitions.
pub fn generate(cfg: ScatConfig) -> Result<LinearSystem> {
    let mut gens = Vec::new();
    for j in subsets(cfg.n, 1) {
        gens.push(constrained(cfg, &j, &[]));
    }
    for j in subsets(cfg.n, 2) {
        gens.push(constrained(cfg, &[], &[j]));
    }
    let sys = LinearSystem::close(cfg.ambient(), &gens)?;
    let names = sys
        .members()
        .iter()
        .map(|v| partition_name(&partition_of(cfg, v)))
        .collect();
    sys.renamed(names)
}

/// The subspace of a partition of `{0..n}`, given by a block label per
/// element (element `0` labels the zero block).
pub fn partition_subspace(cfg: ScatConfig, labels: &[usize]) -> Subspace {
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(i);
    }
    let zero: Vec<usize> = by_label[&labels[0]].iter().copied().filter(|&i| i != 0).collect();
    let blocks: Vec<Vec<usize>> = by_label
        .into_iter()
        .filter(|(l, _)| *l != labels[0])
        .map(|(_, b)| b)
        .collect();
    constrained(cfg, &zero, &blocks)
}

/// `u ↦ (u_i)_{i ∈ I}` onto the system of `X^{|I|}`; `I` is 1-based.
pub fn projection(cfg: ScatConfig, domain: &LinearSystem, set: &[usize]) -> Result<SystemMap> {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() || set.iter().any(|&i| i == 0 || i > cfg.n) {
        return Err(Error::input(format!("invalid factor set {set:?} for n = {}", cfg.n)));
    }
    let d = cfg.d;
    let target = ScatConfig::new(set.len(), d)?;
    let mut rows = vec![vec![rat(0); cfg.ambient()]; set.len() * d];
    for (k, &i) in set.iter().enumerate() {
        for a in 0..d {
            rows[k * d + a][(i - 1) * d + a] = rat(1);
        }
    }
    let m = Matrix::from_rows(cfg.ambient(), &rows)?;
    let name = format!("pi[{}]", set.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    SystemMap::new(name, m, domain.clone(), generate(target)?)
}

/// `u ↦ u_i - u_j` onto `{0, X}`; indices are 1-based.
pub fn difference(cfg: ScatConfig, domain: &LinearSystem, i: usize, j: usize) -> Result<SystemMap> {
    if i == j || i == 0 || j == 0 || i > cfg.n || j > cfg.n {
        return Err(Error::input(format!("invalid difference indices ({i}, {j}) for n = {}", cfg.n)));
    }
    let d = cfg.d;
    let mut rows = vec![vec![rat(0); cfg.ambient()]; d];
    for (a, row) in rows.iter_mut().enumerate() {
        row[(i - 1) * d + a] = rat(1);
        row[(j - 1) * d + a] = rat(-1);
    }
    let m = Matrix::from_rows(cfg.ambient(), &rows)?;
    SystemMap::new(format!("delta[{i},{j}]"), m, domain.clone(), LinearSystem::close(d, &[])?)
}

/// `(σu)_k = u_{σ⁻¹(k)}` for `σ` in one-line notation `σ(1) .. σ(n)`.
pub fn permutation(cfg: ScatConfig, domain: &LinearSystem, sigma: &[usize]) -> Result<SystemMap> {
    let n = cfg.n;
    let mut seen = vec![false; n + 1];
    if sigma.len() != n
        || sigma.iter().any(|&s| s == 0 || s > n || std::mem::replace(&mut seen[s], true))
    {
        return Err(Error::input(format!("{sigma:?} is not a permutation of 1..{n}")));
    }
    let d = cfg.d;
    let mut rows = vec![vec![rat(0); cfg.ambient()]; cfg.ambient()];
    for (src, &dst) in sigma.iter().enumerate() {
        for a in 0..d {
            rows[(dst - 1) * d + a][src * d + a] = rat(1);
        }
    }
    let m = Matrix::from_rows(cfg.ambient(), &rows)?;
    let name = format!("sigma[{}]", sigma.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","));
    SystemMap::new(name, m, domain.clone(), domain.clone())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 1..=n {
            if !prefix.contains(&k) {
                prefix.push(k);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Projections onto nonempty proper factor sets, ordered differences and
/// permutations, in that order.
pub fn standard_maps(cfg: ScatConfig) -> Result<Vec<SystemMap>> {
    let sys = generate(cfg)?;
    let mut out = Vec::new();
    for set in subsets(cfg.n, 1).filter(|s| s.len() < cfg.n) {
        out.push(projection(cfg, &sys, &set)?);
    }
    for i in 1..=cfg.n {
        for j in 1..=cfg.n {
            if i != j {
                out.push(difference(cfg, &sys, i, j)?);
            }
        }
    }
    for p in permutations(cfg.n) {
        out.push(permutation(cfg, &sys, &p)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapVerdict {
    pub name: String,
    pub admissible_quotient: bool,
    /// The kernel-based characterization agrees with the image-based one.
    pub characterizations_agree: bool,
    pub b_fibration: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardMapsReport {
    pub n: usize,
    pub d: usize,
    pub members: usize,
    pub maps: Vec<MapVerdict>,
    pub passed: bool,
}

/// Checks that every standard map is an admissible quotient lifting to a
/// b-fibration.
pub fn verify_standard_maps(cfg: ScatConfig) -> Result<StandardMapsReport> {
    let maps = standard_maps(cfg)?;
    let members = maps.first().map_or(generate(cfg)?.len(), |m| m.domain().len());
    let mut verdicts = Vec::with_capacity(maps.len());
    for f in &maps {
        let aq = f.is_admissible_quotient()?.holds;
        let agree = aq == f.is_quotient_of_kernel()?;
        let bf = aq && blift::lift_quotient(f)?.b_fibration;
        verdicts.push(MapVerdict {
            name: f.name.clone(),
            admissible_quotient: aq,
            characterizations_agree: agree,
            b_fibration: bf,
            passed: aq && agree && bf,
        });
    }
    Ok(StandardMapsReport {
        n: cfg.n,
        d: cfg.d,
        members,
        passed: verdicts.iter().all(|v| v.passed),
        maps: verdicts,
    })
}
