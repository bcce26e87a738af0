//! Boundary faces of the many-body compactification, read off the member
//! lattice.
//!
//! Hypersurfaces correspond to nonzero members and corners to chains. A
//! hypersurface `N_λ` splits as a base `B_λ`, resolved by the members below
//! `λ`, times a fiber, the compactification of `X/X_λ` with the members above
//! `λ`.

use serde::Serialize;

use crate::admissible::upper_quotient;
use crate::error::{Error, Result};
use crate::exactla;
use crate::linsys::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    pub index: usize,
    /// Members strictly below `index`.
    pub base_indices: Vec<usize>,
    /// `{X_μ / X_λ : μ ≥ λ}` on `X / X_λ`.
    pub fiber_system: LinearSystem,
}

/// A corner, given by a strictly increasing chain of nonzero members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub chain: Vec<usize>,
}

impl Face {
    pub fn codim(&self) -> usize {
        self.chain.len()
    }
}

/// The factor `B_{ν,μ}`: the sphere of `X_μ / X_ν` resolved by the images of
/// the members strictly between `ν` and `μ`. The first factor of a face has
/// `lower = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseFactor {
    pub lower: usize,
    pub upper: usize,
    /// Dimension of `X_μ / X_ν`.
    pub dim: usize,
    /// `{κ : ν < κ < μ}`.
    pub blowup_indices: Vec<usize>,
    /// Members below `μ` incomparable with `ν`; their lifts miss the face.
    pub separated_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceFactors {
    pub bases: Vec<BaseFactor>,
    /// Fiber system of the top of the chain.
    pub fiber: LinearSystem,
    pub fiber_of: usize,
}

impl FaceFactors {
    pub fn len(&self) -> usize {
        self.bases.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn hypersurface(s: &LinearSystem, lambda: usize) -> Result<Hypersurface> {
    if s.member(lambda)?.is_zero() {
        return Err(Error::input("the zero member has no hypersurface"));
    }
    let base_indices = s.below(lambda).into_iter().filter(|&m| m != lambda).collect();
    Ok(Hypersurface {
        index: lambda,
        base_indices,
        fiber_system: upper_quotient(s, lambda)?,
    })
}

/// One hypersurface per nonzero member, in canonical order. The last one is
/// the free region.
pub fn hypersurfaces(s: &LinearSystem) -> Result<Vec<Hypersurface>> {
    s.nonzero().map(|l| hypersurface(s, l)).collect()
}

/// All chains of `k` nonzero members, in lexicographic order of indices.
pub fn faces(s: &LinearSystem, k: usize) -> Result<Vec<Face>> {
    if k == 0 {
        return Err(Error::input("codimension must be at least 1"));
    }
    let mut out = Vec::new();
    let mut chain = Vec::with_capacity(k);
    extend_chains(s, k, &mut chain, &mut out);
    Ok(out)
}

fn extend_chains(s: &LinearSystem, k: usize, chain: &mut Vec<usize>, out: &mut Vec<Face>) {
    if chain.len() == k {
        out.push(Face {
            chain: chain.clone(),
        });
        return;
    }
    let start = chain.last().map_or(1, |&l| l + 1);
    for j in start..s.len() {
        if chain.last().map_or(true, |&l| s.leq_unchecked(l, j)) {
            chain.push(j);
            extend_chains(s, k, chain, out);
            chain.pop();
        }
    }
}

/// Every face, by codimension.
pub fn all_faces(s: &LinearSystem) -> Vec<Vec<Face>> {
    let mut by_codim = Vec::new();
    for k in 1.. {
        let f = faces(s, k).expect("k >= 1");
        if f.is_empty() {
            break;
        }
        by_codim.push(f);
    }
    by_codim
}

fn check_indices(s: &LinearSystem, set: &[usize]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::input("empty set of hypersurfaces"));
    }
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    for &i in &v {
        if s.member(i)?.is_zero() {
            return Err(Error::input("the zero member has no hypersurface"));
        }
    }
    Ok(v)
}

fn is_chain(s: &LinearSystem, sorted: &[usize]) -> bool {
    sorted.windows(2).all(|w| s.leq_unchecked(w[0], w[1]))
}

/// The corner `N_{λ₁} ∩ ⋯ ∩ N_{λ_k}`, or `None` when it is empty.
pub fn face_intersection(s: &LinearSystem, set: &[usize]) -> Result<Option<Face>> {
    let v = check_indices(s, set)?;
    Ok(is_chain(s, &v).then_some(Face { chain: v }))
}

pub fn face_factors(s: &LinearSystem, face: &Face) -> Result<FaceFactors> {
    let v = check_indices(s, &face.chain)?;
    if v != face.chain || !is_chain(s, &v) {
        return Err(Error::input(format!(
            "{:?} is not a strictly increasing chain",
            face.chain
        )));
    }
    let mut bases = Vec::with_capacity(v.len());
    let mut lower = 0;
    for &upper in &v {
        bases.push(base_factor(s, lower, upper));
        lower = upper;
    }
    Ok(FaceFactors {
        bases,
        fiber: upper_quotient(s, lower)?,
        fiber_of: lower,
    })
}

fn base_factor(s: &LinearSystem, lower: usize, upper: usize) -> BaseFactor {
    let mut blowup_indices = Vec::new();
    let mut separated_indices = Vec::new();
    for k in 0..upper {
        if k == lower || !s.leq_unchecked(k, upper) {
            continue;
        }
        if s.leq_unchecked(lower, k) {
            blowup_indices.push(k);
        } else if !s.leq_unchecked(k, lower) {
            separated_indices.push(k);
        }
    }
    BaseFactor {
        lower,
        upper,
        dim: s.members()[upper].dim() - s.members()[lower].dim(),
        blowup_indices,
        separated_indices,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    /// First failing chain or index set.
    pub counterexample: Option<Vec<usize>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberedCornersReport {
    pub passed: bool,
    pub checks: Vec<AxiomCheck>,
    /// Hypersurfaces whose quotient system `S/X_λ` has members not coming
    /// from members above `λ`.
    pub quotient_system_exceeds_fiber: Vec<usize>,
}

const EXHAUSTIVE_LIMIT: usize = 16;

/// Checks the combinatorial shape of a fibered corners structure:
///
/// * (i) one hypersurface per nonzero member, each fiber indexed by the
///   members above it;
/// * (ii) a set of hypersurfaces meets iff it is a chain;
/// * (iii) for `λ < μ` the fiber of `λ` has a member for `μ` and the bases
///   nest;
/// * (iv) every boundary index of a base or fiber factor comes from a member
///   comparable with the face.
///
/// Intersections in (ii) are tested on all subsets when there are at most 16
/// hypersurfaces, otherwise on all subsets of size at most three and all
/// chains.
pub fn fibered_corners_check(s: &LinearSystem) -> Result<FiberedCornersReport> {
    let hyps = hypersurfaces(s)?;
    let checks = vec![
        check_i(s, &hyps)?,
        check_ii(s)?,
        check_iii(s, &hyps)?,
        check_iv(s, &hyps)?,
    ];
    let mut exceeds = Vec::new();
    for h in &hyps {
        let (q, _) = s.quotient_system(s.member(h.index)?)?;
        if q.len() != h.fiber_system.len() {
            exceeds.push(h.index);
        }
    }
    Ok(FiberedCornersReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
        quotient_system_exceeds_fiber: exceeds,
    })
}

fn pass(axiom: &str, detail: String) -> AxiomCheck {
    AxiomCheck {
        axiom: axiom.into(),
        passed: true,
        counterexample: None,
        detail,
    }
}

fn fail(axiom: &str, chain: Vec<usize>, detail: String) -> AxiomCheck {
    AxiomCheck {
        axiom: axiom.into(),
        passed: false,
        counterexample: Some(chain),
        detail,
    }
}

fn check_i(s: &LinearSystem, hyps: &[Hypersurface]) -> Result<AxiomCheck> {
    let nonzero = s.nonzero().count();
    if hyps.len() != nonzero {
        return Ok(fail("i", vec![], format!("{} hypersurfaces for {nonzero} nonzero members", hyps.len())));
    }
    for h in hyps {
        let above = s.above(h.index).len();
        if h.fiber_system.len() != above {
            return Ok(fail(
                "i",
                vec![h.index],
                format!("fiber has {} members, {above} members lie above", h.fiber_system.len()),
            ));
        }
    }
    Ok(pass("i", format!("{nonzero} hypersurfaces")))
}

fn check_ii(s: &LinearSystem) -> Result<AxiomCheck> {
    let nz: Vec<usize> = s.nonzero().collect();
    let mut tested = 0usize;
    let mut test = |set: &[usize]| -> Result<Option<AxiomCheck>> {
        tested += 1;
        let meets = face_intersection(s, set)?.is_some();
        let pairwise = set
            .iter()
            .all(|&a| set.iter().all(|&b| s.leq_unchecked(a, b) || s.leq_unchecked(b, a)));
        if meets != pairwise {
            return Ok(Some(fail("ii", set.to_vec(), "intersection pattern differs from chains".into())));
        }
        Ok(None)
    };
    if nz.len() <= EXHAUSTIVE_LIMIT {
        for mask in 1u32..(1u32 << nz.len()) {
            let set: Vec<usize> = (0..nz.len()).filter(|b| mask >> b & 1 == 1).map(|b| nz[b]).collect();
            if let Some(f) = test(&set)? {
                return Ok(f);
            }
        }
    } else {
        for (a, &x) in nz.iter().enumerate() {
            for (b, &y) in nz.iter().enumerate().skip(a) {
                for &z in &nz[b..] {
                    if let Some(f) = test(&[x, y, z])? {
                        return Ok(f);
                    }
                }
            }
        }
        for codim in all_faces(s) {
            for face in codim {
                if let Some(f) = test(&face.chain)? {
                    return Ok(f);
                }
            }
        }
    }
    Ok(pass("ii", format!("{tested} index sets")))
}

fn check_iii(s: &LinearSystem, hyps: &[Hypersurface]) -> Result<AxiomCheck> {
    let mut pairs = 0;
    for h in hyps {
        let x_l = s.member(h.index)?;
        let q = exactla::quotient_projection(s.ambient(), x_l)?;
        for g in hyps {
            if g.index == h.index || !s.leq_unchecked(h.index, g.index) {
                continue;
            }
            pairs += 1;
            let img = exactla::image(&q, s.member(g.index)?)?;
            if img.is_zero() || h.fiber_system.index_of(&img).is_none() {
                return Ok(fail("iii", vec![h.index, g.index], "fiber lacks the larger member".into()));
            }
            let nested = h.base_indices.iter().all(|b| g.base_indices.contains(b))
                && g.base_indices.contains(&h.index);
            if !nested {
                return Ok(fail("iii", vec![h.index, g.index], "base index sets do not nest".into()));
            }
        }
    }
    Ok(pass("iii", format!("{pairs} comparable pairs")))
}

fn check_iv(s: &LinearSystem, hyps: &[Hypersurface]) -> Result<AxiomCheck> {
    // fibers: pull each nonzero fiber member back to X and find it above λ
    for h in hyps {
        let x_l = s.member(h.index)?;
        let q = exactla::quotient_projection(s.ambient(), x_l)?;
        for w in h.fiber_system.members().iter().filter(|w| !w.is_zero()) {
            let pre = exactla::preimage(&q, w)?;
            match s.index_of(&pre) {
                Some(m) if s.leq_unchecked(h.index, m) => {}
                _ => {
                    return Ok(fail("iv", vec![h.index], format!("fiber member {w} has no source above")));
                }
            }
        }
    }
    // bases: each blow-up image is a proper nonzero piece of X_μ/X_ν coming
    // from a member between ν and μ
    let mut factors = 0;
    for codim in all_faces(s) {
        for face in codim {
            for b in face_factors(s, &face)?.bases {
                factors += 1;
                let lower = s.member(b.lower)?;
                let upper = s.member(b.upper)?;
                let q = exactla::quotient_projection(s.ambient(), lower)?;
                let top = exactla::image(&q, upper)?;
                for &k in &b.blowup_indices {
                    let img = exactla::image(&q, s.member(k)?)?;
                    let proper = !img.is_zero() && img.dim() < top.dim() && img.is_subspace_of(&top)?;
                    if !proper {
                        return Ok(fail("iv", face.chain.clone(), format!("blow-up of member {k} is degenerate")));
                    }
                }
                for &k in &b.separated_indices {
                    let meet = s.meet(k, b.lower)?;
                    if meet == b.lower || meet == k {
                        return Ok(fail("iv", face.chain.clone(), format!("member {k} is comparable")));
                    }
                }
            }
        }
    }
    Ok(pass("iv", format!("{} fibers, {factors} base factors", hyps.len())))
}
