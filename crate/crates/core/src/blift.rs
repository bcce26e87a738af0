//! Lifts of admissible maps to b-maps between many-body compactifications.
//!
//! Hypersurfaces are labelled by nonzero member indices. An image of `0`
//! means the hypersurface is carried into the interior of the target.

use crate::admissible::{QuotientWitness, SystemMap};
use crate::error::{Error, Result};
use crate::exactla;
use crate::exponent::ExponentMatrix;
use crate::linsys::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedMap {
    pub underlying: SystemMap,
    /// `(λ, μ)` for each nonzero domain member `λ`, in canonical order.
    pub hyp_image: Vec<(usize, usize)>,
    pub exponents: ExponentMatrix,
    pub b_fibration: bool,
}

impl LiftedMap {
    pub fn image_of(&self, lambda: usize) -> Option<usize> {
        self.hyp_image
            .iter()
            .find(|(l, _)| *l == lambda)
            .map(|(_, m)| *m)
    }
}

fn nonzero(s: &LinearSystem) -> Vec<usize> {
    s.nonzero().collect()
}

/// Human-readable account of a failed admissible-quotient check.
pub fn describe_witness(w: &QuotientWitness, f: &SystemMap) -> String {
    match w {
        QuotientWitness::PreimageNotMember { codomain_member } => format!(
            "preimage of {} is not in the domain system",
            f.codomain().name(*codomain_member)
        ),
        QuotientWitness::ImageNotMember { domain_member, image } => format!(
            "image {image} of {} is not in the codomain system",
            f.domain().name(*domain_member)
        ),
        QuotientWitness::CodomainMemberNotHit { codomain_member } => format!(
            "{} is not the image of any domain member",
            f.codomain().name(*codomain_member)
        ),
    }
}

/// The lift of an admissible quotient. `N_λ` goes to `M_{f(λ)}` with exponent
/// one, or into the interior when `f(λ) = 0`.
pub fn lift_quotient(f: &SystemMap) -> Result<LiftedMap> {
    let verdict = f.is_admissible_quotient()?;
    if let Some(w) = verdict.witness {
        return Err(Error::Precondition(format!(
            "{} is not an admissible quotient: {}",
            f.name,
            describe_witness(&w, f)
        )));
    }
    let member_map = f.member_map()?;
    let rows = nonzero(f.domain());
    let mut exponents = ExponentMatrix::zeros(rows.clone(), nonzero(f.codomain()));
    let mut hyp_image = Vec::with_capacity(rows.len());
    for &l in &rows {
        let mu = member_map[l].expect("admissible quotient");
        if mu != 0 {
            exponents.set(l, mu, 1)?;
        }
        hyp_image.push((l, mu));
    }
    let b_fibration = exponents.rows_are_simple();
    Ok(LiftedMap {
        underlying: f.clone(),
        hyp_image,
        exponents,
        b_fibration,
    })
}

/// Exponents of the blow-down `[X; ∂S] -> [X; ∂S']` for a subsystem `S'`
/// given by member indices of `S`: `N_W` maps to the smallest `V ∈ S'`
/// containing `W`.
pub fn blowdown_exponents(s: &LinearSystem, sub: &[usize]) -> Result<ExponentMatrix> {
    let mut sub = sub.to_vec();
    sub.sort_unstable();
    sub.dedup();
    if !s.is_subsystem(&sub)? {
        return Err(Error::input(
            "sub-collection must contain 0 and the full space and be closed under intersection",
        ));
    }
    let cols: Vec<usize> = sub.iter().copied().filter(|&v| v != 0).collect();
    let mut e = ExponentMatrix::zeros(nonzero(s), cols);
    for w in s.nonzero() {
        // sub is in canonical order, so the first container is the smallest
        let v = *sub
            .iter()
            .find(|&&v| s.leq_unchecked(w, v))
            .expect("full space contains everything");
        e.set(w, v, 1)?;
    }
    Ok(e)
}

/// Same as [`blowdown_exponents`] with the subsystem given as a system on the
/// same space.
pub fn blowdown_exponents_to(s: &LinearSystem, sub: &LinearSystem) -> Result<ExponentMatrix> {
    if sub.ambient() != s.ambient() {
        return Err(Error::dim("subsystem lives in a different space"));
    }
    let idx = sub
        .members()
        .iter()
        .map(|m| {
            s.index_of(m)
                .ok_or_else(|| Error::input(format!("{m} is not a member of the larger system")))
        })
        .collect::<Result<Vec<_>>>()?;
    blowdown_exponents(s, &idx)
}

/// `g ∘ f` at the level of lifts.
pub fn compose_lifts(g: &LiftedMap, f: &LiftedMap) -> Result<LiftedMap> {
    if f.underlying.codomain() != g.underlying.domain() {
        return Err(Error::input(format!(
            "cannot compose {} after {}: systems differ",
            g.underlying.name, f.underlying.name
        )));
    }
    let underlying = f.underlying.then(&g.underlying)?;
    let exponents = f.exponents.then(&g.exponents)?;
    let hyp_image = f
        .hyp_image
        .iter()
        .map(|&(l, m)| {
            let composed = if m == 0 {
                0
            } else {
                g.image_of(m).expect("nonzero member has an image")
            };
            (l, composed)
        })
        .collect();
    let b_fibration = f.b_fibration && g.b_fibration && exponents.rows_are_simple();
    Ok(LiftedMap {
        underlying,
        hyp_image,
        exponents,
        b_fibration,
    })
}

/// Lift data of a general admissible map, assembled from its factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralLift {
    /// `[X; ∂S_X] -> [X; ∂f⁻¹(S_Y)]`.
    pub blowdown: ExponentMatrix,
    /// Lift of `X -> X/ker f` on the refined system.
    pub quotient: LiftedMap,
    /// For each nonzero member `V` of `S'/ker f`, the smallest codomain member
    /// containing its image.
    pub inclusion_face_image: Vec<(usize, usize)>,
    /// Composite face image `λ ↦ μ` on domain hypersurfaces; `0` is interior.
    pub hyp_image: Vec<(usize, usize)>,
}

pub fn lift_admissible(f: &SystemMap) -> Result<GeneralLift> {
    let fac = f.factorize()?;
    let blowdown = blowdown_exponents_to(f.domain(), &fac.refined_domain)?;
    let quotient = lift_quotient(&fac.quotient_part)?;
    let inc = &fac.inclusion_part;
    let mut inclusion_face_image = Vec::new();
    for v in inc.domain().nonzero() {
        let img = exactla::image(inc.matrix(), inc.domain().member(v)?)?;
        let w = inc
            .codomain()
            .members()
            .iter()
            .position(|w| img.is_subspace_of(w).expect("same ambient"))
            .expect("full space contains everything");
        inclusion_face_image.push((v, w));
    }
    let refined = &fac.refined_domain;
    let mut hyp_image = Vec::new();
    for l in f.domain().nonzero() {
        let target = blowdown.row(l).expect("row per hypersurface");
        let col = target.iter().position(|&e| e != 0).expect("blow-down row");
        let v_in_x = blowdown.cols[col];
        let v = refined
            .index_of(f.domain().member(v_in_x)?)
            .expect("column is a refined member");
        let q = quotient.image_of(v).expect("nonzero refined member");
        let mu = if q == 0 {
            0
        } else {
            inclusion_face_image
                .iter()
                .find(|(a, _)| *a == q)
                .map(|(_, w)| *w)
                .expect("nonzero quotient member")
        };
        hyp_image.push((l, mu));
    }
    Ok(GeneralLift {
        blowdown,
        quotient,
        inclusion_face_image,
        hyp_image,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProduct {
    pub lambda: usize,
    pub mu: usize,
    /// `X_λ -> Y_μ`; the zero map when `μ = 0`.
    pub base: SystemMap,
    pub base_is_zero: bool,
    /// `X/X_λ -> Y/Y_μ`, an admissible quotient.
    pub fiber: SystemMap,
}

/// The restriction of a lifted quotient to `N_λ`, which is a product of a
/// base map and a fiber map.
pub fn boundary_restriction(l: &LiftedMap, lambda: usize) -> Result<BoundaryProduct> {
    let f = &l.underlying;
    if f.domain().member(lambda)?.is_zero() {
        return Err(Error::input("boundary restriction needs a nonzero member"));
    }
    let mu = l
        .image_of(lambda)
        .ok_or_else(|| Error::input(format!("member {lambda} is not a domain hypersurface")))?;
    let (base, fiber) = f.restrict_and_quotient(lambda)?;
    Ok(BoundaryProduct {
        lambda,
        mu,
        base_is_zero: mu == 0,
        base,
        fiber,
    })
}
