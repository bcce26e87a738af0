//! Admissible linear maps between linear systems.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactla::{self, Matrix, Subspace};
use crate::linsys::LinearSystem;

/// A linear map `Q^n -> Q^m` together with systems on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemMap {
    pub name: String,
    matrix: Matrix,
    domain: LinearSystem,
    codomain: LinearSystem,
}

/// Outcome of a check, with the first failing member in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn fail(w: W) -> Self {
        Verdict {
            holds: false,
            witness: Some(w),
        }
    }
}

/// Why a map fails to be an admissible quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientWitness {
    /// The preimage of this codomain member is not a domain member.
    PreimageNotMember { codomain_member: usize },
    /// The image of this domain member is not a codomain member.
    ImageNotMember { domain_member: usize, image: Subspace },
    /// No domain member maps onto this codomain member.
    CodomainMemberNotHit { codomain_member: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// `f⁻¹(S_Y)`, a subsystem of the domain system.
    pub refined_domain: LinearSystem,
    /// `X -> X/ker f`, from the refined domain onto its quotient system.
    pub quotient_part: SystemMap,
    /// The injection `X/ker f -> Y`.
    pub inclusion_part: SystemMap,
}

impl SystemMap {
    pub fn new(
        name: impl Into<String>,
        matrix: Matrix,
        domain: LinearSystem,
        codomain: LinearSystem,
    ) -> Result<Self> {
        let name = name.into();
        if matrix.cols() != domain.ambient() || matrix.rows() != codomain.ambient() {
            return Err(Error::dim(format!(
                "map {name} is {}x{} but systems live in Q^{} -> Q^{}",
                matrix.rows(),
                matrix.cols(),
                domain.ambient(),
                codomain.ambient()
            )));
        }
        Ok(SystemMap {
            name,
            matrix,
            domain,
            codomain,
        })
    }

    pub fn identity(name: impl Into<String>, system: LinearSystem) -> Self {
        let n = system.ambient();
        SystemMap {
            name: name.into(),
            matrix: Matrix::identity(n),
            domain: system.clone(),
            codomain: system,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &LinearSystem {
        &self.domain
    }

    pub fn codomain(&self) -> &LinearSystem {
        &self.codomain
    }

    pub fn kernel(&self) -> Subspace {
        exactla::kernel(&self.matrix)
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.matrix.rows()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SystemMap) -> Result<SystemMap> {
        if self.codomain != g.domain {
            return Err(Error::dim(format!(
                "cannot compose {} after {}: systems differ",
                g.name, self.name
            )));
        }
        SystemMap::new(
            format!("{}*{}", g.name, self.name),
            g.matrix.mul(&self.matrix)?,
            self.domain.clone(),
            g.codomain.clone(),
        )
    }

    /// Preimage of each codomain member, in codomain canonical order.
    pub fn preimages(&self) -> Result<Vec<Subspace>> {
        self.codomain
            .members()
            .iter()
            .map(|w| exactla::preimage(&self.matrix, w))
            .collect()
    }

    /// Image of each domain member, in domain canonical order.
    pub fn images(&self) -> Result<Vec<Subspace>> {
        self.domain
            .members()
            .iter()
            .map(|v| exactla::image(&self.matrix, v))
            .collect()
    }

    /// For each domain member, the codomain index of its image, if a member.
    pub fn member_map(&self) -> Result<Vec<Option<usize>>> {
        Ok(self
            .images()?
            .iter()
            .map(|img| self.codomain.index_of(img))
            .collect())
    }

    /// Every codomain member pulls back to a domain member. The witness is the
    /// first codomain index whose preimage is not one.
    pub fn is_admissible(&self) -> Result<Verdict<usize>> {
        for (i, pre) in self.preimages()?.iter().enumerate() {
            if self.domain.index_of(pre).is_none() {
                return Ok(Verdict::fail(i));
            }
        }
        Ok(Verdict::pass())
    }

    /// Admissible, and the images of domain members are exactly the codomain
    /// members.
    pub fn is_admissible_quotient(&self) -> Result<Verdict<QuotientWitness>> {
        if let Some(i) = self.is_admissible()?.witness {
            return Ok(Verdict::fail(QuotientWitness::PreimageNotMember {
                codomain_member: i,
            }));
        }
        let mut hit = vec![false; self.codomain.len()];
        for (i, img) in self.images()?.into_iter().enumerate() {
            match self.codomain.index_of(&img) {
                Some(j) => hit[j] = true,
                None => {
                    return Ok(Verdict::fail(QuotientWitness::ImageNotMember {
                        domain_member: i,
                        image: img,
                    }))
                }
            }
        }
        if let Some(j) = hit.iter().position(|h| !h) {
            return Ok(Verdict::fail(QuotientWitness::CodomainMemberNotHit {
                codomain_member: j,
            }));
        }
        Ok(Verdict::pass())
    }

    /// The quotient criterion phrased through the kernel: `f` is onto, the
    /// projection to `X/ker f` is admissible, and the induced isomorphism
    /// `X/ker f -> Y` carries `S_X/ker f` onto `S_Y`.
    pub fn is_quotient_of_kernel(&self) -> Result<bool> {
        if !self.is_surjective() {
            return Ok(false);
        }
        let k = self.kernel();
        if !self.domain.projection_is_admissible(&k)? {
            return Ok(false);
        }
        let n = self.domain.ambient();
        let q = exactla::quotient_projection(n, &k)?;
        let g = exactla::induced_quotient_map(&self.matrix, &k, &Subspace::zero(self.codomain.ambient()))?;
        let mut carried = HashSet::new();
        for v in self.domain.members() {
            carried.insert(exactla::image(&g, &exactla::image(&q, v)?)?);
        }
        let target: HashSet<Subspace> = self.codomain.members().iter().cloned().collect();
        Ok(carried == target)
    }

    /// Splits an admissible map as a refinement of the domain system, an
    /// admissible quotient by the kernel, and an injection.
    pub fn factorize(&self) -> Result<Factorization> {
        if let Some(w) = self.is_admissible()?.witness {
            return Err(Error::Precondition(format!(
                "{} is not admissible: preimage of codomain member {} is not in the domain system",
                self.name,
                self.codomain.name(w)
            )));
        }
        let n = self.domain.ambient();
        let named: Vec<_> = self
            .preimages()?
            .into_iter()
            .map(|p| {
                let i = self.domain.index_of(&p).expect("admissible");
                (Some(self.domain.name(i).to_string()), p)
            })
            .collect();
        let refined = LinearSystem::close_named(n, named)?;
        let k = self.kernel();
        let q = exactla::quotient_projection(n, &k)?;
        let (qsys, _) = refined.quotient_system(&k)?;
        let g = exactla::induced_quotient_map(
            &self.matrix,
            &k,
            &Subspace::zero(self.codomain.ambient()),
        )?;
        let quotient_part = SystemMap::new(format!("{}/ker", self.name), q, refined.clone(), qsys.clone())?;
        let inclusion_part = SystemMap::new(format!("{}~", self.name), g, qsys, self.codomain.clone())?;
        Ok(Factorization {
            refined_domain: refined,
            quotient_part,
            inclusion_part,
        })
    }

    /// For a domain member `λ` with image `μ = f(λ)`, the restriction
    /// `X_λ -> Y_μ` and the induced map `X/X_λ -> Y/Y_μ`.
    ///
    /// `X_λ` and `Y_μ` carry the members below them, written in the
    /// coordinates of their RREF bases. The quotients carry the systems of
    /// members above `λ` and `μ`.
    pub fn restrict_and_quotient(&self, lambda: usize) -> Result<(SystemMap, SystemMap)> {
        if lambda >= self.domain.len() {
            return Err(Error::input(format!(
                "member {lambda} out of range for {} members",
                self.domain.len()
            )));
        }
        let x_l = self.domain.member(lambda)?;
        let y_img = exactla::image(&self.matrix, x_l)?;
        let mu = self.codomain.index_of(&y_img).ok_or_else(|| {
            Error::Precondition(format!(
                "image of {} is not a member of the codomain",
                self.domain.name(lambda)
            ))
        })?;
        let y_m = self.codomain.member(mu)?;

        let (dom_l, _) = self.domain.restrict_below(lambda)?;
        let (cod_m, _) = self.codomain.restrict_below(mu)?;
        // column j of the restriction: coordinates of f(b_j) in the basis of Y_μ
        let mut cols = Vec::with_capacity(x_l.dim());
        for b in x_l.basis().row_vecs() {
            let fb = self.matrix.apply(&b)?;
            cols.push(
                y_m.coordinates(&fb)?
                    .ok_or_else(|| Error::Internal("restriction leaves the image".into()))?,
            );
        }
        let f_l = Matrix::from_rows(y_m.dim(), &cols)?.transpose();
        let restricted = SystemMap::new(format!("{}|{}", self.name, self.domain.name(lambda)), f_l, dom_l, cod_m)?;

        let dom_q = upper_quotient(&self.domain, lambda)?;
        let cod_q = upper_quotient(&self.codomain, mu)?;
        let g = exactla::induced_quotient_map(&self.matrix, x_l, y_m)?;
        let modded = SystemMap::new(format!("{}/{}", self.name, self.domain.name(lambda)), g, dom_q, cod_q)?;
        Ok((restricted, modded))
    }
}

/// `{X_μ / X_λ : μ ≥ λ}`, on the coordinates of
/// [`quotient_projection`](exactla::quotient_projection).
pub fn upper_quotient(system: &LinearSystem, lambda: usize) -> Result<LinearSystem> {
    let k = system.member(lambda)?;
    let q = exactla::quotient_projection(system.ambient(), k)?;
    let named = system
        .above(lambda)
        .into_iter()
        .map(|j| Ok((Some(system.name(j).to_string()), exactla::image(&q, &system.members()[j])?)))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::from_members(q.rows(), named)
}
