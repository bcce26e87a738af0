//! Local models of a many-body compactification near the end of a coordinate
//! axis.
//!
//! Near the direction `+e_i` at infinity, `ρ = 1/x_i` and `y_j = x_j/x_i`
//! are coordinates on the radial compactification, with `ρ` defining the
//! boundary. A coordinate member `V ∋ e_i` meets this chart in
//! `{ρ = 0, y_j = 0 : e_j ∉ V}`.

use serde::Serialize;

use super::{run_program, BaseCoord, ChartAtlas, Kind, ModelCorner};
use crate::error::{Error, Result};
use crate::linsys::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineModel {
    pub axis: usize,
    /// `rho` followed by `y{j}` for every `j ≠ axis`.
    pub corner: ModelCorner,
    pub program: Vec<Vec<String>>,
    /// System member blown up by each program step.
    pub center_members: Vec<usize>,
}

impl AffineModel {
    pub fn run(&self) -> Result<ChartAtlas> {
        run_program(&self.corner, &self.program)
    }

    /// Model coordinate label for ambient coordinate `j`.
    pub fn label(&self, j: usize) -> String {
        if j == self.axis {
            "rho".into()
        } else {
            format!("y{j}")
        }
    }

    /// System member corresponding to each face of the executed model: the
    /// boundary `ρ = 0` is the full space.
    pub fn face_members(&self, atlas: &ChartAtlas, system: &LinearSystem) -> Vec<(usize, usize)> {
        atlas
            .faces()
            .iter()
            .map(|f| {
                let m = match f.origin {
                    super::FaceOrigin::Base(_) => system.full_index(),
                    super::FaceOrigin::Center(step) => self.center_members[step],
                };
                (f.id, m)
            })
            .collect()
    }
}

/// Coordinate axes spanning a member, or an error if it is not a coordinate
/// subspace.
pub(crate) fn coordinate_axes(system: &LinearSystem, m: usize) -> Result<Vec<usize>> {
    let v = system.member(m)?;
    let basis = v.basis();
    let mut axes = Vec::with_capacity(v.dim());
    for r in 0..basis.rows() {
        let row = basis.row(r);
        let nz: Vec<usize> = (0..row.len()).filter(|&j| row[j] != num_traits::Zero::zero()).collect();
        match nz.as_slice() {
            [j] => axes.push(*j),
            _ => {
                return Err(Error::input(format!(
                    "member {} is not a coordinate subspace",
                    system.name(m)
                )))
            }
        }
    }
    Ok(axes)
}

/// The model near `+e_axis` and the blow-up program of the members through
/// it, in canonical order. The full space itself is the boundary of the
/// model and contributes no center.
pub fn affine_boundary_model(system: &LinearSystem, axis: usize) -> Result<AffineModel> {
    let n = system.ambient();
    if axis >= n {
        return Err(Error::input(format!(
            "axis {axis} lies in no nonzero member of a system on Q^{n}"
        )));
    }
    let mut members = Vec::with_capacity(system.len());
    for m in 0..system.len() {
        members.push(coordinate_axes(system, m)?);
    }
    let mut corner = Vec::with_capacity(n);
    let mut model = AffineModel {
        axis,
        corner: ModelCorner::new(Vec::new())?,
        program: Vec::new(),
        center_members: Vec::new(),
    };
    for j in 0..n {
        corner.push(BaseCoord {
            name: model.label(j),
            kind: if j == axis { Kind::HalfLine } else { Kind::Line },
        });
    }
    model.corner = ModelCorner::new(corner)?;
    for (m, axes) in members.iter().enumerate() {
        if m == system.full_index() || !axes.contains(&axis) {
            continue;
        }
        let mut center = vec![model.label(axis)];
        center.extend((0..n).filter(|j| !axes.contains(j)).map(|j| model.label(j)));
        model.program.push(center);
        model.center_members.push(m);
    }
    Ok(model)
}
