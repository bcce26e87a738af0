//! Iterated blow-ups of model corners `[0,∞)^k × ℝ^l` along coordinate
//! centers, tracked in projective charts.
//!
//! Every chart coordinate is a signed Laurent monomial in the base
//! coordinates, `c_k = s_k ∏_q x_q^{M[k][q]}`, and conversely
//! `x_q = ∏_k (s_k c_k)^{N[q][k]}` with `N = M⁻¹` a nonnegative integer
//! matrix. Blowing up a coordinate locus `{c_j = 0 : j ∈ J}` replaces a chart
//! by one chart per `i ∈ J` and admissible sign `s`, in which `ŵ = s c_i`
//! becomes the front face defining function and `c_j ↦ c_j / ŵ`.

mod compare;
mod model;

pub use compare::{compare_atlases, pullback_exponents, AtlasComparison, MonomialMap, Pullback, Witness};
pub use model::{affine_boundary_model, AffineModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Valued in `[0, ∞)`.
    #[serde(rename = "halfline", alias = "half_line", alias = "half")]
    HalfLine,
    /// Valued in `ℝ`.
    #[serde(rename = "line")]
    Line,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseCoord {
    pub name: String,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelCorner {
    coords: Vec<BaseCoord>,
}

impl ModelCorner {
    pub fn new(coords: Vec<BaseCoord>) -> Result<Self> {
        for (i, c) in coords.iter().enumerate() {
            if c.name.is_empty() {
                return Err(Error::input("coordinate labels must be nonempty"));
            }
            if coords[..i].iter().any(|d| d.name == c.name) {
                return Err(Error::input(format!("duplicate coordinate label {}", c.name)));
            }
        }
        Ok(ModelCorner { coords })
    }

    /// Shorthand: `("x", Kind::Line)` pairs.
    pub fn from_pairs(pairs: &[(&str, Kind)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, k)| BaseCoord {
                    name: n.to_string(),
                    kind: *k,
                })
                .collect(),
        )
    }

    pub fn coords(&self) -> &[BaseCoord] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == label)
    }

    /// Sorted, deduplicated coordinate positions of a center.
    pub fn center(&self, labels: &[impl AsRef<str>]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(Error::input("a center needs at least one coordinate"));
        }
        let mut out = labels
            .iter()
            .map(|l| {
                self.position(l.as_ref())
                    .ok_or_else(|| Error::input(format!("unknown coordinate {}", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn labels(&self, positions: &[usize]) -> Vec<String> {
        positions.iter().map(|&p| self.coords[p].name.clone()).collect()
    }
}

pub type FaceId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChartCoord {
    pub kind: Kind,
    pub sign: i8,
    /// Exponents over the base coordinates.
    pub monomial: Vec<i64>,
    /// The boundary face this coordinate defines, for half-line coordinates.
    pub face: Option<FaceId>,
}

/// One projective blow-up choice: history step, chart coordinate, sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub center: usize,
    pub coord: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub coords: Vec<ChartCoord>,
    /// `x_q = ∏_k (s_k c_k)^{inverse[q][k]}`.
    pub inverse: Vec<Vec<i64>>,
    pub lineage: Vec<Step>,
}

impl Chart {
    /// Chart coordinate defining `face`, if the face meets this chart.
    pub fn bdf_of(&self, face: FaceId) -> Option<usize> {
        self.coords.iter().position(|c| c.face == Some(face))
    }

    /// Readable name of coordinate `k`, such as `-y/x`.
    pub fn label(&self, base: &ModelCorner, k: usize) -> String {
        let c = &self.coords[k];
        let part = |want_pos: bool| {
            let mut terms = Vec::new();
            for (q, &e) in c.monomial.iter().enumerate() {
                if (e > 0) == want_pos && e != 0 {
                    let n = &base.coords[q].name;
                    let a = e.abs();
                    terms.push(if a == 1 { n.clone() } else { format!("{n}^{a}") });
                }
            }
            terms.join("*")
        };
        let (num, den) = (part(true), part(false));
        let num = if num.is_empty() { "1".to_string() } else { num };
        let body = if den.is_empty() {
            num
        } else if den.contains('*') {
            format!("{num}/({den})")
        } else {
            format!("{num}/{den}")
        };
        if c.sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FaceOrigin {
    /// A half-line base coordinate.
    Base(usize),
    /// The front face of a history step.
    Center(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryFace {
    pub id: FaceId,
    pub origin: FaceOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartAtlas {
    base: ModelCorner,
    charts: Vec<Chart>,
    faces: Vec<BoundaryFace>,
    /// Executed centers as base coordinate positions.
    history: Vec<Vec<usize>>,
    /// The face each history step is responsible for. Trivial blow-ups point
    /// at the hypersurface they coincide with.
    center_faces: Vec<FaceId>,
    #[serde(skip)]
    steps: Vec<StepRecord>,
}

/// The lift of a center to one chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ChartLocus {
    NotVisible,
    /// `{c_k = 0 : k ∈ positions}`.
    Locus(Vec<usize>),
}

pub fn base_chart(m: &ModelCorner) -> ChartAtlas {
    let n = m.dim();
    let mut faces = Vec::new();
    let coords = m
        .coords
        .iter()
        .enumerate()
        .map(|(q, c)| {
            let face = (c.kind == Kind::HalfLine).then(|| {
                faces.push(BoundaryFace {
                    id: faces.len(),
                    origin: FaceOrigin::Base(q),
                });
                faces.len() - 1
            });
            let mut monomial = vec![0; n];
            monomial[q] = 1;
            ChartCoord {
                kind: c.kind,
                sign: 1,
                monomial,
                face,
            }
        })
        .collect();
    let inverse = (0..n)
        .map(|q| (0..n).map(|k| i64::from(q == k)).collect())
        .collect();
    ChartAtlas {
        base: m.clone(),
        charts: vec![Chart {
            coords,
            inverse,
            lineage: Vec::new(),
        }],
        faces,
        history: Vec::new(),
        center_faces: Vec::new(),
        steps: Vec::new(),
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// How one step transformed the charts: the center's locus in each parent
/// chart and, for each child, the coordinate that became the front face
/// (`None` for a chart carried over unchanged).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct StepRecord {
    loci: Vec<ChartLocus>,
    children: Vec<Vec<Option<usize>>>,
}

impl ChartAtlas {
    pub fn base(&self) -> &ModelCorner {
        &self.base
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn faces(&self) -> &[BoundaryFace] {
        &self.faces
    }

    pub fn face_ids(&self) -> Vec<FaceId> {
        self.faces.iter().map(|f| f.id).collect()
    }

    pub fn history(&self) -> &[Vec<usize>] {
        &self.history
    }

    pub fn center_faces(&self) -> &[FaceId] {
        &self.center_faces
    }

    pub fn history_labels(&self) -> Vec<Vec<String>> {
        self.history.iter().map(|c| self.base.labels(c)).collect()
    }

    /// The lift of a coordinate center to every chart, followed through the
    /// history: the full preimage while the lift lies inside the step's
    /// center, the strict transform otherwise.
    pub fn lift_center(&self, center: &[usize]) -> Result<Vec<ChartLocus>> {
        let n = self.base.dim();
        if center.is_empty() || center.iter().any(|&q| q >= n) {
            return Err(Error::input("center must be a nonempty set of base coordinates"));
        }
        let mut sorted = center.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(t) = self.history.iter().position(|h| *h == sorted) {
            return Err(Error::DegenerateCenter {
                center: self.base.labels(&sorted),
                chart: t,
            });
        }
        let mut lift = vec![ChartLocus::Locus(sorted)];
        for step in &self.steps {
            // inside the center iff, wherever the lift is visible, the
            // center is visible with fewer equations
            let inside = lift.iter().zip(&step.loci).all(|(l, p)| match (l, p) {
                (ChartLocus::NotVisible, _) => true,
                (ChartLocus::Locus(_), ChartLocus::NotVisible) => false,
                (ChartLocus::Locus(h), ChartLocus::Locus(j)) => is_subset(j, h),
            });
            let mut next = Vec::new();
            for ((l, p), kids) in lift.iter().zip(&step.loci).zip(&step.children) {
                for kid in kids {
                    next.push(match (l, p, kid) {
                        (ChartLocus::Locus(h), ChartLocus::Locus(j), Some(i)) => {
                            if inside {
                                let mut h2: Vec<usize> =
                                    h.iter().copied().filter(|k| !j.contains(k)).collect();
                                h2.push(*i);
                                h2.sort_unstable();
                                ChartLocus::Locus(h2)
                            } else if h.contains(i) {
                                ChartLocus::NotVisible
                            } else {
                                ChartLocus::Locus(h.clone())
                            }
                        }
                        _ => l.clone(),
                    });
                }
            }
            lift = next;
        }
        Ok(lift)
    }

    pub fn lift_center_labels(&self, labels: &[impl AsRef<str>]) -> Result<Vec<ChartLocus>> {
        self.lift_center(&self.base.center(labels)?)
    }

    /// `[M; C]` for the current atlas `M`.
    pub fn blowup(&self, center: &[usize]) -> Result<ChartAtlas> {
        let loci = self.lift_center(center)?;
        let step = self.history.len();
        let mut next = self.clone();
        let mut sorted = center.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        next.history.push(sorted);

        let mut alias: Option<FaceId> = None;
        let mut trivial = None;
        for (chart, locus) in self.charts.iter().zip(&loci) {
            let ChartLocus::Locus(l) = locus else { continue };
            let here = match l.as_slice() {
                [k] if chart.coords[*k].kind == Kind::HalfLine => chart.coords[*k].face,
                _ => None,
            };
            match trivial {
                None => {
                    trivial = Some(here.is_some());
                    alias = here;
                }
                Some(t) if t != here.is_some() || (t && alias != here) => {
                    return Err(Error::Internal(format!(
                        "center {:?} is a boundary hypersurface in some charts only",
                        self.base.labels(center)
                    )))
                }
                _ => {}
            }
        }
        let Some(trivial) = trivial else {
            return Err(Error::Internal(format!(
                "center {:?} is visible in no chart",
                self.base.labels(center)
            )));
        };
        if trivial {
            next.center_faces.push(alias.expect("trivial blow-up has a face"));
            next.steps.push(StepRecord {
                children: vec![vec![None]; self.charts.len()],
                loci,
            });
            return Ok(next);
        }

        let face = self.faces.len();
        next.faces.push(BoundaryFace {
            id: face,
            origin: FaceOrigin::Center(step),
        });
        next.center_faces.push(face);
        next.charts = Vec::new();
        let mut children = Vec::with_capacity(self.charts.len());
        for (chart, locus) in self.charts.iter().zip(&loci) {
            let mut kids = Vec::new();
            match locus {
                ChartLocus::NotVisible => {
                    next.charts.push(chart.clone());
                    kids.push(None);
                }
                ChartLocus::Locus(l) => {
                    for &i in l {
                        let signs: &[i8] = match chart.coords[i].kind {
                            Kind::HalfLine => &[1],
                            Kind::Line => &[1, -1],
                        };
                        for &s in signs {
                            next.charts.push(projective_chart(chart, l, i, s, face, step));
                            kids.push(Some(i));
                        }
                    }
                }
            }
            children.push(kids);
        }
        next.steps.push(StepRecord { loci, children });
        Ok(next)
    }

    pub fn blowup_labels(&self, labels: &[impl AsRef<str>]) -> Result<ChartAtlas> {
        self.blowup(&self.base.center(labels)?)
    }

    /// Number of boundary faces.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Chart set up to the sign of line coordinates, for quick equality.
    pub(crate) fn canonical_key(&self) -> Vec<Vec<(Kind, i8, Vec<i64>)>> {
        let mut charts: Vec<_> = self
            .charts
            .iter()
            .map(|c| {
                let mut coords: Vec<_> = c
                    .coords
                    .iter()
                    .map(|k| {
                        let sign = if k.kind == Kind::Line { 1 } else { k.sign };
                        (k.kind, sign, k.monomial.clone())
                    })
                    .collect();
                coords.sort();
                coords
            })
            .collect();
        charts.sort();
        charts.dedup();
        charts
    }
}

fn projective_chart(chart: &Chart, locus: &[usize], i: usize, s: i8, face: FaceId, step: usize) -> Chart {
    let si = chart.coords[i].sign;
    let mut coords = chart.coords.clone();
    coords[i] = ChartCoord {
        kind: Kind::HalfLine,
        sign: s * si,
        monomial: chart.coords[i].monomial.clone(),
        face: Some(face),
    };
    let mut inverse = chart.inverse.clone();
    for &j in locus.iter().filter(|&&j| j != i) {
        let old = &chart.coords[j];
        coords[j] = ChartCoord {
            kind: old.kind,
            sign: old.sign * s * si,
            monomial: old
                .monomial
                .iter()
                .zip(&chart.coords[i].monomial)
                .map(|(a, b)| a - b)
                .collect(),
            face: old.face,
        };
        for row in inverse.iter_mut() {
            row[i] += row[j];
        }
    }
    let mut lineage = chart.lineage.clone();
    lineage.push(Step {
        center: step,
        coord: i,
        sign: s,
    });
    Chart {
        coords,
        inverse,
        lineage,
    }
}

/// Folds [`ChartAtlas::blowup`] over `centers`, given as label lists.
pub fn run_program<S: AsRef<str>>(m: &ModelCorner, centers: &[Vec<S>]) -> Result<ChartAtlas> {
    let mut atlas = base_chart(m);
    for c in centers {
        atlas = atlas.blowup_labels(c)?;
    }
    Ok(atlas)
}
