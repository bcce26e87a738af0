//! Comparing atlases and pulling back boundary defining functions.
//!
//! A point of a chart is described by its stratum `Z` (the coordinates that
//! vanish) and the signs of the remaining line coordinates. A target chart
//! covers it when every target coordinate, written as a monomial in the
//! source chart, is smooth near the point and half-line coordinates stay
//! nonnegative.

use serde::Serialize;

use super::{Chart, ChartAtlas, FaceId, Kind};
use crate::error::{Error, Result};
use crate::exponent::ExponentMatrix;

/// `x'_p = signs[p] ∏_q x_q^{exponents[p][q]}` from source base coordinates
/// `x` to target base coordinates `x'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    pub signs: Vec<i8>,
    pub exponents: Vec<Vec<i64>>,
}

impl MonomialMap {
    pub fn identity(n: usize) -> Self {
        MonomialMap {
            signs: vec![1; n],
            exponents: (0..n).map(|p| (0..n).map(|q| i64::from(p == q)).collect()).collect(),
        }
    }
}

/// A point no chart of the other atlas covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `"forward"` when the point lies in the first atlas.
    pub direction: String,
    pub chart: usize,
    /// Chart coordinates vanishing at the point.
    pub zero: Vec<String>,
    /// Signs of the nonvanishing line coordinates, by chart coordinate.
    pub signs: Vec<(String, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AtlasComparison {
    /// The identity extends; `face_map` pairs each face with its image.
    EquivalentViaIdentity { face_map: Vec<(FaceId, FaceId)> },
    NotBEquivalent {
        reason: String,
        witness: Option<Witness>,
    },
}

impl AtlasComparison {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, AtlasComparison::EquivalentViaIdentity { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pullback {
    pub exponents: ExponentMatrix,
    /// Source faces whose generic points leave every target chart.
    pub uncovered: Vec<FaceId>,
}

struct Transition {
    /// `c^b_l = sign[l] ∏_k (s^a_k c^a_k)^{e[l][k]}`.
    e: Vec<Vec<i64>>,
    sign: Vec<i8>,
}

fn parity_sign(s: i8, e: i64) -> i8 {
    if s < 0 && e.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

fn transition(a: &Chart, b: &Chart, map: &MonomialMap) -> Transition {
    let src = a.coords.len();
    let mid = map.exponents.first().map_or(0, |r| r.len());
    // M^b · A
    let ma: Vec<Vec<i64>> = b
        .coords
        .iter()
        .map(|c| {
            (0..mid)
                .map(|q| c.monomial.iter().zip(&map.exponents).map(|(m, row)| m * row[q]).sum())
                .collect()
        })
        .collect();
    let e = ma
        .iter()
        .map(|row| {
            (0..src)
                .map(|k| row.iter().zip(&a.inverse).map(|(m, n)| m * n[k]).sum())
                .collect()
        })
        .collect();
    let sign = b
        .coords
        .iter()
        .map(|c| {
            c.monomial
                .iter()
                .zip(&map.signs)
                .fold(c.sign, |acc, (&m, &s)| acc * parity_sign(s, m))
        })
        .collect();
    Transition { e, sign }
}

/// Whether chart `b` covers the point of chart `a` given by `zero` and the
/// signs `sigma` of its coordinates (`+1` for half-lines).
fn covers(t: &Transition, a: &Chart, b: &Chart, zero: &[bool], sigma: &[i8]) -> bool {
    for (l, row) in t.e.iter().enumerate() {
        let half = b.coords[l].kind == Kind::HalfLine;
        let mut sign = t.sign[l];
        for (k, &e) in row.iter().enumerate() {
            if zero[k] {
                if e < 0 || (half && a.coords[k].kind == Kind::Line && e != 0) {
                    return false;
                }
            }
            sign *= parity_sign(a.coords[k].sign * sigma[k], e);
        }
        if half && sign < 0 {
            return false;
        }
    }
    true
}

fn line_positions(a: &Chart, zero: &[bool]) -> Vec<usize> {
    (0..a.coords.len())
        .filter(|&k| a.coords[k].kind == Kind::Line && !zero[k])
        .collect()
}

fn sign_patterns(a: &Chart, zero: &[bool]) -> impl Iterator<Item = Vec<i8>> {
    let lines = line_positions(a, zero);
    let n = a.coords.len();
    (0u32..(1 << lines.len())).map(move |m| {
        let mut sigma = vec![1i8; n];
        for (b, &k) in lines.iter().enumerate() {
            if m >> b & 1 == 1 {
                sigma[k] = -1;
            }
        }
        sigma
    })
}

fn witness(src: &ChartAtlas, direction: &str, ai: usize, zero: &[bool], sigma: &[i8]) -> Witness {
    let a = &src.charts[ai];
    let base = &src.base;
    Witness {
        direction: direction.into(),
        chart: ai,
        zero: (0..zero.len()).filter(|&k| zero[k]).map(|k| a.label(base, k)).collect(),
        signs: line_positions(a, zero)
            .into_iter()
            .map(|k| (a.label(base, k), sigma[k]))
            .collect(),
    }
}

/// Every boundary point of `src` lies in a chart of `dst` in which the
/// identity is smooth.
fn identity_extends(src: &ChartAtlas, dst: &ChartAtlas, direction: &str) -> Option<Witness> {
    let id = MonomialMap::identity(src.base.dim());
    for (ai, a) in src.charts.iter().enumerate() {
        let ts: Vec<Transition> = dst.charts.iter().map(|b| transition(a, b, &id)).collect();
        let n = a.coords.len();
        for mask in 1u32..(1 << n) {
            let zero: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
            if !(0..n).any(|k| zero[k] && a.coords[k].kind == Kind::HalfLine) {
                continue;
            }
            for sigma in sign_patterns(a, &zero) {
                let hit = dst
                    .charts
                    .iter()
                    .zip(&ts)
                    .any(|(b, t)| covers(t, a, b, &zero, &sigma));
                if !hit {
                    return Some(witness(src, direction, ai, &zero, &sigma));
                }
            }
        }
    }
    None
}

/// Decides whether the identity of the common interior extends to a
/// diffeomorphism of manifolds with corners.
pub fn compare_atlases(a: &ChartAtlas, b: &ChartAtlas) -> Result<AtlasComparison> {
    if a.base != b.base {
        return Err(Error::input("atlases are built on different model corners"));
    }
    if a.canonical_key() == b.canonical_key() {
        return Ok(AtlasComparison::EquivalentViaIdentity {
            face_map: face_pattern(a, b)?
                .ok_or_else(|| Error::Internal("identical charts with unmatched faces".into()))?,
        });
    }
    for (src, dst, dir) in [(a, b, "forward"), (b, a, "backward")] {
        if let Some(w) = identity_extends(src, dst, dir) {
            return Ok(AtlasComparison::NotBEquivalent {
                reason: "identity does not extend smoothly".into(),
                witness: Some(w),
            });
        }
    }
    match face_pattern(a, b)? {
        Some(face_map) => Ok(AtlasComparison::EquivalentViaIdentity { face_map }),
        None => Ok(AtlasComparison::NotBEquivalent {
            reason: "faces do not correspond one to one".into(),
            witness: None,
        }),
    }
}

fn face_pattern(a: &ChartAtlas, b: &ChartAtlas) -> Result<Option<Vec<(FaceId, FaceId)>>> {
    let p = pullback_exponents(a, b, &MonomialMap::identity(a.base.dim()))?;
    if !p.uncovered.is_empty() || p.exponents.rows.len() != p.exponents.cols.len() {
        return Ok(None);
    }
    let mut pairs = Vec::new();
    let mut used = vec![false; p.exponents.cols.len()];
    for (i, row) in p.exponents.entries.iter().enumerate() {
        let ones: Vec<usize> = (0..row.len()).filter(|&j| row[j] != 0).collect();
        match ones.as_slice() {
            [j] if row[*j] == 1 && !used[*j] => {
                used[*j] = true;
                pairs.push((p.exponents.rows[i], p.exponents.cols[*j]));
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(pairs))
}

/// Exponents `e[F][G]` with `map* ρ_G = a ∏_F ρ_F^{e[F][G]}`, read off at generic
/// points of every source face.
pub fn pullback_exponents(source: &ChartAtlas, target: &ChartAtlas, map: &MonomialMap) -> Result<Pullback> {
    let (p, q) = (target.base.dim(), source.base.dim());
    if map.signs.len() != p || map.exponents.len() != p || map.exponents.iter().any(|r| r.len() != q) {
        return Err(Error::dim(format!("monomial map must be {p}x{q}")));
    }
    let mut exponents = ExponentMatrix::zeros(source.face_ids(), target.face_ids());
    let faces = source.faces();
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; faces.len()];
    let mut missed: Vec<Option<usize>> = vec![None; faces.len()];
    let mut hint = 0;
    for (ai, a) in source.charts.iter().enumerate() {
        let mut ts: Vec<Option<Transition>> = (0..target.charts.len()).map(|_| None).collect();
        for (fi, face) in faces.iter().enumerate() {
            let Some(k) = a.bdf_of(face.id) else { continue };
            let mut zero = vec![false; a.coords.len()];
            zero[k] = true;
            for sigma in sign_patterns(a, &zero) {
                // the chart that covered the last point is tried first
                let order = std::iter::once(hint).chain((0..target.charts.len()).filter(|&bi| bi != hint));
                let mut found = None;
                for bi in order.filter(|&bi| bi < target.charts.len()) {
                    let b = &target.charts[bi];
                    let t = ts[bi].get_or_insert_with(|| transition(a, b, map));
                    if covers(t, a, b, &zero, &sigma) {
                        found = Some(bi);
                        break;
                    }
                }
                let Some(bi) = found else {
                    missed[fi].get_or_insert(ai);
                    continue;
                };
                hint = bi;
                let (b, t) = (&target.charts[bi], ts[bi].as_ref().expect("computed"));
                let here = target
                    .faces()
                    .iter()
                    .map(|g| b.bdf_of(g.id).map_or(0, |l| t.e[l][k] as u32))
                    .collect::<Vec<_>>();
                match &rows[fi] {
                    None => rows[fi] = Some(here),
                    Some(r) if *r != here => {
                        return Err(Error::NotBMap(format!(
                            "face {} pulls back inconsistently (chart {ai})",
                            face.id
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    let mut uncovered = Vec::new();
    for ((face, row), miss) in faces.iter().zip(rows).zip(missed) {
        match (row, miss) {
            (None, _) => uncovered.push(face.id),
            (Some(_), Some(ai)) => {
                return Err(Error::NotBMap(format!(
                    "face {} leaves the target in chart {ai}",
                    face.id
                )))
            }
            (Some(r), None) => {
                for (g, e) in target.faces().iter().zip(r) {
                    exponents.set(face.id, g.id, e)?;
                }
            }
        }
    }
    Ok(Pullback {
        exponents,
        uncovered,
    })
}
