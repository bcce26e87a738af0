//! Linear systems: finite intersection-closed families of subspaces that
//! contain `0` and the whole space.
//!
//! Members are kept in the canonical size order: ascending dimension, ties
//! broken by the RREF entries. Index `0` is always the zero subspace and the
//! last index is always the full space.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exactla::{self, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Extends inclusion.
    SizeOrder,
    /// No `P ∩ Q` is preceded by both `P` and `Q`.
    IntersectionOrder,
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    ambient: usize,
    members: Vec<Subspace>,
    names: Vec<String>,
    index: HashMap<Subspace, usize>,
    // leq[i * len + j] iff members[i] ⊆ members[j]
    leq: Vec<bool>,
}

impl PartialEq for LinearSystem {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.members == other.members
    }
}

impl Eq for LinearSystem {}

impl LinearSystem {
    /// Smallest linear system containing `generators`.
    pub fn close(ambient: usize, generators: &[Subspace]) -> Result<Self> {
        Self::close_named(ambient, generators.iter().map(|g| (None, g.clone())))
    }

    /// As [`close`](Self::close), keeping the given names. Unnamed members
    /// are called `0` (zero), `X` (full) and `m0`, `m1`, ... in canonical
    /// order.
    pub fn close_named<I>(ambient: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Option<String>, Subspace)>,
    {
        let mut names: HashMap<Subspace, String> = HashMap::new();
        let mut list = vec![Subspace::zero(ambient), Subspace::full(ambient)];
        let mut seen: HashSet<Subspace> = list.iter().cloned().collect();
        for (name, g) in generators {
            if g.ambient() != ambient {
                return Err(Error::dim(format!(
                    "generator {} lives in Q^{}, system ambient is {ambient}",
                    name.as_deref().unwrap_or("<unnamed>"),
                    g.ambient()
                )));
            }
            if let Some(name) = name {
                names.entry(g.clone()).or_insert(name);
            }
            if seen.insert(g.clone()) {
                list.push(g);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..i {
                let m = list[i].intersect(&list[j])?;
                if seen.insert(m.clone()) {
                    list.push(m);
                }
            }
            i += 1;
        }
        Ok(Self::build(ambient, list, names))
    }

    /// Accepts `members` only if they already form a linear system once `0`
    /// and the full space are added.
    pub fn from_members<I>(ambient: usize, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Option<String>, Subspace)>,
    {
        let members: Vec<_> = members.into_iter().collect();
        let given: HashSet<Subspace> = members.iter().map(|(_, s)| s.clone()).collect();
        let sys = Self::close_named(ambient, members)?;
        for (i, m) in sys.members.iter().enumerate() {
            if !given.contains(m) && i != 0 && i != sys.len() - 1 {
                return Err(Error::input(format!(
                    "family is not closed under intersection: missing {m}"
                )));
            }
        }
        Ok(sys)
    }

    fn build(ambient: usize, mut list: Vec<Subspace>, mut given: HashMap<Subspace, String>) -> Self {
        list.sort();
        list.dedup();
        let taken: HashSet<String> = given.values().cloned().collect();
        let mut counter = 0;
        let names = list
            .iter()
            .map(|m| {
                given.remove(m).unwrap_or_else(|| loop {
                    if m.is_zero() && !taken.contains("0") {
                        break "0".to_string();
                    }
                    if m.is_full() && !taken.contains("X") {
                        break "X".to_string();
                    }
                    let candidate = format!("m{counter}");
                    counter += 1;
                    if !taken.contains(&candidate) {
                        break candidate;
                    }
                })
            })
            .collect();
        let index = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = list.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = i == j
                    || (list[i].dim() < list[j].dim()
                        && list[i].is_subspace_of(&list[j]).expect("same ambient"));
            }
        }
        LinearSystem {
            ambient,
            members: list,
            names,
            index,
            leq,
        }
    }

    /// Same members, new names (by canonical index).
    pub fn renamed(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::input(format!(
                "{} names for {} members",
                names.len(),
                self.len()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Never true: a system always holds the zero subspace.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> Result<&Subspace> {
        self.check(i)?;
        Ok(&self.members[i])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.len() - 1
    }

    /// Indices of nonzero members.
    pub fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.members[i].is_zero())
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::Index {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    pub fn leq(&self, i: usize, j: usize) -> Result<bool> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.leq[i * self.len() + j])
    }

    pub fn lt(&self, i: usize, j: usize) -> Result<bool> {
        Ok(i != j && self.leq(i, j)?)
    }

    pub(crate) fn leq_unchecked(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    /// Index of `members[i] ∩ members[j]`.
    pub fn meet(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        if self.leq_unchecked(i, j) {
            return Ok(i);
        }
        if self.leq_unchecked(j, i) {
            return Ok(j);
        }
        let m = self.members[i].intersect(&self.members[j])?;
        self.index_of(&m)
            .ok_or_else(|| Error::Internal(format!("intersection {m} missing from system")))
    }

    /// Members contained in `members[i]`, in canonical order.
    pub fn below(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq_unchecked(j, i)).collect()
    }

    /// Members containing `members[i]`, in canonical order.
    pub fn above(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq_unchecked(i, j)).collect()
    }

    pub fn canonical_size_order(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub fn validate_order(&self, sequence: &[usize], kind: OrderKind) -> Result<bool> {
        let n = self.len();
        let mut pos = vec![usize::MAX; n];
        if sequence.len() != n {
            return Err(Error::input(format!(
                "order lists {} of {n} members",
                sequence.len()
            )));
        }
        for (p, &m) in sequence.iter().enumerate() {
            self.check(m)?;
            if pos[m] != usize::MAX {
                return Err(Error::input(format!("member {m} listed twice")));
            }
            pos[m] = p;
        }
        match kind {
            OrderKind::SizeOrder => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j && self.leq_unchecked(i, j) && pos[i] > pos[j] {
                            return Ok(false);
                        }
                    }
                }
            }
            OrderKind::IntersectionOrder => {
                for i in 0..n {
                    for j in i + 1..n {
                        let m = self.meet(i, j)?;
                        if pos[i] < pos[m] && pos[j] < pos[m] {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The system `{V / (V ∩ K)}` on `Q^(n - dim K)`, together with the map
    /// sending each member index to the index of its image.
    ///
    /// Coordinates on the quotient come from
    /// [`quotient_projection`](exactla::quotient_projection). The image family
    /// is closed under intersection before it is returned; it already is
    /// whenever the projection is admissible. Each image takes the name of the
    /// first member (in canonical order) mapping onto it.
    pub fn quotient_system(&self, k: &Subspace) -> Result<(LinearSystem, Vec<usize>)> {
        let q = exactla::quotient_projection(self.ambient, k)?;
        let images = self
            .members
            .iter()
            .map(|v| exactla::image(&q, v))
            .collect::<Result<Vec<_>>>()?;
        let named: Vec<_> = images
            .iter()
            .zip(&self.names)
            .map(|(img, name)| (Some(name.clone()), img.clone()))
            .collect();
        let sys = LinearSystem::close_named(q.rows(), named)?;
        let surj = images
            .iter()
            .map(|img| sys.index_of(img).expect("image is a generator"))
            .collect();
        Ok((sys, surj))
    }

    /// Whether `X -> X/K` is admissible, i.e. `V + K` is a member for every `V`.
    pub fn projection_is_admissible(&self, k: &Subspace) -> Result<bool> {
        for v in &self.members {
            if self.index_of(&v.sum(k)?).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The members below `lambda`, written in the coordinates of the RREF basis
    /// of `members[lambda]`. Returns the system and, for each of its members,
    /// the original index.
    pub fn restrict_below(&self, lambda: usize) -> Result<(LinearSystem, Vec<usize>)> {
        let top = self.member(lambda)?;
        let below = self.below(lambda);
        let mut named = Vec::with_capacity(below.len());
        let mut rehoused = Vec::with_capacity(below.len());
        for &j in &below {
            let coords = self.members[j]
                .basis()
                .row_vecs()
                .iter()
                .map(|v| {
                    top.coordinates(v)?
                        .ok_or_else(|| Error::Internal("member below is not contained".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let s = Subspace::canonicalize(top.dim(), &coords)?;
            rehoused.push(s.clone());
            named.push((Some(self.names[j].clone()), s));
        }
        let sys = LinearSystem::from_members(top.dim(), named)?;
        let mut back = vec![0; sys.len()];
        for (s, &j) in rehoused.iter().zip(&below) {
            back[sys.index_of(s).expect("member kept")] = j;
        }
        Ok((sys, back))
    }

    /// Whether the given members form an intersection-closed family containing
    /// `0` and the full space.
    pub fn is_subsystem(&self, indices: &[usize]) -> Result<bool> {
        let set: HashSet<usize> = indices.iter().copied().collect();
        if !set.contains(&0) || !set.contains(&self.full_index()) {
            return Ok(false);
        }
        for &i in &set {
            for &j in &set {
                if !set.contains(&self.meet(i, j)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
