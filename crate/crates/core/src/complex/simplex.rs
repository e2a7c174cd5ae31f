use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label. Labels are positive and totally ordered by integer order.
pub type Vertex = u32;

/// A simplex stored as its strictly increasing vertex tuple.
///
/// The empty simplex (dimension −1) is a valid value; it plays the role of the
/// common (d−2)-face of a bracelet when d = 1.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated vertex in {vertices:?}")));
        }
        if vertices.first() == Some(&0) {
            return Err(Error::invalid("vertex labels are 1-based"));
        }
        Ok(Simplex(vertices))
    }

    /// Builds a simplex from vertices already known to be distinct and positive.
    pub(crate) fn from_sorted_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    /// Vertex set encoded as a bitmask; bit `v` is set for vertex `v` (labels ≤ 63).
    pub fn from_mask(mask: u64) -> Self {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros();
            v.push(b);
            m &= m - 1;
        }
        Simplex(v)
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| {
            debug_assert!(v < 64);
            m | (1u64 << v)
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn intersection(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn with(&self, v: Vertex) -> Simplex {
        let mut out = self.0.clone();
        if let Err(pos) = out.binary_search(&v) {
            out.insert(pos, v);
        }
        Simplex(out)
    }

    pub fn without(&self, v: Vertex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|&u| u != v).collect())
    }

    /// All codimension-1 faces, in the order of the removed vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// Applies a relabeling to every vertex.
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Result<Simplex> {
        Simplex::new(self.0.iter().map(|&v| f(v)).collect())
    }

    /// Colexicographic comparison: compare the largest vertices first.
    pub fn colex_cmp(&self, other: &Simplex) -> Ordering {
        self.0
            .iter()
            .rev()
            .cmp(other.0.iter().rev())
            .then(self.0.len().cmp(&other.0.len()))
    }

    /// Colex rank among all simplices of the same size on vertices 1, 2, ….
    pub fn colex_rank(&self) -> usize {
        colex_rank(&self.0)
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Simplices are ordered colexicographically throughout the crate.
impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.colex_cmp(other)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// sgn(τ, σ) = (−1)^i where the i-th smallest vertex of τ (0-based) is the one missing from σ.
pub fn sign_face(tau: &Simplex, sigma: &Simplex) -> Result<i8> {
    let not_face = || Error::NotAFace {
        simplex: tau.0.clone(),
        face: sigma.0.clone(),
    };
    if tau.len() != sigma.len() + 1 || !sigma.is_face_of(tau) {
        return Err(not_face());
    }
    let i = tau
        .0
        .iter()
        .position(|v| !sigma.contains(*v))
        .ok_or_else(not_face)?;
    Ok(if i % 2 == 0 { 1 } else { -1 })
}

/// sgn(σ, σ') = −sgn(σ∪σ', σ)·sgn(σ∪σ', σ') for two k-simplices spanning a (k+1)-simplex.
pub fn sign_adjacent(sigma: &Simplex, sigma2: &Simplex) -> Result<i8> {
    let tau = sigma.union(sigma2);
    if sigma.len() != sigma2.len() || tau.len() != sigma.len() + 1 {
        return Err(Error::NotAdjacent(sigma.0.clone(), sigma2.0.clone()));
    }
    Ok(-sign_face(&tau, sigma)? * sign_face(&tau, sigma2)?)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Colex rank of a strictly increasing tuple of 1-based labels: Σ C(v_i − 1, i).
pub(crate) fn colex_rank(vertices: &[Vertex]) -> usize {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| binomial(v as usize - 1, i + 1))
        .sum()
}

/// All `size`-subsets of {1..=n} in colex order.
pub fn colex_subsets(n: usize, size: usize) -> Vec<Simplex> {
    let mut out = Vec::with_capacity(binomial(n, size));
    if size > n {
        return out;
    }
    if size == 0 {
        out.push(Simplex::empty());
        return out;
    }
    let mut cur: Vec<Vertex> = (1..=size as Vertex).collect();
    loop {
        out.push(Simplex(cur.clone()));
        // Colex successor: bump the first position that can move without colliding.
        let mut i = 0;
        while i < size {
            let limit = if i + 1 < size { cur[i + 1] } else { n as Vertex + 1 };
            if cur[i] + 1 < limit {
                cur[i] += 1;
                for (j, slot) in cur.iter_mut().enumerate().take(i) {
                    *slot = j as Vertex + 1;
                }
                break;
            }
            i += 1;
        }
        if i == size {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sign_face_examples() {
        assert_eq!(sign_face(&s(&[1, 2, 3]), &s(&[2, 3])).unwrap(), 1);
        assert_eq!(sign_face(&s(&[1, 2, 3]), &s(&[1, 3])).unwrap(), -1);
        assert_eq!(sign_face(&s(&[1, 2, 3, 4]), &s(&[1, 2, 3])).unwrap(), -1);
        assert!(sign_face(&s(&[1, 2, 3]), &s(&[3])).is_err());
        assert!(sign_face(&s(&[1, 2, 3]), &s(&[1, 4])).is_err());
    }

    #[test]
    fn sign_adjacent_examples() {
        assert_eq!(sign_adjacent(&s(&[1]), &s(&[2])).unwrap(), 1);
        assert_eq!(sign_adjacent(&s(&[1, 2]), &s(&[1, 3])).unwrap(), 1);
        assert_eq!(sign_adjacent(&s(&[1, 2]), &s(&[2, 3])).unwrap(), -1);
        assert_eq!(sign_adjacent(&s(&[2, 3]), &s(&[1, 2])).unwrap(), -1);
        assert!(sign_adjacent(&s(&[1, 2]), &s(&[3, 4])).is_err());
        assert!(sign_adjacent(&s(&[1, 2]), &s(&[1, 2])).is_err());
    }

    #[test]
    fn sign_identity_exhaustive() {
        // −sgn(σ∪σ',σ)·sgn(σ∪σ',σ') = sgn(σ,σ∩σ')·sgn(σ',σ∩σ') for all σ,σ' ⊂ [8], |σ| ≤ 4.
        for size in 1..=4 {
            let all = colex_subsets(8, size);
            for a in &all {
                for b in &all {
                    if a.union(b).len() != size + 1 {
                        continue;
                    }
                    let lhs = sign_adjacent(a, b).unwrap();
                    let meet = a.intersection(b);
                    let rhs = sign_face(a, &meet).unwrap() * sign_face(b, &meet).unwrap();
                    assert_eq!(lhs, rhs, "{a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn colex_order_and_rank_agree() {
        let subs = colex_subsets(7, 3);
        assert_eq!(subs.len(), 35);
        for (i, x) in subs.iter().enumerate() {
            assert_eq!(x.colex_rank(), i);
        }
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subs[0], s(&[1, 2, 3]));
        assert_eq!(subs[1], s(&[1, 2, 4]));
        assert_eq!(subs[3], s(&[2, 3, 4]));
    }

    #[test]
    fn rejects_bad_simplices() {
        assert!(Simplex::new(vec![1, 1]).is_err());
        assert!(Simplex::new(vec![0, 1]).is_err());
        assert_eq!(Simplex::new(vec![3, 1]).unwrap().vertices(), &[1, 3]);
        assert_eq!(Simplex::empty().dim(), -1);
    }
}
