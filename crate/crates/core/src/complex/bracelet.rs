use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{is_d_tree, strong_components, PureComplex, Simplex, Vertex};

/// A d-tree hanging off the bracelet through one (d−1)-face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pendant {
    /// The (d−1)-face of the rim through which the pendant is attached.
    pub attach: Simplex,
    /// Facets of the pendant; empty for a trivial pendant.
    pub facets: Vec<Simplex>,
}

/// A bracelet: rim facets ρ∪{u_i,u_{i+1}} arranged cyclically around ρ, plus pendant d-trees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraceletReport {
    pub rho: Simplex,
    pub rim: Vec<Vertex>,
    /// For a regular bracelet there is one pendant per rim vertex, in rim order.
    pub pendants: Vec<Pendant>,
    pub regular: bool,
}

impl BraceletReport {
    pub fn circuit_length(&self) -> usize {
        self.rim.len()
    }

    pub fn nontrivial_pendants(&self) -> usize {
        self.pendants.iter().filter(|p| !p.facets.is_empty()).count()
    }

    pub fn rim_facets(&self) -> Vec<Simplex> {
        let r = self.rim.len();
        (0..r)
            .map(|i| self.rho.with(self.rim[i]).with(self.rim[(i + 1) % r]))
            .collect()
    }
}

/// Recognizes X as a bracelet with pendant d-trees.
///
/// Every (d−2)-face ρ and every simple cycle of length ≥ 3 in the link graph of ρ is tried
/// as the rim. A regular decomposition is preferred over an irregular one.
pub fn classify_bracelet(x: &PureComplex) -> Option<BraceletReport> {
    let d = x.dim();
    if d == 0 || x.f_d() < 3 {
        return None;
    }
    let rhos: BTreeSet<Simplex> = if d == 1 {
        [Simplex::empty()].into()
    } else {
        x.faces(d - 2).into_iter().collect()
    };
    let mut fallback = None;
    for rho in rhos {
        let link = link_graph(x, &rho);
        for rim in simple_cycles(&link) {
            match check_rim(x, &rho, &rim) {
                Some(r) if r.regular => return Some(r),
                Some(r) => {
                    fallback.get_or_insert(r);
                }
                None => {}
            }
        }
    }
    fallback
}

fn link_graph(x: &PureComplex, rho: &Simplex) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
    let mut g: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for f in x.facets() {
        if !rho.is_face_of(f) {
            continue;
        }
        let rest: Vec<Vertex> = f.vertices().iter().copied().filter(|v| !rho.contains(*v)).collect();
        if let [u, v] = rest[..] {
            g.entry(u).or_default().insert(v);
            g.entry(v).or_default().insert(u);
        }
    }
    g
}

/// Simple cycles of length ≥ 3, each listed once: starting at its smallest vertex with the
/// second vertex smaller than the last.
fn simple_cycles(g: &BTreeMap<Vertex, BTreeSet<Vertex>>) -> Vec<Vec<Vertex>> {
    fn rec(
        g: &BTreeMap<Vertex, BTreeSet<Vertex>>,
        path: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        for &next in &g[&last] {
            if next == start && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            }
            if next > start && !path.contains(&next) {
                path.push(next);
                rec(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for &s in g.keys() {
        rec(g, &mut vec![s], &mut out);
    }
    out
}

fn check_rim(x: &PureComplex, rho: &Simplex, rim: &[Vertex]) -> Option<BraceletReport> {
    let mut report = BraceletReport {
        rho: rho.clone(),
        rim: rim.to_vec(),
        pendants: Vec::new(),
        regular: false,
    };
    let z: BTreeSet<Simplex> = report.rim_facets().into_iter().collect();
    let z_vertices: BTreeSet<Vertex> = z.iter().flat_map(|f| f.vertices().iter().copied()).collect();
    let rest = x.sub(x.facets().iter().filter(|f| !z.contains(*f)).cloned());

    let mut pendants = Vec::new();
    for comp in strong_components(&rest) {
        if !is_d_tree(&comp) {
            return None;
        }
        let verts = comp.facet_vertices();
        let meet: Vec<Vertex> = verts.intersection(&z_vertices).copied().collect();
        let attach = Simplex::new(meet).ok()?;
        // The pendant must meet the rim in one (d−1)-face that it shares with the rim.
        let face_of_rim = attach.len() == x.dim() && z.iter().any(|f| attach.is_face_of(f));
        let face_of_comp = comp.facets().iter().any(|f| attach.is_face_of(f));
        if !face_of_rim || !face_of_comp {
            return None;
        }
        pendants.push((attach, comp, verts));
    }

    let mut by_q: Vec<Option<usize>> = vec![None; rim.len()];
    let mut regular = true;
    for (i, (attach, _, _)) in pendants.iter().enumerate() {
        let q = rim.iter().position(|&u| rho.with(u) == *attach);
        match q {
            Some(q) if by_q[q].is_none() => by_q[q] = Some(i),
            _ => regular = false,
        }
    }
    for (i, a) in pendants.iter().enumerate() {
        for b in &pendants[i + 1..] {
            let common: BTreeSet<Vertex> = a.2.intersection(&b.2).copied().collect();
            if common != rho.vertices().iter().copied().collect() {
                regular = false;
            }
        }
    }

    report.regular = regular;
    report.pendants = if regular {
        by_q.iter()
            .zip(rim)
            .map(|(slot, &u)| Pendant {
                attach: rho.with(u),
                facets: slot
                    .map(|i| pendants[i].1.facets().iter().cloned().collect())
                    .unwrap_or_default(),
            })
            .collect()
    } else {
        pendants
            .into_iter()
            .map(|(attach, comp, _)| Pendant {
                attach,
                facets: comp.facets().iter().cloned().collect(),
            })
            .collect()
    };
    Some(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(d: usize, f: &[&[u32]]) -> PureComplex {
        PureComplex::from_facets(d, f).unwrap()
    }

    #[test]
    fn triangle_is_a_regular_bracelet() {
        let r = classify_bracelet(&complex(1, &[&[1, 2], &[2, 3], &[1, 3]])).unwrap();
        assert!(r.rho.is_empty());
        assert_eq!(r.circuit_length(), 3);
        assert_eq!(r.nontrivial_pendants(), 0);
        assert!(r.regular);
    }

    #[test]
    fn trees_are_not_bracelets() {
        assert!(classify_bracelet(&complex(1, &[&[1, 2], &[2, 3], &[3, 4]])).is_none());
        assert!(classify_bracelet(&complex(2, &[&[1, 2, 3], &[1, 2, 4], &[2, 4, 5]])).is_none());
    }

    #[test]
    fn six_rim_with_three_pendants() {
        // ρ = {1}, rim 2..7, two pendant triangles at 3 and one at 7.
        let x = complex(
            2,
            &[
                &[1, 2, 3],
                &[1, 3, 4],
                &[1, 4, 5],
                &[1, 5, 6],
                &[1, 6, 7],
                &[1, 2, 7],
                &[1, 3, 8],
                &[1, 3, 9],
                &[1, 7, 10],
            ],
        );
        let r = classify_bracelet(&x).unwrap();
        assert!(r.regular);
        assert_eq!(r.circuit_length(), 6);
        assert_eq!(r.rho.vertices(), &[1]);
        assert_eq!(r.nontrivial_pendants(), 2);
        assert_eq!(r.pendants.len(), 6);
        let total: usize = r.pendants.iter().map(|p| p.facets.len()).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn pendant_on_a_rim_edge_is_irregular() {
        // Pendant {2,3,8} attaches through {2,3}, which does not contain ρ = {1}.
        let x = complex(2, &[&[1, 2, 3], &[1, 3, 4], &[1, 2, 4], &[2, 3, 8]]);
        let r = classify_bracelet(&x).unwrap();
        assert!(!r.regular);
    }

    #[test]
    fn pendant_path_versus_extra_cycle() {
        // d = 1: a path hanging from vertex 1 is a pendant; a second cycle through 1 and 2 is not.
        let x = complex(1, &[&[1, 2], &[2, 3], &[1, 3], &[1, 4], &[4, 5]]);
        let r = classify_bracelet(&x).unwrap();
        assert!(r.regular);
        assert_eq!(r.nontrivial_pendants(), 1);
        let y = complex(1, &[&[1, 2], &[2, 3], &[1, 3], &[1, 4], &[2, 4]]);
        // Rim 1-2-3 with chord path 1-4-2 is not a bracelet for any rim choice.
        assert!(classify_bracelet(&y).is_none());
    }
}
