use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{NeuroError, Result};
use crate::par::{self, Execution};

pub const MAX_DIM: usize = 3;
pub const MAX_SHAPE_VERTICES: usize = 5;

/// A face-closed family of vertex sets, each stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ShapeSpec", into = "ShapeSpec")]
pub struct SimplicialShape {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ShapeSpec {
    vertices: Vec<String>,
    simplices: Vec<Vec<String>>,
}

impl TryFrom<ShapeSpec> for SimplicialShape {
    type Error = NeuroError;

    fn try_from(s: ShapeSpec) -> Result<Self> {
        let mut out = Vec::new();
        for simplex in &s.simplices {
            let idx = simplex
                .iter()
                .map(|v| {
                    s.vertices
                        .iter()
                        .position(|w| w == v)
                        .ok_or_else(|| NeuroError::Malformed(format!("simplex vertex {v:?} is not declared")))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(idx);
        }
        SimplicialShape::new(s.vertices, out)
    }
}

impl From<SimplicialShape> for ShapeSpec {
    fn from(s: SimplicialShape) -> Self {
        ShapeSpec {
            simplices: s.simplices.iter().map(|x| x.iter().map(|&i| s.vertices[i].clone()).collect()).collect(),
            vertices: s.vertices,
        }
    }
}

fn faces(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).map(move |i| s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect())
}

impl SimplicialShape {
    /// Vertices are always 0-simplices; listing them again is allowed.
    pub fn new(vertices: Vec<String>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return Err(NeuroError::Malformed("duplicate shape vertex".into()));
        }
        let mut set: BTreeSet<Vec<usize>> = (0..vertices.len()).map(|v| vec![v]).collect();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.len() > MAX_DIM + 1 || s.iter().any(|&v| v >= vertices.len()) {
                return Err(NeuroError::Malformed(format!("bad simplex {s:?}")));
            }
            set.insert(s);
        }
        if let Some(s) = set.iter().find(|s| s.len() > 1 && faces(s).any(|f| !set.contains(&f))) {
            return Err(NeuroError::Malformed(format!("simplex {s:?} is missing a face")));
        }
        Ok(SimplicialShape { vertices, simplices: set })
    }

    pub fn simplex(k: usize) -> Self {
        let vs: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        let all = (1u32..(1 << k)).map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect()).collect();
        SimplicialShape::new(vs, all).expect("subsets are face closed")
    }

    /// The simplex on `k` vertices without its top cell.
    pub fn boundary(k: usize) -> Self {
        let full = SimplicialShape::simplex(k);
        SimplicialShape {
            simplices: full.simplices.into_iter().filter(|s| s.len() < k).collect(),
            vertices: full.vertices,
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn simplices(&self) -> &BTreeSet<Vec<usize>> {
        &self.simplices
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    /// Number of simplices per dimension `0..=3`.
    pub fn f_vector(&self) -> [usize; MAX_DIM + 1] {
        let mut f = [0; MAX_DIM + 1];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn skeleton(&self, n: usize) -> Self {
        SimplicialShape {
            vertices: self.vertices.clone(),
            simplices: self.simplices.iter().filter(|s| s.len() <= n + 1).cloned().collect(),
        }
    }

    pub fn coskeleton(&self, n: usize) -> Self {
        let mut set = self.simplices.clone();
        let k = self.vertices.len();
        for size in (n + 2)..=(MAX_DIM + 1).min(k) {
            for m in 1u32..(1 << k) {
                if m.count_ones() as usize != size {
                    continue;
                }
                let s: Vec<usize> = (0..k).filter(|i| m >> i & 1 == 1).collect();
                if faces(&s).all(|f| set.contains(&f)) {
                    set.insert(s);
                }
            }
        }
        SimplicialShape {
            vertices: self.vertices.clone(),
            simplices: set,
        }
    }

    pub fn is_subshape_of(&self, other: &SimplicialShape) -> bool {
        self.vertices == other.vertices && self.simplices.is_subset(&other.simplices)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Skeleton,
    Coskeleton,
}

pub fn shape_truncate(s: &SimplicialShape, n: usize, mode: Truncation) -> SimplicialShape {
    match mode {
        Truncation::Skeleton => s.skeleton(n),
        Truncation::Coskeleton => s.coskeleton(n),
    }
}

/// Vertex maps sending every simplex of `x` onto a simplex of `y`.
pub fn simplicial_maps(x: &SimplicialShape, y: &SimplicialShape) -> usize {
    let n = x.vertices.len();
    let m = y.vertices.len();
    let total = if n == 0 { 1 } else { m.pow(n as u32) };
    let mut count = 0;
    let mut f = vec![0; n];
    'maps: for mut code in 0..total {
        for v in f.iter_mut() {
            *v = code % m;
            code /= m;
        }
        for s in &x.simplices {
            let mut img: Vec<usize> = s.iter().map(|&v| f[v]).collect();
            img.sort_unstable();
            img.dedup();
            if !y.contains(&img) {
                continue 'maps;
            }
        }
        count += 1;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SkCoskReport {
    pub n: usize,
    pub from_skeleton: usize,
    pub into_coskeleton: usize,
}

impl SkCoskReport {
    pub fn agree(&self) -> bool {
        self.from_skeleton == self.into_coskeleton
    }
}

/// `|Maps(sk_n x, y)|` against `|Maps(x, cosk_n y)|`.
pub fn check_sk_cosk_adjunction(x: &SimplicialShape, y: &SimplicialShape, n: usize) -> Result<SkCoskReport> {
    if x.vertices.len() > MAX_SHAPE_VERTICES || y.vertices.len() > MAX_SHAPE_VERTICES {
        return Err(NeuroError::Capacity(format!("shapes are capped at {MAX_SHAPE_VERTICES} vertices")));
    }
    Ok(SkCoskReport {
        n,
        from_skeleton: simplicial_maps(&x.skeleton(n), y),
        into_coskeleton: simplicial_maps(x, &y.coskeleton(n)),
    })
}

/// Every shape on exactly `k ≤ 4` labelled vertices.
pub fn all_shapes(k: usize, exec: Execution) -> Vec<SimplicialShape> {
    assert!(k <= MAX_DIM + 1, "all_shapes enumerates at most four vertices");
    let higher: Vec<Vec<usize>> = (1u32..(1 << k))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    let vertices: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    par::map_range(exec, 1 << higher.len(), |mask| {
        let chosen: Vec<Vec<usize>> = higher.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, s)| s.clone()).collect();
        SimplicialShape::new(vertices.clone(), chosen).ok()
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncations() {
        let tet = SimplicialShape::simplex(4);
        assert_eq!(tet.f_vector(), [4, 6, 4, 1]);
        assert_eq!(tet.skeleton(1).f_vector(), [4, 6, 0, 0]);
        assert_eq!(tet.skeleton(3), tet);
        let tri = SimplicialShape::boundary(3);
        assert_eq!(tri.f_vector(), [3, 3, 0, 0]);
        assert_eq!(tri.coskeleton(1), SimplicialShape::simplex(3));
        assert_eq!(tet.skeleton(1).coskeleton(1), tet);
        assert_eq!(SimplicialShape::boundary(4).coskeleton(2), tet);
        let vs: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
        let square = SimplicialShape::new(vs, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert_eq!(square.coskeleton(1), square);
    }

    #[test]
    fn face_closure_is_enforced() {
        let vs = vec!["a".to_string(), "b".into(), "c".into()];
        assert!(SimplicialShape::new(vs.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(SimplicialShape::new(vs, vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 1, 0]]).is_ok());
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=4).map(|k| all_shapes(k, Execution::Sequential).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 9, 114]);
    }

    #[test]
    fn small_hom_counts() {
        let edge = SimplicialShape::simplex(2);
        let point = SimplicialShape::simplex(1);
        let tri = SimplicialShape::simplex(3);
        let hollow = SimplicialShape::boundary(3);
        let r = check_sk_cosk_adjunction(&edge, &hollow, 1).unwrap();
        assert!(r.agree());
        assert_eq!(r.from_skeleton, 9);
        let r = check_sk_cosk_adjunction(&point, &hollow, 1).unwrap();
        assert_eq!((r.from_skeleton, r.into_coskeleton), (3, 3));
        assert!(check_sk_cosk_adjunction(&tri, &edge, 1).unwrap().agree());
    }

    #[test]
    fn serde_round_trip() {
        let s = SimplicialShape::boundary(3);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<SimplicialShape>(&text).unwrap(), s);
    }
}
