//! Combinatorial maps of 4-valent graphs embedded in closed oriented surfaces.
//!
//! A map is a pair of permutations on darts: `sigma` rotates counterclockwise
//! around a vertex and `alpha` pairs the two darts of an edge. Faces are the
//! orbits of `sigma ∘ alpha` (apply `alpha` first, then `sigma`); this is the
//! only face convention used anywhere in the crate.

use serde::Serialize;
use std::fmt;

/// A half-edge. Darts are dense indices in `0..4V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Dart(pub u32);

impl Dart {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The first invariant a candidate map breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapViolation {
    DartCount(usize),
    LengthMismatch { sigma: usize, alpha: usize },
    NotAPermutation { which: &'static str, dart: u32 },
    AlphaFixedPoint(u32),
    AlphaNotInvolution(u32),
    VertexNotFourValent { dart: u32, cycle_len: usize },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::DartCount(n) => write!(f, "dart count {n} is not a multiple of 4"),
            MapViolation::LengthMismatch { sigma, alpha } => {
                write!(f, "sigma has {sigma} darts but alpha has {alpha}")
            }
            MapViolation::NotAPermutation { which, dart } => {
                write!(f, "{which} is not a permutation (dart {dart})")
            }
            MapViolation::AlphaFixedPoint(d) => {
                write!(f, "alpha not fixed-point-free (dart {d})")
            }
            MapViolation::AlphaNotInvolution(d) => write!(f, "alpha not an involution (dart {d})"),
            MapViolation::VertexNotFourValent { dart, cycle_len } => {
                write!(f, "vertex not 4-valent (sigma cycle through dart {dart} has length {cycle_len})")
            }
        }
    }
}

impl std::error::Error for MapViolation {}

/// A combinatorial map in canonical form: vertex `v` owns darts
/// `4v..4v+4`, listed in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombMap {
    sigma: Vec<u32>,
    alpha: Vec<u32>,
}

impl CombMap {
    /// Builds a map from arbitrary permutations, validating them and
    /// relabelling darts into canonical order. Vertices are numbered by
    /// their smallest dart; each vertex's darts start at that dart.
    pub fn new(sigma: Vec<u32>, alpha: Vec<u32>) -> Result<Self, MapViolation> {
        validate_permutations(&sigma, &alpha)?;
        let n = sigma.len();
        let mut relabel = vec![u32::MAX; n];
        let mut next = 0u32;
        for start in 0..n {
            if relabel[start] != u32::MAX {
                continue;
            }
            let mut d = start;
            loop {
                relabel[d] = next;
                next += 1;
                d = sigma[d] as usize;
                if d == start {
                    break;
                }
            }
        }
        let mut new_sigma = vec![0u32; n];
        let mut new_alpha = vec![0u32; n];
        for d in 0..n {
            new_sigma[relabel[d] as usize] = relabel[sigma[d] as usize];
            new_alpha[relabel[d] as usize] = relabel[alpha[d] as usize];
        }
        Ok(CombMap { sigma: new_sigma, alpha: new_alpha })
    }

    /// Builds a map whose dart labels are already canonical. Only `alpha`
    /// is supplied; `sigma` is implied by the labelling.
    pub(crate) fn from_canonical_alpha(alpha: Vec<u32>) -> Self {
        debug_assert!(alpha.len().is_multiple_of(4));
        let sigma = (0..alpha.len() as u32).map(|d| (d & !3) | ((d + 1) & 3)).collect();
        let map = CombMap { sigma, alpha };
        debug_assert!(validate_map(&map).is_ok());
        map
    }

    pub fn empty() -> Self {
        CombMap { sigma: Vec::new(), alpha: Vec::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma.len() / 4
    }

    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn edge_count(&self) -> usize {
        self.alpha.len() / 2
    }

    #[inline]
    pub fn sigma(&self, d: Dart) -> Dart {
        Dart(self.sigma[d.index()])
    }

    #[inline]
    pub fn alpha(&self, d: Dart) -> Dart {
        Dart(self.alpha[d.index()])
    }

    /// The vertex owning a dart.
    #[inline]
    pub fn vertex_of(&self, d: Dart) -> usize {
        d.index() / 4
    }

    /// Straight-ahead continuation of a strand: leave along `d`, arrive at
    /// the next vertex, and exit through the opposite dart.
    #[inline]
    pub fn straight_ahead(&self, d: Dart) -> Dart {
        self.sigma(self.sigma(self.alpha(d)))
    }

    pub fn sigma_slice(&self) -> &[u32] {
        &self.sigma
    }

    pub fn alpha_slice(&self) -> &[u32] {
        &self.alpha
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.sigma.len() as u32).map(Dart)
    }
}

fn validate_permutations(sigma: &[u32], alpha: &[u32]) -> Result<(), MapViolation> {
    let n = sigma.len();
    if alpha.len() != n {
        return Err(MapViolation::LengthMismatch { sigma: n, alpha: alpha.len() });
    }
    if !n.is_multiple_of(4) {
        return Err(MapViolation::DartCount(n));
    }
    for (which, perm) in [("alpha", alpha), ("sigma", sigma)] {
        let mut seen = vec![false; n];
        for (d, &img) in perm.iter().enumerate() {
            let img = img as usize;
            if img >= n || seen[img] {
                return Err(MapViolation::NotAPermutation { which, dart: d as u32 });
            }
            seen[img] = true;
        }
    }
    for (d, &img) in alpha.iter().enumerate() {
        if img as usize == d {
            return Err(MapViolation::AlphaFixedPoint(d as u32));
        }
        if alpha[img as usize] as usize != d {
            return Err(MapViolation::AlphaNotInvolution(d as u32));
        }
    }
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            len += 1;
            d = sigma[d] as usize;
        }
        if len != 4 {
            return Err(MapViolation::VertexNotFourValent { dart: start as u32, cycle_len: len });
        }
    }
    Ok(())
}

/// Checks every map invariant on raw permutations.
pub fn validate_permutation_pair(sigma: &[u32], alpha: &[u32]) -> Result<(), MapViolation> {
    validate_permutations(sigma, alpha)
}

/// Re-checks the invariants of an already constructed map.
pub fn validate_map(m: &CombMap) -> Result<(), MapViolation> {
    validate_permutations(&m.sigma, &m.alpha)
}

/// Faces, Euler characteristic and genus of a map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    /// Face cycles, each starting at its minimal dart, ordered by that dart.
    pub faces: Vec<Vec<u32>>,
    pub vertices: usize,
    pub edges: usize,
    pub euler: i64,
    pub components: usize,
    /// Genus of each connected component, in order of the component's
    /// smallest vertex.
    pub component_genera: Vec<u32>,
    /// Sum of component genera (genus of the connected sum).
    pub genus: u32,
}

impl FaceReport {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Face lengths, sorted ascending.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    }
}

/// Face index for each dart plus the number of faces.
pub(crate) fn face_labels(m: &CombMap) -> (Vec<u32>, usize) {
    let n = m.dart_count();
    let mut label = vec![u32::MAX; n];
    let mut count = 0u32;
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        let mut d = start;
        while label[d] == u32::MAX {
            label[d] = count;
            d = m.sigma[m.alpha[d] as usize] as usize;
        }
        count += 1;
    }
    (label, count as usize)
}

/// Traces the faces of a map and derives its topology.
pub fn trace_faces(m: &CombMap) -> FaceReport {
    let n = m.dart_count();
    let mut seen = vec![false; n];
    let mut faces = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d as u32);
            d = m.sigma[m.alpha[d] as usize] as usize;
        }
        faces.push(face);
    }

    let (components, partition) = connected_components(m);
    let v = m.vertex_count();
    let e = m.edge_count();
    let euler = v as i64 - e as i64 + faces.len() as i64;

    // Per-component Euler characteristic.
    let mut chi = vec![0i64; components];
    // each vertex contributes itself and its two edges
    for &c in &partition {
        chi[c] -= 1;
    }
    for face in &faces {
        let c = partition[m.vertex_of(Dart(face[0]))];
        chi[c] += 1;
    }
    let component_genera: Vec<u32> = chi.iter().map(|&x| ((2 - x) / 2) as u32).collect();
    let genus = component_genera.iter().sum();
    FaceReport { faces, vertices: v, edges: e, euler, components, component_genera, genus }
}

/// Connected components of the underlying graph: the component count and
/// a component label for each vertex (labels ordered by smallest vertex).
pub fn connected_components(m: &CombMap) -> (usize, Vec<usize>) {
    let v = m.vertex_count();
    let mut label = vec![usize::MAX; v];
    let mut count = 0;
    let mut stack = Vec::new();
    for root in 0..v {
        if label[root] != usize::MAX {
            continue;
        }
        label[root] = count;
        stack.push(root);
        while let Some(x) = stack.pop() {
            for k in 0..4 {
                let d = Dart((4 * x + k) as u32);
                let y = m.vertex_of(m.alpha(d));
                if label[y] == usize::MAX {
                    label[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    (count, label)
}

/// Disjoint union of two maps; darts of `b` are shifted past those of `a`.
pub fn disjoint_union(a: &CombMap, b: &CombMap) -> CombMap {
    let shift = a.dart_count() as u32;
    let mut alpha = a.alpha.clone();
    alpha.extend(b.alpha.iter().map(|&d| d + shift));
    CombMap::from_canonical_alpha(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> CombMap {
        CombMap::new(vec![1, 2, 3, 0], vec![2, 3, 0, 1]).unwrap()
    }

    #[test]
    fn one_vertex_torus_is_valid() {
        assert!(validate_map(&torus()).is_ok());
        let r = trace_faces(&torus());
        assert_eq!((r.vertices, r.edges, r.face_count()), (1, 2, 1));
        assert_eq!(r.euler, 0);
        assert_eq!(r.genus, 1);
        assert_eq!(r.components, 1);
    }

    #[test]
    fn alpha_fixed_point_is_reported() {
        let err = CombMap::new(vec![1, 2, 3, 0], vec![0, 3, 2, 1]).unwrap_err();
        assert_eq!(err, MapViolation::AlphaFixedPoint(0));
        assert!(err.to_string().starts_with("alpha not fixed-point-free"));
    }

    #[test]
    fn three_cycle_is_not_four_valent() {
        // sigma = (0 1 2)(3 4 5 6 7 ...) style failure
        let sigma = vec![1, 2, 0, 4, 5, 6, 7, 3];
        let alpha = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let err = CombMap::new(sigma, alpha).unwrap_err();
        assert!(matches!(err, MapViolation::VertexNotFourValent { dart: 0, cycle_len: 3 }));
        assert!(err.to_string().starts_with("vertex not 4-valent"));
    }

    #[test]
    fn disjoint_tori_have_two_components() {
        let m = disjoint_union(&torus(), &torus());
        let r = trace_faces(&m);
        assert_eq!(r.components, 2);
        assert_eq!(r.component_genera, vec![1, 1]);
        assert_eq!(r.genus, 2);
        assert_eq!(connected_components(&m).1, vec![0, 1]);
    }

    #[test]
    fn canonical_relabelling_groups_vertices() {
        // Vertex cycles (0 5 2 7) and (1 4 3 6).
        let mut sigma = vec![0u32; 8];
        for cyc in [[0u32, 5, 2, 7], [1, 4, 3, 6]] {
            for i in 0..4 {
                sigma[cyc[i] as usize] = cyc[(i + 1) % 4];
            }
        }
        let alpha = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let m = CombMap::new(sigma, alpha).unwrap();
        for d in 0..8u32 {
            assert_eq!(m.sigma(Dart(d)).0, (d & !3) | ((d + 1) & 3));
        }
        let r = trace_faces(&m);
        let total: usize = r.faces.iter().map(Vec::len).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn face_tracing_is_deterministic() {
        let m = torus();
        assert_eq!(trace_faces(&m), trace_faces(&m.clone()));
    }
}
