//! Named simple closed curves carried by a 4-valent map.
//!
//! Curves are the straight-ahead strands of the map: leave a vertex along a
//! dart, arrive at the next vertex, and exit through the opposite dart. Every
//! vertex is a transverse crossing of two different curves.

use crate::diagram::{BigonSearch, Crossing, Diagram, Strand};
use crate::error::{Error, Result};
use crate::surface_map::{trace_faces, validate_map, CombMap, Dart, FaceReport};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

/// A curve of a system, identified by name and pinned by one of its darts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CurveRef {
    pub name: String,
    pub representative_dart: Dart,
}

/// Crossing or intersection counts between the curves of a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionTable {
    pub names: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl IntersectionTable {
    pub fn get(&self, x: &str, y: &str) -> Option<u64> {
        let i = self.names.iter().position(|n| n == x)?;
        let j = self.names.iter().position(|n| n == y)?;
        Some(self.counts[i][j])
    }

    /// Sum over unordered pairs.
    pub fn pair_sum(&self) -> u64 {
        let n = self.names.len();
        let mut s = 0;
        for i in 0..n {
            for j in i + 1..n {
                s += self.counts[i][j];
            }
        }
        s
    }
}

impl fmt::Display for IntersectionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self
            .names
            .iter()
            .map(String::len)
            .chain(self.counts.iter().flatten().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1);
        write!(f, "{:>w$}", "")?;
        for n in &self.names {
            write!(f, " {n:>w$}")?;
        }
        writeln!(f)?;
        for (n, row) in self.names.iter().zip(&self.counts) {
            write!(f, "{n:>w$}")?;
            for c in row {
                write!(f, " {c:>w$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A bigon: a disc bounded by one arc of each of two curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bigon {
    pub curves: (String, String),
    /// Corner vertices in the system's canonical numbering.
    pub corners: (usize, usize),
    /// Faces of the map inside the bigon.
    pub face_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingReport {
    pub filling: bool,
    pub connected: bool,
    pub face_count: usize,
    pub genus: u32,
    /// Sum of pairwise crossing counts over unordered pairs.
    pub crossing_sum: u64,
}

/// A named curve system on a closed surface of genus `ambient_genus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSystem {
    diagram: Diagram,
    ambient_genus: u32,
    map: CombMap,
    /// Set once the system is known to have no bigons.
    reduced: bool,
}

/// Traces a curve from `start`, returning `(vertex, outgoing dart)` pairs.
fn trace_curve(m: &CombMap, start: Dart) -> Vec<(usize, Dart)> {
    let mut out = Vec::new();
    let mut d = start;
    loop {
        out.push((m.vertex_of(d), d));
        d = m.straight_ahead(d);
        if d == start {
            break;
        }
    }
    out
}

/// Splits a map into curves starting from the given darts (in order), then
/// from the smallest unassigned dart for anything left over.
fn split_curves(m: &CombMap, starts: &[Dart]) -> Result<Vec<Vec<(usize, Dart)>>> {
    let n = m.dart_count();
    let mut owner = vec![usize::MAX; n];
    let mut curves = Vec::new();
    let mut assign = |start: Dart, curves: &mut Vec<Vec<(usize, Dart)>>| -> Result<bool> {
        if owner[start.index()] != usize::MAX {
            return Ok(false);
        }
        let id = curves.len();
        let visits = trace_curve(m, start);
        let mut seen = HashSet::new();
        for &(v, d) in &visits {
            if !seen.insert(v) {
                return Err(Error::SelfCrossing { vertex: v });
            }
            let opposite = m.sigma(m.sigma(d));
            owner[d.index()] = id;
            owner[opposite.index()] = id;
        }
        curves.push(visits);
        Ok(true)
    };
    for &s in starts {
        if !assign(s, &mut curves)? {
            return Err(Error::RepresentativeMismatch { name: String::new(), dart: s.0 });
        }
    }
    for d in 0..n as u32 {
        assign(Dart(d), &mut curves)?;
    }
    Ok(curves)
}

fn diagram_from_curves(m: &CombMap, curves: &[Vec<(usize, Dart)>], names: Vec<String>) -> Diagram {
    let v = m.vertex_count();
    // (curve, outgoing dart) for each strand of each vertex: strand 0 holds
    // darts {4v, 4v+2}, strand 1 holds {4v+1, 4v+3}.
    let mut strand = vec![[(u32::MAX, Dart(0)); 2]; v];
    let mut seqs = Vec::with_capacity(curves.len());
    for (ci, visits) in curves.iter().enumerate() {
        let mut seq = Vec::with_capacity(visits.len());
        for &(vx, d) in visits {
            strand[vx][(d.0 % 2) as usize] = (ci as u32, d);
            seq.push(vx as u32);
        }
        seqs.push(seq);
    }
    let crossings = strand
        .iter()
        .map(|&[(c0, d0), (c1, d1)]| {
            let sign = if m.sigma(d0) == d1 { 1 } else { -1 };
            Crossing { first: c0, second: c1, sign }
        })
        .collect();
    let curves = seqs.into_iter().zip(names).map(|(seq, name)| Strand { name, seq }).collect();
    Diagram { curves, crossings }
}

/// Names every straight-ahead curve of a map (`c1`, `c2`, ... by smallest
/// dart) and checks it can live on a surface of genus `g`.
pub fn decompose(m: &CombMap, g: u32) -> Result<CurveSystem> {
    validate_map(m)?;
    if g < 2 {
        return Err(Error::AmbientGenus(g));
    }
    if m.vertex_count() == 0 {
        return Err(Error::NoCrossings);
    }
    let curves = split_curves(m, &[])?;
    let names = (1..=curves.len()).map(|i| format!("c{i}")).collect();
    CurveSystem::from_diagram(diagram_from_curves(m, &curves, names), g)
}

/// Like [`decompose`], with each curve named through one of its darts.
/// The named dart becomes the curve's starting point and orientation.
pub fn decompose_named(m: &CombMap, g: u32, names: &[(String, Dart)]) -> Result<CurveSystem> {
    validate_map(m)?;
    if g < 2 {
        return Err(Error::AmbientGenus(g));
    }
    if m.vertex_count() == 0 {
        return Err(Error::NoCrossings);
    }
    let mut seen = HashSet::new();
    for (n, d) in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateName(n.clone()));
        }
        if d.index() >= m.dart_count() {
            return Err(Error::RepresentativeMismatch { name: n.clone(), dart: d.0 });
        }
    }
    let starts: Vec<Dart> = names.iter().map(|(_, d)| *d).collect();
    let curves = split_curves(m, &starts).map_err(|e| match e {
        Error::RepresentativeMismatch { dart, .. } => {
            let name = names.iter().find(|(_, d)| d.0 == dart).map(|(n, _)| n.clone()).unwrap_or_default();
            Error::RepresentativeMismatch { name, dart }
        }
        other => other,
    })?;
    if curves.len() > names.len() {
        return Err(Error::UnnamedCurve(names.len()));
    }
    let names = names.iter().map(|(n, _)| n.clone()).collect();
    CurveSystem::from_diagram(diagram_from_curves(m, &curves, names), g)
}

impl CurveSystem {
    pub(crate) fn from_diagram(mut diagram: Diagram, ambient_genus: u32) -> Result<Self> {
        if ambient_genus < 2 {
            return Err(Error::AmbientGenus(ambient_genus));
        }
        if diagram.vertex_count() == 0 {
            return Err(Error::NoCrossings);
        }
        if diagram.curves.iter().any(|c| c.seq.is_empty()) {
            return Err(Error::NoCrossings);
        }
        let mut names = HashSet::new();
        for c in &diagram.curves {
            if !names.insert(c.name.clone()) {
                return Err(Error::DuplicateName(c.name.clone()));
            }
        }
        diagram.check()?;
        diagram.canonicalize();
        let map = diagram.to_map();
        let report = trace_faces(&map);
        if report.genus > ambient_genus {
            return Err(Error::GenusOverflow { map_genus: report.genus, ambient: ambient_genus });
        }
        Ok(CurveSystem { diagram, ambient_genus, map, reduced: false })
    }

    pub(crate) fn mark_reduced(mut self) -> Self {
        self.reduced = true;
        self
    }

    pub(crate) fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn ambient_genus(&self) -> u32 {
        self.ambient_genus
    }

    pub fn map(&self) -> &CombMap {
        &self.map
    }

    pub fn vertex_count(&self) -> usize {
        self.diagram.vertex_count()
    }

    pub fn curve_count(&self) -> usize {
        self.diagram.curves.len()
    }

    /// Curve names in canonical (sorted) order.
    pub fn names(&self) -> Vec<String> {
        self.diagram.curves.iter().map(|c| c.name.clone()).collect()
    }

    pub(crate) fn index_of(&self, name: &str) -> Result<u32> {
        self.diagram.curve_index(name).ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn curve(&self, name: &str) -> Result<CurveRef> {
        let i = self.index_of(name)?;
        let v = self.diagram.curves[i as usize].seq[0];
        Ok(CurveRef { name: name.to_string(), representative_dart: Dart(self.diagram.dart_towards(v, i, 1)) })
    }

    pub fn curves(&self) -> Vec<CurveRef> {
        self.diagram.curves.iter().map(|c| self.curve(&c.name).expect("own curve")).collect()
    }

    /// Resolves a reference, checking that its dart really lies on the named
    /// curve.
    pub fn resolve(&self, r: &CurveRef) -> Result<u32> {
        let i = self.index_of(&r.name)?;
        let d = r.representative_dart.0;
        let v = d / 4;
        let on_curve = (v as usize) < self.vertex_count() && {
            let x = self.diagram.crossings[v as usize];
            let strand_first = d.is_multiple_of(2);
            let owner = if strand_first { x.first } else { x.second };
            owner == i
        };
        if !on_curve {
            return Err(Error::RepresentativeMismatch { name: r.name.clone(), dart: d });
        }
        Ok(i)
    }

    /// Visits of a curve as vertex ids in traversal order.
    pub fn curve_vertices(&self, name: &str) -> Result<Vec<usize>> {
        let i = self.index_of(name)?;
        Ok(self.diagram.curves[i as usize].seq.iter().map(|&v| v as usize).collect())
    }

    pub fn faces(&self) -> FaceReport {
        trace_faces(&self.map)
    }

    /// True when the traced surface is connected and has the ambient genus,
    /// so the map is a cellular picture of the closed surface itself.
    pub fn is_cellular(&self) -> bool {
        let r = self.faces();
        r.components == 1 && r.genus == self.ambient_genus
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<CurveSystem> {
        let i = self.index_of(from)?;
        if from != to && self.diagram.curve_index(to).is_some() {
            return Err(Error::DuplicateName(to.to_string()));
        }
        let mut d = self.diagram.clone();
        d.curves[i as usize].name = to.to_string();
        let s = CurveSystem::from_diagram(d, self.ambient_genus)?;
        Ok(if self.reduced { s.mark_reduced() } else { s })
    }

    /// The system formed by the listed curves only.
    pub fn subsystem(&self, names: &[&str]) -> Result<CurveSystem> {
        let keep: Vec<u32> = names.iter().map(|n| self.index_of(n)).collect::<Result<_>>()?;
        let mut d = self.diagram.clone();
        for i in (0..d.curves.len() as u32).rev() {
            if !keep.contains(&i) {
                d.remove_curve(i);
            }
        }
        let s = CurveSystem::from_diagram(d, self.ambient_genus)?;
        Ok(if self.reduced { s.mark_reduced() } else { s })
    }

    /// Crossings between each pair of curves in the current diagram.
    pub fn raw_crossing_counts(&self) -> IntersectionTable {
        IntersectionTable { names: self.names(), counts: self.diagram.crossing_matrix() }
    }

    /// Signed crossing counts (algebraic intersection numbers).
    pub fn algebraic_intersections(&self) -> Vec<Vec<i64>> {
        self.diagram.algebraic_matrix()
    }

    fn require_cellular(&self) -> Result<()> {
        let r = self.faces();
        if r.components != 1 || r.genus != self.ambient_genus {
            return Err(Error::NotCellular { traced: r.genus, ambient: self.ambient_genus });
        }
        Ok(())
    }

    /// The first bigon in canonical corner order, if any.
    pub fn find_bigon(&self) -> Result<Option<Bigon>> {
        self.require_cellular()?;
        let mut search = BigonSearch::new(&self.diagram);
        Ok(search.first().map(|b| Bigon {
            curves: (
                self.diagram.curves[b.mover as usize].name.clone(),
                self.diagram.curves[b.rail as usize].name.clone(),
            ),
            corners: (b.corners.0.min(b.corners.1) as usize, b.corners.0.max(b.corners.1) as usize),
            face_count: b.faces.map(|f| f.len()).unwrap_or(0),
        }))
    }

    /// Removes bigons until the curves are pairwise in minimal position.
    pub fn reduce_bigons(&self) -> Result<CurveSystem> {
        if self.reduced {
            return Ok(self.clone());
        }
        self.require_cellular()?;
        let mut d = self.diagram.clone();
        d.reduce()?;
        Ok(CurveSystem::from_diagram(d, self.ambient_genus)?.mark_reduced())
    }

    /// Geometric intersection number of two distinct curves.
    pub fn intersection_number(&self, x: &CurveRef, y: &CurveRef) -> Result<u64> {
        let (i, j) = (self.resolve(x)?, self.resolve(y)?);
        if i == j {
            return Err(Error::SameCurve(x.name.clone()));
        }
        let reduced = self.reduce_bigons()?;
        let table = reduced.raw_crossing_counts();
        Ok(table.get(&x.name, &y.name).expect("names survive reduction"))
    }

    /// Pairwise geometric intersection numbers.
    pub fn intersection_table(&self) -> Result<IntersectionTable> {
        Ok(self.reduce_bigons()?.raw_crossing_counts())
    }

    /// Decides whether the curves fill the ambient surface: the union must
    /// be connected and cut the genus-g surface into discs. For a filling,
    /// Euler's formula forces the crossing sum to equal `2g - 2 + faces`.
    pub fn is_filling(&self) -> Result<FillingReport> {
        let r = self.faces();
        let connected = r.components == 1;
        let filling = connected && r.genus == self.ambient_genus;
        let crossing_sum = self.raw_crossing_counts().pair_sum();
        if filling {
            let expected = 2 * self.ambient_genus as i64 - 2 + r.face_count() as i64;
            if crossing_sum as i64 != expected {
                return Err(Error::Internal(format!(
                    "Euler identity broken: crossing sum {crossing_sum}, 2g-2+l = {expected}"
                )));
            }
        }
        Ok(FillingReport { filling, connected, face_count: r.face_count(), genus: r.genus, crossing_sum })
    }

    /// Filling status of a subset of curves; curves that meet nothing in
    /// the subset make it non-filling.
    pub fn is_filling_subset(&self, names: &[&str]) -> Result<FillingReport> {
        for n in names {
            self.index_of(n)?;
        }
        match self.subsystem(names) {
            Ok(s) => s.is_filling(),
            Err(Error::NoCrossings) => Ok(FillingReport {
                filling: false,
                connected: names.len() <= 1,
                face_count: 0,
                genus: 0,
                crossing_sum: 0,
            }),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> CurveSystem {
        crate::catalog_io::catalog_system("g2_i4").unwrap()
    }

    #[test]
    fn torus_map_is_two_curves_meeting_once() {
        let m = CombMap::new(vec![1, 2, 3, 0], vec![2, 3, 0, 1]).unwrap();
        let s = decompose(&m, 2).unwrap();
        assert_eq!(s.names(), vec!["c1", "c2"]);
        assert_eq!(s.raw_crossing_counts().counts, vec![vec![0, 1], vec![1, 0]]);
        let f = s.is_filling().unwrap();
        assert!(!f.filling);
        assert_eq!(f.genus, 1);
    }

    #[test]
    fn figure_eight_strand_is_self_crossing() {
        let m = CombMap::new(vec![1, 2, 3, 0], vec![1, 0, 3, 2]).unwrap();
        assert_eq!(decompose(&m, 2).unwrap_err(), Error::SelfCrossing { vertex: 0 });
    }

    #[test]
    fn empty_map_has_no_crossings() {
        assert_eq!(decompose(&CombMap::empty(), 2).unwrap_err(), Error::NoCrossings);
    }

    #[test]
    fn genus_overflow_is_reported() {
        let g3 = crate::catalog_io::catalog_system("g3_i5").unwrap();
        assert_eq!(decompose(g3.map(), 2).unwrap_err(), Error::GenusOverflow { map_genus: 3, ambient: 2 });
        assert_eq!(decompose(g2().map(), 1).unwrap_err(), Error::AmbientGenus(1));
    }

    #[test]
    fn g2_pair_decomposes_into_two_curves() {
        let s = g2();
        let plain = decompose(s.map(), 2).unwrap();
        assert_eq!(plain.curve_count(), 2);
        assert_eq!(plain.raw_crossing_counts().counts, vec![vec![0, 4], vec![4, 0]]);
    }

    #[test]
    fn g2_pair_is_reduced_and_filling() {
        let s = g2();
        assert!(s.find_bigon().unwrap().is_none());
        let r = s.reduce_bigons().unwrap();
        assert_eq!(r.diagram(), s.diagram());
        let a = s.curve("a").unwrap();
        let b = s.curve("b").unwrap();
        assert_eq!(s.intersection_number(&a, &b).unwrap(), 4);
        assert_eq!(s.intersection_number(&b, &a).unwrap(), 4);
        assert_eq!(s.intersection_number(&a, &a).unwrap_err(), Error::SameCurve("a".into()));
        let f = s.is_filling().unwrap();
        assert!(f.filling);
        assert_eq!((f.face_count, f.genus, f.crossing_sum), (2, 2, 4));
    }

    #[test]
    fn single_curve_does_not_fill() {
        let s = g2();
        let f = s.is_filling_subset(&["a"]).unwrap();
        assert!(!f.filling);
    }

    #[test]
    fn bigon_fixture_reduces_by_one_sweep() {
        let s = crate::catalog_io::catalog_system("bigon_fixture").unwrap();
        let big = s.find_bigon().unwrap().expect("fixture has a bigon");
        assert_eq!(big.face_count, 1);
        let before = s.raw_crossing_counts();
        let r = s.reduce_bigons().unwrap();
        assert_eq!(r.vertex_count() + 2, s.vertex_count());
        let after = r.raw_crossing_counts();
        assert_eq!(after.get("a", "b").unwrap() + 2, before.get("a", "b").unwrap());
        assert!(r.find_bigon().unwrap().is_none());
        assert_eq!(r.names(), s.names());
    }

    #[test]
    fn stale_representative_is_rejected() {
        let s = g2();
        let mut a = s.curve("a").unwrap();
        a.representative_dart = s.curve("b").unwrap().representative_dart;
        assert!(matches!(s.resolve(&a), Err(Error::RepresentativeMismatch { .. })));
    }
}
