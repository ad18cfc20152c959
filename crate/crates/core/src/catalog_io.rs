//! CSF ("curve system file") text format and the seed catalog.
//!
//! ```text
//! # comments start with '#'
//! CSF 1
//! genus 2
//! vertices 4
//! sigma
//! 0 1 2 3          one line per vertex: its darts counterclockwise
//! ...
//! alpha
//! 0 6              one line per edge: its two darts
//! ...
//! curves 2
//! a 0              curve name and a dart it leaves through
//! b 1
//! ```
//!
//! Files are 7-bit text with LF line endings. Serialization is canonical:
//! darts are relabelled so vertex `v` owns `4v..4v+4`, edges are listed by
//! their smaller dart, and curves are sorted by name.

use crate::curve_system::{decompose_named, CurveSystem};
use crate::error::{Error, Result};
use crate::surface_map::{validate_permutation_pair, CombMap, Dart, MapViolation};
use serde::Serialize;
use std::fmt::Write as _;

pub const CSF_VERSION: u32 = 1;

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next meaningful line as (1-based line number, tokens).
    fn next(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            return Ok((i + 1, content.split_whitespace().collect()));
        }
        Err(Error::Syntax { line: self.last + 1, msg: "unexpected end of file".into() })
    }

    fn keyword(&mut self, kw: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, toks) = self.next()?;
        if toks[0] != kw {
            return Err(Error::Syntax { line, msg: format!("expected '{kw}', found '{}'", toks[0]) });
        }
        Ok((line, toks))
    }

    fn keyword_value(&mut self, kw: &str) -> Result<(usize, u64)> {
        let (line, toks) = self.keyword(kw)?;
        if toks.len() != 2 {
            return Err(Error::Syntax { line, msg: format!("'{kw}' takes one integer") });
        }
        Ok((line, int(toks[1], line)?))
    }
}

fn int(tok: &str, line: usize) -> Result<u64> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Syntax { line, msg: format!("expected a decimal integer, found '{tok}'") });
    }
    tok.parse().map_err(|_| Error::Syntax { line, msg: format!("integer out of range: '{tok}'") })
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-' || b == b'.')
}

/// Parses CSF text into a validated, canonical curve system.
pub fn parse_csf(text: &str) -> Result<CurveSystem> {
    if !text.is_ascii() {
        let line = text.lines().position(|l| !l.is_ascii()).map(|i| i + 1).unwrap_or(1);
        return Err(Error::Syntax { line, msg: "non-ASCII text".into() });
    }
    let mut lines = Lines::new(text);
    let (line, toks) = lines.keyword("CSF")?;
    if toks.len() != 2 || int(toks[1], line)? != CSF_VERSION as u64 {
        return Err(Error::Syntax { line, msg: format!("unsupported header, expected 'CSF {CSF_VERSION}'") });
    }
    let (_, genus) = lines.keyword_value("genus")?;
    let (vline, v) = lines.keyword_value("vertices")?;
    let v = v as usize;
    let n = v
        .checked_mul(4)
        .filter(|&n| n <= u32::MAX as usize)
        .ok_or(Error::Syntax { line: vline, msg: "vertex count too large".into() })?;

    lines.keyword("sigma")?;
    let mut sigma = vec![u32::MAX; n];
    let mut sigma_line = vec![0usize; n];
    for _ in 0..v {
        let (line, toks) = lines.next()?;
        if toks.len() != 4 {
            return Err(Error::Syntax { line, msg: "a vertex line lists exactly 4 darts".into() });
        }
        let ds: Vec<u32> = toks.iter().map(|t| int(t, line).map(|x| x as u32)).collect::<Result<_>>()?;
        for (i, &d) in ds.iter().enumerate() {
            if d as usize >= n {
                return Err(Error::Invalid { line, msg: format!("dart {d} out of range") });
            }
            if sigma[d as usize] != u32::MAX {
                return Err(Error::Invalid { line, msg: format!("dart {d} listed twice") });
            }
            sigma[d as usize] = ds[(i + 1) % 4];
            sigma_line[d as usize] = line;
        }
    }

    lines.keyword("alpha")?;
    let mut alpha = vec![u32::MAX; n];
    let mut alpha_line = vec![0usize; n];
    for _ in 0..2 * v {
        let (line, toks) = lines.next()?;
        if toks.len() != 2 {
            return Err(Error::Syntax { line, msg: "an edge line lists exactly 2 darts".into() });
        }
        let (x, y) = (int(toks[0], line)? as u32, int(toks[1], line)? as u32);
        for d in [x, y] {
            if d as usize >= n {
                return Err(Error::Invalid { line, msg: format!("dart {d} out of range") });
            }
            if alpha[d as usize] != u32::MAX {
                return Err(Error::Invalid { line, msg: format!("dart {d} paired twice") });
            }
        }
        if x == y {
            return Err(Error::Invalid { line, msg: MapViolation::AlphaFixedPoint(x).to_string() });
        }
        alpha[x as usize] = y;
        alpha[y as usize] = x;
        alpha_line[x as usize] = line;
        alpha_line[y as usize] = line;
    }

    let (cline, count) = lines.keyword_value("curves")?;
    let mut names = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let (line, toks) = lines.next()?;
        if toks.len() != 2 || !valid_name(toks[0]) {
            return Err(Error::Syntax { line, msg: "a curve line is '<name> <dart>'".into() });
        }
        let d = int(toks[1], line)? as u32;
        if d as usize >= n {
            return Err(Error::Invalid { line, msg: format!("dart {d} out of range") });
        }
        names.push((toks[0].to_string(), Dart(d)));
    }
    if let Ok((line, toks)) = lines.next() {
        return Err(Error::Syntax { line, msg: format!("unexpected trailing content '{}'", toks[0]) });
    }

    validate_permutation_pair(&sigma, &alpha).map_err(|e| {
        let line = match e {
            MapViolation::AlphaFixedPoint(d) | MapViolation::AlphaNotInvolution(d) => alpha_line[d as usize],
            MapViolation::VertexNotFourValent { dart, .. } => sigma_line[dart as usize],
            MapViolation::NotAPermutation { which: "alpha", dart } => alpha_line[dart as usize],
            MapViolation::NotAPermutation { dart, .. } => sigma_line[dart as usize],
            _ => vline,
        };
        Error::Invalid { line, msg: e.to_string() }
    })?;

    // Relabel darts canonically, carrying the named darts along.
    let relabel = canonical_labels(&sigma);
    let mut csigma = vec![0u32; n];
    let mut calpha = vec![0u32; n];
    for d in 0..n {
        csigma[relabel[d] as usize] = relabel[sigma[d] as usize];
        calpha[relabel[d] as usize] = relabel[alpha[d] as usize];
    }
    let map = CombMap::new(csigma, calpha).map_err(|e| Error::Invalid { line: vline, msg: e.to_string() })?;
    let names: Vec<(String, Dart)> = names.into_iter().map(|(s, d)| (s, Dart(relabel[d.index()]))).collect();
    decompose_named(&map, genus as u32, &names).map_err(|e| match e {
        Error::UnnamedCurve(_) => Error::Invalid { line: cline, msg: "some curve has no name".into() },
        other => other,
    })
}

fn canonical_labels(sigma: &[u32]) -> Vec<u32> {
    let n = sigma.len();
    let mut relabel = vec![u32::MAX; n];
    let mut next = 0;
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
    relabel
}

/// Canonical CSF text for a system.
pub fn serialize_csf(s: &CurveSystem) -> String {
    let m = s.map();
    let mut out = String::new();
    writeln!(out, "CSF {CSF_VERSION}").unwrap();
    writeln!(out, "genus {}", s.ambient_genus()).unwrap();
    writeln!(out, "vertices {}", m.vertex_count()).unwrap();
    out.push_str("sigma\n");
    for v in 0..m.vertex_count() as u32 {
        let mut d = Dart(4 * v);
        let mut cyc = Vec::with_capacity(4);
        for _ in 0..4 {
            cyc.push(d.0.to_string());
            d = m.sigma(d);
        }
        writeln!(out, "{}", cyc.join(" ")).unwrap();
    }
    out.push_str("alpha\n");
    for d in m.darts() {
        let e = m.alpha(d);
        if d < e {
            writeln!(out, "{} {}", d.0, e.0).unwrap();
        }
    }
    writeln!(out, "curves {}", s.curve_count()).unwrap();
    for c in s.curves() {
        writeln!(out, "{} {}", c.name, c.representative_dart.0).unwrap();
    }
    out
}

/// A catalog filling pair together with the values it must reproduce.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub genus: u32,
    pub curves: (String, String),
    pub intersection: u64,
    pub faces: usize,
    pub provenance: String,
    #[serde(skip)]
    pub csf: String,
}

const G2_I4: &str = include_str!("../catalog/g2_i4.csf");
const G3_I5: &str = include_str!("../catalog/g3_i5.csf");
const BIGON_FIXTURE: &str = include_str!("../catalog/bigon_fixture.csf");

fn seed_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "g2_i4".into(),
            genus: 2,
            curves: ("a".into(), "b".into()),
            intersection: 4,
            faces: 2,
            provenance: "hand-built: a visits crossings 0 1 2 3, b visits 0 1 3 2, all crossings positive".into(),
            csf: G2_I4.into(),
        },
        CatalogEntry {
            id: "g3_i5".into(),
            genus: 3,
            curves: ("a".into(), "b".into()),
            intersection: 5,
            faces: 1,
            provenance: "hand-built: a visits crossings 0 1 2 3 4, b visits 0 1 3 4 2, all crossings positive".into(),
            csf: G3_I5.into(),
        },
    ]
}

/// Golden text of a catalog entry or test fixture.
pub fn catalog_text(id: &str) -> Option<&'static str> {
    match id {
        "g2_i4" => Some(G2_I4),
        "g3_i5" => Some(G3_I5),
        "bigon_fixture" => Some(BIGON_FIXTURE),
        _ => None,
    }
}

/// Parses a catalog entry or fixture by id (without re-verification).
pub fn catalog_system(id: &str) -> Result<CurveSystem> {
    let text = catalog_text(id).ok_or_else(|| Error::Precondition(format!("no catalog entry '{id}'")))?;
    parse_csf(text)
}

/// Re-derives everything an entry claims and returns its system.
pub fn verify_entry(entry: &CatalogEntry) -> Result<CurveSystem> {
    let fail = |violation: String| Error::Catalog { id: entry.id.clone(), violation };
    let s = parse_csf(&entry.csf).map_err(|e| fail(e.to_string()))?;
    if s.ambient_genus() != entry.genus {
        return Err(fail(format!("declared genus {} but file says {}", entry.genus, s.ambient_genus())));
    }
    if s.curve_count() != 2 {
        return Err(fail(format!("expected a pair, found {} curves", s.curve_count())));
    }
    let bigon = s.find_bigon().map_err(|e| fail(e.to_string()))?;
    if let Some(b) = bigon {
        return Err(fail(format!("bigon between {} and {}", b.curves.0, b.curves.1)));
    }
    let s = s.mark_reduced();
    let a = s.curve(&entry.curves.0).map_err(|e| fail(e.to_string()))?;
    let b = s.curve(&entry.curves.1).map_err(|e| fail(e.to_string()))?;
    let i = s.intersection_number(&a, &b).map_err(|e| fail(e.to_string()))?;
    if i != entry.intersection {
        return Err(fail(format!("i(a,b) = {i}, expected {}", entry.intersection)));
    }
    let f = s.is_filling().map_err(|e| fail(e.to_string()))?;
    if !f.filling {
        return Err(fail(format!("not a filling (traced genus {})", f.genus)));
    }
    if f.face_count != entry.faces {
        return Err(fail(format!("{} faces, expected {}", f.face_count, entry.faces)));
    }
    if i as i64 != 2 * entry.genus as i64 - 2 + f.face_count as i64 || i < 2 {
        return Err(fail(format!("i(a,b) = {i} breaks i = 2g - 2 + l")));
    }
    Ok(s)
}

/// Loads and re-verifies every catalog entry.
pub fn load_catalog() -> Result<Vec<(CatalogEntry, CurveSystem)>> {
    seed_entries()
        .into_iter()
        .map(|e| {
            let s = verify_entry(&e)?;
            Ok((e, s))
        })
        .collect()
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    seed_entries()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Crossing, Diagram, Strand};

    /// Builds a two-curve system from Gauss codes and crossing signs.
    fn gauss_pair(genus: u32, a: &[u32], b: &[u32], signs: &[i8]) -> CurveSystem {
        let d = Diagram {
            curves: vec![Strand { name: "a".into(), seq: a.to_vec() }, Strand { name: "b".into(), seq: b.to_vec() }],
            crossings: signs.iter().map(|&s| Crossing { first: 0, second: 1, sign: s }).collect(),
        };
        CurveSystem::from_diagram(d, genus).unwrap()
    }

    fn hand_built(id: &str) -> CurveSystem {
        match id {
            "g2_i4" => gauss_pair(2, &[0, 1, 2, 3], &[0, 1, 3, 2], &[1, 1, 1, 1]),
            "g3_i5" => gauss_pair(3, &[0, 1, 2, 3, 4], &[0, 1, 3, 4, 2], &[1, 1, 1, 1, 1]),
            // g2_i4 with a finger of a pushed twice across b
            "bigon_fixture" => gauss_pair(2, &[0, 4, 5, 1, 2, 3], &[0, 1, 4, 5, 3, 2], &[1, 1, 1, 1, 1, -1]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn goldens_match_hand_built_systems() {
        for id in ["g2_i4", "g3_i5", "bigon_fixture"] {
            let text = serialize_csf(&hand_built(id));
            if std::env::var_os("FILLCURVES_WRITE_GOLDENS").is_some() {
                let path = format!("{}/catalog/{id}.csf", env!("CARGO_MANIFEST_DIR"));
                std::fs::write(path, &text).unwrap();
                continue;
            }
            assert_eq!(text, catalog_text(id).unwrap(), "golden drift for {id}");
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        for id in ["g2_i4", "g3_i5", "bigon_fixture"] {
            let golden = catalog_text(id).unwrap();
            let s = parse_csf(golden).unwrap();
            assert_eq!(serialize_csf(&s), golden);
            assert_eq!(serialize_csf(&s), serialize_csf(&parse_csf(&serialize_csf(&s)).unwrap()));
        }
    }

    #[test]
    fn catalog_loads_and_verifies() {
        let cat = load_catalog().unwrap();
        assert_eq!(cat.len(), 2);
        for (e, s) in &cat {
            assert_eq!(e.intersection as i64, 2 * e.genus as i64 - 2 + e.faces as i64);
            assert!(s.is_filling().unwrap().filling);
        }
    }

    #[test]
    fn corrupted_entry_fails_loudly() {
        let mut e = catalog_entries().remove(0);
        e.faces = 3;
        let err = verify_entry(&e).unwrap_err();
        assert!(err.to_string().starts_with("catalog entry failed verification: g2_i4"));

        let mut e = catalog_entries().remove(0);
        e.csf = e.csf.replace("alpha\n0 ", "alpha\n1 ");
        assert!(matches!(verify_entry(&e), Err(Error::Catalog { .. })));
    }

    #[test]
    fn alpha_fixed_point_is_located() {
        let bad = "CSF 1\ngenus 2\nvertices 1\nsigma\n0 1 2 3\nalpha\n0 0\n1 3\ncurves 0\n";
        let err = parse_csf(bad).unwrap_err();
        assert_eq!(err, Error::Invalid { line: 7, msg: "alpha not fixed-point-free (dart 0)".into() });
    }

    #[test]
    fn truncated_file_is_a_syntax_error() {
        let golden = catalog_text("g2_i4").unwrap();
        let cut = &golden[..golden.len() / 2];
        assert!(matches!(parse_csf(cut), Err(Error::Syntax { .. })));
        assert!(matches!(parse_csf(""), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn comments_and_relabelled_darts_are_accepted() {
        // the one-vertex torus with its darts listed out of order
        let text =
            "# torus\nCSF 1\ngenus 2 # ambient\nvertices 1\nsigma\n2 3 0 1\nalpha\n0 2\n1 3\ncurves 2\nx 2\ny 1\n";
        let s = parse_csf(text).unwrap();
        assert_eq!(s.names(), vec!["x", "y"]);
        let again = parse_csf(&serialize_csf(&s)).unwrap();
        assert_eq!(serialize_csf(&again), serialize_csf(&s));
    }

    #[test]
    fn unnamed_curve_is_rejected() {
        let text = "CSF 1\ngenus 2\nvertices 1\nsigma\n0 1 2 3\nalpha\n0 2\n1 3\ncurves 1\nx 0\n";
        assert!(matches!(parse_csf(text), Err(Error::Invalid { line: 9, .. })));
    }
}
