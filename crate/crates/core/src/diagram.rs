//! Signed Gauss-code diagrams: the working representation behind curve
//! systems.
//!
//! Every crossing is a vertex visited exactly once by two distinct curves.
//! A crossing stores its two curves in a fixed order together with the sign
//! of the pair of tangent directions (`+1` when the second curve passes from
//! the right of the first to its left). Because every vertex is a transverse
//! crossing, these signs determine the rotation system, so a diagram and a
//! 4-valent combinatorial map with named straight-ahead curves carry the same
//! information.
//!
//! Surgery (push-offs, Dehn twists, bigon sweeps) is done here, on curve
//! sequences, and converted back to a [`CombMap`] when faces are needed.

use crate::error::Error;
use crate::surface_map::{face_labels, CombMap, Dart};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Crossing {
    pub first: u32,
    pub second: u32,
    pub sign: i8,
}

impl Crossing {
    #[inline]
    pub fn partner(&self, c: u32) -> u32 {
        if self.first == c {
            self.second
        } else {
            self.first
        }
    }

    /// Sign of the crossing read with `c` as the first curve.
    #[inline]
    pub fn sign_from(&self, c: u32) -> i8 {
        if self.first == c {
            self.sign
        } else {
            -self.sign
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Strand {
    pub name: String,
    /// Crossings in traversal order.
    pub seq: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Diagram {
    pub curves: Vec<Strand>,
    pub crossings: Vec<Crossing>,
}

/// One face-level view of a diagram: its map plus face bookkeeping.
pub(crate) struct Faces {
    pub map: CombMap,
    pub face_of: Vec<u32>,
    pub start: Vec<u32>,
    pub darts: Vec<u32>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.start.len() - 1
    }

    pub fn darts_of(&self, f: u32) -> &[u32] {
        &self.darts[self.start[f as usize] as usize..self.start[f as usize + 1] as usize]
    }
}

/// Positions of each vertex inside the sequences of its two curves.
pub(crate) struct Positions {
    pub first: Vec<u32>,
    pub second: Vec<u32>,
}

impl Positions {
    #[inline]
    pub fn of(&self, d: &Diagram, v: u32, c: u32) -> usize {
        if d.crossings[v as usize].first == c {
            self.first[v as usize] as usize
        } else {
            self.second[v as usize] as usize
        }
    }
}

/// A bigon between two curves together with what a sweep needs.
#[derive(Debug, Clone)]
pub(crate) struct FoundBigon {
    /// Curve whose arc is swept across the bigon.
    pub mover: u32,
    /// Curve the sweep slides along.
    pub rail: u32,
    pub corners: (u32, u32),
    /// Vertices of the rail's arc, corners included, from `corners.0`.
    pub rail_arc: Vec<u32>,
    pub mover_dir: i8,
    pub rail_dir: i8,
    /// For each interior rail vertex: the crossing curve, and whether the
    /// interior of the bigon precedes the rail vertex along that curve.
    pub exits: Vec<(u32, bool)>,
    /// Interior mover vertices (crossings removed by the sweep).
    pub interior_vertices: Vec<u32>,
    /// Vertices touched by the sweep; used to keep batched sweeps apart.
    pub touched: Vec<u32>,
    /// Faces inside the bigon when the disc side was traced explicitly.
    pub faces: Option<Vec<u32>>,
}

impl Diagram {
    pub fn vertex_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn curve_index(&self, name: &str) -> Option<u32> {
        self.curves.iter().position(|c| c.name == name).map(|i| i as u32)
    }

    pub fn positions(&self) -> Positions {
        let n = self.crossings.len();
        let mut first = vec![u32::MAX; n];
        let mut second = vec![u32::MAX; n];
        for (ci, c) in self.curves.iter().enumerate() {
            for (i, &v) in c.seq.iter().enumerate() {
                if self.crossings[v as usize].first == ci as u32 {
                    first[v as usize] = i as u32;
                } else {
                    second[v as usize] = i as u32;
                }
            }
        }
        Positions { first, second }
    }

    /// Structural self-check: each crossing is visited once by each of its
    /// two curves and by nothing else.
    pub fn check(&self) -> Result<(), Error> {
        let n = self.crossings.len();
        let mut hits = vec![0u8; n];
        for (ci, c) in self.curves.iter().enumerate() {
            for &v in &c.seq {
                let x = self
                    .crossings
                    .get(v as usize)
                    .ok_or_else(|| Error::Internal(format!("curve {} visits missing vertex {v}", c.name)))?;
                if x.first != ci as u32 && x.second != ci as u32 {
                    return Err(Error::Internal(format!("curve {} visits vertex {v} it does not own", c.name)));
                }
                hits[v as usize] += 1;
            }
        }
        for (v, x) in self.crossings.iter().enumerate() {
            if x.first == x.second {
                return Err(Error::SelfCrossing { vertex: v });
            }
            if hits[v] != 2 {
                return Err(Error::Internal(format!("vertex {v} visited {} times", hits[v])));
            }
        }
        Ok(())
    }

    #[inline]
    fn dart(&self, v: u32, c: u32, out: bool) -> u32 {
        let x = &self.crossings[v as usize];
        let r = if x.first == c {
            if out {
                0
            } else {
                2
            }
        } else {
            match (out, x.sign > 0) {
                (true, true) | (false, false) => 1,
                _ => 3,
            }
        };
        4 * v + r
    }

    /// Dart leaving vertex `v` along curve `c`, forward (`dir > 0`) or
    /// backward.
    #[inline]
    pub fn dart_towards(&self, v: u32, c: u32, dir: i8) -> u32 {
        self.dart(v, c, dir > 0)
    }

    /// The combinatorial map in the diagram's own vertex numbering.
    pub fn to_map(&self) -> CombMap {
        let n = 4 * self.crossings.len();
        let mut alpha = vec![u32::MAX; n];
        for (ci, c) in self.curves.iter().enumerate() {
            let len = c.seq.len();
            for i in 0..len {
                let a = self.dart(c.seq[i], ci as u32, true);
                let b = self.dart(c.seq[(i + 1) % len], ci as u32, false);
                alpha[a as usize] = b;
                alpha[b as usize] = a;
            }
        }
        CombMap::from_canonical_alpha(alpha)
    }

    pub fn faces(&self) -> Faces {
        let map = self.to_map();
        let (face_of, count) = face_labels(&map);
        let mut start = vec![0u32; count + 1];
        for &f in &face_of {
            start[f as usize + 1] += 1;
        }
        for i in 0..count {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut darts = vec![0u32; face_of.len()];
        // Keep each face's darts in traversal order.
        let mut done = vec![false; face_of.len()];
        for s in 0..face_of.len() {
            if done[s] {
                continue;
            }
            let mut d = s;
            while !done[d] {
                done[d] = true;
                let f = face_of[d] as usize;
                darts[fill[f] as usize] = d as u32;
                fill[f] += 1;
                d = map.sigma(map.alpha(Dart(d as u32))).index();
            }
        }
        Faces { map, face_of, start, darts }
    }

    /// Genus of the traced surface, or `None` if the diagram is not
    /// connected.
    pub fn connected_genus(&self) -> Option<u32> {
        let report = crate::surface_map::trace_faces(&self.to_map());
        (report.components == 1).then_some(report.genus)
    }

    /// Crossing counts between every ordered pair of curves.
    pub fn crossing_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.curves.len();
        let mut m = vec![vec![0u64; n]; n];
        for x in &self.crossings {
            m[x.first as usize][x.second as usize] += 1;
            m[x.second as usize][x.first as usize] += 1;
        }
        m
    }

    /// Algebraic intersection numbers: the signed crossing count with the
    /// row curve read first.
    pub fn algebraic_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.curves.len();
        let mut m = vec![vec![0i64; n]; n];
        for x in &self.crossings {
            m[x.first as usize][x.second as usize] += x.sign as i64;
            m[x.second as usize][x.first as usize] -= x.sign as i64;
        }
        m
    }

    /// Renames crossings so that vertices are numbered by first visit when
    /// curves are traversed in order, and each crossing lists its earlier
    /// curve first.
    pub fn renumber(&mut self) {
        let n = self.crossings.len();
        let mut new_id = vec![u32::MAX; n];
        let mut next = 0u32;
        for c in &self.curves {
            for &v in &c.seq {
                if new_id[v as usize] == u32::MAX {
                    new_id[v as usize] = next;
                    next += 1;
                }
            }
        }
        let mut crossings = vec![Crossing { first: 0, second: 0, sign: 1 }; next as usize];
        for (v, x) in self.crossings.iter().enumerate() {
            let id = new_id[v];
            if id == u32::MAX {
                continue;
            }
            let (first, second, sign) =
                if x.first < x.second { (x.first, x.second, x.sign) } else { (x.second, x.first, -x.sign) };
            crossings[id as usize] = Crossing { first, second, sign };
        }
        for c in &mut self.curves {
            for v in &mut c.seq {
                *v = new_id[*v as usize];
            }
        }
        self.crossings = crossings;
    }

    /// Sorts curves by name and renumbers; the result is the canonical
    /// presentation of the diagram for its current curve starting points.
    pub fn canonicalize(&mut self) {
        let mut order: Vec<usize> = (0..self.curves.len()).collect();
        order.sort_by(|&a, &b| self.curves[a].name.cmp(&self.curves[b].name));
        let mut new_index = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new as u32;
        }
        let mut curves = Vec::with_capacity(order.len());
        for &old in &order {
            curves.push(self.curves[old].clone());
        }
        self.curves = curves;
        for x in &mut self.crossings {
            x.first = new_index[x.first as usize];
            x.second = new_index[x.second as usize];
        }
        self.renumber();
    }

    /// Adds a parallel copy of curve `t`, pushed off to its left. The copy
    /// crosses everything `t` crosses, at adjacent points, and never meets
    /// `t` itself.
    pub fn push_off(&mut self, t: u32, name: String) -> u32 {
        let new_curve = self.curves.len() as u32;
        let t_seq = self.curves[t as usize].seq.clone();
        let mut after: HashMap<u32, u32> = HashMap::new();
        let mut before: HashMap<u32, u32> = HashMap::new();
        let mut copy_seq = Vec::with_capacity(t_seq.len());
        for &p in &t_seq {
            let x = self.crossings[p as usize];
            let s = x.sign_from(t);
            let id = self.crossings.len() as u32;
            self.crossings.push(Crossing { first: new_curve, second: x.partner(t), sign: s });
            copy_seq.push(id);
            if s > 0 {
                after.insert(p, id);
            } else {
                before.insert(p, id);
            }
        }
        for (ci, c) in self.curves.iter_mut().enumerate() {
            if ci as u32 == t {
                continue;
            }
            if !c.seq.iter().any(|v| after.contains_key(v) || before.contains_key(v)) {
                continue;
            }
            let mut seq = Vec::with_capacity(c.seq.len() + t_seq.len());
            for &v in &c.seq {
                if let Some(&b) = before.get(&v) {
                    seq.push(b);
                }
                seq.push(v);
                if let Some(&a) = after.get(&v) {
                    seq.push(a);
                }
            }
            c.seq = seq;
        }
        self.curves.push(Strand { name, seq: copy_seq });
        new_curve
    }

    /// Replaces curve `t` by its image under the `k`-th power of the Dehn
    /// twist along `c`.
    ///
    /// Inside a thin annulus around `c` every other curve is a rung. Each
    /// rung of `t` is replaced, on the left half of the annulus, by a spiral
    /// that winds `|k|` times around; positive `k` spirals in the direction
    /// of `c`, which turns right from either side (a right-handed twist).
    /// Spirals of `t` are parallel to one another, cross `c` once, and cross
    /// every other rung `|k|` times. No bigon reduction is done here.
    pub fn twist(&mut self, c: u32, t: u32, k: i64) {
        if k == 0 || c == t {
            return;
        }
        let core = self.curves[c as usize].seq.clone();
        let m = core.len();
        let rung_curve: Vec<u32> = core.iter().map(|&v| self.crossings[v as usize].partner(c)).collect();
        let north: Vec<i8> = core.iter().map(|&v| self.crossings[v as usize].sign_from(c)).collect();
        let mut rung_of: HashMap<u32, usize> = HashMap::with_capacity(m);
        for (i, &v) in core.iter().enumerate() {
            rung_of.insert(v, i);
        }
        let laps = k.unsigned_abs() as usize;
        let step: i64 = k.signum();

        // spiral vertices per t-rung (outward order); stacked vertices per other rung
        let mut spiral: HashMap<usize, Vec<u32>> = HashMap::new();
        let mut stacks: Vec<Vec<(usize, u32)>> = vec![Vec::new(); m];
        for j in 0..m {
            if rung_curve[j] != t {
                continue;
            }
            let east = (k.signum() as i8) * north[j];
            let mut path = Vec::new();
            for lap in 0..laps {
                for s in 1..m {
                    let i = (j as i64 + step * s as i64).rem_euclid(m as i64) as usize;
                    if rung_curve[i] == t {
                        continue;
                    }
                    let id = self.crossings.len() as u32;
                    self.crossings.push(Crossing { first: t, second: rung_curve[i], sign: east * north[i] });
                    path.push(id);
                    stacks[i].push((lap * m + s, id));
                }
            }
            spiral.insert(j, path);
        }
        for st in &mut stacks {
            st.sort_unstable_by_key(|&(key, _)| key);
        }

        for (ci, curve) in self.curves.iter_mut().enumerate() {
            let ci = ci as u32;
            if ci == c {
                continue;
            }
            let touched = curve.seq.iter().any(|v| rung_of.contains_key(v));
            if !touched {
                continue;
            }
            let mut seq = Vec::with_capacity(curve.seq.len());
            for &v in &curve.seq {
                let Some(&i) = rung_of.get(&v) else {
                    seq.push(v);
                    continue;
                };
                if ci == t {
                    let path = &spiral[&i];
                    if north[i] > 0 {
                        seq.push(v);
                        seq.extend_from_slice(path);
                    } else {
                        seq.extend(path.iter().rev());
                        seq.push(v);
                    }
                } else {
                    let st = &stacks[i];
                    if north[i] > 0 {
                        seq.push(v);
                        seq.extend(st.iter().map(|&(_, id)| id));
                    } else {
                        seq.extend(st.iter().rev().map(|&(_, id)| id));
                        seq.push(v);
                    }
                }
            }
            curve.seq = seq;
        }
    }

    /// Deletes a curve and every crossing on it.
    pub fn remove_curve(&mut self, r: u32) {
        let mut dead = vec![false; self.crossings.len()];
        for &v in &self.curves[r as usize].seq {
            dead[v as usize] = true;
        }
        self.curves.remove(r as usize);
        for c in &mut self.curves {
            c.seq.retain(|&v| !dead[v as usize]);
        }
        for x in &mut self.crossings {
            if x.first > r {
                x.first -= 1;
            }
            if x.second > r {
                x.second -= 1;
            }
        }
        self.compact(&dead);
    }

    fn compact(&mut self, dead: &[bool]) {
        let mut new_id = vec![u32::MAX; self.crossings.len()];
        let mut crossings = Vec::with_capacity(self.crossings.len());
        for (v, x) in self.crossings.iter().enumerate() {
            if !dead[v] {
                new_id[v] = crossings.len() as u32;
                crossings.push(*x);
            }
        }
        for c in &mut self.curves {
            for v in &mut c.seq {
                *v = new_id[*v as usize];
            }
        }
        self.crossings = crossings;
    }
}

/// Per-curve successor tables: for the crossing at position `i` of a curve,
/// the position of the next (or previous) crossing with the same partner.
struct PartnerSteps {
    fwd: Vec<Vec<u32>>,
    bwd: Vec<Vec<u32>>,
}

impl PartnerSteps {
    fn build(d: &Diagram) -> Self {
        let mut fwd = Vec::with_capacity(d.curves.len());
        let mut bwd = Vec::with_capacity(d.curves.len());
        let ncurves = d.curves.len();
        let mut last = vec![u32::MAX; ncurves];
        for (ci, c) in d.curves.iter().enumerate() {
            let len = c.seq.len();
            let partner: Vec<u32> = c.seq.iter().map(|&v| d.crossings[v as usize].partner(ci as u32)).collect();
            let mut f = vec![u32::MAX; len];
            let mut b = vec![u32::MAX; len];
            // Two passes around the cycle resolve wrap-around.
            last.iter_mut().for_each(|x| *x = u32::MAX);
            for pass in 0..2 {
                for i in (0..len).rev() {
                    let p = partner[i] as usize;
                    if pass == 1 {
                        f[i] = last[p];
                    }
                    last[p] = i as u32;
                }
            }
            last.iter_mut().for_each(|x| *x = u32::MAX);
            for pass in 0..2 {
                for i in 0..len {
                    let p = partner[i] as usize;
                    if pass == 1 {
                        b[i] = last[p];
                    }
                    last[p] = i as u32;
                }
            }
            fwd.push(f);
            bwd.push(b);
        }
        PartnerSteps { fwd, bwd }
    }

    #[inline]
    fn next(&self, c: u32, pos: usize, dir: i8) -> usize {
        if dir > 0 {
            self.fwd[c as usize][pos] as usize
        } else {
            self.bwd[c as usize][pos] as usize
        }
    }
}

/// Scratch state for bigon searches over one fixed diagram.
pub(crate) struct BigonSearch<'a> {
    d: &'a Diagram,
    pos: Positions,
    steps: PartnerSteps,
    faces: Faces,
    euler: i64,
    stamp: u32,
    boundary: Vec<u32>,
    side_a: Vec<u32>,
    side_b: Vec<u32>,
    vert_mark: Vec<u32>,
    on_rail: Vec<u32>,
}

enum Side {
    A,
    B,
}

impl<'a> BigonSearch<'a> {
    pub fn new(d: &'a Diagram) -> Self {
        let faces = d.faces();
        let nf = faces.count();
        let nv = d.vertex_count();
        let euler = nv as i64 - 2 * nv as i64 + nf as i64;
        let ndarts = 4 * nv;
        BigonSearch {
            d,
            pos: d.positions(),
            steps: PartnerSteps::build(d),
            faces,
            euler,
            stamp: 0,
            boundary: vec![0; ndarts],
            side_a: vec![0; nf],
            side_b: vec![0; nf],
            vert_mark: vec![0; nv],
            on_rail: vec![0; nv],
        }
    }

    pub fn faces(&self) -> &Faces {
        &self.faces
    }

    fn seq(&self, c: u32) -> &[u32] {
        &self.d.curves[c as usize].seq
    }

    /// Walks from vertex `p` along curve `c` in direction `dir` up to and
    /// including vertex position `to`.
    fn arc(&self, c: u32, from: usize, to: usize, dir: i8) -> Vec<u32> {
        let seq = self.seq(c);
        let len = seq.len();
        let mut out = vec![seq[from]];
        let mut i = from;
        while i != to {
            i = if dir > 0 { (i + 1) % len } else { (i + len - 1) % len };
            out.push(seq[i]);
        }
        out
    }

    /// Examines the quadrant at crossing `p` spanned by curve `first`
    /// leaving in direction `du` and curve `second` leaving in direction
    /// `dv`. Returns a bigon when that quadrant is the corner of an embedded
    /// disc bounded by one arc of each curve.
    pub fn check_corner(&mut self, p: u32, du: i8, dv: i8, want_faces: bool) -> Option<FoundBigon> {
        let d = self.d;
        let x = d.crossings[p as usize];
        let (u, v) = (x.first, x.second);
        let pu = self.pos.first[p as usize] as usize;
        let pv = self.pos.second[p as usize] as usize;
        let qu = self.steps.next(u, pu, du);
        let qv = self.steps.next(v, pv, dv);
        let q = self.seq(u)[qu];
        if q == p || q != self.seq(v)[qv] {
            return None;
        }
        let alpha_arc = self.arc(u, pu, qu, du);
        let beta_arc = self.arc(v, pv, qv, dv);

        self.stamp += 1;
        let stamp = self.stamp;
        let map = &self.faces.map;
        for (c, arc, dir) in [(u, &alpha_arc, du), (v, &beta_arc, dv)] {
            for w in arc.windows(2) {
                let dt = d.dart_towards(w[0], c, dir);
                self.boundary[dt as usize] = stamp;
                self.boundary[map.alpha(Dart(dt)).index()] = stamp;
            }
        }

        let du_dart = d.dart_towards(p, u, du);
        let dv_dart = d.dart_towards(p, v, dv);
        // The disc lies in the corner from one boundary dart to the next.
        let (corner_to, left_of_mover) = if map.sigma(Dart(du_dart)).0 == dv_dart {
            (dv_dart, true)
        } else if map.sigma(Dart(dv_dart)).0 == du_dart {
            (du_dart, false)
        } else {
            return None;
        };
        let other_corner = map.sigma(Dart(corner_to)).0;
        let fa = self.faces.face_of[corner_to as usize];
        let fb = self.faces.face_of[other_corner as usize];
        if fa == fb {
            return None;
        }

        let (done, region) = self.flood(fa, fb, stamp)?;
        let chi_done = self.region_euler(&region, &alpha_arc, &beta_arc, stamp);
        let chi_a = match done {
            Side::A => chi_done,
            Side::B => self.euler - chi_done,
        };
        if chi_a != 1 {
            return None;
        }
        let faces = match (done, want_faces) {
            (Side::A, _) => Some(region),
            (Side::B, true) => Some(self.flood_one(fa, stamp)),
            (Side::B, false) => None,
        };

        self.sweep_data(p, u, v, du, dv, left_of_mover, alpha_arc, beta_arc, faces)
    }

    /// Simultaneous flood from both sides of the loop; returns the side
    /// that closes first with its faces, or `None` if the sides meet.
    fn flood(&mut self, fa: u32, fb: u32, stamp: u32) -> Option<(Side, Vec<u32>)> {
        let mut qa = vec![fa];
        let mut qb = vec![fb];
        let mut ra = vec![fa];
        let mut rb = vec![fb];
        self.side_a[fa as usize] = stamp;
        self.side_b[fb as usize] = stamp;
        let (mut ia, mut ib) = (0usize, 0usize);
        loop {
            if ia == qa.len() {
                return Some((Side::A, ra));
            }
            if ib == qb.len() {
                return Some((Side::B, rb));
            }
            let f = qa[ia];
            ia += 1;
            if !self.expand(f, stamp, true, &mut qa, &mut ra) {
                return None;
            }
            let f = qb[ib];
            ib += 1;
            if !self.expand(f, stamp, false, &mut qb, &mut rb) {
                return None;
            }
        }
    }

    fn expand(&mut self, f: u32, stamp: u32, a: bool, queue: &mut Vec<u32>, region: &mut Vec<u32>) -> bool {
        let (s, e) = (self.faces.start[f as usize] as usize, self.faces.start[f as usize + 1] as usize);
        for idx in s..e {
            let dt = self.faces.darts[idx];
            if self.boundary[dt as usize] == stamp {
                continue;
            }
            let g = self.faces.face_of[self.faces.map.alpha(Dart(dt)).index()];
            let (mine, theirs) = if a { (&mut self.side_a, &self.side_b) } else { (&mut self.side_b, &self.side_a) };
            if theirs[g as usize] == stamp {
                return false;
            }
            if mine[g as usize] != stamp {
                mine[g as usize] = stamp;
                queue.push(g);
                region.push(g);
            }
        }
        true
    }

    fn flood_one(&mut self, fa: u32, stamp: u32) -> Vec<u32> {
        // side_a already holds a partial flood for this stamp; restart cleanly
        self.stamp += 1;
        let s2 = self.stamp;
        for i in 0..self.boundary.len() {
            if self.boundary[i] == stamp {
                self.boundary[i] = s2;
            }
        }
        let mut q = vec![fa];
        let mut region = vec![fa];
        self.side_a[fa as usize] = s2;
        let mut i = 0;
        while i < q.len() {
            let f = q[i];
            i += 1;
            let (s, e) = (self.faces.start[f as usize] as usize, self.faces.start[f as usize + 1] as usize);
            for idx in s..e {
                let dt = self.faces.darts[idx];
                if self.boundary[dt as usize] == s2 {
                    continue;
                }
                let g = self.faces.face_of[self.faces.map.alpha(Dart(dt)).index()];
                if self.side_a[g as usize] != s2 {
                    self.side_a[g as usize] = s2;
                    q.push(g);
                    region.push(g);
                }
            }
        }
        region.sort_unstable();
        region
    }

    /// Euler characteristic of the closure of a region bounded by the loop.
    fn region_euler(&mut self, region: &[u32], alpha_arc: &[u32], beta_arc: &[u32], stamp: u32) -> i64 {
        for &v in alpha_arc.iter().chain(beta_arc.iter()) {
            self.vert_mark[v as usize] = stamp;
        }
        let mut interior_darts = 0i64;
        let mut interior_vertices = 0i64;
        for &f in region {
            for &dt in self.faces.darts_of(f) {
                if self.boundary[dt as usize] != stamp {
                    interior_darts += 1;
                }
                let vx = dt / 4;
                if self.vert_mark[vx as usize] != stamp {
                    self.vert_mark[vx as usize] = stamp;
                    interior_vertices += 1;
                }
            }
        }
        interior_vertices - interior_darts / 2 + region.len() as i64
    }

    #[allow(clippy::too_many_arguments)]
    fn sweep_data(
        &mut self,
        p: u32,
        u: u32,
        v: u32,
        du: i8,
        dv: i8,
        left_of_mover: bool,
        alpha_arc: Vec<u32>,
        beta_arc: Vec<u32>,
        faces: Option<Vec<u32>>,
    ) -> Option<FoundBigon> {
        let d = self.d;
        let map = &self.faces.map;
        let q = *alpha_arc.last().unwrap();
        self.stamp += 1;
        let stamp = self.stamp;
        for &t in &beta_arc[1..beta_arc.len() - 1] {
            self.on_rail[t as usize] = stamp;
        }
        let mut touched: Vec<u32> = alpha_arc.iter().chain(beta_arc.iter()).copied().collect();
        let mut exit_of: HashMap<u32, (u32, bool)> = HashMap::new();
        for &r in &alpha_arc[1..alpha_arc.len() - 1] {
            let z = d.crossings[r as usize].partner(u);
            let fwd = Dart(d.dart_towards(r, u, du));
            let inward = if left_of_mover { map.sigma(fwd) } else { map.sigma(map.sigma(map.sigma(fwd))) };
            let z_out = d.dart_towards(r, z, 1);
            let dir: i8 = if inward.0 == z_out { 1 } else { -1 };
            let seq = self.seq(z);
            let len = seq.len();
            let mut i = self.pos.of(d, r, z);
            let mut steps = 0;
            let exit = loop {
                i = if dir > 0 { (i + 1) % len } else { (i + len - 1) % len };
                steps += 1;
                if steps > len {
                    return None;
                }
                let w = seq[i];
                let other = d.crossings[w as usize].partner(z);
                if other == u {
                    // leaves through the mover's side: a smaller bigon sits inside
                    return None;
                }
                if other == v {
                    break w;
                }
                touched.push(w);
            };
            if self.on_rail[exit as usize] != stamp {
                return None;
            }
            self.on_rail[exit as usize] = 0;
            exit_of.insert(exit, (z, dir > 0));
        }
        if exit_of.len() != beta_arc.len() - 2 {
            return None;
        }
        let exits = beta_arc[1..beta_arc.len() - 1].iter().map(|t| exit_of[t]).collect();
        Some(FoundBigon {
            mover: u,
            rail: v,
            corners: (p, q),
            interior_vertices: alpha_arc[1..alpha_arc.len() - 1].to_vec(),
            rail_arc: beta_arc,
            mover_dir: du,
            rail_dir: dv,
            exits,
            touched,
            faces,
        })
    }

    /// All bigons of the diagram, each reported once (from its smaller
    /// corner), in order of that corner and quadrant.
    pub fn all(&mut self, limit: usize) -> Vec<FoundBigon> {
        let mut found = Vec::new();
        for p in 0..self.d.vertex_count() as u32 {
            for (du, dv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                if let Some(b) = self.check_corner(p, du, dv, false) {
                    if b.corners.0 < b.corners.1 {
                        found.push(b);
                        if found.len() >= limit {
                            return found;
                        }
                    }
                }
            }
        }
        found
    }

    /// The first bigon in corner order, with its faces.
    pub fn first(&mut self) -> Option<FoundBigon> {
        for p in 0..self.d.vertex_count() as u32 {
            for (du, dv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                if let Some(b) = self.check_corner(p, du, dv, true) {
                    return Some(b);
                }
            }
        }
        None
    }

    /// Faces incident to the given vertices.
    pub fn incident_faces(&self, verts: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(verts.len() * 4);
        for &v in verts {
            for r in 0..4 {
                out.push(self.faces.face_of[(4 * v + r) as usize]);
            }
        }
        out
    }
}

impl Diagram {
    /// Sweeps the mover of each bigon across it. The bigons must touch
    /// pairwise disjoint sets of faces.
    pub fn apply_sweeps(&mut self, bigons: &[FoundBigon]) {
        let n = self.crossings.len();
        let mut dead = vec![false; n];
        let mut after: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let mut before: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for b in bigons {
            let (p, q) = b.corners;
            dead[p as usize] = true;
            dead[q as usize] = true;
            for &r in &b.interior_vertices {
                dead[r as usize] = true;
            }
            let eps = b.mover_dir * b.rail_dir;
            let rail_inner = &b.rail_arc[1..b.rail_arc.len() - 1];
            let mut fresh = Vec::with_capacity(rail_inner.len());
            for (&t, &(z, interior_before)) in rail_inner.iter().zip(&b.exits) {
                let s_rail = self.crossings[t as usize].sign_from(b.rail);
                let id = self.crossings.len() as u32;
                self.crossings.push(Crossing { first: b.mover, second: z, sign: eps * s_rail });
                dead.push(false);
                fresh.push(id);
                if interior_before {
                    after.entry((z, t)).or_default().push(id);
                } else {
                    before.entry((z, t)).or_default().push(id);
                }
            }
            if b.mover_dir > 0 {
                after.entry((b.mover, p)).or_default().extend(fresh);
            } else {
                fresh.reverse();
                after.entry((b.mover, q)).or_default().extend(fresh);
            }
        }
        for (ci, c) in self.curves.iter_mut().enumerate() {
            let ci = ci as u32;
            let mut seq = Vec::with_capacity(c.seq.len());
            for &v in &c.seq {
                if let Some(list) = before.get(&(ci, v)) {
                    seq.extend_from_slice(list);
                }
                if !dead[v as usize] {
                    seq.push(v);
                }
                if let Some(list) = after.get(&(ci, v)) {
                    seq.extend_from_slice(list);
                }
            }
            c.seq = seq;
        }
        self.compact(&dead);
    }

    /// Removes bigons until none remain. Every pass sweeps a batch of
    /// bigons that touch disjoint faces; each sweep removes two crossings.
    /// Returns the number of sweeps performed.
    pub fn reduce(&mut self) -> Result<usize, Error> {
        let genus_before = self.connected_genus();
        let mut total = 0;
        loop {
            let batch = {
                let mut search = BigonSearch::new(self);
                let found = search.all(usize::MAX);
                if found.is_empty() {
                    break;
                }
                let mut claimed = vec![false; search.faces().count()];
                let mut batch = Vec::new();
                for b in found {
                    let fs = search.incident_faces(&b.touched);
                    if fs.iter().any(|&f| claimed[f as usize]) {
                        continue;
                    }
                    for f in fs {
                        claimed[f as usize] = true;
                    }
                    batch.push(b);
                }
                batch
            };
            total += batch.len();
            self.apply_sweeps(&batch);
        }
        if cfg!(debug_assertions) {
            self.check()?;
        }
        let genus_after = self.connected_genus();
        if genus_after != genus_before {
            return Err(Error::Internal(format!(
                "bigon sweeps changed the traced surface ({genus_before:?} -> {genus_after:?})"
            )));
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Curve a visits 0,1,2,3; curve b visits 0,1,3,2; all crossings
    /// positive. This is the genus-2 filling pair shipped in the catalog.
    pub(crate) fn g2_pair() -> Diagram {
        let crossings = (0..4).map(|_| Crossing { first: 0, second: 1, sign: 1 }).collect();
        Diagram {
            curves: vec![
                Strand { name: "a".into(), seq: vec![0, 1, 2, 3] },
                Strand { name: "b".into(), seq: vec![0, 1, 3, 2] },
            ],
            crossings,
        }
    }

    #[test]
    fn pair_is_genus_two_with_two_faces() {
        let d = g2_pair();
        d.check().unwrap();
        let r = crate::surface_map::trace_faces(&d.to_map());
        assert_eq!(r.genus, 2);
        assert_eq!(r.face_count(), 2);
        assert_eq!(r.degree_multiset(), vec![4, 12]);
    }

    #[test]
    fn push_off_is_disjoint_and_parallel() {
        let mut d = g2_pair();
        let c = d.push_off(0, "a2".into());
        d.check().unwrap();
        let m = d.crossing_matrix();
        assert_eq!(m[0][c as usize], 0);
        assert_eq!(m[1][c as usize], 4);
        assert_eq!(d.connected_genus(), Some(2));
        assert_eq!(d.algebraic_matrix()[c as usize][1], d.algebraic_matrix()[0][1]);
    }

    #[test]
    fn twist_crossing_counts_match_surgery() {
        for k in [-3i64, -1, 1, 2] {
            let mut d = g2_pair();
            let c = d.push_off(0, "a2".into());
            d.twist(1, c, k);
            d.check().unwrap();
            assert_eq!(d.connected_genus(), Some(2));
            let m = d.crossing_matrix();
            assert_eq!(m[0][c as usize], 16 * k.unsigned_abs());
            assert_eq!(m[1][c as usize], 4);
        }
    }

    #[test]
    fn minimal_pair_has_no_bigons() {
        let d = g2_pair();
        assert!(BigonSearch::new(&d).first().is_none());
    }

    #[test]
    fn twist_then_inverse_reduces_back() {
        let mut d = g2_pair();
        let c = d.push_off(0, "a2".into());
        d.twist(1, c, 2);
        d.reduce().unwrap();
        d.twist(1, c, -2);
        let swept = d.reduce().unwrap();
        assert!(swept > 0);
        let m = d.crossing_matrix();
        assert_eq!(m[0][c as usize], 0);
        assert_eq!(m[1][c as usize], 4);
    }

    #[test]
    fn single_sweeps_keep_the_diagram_valid() {
        let mut d = g2_pair();
        let c = d.push_off(0, "a2".into());
        d.twist(1, c, 2);
        d.twist(1, c, -3);
        let genus = d.connected_genus();
        let mut sweeps = 0;
        while let Some(b) = BigonSearch::new(&d).first() {
            let crossings = d.vertex_count();
            d.apply_sweeps(std::slice::from_ref(&b));
            sweeps += 1;
            d.check().unwrap();
            assert_eq!(d.vertex_count(), crossings - 2);
            assert_eq!(d.connected_genus(), genus);
        }
        assert!(sweeps > 0);
        assert_eq!(d.crossing_matrix()[0][c as usize], 16);
    }
}
