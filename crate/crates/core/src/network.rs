//! Planar directed networks in a disk: the combinatorial data model, the
//! skew form of the dual plabic graph, path enumeration with truncation,
//! quantum boundary measurements, the grassmannian measurement matrix and
//! the elementary moves M1-M3, R1-R3.
//!
//! The embedding is combinatorial: a rotation system (counterclockwise edge
//! order at every vertex), a left/right face on every edge, and the
//! counterclockwise order of boundary vertices.  Winding profiles of paths
//! are computed from the loop-closure construction: close the path from the
//! sink clockwise along the boundary back to the source and solve the jump
//! constraints `profile(right) - profile(left) = crossings` anchored at the
//! outer region.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{QgError, Result};
use crate::matrix::QuantumMatrix;
use crate::qtorus::{ExponentVector, QCoefficient, SkewForm, Torus, TorusElement};
use crate::rat::{rat, rat_int, Int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Black,
    White,
    Source,
    Sink,
}

impl VertexKind {
    pub fn is_boundary(self) -> bool {
        matches!(self, VertexKind::Source | VertexKind::Sink)
    }
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    pub boundary_pos: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub left_face: u32,
    pub right_face: u32,
}

/// Truncation policy for path enumeration: the maximal total Z-degree of a
/// path weight monomial, or unlimited (acyclic networks only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationPolicy {
    Unlimited,
    MaxDegree(u32),
}

impl TruncationPolicy {
    pub fn bound(&self) -> Option<u32> {
        match self {
            TruncationPolicy::Unlimited => None,
            TruncationPolicy::MaxDegree(d) => Some(*d),
        }
    }
}

/// A source-to-sink path: its edge sequence, self-crossing count and the
/// winding profile over faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub edges: Vec<usize>,
    pub crossings: usize,
    pub profile: BTreeMap<u32, i64>,
}

#[derive(Clone, Debug)]
pub struct Network {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<String>,
    rotation: Vec<Vec<usize>>,
    boundary: Vec<usize>, // vertex indices in ccw order
}

impl Network {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn faces(&self) -> &[String] {
        &self.faces
    }
    pub fn face_index(&self, name: &str) -> Result<u32> {
        self.faces
            .iter()
            .position(|f| f == name)
            .map(|i| i as u32)
            .ok_or_else(|| QgError::UnknownFace(name.to_string()))
    }
    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| QgError::InvalidArgument(format!("unknown vertex `{}`", id)))
    }
    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| QgError::InvalidArgument(format!("unknown edge `{}`", id)))
    }
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn rotation_of(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn sources(&self) -> Vec<usize> {
        self.boundary
            .iter()
            .copied()
            .filter(|v| self.vertices[*v].kind == VertexKind::Source)
            .collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.boundary
            .iter()
            .copied()
            .filter(|v| self.vertices[*v].kind == VertexKind::Sink)
            .collect()
    }

    fn out_edges(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.edges.len())
            .filter(|e| self.edges[*e].tail == v)
            .collect();
        out.sort_by(|a, b| self.edges[*a].id.cmp(&self.edges[*b].id));
        out
    }

    fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.head == v).count()
    }

    fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == v).count()
    }

    /// Faces seen looking out of `v` along the half-edge of `e`:
    /// (left-out, right-out).
    fn half_edge_sides(&self, v: usize, e: usize) -> (u32, u32) {
        let edge = &self.edges[e];
        if edge.tail == v {
            (edge.left_face, edge.right_face)
        } else {
            (edge.right_face, edge.left_face)
        }
    }

    /// Builds and validates.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        faces: Vec<String>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut boundary: Vec<(usize, usize)> = vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.boundary_pos.map(|p| (p, i)))
            .collect();
        boundary.sort();
        let boundary: Vec<usize> = boundary.into_iter().map(|(_, i)| i).collect();
        let net = Network {
            vertices,
            edges,
            faces,
            rotation,
            boundary,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(QgError::InvalidNetwork(m));
        // rotation lists must match incident edges
        for (v, rot) in self.rotation.iter().enumerate() {
            let mut incident: Vec<usize> = (0..self.edges.len())
                .filter(|e| self.edges[*e].tail == v || self.edges[*e].head == v)
                .collect();
            let mut listed = rot.clone();
            incident.sort_unstable();
            listed.sort_unstable();
            if incident != listed {
                return fail(format!(
                    "rotation at `{}` does not list its incident edges",
                    self.vertices[v].id
                ));
            }
            for e in rot {
                if self.edges[*e].tail == v && self.edges[*e].head == v {
                    return fail("self-loop edges are not supported".into());
                }
            }
        }
        // vertex degrees
        for (v, vert) in self.vertices.iter().enumerate() {
            let din = self.in_degree(v);
            let dout = self.out_degree(v);
            match vert.kind {
                VertexKind::Source => {
                    if din != 0 || dout != 1 {
                        return fail(format!("source `{}` must have one outgoing edge", vert.id));
                    }
                    if vert.boundary_pos.is_none() {
                        return fail(format!("source `{}` needs a boundary position", vert.id));
                    }
                }
                VertexKind::Sink => {
                    if din != 1 || dout != 0 {
                        return fail(format!("sink `{}` must have one incoming edge", vert.id));
                    }
                    if vert.boundary_pos.is_none() {
                        return fail(format!("sink `{}` needs a boundary position", vert.id));
                    }
                }
                VertexKind::Black => {
                    if !((din == 2 && dout == 1) || (din == 1 && dout == 1)) {
                        return fail(format!(
                            "black `{}` must have 2 in / 1 out (or be a middle vertex)",
                            vert.id
                        ));
                    }
                    if din + dout > 3 {
                        return Err(QgError::UnsupportedNetwork(format!(
                            "vertex `{}` has degree > 3",
                            vert.id
                        )));
                    }
                }
                VertexKind::White => {
                    if !((din == 1 && dout == 2) || (din == 1 && dout == 1)) {
                        return fail(format!(
                            "white `{}` must have 1 in / 2 out (or be a middle vertex)",
                            vert.id
                        ));
                    }
                    if din + dout > 3 {
                        return Err(QgError::UnsupportedNetwork(format!(
                            "vertex `{}` has degree > 3",
                            vert.id
                        )));
                    }
                }
            }
        }
        // gap consistency: around every internal vertex consecutive
        // half-edges must agree on the face between them.
        for (v, rot) in self.rotation.iter().enumerate() {
            if self.vertices[v].kind.is_boundary() || rot.len() < 2 {
                continue;
            }
            for k in 0..rot.len() {
                let h1 = rot[k];
                let h2 = rot[(k + 1) % rot.len()];
                let (l1, _) = self.half_edge_sides(v, h1);
                let (_, r2) = self.half_edge_sides(v, h2);
                if l1 != r2 {
                    return fail(format!(
                        "faces disagree in the gap after edge `{}` at `{}`",
                        self.edges[h1].id, self.vertices[v].id
                    ));
                }
            }
        }
        // boundary positions form 1..B
        let mut pos: Vec<usize> = self
            .vertices
            .iter()
            .filter_map(|v| v.boundary_pos)
            .collect();
        pos.sort_unstable();
        if pos != (1..=pos.len()).collect::<Vec<_>>() {
            return fail("boundary positions must be exactly 1..B".into());
        }
        // segment faces agree from both endpoints
        let b = self.boundary.len();
        for i in 0..b {
            let _ = self.segment_inner_face(i)?;
        }
        // Euler relation for the disk: internal vertices - edges + faces = 1
        let internal = self
            .vertices
            .iter()
            .filter(|v| !v.kind.is_boundary())
            .count();
        if internal as i64 - self.edges.len() as i64 + self.faces.len() as i64 != 1 {
            return fail(format!(
                "Euler relation violated: {} - {} + {} != 1",
                internal,
                self.edges.len(),
                self.faces.len()
            ));
        }
        Ok(())
    }

    /// The inner face adjacent to the boundary segment that starts at
    /// ccw-boundary index `i` (between boundary[i] and boundary[i+1]).
    fn segment_inner_face(&self, i: usize) -> Result<u32> {
        let b = self.boundary.len();
        let v1 = self.boundary[i];
        let v2 = self.boundary[(i + 1) % b];
        // post-segment of v1 is seen by right-out of its half-edge,
        // pre-segment of v2 by left-out.
        let e1 = self.rotation[v1]
            .first()
            .copied()
            .ok_or_else(|| QgError::InvalidNetwork("boundary vertex without edge".into()))?;
        let e2 = self.rotation[v2]
            .first()
            .copied()
            .ok_or_else(|| QgError::InvalidNetwork("boundary vertex without edge".into()))?;
        let (_, r1) = self.half_edge_sides(v1, e1);
        let (l2, _) = self.half_edge_sides(v2, e2);
        if r1 != l2 {
            return Err(QgError::InvalidNetwork(format!(
                "boundary segment between `{}` and `{}` sees two faces",
                self.vertices[v1].id, self.vertices[v2].id
            )));
        }
        Ok(r1)
    }

    // -----------------------------------------------------------------
    // Skew form from the plabic dual graph
    // -----------------------------------------------------------------

    /// Dual-graph skew form: around every internal vertex one dual arc per
    /// half-edge, counterclockwise around black vertices, clockwise around
    /// white; `<t,f> = (#(t->f) - #(f->t)) / 2`.
    pub fn plabic_form(&self) -> Result<SkewForm> {
        let nf = self.faces.len();
        let mut form = SkewForm::zero(nf);
        for (v, vert) in self.vertices.iter().enumerate() {
            let ccw_arcs = match vert.kind {
                VertexKind::Black => true,
                VertexKind::White => false,
                _ => continue,
            };
            if self.rotation[v].len() != 3 {
                // middle vertices contribute cancelling arcs; skip them
                if self.rotation[v].len() == 2 {
                    continue;
                }
                return Err(QgError::UnsupportedNetwork(format!(
                    "internal vertex `{}` is not trivalent",
                    vert.id
                )));
            }
            for &e in &self.rotation[v] {
                let (gap_after, gap_before) = self.half_edge_sides(v, e);
                // black: arc gap_before -> gap_after (ccw); white: reversed
                let (from, to) = if ccw_arcs {
                    (gap_before, gap_after)
                } else {
                    (gap_after, gap_before)
                };
                if from != to {
                    form.add_pair(from as usize, to as usize, rat(1, 2));
                }
            }
        }
        Ok(form)
    }

    /// The canonical torus of this network: generators = faces, form from
    /// the plabic rule.
    pub fn torus(&self) -> Result<Arc<Torus>> {
        Ok(Torus::new(self.faces.clone(), self.plabic_form()?))
    }

    // -----------------------------------------------------------------
    // Winding profiles
    // -----------------------------------------------------------------

    /// Solves `profile(right) - profile(left) = jump` constraints anchored at
    /// the outer region.  `edge_mult[e]` counts forward traversals of edge e;
    /// `closure` optionally adds the boundary arc from sink position to
    /// source position (clockwise).
    fn solve_profile(
        &self,
        edge_mult: &BTreeMap<usize, i64>,
        closure: Option<(usize, usize)>, // (source boundary idx, sink boundary idx)
    ) -> Result<BTreeMap<u32, i64>> {
        let nf = self.faces.len();
        let outer = nf; // synthetic node
        // adjacency: (a, b, jump) meaning profile[b] - profile[a] = jump
        let mut cons: Vec<(usize, usize, i64)> = Vec::new();
        for (e, edge) in self.edges.iter().enumerate() {
            let m = edge_mult.get(&e).copied().unwrap_or(0);
            cons.push((edge.left_face as usize, edge.right_face as usize, m));
        }
        if let Some((src_pos, snk_pos)) = closure {
            // clockwise from sink back to source: segments snk-1, snk-2, ...
            let b = self.boundary.len();
            let mut i = snk_pos;
            while i != src_pos {
                let seg = (i + b - 1) % b; // segment between boundary[i-1] and boundary[i]
                let inner = self.segment_inner_face(seg)? as usize;
                // walking clockwise: left = outer, right = inner
                cons.push((outer, inner, 1));
                i = (i + b - 1) % b;
            }
        }
        // BFS solve
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf + 1];
        for (a, b, j) in &cons {
            adj[*a].push((*b, *j));
            adj[*b].push((*a, -j));
        }
        let mut val: Vec<Option<i64>> = vec![None; nf + 1];
        val[outer] = Some(0);
        let mut queue = VecDeque::new();
        queue.push_back(outer);
        while let Some(x) = queue.pop_front() {
            let vx = val[x].unwrap();
            for (y, j) in &adj[x] {
                let want = vx + j;
                match val[*y] {
                    None => {
                        val[*y] = Some(want);
                        queue.push_back(*y);
                    }
                    Some(have) => {
                        if have != want {
                            return Err(QgError::InvalidNetwork(
                                "inconsistent winding constraints".into(),
                            ));
                        }
                    }
                }
            }
        }
        let mut out = BTreeMap::new();
        for f in 0..nf {
            let v = val[f].ok_or_else(|| {
                QgError::InvalidNetwork(format!("face `{}` unreachable", self.faces[f]))
            })?;
            if v != 0 {
                out.insert(f as u32, v);
            }
        }
        Ok(out)
    }

    /// Winding profile of a directed closed walk given by edge multiplicities.
    pub fn cycle_profile(&self, edge_mult: &BTreeMap<usize, i64>) -> Result<BTreeMap<u32, i64>> {
        self.solve_profile(edge_mult, None)
    }

    /// All simple directed cycles (edge index sequences), capped.  Each cycle
    /// is reported once, rooted at its minimal vertex.
    fn simple_cycles(&self) -> Result<Vec<Vec<usize>>> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.vertices.len() {
            if self.vertices[start].kind.is_boundary() {
                continue;
            }
            let mut stack: Vec<(usize, Vec<usize>, BTreeSet<usize>)> =
                vec![(start, Vec::new(), BTreeSet::from([start]))];
            while let Some((v, path, visited)) = stack.pop() {
                for e in self.out_edges(v) {
                    let w = self.edges[e].head;
                    if w == start {
                        let mut c = path.clone();
                        c.push(e);
                        cycles.push(c);
                        if cycles.len() > 10_000 {
                            return Err(QgError::UnsupportedNetwork(
                                "too many directed cycles".into(),
                            ));
                        }
                        continue;
                    }
                    if w <= start || visited.contains(&w) || self.vertices[w].kind.is_boundary() {
                        continue;
                    }
                    let mut p2 = path.clone();
                    p2.push(e);
                    let mut vis2 = visited.clone();
                    vis2.insert(w);
                    stack.push((w, p2, vis2));
                }
            }
        }
        Ok(cycles)
    }

    /// Checks that every simple directed cycle strictly encloses positive
    /// total degree, so degree-truncated series are finite.
    pub fn validate_cycles(&self) -> Result<()> {
        for cycle in self.simple_cycles()? {
            let mut mult = BTreeMap::new();
            for e in cycle {
                *mult.entry(e).or_insert(0) += 1;
            }
            let profile = self.cycle_profile(&mult)?;
            let total: i64 = profile.values().sum();
            if total <= 0 {
                return Err(QgError::InvalidNetwork(
                    "a directed cycle does not enclose positive degree".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn is_acyclic(&self) -> bool {
        matches!(self.simple_cycles(), Ok(c) if c.is_empty())
    }

    // -----------------------------------------------------------------
    // Path enumeration
    // -----------------------------------------------------------------

    /// Self-crossing count of an edge walk, exact in parity (and exact for
    /// the consistent strand order used here).
    fn crossing_count(&self, edges: &[usize]) -> usize {
        // copy index of each traversal along its edge, by traversal time
        let mut seen: BTreeMap<usize, i64> = BTreeMap::new();
        let copies: Vec<i64> = edges
            .iter()
            .map(|e| {
                let c = seen.entry(*e).or_insert(0);
                let r = *c;
                *c += 1;
                r
            })
            .collect();
        let total: BTreeMap<usize, i64> = seen;
        let mut crossings = 0usize;
        // transitions at each internal vertex: (in edge pos t, out edge pos t+1)
        let mut per_vertex: BTreeMap<usize, Vec<((usize, i64), (usize, i64))>> = BTreeMap::new();
        for t in 0..edges.len().saturating_sub(1) {
            let v = self.edges[edges[t]].head;
            per_vertex
                .entry(v)
                .or_default()
                .push(((edges[t], copies[t]), (edges[t + 1], copies[t + 1])));
        }
        for (v, transitions) in per_vertex {
            if transitions.len() < 2 {
                continue;
            }
            // circle of sub-slots in ccw order
            let mut slot_of: BTreeMap<(usize, i64), usize> = BTreeMap::new();
            let mut pos = 0usize;
            for &e in &self.rotation[v] {
                let k = total.get(&e).copied().unwrap_or(0);
                if k == 0 {
                    // unused edges still occupy one slot width; irrelevant
                    pos += 1;
                    continue;
                }
                let at_tail = self.edges[e].tail == v;
                let order: Vec<i64> = if at_tail {
                    (0..k).collect()
                } else {
                    (0..k).rev().collect()
                };
                for c in order {
                    slot_of.insert((e, c), pos);
                    pos += 1;
                }
            }
            let chords: Vec<(usize, usize)> = transitions
                .iter()
                .map(|(i, o)| (slot_of[i], slot_of[o]))
                .collect();
            for i in 0..chords.len() {
                for j in (i + 1)..chords.len() {
                    let (a1, b1) = chords[i];
                    let (a2, b2) = chords[j];
                    let between = |x: usize, lo: usize, hi: usize| -> bool {
                        // x strictly inside the ccw arc lo -> hi
                        if lo < hi {
                            x > lo && x < hi
                        } else {
                            x > lo || x < hi
                        }
                    };
                    if between(a2, a1, b1) != between(b2, a1, b1) {
                        crossings += 1;
                    }
                }
            }
        }
        crossings
    }

    /// All directed source-to-sink paths whose winding profile has total
    /// degree within the policy, in lexicographic edge-id order.
    pub fn enumerate_paths(
        &self,
        source: usize,
        sink: usize,
        policy: TruncationPolicy,
    ) -> Result<Vec<Path>> {
        if self.vertices[source].kind != VertexKind::Source {
            return Err(QgError::InvalidArgument(format!(
                "`{}` is not a source",
                self.vertices[source].id
            )));
        }
        if self.vertices[sink].kind != VertexKind::Sink {
            return Err(QgError::InvalidArgument(format!(
                "`{}` is not a sink",
                self.vertices[sink].id
            )));
        }
        if policy.bound().is_none() && !self.is_acyclic() {
            return Err(QgError::InvalidArgument(
                "unlimited enumeration needs an acyclic network".into(),
            ));
        }
        if policy.bound().is_some() {
            self.validate_cycles()?;
        }
        let max_mult = policy.bound().map(|d| d as i64 + 1);
        let src_pos = self.boundary.iter().position(|v| *v == source).unwrap();
        let snk_pos = self.boundary.iter().position(|v| *v == sink).unwrap();

        let mut results: Vec<Path> = Vec::new();
        // iterative DFS preserving lexicographic order
        let mut walk: Vec<usize> = Vec::new();
        let mut mult: BTreeMap<usize, i64> = BTreeMap::new();
        // frames: (vertex, candidate out-edges, next index)
        let mut frames: Vec<(Vec<usize>, usize)> = vec![(self.out_edges(source), 0)];
        while let Some((cands, idx)) = frames.last_mut() {
            if *idx >= cands.len() {
                frames.pop();
                if let Some(e) = walk.pop() {
                    *mult.get_mut(&e).unwrap() -= 1;
                }
                continue;
            }
            let e = cands[*idx];
            *idx += 1;
            if let Some(cap) = max_mult {
                if mult.get(&e).copied().unwrap_or(0) >= cap + 1 {
                    continue;
                }
            }
            walk.push(e);
            *mult.entry(e).or_insert(0) += 1;
            let head = self.edges[e].head;
            if head == sink {
                let profile = self.solve_profile(&mult, Some((src_pos, snk_pos)))?;
                let total: i64 = profile.values().sum();
                let keep = match policy.bound() {
                    None => true,
                    Some(d) => total <= d as i64,
                };
                if keep {
                    results.push(Path {
                        edges: walk.clone(),
                        crossings: self.crossing_count(&walk),
                        profile,
                    });
                }
                // a sink has no outgoing edges: backtrack
                walk.pop();
                *mult.get_mut(&e).unwrap() -= 1;
                continue;
            }
            if self.vertices[head].kind.is_boundary() {
                // a different sink: dead end
                walk.pop();
                *mult.get_mut(&e).unwrap() -= 1;
                continue;
            }
            frames.push((self.out_edges(head), 0));
        }
        // lexicographic order on edge-id sequences
        results.sort_by(|a, b| {
            let ka: Vec<&str> = a.edges.iter().map(|e| self.edges[*e].id.as_str()).collect();
            let kb: Vec<&str> = b.edges.iter().map(|e| self.edges[*e].id.as_str()).collect();
            ka.cmp(&kb)
        });
        Ok(results)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| {
                let kind = match v.kind {
                    VertexKind::Black => "black",
                    VertexKind::White => "white",
                    VertexKind::Source => "source",
                    VertexKind::Sink => "sink",
                };
                match v.boundary_pos {
                    Some(p) => serde_json::json!({"id": v.id, "kind": kind, "boundary_pos": p}),
                    None => serde_json::json!({"id": v.id, "kind": kind}),
                }
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "id": e.id,
                    "tail": self.vertices[e.tail].id,
                    "head": self.vertices[e.head].id,
                    "left_face": self.faces[e.left_face as usize],
                    "right_face": self.faces[e.right_face as usize],
                })
            })
            .collect();
        let mut rotation = serde_json::Map::new();
        for (v, rot) in self.rotation.iter().enumerate() {
            rotation.insert(
                self.vertices[v].id.clone(),
                serde_json::Value::Array(
                    rot.iter()
                        .map(|e| serde_json::Value::String(self.edges[*e].id.clone()))
                        .collect(),
                ),
            );
        }
        serde_json::json!({
            "vertices": vertices,
            "edges": edges,
            "faces": self.faces,
            "rotation": rotation,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let vs = value
            .get("vertices")
            .and_then(|v| v.as_array())
            .ok_or_else(|| QgError::InvalidArgument("missing vertices".into()))?;
        let mut vertices = Vec::new();
        for v in vs {
            let id = v
                .get("id")
                .and_then(|x| x.as_str())
                .ok_or_else(|| QgError::InvalidArgument("vertex id".into()))?
                .to_string();
            let kind = match v.get("kind").and_then(|x| x.as_str()) {
                Some("black") => VertexKind::Black,
                Some("white") => VertexKind::White,
                Some("source") => VertexKind::Source,
                Some("sink") => VertexKind::Sink,
                _ => return Err(QgError::InvalidArgument("vertex kind".into())),
            };
            let boundary_pos = v
                .get("boundary_pos")
                .and_then(|x| x.as_u64())
                .map(|x| x as usize);
            vertices.push(Vertex {
                id,
                kind,
                boundary_pos,
            });
        }
        let faces: Vec<String> = value
            .get("faces")
            .and_then(|f| f.as_array())
            .ok_or_else(|| QgError::InvalidArgument("missing faces".into()))?
            .iter()
            .map(|f| f.as_str().unwrap_or_default().to_string())
            .collect();
        let vid = |id: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| QgError::InvalidArgument(format!("unknown vertex `{}`", id)))
        };
        let fid = |id: &str| -> Result<u32> {
            faces
                .iter()
                .position(|f| f == id)
                .map(|i| i as u32)
                .ok_or_else(|| QgError::UnknownFace(id.to_string()))
        };
        let es = value
            .get("edges")
            .and_then(|v| v.as_array())
            .ok_or_else(|| QgError::InvalidArgument("missing edges".into()))?;
        let mut edges = Vec::new();
        for e in es {
            let gets = |k: &str| -> Result<&str> {
                e.get(k)
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| QgError::InvalidArgument(format!("edge field {k}")))
            };
            edges.push(Edge {
                id: gets("id")?.to_string(),
                tail: vid(gets("tail")?)?,
                head: vid(gets("head")?)?,
                left_face: fid(gets("left_face")?)?,
                right_face: fid(gets("right_face")?)?,
            });
        }
        let rot_obj = value
            .get("rotation")
            .and_then(|r| r.as_object())
            .ok_or_else(|| QgError::InvalidArgument("missing rotation".into()))?;
        let mut rotation = vec![Vec::new(); vertices.len()];
        for (k, arr) in rot_obj {
            let v = vid(k)?;
            let list = arr
                .as_array()
                .ok_or_else(|| QgError::InvalidArgument("rotation entry".into()))?;
            let mut r = Vec::new();
            for eid in list {
                let eid = eid
                    .as_str()
                    .ok_or_else(|| QgError::InvalidArgument("rotation edge id".into()))?;
                let idx = edges
                    .iter()
                    .position(|e| e.id == eid)
                    .ok_or_else(|| QgError::InvalidArgument(format!("unknown edge `{}`", eid)))?;
                r.push(idx);
            }
            rotation[v] = r;
        }
        Network::new(vertices, edges, faces, rotation)
    }
}

// ---------------------------------------------------------------------------
// Weighted networks and measurements
// ---------------------------------------------------------------------------

/// A network together with a face-weight assignment over a fixed base torus.
/// Fresh networks use the canonical weighting (each face its own generator);
/// elementary moves produce TorusElement-valued weights over the same torus.
#[derive(Clone, Debug)]
pub struct WeightedNetwork {
    pub net: Network,
    pub torus: Arc<Torus>,
    /// face name -> weight value over `torus`
    pub values: BTreeMap<String, TorusElement>,
}

impl WeightedNetwork {
    /// Canonical weighting: the base torus is the network's own plabic torus
    /// and each face is its generator.
    pub fn canonical(net: Network) -> Result<Self> {
        let torus = net.torus()?;
        let values = net
            .faces()
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), TorusElement::generator(&torus, i as u32)))
            .collect();
        Ok(WeightedNetwork { net, torus, values })
    }

    fn value_of(&self, face_idx: u32) -> Result<&TorusElement> {
        let name = &self.net.faces()[face_idx as usize];
        self.values
            .get(name)
            .ok_or_else(|| QgError::UnknownFace(name.clone()))
    }

    /// Multilinear Weyl power of a face value; negative powers expand the
    /// reciprocal as a truncated series when the value is not a monomial.
    fn weyl_pow(&self, v: &TorusElement, k: i64, policy: TruncationPolicy) -> Result<TorusElement> {
        if k >= 0 {
            let mut acc = TorusElement::one(&self.torus);
            for _ in 0..k {
                acc = acc.weyl_mul(v)?;
            }
            return Ok(acc);
        }
        let recip = self.weyl_reciprocal(v, policy)?;
        let mut acc = TorusElement::one(&self.torus);
        for _ in 0..(-k) {
            acc = acc.weyl_mul(&recip)?;
        }
        Ok(acc)
    }

    fn weyl_reciprocal(
        &self,
        v: &TorusElement,
        policy: TruncationPolicy,
    ) -> Result<TorusElement> {
        if v.num_terms() == 1 {
            let (ev, c) = v.terms().next().unwrap();
            return Ok(TorusElement::monomial(&self.torus, ev.neg()).scale(&c.invert()?));
        }
        // leading term = unique minimal total degree
        let mut lead: Option<(&ExponentVector, &QCoefficient)> = None;
        for (ev, c) in v.terms() {
            match &lead {
                None => lead = Some((ev, c)),
                Some((lv, _)) => {
                    if ev.total_degree() < lv.total_degree() {
                        lead = Some((ev, c));
                    }
                }
            }
        }
        let (lv, lc) = lead.ok_or_else(|| QgError::NotInvertible("zero weight".into()))?;
        let lead_deg = lv.total_degree();
        for (ev, _) in v.terms() {
            if ev != lv && ev.total_degree() <= lead_deg {
                return Err(QgError::NotInvertible(
                    "weight has no strict leading term".into(),
                ));
            }
        }
        let Some(bound) = policy.bound() else {
            return Err(QgError::NotInvertible(
                "series reciprocal needs a degree bound".into(),
            ));
        };
        let lead_inv = TorusElement::monomial(&self.torus, lv.neg()).scale(&lc.invert()?);
        // v = lead (1 + x), x strictly positive degree
        let x = lead_inv.weyl_mul(v)?.sub(&TorusElement::one(&self.torus))?;
        let maxd = rat_int(bound as i64) + lead_deg.clone().abs() * rat_int(4) + rat_int(4);
        let mut acc = TorusElement::one(&self.torus);
        let mut term = TorusElement::one(&self.torus);
        loop {
            term = term.weyl_mul(&x)?.neg().truncate_degree(&maxd);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        acc.weyl_mul(&lead_inv)
    }

    /// Weight of a path: the Weyl-ordered product of face values with
    /// winding multiplicities.
    pub fn path_weight(&self, p: &Path, policy: TruncationPolicy) -> Result<TorusElement> {
        let mut acc = TorusElement::one(&self.torus);
        for (f, m) in &p.profile {
            let v = self.value_of(*f)?;
            acc = acc.weyl_mul(&self.weyl_pow(v, *m, policy)?)?;
        }
        if let Some(d) = policy.bound() {
            acc = acc.truncate_degree(&rat_int(d as i64));
        }
        Ok(acc)
    }

    /// Quantum boundary measurement: sum over paths of (-1)^cross w(P).
    pub fn boundary_measurement(
        &self,
        source: usize,
        sink: usize,
        policy: TruncationPolicy,
    ) -> Result<TorusElement> {
        let mut acc = TorusElement::zero(&self.torus);
        for p in self.net.enumerate_paths(source, sink, policy)? {
            let w = self.path_weight(&p, policy)?;
            acc = if p.crossings % 2 == 0 {
                acc.add(&w)?
            } else {
                acc.sub(&w)?
            };
        }
        if let Some(d) = policy.bound() {
            acc = acc.truncate_degree(&rat_int(d as i64));
        }
        Ok(acc)
    }

    /// The m x n matrix of measurements: rows = sinks in ccw order, columns =
    /// sources in ccw order.
    pub fn measurement_matrix(&self, policy: TruncationPolicy) -> Result<QuantumMatrix> {
        let sources = self.ccw_sources();
        let sinks = self.ccw_sinks();
        let mut m = QuantumMatrix::zero(&self.torus, sinks.len(), sources.len());
        for (i, snk) in sinks.iter().enumerate() {
            for (j, src) in sources.iter().enumerate() {
                m.set(i, j, self.boundary_measurement(*src, *snk, policy)?);
            }
        }
        Ok(m)
    }

    fn ccw_sources(&self) -> Vec<usize> {
        self.net
            .boundary()
            .iter()
            .copied()
            .filter(|v| self.net.vertices()[*v].kind == VertexKind::Source)
            .collect()
    }

    fn ccw_sinks(&self) -> Vec<usize> {
        self.net
            .boundary()
            .iter()
            .copied()
            .filter(|v| self.net.vertices()[*v].kind == VertexKind::Sink)
            .collect()
    }

    /// ord_N(b): the number of sources strictly before b in ccw order, plus
    /// 1/2 if b itself is a source.
    pub fn ord(&self, boundary_idx: usize) -> Rat {
        let mut sigma = 0i64;
        for i in 0..boundary_idx {
            if self.net.vertices()[self.net.boundary()[i]].kind == VertexKind::Source {
                sigma += 1;
            }
        }
        let v = self.net.boundary()[boundary_idx];
        if self.net.vertices()[v].kind == VertexKind::Source {
            rat_int(sigma) + rat(1, 2)
        } else {
            rat_int(sigma)
        }
    }

    /// The (m+n) x n grassmannian boundary measurement matrix.
    pub fn grassmannian_matrix(&self, policy: TruncationPolicy) -> Result<QuantumMatrix> {
        let b = self.net.boundary().len();
        let sources = self.ccw_sources();
        let n = sources.len();
        let mut g = QuantumMatrix::zero(&self.torus, b, n);
        for j in 0..b {
            let vj = self.net.boundary()[j];
            let ordj = self.ord(j);
            match self.net.vertices()[vj].kind {
                VertexKind::Source => {
                    for (i, src) in sources.iter().enumerate() {
                        if *src == vj {
                            g.set(
                                j,
                                i,
                                TorusElement::scalar(
                                    &self.torus,
                                    QCoefficient::q_power(-ordj.clone()),
                                ),
                            );
                        }
                    }
                }
                VertexKind::Sink => {
                    // integer order for sinks
                    let sigma = ordj.to_integer();
                    for (i, src) in sources.iter().enumerate() {
                        let meas = self.boundary_measurement(*src, vj, policy)?;
                        if meas.is_zero() {
                            continue;
                        }
                        let parity = (Int::from(i as i64 + 1) + &sigma) % Int::from(2);
                        let sign = if parity.is_zero() { 1 } else { -1 };
                        let c = QCoefficient::term(
                            -Rat::from_integer(sigma.clone()),
                            Int::from(sign),
                        );
                        g.set(j, i, meas.scale(&c));
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok(g)
    }
}

// ---------------------------------------------------------------------------
// Elementary moves
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    M1,
    M2,
    M3,
    R1,
    R2,
    R3,
}

impl std::str::FromStr for Move {
    type Err = QgError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "M1" => Ok(Move::M1),
            "M2" => Ok(Move::M2),
            "M3" => Ok(Move::M3),
            "R1" => Ok(Move::R1),
            "R2" => Ok(Move::R2),
            "R3" => Ok(Move::R3),
            other => Err(QgError::InvalidArgument(format!("unknown move `{other}`"))),
        }
    }
}

impl WeightedNetwork {
    /// Applies an elementary move.  `location` names a face (M1, R1), an
    /// edge (M2, M3 insertion) or a vertex (M3 removal, R2, R3).
    pub fn apply_move(
        &self,
        mv: Move,
        location: &str,
        policy: TruncationPolicy,
    ) -> Result<WeightedNetwork> {
        match mv {
            Move::M1 => self.square_move(location, policy),
            Move::M2 => self.rotate_unicolored_edge(location),
            Move::M3 => self.middle_vertex(location),
            Move::R1 => self.parallel_edge_reduction(location, policy),
            Move::R2 => self.prune_dead_branch(location),
            Move::R3 => self.remove_isolated_pair(location),
        }
    }

    fn rebuild(
        &self,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        faces: Vec<String>,
        rotation: Vec<Vec<usize>>,
        values: BTreeMap<String, TorusElement>,
    ) -> Result<WeightedNetwork> {
        let net = Network::new(vertices, edges, faces, rotation)?;
        Ok(WeightedNetwork {
            net,
            torus: self.torus.clone(),
            values,
        })
    }

    /// 1 + w, in the multilinear Weyl sense.
    fn one_plus(&self, w: &TorusElement) -> Result<TorusElement> {
        TorusElement::one(&self.torus).add(w)
    }

    /// Geometric series w (1 + w)^{-1} = sum_{j>=1} (-1)^{j-1} w^j, truncated.
    fn geometric(&self, w: &TorusElement, policy: TruncationPolicy) -> Result<TorusElement> {
        self.weyl_reciprocal(&self.one_plus(w)?, policy)?.weyl_mul(w)
    }

    /// The square move: a quadrilateral face whose four trivalent corners
    /// alternate in color.  Colors flip, the perfect orientation of the four
    /// square edges is recomputed, and the five adjacent weights transform
    /// (out-neighbors binomially, in-neighbors by the alternating series).
    fn square_move(&self, face: &str, policy: TruncationPolicy) -> Result<WeightedNetwork> {
        let fidx = self.net.face_index(face)?;
        let mut square_edges: Vec<usize> = (0..self.net.edges().len())
            .filter(|e| {
                let ed = &self.net.edges()[*e];
                ed.left_face == fidx || ed.right_face == fidx
            })
            .collect();
        square_edges.sort_unstable();
        if square_edges.len() != 4 {
            return Err(QgError::MoveInapplicable(format!(
                "face `{face}` is not a quadrilateral"
            )));
        }
        let mut corner_set = BTreeSet::new();
        for &e in &square_edges {
            corner_set.insert(self.net.edges()[e].tail);
            corner_set.insert(self.net.edges()[e].head);
        }
        let corners: Vec<usize> = corner_set.into_iter().collect();
        if corners.len() != 4 {
            return Err(QgError::MoveInapplicable(
                "square face must have four distinct corners".into(),
            ));
        }
        for &v in &corners {
            let k = self.net.vertices()[v].kind;
            if k.is_boundary() || self.net.rotation[v].len() != 3 {
                return Err(QgError::MoveInapplicable(
                    "square corners must be internal and trivalent".into(),
                ));
            }
        }
        // alternation check: endpoints of each square edge differ in color
        for &e in &square_edges {
            let ed = &self.net.edges()[e];
            if self.net.vertices()[ed.tail].kind == self.net.vertices()[ed.head].kind {
                return Err(QgError::MoveInapplicable(
                    "square corners must alternate in color".into(),
                ));
            }
        }
        let mut vertices = self.net.vertices.clone();
        let mut edges = self.net.edges.clone();
        // flip colors
        for &v in &corners {
            vertices[v].kind = match vertices[v].kind {
                VertexKind::Black => VertexKind::White,
                VertexKind::White => VertexKind::Black,
                k => k,
            };
        }
        // re-orient square edges so the flipped colors are perfectly oriented,
        // external legs unchanged
        let assignments = (0..(1u32 << 4)).filter_map(|mask| {
            let mut trial = edges.clone();
            for (b, &e) in square_edges.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    let ed = &mut trial[e];
                    std::mem::swap(&mut ed.tail, &mut ed.head);
                    std::mem::swap(&mut ed.left_face, &mut ed.right_face);
                }
            }
            // check degrees at the four corners
            for &v in &corners {
                let din = trial.iter().filter(|e| e.head == v).count();
                let dout = trial.iter().filter(|e| e.tail == v).count();
                let ok = match vertices[v].kind {
                    VertexKind::Black => din == 2 && dout == 1,
                    VertexKind::White => din == 1 && dout == 2,
                    _ => false,
                };
                if !ok {
                    return None;
                }
            }
            Some((mask, trial))
        });
        let Some((_, new_edges)) = assignments.min_by_key(|(m, _)| *m) else {
            return Err(QgError::MoveInapplicable(
                "no perfect orientation restores the square".into(),
            ));
        };
        edges = new_edges;
        // weight transforms
        let form = self.net.plabic_form()?;
        let w_eps = self.value_of(fidx)?.clone();
        let mut values = self.values.clone();
        let eps_name = self.net.faces()[fidx as usize].clone();
        values.insert(eps_name, self.weyl_reciprocal(&w_eps, policy)?);
        let mut neighbors = BTreeSet::new();
        for &e in &square_edges {
            let ed = &self.net.edges()[e];
            neighbors.insert(if ed.left_face == fidx {
                ed.right_face
            } else {
                ed.left_face
            });
        }
        for f in neighbors {
            let s = form.get(fidx as usize, f as usize).clone();
            let name = self.net.faces()[f as usize].clone();
            let old = self.value_of(f)?.clone();
            let new = if s > Rat::zero() {
                old.weyl_mul(&self.one_plus(&w_eps)?)?
            } else if s < Rat::zero() {
                old.weyl_mul(&self.geometric(&w_eps, policy)?)?
            } else {
                return Err(QgError::MoveInapplicable(
                    "square neighbor does not pair with the square face".into(),
                ));
            };
            let new = match policy.bound() {
                Some(d) => new.truncate_degree(&rat_int(d as i64)),
                None => new,
            };
            values.insert(name, new);
        }
        self.rebuild(
            vertices,
            edges,
            self.net.faces.clone(),
            self.net.rotation.clone(),
            values,
        )
    }

    /// M2: rotates the edge between two same-colored trivalent vertices
    /// (contraction immediately followed by the complementary expansion).
    /// Face weights are unchanged.
    fn rotate_unicolored_edge(&self, edge: &str) -> Result<WeightedNetwork> {
        let e = self.net.edge_index(edge)?;
        let (u, v) = (self.net.edges()[e].tail, self.net.edges()[e].head);
        let ku = self.net.vertices()[u].kind;
        let kv = self.net.vertices()[v].kind;
        if ku != kv || ku.is_boundary() {
            return Err(QgError::MoveInapplicable(
                "M2 needs an edge between two internal vertices of one color".into(),
            ));
        }
        if self.net.rotation[u].len() != 3 || self.net.rotation[v].len() != 3 {
            return Err(QgError::MoveInapplicable(
                "M2 endpoints must be trivalent".into(),
            ));
        }
        // legs in ccw order after e
        let legs = |w: usize| -> Vec<usize> {
            let rot = &self.net.rotation[w];
            let p = rot.iter().position(|x| *x == e).unwrap();
            vec![rot[(p + 1) % 3], rot[(p + 2) % 3]]
        };
        let lu = legs(u); // [u1, u2]
        let lv = legs(v); // [v1, v2]
        // merged ccw circle is [u1, u2, v1, v2]; the alternative split pairs
        // (u2, v1) at one endpoint and (v2, u1) at the other.
        let mut edges = self.net.edges.clone();
        let mut rotation = self.net.rotation.clone();
        // Reattach: u keeps (v2-side? ) -- we move legs: new endpoint A has
        // legs (u2, v1), endpoint B has legs (v2, u1).  Reuse vertices u, v:
        // u := A, v := B.
        let move_leg = |edges: &mut Vec<Edge>, leg: usize, from: usize, to: usize| {
            if edges[leg].tail == from {
                edges[leg].tail = to;
            } else {
                edges[leg].head = to;
            }
        };
        // u keeps u2, gains v1; v keeps v2, gains u1.
        move_leg(&mut edges, lv[0], v, u); // v1 -> u
        move_leg(&mut edges, lu[0], u, v); // u1 -> v
        // rotations: at u: [e, u2, v1], at v: [e, v2, u1]
        rotation[u] = vec![e, lu[1], lv[0]];
        rotation[v] = vec![e, lv[1], lu[0]];
        // the shared edge now separates the two previously-unseparated gaps:
        // faces between (u1-side) and (v1-side).
        // gap names from the merged circle [u1, u2, v1, v2]:
        // F1 between u1,u2; F2 between u2,v1; F3 between v1,v2; F4 between v2,u1.
        let (f4, _) = self.net.half_edge_sides(u, lu[0]); // left-out of u1 = gap after u1 = F1
        let f1 = f4;
        let (_, f1b) = self.net.half_edge_sides(u, lu[1]); // right-out of u2 = gap before u2 = F1
        if f1 != f1b {
            return Err(QgError::MoveInapplicable("inconsistent gaps at u".into()));
        }
        let (f3, _) = self.net.half_edge_sides(v, lv[0]); // gap after v1 = F3
        // new edge separates F1 (on u1/u2 corner ... ) and F3.
        // orientation of e: whichever direction makes both endpoints valid.
        let mut ok_dirs = Vec::new();
        for flip in [false, true] {
            let mut trial = edges.clone();
            if flip {
                let ed = &mut trial[e];
                std::mem::swap(&mut ed.tail, &mut ed.head);
            }
            let valid = [u, v].iter().all(|w| {
                let din = trial.iter().filter(|x| x.head == *w).count();
                let dout = trial.iter().filter(|x| x.tail == *w).count();
                match self.net.vertices()[*w].kind {
                    VertexKind::Black => din == 2 && dout == 1,
                    VertexKind::White => din == 1 && dout == 2,
                    _ => false,
                }
            });
            if valid {
                ok_dirs.push((flip, trial));
            }
        }
        let Some((_, mut edges)) = ok_dirs.into_iter().next() else {
            return Err(QgError::MoveInapplicable(
                "no orientation of the rotated edge fits".into(),
            ));
        };
        // set left/right of the rotated edge: walking tail->head, F1 and F3
        // sit on the sides of the old gaps; determine via the gap rule at the
        // tail: the face after e (ccw) at its tail is e.left.
        {
            let ed = edges[e].clone();
            let t = ed.tail;
            let rot = &rotation[t];
            let p = rot.iter().position(|x| *x == e).unwrap();
            let next = rot[(p + 1) % rot.len()];
            // gap after e at tail = left face of e; the gap neighbor is the
            // right-out of `next` removed... we know the two candidate faces:
            let (want_l, want_r);
            // the gap after e at the tail equals the right-out of the next
            // half-edge; compute from the *new* attachment using old sides of
            // the legs (legs kept their face sides).
            let (_, r_next) = if edges[next].tail == t {
                (edges[next].left_face, edges[next].right_face)
            } else {
                (edges[next].right_face, edges[next].left_face)
            };
            if r_next == f1 {
                want_l = f1;
                want_r = f3;
            } else {
                want_l = f3;
                want_r = f1;
            }
            edges[e].left_face = want_l;
            edges[e].right_face = want_r;
        }
        self.rebuild(
            self.net.vertices.clone(),
            edges,
            self.net.faces.clone(),
            rotation,
            self.values.clone(),
        )
    }

    /// M3: inserts a middle (degree-2) vertex on an edge, or removes one.
    /// `location` is an edge id (insert) or a vertex id (remove).
    fn middle_vertex(&self, location: &str) -> Result<WeightedNetwork> {
        if let Ok(v) = self.net.vertex_index(location) {
            // removal
            let vert = &self.net.vertices()[v];
            if vert.kind.is_boundary() || self.net.rotation[v].len() != 2 {
                return Err(QgError::MoveInapplicable(
                    "M3 removal needs an internal degree-2 vertex".into(),
                ));
            }
            let ein = (0..self.net.edges().len())
                .find(|e| self.net.edges()[*e].head == v)
                .ok_or_else(|| QgError::MoveInapplicable("middle vertex without input".into()))?;
            let eout = (0..self.net.edges().len())
                .find(|e| self.net.edges()[*e].tail == v)
                .ok_or_else(|| QgError::MoveInapplicable("middle vertex without output".into()))?;
            let (a, b) = (self.net.edges()[ein].tail, self.net.edges()[eout].head);
            if self.net.edges()[ein].left_face != self.net.edges()[eout].left_face
                || self.net.edges()[ein].right_face != self.net.edges()[eout].right_face
            {
                return Err(QgError::MoveInapplicable(
                    "middle vertex edges see different faces".into(),
                ));
            }
            let mut vertices = Vec::new();
            let mut vmap = BTreeMap::new();
            for (i, w) in self.net.vertices().iter().enumerate() {
                if i == v {
                    continue;
                }
                vmap.insert(i, vertices.len());
                vertices.push(w.clone());
            }
            let mut edges = Vec::new();
            let mut emap = BTreeMap::new();
            for (i, ed) in self.net.edges().iter().enumerate() {
                if i == eout {
                    continue;
                }
                let mut ed = ed.clone();
                if i == ein {
                    ed.head = vmap[&b];
                    ed.tail = vmap[&a];
                } else {
                    ed.tail = vmap[&ed.tail];
                    ed.head = vmap[&ed.head];
                }
                emap.insert(i, edges.len());
                edges.push(ed);
            }
            let mut rotation = Vec::new();
            for (i, _) in self.net.vertices().iter().enumerate() {
                if i == v {
                    continue;
                }
                rotation.push(
                    self.net.rotation[i]
                        .iter()
                        .map(|e| if *e == eout { emap[&ein] } else { emap[e] })
                        .collect(),
                );
            }
            return self.rebuild(
                vertices,
                edges,
                self.net.faces.clone(),
                rotation,
                self.values.clone(),
            );
        }
        // insertion on an edge
        let e = self.net.edge_index(location)?;
        let ed = self.net.edges()[e].clone();
        let mut vertices = self.net.vertices.clone();
        let mid = vertices.len();
        vertices.push(Vertex {
            id: format!("{}-mid", ed.id),
            kind: VertexKind::White,
            boundary_pos: None,
        });
        let mut edges = self.net.edges.clone();
        let e2 = edges.len();
        edges.push(Edge {
            id: format!("{}-b", ed.id),
            tail: mid,
            head: ed.head,
            left_face: ed.left_face,
            right_face: ed.right_face,
        });
        edges[e].head = mid;
        let mut rotation = self.net.rotation.clone();
        rotation.push(vec![e, e2]);
        // the old head's rotation now references e2 in place of e
        let h = ed.head;
        for slot in rotation[h].iter_mut() {
            if *slot == e {
                *slot = e2;
            }
        }
        self.rebuild(
            vertices,
            edges,
            self.net.faces.clone(),
            rotation,
            self.values.clone(),
        )
    }

    /// R1: reduces two parallel edges (a bigon) between a white and a black
    /// vertex; the enclosed face disappears and the outer weights absorb it.
    fn parallel_edge_reduction(
        &self,
        face: &str,
        policy: TruncationPolicy,
    ) -> Result<WeightedNetwork> {
        let fidx = self.net.face_index(face)?;
        let bigon: Vec<usize> = (0..self.net.edges().len())
            .filter(|e| {
                let ed = &self.net.edges()[*e];
                ed.left_face == fidx || ed.right_face == fidx
            })
            .collect();
        if bigon.len() != 2 {
            return Err(QgError::MoveInapplicable(format!(
                "face `{face}` is not a bigon"
            )));
        }
        let (e1, e2) = (bigon[0], bigon[1]);
        let (u, v) = (self.net.edges()[e1].tail, self.net.edges()[e1].head);
        if self.net.edges()[e2].tail != u || self.net.edges()[e2].head != v {
            return Err(QgError::MoveInapplicable(
                "bigon edges must share endpoints and direction".into(),
            ));
        }
        if self.net.vertices()[u].kind != VertexKind::White
            || self.net.vertices()[v].kind != VertexKind::Black
        {
            return Err(QgError::MoveInapplicable(
                "bigon must run white to black".into(),
            ));
        }
        let leg_in = (0..self.net.edges().len())
            .find(|e| self.net.edges()[*e].head == u)
            .ok_or_else(|| QgError::MoveInapplicable("bigon white vertex without input".into()))?;
        let leg_out = (0..self.net.edges().len())
            .find(|e| self.net.edges()[*e].tail == v)
            .ok_or_else(|| QgError::MoveInapplicable("bigon black vertex without output".into()))?;
        // weight transforms on the two outer neighbor faces
        let form = self.net.plabic_form()?;
        let w_eps = self.value_of(fidx)?.clone();
        let mut values = self.values.clone();
        values.remove(&self.net.faces()[fidx as usize]);
        let mut outer = BTreeSet::new();
        for &e in &bigon {
            let ed = &self.net.edges()[e];
            outer.insert(if ed.left_face == fidx {
                ed.right_face
            } else {
                ed.left_face
            });
        }
        for f in outer {
            let s = form.get(fidx as usize, f as usize).clone();
            let name = self.net.faces()[f as usize].clone();
            let old = self.value_of(f)?.clone();
            let new = if s > Rat::zero() {
                old.weyl_mul(&self.one_plus(&w_eps)?)?
            } else if s < Rat::zero() {
                old.weyl_mul(&self.geometric(&w_eps, policy)?)?
            } else {
                return Err(QgError::MoveInapplicable(
                    "bigon neighbor does not pair with the bigon face".into(),
                ));
            };
            let new = match policy.bound() {
                Some(d) => new.truncate_degree(&rat_int(d as i64)),
                None => new,
            };
            values.insert(name, new);
        }
        // rebuild graph: remove u, v, e1, e2, leg_out; extend leg_in to
        // leg_out's head.
        let target = self.net.edges()[leg_out].head;
        let mut vertices = Vec::new();
        let mut vmap = BTreeMap::new();
        for (i, w) in self.net.vertices().iter().enumerate() {
            if i == u || i == v {
                continue;
            }
            vmap.insert(i, vertices.len());
            vertices.push(w.clone());
        }
        let mut faces = Vec::new();
        let mut fmap: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, f) in self.net.faces().iter().enumerate() {
            if i as u32 == fidx {
                continue;
            }
            fmap.insert(i as u32, faces.len() as u32);
            faces.push(f.clone());
        }
        let mut edges = Vec::new();
        let mut emap = BTreeMap::new();
        for (i, ed) in self.net.edges().iter().enumerate() {
            if i == e1 || i == e2 || i == leg_out {
                continue;
            }
            let mut ed = ed.clone();
            if i == leg_in {
                ed.head = vmap[&target];
            } else {
                ed.head = vmap[&ed.head];
            }
            ed.tail = vmap[&ed.tail];
            ed.left_face = fmap[&ed.left_face];
            ed.right_face = fmap[&ed.right_face];
            emap.insert(i, edges.len());
            edges.push(ed);
        }
        let mut rotation = Vec::new();
        for (i, _) in self.net.vertices().iter().enumerate() {
            if i == u || i == v {
                continue;
            }
            rotation.push(
                self.net.rotation[i]
                    .iter()
                    .map(|e| if *e == leg_out { emap[&leg_in] } else { emap[e] })
                    .collect(),
            );
        }
        self.rebuild(vertices, edges, faces, rotation, values)
    }

    /// R2: prunes a dead branch starting at an internal leaf, merging the
    /// faces on both sides of every removed edge.
    fn prune_dead_branch(&self, vertex: &str) -> Result<WeightedNetwork> {
        let v0 = self.net.vertex_index(vertex)?;
        if self.net.vertices()[v0].kind.is_boundary() {
            return Err(QgError::MoveInapplicable("R2 needs an internal leaf".into()));
        }
        if self.net.rotation[v0].len() != 1 {
            return Err(QgError::MoveInapplicable(
                "R2 location must have exactly one incident edge".into(),
            ));
        }
        let mut dead_vertices: BTreeSet<usize> = BTreeSet::new();
        let mut dead_edges: BTreeSet<usize> = BTreeSet::new();
        let mut frontier = vec![v0];
        while let Some(v) = frontier.pop() {
            if !dead_vertices.insert(v) {
                continue;
            }
            for (i, e) in self.net.edges().iter().enumerate() {
                if e.tail == v || e.head == v {
                    if dead_edges.insert(i) {
                        let w = if e.tail == v { e.head } else { e.tail };
                        // the neighbor dies too when all its remaining edges
                        // would leave it without an input or output
                        let alive_in = (0..self.net.edges().len())
                            .filter(|x| !dead_edges.contains(x) && self.net.edges()[*x].head == w)
                            .count();
                        let alive_out = (0..self.net.edges().len())
                            .filter(|x| !dead_edges.contains(x) && self.net.edges()[*x].tail == w)
                            .count();
                        if !self.net.vertices()[w].kind.is_boundary()
                            && (alive_in == 0 || alive_out == 0)
                        {
                            frontier.push(w);
                        }
                    }
                }
            }
        }
        // union-find over faces merged across removed edges
        let nf = self.net.faces().len();
        let mut parent: Vec<usize> = (0..nf).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &e in &dead_edges {
            let ed = &self.net.edges()[e];
            let (a, b) = (
                find(&mut parent, ed.left_face as usize),
                find(&mut parent, ed.right_face as usize),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        // representative faces keep their names; merged weights multiply
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for f in 0..nf {
            classes.entry(find(&mut parent, f)).or_default().push(f);
        }
        let mut faces = Vec::new();
        let mut fmap: BTreeMap<u32, u32> = BTreeMap::new();
        let mut values: BTreeMap<String, TorusElement> = BTreeMap::new();
        for (rep, members) in &classes {
            let new_idx = faces.len() as u32;
            let rep_name = self.net.faces()[*rep].clone();
            for m in members {
                fmap.insert(*m as u32, new_idx);
            }
            let mut w = TorusElement::one(&self.torus);
            for m in members {
                w = w.weyl_mul(self.value_of(*m as u32)?)?;
            }
            values.insert(rep_name.clone(), w);
            faces.push(rep_name);
        }
        let mut vertices = Vec::new();
        let mut vmap = BTreeMap::new();
        for (i, w) in self.net.vertices().iter().enumerate() {
            if dead_vertices.contains(&i) {
                continue;
            }
            vmap.insert(i, vertices.len());
            vertices.push(w.clone());
        }
        let mut edges = Vec::new();
        let mut emap = BTreeMap::new();
        for (i, ed) in self.net.edges().iter().enumerate() {
            if dead_edges.contains(&i) {
                continue;
            }
            let mut ed = ed.clone();
            ed.tail = vmap[&ed.tail];
            ed.head = vmap[&ed.head];
            ed.left_face = fmap[&ed.left_face];
            ed.right_face = fmap[&ed.right_face];
            emap.insert(i, edges.len());
            edges.push(ed);
        }
        let mut rotation = Vec::new();
        for (i, _) in self.net.vertices().iter().enumerate() {
            if dead_vertices.contains(&i) {
                continue;
            }
            rotation.push(
                self.net.rotation[i]
                    .iter()
                    .filter(|e| !dead_edges.contains(e))
                    .map(|e| emap[e])
                    .collect(),
            );
        }
        self.rebuild(vertices, edges, faces, rotation, values)
    }

    /// R3: removes an isolated white-black doubleton; weights unchanged.
    fn remove_isolated_pair(&self, vertex: &str) -> Result<WeightedNetwork> {
        let v = self.net.vertex_index(vertex)?;
        let rot = &self.net.rotation[v];
        if rot.len() != 1 {
            return Err(QgError::MoveInapplicable(
                "R3 location must belong to an isolated pair".into(),
            ));
        }
        let e = rot[0];
        let ed = &self.net.edges()[e];
        let w = if ed.tail == v { ed.head } else { ed.tail };
        if self.net.rotation[w].len() != 1
            || self.net.vertices()[v].kind.is_boundary()
            || self.net.vertices()[w].kind.is_boundary()
        {
            return Err(QgError::MoveInapplicable(
                "R3 needs an isolated internal white-black edge".into(),
            ));
        }
        if ed.left_face != ed.right_face {
            return Err(QgError::MoveInapplicable(
                "an isolated edge must sit inside a single face".into(),
            ));
        }
        let mut vertices = Vec::new();
        let mut vmap = BTreeMap::new();
        for (i, vert) in self.net.vertices().iter().enumerate() {
            if i == v || i == w {
                continue;
            }
            vmap.insert(i, vertices.len());
            vertices.push(vert.clone());
        }
        let mut edges = Vec::new();
        let mut emap = BTreeMap::new();
        for (i, edg) in self.net.edges().iter().enumerate() {
            if i == e {
                continue;
            }
            let mut edg = edg.clone();
            edg.tail = vmap[&edg.tail];
            edg.head = vmap[&edg.head];
            emap.insert(i, edges.len());
            edges.push(edg);
        }
        let mut rotation = Vec::new();
        for (i, _) in self.net.vertices().iter().enumerate() {
            if i == v || i == w {
                continue;
            }
            rotation.push(self.net.rotation[i].iter().map(|x| emap[x]).collect());
        }
        self.rebuild(
            vertices,
            edges,
            self.net.faces.clone(),
            rotation,
            self.values.clone(),
        )
    }
}

impl WeightedNetwork {
    /// Transport element (source, sink) of a possibly cyclic network.
    pub fn transport_element(
        &self,
        source: usize,
        sink: usize,
        policy: TruncationPolicy,
    ) -> Result<TorusElement> {
        self.boundary_measurement(source, sink, policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_traits::One;

    /// The five-boundary-vertex example network: sources 1 (lower right),
    /// 2 (upper right); sinks 3, 4, 5 down the left side; faces al..ep.
    pub fn example_network() -> Network {
        let v = |id: &str, kind: VertexKind, bp: Option<usize>| Vertex {
            id: id.into(),
            kind,
            boundary_pos: bp,
        };
        let vertices = vec![
            v("1", VertexKind::Source, Some(1)),
            v("2", VertexKind::Source, Some(2)),
            v("3", VertexKind::Sink, Some(3)),
            v("4", VertexKind::Sink, Some(4)),
            v("5", VertexKind::Sink, Some(5)),
            v("A", VertexKind::White, None),
            v("B", VertexKind::Black, None),
            v("C", VertexKind::White, None),
        ];
        let faces = vec!["al".to_string(), "be".into(), "ga".into(), "de".into(), "ep".into()];
        let (al, be, ga, de, ep) = (0u32, 1u32, 2u32, 3u32, 4u32);
        let e = |id: &str, t: usize, h: usize, l: u32, r: u32| Edge {
            id: id.into(),
            tail: t,
            head: h,
            left_face: l,
            right_face: r,
        };
        // indices: 1=0, 2=1, 3=2, 4=3, 5=4, A=5, B=6, C=7
        let edges = vec![
            e("e1", 0, 5, ep, be),  // 1 -> A
            e("eA5", 5, 4, ep, de), // A -> 5
            e("eAB", 5, 6, de, be), // A -> B
            e("e2B", 1, 6, be, al), // 2 -> B
            e("eBC", 6, 7, de, al), // B -> C
            e("eC3", 7, 2, ga, al), // C -> 3
            e("eC4", 7, 3, de, ga), // C -> 4
        ];
        let rotation = vec![
            vec![0],
            vec![3],
            vec![5],
            vec![6],
            vec![1],
            vec![0, 2, 1],    // A: e1 (east), eAB (up), eA5 (west)
            vec![3, 4, 2],    // B: e2B (east), eBC (west), eAB (down)
            vec![4, 5, 6],    // C: eBC (east), eC3 (up-left), eC4 (down-left)
        ];
        Network::new(vertices, edges, faces, rotation).unwrap()
    }

    #[test]
    fn plabic_form_matches_displayed_pairings() {
        let net = example_network();
        let f = net.plabic_form().unwrap();
        let (al, be, ga, de, ep) = (0, 1, 2, 3, 4);
        assert_eq!(*f.get(al, be), rat(-1, 2));
        assert_eq!(*f.get(al, de), rat(1, 1));
        assert_eq!(*f.get(al, ga), rat(-1, 2));
        assert_eq!(*f.get(be, ep), rat(1, 2));
        assert_eq!(*f.get(be, de), rat(-1, 1));
        assert_eq!(*f.get(ga, de), rat(-1, 2));
        assert_eq!(*f.get(de, ep), rat(-1, 2));
        // unmentioned pairs vanish
        assert_eq!(*f.get(al, ep), rat(0, 1));
        assert_eq!(*f.get(be, ga), rat(0, 1));
        assert_eq!(*f.get(ga, ep), rat(0, 1));
    }

    fn z_sum(t: &Arc<Torus>, faces: &[u32]) -> TorusElement {
        TorusElement::monomial(
            t,
            ExponentVector::from_pairs(faces.iter().map(|f| (*f, Rat::one()))),
        )
    }

    #[test]
    fn measurement_matrix_matches_displayed_q() {
        let wn = WeightedNetwork::canonical(example_network()).unwrap();
        let t = &wn.torus;
        let q = wn.measurement_matrix(TruncationPolicy::Unlimited).unwrap();
        assert_eq!(q.rows(), 3);
        assert_eq!(q.cols(), 2);
        let (al, be, ga, de) = (0u32, 1u32, 2u32, 3u32);
        assert_eq!(*q.get(0, 0), z_sum(t, &[al, be]));
        assert_eq!(*q.get(0, 1), z_sum(t, &[al]));
        assert_eq!(*q.get(1, 0), z_sum(t, &[al, be, ga]));
        assert_eq!(*q.get(1, 1), z_sum(t, &[al, ga]));
        assert_eq!(*q.get(2, 0), z_sum(t, &[al, be, ga, de]));
        assert!(q.get(2, 1).is_zero());
    }

    #[test]
    fn grassmannian_matrix_matches_display() {
        let wn = WeightedNetwork::canonical(example_network()).unwrap();
        let t = &wn.torus;
        let g = wn.grassmannian_matrix(TruncationPolicy::Unlimited).unwrap();
        assert_eq!(g.rows(), 5);
        assert_eq!(g.cols(), 2);
        let qpow = |r: Rat| TorusElement::scalar(t, QCoefficient::q_power(r));
        assert_eq!(*g.get(0, 0), qpow(rat(-1, 2)));
        assert!(g.get(0, 1).is_zero());
        assert!(g.get(1, 0).is_zero());
        assert_eq!(*g.get(1, 1), qpow(rat(-3, 2)));
        let (al, be, ga, de) = (0u32, 1u32, 2u32, 3u32);
        let qm2 = QCoefficient::q_power(rat(-2, 1));
        assert_eq!(
            *g.get(2, 0),
            z_sum(t, &[al, be]).scale(&qm2).neg()
        );
        assert_eq!(*g.get(2, 1), z_sum(t, &[al]).scale(&qm2));
        assert_eq!(
            *g.get(3, 0),
            z_sum(t, &[al, be, ga]).scale(&qm2).neg()
        );
        assert_eq!(*g.get(3, 1), z_sum(t, &[al, ga]).scale(&qm2));
        assert_eq!(
            *g.get(4, 0),
            z_sum(t, &[al, be, ga, de]).scale(&qm2).neg()
        );
        assert!(g.get(4, 1).is_zero());
    }

    #[test]
    fn acyclic_diamond_has_two_paths() {
        // one source, one sink, two routes around a middle face
        let v = |id: &str, kind: VertexKind, bp: Option<usize>| Vertex {
            id: id.into(),
            kind,
            boundary_pos: bp,
        };
        let vertices = vec![
            v("s", VertexKind::Source, Some(1)),
            v("t", VertexKind::Sink, Some(2)),
            v("w", VertexKind::White, None),
            v("b", VertexKind::Black, None),
        ];
        let faces = vec!["mid".to_string(), "up".into(), "down".into()];
        let e = |id: &str, t: usize, h: usize, l: u32, r: u32| Edge {
            id: id.into(),
            tail: t,
            head: h,
            left_face: l,
            right_face: r,
        };
        // s -> w, w -> b (two parallel arcs around face mid), b -> t
        let edges = vec![
            e("a", 0, 2, 1, 2),
            e("p1", 2, 3, 1, 0), // upper arc: left=up, right=mid
            e("p2", 2, 3, 0, 2), // lower arc: left=mid, right=down
            e("z", 3, 1, 1, 2),
        ];
        let rotation = vec![
            vec![0],
            vec![3],
            vec![1, 0, 2], // w: upper arc (NE), toward s (west), lower arc (SE)
            vec![3, 1, 2], // b: toward t (east), upper arc (NW), lower arc (SW)
        ];
        let net = Network::new(vertices, edges, faces, rotation).unwrap();
        let paths = net
            .enumerate_paths(0, 1, TruncationPolicy::Unlimited)
            .unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].crossings, 0);
        assert_eq!(paths[1].crossings, 0);
        // one path winds the middle face, the other does not
        let totals: Vec<i64> = paths
            .iter()
            .map(|p| p.profile.values().sum::<i64>())
            .collect();
        assert!(totals.contains(&0) || totals.contains(&1));
    }
}
