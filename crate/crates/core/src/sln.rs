//! The rank-n triangle: its trivalent network, quantum transport matrices
//! M1 / M2 / M3 with their normalizations, the barycentric rotation, and the
//! classical factorized transport as an independent cross-check.
//!
//! Faces are barycentric triples (a,b,c), a+b+c = n, named `Z{a}.{b}.{c}`.
//! Side conventions: a = 0 is the right side (sources), b = 0 the left side
//! (sinks 1'..n' top to bottom), c = 0 the bottom side (sinks 1''..n'' left
//! to right).  The counterclockwise boundary order is sources n..1, then the
//! left sinks 1'..n', then the bottom sinks 1''..n''.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::classical::{ClassicalMatrix, ClassicalPoly};
use crate::error::{QgError, Result};
use crate::matrix::QuantumMatrix;
use crate::network::{Edge, Network, TruncationPolicy, Vertex, VertexKind, WeightedNetwork};
use crate::qtorus::{ExponentVector, QCoefficient, SkewForm, Torus, TorusElement};
use crate::rat::{rat, rat_int, Rat};

pub fn face_name(a: usize, b: usize, c: usize) -> String {
    format!("Z{a}.{b}.{c}")
}

/// The triangle torus: all barycentric faces including the three corners.
#[derive(Clone, Debug)]
pub struct TriangleTorus {
    pub n: usize,
    pub torus: Arc<Torus>,
}

impl TriangleTorus {
    pub fn face_id(&self, a: usize, b: usize, c: usize) -> Result<u32> {
        self.torus.face_id(&face_name(a, b, c))
    }

    /// Barycentric triple of a face id.
    pub fn triple(&self, id: u32) -> Result<(usize, usize, usize)> {
        parse_face(self.torus.face_name(id))
    }

    /// Faces (a,b,c) in the deterministic build order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        enumerate_triples(self.n)
    }

    pub fn is_corner(&self, (a, b, c): (usize, usize, usize)) -> bool {
        a == self.n || b == self.n || c == self.n
    }

    /// Frozen faces: everything on the three sides, corners included.
    pub fn is_frozen(&self, (a, b, c): (usize, usize, usize)) -> bool {
        a == 0 || b == 0 || c == 0
    }

    /// The rotation (a,b,c) -> (b,c,a); one clockwise step of the triangle.
    pub fn tau_triple(&self, (a, b, c): (usize, usize, usize)) -> (usize, usize, usize) {
        (b, c, a)
    }

    pub fn tau_element(&self, x: &TorusElement) -> Result<TorusElement> {
        let mut out = TorusElement::zero(&self.torus);
        for (v, c) in x.terms() {
            let mut nv = ExponentVector::zero();
            for (f, e) in v.iter() {
                let t = self.triple(*f)?;
                let (a2, b2, c2) = self.tau_triple(t);
                nv.add_to(self.face_id(a2, b2, c2)?, e.clone());
            }
            out.add_term(nv, c.clone());
        }
        Ok(out)
    }

    pub fn tau_matrix(&self, m: &QuantumMatrix) -> Result<QuantumMatrix> {
        let mut out = QuantumMatrix::zero(&self.torus, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, self.tau_element(m.get(i, j))?);
            }
        }
        Ok(out)
    }

    /// D1 = :prod_{c>0} Z_{a,b,c}^{c/n}:.
    pub fn d1_vector(&self) -> Result<ExponentVector> {
        let n = self.n;
        let mut v = ExponentVector::zero();
        for (a, b, c) in self.triples() {
            if c > 0 {
                v.add_to(self.face_id(a, b, c)?, rat(c as i64, n as i64));
            }
        }
        Ok(v)
    }

    /// D2 = tau^2 D1 = :prod_{a>0} Z_{a,b,c}^{a/n}:.
    pub fn d2_vector(&self) -> Result<ExponentVector> {
        let n = self.n;
        let mut v = ExponentVector::zero();
        for (a, b, c) in self.triples() {
            if a > 0 {
                v.add_to(self.face_id(a, b, c)?, rat(a as i64, n as i64));
            }
        }
        Ok(v)
    }

    pub fn d1(&self) -> Result<TorusElement> {
        Ok(TorusElement::monomial(&self.torus, self.d1_vector()?))
    }

    pub fn d2(&self) -> Result<TorusElement> {
        Ok(TorusElement::monomial(&self.torus, self.d2_vector()?))
    }

    /// The quiver form read off the triangle figure: solid interior arrows
    /// v -> NE, SE, W neighbors; dashed (weight 1/2) along the three sides.
    /// Used as an independent check of the plabic dual computation.
    pub fn quiver_form(&self) -> Result<SkewForm> {
        let mut form = SkewForm::zero(self.torus.dim());
        let id = |a: usize, b: usize, c: usize| self.face_id(a, b, c);
        for (a, b, c) in self.triples() {
            let v = id(a, b, c)?;
            // NE: (a,b,c) -> (a-1,b,c+1); dashed on the left side b = 0
            if a >= 1 {
                let w = id(a - 1, b, c + 1)?;
                let m = if b == 0 { rat(1, 2) } else { rat_int(1) };
                form.add_pair(v as usize, w as usize, m);
            }
            // SE: (a,b,c) -> (a,b+1,c-1); dashed on the right side a = 0
            if c >= 1 {
                let w = id(a, b + 1, c - 1)?;
                let m = if a == 0 { rat(1, 2) } else { rat_int(1) };
                form.add_pair(v as usize, w as usize, m);
            }
            // W: (a,b,c) -> (a+1,b-1,c); dashed on the bottom side c = 0
            if b >= 1 {
                let w = id(a + 1, b - 1, c)?;
                let m = if c == 0 { rat(1, 2) } else { rat_int(1) };
                form.add_pair(v as usize, w as usize, m);
            }
        }
        Ok(form)
    }
}

fn parse_face(name: &str) -> Result<(usize, usize, usize)> {
    let body = name
        .strip_prefix('Z')
        .ok_or_else(|| QgError::UnknownFace(name.to_string()))?;
    let parts: Vec<&str> = body.split('.').collect();
    if parts.len() != 3 {
        return Err(QgError::UnknownFace(name.to_string()));
    }
    let a = parts[0].parse().map_err(|_| QgError::UnknownFace(name.into()))?;
    let b = parts[1].parse().map_err(|_| QgError::UnknownFace(name.into()))?;
    let c = parts[2].parse().map_err(|_| QgError::UnknownFace(name.into()))?;
    Ok((a, b, c))
}

fn enumerate_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=(n - a) {
            out.push((a, b, n - a - b));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Geometry helpers (exact rational plane)
// ---------------------------------------------------------------------------

type Pt = (Rat, Rat);

fn lattice_pt(a: usize, b: usize, c: usize) -> Pt {
    // A = (0,0), B = (2,0), C = (1,2) per unit
    let _ = a;
    (rat_int(2 * b as i64 + c as i64), rat_int(2 * c as i64))
}

fn centroid(pts: &[Pt]) -> Pt {
    let mut x = Rat::zero();
    let mut y = Rat::zero();
    for (px, py) in pts {
        x += px;
        y += py;
    }
    let k = rat_int(pts.len() as i64);
    (x / k.clone(), y / k)
}

fn sub(a: &Pt, b: &Pt) -> Pt {
    (a.0.clone() - b.0.clone(), a.1.clone() - b.1.clone())
}

fn cross(a: &Pt, b: &Pt) -> Rat {
    a.0.clone() * b.1.clone() - a.1.clone() * b.0.clone()
}

/// Counterclockwise comparison of direction vectors starting at east.
fn ccw_cmp(u: &Pt, v: &Pt) -> Ordering {
    let half = |w: &Pt| -> u8 {
        if w.1.is_positive() || (w.1.is_zero() && w.0.is_positive()) {
            0
        } else {
            1
        }
    };
    let (hu, hv) = (half(u), half(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    let c = cross(u, v);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

// ---------------------------------------------------------------------------
// Network construction
// ---------------------------------------------------------------------------

struct Builder {
    vertices: Vec<Vertex>,
    positions: Vec<Pt>,
    vid: BTreeMap<String, usize>,
    edges: Vec<(String, usize, usize, (usize, usize, usize), (usize, usize, usize))>,
}

impl Builder {
    fn add_vertex(&mut self, id: String, kind: VertexKind, pos: Pt, bpos: Option<usize>) -> usize {
        let idx = self.vertices.len();
        self.vid.insert(id.clone(), idx);
        self.vertices.push(Vertex {
            id,
            kind,
            boundary_pos: bpos,
        });
        self.positions.push(pos);
        idx
    }

    /// Adds an edge crossing the triangulation side {p1, p2}.
    fn add_edge(
        &mut self,
        id: String,
        tail: usize,
        head: usize,
        p1: (usize, usize, usize),
        p2: (usize, usize, usize),
    ) {
        self.edges.push((id, tail, head, p1, p2));
    }
}

/// Builds the triangle network for rank `n` together with its torus.
pub fn build_sln_network(n: usize) -> Result<(Network, TriangleTorus)> {
    if !(2..=8).contains(&n) {
        return Err(QgError::InvalidArgument(format!(
            "rank {n} out of the supported range 2..=8"
        )));
    }
    let faces: Vec<String> = enumerate_triples(n)
        .into_iter()
        .map(|(a, b, c)| face_name(a, b, c))
        .collect();
    let face_idx: BTreeMap<String, u32> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i as u32))
        .collect();

    let mut bld = Builder {
        vertices: Vec::new(),
        positions: Vec::new(),
        vid: BTreeMap::new(),
        edges: Vec::new(),
    };

    // internal vertices: white up-triangles U_{abc} (a+b+c = n-1),
    // black down-triangles D_{abc} (a+b+c = n-2)
    for a in 0..n {
        for b in 0..(n - a) {
            let c = n - 1 - a - b;
            let pts = [
                lattice_pt(a + 1, b, c),
                lattice_pt(a, b + 1, c),
                lattice_pt(a, b, c + 1),
            ];
            bld.add_vertex(
                format!("u{a}.{b}.{c}"),
                VertexKind::White,
                centroid(&pts),
                None,
            );
        }
    }
    if n >= 2 {
        for a in 0..(n - 1) {
            for b in 0..(n - 1 - a) {
                let c = n - 2 - a - b;
                let pts = [
                    lattice_pt(a, b + 1, c + 1),
                    lattice_pt(a + 1, b, c + 1),
                    lattice_pt(a + 1, b + 1, c),
                ];
                bld.add_vertex(
                    format!("d{a}.{b}.{c}"),
                    VertexKind::Black,
                    centroid(&pts),
                    None,
                );
            }
        }
    }
    // boundary: ccw positions are sources n..1, left 1..n, bottom 1..n
    for j in 1..=n {
        // source j between lattice points (0,j,n-j) and (0,j-1,n-j+1)
        let p1 = lattice_pt(0, j, n - j);
        let p2 = lattice_pt(0, j - 1, n - j + 1);
        let mid = centroid(&[p1.clone(), p2.clone()]);
        let d = sub(&p2, &p1);
        let pos = (mid.0 + d.1.clone(), mid.1 - d.0.clone()); // outward: rotate d by -90
        bld.add_vertex(format!("s{j}"), VertexKind::Source, pos, Some(n + 1 - j));
    }
    for i in 1..=n {
        // left sink i between (i-1,0,n-i+1) and (i,0,n-i)
        let p1 = lattice_pt(i - 1, 0, n - i + 1);
        let p2 = lattice_pt(i, 0, n - i);
        let mid = centroid(&[p1.clone(), p2.clone()]);
        let d = sub(&p2, &p1);
        let pos = (mid.0 + d.1.clone(), mid.1 - d.0.clone());
        bld.add_vertex(format!("l{i}"), VertexKind::Sink, pos, Some(n + i));
    }
    for i in 1..=n {
        // bottom sink i between (n-i+1,i-1,0) and (n-i,i,0)
        let p1 = lattice_pt(n - i + 1, i - 1, 0);
        let p2 = lattice_pt(n - i, i, 0);
        let mid = centroid(&[p1.clone(), p2.clone()]);
        let d = sub(&p2, &p1);
        let pos = (mid.0 + d.1.clone(), mid.1 - d.0.clone());
        bld.add_vertex(format!("b{i}"), VertexKind::Sink, pos, Some(2 * n + i));
    }

    let u = |a: usize, b: usize, c: usize, bld: &Builder| bld.vid[&format!("u{a}.{b}.{c}")];
    let d = |a: usize, b: usize, c: usize, bld: &Builder| bld.vid[&format!("d{a}.{b}.{c}")];

    // internal edges around each black vertex
    if n >= 2 {
        for a in 0..(n - 1) {
            for b in 0..(n - 1 - a) {
                let c = n - 2 - a - b;
                let dd = d(a, b, c, &bld);
                // above: U_{a,b,c+1} -> D; crossed side {(a,b+1,c+1),(a+1,b,c+1)}
                let ua = u(a, b, c + 1, &bld);
                bld.add_edge(
                    format!("ev{a}.{b}.{c}"),
                    ua,
                    dd,
                    (a, b + 1, c + 1),
                    (a + 1, b, c + 1),
                );
                // east (lane): U_{a,b+1,c} -> D; side {(a,b+1,c+1),(a+1,b+1,c)}
                let ue = u(a, b + 1, c, &bld);
                bld.add_edge(
                    format!("eh{a}.{b}.{c}e"),
                    ue,
                    dd,
                    (a, b + 1, c + 1),
                    (a + 1, b + 1, c),
                );
                // west (lane): D -> U_{a+1,b,c}; side {(a+1,b,c+1),(a+1,b+1,c)}
                let uw = u(a + 1, b, c, &bld);
                bld.add_edge(
                    format!("eh{a}.{b}.{c}w"),
                    dd,
                    uw,
                    (a + 1, b, c + 1),
                    (a + 1, b + 1, c),
                );
            }
        }
    }
    // boundary legs
    for j in 1..=n {
        let s = bld.vid[&format!("s{j}")];
        let t = u(0, j - 1, n - j, &bld);
        bld.add_edge(format!("es{j}"), s, t, (0, j, n - j), (0, j - 1, n - j + 1));
    }
    for i in 1..=n {
        let t = bld.vid[&format!("l{i}")];
        let s = u(i - 1, 0, n - i, &bld);
        bld.add_edge(format!("el{i}"), s, t, (i - 1, 0, n - i + 1), (i, 0, n - i));
    }
    for i in 1..=n {
        let t = bld.vid[&format!("b{i}")];
        let s = u(n - i, i - 1, 0, &bld);
        bld.add_edge(format!("eb{i}"), s, t, (n - i + 1, i - 1, 0), (n - i, i, 0));
    }

    finish_network(bld, faces, face_idx, n)
}

/// Shared finishing pass: assign left/right faces by exact geometry and sort
/// rotations counterclockwise.
fn finish_network(
    bld: Builder,
    faces: Vec<String>,
    face_idx: BTreeMap<String, u32>,
    n: usize,
) -> Result<(Network, TriangleTorus)> {
    let mut edges = Vec::new();
    for (id, tail, head, p1, p2) in &bld.edges {
        let tp = &bld.positions[*tail];
        let hp = &bld.positions[*head];
        let dvec = sub(hp, tp);
        let q1 = lattice_pt(p1.0, p1.1, p1.2);
        let side = cross(&dvec, &sub(&q1, tp));
        let (lf, rf) = if side.is_positive() {
            (p1, p2)
        } else {
            (p2, p1)
        };
        edges.push(Edge {
            id: id.clone(),
            tail: *tail,
            head: *head,
            left_face: face_idx[&face_name(lf.0, lf.1, lf.2)],
            right_face: face_idx[&face_name(rf.0, rf.1, rf.2)],
        });
    }
    // rotations by exact ccw angle sort
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); bld.vertices.len()];
    for (v, _) in bld.vertices.iter().enumerate() {
        let mut incident: Vec<(usize, Pt)> = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.tail == v || e.head == v)
            .map(|(i, e)| {
                let other = if e.tail == v { e.head } else { e.tail };
                (i, sub(&bld.positions[other], &bld.positions[v]))
            })
            .collect();
        incident.sort_by(|a, b| ccw_cmp(&a.1, &b.1));
        rotation[v] = incident.into_iter().map(|(i, _)| i).collect();
    }
    let net = Network::new(bld.vertices, edges, faces, rotation)?;
    let torus = net.torus()?;
    Ok((net, TriangleTorus { n, torus }))
}

/// The reversed network: every lane (snakelike horizontal) edge flipped, so
/// the left side becomes the source side; transports go left to bottom.
pub fn build_reversed_network(n: usize) -> Result<(Network, TriangleTorus)> {
    let (net, tri) = build_sln_network(n)?;
    let mut vertices: Vec<Vertex> = net.vertices().to_vec();
    let mut edges: Vec<Edge> = net.edges().to_vec();
    for e in edges.iter_mut() {
        let is_lane = e.id.starts_with("es")
            || e.id.starts_with("el")
            || (e.id.starts_with("eh"));
        if is_lane {
            std::mem::swap(&mut e.tail, &mut e.head);
            std::mem::swap(&mut e.left_face, &mut e.right_face);
        }
    }
    for v in vertices.iter_mut() {
        if v.id.starts_with('s') && v.kind == VertexKind::Source {
            v.kind = VertexKind::Sink;
        } else if v.id.starts_with('l') && v.kind == VertexKind::Sink {
            v.kind = VertexKind::Source;
        }
    }
    // rotations and faces unchanged; the plabic form is orientation-free, so
    // the reversed network shares the original torus
    let rotation_ordered: Vec<Vec<usize>> = (0..vertices.len())
        .map(|v| net.rotation_of(v).to_vec())
        .collect();
    let net2 = Network::new(vertices, edges, net.faces().to_vec(), rotation_ordered)?;
    Ok((net2, tri))
}

// ---------------------------------------------------------------------------
// Transport matrices
// ---------------------------------------------------------------------------

/// Non-normalized transports: rows i = sinks, columns j = sources;
/// entries are sums of Weyl path weights.
pub fn raw_transport(n: usize) -> Result<(QuantumMatrix, QuantumMatrix, TriangleTorus)> {
    let (net, tri) = build_sln_network(n)?;
    let wn = WeightedNetwork::canonical(net)?;
    if !Torus::same_torus(&wn.torus, &tri.torus) {
        return Err(QgError::TorusMismatch("triangle torus mismatch".into()));
    }
    let policy = TruncationPolicy::Unlimited;
    let mut m1 = QuantumMatrix::zero(&tri.torus, n, n);
    let mut m2 = QuantumMatrix::zero(&tri.torus, n, n);
    for i in 1..=n {
        for j in 1..=n {
            let src = wn.net.vertex_index(&format!("s{j}"))?;
            let lsnk = wn.net.vertex_index(&format!("l{i}"))?;
            let bsnk = wn.net.vertex_index(&format!("b{i}"))?;
            m1.set(i - 1, j - 1, wn.boundary_measurement(src, lsnk, policy)?);
            m2.set(i - 1, j - 1, wn.boundary_measurement(src, bsnk, policy)?);
        }
    }
    Ok((m1, m2, tri))
}

/// Normalized transports, matching the worked rank-3 matrices:
/// `M1 = Q S D1^{-1} RawM1` and `M2 = Q S :D1^{-1} D2^{-1}: RawM2`.
pub fn normalized_transport(n: usize) -> Result<(QuantumMatrix, QuantumMatrix, TriangleTorus)> {
    let (raw1, raw2, tri) = raw_transport(n)?;
    let t = &tri.torus;
    let q = QuantumMatrix::transport_q(t, n);
    let s = QuantumMatrix::antidiagonal_s(t, n);
    let d1inv = TorusElement::monomial(t, tri.d1_vector()?.neg());
    let d12inv = TorusElement::monomial(t, tri.d1_vector()?.add(&tri.d2_vector()?).neg());
    let m1 = q.mul(&s)?.mul(&raw1.scale_left(&d1inv)?)?;
    let m2 = q.mul(&s)?.mul(&raw2.scale_left(&d12inv)?)?;
    Ok((m1, m2, tri))
}

/// Raw transport of the reversed network: entries (i,j) sum paths from the
/// left source j' to the bottom sink i''.  Entries live over the original
/// triangle torus (reversal does not change the face algebra).
pub fn raw_m3(n: usize) -> Result<(QuantumMatrix, TriangleTorus)> {
    let (net, tri) = build_reversed_network(n)?;
    let values = net
        .faces()
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), TorusElement::generator(&tri.torus, i as u32)))
        .collect();
    let wn = WeightedNetwork {
        net,
        torus: tri.torus.clone(),
        values,
    };
    let policy = TruncationPolicy::Unlimited;
    let mut m3 = QuantumMatrix::zero(&tri.torus, n, n);
    for i in 1..=n {
        for j in 1..=n {
            let src = wn.net.vertex_index(&format!("l{j}"))?;
            let bsnk = wn.net.vertex_index(&format!("b{i}"))?;
            m3.set(i - 1, j - 1, wn.boundary_measurement(src, bsnk, policy)?);
        }
    }
    Ok((m3, tri))
}

/// Normalized M3, the transport of the reversed network normalized by D2:
/// `M3 = (-1)^{n+1} q^{1/2n} Q S D2^{-1} RawM3 |S|`.  The scalar and the
/// column flip are pinned by the groupoid relation M3 M1 = M2.
pub fn m3_transport(n: usize) -> Result<(QuantumMatrix, TriangleTorus)> {
    let (raw3, tri) = raw_m3(n)?;
    let t = &tri.torus;
    let q = QuantumMatrix::transport_q(t, n);
    let s = QuantumMatrix::antidiagonal_s(t, n);
    let flip = QuantumMatrix::antidiagonal_abs(t, n);
    let d2inv = TorusElement::monomial(t, tri.d2_vector()?.neg());
    let sign = if n % 2 == 0 { -1 } else { 1 };
    let c = QCoefficient::term(rat(1, 2 * n as i64), crate::rat::Int::from(sign));
    let m3 = q
        .mul(&s)?
        .mul(&raw3.scale_left(&d2inv)?)?
        .mul(&flip)?
        .scale(&c);
    Ok((m3, tri))
}

// ---------------------------------------------------------------------------
// Classical factorized transport
// ---------------------------------------------------------------------------

/// H_k(t) = t^{-(n-k)/n} diag(t^{[i >= k+1]}), as a classical matrix where
/// `t` is the monomial with exponent vector `tv`.
fn h_matrix(n: usize, k: usize, tv: &ExponentVector) -> ClassicalMatrix {
    let mut m = ClassicalMatrix::zero(n, n);
    for i in 1..=n {
        let mut e = tv.scale(&(-rat(n as i64 - k as i64, n as i64)));
        if i >= k + 1 {
            e = e.add(tv);
        }
        m.set(i - 1, i - 1, ClassicalPoly::monomial(e, Rat::one()));
    }
    m
}

fn l_matrix(n: usize, k: usize) -> ClassicalMatrix {
    let mut m = ClassicalMatrix::identity(n);
    m.set(k, k - 1, ClassicalPoly::one()); // E_{k+1,k} in 1-based terms
    m
}

fn s_matrix(n: usize) -> ClassicalMatrix {
    let mut m = ClassicalMatrix::zero(n, n);
    for i in 1..=n {
        let sign = if (n - i) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        m.set(i - 1, n - i, ClassicalPoly::constant(sign));
    }
    m
}

/// The factorized classical transport from the right side to the left side:
/// `S [prod H] (L-chain with interior weights) [prod H]`, evaluated on the
/// assignment face -> classical value.  The torus only provides face ids.
pub fn classical_t1(tri: &TriangleTorus, values: &BTreeMap<u32, ClassicalPoly>) -> Result<ClassicalMatrix> {
    let n = tri.n;
    let val_vec = |a: usize, b: usize, c: usize| -> Result<ExponentVector> {
        let id = tri.face_id(a, b, c)?;
        // values are substituted at the end; here we need monomial variables,
        // so the assignment must send each face to a monomial.
        let v = values
            .get(&id)
            .ok_or_else(|| QgError::InvalidArgument("missing face value".into()))?;
        if v.terms.len() != 1 {
            return Err(QgError::InvalidArgument(
                "classical transport needs monomial face values".into(),
            ));
        }
        let (ev, c0) = v.terms.iter().next().unwrap();
        if !c0.is_one() {
            return Err(QgError::InvalidArgument(
                "classical transport needs unit coefficients".into(),
            ));
        }
        Ok(ev.clone())
    };
    let mut m = s_matrix(n);
    // left-side prefactor: H_{n-j}(Z_{n-j,0,j}) for j = 1..n-1
    for j in 1..=(n - 1) {
        let tv = val_vec(n - j, 0, j)?;
        m = m.mul(&h_matrix(n, n - j, &tv))?;
    }
    // interior snake: L_{n-1}, then rows p = 1..n-2 of
    // [prod_{q=1..p} L_{n-q-1} H_{n-q}(Z_{n-1-p, q, p+1-q})] L_{n-1}
    m = m.mul(&l_matrix(n, n - 1))?;
    for p in 1..=n.saturating_sub(2) {
        for q in 1..=p {
            m = m.mul(&l_matrix(n, n - q - 1))?;
            let tv = val_vec(n - 1 - p, q, p + 1 - q)?;
            m = m.mul(&h_matrix(n, n - q, &tv))?;
        }
        m = m.mul(&l_matrix(n, n - 1))?;
    }
    // right-side postfactor: H_j(Z_{0,j,n-j}) for j = 1..n-1
    for j in 1..=(n - 1) {
        let tv = val_vec(0, j, n - j)?;
        m = m.mul(&h_matrix(n, j, &tv))?;
    }
    Ok(m)
}

/// Identity assignment: each face maps to its own monomial.
pub fn identity_values(tri: &TriangleTorus) -> BTreeMap<u32, ClassicalPoly> {
    (0..tri.torus.dim() as u32)
        .map(|f| (f, ClassicalPoly::var(f)))
        .collect()
}

/// All-ones assignment (the toy specialization).
pub fn unit_values(tri: &TriangleTorus) -> BTreeMap<u32, ClassicalPoly> {
    (0..tri.torus.dim() as u32)
        .map(|f| (f, ClassicalPoly::one()))
        .collect()
}
