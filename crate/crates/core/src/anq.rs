//! Amalgamation of the triangle torus, the upper-triangular matrix
//! A = M1^T M2, its named Casimirs and the unipotent normalization.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{QgError, Result};
use crate::matrix::QuantumMatrix;
use crate::qtorus::{casimir_kernel, ExponentVector, SkewForm, Torus, TorusElement};
use crate::rat::{rat, rat_int, Rat};
use crate::sln::{self, TriangleTorus};

/// A quotient of one or more parent tori: merged faces share a fresh
/// generator, pairings add over merged classes.
#[derive(Clone, Debug)]
pub struct AmalgamatedTorus {
    pub torus: Arc<Torus>,
    /// parent face id -> quotient face id
    pub pushforward: BTreeMap<u32, u32>,
    /// frozen flags per quotient face
    pub frozen: Vec<bool>,
}

impl AmalgamatedTorus {
    pub fn push_vector(&self, v: &ExponentVector) -> ExponentVector {
        ExponentVector::from_pairs(v.iter().map(|(f, e)| (self.pushforward[f], e.clone())))
    }

    pub fn push_element(&self, x: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero(&self.torus);
        for (v, c) in x.terms() {
            out.add_term(self.push_vector(v), c.clone());
        }
        out
    }

    pub fn push_matrix(&self, m: &QuantumMatrix) -> QuantumMatrix {
        let mut out = QuantumMatrix::zero(&self.torus, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, self.push_element(m.get(i, j)));
            }
        }
        out
    }

    pub fn unfrozen_faces(&self) -> Vec<u32> {
        (0..self.torus.dim() as u32)
            .filter(|f| !self.frozen[*f as usize])
            .collect()
    }
}

/// Merges the listed face pairs of a torus into fresh faces named
/// `Zb{k}` (k = 1-based pair index); every new face is unfrozen, other
/// faces keep the given frozen flags.
pub fn amalgamate(
    torus: &Arc<Torus>,
    pairs: &[(u32, u32)],
    frozen_before: &[bool],
) -> Result<AmalgamatedTorus> {
    // overlapping pairs are rejected
    let mut seen = std::collections::BTreeSet::new();
    for (a, b) in pairs {
        if !seen.insert(*a) || !seen.insert(*b) {
            return Err(QgError::InvalidArgument("overlapping amalgamation pairs".into()));
        }
    }
    let dim = torus.dim() as u32;
    let mut names = Vec::new();
    let mut pushforward: BTreeMap<u32, u32> = BTreeMap::new();
    let mut frozen = Vec::new();
    for f in 0..dim {
        if seen.contains(&f) {
            continue;
        }
        pushforward.insert(f, names.len() as u32);
        frozen.push(frozen_before[f as usize]);
        names.push(torus.face_name(f).to_string());
    }
    for (k, (a, b)) in pairs.iter().enumerate() {
        pushforward.insert(*a, names.len() as u32);
        pushforward.insert(*b, names.len() as u32);
        frozen.push(false); // amalgamated faces are unfrozen
        names.push(format!("Zb{}", k + 1));
    }
    let nd = names.len();
    let mut form = SkewForm::zero(nd);
    // quotient pairing: sum over preimage classes
    let mut classes: Vec<Vec<u32>> = vec![Vec::new(); nd];
    for f in 0..dim {
        classes[pushforward[&f] as usize].push(f);
    }
    for i in 0..nd {
        for j in (i + 1)..nd {
            let mut acc = Rat::zero();
            for a in &classes[i] {
                for b in &classes[j] {
                    acc += torus.form().get(*a as usize, *b as usize);
                }
            }
            if !acc.is_zero() {
                form.add_pair(i, j, acc);
            }
        }
    }
    Ok(AmalgamatedTorus {
        torus: Torus::new(names, form),
        pushforward,
        frozen,
    })
}

/// The standard amalgamation of the triangle: left-side faces (i,0,n-i)
/// glued to bottom faces (n-i,i,0), i = 1..n-1, producing Zb1..Zb{n-1}.
pub fn standard_amalgamation(tri: &TriangleTorus) -> Result<AmalgamatedTorus> {
    let n = tri.n;
    let mut pairs = Vec::new();
    for i in 1..n {
        pairs.push((tri.face_id(i, 0, n - i)?, tri.face_id(n - i, i, 0)?));
    }
    let frozen: Vec<bool> = tri
        .triples()
        .iter()
        .map(|t| tri.is_frozen(*t))
        .collect();
    amalgamate(&tri.torus, &pairs, &frozen)
}

/// The upper-triangular reflection matrix over the amalgamated torus.
#[derive(Clone, Debug)]
pub struct ReflectionMatrix {
    pub a: QuantumMatrix,
    pub amalg: AmalgamatedTorus,
    pub tri: TriangleTorus,
}

/// A = M1^T M2 built from the normalized transports and pushed onto the
/// amalgamated torus.
pub fn build_a(n: usize) -> Result<ReflectionMatrix> {
    let (m1, m2, tri) = sln::normalized_transport(n)?;
    let amalg = standard_amalgamation(&tri)?;
    let a = m1.transpose().mul(&m2)?;
    let a = amalg.push_matrix(&a);
    Ok(ReflectionMatrix { a, amalg, tri })
}

/// The same matrix without amalgamation (entries over the triangle torus).
pub fn build_a_unamalgamated(n: usize) -> Result<(QuantumMatrix, TriangleTorus)> {
    let (m1, m2, tri) = sln::normalized_transport(n)?;
    Ok((m1.transpose().mul(&m2)?, tri))
}

/// Named Casimirs of the amalgamated quiver, as exponent vectors over the
/// amalgamated torus.
pub struct NamedCasimirs {
    pub k: Vec<ExponentVector>, // K_1..K_{n-1}
    pub c: Vec<ExponentVector>, // C_1..C_{floor(n/2)}
    pub d1: ExponentVector,     // over the *triangle* torus
}

pub fn named_casimirs(n: usize) -> Result<NamedCasimirs> {
    let (_, tri) = sln::build_sln_network(n)?;
    let amalg = standard_amalgamation(&tri)?;
    let tid = |a: usize, b: usize, c: usize| -> Result<u32> {
        Ok(amalg.pushforward[&tri.face_id(a, b, c)?])
    };
    let mut ks = Vec::new();
    for i in 1..n {
        let mut v = ExponentVector::zero();
        v.add_to(tid(0, i, n - i)?, rat_int(2));
        for j in 1..i {
            v.add_to(tid(j, i - j, n - i)?, rat_int(1));
        }
        // Zbar_i = class of (i, 0, n-i)
        v.add_to(tid(i, 0, n - i)?, rat_int(1));
        for j in 1..(n - i) {
            v.add_to(tid(j, i, n - i - j)?, rat_int(1));
        }
        ks.push(v);
    }
    let mut cs = Vec::new();
    for k in 1..=(n / 2) {
        let mut v = ExponentVector::zero();
        v.add_to(tid(k, 0, n - k)?, rat_int(1)); // Zbar_k
        for i in 1..(n - k) {
            v.add_to(tid(k, i, n - k - i)?, rat_int(1));
        }
        v.add_to(tid(n - k, 0, k)?, rat_int(1)); // Zbar_{n-k}
        for j in 1..k {
            v.add_to(tid(n - k, j, k - j)?, rat_int(1));
        }
        cs.push(v);
    }
    let d1 = tri.d1_vector()?;
    Ok(NamedCasimirs { k: ks, c: cs, d1 })
}

/// Divides each entry of A by its Casimir monomial
/// `prod_{k<=i} K_k  *  prod_{i<l<=j} K_l^{1/2}` so the diagonal becomes the
/// scalar q^{-1/2}.
pub fn normalize_unipotent(rm: &ReflectionMatrix) -> Result<QuantumMatrix> {
    let n = rm.a.rows();
    let cas = named_casimirs(rm.tri.n)?;
    let mut out = QuantumMatrix::zero(&rm.amalg.torus, n, n);
    for i in 0..n {
        for j in i..n {
            let mut norm = ExponentVector::zero();
            for k in 1..=(i + 1) {
                norm = norm.add(&cas.k[k - 1]);
            }
            for l in (i + 2)..=(j + 1) {
                norm = norm.add(&cas.k[l - 1].scale(&rat(1, 2)));
            }
            let inv = TorusElement::monomial(&rm.amalg.torus, norm.neg());
            out.set(i, j, inv.mul(rm.a.get(i, j))?);
        }
    }
    Ok(out)
}

/// A_gen = Mgamma^T S^T A S Mgamma, with Mgamma a transport over an
/// independent commuting torus merged with A's.
pub fn build_a_gen(
    a: &QuantumMatrix,
    s: &QuantumMatrix,
    m_gamma: &QuantumMatrix,
) -> Result<QuantumMatrix> {
    m_gamma
        .transpose()
        .mul(&s.transpose())?
        .mul(a)?
        .mul(s)?
        .mul(m_gamma)
}

/// Direct sum of two tori with name prefixes; returns the merged torus and
/// the face-id embeddings of both parents.
pub fn merge_tori(
    t1: &Arc<Torus>,
    p1: &str,
    t2: &Arc<Torus>,
    p2: &str,
) -> (Arc<Torus>, BTreeMap<u32, u32>, BTreeMap<u32, u32>) {
    let mut names = Vec::new();
    let mut map1 = BTreeMap::new();
    let mut map2 = BTreeMap::new();
    for f in 0..t1.dim() as u32 {
        map1.insert(f, names.len() as u32);
        names.push(format!("{}{}", p1, t1.face_name(f)));
    }
    for f in 0..t2.dim() as u32 {
        map2.insert(f, names.len() as u32);
        names.push(format!("{}{}", p2, t2.face_name(f)));
    }
    let nd = names.len();
    let mut form = SkewForm::zero(nd);
    for a in 0..t1.dim() {
        for b in 0..t1.dim() {
            let v = t1.form().get(a, b);
            if a < b && !v.is_zero() {
                form.add_pair(a, b, v.clone());
            }
        }
    }
    let off = t1.dim();
    for a in 0..t2.dim() {
        for b in 0..t2.dim() {
            let v = t2.form().get(a, b);
            if a < b && !v.is_zero() {
                form.add_pair(off + a, off + b, v.clone());
            }
        }
    }
    (Torus::new(names, form), map1, map2)
}

/// Transfers an element along a face-id embedding into a larger torus.
pub fn transfer_element(
    x: &TorusElement,
    target: &Arc<Torus>,
    map: &BTreeMap<u32, u32>,
) -> TorusElement {
    let mut out = TorusElement::zero(target);
    for (v, c) in x.terms() {
        out.add_term(
            ExponentVector::from_pairs(v.iter().map(|(f, e)| (map[f], e.clone()))),
            c.clone(),
        );
    }
    out
}

pub fn transfer_matrix(
    m: &QuantumMatrix,
    target: &Arc<Torus>,
    map: &BTreeMap<u32, u32>,
) -> QuantumMatrix {
    let mut out = QuantumMatrix::zero(target, m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, transfer_element(m.get(i, j), target, map));
        }
    }
    out
}

/// Kernel dimensions of the three quiver flavors.
pub struct KernelReport {
    pub full_rank: usize,
    pub reduced: usize,
    pub reduced_with_top: usize,
    pub amalgamated: usize,
}

pub fn kernel_report(n: usize) -> Result<KernelReport> {
    let (_, tri) = sln::build_sln_network(n)?;
    let form = tri.torus.form();
    let corner = |a: usize, b: usize, c: usize| -> Result<u32> { tri.face_id(a, b, c) };
    let corners = [corner(n, 0, 0)?, corner(0, n, 0)?, corner(0, 0, n)?];
    // full-rank quiver: all faces except the three corners
    let full: Vec<u32> = (0..tri.torus.dim() as u32)
        .filter(|f| !corners.contains(f))
        .collect();
    // reduced: additionally drop the bottom frozen faces (c = 0), keeping
    // the variables of M1
    let reduced: Vec<u32> = full
        .iter()
        .copied()
        .filter(|f| {
            let (_, _, c) = tri.triple(*f).unwrap();
            c != 0
        })
        .collect();
    // reduced with the top corner (0,0,n) restored
    let mut reduced_top = reduced.clone();
    reduced_top.push(corner(0, 0, n)?);
    reduced_top.sort_unstable();
    let amalg = standard_amalgamation(&tri)?;
    let amalg_faces: Vec<u32> = (0..amalg.torus.dim() as u32)
        .filter(|f| {
            let name = amalg.torus.face_name(*f);
            if name.starts_with("Zb") {
                return true;
            }
            let (a, b, c) = match parse_triple(name) {
                Some(t) => t,
                None => return false,
            };
            // drop the three corners; keep interior and the remaining frozen
            // right-side faces
            !(a == n || b == n || c == n)
        })
        .collect();
    Ok(KernelReport {
        full_rank: casimir_kernel(form, &full).len(),
        reduced: casimir_kernel(form, &reduced).len(),
        reduced_with_top: casimir_kernel(form, &reduced_top).len(),
        amalgamated: casimir_kernel(amalg.torus.form(), &amalg_faces).len(),
    })
}

fn parse_triple(name: &str) -> Option<(usize, usize, usize)> {
    let body = name.strip_prefix('Z')?;
    let mut it = body.split('.');
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    let c = it.next()?.parse().ok()?;
    Some((a, b, c))
}

/// Convenience: face id of `Z{a}.{b}.{c}` in the amalgamated torus (through
/// the pushforward).
pub fn amalg_face(
    tri: &TriangleTorus,
    amalg: &AmalgamatedTorus,
    a: usize,
    b: usize,
    c: usize,
) -> Result<u32> {
    Ok(amalg.pushforward[&tri.face_id(a, b, c)?])
}


/// Pushforward helper usable from integration tests.
pub fn push_matrix_helper(am: &AmalgamatedTorus, m: &QuantumMatrix) -> QuantumMatrix {
    am.push_matrix(m)
}
