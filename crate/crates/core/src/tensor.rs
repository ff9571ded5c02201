//! Trigonometric R-matrices, doubled-space products, and the catalog of
//! machine-verified identities: RTT and cross relations (raw and
//! normalized), the groupoid relation, the reflection equation (plain and
//! generalized), the two-triangle Goldman relation and commuting paths, and
//! the grassmannian RTT relation.

use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::anq::{self, merge_tori, transfer_matrix};
use crate::error::{QgError, Result};
use crate::matrix::QuantumMatrix;
use crate::network::{TruncationPolicy, WeightedNetwork};
use crate::qtorus::{QCoefficient, Torus, TorusElement};
use crate::rat::{rat, rat_int, Int, Rat};
use crate::sln;
use num_traits::Zero;

/// Which R-matrix: the bare one of the raw transports, or the trigonometric
/// one with the q^{-1/k} prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RMatrixSpec {
    pub k: usize,
    pub normalized: bool,
}

/// The k^2 x k^2 scalar R-matrix
/// `sum e_ii (x) e_jj + (q-1) sum e_ii (x) e_ii + (q-q^{-1}) sum_{j<i} e_ij (x) e_ji`,
/// optionally scaled by q^{-1/k}.
pub fn r_matrix(torus: &Arc<Torus>, spec: RMatrixSpec) -> QuantumMatrix {
    let k = spec.k;
    let mut m = QuantumMatrix::zero(torus, k * k, k * k);
    let coef = |c: QCoefficient| -> QCoefficient {
        if spec.normalized {
            c.shift(&(-rat(1, k as i64)))
        } else {
            c
        }
    };
    let put = |m: &mut QuantumMatrix, i: usize, j: usize, kk: usize, l: usize, c: QCoefficient| {
        // term e_{i j} (x) e_{kk l} lands at ((i,kk),(j,l))
        let row = (i - 1) * k + (kk - 1);
        let col = (j - 1) * k + (l - 1);
        let cur = m.get(row, col).clone();
        m.set(
            row,
            col,
            cur.add(&TorusElement::scalar(torus, c)).unwrap(),
        );
    };
    for i in 1..=k {
        for j in 1..=k {
            put(&mut m, i, i, j, j, coef(QCoefficient::one()));
        }
    }
    for i in 1..=k {
        // (q - 1) e_ii (x) e_ii
        let mut c = QCoefficient::q_power(rat_int(1));
        c.add_term(Rat::zero(), Int::from(-1));
        put(&mut m, i, i, i, i, coef(c));
    }
    for i in 1..=k {
        for j in 1..j_bound(i) {
            // (q - q^{-1}) e_ij (x) e_ji for j < i
            let mut c = QCoefficient::q_power(rat_int(1));
            c.add_term(rat_int(-1), Int::from(-1));
            put(&mut m, i, j, j, i, coef(c));
        }
    }
    m
}

fn j_bound(i: usize) -> usize {
    i
}

/// Substitutes q -> q^{-1} entrywise.
pub fn bar_q(m: &QuantumMatrix) -> QuantumMatrix {
    m.map(|e| e.bar_q())
}

/// Verification outcome of one identity instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: String,
    pub n: usize,
    pub outcome: Outcome,
    pub detail: String,
    /// first counterexample (row, col, residual) in row-major order
    pub counterexample: Option<(usize, usize, String)>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    fn from_residual(id: &str, n: usize, residual: &QuantumMatrix, detail: &str) -> Verdict {
        match residual.first_nonzero() {
            None => Verdict {
                id: id.into(),
                n,
                outcome: Outcome::Holds,
                detail: detail.into(),
                counterexample: None,
            },
            Some((i, j, e)) => Verdict {
                id: id.into(),
                n,
                outcome: Outcome::Fails,
                detail: detail.into(),
                counterexample: Some((i, j, format!("{e}"))),
            },
        }
    }

    pub fn inconclusive(id: &str, n: usize, why: &str) -> Verdict {
        Verdict {
            id: id.into(),
            n,
            outcome: Outcome::Inconclusive,
            detail: why.into(),
            counterexample: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IdentityId {
    RttRaw,
    CrossRaw,
    RttNorm,
    CrossNorm,
    Groupoid,
    Reflection,
    ReflectionGen,
    Goldman,
    CommutingPaths,
    GrassmannRtt,
}

impl IdentityId {
    pub fn all() -> [IdentityId; 10] {
        use IdentityId::*;
        [
            RttRaw,
            CrossRaw,
            RttNorm,
            CrossNorm,
            Groupoid,
            Reflection,
            ReflectionGen,
            Goldman,
            CommutingPaths,
            GrassmannRtt,
        ]
    }

    pub fn name(&self) -> &'static str {
        use IdentityId::*;
        match self {
            RttRaw => "rtt-raw",
            CrossRaw => "cross-raw",
            RttNorm => "rtt-norm",
            CrossNorm => "cross-norm",
            Groupoid => "groupoid",
            Reflection => "reflection",
            ReflectionGen => "reflection-gen",
            Goldman => "goldman",
            CommutingPaths => "commuting-paths",
            GrassmannRtt => "grassmann-rtt",
        }
    }
}

impl FromStr for IdentityId {
    type Err = QgError;
    fn from_str(s: &str) -> Result<Self> {
        use IdentityId::*;
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "rtt-raw" => Ok(RttRaw),
            "cross-raw" => Ok(CrossRaw),
            "rtt-norm" => Ok(RttNorm),
            "cross-norm" => Ok(CrossNorm),
            "groupoid" => Ok(Groupoid),
            "reflection" => Ok(Reflection),
            "reflection-gen" => Ok(ReflectionGen),
            "goldman" => Ok(Goldman),
            "commuting-paths" => Ok(CommutingPaths),
            "grassmann-rtt" => Ok(GrassmannRtt),
            other => Err(QgError::InvalidArgument(format!(
                "unknown identity `{other}`"
            ))),
        }
    }
}

/// Options for a verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub budget: Option<Duration>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { budget: None }
    }
}

struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    fn new(opts: &VerifyOptions) -> Budget {
        Budget {
            start: Instant::now(),
            limit: opts.budget,
        }
    }
    fn exhausted(&self) -> bool {
        match self.limit {
            Some(l) => self.start.elapsed() > l,
            None => false,
        }
    }
}

// doubled-space helpers: 1X 2Y as a product of embeddings
fn sp1(x: &QuantumMatrix, k: usize) -> Result<QuantumMatrix> {
    x.embed_space1(k)
}
fn sp2(y: &QuantumMatrix, n: usize) -> Result<QuantumMatrix> {
    y.embed_space2(n)
}

/// Verifies one identity; exact symbolic zero or a first counterexample.
pub fn verify_identity(id: IdentityId, n: usize, opts: &VerifyOptions) -> Result<Verdict> {
    let budget = Budget::new(opts);
    let v = match id {
        IdentityId::RttRaw => rtt_raw(n)?,
        IdentityId::CrossRaw => cross_raw(n)?,
        IdentityId::RttNorm => rtt_norm(n)?,
        IdentityId::CrossNorm => cross_norm(n)?,
        IdentityId::Groupoid => groupoid(n)?,
        IdentityId::Reflection => reflection(n)?,
        IdentityId::ReflectionGen => reflection_gen(n)?,
        IdentityId::Goldman => goldman(n)?,
        IdentityId::CommutingPaths => commuting_paths(n)?,
        IdentityId::GrassmannRtt => grassmann_rtt(n)?,
    };
    if budget.exhausted() && !v.holds() {
        return Ok(Verdict::inconclusive(id.name(), n, "budget exhausted"));
    }
    Ok(v)
}

fn rtt_raw(n: usize) -> Result<Verdict> {
    let (m1, m2, tri) = sln::raw_transport(n)?;
    let t = &tri.torus;
    let r = r_matrix(t, RMatrixSpec { k: n, normalized: false });
    let mut detail = String::new();
    for (label, m) in [("raw1", &m1), ("raw2", &m2)] {
        let lhs = r.mul(&sp1(m, n)?)?.mul(&sp2(m, n)?)?;
        let rhs = sp2(m, n)?.mul(&sp1(m, n)?)?.mul(&r)?;
        let res = lhs.sub(&rhs)?;
        if let Some((i, j, e)) = res.first_nonzero() {
            return Ok(Verdict {
                id: "rtt-raw".into(),
                n,
                outcome: Outcome::Fails,
                detail: format!("{label} fails"),
                counterexample: Some((i, j, format!("{e}"))),
            });
        }
        detail.push_str(&format!("{label} ok; "));
    }
    Ok(Verdict {
        id: "rtt-raw".into(),
        n,
        outcome: Outcome::Holds,
        detail,
        counterexample: None,
    })
}

fn cross_raw(n: usize) -> Result<Verdict> {
    let (m1, m2, tri) = sln::raw_transport(n)?;
    let t = &tri.torus;
    let r = r_matrix(t, RMatrixSpec { k: n, normalized: false });
    let lhs = sp1(&m1, n)?.mul(&sp2(&m2, n)?)?;
    let rhs = sp2(&m2, n)?.mul(&sp1(&m1, n)?)?.mul(&r)?;
    Ok(Verdict::from_residual("cross-raw", n, &lhs.sub(&rhs)?, ""))
}

fn rtt_norm(n: usize) -> Result<Verdict> {
    let (m1, m2, tri) = sln::normalized_transport(n)?;
    let t = &tri.torus;
    let r = r_matrix(t, RMatrixSpec { k: n, normalized: true });
    let rt = r.transpose();
    let mut detail = String::new();
    for (label, m) in [("m1", &m1), ("m2", &m2)] {
        // main displayed form: R^T 1M 2M = 2M 1M R
        let lhs = rt.mul(&sp1(m, n)?)?.mul(&sp2(m, n)?)?;
        let rhs = sp2(m, n)?.mul(&sp1(m, n)?)?.mul(&r)?;
        let res = lhs.sub(&rhs)?;
        if let Some((i, j, e)) = res.first_nonzero() {
            return Ok(Verdict {
                id: "rtt-norm".into(),
                n,
                outcome: Outcome::Fails,
                detail: format!("{label} main form fails"),
                counterexample: Some((i, j, format!("{e}"))),
            });
        }
        // equivalent displayed form: 1M 2M R^T = R 2M 1M
        let lhs2 = sp1(m, n)?.mul(&sp2(m, n)?)?.mul(&rt)?;
        let rhs2 = r.mul(&sp2(m, n)?)?.mul(&sp1(m, n)?)?;
        let res2 = lhs2.sub(&rhs2)?;
        if let Some((i, j, e)) = res2.first_nonzero() {
            return Ok(Verdict {
                id: "rtt-norm".into(),
                n,
                outcome: Outcome::Fails,
                detail: format!("{label} equivalent form fails"),
                counterexample: Some((i, j, format!("{e}"))),
            });
        }
        detail.push_str(&format!("{label}: both displayed forms hold; "));
    }
    Ok(Verdict {
        id: "rtt-norm".into(),
        n,
        outcome: Outcome::Holds,
        detail,
        counterexample: None,
    })
}

fn cross_norm(n: usize) -> Result<Verdict> {
    let (m1, m2, tri) = sln::normalized_transport(n)?;
    let t = &tri.torus;
    let r = r_matrix(t, RMatrixSpec { k: n, normalized: true });
    let lhs = sp1(&m1, n)?.mul(&sp2(&m2, n)?)?;
    let rhs = sp2(&m2, n)?.mul(&sp1(&m1, n)?)?.mul(&r)?;
    Ok(Verdict::from_residual("cross-norm", n, &lhs.sub(&rhs)?, ""))
}

fn groupoid(n: usize) -> Result<Verdict> {
    let (m1, m2, _) = sln::normalized_transport(n)?;
    let (m3, _) = sln::m3_transport(n)?;
    let res = m3.mul(&m1)?.sub(&m2)?;
    Ok(Verdict::from_residual("groupoid", n, &res, "M3 M1 = M2"))
}

fn reflection_residual(a: &QuantumMatrix, n: usize) -> Result<QuantumMatrix> {
    let t = a.torus();
    let r = r_matrix(t, RMatrixSpec { k: n, normalized: true });
    let rt1 = r.partial_transpose_1()?;
    let lhs = r
        .mul(&sp1(a, n)?)?
        .mul(&rt1)?
        .mul(&sp2(a, n)?)?;
    let rhs = sp2(a, n)?
        .mul(&rt1)?
        .mul(&sp1(a, n)?)?
        .mul(&r)?;
    lhs.sub(&rhs)
}

fn reflection(n: usize) -> Result<Verdict> {
    let rm = anq::build_a(n)?;
    let res = reflection_residual(&rm.a, n)?;
    Ok(Verdict::from_residual(
        "reflection",
        n,
        &res,
        "R 1A R^t1 2A = 2A R^t1 1A R",
    ))
}

fn reflection_gen(n: usize) -> Result<Verdict> {
    // A over triangle 1, Mgamma = M1 of an independent triangle 2
    let (a1, tri1) = anq::build_a_unamalgamated(n)?;
    let (g1, _, tri2) = sln::normalized_transport(n)?;
    let (merged, map1, map2) = merge_tori(&tri1.torus, "P:", &tri2.torus, "Q:");
    let a = transfer_matrix(&a1, &merged, &map1);
    let mg = transfer_matrix(&g1, &merged, &map2);
    let s = QuantumMatrix::antidiagonal_s(&merged, n);
    let agen = anq::build_a_gen(&a, &s, &mg)?;
    let res = reflection_residual(&agen, n)?;
    Ok(Verdict::from_residual(
        "reflection-gen",
        n,
        &res,
        "A_gen = Mg^T S^T A S Mg satisfies the reflection equation",
    ))
}

/// Two triangles glued along their bottom sides (pairwise amalgamation of
/// the side faces, then unfrozen): returns the four normalized transports
/// over the glued torus.
fn glued_transports(
    n: usize,
) -> Result<(QuantumMatrix, QuantumMatrix, QuantumMatrix, QuantumMatrix, Arc<Torus>)> {
    let (m1a, m2a, tri1) = sln::normalized_transport(n)?;
    let (m1b, m2b, tri2) = sln::normalized_transport(n)?;
    let (merged, map1, map2) = merge_tori(&tri1.torus, "P:", &tri2.torus, "Q:");
    // amalgamate bottom faces (a,b,0), a,b >= 1 pairwise, same labels
    let mut pairs = Vec::new();
    for a in 1..n {
        let b = n - a;
        pairs.push((
            map1[&tri1.face_id(a, b, 0)?],
            map2[&tri2.face_id(a, b, 0)?],
        ));
    }
    let frozen = vec![true; merged.dim()];
    let amalg = anq::amalgamate(&merged, &pairs, &frozen)?;
    let push = |m: &QuantumMatrix, map: &std::collections::BTreeMap<u32, u32>| {
        amalg.push_matrix(&transfer_matrix(m, &merged, map))
    };
    Ok((
        push(&m1a, &map1),
        push(&m2a, &map1),
        push(&m1b, &map2),
        push(&m2b, &map2),
        amalg.torus.clone(),
    ))
}

fn commuting_paths(n: usize) -> Result<Verdict> {
    let (m1a, m2a, m1b, m2b, t) = glued_transports(n)?;
    let s = QuantumMatrix::antidiagonal_s(&t, n);
    // X = M2^{(2)} S (M1^{(1)})^{-1}, Y = M1^{(2)} S (M2^{(1)})^{-1}
    let x = m2b.mul(&s)?.mul(&m1a.invert_antitriangular()?)?;
    let y = m1b.mul(&s)?.mul(&m2a.invert_antitriangular()?)?;
    let lhs = sp1(&x, n)?.mul(&sp2(&y, n)?)?;
    let rhs = sp2(&y, n)?.mul(&sp1(&x, n)?)?;
    Ok(Verdict::from_residual(
        "commuting-paths",
        n,
        &lhs.sub(&rhs)?,
        "nonintersecting composite transports commute",
    ))
}

fn goldman(n: usize) -> Result<Verdict> {
    let (m1a, m2a, m1b, m2b, t) = glued_transports(n)?;
    let s = QuantumMatrix::antidiagonal_s(&t, n);
    // X = M2^{(2)} S (M1^{(1)})^{-1}, Y = M1^{(2)} S (M2^{(1)})^{-1}
    // (intersecting configuration)
    let x = m2b.mul(&s)?.mul(&m1a.invert_antitriangular()?)?;
    let y = m1b.mul(&s)?.mul(&m2a.invert_antitriangular()?)?;
    let u = m1b.mul(&s)?.mul(&m1a.invert_antitriangular()?)?;
    let v = m2b.mul(&s)?.mul(&m2a.invert_antitriangular()?)?;
    let p = QuantumMatrix::permutation_p(&t, n);
    let qp = QCoefficient::q_power(rat(1, n as i64));
    let qm = QCoefficient::q_power(-rat(1, n as i64));
    let lhs = sp1(&x, n)?
        .mul(&sp2(&y, n)?)?
        .scale(&qp)
        .sub(&sp2(&y, n)?.mul(&sp1(&x, n)?)?.scale(&qm))?;
    // RHS: (q^{-1} - q) 2(M1b S M2a^{-1}-ish) ... per the displayed relation:
    // (q^{-1}-q) [2U][1V] P with U = M1^{(2)} S (M1^{(1)})^{-1},
    // V = M2^{(2)} S (M2^{(1)})^{-1}
    let mut c = QCoefficient::q_power(rat_int(-1));
    c.add_term(rat_int(1), Int::from(-1));
    let rhs = sp2(&u, n)?.mul(&sp1(&v, n)?)?.mul(&p)?.scale(&c);
    Ok(Verdict::from_residual(
        "goldman",
        n,
        &lhs.sub(&rhs)?,
        "q^{1/n} XY - q^{-1/n} YX = (q^{-1}-q) 2U 1V P",
    ))
}

fn grassmann_rtt(n: usize) -> Result<Verdict> {
    // stacked SL_n measurement matrix: (2n x n), R_{2n} on the left,
    // R_n on the right (both bare)
    let (net, tri) = sln::build_sln_network(n)?;
    let wn = WeightedNetwork::canonical(net)?;
    if !Torus::same_torus(&wn.torus, &tri.torus) {
        return Err(QgError::TorusMismatch("triangle torus mismatch".into()));
    }
    let q = wn.measurement_matrix(TruncationPolicy::Unlimited)?;
    let m = q.rows();
    let t = &wn.torus;
    let rm = r_matrix(t, RMatrixSpec { k: m, normalized: false });
    let rn = r_matrix(t, RMatrixSpec { k: n, normalized: false });
    let lhs = rm.mul(&QuantumMatrix::kron(&q, &q)?)?;
    let rhs = QuantumMatrix::kron2_first(&q, &q)?.mul(&rn)?;
    Ok(Verdict::from_residual(
        "grassmann-rtt",
        n,
        &lhs.sub(&rhs)?,
        "R_m 1Q 2Q = 2Q 1Q R_n on the triangle measurement matrix",
    ))
}
