//! Exact arithmetic in a quantum torus: lattice exponent vectors over a face
//! set, a skew-symmetric rational pairing, Laurent coefficients in rational
//! powers of `q`, and Weyl (symmetric) ordering.
//!
//! The multiplication law is `Z_a · Z_b = q^{<a,b>} Z_{a+b}`, extended
//! bilinearly.  All values are immutable; every operation is a pure function.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{QgError, Result};
use crate::rat::{is_integer, parse_rat, rat_to_string, Int, Rat};

// ---------------------------------------------------------------------------
// Skew form and torus
// ---------------------------------------------------------------------------

/// Antisymmetric rational pairing on the face lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    dim: usize,
    entries: Vec<Rat>, // row-major dim x dim
}

impl SkewForm {
    pub fn zero(dim: usize) -> Self {
        SkewForm {
            dim,
            entries: vec![Rat::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> &Rat {
        &self.entries[a * self.dim + b]
    }

    /// Adds `v` to the (a,b) entry and `-v` to (b,a).
    pub fn add_pair(&mut self, a: usize, b: usize, v: Rat) {
        if a == b {
            return;
        }
        let d = self.dim;
        self.entries[a * d + b] += &v;
        self.entries[b * d + a] -= &v;
    }

    pub fn set_pair(&mut self, a: usize, b: usize, v: Rat) {
        if a == b {
            return;
        }
        let d = self.dim;
        self.entries[b * d + a] = -v.clone();
        self.entries[a * d + b] = v;
    }

    pub fn is_antisymmetric(&self) -> bool {
        for a in 0..self.dim {
            for b in 0..self.dim {
                if *self.get(a, b) != -self.get(b, a).clone() {
                    return false;
                }
            }
        }
        true
    }

    /// Bilinear extension to sparse rational vectors.
    pub fn pair_vec(&self, x: &ExponentVector, y: &ExponentVector) -> Rat {
        let mut acc = Rat::zero();
        for (i, xi) in x.iter() {
            for (j, yj) in y.iter() {
                let p = self.get(*i as usize, *j as usize);
                if !p.is_zero() {
                    acc += xi * yj * p;
                }
            }
        }
        acc
    }
}

/// A face set together with its skew form.  Shared immutably by all elements
/// living over it.
#[derive(Debug)]
pub struct Torus {
    names: Vec<String>,
    index: BTreeMap<String, u32>,
    form: SkewForm,
}

impl PartialEq for Torus {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.form == other.form
    }
}
impl Eq for Torus {}

impl Torus {
    pub fn new(names: Vec<String>, form: SkewForm) -> Arc<Self> {
        assert_eq!(names.len(), form.dim(), "face count must match form size");
        debug_assert!(form.is_antisymmetric());
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        Arc::new(Torus { names, index, form })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn face_name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn face_id(&self, name: &str) -> Result<u32> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| QgError::UnknownFace(name.to_string()))
    }

    pub fn form(&self) -> &SkewForm {
        &self.form
    }

    pub fn same_torus(a: &Arc<Torus>, b: &Arc<Torus>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

// ---------------------------------------------------------------------------
// Exponent vectors
// ---------------------------------------------------------------------------

/// Finitely supported association face-id -> rational exponent.  No zero
/// entries are stored; iteration order is ascending by face id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExponentVector(BTreeMap<u32, Rat>);

impl ExponentVector {
    pub fn zero() -> Self {
        ExponentVector(BTreeMap::new())
    }

    pub fn unit(face: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(face, Rat::one());
        ExponentVector(m)
    }

    pub fn single(face: u32, exp: Rat) -> Self {
        let mut v = ExponentVector::zero();
        v.set(face, exp);
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Rat)>>(it: I) -> Self {
        let mut v = ExponentVector::zero();
        for (f, e) in it {
            v.add_to(f, e);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, face: u32) -> Rat {
        self.0.get(&face).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, face: u32, exp: Rat) {
        if exp.is_zero() {
            self.0.remove(&face);
        } else {
            self.0.insert(face, exp);
        }
    }

    pub fn add_to(&mut self, face: u32, exp: Rat) {
        let cur = self.get(face) + exp;
        self.set(face, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &Rat)> {
        self.0.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, e) in other.iter() {
            out.add_to(*f, e.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExponentVector(self.0.iter().map(|(f, e)| (*f, -e.clone())).collect())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return ExponentVector::zero();
        }
        ExponentVector(self.0.iter().map(|(f, e)| (*f, e * s)).collect())
    }

    /// Sum of all entries (the total degree used by truncation policies).
    pub fn total_degree(&self) -> Rat {
        let mut acc = Rat::zero();
        for (_, e) in self.iter() {
            acc += e;
        }
        acc
    }

    pub fn all_integer(&self) -> bool {
        self.iter().all(|(_, e)| is_integer(e))
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on the sparse (face-id, exponent) sequence.
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((fa, ea)), Some((fb, eb))) => {
                    match fa.cmp(fb).then_with(|| ea.cmp(eb)) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// q-coefficients
// ---------------------------------------------------------------------------

/// A finite sum of integer multiples of rational powers of q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct QCoefficient(BTreeMap<Rat, Int>);

impl QCoefficient {
    pub fn zero() -> Self {
        QCoefficient(BTreeMap::new())
    }

    pub fn one() -> Self {
        QCoefficient::q_power(Rat::zero())
    }

    /// The monomial q^r.
    pub fn q_power(r: Rat) -> Self {
        let mut m = BTreeMap::new();
        m.insert(r, Int::one());
        QCoefficient(m)
    }

    pub fn int(c: i64) -> Self {
        let mut q = QCoefficient::zero();
        q.add_term(Rat::zero(), Int::from(c));
        q
    }

    pub fn term(r: Rat, c: Int) -> Self {
        let mut q = QCoefficient::zero();
        q.add_term(r, c);
        q
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1
            && self
                .0
                .get(&Rat::zero())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn add_term(&mut self, r: Rat, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(r.clone()).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&r);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, c) in &other.0 {
            out.add_term(r.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QCoefficient(self.0.iter().map(|(r, c)| (r.clone(), -c.clone())).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = QCoefficient::zero();
        for (r1, c1) in &self.0 {
            for (r2, c2) in &other.0 {
                out.add_term(r1 + r2, c1 * c2);
            }
        }
        out
    }

    /// Multiplies by q^r.
    pub fn shift(&self, r: &Rat) -> Self {
        QCoefficient(self.0.iter().map(|(e, c)| (e + r, c.clone())).collect())
    }

    /// Substitutes q = 1.
    pub fn eval_at_one(&self) -> Int {
        let mut acc = Int::zero();
        for c in self.0.values() {
            acc += c;
        }
        acc
    }

    /// Derivative with respect to epsilon of the substitution q = 1 + epsilon,
    /// taken at epsilon = 0: sum of r * c_r.
    pub fn d_deps_at_one(&self) -> Rat {
        let mut acc = Rat::zero();
        for (r, c) in &self.0 {
            acc += r * Rat::from_integer(c.clone());
        }
        acc
    }

    /// Inverse when the coefficient is a single term with unit integer part.
    pub fn invert(&self) -> Result<Self> {
        if self.0.len() != 1 {
            return Err(QgError::NotInvertible(format!("{}", self)));
        }
        let (r, c) = self.0.iter().next().unwrap();
        let inv_c = if c.is_one() {
            Int::one()
        } else if (-c.clone()).is_one() {
            -Int::one()
        } else {
            return Err(QgError::NotInvertible(format!("{}", self)));
        };
        Ok(QCoefficient::term(-r.clone(), inv_c))
    }

    /// Substitutes q -> q^{-1}.
    pub fn bar(&self) -> Self {
        QCoefficient(self.0.iter().map(|(r, c)| (-r.clone(), c.clone())).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Int)> {
        self.0.iter()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.values().all(|c| !c.is_negative())
    }
}

impl fmt::Display for QCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r.is_zero() {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "q^{}", rat_to_string(r))?;
            } else {
                write!(f, "{}*q^{}", c, rat_to_string(r))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Torus elements
// ---------------------------------------------------------------------------

/// A finitely supported sum of terms c(q) Z_v over a shared torus.
#[derive(Clone, Debug)]
pub struct TorusElement {
    torus: Arc<Torus>,
    terms: BTreeMap<ExponentVector, QCoefficient>,
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        Torus::same_torus(&self.torus, &other.torus) && self.terms == other.terms
    }
}
impl Eq for TorusElement {}

impl TorusElement {
    pub fn zero(torus: &Arc<Torus>) -> Self {
        TorusElement {
            torus: torus.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(torus: &Arc<Torus>) -> Self {
        TorusElement::monomial(torus, ExponentVector::zero())
    }

    /// The Weyl generator Z_v.
    pub fn monomial(torus: &Arc<Torus>, v: ExponentVector) -> Self {
        let mut t = TorusElement::zero(torus);
        t.add_term(v, QCoefficient::one());
        t
    }

    pub fn scalar(torus: &Arc<Torus>, c: QCoefficient) -> Self {
        let mut t = TorusElement::zero(torus);
        t.add_term(ExponentVector::zero(), c);
        t
    }

    pub fn generator(torus: &Arc<Torus>, face: u32) -> Self {
        TorusElement::monomial(torus, ExponentVector::unit(face))
    }

    pub fn torus(&self) -> &Arc<Torus> {
        &self.torus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &QCoefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&ExponentVector::zero())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn add_term(&mut self, v: ExponentVector, c: QCoefficient) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(v) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_torus(&self, other: &Self) -> Result<()> {
        if Torus::same_torus(&self.torus, &other.torus) {
            Ok(())
        } else {
            Err(QgError::TorusMismatch(
                "operands live over different tori".into(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_torus(other)?;
        let mut out = self.clone();
        for (v, c) in other.terms() {
            out.add_term(v.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusElement {
            torus: self.torus.clone(),
            terms: self
                .terms
                .iter()
                .map(|(v, c)| (v.clone(), c.neg()))
                .collect(),
        }
    }

    /// The product, extending `Z_a Z_b = q^{<a,b>} Z_{a+b}` bilinearly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_torus(other)?;
        let form = self.torus.form();
        let mut out = TorusElement::zero(&self.torus);
        for (va, ca) in self.terms() {
            for (vb, cb) in other.terms() {
                let tw = form.pair_vec(va, vb);
                let c = ca.mul(cb).shift(&tw);
                out.add_term(va.add(vb), c);
            }
        }
        Ok(out)
    }

    /// The Weyl (symmetric ordered) product: every pair of monomials combines
    /// as :Z_a Z_b: = Z_{a+b}, bilinearly.  Order-independent.
    pub fn weyl_mul(&self, other: &Self) -> Result<Self> {
        self.check_torus(other)?;
        let mut out = TorusElement::zero(&self.torus);
        for (va, ca) in self.terms() {
            for (vb, cb) in other.terms() {
                out.add_term(va.add(vb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QCoefficient) -> Self {
        let mut out = TorusElement::zero(&self.torus);
        for (v, cv) in self.terms() {
            out.add_term(v.clone(), cv.mul(c));
        }
        out
    }

    /// Integer power (nonnegative) using the true product.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut acc = TorusElement::one(&self.torus);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Inverse of a single-term element.
    pub fn invert_monomial(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(QgError::NotInvertible(
                "only monomials are invertible exactly".into(),
            ));
        }
        let (v, c) = self.terms.iter().next().unwrap();
        // Z_v^{-1} = Z_{-v}; the q-coefficient inverts separately since
        // scalars are central.
        let cinv = c.invert()?;
        Ok(TorusElement::monomial(&self.torus, v.neg()).scale(&cinv))
    }

    /// Substitutes q -> q^{-1} in every coefficient (Z exponents unchanged).
    pub fn bar_q(&self) -> Self {
        TorusElement {
            torus: self.torus.clone(),
            terms: self
                .terms
                .iter()
                .map(|(v, c)| (v.clone(), c.bar()))
                .collect(),
        }
    }

    /// Drops every term whose total Z-degree exceeds `max_deg`.
    pub fn truncate_degree(&self, max_deg: &Rat) -> Self {
        TorusElement {
            torus: self.torus.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(v, _)| v.total_degree() <= *max_deg)
                .map(|(v, c)| (v.clone(), c.clone()))
                .collect(),
        }
    }

    /// Commutative evaluation at q = 1 as a classical Laurent expression
    /// (exponent vector -> rational coefficient).
    pub fn classical(&self) -> BTreeMap<ExponentVector, Rat> {
        let mut out: BTreeMap<ExponentVector, Rat> = BTreeMap::new();
        for (v, c) in self.terms() {
            let val = Rat::from_integer(c.eval_at_one());
            if val.is_zero() {
                continue;
            }
            let e = out.entry(v.clone()).or_insert_with(Rat::zero);
            *e += val;
            if e.is_zero() {
                out.remove(v);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut terms = Vec::new();
        for (v, c) in self.terms() {
            let mut exp = serde_json::Map::new();
            for (f, e) in v.iter() {
                exp.insert(
                    self.torus.face_name(*f).to_string(),
                    serde_json::Value::String(rat_to_string(e)),
                );
            }
            let coef: Vec<serde_json::Value> = c
                .terms()
                .map(|(r, i)| {
                    serde_json::json!({ "qexp": rat_to_string(r), "c": i.to_string() })
                })
                .collect();
            terms.push(serde_json::json!({ "exp": exp, "coef": coef }));
        }
        serde_json::Value::Array(terms)
    }

    pub fn from_json(torus: &Arc<Torus>, value: &serde_json::Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| QgError::InvalidArgument("expected array of terms".into()))?;
        let mut out = TorusElement::zero(torus);
        for term in arr {
            let exp = term
                .get("exp")
                .and_then(|e| e.as_object())
                .ok_or_else(|| QgError::InvalidArgument("term missing exp".into()))?;
            let mut v = ExponentVector::zero();
            for (name, val) in exp {
                let face = torus.face_id(name)?;
                let r = val
                    .as_str()
                    .and_then(parse_rat)
                    .ok_or_else(|| QgError::InvalidArgument("bad exponent".into()))?;
                v.add_to(face, r);
            }
            let coef = term
                .get("coef")
                .and_then(|c| c.as_array())
                .ok_or_else(|| QgError::InvalidArgument("term missing coef".into()))?;
            let mut c = QCoefficient::zero();
            for entry in coef {
                let r = entry
                    .get("qexp")
                    .and_then(|x| x.as_str())
                    .and_then(parse_rat)
                    .ok_or_else(|| QgError::InvalidArgument("bad qexp".into()))?;
                let i: Int = entry
                    .get("c")
                    .and_then(|x| x.as_str())
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| QgError::InvalidArgument("bad integer coefficient".into()))?;
                c.add_term(r, i);
            }
            out.add_term(v, c);
        }
        Ok(out)
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (face, e) in v.iter() {
                write!(f, " {}^{}", self.torus.face_name(*face), rat_to_string(e))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Operations of the module surface
// ---------------------------------------------------------------------------

/// `Z_a Z_b = q^{<a,b>} Z_{a+b}` extended bilinearly.
pub fn weyl_product(a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
    a.mul(b)
}

/// The Weyl normal form of an ordered product of generators:
/// `q^{-sum_{j<k} <e_j,e_k>} Z_{e_1} ... Z_{e_t} = Z_{e_1+...+e_t}`.
pub fn weyl_normal_form(torus: &Arc<Torus>, gens: &[ExponentVector]) -> TorusElement {
    let mut sum = ExponentVector::zero();
    for g in gens {
        sum = sum.add(g);
    }
    TorusElement::monomial(torus, sum)
}

/// The exponent r with `Z_a Z_b = q^r Z_b Z_a`, namely 2<a,b>.
pub fn commutation_exponent(torus: &Torus, a: &ExponentVector, b: &ExponentVector) -> Rat {
    let two = Rat::from_integer(Int::from(2));
    torus.form().pair_vec(a, b) * two
}

/// Rational basis of `{ v supported on subset : <v, e_f> = 0 for all f in
/// subset }`, scaled to primitive integer vectors with a positive leading
/// entry.  Deterministic.
pub fn casimir_kernel(form: &SkewForm, subset: &[u32]) -> Vec<ExponentVector> {
    let k = subset.len();
    if k == 0 {
        return Vec::new();
    }
    // Matrix M[i][j] = <f_i, f_j>; kernel of v -> v^T M.
    let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); k]; k];
    for (i, fi) in subset.iter().enumerate() {
        for (j, fj) in subset.iter().enumerate() {
            m[i][j] = form.get(*fi as usize, *fj as usize).clone();
        }
    }
    // Null space of M^T x = 0 ... since v^T M = 0 <=> M^T v = 0.
    let mt: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| m[j][i].clone()).collect())
        .collect();
    let basis = null_space(mt, k);
    basis
        .into_iter()
        .map(|v| {
            let prim = primitive_integer(&v);
            ExponentVector::from_pairs(
                prim.into_iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(i, e)| (subset[i], e)),
            )
        })
        .collect()
}

/// Null space basis of an m x n rational matrix via Gauss-Jordan.
pub fn null_space(mut m: Vec<Vec<Rat>>, n: usize) -> Vec<Vec<Rat>> {
    let rows = m.len();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        // find pivot
        let mut piv = None;
        for i in r..rows {
            if !m[i][c].is_zero() {
                piv = Some(i);
                break;
            }
        }
        let Some(p) = piv else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let sub = &m[r][j] * &f;
                    m[i][j] -= sub;
                }
            }
        }
        pivot_col_of_row.push(c);
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for fc in free_cols {
        let mut v = vec![Rat::zero(); n];
        v[fc] = Rat::one();
        for (row, pc) in pivot_col_of_row.iter().enumerate() {
            v[*pc] = -m[row][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to integer entries with content one and a
/// positive first nonzero entry.
fn primitive_integer(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    let mut lcm = Int::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let scaled: Vec<Int> = v
        .iter()
        .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = Int::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<Int> = scaled.into_iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
    out.into_iter().map(Rat::from_integer).collect()
}
