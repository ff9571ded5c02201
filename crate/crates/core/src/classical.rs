//! Commutative Laurent expressions with rational exponents and rational
//! coefficients, plus rational functions of them.  This is the classical
//! (q = 1) side of the engine: cluster seeds, Poisson brackets and the
//! factorized transport formula all live here.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{QgError, Result};
use crate::qtorus::{ExponentVector, TorusElement};
use crate::rat::{Rat, rat_to_string};

/// A finite sum of rational multiples of monomials in the face variables,
/// exponents rational.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassicalPoly {
    pub terms: BTreeMap<ExponentVector, Rat>,
}

impl ClassicalPoly {
    pub fn zero() -> Self {
        ClassicalPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        ClassicalPoly::monomial(ExponentVector::zero(), Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        ClassicalPoly::monomial(ExponentVector::zero(), c)
    }

    pub fn var(face: u32) -> Self {
        ClassicalPoly::monomial(ExponentVector::unit(face), Rat::one())
    }

    pub fn monomial(v: ExponentVector, c: Rat) -> Self {
        let mut p = ClassicalPoly::zero();
        p.add_term(v, c);
        p
    }

    pub fn add_term(&mut self, v: ExponentVector, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(v.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ClassicalPoly {
            terms: self
                .terms
                .iter()
                .map(|(v, c)| (v.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ClassicalPoly::zero();
        for (va, ca) in &self.terms {
            for (vb, cb) in &other.terms {
                out.add_term(va.add(vb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return ClassicalPoly::zero();
        }
        ClassicalPoly {
            terms: self.terms.iter().map(|(v, x)| (v.clone(), x * c)).collect(),
        }
    }

    /// Inverse of a single monomial.
    pub fn invert_monomial(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(QgError::NotInvertible(
                "classical inverse needs a monomial".into(),
            ));
        }
        let (v, c) = self.terms.iter().next().unwrap();
        Ok(ClassicalPoly::monomial(v.neg(), Rat::one() / c))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.invert_monomial()?.pow(-k);
        }
        let mut acc = ClassicalPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Monomial to a rational power.
    pub fn monomial_pow(&self, r: &Rat) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(QgError::NotInvertible(
                "rational powers need a monomial".into(),
            ));
        }
        let (v, c) = self.terms.iter().next().unwrap();
        if !c.is_one() {
            return Err(QgError::NotInvertible(
                "rational powers need coefficient one".into(),
            ));
        }
        Ok(ClassicalPoly::monomial(v.scale(r), Rat::one()))
    }

    /// The q = 1 image of a torus element.
    pub fn from_torus_element(x: &TorusElement) -> Self {
        ClassicalPoly {
            terms: x.classical(),
        }
    }

    /// Substitutes rational functions for the variables.  All exponents must
    /// be integers.
    pub fn compose(&self, subs: &BTreeMap<u32, ClassicalRational>) -> Result<ClassicalRational> {
        let mut acc = ClassicalRational::zero();
        for (v, c) in &self.terms {
            let mut term = ClassicalRational::constant(c.clone());
            for (face, e) in v.iter() {
                if !crate::rat::is_integer(e) {
                    return Err(QgError::InvalidArgument(
                        "composition needs integer exponents".into(),
                    ));
                }
                let k: i64 = e.to_integer().try_into().map_err(|_| {
                    QgError::InvalidArgument("exponent too large".into())
                })?;
                let base = subs.get(face).cloned().unwrap_or_else(|| {
                    ClassicalRational::from_poly(ClassicalPoly::var(*face))
                });
                term = term.mul(&base.pow(k)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Splits off the monomial N with N = prod v^{-2 min_exp(v)} so that
    /// self * N^{1/2} has nonnegative exponents; returns (N, G) with
    /// G = self * N^{1/2}.
    pub fn normal_split(&self) -> (ExponentVector, ClassicalPoly) {
        let mut mins: BTreeMap<u32, Rat> = BTreeMap::new();
        for (v, _) in &self.terms {
            for (f, e) in v.iter() {
                let cur = mins.entry(*f).or_insert_with(Rat::zero);
                if e < cur {
                    *cur = e.clone();
                }
            }
        }
        let half = ExponentVector::from_pairs(
            mins.iter()
                .filter(|(_, e)| e.is_negative())
                .map(|(f, e)| (*f, -e.clone())),
        );
        let n = half.scale(&crate::rat::rat_int(2));
        let mut g = ClassicalPoly::zero();
        for (v, c) in &self.terms {
            g.add_term(v.add(&half), c.clone());
        }
        (n, g)
    }

    /// Evaluates at an all-positive rational point (variables with integer
    /// exponents only).
    pub fn eval(&self, point: &BTreeMap<u32, Rat>) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (v, c) in &self.terms {
            let mut t = c.clone();
            for (f, e) in v.iter() {
                if !crate::rat::is_integer(e) {
                    return Err(QgError::InvalidArgument(
                        "evaluation needs integer exponents".into(),
                    ));
                }
                let base = point
                    .get(f)
                    .cloned()
                    .ok_or_else(|| QgError::InvalidArgument("missing point coordinate".into()))?;
                let k: i64 = e.to_integer().try_into().map_err(|_| {
                    QgError::InvalidArgument("exponent too large".into())
                })?;
                let p = if k >= 0 {
                    num_traits::pow::pow(base, k as usize)
                } else {
                    Rat::one() / num_traits::pow::pow(base, (-k) as usize)
                };
                t *= p;
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Display for ClassicalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", rat_to_string(c))?;
            for (face, e) in v.iter() {
                write!(f, "*x{}^{}", face, rat_to_string(e))?;
            }
        }
        Ok(())
    }
}

/// A ratio of classical Laurent polynomials.  Equality is decided by
/// cross-multiplication of fully expanded numerators.
#[derive(Clone, Debug)]
pub struct ClassicalRational {
    pub num: ClassicalPoly,
    pub den: ClassicalPoly,
}

impl ClassicalRational {
    pub fn zero() -> Self {
        ClassicalRational {
            num: ClassicalPoly::zero(),
            den: ClassicalPoly::one(),
        }
    }

    pub fn one() -> Self {
        ClassicalRational::from_poly(ClassicalPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        ClassicalRational::from_poly(ClassicalPoly::constant(c))
    }

    pub fn var(face: u32) -> Self {
        ClassicalRational::from_poly(ClassicalPoly::var(face))
    }

    pub fn from_poly(p: ClassicalPoly) -> Self {
        ClassicalRational {
            num: p,
            den: ClassicalPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Pulls a common monomial out of num and den so intermediate sizes stay
    /// modest; not a full gcd.
    fn tidy(mut self) -> Self {
        if self.num.is_zero() {
            self.den = ClassicalPoly::one();
            return self;
        }
        // divide both by the monomial content of the denominator if it is one
        if self.den.terms.len() == 1 {
            let (v, c) = self.den.terms.iter().next().unwrap();
            let shift = v.neg();
            let scale = Rat::one() / c;
            let mut num = ClassicalPoly::zero();
            for (tv, tc) in &self.num.terms {
                num.add_term(tv.add(&shift), tc * &scale);
            }
            return ClassicalRational {
                num,
                den: ClassicalPoly::one(),
            };
        }
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(ClassicalRational {
            num: self
                .num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .tidy())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ClassicalRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(ClassicalRational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .tidy())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(QgError::NotInvertible("division by zero".into()));
        }
        Ok(ClassicalRational {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .tidy())
    }

    pub fn inv(&self) -> Result<Self> {
        ClassicalRational::one().div(self)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = ClassicalRational::one();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Exact equality by cross-multiplication.
    pub fn eq_rational(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    pub fn eval(&self, point: &BTreeMap<u32, Rat>) -> Result<Rat> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(QgError::NotInvertible("pole at sample point".into()));
        }
        Ok(self.num.eval(point)? / d)
    }
}

impl fmt::Display for ClassicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Dense commutative matrix of classical polynomials (used by the factorized
/// transport formula and the toy specializations).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ClassicalPoly>,
}

impl ClassicalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ClassicalMatrix {
            rows,
            cols,
            entries: vec![ClassicalPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ClassicalMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, ClassicalPoly::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &ClassicalPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ClassicalPoly) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QgError::DimensionMismatch("classical matrix mul".into()));
        }
        let mut out = ClassicalMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc = ClassicalPoly::zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(other.get(j, k)));
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = ClassicalMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Cofactor determinant; fine at desk scale.
    pub fn det(&self) -> Result<ClassicalPoly> {
        if self.rows != self.cols {
            return Err(QgError::DimensionMismatch("det needs square".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ClassicalPoly::one());
        }
        if n == 1 {
            return Ok(self.get(0, 0).clone());
        }
        let mut acc = ClassicalPoly::zero();
        for j in 0..n {
            let e = self.get(0, j);
            if e.is_zero() {
                continue;
            }
            let mut minor = ClassicalMatrix::zero(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor.set(i - 1, cc, self.get(i, c).clone());
                    cc += 1;
                }
            }
            let term = e.mul(&minor.det()?);
            acc = if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        Ok(acc)
    }
}
