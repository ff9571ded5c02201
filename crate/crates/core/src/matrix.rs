//! Rectangular matrices with entries in one quantum torus.  The product
//! convention is `(AB)_{ik} = sum_j A_{ij} B_{jk}` with the A-entry as the
//! left factor; transposition permutes entries without reordering products.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{QgError, Result};
use crate::qtorus::{QCoefficient, Torus, TorusElement};
use crate::rat::{rat, rat_int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumMatrix {
    torus: Arc<Torus>,
    rows: usize,
    cols: usize,
    entries: Vec<TorusElement>, // row-major
}

impl QuantumMatrix {
    pub fn zero(torus: &Arc<Torus>, rows: usize, cols: usize) -> Self {
        QuantumMatrix {
            torus: torus.clone(),
            rows,
            cols,
            entries: vec![TorusElement::zero(torus); rows * cols],
        }
    }

    pub fn identity(torus: &Arc<Torus>, n: usize) -> Self {
        let mut m = QuantumMatrix::zero(torus, n, n);
        for i in 0..n {
            m.set(i, i, TorusElement::one(torus));
        }
        m
    }

    /// Diagonal scalar matrix with entries q^{r_i}.
    pub fn diag_q_powers(torus: &Arc<Torus>, powers: &[Rat]) -> Self {
        let mut m = QuantumMatrix::zero(torus, powers.len(), powers.len());
        for (i, r) in powers.iter().enumerate() {
            m.set(
                i,
                i,
                TorusElement::scalar(torus, QCoefficient::q_power(r.clone())),
            );
        }
        m
    }

    /// The signed antidiagonal `S_{ij} = (-1)^{n-i} delta_{i,n+1-j}`
    /// (1-based indices as in the transport normalization).
    pub fn antidiagonal_s(torus: &Arc<Torus>, n: usize) -> Self {
        let mut m = QuantumMatrix::zero(torus, n, n);
        for i in 1..=n {
            let sign = if (n - i) % 2 == 0 { 1 } else { -1 };
            m.set(
                i - 1,
                n - i,
                TorusElement::scalar(torus, QCoefficient::int(sign)),
            );
        }
        m
    }

    /// The unsigned antidiagonal |S|.
    pub fn antidiagonal_abs(torus: &Arc<Torus>, n: usize) -> Self {
        let mut m = QuantumMatrix::zero(torus, n, n);
        for i in 1..=n {
            m.set(i - 1, n - i, TorusElement::one(torus));
        }
        m
    }

    /// The permutation matrix P on the doubled space: P e_i (x) e_j = e_j (x) e_i.
    pub fn permutation_p(torus: &Arc<Torus>, k: usize) -> Self {
        let mut m = QuantumMatrix::zero(torus, k * k, k * k);
        for i in 0..k {
            for j in 0..k {
                m.set(i * k + j, j * k + i, TorusElement::one(torus));
            }
        }
        m
    }

    /// Q = diag(q^{1/2 - j}), j = 1..n, the scalar prefactor of the
    /// normalized transports.
    pub fn transport_q(torus: &Arc<Torus>, n: usize) -> Self {
        let powers: Vec<Rat> = (1..=n).map(|j| rat(1, 2) - rat_int(j as i64)).collect();
        QuantumMatrix::diag_q_powers(torus, &powers)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn torus(&self) -> &Arc<Torus> {
        &self.torus
    }

    pub fn get(&self, r: usize, c: usize) -> &TorusElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: TorusElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn map<F: Fn(&TorusElement) -> TorusElement>(&self, f: F) -> Self {
        QuantumMatrix {
            torus: self.torus.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QgError::DimensionMismatch("matrix add".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a = a.add(b)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &QCoefficient) -> Self {
        self.map(|e| e.scale(c))
    }

    /// Left-multiplies every entry by `x`.
    pub fn scale_left(&self, x: &TorusElement) -> Result<Self> {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = x.mul(e)?;
        }
        Ok(out)
    }

    /// Right-multiplies every entry by `x`.
    pub fn scale_right(&self, x: &TorusElement) -> Result<Self> {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.mul(x)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(QgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QuantumMatrix::zero(&self.torus, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..other.cols {
                let mut acc = TorusElement::zero(&self.torus);
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(j, k);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    /// Formal transpose: entries are permuted, not reordered.
    pub fn transpose(&self) -> Self {
        let mut out = QuantumMatrix::zero(&self.torus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Partial transpose in the first tensor factor of a k^2 x k^2 matrix:
    /// entry ((i,k),(j,l)) moves to ((j,k),(i,l)).
    pub fn partial_transpose_1(&self) -> Result<Self> {
        let n2 = self.rows;
        if self.cols != n2 {
            return Err(QgError::DimensionMismatch("t1 needs square".into()));
        }
        let k = (n2 as f64).sqrt().round() as usize;
        if k * k != n2 {
            return Err(QgError::DimensionMismatch("t1 needs k^2 size".into()));
        }
        let mut out = QuantumMatrix::zero(&self.torus, n2, n2);
        for i in 0..k {
            for kk in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        out.set(j * k + kk, i * k + l, self.get(i * k + kk, j * k + l).clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Embeds an n x n matrix into space 1 of the doubled space: M (x) Id.
    pub fn embed_space1(&self, k: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(QgError::DimensionMismatch("embed needs square".into()));
        }
        let n = self.rows;
        let mut out = QuantumMatrix::zero(&self.torus, n * k, n * k);
        for i in 0..n {
            for j in 0..n {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                for t in 0..k {
                    out.set(i * k + t, j * k + t, e.clone());
                }
            }
        }
        Ok(out)
    }

    /// Embeds an k x k matrix into space 2 of the doubled space: Id (x) M.
    pub fn embed_space2(&self, n: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(QgError::DimensionMismatch("embed needs square".into()));
        }
        let k = self.rows;
        let mut out = QuantumMatrix::zero(&self.torus, n * k, n * k);
        for i in 0..k {
            for j in 0..k {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                for t in 0..n {
                    out.set(t * k + i, t * k + j, e.clone());
                }
            }
        }
        Ok(out)
    }

    /// Kronecker-style product with the space-1 factor multiplied on the left:
    /// entry ((i,k),(j,l)) = X_{ij} Y_{kl}.  For rectangular X (m x n) and
    /// Y (p x q) the result is (m p) x (n q).
    pub fn kron(x: &QuantumMatrix, y: &QuantumMatrix) -> Result<QuantumMatrix> {
        if !Torus::same_torus(&x.torus, &y.torus) {
            return Err(QgError::TorusMismatch("kron over different tori".into()));
        }
        let (m, n, p, q) = (x.rows, x.cols, y.rows, y.cols);
        let mut out = QuantumMatrix::zero(&x.torus, m * p, n * q);
        for i in 0..m {
            for j in 0..n {
                let a = x.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        let b = y.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * p + k, j * q + l, a.mul(b)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Like `kron`, but the space-2 factor `x` is written (multiplied) first:
    /// entry ((i,k),(j,l)) = X_{kl} Y_{ij}.
    pub fn kron2_first(x_space2: &QuantumMatrix, y_space1: &QuantumMatrix) -> Result<QuantumMatrix> {
        if !Torus::same_torus(&x_space2.torus, &y_space1.torus) {
            return Err(QgError::TorusMismatch("kron over different tori".into()));
        }
        let (p, q, m, n) = (x_space2.rows, x_space2.cols, y_space1.rows, y_space1.cols);
        let mut out = QuantumMatrix::zero(&x_space2.torus, m * p, n * q);
        for k in 0..p {
            for l in 0..q {
                let a = x_space2.get(k, l);
                if a.is_zero() {
                    continue;
                }
                for i in 0..m {
                    for j in 0..n {
                        let b = y_space1.get(i, j);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * p + k, j * q + l, a.mul(b)?);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// First nonzero entry in row-major order, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &TorusElement)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_zero() {
                    return Some((i, j, e));
                }
            }
        }
        None
    }

    /// Inverse of an upper- or lower-triangular matrix with invertible
    /// monomial diagonal, by exact back-substitution in the torus.
    pub fn invert_triangular(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(QgError::DimensionMismatch("inverse needs square".into()));
        }
        let n = self.rows;
        let lower = (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j).is_zero()));
        let upper = (0..n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()));
        if !lower && !upper {
            return Err(QgError::NotInvertible("matrix is not triangular".into()));
        }
        let mut inv = QuantumMatrix::zero(&self.torus, n, n);
        let diag_inv: Vec<TorusElement> = (0..n)
            .map(|i| self.get(i, i).invert_monomial())
            .collect::<Result<_>>()?;
        if lower {
            // X = A^{-1}: X_{ij} = d_i^{-1} (delta_ij - sum_{j<=k<i} A_{ik} X_{kj})
            for j in 0..n {
                for i in j..n {
                    let mut acc = if i == j {
                        TorusElement::one(&self.torus)
                    } else {
                        TorusElement::zero(&self.torus)
                    };
                    for k in j..i {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        acc = acc.sub(&a.mul(inv.get(k, j))?)?;
                    }
                    inv.set(i, j, diag_inv[i].mul(&acc)?);
                }
            }
        } else {
            for j in (0..n).rev() {
                for i in (0..=j).rev() {
                    let mut acc = if i == j {
                        TorusElement::one(&self.torus)
                    } else {
                        TorusElement::zero(&self.torus)
                    };
                    for k in (i + 1)..=j {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        acc = acc.sub(&a.mul(inv.get(k, j))?)?;
                    }
                    inv.set(i, j, diag_inv[i].mul(&acc)?);
                }
            }
        }
        Ok(inv)
    }

    /// Inverse of a matrix that becomes triangular after reversing rows
    /// (anti-triangular transports): A^{-1} = (S A)^{-1} S for a row
    /// permutation S.
    pub fn invert_antitriangular(&self) -> Result<Self> {
        let n = self.rows;
        let perm = QuantumMatrix::antidiagonal_abs(&self.torus, n);
        let flipped = perm.mul(self)?;
        let inv = flipped.invert_triangular()?;
        inv.mul(&perm)
    }

    /// Truncates every entry to the given total degree.
    pub fn truncate_degree(&self, max_deg: &Rat) -> Self {
        self.map(|e| e.truncate_degree(max_deg))
    }

    /// Commutative integer evaluation: q = 1 and every face weight 1.
    /// Errors if an entry does not collapse to an integer.
    pub fn toy_eval(&self) -> Result<Vec<Vec<crate::rat::Int>>> {
        let mut out = vec![vec![crate::rat::Int::zero(); self.cols]; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut acc = Rat::zero();
                for (_, c) in self.get(i, j).terms() {
                    acc += Rat::from_integer(c.eval_at_one());
                }
                if !crate::rat::is_integer(&acc) {
                    return Err(QgError::InvalidArgument(
                        "toy evaluation is not an integer".into(),
                    ));
                }
                out[i][j] = acc.to_integer();
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows)
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.cols).map(|j| self.get(i, j).to_json()).collect(),
                )
            })
            .collect();
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{ExponentVector, SkewForm};
    use crate::rat::rat_int;

    fn torus2() -> Arc<Torus> {
        let mut f = SkewForm::zero(2);
        f.add_pair(0, 1, rat_int(1));
        Torus::new(vec!["x".into(), "y".into()], f)
    }

    #[test]
    fn triangular_inverse_round_trip() {
        let t = torus2();
        let zx = TorusElement::generator(&t, 0);
        let zy = TorusElement::generator(&t, 1);
        let mut a = QuantumMatrix::zero(&t, 2, 2);
        a.set(0, 0, zx.clone());
        a.set(1, 0, zx.mul(&zy).unwrap().add(&zy).unwrap());
        a.set(1, 1, zy.clone());
        let inv = a.invert_triangular().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), QuantumMatrix::identity(&t, 2));
        assert_eq!(inv.mul(&a).unwrap(), QuantumMatrix::identity(&t, 2));
    }

    #[test]
    fn kron_embeds_agree() {
        let t = torus2();
        let zx = TorusElement::generator(&t, 0);
        let mut a = QuantumMatrix::identity(&t, 2);
        a.set(0, 1, zx);
        let b = QuantumMatrix::identity(&t, 2);
        let k1 = QuantumMatrix::kron(&a, &b).unwrap();
        let k2 = a
            .embed_space1(2)
            .unwrap()
            .mul(&b.embed_space2(2).unwrap())
            .unwrap();
        assert_eq!(k1, k2);
        // I (x) I = I
        let id = QuantumMatrix::identity(&t, 2);
        assert_eq!(
            QuantumMatrix::kron(&id, &id).unwrap(),
            QuantumMatrix::identity(&t, 4)
        );
    }

    #[test]
    fn permutation_swaps_commuting_factors() {
        let t = torus2();
        // X with scalar entries commutes entrywise, P (X (x) Y) P = Y (x) X.
        let mut x = QuantumMatrix::identity(&t, 2);
        x.set(0, 1, TorusElement::scalar(&t, QCoefficient::int(3)));
        let mut y = QuantumMatrix::identity(&t, 2);
        y.set(1, 0, TorusElement::scalar(&t, QCoefficient::int(5)));
        let p = QuantumMatrix::permutation_p(&t, 2);
        let lhs = p
            .mul(&QuantumMatrix::kron(&x, &y).unwrap())
            .unwrap()
            .mul(&p)
            .unwrap();
        let rhs = QuantumMatrix::kron(&y, &x).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn anti_triangular_inverse() {
        let t = torus2();
        let zx = TorusElement::generator(&t, 0);
        // [[0, x],[1, x y]] is anti-triangular
        let mut a = QuantumMatrix::zero(&t, 2, 2);
        a.set(0, 1, zx.clone());
        a.set(1, 0, TorusElement::one(&t));
        a.set(1, 1, zx.mul(&TorusElement::generator(&t, 1)).unwrap());
        let inv = a.invert_antitriangular().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), QuantumMatrix::identity(&t, 2));
    }
}
