//! Structure-constant tensors of commutative algebras, identity checks
//! (Jordan, associativity), the basis-change action, and direct sums.

use crate::linalg::Matrix;
use crate::scalar::{ExactScalar, RatFunc, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular basis-change matrix")]
    Singular,
}

/// Structure constants c_ij^k of a commutative product: e_i * e_j = sum_k
/// c_ij^k e_k. Symmetry c_ij^k = c_ji^k is enforced by the constructors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureTensor<S> {
    dim: usize,
    c: Vec<S>,
}

impl<S: Scalar> StructureTensor<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 8, "dimension bound exceeded");
        StructureTensor {
            dim,
            c: vec![S::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.c[self.idx(i, j, k)]
    }

    /// Sets c_ij^k and its mirror c_ji^k.
    pub fn set_product(&mut self, i: usize, j: usize, k: usize, v: S) {
        let a = self.idx(i, j, k);
        self.c[a] = v.clone();
        let b = self.idx(j, i, k);
        self.c[b] = v;
    }

    /// The product e_i * e_j as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[S] {
        let start = self.idx(i, j, 0);
        &self.c[start..start + self.dim]
    }

    pub fn multiply(&self, x: &[S], y: &[S]) -> Result<Vec<S>, TensorError> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(TensorError::DimensionMismatch {
                    expected: self.dim,
                    got: v.len(),
                });
            }
        }
        let mut out = vec![S::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.clone() * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *o = o.clone() + (f.clone() * c);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Fully polarized Jordan identity on all basis quadruples. Over a
    /// characteristic-0 field this is equivalent to ((x*x)*y)*x =
    /// (x*x)*(y*x) for all field elements: substitute x -> x1+x2+x3 and
    /// keep the part linear in each x_m, which reads
    /// sum_k [((x_i x_j) y) x_k - (x_i x_j)(y x_k)] over the three choices
    /// of k with {i,j} the complementary pair.
    pub fn is_jordan(&self) -> bool {
        let n = self.dim;
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let triple = [a, b, c];
                    for d in 0..n {
                        let y = self.basis_vec(d);
                        let mut acc = vec![S::zero(); n];
                        for k in 0..3 {
                            let (i, j) = match k {
                                0 => (triple[1], triple[2]),
                                1 => (triple[0], triple[2]),
                                _ => (triple[0], triple[1]),
                            };
                            let xk = self.basis_vec(triple[k]);
                            let xij = self.basis_product(i, j).to_vec();
                            let lhs = self
                                .multiply(&self.multiply(&xij, &y).unwrap(), &xk)
                                .unwrap();
                            let rhs = self
                                .multiply(&xij, &self.multiply(&y, &xk).unwrap())
                                .unwrap();
                            for m in 0..n {
                                acc[m] = acc[m].clone() + &lhs[m] - &rhs[m];
                            }
                        }
                        if acc.iter().any(|v| !v.is_zero()) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Associativity on all basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab_c = self
                        .multiply(&self.basis_product(a, b).to_vec(), &self.basis_vec(c))
                        .unwrap();
                    let a_bc = self
                        .multiply(&self.basis_vec(a), &self.basis_product(b, c).to_vec())
                        .unwrap();
                    if ab_c != a_bc {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn basis_vec(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// Block sum: cross products between the summands are zero.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim;
        let m = other.dim;
        let mut out = Self::zero(n + m);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.is_zero() {
                        let at = out.idx(i, j, k);
                        out.c[at] = v.clone();
                    }
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let v = other.get(i, j, k);
                    if !v.is_zero() {
                        let at = out.idx(n + i, n + j, n + k);
                        out.c[at] = v.clone();
                    }
                }
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StructureTensor<T> {
        StructureTensor {
            dim: self.dim,
            c: self.c.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.c.iter()
    }
}

impl StructureTensor<ExactScalar> {
    pub fn to_ratfunc(&self) -> StructureTensor<RatFunc> {
        self.map(|c| RatFunc::constant(c.clone()))
    }
}

impl StructureTensor<RatFunc> {
    /// Entrywise evaluation at t0; any pole aborts with the offending entry.
    pub fn eval(
        &self,
        t0: &ExactScalar,
    ) -> Result<StructureTensor<ExactScalar>, crate::scalar::ScalarError> {
        let mut c = Vec::with_capacity(self.c.len());
        for f in &self.c {
            c.push(f.eval(t0)?);
        }
        Ok(StructureTensor { dim: self.dim, c })
    }
}

/// Entry-wise equality of normal forms.
pub fn tensors_equal<S: Scalar>(a: &StructureTensor<S>, b: &StructureTensor<S>) -> bool {
    a == b
}

/// Basis change with rows = new basis vectors in old coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange<S> {
    dim: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> BasisChange<S> {
    pub fn new(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        BasisChange { dim, rows }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::<S>::identity(dim).rows_vec())
    }

    pub fn scaling(dim: usize, s: S) -> Self {
        let mut rows = vec![vec![S::zero(); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = s.clone();
        }
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn matrix(&self) -> Matrix<S> {
        Matrix::from_rows(self.rows.clone())
    }

    pub fn det(&self) -> S {
        self.matrix().det()
    }

    /// Group composition: `self` applied first, then `second`. In the
    /// rows-are-new-basis convention the composed matrix is
    /// second.matrix() * self.matrix().
    pub fn then(&self, second: &BasisChange<S>) -> BasisChange<S> {
        assert_eq!(self.dim, second.dim);
        BasisChange::new(second.matrix().mul(&self.matrix()).rows_vec())
    }
}

/// Re-expresses the product in the new basis: with G the row matrix of new
/// basis vectors, the products e'_i * e'_j are computed in old coordinates
/// and converted back through G^-1.
pub fn apply_basis_change<S: Scalar>(
    t: &StructureTensor<S>,
    g: &BasisChange<S>,
) -> Result<StructureTensor<S>, TensorError> {
    let n = t.dim();
    if g.dim() != n {
        return Err(TensorError::DimensionMismatch {
            expected: n,
            got: g.dim(),
        });
    }
    let ginv = g.matrix().inverse().ok_or(TensorError::Singular)?;
    let mut out = StructureTensor::zero(n);
    for i in 0..n {
        for j in i..n {
            let v = t.multiply(&g.rows()[i], &g.rows()[j])?;
            // coordinates in the new basis: v * G^-1
            for k in 0..n {
                let mut acc = S::zero();
                for (p, vp) in v.iter().enumerate() {
                    if !vp.is_zero() {
                        acc = acc + (vp.clone() * ginv.at(p, k));
                    }
                }
                out.set_product(i, j, k, acc);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_scalar_expr, ExactScalar, RatFunc};
    use std::collections::BTreeMap;

    /// Table row J_21: n1n2 = n3^2 = n4, n3n4 = n1^2 = n2^2 = n5.
    fn j21() -> StructureTensor<ExactScalar> {
        let mut t = StructureTensor::zero(5);
        let one = ExactScalar::one;
        t.set_product(0, 1, 3, one());
        t.set_product(2, 2, 3, one());
        t.set_product(2, 3, 4, one());
        t.set_product(0, 0, 4, one());
        t.set_product(1, 1, 4, one());
        t
    }

    /// Table row J_34: n1n2 = n3, n1n3 = n4, n1^2 = n5.
    fn j34() -> StructureTensor<ExactScalar> {
        let mut t = StructureTensor::zero(5);
        let one = ExactScalar::one;
        t.set_product(0, 1, 2, one());
        t.set_product(0, 2, 3, one());
        t.set_product(0, 0, 4, one());
        t
    }

    #[test]
    fn multiply_basics() {
        let t = j34();
        let prod = t
            .multiply(&t.basis_vec(0), &t.basis_vec(1))
            .unwrap();
        assert_eq!(prod, t.basis_vec(2));
        let zero = vec![ExactScalar::zero(); 5];
        assert_eq!(t.multiply(&t.basis_vec(0), &zero).unwrap(), zero);
        assert!(matches!(
            t.multiply(&[], &zero),
            Err(TensorError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jordan_and_associativity_flags() {
        assert!(StructureTensor::<ExactScalar>::zero(5).is_jordan());
        assert!(j21().is_jordan());
        assert!(j34().is_jordan());
        assert!(!j34().is_associative());
        // (n1 n1) n2 = n5 n2 = 0 vs n1 (n1 n2) = n1 n3 = n4 != 0.

        let mut broken = j34();
        broken.set_product(0, 1, 0, ExactScalar::one());
        assert!(!broken.is_jordan());
    }

    /// Direct check of ((x*x)*y)*x = (x*x)*(y*x) on field elements, an
    /// independent route to the polarized basis test.
    fn jordan_residual(
        t: &StructureTensor<ExactScalar>,
        x: &[ExactScalar],
        y: &[ExactScalar],
    ) -> Vec<ExactScalar> {
        let xx = t.multiply(x, x).unwrap();
        let lhs = t.multiply(&t.multiply(&xx, y).unwrap(), x).unwrap();
        let rhs = t.multiply(&xx, &t.multiply(y, x).unwrap()).unwrap();
        lhs.iter()
            .zip(&rhs)
            .map(|(a, b)| a.clone() - b)
            .collect()
    }

    #[test]
    fn polarized_check_agrees_with_direct_identity() {
        let vecs: Vec<Vec<ExactScalar>> = vec![
            [3, -1, 2, 5, 7].iter().map(|&v| ExactScalar::from_i64(v)).collect(),
            [1, 2, -2, 0, 4].iter().map(|&v| ExactScalar::from_i64(v)).collect(),
            [-5, 3, 1, 1, -2].iter().map(|&v| ExactScalar::from_i64(v)).collect(),
        ];
        for t in [j21(), j34()] {
            for x in &vecs {
                for y in &vecs {
                    assert!(jordan_residual(&t, x, y).iter().all(ExactScalar::is_zero));
                }
            }
        }
        let mut broken = j34();
        broken.set_product(0, 1, 0, ExactScalar::one());
        let violated = vecs.iter().any(|x| {
            vecs.iter()
                .any(|y| jordan_residual(&broken, x, y).iter().any(|v| !v.is_zero()))
        });
        assert!(violated);
    }

    #[test]
    fn identity_change_is_noop() {
        let t = j21();
        let g = BasisChange::identity(5);
        assert_eq!(apply_basis_change(&t, &g).unwrap(), t);
    }

    #[test]
    fn singular_change_rejected() {
        let t = j34();
        let mut rows = BasisChange::identity(5).rows().to_vec();
        rows[4] = rows[3].clone();
        assert_eq!(
            apply_basis_change(&t, &BasisChange::new(rows)),
            Err(TensorError::Singular)
        );
    }

    /// Anchor for the convention: the printed curve on J_21 must satisfy
    /// e2^t * e3^t = t * e4^t and have determinant -2^8 t^23.
    #[test]
    fn curve_anchor_on_j21() {
        let rows_src = [
            ["r2*t^2", "-r2*t^2", "2*t^2", "-t^2", "0"],
            ["0", "2*r2*t^4", "0", "4*t^4", "0"],
            ["r2*t^3", "r2*t^3", "0", "0", "0"],
            ["0", "0", "0", "4*t^6", "4*t^6"],
            ["0", "0", "0", "0", "8*t^8"],
        ];
        let rows: Vec<Vec<RatFunc>> = rows_src
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_scalar_expr(s, &BTreeMap::new()).unwrap())
                    .collect()
            })
            .collect();
        let g = BasisChange::new(rows);
        let det = g.det();
        assert_eq!(
            det,
            parse_scalar_expr("-2^8*t^23", &BTreeMap::new()).unwrap()
        );
        let t_rat = j21().to_ratfunc();
        let moved = apply_basis_change(&t_rat, &g).unwrap();
        let tvar = RatFunc::var();
        for k in 0..5 {
            let expect = if k == 3 { tvar.clone() } else { RatFunc::zero() };
            assert_eq!(moved.get(1, 2, k), &expect, "coordinate {k} of e2*e3");
        }
    }

    #[test]
    fn scaling_multiplies_constants() {
        let t = j34().to_ratfunc();
        let g = BasisChange::scaling(5, RatFunc::var());
        let moved = apply_basis_change(&t, &g).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    let expect = t.get(i, j, k).clone() * &RatFunc::var();
                    assert_eq!(moved.get(i, j, k), &expect);
                }
            }
        }
    }

    #[test]
    fn composition_law() {
        let t = j21();
        let g = BasisChange::new(
            [
                [1, 1, 0, 0, 0],
                [0, 1, 0, 0, 2],
                [0, 0, 1, 0, 0],
                [0, 0, 3, 1, 0],
                [0, 0, 0, 0, 1],
            ]
            .iter()
            .map(|r| r.iter().map(|&v| ExactScalar::from_i64(v)).collect())
            .collect(),
        );
        let h = BasisChange::new(
            [
                [2, 0, 0, 0, 0],
                [0, 1, 1, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [1, 0, 0, 0, 1],
            ]
            .iter()
            .map(|r| r.iter().map(|&v| ExactScalar::from_i64(v)).collect())
            .collect(),
        );
        let step = apply_basis_change(&apply_basis_change(&t, &g).unwrap(), &h).unwrap();
        let composed = apply_basis_change(&t, &g.then(&h)).unwrap();
        assert_eq!(step, composed);
    }

    #[test]
    fn direct_sum_blocks() {
        let mut b3 = StructureTensor::<ExactScalar>::zero(2);
        b3.set_product(0, 0, 1, ExactScalar::one());
        let s = b3.direct_sum(&b3).direct_sum(&StructureTensor::zero(1));
        assert_eq!(s.dim(), 5);
        // n1^2 = n2 and n3^2 = n4, everything else zero.
        assert_eq!(s.get(0, 0, 1), &ExactScalar::one());
        assert_eq!(s.get(2, 2, 3), &ExactScalar::one());
        assert!(s.is_jordan() && s.is_associative());
        let zero1 = StructureTensor::<ExactScalar>::zero(1);
        assert_eq!(zero1.direct_sum(&zero1), StructureTensor::zero(2));
    }
}
