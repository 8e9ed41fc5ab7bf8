//! Subspaces of coordinate space in canonical reduced row-echelon form,
//! plus the product of two subspaces under a structure tensor.

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::StructureTensor;

/// Canonical form: basis rows in RREF with normalized pivots, so two
/// subspaces are equal iff the structs are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(ambient, Matrix::<S>::identity(ambient).rows_vec())
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<S>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "spanning vector of wrong length");
        }
        let mut m = Matrix::from_rows(vectors);
        let pivots = m.rref();
        let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|c| !c.is_zero()).unwrap();
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (j, rj) in row.iter().enumerate() {
                    if !rj.is_zero() {
                        v[j] = v[j].clone() - (f.clone() * rj);
                    }
                }
            }
        }
        v.iter().all(S::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace<S>) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace<S>) -> Subspace<S> {
        assert_eq!(self.ambient, other.ambient);
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Self::from_spanning(self.ambient, vectors)
    }
}

/// Span of all pairwise products of basis vectors of the two subspaces.
pub fn subspace_product<S: Scalar>(
    t: &StructureTensor<S>,
    a: &Subspace<S>,
    b: &Subspace<S>,
) -> Subspace<S> {
    assert_eq!(a.ambient(), t.dim());
    assert_eq!(b.ambient(), t.dim());
    let mut products = Vec::with_capacity(a.dim() * b.dim());
    for x in a.basis() {
        for y in b.basis() {
            products.push(t.multiply(x, y).unwrap());
        }
    }
    Subspace::from_spanning(t.dim(), products)
}
