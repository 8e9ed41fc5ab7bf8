//! Linear-algebra invariants of a commutative algebra given by structure
//! constants: annihilator, power chain and nilpotency data, associative
//! center, Jacobi elements, derivations, and second cohomology.

use crate::linalg::rank_of_rows;
use crate::scalar::Scalar;
use crate::subspace::{subspace_product, Subspace};
use crate::tensor::StructureTensor;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("power chain stabilized at nonzero dimension {stabilized_dim}: algebra is not nilpotent")]
    NotNilpotent { stabilized_dim: usize },
}

/// Everything the comparison and reporting layers consume. `orbit_dim` is
/// dim GL(V) - dim of the stabilizer, i.e. n^2 - der_dim in characteristic
/// zero; `b2_dim` always equals n^2 - der_dim because the coboundary map
/// and the derivation condition share one matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub dim: usize,
    pub ann_dim: usize,
    pub power_dims: Vec<usize>,
    pub nilindex: usize,
    pub nilpotency_type: Vec<usize>,
    pub center_dim: usize,
    pub jacobi_dim: usize,
    pub der_dim: usize,
    pub orbit_dim: usize,
    pub z2_dim: usize,
    pub b2_dim: usize,
    pub h2_dim: usize,
    pub associative: bool,
}

/// Dimensions of the descending chain of full-sum powers
/// A^m = sum of A^a * A^b over a + b = m, down to (not including) zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerChain {
    /// dims of A^1, A^2, ..., A^(nilindex - 1), all nonzero.
    pub dims: Vec<usize>,
    /// Least m with A^m = 0.
    pub nilindex: usize,
    /// Successive quotient dimensions dim A^m / A^(m+1).
    pub nilpotency_type: Vec<usize>,
}

/// dim of {a : a * x = 0 for all x}.
pub fn ann_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    let n = t.dim();
    let rows = (0..n).flat_map(|p| {
        let t = t.clone();
        (0..n).map(move |k| (0..n).map(|i| t.get(i, p, k).clone()).collect::<Vec<S>>())
    });
    n - rank_of_rows(n, rows)
}

pub fn power_chain<S: Scalar>(t: &StructureTensor<S>) -> Result<PowerChain, InvariantError> {
    let n = t.dim();
    let mut chain = vec![Subspace::full(n)];
    loop {
        let m = chain.len() + 1;
        let mut next = Subspace::zero(n);
        for a in 1..m {
            let b = m - a;
            if b < a {
                break;
            }
            next = next.sum(&subspace_product(t, &chain[a - 1], &chain[b - 1]));
        }
        if next.dim() == 0 {
            let dims: Vec<usize> = chain.iter().map(Subspace::dim).collect();
            let mut nilpotency_type = Vec::with_capacity(dims.len());
            for (i, &d) in dims.iter().enumerate() {
                let below = dims.get(i + 1).copied().unwrap_or(0);
                nilpotency_type.push(d - below);
            }
            return Ok(PowerChain {
                nilindex: m,
                dims,
                nilpotency_type,
            });
        }
        if next == *chain.last().unwrap() {
            return Err(InvariantError::NotNilpotent {
                stabilized_dim: next.dim(),
            });
        }
        chain.push(next);
    }
}

/// dim of the associative center {a : (a,x,y) = (x,a,y) = (x,y,a) = 0},
/// computed from the 3n^3-row linear system over the basis pairs.
pub fn center_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    let n = t.dim();
    let mut rows = Vec::with_capacity(3 * n * n * n);
    for p in 0..n {
        for q in 0..n {
            for k in 0..n {
                // (a, e_p, e_q)_k
                let mut r1 = vec![S::zero(); n];
                // (e_p, a, e_q)_k
                let mut r2 = vec![S::zero(); n];
                // (e_p, e_q, a)_k
                let mut r3 = vec![S::zero(); n];
                for (i, ((r1i, r2i), r3i)) in
                    r1.iter_mut().zip(&mut r2).zip(&mut r3).enumerate()
                {
                    let mut s1 = S::zero();
                    let mut s2 = S::zero();
                    let mut s3 = S::zero();
                    for m in 0..n {
                        s1 = s1 + (t.get(i, p, m).clone() * t.get(m, q, k))
                            - (t.get(p, q, m).clone() * t.get(i, m, k));
                        s2 = s2 + (t.get(p, i, m).clone() * t.get(m, q, k))
                            - (t.get(i, q, m).clone() * t.get(p, m, k));
                        s3 = s3 + (t.get(p, q, m).clone() * t.get(m, i, k))
                            - (t.get(q, i, m).clone() * t.get(p, m, k));
                    }
                    *r1i = s1;
                    *r2i = s2;
                    *r3i = s3;
                }
                rows.push(r1);
                rows.push(r2);
                rows.push(r3);
            }
        }
    }
    n - rank_of_rows(n, rows)
}

/// dim of {a : a(xy) = (ax)y + x(ay) for all x, y}.
pub fn jacobi_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    let n = t.dim();
    let mut rows = Vec::with_capacity(n * n * n);
    for p in 0..n {
        for q in p..n {
            for k in 0..n {
                let mut row = vec![S::zero(); n];
                for (i, ri) in row.iter_mut().enumerate() {
                    let mut s = S::zero();
                    for m in 0..n {
                        s = s + (t.get(p, q, m).clone() * t.get(m, i, k))
                            - (t.get(i, p, m).clone() * t.get(m, q, k))
                            - (t.get(i, q, m).clone() * t.get(m, p, k));
                    }
                    *ri = s;
                }
                rows.push(row);
            }
        }
    }
    n - rank_of_rows(n, rows)
}

/// Rank of the linear system whose kernel is the derivation algebra. The
/// unknowns are the n^2 entries of D with D(e_r) = sum_s d_rs e_s.
fn derivation_rank<S: Scalar>(t: &StructureTensor<S>) -> usize {
    let n = t.dim();
    let mut rows = Vec::with_capacity(n * n * (n + 1) / 2);
    for p in 0..n {
        for q in p..n {
            for k in 0..n {
                let mut row = vec![S::zero(); n * n];
                for r in 0..n {
                    for s in 0..n {
                        let mut v = S::zero();
                        if s == k {
                            v = v + t.get(p, q, r);
                        }
                        if r == p {
                            v = v - t.get(s, q, k);
                        }
                        if r == q {
                            v = v - t.get(s, p, k);
                        }
                        row[r * n + s] = v;
                    }
                }
                rows.push(row);
            }
        }
    }
    rank_of_rows(n * n, rows)
}

pub fn der_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    t.dim() * t.dim() - derivation_rank(t)
}

pub fn orbit_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    derivation_rank(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyDims {
    pub z2_dim: usize,
    pub b2_dim: usize,
    pub h2_dim: usize,
}

/// Number of unknowns of a symmetric bilinear map V x V -> V.
fn sym_unknowns(n: usize) -> usize {
    n * n * (n + 1) / 2
}

fn pair_index(n: usize, p: usize, q: usize) -> usize {
    debug_assert!(p <= q);
    p * n - (p * p - p) / 2 + (q - p)
}

/// Linear form in the unknowns h_pq^k of a symmetric bilinear map.
type LinForm<S> = Vec<S>;

/// h(u, v) as a vector of linear forms, one per output coordinate.
fn h_of<S: Scalar>(n: usize, u: &[S], v: &[S]) -> Vec<LinForm<S>> {
    let uu = sym_unknowns(n);
    let mut out = vec![vec![S::zero(); uu]; n];
    for p in 0..n {
        for q in p..n {
            let mut coeff = u[p].clone() * &v[q];
            if p != q {
                coeff = coeff + (u[q].clone() * &v[p]);
            }
            if coeff.is_zero() {
                continue;
            }
            let base = pair_index(n, p, q) * n;
            for (k, form) in out.iter_mut().enumerate() {
                form[base + k] = form[base + k].clone() + &coeff;
            }
        }
    }
    out
}

/// mu(l, w) where l is a vector of linear forms and w a constant vector.
fn mu_lin<S: Scalar>(
    t: &StructureTensor<S>,
    l: &[LinForm<S>],
    w: &[S],
) -> Vec<LinForm<S>> {
    let n = t.dim();
    let uu = l[0].len();
    let mut out = vec![vec![S::zero(); uu]; n];
    for (p, lp) in l.iter().enumerate() {
        if lp.iter().all(S::is_zero) {
            continue;
        }
        for (k, form) in out.iter_mut().enumerate() {
            // mu(e_p, w)_k
            let mut f = S::zero();
            for (q, wq) in w.iter().enumerate() {
                if !wq.is_zero() {
                    f = f + (wq.clone() * t.get(p, q, k));
                }
            }
            if f.is_zero() {
                continue;
            }
            for (dst, src) in form.iter_mut().zip(lp) {
                if !src.is_zero() {
                    *dst = dst.clone() + (f.clone() * src);
                }
            }
        }
    }
    out
}

fn lin_add_sub<S: Scalar>(acc: &mut [LinForm<S>], term: Vec<LinForm<S>>, add: bool) {
    for (a, t) in acc.iter_mut().zip(term) {
        for (av, tv) in a.iter_mut().zip(t) {
            if tv.is_zero() {
                continue;
            }
            *av = if add { av.clone() + tv } else { av.clone() - tv };
        }
    }
}

/// Rows of the cocycle system: the first-order term of the polarized
/// Jordan identity for the deformed product mu + s h, one block of n rows
/// per basis quadruple (x_a, x_b, x_c; y = e_d) with a <= b <= c.
fn cocycle_rows<S: Scalar>(t: &StructureTensor<S>) -> Vec<Vec<S>> {
    let n = t.dim();
    let uu = sym_unknowns(n);
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let triple = [a, b, c];
                for d in 0..n {
                    let y = t.basis_vec(d);
                    let mut acc = vec![vec![S::zero(); uu]; n];
                    for k in 0..3 {
                        let (i, j) = match k {
                            0 => (triple[1], triple[2]),
                            1 => (triple[0], triple[2]),
                            _ => (triple[0], triple[1]),
                        };
                        let tk = triple[k];
                        let ek = t.basis_vec(tk);
                        let ei = t.basis_vec(i);
                        let ej = t.basis_vec(j);
                        let mij = t.basis_product(i, j).to_vec();
                        let mij_y = t.multiply(&mij, &y).unwrap();
                        let y_xk = t.basis_product(d, tk).to_vec();
                        // d/ds of mu(mu(mu(xi,xj), y), xk)
                        lin_add_sub(&mut acc, h_of(n, &mij_y, &ek), true);
                        lin_add_sub(&mut acc, mu_lin(t, &h_of(n, &mij, &y), &ek), true);
                        let inner = mu_lin(t, &mu_lin(t, &h_of(n, &ei, &ej), &y), &ek);
                        lin_add_sub(&mut acc, inner, true);
                        // d/ds of mu(mu(xi,xj), mu(y,xk))
                        lin_add_sub(&mut acc, h_of(n, &mij, &y_xk), false);
                        lin_add_sub(&mut acc, mu_lin(t, &h_of(n, &ei, &ej), &y_xk), false);
                        lin_add_sub(&mut acc, mu_lin(t, &h_of(n, &y, &ek), &mij), false);
                    }
                    rows.extend(acc);
                }
            }
        }
    }
    rows
}

pub fn h2_dims<S: Scalar>(t: &StructureTensor<S>) -> CohomologyDims {
    let z2_dim = z2_dim(t);
    let b2_dim = derivation_rank(t);
    CohomologyDims {
        z2_dim,
        b2_dim,
        h2_dim: z2_dim - b2_dim,
    }
}

fn z2_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    let uu = sym_unknowns(t.dim());
    uu - rank_of_rows(uu, cocycle_rows(t))
}

pub fn h2_dim<S: Scalar>(t: &StructureTensor<S>) -> usize {
    h2_dims(t).h2_dim
}

pub fn invariant_profile<S: Scalar>(
    t: &StructureTensor<S>,
) -> Result<InvariantProfile, InvariantError> {
    let n = t.dim();
    let chain = power_chain(t)?;
    let der_rank = derivation_rank(t);
    let z2 = z2_dim(t);
    Ok(InvariantProfile {
        dim: n,
        ann_dim: ann_dim(t),
        power_dims: chain.dims,
        nilindex: chain.nilindex,
        nilpotency_type: chain.nilpotency_type,
        center_dim: center_dim(t),
        jacobi_dim: jacobi_dim(t),
        der_dim: n * n - der_rank,
        orbit_dim: der_rank,
        z2_dim: z2,
        b2_dim: der_rank,
        h2_dim: z2 - der_rank,
        associative: t.is_associative(),
    })
}
