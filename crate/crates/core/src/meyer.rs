//! Meyer's signature cocycle on the integral symplectic group.
//!
//! For `A, B ∈ Sp(2g, Z)` let `V_{A,B}` be the space of pairs `(x, y)` in
//! `Q^{2g} ⊕ Q^{2g}` with `(A⁻¹ − I)x + (B − I)y = 0`. The form
//! `((x₁,y₁),(x₂,y₂)) ↦ ⟨x₁ + y₁, (I − B)y₂⟩` is symmetric on `V_{A,B}` and
//! `τ(A, B)` is its signature. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::factorization::{CurveClass, PositiveFactorization};
use crate::homology::{standard_form, IntClass, SymplecticMatrix};
use crate::matrix::IntMatrix;

type Q = BigRational;

fn q(v: &BigInt) -> Q {
    Q::from_integer(v.clone())
}

/// Basis of the rational nullspace of `m`, via reduced row echelon form.
fn nullspace(m: &IntMatrix) -> Vec<Vec<Q>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Q>> = (0..rows)
        .map(|i| m.row(i).iter().map(q).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    if !a[r][j].is_zero() {
                        let d = &f * &a[r][j];
                        a[i][j] -= d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::from_integer(1.into());
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
pub(crate) fn symmetric_signature(mut g: Vec<Vec<Q>>) -> i64 {
    let n = g.len();
    let mut live: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !live.is_empty() {
        let pivot = live.iter().copied().find(|&i| !g[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // All live diagonal entries vanish: fold an off-diagonal pair.
                let pair = live.iter().copied().find_map(|i| {
                    live.iter()
                        .copied()
                        .find(|&j| !g[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                for k in 0..n {
                    let v = g[j][k].clone();
                    g[i][k] += v;
                }
                for k in 0..n {
                    let v = g[k][j].clone();
                    g[k][i] += v;
                }
                continue;
            }
        };
        let d = g[p][p].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        live.retain(|&i| i != p);
        for &i in &live {
            if g[i][p].is_zero() {
                continue;
            }
            let f = &g[i][p] / &d;
            for k in 0..n {
                if !g[p][k].is_zero() {
                    let t = &f * &g[p][k];
                    g[i][k] -= t;
                }
            }
        }
        for &i in &live {
            g[i][p] = Q::zero();
            g[p][i] = Q::zero();
        }
    }
    sig
}

/// `τ(A, B)`.
pub fn meyer_cocycle(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<i64> {
    if a.genus() != b.genus() {
        return Err(Error::GenusMismatch {
            expected: a.genus(),
            found: b.genus(),
        });
    }
    if a.is_identity() || b.is_identity() {
        return Ok(0);
    }
    let n = 2 * a.genus();
    let a_inv = a.inverse();
    let (ai, bm) = (a_inv.as_matrix(), b.as_matrix());
    let mut m = IntMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1 } else { 0 };
            m[(i, j)] = &ai[(i, j)] - delta;
            m[(i, n + j)] = &bm[(i, j)] - delta;
        }
    }
    let basis = nullspace(&m);
    if basis.is_empty() {
        return Ok(0);
    }
    let j = standard_form(a.genus());
    // Left factor (x + y)ᵀ J and right factor (I − B) y for each basis vector.
    let left: Vec<Vec<Q>> = basis
        .iter()
        .map(|v| {
            let s: Vec<Q> = (0..n).map(|i| &v[i] + &v[n + i]).collect();
            (0..n)
                .map(|col| {
                    (0..n)
                        .filter(|&r| !j[(r, col)].is_zero() && !s[r].is_zero())
                        .map(|r| &s[r] * q(&j[(r, col)]))
                        .fold(Q::zero(), |acc, t| acc + t)
                })
                .collect()
        })
        .collect();
    let right: Vec<Vec<Q>> = basis
        .iter()
        .map(|v| {
            (0..n)
                .map(|r| {
                    let mut acc = v[n + r].clone();
                    for c in 0..n {
                        if !bm[(r, c)].is_zero() && !v[n + c].is_zero() {
                            acc -= q(&bm[(r, c)]) * &v[n + c];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let gram: Vec<Vec<Q>> = left
        .iter()
        .map(|l| {
            right
                .iter()
                .map(|r| {
                    l.iter()
                        .zip(r)
                        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                        .fold(Q::zero(), |acc, (x, y)| acc + x * y)
                })
                .collect()
        })
        .collect();
    for i in 0..gram.len() {
        for k in 0..i {
            if gram[i][k] != gram[k][i] {
                return Err(Error::Certificate(
                    "Meyer form is not symmetric".to_string(),
                ));
            }
        }
    }
    Ok(symmetric_signature(gram))
}

/// Signature of the total space from the monodromy, `−Σ τ(A_j, T_{c_{j+1}})`
/// over the partial products `A_j = T_{c_1} ⋯ T_{c_j}`.
pub fn signature_meyer(p: &PositiveFactorization) -> Result<i64> {
    let classes: Vec<&IntClass> = p
        .twists()
        .iter()
        .map(IntClass::of)
        .collect::<Result<_>>()?;
    let mut partial = SymplecticMatrix::identity(p.genus());
    let mut total = 0i64;
    for (idx, c) in classes.iter().enumerate() {
        let t = SymplecticMatrix::transvection(c)?;
        if idx > 0 {
            total += meyer_cocycle(&partial, &t)?;
        }
        partial.right_mul_transvection(c, false)?;
    }
    Ok(-total)
}
