//! Permutations of prime divisors and determinants over graded polynomials.

use super::graded::frob_form;
use super::GradedPoly;
use crate::arith;
use crate::error::{Error, Result};

/// A permutation of `0..len`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(t: usize) -> Self {
        Permutation((0..t).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn sign(&self) -> i64 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Indices moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i] != i).collect()
    }
}

pub fn all_permutations(t: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    heap_permute(t, &mut cur, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if k <= 1 {
        out.push(Permutation(a.clone()));
        return;
    }
    heap_permute(k - 1, a, out);
    for i in 0..k - 1 {
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
        heap_permute(k - 1, a, out);
    }
}

pub fn derangements(t: usize) -> Vec<Permutation> {
    all_permutations(t).into_iter().filter(|p| p.support().len() == t).collect()
}

/// True for a single `t`-cycle on all `t` points (`t ≥ 1`).
pub fn is_single_cycle(p: &Permutation) -> bool {
    p.cycles().len() == 1
}

/// Permutations of `t` points whose moved points form one cycle through `pos`.
pub fn single_cycles_through(t: usize, pos: usize) -> Vec<Permutation> {
    all_permutations(t)
        .into_iter()
        .filter(|p| p.apply(pos) != pos && p.cycles().iter().filter(|c| c.len() > 1).count() == 1)
        .collect()
}

/// Data attached to a permutation `σ` of the primes of `n`: the moved part
/// `d_σ` and the fixed part `n/d_σ`.
#[derive(Clone, Debug)]
pub struct PermData {
    pub perm: Permutation,
    pub d_sigma: u64,
}

impl PermData {
    pub fn new(perm: Permutation, primes: &[u64]) -> Self {
        let d_sigma = perm.support().iter().map(|&i| primes[i]).product();
        PermData { perm, d_sigma }
    }
}

/// `M_{n,d}`: diagonal `π_{n/d}(Fr_{ℓ_i} - 1)`, off-diagonal `π_{ℓ_j}(Fr_{ℓ_i} - 1)`.
pub fn d_matrix(n: u64, d: u64) -> Result<Vec<Vec<GradedPoly>>> {
    if d == 0 || n % d != 0 || !arith::is_squarefree(n) {
        return Err(Error::InvalidArgument(format!("{d} does not divide the squarefree level {n}")));
    }
    let ls = arith::prime_divisors(d);
    Ok(ls
        .iter()
        .map(|&li| {
            ls.iter()
                .map(|&lj| if li == lj { frob_form(li, n / d, 0) } else { frob_form(li, lj, 0) })
                .collect()
        })
        .collect())
}

/// `D_{n,d} = det M_{n,d}` (with `D_{n,1} = 1`).
pub fn d_det(n: u64, d: u64) -> Result<GradedPoly> {
    Ok(det(&d_matrix(n, d)?, 0))
}

/// `Π(σ) = Π_{q | d_σ} π_q(Fr_{σ(q)} - 1)` for a permutation of `primes`.
pub fn perm_pi(perm: &Permutation, primes: &[u64]) -> GradedPoly {
    let mut acc = GradedPoly::constant(1, 0);
    for i in perm.support() {
        acc = acc.mul(&frob_form(primes[perm.apply(i)], primes[i], 0));
    }
    acc
}

/// Leibniz determinant of a square matrix of graded polynomials.
pub fn det(matrix: &[Vec<GradedPoly>], base: u64) -> GradedPoly {
    let t = matrix.len();
    if t == 0 {
        return GradedPoly::constant(1, base);
    }
    let mut acc = GradedPoly::zero(base);
    for p in all_permutations(t) {
        let mut term = GradedPoly::constant(p.sign(), base);
        for (i, row) in matrix.iter().enumerate() {
            term = term.mul(&row[p.apply(i)]);
            if term.is_zero() {
                break;
            }
        }
        acc = acc.add(&term);
    }
    acc
}
