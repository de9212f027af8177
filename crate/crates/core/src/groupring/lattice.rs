//! Modular Hermite normal forms and Smith forms over `Z/N`.

use crate::arith;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Hermite normal form of a full-rank lattice `L ⊂ Z^m` containing `M·Z^m`.
///
/// Row `j` has its pivot in column `j`, a divisor of `M`. Call [`ModHnf::finish`]
/// after the last insertion and before any query.
#[derive(Clone, Debug)]
pub struct ModHnf {
    modulus: i128,
    rows: Vec<Vec<i128>>,
    finished: bool,
}

impl ModHnf {
    pub fn new(dim: usize, modulus: u64) -> Self {
        assert!(modulus > 0);
        let m = modulus as i128;
        let rows = (0..dim)
            .map(|j| {
                let mut r = vec![0; dim];
                r[j] = m;
                r
            })
            .collect();
        ModHnf { modulus: m, rows, finished: true }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus as u64
    }

    pub fn pivot(&self, j: usize) -> u64 {
        self.rows[j][j] as u64
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        assert!(self.finished, "ModHnf queried before finish()");
        &self.rows
    }

    /// `[Z^m : L]`.
    pub fn index(&self) -> BigInt {
        self.rows.iter().enumerate().map(|(j, r)| BigInt::from(r[j])).product()
    }

    pub fn insert(&mut self, v: &[i64]) {
        let mut v: Vec<i128> = v.iter().map(|&x| (x as i128).rem_euclid(self.modulus)).collect();
        self.finished = false;
        self.eliminate(0, &mut v);
    }

    fn eliminate(&mut self, start: usize, v: &mut [i128]) {
        let m = self.modulus;
        let dim = self.rows.len();
        for j in start..dim {
            let b = v[j];
            if b == 0 {
                continue;
            }
            let a = self.rows[j][j];
            if b % a == 0 {
                let q = b / a;
                let h = &self.rows[j];
                for k in j..dim {
                    v[k] = (v[k] - q * h[k]).rem_euclid(m);
                }
                continue;
            }
            let (g, x, y) = arith::ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            let h = &mut self.rows[j];
            for k in j..dim {
                let (hk, vk) = (h[k], v[k]);
                h[k] = (x * hk + y * vk).rem_euclid(m);
                v[k] = (ag * vk - bg * hk).rem_euclid(m);
            }
            h[j] = g;
        }
    }

    /// Close under `(M/pivot)·row` and reduce entries above each pivot.
    pub fn finish(&mut self) {
        if self.finished {
            return;
        }
        let m = self.modulus;
        let dim = self.rows.len();
        for j in 0..dim {
            let g = self.rows[j][j];
            if g == m {
                continue;
            }
            let mut w: Vec<i128> = self.rows[j].iter().map(|&c| (c * (m / g)).rem_euclid(m)).collect();
            w[j] = 0;
            if w.iter().any(|&c| c != 0) {
                self.eliminate(j + 1, &mut w);
            }
        }
        for j in 0..dim {
            let p = self.rows[j][j];
            for i in 0..j {
                let q = self.rows[i][j].div_euclid(p);
                if q != 0 {
                    for k in j..dim {
                        let t = self.rows[j][k];
                        self.rows[i][k] = (self.rows[i][k] - q * t).rem_euclid(m);
                    }
                }
            }
        }
        self.finished = true;
    }

    /// Canonical coset representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[i64]) -> Vec<i128> {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        self.reduce_wide(&mut w);
        w
    }

    pub fn reduce_wide(&self, w: &mut [i128]) {
        assert!(self.finished, "ModHnf queried before finish()");
        let dim = self.rows.len();
        for c in w.iter_mut() {
            *c = c.rem_euclid(self.modulus);
        }
        for j in 0..dim {
            let p = self.rows[j][j];
            let q = w[j].div_euclid(p);
            if q != 0 {
                for k in j..dim {
                    w[k] = (w[k] - q * self.rows[j][k]).rem_euclid(self.modulus);
                }
            }
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn contains_wide(&self, v: &[i128]) -> bool {
        let mut w = v.to_vec();
        self.reduce_wide(&mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Exact coordinates of `v ∈ L` with respect to the rows.
    pub fn coordinates(&self, v: &[i128]) -> Option<Vec<BigInt>> {
        assert!(self.finished, "ModHnf queried before finish()");
        let dim = self.rows.len();
        let mut rest: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        let mut x = Vec::with_capacity(dim);
        for j in 0..dim {
            let p = BigInt::from(self.rows[j][j]);
            let (q, r) = rest[j].div_rem(&p);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for k in j + 1..dim {
                    let t = self.rows[j][k];
                    if t != 0 {
                        rest[k] -= &q * t;
                    }
                }
            }
            x.push(q);
        }
        Some(x)
    }

    /// Coordinates reduced modulo `n`, in `i128` unless that overflows.
    pub fn coordinates_mod(&self, v: &[i128], n: u64) -> Option<Vec<u64>> {
        assert!(self.finished, "ModHnf queried before finish()");
        let dim = self.rows.len();
        let mut rest = v.to_vec();
        let mut x = Vec::with_capacity(dim);
        for j in 0..dim {
            let p = self.rows[j][j];
            if rest[j] % p != 0 {
                return None;
            }
            let q = rest[j] / p;
            if q != 0 {
                for k in j + 1..dim {
                    let t = self.rows[j][k];
                    match q.checked_mul(t).and_then(|s| rest[k].checked_sub(s)) {
                        Some(val) => rest[k] = val,
                        None => {
                            let big = self.coordinates(v)?;
                            let nb = BigInt::from(n);
                            return Some(big.iter().map(|c| c.mod_floor(&nb).to_u64().unwrap()).collect());
                        }
                    }
                }
            }
            x.push(q.rem_euclid(n as i128) as u64);
        }
        Some(x)
    }
}

/// Smith form over `Z/N` of a relation matrix on `m` generators, tracking the
/// column transform. The module presented is `(Z/N)^m / rowspan`, isomorphic to
/// `⊕ Z/diag[i]` via `x ↦ (x·Q)_i mod diag[i]`.
#[derive(Clone, Debug)]
pub struct SmithModN {
    pub diag: Vec<u64>,
    pub transform: Vec<Vec<u64>>,
    /// `Q^{-1}`: row `i` is a preimage of the `i`-th cyclic generator
    pub inverse: Vec<Vec<u64>>,
}

fn unit_part(p: u64, n: u64) -> (u64, u64) {
    // p ≡ g·u mod n with g = gcd(p, n), u a unit mod n
    let g = arith::gcd(p as i64, n as i64) as u64;
    let n_over_g = n / g;
    let mut u = (p / g) % n_over_g;
    if n_over_g == 1 {
        u = 1;
    }
    while arith::gcd(u as i64, n as i64) != 1 {
        u += n_over_g;
    }
    (g, u % n)
}

pub fn smith_mod_n(mut rel: Vec<Vec<u64>>, m: usize, n: u64) -> SmithModN {
    let ni = n as i128;
    let md = |x: i128| x.rem_euclid(ni) as u64;
    let mut q: Vec<Vec<u64>> = (0..m).map(|i| (0..m).map(|j| u64::from(i == j) % n).collect()).collect();
    let mut qinv = q.clone();
    let mut diag = Vec::with_capacity(m);
    let rows = rel.len();
    for row in rel.iter_mut() {
        for c in row.iter_mut() {
            *c %= n;
        }
    }
    let mut t = 0usize;
    while t < m && t < rows {
        let mut best: Option<(u64, usize, usize)> = None;
        'search: for (i, row) in rel.iter().enumerate().skip(t) {
            for (j, &val) in row.iter().enumerate().skip(t) {
                if val != 0 {
                    let g = arith::gcd(val as i64, n as i64) as u64;
                    if best.map_or(true, |(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                        if g == 1 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            break;
        };
        rel.swap(t, pi);
        for row in rel.iter_mut() {
            row.swap(t, pj);
        }
        for row in q.iter_mut() {
            row.swap(t, pj);
        }
        qinv.swap(t, pj);
        let g = loop {
            let p = rel[t][t];
            let (g, u) = unit_part(p, n);
            let uinv = arith::mod_inv(u as i64, n as i64).unwrap() as i128;
            let mut restarted = false;
            for i in 0..rows {
                let b = rel[i][t];
                if i == t || b == 0 {
                    continue;
                }
                if b % g == 0 {
                    let c = (b / g) as i128 * uinv % ni;
                    for k in 0..m {
                        rel[i][k] = md(rel[i][k] as i128 - c * rel[t][k] as i128);
                    }
                } else {
                    let (gg, x, y) = arith::ext_gcd(p as i128, b as i128);
                    let (pa, pb) = (p as i128 / gg, b as i128 / gg);
                    for k in 0..m {
                        let (rt, ri) = (rel[t][k] as i128, rel[i][k] as i128);
                        rel[t][k] = md(x * rt + y * ri);
                        rel[i][k] = md(pa * ri - pb * rt);
                    }
                    restarted = true;
                    break;
                }
            }
            if restarted {
                continue;
            }
            for j in 0..m {
                let b = rel[t][j];
                if j == t || b == 0 {
                    continue;
                }
                if b % g == 0 {
                    let c = (b / g) as i128 * uinv % ni;
                    for row in rel.iter_mut().chain(q.iter_mut()) {
                        row[j] = md(row[j] as i128 - c * row[t] as i128);
                    }
                    for k in 0..m {
                        qinv[t][k] = md(qinv[t][k] as i128 + c * qinv[j][k] as i128);
                    }
                } else {
                    let (gg, x, y) = arith::ext_gcd(p as i128, b as i128);
                    let (pa, pb) = (p as i128 / gg, b as i128 / gg);
                    for row in rel.iter_mut().chain(q.iter_mut()) {
                        let (ct, cj) = (row[t] as i128, row[j] as i128);
                        row[t] = md(x * ct + y * cj);
                        row[j] = md(pa * cj - pb * ct);
                    }
                    for k in 0..m {
                        let (rt, rj) = (qinv[t][k] as i128, qinv[j][k] as i128);
                        qinv[t][k] = md(pa * rt + pb * rj);
                        qinv[j][k] = md(x * rj - y * rt);
                    }
                    restarted = true;
                    break;
                }
            }
            if !restarted {
                break g;
            }
        };
        diag.push(g);
        t += 1;
    }
    while diag.len() < m {
        diag.push(n);
    }
    SmithModN { diag, transform: q, inverse: qinv }
}
