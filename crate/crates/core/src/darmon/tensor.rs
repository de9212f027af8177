//! Elements of `(1-τ)E ⊗ I_n^r/I_n^{r+1}` and the regulators `R_n`, `R_{n,n'}`.

use super::reduction::ReductionHom;
use super::residual::Residual;
use crate::error::{Error, Result};
use crate::groupring::{det, AugClass, AugQuot, GradedPoly, GroupRingElt};
use crate::localsym::del;
use crate::quadfield::{PlaceData, QuadField, QuadNum, UnitLattice};
use std::sync::Arc;

/// `Σ x_i ⊗ c_i` with global numbers `x_i` and classes `c_i`.
#[derive(Clone)]
pub struct TensorElt {
    pub level: u64,
    pub degree: u32,
    quot: Arc<AugQuot>,
    terms: Vec<(QuadNum, AugClass)>,
}

impl std::fmt::Debug for TensorElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TensorElt").field("level", &self.level).field("degree", &self.degree).field("terms", &self.terms).finish()
    }
}

/// The quotient `I_n^r/I_n^{r+1}` split along `Y_{n_+}`.
pub fn level_quot(field: &QuadField, n: u64) -> Result<Arc<AugQuot>> {
    let split = field.split_part(n);
    AugQuot::with_new_support(n, split.len() as u32, split.iter().product())
}

impl TensorElt {
    pub fn zero(quot: Arc<AugQuot>) -> Self {
        TensorElt { level: quot.level(), degree: quot.degree(), quot, terms: Vec::new() }
    }

    pub fn quot(&self) -> &Arc<AugQuot> {
        &self.quot
    }

    pub fn terms(&self) -> &[(QuadNum, AugClass)] {
        &self.terms
    }

    /// Add `x ⊗ c`, merging with an equal global number.
    pub fn push(&mut self, x: QuadNum, c: AugClass) {
        if let Some(t) = self.terms.iter_mut().find(|(y, _)| *y == x) {
            t.1 = t.1.add(&c);
        } else {
            self.terms.push((x, c));
        }
        self.terms.retain(|(_, c)| !c.is_zero());
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (x, c) in &o.terms {
            out.push(x.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(self.quot.clone());
        for (x, c) in &self.terms {
            out.push(x.clone(), c.scale(k));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// `(1 ⊗ π_d)`, landing in the same quotient.
    pub fn pi(&self, d: u64) -> Result<Self> {
        let mut out = Self::zero(self.quot.clone());
        for (x, c) in &self.terms {
            out.push(x.clone(), self.quot.pi(c, d)?);
        }
        Ok(out)
    }

    /// Multiply the coefficient side by a class of `I_n^k/I_n^{k+1}`, landing in `target`.
    pub fn mul_poly(&self, p: &GradedPoly, target: Arc<AugQuot>) -> Result<Self> {
        let mut out = Self::zero(target.clone());
        for (x, c) in &self.terms {
            let rep = self.quot.representative(c);
            let prod = rep.embed_into(target.group())?.mul(&GroupRingElt::realize(target.group(), p)?);
            out.push(x.clone(), target.class_of(&prod)?);
        }
        Ok(out)
    }

    /// Coordinates `c_j` with `self = Σ ε_j ⊗ c_j` in the given basis.
    pub fn in_basis(&self, field: &QuadField, places: &PlaceData, lattice: &UnitLattice) -> Result<Vec<AugClass>> {
        let mut out = vec![self.quot.zero(); lattice.rank()];
        for (x, c) in &self.terms {
            let a = unit_coordinates(field, places, lattice, x)?;
            for (o, k) in out.iter_mut().zip(a) {
                *o = o.add(&c.scale(k));
            }
        }
        Ok(out)
    }

    /// `Σ h(x_i) c_i` as a class; a `Z` coordinate is only meaningful mod `q - 1`.
    pub fn reduce_class(&self, h: &ReductionHom) -> Result<AugClass> {
        let mut acc = self.quot.zero();
        for (x, c) in &self.terms {
            acc = acc.add(&c.scale(h.log_quad(x)? as i64));
        }
        Ok(acc)
    }

    /// `Σ h(x_i) c_i` in `Z/(q-1) ⊗ I_n^r/I_n^{r+1}`.
    pub fn reduce(&self, h: &ReductionHom) -> Result<Residual> {
        Ok(Residual::from_class(&self.reduce_class(h)?, h.target_order()))
    }
}

/// Exponents of `x ∈ (1-τ)E_n` over the nested basis, whose ord-matrix is
/// upper triangular with `ord_{λ_i}(ε_i) = -k_i`.
pub fn unit_coordinates(field: &QuadField, places: &PlaceData, lattice: &UnitLattice, x: &QuadNum) -> Result<Vec<i64>> {
    let r = places.primes.len();
    let ords: Vec<i64> = places.lambdas.iter().map(|p| field.ord_at(x, p)).collect::<Result<_>>()?;
    let mut c = vec![0i64; r + 1];
    for i in (0..r).rev() {
        let mut rest = ords[i];
        for j in i + 1..=r {
            if c[j] != 0 {
                rest -= field.ord_at(&lattice.basis[j], &places.lambdas[i])? * c[j];
            }
        }
        let diag = field.ord_at(&lattice.basis[i + 1], &places.lambdas[i])?;
        if rest % diag != 0 {
            return Err(Error::InvalidArgument(format!("{x} is not in (1-τ)E_{}", places.level)));
        }
        c[i + 1] = rest / diag;
    }
    let mut y = x.clone();
    for (j, &cj) in c.iter().enumerate().skip(1) {
        if cj != 0 {
            y = y.mul(&lattice.basis[j].pow(-cj));
        }
    }
    let e0 = &lattice.basis[0];
    let k = (y.ln_abs() / e0.ln_abs()).round() as i64;
    if e0.pow(k) != y {
        return Err(Error::InvalidArgument(format!("{x} is not in (1-τ)E_{}", places.level)));
    }
    c[0] = k;
    Ok(c)
}

fn minors_expansion(
    field: &QuadField,
    places: &PlaceData,
    basis: &[QuadNum],
    symbol_level: u64,
    quot: Arc<AugQuot>,
) -> Result<TensorElt> {
    let r = places.primes.len();
    let rows: Vec<Vec<GradedPoly>> = places
        .lambdas
        .iter()
        .map(|lam| basis.iter().map(|e| del(field, e, lam, symbol_level)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut out = TensorElt::zero(quot.clone());
    for (j, e) in basis.iter().enumerate() {
        let minor: Vec<Vec<GradedPoly>> =
            rows.iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
        let mut d = det(&minor, 0);
        if r == 0 {
            d = GradedPoly::constant(1, 0);
        }
        if j % 2 == 1 {
            d = d.neg();
        }
        out.push(e.clone(), quot.class_of_poly(&d)?);
    }
    Ok(out)
}

/// `R_n = Σ_j (-1)^j ε_j ⊗ det(A_{1j})`.
pub fn regulator(field: &QuadField, n: u64) -> Result<TensorElt> {
    let (places, lattice) = field.unit_basis(n)?;
    minors_expansion(field, &places, &lattice.basis, n, level_quot(field, n)?)
}

/// `R_n` from an explicit (oriented) basis.
pub fn regulator_with_basis(field: &QuadField, places: &PlaceData, basis: &[QuadNum]) -> Result<TensorElt> {
    let q = level_quot(field, places.level)?;
    minors_expansion(field, places, basis, places.level, q)
}

/// `R_{n,n'}`: the rows use the symbols `∂^{(n')}`; lands in `I_{n'}^r/I_{n'}^{r+1}`.
pub fn bordered_regulator(field: &QuadField, n: u64, n2: u64) -> Result<TensorElt> {
    if n2 % n != 0 {
        return Err(Error::InvalidArgument(format!("{n} does not divide {n2}")));
    }
    field.check_level(n2)?;
    let (places, lattice) = field.unit_basis(n)?;
    let r = places.primes.len() as u32;
    let quot = AugQuot::with_new_support(n2, r, places.primes.iter().product())?;
    minors_expansion(field, &places, &lattice.basis, n2, quot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{make_field, minus_part};

    #[test]
    fn base_regulator_is_the_minus_unit() {
        let f = make_field(5).unwrap();
        let r1 = regulator(&f, 1).unwrap();
        assert_eq!(r1.terms().len(), 1);
        assert_eq!(r1.terms()[0].0, minus_part(f.fundamental_unit()));
        assert_eq!(r1.terms()[0].1.coords(), &[1]);
    }

    #[test]
    fn independent_of_oriented_basis() {
        let f = make_field(5).unwrap();
        let n = 11 * 31;
        let (places, lat) = f.unit_basis(n).unwrap();
        let r = regulator(&f, n).unwrap();
        // unimodular, orientation-preserving change of basis
        let mut b = lat.basis.clone();
        b[1] = b[1].mul(&b[0].pow(2));
        b[2] = b[2].mul(&b[1].pow(-3));
        b.swap(1, 2);
        b[0] = b[0].inv();
        let r2 = regulator_with_basis(&f, &places, &b).unwrap();
        assert_eq!(r.in_basis(&f, &places, &lat).unwrap(), r2.in_basis(&f, &places, &lat).unwrap());
    }

    #[test]
    fn bordered_at_same_level_is_plain() {
        let f = make_field(5).unwrap();
        for n in [11u64, 33, 209] {
            let (places, lat) = f.unit_basis(n).unwrap();
            let a = regulator(&f, n).unwrap().in_basis(&f, &places, &lat).unwrap();
            let b = bordered_regulator(&f, n, n).unwrap().in_basis(&f, &places, &lat).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let f = make_field(10).unwrap();
        let (places, lat) = f.unit_basis(3 * 13).unwrap();
        let x = lat.basis[0].pow(2).mul(&lat.basis[1].pow(-1)).mul(&lat.basis[2].pow(3));
        assert_eq!(unit_coordinates(&f, &places, &lat, &x).unwrap(), vec![2, -1, 3]);
    }
}
