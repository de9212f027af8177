//! Values in `Z/(q-1) ⊗ I_n^r/I_n^{r+1}`.

use crate::arith;
use crate::groupring::AugClass;
use serde::Serialize;

/// Coordinates in `⊕ Z/m_i`; a `Z` summand of the class group becomes `Z/(q-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub moduli: Vec<u64>,
    pub coords: Vec<u64>,
}

impl Residual {
    pub fn zero(class_moduli: &[u64], q1: u64) -> Self {
        let moduli: Vec<u64> = class_moduli.iter().map(|&d| if d == 0 { q1 } else { d }).collect();
        Residual { coords: vec![0; moduli.len()], moduli }
    }

    pub fn from_class(c: &AugClass, q1: u64) -> Self {
        let mut r = Self::zero(c.moduli(), q1);
        for (x, (&v, &m)) in r.coords.iter_mut().zip(c.coords().iter().zip(&r.moduli)) {
            *x = v.rem_euclid(m as i64) as u64;
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.moduli, o.moduli, "residual groups differ");
        let coords = self.coords.iter().zip(&o.coords).zip(&self.moduli).map(|((a, b), m)| (a + b) % m).collect();
        Residual { moduli: self.moduli.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        let coords = self.coords.iter().zip(&self.moduli).map(|(a, m)| (m - a) % m).collect();
        Residual { moduli: self.moduli.clone(), coords }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: u64) -> Self {
        let coords = self.coords.iter().zip(&self.moduli).map(|(&a, &m)| arith::mod_mul(a, k % m, m)).collect();
        Residual { moduli: self.moduli.clone(), coords }
    }

    pub fn scale_signed(&self, k: i64) -> Self {
        let r = self.scale(k.unsigned_abs());
        if k < 0 {
            r.neg()
        } else {
            r
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Image in the odd part, `⊗ Z[1/2]`.
    pub fn odd_part(&self) -> Self {
        let moduli: Vec<u64> = self.moduli.iter().map(|&m| m / arith::two_part(m)).collect();
        let coords = self.coords.iter().zip(&moduli).map(|(a, m)| a % m).collect();
        Residual { moduli, coords }
    }

    /// Is the odd part of the group itself trivial?
    pub fn odd_group_trivial(&self) -> bool {
        self.moduli.iter().all(|&m| m / arith::two_part(m) == 1)
    }
}
