//! Exact integer-Gram lattices.
//!
//! A lattice is stored as a symmetric positive-definite integer Gram matrix `G`,
//! a positive rational scale `s` and a real dilation `β` (default 1). True inner
//! products are `β² s G`. The dilation only appears when a lattice has been
//! normalized to a prescribed volume; all enumeration happens on `G` itself.

pub mod exact;
mod enumerate;
mod hnf;
mod lll;
mod points;
mod testfn;

pub use hnf::hnf;
pub use lll::lll_gram;
pub use points::{DensityReport, PointSandwich};
pub use testfn::TestFunction;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::IntMat;

/// A lattice point in coordinates of the stored basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    /// `xᵀ G x`
    pub form: i128,
    /// `s · xᵀ G x`, exact. The dilation (if any) is not included.
    pub sqnorm: Ratio<i128>,
}

impl LatticePoint {
    pub fn is_primitive(&self) -> bool {
        crate::arith::gcd_slice(&self.coords) == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLattice", into = "RawLattice")]
pub struct IntLattice {
    gram: IntMat,
    scale: Ratio<i64>,
    dilation: f64,
    basis: Option<IntMat>,
}

#[derive(Serialize, Deserialize)]
struct RawLattice {
    m: usize,
    gram: IntMat,
    scale_num: i64,
    scale_den: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<IntMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dilation: Option<f64>,
}

impl TryFrom<RawLattice> for IntLattice {
    type Error = Error;
    fn try_from(r: RawLattice) -> Result<Self> {
        if r.gram.len() != r.m {
            return Err(Error::Mismatch(format!("m = {} but gram has {} rows", r.m, r.gram.len())));
        }
        let mut l = IntLattice::new(r.gram, r.scale_num, r.scale_den)?;
        if let Some(b) = r.basis {
            l = l.with_basis(b)?;
        }
        if let Some(d) = r.dilation {
            l = l.dilate(d)?;
        }
        Ok(l)
    }
}

impl From<IntLattice> for RawLattice {
    fn from(l: IntLattice) -> Self {
        RawLattice {
            m: l.rank(),
            scale_num: *l.scale.numer(),
            scale_den: *l.scale.denom(),
            dilation: (l.dilation != 1.0).then_some(l.dilation),
            gram: l.gram,
            basis: l.basis,
        }
    }
}

impl IntLattice {
    /// Validates symmetry and positive definiteness exactly.
    pub fn new(gram: IntMat, scale_num: i64, scale_den: i64) -> Result<Self> {
        if scale_num <= 0 || scale_den <= 0 {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        if gram.is_empty() || gram.iter().any(|r| r.len() != gram.len()) {
            return Err(Error::Mismatch("gram must be a nonempty square matrix".into()));
        }
        if !exact::is_positive_definite(&gram) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(IntLattice { gram, scale: Ratio::new(scale_num, scale_den), dilation: 1.0, basis: None })
    }

    /// `ℤ^m` with the standard form and identity basis.
    pub fn integer(m: usize) -> Self {
        let id: IntMat = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
        IntLattice { gram: id.clone(), scale: Ratio::one(), dilation: 1.0, basis: Some(id) }
    }

    /// Lattice spanned by the rows of `basis` in `ℤ^d` with the standard form.
    pub fn from_basis(basis: IntMat) -> Result<Self> {
        let gram = gram_of(&basis, None);
        IntLattice::new(gram, 1, 1)?.with_basis(basis)
    }

    /// Attaches integer coordinates with respect to some ambient lattice.
    /// The caller is responsible for the Gram being the ambient form restricted
    /// to these rows.
    pub fn with_basis(mut self, basis: IntMat) -> Result<Self> {
        if basis.len() != self.rank() || basis.iter().any(|r| r.len() != basis[0].len()) {
            return Err(Error::Mismatch("basis must have m rows of equal length".into()));
        }
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn without_basis(mut self) -> Self {
        self.basis = None;
        self
    }

    /// Multiplies the dilation by `beta`, i.e. returns `β·L`.
    pub fn dilate(mut self, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("dilation {beta} must be positive")));
        }
        self.dilation *= beta;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }
    pub fn gram(&self) -> &IntMat {
        &self.gram
    }
    pub fn scale(&self) -> Ratio<i64> {
        self.scale
    }
    pub fn dilation(&self) -> f64 {
        self.dilation
    }
    pub fn basis(&self) -> Option<&IntMat> {
        self.basis.as_ref()
    }

    /// Multiplier turning a form value `xᵀGx` into a true squared norm.
    pub fn norm_factor(&self) -> f64 {
        self.dilation * self.dilation * (*self.scale.numer() as f64) / (*self.scale.denom() as f64)
    }

    pub fn form(&self, x: &[i64]) -> i128 {
        let mut acc = 0i128;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let s: i128 = row.iter().zip(x).map(|(&g, &y)| g as i128 * y as i128).sum();
            acc += x[i] as i128 * s;
        }
        acc
    }

    pub fn point(&self, coords: Vec<i64>) -> LatticePoint {
        let form = self.form(&coords);
        let s = Ratio::new(*self.scale.numer() as i128, *self.scale.denom() as i128);
        LatticePoint { coords, form, sqnorm: s * form }
    }

    /// True squared norm of a point, dilation included.
    pub fn real_sqnorm(&self, p: &LatticePoint) -> f64 {
        p.form as f64 * self.norm_factor()
    }

    /// Largest integer `F` with `norm_factor · F ≤ r²`, allowing a relative
    /// slack of `1e-12` so that points exactly on the sphere are kept.
    pub fn form_bound(&self, r: f64) -> i128 {
        if r <= 0.0 {
            return 0;
        }
        let x = r * r / self.norm_factor();
        let x = x + 1e-12 * x.max(1.0);
        if x >= 1e30 {
            i128::MAX / 4
        } else {
            x.floor() as i128
        }
    }

    pub fn det_gram(&self) -> BigInt {
        exact::det_pd(&self.gram)
    }

    /// `ln V(L) = m ln β + (m/2) ln s + ½ ln det G`.
    pub fn ln_volume(&self) -> f64 {
        let m = self.rank() as f64;
        let s = (*self.scale.numer() as f64).ln() - (*self.scale.denom() as f64).ln();
        m * self.dilation.ln() + 0.5 * m * s + 0.5 * exact::ln_big(&self.det_gram())
    }

    pub fn volume(&self) -> f64 {
        self.ln_volume().exp()
    }

    /// `(β·L, β)` with `V(β·L) = target`.
    pub fn normalize(&self, target: f64) -> Result<(IntLattice, f64)> {
        if !(target.is_finite() && target > 0.0) {
            return Err(Error::InvalidParameter(format!("target volume {target} must be positive")));
        }
        let beta = ((target.ln() - self.ln_volume()) / self.rank() as f64).exp();
        Ok((self.clone().dilate(beta)?, beta))
    }

    /// Change of basis by an integer matrix `U` (rows = new vectors in old
    /// coordinates). `U` must be nonsingular; the result is a sublattice
    /// (equal when `U` is unimodular).
    pub fn transform(&self, u: &IntMat) -> Result<IntLattice> {
        if u.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::Mismatch("transform columns must equal the rank".into()));
        }
        let gram = gram_of(u, Some(&self.gram));
        let mut l = IntLattice::new(gram, *self.scale.numer(), *self.scale.denom())?;
        l.dilation = self.dilation;
        if let Some(b) = &self.basis {
            l.basis = Some(mat_mul(u, b));
        }
        Ok(l)
    }

    /// LLL reduction with `delta = num/den`; returns the reduced lattice and the
    /// unimodular transform from the old basis.
    pub fn lll_reduce(&self, delta_num: i64, delta_den: i64) -> Result<(IntLattice, IntMat)> {
        if !(4 * delta_num > delta_den && delta_num <= delta_den && delta_den > 0) {
            return Err(Error::InvalidParameter("delta must lie in (1/4, 1]".into()));
        }
        let (g, t) = lll_gram(&self.gram, delta_num, delta_den);
        let mut l = self.clone();
        l.gram = g;
        if let Some(b) = &self.basis {
            l.basis = Some(mat_mul(&t, b));
        }
        Ok((l, t))
    }

    /// The dual lattice, Gram `s⁻¹ G⁻¹` brought to integer form.
    pub fn dual(&self) -> Result<IntLattice> {
        let inv = exact::inverse(&self.gram).ok_or(Error::NotPositiveDefinite)?;
        let (num, den) = exact::clear_denominators(&inv);
        let g = num.iter().flatten().fold(BigInt::from(0), |a, x| a.gcd(x));
        let gram: Option<IntMat> =
            num.iter().map(|r| r.iter().map(|x| (x / &g).to_i64()).collect()).collect();
        let gram = gram.ok_or_else(|| Error::InvalidParameter("dual gram overflows i64".into()))?;
        // true dual form = G⁻¹ / s = (g/den) · gram / s
        let sn = BigInt::from(*self.scale.denom()) * &g;
        let sd = BigInt::from(*self.scale.numer()) * &den;
        let c = sn.gcd(&sd);
        let (sn, sd) = ((sn / &c).to_i64(), (sd / &c).to_i64());
        let (Some(sn), Some(sd)) = (sn, sd) else {
            return Err(Error::InvalidParameter("dual scale overflows i64".into()));
        };
        let mut l = IntLattice::new(gram, sn, sd)?;
        l.dilation = 1.0 / self.dilation;
        Ok(l)
    }

    /// Squared Gram-Schmidt lengths (true norms) of the LLL-reduced basis.
    pub fn gram_schmidt_sqnorms(&self) -> Vec<f64> {
        let (g, _) = lll_gram(&self.gram, 99, 100);
        let f = self.norm_factor();
        enumerate::cholesky(&g).iter().enumerate().map(|(i, r)| r[i] * f).collect()
    }

    /// Coordinates of an ambient vector in the stored basis, if it lies in the lattice.
    pub fn coords_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        let b = self.basis.as_ref()?;
        if v.len() != b[0].len() {
            return None;
        }
        let x = exact::solve_left(b, v)?;
        x.iter().map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None }).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coords_of(v).is_some()
    }

    /// Ambient coordinates of a lattice point (requires a basis).
    pub fn ambient(&self, coords: &[i64]) -> Option<Vec<i64>> {
        let b = self.basis.as_ref()?;
        Some((0..b[0].len()).map(|c| coords.iter().zip(b).map(|(x, r)| x * r[c]).sum()).collect())
    }

    pub(crate) fn check_rank_cap(&self, cap: usize) -> Result<()> {
        if self.rank() > cap {
            return Err(Error::CapExceeded {
                what: "shortest vector rank",
                needed: self.rank().to_string(),
                cap: cap as u64,
            });
        }
        Ok(())
    }

}

/// `A · B`.
pub(crate) fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    a.iter()
        .map(|r| (0..b[0].len()).map(|c| r.iter().zip(b).map(|(x, row)| x * row[c]).sum()).collect())
        .collect()
}

/// `B · G · Bᵀ` computed in 128-bit arithmetic; fails if an entry overflows `i64`.
pub fn gram_of_basis(b: &IntMat, g: &IntMat) -> Result<IntMat> {
    let m = g.len();
    if b.iter().any(|r| r.len() != m) {
        return Err(Error::Mismatch(format!("basis rows must have length {m}")));
    }
    let bg: Vec<Vec<i128>> = b
        .iter()
        .map(|r| (0..m).map(|c| r.iter().zip(g).map(|(&x, row)| x as i128 * row[c] as i128).sum()).collect())
        .collect();
    bg.iter()
        .map(|r| {
            b.iter()
                .map(|s| {
                    let v: i128 = r.iter().zip(s).map(|(&x, &y)| x * y as i128).sum();
                    i64::try_from(v).map_err(|_| Error::InvalidParameter("gram entry overflows i64".into()))
                })
                .collect()
        })
        .collect()
}

/// `B · A · Bᵀ`, or `B Bᵀ` when no form is given.
pub(crate) fn gram_of(b: &IntMat, form: Option<&IntMat>) -> IntMat {
    let ba = match form {
        Some(a) => mat_mul(b, a),
        None => b.clone(),
    };
    ba.iter()
        .map(|r| b.iter().map(|s| r.iter().zip(s).map(|(x, y)| x * y).sum()).collect())
        .collect()
}
