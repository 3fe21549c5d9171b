use rayon::prelude::*;
use serde::Serialize;

use super::{HurwitzIso, Quat};
use crate::arith::{is_prime, reduce};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::galois::{has_unit_coordinate, FreeMatCode, MatRing2};
use crate::lattice::IntLattice;
use crate::reduction::Reduction;
use crate::IntMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuatOrder {
    /// `ℤ[i] + ℤ[i]j ≅ ℤ^4`, coordinates `(a, b, c, d)` of `a + bi + cj + dk`.
    Lipschitz,
    /// The Hurwitz order in the basis `1, i, j, ω` (Gram `D_4 / 2`).
    Hurwitz,
}

/// A componentwise reduction `O^m → M_2(F_p)^m` for a quaternion order `O`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatReduction {
    order: QuatOrder,
    p: u64,
    m: usize,
    /// `π(i)` for the Lipschitz map
    u: Option<u64>,
    iso: Option<HurwitzIso>,
    reduction: Reduction,
}

fn block_diag(block: &IntMat, m: usize) -> IntMat {
    let b = block.len();
    (0..b * m)
        .map(|r| (0..b * m).map(|c| if r / b == c / b { block[r % b][c % b] } else { 0 }).collect())
        .collect()
}

/// Matrix whose column `4·blk + c` holds the entries of the image of basis
/// element `c` in block `blk`.
fn map_from_images(images: &[MatRing2; 4], m: usize) -> IntMat {
    let mut map = vec![vec![0i64; 4 * m]; 4 * m];
    for blk in 0..m {
        for (c, img) in images.iter().enumerate() {
            for (e, &v) in img.entries().iter().enumerate() {
                map[4 * blk + e][4 * blk + c] = v as i64;
            }
        }
    }
    map
}

/// `m` copies of the Lipschitz order reduced modulo a split prime of `ℤ[i]`:
/// `x + yj ↦ (π(x) -π(y); π(ȳ) π(x̄))` with `π(i) = u`, `u² ≡ -1`.
pub fn lipschitz_reduction(p: u64, m: usize) -> Result<QuatReduction> {
    if !is_prime(p) || p % 4 != 1 {
        return Err(Error::InvalidParameter(format!("{p} is not a prime ≡ 1 (mod 4)")));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let u = (2..p).find(|&u| (u * u + 1) % p == 0).expect("p ≡ 1 mod 4");
    let mut r = QuatReduction {
        order: QuatOrder::Lipschitz,
        p,
        m,
        u: Some(u),
        iso: None,
        reduction: Reduction::natural(IntLattice::integer(1), 2)?,
    };
    let images = [Quat::one(), Quat::i(), Quat::j(), Quat::k()].map(|q| r.image(&q));
    r.reduction = Reduction::new(IntLattice::integer(4 * m), p, &map_from_images(&images, m))?;
    Ok(r)
}

/// `m` copies of the Hurwitz order (base Gram `D_4` with scale `1/2`) reduced
/// through the explicit isomorphism `H/pH ≅ M_2(F_p)`.
pub fn hurwitz_reduction(p: u64, m: usize) -> Result<QuatReduction> {
    let iso = HurwitzIso::new(p)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let d4 = vec![vec![2, 0, 0, -1], vec![0, 2, 0, 1], vec![0, 0, 2, 1], vec![-1, 1, 1, 2]];
    let id: IntMat = (0..4 * m).map(|i| (0..4 * m).map(|j| (i == j) as i64).collect()).collect();
    let base = IntLattice::new(block_diag(&d4, m), 1, 2)?.with_basis(id)?;
    let images = [Quat::one(), Quat::i(), Quat::j(), Quat::omega()].map(|q| iso.image(&q));
    let reduction = Reduction::new(base, p, &map_from_images(&images, m))?;
    Ok(QuatReduction { order: QuatOrder::Hurwitz, p, m, u: None, iso: Some(iso), reduction })
}

/// Result of the exhaustive residue-box check of the non-invertible norm lemma.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub p: u64,
    pub u: u64,
    pub side: u64,
    pub checked: u64,
    /// elements whose image has determinant zero
    pub singular: u64,
    pub counterexample: Option<[i64; 4]>,
    pub pass: bool,
}

/// Checks every Lipschitz quaternion with coordinates in `[0, side)^4`:
/// `det φ_p(x + yj) ≡ 0` must force `nrd ≡ 0 (mod p)`.
pub fn noninvertible_norm_check(p: u64, side: u64) -> Result<Lemma1Report> {
    let r = lipschitz_reduction(p, 1)?;
    if side == 0 || side > 1 << 12 {
        return Err(Error::InvalidParameter(format!("box side {side} out of range")));
    }
    let s = side as i64;
    let (singular, bad) = (0..s)
        .into_par_iter()
        .map(|a| {
            let mut singular = 0u64;
            let mut bad = None;
            for b in 0..s {
                for c in 0..s {
                    for d in 0..s {
                        let q = Quat::new(a, b, c, d);
                        if r.image(&q).det() == 0 {
                            singular += 1;
                            if reduce(q.nrd(), p) != 0 && bad.is_none() {
                                bad = Some([a, b, c, d]);
                            }
                        }
                    }
                }
            }
            (singular, bad)
        })
        .reduce(|| (0, None), |x, y| (x.0 + y.0, x.1.or(y.1)));
    Ok(Lemma1Report {
        p,
        u: r.u.expect("lipschitz"),
        side,
        checked: side.pow(4),
        singular,
        counterexample: bad,
        pass: bad.is_none(),
    })
}

/// Enumeration check that nonzero lifted vectors with non-invertible image have
/// squared norm at least `p` (dilation excluded).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberReport {
    pub p: u64,
    /// points with squared norm below `p`, one per ± pair
    pub checked: u64,
    /// nonzero points below `p` whose image has no invertible coordinate
    pub violations: u64,
    pub pass: bool,
}

impl QuatReduction {
    pub fn order(&self) -> QuatOrder {
        self.order
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn iso(&self) -> Option<&HurwitzIso> {
        self.iso.as_ref()
    }
    pub fn u(&self) -> Option<u64> {
        self.u
    }
    pub fn reduction(&self) -> &Reduction {
        &self.reduction
    }
    pub fn base(&self) -> &IntLattice {
        self.reduction.base()
    }

    /// Image of a single quaternion of the order.
    pub fn image(&self, q: &Quat) -> MatRing2 {
        let p = self.p;
        match self.order {
            QuatOrder::Hurwitz => self.iso.expect("hurwitz").image(q),
            QuatOrder::Lipschitz => {
                let u = self.u.expect("lipschitz") as i64;
                let [a, b, c, d] = q.lipschitz_coords();
                let (x, xb) = (a + b * u, a - b * u);
                let (y, yb) = (c + d * u, c - d * u);
                MatRing2::new(p, [x % p as i64, -(y % p as i64), yb % p as i64, xb % p as i64])
            }
        }
    }

    /// Base coordinates (blocks of four) as quaternions.
    pub fn quats_of(&self, x: &[i64]) -> Vec<Quat> {
        x.chunks(4)
            .map(|c| match self.order {
                QuatOrder::Lipschitz => Quat::new(c[0], c[1], c[2], c[3]),
                QuatOrder::Hurwitz => Quat::from_hurwitz_coords(c),
            })
            .collect()
    }

    pub fn coords_of_quats(&self, v: &[Quat]) -> Vec<i64> {
        v.iter()
            .flat_map(|q| match self.order {
                QuatOrder::Lipschitz => q.lipschitz_coords(),
                QuatOrder::Hurwitz => q.hurwitz_coords(),
            })
            .collect()
    }

    /// `φ_p` of a base-coordinate vector, as ring elements.
    pub fn apply(&self, x: &[i64]) -> Vec<MatRing2> {
        self.reduction
            .apply(x)
            .chunks(4)
            .map(|e| MatRing2::new(self.p, [e[0] as i64, e[1] as i64, e[2] as i64, e[3] as i64]))
            .collect()
    }

    pub fn units(&self) -> Vec<Quat> {
        match self.order {
            QuatOrder::Lipschitz => Quat::lipschitz_units(),
            QuatOrder::Hurwitz => Quat::hurwitz_units(),
        }
    }

    /// `φ_p^{-1}(C)`; its volume is `p^{4m} V(base) / |C|`.
    pub fn lift(&self, code: &FreeMatCode) -> Result<IntLattice> {
        if code.p() != self.p || code.m() != self.m {
            return Err(Error::Mismatch(format!(
                "code lives in M2(F_{})^{}, reduction targets M2(F_{})^{}",
                code.p(),
                code.m(),
                self.p,
                self.m
            )));
        }
        self.reduction.lift_code(&code.to_linear_code())
    }

    /// The kernel `φ_p^{-1}(0)`.
    pub fn kernel(&self) -> Result<IntLattice> {
        self.reduction.lift_code(&crate::galois::LinearCode::zero(self.p, 4 * self.m)?)
    }

    /// Left multiplication by every unit maps the lattice into itself. Checked on
    /// the basis (which proves it) and on the minimal vectors, whose images must
    /// again be minimal.
    pub fn unit_closed(&self, lat: &IntLattice, caps: &Caps) -> Result<bool> {
        let basis = lat
            .basis()
            .ok_or_else(|| Error::InvalidParameter("lattice needs a basis in base coordinates".into()))?;
        let units = self.units();
        let act = |u: &Quat, x: &[i64]| -> Vec<i64> {
            let qs: Vec<Quat> = self.quats_of(x).iter().map(|q| u.mul(q)).collect();
            self.coords_of_quats(&qs)
        };
        for row in basis {
            if units.iter().any(|u| !lat.contains(&act(u, row))) {
                return Ok(false);
            }
        }
        for v in lat.minimal_vectors(caps)? {
            let amb = lat.ambient(&v.coords).expect("basis");
            for u in &units {
                match lat.coords_of(&act(u, &amb)) {
                    Some(c) if lat.form(&c) == v.form => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Enumerates lifted vectors of squared norm below `p` and counts those whose
    /// image has no invertible coordinate.
    pub fn fiber_check(&self, lat: &IntLattice, caps: &Caps) -> Result<FiberReport> {
        let s = lat.scale();
        // form < p / s
        let bound = ((self.p as i128 * *s.denom() as i128) - 1) / *s.numer() as i128;
        let pts = if bound > 0 { lat.short_points(bound, caps)? } else { Vec::new() };
        let mut violations = 0;
        for pt in &pts {
            let amb = lat.ambient(&pt.coords).expect("basis");
            if !has_unit_coordinate(&self.apply(&amb)) {
                violations += 1;
            }
        }
        Ok(FiberReport { p: self.p, checked: pts.len() as u64, violations, pass: violations == 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::enumerate_free_modules;

    #[test]
    fn lipschitz_images() {
        let r = lipschitz_reduction(5, 1).unwrap();
        assert_eq!(r.u(), Some(2));
        assert_eq!(r.image(&Quat::one()), MatRing2::identity(5));
        assert_eq!(r.image(&Quat::i()), MatRing2::new(5, [2, 0, 0, 3]));
        assert!(lipschitz_reduction(7, 1).is_err());
    }

    #[test]
    fn lipschitz_map_is_multiplicative() {
        for p in [5u64, 13] {
            let r = lipschitz_reduction(p, 1).unwrap();
            let s = p as i64;
            let elems: Vec<Quat> = (0..s.pow(4))
                .step_by(if p == 5 { 1 } else { 17 })
                .map(|i| Quat::new(i % s, i / s % s, i / s / s % s, i / s / s / s))
                .collect();
            for x in &elems {
                assert_eq!(r.image(x).det(), reduce(x.nrd(), p));
                for y in elems.iter().step_by(7) {
                    assert_eq!(r.image(&x.mul(y)), r.image(x).mul(&r.image(y)));
                }
            }
        }
    }

    #[test]
    fn kernels() {
        for (r, base_vol) in [(lipschitz_reduction(5, 1).unwrap(), 1.0), (hurwitz_reduction(5, 1).unwrap(), 0.5)] {
            let k = r.kernel().unwrap();
            assert!((r.base().volume() - base_vol).abs() < 1e-12);
            assert!((k.volume() - 625.0 * base_vol).abs() < 1e-6);
        }
        // Lipschitz kernel is 5ℤ^4
        let k = lipschitz_reduction(5, 1).unwrap().kernel().unwrap();
        assert_eq!(k.basis().unwrap(), &vec![vec![5, 0, 0, 0], vec![0, 5, 0, 0], vec![0, 0, 5, 0], vec![0, 0, 0, 5]]);
    }

    #[test]
    fn hurwitz_generators_independent() {
        let r = hurwitz_reduction(5, 1).unwrap();
        assert_eq!(crate::galois::rank(r.reduction().matrix(), 5), 4);
        assert!(hurwitz_reduction(2, 1).is_err());
    }

    #[test]
    fn lifts_of_identity_module() {
        let caps = Caps::default();
        for r in [hurwitz_reduction(5, 1).unwrap(), lipschitz_reduction(5, 1).unwrap()] {
            let id = FreeMatCode::new(5, 1, vec![vec![MatRing2::identity(5)]]).unwrap();
            let full = r.lift(&id).unwrap();
            assert_eq!(full.det_gram(), r.base().det_gram());
            let zero_like = r.kernel().unwrap();
            assert!(r.unit_closed(&zero_like, &caps).unwrap());
        }
        // m = 2, rank-1 module generated by (I, I): index p^4 in the base
        let r = hurwitz_reduction(5, 2).unwrap();
        let c = FreeMatCode::new(5, 2, vec![vec![MatRing2::identity(5); 2]]).unwrap();
        let lat = r.lift(&c).unwrap();
        assert!((lat.volume() / r.base().volume() - 625.0).abs() < 1e-6);
        assert!(lat.contains(&[1, 0, 0, 0, 1, 0, 0, 0]));
        assert!(r.unit_closed(&lat, &caps).unwrap());
        assert!(r.fiber_check(&lat, &caps).unwrap().pass);
    }

    #[test]
    fn unit_closure_and_fibers_over_all_modules() {
        let caps = Caps::default();
        let r = hurwitz_reduction(3, 2).unwrap();
        let codes = enumerate_free_modules(3, 2, 1, 10_000_000).unwrap();
        for c in codes.iter().step_by(97) {
            let lat = r.lift(c).unwrap();
            assert!(r.unit_closed(&lat, &caps).unwrap());
            let f = r.fiber_check(&lat, &caps).unwrap();
            assert!(f.pass, "{f:?}");
        }
    }

    #[test]
    fn lemma1() {
        let rep = noninvertible_norm_check(5, 5).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.checked, 625);
        // singular matrices in M2(F_5): 625 - |GL_2| = 625 - 480
        assert_eq!(rep.singular, 145);
        let r = lipschitz_reduction(5, 1).unwrap();
        assert_eq!(r.image(&Quat::new(1, 2, 0, 0)).det(), 0);
        assert_eq!(r.image(&Quat::one()).det(), 1);
    }
}
