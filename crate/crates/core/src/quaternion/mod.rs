//! Lipschitz and Hurwitz quaternions and their reductions to `M_2(F_p)`.
//!
//! Quaternions are stored with doubled coordinates so that Hurwitz elements
//! with half-integer coordinates stay integral.

mod balanced;
mod reduce;

pub use balanced::{balanced_check, BalancedReport, GAverage};
pub use reduce::{
    hurwitz_reduction, lipschitz_reduction, noninvertible_norm_check, FiberReport, Lemma1Report, QuatOrder,
    QuatReduction,
};

use serde::Serialize;

use crate::arith::{inv_mod, is_prime, reduce};
use crate::error::{Error, Result};
use crate::galois::MatRing2;

/// `a + bi + cj + dk` stored as `[2a, 2b, 2c, 2d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quat {
    d: [i64; 4],
}

impl Quat {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quat { d: [2 * a, 2 * b, 2 * c, 2 * d] }
    }

    /// From doubled coordinates; all four must have the same parity.
    pub fn from_doubled(d: [i64; 4]) -> Result<Self> {
        let par = d[0].rem_euclid(2);
        if d.iter().any(|x| x.rem_euclid(2) != par) {
            return Err(Error::InvalidParameter(format!("{d:?} is not a Hurwitz quaternion")));
        }
        Ok(Quat { d })
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.d
    }

    pub fn one() -> Self {
        Quat::new(1, 0, 0, 0)
    }
    pub fn i() -> Self {
        Quat::new(0, 1, 0, 0)
    }
    pub fn j() -> Self {
        Quat::new(0, 0, 1, 0)
    }
    pub fn k() -> Self {
        Quat::new(0, 0, 0, 1)
    }
    /// `ω = (-1 + i + j + k)/2`.
    pub fn omega() -> Self {
        Quat { d: [-1, 1, 1, 1] }
    }

    pub fn is_lipschitz(&self) -> bool {
        self.d.iter().all(|x| x % 2 == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        Quat { d: std::array::from_fn(|i| self.d[i] + o.d[i]) }
    }

    pub fn neg(&self) -> Self {
        Quat { d: self.d.map(|x| -x) }
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.d;
        Quat { d: [a, -b, -c, -d] }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a1, b1, c1, d1] = self.d;
        let [a2, b2, c2, d2] = o.d;
        let r = [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ];
        // product of doubled coordinates is 4xy; Hurwitz products are Hurwitz
        Quat { d: r.map(|x| x / 2) }
    }

    /// Reduced norm `a² + b² + c² + d²`.
    pub fn nrd(&self) -> i64 {
        self.d.iter().map(|x| x * x).sum::<i64>() / 4
    }

    /// Coordinates in the basis `1, i, j, ω` of the Hurwitz order.
    pub fn hurwitz_coords(&self) -> [i64; 4] {
        let [a, b, c, d] = self.d;
        [(a + d) / 2, (b - d) / 2, (c - d) / 2, d]
    }

    pub fn from_hurwitz_coords(x: &[i64]) -> Self {
        [Quat::one(), Quat::i(), Quat::j(), Quat::omega()]
            .iter()
            .zip(x)
            .fold(Quat { d: [0; 4] }, |acc, (b, &c)| acc.add(&Quat { d: b.d.map(|v| v * c) }))
    }

    /// Integer coordinates `(a, b, c, d)` of a Lipschitz quaternion.
    pub fn lipschitz_coords(&self) -> [i64; 4] {
        self.d.map(|x| x / 2)
    }

    /// The 8 units `±1, ±i, ±j, ±k` of the Lipschitz order.
    pub fn lipschitz_units() -> Vec<Quat> {
        let base = [Quat::one(), Quat::i(), Quat::j(), Quat::k()];
        base.iter().flat_map(|u| [*u, u.neg()]).collect()
    }

    /// The 24 units of the Hurwitz order.
    pub fn hurwitz_units() -> Vec<Quat> {
        let mut u = Self::lipschitz_units();
        for s in 0..16 {
            let d: [i64; 4] = std::array::from_fn(|i| if s >> i & 1 == 1 { -1 } else { 1 });
            u.push(Quat { d });
        }
        u
    }
}

/// An explicit isomorphism `H/pH → M_2(F_p)` with `φ(i) = (0 -1; 1 0)` and
/// `φ(j) = (a b; b -a)`, `a² + b² ≡ -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HurwitzIso {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl HurwitzIso {
    /// Lexicographically least `(a, b) ∈ [0, p)²` with `a² + b² ≡ -1 (mod p)`.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
        }
        for a in 0..p {
            for b in 0..p {
                if (a * a + b * b + 1) % p == 0 {
                    return Ok(HurwitzIso { p, a, b });
                }
            }
        }
        unreachable!("a² + b² ≡ -1 is solvable modulo every odd prime")
    }

    pub fn phi_i(&self) -> MatRing2 {
        MatRing2::new(self.p, [0, -1, 1, 0])
    }

    pub fn phi_j(&self) -> MatRing2 {
        let (a, b) = (self.a as i64, self.b as i64);
        MatRing2::new(self.p, [a, b, b, -a])
    }

    pub fn phi_k(&self) -> MatRing2 {
        self.phi_i().mul(&self.phi_j())
    }

    /// Image of a Hurwitz quaternion.
    pub fn image(&self, x: &Quat) -> MatRing2 {
        let p = self.p;
        let half = inv_mod(2, p).expect("odd p");
        let parts = [MatRing2::identity(p), self.phi_i(), self.phi_j(), self.phi_k()];
        let sum = parts
            .iter()
            .zip(x.d)
            .fold(MatRing2::zero(p), |acc, (m, c)| acc.add(&m.scale(reduce(c, p))));
        sum.scale(half)
    }

    /// `φ(i)² = φ(j)² = -I`, `φ(i)φ(j) = -φ(j)φ(i)`, and `det φ(u) ≡ nrd(u)` on the 24 units.
    pub fn verify(&self) -> bool {
        let p = self.p;
        let minus_one = MatRing2::identity(p).neg();
        let (i, j) = (self.phi_i(), self.phi_j());
        i.mul(&i) == minus_one
            && j.mul(&j) == minus_one
            && i.mul(&j) == j.mul(&i).neg()
            && Quat::hurwitz_units().iter().all(|u| self.image(u).det() == reduce(u.nrd(), p))
    }
}
