use num_rational::Ratio;
use serde::Serialize;

use super::{scale_blocks, CycField};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lattice::exact::RankTracker;
use crate::lattice::{IntLattice, LatticePoint};

/// `λ_1^K ≤ … ≤ λ_t^K`: the least radii at which lattice points span a
/// `K`-subspace of dimension `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSuccessiveMinima {
    pub t: usize,
    /// squared minima, scale included and dilation excluded
    #[serde(serialize_with = "ser_ratios")]
    pub values: Vec<Ratio<i128>>,
    /// ambient (power-basis) coordinates of the witnesses
    pub witnesses: Vec<Vec<i64>>,
}

fn ser_ratios<S: serde::Serializer>(v: &[Ratio<i128>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::reduction::ratio_string))
}

impl KSuccessiveMinima {
    /// `λ_i^K` as true lengths, for a lattice dilated by `beta`.
    pub fn lengths(&self, beta: f64) -> Vec<f64> {
        self.values.iter().map(|v| beta * (*v.numer() as f64 / *v.denom() as f64).sqrt()).collect()
    }
}

/// `K`-rank bookkeeping: the `ℚ`-span of `{ζ^j w}` has dimension `n · rank_K`.
struct KRank<'a> {
    field: &'a CycField,
    tracker: RankTracker,
    zetas: Vec<Vec<i64>>,
}

impl<'a> KRank<'a> {
    fn new(field: &'a CycField) -> Self {
        let zetas = (0..field.degree()).map(|j| field.zeta_pow(j as i64)).collect();
        KRank { field, tracker: RankTracker::new(), zetas }
    }

    /// Adds `w`; true when the `K`-rank went up.
    fn insert(&mut self, w: &[i64]) -> bool {
        let before = self.tracker.rank();
        for z in &self.zetas {
            self.tracker.insert(&scale_blocks(self.field, z, w));
        }
        self.tracker.rank() > before
    }
}

/// `K`-successive minima of a lattice inside `ℤ[ζ]^t` whose basis is stored in
/// power-basis coordinates. The search radius starts at the smallest reduced
/// diagonal entry and doubles; the largest entry bounds every `λ_i^K`.
pub fn k_successive_minima(field: &CycField, lat: &IntLattice, t: usize, caps: &Caps) -> Result<KSuccessiveMinima> {
    if !(1..=2).contains(&t) {
        return Err(Error::InvalidParameter(format!("module rank t = {t} not supported (t must be 1 or 2)")));
    }
    let n = field.degree();
    if lat.rank() != n * t || lat.basis().is_none_or(|b| b[0].len() != n * t) {
        return Err(Error::Mismatch(format!("expected a rank-{} lattice with a basis in ℤ[ζ]^{t}", n * t)));
    }
    lat.check_rank_cap(caps.svp_rank)?;
    let diag = lat.reduced_diagonal();
    let top = *diag.last().expect("nonempty");
    let mut bound = diag[0];
    loop {
        let pts: Vec<LatticePoint> = lat.short_points(bound, caps)?;
        let mut rank = KRank::new(field);
        let mut values = Vec::new();
        let mut witnesses = Vec::new();
        for pt in pts {
            let w = lat.ambient(&pt.coords).expect("basis present");
            if rank.insert(&w) {
                values.push(pt.sqnorm);
                witnesses.push(w);
                if values.len() == t {
                    return Ok(KSuccessiveMinima { t, values, witnesses });
                }
            }
        }
        if bound >= top {
            unreachable!("points up to the largest reduced diagonal entry span the space");
        }
        bound = (2 * bound).min(top);
    }
}
