/// Environment variable overriding [`Caps::points`].
pub const CAP_POINTS_ENV: &str = "HLAWKA_CAP_POINTS";

/// Explicit limits on exhaustive computations. Exceeding one is a refusal,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest rank accepted by shortest-vector and successive-minima searches.
    pub svp_rank: usize,
    /// Largest number of lattice points visited by a single enumeration.
    pub points: u64,
    /// Largest ensemble (number of codes or generator tuples) enumerated exhaustively.
    pub codes: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            svp_rank: 16,
            points: 10_000_000,
            codes: 1_000_000,
        }
    }
}

impl Caps {
    /// Defaults, with the point cap taken from `HLAWKA_CAP_POINTS` when set.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var(CAP_POINTS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
        {
            if v >= 1.0 {
                caps.points = v as u64;
            }
        }
        caps
    }
}
