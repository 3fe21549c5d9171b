use std::str::FromStr;

use crate::error::{Error, Result};
use crate::special::ln_unit_ball_volume;

/// Radial test functions used in lattice sums and ensemble averages.
/// All of them satisfy `|f(x)| ≤ b / (1 + ‖x‖)^{m+δ}` for the constants
/// returned by [`TestFunction::decay_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    /// Indicator of the closed ball of radius `r`.
    BallIndicator { r: f64 },
    /// `exp(-tau ‖x‖²)`.
    Gaussian { tau: f64 },
    /// Step-log function in dimension `n t`: constant `1/n` up to
    /// `r e^{(1-t)/(tn)}`, then `1/(nt) - ln(‖x‖/r)` down to zero at `r e^{1/(tn)}`.
    RogersStepLog { r: f64, t: u32, n: u32 },
}

impl TestFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            TestFunction::BallIndicator { r } => r.is_finite() && r >= 0.0,
            TestFunction::Gaussian { tau } => tau.is_finite() && tau > 0.0,
            TestFunction::RogersStepLog { r, t, n } => r.is_finite() && r > 0.0 && t >= 1 && n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad test function {self:?}")))
        }
    }

    /// Value at a point of squared norm `sq`.
    pub fn eval_sq(&self, sq: f64) -> f64 {
        match *self {
            TestFunction::BallIndicator { r } => (sq <= r * r * (1.0 + 1e-12)) as u8 as f64,
            TestFunction::Gaussian { tau } => (-tau * sq).exp(),
            TestFunction::RogersStepLog { r, t, n } => {
                let (t, n) = (t as f64, n as f64);
                let norm = sq.sqrt();
                let inner = r * ((1.0 - t) / (t * n)).exp();
                let outer = r * (1.0 / (t * n)).exp();
                if norm <= inner {
                    1.0 / n
                } else if norm <= outer {
                    (1.0 / (n * t) - (norm / r).ln()).max(0.0)
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius outside which the function vanishes, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match *self {
            TestFunction::BallIndicator { r } => Some(r),
            TestFunction::Gaussian { .. } => None,
            TestFunction::RogersStepLog { r, t, n } => Some(r * (1.0 / (t as f64 * n as f64)).exp()),
        }
    }

    pub fn sup(&self) -> f64 {
        match *self {
            TestFunction::RogersStepLog { n, .. } => 1.0 / n as f64,
            _ => 1.0,
        }
    }

    /// `∫_{R^m} f`.
    pub fn integral(&self, m: usize) -> f64 {
        match *self {
            TestFunction::BallIndicator { r } => {
                if r == 0.0 {
                    0.0
                } else {
                    (ln_unit_ball_volume(m) + m as f64 * r.ln()).exp()
                }
            }
            TestFunction::Gaussian { tau } => (std::f64::consts::PI / tau).powf(m as f64 / 2.0),
            TestFunction::RogersStepLog { r, t, .. } => {
                let e = std::f64::consts::E;
                let mf = m as f64;
                e * (1.0 - (-(t as f64)).exp()) * (ln_unit_ball_volume(m) + mf * r.ln()).exp() / mf
            }
        }
    }

    /// `(b, δ)` with `|f(x)| ≤ b / (1 + ‖x‖)^{m+δ}`. Compactly supported
    /// functions admit any δ; we report δ = 1.
    pub fn decay_constants(&self, m: usize) -> (f64, f64) {
        let e = m as f64 + 1.0;
        match *self {
            TestFunction::Gaussian { tau } => {
                // maximise (m+1) ln(1+x) - tau x²
                let x = (-1.0 + (1.0 + 2.0 * e / tau).sqrt()) / 2.0;
                ((e * (1.0 + x).ln() - tau * x * x).exp(), 1.0)
            }
            _ => {
                let r = self.support_radius().unwrap_or(0.0);
                (self.sup() * (1.0 + r).powf(e), 1.0)
            }
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;
    /// `ball:R`, `gauss:TAU` or `rogers:R:T:N`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("cannot parse test function '{s}'"));
        let num = |i: usize| parts.get(i).and_then(|x| x.parse::<f64>().ok()).ok_or_else(bad);
        let int = |i: usize| parts.get(i).and_then(|x| x.parse::<u32>().ok()).ok_or_else(bad);
        let f = match (parts[0], parts.len()) {
            ("ball", 2) => TestFunction::BallIndicator { r: num(1)? },
            ("gauss", 2) => TestFunction::Gaussian { tau: num(1)? },
            ("rogers", 4) => TestFunction::RogersStepLog { r: num(1)?, t: int(2)?, n: int(3)? },
            _ => return Err(bad()),
        };
        f.validate()?;
        Ok(f)
    }
}
