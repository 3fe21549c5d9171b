//! Fincke-Pohst enumeration on an LLL-reduced Gram.
//!
//! Floating point is only used to prune the search tree. Every leaf is
//! re-checked with the exact integer form before it is reported.

use super::lll::lll_gram;
use crate::IntMat;

/// What the visitor wants after seeing a point.
pub(crate) enum Visit {
    Continue,
    /// Lower the bound to the given form value (points above it are skipped from now on).
    Shrink(i128),
}

/// `q[i][i]` are the squared Gram-Schmidt lengths and `q[i][j]` (`j > i`) the
/// Gram-Schmidt coefficients, so that
/// `xᵀGx = Σ_i q_ii (x_i + Σ_{j>i} q_ij x_j)²`.
pub(crate) fn cholesky(g: &IntMat) -> Vec<Vec<f64>> {
    let m = g.len();
    let mut q = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let mut s = g[i][j] as f64;
            for k in 0..i {
                s -= q[k][k] * q[k][i] * q[k][j];
            }
            if j == i {
                q[i][i] = s;
            } else {
                q[i][j] = s / q[i][i];
            }
        }
    }
    q
}

pub(crate) struct Enumerator {
    m: usize,
    red: IntMat,
    t: IntMat,
    q: Vec<Vec<f64>>,
}

/// The visit was aborted because more than the cap of points was seen.
#[derive(Debug)]
pub(crate) struct Overflow;

struct Walk<'f> {
    bound: i128,
    bound_f: f64,
    cap: u64,
    seen: u64,
    half: bool,
    y: Vec<i64>,
    visitor: &'f mut dyn FnMut(&[i64], i128) -> Visit,
}

impl Enumerator {
    pub fn new(gram: &IntMat) -> Self {
        let (red, t) = lll_gram(gram, 99, 100);
        let q = cholesky(&red);
        Enumerator { m: gram.len(), red, t, q }
    }

    /// Smallest diagonal entry of the reduced Gram, an upper bound for the minimum.
    pub fn min_diagonal(&self) -> i128 {
        (0..self.m).map(|i| self.red[i][i] as i128).min().unwrap_or(0)
    }

    /// Sorted diagonal of the reduced Gram.
    pub fn sorted_diagonal(&self) -> Vec<i128> {
        let mut d: Vec<i128> = (0..self.m).map(|i| self.red[i][i] as i128).collect();
        d.sort_unstable();
        d
    }

    /// Calls `visitor(coords, form)` for each nonzero point with `form <= bound`,
    /// coordinates in the original basis. With `half`, only one of each pair
    /// `±x` is visited. Fails once more than `cap` points have been seen.
    pub fn run(
        &self,
        bound: i128,
        cap: u64,
        half: bool,
        visitor: &mut dyn FnMut(&[i64], i128) -> Visit,
    ) -> Result<u64, Overflow> {
        if bound <= 0 || self.m == 0 {
            return Ok(0);
        }
        let mut w = Walk {
            bound,
            bound_f: slack(bound),
            cap,
            seen: 0,
            half,
            y: vec![0; self.m],
            visitor,
        };
        self.level(self.m - 1, 0.0, true, &mut w)?;
        Ok(w.seen)
    }

    fn level(&self, i: usize, partial: f64, zero_above: bool, w: &mut Walk) -> Result<(), Overflow> {
        let qi = &self.q[i];
        let c: f64 = -(i + 1..self.m).map(|j| qi[j] * w.y[j] as f64).sum::<f64>();
        let rem = w.bound_f - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let h = (rem / qi[i]).sqrt();
        let mut lo = (c - h - 1e-9).ceil() as i64;
        let hi = (c + h + 1e-9).floor() as i64;
        if w.half && zero_above {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            let d = v as f64 - c;
            let np = partial + qi[i] * d * d;
            if np > w.bound_f {
                continue;
            }
            w.y[i] = v;
            if i == 0 {
                if zero_above && v == 0 {
                    continue;
                }
                let form = exact_form(&self.red, &w.y);
                if form <= w.bound {
                    w.seen += 1;
                    if w.seen > w.cap {
                        w.y[i] = 0;
                        return Err(Overflow);
                    }
                    let x = self.to_original(&w.y);
                    match (w.visitor)(&x, form) {
                        Visit::Continue => {}
                        Visit::Shrink(b) => {
                            w.bound = b;
                            w.bound_f = slack(b);
                        }
                    }
                }
            } else {
                self.level(i - 1, np, zero_above && v == 0, w)?;
            }
        }
        w.y[i] = 0;
        Ok(())
    }

    fn to_original(&self, y: &[i64]) -> Vec<i64> {
        (0..self.m).map(|j| y.iter().zip(&self.t).map(|(&a, row)| a * row[j]).sum()).collect()
    }
}

fn slack(bound: i128) -> f64 {
    let b = bound as f64;
    b * (1.0 + 1e-10) + 1e-7
}

pub(crate) fn exact_form(g: &IntMat, y: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, row) in g.iter().enumerate() {
        if y[i] == 0 {
            continue;
        }
        let s: i128 = row.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum();
        acc += y[i] as i128 * s;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(g: &IntMat, bound: i128, half: bool) -> Vec<(Vec<i64>, i128)> {
        let e = Enumerator::new(g);
        let mut out = Vec::new();
        e.run(bound, u64::MAX, half, &mut |x, f| {
            out.push((x.to_vec(), f));
            Visit::Continue
        })
        .unwrap();
        out.sort();
        out
    }

    fn brute(g: &IntMat, bound: i128, r: i64) -> Vec<(Vec<i64>, i128)> {
        let m = g.len();
        let mut out = Vec::new();
        let total = (2 * r + 1).pow(m as u32);
        for idx in 0..total {
            let mut rest = idx;
            let x: Vec<i64> = (0..m)
                .map(|_| {
                    let d = rest % (2 * r + 1) - r;
                    rest /= 2 * r + 1;
                    d
                })
                .collect();
            let f = exact_form(g, &x);
            if f > 0 && f <= bound {
                out.push((x, f));
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_box_search() {
        let g = vec![vec![3, 1, -1], vec![1, 4, 2], vec![-1, 2, 5]];
        // inverse-diagonal box bound: |x_i| ≤ sqrt(B (G⁻¹)_ii) < 4 for B = 12
        assert_eq!(collect(&g, 12, false), brute(&g, 12, 4));
    }

    #[test]
    fn half_visits_one_of_each_pair() {
        let g = vec![vec![2, 1], vec![1, 2]];
        let all = collect(&g, 6, false);
        let half = collect(&g, 6, true);
        assert_eq!(all.len(), 2 * half.len());
        for (x, _) in &half {
            let neg: Vec<i64> = x.iter().map(|v| -v).collect();
            assert!(!half.iter().any(|(y, _)| *y == neg));
        }
    }

    #[test]
    fn cap_aborts() {
        let e = Enumerator::new(&vec![vec![1, 0], vec![0, 1]]);
        assert!(e.run(100, 10, false, &mut |_, _| Visit::Continue).is_err());
    }
}
