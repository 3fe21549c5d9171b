use serde::Serialize;

/// One formula row of the comparison of effective families. Constants and
/// lower-order terms are suppressed; `ln_p` and `log_family_size` are natural logs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub construction: &'static str,
    pub n: f64,
    pub rank: f64,
    pub code: String,
    pub delta: Option<f64>,
    pub p_formula: &'static str,
    pub ln_p: f64,
    pub family_formula: &'static str,
    pub log_family_size: f64,
}

impl Table1Row {
    pub const CSV_HEADER: &'static str = "construction,n,rank,code,delta,p_formula,ln_p,family_formula,log_family_size";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{},{:.6}",
            quote(self.construction),
            self.n,
            self.rank,
            quote(&self.code),
            self.delta.map_or(String::new(), |d| format!("{d:.6}")),
            quote(self.p_formula),
            self.ln_p,
            quote(self.family_formula),
            self.log_family_size
        )
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn totient(mut l: u64) -> u64 {
    let mut out = l;
    let mut d = 2;
    while d * d <= l {
        if l % d == 0 {
            while l % d == 0 {
                l /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if l > 1 {
        out -= out / l;
    }
    out
}

/// Rows for Construction A, double-circulant codes, cyclotomic lattices and
/// Craig reductions at each `n`. The cyclotomic row uses the least `l` with
/// `2φ(l) ≥ n`.
pub fn table1_rows(ns: &[f64]) -> Vec<Table1Row> {
    let mut rows = Vec::new();
    for &n in ns {
        let ln = n.ln();
        rows.push(Table1Row {
            construction: "Construction A over Z",
            n,
            rank: n,
            code: "(n, n/3)".into(),
            delta: Some(1.0 / 3.0),
            p_formula: "n^{3/2}",
            ln_p: 1.5 * ln,
            family_formula: "n^2 log n",
            log_family_size: n * n * ln,
        });
        rows.push(Table1Row {
            construction: "Random double-circulant",
            n,
            rank: n,
            code: "(n, n/2)".into(),
            delta: Some(0.5),
            p_formula: "n^2 log n",
            ln_p: 2.0 * ln + ln.ln(),
            family_formula: "n log n",
            log_family_size: n * ln,
        });
        let mut l = 3u64;
        while (2 * totient(l)) as f64 <= n - 1.0 {
            l += 1;
        }
        let phi = totient(l) as f64;
        let m = 2.0 * phi;
        let lf = l as f64;
        rows.push(Table1Row {
            construction: "Cyclotomic lattices",
            n,
            rank: m,
            code: format!("(2, 1), l = {l}"),
            delta: Some(0.5),
            p_formula: "l^3 (log l)^{phi(l)}",
            ln_p: 3.0 * lf.ln() + phi * lf.ln().ln(),
            family_formula: "m log m",
            log_family_size: m * m.ln(),
        });
        let delta = ln.ln() / (2.0 * ln + ln.ln());
        rows.push(Table1Row {
            construction: "Craig's reduction",
            n,
            rank: n,
            code: "(n, delta n)".into(),
            delta: Some(delta),
            p_formula: "n (log n)^{1/2}",
            ln_p: ln + 0.5 * ln.ln(),
            family_formula: "n^2 log log n",
            log_family_size: n * n * ln.ln(),
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        assert_eq!([1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12].map(totient), [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 4]);
    }

    #[test]
    fn rows_and_ratios() {
        let rows = table1_rows(&[1e3, 1e4, 1e5]);
        assert_eq!(rows.len(), 12);
        let r = &rows[4];
        assert_eq!(r.construction, "Construction A over Z");
        assert!((r.log_family_size - 1e8 * 1e4f64.ln()).abs() < 1.0);
        let craig = &rows[7];
        let ln = 1e4f64.ln();
        assert!((craig.delta.unwrap() - ln.ln() / (2.0 * ln + ln.ln())).abs() < 1e-15);
        // Craig/Construction-A family-size quotient is log log n / log n, shrinking in n
        let q: Vec<f64> = (0..3).map(|i| rows[4 * i + 3].log_family_size / rows[4 * i].log_family_size).collect();
        assert!(q[0] > q[1] && q[1] > q[2]);
        for row in rows.iter().filter(|r| r.construction == "Cyclotomic lattices") {
            assert!(row.rank >= row.n);
        }
    }
}
