use std::path::Path;

use hlawka::cyclotomic::craig_lattice;
use hlawka::ensemble::{EnsembleMode, EnsembleSpec};
use hlawka::galois::{FreeMatCode, MatRing2};
use hlawka::{IntLattice, LinearCode, Reduction};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::Failure;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: serde_json::Error| Failure::usage(format!("cannot parse {}: {e}", path.display()));
    let mut v: serde_json::Value = serde_json::from_str(&text).map_err(bad)?;
    // accept our own output envelope as input
    if v.get("version").is_some() && v.get("command").is_some() {
        if let Some(r) = v.get_mut("result") {
            v = r.take();
        }
    }
    serde_json::from_value(v).map_err(bad)
}

fn identity(m: usize) -> Vec<Vec<i64>> {
    (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect()
}

fn cartan_e8() -> Vec<Vec<i64>> {
    // Dynkin chain 0-1-2-3-4-5-6 with node 7 attached to node 4
    let mut g = vec![vec![0i64; 8]; 8];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    g
}

/// A lattice from a JSON file, or one of the builtins `zN`, `a2`, `d4`, `e8`,
/// `craig:Q:L`, `diag:A,B,...`.
pub fn lattice(spec: &str) -> Result<IntLattice, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        return read_json(path);
    }
    let s = spec.to_ascii_lowercase();
    let lat = if let Some(n) = s.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
        if n == 0 {
            return Err(Failure::usage("rank must be positive"));
        }
        Ok(IntLattice::integer(n))
    } else if let Some(rest) = s.strip_prefix("craig:") {
        let parts: Vec<&str> = rest.split(':').collect();
        match parts.as_slice() {
            [q, l] => match (q.parse(), l.parse()) {
                (Ok(q), Ok(l)) => craig_lattice(q, l),
                _ => return Err(Failure::usage(format!("bad craig spec '{spec}'"))),
            },
            _ => return Err(Failure::usage(format!("bad craig spec '{spec}'"))),
        }
    } else if let Some(rest) = s.strip_prefix("diag:") {
        let d: Result<Vec<i64>, _> = rest.split(',').map(str::parse).collect();
        let d = d.map_err(|_| Failure::usage(format!("bad diagonal '{spec}'")))?;
        let g = (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect();
        IntLattice::new(g, 1, 1)
    } else {
        match s.as_str() {
            "a2" => IntLattice::new(vec![vec![2, 1], vec![1, 2]], 1, 1),
            "d4" => IntLattice::new(
                vec![vec![2, 0, 0, -1], vec![0, 2, 0, -1], vec![0, 0, 2, -1], vec![-1, -1, -1, 2]],
                1,
                1,
            ),
            "e8" => IntLattice::new(cartan_e8(), 1, 1),
            _ => return Err(Failure::usage(format!("'{spec}' is neither a file nor a builtin lattice"))),
        }
    };
    Ok(lat?)
}

/// Natural reduction of a lattice with its stored basis replaced by the identity.
pub fn natural(base: IntLattice, p: u64) -> Result<Reduction, Failure> {
    let m = base.rank();
    let base = base.without_basis().with_basis(identity(m))?;
    Ok(Reduction::natural(base, p)?)
}

/// An ensemble from `--spec FILE`, or from `--base LAT --p P --k K`.
pub fn ensemble(
    spec: Option<&Path>,
    base: Option<&str>,
    p: Option<u64>,
    k: Option<usize>,
    volume: Option<f64>,
    mode: Option<&str>,
) -> Result<EnsembleSpec, Failure> {
    let mut s: EnsembleSpec = match spec {
        Some(path) => read_json(path)?,
        None => {
            let (Some(base), Some(p), Some(k)) = (base, p, k) else {
                return Err(Failure::usage("give --spec FILE or all of --base, --p and --k"));
            };
            EnsembleSpec::new(natural(lattice(base)?, p)?, k, 1.0, EnsembleMode::Exhaustive)?
        }
    };
    if let Some(k) = k.filter(|_| spec.is_some()) {
        s.k = k;
    }
    if let Some(v) = volume {
        s.volume = v;
    }
    if let Some(m) = mode {
        s.mode = m.parse()?;
    }
    s.validate()?;
    Ok(s)
}

pub fn code(path: &Path) -> Result<LinearCode, Failure> {
    read_json(path)
}

/// `{"p": P, "m": M, "gens": [[[a, b, c, d], ...], ...]}`, matrices row-major.
#[derive(Deserialize)]
struct RawMatCode {
    p: u64,
    m: usize,
    gens: Vec<Vec<[i64; 4]>>,
}

pub fn mat_code(path: &Path) -> Result<FreeMatCode, Failure> {
    let raw: RawMatCode = read_json(path)?;
    let gens = raw.gens.iter().map(|g| g.iter().map(|e| MatRing2::new(raw.p, *e)).collect()).collect();
    Ok(FreeMatCode::new(raw.p, raw.m, gens)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let caps = hlawka::Caps::default();
        let e8 = lattice("e8").unwrap();
        assert_eq!(e8.det_gram(), 1.into());
        assert_eq!(e8.minimal_vectors(&caps).unwrap().len(), 120);
        assert_eq!(lattice("d4").unwrap().minimal_vectors(&caps).unwrap().len(), 12);
        assert_eq!(lattice("z3").unwrap().rank(), 3);
        assert_eq!(lattice("diag:1,4").unwrap().gram(), &vec![vec![1, 0], vec![0, 4]]);
        assert!(lattice("craig:7:1").is_ok());
        assert!(lattice("nonsense").is_err());
    }
}
