use std::collections::HashSet;

use super::code::LinearCode;
use crate::error::{Error, Result};

/// A 2×2 matrix over `F_p`, entries row-major `[a, b, c, d]` for `(a b; c d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatRing2 {
    p: u64,
    e: [u64; 4],
}

impl MatRing2 {
    pub fn new(p: u64, e: [i64; 4]) -> Self {
        MatRing2 { p, e: e.map(|x| crate::arith::reduce(x, p)) }
    }

    pub fn zero(p: u64) -> Self {
        MatRing2 { p, e: [0; 4] }
    }

    pub fn identity(p: u64) -> Self {
        MatRing2 { p, e: [1, 0, 0, 1] }
    }

    /// The `idx`-th of the `p^4` ring elements (base-`p` digits, first entry most significant).
    pub fn from_index(p: u64, mut idx: u64) -> Self {
        let mut e = [0u64; 4];
        for slot in e.iter_mut().rev() {
            *slot = idx % p;
            idx /= p;
        }
        MatRing2 { p, e }
    }

    pub fn index(&self) -> u64 {
        self.e.iter().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn entries(&self) -> [u64; 4] {
        self.e
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p;
        MatRing2 { p, e: std::array::from_fn(|i| (self.e[i] + o.e[i]) % p) }
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        MatRing2 { p, e: self.e.map(|x| (p - x) % p) }
    }

    pub fn scale(&self, s: u64) -> Self {
        let p = self.p;
        MatRing2 { p, e: self.e.map(|x| x * (s % p) % p) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let [a, b, c, d] = self.e;
        let [w, x, y, z] = o.e;
        MatRing2 {
            p,
            e: [
                (a * w + b * y) % p,
                (a * x + b * z) % p,
                (c * w + d * y) % p,
                (c * x + d * z) % p,
            ],
        }
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        let [a, b, c, d] = self.e;
        (a * d % p + p - b * c % p) % p
    }

    pub fn is_unit(&self) -> bool {
        self.det() != 0
    }
}

/// A free rank-`k` left submodule of `M2(F_p)^m`, given by a generator tuple.
/// Enumerated modules carry the lexicographically least generating tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMatCode {
    p: u64,
    m: usize,
    gens: Vec<Vec<MatRing2>>,
}

impl FreeMatCode {
    /// Fails unless the generated module has exactly `|R|^k` elements (i.e. is free
    /// on the given generators).
    pub fn new(p: u64, m: usize, gens: Vec<Vec<MatRing2>>) -> Result<Self> {
        super::check_prime(p)?;
        if gens.iter().any(|g| g.len() != m || g.iter().any(|x| x.p != p)) {
            return Err(Error::Mismatch(format!("generators must be vectors in M2(F_{p})^{m}")));
        }
        let code = FreeMatCode { p, m, gens };
        let want = (p.pow(4)).checked_pow(code.k() as u32);
        if want != Some(code.elements().len() as u64) {
            return Err(Error::InvalidParameter("generators do not span a free module".into()));
        }
        Ok(code)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn k(&self) -> usize {
        self.gens.len()
    }
    pub fn generators(&self) -> &[Vec<MatRing2>] {
        &self.gens
    }

    /// All elements `Σ r_i g_i`, encoded by [`encode_vector`], sorted.
    pub fn elements(&self) -> Vec<u64> {
        module_elements(self.p, self.m, &self.gens)
    }

    pub fn contains(&self, v: &[MatRing2]) -> bool {
        self.elements().binary_search(&encode_vector(v)).is_ok()
    }

    /// The same set viewed as an `F_p`-subspace of `F_p^{4m}` (entries flattened
    /// row-major per coordinate).
    pub fn to_linear_code(&self) -> LinearCode {
        let p = self.p;
        let units: Vec<MatRing2> = (0..4)
            .map(|i| {
                let mut e = [0i64; 4];
                e[i] = 1;
                MatRing2::new(p, e)
            })
            .collect();
        let rows: Vec<Vec<u64>> = self
            .gens
            .iter()
            .flat_map(|g| {
                units.iter().map(move |u| g.iter().flat_map(|x| u.mul(x).entries()).collect())
            })
            .collect();
        LinearCode::from_generators(p, 4 * self.m, &rows).expect("validated prime")
    }
}

/// Encodes a vector of ring elements as an integer (first coordinate most significant).
pub fn encode_vector(v: &[MatRing2]) -> u64 {
    let q = v.first().map_or(1, |x| x.p.pow(4));
    v.iter().fold(0, |acc, x| acc * q + x.index())
}

fn decode_vector(p: u64, m: usize, mut code: u64) -> Vec<MatRing2> {
    let q = p.pow(4);
    let mut v = vec![MatRing2::zero(p); m];
    for slot in v.iter_mut().rev() {
        *slot = MatRing2::from_index(p, code % q);
        code /= q;
    }
    v
}

fn module_elements(p: u64, m: usize, gens: &[Vec<MatRing2>]) -> Vec<u64> {
    let q = p.pow(4);
    let k = gens.len();
    let mut out = HashSet::new();
    let total = q.pow(k as u32);
    for idx in 0..total {
        let mut acc = vec![MatRing2::zero(p); m];
        let mut rest = idx;
        for g in gens {
            let r = MatRing2::from_index(p, rest % q);
            rest /= q;
            for (a, x) in acc.iter_mut().zip(g) {
                *a = a.add(&r.mul(x));
            }
        }
        out.insert(encode_vector(&acc));
    }
    let mut v: Vec<u64> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Every free rank-`k` submodule of `M2(F_p)^m` exactly once. Generator tuples
/// are scanned in lexicographic order, so the first tuple found for a module is
/// its canonical (least) generating tuple. Refuses when `p^{4mk}` exceeds `cap`.
pub fn enumerate_free_modules(p: u64, m: usize, k: usize, cap: u64) -> Result<Vec<FreeMatCode>> {
    super::check_prime(p)?;
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= m, got k = {k}, m = {m}")));
    }
    let tuples = (p as u128).checked_pow((4 * m * k) as u32);
    let total = match tuples {
        Some(t) if t <= cap as u128 => t as u64,
        _ => {
            return Err(Error::CapExceeded {
                what: "free module enumeration",
                needed: format!("{p}^{}", 4 * m * k),
                cap,
            })
        }
    };
    let vec_count = p.pow(4 * m as u32);
    let free_size = p.pow(4 * k as u32) as usize;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for idx in 0..total {
        // first generator is the most significant part of the index
        let mut rest = idx;
        let mut gens = Vec::with_capacity(k);
        for _ in 0..k {
            gens.push(rest % vec_count);
            rest /= vec_count;
        }
        gens.reverse();
        let gens: Vec<Vec<MatRing2>> = gens.into_iter().map(|g| decode_vector(p, m, g)).collect();
        let elems = module_elements(p, m, &gens);
        if elems.len() == free_size && seen.insert(elems) {
            out.push(FreeMatCode { p, m, gens });
        }
    }
    Ok(out)
}

/// True when some coordinate is a unit of `M2(F_p)`.
pub(crate) fn has_unit_coordinate(v: &[MatRing2]) -> bool {
    v.iter().any(MatRing2::is_unit)
}

pub(crate) fn all_vectors(p: u64, m: usize) -> impl Iterator<Item = Vec<MatRing2>> {
    (0..p.pow(4 * m as u32)).map(move |c| decode_vector(p, m, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_basics() {
        let p = 3;
        let units = (0..81).map(|i| MatRing2::from_index(p, i)).filter(MatRing2::is_unit).count();
        // |GL_2(F_3)| = (9-1)(9-3)
        assert_eq!(units, 48);
        for i in 0..81 {
            let a = MatRing2::from_index(p, i);
            assert_eq!(a.index(), i);
            assert_eq!(a.mul(&MatRing2::identity(p)), a);
            for j in (0..81).step_by(7) {
                let b = MatRing2::from_index(p, j);
                assert_eq!(a.mul(&b).det(), a.det() * b.det() % p);
            }
        }
    }

    #[test]
    fn single_coordinate_gives_the_ring() {
        let mods = enumerate_free_modules(2, 1, 1, 1 << 20).unwrap();
        assert_eq!(mods.len(), 1);
        assert_eq!(mods[0].elements().len(), 16);
        // the least unit in scan order is the swap matrix (0 1; 1 0)
        assert_eq!(mods[0].generators()[0][0], MatRing2::new(2, [0, 1, 1, 0]));
    }

    #[test]
    fn rank_one_modules_over_m2f2() {
        let mods = enumerate_free_modules(2, 2, 1, 1 << 20).unwrap();
        // free cyclic submodules of R^2 <-> 2-dim subspaces of F_2^4
        assert_eq!(mods.len(), 35);
        for c in &mods {
            let elems = c.elements();
            assert_eq!(elems.len(), 16);
            // brute-force closure under + and left multiplication
            let set: HashSet<u64> = elems.iter().copied().collect();
            for &a in &elems {
                let va = decode_vector(2, 2, a);
                for &b in &elems {
                    let vb = decode_vector(2, 2, b);
                    let s: Vec<MatRing2> = va.iter().zip(&vb).map(|(x, y)| x.add(y)).collect();
                    assert!(set.contains(&encode_vector(&s)));
                }
                for r in 0..16 {
                    let r = MatRing2::from_index(2, r);
                    let s: Vec<MatRing2> = va.iter().map(|x| r.mul(x)).collect();
                    assert!(set.contains(&encode_vector(&s)));
                }
            }
            assert_eq!(c.to_linear_code().k(), 4);
        }
    }

    #[test]
    fn unit_vectors_lie_in_equally_many_modules() {
        let mods = enumerate_free_modules(2, 2, 1, 1 << 20).unwrap();
        let mut counts = std::collections::BTreeSet::new();
        for v in all_vectors(2, 2).filter(|v| has_unit_coordinate(v)) {
            counts.insert(mods.iter().filter(|c| c.contains(&v)).count());
        }
        assert_eq!(counts.len(), 1, "membership counts {counts:?}");
    }

    #[test]
    fn non_free_generators_rejected() {
        let singular = MatRing2::new(2, [1, 0, 0, 0]);
        assert!(FreeMatCode::new(2, 1, vec![vec![singular]]).is_err());
        assert!(FreeMatCode::new(2, 2, vec![vec![singular, MatRing2::new(2, [0, 0, 0, 1])]]).is_ok());
    }

    #[test]
    fn cap_refuses() {
        assert!(matches!(
            enumerate_free_modules(3, 2, 1, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }
}
