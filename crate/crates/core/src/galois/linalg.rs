/// Matrix over `F_p`, entries in `[0, p)`.
pub type FpMat = Vec<Vec<u64>>;

/// Reduced row-echelon form over `F_p`. Returns the nonzero rows and the rank.
/// The zero matrix gives `(vec![], 0)`.
pub fn rref(mat: &FpMat, p: u64) -> (FpMat, usize) {
    let mut a: FpMat = mat.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = crate::arith::inv_mod(a[rank][col], p).expect("nonzero pivot");
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in col..cols {
                    a[r][c] = (a[r][c] + p - f * a[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    a.truncate(rank);
    (a, rank)
}

pub fn rank(mat: &FpMat, p: u64) -> usize {
    rref(mat, p).1
}

/// Basis (as rows) of `{x : mat · x = 0}`, with `cols` the number of columns.
pub fn nullspace(mat: &FpMat, cols: usize, p: u64) -> FpMat {
    let (r, rank) = rref(mat, p);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).expect("nonzero row"))
        .collect();
    let mut basis = Vec::with_capacity(cols - rank);
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = (p - row[free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// `a · b` over `F_p`.
pub fn mat_mul_mod(a: &FpMat, b: &FpMat, p: u64) -> FpMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|c| (0..inner).fold(0u64, |acc, k| (acc + row[k] * b[k][c] % p) % p))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn in_row_space(v: &[u64], basis: &FpMat, p: u64) -> bool {
        let mut stacked = basis.clone();
        let r0 = rank(&stacked, p);
        stacked.push(v.to_vec());
        rank(&stacked, p) == r0
    }

    #[test]
    fn identity_is_fixed() {
        let id: FpMat = (0..3).map(|i| (0..3).map(|j| (i == j) as u64).collect()).collect();
        assert_eq!(rref(&id, 5), (id.clone(), 3));
    }

    #[test]
    fn dependent_rows_collapse() {
        let m = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(rref(&m, 3), (vec![vec![1, 1]], 1));
    }

    #[test]
    fn binary_example() {
        let m = vec![vec![0, 1, 1], vec![1, 0, 1]];
        let (r, k) = rref(&m, 2);
        assert_eq!(k, 2);
        assert_eq!(r, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        // brute-force row-space equality: all 4 combinations coincide
        let span = |b: &FpMat| {
            let mut s: Vec<Vec<u64>> = (0..4u64)
                .map(|c| (0..3).map(|j| ((c & 1) * b[0][j] + (c >> 1) * b[1][j]) % 2).collect())
                .collect();
            s.sort();
            s
        };
        assert_eq!(span(&m), span(&r));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(rref(&vec![vec![0, 0]; 3], 7), (vec![], 0));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![1, 2, 3, 4], vec![2, 4, 1, 0]];
        let ns = nullspace(&m, 4, 5);
        assert_eq!(ns.len(), 4 - rank(&m, 5));
        for v in &ns {
            for row in &m {
                assert_eq!(row.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % 5, 0);
            }
        }
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_row_space_preserving(
            rows in proptest::collection::vec(proptest::collection::vec(0u64..7, 5), 1..5)
        ) {
            let p = 7;
            let (r, k) = rref(&rows, p);
            prop_assert_eq!(rref(&r, p), (r.clone(), k));
            for row in &rows {
                prop_assert!(in_row_space(row, &r, p));
            }
            prop_assert_eq!(k, r.len());
        }
    }
}
