//! Integer lattice helpers: saturated integer kernels and row Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Z-basis of `{v in Z^cols : A v = 0}`, returned in row Hermite normal form.
///
/// Uses unimodular column operations on `[A; I]`; the identity block of the
/// columns that end up zero in `A` spans the integer kernel.
pub fn integer_kernel(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    // columns[c] = (A column c, U column c)
    let mut a: Vec<Vec<BigInt>> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|c| {
            let mut e = vec![BigInt::zero(); cols];
            e[c] = BigInt::one();
            e
        })
        .collect();

    let mut lead = 0;
    for r in 0..m {
        if lead == cols {
            break;
        }
        // Euclid on entries a[lead..][r] via column operations.
        loop {
            let nonzero: Vec<usize> = (lead..cols).filter(|&c| !a[c][r].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let piv = *nonzero
                .iter()
                .min_by(|&&x, &&y| a[x][r].abs().cmp(&a[y][r].abs()))
                .unwrap();
            a.swap(lead, piv);
            u.swap(lead, piv);
            let mut done = true;
            for c in lead + 1..cols {
                if a[c][r].is_zero() {
                    continue;
                }
                let q = a[c][r].div_floor(&a[lead][r]);
                let (la, lu) = (a[lead].clone(), u[lead].clone());
                for (x, y) in a[c].iter_mut().zip(&la) {
                    *x -= &q * y;
                }
                for (x, y) in u[c].iter_mut().zip(&lu) {
                    *x -= &q * y;
                }
                if !a[c][r].is_zero() {
                    done = false;
                }
            }
            if done {
                lead += 1;
                break;
            }
        }
    }
    hermite_rows(u.split_off(lead))
}

/// Row Hermite normal form of the lattice spanned by `rows`: echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows removed.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut out_rank = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        loop {
            let nonzero: Vec<usize> = (out_rank..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let piv = *nonzero
                .iter()
                .min_by(|&&x, &&y| rows[x][c].abs().cmp(&rows[y][c].abs()))
                .unwrap();
            rows.swap(out_rank, piv);
            let mut done = true;
            for i in out_rank + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[out_rank][c]);
                let pr = rows[out_rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                if rows[out_rank][c].is_negative() {
                    for x in rows[out_rank].iter_mut() {
                        *x = -x.clone();
                    }
                }
                pivot_cols.push(c);
                out_rank += 1;
                break;
            }
        }
        if out_rank == rows.len() {
            break;
        }
    }
    rows.truncate(out_rank);
    for (i, &c) in pivot_cols.iter().enumerate() {
        for k in 0..i {
            let q = rows[k][c].div_floor(&rows[i][c]);
            if q.is_zero() {
                continue;
            }
            let pr = rows[i].clone();
            for (x, y) in rows[k].iter_mut().zip(&pr) {
                *x -= &q * y;
            }
        }
    }
    rows
}
