//! Gaussian elimination over `F_p`.

use std::collections::BTreeMap;

use super::field::PrimeField;

/// Rank of a dense matrix given as rows. Consumes the rows.
pub fn rank(field: &PrimeField, mut rows: Vec<Vec<u32>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for v in rows[rank].iter_mut().skip(col) {
            *v = field.mul(*v, inv);
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(pivot_row).skip(col) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A sparse row: `(column, nonzero value)` pairs.
pub type SparseRow = Vec<(usize, u32)>;

/// Rank of a matrix that is block diagonal after grouping rows by `key`:
/// rows with different keys must have disjoint column supports.
pub fn block_rank<K: Ord>(field: &PrimeField, rows: impl IntoIterator<Item = (K, SparseRow)>) -> usize {
    let mut blocks: BTreeMap<K, Vec<SparseRow>> = BTreeMap::new();
    for (key, row) in rows {
        if !row.is_empty() {
            blocks.entry(key).or_default().push(row);
        }
    }
    blocks
        .into_values()
        .map(|block| {
            let mut cols: Vec<usize> = block.iter().flatten().map(|&(c, _)| c).collect();
            cols.sort_unstable();
            cols.dedup();
            let dense = block
                .iter()
                .map(|row| {
                    let mut d = vec![0u32; cols.len()];
                    for &(c, v) in row {
                        let j = cols.binary_search(&c).expect("column collected above");
                        d[j] = field.add(d[j], v);
                    }
                    d
                })
                .collect();
            rank(field, dense)
        })
        .sum()
}
