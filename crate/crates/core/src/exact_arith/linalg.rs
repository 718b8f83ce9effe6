use super::Field;

/// Row echelon form in place; returns the pivot count and whether an odd
/// number of row swaps occurred.
fn eliminate<F: Field>(field: &F, m: &mut [Vec<F::Elem>]) -> (usize, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut odd = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !field.is_zero(&m[r][c])) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            odd = !odd;
        }
        let inv = field.inv(&m[rank][c]).unwrap();
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom.iter_mut() {
            if field.is_zero(&row[c]) {
                continue;
            }
            let factor = field.mul(&row[c], &inv);
            for (x, pv) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = field.sub(x, &field.mul(&factor, pv));
            }
        }
        rank += 1;
    }
    (rank, odd)
}

/// Rank of a matrix over a field.
pub fn rank<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    eliminate(field, &mut m).0
}

/// Determinant of a square matrix over a field.
pub fn det<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> F::Elem {
    let n = m.len();
    let (rank, odd) = eliminate(field, &mut m);
    if rank < n {
        return field.zero();
    }
    let mut acc = field.one();
    for (i, row) in m.iter().enumerate() {
        acc = field.mul(&acc, &row[i]);
    }
    if odd {
        field.neg(&acc)
    } else {
        acc
    }
}
