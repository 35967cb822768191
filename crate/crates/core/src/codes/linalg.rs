//! Dense Gaussian elimination over GF(2^m).

use crate::gf::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduces `rows` in place to reduced row echelon form (zero rows dropped)
/// and returns the pivot columns.
pub fn rref(field: &FieldSpec, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = field.add(*x, field.mul(k, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &FieldSpec, rows: &Matrix) -> usize {
    rref(field, &mut rows.clone()).len()
}

/// A basis of `{x : A x = 0}` for `A` with `ncols` columns.
pub fn nullspace(field: &FieldSpec, rows: &Matrix, ncols: usize) -> Matrix {
    let mut a = rows.clone();
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![FieldElement::ZERO; ncols];
            x[f] = FieldElement::ONE;
            // Characteristic 2: x_pivot = -a[i][f] = a[i][f].
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = a[i][f];
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let f = FieldSpec::gf8();
        let e = |v: u32| f.elem(v).unwrap();
        let a: Matrix = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(6)], vec![e(0), e(1), e(1)]];
        assert_eq!(rank(&f, &a), 2);
        let ns = nullspace(&f, &a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot = row.iter().zip(&ns[0]).fold(FieldElement::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            assert!(dot.is_zero());
        }
    }
}
