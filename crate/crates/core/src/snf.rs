//! Smith normal form over the integers, tracking the row transform and its inverse.
//!
//! Only the row side is kept: for a relation matrix `A` (columns are relations on the
//! generators) we get `U` and `U⁻¹` with `U·A·V = D` for some unimodular `V`.

pub(crate) type Matrix = Vec<Vec<i128>>;

pub(crate) struct Smith {
    /// Diagonal entries, one per row of the input; zero means a free summand.
    pub diagonal: Vec<i128>,
    pub u: Matrix,
    pub u_inv: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

struct Work {
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for k in 0..self.cols {
            self.a[i][k] += c * self.a[j][k];
        }
        for k in 0..self.rows {
            self.u[i][k] += c * self.u[j][k];
        }
        for row in &mut self.u_inv {
            row[j] -= c * row[i];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -*x;
        }
        for x in &mut self.u[i] {
            *x = -*x;
        }
        for row in &mut self.u_inv {
            row[i] = -row[i];
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for row in &mut self.a {
            row[i] += c * row[j];
        }
    }
}

pub(crate) fn smith(a: Matrix, rows: usize) -> Smith {
    let cols = a.first().map_or(0, Vec::len);
    let mut w = Work { a, u: identity(rows), u_inv: identity(rows), rows, cols };
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = w.a[i][j];
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = w.a[i][t].div_euclid(p);
                w.add_row(i, t, -q);
                dirty |= w.a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = w.a[t][j].div_euclid(p);
                w.add_col(j, t, -q);
                dirty |= w.a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let mut fixed = false;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if w.a[i][j] % p != 0 {
                        w.add_row(t, i, 1);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
    }
    let diagonal = (0..rows).map(|i| if i < cols { w.a[i][i] } else { 0 }).collect();
    Smith { diagonal, u: w.u, u_inv: w.u_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
    }

    #[test]
    fn diagonal_two_three_becomes_six() {
        let s = smith(vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.diagonal, vec![1, 6]);
        assert_eq!(mul(&s.u, &s.u_inv), identity(2));
    }

    #[test]
    fn divisibility_chain_is_produced() {
        let s = smith(vec![vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]], 3);
        assert_eq!(s.diagonal, vec![2, 2, 60]);
        assert_eq!(mul(&s.u, &s.u_inv), identity(3));
    }

    #[test]
    fn rank_deficiency_leaves_zero() {
        let s = smith(vec![vec![2], vec![0]], 2);
        assert_eq!(s.diagonal, vec![2, 0]);
    }
}
