//! Smith normal form over the integers with the unimodular transforms kept.

use super::Matrix;

/// `u * a * v == d`, `d` diagonal with each entry dividing the next, `u` and `v`
/// invertible over ℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, all positive.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i))
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d.get(i, j) != 0)
            .min_by_key(|&(i, j)| (d.get(i, j).abs(), i, j))
        else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).div_euclid(d.get(t, t));
                if q != 0 {
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                }
                if d.get(i, t) != 0 {
                    clean = false;
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_euclid(d.get(t, t));
                if q != 0 {
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                }
                if d.get(t, j) != 0 {
                    clean = false;
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| d.get(i, j) % d.get(t, t) != 0);
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            d.scale_row(t, -1);
            u.scale_row(t, -1);
        }
    }
    SmithForm { u, d, v }
}
