//! Smith normal form with unimodular transforms.
//!
//! Classic elimination: the nonzero entry of smallest absolute value is
//! moved to the pivot position, its row and column are cleared by
//! Euclidean steps, and a row is folded in whenever the pivot fails to
//! divide the remaining block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with each
/// diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, in divisibility order.
    pub diagonal: Vec<BigInt>,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

struct Reducer {
    d: IntMatrix,
    // transforms are optional so the invariant-factor path stays cheap
    t: Option<Transforms>,
}

struct Transforms {
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap_rows(a, b);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(a, b);
            t.u_inv.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap_cols(a, b);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(a, b);
            t.v_inv.swap_rows(a, b);
        }
    }

    /// row[target] += k * row[src]
    fn add_row(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(target, src, k);
        if let Some(t) = &mut self.t {
            t.u.add_row_multiple(target, src, k);
            t.u_inv.add_col_multiple(src, target, &-k);
        }
    }

    /// col[target] += k * col[src]
    fn add_col(&mut self, target: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(target, src, k);
        if let Some(t) = &mut self.t {
            t.v.add_col_multiple(target, src, k);
            t.v_inv.add_row_multiple(src, target, &-k);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        if let Some(t) = &mut self.t {
            t.u.negate_row(r);
            t.u_inv.negate_col(r);
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.d.rows() {
            for c in t..self.d.cols() {
                let v = &self.d[(r, c)];
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|b| v.abs() < self.d[b].abs()) {
                    best = Some((r, c));
                    if v.abs() == BigInt::from(1) {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let (rows, cols) = (self.d.rows(), self.d.cols());
        let mut diagonal = Vec::new();
        for t in 0..rows.min(cols) {
            let Some((pr, pc)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);
            loop {
                let mut clean = true;
                for r in t + 1..rows {
                    if self.d[(r, t)].is_zero() {
                        continue;
                    }
                    let q = self.d[(r, t)].div_floor(&self.d[(t, t)]);
                    self.add_row(r, t, &-q);
                    if !self.d[(r, t)].is_zero() {
                        clean = false;
                    }
                }
                for c in t + 1..cols {
                    if self.d[(t, c)].is_zero() {
                        continue;
                    }
                    let q = self.d[(t, c)].div_floor(&self.d[(t, t)]);
                    self.add_col(c, t, &-q);
                    if !self.d[(t, c)].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // a remainder smaller than the pivot: move it into place
                    let mut best = (t, t);
                    for r in t + 1..rows {
                        let v = &self.d[(r, t)];
                        if !v.is_zero() && v.abs() < self.d[best].abs() {
                            best = (r, t);
                        }
                    }
                    for c in t + 1..cols {
                        let v = &self.d[(t, c)];
                        if !v.is_zero() && v.abs() < self.d[best].abs() {
                            best = (t, c);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let pivot = self.d[(t, t)].clone();
                let offender = (t + 1..rows).find(|&r| {
                    (t + 1..cols).any(|c| !self.d[(r, c)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(r) => self.add_row(t, r, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
            diagonal.push(self.d[(t, t)].clone());
        }
        diagonal
    }
}

/// Smith normal form of `m` with its transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut red = Reducer {
        d: m.clone(),
        t: Some(Transforms {
            u: IntMatrix::identity(m.rows()),
            u_inv: IntMatrix::identity(m.rows()),
            v: IntMatrix::identity(m.cols()),
            v_inv: IntMatrix::identity(m.cols()),
        }),
    };
    let diagonal = red.run();
    let t = red.t.expect("transforms requested");
    SmithForm {
        diagonal,
        d: red.d,
        u: t.u,
        u_inv: t.u_inv,
        v: t.v,
        v_inv: t.v_inv,
    }
}

/// Nonzero invariant factors of `m`, without transforms.
pub fn invariant_factors_dense(m: &IntMatrix) -> Vec<BigInt> {
    Reducer { d: m.clone(), t: None }.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix, expected: &[i64]) {
        let s = smith_normal_form(m);
        let expected: Vec<BigInt> = expected.iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(s.diagonal, expected);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), *m);
        assert_eq!(invariant_factors_dense(m), expected);
    }

    #[test]
    fn already_diagonal() {
        check(&IntMatrix::from_rows(&[vec![2i64]]), &[2]);
    }

    #[test]
    fn rank_one_with_signs() {
        check(&IntMatrix::from_rows(&[vec![2i64, 4], vec![-2, -4]]), &[2]);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&IntMatrix::zeros(3, 2));
        assert!(s.diagonal.is_empty());
        assert!(s.d.is_zero());
    }

    #[test]
    fn divisibility_needs_folding() {
        // diag(2, 3) has invariant factors 1, 6
        check(&IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]), &[1, 6]);
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::zeros(0, 3), &[]);
        check(&IntMatrix::zeros(2, 0), &[]);
    }
}
