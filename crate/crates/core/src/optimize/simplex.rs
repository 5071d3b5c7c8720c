//! Dense two-phase tableau simplex; Bland's rule guards against cycling.

use crate::error::{Error, Result};

pub const PIVOT_GUARD: usize = 1_000_000;
const EPS: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `maximize c·x` subject to `a_i·x (rel) b_i`; variables are `≥ 0` unless marked free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub n: usize,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
    pub objective: Vec<f64>,
    pub free: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `duals[i]` is the multiplier of row `i`: `c_j - Σ_i duals[i] a_ij ≤ 0` on
    /// nonnegative columns, `= 0` on free ones.
    Optimal {
        x: Vec<f64>,
        value: f64,
        duals: Vec<f64>,
        pivots: usize,
    },
    Infeasible {
        pivots: usize,
    },
    Unbounded {
        pivots: usize,
    },
}

impl LpOutcome {
    pub fn pivots(&self) -> usize {
        match self {
            LpOutcome::Optimal { pivots, .. } | LpOutcome::Infeasible { pivots } | LpOutcome::Unbounded { pivots } => *pivots,
        }
    }
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        LinearProgram { n, rows: Vec::new(), objective: vec![0.0; n], free: vec![false; n] }
    }

    pub fn add_row(&mut self, a: Vec<f64>, rel: Relation, b: f64) {
        debug_assert_eq!(a.len(), self.n);
        self.rows.push((a, rel, b));
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self)?.run(self)
    }
}

struct Tableau {
    /// `m` constraint rows then the objective row, each `cols + 1` wide (last entry = rhs).
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    /// column index of `x_j⁺` and, for free variables, `x_j⁻`
    map: Vec<(usize, Option<usize>)>,
    artificial_from: usize,
    /// per original row: column that started as its unit vector, its sign there, and whether the row was negated
    unit: Vec<(usize, f64, bool)>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Tableau> {
        if lp.objective.len() != lp.n || lp.free.len() != lp.n {
            return Err(Error::DimensionMismatch { expected: lp.n, got: lp.objective.len().min(lp.free.len()) });
        }
        let mut map = Vec::with_capacity(lp.n);
        let mut c = 0;
        for &free in &lp.free {
            if free {
                map.push((c, Some(c + 1)));
                c += 2;
            } else {
                map.push((c, None));
                c += 1;
            }
        }
        let structural = c;
        // orient every row so that b ≥ 0; b = 0 rows become ≤ so a slack can start basic
        let mut rows = Vec::with_capacity(lp.rows.len());
        for (a, rel, b) in &lp.rows {
            if a.len() != lp.n {
                return Err(Error::DimensionMismatch { expected: lp.n, got: a.len() });
            }
            let flip = *b < 0.0 || (*b == 0.0 && *rel == Relation::Ge);
            let rel = match (flip, rel) {
                (false, r) => *r,
                (true, Relation::Le) => Relation::Ge,
                (true, Relation::Ge) => Relation::Le,
                (true, Relation::Eq) => Relation::Eq,
            };
            let sg = if flip { -1.0 } else { 1.0 };
            rows.push((a.iter().map(|v| sg * v).collect::<Vec<_>>(), rel, sg * b, flip));
        }
        let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let arts = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let artificial_from = structural + slacks;
        let cols = artificial_from + arts;
        let m = rows.len();
        let mut t = vec![vec![0.0; cols + 1]; m + 1];
        let mut basis = vec![0; m];
        let mut unit = Vec::with_capacity(m);
        let (mut s, mut art) = (structural, artificial_from);
        for (i, (a, rel, b, flip)) in rows.iter().enumerate() {
            for (j, v) in a.iter().enumerate() {
                let (p, n) = map[j];
                t[i][p] = *v;
                if let Some(n) = n {
                    t[i][n] = -*v;
                }
            }
            t[i][cols] = *b;
            match rel {
                Relation::Le => {
                    t[i][s] = 1.0;
                    basis[i] = s;
                    unit.push((s, 1.0, *flip));
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -1.0;
                    unit.push((s, -1.0, *flip));
                    s += 1;
                    t[i][art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Relation::Eq => {
                    t[i][art] = 1.0;
                    unit.push((art, 1.0, *flip));
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Ok(Tableau { t, basis, cols, map, artificial_from, unit, pivots: 0 })
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn set_objective(&mut self, c: &[f64]) {
        let (m, cols) = (self.m(), self.cols);
        let mut obj = vec![0.0; cols + 1];
        obj[..cols].copy_from_slice(&c[..cols]);
        for i in 0..m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                for (o, v) in obj.iter_mut().zip(&self.t[i]) {
                    *o -= cb * v;
                }
            }
        }
        self.t[m] = obj;
    }

    fn pivot(&mut self, row: usize, col: usize) -> Result<()> {
        self.pivots += 1;
        if self.pivots > PIVOT_GUARD {
            return Err(Error::PivotGuard(PIVOT_GUARD));
        }
        let p = self.t[row][col];
        let prow: Vec<f64> = self.t[row].iter().map(|v| v / p).collect();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.t[row] = prow;
        self.basis[row] = col;
        Ok(())
    }

    /// Simplex iterations on the current objective row; `limit` bounds entering columns.
    ///
    /// Dantzig pricing while the objective moves; after a streak of degenerate
    /// pivots, Bland's rule (smallest index) takes over until progress resumes.
    fn iterate(&mut self, limit: usize) -> Result<bool> {
        let (m, cols) = (self.m(), self.cols);
        let stall_limit = 2 * m + 10;
        let mut degenerate = 0usize;
        loop {
            let obj = &self.t[m];
            let col = if degenerate < stall_limit {
                let mut best = None;
                let mut top = EPS;
                for (j, &v) in obj[..limit].iter().enumerate() {
                    if v > top {
                        top = v;
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..limit).find(|&j| obj[j] > EPS)
            };
            let Some(col) = col else {
                return Ok(true);
            };
            let mut best: Option<(f64, usize, usize)> = None;
            for i in 0..m {
                let a = self.t[i][col];
                if a > EPS {
                    let ratio = self.t[i][cols].max(0.0) / a;
                    let better = match best {
                        None => true,
                        Some((r, _, b)) => ratio < r - 1e-13 * r.max(1.0) || (ratio <= r + 1e-13 * r.max(1.0) && self.basis[i] < b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                None => return Ok(false),
                Some((ratio, row, _)) => {
                    if ratio * self.t[m][col] > 1e-14 {
                        degenerate = 0;
                    } else {
                        degenerate += 1;
                    }
                    self.pivot(row, col)?
                }
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        let (m, cols) = (self.m(), self.cols);
        if self.artificial_from < cols {
            let mut c = vec![0.0; cols];
            c[self.artificial_from..].iter_mut().for_each(|v| *v = -1.0);
            self.set_objective(&c);
            self.iterate(cols)?;
            let infeas: f64 = (0..m).filter(|&i| self.basis[i] >= self.artificial_from).map(|i| self.t[i][cols]).sum();
            let scale = 1.0 + lp.rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
            if infeas > FEAS_TOL * scale {
                return Ok(LpOutcome::Infeasible { pivots: self.pivots });
            }
            for i in 0..m {
                if self.basis[i] >= self.artificial_from {
                    if let Some(j) = (0..self.artificial_from).find(|&j| self.t[i][j].abs() > EPS) {
                        self.pivot(i, j)?;
                    }
                }
            }
        }
        let mut c = vec![0.0; cols];
        for (j, &(p, n)) in self.map.iter().enumerate() {
            c[p] = lp.objective[j];
            if let Some(n) = n {
                c[n] = -lp.objective[j];
            }
        }
        self.set_objective(&c);
        if !self.iterate(self.artificial_from)? {
            return Ok(LpOutcome::Unbounded { pivots: self.pivots });
        }
        let mut col_val = vec![0.0; cols];
        for i in 0..m {
            col_val[self.basis[i]] = self.t[i][cols];
        }
        let x: Vec<f64> = self.map.iter().map(|&(p, n)| col_val[p] - n.map_or(0.0, |n| col_val[n])).collect();
        let value = lp.objective.iter().zip(&x).map(|(a, b)| a * b).sum();
        // reduced cost of a unit column e_i with zero cost is -π_i·sign
        let duals = self
            .unit
            .iter()
            .map(|&(col, sign, flip)| {
                let pi = -self.t[m][col] / sign;
                if flip {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        Ok(LpOutcome::Optimal { x, value, duals, pivots: self.pivots })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimum(out: LpOutcome) -> (Vec<f64>, f64) {
        match out {
            LpOutcome::Optimal { x, value, .. } => (x, value),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![3.0, 5.0];
        lp.add_row(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add_row(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add_row(vec![3.0, 2.0], Relation::Le, 18.0);
        let (x, v) = optimum(lp.solve().unwrap());
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 6.0).abs() < 1e-12);
        assert!((v - 36.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_free() {
        // max -|…|: max -x + y with x free, x + y = 1, y ≤ 3, x ≥ -5 → x = -2, y = 3
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-1.0, 1.0];
        lp.free = vec![true, false];
        lp.add_row(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.add_row(vec![0.0, 1.0], Relation::Le, 3.0);
        lp.add_row(vec![1.0, 0.0], Relation::Ge, -5.0);
        let (x, v) = optimum(lp.solve().unwrap());
        assert!((x[0] + 2.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
        assert!((v - 5.0).abs() < 1e-12);
    }

    #[test]
    fn duals_certify_optimum() {
        // min 2x + 3y s.t. x + y ≥ 4, x + 3y ≥ 6 as max of the negation; duals (3/2, 1/2) up to sign
        let mut lp = LinearProgram::new(2);
        lp.objective = vec![-2.0, -3.0];
        lp.add_row(vec![1.0, 1.0], Relation::Ge, 4.0);
        lp.add_row(vec![1.0, 3.0], Relation::Ge, 6.0);
        lp.add_row(vec![-1.0, 0.0], Relation::Le, 0.0);
        let LpOutcome::Optimal { x, value, duals, .. } = lp.solve().unwrap() else { panic!() };
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        assert!((value + 9.0).abs() < 1e-12);
        assert!((duals[0] + 1.5).abs() < 1e-12 && (duals[1] + 0.5).abs() < 1e-12 && duals[2].abs() < 1e-12);
        let bound: f64 = duals.iter().zip(&lp.rows).map(|(p, r)| p * r.2).sum();
        assert!((bound - value).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(vec![1.0], Relation::Ge, 2.0);
        lp.add_row(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Infeasible { .. }));
        let mut lp = LinearProgram::new(1);
        lp.objective = vec![1.0];
        lp.add_row(vec![1.0], Relation::Ge, 2.0);
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Unbounded { .. }));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the textbook largest-coefficient rule
        let mut lp = LinearProgram::new(4);
        lp.objective = vec![0.75, -150.0, 0.02, -6.0];
        lp.add_row(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_row(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_row(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let (_, v) = optimum(lp.solve().unwrap());
        assert!((v - 0.05).abs() < 1e-12);
    }
}
