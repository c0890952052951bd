//! A self-contained primal simplex solver for small dense linear programs
//! with per-variable box bounds.
//!
//! Box bounds are handled natively (nonbasic variables sit at either bound)
//! rather than through extra constraint rows, and Bland's rule keeps the
//! pivoting cycle-free. The instances this crate produces have at most a few
//! dozen variables, so each iteration simply refactorizes the basis by
//! Gaussian elimination; robustness beats speed at this size.

use crate::error::{Error, Result};

/// Direction of a linear constraint row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
    Eq,
}

/// `min c.x  s.t.  rows[i] . x  (sense[i])  rhs[i],  lo <= x <= hi`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub cost: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub senses: Vec<Sense>,
    pub rhs: Vec<f64>,
    /// Per-variable `[lo, hi]`; `hi` may be `f64::INFINITY`.
    pub bounds: Vec<(f64, f64)>,
}

impl LinearProgram {
    pub fn validate(&self) -> Result<()> {
        let n = self.cost.len();
        if self.rows.len() != self.senses.len() || self.rows.len() != self.rhs.len() {
            return Err(Error::InvalidArgument(
                "constraint arrays have mismatched lengths".into(),
            ));
        }
        if self.bounds.len() != n {
            return Err(Error::InvalidArgument(
                "one bound pair per variable required".into(),
            ));
        }
        for row in &self.rows {
            if row.len() != n {
                return Err(Error::InvalidArgument(
                    "constraint row length differs from cost length".into(),
                ));
            }
        }
        for &(lo, hi) in &self.bounds {
            if !lo.is_finite() {
                return Err(Error::InvalidArgument(
                    "every variable needs a finite lower bound".into(),
                ));
            }
            if hi < lo {
                return Err(Error::InvalidArgument(format!(
                    "empty bound interval [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq)]
enum VarStatus {
    Basic(usize),
    AtLo,
    AtUp,
}

struct Tableau {
    /// Column-major coefficient matrix of the equality system.
    cols: Vec<Vec<f64>>,
    bounds: Vec<(f64, f64)>,
    status: Vec<VarStatus>,
    basis: Vec<usize>,
    x: Vec<f64>,
    iterations: usize,
}

/// Solves the program; distinguishes infeasible, unbounded, and iteration-cap
/// outcomes as separate errors.
pub fn simplex_solve(lp: &LinearProgram) -> Result<SimplexSolution> {
    lp.validate()?;
    let n = lp.cost.len();
    let m = lp.rows.len();

    // Equality form: structural vars, one slack per inequality row, one
    // artificial per row for the phase-1 basis.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut bounds: Vec<(f64, f64)> = Vec::new();
    for j in 0..n {
        cols.push((0..m).map(|i| lp.rows[i][j]).collect());
        bounds.push(lp.bounds[j]);
    }
    for i in 0..m {
        let coeff = match lp.senses[i] {
            Sense::Ge => -1.0,
            Sense::Le => 1.0,
            Sense::Eq => continue,
        };
        let mut col = vec![0.0; m];
        col[i] = coeff;
        cols.push(col);
        bounds.push((0.0, f64::INFINITY));
    }
    let art_start = cols.len();

    // Nonbasic start: every variable at its lower bound.
    let mut status: Vec<VarStatus> = vec![VarStatus::AtLo; cols.len()];
    let mut x: Vec<f64> = bounds.iter().map(|&(lo, _)| lo).collect();
    let mut residual = lp.rhs.clone();
    for (j, col) in cols.iter().enumerate() {
        if x[j] != 0.0 {
            for i in 0..m {
                residual[i] -= col[i] * x[j];
            }
        }
    }
    let mut basis = Vec::with_capacity(m);
    for (i, &res) in residual.iter().enumerate() {
        let mut col = vec![0.0; m];
        col[i] = if res >= 0.0 { 1.0 } else { -1.0 };
        let idx = cols.len();
        cols.push(col);
        bounds.push((0.0, f64::INFINITY));
        status.push(VarStatus::Basic(i));
        x.push(res.abs());
        basis.push(idx);
    }

    let mut tab = Tableau {
        cols,
        bounds,
        status,
        basis,
        x,
        iterations: 0,
    };

    // Phase 1: minimize the artificial total.
    let mut phase1_cost = vec![0.0; tab.cols.len()];
    for c in phase1_cost.iter_mut().skip(art_start) {
        *c = 1.0;
    }
    tab.run(&phase1_cost)?;
    let infeasibility: f64 = (art_start..tab.cols.len()).map(|j| tab.x[j]).sum();
    if infeasibility > FEAS_TOL {
        return Err(Error::LpInfeasible);
    }
    tab.evict_artificials(art_start);

    // Phase 2: artificials pinned at zero, real objective.
    for j in art_start..tab.cols.len() {
        tab.bounds[j] = (0.0, 0.0);
        tab.x[j] = 0.0;
    }
    let mut cost = vec![0.0; tab.cols.len()];
    cost[..n].copy_from_slice(&lp.cost);
    tab.run(&cost)?;

    let x: Vec<f64> = tab.x[..n].to_vec();
    let value = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(SimplexSolution {
        x,
        value,
        iterations: tab.iterations,
    })
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    /// Solves `B z = rhs` (or `B^T z = rhs`) for the current basis matrix by
    /// Gaussian elimination with partial pivoting.
    fn solve_basis(&self, rhs: &[f64], transpose: bool) -> Result<Vec<f64>> {
        let m = self.m();
        let mut a = vec![vec![0.0; m]; m];
        for (k, &var) in self.basis.iter().enumerate() {
            for i in 0..m {
                if transpose {
                    a[k][i] = self.cols[var][i];
                } else {
                    a[i][k] = self.cols[var][i];
                }
            }
        }
        let mut b = rhs.to_vec();
        for col in 0..m {
            let (pivot_row, pivot_val) = (col..m)
                .map(|r| (r, a[r][col].abs()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                .unwrap_or((col, 0.0));
            if pivot_val < 1e-13 {
                return Err(Error::LpInfeasible); // singular basis: numerical breakdown
            }
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            for r in col + 1..m {
                let f = a[r][col] / a[col][col];
                if f == 0.0 {
                    continue;
                }
                for c in col..m {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
        for col in (0..m).rev() {
            let mut acc = b[col];
            for c in col + 1..m {
                acc -= a[col][c] * b[c];
            }
            b[col] = acc / a[col][col];
        }
        Ok(b)
    }

    fn run(&mut self, cost: &[f64]) -> Result<()> {
        loop {
            self.iterations += 1;
            if self.iterations > MAX_ITERATIONS {
                return Err(Error::LpIterationCap);
            }
            let m = self.m();

            // Simplex multipliers from B^T y = c_B.
            let y = if m > 0 {
                let cb: Vec<f64> = self.basis.iter().map(|&v| cost[v]).collect();
                self.solve_basis(&cb, true)?
            } else {
                Vec::new()
            };

            // Entering variable: Bland's rule over eligible reduced costs.
            let mut entering = None;
            for j in 0..self.cols.len() {
                let (lo, hi) = self.bounds[j];
                if lo == hi {
                    continue;
                }
                let increases = match self.status[j] {
                    VarStatus::Basic(_) => continue,
                    VarStatus::AtLo => true,
                    VarStatus::AtUp => false,
                };
                let reduced = cost[j] - dot(&y, &self.cols[j]);
                if (increases && reduced < -OPT_TOL) || (!increases && reduced > OPT_TOL) {
                    entering = Some((j, increases));
                    break;
                }
            }
            let Some((e, increases)) = entering else {
                return Ok(());
            };
            let sigma = if increases { 1.0 } else { -1.0 };

            // Basic-variable rates for a unit move of the entering variable.
            let d = if m > 0 {
                let col = self.cols[e].clone();
                self.solve_basis(&col, false)?
            } else {
                Vec::new()
            };

            // Ratio test; start from the entering variable's own range.
            let (lo_e, hi_e) = self.bounds[e];
            let mut best_t = hi_e - lo_e; // may be inf
            let mut leaving: Option<(usize, bool)> = None; // (row, hits_upper)
            for (row, &rate_raw) in d.iter().enumerate() {
                let rate = -sigma * rate_raw;
                let var = self.basis[row];
                let (lo, hi) = self.bounds[var];
                let v = self.x[var];
                let (t, hits_upper) = if rate > PIVOT_TOL {
                    if hi.is_infinite() {
                        continue;
                    }
                    (((hi - v) / rate).max(0.0), true)
                } else if rate < -PIVOT_TOL {
                    (((lo - v) / rate).max(0.0), false)
                } else {
                    continue;
                };
                let better = t < best_t - 1e-12
                    || (t < best_t + 1e-12
                        && leaving.is_some_and(|(prev_row, _)| self.basis[prev_row] > var));
                if better {
                    best_t = t;
                    leaving = Some((row, hits_upper));
                }
            }

            if best_t.is_infinite() {
                return Err(Error::LpUnbounded);
            }

            // Apply the move.
            self.x[e] += sigma * best_t;
            for (row, &rate_raw) in d.iter().enumerate() {
                let var = self.basis[row];
                self.x[var] -= sigma * rate_raw * best_t;
            }

            match leaving {
                None => {
                    // Bound flip: entering travels to its opposite bound.
                    self.status[e] = if increases {
                        VarStatus::AtUp
                    } else {
                        VarStatus::AtLo
                    };
                    self.x[e] = if increases { hi_e } else { lo_e };
                }
                Some((row, hits_upper)) => {
                    let out = self.basis[row];
                    let (lo, hi) = self.bounds[out];
                    self.status[out] = if hits_upper {
                        VarStatus::AtUp
                    } else {
                        VarStatus::AtLo
                    };
                    self.x[out] = if hits_upper { hi } else { lo };
                    self.basis[row] = e;
                    self.status[e] = VarStatus::Basic(row);
                }
            }
        }
    }

    /// After phase 1, pivot zero-valued artificial variables out of the basis
    /// where a usable pivot exists; rows without one are linearly dependent
    /// and keep their artificial pinned at zero.
    fn evict_artificials(&mut self, art_start: usize) {
        let m = self.m();
        for row in 0..m {
            if self.basis[row] < art_start {
                continue;
            }
            let rhs_unit: Vec<f64> = (0..m).map(|i| if i == row { 1.0 } else { 0.0 }).collect();
            let Ok(er) = self.solve_basis(&rhs_unit, true) else {
                continue;
            };
            let replacement = (0..art_start).find(|&j| {
                matches!(self.status[j], VarStatus::AtLo | VarStatus::AtUp)
                    && dot(&er, &self.cols[j]).abs() > 1e-9
            });
            if let Some(j) = replacement {
                let out = self.basis[row];
                self.status[out] = VarStatus::AtLo;
                self.x[out] = 0.0;
                self.basis[row] = j;
                self.status[j] = VarStatus::Basic(row);
                // Degenerate pivot: the artificial sat at zero, values stand.
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ge(row: Vec<f64>, rhs: f64) -> (Vec<f64>, Sense, f64) {
        (row, Sense::Ge, rhs)
    }

    fn build(
        cost: Vec<f64>,
        cons: Vec<(Vec<f64>, Sense, f64)>,
        bounds: Vec<(f64, f64)>,
    ) -> LinearProgram {
        let mut rows = Vec::new();
        let mut senses = Vec::new();
        let mut rhs = Vec::new();
        for (r, s, b) in cons {
            rows.push(r);
            senses.push(s);
            rhs.push(b);
        }
        LinearProgram {
            cost,
            rows,
            senses,
            rhs,
            bounds,
        }
    }

    /// Brute-force oracle: enumerate all candidate vertices (intersections of
    /// n active constraints drawn from rows and bounds), keep the feasible
    /// ones, and take the best objective.
    fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
        let n = lp.cost.len();
        let mut eqs: Vec<(Vec<f64>, f64)> = Vec::new();
        for (i, row) in lp.rows.iter().enumerate() {
            eqs.push((row.clone(), lp.rhs[i]));
        }
        for j in 0..n {
            let mut unit = vec![0.0; n];
            unit[j] = 1.0;
            eqs.push((unit.clone(), lp.bounds[j].0));
            if lp.bounds[j].1.is_finite() {
                eqs.push((unit, lp.bounds[j].1));
            }
        }
        fn feasible_value(lp: &LinearProgram, x: &[f64]) -> Option<f64> {
            let n = lp.cost.len();
            for j in 0..n {
                if x[j] < lp.bounds[j].0 - 1e-7 || x[j] > lp.bounds[j].1 + 1e-7 {
                    return None;
                }
            }
            for (i, row) in lp.rows.iter().enumerate() {
                let lhs: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
                let ok = match lp.senses[i] {
                    Sense::Ge => lhs >= lp.rhs[i] - 1e-7,
                    Sense::Le => lhs <= lp.rhs[i] + 1e-7,
                    Sense::Eq => (lhs - lp.rhs[i]).abs() <= 1e-7,
                };
                if !ok {
                    return None;
                }
            }
            Some(lp.cost.iter().zip(x).map(|(c, v)| c * v).sum())
        }
        fn solve_square(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
            let n = b.len();
            for col in 0..n {
                let piv = (col..n)
                    .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())?;
                if a[piv][col].abs() < 1e-10 {
                    return None;
                }
                a.swap(col, piv);
                b.swap(col, piv);
                for r in 0..n {
                    if r == col {
                        continue;
                    }
                    let f = a[r][col] / a[col][col];
                    for c in 0..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
            Some((0..n).map(|i| b[i] / a[i][i]).collect())
        }
        let mut best: Option<f64> = None;
        let idxs: Vec<usize> = (0..eqs.len()).collect();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(combo) = stack.pop() {
            if combo.len() == n {
                let mut a: Vec<Vec<f64>> = combo.iter().map(|&i| eqs[i].0.clone()).collect();
                let mut b: Vec<f64> = combo.iter().map(|&i| eqs[i].1).collect();
                if let Some(x) = solve_square(&mut a, &mut b) {
                    if let Some(v) = feasible_value(lp, &x) {
                        best = Some(best.map_or(v, |bst: f64| bst.min(v)));
                    }
                }
                continue;
            }
            let start = combo.last().map_or(0, |&l| l + 1);
            for &i in &idxs[start.min(idxs.len())..] {
                let mut next = combo.clone();
                next.push(i);
                stack.push(next);
            }
        }
        best
    }

    #[test]
    fn single_variable_threshold() {
        let lp = build(vec![1.0], vec![ge(vec![1.0], 3.0)], vec![(0.0, 10.0)]);
        let sol = simplex_solve(&lp).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn maximization_via_negated_cost() {
        // max x + y subject to x + 2y <= 4 in the box [0,3]^2:
        // optimum x = 3, y = 1/2.
        let lp = build(
            vec![-1.0, -1.0],
            vec![(vec![1.0, 2.0], Sense::Le, 4.0)],
            vec![(0.0, 3.0), (0.0, 3.0)],
        );
        let sol = simplex_solve(&lp).unwrap();
        assert!((sol.value + 3.5).abs() < 1e-9, "got {}", sol.value);
    }

    #[test]
    fn equality_constraints_are_respected() {
        let lp = build(
            vec![1.0, 2.0],
            vec![(vec![1.0, 1.0], Sense::Eq, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        let sol = simplex_solve(&lp).unwrap();
        assert!((sol.value - 1.0).abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_and_unbounded_are_distinguished() {
        let infeasible = build(
            vec![1.0],
            vec![ge(vec![1.0], 5.0), (vec![1.0], Sense::Le, 1.0)],
            vec![(0.0, 10.0)],
        );
        assert!(matches!(
            simplex_solve(&infeasible),
            Err(Error::LpInfeasible)
        ));

        let unbounded = build(
            vec![-1.0],
            vec![ge(vec![1.0], 0.0)],
            vec![(0.0, f64::INFINITY)],
        );
        assert!(matches!(simplex_solve(&unbounded), Err(Error::LpUnbounded)));
    }

    #[test]
    fn degenerate_redundant_rows_terminate() {
        let lp = build(
            vec![1.0, -1.0],
            vec![
                ge(vec![1.0, 1.0], 1.0),
                ge(vec![1.0, 1.0], 1.0),
                ge(vec![2.0, 2.0], 2.0),
            ],
            vec![(0.0, 2.0), (0.0, 2.0)],
        );
        let sol = simplex_solve(&lp).unwrap();
        assert!((sol.value + 2.0).abs() < 1e-9);
    }

    #[test]
    fn randomized_lps_match_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=4);
            let bounds: Vec<(f64, f64)> = (0..n)
                .map(|_| {
                    let lo: f64 = rng.gen_range(-2.0..0.0);
                    let hi = lo + rng.gen_range(0.5..4.0);
                    (lo, hi)
                })
                .collect();
            // Anchor feasibility at a random interior point.
            let z: Vec<f64> = bounds
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..hi))
                .collect();
            let cost: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let mut rows = Vec::new();
            let mut senses = Vec::new();
            let mut rhs = Vec::new();
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let at_z: f64 = row.iter().zip(&z).map(|(a, b)| a * b).sum();
                if rng.gen_bool(0.5) {
                    senses.push(Sense::Ge);
                    rhs.push(at_z - rng.gen_range(0.0..1.0));
                } else {
                    senses.push(Sense::Le);
                    rhs.push(at_z + rng.gen_range(0.0..1.0));
                }
                rows.push(row);
            }
            let lp = LinearProgram {
                cost,
                rows,
                senses,
                rhs,
                bounds,
            };
            let oracle = vertex_enumeration(&lp).expect("feasible by construction");
            let sol = simplex_solve(&lp).expect("feasible by construction");
            assert!(
                (sol.value - oracle).abs() < 1e-9,
                "simplex {} vs oracle {} on {lp:?}",
                sol.value,
                oracle
            );
        }
    }
}
