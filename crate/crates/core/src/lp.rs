//! Linear programs over any [`Scalar`].
//!
//! [`solve`] dispatches on the scalar: floating-point problems go to
//! `microlp` (a bounded revised simplex that copes with the heavy degeneracy
//! of the dominance LPs), exact rationals to the in-house dense tableau
//! [`simplex`], which needs no tolerances there.
//!
//! Tableau rows are equilibrated by their largest coefficient and normalized to a
//! nonnegative right-hand side; each row keeps an identity column (slack or
//! artificial) so that duals can be read from the final basis. Dantzig
//! pricing is used until the objective stalls, then Bland's rule.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Bound<T> {
    NonNeg,
    Free,
    Fixed(T),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row<T> {
    pub coeffs: Vec<(usize, T)>,
    pub sense: Sense,
    pub rhs: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpProblem<T> {
    pub maximize: bool,
    pub objective: Vec<T>,
    pub bounds: Vec<Bound<T>>,
    pub rows: Vec<Row<T>>,
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(maximize: bool) -> Self {
        LpProblem { maximize, objective: Vec::new(), bounds: Vec::new(), rows: Vec::new() }
    }

    /// Adds a variable and returns its index.
    pub fn var(&mut self, cost: T, bound: Bound<T>) -> usize {
        self.objective.push(cost);
        self.bounds.push(bound);
        self.objective.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds a row and returns its index. Repeated variables are summed.
    pub fn row(&mut self, coeffs: Vec<(usize, T)>, sense: Sense, rhs: T) -> usize {
        self.rows.push(Row { coeffs, sense, rhs });
        self.rows.len() - 1
    }

    /// Sets a variable's bound to `Fixed(v)`.
    pub fn fix(&mut self, var: usize, v: T) {
        self.bounds[var] = Bound::Fixed(v);
    }

    /// Left-hand side of `row` at `x`.
    pub fn activity(&self, row: usize, x: &[T]) -> T {
        self.rows[row].coeffs.iter().fold(T::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }

    pub fn objective_at(&self, x: &[T]) -> T {
        self.objective.iter().zip(x).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    /// Largest violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (i, r) in self.rows.iter().enumerate() {
            let lhs = self.activity(i, x);
            let v = match r.sense {
                Sense::Le => lhs - r.rhs.clone(),
                Sense::Ge => r.rhs.clone() - lhs,
                Sense::Eq => (lhs - r.rhs.clone()).abs(),
            };
            worst = worst.max_of(v);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            let v = match b {
                Bound::NonNeg => -x[j].clone(),
                Bound::Free => T::zero(),
                Bound::Fixed(f) => (x[j].clone() - f.clone()).abs(),
            };
            worst = worst.max_of(v);
        }
        worst
    }

    /// Dual objective `Σ b_i y_i + Σ_fixed v_j (c_j − A_jᵀ y)`; equals the
    /// primal optimum under strong duality.
    pub fn dual_objective(&self, dual: &[T]) -> T {
        let mut total = self.rows.iter().zip(dual).fold(T::zero(), |acc, (r, y)| acc + r.rhs.clone() * y.clone());
        let mut reduced: Vec<T> = self.objective.clone();
        for (r, y) in self.rows.iter().zip(dual) {
            for (j, a) in &r.coeffs {
                reduced[*j] = reduced[*j].clone() - a.clone() * y.clone();
            }
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let Bound::Fixed(v) = b {
                total = total + v.clone() * reduced[j].clone();
            }
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration limit hit before optimality was proven.
    Stalled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub objective: T,
    pub primal: Vec<T>,
    /// ∂objective/∂rhs per row.
    pub dual: Vec<T>,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct LpOptions {
    pub max_iterations: Option<usize>,
    /// Degenerate pivots tolerated before switching to Bland's rule.
    pub bland_after: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { max_iterations: None, bland_after: 50 }
    }
}

enum ColOrigin {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau<T> {
    m: usize,
    n: usize,
    /// Row-major m x n.
    a: Vec<T>,
    b: Vec<T>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
}

impl<T: Scalar> Tableau<T> {
    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [T], value: &mut T) {
        let n = self.n;
        let p = self.a[r * n + c].clone();
        for j in 0..n {
            let v = self.a[r * n + j].clone() / p.clone();
            self.a[r * n + j] = v;
        }
        self.b[r] = self.b[r].clone() / p;
        let (before, rest) = self.a.split_at_mut(r * n);
        let (prow, after) = rest.split_at_mut(n);
        let nz: Vec<usize> = (0..n).filter(|&j| !prow[j].is_zero()).collect();
        let elim = |row: &mut [T], bi: &mut T, pb: &T| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
            row[c] = T::zero();
            *bi = bi.clone() - f * pb.clone();
        };
        let pb = self.b[r].clone();
        for (i, row) in before.chunks_mut(n).enumerate() {
            elim(row, &mut self.b[i], &pb);
        }
        for (k, row) in after.chunks_mut(n).enumerate() {
            elim(row, &mut self.b[r + 1 + k], &pb);
        }
        let f = cost[c].clone();
        if !f.is_zero() {
            for &j in &nz {
                cost[j] = cost[j].clone() - f.clone() * prow[j].clone();
            }
            cost[c] = T::zero();
            *value = value.clone() - f * pb;
        }
        self.basis[r] = c;
    }

    /// Minimizes with reduced costs `cost`; `value` tracks −objective.
    fn optimize(&mut self, cost: &mut [T], value: &mut T, opts: &LpOptions, iters: &mut usize, limit: usize) -> LpStatus {
        let tol = T::lp_tolerance();
        let mut degenerate = 0usize;
        loop {
            if *iters >= limit {
                return LpStatus::Stalled;
            }
            let bland = degenerate >= opts.bland_after;
            let neg_tol = -tol.clone();
            let mut enter = None;
            let mut best = T::zero();
            for j in 0..self.n {
                if !self.allowed[j] || cost[j] >= neg_tol {
                    continue;
                }
                if bland {
                    enter = Some(j);
                    break;
                }
                if enter.is_none() || cost[j] < best {
                    best = cost[j].clone();
                    enter = Some(j);
                }
            }
            let Some(c) = enter else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<usize> = None;
            let mut ratio = T::zero();
            for i in 0..self.m {
                let a = self.at(i, c);
                if *a <= tol {
                    continue;
                }
                let r = self.b[i].clone() / a.clone();
                let better = match leave {
                    None => true,
                    Some(l) => {
                        if r < ratio {
                            true
                        } else if r == ratio || (!T::EXACT && (r.clone() - ratio.clone()).abs() <= tol) {
                            if bland {
                                self.basis[i] < self.basis[l]
                            } else {
                                a > self.at(l, c)
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some(i);
                    ratio = r;
                }
            }
            let Some(r) = leave else {
                return LpStatus::Unbounded;
            };
            if ratio <= tol {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, c, cost, value);
            *iters += 1;
        }
    }
}

pub fn solve<T: Scalar>(problem: &LpProblem<T>) -> LpSolution<T> {
    T::solve_lp(problem)
}

/// Floating-point backend. `dual` is left empty.
pub fn solve_microlp<T: Scalar>(problem: &LpProblem<T>) -> LpSolution<T> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let dir = if problem.maximize { OptimizationDirection::Maximize } else { OptimizationDirection::Minimize };
    let mut p = Problem::new(dir);
    let vars: Vec<microlp::Variable> = problem
        .objective
        .iter()
        .zip(&problem.bounds)
        .map(|(c, b)| {
            let range = match b {
                Bound::NonNeg => (0.0, f64::INFINITY),
                Bound::Free => (f64::NEG_INFINITY, f64::INFINITY),
                Bound::Fixed(v) => (v.to_f64_lossy(), v.to_f64_lossy()),
            };
            p.add_var(c.to_f64_lossy(), range)
        })
        .collect();
    for r in &problem.rows {
        let op = match r.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        // microlp wants each variable at most once, in index order
        let mut merged: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
        for (j, v) in &r.coeffs {
            *merged.entry(*j).or_default() += v.to_f64_lossy();
        }
        let expr: Vec<(microlp::Variable, f64)> = merged.into_iter().filter(|(_, v)| *v != 0.0).map(|(j, v)| (vars[j], v)).collect();
        p.add_constraint(&expr[..], op, r.rhs.to_f64_lossy());
    }
    let status = match p.solve() {
        Ok(outcome) => match outcome.solution() {
            Some(sol) => {
                let primal: Vec<T> = vars.iter().map(|&v| T::from_f64_lossy(sol.var_value(v))).collect();
                let objective = problem.objective_at(&primal);
                return LpSolution { status: LpStatus::Optimal, objective, primal, dual: Vec::new(), iterations: 0 };
            }
            None => LpStatus::Stalled,
        },
        Err(microlp::Error::Infeasible) => LpStatus::Infeasible,
        Err(microlp::Error::Unbounded) => LpStatus::Unbounded,
        Err(_) => LpStatus::Stalled,
    };
    failure(problem, status, 0)
}

/// In-house dense two-phase simplex; reports duals.
pub fn simplex<T: Scalar>(problem: &LpProblem<T>) -> LpSolution<T> {
    simplex_with(problem, &LpOptions::default())
}

pub fn simplex_with<T: Scalar>(problem: &LpProblem<T>, opts: &LpOptions) -> LpSolution<T> {
    let nv = problem.num_vars();
    let m = problem.rows.len();
    let sign = if problem.maximize { -T::one() } else { T::one() };

    // structural columns
    let mut origin = Vec::new();
    let mut col_of = vec![(usize::MAX, usize::MAX); nv];
    let mut shift = vec![T::zero(); m];
    for (j, b) in problem.bounds.iter().enumerate() {
        match b {
            Bound::NonNeg => {
                col_of[j] = (origin.len(), usize::MAX);
                origin.push(ColOrigin::Plus(j));
            }
            Bound::Free => {
                col_of[j] = (origin.len(), origin.len() + 1);
                origin.push(ColOrigin::Plus(j));
                origin.push(ColOrigin::Minus(j));
            }
            Bound::Fixed(_) => {}
        }
    }
    for (i, r) in problem.rows.iter().enumerate() {
        for (j, a) in &r.coeffs {
            if let Bound::Fixed(v) = &problem.bounds[*j] {
                shift[i] = shift[i].clone() + a.clone() * v.clone();
            }
        }
    }
    let slack_rows: Vec<usize> = (0..m).filter(|&i| problem.rows[i].sense != Sense::Eq).collect();
    let mut slack_col = vec![usize::MAX; m];
    for &i in &slack_rows {
        slack_col[i] = origin.len();
        origin.push(ColOrigin::Slack);
    }
    let art_start = origin.len();
    for _ in 0..m {
        origin.push(ColOrigin::Artificial);
    }
    let n = origin.len();

    let mut a = vec![T::zero(); m * n];
    let mut b = vec![T::zero(); m];
    let mut row_factor = vec![T::one(); m];
    for (i, r) in problem.rows.iter().enumerate() {
        let row = &mut a[i * n..(i + 1) * n];
        for (j, v) in &r.coeffs {
            let (p, q) = col_of[*j];
            if p == usize::MAX {
                continue;
            }
            row[p] = row[p].clone() + v.clone();
            if q != usize::MAX {
                row[q] = row[q].clone() - v.clone();
            }
        }
        let mut rhs = r.rhs.clone() - shift[i].clone();
        let scale = row[..art_start].iter().fold(T::zero(), |acc, v| acc.max_of(v.abs()));
        let mut factor = if scale.is_zero() { T::one() } else { T::one() / scale };
        if (rhs.clone() * factor.clone()).is_negative() {
            factor = -factor;
        }
        if !factor.is_one() {
            for v in row.iter_mut() {
                *v = v.clone() * factor.clone();
            }
            rhs = rhs * factor.clone();
        }
        // slacks are rescaled so their coefficient stays ±1
        let pos = factor.is_positive();
        match r.sense {
            Sense::Le => row[slack_col[i]] = if pos { T::one() } else { -T::one() },
            Sense::Ge => row[slack_col[i]] = if pos { -T::one() } else { T::one() },
            Sense::Eq => {}
        }
        row[art_start + i] = T::one();
        b[i] = rhs;
        row_factor[i] = factor;
    }

    let mut tab = Tableau { m, n, a, b, basis: (art_start..art_start + m).collect(), allowed: vec![true; n] };
    for i in 0..m {
        tab.allowed[art_start + i] = false;
    }
    // a slack with +1 after normalization can start in the basis instead
    for &i in &slack_rows {
        let s = slack_col[i];
        if tab.at(i, s).is_one() {
            tab.basis[i] = s;
            tab.a[i * n + art_start + i] = T::zero();
        }
    }
    // row i's identity column; used to read duals off B^-1
    let ident: Vec<usize> = tab.basis.clone();

    let limit = opts.max_iterations.unwrap_or(50 * (m + n) + 1000);
    let mut iters = 0;
    let tol = T::lp_tolerance();

    // phase 1: minimize the sum of artificials in the basis
    let mut cost1 = vec![T::zero(); n];
    let mut value1 = T::zero();
    for i in 0..m {
        if tab.basis[i] >= art_start {
            for j in 0..n {
                if j < art_start {
                    cost1[j] = cost1[j].clone() - tab.at(i, j).clone();
                }
            }
            value1 = value1 - tab.b[i].clone();
        }
    }
    let mut status = tab.optimize(&mut cost1, &mut value1, opts, &mut iters, limit);
    let infeasible = |tab: &Tableau<T>| {
        let feas_tol = if T::EXACT { T::zero() } else { T::from_f64_lossy(1e-8) };
        (0..m).any(|i| tab.basis[i] >= art_start && tab.b[i] > feas_tol)
    };
    if status == LpStatus::Stalled {
        return failure(problem, LpStatus::Stalled, iters);
    }
    if infeasible(&tab) {
        return failure(problem, LpStatus::Infeasible, iters);
    }
    // drive zero-level artificials out of the basis where possible
    for i in 0..m {
        if tab.basis[i] >= art_start {
            if let Some(j) = (0..art_start).find(|&j| tab.at(i, j).abs() > tol) {
                let mut dummy = vec![T::zero(); n];
                let mut dv = T::zero();
                tab.pivot(i, j, &mut dummy, &mut dv);
            } else {
                tab.b[i] = T::zero();
            }
        }
    }

    // phase 2
    let mut cost = vec![T::zero(); n];
    for (k, o) in origin.iter().enumerate() {
        cost[k] = match o {
            ColOrigin::Plus(j) => sign.clone() * problem.objective[*j].clone(),
            ColOrigin::Minus(j) => -(sign.clone() * problem.objective[*j].clone()),
            _ => T::zero(),
        };
    }
    let basic_cost: Vec<T> = tab.basis.iter().map(|&k| cost[k].clone()).collect();
    let mut value = T::zero();
    for i in 0..m {
        let cb = &basic_cost[i];
        if cb.is_zero() {
            continue;
        }
        for j in 0..n {
            cost[j] = cost[j].clone() - cb.clone() * tab.at(i, j).clone();
        }
        value = value - cb.clone() * tab.b[i].clone();
    }
    status = tab.optimize(&mut cost, &mut value, opts, &mut iters, limit);
    if status != LpStatus::Optimal {
        return failure(problem, status, iters);
    }

    let mut primal = vec![T::zero(); nv];
    for (j, bd) in problem.bounds.iter().enumerate() {
        if let Bound::Fixed(v) = bd {
            primal[j] = v.clone();
        }
    }
    for i in 0..m {
        match origin[tab.basis[i]] {
            ColOrigin::Plus(j) => primal[j] = primal[j].clone() + tab.b[i].clone(),
            ColOrigin::Minus(j) => primal[j] = primal[j].clone() - tab.b[i].clone(),
            _ => {}
        }
    }
    // y' = c_B B^-1; B^-1 column i sits under row i's identity column
    let c_b: Vec<T> = tab
        .basis
        .iter()
        .map(|&k| match origin[k] {
            ColOrigin::Plus(j) => sign.clone() * problem.objective[j].clone(),
            ColOrigin::Minus(j) => -(sign.clone() * problem.objective[j].clone()),
            _ => T::zero(),
        })
        .collect();
    let dual = (0..m)
        .map(|i| {
            let col = ident[i];
            let y = (0..m).fold(T::zero(), |acc, r| acc + c_b[r].clone() * tab.at(r, col).clone());
            // undo the internal sign and the row normalization
            sign.clone() * y * row_factor[i].clone()
        })
        .collect();
    let objective = problem.objective_at(&primal);
    LpSolution { status: LpStatus::Optimal, objective, primal, dual, iterations: iters }
}

fn failure<T: Scalar>(problem: &LpProblem<T>, status: LpStatus, iterations: usize) -> LpSolution<T> {
    LpSolution {
        status,
        objective: T::zero(),
        primal: vec![T::zero(); problem.num_vars()],
        dual: vec![T::zero(); problem.rows.len()],
        iterations,
    }
}
