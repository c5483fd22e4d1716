//! Dense linear programming: minimize `c.x` subject to `A x <= b` and
//! per-variable box bounds, with infinities allowed on either side.
//!
//! The solver is a two-phase revised simplex with explicit bounded-variable
//! handling: box bounds never become constraint rows, so the basis stays at
//! the size of the inequality system. That matches the shape of the CI
//! precoding problem, which has `2 N_RF` box-bounded variables, one free
//! variable, and only `2K` rows.
//!
//! Entering and leaving variables follow Bland's smallest-index rule, which
//! prevents cycling; an iteration cap of `50 * (vars + rows)` per phase
//! backs that up. Basis systems are re-factorized from scratch each
//! iteration (the bases here are tiny), which keeps the arithmetic simple
//! and bit-for-bit deterministic.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `minimize objective . x  s.t.  ineq * x <= rhs,  lower <= x <= upper`.
///
/// `lower` entries may be `-inf` and `upper` entries `+inf`; a variable with
/// both is free.
#[derive(Debug, Clone)]
pub struct LpProblem<T> {
    objective: Vec<T>,
    ineq: Vec<Vec<T>>,
    rhs: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
}

/// Solve outcome. `x` and `objective_value` are meaningful when the status
/// is `Optimal` (and best-effort diagnostics otherwise); `residuals` holds
/// `A x - b` per row as a feasibility certificate.
#[derive(Debug, Clone)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective_value: T,
    pub status: LpStatus,
    pub residuals: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl LpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration-limit",
        }
    }
}

impl<T: Scalar> LpProblem<T> {
    pub fn new(
        objective: Vec<T>,
        ineq: Vec<Vec<T>>,
        rhs: Vec<T>,
        lower: Vec<T>,
        upper: Vec<T>,
    ) -> Result<Self> {
        let n = objective.len();
        if lower.len() != n || upper.len() != n {
            return Err(Error::dim(
                "LpProblem::new",
                format!("{n} objective coefficients but {} lower / {} upper bounds", lower.len(), upper.len()),
            ));
        }
        if ineq.len() != rhs.len() {
            return Err(Error::dim(
                "LpProblem::new",
                format!("{} constraint rows but {} right-hand sides", ineq.len(), rhs.len()),
            ));
        }
        for (i, row) in ineq.iter().enumerate() {
            if row.len() != n {
                return Err(Error::dim(
                    "LpProblem::new",
                    format!("row {i} has {} coefficients, expected {n}", row.len()),
                ));
            }
        }
        let finite = |v: &T| v.is_finite();
        if !objective.iter().all(finite)
            || !rhs.iter().all(finite)
            || !ineq.iter().flatten().all(finite)
        {
            return Err(Error::param("problem", "objective, rows and rhs must be finite"));
        }
        for j in 0..n {
            if lower[j].is_nan() || upper[j].is_nan() || lower[j] > upper[j] {
                return Err(Error::param(
                    "bounds",
                    format!("variable {j}: lower {} > upper {}", lower[j], upper[j]),
                ));
            }
        }
        Ok(LpProblem {
            objective,
            ineq,
            rhs,
            lower,
            upper,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.ineq[i]
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn lower(&self) -> &[T] {
        &self.lower
    }

    pub fn upper(&self) -> &[T] {
        &self.upper
    }

    /// Plain-text dump for cross-checking against external solvers.
    ///
    /// Format: a `vars`/`rows` header, the objective row, one `A | b` line
    /// per constraint, then one `lower upper` line per variable, using
    /// `-inf`/`inf` for unbounded sides.
    pub fn dump_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "# minimize c.x  s.t.  A x <= b,  l <= x <= u").unwrap();
        writeln!(out, "vars {}", self.num_vars()).unwrap();
        writeln!(out, "rows {}", self.num_constraints()).unwrap();
        let cells = |xs: &[T]| xs.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(" ");
        writeln!(out, "c {}", cells(&self.objective)).unwrap();
        for (row, b) in self.ineq.iter().zip(&self.rhs) {
            writeln!(out, "row {} | {b}", cells(row)).unwrap();
        }
        for j in 0..self.num_vars() {
            writeln!(out, "bound {} {}", self.lower[j], self.upper[j]).unwrap();
        }
        out
    }
}

/// Solve a problem; see module docs for the algorithm.
pub fn solve<T: Scalar>(problem: &LpProblem<T>) -> Result<LpSolution<T>> {
    Simplex::new(problem).run()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable parked at value zero.
    Free,
}

struct Simplex<'a, T> {
    problem: &'a LpProblem<T>,
    n_struct: usize,
    m: usize,
    /// Total variables: structural + slack + artificial.
    n_total: usize,
    lower: Vec<T>,
    upper: Vec<T>,
    /// Artificial column signs, one per row (zero = no artificial).
    art_sign: Vec<T>,
    /// Variable index of the artificial for each row, if any.
    art_var: Vec<Option<usize>>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    x: Vec<T>,
}

enum StepOutcome {
    Moved,
    OptimalForPhase,
    Unbounded,
}

impl<'a, T: Scalar> Simplex<'a, T> {
    fn new(problem: &'a LpProblem<T>) -> Self {
        let n_struct = problem.num_vars();
        let m = problem.num_constraints();
        Simplex {
            problem,
            n_struct,
            m,
            n_total: n_struct + m,
            lower: Vec::new(),
            upper: Vec::new(),
            art_sign: vec![T::zero(); m],
            art_var: vec![None; m],
            state: Vec::new(),
            basis: Vec::new(),
            x: Vec::new(),
        }
    }

    /// Column entry of variable `j` in row `i`.
    #[inline]
    fn col_entry(&self, j: usize, i: usize) -> T {
        if j < self.n_struct {
            self.problem.ineq[i][j]
        } else if j < self.n_struct + self.m {
            // Slack of row j - n_struct.
            if j - self.n_struct == i {
                T::one()
            } else {
                T::zero()
            }
        } else {
            // Artificial: signed unit column on its own row.
            let row = self
                .art_var
                .iter()
                .position(|v| *v == Some(j))
                .expect("artificial registered");
            if row == i {
                self.art_sign[row]
            } else {
                T::zero()
            }
        }
    }

    fn run(mut self) -> Result<LpSolution<T>> {
        self.lower = self.problem.lower.clone();
        self.upper = self.problem.upper.clone();
        // Slacks: [0, +inf).
        self.lower.extend(std::iter::repeat(T::zero()).take(self.m));
        self.upper.extend(std::iter::repeat(T::infinity()).take(self.m));

        // Park structural variables on a finite bound where one exists.
        self.state = (0..self.n_struct)
            .map(|j| {
                if self.lower[j].is_finite() {
                    VarState::AtLower
                } else if self.upper[j].is_finite() {
                    VarState::AtUpper
                } else {
                    VarState::Free
                }
            })
            .collect();
        // Slacks start basic.
        self.state.extend(std::iter::repeat(VarState::Basic).take(self.m));
        self.basis = (self.n_struct..self.n_struct + self.m).collect();
        self.x = vec![T::zero(); self.n_total];

        // Initial basic values; rows whose slack would go negative get an
        // artificial variable instead.
        self.set_nonbasic_values();
        let mut needs_phase1 = false;
        let residual = self.unbasic_residual();
        for i in 0..self.m {
            if residual[i] < T::zero() {
                let j = self.n_total;
                self.n_total += 1;
                self.lower.push(T::zero());
                self.upper.push(T::infinity());
                self.state[self.basis[i]] = VarState::AtLower; // slack leaves the basis
                self.state.push(VarState::Basic);
                self.art_sign[i] = -T::one();
                self.art_var[i] = Some(j);
                self.basis[i] = j;
                self.x.push(T::zero());
                needs_phase1 = true;
            }
        }

        let cap = 50 * (self.n_struct + self.m);

        if needs_phase1 {
            let mut phase1_cost = vec![T::zero(); self.n_total];
            for var in self.art_var.iter().flatten() {
                phase1_cost[*var] = T::one();
            }
            match self.optimize(&phase1_cost, cap)? {
                LpStatus::Optimal => {}
                LpStatus::IterationLimit => return Ok(self.finish(LpStatus::IterationLimit)),
                // Phase 1 is bounded below by zero; an unbounded report here
                // is a numerical breakdown.
                LpStatus::Unbounded | LpStatus::Infeasible => {
                    return Err(Error::param("lpsolve", "phase-1 breakdown"))
                }
            }
            let infeasibility: T = self
                .art_var
                .iter()
                .flatten()
                .map(|&v| self.x[v])
                .fold(T::zero(), |a, b| a + b);
            if infeasibility > T::LP_FEAS_TOL {
                return Ok(self.finish(LpStatus::Infeasible));
            }
            // Pin artificials to zero for phase 2.
            for var in self.art_var.iter().flatten() {
                self.lower[*var] = T::zero();
                self.upper[*var] = T::zero();
                if self.state[*var] != VarState::Basic {
                    self.state[*var] = VarState::AtLower;
                }
            }
        }

        let mut phase2_cost = vec![T::zero(); self.n_total];
        phase2_cost[..self.n_struct].copy_from_slice(&self.problem.objective);
        let status = self.optimize(&phase2_cost, cap)?;
        Ok(self.finish(status))
    }

    fn finish(&self, status: LpStatus) -> LpSolution<T> {
        let x: Vec<T> = self.x[..self.n_struct].to_vec();
        let objective_value = self
            .problem
            .objective
            .iter()
            .zip(&x)
            .map(|(&c, &v)| c * v)
            .fold(T::zero(), |a, b| a + b);
        let residuals = (0..self.m)
            .map(|i| {
                self.problem.ineq[i]
                    .iter()
                    .zip(&x)
                    .map(|(&a, &v)| a * v)
                    .fold(T::zero(), |acc, t| acc + t)
                    - self.problem.rhs[i]
            })
            .collect();
        LpSolution {
            x,
            objective_value,
            status,
            residuals,
        }
    }

    fn set_nonbasic_values(&mut self) {
        for j in 0..self.n_total {
            self.x[j] = match self.state[j] {
                VarState::AtLower => self.lower[j],
                VarState::AtUpper => self.upper[j],
                VarState::Free => T::zero(),
                VarState::Basic => self.x[j],
            };
        }
    }

    /// Right-hand side minus the nonbasic contribution, i.e. what the basic
    /// variables must supply per row.
    fn unbasic_residual(&self) -> Vec<T> {
        let mut r = self.problem.rhs.clone();
        for j in 0..self.n_total {
            if self.state[j] != VarState::Basic && self.x[j] != T::zero() {
                for i in 0..self.m {
                    let a = self.col_entry(j, i);
                    if a != T::zero() {
                        r[i] = r[i] - a * self.x[j];
                    }
                }
            }
        }
        r
    }

    fn refresh_basic_values(&mut self, lu: &Lu<T>) {
        self.set_nonbasic_values();
        let rhs = self.unbasic_residual();
        let xb = lu.solve(&rhs);
        for (i, &var) in self.basis.iter().enumerate() {
            self.x[var] = xb[i];
        }
    }

    fn factor_basis(&self) -> Result<Lu<T>> {
        let m = self.m;
        let mut b = vec![T::zero(); m * m];
        for (pos, &var) in self.basis.iter().enumerate() {
            for i in 0..m {
                b[i * m + pos] = self.col_entry(var, i);
            }
        }
        Lu::factor(m, b).ok_or_else(|| Error::param("lpsolve", "singular basis"))
    }

    fn optimize(&mut self, cost: &[T], cap: usize) -> Result<LpStatus> {
        for _iter in 0..cap {
            let lu = self.factor_basis()?;
            self.refresh_basic_values(&lu);
            match self.step(cost, &lu)? {
                StepOutcome::Moved => continue,
                StepOutcome::OptimalForPhase => return Ok(LpStatus::Optimal),
                StepOutcome::Unbounded => return Ok(LpStatus::Unbounded),
            }
        }
        Ok(LpStatus::IterationLimit)
    }

    fn step(&mut self, cost: &[T], lu: &Lu<T>) -> Result<StepOutcome> {
        // Duals: B^T y = c_B.
        let cb: Vec<T> = self.basis.iter().map(|&v| cost[v]).collect();
        let y = lu.solve_transpose(&cb);

        // Entering variable: Bland's rule, smallest eligible index.
        let mut entering: Option<(usize, T)> = None; // (var, direction)
        for j in 0..self.n_total {
            if self.state[j] == VarState::Basic {
                continue;
            }
            if self.upper[j] - self.lower[j] <= T::zero() {
                continue; // fixed variable can never move
            }
            let mut d = cost[j];
            for i in 0..self.m {
                let a = self.col_entry(j, i);
                if a != T::zero() {
                    d = d - y[i] * a;
                }
            }
            let dir = match self.state[j] {
                VarState::AtLower if d < -T::LP_OPT_TOL => T::one(),
                VarState::AtUpper if d > T::LP_OPT_TOL => -T::one(),
                VarState::Free if d < -T::LP_OPT_TOL => T::one(),
                VarState::Free if d > T::LP_OPT_TOL => -T::one(),
                _ => continue,
            };
            entering = Some((j, dir));
            break;
        }
        let Some((enter, dir)) = entering else {
            return Ok(StepOutcome::OptimalForPhase);
        };

        // Direction through the basis: w = B^{-1} A_enter.
        let col: Vec<T> = (0..self.m).map(|i| self.col_entry(enter, i)).collect();
        let w = lu.solve(&col);

        // Ratio test: smallest step that drives a basic variable to one of
        // its bounds, against the entering variable's own bound range.
        let range = self.upper[enter] - self.lower[enter]; // may be +inf
        let mut best_ratio = range;
        let mut leaving: Option<(usize, usize, VarState)> = None; // (row, var, bound hit)
        for i in 0..self.m {
            let var = self.basis[i];
            let rate = -dir * w[i]; // change of x_var per unit entering step
            if rate < -T::LP_PIVOT_TOL {
                if self.lower[var].is_finite() {
                    let ratio = ((self.x[var] - self.lower[var]) / -rate).max(T::zero());
                    if ratio < best_ratio
                        || (ratio == best_ratio && leaving.map_or(false, |(_, v, _)| var < v))
                    {
                        best_ratio = ratio;
                        leaving = Some((i, var, VarState::AtLower));
                    }
                }
            } else if rate > T::LP_PIVOT_TOL && self.upper[var].is_finite() {
                let ratio = ((self.upper[var] - self.x[var]) / rate).max(T::zero());
                if ratio < best_ratio
                    || (ratio == best_ratio && leaving.map_or(false, |(_, v, _)| var < v))
                {
                    best_ratio = ratio;
                    leaving = Some((i, var, VarState::AtUpper));
                }
            }
        }

        if best_ratio.is_infinite() {
            return Ok(StepOutcome::Unbounded);
        }

        match leaving {
            None => {
                // Bound flip: the entering variable crosses its whole range.
                self.state[enter] = match self.state[enter] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    s => s, // unreachable: free variables have infinite range
                };
            }
            Some((row, leave_var, bound)) => {
                self.x[enter] = self.x[enter] + dir * best_ratio;
                self.state[leave_var] = bound;
                self.state[enter] = VarState::Basic;
                self.basis[row] = enter;
            }
        }
        Ok(StepOutcome::Moved)
    }
}

/// Dense LU with partial pivoting, sized for the tiny bases this solver
/// produces. `perm[i]` is the original row stored at position `i`.
struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    fn factor(n: usize, mut a: Vec<T>) -> Option<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut pivot_row = k;
            let mut pivot_val = a[k * n + k].abs();
            for r in (k + 1)..n {
                let v = a[r * n + k].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val <= T::LP_PIVOT_TOL * T::LP_PIVOT_TOL || !pivot_val.is_finite() {
                return None;
            }
            if pivot_row != k {
                for c in 0..n {
                    a.swap(k * n + c, pivot_row * n + c);
                }
                perm.swap(k, pivot_row);
            }
            let inv = a[k * n + k].recip();
            for r in (k + 1)..n {
                let factor = a[r * n + k] * inv;
                a[r * n + k] = factor;
                for c in (k + 1)..n {
                    let update = a[k * n + c] * factor;
                    a[r * n + c] = a[r * n + c] - update;
                }
            }
        }
        Some(Lu { n, lu: a, perm })
    }

    /// Solve `A x = b`.
    fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for k in 0..i {
                let l = self.lu[i * n + k];
                let sub = l * x[k];
                x[i] = x[i] - sub;
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = self.lu[i * n + k];
                let sub = u * x[k];
                x[i] = x[i] - sub;
            }
            x[i] = x[i] / self.lu[i * n + i];
        }
        x
    }

    /// Solve `A^T y = c` using `A^T = U^T L^T P`.
    fn solve_transpose(&self, c: &[T]) -> Vec<T> {
        let n = self.n;
        let mut w = c.to_vec();
        // U^T is lower triangular.
        for i in 0..n {
            for k in 0..i {
                let u = self.lu[k * n + i];
                let sub = u * w[k];
                w[i] = w[i] - sub;
            }
            w[i] = w[i] / self.lu[i * n + i];
        }
        // L^T is unit upper triangular.
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let l = self.lu[k * n + i];
                let sub = l * w[k];
                w[i] = w[i] - sub;
            }
        }
        // Undo the permutation: y[perm[i]] = z[i].
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            y[self.perm[i]] = w[i];
        }
        y
    }
}
