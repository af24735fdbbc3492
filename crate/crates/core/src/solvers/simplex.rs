//! Bounded-variable revised simplex with an explicit basis inverse.
//!
//! Works on the standard computational form `A z = b`, `lo ≤ z ≤ hi` after
//! the public wrappers add slacks. Phase 1 minimizes the sum of artificial
//! variables from an all-artificial basis; phase 2 minimizes the true cost
//! with the artificials pinned to zero. Pricing is Dantzig's rule until
//! `BLAND_THRESHOLD` pivots, then Bland's rule; all ties break to the lowest
//! variable index.

use nalgebra::{DMatrix, DVector};

use super::SolveOutcome;

const PIVOT_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const BLAND_THRESHOLD: usize = 2_000;

/// Equality-form LP data fed to the engine.
pub(crate) struct StandardLp {
    /// m x n coefficient matrix (structural + slack columns).
    pub cols: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub lower: DVector<f64>,
    pub upper: DVector<f64>,
    pub cost: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Free variable parked at zero.
    FreeZero,
}

pub(crate) struct SimplexResult {
    pub outcome: SolveOutcome,
    /// Values for all columns of the standard form (structural + slack).
    pub values: DVector<f64>,
    /// Row duals y = c_Bᵀ B⁻¹ for the phase-2 cost.
    pub row_duals: DVector<f64>,
    pub objective: f64,
    pub iterations: usize,
}

pub(crate) fn solve_standard(lp: &StandardLp, tol: f64, max_iter: usize) -> SimplexResult {
    Engine::new(lp, tol).run(max_iter)
}

struct Engine<'a> {
    lp: &'a StandardLp,
    tol: f64,
    m: usize,
    n_total: usize, // structural + slack + artificial
    n_real: usize,  // structural + slack
    basis: Vec<usize>,
    state: Vec<VarState>,
    values: DVector<f64>,
    binv: DMatrix<f64>,
    cost: DVector<f64>, // active cost (phase 1 or 2)
    lower: DVector<f64>,
    upper: DVector<f64>,
    art_signs: Vec<f64>,
    pivots_since_refactor: usize,
    total_pivots: usize,
    degenerate_streak: usize,
}

impl<'a> Engine<'a> {
    fn new(lp: &'a StandardLp, tol: f64) -> Self {
        let m = lp.rhs.len();
        let n_real = lp.cols.ncols();
        let n_total = n_real + m;

        let mut lower = DVector::from_element(n_total, 0.0);
        let mut upper = DVector::from_element(n_total, f64::INFINITY);
        lower.rows_mut(0, n_real).copy_from(&lp.lower);
        upper.rows_mut(0, n_real).copy_from(&lp.upper);

        let mut state = Vec::with_capacity(n_total);
        let mut values = DVector::zeros(n_total);
        for j in 0..n_real {
            let (lo, hi) = (lower[j], upper[j]);
            if lo.is_finite() {
                state.push(VarState::AtLower);
                values[j] = lo;
            } else if hi.is_finite() {
                state.push(VarState::AtUpper);
                values[j] = hi;
            } else {
                state.push(VarState::FreeZero);
            }
        }

        // Residual the artificials must cover.
        let mut resid = lp.rhs.clone();
        for j in 0..n_real {
            if values[j] != 0.0 {
                resid -= lp.cols.column(j) * values[j];
            }
        }

        // Artificial i covers row i with column sign(resid_i) * e_i.
        let mut art_signs = vec![1.0f64; m];
        let mut basis = Vec::with_capacity(m);
        for i in 0..m {
            let j = n_real + i;
            art_signs[i] = if resid[i] < 0.0 { -1.0 } else { 1.0 };
            values[j] = resid[i].abs();
            state.push(VarState::Basic(i));
            basis.push(j);
        }
        let binv = DMatrix::from_fn(m, m, |i, j| if i == j { art_signs[i] } else { 0.0 });

        // Phase-1 cost: sum of artificials.
        let mut cost = DVector::zeros(n_total);
        for i in 0..m {
            cost[n_real + i] = 1.0;
        }

        Engine {
            lp,
            tol,
            m,
            n_total,
            n_real,
            basis,
            state,
            values,
            binv,
            cost,
            lower,
            upper,
            art_signs,
            pivots_since_refactor: 0,
            total_pivots: 0,
            degenerate_streak: 0,
        }
    }

    fn column(&self, j: usize) -> DVector<f64> {
        if j < self.n_real {
            self.lp.cols.column(j).into_owned()
        } else {
            let mut e = DVector::zeros(self.m);
            e[j - self.n_real] = self.art_signs[j - self.n_real];
            e
        }
    }

    fn run(mut self, max_iter: usize) -> SimplexResult {
        // Phase 1
        let outcome1 = self.iterate(max_iter, true);
        if outcome1 == SolveOutcome::IterLimit {
            return self.finish(SolveOutcome::IterLimit);
        }
        let infeas: f64 = (self.n_real..self.n_total)
            .map(|j| self.values[j].abs())
            .sum();
        if infeas > self.tol.max(1e-9) {
            return self.finish(SolveOutcome::Infeasible);
        }

        // Pin artificials to zero and switch to the true cost.
        for j in self.n_real..self.n_total {
            self.lower[j] = 0.0;
            self.upper[j] = 0.0;
            if !matches!(self.state[j], VarState::Basic(_)) {
                self.state[j] = VarState::AtLower;
                self.values[j] = 0.0;
            }
        }
        self.cost = DVector::zeros(self.n_total);
        self.cost.rows_mut(0, self.n_real).copy_from(&self.lp.cost);

        let remaining = max_iter.saturating_sub(self.total_pivots).max(1);
        let outcome2 = self.iterate(remaining, false);
        self.finish(outcome2)
    }

    fn finish(self, outcome: SolveOutcome) -> SimplexResult {
        let mut cost2 = DVector::zeros(self.n_total);
        cost2.rows_mut(0, self.n_real).copy_from(&self.lp.cost);
        let cb = DVector::from_fn(self.m, |i, _| cost2[self.basis[i]]);
        let row_duals = (cb.transpose() * &self.binv).transpose();
        let objective = (0..self.n_real)
            .map(|j| self.lp.cost[j] * self.values[j])
            .sum();
        SimplexResult {
            outcome,
            values: self.values.rows(0, self.n_real).into_owned(),
            row_duals,
            objective,
            iterations: self.total_pivots,
        }
    }

    /// Core pivoting loop. Returns Optimal when no eligible entering column
    /// remains (for phase 1 this means phase-1-optimal, not LP-optimal).
    fn iterate(&mut self, max_iter: usize, phase1: bool) -> SolveOutcome {
        for _ in 0..max_iter {
            let duals = {
                let cb = DVector::from_fn(self.m, |i, _| self.cost[self.basis[i]]);
                (cb.transpose() * &self.binv).transpose()
            };

            let bland = self.total_pivots >= BLAND_THRESHOLD || self.degenerate_streak > 64;
            let mut entering: Option<(usize, f64, f64)> = None; // (j, |d|, direction)
            for j in 0..self.n_total {
                let dir = match self.state[j] {
                    VarState::Basic(_) => continue,
                    VarState::AtLower => 1.0,
                    VarState::AtUpper => -1.0,
                    VarState::FreeZero => 0.0,
                };
                if self.lower[j] == self.upper[j] {
                    continue; // fixed (pinned artificials)
                }
                let d = self.cost[j] - duals.dot(&self.column(j));
                let (eligible, step_dir) = if dir == 0.0 {
                    (d.abs() > self.tol, if d > 0.0 { -1.0 } else { 1.0 })
                } else if dir > 0.0 {
                    (d < -self.tol, 1.0)
                } else {
                    (d > self.tol, -1.0)
                };
                if !eligible {
                    continue;
                }
                if bland {
                    entering = Some((j, d.abs(), step_dir));
                    break;
                }
                match entering {
                    Some((_, best, _)) if d.abs() <= best => {}
                    _ => entering = Some((j, d.abs(), step_dir)),
                }
            }

            let Some((e, _, sigma)) = entering else {
                return SolveOutcome::Optimal;
            };

            let w = &self.binv * self.column(e);

            // Ratio test: how far can the entering variable move?
            let mut t_best = f64::INFINITY;
            let mut leaving: Option<(usize, bool)> = None; // (basis position, hits_upper)
            let flip = self.upper[e] - self.lower[e];
            if flip.is_finite() {
                t_best = flip;
            }
            for i in 0..self.m {
                let j = self.basis[i];
                let delta = sigma * w[i];
                if delta > PIVOT_TOL {
                    if self.lower[j].is_finite() {
                        let t = (self.values[j] - self.lower[j]) / delta;
                        if t < t_best - 1e-12
                            || (t < t_best + 1e-12
                                && leaving.map_or(false, |(r, _)| self.basis[r] > j))
                        {
                            t_best = t.max(0.0);
                            leaving = Some((i, false));
                        }
                    }
                } else if delta < -PIVOT_TOL && self.upper[j].is_finite() {
                    let t = (self.upper[j] - self.values[j]) / (-delta);
                    if t < t_best - 1e-12
                        || (t < t_best + 1e-12 && leaving.map_or(false, |(r, _)| self.basis[r] > j))
                    {
                        t_best = t.max(0.0);
                        leaving = Some((i, true));
                    }
                }
            }

            if t_best.is_infinite() {
                return if phase1 {
                    // Phase-1 objective is bounded below; only numerical
                    // trouble gets here. Treat as stalled.
                    SolveOutcome::IterLimit
                } else {
                    SolveOutcome::Unbounded
                };
            }

            self.degenerate_streak = if t_best <= 1e-12 {
                self.degenerate_streak + 1
            } else {
                0
            };

            // Apply the step.
            for i in 0..self.m {
                let j = self.basis[i];
                self.values[j] -= sigma * t_best * w[i];
            }
            self.values[e] += sigma * t_best;
            self.total_pivots += 1;

            match leaving {
                None => {
                    // Bound flip: entering stays nonbasic at its other bound.
                    self.state[e] = if sigma > 0.0 {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                }
                Some((r, hits_upper)) => {
                    let out = self.basis[r];
                    self.state[out] = if hits_upper {
                        self.values[out] = self.upper[out];
                        VarState::AtUpper
                    } else {
                        if self.lower[out].is_finite() {
                            self.values[out] = self.lower[out];
                        }
                        VarState::AtLower
                    };
                    self.basis[r] = e;
                    self.state[e] = VarState::Basic(r);
                    self.update_binv(r, &w);
                    self.pivots_since_refactor += 1;
                    if self.pivots_since_refactor >= REFACTOR_EVERY && !self.refactorize() {
                        return SolveOutcome::IterLimit;
                    }
                }
            }
        }
        SolveOutcome::IterLimit
    }

    fn update_binv(&mut self, r: usize, w: &DVector<f64>) {
        let wr = w[r];
        if wr.abs() < PIVOT_TOL {
            // Pivot too small for a stable eta update; rebuild from scratch.
            self.refactorize();
            return;
        }
        for c in 0..self.m {
            self.binv[(r, c)] /= wr;
        }
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let wi = w[i];
            if wi != 0.0 {
                for c in 0..self.m {
                    self.binv[(i, c)] -= wi * self.binv[(r, c)];
                }
            }
        }
    }

    fn refactorize(&mut self) -> bool {
        let mut b = DMatrix::zeros(self.m, self.m);
        for (i, &j) in self.basis.iter().enumerate() {
            b.set_column(i, &self.column(j));
        }
        match b.try_inverse() {
            Some(inv) => {
                self.binv = inv;
                self.pivots_since_refactor = 0;
                // Refresh basic values from the nonbasic ones.
                let mut rhs = self.lp.rhs.clone();
                for j in 0..self.n_total {
                    if !matches!(self.state[j], VarState::Basic(_)) && self.values[j] != 0.0 {
                        rhs -= self.column(j) * self.values[j];
                    }
                }
                let xb = &self.binv * rhs;
                for i in 0..self.m {
                    self.values[self.basis[i]] = xb[i];
                }
                true
            }
            None => false,
        }
    }
}
