//! Dense linear programs over exact rationals.
//!
//! Problems have the form `opt c.x + offset` subject to `A x <= b` and
//! `lo <= x <= hi` with finite bounds on every variable. They are solved by a
//! two-phase bounded-variable primal simplex using Bland's rule for both the
//! entering and the leaving choice, so the result is deterministic and the
//! method terminates without perturbation.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub sense: Sense,
    pub cost: Vec<Rational>,
    /// Constant added to the objective.
    pub offset: Rational,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub upper: Vec<Rational>,
}

impl LpProblem {
    pub fn new(
        sense: Sense,
        cost: Vec<Rational>,
        lower: Vec<Rational>,
        upper: Vec<Rational>,
    ) -> Self {
        LpProblem {
            sense,
            cost,
            offset: Rational::zero(),
            rows: Vec::new(),
            rhs: Vec::new(),
            lower,
            upper,
        }
    }

    /// Every variable in `[0, 1]`.
    pub fn unit_box(sense: Sense, cost: Vec<Rational>) -> Self {
        let n = cost.len();
        Self::new(
            sense,
            cost,
            vec![Rational::zero(); n],
            vec![Rational::one(); n],
        )
    }

    pub fn with_offset(mut self, offset: Rational) -> Self {
        self.offset = offset;
        self
    }

    /// Adds `coeffs . x <= rhs`.
    pub fn add_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    fn check(&self) -> Result<()> {
        let n = self.cost.len();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Dimension(format!(
                "{n} costs, {} lower bounds, {} upper bounds",
                self.lower.len(),
                self.upper.len()
            )));
        }
        if self.rows.len() != self.rhs.len() {
            return Err(Error::Dimension(format!(
                "{} constraint rows, {} right-hand sides",
                self.rows.len(),
                self.rhs.len()
            )));
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} coefficients, expected {n}",
                self.rows[i].len()
            )));
        }
        Ok(())
    }

    /// Objective value of `x` including the offset.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.cost
            .iter()
            .zip(x)
            .fold(self.offset.clone(), |acc, (c, v)| acc + c * v)
    }

    /// Exact feasibility test.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().zip(&self.lower).all(|(v, lo)| v >= lo)
            && x.iter().zip(&self.upper).all(|(v, hi)| v <= hi)
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| {
                row.iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, v)| acc + a * v)
                    <= *b
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Empty when infeasible.
    pub x: Vec<Rational>,
    pub value: Rational,
}

struct Tableau {
    coef: Vec<Vec<Rational>>,
    basic: Vec<usize>,
    value: Vec<Rational>,
    upper: Vec<Option<Rational>>,
    at_upper: Vec<bool>,
    frozen: Vec<bool>,
}

enum Step {
    Optimal,
    Moved,
}

impl Tableau {
    fn is_basic(&self) -> Vec<bool> {
        let mut b = vec![false; self.upper.len()];
        for &v in &self.basic {
            b[v] = true;
        }
        b
    }

    fn step(&mut self, cost: &[Rational]) -> Result<Step> {
        let cols = self.upper.len();
        let basic_mask = self.is_basic();

        // Bland: lowest-index improving column
        let mut entering = None;
        for j in 0..cols {
            if basic_mask[j] || self.frozen[j] {
                continue;
            }
            let mut d = cost[j].clone();
            for (row, &bv) in self.coef.iter().zip(&self.basic) {
                if !row[j].is_zero() && !cost[bv].is_zero() {
                    d -= &cost[bv] * &row[j];
                }
            }
            let improving = if self.at_upper[j] {
                d.is_positive()
            } else {
                d.is_negative()
            };
            if improving {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return Ok(Step::Optimal);
        };
        let increasing = !self.at_upper[j];

        // ratio test; candidates are (step, variable index, row or None for a bound flip)
        let mut best: Option<(Rational, usize, Option<usize>)> = None;
        let mut consider = |t: Rational, var: usize, row: Option<usize>| {
            let better = match &best {
                None => true,
                Some((bt, bv, _)) => t < *bt || (t == *bt && var < *bv),
            };
            if better {
                best = Some((t, var, row));
            }
        };
        if let Some(u) = &self.upper[j] {
            consider(u.clone(), j, None);
        }
        for (i, row) in self.coef.iter().enumerate() {
            let a = &row[j];
            if a.is_zero() {
                continue;
            }
            // basic value moves by -rate * t
            let rate = if increasing { a.clone() } else { -a };
            let bv = self.basic[i];
            if rate.is_positive() {
                consider(&self.value[i] / &rate, bv, Some(i));
            } else if let Some(u) = &self.upper[bv] {
                consider((u - &self.value[i]) / -&rate, bv, Some(i));
            }
        }
        let Some((t, _, row)) = best else {
            return Err(Error::Lp("unbounded direction in a boxed problem".into()));
        };

        for (i, r) in self.coef.iter().enumerate() {
            if !r[j].is_zero() {
                let delta = &r[j] * &t;
                if increasing {
                    self.value[i] -= delta;
                } else {
                    self.value[i] += delta;
                }
            }
        }

        match row {
            None => self.at_upper[j] = !self.at_upper[j],
            Some(r) => {
                let leaving = self.basic[r];
                self.at_upper[leaving] = match &self.upper[leaving] {
                    Some(u) => self.value[r] == *u && !u.is_zero(),
                    None => false,
                };
                let entering_value = if increasing {
                    t
                } else {
                    self.upper[j]
                        .clone()
                        .expect("variable at upper bound has one")
                        - t
                };
                self.pivot(r, j);
                self.basic[r] = j;
                self.value[r] = entering_value;
                self.at_upper[j] = false;
            }
        }
        Ok(Step::Moved)
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.coef[r][j].clone();
        for v in self.coef[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.coef[r].clone();
        for (i, row) in self.coef.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
    }

    fn optimize(&mut self, cost: &[Rational]) -> Result<()> {
        while let Step::Moved = self.step(cost)? {}
        Ok(())
    }

    fn column_value(&self, col: usize) -> Rational {
        if let Some(i) = self.basic.iter().position(|&b| b == col) {
            return self.value[i].clone();
        }
        if self.at_upper[col] {
            self.upper[col].clone().unwrap_or_else(Rational::zero)
        } else {
            Rational::zero()
        }
    }
}

/// Solves `p` exactly. Infeasibility is reported through the status.
pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    p.check()?;
    let n = p.num_vars();
    let rows = p.rows.len();
    let infeasible = || LpSolution {
        status: LpStatus::Infeasible,
        x: Vec::new(),
        value: Rational::zero(),
    };

    if p.lower.iter().zip(&p.upper).any(|(lo, hi)| lo > hi) {
        return Ok(infeasible());
    }

    // shift x = lo + y with 0 <= y <= hi - lo
    let rhs: Vec<Rational> = p
        .rows
        .iter()
        .zip(&p.rhs)
        .map(|(row, b)| {
            row.iter()
                .zip(&p.lower)
                .fold(b.clone(), |acc, (a, lo)| acc - a * lo)
        })
        .collect();
    let negative: Vec<usize> = (0..rows).filter(|&i| rhs[i].is_negative()).collect();
    let cols = n + rows + negative.len();

    let mut coef = vec![vec![Rational::zero(); cols]; rows];
    let mut basic = vec![0; rows];
    let mut value = vec![Rational::zero(); rows];
    for i in 0..rows {
        let flip = rhs[i].is_negative();
        for j in 0..n {
            coef[i][j] = if flip {
                -&p.rows[i][j]
            } else {
                p.rows[i][j].clone()
            };
        }
        coef[i][n + i] = if flip {
            -Rational::one()
        } else {
            Rational::one()
        };
        if flip {
            let a = n + rows + negative.iter().position(|&k| k == i).unwrap();
            coef[i][a] = Rational::one();
            basic[i] = a;
            value[i] = -&rhs[i];
        } else {
            basic[i] = n + i;
            value[i] = rhs[i].clone();
        }
    }
    let mut upper: Vec<Option<Rational>> = vec![None; cols];
    for j in 0..n {
        upper[j] = Some(&p.upper[j] - &p.lower[j]);
    }
    let mut tab = Tableau {
        coef,
        basic,
        value,
        upper,
        at_upper: vec![false; cols],
        frozen: vec![false; cols],
    };

    if !negative.is_empty() {
        let mut phase1 = vec![Rational::zero(); cols];
        for c in phase1.iter_mut().skip(n + rows) {
            *c = Rational::one();
        }
        tab.optimize(&phase1)?;
        let residual = (n + rows..cols).fold(Rational::zero(), |acc, c| acc + tab.column_value(c));
        if residual.is_positive() {
            return Ok(infeasible());
        }
        for c in n + rows..cols {
            tab.upper[c] = Some(Rational::zero());
            tab.at_upper[c] = false;
            tab.frozen[c] = true;
        }
    }

    let mut cost = vec![Rational::zero(); cols];
    for j in 0..n {
        cost[j] = match p.sense {
            Sense::Minimize => p.cost[j].clone(),
            Sense::Maximize => -&p.cost[j],
        };
    }
    tab.optimize(&cost)?;

    let x: Vec<Rational> = (0..n).map(|j| &p.lower[j] + tab.column_value(j)).collect();
    let value = p.evaluate(&x);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        value,
    })
}
