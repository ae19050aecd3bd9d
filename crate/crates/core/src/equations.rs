//! Linear equations attached to a set partition.
//!
//! Element `i` of block `B_j` contributes `M_i − M_{i−1}` to equation `E_j`,
//! with `M_0 ≡ M_n`. The equations sum to zero, so one is dropped (the one of
//! the largest block, ties to the highest label) and the rest are solved for
//! `r − 1` dependent variables using unimodular pivots only.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// `M_var = Σ free · M_k + Σ target · m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependentVar {
    /// 0-based variable index (`M_{var+1}`).
    pub var: usize,
    /// `(free variable index, coefficient)` pairs, coefficients nonzero.
    pub free_coeffs: Vec<(usize, i64)>,
    /// Coefficient of each equation's target value `m_j`, length `r`.
    pub target_coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEquations {
    pub n: usize,
    pub r: usize,
    /// `rows[j][i]`: coefficient of `M_{i+1}` in `E_j`.
    pub rows: Vec<Vec<i64>>,
    pub dropped: usize,
    pub dependent: Vec<DependentVar>,
    pub free: Vec<usize>,
}

pub fn build_equations(p: &Partition) -> Result<PartitionEquations> {
    let n = p.n();
    let r = p.num_blocks();
    let mut rows = vec![vec![0i64; n]; r];
    for i in 0..n {
        let j = p.rgs()[i] as usize;
        rows[j][i] += 1;
        rows[j][(i + n - 1) % n] -= 1;
    }
    let sizes = p.block_sizes();
    let dropped = (0..r).max_by_key(|&j| (sizes[j], j)).unwrap_or(0);

    // Augmented system [A | T]: A M = T m, T starts as the identity on kept rows.
    let kept: Vec<usize> = (0..r).filter(|&j| j != dropped).collect();
    let mut a: Vec<Vec<i64>> = kept.iter().map(|&j| rows[j].clone()).collect();
    let mut t: Vec<Vec<i64>> = kept
        .iter()
        .map(|&j| {
            let mut v = vec![0i64; r];
            v[j] = 1;
            v
        })
        .collect();
    let mut done = vec![false; a.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for _ in 0..a.len() {
        let active: Vec<usize> = (0..a.len()).filter(|&k| !done[k]).collect();
        if active.iter().all(|&k| a[k].iter().all(|&c| c == 0)) {
            return Err(Error::MalformedEquations(format!(
                "rank of the equations of {} is below r - 1",
                p.rgs_string()
            )));
        }
        let mut choice = None;
        'var: for v in 0..n {
            let holders: Vec<usize> = active.iter().copied().filter(|&k| a[k][v] != 0).collect();
            if holders.len() == 1 && a[holders[0]][v].abs() == 1 {
                choice = Some((holders[0], v));
                break 'var;
            }
        }
        if choice.is_none() {
            'any: for v in 0..n {
                for &k in &active {
                    if a[k][v].abs() == 1 {
                        choice = Some((k, v));
                        break 'any;
                    }
                }
            }
        }
        let (row, var) = choice.ok_or_else(|| Error::LemmaViolation { rgs: p.rgs_string() })?;
        if a[row][var] == -1 {
            a[row].iter_mut().for_each(|c| *c = -*c);
            t[row].iter_mut().for_each(|c| *c = -*c);
        }
        for k in 0..a.len() {
            if k == row || a[k][var] == 0 {
                continue;
            }
            let f = a[k][var];
            for i in 0..n {
                a[k][i] -= f * a[row][i];
            }
            for i in 0..r {
                t[k][i] -= f * t[row][i];
            }
        }
        done[row] = true;
        pivots.push((row, var));
    }
    let pivot_vars: Vec<usize> = pivots.iter().map(|&(_, v)| v).collect();
    let free: Vec<usize> = (0..n).filter(|v| !pivot_vars.contains(v)).collect();
    let mut dependent: Vec<DependentVar> = pivots
        .iter()
        .map(|&(row, var)| DependentVar {
            var,
            free_coeffs: free.iter().filter(|&&k| a[row][k] != 0).map(|&k| (k, -a[row][k])).collect(),
            target_coeffs: t[row].clone(),
        })
        .collect();
    dependent.sort_by_key(|d| d.var);
    Ok(PartitionEquations { n, r, rows, dropped, dependent, free })
}

impl PartitionEquations {
    /// `E_j` written as `Σ M_i = Σ M_{i-1}` after cancelling common variables.
    pub fn describe_row(&self, j: usize) -> String {
        let side = |sign: i64| {
            let terms: Vec<String> = (0..self.n)
                .filter(|&i| self.rows[j][i] * sign > 0)
                .flat_map(|i| std::iter::repeat_n(format!("M{}", i + 1), self.rows[j][i].unsigned_abs() as usize))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        format!("{} = {}", side(1), side(-1))
    }

    /// Dependent variable as a combination of free variables and targets.
    pub fn describe_dependent(&self, d: &DependentVar) -> String {
        let mut parts = Vec::new();
        for &(k, c) in &d.free_coeffs {
            parts.push((c, format!("M{}", k + 1)));
        }
        for (j, &c) in d.target_coeffs.iter().enumerate() {
            if c != 0 {
                parts.push((c, format!("m{}", j + 1)));
            }
        }
        let mut s = String::new();
        for (i, (c, name)) in parts.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            let mag = if c.abs() == 1 { String::new() } else { format!("{}", c.abs()) };
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&format!("{sign}{}{mag}{name}", if i > 0 { " " } else { "" }));
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("M{} = {}", d.var + 1, s)
    }
}

impl fmt::Display for PartitionEquations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.r {
            let mark = if j == self.dropped { " (dropped)" } else { "" };
            writeln!(f, "E{}: {}{}", j + 1, self.describe_row(j), mark)?;
        }
        for d in &self.dependent {
            writeln!(f, "{}", self.describe_dependent(d))?;
        }
        Ok(())
    }
}
