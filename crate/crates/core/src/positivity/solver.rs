//! Exact nonnegative integer feasibility for `sum_c lambda_c * column_c = target`.
//!
//! Coefficient extraction turns the polynomial identity into a linear system
//! `A x = b` over the integers. Gaussian elimination over the rationals
//! decides affine solvability and drops redundant rows; a phase-one simplex
//! with Bland's rule decides rational feasibility with `x >= 0`; depth-first
//! branch and bound on the lowest fractional index, floor branch first,
//! closes the integrality gap.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

const LOG_TAIL: usize = 64;

/// Finds `lambda` in `N^k` with `sum lambda_c * columns[c] = target`, or
/// `None` if there is none.
pub fn solve_nonneg_integer(columns: &[Polynomial], target: &Polynomial) -> Result<Option<Vec<BigInt>>> {
    solve_with_budget(columns, target, DEFAULT_NODE_BUDGET)
}

pub fn solve_with_budget(
    columns: &[Polynomial],
    target: &Polynomial,
    budget: usize,
) -> Result<Option<Vec<BigInt>>> {
    let monomials: BTreeSet<&Monomial> = columns
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|p| p.terms().map(|(m, _)| m))
        .collect();
    let row_of: BTreeMap<&Monomial, usize> = monomials.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let mut a = vec![vec![BigRational::zero(); columns.len()]; monomials.len()];
    for (c, col) in columns.iter().enumerate() {
        for (m, coeff) in col.terms() {
            a[row_of[m]][c] = BigRational::from_integer(coeff.clone());
        }
    }
    let mut b = vec![BigRational::zero(); monomials.len()];
    for (m, coeff) in target.terms() {
        b[row_of[m]] = BigRational::from_integer(coeff.clone());
    }
    match row_reduce(a, b) {
        Some((a, b)) => branch_and_bound(&a, &b, columns.len(), budget),
        None => Ok(None),
    }
}

/// Reduced row echelon form of `[a | b]` with zero rows removed, or `None`
/// if the system is inconsistent.
fn row_reduce(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        b.swap(rank, p);
        let inv = a[rank][c].recip();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        b[rank] *= &inv;
        for r in 0..a.len() {
            if r == rank || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            let (pivot_row, row) = pair_mut(&mut a, rank, r);
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            let delta = &f * &b[rank];
            b[r] -= delta;
        }
        rank += 1;
    }
    if b[rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    a.truncate(rank);
    b.truncate(rank);
    Some((a, b))
}

fn pair_mut<T>(v: &mut [T], keep: usize, change: usize) -> (&T, &mut T) {
    if keep < change {
        let (lo, hi) = v.split_at_mut(change);
        (&lo[keep], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(keep);
        (&hi[0], &mut lo[change])
    }
}

#[derive(Clone, Debug)]
struct Node {
    lower: Vec<BigInt>,
    upper: Vec<Option<BigInt>>,
}

fn branch_and_bound(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    n: usize,
    budget: usize,
) -> Result<Option<Vec<BigInt>>> {
    let mut stack = vec![Node { lower: vec![BigInt::zero(); n], upper: vec![None; n] }];
    let mut log: Vec<String> = Vec::new();
    let mut nodes = 0usize;
    while let Some(node) = stack.pop() {
        nodes += 1;
        if nodes > budget {
            let skip = log.len().saturating_sub(LOG_TAIL);
            return Err(Error::BudgetExceeded { budget, log: log.split_off(skip) });
        }
        let Some(x) = relaxation(a, b, &node) else {
            log.push(format!("node {nodes}: relaxation infeasible"));
            continue;
        };
        let Some(c) = x.iter().position(|v| !v.is_integer()) else {
            return Ok(Some(x.into_iter().map(|v| v.to_integer()).collect()));
        };
        let floor = x[c].floor().to_integer();
        log.push(format!("node {nodes}: x{c} = {} branches at {floor}", x[c]));
        let mut up = node.clone();
        up.lower[c] = &floor + 1;
        let mut down = node;
        down.upper[c] = Some(floor);
        stack.push(up);
        stack.push(down);
    }
    Ok(None)
}

/// A point of `{x : a x = b, lower <= x <= upper}`, or `None` if empty.
fn relaxation(a: &[Vec<BigRational>], b: &[BigRational], node: &Node) -> Option<Vec<BigRational>> {
    let n = node.lower.len();
    let bounded: Vec<(usize, BigInt)> = node
        .upper
        .iter()
        .enumerate()
        .filter_map(|(c, u)| u.as_ref().map(|u| (c, u - &node.lower[c])))
        .collect();
    if bounded.iter().any(|(_, width)| width.is_negative()) {
        return None;
    }
    let lower: Vec<BigRational> = node.lower.iter().cloned().map(BigRational::from_integer).collect();
    let width = n + bounded.len();
    let mut rows = Vec::with_capacity(a.len() + bounded.len());
    let mut rhs = Vec::with_capacity(a.len() + bounded.len());
    for (row, bi) in a.iter().zip(b) {
        let shift: BigRational = row.iter().zip(&lower).filter(|(x, _)| !x.is_zero()).map(|(x, l)| x * l).sum();
        let mut full = row.clone();
        full.resize(width, BigRational::zero());
        rows.push(full);
        rhs.push(bi - shift);
    }
    for (s, (c, w)) in bounded.into_iter().enumerate() {
        let mut full = vec![BigRational::zero(); width];
        full[c] = BigRational::one();
        full[n + s] = BigRational::one();
        rows.push(full);
        rhs.push(BigRational::from_integer(w));
    }
    let shifted = phase_one(rows, rhs, width)?;
    Some(shifted.into_iter().take(n).zip(lower).map(|(x, l)| x + l).collect())
}

/// Phase one of the simplex method with Bland's rule; returns a feasible
/// point of `{x >= 0 : rows x = rhs}` if one exists.
fn phase_one(rows: Vec<Vec<BigRational>>, rhs: Vec<BigRational>, nvars: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let total = nvars + m;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, (mut row, r)) in rows.into_iter().zip(rhs).enumerate() {
        let negate = r.is_negative();
        if negate {
            row.iter_mut().for_each(|x| *x = -&*x);
        }
        row.resize(total, BigRational::zero());
        row[nvars + i] = BigRational::one();
        row.push(if negate { -r } else { r });
        tab.push(row);
    }
    let mut cost = vec![BigRational::zero(); total + 1];
    for row in &tab {
        for (j, x) in row.iter().enumerate() {
            if (j < nvars || j == total) && !x.is_zero() {
                cost[j] -= x;
            }
        }
    }
    tab.push(cost);
    let mut basis: Vec<usize> = (nvars..total).collect();
    loop {
        if tab[m][total].is_zero() {
            break;
        }
        let Some(enter) = (0..total).find(|&j| tab[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][total] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pivot, _) = leave.expect("phase one objective is bounded below");
        pivot_on(&mut tab, pivot, enter);
        basis[pivot] = enter;
    }
    if !tab[m][total].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); nvars];
    for (i, &j) in basis.iter().enumerate() {
        if j < nvars {
            x[j] = tab[i][total].clone();
        }
    }
    Some(x)
}

fn pivot_on(tab: &mut [Vec<BigRational>], pivot: usize, col: usize) {
    let inv = tab[pivot][col].recip();
    for x in tab[pivot].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    for r in 0..tab.len() {
        if r == pivot || tab[r][col].is_zero() {
            continue;
        }
        let f = tab[r][col].clone();
        let (pivot_row, row) = pair_mut(tab, pivot, r);
        for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_systems() {
        assert_eq!(solve_nonneg_integer(&[p("t1 - y1")], &p("t1 - y1")).unwrap(), Some(ints(&[1])));
        assert_eq!(
            solve_nonneg_integer(&[p("t1 - y1"), p("t2 - y1")], &p("t1 + t2 - 2*y1")).unwrap(),
            Some(ints(&[1, 1]))
        );
        assert_eq!(solve_nonneg_integer(&[p("t1 - y1")], &p("y1 - t1")).unwrap(), None);
        assert_eq!(solve_nonneg_integer(&[], &Polynomial::zero()).unwrap(), Some(vec![]));
        assert_eq!(solve_nonneg_integer(&[], &p("1")).unwrap(), None);
    }

    #[test]
    fn integrality_needs_branching() {
        // 2a + 2b = 3 has rational but no integer solutions.
        assert_eq!(solve_nonneg_integer(&[p("2*t1"), p("2*t1")], &p("3*t1")).unwrap(), None);
        // a + b = 1 and a - b = 0 force a = b = 1/2.
        assert_eq!(solve_nonneg_integer(&[p("t1 + t2"), p("t1 - t2")], &p("t1")).unwrap(), None);
        // 2a + 3b = 7 needs a = 2, b = 1.
        let lambda = solve_nonneg_integer(&[p("2*t1"), p("3*t1")], &p("7*t1")).unwrap().unwrap();
        assert_eq!(&lambda[0] * 2 + &lambda[1] * 3, BigInt::from(7));
    }

    #[test]
    fn budget_is_reported() {
        let err = solve_with_budget(&[p("2*t1"), p("2*t1")], &p("3*t1"), 1).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 1, .. }));
    }

    #[test]
    fn deterministic() {
        let cols = [p("t1 - y1"), p("t2 - y1"), p("t1 - y2"), p("t2 - y2")];
        let target = p("t1 + t2 - y1 - y2");
        let first = solve_nonneg_integer(&cols, &target).unwrap();
        for _ in 0..5 {
            assert_eq!(solve_nonneg_integer(&cols, &target).unwrap(), first);
        }
    }
}
