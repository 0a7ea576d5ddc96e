//! Smith normal form of integer matrices, tracking the column transform.

use crate::error::{Error, Result};

pub struct Smith {
    /// Nonzero diagonal entries d1 | d2 | ..., positive.
    pub diagonal: Vec<i128>,
    /// Unimodular n×n matrix V with U·A·V = D for some unimodular U.
    pub v: Vec<Vec<i128>>,
}

fn overflow() -> Error {
    Error::TooLarge("integer overflow in Smith normal form".into())
}

fn axpy(dst: &mut [i128], src: &[i128], q: i128) -> Result<()> {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = d
            .checked_sub(q.checked_mul(s).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(())
}

fn col_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, q: i128) -> Result<()> {
    for row in a.iter_mut() {
        row[dst] = row[dst]
            .checked_sub(q.checked_mul(row[src]).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(())
}

/// Computes the Smith form of the m×n matrix `a` (rows are relations).
pub fn smith(mut a: Vec<Vec<i128>>, n: usize) -> Result<Smith> {
    let m = a.len();
    let mut v: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        swap_cols(&mut a, t, bj);
        swap_cols(&mut v, t, bj);
        loop {
            // move the smallest nonzero of row t / column t to the pivot
            let mut pos = (t, t);
            for i in t..m {
                if a[i][t] != 0 && a[i][t].abs() < a[pos.0][pos.1].abs() {
                    pos = (i, t);
                }
            }
            for j in t..n {
                if a[t][j] != 0 && a[t][j].abs() < a[pos.0][pos.1].abs() {
                    pos = (t, j);
                }
            }
            if pos.0 != t {
                a.swap(t, pos.0);
            }
            if pos.1 != t {
                swap_cols(&mut a, t, pos.1);
                swap_cols(&mut v, t, pos.1);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    let (top, bottom) = a.split_at_mut(i);
                    axpy(&mut bottom[0], &top[t], q)?;
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    col_axpy(&mut a, j, t, q)?;
                    col_axpy(&mut v, j, t, q)?;
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| a[i][t + 1..].iter().any(|&x| x % p != 0));
            match bad {
                Some(i) => {
                    let row = a[i].clone();
                    axpy(&mut a[t], &row, -1)?;
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        diagonal.push(a[t][t]);
        t += 1;
    }
    Ok(Smith { diagonal, v })
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}
