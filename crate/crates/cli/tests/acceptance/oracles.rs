//! Independent oracles for the acceptance suite. Everything here solves the
//! same problems as the library through a different arithmetic route:
//! exhaustive vertex enumeration for LPs, multi-round grid refinement for
//! the box max-min problem, and pivoted 2x2 elimination for the threshold
//! decomposition.

use cihybrid::lpsolve::LpProblem;

/// Enumerate every candidate vertex (each choice of `n` active planes among
/// rows and finite bounds), keep the feasible ones, and return the best
/// objective. `None` means no feasible vertex, i.e. the problem is
/// infeasible when the feasible set is pointed.
pub fn best_vertex_objective(p: &LpProblem<f64>) -> Option<f64> {
    let n = p.num_vars();
    let m = p.num_constraints();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        planes.push((p.row(i).to_vec(), p.rhs()[i]));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        if p.lower()[j].is_finite() {
            planes.push((e.clone(), p.lower()[j]));
        }
        if p.upper()[j].is_finite() {
            planes.push((e, p.upper()[j]));
        }
    }

    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..n).collect();
    if planes.len() < n {
        return None;
    }
    loop {
        if let Some(x) = solve_square(&planes, &combo, n) {
            if feasible(p, &x) {
                let obj: f64 = p.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
        if !advance(&mut combo, planes.len(), n) {
            return best;
        }
    }
}

fn advance(combo: &mut [usize], pool: usize, n: usize) -> bool {
    let mut i = n;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if combo[i] != i + pool - n {
            combo[i] += 1;
            for j in (i + 1)..n {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
}

fn solve_square(planes: &[(Vec<f64>, f64)], combo: &[usize], n: usize) -> Option<Vec<f64>> {
    let mut a = vec![0.0f64; n * n];
    let mut b = vec![0.0f64; n];
    for (r, &ci) in combo.iter().enumerate() {
        a[r * n..(r + 1) * n].copy_from_slice(&planes[ci].0);
        b[r] = planes[ci].1;
    }
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if a[r * n + k].abs() > a[piv * n + k].abs() {
                piv = r;
            }
        }
        if a[piv * n + k].abs() < 1e-9 {
            return None;
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            b.swap(k, piv);
        }
        for r in (k + 1)..n {
            let f = a[r * n + k] / a[k * n + k];
            for c in k..n {
                a[r * n + c] -= f * a[k * n + c];
            }
            b[r] -= f * b[k];
        }
    }
    let mut x = vec![0.0f64; n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= a[r * n + c] * x[c];
        }
        x[r] = acc / a[r * n + r];
    }
    Some(x)
}

fn feasible(p: &LpProblem<f64>, x: &[f64]) -> bool {
    const TOL: f64 = 1e-7;
    for i in 0..p.num_constraints() {
        let ax: f64 = p.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
        if ax > p.rhs()[i] + TOL {
            return false;
        }
    }
    for j in 0..p.num_vars() {
        if x[j] < p.lower()[j] - TOL || x[j] > p.upper()[j] + TOL {
            return false;
        }
    }
    true
}

/// Grid-refinement lower bound for `max_x min_i (rows . x)` over the box
/// `[-half, half]^dim`: evaluate on a coarse grid, then repeatedly re-grid
/// around the incumbent with a shrinking window. Every evaluated point is
/// feasible, so the returned value is always achievable.
pub fn grid_refine_maxmin(rows: &[Vec<f64>], half: f64, dim: usize) -> f64 {
    const POINTS: usize = 5;
    const ROUNDS: usize = 28;
    let mut center = vec![0.0f64; dim];
    let mut radius = half;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_point = center.clone();

    for _round in 0..ROUNDS {
        let mut idx = vec![0usize; dim];
        loop {
            let mut x = vec![0.0f64; dim];
            for d in 0..dim {
                let frac = idx[d] as f64 / (POINTS - 1) as f64;
                x[d] = (center[d] - radius + 2.0 * radius * frac).clamp(-half, half);
            }
            let val = rows
                .iter()
                .map(|row| row.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if val > best_val {
                best_val = val;
                best_point = x;
            }
            // Odometer over the grid.
            let mut d = 0;
            loop {
                if d == dim {
                    break;
                }
                idx[d] += 1;
                if idx[d] < POINTS {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == dim {
                break;
            }
        }
        center = best_point.clone();
        radius *= 0.5;
    }
    best_val
}

/// Solve `rx = a * u + b * v` over the reals by pivoted elimination; the
/// independent route for the threshold-margin checks.
pub fn solve_threshold_2x2(
    u: (f64, f64),
    v: (f64, f64),
    rx: (f64, f64),
) -> (f64, f64) {
    let mut m = [[u.0, v.0, rx.0], [u.1, v.1, rx.1]];
    if m[1][0].abs() > m[0][0].abs() {
        m.swap(0, 1);
    }
    let f = m[1][0] / m[0][0];
    for col in 0..3 {
        m[1][col] -= f * m[0][col];
    }
    let b = m[1][2] / m[1][1];
    let a = (m[0][2] - m[0][1] * b) / m[0][0];
    (a, b)
}

/// One-sided two-proportion z statistic for `p2 > p1` (positive favors the
/// first argument being the smaller rate).
pub fn z_score(err1: u64, n1: u64, err2: u64, n2: u64) -> f64 {
    let p1 = err1 as f64 / n1 as f64;
    let p2 = err2 as f64 / n2 as f64;
    let var = p1 * (1.0 - p1) / n1 as f64 + p2 * (1.0 - p2) / n2 as f64;
    if var == 0.0 {
        return 0.0;
    }
    (p2 - p1) / var.sqrt()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
