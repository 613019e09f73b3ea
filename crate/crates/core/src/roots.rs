//! Polynomial roots from the eigenvalues of a balanced companion matrix.
//!
//! Coefficient slices are in ascending order: `a[j]` multiplies `q^j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn eval(a: &[Complex64], q: Complex64) -> Complex64 {
    a.iter().rev().fold(Complex64::ZERO, |acc, c| acc * q + c)
}

/// Coefficients of the `order`-th derivative.
pub fn derivative(a: &[Complex64], order: usize) -> Vec<Complex64> {
    if order >= a.len() {
        return vec![Complex64::ZERO];
    }
    (order..a.len())
        .map(|j| {
            let falling: f64 = (0..order).map(|t| (j - t) as f64).product();
            a[j] * falling
        })
        .collect()
}

/// `Σ |a_j| |q|^j`, the magnitude scale of a Horner evaluation at `q`.
pub fn eval_scale(a: &[Complex64], q: Complex64) -> f64 {
    let r = q.norm();
    a.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// `|P^{(j)}(q)| |q|^j / (j! Σ|a_k||q|^k)`: the size of the `j`-th Taylor
/// term at `q` relative to the evaluation scale. Near zero for `j` below
/// the multiplicity of a root at `q`.
pub fn normalized_derivative(a: &[Complex64], q: Complex64, order: usize) -> f64 {
    let scale = eval_scale(a, q);
    if scale == 0.0 {
        return 0.0;
    }
    let fact: f64 = (1..=order).map(|t| t as f64).product();
    eval(&derivative(a, order), q).norm() * q.norm().powi(order as i32) / (fact * scale)
}

/// All roots of a polynomial with nonzero leading coefficient.
pub fn roots(a: &[Complex64]) -> Result<Vec<Complex64>> {
    let a = trim_leading(a);
    let n = a.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-a[0] / a[1]]);
    }
    let lead = a[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::ONE;
    }
    for i in 0..n {
        m[(i, n - 1)] = -a[i] / lead;
    }
    balance(&mut m);
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000).ok_or(Error::RootFinding)?;
    let eig = schur.eigenvalues().ok_or(Error::RootFinding)?;
    Ok(eig.iter().copied().collect())
}

fn trim_leading(a: &[Complex64]) -> &[Complex64] {
    let len = a
        .iter()
        .rposition(|c| *c != Complex64::ZERO)
        .map_or(0, |i| i + 1);
    &a[..len]
}

/// Diagonal similarity scaling by powers of two until row and column norms
/// are comparable (Parlett–Reinsch).
fn balance(m: &mut DMatrix<Complex64>) {
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Newton iteration on `P^{(order)}`, returning the iterate with the smallest
/// normalized residual.
pub fn polish(a: &[Complex64], start: Complex64, order: usize, steps: usize) -> Complex64 {
    let p = derivative(a, order);
    let dp = derivative(&p, 1);
    let residual = |q: Complex64| {
        let s = eval_scale(&p, q);
        if s == 0.0 {
            0.0
        } else {
            eval(&p, q).norm() / s
        }
    };
    let mut best = start;
    let mut best_res = residual(start);
    let mut q = start;
    for _ in 0..steps {
        let d = eval(&dp, q);
        if d == Complex64::ZERO {
            break;
        }
        q -= eval(&p, q) / d;
        if !(q.re.is_finite() && q.im.is_finite()) {
            break;
        }
        let res = residual(q);
        if res < best_res {
            best = q;
            best_res = res;
        }
    }
    best
}
