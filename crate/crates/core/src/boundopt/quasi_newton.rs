//! BFGS with a backtracking (Armijo) line search.

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNewtonOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

const STALL_LIMIT: usize = 5;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Minimizes `f`, where `fg(x)` returns the value and gradient.
///
/// Stops when the gradient's max-norm drops below `grad_tol`, the line search
/// cannot make progress, the value stalls at roundoff level for several
/// iterations, or after `max_iter` iterations.
pub fn bfgs<F>(mut fg: F, x0: &[f64], max_iter: usize, grad_tol: f64) -> QuasiNewtonOutcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let (mut fx, mut g) = fg(&x);
    // inverse Hessian approximation, row-major
    let mut h = vec![0.0; n * n];
    let reset = |h: &mut Vec<f64>| {
        h.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..n {
            h[i * n + i] = 1.0;
        }
    };
    reset(&mut h);
    let mut iterations = 0;
    let mut fresh = true;
    let mut stalled = 0;
    while iterations < max_iter && fx.is_finite() && inf_norm(&g) > grad_tol {
        iterations += 1;
        let p: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &g)).collect();
        let slope = dot(&p, &g);
        if slope >= 0.0 {
            if fresh {
                break;
            }
            reset(&mut h);
            fresh = true;
            continue;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + step * b).collect();
            let (fnew, gnew) = fg(&xn);
            if fnew.is_finite() && fnew <= fx + 1e-4 * step * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            if fresh {
                break;
            }
            reset(&mut h);
            fresh = true;
            continue;
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if fresh {
                // scale the initial guess to the observed curvature
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let r = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += (1.0 + yhy * r) * r * s[i] * s[j] - r * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
            fresh = false;
        }
        if fx - fnew <= 4.0 * f64::EPSILON * fx.abs().max(1.0) {
            stalled += 1;
            if stalled >= STALL_LIMIT {
                x = xn;
                fx = fnew;
                g = gnew;
                break;
            }
        } else {
            stalled = 0;
        }
        x = xn;
        fx = fnew;
        g = gnew;
    }
    QuasiNewtonOutcome {
        grad_norm: inf_norm(&g),
        x,
        value: fx,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let fg = |x: &[f64]| {
            let f = 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
            let g = vec![
                -400.0 * x[0] * (x[1] - x[0] * x[0]) - 2.0 * (1.0 - x[0]),
                200.0 * (x[1] - x[0] * x[0]),
            ];
            (f, g)
        };
        let out = bfgs(fg, &[-1.2, 1.0], 500, 1e-10);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] - 1.0).abs() < 1e-8, "{out:?}");
    }

    #[test]
    fn stops_at_stationary_start() {
        let out = bfgs(|x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]), &[0.0], 10, 1e-12);
        assert_eq!(out.iterations, 0);
    }
}
