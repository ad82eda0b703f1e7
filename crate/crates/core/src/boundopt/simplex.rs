//! Nelder-Mead simplex descent. Infeasible points evaluate to `+inf`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop once the largest vertex distance from the best vertex is at most this.
    pub diameter_tol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 2000,
            diameter_tol: 1e-9,
            step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub diameter: f64,
    pub converged: bool,
}

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn diameter(pts: &[Vec<f64>]) -> f64 {
    let best = &pts[0];
    pts[1..]
        .iter()
        .map(|p| p.iter().zip(best).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
}

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimizes `f` from `x0` with an axis-aligned initial simplex.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    nelder_mead_oriented(f, x0, &axes, opts)
}

/// Minimizes `f` from `x0`; the initial simplex edges run along `frame`.
///
/// Each initial vertex is `x0 +- step e_i`, shortened by halving until it is
/// finite; a direction with no finite neighbour keeps a degenerate vertex.
/// If `f(x0)` itself is not finite the result reports it unchanged.
pub fn nelder_mead_oriented<F>(mut f: F, x0: &[f64], frame: &[Vec<f64>], opts: &SimplexOptions) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(frame.len(), n, "frame needs one direction per coordinate");
    let f0 = f(x0);
    if !f0.is_finite() {
        return SimplexOutcome {
            x: x0.to_vec(),
            value: f0,
            iterations: 0,
            diameter: 0.0,
            converged: false,
        };
    }
    let mut pts = vec![x0.to_vec()];
    let mut vals = vec![f0];
    for e in frame {
        let mut placed = false;
        let mut h = opts.step;
        for _ in 0..40 {
            for sign in [1.0, -1.0] {
                let p: Vec<f64> = x0.iter().zip(e).map(|(x, d)| x + sign * h * d).collect();
                let v = f(&p);
                if v.is_finite() {
                    pts.push(p);
                    vals.push(v);
                    placed = true;
                    break;
                }
            }
            if placed {
                break;
            }
            h *= 0.5;
        }
        if !placed {
            pts.push(x0.to_vec());
            vals.push(f0);
        }
    }

    let mut iterations = 0;
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&k| pts[k].clone()).collect();
        vals = order.iter().map(|&k| vals[k]).collect();

        let d = diameter(&pts);
        if d <= opts.diameter_tol || iterations >= opts.max_iter {
            return SimplexOutcome {
                x: pts[0].clone(),
                value: vals[0],
                iterations,
                diameter: d,
                converged: d <= opts.diameter_tol,
            };
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let worst = pts[n].clone();
        let xr = affine(&centroid, &worst, -ALPHA);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = affine(&centroid, &worst, -GAMMA);
            let fe = f(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
            continue;
        }
        if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
            continue;
        }
        // contraction, outside if the reflection beat the worst vertex
        let (xc, fc, accept) = if fr < vals[n] {
            let xc = affine(&centroid, &xr, RHO);
            let fc = f(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = affine(&centroid, &worst, RHO);
            let fc = f(&xc);
            (xc, fc, fc < vals[n])
        };
        if accept {
            pts[n] = xc;
            vals[n] = fc;
            continue;
        }
        for k in 1..=n {
            pts[k] = affine(&pts[0], &pts[k], SHRINK);
            vals[k] = f(&pts[k]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2) + x[2] * x[2];
        let out = nelder_mead(f, &[0.0, 0.0, 0.0], &SimplexOptions::default());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] + 2.0).abs() < 1e-8);
        assert!(out.value < 1e-15);
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let out = nelder_mead(f, &[-1.2, 1.0], &SimplexOptions::default());
        assert!((out.x[0] - 1.0).abs() < 1e-7 && (out.x[1] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn respects_infeasible_region() {
        // minimum of x^2 + y^2 on x >= 1
        let f = |x: &[f64]| if x[0] < 1.0 { f64::INFINITY } else { x[0] * x[0] + x[1] * x[1] };
        let out = nelder_mead(f, &[1.0, 0.5], &SimplexOptions::default());
        assert!((out.value - 1.0).abs() < 1e-8, "{out:?}");
        assert!(out.x[0] >= 1.0);
        let stuck = nelder_mead(f, &[0.0, 0.0], &SimplexOptions::default());
        assert!(stuck.value.is_infinite() && stuck.iterations == 0);
    }
}
