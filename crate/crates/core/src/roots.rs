//! Bracketing root finders shared by the spectrum and engine solvers.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("endpoints do not bracket a root: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method: inverse quadratic interpolation and secant steps,
/// falling back to bisection whenever the interpolated step leaves the
/// bracket or converges too slowly.
///
/// Terminates when `|f(x)| <= f_tol` or the bracket shrinks below `x_tol`.
pub fn brent<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    x_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> Result<Root, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(RootError::NotBracketed { lo, hi, f_lo: fa, f_hi: fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if fb.abs() <= f_tol || m.abs() <= tol {
            return Ok(Root { x: b, fx: fb, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(RootError::NoConvergence(max_iter))
}

/// Samples `f` on a uniform grid over `[lo, hi]` and returns every adjacent
/// sample pair with a strict sign change. Non-finite samples break the scan:
/// no pair straddles them.
pub fn scan_sign_changes<F>(mut f: F, lo: f64, hi: f64, samples: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let samples = samples.max(1);
    let step = (hi - lo) / samples as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=samples {
        let x = if i == samples { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if let Some((xp, fp)) = prev {
            if fp != 0.0 && fx != 0.0 && fp.signum() != fx.signum() {
                out.push((xp, x));
            } else if fx == 0.0 {
                out.push((x, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}
