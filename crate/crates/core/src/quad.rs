//! Adaptive Simpson quadrature.

use crate::{Error, Result};

/// Deepest bisection level for a single panel.
pub const MAX_DEPTH: u32 = 40;
/// Total panels examined before giving up.
const PANEL_BUDGET: usize = 1 << 22;
/// Initial uniform split; keeps a lucky three-point agreement on the whole
/// interval from ending the refinement early.
const INITIAL_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the per-panel error estimates `|S2 - S1| / 15`.
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Each panel compares Simpson's rule against the two half-panel rule and is
/// accepted when `|S2 - S1| <= 15 tol_panel`; the accepted value carries the
/// Richardson correction. Tolerance is split evenly between children.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Domain(format!("bad integration interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }

    let mut evaluations = 0;
    let mut eval = |x: f64, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Numerical(format!("integrand is not finite at {x}")))
        }
    };

    let h = (b - a) / INITIAL_PANELS as f64;
    let mut stack = Vec::with_capacity(2 * MAX_DEPTH as usize + INITIAL_PANELS);
    let mut left = a;
    let mut f_left = eval(a, &mut evaluations)?;
    for i in 0..INITIAL_PANELS {
        let right = if i + 1 == INITIAL_PANELS { b } else { a + (i + 1) as f64 * h };
        let mid = 0.5 * (left + right);
        let fm = eval(mid, &mut evaluations)?;
        let fr = eval(right, &mut evaluations)?;
        stack.push(Panel {
            a: left,
            b: right,
            fa: f_left,
            fm,
            fb: fr,
            whole: simpson(left, right, f_left, fm, fr),
            tol: tol / INITIAL_PANELS as f64,
            depth: 0,
        });
        left = right;
        f_left = fr;
    }

    // Panels are popped in interval order; summing in that order keeps the
    // result independent of how the stack grows.
    stack.reverse();
    let mut value = 0.0;
    let mut compensation = 0.0;
    let mut error_estimate = 0.0;
    let mut panels = 0;
    while let Some(p) = stack.pop() {
        panels += 1;
        if panels > PANEL_BUDGET {
            return Err(Error::Numerical("adaptive Simpson exhausted its panel budget".into()));
        }
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = eval(lm, &mut evaluations)?;
        let frm = eval(rm, &mut evaluations)?;
        let left_s = simpson(p.a, m, p.fa, flm, p.fm);
        let right_s = simpson(m, p.b, p.fm, frm, p.fb);
        let diff = left_s + right_s - p.whole;
        if diff.abs() <= 15.0 * p.tol || m <= p.a || p.b <= m {
            let accepted = left_s + right_s + diff / 15.0;
            // Kahan summation of accepted panels
            let y = accepted - compensation;
            let t = value + y;
            compensation = (t - value) - y;
            value = t;
            error_estimate += diff.abs() / 15.0;
            continue;
        }
        if p.depth + 1 > MAX_DEPTH {
            return Err(Error::Numerical(format!(
                "adaptive Simpson did not converge on [{}, {}] within depth {MAX_DEPTH}",
                p.a, p.b
            )));
        }
        let child_tol = 0.5 * p.tol;
        stack.push(Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right_s, tol: child_tol, depth: p.depth + 1 });
        stack.push(Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left_s, tol: child_tol, depth: p.depth + 1 });
    }
    Ok(QuadResult { value, error_estimate, evaluations })
}
