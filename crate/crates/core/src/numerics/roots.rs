//! Sign-change scanning with bisection refinement and pole exclusion.

use super::Tolerance;
use crate::error::{Error, Result};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `|f(x)|` at the refined point.
    pub residual: f64,
    /// `max(|f(a)|, |f(b)|)` over the original grid bracket.
    pub scale: f64,
    /// Width of the final bisection bracket.
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Advisory {
    /// Two accepted roots are closer than two grid cells; a finer grid may reveal more.
    GridTooCoarse { near: f64, separation: f64 },
    /// A sign change was refined but rejected because `|f|` did not drop below tolerance.
    RejectedBracket { near: f64, residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootScan {
    pub roots: Vec<Root>,
    pub advisories: Vec<Advisory>,
    /// Grid samples; `None` marks points masked near a pole or non-finite values.
    pub samples: Vec<(f64, Option<f64>)>,
}

fn refine<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> (f64, f64) {
    loop {
        let m = 0.5 * (a + b);
        if b - a <= 1e-12 * a.abs().max(b.abs()).max(1.0) || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return (m, 0.0);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // One safeguarded secant step inside the final bracket.
    let mid = 0.5 * (a + b);
    if fb != fa {
        let s = a - fa * (b - a) / (fb - fa);
        if s > a && s < b && f(s).abs() <= f(mid).abs() {
            return (s, b - a);
        }
    }
    (mid, b - a)
}

/// Finds roots of a real scan function on `[lo, hi]`.
///
/// Points within `window` of an entry of `poles` are masked, and brackets that
/// straddle a pole are skipped. Each sign change is refined by bisection to
/// width 1e-12 (relative for `|x| > 1`) followed by one secant step; a root is
/// accepted when `|f| <= accept.threshold(scale)`.
pub fn bracket_roots<F>(
    f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    poles: &[f64],
    window: f64,
    accept: Tolerance,
) -> Result<RootScan>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(lo < hi) || grid < 2 {
        return Err(Error::InvalidInput(format!("bad scan interval [{lo}, {hi}] with grid {grid}")));
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let inside: Vec<f64> = poles.iter().copied().filter(|p| *p > lo - window && *p < hi + window).collect();
    let mut xs: Vec<f64> = (0..grid).map(|k| lo + step * k as f64).collect();
    for &p in &inside {
        for x in [p - 2.0 * window, p + 2.0 * window] {
            if x > lo && x < hi {
                xs.push(x);
            }
        }
    }
    xs.retain(|x| inside.iter().all(|p| (x - p).abs() > window));
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup();

    let values: Vec<Option<f64>> = xs
        .par_iter()
        .map(|&x| {
            let v = f(x);
            v.is_finite().then_some(v)
        })
        .collect();

    let mut roots: Vec<Root> = Vec::new();
    let mut advisories = Vec::new();
    for k in 0..xs.len() {
        if values[k] == Some(0.0) {
            roots.push(Root { x: xs[k], residual: 0.0, scale: 0.0, width: 0.0 });
        }
        if k + 1 == xs.len() {
            break;
        }
        let (a, b) = (xs[k], xs[k + 1]);
        let (Some(fa), Some(fb)) = (values[k], values[k + 1]) else { continue };
        if fa == 0.0 || fb == 0.0 || (fa > 0.0) == (fb > 0.0) {
            continue;
        }
        if inside.iter().any(|p| *p > a && *p < b) {
            continue;
        }
        let (x, width) = refine(&f, a, b, fa, fb);
        let residual = f(x).abs();
        let scale = fa.abs().max(fb.abs());
        if residual <= accept.threshold(scale) {
            roots.push(Root { x, residual, scale, width });
        } else {
            advisories.push(Advisory::RejectedBracket { near: x, residual });
        }
    }
    for w in roots.windows(2) {
        let sep = w[1].x - w[0].x;
        if sep < 2.0 * step {
            advisories.push(Advisory::GridTooCoarse { near: w[0].x, separation: sep });
        }
    }
    Ok(RootScan { roots, advisories, samples: xs.into_iter().zip(values).collect() })
}
