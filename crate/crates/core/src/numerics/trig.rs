//! Complex trigonometric functions evaluated in overflow-free form.
//!
//! `cot`, `csc`, `tan` and `sec` are written through `q = exp(2iu)` on the
//! half plane where `|q| <= 1`, so arguments with large imaginary part land on
//! their limits (`cot -> -i`, `csc -> 0`, ...) instead of overflowing.

use super::{Complex64, I};

fn upper(u: Complex64) -> bool {
    u.im >= 0.0
}

/// `exp(w) - 1` without cancellation near `w = 0`.
fn expm1(w: Complex64) -> Complex64 {
    let half = (w.im / 2.0).sin();
    let e = w.re.exp();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * half * half, e * w.im.sin())
}

pub fn cot(u: Complex64) -> Complex64 {
    if upper(u) {
        let qm1 = expm1(2.0 * I * u);
        I * (qm1 + 2.0) / qm1
    } else {
        -cot(-u)
    }
}

pub fn csc(u: Complex64) -> Complex64 {
    if upper(u) {
        let e = (I * u).exp();
        2.0 * I * e / expm1(2.0 * I * u)
    } else {
        -csc(-u)
    }
}

pub fn tan(u: Complex64) -> Complex64 {
    if upper(u) {
        let q = (2.0 * I * u).exp();
        I * (1.0 - q) / (1.0 + q)
    } else {
        -tan(-u)
    }
}

pub fn sec(u: Complex64) -> Complex64 {
    if upper(u) {
        let e = (I * u).exp();
        2.0 * e / (e * e + 1.0)
    } else {
        sec(-u)
    }
}

/// `sin(u) / u`, entire.
pub fn sinc(u: Complex64) -> Complex64 {
    if u.norm() < 1e-3 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// `tan(d k) / k` as a function of `s = k^2`; even in `k`, so branch free.
pub fn tan_ratio(s: Complex64, d: f64) -> Complex64 {
    let u = s * d * d;
    if u.norm() < 1e-3 {
        d * (1.0 + u / 3.0 + u * u * (2.0 / 15.0) + u * u * u * (17.0 / 315.0) + u * u * u * u * (62.0 / 2835.0))
    } else {
        let k = s.sqrt();
        tan(k * d) / k
    }
}

/// Derivative of [`tan_ratio`] with respect to `s`.
pub fn tan_ratio_ds(s: Complex64, d: f64) -> Complex64 {
    let u = s * d * d;
    if u.norm() < 1e-3 {
        d * d * d * (1.0 / 3.0 + u * (4.0 / 15.0) + u * u * (17.0 / 105.0) + u * u * u * (248.0 / 2835.0))
    } else {
        let k = s.sqrt();
        let sc = sec(k * d);
        (d * sc * sc - tan(k * d) / k) / (2.0 * s)
    }
}

/// `sec(d k)` as a function of `s = k^2`.
pub fn sec_sqrt(s: Complex64, d: f64) -> Complex64 {
    sec(s.sqrt() * d)
}

/// `cos(t sqrt(s))`, entire in `s`.
pub fn cos_sqrt(s: Complex64, t: f64) -> Complex64 {
    (s.sqrt() * t).cos()
}

/// `t * sinc(t sqrt(s))` = `sin(t sqrt(s)) / sqrt(s)`, entire in `s`.
pub fn sin_sqrt_over(s: Complex64, t: f64) -> Complex64 {
    t * sinc(s.sqrt() * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn agree_with_naive_forms() {
        for &u in &[c(0.3, 0.2), c(-1.1, 0.7), c(2.0, -0.4), c(0.5, 0.0), c(-4.0, -3.0)] {
            assert!(close(cot(u), u.cos() / u.sin(), 1e-13));
            assert!(close(csc(u), 1.0 / u.sin(), 1e-13));
            assert!(close(tan(u), u.sin() / u.cos(), 1e-13));
            assert!(close(sec(u), 1.0 / u.cos(), 1e-13));
        }
    }

    #[test]
    fn small_arguments_keep_relative_accuracy() {
        for x in [1e-3f64, 1e-6, 1e-9] {
            let coth = 1.0 / x.tanh();
            assert!((cot(c(0.0, x)) - c(0.0, -coth)).norm() <= 4e-16 * coth);
            assert!((csc(c(x, 0.0)) - c(1.0 / x.sin(), 0.0)).norm() <= 4e-16 / x);
        }
    }

    #[test]
    fn large_imaginary_limits() {
        let u = c(1.0, 1e4);
        assert!(close(cot(u), -I, 1e-15));
        assert!(csc(u).norm() < 1e-300);
        assert!(close(tan(u), I, 1e-15));
        assert!(close(cot(u.conj()), I, 1e-15));
    }

    #[test]
    fn tan_ratio_series_matches_closed_form() {
        let d = 0.7;
        for &s in &[c(1e-4, 2e-4), c(-2e-3, 1e-3), c(1.5e-3, 0.0)] {
            let k = s.sqrt();
            assert!(close(tan_ratio(s, d), tan(k * d) / k, 1e-13));
            let h = 1e-6;
            let fd = (tan_ratio(s + h, d) - tan_ratio(s - h, d)) / (2.0 * h);
            assert!(close(tan_ratio_ds(s, d), fd, 1e-7));
        }
    }

    #[test]
    fn tan_ratio_ds_across_threshold() {
        let d = 1.0;
        let a = tan_ratio_ds(c(0.99e-3, 0.0), d);
        let b = tan_ratio_ds(c(1.01e-3, 0.0), d);
        assert!((a - b).norm() < 1e-5);
    }
}
