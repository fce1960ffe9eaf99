use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(w) - 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    let half = (0.5 * y).sin();
    Complex64::new(
        x.exp_m1() * y.cos() - 2.0 * half * half,
        x.exp() * y.sin(),
    )
}

/// `(exp(w) - 1) / w`, equal to 1 at `w = 0`.
pub fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 1e-8 {
        1.0 + 0.5 * w
    } else {
        expm1(w) / w
    }
}

/// `x^(-s)` for real `x > 0`.
pub fn pow_neg(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}
