//! Fixed-node quadrature helpers for smooth one-dimensional integrands.

use num_complex::Complex64;

/// Composite Simpson rule on [a, b] with `panels` subintervals
/// (rounded up to even).  Intended for smooth integrands; callers pick
/// the panel count from the oscillation scale of the integrand.
pub fn simpson<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, panels: usize) -> Complex64 {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + i as f64 * h);
    }
    acc * (h / 3.0)
}

/// Real-valued composite Simpson rule.  Only test oracles call this;
/// the runtime integration paths go through the complex rule.
#[cfg_attr(not(test), allow(dead_code))]
pub fn simpson_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    simpson(|x| Complex64::new(f(x), 0.0), a, b, panels).re
}
