//! Scalar quadrature: adaptive Simpson for production integrals and composite
//! Simpson as an independent cross-check path.

/// Composite Simpson's rule with `panels` equal subintervals (`panels` must be
/// even and positive).
pub fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels > 0 && panels % 2 == 0, "panels must be even");
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let x = a + h * i as f64;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    estimate: f64,
}

fn simpson_estimate(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson with absolute tolerance `eps` and a recursion depth cap.
/// At the cap the current Richardson-extrapolated estimate is accepted.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, max_depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let panel = Panel {
        a,
        b,
        fa,
        fm,
        fb,
        estimate: simpson_estimate(fa, fm, fb, a, b),
    };
    refine_panel(&f, panel, eps, max_depth)
}

fn refine_panel(f: &impl Fn(f64) -> f64, panel: Panel, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (panel.a + panel.b);
    let lm = 0.5 * (panel.a + m);
    let rm = 0.5 * (m + panel.b);
    let (flm, frm) = (f(lm), f(rm));
    let left = Panel {
        a: panel.a,
        b: m,
        fa: panel.fa,
        fm: flm,
        fb: panel.fm,
        estimate: simpson_estimate(panel.fa, flm, panel.fm, panel.a, m),
    };
    let right = Panel {
        a: m,
        b: panel.b,
        fa: panel.fm,
        fm: frm,
        fb: panel.fb,
        estimate: simpson_estimate(panel.fm, frm, panel.fb, m, panel.b),
    };
    let refined = left.estimate + right.estimate;
    let delta = refined - panel.estimate;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        refined + delta / 15.0
    } else {
        refine_panel(f, left, 0.5 * eps, depth - 1) + refine_panel(f, right, 0.5 * eps, depth - 1)
    }
}
