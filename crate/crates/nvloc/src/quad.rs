//! Adaptive Gauss–Kronrod quadrature for small vector-valued integrands.
//!
//! G7/K15 embedded pair with worst-segment bisection, in the QUADPACK
//! spirit. Written for the smooth-to-mildly-singular kernels of the
//! wire-field integrals; segment counts are therefore tiny and a plain
//! max-scan over segments replaces a priority queue.

use crate::error::{Error, Result};

// Kronrod-15 abscissae on [0, 1] side of the symmetric rule; every other
// node (odd indices) belongs to the embedded Gauss-7 rule.
const XK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

const WK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

// Gauss-7 weights for nodes XK[1], XK[3], XK[5], XK[7].
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

#[derive(Debug, Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
}

fn gk15<const N: usize>(f: &mut impl FnMut(f64) -> [f64; N], a: f64, b: f64) -> ([f64; N], f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    for (j, (&x, &wk)) in XK.iter().zip(WK.iter()).enumerate() {
        let (lo, hi) = (f(mid - half * x), f(mid + half * x));
        let pair_weight = if x == 0.0 { 1.0 } else { 2.0 };
        for n in 0..N {
            let s = if x == 0.0 { lo[n] } else { lo[n] + hi[n] };
            kronrod[n] += wk * s;
            if j % 2 == 1 {
                gauss[n] += WG[j / 2] * s;
            }
            let _ = pair_weight;
        }
    }
    let mut err: f64 = 0.0;
    for n in 0..N {
        kronrod[n] *= half;
        gauss[n] *= half;
        err = err.max((kronrod[n] - gauss[n]).abs());
    }
    (kronrod, err)
}

/// Integrate `f` over `[a, b]` until every accumulated component error is
/// below `rel_tol` × the euclidean norm of the running integral (with an
/// absolute floor for identically-zero integrands).
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64) -> [f64; N],
    a: f64,
    b: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Result<[f64; N]> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::validation("quadrature bounds must be finite"));
    }
    if a == b {
        return Ok([0.0; N]);
    }

    let (value, error) = gk15(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];

    loop {
        let mut total = [0.0; N];
        let mut total_err = 0.0;
        let mut worst = 0;
        for (k, s) in segments.iter().enumerate() {
            for (t, v) in total.iter_mut().zip(&s.value) {
                *t += v;
            }
            total_err += s.error;
            if s.error > segments[worst].error {
                worst = k;
            }
        }
        let norm = total.iter().map(|v| v * v).sum::<f64>().sqrt();
        let target = rel_tol * norm.max(1e-300);
        if total_err <= target {
            return Ok(total);
        }
        if segments.len() >= max_segments {
            return Err(Error::QuadratureFailed {
                requested: rel_tol,
                achieved: total_err / norm.max(1e-300),
            });
        }
        let Segment { a, b, .. } = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, mid);
        let (v2, e2) = gk15(&mut f, mid, b);
        segments.push(Segment {
            a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b,
            value: v2,
            error: e2,
        });
    }
}

/// Iterated 2D integral of `f(x, z)` over `[ax, bx] × [az, bz]`.
///
/// The inner (x) integral runs at half the requested tolerance, the outer
/// (z) integral at the other half; inner failures propagate out.
pub fn integrate_2d<const N: usize>(
    f: impl Fn(f64, f64) -> [f64; N],
    ax: f64,
    bx: f64,
    az: f64,
    bz: f64,
    rel_tol: f64,
) -> Result<[f64; N]> {
    let inner_failure = std::cell::Cell::new(false);
    let outer = integrate(
        |z| {
            match integrate(|x| f(x, z), ax, bx, 0.5 * rel_tol, 1600) {
                Ok(v) => v,
                Err(_) => {
                    inner_failure.set(true);
                    [0.0; N]
                }
            }
        },
        az,
        bz,
        0.5 * rel_tol,
        800,
    )?;
    if inner_failure.get() {
        return Err(Error::QuadratureFailed {
            requested: rel_tol,
            achieved: f64::NAN,
        });
    }
    Ok(outer)
}
