use core::f64::consts::{FRAC_PI_2, PI};

/// A Lipschitz function on the interval `I` with exact sup-norm and
/// Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarFn {
    Constant(f64),
    /// `slope * t + intercept`
    Affine { slope: f64, intercept: f64 },
    /// `amplitude * sin(frequency * t + phase)`
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
}

impl ScalarFn {
    pub const ZERO: ScalarFn = ScalarFn::Constant(0.0);

    /// The affine function through `(t0, y0)` and `(t1, y1)`.
    pub fn affine_through(t0: f64, y0: f64, t1: f64, y1: f64) -> Self {
        let slope = (y1 - y0) / (t1 - t0);
        ScalarFn::Affine {
            slope,
            intercept: y0 - slope * t0,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            ScalarFn::Constant(c) => c,
            ScalarFn::Affine { slope, intercept } => slope * t + intercept,
            ScalarFn::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude * libm::sin(frequency * t + phase),
        }
    }

    /// `sup |g(t)|` over `[lo, hi]`.
    pub fn sup_norm(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            ScalarFn::Constant(c) => c.abs(),
            ScalarFn::Affine { .. } => self.eval(lo).abs().max(self.eval(hi).abs()),
            ScalarFn::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                let (x0, x1) = phase_range(frequency, phase, lo, hi);
                amplitude.abs() * max_abs_periodic(x0, x1, FRAC_PI_2, libm::sin)
            }
        }
    }

    /// Smallest Lipschitz constant of `g` on `[lo, hi]`.
    pub fn lipschitz_bound(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            ScalarFn::Constant(_) => 0.0,
            ScalarFn::Affine { slope, .. } => slope.abs(),
            ScalarFn::Sine {
                amplitude,
                frequency,
                phase,
            } => {
                let (x0, x1) = phase_range(frequency, phase, lo, hi);
                (amplitude * frequency).abs() * max_abs_periodic(x0, x1, 0.0, libm::cos)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            ScalarFn::Constant(c) => c.is_finite(),
            ScalarFn::Affine { slope, intercept } => slope.is_finite() && intercept.is_finite(),
            ScalarFn::Sine {
                amplitude,
                frequency,
                phase,
            } => amplitude.is_finite() && frequency.is_finite() && phase.is_finite(),
        }
    }
}

fn phase_range(frequency: f64, phase: f64, lo: f64, hi: f64) -> (f64, f64) {
    let a = frequency * lo + phase;
    let b = frequency * hi + phase;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Max of `|g|` on `[x0, x1]` for `g` in {sin, cos}, whose `|g| = 1` peaks
/// sit at `peak + k*pi`.
fn max_abs_periodic(x0: f64, x1: f64, peak: f64, g: fn(f64) -> f64) -> f64 {
    let k = libm::ceil((x0 - peak) / PI);
    if peak + k * PI <= x1 {
        1.0
    } else {
        g(x0).abs().max(g(x1).abs())
    }
}
