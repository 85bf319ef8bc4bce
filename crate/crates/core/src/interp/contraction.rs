use alloc::format;

use crate::{Error, Result};

/// Closed-form Edelstein contractions on the real line.
///
/// Every member other than `Linear { k }` with `k >= 1` satisfies
/// `|s(x) - s(y)| < |x - y|` for all `x != y`. The three saturating kinds
/// have slope 1 at the origin, so they admit no uniform ratio below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contraction {
    /// `k * x`, `0 <= k < 1`.
    Linear { k: f64 },
    /// `scale * tanh(x / scale)`.
    Tanh { scale: f64 },
    /// `scale * atan(x / scale)`.
    Arctan { scale: f64 },
    /// `x / (1 + |x| / scale)`; with `scale = 1` this is `x / (1 + |x|)`.
    BoundedRational { scale: f64 },
}

impl Contraction {
    pub const ZERO: Contraction = Contraction::Linear { k: 0.0 };

    pub fn linear(k: f64) -> Result<Self> {
        let c = Contraction::Linear { k };
        c.check()?;
        Ok(c)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Contraction::Linear { k } => k * x,
            Contraction::Tanh { scale } => scale * libm::tanh(x / scale),
            Contraction::Arctan { scale } => scale * libm::atan(x / scale),
            Contraction::BoundedRational { scale } => x / (1.0 + x.abs() / scale),
        }
    }

    /// Global Lipschitz constant (1 for the saturating kinds).
    pub fn lipschitz_bound(&self) -> f64 {
        match *self {
            Contraction::Linear { k } => k.abs(),
            _ => 1.0,
        }
    }

    /// `sup |s(x)|` over the reals, `None` when unbounded.
    pub fn sup_abs(&self) -> Option<f64> {
        match *self {
            Contraction::Linear { k: 0.0 } => Some(0.0),
            Contraction::Linear { .. } => None,
            Contraction::Tanh { scale } | Contraction::BoundedRational { scale } => Some(scale),
            Contraction::Arctan { scale } => Some(scale * core::f64::consts::FRAC_PI_2),
        }
    }

    /// `sup |s(x)|` over `|x| <= radius`.
    pub fn sup_abs_on(&self, radius: f64) -> f64 {
        // all members are odd and non-decreasing
        self.eval(radius.abs()).abs()
    }

    /// Checks catalog parameters; `Linear` needs `0 <= k < 1`, the others a
    /// positive finite scale.
    pub fn check(&self) -> Result<()> {
        match *self {
            Contraction::Linear { k } if (0.0..1.0).contains(&k) => Ok(()),
            Contraction::Linear { k } => Err(Error::NotEdelstein(format!(
                "linear(k = {k}) requires 0 <= k < 1"
            ))),
            Contraction::Tanh { scale }
            | Contraction::Arctan { scale }
            | Contraction::BoundedRational { scale } => {
                if scale.is_finite() && scale > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "{} scale must be positive and finite, got {scale}",
                        self.name()
                    )))
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Contraction::Linear { .. } => "linear",
            Contraction::Tanh { .. } => "tanh",
            Contraction::Arctan { .. } => "arctan",
            Contraction::BoundedRational { .. } => "bounded_rational",
        }
    }
}
