//! Named boundary metrics and fill-ins used by the command line and tests.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fillins::schwarzschild_band;
use crate::geometry::{AxisymmetricMetric, RadialDomain};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Preset {
    /// Flat ball of radius `radius`; boundary the round sphere.
    Round { radius: f64 },
    /// Schwarzschild band of mass `mass` out to area radius `outer`.
    Schwarzschild { mass: f64, outer: f64 },
    /// Geodesic ball of radius `r0` in the unit 3-sphere.
    Cap { r0: f64 },
    /// `f(s) = sin s (1 − d sin⁴ s)`: a sphere pinched at the equator, with
    /// negative Gauss curvature there once `d` is large enough. No fill-in is
    /// attached.
    Dumbbell { depth: f64 },
}

impl Preset {
    /// Parses `round:ρ`, `schwarzschild:m,R`, `cap:r0` or `dumbbell:d`.
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| {
                    a.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad number {a:?} in preset {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        let arg = |i: usize, default: f64| nums.get(i).copied().unwrap_or(default);
        let preset = match name {
            "round" => Self::Round { radius: arg(0, 1.0) },
            "schwarzschild" => Self::Schwarzschild { mass: arg(0, 1.0), outer: arg(1, 3.0) },
            "cap" => Self::Cap { r0: arg(0, 1.0) },
            "dumbbell" => Self::Dumbbell { depth: arg(0, 0.6) },
            _ => return Err(Error::InvalidParameter(format!("unknown preset {name:?}"))),
        };
        preset.check()?;
        Ok(preset)
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Self::Round { radius } => radius > 0.0,
            Self::Schwarzschild { mass, outer } => mass > 0.0 && outer > 2.0 * mass,
            Self::Cap { r0 } => r0 > 0.0 && r0 < PI,
            Self::Dumbbell { depth } => (0.0..1.0).contains(&depth),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("preset parameters out of range: {self:?}")))
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::Round { radius } => format!("round:{radius}"),
            Self::Schwarzschild { mass, outer } => format!("schwarzschild:{mass},{outer}"),
            Self::Cap { r0 } => format!("cap:{r0}"),
            Self::Dumbbell { depth } => format!("dumbbell:{depth}"),
        }
    }

    /// Every preset in its default configuration.
    pub fn all() -> [Self; 4] {
        [
            Self::Round { radius: 1.0 },
            Self::Schwarzschild { mass: 1.0, outer: 3.0 },
            Self::Cap { r0: 1.0 },
            Self::Dumbbell { depth: 0.6 },
        ]
    }

    /// The boundary 2-metric on `n` nodes.
    pub fn boundary_metric(&self, n: usize) -> Result<AxisymmetricMetric> {
        self.check()?;
        match *self {
            Self::Round { radius } => AxisymmetricMetric::round(radius, n),
            Self::Schwarzschild { outer, .. } => AxisymmetricMetric::round(outer, n),
            Self::Cap { r0 } => AxisymmetricMetric::round(r0.sin(), n),
            Self::Dumbbell { depth } => {
                AxisymmetricMetric::from_fn(n, PI, |s| s.sin() * (1.0 - depth * s.sin().powi(4)))
            }
        }
    }

    /// The fill-in carried by the preset, if any, on `n` nodes.
    pub fn domain(&self, n: usize) -> Result<Option<RadialDomain>> {
        self.check()?;
        Ok(match *self {
            Self::Round { radius } => Some(RadialDomain::flat_ball(radius, n)?),
            Self::Schwarzschild { mass, outer } => Some(schwarzschild_band(mass, outer, n)?),
            Self::Cap { r0 } => Some(RadialDomain::sphere_cap(r0, n)?),
            Self::Dumbbell { .. } => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for p in Preset::all() {
            assert_eq!(Preset::parse(&p.name()).unwrap(), p);
        }
        assert!(Preset::parse("schwarzschild:1,1.5").is_err());
        assert!(Preset::parse("torus:1").is_err());
    }

    #[test]
    fn dumbbell_has_negative_curvature() {
        let m = Preset::Dumbbell { depth: 0.6 }.boundary_metric(512).unwrap();
        assert!(m.min_gauss_curvature().1 < 0.0);
    }
}
