use std::io::{self, Write};

use serde::Serialize;

use super::Phase;
use crate::algebra::Representation;
use crate::format::num;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    /// Effective Hamiltonian at the sample.
    pub h: f64,
}

/// Time series of one causal trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub representation: Representation,
    pub dt: f64,
    pub method: &'static str,
    pub samples: Vec<Sample>,
}

impl TrajectoryRecord {
    pub(crate) fn new(representation: Representation, dt: f64) -> Self {
        Self {
            representation,
            dt,
            method: "rk4",
            samples: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, t: f64, y: Phase, h: f64) {
        self.samples.push(Sample {
            t,
            x: y.x,
            p: y.p,
            h,
        });
    }

    /// Largest `|H(t) - H(0)| / max(|H(0)|, 1)`.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let scale = first.h.abs().max(1.0);
        self.samples
            .iter()
            .map(|s| (s.h - first.h).abs() / scale)
            .fold(0.0, f64::max)
    }

    /// Largest excursion from the initial point in either coordinate.
    pub fn max_displacement(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| (s.x - first.x).abs().max((s.p - first.p).abs()))
            .fold(0.0, f64::max)
    }

    /// Linear interpolation of `(x, p)` at `t`, clamped to the record.
    pub fn at(&self, t: f64) -> Phase {
        let s = &self.samples;
        let i = s.partition_point(|v| v.t < t);
        if i == 0 {
            return Phase {
                x: s[0].x,
                p: s[0].p,
            };
        }
        if i == s.len() {
            let l = s[s.len() - 1];
            return Phase { x: l.x, p: l.p };
        }
        let (a, b) = (s[i - 1], s[i]);
        let w = (t - a.t) / (b.t - a.t);
        Phase {
            x: a.x + w * (b.x - a.x),
            p: a.p + w * (b.p - a.p),
        }
    }
}

/// CSV with columns `t,x,p,H`.
pub fn write_trajectory_csv(out: &mut impl Write, rec: &TrajectoryRecord) -> io::Result<()> {
    writeln!(out, "# representation: {}", rec.representation)?;
    writeln!(out, "# method: {} dt={}", rec.method, num(rec.dt))?;
    writeln!(out, "t,x,p,H")?;
    for s in &rec.samples {
        writeln!(out, "{},{},{},{}", num(s.t), num(s.x), num(s.p), num(s.h))?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivergencePoint {
    pub t: f64,
    pub dx: f64,
    pub dp: f64,
}

/// Difference between the configuration- and momentum-space trajectories.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymplecticReport {
    pub max_dx: f64,
    pub max_dp: f64,
    pub series: Vec<DivergencePoint>,
}

impl SymplecticReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Compares two trajectories on the first record's times, resampling the
/// second by linear interpolation when the time grids differ.
pub fn symplectic_break(
    config: &TrajectoryRecord,
    momentum: &TrajectoryRecord,
) -> SymplecticReport {
    let same_grid = config.samples.len() == momentum.samples.len()
        && config
            .samples
            .iter()
            .zip(&momentum.samples)
            .all(|(a, b)| a.t == b.t);
    let series: Vec<DivergencePoint> = config
        .samples
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let b = if same_grid {
                Phase {
                    x: momentum.samples[i].x,
                    p: momentum.samples[i].p,
                }
            } else {
                momentum.at(a.t)
            };
            DivergencePoint {
                t: a.t,
                dx: a.x - b.x,
                dp: a.p - b.p,
            }
        })
        .collect();
    SymplecticReport {
        max_dx: series.iter().map(|d| d.dx.abs()).fold(0.0, f64::max),
        max_dp: series.iter().map(|d| d.dp.abs()).fold(0.0, f64::max),
        series,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(points: &[(f64, f64, f64)]) -> TrajectoryRecord {
        let mut r = TrajectoryRecord::new(Representation::Configuration, 0.5);
        for &(t, x, p) in points {
            r.push(t, Phase { x, p }, 0.0);
        }
        r
    }

    #[test]
    fn identical_inputs_do_not_diverge() {
        let a = rec(&[(0.0, 1.0, 2.0), (0.5, 1.5, 2.5)]);
        let r = symplectic_break(&a, &a);
        assert_eq!((r.max_dx, r.max_dp), (0.0, 0.0));
    }

    #[test]
    fn resampling_interpolates() {
        let a = rec(&[(0.0, 0.0, 0.0), (0.25, 0.0, 0.0), (0.5, 0.0, 0.0)]);
        let b = rec(&[(0.0, 0.0, 0.0), (0.5, 1.0, -2.0)]);
        let r = symplectic_break(&a, &b);
        assert_eq!(
            r.series[1],
            DivergencePoint {
                t: 0.25,
                dx: -0.5,
                dp: 1.0
            }
        );
        assert_eq!((r.max_dx, r.max_dp), (1.0, 2.0));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["series"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn csv_layout() {
        let a = rec(&[(0.0, 1.0, 2.0)]);
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("t,x,p,H\n0.0000000000000000e0,1.0000000000000000e0,"));
    }
}
