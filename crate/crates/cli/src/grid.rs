//! Sweep axes, fixed bindings and the points they expand to.

use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Alpha,
    Alpha1,
    Alpha2,
    Phi,
    D,
    GammaT,
    AlphaPrime,
}

impl Axis {
    pub const ALL: [Axis; 7] =
        [Axis::Alpha, Axis::Alpha1, Axis::Alpha2, Axis::Phi, Axis::D, Axis::GammaT, Axis::AlphaPrime];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Alpha => "alpha",
            Axis::Alpha1 => "alpha1",
            Axis::Alpha2 => "alpha2",
            Axis::Phi => "phi",
            Axis::D => "d",
            Axis::GammaT => "gamma_t",
            Axis::AlphaPrime => "alpha_prime",
        }
    }

    fn index(self) -> usize {
        Axis::ALL.iter().position(|&a| a == self).expect("listed")
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| CliError::InvalidGrid(format!("unknown axis '{s}'")))
    }
}

/// Parses a number, optionally a multiple or fraction of pi:
/// `0.5`, `pi`, `-pi/2`, `2pi`, `3*pi/4`.
pub fn parse_value(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| format!("not a number: '{s}'"))?,
        Some(at) => {
            let coef = t[..at].trim().trim_end_matches('*').trim();
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad coefficient in '{s}'"))?,
            };
            let rest = t[at + 2..].trim();
            let den = if rest.is_empty() {
                1.0
            } else {
                let d = rest.strip_prefix('/').ok_or_else(|| format!("expected '/' after pi in '{s}'"))?;
                d.trim().parse::<f64>().map_err(|_| format!("bad denominator in '{s}'"))?
            };
            coef * std::f64::consts::PI / den
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not finite: '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisRange {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisRange {
    pub fn new(axis: Axis, start: f64, stop: f64, step: f64) -> Result<Self, CliError> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(CliError::InvalidGrid(format!("{axis}: step must be positive, got {step}")));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(CliError::InvalidGrid(format!("{axis}: bounds must be finite")));
        }
        if start > stop {
            return Err(CliError::InvalidGrid(format!("{axis}: empty range {start} > {stop}")));
        }
        Ok(Self { axis, start, stop, step })
    }

    /// `start + i * step` for every `i` that stays within `stop` (up to
    /// rounding of the step count).
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for AxisRange {
    type Err = CliError;

    /// `AXIS=START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::InvalidGrid(format!("'{s}': {why}"));
        let (name, range) = s.split_once('=').ok_or_else(|| bad("expected AXIS=START:STOP:STEP"))?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected three ':'-separated numbers"));
        }
        let num = |p: &str| parse_value(p).map_err(|e| bad(&e));
        AxisRange::new(name.parse()?, num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

/// Parameter values at one grid point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    values: [Option<f64>; 7],
}

impl Point {
    pub fn get(&self, axis: Axis) -> Option<f64> {
        self.values[axis.index()]
    }

    fn set(&mut self, axis: Axis, v: f64) {
        self.values[axis.index()] = Some(v);
    }

    pub fn require(&self, axis: Axis) -> Result<f64, CliError> {
        self.get(axis).ok_or_else(|| CliError::InvalidArgument(format!("missing --{}", axis.name().replace('_', "-"))))
    }
}

/// Up to two swept axes plus fixed bindings for the other parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepGrid {
    axes: Vec<AxisRange>,
    fixed: Vec<(Axis, f64)>,
}

impl SweepGrid {
    pub fn new(axes: Vec<AxisRange>, fixed: Vec<(Axis, f64)>) -> Result<Self, CliError> {
        if axes.len() > 2 {
            return Err(CliError::InvalidGrid(format!("at most two axes, got {}", axes.len())));
        }
        let mut seen: Vec<Axis> = Vec::new();
        for axis in axes.iter().map(|r| r.axis).chain(fixed.iter().map(|f| f.0)) {
            if seen.contains(&axis) {
                return Err(CliError::InvalidGrid(format!("{axis} given more than once")));
            }
            seen.push(axis);
        }
        if seen.contains(&Axis::D) && seen.contains(&Axis::GammaT) {
            return Err(CliError::InvalidArgument("d and gamma_t are mutually exclusive".into()));
        }
        if seen.contains(&Axis::Alpha) && (seen.contains(&Axis::Alpha1) || seen.contains(&Axis::Alpha2)) {
            return Err(CliError::InvalidArgument("alpha sets both amplitudes; drop alpha1/alpha2".into()));
        }
        Ok(Self { axes, fixed })
    }

    pub fn axes(&self) -> &[AxisRange] {
        &self.axes
    }

    pub fn fixed(&self) -> &[(Axis, f64)] {
        &self.fixed
    }

    /// Rejects parameters the command does not use.
    pub fn restrict_to(&self, allowed: &[Axis], command: &str) -> Result<(), CliError> {
        for r in &self.axes {
            if !allowed.contains(&r.axis) {
                return Err(CliError::InvalidGrid(format!("{command} cannot sweep {}", r.axis)));
            }
        }
        for (axis, _) in &self.fixed {
            if !allowed.contains(axis) {
                return Err(CliError::InvalidArgument(format!("{command} does not use {axis}")));
            }
        }
        Ok(())
    }

    /// Grid points in row-major order: the first axis varies slowest.
    pub fn points(&self) -> Vec<Point> {
        let mut base = Point::default();
        for &(axis, v) in &self.fixed {
            base.set(axis, v);
        }
        let mut points = vec![base];
        for r in &self.axes {
            let vals = r.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    vals.iter().map(move |&v| {
                        let mut q = p;
                        q.set(r.axis, v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}
