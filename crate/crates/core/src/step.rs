use std::io::Write;

use serde::{Deserialize, Serialize};

/// Right-continuous piecewise-constant function on `[0, ∞)`.
///
/// Takes `initial_value` on `[0, t_1)` and `values[k]` on `[t_k, t_{k+1})`;
/// flat after the last jump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    jump_times: Vec<f64>,
    values: Vec<f64>,
    initial_value: f64,
}

impl StepFunction {
    /// # Panics
    /// If the lengths differ or the jump times are not strictly ascending.
    pub fn new(jump_times: Vec<f64>, values: Vec<f64>, initial_value: f64) -> Self {
        assert_eq!(jump_times.len(), values.len(), "one value per jump time");
        assert!(
            jump_times.windows(2).all(|w| w[0] < w[1]),
            "jump times must be strictly ascending"
        );
        StepFunction {
            jump_times,
            values,
            initial_value,
        }
    }

    pub fn constant(value: f64) -> Self {
        StepFunction::new(Vec::new(), Vec::new(), value)
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.jump_times.partition_point(|&u| u <= t) {
            0 => self.initial_value,
            k => self.values[k - 1],
        }
    }

    /// Value just before `t`.
    pub fn left_limit(&self, t: f64) -> f64 {
        match self.jump_times.partition_point(|&u| u < t) {
            0 => self.initial_value,
            k => self.values[k - 1],
        }
    }

    pub fn last_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(self.initial_value)
    }

    /// `(time, value)` pairs starting at `t = 0`, one per jump, keeping only
    /// jumps at or before `until` and closing with the value at `until`.
    pub fn points(&self, until: Option<f64>) -> Vec<(f64, f64)> {
        let mut pts = vec![(0.0, self.eval(0.0))];
        for (&t, &v) in self.jump_times.iter().zip(&self.values) {
            if until.is_some_and(|end| t > end) {
                break;
            }
            if t > 0.0 {
                pts.push((t, v));
            }
        }
        if let Some(end) = until {
            if pts.last().is_some_and(|&(t, _)| t < end) {
                pts.push((end, self.eval(end)));
            }
        }
        pts
    }

    /// `time,value` CSV including `t = 0` and every jump time.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "time,value")?;
        for (t, v) in self.points(None) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Exact `∫_0^tau f(t) dt` for a step function.
pub fn area_under_step(f: &StepFunction, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let mut area = 0.0;
    let mut left = 0.0;
    let mut current = f.initial_value;
    for (&t, &v) in f.jump_times.iter().zip(&f.values) {
        if t >= tau {
            break;
        }
        // Jumps at t <= 0 just reset the starting value.
        if t > left {
            area += current * (t - left);
            left = t;
        }
        current = v;
    }
    area + current * (tau - left)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_area() {
        assert_eq!(area_under_step(&StepFunction::constant(1.0), 5.0), 5.0);
    }

    #[test]
    fn single_step_area() {
        let f = StepFunction::new(vec![2.0], vec![1.0], 0.0);
        assert_eq!(area_under_step(&f, 5.0), 3.0);
        assert_eq!(area_under_step(&f, 2.0), 0.0);
        assert_eq!(area_under_step(&f, 0.0), 0.0);
    }

    #[test]
    fn right_continuity_and_left_limits() {
        let f = StepFunction::new(vec![1.0, 3.0], vec![0.5, 0.25], 1.0);
        assert_eq!(f.eval(0.999), 1.0);
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.left_limit(1.0), 1.0);
        assert_eq!(f.left_limit(3.0), 0.5);
        assert_eq!(f.eval(100.0), 0.25);
    }

    #[test]
    fn jump_at_zero() {
        let f = StepFunction::new(vec![0.0, 2.0], vec![1.0, 3.0], 0.0);
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(area_under_step(&f, 4.0), 2.0 + 6.0);
        assert_eq!(f.points(None), vec![(0.0, 1.0), (2.0, 3.0)]);
    }

    #[test]
    fn clipped_points() {
        let f = StepFunction::new(vec![2.0, 5.0], vec![1.0, 2.0], 0.0);
        assert_eq!(f.points(Some(4.0)), vec![(0.0, 0.0), (2.0, 1.0), (4.0, 1.0)]);
        assert_eq!(f.points(Some(5.0)), vec![(0.0, 0.0), (2.0, 1.0), (5.0, 2.0)]);
    }

    #[test]
    fn csv_export() {
        let f = StepFunction::new(vec![2.0], vec![0.5], 1.0);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "time,value\n0,1\n2,0.5\n");
    }
}
